//! Alternating forms on a coframe of dimension at most 7.
//!
//! A monomial `e^{i1} ∧ … ∧ e^{ik}` with `i1 < … < ik` is stored as the
//! bitmask with bits `i1..ik` set (0-indexed). Forms are sparse maps from
//! masks to coefficients with zero coefficients removed.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::Matrix;
use crate::scalar::{Scalar, Q};

/// Largest supported dimension.
pub const MAX_DIM: usize = 7;

/// Sorted generator indices of a monomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub u8);

impl MultiIndex {
    pub fn from_indices(idx: &[usize]) -> Option<(MultiIndex, i32)> {
        let mut mask = 0u8;
        let mut sign = 1;
        for &i in idx {
            let bit = 1u8 << i;
            if mask & bit != 0 {
                return None;
            }
            // moving e^i to its sorted place past the larger ones already present
            if (mask >> i).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Some((MultiIndex(mask), sign))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..8).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    /// Digit string with 1-indexed generators, e.g. `"124"`.
    pub fn digits(self) -> String {
        self.indices().iter().map(|i| char::from(b'1' + *i as u8)).collect()
    }

    pub fn parse_digits(s: &str) -> Option<(MultiIndex, i32)> {
        let mut idx = Vec::new();
        for ch in s.chars() {
            let d = ch.to_digit(10)? as usize;
            if d == 0 || d > MAX_DIM {
                return None;
            }
            idx.push(d - 1);
        }
        MultiIndex::from_indices(&idx)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.digits())
    }
}

/// Sign of `e^a ∧ e^b` relative to `e^{a|b}`, or 0 when they overlap.
pub fn wedge_sign(a: u8, b: u8) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All masks of the given degree in `dim` generators, in increasing order.
pub fn masks_of_degree(dim: usize, degree: usize) -> Vec<u8> {
    (0u16..(1u16 << dim))
        .map(|m| m as u8)
        .filter(|m| m.count_ones() as usize == degree)
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Homogeneous alternating form.
#[derive(Clone, PartialEq)]
pub struct Form<S> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<u8, S>,
}

impl<S: Scalar> Form<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        Form {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: S) -> Self {
        let mut f = Form::zero(dim, 0);
        f.add_term(0, c);
        f
    }

    /// The generator `e^i` (0-indexed).
    pub fn generator(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut f = Form::zero(dim, 1);
        f.add_term(1 << i, S::one());
        f
    }

    /// `c · e^{i1} ∧ … ∧ e^{ik}` for 0-indexed `idx` in any order.
    pub fn monomial(dim: usize, idx: &[usize], c: S) -> Self {
        assert!(idx.iter().all(|&i| i < dim), "index out of range");
        let mut f = Form::zero(dim, idx.len());
        if let Some((m, s)) = MultiIndex::from_indices(idx) {
            f.add_term(m.0, if s > 0 { c } else { -c });
        }
        f
    }

    /// Sum of signed monomials written with 1-indexed digit strings,
    /// e.g. `Form::parse_terms(6, &[(1, "16"), (-1, "25")])`.
    pub fn from_digits(dim: usize, terms: &[(i64, &str)]) -> Self {
        let degree = terms.first().map_or(0, |t| t.1.len());
        let mut f = Form::zero(dim, degree);
        for &(c, digits) in terms {
            let idx: Vec<usize> = digits
                .chars()
                .map(|ch| ch.to_digit(10).expect("digit") as usize - 1)
                .collect();
            f = f + Form::monomial(dim, &idx, S::from_i64(c));
        }
        f
    }

    /// 1-form with the given coefficient vector.
    pub fn from_covector(coeffs: &[S]) -> Self {
        let mut f = Form::zero(coeffs.len(), 1);
        for (i, c) in coeffs.iter().enumerate() {
            f.add_term(1 << i, c.clone());
        }
        f
    }

    /// Form whose coefficients on `masks_of_degree(dim, degree)` are `v`.
    pub fn from_vector(dim: usize, degree: usize, v: &[S]) -> Self {
        let masks = masks_of_degree(dim, degree);
        assert_eq!(masks.len(), v.len());
        let mut f = Form::zero(dim, degree);
        for (m, c) in masks.into_iter().zip(v) {
            f.add_term(m, c.clone());
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &S)> {
        self.coeffs.iter().map(|(m, c)| (MultiIndex(*m), c))
    }

    pub fn coeff(&self, mask: u8) -> S {
        self.coeffs.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficient of `e^{i1} ∧ … ∧ e^{ik}` for 0-indexed `idx` in any order
    /// (the value of the form on `e_{i1}, …, e_{ik}`).
    pub fn component(&self, idx: &[usize]) -> S {
        if idx.len() != self.degree {
            return S::zero();
        }
        match MultiIndex::from_indices(idx) {
            None => S::zero(),
            Some((m, s)) => {
                let c = self.coeff(m.0);
                if s > 0 {
                    c
                } else {
                    -c
                }
            }
        }
    }

    /// Dense coefficient vector on `masks_of_degree(dim, degree)`.
    pub fn to_vector(&self) -> Vec<S> {
        masks_of_degree(self.dim, self.degree)
            .into_iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn add_term(&mut self, mask: u8, c: S) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        debug_assert!((mask as u16) < (1u16 << self.dim));
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&mask) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.coeffs.insert(mask, s);
                }
            }
            None => {
                self.coeffs.insert(mask, c);
            }
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut f = Form::zero(self.dim, self.degree);
        for (m, c) in &self.coeffs {
            f.add_term(*m, c.clone() * s.clone());
        }
        f
    }

    pub fn map<T: Scalar>(&self, g: impl Fn(&S) -> T) -> Form<T> {
        let mut f = Form::zero(self.dim, self.degree);
        for (m, c) in &self.coeffs {
            f.add_term(*m, g(c));
        }
        f
    }

    pub fn to_f64(&self) -> Form<f64> {
        self.map(Scalar::to_f64)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector in the generator basis.
    pub fn coeff_norm(&self) -> f64 {
        // fold from +0.0: an empty f64 sum is -0.0
        self.coeffs.values().fold(0.0, |a, c| a + c.to_f64().powi(2)).sqrt()
    }

    pub fn wedge(&self, o: &Form<S>) -> Form<S> {
        assert_eq!(self.dim, o.dim, "wedge of forms in different dimensions");
        let mut f = Form::zero(self.dim, self.degree + o.degree);
        if self.degree + o.degree > self.dim {
            return f;
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                match wedge_sign(*a, *b) {
                    0 => {}
                    1 => f.add_term(a | b, ca.clone() * cb.clone()),
                    _ => f.add_term(a | b, -(ca.clone() * cb.clone())),
                }
            }
        }
        f
    }

    pub fn power(&self, n: usize) -> Form<S> {
        let mut acc = Form::constant(self.dim, S::one());
        for _ in 0..n {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Contraction `v ⌟ self` with a vector given by its components.
    pub fn interior(&self, v: &[S]) -> Form<S> {
        assert_eq!(v.len(), self.dim);
        if self.degree == 0 {
            return Form::zero(self.dim, 0);
        }
        let mut f = Form::zero(self.dim, self.degree - 1);
        for (m, c) in &self.coeffs {
            for k in 0..self.dim {
                let bit = 1u8 << k;
                if m & bit == 0 || v[k].is_zero() {
                    continue;
                }
                let below = (m & (bit - 1)).count_ones();
                let term = c.clone() * v[k].clone();
                f.add_term(m & !bit, if below.is_multiple_of(2) { term } else { -term });
            }
        }
        f
    }

    /// Contraction with the basis vector `e_k`.
    pub fn interior_basis(&self, k: usize) -> Form<S> {
        let mut v = vec![S::zero(); self.dim];
        v[k] = S::one();
        self.interior(&v)
    }

    /// Linear substitution `e^j ↦ images[j]`, i.e. the pullback under the
    /// linear map whose transpose sends the generators to `images`.
    pub fn substitute(&self, images: &[Form<S>]) -> Form<S> {
        assert_eq!(images.len(), self.dim);
        let target = images.first().map_or(self.dim, |f| f.dim);
        let mut out = Form::zero(target, self.degree);
        for (m, c) in &self.coeffs {
            let mut term = Form::constant(target, c.clone());
            for j in MultiIndex(*m).indices() {
                term = term.wedge(&images[j]);
                if term.is_zero() {
                    break;
                }
            }
            out = out + term;
        }
        out
    }

    /// Substitution by a matrix: `e^j ↦ Σ_k m[(j, k)] e^k`.
    pub fn transform(&self, m: &Matrix<S>) -> Form<S> {
        let images: Vec<Form<S>> = (0..self.dim)
            .map(|j| Form::from_covector(m.row(j)))
            .collect();
        self.substitute(&images)
    }

    /// Derivation extension of `e^j ↦ Σ_k m[(j, k)] e^k`: each factor of a
    /// monomial is replaced in turn and the results are summed. If `m` is the
    /// matrix of an endomorphism `A` of vectors, the result is
    /// `(X_1, …, X_k) ↦ Σ_i self(…, A X_i, …)`.
    pub fn derivation(&self, m: &Matrix<S>) -> Form<S> {
        let images: Vec<Form<S>> = (0..self.dim)
            .map(|j| Form::from_covector(m.row(j)))
            .collect();
        let mut out = Form::zero(self.dim, self.degree);
        for (mask, c) in &self.coeffs {
            let idx = MultiIndex(*mask).indices();
            for p in 0..idx.len() {
                let mut term = Form::constant(self.dim, c.clone());
                for (q, &j) in idx.iter().enumerate() {
                    let factor = if q == p { images[j].clone() } else { Form::generator(self.dim, j) };
                    term = term.wedge(&factor);
                }
                out = out + term;
            }
        }
        out
    }

    /// Same coefficients viewed in a larger coframe (new generators appended).
    pub fn embed(&self, dim: usize) -> Form<S> {
        assert!(dim >= self.dim && dim <= MAX_DIM);
        Form {
            dim,
            degree: self.degree,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Restriction to the first `dim` generators; fails if the form
    /// involves any of the dropped ones.
    pub fn restrict(&self, dim: usize) -> Option<Form<S>> {
        let keep = ((1u16 << dim) - 1) as u8;
        if self.coeffs.keys().any(|m| m & !keep != 0) {
            return None;
        }
        Some(Form {
            dim,
            degree: self.degree,
            coeffs: self.coeffs.clone(),
        })
    }

    /// Components of a 1-form as a covector.
    pub fn covector(&self) -> Vec<S> {
        assert_eq!(self.degree, 1, "covector of a {}-form", self.degree);
        (0..self.dim).map(|i| self.coeff(1 << i)).collect()
    }

    /// The scalar of a 0-form or top form.
    pub fn scalar_part(&self) -> S {
        if self.degree == 0 {
            self.coeff(0)
        } else {
            assert_eq!(self.degree, self.dim, "scalar_part of a middle-degree form");
            self.coeff(((1u16 << self.dim) - 1) as u8)
        }
    }

    pub fn num_components(&self) -> usize {
        binomial(self.dim, self.degree)
    }
}

impl Form<Q> {
    pub fn from_rational_digits(dim: usize, terms: &[(Q, &str)]) -> Self {
        let degree = terms.first().map_or(0, |t| t.1.len());
        let mut f = Form::zero(dim, degree);
        for (c, digits) in terms {
            let (m, s) = MultiIndex::parse_digits(digits).expect("valid digits");
            f.add_term(m.0, if s > 0 { c.clone() } else { -c.clone() });
        }
        f
    }
}

impl<S: Scalar> std::ops::Add for Form<S> {
    type Output = Form<S>;
    fn add(mut self, o: Form<S>) -> Form<S> {
        assert_eq!(self.dim, o.dim);
        if self.is_zero() {
            return o;
        }
        if !o.is_zero() {
            assert_eq!(self.degree, o.degree, "sum of forms of different degree");
        }
        for (m, c) in o.coeffs {
            self.add_term(m, c);
        }
        self
    }
}

impl<S: Scalar> std::ops::Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> std::ops::Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, o: Form<S>) -> Form<S> {
        self + (-o)
    }
}

impl<S: Scalar> std::ops::Add for &Form<S> {
    type Output = Form<S>;
    fn add(self, o: &Form<S>) -> Form<S> {
        self.clone() + o.clone()
    }
}

impl<S: Scalar> std::ops::Sub for &Form<S> {
    type Output = Form<S>;
    fn sub(self, o: &Form<S>) -> Form<S> {
        self.clone() - o.clone()
    }
}

impl<S: fmt::Debug> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, c)| format!("{:?} e{}", c, MultiIndex(*m).digits()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn e(dim: usize, i: usize) -> Form<Q> {
        Form::generator(dim, i - 1)
    }

    #[test]
    fn antisymmetry_of_generators() {
        let a = e(6, 1).wedge(&e(6, 2));
        let b = e(6, 2).wedge(&e(6, 1));
        assert_eq!(a, Form::from_digits(6, &[(1, "12")]));
        assert_eq!(b, Form::from_digits(6, &[(-1, "12")]));
    }

    #[test]
    fn square_of_sum_has_cross_terms() {
        let w: Form<Q> = Form::from_digits(6, &[(1, "12"), (1, "34")]);
        assert_eq!(w.wedge(&w), Form::from_digits(6, &[(2, "1234")]));
    }

    #[test]
    fn cube_of_model_two_form() {
        // inversion count of (1,4,2,3,6,5) is 3
        let w: Form<Q> = Form::from_digits(6, &[(1, "14"), (1, "23"), (1, "65")]);
        assert_eq!(w.power(3), Form::from_digits(6, &[(-6, "123456")]));
    }

    #[test]
    fn degree_overflow_is_zero() {
        let a: Form<Q> = Form::from_digits(3, &[(1, "12")]);
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn contraction_signs() {
        let a: Form<Q> = Form::from_digits(6, &[(1, "12")]);
        assert_eq!(a.interior_basis(0), e(6, 2));
        let b: Form<Q> = Form::from_digits(6, &[(1, "34")]);
        assert_eq!(b.interior_basis(3), -e(6, 3));
        // eq11 omega at u = 1
        let w: Form<Q> = Form::from_digits(6, &[(1, "16"), (-1, "25"), (-2, "34")]);
        assert_eq!(w.interior_basis(3), e(6, 3).scale(&q(2, 1)));
        assert!(Form::<Q>::constant(6, q(1, 1)).interior_basis(0).is_zero());
    }

    #[test]
    fn digits_roundtrip() {
        let (m, s) = MultiIndex::parse_digits("421").unwrap();
        assert_eq!(m.digits(), "124");
        assert_eq!(s, -1);
        assert!(MultiIndex::parse_digits("11").is_none());
    }
}
