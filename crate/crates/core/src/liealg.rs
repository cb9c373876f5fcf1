//! Lie algebras presented by the differential of their dual generators,
//! written in the usual structure-equation notation such as
//! `(0,0,0,12,13,23)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::{masks_of_degree, Form, MultiIndex, MAX_DIM};
use crate::linalg::Matrix;
use crate::scalar::{q, Scalar, Q};

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("notation must be a parenthesised list, got {0:?}")]
    Brackets(String),
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("malformed term {0:?}")]
    Term(String),
    #[error("generator {index} out of range 1..={dim}")]
    IndexRange { index: usize, dim: usize },
    #[error("pair {0}{1} is not increasing")]
    PairOrder(usize, usize),
    #[error("unsupported dimension {0}")]
    Dimension(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum AlgebraError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("d^2 e^{generator} = {witness} is not zero")]
    Jacobi { generator: usize, witness: String },
    #[error("{0}")]
    Invalid(String),
}

/// Outcome of the `d∘d = 0` test.
#[derive(Clone, Debug, PartialEq)]
pub enum JacobiResult {
    Pass,
    /// First generator (1-indexed) whose second differential is nonzero.
    Fail { generator: usize, witness: Form<Q> },
}

impl JacobiResult {
    pub fn passed(&self) -> bool {
        matches!(self, JacobiResult::Pass)
    }
}

/// Precomputed differential of one monomial: `(mask, numerator, denominator)`.
type DTerm = (u8, i64, i64);

/// A Lie algebra given by `d` on the generators of its dual.
///
/// `parameter`, when set, marks a closed generator `e^p` as the differential
/// of a coordinate on which coefficients may depend: then
/// `d(f β) = f' e^p ∧ β + f dβ`.
#[derive(Clone)]
pub struct LieAlgebra {
    dim: usize,
    d1: Vec<Form<Q>>,
    name: Option<String>,
    parameter: Option<usize>,
    table: Vec<Vec<DTerm>>,
}

impl LieAlgebra {
    /// Builds the algebra from the differentials of its generators.
    /// Does not check the Jacobi identity; see [`LieAlgebra::jacobi_check`].
    pub fn new(d1: Vec<Form<Q>>) -> Result<Self, AlgebraError> {
        let dim = d1.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(ParseError::Dimension(dim).into());
        }
        for (k, f) in d1.iter().enumerate() {
            if f.dim() != dim || (!f.is_zero() && f.degree() != 2) {
                return Err(AlgebraError::Invalid(format!(
                    "d e^{} must be a 2-form in dimension {dim}",
                    k + 1
                )));
            }
        }
        let d1: Vec<Form<Q>> = d1
            .into_iter()
            .map(|f| if f.is_zero() { Form::zero(dim, 2) } else { f })
            .collect();
        let table = build_table(dim, &d1)?;
        Ok(LieAlgebra {
            dim,
            d1,
            name: None,
            parameter: None,
            table,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::new(vec![Form::zero(dim, 2); dim]).expect("abelian algebra")
    }

    pub fn parse(notation: &str) -> Result<Self, AlgebraError> {
        let entries = split_entries(notation)?;
        parse_structure_notation(notation, entries.len())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Declares generator `p` (0-indexed) to be `dx` for the coordinate that
    /// parametric coefficients depend on.
    pub fn with_parameter(mut self, p: usize) -> Result<Self, AlgebraError> {
        if p >= self.dim || !self.d1[p].is_zero() {
            return Err(AlgebraError::Invalid(format!(
                "parameter direction e^{} must be a closed generator",
                p + 1
            )));
        }
        self.parameter = Some(p);
        Ok(self)
    }

    pub fn without_parameter(mut self) -> Self {
        self.parameter = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn parameter(&self) -> Option<usize> {
        self.parameter
    }

    /// `d e^k` for the 0-indexed generator `k`.
    pub fn d_generator(&self, k: usize) -> &Form<Q> {
        &self.d1[k]
    }

    pub fn differentials(&self) -> &[Form<Q>] {
        &self.d1
    }

    /// Exterior derivative, extended from the generators by the graded
    /// Leibniz rule (plus the parameter term when a parameter is set).
    pub fn d<S: Scalar>(&self, f: &Form<S>) -> Form<S> {
        assert_eq!(f.dim(), self.dim, "form and algebra dimensions differ");
        let mut out = Form::zero(self.dim, f.degree() + 1);
        if f.degree() >= self.dim {
            return out;
        }
        for (m, c) in f.terms() {
            for &(mask, num, den) in &self.table[m.0 as usize] {
                out.add_term(mask, c.clone() * S::from_ratio(num, den));
            }
        }
        if let Some(p) = self.parameter {
            let dx = Form::generator(self.dim, p);
            let mut deriv = Form::zero(self.dim, f.degree());
            for (m, c) in f.terms() {
                deriv.add_term(m.0, c.derivative());
            }
            out = out + dx.wedge(&deriv);
        }
        out
    }

    /// Matrix of `d : Λ^k → Λ^{k+1}` on the monomial bases (constant part).
    pub fn d_matrix<S: Scalar>(&self, k: usize) -> Matrix<S> {
        let src = masks_of_degree(self.dim, k);
        let dst = masks_of_degree(self.dim, k + 1);
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (j, &s) in src.iter().enumerate() {
            for &(mask, num, den) in &self.table[s as usize] {
                let i = dst.iter().position(|&x| x == mask).expect("degree");
                m[(i, j)] = S::from_ratio(num, den);
            }
        }
        m
    }

    pub fn jacobi_check(&self) -> JacobiResult {
        for k in 0..self.dim {
            let dd = self.d(&self.d1[k]);
            if !dd.is_zero() {
                return JacobiResult::Fail {
                    generator: k + 1,
                    witness: dd,
                };
            }
        }
        JacobiResult::Pass
    }

    /// Basis of the center `{ξ : ξ ⌟ dβ = 0 for all β}`, computed exactly.
    pub fn center(&self) -> Vec<Vec<Q>> {
        let n = self.dim;
        let mut rows = Vec::new();
        for k in 0..n {
            for m in 0..n {
                let row: Vec<Q> = (0..n).map(|j| self.d1[k].component(&[j, m])).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return (0..n)
                .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
                .collect();
        }
        Matrix::from_rows(rows).nullspace()
    }

    /// True when `ξ ⌟ d e^k = 0` for every generator.
    pub fn is_central<S: Scalar>(&self, xi: &[S]) -> bool {
        self.d1
            .iter()
            .all(|f| f.map(|c| S::from_rational(c)).interior(xi).max_abs() <= 1e-12)
    }

    /// Adds a generator `η` with `dη = phi`; fails unless the result
    /// satisfies the Jacobi identity (equivalently, `phi` is closed).
    pub fn extend(&self, phi: &Form<Q>) -> Result<LieAlgebra, AlgebraError> {
        if phi.dim() != self.dim || (!phi.is_zero() && phi.degree() != 2) {
            return Err(AlgebraError::Invalid("extension form must be a 2-form".into()));
        }
        let n = self.dim + 1;
        let mut d1: Vec<Form<Q>> = self.d1.iter().map(|f| f.embed(n)).collect();
        d1.push(phi.embed(n));
        let g = LieAlgebra::new(d1)?;
        match g.jacobi_check() {
            JacobiResult::Pass => Ok(g),
            JacobiResult::Fail { generator, witness } => Err(AlgebraError::Jacobi {
                generator,
                witness: format!("{witness:?}"),
            }),
        }
    }

    /// The algebra in a new coframe `f^i = Σ_j basis[(i, j)] e^j`.
    pub fn change_basis(&self, basis: &Matrix<Q>) -> Result<LieAlgebra, AlgebraError> {
        let inv = basis
            .inverse()
            .ok_or_else(|| AlgebraError::Invalid("singular change of basis".into()))?;
        // e^j = Σ_k inv[(j, k)] f^k
        let d1 = (0..self.dim)
            .map(|i| {
                let mut df = Form::zero(self.dim, 2);
                for j in 0..self.dim {
                    df = df + self.d1[j].scale(&basis[(i, j)]);
                }
                df.transform(&inv)
            })
            .collect();
        LieAlgebra::new(d1)
    }

    /// Canonical structure-equation notation.
    pub fn notation(&self) -> String {
        let entries: Vec<String> = self.d1.iter().map(print_entry).collect();
        format!("({})", entries.join(","))
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra{}", self.notation())
    }
}

impl PartialEq for LieAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.d1 == o.d1 && self.parameter == o.parameter
    }
}

fn build_table(dim: usize, d1: &[Form<Q>]) -> Result<Vec<Vec<DTerm>>, AlgebraError> {
    let mut table = vec![Vec::new(); 1 << dim];
    for mask in 0u16..(1u16 << dim) {
        let idx = MultiIndex(mask as u8).indices();
        let mut acc: Form<Q> = Form::zero(dim, idx.len() + 1);
        for (p, &i) in idx.iter().enumerate() {
            let mut term = Form::constant(dim, if p % 2 == 0 { Q::one() } else { -Q::one() });
            for &l in &idx[..p] {
                term = term.wedge(&Form::generator(dim, l));
            }
            term = term.wedge(&d1[i]);
            for &r in &idx[p + 1..] {
                term = term.wedge(&Form::generator(dim, r));
            }
            acc = acc + term;
        }
        let mut entries = Vec::new();
        for (m, c) in acc.terms() {
            let num = i64::try_from(c.numer()).map_err(|_| overflow())?;
            let den = i64::try_from(c.denom()).map_err(|_| overflow())?;
            entries.push((m.0, num, den));
        }
        table[mask as usize] = entries;
    }
    Ok(table)
}

fn overflow() -> AlgebraError {
    AlgebraError::Invalid("structure constant too large".into())
}

fn split_entries(s: &str) -> Result<Vec<String>, ParseError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| ParseError::Brackets(s.to_string()))?;
    Ok(inner.split(',').map(|e| e.trim().to_string()).collect())
}

/// Parses structure-equation notation: entry `k` lists `d e^k` as a signed
/// sum of terms `[coefficient][*]ij` with `i < j`, or `0`.
pub fn parse_structure_notation(s: &str, dim: usize) -> Result<LieAlgebra, AlgebraError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(ParseError::Dimension(dim).into());
    }
    let entries = split_entries(s)?;
    if entries.len() != dim {
        return Err(ParseError::EntryCount {
            expected: dim,
            found: entries.len(),
        }
        .into());
    }
    let d1 = entries
        .iter()
        .map(|e| parse_entry(e, dim))
        .collect::<Result<Vec<_>, _>>()?;
    LieAlgebra::new(d1)
}

fn parse_entry(entry: &str, dim: usize) -> Result<Form<Q>, ParseError> {
    let compact: String = entry.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "0" {
        return Ok(Form::zero(dim, 2));
    }
    if compact.is_empty() {
        return Err(ParseError::Term(entry.to_string()));
    }
    // split into signed terms
    let mut terms = Vec::new();
    let mut cur = String::new();
    for ch in compact.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('/') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut f = Form::zero(dim, 2);
    for t in terms {
        let (c, i, j) = parse_term(&t)?;
        for idx in [i, j] {
            if idx == 0 || idx > dim {
                return Err(ParseError::IndexRange { index: idx, dim });
            }
        }
        if i >= j {
            return Err(ParseError::PairOrder(i, j));
        }
        f = f + Form::monomial(dim, &[i - 1, j - 1], c);
    }
    Ok(f)
}

fn parse_term(t: &str) -> Result<(Q, usize, usize), ParseError> {
    let err = || ParseError::Term(t.to_string());
    let (negative, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (coef, pair) = if let Some(pos) = body.find(['*', '·']) {
        let sep_len = body[pos..].chars().next().map_or(1, char::len_utf8);
        (&body[..pos], &body[pos + sep_len..])
    } else {
        if body.len() < 2 || !body.is_char_boundary(body.len() - 2) {
            return Err(err());
        }
        body.split_at(body.len() - 2)
    };
    if pair.len() != 2 || !pair.chars().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let mut c = if coef.is_empty() {
        Q::one()
    } else if let Some((n, d)) = coef.split_once('/') {
        let n: i64 = n.parse().map_err(|_| err())?;
        let d: i64 = d.parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        q(n, d)
    } else {
        let n: i64 = coef.parse().map_err(|_| err())?;
        q(n, 1)
    };
    if c.is_zero() {
        return Err(err());
    }
    if negative {
        c = -c;
    }
    let digits: Vec<usize> = pair.chars().map(|ch| ch.to_digit(10).unwrap() as usize).collect();
    Ok((c, digits[0], digits[1]))
}

fn print_entry(f: &Form<Q>) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(Vec<usize>, Q)> = f.terms().map(|(m, c)| (m.indices(), c.clone())).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = String::new();
    for (k, (idx, c)) in terms.iter().enumerate() {
        let neg = c < &Q::zero();
        let a = if neg { -c.clone() } else { c.clone() };
        if neg {
            out.push('-');
        } else if k > 0 {
            out.push('+');
        }
        if a != Q::one() {
            out.push_str(&a.to_string());
            out.push('*');
        }
        out.push_str(&format!("{}{}", idx[0] + 1, idx[1] + 1));
    }
    out
}

/// One line of an algebra catalog file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: usize,
    pub notation: String,
}

impl CatalogEntry {
    pub fn algebra(&self) -> Result<LieAlgebra, AlgebraError> {
        Ok(parse_structure_notation(&self.notation, self.dim)?.with_name(self.name.clone()))
    }
}

/// A list of named algebras, each validated by the Jacobi check on load.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraCatalog {
    pub entries: Vec<CatalogEntry>,
}

impl AlgebraCatalog {
    /// The three five-dimensional quotients and three six-dimensional
    /// algebras that carry the invariant structures studied here.
    pub fn builtin() -> Self {
        let list = [
            ("abelian5", 5, "(0,0,0,0,0)"),
            ("heisenberg5_split", 5, "(0,0,0,0,12)"),
            ("quotient5_l", 5, "(0,0,0,12,13)"),
            ("torus6", 6, "(0,0,0,0,0,0)"),
            ("reducible6", 6, "(0,0,0,0,12,13)"),
            ("irreducible6", 6, "(0,0,0,12,13,23)"),
        ];
        AlgebraCatalog {
            entries: list
                .iter()
                .map(|(n, d, s)| CatalogEntry {
                    name: n.to_string(),
                    dim: *d,
                    notation: s.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(text).map_err(|e| AlgebraError::Invalid(e.to_string()))?;
        let cat = AlgebraCatalog { entries };
        cat.algebras()?;
        Ok(cat)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("catalog serializes")
    }

    /// Parses every entry and checks the Jacobi identity.
    pub fn algebras(&self) -> Result<Vec<LieAlgebra>, AlgebraError> {
        self.entries
            .iter()
            .map(|e| {
                let g = e.algebra()?;
                match g.jacobi_check() {
                    JacobiResult::Pass => Ok(g),
                    JacobiResult::Fail { generator, witness } => Err(AlgebraError::Jacobi {
                        generator,
                        witness: format!("{witness:?}"),
                    }),
                }
            })
            .collect()
    }
}
