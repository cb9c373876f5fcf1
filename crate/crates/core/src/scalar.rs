//! The coefficient tower used by forms: exact rationals, floats, and
//! second-order jets in one real parameter.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number.
pub type Q = BigRational;

/// Builds the rational `num/den`.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Common interface of the coefficient rings forms are defined over.
///
/// Every implementor is a field (up to `recip` returning `None` on zero).
/// `sqrt` returns `None` when the root is not representable at this level,
/// which is how exact computations signal that they must be promoted.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &Q) -> Self;
    fn is_zero(&self) -> bool;
    /// Size used for pivoting and tolerance tests (value part for jets).
    fn magnitude(&self) -> f64;
    fn recip(&self) -> Option<Self>;
    fn sqrt(&self) -> Option<Self>;
    /// Value part as a float.
    fn to_f64(&self) -> f64;
    /// Derivative with respect to the ambient parameter; zero for constants.
    fn derivative(&self) -> Self {
        Self::zero()
    }
    /// True for the exact rational level.
    fn is_exact() -> bool {
        false
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&q(num, den))
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self.clone() * r)
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Zero test used by elimination: exact at the rational level,
    /// `|x| <= tol` otherwise.
    fn negligible(&self, tol: f64) -> bool {
        if Self::is_exact() {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }
    fn recip(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(num_traits::Inv::inv(self.clone()))
        }
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Q::new(rn, rd))
        } else {
            None
        }
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &Q) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn recip(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn sqrt(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(f64::sqrt(*self))
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// A function of one real parameter known through its value and first two
/// derivatives at a point.
///
/// `order` counts how many derivatives are still valid: differentiating a
/// jet consumes one. Reading a derivative that is no longer valid panics.
#[derive(Clone, PartialEq)]
pub struct Jet<S> {
    c: [S; 3],
    order: u8,
}

impl<S: Scalar> Jet<S> {
    pub fn new(value: S, d1: S, d2: S) -> Self {
        Jet {
            c: [value, d1, d2],
            order: 2,
        }
    }

    pub fn constant(value: S) -> Self {
        Jet::new(value, S::zero(), S::zero())
    }

    /// The independent variable at `x`.
    pub fn variable(x: S) -> Self {
        Jet::new(x, S::one(), S::zero())
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn value(&self) -> &S {
        &self.c[0]
    }

    pub fn d1(&self) -> &S {
        assert!(self.order >= 1, "first derivative of a jet of order 0");
        &self.c[1]
    }

    pub fn d2(&self) -> &S {
        assert!(self.order >= 2, "second derivative of a jet of order {}", self.order);
        &self.c[2]
    }

    /// Component `k` of the jet (value, first or second derivative).
    pub fn part(&self, k: usize) -> &S {
        match k {
            0 => self.value(),
            1 => self.d1(),
            2 => self.d2(),
            _ => panic!("jets carry derivatives up to order 2"),
        }
    }

    /// Chain rule for `g(self)` given `g, g', g''` at the value.
    pub fn compose(&self, g0: S, g1: S, g2: S) -> Self {
        let f1 = self.c[1].clone();
        let f2 = self.c[2].clone();
        Jet {
            c: [
                g0,
                g1.clone() * f1.clone(),
                g2 * f1.clone() * f1 + g1 * f2,
            ],
            order: self.order,
        }
    }
}

impl<S: Scalar> fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet({:?}; {:?}, {:?}; order {})", self.c[0], self.c[1], self.c[2], self.order)
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let [a0, a1, a2] = self.c;
        let [b0, b1, b2] = o.c;
        Jet {
            c: [a0 + b0, a1 + b1, a2 + b2],
            order: self.order.min(o.order),
        }
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let [a0, a1, a2] = self.c;
        let [b0, b1, b2] = o.c;
        Jet {
            c: [a0 - b0, a1 - b1, a2 - b2],
            order: self.order.min(o.order),
        }
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let [a0, a1, a2] = self.c;
        let [b0, b1, b2] = o.c;
        let two = S::from_i64(2);
        Jet {
            c: [
                a0.clone() * b0.clone(),
                a1.clone() * b0.clone() + a0.clone() * b1.clone(),
                a2 * b0 + two * a1 * b1 + a0 * b2,
            ],
            order: self.order.min(o.order),
        }
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;
    fn neg(self) -> Self {
        let [a0, a1, a2] = self.c;
        Jet {
            c: [-a0, -a1, -a2],
            order: self.order,
        }
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    fn zero() -> Self {
        Jet::constant(S::zero())
    }
    fn one() -> Self {
        Jet::constant(S::one())
    }
    fn from_i64(n: i64) -> Self {
        Jet::constant(S::from_i64(n))
    }
    fn from_rational(q: &Q) -> Self {
        Jet::constant(S::from_rational(q))
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Scalar::is_zero)
    }
    fn magnitude(&self) -> f64 {
        self.c[0].magnitude()
    }
    fn recip(&self) -> Option<Self> {
        let r = self.c[0].recip()?;
        let r2 = r.clone() * r.clone();
        let r3 = r2.clone() * r.clone();
        // (1/f)' = -f'/f^2, (1/f)'' = 2f'^2/f^3 - f''/f^2
        Some(self.compose(r, -r2, S::from_i64(2) * r3))
    }
    fn sqrt(&self) -> Option<Self> {
        let s = self.c[0].sqrt()?;
        if s.is_zero() {
            return if self.c[1].is_zero() && self.c[2].is_zero() {
                Some(Jet { c: [S::zero(), S::zero(), S::zero()], order: self.order })
            } else {
                None
            };
        }
        let inv = s.recip()?;
        let half = S::from_ratio(1, 2);
        let quarter = S::from_ratio(1, 4);
        let g1 = half * inv.clone();
        let g2 = -(quarter * inv.clone() * inv.clone() * inv);
        Some(self.compose(s, g1, g2))
    }
    fn to_f64(&self) -> f64 {
        self.c[0].to_f64()
    }
    fn derivative(&self) -> Self {
        assert!(self.order >= 1, "differentiating a jet of order 0");
        Jet {
            c: [self.c[1].clone(), self.c[2].clone(), S::zero()],
            order: self.order - 1,
        }
    }
    fn is_exact() -> bool {
        S::is_exact()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_is_exact_only_on_squares() {
        assert_eq!(Scalar::sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(Scalar::sqrt(&q(2, 1)), None);
        assert_eq!(Scalar::sqrt(&q(-1, 1)), None);
    }

    #[test]
    fn jet_arithmetic_matches_calculus() {
        // f(x) = x^3 at x = 2: (8, 12, 12)
        let x = Jet::variable(2.0_f64);
        let f = x.clone() * x.clone() * x.clone();
        assert_eq!((*f.value(), *f.d1(), *f.d2()), (8.0, 12.0, 12.0));
        // g(x) = 1/x at x = 2: (1/2, -1/4, 1/4)
        let g = x.recip().unwrap();
        assert_eq!((*g.value(), *g.d1(), *g.d2()), (0.5, -0.25, 0.25));
        // h(x) = sqrt(x) at x = 4: (2, 1/4, -1/32)
        let h = Jet::variable(4.0_f64).sqrt().unwrap();
        assert!((h.d1() - 0.25).abs() < 1e-15);
        assert!((h.d2() + 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn exact_jets() {
        let x = Jet::variable(q(1, 3));
        let f = (Jet::one() - x).recip().unwrap();
        // 1/(1-x) at 1/3: 3/2, 9/4, 27/4
        assert_eq!(f.value(), &q(3, 2));
        assert_eq!(f.d1(), &q(9, 4));
        assert_eq!(f.d2(), &q(27, 4));
    }

    #[test]
    #[should_panic]
    fn derivative_consumes_order() {
        let x = Jet::variable(1.0_f64);
        let d = x.derivative().derivative();
        let _ = d.d1();
    }
}
