//! Coefficient-ring abstraction for quaternions, Hermitian matrices and
//! W-vectors.  The same Jordan-algebra code runs over plain rationals, over
//! Gaussian rationals (for the symmetric space, where Z = X + iY has a central
//! i), and over formal polynomial coefficients in tests.

use crate::rational::Rat;

/// A commutative ring with an embedding of the rationals.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn k_zero() -> Self;
    fn k_one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rat(r: &Rat) -> Self;

    fn scale(&self, r: &Rat) -> Self {
        self.mul(&Self::from_rat(r))
    }
}

/// Zero test through the ring interface.
pub fn is_zero<K: Coeff>(x: &K) -> bool {
    *x == K::k_zero()
}

impl Coeff for Rat {
    fn k_zero() -> Self {
        num_traits::Zero::zero()
    }
    fn k_one() -> Self {
        num_traits::One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
}

/// Formal univariate polynomials over the rationals, used in tests to catch
/// identity errors that random sampling could miss.
#[cfg(test)]
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRat(pub Vec<Rat>);

#[cfg(test)]
impl PolyRat {
    pub fn var() -> Self {
        PolyRat(vec![Coeff::k_zero(), Coeff::k_one()])
    }
    fn trim(mut v: Vec<Rat>) -> Self {
        while v.last().map(|c| is_zero(c)).unwrap_or(false) {
            v.pop();
        }
        PolyRat(v)
    }
}

#[cfg(test)]
impl Coeff for PolyRat {
    fn k_zero() -> Self {
        PolyRat(vec![])
    }
    fn k_one() -> Self {
        PolyRat(vec![Coeff::k_one()])
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![<Rat as Coeff>::k_zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Self::trim(out)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self::k_zero();
        }
        let mut out = vec![<Rat as Coeff>::k_zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::trim(out)
    }
    fn neg(&self) -> Self {
        PolyRat(self.0.iter().map(|c| -c.clone()).collect())
    }
    fn from_rat(r: &Rat) -> Self {
        if is_zero(r) {
            Self::k_zero()
        } else {
            PolyRat(vec![r.clone()])
        }
    }
}
