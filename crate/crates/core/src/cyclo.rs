//! Exact cyclotomic arithmetic: elements of Q(zeta_n) in the power basis of
//! Q[x]/Phi_n(x), eagerly reduced.  Canonical form makes "lies in Q(chi)" a
//! single assertable predicate: a value is rational iff every non-constant
//! coefficient vanishes.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::{format_rat, parse_rat, Rat};

/// Element of Q(zeta_n), stored as phi(n) power-basis coefficients, reduced
/// modulo the n-th cyclotomic polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloValue {
    conductor: u64,
    coeffs: Vec<Rat>,
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Integer coefficients of Phi_n(x), computed as (x^n - 1) / prod_{d|n, d<n} Phi_d.
fn cyclotomic_poly(n: u64) -> Vec<Rat> {
    // x^n - 1
    let mut num = vec![Rat::zero(); n as usize + 1];
    num[0] = -Rat::one();
    num[n as usize] = Rat::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly_cached(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn cyclotomic_poly_cached(n: u64) -> Vec<Rat> {
    static CACHE: Mutex<BTreeMap<u64, Vec<Rat>>> = Mutex::new(BTreeMap::new());
    if let Some(p) = CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = cyclotomic_poly(n);
    CACHE.lock().unwrap().insert(n, p.clone());
    p
}

/// Exact polynomial division with zero remainder assumed.
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    assert!(rem.len() > dd);
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let q = &rem[i] / &lead;
        let shift = i - dd;
        quot[shift] = q.clone();
        for (j, dc) in den.iter().enumerate() {
            let sub = &q * dc;
            rem[shift + j] -= sub;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

impl CycloValue {
    /// Canonical reduction of a raw coefficient vector indexed by powers
    /// 0..len-1 of zeta_n.  Exponents beyond n-1 wrap around first.
    pub fn reduce(raw: &[Rat], n: u64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let phi = euler_phi(n) as usize;
        // fold exponents mod n
        let mut folded = vec![Rat::zero(); n as usize];
        for (e, c) in raw.iter().enumerate() {
            if !c.is_zero() {
                folded[e % n as usize] += c;
            }
        }
        // reduce modulo Phi_n by long division
        let modp = cyclotomic_poly_cached(n);
        let mut rem = folded;
        for i in (phi..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].clone(); // Phi_n is monic
            let shift = i - phi;
            for (j, dc) in modp.iter().enumerate() {
                let sub = &q * dc;
                rem[shift + j] -= sub;
            }
        }
        rem.truncate(phi);
        rem.resize(phi, Rat::zero());
        CycloValue { conductor: n, coeffs: rem }
    }

    pub fn zero(n: u64) -> Self {
        CycloValue { conductor: n, coeffs: vec![Rat::zero(); euler_phi(n) as usize] }
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut v = CycloValue::zero(1);
        v.coeffs[0] = r;
        v
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rat(Rat::from_integer(k.into()))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// zeta_n^e as an element of Q(zeta_n).
    pub fn root_of_unity(n: u64, e: u64) -> Self {
        let mut raw = vec![Rat::zero(); (e % n) as usize + 1];
        raw[(e % n) as usize] = Rat::one();
        Self::reduce(&raw, n)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True iff the canonical form has no non-constant component.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in Q(zeta_m) for a multiple m of the conductor.
    pub fn lift(&self, m: u64) -> Self {
        assert_eq!(m % self.conductor, 0, "lift target must be a multiple");
        if m == self.conductor {
            return self.clone();
        }
        let k = (m / self.conductor) as usize;
        let mut raw = vec![Rat::zero(); euler_phi(self.conductor) as usize * k + 1];
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[e * k] += c;
            }
        }
        Self::reduce(&raw, m)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let l = num_integer::lcm(a.conductor, b.conductor);
        (a.lift(l), b.lift(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = Self::common(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CycloValue {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        let mut raw = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Self::reduce(&raw, a.conductor)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycloValue {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("cyclotomic inverse"));
        }
        if self.is_rational() {
            let r = self.coeffs[0].clone();
            let mut out = Self::zero(self.conductor);
            out.coeffs[0] = Rat::one() / r;
            return Ok(out);
        }
        let phi = cyclotomic_poly_cached(self.conductor);
        // extended euclid: gcd(self, Phi_n) = 1 since Phi_n is irreducible
        let (mut r0, mut r1) = (phi, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (vec![], vec![Rat::one()]);
        // invariants: r_i = s_i * self mod Phi (up to multiples of Phi)
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd (a nonzero constant since Phi_n is irreducible over Q)
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let inv: Vec<Rat> = s0.iter().map(|x| x / &c).collect();
        Ok(Self::reduce(&inv, self.conductor))
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        Ok(self.mul(&other.inv()?))
    }

    /// Galois conjugate zeta -> zeta^k, gcd(k, n) = 1.
    pub fn galois(&self, k: u64) -> Self {
        let n = self.conductor;
        assert_eq!(num_integer::gcd(k, n), 1, "galois exponent must be a unit");
        let mut raw = vec![Rat::zero(); n as usize];
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[((e as u64 * k) % n) as usize] += c;
            }
        }
        Self::reduce(&raw, n)
    }

    /// Complex conjugation (zeta -> zeta^{-1}).
    pub fn conj(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        self.galois(self.conductor - 1)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![], trim(rem));
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let q = &rem[i] / &lead;
        let shift = i - db;
        quot[shift] = q.clone();
        for (j, bc) in b.iter().enumerate() {
            let sub = &q * bc;
            rem[shift + j] -= sub;
        }
    }
    (trim(quot), trim(rem))
}

// ---------------------------------------------------------------------------
// serialization: {"n": n, "coeffs": ["p/q", ...]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CycloWire {
    n: u64,
    coeffs: Vec<String>,
}

impl Serialize for CycloValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloWire {
            n: self.conductor,
            coeffs: self.coeffs.iter().map(format_rat).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = CycloWire::deserialize(d)?;
        let coeffs: Result<Vec<Rat>, _> = w.coeffs.iter().map(|s| parse_rat(s)).collect();
        let coeffs = coeffs.map_err(serde::de::Error::custom)?;
        Ok(CycloValue::reduce(&coeffs, w.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn zeta4_squared_is_minus_one() {
        let v = CycloValue::reduce(&[rat(0), rat(0), rat(1), rat(0)], 4);
        assert_eq!(v, CycloValue::from_int(-1).lift(4));
        assert!(v.is_rational());
        assert_eq!(v.rational_part().unwrap(), rat(-1));
    }

    #[test]
    fn full_root_of_unity_sum_vanishes() {
        for n in [2u64, 4, 8, 3, 9, 5, 25] {
            let raw = vec![rat(1); n as usize];
            let v = CycloValue::reduce(&raw, n);
            assert!(v.is_zero(), "sum of all {n}-th roots of unity");
        }
    }

    #[test]
    fn zeta2_is_minus_one() {
        let v = CycloValue::reduce(&[rat(0), rat(1)], 2);
        assert_eq!(v.rational_part().unwrap(), rat(-1));
    }

    #[test]
    fn reduce_is_idempotent_and_multiplicative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = *[3u64, 4, 5, 8, 9, 12].iter().nth(rng.gen_range(0..6)).unwrap();
            let raw_a: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-5..=5))).collect();
            let raw_b: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-5..=5))).collect();
            let a = CycloValue::reduce(&raw_a, n);
            let b = CycloValue::reduce(&raw_b, n);
            // idempotence
            assert_eq!(CycloValue::reduce(a.coeffs(), n), a);
            // multiplicativity against schoolbook product of the raw vectors
            let mut raw_prod = vec![Rat::zero(); 2 * n as usize];
            for (i, x) in raw_a.iter().enumerate() {
                for (j, y) in raw_b.iter().enumerate() {
                    raw_prod[i + j] += x * y;
                }
            }
            assert_eq!(CycloValue::reduce(&raw_prod, n), a.mul(&b));
        }
    }

    #[test]
    fn inverse_and_galois() {
        let z = CycloValue::root_of_unity(5, 1);
        let w = z.add(&CycloValue::one()); // 1 + zeta_5
        let inv = w.inv().unwrap();
        assert_eq!(w.mul(&inv), CycloValue::one().lift(5));
        // conjugation is an automorphism
        let a = z.add(&z.pow(2));
        let b = z.pow(3).add(&CycloValue::from_int(2));
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }

    #[test]
    fn lift_preserves_value() {
        let z3 = CycloValue::root_of_unity(3, 1);
        let lifted = z3.lift(12);
        // zeta_3 = zeta_12^4
        assert_eq!(lifted, CycloValue::root_of_unity(12, 4));
    }

    #[test]
    fn json_roundtrip() {
        let z = CycloValue::root_of_unity(8, 3).scale(&rat(7));
        let s = serde_json::to_string(&z).unwrap();
        let back: CycloValue = serde_json::from_str(&s).unwrap();
        assert_eq!(z, back);
    }
}
