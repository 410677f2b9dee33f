//! The definite quaternion algebra B = (a, b / Q) with a fixed maximal order
//! B0, base change to commutative coefficient rings, and residue-ring
//! enumeration B0 / l^m B0.
//!
//! The fixed basis is {1, i, j, k} with i^2 = a, j^2 = b, ij = k = -ji.
//! Order arithmetic is done through integer structure constants in the order
//! basis, which the constructor derives and verifies (closure, unit, trace
//! and norm integrality, maximality via the reduced discriminant).

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{det, invert, parse_rat, rat, val_p, Rat};
use crate::ring::Coeff;

/// Immutable descriptor of the algebra and its maximal order.  Shared via Arc
/// so elements stay cheap to clone.
#[derive(Debug)]
pub struct QuatAlgebraData {
    pub a: Rat,
    pub b: Rat,
    pub discriminant: u64,
    /// rows express the Z-basis of B0 in {1, i, j, k}
    pub order_basis: [[Rat; 4]; 4],
    /// inverse of the basis matrix (columns = basis vectors)
    basis_inv: Vec<Vec<Rat>>,
    /// f_r f_s = sum_t structure[r][s][t] f_t, integer entries
    structure: [[[i64; 4]; 4]; 4],
    /// conj(f_r) = sum_t conj_mat[r][t] f_t, integer entries
    conj_mat: [[i64; 4]; 4],
    /// Gram of the trace pairing tr(f_r f_s^*); n(x) = x G x^T / 2
    pub norm_gram: [[i64; 4]; 4],
}

pub type QuatAlgebra = Arc<QuatAlgebraData>;

/// Hamilton's quaternions with the Hurwitz maximal order (D_B = 2).
pub fn hamilton() -> QuatAlgebra {
    let h = rat_frac_row(&["1/2", "1/2", "1/2", "1/2"]);
    QuatAlgebraData::new(
        rat(-1),
        rat(-1),
        [rat_frac_row(&["1", "0", "0", "0"]), rat_frac_row(&["0", "1", "0", "0"]), rat_frac_row(&["0", "0", "1", "0"]), h],
    )
    .expect("hamilton order is valid")
}

/// B(-1, -3) with maximal order {1, i, (1+j)/2, (i+k)/2} (D_B = 3); the
/// standard companion order that is unramified at 2.
pub fn b_minus_one_minus_three() -> QuatAlgebra {
    QuatAlgebraData::new(
        rat(-1),
        rat(-3),
        [
            rat_frac_row(&["1", "0", "0", "0"]),
            rat_frac_row(&["0", "1", "0", "0"]),
            rat_frac_row(&["1/2", "0", "1/2", "0"]),
            rat_frac_row(&["0", "1/2", "0", "1/2"]),
        ],
    )
    .expect("b(-1,-3) order is valid")
}

fn rat_frac_row(s: &[&str; 4]) -> [Rat; 4] {
    [
        parse_rat(s[0]).unwrap(),
        parse_rat(s[1]).unwrap(),
        parse_rat(s[2]).unwrap(),
        parse_rat(s[3]).unwrap(),
    ]
}

fn qmul_1ijk(a: &Rat, b: &Rat, x: &[Rat; 4], y: &[Rat; 4]) -> [Rat; 4] {
    let ab = a * b;
    [
        &x[0] * &y[0] + a * (&x[1] * &y[1]) + b * (&x[2] * &y[2]) - &ab * (&x[3] * &y[3]),
        &x[0] * &y[1] + &x[1] * &y[0] - b * (&x[2] * &y[3]) + b * (&x[3] * &y[2]),
        &x[0] * &y[2] + &x[2] * &y[0] + a * (&x[1] * &y[3]) - a * (&x[3] * &y[1]),
        &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1],
    ]
}

impl QuatAlgebraData {
    pub fn new(a: Rat, b: Rat, order_basis: [[Rat; 4]; 4]) -> Result<QuatAlgebra, Error> {
        if !a.is_negative() || !b.is_negative() {
            return Err(Error::NotDefinite);
        }
        let basis_mat: Vec<Vec<Rat>> =
            (0..4).map(|r| (0..4).map(|c| order_basis[c][r].clone()).collect()).collect();
        if det(&basis_mat).is_zero() {
            return Err(Error::OrderSingular);
        }
        let basis_inv = invert(&basis_mat)?;

        let to_order = |v: &[Rat; 4]| -> [Rat; 4] {
            let mut out = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
            for (r, slot) in out.iter_mut().enumerate() {
                for c in 0..4 {
                    *slot += &basis_inv[r][c] * &v[c];
                }
            }
            out
        };

        // 1 must lie in the order
        let one = to_order(&[Rat::one(), Rat::zero(), Rat::zero(), Rat::zero()]);
        if !one.iter().all(|c| c.denom().is_one()) {
            return Err(Error::OrderMissingOne);
        }

        // closure under multiplication, with integer structure constants
        let mut structure = [[[0i64; 4]; 4]; 4];
        for r in 0..4 {
            for s in 0..4 {
                let prod = qmul_1ijk(&a, &b, &order_basis[r], &order_basis[s]);
                let coords = to_order(&prod);
                for (t, c) in coords.iter().enumerate() {
                    if !c.denom().is_one() {
                        return Err(Error::OrderNotClosed(r, s));
                    }
                    structure[r][s][t] = rat_to_i64(c);
                }
            }
        }

        // conjugation matrix (orders are stable: x* = tr(x) - x, tr integral)
        let mut conj_mat = [[0i64; 4]; 4];
        let mut norm_gram = [[0i64; 4]; 4];
        for r in 0..4 {
            let e = &order_basis[r];
            let conj = [e[0].clone(), -e[1].clone(), -e[2].clone(), -e[3].clone()];
            let coords = to_order(&conj);
            for (t, c) in coords.iter().enumerate() {
                if !c.denom().is_one() {
                    return Err(Error::OrderNotClosed(r, r));
                }
                conj_mat[r][t] = rat_to_i64(c);
            }
            for s in 0..4 {
                let f = &order_basis[s];
                let fconj = [f[0].clone(), -f[1].clone(), -f[2].clone(), -f[3].clone()];
                let prod = qmul_1ijk(&a, &b, e, &fconj);
                // tr = 2 * scalar part (the product of order elements is an
                // order element, so this is an integer)
                let tr = &prod[0] * rat(2);
                if !tr.denom().is_one() {
                    return Err(Error::OrderNotClosed(r, s));
                }
                norm_gram[r][s] = rat_to_i64(&tr);
            }
        }

        // reduced discriminant of the order: disc^2 = |det(tr(f_r f_s^*))|
        let gram_rat: Vec<Vec<Rat>> =
            norm_gram.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
        let disc_sq = det(&gram_rat).abs();
        let disc_sq_int = disc_sq.to_integer();
        let mut d = 1u64;
        while d * d < 1_000_000 {
            if rat((d * d) as i64) == Rat::from_integer(disc_sq_int.clone()) {
                break;
            }
            d += 1;
        }
        if rat((d * d) as i64) != Rat::from_integer(disc_sq_int) {
            return Err(Error::Invalid("order discriminant is not a perfect square".into()));
        }
        // maximality: the reduced discriminant must equal the product of the
        // finite ramified primes of the algebra (Hilbert symbols)
        let d_alg = algebra_discriminant(&a, &b);
        if d != d_alg {
            return Err(Error::Invalid(format!(
                "order is not maximal: reduced discriminant {d}, algebra discriminant {d_alg}"
            )));
        }

        Ok(Arc::new(QuatAlgebraData {
            a,
            b,
            discriminant: d,
            order_basis,
            basis_inv,
            structure,
            conj_mat,
            norm_gram,
        }))
    }

    /// Convert {1,i,j,k} coordinates to order-basis coordinates.
    pub fn to_order_coords<K: Coeff>(&self, v: &[K; 4]) -> [K; 4] {
        std::array::from_fn(|r| {
            let mut acc = K::k_zero();
            for (c, vc) in v.iter().enumerate() {
                if !self.basis_inv[r][c].is_zero() {
                    acc = acc.add(&vc.scale(&self.basis_inv[r][c]));
                }
            }
            acc
        })
    }

    /// Convert order-basis coordinates to {1,i,j,k} coordinates.
    pub fn from_order_coords<K: Coeff>(&self, v: &[K; 4]) -> [K; 4] {
        std::array::from_fn(|c| {
            let mut acc = K::k_zero();
            for (r, vr) in v.iter().enumerate() {
                if !self.order_basis[r][c].is_zero() {
                    acc = acc.add(&vr.scale(&self.order_basis[r][c]));
                }
            }
            acc
        })
    }
}

fn rat_to_i64(r: &Rat) -> i64 {
    debug_assert!(r.denom().is_one());
    let s = r.numer().to_string();
    s.parse().expect("structure constant fits i64")
}

/// Legendre symbol (u | p) for p odd, u a unit mod p.
fn legendre(u: i64, p: u64) -> i64 {
    let e = (p - 1) / 2;
    let mut acc = 1i64;
    let mut base = u.rem_euclid(p as i64);
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p as i64;
        }
        base = base * base % p as i64;
        k >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Hilbert symbol (a, b)_p for nonzero rationals.
fn hilbert_symbol(a: &Rat, b: &Rat, p: u64) -> i64 {
    // reduce to the unit parts: a = p^alpha u, b = p^beta v
    let va = val_p(a, p).expect("nonzero");
    let vb = val_p(b, p).expect("nonzero");
    let unit = |x: &Rat, v: i64| -> i64 {
        let stripped = x * Rat::new(num_bigint::BigInt::from(p).pow(if v < 0 { (-v) as u32 } else { 0 }),
                                    num_bigint::BigInt::from(p).pow(if v > 0 { v as u32 } else { 0 }));
        // stripped is a p-adic unit; reduce mod p (or mod 8 for p = 2)
        let modulus = if p == 2 { 8i64 } else { p as i64 };
        let num: i64 = (stripped.numer() % num_bigint::BigInt::from(modulus))
            .to_string()
            .parse()
            .unwrap();
        let den: i64 = (stripped.denom() % num_bigint::BigInt::from(modulus))
            .to_string()
            .parse()
            .unwrap();
        // num/den mod modulus: multiply by the inverse of den
        let mut inv = 0i64;
        for c in 1..modulus {
            if (den.rem_euclid(modulus) * c) % modulus == 1 {
                inv = c;
                break;
            }
        }
        (num.rem_euclid(modulus) * inv).rem_euclid(modulus)
    };
    let u = unit(a, va);
    let v = unit(b, vb);
    if p != 2 {
        let eps = ((p - 1) / 2 % 2) as i64;
        let mut s = 1i64;
        if va % 2 != 0 && vb % 2 != 0 && eps == 1 {
            s = -s;
        }
        if vb % 2 != 0 && legendre(u, p) == -1 {
            s = -s;
        }
        if va % 2 != 0 && legendre(v, p) == -1 {
            s = -s;
        }
        s
    } else {
        let eps = |x: i64| (x - 1) / 2 % 2; // x odd
        let omega = |x: i64| (x * x - 1) / 8 % 2;
        let mut e = eps(u) * eps(v);
        e += va.rem_euclid(2) * omega(v);
        e += vb.rem_euclid(2) * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Product of the finite primes where B(a, b) ramifies.
fn algebra_discriminant(a: &Rat, b: &Rat) -> u64 {
    // candidate primes: 2 and the primes dividing the numerators/denominators
    let mut cands = vec![2u64];
    for r in [a, b] {
        for x in [r.numer().clone(), r.denom().clone()] {
            let mut n: u64 = x.abs().to_string().parse().unwrap_or(0);
            let mut p = 2u64;
            while p * p <= n {
                if n % p == 0 {
                    cands.push(p);
                    while n % p == 0 {
                        n /= p;
                    }
                }
                p += 1;
            }
            if n > 1 {
                cands.push(n);
            }
        }
    }
    cands.sort_unstable();
    cands.dedup();
    let mut d = 1u64;
    for p in cands {
        if hilbert_symbol(a, b, p) == -1 {
            d *= p;
        }
    }
    d
}

// ---------------------------------------------------------------------------
// elements
// ---------------------------------------------------------------------------

/// Quaternion over a commutative coefficient ring, coordinates in {1, i, j, k}.
#[derive(Clone, Debug)]
pub struct QuatElement<K: Coeff> {
    pub alg: QuatAlgebra,
    pub coords: [K; 4],
}

impl<K: Coeff> PartialEq for QuatElement<K> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.coords == other.coords
    }
}

impl<K: Coeff> QuatElement<K> {
    pub fn new(alg: &QuatAlgebra, coords: [K; 4]) -> Self {
        QuatElement { alg: alg.clone(), coords }
    }

    pub fn zero(alg: &QuatAlgebra) -> Self {
        Self::new(alg, std::array::from_fn(|_| K::k_zero()))
    }

    pub fn scalar(alg: &QuatAlgebra, s: K) -> Self {
        Self::new(alg, [s, K::k_zero(), K::k_zero(), K::k_zero()])
    }

    pub fn one(alg: &QuatAlgebra) -> Self {
        Self::scalar(alg, K::k_one())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(crate::ring::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<(), Error> {
        let same = Arc::ptr_eq(&self.alg, &other.alg)
            || (self.alg.a == other.alg.a
                && self.alg.b == other.alg.b
                && self.alg.order_basis == other.alg.order_basis);
        if same {
            Ok(())
        } else {
            Err(Error::MismatchedAlgebras)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.check_same(other).is_ok());
        Self::new(&self.alg, std::array::from_fn(|t| self.coords[t].add(&other.coords[t])))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.alg, std::array::from_fn(|t| self.coords[t].sub(&other.coords[t])))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.alg, std::array::from_fn(|t| self.coords[t].neg()))
    }

    pub fn scale_k(&self, s: &K) -> Self {
        Self::new(&self.alg, std::array::from_fn(|t| self.coords[t].mul(s)))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::new(&self.alg, std::array::from_fn(|t| self.coords[t].scale(r)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_same(other)?;
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.alg.a;
        let b = &self.alg.b;
        let ab = a * b;
        let x = &self.coords;
        let y = &other.coords;
        let m = |i: usize, j: usize| x[i].mul(&y[j]);
        let w = m(0, 0)
            .add(&m(1, 1).scale(a))
            .add(&m(2, 2).scale(b))
            .sub(&m(3, 3).scale(&ab));
        let xi = m(0, 1).add(&m(1, 0)).sub(&m(2, 3).scale(b)).add(&m(3, 2).scale(b));
        let yj = m(0, 2).add(&m(2, 0)).add(&m(1, 3).scale(a)).sub(&m(3, 1).scale(a));
        let zk = m(0, 3).add(&m(3, 0)).add(&m(1, 2)).sub(&m(2, 1));
        Self::new(&self.alg, [w, xi, yj, zk])
    }

    /// Conjugation: the anti-involution fixing the center.
    pub fn conj(&self) -> Self {
        Self::new(
            &self.alg,
            [
                self.coords[0].clone(),
                self.coords[1].neg(),
                self.coords[2].neg(),
                self.coords[3].neg(),
            ],
        )
    }

    /// Reduced norm n(q) = q q^*, a scalar.
    pub fn norm(&self) -> K {
        let a = &self.alg.a;
        let b = &self.alg.b;
        let ab = a * b;
        let c = &self.coords;
        c[0].mul(&c[0])
            .sub(&c[1].mul(&c[1]).scale(a))
            .sub(&c[2].mul(&c[2]).scale(b))
            .add(&c[3].mul(&c[3]).scale(&ab))
    }

    /// Reduced trace tr(q) = q + q^*, a scalar.
    pub fn trace(&self) -> K {
        self.coords[0].add(&self.coords[0])
    }

    pub fn order_coords(&self) -> [K; 4] {
        self.alg.to_order_coords(&self.coords)
    }

    pub fn from_order_coords(alg: &QuatAlgebra, v: &[K; 4]) -> Self {
        Self::new(alg, alg.from_order_coords(v))
    }
}

impl QuatElement<Rat> {
    /// l-adic valuation: minimum over order-basis coordinates, per the lattice
    /// B0 (not the {1,i,j,k} coordinates).
    pub fn valuation(&self, l: u64) -> Result<i64, Error> {
        if self.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let coords = self.order_coords();
        let mut v = i64::MAX;
        for c in &coords {
            if !c.is_zero() {
                v = v.min(val_p(c, l)?);
            }
        }
        Ok(v)
    }
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// Q(i) with i central (distinct from the quaternion i).
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussianRational { re, im }
    }
    pub fn i() -> Self {
        GaussianRational { re: Rat::zero(), im: Rat::one() }
    }
    pub fn inv(&self) -> Result<Self, Error> {
        let d = &self.re * &self.re + &self.im * &self.im;
        if d.is_zero() {
            return Err(Error::DivisionByZero("gaussian rational inverse"));
        }
        Ok(GaussianRational { re: &self.re / &d, im: -(&self.im / &d) })
    }
    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(&self.re) && num_traits::Zero::is_zero(&self.im)
    }
}

impl Coeff for GaussianRational {
    fn k_zero() -> Self {
        GaussianRational { re: num_traits::Zero::zero(), im: num_traits::Zero::zero() }
    }
    fn k_one() -> Self {
        GaussianRational { re: num_traits::One::one(), im: num_traits::Zero::zero() }
    }
    fn add(&self, o: &Self) -> Self {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Self) -> Self {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg(&self) -> Self {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn from_rat(r: &Rat) -> Self {
        GaussianRational { re: r.clone(), im: Rat::zero() }
    }
}

// ---------------------------------------------------------------------------
// residue enumeration B0 / l^m B0
// ---------------------------------------------------------------------------

/// One residue class of B0 / l^m B0: coordinates in [0, l^m) w.r.t. the order
/// basis, together with enough algebra data to multiply and take norms
/// without leaving integer arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueIndex {
    pub l: u64,
    pub m: u32,
    pub coords: [i64; 4],
}

impl ResidueIndex {
    /// Canonical lift into B0.
    pub fn lift(&self, alg: &QuatAlgebra) -> QuatElement<Rat> {
        let coords: [Rat; 4] = std::array::from_fn(|t| rat(self.coords[t]));
        QuatElement::from_order_coords(alg, &coords)
    }
}

/// Integer quaternion arithmetic in order-basis coordinates.
pub struct OrderArith<'a> {
    pub alg: &'a QuatAlgebraData,
}

impl<'a> OrderArith<'a> {
    pub fn new(alg: &'a QuatAlgebra) -> Self {
        OrderArith { alg }
    }

    pub fn mul(&self, x: &[i64; 4], y: &[i64; 4]) -> [i64; 4] {
        let mut out = [0i64; 4];
        for r in 0..4 {
            if x[r] == 0 {
                continue;
            }
            for s in 0..4 {
                if y[s] == 0 {
                    continue;
                }
                let f = x[r] * y[s];
                for (t, slot) in out.iter_mut().enumerate() {
                    *slot += f * self.alg.structure[r][s][t];
                }
            }
        }
        out
    }

    pub fn conj(&self, x: &[i64; 4]) -> [i64; 4] {
        let mut out = [0i64; 4];
        for r in 0..4 {
            if x[r] == 0 {
                continue;
            }
            for (t, slot) in out.iter_mut().enumerate() {
                *slot += x[r] * self.alg.conj_mat[r][t];
            }
        }
        out
    }

    pub fn norm(&self, x: &[i64; 4]) -> i64 {
        let mut s = 0i64;
        for r in 0..4 {
            for c in 0..4 {
                s += x[r] * x[c] * self.alg.norm_gram[r][c];
            }
        }
        debug_assert_eq!(s % 2, 0);
        s / 2
    }

    pub fn trace(&self, x: &[i64; 4]) -> i64 {
        let c = self.conj(x);
        // x + x* is scalar; its order coordinates are (x+x*) expressed in the
        // basis, and the scalar value is the {1,i,j,k} first coordinate
        let sum = [x[0] + c[0], x[1] + c[1], x[2] + c[2], x[3] + c[3]];
        let rats: [Rat; 4] = std::array::from_fn(|t| rat(sum[t]));
        let full = self.alg.from_order_coords(&rats);
        debug_assert!(full[1].is_zero() && full[2].is_zero() && full[3].is_zero());
        rat_to_i64(&full[0])
    }
}

/// Iterator over all l^{4m} residue classes of B0 / l^m B0.
pub fn order_residues(
    alg: &QuatAlgebra,
    l: u64,
    m: u32,
    budget: u128,
) -> Result<impl Iterator<Item = ResidueIndex>, Error> {
    let n = (l as u128).pow(4 * m);
    if n > budget {
        return Err(Error::BudgetExceeded { required: n, budget });
    }
    let _ = alg;
    let lm = l.pow(m) as i64;
    let total = n as u64;
    let l_copy = l;
    Ok((0..total).map(move |idx| {
        let mut coords = [0i64; 4];
        let mut rem = idx as i64;
        for slot in coords.iter_mut() {
            *slot = rem % lm;
            rem /= lm;
        }
        ResidueIndex { l: l_copy, m, coords }
    }))
}
