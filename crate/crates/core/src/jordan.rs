//! The cubic Jordan algebra H3(B (x) K): norm, trace, adjoint, cross product,
//! trace pairing, rank, the denominator invariant kappa, the block lattices
//! H_j(B0) with their trace-pairing duals, and positive semidefiniteness.
//!
//! A Hermitian matrix is stored as three scalar diagonals c1, c2, c3 and three
//! off-diagonal quaternions a1, a2, a3 in the layout
//!
//! ```text
//!     [ c1   a3   a2* ]
//!     [ a3*  c2   a1  ]
//!     [ a2   a1*  c3  ]
//! ```
//!
//! The adjoint satisfies h h^# = h^# h = N(h) 1_3 and (h^#)^# = N(h) h; both
//! identities are re-verified in debug builds on every call.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::quat::{QuatAlgebra, QuatElement};
use crate::rational::{det, invert, rat, val_p, Rat};
use crate::ring::{is_zero, Coeff};

#[derive(Clone, Debug, PartialEq)]
pub struct HermMatrix<K: Coeff> {
    pub diag: [K; 3],
    pub off: [QuatElement<K>; 3],
}

impl<K: Coeff> HermMatrix<K> {
    pub fn new(diag: [K; 3], off: [QuatElement<K>; 3]) -> Self {
        HermMatrix { diag, off }
    }

    pub fn zero(alg: &QuatAlgebra) -> Self {
        HermMatrix {
            diag: std::array::from_fn(|_| K::k_zero()),
            off: std::array::from_fn(|_| QuatElement::zero(alg)),
        }
    }

    pub fn identity(alg: &QuatAlgebra) -> Self {
        let mut h = Self::zero(alg);
        h.diag = std::array::from_fn(|_| K::k_one());
        h
    }

    pub fn diagonal(alg: &QuatAlgebra, d: [K; 3]) -> Self {
        let mut h = Self::zero(alg);
        h.diag = d;
        h
    }

    pub fn alg(&self) -> &QuatAlgebra {
        &self.off[0].alg
    }

    pub fn is_zero(&self) -> bool {
        self.diag.iter().all(is_zero) && self.off.iter().all(|a| a.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        HermMatrix {
            diag: std::array::from_fn(|i| self.diag[i].add(&other.diag[i])),
            off: std::array::from_fn(|i| self.off[i].add(&other.off[i])),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermMatrix {
            diag: std::array::from_fn(|i| self.diag[i].sub(&other.diag[i])),
            off: std::array::from_fn(|i| self.off[i].sub(&other.off[i])),
        }
    }

    pub fn neg(&self) -> Self {
        HermMatrix {
            diag: std::array::from_fn(|i| self.diag[i].neg()),
            off: std::array::from_fn(|i| self.off[i].neg()),
        }
    }

    pub fn scale_k(&self, s: &K) -> Self {
        HermMatrix {
            diag: std::array::from_fn(|i| self.diag[i].mul(s)),
            off: std::array::from_fn(|i| self.off[i].scale_k(s)),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        HermMatrix {
            diag: std::array::from_fn(|i| self.diag[i].scale(r)),
            off: std::array::from_fn(|i| self.off[i].scale(r)),
        }
    }

    /// Matrix trace c1 + c2 + c3.
    pub fn trace(&self) -> K {
        self.diag[0].add(&self.diag[1]).add(&self.diag[2])
    }

    /// Cubic norm N(h) = c1 c2 c3 - sum c_i n(a_i) + tr(a1 a2 a3).
    pub fn norm(&self) -> K {
        let [c1, c2, c3] = &self.diag;
        let [a1, a2, a3] = &self.off;
        let mut n = c1.mul(c2).mul(c3);
        n = n.sub(&c1.mul(&a1.norm()));
        n = n.sub(&c2.mul(&a2.norm()));
        n = n.sub(&c3.mul(&a3.norm()));
        n.add(&a1.mul(a2).mul(a3).trace())
    }

    /// Adjoint h^#, the quadratic map with h h^# = N(h) 1_3.
    pub fn sharp(&self) -> Self {
        let [c1, c2, c3] = &self.diag;
        let [a1, a2, a3] = &self.off;
        let out = HermMatrix {
            diag: [
                c2.mul(c3).sub(&a1.norm()),
                c3.mul(c1).sub(&a2.norm()),
                c1.mul(c2).sub(&a3.norm()),
            ],
            off: [
                a3.conj().mul(&a2.conj()).sub(&a1.scale_k(c1)),
                a1.conj().mul(&a3.conj()).sub(&a2.scale_k(c2)),
                a2.conj().mul(&a1.conj()).sub(&a3.scale_k(c3)),
            ],
        };
        #[cfg(debug_assertions)]
        {
            let n = self.norm();
            debug_assert!(
                mat_mul_is_scalar(self, &out, &n) && mat_mul_is_scalar(&out, self, &n),
                "h h# = h# h = N(h) 1_3 must hold"
            );
        }
        out
    }

    /// Trace pairing tr(x, y) = (1/2) tr(xy + yx) = sum c_i c_i' + sum tr(a_i a_i'^*).
    pub fn pair(&self, other: &Self) -> K {
        let mut s = K::k_zero();
        for i in 0..3 {
            s = s.add(&self.diag[i].mul(&other.diag[i]));
            s = s.add(&self.off[i].mul(&other.off[i].conj()).trace());
        }
        s
    }

    /// Freudenthal cross product x (x) y = (x+y)^# - x^# - y^#.
    pub fn cross(&self, other: &Self) -> Self {
        self.add(other).sharp().sub(&self.sharp()).sub(&other.sharp())
    }

    /// Upper-left j x j partial norms N_1 = c1, N_2 = c1 c2 - n(a3), N_3 = N.
    pub fn partial_norm(&self, j: u8) -> K {
        match j {
            0 => K::k_one(),
            1 => self.diag[0].clone(),
            2 => self.diag[0].mul(&self.diag[1]).sub(&self.off[2].norm()),
            3 => self.norm(),
            _ => panic!("partial norm index out of range"),
        }
    }

    /// Norm of the 2x2 principal minor omitting row/column `omit` (0-based).
    pub fn minor_norm(&self, omit: usize) -> K {
        let (i, j) = match omit {
            0 => (1, 2),
            1 => (2, 0),
            _ => (0, 1),
        };
        // the off-diagonal of the minor spanning rows/cols {i, j} is a_omit
        self.diag[i].mul(&self.diag[j]).sub(&self.off[omit].norm())
    }
}

pub(crate) fn mat_mul_is_scalar<K: Coeff>(x: &HermMatrix<K>, y: &HermMatrix<K>, want: &K) -> bool {
    // full 3x3 quaternionic product, compared against want * 1_3
    let alg = x.alg();
    let s = |k: &K| QuatElement::scalar(alg, k.clone());
    let xm = [
        [s(&x.diag[0]), x.off[2].clone(), x.off[1].conj()],
        [x.off[2].conj(), s(&x.diag[1]), x.off[0].clone()],
        [x.off[1].clone(), x.off[0].conj(), s(&x.diag[2])],
    ];
    let ym = [
        [s(&y.diag[0]), y.off[2].clone(), y.off[1].conj()],
        [y.off[2].conj(), s(&y.diag[1]), y.off[0].clone()],
        [y.off[1].clone(), y.off[0].conj(), s(&y.diag[2])],
    ];
    for r in 0..3 {
        for c in 0..3 {
            let mut acc = QuatElement::zero(alg);
            for t in 0..3 {
                acc = acc.add(&xm[r][t].mul(&ym[t][c]));
            }
            let expect = if r == c { s(want) } else { QuatElement::zero(alg) };
            if acc != expect {
                return false;
            }
        }
    }
    true
}

impl HermMatrix<Rat> {
    /// Rank per the cubic-Jordan stratification: 3 iff N != 0; 2 iff N = 0,
    /// h^# != 0; 1 iff h^# = 0, h != 0; 0 iff h = 0.  Exact zero tests only.
    pub fn rank(&self) -> u8 {
        if !num_traits::Zero::is_zero(&self.norm()) {
            3
        } else if !self.sharp().is_zero() {
            2
        } else if !self.is_zero() {
            1
        } else {
            0
        }
    }

    /// l-adic valuation: minimum over entries, diagonals as rationals and
    /// off-diagonals in order-basis coordinates.
    pub fn valuation(&self, l: u64) -> Result<i64, Error> {
        if self.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let mut v = i64::MAX;
        for c in &self.diag {
            if !num_traits::Zero::is_zero(c) {
                v = v.min(val_p(c, l)?);
            }
        }
        for a in &self.off {
            if !a.is_zero() {
                v = v.min(a.valuation(l)?);
            }
        }
        Ok(v)
    }

    /// kappa(X) = prod_v v^{-min(0, val(X), val(X#), val(N(X)))}: the exact
    /// denominator of the triple (X, X^#, N(X)) with respect to B0.  kappa = 1
    /// iff all three are integral.
    pub fn kappa(&self) -> u64 {
        if self.is_zero() {
            return 1;
        }
        let sharp = self.sharp();
        let norm = self.norm();
        // candidate primes: denominators of all coordinates
        let mut primes = Vec::new();
        let mut push_den = |r: &Rat| {
            let mut d: num_bigint::BigInt = r.denom().clone();
            let mut p = num_bigint::BigInt::from(2);
            while &p * &p <= d {
                if (&d % &p).is_zero() {
                    primes.push(p.to_string().parse::<u64>().unwrap());
                    while (&d % &p).is_zero() {
                        d = &d / &p;
                    }
                }
                p += 1;
            }
            if d > num_bigint::BigInt::one() {
                primes.push(d.to_string().parse::<u64>().unwrap());
            }
        };
        for h in [self, &sharp] {
            for c in &h.diag {
                push_den(c);
            }
            for a in &h.off {
                for c in &a.order_coords() {
                    push_den(c);
                }
            }
        }
        push_den(&norm);
        primes.sort_unstable();
        primes.dedup();
        let mut kappa = 1u64;
        for l in primes {
            let mut mn = 0i64;
            if let Ok(v) = self.valuation(l) {
                mn = mn.min(v);
            }
            if !sharp.is_zero() {
                mn = mn.min(sharp.valuation(l).unwrap());
            }
            if !num_traits::Zero::is_zero(&norm) {
                mn = mn.min(val_p(&norm, l).unwrap());
            }
            kappa *= l.pow((-mn) as u32);
        }
        kappa
    }

    /// Positive semidefiniteness via the principal-minor criterion for
    /// quaternionic Hermitian matrices: all diagonal entries, all three 2x2
    /// principal minor norms, and N(h) nonnegative.
    pub fn is_psd(&self) -> bool {
        self.diag.iter().all(|c| !c.is_negative())
            && (0..3).all(|omit| !self.minor_norm(omit).is_negative())
            && !self.norm().is_negative()
    }

    /// All entries integral with respect to B0 (diagonals in Z, off-diagonals
    /// in the order).
    pub fn is_integral(&self) -> bool {
        self.diag.iter().all(|c| c.denom().is_one())
            && self
                .off
                .iter()
                .all(|a| a.order_coords().iter().all(|c| c.denom().is_one()))
    }
}

// ---------------------------------------------------------------------------
// block lattices H_j(B0) and their trace-pairing duals
// ---------------------------------------------------------------------------

/// The lattice H_j(B0) of integral Hermitian matrices supported on the upper
/// left j x j block, with an explicit basis and the Gram matrix of tr(.,.).
#[derive(Clone, Debug)]
pub struct HermLattice {
    pub rank: u8,
    pub basis: Vec<HermMatrix<Rat>>,
    pub gram: Vec<Vec<Rat>>,
}

/// Result of dualizing a [`HermLattice`].
#[derive(Clone, Debug)]
pub struct DualData {
    pub dual_basis: Vec<HermMatrix<Rat>>,
    /// |det Gram| = index-type invariant of L inside its dual
    pub index: Rat,
    /// volume of the primal lattice in the paper's fixed normalization:
    /// 1, det(T), det(T)^3 for j = 1, 2, 3 with det(T) = D_B / 4
    pub vol: Rat,
    /// vol / index
    pub dual_vol: Rat,
}

impl HermLattice {
    /// Standard basis of H_j(B0): diagonal units plus order-basis elements in
    /// the off-diagonal slots inside the block (j(j-1)/2 slots x 4).
    pub fn standard(alg: &QuatAlgebra, rank: u8) -> Self {
        assert!((1..=3).contains(&rank));
        let mut basis = Vec::new();
        for i in 0..rank as usize {
            let mut h = HermMatrix::<Rat>::zero(alg);
            h.diag[i] = Rat::one();
            basis.push(h);
        }
        // off-diagonal slot s couples rows/cols: s=2 is the (1,2) slot (block
        // rank 2), s=0 the (2,3) slot, s=1 the (3,1) slot (block rank 3)
        let slots: &[usize] = match rank {
            1 => &[],
            2 => &[2],
            _ => &[0, 1, 2],
        };
        for &s in slots {
            for b in 0..4 {
                let mut coords = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
                coords[b] = Rat::one();
                let mut h = HermMatrix::<Rat>::zero(alg);
                h.off[s] = QuatElement::from_order_coords(alg, &coords);
                basis.push(h);
            }
        }
        let gram: Vec<Vec<Rat>> = basis
            .iter()
            .map(|x| basis.iter().map(|y| x.pair(y)).collect())
            .collect();
        HermLattice { rank, basis, gram }
    }

    /// Dual basis, index, and volumes.  The dual basis D satisfies
    /// tr(basis_i, dual_j) = delta_ij exactly.
    pub fn dual(&self, alg: &QuatAlgebra) -> Result<DualData, Error> {
        let g = det(&self.gram);
        if g.is_zero() {
            return Err(Error::DegenerateGram);
        }
        let ginv = invert(&self.gram)?;
        let dual_basis: Vec<HermMatrix<Rat>> = (0..self.basis.len())
            .map(|i| {
                let mut acc = HermMatrix::<Rat>::zero(alg);
                for (j, b) in self.basis.iter().enumerate() {
                    acc = acc.add(&b.scale(&ginv[j][i]));
                }
                acc
            })
            .collect();
        let det_t = rat(alg.discriminant as i64) / rat(4);
        let vol = match self.rank {
            1 => Rat::one(),
            2 => det_t,
            _ => det_t.pow(3),
        };
        let index = g.abs();
        let dual_vol = &vol / &index;
        Ok(DualData { dual_basis, index, vol, dual_vol })
    }
}
