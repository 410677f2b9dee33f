//! The 32-dimensional module W = K + H3(B) + H3(B) + K with its symplectic
//! and quartic forms, the rational points of the similitude group that the
//! computations touch (embedded GSp6, the unipotent embeddings n and n-bar,
//! Bruhat representatives iota_j, Atkin-Lehner w_M), the rank-one vector
//! r(Z) = (1, -Z, Z^#, -N(Z)) and the factor of automorphy j(g, Z).
//!
//! Conventions.  Everything acts on the right on row vectors.  The GSp6
//! embedding is the nu^{-1}-twisted wedge-cube action (the "(x) nu^{-1}" in
//! the identification of W inside /\^3 W_6 (x) nu^{-1} (x) B): with the twist
//! the inclusion is similitude-preserving (nu_W = nu_6) and
//! j(g, z) = nu(g)^{-2} det(Cz + D) holds on embedded Siegel points.  The
//! Atkin-Lehner element w_M is the verbatim four-component table action,
//! which is the twisted image of [[0, M], [-1, 0]] rescaled by the central
//! scalar M; its similitude on W is M^3.
//!
//! W coordinates: index 0 = a, 1..16 = b, 16..31 = c, 31 = d, where a block
//! lists the three diagonals then the three off-diagonal quaternions in
//! order-basis coordinates.

use num_traits::{One, Zero};

use crate::error::Error;
use crate::jordan::HermMatrix;
use crate::quat::{GaussianRational, QuatAlgebra, QuatElement};
use crate::rational::{invert, matmul, rat, Rat};
use crate::ring::{is_zero, Coeff};

#[derive(Clone, Debug, PartialEq)]
pub struct WVector<K: Coeff> {
    pub a: K,
    pub b: HermMatrix<K>,
    pub c: HermMatrix<K>,
    pub d: K,
}

impl<K: Coeff> WVector<K> {
    pub fn zero(alg: &QuatAlgebra) -> Self {
        WVector {
            a: K::k_zero(),
            b: HermMatrix::zero(alg),
            c: HermMatrix::zero(alg),
            d: K::k_zero(),
        }
    }

    /// e = (1, 0, 0, 0).
    pub fn e(alg: &QuatAlgebra) -> Self {
        let mut v = Self::zero(alg);
        v.a = K::k_one();
        v
    }

    /// f = (0, 0, 0, 1).
    pub fn f(alg: &QuatAlgebra) -> Self {
        let mut v = Self::zero(alg);
        v.d = K::k_one();
        v
    }

    pub fn alg(&self) -> &QuatAlgebra {
        self.b.alg()
    }

    /// Symplectic form <u, v> = a d' - tr(b, c') + tr(c, b') - d a'.
    pub fn symplectic(&self, other: &Self) -> K {
        self.a
            .mul(&other.d)
            .sub(&self.b.pair(&other.c))
            .add(&self.c.pair(&other.b))
            .sub(&self.d.mul(&other.a))
    }

    /// Quartic form Q = (ad - tr(b,c))^2 + 4aN(c) + 4dN(b) - 4tr(b^#, c^#).
    pub fn quartic(&self) -> K {
        let four = K::from_rat(&rat(4));
        let t = self.a.mul(&self.d).sub(&self.b.pair(&self.c));
        t.mul(&t)
            .add(&four.mul(&self.a).mul(&self.c.norm()))
            .add(&four.mul(&self.d).mul(&self.b.norm()))
            .sub(&four.mul(&self.b.sharp().pair(&self.c.sharp())))
    }

    /// r(Z) = e n(-Z) = (1, -Z, Z^#, -N(Z)).
    pub fn r_of(z: &HermMatrix<K>) -> Self {
        WVector {
            a: K::k_one(),
            b: z.neg(),
            c: z.sharp(),
            d: z.norm().neg(),
        }
    }

    pub fn to_coords(&self) -> Vec<K> {
        let mut out = Vec::with_capacity(32);
        out.push(self.a.clone());
        for h in [&self.b, &self.c] {
            for c in &h.diag {
                out.push(c.clone());
            }
            for a in &h.off {
                out.extend(a.order_coords());
            }
        }
        out.push(self.d.clone());
        debug_assert_eq!(out.len(), 32);
        out
    }

    pub fn from_coords(alg: &QuatAlgebra, v: &[K]) -> Self {
        assert_eq!(v.len(), 32);
        let herm = |base: usize| -> HermMatrix<K> {
            let diag: [K; 3] = std::array::from_fn(|i| v[base + i].clone());
            let off: [QuatElement<K>; 3] = std::array::from_fn(|s| {
                let coords: [K; 4] = std::array::from_fn(|t| v[base + 3 + 4 * s + t].clone());
                QuatElement::from_order_coords(alg, &coords)
            });
            HermMatrix::new(diag, off)
        };
        WVector { a: v[0].clone(), b: herm(1), c: herm(16), d: v[31].clone() }
    }
}

// ---------------------------------------------------------------------------
// group elements
// ---------------------------------------------------------------------------

/// An element of the similitude group, stored as its exact right action on
/// the 32 fixed coordinates.  Construction verifies the symplectic scaling on
/// all basis pairs and the quartic scaling on all basis vectors plus a batch
/// of pseudo-random vectors.
#[derive(Clone, Debug)]
pub struct GElement {
    pub alg: QuatAlgebra,
    /// action[i][j]: coefficient of basis_j in basis_i * g
    pub action: Vec<Vec<Rat>>,
    /// similitude on W: <ug, vg> = nu <u, v>, Q(ug) = nu^2 Q(u)
    pub nu: Rat,
    /// similitude of the underlying 6x6 matrix for embedded GSp6 elements
    pub nu6: Option<Rat>,
}

fn basis_vector(alg: &QuatAlgebra, i: usize) -> WVector<Rat> {
    let mut v = vec![Rat::zero(); 32];
    v[i] = Rat::one();
    WVector::from_coords(alg, &v)
}

/// Deterministic small pseudo-random W vectors for form verification.
fn probe_vectors(alg: &QuatAlgebra, count: usize, seed: u64) -> Vec<WVector<Rat>> {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 7) as i64 - 3
    };
    (0..count)
        .map(|_| {
            let coords: Vec<Rat> = (0..32).map(|_| rat(next())).collect();
            WVector::from_coords(alg, &coords)
        })
        .collect()
}

impl GElement {
    /// Build from an explicit action matrix, verifying the form scalings.
    pub fn new(
        alg: &QuatAlgebra,
        action: Vec<Vec<Rat>>,
        nu: Rat,
        nu6: Option<Rat>,
    ) -> Result<Self, Error> {
        let g = GElement { alg: alg.clone(), action, nu, nu6 };
        g.verify()?;
        Ok(g)
    }

    pub(crate) fn verify(&self) -> Result<(), Error> {
        // symplectic: M S M^T = nu S on the Gram matrix of <,> over the basis
        let s = symplectic_gram(&self.alg);
        let mst = matmul(&matmul(&self.action, &s), &transpose(&self.action));
        for i in 0..32 {
            for j in 0..32 {
                if mst[i][j] != &self.nu * &s[i][j] {
                    return Err(Error::NotSymplectic);
                }
            }
        }
        // quartic on all basis vectors plus probe vectors
        let nu2 = &self.nu * &self.nu;
        for i in 0..32 {
            let v = basis_vector(&self.alg, i);
            if self.apply(&v).quartic() != &nu2 * v.quartic() {
                return Err(Error::NotSymplectic);
            }
        }
        for v in probe_vectors(&self.alg, 8, 0xC0FFEE) {
            if self.apply(&v).quartic() != &nu2 * v.quartic() {
                return Err(Error::NotSymplectic);
            }
        }
        Ok(())
    }

    /// Internal constructor that skips form verification; used where the
    /// caller performs the full spanning-set checks itself.
    pub(crate) fn new_unverified(
        alg: &QuatAlgebra,
        action: Vec<Vec<Rat>>,
        nu: Rat,
        nu6: Option<Rat>,
    ) -> Self {
        GElement { alg: alg.clone(), action, nu, nu6 }
    }

    pub fn identity(alg: &QuatAlgebra) -> Self {
        let action: Vec<Vec<Rat>> = (0..32)
            .map(|i| (0..32).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        GElement { alg: alg.clone(), action, nu: Rat::one(), nu6: Some(Rat::one()) }
    }

    /// Right action on a W vector over any coefficient ring.
    pub fn apply<K: Coeff>(&self, v: &WVector<K>) -> WVector<K> {
        let coords = v.to_coords();
        let mut out = vec![K::k_zero(); 32];
        for (i, ci) in coords.iter().enumerate() {
            if is_zero(ci) {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                if !num_traits::Zero::is_zero(&self.action[i][j]) {
                    *slot = slot.add(&ci.scale(&self.action[i][j]));
                }
            }
        }
        WVector::from_coords(&self.alg, &out)
    }

    /// Group law: (u * (g h)) = (u * g) * h.
    pub fn mul(&self, other: &Self) -> Self {
        GElement {
            alg: self.alg.clone(),
            action: matmul(&self.action, &other.action),
            nu: &self.nu * &other.nu,
            nu6: match (&self.nu6, &other.nu6) {
                (Some(a), Some(b)) => Some(a * b),
                _ => None,
            },
        }
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        Ok(GElement {
            alg: self.alg.clone(),
            action: invert(&self.action)?,
            nu: Rat::one() / &self.nu,
            nu6: self.nu6.as_ref().map(|n| Rat::one() / n),
        })
    }
}

fn transpose(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

fn symplectic_gram(alg: &QuatAlgebra) -> Vec<Vec<Rat>> {
    let basis: Vec<WVector<Rat>> = (0..32).map(|i| basis_vector(alg, i)).collect();
    basis
        .iter()
        .map(|u| basis.iter().map(|v| u.symplectic(v)).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// unipotent embeddings
// ---------------------------------------------------------------------------

/// The embedding n: (a,b,c,d) n(X) = (a, b + aX, c + b x X + a X^#,
/// d + tr(c,X) + tr(b,X^#) + a N(X)).
pub fn n_embed(x: &HermMatrix<Rat>) -> Result<GElement, Error> {
    build_from_action(x.alg(), Rat::one(), Some(Rat::one()), |v| apply_n(x, v))
}

/// The opposite embedding n-bar.
pub fn nbar_embed(x: &HermMatrix<Rat>) -> Result<GElement, Error> {
    build_from_action(x.alg(), Rat::one(), Some(Rat::one()), |v| apply_nbar(x, v))
}

pub fn apply_n<K: Coeff>(x: &HermMatrix<Rat>, v: &WVector<K>) -> WVector<K> {
    let xk = herm_to_k::<K>(x);
    let xs = herm_to_k::<K>(&x.sharp());
    let nx = K::from_rat(&x.norm());
    WVector {
        a: v.a.clone(),
        b: v.b.add(&xk.scale_k(&v.a)),
        c: v.c.add(&v.b.cross(&xk)).add(&xs.scale_k(&v.a)),
        d: v
            .d
            .add(&v.c.pair(&xk))
            .add(&v.b.pair(&xs))
            .add(&v.a.mul(&nx)),
    }
}

pub fn apply_nbar<K: Coeff>(x: &HermMatrix<Rat>, v: &WVector<K>) -> WVector<K> {
    let xk = herm_to_k::<K>(x);
    let xs = herm_to_k::<K>(&x.sharp());
    let nx = K::from_rat(&x.norm());
    WVector {
        a: v
            .a
            .add(&v.b.pair(&xk))
            .add(&v.c.pair(&xs))
            .add(&v.d.mul(&nx)),
        b: v.b.add(&v.c.cross(&xk)).add(&xs.scale_k(&v.d)),
        c: v.c.add(&xk.scale_k(&v.d)),
        d: v.d.clone(),
    }
}

fn herm_to_k<K: Coeff>(h: &HermMatrix<Rat>) -> HermMatrix<K> {
    HermMatrix {
        diag: std::array::from_fn(|i| K::from_rat(&h.diag[i])),
        off: std::array::from_fn(|i| {
            QuatElement::new(
                h.alg(),
                std::array::from_fn(|t| K::from_rat(&h.off[i].coords[t])),
            )
        }),
    }
}

fn build_from_action<F>(
    alg: &QuatAlgebra,
    nu: Rat,
    nu6: Option<Rat>,
    f: F,
) -> Result<GElement, Error>
where
    F: Fn(&WVector<Rat>) -> WVector<Rat>,
{
    let action: Vec<Vec<Rat>> = (0..32)
        .map(|i| f(&basis_vector(alg, i)).to_coords())
        .collect();
    GElement::new(alg, action, nu, nu6)
}

// ---------------------------------------------------------------------------
// GSp6 embedding through the wedge cube
// ---------------------------------------------------------------------------

/// Triples (i < j < k) indexing the basis of /\^3 W_6; W_6 basis order is
/// e1, e2, e3, f1, f2, f3.
fn triples() -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(20);
    for i in 0..6 {
        for j in (i + 1)..6 {
            for k in (j + 1)..6 {
                out.push([i, j, k]);
            }
        }
    }
    out
}

fn sort_signed(mut t: [usize; 3]) -> (i64, [usize; 3]) {
    let mut sign = 1i64;
    for a in 0..3 {
        for b in (a + 1)..3 {
            if t[a] > t[b] {
                t.swap(a, b);
                sign = -sign;
            }
        }
    }
    (sign, t)
}

/// 3x3 minor det of g on rows `r`, columns `c`.
fn minor3(g: &[Vec<Rat>; 6], r: &[usize; 3], c: &[usize; 3]) -> Rat {
    let m = |i: usize, j: usize| &g[r[i]][c[j]];
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

/// Similitude of a 6x6 symplectic-similitude matrix, verifying g J g^T = nu J.
pub fn gsp6_similitude(g: &[Vec<Rat>; 6]) -> Result<Rat, Error> {
    let mut j6 = vec![vec![Rat::zero(); 6]; 6];
    for i in 0..3 {
        j6[i][3 + i] = Rat::one();
        j6[3 + i][i] = -Rat::one();
    }
    let gv: Vec<Vec<Rat>> = g.to_vec();
    let gjgt = matmul(&matmul(&gv, &j6), &transpose(&gv));
    let nu = gjgt[0][3].clone();
    if num_traits::Zero::is_zero(&nu) {
        return Err(Error::NotSymplectic);
    }
    for r in 0..6 {
        for c in 0..6 {
            if gjgt[r][c] != &nu * &j6[r][c] {
                return Err(Error::NotSymplectic);
            }
        }
    }
    Ok(nu)
}

/// Wedge-coefficient description of a W vector: for each sorted triple a
/// quaternion in order-basis coordinates.  The Hermitian matrix entries are
/// m[0][0] = c1, m[0][1] = a3, m[0][2] = a2*, m[1][0] = a3*, m[1][1] = c2,
/// m[1][2] = a1, m[2][0] = a2, m[2][1] = a1*, m[2][2] = c3, and b_{ij} sits on
/// e_i* ^ f_j = e_{i+1} ^ e_{i+2} ^ f_j, c_{ij} on f_i* ^ e_j.
struct WedgeRepr {
    coeff: Vec<[Rat; 4]>, // indexed like triples()
}

fn herm_entries(h: &HermMatrix<Rat>) -> [[QuatElement<Rat>; 3]; 3] {
    let alg = h.alg();
    let s = |k: &Rat| QuatElement::scalar(alg, k.clone());
    [
        [s(&h.diag[0]), h.off[2].clone(), h.off[1].conj()],
        [h.off[2].conj(), s(&h.diag[1]), h.off[0].clone()],
        [h.off[1].clone(), h.off[0].conj(), s(&h.diag[2])],
    ]
}

fn w_to_wedge(v: &WVector<Rat>, tidx: &std::collections::HashMap<[usize; 3], usize>) -> WedgeRepr {
    let alg = v.alg();
    let zero = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
    let mut coeff = vec![zero; 20];
    let add_to = |coeff: &mut Vec<[Rat; 4]>, idx: usize, sign: i64, q: &QuatElement<Rat>| {
        let oc = q.order_coords();
        for t in 0..4 {
            let term = &oc[t] * rat(sign);
            coeff[idx][t] += term;
        }
    };
    add_to(&mut coeff, tidx[&[0, 1, 2]], 1, &QuatElement::scalar(alg, v.a.clone()));
    add_to(&mut coeff, tidx[&[3, 4, 5]], 1, &QuatElement::scalar(alg, v.d.clone()));
    let bm = herm_entries(&v.b);
    let cm = herm_entries(&v.c);
    for i in 0..3 {
        for j in 0..3 {
            // e_i* ^ f_j
            let (sign, t) = sort_signed([(i + 1) % 3, (i + 2) % 3, 3 + j]);
            add_to(&mut coeff, tidx[&t], sign, &bm[i][j]);
            // f_i* ^ e_j
            let (sign, t) = sort_signed([3 + (i + 1) % 3, 3 + (i + 2) % 3, j]);
            add_to(&mut coeff, tidx[&t], sign, &cm[i][j]);
        }
    }
    WedgeRepr { coeff }
}

fn wedge_to_w(
    alg: &QuatAlgebra,
    w: &WedgeRepr,
    tidx: &std::collections::HashMap<[usize; 3], usize>,
) -> Result<WVector<Rat>, Error> {
    let get = |t: [usize; 3], sign: i64| -> QuatElement<Rat> {
        let coords: [Rat; 4] = std::array::from_fn(|k| &w.coeff[tidx[&t]][k] * rat(sign));
        QuatElement::from_order_coords(alg, &coords)
    };
    let scalar_of = |q: &QuatElement<Rat>| -> Result<Rat, Error> {
        if q.coords[1..].iter().all(num_traits::Zero::is_zero) {
            Ok(q.coords[0].clone())
        } else {
            Err(Error::NotSymplectic)
        }
    };
    let a = scalar_of(&get([0, 1, 2], 1))?;
    let d = scalar_of(&get([3, 4, 5], 1))?;
    let read_matrix = |eside: bool| -> Result<[[QuatElement<Rat>; 3]; 3], Error> {
        let mut rows: Vec<Vec<QuatElement<Rat>>> = Vec::new();
        for i in 0..3 {
            let mut row = Vec::new();
            for j in 0..3 {
                let raw = if eside {
                    sort_signed([(i + 1) % 3, (i + 2) % 3, 3 + j])
                } else {
                    sort_signed([3 + (i + 1) % 3, 3 + (i + 2) % 3, j])
                };
                row.push(get(raw.1, raw.0));
            }
            rows.push(row);
        }
        Ok([
            [rows[0][0].clone(), rows[0][1].clone(), rows[0][2].clone()],
            [rows[1][0].clone(), rows[1][1].clone(), rows[1][2].clone()],
            [rows[2][0].clone(), rows[2][1].clone(), rows[2][2].clone()],
        ])
    };
    let to_herm = |m: [[QuatElement<Rat>; 3]; 3]| -> Result<HermMatrix<Rat>, Error> {
        // hermitian shape is forced for images of W (Lemma 5.1); verify
        for i in 0..3 {
            if !m[i][i].coords[1..].iter().all(num_traits::Zero::is_zero) {
                return Err(Error::NotSymplectic);
            }
            for j in 0..3 {
                if m[j][i] != m[i][j].conj() {
                    return Err(Error::NotSymplectic);
                }
            }
        }
        Ok(HermMatrix::new(
            [
                m[0][0].coords[0].clone(),
                m[1][1].coords[0].clone(),
                m[2][2].coords[0].clone(),
            ],
            [m[1][2].clone(), m[2][0].clone(), m[0][1].clone()],
        ))
    };
    let b = to_herm(read_matrix(true)?)?;
    let c = to_herm(read_matrix(false)?)?;
    Ok(WVector { a, b, c, d })
}

/// Embed a rational symplectic-similitude 6x6 matrix into GL(W) through the
/// nu^{-1}-twisted wedge cube.  The result is a G element with nu_W = nu_6.
pub fn embed_gsp6(alg: &QuatAlgebra, g: &[Vec<Rat>; 6]) -> Result<GElement, Error> {
    let e = embed_gsp6_unverified(alg, g)?;
    e.verify()?;
    Ok(e)
}

/// The same embedding without the constructor's form verification, for
/// callers that run the spanning-set checks themselves.
pub(crate) fn embed_gsp6_unverified(
    alg: &QuatAlgebra,
    g: &[Vec<Rat>; 6],
) -> Result<GElement, Error> {
    let nu = gsp6_similitude(g)?;
    let ts = triples();
    let tidx: std::collections::HashMap<[usize; 3], usize> =
        ts.iter().enumerate().map(|(n, t)| (*t, n)).collect();
    // minors[t][s] = det g[rows t][cols s]
    let minors: Vec<Vec<Rat>> = ts
        .iter()
        .map(|t| ts.iter().map(|s| minor3(g, t, s)).collect())
        .collect();
    let nu_inv = Rat::one() / &nu;
    let mut action = Vec::with_capacity(32);
    for i in 0..32 {
        let v = basis_vector(alg, i);
        let wedge = w_to_wedge(&v, &tidx);
        let mut out = WedgeRepr { coeff: vec![[Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()]; 20] };
        for (t, q) in wedge.coeff.iter().enumerate() {
            if q.iter().all(num_traits::Zero::is_zero) {
                continue;
            }
            for s in 0..20 {
                let m = &minors[t][s];
                if num_traits::Zero::is_zero(m) {
                    continue;
                }
                let scaled = m * &nu_inv;
                for k in 0..4 {
                    let term = &q[k] * &scaled;
                    out.coeff[s][k] += term;
                }
            }
        }
        action.push(wedge_to_w(alg, &out, &tidx)?.to_coords());
    }
    Ok(GElement::new_unverified(alg, action, nu.clone(), Some(nu)))
}

// ---------------------------------------------------------------------------
// special elements
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialElement {
    Iota0,
    Iota1,
    Iota2,
    Iota3,
    /// Atkin-Lehner involution at level M
    AtkinLehner(u64),
}

fn mat6(rows: [[i64; 6]; 6]) -> [Vec<Rat>; 6] {
    std::array::from_fn(|i| rows[i].iter().map(|&x| rat(x)).collect())
}

/// The displayed 6x6 Bruhat representatives.
pub fn iota_matrix(j: u8) -> [Vec<Rat>; 6] {
    match j {
        0 => mat6([
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ]),
        1 => mat6([
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, -1, 0, 0, 0],
        ]),
        2 => mat6([
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 1, 0, 0],
            [0, -1, 0, 0, 0, 0],
            [0, 0, -1, 0, 0, 0],
        ]),
        3 => mat6([
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
            [-1, 0, 0, 0, 0, 0],
            [0, -1, 0, 0, 0, 0],
            [0, 0, -1, 0, 0, 0],
        ]),
        _ => panic!("iota index out of range"),
    }
}

/// Direct table action of the Atkin-Lehner element:
/// (a, b, c, d) w_M = (-d, M c, -M^2 b, M^3 a).
pub fn apply_w_m<K: Coeff>(m: u64, v: &WVector<K>) -> WVector<K> {
    let mm = rat(m as i64);
    let m2 = &mm * &mm;
    let m3 = &m2 * &mm;
    WVector {
        a: v.d.neg(),
        b: v.c.scale(&mm),
        c: v.b.scale(&m2).neg(),
        d: v.a.scale(&m3),
    }
}

/// Inverse table action: (a,b,c,d) w_M^{-1} = (M^{-3} d, -M^{-2} c, M^{-1} b, -a).
pub fn apply_w_m_inv<K: Coeff>(m: u64, v: &WVector<K>) -> WVector<K> {
    let mm = rat(m as i64);
    let m2 = &mm * &mm;
    let m3 = &m2 * &mm;
    WVector {
        a: v.d.scale(&(Rat::one() / m3)),
        b: v.c.scale(&(Rat::one() / m2)).neg(),
        c: v.b.scale(&(Rat::one() / mm)),
        d: v.a.neg(),
    }
}

pub fn special_element(alg: &QuatAlgebra, which: SpecialElement) -> Result<GElement, Error> {
    match which {
        SpecialElement::Iota0 => Ok(GElement::identity(alg)),
        SpecialElement::Iota1 => embed_gsp6(alg, &iota_matrix(1)),
        SpecialElement::Iota2 => embed_gsp6(alg, &iota_matrix(2)),
        SpecialElement::Iota3 => embed_gsp6(alg, &iota_matrix(3)),
        SpecialElement::AtkinLehner(m) => {
            let m3 = rat((m * m * m) as i64);
            build_from_action(alg, m3, None, |v| apply_w_m(m, v))
        }
    }
}

// ---------------------------------------------------------------------------
// factor of automorphy
// ---------------------------------------------------------------------------

/// j(g, Z) = <r(Z) g^{-1}, f> together with the moved point gZ recovered from
/// the b-component of r(Z) g^{-1} = j(g, Z) r(gZ).
pub fn j_factor(
    g: &GElement,
    z: &HermMatrix<GaussianRational>,
) -> Result<(GaussianRational, HermMatrix<GaussianRational>), Error> {
    let ginv = g.inverse()?;
    j_factor_preinverted(&ginv, z)
}

/// Same as [`j_factor`] when the inverse action is already at hand.
pub fn j_factor_preinverted(
    ginv: &GElement,
    z: &HermMatrix<GaussianRational>,
) -> Result<(GaussianRational, HermMatrix<GaussianRational>), Error> {
    let rz = WVector::r_of(z);
    let img = ginv.apply(&rz);
    let j = img.a.clone();
    if j.is_zero() {
        return Err(Error::SingularPosition);
    }
    let neg_jinv = j.inv()?.neg();
    let gz = img.b.scale_k(&neg_jinv);
    Ok((j, gz))
}
