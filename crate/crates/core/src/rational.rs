//! Arbitrary-precision rationals and small exact linear algebra helpers.
//!
//! `num_rational::BigRational` already maintains the two invariants the rest
//! of the crate relies on (always reduced, denominator positive), so `Rat` is
//! an alias rather than a wrapper.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact integer power with negative exponents allowed.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        base.pow(exp as i32)
    } else {
        Rat::one() / base.pow((-exp) as i32)
    }
}

/// Parse the `"p/q"` (or `"p"`) wire format.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Invalid(format!("bad rational numerator: {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Invalid(format!("bad rational denominator: {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Invalid(format!("zero denominator: {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Canonical `"p/q"` rendering; integers drop the `/q` part.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// p-adic valuation of a nonzero rational.
pub fn val_p(r: &Rat, p: u64) -> Result<i64, Error> {
    if r.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut n = r.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = r.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Ok(v)
}

/// Solve A x = b exactly by Gaussian elimination. A is n x n row-major.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>, Error> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::OrderSingular)?;
        m.swap(col, piv);
        let inv = Rat::one() / m[col][col].clone();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Exact inverse of a square rational matrix.
pub fn invert(a: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>, Error> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rat> = (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
        cols.push(solve(a, &e)?);
    }
    // cols[j] is the j-th column of the inverse
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect())
}

/// Exact determinant by fraction-free-ish elimination on rationals.
pub fn det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut d = Rat::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if piv != col {
            m.swap(col, piv);
            d = -d;
        }
        d *= &m[col][col].clone();
        let inv = Rat::one() / m[col][col].clone();
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for c in col..n {
                    let sub = &f * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
    }
    d
}

pub fn matmul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[t][j].is_zero() {
                    let add = &a[i][t] * &b[t][j];
                    out[i][j] += add;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        for s in ["3/4", "-7/2", "5", "0", "2/4"] {
            let r = parse_rat(s).unwrap();
            let t = parse_rat(&format_rat(&r)).unwrap();
            assert_eq!(r, t);
        }
        // canonicalization: 2/4 -> 1/2
        assert_eq!(format_rat(&parse_rat("2/4").unwrap()), "1/2");
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(val_p(&rat_frac(1, 2), 2).unwrap(), -1);
        assert_eq!(val_p(&rat(12), 2).unwrap(), 2);
        assert_eq!(val_p(&rat(12), 3).unwrap(), 1);
        assert!(val_p(&rat(0), 2).is_err());
    }

    #[test]
    fn small_linear_algebra() {
        let a = vec![
            vec![rat(2), rat(1)],
            vec![rat(1), rat(1)],
        ];
        let inv = invert(&a).unwrap();
        let prod = matmul(&a, &inv);
        assert_eq!(prod[0][0], rat(1));
        assert_eq!(prod[0][1], rat(0));
        assert_eq!(det(&a), rat(1));
    }
}
