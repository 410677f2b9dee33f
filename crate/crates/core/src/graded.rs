//! (pi, i)-graded symbolic constants.  Every transcendental that appears in
//! the archimedean normalizations is of the form q * pi^a * i^b with q in a
//! cyclotomic field; pi stays symbolic forever, i is folded into the
//! cyclotomic part only on explicit request.

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloValue;
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedConstant {
    pub rational_part: CycloValue,
    pub pi_exponent: i64,
    /// exponent of i, kept modulo 4
    pub i_exponent: u8,
}

impl GradedConstant {
    pub fn one() -> Self {
        GradedConstant { rational_part: CycloValue::one(), pi_exponent: 0, i_exponent: 0 }
    }

    pub fn from_cyclo(v: CycloValue) -> Self {
        GradedConstant { rational_part: v, pi_exponent: 0, i_exponent: 0 }
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_cyclo(CycloValue::from_rat(r))
    }

    pub fn new(rational_part: CycloValue, pi_exponent: i64, i_exponent: i64) -> Self {
        GradedConstant { rational_part, pi_exponent, i_exponent: i_exponent.rem_euclid(4) as u8 }
    }

    /// Componentwise product; exponents add, i-exponent wraps mod 4.
    pub fn mul(&self, other: &Self) -> Self {
        GradedConstant {
            rational_part: self.rational_part.mul(&other.rational_part),
            pi_exponent: self.pi_exponent + other.pi_exponent,
            i_exponent: (self.i_exponent + other.i_exponent) % 4,
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        GradedConstant {
            rational_part: self.rational_part.scale(r),
            pi_exponent: self.pi_exponent,
            i_exponent: self.i_exponent,
        }
    }

    /// Fold the i-power into the cyclotomic part (i = zeta_4), leaving only
    /// the symbolic pi grading.
    pub fn fold_i(&self) -> Self {
        if self.i_exponent == 0 {
            return self.clone();
        }
        let i_val = CycloValue::root_of_unity(4, self.i_exponent as u64);
        GradedConstant {
            rational_part: self.rational_part.mul(&i_val),
            pi_exponent: self.pi_exponent,
            i_exponent: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn identity_and_exponent_addition() {
        let one = GradedConstant::one();
        assert_eq!(one.mul(&one), one);
        let a = GradedConstant::new(CycloValue::from_int(2), -3, 1);
        let b = GradedConstant::new(CycloValue::from_int(3), -1, 3);
        let p = a.mul(&b);
        assert_eq!(p.rational_part.rational_part().unwrap(), rat(6));
        assert_eq!(p.pi_exponent, -4);
        assert_eq!(p.i_exponent, 0);
    }

    #[test]
    fn folding_i_squared_gives_minus_one() {
        let c = GradedConstant::new(CycloValue::one(), 0, 2);
        let folded = c.fold_i();
        assert_eq!(folded.i_exponent, 0);
        assert_eq!(folded.rational_part.rational_part().unwrap(), rat(-1));
    }
}
