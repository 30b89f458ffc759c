//! Log-domain magnitudes for elements far too large to hold exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cf_core::interval::{ln_bigint, ln_rational};

/// Natural log of a nonnegative magnitude; zero is `-inf`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogMag(pub f64);

impl LogMag {
    pub fn zero() -> Self {
        LogMag(f64::NEG_INFINITY)
    }

    pub fn one() -> Self {
        LogMag(0.0)
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        if n.is_zero() {
            LogMag::zero()
        } else {
            LogMag(ln_bigint(&n.abs()))
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        if r.is_zero() {
            LogMag::zero()
        } else {
            LogMag(ln_rational(&r.abs()))
        }
    }

    pub fn add(self, o: LogMag) -> LogMag {
        LogMag(ln_add(self.0, o.0))
    }

    pub fn mul(self, o: LogMag) -> LogMag {
        if self.is_zero() || o.is_zero() {
            LogMag::zero()
        } else {
            LogMag(self.0 + o.0)
        }
    }
}

/// `ln(e^x + e^y)`.
pub fn ln_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^x - 1)` for `x > 0`.
pub fn ln_expm1(x: f64) -> f64 {
    if x > 40.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// `ln(1 - e^{-x})` for `x > 0`.
pub fn ln_one_minus_exp_neg(x: f64) -> f64 {
    (-(-x).exp()).ln_1p()
}

/// `ln(sum_{i<m} X^i)` where `lx = ln X > 0`; `-inf` when `m = 0`.
pub fn ln_geometric(lx: f64, m: u64) -> f64 {
    if m == 0 {
        return f64::NEG_INFINITY;
    }
    let mf = m as f64;
    (mf - 1.0) * lx + ln_one_minus_exp_neg(mf * lx) - ln_one_minus_exp_neg(lx)
}

/// Signed log-domain accumulator for alternating tails.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog {
    pub negative: bool,
    pub ln: f64,
}

impl SignedLog {
    pub fn zero() -> Self {
        SignedLog { negative: false, ln: f64::NEG_INFINITY }
    }

    pub fn new(negative: bool, ln: f64) -> Self {
        SignedLog { negative, ln }
    }

    pub fn add(self, o: SignedLog) -> SignedLog {
        if o.ln == f64::NEG_INFINITY {
            return self;
        }
        if self.ln == f64::NEG_INFINITY {
            return o;
        }
        let (big, small) = if self.ln >= o.ln { (self, o) } else { (o, self) };
        if big.negative == small.negative {
            SignedLog { negative: big.negative, ln: ln_add(big.ln, small.ln) }
        } else {
            let d = small.ln - big.ln;
            if d == 0.0 {
                return SignedLog::zero();
            }
            SignedLog { negative: big.negative, ln: big.ln + (-d.exp()).ln_1p() }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sum_small_case() {
        // 1 + 3 + 9 = 13
        assert!((ln_geometric(3f64.ln(), 3) - 13f64.ln()).abs() < 1e-12);
        assert_eq!(ln_geometric(2.0, 0), f64::NEG_INFINITY);
    }

    #[test]
    fn signed_sum() {
        let a = SignedLog::new(false, 10f64.ln());
        let b = SignedLog::new(true, 4f64.ln());
        let s = a.add(b);
        assert!(!s.negative && (s.ln - 6f64.ln()).abs() < 1e-12);
        let t = b.add(SignedLog::new(false, 1f64.ln()));
        assert!(t.negative && (t.ln - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn big_integer_logs() {
        let n = BigInt::from(1u8) << 5000usize;
        assert!((LogMag::from_bigint(&n).ln() - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_expm1(2.0) - (2f64.exp() - 1.0).ln()).abs() < 1e-12);
    }
}
