//! Certified continued fraction digits of every real in an interval.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::interval::RealInterval;

/// Partial quotients `A_1, A_2, ...` shared by every real in `iv`, which must lie inside
/// `(0, 1)`. Returns the quotients and how many of them are certified (all returned ones).
pub fn cf_extract(iv: &RealInterval, max_terms: usize) -> (Vec<BigInt>, usize) {
    let mut lo = iv.lo().to_rational();
    let mut hi = iv.hi().to_rational();
    let one = BigRational::one();
    let mut out = Vec::new();
    if lo <= BigRational::zero() || hi >= one {
        return (out, 0);
    }
    while out.len() < max_terms {
        if lo.is_zero() || hi.is_zero() {
            break;
        }
        // x -> 1/x reverses order
        let rl = hi.recip();
        let rh = lo.recip();
        let a = rl.floor();
        if a != rh.floor() {
            break;
        }
        out.push(a.to_integer());
        let nlo = &rl - &a;
        let nhi = &rh - &a;
        if nlo.is_zero() && nhi.is_zero() {
            break;
        }
        lo = nlo;
        hi = nhi;
    }
    let n = out.len();
    (out, n)
}

/// Continued fraction of a rational in `(0,1)`.
pub fn rational_cf(r: &BigRational) -> Vec<BigInt> {
    let mut x = r.clone();
    let mut out = Vec::new();
    while !x.is_zero() {
        let y = x.recip();
        let a = y.floor();
        out.push(a.to_integer());
        x = y - a;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf_core::surd::SurdSum;

    #[test]
    fn golden_ratio_digits() {
        let g = SurdSum::quadratic(&BigInt::from(-1), &BigInt::from(5), &BigInt::from(2)).unwrap();
        let (digits, n) = cf_extract(&g.enclosure(200), 500);
        assert!(n > 100);
        assert!(digits.iter().all(|d| d == &BigInt::one()));
    }

    #[test]
    fn rational_point_interval() {
        let r = BigRational::new(BigInt::from(7), BigInt::from(16));
        let (digits, _) = cf_extract(&RealInterval::from_rational(&r, 10), 10);
        assert_eq!(digits, rational_cf(&r));
        assert_eq!(digits, vec![BigInt::from(2), BigInt::from(3), BigInt::from(2)]);
    }

    #[test]
    fn out_of_range_is_empty() {
        let r = BigRational::new(BigInt::from(3), BigInt::from(2));
        assert_eq!(cf_extract(&RealInterval::from_rational(&r, 10), 10).1, 0);
    }
}
