//! Dyadic numbers and closed real intervals with dyadic endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// `mant * 2^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        self.mant.sign_cmp()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Largest `m / 2^prec` that is `<= r`.
    pub fn floor_rational(r: &BigRational, prec: u32) -> Self {
        let scaled = r.numer() << prec as usize;
        Dyadic::new(scaled.div_floor(r.denom()), -(prec as i64))
    }

    /// Smallest `m / 2^prec` that is `>= r`.
    pub fn ceil_rational(r: &BigRational, prec: u32) -> Self {
        let scaled = r.numer() << prec as usize;
        Dyadic::new(div_ceil(&scaled, r.denom()), -(prec as i64))
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            // arithmetic shift rounds toward negative infinity
            &self.mant >> (-self.exp) as usize
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (
            &self.mant << (self.exp - e) as usize,
            &other.mant << (other.exp - e) as usize,
            e,
        )
    }

    /// Approximate base-2 logarithm of the absolute value.
    pub fn log2_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        log2_bigint(&self.mant.abs()) + self.exp as f64
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits();
        let (m, e) = if bits > 64 {
            let shift = bits - 64;
            (&self.mant >> shift as usize, self.exp + shift as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(0.0);
        // split the scaling so that intermediate powers stay finite
        let e = e.clamp(-2200, 2200) as i32;
        let half = e / 2;
        m * 2f64.powi(half) * 2f64.powi(e - half)
    }

    /// Exact decimal expansion (terminates because the denominator is a power of two).
    pub fn to_decimal_string(&self) -> String {
        if self.exp >= 0 {
            return (&self.mant << self.exp as usize).to_string();
        }
        let k = (-self.exp) as usize;
        let scaled = &self.mant * num_traits::pow(BigInt::from(5u32), k);
        let neg = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let (int_part, frac_part) = if digits.len() > k {
            let (i, f) = digits.split_at(digits.len() - k);
            (i.to_string(), f.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(k - digits.len()), digits))
        };
        let frac_part = frac_part.trim_end_matches('0');
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int_part);
        if !frac_part.is_empty() {
            s.push('.');
            s.push_str(frac_part);
        }
        s
    }

    /// Upper bound for `self^n`, keeping about `prec` significant bits. Requires `self >= 0`.
    pub fn pow_round_up(&self, n: u64, prec: u32) -> Dyadic {
        assert!(!self.mant.is_negative());
        let mut result = Dyadic::from_int(1);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = (&result * &base).round_up(prec);
            }
            n >>= 1;
            if n > 0 {
                base = (&base * &base).round_up(prec);
            }
        }
        result
    }

    /// Round toward +infinity to `prec` significant bits.
    pub fn round_up(&self, prec: u32) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = (bits - prec as u64) as usize;
        let m = div_ceil(&self.mant, &(BigInt::one() << drop));
        Dyadic::new(m, self.exp + drop as i64)
    }

    /// Round toward -infinity to `prec` significant bits.
    pub fn round_down(&self, prec: u32) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let drop = (bits - prec as u64) as usize;
        Dyadic::new(&self.mant >> drop, self.exp + drop as i64)
    }
}

pub(crate) fn div_ceil(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Approximate `log2(n)` for `n > 0`.
pub fn log2_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift as usize;
    top.to_f64().unwrap().log2() + shift as f64
}

/// Approximate natural log of `n > 0`.
pub fn ln_bigint(n: &BigInt) -> f64 {
    log2_bigint(n) * std::f64::consts::LN_2
}

/// Approximate natural log of a positive rational.
pub fn ln_rational(r: &BigRational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl std::ops::Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl std::ops::Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &rhs.mant, self.exp + rhs.exp)
    }
}

impl std::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
}

#[derive(Serialize)]
struct IntervalJson {
    lo: String,
    hi: String,
    bits: i64,
}

impl RealInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RealInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        RealInterval { lo: x.clone(), hi: x }
    }

    /// Enclose `r` with endpoints on the grid `2^-prec`.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        RealInterval {
            lo: Dyadic::floor_rational(r, prec),
            hi: Dyadic::ceil_rational(r, prec),
        }
    }

    pub fn from_rational_bounds(lo: &BigRational, hi: &BigRational, prec: u32) -> Self {
        assert!(lo <= hi);
        RealInterval {
            lo: Dyadic::floor_rational(lo, prec),
            hi: Dyadic::ceil_rational(hi, prec),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// `-log2(width)`; infinite for a point.
    pub fn precision_bits(&self) -> f64 {
        -self.width().log2_abs()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() != Ordering::Greater && self.hi.signum() != Ordering::Less
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(RealInterval { lo, hi })
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.intersect(other).is_some()
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &RealInterval) -> RealInterval {
        RealInterval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval { lo: -&self.hi, hi: -&self.lo }
    }

    /// Exact product of two intervals.
    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RealInterval { lo, hi }
    }

    /// Multiply by a rational, rounding outward to `prec` fractional bits.
    pub fn mul_rational(&self, r: &BigRational, prec: u32) -> RealInterval {
        let a = self.lo.to_rational() * r;
        let b = self.hi.to_rational() * r;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        RealInterval::from_rational_bounds(&lo, &hi, prec)
    }

    pub fn add_rational(&self, r: &BigRational, prec: u32) -> RealInterval {
        let lo = self.lo.to_rational() + r;
        let hi = self.hi.to_rational() + r;
        RealInterval::from_rational_bounds(&lo, &hi, prec)
    }

    /// `1/x`, rounded outward; `None` when the interval meets zero.
    pub fn recip(&self, prec: u32) -> Option<RealInterval> {
        if self.contains_zero() {
            return None;
        }
        let a = self.lo.to_rational().recip();
        let b = self.hi.to_rational().recip();
        Some(RealInterval::from_rational_bounds(&b, &a, prec))
    }

    /// Drop mantissa bits beyond `prec` fractional bits, rounding outward.
    pub fn coarsen(&self, prec: u32) -> RealInterval {
        RealInterval::from_rational_bounds(&self.lo.to_rational(), &self.hi.to_rational(), prec)
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    pub fn to_json(&self) -> serde_json::Value {
        let bits = self.precision_bits();
        let bits = if bits.is_finite() { bits.floor() as i64 } else { i64::MAX };
        serde_json::to_value(IntervalJson {
            lo: self.lo.to_decimal_string(),
            hi: self.hi.to_decimal_string(),
            bits,
        })
        .expect("interval serialises")
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let iv = RealInterval::from_rational(&q(1, 3), 20);
        assert!(iv.contains_rational(&q(1, 3)));
        assert!(iv.precision_bits() >= 19.9);
        let exact = RealInterval::from_rational(&q(3, 8), 20);
        assert!(exact.width().is_zero());
    }

    #[test]
    fn decimal_strings_are_exact() {
        assert_eq!(Dyadic::new(BigInt::from(3), -2).to_decimal_string(), "0.75");
        assert_eq!(Dyadic::new(BigInt::from(-5), -3).to_decimal_string(), "-0.625");
        assert_eq!(Dyadic::new(BigInt::from(5), 2).to_decimal_string(), "20");
        assert_eq!(Dyadic::new(BigInt::from(1), -4).to_decimal_string(), "0.0625");
    }

    #[test]
    fn floor_of_negative_dyadic() {
        assert_eq!(Dyadic::new(BigInt::from(-3), -1).floor(), BigInt::from(-2));
        assert_eq!(Dyadic::new(BigInt::from(-3), -1).ceil(), BigInt::from(-1));
    }

    #[test]
    fn pow_round_up_bounds_exact_power() {
        let x = Dyadic::new(BigInt::from(3), -2);
        let up = x.pow_round_up(50, 40);
        let exact = num_traits::pow(q(3, 4), 50);
        assert!(up.to_rational() >= exact);
        assert!(up.to_rational() <= exact * q(1_000_001, 1_000_000));
    }

    #[test]
    fn reciprocal_encloses() {
        let iv = RealInterval::from_rational_bounds(&q(1, 3), &q(1, 2), 30);
        let r = iv.recip(30).unwrap();
        assert!(r.contains_rational(&q(2, 1)) && r.contains_rational(&q(3, 1)));
    }
}
