//! Exact real numbers of the form `sum c_i * sqrt(d_i)` with rational `c_i` and
//! squarefree `d_i`. Enough to hold slopes, intercepts and Ostrowski remainders.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::RealInterval;
use crate::error::{Error, Result};

/// Trial division bound used when extracting square factors from a radicand.
const TRIAL_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdSum {
    // radicand 1 is the rational part; coefficients are never zero
    terms: BTreeMap<BigUint, BigRational>,
}

/// Split `n = s^2 * d` with `d` squarefree (up to prime factors above the trial bound
/// that occur squared alongside other large factors).
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut d = BigUint::one();
    if rest.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    let mut p: u64 = 2;
    while p < TRIAL_LIMIT {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            s *= num_traits::pow(pb.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                d *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            s *= r;
        } else {
            d *= rest;
        }
    }
    (s, d)
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum { terms: BTreeMap::new() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(BigUint::one(), r);
        }
        SurdSum { terms }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        SurdSum::from_rational(BigRational::from_integer(n.into()))
    }

    /// `sqrt(n)` for `n >= 0`.
    pub fn sqrt(n: &BigUint) -> Self {
        let (s, d) = squarefree_split(n);
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(d, BigRational::from_integer(BigInt::from(s)));
        }
        SurdSum { terms }
    }

    /// `(p + sqrt(d)) / q`.
    pub fn quadratic(p: &BigInt, d: &BigInt, q: &BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidInput("surd denominator is zero".into()));
        }
        if d.is_negative() {
            return Err(Error::InvalidInput("surd radicand is negative".into()));
        }
        let root = SurdSum::sqrt(&d.magnitude().clone());
        let sum = &SurdSum::from_integer(p.clone()) + &root;
        Ok(sum.scale(&BigRational::new(BigInt::one(), q.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    pub fn radicands(&self) -> impl Iterator<Item = &BigUint> {
        self.terms.keys()
    }

    /// `(radicand, coefficient)` pairs; radicand 1 is the rational part.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.terms.iter()
    }

    fn insert_add(terms: &mut BTreeMap<BigUint, BigRational>, d: BigUint, c: BigRational) {
        let zero = {
            let e = terms.entry(d.clone()).or_insert_with(BigRational::zero);
            *e += c;
            e.is_zero()
        };
        if zero {
            terms.remove(&d);
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return SurdSum::zero();
        }
        SurdSum { terms: self.terms.iter().map(|(d, c)| (d.clone(), c * r)).collect() }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    pub fn mul(&self, other: &SurdSum) -> Self {
        let mut terms = BTreeMap::new();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                // sqrt(d1) sqrt(d2) = g sqrt(d1 d2 / g^2) for squarefree d1, d2
                let g = d1.gcd(d2);
                let rad = (d1 / &g) * (d2 / &g);
                let coef = c1 * c2 * BigRational::from_integer(BigInt::from(g));
                SurdSum::insert_add(&mut terms, rad, coef);
            }
        }
        SurdSum { terms }
    }

    /// Conjugate with respect to a single radicand: negates the `sqrt(d)` coefficient.
    fn conjugate_single(&self) -> Option<SurdSum> {
        let radicals: Vec<&BigUint> = self.terms.keys().filter(|d| !d.is_one()).collect();
        match radicals.len() {
            0 => Some(self.clone()),
            1 => {
                let d = radicals[0].clone();
                let mut out = self.clone();
                let c = out.terms.get_mut(&d).unwrap();
                *c = -c.clone();
                Some(out)
            }
            _ => None,
        }
    }

    /// Exact division by an element of some `Q(sqrt(d))`.
    pub fn checked_div(&self, other: &SurdSum) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        let conj = other
            .conjugate_single()
            .ok_or_else(|| Error::InvalidInput("divisor has more than one radical".into()))?;
        let norm = other.mul(&conj);
        let n = norm.as_rational().expect("norm of a quadratic element is rational");
        Ok(self.mul(&conj).scale(&n.recip()))
    }

    /// Outward-rounded enclosure with endpoints on the grid `2^-prec`.
    pub fn enclosure(&self, prec: u32) -> RealInterval {
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        let inner = prec + 8;
        let scale = BigRational::new(BigInt::one(), BigInt::one() << inner as usize);
        for (d, c) in &self.terms {
            if d.is_one() {
                lo += c;
                hi += c;
                continue;
            }
            let s = BigInt::from((d << (2 * inner as usize)).sqrt());
            let rlo = BigRational::from_integer(s.clone()) * &scale;
            let rhi = BigRational::from_integer(s + 1) * &scale;
            if c.is_positive() {
                lo += c * rlo;
                hi += c * rhi;
            } else {
                lo += c * rhi;
                hi += c * rlo;
            }
        }
        RealInterval::from_rational_bounds(&lo, &hi, prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(64).midpoint_f64()
    }

    /// Exact sign, found by refining enclosures up to `max_bits`.
    pub fn signum(&self, max_bits: u64) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(r) = self.as_rational() {
            return Ok(r.cmp(&BigRational::zero()));
        }
        let mut prec: u64 = 64;
        loop {
            let iv = self.enclosure(prec as u32);
            if iv.lo().signum() == Ordering::Greater {
                return Ok(Ordering::Greater);
            }
            if iv.hi().signum() == Ordering::Less {
                return Ok(Ordering::Less);
            }
            if prec >= max_bits {
                return Err(Error::PrecisionExhausted { bits: max_bits });
            }
            prec = (prec * 2).min(max_bits);
        }
    }

    pub fn cmp_exact(&self, other: &SurdSum, max_bits: u64) -> Result<Ordering> {
        (self - other).signum(max_bits)
    }

    pub fn floor(&self, max_bits: u64) -> Result<BigInt> {
        if let Some(r) = self.as_rational() {
            return Ok(r.floor().to_integer());
        }
        let mut prec = 64u32;
        let iv = loop {
            let iv = self.enclosure(prec);
            if iv.width().log2_abs() < -2.0 {
                break iv;
            }
            prec *= 2;
        };
        let lo = iv.lo().floor();
        let hi = iv.hi().floor();
        if lo == hi {
            return Ok(lo);
        }
        // an integer lies inside the enclosure; decide on which side
        let diff = self - &SurdSum::from_integer(hi.clone());
        match diff.signum(max_bits)? {
            Ordering::Less => Ok(hi - 1),
            _ => Ok(hi),
        }
    }

    pub fn ceil(&self, max_bits: u64) -> Result<BigInt> {
        Ok(-(-self).floor(max_bits)?)
    }

    /// Human readable form such as `-1/2 + 1/2*sqrt(5)`.
    pub fn describe(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, c)| if d.is_one() { c.to_string() } else { format!("{}*sqrt({})", c, d) })
            .collect();
        parts.join(" + ")
    }

    /// Small-number helper used by tests and diagnostics.
    pub fn approx(&self) -> f64 {
        let mut acc = 0.0;
        for (d, c) in &self.terms {
            let cf = c.numer().to_f64().unwrap_or(0.0) / c.denom().to_f64().unwrap_or(1.0);
            acc += cf * d.to_f64().unwrap_or(0.0).sqrt();
        }
        acc
    }
}

impl std::ops::Add for &SurdSum {
    type Output = SurdSum;
    fn add(self, rhs: &SurdSum) -> SurdSum {
        let mut terms = self.terms.clone();
        for (d, c) in &rhs.terms {
            SurdSum::insert_add(&mut terms, d.clone(), c.clone());
        }
        SurdSum { terms }
    }
}

impl std::ops::Sub for &SurdSum {
    type Output = SurdSum;
    fn sub(self, rhs: &SurdSum) -> SurdSum {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &SurdSum {
    type Output = SurdSum;
    fn neg(self) -> SurdSum {
        SurdSum { terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> SurdSum {
        // (sqrt 5 - 1) / 2
        SurdSum::quadratic(&BigInt::from(-1), &BigInt::from(5), &BigInt::from(2)).unwrap()
    }

    #[test]
    fn squarefree_parts() {
        let (s, d) = squarefree_split(&BigUint::from(72u32));
        assert_eq!((s, d), (BigUint::from(6u32), BigUint::from(2u32)));
        let (s, d) = squarefree_split(&BigUint::from(13u32));
        assert_eq!((s, d), (BigUint::one(), BigUint::from(13u32)));
    }

    #[test]
    fn golden_ratio_identity() {
        let g = golden();
        // g^2 + g - 1 = 0
        let z = &(&g.mul(&g) + &g) - &SurdSum::from_integer(1);
        assert!(z.is_zero());
        assert_eq!(g.signum(256).unwrap(), Ordering::Greater);
        assert_eq!(g.floor(256).unwrap(), BigInt::zero());
        assert!((g.approx() - 0.6180339887).abs() < 1e-9);
    }

    #[test]
    fn division_by_quadratic() {
        let g = golden();
        let one = SurdSum::from_integer(1);
        let inv = one.checked_div(&g).unwrap();
        // 1/g = g + 1
        assert_eq!(inv, &g + &one);
    }

    #[test]
    fn mixed_radicals_sign() {
        let a = SurdSum::sqrt(&BigUint::from(2u32));
        let b = SurdSum::sqrt(&BigUint::from(3u32));
        let c = &(&a + &b) - &SurdSum::sqrt(&BigUint::from(10u32));
        // sqrt2 + sqrt3 - sqrt10 = 3.146 - 3.162 < 0
        assert_eq!(c.signum(512).unwrap(), Ordering::Less);
        let p = a.mul(&b);
        assert_eq!(p, SurdSum::sqrt(&BigUint::from(6u32)));
    }

    #[test]
    fn enclosure_contains_value() {
        let g = golden();
        let iv = g.enclosure(100);
        assert!(iv.precision_bits() >= 98.0);
        let lo = iv.lo().to_f64();
        assert!((lo - 0.6180339887498949).abs() < 1e-15);
    }
}
