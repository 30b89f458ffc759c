//! Slope descriptions: eventually periodic partial quotient lists and quadratic surds.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::surd::SurdSum;
use crate::error::{Error, Result};

/// `(p + sqrt(d)) / q` with `q | d - p^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    pub p: BigInt,
    pub d: BigInt,
    pub q: BigInt,
}

impl QuadraticSurd {
    pub fn new(p: BigInt, d: BigInt, q: BigInt) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidInput("surd denominator is zero".into()));
        }
        if !d.is_positive() {
            return Err(Error::InvalidInput("surd radicand must be positive".into()));
        }
        let r = d.sqrt();
        if &r * &r == d {
            return Err(Error::InvalidInput(format!("radicand {d} is a perfect square")));
        }
        let (p, d, q) = if (&d - &p * &p).is_multiple_of(&q) {
            (p, d, q)
        } else {
            let aq = q.abs();
            (p * &aq, d * &q * &q, q * aq)
        };
        Ok(QuadraticSurd { p, d, q })
    }

    pub fn value(&self) -> SurdSum {
        SurdSum::quadratic(&self.p, &self.d, &self.q).expect("validated surd")
    }

    /// Floor, using the integer square root of the radicand.
    pub fn floor(&self) -> BigInt {
        let s: BigInt = self.d.sqrt();
        if self.q.is_positive() {
            (&self.p + s).div_floor(&self.q)
        } else {
            (&self.p + s + BigInt::one()).div_floor(&self.q)
        }
    }

    /// Complete quotient after removing the integer part `a`: returns `1/(x - a)`.
    fn step(&self, a: &BigInt) -> QuadraticSurd {
        let p = a * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        QuadraticSurd { p, d: self.d.clone(), q }
    }

    /// Surd form of an irrational element `u + v sqrt(d)` of a real quadratic field.
    pub fn from_value(x: &SurdSum) -> Result<Self> {
        let mut u = BigRational::zero();
        let mut radical = None;
        for (d, c) in x.terms() {
            if d.is_one() {
                u = c.clone();
            } else if radical.is_some() {
                return Err(Error::InvalidInput("not a quadratic irrational".into()));
            } else {
                radical = Some((d.clone(), c.clone()));
            }
        }
        let (d, v) = radical.ok_or_else(|| Error::InvalidInput("value is rational".into()))?;
        let den = u.denom().lcm(v.denom());
        let scale = BigRational::from_integer(den.clone());
        let pu = (&u * &scale).to_integer();
        let vq = (v.abs() * &scale).to_integer();
        let (p, q) = if v.is_positive() { (pu, den) } else { (-pu, -den) };
        QuadraticSurd::new(p, BigInt::from(d) * &vq * &vq, q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlopeSource {
    /// `[0; prefix, period, period, ...]`
    Periodic { prefix: Vec<u64>, period: Vec<u64> },
    Surd(QuadraticSurd),
}

/// An irrational slope in (0,1) together with its exact value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeSpec {
    source: SlopeSource,
    value: SurdSum,
}

fn mat_mul(m: &[[BigInt; 2]; 2], c: u64) -> [[BigInt; 2]; 2] {
    // m * [[c,1],[1,0]]
    let c = BigInt::from(c);
    [
        [&m[0][0] * &c + &m[0][1], m[0][0].clone()],
        [&m[1][0] * &c + &m[1][1], m[1][0].clone()],
    ]
}

fn identity() -> [[BigInt; 2]; 2] {
    [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]]
}

impl SlopeSpec {
    pub fn periodic(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidInput("period must be non-empty".into()));
        }
        if prefix.iter().chain(period.iter()).any(|&x| x == 0) {
            return Err(Error::InvalidInput("partial quotients must be positive".into()));
        }
        let mut mp = identity();
        for &c in &period {
            mp = mat_mul(&mp, c);
        }
        // y = [period; y] > 1 solves m10 y^2 + (m11 - m00) y - m01 = 0
        let disc = (&mp[1][1] - &mp[0][0]).pow(2) + BigInt::from(4) * &mp[1][0] * &mp[0][1];
        let y = SurdSum::quadratic(&(&mp[0][0] - &mp[1][1]), &disc, &(BigInt::from(2) * &mp[1][0]))?;
        // theta = [0; prefix, y]
        let mut m = [[BigInt::zero(), BigInt::one()], [BigInt::one(), BigInt::zero()]];
        for &c in &prefix {
            m = mat_mul(&m, c);
        }
        let num = &y.scale_int(&m[0][0]) + &SurdSum::from_integer(m[0][1].clone());
        let den = &y.scale_int(&m[1][0]) + &SurdSum::from_integer(m[1][1].clone());
        let value = num.checked_div(&den)?;
        Ok(SlopeSpec { source: SlopeSource::Periodic { prefix, period }, value })
    }

    pub fn surd(p: impl Into<BigInt>, d: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let s = QuadraticSurd::new(p.into(), d.into(), q.into())?;
        if !s.floor().is_zero() {
            return Err(Error::InvalidInput("slope must lie in (0,1)".into()));
        }
        let value = s.value();
        Ok(SlopeSpec { source: SlopeSource::Surd(s), value })
    }

    pub fn source(&self) -> &SlopeSource {
        &self.source
    }

    /// Exact value of the slope.
    pub fn value(&self) -> &SurdSum {
        &self.value
    }

    pub fn cursor(&self) -> SlopeCursor<'_> {
        SlopeCursor::new(self)
    }

    /// `a_1, ..., a_n`.
    pub fn partial_quotients(&self, n: usize) -> Vec<u64> {
        self.cursor().take(n).collect()
    }

    /// Slope of the shifted word after `m` steps: `[0; a_{m+1}, a_{m+2}, ...]`.
    pub fn tail(&self, m: usize) -> SlopeSpec {
        match &self.source {
            SlopeSource::Periodic { prefix, period } => {
                if m <= prefix.len() {
                    SlopeSpec::periodic(prefix[m..].to_vec(), period.clone()).unwrap()
                } else {
                    let r = (m - prefix.len()) % period.len();
                    let mut rot = period[r..].to_vec();
                    rot.extend_from_slice(&period[..r]);
                    SlopeSpec::periodic(vec![], rot).unwrap()
                }
            }
            SlopeSource::Surd(s) => {
                let mut x = s.step(&BigInt::zero());
                for _ in 0..m {
                    let a = x.floor();
                    x = x.step(&a);
                }
                // x is the complete quotient 1/theta_m; invert it
                let p = -x.p.clone();
                let q = (&x.d - &p * &p) / &x.q;
                SlopeSpec::surd(p, x.d.clone(), q).expect("tail slope is valid")
            }
        }
    }

    /// `(preperiod length, period length)` of the partial quotient sequence if a cycle is
    /// found within `max_steps`.
    pub fn detect_cycle(&self, max_steps: usize) -> Option<(usize, usize)> {
        match &self.source {
            SlopeSource::Periodic { prefix, period } => Some((prefix.len(), period.len())),
            SlopeSource::Surd(s) => {
                let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
                let mut x = s.step(&BigInt::zero());
                for i in 0..max_steps {
                    let key = (x.p.clone(), x.q.clone());
                    if let Some(&j) = seen.get(&key) {
                        return Some((j, i - j));
                    }
                    seen.insert(key, i);
                    let a = x.floor();
                    x = x.step(&a);
                }
                None
            }
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("per:") {
            let body = body
                .trim()
                .strip_prefix('[')
                .and_then(|b| b.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected per:[prefix;period], got {s}")))?;
            let (pre, per) = body
                .split_once(';')
                .ok_or_else(|| Error::Parse("periodic slope needs ';' between prefix and period".into()))?;
            return SlopeSpec::periodic(parse_u64_list(pre)?, parse_u64_list(per)?);
        }
        if let Some(body) = s.strip_prefix("surd:") {
            let (p, d, q) = parse_triple(body)?;
            return SlopeSpec::surd(p, d, q);
        }
        Err(Error::Parse(format!("unknown slope syntax: {s}")))
    }
}

impl fmt::Display for SlopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            SlopeSource::Periodic { prefix, period } => {
                let j = |v: &Vec<u64>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                write!(f, "per:[{};{}]", j(prefix), j(period))
            }
            SlopeSource::Surd(s) => write!(f, "surd:({},{},{})", s.p, s.d, s.q),
        }
    }
}

pub(crate) fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| Error::Parse(format!("bad integer '{t}': {e}"))))
        .collect()
}

pub(crate) fn parse_triple(s: &str) -> Result<(BigInt, BigInt, BigInt)> {
    let body = s
        .trim()
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected (P,D,Q), got {s}")))?;
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected three integers, got {s}")));
    }
    let n = |t: &str| t.parse::<BigInt>().map_err(|e| Error::Parse(format!("bad integer '{t}': {e}")));
    Ok((n(parts[0])?, n(parts[1])?, n(parts[2])?))
}

/// Restartable iterator over `a_1, a_2, ...`.
#[derive(Clone, Debug)]
pub struct SlopeCursor<'a> {
    spec: &'a SlopeSpec,
    index: usize,
    state: Option<QuadraticSurd>,
}

impl<'a> SlopeCursor<'a> {
    fn new(spec: &'a SlopeSpec) -> Self {
        let state = match &spec.source {
            SlopeSource::Surd(s) => Some(s.step(&BigInt::zero())),
            SlopeSource::Periodic { .. } => None,
        };
        SlopeCursor { spec, index: 0, state }
    }

    pub fn reset(&mut self) {
        *self = SlopeCursor::new(self.spec);
    }

    /// Number of quotients produced so far.
    pub fn position(&self) -> usize {
        self.index
    }
}

impl Iterator for SlopeCursor<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let out = match &self.spec.source {
            SlopeSource::Periodic { prefix, period } => {
                if self.index < prefix.len() {
                    prefix[self.index]
                } else {
                    period[(self.index - prefix.len()) % period.len()]
                }
            }
            SlopeSource::Surd(_) => {
                let x = self.state.take().expect("surd cursor state");
                let a = x.floor();
                self.state = Some(x.step(&a));
                a.to_u64().expect("partial quotient fits in u64")
            }
        };
        self.index += 1;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_expansion_of_sqrt13_slope() {
        let s = SlopeSpec::surd(-3, 13, 2).unwrap();
        assert_eq!(s.partial_quotients(6), vec![3, 3, 3, 3, 3, 3]);
        assert_eq!(s.detect_cycle(50), Some((0, 1)));
    }

    #[test]
    fn periodic_value_matches_surd() {
        let a = SlopeSpec::periodic(vec![], vec![3]).unwrap();
        let b = SlopeSpec::surd(-3, 13, 2).unwrap();
        assert_eq!(a.value(), b.value());
        let fib = SlopeSpec::periodic(vec![], vec![1]).unwrap();
        let g = SlopeSpec::surd(-1, 5, 2).unwrap();
        assert_eq!(fib.value(), g.value());
    }

    #[test]
    fn periodic_with_prefix() {
        let s = SlopeSpec::periodic(vec![2, 5], vec![1, 3]).unwrap();
        let q = QuadraticSurd::from_value(s.value()).unwrap();
        let t = SlopeSpec::surd(q.p.clone(), q.d.clone(), q.q.clone()).unwrap();
        assert_eq!(t.partial_quotients(10), s.partial_quotients(10));
    }

    #[test]
    fn tails_agree_between_sources() {
        let s = SlopeSpec::periodic(vec![4], vec![1, 2]).unwrap();
        let q = QuadraticSurd::from_value(s.value()).unwrap();
        let t = SlopeSpec::surd(q.p, q.d, q.q).unwrap();
        for m in 0..5 {
            assert_eq!(s.tail(m).value(), t.tail(m).value(), "tail {m}");
        }
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["per:[;1]", "per:[2,3;1,4]", "surd:(-3,13,2)"] {
            let s = SlopeSpec::parse(text).unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert!(SlopeSpec::parse("per:[1;]").is_err());
        assert!(SlopeSpec::parse("surd:(1,4,3)").is_err());
        assert!(SlopeSpec::parse("surd:(3,13,2)").is_err());
    }
}
