//! Intercepts, Ostrowski digits and the derived index sequences `t, r`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cf_core::slope::{parse_triple, parse_u64_list};
use crate::cf_core::{convergents, Convergents, QuadraticSurd, SlopeSpec, SurdSum};
use crate::error::{Error, Result};

/// Default ceiling on the working precision of exact sign decisions.
pub const DEFAULT_MAX_BITS: u64 = 16384;

/// Precision ceiling, overridable through `HM_MAX_BITS`.
pub fn max_bits_from_env() -> u64 {
    std::env::var("HM_MAX_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_BITS)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterceptSpec {
    Rational(BigRational),
    Surd(QuadraticSurd),
    /// Formal Ostrowski digits `b_1, b_2, ...`, zero beyond the list.
    Digits(Vec<u64>),
    /// Exact value from some computation (tail intercepts).
    Value(SurdSum),
}

impl InterceptSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("rho:").unwrap_or(s).trim();
        if let Some(body) = s.strip_prefix("rat(").and_then(|b| b.strip_suffix(')')) {
            let (n, d) = body.split_once('/').unwrap_or((body, "1"));
            let n: BigInt = n.trim().parse().map_err(|e| Error::Parse(format!("bad numerator: {e}")))?;
            let d: BigInt = d.trim().parse().map_err(|e| Error::Parse(format!("bad denominator: {e}")))?;
            if d.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(InterceptSpec::Rational(BigRational::new(n, d)));
        }
        if let Some(body) = s.strip_prefix("surd") {
            let (p, d, q) = parse_triple(body)?;
            return Ok(InterceptSpec::Surd(QuadraticSurd::new(p, d, q)?));
        }
        if let Some(body) = s.strip_prefix("digits[").and_then(|b| b.strip_suffix(']')) {
            return Ok(InterceptSpec::Digits(parse_u64_list(body)?));
        }
        Err(Error::Parse(format!("unknown intercept syntax: {s}")))
    }

    /// Exact numeric value, when given numerically.
    pub fn numeric(&self) -> Option<SurdSum> {
        match self {
            InterceptSpec::Rational(r) => Some(SurdSum::from_rational(r.clone())),
            InterceptSpec::Surd(s) => Some(s.value()),
            InterceptSpec::Value(v) => Some(v.clone()),
            InterceptSpec::Digits(_) => None,
        }
    }
}

impl fmt::Display for InterceptSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterceptSpec::Rational(r) => write!(f, "rho:rat({}/{})", r.numer(), r.denom()),
            InterceptSpec::Surd(s) => write!(f, "rho:surd({},{},{})", s.p, s.d, s.q),
            InterceptSpec::Digits(d) => {
                let body: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                write!(f, "rho:digits[{}]", body.join(","))
            }
            InterceptSpec::Value(v) => write!(f, "rho:value({})", v.describe()),
        }
    }
}

/// Admissibility of a digit prefix against the partial quotients.
pub fn validate_digits(a: &[u64], b: &[u64]) -> Result<()> {
    for (i, &bk) in b.iter().enumerate() {
        let k = i + 1;
        let ak = *a.get(i).ok_or_else(|| Error::InvalidInput("more digits than quotients".into()))?;
        let cap = if k == 1 { ak - 1 } else { ak };
        if bk > cap {
            return Err(Error::InvalidInput(format!("digit b_{k} = {bk} exceeds its bound {cap}")));
        }
        if k >= 2 && bk == ak && b[i - 1] != 0 {
            return Err(Error::InvalidInput(format!("b_{k} = a_{k} requires b_{} = 0", k - 1)));
        }
    }
    Ok(())
}

/// `delta_k = q_k theta - p_k`.
pub fn delta(conv: &Convergents, theta: &SurdSum, k: i64) -> SurdSum {
    &theta.scale_int(conv.q(k)) - &SurdSum::from_integer(conv.p(k).clone())
}

/// Greedy Ostrowski digits of `rho - theta`, decided exactly.
pub fn digits_from_intercept(
    conv: &Convergents,
    theta: &SurdSum,
    rho: &SurdSum,
    depth: usize,
    max_bits: u64,
) -> Result<Vec<u64>> {
    assert!(conv.depth() > depth);
    let mut x = rho - theta;
    let mut out = Vec::with_capacity(depth);
    for k in 0..depth as i64 {
        let dk = delta(conv, theta, k);
        let y = &x + &delta(conv, theta, k + 1);
        let s = if k % 2 == 0 { Ordering::Greater } else { Ordering::Less };
        // sign of (y / delta_k - j)
        let z = |j: i64| -> Result<Ordering> {
            let v = &y - &dk.scale_int(&BigInt::from(j));
            let o = v.signum(max_bits)?;
            Ok(if s == Ordering::Greater { o } else { o.reverse() })
        };
        let cap = conv.a(k as usize + 1) as i64 - if k == 0 { 1 } else { 0 };
        let digit = match z(0)? {
            Ordering::Equal => return Err(Error::UndecidableDigit { index: k as usize + 1 }),
            Ordering::Less => 0,
            Ordering::Greater => {
                let mut j = 1;
                loop {
                    match z(j)? {
                        Ordering::Greater => j += 1,
                        Ordering::Equal => return Err(Error::UndecidableDigit { index: k as usize + 1 }),
                        Ordering::Less => break j,
                    }
                    if j > cap {
                        return Err(Error::InvalidInput("intercept outside [0, 1)".into()));
                    }
                }
            }
        };
        if digit > cap {
            return Err(Error::InvalidInput("intercept outside [0, 1)".into()));
        }
        x = &x - &dk.scale_int(&BigInt::from(digit));
        out.push(digit as u64);
    }
    Ok(out)
}

/// Digits with the index sequences derived from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OstrowskiDigits {
    /// `b_1..b_K`
    pub b: Vec<u64>,
    /// `t_k = sum_{j<=k} b_j q_{j-1}`, `k = 0..=K`
    pub t: Vec<BigInt>,
    pub t_tilde: Vec<BigInt>,
    /// `r_k = q_k - t_k`
    pub r: Vec<BigInt>,
    pub r_tilde: Vec<BigInt>,
}

/// Derived sequences; the `r` recursion and the closed form `q - t` must agree.
pub fn derived_sequences(b: &[u64], conv: &Convergents) -> OstrowskiDigits {
    let depth = b.len();
    assert!(conv.depth() >= depth);
    let mut t = vec![BigInt::zero()];
    let mut tt = vec![BigInt::zero()];
    for k in 1..=depth {
        let bk = BigInt::from(b[k - 1]);
        t.push(&t[k - 1] + &bk * conv.q(k as i64 - 1));
        tt.push(&tt[k - 1] + &bk * conv.p(k as i64 - 1));
    }
    let mut r = vec![BigInt::one()];
    let mut rt = vec![BigInt::zero()];
    for k in 0..depth {
        let m = BigInt::from(conv.a(k + 1)) - BigInt::from(b[k]) - 1;
        let ki = k as i64;
        if k == 0 {
            r.push(BigInt::from(conv.a(1) - b[0]));
            rt.push(BigInt::one());
        } else {
            r.push(&r[k] + &m * conv.q(ki) + conv.q(ki - 1));
            rt.push(&rt[k] + &m * conv.p(ki) + conv.p(ki - 1));
        }
    }
    for k in 0..=depth {
        assert_eq!(r[k], conv.q(k as i64) - &t[k], "r_{k} disagrees with q_{k} - t_{k}");
        assert_eq!(rt[k], conv.p(k as i64) - &tt[k], "r~_{k} disagrees with p_{k} - t~_{k}");
    }
    OstrowskiDigits { b: b.to_vec(), t, t_tilde: tt, r, r_tilde: rt }
}

/// Slope, intercept, convergents and digits to a fixed depth.
#[derive(Clone, Debug)]
pub struct Sturmian {
    slope: SlopeSpec,
    intercept: InterceptSpec,
    conv: Convergents,
    digits: OstrowskiDigits,
    rho: SurdSum,
    max_bits: u64,
}

impl Sturmian {
    pub fn new(slope: &SlopeSpec, intercept: &InterceptSpec, depth: usize) -> Result<Self> {
        Sturmian::with_max_bits(slope, intercept, depth, max_bits_from_env())
    }

    pub fn with_max_bits(
        slope: &SlopeSpec,
        intercept: &InterceptSpec,
        depth: usize,
        max_bits: u64,
    ) -> Result<Self> {
        let conv = convergents(slope, depth + 1);
        let theta = slope.value();
        let (b, rho) = match intercept {
            InterceptSpec::Digits(list) => {
                let a = slope.partial_quotients(list.len().max(depth));
                validate_digits(&a, list)?;
                let mut rho = theta.clone();
                let full = Convergents::from_quotients(slope.partial_quotients(list.len() + 1));
                for (k, &bk) in list.iter().enumerate() {
                    if bk != 0 {
                        rho = &rho + &delta(&full, theta, k as i64).scale_int(&BigInt::from(bk));
                    }
                }
                let mut b: Vec<u64> = list.iter().copied().take(depth).collect();
                b.resize(depth, 0);
                (b, rho)
            }
            other => {
                let rho = other.numeric().expect("numeric intercept");
                if rho.signum(max_bits)? == Ordering::Less
                    || (&rho - &SurdSum::from_integer(1)).signum(max_bits)? != Ordering::Less
                {
                    return Err(Error::InvalidInput("intercept must lie in [0, 1)".into()));
                }
                (digits_from_intercept(&conv, theta, &rho, depth, max_bits)?, rho)
            }
        };
        validate_digits(conv.quotients(), &b)?;
        let digits = derived_sequences(&b, &conv);
        Ok(Sturmian { slope: slope.clone(), intercept: intercept.clone(), conv, digits, rho, max_bits })
    }

    /// Same data at another depth.
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        Sturmian::with_max_bits(&self.slope, &self.intercept, depth, self.max_bits)
    }

    pub fn depth(&self) -> usize {
        self.digits.b.len()
    }

    /// Whether every digit past the stored depth is known to be zero.
    pub fn digits_are_complete(&self) -> bool {
        matches!(&self.intercept, InterceptSpec::Digits(list) if list.len() <= self.depth())
    }

    pub fn require(&self, needed: usize) -> Result<()> {
        if self.depth() < needed {
            Err(Error::InsufficientDepth { needed, available: self.depth() })
        } else {
            Ok(())
        }
    }

    pub fn slope(&self) -> &SlopeSpec {
        &self.slope
    }

    pub fn intercept(&self) -> &InterceptSpec {
        &self.intercept
    }

    pub fn theta(&self) -> &SurdSum {
        self.slope.value()
    }

    pub fn rho(&self) -> &SurdSum {
        &self.rho
    }

    pub fn max_bits(&self) -> u64 {
        self.max_bits
    }

    pub fn convergents(&self) -> &Convergents {
        &self.conv
    }

    pub fn digits(&self) -> &OstrowskiDigits {
        &self.digits
    }

    /// `a_k`, `k >= 1`.
    pub fn a(&self, k: usize) -> u64 {
        self.conv.a(k)
    }

    /// `b_k`, `k >= 1`.
    pub fn b(&self, k: usize) -> u64 {
        self.digits.b[k - 1]
    }

    pub fn p(&self, k: i64) -> &BigInt {
        self.conv.p(k)
    }

    pub fn q(&self, k: i64) -> &BigInt {
        self.conv.q(k)
    }

    pub fn t(&self, k: usize) -> &BigInt {
        &self.digits.t[k]
    }

    pub fn t_tilde(&self, k: usize) -> &BigInt {
        &self.digits.t_tilde[k]
    }

    pub fn r(&self, k: usize) -> &BigInt {
        &self.digits.r[k]
    }

    pub fn r_tilde(&self, k: usize) -> &BigInt {
        &self.digits.r_tilde[k]
    }

    /// `a_k - b_k`.
    pub fn gap(&self, k: usize) -> u64 {
        self.a(k) - self.b(k)
    }

    pub fn delta(&self, k: i64) -> SurdSum {
        delta(&self.conv, self.theta(), k)
    }

    /// `floor(theta + rho)`, which is 0 or 1.
    pub fn floor_theta_plus_rho(&self) -> Result<u8> {
        let s = self.theta() + &self.rho;
        Ok(if s.floor(self.max_bits)?.is_positive() { 1 } else { 0 })
    }

    /// Remainder `x_m = rho - theta - sum_{k<m} b_{k+1} delta_k`.
    pub fn remainder(&self, m: usize) -> SurdSum {
        let mut x = &self.rho - self.theta();
        for k in 0..m {
            let bk = self.b(k + 1);
            if bk != 0 {
                x = &x - &self.delta(k as i64).scale_int(&BigInt::from(bk));
            }
        }
        x
    }

    /// Slope and intercept in `[0, 1)` of the shifted word after `m >= 1` steps. When the
    /// shifted digits start with `b_1 = a_1` the intercept is reduced modulo 1; that word is
    /// not the formal object the shift produces.
    pub fn tail_word(&self, m: usize) -> Result<(SlopeSpec, SurdSum)> {
        assert!(m >= 1);
        let slope = self.slope.tail(m);
        let theta = slope.value().clone();
        let rho = match &self.intercept {
            InterceptSpec::Digits(list) => {
                let rest: Vec<u64> = list.iter().skip(m).copied().collect();
                let conv = convergents(&slope, rest.len() + 1);
                let mut rho = theta.clone();
                for (k, &bk) in rest.iter().enumerate() {
                    if bk != 0 {
                        rho = &rho + &delta(&conv, &theta, k as i64).scale_int(&BigInt::from(bk));
                    }
                }
                rho
            }
            _ => {
                let x = self.remainder(m);
                let shift = x.checked_div(&self.delta(m as i64 - 1))?;
                &theta - &shift
            }
        };
        let whole = rho.floor(self.max_bits)?;
        Ok((slope, &rho - &SurdSum::from_integer(whole)))
    }

    /// Slope and intercept of the shifted word after `m >= 1` steps.
    pub fn tail(&self, m: usize, depth: usize) -> Result<Sturmian> {
        assert!(m >= 1);
        let slope = self.slope.tail(m);
        let intercept = match &self.intercept {
            InterceptSpec::Digits(list) => InterceptSpec::Digits(list.iter().skip(m).copied().collect()),
            _ => {
                let x = self.remainder(m);
                let shift = x.checked_div(&self.delta(m as i64 - 1))?;
                InterceptSpec::Value(slope.value() - &shift)
            }
        };
        Sturmian::with_max_bits(&slope, &intercept, depth, self.max_bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slope3() -> SlopeSpec {
        SlopeSpec::periodic(vec![], vec![3]).unwrap()
    }

    #[test]
    fn rho_equal_theta_has_zero_digits() {
        let s = slope3();
        let iv = InterceptSpec::Surd(QuadraticSurd::new((-3).into(), 13.into(), 2.into()).unwrap());
        let st = Sturmian::new(&s, &iv, 12).unwrap();
        assert!(st.digits().b.iter().all(|&b| b == 0));
    }

    #[test]
    fn digits_of_seven_theta_minus_two() {
        let s = slope3();
        let rho = &s.value().scale_int(&BigInt::from(7)) - &SurdSum::from_integer(2);
        let st = Sturmian::new(&s, &InterceptSpec::Value(rho), 6).unwrap();
        assert_eq!(st.digits().b, vec![0, 2, 0, 0, 0, 0]);
    }

    #[test]
    fn zero_intercept_is_a_boundary() {
        let s = slope3();
        let err = Sturmian::new(&s, &InterceptSpec::Rational(BigRational::zero()), 6).unwrap_err();
        assert!(matches!(err, Error::UndecidableDigit { .. }));
    }

    #[test]
    fn formal_digits_round_trip_through_value() {
        let s = SlopeSpec::periodic(vec![], vec![2]).unwrap();
        let formal = Sturmian::new(&s, &InterceptSpec::Digits(vec![1, 0, 2]), 8).unwrap();
        let numeric = Sturmian::new(&s, &InterceptSpec::Value(formal.rho().clone()), 8).unwrap();
        assert_eq!(formal.digits(), numeric.digits());
    }

    #[test]
    fn rejects_inadmissible_digits() {
        let s = SlopeSpec::periodic(vec![], vec![2]).unwrap();
        assert!(Sturmian::new(&s, &InterceptSpec::Digits(vec![2]), 4).is_err());
        assert!(Sturmian::new(&s, &InterceptSpec::Digits(vec![1, 2]), 4).is_err());
        assert!(Sturmian::new(&s, &InterceptSpec::Digits(vec![0, 2]), 4).is_ok());
    }

    #[test]
    fn rational_intercept_digits() {
        let s = SlopeSpec::periodic(vec![], vec![1]).unwrap();
        let st = Sturmian::new(&s, &InterceptSpec::parse("rho:rat(1/3)").unwrap(), 20).unwrap();
        let back = Sturmian::new(&s, &InterceptSpec::Value(st.rho().clone()), 20).unwrap();
        assert_eq!(st.digits(), back.digits());
        validate_digits(st.convergents().quotients(), &st.digits().b).unwrap();
    }

    #[test]
    fn intercept_parsing() {
        assert_eq!(InterceptSpec::parse("digits[0,2]").unwrap(), InterceptSpec::Digits(vec![0, 2]));
        assert!(matches!(InterceptSpec::parse("rho:surd(-3,13,2)").unwrap(), InterceptSpec::Surd(_)));
        assert!(InterceptSpec::parse("rho:pi").is_err());
    }
}
