//! Continued fraction elements `c_k, d_k, e_k, f_k`, the raw element stream and its
//! contraction into a regular continued fraction.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::logmag::{ln_expm1, ln_geometric, LogMag};
use crate::ostrowski::Sturmian;

/// Elements attached to index `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementQuad<V> {
    pub k: usize,
    pub c: V,
    pub d: V,
    pub e: V,
    pub f: V,
}

fn geometric<F: Field>(x: &F, m: u64) -> F {
    let mut acc = F::zero();
    for _ in 0..m {
        acc = acc * x.clone() + F::one();
    }
    acc
}

/// `c_0 (b - 1) = b^{a_1 - b_1} a - b`.
pub fn c0_scaled(st: &Sturmian, b: u64, a: u64) -> BigInt {
    num_traits::pow(BigInt::from(b), st.gap(1) as usize) * BigInt::from(a) - BigInt::from(b)
}

/// Quadruples for `k = 0..=kmax`; needs depth `kmax + 1`.
pub fn element_quads<F: Field>(st: &Sturmian, b: u64, a: u64, kmax: usize) -> Result<Vec<ElementQuad<F>>> {
    st.require(kmax + 1)?;
    let bm1 = F::from_u64(b - 1);
    let mono = |eb: &BigInt, ea: &BigInt| F::monomial(b, eb, a, ea);
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let ki = k as i64;
        let x = mono(st.q(ki), st.p(ki));
        let c = if k == 0 {
            F::from_bigint(&c0_scaled(st, b, a)) * bm1.inv().expect("b > 1")
        } else if st.gap(k + 1) == 0 {
            -mono(st.r(k - 1), st.r_tilde(k - 1))
        } else {
            mono(&(st.r(k) + st.q(ki - 1)), &(st.r_tilde(k) + st.p(ki - 1))) * geometric(&x, st.gap(k + 1) - 1)
        };
        let tpow = mono(st.t(k), st.t_tilde(k));
        let d = tpow.clone() - F::one();
        let e = mono(st.r(k), st.r_tilde(k)) - F::one();
        let f = tpow * geometric(&x, st.b(k + 1));
        out.push(ElementQuad { k, c, d, e, f });
    }
    Ok(out)
}

/// Log-magnitudes of the same quadruples (negative `c_k` carried as its magnitude).
pub fn element_quads_log(st: &Sturmian, b: u64, a: u64, kmax: usize) -> Result<Vec<ElementQuad<LogMag>>> {
    st.require(kmax + 1)?;
    let (lb, la) = ((b as f64).ln(), (a as f64).ln());
    let lin = |eb: &BigInt, ea: &BigInt| eb.to_f64().unwrap() * lb + ea.to_f64().unwrap() * la;
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let ki = k as i64;
        let lx = lin(st.q(ki), st.p(ki));
        let c = if k == 0 {
            LogMag::from_rational(&BigRational::new(c0_scaled(st, b, a), BigInt::from(b - 1)))
        } else if st.gap(k + 1) == 0 {
            LogMag(lin(st.r(k - 1), st.r_tilde(k - 1)))
        } else {
            let base = lin(&(st.r(k) + st.q(ki - 1)), &(st.r_tilde(k) + st.p(ki - 1)));
            let g = ln_geometric(lx, st.gap(k + 1) - 1);
            if g == f64::NEG_INFINITY {
                LogMag::zero()
            } else {
                LogMag(base + g)
            }
        };
        let lt = lin(st.t(k), st.t_tilde(k));
        let d = if st.t(k).is_zero() { LogMag::zero() } else { LogMag(ln_expm1(lt)) };
        let e = LogMag(ln_expm1(lin(st.r(k), st.r_tilde(k))));
        let g = ln_geometric(lx, st.b(k + 1));
        let f = if g == f64::NEG_INFINITY { LogMag::zero() } else { LogMag(lt + g) };
        out.push(ElementQuad { k, c, d, e, f });
    }
    Ok(out)
}

/// Values that can pass through the contraction.
pub trait StreamValue: Clone + fmt::Debug {
    fn unit() -> Self;
    fn plus(&self, o: &Self) -> Self;
}

impl StreamValue for BigRational {
    fn unit() -> Self {
        BigRational::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
}

impl StreamValue for LogMag {
    fn unit() -> Self {
        LogMag::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(*o)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Slot {
    C,
    D,
    One,
    E,
    F,
    /// `c_k + e_{k+1} + 1` from a collapsed block
    Merged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawItem<V> {
    pub value: V,
    pub sign: Sign,
    pub k: usize,
    pub slot: Slot,
}

fn sign_exact(x: &BigRational) -> Sign {
    if x.is_zero() {
        Sign::Zero
    } else if x.is_negative() {
        Sign::Negative
    } else {
        Sign::Positive
    }
}

/// Signs decided from the digits alone.
pub fn structural_signs(st: &Sturmian, a: u64, k: usize) -> [Sign; 5] {
    let c = if k == 0 {
        if a == 1 && st.gap(1) == 1 {
            Sign::Zero
        } else {
            Sign::Positive
        }
    } else {
        match st.gap(k + 1) {
            0 => Sign::Negative,
            1 => Sign::Zero,
            _ => Sign::Positive,
        }
    };
    let d = if st.t(k).is_zero() { Sign::Zero } else { Sign::Positive };
    let f = if st.b(k + 1) == 0 { Sign::Zero } else { Sign::Positive };
    [c, d, Sign::Positive, Sign::Positive, f]
}

fn interleave<V: StreamValue>(quads: &[ElementQuad<V>], sign_of: impl Fn(usize, usize, &V) -> Sign) -> Vec<RawItem<V>> {
    let slots = [Slot::C, Slot::D, Slot::One, Slot::E, Slot::F];
    let mut out = Vec::with_capacity(quads.len() * 5);
    for q in quads {
        let vals = [q.c.clone(), q.d.clone(), V::unit(), q.e.clone(), q.f.clone()];
        for (i, v) in vals.into_iter().enumerate() {
            let sign = sign_of(q.k, i, &v);
            out.push(RawItem { value: v, sign, k: q.k, slot: slots[i] });
        }
    }
    out
}

/// Raw stream with signs read off exact values.
pub fn raw_stream_exact(quads: &[ElementQuad<BigRational>]) -> Vec<RawItem<BigRational>> {
    interleave(quads, |_, _, v| sign_exact(v))
}

/// Raw stream with structural signs (for log-domain values).
pub fn raw_stream_structural<V: StreamValue>(st: &Sturmian, a: u64, quads: &[ElementQuad<V>]) -> Vec<RawItem<V>> {
    interleave(quads, |k, i, _| structural_signs(st, a, k)[i])
}

/// Which zero pattern a contraction step resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroCase {
    /// zeros among `c_0, d_0`
    Head,
    /// `f_k = 0` followed by a collapsed block
    FBeforeBlock,
    /// `f_k = 0` only
    FOnly,
    /// `c_{k+1} = 0` only
    COnly,
    /// `f_k = c_{k+1} = 0`
    FAndC,
    /// `f_k = d_{k+1} = 0`
    FAndD,
    /// `f_k = c_{k+1} = d_{k+1} = 0`
    FCD,
}

impl ZeroCase {
    /// Conventional index 1..6 (0 for the head).
    pub fn index(self) -> u8 {
        match self {
            ZeroCase::Head => 0,
            ZeroCase::FBeforeBlock => 1,
            ZeroCase::FOnly => 2,
            ZeroCase::COnly => 3,
            ZeroCase::FAndC => 4,
            ZeroCase::FAndD => 5,
            ZeroCase::FCD => 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CaseEvent {
    pub k: usize,
    pub case: ZeroCase,
}

/// Case predicted from the digits for the boundary between indices `k` and `k + 1`.
/// Needs depth `k + 3`.
pub fn predicted_case(st: &Sturmian, k: usize) -> Option<ZeroCase> {
    if st.gap(k + 2) == 0 {
        return None;
    }
    let fz = st.b(k + 1) == 0;
    if st.gap(k + 3) == 0 {
        return if fz { Some(ZeroCase::FBeforeBlock) } else { None };
    }
    let cz = st.gap(k + 2) == 1;
    let dz = st.t(k + 1).is_zero();
    match (fz, cz, dz) {
        (false, false, false) => None,
        (true, false, false) => Some(ZeroCase::FOnly),
        (false, true, false) => Some(ZeroCase::COnly),
        (true, true, false) => Some(ZeroCase::FAndC),
        (true, false, true) => Some(ZeroCase::FAndD),
        (true, true, true) => Some(ZeroCase::FCD),
        (false, _, true) => unreachable!("t_{{k+1}} = 0 forces b_{{k+1}} = 0"),
    }
}

#[derive(Clone, Debug)]
pub struct Contracted<V> {
    /// `A_1, A_2, ...`, all positive; only entries that later items cannot change
    pub elements: Vec<V>,
    pub cases: Vec<CaseEvent>,
    /// indices `k` whose block `c_k .. e_{k+1}` was collapsed
    pub collapsed: Vec<usize>,
}

struct Entry<V> {
    value: V,
    sign: Sign,
    head: bool,
}

/// Collapse blocks where `a_{k+2} = b_{k+2}`, then remove zeros via `x, 0, y -> x + y`.
pub fn contract<V: StreamValue>(st: &Sturmian, raw: &[RawItem<V>]) -> Result<Contracted<V>> {
    // rule (i)
    let mut items: Vec<RawItem<V>> = Vec::with_capacity(raw.len());
    let mut collapsed = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let it = &raw[i];
        if it.slot == Slot::C && st.depth() >= it.k + 2 && st.gap(it.k + 2) == 0 {
            if i + 8 >= raw.len() {
                break;
            }
            let e = &raw[i + 8];
            debug_assert!(e.slot == Slot::E && e.k == it.k + 1);
            let value = it.value.plus(&e.value).plus(&V::unit());
            items.push(RawItem { value, sign: Sign::Positive, k: it.k, slot: Slot::Merged });
            collapsed.push(it.k);
            i += 9;
        } else if it.slot == Slot::C && st.depth() < it.k + 2 {
            break;
        } else {
            items.push(it.clone());
            i += 1;
        }
    }

    let cases = classify_zeros(st, &items)?;

    // rule (ii) on a stack whose bottom is the integer part 0
    let mut stack: Vec<Entry<V>> = Vec::with_capacity(items.len() + 1);
    stack.push(Entry { value: V::unit(), sign: Sign::Zero, head: true });
    for (pos, it) in items.iter().enumerate() {
        if it.sign == Sign::Negative {
            return Err(Error::NonPositiveResidual { position: pos });
        }
        let n = stack.len();
        if n >= 2 && stack[n - 1].sign == Sign::Zero && !stack[n - 1].head {
            stack.pop();
            let x = stack.pop().unwrap();
            let (value, sign) = if x.head {
                // integer part: 0 + y
                (it.value.clone(), it.sign)
            } else {
                let s = if x.sign == Sign::Positive || it.sign == Sign::Positive { Sign::Positive } else { Sign::Zero };
                (x.value.plus(&it.value), s)
            };
            if x.head && it.sign != Sign::Zero {
                return Err(Error::Verification("integer part of the expansion became positive".into()));
            }
            stack.push(Entry { value, sign, head: x.head });
        } else {
            stack.push(Entry { value: it.value.clone(), sign: it.sign, head: false });
        }
    }
    // the last two entries may still change
    let keep = stack.len().saturating_sub(2);
    let mut elements = Vec::with_capacity(keep);
    for (pos, e) in stack.into_iter().take(keep).enumerate().skip(1) {
        if e.sign != Sign::Positive {
            return Err(Error::NonPositiveResidual { position: pos });
        }
        elements.push(e.value);
    }
    Ok(Contracted { elements, cases, collapsed })
}

fn classify_zeros<V>(st: &Sturmian, items: &[RawItem<V>]) -> Result<Vec<CaseEvent>> {
    let mut cases = Vec::new();
    if items.iter().any(|it| it.k == 0 && matches!(it.slot, Slot::C | Slot::D) && it.sign == Sign::Zero) {
        cases.push(CaseEvent { k: 0, case: ZeroCase::Head });
    }
    let find = |k: usize, slot: Slot| items.iter().position(|it| it.k == k && it.slot == slot);
    let mut k = 0;
    loop {
        let Some(fpos) = find(k, Slot::F) else {
            k += 1;
            if k > st.depth() {
                break;
            }
            continue;
        };
        // group k needs f_k and the item(s) that follow it
        if fpos + 2 >= items.len() || st.depth() < k + 3 {
            break;
        }
        let fz = items[fpos].sign == Sign::Zero;
        let next = &items[fpos + 1];
        let observed = if next.slot == Slot::Merged {
            if fz {
                Some(ZeroCase::FBeforeBlock)
            } else {
                None
            }
        } else {
            let cz = next.sign == Sign::Zero;
            let dz = items[fpos + 2].sign == Sign::Zero;
            match (fz, cz, dz) {
                (false, false, false) => None,
                (true, false, false) => Some(ZeroCase::FOnly),
                (false, true, false) => Some(ZeroCase::COnly),
                (true, true, false) => Some(ZeroCase::FAndC),
                (true, false, true) => Some(ZeroCase::FAndD),
                (true, true, true) => Some(ZeroCase::FCD),
                (false, _, true) => {
                    return Err(Error::Verification(format!("d_{} = 0 with f_{k} != 0", k + 1)));
                }
            }
        };
        let predicted = predicted_case(st, k);
        if observed != predicted {
            return Err(Error::Verification(format!(
                "zero pattern at k = {k}: observed {observed:?}, predicted {predicted:?}"
            )));
        }
        if let Some(case) = observed {
            cases.push(CaseEvent { k, case });
        }
        k += 1;
    }
    Ok(cases)
}

/// True when `A_1` is not an integer: `c_0` is integral iff `b - 1` divides `a - 1`.
pub fn is_improper(b: u64, a: u64) -> bool {
    b > 2 && !(a - 1).is_multiple_of(b - 1)
}

/// Exact expansion `[0; A_1, A_2, ...]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialQuotientStream {
    /// `A_1, A_2, ...`; only `A_1` may be non-integral
    pub elements: Vec<BigRational>,
    pub improper: bool,
    pub cases: Vec<CaseEvent>,
    pub collapsed: Vec<usize>,
    pub depth: usize,
}

impl PartialQuotientStream {
    pub fn head(&self) -> &BigRational {
        &self.elements[0]
    }

    /// `A_2, A_3, ...` as integers.
    pub fn integer_tail(&self) -> Vec<BigInt> {
        self.elements[1..].iter().map(|x| x.to_integer()).collect()
    }

    /// All elements as integers; `None` when the head is fractional.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        if self.improper {
            None
        } else {
            Some(self.elements.iter().map(|x| x.to_integer()).collect())
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let els: Vec<String> = self.elements.iter().map(|x| x.to_string()).collect();
        serde_json::json!({
            "improper": self.improper,
            "elements": els,
            "cases": self.cases,
            "collapsed": self.collapsed,
            "depth": self.depth,
        })
    }
}

/// Bits needed to hold elements up to index `k`.
pub fn estimated_bits(st: &Sturmian, b: u64, a: u64, k: usize) -> f64 {
    let ki = k as i64;
    let q = st.q(ki + 1).to_f64().unwrap_or(f64::INFINITY);
    let p = st.p(ki + 1).to_f64().unwrap_or(f64::INFINITY);
    q * (b as f64).log2() + p * (a as f64).log2()
}

/// Ceiling on element size for the exact route.
pub const EXACT_BITS_LIMIT: f64 = (1u64 << 24) as f64;

fn grow(depth: usize) -> usize {
    depth + (depth / 2).max(2)
}

/// First `n` elements, exactly. Depth grows until enough elements are final.
pub fn expand_exact(st: &Sturmian, b: u64, a: u64, n: usize) -> Result<PartialQuotientStream> {
    validate_base(b, a)?;
    // the log route has the same contraction structure, so it finds the depth cheaply
    let mut depth = expand_log(st, b, a, n)?.depth;
    let mut last = 0usize;
    loop {
        let mut s = st.with_depth(depth)?;
        if estimated_bits(&s, b, a, depth - 2) > EXACT_BITS_LIMIT && last > 0 {
            // back off to single steps near the size ceiling
            depth = last + 1;
            s = st.with_depth(depth)?;
        }
        if estimated_bits(&s, b, a, depth - 2) > EXACT_BITS_LIMIT {
            return Err(Error::InvalidInput(format!(
                "exact expansion to {n} elements needs more than 2^24-bit integers; use the log-domain route"
            )));
        }
        last = depth;
        let kmax = depth - 2;
        let quads = element_quads::<BigRational>(&s, b, a, kmax)?;
        let raw = raw_stream_exact(&quads);
        let out = contract(&s, &raw)?;
        if out.elements.len() >= n {
            let mut elements = out.elements;
            elements.truncate(n);
            let improper = !elements[0].is_integer();
            debug_assert_eq!(improper, is_improper(b, a));
            if elements[1..].iter().any(|x| !x.is_integer()) {
                return Err(Error::Verification("non-integral element beyond the head".into()));
            }
            return Ok(PartialQuotientStream { elements, improper, cases: out.cases, collapsed: out.collapsed, depth });
        }
        depth = grow(depth);
    }
}

/// Log-domain expansion: `ln A_1, ln A_2, ...`.
#[derive(Clone, Debug)]
pub struct LogStream {
    pub ln: Vec<f64>,
    pub improper: bool,
    pub cases: Vec<CaseEvent>,
    pub depth: usize,
}

fn log_contracted(s: &Sturmian, b: u64, a: u64, kmax: usize) -> Result<Contracted<LogMag>> {
    let quads = element_quads_log(s, b, a, kmax)?;
    let raw = raw_stream_structural(s, a, &quads);
    contract(s, &raw)
}

pub fn expand_log(st: &Sturmian, b: u64, a: u64, n: usize) -> Result<LogStream> {
    validate_base(b, a)?;
    let mut depth = 6usize;
    let mut prev = 5usize;
    loop {
        let s = st.with_depth(depth)?;
        let kmax = depth - 2;
        let out = log_contracted(&s, b, a, kmax)?;
        if out.elements.len() >= n {
            // smallest sufficient depth, so exact callers do not overshoot
            let mut best = (depth, out);
            for d in (prev + 1..depth).rev() {
                let o = log_contracted(&st.with_depth(d)?, b, a, d - 2)?;
                if o.elements.len() < n {
                    break;
                }
                best = (d, o);
            }
            let (depth, out) = best;
            let ln = out.elements.iter().take(n).map(|x| x.ln()).collect();
            return Ok(LogStream { ln, improper: is_improper(b, a), cases: out.cases, depth });
        }
        prev = depth;
        depth = grow(depth);
    }
}

pub fn validate_base(b: u64, a: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::InvalidInput("b must be at least 2".into()));
    }
    if a < 1 {
        return Err(Error::InvalidInput("a must be at least 1".into()));
    }
    Ok(())
}

/// `xi = (b-1) xi_s(1/b, 1/a)` from `F(1/b, 1/a)` and `floor(theta + rho)`.
pub fn xi_from_f(f: &BigRational, b: u64, a: u64, floor_tr: u8) -> BigRational {
    let bq = BigRational::from_integer(BigInt::from(b));
    let bm1 = &bq - BigRational::one();
    let ar = BigRational::from_integer(BigInt::from(a));
    &bm1 * &bm1 / &bq * f + BigRational::from_integer(BigInt::from(floor_tr)) * &bm1 / (&bq * &bq * ar)
}

/// Inverse of [`xi_from_f`].
pub fn f_from_xi(xi: &BigRational, b: u64, a: u64, floor_tr: u8) -> BigRational {
    let bq = BigRational::from_integer(BigInt::from(b));
    let bm1 = &bq - BigRational::one();
    let ar = BigRational::from_integer(BigInt::from(a));
    let shift = BigRational::from_integer(BigInt::from(floor_tr)) * &bm1 / (&bq * &bq * ar);
    (xi - shift) * &bq / (&bm1 * &bm1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf_core::SlopeSpec;
    use crate::ostrowski::InterceptSpec;

    fn st(period: u64, digits: Vec<u64>) -> Sturmian {
        let s = SlopeSpec::periodic(vec![], vec![period]).unwrap();
        Sturmian::new(&s, &InterceptSpec::Digits(digits), 10).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fibonacci_expansion() {
        let out = expand_exact(&st(1, vec![]), 2, 1, 7).unwrap();
        assert_eq!(out.integers().unwrap(), ints(&[1, 2, 2, 4, 8, 32, 256]));
    }

    #[test]
    fn slope_three_expansion() {
        let out = expand_exact(&st(3, vec![]), 2, 1, 3).unwrap();
        assert_eq!(out.integers().unwrap(), ints(&[7, 146, 8396808]));
    }

    #[test]
    fn structural_signs_match_values() {
        for (period, digits, b, a) in [(2, vec![1, 0, 2], 2, 1), (3, vec![0, 2], 3, 3), (1, vec![], 2, 1), (2, vec![0, 2, 0, 2], 2, 3)] {
            let s = st(period, digits);
            let quads = element_quads::<BigRational>(&s, b, a, 8).unwrap();
            for q in &quads {
                let v = [&q.c, &q.d, &BigRational::one(), &q.e, &q.f];
                let want = structural_signs(&s, a, q.k);
                for i in 0..5 {
                    assert_eq!(sign_exact(v[i]), want[i], "k={} slot={}", q.k, i);
                }
            }
        }
    }

    #[test]
    fn log_route_tracks_exact() {
        let s = st(2, vec![1]);
        let ex = expand_exact(&s, 3, 3, 6).unwrap();
        let lg = expand_log(&s, 3, 3, 6).unwrap();
        for (x, l) in ex.elements.iter().zip(lg.ln.iter()) {
            let lx = LogMag::from_rational(x).ln();
            assert!((lx - l).abs() < 1e-9 * lx.abs().max(1.0), "{lx} vs {l}");
        }
    }

    #[test]
    fn improper_head_detected() {
        let out = expand_exact(&st(3, vec![]), 3, 2, 3).unwrap();
        assert!(out.improper && is_improper(3, 2));
        assert!(!is_improper(3, 3));
        let out = expand_exact(&st(3, vec![]), 2, 3, 3).unwrap();
        assert!(!out.improper);
    }

    #[test]
    fn f_and_xi_conversions_invert() {
        let f = BigRational::new(5.into(), 17.into());
        for tr in [0u8, 1] {
            let xi = xi_from_f(&f, 3, 2, tr);
            assert_eq!(f_from_xi(&xi, 3, 2, tr), f);
        }
    }
}
