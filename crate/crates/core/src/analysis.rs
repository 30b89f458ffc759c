//! Certified evaluation of the series, the shift functional equation, approximation
//! orders and irrationality exponent estimates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::approximants::{error_exponents, sigma_recursive};
use crate::cf_core::interval::ln_rational;
use crate::cf_core::{cf_extract, convergents, Dyadic, RealInterval, SlopeSpec, SurdSum};
use crate::error::{Error, Result};
use crate::logmag::{ln_add, SignedLog};
use crate::ostrowski::Sturmian;
use crate::words::{sturmian_prefix, Variant};

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn log2_rat(r: &BigRational) -> f64 {
    ln_rational(r) / std::f64::consts::LN_2
}

/// Upper bound `y >= alpha^(p/q)` with `y` dyadic, checked exactly via `y^q >= alpha^p`.
fn power_upper_bound(alpha: &BigRational, p: &BigInt, q: &BigInt) -> Dyadic {
    let pf = p.to_f64().unwrap();
    let qf = q.to_f64().unwrap();
    let pu = p.to_usize().unwrap();
    let qu = q.to_usize().unwrap();
    let target = num_traits::pow(alpha.clone(), pu);
    let mut t = pf / qf * log2_rat(alpha);
    let mut slack = 1e-9 * t.abs().max(1.0);
    loop {
        let tt = t + slack;
        let e = tt.floor() as i64 - 60;
        let m = (tt - e as f64).exp2().ceil();
        let y = Dyadic::new(BigInt::from(m as u64), e);
        let yq = num_traits::pow(y.to_rational(), qu);
        if yq >= target {
            return y;
        }
        t += slack;
        slack *= 2.0;
    }
}

/// Enclosure of `sum_{n>=1} s_n beta^n alpha^{s_1+...+s_n}` of width about `2^-bits`.
pub fn eval_series_direct(
    slope: &SlopeSpec,
    rho: &SurdSum,
    beta: &BigRational,
    alpha: &BigRational,
    bits: u32,
    max_bits: u64,
) -> Result<RealInterval> {
    let one = BigRational::one();
    if !beta.is_positive() || beta > &one || !alpha.is_positive() {
        return Err(Error::InvalidInput("need 0 < beta <= 1 and alpha > 0".into()));
    }
    // a convergent on the safe side of theta: below it when alpha <= 1, above otherwise
    let conv = convergents(slope, 40);
    let want_even = alpha <= &one;
    let mut k = 1i64;
    for j in 1..=40i64 {
        if (j % 2 == 0) == want_even {
            k = j;
            if conv.q(j) > &BigInt::from(500) {
                break;
            }
        }
    }
    let y = power_upper_bound(alpha, conv.p(k), conv.q(k));
    let xbar = beta * y.to_rational();
    if xbar >= one {
        return Err(Error::NotContracting);
    }
    let c = if alpha <= &one { alpha.recip() } else { alpha.clone() };
    let lx = -log2_rat(&xbar);
    let need = bits as f64 + 8.0 + log2_rat(&c) - log2_rat(&(&one - &xbar));
    let n_terms = (need / lx).ceil().max(1.0) as usize + 4;

    let word = sturmian_prefix(slope.value(), rho, n_terms, Variant::Lower, max_bits)?;
    // exact partial sum over the common denominator bd^n ad^{c_n}
    let (bn, bd) = (beta.numer(), beta.denom());
    let (an, ad) = (alpha.numer(), alpha.denom());
    let mut acc = BigInt::zero();
    let mut den = BigInt::one();
    let mut term = BigInt::one();
    for s in word.iter() {
        term *= bn;
        acc *= bd;
        den *= bd;
        if s {
            term *= an;
            acc *= ad;
            den *= ad;
            acc += &term;
        }
    }
    let sum = BigRational::new(acc, den);
    let prec = bits + 16;
    let xd = Dyadic::ceil_rational(&xbar, prec + 64);
    let pow = xd.pow_round_up(n_terms as u64 + 1, prec + 64);
    let tail = pow.to_rational() * c / (&one - &xbar);
    Ok(RealInterval::from_rational_bounds(&sum, &(&sum + tail), prec))
}

/// `xi = (b - 1) xi_s(1/b, 1/a)` by summing the series.
pub fn eval_direct(st: &Sturmian, b: u64, a: u64, bits: u32) -> Result<RealInterval> {
    let iv = eval_series_direct(st.slope(), st.rho(), &rat(1, b), &rat(1, a), bits + 4, st.max_bits())?;
    Ok(iv.mul_rational(&rat(b - 1, 1), bits + 8))
}

/// `E_k = r_{k+1} + q_k` and its companion `r~_{k+1} + p_k`.
fn exponent_pair(st: &Sturmian, k: usize) -> (BigInt, BigInt) {
    (st.r(k + 1) + st.q(k as i64), st.r_tilde(k + 1) + st.p(k as i64))
}

/// `xi` from the alternating series in `gamma_k`, summed until terms drop below `2^-bits`.
pub fn eval_fast(st: &Sturmian, b: u64, a: u64, bits: u32) -> Result<RealInterval> {
    let one = BigRational::one();
    let bm1 = rat(b - 1, 1);
    let lb = (b as f64).log2();
    let gamma = |k: i64| {
        BigRational::new(
            BigInt::one(),
            num_traits::pow(BigInt::from(b), st.q(k).to_usize().unwrap())
                * num_traits::pow(BigInt::from(a), st.p(k).to_usize().unwrap()),
        )
    };
    let mut sum = BigRational::zero();
    let mut k = 0usize;
    loop {
        if k + 2 > st.depth() {
            break;
        }
        let (e, et) = exponent_pair(st, k);
        if e.to_f64().unwrap() * lb > bits as f64 + 64.0 {
            break;
        }
        let mono = BigRational::new(
            BigInt::one(),
            num_traits::pow(BigInt::from(b), e.to_usize().unwrap())
                * num_traits::pow(BigInt::from(a), et.to_usize().unwrap()),
        );
        let t = mono / ((&one - gamma(k as i64 + 1)) * (&one - gamma(k as i64)));
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        k += 1;
    }
    if k + 1 > st.depth() {
        return Err(Error::InsufficientDepth { needed: k + 2, available: st.depth() });
    }
    let (e, _) = exponent_pair(st, k);
    let scale = &bm1 * &bm1;
    let center = &sum * &scale;
    // |sum_{h>=k} term_h| <= 8 b (b-1) b^{-E_k}
    let tail_exp = e.to_usize().unwrap();
    let tail = rat(8 * b * (b - 1), 1) / num_traits::pow(BigRational::from_integer(BigInt::from(b)), tail_exp);
    Ok(RealInterval::from_rational_bounds(&(&center - &tail), &(&center + &tail), bits + 8))
}

/// Oracle digits of `xi` (of `1/xi - head` when the head is fractional).
#[derive(Clone, Debug, Serialize)]
pub struct OracleDigits {
    pub quotients: Vec<String>,
    pub certified: usize,
    pub bits: u32,
}

/// Partial quotients certified by direct summation, doubling precision until `target`
/// quotients are certified or `max_bits` is reached.
pub fn oracle_quotients(
    st: &Sturmian,
    b: u64,
    a: u64,
    head: Option<&BigRational>,
    target: usize,
    start_bits: u32,
    max_bits: u32,
) -> Result<(Vec<BigInt>, u32)> {
    let mut bits = start_bits;
    loop {
        let iv = eval_direct(st, b, a, bits)?;
        let iv = match head {
            None => iv,
            Some(h) => {
                let r = iv
                    .recip(bits + 8)
                    .ok_or_else(|| Error::Verification("oracle interval meets zero".into()))?;
                r.add_rational(&-h, bits + 8)
            }
        };
        let (q, n) = cf_extract(&iv, target);
        if n >= target || bits >= max_bits {
            return Ok((q, bits));
        }
        bits = (bits * 2).min(max_bits);
    }
}

/// `(1 - beta) alpha sum_k (-1)^k prod_{h<=k} g_h^{a_{h+1} - b_{h+1}} / ((1 - g_{k+1})(1 - g_k))`
/// with `g_h = beta^{q_h} alpha^{p_h}`, for formal digits `0 <= b_k <= a_k` that need not come
/// from an intercept in `[0, 1)`. Digits past the end of `digits` are zero when `complete`.
pub fn eval_formal_series(
    slope: &SlopeSpec,
    digits: &[u64],
    beta: &BigRational,
    alpha: &BigRational,
    bits: u32,
    complete: bool,
) -> Result<RealInterval> {
    let one = BigRational::one();
    if !beta.is_positive() || beta >= &one || !alpha.is_positive() || alpha > &one {
        return Err(Error::InvalidInput("need 0 < beta < 1 and 0 < alpha <= 1".into()));
    }
    let lb = -log2_rat(beta);
    let la = -log2_rat(alpha);
    let mut depth = 16usize;
    loop {
        let conv = convergents(slope, depth + 2);
        let g = |h: i64| {
            num_traits::pow(beta.clone(), conv.q(h).to_usize().unwrap())
                * num_traits::pow(alpha.clone(), conv.p(h).to_usize().unwrap())
        };
        let gap = |k: usize| -> Result<u64> {
            let d = match digits.get(k) {
                Some(&d) => d,
                None if complete => 0,
                None => return Err(Error::InsufficientDepth { needed: k + 1, available: digits.len() }),
            };
            let ak = conv.a(k + 1);
            if d > ak {
                return Err(Error::InvalidInput(format!("formal digit {d} exceeds {ak}")));
            }
            Ok(ak - d)
        };
        let mut sum = BigRational::zero();
        let mut mono = one.clone();
        let mut log_mono = 0.0f64;
        let mut prev_gap = 1;
        for k in 0..depth {
            let gk = gap(k)?;
            if gk == 0 && prev_gap == 0 {
                return Err(Error::InvalidInput("two consecutive saturated digits".into()));
            }
            prev_gap = gk;
            let ki = k as i64;
            // the remaining sum from k is at most 2 M_k / ((1 - g_k)^2 (1 - g_{k+1}))
            let log_bound = log_mono + 1.0 - 3.0 * log2_rat(&(&one - g(ki)));
            if k >= 2 && log_bound < -(bits as f64 + 24.0) {
                let bound = num_traits::pow(&one - g(ki), 2) * (&one - g(ki + 1));
                let bound = &mono * rat(2, 1) / bound;
                let lead = (&one - beta) * alpha;
                let lo = (&sum - &bound) * &lead;
                let hi = (&sum + &bound) * &lead;
                return Ok(RealInterval::from_rational_bounds(&lo, &hi, bits + 8));
            }
            mono *= num_traits::pow(g(ki), gk as usize);
            log_mono -= gk as f64 * (conv.q(ki).to_f64().unwrap() * lb + conv.p(ki).to_f64().unwrap() * la);
            let t = &mono / ((&one - g(ki + 1)) * (&one - g(ki)));
            if k % 2 == 0 {
                sum += t;
            } else {
                sum -= t;
            }
        }
        depth *= 2;
    }
}

/// Residual of the shift functional equation at depth `m`.
#[derive(Clone, Debug)]
pub struct FunctionalCheck {
    pub m: usize,
    pub residual: RealInterval,
}

impl FunctionalCheck {
    pub fn contains_zero(&self) -> bool {
        self.residual.contains_zero()
    }
    pub fn width_log10(&self) -> f64 {
        self.residual.width().log2_abs() * std::f64::consts::LOG10_2
    }
}

/// `xi_s(beta, alpha)` against `sigma_m`, `gamma_m`, `gamma_{m-1}` and the shifted word
/// `s_m` evaluated at `(gamma_m, gamma_{m-1})`. Only the shifted term carries the
/// `(1 - beta) alpha` factor.
pub fn verify_functional_equation(st: &Sturmian, b: u64, a: u64, m: usize, bits: u32) -> Result<FunctionalCheck> {
    assert!(m >= 1);
    st.require(m + 1)?;
    let one = BigRational::one();
    let beta = rat(1, b);
    let alpha = rat(1, a);
    let inv_mono = |eb: &BigInt, ea: &BigInt| {
        rat(
            1,
            num_traits::pow(BigInt::from(b), eb.to_usize().unwrap())
                * num_traits::pow(BigInt::from(a), ea.to_usize().unwrap()),
        )
    };
    let mi = m as i64;
    let gm = inv_mono(st.q(mi), st.p(mi));
    let gm1 = inv_mono(st.q(mi - 1), st.p(mi - 1));
    let sigma = sigma_recursive::<BigRational>(st, b, a, m)?[m].clone();
    let pi = inv_mono(&(st.r(m) + st.q(mi - 1) - 1), &(st.r_tilde(m) + st.p(mi - 1) - 1));
    let lead = (&one - &beta) * &alpha;
    let a0 = &sigma / (&one - &gm);
    let mut coef = &lead * pi / ((&one - &gm) * &gm1);
    if m % 2 == 1 {
        coef = -coef;
    }
    let wbits = bits + 16;
    let lhs = eval_series_direct(st.slope(), st.rho(), &beta, &alpha, wbits, st.max_bits())?;
    let tail_slope = st.slope().tail(m);
    let shifted = &st.digits().b[m..];
    let saturated = shifted.first().is_some_and(|&d| d == st.a(m + 1));
    let inner = if saturated {
        // no word has these digits; the shifted term is the formal series
        eval_formal_series(&tail_slope, shifted, &gm, &gm1, wbits, st.digits_are_complete())?
    } else {
        let (tail_slope, tail_rho) = st.tail_word(m)?;
        eval_series_direct(&tail_slope, &tail_rho, &gm, &gm1, wbits, st.max_bits())?
    };
    let rhs = inner.mul_rational(&coef, wbits).add_rational(&a0, wbits);
    Ok(FunctionalCheck { m, residual: lhs.sub(&rhs) })
}

/// Per-index exponent candidates; `None` marks an ineligible index.
#[derive(Clone, Debug, Serialize)]
pub struct NuRow {
    pub k: usize,
    pub nu: [Option<f64>; 4],
}

impl NuRow {
    pub fn max(&self) -> f64 {
        self.nu.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub rows: Vec<NuRow>,
    pub window: (usize, usize),
    pub estimate: f64,
}

fn ratio(x: &BigInt, y: &BigInt) -> f64 {
    // both may exceed f64 range only for absurd depths; scale by a common shift
    let shift = x.bits().max(y.bits()).saturating_sub(900);
    let xf = (x >> shift as usize).to_f64().unwrap();
    let yf = (y >> shift as usize).to_f64().unwrap();
    xf / yf
}

/// Candidates for `k = 0..=kmax` and the maximum over the window `[start, kmax]`.
/// Needs depth `kmax + 2`.
pub fn exponent_by_formula(st: &Sturmian, kmax: usize, start: usize) -> Result<ExponentReport> {
    st.require(kmax + 2)?;
    let mut rows = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let ki = k as i64;
        let g1 = st.gap(k + 1) >= 1;
        let g2 = st.gap(k + 2) >= 1;
        let nu1 = (g1 && g2).then(|| 2.0 + ratio(st.t(k), st.r(k + 1)));
        let nu2 = g2.then(|| 2.0 + ratio(st.r(k), &(st.r(k + 1) + st.t(k))));
        let nu3 = 1.0 + ratio(st.q(ki + 1), &(st.r(k + 1) + st.q(ki)));
        let nu4 = 1.0 + ratio(st.r(k + 2), st.q(ki + 1));
        rows.push(NuRow { k, nu: [nu1, nu2, Some(nu3), Some(nu4)] });
    }
    let estimate = rows[start.min(kmax)..].iter().map(NuRow::max).fold(f64::NEG_INFINITY, f64::max);
    Ok(ExponentReport { rows, window: (start, kmax), estimate })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergentExponent {
    /// `ln Q_j` for `j = 0..=J`
    pub ln_q: Vec<f64>,
    pub window: (usize, usize),
    pub estimate: f64,
}

/// `1 + max ln Q_{j+1} / ln Q_j` over `j` in `[start, J-1]`, with
/// `Q_{-1} = 0`, `Q_0 = b - 1`, `Q_j = A_j Q_{j-1} + Q_{j-2}`.
pub fn exponent_by_convergents(ln_elements: &[f64], b: u64, start: usize) -> ConvergentExponent {
    let mut ln_q = vec![((b - 1) as f64).ln()];
    let mut prev2 = f64::NEG_INFINITY;
    for la in ln_elements {
        let cur = ln_add(la + ln_q[ln_q.len() - 1], prev2);
        prev2 = ln_q[ln_q.len() - 1];
        ln_q.push(cur);
    }
    let jmax = ln_q.len() - 1;
    let mut est = f64::NEG_INFINITY;
    for j in start.max(1)..jmax {
        if ln_q[j] > 0.0 {
            est = est.max(1.0 + ln_q[j + 1] / ln_q[j]);
        }
    }
    ConvergentExponent { ln_q, window: (start, jmax), estimate: est }
}

/// Error sizes of the `(4)_{k-1}` and `(3)_k` approximants against their predicted orders.
#[derive(Clone, Debug, Serialize)]
pub struct OrderRow {
    pub k: usize,
    pub ln_err4: f64,
    pub order4: f64,
    pub deviation4: f64,
    pub ln_err3: f64,
    pub order3: f64,
    pub deviation3: f64,
}

/// `ln |xi_s - (value of approximant scaled to xi_s)|` for both families, in the log domain.
/// Terms `T_h` of the alternating series with equal monomials are summed in closed form.
pub fn approximation_orders(st: &Sturmian, b: u64, a: u64, ks: std::ops::RangeInclusive<usize>) -> Result<Vec<OrderRow>> {
    let (lb, la) = ((b as f64).ln(), (a as f64).ln());
    let theta = st.theta().to_f64();
    let lx = -(lb + theta * la);
    let lin = |eb: &BigInt, ea: &BigInt| -(eb.to_f64().unwrap() * lb + ea.to_f64().unwrap() * la);
    let ln_gamma = |h: usize| lin(st.q(h as i64), st.p(h as i64));
    let ln_1m_gamma = |h: usize| (-ln_gamma(h).exp()).ln_1p();
    let ln_mono = |h: usize| {
        let (e, et) = exponent_pair(st, h);
        lin(&e, &et)
    };
    let sgn = |h: usize| h % 2 == 1;
    // sum_{h >= from} T_h
    let tail_sum = |from: usize, until: usize| -> SignedLog {
        let mut acc = SignedLog::zero();
        let mut h = from;
        while h < until {
            if h + 1 < until && st.gap(h + 2) == 0 {
                // equal monomials: T_h + T_{h+1} = (-1)^h m (g_h - g_{h+2}) / prod(1 - g)
                let lg = ln_gamma(h) + (-(ln_gamma(h + 2) - ln_gamma(h)).exp()).ln_1p();
                let l = ln_mono(h) + lg - ln_1m_gamma(h) - ln_1m_gamma(h + 1) - ln_1m_gamma(h + 2);
                acc = acc.add(SignedLog::new(sgn(h), l));
                h += 2;
            } else {
                let l = ln_mono(h) - ln_1m_gamma(h + 1) - ln_1m_gamma(h);
                acc = acc.add(SignedLog::new(sgn(h), l));
                h += 1;
            }
        }
        acc
    };
    let kmax = *ks.end();
    // terms beyond `until` are negligible relative to the first few
    let until = kmax + 8;
    st.require(until + 3)?;
    let mut rows = Vec::new();
    for k in ks {
        let (u, v) = error_exponents(st, k)?;
        let ki = k as i64;
        let e4 = tail_sum(k, until);
        let order4 = (&u + st.q(ki)).to_f64().unwrap();
        // (3)_k: (-1)^k m_k g_{k+1} / ((1-g_k)(1-g_{k+1})) + sum_{h>k} T_h
        let e3 = if st.gap(k + 2) == 1 {
            // m_{k+1} = m_k g_{k+1}: the leading term and T_{k+1} cancel to order g_k
            let lg = ln_gamma(k) + (-(ln_gamma(k + 2) - ln_gamma(k)).exp()).ln_1p();
            let l = ln_mono(k) + ln_gamma(k + 1) + lg - ln_1m_gamma(k) - ln_1m_gamma(k + 1) - ln_1m_gamma(k + 2);
            SignedLog::new(sgn(k), l).add(tail_sum(k + 2, until))
        } else {
            let first = SignedLog::new(
                sgn(k),
                ln_mono(k) + ln_gamma(k + 1) - ln_1m_gamma(k) - ln_1m_gamma(k + 1),
            );
            first.add(tail_sum(k + 1, until))
        };
        let order3 = (&v + st.q(ki + 1)).to_f64().unwrap();
        rows.push(OrderRow {
            k,
            ln_err4: e4.ln,
            order4,
            deviation4: e4.ln - order4 * lx,
            ln_err3: e3.ln,
            order3,
            deviation3: e3.ln - order3 * lx,
        });
    }
    Ok(rows)
}

/// `max - min` of a deviation column.
pub fn band(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ostrowski::InterceptSpec;

    fn st(period: u64, digits: Vec<u64>, depth: usize) -> Sturmian {
        let s = SlopeSpec::periodic(vec![], vec![period]).unwrap();
        Sturmian::new(&s, &InterceptSpec::Digits(digits), depth).unwrap()
    }

    #[test]
    fn direct_and_fast_overlap() {
        for (p, d, b, a) in [(1, vec![], 2, 1), (3, vec![0, 2], 2, 3), (2, vec![1], 3, 3)] {
            let s = st(p, d, 30);
            let x = eval_direct(&s, b, a, 300).unwrap();
            let y = eval_fast(&s, b, a, 300).unwrap();
            assert!(x.overlaps(&y), "{x} vs {y}");
            assert!(x.precision_bits() > 290.0 && y.precision_bits() > 290.0);
        }
    }

    #[test]
    fn fibonacci_value_oracle() {
        let s = st(1, vec![], 30);
        let (q, _) = oracle_quotients(&s, 2, 1, None, 7, 512, 4096).unwrap();
        let want: Vec<BigInt> = [1, 2, 2, 4, 8, 32, 256].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(q, want);
    }

    #[test]
    fn functional_equation_small() {
        let s = st(2, vec![1], 12);
        for m in 1..=4 {
            let chk = verify_functional_equation(&s, 2, 3, m, 256).unwrap();
            assert!(chk.contains_zero(), "m = {m}: {}", chk.residual);
            assert!(chk.width_log10() < -60.0);
        }
    }

    #[test]
    fn functional_equation_with_saturated_shifted_digit() {
        // shifting [0, 2] over [0; 2, 2, ...] leaves a leading digit equal to its quotient
        let s = st(2, vec![0, 2], 12);
        let chk = verify_functional_equation(&s, 2, 3, 1, 256).unwrap();
        assert!(chk.contains_zero(), "{}", chk.residual);
        let s = st(3, vec![], 12);
        let chk = verify_functional_equation(&s, 2, 1, 1, 256).unwrap();
        assert!(chk.contains_zero() && chk.width_log10() < -40.0);
    }

    #[test]
    fn formal_series_matches_word_for_admissible_digits() {
        for (period, digits) in [(2u64, vec![1u64]), (3, vec![2, 1]), (1, vec![])] {
            let s = st(period, digits.clone(), 12);
            let (beta, alpha) = (rat(1, 3), rat(2, 5));
            let word = eval_series_direct(s.slope(), s.rho(), &beta, &alpha, 200, s.max_bits()).unwrap();
            let formal = eval_formal_series(s.slope(), &digits, &beta, &alpha, 200, true).unwrap();
            assert!(word.overlaps(&formal), "{word} vs {formal}");
            assert!(formal.width().log2_abs() < -190.0);
        }
    }

    #[test]
    fn fibonacci_exponent_formula() {
        let s = st(1, vec![], 45);
        let rep = exponent_by_formula(&s, 40, 20).unwrap();
        assert!((rep.estimate - 2.618).abs() < 0.01, "{}", rep.estimate);
    }

    #[test]
    fn order_errors_match_certified_values() {
        // log-domain errors of (4)_{k-1} and (3)_k against a certified evaluation
        for (period, digits, a) in [(2, vec![1], 3), (1, vec![], 1), (3, vec![0, 2], 3)] {
            check_errors_against_exact(st(period, digits, 30), a);
        }
    }

    fn check_errors_against_exact(s: Sturmian, a: u64) {
        let rows = approximation_orders(&s, 2, a, 2..=5).unwrap();
        let xi = eval_direct(&s, 2, a, 4000).unwrap();
        let cyc = crate::approximants::families_from_words::<BigRational>(&s, 2, a, 6).unwrap();
        for row in rows {
            let approx = cyc[row.k - 1].f4.value().unwrap();
            let diff = xi.add_rational(&-approx, 4020);
            let ln = diff.lo().log2_abs() * std::f64::consts::LN_2;
            // xi - (4)_{k-1} = (b-1)^2 * sum T_h
            assert!((ln - row.ln_err4).abs() < 1e-6, "k={} {} vs {}", row.k, ln, row.ln_err4);
            // (3)_k is scaled like xi_s by the same factor
            if row.ln_err3 < -3900.0 * std::f64::consts::LN_2 {
                continue;
            }
            let approx = cyc[row.k].f3.value().unwrap();
            let diff = xi.add_rational(&-approx, 4020);
            let ln = diff.lo().log2_abs() * std::f64::consts::LN_2;
            assert!((ln - row.ln_err3).abs() < 1e-6, "k={} {} vs {}", row.k, ln, row.ln_err3);
        }
    }

    #[test]
    fn golden_orders_have_no_cancellation_loss() {
        let s = st(1, vec![], 40);
        let rows = approximation_orders(&s, 2, 1, 8..=20).unwrap();
        assert!(rows.iter().all(|r| r.deviation3.is_finite() && r.deviation4.is_finite()));
        assert!(band(rows.iter().map(|r| r.deviation3)) < 1.0);
    }
}
