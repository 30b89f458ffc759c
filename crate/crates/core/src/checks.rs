//! Invariant checks over a parameter grid, shared by the `suite` command and the
//! acceptance tests.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    approximation_orders, band, eval_direct, eval_fast, exponent_by_convergents, exponent_by_formula,
    oracle_quotients, verify_functional_equation,
};
use crate::approximants::{check_identities, families_from_words, farey_chain, flatten, matrix_convergents, raw_elements};
use crate::cf_core::SlopeSpec;
use crate::error::{Error, Result};
use crate::expansion::{element_quads, estimated_bits, expand_exact, expand_log, is_improper};
use crate::field::{Field, Residues};
use crate::ostrowski::{validate_digits, InterceptSpec, Sturmian};
use crate::report::Params;
use crate::words::{build_word_family_capped, sturmian_prefix, BinaryWord, Variant};

/// Largest element size, in bits, handled with exact rationals in the family checks.
pub const EXACT_FAMILY_BITS: f64 = (1u64 << 17) as f64;

pub const GRID_SLOPES: [&str; 4] = ["per:[;1]", "per:[;2]", "per:[;3]", "surd:(-3,13,2)"];
pub const GRID_DIGITS: [&[u64]; 3] = [&[], &[1], &[0, 2]];
pub const GRID_BASES: [(u64, u64); 3] = [(2, 1), (2, 3), (3, 3)];

/// Every admissible combination of the grid slopes, digit patterns and bases.
pub fn default_grid() -> Vec<Params> {
    grid(&GRID_SLOPES, &GRID_DIGITS, &GRID_BASES)
}

/// A small grid for smoke runs.
pub fn quick_grid() -> Vec<Params> {
    grid(&["per:[;1]", "per:[;2]"], &[&[], &[1]], &[(2, 1), (2, 3)])
}

pub fn grid(slopes: &[&str], digits: &[&[u64]], bases: &[(u64, u64)]) -> Vec<Params> {
    let mut out = Vec::new();
    for s in slopes {
        let slope = SlopeSpec::parse(s).expect("grid slope");
        let quotients = slope.partial_quotients(4);
        for d in digits {
            if validate_digits(&quotients, d).is_err() {
                continue;
            }
            for &(b, a) in bases {
                out.push(Params::new(slope.clone(), InterceptSpec::Digits(d.to_vec()), b, a).expect("grid base"));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub name: &'static str,
    pub case: String,
    pub passed: bool,
    pub detail: Value,
    pub seconds: f64,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {} {:<22} {}  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.case,
            self.detail
        )
    }
}

fn run(criterion: u8, name: &'static str, p: &Params, f: impl FnOnce() -> Result<(bool, Value)>) -> CheckOutcome {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(x) => x,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    CheckOutcome { criterion, name, case: p.to_string(), passed, detail, seconds: t.elapsed().as_secs_f64() }
}

/// Oracle comparison. The oracle certifies as many of the first `n` quotients as the
/// precision allows (`start_bits` doubled up to `max_bits`); those positions are compared
/// exactly, and the log-domain stream confirms that `n` elements are produced.
pub fn check_oracle(p: &Params, n: usize, start_bits: u32, max_bits: u32) -> CheckOutcome {
    run(1, "oracle expansion", p, || {
        let st = p.sturmian(16)?;
        let improper = is_improper(p.b, p.a);
        let head = if improper { Some(expand_exact(&st, p.b, p.a, 1)?.head().clone()) } else { None };
        let target = if improper { n - 1 } else { n };
        let (oracle, bits) = oracle_quotients(&st, p.b, p.a, head.as_ref(), target, start_bits, max_bits)?;
        let certified = oracle.len();
        let exact = expand_exact(&st, p.b, p.a, certified + usize::from(improper))?;
        let ours = if improper { exact.integer_tail() } else { exact.integers().expect("integral stream") };
        let matched = oracle.iter().zip(&ours).take_while(|(x, y)| x == y).count();
        let logs = expand_log(&st, p.b, p.a, n)?;
        let passed = certified >= 1 && matched == certified && logs.ln.len() >= n;
        Ok((passed, json!({ "produced": logs.ln.len(), "certified": certified, "matched": matched, "bits": bits })))
    })
}

fn exact_limit(st: &Sturmian, b: u64, a: u64, kmax: usize) -> Option<usize> {
    (0..=kmax).take_while(|&k| estimated_bits(st, b, a, k + 1) <= EXACT_FAMILY_BITS).last()
}

fn three_routes<F: Field>(st: &Sturmian, b: u64, a: u64, kmax: usize) -> Result<bool> {
    let words = families_from_words::<F>(st, b, a, kmax)?;
    let quads = element_quads::<F>(st, b, a, kmax)?;
    let chain = farey_chain(&quads, b);
    let mats = matrix_convergents(&raw_elements(&quads), b);
    Ok(words == chain && mats == flatten(&chain))
}

/// Word values, Farey chain and matrix products give identical fractions for `k <= kmax`.
/// Exact rationals while elements stay below [`EXACT_FAMILY_BITS`], residues throughout.
pub fn check_families(p: &Params, kmax: usize) -> CheckOutcome {
    run(2, "three family routes", p, || {
        let st = p.sturmian(kmax + 2)?;
        let exact_k = exact_limit(&st, p.b, p.a, kmax);
        let exact = match exact_k {
            Some(k) => three_routes::<BigRational>(&st, p.b, p.a, k)?,
            None => true,
        };
        let residues = three_routes::<Residues>(&st, p.b, p.a, kmax)?;
        Ok((exact && residues, json!({ "exact_through": exact_k, "residues_through": kmax })))
    })
}

/// Telescoped sigma, periodic value and the `(3) - (4)` difference, for `k <= kmax`.
pub fn check_identities_exact(p: &Params, kmax: usize) -> CheckOutcome {
    run(3, "identities", p, || {
        let st = p.sturmian(kmax + 3)?;
        let exact_k = exact_limit(&st, p.b, p.a, kmax);
        let mut failures = Vec::new();
        let mut count = 0;
        if let Some(k) = exact_k {
            let cyc = families_from_words::<BigRational>(&st, p.b, p.a, k)?;
            for c in check_identities(&st, p.b, p.a, &cyc)? {
                count += 1;
                if !c.holds {
                    failures.push(format!("exact {} k={}", c.name, c.k));
                }
            }
        }
        let cyc = families_from_words::<Residues>(&st, p.b, p.a, kmax)?;
        for c in check_identities(&st, p.b, p.a, &cyc)? {
            count += 1;
            if !c.holds {
                failures.push(format!("residue {} k={}", c.name, c.k));
            }
        }
        Ok((failures.is_empty(), json!({ "checked": count, "exact_through": exact_k, "failures": failures })))
    })
}

/// The alternating series against direct summation; both widths at most `10^-50`.
pub fn check_fast_vs_direct(p: &Params, kmax: usize, bits: u32) -> CheckOutcome {
    run(3, "fast vs direct", p, || {
        let st = p.sturmian(kmax + 2)?;
        let direct = eval_direct(&st, p.b, p.a, bits)?;
        let fast = eval_fast(&st, p.b, p.a, bits)?;
        let wd = direct.width().log2_abs() * std::f64::consts::LOG10_2;
        let wf = fast.width().log2_abs() * std::f64::consts::LOG10_2;
        let combined = (direct.width().to_f64() + fast.width().to_f64()).log10();
        let passed = direct.overlaps(&fast) && combined <= -50.0;
        Ok((passed, json!({ "log10_width_direct": wd, "log10_width_fast": wf, "log10_combined": combined, "bits": bits })))
    })
}

/// Lengths, letter counts, `M_k = T_k R_k`, the `V` recursion and prefix agreement with the
/// word itself, for every `k` with `q_k <= max_len`.
pub fn check_words(p: &Params, max_len: usize) -> CheckOutcome {
    run(4, "word structure", p, || {
        let st = p.sturmian(40)?;
        let fam = build_word_family_capped(&st, 39, max_len);
        let last = fam.last_index();
        let longest = fam.v(last).len();
        let lower = sturmian_prefix(st.theta(), st.rho(), longest, Variant::Lower, st.max_bits())?;
        let upper = sturmian_prefix(st.theta(), st.rho(), longest, Variant::Upper, st.max_bits())?;
        let mut failures = Vec::new();
        for k in 0..=last {
            let ki = k as i64;
            let v = fam.v(k);
            if BigInt::from(v.len()) != *st.q(ki) || BigInt::from(v.ones()) != *st.p(ki) {
                failures.push(format!("V_{k} length or ones"));
            }
            if *fam.m(ki) != BinaryWord::concat(&[fam.t(k), fam.r(k)]) {
                failures.push(format!("M_{k} != T_{k} R_{k}"));
            }
            if k >= 1 && k < last {
                let gap = st.gap(k + 1);
                let want = BinaryWord::concat(&[&v.repeat(gap), fam.v(k - 1), &v.repeat(st.b(k + 1))]);
                if *fam.v(k + 1) != want {
                    failures.push(format!("V_{} recursion", k + 1));
                }
            }
            let need = v.len().saturating_sub(1);
            if v.common_prefix(&lower) < need && v.common_prefix(&upper) < need {
                failures.push(format!("V_{k} prefix"));
            }
        }
        if last >= 1 {
            let one = BinaryWord::parse("1")?;
            let v0 = fam.v(0);
            let want = BinaryWord::concat(&[&v0.repeat(st.gap(1) - 1), &one, &v0.repeat(st.b(1))]);
            if *fam.v(1) != want {
                failures.push("V_1 recursion".into());
            }
        }
        Ok((failures.is_empty(), json!({ "last_index": last, "longest": longest, "failures": failures })))
    })
}

/// Formula route at depth `kmax` (window `[kmax/2, kmax]`) against the convergent route at
/// `jmax` (window `[jmax/2, jmax]`); the golden slope with zero digits must also sit near 2.618.
pub fn check_exponents(p: &Params, kmax: usize, jmax: usize, tol: f64, golden_tol: f64) -> CheckOutcome {
    run(5, "exponent dual route", p, || {
        let st = p.sturmian(kmax + 2)?;
        let formula = exponent_by_formula(&st, kmax, kmax / 2)?;
        let stream = expand_log(&st, p.b, p.a, jmax + 1)?;
        let conv = exponent_by_convergents(&stream.ln, p.b, jmax / 2);
        let diff = (formula.estimate - conv.estimate).abs();
        let mut passed = diff <= tol;
        let golden = matches!(p.slope.source(), crate::cf_core::SlopeSource::Periodic { prefix, period }
            if prefix.is_empty() && period == &[1])
            && matches!(&p.intercept, InterceptSpec::Digits(d) if d.iter().all(|&x| x == 0));
        if golden {
            let target = 2.618;
            passed &= (formula.estimate - target).abs() <= golden_tol && (conv.estimate - target).abs() <= golden_tol;
        }
        Ok((passed, json!({ "formula": formula.estimate, "convergents": conv.estimate, "difference": diff, "golden": golden })))
    })
}

/// Deviation of the approximation errors from their predicted orders stays in a band.
pub fn check_orders(p: &Params, k0: usize, k1: usize, max_band: f64) -> CheckOutcome {
    run(6, "approximation orders", p, || {
        let st = p.sturmian(k1 + 12)?;
        let rows = approximation_orders(&st, p.b, p.a, k0..=k1)?;
        let b4 = band(rows.iter().map(|r| r.deviation4));
        let b3 = band(rows.iter().map(|r| r.deviation3));
        let finite = rows.iter().all(|r| r.deviation3.is_finite() && r.deviation4.is_finite());
        Ok((finite && b4 <= max_band && b3 <= max_band, json!({ "band4": b4, "band3": b3 })))
    })
}

/// Functional equation residuals for `m = 1..=mmax`.
pub fn check_functional(p: &Params, mmax: usize, bits: u32, max_log10_width: f64) -> CheckOutcome {
    run(7, "functional equation", p, || {
        let st = p.sturmian(mmax + 4)?;
        let mut worst = f64::NEG_INFINITY;
        let mut all_zero = true;
        for m in 1..=mmax {
            let chk = verify_functional_equation(&st, p.b, p.a, m, bits)?;
            all_zero &= chk.contains_zero();
            worst = worst.max(chk.width_log10());
        }
        Ok((all_zero && worst <= max_log10_width, json!({ "contains_zero": all_zero, "worst_log10_width": worst, "bits": bits })))
    })
}

/// Fixture text for `a = 1`: leading exact elements, the log stream to 25 elements,
/// digits and the fraction families.
pub fn fixture_text(p: &Params) -> Result<String> {
    if p.a != 1 {
        return Err(Error::InvalidInput("fixtures cover a = 1 only".into()));
    }
    let mut log = crate::report::expand_log_json(p, 25)?;
    if let Some(v) = log["ln_A"].as_array_mut() {
        for x in v.iter_mut() {
            if let Some(f) = x.as_f64() {
                *x = json!(format!("{f:.9e}"));
            }
        }
    }
    let doc = json!({
        "expand": crate::report::expand_json(p, 6)?,
        "expand_log": log,
        "ostrowski": crate::report::ostrowski_json(p, 10)?,
        "approx": crate::report::approx_json(p, 3)?,
    });
    Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
}

/// File name for a case's fixture.
pub fn fixture_name(p: &Params) -> String {
    let clean: String = format!("{}_{}_b{}_a{}", p.slope, p.intercept, p.b, p.a)
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("{clean}.json")
}

/// Scale of the suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub oracle_n: usize,
    pub oracle_start_bits: u32,
    pub oracle_max_bits: u32,
    pub family_k: usize,
    pub fast_bits: u32,
    pub word_len: usize,
    pub exponent_k: usize,
    pub exponent_j: usize,
    pub exponent_tol: f64,
    pub golden_tol: f64,
    pub order_window: (usize, usize),
    pub order_band: f64,
    pub functional_m: usize,
    pub functional_bits: u32,
    pub functional_width: f64,
}

impl SuiteConfig {
    pub fn full() -> Self {
        SuiteConfig {
            oracle_n: 30,
            oracle_start_bits: 1700,
            oracle_max_bits: 8192,
            family_k: 20,
            fast_bits: 512,
            word_len: 1_000_000,
            exponent_k: 40,
            exponent_j: 200,
            exponent_tol: 0.05,
            golden_tol: 0.02,
            order_window: (8, 20),
            order_band: 6.0,
            functional_m: 6,
            functional_bits: 1024,
            functional_width: -40.0,
        }
    }

    pub fn quick() -> Self {
        SuiteConfig {
            oracle_n: 25,
            oracle_max_bits: 1700,
            family_k: 10,
            word_len: 10_000,
            exponent_k: 30,
            exponent_j: 120,
            functional_m: 3,
            functional_bits: 512,
            ..SuiteConfig::full()
        }
    }
}

/// Every check for one case.
pub fn run_case(p: &Params, cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    vec![
        check_oracle(p, cfg.oracle_n, cfg.oracle_start_bits, cfg.oracle_max_bits),
        check_families(p, cfg.family_k),
        check_identities_exact(p, cfg.family_k),
        check_fast_vs_direct(p, 25, cfg.fast_bits),
        check_words(p, cfg.word_len),
        check_exponents(p, cfg.exponent_k, cfg.exponent_j, cfg.exponent_tol, cfg.golden_tol),
        check_orders(p, cfg.order_window.0, cfg.order_window.1, cfg.order_band),
        check_functional(p, cfg.functional_m, cfg.functional_bits, cfg.functional_width),
    ]
}

/// All checks over a grid, cases in parallel, results in grid order.
pub fn run_suite(cases: &[Params], cfg: &SuiteConfig) -> Vec<CheckOutcome> {
    cases.par_iter().map(|p| run_case(p, cfg)).collect::<Vec<_>>().into_iter().flatten().collect()
}

/// Growth comparison of convergent denominators between `(b, a)` and `(b, 1)`:
/// ratios `(ln Q'_j / ln Q_j) / phi` with `phi = ln b / ln(b a^theta)`, over `j` in `[jmax/2, jmax]`.
pub fn q_comparability(p: &Params, jmax: usize) -> Result<Vec<f64>> {
    let st = p.sturmian(12)?;
    let with_a = expand_log(&st, p.b, p.a, jmax + 1)?;
    let plain = expand_log(&st, p.b, 1, jmax + 1)?;
    let qa = exponent_by_convergents(&with_a.ln, p.b, 0).ln_q;
    let q1 = exponent_by_convergents(&plain.ln, p.b, 0).ln_q;
    let theta = st.theta().to_f64();
    let phi = (p.b as f64).ln() / ((p.b as f64).ln() + theta * (p.a as f64).ln());
    Ok(qa.iter().zip(&q1).skip(jmax / 2).map(|(x, y)| (y / x) / phi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_filters_inadmissible_digits() {
        let g = default_grid();
        // golden slope admits only zero digits: 1 + 3 + 3 + 3 patterns
        assert_eq!(g.len(), 10 * 3);
        assert!(quick_grid().len() >= 4);
    }

    #[test]
    fn quick_checks_on_one_case() {
        let p = Params::parse("per:[;2]", "digits[1]", 2, 3).unwrap();
        let cfg = SuiteConfig::quick();
        for o in run_case(&p, &cfg) {
            assert!(o.passed, "{}", o.line());
        }
    }
}
