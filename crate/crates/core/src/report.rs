//! Parameter sets and the JSON reports shared by the CLI, the suite and the fixtures.

use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::analysis::{eval_direct, eval_fast, exponent_by_convergents, exponent_by_formula};
use crate::approximants::{families_from_words, FAMILY_NAMES};
use crate::cf_core::SlopeSpec;
use crate::error::Result;
use crate::expansion::{expand_exact, expand_log, validate_base};
use crate::ostrowski::{max_bits_from_env, InterceptSpec, Sturmian};
use crate::words::build_word_family_capped;

/// One point of the parameter space: slope, intercept and the evaluation point `(1/b, 1/a)`.
#[derive(Clone, Debug)]
pub struct Params {
    pub slope: SlopeSpec,
    pub intercept: InterceptSpec,
    pub b: u64,
    pub a: u64,
}

impl Params {
    pub fn new(slope: SlopeSpec, intercept: InterceptSpec, b: u64, a: u64) -> Result<Self> {
        validate_base(b, a)?;
        Ok(Params { slope, intercept, b, a })
    }

    pub fn parse(slope: &str, rho: &str, b: u64, a: u64) -> Result<Self> {
        Params::new(SlopeSpec::parse(slope)?, InterceptSpec::parse(rho)?, b, a)
    }

    pub fn sturmian(&self, depth: usize) -> Result<Sturmian> {
        Sturmian::with_max_bits(&self.slope, &self.intercept, depth, max_bits_from_env())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "slope": self.slope.to_string(),
            "rho": self.intercept.to_string(),
            "b": self.b,
            "a": self.a,
        })
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} b={} a={}", self.slope, self.intercept, self.b, self.a)
    }
}

fn ratio_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// `n` partial quotients after the head; the head is reported separately when fractional.
pub fn expand_json(p: &Params, n: usize) -> Result<Value> {
    let st = p.sturmian(6)?;
    let want = if crate::expansion::is_improper(p.b, p.a) { n + 1 } else { n };
    let s = expand_exact(&st, p.b, p.a, want)?;
    let (head, tail) = if s.improper {
        (Some(ratio_string(s.head())), &s.elements[1..])
    } else {
        (None, &s.elements[..])
    };
    let a: Vec<String> = tail.iter().map(|x| x.to_integer().to_string()).collect();
    let mut out = json!({
        "params": p.to_json(),
        "improper": s.improper,
        "A": a,
        "case_log": s.cases,
    });
    if let Some(h) = head {
        out["head"] = Value::String(h);
    }
    Ok(out)
}

/// `ln A_j` for large `n`, where exact elements are out of reach.
pub fn expand_log_json(p: &Params, n: usize) -> Result<Value> {
    let st = p.sturmian(6)?;
    let s = expand_log(&st, p.b, p.a, n)?;
    Ok(json!({
        "params": p.to_json(),
        "improper": s.improper,
        "ln_A": s.ln,
        "case_log": s.cases,
    }))
}

/// Rows `{k, word, len, ones, prefix}` for `M_k, T_k, R_k, V_k`.
pub fn words_json(p: &Params, kmax: usize, max_len: usize, prefix: usize) -> Result<Value> {
    let st = p.sturmian(kmax + 1)?;
    let fam = build_word_family_capped(&st, kmax, max_len);
    let mut rows = Vec::new();
    for k in 0..=fam.last_index() {
        for (name, w) in [("M", fam.m(k as i64)), ("T", fam.t(k)), ("R", fam.r(k)), ("V", fam.v(k))] {
            rows.push(json!({
                "k": k,
                "word": name,
                "len": w.len().to_string(),
                "ones": w.ones().to_string(),
                "prefix": w.prefix(prefix.min(w.len())).to_string(),
            }));
        }
    }
    Ok(json!({ "params": p.to_json(), "rows": rows, "last_index": fam.last_index() }))
}

/// Partial quotients, digits and the index sequences through `depth`.
pub fn ostrowski_json(p: &Params, depth: usize) -> Result<Value> {
    let st = p.sturmian(depth)?;
    let strs = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let d = st.digits();
    let conv = st.convergents();
    let ps: Vec<String> = (0..=depth as i64).map(|k| conv.p(k).to_string()).collect();
    let qs: Vec<String> = (0..=depth as i64).map(|k| conv.q(k).to_string()).collect();
    Ok(json!({
        "params": p.to_json(),
        "a": &conv.quotients()[..depth],
        "b": d.b,
        "p": ps,
        "q": qs,
        "t": strs(&d.t),
        "t_tilde": strs(&d.t_tilde),
        "r": strs(&d.r),
        "r_tilde": strs(&d.r_tilde),
    }))
}

/// Rows `{k, family, num, den}` of the five fraction families.
pub fn approx_json(p: &Params, kmax: usize) -> Result<Value> {
    let st = p.sturmian(kmax + 2)?;
    let cyc = families_from_words::<BigRational>(&st, p.b, p.a, kmax)?;
    let mut rows = Vec::new();
    for c in &cyc {
        for (name, f) in FAMILY_NAMES.iter().zip(c.members()) {
            let (num, den) = f.to_strings();
            rows.push(json!({ "k": c.k, "family": name, "num": num, "den": den }));
        }
    }
    Ok(json!({ "params": p.to_json(), "rows": rows }))
}

/// Certified enclosures of `xi` by direct summation and by the alternating series.
pub fn eval_json(p: &Params, bits: u32) -> Result<Value> {
    let st = p.sturmian(12)?;
    let direct = eval_direct(&st, p.b, p.a, bits)?;
    let mut depth = 12;
    let fast = loop {
        match eval_fast(&st.with_depth(depth)?, p.b, p.a, bits) {
            Err(crate::Error::InsufficientDepth { .. }) => depth *= 2,
            other => break other?,
        }
    };
    Ok(json!({
        "params": p.to_json(),
        "bits": bits,
        "direct": direct.to_json(),
        "fast": fast.to_json(),
        "overlap": direct.overlaps(&fast),
    }))
}

/// Both exponent estimates with their windows.
pub fn exponent_json(p: &Params, kmax: usize, jmax: usize) -> Result<Value> {
    let st = p.sturmian(kmax + 2)?;
    let formula = exponent_by_formula(&st, kmax, kmax / 2)?;
    let stream = expand_log(&st, p.b, p.a, jmax + 1)?;
    let conv = exponent_by_convergents(&stream.ln, p.b, jmax / 2);
    Ok(json!({
        "params": p.to_json(),
        "formula": formula,
        "convergents": { "window": conv.window, "estimate": conv.estimate },
        "difference": (formula.estimate - conv.estimate).abs(),
    }))
}
