//! Command line front end.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::analysis::verify_functional_equation;
use crate::cf_core::SlopeSpec;
use crate::checks::{self, CheckOutcome, SuiteConfig};
use crate::error::{Error, Result};
use crate::ostrowski::{validate_digits, InterceptSpec};
use crate::report::{self, Params};

#[derive(Parser, Debug)]
#[command(name = "hecke-mahler", version, about = "Continued fractions of Hecke-Mahler series values")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `per:[a1,...;b1,...]` or `surd:(P,D,Q)`
    #[arg(long, allow_hyphen_values = true)]
    pub slope: String,
    /// `digits[b1,...]`, `rat(p/q)` or `surd(P,D,Q)`
    #[arg(long, default_value = "digits[]", allow_hyphen_values = true)]
    pub rho: String,
    #[arg(long)]
    pub b: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    /// Shorthand for `--format json`
    #[arg(long)]
    pub json: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

impl Common {
    fn params(&self) -> Result<Params> {
        Params::parse(&self.slope, &self.rho, self.b, self.a)
    }

    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Partial quotients of xi
    Expand {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'n', default_value_t = 20)]
        n: usize,
        /// Cross-check against the certified oracle
        #[arg(long)]
        verify: bool,
        /// Report `ln A_j` instead of exact elements
        #[arg(long)]
        log: bool,
    },
    /// The words M_k, T_k, R_k, V_k
    Words {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'k', default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_len: usize,
        #[arg(long, default_value_t = 64)]
        prefix: usize,
    },
    /// Partial quotients, digits and index sequences
    Ostrowski {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'k', default_value_t = 10)]
        k: usize,
    },
    /// The five fraction families
    Approx {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'k', default_value_t = 4)]
        k: usize,
    },
    /// Certified enclosures of xi
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 512)]
        bits: u32,
    },
    /// Functional equation residuals, or every check with `--all`
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'm', default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 1024)]
        bits: u32,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        quick: bool,
    },
    /// Irrationality exponent by both routes
    Exponent {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'k', default_value_t = 40)]
        k: usize,
        #[arg(short = 'j', default_value_t = 200)]
        j: usize,
    },
    /// Every check over a parameter grid
    Suite {
        /// Smaller grid and depths
        #[arg(long)]
        quick: bool,
        /// Slopes replacing the default grid's
        #[arg(long = "slope", allow_hyphen_values = true)]
        slopes: Vec<String>,
        /// Intercepts replacing the default grid's
        #[arg(long = "rho", allow_hyphen_values = true)]
        rhos: Vec<String>,
        /// Bases as `b,a`
        #[arg(long = "base")]
        bases: Vec<String>,
        /// Keep at most this many cases
        #[arg(long)]
        limit: Option<usize>,
        /// Random periodic cases from this seed instead of the grid
        #[arg(long)]
        fuzz: Option<u64>,
        #[arg(long, default_value_t = 8)]
        fuzz_cases: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Result of a command: what to print and the exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

fn render(v: &Value, format: Format, text: impl FnOnce(&Value) -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("serializable"),
        Format::Text => text(v),
    }
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|a| a.iter().map(|x| x.as_str().map(String::from).unwrap_or_else(|| x.to_string())).collect())
        .unwrap_or_default()
}

pub fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Expand { common, n, verify, log } => cmd_expand(&common, n, verify, log),
        Command::Words { common, k, max_len, prefix } => {
            let v = report::words_json(&common.params()?, k, max_len, prefix)?;
            Ok(Outcome::ok(render(&v, common.format(), |v| {
                let mut out = String::new();
                for r in v["rows"].as_array().into_iter().flatten() {
                    out += &format!(
                        "{}_{} len={} ones={} {}\n",
                        r["word"].as_str().unwrap_or(""),
                        r["k"],
                        r["len"].as_str().unwrap_or(""),
                        r["ones"].as_str().unwrap_or(""),
                        r["prefix"].as_str().unwrap_or("")
                    );
                }
                out.trim_end().to_string()
            })))
        }
        Command::Ostrowski { common, k } => {
            let v = report::ostrowski_json(&common.params()?, k)?;
            Ok(Outcome::ok(render(&v, common.format(), |v| {
                ["a", "b", "q", "p", "t", "r"]
                    .iter()
                    .map(|key| format!("{key}: {}", strings(&v[*key]).join(" ")))
                    .collect::<Vec<_>>()
                    .join("\n")
            })))
        }
        Command::Approx { common, k } => {
            let v = report::approx_json(&common.params()?, k)?;
            Ok(Outcome::ok(render(&v, common.format(), |v| {
                v["rows"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|r| {
                        format!(
                            "{}_{} = {} / {}",
                            r["family"].as_str().unwrap_or(""),
                            r["k"],
                            r["num"].as_str().unwrap_or(""),
                            r["den"].as_str().unwrap_or("")
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })))
        }
        Command::Eval { common, bits } => {
            let v = report::eval_json(&common.params()?, bits)?;
            let code = if v["overlap"].as_bool() == Some(true) { 0 } else { 4 };
            let text = render(&v, common.format(), |v| {
                format!(
                    "direct: [{}, {}]\nfast:   [{}, {}]\noverlap: {}",
                    v["direct"]["lo"].as_str().unwrap_or(""),
                    v["direct"]["hi"].as_str().unwrap_or(""),
                    v["fast"]["lo"].as_str().unwrap_or(""),
                    v["fast"]["hi"].as_str().unwrap_or(""),
                    v["overlap"]
                )
            });
            Ok(Outcome { text, code })
        }
        Command::Verify { common, m, bits, all, quick } => cmd_verify(&common, m, bits, all, quick),
        Command::Exponent { common, k, j } => {
            let v = report::exponent_json(&common.params()?, k, j)?;
            Ok(Outcome::ok(render(&v, common.format(), |v| {
                format!(
                    "formula:    {:.6} (k in {})\nconvergents: {:.6} (j in {})\ndifference: {:.6}",
                    v["formula"]["estimate"].as_f64().unwrap_or(f64::NAN),
                    v["formula"]["window"],
                    v["convergents"]["estimate"].as_f64().unwrap_or(f64::NAN),
                    v["convergents"]["window"],
                    v["difference"].as_f64().unwrap_or(f64::NAN)
                )
            })))
        }
        Command::Suite { quick, slopes, rhos, bases, limit, fuzz, fuzz_cases, json } => {
            cmd_suite(quick, &slopes, &rhos, &bases, limit, fuzz, fuzz_cases, json)
        }
    }
}

fn cmd_expand(common: &Common, n: usize, verify: bool, log: bool) -> Result<Outcome> {
    let p = common.params()?;
    if log {
        let v = report::expand_log_json(&p, n)?;
        return Ok(Outcome::ok(render(&v, common.format(), |v| {
            v["ln_A"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|x| format!("{:.6}", x.as_f64().unwrap_or(f64::NAN)))
                .collect::<Vec<_>>()
                .join(" ")
        })));
    }
    let mut v = report::expand_json(&p, n)?;
    let mut code = 0;
    if verify {
        let o = checks::check_oracle(&p, n, 1700, crate::ostrowski::max_bits_from_env() as u32);
        if !o.passed {
            code = 4;
        }
        v["verify"] = json!({ "passed": o.passed, "detail": o.detail });
    }
    let text = render(&v, common.format(), |v| {
        let mut out = String::new();
        if let Some(h) = v.get("head") {
            out += &format!("head {}\n", h.as_str().unwrap_or(""));
        }
        out += &strings(&v["A"]).join(" ");
        if let Some(chk) = v.get("verify") {
            out += &format!(
                "\nverified: {} (matched {} of {} certified)",
                chk["passed"], chk["detail"]["matched"], chk["detail"]["certified"]
            );
        }
        out
    });
    Ok(Outcome { text, code })
}

fn outcome_rows(outcomes: &[CheckOutcome]) -> Vec<Value> {
    outcomes.iter().map(|o| serde_json::to_value(o).expect("serializable")).collect()
}

fn cmd_verify(common: &Common, m: usize, bits: u32, all: bool, quick: bool) -> Result<Outcome> {
    let p = common.params()?;
    if all {
        let cfg = if quick { SuiteConfig::quick() } else { SuiteConfig::full() };
        let outcomes = checks::run_case(&p, &cfg);
        let passed = outcomes.iter().all(|o| o.passed);
        let v = json!({ "params": p.to_json(), "passed": passed, "checks": outcome_rows(&outcomes) });
        let text = render(&v, common.format(), |_| outcomes.iter().map(CheckOutcome::line).collect::<Vec<_>>().join("\n"));
        return Ok(Outcome { text, code: if passed { 0 } else { 4 } });
    }
    let st = p.sturmian(m + 4)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for j in 1..=m {
        let chk = verify_functional_equation(&st, p.b, p.a, j, bits)?;
        ok &= chk.contains_zero();
        rows.push(json!({
            "m": j,
            "contains_zero": chk.contains_zero(),
            "log10_width": chk.width_log10(),
            "residual": chk.residual.to_json(),
        }));
    }
    let v = json!({ "params": p.to_json(), "bits": bits, "rows": rows });
    let text = render(&v, common.format(), |v| {
        v["rows"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|r| format!("m={} contains_zero={} log10_width={:.1}", r["m"], r["contains_zero"], r["log10_width"].as_f64().unwrap_or(f64::NAN)))
            .collect::<Vec<_>>()
            .join("\n")
    });
    Ok(Outcome { text, code: if ok { 0 } else { 4 } })
}

fn parse_base(s: &str) -> Result<(u64, u64)> {
    let (b, a) = s.split_once(',').ok_or_else(|| Error::Parse(format!("base must be `b,a`: {s}")))?;
    let b = b.trim().parse().map_err(|_| Error::Parse(format!("bad b in {s}")))?;
    let a = a.trim().parse().map_err(|_| Error::Parse(format!("bad a in {s}")))?;
    Ok((b, a))
}

/// Random periodic slopes with admissible digits and small bases.
pub fn fuzz_cases(seed: u64, count: usize) -> Vec<Params> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let len = rng.gen_range(1..=3);
        let period: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=4)).collect();
        let slope = SlopeSpec::periodic(vec![], period).expect("positive period");
        let quotients = slope.partial_quotients(3);
        let digits: Vec<u64> = (0..rng.gen_range(0..=3)).map(|i| rng.gen_range(0..=quotients[i])).collect();
        if validate_digits(&quotients, &digits).is_err() {
            continue;
        }
        let b = rng.gen_range(2..=4);
        let a = rng.gen_range(1..=4);
        out.push(Params::new(slope, InterceptSpec::Digits(digits), b, a).expect("valid base"));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_suite(
    quick: bool,
    slopes: &[String],
    rhos: &[String],
    bases: &[String],
    limit: Option<usize>,
    fuzz: Option<u64>,
    fuzz_count: usize,
    json_out: bool,
) -> Result<Outcome> {
    let cfg = if quick { SuiteConfig::quick() } else { SuiteConfig::full() };
    let mut cases = if let Some(seed) = fuzz {
        fuzz_cases(seed, fuzz_count)
    } else if slopes.is_empty() && rhos.is_empty() && bases.is_empty() {
        if quick { checks::quick_grid() } else { checks::default_grid() }
    } else {
        let slopes: Vec<String> = if slopes.is_empty() {
            checks::GRID_SLOPES.iter().map(|s| s.to_string()).collect()
        } else {
            slopes.to_vec()
        };
        let rhos: Vec<String> = if rhos.is_empty() { vec!["digits[]".into()] } else { rhos.to_vec() };
        let bases: Vec<(u64, u64)> = if bases.is_empty() {
            checks::GRID_BASES.to_vec()
        } else {
            bases.iter().map(|s| parse_base(s)).collect::<Result<_>>()?
        };
        let mut out = Vec::new();
        for s in &slopes {
            for r in &rhos {
                for &(b, a) in &bases {
                    out.push(Params::parse(s, r, b, a)?);
                }
            }
        }
        out
    };
    if let Some(n) = limit {
        cases.truncate(n);
    }
    let outcomes = checks::run_suite(&cases, &cfg);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let v = json!({
        "cases": cases.len(),
        "checks": outcomes.len(),
        "failed": failed,
        "results": outcome_rows(&outcomes),
    });
    let text = if json_out {
        serde_json::to_string_pretty(&v).expect("serializable")
    } else {
        let mut lines: Vec<String> = outcomes.iter().map(CheckOutcome::line).collect();
        lines.push(format!("{} cases, {} checks, {} failed", cases.len(), outcomes.len(), failed));
        lines.join("\n")
    };
    Ok(Outcome { text, code: if failed == 0 { 0 } else { 4 } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("hecke-mahler").chain(args.iter().copied()))
            .map_err(|e| Error::Parse(e.to_string()))?;
        execute(cli)
    }

    #[test]
    fn expand_text_golden() {
        let o = run(&["expand", "--slope", "per:[;1]", "--b", "2", "--a", "1", "-n", "7"]).unwrap();
        assert_eq!(o.text, "1 2 2 4 8 32 256");
        assert_eq!(o.code, 0);
    }

    #[test]
    fn expand_json_keeps_exact_strings() {
        let o = run(&["expand", "--slope", "per:[;3]", "--rho", "digits[]", "--b", "2", "-n", "3", "--json"]).unwrap();
        let v: Value = serde_json::from_str(&o.text).unwrap();
        assert_eq!(v["A"], json!(["7", "146", "8396808"]));
        assert_eq!(v["improper"], json!(false));
    }

    #[test]
    fn improper_head_is_reported() {
        let o = run(&["expand", "--slope", "per:[;2]", "--b", "3", "--a", "2", "-n", "3", "--json"]).unwrap();
        let v: Value = serde_json::from_str(&o.text).unwrap();
        assert!(v["head"].as_str().unwrap().contains('/'));
        assert_eq!(v["A"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn bad_base_is_a_parse_class_error() {
        let e = run(&["expand", "--slope", "per:[;1]", "--b", "1"]).err().unwrap();
        assert_eq!(e.exit_code(), 2);
        let e = run(&["expand", "--slope", "per:[0;1]", "--b", "2"]).err().unwrap();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn empty_suite() {
        let o = run(&["suite", "--limit", "0"]).unwrap();
        assert_eq!(o.code, 0);
        assert!(o.text.contains("0 cases"));
    }

    #[test]
    fn fuzz_is_deterministic() {
        let a: Vec<String> = fuzz_cases(7, 5).iter().map(|p| p.to_string()).collect();
        let b: Vec<String> = fuzz_cases(7, 5).iter().map(|p| p.to_string()).collect();
        assert_eq!(a, b);
    }
}
