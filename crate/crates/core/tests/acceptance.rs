//! One line per criterion and case over the default grid.

use std::path::PathBuf;
use std::time::Instant;

use hecke_mahler::checks::{
    check_exponents, check_families, check_fast_vs_direct, check_functional, check_identities_exact, check_oracle,
    check_orders, check_words, default_grid, fixture_name, fixture_text, CheckOutcome, SuiteConfig,
};
use hecke_mahler::report::Params;
use rayon::prelude::*;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

fn fixture_check(p: &Params) -> CheckOutcome {
    let t = Instant::now();
    let path = fixtures_dir().join(fixture_name(p));
    let (passed, detail) = match fixture_text(p) {
        Err(e) => (false, serde_json::json!({ "error": e.to_string() })),
        Ok(text) => {
            if std::env::var("HM_UPDATE_FIXTURES").is_ok() {
                std::fs::write(&path, &text).expect("write fixture");
            }
            match std::fs::read_to_string(&path) {
                Ok(stored) => (stored == text, serde_json::json!({ "fixture": fixture_name(p), "bytes": text.len() })),
                Err(e) => (false, serde_json::json!({ "missing": e.to_string() })),
            }
        }
    };
    CheckOutcome {
        criterion: 8,
        name: "a=1 fixture",
        case: p.to_string(),
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn report(criterion: u8, outcomes: &[CheckOutcome]) -> bool {
    let mut ok = true;
    for o in outcomes {
        println!("{}", o.line());
        ok &= o.passed;
    }
    let n = outcomes.len();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!(
        "criterion {criterion}: {} ({passed}/{n} cases)",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn over_grid(f: impl Fn(&Params) -> CheckOutcome + Sync + Send) -> Vec<CheckOutcome> {
    default_grid().par_iter().map(f).collect()
}

#[test]
fn acceptance() {
    let cfg = SuiteConfig::full();
    let grid = default_grid();
    assert!(grid.len() >= 12);
    let start = Instant::now();
    let mut summary = Vec::new();

    let t = Instant::now();
    let c1 = over_grid(|p| check_oracle(p, cfg.oracle_n, cfg.oracle_start_bits, cfg.oracle_max_bits));
    let runtime_ok = t.elapsed().as_secs_f64() < 300.0;
    println!("criterion 1 runtime: {:.1}s (limit 300s)", t.elapsed().as_secs_f64());
    summary.push((1, report(1, &c1) && runtime_ok));

    let c2 = over_grid(|p| check_families(p, cfg.family_k));
    summary.push((2, report(2, &c2)));

    let mut c3 = over_grid(|p| check_identities_exact(p, cfg.family_k));
    c3.extend(over_grid(|p| check_fast_vs_direct(p, 25, cfg.fast_bits)));
    summary.push((3, report(3, &c3)));

    let c4 = over_grid(|p| check_words(p, cfg.word_len));
    summary.push((4, report(4, &c4)));

    let c5 = over_grid(|p| check_exponents(p, cfg.exponent_k, cfg.exponent_j, cfg.exponent_tol, cfg.golden_tol));
    summary.push((5, report(5, &c5)));

    let c6 = over_grid(|p| check_orders(p, cfg.order_window.0, cfg.order_window.1, cfg.order_band));
    summary.push((6, report(6, &c6)));

    let c7 = over_grid(|p| check_functional(p, cfg.functional_m, cfg.functional_bits, cfg.functional_width));
    summary.push((7, report(7, &c7)));

    let ones: Vec<Params> = grid.iter().filter(|p| p.a == 1).cloned().collect();
    let c8: Vec<CheckOutcome> = ones.iter().map(fixture_check).collect();
    summary.push((8, report(8, &c8)));

    println!("---");
    for (c, ok) in &summary {
        println!("acceptance criterion {c}: {}", if *ok { "PASS" } else { "FAIL" });
    }
    println!("total runtime {:.1}s", start.elapsed().as_secs_f64());
    let failed: Vec<u8> = summary.iter().filter(|(_, ok)| !ok).map(|(c, _)| *c).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
