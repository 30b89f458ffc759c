use hecke_mahler::analysis::{eval_direct, eval_fast};
use hecke_mahler::approximants::families_from_words;
use hecke_mahler::cf_core::{cf_extract, convergents, rational_cf, theta_interval, Dyadic, RealInterval, SlopeSpec};
use hecke_mahler::expansion::{expand_exact, f_from_xi, xi_from_f};
use hecke_mahler::field::{Field, Residues};
use hecke_mahler::ostrowski::{validate_digits, InterceptSpec, Sturmian};
use hecke_mahler::report::{expand_json, Params};
use hecke_mahler::words::{build_word_family_capped, periodic_value, word_value, BinaryWord};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn slope_strategy() -> impl Strategy<Value = SlopeSpec> {
    (prop::collection::vec(1u64..=5, 0..=2), prop::collection::vec(1u64..=5, 1..=3))
        .prop_map(|(prefix, period)| SlopeSpec::periodic(prefix, period).unwrap())
}

/// A slope with admissible digits of length at most 3.
fn case_strategy() -> impl Strategy<Value = (SlopeSpec, Vec<u64>)> {
    (slope_strategy(), prop::collection::vec(0u64..=5, 0..=3)).prop_filter_map("admissible digits", |(s, d)| {
        let q = s.partial_quotients(d.len().max(1));
        validate_digits(&q, &d).ok().map(|_| (s, d))
    })
}

fn bits_word() -> impl Strategy<Value = BinaryWord> {
    prop::collection::vec(any::<bool>(), 0..40).prop_map(|v| {
        let mut w = BinaryWord::new();
        for bit in v {
            w.push(bit);
        }
        w
    })
}

fn residue_of(r: &BigRational) -> Residues {
    Residues::from_bigint(r.numer()) * Residues::from_bigint(r.denom()).inv().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn determinant_and_bracketing(s in slope_strategy()) {
        let conv = convergents(&s, 20);
        prop_assert!(conv.verify_determinant());
        let th = theta_interval(&s, 256);
        for k in 0..18i64 {
            let x = BigRational::new(conv.p(k).clone(), conv.q(k).clone());
            let y = BigRational::new(conv.p(k + 1).clone(), conv.q(k + 1).clone());
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            prop_assert!(lo < th.lo().to_rational() && th.hi().to_rational() < hi);
        }
    }

    #[test]
    fn extraction_of_exact_dyadic_is_euclid(m in 1i64..(1 << 40), e in 1i64..40) {
        // an odd numerator below 2^e keeps the point inside (0, 1)
        let x = Dyadic::new(BigInt::from((m % (1 << e)) | 1), -e);
        let (q, n) = cf_extract(&RealInterval::point(x.clone()), 64);
        let euclid = rational_cf(&x.to_rational());
        prop_assert_eq!(n, euclid.len());
        prop_assert_eq!(q, euclid);
    }

    #[test]
    fn f_and_xi_round_trip(n in -1000i64..1000, d in 1i64..1000, b in 2u64..6, a in 1u64..6, fl in 0u8..2) {
        let f = BigRational::new(n.into(), d.into());
        prop_assert_eq!(f_from_xi(&xi_from_f(&f, b, a, fl), b, a, fl), f);
    }

    #[test]
    fn concatenation_law(y in bits_word(), z in bits_word(), b in 2u64..5, a in 1u64..5) {
        let yz = BinaryWord::concat(&[&y, &z]);
        let shift = BigRational::from_integer(num_traits::pow(BigInt::from(b), z.len()) * num_traits::pow(BigInt::from(a), z.ones()));
        let lhs: BigRational = word_value(&yz, b, a);
        let rhs = shift * word_value::<BigRational>(&y, b, a) + word_value::<BigRational>(&z, b, a);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn periodic_value_clears_denominator(z in bits_word(), b in 2u64..5, a in 1u64..5) {
        prop_assume!(!z.is_empty());
        let v: BigRational = periodic_value(&BinaryWord::new(), &z, b, a).unwrap();
        let scale = BigRational::from_integer(num_traits::pow(BigInt::from(b), z.len()) * num_traits::pow(BigInt::from(a), z.ones()))
            - BigRational::one();
        prop_assert_eq!(v * scale, word_value::<BigRational>(&z, b, a));
    }

    #[test]
    fn word_lengths_and_counts((s, d) in case_strategy()) {
        let st = Sturmian::new(&s, &InterceptSpec::Digits(d), 10).unwrap();
        let fam = build_word_family_capped(&st, 8, 200_000);
        for k in 0..=fam.last_index() {
            let ki = k as i64;
            prop_assert_eq!(BigInt::from(fam.v(k).len()), st.q(ki).clone());
            prop_assert_eq!(BigInt::from(fam.v(k).ones()), st.p(ki).clone());
            prop_assert_eq!(BigInt::from(fam.r(k).len()), st.r(k).clone());
            prop_assert_eq!(BigInt::from(fam.t(k).ones()), st.digits().t_tilde[k].clone());
        }
    }

    #[test]
    fn residues_agree_with_exact((s, d) in case_strategy(), b in 2u64..5, a in 1u64..5) {
        let st = Sturmian::new(&s, &InterceptSpec::Digits(d), 10).unwrap();
        let exact = families_from_words::<BigRational>(&st, b, a, 6).unwrap();
        let modular = families_from_words::<Residues>(&st, b, a, 6).unwrap();
        for (x, y) in exact.iter().zip(&modular) {
            for (fx, fy) in x.members().iter().zip(y.members()) {
                prop_assert_eq!(residue_of(&fx.num), fy.num);
                prop_assert_eq!(residue_of(&fx.den), fy.den);
            }
        }
    }

    #[test]
    fn direct_and_fast_intersect((s, d) in case_strategy(), b in 2u64..5, a in 1u64..5) {
        let st = Sturmian::new(&s, &InterceptSpec::Digits(d), 40).unwrap();
        let direct = eval_direct(&st, b, a, 160).unwrap();
        let fast = eval_fast(&st, b, a, 160).unwrap();
        prop_assert!(direct.overlaps(&fast), "{} vs {}", direct, fast);
    }

    #[test]
    fn contracted_elements_are_positive((s, d) in case_strategy(), b in 2u64..5, a in 1u64..5) {
        let st = Sturmian::new(&s, &InterceptSpec::Digits(d), 8).unwrap();
        let out = expand_exact(&st, b, a, 5).unwrap();
        for x in out.integers().unwrap_or_else(|| out.integer_tail()) {
            prop_assert!(x.is_positive());
        }
        if out.improper {
            prop_assert!(out.head().is_positive());
            prop_assert!((BigInt::from(b - 1) % out.head().denom()).is_zero());
        }
    }

    #[test]
    fn expand_json_round_trips((s, d) in case_strategy(), b in 2u64..4, a in 1u64..4) {
        let p = Params::new(s.clone(), InterceptSpec::Digits(d.clone()), b, a).unwrap();
        let doc = expand_json(&p, 4).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        let st = Sturmian::new(&s, &InterceptSpec::Digits(d), 8).unwrap();
        let improper = hecke_mahler::expansion::is_improper(b, a);
        let exact = expand_exact(&st, b, a, if improper { 5 } else { 4 }).unwrap();
        let want = exact.integers().unwrap_or_else(|| exact.integer_tail());
        let parsed: Vec<BigInt> = back["A"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().parse().unwrap()).collect();
        prop_assert_eq!(parsed, want);
    }
}
