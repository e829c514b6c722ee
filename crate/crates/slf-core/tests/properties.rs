//! Cross-module property tests: parser/printer round trips, function
//! totality, value-set soundness against the oracle, and semantic dualities.

mod common;

use common::*;
use proptest::prelude::*;

use slf_core::formula::{Path, SlState};
use slf_core::func::{self, FuncKind, FuncSpec, Registry};
use slf_core::game::Assignment;
use slf_core::lasso::eval_ltl_lasso;
use slf_core::limits::Limits;
use slf_core::oracle::{eval_sl, eval_sl_initial, SlMode};
use slf_core::parse::{parse_sl, Dialect, ParsedFormula};
use slf_core::rat::Rat;
use slf_core::values::{ltl_value_set, sl_value_set, size_bound_check, ValueSet};

/// Random SL state formula of any shape, for the printer round trip.
fn random_sl_any(seed: &mut u64, depth: usize) -> SlState {
    let atoms = ["p", "q", "r"];
    let vars = ["x", "y"];
    let agents = ["a1", "a2"];
    if depth == 0 {
        return SlState::atom(atoms[pick(seed, atoms.len())]);
    }
    match pick(seed, 6) {
        0 => SlState::atom(atoms[pick(seed, atoms.len())]),
        1 => SlState::exists(vars[pick(seed, vars.len())], random_sl_any(seed, depth - 1)),
        2 => SlState::bind(
            agents[pick(seed, agents.len())],
            vars[pick(seed, vars.len())],
            random_sl_any(seed, depth - 1),
        ),
        3 => SlState::all(random_sl_path_any(seed, depth - 1)),
        4 => SlState::Func(func::neg1(), vec![random_sl_any(seed, depth - 1)]),
        _ => SlState::Func(
            if splitmix(seed) % 2 == 0 { func::and2() } else { func::or2() },
            vec![random_sl_any(seed, depth - 1), random_sl_any(seed, depth - 1)],
        ),
    }
}

fn random_sl_path_any(seed: &mut u64, depth: usize) -> Path<SlState> {
    if depth == 0 {
        return Path::State(Box::new(random_sl_any(seed, 0)));
    }
    match pick(seed, 4) {
        0 => Path::State(Box::new(random_sl_any(seed, depth - 1))),
        1 => Path::Next(Box::new(random_sl_path_any(seed, depth - 1))),
        2 => Path::Until(
            Box::new(random_sl_path_any(seed, depth - 1)),
            Box::new(random_sl_path_any(seed, depth - 1)),
        ),
        _ => Path::Func(
            if splitmix(seed) % 2 == 0 { func::and2() } else { func::or2() },
            vec![
                random_sl_path_any(seed, depth - 1),
                random_sl_path_any(seed, depth - 1),
            ],
        ),
    }
}

#[test]
fn parser_round_trip_corpus() {
    let reg = Registry::builtin();
    let mut seed = 0x5EEDu64;
    for i in 0..10_000 {
        let f = slf_core::formula::normalize_sl(random_sl_any(&mut seed, 1 + i % 4));
        let printed = f.to_string();
        let parsed = parse_sl(&printed, &reg)
            .unwrap_or_else(|e| panic!("failed to reparse `{printed}`: {e}"));
        assert_eq!(parsed, f, "round trip changed `{printed}`");
    }
}

#[test]
fn parser_round_trip_other_dialects() {
    // qctl and ltl go through the same printer machinery; sample fewer
    let reg = Registry::builtin();
    let mut seed = 77u64;
    for _ in 0..2_000 {
        let f = random_ltl(&mut seed, &["p", "q"], 6);
        let printed = f.to_string();
        match slf_core::parse::parse_formula(&printed, Dialect::Ltl, &reg).unwrap() {
            ParsedFormula::Ltl(g) => assert_eq!(g, f, "ltl round trip changed `{printed}`"),
            _ => unreachable!(),
        }
    }
}

proptest! {
    #[test]
    fn apply_func_total_and_in_unit_interval(
        num1 in 0u64..=12, den1 in 1u64..=12,
        num2 in 0u64..=12, den2 in 1u64..=12,
        lam_n in 0u64..=6, lam_d in 1u64..=6,
        which in 0usize..6,
    ) {
        let x = Rat::new(num1.min(den1), den1).unwrap();
        let y = Rat::new(num2.min(den2), den2).unwrap();
        let lambda = Rat::new(lam_n.min(lam_d), lam_d).unwrap();
        let spec = match which {
            0 => func::and2(),
            1 => func::or2(),
            2 => func::diff2(),
            3 => func::leq2(),
            4 => func::wavg(lambda),
            _ => FuncSpec::new("min", 2, FuncKind::Min).unwrap(),
        };
        let v = spec.apply(&[x, y]).unwrap();
        prop_assert!(v >= Rat::ZERO && v <= Rat::ONE);
        let n = func::neg1().apply(&[x]).unwrap();
        prop_assert!(n >= Rat::ZERO && n <= Rat::ONE);
    }
}

#[test]
fn value_set_sound_for_lasso_oracle() {
    // every value the word oracle computes lies in the formula's value set
    let mut seed = 0xABCDu64;
    let alphabet = boolean_word_alphabet(&["p", "q"]);
    let base = ValueSet::boolean();
    for _ in 0..300 {
        let f = random_ltl(&mut seed, &["p", "q"], 6);
        let set = ltl_value_set(&f, &base).unwrap();
        for _ in 0..10 {
            let w = random_lasso(&mut seed, &alphabet, 4);
            for pos in 0..3 {
                let v = eval_ltl_lasso(&f, &w, pos).unwrap();
                assert!(set.contains(&v), "{f}: value {v} outside {set:?}");
            }
        }
        let rep = size_bound_check(set.len(), base.len(), f.size());
        assert!(rep.ok);
    }
}

#[test]
fn value_set_sound_for_sl_oracle() {
    let mut seed = 0xF00Du64;
    let base = ValueSet::boolean();
    for _ in 0..60 {
        let g = random_boolean_wcgs(&mut seed, 3, 2, 2, &["p", "q"]);
        let f = random_closed_sl1g(&mut seed, &g, 1);
        let set = sl_value_set(&f, &base).unwrap();
        let v = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &Limits::default()).unwrap();
        assert!(set.contains(&v.value), "{f}: value {} outside the set", v.value);
    }
}

#[test]
fn negation_duality_on_random_instances() {
    let mut seed = 0xD0D0u64;
    for _ in 0..40 {
        let g = random_boolean_wcgs(&mut seed, 3, 2, 2, &["p", "q"]);
        let f = random_closed_sl1g(&mut seed, &g, 1);
        let nf = SlState::neg(f.clone());
        let v = eval_sl_initial(&g, &f, SlMode::XBoundedExact, &Limits::default()).unwrap();
        let nv = eval_sl_initial(&g, &nf, SlMode::XBoundedExact, &Limits::default()).unwrap();
        assert_eq!(nv.value, v.value.neg());
    }
}

#[test]
fn fg_duality_on_lassos() {
    let reg = Registry::builtin();
    let mut seed = 31u64;
    let alphabet = boolean_word_alphabet(&["p"]);
    let g = slf_core::parse::parse_ltl("G p", &reg).unwrap();
    let dual = slf_core::parse::parse_ltl("!(F (!p))", &reg).unwrap();
    for _ in 0..200 {
        let w = random_lasso(&mut seed, &alphabet, 5);
        for pos in 0..4 {
            assert_eq!(
                eval_ltl_lasso(&g, &w, pos).unwrap(),
                eval_ltl_lasso(&dual, &w, pos).unwrap()
            );
        }
    }
}

#[test]
fn until_expansion_on_random_lassos() {
    let reg = Registry::builtin();
    let mut seed = 99u64;
    let alphabet = boolean_word_alphabet(&["p", "q"]);
    let f = slf_core::parse::parse_ltl("p U q", &reg).unwrap();
    let a = slf_core::parse::parse_ltl("p", &reg).unwrap();
    let b = slf_core::parse::parse_ltl("q", &reg).unwrap();
    for _ in 0..200 {
        let w = random_lasso(&mut seed, &alphabet, 5);
        for i in 0..6 {
            let lhs = eval_ltl_lasso(&f, &w, i).unwrap();
            let rhs = eval_ltl_lasso(&b, &w, i).unwrap().max(
                eval_ltl_lasso(&a, &w, i)
                    .unwrap()
                    .min(eval_ltl_lasso(&f, &w, i + 1).unwrap()),
            );
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn quantifier_monotone_in_strategy_class() {
    // on ∃-only sentences, enlarging the strategy class cannot decrease the
    // value; on ∀-only ones it cannot increase it
    let mut seed = 0xCAFEu64;
    for _ in 0..25 {
        let g = random_boolean_wcgs(&mut seed, 3, 1, 2, &["p"]);
        let body = SlState::all(Path::Next(Box::new(Path::State(Box::new(SlState::atom("p"))))));
        let exists = SlState::exists("x", SlState::bind("a1", "x", body.clone()));
        let forall = SlState::forall("x", SlState::bind("a1", "x", body));
        let lim = Limits::default();
        let e_exact = eval_sl_initial(&g, &exists, SlMode::XBoundedExact, &lim).unwrap();
        let e_ml = eval_sl_initial(&g, &exists, SlMode::MemorylessApprox, &lim).unwrap();
        assert!(e_ml.value <= e_exact.value);
        let a_exact = eval_sl_initial(&g, &forall, SlMode::XBoundedExact, &lim).unwrap();
        let a_ml = eval_sl_initial(&g, &forall, SlMode::MemorylessApprox, &lim).unwrap();
        assert!(a_ml.value >= a_exact.value);
    }
}

#[test]
fn enumeration_order_does_not_matter() {
    // evaluating twice gives identical results (pure, deterministic)
    let mut seed = 4242u64;
    let g = random_boolean_wcgs(&mut seed, 3, 2, 2, &["p", "q"]);
    let f = random_closed_sl1g(&mut seed, &g, 1);
    let lim = Limits::default();
    let v1 = eval_sl(&g, &f, &Assignment::empty(), &[g.initial], SlMode::XBoundedExact, &lim).unwrap();
    let v2 = eval_sl(&g, &f, &Assignment::empty(), &[g.initial], SlMode::XBoundedExact, &lim).unwrap();
    assert_eq!(v1.value, v2.value);
}
