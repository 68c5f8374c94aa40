use super::*;
use crate::ast::ident;
use crate::dynamics::{CState, Dialect, Fault};
use crate::statics::check_safe_top_with;
use crate::syntax::parse_program;
use crate::transforms::nofun;
use crate::value::Value;

fn small(suite: Suite, n: usize) -> SuiteParams {
    SuiteParams::new(suite, n, 1000)
}

#[test]
fn generation_is_deterministic_and_safe() {
    let cfg = GenConfig {
        free_vars: vec![ident("a")],
        ..GenConfig::default()
    };
    let builtins = Dialect::evm_pure().fun_table();
    let free = cfg.free_vars.iter().cloned().collect();
    for seed in 0..50 {
        let cfg = cfg.with_seed(seed);
        let program = gen_program(&cfg);
        assert_eq!(program, gen_program(&cfg));
        assert_eq!(check_safe_top_with(&program, &free, &builtins), Ok(()), "seed {seed}");
    }
    assert_ne!(gen_program(&cfg.with_seed(1)), gen_program(&cfg.with_seed(2)));
}

#[test]
fn no_functions_when_disallowed() {
    let cfg = GenConfig {
        allow_fundefs: false,
        ..GenConfig::default()
    };
    assert!((0..50).all(|seed| nofun(&gen_program(&cfg.with_seed(seed)))));
}

#[test]
fn invalid_configurations_are_rejected() {
    let zero_depth = GenConfig {
        max_depth: 0,
        ..GenConfig::default()
    };
    assert!(zero_depth.validate().is_err());
    let no_weights = GenConfig {
        weights: Construct::ALL.iter().map(|c| (*c, 0)).collect(),
        ..GenConfig::default()
    };
    assert!(no_weights.validate().is_err());
    let unknown = GenConfig {
        builtin_set: vec![ident("sstore")],
        ..GenConfig::default()
    };
    assert!(unknown.validate().is_err());
    assert!(GenConfig::default().validate().is_ok());
}

#[test]
fn only_some_builtins() {
    let cfg = GenConfig {
        builtin_set: vec![ident("add")],
        ..GenConfig::default()
    };
    for seed in 0..20 {
        let text = gen_program(&cfg.with_seed(seed)).to_string();
        assert!(!text.contains("mul(") && !text.contains("lt("), "{text}");
    }
}

#[test]
fn empty_suites_pass() {
    for suite in Suite::ALL {
        let report = run_suite(suite, &small(suite, 0));
        assert_eq!(report.cases_run, 0);
        assert!(report.passed());
    }
}

#[test]
fn every_suite_passes_on_a_small_run() {
    for suite in Suite::ALL {
        let report = run_suite(suite, &small(suite, 40));
        assert!(report.passed(), "{}", report.render());
        assert_eq!(report.cases_run, 40);
    }
}

#[test]
fn suite_names_round_trip() {
    for suite in Suite::ALL {
        assert_eq!(Suite::from_name(suite.name()), Some(suite));
    }
    assert_eq!(Suite::from_name("nope"), None);
}

#[test]
fn broken_interpreter_is_caught() {
    let mut params = small(Suite::StaticSoundness, 100);
    params.fault = Some(Fault::SkipOutputZeroing);
    let report = run_suite(Suite::StaticSoundness, &params);
    assert!(!report.passed());
    assert!(report.failures.windows(2).all(|w| w[0].seed <= w[1].seed));
}

#[test]
fn failures_replay_from_their_seed() {
    let mut params = small(Suite::StaticSoundness, 100);
    params.fault = Some(Fault::SkipOutputZeroing);
    let report = run_suite(Suite::StaticSoundness, &params);
    let first = &report.failures[0];
    let case = replay(Suite::StaticSoundness, &params, first.seed);
    assert!(case.failures.iter().any(|(p, d)| *p == first.property && *d == first.detail));
    assert!(case.render().contains("FAIL"));
    assert_eq!(crate::ast::print_block(&case.program, crate::ast::Layout::Indented), first.program);
}

#[test]
fn dead_code_needs_the_nofun_hypothesis() {
    let program = parse_program("{ for {} 1 {} { let x := g() break function g() -> r { r := 7 } } }").unwrap();
    let state = CState::new([(ident("a"), Value::one())].into());
    let case = dead_code_case(&program, &[state.clone()], &[4096]);
    let properties: Vec<&str> = case.failures.iter().map(|(p, _)| p.as_str()).collect();
    assert!(properties.contains(&"dead-code-stays-safe"));
    assert!(properties.contains(&"dead-code-okeq"));

    let harmless = parse_program("{ for {} 1 {} { let x := 1 break x := 2 } }").unwrap();
    assert!(dead_code_case(&harmless, &[state], &[4096]).failures.is_empty());
}

#[test]
fn okeq_relation() {
    use crate::dynamics::{EvalError, SOutcome, SafetyKind};
    use crate::statics::Mode;
    let ok = |v: u64| {
        Ok(SOutcome {
            cstate: CState::new([(ident("x"), Value::from(v))].into()),
            mode: Mode::Regular,
        })
    };
    let safety = Err(EvalError::Safety {
        kind: SafetyKind::UnknownVar,
        context: String::new(),
    });
    assert!(okeq(&ok(1), &ok(1)));
    assert!(!okeq(&ok(1), &ok(2)));
    assert!(okeq(&Err(EvalError::Limit), &safety));
    assert!(!okeq(&ok(1), &Err(EvalError::Limit)));
}

#[test]
fn out_of_range_literals_appear() {
    use crate::value::{literal_value, StringAlignment};
    let bad = (0..200)
        .filter(|seed| literal_value(&gen_literal_any(*seed), StringAlignment::Integer).is_err())
        .count();
    assert!(bad > 20, "{bad}");
}
