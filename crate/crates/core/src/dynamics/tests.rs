use num_bigint::BigUint;

use super::*;
use crate::ast::{ident, Literal};
use crate::statics::check_safe_top;
use crate::syntax::parse_program;

const SCOPING: &str = include_str!("../../tests/fixtures/yul/scoping.yul");

fn evm() -> Dialect {
    Dialect::evm_pure()
}

fn run(source: &str, fuel: u64) -> Result<SOutcome> {
    exec_top(&parse_program(source).unwrap(), CState::default(), &evm(), fuel)
}

fn locals(pairs: &[(&str, u64)]) -> CState {
    CState::new(pairs.iter().map(|(k, v)| (ident(k), Value::from(*v))).collect())
}

fn safety_kind(result: Result<SOutcome>) -> SafetyKind {
    match result {
        Err(EvalError::Safety { kind, .. }) => kind,
        other => panic!("expected a safety error, got {other:?}"),
    }
}

fn eval_literal(lit: Literal) -> Value {
    let outcome = exec_expression(&Expression::Literal(lit), CState::default(), &FunEnv::default(), &evm(), 10).unwrap();
    outcome.values[0]
}

fn biguint_to_value(n: &BigUint) -> Value {
    Value::from_big_endian(&n.to_bytes_be())
}

#[test]
fn literal_values_match_big_integer_oracle() {
    let hex = BigUint::parse_bytes(b"ff0012", 16).unwrap();
    assert_eq!(eval_literal(Literal::hex("ff0012")), biguint_to_value(&hex));
    assert_eq!(eval_literal(Literal::hex("ff0012")), Value::from(16711698u64));

    let bytes = BigUint::from_bytes_be(&[0x90, 0xa4]);
    assert_eq!(eval_literal(Literal::HexString("90a4".into())), biguint_to_value(&bytes));
    assert_eq!(eval_literal(Literal::HexString("90a4".into())), Value::from(37028u64));
}

#[test]
fn variable_lookup_and_fuel_zero() {
    let state = locals(&[("x", 7)]);
    let outcome = exec_expression(&Expression::var("x"), state.clone(), &FunEnv::default(), &evm(), 10).unwrap();
    assert_eq!(outcome.values, [Value::from(7)]);
    assert_eq!(outcome.cstate, state);
    assert_eq!(
        exec_expression(&Expression::var("x"), state, &FunEnv::default(), &evm(), 0),
        Err(EvalError::Limit)
    );
    assert_eq!(run("{ }", 0), Err(EvalError::Limit));
    assert!(run("{ }", 1).is_ok());
}

#[test]
fn builtin_calls() {
    let call = Expression::call(
        "add",
        vec![Expression::Literal(Literal::dec("1")), Expression::Literal(Literal::dec("2"))],
    );
    let outcome = exec_expression(&call, CState::default(), &FunEnv::default(), &evm(), 10).unwrap();
    assert_eq!(outcome.values, [Value::from(3)]);

    let max = format!("{}", Value::MAX);
    let outcome = run(&format!("{{ let x := add({max}, 1) }}"), 100).unwrap();
    assert_eq!(outcome.cstate, locals(&[("x", 0)]));
    let outcome = exec_top(
        &parse_program(&format!("{{ x := add({max}, 1) }}")).unwrap(),
        locals(&[("x", 5)]),
        &evm(),
        100,
    )
    .unwrap();
    assert_eq!(outcome.cstate, locals(&[("x", 0)]));
    assert_eq!(safety_kind(run("{ let x := add(1) }", 100)), SafetyKind::ArityMismatch);
    assert_eq!(safety_kind(run("{ let x := nope() }", 100)), SafetyKind::UnknownFun);
}

#[test]
fn unassigned_outputs_are_zero() {
    let info = FunInfo {
        inputs: vec![],
        outputs: vec![ident("a"), ident("b")],
        body: Arc::new(parse_program("{ a := 1 }").unwrap()),
    };
    assert_eq!(
        exec_function(&info, vec![], &FunEnv::default(), &evm(), 100),
        Ok(vec![Value::one(), Value::zero()])
    );
    let leaving = FunInfo {
        inputs: vec![],
        outputs: vec![],
        body: Arc::new(parse_program("{ leave }").unwrap()),
    };
    assert_eq!(exec_function(&leaving, vec![], &FunEnv::default(), &evm(), 100), Ok(vec![]));
    let breaking = FunInfo {
        body: Arc::new(parse_program("{ break }").unwrap()),
        ..leaving
    };
    match exec_function(&breaking, vec![], &FunEnv::default(), &evm(), 100) {
        Err(EvalError::Safety { kind, .. }) => assert_eq!(kind, SafetyKind::FunctionModeError),
        other => panic!("{other:?}"),
    }
}

#[test]
fn calls_see_only_the_defining_scopes() {
    // `h` is defined inside `g`; when `h` calls `f`, `f` runs with only the
    // outermost scope visible, so `f` cannot reach `k`, which lives in `g`.
    let ok = "{
        let x
        function f() -> r { r := 5 }
        function g() -> s { s := h() function h() -> t { t := f() } }
        x := g()
    }";
    assert_eq!(run(ok, 100).unwrap().cstate, locals(&[("x", 5)]));

    let unreachable = "{
        let x
        function f() -> r { r := k() }
        function g() -> s { s := h() function h() -> t { t := f() } function k() -> u { u := 1 } }
        x := g()
    }";
    assert_eq!(safety_kind(run(unreachable, 100)), SafetyKind::UnknownFun);
}

#[test]
fn trimming_drops_scopes_above_the_callee() {
    let f = FunInfo {
        inputs: vec![],
        outputs: vec![],
        body: Arc::new(Block::default()),
    };
    let env = FunEnv::new(vec![
        Scope::from([(ident("f"), f.clone())]),
        Scope::from([(ident("g"), f.clone())]),
        Scope::from([(ident("h"), f)]),
    ]);
    let (index, _) = env.find(&ident("f")).unwrap();
    assert_eq!(index, 0);
    assert_eq!(env.trimmed(index).scopes.len(), 1);
    assert_eq!(
        funenv_to_funtable(&env).keys().cloned().collect::<Vec<_>>(),
        [ident("f"), ident("g"), ident("h")]
    );
}

#[test]
fn multi_declaration_defaults_to_zero() {
    let stmt = &parse_program("{ let a, b }").unwrap().statements[0];
    let outcome = exec_statement(stmt, CState::default(), &FunEnv::default(), &evm(), 10).unwrap();
    assert_eq!(outcome.mode, Mode::Regular);
    assert_eq!(outcome.cstate, locals(&[("a", 0), ("b", 0)]));
    let leave = exec_statement(&Statement::Leave, locals(&[("q", 3)]), &FunEnv::default(), &evm(), 10).unwrap();
    assert_eq!(leave, SOutcome { cstate: locals(&[("q", 3)]), mode: Mode::Leave });
}

#[test]
fn loop_variables_are_removed_on_exit() {
    let stmt = &parse_program("{ for { let i := 0 } lt(i, 3) { i := add(i, 1) } { } }").unwrap().statements[0];
    let outcome = exec_statement(stmt, CState::default(), &FunEnv::default(), &evm(), 1000).unwrap();
    assert_eq!(outcome.mode, Mode::Regular);
    assert!(outcome.cstate.local.is_empty());

    let counted = "{ let n for { let i := 0 } lt(i, 3) { i := add(i, 1) } { n := add(n, 2) } }";
    let outcome = exec_statement(
        &Statement::Block(parse_program(counted).unwrap()),
        locals(&[]),
        &FunEnv::default(),
        &evm(),
        1000,
    )
    .unwrap();
    assert!(outcome.cstate.local.is_empty());
    let block = parse_program("{ for { let i := 0 } lt(i, 3) { i := add(i, 1) } { n := add(n, 2) } }").unwrap();
    let outcome = exec_top(&block, locals(&[("n", 0)]), &evm(), 1000).unwrap();
    assert_eq!(outcome.cstate, locals(&[("n", 6)]));
}

#[test]
fn loop_control_modes() {
    let block = parse_program(
        "{ for { let i := 0 } 1 { i := add(i, 1) } { if eq(i, 4) { break } if lt(i, 2) { continue } n := add(n, 1) } }",
    )
    .unwrap();
    let outcome = exec_top(&block, locals(&[("n", 0)]), &evm(), 1000).unwrap();
    assert_eq!(outcome.cstate, locals(&[("n", 2)]));

    let leaving = "{ let r function f() -> x { for { } 1 { } { x := 9 leave } x := 1 } r := f() }";
    assert_eq!(run(leaving, 1000).unwrap().cstate, locals(&[("r", 9)]));
    assert_eq!(safety_kind(run("{ for { } 1 { break } { } }", 100)), SafetyKind::BreakOutsideLoop);
}

#[test]
fn block_stops_at_break_and_restricts_locals() {
    let block = parse_program("{ let x := 1 break let y := 2 }").unwrap();
    let outcome = exec_block(&block, CState::default(), &FunEnv::default(), &evm(), 100).unwrap();
    assert_eq!(outcome.mode, Mode::Break);
    assert!(outcome.cstate.local.is_empty());
    let empty = exec_block(&Block::default(), locals(&[("z", 1)]), &FunEnv::default(), &evm(), 100).unwrap();
    assert_eq!(empty, SOutcome { cstate: locals(&[("z", 1)]), mode: Mode::Regular });
}

#[test]
fn duplicate_functions_are_rejected() {
    assert_eq!(
        safety_kind(run("{ function g() { } function f() { function g() { } } f() }", 100)),
        SafetyKind::DuplicateFun
    );
    assert_eq!(safety_kind(run("{ function add() { } }", 100)), SafetyKind::DuplicateFun);
    assert_eq!(safety_kind(run("{ function f() { } function f() { } }", 100)), SafetyKind::DuplicateFun);
}

#[test]
fn scoping_listing_runs_to_completion() {
    let block = parse_program(SCOPING).unwrap();
    assert!(check_safe_top(&block, &evm().fun_table()).is_ok());
    let outcome = exec_top(&block, CState::default(), &evm(), 100).unwrap();
    assert_eq!(outcome, SOutcome { cstate: locals(&[("x", 0)]), mode: Mode::Regular });
    // Nested one level down, `x` is removed when its block exits.
    let inner = Block::new(vec![Statement::Block(block.clone())]);
    let outcome = exec_top(&inner, CState::default(), &evm(), 100).unwrap();
    assert!(outcome.cstate.local.is_empty());
    assert_eq!(exec_top(&block, CState::default(), &evm(), 0), Err(EvalError::Limit));
}

#[test]
fn top_level_modes_are_errors() {
    assert_eq!(safety_kind(run("{ break }", 100)), SafetyKind::BreakOutsideLoop);
    assert_eq!(safety_kind(run("{ continue }", 100)), SafetyKind::ContinueOutsideLoop);
    assert_eq!(safety_kind(run("{ leave }", 100)), SafetyKind::LeaveOutsideFunction);
}

#[test]
fn defensive_checks() {
    assert_eq!(safety_kind(run("{ x := 1 }", 100)), SafetyKind::UnknownVar);
    assert_eq!(safety_kind(run("{ let x let x }", 100)), SafetyKind::DuplicateVar);
    assert_eq!(safety_kind(run("{ let x := a.b }", 100)), SafetyKind::BadPath);
    assert_eq!(
        safety_kind(run("{ function f() -> a, b { } let x := f() }", 100)),
        SafetyKind::NonSingleValue
    );
    assert_eq!(
        safety_kind(run("{ function f() -> a { } f() }", 100)),
        SafetyKind::ResultCountMismatch
    );
    assert_eq!(
        safety_kind(run(&format!("{{ let x := 0x1{} }}", "0".repeat(64)), 100)),
        SafetyKind::LiteralTooLarge
    );
    assert_eq!(
        safety_kind(run(&format!("{{ let x := \"{}\" }}", "a".repeat(33)), 100)),
        SafetyKind::StringTooLong
    );
}

#[test]
fn switch_selects_first_matching_case() {
    let program = "{ switch x case 1 { y := 10 } case \"a\" { y := 20 } default { y := 30 } }";
    let block = parse_program(program).unwrap();
    for (x, y) in [(1, 10), (97, 20), (5, 30)] {
        let out = exec_top(&block, locals(&[("x", x), ("y", 0)]), &evm(), 100).unwrap();
        assert_eq!(out.cstate, locals(&[("x", x), ("y", y)]));
    }
}

#[test]
fn arguments_are_evaluated_right_to_left() {
    // Pure builtins hide the order, but the first failing argument does not.
    let call = Expression::call("add", vec![Expression::call("not", vec![Expression::var("x")]), Expression::var("y")]);
    let state = locals(&[("x", 1), ("y", 2)]);
    let out = exec_expression(&call, state.clone(), &FunEnv::default(), &evm(), 10).unwrap();
    assert_eq!(out.values, [(!Value::one()).overflowing_add(Value::from(2)).0]);
    let missing_both = exec_expression(&call, CState::default(), &FunEnv::default(), &evm(), 10);
    assert!(matches!(missing_both, Err(EvalError::Safety { context, .. }) if context.contains('y')));
}

#[test]
fn observer_sees_every_block() {
    #[derive(Default)]
    struct Count(usize, usize);
    impl Observer for Count {
        fn enter_block(&mut self, _: &Block, _: &CState, _: &FunEnv) {
            self.0 += 1;
        }
        fn statement_done(&mut self, _: &Statement, _: &CState, _: &FunEnv, _: &Result<SOutcome>) {
            self.1 += 1;
        }
    }
    let block = parse_program("{ let x { x := 1 } if x { x := 2 } }").unwrap();
    let dialect = evm();
    let mut interp = Interpreter::with_observer(&dialect, Count::default());
    interp.exec_top(&block, CState::default(), 100).unwrap();
    assert_eq!(interp.observer.0, 3);
    assert_eq!(interp.observer.1, 5);
}

#[test]
fn fault_injection_changes_results() {
    let block = parse_program("{ let r function f() -> a { } r := f() }").unwrap();
    let dialect = evm();
    let mut interp = Interpreter::new(&dialect);
    interp.fault = Some(Fault::SkipOutputZeroing);
    assert!(interp.exec_top(&block, CState::default(), 100).is_err());
}
