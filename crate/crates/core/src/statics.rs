//! Static safety checks: scoping of variables and functions, call arities,
//! literal bounds, and the termination-mode calculus.
//!
//! Variable tables are sets of accessible names. Function tables map each
//! visible function to its number of inputs and outputs. Functions are
//! visible in their whole block (hoisting) including nested function bodies;
//! variables are visible from just after their declaration and are not
//! accessible across function boundaries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ast::{hoisted_fundefs, Block, Expression, FunCall, FunDef, Identifier, Literal, Path, Statement};
use crate::value::{literal_value, StringAlignment};

pub type VarTable = BTreeSet<Identifier>;
pub type FunTable = BTreeMap<Identifier, FunType>;

/// Number of inputs and outputs of a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunType {
    pub inputs: usize,
    pub outputs: usize,
}

impl FunType {
    pub fn new(inputs: usize, outputs: usize) -> Self {
        FunType { inputs, outputs }
    }

    pub fn of(def: &FunDef) -> Self {
        FunType::new(def.inputs.len(), def.outputs.len())
    }
}

/// How a statement or block may terminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Regular,
    Break,
    Continue,
    Leave,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Regular, Mode::Break, Mode::Continue, Mode::Leave];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Regular => "regular",
            Mode::Break => "break",
            Mode::Continue => "continue",
            Mode::Leave => "leave",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A set of modes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ModeSet(u8);

impl ModeSet {
    pub fn empty() -> Self {
        ModeSet(0)
    }

    pub fn of(modes: &[Mode]) -> Self {
        modes.iter().fold(ModeSet::empty(), |set, &m| set.with(m))
    }

    pub fn regular() -> Self {
        ModeSet::of(&[Mode::Regular])
    }

    pub fn with(self, mode: Mode) -> Self {
        ModeSet(self.0 | mode.bit())
    }

    pub fn without(self, mode: Mode) -> Self {
        ModeSet(self.0 & !mode.bit())
    }

    pub fn union(self, other: ModeSet) -> Self {
        ModeSet(self.0 | other.0)
    }

    pub fn contains(self, mode: Mode) -> bool {
        self.0 & mode.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ModeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Mode> {
        Mode::ALL.into_iter().filter(move |m| self.contains(*m))
    }
}

impl fmt::Display for ModeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Result of checking a statement: the variable table after it and the ways
/// it may terminate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarsModes {
    pub vars: VarTable,
    pub modes: ModeSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StaticErrorKind {
    UnknownVar,
    UnknownFun,
    DuplicateVar,
    DuplicateFun,
    ArityMismatch,
    ResultCountMismatch,
    LiteralTooLarge,
    StringTooLong,
    BadPath,
    ModeViolation,
    DuplicateCase,
    NonSingleValue,
    EmptySwitch,
}

impl StaticErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StaticErrorKind::UnknownVar => "unknown-var",
            StaticErrorKind::UnknownFun => "unknown-fun",
            StaticErrorKind::DuplicateVar => "duplicate-var",
            StaticErrorKind::DuplicateFun => "duplicate-fun",
            StaticErrorKind::ArityMismatch => "arity-mismatch",
            StaticErrorKind::ResultCountMismatch => "result-count-mismatch",
            StaticErrorKind::LiteralTooLarge => "literal-too-large",
            StaticErrorKind::StringTooLong => "string-too-long",
            StaticErrorKind::BadPath => "bad-path",
            StaticErrorKind::ModeViolation => "mode-violation",
            StaticErrorKind::DuplicateCase => "duplicate-case",
            StaticErrorKind::NonSingleValue => "non-single-value",
            StaticErrorKind::EmptySwitch => "empty-switch",
        }
    }
}

impl fmt::Display for StaticErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}: {context}")]
pub struct StaticError {
    pub kind: StaticErrorKind,
    pub context: String,
}

type Result<T> = std::result::Result<T, StaticError>;

fn fail<T>(kind: StaticErrorKind, context: impl Into<String>) -> Result<T> {
    Err(StaticError {
        kind,
        context: context.into(),
    })
}

/// 2^256 - 1 in decimal.
const MAX_DECIMAL: &str = "115792089237316195423570985008687907853269984665640564039457584007913129639935";

/// Checks that a literal denotes a value below 2^256. Works on the digits
/// and bytes directly, without computing the value.
pub fn check_safe_literal(lit: &Literal) -> Result<()> {
    match lit {
        Literal::True | Literal::False => Ok(()),
        Literal::DecNumber(digits) => {
            let significant = digits.trim_start_matches('0');
            let too_large = significant.len() > MAX_DECIMAL.len()
                || (significant.len() == MAX_DECIMAL.len() && significant > MAX_DECIMAL);
            if too_large {
                fail(StaticErrorKind::LiteralTooLarge, format!("{lit}"))
            } else {
                Ok(())
            }
        }
        Literal::HexNumber(digits) => {
            if digits.trim_start_matches('0').len() > 64 {
                fail(StaticErrorKind::LiteralTooLarge, format!("{lit}"))
            } else {
                Ok(())
            }
        }
        Literal::PlainString(_) | Literal::HexString(_) => {
            let len = lit.string_bytes().expect("string literal").len();
            if len > 32 {
                fail(StaticErrorKind::StringTooLong, format!("{len} bytes"))
            } else {
                Ok(())
            }
        }
    }
}

fn check_var_path(path: &Path, vars: &VarTable) -> Result<()> {
    let Some(id) = path.as_single() else {
        return fail(StaticErrorKind::BadPath, format!("`{path}`"));
    };
    if !vars.contains(id) {
        return fail(StaticErrorKind::UnknownVar, format!("`{id}`"));
    }
    Ok(())
}

/// Checks an expression and returns how many values it yields.
pub fn check_safe_expression(expr: &Expression, vars: &VarTable, funs: &FunTable) -> Result<usize> {
    match expr {
        Expression::Path(path) => check_var_path(path, vars).map(|()| 1),
        Expression::Literal(lit) => check_safe_literal(lit).map(|()| 1),
        Expression::FunCall(call) => check_safe_funcall(call, vars, funs),
    }
}

pub fn check_safe_funcall(call: &FunCall, vars: &VarTable, funs: &FunTable) -> Result<usize> {
    let Some(ty) = funs.get(&call.name) else {
        return fail(StaticErrorKind::UnknownFun, format!("`{}`", call.name));
    };
    if call.args.len() != ty.inputs {
        return fail(
            StaticErrorKind::ArityMismatch,
            format!("`{}` takes {} arguments, given {}", call.name, ty.inputs, call.args.len()),
        );
    }
    for arg in &call.args {
        let n = check_safe_expression(arg, vars, funs)?;
        if n != 1 {
            return fail(
                StaticErrorKind::NonSingleValue,
                format!("argument `{arg}` of `{}` yields {n} values", call.name),
            );
        }
    }
    Ok(ty.outputs)
}

fn check_single(expr: &Expression, vars: &VarTable, funs: &FunTable) -> Result<()> {
    let n = check_safe_expression(expr, vars, funs)?;
    if n != 1 {
        return fail(StaticErrorKind::NonSingleValue, format!("`{expr}` yields {n} values"));
    }
    Ok(())
}

fn check_call_count(call: &FunCall, expected: usize, vars: &VarTable, funs: &FunTable) -> Result<()> {
    let n = check_safe_funcall(call, vars, funs)?;
    if n != expected {
        return fail(
            StaticErrorKind::ResultCountMismatch,
            format!("`{call}` yields {n} values, {expected} expected"),
        );
    }
    Ok(())
}

fn declare_fresh<'a>(
    names: impl IntoIterator<Item = &'a Identifier>,
    vars: &VarTable,
) -> Result<VarTable> {
    let mut out = vars.clone();
    for name in names {
        if !out.insert(name.clone()) {
            return fail(StaticErrorKind::DuplicateVar, format!("`{name}` is already visible"));
        }
    }
    Ok(out)
}

/// Extends `funs` with the functions defined directly in `block`.
fn add_hoisted(block: &Block, funs: &FunTable) -> Result<FunTable> {
    let mut out = funs.clone();
    for def in hoisted_fundefs(block) {
        if out.insert(def.name.clone(), FunType::of(def)).is_some() {
            return fail(StaticErrorKind::DuplicateFun, format!("`{}` is already visible", def.name));
        }
    }
    Ok(out)
}

/// Arities of the functions defined directly in `block`.
pub fn fun_table_of(block: &Block) -> Result<FunTable> {
    add_hoisted(block, &FunTable::new())
}

/// Checks a statement under the accessible variables and visible functions.
/// `funs` must already contain the functions hoisted from the enclosing block.
pub fn check_safe_statement(stmt: &Statement, vars: &VarTable, funs: &FunTable) -> Result<VarsModes> {
    let regular = |vars: VarTable| VarsModes {
        vars,
        modes: ModeSet::regular(),
    };
    match stmt {
        Statement::Block(block) => Ok(VarsModes {
            vars: vars.clone(),
            modes: check_safe_block(block, vars, funs)?,
        }),
        Statement::VariableSingle { name, init } => {
            if let Some(e) = init {
                check_single(e, vars, funs)?;
            }
            declare_fresh([name], vars).map(regular)
        }
        Statement::VariableMulti { names, init } => {
            if let Some(call) = init {
                check_call_count(call, names.len(), vars, funs)?;
            }
            declare_fresh(names, vars).map(regular)
        }
        Statement::AssignSingle { target, value } => {
            check_var_path(target, vars)?;
            check_single(value, vars, funs)?;
            Ok(regular(vars.clone()))
        }
        Statement::AssignMulti { targets, value } => {
            let mut seen = BTreeSet::new();
            for target in targets {
                check_var_path(target, vars)?;
                if !seen.insert(target) {
                    return fail(StaticErrorKind::DuplicateVar, format!("`{target}` assigned twice"));
                }
            }
            check_call_count(value, targets.len(), vars, funs)?;
            Ok(regular(vars.clone()))
        }
        Statement::FunCall(call) => {
            check_call_count(call, 0, vars, funs)?;
            Ok(regular(vars.clone()))
        }
        Statement::If { test, body } => {
            check_single(test, vars, funs)?;
            let modes = check_safe_block(body, vars, funs)?;
            Ok(VarsModes {
                vars: vars.clone(),
                modes: modes.with(Mode::Regular),
            })
        }
        Statement::Switch {
            target,
            cases,
            default,
        } => {
            check_single(target, vars, funs)?;
            if cases.is_empty() && default.is_none() {
                return fail(StaticErrorKind::EmptySwitch, format!("`switch {target}`"));
            }
            let mut values = BTreeSet::new();
            let mut modes = ModeSet::empty();
            for case in cases {
                check_safe_literal(&case.value)?;
                let v = literal_value(&case.value, StringAlignment::Integer)
                    .expect("checked literal has a value");
                if !values.insert(v) {
                    return fail(StaticErrorKind::DuplicateCase, format!("`case {}`", case.value));
                }
                modes = modes.union(check_safe_block(&case.body, vars, funs)?);
            }
            modes = match default {
                Some(d) => modes.union(check_safe_block(d, vars, funs)?),
                None => modes.with(Mode::Regular),
            };
            Ok(VarsModes {
                vars: vars.clone(),
                modes,
            })
        }
        Statement::For {
            init,
            test,
            update,
            body,
        } => {
            let loop_funs = add_hoisted(init, funs)?;
            let (loop_vars, init_modes) = check_statements(&init.statements, vars, &loop_funs)?;
            let allowed = ModeSet::of(&[Mode::Regular, Mode::Leave]);
            if !init_modes.is_subset(allowed) {
                return fail(
                    StaticErrorKind::ModeViolation,
                    format!("loop initialization may terminate with {init_modes}"),
                );
            }
            check_single(test, &loop_vars, &loop_funs)?;
            let update_modes = check_safe_block(update, &loop_vars, &loop_funs)?;
            if !update_modes.is_subset(allowed) {
                return fail(
                    StaticErrorKind::ModeViolation,
                    format!("loop update may terminate with {update_modes}"),
                );
            }
            let body_modes = check_safe_block(body, &loop_vars, &loop_funs)?;
            let leaves = init_modes.union(update_modes).union(body_modes).contains(Mode::Leave);
            let modes = if leaves {
                ModeSet::of(&[Mode::Regular, Mode::Leave])
            } else {
                ModeSet::regular()
            };
            Ok(VarsModes {
                vars: vars.clone(),
                modes,
            })
        }
        Statement::Break => Ok(VarsModes {
            vars: vars.clone(),
            modes: ModeSet::of(&[Mode::Break]),
        }),
        Statement::Continue => Ok(VarsModes {
            vars: vars.clone(),
            modes: ModeSet::of(&[Mode::Continue]),
        }),
        Statement::Leave => Ok(VarsModes {
            vars: vars.clone(),
            modes: ModeSet::of(&[Mode::Leave]),
        }),
        Statement::FunDef(def) => {
            check_safe_fundef(def, funs)?;
            Ok(regular(vars.clone()))
        }
    }
}

/// Checks a function body in a fresh variable scope made of its inputs and outputs.
pub fn check_safe_fundef(def: &FunDef, funs: &FunTable) -> Result<()> {
    let params = declare_fresh(def.inputs.iter().chain(&def.outputs), &VarTable::new())?;
    let modes = check_safe_block(&def.body, &params, funs)?;
    if !modes.is_subset(ModeSet::of(&[Mode::Regular, Mode::Leave])) {
        return fail(
            StaticErrorKind::ModeViolation,
            format!("body of `{}` may terminate with {modes}", def.name),
        );
    }
    Ok(())
}

/// Checks a statement sequence as the body of a block whose functions are
/// already in `funs`, returning the variables accessible after it.
pub fn check_safe_statements(stmts: &[Statement], vars: &VarTable, funs: &FunTable) -> Result<VarsModes> {
    check_statements(stmts, vars, funs).map(|(vars, modes)| VarsModes { vars, modes })
}

/// Threads `vars` through a statement sequence. Statements after one that
/// cannot terminate regularly are still checked.
fn check_statements(stmts: &[Statement], vars: &VarTable, funs: &FunTable) -> Result<(VarTable, ModeSet)> {
    let mut vars = vars.clone();
    let mut modes = ModeSet::empty();
    let mut all_regular = true;
    for stmt in stmts {
        let vm = check_safe_statement(stmt, &vars, funs)?;
        vars = vm.vars;
        all_regular &= vm.modes.contains(Mode::Regular);
        modes = modes.union(vm.modes.without(Mode::Regular));
    }
    if all_regular {
        modes = modes.with(Mode::Regular);
    }
    Ok((vars, modes))
}

/// Checks a block and returns its possible termination modes (never empty).
pub fn check_safe_block(block: &Block, vars: &VarTable, funs: &FunTable) -> Result<ModeSet> {
    let funs = add_hoisted(block, funs)?;
    check_statements(&block.statements, vars, &funs).map(|(_, modes)| modes)
}

/// Checks a whole program: no accessible variables, the given built-in
/// functions, and regular termination only.
pub fn check_safe_top(block: &Block, builtins: &FunTable) -> Result<()> {
    check_safe_top_with(block, &VarTable::new(), builtins)
}

/// Like [`check_safe_top`], for a program that starts with the variables
/// `initial` already accessible.
pub fn check_safe_top_with(block: &Block, initial: &VarTable, builtins: &FunTable) -> Result<()> {
    let modes = check_safe_block(block, initial, builtins)?;
    if modes != ModeSet::regular() {
        return fail(
            StaticErrorKind::ModeViolation,
            format!("top-level block may terminate with {modes}"),
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::ident;
    use crate::dynamics::Dialect;
    use crate::syntax::parse_program;

    const SCOPING: &str = include_str!("../tests/fixtures/yul/scoping.yul");

    fn vars(names: &[&str]) -> VarTable {
        names.iter().map(|n| ident(n)).collect()
    }

    fn stmt(text: &str) -> Statement {
        let mut block = parse_program(&format!("{{ {text} }}")).unwrap();
        block.statements.remove(0)
    }

    fn expr(text: &str) -> Expression {
        let Statement::VariableSingle { init: Some(e), .. } = stmt(&format!("let tmp := {text}")) else {
            unreachable!()
        };
        e
    }

    fn kind<T: fmt::Debug>(r: Result<T>) -> StaticErrorKind {
        r.unwrap_err().kind
    }

    #[test]
    fn literal_bounds() {
        assert!(check_safe_literal(&Literal::dec("64738")).is_ok());
        assert_eq!(kind(check_safe_literal(&Literal::string(&"a".repeat(33)))), StaticErrorKind::StringTooLong);
        assert!(check_safe_literal(&Literal::string(&"a".repeat(32))).is_ok());
        let two_256 = "115792089237316195423570985008687907853269984665640564039457584007913129639936";
        assert_eq!(kind(check_safe_literal(&Literal::dec(two_256))), StaticErrorKind::LiteralTooLarge);
        assert!(check_safe_literal(&Literal::dec(MAX_DECIMAL)).is_ok());
        assert!(check_safe_literal(&Literal::dec(format!("000{MAX_DECIMAL}"))).is_ok());
        assert_eq!(kind(check_safe_literal(&Literal::HexString("00".repeat(33)))), StaticErrorKind::StringTooLong);
    }

    #[test]
    fn expression_counts() {
        let funs: FunTable = [(ident("f"), FunType::new(1, 2))].into();
        assert_eq!(check_safe_expression(&expr("x"), &vars(&["x"]), &funs), Ok(1));
        assert_eq!(check_safe_expression(&expr("f(x)"), &vars(&["x"]), &funs), Ok(2));
        assert_eq!(
            kind(check_safe_expression(&expr("f(x, y)"), &vars(&["x", "y"]), &funs)),
            StaticErrorKind::ArityMismatch
        );
        assert_eq!(kind(check_safe_expression(&expr("f(f(x))"), &vars(&["x"]), &funs)), StaticErrorKind::NonSingleValue);
        assert_eq!(kind(check_safe_expression(&expr("y"), &vars(&["x"]), &funs)), StaticErrorKind::UnknownVar);
        assert_eq!(kind(check_safe_expression(&expr("a.b"), &vars(&["a"]), &funs)), StaticErrorKind::BadPath);
        assert_eq!(kind(check_safe_expression(&expr("g()"), &vars(&[]), &funs)), StaticErrorKind::UnknownFun);
    }

    #[test]
    fn declaration_extends_vars() {
        let vm = check_safe_statement(&stmt("let y := x"), &vars(&["x"]), &FunTable::new()).unwrap();
        assert_eq!(vm.vars, vars(&["x", "y"]));
        assert_eq!(vm.modes, ModeSet::regular());
        assert_eq!(
            kind(check_safe_statement(&stmt("let x"), &vars(&["x"]), &FunTable::new())),
            StaticErrorKind::DuplicateVar
        );
        assert_eq!(
            kind(check_safe_statement(&stmt("let a, a"), &vars(&[]), &FunTable::new())),
            StaticErrorKind::DuplicateVar
        );
    }

    #[test]
    fn control_transfer_modes() {
        let none = FunTable::new();
        let modes = |s: &str| check_safe_statement(&stmt(s), &VarTable::new(), &none).unwrap().modes;
        assert_eq!(modes("break"), ModeSet::of(&[Mode::Break]));
        assert_eq!(modes("continue"), ModeSet::of(&[Mode::Continue]));
        assert_eq!(modes("leave"), ModeSet::of(&[Mode::Leave]));
        assert_eq!(modes("if 1 { break }"), ModeSet::of(&[Mode::Regular, Mode::Break]));
        assert_eq!(modes("switch 1 case 0 { leave } default { break }"), ModeSet::of(&[Mode::Break, Mode::Leave]));
        assert_eq!(modes("switch 1 case 0 { leave }"), ModeSet::of(&[Mode::Regular, Mode::Leave]));
        assert_eq!(modes("for { } 1 { } { break continue leave }"), ModeSet::of(&[Mode::Regular, Mode::Leave]));
        assert_eq!(modes("for { } 1 { } { break }"), ModeSet::regular());
    }

    #[test]
    fn function_bodies_must_not_break() {
        let err = check_safe_statement(&stmt("function f() { break }"), &VarTable::new(), &FunTable::new());
        assert_eq!(kind(err), StaticErrorKind::ModeViolation);
        let ok = check_safe_statement(&stmt("function f(a) -> b { b := a leave }"), &vars(&["q"]), &FunTable::new());
        assert_eq!(ok.unwrap().vars, vars(&["q"]));
        // Caller variables are not accessible in the body.
        let hidden = check_safe_statement(&stmt("function f() { q := 1 }"), &vars(&["q"]), &FunTable::new());
        assert_eq!(kind(hidden), StaticErrorKind::UnknownVar);
        assert_eq!(
            kind(check_safe_statement(&stmt("function f(a) -> a { }"), &VarTable::new(), &FunTable::new())),
            StaticErrorKind::DuplicateVar
        );
    }

    #[test]
    fn block_modes() {
        let block = parse_program("{ let x := 1 break let y := 2 }").unwrap();
        assert_eq!(check_safe_block(&block, &VarTable::new(), &FunTable::new()), Ok(ModeSet::of(&[Mode::Break])));
        assert_eq!(check_safe_block(&Block::default(), &VarTable::new(), &FunTable::new()), Ok(ModeSet::regular()));
        let dead_leave = parse_program("{ break leave }").unwrap();
        assert_eq!(
            check_safe_block(&dead_leave, &VarTable::new(), &FunTable::new()),
            Ok(ModeSet::of(&[Mode::Break, Mode::Leave]))
        );
        let scoping = parse_program(SCOPING).unwrap();
        assert_eq!(check_safe_block(&scoping, &VarTable::new(), &FunTable::new()), Ok(ModeSet::regular()));
    }

    #[test]
    fn top_level() {
        let evm = Dialect::evm_pure().fun_table();
        assert_eq!(kind(check_safe_top(&parse_program("{ leave }").unwrap(), &evm)), StaticErrorKind::ModeViolation);
        assert_eq!(
            kind(check_safe_top(&parse_program("{ let x := add(x, 1) }").unwrap(), &evm)),
            StaticErrorKind::UnknownVar
        );
        assert!(check_safe_top(&parse_program(SCOPING).unwrap(), &evm).is_ok());
        assert_eq!(
            kind(check_safe_top(&parse_program("{ function add(a, b) -> c { } }").unwrap(), &evm)),
            StaticErrorKind::DuplicateFun
        );
    }

    #[test]
    fn function_redefinition_in_nested_body() {
        // `g` is visible inside `f`, so it cannot be defined there.
        let program = parse_program("{ function f() { function g() { } } function g() { } }").unwrap();
        assert_eq!(kind(check_safe_top(&program, &FunTable::new())), StaticErrorKind::DuplicateFun);
        // The two `h`s live in disjoint scopes.
        let program = parse_program("{ function f() { function h() { } } function g() { function h() { } } }").unwrap();
        assert!(check_safe_top(&program, &FunTable::new()).is_ok());
    }

    #[test]
    fn hoisted_functions_are_callable_before_definition() {
        let program = parse_program("{ let a, b := f() function f() -> x, y { } }").unwrap();
        assert!(check_safe_top(&program, &FunTable::new()).is_ok());
        let program = parse_program("{ let a := f() function f() -> x, y { } }").unwrap();
        assert_eq!(kind(check_safe_top(&program, &FunTable::new())), StaticErrorKind::NonSingleValue);
        let program = parse_program("{ f() function f() -> x { } }").unwrap();
        assert_eq!(kind(check_safe_top(&program, &FunTable::new())), StaticErrorKind::ResultCountMismatch);
    }

    #[test]
    fn loop_scoping() {
        let evm = Dialect::evm_pure().fun_table();
        let program = parse_program("{ for { let i := 0 function inc(v) -> w { w := add(v, 1) } } lt(i, 3) { i := inc(i) } { let j := i } }").unwrap();
        assert!(check_safe_top(&program, &evm).is_ok());
        // Loop variables do not escape the loop.
        let program = parse_program("{ for { let i } 0 { } { } i := 1 }").unwrap();
        assert_eq!(kind(check_safe_top(&program, &evm)), StaticErrorKind::UnknownVar);
        let program = parse_program("{ for { break } 0 { } { } }").unwrap();
        assert_eq!(kind(check_safe_top(&program, &evm)), StaticErrorKind::ModeViolation);
        let program = parse_program("{ for { } 0 { continue } { } }").unwrap();
        assert_eq!(kind(check_safe_top(&program, &evm)), StaticErrorKind::ModeViolation);
    }

    #[test]
    fn switch_cases() {
        let none = FunTable::new();
        let dup = stmt("switch 1 case 1 { } case 0x01 { }");
        assert_eq!(kind(check_safe_statement(&dup, &VarTable::new(), &none)), StaticErrorKind::DuplicateCase);
        let dup_str = stmt("switch 1 case \"a\" { } case 97 { }");
        assert_eq!(kind(check_safe_statement(&dup_str, &VarTable::new(), &none)), StaticErrorKind::DuplicateCase);
        let empty = Statement::Switch {
            target: Expression::Literal(Literal::True),
            cases: vec![],
            default: None,
        };
        assert_eq!(kind(check_safe_statement(&empty, &VarTable::new(), &none)), StaticErrorKind::EmptySwitch);
    }

    #[test]
    fn multi_assignment() {
        let funs: FunTable = [(ident("f"), FunType::new(0, 2))].into();
        let ab = vars(&["a", "b"]);
        assert!(check_safe_statement(&stmt("a, b := f()"), &ab, &funs).is_ok());
        assert_eq!(kind(check_safe_statement(&stmt("a, a := f()"), &ab, &funs)), StaticErrorKind::DuplicateVar);
        assert_eq!(
            kind(check_safe_statement(&stmt("a, b, c := f()"), &vars(&["a", "b", "c"]), &funs)),
            StaticErrorKind::ResultCountMismatch
        );
    }

    #[test]
    fn fun_tables() {
        let scoping = parse_program(SCOPING).unwrap();
        let table = fun_table_of(&scoping).unwrap();
        assert_eq!(table, [(ident("f"), FunType::new(0, 0)), (ident("g"), FunType::new(0, 0))].into());
        assert_eq!(fun_table_of(&Block::default()), Ok(FunTable::new()));
        let dup = parse_program("{ function f() {} function f() {} }").unwrap();
        assert_eq!(kind(fun_table_of(&dup)), StaticErrorKind::DuplicateFun);
    }

    #[test]
    fn functions_and_variables_have_separate_namespaces() {
        let program = parse_program("{ function f() { } let f := 1 }").unwrap();
        assert!(check_safe_top(&program, &FunTable::new()).is_ok());
    }
}
