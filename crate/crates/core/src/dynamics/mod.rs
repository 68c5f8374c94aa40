//! Defensive big-step interpreter.
//!
//! Every `exec_*` entry point takes a fuel count. Fuel 0 is a limit error;
//! otherwise the construct runs and each nested `exec_*` call receives one
//! less. Loop iterations count as nested calls, so the fuel bounds the depth
//! of the evaluation tree, not the number of steps. The interpreter re-checks
//! every safety condition at run time and reports a [`EvalError::Safety`]
//! instead of assuming the program passed the static checker.

mod dialect;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ast::{hoisted_fundefs, Block, Expression, FunCall, FunDef, Identifier, Path, Statement};
use crate::statics::{FunTable, FunType, Mode, VarTable};
use crate::value::{literal_value, LiteralError, Value};

pub use dialect::{Builtin, Dialect};

/// Local variables of the running function.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CState {
    pub local: BTreeMap<Identifier, Value>,
}

impl CState {
    pub fn new(local: BTreeMap<Identifier, Value>) -> Self {
        CState { local }
    }

    /// Keeps only the variables in `domain`, with their current values.
    fn restrict(&mut self, domain: &BTreeSet<Identifier>) {
        self.local.retain(|k, _| domain.contains(k));
    }

    fn domain(&self) -> BTreeSet<Identifier> {
        self.local.keys().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunInfo {
    pub inputs: Vec<Identifier>,
    pub outputs: Vec<Identifier>,
    pub body: Arc<Block>,
}

impl FunInfo {
    pub fn of(def: &FunDef) -> Self {
        FunInfo {
            inputs: def.inputs.clone(),
            outputs: def.outputs.clone(),
            body: Arc::clone(&def.body),
        }
    }

    pub fn ty(&self) -> FunType {
        FunType::new(self.inputs.len(), self.outputs.len())
    }
}

pub type Scope = BTreeMap<Identifier, FunInfo>;

/// Stack of function scopes, innermost last.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FunEnv {
    pub scopes: Vec<Arc<Scope>>,
}

impl FunEnv {
    pub fn new(scopes: Vec<Scope>) -> Self {
        FunEnv {
            scopes: scopes.into_iter().map(Arc::new).collect(),
        }
    }

    /// Innermost scope defining `name`, with its index.
    pub fn find(&self, name: &Identifier) -> Option<(usize, &FunInfo)> {
        self.scopes
            .iter()
            .enumerate()
            .rev()
            .find_map(|(i, scope)| scope.get(name).map(|info| (i, info)))
    }

    /// The environment a function defined in scope `index` runs in: every
    /// scope above it is dropped.
    pub fn trimmed(&self, index: usize) -> FunEnv {
        FunEnv {
            scopes: self.scopes[..=index].to_vec(),
        }
    }

    fn pushed(&self, scope: Scope) -> FunEnv {
        let mut scopes = self.scopes.clone();
        scopes.push(Arc::new(scope));
        FunEnv { scopes }
    }
}

/// Result of evaluating an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EOutcome {
    pub cstate: CState,
    pub values: Vec<Value>,
}

/// Result of executing a statement or block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SOutcome {
    pub cstate: CState,
    pub mode: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SafetyKind {
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
    BreakOutsideLoop,
    ContinueOutsideLoop,
    LeaveOutsideFunction,
    FunctionModeError,
}

impl SafetyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SafetyKind::UnknownVar => "unknown-var",
            SafetyKind::UnknownFun => "unknown-fun",
            SafetyKind::DuplicateVar => "duplicate-var",
            SafetyKind::DuplicateFun => "duplicate-fun",
            SafetyKind::ArityMismatch => "arity-mismatch",
            SafetyKind::ResultCountMismatch => "result-count-mismatch",
            SafetyKind::LiteralTooLarge => "literal-too-large",
            SafetyKind::StringTooLong => "string-too-long",
            SafetyKind::BadPath => "bad-path",
            SafetyKind::ModeViolation => "mode-violation",
            SafetyKind::DuplicateCase => "duplicate-case",
            SafetyKind::NonSingleValue => "non-single-value",
            SafetyKind::BreakOutsideLoop => "break-outside-loop",
            SafetyKind::ContinueOutsideLoop => "continue-outside-loop",
            SafetyKind::LeaveOutsideFunction => "leave-outside-function",
            SafetyKind::FunctionModeError => "function-mode-error",
        }
    }
}

impl fmt::Display for SafetyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted")]
    Limit,
    #[error("{kind}: {context}")]
    Safety { kind: SafetyKind, context: String },
}

impl EvalError {
    pub fn is_limit(&self) -> bool {
        matches!(self, EvalError::Limit)
    }
}

type Result<T> = std::result::Result<T, EvalError>;

fn unsafe_op<T>(kind: SafetyKind, context: impl Into<String>) -> Result<T> {
    Err(EvalError::Safety {
        kind,
        context: context.into(),
    })
}

fn spend(limit: u64) -> Result<u64> {
    limit.checked_sub(1).ok_or(EvalError::Limit)
}

/// Hooks called as execution proceeds, for instrumented runs.
pub trait Observer {
    /// When false the interpreter skips the bookkeeping needed for the hooks.
    const ENABLED: bool = true;

    /// Before a block's own functions are added to `funenv`.
    fn enter_block(&mut self, _block: &Block, _cstate: &CState, _funenv: &FunEnv) {}

    fn block_done(&mut self, _block: &Block, _before: &CState, _funenv: &FunEnv, _result: &Result<SOutcome>) {}

    fn statement_done(&mut self, _stmt: &Statement, _before: &CState, _funenv: &FunEnv, _result: &Result<SOutcome>) {}

    fn expression_done(&mut self, _expr: &Expression, _before: &CState, _funenv: &FunEnv, _result: &Result<EOutcome>) {}
}

/// Observer that does nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoObserver;

impl Observer for NoObserver {
    const ENABLED: bool = false;
}

/// Deliberate interpreter defects, used to check that the property suites
/// notice a broken interpreter.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Output variables are not bound to 0 on function entry.
    SkipOutputZeroing,
}

pub struct Interpreter<'d, O = NoObserver> {
    pub dialect: &'d Dialect,
    pub observer: O,
    #[doc(hidden)]
    pub fault: Option<Fault>,
}

impl<'d> Interpreter<'d> {
    pub fn new(dialect: &'d Dialect) -> Self {
        Interpreter {
            dialect,
            observer: NoObserver,
            fault: None,
        }
    }
}

impl<'d, O: Observer> Interpreter<'d, O> {
    pub fn with_observer(dialect: &'d Dialect, observer: O) -> Self {
        Interpreter {
            dialect,
            observer,
            fault: None,
        }
    }

    pub fn exec_expression(&mut self, expr: &Expression, cstate: CState, funenv: &FunEnv, limit: u64) -> Result<EOutcome> {
        let before = O::ENABLED.then(|| cstate.clone());
        let result = self.expression(expr, cstate, funenv, limit);
        if let Some(before) = before {
            self.observer.expression_done(expr, &before, funenv, &result);
        }
        result
    }

    fn expression(&mut self, expr: &Expression, cstate: CState, funenv: &FunEnv, limit: u64) -> Result<EOutcome> {
        let limit = spend(limit)?;
        match expr {
            Expression::Path(path) => {
                let value = read_var(&cstate, path)?;
                Ok(EOutcome {
                    cstate,
                    values: vec![value],
                })
            }
            Expression::Literal(lit) => match literal_value(lit, self.dialect.string_alignment) {
                Ok(value) => Ok(EOutcome {
                    cstate,
                    values: vec![value],
                }),
                Err(LiteralError::TooLarge) => unsafe_op(SafetyKind::LiteralTooLarge, lit.to_string()),
                Err(LiteralError::StringTooLong) => unsafe_op(SafetyKind::StringTooLong, lit.to_string()),
            },
            Expression::FunCall(call) => self.exec_funcall(call, cstate, funenv, limit),
        }
    }

    /// Evaluates arguments right to left, then calls a built-in or a user
    /// function. A user function runs in the environment trimmed to the scope
    /// that defines it.
    pub fn exec_funcall(&mut self, call: &FunCall, cstate: CState, funenv: &FunEnv, limit: u64) -> Result<EOutcome> {
        let limit = spend(limit)?;
        let mut cstate = cstate;
        let mut args = Vec::with_capacity(call.args.len());
        for arg in call.args.iter().rev() {
            let outcome = self.exec_expression(arg, cstate, funenv, limit)?;
            if outcome.values.len() != 1 {
                return unsafe_op(
                    SafetyKind::NonSingleValue,
                    format!("argument `{arg}` of `{}` yields {} values", call.name, outcome.values.len()),
                );
            }
            cstate = outcome.cstate;
            args.push(outcome.values[0]);
        }
        args.reverse();

        if let Some(builtin) = self.dialect.builtins.get(&call.name) {
            if args.len() != builtin.ty.inputs {
                return unsafe_op(SafetyKind::ArityMismatch, format!("`{call}`"));
            }
            let values = (builtin.eval)(&args);
            return Ok(EOutcome { cstate, values });
        }
        let Some((index, info)) = funenv.find(&call.name) else {
            return unsafe_op(SafetyKind::UnknownFun, format!("`{}`", call.name));
        };
        if args.len() != info.inputs.len() {
            return unsafe_op(SafetyKind::ArityMismatch, format!("`{call}`"));
        }
        let values = self.exec_function(info, args, &funenv.trimmed(index), limit)?;
        Ok(EOutcome { cstate, values })
    }

    /// Runs a function body in a fresh local state holding the inputs and the
    /// outputs (initially 0); returns the final output values.
    pub fn exec_function(&mut self, info: &FunInfo, args: Vec<Value>, funenv: &FunEnv, limit: u64) -> Result<Vec<Value>> {
        let limit = spend(limit)?;
        if args.len() != info.inputs.len() {
            return unsafe_op(
                SafetyKind::ArityMismatch,
                format!("{} arguments for {} inputs", args.len(), info.inputs.len()),
            );
        }
        let mut local = BTreeMap::new();
        for (name, value) in info.inputs.iter().zip(args) {
            if local.insert(name.clone(), value).is_some() {
                return unsafe_op(SafetyKind::DuplicateVar, format!("parameter `{name}`"));
            }
        }
        for name in &info.outputs {
            if local.contains_key(name) {
                return unsafe_op(SafetyKind::DuplicateVar, format!("result `{name}`"));
            }
            if self.fault != Some(Fault::SkipOutputZeroing) {
                local.insert(name.clone(), Value::zero());
            }
        }
        let outcome = self.exec_block(&info.body, CState::new(local), funenv, limit)?;
        match outcome.mode {
            Mode::Regular | Mode::Leave => info
                .outputs
                .iter()
                .map(|name| read_var(&outcome.cstate, &Path::single(name.clone())))
                .collect(),
            mode => unsafe_op(SafetyKind::FunctionModeError, format!("function body ended with {mode}")),
        }
    }

    pub fn exec_statement(&mut self, stmt: &Statement, cstate: CState, funenv: &FunEnv, limit: u64) -> Result<SOutcome> {
        let before = O::ENABLED.then(|| cstate.clone());
        let result = self.statement(stmt, cstate, funenv, limit);
        if let Some(before) = before {
            self.observer.statement_done(stmt, &before, funenv, &result);
        }
        result
    }

    fn statement(&mut self, stmt: &Statement, cstate: CState, funenv: &FunEnv, limit: u64) -> Result<SOutcome> {
        let limit = spend(limit)?;
        let regular = |cstate| Ok(SOutcome { cstate, mode: Mode::Regular });
        match stmt {
            Statement::Block(block) => self.exec_block(block, cstate, funenv, limit),
            Statement::VariableSingle { name, init } => {
                if cstate.local.contains_key(name) {
                    return unsafe_op(SafetyKind::DuplicateVar, format!("`{name}`"));
                }
                let (mut cstate, value) = match init {
                    Some(expr) => {
                        let outcome = self.exec_expression(expr, cstate, funenv, limit)?;
                        let [value] = outcome.values[..] else {
                            return unsafe_op(
                                SafetyKind::NonSingleValue,
                                format!("`{expr}` yields {} values", outcome.values.len()),
                            );
                        };
                        (outcome.cstate, value)
                    }
                    None => (cstate, Value::zero()),
                };
                cstate.local.insert(name.clone(), value);
                regular(cstate)
            }
            Statement::VariableMulti { names, init } => {
                let mut seen = BTreeSet::new();
                for name in names {
                    if cstate.local.contains_key(name) || !seen.insert(name) {
                        return unsafe_op(SafetyKind::DuplicateVar, format!("`{name}`"));
                    }
                }
                let (mut cstate, values) = match init {
                    Some(call) => {
                        let outcome = self.exec_funcall(call, cstate, funenv, limit)?;
                        (outcome.cstate, outcome.values)
                    }
                    None => (cstate, vec![Value::zero(); names.len()]),
                };
                if values.len() != names.len() {
                    return unsafe_op(
                        SafetyKind::ResultCountMismatch,
                        format!("{} values for {} variables", values.len(), names.len()),
                    );
                }
                cstate.local.extend(names.iter().cloned().zip(values));
                regular(cstate)
            }
            Statement::AssignSingle { target, value } => {
                let name = assignable(&cstate, target)?;
                let outcome = self.exec_expression(value, cstate, funenv, limit)?;
                let [v] = outcome.values[..] else {
                    return unsafe_op(
                        SafetyKind::NonSingleValue,
                        format!("`{value}` yields {} values", outcome.values.len()),
                    );
                };
                let mut cstate = outcome.cstate;
                cstate.local.insert(name, v);
                regular(cstate)
            }
            Statement::AssignMulti { targets, value } => {
                let mut names = Vec::with_capacity(targets.len());
                for target in targets {
                    let name = assignable(&cstate, target)?;
                    if names.contains(&name) {
                        return unsafe_op(SafetyKind::DuplicateVar, format!("`{name}` assigned twice"));
                    }
                    names.push(name);
                }
                let outcome = self.exec_funcall(value, cstate, funenv, limit)?;
                if outcome.values.len() != names.len() {
                    return unsafe_op(
                        SafetyKind::ResultCountMismatch,
                        format!("{} values for {} targets", outcome.values.len(), names.len()),
                    );
                }
                let mut cstate = outcome.cstate;
                cstate.local.extend(names.into_iter().zip(outcome.values));
                regular(cstate)
            }
            Statement::FunCall(call) => {
                let outcome = self.exec_funcall(call, cstate, funenv, limit)?;
                if !outcome.values.is_empty() {
                    return unsafe_op(
                        SafetyKind::ResultCountMismatch,
                        format!("`{call}` used as a statement yields {} values", outcome.values.len()),
                    );
                }
                regular(outcome.cstate)
            }
            Statement::If { test, body } => {
                let (cstate, value) = self.eval_single(test, cstate, funenv, limit)?;
                if value.is_zero() {
                    regular(cstate)
                } else {
                    self.exec_block(body, cstate, funenv, limit)
                }
            }
            Statement::Switch {
                target,
                cases,
                default,
            } => {
                let (cstate, value) = self.eval_single(target, cstate, funenv, limit)?;
                for case in cases {
                    let case_value = match literal_value(&case.value, self.dialect.string_alignment) {
                        Ok(v) => v,
                        Err(LiteralError::TooLarge) => return unsafe_op(SafetyKind::LiteralTooLarge, case.value.to_string()),
                        Err(LiteralError::StringTooLong) => {
                            return unsafe_op(SafetyKind::StringTooLong, case.value.to_string())
                        }
                    };
                    if case_value == value {
                        return self.exec_block(&case.body, cstate, funenv, limit);
                    }
                }
                match default {
                    Some(block) => self.exec_block(block, cstate, funenv, limit),
                    None => regular(cstate),
                }
            }
            Statement::For {
                init,
                test,
                update,
                body,
            } => self.exec_for(init, test, update, body, cstate, funenv, limit),
            Statement::Break => Ok(SOutcome { cstate, mode: Mode::Break }),
            Statement::Continue => Ok(SOutcome { cstate, mode: Mode::Continue }),
            Statement::Leave => Ok(SOutcome { cstate, mode: Mode::Leave }),
            Statement::FunDef(_) => regular(cstate),
        }
    }

    fn eval_single(&mut self, expr: &Expression, cstate: CState, funenv: &FunEnv, limit: u64) -> Result<(CState, Value)> {
        let outcome = self.exec_expression(expr, cstate, funenv, limit)?;
        match outcome.values[..] {
            [v] => Ok((outcome.cstate, v)),
            _ => unsafe_op(
                SafetyKind::NonSingleValue,
                format!("`{expr}` yields {} values", outcome.values.len()),
            ),
        }
    }

    /// `limit` has already been charged for the loop statement itself.
    #[allow(clippy::too_many_arguments)]
    fn exec_for(
        &mut self,
        init: &Block,
        test: &Expression,
        update: &Block,
        body: &Block,
        cstate: CState,
        funenv: &FunEnv,
        limit: u64,
    ) -> Result<SOutcome> {
        let domain = cstate.domain();
        let funenv = funenv.pushed(self.scope_of(init, funenv)?);
        let mut cstate = cstate;
        let finish = |mut cstate: CState, mode| {
            cstate.restrict(&domain);
            Ok(SOutcome { cstate, mode })
        };

        for stmt in &init.statements {
            let outcome = self.exec_statement(stmt, cstate, &funenv, limit)?;
            cstate = outcome.cstate;
            match outcome.mode {
                Mode::Regular => {}
                Mode::Leave => return finish(cstate, Mode::Leave),
                Mode::Break => return unsafe_op(SafetyKind::BreakOutsideLoop, "`break` in loop initialization"),
                Mode::Continue => {
                    return unsafe_op(SafetyKind::ContinueOutsideLoop, "`continue` in loop initialization")
                }
            }
        }

        let mut fuel = limit;
        loop {
            fuel = spend(fuel)?;
            let (after_test, value) = self.eval_single(test, cstate, &funenv, fuel)?;
            cstate = after_test;
            if value.is_zero() {
                return finish(cstate, Mode::Regular);
            }
            let outcome = self.exec_block(body, cstate, &funenv, fuel)?;
            cstate = outcome.cstate;
            match outcome.mode {
                Mode::Break => return finish(cstate, Mode::Regular),
                Mode::Leave => return finish(cstate, Mode::Leave),
                Mode::Regular | Mode::Continue => {}
            }
            let outcome = self.exec_block(update, cstate, &funenv, fuel)?;
            cstate = outcome.cstate;
            match outcome.mode {
                Mode::Regular => {}
                Mode::Leave => return finish(cstate, Mode::Leave),
                Mode::Break => return unsafe_op(SafetyKind::BreakOutsideLoop, "`break` in loop update"),
                Mode::Continue => return unsafe_op(SafetyKind::ContinueOutsideLoop, "`continue` in loop update"),
            }
        }
    }

    /// The scope of functions defined directly in `block`. Each name must be
    /// new with respect to every visible function, built-ins included.
    fn scope_of(&self, block: &Block, funenv: &FunEnv) -> Result<Scope> {
        let mut scope = Scope::new();
        for def in hoisted_fundefs(block) {
            if scope.contains_key(&def.name)
                || funenv.find(&def.name).is_some()
                || self.dialect.builtins.contains_key(&def.name)
            {
                return unsafe_op(SafetyKind::DuplicateFun, format!("`{}`", def.name));
            }
            scope.insert(def.name.clone(), FunInfo::of(def));
        }
        Ok(scope)
    }

    /// Runs the statements of `block` with its functions in a new scope. On
    /// exit the scope is dropped and variables declared in the block are
    /// removed; surviving variables keep their updated values.
    pub fn exec_block(&mut self, block: &Block, cstate: CState, funenv: &FunEnv, limit: u64) -> Result<SOutcome> {
        self.observed_block(block, cstate, funenv, limit, true)
    }

    fn observed_block(&mut self, block: &Block, cstate: CState, funenv: &FunEnv, limit: u64, restrict: bool) -> Result<SOutcome> {
        let before = if O::ENABLED {
            self.observer.enter_block(block, &cstate, funenv);
            Some(cstate.clone())
        } else {
            None
        };
        let result = self.block(block, cstate, funenv, limit, restrict);
        if let Some(before) = before {
            self.observer.block_done(block, &before, funenv, &result);
        }
        result
    }

    fn block(&mut self, block: &Block, cstate: CState, funenv: &FunEnv, limit: u64, restrict: bool) -> Result<SOutcome> {
        let limit = spend(limit)?;
        let funenv = funenv.pushed(self.scope_of(block, funenv)?);
        let domain = cstate.domain();
        let mut cstate = cstate;
        let mut mode = Mode::Regular;
        for stmt in &block.statements {
            let outcome = self.exec_statement(stmt, cstate, &funenv, limit)?;
            cstate = outcome.cstate;
            if outcome.mode != Mode::Regular {
                mode = outcome.mode;
                break;
            }
        }
        if restrict {
            cstate.restrict(&domain);
        }
        Ok(SOutcome { cstate, mode })
    }

    /// Runs a whole program from `initial` locals with no user functions in
    /// scope. Like [`Self::exec_block`], except that the variables declared
    /// by the program's outermost block are kept: they are the program's
    /// result. Anything but regular termination is a safety error.
    pub fn exec_top(&mut self, block: &Block, initial: CState, limit: u64) -> Result<SOutcome> {
        let outcome = self.observed_block(block, initial, &FunEnv::default(), limit, false)?;
        match outcome.mode {
            Mode::Regular => Ok(outcome),
            Mode::Break => unsafe_op(SafetyKind::BreakOutsideLoop, "top-level block ended with break"),
            Mode::Continue => unsafe_op(SafetyKind::ContinueOutsideLoop, "top-level block ended with continue"),
            Mode::Leave => unsafe_op(SafetyKind::LeaveOutsideFunction, "top-level block ended with leave"),
        }
    }
}

fn read_var(cstate: &CState, path: &Path) -> Result<Value> {
    let Some(name) = path.as_single() else {
        return unsafe_op(SafetyKind::BadPath, format!("`{path}`"));
    };
    match cstate.local.get(name) {
        Some(v) => Ok(*v),
        None => unsafe_op(SafetyKind::UnknownVar, format!("`{name}`")),
    }
}

fn assignable(cstate: &CState, path: &Path) -> Result<Identifier> {
    read_var(cstate, path)?;
    Ok(path.as_single().expect("read_var accepted a single identifier").clone())
}

pub fn exec_expression(expr: &Expression, cstate: CState, funenv: &FunEnv, dialect: &Dialect, limit: u64) -> Result<EOutcome> {
    Interpreter::new(dialect).exec_expression(expr, cstate, funenv, limit)
}

pub fn exec_funcall(call: &FunCall, cstate: CState, funenv: &FunEnv, dialect: &Dialect, limit: u64) -> Result<EOutcome> {
    Interpreter::new(dialect).exec_funcall(call, cstate, funenv, limit)
}

pub fn exec_function(info: &FunInfo, args: Vec<Value>, funenv: &FunEnv, dialect: &Dialect, limit: u64) -> Result<Vec<Value>> {
    Interpreter::new(dialect).exec_function(info, args, funenv, limit)
}

pub fn exec_statement(stmt: &Statement, cstate: CState, funenv: &FunEnv, dialect: &Dialect, limit: u64) -> Result<SOutcome> {
    Interpreter::new(dialect).exec_statement(stmt, cstate, funenv, limit)
}

pub fn exec_block(block: &Block, cstate: CState, funenv: &FunEnv, dialect: &Dialect, limit: u64) -> Result<SOutcome> {
    Interpreter::new(dialect).exec_block(block, cstate, funenv, limit)
}

pub fn exec_top(block: &Block, initial: CState, dialect: &Dialect, limit: u64) -> Result<SOutcome> {
    Interpreter::new(dialect).exec_top(block, initial, limit)
}

/// The variable table a computation state stands for: its domain.
pub fn cstate_to_vars(cstate: &CState) -> VarTable {
    cstate.domain()
}

/// Merges all scopes into one arity table; inner scopes win on clashes.
pub fn funenv_to_funtable(funenv: &FunEnv) -> FunTable {
    let mut table = FunTable::new();
    for scope in &funenv.scopes {
        for (name, info) in scope.iter() {
            table.insert(name.clone(), info.ty());
        }
    }
    table
}

#[cfg(test)]
mod tests;
