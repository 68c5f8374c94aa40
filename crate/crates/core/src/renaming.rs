//! Consistent renaming of variables and functions, and the checks that make
//! up disambiguation: old and new code agree up to a consistent renaming and
//! the new code declares every name at most once.
//!
//! The variable and function relations share one traversal. It carries a
//! renaming per namespace and a flag per namespace saying whether names may
//! change; a namespace that may not change requires equal names instead.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::ast::{Block, Expression, FunCall, FunDef, Identifier, Path, Statement, SwCase};
use crate::dynamics::{CState, EvalError, FunEnv, FunInfo, SOutcome};
use crate::statics::FunTable;

/// An injective list of (old, new) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Renaming {
    pairs: Vec<(Identifier, Identifier)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenameErrorKind {
    ShapeMismatch,
    UnmappedName,
    InjectivityViolation,
    ArityMismatch,
    LiteralMismatch,
    /// The new code declares a name twice.
    NotUnique,
}

impl RenameErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RenameErrorKind::ShapeMismatch => "shape-mismatch",
            RenameErrorKind::UnmappedName => "unmapped-name",
            RenameErrorKind::InjectivityViolation => "injectivity-violation",
            RenameErrorKind::ArityMismatch => "arity-mismatch",
            RenameErrorKind::LiteralMismatch => "literal-mismatch",
            RenameErrorKind::NotUnique => "not-unique",
        }
    }
}

impl fmt::Display for RenameErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}: {context}")]
pub struct RenameError {
    pub kind: RenameErrorKind,
    pub context: String,
}

type Result<T> = std::result::Result<T, RenameError>;

fn fail<T>(kind: RenameErrorKind, context: impl Into<String>) -> Result<T> {
    Err(RenameError {
        kind,
        context: context.into(),
    })
}

impl Renaming {
    pub fn new() -> Self {
        Renaming::default()
    }

    /// Builds a renaming from pairs, rejecting repeated old or new names.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Identifier, Identifier)>) -> Result<Self> {
        let mut ren = Renaming::new();
        for (old, new) in pairs {
            ren = add_var_to_renaming(&ren, old, new)?;
        }
        Ok(ren)
    }

    /// The identity renaming on `names`.
    pub fn identity<'a>(names: impl IntoIterator<Item = &'a Identifier>) -> Self {
        let unique: BTreeSet<&Identifier> = names.into_iter().collect();
        Renaming {
            pairs: unique.into_iter().map(|n| (n.clone(), n.clone())).collect(),
        }
    }

    pub fn pairs(&self) -> &[(Identifier, Identifier)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// New name of `old`, taking the first matching pair.
    pub fn get(&self, old: &Identifier) -> Option<&Identifier> {
        self.pairs.iter().find(|(k, _)| k == old).map(|(_, v)| v)
    }

    pub fn keys(&self) -> BTreeSet<Identifier> {
        self.pairs.iter().map(|(k, _)| k.clone()).collect()
    }

    pub fn values(&self) -> BTreeSet<Identifier> {
        self.pairs.iter().map(|(_, v)| v.clone()).collect()
    }

    fn push(&mut self, old: Identifier, new: Identifier) -> Result<()> {
        if self.pairs.iter().any(|(k, _)| *k == old) {
            return fail(RenameErrorKind::InjectivityViolation, format!("`{old}` is already renamed"));
        }
        if self.pairs.iter().any(|(_, v)| *v == new) {
            return fail(
                RenameErrorKind::InjectivityViolation,
                format!("`{new}` is already the new name of another identifier"),
            );
        }
        self.pairs.push((old, new));
        Ok(())
    }

    fn truncate(&mut self, len: usize) {
        self.pairs.truncate(len);
    }
}

/// Appends `(old, new)`, keeping the renaming injective.
pub fn add_var_to_renaming(ren: &Renaming, old: Identifier, new: Identifier) -> Result<Renaming> {
    let mut ren = ren.clone();
    ren.push(old, new)?;
    Ok(ren)
}

/// Swaps the two sides of every pair.
pub fn invert(ren: &Renaming) -> Renaming {
    Renaming {
        pairs: ren.pairs.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
    }
}

/// Every pair that a check added, in order, including pairs whose scope has
/// since been left.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RenamingLog {
    pub variables: Vec<(Identifier, Identifier)>,
    pub functions: Vec<(Identifier, Identifier)>,
}

struct Walker {
    rename_vars: bool,
    rename_funs: bool,
    vars: Renaming,
    funs: Renaming,
    log: RenamingLog,
}

impl Walker {
    fn new(rename_vars: bool, rename_funs: bool) -> Self {
        Walker {
            rename_vars,
            rename_funs,
            vars: Renaming::new(),
            funs: Renaming::new(),
            log: RenamingLog::default(),
        }
    }

    fn declare_var(&mut self, old: &Identifier, new: &Identifier) -> Result<()> {
        if self.rename_vars {
            self.vars.push(old.clone(), new.clone())?;
            self.log.variables.push((old.clone(), new.clone()));
        } else if old != new {
            return fail(RenameErrorKind::ShapeMismatch, format!("variable `{old}` became `{new}`"));
        }
        Ok(())
    }

    fn declare_fun(&mut self, old: &Identifier, new: &Identifier) -> Result<()> {
        if self.rename_funs {
            self.funs.push(old.clone(), new.clone())?;
            self.log.functions.push((old.clone(), new.clone()));
        } else if old != new {
            return fail(RenameErrorKind::ShapeMismatch, format!("function `{old}` became `{new}`"));
        }
        Ok(())
    }

    fn use_name(renaming: &Renaming, enabled: bool, what: &str, old: &Identifier, new: &Identifier) -> Result<()> {
        if !enabled {
            return if old == new {
                Ok(())
            } else {
                fail(RenameErrorKind::ShapeMismatch, format!("{what} `{old}` became `{new}`"))
            };
        }
        match renaming.get(old) {
            Some(mapped) if mapped == new => Ok(()),
            Some(mapped) => fail(
                RenameErrorKind::ShapeMismatch,
                format!("{what} `{old}` is renamed to `{mapped}`, found `{new}`"),
            ),
            None => fail(RenameErrorKind::UnmappedName, format!("{what} `{old}` is not in scope")),
        }
    }

    fn path(&self, old: &Path, new: &Path) -> Result<()> {
        match (old.as_single(), new.as_single()) {
            (Some(o), Some(n)) => Self::use_name(&self.vars, self.rename_vars, "variable", o, n),
            _ if old == new => Ok(()),
            _ => fail(RenameErrorKind::ShapeMismatch, format!("path `{old}` became `{new}`")),
        }
    }

    fn expression(&self, old: &Expression, new: &Expression) -> Result<()> {
        match (old, new) {
            (Expression::Path(o), Expression::Path(n)) => self.path(o, n),
            (Expression::Literal(o), Expression::Literal(n)) => {
                if o == n {
                    Ok(())
                } else {
                    fail(RenameErrorKind::LiteralMismatch, format!("`{o}` became `{n}`"))
                }
            }
            (Expression::FunCall(o), Expression::FunCall(n)) => self.funcall(o, n),
            _ => fail(RenameErrorKind::ShapeMismatch, format!("expression `{old}` became `{new}`")),
        }
    }

    fn funcall(&self, old: &FunCall, new: &FunCall) -> Result<()> {
        Self::use_name(&self.funs, self.rename_funs, "function", &old.name, &new.name)?;
        if old.args.len() != new.args.len() {
            return fail(RenameErrorKind::ArityMismatch, format!("`{old}` became `{new}`"));
        }
        old.args.iter().zip(&new.args).try_for_each(|(o, n)| self.expression(o, n))
    }

    fn option<T>(&self, old: &Option<T>, new: &Option<T>, check: impl FnOnce(&T, &T) -> Result<()>) -> Result<()> {
        match (old, new) {
            (Some(o), Some(n)) => check(o, n),
            (None, None) => Ok(()),
            _ => fail(RenameErrorKind::ShapeMismatch, "initializer present on one side only"),
        }
    }

    /// Adds the functions defined directly in a statement list, which are in
    /// scope for the whole list.
    fn hoist(&mut self, old: &[Statement], new: &[Statement]) -> Result<()> {
        if old.len() != new.len() {
            return fail(
                RenameErrorKind::ShapeMismatch,
                format!("block of {} statements became {} statements", old.len(), new.len()),
            );
        }
        for (o, n) in old.iter().zip(new) {
            match (o, n) {
                (Statement::FunDef(o), Statement::FunDef(n)) => self.declare_fun(&o.name, &n.name)?,
                (Statement::FunDef(_), _) | (_, Statement::FunDef(_)) => {
                    return fail(RenameErrorKind::ShapeMismatch, format!("`{o}` became `{n}`"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn block(&mut self, old: &Block, new: &Block) -> Result<()> {
        let saved = (self.vars.len(), self.funs.len());
        let result = self.block_contents(old, new);
        self.vars.truncate(saved.0);
        self.funs.truncate(saved.1);
        result
    }

    fn block_contents(&mut self, old: &Block, new: &Block) -> Result<()> {
        self.hoist(&old.statements, &new.statements)?;
        old.statements
            .iter()
            .zip(&new.statements)
            .try_for_each(|(o, n)| self.statement(o, n))
    }

    fn statement(&mut self, old: &Statement, new: &Statement) -> Result<()> {
        use Statement as S;
        match (old, new) {
            (S::Block(o), S::Block(n)) => self.block(o, n),
            (S::VariableSingle { name: on, init: oi }, S::VariableSingle { name: nn, init: ni }) => {
                self.option(oi, ni, |o, n| self.expression(o, n))?;
                self.declare_var(on, nn)
            }
            (S::VariableMulti { names: on, init: oi }, S::VariableMulti { names: nn, init: ni }) => {
                if on.len() != nn.len() {
                    return fail(RenameErrorKind::ShapeMismatch, format!("`{old}` became `{new}`"));
                }
                self.option(oi, ni, |o, n| self.funcall(o, n))?;
                on.iter().zip(nn).try_for_each(|(o, n)| self.declare_var(o, n))
            }
            (S::AssignSingle { target: ot, value: ov }, S::AssignSingle { target: nt, value: nv }) => {
                self.path(ot, nt)?;
                self.expression(ov, nv)
            }
            (S::AssignMulti { targets: ot, value: ov }, S::AssignMulti { targets: nt, value: nv }) => {
                if ot.len() != nt.len() {
                    return fail(RenameErrorKind::ShapeMismatch, format!("`{old}` became `{new}`"));
                }
                ot.iter().zip(nt).try_for_each(|(o, n)| self.path(o, n))?;
                self.funcall(ov, nv)
            }
            (S::FunCall(o), S::FunCall(n)) => self.funcall(o, n),
            (S::If { test: ot, body: ob }, S::If { test: nt, body: nb }) => {
                self.expression(ot, nt)?;
                self.block(ob, nb)
            }
            (
                S::Switch {
                    target: ot,
                    cases: oc,
                    default: od,
                },
                S::Switch {
                    target: nt,
                    cases: nc,
                    default: nd,
                },
            ) => {
                self.expression(ot, nt)?;
                if oc.len() != nc.len() {
                    return fail(RenameErrorKind::ShapeMismatch, "different number of switch cases");
                }
                for (SwCase { value: ov, body: ob }, SwCase { value: nv, body: nb }) in oc.iter().zip(nc) {
                    if ov != nv {
                        return fail(RenameErrorKind::LiteralMismatch, format!("case `{ov}` became case `{nv}`"));
                    }
                    self.block(ob, nb)?;
                }
                match (od, nd) {
                    (Some(o), Some(n)) => self.block(o, n),
                    (None, None) => Ok(()),
                    _ => fail(RenameErrorKind::ShapeMismatch, "default case present on one side only"),
                }
            }
            (
                S::For {
                    init: oi,
                    test: ot,
                    update: ou,
                    body: ob,
                },
                S::For {
                    init: ni,
                    test: nt,
                    update: nu,
                    body: nb,
                },
            ) => {
                // The initialization's declarations scope over the rest of the loop.
                let saved = (self.vars.len(), self.funs.len());
                let result = (|| {
                    self.block_contents(oi, ni)?;
                    self.expression(ot, nt)?;
                    self.block(ou, nu)?;
                    self.block(ob, nb)
                })();
                self.vars.truncate(saved.0);
                self.funs.truncate(saved.1);
                result
            }
            (S::Break, S::Break) | (S::Continue, S::Continue) | (S::Leave, S::Leave) => Ok(()),
            (S::FunDef(o), S::FunDef(n)) => {
                Self::use_name(&self.funs, self.rename_funs, "function", &o.name, &n.name)?;
                self.function(&o.inputs, &o.outputs, &o.body, &n.inputs, &n.outputs, &n.body)
            }
            _ => fail(RenameErrorKind::ShapeMismatch, format!("`{old}` became `{new}`")),
        }
    }

    /// A function body sees only its own parameters, renamed independently
    /// of the surrounding code.
    fn function(
        &mut self,
        old_inputs: &[Identifier],
        old_outputs: &[Identifier],
        old_body: &Block,
        new_inputs: &[Identifier],
        new_outputs: &[Identifier],
        new_body: &Block,
    ) -> Result<()> {
        if old_inputs.len() != new_inputs.len() || old_outputs.len() != new_outputs.len() {
            return fail(RenameErrorKind::ArityMismatch, "different numbers of parameters or results");
        }
        let outer = std::mem::take(&mut self.vars);
        let result = (|| {
            for (o, n) in old_inputs.iter().chain(old_outputs).zip(new_inputs.iter().chain(new_outputs)) {
                self.declare_var(o, n)?;
            }
            self.block(old_body, new_body)
        })();
        self.vars = outer;
        result
    }
}

/// Checks that `new` is `old` with variables renamed consistently, starting
/// from `ren`; returns `ren` extended by the declarations of `old`.
pub fn statement_renamevar(old: &Statement, new: &Statement, ren: &Renaming) -> Result<Renaming> {
    let mut w = Walker::new(true, false);
    w.vars = ren.clone();
    w.statement(old, new)?;
    Ok(w.vars)
}

pub fn block_renamevar(old: &Block, new: &Block, ren: &Renaming) -> Result<Renaming> {
    let mut w = Walker::new(true, false);
    w.vars = ren.clone();
    w.block(old, new)?;
    Ok(w.vars)
}

pub fn expression_renamevar(old: &Expression, new: &Expression, ren: &Renaming) -> Result<()> {
    let mut w = Walker::new(true, false);
    w.vars = ren.clone();
    w.expression(old, new)
}

pub fn fundef_renamevar(old: &FunDef, new: &FunDef) -> Result<()> {
    if old.name != new.name {
        return fail(RenameErrorKind::ShapeMismatch, format!("function `{}` became `{}`", old.name, new.name));
    }
    funinfo_renamevar(&FunInfo::of(old), &FunInfo::of(new))
}

fn funinfo_renamevar(old: &FunInfo, new: &FunInfo) -> Result<()> {
    Walker::new(true, false).function(&old.inputs, &old.outputs, &old.body, &new.inputs, &new.outputs, &new.body)
}

/// Checks that `new` is `old` with functions renamed consistently, starting
/// from `ren`. Variable names must be equal.
pub fn statement_renamefun(old: &Statement, new: &Statement, ren: &Renaming) -> Result<Renaming> {
    let mut w = Walker::new(false, true);
    w.funs = ren.clone();
    w.statement(old, new)?;
    Ok(w.funs)
}

pub fn block_renamefun(old: &Block, new: &Block, ren: &Renaming) -> Result<Renaming> {
    let mut w = Walker::new(false, true);
    w.funs = ren.clone();
    w.block(old, new)?;
    Ok(w.funs)
}

/// First name declared twice in `block`, counting variable declarations and
/// function parameters and results.
pub fn first_repeated_var(block: &Block) -> Option<Identifier> {
    let mut seen = BTreeSet::new();
    let mut repeat = None;
    visit_declarations(block, &mut |kind, name| {
        if kind == Namespace::Variable && repeat.is_none() && !seen.insert(name.clone()) {
            repeat = Some(name.clone());
        }
    });
    repeat
}

/// First function name defined twice in `block`.
pub fn first_repeated_fun(block: &Block) -> Option<Identifier> {
    let mut seen = BTreeSet::new();
    let mut repeat = None;
    visit_declarations(block, &mut |kind, name| {
        if kind == Namespace::Function && repeat.is_none() && !seen.insert(name.clone()) {
            repeat = Some(name.clone());
        }
    });
    repeat
}

pub fn unique_vars(block: &Block) -> bool {
    first_repeated_var(block).is_none()
}

pub fn unique_funs(block: &Block) -> bool {
    first_repeated_fun(block).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Namespace {
    Variable,
    Function,
}

fn visit_declarations(block: &Block, f: &mut impl FnMut(Namespace, &Identifier)) {
    for stmt in &block.statements {
        match stmt {
            Statement::Block(b) => visit_declarations(b, f),
            Statement::VariableSingle { name, .. } => f(Namespace::Variable, name),
            Statement::VariableMulti { names, .. } => names.iter().for_each(|n| f(Namespace::Variable, n)),
            Statement::If { body, .. } => visit_declarations(body, f),
            Statement::Switch { cases, default, .. } => {
                cases.iter().for_each(|c| visit_declarations(&c.body, f));
                if let Some(d) = default {
                    visit_declarations(d, f);
                }
            }
            Statement::For {
                init, update, body, ..
            } => {
                visit_declarations(init, f);
                visit_declarations(update, f);
                visit_declarations(body, f);
            }
            Statement::FunDef(def) => {
                f(Namespace::Function, &def.name);
                def.inputs.iter().chain(&def.outputs).for_each(|n| f(Namespace::Variable, n));
                visit_declarations(&def.body, f);
            }
            Statement::AssignSingle { .. }
            | Statement::AssignMulti { .. }
            | Statement::FunCall(_)
            | Statement::Break
            | Statement::Continue
            | Statement::Leave => {}
        }
    }
}

/// Evidence that `new` disambiguates `old`: every pair the check matched.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Disambiguation {
    pub renamings: RenamingLog,
}

/// Checks that `new` is `old` with variables and functions consistently
/// renamed, and that `new` declares every variable and function name once.
/// Built-in function names must stay unchanged.
pub fn check_disambiguation(old: &Block, new: &Block, builtins: &FunTable) -> Result<Disambiguation> {
    let mut w = Walker::new(true, true);
    w.funs = Renaming::identity(builtins.keys());
    w.block(old, new)?;
    if let Some(name) = first_repeated_var(new) {
        return fail(RenameErrorKind::NotUnique, format!("variable `{name}` is declared more than once"));
    }
    if let Some(name) = first_repeated_fun(new) {
        return fail(RenameErrorKind::NotUnique, format!("function `{name}` is defined more than once"));
    }
    Ok(Disambiguation { renamings: w.log })
}

// ---------------------------------------------------------------------------
// Reference renamer

struct Renamer {
    rename_funs: bool,
    used_vars: BTreeSet<Identifier>,
    used_funs: BTreeSet<Identifier>,
    vars: Vec<BTreeMap<Identifier, Identifier>>,
    funs: Vec<BTreeMap<Identifier, Identifier>>,
}

fn fresh(used: &mut BTreeSet<Identifier>, name: &Identifier) -> Identifier {
    let chosen = if used.contains(name) {
        (1u64..)
            .map(|k| Identifier::new(format!("{name}{k}")).expect("suffixed identifier is valid"))
            .find(|candidate| !used.contains(candidate))
            .expect("unbounded search")
    } else {
        name.clone()
    };
    used.insert(chosen.clone());
    chosen
}

fn lookup(scopes: &[BTreeMap<Identifier, Identifier>], name: &Identifier) -> Identifier {
    scopes
        .iter()
        .rev()
        .find_map(|scope| scope.get(name))
        .unwrap_or(name)
        .clone()
}

impl Renamer {
    fn declare_var(&mut self, name: &Identifier) -> Identifier {
        let new = fresh(&mut self.used_vars, name);
        self.vars.last_mut().expect("variable scope").insert(name.clone(), new.clone());
        new
    }

    fn var(&self, name: &Identifier) -> Identifier {
        lookup(&self.vars, name)
    }

    fn fun(&self, name: &Identifier) -> Identifier {
        lookup(&self.funs, name)
    }

    fn path(&self, path: &Path) -> Path {
        match path.as_single() {
            Some(name) => Path::single(self.var(name)),
            None => path.clone(),
        }
    }

    fn expression(&self, expr: &Expression) -> Expression {
        match expr {
            Expression::Path(p) => Expression::Path(self.path(p)),
            Expression::Literal(l) => Expression::Literal(l.clone()),
            Expression::FunCall(c) => Expression::FunCall(self.funcall(c)),
        }
    }

    fn funcall(&self, call: &FunCall) -> FunCall {
        FunCall {
            name: self.fun(&call.name),
            args: call.args.iter().map(|a| self.expression(a)).collect(),
        }
    }

    fn enter(&mut self, statements: &[Statement]) {
        self.vars.push(BTreeMap::new());
        let mut scope = BTreeMap::new();
        for def in statements.iter().filter_map(|s| match s {
            Statement::FunDef(def) => Some(def),
            _ => None,
        }) {
            let new = if self.rename_funs {
                fresh(&mut self.used_funs, &def.name)
            } else {
                def.name.clone()
            };
            scope.insert(def.name.clone(), new);
        }
        self.funs.push(scope);
    }

    fn leave(&mut self) {
        self.vars.pop();
        self.funs.pop();
    }

    fn block(&mut self, block: &Block) -> Block {
        self.enter(&block.statements);
        let statements = block.statements.iter().map(|s| self.statement(s)).collect();
        self.leave();
        Block::new(statements)
    }

    fn statement(&mut self, stmt: &Statement) -> Statement {
        match stmt {
            Statement::Block(b) => Statement::Block(self.block(b)),
            Statement::VariableSingle { name, init } => {
                let init = init.as_ref().map(|e| self.expression(e));
                Statement::VariableSingle {
                    name: self.declare_var(name),
                    init,
                }
            }
            Statement::VariableMulti { names, init } => {
                let init = init.as_ref().map(|c| self.funcall(c));
                Statement::VariableMulti {
                    names: names.iter().map(|n| self.declare_var(n)).collect(),
                    init,
                }
            }
            Statement::AssignSingle { target, value } => Statement::AssignSingle {
                target: self.path(target),
                value: self.expression(value),
            },
            Statement::AssignMulti { targets, value } => Statement::AssignMulti {
                targets: targets.iter().map(|t| self.path(t)).collect(),
                value: self.funcall(value),
            },
            Statement::FunCall(c) => Statement::FunCall(self.funcall(c)),
            Statement::If { test, body } => Statement::If {
                test: self.expression(test),
                body: self.block(body),
            },
            Statement::Switch {
                target,
                cases,
                default,
            } => Statement::Switch {
                target: self.expression(target),
                cases: cases
                    .iter()
                    .map(|c| SwCase {
                        value: c.value.clone(),
                        body: self.block(&c.body),
                    })
                    .collect(),
                default: default.as_ref().map(|d| self.block(d)),
            },
            Statement::For {
                init,
                test,
                update,
                body,
            } => {
                self.enter(&init.statements);
                let init = Block::new(init.statements.iter().map(|s| self.statement(s)).collect());
                let rebuilt = Statement::For {
                    init,
                    test: self.expression(test),
                    update: self.block(update),
                    body: self.block(body),
                };
                self.leave();
                rebuilt
            }
            Statement::Break | Statement::Continue | Statement::Leave => stmt.clone(),
            Statement::FunDef(def) => {
                let name = self.fun(&def.name);
                let outer = std::mem::replace(&mut self.vars, vec![BTreeMap::new()]);
                let inputs = def.inputs.iter().map(|n| self.declare_var(n)).collect();
                let outputs = def.outputs.iter().map(|n| self.declare_var(n)).collect();
                let body = Arc::new(self.block(&def.body));
                self.vars = outer;
                Statement::FunDef(FunDef {
                    name,
                    inputs,
                    outputs,
                    body,
                })
            }
        }
    }
}

/// A deterministic renamer whose output declares every name once. A name is
/// kept when unused so far and otherwise gets the smallest numeric suffix
/// that is unused. Built-in names are never chosen for user functions.
pub fn reference_disambiguate(block: &Block, builtins: &FunTable) -> Block {
    let mut r = Renamer {
        rename_funs: true,
        used_vars: BTreeSet::new(),
        used_funs: builtins.keys().cloned().collect(),
        vars: vec![],
        funs: vec![],
    };
    r.block(block)
}

/// Renames variables only. `free` lists variables the block uses without
/// declaring; when `rename_free` is set they also get fresh names (with a
/// suffix even on first use). Returns the renamed block and the renaming
/// of the free variables.
pub fn reference_disambiguate_vars(block: &Block, free: &[Identifier], rename_free: bool) -> (Block, Renaming) {
    let mut r = Renamer {
        rename_funs: false,
        used_vars: free.iter().cloned().collect(),
        used_funs: BTreeSet::new(),
        vars: vec![BTreeMap::new()],
        funs: vec![],
    };
    let mut seed = Renaming::new();
    for name in free {
        let new = if rename_free {
            fresh(&mut r.used_vars, name)
        } else {
            name.clone()
        };
        r.vars[0].insert(name.clone(), new.clone());
        seed.push(name.clone(), new).expect("free variables are distinct");
    }
    // Statements run in the scope holding the free variables, as the
    // top-level statements of a program do.
    r.funs.push(BTreeMap::new());
    let renamed = r.block(block);
    (renamed, seed)
}

// ---------------------------------------------------------------------------
// Relations on states

/// Old and new locals hold exactly the renamed variables, with equal values.
pub fn cstate_renamevar(old: &CState, new: &CState, ren: &Renaming) -> bool {
    old.local.len() == ren.len()
        && new.local.len() == ren.len()
        && ren
            .pairs()
            .iter()
            .all(|(o, n)| matches!((old.local.get(o), new.local.get(n)), (Some(a), Some(b)) if a == b))
}

/// Same scopes, same function names and arities, and each pair of bodies
/// related by a variable renaming of their own.
pub fn funenv_renamevar(old: &FunEnv, new: &FunEnv) -> bool {
    old.scopes.len() == new.scopes.len()
        && old.scopes.iter().zip(&new.scopes).all(|(o, n)| {
            o.len() == n.len()
                && o.iter().zip(n.iter()).all(|((on, oi), (nn, ni))| {
                    on == nn
                        && oi.inputs.len() == ni.inputs.len()
                        && oi.outputs.len() == ni.outputs.len()
                        && funinfo_renamevar(oi, ni).is_ok()
                })
        })
}

pub fn soutcome_renamevar(old: &SOutcome, new: &SOutcome, ren: &Renaming) -> bool {
    old.mode == new.mode && cstate_renamevar(&old.cstate, &new.cstate, ren)
}

/// Related outcomes, or errors on both sides.
pub fn soutcome_result_renamevar(
    old: &std::result::Result<SOutcome, EvalError>,
    new: &std::result::Result<SOutcome, EvalError>,
    ren: &Renaming,
) -> bool {
    match (old, new) {
        (Ok(o), Ok(n)) => soutcome_renamevar(o, n, ren),
        (Err(_), Err(_)) => true,
        _ => false,
    }
}
