//! Random well-scoped programs and the property suites run over them.

use std::collections::BTreeMap;

use crate::ast::{Block, Identifier, Literal};
use crate::dynamics::Dialect;

mod gen;
mod suites;

pub use suites::{dead_code_case, okeq, replay, run_suite, CaseReport, Failure, Suite, SuiteParams, SuiteReport};

/// Kinds of statement the generator chooses between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Construct {
    Let,
    LetMulti,
    Assign,
    AssignMulti,
    CallStmt,
    If,
    Switch,
    For,
    Block,
    Break,
    Continue,
    Leave,
    FunDef,
}

impl Construct {
    pub const ALL: [Construct; 13] = [
        Construct::Let,
        Construct::LetMulti,
        Construct::Assign,
        Construct::AssignMulti,
        Construct::CallStmt,
        Construct::If,
        Construct::Switch,
        Construct::For,
        Construct::Block,
        Construct::Break,
        Construct::Continue,
        Construct::Leave,
        Construct::FunDef,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Maximum block nesting, at least 1.
    pub max_depth: usize,
    pub max_stmts_per_block: usize,
    pub allow_fundefs: bool,
    pub allow_loops: bool,
    /// Built-in functions the program may call, a subset of the pure EVM dialect.
    pub builtin_set: Vec<Identifier>,
    /// Relative frequencies. `FunDef` is read as a chance out of 10 for
    /// each of up to two definitions per block.
    pub weights: BTreeMap<Construct, u32>,
    /// Variables accessible at the start of the program.
    pub free_vars: Vec<Identifier>,
    /// Chance that a loop is a bounded counter loop.
    pub counter_loop_probability: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        let weights = [
            (Construct::Let, 6),
            (Construct::LetMulti, 2),
            (Construct::Assign, 5),
            (Construct::AssignMulti, 2),
            (Construct::CallStmt, 1),
            (Construct::If, 3),
            (Construct::Switch, 2),
            (Construct::For, 2),
            (Construct::Block, 2),
            (Construct::Break, 2),
            (Construct::Continue, 1),
            (Construct::Leave, 1),
            (Construct::FunDef, 3),
        ];
        GenConfig {
            seed: 0,
            max_depth: 4,
            max_stmts_per_block: 4,
            allow_fundefs: true,
            allow_loops: true,
            builtin_set: Dialect::evm_pure().builtins.keys().cloned().collect(),
            weights: weights.into_iter().collect(),
            free_vars: Vec::new(),
            counter_loop_probability: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid generator configuration: {0}")]
pub struct ConfigError(String);

impl GenConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_depth == 0 {
            return Err(ConfigError("max_depth must be at least 1".into()));
        }
        if self.weights.values().all(|w| *w == 0) {
            return Err(ConfigError("all weights are zero".into()));
        }
        if !(0.0..=1.0).contains(&self.counter_loop_probability) {
            return Err(ConfigError("counter_loop_probability must be within [0, 1]".into()));
        }
        let table = Dialect::evm_pure().fun_table();
        if let Some(unknown) = self.builtin_set.iter().find(|b| !table.contains_key(*b)) {
            return Err(ConfigError(format!("`{unknown}` is not a built-in function")));
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = self.free_vars.iter().find(|v| !seen.insert(*v)) {
            return Err(ConfigError(format!("free variable `{dup}` listed twice")));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenConfig { seed, ..self.clone() }
    }
}

/// A program that passes the static checker with the configured built-ins
/// and free variables. The same configuration always gives the same program.
///
/// # Panics
/// If the configuration is invalid.
pub fn gen_program(cfg: &GenConfig) -> Block {
    cfg.validate().expect("valid generator configuration");
    gen::Generator::new(cfg, cfg.seed).program()
}

/// A literal drawn from a mix that includes values of 2^256 and above and
/// strings longer than 32 bytes.
pub fn gen_literal_any(seed: u64) -> Literal {
    gen::literal_any_from(seed)
}

#[cfg(test)]
mod tests;
