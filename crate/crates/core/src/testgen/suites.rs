//! Property suites. Each case generates one program from its own seed, so
//! any failure can be replayed from the seed alone.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{gen, gen_program, GenConfig};
use crate::ast::{ident, print_block, Block, Expression, Identifier, Layout, Statement};
use crate::dynamics::{
    cstate_to_vars, funenv_to_funtable, CState, Dialect, EOutcome, EvalError, Fault, FunEnv, Interpreter, Observer,
    SOutcome,
};
use crate::renaming::{
    block_renamevar, invert, reference_disambiguate_vars, soutcome_result_renamevar, statement_renamevar, Renaming,
};
use crate::statics::{
    check_safe_block, check_safe_expression, check_safe_statement, check_safe_statements, check_safe_top_with,
    fun_table_of, FunTable, VarTable, VarsModes,
};
use crate::syntax::parse_program;
use crate::transforms::{dead_code_eliminate, for_loop_init_rewrite, loop_init_count, nofun, noloopinit};
use crate::value::Value;

const STACK_SIZE: usize = 256 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Generator,
    StaticSoundness,
    DeadCode,
    LoopInit,
    Renamevar,
    Restrictions,
    Roundtrip,
    FuelMonotonicity,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Generator,
        Suite::StaticSoundness,
        Suite::DeadCode,
        Suite::LoopInit,
        Suite::Renamevar,
        Suite::Restrictions,
        Suite::Roundtrip,
        Suite::FuelMonotonicity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Generator => "generator",
            Suite::StaticSoundness => "static-soundness",
            Suite::DeadCode => "dead-code",
            Suite::LoopInit => "loop-init",
            Suite::Renamevar => "renamevar",
            Suite::Restrictions => "restrictions",
            Suite::Roundtrip => "roundtrip",
            Suite::FuelMonotonicity => "fuel-monotonicity",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub n: usize,
    /// Case `i` uses seed `seed + i`.
    pub seed: u64,
    pub fuels: Vec<u64>,
    pub cfg: GenConfig,
    /// Random initial states per program and fuel.
    pub states: usize,
    /// Dead code suite only: skip programs that define functions.
    pub require_nofun: bool,
    /// Static soundness suite only: run a deliberately broken interpreter.
    pub fault: Option<Fault>,
}

impl SuiteParams {
    /// The settings each suite is meant to run with.
    pub fn new(suite: Suite, n: usize, seed: u64) -> Self {
        let mut cfg = GenConfig {
            free_vars: vec![ident("a"), ident("b")],
            ..GenConfig::default()
        };
        let (fuels, states) = match suite {
            Suite::StaticSoundness => (vec![4, 64, 4096], 1),
            Suite::FuelMonotonicity => ((2..=14).map(|k| 1u64 << k).collect(), 1),
            Suite::Renamevar => (vec![4096], 10),
            Suite::DeadCode | Suite::LoopInit => (vec![64, 4096], 3),
            _ => (vec![4096], 1),
        };
        if suite == Suite::DeadCode {
            cfg.allow_fundefs = false;
        }
        SuiteParams {
            n,
            seed,
            fuels,
            cfg,
            states,
            require_nofun: true,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub seed: u64,
    pub program: String,
    pub property: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases_run: usize,
    /// Sorted by seed.
    pub failures: Vec<Failure>,
    /// Counters summed over all cases.
    pub stats: BTreeMap<String, u64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "suite {}: {} cases, {} failures: {verdict}",
            self.suite,
            self.cases_run,
            self.failures.len()
        );
        for (key, value) in &self.stats {
            let _ = writeln!(out, "  {key}: {value}");
        }
        for failure in self.failures.iter().take(20) {
            let _ = writeln!(out, "failure at seed {}: {}: {}", failure.seed, failure.property, failure.detail);
            let _ = writeln!(out, "{}", failure.program);
        }
        if self.failures.len() > 20 {
            let _ = writeln!(out, "({} more failures)", self.failures.len() - 20);
        }
        out
    }
}

/// Everything one case found, for replays.
#[derive(Debug, Clone)]
pub struct CaseReport {
    pub seed: u64,
    pub program: Block,
    /// (property, detail) pairs.
    pub failures: Vec<(String, String)>,
    pub stats: BTreeMap<String, u64>,
    pub trace: Vec<String>,
}

impl CaseReport {
    fn new(seed: u64, program: Block, verbose: bool) -> Self {
        CaseReport {
            seed,
            program,
            failures: Vec::new(),
            stats: BTreeMap::new(),
            trace: if verbose { vec![String::new()] } else { Vec::new() },
        }
    }

    fn verbose(&self) -> bool {
        !self.trace.is_empty()
    }

    fn log(&mut self, line: impl FnOnce() -> String) {
        if self.verbose() {
            self.trace.push(line());
        }
    }

    fn fail(&mut self, property: &str, detail: impl Into<String>) {
        let detail = detail.into();
        self.log(|| format!("FAILED {property}: {detail}"));
        self.failures.push((property.to_string(), detail));
    }

    fn count(&mut self, key: &str) {
        *self.stats.entry(key.to_string()).or_default() += 1;
    }

    fn check(&mut self, property: &str, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.fail(property, detail());
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("seed {}\n{}\n", self.seed, print_block(&self.program, Layout::Indented));
        for line in self.trace.iter().filter(|l| !l.is_empty()) {
            let _ = writeln!(out, "{line}");
        }
        for (key, value) in &self.stats {
            let _ = writeln!(out, "{key}: {value}");
        }
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict}");
        out
    }
}

/// Runs `params.n` cases in parallel.
pub fn run_suite(suite: Suite, params: &SuiteParams) -> SuiteReport {
    params.cfg.validate().expect("valid generator configuration");
    let pool = rayon::ThreadPoolBuilder::new()
        .stack_size(STACK_SIZE)
        .build()
        .expect("thread pool");
    let cases: Vec<CaseReport> = pool.install(|| {
        (0..params.n as u64)
            .into_par_iter()
            .map(|i| run_case(suite, params, params.seed.wrapping_add(i), false))
            .collect()
    });
    let mut report = SuiteReport {
        suite,
        cases_run: cases.len(),
        failures: Vec::new(),
        stats: BTreeMap::new(),
    };
    for case in cases {
        for (key, value) in case.stats {
            *report.stats.entry(key).or_default() += value;
        }
        if case.failures.is_empty() {
            continue;
        }
        let program = print_block(&case.program, Layout::Indented);
        for (property, detail) in case.failures {
            report.failures.push(Failure {
                seed: case.seed,
                program: program.clone(),
                property,
                detail,
            });
        }
    }
    report.failures.sort_by_key(|f| f.seed);
    report
}

/// Reruns the case with seed `seed` (not an offset) and keeps a trace.
pub fn replay(suite: Suite, params: &SuiteParams, seed: u64) -> CaseReport {
    params.cfg.validate().expect("valid generator configuration");
    let params = params.clone();
    std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || run_case(suite, &params, seed, true))
        .expect("spawn")
        .join()
        .expect("replay panicked")
}

fn run_case(suite: Suite, params: &SuiteParams, seed: u64, verbose: bool) -> CaseReport {
    let cfg = params.cfg.with_seed(seed);
    let program = gen_program(&cfg);
    let mut case = CaseReport::new(seed, program.clone(), verbose);
    let env = Env::new(params, seed);
    match suite {
        Suite::Generator => generator_case(&cfg, &program, &env, &mut case),
        Suite::StaticSoundness => static_soundness_case(&program, params, &env, &mut case),
        Suite::DeadCode => {
            if params.require_nofun && !nofun(&program) {
                case.count("skipped: defines functions");
            } else {
                dead_code_into(&program, &env, &mut case);
            }
        }
        Suite::LoopInit => loop_init_case(&program, &env, &mut case),
        Suite::Renamevar => renamevar_case(&program, &env, &mut case),
        Suite::Restrictions => restrictions_case(&cfg, &program, &mut case),
        Suite::Roundtrip => roundtrip_case(&program, seed, &mut case),
        Suite::FuelMonotonicity => monotonicity_case(&program, &env, &mut case),
    }
    case
}

/// What the cases of one suite share: the dialect, fuels and initial states.
struct Env {
    dialect: Dialect,
    builtins: FunTable,
    free: Vec<Identifier>,
    fuels: Vec<u64>,
    states: Vec<CState>,
}

impl Env {
    fn new(params: &SuiteParams, seed: u64) -> Self {
        let dialect = Dialect::evm_pure();
        let builtins = dialect.fun_table();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_57a7e5);
        let states = (0..params.states)
            .map(|_| {
                CState::new(
                    params
                        .cfg
                        .free_vars
                        .iter()
                        .map(|v| (v.clone(), random_value(&mut rng)))
                        .collect(),
                )
            })
            .collect();
        Env {
            dialect,
            builtins,
            free: params.cfg.free_vars.clone(),
            fuels: params.fuels.clone(),
            states,
        }
    }

    fn free_table(&self) -> VarTable {
        self.free.iter().cloned().collect()
    }

    /// Built-ins plus the functions of the program's outermost block.
    fn top_funs(&self, program: &Block) -> FunTable {
        let mut funs = self.builtins.clone();
        funs.extend(fun_table_of(program).unwrap_or_default());
        funs
    }

    fn run(&self, program: &Block, state: &CState, fuel: u64) -> Result<SOutcome, EvalError> {
        Interpreter::new(&self.dialect).exec_top(program, state.clone(), fuel)
    }
}

fn random_value(rng: &mut ChaCha8Rng) -> Value {
    match rng.gen_range(0..4) {
        0 | 1 => Value::from(rng.gen_range(0..16u32)),
        2 => Value::MAX - Value::from(rng.gen_range(0..4u32)),
        _ => {
            let mut bytes = [0u8; 32];
            rng.fill(&mut bytes);
            Value::from_big_endian(&bytes)
        }
    }
}

fn describe(result: &Result<SOutcome, EvalError>) -> String {
    match result {
        Ok(outcome) => {
            let vars: Vec<String> = outcome.cstate.local.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{} [{}]", outcome.mode, vars.join(" "))
        }
        Err(EvalError::Limit) => "limit".to_string(),
        Err(err) => err.to_string(),
    }
}

fn is_safety(result: &Result<SOutcome, EvalError>) -> bool {
    matches!(result, Err(e) if !e.is_limit())
}

/// Both results are the same outcome, or both are errors of any kind.
pub fn okeq(a: &Result<SOutcome, EvalError>, b: &Result<SOutcome, EvalError>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

fn generator_case(cfg: &GenConfig, program: &Block, env: &Env, case: &mut CaseReport) {
    if let Err(e) = check_safe_top_with(program, &env.free_table(), &env.builtins) {
        case.fail("statically-safe", e.to_string());
    }
    case.check("deterministic", gen_program(cfg) == *program, || "second run differs".into());
    if !cfg.allow_fundefs {
        case.check("nofun-without-fundefs", nofun(program), || "function definition generated".into());
    }
    count_constructs(program, case);
}

fn count_constructs(block: &Block, case: &mut CaseReport) {
    for stmt in &block.statements {
        let key = match stmt {
            Statement::For { .. } => "constructs: for",
            Statement::FunDef(_) => "constructs: function",
            Statement::Switch { .. } => "constructs: switch",
            Statement::Break | Statement::Continue | Statement::Leave => "constructs: jump",
            _ => "constructs: other",
        };
        case.count(key);
        for inner in nested_blocks(stmt) {
            count_constructs(inner, case);
        }
    }
}

fn nested_blocks(stmt: &Statement) -> Vec<&Block> {
    match stmt {
        Statement::Block(b) => vec![b],
        Statement::If { body, .. } => vec![body],
        Statement::Switch { cases, default, .. } => cases.iter().map(|c| &c.body).chain(default.as_ref()).collect(),
        Statement::For {
            init, update, body, ..
        } => vec![init, update, body],
        Statement::FunDef(def) => vec![&*def.body],
        _ => vec![],
    }
}

/// Compares every completed step of an execution with the static checker's
/// verdict for the same piece of code in the same context.
struct StaticsObserver<'a> {
    builtins: &'a FunTable,
    statements: HashMap<(usize, VarTable, FunTable), Result<VarsModes, String>>,
    violations: Vec<(&'static str, String)>,
    checks: u64,
}

impl<'a> StaticsObserver<'a> {
    fn new(builtins: &'a FunTable) -> Self {
        StaticsObserver {
            builtins,
            statements: HashMap::new(),
            violations: Vec::new(),
            checks: 0,
        }
    }

    fn funs(&self, funenv: &FunEnv) -> FunTable {
        let mut funs = self.builtins.clone();
        funs.extend(funenv_to_funtable(funenv));
        funs
    }

    fn violation(&mut self, property: &'static str, detail: String) {
        if self.violations.len() < 10 {
            self.violations.push((property, detail));
        }
    }
}

impl Observer for StaticsObserver<'_> {
    fn block_done(&mut self, block: &Block, before: &CState, funenv: &FunEnv, result: &Result<SOutcome, EvalError>) {
        let Ok(outcome) = result else { return };
        self.checks += 1;
        let funs = self.funs(funenv);
        match check_safe_block(block, &cstate_to_vars(before), &funs) {
            Ok(modes) if modes.contains(outcome.mode) => {}
            Ok(modes) => self.violation("mode-membership", format!("block ended with {} outside {modes}", outcome.mode)),
            Err(e) => self.violation("executed-code-is-safe", format!("block rejected in its context: {e}")),
        }
    }

    fn statement_done(&mut self, stmt: &Statement, before: &CState, funenv: &FunEnv, result: &Result<SOutcome, EvalError>) {
        let Ok(outcome) = result else { return };
        self.checks += 1;
        let key = (stmt as *const Statement as usize, cstate_to_vars(before), self.funs(funenv));
        let verdict = self
            .statements
            .entry(key.clone())
            .or_insert_with(|| check_safe_statement(stmt, &key.1, &key.2).map_err(|e| e.to_string()))
            .clone();
        match verdict {
            Ok(vm) => {
                if !vm.modes.contains(outcome.mode) {
                    self.violation(
                        "mode-membership",
                        format!("`{stmt}` ended with {} outside {}", outcome.mode, vm.modes),
                    );
                }
                let after = cstate_to_vars(&outcome.cstate);
                if after != vm.vars {
                    self.violation(
                        "vars-abstraction",
                        format!("after `{stmt}` the state has {after:?}, the checker says {:?}", vm.vars),
                    );
                }
            }
            Err(e) => self.violation("executed-code-is-safe", format!("`{stmt}` rejected in its context: {e}")),
        }
    }

    fn expression_done(&mut self, expr: &Expression, before: &CState, funenv: &FunEnv, result: &Result<EOutcome, EvalError>) {
        let Ok(outcome) = result else { return };
        self.checks += 1;
        let funs = self.funs(funenv);
        match check_safe_expression(expr, &cstate_to_vars(before), &funs) {
            Ok(n) if n == outcome.values.len() => {}
            Ok(n) => self.violation(
                "value-count",
                format!("`{expr}` gave {} values, the checker says {n}", outcome.values.len()),
            ),
            Err(e) => self.violation("executed-code-is-safe", format!("`{expr}` rejected in its context: {e}")),
        }
    }
}

fn static_soundness_case(program: &Block, params: &SuiteParams, env: &Env, case: &mut CaseReport) {
    if let Err(e) = check_safe_top_with(program, &env.free_table(), &env.builtins) {
        case.fail("statically-safe", e.to_string());
        return;
    }
    for &fuel in &env.fuels {
        for state in &env.states {
            let mut interp = Interpreter::with_observer(&env.dialect, StaticsObserver::new(&env.builtins));
            interp.fault = params.fault;
            let result = interp.exec_top(program, state.clone(), fuel);
            case.log(|| format!("fuel {fuel}: {}", describe(&result)));
            match &result {
                Ok(_) => case.count("outcomes: ok"),
                Err(EvalError::Limit) => case.count("outcomes: limit"),
                Err(e) => case.fail("no-safety-error", format!("fuel {fuel}: {e}")),
            }
            *case.stats.entry("steps checked".into()).or_default() += interp.observer.checks;
            for (property, detail) in std::mem::take(&mut interp.observer.violations) {
                case.fail(property, format!("fuel {fuel}: {detail}"));
            }
        }
    }
}

/// Checks dead code elimination on one program: static preservation and
/// equivalent execution at equal fuel, from every initial state. Programs
/// with loop initializations are checked as given and again after the loop
/// initialization rewrite, which establishes `noloopinit`.
pub fn dead_code_case(program: &Block, states: &[CState], fuels: &[u64]) -> CaseReport {
    let free = states.first().map(|s| s.local.keys().cloned().collect()).unwrap_or_default();
    let env = Env {
        dialect: Dialect::evm_pure(),
        builtins: Dialect::evm_pure().fun_table(),
        free,
        fuels: fuels.to_vec(),
        states: states.to_vec(),
    };
    let mut case = CaseReport::new(0, program.clone(), false);
    dead_code_into(program, &env, &mut case);
    case
}

fn dead_code_into(program: &Block, env: &Env, case: &mut CaseReport) {
    if noloopinit(program) {
        case.count("programs: noloopinit");
        dead_code_program(program, env, case, "");
    } else {
        case.count("programs: with loop initialization");
        dead_code_program(program, env, case, " (with loop initialization)");
        dead_code_program(&for_loop_init_rewrite(program), env, case, " (after loop-init rewrite)");
    }
}

fn dead_code_program(program: &Block, env: &Env, case: &mut CaseReport, label: &str) {
    let new = dead_code_eliminate(program);
    if new != *program {
        case.count("programs: changed by dead code elimination");
    }
    let vars = env.free_table();
    let old_static = check_safe_statements(&program.statements, &vars, &env.top_funs(program));
    let new_static = check_safe_statements(&new.statements, &vars, &env.top_funs(&new));
    match (old_static, new_static) {
        (Ok(old), Ok(new)) => {
            case.check(&format!("dead-code-same-vars{label}"), old.vars == new.vars, || {
                format!("vars' {:?} became {:?}", old.vars, new.vars)
            });
            case.check(&format!("dead-code-modes-subset{label}"), new.modes.is_subset(old.modes), || {
                format!("modes {} became {}", old.modes, new.modes)
            });
        }
        (Ok(_), Err(e)) => case.fail(&format!("dead-code-stays-safe{label}"), e.to_string()),
        (Err(_), _) => case.count("programs: original unsafe"),
    }
    for &fuel in &env.fuels {
        for state in &env.states {
            let before = env.run(program, state, fuel);
            let after = env.run(&new, state, fuel);
            case.log(|| format!("fuel {fuel}: {} / {}", describe(&before), describe(&after)));
            case.count("executions compared");
            if !okeq(&before, &after) {
                case.fail(
                    &format!("dead-code-okeq{label}"),
                    format!("fuel {fuel}: {} became {}", describe(&before), describe(&after)),
                );
            }
        }
    }
}

/// The rewrite costs two extra units of fuel per rewritten loop on the
/// path to any statement, so the outcomes are compared with that slack.
fn loop_init_case(program: &Block, env: &Env, case: &mut CaseReport) {
    let new = for_loop_init_rewrite(program);
    let rewritten = loop_init_count(program);
    *case.stats.entry("loops rewritten".into()).or_default() += rewritten;
    case.check("loop-init-establishes-noloopinit", noloopinit(&new), || "a loop keeps its initialization".into());
    let vars = env.free_table();
    let old_static = check_safe_statements(&program.statements, &vars, &env.top_funs(program));
    let new_static = check_safe_statements(&new.statements, &vars, &env.top_funs(&new));
    match (old_static, new_static) {
        (Ok(old), Ok(new)) => {
            case.check("loop-init-same-vars", old.vars == new.vars, || {
                format!("vars' {:?} became {:?}", old.vars, new.vars)
            });
            case.check("loop-init-modes-subset", new.modes.is_subset(old.modes), || {
                format!("modes {} became {}", old.modes, new.modes)
            });
        }
        (Ok(_), Err(e)) => case.fail("loop-init-stays-safe", e.to_string()),
        (Err(e), _) => case.fail("statically-safe", e.to_string()),
    }
    for &fuel in &env.fuels {
        for state in &env.states {
            let before = env.run(program, state, fuel);
            let after = env.run(&new, state, fuel);
            case.log(|| format!("fuel {fuel}: {} / {}", describe(&before), describe(&after)));
            if is_safety(&before) || is_safety(&after) {
                case.fail("no-safety-error", format!("fuel {fuel}: {} / {}", describe(&before), describe(&after)));
                continue;
            }
            if let (Ok(a), Ok(b)) = (&before, &after) {
                case.check("loop-init-same-outcome", a == b, || {
                    format!("fuel {fuel}: {} became {}", describe(&before), describe(&after))
                });
            }
            if after.is_ok() && before.is_err() {
                case.fail("loop-init-no-cheaper", format!("fuel {fuel}: only the rewritten program finished"));
            }
            if before.is_ok() {
                let slack = fuel + 2 * rewritten;
                let relaxed = env.run(&new, state, slack);
                case.check("loop-init-within-slack", relaxed == before, || {
                    format!("fuel {fuel}: {} but {} at fuel {slack}", describe(&before), describe(&relaxed))
                });
            }
        }
    }
}

fn renamevar_case(program: &Block, env: &Env, case: &mut CaseReport) {
    let (new, seed_ren) = reference_disambiguate_vars(program, &env.free, true);
    if new != *program {
        case.count("programs: renamed");
    }
    case.log(|| format!("renamed:\n{}", print_block(&new, Layout::Indented)));

    let identity = Renaming::identity(&env.free);
    case.check("renamevar-reflexive", block_renamevar(program, program, &identity).is_ok(), || {
        "a program is not related to itself".into()
    });

    let mut ren = seed_ren.clone();
    for (o, n) in program.statements.iter().zip(&new.statements) {
        match statement_renamevar(o, n, &ren) {
            Ok(next) => ren = next,
            Err(e) => {
                case.fail("renamevar-accepts-reference", e.to_string());
                return;
            }
        }
    }
    if program.statements.len() != new.statements.len() {
        case.fail("renamevar-accepts-reference", "statement counts differ");
        return;
    }
    case.count("relation accepted");

    let back = new
        .statements
        .iter()
        .zip(&program.statements)
        .try_fold(invert(&seed_ren), |r, (n, o)| statement_renamevar(n, o, &r));
    case.check("renamevar-inverts", back.as_ref() == Ok(&invert(&ren)), || format!("inverse check gave {back:?}"));

    let funs = env.top_funs(program);
    let old_static = check_safe_statements(&program.statements, &seed_ren.keys(), &funs);
    let new_static = check_safe_statements(&new.statements, &seed_ren.values(), &funs);
    match (old_static, new_static) {
        (Ok(old), Ok(newer)) => {
            case.check("renamevar-same-modes", old.modes == newer.modes, || {
                format!("modes {} became {}", old.modes, newer.modes)
            });
            case.check(
                "renamevar-renamed-vars",
                old.vars == ren.keys() && newer.vars == ren.values(),
                || format!("vars' {:?} and {:?} against renaming {:?}", old.vars, newer.vars, ren.pairs()),
            );
        }
        (Ok(_), Err(e)) => case.fail("renamevar-stays-safe", e.to_string()),
        (Err(e), _) => case.fail("statically-safe", e.to_string()),
    }

    for &fuel in &env.fuels {
        for state in &env.states {
            let renamed_state = CState::new(
                state
                    .local
                    .iter()
                    .map(|(k, v)| (seed_ren.get(k).expect("free variable renamed").clone(), *v))
                    .collect(),
            );
            let before = env.run(program, state, fuel);
            let after = env.run(&new, &renamed_state, fuel);
            case.log(|| format!("fuel {fuel}: {} / {}", describe(&before), describe(&after)));
            if is_safety(&before) || is_safety(&after) {
                case.fail("no-safety-error", format!("fuel {fuel}: {} / {}", describe(&before), describe(&after)));
                continue;
            }
            case.count("executions compared");
            case.check("renamevar-related-outcomes", soutcome_result_renamevar(&before, &after, &ren), || {
                format!("fuel {fuel}: {} / {}", describe(&before), describe(&after))
            });
        }
    }
}

fn restrictions_case(cfg: &GenConfig, program: &Block, case: &mut CaseReport) {
    let without_funs = gen_program(&GenConfig {
        allow_fundefs: false,
        ..cfg.clone()
    });
    for (label, p) in [("", program), (" (no functions)", &without_funs)] {
        let dead = dead_code_eliminate(p);
        let rewritten = for_loop_init_rewrite(p);
        if nofun(p) {
            case.count("programs: nofun");
            case.check(&format!("dead-code-preserves-nofun{label}"), nofun(&dead), || "function appeared".into());
        }
        if noloopinit(p) {
            case.count("programs: noloopinit");
            case.check(&format!("dead-code-preserves-noloopinit{label}"), noloopinit(&dead), || {
                "loop initialization appeared".into()
            });
        }
        case.check(&format!("dead-code-preserves-noloopinit-after-rewrite{label}"), noloopinit(&dead_code_eliminate(&rewritten)), || {
            "loop initialization appeared".into()
        });
        case.check(&format!("loop-init-establishes-noloopinit{label}"), noloopinit(&rewritten), || {
            "a loop keeps its initialization".into()
        });
        case.check(&format!("dead-code-idempotent{label}"), dead_code_eliminate(&dead) == dead, || {
            "second application changed the program".into()
        });
        case.check(&format!("loop-init-idempotent{label}"), for_loop_init_rewrite(&rewritten) == rewritten, || {
            "second application changed the program".into()
        });
    }
}

fn roundtrip_case(program: &Block, seed: u64, case: &mut CaseReport) {
    // Out-of-range literals are valid syntax, so add one of those too.
    let mut tree = program.clone();
    tree.statements.push(Statement::VariableSingle {
        name: ident("lit"),
        init: Some(Expression::Literal(gen::literal_any_from(seed))),
    });
    for layout in [Layout::Compact, Layout::Indented] {
        let text = print_block(&tree, layout);
        match parse_program(&text) {
            Ok(parsed) => case.check("roundtrip", parsed == tree, || format!("{layout:?} text parses differently:\n{text}")),
            Err(e) => case.fail("roundtrip", format!("{layout:?} text does not parse: {e}\n{text}")),
        }
    }
}

/// Below some fuel the result is a limit error; from there on it is one
/// fixed outcome.
fn monotonicity_case(program: &Block, env: &Env, case: &mut CaseReport) {
    for state in &env.states {
        let mut first_ok: Option<(u64, Result<SOutcome, EvalError>)> = None;
        for &fuel in &env.fuels {
            let result = env.run(program, state, fuel);
            case.log(|| format!("fuel {fuel}: {}", describe(&result)));
            if is_safety(&result) {
                case.fail("no-safety-error", format!("fuel {fuel}: {}", describe(&result)));
                return;
            }
            match &first_ok {
                None if result.is_ok() => first_ok = Some((fuel, result)),
                None => {}
                Some((threshold, stable)) => {
                    if result != *stable {
                        case.fail(
                            "fuel-monotonic",
                            format!("{} at fuel {threshold} but {} at fuel {fuel}", describe(stable), describe(&result)),
                        );
                        return;
                    }
                }
            }
        }
        case.count(if first_ok.is_some() { "programs: finish" } else { "programs: limit at every fuel" });
    }
}
