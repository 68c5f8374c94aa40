//! Translation validation of one transformation instance, and the
//! certificate recording the verdict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use yulkit::ast::{Block, Identifier, Statement};
use yulkit::dynamics::{CState, Dialect, EvalError, Interpreter, SOutcome};
use yulkit::renaming::{check_disambiguation, soutcome_result_renamevar, RenamingLog, Renaming};
use yulkit::testgen::okeq;
use yulkit::transforms::{dead_code_eliminate, for_loop_init_rewrite, loop_init_count};

use crate::input::{Format, Input};

pub const SCHEMA: &str = "yulkit-certificate/1";
pub const NOTE: &str = "This certificate records the verdict of a checker, not a proof.";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pass {
    DeadCode,
    LoopInitRewrite,
}

impl Pass {
    pub fn name(self) -> &'static str {
        match self {
            Pass::DeadCode => "dead-code",
            Pass::LoopInitRewrite => "loop-init-rewrite",
        }
    }

    pub fn from_name(name: &str) -> Option<Pass> {
        match name {
            "dead-code" => Some(Pass::DeadCode),
            "loop-init-rewrite" => Some(Pass::LoopInitRewrite),
            _ => None,
        }
    }

    pub fn apply(self, block: &Block) -> Block {
        match self {
            Pass::DeadCode => dead_code_eliminate(block),
            Pass::LoopInitRewrite => for_loop_init_rewrite(block),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transform {
    /// Passes applied left to right.
    Pipeline(Vec<Pass>),
    Disambiguate,
}

impl Transform {
    /// `disambiguate`, or a comma-separated list of executable passes.
    pub fn parse(text: &str) -> Result<Transform, String> {
        if text == "disambiguate" {
            return Ok(Transform::Disambiguate);
        }
        text.split(',')
            .map(|name| Pass::from_name(name.trim()).ok_or_else(|| format!("unknown transform `{name}`")))
            .collect::<Result<Vec<_>, _>>()
            .map(Transform::Pipeline)
    }

    pub fn name(&self) -> String {
        match self {
            Transform::Disambiguate => "disambiguate".to_string(),
            Transform::Pipeline(passes) => passes.iter().map(|p| p.name()).collect::<Vec<_>>().join(","),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub format: Format,
    pub sha256: String,
}

impl InputInfo {
    fn of(input: &Input) -> Self {
        InputInfo {
            path: input.path.display().to_string(),
            format: input.format,
            sha256: input.sha256.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Inputs {
    pub old: InputInfo,
    pub new: InputInfo,
}

#[derive(Debug, Serialize)]
pub struct ErrorDetail {
    pub kind: String,
    pub context: String,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Detail {
    Renamings(RenamingLog),
    Error(ErrorDetail),
}

#[derive(Debug, Serialize)]
pub struct Differential {
    pub runs: usize,
    pub seed: u64,
    pub max_fuel: u64,
    pub finished: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Certificate {
    pub schema: &'static str,
    pub tool_version: String,
    pub transform: String,
    pub inputs: Inputs,
    pub result: Verdict,
    pub detail: Option<Detail>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub differential: Option<Differential>,
    pub note: &'static str,
}

pub struct DifferentialOptions {
    pub runs: usize,
    pub seed: u64,
    pub max_fuel: u64,
}

pub fn tool_version() -> String {
    format!("yulkit {}", env!("CARGO_PKG_VERSION"))
}

/// Index and text of the first top-level position where two blocks differ.
fn first_difference(expected: &Block, actual: &Block) -> String {
    let n = expected.statements.len().max(actual.statements.len());
    for i in 0..n {
        let e = expected.statements.get(i);
        let a = actual.statements.get(i);
        if e != a {
            let show = |s: Option<&Statement>| s.map_or("nothing".to_string(), |s| format!("`{s}`"));
            return format!("statement {i}: expected {}, found {}", show(e), show(a));
        }
    }
    "blocks differ".to_string()
}

pub fn validate(old: &Input, new: &Input, transform: &Transform, differential: Option<&DifferentialOptions>) -> Certificate {
    let builtins = Dialect::evm_pure().fun_table();
    let (mut result, mut detail) = match transform {
        Transform::Pipeline(passes) => {
            let expected = passes.iter().fold(old.block.clone(), |b, p| p.apply(&b));
            if expected == new.block {
                (Verdict::Accepted, None)
            } else {
                let error = ErrorDetail {
                    kind: "structural-mismatch".to_string(),
                    context: first_difference(&expected, &new.block),
                };
                (Verdict::Rejected, Some(Detail::Error(error)))
            }
        }
        Transform::Disambiguate => match check_disambiguation(&old.block, &new.block, &builtins) {
            Ok(d) => (Verdict::Accepted, Some(Detail::Renamings(d.renamings))),
            Err(e) => {
                let error = ErrorDetail {
                    kind: e.kind.as_str().to_string(),
                    context: e.context,
                };
                (Verdict::Rejected, Some(Detail::Error(error)))
            }
        },
    };
    // Differential runs only add evidence to an accepted check.
    let differential = match differential {
        Some(opts) if result == Verdict::Accepted => {
            let summary = run_differential(&old.block, &new.block, transform, opts);
            if summary.mismatches > 0 {
                result = Verdict::Rejected;
                detail = Some(Detail::Error(ErrorDetail {
                    kind: "differential-mismatch".to_string(),
                    context: summary.first_mismatch.clone().unwrap_or_default(),
                }));
            }
            Some(summary)
        }
        _ => None,
    };
    Certificate {
        schema: SCHEMA,
        tool_version: tool_version(),
        transform: transform.name(),
        inputs: Inputs {
            old: InputInfo::of(old),
            new: InputInfo::of(new),
        },
        result,
        detail,
        differential,
        note: NOTE,
    }
}

fn describe(result: &Result<SOutcome, EvalError>) -> String {
    match result {
        Ok(outcome) => {
            let vars: Vec<String> = outcome.cstate.local.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{} [{}]", outcome.mode, vars.join(" "))
        }
        Err(EvalError::Limit) => "limit".to_string(),
        Err(e) => e.to_string(),
    }
}

fn is_safety(result: &Result<SOutcome, EvalError>) -> bool {
    matches!(result, Err(e) if !e.is_limit())
}

fn top_level_declarations(block: &Block) -> Vec<Identifier> {
    block
        .statements
        .iter()
        .flat_map(|stmt| match stmt {
            Statement::VariableSingle { name, .. } => vec![name.clone()],
            Statement::VariableMulti { names, .. } => names.clone(),
            _ => vec![],
        })
        .collect()
}

/// Runs both programs at random fuels, log-uniform in [1, max_fuel], and
/// checks the outcome relation of the transformation.
fn run_differential(old: &Block, new: &Block, transform: &Transform, opts: &DifferentialOptions) -> Differential {
    let dialect = Dialect::evm_pure();
    let run = |block: &Block, fuel: u64| Interpreter::new(&dialect).exec_top(block, CState::default(), fuel);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max_bits = 64 - opts.max_fuel.max(1).leading_zeros();
    let slack = match transform {
        Transform::Pipeline(passes) if passes.contains(&Pass::LoopInitRewrite) => Some(2 * loop_init_count(old)),
        _ => None,
    };
    let top_renaming = Renaming::from_pairs(top_level_declarations(old).into_iter().zip(top_level_declarations(new)));

    let mut summary = Differential {
        runs: opts.runs,
        seed: opts.seed,
        max_fuel: opts.max_fuel,
        finished: 0,
        mismatches: 0,
        first_mismatch: None,
    };
    for _ in 0..opts.runs {
        let bits = rng.gen_range(0..=max_bits);
        let fuel = rng.gen_range(0..=(1u64 << bits.min(63))).clamp(1, opts.max_fuel.max(1));
        let a = run(old, fuel);
        let b = run(new, fuel);
        if a.is_ok() {
            summary.finished += 1;
        }
        let mismatch = match (transform, slack) {
            (Transform::Disambiguate, _) => match &top_renaming {
                _ if is_safety(&a) || is_safety(&b) => is_safety(&a) != is_safety(&b),
                Ok(ren) => !soutcome_result_renamevar(&a, &b, ren),
                Err(_) => true,
            },
            (Transform::Pipeline(_), None) => !okeq(&a, &b),
            (Transform::Pipeline(_), Some(slack)) => match (&a, &b) {
                (Ok(x), Ok(y)) => x != y,
                (Err(_), Ok(_)) => true,
                (Ok(_), Err(_)) => run(new, fuel + slack) != a,
                (Err(x), Err(y)) => x.is_limit() && !y.is_limit(),
            },
        };
        if mismatch {
            summary.mismatches += 1;
            summary
                .first_mismatch
                .get_or_insert_with(|| format!("fuel {fuel}: {} became {}", describe(&a), describe(&b)));
        }
    }
    summary
}
