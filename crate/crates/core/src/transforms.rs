//! The loop initialization rewriter and the dead code eliminator, with the
//! syntactic restrictions they establish or rely on.

use std::sync::Arc;

use crate::ast::{Block, FunDef, Statement, SwCase};
use crate::dynamics::{FunEnv, FunInfo};

/// Rebuilds `stmt`, replacing each directly nested block by `f(block)`.
fn map_blocks(stmt: &Statement, f: &mut impl FnMut(&Block) -> Block) -> Statement {
    match stmt {
        Statement::Block(b) => Statement::Block(f(b)),
        Statement::If { test, body } => Statement::If {
            test: test.clone(),
            body: f(body),
        },
        Statement::Switch {
            target,
            cases,
            default,
        } => Statement::Switch {
            target: target.clone(),
            cases: cases
                .iter()
                .map(|c| SwCase {
                    value: c.value.clone(),
                    body: f(&c.body),
                })
                .collect(),
            default: default.as_ref().map(&mut *f),
        },
        Statement::For {
            init,
            test,
            update,
            body,
        } => Statement::For {
            init: f(init),
            test: test.clone(),
            update: f(update),
            body: f(body),
        },
        Statement::FunDef(def) => Statement::FunDef(FunDef {
            name: def.name.clone(),
            inputs: def.inputs.clone(),
            outputs: def.outputs.clone(),
            body: Arc::new(f(&def.body)),
        }),
        other => other.clone(),
    }
}

/// Directly nested blocks of `stmt`.
fn sub_blocks(stmt: &Statement) -> Vec<&Block> {
    match stmt {
        Statement::Block(b) => vec![b],
        Statement::If { body, .. } => vec![body],
        Statement::Switch { cases, default, .. } => cases.iter().map(|c| &c.body).chain(default.as_ref()).collect(),
        Statement::For {
            init, update, body, ..
        } => vec![init, update, body],
        Statement::FunDef(def) => vec![&def.body],
        _ => vec![],
    }
}

/// `for { I } T { U } { B }` becomes `{ I for { } T { U } { B } }`, everywhere.
pub fn for_loop_init_rewrite(block: &Block) -> Block {
    Block::new(block.statements.iter().map(statement_loop_init_rewrite).collect())
}

pub fn statement_loop_init_rewrite(stmt: &Statement) -> Statement {
    let rebuilt = map_blocks(stmt, &mut for_loop_init_rewrite);
    match rebuilt {
        Statement::For {
            init,
            test,
            update,
            body,
        } if !init.statements.is_empty() => {
            let mut statements = init.statements;
            statements.push(Statement::For {
                init: Block::default(),
                test,
                update,
                body,
            });
            Statement::Block(Block::new(statements))
        }
        other => other,
    }
}

/// Drops every statement following a `break`, `continue` or `leave` in the
/// same block, in all blocks.
pub fn dead_code_eliminate(block: &Block) -> Block {
    let mut statements = Vec::with_capacity(block.statements.len());
    for stmt in &block.statements {
        statements.push(statement_dead(stmt));
        if matches!(stmt, Statement::Break | Statement::Continue | Statement::Leave) {
            break;
        }
    }
    Block::new(statements)
}

pub fn statement_dead(stmt: &Statement) -> Statement {
    map_blocks(stmt, &mut dead_code_eliminate)
}

pub fn statement_nofun(stmt: &Statement) -> bool {
    !matches!(stmt, Statement::FunDef(_)) && sub_blocks(stmt).into_iter().all(nofun)
}

/// True when no function definition occurs anywhere in `block`.
pub fn nofun(block: &Block) -> bool {
    block.statements.iter().all(statement_nofun)
}

pub fn statement_noloopinit(stmt: &Statement) -> bool {
    let here = match stmt {
        Statement::For { init, .. } => init.statements.is_empty(),
        _ => true,
    };
    here && sub_blocks(stmt).into_iter().all(noloopinit)
}

/// True when every `for` loop in `block` has an empty initialization block.
pub fn noloopinit(block: &Block) -> bool {
    block.statements.iter().all(statement_noloopinit)
}

/// Number of `for` loops with a nonempty initialization block, anywhere in
/// `block`. Each costs the rewritten program two more units of fuel.
pub fn loop_init_count(block: &Block) -> u64 {
    block
        .statements
        .iter()
        .map(|stmt| {
            let here = matches!(stmt, Statement::For { init, .. } if !init.statements.is_empty());
            u64::from(here) + sub_blocks(stmt).into_iter().map(loop_init_count).sum::<u64>()
        })
        .sum()
}

/// Applies `f` to every function body in the environment.
pub fn funenv_map_bodies(funenv: &FunEnv, f: impl Fn(&Block) -> Block) -> FunEnv {
    FunEnv {
        scopes: funenv
            .scopes
            .iter()
            .map(|scope| {
                Arc::new(
                    scope
                        .iter()
                        .map(|(name, info)| {
                            let info = FunInfo {
                                inputs: info.inputs.clone(),
                                outputs: info.outputs.clone(),
                                body: Arc::new(f(&info.body)),
                            };
                            (name.clone(), info)
                        })
                        .collect(),
                )
            })
            .collect(),
    }
}

/// Dead code elimination applied to every function body.
pub fn funenv_dead(funenv: &FunEnv) -> FunEnv {
    funenv_map_bodies(funenv, dead_code_eliminate)
}

pub fn funenv_nofun(funenv: &FunEnv) -> bool {
    funenv.scopes.iter().all(|scope| scope.values().all(|info| nofun(&info.body)))
}
