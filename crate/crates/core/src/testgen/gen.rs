//! Random programs that pass the static checker by construction: the
//! generator threads the same variable and function tables as the checker
//! and only emits what the checker would accept in that context.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Construct, GenConfig};
use crate::ast::{Block, Escape, Expression, FunCall, FunDef, Identifier, Literal, Path, Statement, StringElement, SwCase};
use crate::dynamics::Dialect;
use crate::statics::FunType;
use crate::value::{literal_value, StringAlignment, Value};

const VAR_POOL: usize = 6;
const FUN_POOL: usize = 6;
const MAX_EXPR_DEPTH: usize = 3;
const MAX_LOOP_DEPTH: usize = 2;

#[derive(Clone)]
struct Ctx {
    vars: Vec<Identifier>,
    /// Accessible but not assignable: loop counters.
    readonly: BTreeSet<Identifier>,
    /// Functions that may be called without creating a call cycle.
    callable: Vec<(Identifier, FunType)>,
    visible_funs: BTreeSet<Identifier>,
    in_loop_body: bool,
    in_function: bool,
    loop_depth: usize,
    depth: usize,
}

impl Ctx {
    fn declare(&mut self, name: Identifier) {
        self.vars.push(name);
    }

    fn assignable(&self) -> Vec<&Identifier> {
        self.vars.iter().filter(|v| !self.readonly.contains(*v)).collect()
    }
}

pub(super) struct Generator<'c> {
    rng: ChaCha8Rng,
    cfg: &'c GenConfig,
    builtins: Vec<(Identifier, FunType)>,
    has_counter_builtins: bool,
}

fn ident(text: String) -> Identifier {
    Identifier::new(text).expect("generated identifier is valid")
}

impl<'c> Generator<'c> {
    pub(super) fn new(cfg: &'c GenConfig, seed: u64) -> Self {
        let table = Dialect::evm_pure().fun_table();
        let builtins: Vec<(Identifier, FunType)> = cfg
            .builtin_set
            .iter()
            .filter_map(|name| table.get(name).map(|ty| (name.clone(), *ty)))
            .collect();
        let has = |n: &str| builtins.iter().any(|(b, _)| b.as_str() == n);
        let has_counter_builtins = has("lt") && has("add");
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
            builtins,
            has_counter_builtins,
        }
    }

    pub(super) fn program(&mut self) -> Block {
        let ctx = Ctx {
            vars: self.cfg.free_vars.clone(),
            readonly: BTreeSet::new(),
            callable: self.builtins.clone(),
            visible_funs: self.builtins.iter().map(|(n, _)| n.clone()).collect(),
            in_loop_body: false,
            in_function: false,
            loop_depth: 0,
            depth: 0,
        };
        let min = 1.min(self.cfg.max_stmts_per_block);
        self.block_with(ctx, min)
    }

    fn weight(&self, c: Construct) -> u32 {
        self.cfg.weights.get(&c).copied().unwrap_or(0)
    }

    fn block(&mut self, ctx: &Ctx) -> Block {
        let mut inner = ctx.clone();
        inner.depth += 1;
        self.block_with(inner, 0)
    }

    /// Generates the statements of a block whose context is `ctx`.
    fn block_with(&mut self, mut ctx: Ctx, min_stmts: usize) -> Block {
        let max = self.cfg.max_stmts_per_block;
        let shallow = ctx.depth + 1 < self.cfg.max_depth;
        let n = if shallow {
            self.rng.gen_range(min_stmts..=max)
        } else {
            self.rng.gen_range(min_stmts..=max.min(2).max(min_stmts))
        };

        // Functions are hoisted, so their names and types are fixed first.
        let mut defs: Vec<(Identifier, FunType)> = Vec::new();
        let fun_weight = self.weight(Construct::FunDef);
        if self.cfg.allow_fundefs && fun_weight > 0 && shallow {
            let tries = self.rng.gen_range(0..=2);
            for _ in 0..tries {
                if self.rng.gen_range(0..10) >= fun_weight.min(10) {
                    continue;
                }
                let name = self.fresh_fun(&ctx);
                ctx.visible_funs.insert(name.clone());
                let ty = FunType::new(self.rng.gen_range(0..=2), self.rng.gen_range(0..=2));
                defs.push((name, ty));
            }
        }
        let outer_callable = ctx.callable.clone();
        ctx.callable.extend(defs.iter().cloned());

        let total = n + defs.len();
        let mut def_slots: Vec<usize> = (0..total).collect();
        def_slots.shuffle(&mut self.rng);
        let mut def_slots: Vec<usize> = def_slots.into_iter().take(defs.len()).collect();
        def_slots.sort_unstable();

        let mut statements = Vec::with_capacity(total);
        let mut next_def = 0;
        for slot in 0..total {
            if def_slots.get(next_def) == Some(&slot) {
                let (name, ty) = defs[next_def].clone();
                let mut callable = outer_callable.clone();
                callable.extend(defs[..next_def].iter().cloned());
                statements.push(self.fundef(&ctx, name, ty, callable));
                next_def += 1;
            } else {
                statements.push(self.statement(&mut ctx));
            }
        }
        Block::new(statements)
    }

    fn fresh_fun(&mut self, ctx: &Ctx) -> Identifier {
        let start = self.rng.gen_range(0..FUN_POOL);
        (0..)
            .map(|k| ident(format!("f{}", start + k)))
            .find(|n| !ctx.visible_funs.contains(n))
            .expect("unbounded search")
    }

    fn fresh_var(&mut self, ctx: &Ctx, taken: &[Identifier]) -> Identifier {
        let start = self.rng.gen_range(0..VAR_POOL);
        (0..)
            .map(|k| ident(format!("x{}", start + k)))
            .find(|n| !ctx.vars.contains(n) && !taken.contains(n))
            .expect("unbounded search")
    }

    fn fundef(&mut self, ctx: &Ctx, name: Identifier, ty: FunType, callable: Vec<(Identifier, FunType)>) -> Statement {
        let mut params = Vec::new();
        for _ in 0..ty.inputs + ty.outputs {
            let p = ident(format!("p{}", params.len()));
            params.push(p);
        }
        // Shuffle parameter names so bodies are not all alike.
        if self.rng.gen_bool(0.5) {
            params.reverse();
        }
        let outputs = params.split_off(ty.inputs);
        let inputs = params;
        let body_ctx = Ctx {
            vars: inputs.iter().chain(&outputs).cloned().collect(),
            readonly: BTreeSet::new(),
            callable,
            visible_funs: ctx.visible_funs.clone(),
            in_loop_body: false,
            in_function: true,
            loop_depth: 0,
            depth: ctx.depth + 1,
        };
        let mut body = self.block_with(body_ctx.clone(), 0);
        // Assign the outputs now and then so results are not always zero.
        for out in &outputs {
            if self.rng.gen_bool(0.6) {
                let value = self.expression(&body_ctx, 1);
                let pos = self.rng.gen_range(0..=body.statements.len());
                body.statements.insert(
                    pos,
                    Statement::AssignSingle {
                        target: Path::single(out.clone()),
                        value,
                    },
                );
            }
        }
        Statement::FunDef(FunDef {
            name,
            inputs,
            outputs,
            body: Arc::new(body),
        })
    }

    fn applicable(&self, ctx: &Ctx, c: Construct) -> bool {
        let deeper = ctx.depth + 1 < self.cfg.max_depth;
        match c {
            Construct::Let | Construct::Block => c != Construct::Block || deeper,
            Construct::LetMulti => true,
            Construct::Assign => !ctx.assignable().is_empty(),
            Construct::AssignMulti => self
                .callable_with_outputs(ctx, |o| o >= 2)
                .iter()
                .any(|(_, ty)| ty.outputs <= ctx.assignable().len()),
            Construct::CallStmt => !self.callable_with_outputs(ctx, |o| o == 0).is_empty(),
            Construct::If | Construct::Switch => deeper,
            Construct::For => self.cfg.allow_loops && deeper && ctx.loop_depth < MAX_LOOP_DEPTH,
            Construct::Break | Construct::Continue => ctx.in_loop_body,
            Construct::Leave => ctx.in_function,
            Construct::FunDef => false,
        }
    }

    fn callable_with_outputs(&self, ctx: &Ctx, pred: impl Fn(usize) -> bool) -> Vec<(Identifier, FunType)> {
        ctx.callable.iter().filter(|(_, ty)| pred(ty.outputs)).cloned().collect()
    }

    fn statement(&mut self, ctx: &mut Ctx) -> Statement {
        let options: Vec<(Construct, u32)> = Construct::ALL
            .iter()
            .copied()
            .filter(|&c| self.applicable(ctx, c))
            .map(|c| (c, self.weight(c)))
            .filter(|(_, w)| *w > 0)
            .collect();
        let choice = options
            .choose_weighted(&mut self.rng, |(_, w)| *w)
            .map(|(c, _)| *c)
            .unwrap_or(Construct::Let);
        match choice {
            Construct::Let => {
                let init = self.rng.gen_bool(0.8).then(|| self.expression(ctx, 0));
                let name = self.fresh_var(ctx, &[]);
                ctx.declare(name.clone());
                Statement::VariableSingle { name, init }
            }
            Construct::LetMulti => {
                let multi = self.callable_with_outputs(ctx, |o| o >= 2);
                let (count, init) = match multi.choose(&mut self.rng) {
                    Some((name, ty)) if self.rng.gen_bool(0.8) => {
                        let call = self.call(ctx, name.clone(), *ty, 0);
                        (ty.outputs, Some(call))
                    }
                    _ => (self.rng.gen_range(2..=3), None),
                };
                let mut names = Vec::new();
                for _ in 0..count {
                    let n = self.fresh_var(ctx, &names);
                    names.push(n);
                }
                for n in &names {
                    ctx.declare(n.clone());
                }
                Statement::VariableMulti { names, init }
            }
            Construct::Assign => {
                let target = (*ctx.assignable().choose(&mut self.rng).expect("assignable variable")).clone();
                Statement::AssignSingle {
                    target: Path::single(target),
                    value: self.expression(ctx, 0),
                }
            }
            Construct::AssignMulti => {
                let available = ctx.assignable().len();
                let funs: Vec<_> = self
                    .callable_with_outputs(ctx, |o| o >= 2)
                    .into_iter()
                    .filter(|(_, ty)| ty.outputs <= available)
                    .collect();
                let (name, ty) = funs.choose(&mut self.rng).expect("applicable").clone();
                let mut targets: Vec<Identifier> = ctx.assignable().into_iter().cloned().collect();
                targets.shuffle(&mut self.rng);
                targets.truncate(ty.outputs);
                Statement::AssignMulti {
                    targets: targets.into_iter().map(Path::single).collect(),
                    value: self.call(ctx, name, ty, 0),
                }
            }
            Construct::CallStmt => {
                let funs = self.callable_with_outputs(ctx, |o| o == 0);
                let (name, ty) = funs.choose(&mut self.rng).expect("applicable").clone();
                Statement::FunCall(self.call(ctx, name, ty, 0))
            }
            Construct::If => Statement::If {
                test: self.expression(ctx, 0),
                body: self.block(ctx),
            },
            Construct::Switch => self.switch(ctx),
            Construct::For => self.for_loop(ctx),
            Construct::Block => Statement::Block(self.block(ctx)),
            Construct::Break => Statement::Break,
            Construct::Continue => Statement::Continue,
            Construct::Leave => Statement::Leave,
            Construct::FunDef => unreachable!("function definitions are placed by the block"),
        }
    }

    fn switch(&mut self, ctx: &Ctx) -> Statement {
        let target = self.expression(ctx, 0);
        let mut seen = BTreeSet::new();
        let mut cases = Vec::new();
        for _ in 0..self.rng.gen_range(0..=3) {
            let value = self.literal();
            let v = literal_value(&value, StringAlignment::Integer).expect("generated literals are in range");
            if seen.insert(v) {
                cases.push(SwCase {
                    value,
                    body: self.block(ctx),
                });
            }
        }
        let default = (cases.is_empty() || self.rng.gen_bool(0.5)).then(|| self.block(ctx));
        Statement::Switch {
            target,
            cases,
            default,
        }
    }

    fn for_loop(&mut self, ctx: &Ctx) -> Statement {
        let counter = self.has_counter_builtins && self.rng.gen_bool(self.cfg.counter_loop_probability);
        let mut loop_ctx = ctx.clone();
        loop_ctx.depth += 1;
        loop_ctx.loop_depth += 1;
        if counter {
            let i = self.fresh_var(ctx, &[]);
            let bound = self.rng.gen_range(0..=4u64);
            let decl = Statement::VariableSingle {
                name: i.clone(),
                init: Some(Expression::Literal(Literal::dec("0"))),
            };
            loop_ctx.declare(i.clone());
            loop_ctx.readonly.insert(i.clone());
            let test = Expression::call("lt", vec![Expression::Path(Path::single(i.clone())), Expression::Literal(Literal::dec(bound.to_string()))]);
            let increment = Statement::AssignSingle {
                target: Path::single(i.clone()),
                value: Expression::call("add", vec![Expression::Path(Path::single(i.clone())), Expression::Literal(Literal::dec("1"))]),
            };
            let mut update_ctx = loop_ctx.clone();
            update_ctx.in_loop_body = false;
            let mut update = self.block(&update_ctx);
            update.statements.push(increment);
            let mut body_ctx = loop_ctx;
            body_ctx.in_loop_body = true;
            let body = self.block(&body_ctx);
            if self.rng.gen_bool(0.3) {
                // The same loop with its initialization already moved out.
                let for_stmt = Statement::For {
                    init: Block::default(),
                    test,
                    update,
                    body,
                };
                return Statement::Block(Block::new(vec![decl, for_stmt]));
            }
            return Statement::For {
                init: Block::new(vec![decl]),
                test,
                update,
                body,
            };
        }

        // A free-form loop: random initialization, test and update, with an
        // early exit test in the body most of the time.
        let mut init_ctx = loop_ctx.clone();
        init_ctx.in_loop_body = false;
        let mut init = Vec::new();
        for _ in 0..self.rng.gen_range(0..=2) {
            let stmt = self.simple_statement(&mut init_ctx);
            init.push(stmt);
        }
        let test = self.expression(&init_ctx, 0);
        let update = self.block(&init_ctx);
        let mut body_ctx = init_ctx.clone();
        body_ctx.in_loop_body = true;
        let mut body = self.block(&body_ctx);
        if self.rng.gen_bool(0.7) {
            let exit = Statement::If {
                test: self.expression(&body_ctx, 1),
                body: Block::new(vec![Statement::Break]),
            };
            body.statements.insert(0, exit);
        }
        Statement::For {
            init: Block::new(init),
            test,
            update,
            body,
        }
    }

    /// A declaration or assignment, for loop initializations.
    fn simple_statement(&mut self, ctx: &mut Ctx) -> Statement {
        if !ctx.assignable().is_empty() && self.rng.gen_bool(0.3) {
            let target = (*ctx.assignable().choose(&mut self.rng).expect("nonempty")).clone();
            return Statement::AssignSingle {
                target: Path::single(target),
                value: self.expression(ctx, 0),
            };
        }
        let init = Some(self.expression(ctx, 0));
        let name = self.fresh_var(ctx, &[]);
        ctx.declare(name.clone());
        Statement::VariableSingle { name, init }
    }

    fn call(&mut self, ctx: &Ctx, name: Identifier, ty: FunType, depth: usize) -> FunCall {
        FunCall {
            name,
            args: (0..ty.inputs).map(|_| self.expression(ctx, depth + 1)).collect(),
        }
    }

    fn expression(&mut self, ctx: &Ctx, depth: usize) -> Expression {
        let single = self.callable_with_outputs(ctx, |o| o == 1);
        let can_call = depth < MAX_EXPR_DEPTH && !single.is_empty();
        let roll = self.rng.gen_range(0..10);
        if can_call && roll < 4 {
            let (name, ty) = single.choose(&mut self.rng).expect("nonempty").clone();
            return Expression::FunCall(self.call(ctx, name, ty, depth));
        }
        if !ctx.vars.is_empty() && roll < 7 {
            let v = ctx.vars.choose(&mut self.rng).expect("nonempty").clone();
            return Expression::Path(Path::single(v));
        }
        Expression::Literal(self.literal())
    }

    /// A literal whose value is below 2^256.
    pub(super) fn literal(&mut self) -> Literal {
        match self.rng.gen_range(0..100) {
            0..=54 => Literal::dec(self.rng.gen_range(0..=20u32).to_string()),
            55..=64 => {
                let digits = format!("{:x}", self.rng.gen_range(0..=0xffffu32));
                Literal::hex(self.random_case(&digits))
            }
            65..=69 => {
                let v = match self.rng.gen_range(0..4) {
                    0 => Value::MAX,
                    1 => Value::one() << 255,
                    2 => Value::MAX - Value::from(self.rng.gen_range(0..5u32)),
                    _ => Value::from(self.rng.gen::<u128>()) << 64,
                };
                if self.rng.gen_bool(0.5) {
                    Literal::dec(v.to_string())
                } else {
                    let padding = "0".repeat(self.rng.gen_range(0..3));
                    Literal::hex(format!("{padding}{}", self.random_case(&format!("{v:x}"))))
                }
            }
            70..=79 => {
                if self.rng.gen_bool(0.5) {
                    Literal::True
                } else {
                    Literal::False
                }
            }
            80..=93 => {
                let len = self.rng.gen_range(0..=6);
                Literal::PlainString(self.string_elements(len))
            }
            _ => {
                let len = self.rng.gen_range(0..=32);
                let hex: String = (0..len).map(|_| format!("{:02x}", self.rng.gen::<u8>())).collect();
                Literal::HexString(self.random_case(&hex))
            }
        }
    }

    /// A literal that may be out of range: too many digits or bytes.
    fn literal_any(&mut self) -> Literal {
        match self.rng.gen_range(0..6) {
            0 => {
                let extra = self.rng.gen_range(0..3u32);
                let v = num_text_above_max(extra);
                Literal::dec(v)
            }
            1 => {
                let len = self.rng.gen_range(63..=66);
                let mut digits: String = (0..len).map(|_| char::from_digit(self.rng.gen_range(0..16), 16).unwrap()).collect();
                if self.rng.gen_bool(0.3) {
                    digits.insert_str(0, "000");
                }
                Literal::hex(digits)
            }
            2 => {
                let len = self.rng.gen_range(30..=34);
                Literal::PlainString(self.string_elements(len))
            }
            3 => {
                let len = self.rng.gen_range(31..=33);
                Literal::HexString((0..len).map(|_| format!("{:02x}", self.rng.gen::<u8>())).collect())
            }
            _ => self.literal(),
        }
    }

    fn random_case(&mut self, text: &str) -> String {
        text.chars()
            .map(|c| if self.rng.gen_bool(0.3) { c.to_ascii_uppercase() } else { c })
            .collect()
    }

    fn string_elements(&mut self, len: usize) -> Vec<StringElement> {
        const PLAIN: &[char] = &['a', 'b', 'z', 'A', '0', '9', ' ', '_', '\'', 'é'];
        (0..len)
            .map(|_| match self.rng.gen_range(0..12) {
                0 => StringElement::Escape(Escape::Newline),
                1 => StringElement::Escape(Escape::DoubleQuote),
                2 => StringElement::Escape(Escape::Backslash),
                3 => {
                    let hex = |r: &mut ChaCha8Rng| {
                        let c = char::from_digit(r.gen_range(0..16), 16).unwrap();
                        if r.gen_bool(0.5) {
                            c.to_ascii_uppercase()
                        } else {
                            c
                        }
                    };
                    let hi = hex(&mut self.rng);
                    let lo = hex(&mut self.rng);
                    StringElement::Escape(Escape::Hex(hi, lo))
                }
                4 => StringElement::Escape(*[Escape::Tab, Escape::CarriageReturn, Escape::SingleQuote].choose(&mut self.rng).unwrap()),
                _ => StringElement::Char(*PLAIN.choose(&mut self.rng).unwrap()),
            })
            .collect()
    }
}

/// An arbitrary literal from the default generator mix, possibly out of range.
pub(super) fn literal_any_from(seed: u64) -> Literal {
    let cfg = GenConfig::default();
    Generator::new(&cfg, seed).literal_any()
}

/// Decimal text of 2^256 - 1 plus a small amount, or with an extra digit.
fn num_text_above_max(extra: u32) -> String {
    const MAX: &str = "115792089237316195423570985008687907853269984665640564039457584007913129639935";
    match extra {
        0 => MAX.to_string(),
        1 => "115792089237316195423570985008687907853269984665640564039457584007913129639936".to_string(),
        _ => format!("{MAX}0"),
    }
}
