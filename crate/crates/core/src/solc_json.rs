//! Conversion of the Yul AST JSON exported by solc into [`Block`]s.
//!
//! Only the keys below are read; anything else (source locations, `type`
//! fields left empty, documentation) is ignored:
//! `nodeType`, `statements`, `body`, `condition`, `expression`, `value`,
//! `hexValue`, `variables`, `variableNames`, `functionName`, `arguments`,
//! `parameters`, `returnVariables`, `cases`, `pre`, `post`, `kind`, `name`,
//! plus `code` and `block` to unwrap `YulObject` and `YulCode` nodes.

use std::sync::Arc;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::ast::{Block, Expression, FunCall, FunDef, Identifier, Literal, Path, Statement, SwCase};

/// A conversion failure at a `/`-separated location in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {reason}")]
pub struct ConvertError {
    pub path: String,
    pub reason: String,
}

/// Which input of a pair failed to convert.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{side} input: {error}")]
pub struct PairError {
    pub side: &'static str,
    pub error: ConvertError,
}

type Result<T> = std::result::Result<T, ConvertError>;

#[derive(Clone, Copy)]
struct At<'a> {
    parent: Option<&'a At<'a>>,
    segment: Segment<'a>,
}

#[derive(Clone, Copy)]
enum Segment<'a> {
    Root,
    Key(&'a str),
    Index(usize),
}

impl<'a> At<'a> {
    fn root() -> Self {
        At {
            parent: None,
            segment: Segment::Root,
        }
    }

    fn key(&'a self, key: &'a str) -> At<'a> {
        At {
            parent: Some(self),
            segment: Segment::Key(key),
        }
    }

    fn index(&'a self, i: usize) -> At<'a> {
        At {
            parent: Some(self),
            segment: Segment::Index(i),
        }
    }

    fn path(&self) -> String {
        let mut parts = Vec::new();
        let mut cur = Some(self);
        while let Some(at) = cur {
            match at.segment {
                Segment::Root => {}
                Segment::Key(k) => parts.push(k.to_string()),
                Segment::Index(i) => parts.push(i.to_string()),
            }
            cur = at.parent;
        }
        parts.reverse();
        format!("/{}", parts.join("/"))
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(ConvertError {
            path: self.path(),
            reason: reason.into(),
        })
    }
}

fn object<'j>(json: &'j Value, at: &At) -> Result<&'j Map<String, Value>> {
    match json {
        Value::Object(map) => Ok(map),
        _ => at.fail("expected an object"),
    }
}

fn field<'j>(map: &'j Map<String, Value>, key: &str, at: &At) -> Result<&'j Value> {
    match map.get(key) {
        Some(v) => Ok(v),
        None => at.fail(format!("missing field `{key}`")),
    }
}

fn string<'j>(json: &'j Value, at: &At) -> Result<&'j str> {
    match json {
        Value::String(s) => Ok(s),
        _ => at.fail("expected a string"),
    }
}

fn array<'j>(json: &'j Value, at: &At) -> Result<&'j [Value]> {
    match json {
        Value::Array(items) => Ok(items),
        _ => at.fail("expected an array"),
    }
}

fn node_type<'j>(map: &'j Map<String, Value>, at: &At) -> Result<&'j str> {
    string(field(map, "nodeType", at)?, &at.key("nodeType"))
}

/// An optional list field; solc omits empty parameter lists.
fn list<'j>(map: &'j Map<String, Value>, key: &str) -> &'j [Value] {
    match map.get(key) {
        Some(Value::Array(items)) => items,
        _ => &[],
    }
}

fn identifier(text: &str, at: &At) -> Result<Identifier> {
    match Identifier::new(text) {
        Ok(id) => Ok(id),
        Err(e) => at.fail(e.to_string()),
    }
}

/// Converts a `YulBlock`, or a `YulObject`/`YulCode` wrapping one.
pub fn convert(json: &Value) -> Result<Block> {
    let at = At::root();
    let map = object(json, &at)?;
    match node_type(map, &at)? {
        "YulObject" => {
            let code_at = at.key("code");
            let code = object(field(map, "code", &at)?, &code_at)?;
            let block_at = code_at.key("block");
            block(field(code, "block", &code_at)?, &block_at)
        }
        "YulCode" => {
            let block_at = at.key("block");
            block(field(map, "block", &at)?, &block_at)
        }
        _ => block(json, &at),
    }
}

/// Parses JSON text and converts it.
pub fn convert_str(text: &str) -> Result<Block> {
    match serde_json::from_str::<Value>(text) {
        Ok(json) => convert(&json),
        Err(e) => At::root().fail(format!("invalid JSON: {e}")),
    }
}

/// Converts the old and new side of a transformation.
pub fn convert_pair(old: &Value, new: &Value) -> std::result::Result<(Block, Block), PairError> {
    let old = convert(old).map_err(|error| PairError { side: "old", error })?;
    let new = convert(new).map_err(|error| PairError { side: "new", error })?;
    Ok((old, new))
}

fn block(json: &Value, at: &At) -> Result<Block> {
    let map = object(json, at)?;
    let kind = node_type(map, at)?;
    if kind != "YulBlock" {
        return at.fail(format!("expected `YulBlock`, found `{kind}`"));
    }
    let statements_at = at.key("statements");
    let statements = array(field(map, "statements", at)?, &statements_at)?
        .iter()
        .enumerate()
        .map(|(i, s)| statement(s, &statements_at.index(i)))
        .collect::<Result<_>>()?;
    Ok(Block::new(statements))
}

fn sub_block(map: &Map<String, Value>, key: &str, at: &At) -> Result<Block> {
    block(field(map, key, at)?, &at.key(key))
}

fn typed_names(items: &[Value], at: &At) -> Result<Vec<Identifier>> {
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let at = at.index(i);
            let map = object(item, &at)?;
            match node_type(map, &at)? {
                "YulTypedName" => {}
                other => return at.fail(format!("expected `YulTypedName`, found `{other}`")),
            }
            if let Some(ty) = map.get("type") {
                let ty = string(ty, &at.key("type"))?;
                if !ty.is_empty() {
                    return at.fail(format!("typed name with type `{ty}` is not supported"));
                }
            }
            identifier(string(field(map, "name", &at)?, &at.key("name"))?, &at.key("name"))
        })
        .collect()
}

fn path(json: &Value, at: &At) -> Result<Path> {
    let map = object(json, at)?;
    match node_type(map, at)? {
        "YulIdentifier" => {}
        other => return at.fail(format!("expected `YulIdentifier`, found `{other}`")),
    }
    let name_at = at.key("name");
    let name = string(field(map, "name", at)?, &name_at)?;
    let parts = name.split('.').map(|p| identifier(p, &name_at)).collect::<Result<Vec<_>>>()?;
    Ok(Path::new(parts).expect("split yields at least one part"))
}

fn statement(json: &Value, at: &At) -> Result<Statement> {
    let map = object(json, at)?;
    Ok(match node_type(map, at)? {
        "YulBlock" => Statement::Block(block(json, at)?),
        "YulVariableDeclaration" => {
            let vars_at = at.key("variables");
            let names = typed_names(array(field(map, "variables", at)?, &vars_at)?, &vars_at)?;
            let value = map.get("value").filter(|v| !v.is_null());
            match names.len() {
                0 => return vars_at.fail("declaration without variables"),
                1 => Statement::VariableSingle {
                    name: names.into_iter().next().expect("one name"),
                    init: value.map(|v| expression(v, &at.key("value"))).transpose()?,
                },
                _ => Statement::VariableMulti {
                    names,
                    init: value.map(|v| funcall(v, &at.key("value"))).transpose()?,
                },
            }
        }
        "YulAssignment" => {
            let names_at = at.key("variableNames");
            let targets = array(field(map, "variableNames", at)?, &names_at)?
                .iter()
                .enumerate()
                .map(|(i, t)| path(t, &names_at.index(i)))
                .collect::<Result<Vec<_>>>()?;
            let value = field(map, "value", at)?;
            match targets.len() {
                0 => return names_at.fail("assignment without targets"),
                1 => Statement::AssignSingle {
                    target: targets.into_iter().next().expect("one target"),
                    value: expression(value, &at.key("value"))?,
                },
                _ => Statement::AssignMulti {
                    targets,
                    value: funcall(value, &at.key("value"))?,
                },
            }
        }
        "YulExpressionStatement" => {
            Statement::FunCall(funcall(field(map, "expression", at)?, &at.key("expression"))?)
        }
        "YulFunctionDefinition" => {
            let name_at = at.key("name");
            Statement::FunDef(FunDef {
                name: identifier(string(field(map, "name", at)?, &name_at)?, &name_at)?,
                inputs: typed_names(list(map, "parameters"), &at.key("parameters"))?,
                outputs: typed_names(list(map, "returnVariables"), &at.key("returnVariables"))?,
                body: Arc::new(sub_block(map, "body", at)?),
            })
        }
        "YulIf" => Statement::If {
            test: expression(field(map, "condition", at)?, &at.key("condition"))?,
            body: sub_block(map, "body", at)?,
        },
        "YulSwitch" => {
            let target = expression(field(map, "expression", at)?, &at.key("expression"))?;
            let cases_at = at.key("cases");
            let mut cases = Vec::new();
            let mut default = None;
            for (i, case) in array(field(map, "cases", at)?, &cases_at)?.iter().enumerate() {
                let case_at = cases_at.index(i);
                let case_map = object(case, &case_at)?;
                match node_type(case_map, &case_at)? {
                    "YulCase" => {}
                    other => return case_at.fail(format!("expected `YulCase`, found `{other}`")),
                }
                let body = sub_block(case_map, "body", &case_at)?;
                let value_at = case_at.key("value");
                match field(case_map, "value", &case_at)? {
                    Value::String(s) if s == "default" => {
                        if default.is_some() {
                            return case_at.fail("second default case");
                        }
                        default = Some(body);
                    }
                    value => {
                        if default.is_some() {
                            return case_at.fail("case after the default case");
                        }
                        cases.push(SwCase {
                            value: literal(value, &value_at)?,
                            body,
                        });
                    }
                }
            }
            Statement::Switch {
                target,
                cases,
                default,
            }
        }
        "YulForLoop" => Statement::For {
            init: sub_block(map, "pre", at)?,
            test: expression(field(map, "condition", at)?, &at.key("condition"))?,
            update: sub_block(map, "post", at)?,
            body: sub_block(map, "body", at)?,
        },
        "YulBreak" => Statement::Break,
        "YulContinue" => Statement::Continue,
        "YulLeave" => Statement::Leave,
        other => return at.fail(format!("unknown statement node type `{other}`")),
    })
}

fn expression(json: &Value, at: &At) -> Result<Expression> {
    let map = object(json, at)?;
    match node_type(map, at)? {
        "YulIdentifier" => Ok(Expression::Path(path(json, at)?)),
        "YulLiteral" => Ok(Expression::Literal(literal(json, at)?)),
        "YulFunctionCall" => Ok(Expression::FunCall(funcall(json, at)?)),
        other => at.fail(format!("unknown expression node type `{other}`")),
    }
}

fn funcall(json: &Value, at: &At) -> Result<FunCall> {
    let map = object(json, at)?;
    match node_type(map, at)? {
        "YulFunctionCall" => {}
        other => return at.fail(format!("expected `YulFunctionCall`, found `{other}`")),
    }
    let name_at = at.key("functionName");
    let name_map = object(field(map, "functionName", at)?, &name_at)?;
    let name = identifier(string(field(name_map, "name", &name_at)?, &name_at.key("name"))?, &name_at.key("name"))?;
    let args_at = at.key("arguments");
    let args = list(map, "arguments")
        .iter()
        .enumerate()
        .map(|(i, a)| expression(a, &args_at.index(i)))
        .collect::<Result<_>>()?;
    Ok(FunCall { name, args })
}

fn literal(json: &Value, at: &At) -> Result<Literal> {
    let map = object(json, at)?;
    match node_type(map, at)? {
        "YulLiteral" => {}
        other => return at.fail(format!("expected `YulLiteral`, found `{other}`")),
    }
    if let Some(ty) = map.get("type").and_then(Value::as_str) {
        if !ty.is_empty() {
            return at.fail(format!("typed literal with type `{ty}` is not supported"));
        }
    }
    let kind = string(field(map, "kind", at)?, &at.key("kind"))?;
    let value_at = at.key("value");
    match kind {
        "bool" => match string(field(map, "value", at)?, &value_at)? {
            "true" => Ok(Literal::True),
            "false" => Ok(Literal::False),
            other => value_at.fail(format!("malformed boolean `{other}`")),
        },
        "number" => {
            let text = string(field(map, "value", at)?, &value_at)?;
            if let Some(digits) = text.strip_prefix("0x") {
                if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_hexdigit()) {
                    return Ok(Literal::HexNumber(digits.to_string()));
                }
            } else if !text.is_empty()
                && text.chars().all(|c| c.is_ascii_digit())
                && (text == "0" || !text.starts_with('0'))
            {
                return Ok(Literal::DecNumber(text.to_string()));
            }
            value_at.fail(format!("malformed number `{text}`"))
        }
        "string" => {
            // `hexValue` holds the exact bytes; `value` is absent when they
            // are not valid UTF-8.
            if let Some(hex_value) = map.get("hexValue") {
                let hex_at = at.key("hexValue");
                let digits = string(hex_value, &hex_at)?;
                if digits.len() % 2 != 0 || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
                    return hex_at.fail(format!("malformed hex value `{digits}`"));
                }
                let bytes: Vec<u8> = (0..digits.len())
                    .step_by(2)
                    .map(|i| u8::from_str_radix(&digits[i..i + 2], 16).expect("checked hex digits"))
                    .collect();
                return Ok(Literal::from_string_bytes(&bytes));
            }
            let text = string(field(map, "value", at)?, &value_at)?;
            Ok(Literal::from_string_bytes(text.as_bytes()))
        }
        other => at.key("kind").fail(format!("unknown literal kind `{other}`")),
    }
}

// Comparison with parsed source

fn canonical_literal(lit: &Literal) -> Literal {
    match lit.string_bytes() {
        Some(bytes) => Literal::from_string_bytes(&bytes),
        None => lit.clone(),
    }
}

fn canonical_expr(e: &Expression) -> Expression {
    match e {
        Expression::Literal(l) => Expression::Literal(canonical_literal(l)),
        Expression::FunCall(c) => Expression::FunCall(canonical_call(c)),
        Expression::Path(_) => e.clone(),
    }
}

fn canonical_call(c: &FunCall) -> FunCall {
    FunCall {
        name: c.name.clone(),
        args: c.args.iter().map(canonical_expr).collect(),
    }
}

/// `b` with every string literal respelled canonically. solc JSON keeps the
/// bytes of a string but not its spelling, so a converted tree equals the
/// parsed source only after this normalization.
pub fn canonical_strings(b: &Block) -> Block {
    Block::new(b.statements.iter().map(canonical_stmt).collect())
}

fn canonical_stmt(s: &Statement) -> Statement {
    match s {
        Statement::Block(b) => Statement::Block(canonical_strings(b)),
        Statement::VariableSingle { name, init } => Statement::VariableSingle {
            name: name.clone(),
            init: init.as_ref().map(canonical_expr),
        },
        Statement::VariableMulti { names, init } => Statement::VariableMulti {
            names: names.clone(),
            init: init.as_ref().map(canonical_call),
        },
        Statement::AssignSingle { target, value } => Statement::AssignSingle {
            target: target.clone(),
            value: canonical_expr(value),
        },
        Statement::AssignMulti { targets, value } => Statement::AssignMulti {
            targets: targets.clone(),
            value: canonical_call(value),
        },
        Statement::FunCall(c) => Statement::FunCall(canonical_call(c)),
        Statement::If { test, body } => Statement::If {
            test: canonical_expr(test),
            body: canonical_strings(body),
        },
        Statement::Switch { target, cases, default } => Statement::Switch {
            target: canonical_expr(target),
            cases: cases
                .iter()
                .map(|c| SwCase {
                    value: canonical_literal(&c.value),
                    body: canonical_strings(&c.body),
                })
                .collect(),
            default: default.as_ref().map(canonical_strings),
        },
        Statement::For { init, test, update, body } => Statement::For {
            init: canonical_strings(init),
            test: canonical_expr(test),
            update: canonical_strings(update),
            body: canonical_strings(body),
        },
        Statement::FunDef(d) => Statement::FunDef(FunDef {
            name: d.name.clone(),
            inputs: d.inputs.clone(),
            outputs: d.outputs.clone(),
            body: Arc::new(canonical_strings(&d.body)),
        }),
        Statement::Break | Statement::Continue | Statement::Leave => s.clone(),
    }
}
