//! Abstract syntax of Yul.
//!
//! The trees keep the lexical details of literals (`0xff` and `255` are
//! different trees) and drop whitespace and comments. Equality is structural.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// Reserved words of the language. None of them is a valid [`Identifier`].
pub const KEYWORDS: [&str; 12] = [
    "let", "function", "if", "switch", "case", "default", "for", "break", "continue", "leave",
    "true", "false",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier `{text}`: {reason}")]
pub struct IdentifierError {
    pub text: String,
    pub reason: &'static str,
}

/// A single name: `[A-Za-z_$][A-Za-z0-9_$]*`, never a keyword.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Identifier(String);

pub fn is_identifier_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || c == '$'
}

pub fn is_identifier_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '$'
}

impl Identifier {
    pub fn new(text: impl Into<String>) -> Result<Self, IdentifierError> {
        let text = text.into();
        let mut chars = text.chars();
        let reason = match chars.next() {
            None => Some("empty"),
            Some(c) if !is_identifier_start(c) => Some("bad first character"),
            Some(_) if !chars.all(is_identifier_continue) => Some("bad character"),
            Some(_) if KEYWORDS.contains(&text.as_str()) => Some("keyword"),
            Some(_) => None,
        };
        match reason {
            Some(reason) => Err(IdentifierError { text, reason }),
            None => Ok(Identifier(text)),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Identifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand for identifiers known to be valid. Panics otherwise.
pub fn ident(text: &str) -> Identifier {
    Identifier::new(text).unwrap_or_else(|e| panic!("{e}"))
}

/// Dot-separated sequence of identifiers, used as a variable reference.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(Vec<Identifier>);

impl Path {
    /// Returns `None` for an empty list.
    pub fn new(parts: Vec<Identifier>) -> Option<Self> {
        if parts.is_empty() {
            None
        } else {
            Some(Path(parts))
        }
    }

    pub fn single(id: Identifier) -> Self {
        Path(vec![id])
    }

    pub fn parts(&self) -> &[Identifier] {
        &self.0
    }

    /// The identifier of a one-part path.
    pub fn as_single(&self) -> Option<&Identifier> {
        match self.0.as_slice() {
            [id] => Some(id),
            _ => None,
        }
    }
}

/// Escape sequences allowed in plain string literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Escape {
    Backslash,
    DoubleQuote,
    SingleQuote,
    Newline,
    CarriageReturn,
    Tab,
    /// `\xNN`, with the two digits kept verbatim (case included).
    Hex(char, char),
}

impl Escape {
    pub fn byte(self) -> u8 {
        match self {
            Escape::Backslash => b'\\',
            Escape::DoubleQuote => b'"',
            Escape::SingleQuote => b'\'',
            Escape::Newline => b'\n',
            Escape::CarriageReturn => b'\r',
            Escape::Tab => b'\t',
            Escape::Hex(hi, lo) => {
                let digit = |c: char| c.to_digit(16).expect("hex escape digit") as u8;
                digit(hi) * 16 + digit(lo)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StringElement {
    /// Any character other than `"`, `\`, carriage return or newline.
    Char(char),
    Escape(Escape),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    True,
    False,
    /// `[0-9]+`, no sign.
    DecNumber(String),
    /// Digits after the implicit `0x` prefix, case preserved.
    HexNumber(String),
    PlainString(Vec<StringElement>),
    /// Even number of hex digits between `hex"` and `"`.
    HexString(String),
}

impl Literal {
    pub fn dec(digits: impl Into<String>) -> Self {
        Literal::DecNumber(digits.into())
    }

    pub fn hex(digits: impl Into<String>) -> Self {
        Literal::HexNumber(digits.into())
    }

    /// A plain string made of raw characters only.
    pub fn string(content: &str) -> Self {
        Literal::PlainString(content.chars().map(StringElement::Char).collect())
    }

    /// The byte sequence a string literal denotes; `None` for other literals.
    pub fn string_bytes(&self) -> Option<Vec<u8>> {
        match self {
            Literal::PlainString(elements) => {
                let mut bytes = Vec::new();
                for element in elements {
                    match element {
                        StringElement::Char(c) => {
                            let mut buf = [0; 4];
                            bytes.extend_from_slice(c.encode_utf8(&mut buf).as_bytes());
                        }
                        StringElement::Escape(e) => bytes.push(e.byte()),
                    }
                }
                Some(bytes)
            }
            Literal::HexString(digits) => Some(
                digits
                    .as_bytes()
                    .chunks(2)
                    .map(|pair| {
                        let s = std::str::from_utf8(pair).expect("ascii hex digits");
                        u8::from_str_radix(s, 16).expect("hex digit pair")
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// A canonical literal for a byte string: a plain string when the bytes
    /// are UTF-8 (escaping quotes, backslashes and control characters),
    /// otherwise a hex string.
    pub fn from_string_bytes(bytes: &[u8]) -> Self {
        let Ok(text) = std::str::from_utf8(bytes) else {
            return Literal::HexString(bytes.iter().map(|b| format!("{b:02x}")).collect());
        };
        let hex_digit = |n: u32| char::from_digit(n, 16).expect("nibble");
        Literal::PlainString(
            text.chars()
                .map(|c| match c {
                    '\\' => StringElement::Escape(Escape::Backslash),
                    '"' => StringElement::Escape(Escape::DoubleQuote),
                    '\n' => StringElement::Escape(Escape::Newline),
                    '\r' => StringElement::Escape(Escape::CarriageReturn),
                    '\t' => StringElement::Escape(Escape::Tab),
                    c if (c as u32) < 0x20 || c as u32 == 0x7f => {
                        StringElement::Escape(Escape::Hex(hex_digit(c as u32 >> 4), hex_digit(c as u32 & 15)))
                    }
                    c => StringElement::Char(c),
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunCall {
    pub name: Identifier,
    pub args: Vec<Expression>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expression {
    Path(Path),
    Literal(Literal),
    FunCall(FunCall),
}

impl Expression {
    pub fn var(name: &str) -> Self {
        Expression::Path(Path::single(ident(name)))
    }

    pub fn call(name: &str, args: Vec<Expression>) -> Self {
        Expression::FunCall(FunCall {
            name: ident(name),
            args,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SwCase {
    pub value: Literal,
    pub body: Block,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Block {
    pub statements: Vec<Statement>,
}

impl Block {
    pub fn new(statements: Vec<Statement>) -> Self {
        Block { statements }
    }
}

/// A function definition. The body is shared so that function environments
/// built during execution refer to the same tree as the program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunDef {
    pub name: Identifier,
    pub inputs: Vec<Identifier>,
    pub outputs: Vec<Identifier>,
    pub body: Arc<Block>,
}

/// Statements. `VariableMulti` and `AssignMulti` always carry at least two
/// names; single names use the `*Single` variants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Block(Block),
    VariableSingle {
        name: Identifier,
        init: Option<Expression>,
    },
    VariableMulti {
        names: Vec<Identifier>,
        init: Option<FunCall>,
    },
    AssignSingle {
        target: Path,
        value: Expression,
    },
    AssignMulti {
        targets: Vec<Path>,
        value: FunCall,
    },
    FunCall(FunCall),
    If {
        test: Expression,
        body: Block,
    },
    Switch {
        target: Expression,
        cases: Vec<SwCase>,
        default: Option<Block>,
    },
    For {
        init: Block,
        test: Expression,
        update: Block,
        body: Block,
    },
    Break,
    Continue,
    Leave,
    FunDef(FunDef),
}

/// Function definitions appearing directly in `block`, in order.
pub fn hoisted_fundefs(block: &Block) -> Vec<&FunDef> {
    block
        .statements
        .iter()
        .filter_map(|s| match s {
            Statement::FunDef(def) => Some(def),
            _ => None,
        })
        .collect()
}

/// Names of all variables declared (including function parameters and
/// results) and all functions defined anywhere in `block`.
pub fn declared_names(block: &Block) -> (BTreeSet<Identifier>, BTreeSet<Identifier>) {
    let mut vars = BTreeSet::new();
    let mut funs = BTreeSet::new();
    collect_block(block, &mut vars, &mut funs);
    (vars, funs)
}

fn collect_block(block: &Block, vars: &mut BTreeSet<Identifier>, funs: &mut BTreeSet<Identifier>) {
    for stmt in &block.statements {
        collect_statement(stmt, vars, funs);
    }
}

fn collect_statement(
    stmt: &Statement,
    vars: &mut BTreeSet<Identifier>,
    funs: &mut BTreeSet<Identifier>,
) {
    match stmt {
        Statement::Block(b) => collect_block(b, vars, funs),
        Statement::VariableSingle { name, .. } => {
            vars.insert(name.clone());
        }
        Statement::VariableMulti { names, .. } => vars.extend(names.iter().cloned()),
        Statement::If { body, .. } => collect_block(body, vars, funs),
        Statement::Switch { cases, default, .. } => {
            for case in cases {
                collect_block(&case.body, vars, funs);
            }
            if let Some(d) = default {
                collect_block(d, vars, funs);
            }
        }
        Statement::For {
            init, update, body, ..
        } => {
            collect_block(init, vars, funs);
            collect_block(update, vars, funs);
            collect_block(body, vars, funs);
        }
        Statement::FunDef(def) => {
            funs.insert(def.name.clone());
            vars.extend(def.inputs.iter().cloned());
            vars.extend(def.outputs.iter().cloned());
            collect_block(&def.body, vars, funs);
        }
        Statement::AssignSingle { .. }
        | Statement::AssignMulti { .. }
        | Statement::FunCall(_)
        | Statement::Break
        | Statement::Continue
        | Statement::Leave => {}
    }
}

// ---------------------------------------------------------------------------
// Printing

/// Output layout. `Compact` is the canonical one-line form; `Indented`
/// spreads blocks over lines for reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Compact,
    Indented,
}

struct Printer<'w, W: fmt::Write> {
    out: &'w mut W,
    layout: Layout,
    depth: usize,
}

impl<W: fmt::Write> Printer<'_, W> {
    fn block(&mut self, block: &Block) -> fmt::Result {
        if block.statements.is_empty() {
            return self.out.write_str("{ }");
        }
        match self.layout {
            Layout::Compact => {
                self.out.write_str("{")?;
                for stmt in &block.statements {
                    self.out.write_str(" ")?;
                    self.statement(stmt)?;
                }
                self.out.write_str(" }")
            }
            Layout::Indented => {
                self.out.write_str("{\n")?;
                self.depth += 1;
                for stmt in &block.statements {
                    for _ in 0..self.depth {
                        self.out.write_str("    ")?;
                    }
                    self.statement(stmt)?;
                    self.out.write_str("\n")?;
                }
                self.depth -= 1;
                for _ in 0..self.depth {
                    self.out.write_str("    ")?;
                }
                self.out.write_str("}")
            }
        }
    }

    fn names(&mut self, names: &[Identifier]) -> fmt::Result {
        for (i, name) in names.iter().enumerate() {
            if i > 0 {
                self.out.write_str(", ")?;
            }
            write!(self.out, "{name}")?;
        }
        Ok(())
    }

    fn statement(&mut self, stmt: &Statement) -> fmt::Result {
        match stmt {
            Statement::Block(b) => self.block(b),
            Statement::VariableSingle { name, init } => {
                write!(self.out, "let {name}")?;
                if let Some(e) = init {
                    write!(self.out, " := {e}")?;
                }
                Ok(())
            }
            Statement::VariableMulti { names, init } => {
                self.out.write_str("let ")?;
                self.names(names)?;
                if let Some(call) = init {
                    write!(self.out, " := {call}")?;
                }
                Ok(())
            }
            Statement::AssignSingle { target, value } => write!(self.out, "{target} := {value}"),
            Statement::AssignMulti { targets, value } => {
                for (i, t) in targets.iter().enumerate() {
                    if i > 0 {
                        self.out.write_str(", ")?;
                    }
                    write!(self.out, "{t}")?;
                }
                write!(self.out, " := {value}")
            }
            Statement::FunCall(call) => write!(self.out, "{call}"),
            Statement::If { test, body } => {
                write!(self.out, "if {test} ")?;
                self.block(body)
            }
            Statement::Switch {
                target,
                cases,
                default,
            } => {
                write!(self.out, "switch {target}")?;
                for case in cases {
                    write!(self.out, " case {} ", case.value)?;
                    self.block(&case.body)?;
                }
                if let Some(d) = default {
                    self.out.write_str(" default ")?;
                    self.block(d)?;
                }
                Ok(())
            }
            Statement::For {
                init,
                test,
                update,
                body,
            } => {
                self.out.write_str("for ")?;
                self.block(init)?;
                write!(self.out, " {test} ")?;
                self.block(update)?;
                self.out.write_str(" ")?;
                self.block(body)
            }
            Statement::Break => self.out.write_str("break"),
            Statement::Continue => self.out.write_str("continue"),
            Statement::Leave => self.out.write_str("leave"),
            Statement::FunDef(def) => {
                write!(self.out, "function {}(", def.name)?;
                self.names(&def.inputs)?;
                self.out.write_str(")")?;
                if !def.outputs.is_empty() {
                    self.out.write_str(" -> ")?;
                    self.names(&def.outputs)?;
                }
                self.out.write_str(" ")?;
                self.block(&def.body)
            }
        }
    }
}

/// Renders a block in the chosen layout. Both layouts parse back to the same tree.
pub fn print_block(block: &Block, layout: Layout) -> String {
    let mut out = String::new();
    Printer {
        out: &mut out,
        layout,
        depth: 0,
    }
    .block(block)
    .expect("writing to a String cannot fail");
    out
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Escape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Escape::Backslash => f.write_str("\\\\"),
            Escape::DoubleQuote => f.write_str("\\\""),
            Escape::SingleQuote => f.write_str("\\'"),
            Escape::Newline => f.write_str("\\n"),
            Escape::CarriageReturn => f.write_str("\\r"),
            Escape::Tab => f.write_str("\\t"),
            Escape::Hex(hi, lo) => write!(f, "\\x{hi}{lo}"),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::True => f.write_str("true"),
            Literal::False => f.write_str("false"),
            Literal::DecNumber(d) => f.write_str(d),
            Literal::HexNumber(d) => write!(f, "0x{d}"),
            Literal::PlainString(elements) => {
                f.write_str("\"")?;
                for element in elements {
                    match element {
                        StringElement::Char(c) => write!(f, "{c}")?,
                        StringElement::Escape(e) => write!(f, "{e}")?,
                    }
                }
                f.write_str("\"")
            }
            Literal::HexString(d) => write!(f, "hex\"{d}\""),
        }
    }
}

impl fmt::Display for FunCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Path(p) => write!(f, "{p}"),
            Expression::Literal(l) => write!(f, "{l}"),
            Expression::FunCall(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer {
            out: f,
            layout: Layout::Compact,
            depth: 0,
        }
        .statement(self)
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer {
            out: f,
            layout: Layout::Compact,
            depth: 0,
        }
        .block(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn listing_block() -> Block {
        // { let x  function f() { function h() { } let y { let z } }
        //   function g() { let y function h() { } } }
        let h = |body| {
            Statement::FunDef(FunDef {
                name: ident("h"),
                inputs: vec![],
                outputs: vec![],
                body: Arc::new(body),
            })
        };
        let let_ = |n: &str| Statement::VariableSingle {
            name: ident(n),
            init: None,
        };
        let f = Statement::FunDef(FunDef {
            name: ident("f"),
            inputs: vec![],
            outputs: vec![],
            body: Arc::new(Block::new(vec![
                h(Block::default()),
                let_("y"),
                Statement::Block(Block::new(vec![let_("z")])),
            ])),
        });
        let g = Statement::FunDef(FunDef {
            name: ident("g"),
            inputs: vec![],
            outputs: vec![],
            body: Arc::new(Block::new(vec![let_("y"), h(Block::default())])),
        });
        Block::new(vec![let_("x"), f, g])
    }

    #[test]
    fn identifiers_reject_keywords_and_bad_chars() {
        assert!(Identifier::new("x_1$").is_ok());
        assert!(Identifier::new("$x").is_ok());
        assert_eq!(Identifier::new("let").unwrap_err().reason, "keyword");
        assert!(Identifier::new("1x").is_err());
        assert!(Identifier::new("a.b").is_err());
        assert!(Identifier::new("").is_err());
    }

    #[test]
    fn prints_declarations_and_assignments() {
        let decl = Statement::VariableSingle {
            name: ident("x"),
            init: None,
        };
        assert_eq!(decl.to_string(), "let x");
        let assign = Statement::AssignSingle {
            target: Path::single(ident("x")),
            value: Expression::Literal(Literal::dec("17")),
        };
        assert_eq!(assign.to_string(), "x := 17");
        assert_eq!(Block::default().to_string(), "{ }");
    }

    #[test]
    fn prints_literals_verbatim() {
        assert_eq!(Literal::hex("FF0012").to_string(), "0xFF0012");
        assert_eq!(Literal::HexString("90a4".into()).to_string(), "hex\"90a4\"");
        let s = Literal::PlainString(vec![
            StringElement::Char('a'),
            StringElement::Escape(Escape::DoubleQuote),
            StringElement::Escape(Escape::Hex('A', 'b')),
        ]);
        assert_eq!(s.to_string(), "\"a\\\"\\xAb\"");
        assert_eq!(s.string_bytes().unwrap(), vec![b'a', b'"', 0xab]);
    }

    #[test]
    fn declared_names_of_scoping_listing() {
        let (vars, funs) = declared_names(&listing_block());
        let names = |s: &BTreeSet<Identifier>| s.iter().map(|i| i.to_string()).collect::<Vec<_>>();
        assert_eq!(names(&vars), ["x", "y", "z"]);
        assert_eq!(names(&funs), ["f", "g", "h"]);
        assert_eq!(declared_names(&Block::default()), Default::default());

        let twice = Block::new(vec![
            Statement::VariableSingle {
                name: ident("a"),
                init: None,
            };
            2
        ]);
        let (vars, funs) = declared_names(&twice);
        assert_eq!(vars.len(), 1);
        assert!(funs.is_empty());
    }

    #[test]
    fn hoisting_takes_direct_definitions_only() {
        let block = listing_block();
        let names: Vec<_> = hoisted_fundefs(&block)
            .iter()
            .map(|d| d.name.to_string())
            .collect();
        assert_eq!(names, ["f", "g"]);

        let Statement::FunDef(g) = &block.statements[2] else {
            unreachable!()
        };
        let inner: Vec<_> = hoisted_fundefs(&g.body)
            .iter()
            .map(|d| d.name.to_string())
            .collect();
        assert_eq!(inner, ["h"]);

        let nested = Block::new(vec![Statement::If {
            test: Expression::var("c"),
            body: Block::new(vec![Statement::FunDef(FunDef {
                name: ident("f"),
                inputs: vec![],
                outputs: vec![],
                body: Arc::default(),
            })]),
        }]);
        assert!(hoisted_fundefs(&nested).is_empty());
    }

    #[test]
    fn indented_layout() {
        let text = print_block(&listing_block(), Layout::Indented);
        assert!(text.starts_with("{\n    let x\n    function f() {\n        function h() { }\n"));
    }
}
