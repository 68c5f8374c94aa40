use std::sync::Arc;

use super::*;
use crate::ast::{ident, Escape, Expression, FunCall, FunDef, Path, Statement, StringElement};

const SCOPING: &str = include_str!("../../tests/fixtures/yul/scoping.yul");

fn kinds(source: &str) -> Vec<TokenKind> {
    lex(source).unwrap().into_iter().map(|t| t.kind).collect()
}

fn let_(name: &str) -> Statement {
    Statement::VariableSingle {
        name: ident(name),
        init: None,
    }
}

fn fundef(name: &str, body: Vec<Statement>) -> Statement {
    Statement::FunDef(FunDef {
        name: ident(name),
        inputs: vec![],
        outputs: vec![],
        body: Arc::new(Block::new(body)),
    })
}

#[test]
fn longest_match_makes_one_identifier() {
    assert_eq!(kinds("xy"), [TokenKind::Ident(ident("xy"))]);
    assert_eq!(kinds("letx"), [TokenKind::Ident(ident("letx"))]);
    assert_eq!(kinds("let x"), [TokenKind::Keyword(Keyword::Let), TokenKind::Ident(ident("x"))]);
}

#[test]
fn lexes_declaration_with_hex_number() {
    assert_eq!(
        kinds("let x := 0xff0012"),
        [
            TokenKind::Keyword(Keyword::Let),
            TokenKind::Ident(ident("x")),
            TokenKind::Symbol(Symbol::Assign),
            TokenKind::Literal(Literal::hex("ff0012")),
        ]
    );
    assert!(kinds("").is_empty());
    assert!(kinds("  // only a comment\n /* and\n another */ ").is_empty());
}

#[test]
fn lexes_string_forms() {
    assert_eq!(
        kinds(r#""a\"\x0A" hex"90a4""#),
        [
            TokenKind::Literal(Literal::PlainString(vec![
                StringElement::Char('a'),
                StringElement::Escape(Escape::DoubleQuote),
                StringElement::Escape(Escape::Hex('0', 'A')),
            ])),
            TokenKind::Literal(Literal::HexString("90a4".into())),
        ]
    );
    // `hex` separated from the quote is an identifier followed by a string.
    assert_eq!(kinds(r#"hex "ab""#)[0], TokenKind::Ident(ident("hex")));
}

#[test]
fn lex_errors() {
    let err = lex("\"abc").unwrap_err();
    assert_eq!((err.line, err.column), (1, 5));
    assert!(lex("/* never closed").is_err());
    assert!(lex("let x := 5 # 3").unwrap_err().found.contains("illegal character"));
    assert!(lex("hex\"abc\"").unwrap_err().expected.contains("even"));
    assert!(lex("\"\\u0041\"").unwrap_err().found.contains("\\u"));
    assert!(lex("0123").is_err());
    assert!(lex("0").is_ok());
    assert!(lex("12ab").is_err());
    assert!(lex("0x").is_err());
    let typed = lex("let x:u256").unwrap_err();
    assert!(typed.expected.contains("typed"));
    let second_line = lex("{\n  @").unwrap_err();
    assert_eq!((second_line.line, second_line.column), (2, 3));
}

#[test]
fn parses_scoping_shape() {
    assert_eq!(
        parse_program("{ let x function f () { } }").unwrap(),
        Block::new(vec![let_("x"), fundef("f", vec![])])
    );
    assert_eq!(parse_program("{ }").unwrap(), Block::default());
    assert_eq!(parse_program("{ leave }").unwrap(), Block::new(vec![Statement::Leave]));
}

#[test]
fn parses_for_loop() {
    let block = parse_program("{ for { let i } lt(i, n) { } { } }").unwrap();
    let expected = Statement::For {
        init: Block::new(vec![let_("i")]),
        test: Expression::call("lt", vec![Expression::var("i"), Expression::var("n")]),
        update: Block::default(),
        body: Block::default(),
    };
    assert_eq!(block.statements, [expected.clone()]);
    assert_eq!(expected.to_string(), "for { let i } lt(i, n) { } { }");
    let tokens = lex(&expected.to_string()).unwrap();
    assert_eq!(parse_statement(&tokens).unwrap(), expected);
}

#[test]
fn parses_full_scoping_listing() {
    let expected = Block::new(vec![
        let_("x"),
        fundef(
            "f",
            vec![
                fundef("h", vec![]),
                let_("y"),
                Statement::Block(Block::new(vec![let_("z")])),
            ],
        ),
        fundef("g", vec![let_("y"), fundef("h", vec![])]),
    ]);
    assert_eq!(parse_program(SCOPING).unwrap(), expected);
}

#[test]
fn rejects_trailing_tokens() {
    let err = parse_program("{ } {").unwrap_err();
    assert_eq!((err.line, err.column), (1, 5));
    assert_eq!(err.expected, "end of input");
}

#[test]
fn single_and_multi_forms() {
    let block = parse_program("{ let a, b := f() a, b := g(1) a := b let c := add(a, b) }").unwrap();
    assert!(matches!(&block.statements[0], Statement::VariableMulti { names, init: Some(_) } if names.len() == 2));
    assert!(matches!(&block.statements[1], Statement::AssignMulti { targets, .. } if targets.len() == 2));
    assert!(matches!(&block.statements[2], Statement::AssignSingle { .. }));
    assert!(matches!(&block.statements[3], Statement::VariableSingle { init: Some(Expression::FunCall(_)), .. }));

    assert!(parse_program("{ let a, b := 1 }").is_err());
    assert!(parse_program("{ a, b := c }").is_err());
    assert!(matches!(
        parse_program("{ let a, b }").unwrap().statements[0],
        Statement::VariableMulti { init: None, .. }
    ));
}

#[test]
fn paths_and_calls() {
    let block = parse_program("{ a.b := c.d }").unwrap();
    let path = |parts: &[&str]| Path::new(parts.iter().map(|p| ident(p)).collect()).unwrap();
    assert_eq!(
        block.statements[0],
        Statement::AssignSingle {
            target: path(&["a", "b"]),
            value: Expression::Path(path(&["c", "d"])),
        }
    );
    assert!(parse_program("{ a.b() }").is_err());
    assert_eq!(
        parse_program("{ f() }").unwrap().statements[0],
        Statement::FunCall(FunCall {
            name: ident("f"),
            args: vec![]
        })
    );
}

#[test]
fn switch_requires_a_branch() {
    assert!(parse_program("{ switch x }").is_err());
    let block = parse_program("{ switch x case 0 { } case \"a\" { } default { } }").unwrap();
    let Statement::Switch { cases, default, .. } = &block.statements[0] else {
        panic!("not a switch")
    };
    assert_eq!(cases.len(), 2);
    assert!(default.is_some());
    assert!(parse_program("{ switch x default { } case 1 { } }").is_err());
    assert!(parse_program("{ switch x default { } }").is_ok());
}

#[test]
fn functions_with_parameters() {
    let block = parse_program("{ function f(a, b) -> c, d { c := a } }").unwrap();
    let Statement::FunDef(def) = &block.statements[0] else {
        panic!("not a function")
    };
    assert_eq!(def.inputs, [ident("a"), ident("b")]);
    assert_eq!(def.outputs, [ident("c"), ident("d")]);
    assert!(parse_program("{ function f() -> { } }").is_err());
    assert!(parse_program("{ function let() { } }").is_err());
}

#[test]
fn expressions_are_not_statements() {
    assert!(parse_program("{ 1 }").is_err());
    assert!(parse_program("{ x }").is_err());
    assert!(parse_program("{ true }").is_err());
}

#[test]
fn nesting_limit_is_an_error() {
    // Deep trees need more stack than a default test thread has.
    std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(|| {
            let deep = format!("{}{}", "{ ".repeat(MAX_NESTING + 1), "} ".repeat(MAX_NESTING + 1));
            let err = parse_program(&deep).unwrap_err();
            assert!(err.expected.contains("nesting"));
            let ok = format!("{}{}", "{ ".repeat(MAX_NESTING), "} ".repeat(MAX_NESTING));
            assert!(parse_program(&ok).is_ok());

            let call_depth = MAX_NESTING + 5;
            let deep_call = format!("{{ let x := {}0{} }}", "f(".repeat(call_depth), ")".repeat(call_depth));
            assert!(parse_program(&deep_call).is_err());
        })
        .unwrap()
        .join()
        .unwrap();
}

#[test]
fn parse_expression_entry_point() {
    let tokens = lex("add(0x1, \"ab\")").unwrap();
    assert_eq!(
        parse_expression(&tokens).unwrap(),
        Expression::call(
            "add",
            vec![
                Expression::Literal(Literal::hex("1")),
                Expression::Literal(Literal::string("ab")),
            ]
        )
    );
}
