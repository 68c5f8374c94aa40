use std::iter::Peekable;
use std::str::Chars;

use super::{Keyword, ParseError, Symbol, Token, TokenKind};
use crate::ast::{is_identifier_continue, is_identifier_start, Escape, Identifier, Literal, StringElement};

struct Cursor<'s> {
    chars: Peekable<Chars<'s>>,
    rest: &'s str,
    line: u32,
    column: u32,
}

impl<'s> Cursor<'s> {
    fn new(source: &'s str) -> Self {
        Cursor {
            chars: source.chars().peekable(),
            rest: source,
            line: 1,
            column: 1,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn starts_with(&self, prefix: &str) -> bool {
        self.rest.starts_with(prefix)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.rest = &self.rest[c.len_utf8()..];
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, expected: &str, found: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            expected: expected.to_string(),
            found: found.into(),
        }
    }

    fn found_here(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        }
    }
}

/// Splits `source` into tokens, dropping whitespace and comments.
pub fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor::new(source);
    let mut tokens = Vec::new();
    loop {
        skip_trivia(&mut cur)?;
        let (line, column) = (cur.line, cur.column);
        let Some(c) = cur.peek() else { break };
        let kind = if is_identifier_start(c) {
            word(&mut cur)?
        } else if c.is_ascii_digit() {
            number(&mut cur)?
        } else if c == '"' {
            cur.bump();
            TokenKind::Literal(Literal::PlainString(string_body(&mut cur)?))
        } else {
            symbol(&mut cur)?
        };
        tokens.push(Token { kind, line, column });
    }
    Ok(tokens)
}

fn skip_trivia(cur: &mut Cursor<'_>) -> Result<(), ParseError> {
    loop {
        match cur.peek() {
            Some(' ' | '\t' | '\n' | '\r') => {
                cur.bump();
            }
            Some('/') if cur.starts_with("//") => {
                while !matches!(cur.peek(), None | Some('\n')) {
                    cur.bump();
                }
            }
            Some('/') if cur.starts_with("/*") => {
                let (line, column) = (cur.line, cur.column);
                cur.bump();
                cur.bump();
                loop {
                    if cur.starts_with("*/") {
                        cur.bump();
                        cur.bump();
                        break;
                    }
                    if cur.bump().is_none() {
                        return Err(ParseError {
                            line,
                            column,
                            expected: "`*/` closing the block comment".into(),
                            found: "end of input".into(),
                        });
                    }
                }
            }
            _ => return Ok(()),
        }
    }
}

fn word(cur: &mut Cursor<'_>) -> Result<TokenKind, ParseError> {
    let mut text = String::new();
    while let Some(c) = cur.peek().filter(|&c| is_identifier_continue(c)) {
        text.push(c);
        cur.bump();
    }
    if text == "hex" && cur.peek() == Some('"') {
        cur.bump();
        return hex_string_body(cur).map(|digits| TokenKind::Literal(Literal::HexString(digits)));
    }
    Ok(match Keyword::from_word(&text) {
        Some(k) => TokenKind::Keyword(k),
        None => TokenKind::Ident(Identifier::new(text).expect("lexed identifier is valid")),
    })
}

fn number(cur: &mut Cursor<'_>) -> Result<TokenKind, ParseError> {
    let literal = if cur.starts_with("0x") {
        cur.bump();
        cur.bump();
        let mut digits = String::new();
        while let Some(c) = cur.peek().filter(char::is_ascii_hexdigit) {
            digits.push(c);
            cur.bump();
        }
        if digits.is_empty() {
            let found = cur.found_here();
            return Err(cur.error("hexadecimal digit after `0x`", found));
        }
        Literal::HexNumber(digits)
    } else {
        let mut digits = String::new();
        while let Some(c) = cur.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            cur.bump();
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(cur.error("decimal number without leading zeros", digits));
        }
        Literal::DecNumber(digits)
    };
    if cur.peek().is_some_and(is_identifier_continue) {
        let found = cur.found_here();
        return Err(cur.error("end of number literal", found));
    }
    Ok(TokenKind::Literal(literal))
}

/// Content of a plain string; the opening quote is already consumed.
fn string_body(cur: &mut Cursor<'_>) -> Result<Vec<StringElement>, ParseError> {
    let mut elements = Vec::new();
    loop {
        match cur.peek() {
            None | Some('\n' | '\r') => {
                let found = cur.found_here();
                return Err(cur.error("`\"` closing the string literal", found));
            }
            Some('"') => {
                cur.bump();
                return Ok(elements);
            }
            Some('\\') => {
                cur.bump();
                let escape = match cur.peek() {
                    Some('\\') => Escape::Backslash,
                    Some('"') => Escape::DoubleQuote,
                    Some('\'') => Escape::SingleQuote,
                    Some('n') => Escape::Newline,
                    Some('r') => Escape::CarriageReturn,
                    Some('t') => Escape::Tab,
                    Some('x') => {
                        cur.bump();
                        let mut digits = ['0'; 2];
                        for d in &mut digits {
                            match cur.peek().filter(char::is_ascii_hexdigit) {
                                Some(c) => {
                                    *d = c;
                                    cur.bump();
                                }
                                None => {
                                    let found = cur.found_here();
                                    return Err(cur.error("two hex digits after `\\x`", found));
                                }
                            }
                        }
                        elements.push(StringElement::Escape(Escape::Hex(digits[0], digits[1])));
                        continue;
                    }
                    Some('u') => return Err(cur.error("supported escape", "unsupported `\\u` escape")),
                    _ => {
                        let found = cur.found_here();
                        return Err(cur.error("escape character", found));
                    }
                };
                cur.bump();
                elements.push(StringElement::Escape(escape));
            }
            Some(c) => {
                cur.bump();
                elements.push(StringElement::Char(c));
            }
        }
    }
}

/// Digits of `hex"..."`; the opening quote is already consumed.
fn hex_string_body(cur: &mut Cursor<'_>) -> Result<String, ParseError> {
    let (line, column) = (cur.line, cur.column);
    let mut digits = String::new();
    loop {
        match cur.peek() {
            Some('"') => {
                cur.bump();
                break;
            }
            Some(c) if c.is_ascii_hexdigit() => {
                digits.push(c);
                cur.bump();
            }
            _ => {
                let found = cur.found_here();
                return Err(cur.error("hex digit or `\"` in hex string", found));
            }
        }
    }
    if digits.len() % 2 != 0 {
        return Err(ParseError {
            line,
            column,
            expected: "an even number of hex digits".into(),
            found: format!("{} digits", digits.len()),
        });
    }
    Ok(digits)
}

fn symbol(cur: &mut Cursor<'_>) -> Result<TokenKind, ParseError> {
    let c = cur.peek().expect("caller checked input is not empty");
    let single = match c {
        '{' => Some(Symbol::LBrace),
        '}' => Some(Symbol::RBrace),
        '(' => Some(Symbol::LParen),
        ')' => Some(Symbol::RParen),
        ',' => Some(Symbol::Comma),
        '.' => Some(Symbol::Dot),
        _ => None,
    };
    if let Some(s) = single {
        cur.bump();
        return Ok(TokenKind::Symbol(s));
    }
    if cur.starts_with("->") || cur.starts_with(":=") {
        let s = if c == '-' { Symbol::Arrow } else { Symbol::Assign };
        cur.bump();
        cur.bump();
        return Ok(TokenKind::Symbol(s));
    }
    if c == ':' {
        return Err(cur.error("`:=` (typed names are not supported)", "`:`"));
    }
    Err(cur.error("token", format!("illegal character {c:?}")))
}
