//! Concrete syntax: lexing and recursive-descent parsing of Yul source text.
//!
//! The accepted language is the current, untyped Yul grammar. The lexer takes
//! the longest lexeme at each point and never turns a keyword into an
//! identifier. Yul `object` wrappers are not accepted.

mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::ast::{Block, Identifier, Literal};

pub use lexer::lex;
pub use parser::{parse_block, parse_expression, parse_statement, MAX_NESTING};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keyword {
    Let,
    Function,
    If,
    Switch,
    Case,
    Default,
    For,
    Break,
    Continue,
    Leave,
    True,
    False,
}

impl Keyword {
    pub fn from_word(word: &str) -> Option<Self> {
        Some(match word {
            "let" => Keyword::Let,
            "function" => Keyword::Function,
            "if" => Keyword::If,
            "switch" => Keyword::Switch,
            "case" => Keyword::Case,
            "default" => Keyword::Default,
            "for" => Keyword::For,
            "break" => Keyword::Break,
            "continue" => Keyword::Continue,
            "leave" => Keyword::Leave,
            "true" => Keyword::True,
            "false" => Keyword::False,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Let => "let",
            Keyword::Function => "function",
            Keyword::If => "if",
            Keyword::Switch => "switch",
            Keyword::Case => "case",
            Keyword::Default => "default",
            Keyword::For => "for",
            Keyword::Break => "break",
            Keyword::Continue => "continue",
            Keyword::Leave => "leave",
            Keyword::True => "true",
            Keyword::False => "false",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Arrow,
    Assign,
    Dot,
}

impl Symbol {
    pub fn as_str(self) -> &'static str {
        match self {
            Symbol::LBrace => "{",
            Symbol::RBrace => "}",
            Symbol::LParen => "(",
            Symbol::RParen => ")",
            Symbol::Comma => ",",
            Symbol::Arrow => "->",
            Symbol::Assign => ":=",
            Symbol::Dot => ".",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Keyword(Keyword),
    Ident(Identifier),
    Literal(Literal),
    Symbol(Symbol),
}

impl fmt::Display for TokenKind {
    /// The lexeme text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Keyword(k) => f.write_str(k.as_str()),
            TokenKind::Ident(id) => write!(f, "{id}"),
            TokenKind::Literal(lit) => write!(f, "{lit}"),
            TokenKind::Symbol(s) => f.write_str(s.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub kind: TokenKind,
    pub line: u32,
    pub column: u32,
}

/// First violation found while lexing or parsing. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub expected: String,
    pub found: String,
}

/// Lexes and parses one top-level block, requiring all input to be consumed.
pub fn parse_program(source: &str) -> Result<Block, ParseError> {
    let tokens = lex(source)?;
    parse_block(&tokens)
}

#[cfg(test)]
mod tests;
