use std::sync::Arc;

use super::{Keyword, ParseError, Symbol, Token, TokenKind};
use crate::ast::{Block, Expression, FunCall, FunDef, Identifier, Literal, Path, Statement, SwCase};

/// Deepest nesting of blocks and expressions the parser accepts.
pub const MAX_NESTING: usize = 1024;

type Result<T> = std::result::Result<T, ParseError>;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    depth: usize,
}

/// Parses a block from `tokens`, which must contain nothing else.
pub fn parse_block(tokens: &[Token]) -> Result<Block> {
    complete(tokens, Parser::block)
}

pub fn parse_statement(tokens: &[Token]) -> Result<Statement> {
    complete(tokens, Parser::statement)
}

pub fn parse_expression(tokens: &[Token]) -> Result<Expression> {
    complete(tokens, Parser::expression)
}

fn complete<'t, T>(tokens: &'t [Token], f: impl FnOnce(&mut Parser<'t>) -> Result<T>) -> Result<T> {
    let mut p = Parser {
        tokens,
        pos: 0,
        depth: 0,
    };
    let node = f(&mut p)?;
    if p.pos < tokens.len() {
        return Err(p.error("end of input"));
    }
    Ok(node)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&TokenKind> {
        self.tokens.get(self.pos + offset).map(|t| &t.kind)
    }

    fn error(&self, expected: &str) -> ParseError {
        let (line, column, found) = match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.column, format!("`{}`", t.kind)),
            None => match self.tokens.last() {
                Some(t) => (t.line, t.column + t.kind.to_string().chars().count() as u32, "end of input".to_string()),
                None => (1, 1, "end of input".to_string()),
            },
        };
        ParseError {
            line,
            column,
            expected: expected.to_string(),
            found,
        }
    }

    fn at_symbol(&self, s: Symbol) -> bool {
        self.peek() == Some(&TokenKind::Symbol(s))
    }

    fn eat_symbol(&mut self, s: Symbol) -> bool {
        if self.at_symbol(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_symbol(&mut self, s: Symbol) -> Result<()> {
        if self.eat_symbol(s) {
            Ok(())
        } else {
            Err(self.error(&format!("`{}`", s.as_str())))
        }
    }

    fn eat_keyword(&mut self, k: Keyword) -> bool {
        if self.peek() == Some(&TokenKind::Keyword(k)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn identifier(&mut self) -> Result<Identifier> {
        match self.peek() {
            Some(TokenKind::Ident(id)) => {
                let id = id.clone();
                self.pos += 1;
                Ok(id)
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        if self.depth >= MAX_NESTING {
            return Err(self.error(&format!("at most {MAX_NESTING} levels of nesting")));
        }
        self.depth += 1;
        let result = f(self);
        self.depth -= 1;
        result
    }

    fn block(&mut self) -> Result<Block> {
        self.nested(|p| {
            p.expect_symbol(Symbol::LBrace)?;
            let mut statements = Vec::new();
            while !p.eat_symbol(Symbol::RBrace) {
                if p.peek().is_none() {
                    return Err(p.error("`}`"));
                }
                statements.push(p.statement()?);
            }
            Ok(Block { statements })
        })
    }

    fn statement(&mut self) -> Result<Statement> {
        let Some(kind) = self.peek() else {
            return Err(self.error("statement"));
        };
        match kind {
            TokenKind::Symbol(Symbol::LBrace) => self.block().map(Statement::Block),
            TokenKind::Keyword(Keyword::Let) => {
                self.pos += 1;
                self.declaration()
            }
            TokenKind::Keyword(Keyword::Function) => {
                self.pos += 1;
                self.function_definition()
            }
            TokenKind::Keyword(Keyword::If) => {
                self.pos += 1;
                let test = self.expression()?;
                let body = self.block()?;
                Ok(Statement::If { test, body })
            }
            TokenKind::Keyword(Keyword::Switch) => {
                self.pos += 1;
                self.switch()
            }
            TokenKind::Keyword(Keyword::For) => {
                self.pos += 1;
                let init = self.block()?;
                let test = self.expression()?;
                let update = self.block()?;
                let body = self.block()?;
                Ok(Statement::For {
                    init,
                    test,
                    update,
                    body,
                })
            }
            TokenKind::Keyword(Keyword::Break) => {
                self.pos += 1;
                Ok(Statement::Break)
            }
            TokenKind::Keyword(Keyword::Continue) => {
                self.pos += 1;
                Ok(Statement::Continue)
            }
            TokenKind::Keyword(Keyword::Leave) => {
                self.pos += 1;
                Ok(Statement::Leave)
            }
            TokenKind::Ident(_) => self.call_or_assignment(),
            _ => Err(self.error("statement")),
        }
    }

    /// After `let`.
    fn declaration(&mut self) -> Result<Statement> {
        let mut names = vec![self.identifier()?];
        while self.eat_symbol(Symbol::Comma) {
            names.push(self.identifier()?);
        }
        let init = if self.eat_symbol(Symbol::Assign) {
            Some(self.expression_or_call(names.len() > 1)?)
        } else {
            None
        };
        if names.len() == 1 {
            let name = names.pop().expect("one name");
            return Ok(Statement::VariableSingle { name, init });
        }
        let init = init.map(|e| match e {
            Expression::FunCall(call) => call,
            _ => unreachable!("expression_or_call(true) yields calls only"),
        });
        Ok(Statement::VariableMulti { names, init })
    }

    /// Parses an expression; with `call_only` it must be a function call.
    fn expression_or_call(&mut self, call_only: bool) -> Result<Expression> {
        let start = self.pos;
        let expr = self.expression()?;
        if call_only && !matches!(expr, Expression::FunCall(_)) {
            self.pos = start;
            return Err(self.error("function call initializing several variables"));
        }
        Ok(expr)
    }

    fn path(&mut self) -> Result<Path> {
        let mut parts = vec![self.identifier()?];
        while self.eat_symbol(Symbol::Dot) {
            parts.push(self.identifier()?);
        }
        Ok(Path::new(parts).expect("at least one part"))
    }

    fn call_or_assignment(&mut self) -> Result<Statement> {
        if let (Some(TokenKind::Ident(_)), Some(TokenKind::Symbol(Symbol::LParen))) =
            (self.peek(), self.peek_at(1))
        {
            return self.call().map(Statement::FunCall);
        }
        let first = self.path()?;
        if self.at_symbol(Symbol::LParen) {
            return Err(self.error("`:=` or `,` (a function name cannot contain dots)"));
        }
        if self.eat_symbol(Symbol::Assign) {
            let value = self.expression()?;
            return Ok(Statement::AssignSingle {
                target: first,
                value,
            });
        }
        if !self.at_symbol(Symbol::Comma) {
            return Err(self.error("`:=`, `,` or `(`"));
        }
        let mut targets = vec![first];
        while self.eat_symbol(Symbol::Comma) {
            targets.push(self.path()?);
        }
        self.expect_symbol(Symbol::Assign)?;
        match self.expression_or_call(true)? {
            Expression::FunCall(value) => Ok(Statement::AssignMulti { targets, value }),
            _ => unreachable!("expression_or_call(true) yields calls only"),
        }
    }

    /// After `function`.
    fn function_definition(&mut self) -> Result<Statement> {
        let name = self.identifier()?;
        self.expect_symbol(Symbol::LParen)?;
        let mut inputs = Vec::new();
        if !self.eat_symbol(Symbol::RParen) {
            inputs.push(self.identifier()?);
            while self.eat_symbol(Symbol::Comma) {
                inputs.push(self.identifier()?);
            }
            self.expect_symbol(Symbol::RParen)?;
        }
        let mut outputs = Vec::new();
        if self.eat_symbol(Symbol::Arrow) {
            outputs.push(self.identifier()?);
            while self.eat_symbol(Symbol::Comma) {
                outputs.push(self.identifier()?);
            }
        }
        let body = self.block()?;
        Ok(Statement::FunDef(FunDef {
            name,
            inputs,
            outputs,
            body: Arc::new(body),
        }))
    }

    /// After `switch`.
    fn switch(&mut self) -> Result<Statement> {
        let target = self.expression()?;
        let mut cases = Vec::new();
        while self.eat_keyword(Keyword::Case) {
            let value = self.literal()?;
            let body = self.block()?;
            cases.push(SwCase { value, body });
        }
        let default = if self.eat_keyword(Keyword::Default) {
            Some(self.block()?)
        } else {
            None
        };
        if cases.is_empty() && default.is_none() {
            return Err(self.error("`case` or `default`"));
        }
        Ok(Statement::Switch {
            target,
            cases,
            default,
        })
    }

    fn literal(&mut self) -> Result<Literal> {
        let lit = match self.peek() {
            Some(TokenKind::Literal(lit)) => lit.clone(),
            Some(TokenKind::Keyword(Keyword::True)) => Literal::True,
            Some(TokenKind::Keyword(Keyword::False)) => Literal::False,
            _ => return Err(self.error("literal")),
        };
        self.pos += 1;
        Ok(lit)
    }

    fn call(&mut self) -> Result<FunCall> {
        let name = self.identifier()?;
        self.expect_symbol(Symbol::LParen)?;
        let mut args = Vec::new();
        if !self.eat_symbol(Symbol::RParen) {
            args.push(self.expression()?);
            while self.eat_symbol(Symbol::Comma) {
                args.push(self.expression()?);
            }
            self.expect_symbol(Symbol::RParen)?;
        }
        Ok(FunCall { name, args })
    }

    fn expression(&mut self) -> Result<Expression> {
        self.nested(|p| match p.peek() {
            Some(TokenKind::Ident(_)) => {
                if matches!(p.peek_at(1), Some(TokenKind::Symbol(Symbol::LParen))) {
                    p.call().map(Expression::FunCall)
                } else {
                    p.path().map(Expression::Path)
                }
            }
            Some(TokenKind::Literal(_) | TokenKind::Keyword(Keyword::True | Keyword::False)) => {
                p.literal().map(Expression::Literal)
            }
            _ => Err(p.error("expression")),
        })
    }
}
