//! Recursive-descent parser.
//!
//! ```text
//! poly  := term (("+" | "-") term)*
//! term  := unary ("*"? unary)*          juxtaposition only after a number
//! unary := "-" unary | power
//! power := atom ("^" INT)?
//! atom  := INT ("/" INT)? | IDENT | IDENT "(" args (";" args)? ")" | "(" poly ")"
//! ```

use num::BigInt;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::DslError;
use crate::rational::Rational;

pub fn parse(text: &str) -> Result<Program, DslError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, at: 0 };
    let mut statements = Vec::new();
    while p.peek() != &Tok::Eof {
        statements.push(p.statement()?);
    }
    Ok(Program { statements })
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, DslError> {
        Err(DslError::Syntax {
            pos: self.pos(),
            expected: expected.to_string(),
            found: self.peek().to_string(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(&format!("`{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String, DslError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("an identifier"),
        }
    }

    fn int(&mut self) -> Result<i64, DslError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.error("an integer"),
        }
    }

    fn exponent(&mut self) -> Result<u32, DslError> {
        let pos = self.pos();
        let n = self.int()?;
        u32::try_from(n).map_err(|_| DslError::Syntax {
            pos,
            expected: "an exponent below 2^32".into(),
            found: n.to_string(),
        })
    }

    /// `INT ("/" INT)?`, with an optional leading minus when `signed`.
    fn rational(&mut self, signed: bool) -> Result<Rational, DslError> {
        let neg = signed && self.eat('-');
        let n = self.int()?;
        let mut q = Rational::from_integer(BigInt::from(n));
        if self.eat('/') {
            let pos = self.pos();
            let d = self.int()?;
            if d == 0 {
                return Err(DslError::Syntax {
                    pos,
                    expected: "a nonzero denominator".into(),
                    found: "0".into(),
                });
            }
            q /= Rational::from_integer(BigInt::from(d));
        }
        Ok(if neg { -q } else { q })
    }

    fn statement(&mut self) -> Result<Stmt, DslError> {
        let pos = self.pos();
        let keyword = self.ident()?;
        let kind = match keyword.as_str() {
            "gen" => {
                let name = self.ident()?;
                self.expect(':')?;
                let dpos = self.pos();
                let degree = self.exponent()?;
                if degree == 0 || degree % 2 != 0 {
                    return Err(DslError::BadDegree { pos: dpos, name, degree });
                }
                StmtKind::Gen { name, degree }
            }
            "rel" => {
                let lhs = self.monomial()?;
                self.expect('=')?;
                let rhs = self.poly()?;
                StmtKind::Rel { lhs, rhs }
            }
            "top" => StmtKind::Top(self.exponent()?),
            "integral" => {
                let monomial = self.monomial()?;
                self.expect('=')?;
                let value = self.rational(true)?;
                StmtKind::Integral { monomial, value }
            }
            "space" => {
                let builder = self.ident()?;
                let mut args = Vec::new();
                if self.eat('(') && !self.eat(')') {
                    loop {
                        args.push(match self.peek().clone() {
                            Tok::Ident(s) => {
                                self.bump();
                                SpaceArg::Ident(s)
                            }
                            Tok::Sym('-') => {
                                self.bump();
                                SpaceArg::Int(-self.int()?)
                            }
                            _ => SpaceArg::Int(self.int()?),
                        });
                        if self.eat(')') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                StmtKind::Space { builder, args }
            }
            "let" => {
                let name = self.ident()?;
                self.expect('=')?;
                StmtKind::Let { name, value: self.poly()? }
            }
            "eval" => {
                let op = match self.ident()?.as_str() {
                    "integrate" => EvalOp::Integrate,
                    "normal" => EvalOp::Normal,
                    "coeff" => {
                        self.expect('[')?;
                        let m = self.monomial()?;
                        self.expect(']')?;
                        EvalOp::Coeff(m)
                    }
                    _ => {
                        self.at -= 1;
                        return self.error("`integrate`, `normal` or `coeff`");
                    }
                };
                self.expect('(')?;
                let expr = self.poly()?;
                self.expect(')')?;
                StmtKind::Eval { op, expr }
            }
            _ => {
                self.at -= 1;
                return self.error("a statement keyword");
            }
        };
        self.expect(';')?;
        Ok(Stmt { kind, pos })
    }

    fn monomial(&mut self) -> Result<MonomialExpr, DslError> {
        if self.peek() == &Tok::Int(1) {
            self.bump();
            return Ok(MonomialExpr::default());
        }
        let mut factors = Vec::new();
        loop {
            let name = self.ident()?;
            let e = if self.eat('^') { self.exponent()? } else { 1 };
            factors.push((name, e));
            if !self.eat('*') {
                return Ok(MonomialExpr(factors));
            }
        }
    }

    fn poly(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Sym('('))
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.unary()?;
        loop {
            let juxtaposed = is_numeral(&acc) && self.starts_atom();
            if self.eat('*') || juxtaposed {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Pow(Box::new(base), self.exponent()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(_) => Ok(Expr::Num(self.rational(false)?)),
            Tok::Ident(name) => {
                self.bump();
                if !self.eat('(') {
                    return Ok(Expr::Var { name, pos });
                }
                let mut args = Vec::new();
                let mut extra = Vec::new();
                if !self.eat(')') {
                    let mut target = &mut args;
                    loop {
                        target.push(self.poly()?);
                        if self.eat(')') {
                            break;
                        }
                        if self.eat(';') {
                            target = &mut extra;
                            continue;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Expr::Call { name, args, extra, pos })
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.poly()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.error("a number, identifier or `(`"),
        }
    }
}

/// A literal, possibly negated: the only left operand allowed to juxtapose.
fn is_numeral(e: &Expr) -> bool {
    match e {
        Expr::Num(_) => true,
        Expr::Neg(a) => is_numeral(a),
        _ => false,
    }
}
