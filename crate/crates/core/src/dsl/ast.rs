//! Syntax tree and canonical printer.
//!
//! Source positions compare equal to each other, so derived equality on the
//! tree is structural and a printed-then-reparsed program equals the original.

use std::fmt;

use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub statements: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Gen { name: String, degree: u32 },
    Rel { lhs: MonomialExpr, rhs: Expr },
    Top(u32),
    Integral { monomial: MonomialExpr, value: Rational },
    Space { builder: String, args: Vec<SpaceArg> },
    Let { name: String, value: Expr },
    Eval { op: EvalOp, expr: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceArg {
    Int(i64),
    Ident(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalOp {
    Integrate,
    Normal,
    Coeff(MonomialExpr),
}

/// `a^2*b`; the empty product prints as `1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MonomialExpr(pub Vec<(String, u32)>);

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var { name: String, pos: Pos },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// `name(args; extra)`; `extra` holds what follows a `;`.
    Call { name: String, args: Vec<Expr>, extra: Vec<Expr>, pos: Pos },
}

impl Expr {
    fn is_atomic(&self) -> bool {
        match self {
            Expr::Num(q) => q.is_integer(),
            Expr::Var { .. } | Expr::Call { .. } => true,
            _ => false,
        }
    }
}

struct Child<'a>(&'a Expr);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atomic() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

fn comma_list(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => f.write_str(&format_rational(q)),
            Expr::Var { name, .. } => f.write_str(name),
            Expr::Neg(e) => write!(f, "-{}", Child(e)),
            Expr::Add(a, b) => write!(f, "{} + {}", Child(a), Child(b)),
            Expr::Sub(a, b) => write!(f, "{} - {}", Child(a), Child(b)),
            Expr::Mul(a, b) => write!(f, "{}*{}", Child(a), Child(b)),
            Expr::Pow(a, n) => write!(f, "{}^{n}", Child(a)),
            Expr::Call { name, args, extra, .. } => {
                write!(f, "{name}(")?;
                comma_list(f, args)?;
                if !extra.is_empty() {
                    f.write_str("; ")?;
                    comma_list(f, extra)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for MonomialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (name, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(name)?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for EvalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOp::Integrate => f.write_str("integrate"),
            EvalOp::Normal => f.write_str("normal"),
            EvalOp::Coeff(m) => write!(f, "coeff[{m}]"),
        }
    }
}

impl fmt::Display for SpaceArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceArg::Int(n) => write!(f, "{n}"),
            SpaceArg::Ident(s) => f.write_str(s),
        }
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Gen { name, degree } => write!(f, "gen {name}: {degree};"),
            StmtKind::Rel { lhs, rhs } => write!(f, "rel {lhs} = {rhs};"),
            StmtKind::Top(d) => write!(f, "top {d};"),
            StmtKind::Integral { monomial, value } => {
                write!(f, "integral {monomial} = {};", format_rational(value))
            }
            StmtKind::Space { builder, args } => {
                let args: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "space {builder}({});", args.join(", "))
            }
            StmtKind::Let { name, value } => write!(f, "let {name} = {value};"),
            StmtKind::Eval { op, expr } => write!(f, "eval {op}({expr});"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}
