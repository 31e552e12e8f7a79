//! Statement-by-statement evaluation.
//!
//! Declarations (`gen`, `rel`, `top`, `integral`) accumulate until a name is
//! first looked up in the ring, at which point the presentation is built and
//! validated. A declaration after that point starts a fresh presentation, and
//! `space` replaces the ring outright. `let` bindings outlive ring changes;
//! a bound element is carried into the current ring by generator name.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{One, ToPrimitive, Zero};

use super::ast::*;
use super::DslError;
use crate::error::Error as KernelError;
use crate::grr::{self, KClass};
use crate::mukai::{self, MukaiVector};
use crate::rational::{format_rational, Rational};
use crate::report::Report;
use crate::ring::{Element, Ring, RingBuilder};
use crate::spaces::{self, SpaceRing};
use crate::verlinde;

type Result<T> = std::result::Result<T, DslError>;

/// Default `H²` for `mukai(r, m, s)` without an explicit polarization.
const DEFAULT_H2: i64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(Rational),
    Element(Element),
    Mukai(MukaiVector),
    Curve(KClass),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(q) => f.write_str(&format_rational(q)),
            Value::Element(e) => write!(f, "{e}"),
            Value::Mukai(v) => write!(f, "{v}"),
            Value::Curve(c) => write!(f, "{c}"),
        }
    }
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "a number",
            Value::Element(_) => "a ring element",
            Value::Mukai(_) => "a Mukai vector",
            Value::Curve(_) => "a curve K-class",
        }
    }
}

fn kernel(pos: Pos) -> impl Fn(KernelError) -> DslError {
    move |source| DslError::Kernel { pos, source }
}

fn type_error<T>(pos: Pos, message: impl Into<String>) -> Result<T> {
    Err(DslError::Type { pos, message: message.into() })
}

#[derive(Default)]
struct Declarations {
    first: Option<Pos>,
    gens: Vec<(String, u32)>,
    rels: Vec<(MonomialExpr, Expr, Pos)>,
    top: Option<u32>,
    integrals: Vec<(MonomialExpr, Rational)>,
}

impl Declarations {
    fn is_empty(&self) -> bool {
        self.first.is_none()
    }
}

/// Polynomials in the declared generators, before any relation is applied.
type Free = BTreeMap<Vec<u32>, Rational>;

fn free_add(a: &mut Free, m: Vec<u32>, c: Rational) {
    let slot = a.entry(m).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        a.retain(|_, v| !v.is_zero());
    }
}

fn free_mul(a: &Free, b: &Free) -> Free {
    let mut out = Free::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            free_add(&mut out, m, ca * cb);
        }
    }
    out
}

struct Scope {
    space: Option<SpaceRing>,
    ring: Ring,
}

struct Evaluator {
    decls: Declarations,
    scope: Option<Scope>,
    lets: HashMap<String, Value>,
    report: Report,
}

/// Runs every statement in order; each `eval` contributes one report step.
pub fn eval_program(p: &Program) -> Result<Report> {
    let mut ev = Evaluator {
        decls: Declarations::default(),
        scope: None,
        lets: HashMap::new(),
        report: Report::new("eval"),
    };
    for s in &p.statements {
        ev.statement(s)?;
    }
    Ok(ev.report)
}

impl Evaluator {
    fn declaring(&mut self, pos: Pos) {
        if self.decls.is_empty() || self.scope.is_some() {
            self.decls = Declarations { first: Some(pos), ..Default::default() };
            self.scope = None;
        }
    }

    fn statement(&mut self, s: &Stmt) -> Result<()> {
        let pos = s.pos;
        match &s.kind {
            StmtKind::Gen { name, degree } => {
                self.declaring(pos);
                self.decls.gens.push((name.clone(), *degree));
            }
            StmtKind::Rel { lhs, rhs } => {
                self.declaring(pos);
                self.decls.rels.push((lhs.clone(), rhs.clone(), pos));
            }
            StmtKind::Top(d) => {
                self.declaring(pos);
                self.decls.top = Some(*d);
            }
            StmtKind::Integral { monomial, value } => {
                self.declaring(pos);
                self.decls.integrals.push((monomial.clone(), value.clone()));
            }
            StmtKind::Space { builder, args } => {
                let space = build_space(builder, args, pos)?;
                self.decls = Declarations::default();
                self.scope = Some(Scope {
                    ring: space.presentation().clone(),
                    space: Some(space),
                });
            }
            StmtKind::Let { name, value } => {
                let v = self.expr(value)?;
                self.lets.insert(name.clone(), v);
            }
            StmtKind::Eval { op, expr } => {
                let v = self.expr(expr)?;
                let out = self.apply(op, v, pos)?;
                let label = s.kind.to_string();
                let citation = format!("evaluated at line {}, column {}", pos.line, pos.col);
                self.report.record(&label, out.clone(), out, &citation, true);
            }
        }
        Ok(())
    }

    fn apply(&mut self, op: &EvalOp, v: Value, pos: Pos) -> Result<String> {
        match op {
            EvalOp::Normal => Ok(self.settle(v, pos)?.to_string()),
            EvalOp::Integrate => match self.settle(v, pos)? {
                Value::Element(e) => Ok(format_rational(&e.integrate().map_err(|e| kernel(pos)(e.into()))?)),
                Value::Scalar(q) => {
                    let e = self.ring(pos)?.constant(q);
                    Ok(format_rational(&e.integrate().map_err(|e| kernel(pos)(e.into()))?))
                }
                other => type_error(pos, format!("cannot integrate {}", other.kind())),
            },
            EvalOp::Coeff(m) => {
                let e = match self.settle(v, pos)? {
                    Value::Element(e) => e,
                    Value::Scalar(q) => self.ring(pos)?.constant(q),
                    other => return type_error(pos, format!("cannot take a coefficient of {}", other.kind())),
                };
                let mono = e
                    .ring()
                    .parse_monomial(&m.to_string())
                    .map_err(|err| kernel(pos)(err.into()))?;
                Ok(e.coeff_of_monomial(&mono).to_string())
            }
        }
    }

    /// Moves an element into the current ring when it can be carried there.
    fn settle(&self, v: Value, _pos: Pos) -> Result<Value> {
        match (&v, &self.scope) {
            (Value::Element(e), Some(scope)) if !std::sync::Arc::ptr_eq(e.ring(), &scope.ring) => {
                Ok(e.lift_into(&scope.ring).map(Value::Element).unwrap_or(v))
            }
            _ => Ok(v),
        }
    }

    fn ring(&mut self, pos: Pos) -> Result<Ring> {
        if self.scope.is_none() {
            if self.decls.is_empty() {
                return Err(DslError::NoRing { pos });
            }
            let ring = build_declared(&self.decls)?;
            self.scope = Some(Scope { space: None, ring });
        }
        Ok(self.scope.as_ref().expect("scope set above").ring.clone())
    }

    fn lookup(&mut self, name: &str, pos: Pos) -> Result<Value> {
        if let Some(v) = self.lets.get(name) {
            return Ok(v.clone());
        }
        let unknown = || DslError::UnknownIdentifier { pos, name: name.to_string() };
        if self.scope.is_none() && self.decls.is_empty() {
            return Err(unknown());
        }
        let ring = self.ring(pos)?;
        let scope = self.scope.as_ref().expect("ring() sets the scope");
        if let Some(space) = &scope.space {
            if let Some(e) = space.named_classes().get(name) {
                return Ok(Value::Element(e.clone()));
            }
        }
        ring.gen(name).map(Value::Element).map_err(|_| unknown())
    }

    fn expr(&mut self, e: &Expr) -> Result<Value> {
        match e {
            Expr::Num(q) => Ok(Value::Scalar(q.clone())),
            Expr::Var { name, pos } => self.lookup(name, *pos),
            Expr::Neg(a) => {
                let v = self.expr(a)?;
                self.scalar_times(&-Rational::one(), v, expr_pos(a))
            }
            Expr::Add(a, b) => self.additive(a, b, false),
            Expr::Sub(a, b) => self.additive(a, b, true),
            Expr::Mul(a, b) => {
                let pos = expr_pos(a);
                let (x, y) = (self.expr(a)?, self.expr(b)?);
                match (x, y) {
                    (Value::Scalar(p), y) => self.scalar_times(&p, y, pos),
                    (x, Value::Scalar(q)) => self.scalar_times(&q, x, pos),
                    (Value::Element(x), Value::Element(y)) => {
                        let (x, y) = self.common(x, y, pos)?;
                        Ok(Value::Element(&x * &y))
                    }
                    (x, y) => type_error(pos, format!("cannot multiply {} by {}", x.kind(), y.kind())),
                }
            }
            Expr::Pow(a, n) => match self.expr(a)? {
                Value::Scalar(q) => Ok(Value::Scalar(num::pow(q, *n as usize))),
                Value::Element(x) => Ok(Value::Element(x.pow(*n))),
                other => type_error(expr_pos(a), format!("cannot raise {} to a power", other.kind())),
            },
            Expr::Call { name, args, extra, pos } => {
                let args = args.iter().map(|a| self.expr(a)).collect::<Result<Vec<_>>>()?;
                let extra = extra.iter().map(|a| self.expr(a)).collect::<Result<Vec<_>>>()?;
                builtin(name, &args, &extra, *pos)
            }
        }
    }

    fn additive(&mut self, a: &Expr, b: &Expr, subtract: bool) -> Result<Value> {
        let pos = expr_pos(a);
        let x = self.expr(a)?;
        let mut y = self.expr(b)?;
        if subtract {
            y = self.scalar_times(&-Rational::one(), y, pos)?;
        }
        match (x, y) {
            (Value::Scalar(p), Value::Scalar(q)) => Ok(Value::Scalar(p + q)),
            (Value::Scalar(p), Value::Element(e)) | (Value::Element(e), Value::Scalar(p)) => {
                Ok(Value::Element(&e + &e.ring().constant(p)))
            }
            (Value::Element(x), Value::Element(y)) => {
                let (x, y) = self.common(x, y, pos)?;
                Ok(Value::Element(&x + &y))
            }
            (Value::Mukai(u), Value::Mukai(v)) => {
                if u.h2 != v.h2 {
                    return Err(kernel(pos)(mukai::MukaiError::MixedPolarization(u.h2, v.h2).into()));
                }
                MukaiVector::new(u.r + v.r, u.m + v.m, u.s + v.s, u.h2)
                    .map(Value::Mukai)
                    .map_err(|e| kernel(pos)(e.into()))
            }
            (Value::Curve(u), Value::Curve(v)) => Ok(Value::Curve(u + v)),
            (x, y) => type_error(pos, format!("cannot add {} and {}", x.kind(), y.kind())),
        }
    }

    fn scalar_times(&self, c: &Rational, v: Value, pos: Pos) -> Result<Value> {
        match v {
            Value::Scalar(q) => Ok(Value::Scalar(c * q)),
            Value::Element(e) => Ok(Value::Element(e.scale(c))),
            Value::Mukai(u) => {
                let t = integer(c, pos)?;
                MukaiVector::new(u.r * t, u.m * t, u.s * t, u.h2)
                    .map(Value::Mukai)
                    .map_err(|e| kernel(pos)(e.into()))
            }
            Value::Curve(u) => Ok(Value::Curve(u.scale(integer(c, pos)?))),
        }
    }

    /// Brings two elements into one ring: the current one if both lift there,
    /// otherwise whichever ring already holds the other operand.
    fn common(&self, x: Element, y: Element, pos: Pos) -> Result<(Element, Element)> {
        if x.same_ring(&y) {
            return Ok((x, y));
        }
        if let Some(scope) = &self.scope {
            if let (Ok(a), Ok(b)) = (x.lift_into(&scope.ring), y.lift_into(&scope.ring)) {
                return Ok((a, b));
            }
        }
        if let Ok(b) = y.lift_into(x.ring()) {
            return Ok((x, b));
        }
        if let Ok(a) = x.lift_into(y.ring()) {
            return Ok((a, y));
        }
        type_error(pos, format!("`{x}` and `{y}` live in incompatible rings"))
    }
}

fn expr_pos(e: &Expr) -> Pos {
    match e {
        Expr::Var { pos, .. } | Expr::Call { pos, .. } => *pos,
        Expr::Neg(a) | Expr::Pow(a, _) | Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) => expr_pos(a),
        Expr::Num(_) => Pos::default(),
    }
}

fn integer(q: &Rational, pos: Pos) -> Result<i64> {
    if !q.is_integer() {
        return type_error(pos, format!("expected an integer, found {}", format_rational(q)));
    }
    match q.to_integer().to_i64() {
        Some(n) => Ok(n),
        None => type_error(pos, format!("{} does not fit in 64 bits", format_rational(q))),
    }
}

fn int_arg(v: &Value, pos: Pos) -> Result<i64> {
    match v {
        Value::Scalar(q) => integer(q, pos),
        other => type_error(pos, format!("expected an integer, found {}", other.kind())),
    }
}

fn mukai_arg(v: &Value, pos: Pos) -> Result<MukaiVector> {
    match v {
        Value::Mukai(u) => Ok(*u),
        other => type_error(pos, format!("expected a Mukai vector, found {}", other.kind())),
    }
}

fn arity(name: &str, args: &[Value], want: &[usize], pos: Pos) -> Result<()> {
    if want.contains(&args.len()) {
        return Ok(());
    }
    let want: Vec<String> = want.iter().map(ToString::to_string).collect();
    type_error(pos, format!("`{name}` takes {} arguments, got {}", want.join(" or "), args.len()))
}

/// `(g, k, r, d)` or `(g, k, x)` with `x` a curve class.
fn lambda_args(name: &str, args: &[Value], pos: Pos) -> Result<(i64, i64, KClass)> {
    arity(name, args, &[3, 4], pos)?;
    let (g, k) = (int_arg(&args[0], pos)?, int_arg(&args[1], pos)?);
    let x = match &args[2..] {
        [Value::Curve(c)] => *c,
        [r, d] => KClass::new(int_arg(r, pos)?, int_arg(d, pos)?),
        [other] => return type_error(pos, format!("expected a curve K-class, found {}", other.kind())),
        _ => unreachable!("arity checked"),
    };
    Ok((g, k, x))
}

fn builtin(name: &str, args: &[Value], extra: &[Value], pos: Pos) -> Result<Value> {
    let k = kernel(pos);
    if !extra.is_empty() && name != "mukai" {
        return type_error(pos, format!("`{name}` takes no `;` arguments"));
    }
    match name {
        "bernoulli" => {
            arity(name, args, &[1], pos)?;
            verlinde::bernoulli(int_arg(&args[0], pos)?).map(Value::Scalar).map_err(|e| k(e.into()))
        }
        "verlinde2" => {
            arity(name, args, &[1], pos)?;
            verlinde::theta_top_rank2(int_arg(&args[0], pos)?)
                .map(Value::Scalar)
                .map_err(|e| k(e.into()))
        }
        "lambda_closed" | "lambda_grr" => {
            let (g, deg, x) = lambda_args(name, args, pos)?;
            let r = if name == "lambda_closed" {
                grr::lambda_closed(g, deg, &x)
            } else {
                grr::lambda_grr(g, deg, &x)
            };
            r.map(|l| Value::Element(l.value)).map_err(|e| k(e.into()))
        }
        "curve" => {
            arity(name, args, &[2], pos)?;
            Ok(Value::Curve(KClass::new(int_arg(&args[0], pos)?, int_arg(&args[1], pos)?)))
        }
        "mukai" => {
            arity(name, args, &[3], pos)?;
            let h2 = match extra {
                [] => DEFAULT_H2,
                [h] => int_arg(h, pos)?,
                _ => return type_error(pos, "`mukai` takes one polarization after `;`"),
            };
            let [r, m, s] = [0, 1, 2].map(|i| int_arg(&args[i], pos));
            MukaiVector::new(r?, m?, s?, h2).map(Value::Mukai).map_err(|e| k(e.into()))
        }
        "pairing" | "bb" | "chi_k3" => {
            arity(name, args, &[2], pos)?;
            let (a, b) = (mukai_arg(&args[0], pos)?, mukai_arg(&args[1], pos)?);
            let f = match name {
                "pairing" => mukai::mukai_pairing,
                "bb" => mukai::bb_pairing,
                _ => mukai::chi_k3,
            };
            f(&a, &b)
                .map(|n| Value::Scalar(Rational::from_integer(n.into())))
                .map_err(|e| k(e.into()))
        }
        "restrict" => {
            arity(name, args, &[2], pos)?;
            let v = mukai_arg(&args[0], pos)?;
            Ok(Value::Curve(mukai::restrict_to_curve(&v, int_arg(&args[1], pos)?)))
        }
        "chi" => {
            arity(name, args, &[2], pos)?;
            let Value::Curve(c) = &args[0] else {
                return type_error(pos, format!("expected a curve K-class, found {}", args[0].kind()));
            };
            Ok(Value::Scalar(Rational::from_integer(c.chi(int_arg(&args[1], pos)?).into())))
        }
        _ => Err(DslError::UnknownIdentifier { pos, name: name.to_string() }),
    }
}

fn build_space(builder: &str, args: &[SpaceArg], pos: Pos) -> Result<SpaceRing> {
    let ints: Vec<Option<i64>> = args
        .iter()
        .map(|a| match a {
            SpaceArg::Int(n) => Some(*n),
            SpaceArg::Ident(_) => None,
        })
        .collect();
    let bad = || {
        let shown: Vec<String> = args.iter().map(ToString::to_string).collect();
        type_error::<SpaceRing>(pos, format!("bad arguments for `{builder}`: ({})", shown.join(", ")))
    };
    let k = kernel(pos);
    let space = match (builder, ints.as_slice()) {
        ("point", []) => Ok(spaces::point()),
        ("abelian", [Some(g)]) => spaces::abelian_ring(*g),
        ("curve", [Some(g)]) => spaces::curve_even_ring(*g),
        ("jac_x_curve", [Some(g), Some(d)]) => spaces::jac_x_curve_ring(*g, *d, false),
        ("jac_x_curve", [Some(g), Some(d), None]) if args[2] == SpaceArg::Ident("mu".into()) => {
            spaces::jac_x_curve_ring(*g, *d, true)
        }
        ("wbar", []) => spaces::wbar(),
        ("point" | "abelian" | "curve" | "jac_x_curve" | "wbar", _) => return bad(),
        _ => return Err(DslError::UnknownIdentifier { pos, name: builder.to_string() }),
    };
    space.map_err(|e| k(e.into()))
}

fn monomial_exps(m: &MonomialExpr, gens: &[(String, u32)], pos: Pos) -> Result<Vec<u32>> {
    let mut e = vec![0; gens.len()];
    for (name, x) in &m.0 {
        let i = gens
            .iter()
            .position(|(g, _)| g == name)
            .ok_or_else(|| DslError::UnknownIdentifier { pos, name: name.clone() })?;
        e[i] += x;
    }
    Ok(e)
}

fn format_exps(e: &[u32], gens: &[(String, u32)]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(gens)
        .filter(|(x, _)| **x > 0)
        .map(|(x, (g, _))| if *x == 1 { g.clone() } else { format!("{g}^{x}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn degree_of(e: &[u32], gens: &[(String, u32)]) -> u32 {
    e.iter().zip(gens).map(|(x, (_, d))| x * d).sum()
}

/// Expands a relation right-hand side without reducing by any relation.
fn expand(e: &Expr, gens: &[(String, u32)]) -> Result<Free> {
    let n = gens.len();
    let constant = |q: Rational| {
        let mut f = Free::new();
        free_add(&mut f, vec![0; n], q);
        f
    };
    Ok(match e {
        Expr::Num(q) => constant(q.clone()),
        Expr::Var { name, pos } => {
            let m = monomial_exps(&MonomialExpr(vec![(name.clone(), 1)]), gens, *pos)?;
            let mut f = Free::new();
            free_add(&mut f, m, Rational::one());
            f
        }
        Expr::Neg(a) => free_mul(&constant(-Rational::one()), &expand(a, gens)?),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let mut f = expand(a, gens)?;
            let sign = if matches!(e, Expr::Sub(..)) { -Rational::one() } else { Rational::one() };
            for (m, c) in expand(b, gens)? {
                free_add(&mut f, m, &sign * c);
            }
            f
        }
        Expr::Mul(a, b) => free_mul(&expand(a, gens)?, &expand(b, gens)?),
        Expr::Pow(a, k) => {
            let base = expand(a, gens)?;
            (0..*k).fold(constant(Rational::one()), |acc, _| free_mul(&acc, &base))
        }
        Expr::Call { name, pos, .. } => {
            return type_error(*pos, format!("function `{name}` cannot appear in a relation"));
        }
    })
}

fn build_declared(d: &Declarations) -> Result<Ring> {
    let first = d.first.unwrap_or_default();
    let Some(top) = d.top else {
        return type_error(first, "declared ring has no `top` statement");
    };
    let mut b = RingBuilder::new(top);
    for (name, deg) in &d.gens {
        b = b.generator(name, *deg);
    }
    for (lhs, rhs, pos) in &d.rels {
        let l = monomial_exps(lhs, &d.gens, *pos)?;
        let want = degree_of(&l, &d.gens);
        let mut terms = Vec::new();
        for (m, c) in expand(rhs, &d.gens)? {
            let found = degree_of(&m, &d.gens);
            if found != want {
                return Err(DslError::DegreeMismatch { pos: *pos, lhs: lhs.to_string(), expected: want, found });
            }
            terms.push((c, format_exps(&m, &d.gens)));
        }
        b = b.rule_q(&format_exps(&l, &d.gens), terms);
    }
    for (m, v) in &d.integrals {
        let e = monomial_exps(m, &d.gens, first)?;
        b = b.integral_q(&format_exps(&e, &d.gens), v.clone());
    }
    b.build().map_err(|e| kernel(first)(e.into()))
}

#[cfg(test)]
mod tests {
    use super::super::run;
    use super::*;

    fn single(text: &str) -> String {
        let r = run(text).unwrap();
        assert_eq!(r.steps.len(), 1, "{}", r.to_table());
        r.steps[0].computed.clone()
    }

    const WBAR_FILE: &str = "
        gen zeta: 2; gen gamma: 2; gen theta: 2; gen rho: 2;
        rel rho^2 = 0;
        rel gamma*rho = 0;
        rel gamma^2 = -2*theta*rho;
        rel theta^3 = 0;
        rel gamma*theta^2 = 0;
        rel zeta^3 = -4*rho*zeta^2;
        top 10;
        integral zeta^2*theta^2*rho = 2;
    ";

    #[test]
    fn wbar_assembled_class_degree() {
        let eval = "eval integrate((-4*theta+2*(gamma+rho)-7*rho-zeta)^5);";
        assert_eq!(single(&format!("space wbar(); {eval}")), "-1600");
        assert_eq!(single(&format!("{WBAR_FILE} {eval}")), "-1600");
    }

    #[test]
    fn fiber_theta_power() {
        assert_eq!(single("space abelian(5); eval integrate((4*theta)^5);"), "122880");
    }

    #[test]
    fn gamma_squared_on_jacobian_times_curve() {
        assert_eq!(single("space jac_x_curve(2, 1); eval normal(gamma^2);"), "-2*theta*rho");
    }

    #[test]
    fn builtins() {
        assert_eq!(single("eval normal(bernoulli(12));"), "-691/2730");
        assert_eq!(single("eval normal(verlinde2(2));"), "80");
        assert_eq!(single("eval normal(bb(mukai(0, 0, 1), mukai(-4, -1, 17)));"), "4");
        assert_eq!(single("let v = mukai(0, 2, -1; 2); eval normal(pairing(v, v) + 2);"), "10");
        assert_eq!(single("eval normal(chi_k3(mukai(-4, -1, 5), mukai(0, 2, -1)));"), "0");
        assert_eq!(single("eval normal(restrict(mukai(-4, -1, 0), 2));"), "(-4, -4)");
        assert_eq!(
            single("let x = restrict(mukai(-4, -1, 0), 2); eval normal(lambda_closed(5, 3, x));"),
            "4*theta"
        );
        assert_eq!(
            single("eval normal(lambda_grr(2, 1, 1, 0) - lambda_closed(2, 1, curve(1, 0)));"),
            "0"
        );
    }

    #[test]
    fn lets_carry_across_spaces() {
        let text = "
            space jac_x_curve(3, 2, mu);
            let t = theta;
            space abelian(3);
            eval integrate(t^3);
        ";
        assert_eq!(single(text), "6");
    }

    #[test]
    fn coefficients() {
        let x = "3*rho*theta + theta^2 + 5*rho";
        assert_eq!(single(&format!("space jac_x_curve(2, 1); eval coeff[rho]({x});")), "5");
        assert_eq!(single(&format!("space jac_x_curve(2, 1); eval coeff[theta*rho]({x});")), "3");
    }

    #[test]
    fn rational_arithmetic_in_a_declared_ring() {
        let text = "gen x: 2; rel x^3 = 0; top 4; integral x^2 = 3;
                    let a = 1/2 x + 1; eval integrate(a^4);";
        assert_eq!(single(text), "9/2");
    }

    #[test]
    fn empty_program_is_a_no_op() {
        let r = run("").unwrap();
        assert!(r.steps.is_empty() && r.passed());
    }

    #[test]
    fn unknown_identifier_has_a_location() {
        let err = run("space wbar();\neval integrate(zeta^2 * omega);").unwrap_err();
        match err {
            DslError::UnknownIdentifier { pos, name } => {
                assert_eq!(name, "omega");
                assert_eq!((pos.line, pos.col), (2, 25));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(run("eval normal(frob(1));"), Err(DslError::UnknownIdentifier { .. })));
        assert!(matches!(run("eval normal(x);"), Err(DslError::UnknownIdentifier { .. })));
    }

    #[test]
    fn relation_degree_mismatch() {
        let err = run("gen x: 2; gen y: 4; rel x^2 = y + x; top 4; eval normal(x);").unwrap_err();
        assert!(
            matches!(&err, DslError::DegreeMismatch { expected: 4, found: 2, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn kernel_errors_keep_the_statement_location() {
        let err = run("gen x: 2; gen y: 2; rel x^2 = y^2; rel y^2 = x*y; top 4;\nlet a = x;").unwrap_err();
        assert!(matches!(err, DslError::Kernel { .. }), "{err:?}");
        let err = run("space abelian(2);\neval integrate(mukai(1, 0, 0));").unwrap_err();
        assert!(matches!(err, DslError::Type { pos: Pos { line: 2, .. }, .. }), "{err:?}");
        let err = run("eval normal(mukai(1, 0, 0; 3));").unwrap_err();
        assert!(matches!(err, DslError::Kernel { .. }), "{err:?}");
    }

    #[test]
    fn missing_top_is_reported() {
        assert!(matches!(run("gen x: 2; eval normal(x);"), Err(DslError::Type { .. })));
    }

    #[test]
    fn redeclaring_starts_a_new_ring() {
        let text = "gen x: 2; rel x^2 = 0; top 2; integral x = 1; eval integrate(x);
                    gen y: 2; rel y^3 = 0; top 4; integral y^2 = 5; eval integrate(y^2);";
        let r = run(text).unwrap();
        let got: Vec<&str> = r.steps.iter().map(|s| s.computed.as_str()).collect();
        assert_eq!(got, ["1", "5"]);
    }
}
