//! Top-to-bottom evaluation of a parsed program.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::bilinear::{sym2, wedge2, wedge2_reduced};
use crate::conv::{mc_hodge, mc_local};
use crate::error::Error;
use crate::katz::{katz_reduce, rigidity_index, KatzTrace};
use crate::render::{render_monodromy, render_table, trace_to_json};
use crate::system::{
    dual_monodromy, forget_hodge, tate_twist, HodgeSystem, MonodromySystem, RankOneLine,
};
use crate::twist::{tensor_line, tensor_line_monodromy};

use super::ast::{Cmp, Expr, ExprKind, Field, Literal, Program, Stmt};
use super::lexer::Pos;
use super::parser::ParseError;
use super::pretty::pretty_stmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trace {
    Hodge(KatzTrace<HodgeSystem>),
    Monodromy(KatzTrace<MonodromySystem>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    System(HodgeSystem),
    Line(RankOneLine),
    Monodromy(MonodromySystem),
    Trace(Box<Trace>),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::System(_) => "Hodge system",
            Value::Line(_) => "rank-one line",
            Value::Monodromy(_) => "monodromy system",
            Value::Trace(_) => "reduction trace",
        }
    }

    pub fn render_text(&self) -> String {
        match self {
            Value::System(s) => render_table(s),
            Value::Line(l) => render_table(&l.to_system()),
            Value::Monodromy(m) => render_monodromy(m),
            Value::Trace(t) => match t.as_ref() {
                Trace::Hodge(t) => render_trace(t, render_table),
                Trace::Monodromy(t) => render_trace(t, render_monodromy),
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let v = match self {
            Value::System(s) => serde_json::to_value(s),
            Value::Line(l) => serde_json::to_value(l),
            Value::Monodromy(m) => serde_json::to_value(m),
            Value::Trace(t) => {
                return match t.as_ref() {
                    Trace::Hodge(t) => trace_to_json(t),
                    Trace::Monodromy(t) => trace_to_json(t),
                }
            }
        };
        v.expect("values always serialize")
    }

    fn validate(&self) -> crate::error::Result<()> {
        match self {
            Value::System(s) => s.validate(),
            Value::Line(l) => l.to_system().validate(),
            Value::Monodromy(m) => m.validate(),
            Value::Trace(t) => match t.as_ref() {
                Trace::Hodge(t) => t.terminal.validate(),
                Trace::Monodromy(t) => t.terminal.validate(),
            },
        }
    }
}

fn render_trace<S>(t: &KatzTrace<S>, show: impl Fn(&S) -> String) -> String {
    let mut out = String::new();
    for (i, st) in t.steps.iter().enumerate() {
        let angles: Vec<String> = st
            .chosen_line
            .points()
            .iter()
            .zip(st.chosen_line.angles())
            .map(|(p, a)| format!("{p}: {a}"))
            .collect();
        out.push_str(&format!(
            "step {}: line({}), chi = {}, rank {} -> {}\n",
            i + 1,
            angles.join(", "),
            st.chi,
            st.before_rank,
            st.after_rank
        ));
    }
    out.push_str("terminal:\n");
    out.push_str(&show(&t.terminal));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslError {
    Parse(ParseError),
    Semantic { pos: Pos, message: String },
    Eval { pos: Pos, error: Error },
}

impl DslError {
    /// 2 for bad input of any kind, 3 for a violated internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            DslError::Eval { error, .. } if error.is_internal() => 3,
            _ => 2,
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            DslError::Parse(e) => e.pos,
            DslError::Semantic { pos, .. } | DslError::Eval { pos, .. } => *pos,
        }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslError::Parse(e) => write!(f, "{e}"),
            DslError::Semantic { pos, message } => write!(f, "{pos}: {message}"),
            DslError::Eval { pos, error } if error.is_internal() => {
                write!(f, "{pos}: internal error: {error}")
            }
            DslError::Eval { pos, error } => write!(f, "{pos}: {error}"),
        }
    }
}

impl std::error::Error for DslError {}

impl From<ParseError> for DslError {
    fn from(e: ParseError) -> Self {
        DslError::Parse(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub pos: Pos,
    pub source: String,
    pub passed: bool,
    pub actual: String,
}

#[derive(Debug, Clone, Default)]
pub struct Evaluation {
    /// Let bindings in program order.
    pub bindings: Vec<(String, Value)>,
    pub emits: Vec<String>,
    pub checks: Vec<CheckResult>,
}

impl Evaluation {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn semantic<T>(pos: Pos, message: String) -> Result<T, DslError> {
    Err(DslError::Semantic { pos, message })
}

/// Names used before they are bound, names bound twice, undeclared points,
/// and literals of the wrong shape for their field.
pub fn check_program(p: &Program) -> Result<(), DslError> {
    let points: BTreeSet<&str> = p.points.iter().map(String::as_str).collect();
    let mut bound: BTreeSet<&str> = BTreeSet::new();
    for s in &p.stmts {
        match s {
            Stmt::Let { name, expr, pos } => {
                check_expr(expr, &bound, &points)?;
                if !bound.insert(name) {
                    return semantic(*pos, format!("`{name}` is already bound"));
                }
            }
            Stmt::Emit { name, pos } => {
                if !bound.contains(name.as_str()) {
                    return semantic(*pos, format!("`{name}` is not bound"));
                }
            }
            Stmt::Check {
                name,
                field,
                cmp,
                value,
                pos,
            } => {
                if !bound.contains(name.as_str()) {
                    return semantic(*pos, format!("`{name}` is not bound"));
                }
                let map_ok = matches!(field, Field::H | Field::Delta | Field::Mu { .. });
                let int_ok = !matches!(field, Field::H | Field::Delta);
                match value {
                    Literal::Map(_) if !map_ok => {
                        return semantic(*pos, "this field is compared with an integer".into())
                    }
                    Literal::Int(_) if !int_ok => {
                        return semantic(*pos, "this field is compared with a map".into())
                    }
                    Literal::Map(_) if !matches!(cmp, Cmp::Eq | Cmp::Ne) => {
                        return semantic(*pos, "maps can only be compared with = or !=".into())
                    }
                    _ => {}
                }
                if let Field::Mu { point, .. } = field {
                    if !points.contains(point.as_str()) {
                        return semantic(*pos, format!("unknown point `{point}`"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_expr(e: &Expr, bound: &BTreeSet<&str>, points: &BTreeSet<&str>) -> Result<(), DslError> {
    match &e.kind {
        ExprKind::Line { angles, .. } => {
            for (p, _) in angles {
                if !points.contains(p.as_str()) {
                    return semantic(e.pos, format!("unknown point `{p}`"));
                }
            }
            Ok(())
        }
        ExprKind::Ident(n) => {
            if bound.contains(n.as_str()) {
                Ok(())
            } else {
                semantic(e.pos, format!("`{n}` is not bound"))
            }
        }
        ExprKind::Tensor { line, arg } => {
            check_expr(line, bound, points)?;
            check_expr(arg, bound, points)
        }
        ExprKind::Mc { arg, .. }
        | ExprKind::Tate { arg, .. }
        | ExprKind::Sym2(arg)
        | ExprKind::Wedge2(arg)
        | ExprKind::Wedge2t(arg)
        | ExprKind::Dual(arg)
        | ExprKind::Katz(arg) => check_expr(arg, bound, points),
    }
}

struct Env<'a> {
    points: &'a [String],
    values: HashMap<String, Value>,
}

fn level(pos: Pos, n: i64) -> Result<i32, DslError> {
    i32::try_from(n).map_err(|_| DslError::Semantic {
        pos,
        message: format!("level {n} is out of range"),
    })
}

impl Env<'_> {
    fn eval(&self, e: &Expr) -> Result<Value, DslError> {
        let at = |error: Error| DslError::Eval { pos: e.pos, error };
        let wrong = |v: &Value, op: &str| DslError::Semantic {
            pos: e.pos,
            message: format!("`{op}` cannot be applied to a {}", v.kind()),
        };
        let system = |v: Value, op: &str| match v {
            Value::System(s) => Ok(s),
            Value::Line(l) => Ok(l.to_system()),
            other => Err(wrong(&other, op)),
        };
        let v = match &e.kind {
            ExprKind::Line { angles, level: l } => {
                let offset = match l {
                    Some(n) => level(e.pos, *n)?,
                    None => 0,
                };
                Value::Line(RankOneLine::new(self.points, angles, offset).map_err(at)?)
            }
            ExprKind::Ident(n) => self.values[n].clone(),
            ExprKind::Mc { arg, chi } => match self.eval(arg)? {
                Value::Monodromy(m) => {
                    let scalar = m
                        .infinity_scalar()
                        .ok_or_else(|| at(Error::NotScalarAtInfinity))?;
                    let chi = match chi {
                        Some(c) if *c != scalar => {
                            return Err(at(Error::ChiMismatch {
                                given: *c,
                                expected: scalar,
                            }))
                        }
                        _ => scalar,
                    };
                    Value::Monodromy(mc_local(&m, chi).map_err(at)?)
                }
                other => Value::System(mc_hodge(&system(other, "mc")?, *chi).map_err(at)?),
            },
            ExprKind::Tensor { line, arg } => {
                let line = match self.eval(line)? {
                    Value::Line(l) => l,
                    other => {
                        return Err(DslError::Semantic {
                            pos: line.pos,
                            message: format!(
                                "the first argument of `tensor` must be a rank-one line, not a {}",
                                other.kind()
                            ),
                        })
                    }
                };
                match self.eval(arg)? {
                    Value::Monodromy(m) => {
                        Value::Monodromy(tensor_line_monodromy(&line, &m).map_err(at)?)
                    }
                    other => {
                        Value::System(tensor_line(&line, &system(other, "tensor")?).map_err(at)?)
                    }
                }
            }
            ExprKind::Sym2(a) => Value::System(sym2(&system(self.eval(a)?, "sym2")?).map_err(at)?),
            ExprKind::Wedge2(a) => {
                Value::System(wedge2(&system(self.eval(a)?, "wedge2")?).map_err(at)?)
            }
            ExprKind::Wedge2t(a) => {
                Value::System(wedge2_reduced(&system(self.eval(a)?, "wedge2t")?).map_err(at)?)
            }
            ExprKind::Tate { k, arg } => {
                let k = level(e.pos, *k)?;
                Value::System(tate_twist(&system(self.eval(arg)?, "tate")?, k))
            }
            ExprKind::Dual(a) => {
                let m = match self.eval(a)? {
                    Value::Monodromy(m) => m,
                    other => forget_hodge(&system(other, "dual")?),
                };
                Value::Monodromy(dual_monodromy(&m))
            }
            ExprKind::Katz(a) => {
                let t = match self.eval(a)? {
                    Value::Monodromy(m) => Trace::Monodromy(katz_reduce(&m).map_err(at)?),
                    other => Trace::Hodge(katz_reduce(&system(other, "katz")?).map_err(at)?),
                };
                Value::Trace(Box::new(t))
            }
        };
        v.validate().map_err(|err| {
            at(if err.is_internal() {
                err
            } else {
                Error::Invariant(err.to_string())
            })
        })?;
        Ok(v)
    }
}

/// Runs every statement in order. Check failures are recorded; any other
/// failure stops evaluation.
pub fn eval_program(p: &Program) -> Result<Evaluation, DslError> {
    check_program(p)?;
    let mut env = Env {
        points: &p.points,
        values: HashMap::new(),
    };
    let mut out = Evaluation::default();
    for s in &p.stmts {
        match s {
            Stmt::Let { name, expr, .. } => {
                let v = env.eval(expr)?;
                env.values.insert(name.clone(), v.clone());
                out.bindings.push((name.clone(), v));
            }
            Stmt::Emit { name, .. } => out.emits.push(name.clone()),
            Stmt::Check {
                name,
                field,
                cmp,
                value,
                pos,
            } => {
                let actual = field_value(&env.values[name], field, *pos)?;
                let passed = compare(&actual, *cmp, value);
                out.checks.push(CheckResult {
                    pos: *pos,
                    source: pretty_stmt(s),
                    passed,
                    actual: actual.to_string(),
                });
            }
        }
    }
    Ok(out)
}

pub fn run_source(src: &str) -> Result<Evaluation, DslError> {
    eval_program(&super::parser::parse_program(src)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Actual {
    Int(i64),
    Map(BTreeMap<i64, i64>),
}

impl fmt::Display for Actual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Actual::Int(n) => write!(f, "{n}"),
            Actual::Map(m) => {
                let items: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {v}")).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
        }
    }
}

fn compare(actual: &Actual, cmp: Cmp, expected: &Literal) -> bool {
    match (actual, expected) {
        (Actual::Int(a), Literal::Int(b)) => cmp.holds(a, b),
        (Actual::Map(a), Literal::Map(b)) => {
            let b: BTreeMap<i64, i64> = b.iter().copied().filter(|e| e.1 != 0).collect();
            cmp.holds(a, &b)
        }
        (Actual::Map(a), Literal::Int(b)) => cmp.holds(&a.values().sum::<i64>(), b),
        (Actual::Int(_), Literal::Map(_)) => false,
    }
}

fn field_value(v: &Value, field: &Field, pos: Pos) -> Result<Actual, DslError> {
    let no_field = || DslError::Semantic {
        pos,
        message: format!("a {} has no such field", v.kind()),
    };
    let eval_err = |error: Error| DslError::Eval { pos, error };
    let system = match v {
        Value::System(s) => Some(s.clone()),
        Value::Line(l) => Some(l.to_system()),
        _ => None,
    };
    let monodromy = match v {
        Value::Monodromy(m) => Some(m.clone()),
        _ => system.as_ref().map(forget_hodge),
    };
    let nonzero =
        |it: &mut dyn Iterator<Item = (i64, i64)>| Actual::Map(it.filter(|e| e.1 != 0).collect());
    Ok(match field {
        Field::H => {
            let s = system.ok_or_else(no_field)?;
            nonzero(&mut s.hodge().iter().map(|(&p, &h)| (p as i64, h as i64)))
        }
        Field::Delta => {
            let s = system.ok_or_else(no_field)?;
            nonzero(&mut s.degrees().iter().map(|(&p, &d)| (p as i64, d)))
        }
        Field::HAt(p) => {
            let s = system.ok_or_else(no_field)?;
            Actual::Int(i32::try_from(*p).map_or(0, |p| s.h(p) as i64))
        }
        Field::DeltaAt(p) => {
            let s = system.ok_or_else(no_field)?;
            Actual::Int(i32::try_from(*p).map_or(0, |p| s.delta(p)))
        }
        Field::Mu { point, angle, ell } => {
            let s = system.ok_or_else(no_field)?;
            let i = s.point_index(point).map_err(eval_err)?;
            let want = (*angle, u32::try_from(*ell).unwrap_or(u32::MAX));
            let levels = nonzero(&mut s.local(i).iter().filter_map(|(k, &m)| {
                ((k.angle, k.ell) == want).then_some((k.level as i64, m as i64))
            }));
            levels
        }
        Field::Rank => Actual::Int(monodromy.ok_or_else(no_field)?.rank() as i64),
        Field::Rigidity => {
            Actual::Int(rigidity_index(&monodromy.ok_or_else(no_field)?).map_err(eval_err)?)
        }
        Field::Steps => match v {
            Value::Trace(t) => Actual::Int(match t.as_ref() {
                Trace::Hodge(t) => t.steps.len(),
                Trace::Monodromy(t) => t.steps.len(),
            } as i64),
            _ => return Err(no_field()),
        },
    })
}
