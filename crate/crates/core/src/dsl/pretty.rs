//! Canonical source form of a program.

use std::fmt::Write as _;

use super::ast::{Expr, ExprKind, Field, Literal, Program, Stmt};

pub fn pretty_program(p: &Program) -> String {
    let mut out = format!("points {};\n", p.points.join(", "));
    for s in &p.stmts {
        out.push_str(&pretty_stmt(s));
        out.push('\n');
    }
    out
}

pub fn pretty_stmt(s: &Stmt) -> String {
    match s {
        Stmt::Let { name, expr, .. } => format!("let {name} = {};", pretty_expr(expr)),
        Stmt::Emit { name, .. } => format!("emit {name};"),
        Stmt::Check {
            name,
            field,
            cmp,
            value,
            ..
        } => format!(
            "check {name}.{} {} {};",
            pretty_field(field),
            cmp.text(),
            pretty_literal(value)
        ),
    }
}

pub fn pretty_expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Line { angles, level } => {
            let mut items: Vec<String> = angles.iter().map(|(p, a)| format!("{p}: {a}")).collect();
            if let Some(l) = level {
                items.push(format!("level = {l}"));
            }
            format!("line({})", items.join(", "))
        }
        ExprKind::Mc { arg, chi } => match chi {
            Some(c) => format!("mc({}, chi = {c})", pretty_expr(arg)),
            None => format!("mc({})", pretty_expr(arg)),
        },
        ExprKind::Tensor { line, arg } => {
            format!("tensor({}, {})", pretty_expr(line), pretty_expr(arg))
        }
        ExprKind::Sym2(a) => format!("sym2({})", pretty_expr(a)),
        ExprKind::Wedge2(a) => format!("wedge2({})", pretty_expr(a)),
        ExprKind::Wedge2t(a) => format!("wedge2t({})", pretty_expr(a)),
        ExprKind::Dual(a) => format!("dual({})", pretty_expr(a)),
        ExprKind::Katz(a) => format!("katz({})", pretty_expr(a)),
        ExprKind::Tate { k, arg } => format!("tate({k}, {})", pretty_expr(arg)),
        ExprKind::Ident(n) => n.clone(),
    }
}

pub fn pretty_field(f: &Field) -> String {
    match f {
        Field::H => "h".into(),
        Field::Delta => "delta".into(),
        Field::Rank => "rank".into(),
        Field::Rigidity => "rigidity".into(),
        Field::Steps => "steps".into(),
        Field::HAt(p) => format!("h[{p}]"),
        Field::DeltaAt(p) => format!("delta[{p}]"),
        Field::Mu { point, angle, ell } => format!("mu[{point}, {angle}, {ell}]"),
    }
}

pub fn pretty_literal(l: &Literal) -> String {
    match l {
        Literal::Int(n) => n.to_string(),
        Literal::Map(entries) => {
            let mut s = String::from("{");
            for (i, (k, v)) in entries.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                write!(s, "{k}: {v}").unwrap();
            }
            s.push('}');
            s
        }
    }
}
