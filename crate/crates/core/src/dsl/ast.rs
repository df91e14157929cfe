use crate::angle::Angle;

use super::lexer::Pos;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub points: Vec<String>,
    pub points_pos: Pos,
    pub stmts: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Let {
        name: String,
        expr: Expr,
        pos: Pos,
    },
    Emit {
        name: String,
        pos: Pos,
    },
    Check {
        name: String,
        field: Field,
        cmp: Cmp,
        value: Literal,
        pos: Pos,
    },
}

impl Stmt {
    pub fn pos(&self) -> Pos {
        match self {
            Stmt::Let { pos, .. } | Stmt::Emit { pos, .. } | Stmt::Check { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Line {
        angles: Vec<(String, Angle)>,
        level: Option<i64>,
    },
    Mc {
        arg: Box<Expr>,
        chi: Option<Angle>,
    },
    Tensor {
        line: Box<Expr>,
        arg: Box<Expr>,
    },
    Sym2(Box<Expr>),
    Wedge2(Box<Expr>),
    Wedge2t(Box<Expr>),
    Dual(Box<Expr>),
    Tate {
        k: i64,
        arg: Box<Expr>,
    },
    Katz(Box<Expr>),
    Ident(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    H,
    Delta,
    Rank,
    Rigidity,
    Steps,
    HAt(i64),
    DeltaAt(i64),
    Mu {
        point: String,
        angle: Angle,
        ell: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn text(self) -> &'static str {
        match self {
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    pub fn holds<T: Ord>(self, a: &T, b: &T) -> bool {
        match self {
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Map(Vec<(i64, i64)>),
}

/// Words that cannot be used as binding names.
pub const KEYWORDS: &[&str] = &[
    "points", "let", "emit", "check", "line", "mc", "tensor", "sym2", "wedge2", "wedge2t", "dual",
    "tate", "katz", "chi", "level",
];
