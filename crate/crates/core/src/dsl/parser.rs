//! Recursive-descent parser.
//!
//! ```text
//! program := "points" IDENT ("," IDENT)* ";" stmt*
//! stmt    := "let" IDENT "=" expr ";"
//!          | "emit" IDENT ";"
//!          | "check" IDENT "." field cmp literal ";"
//! expr    := "line" "(" [item ("," item)*] ")"
//!          | "mc" "(" expr ["," "chi" "=" rational] ")"
//!          | "tensor" "(" expr "," expr ")"
//!          | ("sym2" | "wedge2" | "wedge2t" | "dual" | "katz") "(" expr ")"
//!          | "tate" "(" int "," expr ")"
//!          | IDENT
//! item    := IDENT ":" rational | "level" "=" int
//! field   := "h" ["[" int "]"] | "delta" ["[" int "]"] | "rank" | "rigidity"
//!          | "steps" | "mu" "[" IDENT "," rational "," INT "]"
//! literal := int | "{" [int ":" int ("," int ":" int)*] "}"
//! int     := ["-"] INT
//! ```

use std::collections::BTreeSet;
use std::fmt;

use crate::angle::Angle;

use super::ast::{Cmp, Expr, ExprKind, Field, Literal, Program, Stmt, KEYWORDS};
use super::lexer::{lex, Pos, Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub expected: Vec<String>,
    pub found: String,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.pos)?;
        if let Some(m) = &self.message {
            return f.write_str(m);
        }
        match self.expected.as_slice() {
            [] => write!(f, "unexpected {}", self.found),
            [one] => write!(f, "expected {one}, found {}", self.found),
            many => write!(
                f,
                "expected one of {}, found {}",
                many.join(", "),
                self.found
            ),
        }
    }
}

impl std::error::Error for ParseError {}

type Unary = fn(Box<Expr>) -> ExprKind;

pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let tokens = lex(src).map_err(|e| ParseError {
        pos: e.pos,
        expected: Vec::new(),
        found: String::new(),
        message: Some(e.message),
    })?;
    Parser {
        tokens,
        i: 0,
        expected: BTreeSet::new(),
    }
    .program()
}

struct Parser {
    tokens: Vec<Token>,
    i: usize,
    expected: BTreeSet<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.i]
    }

    fn pos(&self) -> Pos {
        self.peek().pos
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.i].clone();
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        self.expected.clear();
        t
    }

    fn fail<T>(&mut self) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            expected: std::mem::take(&mut self.expected).into_iter().collect(),
            found: self.peek().tok.to_string(),
            message: None,
        })
    }

    fn fail_at<T>(&self, pos: Pos, message: String) -> PResult<T> {
        Err(ParseError {
            pos,
            expected: Vec::new(),
            found: String::new(),
            message: Some(message),
        })
    }

    fn check(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            true
        } else {
            self.expected.insert(format!("`{}`", tok.text()));
            false
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        let ok = self.check(tok);
        if ok {
            self.advance();
        }
        ok
    }

    fn expect(&mut self, tok: &Tok) -> PResult<Pos> {
        let pos = self.pos();
        if self.eat(tok) {
            Ok(pos)
        } else {
            self.fail()
        }
    }

    fn check_word(&mut self, word: &str) -> bool {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == word) {
            true
        } else {
            self.expected.insert(format!("`{word}`"));
            false
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        let ok = self.check_word(word);
        if ok {
            self.advance();
        }
        ok
    }

    fn expect_word(&mut self, word: &str) -> PResult<Pos> {
        let pos = self.pos();
        if self.eat_word(word) {
            Ok(pos)
        } else {
            self.fail()
        }
    }

    /// An identifier that is not a keyword.
    fn name(&mut self) -> PResult<(String, Pos)> {
        let pos = self.pos();
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.advance();
                Ok((s, pos))
            }
            Tok::Ident(s) => {
                let s = s.clone();
                self.fail_at(
                    pos,
                    format!("`{s}` is a keyword and cannot be used as a name"),
                )
            }
            _ => {
                self.expected.insert("identifier".into());
                self.fail()
            }
        }
    }

    fn uint(&mut self) -> PResult<i64> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.advance();
                Ok(n)
            }
            _ => {
                self.expected.insert("integer".into());
                self.fail()
            }
        }
    }

    fn int(&mut self) -> PResult<i64> {
        if self.eat(&Tok::Minus) {
            Ok(-self.uint()?)
        } else {
            self.uint()
        }
    }

    fn rational(&mut self) -> PResult<Angle> {
        let pos = self.pos();
        let n = self.uint()?;
        let d = if self.eat(&Tok::Slash) {
            self.uint()?
        } else {
            1
        };
        let text = format!("{n}/{d}");
        match text.parse::<Angle>() {
            Ok(a) => Ok(a),
            Err(_) => self.fail_at(
                pos,
                format!("`{n}/{d}` is not a reduced fraction in [0, 1)"),
            ),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let points_pos = self.expect_word("points")?;
        let mut points = Vec::new();
        loop {
            let (p, pos) = self.name()?;
            if points.contains(&p) {
                return self.fail_at(pos, format!("point `{p}` declared twice"));
            }
            points.push(p);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Semi)?;
        let mut stmts = Vec::new();
        loop {
            if self.check(&Tok::Eof) {
                break;
            }
            stmts.push(self.stmt()?);
        }
        Ok(Program {
            points,
            points_pos,
            stmts,
        })
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        if self.eat_word("let") {
            let (name, _) = self.name()?;
            self.expect(&Tok::Eq)?;
            let expr = self.expr()?;
            self.expect(&Tok::Semi)?;
            return Ok(Stmt::Let { name, expr, pos });
        }
        if self.eat_word("emit") {
            let (name, _) = self.name()?;
            self.expect(&Tok::Semi)?;
            return Ok(Stmt::Emit { name, pos });
        }
        if self.eat_word("check") {
            let (name, _) = self.name()?;
            self.expect(&Tok::Dot)?;
            let field = self.field()?;
            let cmp = self.cmp()?;
            let value = self.literal()?;
            self.expect(&Tok::Semi)?;
            return Ok(Stmt::Check {
                name,
                field,
                cmp,
                value,
                pos,
            });
        }
        self.fail()
    }

    fn field(&mut self) -> PResult<Field> {
        let indexed = |p: &mut Self| -> PResult<Option<i64>> {
            if p.eat(&Tok::LBracket) {
                let n = p.int()?;
                p.expect(&Tok::RBracket)?;
                Ok(Some(n))
            } else {
                Ok(None)
            }
        };
        if self.eat_word("h") {
            return Ok(indexed(self)?.map_or(Field::H, Field::HAt));
        }
        if self.eat_word("delta") {
            return Ok(indexed(self)?.map_or(Field::Delta, Field::DeltaAt));
        }
        if self.eat_word("rank") {
            return Ok(Field::Rank);
        }
        if self.eat_word("rigidity") {
            return Ok(Field::Rigidity);
        }
        if self.eat_word("steps") {
            return Ok(Field::Steps);
        }
        if self.eat_word("mu") {
            self.expect(&Tok::LBracket)?;
            let (point, _) = self.name()?;
            self.expect(&Tok::Comma)?;
            let angle = self.rational()?;
            self.expect(&Tok::Comma)?;
            let ell = self.uint()?;
            self.expect(&Tok::RBracket)?;
            return Ok(Field::Mu { point, angle, ell });
        }
        self.fail()
    }

    fn cmp(&mut self) -> PResult<Cmp> {
        for (tok, cmp) in [
            (Tok::Eq, Cmp::Eq),
            (Tok::Ne, Cmp::Ne),
            (Tok::Le, Cmp::Le),
            (Tok::Lt, Cmp::Lt),
            (Tok::Ge, Cmp::Ge),
            (Tok::Gt, Cmp::Gt),
        ] {
            if self.eat(&tok) {
                return Ok(cmp);
            }
        }
        self.fail()
    }

    fn literal(&mut self) -> PResult<Literal> {
        if self.eat(&Tok::LBrace) {
            let mut entries = Vec::new();
            if !self.eat(&Tok::RBrace) {
                loop {
                    let pos = self.pos();
                    let k = self.int()?;
                    if entries.iter().any(|&(j, _)| j == k) {
                        return self.fail_at(pos, format!("key {k} appears twice"));
                    }
                    self.expect(&Tok::Colon)?;
                    let v = self.int()?;
                    entries.push((k, v));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RBrace)?;
            }
            return Ok(Literal::Map(entries));
        }
        self.expected.insert("`{`".into());
        Ok(Literal::Int(self.int()?))
    }

    fn unary(&mut self, pos: Pos, make: fn(Box<Expr>) -> ExprKind) -> PResult<Expr> {
        self.expect(&Tok::LParen)?;
        let arg = self.expr()?;
        self.expect(&Tok::RParen)?;
        Ok(Expr {
            kind: make(Box::new(arg)),
            pos,
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        if self.eat_word("line") {
            return self.line_args(pos);
        }
        if self.eat_word("mc") {
            self.expect(&Tok::LParen)?;
            let arg = Box::new(self.expr()?);
            let mut chi = None;
            if self.eat(&Tok::Comma) {
                self.expect_word("chi")?;
                self.expect(&Tok::Eq)?;
                let cpos = self.pos();
                let a = self.rational()?;
                if a.is_zero() {
                    return self.fail_at(cpos, "chi must lie in (0, 1)".into());
                }
                chi = Some(a);
            }
            self.expect(&Tok::RParen)?;
            return Ok(Expr {
                kind: ExprKind::Mc { arg, chi },
                pos,
            });
        }
        if self.eat_word("tensor") {
            self.expect(&Tok::LParen)?;
            let line = Box::new(self.expr()?);
            self.expect(&Tok::Comma)?;
            let arg = Box::new(self.expr()?);
            self.expect(&Tok::RParen)?;
            return Ok(Expr {
                kind: ExprKind::Tensor { line, arg },
                pos,
            });
        }
        if self.eat_word("tate") {
            self.expect(&Tok::LParen)?;
            let k = self.int()?;
            self.expect(&Tok::Comma)?;
            let arg = Box::new(self.expr()?);
            self.expect(&Tok::RParen)?;
            return Ok(Expr {
                kind: ExprKind::Tate { k, arg },
                pos,
            });
        }
        let unaries: [(&str, Unary); 5] = [
            ("sym2", ExprKind::Sym2),
            ("wedge2", ExprKind::Wedge2),
            ("wedge2t", ExprKind::Wedge2t),
            ("dual", ExprKind::Dual),
            ("katz", ExprKind::Katz),
        ];
        for (word, make) in unaries {
            if self.eat_word(word) {
                return self.unary(pos, make);
            }
        }
        let (name, _) = self.name()?;
        Ok(Expr {
            kind: ExprKind::Ident(name),
            pos,
        })
    }

    fn line_args(&mut self, pos: Pos) -> PResult<Expr> {
        self.expect(&Tok::LParen)?;
        let mut angles: Vec<(String, Angle)> = Vec::new();
        let mut level = None;
        if !self.eat(&Tok::RParen) {
            loop {
                let ipos = self.pos();
                if level.is_none() && self.eat_word("level") {
                    self.expect(&Tok::Eq)?;
                    level = Some(self.int()?);
                } else {
                    if level.is_some() {
                        self.expected.clear();
                        self.expected.insert("`)`".into());
                        return self.fail();
                    }
                    let (p, _) = self.name()?;
                    if angles.iter().any(|(q, _)| q == &p) {
                        return self.fail_at(ipos, format!("angle at `{p}` given twice"));
                    }
                    self.expect(&Tok::Colon)?;
                    angles.push((p, self.rational()?));
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        Ok(Expr {
            kind: ExprKind::Line { angles, level },
            pos,
        })
    }
}
