//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use khc::{
    mc_hodge, tate_twist, tensor_line, Angle, Error, FilteredBlock, HodgeSystem, JordanData,
    RankOneLine, Rational,
};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn a(s: &str) -> Angle {
    s.parse().unwrap()
}

pub fn points(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn line(pts: &[String], angles: &[&str], level: i32) -> RankOneLine {
    let pairs: Vec<(String, Angle)> = pts
        .iter()
        .cloned()
        .zip(angles.iter().map(|s| a(s)))
        .collect();
    RankOneLine::new(pts, &pairs, level).unwrap()
}

// ---------------------------------------------------------------------------
// Exact linear algebra

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

/// Rank by Gaussian elimination over the rationals.
pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let inv = Rational::one() / m[r][c];
        for x in &mut m[r][c..] {
            *x *= inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= p * f;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Graded nilpotent Jordan oracle

/// A nilpotent operator on a space with a basis graded by level, lowering
/// the level by one. `n` lists the nonzero entries `(row, col, value)`.
pub struct Graded {
    pub levels: Vec<i32>,
    pub n: Vec<(usize, usize, Rational)>,
}

impl Graded {
    fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for &(r, c, x) in &self.n {
            out[r] += x * v[c];
        }
        out
    }
}

/// Multiset of `(top, size)` of the graded Jordan blocks, read off from the
/// ranks of powers restricted to the filtration `V_{≥t}`.
pub fn graded_blocks(g: &Graded) -> BTreeMap<(i32, u32), usize> {
    let lo = *g.levels.iter().min().unwrap();
    let hi = *g.levels.iter().max().unwrap();
    let dim = g.levels.len();
    let max_size = (hi - lo + 1) as u32;
    // N is graded, so the rank on V_{≥t} is the sum of the ranks on the
    // graded pieces of level ≥ t.
    let mut piece_rank: BTreeMap<(i32, u32), i64> = BTreeMap::new();
    for l in lo..=hi {
        let mut cols: Vec<Vec<Rational>> = (0..dim)
            .filter(|&j| g.levels[j] == l)
            .map(|j| {
                let mut e = vec![Rational::zero(); dim];
                e[j] = Rational::one();
                e
            })
            .collect();
        for b in 1..=max_size + 1 {
            // N^{b-1} maps level l into level l - b + 1.
            let target = l - (b as i32 - 1);
            let m: Matrix = (0..dim)
                .filter(|&i| g.levels[i] == target)
                .map(|i| cols.iter().map(|c| c[i]).collect())
                .collect();
            piece_rank.insert((l, b), rank(&m) as i64);
            cols = cols.iter().map(|c| g.apply(c)).collect();
        }
    }
    let s = |t: i32, b: u32| -> i64 {
        if b > max_size + 1 {
            return 0;
        }
        (t.max(lo)..=hi).map(|l| piece_rank[&(l, b)]).sum()
    };
    let gg = |t: i32, b: u32| s(t, b) - s(t + 1, b);
    let h = |t: i32, b: u32| gg(t, b) - gg(t, b + 1);
    let mut out = BTreeMap::new();
    for t in lo..=hi {
        for b in 1..=max_size {
            let c = h(t, b) - h(t + 1, b + 1);
            assert!(c >= 0, "negative block count");
            if c > 0 {
                out.insert((t, b), c as usize);
            }
        }
    }
    out
}

/// `N₁ ⊗ 1 + 1 ⊗ N₂` on the tensor product of two filtered blocks.
pub fn tensor_oracle(b1: FilteredBlock, b2: FilteredBlock) -> Vec<FilteredBlock> {
    let (n1, n2) = (b1.size as usize, b2.size as usize);
    let idx = |i: usize, j: usize| i * n2 + j;
    let mut levels = vec![0; n1 * n2];
    let mut n = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            levels[idx(i, j)] = b1.top + b2.top - (i + j) as i32;
            if i + 1 < n1 {
                n.push((idx(i + 1, j), idx(i, j), Rational::one()));
            }
            if j + 1 < n2 {
                n.push((idx(i, j + 1), idx(i, j), Rational::one()));
            }
        }
    }
    expand(b1.angle + b2.angle, &graded_blocks(&Graded { levels, n }))
}

/// Symmetric (`sym = true`) or exterior square of one filtered block, on the
/// basis `e_i e_j` with `i ≤ j` (resp. `e_i ∧ e_j` with `i < j`).
pub fn square_oracle(b: FilteredBlock, sym: bool) -> Vec<FilteredBlock> {
    let n = b.size as usize;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .filter(|&(i, j)| sym || i < j)
        .collect();
    if pairs.is_empty() {
        return Vec::new();
    }
    let index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut m = Vec::new();
    let mut add = |from: usize, i: usize, j: usize, sign: i64| {
        if i >= n || j >= n {
            return;
        }
        let (key, s) = if i <= j {
            ((i, j), 1)
        } else {
            ((j, i), if sym { 1 } else { -1 })
        };
        if let Some(&k) = index.get(&key) {
            m.push((k, from, Rational::from_integer(sign * s)));
        }
    };
    for (from, &(i, j)) in pairs.iter().enumerate() {
        add(from, i + 1, j, 1);
        add(from, i, j + 1, 1);
    }
    let levels = pairs
        .iter()
        .map(|&(i, j)| 2 * b.top - (i + j) as i32)
        .collect();
    expand(b.angle + b.angle, &graded_blocks(&Graded { levels, n: m }))
}

fn expand(angle: Angle, blocks: &BTreeMap<(i32, u32), usize>) -> Vec<FilteredBlock> {
    let mut out = Vec::new();
    for (&(top, size), &c) in blocks {
        for _ in 0..c {
            out.push(FilteredBlock::new(angle, size, top));
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Centralizers

/// An explicit matrix in Jordan form; each angle gets a distinct rational
/// eigenvalue.
pub fn jordan_matrix(d: &JordanData) -> Matrix {
    let mut blocks = Vec::new();
    for (&(angle, ell), &m) in d.iter() {
        for _ in 0..m {
            blocks.push((angle.value(), ell as usize + 1));
        }
    }
    let n: usize = blocks.iter().map(|b| b.1).sum();
    let mut out = zeros(n, n);
    let mut at = 0;
    for (ev, size) in blocks {
        for k in 0..size {
            out[at + k][at + k] = ev;
            if k + 1 < size {
                out[at + k][at + k + 1] = Rational::one();
            }
        }
        at += size;
    }
    out
}

/// `dim {X : AX = XA}` as the nullity of `X ↦ AX − XA`.
pub fn commutant_dim(m: &Matrix) -> usize {
    let n = m.len();
    let mut big = zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                big[row][k * n + j] += m[i][k];
                big[row][i * n + k] -= m[k][j];
            }
        }
    }
    n * n - rank(&big)
}

pub fn rigidity_oracle(nu: &[JordanData], rank: u64) -> i64 {
    let r = nu.len() as i64 - 1;
    let mut index = (1 - r) * (rank * rank) as i64;
    for d in nu {
        index += commutant_dim(&jordan_matrix(d)) as i64;
    }
    index
}

// ---------------------------------------------------------------------------
// Random valid systems

const DENOMS: [i64; 5] = [1, 2, 3, 4, 6];

pub fn random_angle(rng: &mut StdRng) -> Angle {
    let d = *DENOMS.choose(rng).unwrap();
    Angle::new(rng.gen_range(0..d), d).unwrap()
}

pub fn random_line(rng: &mut StdRng, pts: &[String]) -> RankOneLine {
    let pairs: Vec<(String, Angle)> = pts.iter().map(|p| (p.clone(), random_angle(rng))).collect();
    RankOneLine::new(pts, &pairs, rng.gen_range(-1..=1)).unwrap()
}

/// Walks from random rank-one systems through random twists, middle
/// convolutions and Tate twists, returning every system reached.
pub fn random_systems(rng: &mut StdRng, count: usize, max_rank: u64) -> Vec<HodgeSystem> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let pts = points(rng.gen_range(2..=3));
        let mut s = random_line(rng, &pts).to_system();
        out.push(s.clone());
        for _ in 0..8 {
            let next = match rng.gen_range(0..6) {
                0 => Ok(tate_twist(&s, rng.gen_range(-2..=2))),
                1 | 2 => tensor_line(&random_line(rng, &pts), &s),
                _ => mc_hodge(&s, None),
            };
            match next {
                Ok(n) if n.rank() <= max_rank => {
                    s = n;
                    out.push(s.clone());
                }
                Ok(_) => break,
                Err(e) if e.is_internal() => panic!("internal error on a valid walk: {e}"),
                Err(
                    Error::NotScalarAtInfinity
                    | Error::ZeroRank
                    | Error::NegativeDimension(_)
                    | Error::NegativeHodgeNumber { .. },
                ) => continue,
                Err(e) => panic!("unexpected error on a valid walk: {e}"),
            }
            if out.len() >= count {
                break;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Random programs

/// A syntactically valid program, as canonical text and as a token list that
/// can be re-joined with arbitrary layout.
pub struct GeneratedProgram {
    pub canonical: String,
    pub tokens: Vec<String>,
}

impl GeneratedProgram {
    /// Joins the tokens with random whitespace and comments.
    pub fn noisy(&self, rng: &mut StdRng) -> String {
        const SEPS: [&str; 6] = [" ", "  ", "\n", "\t", " # note\n", "\n\n"];
        let wordy = |t: &str| {
            t.chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                let prev = &self.tokens[i - 1];
                let glued = prev.chars().last().is_some_and(|c| "<>!=".contains(c)) && t == "=";
                if (wordy(prev) && wordy(t)) || glued || rng.gen_bool(0.5) {
                    out.push_str(SEPS.choose(rng).unwrap());
                }
            }
            out.push_str(t);
        }
        out
    }
}

struct Gen<'a> {
    rng: &'a mut StdRng,
    points: Vec<String>,
    bound: Vec<String>,
    tokens: Vec<String>,
}

const POINT_NAMES: [&str; 6] = ["x1", "x2", "x3", "y", "z_0", "p7"];
const ANGLES: [&str; 8] = ["0", "1/2", "1/3", "2/3", "1/6", "5/6", "1/4", "3/7"];
const CHIS: [&str; 6] = ["1/2", "1/3", "2/3", "1/6", "5/6", "3/4"];

impl Gen<'_> {
    fn tok(&mut self, t: &str) {
        self.tokens.push(t.to_string());
    }

    /// Emits an integer token sequence and returns its canonical text.
    fn int(&mut self, lo: i64, hi: i64) -> String {
        let n = self.rng.gen_range(lo..=hi);
        if n < 0 {
            self.tok("-");
            self.tok(&(-n).to_string());
        } else {
            self.tok(&n.to_string());
        }
        n.to_string()
    }

    fn rational(&mut self, pool: &[&str]) -> String {
        let s = *pool.choose(self.rng).unwrap();
        if s == "0" && self.rng.gen_bool(0.3) {
            self.tok("0");
            self.tok("/");
            self.tok("5");
            return "0".into();
        }
        match s.split_once('/') {
            Some((n, d)) => {
                self.tok(n);
                self.tok("/");
                self.tok(d);
            }
            None => self.tok(s),
        }
        s.to_string()
    }

    fn line(&mut self) -> String {
        self.tok("line");
        self.tok("(");
        let mut pts = self.points.clone();
        pts.shuffle(self.rng);
        pts.truncate(self.rng.gen_range(0..=pts.len()));
        let mut items = Vec::new();
        for p in pts {
            if !items.is_empty() {
                self.tok(",");
            }
            self.tok(&p);
            self.tok(":");
            let r = self.rational(&ANGLES);
            items.push(format!("{p}: {r}"));
        }
        if self.rng.gen_bool(0.3) {
            if !items.is_empty() {
                self.tok(",");
            }
            self.tok("level");
            self.tok("=");
            let l = self.int(-3, 3);
            items.push(format!("level = {l}"));
        }
        self.tok(")");
        format!("line({})", items.join(", "))
    }

    fn expr(&mut self, depth: u32) -> String {
        let choice = if depth == 0 {
            0
        } else {
            self.rng.gen_range(0..10)
        };
        match choice {
            0 | 1 if !self.bound.is_empty() && self.rng.gen_bool(0.6) => {
                let n = self.bound.choose(self.rng).unwrap().clone();
                self.tok(&n);
                n
            }
            0 | 1 => self.line(),
            2 => {
                self.tok("mc");
                self.tok("(");
                let e = self.expr(depth - 1);
                let out = if self.rng.gen_bool(0.5) {
                    self.tok(",");
                    self.tok("chi");
                    self.tok("=");
                    let c = self.rational(&CHIS);
                    format!("mc({e}, chi = {c})")
                } else {
                    format!("mc({e})")
                };
                self.tok(")");
                out
            }
            3 => {
                self.tok("tensor");
                self.tok("(");
                let l = self.line();
                self.tok(",");
                let e = self.expr(depth - 1);
                self.tok(")");
                format!("tensor({l}, {e})")
            }
            4 => {
                self.tok("tate");
                self.tok("(");
                let k = self.int(-2, 2);
                self.tok(",");
                let e = self.expr(depth - 1);
                self.tok(")");
                format!("tate({k}, {e})")
            }
            _ => {
                let f = *["sym2", "wedge2", "wedge2t", "dual", "katz"]
                    .choose(self.rng)
                    .unwrap();
                self.tok(f);
                self.tok("(");
                let e = self.expr(depth - 1);
                self.tok(")");
                format!("{f}({e})")
            }
        }
    }

    fn map_literal(&mut self) -> String {
        self.tok("{");
        let mut keys: Vec<i64> = (-2..=5).collect();
        keys.shuffle(self.rng);
        keys.truncate(self.rng.gen_range(0..=3));
        let mut items = Vec::new();
        for k in keys {
            if !items.is_empty() {
                self.tok(",");
            }
            if k < 0 {
                self.tok("-");
                self.tok(&(-k).to_string());
            } else {
                self.tok(&k.to_string());
            }
            self.tok(":");
            let v = self.int(-4, 4);
            items.push(format!("{k}: {v}"));
        }
        self.tok("}");
        format!("{{{}}}", items.join(", "))
    }

    fn check(&mut self) -> String {
        let name = self.bound.choose(self.rng).unwrap().clone();
        self.tok("check");
        self.tok(&name);
        self.tok(".");
        let (field, map_field, int_field) = match self.rng.gen_range(0..8) {
            0 => {
                self.tok("h");
                ("h".to_string(), true, false)
            }
            1 => {
                self.tok("delta");
                ("delta".to_string(), true, false)
            }
            2 => {
                self.tok("h");
                self.tok("[");
                let p = self.int(-3, 6);
                self.tok("]");
                (format!("h[{p}]"), false, true)
            }
            3 => {
                self.tok("delta");
                self.tok("[");
                let p = self.int(-3, 6);
                self.tok("]");
                (format!("delta[{p}]"), false, true)
            }
            4 => {
                let p = self.points.choose(self.rng).unwrap().clone();
                self.tok("mu");
                self.tok("[");
                self.tok(&p);
                self.tok(",");
                let r = self.rational(&ANGLES);
                self.tok(",");
                let l = self.int(0, 3);
                self.tok("]");
                (format!("mu[{p}, {r}, {l}]"), true, true)
            }
            f => {
                let w = ["rank", "rigidity", "steps"][f as usize % 3];
                self.tok(w);
                (w.to_string(), false, true)
            }
        };
        let use_map = map_field && (!int_field || self.rng.gen_bool(0.5));
        let cmps: &[&str] = if use_map {
            &["=", "!="]
        } else {
            &["=", "!=", "<", "<=", ">", ">="]
        };
        let cmp = *cmps.choose(self.rng).unwrap();
        self.tok(cmp);
        let lit = if use_map {
            self.map_literal()
        } else {
            self.int(-9, 9)
        };
        self.tok(";");
        format!("check {name}.{field} {cmp} {lit};")
    }
}

/// A random program that parses and passes the static checks. It need not
/// evaluate successfully.
pub fn random_program(rng: &mut StdRng) -> GeneratedProgram {
    let mut names: Vec<String> = POINT_NAMES.iter().map(|s| s.to_string()).collect();
    names.shuffle(rng);
    names.truncate(rng.gen_range(1..=4));
    let mut g = Gen {
        rng,
        points: names.clone(),
        bound: Vec::new(),
        tokens: Vec::new(),
    };
    g.tok("points");
    for (i, p) in names.iter().enumerate() {
        if i > 0 {
            g.tok(",");
        }
        g.tok(p);
    }
    g.tok(";");
    let mut lines = vec![format!("points {};", names.join(", "))];
    let n = g.rng.gen_range(1..=10);
    for i in 0..n {
        let kind = if g.bound.is_empty() {
            0
        } else {
            g.rng.gen_range(0..4)
        };
        match kind {
            0 | 1 => {
                let name = format!("V{i}");
                g.tok("let");
                g.tok(&name);
                g.tok("=");
                let depth = g.rng.gen_range(0..=3);
                let e = g.expr(depth);
                g.tok(";");
                lines.push(format!("let {name} = {e};"));
                g.bound.push(name);
            }
            2 => {
                let name = g.bound.choose(g.rng).unwrap().clone();
                g.tok("emit");
                g.tok(&name);
                g.tok(";");
                lines.push(format!("emit {name};"));
            }
            _ => {
                let c = g.check();
                lines.push(c);
            }
        }
    }
    let mut canonical = lines.join("\n");
    canonical.push('\n');
    GeneratedProgram {
        canonical,
        tokens: g.tokens,
    }
}
