//! Symmetric and exterior squares of systems with Hodge data, via the
//! decomposition of tensor products of filtered Jordan blocks.

use std::collections::BTreeMap;

use crate::angle::Angle;
use crate::data::{mu_from_nu, BlockKey, HodgeBlockData, StoreKind};
use crate::error::{Error, Result};
use crate::system::{HodgeSystem, Pairing};

/// One Jordan block together with the Hodge levels it occupies:
/// `top, top − 1, ..., top − size + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FilteredBlock {
    pub angle: Angle,
    pub size: u32,
    pub top: i32,
}

impl FilteredBlock {
    pub fn new(angle: Angle, size: u32, top: i32) -> Self {
        assert!(size >= 1, "a Jordan block has positive size");
        FilteredBlock { angle, size, top }
    }

    fn key(self) -> BlockKey {
        BlockKey::new(self.top, self.angle, self.size - 1)
    }
}

/// Jordan decomposition of `b1 ⊗ b2`.
pub fn block_tensor(b1: FilteredBlock, b2: FilteredBlock) -> Vec<FilteredBlock> {
    let n = b1.size.min(b2.size);
    (0..n)
        .map(|k| {
            FilteredBlock::new(
                b1.angle + b2.angle,
                b1.size + b2.size - 1 - 2 * k,
                b1.top + b2.top - k as i32,
            )
        })
        .collect()
}

fn self_square(b: FilteredBlock, parity: u32) -> Vec<FilteredBlock> {
    (0..b.size)
        .filter(|k| k % 2 == parity)
        .map(|k| {
            FilteredBlock::new(
                b.angle + b.angle,
                2 * b.size - 1 - 2 * k,
                2 * b.top - k as i32,
            )
        })
        .collect()
}

pub fn block_sym2(b: FilteredBlock) -> Vec<FilteredBlock> {
    self_square(b, 0)
}

pub fn block_wedge2(b: FilteredBlock) -> Vec<FilteredBlock> {
    self_square(b, 1)
}

/// Expands a block store into one entry per Jordan block.
pub fn blocks_of(data: &HodgeBlockData) -> Vec<FilteredBlock> {
    data.iter()
        .flat_map(|(k, &m)| {
            std::iter::repeat_n(FilteredBlock::new(k.angle, k.ell + 1, k.level), m as usize)
        })
        .collect()
}

fn store_of(kind: StoreKind, blocks: &[FilteredBlock]) -> HodgeBlockData {
    HodgeBlockData::from_entries(kind, blocks.iter().map(|b| (b.key(), 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Square {
    Sym,
    Wedge,
}

fn square_blocks(blocks: &[FilteredBlock], which: Square) -> Vec<FilteredBlock> {
    let mut out = Vec::new();
    for (i, &b) in blocks.iter().enumerate() {
        out.extend(match which {
            Square::Sym => block_sym2(b),
            Square::Wedge => block_wedge2(b),
        });
        for &c in &blocks[i + 1..] {
            out.extend(block_tensor(b, c));
        }
    }
    out
}

fn square_hodge(hodge: &BTreeMap<i32, u32>, which: Square) -> BTreeMap<i32, u32> {
    let mut out = BTreeMap::new();
    let levels: Vec<(i32, u32)> = hodge.iter().map(|(&p, &h)| (p, h)).collect();
    for (i, &(j, hj)) in levels.iter().enumerate() {
        let diag = match which {
            Square::Sym => hj * (hj + 1) / 2,
            Square::Wedge => hj * hj.saturating_sub(1) / 2,
        };
        *out.entry(2 * j).or_insert(0) += diag;
        for &(k, hk) in &levels[i + 1..] {
            *out.entry(j + k).or_insert(0) += hj * hk;
        }
    }
    out.retain(|_, h| *h != 0);
    out
}

/// The eigenvalue carried by each Hodge level at each point, for systems
/// with all Hodge numbers at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAngleProfile {
    /// Indexed by level, then by point (finite points in order, infinity last).
    pub angles: BTreeMap<i32, Vec<Angle>>,
}

impl LevelAngleProfile {
    pub fn get(&self, p: i32, point: usize) -> Option<Angle> {
        self.angles.get(&p).map(|v| v[point])
    }
}

fn ensure_multiplicity_free(s: &HodgeSystem) -> Result<()> {
    match s.hodge().iter().find(|(_, &h)| h > 1) {
        Some((&level, &value)) => Err(Error::NotMultiplicityFree { level, value }),
        None => Ok(()),
    }
}

pub fn level_angle_profile(s: &HodgeSystem) -> Result<LevelAngleProfile> {
    ensure_multiplicity_free(s)?;
    let nu = s.all_nu()?;
    let mut angles = BTreeMap::new();
    for &p in s.hodge().keys() {
        let row = nu
            .iter()
            .map(|d| {
                d.iter()
                    .find(|(k, _)| k.covers(p))
                    .map(|(k, _)| k.angle)
                    .ok_or_else(|| Error::Invariant(format!("level {p} is not covered")))
            })
            .collect::<Result<Vec<_>>>()?;
        angles.insert(p, row);
    }
    Ok(LevelAngleProfile { angles })
}

/// Degrees of the graded pieces of a square of a multiplicity-free system.
/// Each pair of levels contributes the sum of their degrees, plus one at
/// every point where the two angles add up past one.
fn square_degrees(s: &HodgeSystem, which: Square) -> Result<BTreeMap<i32, i64>> {
    let profile = level_angle_profile(s)?;
    let levels: Vec<i32> = s.hodge().keys().copied().collect();
    let shift = |j: i32, k: i32| -> i64 {
        let (rj, rk) = (&profile.angles[&j], &profile.angles[&k]);
        rj.iter()
            .zip(rk)
            .filter(|(a, b)| a.value() + b.value() >= 1.into())
            .count() as i64
    };
    let mut out = BTreeMap::new();
    for (i, &j) in levels.iter().enumerate() {
        if which == Square::Sym {
            *out.entry(2 * j).or_insert(0) += 2 * s.delta(j) + shift(j, j);
        }
        for &k in &levels[i + 1..] {
            *out.entry(j + k).or_insert(0) += s.delta(j) + s.delta(k) + shift(j, k);
        }
    }
    Ok(out)
}

fn square_pairing(p: Pairing) -> Pairing {
    match p {
        Pairing::Symmetric | Pairing::Skew => Pairing::Symmetric,
        other => other,
    }
}

fn square(s: &HodgeSystem, which: Square) -> Result<HodgeSystem> {
    let hodge = square_hodge(s.hodge(), which);
    if hodge.is_empty() {
        return Err(Error::ZeroRank);
    }
    let degrees = square_degrees(s, which)?;
    let mut nu = s.all_nu()?;
    let infinity = store_of(
        StoreKind::Nearby,
        &square_blocks(&blocks_of(&nu.pop().expect("infinity")), which),
    );
    let local = nu
        .iter()
        .map(|d| {
            mu_from_nu(&store_of(
                StoreKind::Nearby,
                &square_blocks(&blocks_of(d), which),
            ))
        })
        .collect();
    s.with_data(local, infinity, hodge, degrees, square_pairing(s.pairing()))
        .finish()
}

pub fn sym2(s: &HodgeSystem) -> Result<HodgeSystem> {
    square(s, Square::Sym)
}

pub fn wedge2(s: &HodgeSystem) -> Result<HodgeSystem> {
    square(s, Square::Wedge)
}

/// For a rank-four system with a skew form, the rank-five complement of the
/// trivial line spanned by the form inside `Λ²`.
pub fn wedge2_reduced(s: &HodgeSystem) -> Result<HodgeSystem> {
    if s.rank() != 4 {
        return Err(Error::ShapeMismatch(format!(
            "rank {} instead of 4",
            s.rank()
        )));
    }
    if s.pairing() != Pairing::Skew {
        return Err(Error::ShapeMismatch(format!(
            "pairing is {} instead of skew",
            s.pairing()
        )));
    }
    let levels: Vec<i32> = s.hodge().keys().copied().collect();
    if levels.len() != 4 {
        return Err(Error::ShapeMismatch("Hodge numbers are not all one".into()));
    }
    if levels[0] + levels[3] != levels[1] + levels[2] {
        return Err(Error::ShapeMismatch(format!(
            "levels {levels:?} are not symmetric about a center"
        )));
    }
    let p_e = levels[0] + levels[3];
    let w = wedge2(s)?;
    let mut nu = w.all_nu()?;
    let e = BlockKey::new(p_e, Angle::ZERO, 0);
    let r = s.points().len();
    for (i, d) in nu.iter_mut().enumerate() {
        if !d.remove(e, 1) {
            let point = if i < r {
                s.points()[i].clone()
            } else {
                "infinity".into()
            };
            return Err(Error::MissingTrivialBlock { point, level: p_e });
        }
    }
    let infinity = nu.pop().expect("infinity");
    let local = nu.iter().map(mu_from_nu).collect();
    let mut hodge = w.hodge().clone();
    *hodge.get_mut(&p_e).expect("centre level is occupied") -= 1;
    let mut degrees = w.degrees().clone();
    if hodge.get(&p_e) == Some(&0) {
        degrees.remove(&p_e);
    }
    w.with_data(local, infinity, hodge, degrees, Pairing::Symmetric)
        .finish()
}

/// Solves for the degrees `δ^p` of a system whose projective `H¹` Hodge
/// numbers are known, working down from the top level.
pub fn solve_degrees_h1vanishing(
    locals: &[HodgeBlockData],
    infinity: &HodgeBlockData,
    hodge: &BTreeMap<i32, u32>,
    known_h1: &BTreeMap<i32, u32>,
) -> Result<BTreeMap<i32, i64>> {
    let (Some(&lo), Some(&hi)) = (hodge.keys().next(), hodge.keys().next_back()) else {
        return Err(Error::ZeroRank);
    };
    let h = |p: i32| hodge.get(&p).copied().unwrap_or(0) as i64;
    let mut degrees = BTreeMap::new();
    let mut above = 0i64;
    for p in (lo..=hi + 1).rev() {
        let mut v = known_h1.get(&p).copied().unwrap_or(0) as i64 + above + h(p);
        v += infinity.prim(Angle::ZERO, p - 1) as i64;
        for d in locals {
            v -= d.level_total_where(p - 1, |a| !a.is_zero()) as i64;
            v -= d.total(Angle::ZERO, p) as i64;
        }
        if h(p - 1) == 0 && v != 0 {
            return Err(Error::Inconsistent(format!(
                "degree {v} forced at level {} where there is no Hodge bundle",
                p - 1
            )));
        }
        if v != 0 {
            degrees.insert(p - 1, v);
        }
        above = v;
    }
    Ok(degrees)
}
