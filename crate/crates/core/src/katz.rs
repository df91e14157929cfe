//! Rigidity index and Katz's reduction of a rigid system to rank one by
//! alternating rank-one twists and middle convolutions.

use crate::angle::Angle;
use crate::conv::{mc_hodge, mc_local};
use crate::data::JordanData;
use crate::error::{Error, Result};
use crate::system::{forget_hodge, HodgeSystem, MonodromySystem, RankOneLine};
use crate::twist::{tensor_line, tensor_line_monodromy};

/// Dimension of the centralizer of a matrix with the given Jordan data.
pub fn centralizer_dim(nu: &JordanData) -> u64 {
    let mut total = 0;
    for angle in nu.angles() {
        let blocks: Vec<(u64, u64)> = nu
            .iter()
            .filter(|((a, _), _)| *a == angle)
            .map(|(&(_, l), &m)| (l as u64 + 1, m as u64))
            .collect();
        for &(s1, m1) in &blocks {
            for &(s2, m2) in &blocks {
                total += m1 * m2 * s1.min(s2);
            }
        }
    }
    total
}

/// `(1 − r)·rank² + Σ dim C(A_i)` over all `r + 1` points; 2 means rigid.
pub fn rigidity_index(s: &MonodromySystem) -> Result<i64> {
    let r = s.points().len() as i64;
    let rank = s.rank() as i64;
    let mut index = (1 - r) * rank * rank;
    for nu in s.all_nu()? {
        index += centralizer_dim(&nu) as i64;
    }
    Ok(index)
}

/// Picks at each finite point the eigenvalue with the most Jordan blocks
/// (smallest angle on ties) and returns the twist that makes it trivial.
pub fn choose_allowed_line(s: &MonodromySystem) -> Result<RankOneLine> {
    if s.rank() < 2 {
        return Err(Error::Inconsistent(
            "reduction needs rank at least 2".into(),
        ));
    }
    let a_inf = s.infinity_scalar().ok_or(Error::NotScalarAtInfinity)?;
    let mut chosen = Vec::with_capacity(s.points().len());
    for i in 0..s.points().len() {
        let nu = s.nu(i)?;
        let best = nu
            .angles()
            .into_iter()
            .max_by(|&x, &y| nu.prim(x).cmp(&nu.prim(y)).then(y.cmp(&x)))
            .expect("positive rank");
        chosen.push(best);
    }
    let after = a_inf + chosen.iter().copied().sum::<Angle>();
    if after.is_zero() {
        return Err(Error::NotAllowed);
    }
    let angles: Vec<(String, Angle)> = s
        .points()
        .iter()
        .cloned()
        .zip(chosen.into_iter().map(Angle::inverse))
        .collect();
    RankOneLine::new(s.points(), &angles, 0)
}

/// Systems on which the reduction loop can run.
pub trait Reducible: Clone {
    fn rank(&self) -> u64;
    fn monodromy(&self) -> MonodromySystem;
    fn twist(&self, line: &RankOneLine) -> Result<Self>;
    fn convolve(&self, chi: Angle) -> Result<Self>;
}

impl Reducible for HodgeSystem {
    fn rank(&self) -> u64 {
        HodgeSystem::rank(self)
    }

    fn monodromy(&self) -> MonodromySystem {
        forget_hodge(self)
    }

    fn twist(&self, line: &RankOneLine) -> Result<Self> {
        tensor_line(line, self)
    }

    fn convolve(&self, chi: Angle) -> Result<Self> {
        mc_hodge(self, Some(chi))
    }
}

impl Reducible for MonodromySystem {
    fn rank(&self) -> u64 {
        MonodromySystem::rank(self)
    }

    fn monodromy(&self) -> MonodromySystem {
        self.clone()
    }

    fn twist(&self, line: &RankOneLine) -> Result<Self> {
        tensor_line_monodromy(line, self)
    }

    fn convolve(&self, chi: Angle) -> Result<Self> {
        mc_local(self, chi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatzStep<S> {
    pub chosen_line: RankOneLine,
    pub chi: Angle,
    pub before_rank: u64,
    pub after_rank: u64,
    pub snapshot: S,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatzTrace<S> {
    pub steps: Vec<KatzStep<S>>,
    pub terminal: S,
}

pub fn katz_reduce<S: Reducible>(s: &S) -> Result<KatzTrace<S>> {
    let m = s.monodromy();
    let index = rigidity_index(&m)?;
    if index != 2 {
        return Err(Error::NotRigid(index));
    }
    if m.infinity_scalar().is_none() {
        return Err(Error::NotScalarAtInfinity);
    }
    let cap = s.rank() as usize + 1;
    let mut steps = Vec::new();
    let mut current = s.clone();
    while current.rank() > 1 {
        if steps.len() >= cap {
            return Err(Error::IterationCapExceeded(cap));
        }
        let line = choose_allowed_line(&current.monodromy())?;
        let twisted = current.twist(&line)?;
        let chi = twisted
            .monodromy()
            .infinity_scalar()
            .filter(|a| !a.is_zero())
            .ok_or_else(|| Error::Invariant("twist did not give a nontrivial scalar".into()))?;
        let next = twisted.convolve(chi)?;
        let before_rank = current.rank();
        let after_rank = next.rank();
        if after_rank >= before_rank {
            return Err(Error::Invariant(format!(
                "reduction step did not lower the rank ({before_rank} -> {after_rank})"
            )));
        }
        steps.push(KatzStep {
            chosen_line: line,
            chi,
            before_rank,
            after_rank,
            snapshot: next.clone(),
        });
        current = next;
    }
    Ok(KatzTrace {
        steps,
        terminal: current,
    })
}
