//! Sparse Jordan-block multiplicities, with and without Hodge levels.
//!
//! A key `(p, λ, ℓ)` counts Jordan blocks of size `ℓ + 1` with eigenvalue
//! `λ` whose primitive (top) Hodge level is `p`. Such a block occupies the
//! consecutive levels `p, p - 1, ..., p - ℓ`.
//!
//! The same container holds two conventions. A *nearby* store lists the
//! blocks of the local monodromy itself. A *vanishing* store is used at
//! finite points: for `λ ≠ 1` it agrees with the nearby store, while the
//! unipotent part is shifted, `μ_{1,ℓ} = ν_{1,ℓ+1}`, and blocks of size one
//! with eigenvalue `1` are not recorded.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StoreKind {
    Nearby,
    Vanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockKey {
    pub level: i32,
    pub angle: Angle,
    pub ell: u32,
}

impl BlockKey {
    pub fn new(level: i32, angle: Angle, ell: u32) -> Self {
        BlockKey { level, angle, ell }
    }

    pub fn size(&self) -> u32 {
        self.ell + 1
    }

    /// Does a block with this key occupy level `p`?
    pub fn covers(&self, p: i32) -> bool {
        p <= self.level && p >= self.level - self.ell as i32
    }
}

/// Hodge-refined block data (`ν^p_{λ,ℓ}` or `μ^p_{λ,ℓ}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeBlockData {
    kind: StoreKind,
    entries: BTreeMap<BlockKey, u32>,
}

impl HodgeBlockData {
    pub fn new(kind: StoreKind) -> Self {
        HodgeBlockData {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn nearby() -> Self {
        Self::new(StoreKind::Nearby)
    }

    pub fn vanishing() -> Self {
        Self::new(StoreKind::Vanishing)
    }

    pub fn from_entries<I>(kind: StoreKind, entries: I) -> Self
    where
        I: IntoIterator<Item = (BlockKey, u32)>,
    {
        let mut data = Self::new(kind);
        for (k, m) in entries {
            data.add(k, m);
        }
        data
    }

    pub fn kind(&self) -> StoreKind {
        self.kind
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&mut self, key: BlockKey, mult: u32) {
        if mult > 0 {
            *self.entries.entry(key).or_insert(0) += mult;
        }
    }

    /// Removes `mult` copies of `key`; returns false if there are fewer.
    pub fn remove(&mut self, key: BlockKey, mult: u32) -> bool {
        match self.entries.get_mut(&key) {
            Some(m) if *m >= mult => {
                *m -= mult;
                if *m == 0 {
                    self.entries.remove(&key);
                }
                true
            }
            _ => false,
        }
    }

    pub fn get(&self, level: i32, angle: Angle, ell: u32) -> u32 {
        self.entries
            .get(&BlockKey::new(level, angle, ell))
            .copied()
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BlockKey, &u32)> + '_ {
        self.entries.iter()
    }

    pub fn entries(&self) -> &BTreeMap<BlockKey, u32> {
        &self.entries
    }

    /// Rotates every eigenvalue: `λ ↦ λ·λ(shift)`.
    pub fn rotate(&self, shift: Angle) -> Self {
        Self::from_entries(
            self.kind,
            self.entries
                .iter()
                .map(|(k, &m)| (BlockKey::new(k.level, k.angle + shift, k.ell), m)),
        )
    }

    pub fn shift_levels(&self, k: i32) -> Self {
        Self::from_entries(
            self.kind,
            self.entries
                .iter()
                .map(|(key, &m)| (BlockKey::new(key.level + k, key.angle, key.ell), m)),
        )
    }

    /// Number of blocks with eigenvalue `angle` and top level `p`.
    pub fn prim(&self, angle: Angle, p: i32) -> u64 {
        self.entries
            .iter()
            .filter(|(k, _)| k.angle == angle && k.level == p)
            .map(|(_, &m)| m as u64)
            .sum()
    }

    /// Number of blocks with eigenvalue `angle` and bottom level `p`.
    pub fn coprim(&self, angle: Angle, p: i32) -> u64 {
        self.entries
            .iter()
            .filter(|(k, _)| k.angle == angle && k.level - k.ell as i32 == p)
            .map(|(_, &m)| m as u64)
            .sum()
    }

    /// Dimension of level `p` in the generalized eigenspace of `angle`.
    pub fn total(&self, angle: Angle, p: i32) -> u64 {
        self.level_total_where(p, |a| a == angle)
    }

    /// Dimension of level `p` summed over eigenvalues accepted by `pred`.
    pub fn level_total_where(&self, p: i32, pred: impl Fn(Angle) -> bool) -> u64 {
        self.entries
            .iter()
            .filter(|(k, _)| pred(k.angle) && k.covers(p))
            .map(|(_, &m)| m as u64)
            .sum()
    }

    pub fn level_total(&self, p: i32) -> u64 {
        self.level_total_where(p, |_| true)
    }

    /// Total dimension of the store (sum of block sizes).
    pub fn dimension(&self) -> u64 {
        self.entries
            .iter()
            .map(|(k, &m)| k.size() as u64 * m as u64)
            .sum()
    }

    pub fn levels(&self) -> impl Iterator<Item = i32> + '_ {
        self.entries
            .keys()
            .flat_map(|k| (k.level - k.ell as i32)..=k.level)
    }

    /// Forgets the Hodge levels.
    pub fn forget_levels(&self) -> JordanData {
        JordanData::from_entries(
            self.kind,
            self.entries.iter().map(|(k, &m)| ((k.angle, k.ell), m)),
        )
    }

    /// `Σ angle · size · multiplicity`, the trace of the canonical residue.
    pub fn residue_trace(&self) -> crate::angle::Rational {
        self.entries
            .iter()
            .map(|(k, &m)| k.angle.value() * (k.size() as i64 * m as i64))
            .sum()
    }
}

/// `(prim, coprim, total)` of `data` for eigenvalue `angle` at level `p`.
pub fn prim_coprim(data: &HodgeBlockData, angle: Angle, p: i32) -> (u64, u64, u64) {
    (
        data.prim(angle, p),
        data.coprim(angle, p),
        data.total(angle, p),
    )
}

/// Recovers nearby-cycle data at a finite point from its vanishing-cycle data
/// and the Hodge numbers of the system.
pub fn recover_nu(
    local: &HodgeBlockData,
    hodge: &BTreeMap<i32, u32>,
    point: &str,
) -> Result<HodgeBlockData> {
    debug_assert_eq!(local.kind(), StoreKind::Vanishing);
    let mut nu = HodgeBlockData::nearby();
    for (k, &m) in local.iter() {
        if k.angle.is_zero() {
            nu.add(BlockKey::new(k.level, k.angle, k.ell + 1), m);
        } else {
            nu.add(*k, m);
        }
    }
    let mut levels: Vec<i32> = hodge.keys().copied().collect();
    levels.extend(local.levels().flat_map(|p| [p, p - 1]));
    levels.sort_unstable();
    levels.dedup();
    for p in levels {
        let h = hodge.get(&p).copied().unwrap_or(0) as i64;
        let value = h - local.level_total(p) as i64 - local.coprim(Angle::ZERO, p + 1) as i64;
        if value < 0 {
            return Err(Error::NegativeMultiplicity {
                point: point.to_string(),
                level: p,
                value,
            });
        }
        nu.add(BlockKey::new(p, Angle::ZERO, 0), value as u32);
    }
    Ok(nu)
}

/// Vanishing-cycle data of a nearby-cycle store.
pub fn mu_from_nu(nu: &HodgeBlockData) -> HodgeBlockData {
    let mut mu = HodgeBlockData::vanishing();
    for (k, &m) in nu.iter() {
        if !k.angle.is_zero() {
            mu.add(*k, m);
        } else if k.ell > 0 {
            mu.add(BlockKey::new(k.level, k.angle, k.ell - 1), m);
        }
    }
    mu
}

/// Jordan data without Hodge levels: `(λ, ℓ) ↦` number of blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanData {
    kind: StoreKind,
    entries: BTreeMap<(Angle, u32), u32>,
}

impl JordanData {
    pub fn new(kind: StoreKind) -> Self {
        JordanData {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries<I>(kind: StoreKind, entries: I) -> Self
    where
        I: IntoIterator<Item = ((Angle, u32), u32)>,
    {
        let mut data = Self::new(kind);
        for (k, m) in entries {
            data.add(k.0, k.1, m);
        }
        data
    }

    pub fn kind(&self) -> StoreKind {
        self.kind
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&mut self, angle: Angle, ell: u32, mult: u32) {
        if mult > 0 {
            *self.entries.entry((angle, ell)).or_insert(0) += mult;
        }
    }

    pub fn get(&self, angle: Angle, ell: u32) -> u32 {
        self.entries.get(&(angle, ell)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Angle, u32), &u32)> + '_ {
        self.entries.iter()
    }

    pub fn angles(&self) -> Vec<Angle> {
        let mut v: Vec<Angle> = self.entries.keys().map(|k| k.0).collect();
        v.dedup();
        v
    }

    pub fn rotate(&self, shift: Angle) -> Self {
        Self::from_entries(
            self.kind,
            self.entries.iter().map(|(&(a, l), &m)| ((a + shift, l), m)),
        )
    }

    pub fn map_angles(&self, f: impl Fn(Angle) -> Angle) -> Self {
        Self::from_entries(
            self.kind,
            self.entries.iter().map(|(&(a, l), &m)| ((f(a), l), m)),
        )
    }

    /// Number of blocks with eigenvalue `angle`.
    pub fn prim(&self, angle: Angle) -> u64 {
        self.entries
            .iter()
            .filter(|((a, _), _)| *a == angle)
            .map(|(_, &m)| m as u64)
            .sum()
    }

    /// Dimension of the generalized eigenspace of `angle`.
    pub fn total(&self, angle: Angle) -> u64 {
        self.entries
            .iter()
            .filter(|((a, _), _)| *a == angle)
            .map(|((_, l), &m)| (*l as u64 + 1) * m as u64)
            .sum()
    }

    pub fn dimension(&self) -> u64 {
        self.entries
            .iter()
            .map(|((_, l), &m)| (*l as u64 + 1) * m as u64)
            .sum()
    }

    pub fn residue_trace(&self) -> crate::angle::Rational {
        self.entries
            .iter()
            .map(|((a, l), &m)| a.value() * ((*l as i64 + 1) * m as i64))
            .sum()
    }

    /// The single eigenvalue of a scalar matrix, if the data is one.
    pub fn scalar(&self) -> Option<Angle> {
        let mut it = self.entries.keys();
        let (a, l) = *it.next()?;
        (l == 0 && it.next().is_none()).then_some(a)
    }
}

/// Monodromy-level version of [`recover_nu`].
pub fn recover_nu_plain(local: &JordanData, rank: u64, point: &str) -> Result<JordanData> {
    let mut nu = JordanData::new(StoreKind::Nearby);
    for (&(a, l), &m) in local.iter() {
        if a.is_zero() {
            nu.add(a, l + 1, m);
        } else {
            nu.add(a, l, m);
        }
    }
    let value = rank as i64 - local.dimension() as i64 - local.prim(Angle::ZERO) as i64;
    if value < 0 {
        return Err(Error::NegativeMultiplicity {
            point: point.to_string(),
            level: 0,
            value,
        });
    }
    nu.add(Angle::ZERO, 0, value as u32);
    Ok(nu)
}

pub fn mu_from_nu_plain(nu: &JordanData) -> JordanData {
    let mut mu = JordanData::new(StoreKind::Vanishing);
    for (&(a, l), &m) in nu.iter() {
        if !a.is_zero() {
            mu.add(a, l, m);
        } else if l > 0 {
            mu.add(a, l - 1, m);
        }
    }
    mu
}
