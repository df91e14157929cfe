//! Local systems on a punctured projective line, described by their local
//! monodromy, Hodge numbers and the degrees of the graded Hodge bundles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angle::{Angle, Rational};
use crate::data::{
    mu_from_nu_plain, recover_nu, recover_nu_plain, BlockKey, HodgeBlockData, JordanData, StoreKind,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    None,
    Symmetric,
    Skew,
    #[default]
    Unknown,
}

impl Pairing {
    /// Exchanges symmetric and skew forms.
    pub fn flip(self) -> Self {
        match self {
            Pairing::Symmetric => Pairing::Skew,
            Pairing::Skew => Pairing::Symmetric,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pairing::None => "none",
            Pairing::Symmetric => "symmetric",
            Pairing::Skew => "skew",
            Pairing::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn is_real_angle(a: Angle) -> bool {
    a.is_zero() || a == Angle::new(1, 2).expect("nonzero denominator")
}

fn check_points(points: &[String]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::NoPoints);
    }
    let mut seen = BTreeSet::new();
    for p in points {
        if !seen.insert(p.as_str()) {
            return Err(Error::Inconsistent(format!("point `{p}` listed twice")));
        }
    }
    Ok(())
}

/// A unitary rank-one local system, given by its angles at the finite points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneLine {
    points: Vec<String>,
    angles: Vec<Angle>,
    level_offset: i32,
}

impl RankOneLine {
    /// Points not mentioned in `angles` get angle zero.
    pub fn new(points: &[String], angles: &[(String, Angle)], level_offset: i32) -> Result<Self> {
        check_points(points)?;
        let mut values = vec![Angle::ZERO; points.len()];
        let mut assigned = BTreeSet::new();
        for (name, a) in angles {
            let i = points
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| Error::UnknownPoint(name.clone()))?;
            if !assigned.insert(i) {
                return Err(Error::Inconsistent(format!(
                    "angle at `{name}` given twice"
                )));
            }
            values[i] = *a;
        }
        Ok(RankOneLine {
            points: points.to_vec(),
            angles: values,
            level_offset,
        })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn angle_at(&self, point: &str) -> Option<Angle> {
        self.points
            .iter()
            .position(|p| p == point)
            .map(|i| self.angles[i])
    }

    pub fn level_offset(&self) -> i32 {
        self.level_offset
    }

    pub fn with_level_offset(mut self, level_offset: i32) -> Self {
        self.level_offset = level_offset;
        self
    }

    /// The angle at infinity forced by the product of all monodromies being one.
    pub fn infinity_angle(&self) -> Angle {
        -self.angles.iter().copied().sum::<Angle>()
    }

    /// `deg L⁰ = −Σ` of all `r + 1` angles, a nonpositive integer.
    pub fn degree(&self) -> i64 {
        let total: Rational =
            self.angles.iter().map(|a| a.value()).sum::<Rational>() + self.infinity_angle().value();
        debug_assert!(total.is_integer());
        -total.to_integer()
    }

    pub fn inverse(&self) -> Self {
        RankOneLine {
            points: self.points.clone(),
            angles: self.angles.iter().map(|a| a.inverse()).collect(),
            level_offset: -self.level_offset,
        }
    }

    pub fn is_real(&self) -> bool {
        self.angles.iter().all(|&a| is_real_angle(a))
    }

    pub fn to_system(&self) -> HodgeSystem {
        let p = self.level_offset;
        let local = self
            .angles
            .iter()
            .map(|&a| {
                let mut d = HodgeBlockData::vanishing();
                if !a.is_zero() {
                    d.add(BlockKey::new(p, a, 0), 1);
                }
                d
            })
            .collect();
        let mut infinity = HodgeBlockData::nearby();
        infinity.add(BlockKey::new(p, self.infinity_angle(), 0), 1);
        HodgeSystem {
            points: self.points.clone(),
            local,
            infinity,
            hodge: BTreeMap::from([(p, 1)]),
            degrees: [(p, self.degree())]
                .into_iter()
                .filter(|e| e.1 != 0)
                .collect(),
            pairing: if self.is_real() {
                Pairing::Symmetric
            } else {
                Pairing::Unknown
            },
        }
    }
}

/// Builds the Hodge data of a rank-one system placed at Hodge level `level`.
pub fn make_line(points: &[String], angles: &[(String, Angle)], level: i32) -> Result<HodgeSystem> {
    Ok(RankOneLine::new(points, angles, level)?.to_system())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeSystem {
    points: Vec<String>,
    local: Vec<HodgeBlockData>,
    infinity: HodgeBlockData,
    hodge: BTreeMap<i32, u32>,
    degrees: BTreeMap<i32, i64>,
    pairing: Pairing,
}

impl HodgeSystem {
    /// Assembles and validates a system. `local` is indexed like `points`.
    pub fn new(
        points: Vec<String>,
        local: Vec<HodgeBlockData>,
        infinity: HodgeBlockData,
        hodge: BTreeMap<i32, u32>,
        degrees: BTreeMap<i32, i64>,
        pairing: Pairing,
    ) -> Result<Self> {
        let s = Self::assemble(points, local, infinity, hodge, degrees, pairing);
        s.validate()?;
        Ok(s)
    }

    pub(crate) fn assemble(
        points: Vec<String>,
        local: Vec<HodgeBlockData>,
        infinity: HodgeBlockData,
        mut hodge: BTreeMap<i32, u32>,
        mut degrees: BTreeMap<i32, i64>,
        pairing: Pairing,
    ) -> Self {
        hodge.retain(|_, h| *h != 0);
        degrees.retain(|_, d| *d != 0);
        HodgeSystem {
            points,
            local,
            infinity,
            hodge,
            degrees,
            pairing,
        }
    }

    /// Validation of a freshly computed result: any failure is a bug.
    pub(crate) fn finish(self) -> Result<Self> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(e @ Error::ZeroRank) => Err(e),
            Err(e) => Err(Error::Invariant(e.to_string())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_points(&self.points)?;
        if self.local.len() != self.points.len() {
            return Err(Error::Inconsistent(format!(
                "{} points but {} local data",
                self.points.len(),
                self.local.len()
            )));
        }
        if self.rank() == 0 {
            return Err(Error::ZeroRank);
        }
        if self.infinity.kind() != StoreKind::Nearby
            || self.local.iter().any(|d| d.kind() != StoreKind::Vanishing)
        {
            return Err(Error::Inconsistent("wrong block-data convention".into()));
        }
        for &p in self.degrees.keys() {
            if self.h(p) == 0 {
                return Err(Error::Inconsistent(format!(
                    "nonzero degree at level {p} where h^{p} = 0"
                )));
            }
        }
        let mut levels: BTreeSet<i32> = self.hodge.keys().copied().collect();
        levels.extend(self.infinity.levels());
        for p in levels {
            let got = self.infinity.level_total(p);
            if got != self.h(p) as u64 {
                return Err(Error::Inconsistent(format!(
                    "level {p} at infinity has dimension {got}, expected h^{p} = {}",
                    self.h(p)
                )));
            }
        }
        for i in 0..self.points.len() {
            let nu = self.nu(i)?;
            let mut levels: BTreeSet<i32> = self.hodge.keys().copied().collect();
            levels.extend(nu.levels());
            for p in levels {
                if nu.level_total(p) != self.h(p) as u64 {
                    return Err(Error::Inconsistent(format!(
                        "level {p} at {} has dimension {}, expected h^{p} = {}",
                        self.points[i],
                        nu.level_total(p),
                        self.h(p)
                    )));
                }
            }
        }
        let residue = self.residue_trace();
        let total = self.degree_total();
        if Rational::from_integer(-total) != residue {
            return Err(Error::Inconsistent(format!(
                "sum of degrees {total} does not match total residue {residue}"
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_index(&self, name: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    /// Vanishing-cycle data at the `i`-th finite point.
    pub fn local(&self, i: usize) -> &HodgeBlockData {
        &self.local[i]
    }

    pub fn locals(&self) -> &[HodgeBlockData] {
        &self.local
    }

    pub fn infinity(&self) -> &HodgeBlockData {
        &self.infinity
    }

    pub fn hodge(&self) -> &BTreeMap<i32, u32> {
        &self.hodge
    }

    pub fn h(&self, p: i32) -> u32 {
        self.hodge.get(&p).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> &BTreeMap<i32, i64> {
        &self.degrees
    }

    pub fn delta(&self, p: i32) -> i64 {
        self.degrees.get(&p).copied().unwrap_or(0)
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn with_pairing(mut self, pairing: Pairing) -> Self {
        self.pairing = pairing;
        self
    }

    pub fn rank(&self) -> u64 {
        self.hodge.values().map(|&h| h as u64).sum()
    }

    pub fn min_level(&self) -> i32 {
        *self.hodge.keys().next().expect("rank is positive")
    }

    pub fn max_level(&self) -> i32 {
        *self.hodge.keys().next_back().expect("rank is positive")
    }

    /// Nearby-cycle data at the `i`-th finite point.
    pub fn nu(&self, i: usize) -> Result<HodgeBlockData> {
        recover_nu(&self.local[i], &self.hodge, &self.points[i])
    }

    /// Nearby-cycle data at all `r + 1` points, infinity last.
    pub fn all_nu(&self) -> Result<Vec<HodgeBlockData>> {
        let mut out = (0..self.points.len())
            .map(|i| self.nu(i))
            .collect::<Result<Vec<_>>>()?;
        out.push(self.infinity.clone());
        Ok(out)
    }

    pub fn degree_total(&self) -> i64 {
        self.degrees.values().sum()
    }

    /// Sum of the residues of the canonical extension over all points.
    pub fn residue_trace(&self) -> Rational {
        self.local
            .iter()
            .map(|d| d.residue_trace())
            .sum::<Rational>()
            + self.infinity.residue_trace()
    }

    /// Angle of the monodromy at infinity when it is scalar.
    pub fn infinity_scalar(&self) -> Option<Angle> {
        let mut angles = self.infinity.iter().map(|(k, _)| (k.angle, k.ell));
        let (a, l) = angles.next()?;
        (l == 0 && angles.all(|e| e == (a, 0))).then_some(a)
    }

    /// Replaces the data at every point, keeping the point set.
    pub(crate) fn with_data(
        &self,
        local: Vec<HodgeBlockData>,
        infinity: HodgeBlockData,
        hodge: BTreeMap<i32, u32>,
        degrees: BTreeMap<i32, i64>,
        pairing: Pairing,
    ) -> Self {
        Self::assemble(
            self.points.clone(),
            local,
            infinity,
            hodge,
            degrees,
            pairing,
        )
    }

    /// Total multiplicity of vanishing cycles over the finite points.
    pub fn mu_total(&self) -> u64 {
        self.local.iter().map(|d| d.dimension()).sum()
    }
}

/// Shifts every Hodge level by `k`.
pub fn tate_twist(s: &HodgeSystem, k: i32) -> HodgeSystem {
    HodgeSystem::assemble(
        s.points.clone(),
        s.local.iter().map(|d| d.shift_levels(k)).collect(),
        s.infinity.shift_levels(k),
        s.hodge.iter().map(|(&p, &h)| (p + k, h)).collect(),
        s.degrees.iter().map(|(&p, &d)| (p + k, d)).collect(),
        s.pairing,
    )
}

/// The monodromy data of a system, without Hodge levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromySystem {
    points: Vec<String>,
    local: Vec<JordanData>,
    infinity: JordanData,
    rank: u64,
    pairing: Pairing,
}

impl MonodromySystem {
    pub fn new(
        points: Vec<String>,
        local: Vec<JordanData>,
        infinity: JordanData,
        rank: u64,
        pairing: Pairing,
    ) -> Result<Self> {
        let s = MonodromySystem {
            points,
            local,
            infinity,
            rank,
            pairing,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_points(&self.points)?;
        if self.local.len() != self.points.len() {
            return Err(Error::Inconsistent(format!(
                "{} points but {} local data",
                self.points.len(),
                self.local.len()
            )));
        }
        if self.rank == 0 {
            return Err(Error::ZeroRank);
        }
        if self.infinity.dimension() != self.rank {
            return Err(Error::Inconsistent(format!(
                "monodromy at infinity has size {}, expected rank {}",
                self.infinity.dimension(),
                self.rank
            )));
        }
        for i in 0..self.points.len() {
            self.nu(i)?;
        }
        Ok(())
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn local(&self, i: usize) -> &JordanData {
        &self.local[i]
    }

    pub fn locals(&self) -> &[JordanData] {
        &self.local
    }

    pub fn infinity(&self) -> &JordanData {
        &self.infinity
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn nu(&self, i: usize) -> Result<JordanData> {
        recover_nu_plain(&self.local[i], self.rank, &self.points[i])
    }

    pub fn all_nu(&self) -> Result<Vec<JordanData>> {
        let mut out = (0..self.points.len())
            .map(|i| self.nu(i))
            .collect::<Result<Vec<_>>>()?;
        out.push(self.infinity.clone());
        Ok(out)
    }

    pub fn infinity_scalar(&self) -> Option<Angle> {
        self.infinity.scalar()
    }

    /// Builds a system from nearby-cycle data at all `r + 1` points.
    pub fn from_nu(points: Vec<String>, nu: Vec<JordanData>, pairing: Pairing) -> Result<Self> {
        if nu.len() != points.len() + 1 {
            return Err(Error::Inconsistent(format!(
                "{} points need {} local monodromies, got {}",
                points.len(),
                points.len() + 1,
                nu.len()
            )));
        }
        let mut nu = nu;
        let infinity = nu.pop().expect("length checked");
        let rank = infinity.dimension();
        for (p, d) in points.iter().zip(&nu) {
            if d.dimension() != rank {
                return Err(Error::Inconsistent(format!(
                    "local monodromy at {p} has size {}, expected {rank}",
                    d.dimension()
                )));
            }
        }
        let local = nu.iter().map(mu_from_nu_plain).collect();
        Self::new(points, local, infinity, rank, pairing)
    }
}

pub fn forget_hodge(s: &HodgeSystem) -> MonodromySystem {
    MonodromySystem {
        points: s.points.clone(),
        local: s.local.iter().map(|d| d.forget_levels()).collect(),
        infinity: s.infinity.forget_levels(),
        rank: s.rank(),
        pairing: s.pairing,
    }
}

/// Monodromy of the dual system: every eigenvalue is inverted.
pub fn dual_monodromy(s: &MonodromySystem) -> MonodromySystem {
    MonodromySystem {
        points: s.points.clone(),
        local: s
            .local
            .iter()
            .map(|d| d.map_angles(Angle::inverse))
            .collect(),
        infinity: s.infinity.map_angles(Angle::inverse),
        rank: s.rank,
        pairing: s.pairing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    fn a(n: i64, d: i64) -> Angle {
        Angle::new(n, d).unwrap()
    }

    fn line(angles: &[Angle], level: i32) -> HodgeSystem {
        let p = pts(angles.len());
        let named: Vec<_> = p.iter().cloned().zip(angles.iter().copied()).collect();
        make_line(&p, &named, level).unwrap()
    }

    #[test]
    fn first_line_of_the_g2_example() {
        let l0 = line(&[a(1, 2), a(5, 6), a(5, 6)], 0);
        assert_eq!(l0.infinity_scalar(), Some(a(5, 6)));
        assert_eq!(l0.delta(0), -3);
        assert_eq!(l0.h(0), 1);
        assert_eq!(l0.local(1).get(0, a(5, 6), 0), 1);
        assert_eq!(l0.pairing(), Pairing::Unknown);
        l0.validate().unwrap();
    }

    #[test]
    fn trivial_line() {
        let l = line(&[Angle::ZERO, Angle::ZERO], 0);
        assert_eq!(l.delta(0), 0);
        assert!(l.locals().iter().all(|d| d.is_empty()));
        assert_eq!(l.infinity_scalar(), Some(Angle::ZERO));
        assert_eq!(l.pairing(), Pairing::Symmetric);
    }

    #[test]
    fn real_line_has_symmetric_pairing() {
        let l = line(&[a(1, 2); 3], 0);
        assert_eq!(l.infinity_scalar(), Some(a(1, 2)));
        assert_eq!(l.delta(0), -2);
        assert_eq!(l.pairing(), Pairing::Symmetric);
    }

    #[test]
    fn unknown_point_is_rejected() {
        let err = make_line(&pts(2), &[("y".into(), a(1, 2))], 0).unwrap_err();
        assert_eq!(err, Error::UnknownPoint("y".into()));
        assert_eq!(make_line(&[], &[], 0).unwrap_err(), Error::NoPoints);
    }

    #[test]
    fn tate_twist_relabels() {
        let l0 = line(&[a(1, 2), a(5, 6), a(5, 6)], 0);
        let t = tate_twist(&l0, 1);
        assert_eq!(t.h(1), 1);
        assert_eq!(t.delta(1), -3);
        assert_eq!(t.h(0), 0);
        assert_eq!(tate_twist(&t, -1), l0);
        assert_eq!(tate_twist(&l0, 0), l0);
        assert_eq!(forget_hodge(&t), forget_hodge(&l0));
    }

    #[test]
    fn validation_catches_residue_mismatch() {
        let l0 = line(&[a(1, 2), a(5, 6), a(5, 6)], 0);
        let bad = HodgeSystem::new(
            l0.points().to_vec(),
            l0.locals().to_vec(),
            l0.infinity().clone(),
            l0.hodge().clone(),
            BTreeMap::from([(0, -2)]),
            Pairing::Unknown,
        );
        assert!(matches!(bad, Err(Error::Inconsistent(_))));
    }

    #[test]
    fn dual_is_an_involution() {
        let m = forget_hodge(&line(&[a(1, 3), a(2, 3), a(2, 3)], 0));
        let d = dual_monodromy(&m);
        assert_eq!(d.local(0).get(a(2, 3), 0), 1);
        assert_eq!(d.infinity_scalar(), Some(a(2, 3)));
        assert_eq!(dual_monodromy(&d), m);
        let r = forget_hodge(&line(&[a(1, 2), Angle::ZERO], 0));
        assert_eq!(dual_monodromy(&r), r);
    }

    #[test]
    fn forget_of_a_line() {
        let m = forget_hodge(&line(&[a(1, 2), a(5, 6), a(5, 6)], 3));
        assert_eq!(m.rank(), 1);
        assert_eq!(m.local(0).get(a(1, 2), 0), 1);
        assert_eq!(m.infinity().get(a(5, 6), 0), 1);
    }
}
