//! Middle convolution with a Kummer system, on monodromy data in general and
//! on Hodge data when the monodromy at infinity is scalar.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::data::{BlockKey, HodgeBlockData, JordanData, StoreKind};
use crate::error::{Error, Result};
use crate::system::{forget_hodge, HodgeSystem, MonodromySystem, Pairing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum H1Variant {
    Projective,
    Affine,
}

/// Hodge numbers of the first cohomology with coefficients in the minimal extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Result {
    pub hodge: BTreeMap<i32, u32>,
    pub total: u64,
    pub variant: H1Variant,
}

pub fn h1_hodge(s: &HodgeSystem, variant: H1Variant) -> Result<H1Result> {
    let mut hodge = BTreeMap::new();
    let nonunip = |d: &HodgeBlockData, p: i32| d.level_total_where(p, |a| !a.is_zero()) as i64;
    let unip = |d: &HodgeBlockData, p: i32| d.total(Angle::ZERO, p) as i64;
    let lo = s.min_level();
    let hi = s.max_level() + 1;
    for p in lo..=hi {
        let mut v = s.delta(p - 1) - s.delta(p) - s.h(p) as i64;
        for d in s.locals() {
            v += nonunip(d, p - 1) + unip(d, p);
        }
        if variant == H1Variant::Projective {
            v -= s.infinity().prim(Angle::ZERO, p - 1) as i64;
        }
        if v < 0 {
            return Err(Error::NegativeHodgeNumber { level: p, value: v });
        }
        if v > 0 {
            hodge.insert(p, v as u32);
        }
    }
    let total = hodge.values().map(|&h| h as u64).sum();
    Ok(H1Result {
        hodge,
        total,
        variant,
    })
}

/// `(r − 1)·rank − Σ ν_{1,prim}` over all `r + 1` points.
pub fn dim_h1_middle(s: &MonodromySystem) -> Result<u64> {
    let r = s.points().len() as i64;
    let mut v = (r - 1) * s.rank() as i64;
    for nu in s.all_nu()? {
        v -= nu.prim(Angle::ZERO) as i64;
    }
    if v < 0 {
        return Err(Error::NegativeDimension(v));
    }
    Ok(v as u64)
}

fn mc_pairing(pairing: Pairing, chi: Angle) -> Pairing {
    if chi == Angle::new(1, 2).unwrap() {
        pairing.flip()
    } else {
        Pairing::Unknown
    }
}

pub fn mc_local(s: &MonodromySystem, chi: Angle) -> Result<MonodromySystem> {
    if chi.is_zero() {
        return Err(Error::ChiIsOne);
    }
    let dim_h1 = dim_h1_middle(s)?;
    let local: Vec<JordanData> = s.locals().iter().map(|d| d.rotate(chi)).collect();

    let mut infinity = JordanData::new(StoreKind::Nearby);
    for (&(c, l), &m) in s.infinity().iter() {
        if c == chi {
            if l >= 1 {
                infinity.add(Angle::ZERO, l - 1, m);
            }
        } else if c.is_zero() {
            infinity.add(-chi, l + 1, m);
        } else {
            infinity.add(c - chi, l, m);
        }
    }
    infinity.add(-chi, 0, dim_h1 as u32);

    let rank = s.rank() as i64 + dim_h1 as i64 + s.infinity().prim(Angle::ZERO) as i64
        - s.infinity().prim(chi) as i64;
    if rank <= 0 {
        return Err(Error::ZeroRank);
    }
    MonodromySystem::new(
        s.points().to_vec(),
        local,
        infinity,
        rank as u64,
        mc_pairing(s.pairing(), chi),
    )
    .map_err(|e| match e {
        Error::ZeroRank => e,
        other => Error::Invariant(other.to_string()),
    })
}

/// Middle convolution of a system whose monodromy at infinity is a
/// nontrivial scalar `λ_o`; the Kummer parameter is `λ_o` itself.
pub fn mc_hodge(s: &HodgeSystem, chi: Option<Angle>) -> Result<HodgeSystem> {
    let a_o = match s.infinity_scalar() {
        Some(a) if !a.is_zero() => a,
        _ => return Err(Error::NotScalarAtInfinity),
    };
    if let Some(given) = chi {
        if given != a_o {
            return Err(Error::ChiMismatch {
                given,
                expected: a_o,
            });
        }
    }

    let hodge = h1_hodge(s, H1Variant::Affine)?.hodge;
    if hodge.is_empty() {
        return Err(Error::ZeroRank);
    }

    let local: Vec<HodgeBlockData> = s
        .locals()
        .iter()
        .map(|d| {
            HodgeBlockData::from_entries(
                StoreKind::Vanishing,
                d.iter().map(|(k, &m)| {
                    let a = k.angle + a_o;
                    let bump = a.is_zero() || a > a_o;
                    (BlockKey::new(k.level + bump as i32, a, k.ell), m)
                }),
            )
        })
        .collect();

    let window = Angle::ZERO - a_o;
    let mut degrees = BTreeMap::new();
    for p in s.min_level()..=s.max_level() + 1 {
        let mut v = s.delta(p) + s.h(p) as i64;
        for d in s.locals() {
            v -= d.total(Angle::ZERO, p) as i64;
            v -= d.level_total_where(p - 1, |a| !a.is_zero() && a < window) as i64;
        }
        degrees.insert(p, v);
    }

    let mut infinity = HodgeBlockData::nearby();
    for (&p, &h) in &hodge {
        infinity.add(BlockKey::new(p, -a_o, 0), h);
    }

    let out = s
        .with_data(
            local,
            infinity,
            hodge,
            degrees,
            mc_pairing(s.pairing(), a_o),
        )
        .finish()?;

    let expected = mc_local(&forget_hodge(s), a_o)?;
    let got = forget_hodge(&out);
    if got.rank() != expected.rank()
        || got.locals() != expected.locals()
        || got.infinity() != expected.infinity()
    {
        return Err(Error::Invariant(
            "Hodge-level convolution disagrees with its monodromy".into(),
        ));
    }
    Ok(out)
}
