//! Tensor product with a unitary rank-one local system.

use crate::angle::Angle;
use crate::data::{mu_from_nu, mu_from_nu_plain, HodgeBlockData};
use crate::error::{Error, Result};
use crate::system::{tate_twist, HodgeSystem, MonodromySystem, Pairing, RankOneLine};

/// Angles of `line` at the points of `s`, infinity last. Points of `s` that
/// the line does not mention get angle zero.
fn line_angles(line: &RankOneLine, points: &[String]) -> Result<Vec<Angle>> {
    for p in line.points() {
        if !points.contains(p) {
            return Err(Error::UnknownPoint(p.clone()));
        }
    }
    let mut out: Vec<Angle> = points
        .iter()
        .map(|p| line.angle_at(p).unwrap_or(Angle::ZERO))
        .collect();
    let inf = -out.iter().copied().sum::<Angle>();
    out.push(inf);
    Ok(out)
}

/// `Σ_{α ∈ [1 − a, 1)} ν^p_{λ(α)}`.
fn upper_window(nu: &HodgeBlockData, a: Angle, p: i32) -> u64 {
    if a.is_zero() {
        return 0;
    }
    let lo = Angle::ZERO - a;
    nu.level_total_where(p, |b| b >= lo)
}

pub fn tensor_line(line: &RankOneLine, s: &HodgeSystem) -> Result<HodgeSystem> {
    let angles = line_angles(line, s.points())?;
    let r = s.points().len();
    let nu = s.all_nu()?;

    let deg: i64 = {
        let total: crate::angle::Rational = angles.iter().map(|a| a.value()).sum();
        -total.to_integer()
    };

    let local = (0..r)
        .map(|i| {
            if angles[i].is_zero() {
                s.local(i).clone()
            } else {
                mu_from_nu(&nu[i].rotate(angles[i]))
            }
        })
        .collect();
    let infinity = s.infinity().rotate(angles[r]);

    let degrees = s
        .hodge()
        .iter()
        .map(|(&p, &h)| {
            let jump: u64 = nu
                .iter()
                .zip(&angles)
                .map(|(d, &a)| upper_window(d, a, p))
                .sum();
            (p, s.delta(p) + h as i64 * deg + jump as i64)
        })
        .collect();

    let pairing = twisted_pairing(&angles, s.pairing());

    let out = s
        .with_data(local, infinity, s.hodge().clone(), degrees, pairing)
        .finish()?;
    Ok(tate_twist(&out, line.level_offset()))
}

fn twisted_pairing(angles: &[Angle], pairing: Pairing) -> Pairing {
    let real = angles
        .iter()
        .all(|&a| a.is_zero() || a == Angle::new(1, 2).unwrap());
    if real {
        pairing
    } else {
        Pairing::Unknown
    }
}

/// [`tensor_line`] on monodromy data only; the level offset is ignored.
pub fn tensor_line_monodromy(line: &RankOneLine, s: &MonodromySystem) -> Result<MonodromySystem> {
    let angles = line_angles(line, s.points())?;
    let r = s.points().len();
    let local = (0..r)
        .map(|i| {
            Ok(if angles[i].is_zero() {
                s.local(i).clone()
            } else {
                mu_from_nu_plain(&s.nu(i)?.rotate(angles[i]))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MonodromySystem::new(
        s.points().to_vec(),
        local,
        s.infinity().rotate(angles[r]),
        s.rank(),
        twisted_pairing(&angles, s.pairing()),
    )
    .map_err(|e| Error::Invariant(e.to_string()))
}
