//! Text tables and canonical JSON for systems and reduction traces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::data::{BlockKey, HodgeBlockData, JordanData, StoreKind};
use crate::error::{Error, Result};
use crate::katz::KatzTrace;
use crate::system::{forget_hodge, HodgeSystem, MonodromySystem, Pairing, RankOneLine};

/// `1/2(-1)`, or just `1/4` when the eigenvalue has no short name.
pub fn angle_label(a: Angle) -> String {
    match a.alias() {
        Some(name) => format!("{a}({name})"),
        None => a.to_string(),
    }
}

fn jordan_summary(d: &JordanData) -> String {
    if d.is_empty() {
        return "-".into();
    }
    d.iter()
        .map(|(&(a, l), &m)| {
            let mut s = if l == 0 {
                format!("({})", angle_label(a))
            } else {
                format!("J{}({})", l + 1, angle_label(a))
            };
            if m > 1 {
                write!(s, "x{m}").unwrap();
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Local monodromies, one line per point with infinity last.
pub fn render_monodromy(m: &MonodromySystem) -> String {
    let mut out = String::new();
    writeln!(out, "rank {}, pairing {}", m.rank(), m.pairing()).unwrap();
    let nu = m.all_nu().unwrap_or_default();
    let width = m.points().iter().map(|p| p.len()).max().unwrap_or(0).max(3);
    for (i, p) in m.points().iter().enumerate() {
        let d = nu.get(i).cloned().unwrap_or_else(|| m.local(i).clone());
        writeln!(out, "  {p:<width$}  {}", jordan_summary(&d)).unwrap();
    }
    writeln!(out, "  {:<width$}  {}", "inf", jordan_summary(m.infinity())).unwrap();
    out
}

/// A row per Hodge level with `h^p`, every vanishing-cycle family that
/// occurs, and `δ^p`.
pub fn render_table(s: &HodgeSystem) -> String {
    let mut columns: BTreeSet<(usize, Angle, u32)> = BTreeSet::new();
    for (i, d) in s.locals().iter().enumerate() {
        for (k, _) in d.iter() {
            columns.insert((i, k.angle, k.ell));
        }
    }
    let mut header = vec!["p".to_string(), "h".to_string()];
    header.extend(
        columns
            .iter()
            .map(|&(i, a, l)| format!("mu[{},{},{}]", s.points()[i], angle_label(a), l)),
    );
    header.push("delta".into());

    let mut rows = Vec::new();
    for p in s.min_level()..=s.max_level() {
        let mut row = vec![p.to_string(), s.h(p).to_string()];
        row.extend(
            columns
                .iter()
                .map(|&(i, a, l)| s.local(i).get(p, a, l).to_string()),
        );
        row.push(s.delta(p).to_string());
        rows.push(row);
    }

    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap()
        })
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };

    let mut out = render_monodromy(&forget_hodge(s));
    writeln!(out, "{}", line(&header)).unwrap();
    for r in &rows {
        writeln!(out, "{}", line(r)).unwrap();
    }
    out
}

struct Levels<'a, T>(&'a BTreeMap<i32, T>);

impl<T: Serialize> Serialize for Levels<'_, T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for (p, v) in self.0 {
            map.serialize_entry(&p.to_string(), v)?;
        }
        map.end()
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    p: i32,
    alpha: String,
    ell: u32,
    mult: u32,
}

#[derive(Serialize, Deserialize)]
struct PlainEntryJson {
    alpha: String,
    ell: u32,
    mult: u32,
}

fn entries(d: &HodgeBlockData) -> Vec<EntryJson> {
    d.iter()
        .map(|(k, &m)| EntryJson {
            p: k.level,
            alpha: k.angle.to_string(),
            ell: k.ell,
            mult: m,
        })
        .collect()
}

fn plain_entries(d: &JordanData) -> Vec<PlainEntryJson> {
    d.iter()
        .map(|(&(a, l), &m)| PlainEntryJson {
            alpha: a.to_string(),
            ell: l,
            mult: m,
        })
        .collect()
}

struct PerPoint<'a, T>(&'a [String], Vec<T>);

impl<T: Serialize> Serialize for PerPoint<'_, T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for (p, v) in self.0.iter().zip(&self.1) {
            map.serialize_entry(p, v)?;
        }
        map.end()
    }
}

impl Serialize for HodgeSystem {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let degrees: BTreeMap<i32, i64> =
            self.hodge().keys().map(|&p| (p, self.delta(p))).collect();
        let mut map = ser.serialize_map(Some(7))?;
        map.serialize_entry("points", self.points())?;
        map.serialize_entry("rank", &self.rank())?;
        map.serialize_entry("hodge", &Levels(self.hodge()))?;
        map.serialize_entry("degrees", &Levels(&degrees))?;
        map.serialize_entry(
            "local",
            &PerPoint(self.points(), self.locals().iter().map(entries).collect()),
        )?;
        map.serialize_entry("infinity", &entries(self.infinity()))?;
        map.serialize_entry("pairing", &self.pairing())?;
        map.end()
    }
}

impl Serialize for MonodromySystem {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(5))?;
        map.serialize_entry("points", self.points())?;
        map.serialize_entry("rank", &self.rank())?;
        map.serialize_entry(
            "local",
            &PerPoint(
                self.points(),
                self.locals().iter().map(plain_entries).collect(),
            ),
        )?;
        map.serialize_entry("infinity", &plain_entries(self.infinity()))?;
        map.serialize_entry("pairing", &self.pairing())?;
        map.end()
    }
}

impl Serialize for RankOneLine {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(2))?;
        map.serialize_entry(
            "angles",
            &PerPoint(
                self.points(),
                self.angles().iter().map(|a| a.to_string()).collect(),
            ),
        )?;
        map.serialize_entry("level_offset", &self.level_offset())?;
        map.end()
    }
}

#[derive(Serialize)]
struct StepJson<'a, S> {
    line: &'a RankOneLine,
    chi: String,
    before_rank: u64,
    after_rank: u64,
    snapshot: &'a S,
}

pub fn trace_to_json<S: Serialize>(trace: &KatzTrace<S>) -> serde_json::Value {
    let steps: Vec<StepJson<S>> = trace
        .steps
        .iter()
        .map(|st| StepJson {
            line: &st.chosen_line,
            chi: st.chi.to_string(),
            before_rank: st.before_rank,
            after_rank: st.after_rank,
            snapshot: &st.snapshot,
        })
        .collect();
    serde_json::json!({ "steps": steps, "terminal": &trace.terminal })
}

pub fn to_json(s: &HodgeSystem) -> String {
    serde_json::to_string_pretty(s).expect("systems always serialize")
}

#[derive(Deserialize)]
struct SystemJson {
    points: Vec<String>,
    rank: u64,
    hodge: BTreeMap<String, u32>,
    degrees: BTreeMap<String, i64>,
    local: BTreeMap<String, Vec<EntryJson>>,
    infinity: Vec<EntryJson>,
    pairing: Pairing,
}

fn parse_level(s: &str) -> Result<i32> {
    s.parse()
        .map_err(|_| Error::Inconsistent(format!("bad level `{s}`")))
}

fn store_from(kind: StoreKind, v: &[EntryJson]) -> Result<HodgeBlockData> {
    let mut d = HodgeBlockData::new(kind);
    for e in v {
        if e.mult == 0 {
            return Err(Error::Inconsistent("zero multiplicity".into()));
        }
        d.add(BlockKey::new(e.p, e.alpha.parse()?, e.ell), e.mult);
    }
    Ok(d)
}

/// Reads the canonical JSON form back, validating the result.
pub fn from_json(text: &str) -> Result<HodgeSystem> {
    let j: SystemJson =
        serde_json::from_str(text).map_err(|e| Error::Inconsistent(e.to_string()))?;
    let hodge = j
        .hodge
        .iter()
        .map(|(p, &h)| Ok((parse_level(p)?, h)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let degrees = j
        .degrees
        .iter()
        .map(|(p, &d)| Ok((parse_level(p)?, d)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    for name in j.local.keys() {
        if !j.points.contains(name) {
            return Err(Error::UnknownPoint(name.clone()));
        }
    }
    let local = j
        .points
        .iter()
        .map(|p| store_from(StoreKind::Vanishing, j.local.get(p).map_or(&[][..], |v| v)))
        .collect::<Result<Vec<_>>>()?;
    let s = HodgeSystem::new(
        j.points,
        local,
        store_from(StoreKind::Nearby, &j.infinity)?,
        hodge,
        degrees,
        j.pairing,
    )?;
    if s.rank() != j.rank {
        return Err(Error::Inconsistent(format!(
            "rank field {} does not match Hodge numbers ({})",
            j.rank,
            s.rank()
        )));
    }
    Ok(s)
}
