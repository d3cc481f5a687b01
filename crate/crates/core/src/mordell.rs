//! The Mordell step between consecutive K-dimensions, its iterate, bound
//! tables built from configured inputs, and the structure obstruction test.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Rational;
use crate::orders::Order;
use crate::powerproduct::PowerProduct;

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

pub fn d_invariant(order: &Order) -> PowerProduct {
    PowerProduct::from_rational(&order.d_invariant()).expect("D is positive")
}

/// Bound for K-dimension `m` from the value in K-dimension `m - 1`:
/// `gamma_prev^((m-1)/(m-2)) * D^(1/(r(m-2)))`.
pub fn mordell_step(order: &Order, m: u32, gamma_prev: &PowerProduct) -> Result<PowerProduct> {
    if m < 3 {
        return Err(Error::Precondition(format!("the Mordell step needs m >= 3, got {m}")));
    }
    let (m, r) = (i64::from(m), order.rank() as i64);
    let a = gamma_prev.pow(&q(m - 1, m - 2));
    Ok(a.mul(&d_invariant(order).pow(&q(1, r * (m - 2)))))
}

/// Bound for K-dimension `s` from the value in K-dimension `m`:
/// `gamma^((s-1)/(m-1)) * D^((s-m)/(r(m-1)))`.
pub fn mordell_iterate(order: &Order, m: u32, s: u32, gamma_base: &PowerProduct) -> Result<PowerProduct> {
    if m < 2 {
        return Err(Error::Precondition(format!("the iterated bound needs m >= 2, got {m}")));
    }
    if s <= m {
        return Err(Error::Precondition(format!("the iterated bound needs s > m, got s = {s}, m = {m}")));
    }
    let (m, s, r) = (i64::from(m), i64::from(s), order.rank() as i64);
    let a = gamma_base.pow(&q(s - 1, m - 1));
    Ok(a.mul(&d_invariant(order).pow(&q(s - m, r * (m - 1)))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "known-exact")]
    KnownExact,
    #[serde(rename = "external-LP")]
    ExternalLp,
    #[serde(rename = "densest-known")]
    DensestKnown,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::KnownExact => "known-exact",
            Self::ExternalLp => "external-LP",
            Self::DensestKnown => "densest-known",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawRow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
    pub prov: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawConfig {
    order: String,
    rows: BTreeMap<String, RawRow>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    published_mordell: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub value: PowerProduct,
    pub prov: Provenance,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct BoundsConfig {
    pub order: String,
    pub rows: BTreeMap<u32, BoundRow>,
    /// Previously published Mordell-column values, compared against the
    /// computed ones at 5 decimals.
    pub published_mordell: BTreeMap<u32, String>,
    pub notes: Vec<String>,
}

/// Built-in configs: `(order, main, densest-known)`.
const SHIPPED: [(&str, &str, Option<&str>); 4] = [
    (
        "eisenstein",
        include_str!("../data/bounds/eisenstein.json"),
        Some(include_str!("../data/bounds/eisenstein-densest.json")),
    ),
    ("gaussian", include_str!("../data/bounds/gaussian.json"), None),
    (
        "hurwitz",
        include_str!("../data/bounds/hurwitz.json"),
        Some(include_str!("../data/bounds/hurwitz-densest.json")),
    ),
    ("j", include_str!("../data/bounds/j.json"), None),
];

/// The shipped main config for a built-in order.
pub fn shipped_config(order: &str) -> Result<BoundsConfig> {
    let (_, main, _) = SHIPPED
        .iter()
        .find(|(n, _, _)| n.eq_ignore_ascii_case(order))
        .ok_or_else(|| Error::UnknownOrder(order.to_string()))?;
    BoundsConfig::from_json(main)
}

/// The shipped densest-known config, where one exists.
pub fn shipped_densest(order: &str) -> Result<Option<BoundsConfig>> {
    let (_, _, densest) = SHIPPED
        .iter()
        .find(|(n, _, _)| n.eq_ignore_ascii_case(order))
        .ok_or_else(|| Error::UnknownOrder(order.to_string()))?;
    densest.map(BoundsConfig::from_json).transpose()
}

impl BoundsConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        let mut rows = BTreeMap::new();
        for (dim, row) in raw.rows {
            let d: u32 = dim
                .parse()
                .map_err(|_| Error::Config(format!("dimension `{dim}` is not an integer")))?;
            let value = match (&row.exact, &row.decimal) {
                (Some(e), None) => PowerProduct::parse(e)?,
                (None, Some(x)) => {
                    let v = crate::num::parse_rational(x)?;
                    PowerProduct::literal(v)?
                }
                _ => {
                    return Err(Error::Config(format!(
                        "row {d} must have exactly one of `exact` or `decimal`"
                    )))
                }
            };
            if row.prov == Provenance::KnownExact && !value.is_exact() {
                return Err(Error::Config(format!("known-exact row {d} is not an exact value")));
            }
            rows.insert(
                d,
                BoundRow {
                    value,
                    prov: row.prov,
                    note: row.note,
                },
            );
        }
        let mut published = BTreeMap::new();
        for (dim, v) in raw.published_mordell {
            let d: u32 = dim
                .parse()
                .map_err(|_| Error::Config(format!("dimension `{dim}` is not an integer")))?;
            published.insert(d, v);
        }
        Ok(Self {
            order: raw.order,
            rows,
            published_mordell: published,
            notes: raw.notes,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = RawConfig {
            order: self.order.clone(),
            rows: self
                .rows
                .iter()
                .map(|(d, r)| {
                    let (exact, decimal) = if r.value.is_exact() {
                        (Some(r.value.to_string()), None)
                    } else {
                        (None, Some(r.value.to_string()))
                    };
                    (
                        d.to_string(),
                        RawRow {
                            exact,
                            decimal,
                            prov: r.prov,
                            note: r.note.clone(),
                        },
                    )
                })
                .collect(),
            published_mordell: self.published_mordell.iter().map(|(d, v)| (d.to_string(), v.clone())).collect(),
            notes: self.notes.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    /// Checks that every dimension is a multiple of `r`.
    pub fn validate(&self, order: &Order) -> Result<()> {
        let r = order.rank() as u32;
        if self.order != order.name() {
            return Err(Error::Config(format!(
                "config is for `{}`, not `{}`",
                self.order,
                order.name()
            )));
        }
        for d in self.rows.keys().chain(self.published_mordell.keys()) {
            if d % r != 0 {
                return Err(Error::Config(format!("dimension {d} is not a multiple of {r}")));
            }
        }
        Ok(())
    }

    pub fn get(&self, dim: u32) -> Option<&BoundRow> {
        self.rows.get(&dim)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub dim: u32,
    pub best_known: Option<PowerProduct>,
    pub best_known_prov: Option<Provenance>,
    pub mordell: Option<PowerProduct>,
    /// Where the input to the Mordell step came from.
    pub mordell_input: Option<String>,
    pub conjectured: Option<PowerProduct>,
    pub annotation: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundTable {
    pub order: String,
    pub rows: Vec<TableRow>,
}

/// Builds the table for dimensions `r, 2r, ..` up to `max_dim`.
///
/// The input at `r(m-1)` is the known exact value when there is one, and
/// otherwise the smaller of the external bound and the Mordell bound
/// computed for that dimension. The conjectured column feeds the densest
/// known value at `r(m-1)` into the step, wherever that dimension is not
/// already settled (known exactly, or with its Mordell bound attained).
pub fn build_table(order: &Order, max_dim: u32, config: &BoundsConfig, conjectured: Option<&BoundsConfig>) -> Result<BoundTable> {
    config.validate(order)?;
    if let Some(c) = conjectured {
        c.validate(order)?;
    }
    let r = order.rank() as u32;
    let mut rows: Vec<TableRow> = Vec::new();
    let mut mordell_at: BTreeMap<u32, PowerProduct> = BTreeMap::new();
    let mut m = 1;
    while r * m <= max_dim {
        let dim = r * m;
        let bk = config.get(dim);
        let mut row = TableRow {
            dim,
            best_known: bk.map(|b| b.value.clone()),
            best_known_prov: bk.map(|b| b.prov),
            mordell: None,
            mordell_input: None,
            conjectured: None,
            annotation: None,
        };
        if m >= 3 {
            let prev = dim - r;
            let (input, source) = mordell_input(config, &mordell_at, prev)?;
            let bound = mordell_step(order, m, &input)?;
            if let Some(published) = config.published_mordell.get(&dim) {
                let ours = bound.to_decimal(5);
                if *published != ours {
                    row.annotation = Some(format!(
                        "computed {ours} differs from the published value {published}"
                    ));
                }
            }
            row.mordell_input = Some(source);
            mordell_at.insert(dim, bound.clone());
            row.mordell = Some(bound);
            if let Some(conj) = conjectured {
                if !settled(config, conj, &mordell_at, prev)? {
                    if let Some(d) = conj.get(prev) {
                        row.conjectured = Some(mordell_step(order, m, &d.value)?);
                    }
                }
            }
        }
        rows.push(row);
        m += 1;
    }
    Ok(BoundTable {
        order: order.name().to_string(),
        rows,
    })
}

fn mordell_input(config: &BoundsConfig, mordell_at: &BTreeMap<u32, PowerProduct>, prev: u32) -> Result<(PowerProduct, String)> {
    let row = config.get(prev);
    if let Some(b) = row.filter(|b| b.prov == Provenance::KnownExact) {
        return Ok((b.value.clone(), format!("known-exact value at {prev}")));
    }
    let external = row.filter(|b| b.prov == Provenance::ExternalLp);
    match (external, mordell_at.get(&prev)) {
        (Some(e), Some(mb)) => {
            if mb.compare(&e.value)? == Ordering::Greater {
                Ok((e.value.clone(), format!("external-LP value at {prev}")))
            } else {
                Ok((mb.clone(), format!("Mordell bound at {prev}")))
            }
        }
        (Some(e), None) => Ok((e.value.clone(), format!("external-LP value at {prev}"))),
        (None, Some(mb)) => Ok((mb.clone(), format!("Mordell bound at {prev}"))),
        (None, None) => Err(Error::MissingBound(prev)),
    }
}

fn settled(config: &BoundsConfig, conj: &BoundsConfig, mordell_at: &BTreeMap<u32, PowerProduct>, dim: u32) -> Result<bool> {
    if config.get(dim).is_some_and(|b| b.prov == Provenance::KnownExact) {
        return Ok(true);
    }
    match (mordell_at.get(&dim), conj.get(dim)) {
        (Some(mb), Some(d)) => Ok(mb.cmp_exact(&d.value) == Some(Ordering::Equal)),
        _ => Ok(false),
    }
}

fn cell(v: &Option<PowerProduct>) -> String {
    match v {
        None => String::new(),
        Some(p) if p.is_exact() && p.to_rational().is_none() => format!("{p} ≈ {}", p.to_decimal(5)),
        Some(p) if p.is_exact() => p.to_string(),
        Some(p) => p.to_decimal(5),
    }
}

impl BoundTable {
    pub fn row(&self, dim: u32) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.dim == dim)
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "| Dimension | Best Known | Mordell Bound | Conjectured Mordell Bound |");
        let _ = writeln!(s, "|---|---|---|---|");
        let mut notes = Vec::new();
        for r in &self.rows {
            let mut mordell = cell(&r.mordell);
            if let Some(a) = &r.annotation {
                notes.push(format!("dimension {}: {a}", r.dim));
                mordell.push_str(&format!(" [{}]", notes.len()));
            }
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                r.dim,
                cell(&r.best_known),
                mordell,
                cell(&r.conjectured)
            );
        }
        for (i, n) in notes.iter().enumerate() {
            let _ = writeln!(s, "\n[{}] {n}", i + 1);
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("dimension,best_known,best_known_decimal,best_known_prov,mordell,mordell_decimal,conjectured,conjectured_decimal,annotation\n");
        let ex = |v: &Option<PowerProduct>| v.as_ref().map(|p| p.to_string()).unwrap_or_default();
        let dec = |v: &Option<PowerProduct>| v.as_ref().map(|p| p.to_decimal(5)).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                r.dim,
                ex(&r.best_known),
                dec(&r.best_known),
                r.best_known_prov.map(Provenance::as_str).unwrap_or_default(),
                ex(&r.mordell),
                dec(&r.mordell),
                ex(&r.conjectured),
                dec(&r.conjectured),
                r.annotation.as_deref().unwrap_or_default().replace(',', ";")
            );
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Obstructed,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub order: String,
    pub m: u32,
    pub known: PowerProduct,
    pub candidate: PowerProduct,
    /// The Mordell step applied to the candidate value.
    pub bound_from_candidate: PowerProduct,
    pub verdict: Verdict,
    pub test: String,
    pub caveat: String,
}

/// Compares the known value in K-dimension `m` with the Mordell step applied
/// to a candidate lattice invariant from K-dimension `m - 1`.
pub fn structure_obstruction(order: &Order, m: u32, known: &PowerProduct, candidate: &PowerProduct) -> Result<ObstructionReport> {
    let bound = mordell_step(order, m, candidate)?;
    let verdict = match known.compare(&bound)? {
        Ordering::Greater => Verdict::Obstructed,
        _ => Verdict::Inconclusive,
    };
    Ok(ObstructionReport {
        order: order.name().to_string(),
        m,
        known: known.clone(),
        candidate: candidate.clone(),
        bound_from_candidate: bound,
        verdict,
        test: format!(
            "obstructed when the known value in dimension {} exceeds step(candidate); a lattice of dimension {} with that invariant then admits no {}-structure",
            order.rank() as u32 * m,
            order.rank() as u32 * (m - 1),
            order.name()
        ),
        caveat: "the step is only proven for the optimal constant of dimension r(m-1); with a single candidate lattice in its place the test is a formal contradiction only if that candidate is optimal among lattices with the structure".into(),
    })
}
