//! Named lattices shipped as data files, each with an expected-values
//! sidecar. `Λ` names have ASCII aliases with `L` (`Λ16/hurwitz` and
//! `L16/hurwitz` are the same entry).

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::io::{self, LatticeFile};
use crate::lattice::OLattice;
use crate::num::{fmt_rational, parse_rational, Rational};
use crate::powerproduct::PowerProduct;
use crate::reduction::{self, EnumOptions};

macro_rules! entry {
    ($dir:literal, $order:literal) => {
        (
            $dir,
            $order,
            include_str!(concat!("../data/catalog/", $dir, "/", $order, ".json")),
            include_str!(concat!("../data/catalog/", $dir, "/", $order, ".expected.json")),
        )
    };
}

const DATA: [(&str, &str, &str, &str); 12] = [
    entry!("A2", "eisenstein"),
    entry!("D4", "hurwitz"),
    entry!("D4", "gaussian"),
    entry!("E6", "eisenstein"),
    entry!("E8", "hurwitz"),
    entry!("E8", "eisenstein"),
    entry!("K12", "eisenstein"),
    entry!("K12", "j"),
    entry!("L12min", "hurwitz"),
    entry!("L12max", "hurwitz"),
    entry!("L16", "hurwitz"),
    entry!("L24", "hurwitz"),
];

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Sidecar {
    name: String,
    order: String,
    det: String,
    min_norm: String,
    gamma_nth: String,
    gamma: String,
    kissing: Option<usize>,
    #[serde(default = "yes")]
    kissing_by_default: bool,
    #[serde(default)]
    citations: Vec<String>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub det: Rational,
    pub min_norm: Rational,
    pub gamma_nth: Rational,
    /// Hermite constant as tabulated, before taking the n-th power.
    pub gamma: PowerProduct,
    pub kissing: Option<usize>,
    /// Whether `verify_entry` counts minimal vectors unless told otherwise.
    pub kissing_by_default: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub order: String,
    pub file: LatticeFile,
    pub expected: Expected,
    pub citations: Vec<String>,
}

impl CatalogEntry {
    pub fn lattice(&self) -> Result<OLattice> {
        self.file.to_lattice()
    }
}

fn normalize(name: &str) -> String {
    name.trim().replace('Λ', "L").to_ascii_lowercase()
}

fn parse_entry(raw: &(&str, &str, &str, &str)) -> Result<CatalogEntry> {
    let (_, _, lattice, sidecar) = raw;
    let file = LatticeFile::parse(lattice)?;
    let s: Sidecar = serde_json::from_str(sidecar)?;
    let bad = |field: &str, e: String| Error::Config(format!("catalog entry {}: {field}: {e}", s.name));
    let expected = Expected {
        det: parse_rational(&s.det).map_err(|e| bad("det", e.to_string()))?,
        min_norm: parse_rational(&s.min_norm).map_err(|e| bad("min_norm", e.to_string()))?,
        gamma_nth: parse_rational(&s.gamma_nth).map_err(|e| bad("gamma_nth", e.to_string()))?,
        gamma: PowerProduct::parse(&s.gamma).map_err(|e| bad("gamma", e.to_string()))?,
        kissing: s.kissing,
        kissing_by_default: s.kissing_by_default,
    };
    Ok(CatalogEntry {
        name: s.name,
        order: s.order,
        file,
        expected,
        citations: s.citations,
    })
}

/// Entry names, in table order.
pub fn list_entries() -> Vec<String> {
    DATA.iter()
        .map(|raw| parse_entry(raw).expect("shipped catalog data parses").name)
        .collect()
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    let key = normalize(name);
    DATA.iter()
        .find(|(dir, order, _, _)| normalize(&format!("{dir}/{order}")) == key)
        .map(parse_entry)
        .unwrap_or_else(|| Err(Error::UnknownEntry(name.to_string())))
}

pub fn load(name: &str) -> Result<OLattice> {
    entry(name)?.lattice()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldCheck {
    pub field: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub order: String,
    pub rank: usize,
    pub fields: Vec<FieldCheck>,
    pub kissing_checked: bool,
    pub passed: bool,
}

impl VerifyReport {
    pub fn field(&self, name: &str) -> Option<&FieldCheck> {
        self.fields.iter().find(|f| f.field == name)
    }
}

fn check(field: &str, expected: String, computed: String) -> FieldCheck {
    FieldCheck {
        field: field.to_string(),
        passed: expected == computed,
        expected,
        computed,
    }
}

/// Recomputes every expected field. `kissing` overrides the entry's
/// default (`None` keeps it).
pub fn verify_entry(name: &str, opts: &EnumOptions, kissing: Option<bool>) -> Result<VerifyReport> {
    let e = entry(name)?;
    let l = e.lattice()?;
    let mut fields = Vec::new();
    let inv = l.check_o_invariance();
    fields.push(check(
        "o_invariance",
        "0 violations".into(),
        format!("{} violations", inv.violations.len()),
    ));
    fields.push(check("order", e.order.clone(), l.order().name().to_string()));
    let h = reduction::hermite(&l, opts)?;
    fields.push(check("det", fmt_rational(&e.expected.det), fmt_rational(&h.det)));
    fields.push(check("min_norm", fmt_rational(&e.expected.min_norm), fmt_rational(&h.min_norm)));
    fields.push(check("gamma_nth", fmt_rational(&e.expected.gamma_nth), fmt_rational(&h.gamma_nth)));
    let tabulated = e.expected.gamma.pow_int(h.n as i64);
    fields.push(check(
        "gamma",
        format!("({})^{} = {}", e.expected.gamma, h.n, tabulated),
        format!("{}", PowerProduct::from_rational(&h.gamma_nth)?),
    ));
    if let Some(last) = fields.last_mut() {
        last.passed = tabulated.to_rational().as_ref() == Some(&h.gamma_nth);
    }
    let kissing_checked = kissing.unwrap_or(e.expected.kissing_by_default) && e.expected.kissing.is_some();
    if kissing_checked {
        let k = reduction::kissing_number(&l, opts)?;
        fields.push(check(
            "kissing",
            e.expected.kissing.map(|k| k.to_string()).unwrap_or_default(),
            k.to_string(),
        ));
    }
    let passed = fields.iter().all(|f| f.passed);
    Ok(VerifyReport {
        name: e.name,
        order: e.order,
        rank: l.rank(),
        fields,
        kissing_checked,
        passed,
    })
}

/// The entry's canonical basis in the lattice file format, with its name and
/// citations in the metadata.
pub fn export_file(name: &str) -> Result<LatticeFile> {
    let e = entry(name)?;
    let l = e.lattice()?;
    let mut meta = e.file.metadata.clone();
    meta.insert("name".into(), Value::String(e.name.clone()));
    meta.insert(
        "citations".into(),
        Value::Array(e.citations.iter().cloned().map(Value::String).collect()),
    );
    Ok(LatticeFile::from_lattice(&l, meta))
}

pub fn export_entry(name: &str, path: &Path) -> Result<()> {
    let file = export_file(name)?;
    std::fs::write(path, file.to_json() + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Metadata-free export, mostly for tests.
pub fn export_lattice(l: &OLattice, path: &Path) -> Result<()> {
    io::write_lattice(path, l, Map::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_aliases_resolve() {
        let names = list_entries();
        assert_eq!(names.len(), 12);
        assert!(names.contains(&"Λ16/hurwitz".to_string()));
        assert_eq!(entry("L16/hurwitz").unwrap().name, "Λ16/hurwitz");
        assert_eq!(entry("Λ12MIN/Hurwitz").unwrap().name, "Λ12min/hurwitz");
        assert!(matches!(entry("E7/eisenstein"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn small_entries_verify() {
        for name in ["A2/eisenstein", "D4/hurwitz", "D4/gaussian", "E8/hurwitz"] {
            let r = verify_entry(name, &EnumOptions::default(), None).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
