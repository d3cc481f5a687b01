//! JSON lattice files.
//!
//! ```json
//! {"order": "hurwitz", "m": 2,
//!  "generators": [[["1","0","0","0"], ["1","0","0","0"]], ...],
//!  "metadata": {"name": "E8"}}
//! ```
//!
//! `order` is either a built-in name or an inline
//! `{"name", "spec", "basis"}` object. Generators are O-closed on load, so
//! any generating set is accepted.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::AlgebraSpec;
use crate::error::{Error, Result};
use crate::lattice::{KVector, OLattice};
use crate::num::{fmt_rational, parse_rational};
use crate::orders::Order;

pub const BUILTIN_ORDERS: [&str; 4] = ["eisenstein", "gaussian", "hurwitz", "j"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderRef {
    Named(String),
    Inline {
        name: String,
        spec: AlgebraSpec,
        basis: Vec<Vec<String>>,
    },
}

impl OrderRef {
    pub fn resolve(&self) -> Result<Order> {
        match self {
            OrderRef::Named(name) => Order::builtin(name),
            OrderRef::Inline { name, spec, basis } => {
                let rows = basis
                    .iter()
                    .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                let order = Order::new(name.clone(), spec.clone(), rows)?;
                let report = order.verify_ring_closure();
                if !report.passed() {
                    return Err(Error::InvalidOrder(format!(
                        "basis of `{name}` is not closed under multiplication"
                    )));
                }
                Ok(order)
            }
        }
    }

    pub fn of(order: &Order) -> Self {
        let builtin = BUILTIN_ORDERS
            .iter()
            .find(|n| Order::builtin(n).map(|b| b == *order && b.name() == order.name()).unwrap_or(false));
        match builtin {
            Some(n) => OrderRef::Named(n.to_string()),
            None => OrderRef::Inline {
                name: order.name().to_string(),
                spec: (**order.spec()).clone(),
                basis: order
                    .basis_matrix()
                    .iter()
                    .map(|r| r.iter().map(fmt_rational).collect())
                    .collect(),
            },
        }
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("lattice file serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub order: OrderRef,
    pub m: usize,
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl LatticeFile {
    /// Writes the canonical basis of `l`.
    pub fn from_lattice(l: &OLattice, metadata: Map<String, Value>) -> Self {
        let r = l.order().rank();
        let generators = l
            .basis()
            .iter()
            .map(|v| v.chunks(r).map(|c| c.iter().map(fmt_rational).collect()).collect())
            .collect();
        Self {
            order: OrderRef::of(l.order()),
            m: l.m(),
            generators,
            metadata,
        }
    }

    pub fn to_lattice(&self) -> Result<OLattice> {
        let order = Arc::new(self.order.resolve()?);
        let r = order.rank();
        let mut rows: Vec<KVector> = Vec::with_capacity(self.generators.len());
        for (g, gen) in self.generators.iter().enumerate() {
            if gen.len() != self.m {
                return Err(Error::Config(format!(
                    "generator {} has {} entries, expected m = {}",
                    g + 1,
                    gen.len(),
                    self.m
                )));
            }
            let mut row = Vec::with_capacity(self.m * r);
            for x in gen {
                if x.len() != r {
                    return Err(Error::Config(format!(
                        "generator {} has an entry with {} coordinates, expected {r}",
                        g + 1,
                        x.len()
                    )));
                }
                for c in x {
                    row.push(parse_rational(c)?);
                }
            }
            rows.push(row);
        }
        OLattice::module_from_rows(order, self.m, &rows)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty JSON with one generator per line.
    pub fn to_json(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("    {}", compact(g))).collect();
        format!(
            "{{\n  \"order\": {},\n  \"m\": {},\n  \"generators\": [\n{}\n  ],\n  \"metadata\": {}\n}}",
            compact(&self.order),
            self.m,
            gens.join(",\n"),
            compact(&self.metadata),
        )
    }
}

pub fn read_lattice_file(path: &Path) -> Result<LatticeFile> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    LatticeFile::parse(&text)
}

pub fn read_lattice(path: &Path) -> Result<OLattice> {
    read_lattice_file(path)?.to_lattice()
}

pub fn write_lattice(path: &Path, l: &OLattice, metadata: Map<String, Value>) -> Result<()> {
    let file = LatticeFile::from_lattice(l, metadata);
    fs::write(path, file.to_json() + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_canonical_basis() {
        let order = Arc::new(Order::builtin("hurwitz").unwrap());
        let text = r#"{"order":"hurwitz","m":2,"generators":[[["1","0","0","0"],["1","0","0","0"]],[["1","1","0","0"],["0","0","0","0"]]]}"#;
        let l = LatticeFile::parse(text).unwrap().to_lattice().unwrap();
        assert_eq!(l.order(), &order);
        let back = LatticeFile::parse(&LatticeFile::from_lattice(&l, Map::new()).to_json())
            .unwrap()
            .to_lattice()
            .unwrap();
        assert_eq!(back.zlattice().hnf(), l.zlattice().hnf());
        assert_eq!(back.determinant(), num_rational::BigRational::from_integer(1.into()));
    }

    #[test]
    fn inline_orders_are_checked() {
        let ok = r#"{"order":{"name":"z[i]","spec":{"kind":"quadratic","d":"-1"},"basis":[["1","0"],["0","1"]]},"m":1,"generators":[[["1","0"]]]}"#;
        let l = LatticeFile::parse(ok).unwrap().to_lattice().unwrap();
        assert_eq!(l.rank(), 2);
        assert!(matches!(LatticeFile::from_lattice(&l, Map::new()).order, OrderRef::Inline { .. }));
        let bad = r#"{"order":{"name":"bad","spec":{"kind":"quadratic","d":"-1"},"basis":[["1","0"],["0","1/2"]]},"m":1,"generators":[[["1","0"]]]}"#;
        assert!(matches!(
            LatticeFile::parse(bad).unwrap().to_lattice(),
            Err(Error::InvalidOrder(_))
        ));
    }

    #[test]
    fn missing_file_reports_path() {
        let err = read_lattice(Path::new("/nonexistent/lattice.json")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/lattice.json"));
    }
}
