//! Basis reduction, shortest vectors and Hermite invariants.

mod enumerate;
pub mod lll;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

pub use enumerate::Enumerator;
pub use lll::{gram_schmidt, is_lll_reduced, lll_reduce, LllOutput};

use crate::algebra::AlgebraElement;
use crate::error::Result;
use crate::lattice::{KVector, OLattice};
use crate::linalg::QMatrix;
use crate::num::{floor_nth_root, rat, Rational};
use crate::orders::Order;
use crate::par::Parallelism;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
pub const NODE_BUDGET_ENV: &str = "ORDLAT_NODE_BUDGET";

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub node_budget: u64,
    pub delta: Rational,
    pub parallelism: Parallelism,
}

impl Default for EnumOptions {
    fn default() -> Self {
        let node_budget = std::env::var(NODE_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_NODE_BUDGET);
        Self {
            node_budget,
            delta: rat(99, 100),
            parallelism: Parallelism::default(),
        }
    }
}

impl EnumOptions {
    pub fn sequential() -> Self {
        Self {
            parallelism: Parallelism::Sequential,
            ..Self::default()
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }

    pub fn with_parallelism(mut self, p: Parallelism) -> Self {
        self.parallelism = p;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HermiteData {
    #[serde(with = "crate::num::serde_rational")]
    pub min_norm: Rational,
    #[serde(with = "crate::num::serde_rational")]
    pub det: Rational,
    pub n: usize,
    /// `gamma` to 12 decimal places (truncated).
    pub gamma_decimal: String,
    /// `min_norm^n / det`, the exact `n`-th power of `gamma`.
    #[serde(with = "crate::num::serde_rational")]
    pub gamma_nth: Rational,
}

impl HermiteData {
    pub fn new(min_norm: Rational, det: Rational, n: usize) -> Self {
        let gamma_nth = num_traits::pow(min_norm.clone(), n) / &det;
        let gamma_decimal = nth_root_decimal(&gamma_nth, n as u32, 12);
        Self {
            min_norm,
            det,
            n,
            gamma_decimal,
            gamma_nth,
        }
    }

    pub fn gamma_f64(&self) -> f64 {
        self.gamma_decimal.parse().unwrap_or(f64::NAN)
    }
}

/// `q^(1/n)` truncated to `digits` decimal places.
pub fn nth_root_decimal(q: &Rational, n: u32, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), (digits * n) as usize);
    let root = floor_nth_root(&(q * Rational::from_integer(scale)), n);
    let s = root.to_string();
    let d = digits as usize;
    let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (whole, frac) = s.split_at(s.len() - d);
    format!("{whole}.{frac}")
}

/// Minimum of a positive definite Gram matrix.
pub fn gram_minimum(gram: &QMatrix, opts: &EnumOptions) -> Result<Rational> {
    Enumerator::new(gram, opts)?.minimum(opts)
}

/// Minimum and all minimal vectors as integer coordinates over the basis of
/// `gram`.
pub fn gram_minimal_vectors(gram: &QMatrix, opts: &EnumOptions) -> Result<(Rational, Vec<Vec<BigInt>>)> {
    Enumerator::new(gram, opts)?.minimal_vectors(opts)
}

fn combine(basis: &QMatrix, coords: &[BigInt]) -> KVector {
    let n = basis.first().map_or(0, Vec::len);
    let mut v = vec![Rational::zero(); n];
    for (c, row) in coords.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        let cq = Rational::from_integer(c.clone());
        for (x, b) in v.iter_mut().zip(row) {
            *x += &cq * b;
        }
    }
    v
}

pub fn shortest_norm(l: &OLattice, opts: &EnumOptions) -> Result<Rational> {
    gram_minimum(&l.gram(), opts)
}

#[derive(Debug, Clone)]
pub struct MinimalVectors {
    pub norm: Rational,
    /// Both signs of every minimal vector, in coordinate form.
    pub vectors: Vec<KVector>,
}

pub fn minimal_vectors(l: &OLattice, opts: &EnumOptions) -> Result<MinimalVectors> {
    let basis = l.basis();
    let (norm, coords) = gram_minimal_vectors(&l.gram(), opts)?;
    let vectors = coords.iter().map(|c| combine(&basis, c)).collect();
    Ok(MinimalVectors { norm, vectors })
}

/// All lattice vectors with `0 < norm <= bound`, both signs.
pub fn vectors_up_to(l: &OLattice, bound: &Rational, opts: &EnumOptions) -> Result<Vec<(Rational, KVector)>> {
    let basis = l.basis();
    let e = Enumerator::new(&l.gram(), opts)?;
    let mut out = Vec::new();
    for (n, c) in e.short_vectors(bound, opts)? {
        let neg: Vec<BigInt> = c.iter().map(|x| -x).collect();
        out.push((n.clone(), combine(&basis, &c)));
        out.push((n, combine(&basis, &neg)));
    }
    Ok(out)
}

pub fn hermite(l: &OLattice, opts: &EnumOptions) -> Result<HermiteData> {
    let min = shortest_norm(l, opts)?;
    Ok(HermiteData::new(min, l.determinant(), l.rank()))
}

/// Units of an order: the norm-one vectors of the rank-one lattice `O`.
pub fn order_units(order: &Arc<Order>) -> Vec<AlgebraElement> {
    let o = OLattice::standard(order.clone(), 1);
    let opts = EnumOptions::sequential();
    let units = vectors_up_to(&o, &Rational::from_integer(1.into()), &opts).expect("rank four enumeration");
    let mut out: Vec<AlgebraElement> = units
        .into_iter()
        .filter(|(n, _)| *n == Rational::from_integer(1.into()))
        .map(|(_, v)| AlgebraElement::new(order.spec().clone(), v).expect("rank matches"))
        .collect();
    out.sort_by(|a, b| a.coords().cmp(b.coords()));
    out
}

pub fn kissing_number(l: &OLattice, opts: &EnumOptions) -> Result<usize> {
    Ok(minimal_vectors(l, opts)?.vectors.len())
}
