//! Identity suites: the determinant product formula, biduality,
//! antitonicity, the two section determinant identities, and the
//! shortest-norm oracle, run on single lattices or seeded corpora.

use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::corpus;
use crate::error::Result;
use crate::lattice::OLattice;
use crate::linalg::{self, QMatrix};
use crate::num::{fmt_rational, rat, Rational};
use crate::orders::Order;
use crate::par;
use crate::reduction::{self, lll, EnumOptions};
use crate::sections::{self, Subspace};

pub const PRODUCT_FORMULA: &str = "det(L) det(L#) = D^(2m)";
pub const BIDUALITY: &str = "L## = L";
pub const ANTITONICITY: &str = "A in B implies B# in A#";
pub const SECTION_PROJECTION: &str = "det(L) = det(L cap F) det(proj_Fperp L)";
pub const DUAL_SECTION: &str = "det(L) = det(L cap F) det(L# cap Fperp)^-1 D^(2(m-s))";
pub const PROJECTION_DUAL: &str = "(proj_Fperp L)# = L# cap Fperp";
pub const SVP_ORACLE: &str = "shortest norm = brute force";

/// Largest Z-rank handed to the brute-force oracle.
pub const BRUTE_FORCE_MAX_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub identity: String,
    pub instances: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub order: String,
    pub seed: u64,
    pub results: Vec<IdentityResult>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(order: &str, seed: u64, results: Vec<IdentityResult>) -> Self {
        let passed = results.iter().all(IdentityResult::passed);
        Self {
            order: order.to_string(),
            seed,
            results,
            passed,
        }
    }

    pub fn result(&self, identity: &str) -> Option<&IdentityResult> {
        self.results.iter().find(|r| r.identity == identity)
    }

    fn merge(&mut self, other: SuiteReport) {
        for r in other.results {
            match self.results.iter_mut().find(|x| x.identity == r.identity) {
                Some(x) => {
                    x.instances += r.instances;
                    x.failures += r.failures;
                    if x.first_failure.is_none() {
                        x.first_failure = r.first_failure;
                    }
                }
                None => self.results.push(r),
            }
        }
        self.passed = self.results.iter().all(IdentityResult::passed);
    }
}

/// `None` is a pass; `Some` carries a description of the failure.
type Outcome = Option<String>;

fn tally(identity: &str, outcomes: Vec<Result<Outcome>>) -> IdentityResult {
    let mut failures = 0;
    let mut first_failure = None;
    for (i, o) in outcomes.iter().enumerate() {
        let msg = match o {
            Ok(None) => continue,
            Ok(Some(m)) => m.clone(),
            Err(e) => e.to_string(),
        };
        failures += 1;
        first_failure.get_or_insert_with(|| format!("instance {i}: {msg}"));
    }
    IdentityResult {
        identity: identity.to_string(),
        instances: outcomes.len(),
        failures,
        first_failure,
    }
}

pub fn product_formula(l: &OLattice) -> Outcome {
    let d = l.order().d_invariant();
    let lhs = l.determinant() * l.o_dual().determinant();
    let rhs = num_traits::pow(d, 2 * l.m());
    (lhs != rhs).then(|| format!("product {} but D^(2m) = {}", fmt_rational(&lhs), fmt_rational(&rhs)))
}

pub fn biduality(l: &OLattice) -> Outcome {
    (l.o_dual().o_dual().zlattice() != l.zlattice()).then(|| "second dual differs".to_string())
}

/// Expects `a ⊆ b`.
pub fn antitonicity(a: &OLattice, b: &OLattice) -> Outcome {
    if !a.is_sublattice_of(b) {
        return Some("pair is not nested".into());
    }
    (!b.o_dual().is_sublattice_of(&a.o_dual())).then(|| "dual inclusion not reversed".to_string())
}

pub fn section_projection(l: &OLattice, f: &Subspace) -> Result<Outcome> {
    let r = sections::section_projection_identity(l, f)?;
    Ok((!r.holds).then(|| {
        format!(
            "det {} vs section {} times projection {}",
            r.det_lattice, r.det_section, r.det_projection
        )
    }))
}

/// Returns outcomes for the determinant identity and the projection-dual
/// identity.
pub fn dual_section(l: &OLattice, f: &Subspace) -> Result<(Outcome, Outcome)> {
    let r = sections::dual_section_identity(l, f)?;
    let det = (!(r.identity_holds && r.rank_equivalence_holds)).then(|| {
        format!(
            "det {} section {} dual section {} factor {} (ranks {} / {})",
            r.det_lattice, r.det_section, r.det_dual_section, r.d_factor, r.section_rank, r.dual_section_rank
        )
    });
    let proj = (!r.projection_dual_matches).then(|| "dual of projection differs from dual section".to_string());
    Ok((det, proj))
}

/// Minimum of a positive definite Gram matrix by exhaustive search over the
/// box `|x_i|^2 <= B (G^-1)_ii`, `B` the least diagonal entry of an
/// LLL-reduced Gram. Independent of the enumeration code.
pub fn brute_force_minimum(gram: &QMatrix) -> Result<Rational> {
    let red = lll::lll_reduce(gram, &rat(3, 4))?.gram;
    let n = red.len();
    if n == 0 {
        return Ok(Rational::zero());
    }
    let bound = red.iter().enumerate().map(|(i, r)| r[i].clone()).min().expect("nonempty");
    let inv = linalg::inverse(&red).expect("positive definite");
    let radii: Vec<i64> = (0..n)
        .map(|i| {
            let q = &bound * &inv[i][i];
            crate::num::floor_sqrt(&q).to_i64().expect("small box")
        })
        .collect();
    let (den, gz) = linalg::clear_denominators(&red);
    let g: Vec<Vec<i128>> = gz.iter().map(|r| r.iter().map(|x| x.to_i128().expect("small gram")).collect()).collect();
    let mut x: Vec<i64> = radii.iter().map(|r| -r).collect();
    let mut best: Option<i128> = None;
    loop {
        if x.iter().any(|&c| c != 0) {
            let mut s: i128 = 0;
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                let mut row: i128 = 0;
                for j in 0..n {
                    row += g[i][j] * x[j] as i128;
                }
                s += row * x[i] as i128;
            }
            if best.is_none_or(|b| s < b) {
                best = Some(s);
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                let b = best.expect("box contains a basis vector");
                return Ok(Rational::new(b.into(), den));
            }
            if x[k] < radii[k] {
                x[k] += 1;
                break;
            }
            x[k] = -radii[k];
            k += 1;
        }
    }
}

pub fn svp_oracle(l: &OLattice, opts: &EnumOptions) -> Result<Outcome> {
    let gram = l.gram();
    let fast = reduction::gram_minimum(&gram, opts)?;
    let slow = brute_force_minimum(&gram)?;
    Ok((fast != slow).then(|| format!("enumeration {} brute force {}", fmt_rational(&fast), fmt_rational(&slow))))
}

/// Runs every identity on one lattice, with `trials` random subspaces drawn
/// from lattice vectors (sections need `m >= 2`).
pub fn lattice_suite(l: &OLattice, trials: usize, seed: u64, opts: &EnumOptions) -> Result<SuiteReport> {
    let mut results = vec![
        tally(PRODUCT_FORMULA, vec![Ok(product_formula(l))]),
        tally(BIDUALITY, vec![Ok(biduality(l))]),
    ];
    if l.m() >= 2 {
        let mut g = corpus::rng(seed);
        let fs: Vec<Subspace> = (0..trials)
            .map(|i| corpus::random_subspace(l, 1 + i % (l.m() - 1).min(2), &mut g))
            .collect();
        results.extend(section_results(&fs.iter().map(|f| (l.clone(), f.clone())).collect::<Vec<_>>(), opts));
    }
    if l.rank() <= BRUTE_FORCE_MAX_RANK {
        results.push(tally(SVP_ORACLE, vec![svp_oracle(l, opts)]));
    }
    Ok(SuiteReport::new(l.order().name(), seed, results))
}

fn section_results(instances: &[(OLattice, Subspace)], opts: &EnumOptions) -> Vec<IdentityResult> {
    let outcomes = par::map(opts.parallelism, instances, |(l, f)| {
        let a = section_projection(l, f);
        let b = dual_section(l, f);
        (a, b)
    });
    let mut sp = Vec::new();
    let mut ds = Vec::new();
    let mut pd = Vec::new();
    for (a, b) in outcomes {
        sp.push(a);
        match b {
            Ok((x, y)) => {
                ds.push(Ok(x));
                pd.push(Ok(y));
            }
            Err(e) => {
                pd.push(Ok(Some(e.to_string())));
                ds.push(Err(e));
            }
        }
    }
    vec![
        tally(SECTION_PROJECTION, sp),
        tally(DUAL_SECTION, ds),
        tally(PROJECTION_DUAL, pd),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSizes {
    pub lattices: usize,
    pub nested: usize,
    pub sections: usize,
}

impl Default for CorpusSizes {
    fn default() -> Self {
        Self {
            lattices: 200,
            nested: 50,
            sections: 200,
        }
    }
}

/// Every identity on seeded corpora for one order, with `m` in `1..=3`.
pub fn corpus_suite(order: &Arc<Order>, sizes: CorpusSizes, seed: u64, opts: &EnumOptions) -> Result<SuiteReport> {
    let lattices = corpus::lattices(order, sizes.lattices, 3, seed);
    let pairs = corpus::nested_pairs(order, sizes.nested, 3, seed.wrapping_add(1));
    let instances = corpus::section_instances(order, sizes.sections, seed.wrapping_add(2));
    let mode = opts.parallelism;

    let mut results = vec![
        tally(PRODUCT_FORMULA, par::map(mode, &lattices, |l| Ok(product_formula(l)))),
        tally(BIDUALITY, par::map(mode, &lattices, |l| Ok(biduality(l)))),
        tally(ANTITONICITY, par::map(mode, &pairs, |(a, b)| Ok(antitonicity(a, b)))),
    ];
    results.extend(section_results(&instances, opts));
    let small: Vec<&OLattice> = lattices.iter().filter(|l| l.rank() <= BRUTE_FORCE_MAX_RANK).collect();
    results.push(tally(SVP_ORACLE, par::map(mode, &small, |l| svp_oracle(l, opts))));
    Ok(SuiteReport::new(order.name(), seed, results))
}

/// Corpus suites for several orders, merged into one report with the
/// counts summed.
pub fn corpus_suites(orders: &[Arc<Order>], sizes: CorpusSizes, seed: u64, opts: &EnumOptions) -> Result<Vec<SuiteReport>> {
    orders.iter().map(|o| corpus_suite(o, sizes, seed, opts)).collect()
}

pub fn merged(reports: Vec<SuiteReport>) -> Option<SuiteReport> {
    let mut it = reports.into_iter();
    let mut first = it.next()?;
    for r in it {
        first.order = format!("{},{}", first.order, r.order);
        first.merge(r);
    }
    Some(first)
}
