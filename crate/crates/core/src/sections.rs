//! K-subspaces, sections `L ∩ F`, orthogonal projections onto `F^⊥`, the
//! determinant identities relating them, and the audit of the equality
//! conditions of the Mordell step.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::lattice::{left_multiply, KVector, OLattice};
use crate::linalg::{self, QMatrix};
use crate::num::{fmt_rational, Rational};
use crate::orders::Order;
use crate::par;
use crate::powerproduct::PowerProduct;
use crate::reduction::{self, EnumOptions};
use crate::zlattice::ZLattice;

/// A K-subspace of `K^m`, presented by K-linearly independent generators.
#[derive(Debug, Clone)]
pub struct Subspace {
    order: Arc<Order>,
    m: usize,
    generators: Vec<KVector>,
    /// Reduced row echelon Q-basis of the K-span.
    qbasis: QMatrix,
}

fn k_line(order: &Order, v: &[Rational]) -> Vec<KVector> {
    (0..order.rank())
        .map(|c| {
            let e = AlgebraElement::basis(order.spec().clone(), c);
            left_multiply(order, e.coords(), v)
        })
        .collect()
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && *self.order == *other.order && self.qbasis == other.qbasis
    }
}

impl Subspace {
    pub fn new(order: Arc<Order>, m: usize, generators: Vec<KVector>) -> Result<Self> {
        let n = m * order.rank();
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::Precondition(format!("generators must have {n} coordinates")));
        }
        let rows: Vec<KVector> = generators.iter().flat_map(|g| k_line(&order, g)).collect();
        let qbasis = linalg::rref(&rows);
        if qbasis.len() != generators.len() * order.rank() {
            return Err(Error::Precondition("subspace generators are not K-linearly independent".into()));
        }
        Ok(Self {
            order,
            m,
            generators,
            qbasis,
        })
    }

    /// K-span of `vectors`, keeping a K-independent subset as generators.
    pub fn span(order: Arc<Order>, m: usize, vectors: &[KVector]) -> Self {
        let r = order.rank();
        let mut rows: Vec<KVector> = Vec::new();
        let mut generators = Vec::new();
        for v in vectors {
            let mut trial = rows.clone();
            trial.extend(k_line(&order, v));
            let rr = linalg::rref(&trial);
            if rr.len() == rows.len() + r {
                rows = rr;
                generators.push(v.clone());
            }
        }
        Self {
            order,
            m,
            generators,
            qbasis: rows,
        }
    }

    pub fn whole(order: Arc<Order>, m: usize) -> Self {
        let n = m * order.rank();
        let basis: Vec<KVector> = (0..m)
            .map(|t| {
                let mut v = vec![Rational::from_integer(0.into()); n];
                v[t * order.rank()] = Rational::from_integer(1.into());
                v
            })
            .collect();
        Self::span(order, m, &basis)
    }

    pub fn order(&self) -> &Arc<Order> {
        &self.order
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// K-dimension `s`.
    pub fn k_dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[KVector] {
        &self.generators
    }

    pub fn qbasis(&self) -> &QMatrix {
        &self.qbasis
    }

    fn ambient_dim(&self) -> usize {
        self.m * self.order.rank()
    }

    fn weights(&self) -> Vec<Rational> {
        let w = self.order.spec().weights();
        (0..self.m).flat_map(|_| w.iter().cloned()).collect()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut rows = self.qbasis.clone();
        rows.push(v.to_vec());
        linalg::rank(&rows) == self.qbasis.len()
    }

    /// The orthogonal complement, again a K-subspace.
    pub fn perp(&self) -> Subspace {
        let n = self.ambient_dim();
        let w = self.weights();
        let weighted: QMatrix = self
            .qbasis
            .iter()
            .map(|u| u.iter().zip(&w).map(|(a, b)| a * b).collect())
            .collect();
        let null = if weighted.is_empty() {
            linalg::identity(n)
        } else {
            linalg::right_nullspace(&weighted, n)
        };
        Self::span(self.order.clone(), self.m, &null)
    }

    /// Orthogonal projection onto the complement of `self`.
    pub fn project_away(&self, x: &[Rational]) -> KVector {
        if self.qbasis.is_empty() {
            return x.to_vec();
        }
        let w = self.weights();
        let u = &self.qbasis;
        let wu: QMatrix = u
            .iter()
            .map(|row| row.iter().zip(&w).map(|(a, b)| a * b).collect())
            .collect();
        let gram = linalg::mat_mul(u, &linalg::transpose(&wu));
        let ginv = linalg::inverse(&gram).expect("definite form");
        let c: Vec<Rational> = wu.iter().map(|row| linalg::dot(x, row)).collect();
        let coeff = linalg::vec_mul(&c, &ginv);
        let shift = linalg::vec_mul(&coeff, u);
        x.iter().zip(shift).map(|(a, b)| a - b).collect()
    }
}

fn check_ambient(l: &OLattice, f: &Subspace) -> Result<()> {
    if *l.order() != f.order {
        return Err(Error::OrderMismatch(l.order().name().into(), f.order.name().into()));
    }
    if l.m() != f.m {
        return Err(Error::Precondition(format!(
            "lattice lives in K^{} but the subspace in K^{}",
            l.m(),
            f.m
        )));
    }
    Ok(())
}

/// The section `L ∩ F` as a relative lattice.
pub fn intersect(l: &OLattice, f: &Subspace) -> Result<OLattice> {
    check_ambient(l, f)?;
    let n = l.ambient_dim();
    let basis = l.basis();
    let equations = if f.qbasis.is_empty() {
        linalg::identity(n)
    } else {
        linalg::right_nullspace(&f.qbasis, n)
    };
    if equations.is_empty() {
        return Ok(l.clone());
    }
    let m = linalg::mat_mul(&basis, &linalg::transpose(&equations));
    let (_, mz) = linalg::clear_denominators(&m);
    let kernel = linalg::integer_left_kernel(&mz);
    let kq = linalg::to_rational_matrix(&kernel);
    let rows = linalg::mat_mul(&kq, &basis);
    Ok(OLattice::from_zlattice(
        l.order().clone(),
        l.m(),
        ZLattice::from_rows(n, &rows),
    ))
}

/// `pi_{F^⊥}(L)`. The section `L ∩ F` must have full rank in `F`, which is
/// what makes the image discrete.
pub fn project_perp(l: &OLattice, f: &Subspace) -> Result<OLattice> {
    check_ambient(l, f)?;
    let section = intersect(l, f)?;
    let expected = f.qbasis.len();
    if section.rank() != expected {
        return Err(Error::Precondition(format!(
            "the section has Z-rank {} but F has dimension {expected} over Q; its projection would not be discrete",
            section.rank()
        )));
    }
    let rows: Vec<KVector> = l.basis().iter().map(|v| f.project_away(v)).collect();
    Ok(OLattice::from_zlattice(
        l.order().clone(),
        l.m(),
        ZLattice::from_rows(l.ambient_dim(), &rows),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectionReport {
    pub det_lattice: String,
    pub det_section: String,
    pub det_projection: String,
    pub holds: bool,
}

/// Checks `det L = det(L ∩ F) det(pi_{F^⊥} L)`.
pub fn section_projection_identity(l: &OLattice, f: &Subspace) -> Result<ProjectionReport> {
    let section = intersect(l, f)?;
    let proj = project_perp(l, f)?;
    let (a, b, c) = (l.determinant(), section.determinant(), proj.determinant());
    Ok(ProjectionReport {
        holds: a == &b * &c,
        det_lattice: fmt_rational(&a),
        det_section: fmt_rational(&b),
        det_projection: fmt_rational(&c),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DualSectionReport {
    pub s: usize,
    pub det_lattice: String,
    pub det_section: String,
    pub det_dual_section: String,
    pub d_factor: String,
    pub identity_holds: bool,
    pub section_rank: usize,
    pub dual_section_rank: usize,
    pub rank_equivalence_holds: bool,
    /// `(pi_{F^⊥} L)^# = L^# ∩ F^⊥` as lattices.
    pub projection_dual_matches: bool,
    pub passed: bool,
}

/// Checks `det L = det(L ∩ F) det(L^# ∩ F^⊥)^{-1} D^{2(m-s)}`, the
/// matching rank statement for `F` and `F^⊥`, and the identity of the dual
/// of the projection with the dual section.
pub fn dual_section_identity(l: &OLattice, f: &Subspace) -> Result<DualSectionReport> {
    check_ambient(l, f)?;
    let r = l.order().rank();
    let (m, s) = (l.m(), f.k_dim());
    let fp = f.perp();
    let dual = l.o_dual();
    let section = intersect(l, f)?;
    let dual_section = intersect(&dual, &fp)?;
    let section_full = section.rank() == r * s;
    let dual_full = dual_section.rank() == r * (m - s);
    let rank_equivalence_holds = section_full == dual_full;

    let d = l.order().d_invariant();
    let d_factor = num_traits::pow(d, 2 * (m - s));
    let det_l = l.determinant();
    let det_s = section.determinant();
    let det_ds = dual_section.determinant();
    let identity_holds = section_full && dual_full && det_l == &det_s / &det_ds * &d_factor;

    let projection_dual_matches = if section_full {
        let proj = project_perp(l, f)?;
        proj.o_dual().zlattice() == dual_section.zlattice()
    } else {
        false
    };
    Ok(DualSectionReport {
        s,
        det_lattice: fmt_rational(&det_l),
        det_section: fmt_rational(&det_s),
        det_dual_section: fmt_rational(&det_ds),
        d_factor: fmt_rational(&d_factor),
        identity_holds,
        section_rank: section.rank(),
        dual_section_rank: dual_section.rank(),
        rank_equivalence_holds,
        projection_dual_matches,
        passed: identity_holds && rank_equivalence_holds && projection_dual_matches,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitAudit {
    /// Coordinates of the representative minimal vector of `L^#`.
    pub representative: Vec<String>,
    pub orbit_size: usize,
    pub section_rank: usize,
    pub section_norm: String,
    pub section_det: String,
    pub section_kissing: usize,
    pub section_gamma_nth: String,
    /// `N(L ∩ (Kx)^⊥) = N(L)`.
    pub norm_matches: bool,
    /// `L^# ∩ Kx = Ox`.
    pub dual_line_is_ox: bool,
    /// The section's invariant equals the reference value.
    pub gamma_matches_reference: bool,
}

impl OrbitAudit {
    pub fn passed(&self) -> bool {
        self.norm_matches && self.dual_line_is_ox && self.gamma_matches_reference
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub order: String,
    pub m: usize,
    pub reference: String,
    pub lattice_norm: String,
    pub lattice_gamma_nth: String,
    pub dual_norm: String,
    pub dual_gamma_nth: String,
    pub dual_minimal_vectors: usize,
    pub units: usize,
    pub dual_gamma_matches: bool,
    pub orbits: Vec<OrbitAudit>,
    pub all_conditions_hold: bool,
}

fn orbit_representatives(order: &Order, units: &[AlgebraElement], vectors: &[KVector]) -> Vec<(KVector, usize)> {
    let mut seen: BTreeSet<KVector> = BTreeSet::new();
    let mut reps = Vec::new();
    let mut sorted = vectors.to_vec();
    sorted.sort();
    for v in sorted {
        if seen.contains(&v) {
            continue;
        }
        let orbit: BTreeSet<KVector> = units.iter().map(|u| left_multiply(order, u.coords(), &v)).collect();
        let size = orbit.len();
        seen.extend(orbit);
        reps.push((v, size));
    }
    reps
}

/// Audits the equality conditions for `L` at the minimal vectors of `L^#`
/// against a reference value for the invariant in K-dimension `m - 1`.
/// With `all` set every minimal vector is tested; otherwise one per unit orbit.
pub fn equality_audit(l: &OLattice, reference: &PowerProduct, all: bool, opts: &EnumOptions) -> Result<AuditReport> {
    let m = l.m();
    if m < 3 {
        return Err(Error::Precondition(format!("the audit needs m >= 3, got m = {m}")));
    }
    if !l.is_full_rank() {
        return Err(Error::Precondition("the audit needs a full-rank lattice".into()));
    }
    let order = l.order().clone();
    let r = order.rank();
    let dual = l.o_dual();
    let lattice_h = reduction::hermite(l, opts)?;
    let dual_min = reduction::minimal_vectors(&dual, opts)?;
    let dual_h = reduction::HermiteData::new(dual_min.norm.clone(), dual.determinant(), dual.rank());
    let units = reduction::order_units(&order);
    let reps: Vec<(KVector, usize)> = if all {
        dual_min.vectors.iter().map(|v| (v.clone(), 1)).collect()
    } else {
        orbit_representatives(&order, &units, &dual_min.vectors)
    };

    let n_section = r * (m - 1);
    let ref_power = reference.pow_int(n_section as i64);
    let inner = EnumOptions {
        parallelism: if opts.parallelism.is_parallel() {
            crate::par::Parallelism::Sequential
        } else {
            opts.parallelism
        },
        ..opts.clone()
    };
    let results = par::map(opts.parallelism, &reps, |(x, size)| -> Result<OrbitAudit> {
        let line = Subspace::new(order.clone(), m, vec![x.clone()])?;
        let section = intersect(l, &line.perp())?;
        let mv = reduction::minimal_vectors(&section, &inner)?;
        let h = reduction::HermiteData::new(mv.norm.clone(), section.determinant(), section.rank());
        let dual_line = intersect(&dual, &line)?;
        let ox = OLattice::module_from_rows(order.clone(), m, std::slice::from_ref(x))?;
        let gamma_matches_reference = section.rank() == n_section
            && PowerProduct::from_rational(&h.gamma_nth)?.compare(&ref_power)? == Ordering::Equal;
        Ok(OrbitAudit {
            representative: x.iter().map(fmt_rational).collect(),
            orbit_size: *size,
            section_rank: section.rank(),
            section_norm: fmt_rational(&h.min_norm),
            section_det: fmt_rational(&h.det),
            section_kissing: mv.vectors.len(),
            section_gamma_nth: fmt_rational(&h.gamma_nth),
            norm_matches: h.min_norm == lattice_h.min_norm,
            dual_line_is_ox: dual_line.zlattice() == ox.zlattice(),
            gamma_matches_reference,
        })
    });
    let orbits = results.into_iter().collect::<Result<Vec<_>>>()?;
    let dual_gamma_matches = dual_h.gamma_nth == lattice_h.gamma_nth;
    let all_conditions_hold = orbits.iter().all(OrbitAudit::passed);
    Ok(AuditReport {
        order: order.name().to_string(),
        m,
        reference: reference.to_string(),
        lattice_norm: fmt_rational(&lattice_h.min_norm),
        lattice_gamma_nth: fmt_rational(&lattice_h.gamma_nth),
        dual_norm: fmt_rational(&dual_h.min_norm),
        dual_gamma_nth: fmt_rational(&dual_h.gamma_nth),
        dual_minimal_vectors: dual_min.vectors.len(),
        units: units.len(),
        dual_gamma_matches,
        orbits,
        all_conditions_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn order(name: &str) -> Arc<Order> {
        Arc::new(Order::builtin(name).unwrap())
    }

    fn unit_vector(o: &Order, m: usize, t: usize) -> KVector {
        let mut v = vec![int(0); m * o.rank()];
        v[t * o.rank()] = int(1);
        v
    }

    #[test]
    fn perp_of_coordinate_line() {
        let o = order("eisenstein");
        let f = Subspace::new(o.clone(), 2, vec![unit_vector(&o, 2, 0)]).unwrap();
        let p = f.perp();
        assert_eq!(p.k_dim(), 1);
        assert!(p.contains(&unit_vector(&o, 2, 1)));
        assert_eq!(p.perp(), f);
    }

    #[test]
    fn perp_of_diagonal_gaussian() {
        let o = order("gaussian");
        let f = Subspace::new(o.clone(), 2, vec![vec![int(1), int(0), int(1), int(0)]]).unwrap();
        let p = f.perp();
        assert!(p.contains(&[int(1), int(0), int(-1), int(0)]));
        assert!(!p.contains(&[int(1), int(0), int(1), int(0)]));
    }

    #[test]
    fn dependent_generators_rejected() {
        let o = order("hurwitz");
        let mut iv = vec![int(0); 8];
        iv[1] = int(1);
        assert!(Subspace::new(o.clone(), 2, vec![unit_vector(&o, 2, 0), iv]).is_err());
    }

    #[test]
    fn standard_section_and_projection() {
        for name in crate::orders::BUILTIN_ORDERS {
            let o = order(name);
            let l = OLattice::standard(o.clone(), 2);
            let f = Subspace::new(o.clone(), 2, vec![unit_vector(&o, 2, 0)]).unwrap();
            let sec = intersect(&l, &f).unwrap();
            assert_eq!(sec.rank(), o.rank());
            assert_eq!(sec.determinant(), o.d_invariant());
            let proj = project_perp(&l, &f).unwrap();
            let e2 = OLattice::module_from_rows(o.clone(), 2, &[unit_vector(&o, 2, 1)]).unwrap();
            assert_eq!(proj, e2);
            let rep = dual_section_identity(&l, &f).unwrap();
            assert!(rep.passed, "{name}: {rep:?}");
            assert!(section_projection_identity(&l, &f).unwrap().holds);
        }
    }

    #[test]
    fn projection_introduces_denominators() {
        // {(x, y) : x = y mod (1+i)}, index 2 in Z[i]^2
        let o = order("gaussian");
        let l = OLattice::from_rows(
            o.clone(),
            2,
            &[vec![int(1), int(0), int(1), int(0)], vec![int(1), int(1), int(0), int(0)]],
        )
        .unwrap();
        assert_eq!(l.determinant(), int(4));
        let f = Subspace::new(o.clone(), 2, vec![vec![int(1), int(0), int(1), int(0)]]).unwrap();
        let proj = project_perp(&l, &f).unwrap();
        assert!(proj.basis().iter().flatten().any(|x| *x.denom() == 2.into()));
        assert!(section_projection_identity(&l, &f).unwrap().holds);
        assert!(dual_section_identity(&l, &f).unwrap().passed);
    }

    #[test]
    fn relative_lattice_projection_needs_full_section() {
        let o = order("gaussian");
        let l = OLattice::module_from_rows(o.clone(), 2, &[vec![int(1), int(0), int(1), int(0)]]).unwrap();
        let f = Subspace::new(o.clone(), 2, vec![unit_vector(&o, 2, 0)]).unwrap();
        assert!(matches!(project_perp(&l, &f), Err(Error::Precondition(_))));
    }

    #[test]
    fn audit_guard_and_standard_failure() {
        let h = order("hurwitz");
        let l2 = OLattice::standard(h.clone(), 2);
        let reference = PowerProduct::parse("2^(7/6)").unwrap();
        assert!(matches!(
            equality_audit(&l2, &reference, false, &EnumOptions::default()),
            Err(Error::Precondition(_))
        ));
        let l3 = OLattice::standard(h, 3);
        let report = equality_audit(&l3, &PowerProduct::from_integer(2), false, &EnumOptions::default()).unwrap();
        assert_eq!(report.units, 24);
        assert_eq!(report.dual_minimal_vectors, 72);
        assert_eq!(report.orbits.len(), 3);
        assert!(report.orbits.iter().all(|o| o.norm_matches && o.dual_line_is_ox));
        assert!(report.orbits.iter().all(|o| !o.gamma_matches_reference));
        assert!(!report.all_conditions_hold);
    }
}
