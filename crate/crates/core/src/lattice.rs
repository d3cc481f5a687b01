//! O-lattices: left O-modules inside `K^m`, stored through their rational
//! coordinate realisation in `Q^{rm}` (component `t` occupies coordinates
//! `t*r .. (t+1)*r`).
//!
//! The Hermitian form is the standard `h(x, y) = sum_t x_t conj(y_t)` and the
//! inner product is `<x, y> = (h(x, y) + conj(h(x, y))) / 2`. With this
//! normalisation the rank-one lattice `O` has determinant exactly `D_O`.
//!
//! A lattice need not have full rank: sections and projections are stored
//! as relative lattices of lower Z-rank in the same ambient space.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix};
use crate::num::{fmt_rational, floor_sqrt, Rational};
use crate::orders::Order;
use crate::zlattice::{gram_of, ZLattice};

/// A vector of `K^m` in coordinate form.
pub type KVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OLattice {
    order: Arc<Order>,
    m: usize,
    z: ZLattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceViolation {
    /// 1-based index of the order basis element.
    pub alpha: usize,
    /// 0-based index of the canonical basis vector.
    pub vector: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub violations: Vec<InvarianceViolation>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct FreeSandwich {
    /// Free O-lattice generated by `generators`, contained in the input.
    pub free: OLattice,
    /// A K-basis of `K^m` made of lattice vectors.
    pub generators: Vec<KVector>,
    /// Least positive integer with `a * input` contained in `free`.
    pub a: BigInt,
}

/// Componentwise left multiplication `v -> alpha v`.
pub(crate) fn left_multiply(order: &Order, alpha: &[Rational], v: &[Rational]) -> KVector {
    let spec = order.spec();
    let r = spec.rank();
    v.chunks(r).flat_map(|c| spec.mul_coords(alpha, c)).collect()
}

/// Componentwise right multiplication `v -> v alpha`.
pub(crate) fn right_multiply(order: &Order, v: &[Rational], alpha: &[Rational]) -> KVector {
    let spec = order.spec();
    let r = spec.rank();
    v.chunks(r).flat_map(|c| spec.mul_coords(c, alpha)).collect()
}

/// `h(x, y) = sum_t x_t conj(y_t)` as algebra coordinates.
pub fn hermitian(order: &Order, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let spec = order.spec();
    let r = spec.rank();
    let mut acc = vec![Rational::zero(); r];
    for (xt, yt) in x.chunks(r).zip(y.chunks(r)) {
        let p = spec.mul_coords(xt, &spec.conj_coords(yt));
        for (a, b) in acc.iter_mut().zip(p) {
            *a += b;
        }
    }
    acc
}

/// Closes a set of rows under left multiplication by the order basis.
fn o_closure(order: &Order, rows: &[KVector]) -> Vec<KVector> {
    let mut out = Vec::with_capacity(rows.len() * order.rank());
    for v in rows {
        for alpha in order.basis_matrix() {
            out.push(left_multiply(order, alpha, v));
        }
    }
    out
}

impl OLattice {
    /// O-module generated by `gens` (each a vector of `m` algebra elements).
    pub fn from_generators(order: Arc<Order>, m: usize, gens: &[Vec<AlgebraElement>]) -> Result<Self> {
        let mut rows = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != m {
                return Err(Error::Precondition(format!("generator has {} entries, expected {m}", g.len())));
            }
            let mut row = Vec::with_capacity(m * order.rank());
            for x in g {
                if **x.spec() != **order.spec() {
                    return Err(Error::AlgebraMismatch);
                }
                row.extend(x.coords().iter().cloned());
            }
            rows.push(row);
        }
        Self::from_rows(order, m, &rows)
    }

    /// O-module generated by coordinate rows; must have full Z-rank `rm`.
    pub fn from_rows(order: Arc<Order>, m: usize, rows: &[KVector]) -> Result<Self> {
        let l = Self::module_from_rows(order, m, rows)?;
        if !l.z.is_full_rank() {
            return Err(Error::RankDeficient {
                achieved: l.z.rank(),
                expected: l.ambient_dim(),
            });
        }
        Ok(l)
    }

    /// O-module generated by coordinate rows, of any rank.
    pub fn module_from_rows(order: Arc<Order>, m: usize, rows: &[KVector]) -> Result<Self> {
        let n = m * order.rank();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition(format!("rows must have {n} coordinates")));
        }
        let closed = o_closure(&order, rows);
        let z = ZLattice::from_rows(n, &closed);
        Ok(Self { order, m, z })
    }

    /// Z-span of `rows` with no O-closure. The result may fail
    /// [`OLattice::check_o_invariance`]; this exists for files and tests that
    /// need the raw Z-lattice.
    pub fn from_z_basis_unchecked(order: Arc<Order>, m: usize, rows: &[KVector]) -> Result<Self> {
        let n = m * order.rank();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition(format!("rows must have {n} coordinates")));
        }
        Ok(Self {
            z: ZLattice::from_rows(n, rows),
            order,
            m,
        })
    }

    pub(crate) fn from_zlattice(order: Arc<Order>, m: usize, z: ZLattice) -> Self {
        debug_assert_eq!(z.dim(), m * order.rank());
        Self { order, m, z }
    }

    /// `O^m`.
    pub fn standard(order: Arc<Order>, m: usize) -> Self {
        let n = m * order.rank();
        let rows: Vec<KVector> = (0..m)
            .map(|t| {
                let mut v = vec![Rational::zero(); n];
                v[t * order.rank()] = Rational::one();
                v
            })
            .collect();
        Self::from_rows(order, m, &rows).expect("standard lattice has full rank")
    }

    pub fn order(&self) -> &Arc<Order> {
        &self.order
    }

    /// K-dimension of the ambient space.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ambient_dim(&self) -> usize {
        self.m * self.order.rank()
    }

    /// Z-rank.
    pub fn rank(&self) -> usize {
        self.z.rank()
    }

    pub fn is_full_rank(&self) -> bool {
        self.z.is_full_rank()
    }

    pub fn zlattice(&self) -> &ZLattice {
        &self.z
    }

    /// Canonical Z-basis as coordinate rows.
    pub fn basis(&self) -> QMatrix {
        self.z.basis()
    }

    /// Canonical basis with each vector split into `m` algebra elements.
    pub fn basis_elements(&self) -> Vec<Vec<AlgebraElement>> {
        let r = self.order.rank();
        self.basis()
            .into_iter()
            .map(|v| {
                v.chunks(r)
                    .map(|c| AlgebraElement::new(self.order.spec().clone(), c.to_vec()).expect("chunk length"))
                    .collect()
            })
            .collect()
    }

    pub fn weights(&self) -> Vec<Rational> {
        let w = self.order.spec().weights();
        (0..self.m).flat_map(|_| w.iter().cloned()).collect()
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        self.weights()
            .iter()
            .zip(x.iter().zip(y))
            .filter(|(_, (a, b))| !a.is_zero() && !b.is_zero())
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    pub fn norm(&self, x: &[Rational]) -> Rational {
        self.inner(x, x)
    }

    pub fn gram(&self) -> QMatrix {
        self.z.gram(&self.weights())
    }

    pub fn determinant(&self) -> Rational {
        if self.z.is_full_rank() {
            // square HNF: det(gram) = det(H)^2 * prod(w) / D^(2n)
            let diag: BigInt = self
                .z
                .hnf()
                .iter()
                .enumerate()
                .map(|(i, row)| row[i].clone())
                .product();
            let w: Rational = self.weights().iter().product();
            let d = Rational::from_integer(self.z.denominator().clone());
            let dn = num_traits::pow(d, 2 * self.ambient_dim());
            Rational::from_integer(&diag * &diag) * w / dn
        } else {
            linalg::det(&self.gram())
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.z.contains(v)
    }

    pub fn is_sublattice_of(&self, other: &OLattice) -> bool {
        self.z.is_sublattice_of(&other.z)
    }

    fn same_order(&self, other: &OLattice) -> Result<()> {
        if *self.order == *other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.order.name().into(), other.order.name().into()))
        }
    }

    /// Checks `alpha v in L` for every order basis element and canonical basis vector.
    pub fn check_o_invariance(&self) -> InvarianceReport {
        let mut violations = Vec::new();
        for (j, v) in self.basis().iter().enumerate() {
            for (i, alpha) in self.order.basis_matrix().iter().enumerate() {
                if !self.z.contains(&left_multiply(&self.order, alpha, v)) {
                    violations.push(InvarianceViolation { alpha: i + 1, vector: j });
                }
            }
        }
        InvarianceReport { violations }
    }

    /// Q-basis of the Q-span, as rows.
    pub(crate) fn span_basis(&self) -> QMatrix {
        if self.z.is_full_rank() {
            linalg::identity(self.ambient_dim())
        } else {
            self.basis()
        }
    }

    /// The O-dual `{ x : h(x, L) in O }`, taken inside the Q-span of `L`
    /// (the whole space for full-rank lattices).
    ///
    /// The Z-linear forms `x -> order-coordinates of h(x, v_j)` over the
    /// canonical basis are stacked into one map; the dual is the preimage of
    /// the integer lattice, i.e. the Z-dual of the lattice spanned by the
    /// columns of that map.
    pub fn o_dual(&self) -> OLattice {
        let domain = self.span_basis();
        let k = domain.len();
        if k == 0 {
            return self.clone();
        }
        let spec = self.order.spec();
        let r = spec.rank();
        let n = self.ambient_dim();
        let binv = self.order.basis_inverse();
        // forms[col] is a linear form on the domain coordinates
        let mut forms: Vec<Vec<Rational>> = Vec::with_capacity(r * self.rank());
        for v in self.basis() {
            // n x r matrix of x -> order coords of h(x, v)
            let mut block = vec![vec![Rational::zero(); r]; n];
            for t in 0..self.m {
                let conj = spec.conj_coords(&v[t * r..(t + 1) * r]);
                let rm = spec.right_mul_matrix(&conj);
                let rm = linalg::mat_mul(&rm, binv);
                for a in 0..r {
                    block[t * r + a].clone_from(&rm[a]);
                }
            }
            let restricted = linalg::mat_mul(&domain, &block);
            forms.extend(linalg::transpose(&restricted));
        }
        let columns = ZLattice::from_rows(k, &forms);
        assert_eq!(columns.rank(), k, "hermitian form is degenerate on the span");
        let c = columns.basis();
        let dual_t = linalg::transpose(&linalg::inverse(&c).expect("full rank"));
        let rows = linalg::mat_mul(&dual_t, &domain);
        Self::from_zlattice(self.order.clone(), self.m, ZLattice::from_rows(n, &rows))
    }

    /// A free sub-O-lattice generated by a K-basis of lattice vectors, and the
    /// least `a` with `L` inside `a^{-1} L1`.
    pub fn free_sandwich(&self) -> Result<FreeSandwich> {
        if !self.is_full_rank() {
            return Err(Error::Precondition("free sandwich needs a full-rank lattice".into()));
        }
        let r = self.order.rank();
        let spec = self.order.spec();
        let mut span: Vec<KVector> = Vec::new();
        let mut chosen = Vec::new();
        for v in self.basis() {
            let kline: Vec<KVector> = (0..r)
                .map(|c| {
                    let e = AlgebraElement::basis(spec.clone(), c);
                    left_multiply(&self.order, e.coords(), &v)
                })
                .collect();
            let mut trial = span.clone();
            trial.extend(kline);
            if linalg::rank(&trial) == span.len() + r {
                span = linalg::rref(&trial);
                chosen.push(v);
                if chosen.len() == self.m {
                    break;
                }
            }
        }
        let free = Self::from_rows(self.order.clone(), self.m, &chosen)?;
        let mut a = BigInt::one();
        for v in self.basis() {
            let c = free.z.rational_coords(&v).expect("same Q-span");
            for q in c {
                a = a.lcm(q.denom());
            }
        }
        Ok(FreeSandwich { free, generators: chosen, a })
    }

    pub fn direct_sum(&self, other: &OLattice) -> Result<OLattice> {
        self.same_order(other)?;
        let (na, nb) = (self.ambient_dim(), other.ambient_dim());
        let mut rows = Vec::with_capacity(self.rank() + other.rank());
        for v in self.basis() {
            let mut row = v;
            row.extend(std::iter::repeat_n(Rational::zero(), nb));
            rows.push(row);
        }
        for v in other.basis() {
            let mut row = vec![Rational::zero(); na];
            row.extend(v);
            rows.push(row);
        }
        Ok(Self::from_zlattice(
            self.order.clone(),
            self.m + other.m,
            ZLattice::from_rows(na + nb, &rows),
        ))
    }

    /// Right multiplication of every vector by `alpha`; the Gram matrix
    /// scales by `N(alpha)`.
    pub fn right_multiply(&self, alpha: &AlgebraElement) -> Result<OLattice> {
        if **alpha.spec() != **self.order.spec() {
            return Err(Error::AlgebraMismatch);
        }
        if alpha.is_zero() {
            return Err(Error::Precondition("cannot multiply by zero".into()));
        }
        let rows: Vec<KVector> = self
            .basis()
            .iter()
            .map(|v| right_multiply(&self.order, v, alpha.coords()))
            .collect();
        Ok(Self::from_zlattice(
            self.order.clone(),
            self.m,
            ZLattice::from_rows(self.ambient_dim(), &rows),
        ))
    }

    /// Rescales the Gram matrix by `c > 0`, realised as right multiplication by
    /// an algebra element of reduced norm `c` (found by a bounded search).
    pub fn scale(&self, c: &Rational) -> Result<OLattice> {
        if !c.is_positive() {
            return Err(Error::Precondition("scale factor must be positive".into()));
        }
        if c.is_one() {
            return Ok(self.clone());
        }
        let alpha = find_element_of_norm(&self.order, c)
            .ok_or_else(|| Error::NotANorm(fmt_rational(c)))?;
        self.right_multiply(&alpha)
    }

    /// Scalar multiple by a rational (the Gram scales by `q^2`).
    pub fn scalar_multiple(&self, q: &Rational) -> OLattice {
        Self::from_zlattice(self.order.clone(), self.m, self.z.scaled(q))
    }

    pub fn units(&self) -> Vec<AlgebraElement> {
        crate::reduction::order_units(&self.order)
    }
}

/// Searches `alpha = beta / (q t)` with integer `beta`, `t <= 12`, and
/// `N(alpha) = p/q`.
pub fn find_element_of_norm(order: &Order, c: &Rational) -> Option<AlgebraElement> {
    let spec = order.spec();
    let w = spec.weights();
    let target0 = c.numer() * c.denom();
    for t in 1..=12i64 {
        let target = &target0 * BigInt::from(t * t);
        let mut coords: Vec<BigInt> = vec![BigInt::zero(); w.len()];
        if search_norm(&w, &target, 0, &mut coords, &Rational::zero()) {
            let scale = Rational::from_integer(c.denom() * BigInt::from(t));
            let elem: Vec<Rational> = coords.into_iter().map(|x| Rational::from_integer(x) / &scale).collect();
            return AlgebraElement::new(spec.clone(), elem).ok();
        }
    }
    None
}

fn search_norm(w: &[Rational], target: &BigInt, idx: usize, coords: &mut Vec<BigInt>, acc: &Rational) -> bool {
    let target_q = Rational::from_integer(target.clone());
    if idx == w.len() {
        return *acc == target_q;
    }
    let rest = &target_q - acc;
    if rest.is_negative() {
        return false;
    }
    let bound = floor_sqrt(&(rest / &w[idx]));
    let mut x = bound.clone();
    while x >= BigInt::zero() {
        let xq = Rational::from_integer(x.clone());
        let next = acc + &w[idx] * &xq * &xq;
        coords[idx] = x.clone();
        if search_norm(w, target, idx + 1, coords, &next) {
            return true;
        }
        x -= 1;
    }
    coords[idx] = BigInt::zero();
    false
}

pub fn gram_of_rows(order: &Order, m: usize, rows: &[KVector]) -> QMatrix {
    let w = order.spec().weights();
    let weights: Vec<Rational> = (0..m).flat_map(|_| w.iter().cloned()).collect();
    gram_of(rows, &weights)
}

impl fmt::Display for OLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-lattice in K^{} of Z-rank {}",
            self.order.name(),
            self.m,
            self.rank()
        )
    }
}
