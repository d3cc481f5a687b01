//! Finitely generated Z-submodules of Q^n in canonical form.
//!
//! A lattice is stored as `H / D` where `D` is the least positive integer
//! with `D * L` integral and `H` is the row Hermite normal form of `D * L`.
//! Two generating sets span the same lattice iff their canonical forms agree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{self, QMatrix, ZMatrix};
use crate::num::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZLattice {
    dim: usize,
    denom: BigInt,
    hnf: ZMatrix,
}

impl ZLattice {
    pub fn from_rows(dim: usize, rows: &[Vec<Rational>]) -> Self {
        assert!(rows.iter().all(|r| r.len() == dim), "row length mismatch");
        let (d, z) = linalg::clear_denominators(rows);
        Self::from_integer_rows(dim, d, z)
    }

    /// Lattice spanned by `rows / denom`.
    pub fn from_integer_rows(dim: usize, denom: BigInt, rows: ZMatrix) -> Self {
        let h = linalg::hnf(rows, dim);
        Self::normalize(dim, denom, h)
    }

    fn normalize(dim: usize, denom: BigInt, mut h: ZMatrix) -> Self {
        let content = h.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = content.gcd(&denom);
        let g = if g.is_zero() { BigInt::one() } else { g };
        if !g.is_one() {
            for x in h.iter_mut().flatten() {
                *x /= &g;
            }
        }
        let denom = if h.is_empty() { BigInt::one() } else { &denom / &g };
        Self { dim, denom, hnf: h }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            denom: BigInt::one(),
            hnf: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn hnf(&self) -> &ZMatrix {
        &self.hnf
    }

    /// Canonical Z-basis as rational rows.
    pub fn basis(&self) -> QMatrix {
        let d = Rational::from_integer(self.denom.clone());
        self.hnf
            .iter()
            .map(|row| row.iter().map(|x| Rational::from_integer(x.clone()) / &d).collect())
            .collect()
    }

    /// Coordinates of `v` over the canonical basis when `v` lies in the
    /// Q-span; `None` otherwise.
    pub fn rational_coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.dim);
        let d = Rational::from_integer(self.denom.clone());
        let mut residual: Vec<Rational> = v.iter().map(|x| x * &d).collect();
        let mut coords = Vec::with_capacity(self.rank());
        for row in &self.hnf {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero hnf row");
            let y = &residual[p] / Rational::from_integer(row[p].clone());
            if !y.is_zero() {
                for (r, h) in residual.iter_mut().zip(row).skip(p) {
                    if !h.is_zero() {
                        *r -= &y * Rational::from_integer(h.clone());
                    }
                }
            }
            coords.push(y);
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn coords(&self, v: &[Rational]) -> Option<Vec<BigInt>> {
        let c = self.rational_coords(v)?;
        c.iter()
            .all(|q| q.is_integer())
            .then(|| c.into_iter().map(|q| q.to_integer()).collect())
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coords(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &ZLattice) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &ZLattice) -> ZLattice {
        let mut rows = self.basis();
        rows.extend(other.basis());
        ZLattice::from_rows(self.dim, &rows)
    }

    pub fn scaled(&self, c: &Rational) -> ZLattice {
        let rows: QMatrix = self
            .basis()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x * c).collect())
            .collect();
        ZLattice::from_rows(self.dim, &rows)
    }

    /// Index `[other : self]` for a full-rank sublattice of a lattice of the same rank.
    pub fn index_in(&self, other: &ZLattice) -> Option<BigInt> {
        if self.rank() != other.rank() || !self.is_sublattice_of(other) {
            return None;
        }
        let coords: Vec<Vec<Rational>> = self
            .basis()
            .iter()
            .map(|v| other.rational_coords(v).expect("sublattice"))
            .collect();
        Some(linalg::det(&coords).abs().to_integer())
    }

    /// Determinant of the Gram matrix under `<x, y> = sum_c w_c x_c y_c`.
    pub fn gram(&self, weights: &[Rational]) -> QMatrix {
        gram_of(&self.basis(), weights)
    }
}

pub fn gram_of(rows: &[Vec<Rational>], weights: &[Rational]) -> QMatrix {
    let weighted: QMatrix = rows
        .iter()
        .map(|r| r.iter().zip(weights).map(|(x, w)| x * w).collect())
        .collect();
    rows.iter()
        .map(|x| weighted.iter().map(|y| linalg::dot(x, y)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};

    #[test]
    fn canonical_denominator_is_minimal() {
        let a = ZLattice::from_rows(2, &[vec![rat(1, 2), int(0)], vec![int(0), int(1)]]);
        let b = ZLattice::from_rows(
            2,
            &[vec![rat(1, 2), int(0)], vec![int(1), int(1)], vec![int(0), int(1)]],
        );
        assert_eq!(a, b);
        assert_eq!(a.denominator(), &BigInt::from(2));
        let c = ZLattice::from_rows(1, &[vec![rat(2, 6)], vec![rat(1, 2)]]);
        assert_eq!(c.basis(), vec![vec![rat(1, 6)]]);
    }

    #[test]
    fn membership_and_index() {
        let l = ZLattice::from_rows(2, &[vec![int(2), int(0)], vec![int(1), int(1)]]);
        assert!(l.contains(&[int(3), int(1)]));
        assert!(!l.contains(&[int(1), int(0)]));
        assert!(l.rational_coords(&[int(1), int(0)]).is_some());
        let z2 = ZLattice::from_rows(2, &linalg::identity(2));
        assert_eq!(l.index_in(&z2), Some(BigInt::from(2)));
    }

    #[test]
    fn relative_lattice_membership() {
        let l = ZLattice::from_rows(3, &[vec![int(1), int(1), int(0)]]);
        assert_eq!(l.rank(), 1);
        assert!(l.contains(&[int(-2), int(-2), int(0)]));
        assert!(l.rational_coords(&[int(1), int(0), int(0)]).is_none());
    }
}
