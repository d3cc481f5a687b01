//! Seeded random O-lattices, nested pairs and lattice-spanned subspaces.
//!
//! A random lattice is the O-module generated by `c_t e_t` (`c_t` in 1..=3)
//! and a few vectors whose entries are small random O-combinations. The
//! scaled basis keeps it full rank; the extra vectors make it non-diagonal.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{KVector, OLattice};
use crate::linalg;
use crate::num::{int, Rational};
use crate::orders::Order;
use crate::sections::Subspace;

pub const DEFAULT_SEED: u64 = 0x005e_ed0f_1a77;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An order element `sum c_i b_i` with `c_i` in `-k..=k`, as algebra coordinates.
pub fn random_element(order: &Order, k: i64, rng: &mut impl Rng) -> Vec<Rational> {
    let coeffs: Vec<Rational> = (0..order.rank()).map(|_| int(rng.gen_range(-k..=k))).collect();
    linalg::vec_mul(&coeffs, order.basis_matrix())
}

fn random_nonzero_element(order: &Order, k: i64, rng: &mut impl Rng) -> Vec<Rational> {
    loop {
        let x = random_element(order, k, rng);
        if x.iter().any(|c| c != &int(0)) {
            return x;
        }
    }
}

pub fn random_lattice(order: &Arc<Order>, m: usize, rng: &mut impl Rng) -> OLattice {
    let r = order.rank();
    let mut rows: Vec<KVector> = Vec::new();
    for t in 0..m {
        let mut v = vec![int(0); r * m];
        v[t * r] = int(rng.gen_range(1..=3));
        rows.push(v);
    }
    let extra = rng.gen_range(1..=2);
    for _ in 0..extra {
        let v: KVector = (0..m).flat_map(|_| random_element(order, 1, rng)).collect();
        rows.push(v);
    }
    OLattice::from_rows(order.clone(), m, &rows).expect("scaled standard basis has full rank")
}

/// `(a, b)` with `a ⊆ b`: `a` is generated by a multiple of `b`'s basis and
/// random O-multiples of its basis vectors.
pub fn nested_pair(order: &Arc<Order>, m: usize, rng: &mut impl Rng) -> (OLattice, OLattice) {
    let b = random_lattice(order, m, rng);
    let basis = b.basis();
    let k = int(rng.gen_range(2..=3));
    let mut rows: Vec<KVector> = basis.iter().map(|v| v.iter().map(|x| x * &k).collect()).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let v = &basis[rng.gen_range(0..basis.len())];
        let alpha = random_nonzero_element(order, 1, rng);
        let spec = order.spec();
        let r = order.rank();
        rows.push(v.chunks(r).flat_map(|c| spec.mul_coords(&alpha, c)).collect());
    }
    let a = OLattice::from_rows(order.clone(), m, &rows).expect("contains a multiple of a full-rank basis");
    (a, b)
}

/// A random nonzero vector of `l`: integer combination of its basis with
/// coefficients in `-k..=k`.
pub fn random_lattice_vector(l: &OLattice, k: i64, rng: &mut impl Rng) -> KVector {
    let basis = l.basis();
    loop {
        let c: Vec<Rational> = (0..basis.len()).map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-k..=k)))).collect();
        let v = linalg::vec_mul(&c, &basis);
        if v.iter().any(|x| x != &int(0)) {
            return v;
        }
    }
}

/// K-span of `s` random lattice vectors of `l`, retried until the vectors
/// are K-independent.
pub fn random_subspace(l: &OLattice, s: usize, rng: &mut impl Rng) -> Subspace {
    assert!(s <= l.m(), "subspace dimension exceeds m");
    loop {
        let gens: Vec<KVector> = (0..s).map(|_| random_lattice_vector(l, 2, rng)).collect();
        if let Ok(f) = Subspace::new(l.order().clone(), l.m(), gens) {
            return f;
        }
    }
}

/// `count` lattices with `m` cycling through `1..=max_m`.
pub fn lattices(order: &Arc<Order>, count: usize, max_m: usize, seed: u64) -> Vec<OLattice> {
    let mut g = rng(seed);
    (0..count).map(|i| random_lattice(order, 1 + i % max_m, &mut g)).collect()
}

pub fn nested_pairs(order: &Arc<Order>, count: usize, max_m: usize, seed: u64) -> Vec<(OLattice, OLattice)> {
    let mut g = rng(seed);
    (0..count).map(|i| nested_pair(order, 1 + i % max_m, &mut g)).collect()
}

/// `(L, F)` instances with `m` in `2..=3` and `s` in `1..m`, capped at 2.
pub fn section_instances(order: &Arc<Order>, count: usize, seed: u64) -> Vec<(OLattice, Subspace)> {
    let mut g = rng(seed);
    (0..count)
        .map(|i| {
            let m = 2 + i % 2;
            let s = 1 + (i / 2) % (m - 1).min(2);
            let l = random_lattice(order, m, &mut g);
            let f = random_subspace(&l, s, &mut g);
            (l, f)
        })
        .collect()
}
