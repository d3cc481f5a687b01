//! Exact dense linear algebra over Q and Z.
//!
//! Matrices are plain row-major `Vec<Vec<_>>`; vectors are rows. Integer
//! Hermite normal forms are row-style: pivots move to the right going down,
//! pivots are positive and entries above a pivot lie in `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::num::{lcm_of_denominators, Rational};

pub type QMatrix = Vec<Vec<Rational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn zeros(rows: usize, cols: usize) -> QMatrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> QMatrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> QMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![Rational::zero(); cols];
            for (x, brow) in row.iter().zip(b) {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(brow) {
                    if !y.is_zero() {
                        *o += x * y;
                    }
                }
            }
            out
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[Rational], m: &[Vec<Rational>]) -> Vec<Rational> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![Rational::zero(); cols];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            if !y.is_zero() {
                *o += x * y;
            }
        }
    }
    out
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

pub fn to_rational_matrix(a: &[Vec<BigInt>]) -> QMatrix {
    a.iter()
        .map(|row| row.iter().cloned().map(Rational::from_integer).collect())
        .collect()
}

/// Determinant by fraction-carrying Gaussian elimination.
pub fn det(a: &[Vec<Rational>]) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::one();
    }
    let mut m = a.to_vec();
    let mut result = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            m.swap(p, col);
            result = -result;
        }
        let pivot = m[col][col].clone();
        result *= &pivot;
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &pivot;
            for j in col..n {
                let t = &f * &m[col][j];
                m[i][j] -= t;
            }
        }
    }
    result
}

/// Leading principal minors, in order.
pub fn leading_minors(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut acc = Rational::one();
    for col in 0..n {
        // no pivoting: the k-th pivot is minor_k / minor_{k-1}
        let pivot = m[col][col].clone();
        if pivot.is_zero() {
            minors.push(Rational::zero());
            for _ in col + 1..n {
                minors.push(Rational::zero());
            }
            break;
        }
        acc *= &pivot;
        minors.push(acc.clone());
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] / &pivot;
            for j in col..n {
                let t = &f * &m[col][j];
                m[i][j] -= t;
            }
        }
    }
    minors
}

/// Returns the 1-based index of the first non-positive leading minor.
pub fn check_positive_definite(a: &[Vec<Rational>]) -> Result<(), usize> {
    for (i, minor) in leading_minors(a).iter().enumerate() {
        if !minor.is_positive() {
            return Err(i + 1);
        }
    }
    Ok(())
}

pub fn inverse(a: &[Vec<Rational>]) -> Option<QMatrix> {
    let n = a.len();
    let mut m: QMatrix = a.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(p, col);
        inv.swap(p, col);
        let pivot = m[col][col].recip();
        for j in 0..n {
            m[col][j] *= &pivot;
            inv[col][j] *= &pivot;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..n {
                let t = &f * &m[col][j];
                m[i][j] -= t;
                let t = &f * &inv[col][j];
                inv[i][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Reduced row echelon form with zero rows dropped; canonical for the Q-span.
pub fn rref(rows: &[Vec<Rational>]) -> QMatrix {
    let mut m: QMatrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let pivot = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &pivot;
        }
        for i in 0..m.len() {
            if i == r || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..ncols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).len()
}

/// Basis of `{ z : a z = 0 }` (column null space of `a`), returned as rows.
pub fn right_nullspace(a: &[Vec<Rational>], ncols: usize) -> QMatrix {
    let r = rref(a);
    let mut pivots = Vec::new();
    for row in &r {
        let p = row.iter().position(|x| !x.is_zero()).expect("rref rows are nonzero");
        pivots.push(p);
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut z = vec![Rational::zero(); ncols];
        z[free] = Rational::one();
        for (row, &p) in r.iter().zip(&pivots) {
            z[p] = -row[free].clone();
        }
        basis.push(z);
    }
    basis
}

/// Solves `x a = b` for square invertible `a`.
pub fn solve_left(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let inv = inverse(a)?;
    Some(vec_mul(b, &inv))
}

/// Scales rational rows to integer rows; returns `(D, D * rows)`.
pub fn clear_denominators(rows: &[Vec<Rational>]) -> (BigInt, ZMatrix) {
    let d = lcm_of_denominators(rows.iter().flatten());
    let z = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| (x * Rational::from_integer(d.clone())).to_integer())
                .collect()
        })
        .collect();
    (d, z)
}

fn sub_multiple(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a / b, b != 0
    let (q, r) = a.div_mod_floor(b);
    if (&r * BigInt::from(2)).abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Row-style Hermite normal form of the Z-span of `rows`. Zero rows are
/// dropped, so the result has exactly `rank` rows.
pub fn hnf(rows: ZMatrix, ncols: usize) -> ZMatrix {
    let mut m: ZMatrix = rows
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        let mut has_pivot = false;
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| m[i][col].abs() < m[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            has_pivot = true;
            m.swap(r, b);
            let (head, tail) = m.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let mut clean = true;
            for row in tail.iter_mut() {
                if row[col].is_zero() {
                    continue;
                }
                let q = round_div(&row[col], &pivot_row[col]);
                sub_multiple(row, pivot_row, &q);
                if !row[col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !has_pivot {
            continue;
        }
        if m[r][col].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let (head, tail) = m.split_at_mut(r);
        let pivot_row = &tail[0];
        for row in head.iter_mut() {
            let q = row[col].div_floor(&pivot_row[col]);
            sub_multiple(row, pivot_row, &q);
        }
        // rows that became zero are pushed out of the active block
        let mut i = r + 1;
        while i < m.len() {
            if m[i].iter().all(Zero::is_zero) {
                m.swap_remove(i);
            } else {
                i += 1;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Pivot column of each HNF row.
pub fn pivots(h: &[Vec<BigInt>]) -> Vec<usize> {
    h.iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("hnf rows are nonzero"))
        .collect()
}

/// Z-basis (in HNF) of `{ y in Z^n : y m = 0 }` for an `n x k` integer matrix.
pub fn integer_left_kernel(m: &[Vec<BigInt>]) -> ZMatrix {
    let n = m.len();
    let k = m.first().map_or(0, Vec::len);
    let augmented: ZMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut out = row.clone();
            out.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            out
        })
        .collect();
    let h = hnf(augmented, k + n);
    let kernel: ZMatrix = h
        .into_iter()
        .filter(|row| row[..k].iter().all(Zero::is_zero))
        .map(|row| row[k..].to_vec())
        .collect();
    hnf(kernel, n)
}

pub fn integer_det(a: &[Vec<BigInt>]) -> BigInt {
    det(&to_rational_matrix(a)).to_integer()
}
