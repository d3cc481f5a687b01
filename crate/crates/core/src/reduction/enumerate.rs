//! Fincke–Pohst enumeration of short vectors of a positive definite Gram
//! matrix.
//!
//! The search tree is walked in floating point over the LLL-reduced Gram
//! matrix with slightly widened bounds, and every leaf is accepted or
//! rejected by its exact integer norm. Widening only adds candidates, so the
//! returned set is exact.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::lll::{gram_schmidt, lll_reduce};
use super::EnumOptions;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::num::{lcm_of_denominators, to_f64, Rational};
use crate::par;

const FLUSH: u64 = 4096;

/// Prepared enumeration data for one Gram matrix.
pub struct Enumerator {
    n: usize,
    transform: Vec<Vec<BigInt>>,
    reduced: QMatrix,
    /// `scale * reduced` as integers.
    gram_int: Vec<Vec<BigInt>>,
    gram_i128: Option<Vec<Vec<i128>>>,
    scale: BigInt,
    b: Vec<f64>,
    mu: Vec<Vec<f64>>,
}

struct Walk<'a> {
    e: &'a Enumerator,
    bound_f: f64,
    threshold: BigInt,
    threshold_i128: Option<i128>,
    nodes: &'a AtomicU64,
    budget: u64,
    aborted: &'a AtomicBool,
}

type Leaf = (BigInt, Vec<i64>);

fn widen(x: f64) -> f64 {
    x * (1.0 + 1e-9) + 1e-9
}

impl Enumerator {
    pub fn new(gram: &QMatrix, opts: &EnumOptions) -> Result<Self> {
        let n = gram.len();
        let lll = lll_reduce(gram, &opts.delta)?;
        let scale = lcm_of_denominators(lll.gram.iter().flatten());
        let sq = Rational::from_integer(scale.clone());
        let gram_int: Vec<Vec<BigInt>> = lll
            .gram
            .iter()
            .map(|r| r.iter().map(|x| (x * &sq).to_integer()).collect())
            .collect();
        let gram_i128 = gram_int
            .iter()
            .map(|r| r.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>();
        let (mu_q, b_q) = gram_schmidt(&lll.gram);
        let b = b_q.iter().map(to_f64).collect();
        let mu = mu_q.iter().map(|r| r.iter().map(to_f64).collect()).collect();
        Ok(Self {
            n,
            transform: lll.transform,
            reduced: lll.gram,
            gram_int,
            gram_i128,
            scale,
            b,
            mu,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn reduced_gram(&self) -> &QMatrix {
        &self.reduced
    }

    /// Least diagonal entry of the reduced Gram matrix, an upper bound for
    /// the minimum.
    pub fn diagonal_bound(&self) -> Rational {
        self.reduced
            .iter()
            .enumerate()
            .map(|(i, r)| r[i].clone())
            .min()
            .expect("nonempty")
    }

    fn exact_norm(&self, x: &[i64]) -> Option<i128> {
        let g = self.gram_i128.as_ref()?;
        let mut acc: i128 = 0;
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..self.n {
                if x[j] != 0 {
                    row = row.checked_add(g[i][j].checked_mul(x[j] as i128)?)?;
                }
            }
            acc = acc.checked_add(row.checked_mul(x[i] as i128)?)?;
        }
        Some(acc)
    }

    fn exact_norm_big(&self, x: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..self.n {
            if x[i] == 0 {
                continue;
            }
            let mut row = BigInt::zero();
            for j in 0..self.n {
                if x[j] != 0 {
                    row += &self.gram_int[i][j] * x[j];
                }
            }
            acc += row * x[i];
        }
        acc
    }

    /// Coordinates in the basis of the input Gram matrix.
    fn to_input_coords(&self, x: &[i64]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for (xi, row) in x.iter().zip(&self.transform) {
            if *xi == 0 {
                continue;
            }
            for (o, h) in out.iter_mut().zip(row) {
                *o += h * *xi;
            }
        }
        out
    }

    /// All nonzero vectors of norm at most `bound`, one per `+-` pair, as
    /// `(norm, input coordinates)` sorted by norm then coordinates.
    pub fn short_vectors(&self, bound: &Rational, opts: &EnumOptions) -> Result<Vec<(Rational, Vec<BigInt>)>> {
        if self.n == 0 || *bound <= Rational::zero() {
            return Ok(Vec::new());
        }
        let threshold = (bound * Rational::from_integer(self.scale.clone())).floor().to_integer();
        let nodes = AtomicU64::new(0);
        let aborted = AtomicBool::new(false);
        let walk = Walk {
            e: self,
            bound_f: widen(to_f64(bound)),
            threshold_i128: threshold.to_i128(),
            threshold,
            nodes: &nodes,
            budget: opts.node_budget,
            aborted: &aborted,
        };
        let leaves = walk.run(opts)?;
        let scale = self.scale.clone();
        let mut out: Vec<(Rational, Vec<BigInt>)> = leaves
            .into_iter()
            .map(|(norm, x)| (Rational::new(norm, scale.clone()), self.to_input_coords(&x)))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Exact minimum.
    pub fn minimum(&self, opts: &EnumOptions) -> Result<Rational> {
        let r0 = self.diagonal_bound();
        // norms lie in (1/scale) Z, so anything shorter than r0 has norm <= r0 - 1/scale
        let strict = &r0 - Rational::new(BigInt::one(), self.scale.clone());
        let found = self.short_vectors(&strict, opts)?;
        Ok(found.into_iter().map(|(n, _)| n).min().unwrap_or(r0))
    }

    /// Exact minimum and all minimal vectors (both signs), sorted.
    pub fn minimal_vectors(&self, opts: &EnumOptions) -> Result<(Rational, Vec<Vec<BigInt>>)> {
        let r0 = self.diagonal_bound();
        let found = self.short_vectors(&r0, opts)?;
        let min = found[0].0.clone();
        let mut vecs = Vec::new();
        for (n, v) in found {
            if n != min {
                break;
            }
            vecs.push(v.iter().map(|x| -x).collect::<Vec<_>>());
            vecs.push(v);
        }
        vecs.sort();
        Ok((min, vecs))
    }
}

impl Walk<'_> {
    fn run(&self, opts: &EnumOptions) -> Result<Vec<Leaf>> {
        let n = self.e.n;
        // split off the top levels into independent prefixes
        let depth = if opts.parallelism.is_parallel() { n.min(3) } else { 0 };
        let mut prefixes: Vec<(Vec<i64>, f64, bool)> = vec![(vec![0; n], 0.0, true)];
        let mut leaves = Vec::new();
        let mut counter = 0u64;
        for level in 0..depth {
            let j = n - 1 - level;
            let mut next = Vec::new();
            for (x, partial, zero_above) in &prefixes {
                self.expand(j, x, *partial, *zero_above, &mut counter, |xj, x, p, z| {
                    if j == 0 {
                        self.leaf(x, &mut leaves);
                    } else {
                        let mut y = x.to_vec();
                        y[j] = xj;
                        next.push((y, p, z));
                    }
                })?;
            }
            prefixes = next;
        }
        self.flush(&mut counter)?;
        if depth == n {
            return Ok(leaves);
        }
        let start = n - 1 - depth;
        let chunks = par::map(opts.parallelism, &prefixes, |(x, partial, zero_above)| {
            let mut out = Vec::new();
            let mut x = x.clone();
            let mut counter = 0u64;
            let r = self
                .descend(start, &mut x, *partial, *zero_above, &mut out, &mut counter)
                .and_then(|()| self.flush(&mut counter));
            r.map(|()| out)
        });
        for c in chunks {
            leaves.extend(c?);
        }
        Ok(leaves)
    }

    fn flush(&self, counter: &mut u64) -> Result<()> {
        let total = self.nodes.fetch_add(*counter, Ordering::Relaxed) + *counter;
        *counter = 0;
        if total > self.budget || self.aborted.load(Ordering::Relaxed) {
            self.aborted.store(true, Ordering::Relaxed);
            return Err(Error::NodeBudget { budget: self.budget });
        }
        Ok(())
    }

    /// Calls `f(xj, x, partial, zero_above)` for every admissible value of
    /// coordinate `j` given the fixed coordinates above it.
    fn expand<F>(&self, j: usize, x: &[i64], partial: f64, zero_above: bool, counter: &mut u64, mut f: F) -> Result<()>
    where
        F: FnMut(i64, &[i64], f64, bool),
    {
        let e = self.e;
        let mut c = 0.0;
        for i in j + 1..e.n {
            if x[i] != 0 {
                c -= e.mu[i][j] * x[i] as f64;
            }
        }
        let rem = self.bound_f - partial;
        if rem < 0.0 {
            return Ok(());
        }
        let half = (rem / e.b[j]).sqrt() * (1.0 + 1e-7) + 1e-7;
        let mut lo = (c - half).ceil() as i64;
        let hi = (c + half).floor() as i64;
        if zero_above {
            lo = lo.max(0);
        }
        let mut y = x.to_vec();
        for xj in lo..=hi {
            *counter += 1;
            if *counter >= FLUSH {
                self.flush(counter)?;
            }
            let t = xj as f64 - c;
            let p = partial + e.b[j] * t * t;
            if p > self.bound_f {
                continue;
            }
            y[j] = xj;
            f(xj, &y, p, zero_above && xj == 0);
        }
        Ok(())
    }

    fn descend(&self, j: usize, x: &mut Vec<i64>, partial: f64, zero_above: bool, out: &mut Vec<Leaf>, counter: &mut u64) -> Result<()> {
        let e = self.e;
        let mut c = 0.0;
        for i in j + 1..e.n {
            if x[i] != 0 {
                c -= e.mu[i][j] * x[i] as f64;
            }
        }
        let rem = self.bound_f - partial;
        if rem < 0.0 {
            return Ok(());
        }
        let half = (rem / e.b[j]).sqrt() * (1.0 + 1e-7) + 1e-7;
        let mut lo = (c - half).ceil() as i64;
        let hi = (c + half).floor() as i64;
        if zero_above {
            lo = lo.max(0);
        }
        for xj in lo..=hi {
            *counter += 1;
            if *counter >= FLUSH {
                self.flush(counter)?;
            }
            let t = xj as f64 - c;
            let p = partial + e.b[j] * t * t;
            if p > self.bound_f {
                continue;
            }
            x[j] = xj;
            if j == 0 {
                self.leaf(x, out);
            } else {
                self.descend(j - 1, x, p, zero_above && xj == 0, out, counter)?;
            }
        }
        x[j] = 0;
        Ok(())
    }

    fn leaf(&self, x: &[i64], out: &mut Vec<Leaf>) {
        if x.iter().all(|&v| v == 0) {
            return;
        }
        let accepted = match (self.e.exact_norm(x), self.threshold_i128) {
            (Some(norm), Some(t)) => (norm <= t).then(|| BigInt::from(norm)),
            _ => {
                let norm = self.e.exact_norm_big(x);
                (norm <= self.threshold).then_some(norm)
            }
        };
        if let Some(norm) = accepted {
            out.push((norm, x.to_vec()));
        }
    }
}
