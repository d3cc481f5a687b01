//! Exact LLL on a rational Gram matrix.
//!
//! The Gram matrix is cleared of denominators and reduced with the integral
//! variant of LLL (all Gram–Schmidt data kept as integers `d_k` and
//! `lambda_{k,j} = d_{j+1} mu_{k,j}`), so no rounding ever happens.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix, ZMatrix};
use crate::num::{lcm_of_denominators, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LllOutput {
    /// Unimodular; row `i` holds the coordinates of reduced vector `i`.
    pub transform: ZMatrix,
    /// `transform * gram * transform^T`.
    pub gram: QMatrix,
}

fn round_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a/b for b > 0
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

struct State {
    n: usize,
    g: ZMatrix,
    h: ZMatrix,
    d: Vec<BigInt>,
    lambda: ZMatrix,
}

impl State {
    fn red(&mut self, k: usize, l: usize) {
        // 1-based indices
        let dl = &self.d[l];
        let lam = &self.lambda[k][l];
        if (lam * BigInt::from(2)).abs() <= *dl {
            return;
        }
        let q = round_quotient(lam, dl);
        let (ki, li) = (k - 1, l - 1);
        for j in 0..self.n {
            let t = &q * &self.h[li][j];
            self.h[ki][j] -= t;
        }
        for j in 0..self.n {
            let t = &q * &self.g[li][j];
            self.g[ki][j] -= t;
        }
        for i in 0..self.n {
            let t = &q * &self.g[i][li];
            self.g[i][ki] -= t;
        }
        let t = &q * &self.d[l];
        self.lambda[k][l] -= t;
        for i in 1..l {
            let t = &q * &self.lambda[l][i];
            self.lambda[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        let (ki, kj) = (k - 1, k - 2);
        self.h.swap(ki, kj);
        self.g.swap(ki, kj);
        for row in self.g.iter_mut() {
            row.swap(ki, kj);
        }
        for j in 1..k - 1 {
            let t = self.lambda[k][j].clone();
            self.lambda[k][j] = self.lambda[k - 1][j].clone();
            self.lambda[k - 1][j] = t;
        }
        let lam = self.lambda[k][k - 1].clone();
        let b = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&self.d[k] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lambda[i][k - 1] = (&b * &t + &lam * &self.lambda[i][k]) / &self.d[k];
        }
        self.d[k - 1] = b;
    }
}

/// LLL with parameter `delta` in `(1/4, 1)`.
pub fn lll_reduce(gram: &QMatrix, delta: &Rational) -> Result<LllOutput> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(Error::Precondition("gram matrix must be square".into()));
    }
    if *delta <= Rational::new(1.into(), 4.into()) || *delta >= Rational::one() {
        return Err(Error::Precondition("delta must lie strictly between 1/4 and 1".into()));
    }
    if gram.iter().enumerate().any(|(i, r)| r.iter().enumerate().any(|(j, x)| *x != gram[j][i])) {
        return Err(Error::Precondition("gram matrix must be symmetric".into()));
    }
    linalg::check_positive_definite(gram).map_err(|minor| Error::NotPositiveDefinite { minor })?;
    if n == 0 {
        return Ok(LllOutput { transform: Vec::new(), gram: Vec::new() });
    }
    let scale = lcm_of_denominators(gram.iter().flatten());
    let scale_q = Rational::from_integer(scale.clone());
    let g: ZMatrix = gram
        .iter()
        .map(|r| r.iter().map(|x| (x * &scale_q).to_integer()).collect())
        .collect();
    let h: ZMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let (p, q) = (delta.numer().clone(), delta.denom().clone());
    let mut st = State {
        n,
        d: vec![BigInt::zero(); n + 1],
        lambda: vec![vec![BigInt::zero(); n + 1]; n + 1],
        g,
        h,
    };
    st.d[0] = BigInt::one();
    st.d[1] = st.g[0][0].clone();
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = st.g[k - 1][j - 1].clone();
                for i in 1..j {
                    u = (&st.d[i] * &u - &st.lambda[k][i] * &st.lambda[j][i]) / &st.d[i - 1];
                }
                if j < k {
                    st.lambda[k][j] = u;
                } else {
                    debug_assert!(u.is_positive());
                    st.d[k] = u;
                }
            }
        }
        loop {
            st.red(k, k - 1);
            let lam = &st.lambda[k][k - 1];
            let lhs = &q * &st.d[k] * &st.d[k - 2];
            let rhs = &p * &st.d[k - 1] * &st.d[k - 1] - &q * lam * lam;
            if lhs < rhs {
                st.swap(k, kmax);
                k = (k - 1).max(2);
            } else {
                break;
            }
        }
        for l in (1..k - 1).rev() {
            st.red(k, l);
        }
        k += 1;
    }
    let reduced: QMatrix = st
        .g
        .iter()
        .map(|r| r.iter().map(|x| Rational::new(x.clone(), scale.clone())).collect())
        .collect();
    Ok(LllOutput {
        transform: st.h,
        gram: reduced,
    })
}

/// Exact Gram–Schmidt data `(mu, B)` of a Gram matrix.
pub fn gram_schmidt(gram: &QMatrix) -> (QMatrix, Vec<Rational>) {
    let n = gram.len();
    let mut mu = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = gram[i][j].clone();
            for k in 0..j {
                if !mu[i][k].is_zero() && !mu[j][k].is_zero() {
                    s -= &mu[i][k] * &mu[j][k] * &b[k];
                }
            }
            mu[i][j] = s / &b[j];
        }
        let mut s = gram[i][i].clone();
        for k in 0..i {
            if !mu[i][k].is_zero() {
                s -= &mu[i][k] * &mu[i][k] * &b[k];
            }
        }
        b[i] = s;
        mu[i][i] = Rational::one();
    }
    (mu, b)
}

/// Size reduction and the Lovász condition, checked exactly.
pub fn is_lll_reduced(gram: &QMatrix, delta: &Rational) -> bool {
    let (mu, b) = gram_schmidt(gram);
    let half = Rational::new(1.into(), 2.into());
    for i in 0..gram.len() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let m = &mu[i][i - 1];
            if b[i] < (delta - m * m) * &b[i - 1] {
                return false;
            }
        }
    }
    true
}
