//! The ambient Q-algebra: an imaginary quadratic field `Q(s)`, `s^2 = d < 0`,
//! or a definite quaternion algebra `(a, b / Q)` with `i^2 = a`, `j^2 = b`,
//! `ij = -ji = k`. Elements are coordinate vectors over `{1, s}` or
//! `{1, i, j, k}`; no real embedding is ever formed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::linalg::QMatrix;
use crate::num::{fmt_rational, serde_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraSpec {
    Quadratic {
        #[serde(with = "serde_rational")]
        d: Rational,
    },
    Quaternion {
        #[serde(with = "serde_rational")]
        a: Rational,
        #[serde(with = "serde_rational")]
        b: Rational,
    },
}

impl AlgebraSpec {
    pub fn quadratic(d: Rational) -> Result<Self> {
        if !d.is_negative() {
            return Err(ParseError::AlgebraSpec(format!("d = {} must be negative", fmt_rational(&d))).into());
        }
        Ok(Self::Quadratic { d })
    }

    pub fn quaternion(a: Rational, b: Rational) -> Result<Self> {
        if !a.is_negative() || !b.is_negative() {
            return Err(ParseError::AlgebraSpec("a and b must both be negative".into()).into());
        }
        Ok(Self::Quaternion { a, b })
    }

    /// Checks the definiteness constraints, e.g. after deserialisation.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Quadratic { d } => Self::quadratic(d.clone()).map(|_| ()),
            Self::Quaternion { a, b } => Self::quaternion(a.clone(), b.clone()).map(|_| ()),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Self::Quadratic { .. } => 2,
            Self::Quaternion { .. } => 4,
        }
    }

    /// Diagonal of the trace form: `real_inner(x, y) = sum_c w_c x_c y_c`.
    pub fn weights(&self) -> Vec<Rational> {
        match self {
            Self::Quadratic { d } => vec![Rational::one(), -d.clone()],
            Self::Quaternion { a, b } => vec![Rational::one(), -a.clone(), -b.clone(), a * b],
        }
    }

    pub fn mul_coords(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        match self {
            Self::Quadratic { d } => vec![
                &x[0] * &y[0] + d * &x[1] * &y[1],
                &x[0] * &y[1] + &x[1] * &y[0],
            ],
            Self::Quaternion { a, b } => {
                let ab = a * b;
                let (x0, x1, x2, x3) = (&x[0], &x[1], &x[2], &x[3]);
                let (y0, y1, y2, y3) = (&y[0], &y[1], &y[2], &y[3]);
                vec![
                    x0 * y0 + a * x1 * y1 + b * x2 * y2 - &ab * x3 * y3,
                    x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
                    x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
                    x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
                ]
            }
        }
    }

    pub fn conj_coords(&self, x: &[Rational]) -> Vec<Rational> {
        x.iter()
            .enumerate()
            .map(|(c, v)| if c == 0 { v.clone() } else { -v.clone() })
            .collect()
    }

    pub fn real_inner_coords(&self, x: &[Rational], y: &[Rational]) -> Rational {
        self.weights()
            .iter()
            .zip(x.iter().zip(y))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    fn unit_vector(&self, c: usize) -> Vec<Rational> {
        let mut e = vec![Rational::zero(); self.rank()];
        e[c] = Rational::one();
        e
    }

    /// Matrix of `y -> x * y` acting on row vectors: `coords(x y) = coords(y) * L`.
    pub fn left_mul_matrix(&self, x: &[Rational]) -> QMatrix {
        (0..self.rank())
            .map(|c| self.mul_coords(x, &self.unit_vector(c)))
            .collect()
    }

    /// Matrix of `y -> y * x` acting on row vectors.
    pub fn right_mul_matrix(&self, x: &[Rational]) -> QMatrix {
        (0..self.rank())
            .map(|c| self.mul_coords(&self.unit_vector(c), x))
            .collect()
    }

    pub fn basis_symbols(&self) -> &'static [&'static str] {
        match self {
            Self::Quadratic { .. } => &["1", "s"],
            Self::Quaternion { .. } => &["1", "i", "j", "k"],
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Quadratic { d } => write!(f, "Q(sqrt({}))", fmt_rational(d)),
            Self::Quaternion { a, b } => write!(f, "({}, {} / Q)", fmt_rational(a), fmt_rational(b)),
        }
    }
}

/// An element of the algebra as rational coordinates over the fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    spec: Arc<AlgebraSpec>,
    coords: Vec<Rational>,
}

impl AlgebraElement {
    pub fn new(spec: Arc<AlgebraSpec>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != spec.rank() {
            return Err(Error::Precondition(format!(
                "expected {} coordinates, got {}",
                spec.rank(),
                coords.len()
            )));
        }
        Ok(Self { spec, coords })
    }

    pub fn zero(spec: Arc<AlgebraSpec>) -> Self {
        let coords = vec![Rational::zero(); spec.rank()];
        Self { spec, coords }
    }

    pub fn one(spec: Arc<AlgebraSpec>) -> Self {
        Self::basis(spec, 0)
    }

    pub fn scalar(spec: Arc<AlgebraSpec>, q: Rational) -> Self {
        let mut e = Self::zero(spec);
        e.coords[0] = q;
        e
    }

    /// The `c`-th basis element (`1, s` or `1, i, j, k`).
    pub fn basis(spec: Arc<AlgebraSpec>, c: usize) -> Self {
        let coords = spec.unit_vector(c);
        Self { spec, coords }
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec || *self.spec == *other.spec {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            spec: self.spec.clone(),
            coords: self.spec.mul_coords(&self.coords, &other.coords),
        })
    }

    pub fn conjugate(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            coords: self.spec.conj_coords(&self.coords),
        }
    }

    /// `(x conj(y) + y conj(x)) / 2`, which is always a rational multiple of 1.
    pub fn real_inner(&self, other: &Self) -> Rational {
        self.check_same(other).expect("real_inner across different algebras");
        self.spec.real_inner_coords(&self.coords, &other.coords)
    }

    /// Reduced norm `x conj(x)`.
    pub fn norm(&self) -> Rational {
        self.real_inner(self)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            spec: self.spec.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        self.checked_mul(rhs).expect("multiplying elements of different algebras")
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        self.check_same(rhs).expect("adding elements of different algebras");
        AlgebraElement {
            spec: self.spec.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &'a AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            spec: self.spec.clone(),
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbols = self.spec.basis_symbols();
        let mut wrote = false;
        for (c, v) in self.coords.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            if c == 0 {
                write!(f, "{}", fmt_rational(v))?;
            } else {
                write!(f, "({}){}", fmt_rational(v), symbols[c])?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{int, rat};
    use proptest::prelude::*;

    fn hamilton() -> Arc<AlgebraSpec> {
        Arc::new(AlgebraSpec::quaternion(int(-1), int(-1)).unwrap())
    }

    fn el(spec: &Arc<AlgebraSpec>, c: &[i64]) -> AlgebraElement {
        AlgebraElement::new(spec.clone(), c.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn quaternion_units_multiply_like_hamilton() {
        let h = hamilton();
        let (i, j, k) = (el(&h, &[0, 1, 0, 0]), el(&h, &[0, 0, 1, 0]), el(&h, &[0, 0, 0, 1]));
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &i, -&k);
        assert_eq!(&k * &k, el(&h, &[-1, 0, 0, 0]));
    }

    #[test]
    fn j_squared_in_minus_one_minus_three() {
        let q = Arc::new(AlgebraSpec::quaternion(int(-1), int(-3)).unwrap());
        let j = el(&q, &[0, 0, 1, 0]);
        assert_eq!(&j * &j, el(&q, &[-3, 0, 0, 0]));
        let k = el(&q, &[0, 0, 0, 1]);
        assert_eq!(&k * &k, el(&q, &[-3, 0, 0, 0]));
    }

    #[test]
    fn conjugation_examples() {
        let h = hamilton();
        assert_eq!(el(&h, &[1, 1, 1, 1]).conjugate(), el(&h, &[1, -1, -1, -1]));
        let e = Arc::new(AlgebraSpec::quadratic(int(-3)).unwrap());
        let w = AlgebraElement::new(e.clone(), vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(w.conjugate().coords(), &[rat(1, 2), rat(-1, 2)]);
    }

    #[test]
    fn real_inner_examples() {
        let h = hamilton();
        let i = el(&h, &[0, 1, 0, 0]);
        assert_eq!(i.real_inner(&i), int(1));
        let omega = AlgebraElement::new(h.clone(), vec![rat(1, 2); 4]).unwrap();
        assert_eq!(AlgebraElement::one(h.clone()).real_inner(&omega), rat(1, 2));
        assert_eq!(omega.real_inner(&AlgebraElement::zero(h)), int(0));
    }

    #[test]
    fn rejects_indefinite_specs() {
        assert!(AlgebraSpec::quadratic(int(2)).is_err());
        assert!(AlgebraSpec::quaternion(int(-1), int(1)).is_err());
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let h = hamilton();
        let q = Arc::new(AlgebraSpec::quaternion(int(-1), int(-3)).unwrap());
        assert!(el(&h, &[1, 0, 0, 0]).checked_mul(&el(&q, &[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn serializes_like_lattice_files() {
        let s = serde_json::to_string(&AlgebraSpec::quadratic(int(-3)).unwrap()).unwrap();
        assert_eq!(s, r#"{"kind":"quadratic","d":"-3"}"#);
        let q: AlgebraSpec = serde_json::from_str(r#"{"kind":"quaternion","a":"-1","b":"-1"}"#).unwrap();
        assert_eq!(q, *hamilton());
    }

    fn specs() -> Vec<Arc<AlgebraSpec>> {
        vec![
            hamilton(),
            Arc::new(AlgebraSpec::quaternion(int(-1), int(-3)).unwrap()),
            Arc::new(AlgebraSpec::quaternion(int(-2), int(-5)).unwrap()),
            Arc::new(AlgebraSpec::quadratic(int(-3)).unwrap()),
            Arc::new(AlgebraSpec::quadratic(int(-7)).unwrap()),
        ]
    }

    fn element(spec: &Arc<AlgebraSpec>, raw: &[(i64, i64)]) -> AlgebraElement {
        let coords = raw[..spec.rank()].iter().map(|&(p, q)| rat(p, q)).collect();
        AlgebraElement::new(spec.clone(), coords).unwrap()
    }

    fn raw_coords() -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((-6i64..=6, 1i64..=4), 4)
    }

    proptest! {
        #[test]
        fn ring_axioms(s in 0usize..5, x in raw_coords(), y in raw_coords(), z in raw_coords()) {
            let spec = &specs()[s];
            let (x, y, z) = (element(spec, &x), element(spec, &y), element(spec, &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &AlgebraElement::one(spec.clone()), x.clone());
            prop_assert_eq!((&x * &y).conjugate(), &y.conjugate() * &x.conjugate());
            prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        }

        #[test]
        fn trace_form_is_definite_and_multiplicative(s in 0usize..5, x in raw_coords(), y in raw_coords(), al in raw_coords()) {
            let spec = &specs()[s];
            let (x, y, alpha) = (element(spec, &x), element(spec, &y), element(spec, &al));
            if !x.is_zero() {
                prop_assert!(x.norm().is_positive());
            }
            prop_assert_eq!(x.real_inner(&y), y.real_inner(&x));
            let lhs = (&alpha * &x).real_inner(&(&alpha * &y));
            prop_assert_eq!(lhs, alpha.norm() * x.real_inner(&y));
            prop_assert_eq!((&x * &x.conjugate()).coords()[0].clone(), x.norm());
        }
    }
}
