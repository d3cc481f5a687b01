//! Maximal orders as Z-lattices inside the algebra.
//!
//! The four built-in orders are the documented maximal orders
//! `Z[(1+s)/2]` (s^2 = -3), `Z[i]`, the Hurwitz order `Z[i, j, (1+i+j+k)/2]`
//! in `(-1,-1/Q)` and `Z[1, i, (1+j)/2, (i+k)/2]` in `(-1,-3/Q)`. Their
//! maximality is taken as given.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{AlgebraElement, AlgebraSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix};
use crate::num::{fmt_rational, int, is_integer, rat, Rational};

pub const BUILTIN_ORDERS: [&str; 4] = ["eisenstein", "gaussian", "hurwitz", "j"];

#[derive(Debug, Clone)]
pub struct Order {
    name: String,
    spec: Arc<AlgebraSpec>,
    basis: QMatrix,
    basis_inv: QMatrix,
}

impl PartialEq for Order {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.basis == other.basis
    }
}

impl Eq for Order {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ClosureViolation {
    OneNotInSpan,
    Product { i: usize, j: usize, product: String },
    Conjugate { i: usize, conjugate: String },
}

impl fmt::Display for ClosureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OneNotInSpan => write!(f, "1 is not in the Z-span"),
            Self::Product { i, j, product } => {
                write!(f, "alpha_{i} * alpha_{j} = {product} is not in the Z-span")
            }
            Self::Conjugate { i, conjugate } => {
                write!(f, "conj(alpha_{i}) = {conjugate} is not in the Z-span")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub order: String,
    pub violations: Vec<ClosureViolation>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Order {
    /// Builds an order from the coordinates of a Z-basis. Only invertibility
    /// is enforced here; ring closure is checked by [`Order::verify_ring_closure`].
    pub fn new(name: impl Into<String>, spec: AlgebraSpec, basis: QMatrix) -> Result<Self> {
        spec.validate()?;
        let r = spec.rank();
        if basis.len() != r || basis.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidOrder(format!("basis must be {r}x{r}")));
        }
        let basis_inv = linalg::inverse(&basis)
            .ok_or_else(|| Error::InvalidOrder("basis matrix is singular".into()))?;
        Ok(Self {
            name: name.into(),
            spec: Arc::new(spec),
            basis,
            basis_inv,
        })
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let h = |p: i64| rat(p, 2);
        match name.to_ascii_lowercase().as_str() {
            "eisenstein" => Self::new(
                "eisenstein",
                AlgebraSpec::quadratic(int(-3))?,
                vec![vec![int(1), int(0)], vec![h(1), h(1)]],
            ),
            "gaussian" => Self::new(
                "gaussian",
                AlgebraSpec::quadratic(int(-1))?,
                linalg::identity(2),
            ),
            "hurwitz" => Self::new(
                "hurwitz",
                AlgebraSpec::quaternion(int(-1), int(-1))?,
                vec![
                    vec![int(1), int(0), int(0), int(0)],
                    vec![int(0), int(1), int(0), int(0)],
                    vec![int(0), int(0), int(1), int(0)],
                    vec![h(1), h(1), h(1), h(1)],
                ],
            ),
            "j" => Self::new(
                "j",
                AlgebraSpec::quaternion(int(-1), int(-3))?,
                vec![
                    vec![int(1), int(0), int(0), int(0)],
                    vec![int(0), int(1), int(0), int(0)],
                    vec![h(1), int(0), h(1), int(0)],
                    vec![int(0), h(1), int(0), h(1)],
                ],
            ),
            _ => Err(Error::UnknownOrder(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.spec.rank()
    }

    /// Rows are the coordinates of `alpha_1 .. alpha_r`.
    pub fn basis_matrix(&self) -> &QMatrix {
        &self.basis
    }

    pub(crate) fn basis_inverse(&self) -> &QMatrix {
        &self.basis_inv
    }

    pub fn basis_elements(&self) -> Vec<AlgebraElement> {
        self.basis
            .iter()
            .map(|row| AlgebraElement::new(self.spec.clone(), row.clone()).expect("rank checked"))
            .collect()
    }

    /// Gram matrix of the trace form on the Z-basis.
    pub fn gram(&self) -> QMatrix {
        self.basis
            .iter()
            .map(|x| self.basis.iter().map(|y| self.spec.real_inner_coords(x, y)).collect())
            .collect()
    }

    /// `D_O`, the determinant of the trace-form Gram matrix of a Z-basis.
    pub fn d_invariant(&self) -> Rational {
        linalg::det(&self.gram())
    }

    /// Rational coordinates of `x` over the Z-basis.
    pub fn rational_coordinates(&self, x: &[Rational]) -> Vec<Rational> {
        linalg::vec_mul(x, &self.basis_inv)
    }

    /// Integer coordinates of `x`, or `None` when `x` is not in the order.
    pub fn coordinates(&self, x: &AlgebraElement) -> Option<Vec<BigInt>> {
        assert_eq!(**x.spec(), *self.spec, "element from a different algebra");
        self.integer_coordinates(x.coords())
    }

    pub(crate) fn integer_coordinates(&self, x: &[Rational]) -> Option<Vec<BigInt>> {
        let c = self.rational_coordinates(x);
        c.iter()
            .all(is_integer)
            .then(|| c.into_iter().map(|q| q.to_integer()).collect())
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        self.coordinates(x).is_some()
    }

    /// Checks `1 in O`, `alpha_i alpha_j in O` and `conj(alpha_i) in O`.
    pub fn verify_ring_closure(&self) -> ClosureReport {
        let mut violations = Vec::new();
        let one = AlgebraElement::one(self.spec.clone());
        if !self.contains(&one) {
            violations.push(ClosureViolation::OneNotInSpan);
        }
        let elems = self.basis_elements();
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                let p = a * b;
                if !self.contains(&p) {
                    violations.push(ClosureViolation::Product {
                        i: i + 1,
                        j: j + 1,
                        product: p.to_string(),
                    });
                }
            }
            let c = a.conjugate();
            if !self.contains(&c) {
                violations.push(ClosureViolation::Conjugate {
                    i: i + 1,
                    conjugate: c.to_string(),
                });
            }
        }
        ClosureReport {
            order: self.name.clone(),
            violations,
        }
    }

    pub fn describe(&self) -> String {
        let elems: Vec<String> = self.basis_elements().iter().map(ToString::to_string).collect();
        format!("{} in {}: Z[{}]", self.name, self.spec, elems.join(", "))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

pub fn d_invariant_string(order: &Order) -> String {
    fmt_rational(&order.d_invariant())
}
