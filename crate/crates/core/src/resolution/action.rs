//! Graded `L_1`-modules with one-dimensional components `f_j`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{rational_to_json, Rational};

/// Indices `j` for which `f_j` is a nonzero component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    All,
    /// Closed interval `[lo, hi]`.
    Interval(i64, i64),
}

impl Support {
    pub fn contains(self, j: i64) -> bool {
        match self {
            Support::All => true,
            Support::Interval(lo, hi) => lo <= j && j <= hi,
        }
    }

    fn to_json(self) -> Value {
        match self {
            Support::All => json!("all"),
            Support::Interval(lo, hi) => json!([lo, hi]),
        }
    }
}

type ScalarFn = Arc<dyn Fn(u32, i64) -> Rational + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Zero,
    TensorDensity { lambda: Rational, mu: Rational },
    Custom { name: String, a: ScalarFn },
}

/// Structure scalars `a(i, j)` with `e_i f_j = a(i, j) f_{i+j}`.
#[derive(Clone)]
pub struct GradedAction {
    kind: Kind,
    support: Support,
}

impl GradedAction {
    /// Every `e_i` acts by zero on components in every degree.
    pub fn trivial() -> Self {
        GradedAction {
            kind: Kind::Zero,
            support: Support::All,
        }
    }

    /// The one-dimensional trivial module, concentrated in degree 0.
    pub fn point() -> Self {
        GradedAction {
            kind: Kind::Zero,
            support: Support::Interval(0, 0),
        }
    }

    /// `F_{lambda,mu}`: `a(i, j) = j + mu - lambda (i + 1)`.
    pub fn tensor_density(lambda: Rational, mu: Rational) -> Self {
        GradedAction {
            kind: Kind::TensorDensity { lambda, mu },
            support: Support::All,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        support: Support,
        a: impl Fn(u32, i64) -> Rational + Send + Sync + 'static,
    ) -> Self {
        GradedAction {
            kind: Kind::Custom {
                name: name.into(),
                a: Arc::new(a),
            },
            support,
        }
    }

    /// Restricts to a finite window; scalars into or out of it become zero.
    pub fn truncated(mut self, lo: i64, hi: i64) -> Self {
        self.support = match self.support {
            Support::All => Support::Interval(lo, hi),
            Support::Interval(a, b) => Support::Interval(a.max(lo), b.min(hi)),
        };
        self
    }

    pub fn support(&self) -> Support {
        self.support
    }

    /// True when every structure scalar vanishes.
    pub fn is_zero_action(&self) -> bool {
        matches!(self.kind, Kind::Zero)
    }

    pub fn a(&self, i: u32, j: i64) -> Rational {
        if !self.support.contains(j) || !self.support.contains(j + i as i64) {
            return Rational::zero();
        }
        match &self.kind {
            Kind::Zero => Rational::zero(),
            Kind::TensorDensity { lambda, mu } => {
                Rational::from_integer(j.into()) + mu - lambda * Rational::from_integer((i as i64 + 1).into())
            }
            Kind::Custom { a, .. } => a(i, j),
        }
    }

    pub fn descriptor(&self) -> Value {
        let mut value = match &self.kind {
            Kind::Zero => json!({ "kind": "trivial" }),
            Kind::TensorDensity { lambda, mu } => json!({
                "kind": "tensor-density",
                "lambda": rational_to_json(lambda),
                "mu": rational_to_json(mu),
            }),
            Kind::Custom { name, .. } => json!({ "kind": "custom", "name": name }),
        };
        value["support"] = self.support.to_json();
        value
    }
}

impl fmt::Debug for GradedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedAction({})", self.descriptor())
    }
}

impl fmt::Display for GradedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Zero => write!(f, "trivial")?,
            Kind::TensorDensity { lambda, mu } => write!(f, "F(lambda={lambda}, mu={mu})")?,
            Kind::Custom { name, .. } => write!(f, "{name}")?,
        }
        if let Support::Interval(lo, hi) = self.support {
            write!(f, " on [{lo}, {hi}]")?;
        }
        Ok(())
    }
}
