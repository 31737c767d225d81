//! G-systems: compact metric spaces with a group action, and the catalog of
//! concrete systems.

mod catalog;
mod circle;
mod interval;
mod symbolic;

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

pub use catalog::{build_system, catalog, CatalogEntry, ExpectedProperties, ParamSchema};
pub use circle::{CircleRotation, DisjointRotations, HeisenbergTorus, RotationNumber, Turn};
pub use interval::IntervalSquare;
pub use symbolic::{enumerate_z, FullShift, SymbolRule, SymbolicPoint};

use crate::error::{check_tolerance, Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupId};

#[derive(Clone, Debug, PartialEq)]
pub enum SystemPoint {
    Circle(Turn),
    Torus(Vec<Turn>),
    Interval(f64),
    Symbolic(SymbolicPoint),
    /// Point of a disjoint union, tagged by component.
    Tagged {
        component: u8,
        point: Box<SystemPoint>,
    },
    /// Point of a product system.
    Pair(Box<SystemPoint>, Box<SystemPoint>),
}

impl SystemPoint {
    pub fn circle(x: f64) -> Self {
        SystemPoint::Circle(Turn::from_f64(x))
    }

    pub fn interval(x: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&x) {
            Ok(SystemPoint::Interval(x))
        } else {
            Err(Error::InvalidParameter(format!(
                "interval coordinate {x} outside [0, 1]"
            )))
        }
    }

    pub fn tagged(component: u8, point: SystemPoint) -> Self {
        SystemPoint::Tagged {
            component,
            point: Box::new(point),
        }
    }

    pub fn pair(x: SystemPoint, y: SystemPoint) -> Self {
        SystemPoint::Pair(Box::new(x), Box::new(y))
    }

    /// Real coordinates for export. Symbolic points contribute their first
    /// eight symbols in the shift enumeration order.
    pub fn coordinates(&self) -> Vec<f64> {
        match self {
            SystemPoint::Circle(t) => vec![t.to_f64()],
            SystemPoint::Torus(ts) => ts.iter().map(|t| t.to_f64()).collect(),
            SystemPoint::Interval(x) => vec![*x],
            SystemPoint::Symbolic(p) => (0..8).map(|i| p.symbol(enumerate_z(i)) as f64).collect(),
            SystemPoint::Tagged { component, point } => {
                let mut v = vec![*component as f64];
                v.extend(point.coordinates());
                v
            }
            SystemPoint::Pair(x, y) => {
                let mut v = x.coordinates();
                v.extend(y.coordinates());
                v
            }
        }
    }
}

impl fmt::Display for SystemPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemPoint::Circle(t) => write!(f, "{}", t.to_f64()),
            SystemPoint::Torus(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| t.to_f64().to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            SystemPoint::Interval(x) => write!(f, "{x}"),
            SystemPoint::Symbolic(p) => write!(f, "{p}"),
            SystemPoint::Tagged { component, point } => write!(f, "[{component}]{point}"),
            SystemPoint::Pair(x, y) => write!(f, "({x}; {y})"),
        }
    }
}

/// Shape of the phase space; selects the observable family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Space {
    Circle,
    Torus(usize),
    Interval,
    BinaryShift,
    DisjointCircles,
    Product(Box<Space>),
}

/// A compact metric space with a continuous action of a built-in group.
pub trait GSystem: Send + Sync + fmt::Debug {
    /// Stable identifier, used to check that measures share a space.
    fn id(&self) -> String;

    fn group(&self) -> GroupId;

    fn space(&self) -> Space;

    /// `g·x`. Callers go through [`act`], which checks ids first.
    fn apply(&self, g: &GroupElement, x: &SystemPoint) -> Result<SystemPoint>;

    /// `d(x, y)` within absolute error `tol`; `tol` is already validated.
    fn distance(&self, x: &SystemPoint, y: &SystemPoint, tol: f64) -> Result<f64>;

    fn diameter_bound(&self) -> f64;

    /// Worst-case absolute error of [`metric`] at tolerance `tol`. Systems
    /// whose metric is evaluated in closed form report float rounding only.
    fn metric_error(&self, _tol: f64) -> f64 {
        4.0 * f64::EPSILON
    }

    /// Parses a point from its JSON description.
    fn parse_point(&self, v: &Value) -> Result<SystemPoint>;
}

pub type SharedSystem = Arc<dyn GSystem>;

pub fn act(sys: &dyn GSystem, g: &GroupElement, x: &SystemPoint) -> Result<SystemPoint> {
    if g.group() != sys.group() {
        return Err(Error::GroupMismatch {
            expected: sys.group(),
            found: g.group(),
        });
    }
    sys.apply(g, x)
}

pub fn metric(sys: &dyn GSystem, x: &SystemPoint, y: &SystemPoint, tol: f64) -> Result<f64> {
    check_tolerance(tol)?;
    sys.distance(x, y, tol)
}

/// `[g·x for g in F]` in the enumeration order of `F`.
pub fn orbit_sample(sys: &dyn GSystem, x: &SystemPoint, set: &FiniteSubset) -> Result<Vec<SystemPoint>> {
    if set.group() != sys.group() {
        return Err(Error::GroupMismatch {
            expected: sys.group(),
            found: set.group(),
        });
    }
    set.iter().map(|g| sys.apply(g, x)).collect()
}

pub(crate) fn mismatch(sys: &dyn GSystem) -> Error {
    Error::PointMismatch { system: sys.id() }
}

/// `(X × X, G)` with the diagonal action and the sum metric.
#[derive(Debug, Clone)]
pub struct ProductSystem {
    base: SharedSystem,
}

pub fn product_system(sys: SharedSystem) -> ProductSystem {
    ProductSystem { base: sys }
}

impl ProductSystem {
    pub fn base(&self) -> &SharedSystem {
        &self.base
    }

    fn split<'a>(&self, p: &'a SystemPoint) -> Result<(&'a SystemPoint, &'a SystemPoint)> {
        match p {
            SystemPoint::Pair(x, y) => Ok((x, y)),
            _ => Err(mismatch(self)),
        }
    }
}

impl GSystem for ProductSystem {
    fn id(&self) -> String {
        format!("product({})", self.base.id())
    }

    fn group(&self) -> GroupId {
        self.base.group()
    }

    fn space(&self) -> Space {
        Space::Product(Box::new(self.base.space()))
    }

    fn apply(&self, g: &GroupElement, p: &SystemPoint) -> Result<SystemPoint> {
        let (x, y) = self.split(p)?;
        Ok(SystemPoint::pair(self.base.apply(g, x)?, self.base.apply(g, y)?))
    }

    fn distance(&self, p: &SystemPoint, q: &SystemPoint, tol: f64) -> Result<f64> {
        let (x1, y1) = self.split(p)?;
        let (x2, y2) = self.split(q)?;
        Ok(self.base.distance(x1, x2, tol / 2.0)? + self.base.distance(y1, y2, tol / 2.0)?)
    }

    fn diameter_bound(&self) -> f64 {
        2.0 * self.base.diameter_bound()
    }

    fn metric_error(&self, tol: f64) -> f64 {
        2.0 * self.base.metric_error(tol / 2.0)
    }

    fn parse_point(&self, v: &Value) -> Result<SystemPoint> {
        match v.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok(SystemPoint::pair(self.base.parse_point(x)?, self.base.parse_point(y)?)),
            _ => Err(Error::InvalidParameter(
                "product point must be a two-element array".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;

    #[test]
    fn product_acts_diagonally_with_sum_metric() {
        let base: SharedSystem = Arc::new(CircleRotation::rotation(RotationNumber::from_f64(0.25)));
        let prod = product_system(base.clone());
        let p = SystemPoint::pair(SystemPoint::circle(0.1), SystemPoint::circle(0.7));
        let q = SystemPoint::pair(SystemPoint::circle(0.2), SystemPoint::circle(0.75));
        let g = GroupElement::z(3);
        let moved = act(&prod, &g, &p).unwrap();
        assert_eq!(
            moved,
            SystemPoint::pair(
                act(base.as_ref(), &g, &SystemPoint::circle(0.1)).unwrap(),
                act(base.as_ref(), &g, &SystemPoint::circle(0.7)).unwrap()
            )
        );
        assert_eq!(metric(&prod, &p, &p, 1e-9).unwrap(), 0.0);
        let d = metric(&prod, &p, &q, 1e-9).unwrap();
        let parts = metric(
            base.as_ref(),
            &SystemPoint::circle(0.1),
            &SystemPoint::circle(0.2),
            1e-9,
        )
        .unwrap()
            + metric(
                base.as_ref(),
                &SystemPoint::circle(0.7),
                &SystemPoint::circle(0.75),
                1e-9,
            )
            .unwrap();
        assert!((d - parts).abs() < 1e-15);
    }

    #[test]
    fn orbit_of_identity_set_is_the_point() {
        let sys = CircleRotation::rotation(RotationNumber::from_f64(0.3));
        let x = SystemPoint::circle(0.42);
        let orbit = orbit_sample(&sys, &x, &FiniteSubset::z_range(0, 0)).unwrap();
        assert_eq!(orbit, vec![x]);
    }

    #[test]
    fn rational_rotation_orbit() {
        let sys = CircleRotation::rotation(RotationNumber::from_f64(0.25));
        let orbit = orbit_sample(&sys, &SystemPoint::circle(0.0), &FiniteSubset::z_range(0, 3)).unwrap();
        let xs: Vec<f64> = orbit.iter().map(|p| p.coordinates()[0]).collect();
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn ids_are_checked() {
        let sys = CircleRotation::rotation(RotationNumber::from_f64(0.3));
        let g = GroupElement::heisenberg(1, 0, 0);
        assert!(matches!(
            act(&sys, &g, &SystemPoint::circle(0.0)),
            Err(Error::GroupMismatch { .. })
        ));
        let bad = SystemPoint::Interval(0.5);
        assert!(matches!(
            act(&sys, &GroupElement::z(1), &bad),
            Err(Error::PointMismatch { .. })
        ));
        assert_eq!(
            metric(&sys, &SystemPoint::circle(0.0), &SystemPoint::circle(0.1), 0.0),
            Err(Error::InvalidTolerance(0.0))
        );
    }
}
