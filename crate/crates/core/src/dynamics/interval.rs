use serde_json::Value;

use super::{mismatch, GSystem, Space, SystemPoint};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupId};

/// The homeomorphism `x ↦ x²` of `[0, 1]` generating a `Z`-action; negative
/// powers use `x ↦ √x`. Fixed points 0 and 1 carry every invariant measure,
/// so the measure center is `{0, 1}`.
///
/// Powers are computed by repeated application and stop early once the
/// orbit reaches a float fixed point, so huge exponents cost O(1100) steps.
#[derive(Debug, Clone, Default)]
pub struct IntervalSquare;

impl IntervalSquare {
    pub fn power(x: f64, n: i64) -> f64 {
        let step: fn(f64) -> f64 = if n >= 0 { |v| v * v } else { f64::sqrt };
        let mut v = x;
        for _ in 0..n.unsigned_abs() {
            let next = step(v);
            if next == v {
                break;
            }
            v = next;
        }
        v
    }
}

impl GSystem for IntervalSquare {
    fn id(&self) -> String {
        "interval_square".into()
    }

    fn group(&self) -> GroupId {
        GroupId::Z
    }

    fn space(&self) -> Space {
        Space::Interval
    }

    fn apply(&self, g: &GroupElement, x: &SystemPoint) -> Result<SystemPoint> {
        match x {
            SystemPoint::Interval(v) => Ok(SystemPoint::Interval(Self::power(*v, g.coords()[0]))),
            _ => Err(mismatch(self)),
        }
    }

    fn distance(&self, x: &SystemPoint, y: &SystemPoint, _tol: f64) -> Result<f64> {
        match (x, y) {
            (SystemPoint::Interval(a), SystemPoint::Interval(b)) => Ok((a - b).abs()),
            _ => Err(mismatch(self)),
        }
    }

    fn diameter_bound(&self) -> f64 {
        1.0
    }

    fn parse_point(&self, v: &Value) -> Result<SystemPoint> {
        let x = v
            .as_f64()
            .ok_or_else(|| Error::InvalidParameter(format!("expected an interval coordinate, got {v}")))?;
        SystemPoint::interval(x)
    }
}
