//! Rotations on circles and tori.
//!
//! Circle coordinates are 64-bit fixed point (`k / 2^64`), so translations
//! are exact modular additions: the action law and the isometry property
//! hold bit-for-bit. An "irrational" rotation number is its 64-bit
//! approximant (denominator `2^64 > 10⁹`), so every statement about it is
//! an approximate-periodicity statement over orbit lengths far below `2^64`.

use serde_json::Value;

use super::{mismatch, GSystem, Space, SystemPoint};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupId};

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// A point of `R/Z` as the fraction `k / 2^64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn(pub u64);

impl Turn {
    pub const ZERO: Turn = Turn(0);

    pub fn from_f64(x: f64) -> Turn {
        let frac = x.rem_euclid(1.0);
        let scaled = frac * TWO_POW_64;
        if scaled >= TWO_POW_64 {
            Turn(0)
        } else {
            Turn(scaled as u64)
        }
    }

    /// Representative in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        let x = self.0 as f64 / TWO_POW_64;
        if x >= 1.0 {
            0.0
        } else {
            x
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Turn) -> Turn {
        Turn(self.0.wrapping_add(other.0))
    }

    /// `k·t mod 1`, exact.
    pub fn times(self, k: i64) -> Turn {
        Turn(self.0.wrapping_mul(k as u64))
    }

    /// Arc-length distance `min(|Δ|, 1 − |Δ|)`.
    pub fn arc_distance(self, other: Turn) -> f64 {
        let d = self.0.wrapping_sub(other.0);
        d.min(d.wrapping_neg()) as f64 / TWO_POW_64
    }
}

/// A rotation number together with whether it is an exact dyadic value or a
/// 64-bit approximant of something else (typically an irrational).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RotationNumber {
    pub turn: Turn,
    pub approximant: bool,
}

impl RotationNumber {
    /// `(√5 − 1)/2`, i.e. `⌊2^64/φ⌉`.
    pub const GOLDEN: RotationNumber = RotationNumber {
        turn: Turn(0x9E37_79B9_7F4A_7C15),
        approximant: true,
    };

    /// `√2 − 1`.
    pub const SILVER: RotationNumber = RotationNumber {
        turn: Turn(0x6A09_E667_F3BC_C908),
        approximant: true,
    };

    pub fn from_f64(x: f64) -> RotationNumber {
        let turn = Turn::from_f64(x);
        RotationNumber {
            turn,
            approximant: turn.to_f64() != x.rem_euclid(1.0),
        }
    }

    pub fn value(self) -> f64 {
        self.turn.to_f64()
    }

    /// Accepts a JSON number, `"golden"`, `"silver"`, a decimal string
    /// (parsed exactly, then rounded down to 64 bits) or `"p/q"`.
    pub fn parse(v: &Value) -> Result<RotationNumber> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .map(RotationNumber::from_f64)
                .ok_or_else(|| Error::InvalidParameter(format!("bad rotation number {n}"))),
            Value::String(s) => parse_str(s.trim()),
            other => Err(Error::InvalidParameter(format!("bad rotation number {other}"))),
        }
    }
}

fn bad(s: &str) -> Error {
    Error::InvalidParameter(format!("bad rotation number `{s}`"))
}

/// `num/den mod 1` as a fixed-point turn; `approximant` when inexact.
fn ratio_turn(num: u128, den: u128) -> RotationNumber {
    let rem = num % den;
    let scaled = (rem << 64) / den;
    let exact = (rem << 64).is_multiple_of(den);
    RotationNumber {
        turn: Turn(scaled as u64),
        approximant: !exact,
    }
}

fn parse_str(s: &str) -> Result<RotationNumber> {
    match s {
        "golden" => return Ok(RotationNumber::GOLDEN),
        "silver" => return Ok(RotationNumber::SILVER),
        _ => {}
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: u128 = p.trim().parse().map_err(|_| bad(s))?;
        let q: u128 = q.trim().parse().map_err(|_| bad(s))?;
        if q == 0 || q >= 1 << 64 {
            return Err(bad(s));
        }
        return Ok(ratio_turn(p % q, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad(s));
    }
    // 19 decimal digits keep `rem << 64` inside u128.
    let kept = &frac[..frac.len().min(19)];
    let truncated = kept.len() < frac.len() && frac[kept.len()..].chars().any(|c| c != '0');
    let num: u128 = if kept.is_empty() {
        0
    } else {
        kept.parse().map_err(|_| bad(s))?
    };
    let mut r = ratio_turn(num, 10u128.pow(kept.len() as u32));
    r.approximant |= truncated;
    Ok(r)
}

fn parse_turn(v: &Value) -> Result<Turn> {
    v.as_f64()
        .map(Turn::from_f64)
        .ok_or_else(|| Error::InvalidParameter(format!("expected a circle coordinate, got {v}")))
}

/// `Z^d` acting on the circle by `x ↦ x + Σ g_i α_i` (plain rotation for `d = 1`).
#[derive(Debug, Clone)]
pub struct CircleRotation {
    alphas: Vec<RotationNumber>,
}

impl CircleRotation {
    pub fn rotation(alpha: RotationNumber) -> Self {
        CircleRotation { alphas: vec![alpha] }
    }

    pub fn lattice(alphas: Vec<RotationNumber>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidParameter("need at least one rotation number".into()));
        }
        Ok(CircleRotation { alphas })
    }

    pub fn alphas(&self) -> &[RotationNumber] {
        &self.alphas
    }

    fn shift(&self, g: &GroupElement) -> Turn {
        self.alphas
            .iter()
            .zip(g.coords())
            .fold(Turn::ZERO, |acc, (a, &k)| acc.add(a.turn.times(k)))
    }
}

impl GSystem for CircleRotation {
    fn id(&self) -> String {
        let parts: Vec<String> = self.alphas.iter().map(|a| format!("{:016x}", a.turn.0)).collect();
        format!("circle_rotation[{}]", parts.join(","))
    }

    fn group(&self) -> GroupId {
        GroupId::zd(self.alphas.len()).expect("nonempty")
    }

    fn space(&self) -> Space {
        Space::Circle
    }

    fn apply(&self, g: &GroupElement, x: &SystemPoint) -> Result<SystemPoint> {
        match x {
            SystemPoint::Circle(t) => Ok(SystemPoint::Circle(t.add(self.shift(g)))),
            _ => Err(mismatch(self)),
        }
    }

    fn distance(&self, x: &SystemPoint, y: &SystemPoint, _tol: f64) -> Result<f64> {
        match (x, y) {
            (SystemPoint::Circle(a), SystemPoint::Circle(b)) => Ok(a.arc_distance(*b)),
            _ => Err(mismatch(self)),
        }
    }

    fn diameter_bound(&self) -> f64 {
        0.5
    }

    fn parse_point(&self, v: &Value) -> Result<SystemPoint> {
        Ok(SystemPoint::Circle(parse_turn(v)?))
    }
}

/// Heisenberg group acting on `T²` through its abelianization:
/// `(a, b, c)·(x₁, x₂) = (x₁ + aα₁, x₂ + bα₂)`. Metric: max of the two arcs.
#[derive(Debug, Clone)]
pub struct HeisenbergTorus {
    alphas: [RotationNumber; 2],
}

impl HeisenbergTorus {
    pub fn new(alpha1: RotationNumber, alpha2: RotationNumber) -> Self {
        HeisenbergTorus {
            alphas: [alpha1, alpha2],
        }
    }
}

impl GSystem for HeisenbergTorus {
    fn id(&self) -> String {
        format!(
            "heisenberg_torus[{:016x},{:016x}]",
            self.alphas[0].turn.0, self.alphas[1].turn.0
        )
    }

    fn group(&self) -> GroupId {
        GroupId::Heisenberg
    }

    fn space(&self) -> Space {
        Space::Torus(2)
    }

    fn apply(&self, g: &GroupElement, x: &SystemPoint) -> Result<SystemPoint> {
        match x {
            SystemPoint::Torus(ts) if ts.len() == 2 => {
                let c = g.coords();
                Ok(SystemPoint::Torus(vec![
                    ts[0].add(self.alphas[0].turn.times(c[0])),
                    ts[1].add(self.alphas[1].turn.times(c[1])),
                ]))
            }
            _ => Err(mismatch(self)),
        }
    }

    fn distance(&self, x: &SystemPoint, y: &SystemPoint, _tol: f64) -> Result<f64> {
        match (x, y) {
            (SystemPoint::Torus(a), SystemPoint::Torus(b)) if a.len() == 2 && b.len() == 2 => {
                Ok(a[0].arc_distance(b[0]).max(a[1].arc_distance(b[1])))
            }
            _ => Err(mismatch(self)),
        }
    }

    fn diameter_bound(&self) -> f64 {
        0.5
    }

    fn parse_point(&self, v: &Value) -> Result<SystemPoint> {
        match v.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok(SystemPoint::Torus(vec![parse_turn(a)?, parse_turn(b)?])),
            _ => Err(Error::InvalidParameter("torus point must be [x1, x2]".into())),
        }
    }
}

/// Two circles, each rotated by its own number. Within a component the
/// distance is half the arc length; across components it is 1.
#[derive(Debug, Clone)]
pub struct DisjointRotations {
    alphas: [RotationNumber; 2],
}

impl DisjointRotations {
    pub fn new(alpha0: RotationNumber, alpha1: RotationNumber) -> Self {
        DisjointRotations {
            alphas: [alpha0, alpha1],
        }
    }
}

impl GSystem for DisjointRotations {
    fn id(&self) -> String {
        format!(
            "disjoint_rotations[{:016x},{:016x}]",
            self.alphas[0].turn.0, self.alphas[1].turn.0
        )
    }

    fn group(&self) -> GroupId {
        GroupId::Z
    }

    fn space(&self) -> Space {
        Space::DisjointCircles
    }

    fn apply(&self, g: &GroupElement, x: &SystemPoint) -> Result<SystemPoint> {
        match x {
            SystemPoint::Tagged { component, point } if *component < 2 => match point.as_ref() {
                SystemPoint::Circle(t) => {
                    let alpha = self.alphas[*component as usize].turn;
                    Ok(SystemPoint::tagged(
                        *component,
                        SystemPoint::Circle(t.add(alpha.times(g.coords()[0]))),
                    ))
                }
                _ => Err(mismatch(self)),
            },
            _ => Err(mismatch(self)),
        }
    }

    fn distance(&self, x: &SystemPoint, y: &SystemPoint, _tol: f64) -> Result<f64> {
        match (x, y) {
            (
                SystemPoint::Tagged {
                    component: c1,
                    point: p1,
                },
                SystemPoint::Tagged {
                    component: c2,
                    point: p2,
                },
            ) => match (p1.as_ref(), p2.as_ref()) {
                (SystemPoint::Circle(a), SystemPoint::Circle(b)) if c1 == c2 => Ok(a.arc_distance(*b) / 2.0),
                (SystemPoint::Circle(_), SystemPoint::Circle(_)) => Ok(1.0),
                _ => Err(mismatch(self)),
            },
            _ => Err(mismatch(self)),
        }
    }

    fn diameter_bound(&self) -> f64 {
        1.0
    }

    fn parse_point(&self, v: &Value) -> Result<SystemPoint> {
        let component = v
            .get("component")
            .and_then(Value::as_u64)
            .filter(|&c| c < 2)
            .ok_or_else(|| Error::InvalidParameter("disjoint-union point needs component 0 or 1".into()))?;
        let x = v
            .get("x")
            .ok_or_else(|| Error::InvalidParameter("disjoint-union point needs x".into()))?;
        Ok(SystemPoint::tagged(
            component as u8,
            SystemPoint::Circle(parse_turn(x)?),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn arc_metric() {
        let d = Turn::from_f64(0.1).arc_distance(Turn::from_f64(0.9));
        assert!((d - 0.2).abs() < 1e-15);
        assert_eq!(Turn::from_f64(0.25).arc_distance(Turn::from_f64(0.75)), 0.5);
        assert_eq!(Turn::from_f64(-0.25), Turn::from_f64(0.75));
    }

    #[test]
    fn times_is_exact_modular_multiplication() {
        let a = RotationNumber::GOLDEN.turn;
        assert_eq!(a.times(3), a.add(a).add(a));
        assert_eq!(a.times(-1).add(a), Turn::ZERO);
        assert_eq!(Turn::from_f64(0.5).times(2), Turn::ZERO);
    }

    #[test]
    fn golden_constant_matches_float_value() {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((RotationNumber::GOLDEN.value() - golden).abs() < 1e-16);
        assert!((RotationNumber::SILVER.value() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn parsing_rotation_numbers() {
        let quarter = RotationNumber::parse(&json!("1/4")).unwrap();
        assert_eq!(
            quarter,
            RotationNumber {
                turn: Turn(1 << 62),
                approximant: false
            }
        );
        let third = RotationNumber::parse(&json!("1/3")).unwrap();
        assert!(third.approximant);
        let dec = RotationNumber::parse(&json!("0.6180339887498949")).unwrap();
        assert!(dec.approximant);
        assert!((dec.value() - 0.6180339887498949).abs() < 1e-18);
        assert_eq!(RotationNumber::parse(&json!("0.5")).unwrap().turn, Turn(1 << 63));
        assert!(!RotationNumber::parse(&json!(0.5)).unwrap().approximant);
        for bad in [json!("x"), json!("1/0"), json!("."), json!(true)] {
            assert!(RotationNumber::parse(&bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn disjoint_union_metric_and_action() {
        let sys = DisjointRotations::new(RotationNumber::GOLDEN, RotationNumber::SILVER);
        let a = SystemPoint::tagged(0, SystemPoint::circle(0.1));
        let b = SystemPoint::tagged(1, SystemPoint::circle(0.1));
        assert_eq!(sys.distance(&a, &b, 1e-9).unwrap(), 1.0);
        let c = SystemPoint::tagged(0, SystemPoint::circle(0.6));
        assert_eq!(sys.distance(&a, &c, 1e-9).unwrap(), 0.25);
        match sys.apply(&GroupElement::z(5), &b).unwrap() {
            SystemPoint::Tagged { component, .. } => assert_eq!(component, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lattice_rotation_sums_rotation_numbers() {
        let a = RotationNumber::from_f64(0.25);
        let b = RotationNumber::from_f64(0.125);
        let sys = CircleRotation::lattice(vec![a, b]).unwrap();
        assert_eq!(sys.group(), GroupId::Zd(2));
        let g = GroupElement::new(GroupId::Zd(2), &[1, 2]).unwrap();
        assert_eq!(
            sys.apply(&g, &SystemPoint::circle(0.0)).unwrap(),
            SystemPoint::circle(0.5)
        );
    }
}
