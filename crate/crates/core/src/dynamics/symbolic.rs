//! The full shift `{0,1}^Z` with rule-backed points.
//!
//! A point is a rule `k ↦ u(k)` plus an offset; the shift by `n` only moves
//! the offset, so orbit samples never materialize words. Every rule
//! evaluates in O(1) (or O(log) for flip lists), so no memo table is kept.

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use super::circle::{RotationNumber, Turn};
use super::{mismatch, GSystem, Space, SystemPoint};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupId};

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolRule {
    Constant(u8),
    /// `u(k) = word[k mod len]`.
    Periodic(Vec<u8>),
    /// Rotation coding `u(k) = ⌊x + (k+1)α⌋ − ⌊x + kα⌋`.
    Sturmian {
        alpha: Turn,
        x: Turn,
    },
    /// Seeded i.i.d. fair bits.
    Random {
        seed: u64,
    },
    /// `base` with the symbols at `positions` (sorted) complemented.
    Flipped {
        base: Box<SymbolRule>,
        positions: Vec<i128>,
    },
    /// `inner` on `lo..=hi`, `outside` elsewhere.
    Window {
        inner: Box<SymbolRule>,
        lo: i128,
        hi: i128,
        outside: Box<SymbolRule>,
    },
    /// `inner(k + by)`.
    Translated {
        inner: Box<SymbolRule>,
        by: i128,
    },
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SymbolRule {
    pub fn symbol(&self, k: i128) -> u8 {
        match self {
            SymbolRule::Constant(s) => *s,
            SymbolRule::Periodic(word) => word[k.rem_euclid(word.len() as i128) as usize],
            SymbolRule::Sturmian { alpha, x } => {
                let s = x.0.wrapping_add(alpha.0.wrapping_mul(k as u64));
                s.checked_add(alpha.0).is_none() as u8
            }
            SymbolRule::Random { seed } => (splitmix64(seed ^ splitmix64(k as u64)) >> 63) as u8,
            SymbolRule::Flipped { base, positions } => base.symbol(k) ^ positions.binary_search(&k).is_ok() as u8,
            SymbolRule::Window { inner, lo, hi, outside } => {
                if (*lo..=*hi).contains(&k) {
                    inner.symbol(k)
                } else {
                    outside.symbol(k)
                }
            }
            SymbolRule::Translated { inner, by } => inner.symbol(k + by),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SymbolRule::Constant(s) if *s > 1 => Err(Error::InvalidParameter("symbols must be 0 or 1".into())),
            SymbolRule::Periodic(w) if w.is_empty() || w.iter().any(|&s| s > 1) => Err(Error::InvalidParameter(
                "periodic word must be nonempty over {0,1}".into(),
            )),
            SymbolRule::Flipped { base, .. } => base.validate(),
            SymbolRule::Translated { inner, .. } => inner.validate(),
            SymbolRule::Window { inner, outside, lo, hi } => {
                if lo > hi {
                    return Err(Error::InvalidParameter("empty window".into()));
                }
                inner.validate()?;
                outside.validate()
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicPoint {
    rule: Arc<SymbolRule>,
    offset: i64,
}

impl SymbolicPoint {
    pub fn new(rule: SymbolRule) -> Result<Self> {
        rule.validate()?;
        Ok(SymbolicPoint {
            rule: Arc::new(rule),
            offset: 0,
        })
    }

    pub fn constant(s: u8) -> Self {
        SymbolicPoint::new(SymbolRule::Constant(s)).expect("binary symbol")
    }

    pub fn sturmian(alpha: RotationNumber, x: f64) -> Self {
        SymbolicPoint::new(SymbolRule::Sturmian {
            alpha: alpha.turn,
            x: Turn::from_f64(x),
        })
        .expect("always valid")
    }

    pub fn random(seed: u64) -> Self {
        SymbolicPoint::new(SymbolRule::Random { seed }).expect("always valid")
    }

    /// Same point with the given coordinates complemented.
    pub fn with_flips(&self, positions: &[i64]) -> Self {
        let mut positions: Vec<i128> = positions.iter().map(|&p| p as i128 + self.offset as i128).collect();
        positions.sort_unstable();
        positions.dedup();
        SymbolicPoint {
            rule: Arc::new(SymbolRule::Flipped {
                base: Box::new((*self.rule).clone()),
                positions,
            }),
            offset: self.offset,
        }
    }

    /// Agrees with `self` on coordinates `−radius..=radius` and with
    /// `outside` everywhere else.
    pub fn windowed(&self, radius: i64, outside: &SymbolicPoint) -> Self {
        let base = self.offset as i128;
        let rule = SymbolRule::Window {
            inner: Box::new((*self.rule).clone()),
            lo: base - radius as i128,
            hi: base + radius as i128,
            outside: Box::new(SymbolRule::Translated {
                inner: Box::new((*outside.rule).clone()),
                by: outside.offset as i128 - base,
            }),
        };
        SymbolicPoint {
            rule: Arc::new(rule),
            offset: self.offset,
        }
    }

    /// `u(k)`.
    pub fn symbol(&self, k: i64) -> u8 {
        self.rule.symbol(k as i128 + self.offset as i128)
    }

    /// `σ^n u`. Offsets of constant and periodic rules are kept reduced, so
    /// shift-invariant points compare equal to their shifts.
    pub fn shifted(&self, n: i64) -> Result<Self> {
        let offset = match &*self.rule {
            SymbolRule::Constant(_) => 0,
            SymbolRule::Periodic(w) => (self.offset as i128 + n as i128).rem_euclid(w.len() as i128) as i64,
            _ => self.offset.checked_add(n).ok_or(Error::Overflow("shift offset"))?,
        };
        Ok(SymbolicPoint {
            rule: Arc::clone(&self.rule),
            offset,
        })
    }
}

impl fmt::Display for SymbolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let window: String = (-4..=4).map(|k| char::from(b'0' + self.symbol(k))).collect();
        write!(f, "…{}.{}…", &window[..4], &window[4..])
    }
}

/// `g_i` in the fixed enumeration `0, 1, −1, 2, −2, …` of `Z`.
pub fn enumerate_z(i: usize) -> i64 {
    let m = i.div_ceil(2) as i64;
    if i % 2 == 1 {
        m
    } else {
        -m
    }
}

/// Truncation depth `K` with `2^{−K} <= tol`.
pub(crate) fn depth_for(tol: f64) -> usize {
    let k = (-tol.log2()).ceil();
    if k <= 0.0 {
        0
    } else {
        (k as usize).min(1074)
    }
}

/// `({0,1}^Z, σ)` with `(n·u)(k) = u(k + n)` and
/// `d(u, v) = Σ_{i>=0} 2^{−i−1} [u(g_i) ≠ v(g_i)]`.
#[derive(Debug, Clone, Default)]
pub struct FullShift {
    /// When set, bare numbers parse as Sturmian points with this slope.
    sturmian_alpha: Option<RotationNumber>,
}

impl FullShift {
    pub fn new() -> Self {
        FullShift { sturmian_alpha: None }
    }

    pub fn sturmian(alpha: RotationNumber) -> Self {
        FullShift {
            sturmian_alpha: Some(alpha),
        }
    }

    /// Metric truncated after `depth` terms.
    pub fn truncated_distance(&self, u: &SymbolicPoint, v: &SymbolicPoint, depth: usize) -> f64 {
        let mut sum = 0.0;
        let mut weight = 0.5;
        for i in 0..depth {
            let k = enumerate_z(i);
            if u.symbol(k) != v.symbol(k) {
                sum += weight;
            }
            weight *= 0.5;
        }
        sum
    }
}

impl GSystem for FullShift {
    fn id(&self) -> String {
        "full_shift".into()
    }

    fn group(&self) -> GroupId {
        GroupId::Z
    }

    fn space(&self) -> Space {
        Space::BinaryShift
    }

    fn apply(&self, g: &GroupElement, x: &SystemPoint) -> Result<SystemPoint> {
        match x {
            SystemPoint::Symbolic(p) => Ok(SystemPoint::Symbolic(p.shifted(g.coords()[0])?)),
            _ => Err(mismatch(self)),
        }
    }

    fn distance(&self, x: &SystemPoint, y: &SystemPoint, tol: f64) -> Result<f64> {
        match (x, y) {
            (SystemPoint::Symbolic(u), SystemPoint::Symbolic(v)) => Ok(self.truncated_distance(u, v, depth_for(tol))),
            _ => Err(mismatch(self)),
        }
    }

    fn diameter_bound(&self) -> f64 {
        1.0
    }

    fn metric_error(&self, tol: f64) -> f64 {
        2f64.powi(-(depth_for(tol) as i32)) + 4.0 * f64::EPSILON
    }

    fn parse_point(&self, v: &Value) -> Result<SystemPoint> {
        if let (Some(alpha), Some(x)) = (self.sturmian_alpha, v.as_f64()) {
            return Ok(SystemPoint::Symbolic(SymbolicPoint::sturmian(alpha, x)));
        }
        Ok(SystemPoint::Symbolic(parse_symbolic(v)?))
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::InvalidParameter(format!("symbolic point needs `{key}`")))
}

fn parse_symbolic(v: &Value) -> Result<SymbolicPoint> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidParameter("symbolic point must be an object".into()))?;
    let allowed = ["rule", "symbol", "word", "alpha", "x", "seed", "flips", "offset"];
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::InvalidParameter(format!("unknown symbolic point key `{k}`")));
    }
    let rule_name = field(v, "rule")?
        .as_str()
        .ok_or_else(|| Error::InvalidParameter("`rule` must be a string".into()))?;
    let as_u64 = |key: &str| -> Result<u64> {
        field(v, key)?
            .as_u64()
            .ok_or_else(|| Error::InvalidParameter(format!("`{key}` must be a nonnegative integer")))
    };
    let rule = match rule_name {
        "constant" => SymbolRule::Constant(as_u64("symbol")?.min(255) as u8),
        "periodic" => {
            let word: Vec<u8> = serde_json::from_value(field(v, "word")?.clone())
                .map_err(|e| Error::InvalidParameter(format!("word: {e}")))?;
            SymbolRule::Periodic(word)
        }
        "sturmian" => {
            let alpha = RotationNumber::parse(field(v, "alpha")?)?;
            let x = field(v, "x")?
                .as_f64()
                .ok_or_else(|| Error::InvalidParameter("`x` must be a number".into()))?;
            SymbolRule::Sturmian {
                alpha: alpha.turn,
                x: Turn::from_f64(x),
            }
        }
        "random" => SymbolRule::Random { seed: as_u64("seed")? },
        other => {
            return Err(Error::Unknown {
                what: "symbol rule",
                name: other.to_string(),
            })
        }
    };
    let mut point = SymbolicPoint::new(rule)?;
    if let Some(flips) = v.get("flips") {
        let flips: Vec<i64> =
            serde_json::from_value(flips.clone()).map_err(|e| Error::InvalidParameter(format!("flips: {e}")))?;
        point = point.with_flips(&flips);
    }
    if let Some(off) = v.get("offset") {
        let off = off
            .as_i64()
            .ok_or_else(|| Error::InvalidParameter("`offset` must be an integer".into()))?;
        point = point.shifted(off)?;
    }
    Ok(point)
}
