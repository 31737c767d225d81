//! Continuous observables and the fixed dense families used by `ρ`.
//!
//! Family enumeration per space (index `i >= 1`):
//!
//! | space | `f_i` |
//! |---|---|
//! | circle | `cos 2πkx`, `sin 2πkx` for `k = 1, 2, …` (cos first) |
//! | torus `T^d` | `cos`, `sin` of `2π⟨k, x⟩` over nonzero `k` up to sign, by max-norm shell then lexicographic |
//! | interval | `x^i` |
//! | binary shift | cylinder indicators on windows `{g_0..g_{L−1}}`, `L = 1, 2, …`, words in binary order |
//! | two circles | component-0 indicator, then circle family restricted alternately to components 0 and 1 |
//! | product | `f_a(x)·f_b(y)` over pairs `(a, b) ≠ (0, 0)` in diagonal order, `f_0 = 1` |
//!
//! Every family separates Borel probability measures on its space.

use std::fmt;
use std::sync::Arc;

use crate::dynamics::{Space, SymbolicPoint, SystemPoint, Turn};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Cos,
    Sin,
}

type CustomFn = Arc<dyn Fn(&SystemPoint) -> Result<f64> + Send + Sync>;

#[derive(Clone)]
pub enum Observable {
    Constant(f64),
    /// `cos` or `sin` of `2π⟨k, x⟩` on a circle or torus.
    Fourier {
        freqs: Vec<i64>,
        phase: Phase,
    },
    /// `x^k` on the interval.
    Power(u32),
    /// `1[u(p_j) = w_j for all j]` on the shift.
    Cylinder {
        positions: Vec<i64>,
        word: Vec<u8>,
    },
    ComponentIndicator(u8),
    /// `inner` on one component, 0 elsewhere.
    OnComponent(u8, Box<Observable>),
    /// `a(x)·b(y)` on a product.
    Tensor(Box<Observable>, Box<Observable>),
    Custom {
        name: String,
        sup_norm: f64,
        f: CustomFn,
    },
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Constant(c) => write!(f, "Constant({c})"),
            Observable::Fourier { freqs, phase } => write!(f, "{phase:?}{freqs:?}"),
            Observable::Power(k) => write!(f, "x^{k}"),
            Observable::Cylinder { positions, word } => write!(f, "Cylinder({positions:?} = {word:?})"),
            Observable::ComponentIndicator(c) => write!(f, "1[component {c}]"),
            Observable::OnComponent(c, inner) => write!(f, "{inner:?} on component {c}"),
            Observable::Tensor(a, b) => write!(f, "{a:?} ⊗ {b:?}"),
            Observable::Custom { name, .. } => write!(f, "{name}"),
        }
    }
}

fn wrong_point(obs: &Observable) -> Error {
    Error::InvalidParameter(format!("observable {obs:?} cannot evaluate this point"))
}

impl Observable {
    pub fn cos(k: i64) -> Self {
        Observable::Fourier {
            freqs: vec![k],
            phase: Phase::Cos,
        }
    }

    pub fn sin(k: i64) -> Self {
        Observable::Fourier {
            freqs: vec![k],
            phase: Phase::Sin,
        }
    }

    /// Identity on the interval.
    pub fn identity() -> Self {
        Observable::Power(1)
    }

    /// Indicator of `u(position) = symbol`.
    pub fn symbol_at(position: i64, symbol: u8) -> Self {
        Observable::Cylinder {
            positions: vec![position],
            word: vec![symbol],
        }
    }

    pub fn custom(
        name: impl Into<String>,
        sup_norm: f64,
        f: impl Fn(&SystemPoint) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Observable::Custom {
            name: name.into(),
            sup_norm,
            f: Arc::new(f),
        }
    }

    /// `‖f‖ = max |f|`.
    pub fn sup_norm(&self) -> f64 {
        match self {
            Observable::Constant(c) => c.abs(),
            Observable::Fourier { .. }
            | Observable::Power(_)
            | Observable::Cylinder { .. }
            | Observable::ComponentIndicator(_) => 1.0,
            Observable::OnComponent(_, inner) => inner.sup_norm(),
            Observable::Tensor(a, b) => a.sup_norm() * b.sup_norm(),
            Observable::Custom { sup_norm, .. } => *sup_norm,
        }
    }

    pub fn eval(&self, x: &SystemPoint) -> Result<f64> {
        match (self, x) {
            (Observable::Constant(c), _) => Ok(*c),
            (Observable::Fourier { freqs, phase }, SystemPoint::Circle(t)) if freqs.len() == 1 => {
                Ok(fourier(t.times(freqs[0]), *phase))
            }
            (Observable::Fourier { freqs, phase }, SystemPoint::Torus(ts)) if freqs.len() == ts.len() => {
                let angle = ts
                    .iter()
                    .zip(freqs)
                    .fold(Turn::ZERO, |acc, (t, &k)| acc.add(t.times(k)));
                Ok(fourier(angle, *phase))
            }
            (Observable::Power(k), SystemPoint::Interval(v)) => Ok(v.powi(*k as i32)),
            (Observable::Cylinder { positions, word }, SystemPoint::Symbolic(p)) => Ok(cylinder(p, positions, word)),
            (Observable::ComponentIndicator(c), SystemPoint::Tagged { component, .. }) => {
                Ok(if c == component { 1.0 } else { 0.0 })
            }
            (Observable::OnComponent(c, inner), SystemPoint::Tagged { component, point }) => {
                if c == component {
                    inner.eval(point)
                } else {
                    Ok(0.0)
                }
            }
            (Observable::Tensor(a, b), SystemPoint::Pair(x, y)) => Ok(a.eval(x)? * b.eval(y)?),
            (Observable::Custom { f, .. }, _) => f(x),
            _ => Err(wrong_point(self)),
        }
    }
}

fn fourier(angle: Turn, phase: Phase) -> f64 {
    let theta = std::f64::consts::TAU * angle.to_f64();
    match phase {
        Phase::Cos => theta.cos(),
        Phase::Sin => theta.sin(),
    }
}

fn cylinder(p: &SymbolicPoint, positions: &[i64], word: &[u8]) -> f64 {
    if positions.iter().zip(word).all(|(&k, &s)| p.symbol(k) == s) {
        1.0
    } else {
        0.0
    }
}

/// The dense family `{f_i}` attached to a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservableFamily {
    space: Space,
}

impl ObservableFamily {
    pub fn for_space(space: Space) -> Self {
        ObservableFamily { space }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// `f_i` for `i >= 1`.
    pub fn observable(&self, i: usize) -> Observable {
        assert!(i >= 1, "observable families are indexed from 1");
        nth(&self.space, i)
    }
}

fn nth(space: &Space, i: usize) -> Observable {
    match space {
        Space::Circle => circle_term(i),
        Space::Torus(d) => torus_term(*d, i),
        Space::Interval => Observable::Power(i as u32),
        Space::BinaryShift => shift_term(i),
        Space::DisjointCircles => {
            if i == 1 {
                Observable::ComponentIndicator(0)
            } else {
                let j = i - 2;
                Observable::OnComponent((j % 2) as u8, Box::new(circle_term(j / 2 + 1)))
            }
        }
        Space::Product(base) => {
            let (a, b) = diagonal_pair(i);
            let factor = |k: usize| {
                if k == 0 {
                    Observable::Constant(1.0)
                } else {
                    nth(base, k)
                }
            };
            Observable::Tensor(Box::new(factor(a)), Box::new(factor(b)))
        }
    }
}

fn circle_term(i: usize) -> Observable {
    let k = i.div_ceil(2) as i64;
    if i % 2 == 1 {
        Observable::cos(k)
    } else {
        Observable::sin(k)
    }
}

fn torus_term(d: usize, i: usize) -> Observable {
    let want = (i - 1) / 2;
    let mut seen = 0usize;
    for r in 1i64.. {
        for k in shell(d, r) {
            if seen == want {
                let phase = if i % 2 == 1 { Phase::Cos } else { Phase::Sin };
                return Observable::Fourier { freqs: k, phase };
            }
            seen += 1;
        }
    }
    unreachable!()
}

/// Vectors of max-norm `r` whose first nonzero coordinate is positive.
fn shell(d: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut k = vec![-r; d];
    loop {
        let on_shell = k.iter().any(|c| c.abs() == r);
        let positive = k.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0);
        if on_shell && positive {
            out.push(k.clone());
        }
        let mut j = d;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if k[j] < r {
                k[j] += 1;
                break;
            }
            k[j] = -r;
        }
    }
}

fn shift_term(i: usize) -> Observable {
    let mut rest = i - 1;
    let mut len = 1usize;
    while rest >= 1 << len {
        rest -= 1 << len;
        len += 1;
    }
    let positions = (0..len).map(crate::dynamics::enumerate_z).collect();
    let word = (0..len).map(|b| ((rest >> (len - 1 - b)) & 1) as u8).collect();
    Observable::Cylinder { positions, word }
}

/// The `i`-th pair `(a, b) ≠ (0, 0)` in diagonal order `a + b = 1, 2, …`.
fn diagonal_pair(i: usize) -> (usize, usize) {
    let mut rest = i - 1;
    let mut s = 1usize;
    while rest > s {
        rest -= s + 1;
        s += 1;
    }
    (s - rest, rest)
}
