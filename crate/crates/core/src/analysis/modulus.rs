//! Sampled `(ε, δ)` moduli for the orbit pseudometrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_indices, trace, TraceKind};
use crate::dynamics::{enumerate_z, GSystem, SymbolicPoint, SystemPoint, Turn};
use crate::error::{check_tolerance, Error, Result};
use crate::folner::FolnerSequence;

pub const DEFAULT_PAIRS_PER_DELTA: usize = 32;

/// Draws pairs `(x, y)` with `d(x, y) < δ`.
pub trait PairSampler: Send + Sync {
    fn name(&self) -> String;

    fn sample(&self, delta: f64, rng: &mut ChaCha8Rng) -> Result<(SystemPoint, SystemPoint)>;
}

/// Uniform `x` on the circle, `y` within arc distance `< δ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CirclePairSampler;

impl PairSampler for CirclePairSampler {
    fn name(&self) -> String {
        "circle".into()
    }

    fn sample(&self, delta: f64, rng: &mut ChaCha8Rng) -> Result<(SystemPoint, SystemPoint)> {
        let x = Turn(rng.gen());
        let step = Turn::from_f64(rng.gen_range(0.0..0.999) * delta.min(0.5));
        let y = if rng.gen() { x.add(step) } else { x.add(step.times(-1)) };
        Ok((SystemPoint::Circle(x), SystemPoint::Circle(y)))
    }
}

/// `x = base`, `y` = `base` with one symbol flipped at a position whose
/// metric weight `2^{−i−1}` is below `δ`.
#[derive(Debug, Clone)]
pub struct ShiftFlipSampler {
    pub base: SymbolicPoint,
}

impl Default for ShiftFlipSampler {
    fn default() -> Self {
        ShiftFlipSampler {
            base: SymbolicPoint::constant(0),
        }
    }
}

impl PairSampler for ShiftFlipSampler {
    fn name(&self) -> String {
        "shift_flip".into()
    }

    fn sample(&self, delta: f64, rng: &mut ChaCha8Rng) -> Result<(SystemPoint, SystemPoint)> {
        let mut i = 0usize;
        while 0.5f64.powi(i as i32 + 1) >= delta {
            i += 1;
        }
        let position = enumerate_z(i + rng.gen_range(0..4));
        Ok((
            SystemPoint::Symbolic(self.base.clone()),
            SystemPoint::Symbolic(self.base.with_flips(&[position])),
        ))
    }
}

/// `x` a seeded i.i.d. word, `y` equal to `x` on a window `−r..=r` and to
/// `outside` beyond it, with `r` the smallest radius whose tail bound
/// `2^{−2r−1}` is below `δ`.
#[derive(Debug, Clone)]
pub struct ShiftWindowSampler {
    pub outside: SymbolicPoint,
}

impl Default for ShiftWindowSampler {
    fn default() -> Self {
        ShiftWindowSampler {
            outside: SymbolicPoint::constant(0),
        }
    }
}

impl PairSampler for ShiftWindowSampler {
    fn name(&self) -> String {
        "shift_window".into()
    }

    fn sample(&self, delta: f64, rng: &mut ChaCha8Rng) -> Result<(SystemPoint, SystemPoint)> {
        let mut r = 0i64;
        while 0.5f64.powi(2 * r as i32 + 1) >= delta {
            r += 1;
        }
        let x = SymbolicPoint::random(rng.gen());
        let y = x.windowed(r, &self.outside);
        Ok((SystemPoint::Symbolic(x), SystemPoint::Symbolic(y)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub kind: TraceKind,
    pub sampler: String,
    pub delta_grid: Vec<f64>,
    /// Largest trace limsup estimate over all sampled pairs with
    /// `d(x, y) < δ`, pooling pairs drawn for smaller grid values.
    pub sup_values: Vec<f64>,
    /// The same maximum over the pairs drawn for each `δ` alone.
    pub raw_sup_values: Vec<f64>,
    /// Pairs drawn per grid value.
    pub sample_count: usize,
    pub indices: Vec<usize>,
}

/// Estimates `δ ↦ sup {limsup-trace(x, y) : d(x, y) < δ}` from seeded samples.
#[allow(clippy::too_many_arguments)]
pub fn modulus_estimate(
    sys: &dyn GSystem,
    kind: TraceKind,
    seq: &FolnerSequence,
    delta_grid: &[f64],
    sampler: &dyn PairSampler,
    indices: &[usize],
    pairs_per_delta: usize,
    seed: u64,
    tol: f64,
) -> Result<ModulusEstimate> {
    check_tolerance(tol)?;
    check_indices(indices)?;
    if pairs_per_delta == 0 {
        return Err(Error::InvalidParameter("need at least one pair per δ".into()));
    }
    if delta_grid.is_empty()
        || delta_grid.iter().any(|d| !(d.is_finite() && *d > 0.0))
        || delta_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidParameter(
            "δ grid must be positive and strictly increasing".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::with_capacity(delta_grid.len() * pairs_per_delta);
    for (k, &delta) in delta_grid.iter().enumerate() {
        for _ in 0..pairs_per_delta {
            let (x, y) = sampler.sample(delta, &mut rng)?;
            let d = sys.distance(&x, &y, tol)?;
            if d >= delta {
                return Err(Error::InvalidParameter(format!(
                    "sampler `{}` produced a pair at distance {d} >= δ = {delta}",
                    sampler.name()
                )));
            }
            jobs.push((k, x, y));
        }
    }
    let estimates = jobs
        .par_iter()
        .map(|(k, x, y)| Ok((*k, trace(kind, sys, x, y, seq, indices, tol)?.limsup_estimate)))
        .collect::<Result<Vec<_>>>()?;

    let mut raw = vec![0.0f64; delta_grid.len()];
    for (k, v) in estimates {
        raw[k] = raw[k].max(v);
    }
    let sup_values = raw
        .iter()
        .scan(0.0f64, |acc, &v| {
            *acc = acc.max(v);
            Some(*acc)
        })
        .collect();
    Ok(ModulusEstimate {
        kind,
        sampler: sampler.name(),
        delta_grid: delta_grid.to_vec(),
        sup_values,
        raw_sup_values: raw,
        sample_count: pairs_per_delta,
        indices: indices.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{CircleRotation, FullShift, RotationNumber};
    use crate::folner::Direction;

    #[test]
    fn samplers_respect_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let circle = CircleRotation::rotation(RotationNumber::GOLDEN);
        let shift = FullShift::new();
        for delta in [1e-3, 0.01, 0.2, 0.7] {
            for _ in 0..50 {
                let (x, y) = CirclePairSampler.sample(delta, &mut rng).unwrap();
                assert!(circle.distance(&x, &y, 1e-12).unwrap() < delta);
                let (x, y) = ShiftFlipSampler::default().sample(delta, &mut rng).unwrap();
                assert!(shift.distance(&x, &y, 1e-12).unwrap() < delta);
                let (x, y) = ShiftWindowSampler::default().sample(delta, &mut rng).unwrap();
                assert!(shift.distance(&x, &y, 1e-12).unwrap() < delta);
            }
        }
    }

    #[test]
    fn rotation_mean_distance_modulus_tracks_delta() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let seq = FolnerSequence::z_interval(Direction::Forward);
        let grid = [0.01, 0.05, 0.1];
        let est = modulus_estimate(
            &sys,
            TraceKind::MeanDistance,
            &seq,
            &grid,
            &CirclePairSampler,
            &[10, 20],
            8,
            1,
            1e-9,
        )
        .unwrap();
        for (s, d) in est.sup_values.iter().zip(grid) {
            assert!(*s < d && *s > 0.5 * d, "{s} vs {d}");
        }
        assert!(est.sup_values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_bad_grids() {
        let sys = CircleRotation::rotation(RotationNumber::GOLDEN);
        let seq = FolnerSequence::z_interval(Direction::Forward);
        for grid in [&[][..], &[0.1, 0.05], &[0.0], &[f64::NAN]] {
            assert!(modulus_estimate(
                &sys,
                TraceKind::Wasserstein,
                &seq,
                grid,
                &CirclePairSampler,
                &[4],
                2,
                0,
                1e-9
            )
            .is_err());
        }
    }
}
