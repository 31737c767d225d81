//! Named acceptance suites run by `folner verify`.

use std::collections::HashSet;
use std::fmt;
use std::time::Instant;

use folner_core::analysis::{d_trace, theorem12_check, PairOfPairs};
use folner_core::dynamics::{
    build_system, CircleRotation, DisjointRotations, IntervalSquare, RotationNumber, Space, Turn,
};
use folner_core::folner::{extract_tempered_subsequence_with_budget, FolnerSequence, Sides};
use folner_core::measures::Observable;
use folner_core::{
    assignment_min, birkhoff_average, bruteforce_min, empirical_measure, folner_defect_left, folner_defect_right,
    inverse, multiply, temperedness_report, wasserstein_empirical, CostMatrix, Direction, EmpiricalMeasure,
    FiniteSubset, GSystem, GroupElement, GroupId, SharedSystem, SystemPoint,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{random_point, ExperimentConfig};
use crate::error::CliError;
use crate::run::{run_config, RunOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: usize,
    pub suite: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} [{}] {}: {}", self.id, self.suite, self.detail)
    }
}

type Check = fn() -> Result<(bool, String), String>;

pub const SUITES: &[(&str, Check)] = &[
    ("assignment-oracle", assignment_oracle),
    ("solver-performance", solver_performance),
    ("wasserstein-axioms", wasserstein_axioms),
    ("folner-defects", folner_defects),
    ("temperedness", temperedness),
    ("rotation-unique-ergodicity", rotation_unique_ergodicity),
    ("disjoint-union", disjoint_union),
    ("product-inequalities", product_inequalities),
    ("rotation-rate", rotation_rate),
    ("interval-limits", interval_limits),
    ("reproducibility", reproducibility),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(name, _)| *name).chain(["all"]).collect()
}

/// Runs one suite by index (0-based).
pub fn run_criterion(index: usize) -> Outcome {
    let (suite, check) = SUITES[index];
    let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome {
        id: index + 1,
        suite,
        passed,
        detail,
    }
}

/// Runs `name` (or every suite for "all"), calling `report` after each.
pub fn run_suite(name: &str, mut report: impl FnMut(&Outcome)) -> Result<Vec<Outcome>, CliError> {
    let selected: Vec<usize> = if name == "all" {
        (0..SUITES.len()).collect()
    } else {
        match SUITES.iter().position(|(s, _)| *s == name) {
            Some(i) => vec![i],
            None => {
                return Err(CliError::UnknownSuite {
                    name: name.to_string(),
                    available: suite_names().join(", "),
                })
            }
        }
    };
    Ok(selected
        .into_iter()
        .map(|i| {
            let o = run_criterion(i);
            report(&o);
            o
        })
        .collect())
}

fn e<E: fmt::Display>(err: E) -> String {
    err.to_string()
}

fn golden() -> CircleRotation {
    CircleRotation::rotation(RotationNumber::GOLDEN)
}

fn random_cloud(sys: &dyn GSystem, n: usize, rng: &mut ChaCha8Rng) -> Result<EmpiricalMeasure, String> {
    EmpiricalMeasure::from_atoms(sys.id(), (0..n).map(|_| SystemPoint::Circle(Turn(rng.gen()))).collect()).map_err(e)
}

fn assignment_oracle() -> Result<(bool, String), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=8);
        let c = CostMatrix::new(n, (0..n * n).map(|_| rng.gen::<f64>()).collect()).map_err(e)?;
        let diff = (assignment_min(&c).cost - bruteforce_min(&c).map_err(e)?.cost).abs();
        worst = worst.max(diff);
    }
    Ok((
        worst <= 1e-12,
        format!("1000 matrices, max |solver - brute force| = {worst:e}"),
    ))
}

fn solver_performance() -> Result<(bool, String), String> {
    let sys = golden();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut timed = |n: usize| -> Result<(f64, f64, EmpiricalMeasure, EmpiricalMeasure), String> {
        let (mu, nu) = (random_cloud(&sys, n, &mut rng)?, random_cloud(&sys, n, &mut rng)?);
        let t = Instant::now();
        let w = wasserstein_empirical(&sys, &mu, &nu, 1e-9).map_err(e)?;
        Ok((w, t.elapsed().as_secs_f64(), mu, nu))
    };
    let (_, t512, _, _) = timed(512)?;
    let (w1024, t1024, mu, nu) = timed(1024)?;
    let again = wasserstein_empirical(&sys, &mu, &nu, 1e-9).map_err(e)?;
    let same = again.to_bits() == w1024.to_bits();
    Ok((
        t512 < 5.0 && t1024 < 60.0 && same,
        format!("n=512 in {t512:.3}s (< 5s), n=1024 in {t1024:.3}s (< 60s), re-run bit-identical: {same}"),
    ))
}

fn wasserstein_axioms() -> Result<(bool, String), String> {
    let sys = golden();
    let tol = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut symmetric = true;
    for _ in 0..200 {
        let (a, b, c) = (
            random_cloud(&sys, 64, &mut rng)?,
            random_cloud(&sys, 64, &mut rng)?,
            random_cloud(&sys, 64, &mut rng)?,
        );
        let w = |p: &EmpiricalMeasure, q: &EmpiricalMeasure| wasserstein_empirical(&sys, p, q, tol).map_err(e);
        let (ab, bc, ac) = (w(&a, &b)?, w(&b, &c)?, w(&a, &c)?);
        symmetric &= ab.to_bits() == w(&b, &a)?.to_bits()
            && bc.to_bits() == w(&c, &b)?.to_bits()
            && ac.to_bits() == w(&c, &a)?.to_bits();
        for excess in [ac - ab - bc, ab - ac - bc, bc - ab - ac] {
            worst_excess = worst_excess.max(excess);
        }
    }
    Ok((
        symmetric && worst_excess <= 3.0 * tol,
        format!("200 triples at n=64: symmetry exact = {symmetric}, max triangle excess = {worst_excess:e} (<= 3e-9)"),
    ))
}

fn folner_defects() -> Result<(bool, String), String> {
    let mut failures = Vec::new();
    let interval = FolnerSequence::z_interval(Direction::Forward);
    for n in 1..=1024usize {
        let set = interval.set(n).map_err(e)?;
        for g in [GroupElement::z(1), GroupElement::z(-1)] {
            let expected = Ratio::new(2, n as u64);
            if folner_defect_left(&set, &g).map_err(e)? != expected
                || folner_defect_right(&set, &g).map_err(e)? != expected
            {
                failures.push(format!("Z interval n={n}"));
            }
        }
    }
    let boxes = FolnerSequence::zd_box(2).map_err(e)?;
    for n in 1..=24usize {
        let set = boxes.set(n).map_err(e)?;
        for g in [[1, 0], [0, 1], [-1, 0], [0, -1]] {
            let g = GroupElement::new(GroupId::Zd(2), &g).map_err(e)?;
            if folner_defect_left(&set, &g).map_err(e)? != Ratio::new(2, 2 * n as u64 + 1) {
                failures.push(format!("Z^2 box n={n}"));
            }
        }
    }
    let heis = FolnerSequence::heisenberg_box();
    let sets = [2, 4, 8]
        .iter()
        .map(|&n| heis.set(n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    let mut heis_values = Vec::new();
    for g in [GroupElement::heisenberg(1, 0, 0), GroupElement::heisenberg(0, 1, 0)] {
        for (side, f) in [
            ("left", folner_defect_left as fn(&_, &_) -> _),
            ("right", folner_defect_right),
        ] {
            let d = sets
                .iter()
                .map(|s| f(s, &g))
                .collect::<Result<Vec<Ratio<u64>>, _>>()
                .map_err(e)?;
            if !d.windows(2).all(|w| w[1] < w[0]) {
                failures.push(format!("Heisenberg {side} {:?} not decreasing", g.coords()));
            }
            heis_values.push(d.iter().map(|r| format!("{r}")).collect::<Vec<_>>().join(" > "));
        }
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "Z n<=1024 and Z^2 n<=24 exact; Heisenberg n=2,4,8: {}",
                heis_values.join("; ")
            )
        } else {
            format!("mismatches: {}", failures.join(", "))
        },
    ))
}

/// `|⋃_{k} F_k⁻¹ F|` by direct enumeration.
fn union_by_enumeration(prior: &[FiniteSubset], right: &FiniteSubset) -> Result<usize, String> {
    let mut seen = HashSet::new();
    for left in prior {
        for a in left.iter() {
            let ai = inverse(a).map_err(e)?;
            for b in right.iter() {
                seen.insert(multiply(&ai, b).map_err(e)?);
            }
        }
    }
    Ok(seen.len())
}

fn reverify(seq: &FolnerSequence, picks: &[usize], c: Ratio<u64>) -> Result<bool, String> {
    let sets = picks
        .iter()
        .map(|&n| seq.set(n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    for j in 1..sets.len() {
        let size = union_by_enumeration(&sets[..j], &sets[j])?;
        if Ratio::new(size as u64, sets[j].len() as u64) > c {
            return Ok(false);
        }
    }
    Ok(picks.windows(2).all(|w| w[0] < w[1]))
}

fn temperedness() -> Result<(bool, String), String> {
    let interval = FolnerSequence::z_interval(Direction::Forward);
    let report = temperedness_report(&interval, 64).map_err(e)?;
    let sets = (1..=64)
        .map(|n| interval.set(n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    let mut enumerated_match = true;
    for (k, &n) in report.indices.iter().enumerate() {
        let size = union_by_enumeration(&sets[..n - 1], &sets[n - 1])?;
        enumerated_match &= report.ratios[k] == Ratio::new(size as u64, n as u64);
    }
    let constant_ok = report.constant <= Ratio::from_integer(2);

    let blocks: Vec<FiniteSubset> = (1..=400i64)
        .map(|n| FiniteSubset::z_range(n * n, n * n + n - 1))
        .collect();
    let cases = [
        (interval.clone(), Ratio::from_integer(2), 6, 10),
        (FolnerSequence::z_interval(Direction::Backward), Ratio::new(3, 2), 6, 10),
        (FolnerSequence::zd_box(2).map_err(e)?, Ratio::from_integer(5), 5, 10),
        (
            FolnerSequence::explicit(GroupId::Z, blocks, Sides::LEFT).map_err(e)?,
            Ratio::from_integer(2),
            5,
            100,
        ),
    ];
    let mut extractions = Vec::new();
    let mut all_reverify = true;
    for (seq, c, count, budget) in cases {
        let picks = extract_tempered_subsequence_with_budget(&seq, c, count, budget).map_err(e)?;
        let ok = reverify(&seq, &picks, c)?;
        all_reverify &= ok;
        extractions.push(format!("{} C={c}: {picks:?}", seq.kind_name()));
    }
    Ok((
        enumerated_match && constant_ok && all_reverify,
        format!(
            "Z interval constant {} (<= 2), enumeration agrees: {enumerated_match}; extractions re-verify: {all_reverify} [{}]",
            report.constant,
            extractions.join("; ")
        ),
    ))
}

fn rotation_unique_ergodicity() -> Result<(bool, String), String> {
    let sys = golden();
    let seq = FolnerSequence::z_interval(Direction::Forward);
    let set = seq.set(1000).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut max_w, mut max_dev) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let x = random_point(&Space::Circle, &mut rng)?;
        let y = random_point(&Space::Circle, &mut rng)?;
        let w = wasserstein_empirical(
            &sys,
            &empirical_measure(&sys, &x, &set).map_err(e)?,
            &empirical_measure(&sys, &y, &set).map_err(e)?,
            1e-9,
        )
        .map_err(e)?;
        max_w = max_w.max(w);
        let d = sys.distance(&x, &y, 1e-12).map_err(e)?;
        let trace = d_trace(&sys, &x, &y, &seq, &[1, 10, 100, 1000], 1e-12).map_err(e)?;
        for v in trace.values {
            max_dev = max_dev.max((v - d).abs());
        }
    }
    Ok((
        max_w <= 0.05 && max_dev <= 1e-9,
        format!("10 pairs at n=1000: max W = {max_w:.6} (<= 0.05), max |d_trace - d(x,y)| = {max_dev:e} (<= 1e-9)"),
    ))
}

fn disjoint_union() -> Result<(bool, String), String> {
    let sys = DisjointRotations::new(RotationNumber::GOLDEN, RotationNumber::SILVER);
    let seq = FolnerSequence::z_interval(Direction::Forward);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sizes = [1usize, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233];
    let mut exact = true;
    for _ in 0..10 {
        let x = SystemPoint::tagged(0, SystemPoint::Circle(Turn(rng.gen())));
        let y = SystemPoint::tagged(1, SystemPoint::Circle(Turn(rng.gen())));
        for &n in &sizes {
            let set = seq.set(n).map_err(e)?;
            let w = wasserstein_empirical(
                &sys,
                &empirical_measure(&sys, &x, &set).map_err(e)?,
                &empirical_measure(&sys, &y, &set).map_err(e)?,
                1e-9,
            )
            .map_err(e)?;
            exact &= w == 1.0;
        }
    }
    Ok((
        exact,
        format!("10 cross-component pairs, n in {sizes:?}: W == 1 exactly: {exact}"),
    ))
}

fn random_pairs(space: &Space, count: usize, seed: u64) -> Result<Vec<PairOfPairs>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            Ok(PairOfPairs::new(
                random_point(space, &mut rng)?,
                random_point(space, &mut rng)?,
                random_point(space, &mut rng)?,
                random_point(space, &mut rng)?,
            ))
        })
        .collect()
}

fn product_inequalities() -> Result<(bool, String), String> {
    let seq = FolnerSequence::z_interval(Direction::Forward);
    let rotation: SharedSystem = std::sync::Arc::new(golden());
    let tol = 1e-9;
    let rot = theorem12_check(
        &rotation,
        &random_pairs(&Space::Circle, 50, 8)?,
        &seq,
        &[10, 50, 100, 200],
        tol,
    )
    .map_err(e)?;
    let rot_ok = rot.max_violation <= tol;

    let shift = build_system("full_shift", &json!({})).map_err(e)?;
    let sh = theorem12_check(
        &shift,
        &random_pairs(&Space::BinaryShift, 50, 9)?,
        &seq,
        &[8, 16, 32, 64],
        tol,
    )
    .map_err(e)?;
    let shift_ok = sh.passed && sh.max_violation <= sh.budget;
    Ok((
        rot_ok && shift_ok,
        format!(
            "rotation n<=200: max violation {:e} (<= 1e-9); full shift n<=64: max violation {:e} (<= budget {:e}); 50 pairs each",
            rot.max_violation, sh.max_violation, sh.budget
        ),
    ))
}

fn rotation_rate() -> Result<(bool, String), String> {
    let alpha = RotationNumber::GOLDEN;
    let sys = CircleRotation::rotation(alpha);
    let seq = FolnerSequence::z_interval(Direction::Forward);
    let f = Observable::cos(1);
    let sin = (std::f64::consts::PI * alpha.value()).sin().abs();
    let mut worst_ratio = 0.0f64;
    let mut ok = true;
    for n in [100usize, 500, 1000] {
        let set = seq.set(n).map_err(e)?;
        // 2 / (n |1 - e^{2πiα}|) = 1 / (n |sin πα|)
        let bound = 1.0 / (n as f64 * sin);
        for k in 0..200 {
            let x = SystemPoint::circle(k as f64 / 200.0);
            let a = birkhoff_average(&sys, &f, &x, &set).map_err(e)?.abs();
            ok &= a <= bound + 1e-12;
            worst_ratio = worst_ratio.max(a / bound);
        }
    }
    Ok((
        ok,
        format!("200 grid points, n in {{100, 500, 1000}}: max |A_n f| / bound = {worst_ratio:.6} (bound 1/(n|sin pi alpha|) = {:.4}/n)", 1.0 / sin),
    ))
}

fn interval_limits() -> Result<(bool, String), String> {
    let sys = IntervalSquare;
    let x = SystemPoint::interval(0.5).map_err(e)?;
    let f = Observable::identity();
    let forward = birkhoff_average(
        &sys,
        &f,
        &x,
        &FolnerSequence::z_interval(Direction::Forward).set(1000).map_err(e)?,
    )
    .map_err(e)?;
    let backward = birkhoff_average(
        &sys,
        &f,
        &x,
        &FolnerSequence::z_interval(Direction::Backward).set(1000).map_err(e)?,
    )
    .map_err(e)?;
    Ok((
        forward <= 0.01 && backward >= 0.99,
        format!(
            "x = 0.5, n = 1000: forward integral {forward:.6} (<= 0.01), backward integral {backward:.6} (>= 0.99)"
        ),
    ))
}

/// Configs exercised by the reproducibility suite; the stems are distinct.
pub fn reproducibility_configs() -> Vec<ExperimentConfig> {
    let docs = [
        json!({
            "system": {"name": "rotation", "params": {"alpha": "golden"}},
            "folner": {"group": "z", "kind": "z_interval"},
            "indices": [10, 50, 100, 200],
            "operation": {"name": "w_trace", "params": {"x": 0.0, "y": 0.3}},
            "output": {"stem": "w_trace"},
            "seed": 11
        }),
        json!({
            "system": {"name": "full_shift"},
            "folner": {"group": "z", "kind": "z_interval"},
            "indices": [8, 16, 32],
            "operation": {"name": "modulus_estimate", "params": {"sampler": "shift_window", "deltas": [0.05, 0.5], "pairs_per_delta": 4}},
            "output": {"stem": "modulus"},
            "seed": 11
        }),
        json!({
            "system": {"name": "rotation"},
            "folner": {"group": "z", "kind": "z_interval"},
            "indices": [20, 40],
            "operation": {"name": "theorem12_check", "params": {"random_pairs": 5}},
            "output": {"stem": "product"},
            "seed": 11
        }),
    ];
    docs.iter()
        .map(|d| ExperimentConfig::parse(&d.to_string()).expect("built-in config parses"))
        .collect()
}

fn reproducibility() -> Result<(bool, String), String> {
    let base = std::env::temp_dir().join(format!(
        "folner-verify-{}-{}",
        std::process::id(),
        rand::random::<u32>()
    ));
    let result = (|| {
        let mut identical = true;
        let mut checked = 0;
        for config in reproducibility_configs() {
            let mut bytes = Vec::new();
            for _ in 0..2 {
                let options = RunOptions {
                    out: Some(base.clone()),
                    seed: None,
                };
                let out = run_config(config.clone(), &options).map_err(e)?;
                bytes.push((
                    std::fs::read(&out.files.csv).map_err(e)?,
                    std::fs::read(&out.files.json).map_err(e)?,
                ));
            }
            identical &= bytes[0] == bytes[1];
            checked += 1;
        }
        Ok((
            identical,
            format!("{checked} configs run twice: CSV and JSON byte-identical: {identical}"),
        ))
    })();
    let _ = std::fs::remove_dir_all(&base);
    result
}
