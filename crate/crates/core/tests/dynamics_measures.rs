use folner_core::dynamics::{
    act, build_system, catalog, metric, orbit_sample, CircleRotation, FullShift, GSystem, RotationNumber, SharedSystem,
    Space, SymbolicPoint, SystemPoint, Turn,
};
use folner_core::group::{multiply, FiniteSubset, GroupElement, GroupId};
use folner_core::measures::{
    empirical_measure, integrate, rho_distance, EmpiricalMeasure, Observable, ObservableFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const TOL: f64 = 1e-9;

fn random_point(name: &str, rng: &mut ChaCha8Rng) -> Value {
    match name {
        "rotation" | "zd_rotation" => json!(rng.gen::<f64>()),
        "heisenberg_torus" => json!([rng.gen::<f64>(), rng.gen::<f64>()]),
        "disjoint_rotations" => json!({"component": rng.gen_range(0..2), "x": rng.gen::<f64>()}),
        "interval_square" => json!(rng.gen_range(0.05..0.95)),
        "sturmian" => json!(rng.gen::<f64>()),
        "full_shift" => match rng.gen_range(0..3) {
            0 => json!({"rule": "random", "seed": rng.gen::<u32>(), "offset": rng.gen_range(-50..50)}),
            1 => json!({"rule": "periodic", "word": [rng.gen_range(0..2), 1, 0], "flips": [rng.gen_range(-5..5)]}),
            _ => json!({"rule": "sturmian", "alpha": "golden", "x": rng.gen::<f64>()}),
        },
        other => panic!("no generator for {other}"),
    }
}

fn random_element(group: GroupId, radius: i64, rng: &mut ChaCha8Rng) -> GroupElement {
    let coords: Vec<i64> = (0..group.arity()).map(|_| rng.gen_range(-radius..=radius)).collect();
    GroupElement::new(group, &coords).unwrap()
}

fn systems() -> Vec<(&'static str, SharedSystem)> {
    catalog()
        .into_iter()
        .map(|entry| {
            let params = if entry.name == "zd_rotation" {
                json!({"alphas": ["golden", "silver"]})
            } else {
                json!({})
            };
            (entry.name, build_system(entry.name, &params).unwrap())
        })
        .collect()
}

#[test]
fn action_law_and_metric_axioms_per_catalog_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, sys) in systems() {
        let group = sys.group();
        // Interval powers are floating point; keep exponents where x^(2^k) stays normal.
        let (radius, law_tol) = if name == "interval_square" {
            (6, 1e-12)
        } else {
            (1_000, 0.0)
        };
        for _ in 0..1_000 {
            let x = sys.parse_point(&random_point(name, &mut rng)).unwrap();
            let y = sys.parse_point(&random_point(name, &mut rng)).unwrap();
            let z = sys.parse_point(&random_point(name, &mut rng)).unwrap();
            let (g, h) = (
                random_element(group, radius, &mut rng),
                random_element(group, radius, &mut rng),
            );

            assert_eq!(act(sys.as_ref(), &group.identity(), &x).unwrap(), x, "{name}");
            let gh = multiply(&g, &h).unwrap();
            let lhs = act(sys.as_ref(), &gh, &x).unwrap();
            let rhs = act(sys.as_ref(), &g, &act(sys.as_ref(), &h, &x).unwrap()).unwrap();
            if law_tol == 0.0 {
                assert_eq!(lhs, rhs, "{name}");
            } else {
                assert!(metric(sys.as_ref(), &lhs, &rhs, TOL).unwrap() <= law_tol, "{name}");
            }

            let dxy = metric(sys.as_ref(), &x, &y, TOL).unwrap();
            assert_eq!(dxy, metric(sys.as_ref(), &y, &x, TOL).unwrap(), "{name}");
            assert!(metric(sys.as_ref(), &x, &x, TOL).unwrap() <= TOL, "{name}");
            assert!(dxy >= 0.0 && dxy <= sys.diameter_bound(), "{name}");
            let dxz = metric(sys.as_ref(), &x, &z, TOL).unwrap();
            let dzy = metric(sys.as_ref(), &z, &y, TOL).unwrap();
            assert!(dxy <= dxz + dzy + 3.0 * TOL, "{name}");
        }
    }
}

#[test]
fn translations_are_exact_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (name, sys) in systems() {
        if !matches!(
            name,
            "rotation" | "zd_rotation" | "heisenberg_torus" | "disjoint_rotations"
        ) {
            continue;
        }
        for _ in 0..1_000 {
            let x = sys.parse_point(&random_point(name, &mut rng)).unwrap();
            let y = sys.parse_point(&random_point(name, &mut rng)).unwrap();
            let g = random_element(sys.group(), 1 << 40, &mut rng);
            let moved = metric(
                sys.as_ref(),
                &act(sys.as_ref(), &g, &x).unwrap(),
                &act(sys.as_ref(), &g, &y).unwrap(),
                TOL,
            );
            assert_eq!(moved.unwrap(), metric(sys.as_ref(), &x, &y, TOL).unwrap(), "{name}");
        }
    }
}

#[test]
fn metric_examples() {
    let rot = CircleRotation::rotation(RotationNumber::GOLDEN);
    let d = metric(&rot, &SystemPoint::circle(0.1), &SystemPoint::circle(0.9), TOL).unwrap();
    assert!((d - 0.2).abs() <= TOL);
    let shift = FullShift::new();
    let zero = SystemPoint::Symbolic(SymbolicPoint::constant(0));
    let one = SystemPoint::Symbolic(SymbolicPoint::constant(1));
    assert!((metric(&shift, &zero, &one, TOL).unwrap() - 1.0).abs() <= TOL);
    let disjoint = build_system("disjoint_rotations", &json!({})).unwrap();
    let p = disjoint.parse_point(&json!({"component": 0, "x": 0.3})).unwrap();
    let q = disjoint.parse_point(&json!({"component": 1, "x": 0.3})).unwrap();
    assert_eq!(metric(disjoint.as_ref(), &p, &q, TOL).unwrap(), 1.0);
    assert!(metric(&rot, &p, &q, TOL).is_err());
}

#[test]
fn symbolic_truncation_bound() {
    let shift = FullShift::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1_000 {
        let u = SymbolicPoint::random(rng.gen());
        let v = SymbolicPoint::random(rng.gen())
            .shifted(rng.gen_range(-100..100))
            .unwrap();
        let k = rng.gen_range(1..50);
        let coarse = shift.truncated_distance(&u, &v, k);
        let fine = shift.truncated_distance(&u, &v, k + 8);
        assert!((fine - coarse).abs() <= 0.5f64.powi(k as i32));
    }
}

#[test]
fn sturmian_orbit_matches_rotation_coding() {
    let alpha = RotationNumber::GOLDEN;
    let a = alpha.value();
    let shift = FullShift::sturmian(alpha);
    for x in [0.0, 0.2, 0.51, 0.93] {
        let point = shift.parse_point(&json!(x)).unwrap();
        let orbit = orbit_sample(&shift, &point, &FiniteSubset::z_range(0, 5)).unwrap();
        assert_eq!(orbit.len(), 6);
        for (k, p) in orbit.iter().enumerate() {
            let SystemPoint::Symbolic(p) = p else { panic!() };
            let k = k as f64;
            let coding = ((x + (k + 1.0) * a).floor() - (x + k * a).floor()) as u8;
            assert_eq!(p.symbol(0), coding, "x = {x}, k = {k}");
        }
        let SystemPoint::Symbolic(p) = &point else { panic!() };
        for k in -2_000i64..2_000 {
            let kf = k as f64;
            let coding = ((x + (kf + 1.0) * a).floor() - (x + kf * a).floor()) as u8;
            assert_eq!(p.symbol(k), coding, "x = {x}, k = {k}");
        }
    }
}

#[test]
fn orbit_order_follows_the_set() {
    let rot = CircleRotation::rotation(RotationNumber::from_f64(0.25));
    let set = FiniteSubset::z_range(0, 3);
    let orbit = orbit_sample(&rot, &SystemPoint::circle(0.0), &set).unwrap();
    let xs: Vec<f64> = orbit.iter().map(|p| p.coordinates()[0]).collect();
    assert_eq!(xs, [0.0, 0.25, 0.5, 0.75]);
    let shift = FullShift::new();
    let x = SymbolicPoint::random(4);
    let orbit = orbit_sample(&shift, &SystemPoint::Symbolic(x.clone()), &FiniteSubset::z_range(-2, 2)).unwrap();
    for (p, n) in orbit.iter().zip(-2..=2) {
        let SystemPoint::Symbolic(p) = p else { panic!() };
        assert!((-20..20).all(|k| p.symbol(k) == x.symbol(k + n)));
    }
}

// Closed form: (1/n) Σ_{k<n} cos 2π(x + kα) = Re(e^{2πix}(1 − e^{2πinα}) / (1 − e^{2πiα})) / n.
fn geometric_cos_average(x: f64, alpha: f64, n: usize) -> f64 {
    use std::f64::consts::TAU;
    let (c, s) = ((TAU * x).cos(), (TAU * x).sin());
    let (cn, sn) = ((TAU * n as f64 * alpha).cos(), (TAU * n as f64 * alpha).sin());
    let (c1, s1) = ((TAU * alpha).cos(), (TAU * alpha).sin());
    let (nr, ni) = (1.0 - cn, -sn);
    let (dr, di) = (1.0 - c1, -s1);
    let den = dr * dr + di * di;
    let (qr, qi) = ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den);
    (c * qr - s * qi) / n as f64
}

#[test]
fn cos_integrals_match_geometric_sum() {
    let alpha = RotationNumber::GOLDEN;
    let rot = CircleRotation::rotation(alpha);
    for x in [0.0, 0.13, 0.5, 0.77] {
        for n in [1, 7, 100, 1000] {
            let mu = empirical_measure(&rot, &SystemPoint::circle(x), &FiniteSubset::z_range(0, n as i64 - 1)).unwrap();
            let got = integrate(&mu, &Observable::cos(1), TOL).unwrap();
            let want = geometric_cos_average(Turn::from_f64(x).to_f64(), alpha.value(), n);
            assert!((got - want).abs() <= 1e-12, "x = {x}, n = {n}: {got} vs {want}");
        }
    }
}

fn random_circle_measure(n: usize, rng: &mut ChaCha8Rng) -> EmpiricalMeasure {
    let atoms = (0..n).map(|_| SystemPoint::circle(rng.gen())).collect();
    EmpiricalMeasure::from_atoms("circle", atoms).unwrap()
}

#[test]
fn rho_metric_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fam = ObservableFamily::for_space(Space::Circle);
    for _ in 0..50 {
        let (a, b, c) = (
            random_circle_measure(20, &mut rng),
            random_circle_measure(20, &mut rng),
            random_circle_measure(20, &mut rng),
        );
        let ab = rho_distance(&a, &b, &fam, 40).unwrap();
        assert!(ab.value >= 0.0);
        assert_eq!(ab.value, rho_distance(&b, &a, &fam, 40).unwrap().value);
        let (ac, cb) = (
            rho_distance(&a, &c, &fam, 40).unwrap(),
            rho_distance(&c, &b, &fam, 40).unwrap(),
        );
        assert!(ab.value <= ac.value + cb.value + 1e-12);
        let short = rho_distance(&a, &b, &fam, 10).unwrap();
        assert!(short.value <= ab.value && ab.value <= short.upper());
    }
}

#[test]
fn integration_is_linear_in_the_observable() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mu = random_circle_measure(100, &mut rng);
    let f = Observable::cos(3);
    let g = Observable::sin(2);
    let (f2, g2) = (f.clone(), g.clone());
    let combo = Observable::custom("2f - g/2", 2.5, move |x| Ok(2.0 * f2.eval(x)? - 0.5 * g2.eval(x)?));
    let lhs = integrate(&mu, &combo, TOL).unwrap();
    let rhs = 2.0 * integrate(&mu, &f, TOL).unwrap() - 0.5 * integrate(&mu, &g, TOL).unwrap();
    assert!((lhs - rhs).abs() <= 1e-12);
}

#[test]
fn families_separate_the_catalog_spaces() {
    let point_pairs: Vec<(Space, SystemPoint, SystemPoint)> = vec![
        (Space::Circle, SystemPoint::circle(0.1), SystemPoint::circle(0.6)),
        (
            Space::Torus(2),
            SystemPoint::Torus(vec![Turn::ZERO, Turn::ZERO]),
            SystemPoint::Torus(vec![Turn::ZERO, Turn::from_f64(0.5)]),
        ),
        (Space::Interval, SystemPoint::Interval(0.2), SystemPoint::Interval(0.8)),
        (
            Space::BinaryShift,
            SystemPoint::Symbolic(SymbolicPoint::constant(0)),
            SystemPoint::Symbolic(SymbolicPoint::constant(0).with_flips(&[-1])),
        ),
        (
            Space::DisjointCircles,
            SystemPoint::tagged(0, SystemPoint::circle(0.2)),
            SystemPoint::tagged(1, SystemPoint::circle(0.2)),
        ),
    ];
    for (space, p, q) in point_pairs {
        let fam = ObservableFamily::for_space(space.clone());
        let mu = EmpiricalMeasure::from_atoms("s", vec![p]).unwrap();
        let nu = EmpiricalMeasure::from_atoms("s", vec![q]).unwrap();
        assert!(rho_distance(&mu, &nu, &fam, 40).unwrap().value > 0.0, "{space:?}");
    }
}
