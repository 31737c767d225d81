//! Experiment configuration: strict JSON, validated before any computation.

use std::path::{Path, PathBuf};

use folner_core::analysis::{
    CirclePairSampler, PairOfPairs, PairSampler, ShiftFlipSampler, ShiftWindowSampler, TraceKind,
    DEFAULT_PAIRS_PER_DELTA, DEFAULT_UE_THRESHOLD,
};
use folner_core::dynamics::{build_system, Space, SymbolicPoint, Turn};
use folner_core::measures::{Observable, DEFAULT_RHO_TERMS};
use folner_core::{FolnerSequence, FolnerSpec, GroupElement, SharedSystem, SystemPoint};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    pub folner: FolnerSpec,
    #[serde(default)]
    pub indices: Vec<usize>,
    pub operation: OperationSpec,
    pub output: OutputSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub name: String,
    #[serde(default = "empty_object")]
    pub params: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationSpec {
    pub name: String,
    #[serde(default = "empty_object")]
    pub params: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    pub stem: String,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::ConfigParse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Observable description for operations that take a test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    Cos { k: i64 },
    Sin { k: i64 },
    Power { k: u32 },
    Identity,
    SymbolAt { position: i64, symbol: u8 },
    Constant { value: f64 },
}

impl ObservableSpec {
    pub fn build(&self) -> Observable {
        match *self {
            ObservableSpec::Cos { k } => Observable::cos(k),
            ObservableSpec::Sin { k } => Observable::sin(k),
            ObservableSpec::Power { k } => Observable::Power(k),
            ObservableSpec::Identity => Observable::identity(),
            ObservableSpec::SymbolAt { position, symbol } => Observable::symbol_at(position, symbol),
            ObservableSpec::Constant { value } => Observable::Constant(value),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectSide {
    Left,
    Right,
    #[default]
    Both,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairParams {
    pub x: Value,
    pub y: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WassersteinParams {
    pub x: Value,
    pub y: Value,
    pub n: usize,
    #[serde(default)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusParams {
    #[serde(default = "default_trace_kind")]
    pub kind: TraceKind,
    pub deltas: Vec<f64>,
    pub sampler: String,
    #[serde(default = "default_pairs_per_delta")]
    pub pairs_per_delta: usize,
}

fn default_trace_kind() -> TraceKind {
    TraceKind::Wasserstein
}

fn default_pairs_per_delta() -> usize {
    DEFAULT_PAIRS_PER_DELTA
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem12Params {
    #[serde(default)]
    pub pairs: Vec<[Value; 4]>,
    #[serde(default)]
    pub random_pairs: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniqueErgodicityParams {
    #[serde(default)]
    pub points: Vec<Value>,
    #[serde(default)]
    pub random_points: usize,
    pub n: usize,
    #[serde(default = "default_rho_terms")]
    pub rho_terms: usize,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_rho_terms() -> usize {
    DEFAULT_RHO_TERMS
}

fn default_threshold() -> f64 {
    DEFAULT_UE_THRESHOLD
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericTraceParams {
    pub x: Value,
    #[serde(default = "default_rho_terms")]
    pub rho_terms: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuityParams {
    pub grid: Vec<Value>,
    pub n: usize,
    #[serde(default = "default_rho_terms")]
    pub rho_terms: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformConvergenceParams {
    pub observable: ObservableSpec,
    pub grid: Vec<Value>,
    pub index_pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperednessParams {
    pub upto: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectParams {
    pub generators: Vec<Vec<i64>>,
    #[serde(default)]
    pub side: DefectSide,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtractParams {
    pub constant: String,
    pub count: usize,
    #[serde(default = "default_budget_factor")]
    pub budget_factor: usize,
}

fn default_budget_factor() -> usize {
    folner_core::folner::DEFAULT_BUDGET_FACTOR
}

/// Operation names, in catalog order.
pub const OPERATIONS: &[(&str, &str)] = &[
    ("w_trace", "W(mu_{x,F_n}, mu_{y,F_n}) over the index set; params {x, y}"),
    ("d_trace", "mean orbit distance over the index set; params {x, y}"),
    ("w_aut", "minimum over bijections of F_n, per index; params {x, y}"),
    ("wasserstein", "W(mu_{x,F_n}, mu_{y,F_m}); params {x, y, n, m?}"),
    (
        "modulus_estimate",
        "sampled modulus delta -> sup trace; params {deltas, sampler, kind?, pairs_per_delta?}",
    ),
    (
        "theorem12_check",
        "product-system inequalities; params {pairs?: [[x1,y1,x2,y2]], random_pairs?}",
    ),
    (
        "unique_ergodicity",
        "pairwise W and rho at one index; params {points?, random_points?, n, rho_terms?, threshold?}",
    ),
    (
        "generic_measure_trace",
        "rho between consecutive empirical measures; params {x, rho_terms?}",
    ),
    (
        "measure_map_continuity",
        "rho between adjacent grid points; params {grid, n, rho_terms?}",
    ),
    (
        "uniform_convergence",
        "sup |A_n f - A_m f| over a grid; params {observable, grid, index_pairs}",
    ),
    ("temperedness", "exact tempering ratios for n = 2..upto; params {upto}"),
    (
        "folner_defect",
        "exact defects per index and generator; params {generators, side?}",
    ),
    (
        "extract_tempered",
        "greedy tempered subsequence; params {constant, count, budget_factor?}",
    ),
];

/// A validated operation with parsed points.
#[derive(Clone)]
pub enum Operation {
    WTrace {
        x: SystemPoint,
        y: SystemPoint,
    },
    DTrace {
        x: SystemPoint,
        y: SystemPoint,
    },
    WAut {
        x: SystemPoint,
        y: SystemPoint,
    },
    Wasserstein {
        x: SystemPoint,
        y: SystemPoint,
        n: usize,
        m: usize,
    },
    Modulus {
        params: ModulusParams,
    },
    Theorem12 {
        pairs: Vec<PairOfPairs>,
    },
    UniqueErgodicity {
        points: Vec<SystemPoint>,
        params: UniqueErgodicityParams,
    },
    GenericTrace {
        x: SystemPoint,
        rho_terms: usize,
    },
    Continuity {
        grid: Vec<SystemPoint>,
        n: usize,
        rho_terms: usize,
    },
    UniformConvergence {
        observable: ObservableSpec,
        grid: Vec<SystemPoint>,
        index_pairs: Vec<(usize, usize)>,
    },
    Temperedness {
        upto: usize,
    },
    Defect {
        generators: Vec<GroupElement>,
        side: DefectSide,
    },
    Extract {
        constant: Ratio<u64>,
        count: usize,
        budget_factor: usize,
    },
}

/// Everything needed to run, resolved from an [`ExperimentConfig`].
pub struct Plan {
    pub config: ExperimentConfig,
    pub system: Option<SharedSystem>,
    pub sequence: FolnerSequence,
    pub operation: Operation,
    /// Operation params with defaults filled in, for the report echo.
    pub resolved_params: Value,
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::ConfigInvalid(format!("{path}: {msg}"))
}

fn typed<T: DeserializeOwned + Serialize>(params: &Value) -> Result<(T, Value), CliError> {
    let t: T = serde_json::from_value(params.clone()).map_err(|e| invalid("operation.params", e))?;
    let echo = serde_json::to_value(&t).expect("params serialize");
    Ok((t, echo))
}

pub fn parse_rational(s: &str) -> Option<Ratio<u64>> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: u64 = q.trim().parse().ok()?;
            (q != 0).then_some(())?;
            Some(Ratio::new(p.trim().parse().ok()?, q))
        }
        None => Some(Ratio::from_integer(s.parse().ok()?)),
    }
}

/// Seeded point of the given space.
pub fn random_point(space: &Space, rng: &mut ChaCha8Rng) -> Result<SystemPoint, String> {
    Ok(match space {
        Space::Circle => SystemPoint::Circle(Turn(rng.gen())),
        Space::Torus(d) => SystemPoint::Torus((0..*d).map(|_| Turn(rng.gen())).collect()),
        Space::Interval => SystemPoint::Interval(rng.gen()),
        Space::BinaryShift => SystemPoint::Symbolic(SymbolicPoint::random(rng.gen())),
        Space::DisjointCircles => SystemPoint::tagged(rng.gen_range(0..2), SystemPoint::Circle(Turn(rng.gen()))),
        Space::Product(_) => return Err("random points are not available for product spaces".into()),
    })
}

pub fn sampler_for(name: &str) -> Option<(Box<dyn PairSampler>, Space)> {
    match name {
        "circle" => Some((Box::new(CirclePairSampler), Space::Circle)),
        "shift_flip" => Some((Box::new(ShiftFlipSampler::default()), Space::BinaryShift)),
        "shift_window" => Some((Box::new(ShiftWindowSampler::default()), Space::BinaryShift)),
        _ => None,
    }
}

pub const SAMPLERS: &[&str] = &["circle", "shift_flip", "shift_window"];

fn check_trace_indices(indices: &[usize]) -> Result<(), CliError> {
    if indices.is_empty() {
        return Err(invalid("indices", "this operation needs a nonempty index list"));
    }
    if indices[0] == 0 || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid(
            "indices",
            "indices must start at 1 or later and increase strictly",
        ));
    }
    Ok(())
}

struct Points<'a> {
    sys: &'a SharedSystem,
}

impl Points<'_> {
    fn one(&self, path: &str, v: &Value) -> Result<SystemPoint, CliError> {
        self.sys.parse_point(v).map_err(|e| invalid(path, e))
    }

    fn many(&self, path: &str, vs: &[Value]) -> Result<Vec<SystemPoint>, CliError> {
        vs.iter()
            .enumerate()
            .map(|(i, v)| self.one(&format!("{path}[{i}]"), v))
            .collect()
    }

    fn random(&self, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<SystemPoint>, CliError> {
        let space = self.sys.space();
        (0..count)
            .map(|_| random_point(&space, rng).map_err(|e| invalid("operation.params", e)))
            .collect()
    }
}

impl Plan {
    pub fn validate(config: ExperimentConfig) -> Result<Plan, CliError> {
        if !(config.tolerance > 0.0 && config.tolerance.is_finite()) {
            return Err(invalid("tolerance", "must be positive and finite"));
        }
        if config.output.stem.is_empty() || config.output.stem.contains(['/', '\\']) {
            return Err(invalid(
                "output.stem",
                "must be a nonempty file name without separators",
            ));
        }
        let sequence = config.folner.build().map_err(|e| invalid("folner", e))?;
        let name = config.operation.name.as_str();
        if !OPERATIONS.iter().any(|(op, _)| *op == name) {
            let known: Vec<&str> = OPERATIONS.iter().map(|(op, _)| *op).collect();
            return Err(invalid(
                "operation.name",
                format!("unknown operation `{name}`; known: {}", known.join(", ")),
            ));
        }
        let folner_only = matches!(name, "temperedness" | "folner_defect" | "extract_tempered");
        let system = match (&config.system, folner_only) {
            (Some(s), _) => {
                let sys = build_system(&s.name, &s.params).map_err(|e| invalid("system", e))?;
                if sys.group() != sequence.group() {
                    return Err(invalid(
                        "folner.group",
                        format!(
                            "system {} is acted on by {}, not {}",
                            s.name,
                            sys.group(),
                            sequence.group()
                        ),
                    ));
                }
                Some(sys)
            }
            (None, true) => None,
            (None, false) => return Err(invalid("system", format!("operation {name} needs a system"))),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let params = &config.operation.params;
        let (operation, resolved_params) = match system.as_ref() {
            None => folner_operation(name, params, &sequence)?,
            Some(sys) => {
                let pts = Points { sys };
                match name {
                    "w_trace" | "d_trace" | "w_aut" => {
                        check_trace_indices(&config.indices)?;
                        let (p, echo) = typed::<PairParams>(params)?;
                        let x = pts.one("operation.params.x", &p.x)?;
                        let y = pts.one("operation.params.y", &p.y)?;
                        let op = match name {
                            "w_trace" => Operation::WTrace { x, y },
                            "d_trace" => Operation::DTrace { x, y },
                            _ => Operation::WAut { x, y },
                        };
                        (op, echo)
                    }
                    "wasserstein" => {
                        let (mut p, _) = typed::<WassersteinParams>(params)?;
                        if p.n == 0 || p.m == Some(0) {
                            return Err(invalid("operation.params", "n and m must be at least 1"));
                        }
                        let m = *p.m.get_or_insert(p.n);
                        let x = pts.one("operation.params.x", &p.x)?;
                        let y = pts.one("operation.params.y", &p.y)?;
                        let echo = serde_json::to_value(&p).expect("params serialize");
                        (Operation::Wasserstein { x, y, n: p.n, m }, echo)
                    }
                    "modulus_estimate" => {
                        check_trace_indices(&config.indices)?;
                        let (p, echo) = typed::<ModulusParams>(params)?;
                        let (_, space) = sampler_for(&p.sampler).ok_or_else(|| {
                            invalid(
                                "operation.params.sampler",
                                format!("unknown sampler `{}`; known: {}", p.sampler, SAMPLERS.join(", ")),
                            )
                        })?;
                        if sys.space() != space {
                            return Err(invalid(
                                "operation.params.sampler",
                                format!("sampler {} does not produce points of this system", p.sampler),
                            ));
                        }
                        (Operation::Modulus { params: p }, echo)
                    }
                    "theorem12_check" => {
                        check_trace_indices(&config.indices)?;
                        let (p, echo) = typed::<Theorem12Params>(params)?;
                        let mut pairs = Vec::new();
                        for (i, quad) in p.pairs.iter().enumerate() {
                            let q = pts.many(&format!("operation.params.pairs[{i}]"), quad)?;
                            pairs.push(PairOfPairs::new(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()));
                        }
                        for _ in 0..p.random_pairs {
                            let q = pts.random(4, &mut rng)?;
                            pairs.push(PairOfPairs::new(q[0].clone(), q[1].clone(), q[2].clone(), q[3].clone()));
                        }
                        if pairs.is_empty() {
                            return Err(invalid("operation.params", "give `pairs` or a positive `random_pairs`"));
                        }
                        (Operation::Theorem12 { pairs }, echo)
                    }
                    "unique_ergodicity" => {
                        let (p, echo) = typed::<UniqueErgodicityParams>(params)?;
                        let mut points = pts.many("operation.params.points", &p.points)?;
                        points.extend(pts.random(p.random_points, &mut rng)?);
                        if points.is_empty() {
                            return Err(invalid(
                                "operation.params",
                                "give `points` or a positive `random_points`",
                            ));
                        }
                        check_measure_params(p.n, p.rho_terms)?;
                        (Operation::UniqueErgodicity { points, params: p }, echo)
                    }
                    "generic_measure_trace" => {
                        check_trace_indices(&config.indices)?;
                        let (p, echo) = typed::<GenericTraceParams>(params)?;
                        check_measure_params(1, p.rho_terms)?;
                        let x = pts.one("operation.params.x", &p.x)?;
                        (
                            Operation::GenericTrace {
                                x,
                                rho_terms: p.rho_terms,
                            },
                            echo,
                        )
                    }
                    "measure_map_continuity" => {
                        let (p, echo) = typed::<ContinuityParams>(params)?;
                        check_measure_params(p.n, p.rho_terms)?;
                        let grid = pts.many("operation.params.grid", &p.grid)?;
                        (
                            Operation::Continuity {
                                grid,
                                n: p.n,
                                rho_terms: p.rho_terms,
                            },
                            echo,
                        )
                    }
                    "uniform_convergence" => {
                        let (p, echo) = typed::<UniformConvergenceParams>(params)?;
                        let grid = pts.many("operation.params.grid", &p.grid)?;
                        if grid.is_empty() {
                            return Err(invalid("operation.params.grid", "grid is empty"));
                        }
                        if let Some((n, m)) = p.index_pairs.iter().find(|(n, m)| !(*n >= 1 && n < m)) {
                            return Err(invalid(
                                "operation.params.index_pairs",
                                format!("({n}, {m}) needs 1 <= n < m"),
                            ));
                        }
                        (
                            Operation::UniformConvergence {
                                observable: p.observable,
                                grid,
                                index_pairs: p.index_pairs,
                            },
                            echo,
                        )
                    }
                    _ => folner_operation(name, params, &sequence)?,
                }
            }
        };
        if folner_only && matches!(operation, Operation::Defect { .. }) {
            check_trace_indices(&config.indices)?;
        }
        Ok(Plan {
            config,
            system,
            sequence,
            operation,
            resolved_params,
        })
    }

    /// The config with every default made explicit.
    pub fn echo(&self) -> Value {
        let mut c = self.config.clone();
        c.operation.params = self.resolved_params.clone();
        serde_json::to_value(&c).expect("config serializes")
    }
}

fn check_measure_params(n: usize, rho_terms: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(invalid("operation.params.n", "must be at least 1"));
    }
    if rho_terms == 0 || rho_terms > 60 {
        return Err(invalid("operation.params.rho_terms", "must be in 1..=60"));
    }
    Ok(())
}

fn folner_operation(name: &str, params: &Value, seq: &FolnerSequence) -> Result<(Operation, Value), CliError> {
    match name {
        "temperedness" => {
            let (p, echo) = typed::<TemperednessParams>(params)?;
            if p.upto < 2 {
                return Err(invalid("operation.params.upto", "must be at least 2"));
            }
            Ok((Operation::Temperedness { upto: p.upto }, echo))
        }
        "folner_defect" => {
            let (p, echo) = typed::<DefectParams>(params)?;
            if p.generators.is_empty() {
                return Err(invalid("operation.params.generators", "need at least one generator"));
            }
            let generators = p
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    GroupElement::new(seq.group(), g)
                        .map_err(|e| invalid(&format!("operation.params.generators[{i}]"), e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((
                Operation::Defect {
                    generators,
                    side: p.side,
                },
                echo,
            ))
        }
        "extract_tempered" => {
            let (p, echo) = typed::<ExtractParams>(params)?;
            let constant = parse_rational(&p.constant)
                .filter(|c| *c > Ratio::from_integer(1))
                .ok_or_else(|| {
                    invalid(
                        "operation.params.constant",
                        "expected a rational \"p/q\" or integer above 1",
                    )
                })?;
            if p.count == 0 {
                return Err(invalid("operation.params.count", "must be at least 1"));
            }
            Ok((
                Operation::Extract {
                    constant,
                    count: p.count,
                    budget_factor: p.budget_factor,
                },
                echo,
            ))
        }
        other => Err(invalid("operation.name", format!("operation {other} needs a system"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn config(v: Value) -> Result<Plan, CliError> {
        Plan::validate(ExperimentConfig::parse(&v.to_string())?)
    }

    fn base(op: Value) -> Value {
        json!({
            "system": {"name": "rotation"},
            "folner": {"group": "z", "kind": "z_interval"},
            "indices": [10, 20],
            "operation": op,
            "output": {"stem": "t"}
        })
    }

    #[test]
    fn accepts_and_echoes_defaults() {
        let plan = config(base(
            json!({"name": "modulus_estimate", "params": {"deltas": [0.1], "sampler": "circle"}}),
        ))
        .unwrap();
        let echo = plan.echo();
        assert_eq!(echo["seed"], 0);
        assert_eq!(echo["tolerance"], 1e-9);
        assert_eq!(echo["operation"]["params"]["pairs_per_delta"], 32);
        assert_eq!(echo["operation"]["params"]["kind"], "wasserstein");
    }

    #[test]
    fn rejects_unknown_keys_with_location() {
        let mut v = base(json!({"name": "w_trace", "params": {"x": 0, "y": 0.5}}));
        v["extra"] = json!(1);
        let e = config(v).err().unwrap();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line"), "{e}");

        let e = config(base(json!({"name": "w_trace", "params": {"x": 0, "y": 0.5, "z": 1}})))
            .err()
            .unwrap();
        assert_eq!(e.class(), "config-invalid");
    }

    #[test]
    fn rejects_inconsistent_configs() {
        let bad_group = json!({
            "system": {"name": "rotation"},
            "folner": {"group": "heisenberg", "kind": "heisenberg_box"},
            "indices": [1],
            "operation": {"name": "w_trace", "params": {"x": 0, "y": 0.5}},
            "output": {"stem": "t"}
        });
        assert!(config(bad_group).is_err());
        assert!(config(base(json!({"name": "nope"}))).is_err());
        assert!(config(base(json!({"name": "w_trace", "params": {"x": "left", "y": 0.5}}))).is_err());
        assert!(config(base(
            json!({"name": "modulus_estimate", "params": {"deltas": [0.1], "sampler": "shift_flip"}})
        ))
        .is_err());
        let mut v = base(json!({"name": "w_trace", "params": {"x": 0, "y": 0.5}}));
        v["indices"] = json!([5, 5]);
        assert!(config(v).is_err());
    }

    #[test]
    fn random_points_follow_the_seed() {
        let op = json!({"name": "unique_ergodicity", "params": {"random_points": 3, "n": 10}});
        let a = config(base(op.clone())).unwrap();
        let b = config(base(op)).unwrap();
        match (a.operation, b.operation) {
            (Operation::UniqueErgodicity { points: p, .. }, Operation::UniqueErgodicity { points: q, .. }) => {
                assert_eq!(p, q);
                assert_eq!(p.len(), 3);
            }
            _ => panic!("wrong operation"),
        }
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2"), Some(Ratio::new(3, 2)));
        assert_eq!(parse_rational("4"), Some(Ratio::from_integer(4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
