//! Følner sequences, temperedness and greedy tempered subsequences.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::group::{inverse_product_union_size, FiniteSubset, GroupElement, GroupId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `F_n = {0, …, n−1}`
    #[default]
    Forward,
    /// `F_n = {−n+1, …, 0}`
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FolnerKind {
    ZInterval(Direction),
    /// `[−n, n]^d`
    ZdBox,
    /// `|a|, |b| <= n`, `|c| <= n²`
    HeisenbergBox,
    /// User-supplied sets; index `n` is `sets[n − 1]`.
    ExplicitList(Vec<FiniteSubset>),
}

/// Which Følner conditions the sequence is claimed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sides {
    pub left: bool,
    pub right: bool,
}

impl Sides {
    pub const BOTH: Sides = Sides {
        left: true,
        right: true,
    };
    pub const LEFT: Sides = Sides {
        left: true,
        right: false,
    };
}

/// Indexed family `n ↦ F_n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FolnerSequence {
    group: GroupId,
    kind: FolnerKind,
    sides: Sides,
}

impl FolnerSequence {
    pub fn z_interval(direction: Direction) -> Self {
        FolnerSequence {
            group: GroupId::Z,
            kind: FolnerKind::ZInterval(direction),
            sides: Sides::BOTH,
        }
    }

    pub fn zd_box(d: usize) -> Result<Self> {
        Ok(FolnerSequence {
            group: GroupId::zd(d)?,
            kind: FolnerKind::ZdBox,
            sides: Sides::BOTH,
        })
    }

    pub fn heisenberg_box() -> Self {
        FolnerSequence {
            group: GroupId::Heisenberg,
            kind: FolnerKind::HeisenbergBox,
            sides: Sides::BOTH,
        }
    }

    pub fn explicit(group: GroupId, sets: Vec<FiniteSubset>, sides: Sides) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidParameter("explicit Følner list is empty".into()));
        }
        for s in &sets {
            if s.group() != group {
                return Err(Error::GroupMismatch {
                    expected: group,
                    found: s.group(),
                });
            }
            if s.is_empty() {
                return Err(Error::EmptySubset);
            }
        }
        Ok(FolnerSequence {
            group,
            kind: FolnerKind::ExplicitList(sets),
            sides,
        })
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn kind(&self) -> &FolnerKind {
        &self.kind
    }

    pub fn sides(&self) -> Sides {
        self.sides
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            FolnerKind::ZInterval(_) => "z_interval",
            FolnerKind::ZdBox => "zd_box",
            FolnerKind::HeisenbergBox => "heisenberg_box",
            FolnerKind::ExplicitList(_) => "explicit_list",
        }
    }

    /// Number of defined sets, `None` for the unbounded built-in kinds.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match &self.kind {
            FolnerKind::ExplicitList(sets) => Some(sets.len()),
            _ => None,
        }
    }

    /// `F_n` in lexicographic order (explicit lists keep their own order).
    pub fn set(&self, n: usize) -> Result<FiniteSubset> {
        if n == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                len: self.len().unwrap_or(usize::MAX),
            });
        }
        let side = i64::try_from(n).map_err(|_| Error::Overflow("Følner index"))?;
        match &self.kind {
            FolnerKind::ZInterval(Direction::Forward) => Ok(FiniteSubset::z_range(0, side - 1)),
            FolnerKind::ZInterval(Direction::Backward) => Ok(FiniteSubset::z_range(1 - side, 0)),
            FolnerKind::ZdBox => Ok(lattice_box(self.group, &vec![side; self.group.arity()])),
            FolnerKind::HeisenbergBox => {
                let c = side.checked_mul(side).ok_or(Error::Overflow("Følner index"))?;
                Ok(lattice_box(GroupId::Heisenberg, &[side, side, c]))
            }
            FolnerKind::ExplicitList(sets) => sets.get(n - 1).cloned().ok_or(Error::IndexOutOfRange {
                index: n,
                len: sets.len(),
            }),
        }
    }

    /// `{F_{n_1}, F_{n_2}, …}` as an explicit list.
    pub fn subsequence(&self, indices: &[usize]) -> Result<FolnerSequence> {
        let sets = indices.iter().map(|&n| self.set(n)).collect::<Result<Vec<_>>>()?;
        FolnerSequence::explicit(self.group, sets, self.sides)
    }

    pub fn to_spec(&self) -> FolnerSpec {
        let mut params = Map::new();
        match &self.kind {
            FolnerKind::ZInterval(d) => {
                params.insert(
                    "direction".into(),
                    serde_json::to_value(d).expect("direction serializes"),
                );
            }
            FolnerKind::ExplicitList(sets) => {
                let sets: Vec<Vec<Vec<i64>>> = sets.iter().map(FiniteSubset::coords).collect();
                params.insert("sets".into(), serde_json::to_value(sets).expect("coords serialize"));
            }
            FolnerKind::ZdBox | FolnerKind::HeisenbergBox => {}
        }
        FolnerSpec {
            group: self.group,
            kind: self.kind_name().to_string(),
            params: Value::Object(params),
        }
    }
}

/// Box `∏ [−r_k, r_k]` in lexicographic order.
fn lattice_box(group: GroupId, radii: &[i64]) -> FiniteSubset {
    let d = radii.len();
    let mut coords: Vec<i64> = radii.iter().map(|r| -r).collect();
    let mut out = Vec::new();
    loop {
        out.push(GroupElement::new(group, &coords).expect("arity matches"));
        let mut k = d;
        loop {
            if k == 0 {
                return FiniteSubset::from_unique(group, out);
            }
            k -= 1;
            if coords[k] < radii[k] {
                coords[k] += 1;
                break;
            }
            coords[k] = -radii[k];
        }
    }
}

/// JSON form `{"group": ..., "kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FolnerSpec {
    pub group: GroupId,
    pub kind: String,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    Value::Object(Map::new())
}

impl FolnerSpec {
    pub fn build(&self) -> Result<FolnerSequence> {
        let params = match &self.params {
            Value::Object(m) => m.clone(),
            Value::Null => Map::new(),
            _ => return Err(Error::InvalidParameter("Følner params must be an object".into())),
        };
        let allow = |keys: &[&str]| -> Result<()> {
            match params.keys().find(|k| !keys.contains(&k.as_str())) {
                Some(k) => Err(Error::InvalidParameter(format!(
                    "unknown Følner parameter `{k}` for kind {}",
                    self.kind
                ))),
                None => Ok(()),
            }
        };
        let expect_group = |g: GroupId| -> Result<()> {
            if self.group == g {
                Ok(())
            } else {
                Err(Error::GroupMismatch {
                    expected: g,
                    found: self.group,
                })
            }
        };
        match self.kind.as_str() {
            "z_interval" => {
                allow(&["direction"])?;
                expect_group(GroupId::Z)?;
                let direction = match params.get("direction") {
                    Some(v) => serde_json::from_value(v.clone())
                        .map_err(|e| Error::InvalidParameter(format!("direction: {e}")))?,
                    None => Direction::Forward,
                };
                Ok(FolnerSequence::z_interval(direction))
            }
            "zd_box" => {
                allow(&[])?;
                FolnerSequence::zd_box(self.group.arity()).and_then(|s| {
                    if self.group == GroupId::Heisenberg {
                        Err(Error::InvalidParameter("zd_box needs group z or zN".into()))
                    } else {
                        Ok(s)
                    }
                })
            }
            "heisenberg_box" => {
                allow(&[])?;
                expect_group(GroupId::Heisenberg)?;
                Ok(FolnerSequence::heisenberg_box())
            }
            "explicit_list" => {
                allow(&["sets", "sides"])?;
                let raw = params
                    .get("sets")
                    .ok_or_else(|| Error::InvalidParameter("explicit_list needs `sets`".into()))?;
                let sets: Vec<Vec<Vec<i64>>> =
                    serde_json::from_value(raw.clone()).map_err(|e| Error::InvalidParameter(format!("sets: {e}")))?;
                let sides = match params.get("sides") {
                    Some(v) => {
                        serde_json::from_value(v.clone()).map_err(|e| Error::InvalidParameter(format!("sides: {e}")))?
                    }
                    None => Sides::LEFT,
                };
                let sets = sets
                    .iter()
                    .map(|s| FiniteSubset::from_coords(self.group, s))
                    .collect::<Result<Vec<_>>>()?;
                FolnerSequence::explicit(self.group, sets, sides)
            }
            other => Err(Error::Unknown {
                what: "Følner kind",
                name: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemperednessReport {
    pub indices: Vec<usize>,
    /// `|⋃_{k<n} F_k⁻¹ F_n| / |F_n|` per index.
    pub ratios: Vec<Ratio<u64>>,
    /// Maximum ratio (the tempering constant observed so far).
    pub constant: Ratio<u64>,
}

/// Running union bookkeeping: a set contained in an earlier one adds nothing
/// to `⋃ F_k⁻¹ F_n`, so only maximal sets are kept.
#[derive(Default)]
struct MaximalSets {
    sets: Vec<FiniteSubset>,
}

impl MaximalSets {
    fn push(&mut self, s: FiniteSubset) {
        if self.sets.iter().any(|t| s.is_subset_of(t)) {
            return;
        }
        self.sets.retain(|t| !t.is_subset_of(&s));
        self.sets.push(s);
    }

    fn union_size(&self, right: &FiniteSubset) -> Result<usize> {
        let refs: Vec<&FiniteSubset> = self.sets.iter().collect();
        inverse_product_union_size(&refs, right)
    }
}

/// Exact ratios for `n = 2..=upto`.
pub fn temperedness_report(seq: &FolnerSequence, upto: usize) -> Result<TemperednessReport> {
    if upto < 2 {
        return Err(Error::InvalidParameter("temperedness report needs upto >= 2".into()));
    }
    let mut prior = MaximalSets::default();
    prior.push(seq.set(1)?);
    let mut indices = Vec::with_capacity(upto - 1);
    let mut ratios = Vec::with_capacity(upto - 1);
    for n in 2..=upto {
        let current = seq.set(n)?;
        let size = prior.union_size(&current)?;
        indices.push(n);
        ratios.push(Ratio::new(size as u64, current.len() as u64));
        prior.push(current);
    }
    let constant = ratios.iter().copied().max().expect("at least one ratio");
    Ok(TemperednessReport {
        indices,
        ratios,
        constant,
    })
}

pub const DEFAULT_BUDGET_FACTOR: usize = 10;

/// Greedy tempered subsequence with the default search budget.
pub fn extract_tempered_subsequence(seq: &FolnerSequence, c: Ratio<u64>, count: usize) -> Result<Vec<usize>> {
    extract_tempered_subsequence_with_budget(seq, c, count, DEFAULT_BUDGET_FACTOR)
}

/// Picks `n_1 = 1`, then always the smallest `m > n_{j−1}` with
/// `|(⋃_{k<j} F_{n_k})⁻¹ F_m| <= C·|F_m|`, scanning at most
/// `budget_factor · n_{j−1}` candidates per step.
pub fn extract_tempered_subsequence_with_budget(
    seq: &FolnerSequence,
    c: Ratio<u64>,
    count: usize,
    budget_factor: usize,
) -> Result<Vec<usize>> {
    if c <= Ratio::from_integer(1) {
        return Err(Error::InvalidParameter("tempering constant must exceed 1".into()));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    let mut picks = vec![1usize];
    let mut prior = MaximalSets::default();
    prior.push(seq.set(1)?);
    for step in 2..=count {
        let prev = *picks.last().expect("nonempty");
        let budget = budget_factor.max(1) * prev;
        let mut found = None;
        for m in prev + 1..=prev + budget {
            if seq.len().is_some_and(|len| m > len) {
                return Err(Error::BudgetExceeded {
                    step,
                    searched: m - prev - 1,
                });
            }
            let candidate = seq.set(m)?;
            let size = prior.union_size(&candidate)? as u128;
            if size * *c.denom() as u128 <= *c.numer() as u128 * candidate.len() as u128 {
                found = Some((m, candidate));
                break;
            }
        }
        let (m, candidate) = found.ok_or(Error::BudgetExceeded { step, searched: budget })?;
        picks.push(m);
        prior.push(candidate);
    }
    Ok(picks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_sets() {
        let fwd = FolnerSequence::z_interval(Direction::Forward);
        assert_eq!(fwd.set(3).unwrap(), FiniteSubset::z_range(0, 2));
        let back = FolnerSequence::z_interval(Direction::Backward);
        assert_eq!(back.set(3).unwrap(), FiniteSubset::z_range(-2, 0));
        assert!(fwd.set(0).is_err());
    }

    #[test]
    fn box_sizes_and_order() {
        let b = FolnerSequence::zd_box(2).unwrap().set(2).unwrap();
        assert_eq!(b.len(), 25);
        assert_eq!(b.elements()[0].coords(), &[-2, -2]);
        assert_eq!(b.elements()[1].coords(), &[-2, -1]);
        assert!(b.elements().windows(2).all(|w| w[0] < w[1]));
        let h = FolnerSequence::heisenberg_box().set(2).unwrap();
        assert_eq!(h.len(), 5 * 5 * 9);
    }

    #[test]
    fn sizes_nondecreasing() {
        for seq in [
            FolnerSequence::z_interval(Direction::Forward),
            FolnerSequence::zd_box(3).unwrap(),
            FolnerSequence::heisenberg_box(),
        ] {
            let sizes: Vec<usize> = (1..5).map(|n| seq.set(n).unwrap().len()).collect();
            assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");
        }
    }

    #[test]
    fn report_requires_two_indices() {
        let seq = FolnerSequence::z_interval(Direction::Forward);
        assert!(temperedness_report(&seq, 1).is_err());
        let r = temperedness_report(&seq, 2).unwrap();
        assert_eq!(r.ratios, vec![Ratio::from_integer(1)]);
    }

    #[test]
    fn extraction_count_one_and_bad_constant() {
        let seq = FolnerSequence::z_interval(Direction::Forward);
        assert_eq!(
            extract_tempered_subsequence(&seq, Ratio::new(3, 2), 1).unwrap(),
            vec![1]
        );
        assert!(extract_tempered_subsequence(&seq, Ratio::from_integer(1), 3).is_err());
    }

    #[test]
    fn exhausted_explicit_list_reports_budget() {
        let sets = vec![FiniteSubset::z_range(0, 0), FiniteSubset::z_range(100, 100)];
        let seq = FolnerSequence::explicit(GroupId::Z, sets, Sides::LEFT).unwrap();
        let err = extract_tempered_subsequence(&seq, Ratio::new(3, 2), 3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { step: 3, .. }), "{err:?}");
    }

    #[test]
    fn spec_round_trip() {
        let seqs = vec![
            FolnerSequence::z_interval(Direction::Backward),
            FolnerSequence::zd_box(2).unwrap(),
            FolnerSequence::heisenberg_box(),
            FolnerSequence::explicit(GroupId::Z, vec![FiniteSubset::z_range(0, 1)], Sides::LEFT).unwrap(),
        ];
        for seq in seqs {
            let json = serde_json::to_string(&seq.to_spec()).unwrap();
            let back: FolnerSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(back.build().unwrap(), seq, "{json}");
        }
    }

    #[test]
    fn spec_rejects_unknown_params_and_mismatched_groups() {
        let bad: FolnerSpec = serde_json::from_str(r#"{"group":"z","kind":"z_interval","params":{"step":2}}"#).unwrap();
        assert!(bad.build().is_err());
        let bad: FolnerSpec = serde_json::from_str(r#"{"group":"z2","kind":"heisenberg_box"}"#).unwrap();
        assert!(bad.build().is_err());
        assert!(serde_json::from_str::<FolnerSpec>(r#"{"group":"z","kind":"z_interval","extra":1}"#).is_err());
    }
}
