//! Concrete countable amenable groups and finite subsets of them.
//!
//! Three groups are built in: the integers, the lattices `Z^d` (d >= 2) and
//! the discrete Heisenberg group with law
//! `(a, b, c) · (a', b', c') = (a + a', b + b', c + c' + a·b')`.
//! All arithmetic is checked 64-bit; overflow is an error, never a wrap.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GroupId {
    Z,
    Zd(usize),
    Heisenberg,
}

impl GroupId {
    /// Lattice `Z^d`; `d = 1` normalizes to [`GroupId::Z`].
    pub fn zd(d: usize) -> Result<GroupId> {
        match d {
            0 => Err(Error::InvalidParameter("Z^d needs d >= 1".into())),
            1 => Ok(GroupId::Z),
            d => Ok(GroupId::Zd(d)),
        }
    }

    /// Number of integer coordinates of an element.
    pub fn arity(self) -> usize {
        match self {
            GroupId::Z => 1,
            GroupId::Zd(d) => d,
            GroupId::Heisenberg => 3,
        }
    }

    pub fn is_abelian(self) -> bool {
        !matches!(self, GroupId::Heisenberg)
    }

    pub fn identity(self) -> GroupElement {
        GroupElement {
            group: self,
            coords: SmallVec::from_elem(0, self.arity()),
        }
    }

    fn check(self, other: GroupId) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                expected: self,
                found: other,
            })
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupId::Z => write!(f, "z"),
            GroupId::Zd(d) => write!(f, "z{d}"),
            GroupId::Heisenberg => write!(f, "heisenberg"),
        }
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(GroupId::Z),
            "heisenberg" => Ok(GroupId::Heisenberg),
            _ => s
                .strip_prefix('z')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&d| d >= 1)
                .map(GroupId::zd)
                .unwrap_or_else(|| {
                    Err(Error::Unknown {
                        what: "group",
                        name: s.to_string(),
                    })
                }),
        }
    }
}

impl TryFrom<String> for GroupId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GroupId> for String {
    fn from(g: GroupId) -> String {
        g.to_string()
    }
}

/// An element of one of the built-in groups. Ordering is lexicographic on
/// coordinates (after the group tag).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: GroupId,
    coords: SmallVec<[i64; 3]>,
}

impl GroupElement {
    pub fn new(group: GroupId, coords: &[i64]) -> Result<Self> {
        if coords.len() != group.arity() {
            return Err(Error::Arity {
                group,
                expected: group.arity(),
                found: coords.len(),
            });
        }
        Ok(GroupElement {
            group,
            coords: SmallVec::from_slice(coords),
        })
    }

    pub fn z(k: i64) -> Self {
        GroupElement {
            group: GroupId::Z,
            coords: SmallVec::from_slice(&[k]),
        }
    }

    pub fn heisenberg(a: i64, b: i64, c: i64) -> Self {
        GroupElement {
            group: GroupId::Heisenberg,
            coords: SmallVec::from_slice(&[a, b, c]),
        }
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.group, self.coords.as_slice())
    }
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("group law"))
}

/// Group law of the tagged group.
pub fn multiply(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    a.group.check(b.group)?;
    let coords = match a.group {
        GroupId::Z | GroupId::Zd(_) => a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| add(x, y))
            .collect::<Result<SmallVec<_>>>()?,
        GroupId::Heisenberg => {
            let (x, y) = (&a.coords, &b.coords);
            let twist = x[0].checked_mul(y[1]).ok_or(Error::Overflow("group law"))?;
            SmallVec::from_slice(&[add(x[0], y[0])?, add(x[1], y[1])?, add(add(x[2], y[2])?, twist)?])
        }
    };
    Ok(GroupElement { group: a.group, coords })
}

pub fn inverse(g: &GroupElement) -> Result<GroupElement> {
    let neg = |v: i64| v.checked_neg().ok_or(Error::Overflow("inverse"));
    let coords = match g.group {
        GroupId::Z | GroupId::Zd(_) => g.coords.iter().map(|&v| neg(v)).collect::<Result<SmallVec<_>>>()?,
        GroupId::Heisenberg => {
            let (a, b, c) = (g.coords[0], g.coords[1], g.coords[2]);
            let ab = a.checked_mul(b).ok_or(Error::Overflow("inverse"))?;
            SmallVec::from_slice(&[neg(a)?, neg(b)?, add(neg(c)?, ab)?])
        }
    };
    Ok(GroupElement { group: g.group, coords })
}

/// A finite nonempty-or-empty subset of a group with a fixed enumeration
/// order. Elements are distinct and share one group.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSubset {
    group: GroupId,
    elements: Vec<GroupElement>,
}

impl FiniteSubset {
    pub fn new(group: GroupId, elements: Vec<GroupElement>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(elements.len());
        for e in &elements {
            group.check(e.group)?;
            if !seen.insert(e) {
                return Err(Error::DuplicateElement);
            }
        }
        Ok(FiniteSubset { group, elements })
    }

    /// Builds from coordinate tuples, keeping the given order.
    pub fn from_coords(group: GroupId, coords: &[Vec<i64>]) -> Result<Self> {
        let elements = coords
            .iter()
            .map(|c| GroupElement::new(group, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, elements)
    }

    /// Integers `lo..=hi` in increasing order.
    pub fn z_range(lo: i64, hi: i64) -> Self {
        FiniteSubset {
            group: GroupId::Z,
            elements: (lo..=hi).map(GroupElement::z).collect(),
        }
    }

    pub(crate) fn from_unique(group: GroupId, elements: Vec<GroupElement>) -> Self {
        FiniteSubset { group, elements }
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elements.iter()
    }

    pub fn to_set(&self) -> HashSet<&GroupElement> {
        self.elements.iter().collect()
    }

    pub fn is_subset_of(&self, other: &FiniteSubset) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let set = other.to_set();
        self.elements.iter().all(|e| set.contains(e))
    }

    /// Same elements in lexicographic order.
    pub fn sorted(mut self) -> Self {
        self.elements.sort();
        self
    }

    /// `{f⁻¹ : f ∈ F}` in the image order.
    pub fn inverse_set(&self) -> Result<FiniteSubset> {
        let elements = self.elements.iter().map(inverse).collect::<Result<Vec<_>>>()?;
        Ok(FiniteSubset::from_unique(self.group, elements))
    }

    pub fn coords(&self) -> Vec<Vec<i64>> {
        self.elements.iter().map(|e| e.coords().to_vec()).collect()
    }
}

impl fmt::Debug for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elements.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a FiniteSubset {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;
    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// `gF`, with `g·f` at the position of `f`.
pub fn translate_left(g: &GroupElement, set: &FiniteSubset) -> Result<FiniteSubset> {
    set.group.check(g.group)?;
    let elements = set.iter().map(|f| multiply(g, f)).collect::<Result<Vec<_>>>()?;
    Ok(FiniteSubset::from_unique(set.group, elements))
}

/// `Fg`, with `f·g` at the position of `f`.
pub fn translate_right(set: &FiniteSubset, g: &GroupElement) -> Result<FiniteSubset> {
    set.group.check(g.group)?;
    let elements = set.iter().map(|f| multiply(f, g)).collect::<Result<Vec<_>>>()?;
    Ok(FiniteSubset::from_unique(set.group, elements))
}

/// `{a·b : a ∈ A, b ∈ B}` in lexicographic order.
pub fn product_set(a: &FiniteSubset, b: &FiniteSubset) -> Result<FiniteSubset> {
    a.group.check(b.group)?;
    let mut out = HashSet::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.insert(multiply(x, y)?);
        }
    }
    let mut elements: Vec<_> = out.into_iter().collect();
    elements.sort();
    Ok(FiniteSubset::from_unique(a.group, elements))
}

pub fn symmetric_difference_size(a: &FiniteSubset, b: &FiniteSubset) -> Result<usize> {
    a.group.check(b.group)?;
    let sb = b.to_set();
    let common = a.iter().filter(|e| sb.contains(e)).count();
    Ok(a.len() + b.len() - 2 * common)
}

/// `|gF Δ F| / |F|`.
pub fn folner_defect_left(set: &FiniteSubset, g: &GroupElement) -> Result<Ratio<u64>> {
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    let moved = translate_left(g, set)?;
    let diff = symmetric_difference_size(&moved, set)?;
    Ok(Ratio::new(diff as u64, set.len() as u64))
}

/// `|F Δ Fg| / |F|`.
pub fn folner_defect_right(set: &FiniteSubset, g: &GroupElement) -> Result<Ratio<u64>> {
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    let moved = translate_right(set, g)?;
    let diff = symmetric_difference_size(set, &moved)?;
    Ok(Ratio::new(diff as u64, set.len() as u64))
}

/// Largest dense grid used by the abelian fast path, in cells.
const DENSE_LIMIT: u128 = 1 << 28;

/// `|⋃_k A_k⁻¹ B|`.
pub fn inverse_product_union_size(lefts: &[&FiniteSubset], right: &FiniteSubset) -> Result<usize> {
    for a in lefts {
        right.group.check(a.group)?;
    }
    if lefts.is_empty() || right.is_empty() || lefts.iter().all(|a| a.is_empty()) {
        return Ok(0);
    }
    if right.group.is_abelian() {
        if let Some(n) = dense_difference_union(lefts, right)? {
            return Ok(n);
        }
    }
    let mut out = HashSet::new();
    for a in lefts {
        for x in a.iter() {
            let xi = inverse(x)?;
            for y in right {
                out.insert(multiply(&xi, y)?);
            }
        }
    }
    Ok(out.len())
}

/// Abelian case: `a⁻¹b = b − a`, marked in a bitmap over the bounding box.
/// Returns `None` when the box is too large.
fn dense_difference_union(lefts: &[&FiniteSubset], right: &FiniteSubset) -> Result<Option<usize>> {
    let d = right.group.arity();
    let bounds = |sets: &mut dyn Iterator<Item = &GroupElement>| {
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for e in sets {
            for (k, &c) in e.coords().iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        (lo, hi)
    };
    let (alo, ahi) = bounds(&mut lefts.iter().flat_map(|a| a.iter()));
    let (blo, bhi) = bounds(&mut right.iter());
    let mut origin = Vec::with_capacity(d);
    let mut extent = Vec::with_capacity(d);
    let mut cells: u128 = 1;
    for k in 0..d {
        let lo = blo[k] as i128 - ahi[k] as i128;
        let hi = bhi[k] as i128 - alo[k] as i128;
        if lo < i64::MIN as i128 || hi > i64::MAX as i128 {
            return Err(Error::Overflow("group law"));
        }
        let w = (hi - lo + 1) as u128;
        cells = cells.saturating_mul(w);
        origin.push(lo);
        extent.push(w);
    }
    if cells > DENSE_LIMIT {
        return Ok(None);
    }
    let mut bits = vec![0u64; (cells as usize).div_ceil(64)];
    let mut count = 0usize;
    for a in lefts {
        for x in a.iter() {
            for y in right {
                let mut idx: u128 = 0;
                for k in 0..d {
                    let c = y.coords()[k] as i128 - x.coords()[k] as i128 - origin[k];
                    idx = idx * extent[k] + c as u128;
                }
                let (word, bit) = ((idx / 64) as usize, idx % 64);
                if bits[word] & (1 << bit) == 0 {
                    bits[word] |= 1 << bit;
                    count += 1;
                }
            }
        }
    }
    Ok(Some(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: i64, b: i64, c: i64) -> GroupElement {
        GroupElement::heisenberg(a, b, c)
    }

    #[test]
    fn integer_law() {
        assert_eq!(
            multiply(&GroupElement::z(3), &GroupElement::z(5)).unwrap(),
            GroupElement::z(8)
        );
        assert_eq!(inverse(&GroupElement::z(4)).unwrap(), GroupElement::z(-4));
        let g = GroupElement::new(GroupId::Zd(2), &[2, -1]).unwrap();
        assert_eq!(inverse(&g).unwrap().coords(), &[-2, 1]);
    }

    #[test]
    fn heisenberg_law_is_noncommutative() {
        assert_eq!(multiply(&h(1, 0, 0), &h(0, 1, 0)).unwrap(), h(1, 1, 1));
        assert_eq!(multiply(&h(0, 1, 0), &h(1, 0, 0)).unwrap(), h(1, 1, 0));
        assert_eq!(inverse(&h(2, 3, 5)).unwrap(), h(-2, -3, -5 + 6));
    }

    #[test]
    fn overflow_is_reported() {
        let big = GroupElement::z(i64::MAX);
        assert_eq!(multiply(&big, &GroupElement::z(1)), Err(Error::Overflow("group law")));
        assert!(inverse(&GroupElement::z(i64::MIN)).is_err());
        assert!(multiply(&h(i64::MAX / 2, 0, 0), &h(0, 3, 0)).is_err());
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let err = multiply(&GroupElement::z(1), &h(0, 0, 0)).unwrap_err();
        assert!(matches!(err, Error::GroupMismatch { .. }));
        assert!(GroupElement::new(GroupId::Zd(2), &[1]).is_err());
    }

    #[test]
    fn group_id_round_trips_through_strings() {
        for g in [GroupId::Z, GroupId::Zd(2), GroupId::Zd(5), GroupId::Heisenberg] {
            assert_eq!(g.to_string().parse::<GroupId>().unwrap(), g);
        }
        assert_eq!("z1".parse::<GroupId>().unwrap(), GroupId::Z);
        assert!("z0".parse::<GroupId>().is_err());
        assert!("free2".parse::<GroupId>().is_err());
    }

    #[test]
    fn translation_examples() {
        let f = FiniteSubset::z_range(0, 2);
        let moved = translate_left(&GroupElement::z(1), &f).unwrap();
        assert_eq!(moved, FiniteSubset::z_range(1, 3));
        assert_eq!(translate_left(&GroupElement::z(0), &f).unwrap(), f);

        let f = FiniteSubset::new(GroupId::Heisenberg, vec![h(0, 0, 0), h(0, 1, 0)]).unwrap();
        let moved = translate_left(&h(1, 0, 0), &f).unwrap();
        assert_eq!(moved.elements(), &[h(1, 0, 0), h(1, 1, 1)]);
    }

    #[test]
    fn subsets_reject_duplicates_and_mixed_groups() {
        assert_eq!(
            FiniteSubset::new(GroupId::Z, vec![GroupElement::z(1), GroupElement::z(1)]),
            Err(Error::DuplicateElement)
        );
        assert!(FiniteSubset::new(GroupId::Z, vec![h(0, 0, 0)]).is_err());
    }

    #[test]
    fn interval_defects() {
        for n in [1i64, 2, 7, 100] {
            let f = FiniteSubset::z_range(0, n - 1);
            let expected = Ratio::new(2, n as u64);
            assert_eq!(folner_defect_left(&f, &GroupElement::z(1)).unwrap(), expected);
            assert_eq!(folner_defect_right(&f, &GroupElement::z(-1)).unwrap(), expected);
        }
        let empty = FiniteSubset::z_range(1, 0);
        assert_eq!(folner_defect_left(&empty, &GroupElement::z(1)), Err(Error::EmptySubset));
    }

    #[test]
    fn dense_and_hashed_unions_agree() {
        let a = FiniteSubset::z_range(-3, 5);
        let b = FiniteSubset::z_range(10, 14);
        let c = FiniteSubset::z_range(0, 0);
        let dense = inverse_product_union_size(&[&a, &c], &b).unwrap();
        let mut naive = HashSet::new();
        for s in [&a, &c] {
            for x in s {
                for y in &b {
                    naive.insert(y.coords()[0] - x.coords()[0]);
                }
            }
        }
        assert_eq!(dense, naive.len());
    }
}
