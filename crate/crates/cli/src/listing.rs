//! `catalog`: systems, Følner kinds and operations.

use folner_core::dynamics::{catalog, CatalogEntry};
use serde::Serialize;
use serde_json::Value;

use crate::config::{OPERATIONS, SAMPLERS};
use crate::verify::suite_names;

#[derive(Debug, Clone, Serialize)]
pub struct FolnerKindEntry {
    pub name: &'static str,
    pub groups: &'static str,
    pub params: &'static str,
    pub sets: &'static str,
}

pub fn folner_kinds() -> Vec<FolnerKindEntry> {
    vec![
        FolnerKindEntry {
            name: "z_interval",
            groups: "z",
            params: "direction: \"forward\" (default) | \"backward\"",
            sets: "{0..n-1} or {-n+1..0}",
        },
        FolnerKindEntry {
            name: "zd_box",
            groups: "z, zN",
            params: "none",
            sets: "[-n, n]^d",
        },
        FolnerKindEntry {
            name: "heisenberg_box",
            groups: "heisenberg",
            params: "none",
            sets: "|a|, |b| <= n, |c| <= n^2",
        },
        FolnerKindEntry {
            name: "explicit_list",
            groups: "any",
            params: "sets: [[coords...]...] per index; sides?: {left, right}",
            sets: "F_n = sets[n-1]",
        },
    ]
}

#[derive(Serialize)]
struct Listing {
    systems: Vec<CatalogEntry>,
    folner_kinds: Vec<FolnerKindEntry>,
    operations: Vec<Value>,
    samplers: &'static [&'static str],
    suites: Vec<&'static str>,
}

fn listing() -> Listing {
    Listing {
        systems: catalog(),
        folner_kinds: folner_kinds(),
        operations: OPERATIONS
            .iter()
            .map(|(name, about)| serde_json::json!({"name": name, "description": about}))
            .collect(),
        samplers: SAMPLERS,
        suites: suite_names(),
    }
}

pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&listing()).expect("catalog serializes")
}

pub fn catalog_text() -> String {
    let l = listing();
    let mut out = String::from("systems:\n");
    for s in &l.systems {
        out.push_str(&format!("  {:<20} group {:<11} {}\n", s.name, s.group, s.summary));
        for p in &s.params {
            let default = p.default.map(|d| format!(" (default {d})")).unwrap_or_default();
            out.push_str(&format!("      {}: {}{default}\n", p.name, p.ty));
        }
        out.push_str(&format!("      point: {}\n", s.point_format));
    }
    out.push_str("\nfolner kinds:\n");
    for k in &l.folner_kinds {
        out.push_str(&format!(
            "  {:<20} groups {:<11} F_n = {}\n      params: {}\n",
            k.name, k.groups, k.sets, k.params
        ));
    }
    out.push_str("\noperations:\n");
    for (name, about) in OPERATIONS {
        out.push_str(&format!("  {name:<24} {about}\n"));
    }
    out.push_str(&format!("\nsamplers: {}\n", l.samplers.join(", ")));
    out.push_str(&format!("verify suites: {}\n", l.suites.join(", ")));
    out
}
