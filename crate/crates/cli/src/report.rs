//! Machine-readable reports. Field order is declaration order and every
//! map is a `BTreeMap`, so equal inputs give byte-identical JSON.

use std::collections::BTreeMap;

use glab_core::{GermElement, MeroDifferential, SubalgebraBasis, TruncSeries};
use serde::Serialize;

use crate::germfile::{GeneratorSpec, TermSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report<I, V> {
    pub schema_version: u32,
    pub command: &'static str,
    pub input: I,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Invariants>,
    pub verdicts: V,
    pub diagnostics: Vec<String>,
}

impl<I: Serialize, V: Serialize> Report<I, V> {
    pub fn new(
        command: &'static str,
        input: I,
        invariants: Option<Invariants>,
        verdicts: V,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            input,
            invariants,
            verdicts,
            diagnostics: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialise");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub b: usize,
    pub truncation: usize,
    pub delta: usize,
    pub genus: usize,
    pub gap_sequence: Vec<usize>,
    pub conductor_multiplicities: Vec<usize>,
    pub len_r_mod_c: usize,
}

impl Invariants {
    /// Requires a certified truncation.
    pub fn of(r: &SubalgebraBasis) -> glab_core::Result<Self> {
        let c = r.conductor()?;
        Ok(Self {
            b: r.b(),
            truncation: r.truncation(),
            delta: r.delta(),
            genus: r.genus(),
            gap_sequence: r.gap_sequence().dims().to_vec(),
            conductor_multiplicities: c.multiplicities,
            len_r_mod_c: c.len_r_mod_c,
        })
    }
}

/// Terms of branchwise series with 1-based branches.
fn branch_terms(branches: &[TruncSeries]) -> Vec<TermSpec> {
    branches
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            s.terms().map(move |(e, c)| TermSpec {
                branch: i + 1,
                exp: e,
                coeff: c.to_string(),
            })
        })
        .collect()
}

pub fn element_terms(f: &GermElement) -> Vec<TermSpec> {
    branch_terms(f.branches())
}

pub fn generator_specs<'a>(
    gens: impl IntoIterator<Item = (String, &'a GermElement)>,
) -> Vec<GeneratorSpec> {
    gens.into_iter()
        .map(|(name, f)| GeneratorSpec {
            name,
            terms: element_terms(f),
        })
        .collect()
}

/// Pole terms of a differential.
pub fn differential_terms(eta: &MeroDifferential) -> Vec<TermSpec> {
    branch_terms(eta.pole_part().branches())
}

pub fn string_map<'a, V: ToString + 'a>(
    it: impl IntoIterator<Item = (&'a str, &'a V)>,
) -> BTreeMap<String, String> {
    it.into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
