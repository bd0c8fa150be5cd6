//! `glab verify-family` and `glab table`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use glab_core::dualizing::stratum_signature;
use glab_core::families::{
    crimping_shape, instantiate, verify_instance, CrimpingParams, FamilyId, FamilyInstance,
};
use glab_core::theta::implied_component;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliResult, EXIT_VERIFICATION_FAILED};
use crate::report::{string_map, Report};

use super::{with_jobs, Outcome};

#[derive(Clone, Debug, Serialize)]
pub struct VerifyInput {
    pub family: String,
    pub branches: usize,
    pub samples: usize,
    pub seed: u64,
    pub truncation: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    pub gap_sequence: Vec<usize>,
    pub stratum: Vec<u64>,
    pub component: String,
    pub crimping_shape: [usize; 2],
    pub conductor_multiplicities: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckVerdict {
    pub name: &'static str,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleVerdict {
    pub index: usize,
    pub params: BTreeMap<String, String>,
    pub passed: bool,
    pub checks: Vec<CheckVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyVerdicts {
    pub predicted: Prediction,
    pub all_passed: bool,
    pub passed: usize,
    pub failed: usize,
    pub samples: Vec<SampleVerdict>,
}

pub type VerifyReport = Report<VerifyInput, VerifyVerdicts>;

/// Crimping parameters of sample `index`: its own ChaCha8 stream under
/// `seed`, so results do not depend on scheduling.
pub fn sample_params(id: FamilyId, b: usize, seed: u64, index: usize) -> CrimpingParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    CrimpingParams::random(id, b, &mut rng)
}

fn verify_sample(id: FamilyId, b: usize, k: usize, seed: u64, index: usize) -> SampleVerdict {
    let params = sample_params(id, b, seed, index);
    let checks = match instantiate(id, b, &params, k) {
        Ok(inst) => verify_instance(&inst)
            .checks
            .into_iter()
            .map(|c| CheckVerdict {
                name: c.name,
                passed: c.passed,
                witness: c.witness,
            })
            .collect(),
        Err(e) => vec![CheckVerdict {
            name: "instantiate",
            passed: false,
            witness: e.to_string(),
        }],
    };
    SampleVerdict {
        index,
        params: string_map(params.iter()),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

pub fn verify_family(
    id: FamilyId,
    b: usize,
    samples: usize,
    seed: u64,
    k: usize,
    jobs: usize,
) -> CliResult<VerifyReport> {
    // rejects b < b_min and uncertifiable K before sampling
    let reference = instantiate(id, b, &CrimpingParams::simplified(id, b), k)?;
    let results: Vec<SampleVerdict> = with_jobs(jobs, || {
        (0..samples)
            .into_par_iter()
            .map(|i| verify_sample(id, b, k, seed, i))
            .collect()
    })?;
    let passed = results.iter().filter(|s| s.passed).count();
    let p = &reference.predicted;
    Ok(Report::new(
        "verify-family",
        VerifyInput {
            family: id.name().to_string(),
            branches: b,
            samples,
            seed,
            truncation: k,
        },
        None,
        VerifyVerdicts {
            predicted: Prediction {
                gap_sequence: p.gap_sequence.clone(),
                stratum: p.stratum.clone(),
                component: p.component.to_string(),
                crimping_shape: [p.crimping_shape.0, p.crimping_shape.1],
                conductor_multiplicities: p.multiplicities.clone(),
            },
            all_passed: passed == samples,
            passed,
            failed: samples - passed,
            samples: results,
        },
    ))
}

pub fn render_verify(report: &VerifyReport) -> String {
    let v = &report.verdicts;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} with {} branches: {}/{} samples pass (seed {}, K = {})",
        report.input.family,
        report.input.branches,
        v.passed,
        report.input.samples,
        report.input.seed,
        report.input.truncation
    );
    for sample in v.samples.iter().filter(|x| !x.passed) {
        let _ = writeln!(s, "sample {} FAILED with {:?}", sample.index, sample.params);
        for c in sample.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(s, "  {:<24} {}", c.name, c.witness);
        }
    }
    if let Some(first) = v.samples.first() {
        let _ = writeln!(s, "sample 0 witnesses:");
        for c in &first.checks {
            let _ = writeln!(
                s,
                "  {:<24} {}  {}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.witness
            );
        }
    }
    s
}

pub fn run_verify(
    id: FamilyId,
    b: usize,
    samples: usize,
    seed: u64,
    k: usize,
    jobs: usize,
) -> CliResult<Outcome> {
    let report = verify_family(id, b, samples, seed, k, jobs)?;
    Ok(Outcome {
        json: report.to_json(),
        text: render_verify(&report),
        code: if report.verdicts.all_passed {
            0
        } else {
            EXIT_VERIFICATION_FAILED
        },
    })
}

/// One row of the classification table, recomputed from the simplified
/// member with the fewest branches.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub family: String,
    pub stratum: String,
    pub b_min: usize,
    pub gap_sequence: Vec<usize>,
    pub delta: usize,
    pub genus: usize,
    pub gorenstein: bool,
    pub stratum_signature: Option<Vec<u64>>,
    pub parity: String,
    pub crimping_shape: [usize; 2],
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableInput {
    pub truncation: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableVerdicts {
    pub all_verified: bool,
    pub rows: Vec<TableRow>,
}

pub type TableReport = Report<TableInput, TableVerdicts>;

fn table_row(inst: &FamilyInstance) -> CliResult<TableRow> {
    let id = inst.id;
    let r = inst.germ()?;
    let (delta, genus) = r.delta_genus();
    let verified = verify_instance(inst).all_passed();
    Ok(TableRow {
        family: id.name().to_string(),
        stratum: id.stratum_name().to_string(),
        b_min: inst.b,
        gap_sequence: r.gap_sequence().dims().to_vec(),
        delta,
        genus,
        gorenstein: r.is_gorenstein_serre()?.0,
        stratum_signature: stratum_signature(&inst.predicted_eta, genus)
            .ok()
            .map(|s| s.parts),
        parity: implied_component(&r)?.to_string(),
        crimping_shape: {
            let (u, a) = crimping_shape(id, inst.b);
            [u, a]
        },
        verified,
    })
}

pub fn table(k: usize) -> CliResult<TableReport> {
    let rows = FamilyId::ALL
        .iter()
        .map(|&id| {
            let b = id.b_min();
            table_row(&instantiate(id, b, &CrimpingParams::simplified(id, b), k)?)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Report::new(
        "table",
        TableInput { truncation: k },
        None,
        TableVerdicts {
            all_verified: rows.iter().all(|r| r.verified),
            rows,
        },
    ))
}

pub fn render_table(report: &TableReport) -> String {
    let list = |xs: &[usize]| {
        let parts: Vec<String> = xs.iter().map(usize::to_string).collect();
        format!("[{}]", parts.join(","))
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<8} {:<12} {:>5}  {:<12} {:>5} {:>5}  {:<10} {:<10} {:<7} {:<9} verified",
        "family",
        "stratum",
        "b_min",
        "gaps",
        "delta",
        "genus",
        "gorenstein",
        "signature",
        "parity",
        "crimping"
    );
    for r in &report.verdicts.rows {
        let sig = r.stratum_signature.as_ref().map_or("-".to_string(), |p| {
            let parts: Vec<String> = p.iter().map(u64::to_string).collect();
            format!("({})", parts.join(","))
        });
        let _ = writeln!(
            s,
            "{:<8} {:<12} {:>5}  {:<12} {:>5} {:>5}  {:<10} {:<10} {:<7} {:<9} {}",
            r.family,
            r.stratum,
            r.b_min,
            list(&r.gap_sequence),
            r.delta,
            r.genus,
            r.gorenstein,
            sig,
            r.parity,
            format!("Gm^{} Ga^{}", r.crimping_shape[0], r.crimping_shape[1]),
            r.verified
        );
    }
    s
}

pub fn run_table(k: usize) -> CliResult<Outcome> {
    let report = table(k)?;
    Ok(Outcome {
        json: report.to_json(),
        text: render_table(&report),
        code: if report.verdicts.all_verified {
            0
        } else {
            EXIT_VERIFICATION_FAILED
        },
    })
}
