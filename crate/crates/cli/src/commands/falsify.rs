//! `glab falsify`: random search for Gorenstein germs with a gap profile.

use std::fmt::Write as _;

use glab_core::families::falsify;
use serde::Serialize;

use crate::error::CliResult;
use crate::germfile::GeneratorSpec;
use crate::report::{generator_specs, Report};

use super::{with_jobs, Outcome};

#[derive(Clone, Debug, Serialize)]
pub struct FalsifyInput {
    pub profile: Vec<usize>,
    pub branches: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hit {
    pub index: usize,
    pub truncation: usize,
    pub len_r_mod_c: usize,
    pub delta: usize,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FalsifyVerdicts {
    pub finding: String,
    pub realised: usize,
    pub exhausted: usize,
    pub gorenstein: usize,
    pub first_hit: Option<Hit>,
}

pub type FalsifyReport = Report<FalsifyInput, FalsifyVerdicts>;

pub fn run_falsify(
    profile: &[usize],
    b: usize,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> CliResult<FalsifyReport> {
    let out = with_jobs(jobs, || falsify(profile, b, samples, seed))??;
    let finding = match &out.first_hit {
        Some(h) => format!("Gorenstein germ found at sample {}", h.index),
        None => format!("none found in {samples} samples"),
    };
    let first_hit = out.first_hit.as_ref().map(|h| Hit {
        index: h.index,
        truncation: h.truncation,
        len_r_mod_c: h.certificate.0,
        delta: h.certificate.1,
        generators: generator_specs(
            h.generators
                .iter()
                .enumerate()
                .map(|(i, g)| (format!("g{}", i + 1), g)),
        ),
    });
    let mut report = Report::new(
        "falsify",
        FalsifyInput {
            profile: out.profile.clone(),
            branches: b,
            samples,
            seed,
        },
        None,
        FalsifyVerdicts {
            finding,
            realised: out.realised,
            exhausted: out.exhausted(),
            gorenstein: out.gorenstein,
            first_hit,
        },
    );
    if let Some(w) = out.exhaustion_warning() {
        report.diagnostics.push(format!(
            "warning: {w} ({} of {samples} samples)",
            out.exhausted()
        ));
    }
    Ok(report)
}

pub fn render(report: &FalsifyReport) -> String {
    let v = &report.verdicts;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "profile {:?} on {} branches, seed {}: {}",
        report.input.profile, report.input.branches, report.input.seed, v.finding
    );
    let _ = writeln!(
        s,
        "realised {}, exhausted {}, gorenstein {}",
        v.realised, v.exhausted, v.gorenstein
    );
    if let Some(h) = &v.first_hit {
        let _ = writeln!(
            s,
            "hit at sample {} (K = {}, len(R/c) = delta = {}):",
            h.index, h.truncation, h.delta
        );
        for g in &h.generators {
            let _ = writeln!(
                s,
                "  {} = {}",
                g.name,
                super::analyze::render_terms(&g.terms)
            );
        }
    }
    for d in &report.diagnostics {
        let _ = writeln!(s, "{d}");
    }
    s
}

/// Reports facts only: the exit code is 0 whether or not a germ was found.
pub fn run(
    profile: &[usize],
    b: usize,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> CliResult<Outcome> {
    let report = run_falsify(profile, b, samples, seed, jobs)?;
    Ok(Outcome {
        json: report.to_json(),
        text: render(&report),
        code: 0,
    })
}
