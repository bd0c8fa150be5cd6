//! `glab theta`: theta-characteristic parity counts at a singular point.

use std::fmt::Write as _;

use glab_core::families::{instantiate, CrimpingParams, FamilyId};
use glab_core::theta::{implied_component, parity_report, ThetaLocalData};
use serde::Serialize;

use crate::error::CliResult;
use crate::germfile::GermFile;
use crate::report::{Invariants, Report};

use super::analyze::certified_germ;
use super::{Outcome, ParityVerdict};

/// Where the germ came from: a file or a simplified family member.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaInput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<GermFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub g_tilde: u32,
    pub beta: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaVerdicts {
    #[serde(flatten)]
    pub counts: ParityVerdict,
    /// `2^(2 g~ + beta)`.
    pub total: u128,
    /// Parity label for the rational compactification (`g~ = beta = 0`).
    pub implied_component: Option<String>,
}

pub type ThetaReport = Report<ThetaInput, ThetaVerdicts>;

pub enum ThetaSource {
    File(GermFile),
    Family { id: FamilyId, b: usize, k: usize },
}

/// `g_tilde` and `beta` override the file's values; both default to 0.
pub fn theta(
    source: ThetaSource,
    g_tilde: Option<u32>,
    beta: Option<u32>,
) -> CliResult<ThetaReport> {
    let (r, file, family, file_g, file_beta) = match source {
        ThetaSource::File(f) => {
            let g = f.resolve()?;
            (certified_germ(&g)?, Some(f), None, g.g_tilde, g.beta)
        }
        ThetaSource::Family { id, b, k } => {
            let inst = instantiate(id, b, &CrimpingParams::simplified(id, b), k)?;
            (inst.germ()?, None, Some(format!("{id} b={b}")), 0, 0)
        }
    };
    let (g_tilde, beta) = (g_tilde.unwrap_or(file_g), beta.unwrap_or(file_beta));
    let invariants = Invariants::of(&r)?;
    let data = ThetaLocalData::from_germ(r.clone(), g_tilde, beta)?;
    let p = parity_report(&data)?;
    let counts = ParityVerdict::new(&data, &p);
    let implied = implied_component(&r).ok().map(|c| c.to_string());
    let total = p.even_count + p.odd_count;
    let mut report = Report::new(
        "theta",
        ThetaInput {
            file,
            family,
            g_tilde,
            beta,
        },
        Some(invariants),
        ThetaVerdicts {
            counts,
            total,
            implied_component: implied,
        },
    );
    if !p.l_identically_zero {
        report
            .diagnostics
            .push("l is not identically zero: the counts split evenly".into());
    }
    Ok(report)
}

pub fn render(report: &ThetaReport) -> String {
    let v = &report.verdicts;
    let mut s = String::new();
    let _ = writeln!(s, "{}", v.counts.render());
    let _ = writeln!(s, "total 2^{} = {}", v.counts.j2_exponent, v.total);
    if let Some(c) = &v.implied_component {
        let _ = writeln!(s, "rational compactification parity: {c}");
    }
    for d in &report.diagnostics {
        let _ = writeln!(s, "note: {d}");
    }
    s
}

pub fn run(source: ThetaSource, g_tilde: Option<u32>, beta: Option<u32>) -> CliResult<Outcome> {
    let report = theta(source, g_tilde, beta)?;
    Ok(Outcome {
        json: report.to_json(),
        text: render(&report),
        code: 0,
    })
}
