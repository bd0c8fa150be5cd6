//! `glab analyze`: full analysis of one germ file.

use std::fmt::Write as _;

use glab_core::dualizing::{descends, find_generator, generates, omega_module, stratum_signature};
use glab_core::germ::closure;
use glab_core::theta::{parity_report, ThetaLocalData};
use glab_core::SubalgebraBasis;
use serde::Serialize;

use crate::error::CliResult;
use crate::germfile::{GermFile, ResolvedGerm, TermSpec};
use crate::report::{differential_terms, Invariants, Report};

use super::{Outcome, ParityVerdict};

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeVerdicts {
    pub gorenstein: bool,
    pub serre_certificate: SerreCertificate,
    /// A transverse splitting into two groups of (1-based) branches.
    pub decomposable: Option<[Vec<usize>; 2]>,
    pub omega_dimension: usize,
    pub differential: DifferentialVerdict,
    pub parity: Option<ParityVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SerreCertificate {
    pub len_r_mod_c: usize,
    pub delta: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialVerdict {
    /// `file` when the germ file supplies one, else `search`.
    pub source: &'static str,
    /// Pole part of the differential examined (absent if the search failed).
    pub terms: Option<Vec<TermSpec>>,
    pub descends: bool,
    pub generates: bool,
    pub search_attempts: Option<usize>,
    pub stratum: Option<Vec<u64>>,
}

pub type AnalyzeReport = Report<GermFile, AnalyzeVerdicts>;

/// Closure of the file's generators, refusing uncertified truncations.
pub fn certified_germ(g: &ResolvedGerm) -> CliResult<SubalgebraBasis> {
    let r = closure(&g.elements(), g.b, g.k)?;
    r.conductor()?;
    Ok(r)
}

pub fn analyze(file: &GermFile) -> CliResult<AnalyzeReport> {
    let g = file.resolve()?;
    let r = certified_germ(&g)?;
    let invariants = Invariants::of(&r)?;
    let mut diagnostics = Vec::new();

    let (gorenstein, (len_r_mod_c, delta)) = r.is_gorenstein_serre()?;
    let decomposable = r.is_decomposable().map(|(left, right)| {
        let one_based = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect();
        [one_based(left), one_based(right)]
    });
    let omega = omega_module(&r)?;

    let (source, eta, attempts) = match &g.differential {
        Some(eta) => ("file", Some(eta.clone()), None),
        None => {
            let search = find_generator(&r)?;
            diagnostics.push(format!("generator search: {}", search.diagnostic));
            ("search", search.generator, Some(search.attempts))
        }
    };
    let mut differential = DifferentialVerdict {
        source,
        terms: eta.as_ref().map(differential_terms),
        descends: false,
        generates: false,
        search_attempts: attempts,
        stratum: None,
    };
    if let Some(eta) = &eta {
        differential.descends = descends(eta, &r)?;
        if differential.descends {
            differential.generates = generates(eta, &r)?;
        } else {
            diagnostics.push("differential does not descend: some residue is nonzero".into());
        }
        if differential.generates {
            match stratum_signature(eta, r.genus()) {
                Ok(sig) => differential.stratum = Some(sig.parts),
                Err(e) => diagnostics.push(e.to_string()),
            }
        }
    }

    let parity = match ThetaLocalData::from_germ(r.clone(), g.g_tilde, g.beta)
        .and_then(|data| parity_report(&data).map(|p| (data, p)))
    {
        Ok((data, p)) => Some(ParityVerdict::new(&data, &p)),
        Err(e) => {
            diagnostics.push(format!("parity: {e}"));
            None
        }
    };

    let mut report = Report::new(
        "analyze",
        file.clone(),
        Some(invariants),
        AnalyzeVerdicts {
            gorenstein,
            serre_certificate: SerreCertificate { len_r_mod_c, delta },
            decomposable,
            omega_dimension: omega.dimension,
            differential,
            parity,
        },
    );
    report.diagnostics = diagnostics;
    Ok(report)
}

pub fn render(report: &AnalyzeReport) -> String {
    let inv = report
        .invariants
        .as_ref()
        .expect("analyze reports carry invariants");
    let v = &report.verdicts;
    let mut s = String::new();
    let list = |xs: &[usize]| {
        let parts: Vec<String> = xs.iter().map(usize::to_string).collect();
        format!("[{}]", parts.join(","))
    };
    let _ = writeln!(s, "branches        {}", inv.b);
    let _ = writeln!(s, "truncation      {}", inv.truncation);
    let _ = writeln!(s, "delta           {}", inv.delta);
    let _ = writeln!(s, "genus           {}", inv.genus);
    let _ = writeln!(s, "gap sequence    {}", list(&inv.gap_sequence));
    let _ = writeln!(
        s,
        "conductor       d = {}",
        list(&inv.conductor_multiplicities)
    );
    let _ = writeln!(
        s,
        "gorenstein      {} (len(R/c) = {}, delta = {})",
        yes_no(v.gorenstein),
        v.serre_certificate.len_r_mod_c,
        v.serre_certificate.delta
    );
    let _ = match &v.decomposable {
        Some([l, r]) => writeln!(s, "decomposable    yes: {} | {}", list(l), list(r)),
        None => writeln!(s, "decomposable    no"),
    };
    let _ = writeln!(s, "dim omega/dt    {}", v.omega_dimension);
    let d = &v.differential;
    let _ = writeln!(
        s,
        "differential    {} ({}): descends {}, generates {}",
        d.terms
            .as_ref()
            .map_or("none".to_string(), |t| render_terms(t)),
        d.source,
        yes_no(d.descends),
        yes_no(d.generates)
    );
    if let Some(st) = &d.stratum {
        let parts: Vec<String> = st.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "stratum         H({})", parts.join(","));
    }
    if let Some(p) = &v.parity {
        let _ = writeln!(s, "theta parity    {}", p.render());
    }
    for d in &report.diagnostics {
        let _ = writeln!(s, "note: {d}");
    }
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub(crate) fn render_terms(terms: &[TermSpec]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|t| format!("{}*t{}^{}", t.coeff, t.branch, t.exp))
        .collect();
    parts.join(" + ")
}

pub fn run(file: &GermFile) -> CliResult<Outcome> {
    let report = analyze(file)?;
    Ok(Outcome {
        json: report.to_json(),
        text: render(&report),
        code: 0,
    })
}
