//! Checks every predicted property of a family member against computation.

use std::fmt;

use crate::dualizing::{descends, generates, omega_module, stratum_signature};
use crate::error::Result;
use crate::families::{hyperelliptic_involution, FamilyInstance};
use crate::germ::SubalgebraBasis;
use crate::theta::implied_component;

/// One named verification with its outcome and a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, passed: bool, witness: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            witness: witness.into(),
        });
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<24} {}  {}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.witness
            )?;
        }
        Ok(())
    }
}

/// Runs every check on `inst`. Computation errors become failed checks
/// rather than aborting the report.
pub fn verify_instance(inst: &FamilyInstance) -> VerificationReport {
    let mut report = VerificationReport { checks: Vec::new() };
    let r = match inst.germ() {
        Ok(r) => r,
        Err(e) => {
            report.push("closure", false, e.to_string());
            return report;
        }
    };
    verify_germ(inst, &r, &mut report);
    report
}

fn fmt_list<T: fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(T::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn verify_germ(inst: &FamilyInstance, r: &SubalgebraBasis, report: &mut VerificationReport) {
    let predicted = &inst.predicted;
    let gaps = r.gap_sequence();
    report.push(
        "gap_sequence",
        gaps.dims() == predicted.gap_sequence.as_slice(),
        format!(
            "computed {gaps}, predicted {}",
            fmt_list(&predicted.gap_sequence)
        ),
    );
    let (delta, genus) = r.delta_genus();
    report.push(
        "genus",
        genus == 3 && gaps.sum() == genus && gaps.a0() + gaps.sum() == delta,
        format!("delta {delta}, genus {genus}"),
    );

    let conductor = match r.conductor() {
        Ok(c) => c,
        Err(e) => {
            report.push("conductor", false, e.to_string());
            return;
        }
    };
    report.push(
        "gorenstein_serre",
        conductor.len_r_mod_c == delta,
        format!("len(R/c) = {}, delta = {delta}", conductor.len_r_mod_c),
    );
    report.push(
        "conductor",
        conductor.multiplicities == predicted.multiplicities,
        format!(
            "d = {}, predicted {}",
            fmt_list(&conductor.multiplicities),
            fmt_list(&predicted.multiplicities)
        ),
    );
    let split = r.is_decomposable();
    report.push(
        "indecomposable",
        split.is_none(),
        match split {
            None => "no transverse splitting".to_string(),
            Some((left, right)) => format!("splits as {left:?} | {right:?}"),
        },
    );
    match omega_module(r) {
        Ok(w) => report.push(
            "omega_dimension",
            true,
            format!("dim = delta = {}", w.dimension),
        ),
        Err(e) => report.push("omega_dimension", false, e.to_string()),
    }

    let eta = &inst.predicted_eta;
    let descended = descends(eta, r);
    report.push(
        "eta_descends",
        matches!(descended, Ok(true)),
        match &descended {
            Ok(true) => "all residues vanish".to_string(),
            Ok(false) => "some residue is nonzero".to_string(),
            Err(e) => e.to_string(),
        },
    );
    if matches!(descended, Ok(true)) {
        let gen = generates(eta, r);
        report.push(
            "eta_generates",
            matches!(gen, Ok(true)),
            match gen {
                Ok(true) => format!("R eta spans all {delta} pole classes"),
                Ok(false) => "R eta is a proper submodule".to_string(),
                Err(e) => e.to_string(),
            },
        );
    }
    let poles: Vec<usize> = eta.pole_orders().iter().map(|&m| m as usize).collect();
    report.push(
        "pole_orders",
        poles == conductor.multiplicities,
        format!("eta poles {}", fmt_list(&poles)),
    );
    match stratum_signature(eta, genus) {
        Ok(sig) => report.push(
            "stratum",
            sig.parts == predicted.stratum,
            format!("{sig}, predicted {}", inst.id.stratum_name()),
        ),
        Err(e) => report.push("stratum", false, e.to_string()),
    }
    match implied_component(r) {
        Ok(c) => report.push(
            "theta_parity",
            c == predicted.component,
            format!(
                "local theta data gives {c}, predicted {}",
                predicted.component
            ),
        ),
        Err(e) => report.push("theta_parity", false, e.to_string()),
    }

    if let Some(iota) = hyperelliptic_involution(inst) {
        let outcome: Result<(bool, bool)> = (|| {
            let preserves = iota.preserves(r)?;
            let pulled = eta.pull_back(&iota)?.pole_part();
            Ok((preserves, pulled == eta.neg().pole_part()))
        })();
        match outcome {
            Ok((preserves, anti)) => report.push(
                "hyperelliptic_involution",
                preserves && anti,
                format!("involutive, preserves R: {preserves}, iota* eta = -eta: {anti}"),
            ),
            Err(e) => report.push("hyperelliptic_involution", false, e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{instantiate, instantiate_unchecked, CrimpingParams, FamilyId};
    use crate::{rat, DEFAULT_TRUNCATION as K};

    #[test]
    fn simplified_h211_passes() {
        let inst = instantiate(
            FamilyId::H211,
            3,
            &CrimpingParams::simplified(FamilyId::H211, 3),
            K,
        )
        .unwrap();
        let report = verify_instance(&inst);
        assert!(report.all_passed(), "{report}");
        assert_eq!(
            report.get("stratum").unwrap().witness,
            "(2,1,1), predicted H(2,1,1)"
        );
    }

    #[test]
    fn two_cusps_are_odd() {
        let inst = instantiate(
            FamilyId::H22odd,
            2,
            &CrimpingParams::simplified(FamilyId::H22odd, 2),
            K,
        )
        .unwrap();
        let report = verify_instance(&inst);
        assert!(report.all_passed(), "{report}");
        assert!(report
            .get("theta_parity")
            .unwrap()
            .witness
            .starts_with("local theta data gives odd"));
    }

    #[test]
    fn forced_unit_cross_ratio_fails_serre() {
        let mut p = CrimpingParams::simplified(FamilyId::H1111, 4);
        p.set("A3(1,1)", rat(1, 1));
        p.fill_derived(FamilyId::H1111);
        let inst = instantiate_unchecked(FamilyId::H1111, 4, &p, K).unwrap();
        let report = verify_instance(&inst);
        let serre = report.get("gorenstein_serre").unwrap();
        assert!(!serre.passed);
        assert_eq!(serre.witness, "len(R/c) = 4, delta = 6");
    }
}
