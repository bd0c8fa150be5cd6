//! The JSON germ description read by `analyze` and `theta`.
//!
//! Rationals are strings `"p/q"` so that no float ever enters the pipeline.
//! Branch indices are 1-based.

use std::collections::BTreeMap;
use std::path::Path;

use glab_core::{parse_rational, GermElement, MeroDifferential, Rational, DEFAULT_TRUNCATION};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable overriding the default truncation order.
pub const TRUNCATION_ENV: &str = "GLAB_DEFAULT_K";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermFile {
    pub branches: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Genus of the normalisation of a compactification (theta counts only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_tilde: Option<u32>,
    /// Torus rank of the generalised Jacobian (theta counts only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<u32>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differential: Option<Vec<TermSpec>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub terms: Vec<TermSpec>,
}

/// `coeff * t_branch^exp`; `coeff` is a rational string or a parameter
/// name, optionally preceded by `-`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub branch: usize,
    pub exp: i64,
    pub coeff: String,
}

/// A validated germ file with every coefficient evaluated.
#[derive(Clone, Debug)]
pub struct ResolvedGerm {
    pub b: usize,
    pub k: usize,
    pub generators: Vec<(String, GermElement)>,
    pub differential: Option<MeroDifferential>,
    pub g_tilde: u32,
    pub beta: u32,
}

impl ResolvedGerm {
    pub fn elements(&self) -> Vec<GermElement> {
        self.generators.iter().map(|(_, g)| g.clone()).collect()
    }
}

/// `GLAB_DEFAULT_K` if set to a positive integer, else 12.
pub fn default_truncation() -> CliResult<usize> {
    match std::env::var(TRUNCATION_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(CliError::invalid(
                TRUNCATION_ENV,
                format!("{v:?} is not a positive integer"),
            )),
        },
        Err(_) => Ok(DEFAULT_TRUNCATION),
    }
}

impl GermFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses JSON, reporting the offending field path and position.
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            CliError::Parse {
                origin: origin.to_string(),
                field,
                line: inner.line(),
                column: inner.column(),
                message: strip_position(&inner.to_string()),
            }
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("germ files always serialise");
        s.push('\n');
        s
    }

    /// Checks every invariant and evaluates coefficients.
    pub fn resolve(&self) -> CliResult<ResolvedGerm> {
        let b = self.branches;
        if b == 0 {
            return Err(CliError::invalid("branches", "must be at least 1"));
        }
        let k = match self.truncation {
            Some(0) => return Err(CliError::invalid("truncation", "must be at least 1")),
            Some(k) => k,
            None => default_truncation()?,
        };
        let mut params = BTreeMap::new();
        for (name, value) in &self.params {
            let v = parse_rational(value)
                .map_err(|e| CliError::invalid(format!("params.{name}"), core_message(e)))?;
            params.insert(name.as_str(), v);
        }
        if self.generators.is_empty() {
            return Err(CliError::invalid(
                "generators",
                "at least one generator is required",
            ));
        }
        let mut generators = Vec::with_capacity(self.generators.len());
        for (gi, g) in self.generators.iter().enumerate() {
            let mut terms = Vec::with_capacity(g.terms.len());
            for (ti, t) in g.terms.iter().enumerate() {
                let field = format!("generators[{gi}].terms[{ti}]");
                check_branch(t.branch, b, &field)?;
                if t.exp < 0 || t.exp as usize >= k {
                    return Err(CliError::invalid(
                        format!("{field}.exp"),
                        format!("{} is outside 0..{k}", t.exp),
                    ));
                }
                let c = coefficient(&t.coeff, &params, &format!("{field}.coeff"))?;
                terms.push((t.branch - 1, t.exp as u32, c));
            }
            generators.push((g.name.clone(), GermElement::from_terms(b, k, terms)));
        }
        let differential = match &self.differential {
            None => None,
            Some(ts) => {
                let mut terms = Vec::with_capacity(ts.len());
                for (ti, t) in ts.iter().enumerate() {
                    let field = format!("differential[{ti}]");
                    check_branch(t.branch, b, &field)?;
                    let c = coefficient(&t.coeff, &params, &format!("{field}.coeff"))?;
                    terms.push((t.branch - 1, t.exp, c));
                }
                Some(MeroDifferential::from_pole_terms(b, terms))
            }
        };
        Ok(ResolvedGerm {
            b,
            k,
            generators,
            differential,
            g_tilde: self.g_tilde.unwrap_or(0),
            beta: self.beta.unwrap_or(0),
        })
    }
}

fn check_branch(branch: usize, b: usize, field: &str) -> CliResult<()> {
    if branch == 0 || branch > b {
        return Err(CliError::invalid(
            format!("{field}.branch"),
            format!("{branch} is outside 1..={b}"),
        ));
    }
    Ok(())
}

fn coefficient(s: &str, params: &BTreeMap<&str, Rational>, field: &str) -> CliResult<Rational> {
    let s = s.trim();
    let (negate, name) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    if let Some(v) = params.get(name) {
        return Ok(if negate { -v.clone() } else { v.clone() });
    }
    let looks_numeric = s
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '/' | '-' | '+' | ' '));
    if looks_numeric {
        parse_rational(s).map_err(|e| CliError::invalid(field, core_message(e)))
    } else {
        Err(CliError::invalid(
            field,
            format!("unknown parameter {name:?}"),
        ))
    }
}

fn core_message(e: glab_core::Error) -> String {
    match e {
        glab_core::Error::InvalidInput(m) => m,
        other => other.to_string(),
    }
}

/// serde_json appends " at line L column C"; the position is reported
/// separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
