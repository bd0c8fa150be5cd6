//! Subcommand implementations. Each produces both renderings of its report
//! and the process exit code.

pub mod analyze;
pub mod falsify;
pub mod family;
pub mod theta;

use glab_core::theta::{ParityReport, ThetaLocalData};
use serde::Serialize;

use crate::error::CliResult;

/// A finished command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub json: String,
    pub text: String,
    pub code: u8,
}

/// Theta-characteristic counts for one compactification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityVerdict {
    pub g_tilde: u32,
    pub beta: u32,
    /// `log2 |J_2| = 2 g~ + beta`.
    pub j2_exponent: u32,
    pub l_values: Vec<u8>,
    pub l_identically_zero: bool,
    pub q: Option<u8>,
    pub even: u128,
    pub odd: u128,
}

impl ParityVerdict {
    pub fn new(data: &ThetaLocalData, p: &ParityReport) -> Self {
        Self {
            g_tilde: data.g_tilde,
            beta: data.beta,
            j2_exponent: data.j2_exponent(),
            l_values: p.l_values.clone(),
            l_identically_zero: p.l_identically_zero,
            q: p.q,
            even: p.even_count,
            odd: p.odd_count,
        }
    }

    pub fn render(&self) -> String {
        let l: Vec<String> = self.l_values.iter().map(u8::to_string).collect();
        let q = self.q.map_or("-".to_string(), |q| q.to_string());
        format!(
            "g~ = {}, beta = {}: l = [{}], Q = {q}, even {}, odd {}",
            self.g_tilde,
            self.beta,
            l.join(","),
            self.even,
            self.odd
        )
    }
}

/// Runs `f` on a pool of `jobs` threads (`0` for the default).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| crate::error::CliError::invalid("--jobs", e.to_string()))?;
    Ok(pool.install(f))
}
