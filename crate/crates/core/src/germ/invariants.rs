//! Conductor, Serre's Gorenstein criterion and decomposability.

use crate::error::Result;
use crate::linalg::rank;

use super::{GermElement, SubalgebraBasis};

/// The conductor `c = ⊕ t_i^{d_i} Q[[t_i]]`, the largest `R~`-ideal inside `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorData {
    /// Per-branch valuations `d_i`; the adjoint divisor is `Σ d_i p_i`.
    pub multiplicities: Vec<usize>,
    /// `len(R/c) = dim R - dim c` (both mod `m~^K`).
    pub len_r_mod_c: usize,
    b: usize,
    k: usize,
}

impl ConductorData {
    /// Monomial basis of `c` modulo `m~^K`.
    pub fn ideal_basis(&self) -> Vec<GermElement> {
        self.multiplicities
            .iter()
            .enumerate()
            .flat_map(|(i, &d)| (d..self.k).map(move |e| (i, e)))
            .map(|(i, e)| GermElement::monomial(self.b, self.k, i, e as u32))
            .collect()
    }

    /// `Σ d_i = len(R~/c)`.
    pub fn total(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

impl SubalgebraBasis {
    /// Conductor data. Fails with `StabilisationFailure` unless the
    /// truncation certifies `m~^j ⊆ R`.
    pub fn conductor(&self) -> Result<ConductorData> {
        self.check_stabilised()?;
        // c is an R~-ideal, hence monomial: d_i is where the tail of
        // branch i starts lying in R.
        let multiplicities: Vec<usize> = (0..self.b)
            .map(|i| {
                (0..self.k)
                    .rev()
                    .take_while(|&e| self.contains_monomial(i, e))
                    .last()
                    .unwrap_or(self.k)
            })
            .collect();
        let dim_c: usize = multiplicities.iter().map(|d| self.k - d).sum();
        Ok(ConductorData {
            len_r_mod_c: self.dim() - dim_c,
            multiplicities,
            b: self.b,
            k: self.k,
        })
    }

    /// Serre's criterion: Gorenstein iff `len(R/c) = delta`. Returns the
    /// verdict and the certificate `(len(R/c), delta)`.
    pub fn is_gorenstein_serre(&self) -> Result<(bool, (usize, usize))> {
        let c = self.conductor()?;
        let delta = self.delta();
        Ok((c.len_r_mod_c == delta, (c.len_r_mod_c, delta)))
    }

    fn projected_dim(&self, branches: &[usize]) -> usize {
        let cols: Vec<usize> = (0..self.k)
            .flat_map(|e| branches.iter().map(move |&i| e * self.b + i))
            .collect();
        rank(
            cols.len(),
            self.rows()
                .into_iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect()),
        )
    }

    /// A bipartition `(I, J)` of the (0-based) branches along which `R` is a
    /// transverse gluing `R|_I ×_Q R|_J`, or `None` if the germ is
    /// indecomposable. Exhaustive over the `2^(b-1) - 1` bipartitions.
    pub fn is_decomposable(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let b = self.b;
        if b < 2 {
            return None;
        }
        let dim = self.dim();
        // branch 0 always on the left
        for mask in 0u64..(1u64 << (b - 1)) - 1 {
            let left: Vec<usize> = std::iter::once(0)
                .chain((1..b).filter(|i| mask >> (i - 1) & 1 == 1))
                .collect();
            let right: Vec<usize> = (1..b).filter(|i| mask >> (i - 1) & 1 == 0).collect();
            if dim + 1 == self.projected_dim(&left) + self.projected_dim(&right) {
                return Some((left, right));
            }
        }
        None
    }
}
