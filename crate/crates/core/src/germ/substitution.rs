//! Branchwise changes of parameter, possibly permuting branches.

use num_traits::One;

use crate::error::{Error, Result};
use crate::series::TruncSeries;

use super::{GermElement, SubalgebraBasis};

/// An automorphism of `R~` given branchwise: branch `i` is sent to branch
/// `source(i)` via a parameter change `u_i`, so that
/// `(φ* f)_i = f_{source(i)}(u_i(t_i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionMap {
    images: Vec<(usize, TruncSeries)>,
}

impl SubstitutionMap {
    /// Checks that the sources form a permutation and each `u_i` is a
    /// parameter (valuation exactly 1).
    pub fn new(images: Vec<(usize, TruncSeries)>) -> Result<Self> {
        let b = images.len();
        let mut seen = vec![false; b];
        for (i, (src, u)) in images.iter().enumerate() {
            if *src >= b || std::mem::replace(&mut seen[*src], true) {
                return Err(Error::InvalidSubstitution(format!(
                    "branch sources do not form a permutation (branch {i} -> {src})"
                )));
            }
            if u.valuation() != Some(1) {
                return Err(Error::InvalidSubstitution(format!(
                    "{u} on branch {i} is not a parameter change"
                )));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(b: usize, k: usize) -> Self {
        let t = TruncSeries::monomial(1, crate::Rational::one(), k as i64);
        Self {
            images: (0..b).map(|i| (i, t.clone())).collect(),
        }
    }

    /// Reparametrisation `t_i ↦ u_i(t_i)` fixing every branch.
    pub fn reparametrisation(us: Vec<TruncSeries>) -> Result<Self> {
        Self::new(us.into_iter().enumerate().collect())
    }

    pub fn b(&self) -> usize {
        self.images.len()
    }

    /// `(source branch, u_i)` for branch `i`.
    pub fn image(&self, i: usize) -> (usize, &TruncSeries) {
        let (src, u) = &self.images[i];
        (*src, u)
    }

    /// Replaces the data on branches `p` and `q` so that `φ*(t_q) = phi(t_p)`
    /// and `φ*(t_p) = phi^{-1}(t_q)`; an involution on that pair.
    pub fn swap_pair(&mut self, p: usize, q: usize, phi: &TruncSeries) -> Result<()> {
        let inv = phi.revert()?;
        self.images[p] = (q, phi.clone());
        self.images[q] = (p, inv);
        Ok(())
    }

    /// Sets `φ*(t_i) = u(t_i)` on a single branch.
    pub fn set_branch(&mut self, i: usize, u: TruncSeries) -> Result<()> {
        if u.valuation() != Some(1) {
            return Err(Error::InvalidSubstitution(format!(
                "{u} is not a parameter change"
            )));
        }
        self.images[i] = (i, u);
        Ok(())
    }

    /// `φ* f`.
    pub fn apply(&self, f: &GermElement) -> Result<GermElement> {
        if f.b() != self.b() {
            return Err(Error::BranchMismatch {
                left: self.b(),
                right: f.b(),
            });
        }
        let branches = self
            .images
            .iter()
            .map(|(src, u)| f.branch(*src).substitute(u))
            .collect::<Result<Vec<_>>>()?;
        GermElement::new(branches)
    }

    /// Whether `φ* φ*` is the identity modulo `m~^K`; it suffices to check
    /// the uniformisers `t_i`.
    pub fn is_involution(&self, k: usize) -> Result<bool> {
        for i in 0..self.b() {
            let t = GermElement::monomial(self.b(), k, i, 1);
            if self.apply(&self.apply(&t)?)? != t {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `φ*` maps `R` into itself.
    pub fn preserves(&self, r: &SubalgebraBasis) -> Result<bool> {
        for f in r.basis() {
            if !r.contains(&self.apply(&f)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
