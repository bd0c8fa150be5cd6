//! The dualising module of a germ via Rosenlicht's description.
//!
//! A meromorphic differential `η = (η_i dt_i)` on the normalisation lies in
//! `ω` iff `Σ_i Res(f η_i) = 0` for every `f ∈ R`. Only pole parts matter
//! modulo regular differentials, so differentials are compared and stored
//! through their pole parts.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::germ::{SubalgebraBasis, SubstitutionMap};
use crate::linalg::{nullspace, rank};
use crate::series::MeroSeries;
use crate::Rational;

/// Random combinations tried by [`find_generator`] after the deterministic candidate.
pub const GENERATOR_RETRIES: usize = 64;
const GENERATOR_SEED: u64 = 0x0005_eed0_d1ff;

/// A tuple of Laurent differentials `η_i dt_i`, one per branch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeroDifferential {
    branches: Vec<MeroSeries>,
}

impl MeroDifferential {
    pub fn new(branches: Vec<MeroSeries>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidInput(
                "a differential needs at least one branch".into(),
            ));
        }
        Ok(Self { branches })
    }

    /// Pole part from `(branch, exponent, coefficient)` terms with negative
    /// exponents (0-based branches). Nonnegative exponents are ignored.
    pub fn from_pole_terms<I>(b: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, i64, Rational)>,
    {
        let mut per_branch: Vec<Vec<(i64, Rational)>> = vec![Vec::new(); b];
        for (i, e, c) in terms {
            per_branch[i].push((e, c));
        }
        Self {
            branches: per_branch
                .into_iter()
                .map(|t| MeroSeries::from_terms(0, t))
                .collect(),
        }
    }

    pub fn b(&self) -> usize {
        self.branches.len()
    }

    pub fn branch(&self, i: usize) -> &MeroSeries {
        &self.branches[i]
    }

    pub fn branches(&self) -> &[MeroSeries] {
        &self.branches
    }

    /// Pole orders `m_i` per branch.
    pub fn pole_orders(&self) -> Vec<u64> {
        self.branches.iter().map(MeroSeries::pole_order).collect()
    }

    /// The same differential modulo regular ones.
    pub fn pole_part(&self) -> Self {
        Self {
            branches: self.branches.iter().map(|s| s.truncated(0)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            branches: self.branches.iter().map(MeroSeries::neg).collect(),
        }
    }

    /// Coefficient of `t_i^-m dt_i` (0 when not tracked).
    fn pole_coeff(&self, i: usize, m: usize) -> Rational {
        self.branches[i]
            .coeff(-(m as i64))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Pullback `φ* η` branchwise: `(φ*η)_i = η_{src(i)}(u_i) u_i'`.
    pub fn pull_back(&self, phi: &SubstitutionMap) -> Result<Self> {
        if phi.b() != self.b() {
            return Err(Error::BranchMismatch {
                left: phi.b(),
                right: self.b(),
            });
        }
        let branches = (0..self.b())
            .map(|i| {
                let (src, u) = phi.image(i);
                self.branches[src].pullback_differential(u)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { branches })
    }

    fn check_pairable(&self, r: &SubalgebraBasis) -> Result<()> {
        if self.b() != r.b() {
            return Err(Error::BranchMismatch {
                left: r.b(),
                right: self.b(),
            });
        }
        let k = r.truncation() as u64;
        if let Some((i, m)) = self
            .pole_orders()
            .into_iter()
            .enumerate()
            .find(|&(_, m)| m > k)
        {
            return Err(Error::InsufficientTruncation(format!(
                "pole of order {m} on branch {} exceeds the truncation {k}",
                i + 1
            )));
        }
        Ok(())
    }
}

impl fmt::Display for MeroDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// `Σ_i Res(f_i η_i)` for a coordinate row `f` of the germ.
fn total_residue(row: &[Rational], eta: &MeroDifferential, b: usize, k: usize) -> Rational {
    let mut acc = Rational::zero();
    for (i, s) in eta.branches.iter().enumerate() {
        for (e, c) in s.terms().take_while(|(e, _)| *e < 0) {
            let j = (-1 - e) as usize;
            if j < k {
                let f = &row[j * b + i];
                if !f.is_zero() {
                    acc += f * c;
                }
            }
        }
    }
    acc
}

/// Rosenlicht's condition: the total residue of `f η` vanishes for all `f ∈ R`.
///
/// Checking the basis of `R mod m~^K` suffices because pole orders are at
/// most `K`, so `m~^K η` is regular.
pub fn descends(eta: &MeroDifferential, r: &SubalgebraBasis) -> Result<bool> {
    eta.check_pairable(r)?;
    let (b, k) = (r.b(), r.truncation());
    Ok(r.rows()
        .into_iter()
        .all(|row| total_residue(row, eta, b, k).is_zero()))
}

/// Basis of `ω / ν_* ω~`, represented by pole parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaBasis {
    pub basis: Vec<MeroDifferential>,
    pub dimension: usize,
}

/// Solves Rosenlicht's condition inside the pole-part space bounded by the
/// adjoint divisor, `⊕_i span{t_i^-1, ..., t_i^-d_i}`. The residue pairing
/// is perfect, so the dimension must equal `δ`.
pub fn omega_module(r: &SubalgebraBasis) -> Result<OmegaBasis> {
    let d = r.conductor()?.multiplicities;
    let b = r.b();
    // unknowns: coefficient of t_i^-e, e = 1..=d_i
    let slots: Vec<(usize, usize)> = d
        .iter()
        .enumerate()
        .flat_map(|(i, &di)| (1..=di).map(move |e| (i, e)))
        .collect();
    let equations = r.rows().into_iter().map(|row| {
        slots
            .iter()
            .map(|&(i, e)| row[(e - 1) * b + i].clone())
            .collect::<Vec<_>>()
    });
    let solutions = nullspace(slots.len(), equations);
    let basis: Vec<MeroDifferential> = solutions
        .iter()
        .map(|x| {
            MeroDifferential::from_pole_terms(
                b,
                slots
                    .iter()
                    .zip(x)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&(i, e), c)| (i, -(e as i64), c.clone())),
            )
        })
        .collect();
    let delta = r.delta();
    if basis.len() != delta {
        return Err(Error::PerfectnessViolation {
            dimension: basis.len(),
            delta,
        });
    }
    Ok(OmegaBasis {
        dimension: basis.len(),
        basis,
    })
}

/// Whether `R η` is all of `ω`: the pole parts of `f η`, `f` ranging over a
/// basis of `R`, must span a `δ`-dimensional space.
pub fn generates(eta: &MeroDifferential, r: &SubalgebraBasis) -> Result<bool> {
    if !descends(eta, r)? {
        return Err(Error::NotASection);
    }
    let (b, k) = (r.b(), r.truncation());
    let delta = r.delta();
    if delta == 0 {
        // smooth branch: ω is free on dt, so η must be a unit multiple of it
        return Ok(eta.branch(0).coeff(0).is_some_and(|c| !c.is_zero()));
    }
    let poles = eta.pole_orders();
    let width: usize = poles.iter().map(|&m| m as usize).sum();
    let images = r.rows().into_iter().map(|row| {
        let mut v = Vec::with_capacity(width);
        for (i, &m) in poles.iter().enumerate() {
            // coefficient of t_i^-p in f_i η_i
            for p in 1..=m as usize {
                let mut acc = Rational::zero();
                for q in p..=m as usize {
                    let j = q - p;
                    if j < k {
                        let f = &row[j * b + i];
                        if !f.is_zero() {
                            acc += f * eta.pole_coeff(i, q);
                        }
                    }
                }
                v.push(acc);
            }
        }
        v
    });
    Ok(rank(width, images) == delta)
}

/// Outcome of [`find_generator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSearch {
    pub generator: Option<MeroDifferential>,
    /// Candidates tested, including the deterministic one.
    pub attempts: usize,
    pub diagnostic: String,
}

/// Looks for a generator of `ω`: first the basis vector with the largest
/// total pole order, then seeded random combinations with coefficients in
/// `{-2, ..., 2}`.
pub fn find_generator(r: &SubalgebraBasis) -> Result<GeneratorSearch> {
    find_generator_with(r, GENERATOR_SEED, GENERATOR_RETRIES)
}

pub fn find_generator_with(
    r: &SubalgebraBasis,
    seed: u64,
    retries: usize,
) -> Result<GeneratorSearch> {
    let omega = omega_module(r)?;
    let b = r.b();
    if omega.dimension == 0 {
        let dt = MeroDifferential::new(vec![MeroSeries::one(1); b])?;
        let ok = generates(&dt, r)?;
        return Ok(GeneratorSearch {
            generator: ok.then_some(dt),
            attempts: 1,
            diagnostic: "smooth germ: ω is generated by dt".into(),
        });
    }
    let total = |eta: &MeroDifferential| eta.pole_orders().iter().sum::<u64>();
    let best = omega
        .basis
        .iter()
        .max_by_key(|eta| total(eta))
        .expect("nonempty basis");
    // max_by_key keeps the last maximum; prefer the first for stability
    let best = omega
        .basis
        .iter()
        .find(|eta| total(eta) == total(best))
        .expect("maximum exists");
    let mut attempts = 1;
    if generates(best, r)? {
        return Ok(GeneratorSearch {
            generator: Some(best.clone()),
            attempts,
            diagnostic: "maximal pole profile basis vector generates".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..retries {
        attempts += 1;
        let coeffs: Vec<i64> = (0..omega.dimension)
            .map(|_| rng.gen_range(-2..=2))
            .collect();
        let eta = combine(&omega.basis, &coeffs, b);
        if generates(&eta, r)? {
            return Ok(GeneratorSearch {
                generator: Some(eta),
                attempts,
                diagnostic: format!("random combination {coeffs:?} generates"),
            });
        }
    }
    Ok(GeneratorSearch {
        generator: None,
        attempts,
        diagnostic: format!(
            "no generator among the maximal basis vector and {retries} random combinations"
        ),
    })
}

/// `Σ c_j basis_j`.
pub fn combine(basis: &[MeroDifferential], coeffs: &[i64], b: usize) -> MeroDifferential {
    let mut branches = vec![MeroSeries::zero(0); b];
    for (eta, &c) in basis.iter().zip(coeffs) {
        if c == 0 {
            continue;
        }
        let c = Rational::from_integer(c.into());
        for (acc, s) in branches.iter_mut().zip(&eta.pole_part().branches) {
            *acc = acc.add(&s.scale(&c)).expect("pole parts share order 0");
        }
    }
    MeroDifferential { branches }
}

/// The multiset `{m_i - 2}` of a generator's pole orders, as a partition of
/// `2g - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StratumSignature {
    /// Positive parts in decreasing order; branches with `m_i <= 2` do not
    /// appear.
    pub parts: Vec<u64>,
    pub total: u64,
}

impl fmt::Display for StratumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Stratum signature of a generator `η` on a germ of the given genus.
///
/// The signed sum `Σ (m_i - 2)` must be `2g - 2`; simple poles (`m_i = 1`,
/// as at a node) enter that sum with `-1` but are not listed as parts.
pub fn stratum_signature(eta: &MeroDifferential, genus: usize) -> Result<StratumSignature> {
    let poles = eta.pole_orders();
    let sum: i64 = poles.iter().map(|&m| m as i64 - 2).sum();
    let expected = 2 * genus as i64 - 2;
    if sum != expected {
        return Err(Error::SignatureMismatch { sum, expected });
    }
    let mut parts: Vec<u64> = poles.iter().filter(|&&m| m > 2).map(|&m| m - 2).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(StratumSignature {
        total: parts.iter().sum(),
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{closure, GermElement};
    use crate::rat;

    fn mono(b: usize, k: usize, terms: &[(usize, u32)]) -> GermElement {
        GermElement::from_terms(b, k, terms.iter().map(|&(i, e)| (i, e, rat(1, 1))))
    }

    fn poles(b: usize, terms: &[(usize, i64, i64)]) -> MeroDifferential {
        MeroDifferential::from_pole_terms(b, terms.iter().map(|&(i, e, c)| (i, e, rat(c, 1))))
    }

    fn node() -> SubalgebraBasis {
        closure(&[mono(2, 12, &[(0, 1)]), mono(2, 12, &[(1, 1)])], 2, 12).unwrap()
    }

    fn cusp() -> SubalgebraBasis {
        closure(&[mono(1, 12, &[(0, 2)]), mono(1, 12, &[(0, 3)])], 1, 12).unwrap()
    }

    fn e6() -> SubalgebraBasis {
        closure(&[mono(1, 12, &[(0, 3)]), mono(1, 12, &[(0, 4)])], 1, 12).unwrap()
    }

    #[test]
    fn descends_examples() {
        assert!(descends(&poles(2, &[(0, -1, 1), (1, -1, -1)]), &node()).unwrap());
        assert!(descends(&poles(1, &[(0, -2, 1)]), &cusp()).unwrap());
        assert!(!descends(&poles(1, &[(0, -1, 1)]), &cusp()).unwrap());
        let too_deep = poles(1, &[(0, -13, 1)]);
        assert!(matches!(
            descends(&too_deep, &cusp()),
            Err(Error::InsufficientTruncation(_))
        ));
    }

    #[test]
    fn omega_examples() {
        let w = omega_module(&node()).unwrap();
        assert_eq!(w.dimension, 1);
        let eta = &w.basis[0];
        // proportional to (t1^-1, -t2^-1)
        let ratio = eta.pole_coeff(1, 1) / eta.pole_coeff(0, 1);
        assert_eq!(ratio, rat(-1, 1));

        let w = omega_module(&cusp()).unwrap();
        assert_eq!(w.dimension, 1);
        assert_eq!(w.basis[0].pole_orders(), vec![2]);

        assert_eq!(omega_module(&e6()).unwrap().dimension, 3);
    }

    #[test]
    fn cusp_omega_by_brute_force() {
        // all (x, y) with x t^-1 + y t^-2 descending to C[[t^2, t^3]]
        let r = cusp();
        let mut found = Vec::new();
        for x in -2..=2 {
            for y in -2..=2 {
                if descends(&poles(1, &[(0, -1, x), (0, -2, y)]), &r).unwrap() {
                    found.push((x, y));
                }
            }
        }
        assert_eq!(found, (-2..=2).map(|y| (0, y)).collect::<Vec<_>>());
    }

    #[test]
    fn generates_examples() {
        let eta = poles(2, &[(0, -1, 1), (1, -1, -1)]);
        assert!(generates(&eta, &node()).unwrap());
        assert!(generates(&poles(1, &[(0, -6, 1)]), &e6()).unwrap());
        assert!(!generates(&poles(1, &[(0, -3, 1)]), &e6()).unwrap());
        assert_eq!(
            generates(&poles(1, &[(0, -1, 1)]), &cusp()).unwrap_err(),
            Error::NotASection
        );
    }

    #[test]
    fn e6_submodule_by_brute_force() {
        // pole parts of f * t^-3 dt over the basis of R, by direct series products
        let r = e6();
        let eta = MeroSeries::monomial(-3, rat(1, 1), 12);
        let parts: Vec<Vec<Rational>> = r
            .basis()
            .iter()
            .map(|f| {
                let p = f.branch(0).mul(&eta).unwrap();
                (1..=6).map(|m| p.coeff(-m).cloned().unwrap()).collect()
            })
            .collect();
        assert_eq!(rank(6, parts), 1);
        assert_eq!(r.delta(), 3);
    }

    #[test]
    fn find_generator_examples() {
        let s = find_generator(&e6()).unwrap();
        let g = s.generator.unwrap();
        assert_eq!(g.pole_orders(), vec![6]);
        assert_eq!(stratum_signature(&g, 3).unwrap().parts, vec![4]);

        let s = find_generator(&node()).unwrap();
        let g = s.generator.unwrap();
        assert_eq!(g.pole_orders(), vec![1, 1]);
        let sig = stratum_signature(&g, 0).unwrap();
        assert_eq!((sig.parts.len(), sig.total), (0, 0));
    }

    #[test]
    fn seminormal_point_has_no_generator() {
        for b in 3..=4 {
            let gens: Vec<_> = (0..b).map(|i| mono(b, 8, &[(i, 1)])).collect();
            let r = closure(&gens, b, 8).unwrap();
            let s = find_generator(&r).unwrap();
            assert!(s.generator.is_none());
            assert_eq!(s.attempts, GENERATOR_RETRIES + 1);
        }
    }

    #[test]
    fn signature_mismatch() {
        let eta = poles(1, &[(0, -5, 1)]);
        assert_eq!(
            stratum_signature(&eta, 3).unwrap_err(),
            Error::SignatureMismatch {
                sum: 3,
                expected: 4
            }
        );
    }
}
