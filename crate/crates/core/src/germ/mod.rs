//! Curve-singularity germs as subalgebras of a truncated normalisation.
//!
//! Elements of `R~ / m~^K` are stored as coordinate vectors of length
//! `b * K`. The monomial `t_i^e` (branch `i`, 0-based) sits at index
//! `e * b + i`, so coordinates are ordered by exponent first and branch
//! second. With that ordering the pivots of the echelon basis at exponent
//! `e` are exactly a basis of the degree-`e` leading forms of `R`, and the
//! gap sequence can be read off the pivot counts.

mod invariants;
pub mod semigroup;
mod substitution;

pub use invariants::ConductorData;
pub use semigroup::{is_symmetric_semigroup, monomial_germ, semigroup_gaps};
pub use substitution::SubstitutionMap;

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::series::TruncSeries;
use crate::Rational;

/// An element of `R~ / m~^K`: one power series per branch, common order `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GermElement {
    branches: Vec<TruncSeries>,
}

impl GermElement {
    pub fn new(branches: Vec<TruncSeries>) -> Result<Self> {
        let Some(first) = branches.first() else {
            return Err(Error::InvalidInput(
                "a germ element needs at least one branch".into(),
            ));
        };
        let k = first.order();
        for s in &branches {
            if s.order() != k {
                return Err(Error::TruncationMismatch {
                    left: k,
                    right: s.order(),
                });
            }
            if s.low() < 0 {
                return Err(Error::InvalidInput(format!(
                    "{s} has negative exponents and is not in the normalisation"
                )));
            }
        }
        Ok(Self { branches })
    }

    pub fn zero(b: usize, k: usize) -> Self {
        Self {
            branches: vec![TruncSeries::zero(k as i64); b],
        }
    }

    pub fn one(b: usize, k: usize) -> Self {
        Self {
            branches: vec![TruncSeries::one(k as i64); b],
        }
    }

    /// `t_branch^exp` (0-based branch index).
    pub fn monomial(b: usize, k: usize, branch: usize, exp: u32) -> Self {
        Self::from_terms(b, k, [(branch, exp, Rational::one())])
    }

    /// Sum of `coeff * t_branch^exp` terms (0-based branch indices).
    pub fn from_terms<I>(b: usize, k: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, u32, Rational)>,
    {
        let mut per_branch: Vec<Vec<(i64, Rational)>> = vec![Vec::new(); b];
        for (i, e, c) in terms {
            per_branch[i].push((e as i64, c));
        }
        Self {
            branches: per_branch
                .into_iter()
                .map(|t| TruncSeries::from_terms(k as i64, t))
                .collect(),
        }
    }

    pub(crate) fn from_coords(b: usize, k: usize, v: &[Rational]) -> Self {
        Self::from_terms(
            b,
            k,
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(idx, c)| (idx % b, (idx / b) as u32, c.clone())),
        )
    }

    pub(crate) fn to_coords(&self) -> Vec<Rational> {
        let b = self.b();
        let k = self.order();
        let mut v = vec![Rational::zero(); b * k];
        for (i, s) in self.branches.iter().enumerate() {
            for (e, c) in s.terms() {
                v[e as usize * b + i] = c.clone();
            }
        }
        v
    }

    pub fn b(&self) -> usize {
        self.branches.len()
    }

    pub fn order(&self) -> usize {
        self.branches[0].order() as usize
    }

    pub fn branch(&self, i: usize) -> &TruncSeries {
        &self.branches[i]
    }

    pub fn branches(&self) -> &[TruncSeries] {
        &self.branches
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.b() != other.b() {
            return Err(Error::BranchMismatch {
                left: self.b(),
                right: other.b(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let branches = self
            .branches
            .iter()
            .zip(&other.branches)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Self { branches })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let branches = self
            .branches
            .iter()
            .zip(&other.branches)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<_>>()?;
        Ok(Self { branches })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            branches: self.branches.iter().map(|s| s.scale(c)).collect(),
        }
    }

    /// Minimum valuation over branches; `None` if the element vanishes mod `m~^K`.
    pub fn valuation(&self) -> Option<i64> {
        self.branches
            .iter()
            .filter_map(TruncSeries::valuation)
            .min()
    }
}

impl fmt::Display for GermElement {
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

/// Product of two coordinate vectors in `R~ / m~^K`.
pub(crate) fn mul_coords(x: &[Rational], y: &[Rational], b: usize, k: usize) -> Vec<Rational> {
    let mut z = vec![Rational::zero(); b * k];
    for (ix, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let (e1, i) = (ix / b, ix % b);
        for e2 in 0..k - e1 {
            let c = &y[e2 * b + i];
            if !c.is_zero() {
                z[(e1 + e2) * b + i] += a * c;
            }
        }
    }
    z
}

/// Index of the first nonzero coordinate divided by `b`, i.e. the valuation.
fn coord_valuation(v: &[Rational], b: usize) -> Option<usize> {
    v.iter().position(|c| !c.is_zero()).map(|p| p / b)
}

/// Gap sequence `a_i = dim (R~/R)_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapSequence {
    a0: usize,
    dims: Vec<usize>,
}

impl GapSequence {
    pub fn new(a0: usize, mut dims: Vec<usize>) -> Self {
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Self { a0, dims }
    }

    /// `a_0 = b - 1`, reported apart from the sequence proper.
    pub fn a0(&self) -> usize {
        self.a0
    }

    /// `a_1, a_2, ...` with trailing zeros trimmed.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `a_i` for any `i >= 0`.
    pub fn get(&self, i: usize) -> usize {
        match i {
            0 => self.a0,
            _ => self.dims.get(i - 1).copied().unwrap_or(0),
        }
    }

    /// Sum of `a_i` over `i >= 1`; the genus for a faithful truncation.
    pub fn sum(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Whether `{i >= 1 : a_i = 0}` is closed under addition below `limit`.
    pub fn is_monoid_below(&self, limit: usize) -> bool {
        (1..limit).all(|i| {
            self.get(i) != 0 || (1..limit - i).all(|j| self.get(j) != 0 || self.get(i + j) == 0)
        })
    }
}

impl fmt::Display for GapSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// The local ring `R` of a germ modulo `m~^K`, as a canonical echelon basis.
#[derive(Clone, Debug)]
pub struct SubalgebraBasis {
    b: usize,
    k: usize,
    echelon: Echelon,
    gaps: GapSequence,
    window: usize,
}

/// Multiplicative closure of `{1} U generators` in `R~ / m~^K`.
///
/// Generators must lie in `m~` (no constant terms). The result is
/// independent of generator order and closing it again changes nothing.
pub fn closure(generators: &[GermElement], b: usize, k: usize) -> Result<SubalgebraBasis> {
    if b == 0 || k == 0 {
        return Err(Error::InvalidInput(format!(
            "a germ needs b >= 1 and K >= 1, got b = {b}, K = {k}"
        )));
    }
    if generators.is_empty() && b >= 2 {
        return Err(Error::EmptyGenerators { b });
    }
    let mut gens = Vec::with_capacity(generators.len());
    for (index, g) in generators.iter().enumerate() {
        if g.b() != b {
            return Err(Error::BranchMismatch {
                left: b,
                right: g.b(),
            });
        }
        if g.order() != k {
            return Err(Error::TruncationMismatch {
                left: k as i64,
                right: g.order() as i64,
            });
        }
        if g.branches.iter().any(|s| s.valuation() == Some(0)) {
            return Err(Error::ConstantTerm { index });
        }
        gens.push(g.to_coords());
    }
    Ok(close_coords(b, k, &gens))
}

fn close_coords(b: usize, k: usize, gens: &[Vec<Rational>]) -> SubalgebraBasis {
    let mut echelon = Echelon::new(b * k);
    let mut count = vec![0usize; k];
    let mut queue: Vec<Vec<Rational>> = Vec::new();

    let one = GermElement::one(b, k).to_coords();
    if let Some(v) = insert_counted(&mut echelon, &mut count, b, one) {
        queue.push(v);
    }
    for g in gens {
        if let Some(v) = insert_counted(&mut echelon, &mut count, b, g.clone()) {
            queue.push(v);
        }
    }
    let gen_vals: Vec<usize> = gens
        .iter()
        .map(|g| coord_valuation(g, b).unwrap_or(k))
        .collect();

    while let Some(v) = queue.pop() {
        let Some(vv) = coord_valuation(&v, b) else {
            continue;
        };
        for (g, &gv) in gens.iter().zip(&gen_vals) {
            // everything from degree `full` on is already in the span
            let full = full_from(&count, b);
            if vv + gv >= full {
                continue;
            }
            let w = mul_coords(&v, g, b, k);
            if let Some(r) = insert_counted(&mut echelon, &mut count, b, w) {
                queue.push(r);
            }
        }
    }

    let gaps = GapSequence::new(b - count[0], count[1..].iter().map(|c| b - c).collect());
    debug_assert_eq!(gaps.a0(), b - 1);
    let last_gap = (0..k).rev().find(|&i| count[i] < b);
    let window = last_gap.map_or(0, |i| i + 1);
    SubalgebraBasis {
        b,
        k,
        echelon,
        gaps,
        window,
    }
}

/// Inserts `v`; on success bumps the pivot count of its exponent and
/// returns a copy of the new row.
fn insert_counted(
    echelon: &mut Echelon,
    count: &mut [usize],
    b: usize,
    v: Vec<Rational>,
) -> Option<Vec<Rational>> {
    let p = echelon.insert(v)?;
    count[p / b] += 1;
    echelon.rows().last().cloned()
}

/// Smallest `j` such that every exponent in `[j, K)` carries `b` pivots.
fn full_from(count: &[usize], b: usize) -> usize {
    count.iter().rposition(|&c| c < b).map_or(0, |i| i + 1)
}

impl SubalgebraBasis {
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn truncation(&self) -> usize {
        self.k
    }

    /// `dim_Q R / (R ∩ m~^K)`.
    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn gap_sequence(&self) -> &GapSequence {
        &self.gaps
    }

    /// `delta = dim R~/R = bK - dim S`.
    pub fn delta(&self) -> usize {
        self.b * self.k - self.dim()
    }

    /// `genus = delta - b + 1`.
    pub fn genus(&self) -> usize {
        self.delta() + 1 - self.b
    }

    pub fn delta_genus(&self) -> (usize, usize) {
        (self.delta(), self.genus())
    }

    /// Smallest `j` with the gap sequence vanishing on `[j, K)`.
    pub fn conductor_window(&self) -> usize {
        self.window
    }

    /// Whether `K >= 2 j`, which certifies `m~^j ⊆ R` for the true germ.
    pub fn is_stabilised(&self) -> bool {
        self.k >= 2 * self.window
    }

    pub(crate) fn check_stabilised(&self) -> Result<()> {
        if self.is_stabilised() {
            Ok(())
        } else {
            Err(Error::StabilisationFailure { order: self.k })
        }
    }

    /// Canonical basis rows as coordinate vectors, in pivot order.
    pub(crate) fn rows(&self) -> Vec<&Vec<Rational>> {
        self.echelon.sorted_rows()
    }

    /// The canonical echelon basis.
    pub fn basis(&self) -> Vec<GermElement> {
        self.rows()
            .into_iter()
            .map(|r| GermElement::from_coords(self.b, self.k, r))
            .collect()
    }

    pub fn contains(&self, f: &GermElement) -> bool {
        f.b() == self.b && f.order() == self.k && self.echelon.contains(&f.to_coords())
    }

    pub(crate) fn contains_monomial(&self, branch: usize, exp: usize) -> bool {
        let mut v = vec![Rational::zero(); self.b * self.k];
        v[exp * self.b + branch] = Rational::one();
        self.echelon.contains(&v)
    }

    /// Re-runs the closure on the basis itself (for idempotence checks).
    pub fn reclose(&self) -> SubalgebraBasis {
        let gens: Vec<Vec<Rational>> = self
            .rows()
            .into_iter()
            .filter(|r| r[..self.b].iter().all(Zero::is_zero))
            .cloned()
            .collect();
        close_coords(self.b, self.k, &gens)
    }
}

impl PartialEq for SubalgebraBasis {
    fn eq(&self, other: &Self) -> bool {
        self.b == other.b && self.k == other.k && self.rows() == other.rows()
    }
}

impl Eq for SubalgebraBasis {}
