//! Theta characteristics: parity counts from local singularity data, and the
//! classical counts for smooth plane quartics.
//!
//! For a curve with normalisation genus `g~` and a `β`-dimensional torus in
//! its generalised Jacobian, the 2-torsion `J_2` has `2^(2g~ + β)` elements.
//! Each singular point contributes a linear form `l` (the parities of its
//! adjoint multiplicities) and, when `l ≡ 0`, a bit `ε` whose sum `Q` decides
//! which parity is in the majority.

use crate::error::{Error, Result};
use crate::families::{hyperelliptic_involution, Component, FamilyInstance};
use crate::germ::SubalgebraBasis;
use crate::linalg::rank;

/// Local data at one singular point.
#[derive(Clone, Debug)]
pub struct ThetaLocalData {
    pub g_tilde: u32,
    pub beta: u32,
    /// Adjoint (conductor) multiplicities `d_i`, one per branch.
    pub adjoint_mults: Vec<usize>,
    /// `None` for a curve without singular points.
    pub germ: Option<SubalgebraBasis>,
}

impl ThetaLocalData {
    /// Data for a singular point with the given global invariants.
    pub fn from_germ(germ: SubalgebraBasis, g_tilde: u32, beta: u32) -> Result<Self> {
        let adjoint_mults = germ.conductor()?.multiplicities;
        Ok(Self {
            g_tilde,
            beta,
            adjoint_mults,
            germ: Some(germ),
        })
    }

    /// A smooth curve of genus `g`.
    pub fn smooth(g: u32) -> Self {
        Self {
            g_tilde: g,
            beta: 0,
            adjoint_mults: Vec::new(),
            germ: None,
        }
    }

    /// `log2 |J_2| = 2 g~ + β`.
    pub fn j2_exponent(&self) -> u32 {
        2 * self.g_tilde + self.beta
    }
}

/// `l(e_i) = d_i mod 2` for each branch generator `e_i` of `Γ_2`.
pub fn harris_linear_form(data: &ThetaLocalData) -> Vec<u8> {
    data.adjoint_mults.iter().map(|d| (d % 2) as u8).collect()
}

/// `Q = ε mod 2`, where `ε = len(R / I')` and `I' = {f : val_i f >= d_i / 2}`.
pub fn harris_q(data: &ThetaLocalData) -> Result<u8> {
    if data.adjoint_mults.iter().any(|d| d % 2 == 1) {
        return Err(Error::LNotZero(data.adjoint_mults.clone()));
    }
    let Some(germ) = &data.germ else {
        return Ok(0);
    };
    Ok((epsilon(germ, &data.adjoint_mults) % 2) as u8)
}

/// `ε = dim R - dim I'`: the rank of `R` projected to the coordinates below `E = D/2`.
pub fn epsilon(germ: &SubalgebraBasis, adjoint_mults: &[usize]) -> usize {
    let b = germ.b();
    let cols: Vec<usize> = adjoint_mults
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| (0..d / 2).map(move |e| e * b + i))
        .collect();
    rank(
        cols.len(),
        germ.rows()
            .into_iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect()),
    )
}

/// Parity counts of theta characteristics on one curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityReport {
    pub l_values: Vec<u8>,
    pub l_identically_zero: bool,
    pub q: Option<u8>,
    pub even_count: u128,
    pub odd_count: u128,
}

/// Even and odd theta-characteristic counts.
///
/// With `l ≢ 0` they split evenly. With `l ≡ 0` and `Q = 0` they are
/// `2^(g~+β-1) (2^g~ + 1)` and `2^(g~+β-1) (2^g~ - 1)`; `Q = 1` swaps them.
pub fn parity_report(data: &ThetaLocalData) -> Result<ParityReport> {
    let l_values = harris_linear_form(data);
    let n = data.j2_exponent();
    if n >= 127 {
        return Err(Error::InconsistentThetaData(format!(
            "|J_2| = 2^{n} is too large"
        )));
    }
    if l_values.contains(&1) {
        if n == 0 {
            return Err(Error::InconsistentThetaData(
                "l is not identically zero but J_2 is trivial (a branch of odd adjoint \
                 multiplicity forces beta >= 1 or g~ >= 1)"
                    .into(),
            ));
        }
        let half = 1u128 << (n - 1);
        return Ok(ParityReport {
            l_values,
            l_identically_zero: false,
            q: None,
            even_count: half,
            odd_count: half,
        });
    }
    let q = harris_q(data)?;
    let (g, beta) = (data.g_tilde, data.beta);
    let (major, minor) = if g + beta == 0 {
        // 2^-1 (2^0 + 1) = 1 and 2^-1 (2^0 - 1) = 0
        (1, 0)
    } else {
        let scale = 1u128 << (g + beta - 1);
        let top = 1u128 << g;
        (scale * (top + 1), scale * (top - 1))
    };
    let (even_count, odd_count) = if q == 0 {
        (major, minor)
    } else {
        (minor, major)
    };
    Ok(ParityReport {
        l_values,
        l_identically_zero: true,
        q: Some(q),
        even_count,
        odd_count,
    })
}

/// `(2^(g-1) (2^g + 1), 2^(g-1) (2^g - 1))` even and odd theta
/// characteristics on a smooth curve of genus `g`.
pub fn theta_counts_smooth(g: u32) -> (u128, u128) {
    if g == 0 {
        return (1, 0);
    }
    let scale = 1u128 << (g - 1);
    let top = 1u128 << g;
    (scale * (top + 1), scale * (top - 1))
}

/// Bitangents `(d+3) d (d-2) (d-3) / 2` and flexes `3 d (d-2)` of a smooth
/// plane curve of degree `d >= 2`.
pub fn plucker_dual_counts(d: u64) -> Result<(u64, u64)> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("plane curve degree {d} < 2")));
    }
    let bitangents = if d < 3 {
        0
    } else {
        (d + 3) * d * (d - 2) * (d - 3) / 2
    };
    Ok((bitangents, 3 * d * (d - 2)))
}

/// Total weight `(g-1) g (g+1)` of the Weierstrass points of a genus-`g` curve.
pub fn weierstrass_total_weight(g: u64) -> u64 {
    g.saturating_sub(1) * g * (g + 1)
}

/// Weierstrass points of a hyperelliptic genus-3 curve, each of weight 3.
pub const HYPERELLIPTIC_WEIERSTRASS_POINTS: u64 = 8;
pub const HYPERELLIPTIC_WEIERSTRASS_WEIGHT: u64 = 3;

/// Rank functions `h^0(ω_Z(-i p_1 - j p_2))` at `[j][i]` on a genus-3 curve
/// `Z` with `ω_Z = O(2 p_1 + 2 p_2)`, for `p_1 + p_2` an even (resp. odd)
/// theta characteristic. The middle entry is `h^0(p_1 + p_2)`.
pub const RANK_TABLE_EVEN: [[u8; 3]; 3] = [[3, 2, 1], [2, 2, 1], [1, 1, 1]];
pub const RANK_TABLE_ODD: [[u8; 3]; 3] = [[3, 2, 1], [2, 1, 1], [1, 1, 1]];

/// Component label of a verified family member, with a note when the
/// member carries a hyperelliptic involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLabel {
    pub component: Component,
    pub hyperelliptic_note: Option<String>,
}

pub fn stratum_component(inst: &FamilyInstance) -> ComponentLabel {
    let hyperelliptic_note = hyperelliptic_involution(inst).map(|_| {
        format!(
            "{} member carries a hyperelliptic involution (ι*η = -η)",
            inst.id.stratum_name()
        )
    });
    ComponentLabel {
        component: inst.id.component(),
        hyperelliptic_note,
    }
}

/// Parity label the local theta data implies for a rational compactification
/// (`g~ = β = 0`): `Unique` when `l ≢ 0`, otherwise odd or even by `Q`.
pub fn implied_component(germ: &SubalgebraBasis) -> Result<Component> {
    let data = ThetaLocalData::from_germ(germ.clone(), 0, 0)?;
    if harris_linear_form(&data).contains(&1) {
        return Ok(Component::Unique);
    }
    let report = parity_report(&data)?;
    Ok(if report.odd_count == 1 {
        Component::Odd
    } else {
        Component::Even
    })
}
