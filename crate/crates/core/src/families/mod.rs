//! The seven families of genus-3 Gorenstein curve singularities.
//!
//! Each family is labelled by the stratum of abelian differentials its
//! dualising generator lands in. [`instantiate`] builds the full
//! parameterised generators and the predicted generator `η` of the
//! dualising module; setting units to 1 and arbitrary coefficients to 0
//! ([`CrimpingParams::simplified`]) recovers the legible normal forms.

mod falsify;
mod involution;
mod params;
mod verify;

pub use falsify::{falsify, FalsifyOutcome};
pub use involution::hyperelliptic_involution;
pub use params::{
    cross_ratio, cross_ratio_alt, param_specs, CrimpingParams, ParamKind, ParamSpec,
    SIMPLIFIED_MODULUS,
};
pub use verify::{verify_instance, Check, VerificationReport};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::dualizing::MeroDifferential;
use crate::error::{Error, Result};
use crate::germ::{closure, GermElement, SubalgebraBasis};
use crate::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    H1111,
    H211,
    H22odd,
    H22even,
    H31,
    H4odd,
    H4even,
}

/// Connected component of the stratum a family maps to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Component {
    Unique,
    Odd,
    Even,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Unique => "unique",
            Component::Odd => "odd",
            Component::Even => "even",
        })
    }
}

impl FamilyId {
    pub const ALL: [FamilyId; 7] = [
        FamilyId::H1111,
        FamilyId::H211,
        FamilyId::H22odd,
        FamilyId::H22even,
        FamilyId::H31,
        FamilyId::H4odd,
        FamilyId::H4even,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::H1111 => "H1111",
            FamilyId::H211 => "H211",
            FamilyId::H22odd => "H22odd",
            FamilyId::H22even => "H22even",
            FamilyId::H31 => "H31",
            FamilyId::H4odd => "H4odd",
            FamilyId::H4even => "H4even",
        }
    }

    /// Stratum in the usual notation, e.g. `H(2,1,1)`.
    pub fn stratum_name(self) -> &'static str {
        match self {
            FamilyId::H1111 => "H(1,1,1,1)",
            FamilyId::H211 => "H(2,1,1)",
            FamilyId::H22odd => "H(2,2)^odd",
            FamilyId::H22even => "H(2,2)^even",
            FamilyId::H31 => "H(3,1)",
            FamilyId::H4odd => "H(4)^odd",
            FamilyId::H4even => "H(4)^even",
        }
    }

    /// Fewest branches a member can have.
    pub fn b_min(self) -> usize {
        match self {
            FamilyId::H1111 => 4,
            FamilyId::H211 => 3,
            FamilyId::H22odd | FamilyId::H22even | FamilyId::H31 => 2,
            FamilyId::H4odd | FamilyId::H4even => 1,
        }
    }

    /// Gap sequence `[a_1, a_2, ...]` shared by all members.
    pub fn gap_sequence(self) -> &'static [usize] {
        match self {
            FamilyId::H1111 => &[2, 1],
            FamilyId::H211 | FamilyId::H22odd => &[2, 0, 1],
            FamilyId::H22even => &[1, 1, 1],
            FamilyId::H31 => &[1, 1, 0, 1],
            FamilyId::H4odd => &[1, 1, 0, 0, 1],
            FamilyId::H4even => &[1, 0, 1, 0, 1],
        }
    }

    /// Parts of the stratum, `Σ = 4`.
    pub fn stratum(self) -> &'static [u64] {
        match self {
            FamilyId::H1111 => &[1, 1, 1, 1],
            FamilyId::H211 => &[2, 1, 1],
            FamilyId::H22odd | FamilyId::H22even => &[2, 2],
            FamilyId::H31 => &[3, 1],
            FamilyId::H4odd | FamilyId::H4even => &[4],
        }
    }

    pub fn component(self) -> Component {
        match self {
            FamilyId::H1111 | FamilyId::H211 | FamilyId::H31 => Component::Unique,
            FamilyId::H22odd | FamilyId::H4odd => Component::Odd,
            FamilyId::H22even | FamilyId::H4even => Component::Even,
        }
    }

    /// Smallest `k` with `m~^k ⊆ m`.
    pub fn conductor_exponent(self) -> usize {
        match self {
            FamilyId::H1111 => 3,
            FamilyId::H211 | FamilyId::H22odd | FamilyId::H22even => 4,
            FamilyId::H31 => 5,
            FamilyId::H4odd | FamilyId::H4even => 6,
        }
    }

    /// Predicted conductor multiplicities `d_i` (= pole orders of `η`) at `b` branches.
    pub fn multiplicities(self, b: usize) -> Vec<usize> {
        let head: &[usize] = match self {
            FamilyId::H1111 => &[3, 3, 3, 3],
            FamilyId::H211 => &[4, 3, 3],
            FamilyId::H22odd | FamilyId::H22even => &[4, 4],
            FamilyId::H31 => &[5, 3],
            FamilyId::H4odd | FamilyId::H4even => &[6],
        };
        let mut d = head.to_vec();
        d.resize(b.max(head.len()), 2);
        d
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// `(torus rank, affine rank)` of the crimping space: `G_m^(b-1) x G_a^2`.
pub fn crimping_shape(id: FamilyId, b: usize) -> (usize, usize) {
    let specs = param_specs(id, b);
    let count = |kind| specs.iter().filter(|s| s.kind == kind).count();
    (count(ParamKind::Unit), count(ParamKind::Arbitrary))
}

/// A generator with a display name (`A3`, `B2`, or `M2^5` for `t_2^5`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGenerator {
    pub name: String,
    pub element: GermElement,
}

/// Invariants a family member is predicted to have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicted {
    pub gap_sequence: Vec<usize>,
    pub stratum: Vec<u64>,
    pub component: Component,
    pub crimping_shape: (usize, usize),
    pub multiplicities: Vec<usize>,
}

/// A family member with exact crimping parameters.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub id: FamilyId,
    pub b: usize,
    pub k: usize,
    pub params: CrimpingParams,
    /// The family's generators followed by the monomials `t_i^j`,
    /// `k_0 <= j < 2 k_0`, spanning `m~^{k_0}` (`k_0` the conductor exponent).
    pub generators: Vec<NamedGenerator>,
    pub predicted_eta: MeroDifferential,
    pub predicted: Predicted,
}

impl FamilyInstance {
    pub fn elements(&self) -> Vec<GermElement> {
        self.generators.iter().map(|g| g.element.clone()).collect()
    }

    pub fn germ(&self) -> Result<SubalgebraBasis> {
        closure(&self.elements(), self.b, self.k)
    }
}

/// Builds a family member after validating `b`, `K` and the parameters.
pub fn instantiate(
    id: FamilyId,
    b: usize,
    params: &CrimpingParams,
    k: usize,
) -> Result<FamilyInstance> {
    validate(id, b, params, k, true)?;
    build(id, b, params, k)
}

/// Like [`instantiate`] but skips the relations between parameters (the
/// `H(1^4)` derived coefficient and `Δ ≠ 1`), so that excluded degenerations
/// can be examined. Unit flags are still enforced: the predicted
/// differential divides by them.
pub fn instantiate_unchecked(
    id: FamilyId,
    b: usize,
    params: &CrimpingParams,
    k: usize,
) -> Result<FamilyInstance> {
    validate(id, b, params, k, false)?;
    build(id, b, params, k)
}

fn validate(
    id: FamilyId,
    b: usize,
    params: &CrimpingParams,
    k: usize,
    relations: bool,
) -> Result<()> {
    if b < id.b_min() {
        return Err(Error::TooFewBranches {
            family: id.name(),
            min: id.b_min(),
            b,
        });
    }
    if k < 2 * id.conductor_exponent() {
        return Err(Error::StabilisationFailure { order: k });
    }
    let specs = param_specs(id, b);
    for (symbol, _) in params.iter() {
        if !specs.iter().any(|s| s.symbol == symbol) {
            return Err(Error::InvalidInput(format!(
                "{symbol} is not a crimping parameter of {id} with {b} branches"
            )));
        }
    }
    for s in &specs {
        let v = params.require(&s.symbol)?;
        if s.kind == ParamKind::Unit && v.is_zero() {
            return Err(Error::DegenerateParams {
                symbol: s.symbol.clone(),
                reason: "must be a unit".into(),
            });
        }
    }
    if relations && id == FamilyId::H1111 {
        let mut expected = params.clone();
        expected.fill_derived(id);
        if expected.get("A4(2,1)") != params.get("A4(2,1)") {
            return Err(Error::DegenerateParams {
                symbol: "A4(2,1)".into(),
                reason: "must equal A4(1,1) A3(1,1) / (A3(2,1) B2(1,2))".into(),
            });
        }
        if cross_ratio(params)?.is_one() {
            return Err(Error::DegenerateParams {
                symbol: "Delta".into(),
                reason: "cross-ratio 1 is excluded (the germ is not Gorenstein)".into(),
            });
        }
    }
    Ok(())
}

/// Generator and differential builder; branch indices are 1-based as in the
/// usual displays.
struct Builder<'a> {
    b: usize,
    k: usize,
    p: &'a CrimpingParams,
    gens: Vec<NamedGenerator>,
    eta: Vec<(usize, i64, Rational)>,
}

impl<'a> Builder<'a> {
    fn v(&self, symbol: &str) -> Rational {
        self.p.get(symbol).cloned().expect("validated")
    }

    fn gen(&mut self, name: impl Into<String>, terms: Vec<(usize, u32, Rational)>) {
        let element = GermElement::from_terms(
            self.b,
            self.k,
            terms.into_iter().map(|(i, e, c)| (i - 1, e, c)),
        );
        self.gens.push(NamedGenerator {
            name: name.into(),
            element,
        });
    }

    fn pole(&mut self, branch: usize, exp: i64, c: Rational) {
        self.eta.push((branch - 1, exp, c));
    }

    /// `A_i = (c t_1^e, 0, ..., t_i, ...)` for `i` in `from..=b`, with
    /// predicted pole `-c t_i^-2`.
    fn tails(&mut self, from: usize, e: u32) {
        for i in from..=self.b {
            let c = self.v(&format!("A{i}(1,{e})"));
            self.gen(format!("A{i}"), vec![(1, e, c.clone()), (i, 1, one())]);
            self.pole(i, -2, -c);
        }
    }
}

fn one() -> Rational {
    Rational::one()
}

fn build(id: FamilyId, b: usize, params: &CrimpingParams, k: usize) -> Result<FamilyInstance> {
    let mut s = Builder {
        b,
        k,
        p: params,
        gens: Vec::new(),
        eta: Vec::new(),
    };
    match id {
        FamilyId::H1111 => {
            let a311 = s.v("A3(1,1)");
            let a312 = s.v("A3(1,2)");
            let a321 = s.v("A3(2,1)");
            let a411 = s.v("A4(1,1)");
            let a412 = s.v("A4(1,2)");
            let a421 = s.v("A4(2,1)");
            let b212 = s.v("B2(1,2)");
            // `delta` from the parameters actually given, so that a forced
            // degeneration is reflected in the predicted differential
            let delta = &a311 * &a421 / (&a321 * &a411);
            s.gen(
                "A3",
                vec![
                    (1, 1, a311),
                    (1, 2, a312.clone()),
                    (2, 1, a321.clone()),
                    (3, 1, one()),
                ],
            );
            s.gen(
                "A4",
                vec![
                    (1, 1, a411.clone()),
                    (1, 2, a412.clone()),
                    (2, 1, a421),
                    (4, 1, one()),
                ],
            );
            s.gen("B2", vec![(1, 2, b212.clone()), (2, 2, one())]);
            for j in 5..=b {
                let c = s.v(&format!("A{j}(1,2)"));
                s.gen(format!("A{j}"), vec![(1, 2, c.clone()), (j, 1, one())]);
            }
            s.pole(1, -3, one());
            s.pole(2, -3, -b212.clone());
            s.pole(3, -3, &a321 * &a321 * &b212 * (one() - &delta));
            s.pole(3, -2, -a312);
            s.pole(4, -3, &a411 * &a411 * (&delta - one()));
            s.pole(4, -2, -a412);
            for j in 5..=b {
                let c = s.v(&format!("A{j}(1,2)"));
                s.pole(j, -2, -c);
            }
        }
        FamilyId::H211 => {
            let a313 = s.v("A3(1,3)");
            let a321 = s.v("A3(2,1)");
            let b113 = s.v("B1(1,3)");
            let b213 = s.v("B2(1,3)");
            s.gen(
                "A3",
                vec![(1, 3, a313.clone()), (2, 1, a321.clone()), (3, 1, one())],
            );
            s.gen("B1", vec![(1, 2, one()), (1, 3, b113.clone())]);
            s.gen("B2", vec![(1, 3, b213.clone()), (2, 2, one())]);
            s.pole(1, -4, one());
            s.pole(1, -3, -b113);
            s.pole(2, -3, -b213.clone());
            s.pole(3, -3, &b213 * &a321 * &a321);
            s.pole(3, -2, -a313);
            s.tails(4, 3);
        }
        FamilyId::H22odd => {
            let b113 = s.v("B1(1,3)");
            let b213 = s.v("B2(1,3)");
            let c213 = s.v("C2(1,3)");
            s.gen("B1", vec![(1, 2, one()), (1, 3, b113.clone())]);
            s.gen("B2", vec![(1, 3, b213.clone()), (2, 2, one())]);
            s.gen("C2", vec![(1, 3, c213.clone()), (2, 3, one())]);
            s.pole(1, -4, one());
            s.pole(1, -3, -b113);
            s.pole(2, -4, -c213);
            s.pole(2, -3, -b213);
            s.tails(3, 3);
        }
        FamilyId::H22even => {
            let a1 = s.v("A2(1,1)");
            let a2 = s.v("A2(1,2)");
            let a3 = s.v("A2(1,3)");
            s.gen(
                "A2",
                vec![
                    (1, 1, a1.clone()),
                    (1, 2, a2.clone()),
                    (1, 3, a3.clone()),
                    (2, 1, one()),
                ],
            );
            if b == 2 {
                s.gen("D1", vec![(1, 4, one()), (2, 4, -one())]);
            }
            let two = rat(2, 1);
            s.pole(1, -4, one());
            s.pole(1, -3, -(&two * &a2 / &a1));
            s.pole(1, -2, -(&a3 / &a1 - &two * &a2 * &a2 / (&a1 * &a1)));
            s.pole(2, -4, -(&a1 * &a1 * &a1));
            s.tails(3, 3);
        }
        FamilyId::H31 => {
            let a212 = s.v("A2(1,2)");
            let a214 = s.v("A2(1,4)");
            let c114 = s.v("C1(1,4)");
            s.gen(
                "A2",
                vec![(1, 2, a212.clone()), (1, 4, a214.clone()), (2, 1, one())],
            );
            s.gen("C1", vec![(1, 3, one()), (1, 4, c114.clone())]);
            s.pole(1, -5, one());
            s.pole(1, -4, -c114);
            s.pole(1, -3, -(&a214 / &a212));
            s.pole(2, -3, -(&a212 * &a212));
            s.tails(3, 4);
        }
        FamilyId::H4odd => {
            let c115 = s.v("C1(1,5)");
            let d115 = s.v("D1(1,5)");
            s.gen("C1", vec![(1, 3, one()), (1, 5, c115.clone())]);
            s.gen("D1", vec![(1, 4, one()), (1, 5, d115.clone())]);
            s.pole(1, -6, one());
            s.pole(1, -5, -d115);
            s.pole(1, -4, -c115);
            s.tails(2, 5);
        }
        FamilyId::H4even => {
            let b113 = s.v("B1(1,3)");
            let b115 = s.v("B1(1,5)");
            s.gen(
                "B1",
                vec![(1, 2, one()), (1, 3, b113.clone()), (1, 5, b115.clone())],
            );
            s.pole(1, -6, one());
            s.pole(1, -5, -(rat(2, 1) * b113));
            s.pole(1, -3, -b115);
            s.tails(2, 5);
        }
    }
    let k0 = id.conductor_exponent();
    for i in 1..=b {
        for j in k0..2 * k0 {
            s.gen(format!("M{i}^{j}"), vec![(i, j as u32, one())]);
        }
    }
    let predicted = Predicted {
        gap_sequence: id.gap_sequence().to_vec(),
        stratum: id.stratum().to_vec(),
        component: id.component(),
        crimping_shape: crimping_shape(id, b),
        multiplicities: id.multiplicities(b),
    };
    Ok(FamilyInstance {
        id,
        b,
        k,
        params: params.clone(),
        generators: s.gens,
        predicted_eta: MeroDifferential::from_pole_terms(b, s.eta),
        predicted,
    })
}
