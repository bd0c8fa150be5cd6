//! Crimping parameters: the coefficients that move a family member around
//! its analytic isomorphism class.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::{rat, Rational};

use super::FamilyId;

/// How a crimping coefficient may vary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamKind {
    /// Must be nonzero (a `G_m` factor of the crimping space).
    Unit,
    /// Any value (a `G_a` factor).
    Arbitrary,
    /// The analytic modulus of the `H(1^4)` family; any value except those
    /// making the cross-ratio 1.
    Modulus,
    /// Determined by the others.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    pub symbol: String,
    pub kind: ParamKind,
}

fn spec(symbol: impl Into<String>, kind: ParamKind) -> ParamSpec {
    ParamSpec {
        symbol: symbol.into(),
        kind,
    }
}

/// Parameter list of a family at branch count `b`, in canonical order.
pub fn param_specs(id: FamilyId, b: usize) -> Vec<ParamSpec> {
    use ParamKind::*;
    let tails =
        |from: usize, exp: u32| (from..=b).map(move |i| spec(format!("A{i}(1,{exp})"), Unit));
    match id {
        FamilyId::H1111 => [
            spec("A3(1,1)", Modulus),
            spec("A3(1,2)", Arbitrary),
            spec("A3(2,1)", Unit),
            spec("A4(1,1)", Unit),
            spec("A4(1,2)", Arbitrary),
            spec("A4(2,1)", Derived),
            spec("B2(1,2)", Unit),
        ]
        .into_iter()
        .chain(tails(5, 2))
        .collect(),
        FamilyId::H211 => [
            spec("A3(1,3)", Arbitrary),
            spec("A3(2,1)", Unit),
            spec("B1(1,3)", Arbitrary),
            spec("B2(1,3)", Unit),
        ]
        .into_iter()
        .chain(tails(4, 3))
        .collect(),
        FamilyId::H22odd => [
            spec("B1(1,3)", Arbitrary),
            spec("B2(1,3)", Arbitrary),
            spec("C2(1,3)", Unit),
        ]
        .into_iter()
        .chain(tails(3, 3))
        .collect(),
        FamilyId::H22even => [
            spec("A2(1,1)", Unit),
            spec("A2(1,2)", Arbitrary),
            spec("A2(1,3)", Arbitrary),
        ]
        .into_iter()
        .chain(tails(3, 3))
        .collect(),
        FamilyId::H31 => [
            spec("A2(1,2)", Unit),
            spec("A2(1,4)", Arbitrary),
            spec("C1(1,4)", Arbitrary),
        ]
        .into_iter()
        .chain(tails(3, 4))
        .collect(),
        FamilyId::H4odd => [spec("C1(1,5)", Arbitrary), spec("D1(1,5)", Arbitrary)]
            .into_iter()
            .chain(tails(2, 5))
            .collect(),
        FamilyId::H4even => [spec("B1(1,3)", Arbitrary), spec("B1(1,5)", Arbitrary)]
            .into_iter()
            .chain(tails(2, 5))
            .collect(),
    }
}

/// Named exact values for a family's crimping coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrimpingParams {
    values: BTreeMap<String, Rational>,
}

/// Value of the modulus `A3(1,1)` in the simplified `H(1^4)` member (cross-ratio 4).
pub const SIMPLIFIED_MODULUS: i64 = 2;

impl CrimpingParams {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, symbol: &str) -> Option<&Rational> {
        self.values.get(symbol)
    }

    pub fn set(&mut self, symbol: impl Into<String>, value: Rational) {
        self.values.insert(symbol.into(), value);
    }

    pub fn with(mut self, symbol: impl Into<String>, value: Rational) -> Self {
        self.set(symbol, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn require(&self, symbol: &str) -> Result<&Rational> {
        self.get(symbol)
            .ok_or_else(|| Error::MissingParam(symbol.to_string()))
    }

    /// Units set to 1 and arbitrary coefficients to 0, as in the legible
    /// normal forms; the `H(1^4)` modulus is [`SIMPLIFIED_MODULUS`].
    pub fn simplified(id: FamilyId, b: usize) -> Self {
        let mut p = Self::new();
        for s in param_specs(id, b) {
            let v = match s.kind {
                ParamKind::Unit => Rational::one(),
                ParamKind::Arbitrary => Rational::zero(),
                ParamKind::Modulus => rat(SIMPLIFIED_MODULUS, 1),
                ParamKind::Derived => continue,
            };
            p.set(s.symbol, v);
        }
        p.fill_derived(id);
        p
    }

    /// A random valid draw: units have numerator and denominator in
    /// `[-5, 5] \ {0}`, arbitrary coefficients numerator in `[-5, 5]`.
    /// Draws with cross-ratio 1 are rejected and redrawn.
    pub fn random<R: Rng + ?Sized>(id: FamilyId, b: usize, rng: &mut R) -> Self {
        let nonzero = |rng: &mut R| loop {
            let x: i64 = rng.gen_range(-5..=5);
            if x != 0 {
                return x;
            }
        };
        loop {
            let mut p = Self::new();
            for s in param_specs(id, b) {
                let v = match s.kind {
                    ParamKind::Unit => rat(nonzero(rng), nonzero(rng)),
                    ParamKind::Arbitrary | ParamKind::Modulus => {
                        let n = rng.gen_range(-5..=5);
                        rat(n, nonzero(rng))
                    }
                    ParamKind::Derived => continue,
                };
                p.set(s.symbol, v);
            }
            p.fill_derived(id);
            if id != FamilyId::H1111 || cross_ratio(&p).is_ok_and(|d| !d.is_one()) {
                return p;
            }
        }
    }

    /// Sets derived coefficients from the free ones (no-op if inputs are missing
    /// or a denominator vanishes).
    pub fn fill_derived(&mut self, id: FamilyId) {
        if id == FamilyId::H1111 {
            if let Some(v) = h1111_derived_a421(self) {
                self.set("A4(2,1)", v);
            }
        }
    }
}

impl fmt::Display for CrimpingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// `A4(2,1) = A4(1,1) A3(1,1) / (A3(2,1) B2(1,2))`.
fn h1111_derived_a421(p: &CrimpingParams) -> Option<Rational> {
    let a311 = p.get("A3(1,1)")?;
    let a321 = p.get("A3(2,1)")?;
    let a411 = p.get("A4(1,1)")?;
    let b212 = p.get("B2(1,2)")?;
    let den = a321 * b212;
    (!den.is_zero()).then(|| a411 * a311 / den)
}

/// The analytic invariant `Δ = A3(1,1) A4(2,1) / (A3(2,1) A4(1,1))` of an
/// `H(1^4)` member. Falls back to `A3(1,1)^2 / (A3(2,1)^2 B2(1,2))`, which
/// agrees under the derived constraint, when `A4(1,1)` is absent or zero.
pub fn cross_ratio(p: &CrimpingParams) -> Result<Rational> {
    let a311 = p.require("A3(1,1)")?;
    let a321 = p.require("A3(2,1)")?;
    let degenerate = |symbol: &str| Error::DegenerateParams {
        symbol: symbol.into(),
        reason: "vanishes in the denominator of the cross-ratio".into(),
    };
    if a321.is_zero() {
        return Err(degenerate("A3(2,1)"));
    }
    match (p.get("A4(2,1)"), p.get("A4(1,1)")) {
        (Some(a421), Some(a411)) if !a411.is_zero() => Ok(a311 * a421 / (a321 * a411)),
        _ => {
            let b212 = p.require("B2(1,2)")?;
            if b212.is_zero() {
                return Err(degenerate("B2(1,2)"));
            }
            Ok(a311 * a311 / (a321 * a321 * b212))
        }
    }
}

/// Alternate form `A3(1,1)^2 / (A3(2,1)^2 B2(1,2))` of the cross-ratio.
pub fn cross_ratio_alt(p: &CrimpingParams) -> Result<Rational> {
    let a311 = p.require("A3(1,1)")?;
    let a321 = p.require("A3(2,1)")?;
    let b212 = p.require("B2(1,2)")?;
    let den = a321 * a321 * b212;
    if den.is_zero() {
        return Err(Error::DegenerateParams {
            symbol: if a321.is_zero() { "A3(2,1)" } else { "B2(1,2)" }.into(),
            reason: "vanishes in the denominator of the cross-ratio".into(),
        });
    }
    Ok(a311 * a311 / den)
}
