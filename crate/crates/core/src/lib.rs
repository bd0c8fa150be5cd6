//! Exact-arithmetic engine for isolated curve singularities.
//!
//! A germ with `b` branches is presented as a subalgebra `R` of the
//! normalisation `R~ = Q[[t_1]] x ... x Q[[t_b]]`, computed modulo
//! `m~^K`. From that presentation the crate derives the gap sequence,
//! delta invariant, genus and conductor, decides the Gorenstein property
//! (Serre's length criterion, and Kunz symmetry for monomial germs), solves
//! for dualising differentials, and instantiates the seven genus-3
//! Gorenstein families together with their stratum and theta-parity labels.
//!
//! ```
//! use glab_core::germ::{closure, GermElement};
//!
//! // E6: the cusp C[[t^3, t^4]]
//! let gens = vec![
//!     GermElement::monomial(1, 12, 0, 3),
//!     GermElement::monomial(1, 12, 0, 4),
//! ];
//! let r = closure(&gens, 1, 12).unwrap();
//! assert_eq!(r.gap_sequence().dims(), &[1, 1, 0, 0, 1]);
//! assert_eq!(r.delta(), 3);
//! assert!(r.is_gorenstein_serre().unwrap().0);
//! ```

pub mod dualizing;
pub mod error;
pub mod families;
pub mod germ;
pub mod linalg;
pub mod series;
pub mod theta;

pub use dualizing::{MeroDifferential, OmegaBasis, StratumSignature};
pub use error::{Error, Result};
pub use families::{CrimpingParams, FamilyId, FamilyInstance};
pub use germ::{GapSequence, GermElement, SubalgebraBasis, SubstitutionMap};
pub use series::{MeroSeries, TruncSeries};

use num_bigint::BigInt;

/// Exact rational numbers, always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Default truncation order: twice the largest conductor exponent (6) that
/// occurs among the genus-3 families.
pub const DEFAULT_TRUNCATION: usize = 12;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (optional sign, arbitrary size integers).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("{s:?} is not a rational number p/q"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(Error::InvalidInput(format!("{s:?} has zero denominator")));
    }
    Ok(Rational::new(num, den))
}
