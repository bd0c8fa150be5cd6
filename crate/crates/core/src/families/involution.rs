//! Hyperelliptic involutions of family members.
//!
//! An involution `ι` of the normalisation preserving `R` and acting on the
//! dualising generator by `ι*η = -η` certifies that the germ is
//! hyperelliptic. Extra tail branches `A_i = (c_i t_1^e, ..., t_i, ...)` are
//! swapped in consecutive pairs; with an odd number of tails the last one is
//! a Weierstrass branch and is flipped by `t ↦ -t`.

use num_traits::Zero;

use crate::germ::SubstitutionMap;
use crate::series::TruncSeries;
use crate::{rat, Rational};

use super::{FamilyId, FamilyInstance};

fn series(k: usize, terms: &[(i64, Rational)]) -> TruncSeries {
    TruncSeries::from_terms(k as i64, terms.iter().cloned())
}

/// Pairs tail branches `from, from+1`, `from+2, from+3`, ... (1-based) via
/// `ι*(t_i) = -(c_i / c_{i+1}) t_{i+1}`, flipping a leftover last branch.
fn pair_tails(
    map: &mut SubstitutionMap,
    inst: &FamilyInstance,
    from: usize,
    exp: u32,
) -> Option<()> {
    let k = inst.k;
    let coeff = |i: usize| inst.params.get(&format!("A{i}(1,{exp})")).cloned();
    let mut i = from;
    while i < inst.b {
        let ratio = -(coeff(i)? / coeff(i + 1)?);
        // ι*(t_i) = ratio * t_{i+1}
        map.swap_pair(i, i - 1, &series(k, &[(1, ratio)])).ok()?;
        i += 2;
    }
    if i == inst.b {
        map.set_branch(i - 1, series(k, &[(1, rat(-1, 1))])).ok()?;
    }
    Some(())
}

/// The hyperelliptic involution of `inst` when one exists: always for
/// `H(2,2)^even` and `H(4)^even`, for `H(1^4)` when `A3(1,1) = 0`, and for
/// `H(2,1,1)` when `B1(1,3) = 0`.
pub fn hyperelliptic_involution(inst: &FamilyInstance) -> Option<SubstitutionMap> {
    let k = inst.k;
    let p = |s: &str| inst.params.get(s).cloned();
    let mut map = SubstitutionMap::identity(inst.b, k);
    match inst.id {
        FamilyId::H1111 => {
            if !p("A3(1,1)")?.is_zero() {
                return None;
            }
            // ι*(t4) = A4(1,1) t1 + A4(1,2) t1^2
            map.swap_pair(0, 3, &series(k, &[(1, p("A4(1,1)")?), (2, p("A4(1,2)")?)]))
                .ok()?;
            // ι*(t3) = A3(2,1) t2 - (A3(1,2)/B2(1,2)) t2^2
            let c = -(p("A3(1,2)")? / p("B2(1,2)")?);
            map.swap_pair(1, 2, &series(k, &[(1, p("A3(2,1)")?), (2, c)]))
                .ok()?;
            pair_tails(&mut map, inst, 5, 2)?;
        }
        FamilyId::H211 => {
            if !p("B1(1,3)")?.is_zero() {
                return None;
            }
            map.set_branch(0, series(k, &[(1, rat(-1, 1))])).ok()?;
            // ι*(t3) = A3(2,1) t2 - (A3(1,3)/B2(1,3)) t2^2
            let c = -(p("A3(1,3)")? / p("B2(1,3)")?);
            map.swap_pair(1, 2, &series(k, &[(1, p("A3(2,1)")?), (2, c)]))
                .ok()?;
            pair_tails(&mut map, inst, 4, 3)?;
        }
        FamilyId::H22even => {
            // ι*(t2) = a1 t1 + a2 t1^2 + a3 t1^3
            let phi = series(
                k,
                &[(1, p("A2(1,1)")?), (2, p("A2(1,2)")?), (3, p("A2(1,3)")?)],
            );
            map.swap_pair(0, 1, &phi).ok()?;
            pair_tails(&mut map, inst, 3, 3)?;
        }
        FamilyId::H4even => {
            // B1 = s(t)^2 with s = t sqrt(1 + B1(1,3) t + B1(1,5) t^3); the
            // involution is s ↦ -s, i.e. t ↦ s^{-1}(-s(t)).
            let under_root = series(k, &[(0, rat(1, 1)), (1, p("B1(1,3)")?), (3, p("B1(1,5)")?)]);
            let s = under_root.sqrt_unit().ok()?.shift(1).truncated(k as i64);
            let u = s.revert().ok()?.substitute(&s.neg()).ok()?;
            map.set_branch(0, u).ok()?;
            pair_tails(&mut map, inst, 2, 5)?;
        }
        FamilyId::H22odd | FamilyId::H31 | FamilyId::H4odd => return None,
    }
    map.is_involution(k).ok()?.then_some(map)
}
