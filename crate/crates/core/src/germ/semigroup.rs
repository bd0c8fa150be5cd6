//! Numerical semigroups and their monomial germs.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::germ::{closure, GermElement, SubalgebraBasis};

/// Gaps of the numerical semigroup generated by `generators`.
pub fn semigroup_gaps(generators: &[u64]) -> Result<BTreeSet<u64>> {
    let gens: Vec<u64> = generators.iter().copied().filter(|&g| g > 0).collect();
    let g = gens.iter().fold(0u64, |acc, &x| acc.gcd(&x));
    if g != 1 {
        return Err(Error::InfiniteGaps(generators.to_vec()));
    }
    let min = *gens.iter().min().expect("gcd 1 needs a generator");
    // once `min` consecutive members appear everything above is a member
    let mut member = vec![true];
    let mut run = 1u64;
    let mut n = 0u64;
    while run < min {
        n += 1;
        let m = gens.iter().any(|&x| x <= n && member[(n - x) as usize]);
        member.push(m);
        run = if m { run + 1 } else { 0 };
    }
    Ok((0..=n).filter(|&i| !member[i as usize]).collect())
}

/// Kunz symmetry: `n ∈ J ⇔ 2δ - 1 - n ∉ J` for `0 <= n <= 2δ - 1`, `δ = |J|`.
pub fn is_symmetric_semigroup(gaps: &BTreeSet<u64>) -> bool {
    let delta = gaps.len() as u64;
    if delta == 0 {
        return true;
    }
    let top = 2 * delta - 1;
    (0..=top).all(|n| gaps.contains(&n) != gaps.contains(&(top - n)))
}

/// The unibranch germ `Q[[t^g : g ∈ generators]]`, truncated at the smallest
/// even order that certifies its conductor.
pub fn monomial_germ(generators: &[u64]) -> Result<SubalgebraBasis> {
    let gaps = semigroup_gaps(generators)?;
    let conductor = gaps.last().map_or(0, |f| f + 1) as usize;
    let k = (2 * conductor).max(2);
    let gens: Vec<GermElement> = generators
        .iter()
        .filter(|&&g| g > 0 && (g as usize) < k)
        .map(|&g| GermElement::monomial(1, k, 0, g as u32))
        .collect();
    closure(&gens, 1, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Membership by brute force over nonnegative combinations.
    fn brute_gaps(gens: &[u64], limit: u64) -> BTreeSet<u64> {
        let mut member = vec![false; limit as usize + 1];
        member[0] = true;
        for n in 1..=limit as usize {
            member[n] = gens
                .iter()
                .any(|&g| g as usize <= n && member[n - g as usize]);
        }
        (0..=limit).filter(|&n| !member[n as usize]).collect()
    }

    #[test]
    fn gap_examples() {
        assert_eq!(semigroup_gaps(&[3, 4]).unwrap(), brute_gaps(&[3, 4], 12));
        assert_eq!(semigroup_gaps(&[3, 4]).unwrap(), BTreeSet::from([1, 2, 5]));
        assert_eq!(semigroup_gaps(&[2, 3]).unwrap(), BTreeSet::from([1]));
        assert_eq!(
            semigroup_gaps(&[3, 5, 7]).unwrap(),
            brute_gaps(&[3, 5, 7], 12)
        );
        assert_eq!(
            semigroup_gaps(&[3, 5, 7]).unwrap(),
            BTreeSet::from([1, 2, 4])
        );
        assert_eq!(semigroup_gaps(&[1]).unwrap(), BTreeSet::new());
        assert_eq!(
            semigroup_gaps(&[4, 6]).unwrap_err(),
            Error::InfiniteGaps(vec![4, 6])
        );
    }

    #[test]
    fn symmetry_examples() {
        assert!(is_symmetric_semigroup(&BTreeSet::from([1, 2, 5])));
        assert!(!is_symmetric_semigroup(&BTreeSet::from([1, 2, 4])));
        assert!(is_symmetric_semigroup(&BTreeSet::from([1])));
    }

    #[test]
    fn monomial_germ_matches_semigroup() {
        let r = monomial_germ(&[3, 5, 7]).unwrap();
        assert_eq!(r.delta(), 3);
        assert_eq!(r.conductor().unwrap().multiplicities, vec![5]);
    }

    proptest! {
        #[test]
        fn gaps_agree_with_brute_force(gens in proptest::collection::vec(2u64..12, 1..4)) {
            let g = gens.iter().fold(0u64, |a, &x| a.gcd(&x));
            prop_assume!(g == 1);
            prop_assert_eq!(semigroup_gaps(&gens).unwrap(), brute_gaps(&gens, 150));
        }
    }
}
