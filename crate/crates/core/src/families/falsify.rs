//! Randomised search for Gorenstein germs with a prescribed gap sequence.
//!
//! Used to corroborate non-existence results: if no family exists with a
//! given gap profile and branch count, no sample should ever pass Serre's
//! test.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::germ::{closure, GapSequence, GermElement, SubalgebraBasis};
use crate::rat;

/// Rejection-sampling restarts per sample.
pub const ATTEMPTS_PER_SAMPLE: usize = 16;

/// A Gorenstein germ found by the sampler.
#[derive(Clone, Debug)]
pub struct FalsifyHit {
    pub index: usize,
    pub generators: Vec<GermElement>,
    pub truncation: usize,
    /// `(len(R/c), delta)`.
    pub certificate: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct FalsifyOutcome {
    pub profile: Vec<usize>,
    pub b: usize,
    pub samples: usize,
    /// Samples whose germ realised the profile.
    pub realised: usize,
    /// Realised samples that are Gorenstein.
    pub gorenstein: usize,
    /// The lowest-index Gorenstein sample.
    pub first_hit: Option<FalsifyHit>,
}

impl FalsifyOutcome {
    /// Samples that ran out of attempts without realising the profile.
    pub fn exhausted(&self) -> usize {
        self.samples - self.realised
    }

    /// The sampler-exhaustion warning, if any sample failed.
    pub fn exhaustion_warning(&self) -> Option<Error> {
        (self.realised < self.samples).then(|| Error::SamplerExhausted {
            profile: self.profile.clone(),
            b: self.b,
        })
    }
}

enum Sample {
    Exhausted,
    Realised {
        gens: Vec<GermElement>,
        certificate: (usize, usize),
    },
}

/// Draws `samples` random subalgebras realising `gap_profile` on `b`
/// branches and tests each for the Gorenstein property.
///
/// Sample `i` uses its own stream of `ChaCha8Rng` seeded with `seed`, so the
/// outcome does not depend on how samples are scheduled across threads.
pub fn falsify(
    gap_profile: &[usize],
    b: usize,
    samples: usize,
    seed: u64,
) -> Result<FalsifyOutcome> {
    if samples == 0 || b == 0 {
        return Err(Error::InvalidInput(
            "falsify needs samples >= 1 and b >= 1".into(),
        ));
    }
    let profile = GapSequence::new(b - 1, gap_profile.to_vec())
        .dims()
        .to_vec();
    let results: Vec<Sample> = (0..samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            draw(&profile, b, &mut rng)
        })
        .collect();

    let k = truncation_for(&profile);
    let mut outcome = FalsifyOutcome {
        profile,
        b,
        samples,
        realised: 0,
        gorenstein: 0,
        first_hit: None,
    };
    for (index, s) in results.into_iter().enumerate() {
        if let Sample::Realised { gens, certificate } = s {
            outcome.realised += 1;
            if certificate.0 == certificate.1 {
                outcome.gorenstein += 1;
                outcome.first_hit.get_or_insert(FalsifyHit {
                    index,
                    generators: gens,
                    truncation: k,
                    certificate,
                });
            }
        }
    }
    Ok(outcome)
}

/// Gaps vanish from `L + 1` on, so `2 (L + 1)` certifies the conductor.
fn truncation_for(profile: &[usize]) -> usize {
    2 * (profile.len() + 1)
}

fn draw(profile: &[usize], b: usize, rng: &mut ChaCha8Rng) -> Sample {
    if profile.iter().any(|&a| a > b) {
        return Sample::Exhausted;
    }
    let k = truncation_for(profile);
    for _ in 0..ATTEMPTS_PER_SAMPLE {
        if let Some((gens, r)) = attempt(profile, b, k, rng) {
            if let Ok((_, certificate)) = r.is_gorenstein_serre() {
                return Sample::Realised { gens, certificate };
            }
        }
    }
    Sample::Exhausted
}

/// Adds random generators degree by degree until each graded piece has the
/// target size, giving up on overshoot.
fn attempt(
    profile: &[usize],
    b: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Option<(Vec<GermElement>, SubalgebraBasis)> {
    let target = |i: usize| b - profile.get(i - 1).copied().unwrap_or(0);
    let mut gens: Vec<GermElement> = Vec::new();
    for i in 1..k {
        let mut reached = false;
        for _ in 0..b + 2 {
            let have = b - current(&gens, b, k)?.gap_sequence().get(i);
            if have > target(i) {
                return None;
            }
            if have == target(i) {
                reached = true;
                break;
            }
            let terms: Vec<(usize, u32, i64)> = (0..b)
                .flat_map(|br| (i..k).map(move |e| (br, e as u32)))
                .map(|(br, e)| (br, e, rng.gen_range(-3..=3)))
                .collect();
            if terms.iter().all(|&(_, e, c)| e as usize != i || c == 0) {
                continue;
            }
            gens.push(GermElement::from_terms(
                b,
                k,
                terms.into_iter().map(|(br, e, c)| (br, e, rat(c, 1))),
            ));
        }
        if !reached && b - current(&gens, b, k)?.gap_sequence().get(i) != target(i) {
            return None;
        }
    }
    let r = current(&gens, b, k)?;
    (r.gap_sequence().dims() == profile).then_some((gens, r))
}

fn current(gens: &[GermElement], b: usize, k: usize) -> Option<SubalgebraBasis> {
    if gens.is_empty() {
        // only the constants so far
        return closure(&[GermElement::zero(b, k)], b, k).ok();
    }
    closure(gens, b, k).ok()
}
