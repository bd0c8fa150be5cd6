//! Every family member, simplified and random, passes its verification.

use glab_core::families::{instantiate, verify_instance, CrimpingParams, FamilyId};
use glab_core::DEFAULT_TRUNCATION as K;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn simplified_members_up_to_six_branches() {
    for id in FamilyId::ALL {
        for b in id.b_min()..=6 {
            let inst = instantiate(id, b, &CrimpingParams::simplified(id, b), K).unwrap();
            let report = verify_instance(&inst);
            assert!(report.all_passed(), "{id} b={b}\n{report}");
        }
    }
}

#[test]
fn random_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for id in FamilyId::ALL {
        for b in id.b_min()..=id.b_min() + 2 {
            for _ in 0..3 {
                let p = CrimpingParams::random(id, b, &mut rng);
                let inst = instantiate(id, b, &p, K).unwrap();
                let report = verify_instance(&inst);
                assert!(report.all_passed(), "{id} b={b} {p:?}\n{report}");
            }
        }
    }
}
