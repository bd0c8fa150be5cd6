//! End-to-end acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the summary is always printed; the
//! process fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use glab_cli::commands::{falsify::run_falsify, family::verify_family};
use glab_cli::GermFile;
use glab_core::dualizing::{find_generator, omega_module};
use glab_core::families::{
    hyperelliptic_involution, instantiate, instantiate_unchecked, verify_instance, CrimpingParams,
    FamilyId,
};
use glab_core::germ::{closure, is_symmetric_semigroup, monomial_germ, semigroup_gaps};
use glab_core::theta::{
    parity_report, plucker_dual_counts, theta_counts_smooth, weierstrass_total_weight,
    ThetaLocalData, HYPERELLIPTIC_WEIERSTRASS_POINTS, HYPERELLIPTIC_WEIERSTRASS_WEIGHT,
};
use glab_core::{
    rat, GermElement, SubalgebraBasis, SubstitutionMap, TruncSeries, DEFAULT_TRUNCATION as K,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn example(name: &str) -> GermFile {
    GermFile::load(&examples_dir().join(name)).expect("example parses")
}

fn example_germ(name: &str) -> SubalgebraBasis {
    let g = example(name).resolve().unwrap();
    closure(&g.elements(), g.b, g.k).unwrap()
}

/// Random germs on 1 to 4 branches: up to three random generators plus
/// `m~^(k/2)`, so every sample is certified at order `k`.
fn random_germs(count: usize, seed: u64) -> Vec<(Vec<GermElement>, SubalgebraBasis)> {
    let k = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let b = rng.gen_range(1..=4);
            let mut gens: Vec<GermElement> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let terms: Vec<_> = (0..rng.gen_range(1..=4))
                        .map(|_| {
                            let c = rng.gen_range(-2i64..=2);
                            (rng.gen_range(0..b), rng.gen_range(1..k as u32), rat(c, 1))
                        })
                        .collect();
                    GermElement::from_terms(b, k, terms)
                })
                .collect();
            for i in 0..b {
                for j in k / 2..k {
                    gens.push(GermElement::monomial(b, k, i, j as u32));
                }
            }
            let r = closure(&gens, b, k).unwrap();
            (gens, r)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut instances = 0;
    for id in FamilyId::ALL {
        for b in id.b_min()..=6 {
            let report =
                verify_family(id, b, 50, 1000 + b as u64, K, 0).map_err(|e| e.to_string())?;
            for s in &report.verdicts.samples {
                let failed: Vec<_> = s
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.name)
                    .collect();
                ensure(failed.is_empty(), || {
                    format!(
                        "{id} b={b} sample {} fails {failed:?} with {:?}",
                        s.index, s.params
                    )
                })?;
                for required in [
                    "gap_sequence",
                    "gorenstein_serre",
                    "genus",
                    "eta_descends",
                    "eta_generates",
                    "stratum",
                ] {
                    ensure(s.checks.iter().any(|c| c.name == required), || {
                        format!("{id} b={b} sample {} skipped {required}", s.index)
                    })?;
                }
            }
            instances += report.verdicts.samples.len();
        }
    }
    Ok(format!("{instances} random family members verified"))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for b in 2..=5 {
        let r = run_falsify(&[3], b, 200, 2, 0).map_err(|e| e.to_string())?;
        ensure(r.verdicts.gorenstein == 0, || {
            format!("[3] at b={b}: Gorenstein sample found")
        })?;
        notes.push(format!("[3] b={b}: {}/200 realised", r.verdicts.realised));
    }
    let r = run_falsify(&[2, 1], 3, 200, 2, 0).map_err(|e| e.to_string())?;
    ensure(r.verdicts.gorenstein == 0, || {
        "[2,1] at b=3: Gorenstein sample found".into()
    })?;
    ensure(r.verdicts.realised > 0, || {
        "[2,1] at b=3 never realised".into()
    })?;
    notes.push(format!("[2,1] b=3: {}/200 realised", r.verdicts.realised));

    let out = glab_core::families::falsify(&[2, 1], 4, 200, 2).map_err(|e| e.to_string())?;
    let hit = out.first_hit.ok_or("[2,1] at b=4: no hit")?;
    // confirm the hit from scratch
    let g = closure(&hit.generators, 4, hit.truncation).map_err(|e| e.to_string())?;
    ensure(g.gap_sequence().dims() == [2, 1], || {
        format!("hit has gaps {}", g.gap_sequence())
    })?;
    ensure(
        g.is_gorenstein_serre().map_err(|e| e.to_string())?.0,
        || "hit is not Gorenstein".into(),
    )?;
    notes.push(format!("[2,1] b=4: hit at sample {}", hit.index));
    Ok(notes.join("; "))
}

fn criterion_3() -> Outcome {
    let mut p = CrimpingParams::simplified(FamilyId::H1111, 4);
    p.set("A3(1,1)", rat(1, 1));
    p.fill_derived(FamilyId::H1111);
    ensure(instantiate(FamilyId::H1111, 4, &p, K).is_err(), || {
        "Delta = 1 was accepted".into()
    })?;
    let inst = instantiate_unchecked(FamilyId::H1111, 4, &p, K).map_err(|e| e.to_string())?;
    let report = verify_instance(&inst);
    let serre = report.get("gorenstein_serre").ok_or("no Serre check")?;
    ensure(!serre.passed, || {
        format!("Serre check passed: {}", serre.witness)
    })?;
    Ok(format!("Delta = 1 fails Serre ({})", serre.witness))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sets: Vec<Vec<u64>> = vec![vec![3, 4], vec![3, 5, 7]];
    let mut symmetric = 0;
    while sets.len() < 100 {
        let n = rng.gen_range(1..=4);
        let mut gens: Vec<u64> = (0..n).map(|_| rng.gen_range(2..=12)).collect();
        gens.sort_unstable();
        gens.dedup();
        match semigroup_gaps(&gens) {
            Ok(g) if g.len() <= 8 && !sets.contains(&gens) => sets.push(gens),
            _ => {}
        }
    }
    for gens in &sets {
        let gaps = semigroup_gaps(gens).unwrap();
        let kunz = is_symmetric_semigroup(&gaps);
        let serre = monomial_germ(gens)
            .unwrap()
            .is_gorenstein_serre()
            .unwrap()
            .0;
        ensure(kunz == serre, || {
            format!("<{gens:?}>: Kunz {kunz}, Serre {serre}")
        })?;
        symmetric += kunz as usize;
    }
    let verdict = |g: &[u64]| monomial_germ(g).unwrap().is_gorenstein_serre().unwrap().0;
    ensure(verdict(&[3, 4]) && !verdict(&[3, 5, 7]), || {
        "reference semigroups wrong".into()
    })?;
    Ok(format!(
        "{} semigroups agree ({symmetric} symmetric)",
        sets.len()
    ))
}

fn criterion_5() -> Outcome {
    let samples = random_germs(150, 5);
    for (_, r) in &samples {
        let w = omega_module(r).map_err(|e| e.to_string())?;
        ensure(w.dimension == r.delta(), || {
            format!("dim {} vs delta {}", w.dimension, r.delta())
        })?;
    }
    let mut family_members = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for id in FamilyId::ALL {
        for b in id.b_min()..=6 {
            let inst = instantiate(id, b, &CrimpingParams::random(id, b, &mut rng), K).unwrap();
            let r = inst.germ().unwrap();
            ensure(omega_module(&r).unwrap().dimension == r.delta(), || {
                format!("{id} b={b}")
            })?;
            family_members += 1;
        }
    }
    for b in 3..=5 {
        let gens: Vec<_> = (0..b).map(|i| GermElement::monomial(b, K, i, 1)).collect();
        let r = closure(&gens, b, K).unwrap();
        ensure(omega_module(&r).unwrap().dimension == r.delta(), || {
            format!("b-fold point b={b}")
        })?;
        let search = find_generator(&r).map_err(|e| e.to_string())?;
        ensure(search.generator.is_none(), || {
            format!("b={b}: a sampled differential generates")
        })?;
    }
    Ok(format!(
        "dim = delta on {} random germs and {family_members} family members; no generator on the rational 3,4,5-fold points",
        samples.len()
    ))
}

fn criterion_6() -> Outcome {
    let counts = |name: &str, beta: u32| {
        let data = ThetaLocalData::from_germ(example_germ(name), 0, beta).unwrap();
        let p = parity_report(&data).unwrap();
        (p.even_count, p.odd_count, 1u128 << data.j2_exponent())
    };
    let (e, o, _) = counts("two_cusps.json", 0);
    ensure((e, o) == (0, 1), || format!("two cusps give ({e},{o})"))?;
    let (e, o, _) = counts("a7.json", 0);
    ensure((e, o) == (1, 0), || format!("A7 gives ({e},{o})"))?;
    ensure(theta_counts_smooth(3) == (36, 28), || {
        "smooth genus 3".into()
    })?;
    let smooth = parity_report(&ThetaLocalData::smooth(3)).unwrap();
    ensure((smooth.even_count, smooth.odd_count) == (36, 28), || {
        "smooth report".into()
    })?;

    let mut reports = 0;
    let mut check_total = |e: u128, o: u128, total: u128, what: &str| {
        reports += 1;
        ensure(e + o == total, || format!("{what}: {e} + {o} != {total}"))
    };
    for g in 0..6 {
        let p = parity_report(&ThetaLocalData::smooth(g)).unwrap();
        check_total(p.even_count, p.odd_count, 1 << (2 * g), "smooth")?;
    }
    for id in FamilyId::ALL {
        for b in id.b_min()..=6 {
            let inst = instantiate(id, b, &CrimpingParams::simplified(id, b), K).unwrap();
            for (g, beta) in [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1)] {
                let data = ThetaLocalData::from_germ(inst.germ().unwrap(), g, beta).unwrap();
                match parity_report(&data) {
                    Ok(p) => check_total(
                        p.even_count,
                        p.odd_count,
                        1 << data.j2_exponent(),
                        id.name(),
                    )?,
                    // l ≢ 0 is impossible with trivial J_2
                    Err(_) => ensure(g + beta == 0, || format!("{id}: report refused"))?,
                }
            }
        }
    }
    let (e, o, total) = counts("node.json", 1);
    check_total(e, o, total, "node")?;
    ensure((e, o) == (1, 1), || "node with beta = 1".into())?;
    Ok(format!(
        "(0,1), (1,0), (36,28); even + odd = |J_2| in {reports} reports"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for (id, forced) in [
        (FamilyId::H22even, None),
        (FamilyId::H4even, None),
        (FamilyId::H1111, Some("A3(1,1)")),
        (FamilyId::H211, Some("B1(1,3)")),
    ] {
        for b in id.b_min()..=6 {
            for _ in 0..3 {
                let mut p = CrimpingParams::random(id, b, &mut rng);
                if let Some(s) = forced {
                    p.set(s, rat(0, 1));
                    p.fill_derived(id);
                }
                let inst = instantiate(id, b, &p, K).map_err(|e| e.to_string())?;
                let iota = hyperelliptic_involution(&inst)
                    .ok_or_else(|| format!("{id} b={b}: no involution"))?;
                let r = inst.germ().unwrap();
                ensure(iota.is_involution(K).unwrap(), || {
                    format!("{id} b={b}: not involutive")
                })?;
                ensure(iota.preserves(&r).unwrap(), || {
                    format!("{id} b={b}: R not preserved")
                })?;
                let pulled = inst.predicted_eta.pull_back(&iota).unwrap().pole_part();
                ensure(pulled == inst.predicted_eta.neg().pole_part(), || {
                    format!("{id} b={b}: iota* eta != -eta")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} members: iota^2 = id, iota*R = R, iota* eta = -eta"
    ))
}

fn criterion_8() -> Outcome {
    let pl = plucker_dual_counts(4).map_err(|e| e.to_string())?;
    ensure(pl == (28, 24), || {
        format!("plucker_dual_counts(4) = {pl:?}")
    })?;
    let w = weierstrass_total_weight(3);
    ensure(w == 24, || format!("weierstrass_total_weight(3) = {w}"))?;
    ensure(
        HYPERELLIPTIC_WEIERSTRASS_POINTS * HYPERELLIPTIC_WEIERSTRASS_WEIGHT == w,
        || "8 x 3 != 24".into(),
    )?;
    Ok("(28, 24), 24, 8 x 3 = 24".into())
}

/// `(gaps, delta, genus, d_i)` of a germ.
fn invariants(r: &SubalgebraBasis) -> (Vec<usize>, usize, usize, Vec<usize>) {
    let (delta, genus) = r.delta_genus();
    (
        r.gap_sequence().dims().to_vec(),
        delta,
        genus,
        r.conductor().unwrap().multiplicities,
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut samples = random_germs(120, 99);
    for id in FamilyId::ALL {
        for b in id.b_min()..=6 {
            let inst = instantiate(id, b, &CrimpingParams::random(id, b, &mut rng), K).unwrap();
            let r = inst.germ().unwrap();
            samples.push((inst.elements(), r));
        }
    }
    let mut gorenstein = 0;
    for (gens, r) in &samples {
        let (b, k) = (r.b(), r.truncation());
        let maximal: Vec<_> = r
            .basis()
            .into_iter()
            .filter(|g| g.valuation() != Some(0))
            .collect();
        ensure(&closure(&maximal, b, k).unwrap() == r, || {
            "closure is not idempotent".into()
        })?;
        let mut shuffled = gens.clone();
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        ensure(&closure(&shuffled, b, k).unwrap() == r, || {
            "closure depends on generator order".into()
        })?;
        ensure(r.gap_sequence().is_monoid_below(k), || {
            format!("gaps {} not a monoid", r.gap_sequence())
        })?;
        let c = r.conductor().unwrap();
        if c.len_r_mod_c == r.delta() {
            gorenstein += 1;
            ensure(c.total() == 2 * r.delta(), || "sum d_i != 2 delta".into())?;
        }
    }

    let mut reparams = 0;
    for id in FamilyId::ALL {
        let b = id.b_min();
        let inst = instantiate(id, b, &CrimpingParams::random(id, b, &mut rng), K).unwrap();
        let base = invariants(&inst.germ().unwrap());
        for _ in 0..20 {
            let us = (0..b)
                .map(|_| {
                    let lead = loop {
                        let x: i64 = rng.gen_range(-3..=3);
                        if x != 0 {
                            break x;
                        }
                    };
                    let terms = [
                        (1, rat(lead, 1)),
                        (2, rat(rng.gen_range(-3..=3), 1)),
                        (3, rat(rng.gen_range(-3..=3), 2)),
                    ];
                    TruncSeries::from_terms(K as i64, terms)
                })
                .collect();
            let phi = SubstitutionMap::reparametrisation(us).unwrap();
            let moved: Vec<_> = inst
                .elements()
                .iter()
                .map(|g| phi.apply(g).unwrap())
                .collect();
            let r = closure(&moved, b, K).unwrap();
            ensure(invariants(&r) == base, || format!("{id}: invariants moved"))?;
            reparams += 1;
        }
    }
    Ok(format!(
        "{} samples ({gorenstein} Gorenstein), {reparams} reparametrisations",
        samples.len()
    ))
}

fn glab(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_glab"))
        .args(args)
        .env_remove("GLAB_DEFAULT_K")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code().is_some(), || {
        format!("glab {args:?} was killed")
    })?;
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let mut comparisons = 0;
    let mut same = |runs: Vec<Vec<&str>>| -> Result<(), String> {
        let first = glab(&runs[0])?;
        ensure(!first.is_empty(), || {
            format!("glab {:?} printed nothing", runs[0])
        })?;
        for args in &runs {
            for _ in 0..2 {
                ensure(glab(args)? == first, || {
                    format!("glab {args:?} output differs")
                })?;
                comparisons += 1;
            }
        }
        Ok(())
    };
    let verify = [
        "verify-family",
        "H1111",
        "--branches",
        "5",
        "--samples",
        "12",
        "--seed",
        "3",
        "--json",
    ];
    same(
        ["1", "2", "4"]
            .iter()
            .map(|j| verify.iter().copied().chain(["--jobs", j]).collect())
            .collect(),
    )?;
    let falsify = [
        "falsify",
        "--profile",
        "2,1",
        "--branches",
        "4",
        "--samples",
        "40",
        "--seed",
        "5",
        "--json",
    ];
    same(
        ["1", "3"]
            .iter()
            .map(|j| falsify.iter().copied().chain(["--jobs", j]).collect())
            .collect(),
    )?;

    let mut files = 0;
    for entry in std::fs::read_dir(examples_dir()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let parsed = GermFile::parse(&text, "example").map_err(|e| e.to_string())?;
        let again =
            GermFile::parse(&parsed.to_json(), "reserialised").map_err(|e| e.to_string())?;
        ensure(again == parsed, || {
            format!("{}: round trip changed the germ", path.display())
        })?;
        ensure(parsed.to_json() == text, || {
            format!("{}: serialisation is not canonical", path.display())
        })?;
        let p = path.to_str().unwrap();
        if parsed.resolve().is_ok() {
            same(vec![vec!["analyze", p, "--json"]])?;
        }
        files += 1;
    }
    Ok(format!(
        "{comparisons} byte-identical reruns, {files} example files round-trip"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("classification table", criterion_1),
        ("negative results", criterion_2),
        ("cross-ratio degeneration", criterion_3),
        ("Kunz equivalence", criterion_4),
        ("duality dimensions", criterion_5),
        ("theta parity", criterion_6),
        ("hyperelliptic involutions", criterion_7),
        ("classical counts", criterion_8),
        ("engine invariants", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
