//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use braidtwist::mutation_iso::{kappa_permutation, mutation_instances, theta_flat, theta_sharp};
use braidtwist::presentations::*;
use braidtwist::qp::{equal_up_to_arrow_renaming, mutate};
use braidtwist::surface::*;
use braidtwist::verifier::perm::standard_assignment;
use braidtwist::verifier::script::{check_corpus, load_scripts};
use braidtwist::verifier::search::{named_relators, prove_trivial, SearchConfig, Verdict};
use braidtwist::verifier::transport::BOUNDED;
use braidtwist::verifier::*;
use braidtwist::word::{GenSym, Letter, Word};

const SEED: u64 = 0x5eed_b7a1;
/// The flip corpus: canonical triangulations with n ≤ 6 and everything
/// within 4 flips of them.
const MAX_ARCS: i64 = 6;
const FLIPS: usize = 4;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn script_dir() -> PathBuf {
    std::env::var_os("BRAIDTWIST_SCRIPT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts"))
}

fn flip_corpus() -> Vec<DecoratedTriangulation> {
    signatures_up_to(MAX_ARCS)
        .iter()
        .flat_map(|sig| flip_neighborhood(&canonical_triangulation(sig).unwrap(), FLIPS))
        .collect()
}

fn counting() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut checked = 0;
    let mut bad = Vec::new();
    while checked < 50 {
        let genus = rng.random_range(0..=2);
        let b = rng.random_range(1..=3usize);
        let boundary: Vec<u32> = (0..b).map(|_| rng.random_range(1..=8 / b as u32)).collect();
        let Ok(sig) = SurfaceSignature::new(genus, boundary) else {
            continue;
        };
        let t = canonical_triangulation(&sig).unwrap();
        let (g, b, m) = (sig.genus as i64, sig.boundary.len() as i64, sig.marked() as i64);
        let n = t.arcs().len() as i64;
        let aleph = t.triangles.len() as i64;
        if n != 6 * g + 3 * b + m - 6 || 3 * aleph != 2 * n + m || aleph - n != 2 - 2 * g - b {
            bad.push(sig.to_string());
        }
        checked += 1;
    }
    outcome(
        bad.is_empty(),
        format!("{checked} signatures, {} mismatches {bad:?}", bad.len()),
    )
}

fn flip_mutation(corpus: &[DecoratedTriangulation]) -> Outcome {
    let (mut checked, mut bad) = (0, 0);
    for t in corpus {
        let qp = qp_from_triangulation(t).unwrap();
        for arc in t.arcs() {
            let (m, _) = mutate(&qp, &arc).unwrap();
            for dir in [FlipDirection::Backward, FlipDirection::Forward] {
                let f = flip(t, &arc, dir).unwrap();
                let q = qp_from_triangulation(&f.new_triangulation).unwrap();
                checked += 1;
                if !equal_up_to_arrow_renaming(&q, &m) {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("{checked} flips, {bad} disagree with mutation"))
}

fn involution(instances: &[(braidtwist::qp::Qp, GenSym)]) -> Outcome {
    let mut bad = 0;
    for (qp, v) in instances {
        let (m, _) = mutate(qp, v).unwrap();
        let (mm, _) = mutate(&m, v).unwrap();
        if !equal_up_to_arrow_renaming(&mm, qp) {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("{} double mutations, {bad} not the identity", instances.len()),
    )
}

fn theta_inverse(instances: &[(braidtwist::qp::Qp, GenSym)]) -> Outcome {
    let mut bad = 0;
    for (qp, v) in instances {
        let (m, _) = mutate(qp, v).unwrap();
        let round = theta_flat(qp, v).unwrap().then(&theta_sharp(&m, v).unwrap()).unwrap();
        if !round.is_identity() {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("{} instances, {bad} not the identity", instances.len()),
    )
}

fn theta_transport(instances: &[(braidtwist::qp::Qp, GenSym)]) -> Outcome {
    let library = match CaseLibrary::load(&script_dir()) {
        Ok(l) => l,
        Err(e) => return outcome(false, format!("case scripts: {e}")),
    };
    let mut tr = Transporter::new(BOUNDED, &library);
    let (mut relators, mut by_search, mut by_case, mut max_depth) = (0, 0, 0, 0);
    let mut unresolved = Vec::new();
    for (qp, v) in instances {
        for o in braidtwist::mutation_iso::theta_transport(qp, v, &mut tr).unwrap() {
            relators += 1;
            match (&o.resolution, &o.failure) {
                (_, Some(e)) => unresolved.push(format!("{} at {v}: {e}", o.tag)),
                (Resolution::Search(d), None) => {
                    by_search += 1;
                    max_depth = max_depth.max(*d);
                }
                (Resolution::Case(_), None) => by_case += 1,
                (Resolution::Unresolved, None) => unresolved.push(format!("{} at {v}: {}", o.tag, o.image)),
            }
        }
    }
    for u in unresolved.iter().take(5) {
        println!("    unresolved: {u}");
    }
    outcome(
        unresolved.is_empty(),
        format!(
            "{} instances, {relators} relators: {by_search} by search (depth ≤ {max_depth}), {by_case} by case script ({} scripts), {} unresolved",
            instances.len(),
            library.len(),
            unresolved.len()
        ),
    )
}

fn derivation_corpus() -> Outcome {
    let scripts = match load_scripts(&script_dir()) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let reports = check_corpus(&scripts, &mut Library::new());
    let (mut positive, mut negative, mut bad) = (0, 0, Vec::new());
    for (s, r) in scripts.iter().zip(&reports) {
        match s.expect_fail_step {
            None => {
                positive += 1;
                if !r.passed {
                    bad.push(r.to_string());
                }
            }
            Some(k) => {
                negative += 1;
                if r.passed || r.failed_step != Some(k) {
                    bad.push(format!("{}: expected failure at step {k}, got {r}", s.name));
                }
            }
        }
    }
    for b in bad.iter().take(5) {
        println!("    {b}");
    }
    outcome(
        bad.is_empty() && negative >= 5,
        format!("{positive} scripts, {negative} negative controls, {} wrong", bad.len()),
    )
}

fn random_word(rng: &mut StdRng, aleph: u32) -> Word {
    let len = rng.random_range(1..=6);
    let letters = (0..len).map(|_| {
        let g = gen("s", rng.random_range(1..aleph));
        Letter::new(g, rng.random_bool(0.5))
    });
    braidtwist::word::reduce(letters)
}

fn disk_faithfulness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut notes = Vec::new();
    let mut passed = true;
    for aleph in 3..=7u32 {
        let s = DecoratedSurface::new(0, 1, aleph).unwrap();
        let p = bt(&s).unwrap();
        let ident: BTreeMap<GenSym, Word> = p.generators().iter().map(|g| (g.clone(), Word::gen(g))).collect();
        let rep = check_relators_via_artin(&p, &ident, aleph as usize).unwrap();
        passed &= rep.passed();
        let rels = named_relators(&p);
        let cfg = SearchConfig {
            max_depth: 6,
            max_states: 2_000,
            max_len: None,
        };
        let (mut sampled, mut acting) = (0, 0);
        while sampled < 100 {
            let w = random_word(&mut rng, aleph);
            if w.is_empty() || prove_trivial(&rels, &w, &cfg).is_equal() {
                continue;
            }
            sampled += 1;
            if !artin_action(&w, aleph as usize).unwrap().is_identity() {
                acting += 1;
            }
        }
        passed &= acting == sampled;
        notes.push(format!(
            "ℵ={aleph}: relators trivial {}/{}, sampled words non-trivial {acting}/{sampled}",
            rep.checked - rep.failures.len(),
            rep.checked
        ));
    }
    outcome(passed, notes.join("; "))
}

fn quotients() -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    for genus in 0..=1 {
        for boundary in 1..=4 {
            for aleph in 2..=6 {
                let s = DecoratedSurface {
                    genus,
                    boundary,
                    decorations: aleph,
                };
                if s.check().is_err() || s.loops() > 3 {
                    continue;
                }
                let a = sbg(&s).unwrap();
                let b = sbg_alt(&s).unwrap();
                let mut ps = vec![("sbg", a.clone()), ("sbg_alt", b.clone())];
                if let Ok(p) = bt(&s) {
                    let ab = abelianization(&p);
                    if ab.rank != 1 || !ab.torsion.is_empty() {
                        bad.push(format!("bt{s}: {ab}"));
                    }
                    ps.push(("bt", p));
                }
                if abelianization(&a) != abelianization(&b) {
                    bad.push(format!("sbg{s} and sbg_alt differ"));
                }
                for (name, p) in ps {
                    count += 1;
                    if !check_permutation_quotient(&p, &standard_assignment(&p, aleph as usize)).passed() {
                        bad.push(format!("{name}{s}: permutation quotient"));
                    }
                }
            }
        }
    }
    // the annulus with one marked point on each side has the Kronecker
    // quiver and no relations: its group is free of rank 2
    for sig in signatures_up_to(9) {
        if sig.decorations() > 6 || 2 * sig.genus as usize + sig.boundary.len() > 4 || sig.decorations() < 3 {
            continue;
        }
        let t = canonical_triangulation(&sig).unwrap();
        let p = br_qp(&qp_from_triangulation(&t).unwrap()).unwrap();
        count += 1;
        let ab = abelianization(&p);
        if ab.rank != 1 || !ab.torsion.is_empty() {
            bad.push(format!("br_qp{sig}: {ab}"));
        }
        if !check_permutation_quotient(&p, &kappa_permutation(&t).unwrap()).passed() {
            bad.push(format!("br_qp{sig}: permutation quotient"));
        }
    }
    outcome(bad.is_empty(), format!("{count} presentations, failures {bad:?}"))
}

fn rho_round_trip() -> Outcome {
    let cfg = SearchConfig {
        max_depth: 10,
        max_states: 100_000,
        max_len: None,
    };
    let (mut checked, mut bad) = (0, Vec::new());
    for genus in 0..=1 {
        for boundary in 1..=3 {
            for aleph in 4..=6 {
                let s = DecoratedSurface {
                    genus,
                    boundary,
                    decorations: aleph,
                };
                if s.check().is_err() || !s.bt_supported() || s.loops() > 2 {
                    continue;
                }
                let p = bt(&s).unwrap();
                let rels = named_relators(&p);
                for t in 1..=s.loops() {
                    let round = rho(&s, t, 1).unwrap().then(&rho(&s, t, -1).unwrap()).unwrap();
                    for g in p.generators() {
                        checked += 1;
                        let img = round.apply(&Word::gen(g)).unwrap();
                        let goal = img.mul(&Word::gen(g).inverse());
                        if let Verdict::Equal { certificate, .. } = prove_trivial(&rels, &goal, &cfg) {
                            if check_derivation(&certificate, &mut Library::new()).passed {
                                continue;
                            }
                        }
                        bad.push(format!("{s} t={t} {g}"));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} generator images, failures {bad:?}"))
}

fn sbg_equivalence() -> Outcome {
    let library = CaseLibrary::new();
    let (mut checked, mut bad) = (0, Vec::new());
    for genus in 0..=1 {
        for boundary in 1..=2 {
            for aleph in 2..=5 {
                let s = DecoratedSurface {
                    genus,
                    boundary,
                    decorations: aleph,
                };
                let (d, e) = (sbg_forms(&s).unwrap(), sbg_alt_forms(&s).unwrap());
                for (src, tgt, dir) in [
                    (&d, &e, ChangeDirection::DeltaToEps),
                    (&e, &d, ChangeDirection::EpsToDelta),
                ] {
                    let sub = eps_delta_change(&s, dir);
                    let words: HashSet<Word> = tgt.iter().map(|f| f.word.clone()).collect();
                    let mut tr = Transporter::new(BOUNDED, &library);
                    for f in src {
                        checked += 1;
                        let o = tr.transport(f, &sub, tgt, &words).unwrap();
                        if o.resolution == Resolution::Unresolved || o.failure.is_some() {
                            bad.push(format!("{s} {dir:?} {}", f.tag));
                        }
                    }
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} transported relators, unresolved {bad:?}"),
    )
}

fn main() {
    let corpus = flip_corpus();
    let instances = mutation_instances(MAX_ARCS, FLIPS).unwrap();
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("counting identities", 1, Box::new(counting)),
        ("flip and mutation agree", 30, Box::new(|| flip_mutation(&corpus))),
        ("mutation is an involution", 10, Box::new(|| involution(&instances))),
        (
            "theta maps are mutually inverse",
            60,
            Box::new(|| theta_inverse(&instances)),
        ),
        (
            "theta transports relations",
            300,
            Box::new(|| theta_transport(&instances)),
        ),
        ("derivation corpus", 10, Box::new(derivation_corpus)),
        ("disk faithfulness", 10, Box::new(disk_faithfulness)),
        ("quotient checks", 10, Box::new(quotients)),
        ("rho round trip", 120, Box::new(rho_round_trip)),
        ("sbg and sbg_alt agree", 120, Box::new(sbg_equivalence)),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let o = run();
        let took = t0.elapsed();
        let ok = o.passed && took <= Duration::from_secs(*limit);
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {} [{:.2?} of {limit} s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            took
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
