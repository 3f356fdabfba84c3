use std::collections::HashSet;
use std::path::PathBuf;

use braidtwist::mutation_iso::theta_transport;
use braidtwist::presentations::{br_qp_forms, RelationForm};
use braidtwist::qp::{Arrow, Qp, Term};
use braidtwist::verifier::cases::{instantiate, local_config, prove_local, CaseLibrary};
use braidtwist::verifier::relation_search::prove_relation;
use braidtwist::verifier::script::{check_corpus, check_derivation, load_scripts, DerivationScript, Library, Step};
use braidtwist::verifier::search::{prove_trivial, SearchConfig, Verdict};
use braidtwist::verifier::transport::{Resolution, Transporter, BOUNDED};
use braidtwist::word::{expand_relation, GenSym, RelationKind, Substitution, Word};

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn v(s: &str) -> GenSym {
    GenSym::new(s).unwrap()
}

fn rel(kind: RelationKind, a: &str, b: &str) -> (String, Word) {
    (
        format!("{kind}({a},{b})"),
        expand_relation(kind, &[w(a), w(b)]).unwrap().remove(0),
    )
}

fn cfg(depth: usize) -> SearchConfig {
    SearchConfig {
        max_depth: depth,
        max_states: 200_000,
        max_len: None,
    }
}

fn certificate(vd: Verdict) -> DerivationScript {
    match vd {
        Verdict::Equal { certificate, .. } => certificate,
        Verdict::Unknown { explored } => panic!("no certificate after {explored} states"),
    }
}

fn replays(s: &DerivationScript) -> bool {
    check_derivation(s, &mut Library::new()).passed
}

#[test]
fn braid_relation_certificate_replays() {
    // in a 3-cycle the third pair braids
    let relators = vec![
        rel(RelationKind::Br, "a", "b"),
        rel(RelationKind::Br, "a", "c"),
        rel(RelationKind::Co, "b a -b", "c"),
    ];
    let s = certificate(prove_relation(
        &relators,
        &[],
        RelationKind::Br,
        &w("b"),
        &w("c"),
        &cfg(6),
    ));
    assert!(replays(&s));
    let back = DerivationScript::from_json(&s.to_json()).unwrap();
    assert_eq!(back, s);
    assert!(replays(&back));
}

#[test]
fn trivial_word_certificate_replays() {
    let relators = vec![rel(RelationKind::Co, "a", "b"), rel(RelationKind::Co, "a", "c")];
    let goal = w("a b c -a -c -b").conj(&w("c"));
    let cert = certificate(prove_trivial(&relators, &goal, &cfg(6)));
    assert!(matches!(cert.steps[0], Step::FreeReduce));
    assert!(replays(&cert));
}

#[test]
fn unprovable_goal_stays_unknown() {
    let relators = vec![rel(RelationKind::Co, "a", "b")];
    let vd = prove_relation(&relators, &[], RelationKind::Co, &w("a"), &w("c"), &cfg(4));
    assert!(!vd.is_equal());
    assert!(!prove_trivial(&relators, &w("a c -a -c"), &cfg(4)).is_equal());
}

#[test]
fn tampered_certificate_fails() {
    let relators = vec![rel(RelationKind::Br, "a", "b")];
    let mut s = certificate(prove_trivial(&relators, &w("a b a -b -a -b"), &cfg(3)));
    s.steps.retain(|st| !matches!(st, Step::InsertRelator { .. }));
    let r = check_derivation(&s, &mut Library::new());
    assert!(!r.passed);
    assert_eq!(r.failed_step, Some(s.steps.len() + 1));
}

fn form(kind: RelationKind, args: &[&str]) -> RelationForm {
    let args: Vec<Word> = args.iter().map(|a| w(a)).collect();
    RelationForm {
        tag: "t".into(),
        kind,
        word: expand_relation(kind, &args).unwrap().remove(0),
        args,
    }
}

#[test]
fn local_scripts_carry_over_under_renaming() {
    let forms = vec![
        form(RelationKind::Br, &["p", "q"]),
        form(RelationKind::Br, &["p", "r"]),
        form(RelationKind::Co, &["q", "r"]),
        form(RelationKind::Br, &["r", "s"]),
    ];
    let config = local_config(&forms, RelationKind::Br, &[w("q").conj(&w("p")), w("r")]);
    // the unrelated generator s is not part of the configuration
    assert_eq!(config.forms.len(), 3);
    let script = certificate(prove_local(&config, &cfg(8)));
    assert_eq!(script.note.as_deref(), Some(config.key.as_str()));
    assert!(replays(&script));

    let renamed = instantiate(&script, &config.renaming).unwrap();
    assert!(replays(&renamed));
    let mut lib = CaseLibrary::new();
    lib.insert(script);
    assert_eq!(lib.lookup(&config), Some(renamed));

    // the same shape on other names has the same key
    let other = vec![
        form(RelationKind::Br, &["y", "x"]),
        form(RelationKind::Br, &["y", "z"]),
        form(RelationKind::Co, &["x", "z"]),
    ];
    let c2 = local_config(&other, RelationKind::Br, &[w("x").conj(&w("y")), w("z")]);
    assert_eq!(c2.key, config.key);
    assert!(replays(&lib.lookup(&c2).unwrap()));
}

#[test]
fn renaming_a_passing_script_keeps_it_passing() {
    let relators = vec![rel(RelationKind::Br, "a", "b"), rel(RelationKind::Co, "b", "c")];
    let s = certificate(prove_relation(
        &relators,
        &[],
        RelationKind::Br,
        &w("a").conj(&w("c")),
        &w("b"),
        &cfg(6),
    ));
    let mut sub = Substitution::default();
    for (from, to) in [("a", "u1"), ("b", "u2"), ("c", "u3")] {
        sub.insert(v(from), w(to));
    }
    assert!(replays(&instantiate(&s, &sub).unwrap()));
}

fn triangle_qp() -> Qp {
    let arrow = |id: &str, s: &str, t: &str| Arrow {
        id: id.into(),
        src: v(s),
        tgt: v(t),
    };
    Qp::new(
        [v("a"), v("b"), v("c")],
        vec![arrow("al", "a", "b"), arrow("be", "b", "c"), arrow("ga", "c", "a")],
        vec![Term {
            coef: 1,
            cycle: vec!["al".into(), "be".into(), "ga".into()],
        }],
    )
    .unwrap()
}

#[test]
fn triangle_relations_transport_through_theta() {
    let qp = triangle_qp();
    let lib = CaseLibrary::new();
    for vertex in ["a", "b", "c"] {
        let mut tr = Transporter::new(BOUNDED, &lib);
        let out = theta_transport(&qp, &v(vertex), &mut tr).unwrap();
        assert_eq!(out.len(), br_qp_forms(&qp).unwrap().len());
        for o in out {
            assert!(o.failure.is_none(), "{}: {:?}", o.tag, o.failure);
            assert_ne!(o.resolution, Resolution::Unresolved, "{} at {vertex}", o.tag);
        }
    }
}

#[test]
fn transport_rejects_foreign_certificates() {
    let forms = vec![form(RelationKind::Br, &["a", "b"])];
    let words: HashSet<Word> = HashSet::new();
    let lib = CaseLibrary::new();
    let mut tr = Transporter::new(BOUNDED, &lib);
    let sub = Substitution::identity(&[v("a"), v("b")]);
    let out = tr.transport(&forms[0], &sub, &forms, &words).unwrap();
    // the certificate cites Br(a,b), which is not among the allowed relators
    assert!(out.failure.is_some());
}

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts")
}

#[test]
fn shipped_negatives_fail_where_expected() {
    let scripts = load_scripts(&corpus()).unwrap();
    let reports = check_corpus(&scripts, &mut Library::new());
    let mut negatives = 0;
    for (s, r) in scripts.iter().zip(&reports) {
        match s.expect_fail_step {
            Some(k) => {
                negatives += 1;
                assert_eq!(r.failed_step, Some(k), "{}", s.name);
            }
            None => assert!(r.passed, "{r}"),
        }
    }
    assert!(negatives >= 5);
}

#[test]
fn citations_need_the_cited_script() {
    let scripts = load_scripts(&corpus()).unwrap();
    let citing = scripts
        .iter()
        .find(|s| !s.external_refs().is_empty())
        .expect("a script citing another");
    assert!(!check_derivation(citing, &mut Library::new()).passed);
}
