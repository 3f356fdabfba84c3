//! Regenerates the local case scripts used when bounded search cannot certify
//! a transported relator. Usage: `gen_cases <out-dir>`.

use std::collections::BTreeMap;
use std::time::Instant;

use braidtwist::mutation_iso::{mutation_instances, theta_flat};
use braidtwist::presentations::br_qp_forms;
use braidtwist::qp::mutate;
use braidtwist::verifier::cases::{local_config, prove_local, LocalConfig};
use braidtwist::verifier::search::{SearchConfig, Verdict};
use braidtwist::verifier::transport::BOUNDED;
use braidtwist::verifier::{CaseLibrary, Resolution, Transporter};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "scripts/cases".into());
    let t0 = Instant::now();
    let lib = CaseLibrary::new();
    let mut tr = Transporter::new(BOUNDED, &lib);
    let mut missing: BTreeMap<String, LocalConfig> = BTreeMap::new();
    let instances = mutation_instances(6, 4).expect("corpus");
    for (qp, v) in &instances {
        let flat = theta_flat(qp, v).unwrap();
        let (m, _) = mutate(qp, v).unwrap();
        let target = br_qp_forms(&m).unwrap();
        let words = target.iter().map(|f| f.word.clone()).collect();
        for f in br_qp_forms(qp).unwrap() {
            let o = tr.transport(&f, &flat, &target, &words).unwrap();
            assert!(o.failure.is_none(), "{:?}", o.failure);
            if o.resolution == Resolution::Unresolved {
                let args: Vec<_> = f.args.iter().map(|a| flat.apply(a).unwrap()).collect();
                let c = local_config(&target, f.kind, &args);
                missing.entry(c.key.clone()).or_insert(c);
            }
        }
    }
    eprintln!(
        "{} instances, {} configurations left, {:?}",
        instances.len(),
        missing.len(),
        t0.elapsed()
    );
    std::fs::create_dir_all(&out).unwrap();
    let deep = SearchConfig {
        max_depth: 40,
        max_states: 4_000_000,
        max_len: None,
    };
    for (i, c) in missing.values().enumerate() {
        match prove_local(c, &deep) {
            Verdict::Equal {
                mut certificate, depth, ..
            } => {
                certificate.name = format!("local-case-{:03}", i + 1);
                let path = format!("{out}/{}.json", certificate.name);
                std::fs::write(&path, certificate.to_json() + "\n").unwrap();
                eprintln!("{path}: {} moves, {} steps", depth, certificate.steps.len());
            }
            _ => eprintln!("no proof found: {}", c.key),
        }
    }
}
