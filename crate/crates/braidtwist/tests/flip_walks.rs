use braidtwist::mutation_iso::{theta_flat, theta_sharp};
use braidtwist::qp::{equal_up_to_arrow_renaming, mutate, validate_surface_qp};
use braidtwist::surface::*;
use proptest::prelude::*;

/// A signature with a few arcs, and a walk of flips given as arc choices.
fn walk() -> impl Strategy<Value = (SurfaceSignature, Vec<(usize, bool)>)> {
    let sigs: Vec<SurfaceSignature> = signatures_up_to(7).into_iter().filter(|s| s.arc_count() >= 2).collect();
    (
        prop::sample::select(sigs),
        prop::collection::vec((0usize..64, any::<bool>()), 1..12),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_walks_stay_compatible((sig, steps) in walk()) {
        let mut t = canonical_triangulation(&sig).unwrap();
        for (pick, forward) in steps {
            let arcs: Vec<_> = t.arcs().into_iter().collect();
            let arc = &arcs[pick % arcs.len()];
            let qp = qp_from_triangulation(&t).unwrap();
            prop_assert!(validate_surface_qp(&qp).is_empty());
            let (m, _) = mutate(&qp, arc).unwrap();
            let (back, _) = mutate(&m, arc).unwrap();
            prop_assert!(equal_up_to_arrow_renaming(&back, &qp));
            let flat = theta_flat(&qp, arc).unwrap();
            let sharp = theta_sharp(&m, arc).unwrap();
            prop_assert!(flat.then(&sharp).unwrap().is_identity());

            let dir = if forward { FlipDirection::Forward } else { FlipDirection::Backward };
            let f = flip(&t, arc, dir).unwrap();
            let q = qp_from_triangulation(&f.new_triangulation).unwrap();
            prop_assert!(equal_up_to_arrow_renaming(&q, &m), "{} at {}", sig, arc);
            let report = validate_triangulation(&f.new_triangulation);
            prop_assert!(report.is_valid(), "{:?}", report.diagnostics);
            prop_assert_eq!(report.arcs as i64, sig.arc_count());
            t = f.new_triangulation;
        }
    }

    /// Flipping forward then backward along the same arc restores the triangulation.
    #[test]
    fn flips_undo((sig, steps) in walk()) {
        let t = canonical_triangulation(&sig).unwrap();
        let arcs: Vec<_> = t.arcs().into_iter().collect();
        let arc = &arcs[steps[0].0 % arcs.len()];
        let there = flip(&t, arc, FlipDirection::Forward).unwrap().new_triangulation;
        let back = flip(&there, arc, FlipDirection::Backward).unwrap().new_triangulation;
        prop_assert_eq!(back.canonical(), t.canonical());
    }
}
