//! Generator maps between the braid groups of a quiver with potential and
//! of its mutation, and the symmetric-group shadow of the isomorphism with
//! the braid twist group.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::presentations::{br_qp_forms, PresentationError};
use crate::qp::{mutate, Qp, QpError};
use crate::surface::{
    canonical_triangulation, dual_endpoints, flip_neighborhood, qp_from_triangulation, signatures_up_to,
    validate_triangulation, DecoratedTriangulation, SurfaceError,
};
use crate::verifier::perm::Perm;
use crate::verifier::transport::{TransportOutcome, Transporter};
use crate::word::{GenSym, Substitution, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Qp(#[from] QpError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Word(#[from] WordError),
}

fn check_vertex(qp: &Qp, v: &GenSym) -> Result<(), IsoError> {
    if qp.vertices().contains(v) {
        Ok(())
    } else {
        Err(IsoError::UnknownVertex(v.to_string()))
    }
}

/// `α ↦ α^γ` when the quiver has an arrow `γ → α`, otherwise `α ↦ α`.
pub fn theta_flat(qp: &Qp, v: &GenSym) -> Result<Substitution, IsoError> {
    check_vertex(qp, v)?;
    let gamma = Word::gen(v);
    let mut sub = Substitution::default();
    for a in qp.vertices() {
        let img = if qp.arrow_count(v, a) > 0 {
            Word::gen(a).conj(&gamma)
        } else {
            Word::gen(a)
        };
        sub.insert(a.clone(), img);
    }
    Ok(sub)
}

/// `α ↦ α^{γ⁻¹}` when the mutated quiver has an arrow `α → γ`, otherwise `α ↦ α`.
pub fn theta_sharp(qp: &Qp, v: &GenSym) -> Result<Substitution, IsoError> {
    check_vertex(qp, v)?;
    let gamma_inv = Word::gen(v).inverse();
    let mut sub = Substitution::default();
    for a in qp.vertices() {
        let img = if qp.arrow_count(a, v) > 0 {
            Word::gen(a).conj(&gamma_inv)
        } else {
            Word::gen(a)
        };
        sub.insert(a.clone(), img);
    }
    Ok(sub)
}

/// Certifies, for every relator of `Br(qp)`, that its image under `θ♭` at
/// `v` is trivial in the braid group of the mutation.
pub fn theta_transport(qp: &Qp, v: &GenSym, tr: &mut Transporter) -> Result<Vec<TransportOutcome>, IsoError> {
    let flat = theta_flat(qp, v)?;
    let (m, _) = mutate(qp, v)?;
    let target = br_qp_forms(&m)?;
    let words: HashSet<Word> = target.iter().map(|f| f.word.clone()).collect();
    br_qp_forms(qp)?
        .iter()
        .map(|f| tr.transport(f, &flat, &target, &words).map_err(IsoError::from))
        .collect()
}

/// Every (QP, vertex) pair from triangulations within `flips` flips of the
/// canonical triangulations with at most `max_arcs` arcs, without repeats up
/// to arrow renaming.
pub fn mutation_instances(max_arcs: i64, flips: usize) -> Result<Vec<(Qp, GenSym)>, IsoError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for sig in signatures_up_to(max_arcs) {
        let start = canonical_triangulation(&sig)?;
        for t in flip_neighborhood(&start, flips) {
            let qp = qp_from_triangulation(&t)?;
            let norm = qp.normalize().to_json();
            for v in qp.vertices().clone() {
                if seen.insert((norm.clone(), v.clone())) {
                    out.push((qp.clone(), v));
                }
            }
        }
    }
    Ok(out)
}

/// Each arc goes to the transposition of the decorations on its two sides.
pub fn kappa_permutation(t: &DecoratedTriangulation) -> Result<BTreeMap<GenSym, Perm>, IsoError> {
    let report = validate_triangulation(t);
    if !report.is_valid() {
        return Err(SurfaceError::Invalid(report.diagnostics.join("; ")).into());
    }
    let n = t.triangles.len();
    let mut out = BTreeMap::new();
    for arc in t.arcs() {
        let (i, j) = dual_endpoints(t, &arc)?;
        out.insert(arc, Perm::transposition(n, i as usize, j as usize));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qp::{Arrow, Term};
    use crate::surface::SurfaceSignature;

    fn v(s: &str) -> GenSym {
        GenSym::new(s).unwrap()
    }

    fn a2() -> Qp {
        Qp::new(
            [v("a"), v("b")],
            vec![Arrow {
                id: "al".into(),
                src: v("a"),
                tgt: v("b"),
            }],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn a2_maps() {
        let q = a2();
        let f = theta_flat(&q, &v("a")).unwrap();
        assert_eq!(f.get(&v("b")).unwrap().to_string(), "-a b a");
        assert_eq!(f.get(&v("a")).unwrap().to_string(), "a");
        assert!(theta_flat(&q, &v("b")).unwrap().is_identity());
        let (m, _) = mutate(&q, &v("a")).unwrap();
        let s = theta_sharp(&m, &v("a")).unwrap();
        assert_eq!(s.get(&v("b")).unwrap().to_string(), "a b -a");
        assert!(f.then(&s).unwrap().is_identity());
        assert!(theta_flat(&q, &v("z")).is_err());
    }

    #[test]
    fn triangle_flat_and_inverse() {
        let arrow = |id: &str, s: &str, t: &str| Arrow {
            id: id.into(),
            src: v(s),
            tgt: v(t),
        };
        let q = Qp::new(
            [v("a"), v("b"), v("c")],
            vec![arrow("al", "a", "b"), arrow("be", "b", "c"), arrow("ga", "c", "a")],
            vec![Term {
                coef: 1,
                cycle: vec!["al".into(), "be".into(), "ga".into()],
            }],
        )
        .unwrap();
        let f = theta_flat(&q, &v("a")).unwrap();
        assert_eq!(f.get(&v("b")).unwrap().to_string(), "-a b a");
        assert_eq!(f.get(&v("c")).unwrap().to_string(), "c");
        let (m, _) = mutate(&q, &v("a")).unwrap();
        let s = theta_sharp(&m, &v("a")).unwrap();
        assert!(s.then(&f).unwrap().is_identity());
    }

    #[test]
    fn pentagon_kappa() {
        let t = canonical_triangulation(&SurfaceSignature::new(0, vec![5]).unwrap()).unwrap();
        let k = kappa_permutation(&t).unwrap();
        assert_eq!(k[&v("g1")], Perm::transposition(3, 1, 2));
        assert_eq!(k[&v("g2")], Perm::transposition(3, 2, 3));
    }
}
