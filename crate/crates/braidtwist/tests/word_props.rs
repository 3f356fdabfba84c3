use std::collections::BTreeMap;

use braidtwist::verifier::artin_action;
use braidtwist::verifier::search::{prove_trivial, SearchConfig};
use braidtwist::word::{
    conjugate, expand_equations, expand_relation, reduce, GenSym, Letter, RelationKind, Substitution, Word,
};
use proptest::prelude::*;

const GENS: [&str; 4] = ["a", "b", "c", "d"];

fn letter() -> impl Strategy<Value = Letter> {
    (0..GENS.len(), any::<bool>()).prop_map(|(i, inv)| Letter::new(GenSym::new(GENS[i]).unwrap(), inv))
}

fn raw() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 0..12)
}

fn word() -> impl Strategy<Value = Word> {
    raw().prop_map(reduce)
}

fn sigma_word(aleph: u32) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..aleph, any::<bool>()), 0..8).prop_map(|ls| {
        reduce(
            ls.into_iter()
                .map(|(i, inv)| Letter::new(GenSym::new(&format!("s{i}")).unwrap(), inv)),
        )
    })
}

fn substitution() -> impl Strategy<Value = Substitution> {
    prop::collection::vec(word(), GENS.len()).prop_map(|ws| {
        let map: BTreeMap<GenSym, Word> = GENS.iter().zip(ws).map(|(g, w)| (GenSym::new(g).unwrap(), w)).collect();
        Substitution::new(map)
    })
}

fn is_reduced(w: &Word) -> bool {
    w.letters().windows(2).all(|p| p[0].inverse() != p[1])
}

proptest! {
    #[test]
    fn reduce_is_idempotent(r in raw()) {
        let w = reduce(r);
        prop_assert!(is_reduced(&w));
        prop_assert_eq!(reduce(w.letters().to_vec()), w);
    }

    #[test]
    fn text_round_trips(w in word()) {
        prop_assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn group_laws(u in word(), v in word(), x in word()) {
        prop_assert_eq!(u.mul(&v).mul(&x), u.mul(&v.mul(&x)));
        prop_assert!(u.mul(&u.inverse()).is_empty());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
    }

    #[test]
    fn conjugation_acts_on_the_right(a in word(), b in word(), c in word()) {
        prop_assert_eq!(conjugate(&a, &b), b.inverse().mul(&a).mul(&b));
        prop_assert_eq!(a.conj(&b).conj(&c), a.conj(&b.mul(&c)));
        prop_assert_eq!(a.mul(&c).conj(&b), a.conj(&b).mul(&c.conj(&b)));
    }

    #[test]
    fn cyclic_core_is_a_conjugate(w in word()) {
        let core = w.cyclic_core();
        prop_assert!(core.len() <= w.len());
        let n = core.len();
        prop_assert!(n < 2 || core.letters()[0].inverse() != core.letters()[n - 1]);
        let k = (w.len() - n) / 2;
        let outer = reduce(w.letters()[..k].to_vec());
        prop_assert_eq!(core.conj(&outer.inverse()), w);
    }

    #[test]
    fn substitution_is_a_homomorphism(s in substitution(), u in word(), v in word()) {
        prop_assert_eq!(s.apply(&u.mul(&v)).unwrap(), s.apply(&u).unwrap().mul(&s.apply(&v).unwrap()));
        prop_assert_eq!(s.apply(&u.inverse()).unwrap(), s.apply(&u).unwrap().inverse());
    }

    #[test]
    fn substitutions_compose(s in substitution(), t in substitution(), w in word()) {
        let st = s.then(&t).unwrap();
        prop_assert_eq!(st.apply(&w).unwrap(), t.apply(&s.apply(&w).unwrap()).unwrap());
    }

    #[test]
    fn relators_of_images_are_images_of_relators(s in substitution()) {
        let a = Word::parse("a").unwrap();
        let b = Word::parse("b").unwrap();
        let c = Word::parse("c").unwrap();
        for (kind, args) in [
            (RelationKind::Co, vec![a.clone(), b.clone()]),
            (RelationKind::Br, vec![a.clone(), b.clone()]),
            (RelationKind::SCo, vec![a.clone(), b.clone(), c.clone()]),
            (RelationKind::Tr, vec![a.clone(), b.clone(), c.clone()]),
        ] {
            let images: Vec<Word> = args.iter().map(|w| s.apply(w).unwrap()).collect();
            let direct = expand_relation(kind, &images).unwrap();
            let pushed: Vec<Word> = expand_relation(kind, &args).unwrap().iter().map(|r| s.apply(r).unwrap()).collect();
            prop_assert_eq!(direct, pushed);
        }
    }

    /// The third cyclic equation `abca = cabc` of a triangle follows from the
    /// two stated ones.
    #[test]
    fn triangle_third_equation(u in word(), v in word(), x in word()) {
        let eqs = expand_equations(RelationKind::Tr, &[u.clone(), v.clone(), x.clone()]).unwrap();
        let relators: Vec<(String, Word)> = eqs
            .iter()
            .enumerate()
            .map(|(i, (l, r))| (format!("Tr #{}", i + 1), l.mul(&r.inverse())))
            .collect();
        let goal = u.mul(&v).mul(&x).mul(&u).mul(&x.mul(&u).mul(&v).mul(&x).inverse());
        let cfg = SearchConfig { max_depth: 2, max_states: 10_000, max_len: None };
        prop_assert!(prove_trivial(&relators, &goal, &cfg).is_equal());
    }

    #[test]
    fn artin_action_is_a_homomorphism(u in sigma_word(5), v in sigma_word(5)) {
        let uv = artin_action(&u.mul(&v), 5).unwrap();
        let composed = artin_action(&u, 5).unwrap().compose(&artin_action(&v, 5).unwrap());
        prop_assert_eq!(uv.images(), composed.images());
        prop_assert!(artin_action(&u.mul(&u.inverse()), 5).unwrap().is_identity());
        prop_assert!(artin_action(&u, 5).unwrap().compose(&artin_action(&u.inverse(), 5).unwrap()).is_identity());
    }

    /// The braid group acts on the free group, fixing the product of the generators.
    #[test]
    fn artin_action_fixes_the_boundary(w in sigma_word(6)) {
        let phi = artin_action(&w, 6).unwrap();
        let boundary = Word::parse("x1 x2 x3 x4 x5 x6").unwrap();
        prop_assert_eq!(phi.apply(&boundary).unwrap(), boundary);
    }
}
