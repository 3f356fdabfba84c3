//! Regenerates the lemma scripts under `scripts/`. Each chain is stated with
//! its hypotheses in conjugation notation (`c^{a e}` is `(ae)⁻¹ c (ae)`,
//! `-a` is `a⁻¹`); the certificate is found by search and replayed before it
//! is written. Usage: `gen_lemmas <scripts-dir>`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use braidtwist::verifier::relation_search::prove_relation;
use braidtwist::verifier::script::{check_corpus, check_derivation, DerivationScript, Library, RelationSpec, Step};
use braidtwist::verifier::search::{prove_trivial, SearchConfig, Verdict};
use braidtwist::word::{expand_equations, GenSym, RelationKind, Substitution, Word};

// notation

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i] == b' ' {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expect(&mut self, c: u8) {
        assert_eq!(self.peek(), Some(c), "expected {} at {}", c as char, self.i);
        self.i += 1;
    }

    fn expr(&mut self) -> Word {
        let mut w = Word::empty();
        while let Some(c) = self.peek() {
            if c == b')' || c == b'}' || c == b',' || c == b';' || c == b'=' {
                break;
            }
            w = w.mul(&self.factor());
        }
        w
    }

    fn factor(&mut self) -> Word {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.i += 1;
        }
        let mut w = self.atom();
        while self.peek() == Some(b'^') {
            self.i += 1;
            let by = if self.peek() == Some(b'{') {
                self.i += 1;
                let e = self.expr();
                self.expect(b'}');
                e
            } else {
                self.factor()
            };
            w = w.conj(&by);
        }
        if neg {
            w.inverse()
        } else {
            w
        }
    }

    fn atom(&mut self) -> Word {
        if self.peek() == Some(b'(') {
            self.i += 1;
            let e = self.expr();
            self.expect(b')');
            return e;
        }
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.i]).unwrap();
        assert!(!name.is_empty(), "empty symbol at {start}");
        Word::gen(&GenSym::new(name).unwrap())
    }
}

fn word(text: &str) -> Word {
    let mut p = Parser {
        s: text.as_bytes(),
        i: 0,
    };
    let w = p.expr();
    assert_eq!(p.peek(), None, "trailing input in {text}");
    w
}

/// A relation in notation: `Br(a^{b}, c)`, `SCo(s; a, b)` or `lhs = rhs`.
#[derive(Clone)]
enum Rel {
    Kind(RelationKind, Vec<Word>),
    Eq(Word, Word),
    /// the goal of an earlier script
    Cite(String),
}

fn rel(text: &str) -> Rel {
    if let Some(name) = text.strip_prefix('@') {
        return Rel::Cite(name.to_string());
    }
    if let Some((l, r)) = text.split_once('=') {
        return Rel::Eq(word(l), word(r));
    }
    let (head, rest) = text.split_once('(').expect("relation");
    let kind = match head.trim() {
        "Co" => RelationKind::Co,
        "Br" => RelationKind::Br,
        "SCo" => RelationKind::SCo,
        "Tr" => RelationKind::Tr,
        other => panic!("unknown relation {other}"),
    };
    let body = rest.trim_end().strip_suffix(')').expect("closing paren");
    let mut p = Parser {
        s: body.as_bytes(),
        i: 0,
    };
    let mut args = vec![p.expr()];
    while matches!(p.peek(), Some(b',') | Some(b';')) {
        p.i += 1;
        args.push(p.expr());
    }
    assert_eq!(p.peek(), None, "trailing input in {text}");
    Rel::Kind(kind, args)
}

// lemma table

struct Lemma {
    dir: &'static str,
    name: String,
    note: String,
    defs: Vec<(String, String)>,
    hyps: Vec<String>,
    goal: String,
}

#[derive(Default)]
struct Table {
    lemmas: Vec<Lemma>,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn defs(xs: &[(&str, &str)]) -> Vec<(String, String)> {
    xs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

impl Table {
    fn one(&mut self, dir: &'static str, name: &str, note: &str, d: &[(&str, &str)], hyps: &[&str], goal: &str) {
        self.lemmas.push(Lemma {
            dir,
            name: name.to_string(),
            note: note.to_string(),
            defs: defs(d),
            hyps: strings(hyps),
            goal: goal.to_string(),
        });
    }

    /// Both directions of `left ⟺ right` under `hyps`.
    fn iff(&mut self, dir: &'static str, name: &str, d: &[(&str, &str)], hyps: &[&str], left: &str, right: &str) {
        let note = format!("{}: {left} <=> {right}", stated(d, hyps));
        let mut h = strings(hyps);
        h.push(left.to_string());
        self.lemmas.push(Lemma {
            dir,
            name: format!("{name}-fwd"),
            note: note.clone(),
            defs: defs(d),
            hyps: h,
            goal: right.to_string(),
        });
        let mut h = strings(hyps);
        h.push(right.to_string());
        self.lemmas.push(Lemma {
            dir,
            name: format!("{name}-bwd"),
            note,
            defs: defs(d),
            hyps: h,
            goal: left.to_string(),
        });
    }

    /// A mutation table: the relations common to both sides, then rows
    /// `left ⟺ right`, each of which may use the rows above it.
    fn rows(&mut self, dir: &'static str, name: &str, d: &[(&str, &str)], common: &[&str], rows: &[(&str, &str)]) {
        for (i, (l, r)) in rows.iter().enumerate() {
            let mut hyps: Vec<&str> = common.to_vec();
            for (pl, pr) in &rows[..i] {
                hyps.push(pl);
                hyps.push(pr);
            }
            self.iff(dir, &format!("{name}-row{}", i + 1), d, &hyps, l, r);
        }
    }
}

fn stated(d: &[(&str, &str)], hyps: &[&str]) -> String {
    let mut parts: Vec<String> = d.iter().map(|(a, b)| format!("{a} = {b}")).collect();
    parts.extend(hyps.iter().map(|h| h.to_string()));
    if parts.is_empty() {
        "free".to_string()
    } else {
        parts.join(", ")
    }
}

fn alt_presentation(t: &mut Table) {
    let dir = "alt-presentation";
    // s = σ1, d = δ_t, f = ε_{t-x}, e = ε_t; k = ε_s for a smaller index s
    t.one(
        dir,
        "eps-sigma-commute",
        "sigma_i commutes with eps_t = delta_t eps_{t-x} when it commutes with both factors",
        &[("e", "d f")],
        &["Co(q, d)", "Co(q, f)"],
        "Co(q, e)",
    );
    t.one(
        dir,
        "delta-sigma-commute",
        "and back: delta_t = eps_t eps_{t-x}^-1",
        &[("d", "e -f")],
        &["Co(q, e)", "Co(q, f)"],
        "Co(q, d)",
    );
    t.one(
        dir,
        "eps-product-commute",
        "the useful relation for eps_s = delta_s delta_{r1} delta_{r2}",
        &[("k", "c1 c2 c3")],
        &["Co(d^{-s}, c1)", "Co(d^{-s}, c2)", "Co(d^{-s}, c3)"],
        "Co(d^{-s}, k)",
    );
    t.one(
        dir,
        "eps-self-step",
        "induction step for Co(eps_t, s eps_t s)",
        &[("e", "d f")],
        &["Co(d^{-s}, f)", "Co(f, s f s)", "Co(d, s d s)"],
        "Co(e, s e s)",
    );
    t.one(
        dir,
        "eps-cross-step",
        "induction step for Co(eps_s, s eps_t s), s not a loop",
        &[("e", "d f")],
        &["Co(d^{-s}, k)", "Co(k, s f s)"],
        "Co(k, s e s)",
    );
    t.one(
        dir,
        "eps-skew-handle-step",
        "induction on the handle for SCo(s; eps_2j, eps_2j-1)",
        &[("u", "p f"), ("w", "q f")],
        &["Co(q^{-s}, f)", "SCo(s; q, p)", "Co(f, s f s)", "Co(p^{-s}, f)"],
        "SCo(s; w, u)",
    );
    t.one(
        dir,
        "eps-skew-step",
        "induction step for SCo(s; eps_t, eps_s)",
        &[("e", "d f")],
        &["Co(d^{-s}, k)", "SCo(s; f, k)"],
        "SCo(s; e, k)",
    );
    t.one(
        dir,
        "delta-self",
        "Co(delta_r, s delta_r s) from the eps relations",
        &[("d", "e -f")],
        &["Co(f, s e s)", "Co(f, s f s)", "Co(e, s e s)"],
        "Co(d, s d s)",
    );
    t.one(
        dir,
        "delta-useful-plain",
        "Co(delta_r^{-s}, eps_s) when eps_s is not a loop",
        &[("d", "e -f")],
        &["Co(k, s f s)", "Co(k, s e s)"],
        "Co(d^{-s}, k)",
    );
    t.one(
        dir,
        "delta-useful-loop",
        "Co(delta_r^{-s}, eps_s) when eps_s is the first loop of a handle",
        &[("d", "e -f")],
        &["SCo(s; f, k)", "SCo(s; e, k)"],
        "Co(d^{-s}, k)",
    );
    t.one(
        dir,
        "delta-commute",
        "Co(delta_r^{-s}, delta_s) from the useful relation for eps_s and eps_{s-x}",
        &[("c", "k -m")],
        &["Co(d^{-s}, k)", "Co(d^{-s}, m)"],
        "Co(d^{-s}, c)",
    );
    t.one(
        dir,
        "delta-skew",
        "SCo(s; delta_s+1, delta_s) for a handle",
        &[("p", "u -f"), ("q", "w -f")],
        &["Co(f, s u s)", "SCo(s; w, u)", "Co(f, s f s)", "Co(f, s w s)"],
        "SCo(s; q, p)",
    );
}

fn twist_group(t: &mut Table) {
    let dir = "twist-group";
    let xy: &[(&str, &str)] = &[("x", "s2 s1 -s2"), ("y", "s2 s3 -s2")];
    let sig = ["Co(s1, s3)", "Br(s1, s2)", "Br(s2, s3)"];
    t.one(
        dir,
        "x-y-commute",
        "Co(x, y) for x = s1^{-s2}, y = s3^{-s2}",
        xy,
        &sig,
        "Co(x, y)",
    );
    t.one(dir, "x-s3-braid", "Br(x, s3)", xy, &sig, "Br(x, s3)");
    t.one(dir, "y-s3-braid", "Br(y, s3)", xy, &sig, "Br(y, s3)");
    t.one(
        dir,
        "x-alt-form",
        "x = s2^{s1}",
        &[],
        &["Br(s1, s2)"],
        "s2 s1 -s2 = s2^{s1}",
    );
    t.one(
        dir,
        "y-alt-form",
        "y = s2^{s3}",
        &[],
        &["Br(s2, s3)"],
        "s2 s3 -s2 = s2^{s3}",
    );
    // tr, ts: twists with s < r; x, y as elements
    t.one(
        dir,
        "tau-x-braid-plain",
        "Br(t_r, t_s^x) for s < r, s not a loop",
        &[],
        &["Br(ts, y)", "Co(x, y)", "Br(tr, y)", "Co(tr^{y}, ts^{x})"],
        "Br(tr, ts^{x})",
    );
    t.one(
        dir,
        "tau-x-braid-loop",
        "Br(t_r, t_s^x) for s < r, s a loop",
        &[],
        &["Br(ts, y)", "Co(x, y)", "Br(tr, y)", "Co(tr^{-y}, ts^{x})"],
        "Br(tr, ts^{x})",
    );
    t.one(
        dir,
        "tau-y-braid-plain",
        "Br(t_r^y, t_s) for s < r, s not a loop",
        &[],
        &[
            "Br(ts, x)",
            "Co(x, y)",
            "Br(tr, x)",
            "Br(tr, y)",
            "Br(ts, y)",
            "Co(tr^{y}, ts^{x})",
        ],
        "Br(tr^{y}, ts)",
    );
    t.one(
        dir,
        "tau-y-braid-loop",
        "Br(t_r^{-y}, t_s) for s < r, s a loop",
        &[],
        &[
            "Br(ts, x)",
            "Co(x, y)",
            "Br(tr, x)",
            "Br(tr, y)",
            "Br(ts, y)",
            "Co(tr^{-y}, ts^{x})",
        ],
        "Br(tr^{-y}, ts)",
    );
}

fn bt_action(t: &mut Table) {
    let dir = "twist-action";
    // t_t = tt, t_r = tr; v and w are v_{t,r} and v'_{t,r}
    let plain =
        |t: &mut Table, name: &str, note: &str, hyps: &[&str], goal: &str| t.one(dir, name, note, &[], hyps, goal);
    // v commutes with y
    plain(t, "v-y-equal", "Co(v_tr, y) for r = t", &["Co(x, y)"], "Co(x, y)");
    plain(
        t,
        "v-y-below-plain",
        "Co(v_tr, y) for r < t, r not a loop, v = tr^{x tt}",
        &["Co(tr^{x}, tt^{y})", "Br(tt, y)"],
        "Co(tr^{x tt}, y)",
    );
    plain(
        t,
        "v-y-below-loop",
        "Co(v_tr, y) for r < t, r a loop, v = tr^{x -tt}",
        &["Co(tt^{-y}, tr^{x})", "Br(tt, y)"],
        "Co(tr^{x -tt}, y)",
    );
    plain(
        t,
        "v-y-above-plain",
        "Co(v_tr, y) for r > t, t not a loop, v = tr^{-x -tt}",
        &["Co(tr^{y}, tt^{x})", "Co(x, y)", "Br(tt, y)"],
        "Co(tr^{-x -tt}, y)",
    );
    plain(
        t,
        "v-y-above-loop",
        "Co(v_tr, y) for r > t, t a loop, v = tr^{-x tt}",
        &["Co(tr^{-y}, tt^{x})", "Co(x, y)", "Br(tt, y)"],
        "Co(tr^{-x tt}, y)",
    );
    // v' commutes with x
    plain(
        t,
        "w-x-below-plain",
        "Co(v'_tr, x) for r < t, r not a loop, v' = tr^{-y -tt}",
        &["Co(tt^{y}, tr^{x})", "Co(x, y)", "Br(tt, x)"],
        "Co(tr^{-y -tt}, x)",
    );
    plain(
        t,
        "w-x-below-loop",
        "Co(v'_tr, x) for r < t, r a loop, v' = tr^{y -tt}",
        &["Co(tt^{-y}, tr^{x})", "Co(x, y)", "Br(tt, x)"],
        "Co(tr^{y -tt}, x)",
    );
    plain(
        t,
        "w-x-above-plain",
        "Co(v'_tr, x) for r > t, t not a loop, v' = tr^{y tt}",
        &["Co(tr^{y}, tt^{x})", "Br(tt, x)"],
        "Co(tr^{y tt}, x)",
    );
    plain(
        t,
        "w-x-above-loop",
        "Co(v'_tr, x) for r > t, t a loop, v' = tr^{-y tt}",
        &["Co(tr^{-y}, tt^{x})", "Br(tt, x)"],
        "Co(tr^{-y tt}, x)",
    );

    // the i = 3 relations, reduced to the ones above by conjugation
    let y: &[(&str, &str)] = &[("y", "s2 s3 -s2")];
    let x: &[(&str, &str)] = &[("x", "s2 s1 -s2")];
    t.one(
        dir,
        "image-s3-commute",
        "Co(rho(e_t).t_r, s3) from Co(v, y)",
        y,
        &["Co(v, y)", "Co(tt, s3)"],
        "Co(v^{s2 tt}, s3)",
    );
    t.one(
        dir,
        "inverse-image-s3-commute",
        "Co(rho(e_t^-1).t_r, s3) from Co(v', x)",
        x,
        &["Co(w, x)", "Br(s1, s2)", "Br(s2, s3)", "Co(s1, s3)"],
        "Co(w^{-s3 -s1 -s2}, s3)",
    );
    t.one(
        dir,
        "image-s4-commute",
        "Co(rho(e_t).t_r, s4) for v = tr^{x tt}",
        x,
        &["Co(tr, s4)", "Co(tt, s4)", "Co(s1, s4)", "Co(s2, s4)"],
        "Co(tr^{x tt s2 tt}, s4)",
    );

    // images of x, y under rho(e_t), conjugated by tt^-1 s2^-1 y^-1
    t.one(
        dir,
        "image-x-conj",
        "(s2^{tt})^{-tt -s2 -y} = s3",
        y,
        &["Br(s2, s3)"],
        "s2^{tt -tt -s2 -y} = s3",
    );
    t.one(
        dir,
        "image-y-conj",
        "y^{-tt -s2 -y} = tt",
        y,
        &["Br(tt, y)", "Br(s2, s3)", "Co(tt, s3)"],
        "y^{-tt -s2 -y} = tt",
    );
    t.one(
        dir,
        "image-braid-x",
        "Br(v^{s2 tt}, s2^{tt}) from Br(v, s3)",
        y,
        &["Br(v, s3)", "Co(v, y)", "Br(s2, s3)"],
        "Br(v^{s2 tt}, s2^{tt})",
    );
    t.one(
        dir,
        "image-braid-y",
        "Br(v^{s2 tt}, y) from Br(v, tt)",
        y,
        &["Br(v, tt)", "Co(v, y)", "Br(tt, y)", "Br(s2, s3)", "Co(tt, s3)"],
        "Br(v^{s2 tt}, y)",
    );
    t.one(
        dir,
        "image-commute-plain",
        "the image of Co(t_r^y, t_s^x) from Co(v_r^{tt}, v_s^{s3})",
        y,
        &[
            "Co(vr^{tt}, vs^{s3})",
            "Co(vr, y)",
            "Co(vs, y)",
            "Br(tt, y)",
            "Br(s2, s3)",
            "Co(tt, s3)",
        ],
        "Co(vr^{s2 tt y}, vs^{s2 s2 tt})",
    );
    t.one(
        dir,
        "image-commute-loop",
        "the image of Co(t_r^{-y}, t_s^x) from Co(v_r^{-tt}, v_s^{s3})",
        y,
        &[
            "Co(vr^{-tt}, vs^{s3})",
            "Co(vr, y)",
            "Co(vs, y)",
            "Br(tt, y)",
            "Br(s2, s3)",
            "Co(tt, s3)",
        ],
        "Co(vr^{s2 tt -y}, vs^{s2 s2 tt})",
    );

    // Br(v, s3) and Br(v, tt)
    let br_s3 = ["Br(tr, x)", "Co(tr, s3)", "Co(tt, s3)", "Br(x, s3)"];
    for (name, v) in [
        ("below-plain", "tr^{x tt}"),
        ("below-loop", "tr^{x -tt}"),
        ("above-plain", "tr^{-x -tt}"),
        ("above-loop", "tr^{-x tt}"),
    ] {
        t.one(
            dir,
            &format!("v-s3-braid-{name}"),
            &format!("Br(v, s3) for v = {v}"),
            &[],
            &br_s3,
            &format!("Br({v}, s3)"),
        );
    }
    t.one(
        dir,
        "v-tt-braid-below-plain",
        "Br(v, tt) for v = tr^{x tt}",
        &[],
        &["Br(tr^{x}, tt)"],
        "Br(tr^{x tt}, tt)",
    );
    t.one(
        dir,
        "v-tt-braid-below-loop",
        "Br(v, tt) for v = tr^{x -tt}",
        &[],
        &["Br(tr^{x}, tt)"],
        "Br(tr^{x -tt}, tt)",
    );
    t.one(
        dir,
        "v-tt-braid-above-plain",
        "Br(v, tt) for v = tr^{-x -tt}",
        &[],
        &["Br(tr, tt^{x})"],
        "Br(tr^{-x -tt}, tt)",
    );
    t.one(
        dir,
        "v-tt-braid-above-loop",
        "Br(v, tt) for v = tr^{-x tt}",
        &[],
        &["Br(tr, tt^{x})"],
        "Br(tr^{-x tt}, tt)",
    );
    // Br(v', tt) and Br(v', s3)
    t.one(
        dir,
        "w-tt-braid-below-plain",
        "Br(v', tt) for v' = tr^{-y -tt}",
        &[],
        &["Br(tt^{y}, tr)"],
        "Br(tr^{-y -tt}, tt)",
    );
    t.one(
        dir,
        "w-tt-braid-below-loop",
        "Br(v', tt) for v' = tr^{y -tt}",
        &[],
        &["Br(tt^{-y}, tr)"],
        "Br(tr^{y -tt}, tt)",
    );
    t.one(
        dir,
        "w-tt-braid-above-plain",
        "Br(v', tt) for v' = tr^{y tt}",
        &[],
        &["Br(tr^{y}, tt)"],
        "Br(tr^{y tt}, tt)",
    );
    t.one(
        dir,
        "w-tt-braid-above-loop",
        "Br(v', tt) for v' = tr^{-y tt}",
        &[],
        &["Br(tr^{-y}, tt)"],
        "Br(tr^{-y tt}, tt)",
    );
    let br_s3w = ["Br(tr, y)", "Co(tr, s3)", "Co(tt, s3)", "Br(y, s3)"];
    for (name, w) in [
        ("below-plain", "tr^{-y -tt}"),
        ("below-loop", "tr^{y -tt}"),
        ("above-plain", "tr^{y tt}"),
        ("above-loop", "tr^{-y tt}"),
    ] {
        t.one(
            dir,
            &format!("w-s3-braid-{name}"),
            &format!("Br(v', s3) for v' = {w}"),
            &[],
            &br_s3w,
            &format!("Br({w}, s3)"),
        );
    }

    // commutations when t is r or s
    t.one(
        dir,
        "pair-t-is-r-plain",
        "Co(v_r^{tt}, v_s^{s3}) for t = r, s not a loop",
        &[],
        &["Co(s3, ts)", "Co(s3, tt)", "Br(x, s3)"],
        "Co(x^{tt}, ts^{x tt s3})",
    );
    t.one(
        dir,
        "pair-t-is-s-plain",
        "Co(v_r^{tt}, v_s^{s3}) for t = s not a loop",
        &[],
        &["Co(tr, s3)", "Br(x, s3)"],
        "Co(tr^{-x -tt tt}, x^{s3})",
    );
    t.one(
        dir,
        "pair-t-is-r-loop",
        "Co(v_r^{-tt}, v_s^{s3}) for t = r, s a loop",
        &[],
        &["Co(s3, ts)", "Co(s3, tt)", "Br(x, s3)"],
        "Co(x^{-tt}, ts^{x -tt s3})",
    );
    t.one(
        dir,
        "pair-t-is-s-loop",
        "Co(v_r^{-tt}, v_s^{s3}) for t = s a loop",
        &[],
        &["Co(tr, s3)", "Br(x, s3)"],
        "Co(tr^{-x tt -tt}, x^{s3})",
    );
    t.one(
        dir,
        "inverse-pair-t-is-r-plain",
        "Co(v'_r^{s3}, v'_s^{tt}) for t = r, s not a loop",
        &[],
        &["Co(ts, s3)", "Co(tt, s3)", "Br(y, s3)"],
        "Co(y^{s3}, ts^{-y -tt tt})",
    );
    t.one(
        dir,
        "inverse-pair-t-is-s-plain",
        "Co(v'_r^{s3}, v'_s^{tt}) for t = s not a loop",
        &[],
        &["Co(tr, s3)", "Co(tt, s3)", "Br(y, s3)", "Br(tt, y)"],
        "Co(tr^{y tt s3}, y^{tt})",
    );
    t.one(
        dir,
        "inverse-pair-t-is-r-loop",
        "Co(v'_r^{-s3}, v'_s^{tt}) for t = r, s a loop",
        &[],
        &["Co(ts, s3)", "Co(tt, s3)", "Br(y, s3)"],
        "Co(y^{-s3}, ts^{y -tt tt})",
    );
    t.one(
        dir,
        "inverse-pair-t-is-s-loop",
        "Co(v'_r^{-s3}, v'_s^{tt}) for t = s a loop",
        &[],
        &["Co(tr, s3)", "Co(tt, s3)", "Br(y, s3)", "Br(tt, y)"],
        "Co(tr^{-y tt -s3}, y^{tt})",
    );

    // the general case, from the relations carried over from the three-twist model
    t.one(
        dir,
        "pair-general-transfer",
        "Co(t_r^{-x -s3}, t_s^{-x -tt}) from the model relations",
        &[],
        &[
            "ts^{-x -tt} = (tt^{-y s4})^{-(ts^{-x -y s4})}",
            "Co(tr^{-x -s3}, ts^{-x -y s4})",
            "Co(tr^{-x -s3}, tt^{-y s4})",
        ],
        "Co(tr^{-x -s3}, ts^{-x -tt})",
    );
    t.one(
        dir,
        "pair-general",
        "Co(v_r^{tt}, v_s^{s3}) for t < s < r",
        &[],
        &["@pair-general-transfer"],
        "Co(tr^{-x -tt tt}, ts^{-x -tt s3})",
    );

    // rho(e_t^-1).t_r rewritten with v'
    let sig = ["Co(s1, s3)", "Br(s1, s2)", "Br(s2, s3)"];
    t.one(
        dir,
        "inverse-image-equal",
        "rho(e_t^-1).t_t = s1",
        y,
        &sig,
        "y^{-s3 -s1 -s2} = s1",
    );
    let sig_t = ["Co(tt, s3)", "Co(tr, s3)", "Br(s2, s3)"];
    for (name, lhs, rhs) in [
        ("below-plain", "tr^{-y -tt -s3 -s1 -s2}", "tr^{-s2 -tt -s1 -s2}"),
        ("below-loop", "tr^{y -tt -s3 -s1 -s2}", "tr^{s2 -tt -s1 -s2}"),
        ("above-plain", "tr^{y tt -s3 -s1 -s2}", "tr^{s2 tt -s1 -s2}"),
        ("above-loop", "tr^{-y tt -s3 -s1 -s2}", "tr^{-s2 tt -s1 -s2}"),
    ] {
        t.one(
            dir,
            &format!("inverse-image-{name}"),
            &format!("rho(e_t^-1).t_r = {lhs}"),
            y,
            &sig_t,
            &format!("{lhs} = {rhs}"),
        );
    }
}

fn simple_presentation(t: &mut Table) {
    let dir = "simple-presentation";
    t.one(
        dir,
        "triangle-free-form",
        "abca = bcab <=> b^-1 a b c = c a b a^-1",
        &[],
        &["a b c a = b c a b"],
        "-b a b c = c a b -a",
    );
    t.iff(
        dir,
        "triangle-conj",
        &[],
        &["Br(a, b)"],
        "a b c a = b c a b",
        "Co(a^{b}, c)",
    );
    t.one(
        dir,
        "triangle-second",
        "the second triangle equation from the first and the braid relations",
        &[],
        &["Br(a, b)", "Br(b, c)", "Br(a, c)", "a b c a = b c a b"],
        "b c a b = c a b c",
    );
    t.iff(dir, "cycle-swap", &[], &["Br(a, b)"], "Co(a^{b}, c)", "Co(c^{a}, b)");
    let cyc = ["Br(a, b)", "Br(a, c)", "Co(a^{b}, c)"];
    t.one(dir, "cycle-third-braid", "Br(b, c) in a 3-cycle", &[], &cyc, "Br(b, c)");
    t.one(
        dir,
        "cycle-other-commute",
        "Co(a, b^c) in a 3-cycle",
        &[],
        &cyc,
        "Co(a, b^{c})",
    );
    let sq = [
        "Br(a, b)",
        "Br(a, c)",
        "Br(e, b)",
        "Br(e, c)",
        "Co(a, e)",
        "Co(c^{a e}, b)",
    ];
    t.one(
        dir,
        "square-first-step",
        "Br(c^a, b) in two 3-cycles sharing an edge",
        &[],
        &sq,
        "Br(c^{a}, b)",
    );
    t.one(
        dir,
        "square-first",
        "Br(a^b, c) in two 3-cycles sharing an edge",
        &[],
        &sq,
        "Br(a^{b}, c)",
    );
    t.one(
        dir,
        "square-second",
        "Br(e^b, c) in two 3-cycles sharing an edge",
        &[],
        &sq,
        "Br(e^{b}, c)",
    );
}

fn mutation_cases(t: &mut Table) {
    let dir = "mutation-cases";
    let d_a: &[(&str, &str)] = &[("d", "b^{-a}")];
    let l_b: &[(&str, &str)] = &[("l", "c^{-b}")];
    let h_e: &[(&str, &str)] = &[("h", "b^{-e}")];
    t.rows(
        dir,
        "triangle-at-vertex",
        d_a,
        &["Br(a, c)"],
        &[("Br(a, b)", "Br(a, d)"), ("Co(a^{b}, c)", "Co(c, d)")],
    );
    t.rows(
        dir,
        "double-arrow-out",
        d_a,
        &["Br(a, c)"],
        &[("Br(a, b)", "Br(a, d)"), ("Br(a^{b}, c)", "Br(d, c)")],
    );
    t.rows(
        dir,
        "double-arrow-mid",
        l_b,
        &["Br(a, b)"],
        &[("Br(a^{b}, c)", "Br(a, l)"), ("Br(a, c)", "Br(a^{l}, b)")],
    );
    t.rows(
        dir,
        "square-at-corner",
        d_a,
        &["Co(a, e)", "Br(a, c)", "Br(e, c)"],
        &[
            ("Br(e, b)", "Br(e, d)"),
            ("Br(a, b)", "Br(a, d)"),
            ("Co(c^{a e}, b)", "Co(e^{d}, c)"),
        ],
    );
    t.rows(
        dir,
        "square-at-middle",
        l_b,
        &["Br(a, b)", "Co(a, e)", "Br(b, e)"],
        &[
            ("Br(a^{b}, c)", "Br(a, l)"),
            ("Br(e^{b}, c)", "Br(e, l)"),
            ("Br(a, c)", "Br(a^{l}, b)"),
            ("Br(e, c)", "Br(e^{l}, b)"),
            ("Co(c^{a e}, b)", "Co(b^{a e}, l)"),
        ],
    );
    t.rows(
        dir,
        "linked-square-at-corner",
        h_e,
        &["Br(a, e)", "Br(a, c)", "Br(e, c)"],
        &[
            ("Br(e, b)", "Br(e, h)"),
            ("Br(a, b)", "Br(e^{a}, h)"),
            ("Br(e^{b}, c)", "Br(h, c)"),
            ("Br(a^{b}, c)", "Br(h^{e c}, a)"),
            ("Br(c^{a e}, b)", "Br(c^{a}, h)"),
            ("Br(c^{e a}, b)", "Br(h^{c e}, a)"),
        ],
    );
    t.rows(
        dir,
        "linked-square-at-middle",
        l_b,
        &["Br(a, b)", "Br(a, e)", "Br(e, b)"],
        &[
            ("Br(a^{b}, c)", "Br(a, l)"),
            ("Br(a, c)", "Br(a^{l}, b)"),
            ("Br(e^{b}, c)", "Br(e, l)"),
            ("Br(e, c)", "Br(e^{l}, b)"),
            ("Br(c^{a e}, b)", "Br(b^{a e}, l)"),
            ("Br(c^{e a}, b)", "Br(b^{e a}, l)"),
        ],
    );
    t.rows(
        dir,
        "pentagon-at-apex",
        &[("g", "a^{-f}")],
        &["Br(f, e)", "Br(e, b)", "Br(e, c)", "Co(f, b)", "Co(f, c)"],
        &[
            ("Br(f, a)", "Br(f, g)"),
            ("Br(a, b)", "Br(g, b)"),
            ("Br(a, c)", "Br(g, c)"),
            ("Co(f^{a}, e)", "Co(g, e)"),
            ("Co(e, f^{a b c})", "Co(c^{g e}, b)"),
        ],
    );
    t.rows(
        dir,
        "pentagon-at-side",
        &[("h", "b^{-e}"), ("k", "f^{-e}")],
        &["Br(a, e)", "Br(a, c)", "Br(e, c)"],
        &[
            ("Br(e, b)", "Br(e, h)"),
            ("Br(a, b)", "Br(e^{a}, h)"),
            ("Br(e^{b}, c)", "Br(h, c)"),
            ("Br(a^{b}, c)", "Br(h^{e c}, a)"),
            ("Br(e, f)", "Br(e, k)"),
            ("Co(b, f)", "Co(h, k)"),
            ("Co(c, f)", "Co(e^{c}, k)"),
            ("Co(e^{f}, a)", "Co(k, a)"),
            ("Co(e, f^{a b c})", "Co(c, k^{e a h})"),
        ],
    );
}

fn mutation_lemmas(t: &mut Table) {
    let dir = "mutation-lemmas";
    let base = ["Co(a, e)", "Br(a, b)", "Br(b, e)"];
    t.one(
        dir,
        "square-middle-conjugator",
        "b^{-(e a)} = b^{a e b}",
        &[],
        &base,
        "b^{-a -e} = b^{a e b}",
    );
    t.iff(
        dir,
        "square-middle",
        &[("l", "c^{-b}")],
        &base,
        "Co(c^{a e}, b)",
        "Co(b^{a e}, l)",
    );
    let lk = [
        "Br(a, b)",
        "Br(b, e)",
        "Br(a, c)",
        "Br(a, e)",
        "Br(e, c)",
        "Br(e^{b}, c)",
    ];
    let h: &[(&str, &str)] = &[("h", "b^{-e}")];
    t.iff(dir, "linked-corner-first", h, &lk, "Br(a^{b}, c)", "Br(h^{e c}, a)");
    t.iff(dir, "linked-corner-second", h, &lk, "Br(c^{a e}, b)", "Br(c^{a}, h)");
    t.iff(dir, "linked-corner-third", h, &lk, "Br(c^{e a}, b)", "Br(h^{c e}, a)");
    t.one(
        dir,
        "linked-corner-helper",
        "Br(b, c^e) from Br(e^b, c)",
        &[],
        &["Br(b, e)", "Br(e^{b}, c)"],
        "Br(b, c^{e})",
    );
    let lm = [
        "Br(a, b)",
        "Br(a, e)",
        "Br(e, b)",
        "Br(a^{b}, c)",
        "Br(a, l)",
        "Br(a, c)",
        "Br(a^{l}, b)",
        "Br(e^{b}, c)",
        "Br(e, l)",
        "Br(e, c)",
        "Br(e^{l}, b)",
    ];
    let l: &[(&str, &str)] = &[("l", "c^{-b}")];
    t.iff(dir, "linked-middle-first", l, &lm, "Br(c^{a e}, b)", "Br(b^{a e}, l)");
    t.iff(dir, "linked-middle-second", l, &lm, "Br(c^{e a}, b)", "Br(b^{e a}, l)");
    let g: &[(&str, &str)] = &[("g", "a^{-f}")];
    t.one(
        dir,
        "pentagon-g-form",
        "a^{-f} = f^a under Br(f, a)",
        &[],
        &["Br(f, a)"],
        "a^{-f} = f^{a}",
    );
    t.iff(
        dir,
        "pentagon-apex",
        g,
        &["Br(e, c)", "Br(g, b)", "Co(g, e)", "Br(f, a)"],
        "Co(e, f^{a b c})",
        "Co(c^{g e}, b)",
    );
    // the pentagon presentation: the four relations of the linked square
    let pent = [
        "Br(f, a)",
        "Br(f, e)",
        "Co(f^{a}, e)",
        "Br(a, b)",
        "Br(a, c)",
        "Br(e, b)",
        "Br(e, c)",
        "Co(f, b)",
        "Co(f, c)",
        "Co(e, f^{a b c})",
    ];
    t.one(
        dir,
        "pentagon-g-commute",
        "Co(g, e) in the pentagon",
        g,
        &pent,
        "Co(g, e)",
    );
    t.one(
        dir,
        "pentagon-g-braid-b",
        "Br(g, b) in the pentagon",
        g,
        &pent,
        "Br(g, b)",
    );
    t.one(
        dir,
        "pentagon-g-braid-c",
        "Br(g, c) in the pentagon",
        g,
        &pent,
        "Br(g, c)",
    );
    let mut pent_g: Vec<&str> = pent.to_vec();
    pent_g.extend(["Co(g, e)", "Br(g, b)", "Br(g, c)"]);
    t.one(
        dir,
        "pentagon-square",
        "Co(c^{g e}, b) in the pentagon",
        g,
        &pent_g,
        "Co(c^{g e}, b)",
    );
    // with g in place of a, the pentagon contains two 3-cycles sharing an edge
    let sq_g = [
        "Br(g, b)",
        "Br(g, c)",
        "Br(e, b)",
        "Br(e, c)",
        "Co(g, e)",
        "Co(c^{g e}, b)",
    ];
    let mut sq_gf: Vec<&str> = sq_g.to_vec();
    sq_gf.extend(["Co(f, b)", "Co(f, c)"]);
    t.one(
        dir,
        "pentagon-first",
        "Br(a^b, c) in the pentagon, through Br(g^b, c)",
        g,
        &sq_gf,
        "Br(a^{b}, c)",
    );
    t.one(
        dir,
        "pentagon-second",
        "Br(e^b, c) in the pentagon",
        g,
        &sq_g,
        "Br(e^{b}, c)",
    );
    let mut pent_ab: Vec<&str> = pent.to_vec();
    pent_ab.extend(["Br(a^{b}, c)", "Br(e^{b}, c)"]);
    t.one(
        dir,
        "pentagon-third",
        "Br(c^{ae}, b) in the pentagon",
        &[],
        &pent_ab,
        "Br(c^{a e}, b)",
    );
    t.one(
        dir,
        "pentagon-fourth",
        "Br(c^{ea}, b) in the pentagon",
        &[],
        &pent,
        "Br(c^{e a}, b)",
    );
    let sd: &[(&str, &str)] = &[("f", "e^{-k}"), ("b", "e^{-h}")];
    let side = ["Br(e, c)", "Br(e, h)", "Co(k, a)", "Br(e, k)", "Br(a, c)", "Br(e, a)"];
    t.one(
        dir,
        "pentagon-side-helper",
        "Co(f^a, e) from Co(k, a)",
        sd,
        &side,
        "Co(f^{a}, e)",
    );
    t.iff(dir, "pentagon-side", sd, &side, "Co(e, f^{a b c})", "Co(c, k^{e a h})");
}

fn arc_configurations(t: &mut Table) {
    let dir = "arc-configurations";
    // points p0 < p1 < ...; eta arcs join neighbours (m2 = eta_{-2}, p1 = eta_1, ...)
    // a spans the whole chain, b spans from the left end of eta_{k+1} to the right end of eta_{s-1}
    let n1 = [
        "Br(m2, m1)",
        "Co(m2, q1)",
        "Co(m2, q2)",
        "Co(m1, q2)",
        "Co(m1, q1)",
        "Br(q1, q2)",
        "Co(a, b)",
        "Br(a, m2)",
        "Co(a, m1)",
        "Co(a, q1)",
        "Br(a, q2)",
        "Br(b, m2)",
        "Br(b, m1)",
        "Br(b, q1)",
        "Br(b, q2)",
        "Tr(b, m1, m2)",
        "Tr(b, q2, q1)",
    ];
    t.one(
        dir,
        "nested-arcs",
        "Co(tau_a^{eta_1}, tau_b^{eta_-1}) with l = k = -2, s = r = 2",
        &[("ta", "a^{m2 m1 -q2 -q1}"), ("tb", "b^{m1 -q1}")],
        &n1,
        "Co(ta^{q1}, tb^{m1})",
    );
    let n0 = [
        "Br(m2, m1)",
        "Co(m2, q1)",
        "Co(m2, q2)",
        "Co(m1, q2)",
        "Co(m1, q1)",
        "Br(q1, q2)",
        "Co(a, b)",
        "Br(a, m2)",
        "Co(a, m1)",
        "Br(a, q1)",
        "Br(a, q2)",
        "Tr(a, q2, q1)",
        "Br(b, m2)",
        "Br(b, m1)",
        "Co(b, q1)",
        "Br(b, q2)",
        "Tr(b, m1, m2)",
    ];
    t.one(
        dir,
        "crossing-arcs",
        "Co(tau_a^{-eta_1}, tau_b^{eta_-1}) with l = k = -2, s = r = 2",
        &[("ta", "a^{m2 m1 -q1}"), ("tb", "b^{m1 -q2 -q1}")],
        &n0,
        "Co(ta^{-q1}, tb^{m1})",
    );
}

// search and output

/// `sub` extended by the identity.
fn ap(sub: &Substitution, w: &Word) -> Word {
    let mut full = sub.clone();
    for g in w.support() {
        if full.get(&g).is_none() {
            full.insert(g.clone(), Word::gen(&g));
        }
    }
    full.apply(w).expect("total")
}

fn render(r: &Rel) -> String {
    match r {
        Rel::Kind(k, args) => {
            let a: Vec<String> = args.iter().map(Word::to_string).collect();
            format!("{k}({})", a.join(", "))
        }
        Rel::Eq(l, r) => format!("{l} = {r}"),
        Rel::Cite(n) => n.clone(),
    }
}

fn relators_of(r: &Rel, sub: &Substitution, lib: &BTreeMap<String, Word>) -> Vec<(Option<usize>, Word)> {
    match r {
        Rel::Kind(k, args) => {
            let a: Vec<Word> = args.iter().map(|w| ap(sub, w)).collect();
            expand_equations(*k, &a)
                .unwrap()
                .into_iter()
                .enumerate()
                .map(|(i, (l, r))| (Some(i), l.mul(&r.inverse())))
                .collect()
        }
        Rel::Eq(l, r) => vec![(None, ap(sub, &l.mul(&r.inverse())))],
        Rel::Cite(n) => vec![(
            None,
            lib.get(n)
                .unwrap_or_else(|| panic!("cite {n} before it is proved"))
                .clone(),
        )],
    }
}

fn spec_of(r: &Rel, index: usize, sub: &Substitution) -> Option<RelationSpec> {
    match r {
        Rel::Kind(k, args) => Some(RelationSpec::Template {
            rel: *k,
            args: args.iter().map(|w| ap(sub, w).to_string()).collect(),
            index,
            tag: None,
        }),
        Rel::Eq(l, r) => Some(RelationSpec::equation(&ap(sub, l), &ap(sub, r), None)),
        Rel::Cite(_) => None,
    }
}

fn goal_word(r: &Rel) -> Word {
    match r {
        Rel::Kind(k, args) => {
            let (l, r) = expand_equations(*k, args).unwrap().remove(0);
            l.mul(&r.inverse())
        }
        Rel::Eq(l, r) => l.mul(&r.inverse()),
        Rel::Cite(_) => panic!("goal cannot cite"),
    }
}

fn search(relators: &[(String, Word)], goal: &Rel, sub: &Substitution) -> Option<(DerivationScript, usize)> {
    let budgets = [
        SearchConfig {
            max_depth: 12,
            max_states: 400_000,
            max_len: None,
        },
        SearchConfig {
            max_depth: 16,
            max_states: 3_000_000,
            max_len: None,
        },
        SearchConfig {
            max_depth: 20,
            max_states: 12_000_000,
            max_len: None,
        },
    ];
    for cfg in budgets {
        if let Rel::Kind(k @ (RelationKind::Co | RelationKind::Br), args) = goal {
            let x = ap(sub, &args[0]);
            let y = ap(sub, &args[1]);
            if let Verdict::Equal { certificate, depth, .. } = prove_relation(relators, &[], *k, &x, &y, &cfg) {
                return Some((certificate, depth));
            }
        }
        let w = ap(sub, &goal_word(goal));
        if let Verdict::Equal { certificate, depth, .. } = prove_trivial(relators, &w, &cfg) {
            return Some((certificate, depth));
        }
    }
    None
}

fn build(l: &Lemma, lib: &BTreeMap<String, Word>) -> Result<(DerivationScript, usize), String> {
    // definitions, each expanded through the earlier ones
    let mut sub = Substitution::default();
    let mut def_specs = Vec::new();
    for (sym, text) in &l.defs {
        let g = GenSym::new(sym).unwrap();
        let rhs = ap(&sub, &word(text));
        def_specs.push((format!("def {sym}"), g.clone(), rhs.clone()));
        sub.insert(g, rhs);
    }
    let hyps: Vec<(String, Rel)> = l.hyps.iter().map(|h| (h.clone(), rel(h))).collect();
    let goal = rel(&l.goal);
    let mut relators = Vec::new();
    let mut specs: BTreeMap<String, Option<RelationSpec>> = BTreeMap::new();
    for (text, r) in &hyps {
        let parts = relators_of(r, &sub, lib);
        let many = parts.len() > 1;
        for (idx, w) in parts {
            let name = match (&r, many) {
                (Rel::Cite(n), _) => n.clone(),
                (_, true) => format!("{text} #{}", idx.unwrap() + 1),
                _ => text.clone(),
            };
            specs.insert(name.clone(), spec_of(r, idx.unwrap_or(0), &sub));
            relators.push((name, w));
        }
    }
    let (mut cert, depth) = search(&relators, &goal, &sub).ok_or_else(|| "no proof found".to_string())?;
    // cited goals come from the library, the rest are stated as relations
    let mut context = BTreeMap::new();
    for name in cert.context.keys() {
        if let Some(Some(spec)) = specs.get(name) {
            context.insert(name.clone(), spec.clone());
        }
    }
    let gw = goal_word(&goal);
    let used: BTreeSet<GenSym> = gw.support();
    let mut steps = Vec::new();
    for (name, g, rhs) in &def_specs {
        if used.contains(g) {
            context.insert(name.clone(), RelationSpec::equation(&Word::gen(g), rhs, None));
            steps.push(Step::Definition { rel: name.clone() });
        }
    }
    steps.append(&mut cert.steps);
    let script = DerivationScript {
        name: l.name.clone(),
        note: Some(l.note.clone()),
        context,
        goal: RelationSpec::equation(&gw, &Word::empty(), Some(&render(&goal))),
        steps,
        expect_fail_step: None,
    };
    Ok((script, depth))
}

/// Copies of passing scripts with one step broken, and one false statement.
fn negatives(good: &BTreeMap<String, DerivationScript>) -> Vec<DerivationScript> {
    let mut out = Vec::new();
    let pick = |name: &str| good.get(name).unwrap_or_else(|| panic!("{name} missing")).clone();
    let first_index =
        |s: &DerivationScript, f: &dyn Fn(&Step) -> bool| s.steps.iter().position(f).expect("step kind");

    let mut s = pick("triangle-conj-fwd");
    let i = first_index(&s, &|st| matches!(st, Step::ConjugateBothSides { .. }));
    if let Step::ConjugateBothSides { word } = &mut s.steps[i] {
        *word = format!("{word} a");
    }
    s.name = "bad-wrong-conjugator".into();
    s.note = Some("a conjugation step with an extra letter; the chain no longer closes".into());
    s.expect_fail_step = Some(s.steps.len() + 1);
    out.push(s);

    let mut s = pick("square-middle-fwd");
    let i = first_index(&s, &|st| matches!(st, Step::InsertRelator { .. }));
    if let Step::InsertRelator { rel, .. } = &mut s.steps[i] {
        *rel = "Br(a, c)".into();
    }
    s.name = "bad-unknown-relation".into();
    s.note = Some("cites a relation that is neither in the context nor established".into());
    s.expect_fail_step = Some(i + 1);
    out.push(s);

    let mut s = pick("cycle-third-braid");
    let i = first_index(&s, &|st| matches!(st, Step::InsertRelator { .. }));
    if let Step::InsertRelator { rot, .. } = &mut s.steps[i] {
        *rot = 99;
    }
    s.name = "bad-rotation".into();
    s.note = Some("a relator rotation past the end of the relator".into());
    s.expect_fail_step = Some(i + 1);
    out.push(s);

    let mut s = pick("linked-corner-second-fwd");
    let i = first_index(&s, &|st| matches!(st, Step::Definition { .. }));
    s.steps[i] = Step::SubstituteEstablished {
        rel: "Br(a, b)".into(),
        side: Default::default(),
        pos: 0,
        dir: Default::default(),
        inv: false,
    };
    s.context.insert(
        "Br(a, b)".into(),
        RelationSpec::template(RelationKind::Br, &[word("a"), word("b")], None),
    );
    s.name = "bad-substitution".into();
    s.note = Some("substitutes a b a where the goal does not start with it".into());
    s.expect_fail_step = Some(i + 1);
    out.push(s);

    let mut s = pick("triangle-at-vertex-row2-fwd");
    let k = s
        .context
        .keys()
        .find(|k| k.starts_with("Co("))
        .cloned()
        .expect("a commutation");
    s.context.insert(
        k,
        RelationSpec::template(RelationKind::Co, &[word("a"), word("c")], None),
    );
    s.name = "bad-false-relator".into();
    s.note = Some("the commutation hypothesis replaced by Co(a, c), which does not give the goal".into());
    let report = check_derivation(&s, &mut Library::new());
    s.expect_fail_step = report.failed_step;
    out.push(s);

    let mut s = pick("eps-self-step");
    s.steps.retain(|st| !matches!(st, Step::Definition { .. }));
    s.name = "bad-missing-definition".into();
    s.note = Some("the definition of e is never applied, so the sides stay apart".into());
    s.expect_fail_step = Some(s.steps.len() + 1);
    out.push(s);

    let mut s = pick("delta-skew");
    s.goal = RelationSpec::template(RelationKind::Co, &[word("p"), word("q")], None);
    s.name = "bad-wrong-goal".into();
    s.note = Some("the steps of another chain run against the goal Co(p, q)".into());
    let report = check_derivation(&s, &mut Library::new());
    s.expect_fail_step = report.failed_step;
    out.push(s);
    out
}

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "scripts".into());
    let only = std::env::args().nth(2);
    let mut t = Table::default();
    alt_presentation(&mut t);
    twist_group(&mut t);
    bt_action(&mut t);
    simple_presentation(&mut t);
    mutation_cases(&mut t);
    mutation_lemmas(&mut t);
    arc_configurations(&mut t);

    let mut lib: BTreeMap<String, Word> = BTreeMap::new();
    let mut good: BTreeMap<String, DerivationScript> = BTreeMap::new();
    let mut written = Vec::new();
    let mut failed = Vec::new();
    for l in &t.lemmas {
        if only.as_deref().is_some_and(|o| !l.name.contains(o)) {
            continue;
        }
        let t0 = Instant::now();
        match build(l, &lib) {
            Ok((s, depth)) => {
                let mut known = Library::new();
                for (n, w) in &lib {
                    known.insert(n, (w.clone(), Word::empty()));
                }
                let report = check_derivation(&s, &mut known);
                eprintln!(
                    "{:<40} depth {depth:>2}, {:>4} steps, {:?} {}",
                    l.name,
                    s.steps.len(),
                    t0.elapsed(),
                    if report.passed { "" } else { "REPLAY FAILED" }
                );
                if !report.passed {
                    failed.push(format!("{}: {report}", l.name));
                    continue;
                }
                lib.insert(l.name.clone(), report_goal(&s));
                good.insert(l.name.clone(), s.clone());
                written.push((l.dir, s));
            }
            Err(e) => {
                eprintln!("{:<40} FAILED {e} ({:?})", l.name, t0.elapsed());
                failed.push(format!("{}: {e}", l.name));
            }
        }
    }
    if only.is_none() {
        for s in negatives(&good) {
            written.push(("negative", s));
        }
    }
    for (dir, s) in &written {
        let d = format!("{out}/{dir}");
        std::fs::create_dir_all(&d).unwrap();
        std::fs::write(format!("{d}/{}.json", s.name), s.to_json() + "\n").unwrap();
    }
    let scripts: Vec<DerivationScript> = written.iter().map(|(_, s)| s.clone()).collect();
    let reports = check_corpus(&scripts, &mut Library::new());
    let bad = scripts
        .iter()
        .zip(&reports)
        .filter(|(s, r)| match s.expect_fail_step {
            None => !r.passed,
            Some(k) => r.passed || r.failed_step != Some(k),
        })
        .count();
    eprintln!(
        "{} scripts written, {} lemmas without proof, {bad} corpus mismatches",
        written.len(),
        failed.len()
    );
    for f in &failed {
        eprintln!("  {f}");
    }
}

fn report_goal(s: &DerivationScript) -> Word {
    let (l, r) = s.goal.resolve().unwrap();
    l.mul(&r.inverse())
}
