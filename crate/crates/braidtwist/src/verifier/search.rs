//! Bounded search for a proof that a word is trivial.
//!
//! States are cyclically reduced words (a word is trivial iff any conjugate
//! is). A move picks a cyclic position and a rotation `p·s` of a relator or
//! its inverse such that `p` occurs there, and replaces `p` by `s⁻¹`. Only the
//! longest match `p` is used, since shorter ones reduce to it. States are
//! expanded shortest first, then shallowest first, with ties broken by
//! discovery order, so the verdict is a function of the inputs and limits.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};

use serde::Serialize;

use super::script::{DerivationScript, RelationSpec, SideSel, Step};
use crate::presentations::Presentation;
use crate::word::{GenSym, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub max_states: usize,
    /// Longest word kept; `None` means `len(start) + max_depth · longest relator`.
    pub max_len: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 10,
            max_states: 1_000_000,
            max_len: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equal {
        certificate: DerivationScript,
        depth: usize,
        explored: usize,
    },
    Unknown {
        explored: usize,
    },
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal { .. })
    }

    pub fn explored(&self) -> usize {
        match self {
            Verdict::Equal { explored, .. } | Verdict::Unknown { explored } => *explored,
        }
    }
}

pub(super) type Code = i16;

pub(super) struct Alphabet {
    index: HashMap<GenSym, Code>,
    names: Vec<GenSym>,
}

impl Alphabet {
    pub(super) fn new() -> Self {
        Alphabet {
            index: HashMap::new(),
            names: Vec::new(),
        }
    }

    pub(super) fn len(&self) -> usize {
        self.names.len()
    }

    pub(super) fn code(&mut self, l: &Letter) -> Code {
        let next = self.names.len() as Code + 1;
        let c = *self.index.entry(l.gen.clone()).or_insert_with(|| next);
        if c == next {
            self.names.push(l.gen.clone());
        }
        if l.inv {
            -c
        } else {
            c
        }
    }

    pub(super) fn encode(&mut self, w: &Word) -> Vec<Code> {
        w.letters().iter().map(|l| self.code(l)).collect()
    }

    pub(super) fn decode(&self, w: &[Code]) -> Word {
        let letters = w
            .iter()
            .map(|&c| Letter::new(self.names[(c.unsigned_abs() - 1) as usize].clone(), c < 0));
        crate::word::reduce(letters)
    }
}

pub(super) fn inverse(w: &[Code]) -> Vec<Code> {
    w.iter().rev().map(|c| -c).collect()
}

pub(super) fn reduce_codes(w: impl IntoIterator<Item = Code>) -> Vec<Code> {
    let mut out: Vec<Code> = Vec::new();
    for c in w {
        if out.last() == Some(&-c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

/// Length of the conjugator `c` with `w = c · core · c⁻¹`.
pub(super) fn cyclic_prefix(w: &[Code]) -> usize {
    let mut k = 0;
    while 2 * k + 1 < w.len() && w[k] == -w[w.len() - 1 - k] {
        k += 1;
    }
    k
}

pub(super) fn least_rotation(w: &[Code]) -> Vec<Code> {
    let n = w.len();
    let mut best = 0;
    for i in 1..n {
        for j in 0..n {
            let (a, b) = (w[(i + j) % n], w[(best + j) % n]);
            if a != b {
                if a < b {
                    best = i;
                }
                break;
            }
        }
    }
    w[best..].iter().chain(&w[..best]).cloned().collect()
}

pub(super) struct Entry {
    pub(super) rel: usize,
    pub(super) rot: usize,
    pub(super) inv: bool,
    pub(super) seq: Vec<Code>,
}

/// Every rotation of every relator core and of its inverse, indexed by first letter.
pub(super) fn relator_entries(
    relators: &[(String, Word)],
    alpha: &mut Alphabet,
) -> (Vec<Vec<Code>>, Vec<Entry>, HashMap<Code, Vec<usize>>) {
    let mut cores = Vec::new();
    for (_, r) in relators {
        cores.push(alpha.encode(&r.cyclic_core()));
    }
    let mut entries = Vec::new();
    for (ri, core) in cores.iter().enumerate() {
        let m = core.len();
        for rot in 0..m {
            let rotated: Vec<Code> = core[rot..].iter().chain(&core[..rot]).cloned().collect();
            entries.push(Entry {
                rel: ri,
                rot,
                inv: false,
                seq: rotated.clone(),
            });
            entries.push(Entry {
                rel: ri,
                rot,
                inv: true,
                seq: inverse(&rotated),
            });
        }
    }
    let mut by_first: HashMap<Code, Vec<usize>> = HashMap::new();
    for (i, e) in entries.iter().enumerate() {
        by_first.entry(e.seq[0]).or_default().push(i);
    }
    (cores, entries, by_first)
}

#[derive(Clone)]
struct Move {
    at: usize,
    entry: usize,
    /// conjugator length applied after the replacement for cyclic reduction
    tail: usize,
}

struct Node {
    word: Vec<Code>,
    depth: usize,
    parent: usize,
    mv: Option<Move>,
}

/// Search for a proof that `w = 1` from the named relators.
pub fn prove_trivial(relators: &[(String, Word)], w: &Word, cfg: &SearchConfig) -> Verdict {
    let mut alpha = Alphabet::new();
    let (cores, entries, by_first) = relator_entries(relators, &mut alpha);
    let start_raw = alpha.encode(w);
    let pre = cyclic_prefix(&start_raw);
    let start: Vec<Code> = start_raw[pre..start_raw.len() - pre].to_vec();
    let longest = cores.iter().map(Vec::len).max().unwrap_or(0);
    let max_len = cfg.max_len.unwrap_or(start.len() + cfg.max_depth * longest);

    let mut nodes = vec![Node {
        word: start.clone(),
        depth: 0,
        parent: usize::MAX,
        mv: None,
    }];
    let mut seen: HashSet<Vec<Code>> = HashSet::new();
    seen.insert(least_rotation(&start));
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((start.len(), 0usize, 0usize)));
    let mut found = if start.is_empty() { Some(0) } else { None };
    'search: while found.is_none() {
        let Some(Reverse((_, depth, idx))) = heap.pop() else {
            break;
        };
        if depth >= cfg.max_depth {
            continue;
        }
        let cur = nodes[idx].word.clone();
        let n = cur.len();
        for at in 0..n {
            let Some(cands) = by_first.get(&cur[at]) else { continue };
            for &ei in cands {
                let seq = &entries[ei].seq;
                let m = seq.len();
                let mut k = 0;
                while k < m && k < n && cur[(at + k) % n] == seq[k] {
                    k += 1;
                }
                // s⁻¹ followed by the rest of the rotated word
                let replaced = inverse(&seq[k..]).into_iter().chain((k..n).map(|j| cur[(at + j) % n]));
                let red = reduce_codes(replaced);
                let tail = cyclic_prefix(&red);
                let next: Vec<Code> = red[tail..red.len() - tail].to_vec();
                if next.len() > max_len {
                    continue;
                }
                let key = least_rotation(&next);
                if !seen.insert(key) {
                    continue;
                }
                let id = nodes.len();
                let empty = next.is_empty();
                let len = next.len();
                nodes.push(Node {
                    word: next,
                    depth: depth + 1,
                    parent: idx,
                    mv: Some(Move { at, entry: ei, tail }),
                });
                if empty {
                    found = Some(id);
                    break 'search;
                }
                if nodes.len() >= cfg.max_states {
                    break 'search;
                }
                heap.push(Reverse((len, depth + 1, id)));
            }
        }
    }
    let explored = nodes.len();
    let Some(goal) = found else {
        return Verdict::Unknown { explored };
    };
    // replay the path as a derivation script
    let mut path = Vec::new();
    let mut i = goal;
    while i != 0 {
        path.push(i);
        i = nodes[i].parent;
    }
    path.reverse();
    let mut steps = Vec::new();
    let mut context = BTreeMap::new();
    let name_of = |ri: usize| relators[ri].0.clone();
    steps.push(Step::FreeReduce);
    if pre > 0 {
        steps.push(Step::ConjugateBothSides {
            word: alpha.decode(&start_raw[..pre]).to_string(),
        });
        steps.push(Step::FreeReduce);
    }
    let mut prev = 0;
    for &ni in &path {
        let mv = nodes[ni].mv.clone().expect("non-root");
        let word = &nodes[prev].word;
        if mv.at > 0 {
            steps.push(Step::ConjugateBothSides {
                word: alpha.decode(&word[..mv.at]).to_string(),
            });
            steps.push(Step::FreeReduce);
        }
        let e = &entries[mv.entry];
        let name = name_of(e.rel);
        context
            .entry(name.clone())
            .or_insert_with(|| RelationSpec::equation(&relators[e.rel].1, &Word::empty(), None));
        steps.push(Step::InsertRelator {
            rel: name,
            side: SideSel::Lhs,
            pos: 0,
            rot: e.rot,
            inv: !e.inv,
        });
        steps.push(Step::FreeReduce);
        if mv.tail > 0 {
            // the replaced word is s⁻¹ + rest; its first `tail` letters conjugate
            let rotated: Vec<Code> = (0..word.len()).map(|j| word[(mv.at + j) % word.len()]).collect();
            let k = common_prefix(&rotated, &e.seq);
            let red = reduce_codes(inverse(&e.seq[k..]).into_iter().chain(rotated[k..].iter().cloned()));
            steps.push(Step::ConjugateBothSides {
                word: alpha.decode(&red[..mv.tail]).to_string(),
            });
            steps.push(Step::FreeReduce);
        }
        prev = ni;
    }
    let certificate = DerivationScript {
        name: format!("search:{w}"),
        note: None,
        context,
        goal: RelationSpec::equation(w, &Word::empty(), None),
        steps,
        expect_fail_step: None,
    };
    Verdict::Equal {
        certificate,
        depth: nodes[goal].depth,
        explored,
    }
}

fn common_prefix(a: &[Code], b: &[Code]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Is `u = v` in the group presented by `p`? Searches for `u·v⁻¹ = 1`.
pub fn word_equal_bounded(p: &Presentation, u: &Word, v: &Word, max_depth: usize, max_states: usize) -> Verdict {
    let rels = named_relators(p);
    prove_trivial(
        &rels,
        &u.mul(&v.inverse()),
        &SearchConfig {
            max_depth,
            max_states,
            max_len: None,
        },
    )
}

/// Relators named `tag#k` with `k` the position in the presentation.
pub fn named_relators(p: &Presentation) -> Vec<(String, Word)> {
    p.relators()
        .iter()
        .enumerate()
        .map(|(i, r)| (format!("{}#{}", r.tag, i + 1), r.word.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::Relator;
    use crate::verifier::script::{check_derivation, Library};
    use crate::word::{expand_relation, RelationKind};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn braid2() -> Presentation {
        Presentation::new(
            vec![GenSym::new("a").unwrap(), GenSym::new("b").unwrap()],
            vec![Relator {
                tag: "br".into(),
                word: expand_relation(RelationKind::Br, &[w("a"), w("b")]).unwrap().remove(0),
            }],
        )
        .unwrap()
    }

    #[test]
    fn braid_relation_in_one_step() {
        let v = word_equal_bounded(&braid2(), &w("a b a"), &w("b a b"), 4, 1000);
        match v {
            Verdict::Equal { certificate, depth, .. } => {
                assert_eq!(depth, 1);
                assert!(check_derivation(&certificate, &mut Library::new()).passed);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn distinct_generators_stay_unknown() {
        let v = word_equal_bounded(&braid2(), &w("a"), &w("b"), 6, 5000);
        assert!(!v.is_equal());
    }

    #[test]
    fn certificate_replays_with_conjugation() {
        // a^b = b^{a⁻¹} follows from the braid relation
        let v = word_equal_bounded(&braid2(), &w("-b a b"), &w("a b -a"), 6, 10000);
        let Verdict::Equal { certificate, .. } = v else {
            panic!("not found")
        };
        let r = check_derivation(&certificate, &mut Library::new());
        assert!(r.passed, "{r}");
    }
}
