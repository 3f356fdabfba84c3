//! The symmetric-group quotient.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::presentations::Presentation;
use crate::word::{GenSym, Word};

/// A permutation of `{1..n}`, stored as the images of `1..n` (zero based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// The transposition `(i j)` on `{1..n}`, one-based indices.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Perm::identity(n);
        p.0.swap(i - 1, j - 1);
        p
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j] = i;
        }
        Perm(out)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Image of `w` under the homomorphism given on generators.
pub fn eval_perm(w: &Word, assignment: &BTreeMap<GenSym, Perm>, degree: usize) -> Option<Perm> {
    let mut acc = Perm::identity(degree);
    for l in w.letters() {
        let p = assignment.get(&l.gen)?;
        acc = acc.compose(&if l.inv { p.inverse() } else { p.clone() });
    }
    Some(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientViolation {
    pub tag: String,
    pub relator: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientReport {
    pub checked: usize,
    pub missing: Vec<String>,
    pub violations: Vec<QuotientViolation>,
}

impl QuotientReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.violations.is_empty()
    }
}

/// Check that every relator maps to the identity permutation.
pub fn check_permutation_quotient(p: &Presentation, assignment: &BTreeMap<GenSym, Perm>) -> QuotientReport {
    let degree = assignment.values().map(Perm::degree).max().unwrap_or(0);
    let missing: Vec<String> = p
        .generators()
        .iter()
        .filter(|g| !assignment.contains_key(*g))
        .map(|g| g.to_string())
        .collect();
    let mut violations = Vec::new();
    let mut checked = 0;
    if missing.is_empty() {
        for r in p.relators() {
            checked += 1;
            if let Some(img) = eval_perm(&r.word, assignment, degree) {
                if !img.is_identity() {
                    violations.push(QuotientViolation {
                        tag: r.tag.clone(),
                        relator: r.word.to_string(),
                        image: img.to_string(),
                    });
                }
            }
        }
    }
    QuotientReport {
        checked,
        missing,
        violations,
    }
}

/// The standard assignment for presentations on `σ_i` and loop generators:
/// `σ_i ↦ (i i+1)`, `τ_r ↦ (1 2)`, and point pushes `δ_r`, `ε_r` ↦ identity.
pub fn standard_assignment(p: &Presentation, decorations: usize) -> BTreeMap<GenSym, Perm> {
    let mut out = BTreeMap::new();
    for g in p.generators() {
        let name = g.as_str();
        let (head, idx) = name.split_at(1);
        let idx: usize = idx.parse().unwrap_or(0);
        let perm = match head {
            "s" if idx >= 1 && idx < decorations => Perm::transposition(decorations, idx, idx + 1),
            "t" => Perm::transposition(decorations, 1, 2),
            _ => Perm::identity(decorations),
        };
        out.insert(g.clone(), perm);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{bt, DecoratedSurface};

    #[test]
    fn compose_and_display() {
        let a = Perm::transposition(3, 1, 2);
        let b = Perm::transposition(3, 2, 3);
        let ab = a.compose(&b);
        assert_eq!(ab.to_string(), "(1 2 3)");
        assert!(ab.compose(&ab.inverse()).is_identity());
        assert_eq!(Perm::identity(2).to_string(), "()");
    }

    #[test]
    fn braid_quotient() {
        let p = bt(&DecoratedSurface::new(0, 1, 4).unwrap()).unwrap();
        let r = check_permutation_quotient(&p, &standard_assignment(&p, 4));
        assert!(r.passed());
        let mut bad = standard_assignment(&p, 4);
        bad.insert(GenSym::new("s2").unwrap(), Perm::transposition(4, 3, 4));
        bad.insert(GenSym::new("s3").unwrap(), Perm::transposition(4, 1, 2));
        let r = check_permutation_quotient(&p, &bad);
        assert!(r.violations.iter().any(|v| v.tag == "nr:02"));
    }
}
