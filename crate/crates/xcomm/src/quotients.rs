//! Checking presentations inside small permutation groups.
//!
//! Permutations act on the right: a word `x y` sends a point `p` to
//! `(p^x)^y`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::presentations::Presentation;
use crate::words::{unbarred_words, Alphabet, Word};

/// Default element bound for [`closure_order`].
pub const DEFAULT_BOUND: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("not a permutation of 1..{0}")]
    NotPermutation(usize),
    #[error("generator {0} has no image")]
    Unassigned(String),
    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),
    #[error("group order exceeds {0}")]
    Overflow(usize),
    #[error("assignment: {0}")]
    Json(String),
}

/// A permutation of `0..n`, shown 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n as u32).collect() }
    }

    /// From 0-based images.
    pub fn new(images: Vec<u32>) -> Result<Perm, QuotientError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return Err(QuotientError::NotPermutation(n));
            }
        }
        Ok(Perm { images })
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(images: &[u32]) -> Result<Perm, QuotientError> {
        if images.contains(&0) {
            return Err(QuotientError::NotPermutation(images.len()));
        }
        Perm::new(images.iter().map(|i| i - 1).collect())
    }

    /// From 1-based disjoint cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Result<Perm, QuotientError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                let q = c[(k + 1) % c.len()];
                if p == 0 || q == 0 || p as usize > n || q as usize > n {
                    return Err(QuotientError::NotPermutation(n));
                }
                images[p as usize - 1] = q - 1;
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<u32> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn apply(&self, p: u32) -> u32 {
        self.images[p as usize]
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `x` on the first `n` points and `y` on the next `n`.
    pub fn direct(x: &Perm, y: &Perm) -> Perm {
        let n = x.degree() as u32;
        let mut images = x.images.clone();
        images.extend(y.images.iter().map(|i| i + n));
        Perm { images }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut any = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push((p + 1).to_string());
                p = self.images[p] as usize;
            }
            write!(f, "({})", cycle.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Images of generators, keyed by name (`a`, `~a`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    degree: usize,
    images: BTreeMap<String, Perm>,
}

impl Assignment {
    pub fn new(images: BTreeMap<String, Perm>) -> Result<Assignment, QuotientError> {
        let degree = images.values().next().map_or(0, Perm::degree);
        if let Some(p) = images.values().find(|p| p.degree() != degree) {
            return Err(QuotientError::Degree(degree, p.degree()));
        }
        Ok(Assignment { degree, images })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, Perm)>) -> Result<Assignment, QuotientError> {
        Assignment::new(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, name: &str) -> Option<&Perm> {
        self.images.get(name)
    }

    pub fn images(&self) -> &BTreeMap<String, Perm> {
        &self.images
    }

    /// `{"a": [2, 1, 4, 3], "~a": [3, 4, 1, 2]}` in 1-based one-line form.
    pub fn parse_json(text: &str) -> Result<Assignment, QuotientError> {
        let raw: BTreeMap<String, Vec<u32>> =
            serde_json::from_str(text).map_err(|e| QuotientError::Json(e.to_string()))?;
        let images = raw.into_iter().map(|(k, v)| Perm::from_one_line(&v).map(|p| (k, p))).collect::<Result<_, _>>()?;
        Assignment::new(images)
    }

    pub fn to_json(&self) -> String {
        let raw: BTreeMap<&str, Vec<u32>> = self.images.iter().map(|(k, v)| (k.as_str(), v.one_line())).collect();
        serde_json::to_string(&raw).expect("plain map")
    }
}

fn letter_name(alphabet: &Alphabet, l: crate::words::Letter) -> String {
    let base = alphabet.name(l.index());
    if l.barred() {
        format!("~{base}")
    } else {
        base.to_string()
    }
}

/// Evaluates `w`, reading generator names from `alphabet`.
pub fn eval_word_perm(w: &Word, alphabet: &Alphabet, asg: &Assignment) -> Result<Perm, QuotientError> {
    let mut out = Perm::identity(asg.degree);
    for &l in w.letters() {
        let name = letter_name(alphabet, l);
        let p = asg.get(&name).ok_or(QuotientError::Unassigned(name))?;
        out = out.then(&if l.is_inverse() { p.inverse() } else { p.clone() });
    }
    Ok(out)
}

/// Whether every relator of `p` maps to the identity.
pub fn verify_quotient(p: &Presentation, asg: &Assignment) -> Result<bool, QuotientError> {
    for r in p.relators() {
        if !eval_word_perm(r, p.alphabet(), asg)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All elements of the group generated by `gens`, by breadth-first
/// search, failing past `bound` elements.
pub fn closure(gens: &[Perm], degree: usize, bound: usize) -> Result<HashSet<Perm>, QuotientError> {
    let id = Perm::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if !seen.contains(&y) {
                if seen.len() >= bound {
                    return Err(QuotientError::Overflow(bound));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

/// The order of `<gens>` if at most `bound`.
pub fn closure_order(gens: &[Perm], degree: usize, bound: usize) -> Result<usize, QuotientError> {
    closure(gens, degree, bound).map(|s| s.len())
}

/// Outcome of [`check_fib_generators`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibReport {
    pub q_order: usize,
    pub pair_order: usize,
    pub sweep_order: usize,
    pub equal: bool,
}

/// Compares, inside `Q x Q`, the subgroup generated by `(a, a^-1)`,
/// `(b, b^-1)`, `(ab, (ab)^-1)` with the one generated by all `(x, x^-1)`
/// for `x` the image of a word in `a, b` of length at most
/// `2 ceil(log2 |Q|) + 2`.
pub fn check_fib_generators(asg: &Assignment) -> Result<FibReport, QuotientError> {
    let alphabet = Alphabet::standard(2);
    let n = asg.degree;
    let eval = |w: &Word| eval_word_perm(w, &alphabet, asg);
    let gens = [eval(&Word::generator(1, 2).expect("rank 2"))?, eval(&Word::generator(2, 2).expect("rank 2"))?];
    let q_order = closure_order(&gens, n, DEFAULT_BOUND)?;
    let pair = |x: &Perm| Perm::direct(x, &x.inverse());

    let ab = gens[0].then(&gens[1]);
    let pairs = [pair(&gens[0]), pair(&gens[1]), pair(&ab)];
    let pair_set = closure(&pairs, 2 * n, DEFAULT_BOUND)?;

    let radius = 2 * (q_order as f64).log2().ceil() as usize + 2;
    let mut sweep: HashSet<Perm> = HashSet::new();
    // Words beyond the point where the ball stops growing add nothing.
    let mut stable = 0;
    for len in 1..=radius {
        let before = sweep.len();
        for w in unbarred_words(2, len) {
            sweep.insert(eval(&w)?);
        }
        stable = if sweep.len() == before { stable + 1 } else { 0 };
        if stable >= 2 || sweep.len() == q_order {
            break;
        }
    }
    let sweep_gens: Vec<Perm> = sweep.iter().map(pair).collect();
    let sweep_set = closure(&sweep_gens, 2 * n, DEFAULT_BOUND)?;
    Ok(FibReport { q_order, pair_order: pair_set.len(), sweep_order: sweep_set.len(), equal: pair_set == sweep_set })
}

/// `a -> (1, 0)` and `~a -> (0, 1)` acting regularly on `C_n x C_n`.
pub fn regular_cyclic_pair(n: usize) -> Assignment {
    let idx = |i: usize, j: usize| (i * n + j) as u32;
    let mut x = vec![0; n * n];
    let mut y = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            x[i * n + j] = idx((i + 1) % n, j);
            y[i * n + j] = idx(i, (j + 1) % n);
        }
    }
    Assignment::from_pairs([("a", Perm::new(x).expect("shift")), ("~a", Perm::new(y).expect("shift"))])
        .expect("equal degrees")
}
