//! The ring `M = ZF_m / I_2`, where `I_2` is generated by all `(1 - g)^2`,
//! and the representation `nu: X(F_m) -> M x| F_m`.
//!
//! Elements are written on the square-free ascending monomials
//! `a_{i1} ... a_{is}`. [`reduce_word`] applies the local rewriting rules
//!
//! - `x^-1 -> 2 - x`
//! - `u u -> 2u - 1`
//! - `y x -> 2x + 2y - xy - 2` for `y > x`
//!
//! and lands in the free module on the `2^m` monomials. That module is only
//! a cover of `M` once `m >= 3`: the products of three or more `1 - a_i`
//! become 2-torsion. [`quotient_normal_form`] picks canonical
//! representatives in `M` itself, and [`relation_lattice`] recomputes the
//! kernel of the cover from the defining squares.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::abelian::{Abelianization, IntMatrix, Lattice};
use crate::words::{unbarred_words, Alphabet, Letter, Word, WordError};

/// Largest rank for which dense `2^m` computations are offered.
pub const MAX_DENSE_RANK: u32 = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("barred letter in a ring word")]
    Barred,
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u32, right: u32 },
    #[error("rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: u32, max: u32 },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A square-free ascending monomial, stored as a bit set of generator
/// indices (bit `i - 1` for `a_i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_mask(mask: u64) -> Monomial {
        Monomial(mask)
    }

    pub fn from_support(indices: &[u32]) -> Monomial {
        Monomial(indices.iter().fold(0, |m, &i| m | 1 << (i - 1)))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn support(self) -> Vec<u32> {
        (1..=64).filter(|i| self.0 >> (i - 1) & 1 == 1).collect()
    }

    fn max_index(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    fn with(self, i: u32) -> Monomial {
        Monomial(self.0 | 1 << (i - 1))
    }

    fn without(self, i: u32) -> Monomial {
        Monomial(self.0 & !(1 << (i - 1)))
    }

    /// The ascending word `a_{i1} ... a_{is}`.
    pub fn word(self, rank: u32) -> Result<Word, WordError> {
        let letters: Vec<Letter> = self.support().into_iter().map(Letter::gen).collect();
        Word::from_letters(&letters, rank)
    }

    /// Generator names concatenated; the identity is `""`.
    pub fn name(self, alphabet: &Alphabet) -> String {
        self.support().into_iter().map(|i| alphabet.name(i)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.support().cmp(&other.support()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An integer combination of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RingElem {
    rank: u32,
    coeffs: BTreeMap<Monomial, BigInt>,
}

impl RingElem {
    pub fn zero(rank: u32) -> RingElem {
        RingElem { rank, coeffs: BTreeMap::new() }
    }

    pub fn one(rank: u32) -> RingElem {
        RingElem::monomial(Monomial::ONE, BigInt::one(), rank)
    }

    pub fn monomial(mono: Monomial, coeff: BigInt, rank: u32) -> RingElem {
        let mut x = RingElem::zero(rank);
        x.add_term(mono, coeff);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>, rank: u32) -> RingElem {
        let mut x = RingElem::zero(rank);
        for (m, c) in terms {
            x.add_term(m, c);
        }
        x
    }

    /// Coordinates indexed by monomial mask, length `2^rank`.
    pub fn from_vector(v: &[BigInt], rank: u32) -> RingElem {
        RingElem::from_terms(v.iter().enumerate().map(|(i, c)| (Monomial(i as u64), c.clone())), rank)
    }

    pub fn to_vector(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); 1 << self.rank];
        for (m, c) in &self.coeffs {
            v[m.0 as usize] = c.clone();
        }
        v
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn coeffs(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.coeffs
    }

    pub fn coeff(&self, m: Monomial) -> BigInt {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(m).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&m);
        }
    }

    fn add_scaled(&mut self, other: &RingElem, k: &BigInt) {
        for (m, c) in &other.coeffs {
            self.add_term(*m, c * k);
        }
    }

    pub fn scale(&self, k: &BigInt) -> RingElem {
        let mut out = RingElem::zero(self.rank);
        out.add_scaled(self, k);
        out
    }

    pub fn neg(&self) -> RingElem {
        self.scale(&BigInt::from(-1))
    }

    /// Right multiplication by the letters of an unbarred word.
    pub fn right_mul_word(&self, w: &Word) -> Result<RingElem, RingError> {
        if !w.is_unbarred() {
            return Err(RingError::Barred);
        }
        check_rank(self.rank, w.rank())?;
        let mut x = self.clone();
        for &l in w.letters() {
            x = right_mul_letter(&x, l);
        }
        Ok(x)
    }

    /// Canonical representative in `M`; see [`quotient_normal_form`].
    pub fn quotient_normal_form(&self) -> RingElem {
        quotient_normal_form(self)
    }

    /// `{"coeffs": {"": c, "a": c, ...}}` with the standard generator names.
    pub fn to_json_value(&self) -> Value {
        let alphabet = Alphabet::standard(self.rank);
        let coeffs: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(m, c)| (m.name(&alphabet), Value::Number(c.to_string().parse().expect("integer literal"))))
            .collect();
        let mut obj = Map::new();
        obj.insert("coeffs".into(), Value::Object(coeffs));
        Value::Object(obj)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let alphabet = Alphabet::standard(self.rank);
        for (k, (m, c)) in self.coeffs.iter().enumerate() {
            let name = m.support().into_iter().map(|i| alphabet.name(i)).collect::<Vec<_>>().join("*");
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (name.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&name)?,
                (false, false) => write!(f, "{mag}{name}")?,
            }
        }
        Ok(())
    }
}

fn check_rank(left: u32, right: u32) -> Result<(), RingError> {
    if left == right {
        Ok(())
    } else {
        Err(RingError::RankMismatch { left, right })
    }
}

/// `S * a_i` for an ascending monomial `S`.
fn mono_times_gen(s: Monomial, i: u32, rank: u32) -> RingElem {
    let top = s.max_index();
    match top.cmp(&i) {
        Ordering::Less => RingElem::monomial(s.with(i), BigInt::one(), rank),
        Ordering::Equal => {
            // p u u -> 2 p u - p
            RingElem::from_terms([(s, BigInt::from(2)), (s.without(i), BigInt::from(-1))], rank)
        }
        Ordering::Greater => {
            // p y x -> 2 p x + 2 p y - p x y - 2 p
            let p = s.without(top);
            let px = mono_times_gen(p, i, rank);
            let mut out = px.scale(&BigInt::from(2));
            for (m, c) in &px.coeffs {
                out.add_term(m.with(top), -c);
            }
            out.add_term(s, BigInt::from(2));
            out.add_term(p, BigInt::from(-2));
            out
        }
    }
}

fn right_mul_letter(x: &RingElem, l: Letter) -> RingElem {
    let mut out = RingElem::zero(x.rank);
    for (m, c) in &x.coeffs {
        out.add_scaled(&mono_times_gen(*m, l.index(), x.rank), c);
    }
    if l.is_inverse() {
        // x a^-1 = 2x - x a
        let mut inv = x.scale(&BigInt::from(2));
        inv.add_scaled(&out, &BigInt::from(-1));
        inv
    } else {
        out
    }
}

/// The image of an unbarred word on the monomial basis of the cover.
pub fn reduce_word(w: &Word) -> Result<RingElem, RingError> {
    RingElem::one(w.rank()).right_mul_word(w)
}

pub fn ring_add(x: &RingElem, y: &RingElem) -> Result<RingElem, RingError> {
    check_rank(x.rank, y.rank)?;
    let mut out = x.clone();
    out.add_scaled(y, &BigInt::one());
    Ok(out)
}

pub fn ring_sub(x: &RingElem, y: &RingElem) -> Result<RingElem, RingError> {
    check_rank(x.rank, y.rank)?;
    let mut out = x.clone();
    out.add_scaled(y, &BigInt::from(-1));
    Ok(out)
}

pub fn ring_mul(x: &RingElem, y: &RingElem) -> Result<RingElem, RingError> {
    check_rank(x.rank, y.rank)?;
    let mut out = RingElem::zero(x.rank);
    for (m, c) in &y.coeffs {
        let xm = x.right_mul_word(&m.word(x.rank)?)?;
        out.add_scaled(&xm, c);
    }
    Ok(out)
}

/// Sum of coefficients.
pub fn augmentation(x: &RingElem) -> BigInt {
    x.coeffs.values().sum()
}

/// `x_S = prod (1 - a_i)` over `S`, expanded on the monomials.
pub fn x_monomial(s: Monomial, rank: u32) -> RingElem {
    let mut out = RingElem::zero(rank);
    let mut t = s.0;
    loop {
        let sign = if t.count_ones().is_multiple_of(2) { 1 } else { -1 };
        out.add_term(Monomial(t), BigInt::from(sign));
        if t == 0 {
            break;
        }
        t = (t - 1) & s.0;
    }
    out
}

/// Reduces the coefficient of every monomial of degree at least 3 into
/// `{0, 1}` by subtracting multiples of `2 x_S`, top degree first. Two
/// cover elements agree in `M` exactly when their normal forms agree.
pub fn quotient_normal_form(x: &RingElem) -> RingElem {
    let mut out = x.clone();
    let top = out.coeffs.keys().map(|m| m.degree()).max().unwrap_or(0);
    for d in (3..=top).rev() {
        let keys: Vec<Monomial> = out.coeffs.keys().copied().filter(|m| m.degree() == d).collect();
        for s in keys {
            let k = out.coeff(s).div_floor(&BigInt::from(2));
            if k.is_zero() {
                continue;
            }
            let sign = if d % 2 == 0 { 1 } else { -1 };
            let t: BigInt = k * sign * 2;
            out.add_scaled(&x_monomial(s, x.rank), &-t);
        }
    }
    out
}

fn check_dense_rank(m: u32) -> Result<(), RingError> {
    if (1..=MAX_DENSE_RANK).contains(&m) {
        Ok(())
    } else {
        Err(RingError::RankOutOfRange { rank: m, max: MAX_DENSE_RANK })
    }
}

/// Left multiplication by each `a_i` on the `2^m` cover, rows and columns
/// indexed by monomial mask.
pub fn matrix_rep(m: u32) -> Result<Vec<IntMatrix>, RingError> {
    check_dense_rank(m)?;
    let n = 1usize << m;
    let mut out = Vec::new();
    for i in 1..=m {
        let mut a = IntMatrix::zeros(n, n);
        for col in 0..n {
            let s = Monomial(col as u64);
            let w = Word::generator(i, m)?.concat(&s.word(m)?);
            for (mono, c) in reduce_word(&w)?.coeffs {
                a[(mono.0 as usize, col)] = c;
            }
        }
        out.push(a);
    }
    Ok(out)
}

/// Product of letter matrices, with `a_i^-1` acting as `2I - A_i`.
pub fn word_matrix(mats: &[IntMatrix], w: &Word) -> IntMatrix {
    let n = mats.first().map_or(1, |a| a.rows());
    let two_i = IntMatrix::identity(n).scale(&BigInt::from(2));
    let mut out = IntMatrix::identity(n);
    for &l in w.letters() {
        let a = &mats[(l.index() - 1) as usize];
        let step = if l.is_inverse() { two_i.add(&a.scale(&BigInt::from(-1))) } else { a.clone() };
        out = out.mul(&step);
    }
    out
}

/// The kernel of the cover `Z^{2^m} -> M`: generated by `(1 - g)^2` for
/// reduced `g` of length at most 3, closed under multiplication by
/// `a_i^{+-1}` on both sides.
pub fn relation_lattice(m: u32) -> Result<Lattice, RingError> {
    check_dense_rank(m)?;
    let n = 1usize << m;
    let mut lattice = Lattice::new(n);
    let one = RingElem::one(m);
    for len in 1..=3 {
        for g in unbarred_words(m, len) {
            let x = ring_sub(&one, &reduce_word(&g)?)?;
            lattice.insert(ring_mul(&x, &x)?.to_vector());
        }
    }
    let gens: Vec<Word> = (1..=m)
        .flat_map(|i| {
            let a = Word::generator(i, m).expect("index within rank");
            [a.inverse(), a]
        })
        .collect();
    let left: Vec<RingElem> = gens.iter().map(reduce_word).collect::<Result<_, _>>()?;
    loop {
        let mut grew = false;
        for v in lattice.basis().to_vec() {
            let x = RingElem::from_vector(&v, m);
            for (g, gl) in gens.iter().zip(&left) {
                grew |= lattice.insert(x.right_mul_word(g)?.to_vector());
                grew |= lattice.insert(ring_mul(gl, &x)?.to_vector());
            }
        }
        if !grew {
            return Ok(lattice);
        }
    }
}

/// Invariants of `M(F_m)` as an abelian group.
pub fn module_structure(m: u32) -> Result<Abelianization, RingError> {
    Ok(relation_lattice(m)?.quotient_invariants())
}

/// The rank of `A(F_m)/I_2(F_m)`, which is `H_1(L(F_m))`.
pub fn h1_l_rank(m: u32) -> Result<usize, RingError> {
    Ok((1usize << m) - 1 - relation_lattice(m)?.rank())
}

/// A rewriting rule applicable at a position of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Inv,
    Sq,
    Swap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSite {
    pub rule: Rule,
    pub position: usize,
}

/// Every place a rule applies; empty exactly on ascending monomials.
pub fn rule_sites(letters: &[Letter]) -> Vec<RuleSite> {
    let mut out = Vec::new();
    for (p, l) in letters.iter().enumerate() {
        if l.is_inverse() {
            out.push(RuleSite { rule: Rule::Inv, position: p });
        }
    }
    for (p, w) in letters.windows(2).enumerate() {
        if w[0].is_inverse() || w[1].is_inverse() {
            continue;
        }
        match w[0].index().cmp(&w[1].index()) {
            Ordering::Equal => out.push(RuleSite { rule: Rule::Sq, position: p }),
            Ordering::Greater => out.push(RuleSite { rule: Rule::Swap, position: p }),
            Ordering::Less => {}
        }
    }
    out
}

fn splice(letters: &[Letter], at: usize, drop: usize, insert: &[Letter]) -> Vec<Letter> {
    let mut v = letters[..at].to_vec();
    v.extend_from_slice(insert);
    v.extend_from_slice(&letters[at + drop..]);
    v
}

/// Applies one rule, returning the weighted output words.
pub fn apply_rule(letters: &[Letter], site: RuleSite) -> Vec<(Vec<Letter>, i64)> {
    let p = site.position;
    match site.rule {
        Rule::Inv => {
            let x = letters[p].inverse();
            vec![(splice(letters, p, 1, &[]), 2), (splice(letters, p, 1, &[x]), -1)]
        }
        Rule::Sq => {
            let u = letters[p];
            vec![(splice(letters, p, 2, &[u]), 2), (splice(letters, p, 2, &[]), -1)]
        }
        Rule::Swap => {
            let (y, x) = (letters[p], letters[p + 1]);
            vec![
                (splice(letters, p, 2, &[x]), 2),
                (splice(letters, p, 2, &[y]), 2),
                (splice(letters, p, 2, &[x, y]), -1),
                (splice(letters, p, 2, &[]), -2),
            ]
        }
    }
}

/// Rewrites `w` term by term, longest term first, letting `choose` pick
/// which applicable rule fires. Used to test confluence.
pub fn reduce_word_by_rules(w: &Word, mut choose: impl FnMut(&[RuleSite]) -> usize) -> Result<RingElem, RingError> {
    if !w.is_unbarred() {
        return Err(RingError::Barred);
    }
    let mut terms: BTreeMap<Vec<Letter>, BigInt> = BTreeMap::new();
    terms.insert(w.letters().to_vec(), BigInt::one());
    let mut done = RingElem::zero(w.rank());
    while let Some(key) = terms.keys().max_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b))).cloned() {
        let c = terms.remove(&key).expect("present");
        let sites = rule_sites(&key);
        if sites.is_empty() {
            done.add_term(Monomial::from_support(&key.iter().map(|l| l.index()).collect::<Vec<_>>()), c);
            continue;
        }
        let site = sites[choose(&sites) % sites.len()];
        for (out, k) in apply_rule(&key, site) {
            let slot = terms.entry(out.clone()).or_default();
            *slot += &c * k;
            if slot.is_zero() {
                terms.remove(&out);
            }
        }
    }
    Ok(done)
}

/// An element `(v, g)` of `M x| F_m`, multiplied as
/// `(v1, g1)(v2, g2) = (v1 + g1 v2, g1 g2)`. The ring coordinate is kept in
/// quotient normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WreathElem {
    pub v: RingElem,
    pub g: Word,
}

impl WreathElem {
    pub fn identity(rank: u32) -> WreathElem {
        WreathElem { v: RingElem::zero(rank), g: Word::identity(rank) }
    }

    pub fn is_identity(&self) -> bool {
        self.v.is_zero() && self.g.is_empty()
    }

    pub fn mul(&self, other: &WreathElem) -> Result<WreathElem, RingError> {
        let moved = ring_mul(&reduce_word(&self.g)?, &other.v)?;
        let v = ring_add(&self.v, &moved)?;
        Ok(WreathElem { v: quotient_normal_form(&v), g: self.g.concat(&other.g) })
    }

    pub fn inverse(&self) -> Result<WreathElem, RingError> {
        let gi = self.g.inverse();
        let v = ring_mul(&reduce_word(&gi)?, &self.v)?.neg();
        Ok(WreathElem { v: quotient_normal_form(&v), g: gi })
    }

    pub fn to_json_value(&self) -> Value {
        let alphabet = Alphabet::standard(self.g.rank());
        let g = if self.g.is_empty() { String::new() } else { alphabet.format(&self.g) };
        let mut obj = Map::new();
        obj.insert("v".into(), self.v.to_json_value());
        obj.insert("g".into(), Value::String(g));
        Value::Object(obj)
    }
}

fn nu_letter(l: Letter, rank: u32) -> Result<WreathElem, RingError> {
    let a = Word::generator(l.index(), rank)?;
    // a -> (1, a) and ~a -> (1,1)^-1 (1, a) (1, 1) = (a, a)
    let v = if l.barred() { reduce_word(&a)? } else { RingElem::one(rank) };
    let x = WreathElem { v, g: a };
    if l.is_inverse() {
        x.inverse()
    } else {
        Ok(x)
    }
}

pub fn nu(w: &Word) -> Result<WreathElem, RingError> {
    let mut out = WreathElem::identity(w.rank());
    for &l in w.letters() {
        out = out.mul(&nu_letter(l, w.rank())?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{box_word, parse_word};

    fn w(s: &str, m: u32) -> Word {
        parse_word(s, m).unwrap()
    }

    fn elem(terms: &[(&[u32], i64)], m: u32) -> RingElem {
        RingElem::from_terms(terms.iter().map(|(s, c)| (Monomial::from_support(s), BigInt::from(*c))), m)
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_word(&w("aa", 1)).unwrap(), elem(&[(&[1], 2), (&[], -1)], 1));
        assert_eq!(reduce_word(&w("a^-1", 1)).unwrap(), elem(&[(&[], 2), (&[1], -1)], 1));
        let ba = reduce_word(&w("ba", 2)).unwrap();
        assert_eq!(ba, elem(&[(&[1], 2), (&[2], 2), (&[1, 2], -1), (&[], -2)], 2));
        assert_eq!(augmentation(&ba), BigInt::one());
        assert!(reduce_word(&w("~a", 1)).is_err());
    }

    #[test]
    fn ring_examples() {
        let x = ring_sub(&RingElem::one(1), &reduce_word(&w("a", 1)).unwrap()).unwrap();
        assert!(ring_mul(&x, &x).unwrap().is_zero());
        let a = reduce_word(&w("a", 2)).unwrap();
        let b = reduce_word(&w("b", 2)).unwrap();
        assert_eq!(ring_mul(&RingElem::one(2), &a).unwrap(), a);
        assert_eq!(ring_mul(&a, &b).unwrap(), elem(&[(&[1, 2], 1)], 2));
        assert!(ring_mul(&a, &RingElem::one(3)).is_err());
        assert_eq!(augmentation(&RingElem::zero(2)), BigInt::zero());
    }

    #[test]
    fn display_and_json() {
        let ba = reduce_word(&w("ba", 2)).unwrap();
        assert_eq!(ba.to_string(), "-2 + 2a + 2b - a*b");
        let j = ba.to_json_value().to_string();
        assert_eq!(j, r#"{"coeffs":{"":-2,"a":2,"ab":-1,"b":2}}"#);
    }

    #[test]
    fn quotient_form_kills_torsion() {
        let two_x = x_monomial(Monomial::from_support(&[1, 2, 3]), 3).scale(&BigInt::from(2));
        assert!(quotient_normal_form(&two_x).is_zero());
        let abc = reduce_word(&w("abc", 3)).unwrap();
        assert_eq!(quotient_normal_form(&abc), abc);
    }

    #[test]
    fn ranks() {
        assert_eq!(h1_l_rank(1).unwrap(), 1);
        assert_eq!(h1_l_rank(2).unwrap(), 3);
        assert_eq!(h1_l_rank(3).unwrap(), 6);
        let s = module_structure(3).unwrap();
        assert_eq!(s.free_rank, 7);
        assert_eq!(s.torsion, vec![BigInt::from(2)]);
        assert!(h1_l_rank(7).is_err());
    }

    #[test]
    fn matrices() {
        let mats = matrix_rep(1).unwrap();
        let a = &mats[0];
        let two = BigInt::from(2);
        assert_eq!(a.mul(a), a.scale(&two).add(&IntMatrix::identity(2).scale(&BigInt::from(-1))));
        let mats = matrix_rep(2).unwrap();
        let ba = word_matrix(&mats, &w("ba", 2));
        let d = IntMatrix::identity(4).add(&ba.scale(&BigInt::from(-1)));
        assert!(d.mul(&d).is_zero());
    }

    #[test]
    fn nu_examples() {
        let x = nu(&w("a", 2)).unwrap();
        assert_eq!(x.v, RingElem::one(2));
        assert_eq!(x.g, w("a", 2));
        let y = nu(&w("~a", 2)).unwrap();
        assert_eq!(y.v, reduce_word(&w("a", 2)).unwrap());
        let z = nu(&w("a ~a^-1", 2)).unwrap();
        assert_eq!(z.v, elem(&[(&[], 1), (&[1], -1)], 2));
        assert!(z.g.is_empty());
        assert!(nu(&box_word(&w("ab", 2)).unwrap()).unwrap().is_identity());
        assert!(nu(&box_word(&w("abc", 3)).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn rule_engine_agrees() {
        let x = w("b a^-1 c b b a", 3);
        let first = reduce_word_by_rules(&x, |_| 0).unwrap();
        let last = reduce_word_by_rules(&x, |s| s.len() - 1).unwrap();
        assert_eq!(first, reduce_word(&x).unwrap());
        assert_eq!(last, first);
    }
}
