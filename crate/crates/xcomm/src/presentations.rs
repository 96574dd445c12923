//! The relator schedule `Upsilon_m`, presentations of the weak
//! commutativity group, and their text formats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{box_word, Alphabet, Letter, Word, WordError};

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("rank must be at least 1")]
    RankZero,
    #[error("relator {0} uses a barred generator that is not declared")]
    UndeclaredBar(usize),
    #[error("generator list {0:?} is neither a base list nor a doubled one")]
    BadGenerators(Vec<String>),
    #[error("the presentation is already doubled")]
    AlreadyDoubled,
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error("malformed plain presentation: {0}")]
    Plain(String),
    #[error("generator name {0:?} clashes with a barred name in the export")]
    NameClash(String),
}

/// A finite presentation. Doubled presentations carry `~x` for every base
/// generator `x` and may use barred letters in relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    doubled: bool,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, doubled: bool, relators: Vec<Word>) -> Result<Presentation, PresentationError> {
        let m = alphabet.rank();
        for (i, r) in relators.iter().enumerate() {
            if r.rank() != m {
                return Err(WordError::RankMismatch(r.rank(), m).into());
            }
            if !doubled && !r.is_unbarred() {
                return Err(PresentationError::UndeclaredBar(i));
            }
        }
        Ok(Presentation { alphabet, doubled, relators })
    }

    /// The free group on `alphabet`.
    pub fn free(alphabet: Alphabet) -> Presentation {
        Presentation { alphabet, doubled: false, relators: Vec::new() }
    }

    pub fn rank(&self) -> u32 {
        self.alphabet.rank()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn is_doubled(&self) -> bool {
        self.doubled
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Base names, followed by their barred copies when doubled.
    pub fn generators(&self) -> Vec<String> {
        let mut g: Vec<String> = self.alphabet.names().to_vec();
        if self.doubled {
            g.extend(self.alphabet.names().iter().map(|n| format!("~{n}")));
        }
        g
    }

    pub fn parse_json(text: &str) -> Result<Presentation, PresentationError> {
        let raw: PresentationJson = serde_json::from_str(text)?;
        Presentation::from_parts(&raw.generators, raw.relators.iter().map(String::as_str))
    }

    pub fn to_json(&self) -> String {
        let raw = PresentationJson {
            generators: self.generators(),
            relators: self.relators.iter().map(|r| self.alphabet.format_relator(r)).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    fn from_parts<'a>(
        generators: &[String],
        relators: impl Iterator<Item = &'a str>,
    ) -> Result<Presentation, PresentationError> {
        let base: Vec<String> = generators.iter().filter(|g| !g.starts_with('~')).cloned().collect();
        let barred: Vec<&str> = generators.iter().filter_map(|g| g.strip_prefix('~')).collect();
        let doubled = !barred.is_empty();
        let consistent = if doubled {
            barred.len() == base.len() && base.iter().all(|b| barred.contains(&b.as_str()))
        } else {
            true
        };
        if base.is_empty() || !consistent {
            return Err(PresentationError::BadGenerators(generators.to_vec()));
        }
        let alphabet = Alphabet::new(base)?;
        let relators = relators.map(|r| alphabet.parse(r)).collect::<Result<Vec<_>, _>>()?;
        Presentation::new(alphabet, doubled, relators)
    }

    /// `gens: a, ~a; rels: [a,~a]`, one relator per line after the first.
    pub fn to_plain(&self) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| self.alphabet.format_relator(r)).collect();
        format!("gens: {}; rels: {}", self.generators().join(", "), rels.join(",\n"))
    }

    pub fn parse_plain(text: &str) -> Result<Presentation, PresentationError> {
        let bad = |m: &str| PresentationError::Plain(m.to_string());
        let rest = text.trim_start().strip_prefix("gens:").ok_or_else(|| bad("missing 'gens:'"))?;
        let (gens, rels) = rest.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let rels = rels.trim_start().strip_prefix("rels:").ok_or_else(|| bad("missing 'rels:'"))?;
        let generators: Vec<String> = gens.split(',').map(|g| g.trim().to_string()).collect();
        let pieces = split_top_level(rels);
        Presentation::from_parts(&generators, pieces.iter().map(|s| s.trim()).filter(|s| !s.is_empty()))
    }

    pub fn export(&self, format: Format) -> Result<String, PresentationError> {
        match format {
            Format::Plain => Ok(self.to_plain()),
            Format::Json => Ok(self.to_json()),
            Format::Gap => self.to_cas(Format::Gap),
            Format::Magma => self.to_cas(Format::Magma),
        }
    }

    /// Names valid in a CAS: `~x` becomes `xbar`.
    fn cas_names(&self) -> Result<Vec<String>, PresentationError> {
        let names: Vec<String> = self
            .generators()
            .iter()
            .map(|g| match g.strip_prefix('~') {
                Some(b) => format!("{b}bar"),
                None => g.clone(),
            })
            .collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(PresentationError::NameClash(n.clone()));
            }
        }
        Ok(names)
    }

    fn cas_word(&self, names: &[String], w: &Word, format: Format) -> String {
        if w.is_empty() {
            return match format {
                Format::Magma => "Id(F)".to_string(),
                _ => "One(F)".to_string(),
            };
        }
        if let Some((x, y)) = crate::words::split_commutator(w) {
            let (x, y) = (self.cas_word(names, &x, format), self.cas_word(names, &y, format));
            return match format {
                Format::Magma => format!("({x}, {y})"),
                _ => format!("Comm({x}, {y})"),
            };
        }
        let m = self.rank();
        let letter = |l: Letter| {
            let col = l.index() - 1 + if l.barred() { m } else { 0 };
            let n = &names[col as usize];
            if l.is_inverse() {
                format!("{n}^-1")
            } else {
                n.clone()
            }
        };
        w.letters().iter().map(|&l| letter(l)).collect::<Vec<_>>().join("*")
    }

    fn to_cas(&self, format: Format) -> Result<String, PresentationError> {
        let names = self.cas_names()?;
        let rels: Vec<String> = self.relators.iter().map(|r| self.cas_word(&names, r, format)).collect();
        let mut out = String::new();
        match format {
            Format::Magma => {
                out += &format!("F<{}> := FreeGroup({});\n", names.join(", "), names.len());
                out += &format!("rels := [ {} ];\n", rels.join(",\n  "));
                out += "G := quo< F | rels >;\n";
            }
            _ => {
                let quoted: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
                out += &format!("F := FreeGroup({});;\n", quoted.join(", "));
                for (i, n) in names.iter().enumerate() {
                    out += &format!("{n} := F.{};;\n", i + 1);
                }
                out += &format!("rels := [ {} ];;\n", rels.join(",\n  "));
                out += "G := F / rels;;\n";
            }
        }
        Ok(out)
    }
}

/// Splits on commas outside brackets and parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: Vec<String>,
    relators: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Gap,
    Magma,
    Json,
}

impl FromStr for Format {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Format, PresentationError> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(Format::Plain),
            "gap" => Ok(Format::Gap),
            "magma" => Ok(Format::Magma),
            "json" => Ok(Format::Json),
            _ => Err(PresentationError::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `m + 2m(m-1) + sum_{s=1}^{m-1} C(m,s) [3(m-s) + 4 C(m-s,2)]`.
pub fn v(m: u32) -> Result<BigUint, PresentationError> {
    if m < 1 {
        return Err(PresentationError::RankZero);
    }
    let m = m as u64;
    let mut total = BigUint::from(m + 2 * m * (m - 1));
    for s in 1..m {
        total += binomial(m, s) * (BigUint::from(3 * (m - s)) + 4u32 * binomial(m - s, 2));
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsilonSchedule {
    pub rank: u32,
    pub words: Vec<Word>,
}

fn word_of(rank: u32, signed: &[(u32, i8)]) -> Word {
    let letters: Vec<Letter> =
        signed.iter().map(|&(i, s)| if s < 0 { Letter::gen(i).inverse() } else { Letter::gen(i) }).collect();
    Word::from_letters(&letters, rank).expect("indices within rank")
}

/// Strictly ascending subsets of `1..=m` of size `1..m`.
fn proper_supports(m: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << m) - 1 {
        out.push((1..=m).filter(|i| mask >> (i - 1) & 1 == 1).collect());
    }
    out
}

fn short_words(m: u32) -> Vec<Word> {
    let mut words: Vec<Word> = (1..=m).map(|i| word_of(m, &[(i, 1)])).collect();
    for i in 1..=m {
        for j in i + 1..=m {
            words.push(word_of(m, &[(i, 1), (j, 1)]));
            words.push(word_of(m, &[(i, 1), (j, -1)]));
            words.push(word_of(m, &[(i, -1), (j, 1)]));
            words.push(word_of(m, &[(j, 1), (i, 1)]));
        }
    }
    words
}

fn framed(m: u32, (k, sk): (u32, i8), support: &[u32], (j, sj): (u32, i8)) -> Word {
    let mut signed = vec![(k, sk)];
    signed.extend(support.iter().map(|&i| (i, 1)));
    signed.push((j, sj));
    word_of(m, &signed)
}

fn outside(m: u32, support: &[u32]) -> Vec<u32> {
    (1..=m).filter(|i| !support.contains(i)).collect()
}

/// The canonical schedule of `v(m)` words, sorted shortlex.
pub fn upsilon(m: u32) -> Result<UpsilonSchedule, PresentationError> {
    if m < 1 {
        return Err(PresentationError::RankZero);
    }
    let mut words = short_words(m);
    for support in proper_supports(m) {
        let out = outside(m, &support);
        for &k in &out {
            words.push(framed(m, (k, 1), &support, (k, 1)));
            words.push(framed(m, (k, 1), &support, (k, -1)));
            words.push(framed(m, (k, -1), &support, (k, 1)));
        }
        for (x, &k) in out.iter().enumerate() {
            for &j in &out[x + 1..] {
                words.push(framed(m, (k, 1), &support, (j, 1)));
                words.push(framed(m, (k, 1), &support, (j, -1)));
                words.push(framed(m, (k, -1), &support, (j, 1)));
                words.push(framed(m, (j, 1), &support, (k, 1)));
            }
        }
    }
    words.sort();
    Ok(UpsilonSchedule { rank: m, words })
}

/// Every frame `a_k^{±1} w0 a_j^{±1}` around a nonempty ascending monomial,
/// plus the short words; a superset of [`upsilon`].
pub fn upsilon_full(m: u32) -> Result<UpsilonSchedule, PresentationError> {
    if m < 1 {
        return Err(PresentationError::RankZero);
    }
    let mut words = short_words(m);
    for support in proper_supports(m) {
        let ends: Vec<(u32, i8)> = outside(m, &support).into_iter().flat_map(|i| [(i, 1), (i, -1)]).collect();
        for &b in &ends {
            for &a in &ends {
                words.push(framed(m, b, &support, a));
            }
        }
    }
    words.sort();
    words.dedup();
    Ok(UpsilonSchedule { rank: m, words })
}

/// Which schedule to use when building presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    #[default]
    Canonical,
    Full,
}

impl Schedule {
    pub fn words(self, m: u32) -> Result<UpsilonSchedule, PresentationError> {
        match self {
            Schedule::Canonical => upsilon(m),
            Schedule::Full => upsilon_full(m),
        }
    }
}

fn box_relators(m: u32, schedule: Schedule) -> Result<Vec<Word>, PresentationError> {
    Ok(schedule.words(m)?.words.iter().map(|u| box_word(u).expect("unbarred nonempty")).collect())
}

pub fn x_presentation_free(m: u32) -> Result<Presentation, PresentationError> {
    x_presentation_free_with(m, Schedule::Canonical)
}

pub fn x_presentation_free_with(m: u32, schedule: Schedule) -> Result<Presentation, PresentationError> {
    if m < 1 {
        return Err(PresentationError::RankZero);
    }
    x_presentation_of_with(&Presentation::free(Alphabet::standard(m)), schedule)
}

/// Doubles the generators and adds barred relators and the box relators.
pub fn x_presentation_of(p: &Presentation) -> Result<Presentation, PresentationError> {
    x_presentation_of_with(p, Schedule::Canonical)
}

pub fn x_presentation_of_with(p: &Presentation, schedule: Schedule) -> Result<Presentation, PresentationError> {
    if p.doubled {
        return Err(PresentationError::AlreadyDoubled);
    }
    let mut relators = p.relators.clone();
    relators.extend(p.relators.iter().map(Word::bar));
    relators.extend(box_relators(p.rank(), schedule)?);
    Presentation::new(p.alphabet.clone(), true, relators)
}

/// `2 d + v(m)`.
pub fn h2_bound(d_h2_g: u64, m: u32) -> Result<BigUint, PresentationError> {
    Ok(BigUint::from(2 * d_h2_g) + v(m)?)
}

/// `d > v(m)`; the group is assumed perfect by the caller.
pub fn w_nontrivial_criterion(d_h2_g: u64, m: u32) -> Result<bool, PresentationError> {
    Ok(BigUint::from(d_h2_g) > v(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    #[test]
    fn counts() {
        assert_eq!(v(1).unwrap(), BigUint::from(1u32));
        assert_eq!(v(2).unwrap(), BigUint::from(12u32));
        assert_eq!(v(3).unwrap(), BigUint::from(54u32));
        assert!(v(0).is_err());
    }

    #[test]
    fn upsilon_two_and_one() {
        let got = upsilon(2).unwrap().words;
        let want: Vec<Word> =
            ["a", "b", "ab", "a b^-1", "a^-1 b", "ba", "aba", "a^-1 b a", "a b a^-1", "bab", "b^-1 a b", "b a b^-1"]
                .iter()
                .map(|s| parse_word(s, 2).unwrap())
                .collect();
        let mut want_sorted = want.clone();
        want_sorted.sort();
        assert_eq!(got, want_sorted);
        assert_eq!(upsilon(1).unwrap().words, vec![parse_word("a", 1).unwrap()]);
    }

    #[test]
    fn upsilon_three_entries_for_a() {
        let u = upsilon(3).unwrap().words;
        assert_eq!(u.len(), 54);
        for s in ["bab", "b a b^-1", "b^-1 a b", "bac", "b a c^-1", "b^-1 a c", "cab", "cac", "c a c^-1", "c^-1 a c"] {
            assert!(u.contains(&parse_word(s, 3).unwrap()), "{s}");
        }
    }

    #[test]
    fn presentations() {
        let p1 = x_presentation_free(1).unwrap();
        assert_eq!(p1.to_plain(), "gens: a, ~a; rels: [a,~a]");
        let g = Presentation::parse_plain("gens: a; rels: a^2").unwrap();
        let x = x_presentation_of(&g).unwrap();
        assert_eq!(x.to_plain(), "gens: a, ~a; rels: a a,\n~a ~a,\n[a,~a]");
        let ab = Presentation::parse_json(r#"{"generators":["a","b"],"relators":["[a,b]"]}"#).unwrap();
        assert_eq!(x_presentation_of(&ab).unwrap().relators().len(), 14);
        let free2 = Presentation::free(Alphabet::standard(2));
        assert_eq!(x_presentation_of(&free2).unwrap(), x_presentation_free(2).unwrap());
    }

    #[test]
    fn bounds() {
        assert_eq!(h2_bound(0, 2).unwrap(), BigUint::from(12u32));
        assert_eq!(h2_bound(1, 2).unwrap(), BigUint::from(14u32));
        assert_eq!(h2_bound(5, 3).unwrap(), BigUint::from(64u32));
        assert!(w_nontrivial_criterion(13, 2).unwrap());
        assert!(!w_nontrivial_criterion(12, 2).unwrap());
        assert!(w_nontrivial_criterion(55, 3).unwrap());
    }
}
