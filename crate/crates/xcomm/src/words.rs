//! Reduced words in the free group on `a_1..a_m` and the barred copies
//! `~a_1..~a_m`, with the bar involution and box relators.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} is outside rank {rank}")]
    IndexOutOfRange { index: u32, rank: u32 },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(u32, u32),
    #[error("expected a word without barred letters")]
    Barred,
    #[error("expected a nonempty word")]
    Empty,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid generator name {0:?}")]
    BadName(String),
}

/// A generator `a_index` or its barred copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenSym {
    pub index: u32,
    pub barred: bool,
}

impl GenSym {
    pub fn new(index: u32, barred: bool) -> GenSym {
        assert!(index >= 1, "generator indices start at 1");
        GenSym { index, barred }
    }
}

/// A generator with a sign, packed as `4*(index-1) + 2*barred + inverse`.
///
/// The packing makes the derived order agree with the ascending order used
/// throughout: by index, then unbarred before barred, then positive before
/// inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(sym: GenSym, sign: i8) -> Letter {
        assert!(sym.index >= 1, "generator indices start at 1");
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        Letter(4 * (sym.index - 1) + 2 * sym.barred as u32 + (sign < 0) as u32)
    }

    /// The unbarred positive letter `a_index`.
    pub fn gen(index: u32) -> Letter {
        Letter::new(GenSym::new(index, false), 1)
    }

    pub fn index(self) -> u32 {
        self.0 / 4 + 1
    }

    pub fn barred(self) -> bool {
        self.0 & 2 != 0
    }

    pub fn sign(self) -> i8 {
        if self.0 & 1 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn sym(self) -> GenSym {
        GenSym { index: self.index(), barred: self.barred() }
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn bar(self) -> Letter {
        Letter(self.0 ^ 2)
    }

    pub fn unbarred(self) -> Letter {
        Letter(self.0 & !2)
    }

    pub fn positive(self) -> Letter {
        Letter(self.0 & !1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}a{}{}",
            if self.barred() { "~" } else { "" },
            self.index(),
            if self.is_inverse() { "^-1" } else { "" }
        )
    }
}

/// A freely reduced word of a fixed ambient rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    rank: u32,
}

/// Pushes `l` onto a reduced stack, cancelling against the top.
#[inline]
pub(crate) fn push_reduce(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last() == Some(&l.inverse()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// Freely reduces `raw` into a word of rank `m`.
pub fn free_reduce(raw: &[Letter], m: u32) -> Result<Word, WordError> {
    if let Some(l) = raw.iter().find(|l| l.index() > m) {
        return Err(WordError::IndexOutOfRange { index: l.index(), rank: m });
    }
    Ok(Word::reduce_iter(raw.iter().copied(), m))
}

impl Word {
    pub fn identity(rank: u32) -> Word {
        Word { letters: Vec::new(), rank }
    }

    pub fn generator(index: u32, rank: u32) -> Result<Word, WordError> {
        Word::from_letters(&[Letter::gen(index)], rank)
    }

    /// Builds a word from arbitrary letters, reducing them.
    pub fn from_letters(raw: &[Letter], rank: u32) -> Result<Word, WordError> {
        free_reduce(raw, rank)
    }

    /// Reduces letters whose indices are already known to fit in `rank`.
    pub(crate) fn reduce_iter(raw: impl IntoIterator<Item = Letter>, rank: u32) -> Word {
        let mut letters = Vec::new();
        for l in raw {
            debug_assert!(l.index() <= rank);
            push_reduce(&mut letters, l);
        }
        Word { letters, rank }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Reinterprets the word in another ambient rank.
    pub fn with_rank(&self, rank: u32) -> Result<Word, WordError> {
        free_reduce(&self.letters, rank)
    }

    /// Largest generator index occurring in the word, 0 if empty.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn is_unbarred(&self) -> bool {
        self.letters.iter().all(|l| !l.barred())
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect(), rank: self.rank }
    }

    /// Swaps barred and unbarred letters, keeping signs.
    pub fn bar(&self) -> Word {
        Word { letters: self.letters.iter().map(|l| l.bar()).collect(), rank: self.rank }
    }

    /// The image under `~a_i -> a_i`, reduced.
    pub fn erase_bars(&self) -> Word {
        Word::reduce_iter(self.letters.iter().map(|l| l.unbarred()), self.rank)
    }

    /// Keeps only the letters satisfying `keep`, reduced.
    pub fn project(&self, keep: impl Fn(Letter) -> bool) -> Word {
        Word::reduce_iter(self.letters.iter().copied().filter(|&l| keep(l)), self.rank)
    }

    /// Exponent sum of each symbol: unbarred indices first, then barred.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let m = self.rank as usize;
        let mut out = vec![0i64; 2 * m];
        for l in &self.letters {
            let col = (l.index() - 1) as usize + if l.barred() { m } else { 0 };
            out[col] += l.sign() as i64;
        }
        out
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduce(&mut letters, l);
        }
        Word { letters, rank: self.rank }
    }

    /// `other^-1 * self * other`.
    pub fn conj_by(&self, other: &Word) -> Word {
        other.inverse().concat(self).concat(other)
    }

    /// `self^-1 * other^-1 * self * other`.
    pub fn comm_with(&self, other: &Word) -> Word {
        self.inverse().concat(&other.inverse()).concat(self).concat(other)
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// The subword `letters[range]`, which is reduced already.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word { letters: self.letters[range].to_vec(), rank: self.rank }
    }

    /// Splits as `p * core * p^-1` with `core` cyclically reduced.
    pub fn cyclic_core(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        (self.slice(0..k), self.slice(k..n - k))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex on letters, then rank.
impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Alphabet::standard(self.rank).format(self))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", Alphabet::standard(self.rank).format(self))
    }
}

fn same_rank(u: &Word, v: &Word) -> Result<(), WordError> {
    if u.rank != v.rank {
        return Err(WordError::RankMismatch(u.rank, v.rank));
    }
    Ok(())
}

pub fn mul(u: &Word, v: &Word) -> Result<Word, WordError> {
    same_rank(u, v)?;
    Ok(u.concat(v))
}

pub fn inv(u: &Word) -> Word {
    u.inverse()
}

/// `y^-1 x y`.
pub fn conj(x: &Word, y: &Word) -> Result<Word, WordError> {
    same_rank(x, y)?;
    Ok(x.conj_by(y))
}

/// `x^-1 y^-1 x y`.
pub fn comm(x: &Word, y: &Word) -> Result<Word, WordError> {
    same_rank(x, y)?;
    Ok(x.comm_with(y))
}

pub fn bar(u: &Word) -> Word {
    u.bar()
}

fn check_base(w: &Word) -> Result<(), WordError> {
    if !w.is_unbarred() {
        return Err(WordError::Barred);
    }
    if w.is_empty() {
        return Err(WordError::Empty);
    }
    Ok(())
}

/// `[w, ~w]`.
pub fn box_word(w: &Word) -> Result<Word, WordError> {
    check_base(w)?;
    Ok(w.comm_with(&w.bar()))
}

/// `[w, ~w^-1]`.
pub fn box_inv_word(w: &Word) -> Result<Word, WordError> {
    check_base(w)?;
    Ok(w.comm_with(&w.bar().inverse()))
}

/// Recovers `w` from a word of the form `[w, ~w]` (or `[w, ~w^-1]`).
///
/// Neither form cancels, so `w^-1` is the first quarter of the relator.
pub fn box_base(r: &Word, form: BoxForm) -> Option<Word> {
    if r.is_empty() || !r.len().is_multiple_of(4) {
        return None;
    }
    let w = r.slice(0..r.len() / 4).inverse();
    if !w.is_unbarred() {
        return None;
    }
    let built = match form {
        BoxForm::Box => w.comm_with(&w.bar()),
        BoxForm::BoxInv => w.comm_with(&w.bar().inverse()),
    };
    (built == *r).then_some(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoxForm {
    /// `[w, ~w]`
    Box,
    /// `[w, ~w^-1]`
    BoxInv,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxRelator {
    pub base: Word,
    pub form: BoxForm,
}

impl BoxRelator {
    pub fn new(base: Word, form: BoxForm) -> Result<BoxRelator, WordError> {
        check_base(&base)?;
        Ok(BoxRelator { base, form })
    }

    pub fn word(&self) -> Word {
        match self.form {
            BoxForm::Box => self.base.comm_with(&self.base.bar()),
            BoxForm::BoxInv => self.base.comm_with(&self.base.bar().inverse()),
        }
    }
}

/// All reduced unbarred words of length exactly `len` over `a_1..a_m`, in
/// lexicographic order.
pub fn unbarred_words(m: u32, len: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (1..=m).flat_map(|i| [Letter::gen(i), Letter::gen(i).inverse()]).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for w in &out {
            for &l in &alphabet {
                if w.last() != Some(&l.inverse()) {
                    let mut v: Vec<Letter> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|letters| Word { letters, rank: m }).collect()
}

/// One `[w, ~w^-1]` per reduced unbarred `w` with `1 <= |w| <= n`, keeping
/// the smaller of `w` and `w^-1`.
pub fn box_set(n: usize, m: u32) -> Vec<BoxRelator> {
    let mut out = Vec::new();
    for len in 1..=n {
        for w in unbarred_words(m, len) {
            if w <= w.inverse() {
                out.push(BoxRelator { base: w, form: BoxForm::BoxInv });
            }
        }
    }
    out
}

/// Finds `c` with `source^c == target`, if the two are conjugate.
pub fn find_conjugator(source: &Word, target: &Word) -> Option<Word> {
    if source.rank != target.rank {
        return None;
    }
    let (ps, cs) = source.cyclic_core();
    let (pt, ct) = target.cyclic_core();
    if cs.len() != ct.len() {
        return None;
    }
    // source = ps cs ps^-1, target = pt ct pt^-1, and ct = cs^r where cs = r s.
    let n = cs.len();
    for r in 0..n.max(1) {
        let rotated_matches = (0..n).all(|i| cs.letters[(i + r) % n] == ct.letters[i]);
        if rotated_matches {
            let c = ps.concat(&cs.slice(0..r)).concat(&pt.inverse());
            debug_assert_eq!(source.conj_by(&c), *target);
            return Some(c);
        }
    }
    None
}

/// Generator names used to read and print words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
    aliases: bool,
}

const SHORT_NAMES: [&str; 3] = ["a", "b", "c"];

impl Alphabet {
    /// `a, b, c` up to rank 3, `x1..xm` beyond. The `x` names are accepted
    /// as aliases in the short case.
    pub fn standard(m: u32) -> Alphabet {
        let names = if m <= 3 {
            SHORT_NAMES[..m as usize].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=m).map(|i| format!("x{i}")).collect()
        };
        Alphabet { names, aliases: m <= 3 }
    }

    pub fn new(names: Vec<String>) -> Result<Alphabet, WordError> {
        for (i, n) in names.iter().enumerate() {
            let mut chars = n.chars();
            let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || names[..i].contains(n) {
                return Err(WordError::BadName(n.clone()));
            }
        }
        let aliases = names.len() <= SHORT_NAMES.len() && names.iter().zip(SHORT_NAMES).all(|(n, s)| n == s);
        Ok(Alphabet { names, aliases })
    }

    pub fn rank(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: u32) -> &str {
        &self.names[(index - 1) as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32 + 1)
    }

    pub fn format_letter(&self, l: Letter) -> String {
        format!(
            "{}{}{}",
            if l.barred() { "~" } else { "" },
            self.name(l.index()),
            if l.is_inverse() { "^-1" } else { "" }
        )
    }

    /// Space-separated letters; the empty word prints as `1`.
    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters.iter().map(|&l| self.format_letter(l)).collect::<Vec<_>>().join(" ")
    }

    /// Like [`Alphabet::format`], but prints a commutator `x^-1 y^-1 x y`
    /// as `[x,y]` when the word has that shape.
    pub fn format_relator(&self, w: &Word) -> String {
        match split_commutator(w) {
            Some((x, y)) => format!("[{},{}]", self.format(&x), self.format(&y)),
            None => self.format(w),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Word, WordError> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, alphabet: self };
        let w = p.product()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(w)
    }
}

/// Splits a reduced word as `[x, y] = x^-1 y^-1 x y` with `x` shortest.
pub fn split_commutator(w: &Word) -> Option<(Word, Word)> {
    let n = w.len();
    if n < 4 || !n.is_multiple_of(2) {
        return None;
    }
    let half = n / 2;
    for i in 1..half {
        let x = w.slice(0..i).inverse();
        let y = w.slice(i..half).inverse();
        if x.letters == w.letters[half..half + i] && y.letters == w.letters[half + i..] {
            return Some((x, y));
        }
    }
    None
}

/// Parses a word in the standard alphabet of rank `m`.
pub fn parse_word(s: &str, m: u32) -> Result<Word, WordError> {
    Alphabet::standard(m).parse(s)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> WordError {
        WordError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn rank(&self) -> u32 {
        self.alphabet.rank()
    }

    fn product(&mut self) -> Result<Word, WordError> {
        let mut w = Word::identity(self.rank());
        while let Some(c) = self.peek() {
            if c == b')' || c == b']' || c == b',' {
                break;
            }
            let f = self.factor()?;
            w = w.concat(&f);
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word, WordError> {
        let mut w = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.integer()?;
            w = w.pow(n);
        }
        Ok(w)
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.error("expected an integer exponent"))
    }

    fn expect(&mut self, c: u8) -> Result<(), WordError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn atom(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(self.atom()?.bar())
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.product()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let x = self.product()?;
                self.expect(b',')?;
                let y = self.product()?;
                self.expect(b']')?;
                Ok(x.comm_with(&y))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Word::identity(self.rank()))
            }
            Some(_) => {
                let index = self.name()?;
                Ok(Word { letters: vec![Letter::gen(index)], rank: self.rank() })
            }
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// Longest generator name at the cursor.
    fn name(&mut self) -> Result<u32, WordError> {
        let rest = &self.src[self.pos..];
        let mut best: Option<(usize, u32)> = None;
        for (i, n) in self.alphabet.names.iter().enumerate() {
            if rest.starts_with(n.as_bytes()) && best.is_none_or(|(len, _)| n.len() > len) {
                best = Some((n.len(), i as u32 + 1));
            }
        }
        if best.is_none() && self.alphabet.aliases && rest.first() == Some(&b'x') {
            let digits = rest[1..].iter().take_while(|c| c.is_ascii_digit()).count();
            let index = std::str::from_utf8(&rest[1..1 + digits]).ok().and_then(|s| s.parse().ok());
            if let Some(i) = index.filter(|&i| i >= 1 && i <= self.rank()) {
                best = Some((1 + digits, i));
            }
        }
        let (len, index) = best.ok_or_else(|| self.error("unknown generator"))?;
        self.pos += len;
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, m: u32) -> Word {
        parse_word(s, m).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let a = Letter::gen(1);
        let b = Letter::gen(2);
        assert_eq!(free_reduce(&[a, a.inverse(), b], 2).unwrap(), w("b", 2));
        assert_eq!(free_reduce(&[], 2).unwrap(), Word::identity(2));
        let raw = [a, b, b.inverse(), a.inverse(), a.bar()];
        assert_eq!(free_reduce(&raw, 2).unwrap(), w("~a", 2));
        assert!(matches!(free_reduce(&[Letter::gen(3)], 2), Err(WordError::IndexOutOfRange { index: 3, rank: 2 })));
    }

    #[test]
    fn group_operations() {
        let a = w("a", 2);
        assert!(comm(&a, &a).unwrap().is_empty());
        assert_eq!(comm(&a, &w("~a", 2)).unwrap(), w("a^-1 ~a^-1 a ~a", 2));
        assert_eq!(conj(&a, &w("b", 2)).unwrap(), w("b^-1 a b", 2));
        assert_eq!(mul(&a, &w("a", 3)), Err(WordError::RankMismatch(2, 3)));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(w("a b^-1", 2).bar(), w("~a ~b^-1", 2));
        assert_eq!(w("~a", 2).bar(), w("a", 2));
        assert!(Word::identity(2).bar().is_empty());
    }

    #[test]
    fn box_examples() {
        assert_eq!(box_word(&w("a", 2)).unwrap(), w("a^-1 ~a^-1 a ~a", 2));
        assert_eq!(box_word(&w("ab", 2)).unwrap(), w("b^-1 a^-1 ~b^-1 ~a^-1 a b ~a ~b", 2));
        assert_eq!(box_word(&w("~a", 2)), Err(WordError::Barred));
        let r = box_inv_word(&w("a b^-1", 2)).unwrap();
        assert_eq!(box_base(&r, BoxForm::BoxInv), Some(w("a b^-1", 2)));
        assert_eq!(box_base(&r, BoxForm::Box), None);
    }

    #[test]
    fn box_set_examples() {
        let bases = |n, m| box_set(n, m).into_iter().map(|r| r.base).collect::<Vec<_>>();
        assert_eq!(bases(1, 2), vec![w("a", 2), w("b", 2)]);
        assert_eq!(bases(1, 1), vec![w("a", 1)]);
        // 4 letters give 12 reduced words of length 2, paired by inversion.
        assert_eq!(bases(2, 2).len(), 2 + 6);
        assert!(box_set(2, 2).iter().all(|r| r.form == BoxForm::BoxInv));
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(w("a^-1~a^-1a~a", 2), w("[a,~a]", 2));
        assert_eq!(w("(ab)^2", 2), w("a b a b", 2));
        assert_eq!(w("1", 2), Word::identity(2));
        assert_eq!(w("x2 x1^-1", 3), w("b a^-1", 3));
        let alpha = Alphabet::standard(5);
        let u = alpha.parse("x5 ~x1^-1 x10").err();
        assert!(u.is_some());
        let v = alpha.parse("x5 ~x1^-1 x2").unwrap();
        assert_eq!(alpha.format(&v), "x5 ~x1^-1 x2");
        assert_eq!(Alphabet::standard(2).format_relator(&w("[a,~a]", 2)), "[a,~a]");
    }

    #[test]
    fn conjugator_search() {
        let r = box_word(&w("ab", 2)).unwrap();
        let c = w("b ~a^-1 a", 2);
        let t = r.conj_by(&c);
        let found = find_conjugator(&r, &t).unwrap();
        assert_eq!(r.conj_by(&found), t);
        assert!(find_conjugator(&r, &r.inverse()).is_none());
        assert_eq!(find_conjugator(&Word::identity(2), &Word::identity(2)), Some(Word::identity(2)));
    }
}
