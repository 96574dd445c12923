//! Certificates: explicit products of conjugated base relators that freely
//! reduce to a target word, and their construction for box relators.
//!
//! Certificates are built as a shared DAG of products, conjugations and
//! inversions. Every node stores its freely reduced value, and derivation steps
//! check that value against the expected word as they are assembled. The
//! flat factor list is only produced by streaming.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentations::upsilon;
use crate::words::{
    box_base, box_inv_word, box_word, find_conjugator, push_reduce, Alphabet, BoxForm, BoxRelator, Letter, Word,
    WordError,
};

#[derive(Debug, Error)]
pub enum CertError {
    #[error("factor {index}: relator {relator} is not in the basis")]
    Basis { index: u64, relator: String },
    #[error("factor {index}: rank {found} does not match the basis rank {expected}")]
    Rank { index: u64, found: u32, expected: u32 },
    #[error("exponent {0} is not +1 or -1")]
    Exponent(i64),
    #[error("|u| + |v| = {len} exceeds the budget {n}")]
    Budget { len: usize, n: usize },
    #[error("identity check failed: {0}")]
    Identity(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The relator set a certificate draws on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `[u, ~u]` for `u` in the canonical schedule of rank `rank`.
    Upsilon { rank: u32 },
    /// `[u, ~u^-1]` for every reduced unbarred `u` with `1 <= |u| <= n`.
    BoxN { n: usize, rank: u32 },
}

impl Basis {
    pub fn rank(self) -> u32 {
        match self {
            Basis::Upsilon { rank } | Basis::BoxN { rank, .. } => rank,
        }
    }
}

/// Membership test for basis relators.
pub struct BasisChecker {
    basis: Basis,
    schedule: HashSet<Word>,
}

impl BasisChecker {
    pub fn new(basis: Basis) -> BasisChecker {
        let schedule = match basis {
            Basis::Upsilon { rank } => upsilon(rank.max(1)).map(|s| s.words.into_iter().collect()).unwrap_or_default(),
            Basis::BoxN { .. } => HashSet::new(),
        };
        BasisChecker { basis, schedule }
    }

    pub fn contains(&self, relator: &Word) -> bool {
        if relator.rank() != self.basis.rank() {
            return false;
        }
        match self.basis {
            Basis::Upsilon { .. } => box_base(relator, BoxForm::Box).is_some_and(|u| self.schedule.contains(&u)),
            Basis::BoxN { n, .. } => box_base(relator, BoxForm::BoxInv).is_some_and(|u| u.len() <= n),
        }
    }
}

/// `conjugator^-1 * relator^exponent * conjugator`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjugatedRelator {
    pub relator: Word,
    pub exponent: i8,
    pub conjugator: Word,
}

impl ConjugatedRelator {
    pub fn value(&self) -> Word {
        let r = if self.exponent < 0 { self.relator.inverse() } else { self.relator.clone() };
        r.conj_by(&self.conjugator)
    }
}

enum NodeKind {
    Atom(Word),
    Product(Vec<Arc<Node>>),
    Conj(Arc<Node>, Word),
    Inverse(Arc<Node>),
}

/// A derivation node: its reduced value and how many factors it flattens to.
pub struct Node {
    kind: NodeKind,
    value: Word,
    factors: u64,
}

impl Node {
    pub fn value(&self) -> &Word {
        &self.value
    }

    pub fn factor_count(&self) -> u64 {
        self.factors
    }
}

fn identity_node(rank: u32) -> Arc<Node> {
    Arc::new(Node { kind: NodeKind::Product(Vec::new()), value: Word::identity(rank), factors: 0 })
}

fn atom(relator: Word) -> Arc<Node> {
    Arc::new(Node { value: relator.clone(), kind: NodeKind::Atom(relator), factors: 1 })
}

fn product(children: Vec<Arc<Node>>) -> Arc<Node> {
    let rank = children.first().map_or(0, |c| c.value.rank());
    let mut kept: Vec<Arc<Node>> = children.into_iter().filter(|c| c.factors > 0).collect();
    if kept.len() == 1 {
        return kept.pop().unwrap();
    }
    if kept.is_empty() {
        return identity_node(rank);
    }
    let mut value = Word::identity(rank);
    for c in &kept {
        value = value.concat(&c.value);
    }
    let factors = kept.iter().map(|c| c.factors).sum();
    Arc::new(Node { kind: NodeKind::Product(kept), value, factors })
}

fn conj(n: Arc<Node>, w: &Word) -> Arc<Node> {
    if n.factors == 0 || w.is_empty() {
        return n;
    }
    Arc::new(Node { value: n.value.conj_by(w), factors: n.factors, kind: NodeKind::Conj(n, w.clone()) })
}

fn inverse(n: Arc<Node>) -> Arc<Node> {
    if n.factors == 0 {
        return n;
    }
    if let NodeKind::Inverse(inner) = &n.kind {
        return inner.clone();
    }
    Arc::new(Node { value: n.value.inverse(), factors: n.factors, kind: NodeKind::Inverse(n) })
}

/// Eager check of a derivation step; a mismatch is a defect in the derivation.
fn expect(n: Arc<Node>, want: &Word, step: &str) -> Arc<Node> {
    assert!(n.value == *want, "derivation defect in {step}: got {} but expected {}", n.value, want);
    n
}

/// Expresses `target` as a conjugate of `base` or its inverse.
fn conjugate_of(target: &Word, base: &Arc<Node>) -> Arc<Node> {
    if target.is_empty() {
        return identity_node(target.rank());
    }
    if let Some(c) = find_conjugator(&base.value, target) {
        return conj(base.clone(), &c);
    }
    let inv = inverse(base.clone());
    let c = find_conjugator(&inv.value, target)
        .unwrap_or_else(|| panic!("derivation defect: {target} is not conjugate to {}^±1", base.value));
    conj(inv, &c)
}

/// A certificate for `target` over `basis`.
#[derive(Clone)]
pub struct Certificate {
    target: Word,
    basis: Basis,
    root: Arc<Node>,
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Certificate")
            .field("target", &self.target)
            .field("basis", &self.basis)
            .field("factors", &self.root.factors)
            .finish()
    }
}

impl Certificate {
    /// A flat certificate. The factors are not checked here; see
    /// [`verify_certificate`].
    pub fn from_factors(target: Word, basis: Basis, factors: Vec<ConjugatedRelator>) -> Certificate {
        let rank = target.rank();
        let children = factors
            .into_iter()
            .map(|f| {
                let a = atom(f.relator);
                conj(if f.exponent < 0 { inverse(a) } else { a }, &f.conjugator)
            })
            .collect::<Vec<_>>();
        let root = if children.is_empty() { identity_node(rank) } else { product(children) };
        Certificate { target, basis, root }
    }

    pub fn target(&self) -> &Word {
        &self.target
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn len(&self) -> u64 {
        self.root.factors
    }

    pub fn is_empty(&self) -> bool {
        self.root.factors == 0
    }

    /// The free reduction of the factor product, as cached at construction.
    pub fn value(&self) -> &Word {
        &self.root.value
    }

    /// Streams the flat factor list.
    pub fn factors(&self) -> Factors {
        Factors { stack: vec![(self.root.clone(), Arc::new(Word::identity(self.target.rank())), false)] }
    }

    /// Streams the certificate as JSON.
    pub fn write_json<W: Write>(&self, out: &mut W) -> Result<(), CertError> {
        let alpha = Alphabet::standard(self.target.rank());
        let basis = match self.basis {
            Basis::Upsilon { rank } => format!("{{\"mode\":\"upsilon\",\"rank\":{rank}}}"),
            Basis::BoxN { n, rank } => format!("{{\"mode\":\"boxn\",\"n\":{n},\"rank\":{rank}}}"),
        };
        write!(out, "{{\"target\":{},\"basis\":{basis},\"factors\":[", json_word(&alpha, &self.target, false))?;
        for (i, f) in self.factors().enumerate() {
            write!(
                out,
                "{}\n{{\"relator\":{},\"exp\":{},\"conj\":{}}}",
                if i == 0 { "" } else { "," },
                json_word(&alpha, &f.relator, true),
                f.exponent,
                json_word(&alpha, &f.conjugator, false)
            )?;
        }
        writeln!(out, "\n]}}")?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }

    pub fn from_json(text: &str) -> Result<Certificate, CertError> {
        Certificate::from_json_value(serde_json::from_str(text)?)
    }

    pub fn read_json<R: io::Read>(reader: R) -> Result<Certificate, CertError> {
        Certificate::from_json_value(serde_json::from_reader(io::BufReader::new(reader))?)
    }

    fn from_json_value(raw: CertJson) -> Result<Certificate, CertError> {
        let basis = match raw.basis {
            BasisJson::Upsilon { rank } => Basis::Upsilon { rank },
            BasisJson::Boxn { n, rank } => Basis::BoxN { n, rank },
        };
        let alpha = Alphabet::standard(basis.rank());
        let target = alpha.parse(&raw.target)?;
        let factors = raw
            .factors
            .iter()
            .map(|f| {
                if f.exp != 1 && f.exp != -1 {
                    return Err(CertError::Exponent(f.exp));
                }
                Ok(ConjugatedRelator {
                    relator: alpha.parse(&f.relator)?,
                    exponent: f.exp as i8,
                    conjugator: alpha.parse(&f.conj)?,
                })
            })
            .collect::<Result<Vec<_>, CertError>>()?;
        Ok(Certificate::from_factors(target, basis, factors))
    }
}

fn json_word(alpha: &Alphabet, w: &Word, relator: bool) -> String {
    let text = if w.is_empty() {
        String::new()
    } else if relator {
        alpha.format_relator(w)
    } else {
        alpha.format(w)
    };
    serde_json::to_string(&text).expect("string")
}

#[derive(Serialize, Deserialize)]
struct CertJson {
    target: String,
    basis: BasisJson,
    factors: Vec<FactorJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum BasisJson {
    Upsilon { rank: u32 },
    Boxn { n: usize, rank: u32 },
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    relator: String,
    exp: i64,
    conj: String,
}

/// Depth-first flattening. Each stack entry carries the accumulated
/// conjugator and whether the subtree is inverted.
pub struct Factors {
    stack: Vec<(Arc<Node>, Arc<Word>, bool)>,
}

impl Iterator for Factors {
    type Item = ConjugatedRelator;

    fn next(&mut self) -> Option<ConjugatedRelator> {
        while let Some((node, suffix, inverted)) = self.stack.pop() {
            match &node.kind {
                NodeKind::Atom(r) => {
                    return Some(ConjugatedRelator {
                        relator: r.clone(),
                        exponent: if inverted { -1 } else { 1 },
                        conjugator: (*suffix).clone(),
                    })
                }
                NodeKind::Product(children) => {
                    if inverted {
                        self.stack.extend(children.iter().map(|c| (c.clone(), suffix.clone(), true)));
                    } else {
                        self.stack.extend(children.iter().rev().map(|c| (c.clone(), suffix.clone(), false)));
                    }
                }
                NodeKind::Conj(child, w) => {
                    self.stack.push((child.clone(), Arc::new(w.concat(&suffix)), inverted));
                }
                NodeKind::Inverse(child) => self.stack.push((child.clone(), suffix, !inverted)),
            }
        }
        None
    }
}

/// Checks a factor stream against `target` by streaming free reduction.
pub fn verify_factors(
    target: &Word,
    basis: Basis,
    factors: impl IntoIterator<Item = ConjugatedRelator>,
) -> Result<bool, CertError> {
    let checker = BasisChecker::new(basis);
    let expected = basis.rank();
    let mut stack: Vec<Letter> = Vec::new();
    for (i, f) in factors.into_iter().enumerate() {
        let index = i as u64;
        for w in [&f.relator, &f.conjugator] {
            if w.rank() != expected {
                return Err(CertError::Rank { index, found: w.rank(), expected });
            }
        }
        if !checker.contains(&f.relator) {
            return Err(CertError::Basis { index, relator: f.relator.to_string() });
        }
        for &l in f.conjugator.letters().iter().rev() {
            push_reduce(&mut stack, l.inverse());
        }
        if f.exponent < 0 {
            for &l in f.relator.letters().iter().rev() {
                push_reduce(&mut stack, l.inverse());
            }
        } else {
            for &l in f.relator.letters() {
                push_reduce(&mut stack, l);
            }
        }
        for &l in f.conjugator.letters() {
            push_reduce(&mut stack, l);
        }
    }
    Ok(stack == target.letters())
}

/// True iff the factor product freely reduces to the target.
///
/// Walks the derivation directly: a conjugated subtree `x^w` is emitted as
/// `w^-1 x w`, which freely equals the flat factors it expands to, without
/// materializing each accumulated conjugator. Factor indices in errors
/// follow the order of [`Certificate::factors`].
pub fn verify_certificate(c: &Certificate) -> Result<bool, CertError> {
    let expected = c.basis.rank();
    if c.target.rank() != expected {
        return Err(CertError::Rank { index: 0, found: c.target.rank(), expected });
    }
    enum Task<'a> {
        Node(&'a Node, bool),
        Letters(&'a [Letter], bool),
    }
    let checker = BasisChecker::new(c.basis);
    let mut checked: HashSet<*const Node> = HashSet::new();
    let mut stack: Vec<Letter> = Vec::new();
    let mut tasks = vec![Task::Node(&c.root, false)];
    let mut index = 0u64;
    while let Some(task) = tasks.pop() {
        match task {
            Task::Letters(ls, false) => ls.iter().for_each(|&l| push_reduce(&mut stack, l)),
            Task::Letters(ls, true) => ls.iter().rev().for_each(|&l| push_reduce(&mut stack, l.inverse())),
            Task::Node(node, inverted) => match &node.kind {
                NodeKind::Atom(r) => {
                    if checked.insert(node as *const Node) {
                        if r.rank() != expected {
                            return Err(CertError::Rank { index, found: r.rank(), expected });
                        }
                        if !checker.contains(r) {
                            return Err(CertError::Basis { index, relator: r.to_string() });
                        }
                    }
                    tasks.push(Task::Letters(r.letters(), inverted));
                    index += 1;
                }
                NodeKind::Product(children) => {
                    if inverted {
                        tasks.extend(children.iter().map(|ch| Task::Node(ch, true)));
                    } else {
                        tasks.extend(children.iter().rev().map(|ch| Task::Node(ch, false)));
                    }
                }
                NodeKind::Conj(child, w) => {
                    if w.rank() != expected {
                        return Err(CertError::Rank { index, found: w.rank(), expected });
                    }
                    tasks.push(Task::Letters(w.letters(), false));
                    tasks.push(Task::Node(child, inverted));
                    tasks.push(Task::Letters(w.letters(), true));
                }
                NodeKind::Inverse(child) => tasks.push(Task::Node(child, !inverted)),
            },
        }
    }
    Ok(stack == c.target.letters())
}

/// Index of the first factor where two certificates differ.
pub fn first_difference(a: &Certificate, b: &Certificate) -> Option<u64> {
    let mut fa = a.factors();
    let mut fb = b.factors();
    let mut i = 0u64;
    loop {
        match (fa.next(), fb.next()) {
            (None, None) => return None,
            (x, y) if x != y => return Some(i),
            _ => i += 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    Eq1,
    Eq2,
}

/// An instantiated commutator identity: `lhs` equals the product of
/// `rhs_factors` in the free group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityInstance {
    pub lhs: Word,
    pub rhs_factors: Vec<Word>,
    pub template: Template,
    pub parameters: Vec<Word>,
}

impl IdentityInstance {
    pub fn holds(&self) -> bool {
        let mut acc = Word::identity(self.lhs.rank());
        for f in &self.rhs_factors {
            acc = acc.concat(f);
        }
        acc == self.lhs
    }
}

fn check_params(ws: &[&Word]) -> Result<(), CertError> {
    let rank = ws[0].rank();
    for w in ws {
        if w.rank() != rank {
            return Err(WordError::RankMismatch(w.rank(), rank).into());
        }
        if !w.is_unbarred() {
            return Err(WordError::Barred.into());
        }
        if w.is_empty() {
            return Err(WordError::Empty.into());
        }
    }
    Ok(())
}

fn checked(inst: IdentityInstance) -> Result<IdentityInstance, CertError> {
    if inst.holds() {
        Ok(inst)
    } else {
        Err(CertError::Identity(format!("{:?} with parameters {:?}", inst.template, inst.parameters)))
    }
}

/// `[b e a, ~b ~e ~a]` as four factors:
/// `[a,~a]`, `([~a^-1,e][a^-1,~e]^-1)^{a~a}`,
/// `([~a^-1,b]^{e~e^-1}[~b,a^-1])^{a~e~a}`, `[(~b~e)^-1, be]^{a~b~e~a}`.
pub fn eq1_instance(alpha: &Word, eps: &Word, beta: &Word) -> Result<IdentityInstance, CertError> {
    check_params(&[alpha, eps, beta])?;
    let (a, e, b) = (alpha, eps, beta);
    let (ab, eb, bb) = (a.bar(), e.bar(), b.bar());
    let f1 = a.comm_with(&ab);
    let f2 = (ab.inverse().comm_with(e)).concat(&a.inverse().comm_with(&eb).inverse()).conj_by(&a.concat(&ab));
    let f3 = ab
        .inverse()
        .comm_with(b)
        .conj_by(&e.concat(&eb.inverse()))
        .concat(&bb.comm_with(&a.inverse()))
        .conj_by(&a.concat(&eb).concat(&ab));
    let be = b.concat(e);
    let f4 = bb.concat(&eb).inverse().comm_with(&be).conj_by(&a.concat(&bb).concat(&eb).concat(&ab));
    let w = be.concat(a);
    checked(IdentityInstance {
        lhs: w.comm_with(&w.bar()),
        rhs_factors: vec![f1, f2, f3, f4],
        template: Template::Eq1,
        parameters: vec![a.clone(), e.clone(), b.clone()],
    })
}

/// `[b a, ~b ~a]` as `[a,~a]`, `([~a^-1,b][~b,a^-1])^{a~a}`, `[~b^-1,b]^{a~b~a}`.
pub fn eq2_instance(alpha: &Word, beta: &Word) -> Result<IdentityInstance, CertError> {
    check_params(&[alpha, beta])?;
    let (a, b) = (alpha, beta);
    let (ab, bb) = (a.bar(), b.bar());
    let f1 = a.comm_with(&ab);
    let f2 = ab.inverse().comm_with(b).concat(&bb.comm_with(&a.inverse())).conj_by(&a.concat(&ab));
    let f3 = bb.inverse().comm_with(b).conj_by(&a.concat(&bb).concat(&ab));
    let w = b.concat(a);
    checked(IdentityInstance {
        lhs: w.comm_with(&w.bar()),
        rhs_factors: vec![f1, f2, f3],
        template: Template::Eq2,
        parameters: vec![a.clone(), b.clone()],
    })
}

/// `[~u^-1, v][~v, u^-1]`.
pub fn star_word(u: &Word, v: &Word) -> Word {
    u.bar().inverse().comm_with(v).concat(&v.bar().comm_with(&u.inverse()))
}

/// The star word from the second identity solved for its middle factor:
/// `S = ([u,~u]^-1 [vu,~v~u] A^-1)^{(u~u)^-1}` with `A = [~v^-1,v]^{u~v~u}`.
fn star_node(u: &Word, v: &Word, bx: &mut dyn FnMut(&Word) -> Arc<Node>) -> Arc<Node> {
    let (ub, vb) = (u.bar(), v.bar());
    let bu = bx(u);
    let bvu = bx(&v.concat(u));
    let bv = bx(v);
    let a3 = conjugate_of(&vb.inverse().comm_with(v).conj_by(&u.concat(&vb).concat(&ub)), &bv);
    let s = conj(product(vec![inverse(bu), bvu, inverse(a3)]), &u.concat(&ub).inverse());
    expect(s, &star_word(u, v), "star")
}

/// A certificate for the star word over `[w, ~w^-1]`, `|w| <= n`.
pub fn star_certificate(u: &Word, v: &Word, n: usize) -> Result<Certificate, CertError> {
    check_params(&[u, v])?;
    if u.len() + v.len() > n {
        return Err(CertError::Budget { len: u.len() + v.len(), n });
    }
    let mut bx = |w: &Word| box_via_box_inv(w);
    let root = star_node(u, v, &mut bx);
    Ok(Certificate { target: star_word(u, v), basis: Basis::BoxN { n, rank: u.rank() }, root })
}

/// `[w,~w] = ([w,~w^-1]^{~w})^-1`.
fn box_via_box_inv(w: &Word) -> Arc<Node> {
    if w.is_empty() {
        return identity_node(w.rank());
    }
    let r = box_inv_word(w).expect("unbarred nonempty");
    let n = inverse(conj(atom(r), &w.bar()));
    expect(n, &box_word(w).unwrap(), "box from box-inverse")
}

/// How a box relator is realized from its canonical representative:
/// `relator = (canonical^exponent)^conjugator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjustment {
    pub exponent: i8,
    pub conjugator: Word,
}

/// Canonical form: `[w, ~w^-1]` with `w` the smaller of `w`, `w^-1`.
pub fn canonicalize_box(r: &BoxRelator) -> (BoxRelator, Adjustment) {
    let inv = r.base.inverse();
    let base = if r.base <= inv { r.base.clone() } else { inv };
    let canonical = BoxRelator { base, form: BoxForm::BoxInv };
    let (target, source) = (r.word(), canonical.word());
    let adj = find_conjugator(&source, &target)
        .map(|c| Adjustment { exponent: 1, conjugator: c })
        .or_else(|| find_conjugator(&source.inverse(), &target).map(|c| Adjustment { exponent: -1, conjugator: c }))
        .expect("box relators of w and w^-1 are conjugate up to inversion");
    let src = if adj.exponent < 0 { source.inverse() } else { source };
    assert_eq!(src.conj_by(&adj.conjugator), target);
    (canonical, adj)
}

/// Derives box certificates over the canonical schedule of a fixed rank,
/// sharing sub-derivations through a concurrent memo.
pub struct Deriver {
    rank: u32,
    schedule: HashSet<Word>,
    memo: DashMap<Word, Arc<Node>>,
}

impl Deriver {
    pub fn new(rank: u32) -> Deriver {
        let schedule = upsilon(rank.max(1)).expect("rank >= 1").words.into_iter().collect();
        Deriver { rank, schedule, memo: DashMap::new() }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Number of memoized box derivations.
    pub fn cached(&self) -> usize {
        self.memo.len()
    }

    /// A certificate for `[w, ~w]` over the schedule.
    pub fn derive_box(&self, w: &Word) -> Result<Certificate, CertError> {
        if w.rank() != self.rank {
            return Err(WordError::RankMismatch(w.rank(), self.rank).into());
        }
        let target = box_word(w)?;
        let root = self.box_node(w, &mut Vec::new());
        Ok(Certificate { target, basis: Basis::Upsilon { rank: self.rank }, root })
    }

    /// A certificate for `[b e a, ~b ~e ~a]` assembled by inverting `e`,
    /// from the box of `b e^-1 a` and shorter boxes.
    pub fn inversion_certificate(&self, beta: &Word, eps: &Word, alpha: &Word) -> Result<Certificate, CertError> {
        check_params(&[beta, eps, alpha])?;
        if beta.rank() != self.rank {
            return Err(WordError::RankMismatch(beta.rank(), self.rank).into());
        }
        let target = box_word(&beta.concat(eps).concat(alpha))?;
        let root = self.inversion(beta, eps, alpha, &mut Vec::new());
        Ok(Certificate { target, basis: Basis::Upsilon { rank: self.rank }, root })
    }

    fn box_node(&self, w: &Word, path: &mut Vec<Word>) -> Arc<Node> {
        if let Some(n) = self.memo.get(w) {
            return n.clone();
        }
        assert!(!path.contains(w), "derivation cycle at {w}");
        path.push(w.clone());
        let n = stacker::maybe_grow(256 * 1024, 16 * 1024 * 1024, || self.build(w, path));
        path.pop();
        let n = expect(n, &if w.is_empty() { w.clone() } else { box_word(w).unwrap() }, "box");
        self.memo.entry(w.clone()).or_insert(n).clone()
    }

    fn build(&self, w: &Word, path: &mut Vec<Word>) -> Arc<Node> {
        if w.is_empty() {
            return identity_node(self.rank);
        }
        if self.schedule.contains(w) {
            return atom(box_word(w).unwrap());
        }
        let inv = w.inverse();
        if self.schedule.contains(&inv) {
            let base = atom(box_word(&inv).unwrap());
            return conjugate_of(&box_word(w).unwrap(), &base);
        }
        let l = w.letters();
        if l.len() == 2 && l[0] == l[1] {
            return self.square(&w.slice(0..1), path);
        }
        assert!(l.len() >= 3, "short word {w} outside the schedule");
        let (b0, w0, a0) = (l[0], &l[1..l.len() - 1], l[l.len() - 1]);
        let n0 = w0.len();
        let (p, k) = choose_move(b0, w0, a0);
        let beta = w.slice(0..1 + p);
        let eps = w.slice(1 + p..1 + p + k);
        let alpha = w.slice(1 + p + k..n0 + 2);
        self.inversion(&beta, &eps, &alpha, path)
    }

    /// `[xx, ~x~x]` from the second identity with both parameters `x`.
    fn square(&self, x: &Word, path: &mut Vec<Word>) -> Arc<Node> {
        let bx = self.box_node(x, path);
        let xb = x.bar();
        let s1 = conjugate_of(&xb.inverse().comm_with(x), &bx);
        let s2 = conjugate_of(&xb.comm_with(&x.inverse()), &bx);
        let f3 = conjugate_of(&xb.inverse().comm_with(x).conj_by(&x.concat(&xb).concat(&xb)), &bx);
        let n = product(vec![bx, conj(product(vec![s1, s2]), &x.concat(&xb)), f3]);
        let xx = x.concat(x);
        expect(n, &box_word(&xx).unwrap(), "square")
    }

    fn inversion(&self, beta: &Word, eps: &Word, alpha: &Word, path: &mut Vec<Word>) -> Arc<Node> {
        let (a, e, b) = (alpha, eps, beta);
        let (ab, eb, bb) = (a.bar(), e.bar(), b.bar());
        let ei = e.inverse();
        let aab = a.concat(&ab);
        let mut bx = |w: &Word| self.box_node(w, path);

        let a1 = bx(a);
        let a2 = conj(star_node(a, e, &mut bx), &aab);
        let a2i = conj(star_node(a, &ei, &mut bx), &aab);
        let sab = star_node(a, b, &mut bx);
        let be = b.concat(e);
        let bei = b.concat(&ei);
        let a4 = conjugate_of(
            &bb.concat(&eb).inverse().comm_with(&be).conj_by(&a.concat(&bb).concat(&eb).concat(&ab)),
            &bx(&be),
        );
        let a4i = conjugate_of(
            &bb.concat(&eb.inverse())
                .inverse()
                .comm_with(&bei)
                .conj_by(&a.concat(&bb).concat(&eb.inverse()).concat(&ab)),
            &bx(&bei),
        );
        let c = conjugate_of(&eb.comm_with(&ei), &bx(e));
        let t_inv = bx(&bei.concat(a));

        // Third factor of the first identity, for e^-1 in place of e.
        let x = ab.inverse().comm_with(b);
        let gi = a.concat(&eb.inverse()).concat(&ab);
        let t3i = conj(product(vec![inverse(a2i), inverse(a1.clone()), t_inv, inverse(a4i)]), &gi.inverse());
        let yi = ei.concat(&eb);
        let t3i = expect(t3i, &x.conj_by(&yi).concat(&bb.comm_with(&a.inverse())), "third factor");

        // x^y x^-1 with y = e ~e^-1, through the commutator [e^-1 ~e, x^-1].
        let xi = x.inverse();
        let yi_inv = yi.inverse();
        let g = product(vec![
            conj(product(vec![c.clone(), conj(inverse(c), &xi)]), &yi_inv),
            inverse(conj(product(vec![t3i, inverse(sab.clone())]), &yi_inv)),
        ]);
        let y = e.concat(&eb.inverse());
        let g = expect(g, &x.conj_by(&y).concat(&xi), "conjugation move");

        let ga = a.concat(&eb).concat(&ab);
        let n = product(vec![a1, a2, conj(product(vec![g, sab]), &ga), a4]);
        expect(n, &box_word(&be.concat(a)).unwrap(), "inversion")
    }
}

/// Picks the subword `w0[p..p+k]` to invert in `b0 w0 a0`.
///
/// In order of priority: bring an end letter next to a matching interior
/// letter so it cancels, sort adjacent letters by index, make letters
/// positive, split squares, and finally invert the whole interior, which
/// lands on the inverse of a schedule word.
fn choose_move(b0: Letter, w0: &[Letter], a0: Letter) -> (usize, usize) {
    let n = w0.len();
    if let Some(p) = w0.iter().rposition(|l| l.index() == a0.index()) {
        return if p == n - 1 { (p, 1) } else { (p, n - p) };
    }
    if let Some(p) = w0.iter().position(|l| l.index() == b0.index()) {
        return if p == 0 { (0, 1) } else { (0, p + 1) };
    }
    if let Some(p) = (0..n.saturating_sub(1)).find(|&p| w0[p].index() > w0[p + 1].index()) {
        return (p, 2);
    }
    if let Some(p) = w0.iter().position(|l| l.is_inverse()) {
        return (p, 1);
    }
    if let Some(p) = (0..n.saturating_sub(1)).find(|&p| w0[p] == w0[p + 1]) {
        return (p + 1, 1);
    }
    (0, n)
}

/// A certificate for `[w, ~w]` over the schedule of rank `m`.
pub fn derive_box(w: &Word, m: u32) -> Result<Certificate, CertError> {
    let w = w.with_rank(m)?;
    Deriver::new(m).derive_box(&w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// `xy -> yx`: invert the pair, then each letter.
    Swap,
    /// `x^-1 -> x`.
    SignFlip,
    /// `xx -> x x^-1`.
    SquareCancel,
    /// Deletes an adjacent pair `x x^-1`.
    FreeCancel,
}

/// One elementary step on a letter sequence. The inversions are applied in
/// order, each replacing `letters[start..start+len]` by its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    pub position: usize,
    pub inversions: Vec<(usize, usize)>,
}

impl Move {
    pub fn apply(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out = letters.to_vec();
        if self.kind == MoveKind::FreeCancel {
            assert_eq!(out[self.position], out[self.position + 1].inverse(), "no cancelling pair");
            out.drain(self.position..self.position + 2);
            return out;
        }
        for &(start, len) in &self.inversions {
            let block: Vec<Letter> = out[start..start + len].iter().rev().map(|l| l.inverse()).collect();
            out[start..start + len].copy_from_slice(&block);
        }
        out
    }
}

pub type MoveTrace = Vec<Move>;

/// Sorts, positivizes and removes squares, recording every step.
pub fn monomialize(w0: &Word) -> Result<(Word, MoveTrace), CertError> {
    if !w0.is_unbarred() {
        return Err(WordError::Barred.into());
    }
    let mut cur: Vec<Letter> = w0.letters().to_vec();
    let mut trace = Vec::new();
    loop {
        let n = cur.len();
        let pairs = 0..n.saturating_sub(1);
        let mv = if let Some(p) = pairs.clone().find(|&p| cur[p] == cur[p + 1].inverse()) {
            Move { kind: MoveKind::FreeCancel, position: p, inversions: Vec::new() }
        } else if let Some(p) = pairs.clone().find(|&p| cur[p].index() > cur[p + 1].index()) {
            Move { kind: MoveKind::Swap, position: p, inversions: vec![(p, 2), (p, 1), (p + 1, 1)] }
        } else if let Some(p) = cur.iter().position(|l| l.is_inverse()) {
            Move { kind: MoveKind::SignFlip, position: p, inversions: vec![(p, 1)] }
        } else if let Some(p) = pairs.clone().find(|&p| cur[p] == cur[p + 1]) {
            Move { kind: MoveKind::SquareCancel, position: p, inversions: vec![(p + 1, 1)] }
        } else {
            break;
        };
        cur = mv.apply(&cur);
        trace.push(mv);
    }
    Ok((Word::from_letters(&cur, w0.rank())?, trace))
}

/// Applies a trace to `w0`.
pub fn replay(w0: &Word, trace: &[Move]) -> Result<Word, WordError> {
    let mut cur = w0.letters().to_vec();
    for mv in trace {
        cur = mv.apply(&cur);
    }
    Word::from_letters(&cur, w0.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str, m: u32) -> Word {
        parse_word(s, m).unwrap()
    }

    #[test]
    fn verify_examples() {
        let empty = Certificate::from_factors(Word::identity(2), Basis::Upsilon { rank: 2 }, vec![]);
        assert!(verify_certificate(&empty).unwrap());
        let f = |c: &str| ConjugatedRelator { relator: w("[a,~a]", 2), exponent: 1, conjugator: w(c, 2) };
        let target = w("b^-1 [a,~a] b", 2);
        let good = Certificate::from_factors(target.clone(), Basis::Upsilon { rank: 2 }, vec![f("b")]);
        assert!(verify_certificate(&good).unwrap());
        let bad = Certificate::from_factors(target, Basis::Upsilon { rank: 2 }, vec![f("b^-1")]);
        assert!(!verify_certificate(&bad).unwrap());
        let foreign = ConjugatedRelator { relator: w("[a b a b,~a ~b ~a ~b]", 2), exponent: 1, conjugator: w("1", 2) };
        let c = Certificate::from_factors(Word::identity(2), Basis::Upsilon { rank: 2 }, vec![foreign]);
        assert!(matches!(verify_certificate(&c), Err(CertError::Basis { index: 0, .. })));
    }

    #[test]
    fn identity_examples() {
        for (a, e, b) in [("a", "b", "a"), ("a", "b", "c"), ("a", "a", "a")] {
            assert!(eq1_instance(&w(a, 3), &w(e, 3), &w(b, 3)).is_ok());
        }
        for (a, b) in [("a", "b"), ("b", "a"), ("a", "a")] {
            assert!(eq2_instance(&w(a, 2), &w(b, 2)).is_ok());
        }
        assert_eq!(eq2_instance(&w("a", 2), &w("a", 2)).unwrap().lhs, w("[a a,~a ~a]", 2));
    }

    #[test]
    fn star_examples() {
        for (u, v, n, m) in [("a", "b", 2, 2), ("a", "a", 2, 2), ("ab", "a", 3, 2)] {
            let c = star_certificate(&w(u, m), &w(v, m), n).unwrap();
            assert!(verify_certificate(&c).unwrap(), "{u} {v}");
        }
        assert!(matches!(star_certificate(&w("ab", 2), &w("a", 2), 2), Err(CertError::Budget { .. })));
    }

    #[test]
    fn derive_examples() {
        let c = derive_box(&w("a", 2), 2).unwrap();
        let fs: Vec<_> = c.factors().collect();
        assert_eq!(fs, vec![ConjugatedRelator { relator: w("[a,~a]", 2), exponent: 1, conjugator: Word::identity(2) }]);
        assert_eq!(derive_box(&w("ba", 2), 2).unwrap().len(), 1);
        let c = derive_box(&w("abab", 2), 2).unwrap();
        assert!(c.len() > 1);
        assert!(verify_certificate(&c).unwrap());
    }

    #[test]
    fn canonical_boxes() {
        let (c, adj) = canonicalize_box(&BoxRelator::new(w("a", 2), BoxForm::Box).unwrap());
        assert_eq!(c, BoxRelator::new(w("a", 2), BoxForm::BoxInv).unwrap());
        assert_eq!(adj, Adjustment { exponent: -1, conjugator: w("~a", 2) });
        let r = BoxRelator::new(w("a", 2), BoxForm::BoxInv).unwrap();
        assert_eq!(canonicalize_box(&r).0, r);
        assert_eq!(canonicalize_box(&r).1, Adjustment { exponent: 1, conjugator: Word::identity(2) });
        let x = canonicalize_box(&BoxRelator::new(w("a b^-1", 2), BoxForm::Box).unwrap()).0;
        let y = canonicalize_box(&BoxRelator::new(w("b a^-1", 2), BoxForm::Box).unwrap()).0;
        assert_eq!(x, y);
        assert_eq!(x.base, w("a b^-1", 2));
    }

    #[test]
    fn monomialize_examples() {
        let (out, trace) = monomialize(&w("ba", 2)).unwrap();
        assert_eq!(out, w("ab", 2));
        assert_eq!(trace.iter().map(|m| m.kind).collect::<Vec<_>>(), vec![MoveKind::Swap]);
        let (out, trace) = monomialize(&w("a^-1", 2)).unwrap();
        assert_eq!(out, w("a", 2));
        assert_eq!(trace.iter().map(|m| m.kind).collect::<Vec<_>>(), vec![MoveKind::SignFlip]);
        let (out, trace) = monomialize(&w("aab", 2)).unwrap();
        assert_eq!(out, w("b", 2));
        assert_eq!(replay(&w("aab", 2), &trace).unwrap(), out);
    }

    #[test]
    fn json_round_trip() {
        let c = derive_box(&w("abab", 2), 2).unwrap();
        let text = c.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert!(verify_certificate(&back).unwrap());
    }
}
