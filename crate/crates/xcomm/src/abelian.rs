//! Integer matrices, Smith normal form, lattices and abelianization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::presentations::Presentation;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn diagonal(entries: &[BigInt], rows: usize, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += t;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -&*x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

/// `u * a * v == diag(diagonal)` with `u`, `v` unimodular.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (r, c) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let n = r.min(c);
    for t in 0..n {
        loop {
            let Some((pi, pj)) = smallest_entry(&m, t) else {
                return finish(m, u, v);
            };
            m.swap_rows(t, pi);
            u.swap_rows(t, pi);
            m.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let pivot = m[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if !m[(i, t)].is_zero() {
                    let q = -(&m[(i, t)] / &pivot);
                    m.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= m[(i, t)].is_zero();
                }
            }
            for j in t + 1..c {
                if !m[(t, j)].is_zero() {
                    let q = -(&m[(t, j)] / &pivot);
                    m.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= m[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..r).find(|&i| (t + 1..c).any(|j| !m[(i, j)].is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    m.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if m[(t, t)].is_negative() {
            m.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(m, u, v)
}

fn smallest_entry(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let x = &m[(i, j)];
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn finish(m: IntMatrix, u: IntMatrix, v: IntMatrix) -> SnfResult {
    let diagonal = (0..m.rows.min(m.cols)).map(|i| m[(i, i)].clone()).collect();
    SnfResult { diagonal, u, v }
}

/// A sublattice of `Z^dim` kept as an echelon basis with positive pivots.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
}

fn leading(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

impl Lattice {
    pub fn new(dim: usize) -> Lattice {
        Lattice { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows.len(), self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// Adds `v`; returns whether the lattice grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let mut grew = false;
        loop {
            let Some(p) = leading(&v) else {
                return grew;
            };
            match self.rows.binary_search_by_key(&p, |r| leading(r).unwrap()) {
                Err(pos) => {
                    if v[p].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows.insert(pos, v);
                    return true;
                }
                Ok(k) => {
                    let row = &mut self.rows[k];
                    if v[p].is_multiple_of(&row[p]) {
                        let q = &v[p] / &row[p];
                        for (x, y) in v.iter_mut().zip(row.iter()) {
                            *x -= &q * y;
                        }
                    } else {
                        let e = row[p].extended_gcd(&v[p]);
                        let (rp, vp) = (&row[p] / &e.gcd, &v[p] / &e.gcd);
                        let new_row: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &e.x * r + &e.y * x).collect();
                        let rest: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &rp * x - &vp * r).collect();
                        *row = new_row;
                        if row[p].is_negative() {
                            row.iter_mut().for_each(|x| *x = -&*x);
                        }
                        v = rest;
                        grew = true;
                    }
                }
            }
        }
    }

    /// The canonical representative of `v` modulo the lattice: pivot
    /// coordinates land in `[0, pivot)`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let p = leading(row).unwrap();
            let q = v[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Invariant factors of `Z^dim / self` other than 1, with the free rank.
    pub fn quotient_invariants(&self) -> Abelianization {
        let d = snf(&self.basis_matrix()).diagonal;
        let torsion = d.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect();
        Abelianization { free_rank: self.dim - self.rows.len(), torsion }
    }
}

/// `Z^free_rank` plus the listed cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Exponent-sum matrix of the relators, one column per generator.
pub fn relation_matrix(p: &Presentation) -> IntMatrix {
    // Generators are listed unbarred first, matching `Word::exponent_sums`;
    // undoubled presentations have no barred columns.
    let cols = p.generators().len();
    let mut out = IntMatrix::zeros(p.relators().len(), cols);
    for (i, r) in p.relators().iter().enumerate() {
        for (j, s) in r.exponent_sums().into_iter().enumerate().take(cols) {
            out[(i, j)] = BigInt::from(s);
        }
    }
    out
}

pub fn abelianization(p: &Presentation) -> Abelianization {
    let a = relation_matrix(p);
    let d = snf(&a).diagonal;
    let rank = d.iter().filter(|x| !x.is_zero()).count();
    let torsion = d.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect();
    Abelianization { free_rank: a.cols() - rank, torsion }
}
