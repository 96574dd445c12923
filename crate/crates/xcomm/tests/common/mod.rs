#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use xcomm::abelian::IntMatrix;
use xcomm::words::{GenSym, Letter, Word};

/// A reduced unbarred word with length in `min..=max` after reduction.
pub fn random_unbarred(rng: &mut ChaCha8Rng, m: u32, min: usize, max: usize) -> Word {
    random_word(rng, m, min, max, false)
}

/// A reduced word over the doubled alphabet.
pub fn random_doubled(rng: &mut ChaCha8Rng, m: u32, min: usize, max: usize) -> Word {
    random_word(rng, m, min, max, true)
}

fn random_word(rng: &mut ChaCha8Rng, m: u32, min: usize, max: usize, bars: bool) -> Word {
    loop {
        let len = rng.gen_range(min..=max);
        let letters: Vec<Letter> = (0..len)
            .map(|_| {
                let barred = bars && rng.gen_bool(0.5);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                Letter::new(GenSym::new(rng.gen_range(1..=m), barred), sign)
            })
            .collect();
        let w = Word::from_letters(&letters, m).unwrap();
        if w.len() >= min {
            return w;
        }
    }
}

/// Determinant by fraction-free elimination.
pub fn bareiss_det(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn is_unimodular(a: &IntMatrix) -> bool {
    bareiss_det(a).abs().is_one()
}
