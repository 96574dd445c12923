use proptest::prelude::*;

use xcomm::words::{
    bar, box_inv_word, box_set, box_word, comm, conj, find_conjugator, free_reduce, inv, mul, unbarred_words, Alphabet,
    GenSym, Letter, Word,
};

const M: u32 = 3;

fn letters(max: usize, bars: bool) -> impl Strategy<Value = Vec<Letter>> {
    proptest::collection::vec((1..=M, any::<bool>(), any::<bool>()), 0..max).prop_map(move |v| {
        v.into_iter().map(|(i, b, neg)| Letter::new(GenSym::new(i, b && bars), if neg { -1 } else { 1 })).collect()
    })
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    letters(max, true).prop_map(|l| free_reduce(&l, M).unwrap())
}

fn unbarred(max: usize) -> impl Strategy<Value = Word> {
    letters(max, false).prop_map(|l| free_reduce(&l, M).unwrap())
}

/// Cancels one adjacent inverse pair per pass until none remain.
fn naive_reduce(raw: &[Letter]) -> Vec<Letter> {
    let mut v = raw.to_vec();
    loop {
        match v.windows(2).position(|p| p[0] == p[1].inverse()) {
            Some(i) => {
                v.drain(i..i + 2);
            }
            None => return v,
        }
    }
}

#[test]
fn unbarred_word_counts() {
    for m in 1..=3u32 {
        for len in 0..=5usize {
            let want = if len == 0 { 1 } else { 2 * m as usize * (2 * m as usize - 1).pow(len as u32 - 1) };
            assert_eq!(unbarred_words(m, len).len(), want, "m={m} len={len}");
        }
    }
}

#[test]
fn box_set_counts() {
    // Reduced words of length 1..=n, paired with their inverses.
    for (n, m) in [(1, 1), (1, 2), (2, 2), (3, 2), (2, 3)] {
        let total: usize = (1..=n).map(|l| unbarred_words(m, l).len()).sum();
        assert_eq!(box_set(n, m).len(), total / 2);
    }
}

proptest! {
    #[test]
    fn reduction_matches_naive(raw in letters(24, true)) {
        let w = free_reduce(&raw, M).unwrap();
        let naive = naive_reduce(&raw);
        prop_assert_eq!(w.letters(), naive.as_slice());
        prop_assert!(w.len() <= raw.len());
        prop_assert_eq!(free_reduce(w.letters(), M).unwrap(), w);
    }

    #[test]
    fn group_laws(u in word(12), v in word(12), x in word(12)) {
        prop_assert!(mul(&u, &inv(&u)).unwrap().is_empty());
        prop_assert_eq!(mul(&mul(&u, &v).unwrap(), &x).unwrap(), mul(&u, &mul(&v, &x).unwrap()).unwrap());
        prop_assert_eq!(inv(&mul(&u, &v).unwrap()), mul(&inv(&v), &inv(&u)).unwrap());
        let c = comm(&u, &v).unwrap();
        prop_assert_eq!(c, inv(&u).concat(&inv(&v)).concat(&u).concat(&v));
        prop_assert_eq!(conj(&u, &v).unwrap(), inv(&v).concat(&u).concat(&v));
    }

    #[test]
    fn bar_is_an_involution(u in word(12), v in word(12)) {
        prop_assert_eq!(bar(&bar(&u)), u.clone());
        prop_assert_eq!(bar(&u).len(), u.len());
        prop_assert_eq!(bar(&mul(&u, &v).unwrap()), mul(&bar(&u), &bar(&v)).unwrap());
        prop_assert_eq!(bar(&inv(&u)), inv(&bar(&u)));
    }

    #[test]
    fn boxes(w in unbarred(10)) {
        prop_assume!(!w.is_empty());
        let b = box_word(&w).unwrap();
        prop_assert!(b.erase_bars().is_empty());
        // [w, ~w] = ([w, ~w^-1]^{~w})^-1
        let bi = box_inv_word(&w).unwrap();
        prop_assert_eq!(b, inv(&conj(&bi, &bar(&w)).unwrap()));
        prop_assert!(box_word(&bar(&w)).is_err());
    }

    #[test]
    fn print_parse_round_trip(u in word(16)) {
        let al = Alphabet::standard(M);
        prop_assert_eq!(al.parse(&al.format(&u)).unwrap(), u.clone());
        let wide = Alphabet::standard(5);
        let u5 = u.with_rank(5).unwrap();
        prop_assert_eq!(wide.parse(&wide.format(&u5)).unwrap(), u5);
    }

    #[test]
    fn conjugators_are_found(u in word(10), x in word(6)) {
        let t = conj(&u, &x).unwrap();
        let y = find_conjugator(&u, &t).expect("conjugate");
        prop_assert_eq!(conj(&u, &y).unwrap(), t);
    }
}
