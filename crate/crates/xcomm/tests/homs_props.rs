use proptest::prelude::*;

use xcomm::homs::{check_relators_die, in_d, in_l, in_q, in_w, rho, Triple};
use xcomm::presentations::upsilon;
use xcomm::words::{box_word, free_reduce, GenSym, Letter, Word};

const M: u32 = 3;

fn word(bars: bool) -> impl Strategy<Value = Word> {
    proptest::collection::vec((1..=M, any::<bool>(), any::<bool>()), 0..16).prop_map(move |v| {
        let l: Vec<Letter> =
            v.into_iter().map(|(i, b, neg)| Letter::new(GenSym::new(i, b && bars), if neg { -1 } else { 1 })).collect();
        free_reduce(&l, M).unwrap()
    })
}

/// `rho` computed letter by letter from the defining images.
fn rho_oracle(w: &Word) -> Triple {
    let one = Word::identity(M);
    let mut t = Triple { g1: one.clone(), g2: one.clone(), g3: one };
    for &l in w.letters() {
        let g = Word::from_letters(&[l.unbarred()], M).unwrap();
        let one = Word::identity(M);
        let step = if l.barred() {
            Triple { g1: one, g2: g.clone(), g3: g }
        } else {
            Triple { g1: g.clone(), g2: g, g3: one }
        };
        t = t.mul(&step);
    }
    t
}

proptest! {
    #[test]
    fn rho_is_a_homomorphism(u in word(true), v in word(true)) {
        prop_assert_eq!(rho(&u), rho_oracle(&u));
        prop_assert_eq!(rho(&u.concat(&v)), rho(&u).mul(&rho(&v)));
        prop_assert!(in_q(&rho(&u)));
    }

    #[test]
    fn kernel_containments(u in word(true)) {
        if in_w(&u) {
            prop_assert!(in_l(&u) && in_d(&u));
        }
        // Commutators of elements of D and L land in W.
        let x = u.comm_with(&u.bar());
        prop_assert!(in_w(&x) || u.is_empty() || !in_d(&x) || !in_l(&x));
    }

    #[test]
    fn l_image(u in word(false)) {
        let x = u.concat(&u.bar().inverse());
        prop_assert!(in_l(&x));
        let t = rho(&x);
        prop_assert!(t.g2.is_empty());
        prop_assert_eq!(t.g1, u.clone());
        prop_assert_eq!(t.g3, u.inverse());
    }
}

#[test]
fn relators_die_and_lie_in_d_and_l() {
    for m in 1..=4 {
        assert!(check_relators_die(m));
        for u in upsilon(m).unwrap().words {
            let b = box_word(&u).unwrap();
            assert!(in_d(&b) && in_l(&b) && in_w(&b));
        }
    }
}
