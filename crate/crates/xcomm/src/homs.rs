//! The map `rho: X(F) -> F x F x F` and word-level membership tests for
//! the subgroups `L`, `D` and `W = D ∩ L`.
//!
//! All tests are exact for the free group `F_m`. For other groups they are
//! necessary conditions only.

use crate::presentations::upsilon;
use crate::words::{box_word, Word};

/// Three unbarred words of a common rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub g1: Word,
    pub g2: Word,
    pub g3: Word,
}

impl Triple {
    pub fn is_identity(&self) -> bool {
        self.g1.is_empty() && self.g2.is_empty() && self.g3.is_empty()
    }

    pub fn mul(&self, other: &Triple) -> Triple {
        Triple { g1: self.g1.concat(&other.g1), g2: self.g2.concat(&other.g2), g3: self.g3.concat(&other.g3) }
    }
}

/// `a -> (a, a, 1)` and `~a -> (1, a, a)`.
pub fn rho(w: &Word) -> Triple {
    Triple { g1: w.project(|l| !l.barred()), g2: w.erase_bars(), g3: w.project(|l| l.barred()).erase_bars() }
}

/// `g1 g2^-1 g3` lies in the commutator subgroup, i.e. has zero exponent
/// sums.
pub fn in_q(t: &Triple) -> bool {
    let x = t.g1.concat(&t.g2.inverse()).concat(&t.g3);
    x.exponent_sums().iter().all(|&s| s == 0)
}

/// Kernel of `a, ~a -> a`.
pub fn in_l(w: &Word) -> bool {
    w.erase_bars().is_empty()
}

/// Kernel of the map to `F x ~F`.
pub fn in_d(w: &Word) -> bool {
    w.project(|l| !l.barred()).is_empty() && w.project(|l| l.barred()).is_empty()
}

/// Kernel of `rho`.
pub fn in_w(w: &Word) -> bool {
    rho(w).is_identity()
}

/// Every box relator of the schedule dies under `rho`.
pub fn check_relators_die(m: u32) -> bool {
    match upsilon(m) {
        Ok(s) => s.words.iter().all(|u| in_w(&box_word(u).expect("unbarred"))),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn t(a: &str, b: &str, c: &str) -> Triple {
        Triple { g1: w(a), g2: w(b), g3: w(c) }
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&w("a")), t("a", "a", "1"));
        assert_eq!(rho(&w("~a")), t("1", "a", "a"));
        assert_eq!(rho(&w("a ~a^-1")), t("a", "1", "a^-1"));
    }

    #[test]
    fn q_examples() {
        assert!(in_q(&t("a", "a", "1")));
        assert!(!in_q(&t("a", "1", "1")));
        assert!(in_q(&t("ab", "ba", "1")));
    }

    #[test]
    fn membership_examples() {
        assert!(in_l(&w("a^-1 ~a")));
        assert!(!in_l(&w("a")));
        assert!(!in_l(&w("[a,~b]")));
        assert!(in_d(&w("[a,~b]")));
        assert!(!in_d(&w("a^-1 ~a")));
        assert!(in_d(&box_word(&w("ab")).unwrap()));
        assert!(in_w(&w("1")));
        assert!(!in_w(&w("a")));
        // rho gives ([a^-1,b^-1], 1, [a,b]): in L but not in D.
        let c = w("[a^-1 ~a, b^-1 ~b]");
        assert!(in_l(&c) && !in_d(&c));
        assert!(!in_w(&c));
        assert_eq!(rho(&c), t("[a^-1,b^-1]", "1", "[a,b]"));
    }

    #[test]
    fn relators_die() {
        assert!(check_relators_die(2));
        assert!(check_relators_die(3));
        assert!(check_relators_die(4));
    }
}
