//! Computations with the weak commutativity group `X(G)`: the quotient of
//! `G * ~G` by the relations `[g, ~g] = 1`.
//!
//! - [`words`]: free-group words over the doubled alphabet.
//! - [`presentations`]: the finite relator schedule and presentation export.
//! - [`certify`]: explicit derivations of box relators from the schedule.
//! - [`homs`]: the maps to `G x G x G` and the subgroups `L`, `D`, `W`.
//! - [`lomodule`]: the ring `ZF/I_2` and the representation `nu`.
//! - [`abelian`]: Smith normal form and abelianization.
//! - [`quotients`]: checking presentations inside permutation groups.

pub mod abelian;
pub mod certify;
pub mod homs;
pub mod lomodule;
pub mod presentations;
pub mod quotients;
pub mod words;
