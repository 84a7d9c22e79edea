//! Exact arithmetic over `F_q(θ)` and experiments on residue fields.
//!
//! The crate is organized bottom-up:
//!
//! * [`gf`] — the base finite field `F_q`, `q = p^r`.
//! * [`polyring`] — the polynomial ring `R = F_q[θ]`, the fraction field
//!   `K = F_q(θ)`, irreducibility and separability tests.
//! * [`residue`] — residue fields `R/(P)`, Legendre symbols, root counting
//!   and root finding modulo a monic irreducible `P`.
//! * [`lrs`] — linear recurrent sequences over `K` and fast evaluation of
//!   the term with index `q^{deg P}` modulo `P`.
//! * [`ak`] — truncated residue families: one value per monic irreducible
//!   up to a degree cutoff, with a finite set of excluded primes.
//! * [`galois`] — abelian Galois families (constant-field and quadratic
//!   Kummer extensions), Frobenius classes and density estimates.
//! * [`grouplab`] — finite groups as multiplication tables, centralizers,
//!   wreath products and exhaustive verification of the density bounds.

pub mod ak;
pub mod galois;
pub mod gf;
pub mod grouplab;
pub mod lrs;
pub mod polyring;
pub mod residue;
