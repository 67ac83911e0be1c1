//! Link-homotopy invariants of links presented as pure-braid closures or
//! Habegger-Lin normal forms.
//!
//! The crate computes, exactly for links of up to three components and as
//! certified lower/upper bounds for four or more:
//!
//! * the pairwise-linking bound `Λ(L) = Σ_{i<j} |lk(L_i, L_j)|`,
//! * Milnor's triple linking number `μ₁₂₃` (for three components),
//! * the homotopy trivializing number `n_h(L)` — the minimum number of
//!   crossing changes turning `L` into a 4D-homotopically trivial link —
//!   which coincides with the disk intersection number `n_d(L)`.
//!
//! The machinery underneath is classical combinatorial group theory:
//!
//! * [`free_words`] — raw words in a free group,
//! * [`magnus`] — the reduced (square-free) Magnus expansion, an exact
//!   equality oracle for the reduced free group `RF(n)` (injectivity goes
//!   back to Milnor's *Link groups*, Ann. of Math. 59 (1954)),
//! * [`hall`] — ordered Hall bases of basic commutators, Witt counts, and
//!   decomposition of `RF(n)` elements into basic-commutator powers,
//! * [`trivializing`] — the word trivializing number `Z(w)` (minimum letter
//!   deletions to reach a free-trivial word) and upper bounds for its
//!   reduced-group analogue `RZ(γ)`,
//! * [`braids`] — pure braid words, the Artin action, and combing into
//!   Habegger-Lin coordinates `(γ₂, …, γₙ)`,
//! * [`invariants`] — the link-level pipeline assembling all of the above,
//! * [`seifert`] — a pattern checker for null-form Seifert matrices.
//!
//! The crate is `no_std` (alloc only); IO, file formats and the CLI live in
//! the companion `linkhom-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod braids;
pub mod free_words;
pub mod hall;
pub mod invariants;
pub mod magnus;
pub mod seifert;
pub mod trivializing;

/// Default cap on the ambient rank accepted by front ends.
///
/// The reduced Magnus ring on `n` generators has `Σ_k n!/(n-k)!` monomials,
/// which grows super-exponentially; 12 keeps every operation desk-scale.
pub const DEFAULT_RANK_CAP: u32 = 12;
