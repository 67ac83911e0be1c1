//! The reduced (square-free) Magnus expansion.
//!
//! `x_i ↦ 1 + X_i` lands in the ring of integer non-commutative polynomials
//! in which every monomial with a repeated index is zero. Since
//! `(1 + X_i)(1 - X_i) = 1` there, inverses are exact and the ring is a
//! finite-rank Z-module: a monomial is a sequence of *distinct* indices.
//!
//! Equality in the reduced free group `RF(n)` — the quotient of `F(n)` in
//! which every conjugate of `x_i` commutes with every other conjugate of
//! `x_i` — is *defined operationally* here as equality of reduced
//! expansions. That this embedding is injective is classical (Milnor,
//! *Link groups*, Ann. of Math. 59 (1954)); it is not re-proved, only
//! property-tested.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::free_words::{GeneratorIndex, Sign, Word};

/// Hard ceiling on ranks: monomial index sets are tracked as `u64` bitmasks.
pub const MAX_RANK: u32 = 63;

/// A square-free non-commutative monomial `X_{i1} ⋯ X_{ik}` (empty = 1).
///
/// Ordered by (length, lexicographic index sequence) so that serialized
/// polynomials are canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    indices: Vec<u32>,
}

impl Monomial {
    /// The constant monomial 1.
    pub fn one() -> Self {
        Self::default()
    }

    /// Returns `None` if any index is 0 or repeated.
    pub fn new(indices: Vec<u32>) -> Option<Self> {
        let mut mask = 0u64;
        for &i in &indices {
            if i == 0 || i > MAX_RANK {
                return None;
            }
            let bit = 1u64 << i;
            if mask & bit != 0 {
                return None;
            }
            mask |= bit;
        }
        Some(Self { indices })
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    fn mask(&self) -> u64 {
        self.indices.iter().fold(0u64, |m, &i| m | (1u64 << i))
    }

    /// Concatenation, or `None` when an index repeats.
    fn append(&self, other: &Monomial) -> Option<Monomial> {
        if self.mask() & other.mask() != 0 {
            return None;
        }
        let mut indices = Vec::with_capacity(self.len() + other.len());
        indices.extend_from_slice(&self.indices);
        indices.extend_from_slice(&other.indices);
        Some(Monomial { indices })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.indices.cmp(&other.indices))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for &i in &self.indices {
            write!(f, "X{i}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MagnusError {
    RankMismatch {
        left: u32,
        right: u32,
    },
    IndexOutOfRank {
        index: u32,
        rank: u32,
    },
    RankTooLarge {
        rank: u32,
    },
    /// Substitution image for `x_t` is not of conjugate type (some monomial
    /// of `image - 1` misses `X_t`), so the endomorphism does not descend
    /// to the square-free quotient.
    BadSubstitution {
        index: u32,
    },
}

impl fmt::Display for MagnusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MagnusError::RankMismatch { left, right } => {
                write!(f, "rank mismatch: {left} vs {right}")
            }
            MagnusError::IndexOutOfRank { index, rank } => {
                write!(f, "generator index {index} exceeds rank {rank}")
            }
            MagnusError::RankTooLarge { rank } => {
                write!(f, "rank {rank} exceeds the hard cap {MAX_RANK}")
            }
            MagnusError::BadSubstitution { index } => {
                write!(
                    f,
                    "substitution image for x{index} is not of conjugate type"
                )
            }
        }
    }
}

impl core::error::Error for MagnusError {}

/// An integer polynomial on square-free monomials at a fixed rank.
///
/// Zero coefficients are never stored; the term map is ordered by the
/// canonical monomial order, so iteration and serialization are
/// deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedPolynomial {
    rank: u32,
    terms: BTreeMap<Monomial, i64>,
}

impl ReducedPolynomial {
    /// The constant polynomial 1.
    pub fn one(rank: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one(), 1);
        Self { rank, terms }
    }

    pub fn zero(rank: u32) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Terms in canonical (length, lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, monomial: &Monomial) -> i64 {
        self.terms.get(monomial).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coefficient(&Monomial::one()) == 1
    }

    /// First non-constant term in canonical order, if any.
    pub fn leading_nonconstant_term(&self) -> Option<(&Monomial, i64)> {
        self.terms
            .iter()
            .find(|(m, _)| !m.is_empty())
            .map(|(m, &c)| (m, c))
    }

    fn insert_term(&mut self, monomial: Monomial, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        match self.terms.entry(monomial) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coefficient);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = *e.get() + coefficient;
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Non-commutative product; monomials with a repeated index vanish.
    pub fn multiply(&self, other: &ReducedPolynomial) -> Result<ReducedPolynomial, MagnusError> {
        if self.rank != other.rank {
            return Err(MagnusError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut out = ReducedPolynomial::zero(self.rank);
        for (ml, &cl) in &self.terms {
            for (mr, &cr) in &other.terms {
                if let Some(m) = ml.append(mr) {
                    out.insert_term(m, cl * cr);
                }
            }
        }
        Ok(out)
    }

    fn add_term_scaled(&mut self, other: &ReducedPolynomial, factor: i64) {
        for (m, &c) in &other.terms {
            self.insert_term(m.clone(), c * factor);
        }
    }

    /// Applies the ring endomorphism `X_t ↦ images[t-1] - 1`, where
    /// `images[t-1]` is the expansion of the image of `x_t` under a
    /// free-group endomorphism sending each `x_t` to a conjugate
    /// `w_t x_t w_t^{-1}` (so `substitute(expand(w)) = expand(w')` with
    /// `w'` the letterwise image of `w`).
    ///
    /// The conjugate shape matters: `expand(w x_t w^{-1}) - 1 =
    /// expand(w)·X_t·expand(w^{-1})`, so every monomial of the delta
    /// carries `X_t`, which is what lets the endomorphism descend to the
    /// square-free quotient. Arbitrary images do not.
    pub fn substitute(
        &self,
        images: &[ReducedPolynomial],
    ) -> Result<ReducedPolynomial, MagnusError> {
        if images.len() as u32 != self.rank {
            return Err(MagnusError::RankMismatch {
                left: self.rank,
                right: images.len() as u32,
            });
        }
        let mut deltas: Vec<ReducedPolynomial> = Vec::with_capacity(images.len());
        for (pos, img) in images.iter().enumerate() {
            if img.rank != self.rank {
                return Err(MagnusError::RankMismatch {
                    left: self.rank,
                    right: img.rank,
                });
            }
            let index = pos as u32 + 1;
            let mut d = img.clone();
            d.insert_term(Monomial::one(), -1);
            if d.terms.keys().any(|m| !m.indices.contains(&index)) {
                return Err(MagnusError::BadSubstitution { index });
            }
            deltas.push(d);
        }
        let mut out = ReducedPolynomial::zero(self.rank);
        for (mono, &c) in &self.terms {
            let mut acc = ReducedPolynomial::one(self.rank);
            for &idx in mono.indices() {
                acc = acc.multiply(&deltas[(idx - 1) as usize])?;
            }
            out.add_term_scaled(&acc, c);
        }
        Ok(out)
    }

    /// Right-multiplication by `1 + sign · X_i`, the expansion of one letter.
    fn multiply_letter(&self, index: u32, sign: Sign) -> ReducedPolynomial {
        let mut out = self.clone();
        let bit = 1u64 << index;
        for (m, &c) in &self.terms {
            if m.mask() & bit == 0 {
                let mut indices = m.indices.clone();
                indices.push(index);
                out.insert_term(Monomial { indices }, sign.as_i64() * c);
            }
        }
        out
    }
}

impl fmt::Display for ReducedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (m, c)) in self.terms.iter().enumerate() {
            if pos == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else if *c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.unsigned_abs();
            if abs != 1 || m.is_empty() {
                write!(f, "{abs}")?;
                if !m.is_empty() {
                    write!(f, "·")?;
                }
            }
            if !m.is_empty() {
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

fn check_rank(rank: u32) -> Result<(), MagnusError> {
    if rank > MAX_RANK {
        return Err(MagnusError::RankTooLarge { rank });
    }
    Ok(())
}

/// The reduced Magnus expansion of a word at the given rank:
/// `x_i ↦ 1 + X_i`, `x_i^{-1} ↦ 1 - X_i` (exact inverse in this ring).
///
/// Multiplicative: `expand(u·v) = expand(u) · expand(v)`; the constant
/// term is always 1.
pub fn expand(word: &Word, rank: u32) -> Result<ReducedPolynomial, MagnusError> {
    check_rank(rank)?;
    let mut poly = ReducedPolynomial::one(rank);
    for letter in word.letters() {
        let index = letter.index.get();
        if index > rank {
            return Err(MagnusError::IndexOutOfRank { index, rank });
        }
        poly = poly.multiply_letter(index, letter.sign);
    }
    Ok(poly)
}

/// Equality in `RF(rank)`, decided by comparing reduced expansions.
pub fn rf_equal(u: &Word, v: &Word, rank: u32) -> Result<bool, MagnusError> {
    Ok(expand(u, rank)? == expand(v, rank)?)
}

/// Whether the word represents the identity of `RF(rank)`.
pub fn rf_trivial(w: &Word, rank: u32) -> Result<bool, MagnusError> {
    Ok(expand(w, rank)?.is_one())
}

/// `X_{i}` with `i = index.get()` as a length-1 monomial.
pub fn monomial_of(index: GeneratorIndex) -> Monomial {
    Monomial {
        indices: alloc::vec![index.get()],
    }
}

/// Renders a polynomial term list as in the JSON mirror, for diagnostics.
pub fn term_strings(poly: &ReducedPolynomial) -> Vec<String> {
    poly.terms()
        .map(|(m, c)| alloc::format!("{c}·{m}"))
        .collect()
}
