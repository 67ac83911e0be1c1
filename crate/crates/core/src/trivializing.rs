//! Trivializing numbers.
//!
//! `Z(w)` is the minimum number of letter deletions turning the word `w`
//! into one that represents the trivial element of the free group. It is
//! computed on the letter sequence exactly as given — never on a reduced
//! form — via interval dynamic programming: a word is free-trivial iff its
//! letters admit a non-crossing perfect matching into inverse pairs, so
//! `Z(w) = |w| - M(w)` with `M` the longest non-crossing-matchable
//! subsequence. The characterization is not taken on faith: tests check the
//! DP against [`z_number_oracle`], an independent brute force over deletion
//! subsets.
//!
//! `RZ(γ)` — the minimum of `Z` over all words representing `γ` in the
//! reduced free group — has no known terminating exact algorithm, so this
//! module only ever reports *upper bounds*, each carried by an explicit
//! witness word: [`rz_witness`] builds the witness for a basic-commutator
//! power (`c_ℓ c_j^a c_ℓ^{-1} c_j^{-a}`, trivializable inside the two
//! `c_ℓ` wings), [`rz_upper`] sums witnesses over a Hall decomposition, and
//! [`rz_search`] refines by bounded rewriting. Equality is exposed only for
//! generator powers, where `RZ(x_i^a) = |a|`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_core::{RngCore, SeedableRng};

use crate::free_words::{GeneratorIndex, Letter, Word};
use crate::hall::{self, BasicCommutator, HallError};
use crate::magnus::MagnusError;

/// Length cap for the brute-force oracle (2^len subsets).
pub const ORACLE_LEN_CAP: usize = 14;
/// Length cap for the rewrite search.
pub const SEARCH_LEN_CAP: usize = 20;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TrivializingError {
    LengthCapExceeded { len: usize, cap: usize },
    Hall(HallError),
    Magnus(MagnusError),
}

impl fmt::Display for TrivializingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrivializingError::LengthCapExceeded { len, cap } => {
                write!(f, "length {len} exceeds cap {cap}")
            }
            TrivializingError::Hall(e) => write!(f, "{e}"),
            TrivializingError::Magnus(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TrivializingError {}

impl From<HallError> for TrivializingError {
    fn from(e: HallError) -> Self {
        TrivializingError::Hall(e)
    }
}

impl From<MagnusError> for TrivializingError {
    fn from(e: MagnusError) -> Self {
        TrivializingError::Magnus(e)
    }
}

/// Exact trivializing number with a deletion witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZResult {
    pub value: u64,
    /// 0-based positions whose deletion leaves a word free-reducing to `e`;
    /// exactly `value` of them.
    pub witness_deletions: Vec<usize>,
}

/// Interval DP for `Z(w)`.
///
/// `M[i][j] = max(M[i+1][j], max over k in (i, j] with w_k = w_i^{-1} of
/// 2 + M[i+1][k-1] + M[k+1][j])`.
pub fn z_number(word: &Word) -> ZResult {
    let letters = word.letters();
    let n = letters.len();
    if n == 0 {
        return ZResult {
            value: 0,
            witness_deletions: Vec::new(),
        };
    }

    // m[i][j] over inclusive intervals; i > j reads as the empty interval
    let mut m = alloc::vec![alloc::vec![0u32; n]; n];
    let at = |m: &Vec<Vec<u32>>, i: usize, j: usize| -> u32 {
        if i > j || i >= n {
            0
        } else {
            m[i][j]
        }
    };
    for span in 2..=n {
        for i in 0..=(n - span) {
            let j = i + span - 1;
            let mut best = at(&m, i + 1, j);
            for k in (i + 1)..=j {
                if letters[k].is_inverse_of(letters[i]) {
                    let with = 2 + at(&m, i + 1, k - 1) + at(&m, k + 1, j);
                    best = best.max(with);
                }
            }
            m[i][j] = best;
        }
    }

    // reconstruct one maximum matching, preferring a match at the left end
    let mut matched = alloc::vec![false; n];
    let mut stack: Vec<(usize, usize)> = alloc::vec![(0, n - 1)];
    while let Some((i, j)) = stack.pop() {
        if i >= j {
            continue;
        }
        let goal = m[i][j];
        let mut advanced = false;
        for k in (i + 1)..=j {
            if letters[k].is_inverse_of(letters[i])
                && 2 + at(&m, i + 1, k - 1) + at(&m, k + 1, j) == goal
            {
                matched[i] = true;
                matched[k] = true;
                if i + 1 < k {
                    stack.push((i + 1, k - 1));
                }
                if k < j {
                    stack.push((k + 1, j));
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            stack.push((i + 1, j));
        }
    }

    let witness_deletions: Vec<usize> = (0..n).filter(|&p| !matched[p]).collect();
    debug_assert_eq!(witness_deletions.len() as u32 + m[0][n - 1], n as u32);
    ZResult {
        value: witness_deletions.len() as u64,
        witness_deletions,
    }
}

/// Independent brute force: minimum `|S|` over deletion subsets `S` such
/// that the remaining word free-reduces to `e`. Capped at
/// [`ORACLE_LEN_CAP`] letters.
pub fn z_number_oracle(word: &Word) -> Result<u64, TrivializingError> {
    let letters = word.letters();
    let n = letters.len();
    if n > ORACLE_LEN_CAP {
        return Err(TrivializingError::LengthCapExceeded {
            len: n,
            cap: ORACLE_LEN_CAP,
        });
    }
    let mut best = n as u32;
    for mask in 0u32..(1u32 << n) {
        let deletions = mask.count_ones();
        if deletions >= best {
            continue;
        }
        let mut stack: Vec<Letter> = Vec::with_capacity(n);
        for (pos, &letter) in letters.iter().enumerate() {
            if mask & (1 << pos) != 0 {
                continue;
            }
            match stack.last() {
                Some(&top) if top.is_inverse_of(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        if stack.is_empty() {
            best = deletions;
        }
    }
    Ok(best as u64)
}

/// How an [`RZBound`] was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RzMethod {
    /// Constructive witness from the basic-commutator chain.
    Lemma,
    /// Bounded rewrite search that ran to completion.
    Search,
    /// Bounded rewrite search stopped by its budget; best found so far.
    SearchExhausted,
}

impl RzMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RzMethod::Lemma => "lemma",
            RzMethod::Search => "search",
            RzMethod::SearchExhausted => "search-exhausted",
        }
    }
}

impl fmt::Display for RzMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// An upper bound `RZ(γ) ≤ upper`, carried by a witness word in the same
/// `RF` class with `Z(witness) ≤ upper`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RZBound {
    pub upper: u64,
    pub witness: Word,
    pub method: RzMethod,
}

/// Constructive witness for `c^a` read in the reduced free group.
///
/// * weight 1 (`c = x_t`): witness `x_t^a`, and here the bound is sharp:
///   `RZ(x_t^a) = |a|`;
/// * weight ≥ 2 (`c = [c_ℓ, c_j]`): in `RF` one has
///   `c^a = (c_ℓ c_j^a c_ℓ^{-1}) c_j^{-a}` because `c_j` is a product of
///   conjugates of a single generator, so conjugates of `c_j` commute. The
///   witness is `W_ℓ · w(c_j)^a · W_ℓ^{-1} · w(c_j)^{-a}` with `W_ℓ` the
///   left child's witness for exponent 1; trivializing both wings costs
///   `2·RZ(c_ℓ) ≤ 2·w(c_ℓ) ≤ w(c)` deletions, whence
///   `upper = min(2 · upper(c_ℓ, 1), w(c))`.
pub fn rz_witness(c: &BasicCommutator, a: i64) -> RZBound {
    match c {
        BasicCommutator::Leaf(index) => RZBound {
            upper: a.unsigned_abs(),
            witness: Word::generator(*index).power(a),
            method: RzMethod::Lemma,
        },
        BasicCommutator::Node { left, right, .. } => {
            if a == 0 {
                return RZBound {
                    upper: 0,
                    witness: Word::empty(),
                    method: RzMethod::Lemma,
                };
            }
            let wing = rz_witness(left, 1);
            let right_word = right.as_word();
            let witness = wing
                .witness
                .concat(&right_word.power(a))
                .concat(&wing.witness.inverse())
                .concat(&right_word.power(-a));
            RZBound {
                upper: (2 * wing.upper).min(c.weight() as u64),
                witness,
                method: RzMethod::Lemma,
            }
        }
    }
}

/// Lemma-chain upper bound on `RZ(gamma)`: decompose over the repeat-free
/// Hall basis and concatenate the per-commutator witnesses in basis order.
/// The witness is `rf`-equal to `gamma`; the bound is the sum of the
/// per-power bounds over nonzero exponents.
pub fn rz_upper(gamma: &Word, rank: u32) -> Result<RZBound, TrivializingError> {
    let decomposition = hall::decompose(gamma, rank)?;
    Ok(rz_upper_of_decomposition(&decomposition))
}

/// [`rz_upper`] on an already-computed decomposition.
pub fn rz_upper_of_decomposition(decomposition: &[(BasicCommutator, i64)]) -> RZBound {
    let mut upper = 0u64;
    let mut witness = Word::empty();
    for (c, a) in decomposition {
        if *a == 0 {
            continue;
        }
        let part = rz_witness(c, *a);
        upper += part.upper;
        witness = witness.concat(&part.witness);
    }
    RZBound {
        upper,
        witness,
        method: RzMethod::Lemma,
    }
}

fn shuffle<T>(items: &mut [T], rng: &mut rand_chacha::ChaCha8Rng) {
    // Fisher-Yates
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// Parses conjugate blocks `g x_t^ε g^{-1}` (palindromic-inverse segments
/// of odd length) starting at `start`; yields `(length, t)` for each.
fn conjugate_blocks_at(letters: &[Letter], start: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let n = letters.len();
    let mut half = 0usize;
    loop {
        let len = 2 * half + 1;
        if start + len > n {
            break;
        }
        let ok = (0..half).all(|q| letters[start + q].is_inverse_of(letters[start + 2 * half - q]));
        if ok {
            out.push((len, letters[start + half].index.get()));
        }
        half += 1;
    }
    out
}

fn swap_segments(letters: &[Letter], start: usize, len1: usize, len2: usize) -> Word {
    let mut next: Vec<Letter> = Vec::with_capacity(letters.len());
    next.extend_from_slice(&letters[..start]);
    next.extend_from_slice(&letters[start + len1..start + len1 + len2]);
    next.extend_from_slice(&letters[start..start + len1]);
    next.extend_from_slice(&letters[start + len1 + len2..]);
    Word::new(next)
}

/// Rewrite neighbours of `word` inside its `RF(rank)` class:
/// inverse-pair removals and insertions, plus swaps of adjacent commuting
/// conjugate blocks `g x_t g^{-1} · h x_t h^{-1}`.
fn neighbours(word: &Word, rank: u32, max_len: usize) -> Vec<Word> {
    let letters = word.letters();
    let n = letters.len();
    let mut out = Vec::new();

    // remove an adjacent inverse pair
    for p in 0..n.saturating_sub(1) {
        if letters[p].is_inverse_of(letters[p + 1]) {
            let mut next = Vec::with_capacity(n - 2);
            next.extend_from_slice(&letters[..p]);
            next.extend_from_slice(&letters[p + 2..]);
            out.push(Word::new(next));
        }
    }

    // insert an inverse pair
    if n + 2 <= max_len {
        for p in 0..=n {
            for i in 1..=rank {
                let gi = GeneratorIndex::new(i).unwrap();
                for first in [
                    crate::free_words::Sign::Plus,
                    crate::free_words::Sign::Minus,
                ] {
                    let mut next = Vec::with_capacity(n + 2);
                    next.extend_from_slice(&letters[..p]);
                    next.push(Letter::new(gi, first));
                    next.push(Letter::new(gi, first.flip()));
                    next.extend_from_slice(&letters[p..]);
                    out.push(Word::new(next));
                }
            }
        }
    }

    // swap adjacent conjugate blocks with the same centre generator
    for start in 0..n {
        for (len1, t1) in conjugate_blocks_at(letters, start) {
            for (len2, t2) in conjugate_blocks_at(letters, start + len1) {
                if t1 == t2 {
                    out.push(swap_segments(letters, start, len1, len2));
                }
            }
        }
    }

    out
}

/// Bounded exploration of `RF(rank)`-equal representatives of `gamma`,
/// returning the minimum `Z` seen. `budget` counts expanded words; when it
/// runs out with frontier remaining, the result is flagged
/// [`RzMethod::SearchExhausted`]. Deterministic for a fixed `seed`.
pub fn rz_search(
    gamma: &Word,
    rank: u32,
    max_len: usize,
    budget: usize,
    seed: u64,
) -> Result<RZBound, TrivializingError> {
    if max_len > SEARCH_LEN_CAP {
        return Err(TrivializingError::LengthCapExceeded {
            len: max_len,
            cap: SEARCH_LEN_CAP,
        });
    }
    if gamma.max_index() > rank {
        return Err(TrivializingError::Magnus(MagnusError::IndexOutOfRank {
            index: gamma.max_index(),
            rank,
        }));
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut visited: BTreeSet<Word> = BTreeSet::new();
    let mut frontier: VecDeque<Word> = VecDeque::new();
    visited.insert(gamma.clone());
    frontier.push_back(gamma.clone());

    let mut best_value = u64::MAX;
    let mut best_word = gamma.clone();
    let mut spent = 0usize;

    while let Some(word) = frontier.pop_front() {
        if spent >= budget {
            frontier.push_front(word);
            break;
        }
        spent += 1;

        let z = z_number(&word);
        if z.value < best_value {
            best_value = z.value;
            best_word = word.clone();
        }

        if word.len() > max_len {
            continue;
        }
        let mut next: Vec<Word> = neighbours(&word, rank, max_len)
            .into_iter()
            .filter(|w| !visited.contains(w))
            .collect();
        next.sort();
        next.dedup();
        shuffle(&mut next, &mut rng);
        for w in next {
            visited.insert(w.clone());
            frontier.push_back(w);
        }
    }

    Ok(RZBound {
        upper: best_value,
        witness: best_word,
        method: if frontier.is_empty() {
            RzMethod::Search
        } else {
            RzMethod::SearchExhausted
        },
    })
}

/// Renders the deletion set for diagnostics.
pub fn deletions_string(z: &ZResult) -> String {
    let mut s = String::from("[");
    for (pos, d) in z.witness_deletions.iter().enumerate() {
        if pos > 0 {
            s.push_str(", ");
        }
        s.push_str(&alloc::format!("{d}"));
    }
    s.push(']');
    s
}
