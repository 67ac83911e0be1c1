//! Ordered Hall bases of basic commutators.
//!
//! The ordered family `{c_1, c_2, …}` with weights `w(c_i)` is generated by:
//!
//! * `c_1, …, c_n` are the generators, of weight 1;
//! * weights are non-decreasing along the sequence;
//! * past the generators, `c_i = [c_ℓ, c_j]` with `ℓ < j < i` and
//!   `w(c_i) = w(c_ℓ) + w(c_j)`;
//! * if `c_j = [c_r, c_s]` then `r ≤ ℓ`;
//! * every bracket satisfying the above is in the family.
//!
//! Within one weight the order is only constrained by the rules above; this
//! implementation breaks ties lexicographically on the bracket serialization
//! (`[x1,[x1,x2]]` style), which also serves as the cache text form.
//!
//! [`decompose`] writes an `RF(n)` element as an ordered product of powers
//! of the *repeat-free* basic commutators (a commutator that repeats a
//! generator index vanishes in `RF(n)`), by per-weight elimination against
//! the leading coefficients of the reduced Magnus expansion.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::free_words::{commutator, GeneratorIndex, Word};
use crate::magnus::{expand, MagnusError, Monomial, ReducedPolynomial};

/// A bracketed commutator tree with cached weight.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BasicCommutator {
    Leaf(GeneratorIndex),
    Node {
        weight: u32,
        left: Box<BasicCommutator>,
        right: Box<BasicCommutator>,
    },
}

impl BasicCommutator {
    pub fn leaf(index: GeneratorIndex) -> Self {
        BasicCommutator::Leaf(index)
    }

    pub fn node(left: BasicCommutator, right: BasicCommutator) -> Self {
        let weight = left.weight() + right.weight();
        BasicCommutator::Node {
            weight,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn weight(&self) -> u32 {
        match self {
            BasicCommutator::Leaf(_) => 1,
            BasicCommutator::Node { weight, .. } => *weight,
        }
    }

    /// Bitmask of the leaf indices (with multiplicity collapsed).
    fn leaf_mask(&self) -> u64 {
        match self {
            BasicCommutator::Leaf(i) => 1u64 << i.get(),
            BasicCommutator::Node { left, right, .. } => left.leaf_mask() | right.leaf_mask(),
        }
    }

    /// True when no generator index occurs twice among the leaves.
    pub fn is_repeat_free(&self) -> bool {
        match self {
            BasicCommutator::Leaf(_) => true,
            BasicCommutator::Node { left, right, .. } => {
                left.is_repeat_free()
                    && right.is_repeat_free()
                    && left.leaf_mask() & right.leaf_mask() == 0
            }
        }
    }

    pub fn max_index(&self) -> u32 {
        match self {
            BasicCommutator::Leaf(i) => i.get(),
            BasicCommutator::Node { left, right, .. } => left.max_index().max(right.max_index()),
        }
    }

    /// The commutator realized as a concrete word: a leaf is a single
    /// letter, a node is `u·v·u⁻¹·v⁻¹` on the children's words.
    pub fn as_word(&self) -> Word {
        match self {
            BasicCommutator::Leaf(i) => Word::generator(*i),
            BasicCommutator::Node { left, right, .. } => {
                commutator(&left.as_word(), &right.as_word())
            }
        }
    }

    fn write_serial(&self, out: &mut String) {
        match self {
            BasicCommutator::Leaf(i) => {
                out.push('x');
                out.push_str(&itoa_u32(i.get()));
            }
            BasicCommutator::Node { left, right, .. } => {
                out.push('[');
                left.write_serial(out);
                out.push(',');
                right.write_serial(out);
                out.push(']');
            }
        }
    }

    /// Canonical bracket text, e.g. `[[x1,x2],x3]`.
    pub fn serial(&self) -> String {
        let mut s = String::new();
        self.write_serial(&mut s);
        s
    }
}

fn itoa_u32(v: u32) -> String {
    alloc::format!("{v}")
}

impl fmt::Display for BasicCommutator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serial())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HallError {
    /// The residual did not eliminate to 1; a convention or arithmetic bug.
    Decomposition(String),
    BadBasis(String),
    Parse {
        offset: usize,
        message: String,
    },
    Magnus(MagnusError),
}

impl fmt::Display for HallError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HallError::Decomposition(m) => write!(f, "decomposition failure: {m}"),
            HallError::BadBasis(m) => write!(f, "unsuitable basis: {m}"),
            HallError::Parse { offset, message } => {
                write!(f, "commutator parse error at byte {offset}: {message}")
            }
            HallError::Magnus(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for HallError {}

impl From<MagnusError> for HallError {
    fn from(e: MagnusError) -> Self {
        HallError::Magnus(e)
    }
}

impl FromStr for BasicCommutator {
    type Err = HallError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn parse_at(s: &str, pos: usize) -> Result<(BasicCommutator, usize), HallError> {
            let bytes = s.as_bytes();
            let err = |pos: usize, message: &str| HallError::Parse {
                offset: pos,
                message: String::from(message),
            };
            match bytes.get(pos) {
                Some(b'[') => {
                    let (left, pos) = parse_at(s, pos + 1)?;
                    if bytes.get(pos) != Some(&b',') {
                        return Err(err(pos, "expected `,`"));
                    }
                    let (right, pos) = parse_at(s, pos + 1)?;
                    if bytes.get(pos) != Some(&b']') {
                        return Err(err(pos, "expected `]`"));
                    }
                    Ok((BasicCommutator::node(left, right), pos + 1))
                }
                Some(b'x') => {
                    let mut end = pos + 1;
                    while end < bytes.len() && bytes[end].is_ascii_digit() {
                        end += 1;
                    }
                    if end == pos + 1 {
                        return Err(err(pos, "expected generator index"));
                    }
                    let value: u32 = s[pos + 1..end]
                        .parse()
                        .map_err(|_| err(pos, "generator index out of range"))?;
                    let index = GeneratorIndex::new(value)
                        .ok_or_else(|| err(pos, "generator index must be >= 1"))?;
                    Ok((BasicCommutator::Leaf(index), end))
                }
                _ => Err(err(pos, "expected `[` or generator")),
            }
        }
        let (c, end) = parse_at(s, 0)?;
        if end != s.len() {
            return Err(HallError::Parse {
                offset: end,
                message: String::from("trailing input"),
            });
        }
        Ok(c)
    }
}

/// The ordered basis of basic commutators of weight at most `max_weight`
/// on `rank` generators, optionally filtered to repeat-free commutators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HallBasis {
    rank: u32,
    max_weight: u32,
    repeat_free: bool,
    elements: Vec<BasicCommutator>,
}

impl HallBasis {
    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn repeat_free(&self) -> bool {
        self.repeat_free
    }

    pub fn elements(&self) -> &[BasicCommutator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Rebuilds a basis from serialized brackets, re-validating against a
    /// fresh enumeration (used by the on-disk cache).
    pub fn from_serials(
        rank: u32,
        max_weight: u32,
        repeat_free: bool,
        serials: &[String],
    ) -> Result<Self, HallError> {
        let parsed: Result<Vec<BasicCommutator>, HallError> =
            serials.iter().map(|s| s.parse()).collect();
        let basis = Self {
            rank,
            max_weight,
            repeat_free,
            elements: parsed?,
        };
        let fresh = generate(rank, max_weight, repeat_free);
        if basis != fresh {
            return Err(HallError::BadBasis(String::from(
                "serialized basis disagrees with enumeration",
            )));
        }
        Ok(basis)
    }
}

/// Enumerates the ordered basis. When `repeat_free` is set, commutators
/// whose leaves repeat a generator index are omitted (they vanish in
/// `RF(rank)`); the ordering conditions are still evaluated against the
/// full family.
pub fn generate(rank: u32, max_weight: u32, repeat_free: bool) -> HallBasis {
    assert!(rank >= 1 && max_weight >= 1, "rank and weight must be >= 1");

    let mut elements: Vec<BasicCommutator> = Vec::new();
    let mut index_of: BTreeMap<BasicCommutator, usize> = BTreeMap::new();
    // index range occupied by each weight, 1-based on weights
    let mut ranges: Vec<core::ops::Range<usize>> = Vec::new();

    for i in 1..=rank {
        elements.push(BasicCommutator::leaf(GeneratorIndex::new(i).unwrap()));
    }
    for (pos, c) in elements.iter().enumerate() {
        index_of.insert(c.clone(), pos);
    }
    ranges.push(0..elements.len());

    for w in 2..=max_weight {
        let mut fresh: Vec<(String, BasicCommutator)> = Vec::new();
        for wl in 1..=(w / 2) {
            let wr = w - wl;
            let left_range = ranges[(wl - 1) as usize].clone();
            let right_range = ranges[(wr - 1) as usize].clone();
            for l_idx in left_range {
                for j_idx in right_range.clone() {
                    if wl == wr && l_idx >= j_idx {
                        continue;
                    }
                    let ok = match &elements[j_idx] {
                        BasicCommutator::Leaf(_) => true,
                        BasicCommutator::Node { left: r, .. } => index_of[r.as_ref()] <= l_idx,
                    };
                    if !ok {
                        continue;
                    }
                    let c = BasicCommutator::node(elements[l_idx].clone(), elements[j_idx].clone());
                    fresh.push((c.serial(), c));
                }
            }
        }
        fresh.sort_by(|a, b| a.0.cmp(&b.0));
        let start = elements.len();
        for (_, c) in fresh {
            index_of.insert(c.clone(), elements.len());
            elements.push(c);
        }
        ranges.push(start..elements.len());
    }

    if repeat_free {
        elements.retain(|c| c.is_repeat_free());
    }

    HallBasis {
        rank,
        max_weight,
        repeat_free,
        elements,
    }
}

/// Möbius function of `m` by trial division; 0 on non-squarefree input.
fn moebius(mut m: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if m > 1 {
        mu = -mu;
    }
    mu
}

/// Witt's count of basic commutators of weight `w` on `n` generators:
/// `(1/w) Σ_{d | w} μ(d) n^{w/d}`.
pub fn witt(n: u32, w: u32) -> u64 {
    assert!(n >= 1 && w >= 1, "rank and weight must be >= 1");
    let mut total: i64 = 0;
    for d in 1..=w as u64 {
        if (w as u64).is_multiple_of(d) {
            total += moebius(d) * (n as i64).pow(w / d as u32);
        }
    }
    (total / w as i64) as u64
}

/// The component-count constant `C_n` from the recurrence
/// `C_2 = 0`, `C_{k+1} = C_k + Σ w(c_i)` over the basic commutators of
/// weight 2..k on k generators (repeat-filtered when requested).
pub fn c_constant(n: u32, repeat_free: bool) -> u64 {
    assert!(n >= 2, "defined for n >= 2");
    let mut c = 0u64;
    for k in 2..n {
        let basis = generate(k, k, repeat_free);
        c += basis
            .elements()
            .iter()
            .filter(|e| e.weight() >= 2)
            .map(|e| e.weight() as u64)
            .sum::<u64>();
    }
    c
}

// ---------------------------------------------------------------------------
// Decomposition into basic-commutator powers
// ---------------------------------------------------------------------------

/// Reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Rat {
    num: i128,
    den: i128,
}

impl Rat {
    fn int(v: i128) -> Self {
        Rat { num: v, den: 1 }
    }

    fn zero() -> Self {
        Rat::int(0)
    }

    fn is_zero(self) -> bool {
        self.num == 0
    }

    fn normalized(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = gcd_i128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let sign = if den < 0 { -1 } else { 1 };
        Rat {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    fn add(self, other: Rat) -> Rat {
        Rat::normalized(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }

    fn mul(self, other: Rat) -> Rat {
        Rat::normalized(self.num * other.num, self.den * other.den)
    }

    fn neg(self) -> Rat {
        Rat {
            num: -self.num,
            den: self.den,
        }
    }

    fn div(self, other: Rat) -> Rat {
        debug_assert!(!other.is_zero());
        Rat::normalized(self.num * other.den, self.den * other.num)
    }

    fn as_integer(self) -> Option<i128> {
        (self.den == 1).then_some(self.num)
    }
}

fn gcd_i128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b.max(1);
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Solves `Σ_c a_c · column_c = target` exactly; columns are sparse maps
/// over length-`w` monomials. Returns integer coefficients or `None` when
/// the system has no integral solution.
#[allow(clippy::needless_range_loop)]
fn solve_weight_block(
    columns: &[BTreeMap<Monomial, i64>],
    target: &BTreeMap<Monomial, i64>,
) -> Option<Vec<i64>> {
    let mut monos: BTreeSet<Monomial> = BTreeSet::new();
    for col in columns {
        monos.extend(col.keys().cloned());
    }
    monos.extend(target.keys().cloned());
    let monos: Vec<Monomial> = monos.into_iter().collect();
    let row_of: BTreeMap<&Monomial, usize> =
        monos.iter().enumerate().map(|(r, m)| (m, r)).collect();

    let rows = monos.len();
    let cols = columns.len();
    let mut a = alloc::vec![alloc::vec![Rat::zero(); cols]; rows];
    let mut b = alloc::vec![Rat::zero(); rows];
    for (c, col) in columns.iter().enumerate() {
        for (m, &v) in col {
            a[row_of[m]][c] = Rat::int(v as i128);
        }
    }
    for (m, &v) in target {
        b[row_of[m]] = Rat::int(v as i128);
    }

    // row echelon with column-major pivoting
    let mut pivot_row_of_col: Vec<Option<usize>> = alloc::vec![None; cols];
    let mut next_row = 0usize;
    for c in 0..cols {
        let Some(p) = (next_row..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(next_row, p);
        b.swap(next_row, p);
        let inv = a[next_row][c];
        for r in 0..rows {
            if r != next_row && !a[r][c].is_zero() {
                let factor = a[r][c].div(inv).neg();
                for cc in 0..cols {
                    let add = a[next_row][cc].mul(factor);
                    a[r][cc] = a[r][cc].add(add);
                }
                b[r] = b[r].add(b[next_row].mul(factor));
            }
        }
        pivot_row_of_col[c] = Some(next_row);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }

    // consistency: rows without pivots must have zero rhs
    for r in 0..rows {
        let is_pivot_row = pivot_row_of_col.iter().flatten().any(|&pr| pr == r);
        if !is_pivot_row && !b[r].is_zero() {
            return None;
        }
    }

    let mut out = alloc::vec![0i64; cols];
    for c in 0..cols {
        if let Some(r) = pivot_row_of_col[c] {
            let val = b[r].div(a[r][c]);
            let int = val.as_integer()?;
            out[c] = i64::try_from(int).ok()?;
        }
    }
    Some(out)
}

/// Restriction of a polynomial to its length-`w` terms.
fn terms_of_length(poly: &ReducedPolynomial, w: usize) -> BTreeMap<Monomial, i64> {
    poly.terms()
        .filter(|(m, _)| m.len() == w)
        .map(|(m, c)| (m.clone(), c))
        .collect()
}

/// Writes `gamma` as the ordered product `Π c_i^{a_i}` over the repeat-free
/// basis `generate(rank, rank, true)`, verified by the Magnus oracle: the
/// returned exponents satisfy `rf_equal(gamma, Π c_i^{a_i})`.
///
/// Weight-1 exponents always equal the exponent sums of `gamma`.
pub fn decompose(gamma: &Word, rank: u32) -> Result<Vec<(BasicCommutator, i64)>, HallError> {
    let basis = generate(rank, rank, true);
    decompose_in(&basis, gamma)
}

/// [`decompose`] against a pre-generated basis (must be the repeat-free
/// basis of maximal weight `rank` on `rank` generators).
pub fn decompose_in(
    basis: &HallBasis,
    gamma: &Word,
) -> Result<Vec<(BasicCommutator, i64)>, HallError> {
    let target = expand(gamma, basis.rank())?;
    decompose_expansion(basis, &target)
}

/// Decomposition straight from a reduced Magnus expansion: finds integer
/// exponents with `expand(Π c_i^{a_i}) = target`. This is how combed
/// coordinates too long to materialize as words are handled.
pub fn decompose_expansion(
    basis: &HallBasis,
    target: &ReducedPolynomial,
) -> Result<Vec<(BasicCommutator, i64)>, HallError> {
    if !basis.repeat_free() || basis.max_weight() != basis.rank() {
        return Err(HallError::BadBasis(String::from(
            "decomposition needs the repeat-free basis of max weight = rank",
        )));
    }
    let rank = basis.rank();
    if target.rank() != rank {
        return Err(HallError::Magnus(MagnusError::RankMismatch {
            left: target.rank(),
            right: rank,
        }));
    }
    let mut residual = target.clone();
    let mut exponents: Vec<i64> = alloc::vec![0; basis.len()];

    for w in 1..=rank {
        let block: Vec<usize> = (0..basis.len())
            .filter(|&i| basis.elements()[i].weight() == w)
            .collect();
        if block.is_empty() {
            continue;
        }

        if w == 1 {
            for &i in &block {
                let BasicCommutator::Leaf(g) = basis.elements()[i] else {
                    unreachable!("weight-1 elements are leaves");
                };
                exponents[i] = residual.coefficient(&crate::magnus::monomial_of(g));
            }
        } else {
            let columns: Vec<BTreeMap<Monomial, i64>> = block
                .iter()
                .map(|&i| {
                    expand(&basis.elements()[i].as_word(), rank)
                        .map(|p| terms_of_length(&p, w as usize))
                })
                .collect::<Result<_, _>>()?;
            let target = terms_of_length(&residual, w as usize);
            let solved = solve_weight_block(&columns, &target).ok_or_else(|| {
                HallError::Decomposition(alloc::format!(
                    "no integral solution at weight {w} (rank {rank})"
                ))
            })?;
            for (&i, a) in block.iter().zip(solved) {
                exponents[i] = a;
            }
        }

        // left-divide the residual by the weight-w partial product
        let mut correction = Word::empty();
        for &i in block.iter().rev() {
            if exponents[i] != 0 {
                correction = correction.concat(&basis.elements()[i].as_word().power(-exponents[i]));
            }
        }
        if !correction.is_empty() {
            residual = expand(&correction, rank)?.multiply(&residual)?;
        }
    }

    if !residual.is_one() {
        return Err(HallError::Decomposition(alloc::format!(
            "residual is not trivial after weight {rank}: {residual}"
        )));
    }

    Ok(basis.elements().iter().cloned().zip(exponents).collect())
}

/// The ordered product `Π c_i^{a_i}` realized as a word.
pub fn product_word(decomposition: &[(BasicCommutator, i64)]) -> Word {
    let mut out = Word::empty();
    for (c, a) in decomposition {
        if *a != 0 {
            out = out.concat(&c.as_word().power(*a));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_words::{Letter, Sign};
    use crate::magnus::{rf_equal, rf_trivial};
    use rand::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn serials(basis: &HallBasis) -> Vec<String> {
        basis.elements().iter().map(|c| c.serial()).collect()
    }

    #[test]
    fn small_bases_match_enumeration() {
        let b = generate(2, 2, false);
        assert_eq!(serials(&b), ["x1", "x2", "[x1,x2]"]);

        let b = generate(2, 3, false);
        assert_eq!(
            serials(&b),
            ["x1", "x2", "[x1,x2]", "[x1,[x1,x2]]", "[x2,[x1,x2]]"]
        );
        let weights: Vec<u32> = b.elements().iter().map(|c| c.weight()).collect();
        assert_eq!(weights, [1, 1, 2, 3, 3]);

        let b = generate(3, 2, true);
        assert_eq!(
            serials(&b),
            ["x1", "x2", "x3", "[x1,x2]", "[x1,x3]", "[x2,x3]"]
        );
    }

    #[test]
    fn weight_four_on_two_generators() {
        let b = generate(2, 4, false);
        let weight4: Vec<String> = b
            .elements()
            .iter()
            .filter(|c| c.weight() == 4)
            .map(|c| c.serial())
            .collect();
        assert_eq!(
            weight4,
            [
                "[x1,[x1,[x1,x2]]]",
                "[x2,[x1,[x1,x2]]]",
                "[x2,[x2,[x1,x2]]]"
            ]
        );
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt(2, 1), 2);
        assert_eq!(witt(2, 3), 2);
        assert_eq!(witt(3, 3), 8);
        assert_eq!(witt(2, 4), 3);
        assert_eq!(witt(3, 4), 18);
        assert_eq!(witt(4, 4), 60);
    }

    #[test]
    fn witt_matches_enumeration() {
        for n in 1..=4 {
            let basis = generate(n, 4, false);
            for weight in 1..=4 {
                let count = basis
                    .elements()
                    .iter()
                    .filter(|c| c.weight() == weight)
                    .count() as u64;
                assert_eq!(count, witt(n, weight), "n={n} w={weight}");
            }
        }
    }

    #[test]
    fn as_word_examples() {
        let i = |v| GeneratorIndex::new(v).unwrap();
        assert_eq!(BasicCommutator::leaf(i(1)).as_word(), w("x1"));
        let c12 = BasicCommutator::node(BasicCommutator::leaf(i(1)), BasicCommutator::leaf(i(2)));
        assert_eq!(c12.as_word(), w("x1 x2 x1^-1 x2^-1"));
        let nested = BasicCommutator::node(c12, BasicCommutator::leaf(i(3)));
        assert_eq!(
            nested.as_word(),
            w("x1 x2 x1^-1 x2^-1 x3 x2 x1 x2^-1 x1^-1 x3^-1")
        );
    }

    #[test]
    fn repeat_filtered_commutators_vanish_in_rf() {
        for n in 2..=4u32 {
            let basis = generate(n, 4.min(n + 1), false);
            for c in basis.elements() {
                if !c.is_repeat_free() {
                    assert!(
                        rf_trivial(&c.as_word(), n).unwrap(),
                        "{} should vanish in RF({n})",
                        c.serial()
                    );
                }
            }
        }
    }

    #[test]
    fn c_constant_values() {
        assert_eq!(c_constant(2, false), 0);
        assert_eq!(c_constant(3, false), 2);
        assert_eq!(c_constant(4, false), 32);
        // repeat-free: weight-w commutators on exactly w indices number
        // (w-1)!·C(k,w), so the k=3 layer contributes 3·2 + 2·3 = 12
        assert_eq!(c_constant(4, true), 14);
        assert!(c_constant(4, true) < c_constant(4, false));
    }

    #[test]
    fn serial_round_trip() {
        let basis = generate(3, 4, false);
        for c in basis.elements() {
            let parsed: BasicCommutator = c.serial().parse().unwrap();
            assert_eq!(&parsed, c);
        }
        assert!("[x1,".parse::<BasicCommutator>().is_err());
        assert!("x0".parse::<BasicCommutator>().is_err());
        assert!("[x1,x2]junk".parse::<BasicCommutator>().is_err());
    }

    #[test]
    fn from_serials_validates() {
        let basis = generate(3, 3, true);
        let texts = serials(&basis);
        let rebuilt = HallBasis::from_serials(3, 3, true, &texts).unwrap();
        assert_eq!(rebuilt, basis);
        let mut wrong = texts.clone();
        wrong.swap(0, 1);
        assert!(HallBasis::from_serials(3, 3, true, &wrong).is_err());
    }

    #[test]
    fn decompose_commutator_power() {
        let gamma = commutator(&w("x1"), &w("x2")).power(3);
        let decomposition = decompose(&gamma, 2).unwrap();
        let exps: Vec<i64> = decomposition.iter().map(|(_, a)| *a).collect();
        assert_eq!(exps, [0, 0, 3]);
        assert!(rf_equal(&gamma, &product_word(&decomposition), 2).unwrap());
    }

    #[test]
    fn decompose_abelian_case() {
        let gamma = w("x1").power(5);
        let decomposition = decompose(&gamma, 3).unwrap();
        for (c, a) in &decomposition {
            match c.serial().as_str() {
                "x1" => assert_eq!(*a, 5),
                _ => assert_eq!(*a, 0),
            }
        }
    }

    #[test]
    fn decompose_conjugate() {
        let gamma = w("x1 x2 x1^-1");
        let decomposition = decompose(&gamma, 2).unwrap();
        let exps: Vec<i64> = decomposition.iter().map(|(_, a)| *a).collect();
        assert_eq!(exps, [0, 1, 1]);
        assert!(rf_equal(&gamma, &product_word(&decomposition), 2).unwrap());
    }

    #[test]
    fn decompose_nested_bracket() {
        // [[x1,x2],x3] = [x3,[x1,x2]]^{-1} in the free group
        let c12 = commutator(&w("x1"), &w("x2"));
        let gamma = commutator(&c12, &w("x3"));
        let decomposition = decompose(&gamma, 3).unwrap();
        for (c, a) in &decomposition {
            match c.serial().as_str() {
                "[x3,[x1,x2]]" => assert_eq!(*a, -1),
                _ => assert_eq!(*a, 0, "unexpected exponent on {}", c.serial()),
            }
        }
    }

    #[test]
    fn decompose_soundness_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let rank = rng.random_range(2..=4);
            let len = rng.random_range(0..=12);
            let letters = (0..len)
                .map(|_| {
                    Letter::new(
                        GeneratorIndex::new(rng.random_range(1..=rank)).unwrap(),
                        if rng.random_bool(0.5) {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        },
                    )
                })
                .collect();
            let gamma = Word::new(letters);
            let decomposition = decompose(&gamma, rank).unwrap();
            assert!(
                rf_equal(&gamma, &product_word(&decomposition), rank).unwrap(),
                "decomposition of {gamma} at rank {rank}"
            );
            // weight-1 exponents are exponent sums
            for (c, a) in &decomposition {
                if let BasicCommutator::Leaf(g) = c {
                    assert_eq!(*a, gamma.exponent_sum(*g));
                }
            }
        }
    }
}
