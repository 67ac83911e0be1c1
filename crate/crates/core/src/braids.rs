//! Pure braid words, the Artin action, and combing.
//!
//! A string link enters as a pure braid word in the generators `A(i,j)`
//! (`i < j`): the full twist of strands `i` and `j` passing in front of the
//! strands between them. Every string link is link-homotopic to a pure
//! braid, so this is a presentation of the whole group of string links up
//! to link homotopy; that representability fact is assumed, not re-proved.
//!
//! Conventions are pinned by tests rather than trusted constants:
//! `A(i,j)` is expanded through elementary braid generators
//! (`A(i,j) = σ_{j-1} ⋯ σ_{i+1} σ_i² σ_{i+1}^{-1} ⋯ σ_{j-1}^{-1}`), the
//! action is composed letter by letter, and the normalization
//! `comb(A(i,n)).γ_n = x_i`, `lk(A(1,2)) = +1` fixes all signs. Only
//! absolute values and (non-)vanishing of the resulting invariants are
//! contractually meaningful.
//!
//! [`comb`] peels one strand at a time: restrict to strands `1..k`, read
//! the Artin image of the top free generator `y_k` as a reduced conjugate
//! `w·y_k·w^{-1}`, and take `γ_k` to be `w` with `y_i ↦ x_i` (`i < k`) and
//! `y_k ↦ e`. The tuple `(γ₂, …, γₙ)`, each `γ_k` read in `RF(k-1)`, is
//! the Habegger-Lin normal form.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::free_words::{tokens, GeneratorIndex, Letter, Sign, Word};
use crate::magnus::{expand, ReducedPolynomial};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BraidError {
    Parse {
        offset: usize,
        message: String,
    },
    HlParse {
        line: usize,
        offset: usize,
        message: String,
    },
    StrandMismatch {
        left: u32,
        right: u32,
    },
    StrandOutOfRange {
        strand: u32,
        strands: u32,
    },
    /// The image of a top generator was not a reduced conjugate of itself;
    /// pure braids always fix each generator up to conjugacy, so this
    /// signals an implementation bug.
    ConjugatorExtraction {
        strand: u32,
        detail: String,
    },
    /// An Artin image outgrew the cap. Free-group images can be
    /// exponentially long in the braid length; coordinate *expansions*
    /// stay affordable via [`comb_expansions`].
    ImageTooLarge {
        len: usize,
        cap: usize,
    },
    Magnus(crate::magnus::MagnusError),
}

impl From<crate::magnus::MagnusError> for BraidError {
    fn from(e: crate::magnus::MagnusError) -> Self {
        BraidError::Magnus(e)
    }
}

impl fmt::Display for BraidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidError::Parse { offset, message } => {
                write!(f, "braid parse error at byte {offset}: {message}")
            }
            BraidError::HlParse {
                line,
                offset,
                message,
            } => write!(
                f,
                "normal-form parse error at line {line}, byte {offset}: {message}"
            ),
            BraidError::StrandMismatch { left, right } => {
                write!(f, "strand count mismatch: {left} vs {right}")
            }
            BraidError::StrandOutOfRange { strand, strands } => {
                write!(f, "strand {strand} out of range 1..={strands}")
            }
            BraidError::ConjugatorExtraction { strand, detail } => {
                write!(
                    f,
                    "conjugator extraction failed on strand {strand}: {detail}"
                )
            }
            BraidError::ImageTooLarge { len, cap } => {
                write!(f, "Artin image grew to {len} letters, beyond the cap {cap}")
            }
            BraidError::Magnus(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BraidError {}

/// One letter `A(i,j)^{±1}` with `1 ≤ i < j ≤ strands`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BraidLetter {
    pub lower: u32,
    pub upper: u32,
    pub sign: Sign,
}

impl BraidLetter {
    pub fn involves(&self, strand: u32) -> bool {
        self.lower == strand || self.upper == strand
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "A({},{})", self.lower, self.upper),
            Sign::Minus => write!(f, "A({},{})^-1", self.lower, self.upper),
        }
    }
}

/// A word in the pure braid generators on a fixed number of strands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PureBraidWord {
    strands: u32,
    letters: Vec<BraidLetter>,
}

impl PureBraidWord {
    pub fn identity(strands: u32) -> Self {
        assert!(strands >= 1);
        Self {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn new(strands: u32, letters: Vec<BraidLetter>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::StrandOutOfRange { strand: 0, strands });
        }
        for l in &letters {
            if !(1 <= l.lower && l.lower < l.upper && l.upper <= strands) {
                return Err(BraidError::StrandOutOfRange {
                    strand: l.upper.max(l.lower),
                    strands,
                });
            }
        }
        Ok(Self { strands, letters })
    }

    /// The generator `A(i,j)` on the given strand count.
    pub fn generator(strands: u32, i: u32, j: u32) -> Result<Self, BraidError> {
        Self::new(
            strands,
            alloc::vec![BraidLetter {
                lower: i,
                upper: j,
                sign: Sign::Plus,
            }],
        )
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Stacking: the letters of `self` followed by those of `other`.
    pub fn stack(&self, other: &PureBraidWord) -> Result<PureBraidWord, BraidError> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(PureBraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub fn inverse(&self) -> PureBraidWord {
        PureBraidWord {
            strands: self.strands,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| BraidLetter {
                    sign: l.sign.flip(),
                    ..*l
                })
                .collect(),
        }
    }

    /// Removes strand `k`: letters involving `k` disappear, higher indices
    /// shift down, the strand count drops by one.
    pub fn delete_strand(&self, k: u32) -> Result<PureBraidWord, BraidError> {
        if !(1 <= k && k <= self.strands) || self.strands == 1 {
            return Err(BraidError::StrandOutOfRange {
                strand: k,
                strands: self.strands,
            });
        }
        let shift = |s: u32| if s > k { s - 1 } else { s };
        Ok(PureBraidWord {
            strands: self.strands - 1,
            letters: self
                .letters
                .iter()
                .filter(|l| !l.involves(k))
                .map(|l| BraidLetter {
                    lower: shift(l.lower),
                    upper: shift(l.upper),
                    sign: l.sign,
                })
                .collect(),
        })
    }

    /// Restriction to strands `1..=k` by deleting the top strands.
    pub fn restrict(&self, k: u32) -> Result<PureBraidWord, BraidError> {
        let mut current = self.clone();
        while current.strands > k {
            current = current.delete_strand(current.strands)?;
        }
        Ok(current)
    }

    /// Symmetric matrix of signed `A(i,j)` letter counts; entry `(i,j)` is
    /// the linking number of components `i` and `j` of the closure.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.strands as usize;
        let mut m = alloc::vec![alloc::vec![0i64; n]; n];
        for l in &self.letters {
            let (i, j) = (l.lower as usize - 1, l.upper as usize - 1);
            m[i][j] += l.sign.as_i64();
            m[j][i] += l.sign.as_i64();
        }
        m
    }
}

/// `b1 · b2 · b1^{-1} · b2^{-1}` as a braid word.
pub fn braid_commutator(
    b1: &PureBraidWord,
    b2: &PureBraidWord,
) -> Result<PureBraidWord, BraidError> {
    b1.stack(b2)?.stack(&b1.inverse())?.stack(&b2.inverse())
}

impl fmt::Display for PureBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands:{}", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

fn parse_braid_letter(offset: usize, tok: &str, strands: u32) -> Result<BraidLetter, BraidError> {
    let err = |message: String| BraidError::Parse { offset, message };
    let body = tok
        .strip_prefix("A(")
        .ok_or_else(|| err(alloc::format!("expected `A(i,j)` token, got `{tok}`")))?;
    let (body, sign) = match body.strip_suffix("^-1") {
        Some(b) => (b, Sign::Minus),
        None => (body, Sign::Plus),
    };
    let body = body
        .strip_suffix(')')
        .ok_or_else(|| err(alloc::format!("missing `)` in `{tok}`")))?;
    let mut parts = body.split(',');
    let (Some(i), Some(j), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(err(alloc::format!("expected two indices in `{tok}`")));
    };
    let lower: u32 = i
        .parse()
        .map_err(|_| err(alloc::format!("bad strand index `{i}`")))?;
    let upper: u32 = j
        .parse()
        .map_err(|_| err(alloc::format!("bad strand index `{j}`")))?;
    if !(1 <= lower && lower < upper) {
        return Err(err(alloc::format!("requires 1 <= i < j in `{tok}`")));
    }
    if upper > strands {
        return Err(err(alloc::format!(
            "strand {upper} exceeds strand count {strands}"
        )));
    }
    Ok(BraidLetter { lower, upper, sign })
}

impl FromStr for PureBraidWord {
    type Err = BraidError;

    /// Grammar: first token `strands:<n>`, then whitespace-separated
    /// tokens `A(<i>,<j>)` or `A(<i>,<j>)^-1`, 1-based, `i < j <= n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut it = tokens(s);
        let Some((offset, head)) = it.next() else {
            return Err(BraidError::Parse {
                offset: 0,
                message: String::from("empty input; expected `strands:<n>`"),
            });
        };
        let strands: u32 = head
            .strip_prefix("strands:")
            .and_then(|v| v.parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| BraidError::Parse {
                offset,
                message: alloc::format!("expected `strands:<n>` with n >= 1, got `{head}`"),
            })?;
        let mut letters = Vec::new();
        for (offset, tok) in it {
            letters.push(parse_braid_letter(offset, tok, strands)?);
        }
        Ok(PureBraidWord { strands, letters })
    }
}

// ---------------------------------------------------------------------------
// Artin action
// ---------------------------------------------------------------------------

/// The images of the free generators `y_1, …, y_n` under a braid
/// automorphism. A pure braid sends each `y_k` to a conjugate of itself.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArtinAction {
    images: Vec<Word>,
}

impl ArtinAction {
    pub fn identity(n: u32) -> Self {
        Self {
            images: (1..=n)
                .map(|i| Word::generator(GeneratorIndex::new(i).unwrap()))
                .collect(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.images.len() as u32
    }

    /// Image of `y_k` (1-based), freely reduced.
    pub fn image(&self, k: u32) -> &Word {
        &self.images[(k - 1) as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Homomorphic substitution `y_i ↦ image(i)` applied to a word.
    pub fn apply(&self, word: &Word) -> Word {
        let mut out = Vec::new();
        for letter in word.letters() {
            let img = self.image(letter.index.get());
            match letter.sign {
                Sign::Plus => out.extend_from_slice(img.letters()),
                Sign::Minus => out.extend(img.inverse().letters().iter().copied()),
            }
        }
        Word::new(out).free_reduced()
    }

    /// The action of "`self` first, then `next`".
    pub fn then(&self, next: &ArtinAction) -> ArtinAction {
        ArtinAction {
            images: self.images.iter().map(|w| next.apply(w)).collect(),
        }
    }
}

/// Elementary Artin automorphism of `σ_r^{±1}` applied to a word:
/// a positive crossing sends `y_r ↦ y_r y_{r+1} y_r^{-1}`, `y_{r+1} ↦ y_r`.
fn apply_elementary(word: &Word, r: u32, sign: Sign) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len() * 2);
    let gi = |v: u32| GeneratorIndex::new(v).unwrap();
    for &letter in word.letters() {
        let idx = letter.index.get();
        let image: Vec<Letter> = match (sign, idx) {
            (Sign::Plus, i) if i == r => alloc::vec![
                Letter::new(gi(r), Sign::Plus),
                Letter::new(gi(r + 1), Sign::Plus),
                Letter::new(gi(r), Sign::Minus),
            ],
            (Sign::Plus, i) if i == r + 1 => alloc::vec![Letter::new(gi(r), Sign::Plus)],
            (Sign::Minus, i) if i == r => alloc::vec![Letter::new(gi(r + 1), Sign::Plus)],
            (Sign::Minus, i) if i == r + 1 => alloc::vec![
                Letter::new(gi(r + 1), Sign::Minus),
                Letter::new(gi(r), Sign::Plus),
                Letter::new(gi(r + 1), Sign::Plus),
            ],
            _ => alloc::vec![Letter::new(letter.index, Sign::Plus)],
        };
        match letter.sign {
            Sign::Plus => out.extend(image),
            Sign::Minus => out.extend(image.iter().rev().map(|l| l.inverse())),
        }
    }
    Word::new(out).free_reduced()
}

/// Expansion of `A(i,j)^{±1}` into elementary generators:
/// `σ_{j-1} ⋯ σ_{i+1} · σ_i^{±2} · σ_{i+1}^{-1} ⋯ σ_{j-1}^{-1}`.
fn elementary_expansion(letter: &BraidLetter) -> Vec<(u32, Sign)> {
    let mut out = Vec::new();
    for r in ((letter.lower + 1)..letter.upper).rev() {
        out.push((r, Sign::Plus));
    }
    out.push((letter.lower, letter.sign));
    out.push((letter.lower, letter.sign));
    for r in (letter.lower + 1)..letter.upper {
        out.push((r, Sign::Minus));
    }
    out
}

/// The action of a single `A(i,j)^{±1}`, computed through its elementary
/// expansion.
fn generator_action(strands: u32, letter: &BraidLetter) -> ArtinAction {
    let mut action = ArtinAction::identity(strands);
    for (r, sign) in elementary_expansion(letter) {
        for image in action.images.iter_mut() {
            *image = apply_elementary(image, r, sign);
        }
    }
    action
}

/// [`artin_action`] that fails once any image exceeds `cap` letters.
pub fn artin_action_capped(braid: &PureBraidWord, cap: usize) -> Result<ArtinAction, BraidError> {
    let mut cache: alloc::collections::BTreeMap<(u32, u32, Sign), ArtinAction> =
        alloc::collections::BTreeMap::new();
    let mut action = ArtinAction::identity(braid.strands());
    for letter in braid.letters() {
        let step = cache
            .entry((letter.lower, letter.upper, letter.sign))
            .or_insert_with(|| generator_action(braid.strands(), letter));
        action = action.then(step);
        if let Some(len) = action.images.iter().map(|w| w.len()).max() {
            if len > cap {
                return Err(BraidError::ImageTooLarge { len, cap });
            }
        }
    }
    Ok(action)
}

/// The Artin action of a braid word, composed letter by letter (first
/// letter acts first). The action of a stack is the composite of the
/// actions.
pub fn artin_action(braid: &PureBraidWord) -> ArtinAction {
    artin_action_capped(braid, usize::MAX).expect("uncapped")
}

// ---------------------------------------------------------------------------
// Habegger-Lin normal form
// ---------------------------------------------------------------------------

/// The tuple `(γ₂, …, γₙ)`; `γ_k` is a word over `x_1, …, x_{k-1}` read in
/// `RF(k-1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HLNormalForm {
    components: u32,
    gammas: Vec<Word>,
}

impl HLNormalForm {
    pub fn new(components: u32, gammas: Vec<Word>) -> Result<Self, BraidError> {
        if components == 0 {
            return Err(BraidError::HlParse {
                line: 0,
                offset: 0,
                message: String::from("component count must be >= 1"),
            });
        }
        if gammas.len() as u32 != components - 1 {
            return Err(BraidError::HlParse {
                line: 0,
                offset: 0,
                message: alloc::format!(
                    "expected {} coordinates for {components} components, got {}",
                    components - 1,
                    gammas.len()
                ),
            });
        }
        for (pos, gamma) in gammas.iter().enumerate() {
            let k = pos as u32 + 2;
            if gamma.max_index() >= k {
                return Err(BraidError::HlParse {
                    line: 0,
                    offset: 0,
                    message: alloc::format!(
                        "gamma{k} must use generators below x{k}, found x{}",
                        gamma.max_index()
                    ),
                });
            }
        }
        Ok(Self { components, gammas })
    }

    pub fn components(&self) -> u32 {
        self.components
    }

    /// Coordinate `γ_k`, `2 <= k <= components`.
    pub fn gamma(&self, k: u32) -> &Word {
        &self.gammas[(k - 2) as usize]
    }

    pub fn gammas(&self) -> &[Word] {
        &self.gammas
    }

    /// Linking numbers read off the coordinates:
    /// `lk(i, j) = exponent sum of x_i in γ_j` for `i < j`.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.components as usize;
        let mut m = alloc::vec![alloc::vec![0i64; n]; n];
        for j in 2..=self.components {
            let gamma = self.gamma(j);
            for i in 1..j {
                let v = gamma.exponent_sum(GeneratorIndex::new(i).unwrap());
                m[(i - 1) as usize][(j - 1) as usize] = v;
                m[(j - 1) as usize][(i - 1) as usize] = v;
            }
        }
        m
    }

    /// Parses the line-oriented form: `components:<n>`, then
    /// `gamma<k> = <word>` lines (`k = 2..n`; missing lines mean trivial).
    pub fn parse(text: &str) -> Result<Self, BraidError> {
        let mut components: Option<u32> = None;
        let mut words: Vec<Option<Word>> = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = line_no + 1;
            if line.is_empty() {
                continue;
            }
            let err = |offset: usize, message: String| BraidError::HlParse {
                line: lineno,
                offset,
                message,
            };
            let Some(n) = components else {
                let n = line
                    .strip_prefix("components:")
                    .and_then(|v| v.trim().parse::<u32>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| {
                        err(0, alloc::format!("expected `components:<n>`, got `{line}`"))
                    })?;
                components = Some(n);
                words = alloc::vec![None; (n - 1) as usize];
                continue;
            };
            let Some((lhs, rhs)) = line.split_once('=') else {
                return Err(err(0, String::from("expected `gamma<k> = <word>`")));
            };
            let k: u32 = lhs
                .trim()
                .strip_prefix("gamma")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| {
                    err(
                        0,
                        alloc::format!("expected `gamma<k>`, got `{}`", lhs.trim()),
                    )
                })?;
            if !(2 <= k && k <= n) {
                return Err(err(
                    0,
                    alloc::format!("gamma index {k} out of range 2..={n}"),
                ));
            }
            if words[(k - 2) as usize].is_some() {
                return Err(err(0, alloc::format!("duplicate gamma{k}")));
            }
            let word: Word = rhs
                .trim()
                .parse()
                .map_err(|e: crate::free_words::WordParseError| err(e.offset, e.message))?;
            words[(k - 2) as usize] = Some(word);
        }
        let Some(n) = components else {
            return Err(BraidError::HlParse {
                line: 0,
                offset: 0,
                message: String::from("missing `components:<n>` header"),
            });
        };
        let gammas: Vec<Word> = words
            .into_iter()
            .map(|w| w.unwrap_or_else(Word::empty))
            .collect();
        Self::new(n, gammas)
    }
}

impl fmt::Display for HLNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "components:{}", self.components)?;
        for k in 2..=self.components {
            writeln!(f, "gamma{k} = {}", self.gamma(k))?;
        }
        Ok(())
    }
}

/// Extracts `w` from a freely reduced conjugate `w · y_k · w^{-1}`.
fn extract_conjugator(image: &Word, k: u32) -> Result<Word, BraidError> {
    let letters = image.letters();
    let len = letters.len();
    let fail = |detail: String| BraidError::ConjugatorExtraction { strand: k, detail };
    if len.is_multiple_of(2) {
        return Err(fail(alloc::format!("even-length image `{image}`")));
    }
    let mid = len / 2;
    let centre = letters[mid];
    if centre.index.get() != k || centre.sign != Sign::Plus {
        return Err(fail(alloc::format!(
            "centre letter of `{image}` is not x{k}"
        )));
    }
    for q in 0..mid {
        if !letters[q].is_inverse_of(letters[len - 1 - q]) {
            return Err(fail(alloc::format!(
                "`{image}` is not of the form w·x{k}·w^-1"
            )));
        }
    }
    Ok(Word::new(letters[..mid].to_vec()))
}

/// Substitution `y_i ↦ x_i` for `i < k`, `y_k ↦ e`, then free reduction.
fn project_conjugator(conjugator: &Word, k: u32) -> Word {
    Word::new(
        conjugator
            .letters()
            .iter()
            .filter(|l| l.index.get() != k)
            .copied()
            .collect::<Vec<Letter>>(),
    )
    .free_reduced()
}

/// Artin combing: the Habegger-Lin coordinates of a pure braid.
///
/// For `k` from the top strand down to 2, the braid is restricted to
/// strands `1..k`, the Artin image of `y_k` is read as a reduced conjugate
/// `w·y_k·w^{-1}`, and `γ_k` is the projection of `w`. The extraction is
/// insensitive to the `y_k`-power ambiguity of the conjugator.
pub fn comb(braid: &PureBraidWord) -> Result<HLNormalForm, BraidError> {
    comb_capped(braid, IMAGE_LEN_CAP)
}

/// Default cap on intermediate Artin images during word-level combing.
pub const IMAGE_LEN_CAP: usize = 1 << 22;

/// [`comb`] with an explicit cap on intermediate image lengths.
pub fn comb_capped(braid: &PureBraidWord, cap: usize) -> Result<HLNormalForm, BraidError> {
    let n = braid.strands();
    let mut gammas_rev: Vec<Word> = Vec::new();
    let mut current = braid.clone();
    for k in (2..=n).rev() {
        current = current.restrict(k)?;
        let action = artin_action_capped(&current, cap)?;
        let image = action.image(k);
        debug_assert!(image.max_index() <= k);
        let conjugator = extract_conjugator(image, k)?;
        gammas_rev.push(project_conjugator(&conjugator, k));
    }
    gammas_rev.reverse();
    HLNormalForm::new(n, gammas_rev)
}

/// Reduced Magnus expansions of the combing coordinates, computed without
/// ever materializing coordinate words: position `k-2` holds
/// `expand(γ_k, k-1)`.
///
/// Processing the `k`-strand sub-braid letter by letter, a letter
/// `A(i,k)^{±1}` right-multiplies the running expansion by `1 ± X_i`,
/// while a letter not touching strand `k` acts through the substitution
/// endomorphism of its `(k-1)`-strand Artin action. Cost stays polynomial
/// in the ring size no matter how long the coordinate words would be.
pub fn comb_expansions(braid: &PureBraidWord) -> Result<Vec<ReducedPolynomial>, BraidError> {
    let n = braid.strands();
    let mut out: Vec<ReducedPolynomial> = Vec::new();
    for k in 2..=n {
        let rank = k - 1;
        let sub = braid.restrict(k)?;
        let mut cache: alloc::collections::BTreeMap<(u32, u32, Sign), Vec<ReducedPolynomial>> =
            alloc::collections::BTreeMap::new();
        let mut poly = ReducedPolynomial::one(rank);
        for letter in sub.letters() {
            if letter.upper == k {
                let step = Word::generator(GeneratorIndex::new(letter.lower).unwrap())
                    .power(letter.sign.as_i64());
                poly = poly.multiply(&expand(&step, rank)?)?;
            } else {
                let images = match cache.entry((letter.lower, letter.upper, letter.sign)) {
                    alloc::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        let action = generator_action(rank, letter);
                        let images: Result<Vec<ReducedPolynomial>, BraidError> = (1..=rank)
                            .map(|t| expand(action.image(t), rank).map_err(BraidError::from))
                            .collect();
                        e.insert(images?)
                    }
                };
                poly = poly.substitute(images)?;
            }
        }
        out.push(poly);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::rf_equal;
    use alloc::string::ToString;
    use rand::prelude::*;

    fn braid(s: &str) -> PureBraidWord {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn random_braid(rng: &mut impl Rng, strands: u32, len: usize) -> PureBraidWord {
        let letters = (0..len)
            .map(|_| {
                let lower = rng.random_range(1..strands);
                let upper = rng.random_range(lower + 1..=strands);
                BraidLetter {
                    lower,
                    upper,
                    sign: if rng.random_bool(0.5) {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    },
                }
            })
            .collect();
        PureBraidWord::new(strands, letters).unwrap()
    }

    #[test]
    fn parse_examples() {
        let b = braid("strands:3 A(1,3)");
        assert_eq!(b.strands(), 3);
        assert_eq!(b.letters().len(), 1);
        assert_eq!(b.letters()[0].sign, Sign::Plus);

        let b = braid("strands:2 A(1,2)^-1 A(1,2)^-1");
        assert_eq!(b.letters().len(), 2);
        assert!(b.letters().iter().all(|l| l.sign == Sign::Minus));

        assert!("strands:3 A(3,1)".parse::<PureBraidWord>().is_err());
        assert!("strands:3 A(1,4)".parse::<PureBraidWord>().is_err());
        assert!("A(1,2)".parse::<PureBraidWord>().is_err());
        let err = "strands:3 A(1,2) A(2,2)"
            .parse::<PureBraidWord>()
            .unwrap_err();
        assert!(matches!(err, BraidError::Parse { offset: 17, .. }));
    }

    #[test]
    fn display_round_trip() {
        for s in ["strands:1", "strands:3 A(1,3) A(2,3)^-1 A(1,2)"] {
            assert_eq!(braid(s).to_string(), s);
        }
    }

    #[test]
    fn stack_and_linking() {
        let a = braid("strands:2 A(1,2)");
        let doubled = a.stack(&a).unwrap();
        assert_eq!(doubled.letters().len(), 2);
        assert_eq!(a.stack(&PureBraidWord::identity(2)).unwrap(), a);
        assert!(a.stack(&PureBraidWord::identity(3)).is_err());

        let b1 = braid("strands:3 A(1,2) A(1,3)^-1");
        let b2 = braid("strands:3 A(1,2) A(2,3)");
        let stacked = b1.stack(&b2).unwrap();
        let m1 = b1.linking_matrix();
        let m2 = b2.linking_matrix();
        let ms = stacked.linking_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(ms[i][j], m1[i][j] + m2[i][j]);
            }
        }
    }

    #[test]
    fn linking_matrix_examples() {
        let b = braid("strands:2 A(1,2) A(1,2) A(1,2)");
        assert_eq!(b.linking_matrix()[0][1], 3);

        let a13 = braid("strands:3 A(1,3)");
        let a23 = braid("strands:3 A(2,3)");
        let comm = braid_commutator(&a13, &a23).unwrap();
        assert!(comm.linking_matrix().iter().flatten().all(|&v| v == 0));
    }

    #[test]
    fn delete_strand_examples() {
        let b = braid("strands:3 A(1,3) A(1,2)");
        assert_eq!(b.delete_strand(3).unwrap(), braid("strands:2 A(1,2)"));

        let b = braid("strands:3 A(1,2)");
        assert_eq!(b.delete_strand(1).unwrap(), PureBraidWord::identity(2));

        // adding an untouched top strand and deleting it is the identity
        let b = braid("strands:3 A(1,2) A(1,2)^-1 A(2,3)");
        let lifted = PureBraidWord::new(4, b.letters().to_vec()).unwrap();
        assert_eq!(lifted.delete_strand(4).unwrap(), b);

        assert!(b.delete_strand(4).is_err());
    }

    #[test]
    fn artin_action_basics() {
        let id = artin_action(&PureBraidWord::identity(3));
        assert_eq!(id, ArtinAction::identity(3));

        // A(1,2): each image is a conjugate with the exponent preserved
        let act = artin_action(&braid("strands:2 A(1,2)"));
        assert_eq!(act.image(2), &w("x1 x2 x1^-1"));
        assert_eq!(act.image(1), &w("x1 x2 x1 x2^-1 x1^-1"));
        for k in 1..=2u32 {
            let gi = GeneratorIndex::new(k).unwrap();
            assert_eq!(act.image(k).exponent_sum(gi), 1);
        }
    }

    #[test]
    fn action_of_inverse_cancels() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let len = rng.random_range(0..=6);
            let b = random_braid(&mut rng, 4, len);
            let both = b.stack(&b.inverse()).unwrap();
            assert_eq!(artin_action(&both), ArtinAction::identity(4));
        }
    }

    #[test]
    fn action_functoriality() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..30 {
            let len1 = rng.random_range(0..=6);
            let b1 = random_braid(&mut rng, 4, len1);
            let len2 = rng.random_range(0..=6);
            let b2 = random_braid(&mut rng, 4, len2);
            let stacked = b1.stack(&b2).unwrap();
            assert_eq!(
                artin_action(&stacked),
                artin_action(&b1).then(&artin_action(&b2))
            );
        }
    }

    #[test]
    fn action_preserves_boundary_loop() {
        // every braid automorphism fixes y1 y2 ... yn
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        let boundary: Word = w("x1 x2 x3 x4");
        for _ in 0..30 {
            let len = rng.random_range(0..=8);
            let b = random_braid(&mut rng, 4, len);
            assert_eq!(artin_action(&b).apply(&boundary), boundary);
        }
    }

    #[test]
    fn commuting_generator_pairs_act_equally() {
        // disjoint and nested index pairs commute in the pure braid group
        for (a, b) in [
            ("strands:4 A(1,2)", "strands:4 A(3,4)"),
            ("strands:4 A(1,4)", "strands:4 A(2,3)"),
        ] {
            let (a, b) = (braid(a), braid(b));
            let ab = a.stack(&b).unwrap();
            let ba = b.stack(&a).unwrap();
            assert_eq!(artin_action(&ab), artin_action(&ba));
        }
    }

    #[test]
    fn comb_normalization() {
        // comb(A(i,n)).gamma_n = x_i, all other coordinates trivial
        for n in 2..=5u32 {
            for i in 1..n {
                let b = PureBraidWord::generator(n, i, n).unwrap();
                let hl = comb(&b).unwrap();
                assert_eq!(
                    hl.gamma(n),
                    &Word::generator(GeneratorIndex::new(i).unwrap()),
                    "A({i},{n})"
                );
                for k in 2..n {
                    assert!(hl.gamma(k).is_empty(), "A({i},{n}) gamma{k}");
                }
            }
        }
    }

    #[test]
    fn comb_examples() {
        let hl = comb(&braid("strands:3 A(1,3)")).unwrap();
        assert!(hl.gamma(2).is_empty());
        assert_eq!(hl.gamma(3), &w("x1"));

        for m in 1..=4i64 {
            let mut b = PureBraidWord::identity(2);
            for _ in 0..m {
                b = b.stack(&braid("strands:2 A(1,2)")).unwrap();
            }
            assert_eq!(comb(&b).unwrap().gamma(2), &w("x1").power(m));
        }
    }

    #[test]
    fn comb_borromean_commutator() {
        let a13 = braid("strands:3 A(1,3)");
        let a23 = braid("strands:3 A(2,3)");
        let b = braid_commutator(&a13, &a23).unwrap();
        let hl = comb(&b).unwrap();
        assert!(hl.gamma(2).is_empty());
        assert!(rf_equal(
            hl.gamma(3),
            &crate::free_words::commutator(&w("x1"), &w("x2")),
            2
        )
        .unwrap());
    }

    #[test]
    fn comb_linking_consistency() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
        for _ in 0..100 {
            let strands = rng.random_range(2..=4);
            let len = rng.random_range(0..=10);
            let b = random_braid(&mut rng, strands, len);
            let hl = comb(&b).unwrap();
            assert_eq!(hl.linking_matrix(), b.linking_matrix());
        }
    }

    #[test]
    fn comb_is_rf_stable_under_trivial_insertions() {
        // inserting A(i,j) A(i,j)^-1 leaves every coordinate rf-equal
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(45);
        for _ in 0..25 {
            let len = rng.random_range(0..=8);
            let b = random_braid(&mut rng, 4, len);
            let hl = comb(&b).unwrap();
            let mut letters = b.letters().to_vec();
            let at = rng.random_range(0..=letters.len());
            let lower = rng.random_range(1..4);
            let upper = rng.random_range(lower + 1..=4);
            letters.insert(
                at,
                BraidLetter {
                    lower,
                    upper,
                    sign: Sign::Plus,
                },
            );
            letters.insert(
                at + 1,
                BraidLetter {
                    lower,
                    upper,
                    sign: Sign::Minus,
                },
            );
            let padded = PureBraidWord::new(4, letters).unwrap();
            let hl2 = comb(&padded).unwrap();
            for k in 2..=4u32 {
                assert!(rf_equal(hl.gamma(k), hl2.gamma(k), k - 1).unwrap());
            }
        }
    }

    #[test]
    fn conjugator_extraction_mods_out_centre_powers() {
        // u y_k u^{-1} and (u y_k^p) y_k (u y_k^p)^{-1} reduce to the same
        // word, and the projection kills the ambiguity
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(46);
        let k = 3u32;
        for _ in 0..100 {
            let len = rng.random_range(0..=8);
            let letters = (0..len)
                .map(|_| {
                    Letter::new(
                        GeneratorIndex::new(rng.random_range(1..=k)).unwrap(),
                        if rng.random_bool(0.5) {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        },
                    )
                })
                .collect();
            let u = Word::new(letters);
            let yk = Word::generator(GeneratorIndex::new(k).unwrap());
            for p in [-2i64, 0, 1] {
                let conj = u
                    .concat(&yk.power(p))
                    .concat(&yk)
                    .concat(&yk.power(p).inverse())
                    .concat(&u.inverse())
                    .free_reduced();
                let extracted = extract_conjugator(&conj, k).unwrap();
                assert_eq!(project_conjugator(&extracted, k), project_conjugator(&u, k));
            }
        }
    }

    #[test]
    fn hl_parse_and_display() {
        let text = "components:3\ngamma3 = x1 x2 x1^-1 x2^-1\n";
        let hl = HLNormalForm::parse(text).unwrap();
        assert_eq!(hl.components(), 3);
        assert!(hl.gamma(2).is_empty());
        assert_eq!(hl.gamma(3), &w("x1 x2 x1^-1 x2^-1"));

        let round = HLNormalForm::parse(&hl.to_string()).unwrap();
        assert_eq!(round, hl);

        assert!(HLNormalForm::parse("gamma2 = x1").is_err());
        assert!(HLNormalForm::parse("components:2\ngamma2 = x5").is_err());
        assert!(HLNormalForm::parse("components:2\ngamma3 = x1").is_err());
        assert!(HLNormalForm::parse("components:2\ngamma2 = x1\ngamma2 = x1").is_err());
    }

    #[test]
    fn polynomial_combing_matches_word_combing() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(49);
        for _ in 0..60 {
            let strands = rng.random_range(2..=4);
            let len = rng.random_range(0..=8);
            let b = random_braid(&mut rng, strands, len);
            let hl = comb(&b).unwrap();
            let polys = comb_expansions(&b).unwrap();
            for k in 2..=strands {
                assert_eq!(
                    polys[(k - 2) as usize],
                    expand(hl.gamma(k), k - 1).unwrap(),
                    "coordinate {k} of {b}"
                );
            }
        }
    }

    #[test]
    fn capped_combing_reports_blowup() {
        // nested commutators of commutators inflate the images fast
        let a = braid("strands:3 A(1,3)");
        let b = braid("strands:3 A(2,3)");
        let c1 = braid_commutator(&a, &b).unwrap();
        let c2 = braid_commutator(&c1, &a).unwrap();
        let c3 = braid_commutator(&c2, &c1).unwrap();
        let big = braid_commutator(&c3, &c2).unwrap();
        match comb_capped(&big, 1000) {
            Err(BraidError::ImageTooLarge { .. }) => {}
            other => panic!("expected ImageTooLarge, got {other:?}"),
        }
        // the polynomial route still goes through
        let polys = comb_expansions(&big).unwrap();
        assert_eq!(polys.len(), 2);
    }

    #[test]
    fn combed_coordinates_respect_rank_bound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let len = rng.random_range(0..=10);
            let b = random_braid(&mut rng, 5, len);
            let hl = comb(&b).unwrap();
            for k in 2..=5u32 {
                assert!(hl.gamma(k).max_index() < k);
            }
        }
    }
}
