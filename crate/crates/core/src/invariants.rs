//! Link-level invariants and the homotopy trivializing number.
//!
//! A link enters as a pure braid word or directly as a Habegger-Lin
//! normal form; the computed `n_h` refers to the closure. The disk
//! intersection number `n_d(L)` — the minimum of `Σ_{i<j} #(D_i ∩ D_j)`
//! over all collections of immersed disks in the 4-ball bounded by the
//! components — coincides with `n_h` identically, so results carry a
//! single set of bounds; no disk-level geometry is ever computed.
//!
//! Links in homology spheres are not modelled separately: every
//! computation happens on a representative in the 3-sphere, and `n_h` of
//! a homology-sphere link equals that of any link with the same
//! annuli-cobounding data (pairwise linking numbers and Milnor
//! invariants), so a faithful representative gives the same answer.
//!
//! * 1 component: `n_h = 0`.
//! * 2 components: `n_h = Λ`.
//! * 3 components: `n_h = Λ` if `Λ ≠ 0`; otherwise 2 if `μ₁₂₃ ≠ 0`,
//!   else 0.
//! * ≥ 4 components: certified bounds. The upper bound sums, over the
//!   coordinates `γ_k`, the best available bound on `RZ(γ_k)` (the
//!   basic-commutator witness chain, or the trivializing number of the
//!   coordinate word or of the assembled witness when those are smaller);
//!   the lower bound is `Λ`, lifted by 2 when a sublink with vanishing
//!   internal linking carries a non-vanishing distinct-index invariant.
//!   Both bounds are snapped to the parity of `Λ`, which `n_h` always has.
//!
//! The lower-bound lift rests on two facts recorded in the certificate:
//! restricting a trivializing sequence to a sublink keeps only the
//! crossing changes made inside it, and the first non-vanishing reduced-
//! Magnus coefficient (all shorter ones vanishing) is a well-defined
//! link-homotopy invariant of the closure. Since the certified sublink has
//! zero internal linking, those ≥ 2 changes are disjoint from every
//! linking-number change counted by `Λ`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::braids::{comb, comb_capped, comb_expansions, BraidError, HLNormalForm, PureBraidWord};
use crate::free_words::Word;
use crate::hall::{self, HallError};
use crate::magnus::{expand, MagnusError, Monomial, ReducedPolynomial};
use crate::trivializing::{rz_upper_of_decomposition, z_number};

/// Coordinate words longer than this skip the `Z`-refinement of the upper
/// bound (the cubic DP would dominate); the witness-chain bound is always
/// available.
pub const COORDINATE_Z_CAP: usize = 240;

/// Image cap for word-level combing inside [`nh`]; past it the coordinate
/// expansions are computed directly in the Magnus ring and the word-level
/// `Z` refinements are skipped.
pub const NH_IMAGE_CAP: usize = 1 << 16;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum InvariantsError {
    WrongComponentCount {
        expected: u32,
        got: u32,
    },
    Braid(BraidError),
    Hall(HallError),
    Magnus(MagnusError),
    /// A computed lower bound exceeded a computed upper bound; both are
    /// honestly derived, so this can only be an implementation bug.
    Internal(String),
}

impl fmt::Display for InvariantsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantsError::WrongComponentCount { expected, got } => {
                write!(f, "operation needs {expected} components, got {got}")
            }
            InvariantsError::Braid(e) => write!(f, "{e}"),
            InvariantsError::Hall(e) => write!(f, "{e}"),
            InvariantsError::Magnus(e) => write!(f, "{e}"),
            InvariantsError::Internal(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

impl core::error::Error for InvariantsError {}

impl From<BraidError> for InvariantsError {
    fn from(e: BraidError) -> Self {
        InvariantsError::Braid(e)
    }
}

impl From<HallError> for InvariantsError {
    fn from(e: HallError) -> Self {
        InvariantsError::Hall(e)
    }
}

impl From<MagnusError> for InvariantsError {
    fn from(e: MagnusError) -> Self {
        InvariantsError::Magnus(e)
    }
}

/// A link presentation: a pure braid (combed on demand) or a normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinkInput {
    Braid(PureBraidWord),
    NormalForm(HLNormalForm),
}

impl LinkInput {
    pub fn components(&self) -> u32 {
        match self {
            LinkInput::Braid(b) => b.strands(),
            LinkInput::NormalForm(hl) => hl.components(),
        }
    }

    pub fn normal_form(&self) -> Result<HLNormalForm, InvariantsError> {
        match self {
            LinkInput::Braid(b) => Ok(comb(b)?),
            LinkInput::NormalForm(hl) => Ok(hl.clone()),
        }
    }

    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        match self {
            LinkInput::Braid(b) => b.linking_matrix(),
            LinkInput::NormalForm(hl) => hl.linking_matrix(),
        }
    }
}

/// `Λ(L) = Σ_{i<j} |lk(L_i, L_j)|`, the elementary lower bound.
#[allow(clippy::needless_range_loop)]
pub fn lambda_of(link: &LinkInput) -> u64 {
    let m = link.linking_matrix();
    let n = m.len();
    let mut total = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            total += m[i][j].unsigned_abs();
        }
    }
    total
}

/// Milnor's triple linking number of a 3-component link, read as the
/// `X1X2` coefficient of the third combed coordinate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mu123 {
    pub value: i64,
    /// True when the pairwise linking matrix vanishes, which is the regime
    /// where the coefficient equals the closure's triple linking number;
    /// otherwise the raw coefficient is reported.
    pub well_defined: bool,
}

fn mu_of_expansion(gamma3: &ReducedPolynomial) -> i64 {
    let mono = Monomial::new(alloc::vec![1, 2]).expect("distinct indices");
    gamma3.coefficient(&mono)
}

/// Coordinate expansions, plus coordinate words whenever they stayed
/// affordable. The expansions alone determine everything except the
/// optional word-level `Z` refinements of the upper bound.
struct Coordinates {
    /// `expansions[k-2] = expand(γ_k, k-1)`.
    expansions: Vec<ReducedPolynomial>,
    words: Option<HLNormalForm>,
}

fn coordinates(link: &LinkInput) -> Result<Coordinates, InvariantsError> {
    match link {
        LinkInput::NormalForm(hl) => {
            let expansions = (2..=hl.components())
                .map(|k| expand(hl.gamma(k), k - 1))
                .collect::<Result<_, _>>()?;
            Ok(Coordinates {
                expansions,
                words: Some(hl.clone()),
            })
        }
        LinkInput::Braid(braid) => match comb_capped(braid, NH_IMAGE_CAP) {
            Ok(hl) => {
                let expansions = (2..=hl.components())
                    .map(|k| expand(hl.gamma(k), k - 1))
                    .collect::<Result<_, _>>()?;
                Ok(Coordinates {
                    expansions,
                    words: Some(hl),
                })
            }
            Err(BraidError::ImageTooLarge { .. }) => Ok(Coordinates {
                expansions: comb_expansions(braid)?,
                words: None,
            }),
            Err(e) => Err(e.into()),
        },
    }
}

pub fn mu123(link: &LinkInput) -> Result<Mu123, InvariantsError> {
    let n = link.components();
    if n != 3 {
        return Err(InvariantsError::WrongComponentCount {
            expected: 3,
            got: n,
        });
    }
    let value = match link {
        LinkInput::NormalForm(hl) => mu_of_expansion(&expand(hl.gamma(3), 2)?),
        LinkInput::Braid(braid) => mu_of_expansion(&comb_expansions(braid)?[1]),
    };
    let well_defined = link.linking_matrix().iter().flatten().all(|&v| v == 0);
    Ok(Mu123 {
        value,
        well_defined,
    })
}

/// One tagged fact in the provenance trail of an [`NhResult`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub kind: &'static str,
    pub detail: String,
}

impl Certificate {
    fn new(kind: &'static str, detail: String) -> Self {
        Self { kind, detail }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NhBounds {
    pub lower: u64,
    pub upper: u64,
    /// Present exactly when `lower == upper`.
    pub exact: Option<u64>,
}

impl NhBounds {
    fn exact(value: u64) -> Self {
        Self {
            lower: value,
            upper: value,
            exact: Some(value),
        }
    }
}

/// `n_h` (equivalently `n_d`) of a link together with the facts that
/// produced each bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NhResult {
    pub components: u32,
    pub lambda: u64,
    /// `n_h ≡ Λ (mod 2)`.
    pub parity: u8,
    pub nh: NhBounds,
    pub certificates: Vec<Certificate>,
}

impl NhResult {
    /// The disk intersection number; equal to `n_h` for every link.
    pub fn nd(&self) -> &NhBounds {
        &self.nh
    }
}

/// The worst-case constant with `Λ(L) ≤ n_h(L) ≤ Λ(L) + C_n` over all
/// `n`-component links (unfiltered recurrence).
pub fn nh_constant(n: u32) -> u64 {
    hall::c_constant(n, false)
}

/// Best certified bound on `RZ(γ_k)` for one coordinate, with how it was
/// found.
fn coordinate_bound(
    expansion: &ReducedPolynomial,
    gamma_word: Option<&Word>,
    rank: u32,
) -> Result<(u64, String), InvariantsError> {
    let basis = hall::generate(rank, rank, true);
    let decomposition = hall::decompose_expansion(&basis, expansion)?;
    let lemma = rz_upper_of_decomposition(&decomposition);
    let mut best = lemma.upper;
    let mut how = alloc::format!("commutator witness chain gives {}", lemma.upper);
    let mut candidates: Vec<(&str, &Word)> = alloc::vec![("assembled witness", &lemma.witness)];
    if let Some(word) = gamma_word {
        candidates.push(("coordinate word", word));
    }
    for (label, word) in candidates {
        if word.len() <= COORDINATE_Z_CAP {
            let z = z_number(word).value;
            if z < best {
                best = z;
                how = alloc::format!("Z of the {label} gives {z}");
            }
        }
    }
    Ok((best, how))
}

/// Scans for a sublink with vanishing internal linking that is not
/// link-homotopically trivial. Prefix sublinks `{1..k}` are read off the
/// normal form; 3-element sublinks are reached by strand deletion and are
/// only available for braid input.
fn find_nontriviality_certificate(
    link: &LinkInput,
    coords: &Coordinates,
    lk: &[Vec<i64>],
) -> Result<Option<Certificate>, InvariantsError> {
    let n = link.components();

    // prefix scan: once a linked pair appears every larger prefix has it
    for k in 2..=n {
        if (1..k).any(|i| lk[(i - 1) as usize][(k - 1) as usize] != 0) {
            break;
        }
        let poly = &coords.expansions[(k - 2) as usize];
        if let Some((mono, coef)) = poly.leading_nonconstant_term() {
            return Ok(Some(Certificate::new(
                "sublink-nontrivial",
                alloc::format!(
                    "components 1..{k} have zero pairwise linking and gamma{k} has first \
                     non-vanishing coefficient {coef} at {mono}; at least 2 crossing changes \
                     happen inside this sublink, disjoint from all linking-number changes"
                ),
            )));
        }
    }

    if let LinkInput::Braid(braid) = link {
        for i in 1..=n {
            for j in (i + 1)..=n {
                for k in (j + 1)..=n {
                    let internal_zero = lk[(i - 1) as usize][(j - 1) as usize] == 0
                        && lk[(i - 1) as usize][(k - 1) as usize] == 0
                        && lk[(j - 1) as usize][(k - 1) as usize] == 0;
                    if !internal_zero {
                        continue;
                    }
                    let mut sub = braid.clone();
                    for strand in (1..=n).rev() {
                        if strand != i && strand != j && strand != k {
                            sub = sub.delete_strand(strand)?;
                        }
                    }
                    let mu = mu_of_expansion(&comb_expansions(&sub)?[1]);
                    if mu != 0 {
                        return Ok(Some(Certificate::new(
                            "mu123-sublink",
                            alloc::format!(
                                "components {{{i},{j},{k}}} have zero pairwise linking and \
                                 triple linking number {mu}; at least 2 crossing changes happen \
                                 inside this sublink, disjoint from all linking-number changes"
                            ),
                        )));
                    }
                }
            }
        }
    }

    Ok(None)
}

/// The homotopy trivializing number: exact for up to three components,
/// certified bounds beyond.
pub fn nh(link: &LinkInput) -> Result<NhResult, InvariantsError> {
    let n = link.components();
    let lk = link.linking_matrix();
    let lambda = lambda_of(link);
    let parity = (lambda % 2) as u8;
    let mut certificates = alloc::vec![Certificate::new(
        "lambda",
        alloc::format!("sum of |lk(i,j)| over component pairs is {lambda}"),
    )];

    let nh = match n {
        1 => {
            certificates.push(Certificate::new(
                "knot",
                String::from("every knot is link-homotopically trivial"),
            ));
            NhBounds::exact(0)
        }
        2 => {
            certificates.push(Certificate::new(
                "two-components",
                alloc::format!("linking number is a complete invariant: n_h = Λ = {lambda}"),
            ));
            NhBounds::exact(lambda)
        }
        3 => {
            if lambda != 0 {
                certificates.push(Certificate::new(
                    "three-components-linked",
                    alloc::format!("Λ = {lambda} ≠ 0 forces n_h = Λ"),
                ));
                NhBounds::exact(lambda)
            } else {
                let mu = mu123(link)?.value;
                if mu != 0 {
                    certificates.push(Certificate::new(
                        "three-components-mu",
                        alloc::format!("Λ = 0 and μ₁₂₃ = {mu} ≠ 0 force n_h = 2"),
                    ));
                    NhBounds::exact(2)
                } else {
                    certificates.push(Certificate::new(
                        "three-components-trivial",
                        String::from("Λ = 0 and μ₁₂₃ = 0: the link is homotopically trivial"),
                    ));
                    NhBounds::exact(0)
                }
            }
        }
        _ => {
            let coords = coordinates(link)?;
            if coords.words.is_none() {
                certificates.push(Certificate::new(
                    "coordinate-words-skipped",
                    alloc::format!(
                        "combing produced words beyond {NH_IMAGE_CAP} letters; coordinate \
                         expansions were computed directly and word-level Z refinements skipped"
                    ),
                ));
            }

            let mut upper = 0u64;
            for k in 2..=n {
                let gamma_word = coords.words.as_ref().map(|hl| hl.gamma(k));
                let (bound, how) =
                    coordinate_bound(&coords.expansions[(k - 2) as usize], gamma_word, k - 1)?;
                if bound > 0 {
                    certificates.push(Certificate::new(
                        "coordinate-upper",
                        alloc::format!("gamma{k}: RZ ≤ {bound} ({how})"),
                    ));
                }
                upper += bound;
            }
            if upper % 2 != parity as u64 {
                upper -= 1;
                certificates.push(Certificate::new(
                    "parity-upper",
                    alloc::format!("upper bound lowered to {upper}: n_h ≡ Λ (mod 2)"),
                ));
            }

            let mut lower = lambda;
            if let Some(cert) = find_nontriviality_certificate(link, &coords, &lk)? {
                lower = lambda + 2;
                certificates.push(cert);
            }
            if matches!(link, LinkInput::NormalForm(_)) {
                certificates.push(Certificate::new(
                    "hl-sublink-scan-unavailable",
                    String::from(
                        "3-element sublink certificates need a braid presentation; only \
                         prefix sublinks were scanned",
                    ),
                ));
            }

            if lower > upper {
                return Err(InvariantsError::Internal(alloc::format!(
                    "lower bound {lower} exceeds upper bound {upper}"
                )));
            }
            NhBounds {
                lower,
                upper,
                exact: (lower == upper).then_some(lower),
            }
        }
    };

    Ok(NhResult {
        components: n,
        lambda,
        parity,
        nh,
        certificates,
    })
}
