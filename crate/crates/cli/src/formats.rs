//! Input sniffing and the JSON mirrors of the text formats.

use linkhom_core::braids::{HLNormalForm, PureBraidWord};
use linkhom_core::free_words::{Sign, Word};
use linkhom_core::invariants::{LinkInput, Mu123, NhResult};
use linkhom_core::seifert::{IntersectionReport, NullFormReport, SeifertMatrix};
use linkhom_core::trivializing::{RZBound, ZResult};
use serde::{Deserialize, Serialize};

use crate::CliError;

// ---------------------------------------------------------------------------
// JSON input mirrors
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct BraidJsonIn {
    strands: u32,
    #[serde(default)]
    letters: Vec<(u32, u32, i32)>,
}

#[derive(Deserialize)]
struct HlJsonIn {
    components: u32,
    #[serde(default)]
    gammas: Vec<String>,
}

fn braid_from_json(text: &str) -> Result<PureBraidWord, CliError> {
    let parsed: BraidJsonIn =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("bad braid JSON: {e}")))?;
    let letters = parsed
        .letters
        .iter()
        .map(|&(lower, upper, s)| {
            let sign = match s {
                1 => Sign::Plus,
                -1 => Sign::Minus,
                _ => return Err(CliError::input(format!("letter sign must be ±1, got {s}"))),
            };
            Ok(linkhom_core::braids::BraidLetter { lower, upper, sign })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    PureBraidWord::new(parsed.strands, letters).map_err(CliError::from)
}

fn hl_from_json(text: &str) -> Result<HLNormalForm, CliError> {
    let parsed: HlJsonIn = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("bad normal-form JSON: {e}")))?;
    let gammas = parsed
        .gammas
        .iter()
        .map(|s| s.parse::<Word>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::input(format!("bad gamma word: {e}")))?;
    HLNormalForm::new(parsed.components, gammas).map_err(CliError::from)
}

/// Parses link content: braid text (`strands:` …), normal-form text
/// (`components:` …), or the JSON mirror of either.
pub fn parse_link(text: &str) -> Result<LinkInput, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        if trimmed.contains("\"strands\"") {
            return Ok(LinkInput::Braid(braid_from_json(trimmed)?));
        }
        if trimmed.contains("\"components\"") {
            return Ok(LinkInput::NormalForm(hl_from_json(trimmed)?));
        }
        return Err(CliError::input(
            "JSON link must carry `strands` (braid) or `components` (normal form)".into(),
        ));
    }
    if trimmed.starts_with("strands:") {
        return Ok(LinkInput::Braid(trimmed.parse::<PureBraidWord>()?));
    }
    if trimmed.starts_with("components:") {
        return Ok(LinkInput::NormalForm(HLNormalForm::parse(trimmed)?));
    }
    Err(CliError::input(
        "link input must start with `strands:`, `components:`, or be a JSON mirror".into(),
    ))
}

pub fn parse_braid_input(text: &str) -> Result<PureBraidWord, CliError> {
    match parse_link(text)? {
        LinkInput::Braid(b) => Ok(b),
        LinkInput::NormalForm(_) => Err(CliError::input(
            "this command needs a braid presentation, got a normal form".into(),
        )),
    }
}

pub fn parse_matrix_input(text: &str) -> Result<SeifertMatrix, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let rows: Vec<Vec<i64>> = serde_json::from_str(trimmed)
            .map_err(|e| CliError::input(format!("bad matrix JSON: {e}")))?;
        return SeifertMatrix::new(rows).map_err(CliError::from);
    }
    SeifertMatrix::parse(trimmed).map_err(CliError::from)
}

// ---------------------------------------------------------------------------
// JSON output
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct NhBoundsJson {
    pub exact: Option<u64>,
    pub lower: u64,
    pub upper: u64,
}

#[derive(Serialize)]
pub struct CertificateJson {
    pub kind: String,
    pub detail: String,
}

#[derive(Serialize)]
pub struct NhJson {
    pub components: u32,
    pub lambda: u64,
    pub parity: u8,
    pub nh: NhBoundsJson,
    pub nd_equals_nh: bool,
    pub certificates: Vec<CertificateJson>,
}

impl From<&NhResult> for NhJson {
    fn from(r: &NhResult) -> Self {
        NhJson {
            components: r.components,
            lambda: r.lambda,
            parity: r.parity,
            nh: NhBoundsJson {
                exact: r.nh.exact,
                lower: r.nh.lower,
                upper: r.nh.upper,
            },
            nd_equals_nh: true,
            certificates: r
                .certificates
                .iter()
                .map(|c| CertificateJson {
                    kind: c.kind.to_string(),
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct PolyTermJson {
    pub mono: Vec<u32>,
    pub coef: i64,
}

/// The canonical polynomial listing: terms ordered by (length, lex).
pub fn poly_json(poly: &linkhom_core::magnus::ReducedPolynomial) -> Vec<PolyTermJson> {
    poly.terms()
        .map(|(m, c)| PolyTermJson {
            mono: m.indices().to_vec(),
            coef: c,
        })
        .collect()
}

#[derive(Serialize)]
pub struct LambdaJson {
    pub lambda: u64,
}

#[derive(Serialize)]
pub struct MuJson {
    pub mu123: i64,
    pub well_defined: bool,
}

impl From<Mu123> for MuJson {
    fn from(m: Mu123) -> Self {
        MuJson {
            mu123: m.value,
            well_defined: m.well_defined,
        }
    }
}

#[derive(Serialize)]
pub struct HlJson {
    pub components: u32,
    pub gammas: Vec<String>,
}

impl From<&HLNormalForm> for HlJson {
    fn from(hl: &HLNormalForm) -> Self {
        HlJson {
            components: hl.components(),
            gammas: hl.gammas().iter().map(|g| g.to_string()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
pub struct HallEntryJson {
    pub comm: String,
    pub weight: u32,
}

#[derive(Serialize)]
pub struct WittJson {
    pub witt: u64,
}

#[derive(Serialize)]
pub struct CConstantJson {
    pub c_constant: u64,
}

#[derive(Serialize)]
pub struct ZJson {
    pub value: u64,
    pub witness: Vec<usize>,
}

impl From<&ZResult> for ZJson {
    fn from(z: &ZResult) -> Self {
        ZJson {
            value: z.value,
            witness: z.witness_deletions.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct RzJson {
    pub upper: u64,
    pub witness: String,
    pub method: String,
}

impl From<&RZBound> for RzJson {
    fn from(b: &RZBound) -> Self {
        RzJson {
            upper: b.upper,
            witness: b.witness.to_string(),
            method: b.method.as_str().to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct IntersectionJson {
    pub det: i64,
    pub unimodular: bool,
}

#[derive(Serialize)]
pub struct SeifertJson {
    pub null_form: bool,
    pub diagnostic: Option<String>,
    pub intersection: IntersectionJson,
}

pub fn seifert_json(report: &NullFormReport, inter: &IntersectionReport) -> SeifertJson {
    SeifertJson {
        null_form: report.is_null_form,
        diagnostic: report.diagnostic.clone(),
        intersection: IntersectionJson {
            det: i64::try_from(inter.det).unwrap_or(i64::MAX),
            unimodular: inter.unimodular,
        },
    }
}

/// Parses a word argument, mapping grammar errors to input errors.
pub fn parse_word(text: &str) -> Result<Word, CliError> {
    text.parse::<Word>()
        .map_err(|e| CliError::input(format!("bad word: {e}")))
}

/// Rank guard shared by the word-level commands.
pub fn check_rank(rank: u32, cap: u32) -> Result<(), CliError> {
    if rank < 1 {
        return Err(CliError::input("rank must be >= 1".into()));
    }
    if rank > cap {
        return Err(CliError::input(format!(
            "rank {rank} exceeds the cap {cap}; pass --allow-large-rank to override"
        )));
    }
    Ok(())
}
