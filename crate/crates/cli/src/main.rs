//! `linkhom` — link-homotopy invariants of pure-braid closures and
//! Habegger-Lin normal forms.
//!
//! Exit codes: 0 success, 1 input error, 2 internal assertion failure.

mod batch;
mod cache;
mod formats;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use linkhom_core::braids::{comb, BraidError};
use linkhom_core::hall::{c_constant, witt, HallError};
use linkhom_core::invariants::{lambda_of, mu123, nh, InvariantsError};
use linkhom_core::magnus::MagnusError;
use linkhom_core::seifert::{is_null_form, validate_intersection, SeifertError};
use linkhom_core::trivializing::{
    rz_search, rz_upper, z_number, TrivializingError, SEARCH_LEN_CAP,
};
use linkhom_core::DEFAULT_RANK_CAP;

use formats::{
    check_rank, parse_braid_input, parse_link, parse_matrix_input, parse_word, seifert_json,
    HallEntryJson, HlJson, LambdaJson, MuJson, NhJson, RzJson, WittJson, ZJson,
};

// ---------------------------------------------------------------------------
// Errors and exit codes
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub enum CliError {
    /// Bad input: parse errors, range violations, unreadable files. Exit 1.
    Input(String),
    /// Broken internal invariant. Exit 2.
    Internal(String),
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError::Input(message)
    }

    pub fn internal(message: String) -> Self {
        CliError::Internal(message)
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(1),
            CliError::Internal(_) => ExitCode::from(2),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<BraidError> for CliError {
    fn from(e: BraidError) -> Self {
        match e {
            BraidError::ConjugatorExtraction { .. } => CliError::internal(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<SeifertError> for CliError {
    fn from(e: SeifertError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<MagnusError> for CliError {
    fn from(e: MagnusError) -> Self {
        match e {
            MagnusError::BadSubstitution { .. } => CliError::internal(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<HallError> for CliError {
    fn from(e: HallError) -> Self {
        match e {
            HallError::Decomposition(_) | HallError::BadBasis(_) => {
                CliError::internal(e.to_string())
            }
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<TrivializingError> for CliError {
    fn from(e: TrivializingError) -> Self {
        match e {
            TrivializingError::Hall(inner) => inner.into(),
            TrivializingError::Magnus(inner) => inner.into(),
            TrivializingError::LengthCapExceeded { .. } => CliError::input(e.to_string()),
        }
    }
}

impl From<InvariantsError> for CliError {
    fn from(e: InvariantsError) -> Self {
        match e {
            InvariantsError::Internal(_) => CliError::internal(e.to_string()),
            InvariantsError::Braid(inner) => inner.into(),
            InvariantsError::Hall(inner) => inner.into(),
            InvariantsError::Magnus(inner) => inner.into(),
            InvariantsError::WrongComponentCount { .. } => CliError::input(e.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Argument grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "linkhom",
    about = "Link-homotopy invariants of pure-braid closures",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest ambient rank / component count accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_CAP)]
    rank_cap: u32,

    /// Permit --rank-cap beyond the built-in limit of 12.
    #[arg(long, global = true)]
    allow_large_rank: bool,

    /// Hall-basis cache directory (env: LINKHOM_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Seed for the bounded rewrite search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Homotopy trivializing number of the link in a file.
    Nh { link_file: PathBuf },
    /// Sum of absolute pairwise linking numbers.
    Lambda { link_file: PathBuf },
    /// Triple linking number of a 3-component link.
    Mu123 { link_file: PathBuf },
    /// Habegger-Lin normal form of a braid.
    Comb { braid_file: PathBuf },
    /// Ordered basis of basic commutators.
    Hall {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        weight: u32,
        /// Omit commutators that repeat a generator index.
        #[arg(long)]
        nonrepeating: bool,
    },
    /// Witt's count of basic commutators of one weight.
    Witt {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        weight: u32,
    },
    /// Reduced Magnus expansion of a word.
    Expand {
        word: String,
        #[arg(long)]
        rank: u32,
    },
    /// Trivializing number of a word (minimum letter deletions).
    Znumber { word: String },
    /// Upper bound on the reduced trivializing number.
    RzUpper {
        word: String,
        #[arg(long)]
        rank: u32,
        /// Refine by bounded rewriting with this expansion budget.
        #[arg(long, default_value_t = 0)]
        search_budget: usize,
        /// Length cap for rewritten representatives.
        #[arg(long, default_value_t = SEARCH_LEN_CAP)]
        search_max_len: usize,
    },
    /// The constant C_n with Λ ≤ n_h ≤ Λ + C_n.
    CConstant {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        nonrepeating: bool,
    },
    /// Null-form pattern check for a Seifert matrix.
    SeifertCheck { matrix_file: PathBuf },
    /// One nh result per line of a link list.
    Batch { file: PathBuf },
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn cache_dir(global: &GlobalArgs) -> PathBuf {
    global
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("LINKHOM_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| std::env::temp_dir().join("linkhom-hall-cache"))
}

/// Links with many components and large Hall enumerations are exact but
/// explosive; past these sizes the override flag is required.
pub(crate) const MAX_FREE_COMPONENTS: u32 = 8;
const MAX_FREE_BASIS_SIZE: u64 = 5_000_000;

fn component_guard(components: u32, global: &GlobalArgs) -> Result<(), CliError> {
    if components > MAX_FREE_COMPONENTS && !global.allow_large_rank {
        return Err(CliError::input(format!(
            "{components} components exceed the desk-scale limit {MAX_FREE_COMPONENTS} (decomposition grows super-exponentially); pass --allow-large-rank to proceed"
        )));
    }
    Ok(())
}

fn enumeration_guard(rank: u32, weight: u32, global: &GlobalArgs) -> Result<(), CliError> {
    let size: u64 = (1..=weight).map(|w| witt(rank, w)).sum();
    if size > MAX_FREE_BASIS_SIZE && !global.allow_large_rank {
        return Err(CliError::input(format!(
            "the requested basis has {size} elements, beyond the desk-scale limit {MAX_FREE_BASIS_SIZE}; pass --allow-large-rank to proceed"
        )));
    }
    Ok(())
}

fn effective_rank_cap(global: &GlobalArgs) -> Result<u32, CliError> {
    if global.rank_cap > DEFAULT_RANK_CAP && !global.allow_large_rank {
        return Err(CliError::input(format!(
            "--rank-cap {} exceeds the hard limit {DEFAULT_RANK_CAP}; pass --allow-large-rank",
            global.rank_cap
        )));
    }
    Ok(global.rank_cap)
}

fn emit<T: serde::Serialize>(global: &GlobalArgs, json_value: &T, text: String) {
    if global.json {
        println!(
            "{}",
            serde_json::to_string(json_value).expect("serializable output")
        );
    } else {
        println!("{text}");
    }
}

fn nh_text(result: &linkhom_core::invariants::NhResult) -> String {
    let mut out = String::new();
    out.push_str(&format!("components: {}\n", result.components));
    out.push_str(&format!("lambda: {}\n", result.lambda));
    out.push_str(&format!("parity: {}\n", result.parity));
    match result.nh.exact {
        Some(v) => out.push_str(&format!("n_h: {v} (exact)\n")),
        None => out.push_str(&format!(
            "n_h: in [{}, {}]\n",
            result.nh.lower, result.nh.upper
        )),
    }
    out.push_str("n_d: equals n_h\n");
    out.push_str("certificates:\n");
    for c in &result.certificates {
        out.push_str(&format!("  - {}: {}\n", c.kind, c.detail));
    }
    out.pop();
    out
}

// ---------------------------------------------------------------------------
// Command bodies
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<(), CliError> {
    let global = &cli.global;
    let rank_cap = effective_rank_cap(global)?;

    match cli.command {
        Command::Nh { link_file } => {
            let link = parse_link(&read_file(&link_file)?)?;
            check_rank(link.components(), rank_cap)?;
            component_guard(link.components(), global)?;
            let result = nh(&link)?;
            emit(global, &NhJson::from(&result), nh_text(&result));
        }
        Command::Lambda { link_file } => {
            let link = parse_link(&read_file(&link_file)?)?;
            check_rank(link.components(), rank_cap)?;
            let lambda = lambda_of(&link);
            emit(global, &LambdaJson { lambda }, format!("{lambda}"));
        }
        Command::Mu123 { link_file } => {
            let link = parse_link(&read_file(&link_file)?)?;
            let mu = mu123(&link)?;
            let text = if mu.well_defined {
                format!("{}", mu.value)
            } else {
                format!(
                    "{} (raw coefficient; pairwise linking is nonzero)",
                    mu.value
                )
            };
            emit(global, &MuJson::from(mu), text);
        }
        Command::Comb { braid_file } => {
            let braid = parse_braid_input(&read_file(&braid_file)?)?;
            check_rank(braid.strands(), rank_cap)?;
            let hl = comb(&braid)?;
            let text = hl.to_string();
            emit(global, &HlJson::from(&hl), text.trim_end().to_string());
        }
        Command::Hall {
            rank,
            weight,
            nonrepeating,
        } => {
            check_rank(rank, rank_cap)?;
            if weight < 1 {
                return Err(CliError::input("weight must be >= 1".into()));
            }
            enumeration_guard(rank, weight, global)?;
            let basis = cache::load_or_generate(&cache_dir(global), rank, weight, nonrepeating);
            let entries: Vec<HallEntryJson> = basis
                .elements()
                .iter()
                .map(|c| HallEntryJson {
                    comm: c.serial(),
                    weight: c.weight(),
                })
                .collect();
            let text = entries
                .iter()
                .map(|e| format!("{} {}", e.weight, e.comm))
                .collect::<Vec<_>>()
                .join("\n");
            emit(global, &entries, text);
        }
        Command::Witt { rank, weight } => {
            check_rank(rank, rank_cap)?;
            if weight < 1 {
                return Err(CliError::input("weight must be >= 1".into()));
            }
            let value = witt(rank, weight);
            emit(global, &WittJson { witt: value }, format!("{value}"));
        }
        Command::Expand { word, rank } => {
            let word = parse_word(&word)?;
            check_rank(rank, rank_cap)?;
            let poly = linkhom_core::magnus::expand(&word, rank)?;
            emit(global, &formats::poly_json(&poly), format!("{poly}"));
        }
        Command::Znumber { word } => {
            let word = parse_word(&word)?;
            let z = z_number(&word);
            emit(
                global,
                &ZJson::from(&z),
                format!(
                    "Z = {}; delete positions {}",
                    z.value,
                    linkhom_core::trivializing::deletions_string(&z)
                ),
            );
        }
        Command::RzUpper {
            word,
            rank,
            search_budget,
            search_max_len,
        } => {
            let gamma = parse_word(&word)?;
            check_rank(rank, rank_cap)?;
            if gamma.max_index() > rank {
                return Err(CliError::input(format!(
                    "word uses x{} beyond rank {rank}",
                    gamma.max_index()
                )));
            }
            let mut best = rz_upper(&gamma, rank)?;
            if search_budget > 0 {
                let searched = rz_search(&gamma, rank, search_max_len, search_budget, global.seed)?;
                if searched.upper < best.upper {
                    best = searched;
                }
            }
            emit(
                global,
                &RzJson::from(&best),
                format!(
                    "RZ <= {} via {}; witness: {}",
                    best.upper,
                    best.method.as_str(),
                    best.witness
                ),
            );
        }
        Command::CConstant { n, nonrepeating } => {
            if n < 2 {
                return Err(CliError::input("--n must be >= 2".into()));
            }
            check_rank(n, rank_cap)?;
            if n > 2 {
                enumeration_guard(n - 1, n - 1, global)?;
            }
            let value = c_constant(n, nonrepeating);
            emit(
                global,
                &formats::CConstantJson { c_constant: value },
                format!("{value}"),
            );
        }
        Command::SeifertCheck { matrix_file } => {
            let matrix = parse_matrix_input(&read_file(&matrix_file)?)?;
            let report = is_null_form(&matrix);
            let inter = validate_intersection(&matrix);
            let mut text = format!(
                "null form: {}",
                if report.is_null_form { "yes" } else { "no" }
            );
            if let Some(d) = &report.diagnostic {
                text.push_str(&format!("\nviolation: {d}"));
            }
            text.push_str(&format!(
                "\ndet(V - V^T) = {} ({})",
                inter.det,
                if inter.unimodular {
                    "unimodular"
                } else {
                    "warning: not ±1, degenerate as a Seifert matrix"
                }
            ));
            emit(global, &seifert_json(&report, &inter), text);
        }
        Command::Batch { file } => {
            let text = read_file(&file)?;
            batch::run_batch(&text, rank_cap);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
