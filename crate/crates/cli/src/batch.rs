//! Batch evaluation: one `nh` JSON result per input line.
//!
//! A line is either a path to a link file, an inline braid
//! (`strands:…`), an inline normal form (`components:…` with `;`
//! standing in for line breaks), or an inline JSON mirror. Failures are
//! isolated per line and never abort the batch; blank lines produce no
//! output.

use serde::Serialize;

use crate::formats::{parse_link, NhJson};
use crate::CliError;

#[derive(Serialize)]
struct BatchOk {
    line: usize,
    result: NhJson,
}

#[derive(Serialize)]
struct BatchErr {
    line: usize,
    error: String,
}

fn eval_line(line: &str, rank_cap: u32) -> Result<NhJson, CliError> {
    let link = if line.starts_with("strands:") || line.starts_with('{') {
        parse_link(line)?
    } else if line.starts_with("components:") {
        parse_link(&line.replace(';', "\n"))?
    } else {
        let text = std::fs::read_to_string(line)
            .map_err(|e| CliError::input(format!("cannot read {line}: {e}")))?;
        parse_link(&text)?
    };
    crate::formats::check_rank(link.components(), rank_cap)?;
    if link.components() > crate::MAX_FREE_COMPONENTS {
        return Err(CliError::input(format!(
            "{} components exceed the desk-scale limit {}",
            link.components(),
            crate::MAX_FREE_COMPONENTS
        )));
    }
    let result = linkhom_core::invariants::nh(&link)?;
    Ok(NhJson::from(&result))
}

/// Streams one JSON object per non-blank input line, in input order.
pub fn run_batch(text: &str, rank_cap: u32) {
    for (pos, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let number = pos + 1;
        let rendered = match eval_line(line, rank_cap) {
            Ok(result) => serde_json::to_string(&BatchOk {
                line: number,
                result,
            }),
            Err(e) => serde_json::to_string(&BatchErr {
                line: number,
                error: e.to_string(),
            }),
        };
        println!("{}", rendered.expect("serializable batch record"));
    }
}
