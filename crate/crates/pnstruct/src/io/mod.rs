//! File formats and the aggregated analysis report.

pub mod lpn;
pub mod pnml;
pub mod report;

use std::path::Path;

use thiserror::Error;

use crate::marking::Marking;
use crate::net::PetriNet;

pub use lpn::{parse_lpn, write_lpn, LpnError};
pub use pnml::{parse_pnml, write_pnml, PnmlError};
pub use report::{analyze, AnalysisReport};

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Lpn { path: String, source: LpnError },
    #[error("{path}: {source}")]
    Pnml { path: String, source: PnmlError },
}

/// Reads `.pnml` files as PNML and everything else as the line format. A
/// net without a name is named after the file stem.
pub fn read_net(path: &Path) -> Result<(PetriNet, Marking), ReadError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ReadError::Io { path: shown.clone(), source })?;
    let (net, m) = if path.extension().is_some_and(|e| e == "pnml") {
        parse_pnml(&text).map_err(|source| ReadError::Pnml { path: shown, source })?
    } else {
        parse_lpn(&text).map_err(|source| ReadError::Lpn { path: shown, source })?
    };
    if net.name().is_empty() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok((net.with_name(&stem), m));
    }
    Ok((net, m))
}
