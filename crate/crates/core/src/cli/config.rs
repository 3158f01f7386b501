use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Failure;
use crate::finger3d::DEFAULT_SLAB_MM;
use crate::imagecore::NOMINAL_PPI;
use crate::pipeline::{SweepSpec, DEFAULT_FG_THRESHOLD};
use crate::sauvola::SauvolaParams;

/// Values read from `--config`. Flags given on the command line win.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub sauvola: SauvolaParams,
    pub sweep: SweepSpec,
    /// Square canvas side, pixels.
    pub canvas: usize,
    /// Falls back to `FPFORGE_WORKERS`, then 1.
    pub workers: Option<usize>,
    pub quality_cmd: Option<PathBuf>,
    pub fg_threshold: f64,
    pub slab_mm: f64,
    pub ppi: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            sauvola: SauvolaParams::default(),
            sweep: SweepSpec::default(),
            canvas: 512,
            workers: None,
            quality_cmd: None,
            fg_threshold: DEFAULT_FG_THRESHOLD,
            slab_mm: DEFAULT_SLAB_MM,
            ppi: NOMINAL_PPI,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}
