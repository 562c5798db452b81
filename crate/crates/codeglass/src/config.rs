//! Experiment configuration: code specifications plus run parameters.

use std::path::{Path, PathBuf};

use codeglass_core::codes::{self, Sector};
use codeglass_core::wegner::Budget;
use codeglass_core::StabilizerCode;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::codefile::CodeFile;
use crate::error::{AppError, AppResult};

/// A code by family name and parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CodeSpec {
    Toric { l: usize },
    /// Cyclic hypergraph product; polynomials as bit strings, lowest degree first.
    HpCyclic { h1: String, n1: usize, h2: String, n2: usize },
    DebierreTurban { l: usize, n1: usize, n2: usize },
    /// Hypergraph product of a random `(h, v)` matrix `H` with `Hᵀ`.
    Gallager { h: usize, v: usize, nc: usize, seed: u64 },
    /// Layered code over a toric inner code.
    Gauge { inner_l: usize, layers: usize },
    File { path: PathBuf },
}

impl CodeSpec {
    pub fn build(&self) -> AppResult<StabilizerCode> {
        Ok(match self {
            CodeSpec::Toric { l } => codes::toric(*l)?,
            CodeSpec::HpCyclic { h1, n1, h2, n2 } => {
                codes::cyclic_hp(&codes::parse_poly(h1)?, *n1, &codes::parse_poly(h2)?, *n2)?
            }
            CodeSpec::DebierreTurban { l, n1, n2 } => codes::debierre_turban(*l, *n1, *n2)?,
            CodeSpec::Gallager { h, v, nc, seed } => {
                let m = codes::gallager_ldpc(*h, *v, *nc, *seed)?;
                codes::hp_code(&m, &m.transpose())?
            }
            CodeSpec::Gauge { inner_l, layers } => codes::gauge_code(&codes::toric(*inner_l)?, *layers)?,
            CodeSpec::File { path } => CodeFile::load(path)?.to_code()?,
        })
    }

    /// Short label used in report rows.
    pub fn label(&self) -> String {
        match self {
            CodeSpec::Toric { l } => format!("toric-L{l}"),
            CodeSpec::HpCyclic { h1, n1, h2, n2 } => format!("hp-{h1}x{n1}-{h2}x{n2}"),
            CodeSpec::DebierreTurban { l, n1, n2 } => format!("dt-l{l}-{n1}x{n2}"),
            CodeSpec::Gallager { h, v, nc, seed } => format!("gallager-{h}-{v}-{nc}-s{seed}"),
            CodeSpec::Gauge { inner_l, layers } => format!("gauge-L{inner_l}x{layers}"),
            CodeSpec::File { path } => format!("file-{}", path.display()),
        }
    }
}

/// Enumeration limits, as powers of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetConfig {
    pub spin_log2: usize,
    pub coset_log2: usize,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        let b = Budget::default();
        Self { spin_log2: b.spin_log2, coset_log2: b.coset_log2 }
    }
}

impl From<BudgetConfig> for Budget {
    fn from(b: BudgetConfig) -> Self {
        Budget { spin_log2: b.spin_log2, coset_log2: b.coset_log2 }
    }
}

/// Every knob a command may read. Fields a command does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Codes in order; sweeps treat them as a family, smallest first.
    pub codes: Vec<CodeSpec>,
    pub sector: String,
    pub p_grid: Vec<f64>,
    /// Inverse temperatures; empty means the Nishimori temperature of each `p`.
    pub beta_grid: Vec<f64>,
    pub trials: u64,
    pub samples: u64,
    pub sweeps: usize,
    pub burn_in: Option<usize>,
    pub tempering: Vec<f64>,
    pub seed: u64,
    pub budget: BudgetConfig,
    /// Weight cap for exact distance search.
    pub distance_cap: usize,
    pub output: Option<PathBuf>,
    pub trace: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            codes: vec![CodeSpec::Toric { l: 2 }],
            sector: "X".into(),
            p_grid: vec![0.08, 0.09, 0.1, 0.11, 0.12, 0.13, 0.14],
            beta_grid: Vec::new(),
            trials: 2000,
            samples: 32,
            sweeps: 4000,
            burn_in: None,
            tempering: Vec::new(),
            seed: 1,
            budget: BudgetConfig::default(),
            distance_cap: 5,
            output: None,
            trace: false,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| AppError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn sector(&self) -> AppResult<Sector> {
        self.sector.parse().map_err(|_| AppError::Usage(format!("unknown sector {:?} (X, Z or full)", self.sector)))
    }

    pub fn budget(&self) -> Budget {
        self.budget.into()
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical))
    }

    pub fn validate(&self) -> AppResult<()> {
        if self.codes.is_empty() {
            return Err(AppError::Usage("no code given".into()));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(**p > 0.0 && **p < 0.5)) {
            return Err(AppError::Usage(format!("p = {p} outside (0, 1/2)")));
        }
        if let Some(b) = self.beta_grid.iter().find(|b| !(**b >= 0.0 && b.is_finite())) {
            return Err(AppError::Usage(format!("beta = {b} is not a finite nonnegative number")));
        }
        self.sector()?;
        Ok(())
    }
}
