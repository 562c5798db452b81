//! CSV and JSON output with a provenance header.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{AppError, AppResult};

pub const TOOL: &str = "codeglass";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeSummary {
    pub label: String,
    /// `[[n,k,d]]` text.
    pub params: String,
}

/// Provenance written at the top of every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub codes: Vec<CodeSummary>,
    pub config: ExperimentConfig,
}

impl Header {
    pub fn new(command: &str, config: &ExperimentConfig, codes: Vec<CodeSummary>) -> Self {
        Self {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            config_hash: config.hash(),
            seed: config.seed,
            codes,
            config: config.clone(),
        }
    }

    fn comment_lines(&self) -> AppResult<String> {
        let mut out = String::new();
        out.push_str(&format!("# tool: {} {}\n", self.tool, self.version));
        out.push_str(&format!("# command: {}\n", self.command));
        out.push_str(&format!("# config_hash: {}\n", self.config_hash));
        out.push_str(&format!("# seed: {}\n", self.seed));
        for c in &self.codes {
            out.push_str(&format!("# code: {} {}\n", c.label, c.params));
        }
        out.push_str(&format!("# config: {}\n", serde_json::to_string(&self.config)?));
        Ok(out)
    }
}

/// Header comments followed by a CSV table of `rows`.
pub fn csv_string<R: Serialize>(header: &Header, rows: &[R]) -> AppResult<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in rows {
        writer.serialize(r)?;
    }
    let body = writer.into_inner().map_err(|e| AppError::Format(e.to_string()))?;
    Ok(header.comment_lines()? + &String::from_utf8(body).expect("csv output is utf-8"))
}

/// `{"header": ..., "body": ...}`.
pub fn json_string<B: Serialize>(header: &Header, body: &B) -> AppResult<String> {
    #[derive(Serialize)]
    struct Doc<'a, B> {
        header: &'a Header,
        body: &'a B,
    }
    Ok(serde_json::to_string_pretty(&Doc { header, body })? + "\n")
}

/// The CSV table of a file written by [`csv_string`], without header comments.
pub fn csv_body(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

pub fn write_file(path: &Path, contents: &str) -> AppResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    }
    let mut f = std::fs::File::create(path).map_err(|e| AppError::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| AppError::io(path, e))
}
