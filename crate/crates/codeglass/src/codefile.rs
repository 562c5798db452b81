//! JSON code files. Each matrix row is its bytes in hex, bit `i` of the
//! row at bit `i % 8` of byte `i / 8`.

use std::collections::BTreeMap;
use std::path::Path;

use codeglass_core::gf2::{BinaryMatrix, BinaryVector};
use codeglass_core::StabilizerCode;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

pub const CODE_FORMAT: &str = "codeglass-code/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub format: String,
    pub n: usize,
    #[serde(flatten)]
    pub body: CodeBody,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeBody {
    /// Rows of `G_X` and `G_Z`, `n` bits each.
    Css { gx: Vec<String>, gz: Vec<String> },
    /// Rows of `G = (G_X | G_Z)`, `2n` bits each.
    General { generators: Vec<String> },
}

fn encode_rows(m: &BinaryMatrix) -> Vec<String> {
    m.row_vectors().iter().map(|r| hex::encode(r.to_bytes())).collect()
}

fn decode_rows(cols: usize, rows: &[String]) -> AppResult<BinaryMatrix> {
    let vectors = rows
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let bytes = hex::decode(h).map_err(|e| AppError::Format(format!("row {i}: {e}")))?;
            let v = BinaryVector::from_bytes(cols, &bytes).map_err(|e| AppError::Format(format!("row {i}: {e}")))?;
            // Padding bits past `cols` must be clear so the encoding is canonical.
            if v.to_bytes() != bytes {
                return Err(AppError::Format(format!("row {i}: bits set past column {cols}")));
            }
            Ok(v)
        })
        .collect::<AppResult<Vec<_>>>()?;
    Ok(BinaryMatrix::from_rows(cols, &vectors)?)
}

impl CodeFile {
    pub fn from_code(code: &StabilizerCode, metadata: BTreeMap<String, String>) -> Self {
        let body = match code.css_parts() {
            Some((gx, gz)) => CodeBody::Css { gx: encode_rows(gx), gz: encode_rows(gz) },
            None => CodeBody::General { generators: encode_rows(code.generators()) },
        };
        Self { format: CODE_FORMAT.into(), n: code.n(), body, metadata }
    }

    /// Rebuilds and revalidates the code.
    pub fn to_code(&self) -> AppResult<StabilizerCode> {
        if self.format != CODE_FORMAT {
            return Err(AppError::Format(format!("unknown format tag {:?}", self.format)));
        }
        Ok(match &self.body {
            CodeBody::Css { gx, gz } => StabilizerCode::new_css(decode_rows(self.n, gx)?, decode_rows(self.n, gz)?)?,
            CodeBody::General { generators } => StabilizerCode::new_stabilizer(decode_rows(2 * self.n, generators)?)?,
        })
    }

    pub fn save(&self, path: &Path) -> AppResult<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| AppError::io(path, e))
    }

    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use codeglass_core::codes;

    #[test]
    fn css_round_trip() {
        let code = codes::toric(3).unwrap();
        let file = CodeFile::from_code(&code, BTreeMap::new());
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.contains("\"kind\":\"css\""));
        let back: CodeFile = serde_json::from_str(&text).unwrap();
        let rebuilt = back.to_code().unwrap();
        assert_eq!(rebuilt.css_parts(), code.css_parts());
    }

    #[test]
    fn general_round_trip() {
        let g = BinaryMatrix::parse("1100;0011").unwrap();
        let code = StabilizerCode::new_stabilizer(g.clone()).unwrap();
        let file = CodeFile::from_code(&code, BTreeMap::new());
        assert_eq!(file.body, CodeBody::General { generators: vec!["03".into(), "0c".into()] });
        assert_eq!(file.to_code().unwrap().generators(), &g);
    }

    #[test]
    fn rejects_bad_rows() {
        let mut file = CodeFile::from_code(&codes::toric(2).unwrap(), BTreeMap::new());
        if let CodeBody::Css { gx, .. } = &mut file.body {
            gx[0] = "zz".into();
        }
        assert!(matches!(file.to_code(), Err(AppError::Format(_))));
        let mut padded = CodeFile::from_code(&codes::toric(2).unwrap(), BTreeMap::new());
        padded.n = 7;
        assert!(padded.to_code().is_err());
        let mut tagged = CodeFile::from_code(&codes::toric(2).unwrap(), BTreeMap::new());
        tagged.format = "other".into();
        assert!(tagged.to_code().is_err());
    }
}
