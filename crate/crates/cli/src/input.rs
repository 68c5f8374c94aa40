use std::fmt;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use yulkit::ast::Block;
use yulkit::solc_json::convert;
use yulkit::syntax::parse_program;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Yul,
    SolcJson,
}

/// A program read from a file, with the hash of the exact bytes read.
pub struct Input {
    pub path: PathBuf,
    pub format: Format,
    pub sha256: String,
    pub block: Block,
}

/// Problems with the inputs themselves, as opposed to what they contain.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn read_text(path: &Path) -> Result<(String, String), InputError> {
    let bytes = std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| InputError(format!("{}: not UTF-8", path.display())))?;
    Ok((text, sha256))
}

/// JSON by extension, otherwise by content: a JSON object with at least one
/// key. `{}` is read as the empty Yul program.
fn detect(path: &Path, text: &str) -> (Format, Option<serde_json::Value>) {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => return (Format::SolcJson, serde_json::from_str(text).ok()),
        Some("yul") => return (Format::Yul, None),
        _ => {}
    }
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(value) if value.as_object().is_some_and(|o| !o.is_empty()) => (Format::SolcJson, Some(value)),
        _ => (Format::Yul, None),
    }
}

pub fn load(path: &Path) -> Result<Input, InputError> {
    let (text, sha256) = read_text(path)?;
    let (format, json) = detect(path, &text);
    let block = match format {
        Format::Yul => parse_program(&text).map_err(|e| InputError(format!("{}:{e}", path.display())))?,
        Format::SolcJson => {
            let json = json.ok_or_else(|| InputError(format!("{}: invalid JSON", path.display())))?;
            convert(&json).map_err(|e| InputError(format!("{}: {e}", path.display())))?
        }
    };
    Ok(Input {
        path: path.to_path_buf(),
        format,
        sha256,
        block,
    })
}
