use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    /// Malformed input or parameters outside the basic domain; exit 2.
    #[error("{0}")]
    Usage(String),
    /// A hypothesis, validation or consistency failure; exit 1.
    #[error("{0}")]
    Domain(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Domain(_) | Failure::Io { .. } => ExitCode::from(1),
        }
    }
}

/// The payload of a command and a one-line summary for stderr. A command
/// whose payload reports a failed check sets `failed`.
pub struct Output {
    pub body: String,
    pub note: Option<String>,
    pub failed: bool,
}

impl Output {
    pub fn json<T: Serialize>(value: &T) -> Self {
        let mut body = serde_json::to_string_pretty(value).expect("output serializes");
        body.push('\n');
        Self { body, note: None, failed: false }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|source| Failure::Io { path: path.display().to_string(), source })
}

pub fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|source| Failure::Io { path: path.display().to_string(), source })
}

#[derive(Serialize)]
struct RunManifest {
    tool: &'static str,
    version: &'static str,
    command: Vec<String>,
    seed: Option<u64>,
    output_sha256: String,
}

pub fn emit(out: &Output, to: Option<&Path>, manifest: Option<&Path>, seed: Option<u64>) -> Result<ExitCode, Failure> {
    match to {
        Some(path) => write(path, &out.body)?,
        None => print!("{}", out.body),
    }
    if let Some(note) = &out.note {
        eprintln!("{note}");
    }
    if let Some(path) = manifest {
        let m = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: std::env::args().skip(1).collect(),
            seed,
            output_sha256: hex::encode(Sha256::digest(out.body.as_bytes())),
        };
        write(path, &(serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n"))?;
    }
    Ok(if out.failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
