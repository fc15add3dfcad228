//! Artifact routing: files under `--out DIR`, or the primary artifact on
//! stdout when no directory was given.

use crate::CliError;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Prints to stdout. A closed pipe (e.g. the consumer was `head`) ends the
/// run quietly with success, matching the usual batch-tool convention; any
/// other write failure is reported on stderr with the validation exit code.
pub fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        crate::report_error("validation", &format!("cannot write to stdout: {e}"));
        std::process::exit(2);
    }
}

/// [`emit`] plus a newline.
pub fn emit_line(text: &str) {
    emit(text);
    emit("\n");
}

pub struct Emitter {
    out: Option<PathBuf>,
}

impl Emitter {
    pub fn new(out: Option<PathBuf>) -> Self {
        Emitter { out }
    }

    /// Writes `text` as `name` under the output directory, or streams it to
    /// stdout when no directory was given.
    pub fn artifact(&self, name: &str, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(dir) => {
                let path = write_file(dir, name, text)?;
                emit_line(&format!("wrote {}", path.display()));
                Ok(())
            }
            None => {
                emit(text);
                Ok(())
            }
        }
    }

    /// Writes `text` as `name` only when an output directory was given;
    /// used by commands whose stdout already carries the same content in
    /// report form.
    pub fn file_only(&self, name: &str, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(dir) => {
                let path = write_file(dir, name, text)?;
                emit_line(&format!("wrote {}", path.display()));
                Ok(())
            }
            None => Ok(()),
        }
    }

    /// Prints a summary line, but stays silent when artifacts stream to
    /// stdout (a note would corrupt the artifact).
    pub fn note(&self, line: &str) {
        if self.out.is_some() {
            emit_line(line);
        }
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::File {
        path: dir.to_path_buf(),
        message: format!("cannot create output directory: {e}"),
    })?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| CliError::File {
        path: path.clone(),
        message: format!("cannot write: {e}"),
    })?;
    Ok(path)
}

/// Reads and parses a JSON input file.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: format!("cannot read: {e}"),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: format!("invalid JSON: {e}"),
    })
}

/// Renders a serializable report as pretty JSON with a trailing newline.
pub fn json_text<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::Invalid(format!("cannot serialize report: {e}")))
}
