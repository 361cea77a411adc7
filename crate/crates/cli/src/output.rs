//! CSV assembly: one header line, LF endings, floats at 12 significant
//! digits, deterministic row order.

use std::io::Write;
use std::path::Path;

use crate::AppError;

/// Formats a float with 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// A CSV document accumulated in memory and written in one shot.
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Self {
            lines: vec![header.to_string()],
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.lines.push(cells.join(","));
    }

    pub fn write(self, out: Option<&Path>) -> Result<(), AppError> {
        let mut text = self.lines.join("\n");
        text.push('\n');
        match out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| AppError::Compute(format!("writing {}: {e}", path.display()))),
            None => match std::io::stdout().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(AppError::Compute(format!("writing stdout: {e}")))
                }
                _ => Ok(()),
            },
        }
    }
}
