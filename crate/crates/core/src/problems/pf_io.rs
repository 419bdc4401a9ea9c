//! Plain-text reference-front format: one point per line, objective values
//! whitespace-separated, 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use super::PfReference;
use crate::mop::ObjectiveVector;

/// Formats a float with 17 significant digits, enough to round-trip f64
/// exactly and free of locale effects.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_pf_text(reference: &PfReference) -> String {
    let mut out = String::new();
    for point in reference.points() {
        let mut first = true;
        for value in point.values() {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{}", format_f64(*value));
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn parse_pf_text(text: &str) -> Result<PfReference, String> {
    let mut points = Vec::new();
    let mut width = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|e| format!("line {}: '{tok}': {e}", lineno + 1))
            })
            .collect::<Result<_, _>>()?;
        if values.len() < 2 {
            return Err(format!("line {}: expected at least 2 objectives", lineno + 1));
        }
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(format!(
                    "line {}: {} objectives, earlier lines had {w}",
                    lineno + 1,
                    values.len()
                ));
            }
            _ => {}
        }
        points.push(ObjectiveVector::new(values));
    }
    if points.is_empty() {
        return Err("no points found".into());
    }
    Ok(PfReference::new(points))
}

pub fn write_pf_file(path: &Path, reference: &PfReference) -> std::io::Result<()> {
    std::fs::write(path, write_pf_text(reference))
}

pub fn read_pf_file(path: &Path) -> Result<PfReference, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_pf_text(&text)
}
