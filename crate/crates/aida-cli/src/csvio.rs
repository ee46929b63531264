//! Trajectory CSV serialization.
//!
//! Format: `#`-prefixed comment lines carrying the full run configuration,
//! one `step,f,grad_norm,dist_to_opt` header, then data rows. Reals are
//! written in scientific notation with 17 significant digits so that
//! parse-then-serialize is byte-identical; an unknown distance serializes
//! as an empty field. A run that dies mid-flight ends the file with an
//! `# error:` marker after the last good row.

use aida::trajectory::TrajectoryRecord;
use std::io::Write;

pub const TRAJECTORY_HEADER: &str = "step,f,grad_norm,dist_to_opt";

pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_record(r: &TrajectoryRecord) -> Option<String> {
    if !r.f.is_finite() || !r.grad_norm.is_finite() {
        return None;
    }
    let dist = match r.dist_to_opt {
        Some(d) if d.is_finite() => fmt_real(d),
        Some(_) => return None,
        None => String::new(),
    };
    Some(format!(
        "{},{},{},{dist}",
        r.step,
        fmt_real(r.f),
        fmt_real(r.grad_norm)
    ))
}

/// Serializes a trajectory with configuration provenance comments and an
/// optional trailing error marker.
pub fn render_trajectory(
    records: &[TrajectoryRecord],
    comments: &[String],
    error_marker: Option<&str>,
) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in records {
        match fmt_record(r) {
            Some(line) => {
                out.push_str(&line);
                out.push('\n');
            }
            None => {
                out.push_str(&format!("# error: non-finite value at step {}\n", r.step));
                return out;
            }
        }
    }
    if let Some(msg) = error_marker {
        out.push_str("# error: ");
        out.push_str(msg);
        out.push('\n');
    }
    out
}

pub fn write_trajectory(
    path: &std::path::Path,
    records: &[TrajectoryRecord],
    comments: &[String],
    error_marker: Option<&str>,
) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(render_trajectory(records, comments, error_marker).as_bytes())
}

/// Parses a trajectory CSV produced by [`render_trajectory`], skipping
/// comments and the header.
#[cfg(test)]
pub fn parse_trajectory(text: &str) -> Result<Vec<TrajectoryRecord>, String> {
    let mut records = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') || line == TRAJECTORY_HEADER {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(format!("line {}: expected 4 fields", lineno + 1));
        }
        let parse_f64 = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| format!("line {}: {e}", lineno + 1))
        };
        records.push(TrajectoryRecord {
            step: fields[0]
                .parse::<usize>()
                .map_err(|e| format!("line {}: {e}", lineno + 1))?,
            f: parse_f64(fields[1])?,
            grad_norm: parse_f64(fields[2])?,
            dist_to_opt: if fields[3].is_empty() {
                None
            } else {
                Some(parse_f64(fields[3])?)
            },
        });
    }
    Ok(records)
}
