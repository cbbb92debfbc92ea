//! File formats: the `opts v1` oriented-point format and minutiae CSV
//! ingestion.

use std::fmt::Write as _;
use std::path::Path;

use opm_core::{normalize_angle, OrientedPoint, PointSet, Role};

#[derive(thiserror::Error, Debug)]
pub enum FormatError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Serialize to the `opts v1` text format: a header `opts v1 <count>` and one
/// `x y angle` record per line, 17 significant digits so loading reproduces
/// every float bit-exactly.
pub fn opts_to_string(set: &PointSet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "opts v1 {}", set.len());
    for p in set.iter() {
        let _ = writeln!(out, "{:.16e} {:.16e} {:.16e}", p.x, p.y, p.a);
    }
    out
}

pub fn save_opts(path: &Path, set: &PointSet) -> Result<(), FormatError> {
    std::fs::write(path, opts_to_string(set)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parse the `opts v1` format. Blank lines and `#` comments are ignored;
/// angles are normalized into `[0, 2π)` on load; the record count must match
/// the header.
pub fn parse_opts(content: &str, path: &Path, role: Role) -> Result<PointSet, FormatError> {
    let mut lines = content
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "missing header"))?;
    let mut h = header.split_whitespace();
    if h.next() != Some("opts") || h.next() != Some("v1") {
        return Err(parse_err(path, hline, "expected header `opts v1 <count>`"));
    }
    let count: usize = h
        .next()
        .ok_or_else(|| parse_err(path, hline, "missing count in header"))?
        .parse()
        .map_err(|e| parse_err(path, hline, format!("bad count: {e}")))?;
    if h.next().is_some() {
        return Err(parse_err(path, hline, "trailing tokens in header"));
    }

    let mut points = Vec::with_capacity(count);
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(
                path,
                lineno,
                format!("expected 3 fields `x y angle`, found {}", fields.len()),
            ));
        }
        let mut vals = [0.0_f64; 3];
        for (col, (v, f)) in vals.iter_mut().zip(&fields).enumerate() {
            *v = f.parse().map_err(|e| {
                parse_err(path, lineno, format!("column {}: {e}", col + 1))
            })?;
        }
        let p = OrientedPoint::new(vals[0], vals[1], normalize_angle(vals[2]))
            .map_err(|e| parse_err(path, lineno, e.to_string()))?;
        points.push(p);
    }
    if points.len() != count {
        return Err(parse_err(
            path,
            1,
            format!("header declares {count} records, file has {}", points.len()),
        ));
    }
    Ok(PointSet::new(points, role))
}

pub fn load_opts(path: &Path, role: Role) -> Result<PointSet, FormatError> {
    parse_opts(&read(path)?, path, role)
}

/// One minutia from a fingerprint template dump: pixel position, ridge
/// direction in degrees, and an extractor quality score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinutiaeRecord {
    pub x: f64,
    pub y: f64,
    pub theta_deg: f64,
    pub quality: i64,
}

/// Parse minutiae CSV (`x,y,theta_degrees,quality`). An optional header row
/// and `#` comments are skipped.
pub fn parse_minutiae(content: &str, path: &Path) -> Result<Vec<MinutiaeRecord>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in content.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(parse_err(
                path,
                lineno,
                format!("expected 4 fields `x,y,theta,quality`, found {}", fields.len()),
            ));
        }
        // a non-numeric first row is a header
        if out.is_empty() && fields[0].parse::<f64>().is_err() && lineno == 1 {
            continue;
        }
        let x: f64 = fields[0]
            .parse()
            .map_err(|e| parse_err(path, lineno, format!("x: {e}")))?;
        let y: f64 = fields[1]
            .parse()
            .map_err(|e| parse_err(path, lineno, format!("y: {e}")))?;
        let theta_deg: f64 = fields[2]
            .parse()
            .map_err(|e| parse_err(path, lineno, format!("theta: {e}")))?;
        let quality: i64 = fields[3]
            .parse()
            .map_err(|e| parse_err(path, lineno, format!("quality: {e}")))?;
        out.push(MinutiaeRecord {
            x,
            y,
            theta_deg,
            quality,
        });
    }
    Ok(out)
}

/// Load minutiae, converting degrees to radians and scaling positions by
/// `scale` (the orientation-weighting knob: a smaller scale shrinks positions
/// relative to the fixed angular term). Records below `quality_min` are
/// dropped; an empty survivor set is an error.
pub fn ingest_minutiae(
    path: &Path,
    scale: f64,
    quality_min: i64,
    role: Role,
) -> Result<PointSet, FormatError> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(parse_err(path, 0, "scale must be positive"));
    }
    let records = parse_minutiae(&read(path)?, path)?;
    let points: Vec<OrientedPoint> = records
        .iter()
        .filter(|r| r.quality >= quality_min)
        .map(|r| {
            OrientedPoint::new(
                r.x * scale,
                r.y * scale,
                normalize_angle(r.theta_deg.to_radians()),
            )
            .map_err(|e| parse_err(path, 0, e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    if points.is_empty() {
        return Err(parse_err(
            path,
            0,
            format!("no records with quality >= {quality_min}"),
        ));
    }
    Ok(PointSet::new(points, role))
}
