//! Point-set file format shared by every tool in the crate.
//!
//! Header line `dim=<d> n=<n>`, then one point per line: d coordinates as
//! exact rationals (`p/q`) or integers, whitespace-separated. Blank lines and
//! `#` comment lines are ignored.

use crate::geom::Point;
use crate::scalar::{format_rat, parse_rat};
use std::io::Write;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

fn parse_err(line: usize, detail: impl Into<String>) -> FileError {
    FileError::Parse { line, detail: detail.into() }
}

/// Parses the point-set format from a string.
pub fn parse_points(text: &str) -> Result<Vec<Point>, FileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty file; expected header `dim=<d> n=<n>`"))?;
    let mut dim: Option<usize> = None;
    let mut n: Option<usize> = None;
    for field in header.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(header_no, format!("bad header field {field:?}")))?;
        let value: usize = value
            .parse()
            .map_err(|_| parse_err(header_no, format!("bad header value {field:?}")))?;
        match key {
            "dim" => dim = Some(value),
            "n" => n = Some(value),
            _ => return Err(parse_err(header_no, format!("unknown header key {key:?}"))),
        }
    }
    let dim = dim.ok_or_else(|| parse_err(header_no, "header missing dim="))?;
    let n = n.ok_or_else(|| parse_err(header_no, "header missing n="))?;
    if dim == 0 {
        return Err(parse_err(header_no, "dim must be at least 1"));
    }
    let mut points = Vec::with_capacity(n);
    for (line_no, line) in lines {
        let mut coords = Vec::with_capacity(dim);
        for token in line.split_whitespace() {
            let c = parse_rat(token).map_err(|e| parse_err(line_no, e.to_string()))?;
            coords.push(c);
        }
        if coords.len() != dim {
            return Err(parse_err(
                line_no,
                format!("expected {dim} coordinates, got {}", coords.len()),
            ));
        }
        points.push(Point::new(coords));
    }
    if points.len() != n {
        return Err(parse_err(
            0,
            format!("header says n={n} but file has {} points", points.len()),
        ));
    }
    Ok(points)
}

/// Renders points in the file format.
pub fn format_points(points: &[Point]) -> String {
    let dim = points.first().map(|p| p.dim()).unwrap_or(1);
    let mut out = format!("dim={} n={}\n", dim, points.len());
    for p in points {
        let row: Vec<String> = p.coords().iter().map(format_rat).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Reads a point-set file.
pub fn read_points(path: &Path) -> Result<Vec<Point>, FileError> {
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_points(&text)
}

/// Writes a point-set file.
pub fn write_points(path: &Path, points: &[Point]) -> Result<(), FileError> {
    let mut file = std::fs::File::create(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(format_points(points).as_bytes())
        .map_err(|source| FileError::Io { path: path.display().to_string(), source })
}
