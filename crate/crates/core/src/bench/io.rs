//! Matrix files.
//!
//! Two formats, chosen by extension:
//!
//! * `.mtx` / `.mm`: Matrix Market array format. Written as
//!   `%%MatrixMarket matrix array complex general`, a `rows cols` line, then
//!   one `re im` pair per line in column-major order. `real` and `integer`
//!   array files are accepted on read.
//! * `.csv`: one matrix row per line, comma separated, entries written as
//!   `a+bi` with the imaginary part omitted when it is zero.
//!
//! Values are written with the shortest decimal representation that parses
//! back to the same `f64`, so a write/read round trip is exact.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    MatrixMarket,
    Csv,
}

impl MatrixFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("mtx") | Some("mm") => Ok(MatrixFormat::MatrixMarket),
            Some("csv") => Ok(MatrixFormat::Csv),
            _ => Err(Error::Usage(format!(
                "cannot infer matrix format of {} (expected .mtx, .mm or .csv)",
                path.display()
            ))),
        }
    }
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let format = MatrixFormat::from_path(path)?;
    let text = fs::read_to_string(path)?;
    match format {
        MatrixFormat::MatrixMarket => parse_matrix_market(&text, path),
        MatrixFormat::Csv => parse_csv(&text, path),
    }
}

pub fn write_matrix(a: &ComplexMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = match MatrixFormat::from_path(path)? {
        MatrixFormat::MatrixMarket => format_matrix_market(a),
        MatrixFormat::Csv => format_csv(a),
    };
    fs::write(path, text)?;
    Ok(())
}

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
pub fn format_f64(x: f64) -> String {
    let ax = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&ax) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_matrix_market(a: &ComplexMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix array complex general\n");
    out.push_str(&format!("{} {}\n", a.rows(), a.cols()));
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            let z = a[(i, j)];
            out.push_str(&format_f64(z.re));
            out.push(' ');
            out.push_str(&format_f64(z.im));
            out.push('\n');
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Complex,
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn parse_matrix_market(text: &str, path: &Path) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));

    let (ln, header) = lines.next().ok_or_else(|| parse_error(path, 1, "empty file"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_error(path, ln, format!("malformed header '{header}'")));
    }
    if tokens[2] != "array" {
        return Err(parse_error(path, ln, format!("unsupported storage '{}'", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "complex" => Field::Complex,
        "real" | "integer" | "double" => Field::Real,
        other => return Err(parse_error(path, ln, format!("unsupported field '{other}'"))),
    };
    if tokens[4] != "general" {
        return Err(parse_error(path, ln, format!("unsupported symmetry '{}'", tokens[4])));
    }

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (ln, size) = body
        .next()
        .ok_or_else(|| parse_error(path, ln + 1, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_error(path, ln, format!("bad size line '{size}': {e}")))?;
    let (rows, cols) = match dims[..] {
        [r, c] if r > 0 && c > 0 => (r, c),
        _ => return Err(parse_error(path, ln, format!("bad size line '{size}'"))),
    };

    let mut column_major = Vec::with_capacity(rows * cols);
    let mut last_line = ln;
    for (ln, line) in body {
        last_line = ln;
        if column_major.len() == rows * cols {
            return Err(parse_error(
                path,
                ln,
                format!("more than {} values for a {rows}x{cols} matrix", rows * cols),
            ));
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let expected = if field == Field::Complex { 2 } else { 1 };
        if parts.len() != expected {
            return Err(parse_error(
                path,
                ln,
                format!("expected {expected} value(s), found '{}'", line.trim()),
            ));
        }
        let parse = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_error(path, ln, format!("unparsable value '{t}'")))
        };
        let re = parse(parts[0])?;
        let im = if field == Field::Complex { parse(parts[1])? } else { 0.0 };
        column_major.push(Complex64::new(re, im));
    }
    if column_major.len() != rows * cols {
        return Err(parse_error(
            path,
            last_line,
            format!(
                "expected {} values for a {rows}x{cols} matrix, found {}",
                rows * cols,
                column_major.len()
            ),
        ));
    }

    let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
    for (k, z) in column_major.into_iter().enumerate() {
        let (i, j) = (k % rows, k / rows);
        data[i * cols + j] = z;
    }
    ComplexMatrix::from_vec(rows, cols, data)
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return format_f64(z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_f64(z.re), sign, format_f64(z.im.abs()))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (also accepting U+2212 as a minus sign).
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t: String = token
        .trim()
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    if t.is_empty() {
        return None;
    }
    let finite = |x: f64| x.is_finite().then_some(x);
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().ok().and_then(finite).map(|re| Complex64::new(re, 0.0));
    };

    // Split at the last sign that is not leading and not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().ok().and_then(finite)?,
    };
    let re = re_part.parse::<f64>().ok().and_then(finite)?;
    Some(Complex64::new(re, im))
}

pub fn format_csv(a: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|&z| format_complex(z)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str, path: &Path) -> Result<ComplexMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let ln = k + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|tok| {
                parse_complex(tok)
                    .ok_or_else(|| parse_error(path, ln, format!("unparsable entry '{}'", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_error(
                    path,
                    ln,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(path, 1, "no matrix rows"));
    }
    ComplexMatrix::from_rows(&rows)
}
