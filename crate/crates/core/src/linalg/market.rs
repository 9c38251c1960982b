//! Matrix Market reader and writer.
//!
//! Supports the `coordinate` and `array` formats with `real`, `integer` and
//! `complex` fields and `general`, `symmetric`, `hermitian` and
//! `skew-symmetric` storage. Values are written with Rust's shortest
//! round-trip float formatting, so write/read round-trips are bit exact.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::linalg::matrix::{C64, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmField {
    Real,
    Integer,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmSymmetry {
    General,
    Symmetric,
    Hermitian,
    SkewSymmetric,
}

/// A parsed Matrix Market file with symmetry already expanded.
#[derive(Debug, Clone)]
pub struct MmData {
    pub rows: usize,
    pub cols: usize,
    pub field: MmField,
    pub symmetry: MmSymmetry,
    pub entries: DMatrix<C64>,
}

fn io_err(path: &Path, reason: impl ToString) -> CoreError {
    CoreError::MarketIo {
        path: path.display().to_string(),
        reason: reason.to_string(),
    }
}

fn parse_err(line: usize, reason: impl ToString) -> CoreError {
    CoreError::MarketParse {
        line,
        reason: reason.to_string(),
    }
}

/// Reads any supported Matrix Market file.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<MmData> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_matrix_market(&text)
}

/// Parses Matrix Market text.
pub fn parse_matrix_market(text: &str) -> Result<MmData> {
    let mut lines = text.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "%%MatrixMarket" || tokens[1] != "matrix" {
        return Err(parse_err(
            1,
            "header must be `%%MatrixMarket matrix <format> <field> <symmetry>`",
        ));
    }
    let format = match tokens[2] {
        "coordinate" => MmFormat::Coordinate,
        "array" => MmFormat::Array,
        other => return Err(parse_err(1, format!("unknown format `{other}`"))),
    };
    let field = match tokens[3] {
        "real" => MmField::Real,
        "integer" => MmField::Integer,
        "complex" => MmField::Complex,
        "pattern" => return Err(parse_err(1, "pattern field is not supported")),
        other => return Err(parse_err(1, format!("unknown field `{other}`"))),
    };
    let symmetry = match tokens[4] {
        "general" => MmSymmetry::General,
        "symmetric" => MmSymmetry::Symmetric,
        "hermitian" => MmSymmetry::Hermitian,
        "skew-symmetric" => MmSymmetry::SkewSymmetric,
        other => return Err(parse_err(1, format!("unknown symmetry `{other}`"))),
    };

    // Skip comments, find the size line.
    let mut size_line = None;
    for (idx, line) in lines.by_ref() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        size_line = Some((idx + 1, t.to_string()));
        break;
    }
    let (size_no, size_text) =
        size_line.ok_or_else(|| parse_err(0, "missing size line"))?;
    let dims: Vec<&str> = size_text.split_whitespace().collect();

    let parse_usize = |s: &str, line: usize| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| parse_err(line, format!("invalid integer `{s}`")))
    };
    let parse_f64 = |s: &str, line: usize| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| parse_err(line, format!("invalid number `{s}`")))
    };

    let mut data_rows: Vec<(usize, String)> = Vec::new();
    for (idx, line) in lines {
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        data_rows.push((idx + 1, t.to_string()));
    }

    let values_per_entry = match field {
        MmField::Complex => 2,
        _ => 1,
    };

    match format {
        MmFormat::Coordinate => {
            if dims.len() != 3 {
                return Err(parse_err(size_no, "coordinate size line needs `rows cols nnz`"));
            }
            let rows = parse_usize(dims[0], size_no)?;
            let cols = parse_usize(dims[1], size_no)?;
            let nnz = parse_usize(dims[2], size_no)?;
            if data_rows.len() != nnz {
                return Err(parse_err(
                    size_no,
                    format!("expected {nnz} entries, found {}", data_rows.len()),
                ));
            }
            let mut m = DMatrix::<C64>::zeros(rows, cols);
            for (line_no, row) in data_rows {
                let parts: Vec<&str> = row.split_whitespace().collect();
                if parts.len() != 2 + values_per_entry {
                    return Err(parse_err(line_no, "wrong entry arity"));
                }
                let i = parse_usize(parts[0], line_no)?;
                let j = parse_usize(parts[1], line_no)?;
                if i < 1 || i > rows || j < 1 || j > cols {
                    return Err(parse_err(line_no, "index out of bounds"));
                }
                let re = parse_f64(parts[2], line_no)?;
                let im = if values_per_entry == 2 {
                    parse_f64(parts[3], line_no)?
                } else {
                    0.0
                };
                let v = C64::new(re, im);
                let (i, j) = (i - 1, j - 1);
                m[(i, j)] = v;
                match symmetry {
                    MmSymmetry::General => {}
                    MmSymmetry::Symmetric if i != j => m[(j, i)] = v,
                    MmSymmetry::Hermitian if i != j => m[(j, i)] = v.conj(),
                    MmSymmetry::SkewSymmetric if i != j => m[(j, i)] = -v,
                    _ => {}
                }
            }
            Ok(MmData {
                rows,
                cols,
                field,
                symmetry,
                entries: m,
            })
        }
        MmFormat::Array => {
            if dims.len() != 2 {
                return Err(parse_err(size_no, "array size line needs `rows cols`"));
            }
            let rows = parse_usize(dims[0], size_no)?;
            let cols = parse_usize(dims[1], size_no)?;
            // Values are listed column-major; symmetric storage keeps only
            // the lower triangle including the diagonal (excluding it for
            // skew-symmetric).
            let mut coords: Vec<(usize, usize)> = Vec::new();
            for j in 0..cols {
                for i in 0..rows {
                    let keep = match symmetry {
                        MmSymmetry::General => true,
                        MmSymmetry::SkewSymmetric => i > j,
                        _ => i >= j,
                    };
                    if keep {
                        coords.push((i, j));
                    }
                }
            }
            let mut values: Vec<f64> = Vec::new();
            for (line_no, row) in &data_rows {
                for tok in row.split_whitespace() {
                    values.push(parse_f64(tok, *line_no)?);
                }
            }
            if values.len() != coords.len() * values_per_entry {
                return Err(parse_err(
                    size_no,
                    format!(
                        "expected {} values, found {}",
                        coords.len() * values_per_entry,
                        values.len()
                    ),
                ));
            }
            let mut m = DMatrix::<C64>::zeros(rows, cols);
            for (slot, (i, j)) in coords.into_iter().enumerate() {
                let v = if values_per_entry == 2 {
                    C64::new(values[2 * slot], values[2 * slot + 1])
                } else {
                    C64::new(values[slot], 0.0)
                };
                m[(i, j)] = v;
                match symmetry {
                    MmSymmetry::General => {}
                    MmSymmetry::Symmetric if i != j => m[(j, i)] = v,
                    MmSymmetry::Hermitian if i != j => m[(j, i)] = v.conj(),
                    MmSymmetry::SkewSymmetric if i != j => m[(j, i)] = -v,
                    _ => {}
                }
            }
            Ok(MmData {
                rows,
                cols,
                field,
                symmetry,
                entries: m,
            })
        }
    }
}

/// Reads a square complex matrix.
pub fn read_cmatrix(path: impl AsRef<Path>) -> Result<CMatrix> {
    let data = read_matrix_market(&path)?;
    CMatrix::new(data.entries)
}

/// Reads a vector stored as an `n x 1` (or `1 x n`) file.
pub fn read_vector(path: impl AsRef<Path>) -> Result<DVector<C64>> {
    let path = path.as_ref();
    let data = read_matrix_market(path)?;
    if data.cols == 1 {
        Ok(DVector::from_iterator(
            data.rows,
            data.entries.column(0).iter().copied(),
        ))
    } else if data.rows == 1 {
        Ok(DVector::from_iterator(
            data.cols,
            data.entries.row(0).iter().copied(),
        ))
    } else {
        Err(io_err(
            path,
            format!("expected a vector, got {}x{}", data.rows, data.cols),
        ))
    }
}

fn fmt_value(v: C64, field: MmField) -> String {
    match field {
        MmField::Complex => format!("{:e} {:e}", v.re, v.im),
        _ => format!("{:e}", v.re),
    }
}

/// Writes a dense matrix in the requested format, field and symmetry.
///
/// For `symmetric`/`hermitian`/`skew-symmetric` the caller's matrix must
/// actually have that structure; only the lower triangle is stored.
pub fn write_matrix_market(
    path: impl AsRef<Path>,
    m: &DMatrix<C64>,
    format: MmFormat,
    field: MmField,
    symmetry: MmSymmetry,
) -> Result<()> {
    let path = path.as_ref();
    let (rows, cols) = (m.nrows(), m.ncols());
    let format_s = match format {
        MmFormat::Coordinate => "coordinate",
        MmFormat::Array => "array",
    };
    let field_s = match field {
        MmField::Real => "real",
        MmField::Integer => "integer",
        MmField::Complex => "complex",
    };
    let symmetry_s = match symmetry {
        MmSymmetry::General => "general",
        MmSymmetry::Symmetric => "symmetric",
        MmSymmetry::Hermitian => "hermitian",
        MmSymmetry::SkewSymmetric => "skew-symmetric",
    };

    let mut out = String::new();
    out.push_str(&format!(
        "%%MatrixMarket matrix {format_s} {field_s} {symmetry_s}\n"
    ));

    let keep = |i: usize, j: usize| match symmetry {
        MmSymmetry::General => true,
        MmSymmetry::SkewSymmetric => i > j,
        _ => i >= j,
    };

    match format {
        MmFormat::Coordinate => {
            let mut entries = Vec::new();
            for j in 0..cols {
                for i in 0..rows {
                    let v = m[(i, j)];
                    if keep(i, j) && (v.re != 0.0 || v.im != 0.0) {
                        entries.push((i, j, v));
                    }
                }
            }
            out.push_str(&format!("{rows} {cols} {}\n", entries.len()));
            for (i, j, v) in entries {
                out.push_str(&format!("{} {} {}\n", i + 1, j + 1, fmt_value(v, field)));
            }
        }
        MmFormat::Array => {
            out.push_str(&format!("{rows} {cols}\n"));
            for j in 0..cols {
                for i in 0..rows {
                    if keep(i, j) {
                        out.push_str(&fmt_value(m[(i, j)], field));
                        out.push('\n');
                    }
                }
            }
        }
    }

    let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| io_err(path, e))?;
    Ok(())
}

/// Writes a square matrix in coordinate format, picking the `real` field when
/// every entry is real and `complex` otherwise.
pub fn write_cmatrix(path: impl AsRef<Path>, m: &CMatrix) -> Result<()> {
    let field = if m.max_imag_abs() == 0.0 {
        MmField::Real
    } else {
        MmField::Complex
    };
    write_matrix_market(
        path,
        m.as_dmatrix(),
        MmFormat::Coordinate,
        field,
        MmSymmetry::General,
    )
}

/// Writes a vector as an `n x 1` array file.
pub fn write_vector(path: impl AsRef<Path>, v: &DVector<C64>) -> Result<()> {
    let field = if v.iter().all(|z| z.im == 0.0) {
        MmField::Real
    } else {
        MmField::Complex
    };
    let m = DMatrix::from_iterator(v.len(), 1, v.iter().copied());
    write_matrix_market(path, &m, MmFormat::Array, field, MmSymmetry::General)
}
