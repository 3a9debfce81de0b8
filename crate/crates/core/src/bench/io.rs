//! Matrix Market and dense CSV readers, dense CSV writer.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matcore::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// Reads a Matrix Market file (`coordinate` or `array`, field `real` or
/// `integer`, symmetry `general`, `symmetric` or `skew-symmetric`) into a
/// dense matrix. Duplicate coordinate entries are summed.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

pub fn parse_matrix_market(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let (layout, symmetry) = parse_header(header)?;

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or(Error::Parse {
        line: 2,
        msg: "missing size line".into(),
    })?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| parse_num::<usize>(t, size_line))
        .collect::<Result<_>>()?;

    match layout {
        Layout::Coordinate => {
            let [m, n, nnz] = dims[..] else {
                return Err(Error::Parse {
                    line: size_line,
                    msg: "expected `rows cols nnz`".into(),
                });
            };
            check_dims(m, n, size_line)?;
            let mut data = vec![0.0; m * n];
            let mut count = 0;
            for (line, l) in body {
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(Error::Parse {
                        line,
                        msg: format!("expected `row col value`, got {} fields", toks.len()),
                    });
                }
                let i = parse_num::<usize>(toks[0], line)?;
                let j = parse_num::<usize>(toks[1], line)?;
                let v = parse_num::<f64>(toks[2], line)?;
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(Error::Parse {
                        line,
                        msg: format!("entry ({i}, {j}) outside {m}x{n}"),
                    });
                }
                let (i, j) = (i - 1, j - 1);
                data[i * n + j] += v;
                if i != j {
                    match symmetry {
                        Symmetry::General => {}
                        Symmetry::Symmetric => data[j * n + i] += v,
                        Symmetry::SkewSymmetric => data[j * n + i] -= v,
                    }
                }
                count += 1;
            }
            if count != nnz {
                return Err(Error::Parse {
                    line: size_line,
                    msg: format!("header announces {nnz} entries, found {count}"),
                });
            }
            DenseMatrix::new(m, n, data)
        }
        Layout::Array => {
            let [m, n] = dims[..] else {
                return Err(Error::Parse {
                    line: size_line,
                    msg: "expected `rows cols`".into(),
                });
            };
            check_dims(m, n, size_line)?;
            if symmetry != Symmetry::General && m != n {
                return Err(Error::Parse {
                    line: size_line,
                    msg: "symmetric storage requires a square matrix".into(),
                });
            }
            // column-major; symmetric storage lists the lower triangle only
            let positions: Vec<(usize, usize)> = match symmetry {
                Symmetry::General => (0..n).flat_map(|j| (0..m).map(move |i| (i, j))).collect(),
                Symmetry::Symmetric => (0..n).flat_map(|j| (j..m).map(move |i| (i, j))).collect(),
                Symmetry::SkewSymmetric => {
                    (0..n).flat_map(|j| (j + 1..m).map(move |i| (i, j))).collect()
                }
            };
            let mut data = vec![0.0; m * n];
            let mut values = body.flat_map(|(line, l)| {
                l.split_whitespace()
                    .map(move |t| (line, t))
                    .collect::<Vec<_>>()
            });
            for &(i, j) in &positions {
                let (line, tok) = values.next().ok_or(Error::Parse {
                    line: size_line,
                    msg: format!("expected {} values", positions.len()),
                })?;
                let v = parse_num::<f64>(tok, line)?;
                data[i * n + j] = v;
                match symmetry {
                    Symmetry::General => {}
                    Symmetry::Symmetric => data[j * n + i] = v,
                    Symmetry::SkewSymmetric => data[j * n + i] = -v,
                }
            }
            if let Some((line, _)) = values.next() {
                return Err(Error::Parse {
                    line,
                    msg: "more values than the header announces".into(),
                });
            }
            DenseMatrix::new(m, n, data)
        }
    }
}

fn parse_header(header: &str) -> Result<(Layout, Symmetry)> {
    let toks: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" {
        return Err(Error::Parse {
            line: 1,
            msg: "expected `%%MatrixMarket matrix <layout> <field> <symmetry>`".into(),
        });
    }
    let layout = match toks[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(Error::UnsupportedField(format!("layout `{other}`"))),
    };
    match toks[3].as_str() {
        "real" | "integer" | "double" => {}
        other => return Err(Error::UnsupportedField(format!("field `{other}`"))),
    }
    let symmetry = match toks[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(Error::UnsupportedField(format!("symmetry `{other}`"))),
    };
    Ok((layout, symmetry))
}

fn check_dims(m: usize, n: usize, line: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Parse {
            line,
            msg: format!("dimensions must be positive, got {m}x{n}"),
        });
    }
    Ok(())
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse `{tok}`"),
    })
}

/// Reads rows of comma-separated reals. All rows must have equal length.
pub fn read_dense_csv(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    parse_dense_csv(&fs::read_to_string(path)?)
}

pub fn parse_dense_csv(text: &str) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut data = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRows {
                line,
                expected,
                found: record.len(),
            });
        }
        for tok in record.iter() {
            data.push(parse_num::<f64>(tok, line)?);
        }
        rows += 1;
    }
    let Some(cols) = width else {
        return Err(Error::Parse {
            line: 1,
            msg: "no data rows".into(),
        });
    };
    DenseMatrix::new(rows, cols, data)
}

/// Loads `.mtx` files as Matrix Market and anything else as dense CSV.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("mtx") => read_matrix_market(path),
        _ => read_dense_csv(path),
    }
}

/// Writes a matrix as dense CSV with round-trippable floats.
pub fn write_dense_csv(a: &DenseMatrix, mut out: impl Write) -> Result<()> {
    for i in 0..a.rows() {
        let line: Vec<String> = a.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}
