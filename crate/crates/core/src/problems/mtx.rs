//! Matrix Market exchange format (dense `array` and sparse `coordinate`
//! layouts, `real` or `integer` field, `general` or `symmetric` symmetry).
//!
//! Values are written in shortest round-trip form, so a write/read cycle is
//! bit-exact.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::dense::{Matrix, Vector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Array,
    Coordinate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_matrix_market(&text).map_err(|(line, msg)| match msg {
        ParseFailure::Unsupported(what) => Error::UnsupportedField(what),
        ParseFailure::Syntax(msg) => Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        },
    })
}

#[derive(Debug)]
enum ParseFailure {
    Syntax(String),
    Unsupported(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> (usize, ParseFailure) {
    (line, ParseFailure::Syntax(msg.into()))
}

fn parse_header(line_no: usize, line: &str) -> Result<(Layout, Symmetry), (usize, ParseFailure)> {
    let lower = line.to_ascii_lowercase();
    let words: Vec<&str> = lower.split_whitespace().collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(syntax(
            line_no,
            "expected `%%MatrixMarket matrix <format> <field> <symmetry>`",
        ));
    }
    let layout = match words[2] {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(syntax(line_no, format!("unknown format `{other}`"))),
    };
    match words[3] {
        "real" | "integer" | "double" => {}
        other => {
            return Err((
                line_no,
                ParseFailure::Unsupported(format!("field `{other}`")),
            ))
        }
    }
    let symmetry = match words[4] {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => {
            return Err((
                line_no,
                ParseFailure::Unsupported(format!("symmetry `{other}`")),
            ))
        }
    };
    Ok((layout, symmetry))
}

fn parse_value(line_no: usize, tok: &str) -> Result<f64, (usize, ParseFailure)> {
    let v: f64 = tok
        .parse()
        .map_err(|_| syntax(line_no, format!("invalid number `{tok}`")))?;
    if !v.is_finite() {
        return Err(syntax(line_no, format!("non-finite value `{tok}`")));
    }
    Ok(v)
}

fn parse_index(line_no: usize, tok: &str, bound: usize) -> Result<usize, (usize, ParseFailure)> {
    let i: usize = tok
        .parse()
        .map_err(|_| syntax(line_no, format!("invalid index `{tok}`")))?;
    if i == 0 || i > bound {
        return Err(syntax(line_no, format!("index {i} outside 1..={bound}")));
    }
    Ok(i - 1)
}

fn parse_matrix_market(text: &str) -> Result<Matrix, (usize, ParseFailure)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    let (layout, symmetry) = parse_header(hline, header)?;

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = body
        .next()
        .ok_or_else(|| syntax(hline + 1, "missing size line"))?;
    let dims: Vec<&str> = size.split_whitespace().collect();
    let expected = if layout == Layout::Array { 2 } else { 3 };
    if dims.len() != expected {
        return Err(syntax(
            sline,
            format!("size line needs {expected} integers"),
        ));
    }
    let parse_dim = |tok: &str| -> Result<usize, (usize, ParseFailure)> {
        tok.parse()
            .map_err(|_| syntax(sline, format!("invalid dimension `{tok}`")))
    };
    let rows = parse_dim(dims[0])?;
    let cols = parse_dim(dims[1])?;
    if rows == 0 || cols == 0 {
        return Err(syntax(sline, "matrix dimensions must be positive"));
    }
    if symmetry == Symmetry::Symmetric && rows != cols {
        return Err(syntax(sline, "symmetric matrix must be square"));
    }
    let mut m = Matrix::zeros(rows, cols);

    match layout {
        Layout::Array => {
            // Column-major; symmetric files store the lower triangle only.
            let positions: Vec<(usize, usize)> = match symmetry {
                Symmetry::General => (0..cols)
                    .flat_map(|j| (0..rows).map(move |i| (i, j)))
                    .collect(),
                Symmetry::Symmetric => (0..cols)
                    .flat_map(|j| (j..rows).map(move |i| (i, j)))
                    .collect(),
            };
            let mut values = Vec::with_capacity(positions.len());
            let mut last_line = sline;
            for (line_no, l) in body {
                last_line = line_no;
                for tok in l.split_whitespace() {
                    values.push((line_no, parse_value(line_no, tok)?));
                }
            }
            if values.len() != positions.len() {
                return Err(syntax(
                    last_line,
                    format!(
                        "expected {} values, found {}",
                        positions.len(),
                        values.len()
                    ),
                ));
            }
            for ((i, j), (_, v)) in positions.into_iter().zip(values) {
                m[(i, j)] = v;
                if symmetry == Symmetry::Symmetric {
                    m[(j, i)] = v;
                }
            }
        }
        Layout::Coordinate => {
            let nnz = parse_dim(dims[2])?;
            let mut seen = 0;
            let mut last_line = sline;
            for (line_no, l) in body {
                last_line = line_no;
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(syntax(line_no, "coordinate entry needs `row col value`"));
                }
                let i = parse_index(line_no, toks[0], rows)?;
                let j = parse_index(line_no, toks[1], cols)?;
                let v = parse_value(line_no, toks[2])?;
                m[(i, j)] += v;
                if symmetry == Symmetry::Symmetric && i != j {
                    m[(j, i)] += v;
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(syntax(
                    last_line,
                    format!("expected {nnz} entries, found {seen}"),
                ));
            }
        }
    }
    Ok(m)
}

/// Writes a dense `array real general` file.
pub fn write_matrix_market(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    let mut out = String::with_capacity(m.len() * 24 + 64);
    out.push_str("%%MatrixMarket matrix array real general\n");
    out.push_str(&format!("{} {}\n", m.nrows(), m.ncols()));
    for v in m.iter() {
        out.push_str(&format!("{v:e}\n"));
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

/// Reads an `n x 1` (or `1 x n`) file as a vector.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vector> {
    let path = path.as_ref();
    let m = read_matrix_market(path)?;
    if m.ncols() != 1 && m.nrows() != 1 {
        return Err(Error::DimensionMismatch {
            expected: "a column or row vector".into(),
            found: format!("{}x{} matrix in {}", m.nrows(), m.ncols(), path.display()),
        });
    }
    Ok(Vector::from_iterator(m.len(), m.iter().cloned()))
}

pub fn write_vector(path: impl AsRef<Path>, v: &Vector) -> Result<()> {
    write_matrix_market(path, &Matrix::from_column_slice(v.len(), 1, v.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(text: &str) -> Result<Matrix, (usize, ParseFailure)> {
        parse_matrix_market(text)
    }

    #[test]
    fn coordinate_fills_zeros() {
        let m = parse(
            "%%MatrixMarket matrix coordinate real general\n% comment\n4 4 3\n1 1 2.5\n2 3 -1\n4 4 7\n",
        )
        .unwrap();
        assert_eq!(m.shape(), (4, 4));
        assert_eq!(m[(0, 0)], 2.5);
        assert_eq!(m[(1, 2)], -1.0);
        assert_eq!(m[(3, 3)], 7.0);
        assert_eq!(m.iter().filter(|v| **v != 0.0).count(), 3);
    }

    #[test]
    fn symmetric_coordinate_is_expanded() {
        let m = parse(
            "%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 4\n2 1 -1\n3 2 -2\n",
        )
        .unwrap();
        assert_eq!(m, m.transpose());
        assert_eq!(m[(0, 1)], -1.0);
        assert_eq!(m[(1, 2)], -2.0);
    }

    #[test]
    fn symmetric_array_is_expanded() {
        let m = parse("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n").unwrap();
        assert_eq!(m, Matrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 3.0]));
    }

    #[test]
    fn array_is_column_major() {
        let m = parse("%%MatrixMarket matrix array real general\n2 3\n1 2\n3 4\n5 6\n").unwrap();
        assert_eq!(
            m,
            Matrix::from_row_slice(2, 3, &[1.0, 3.0, 5.0, 2.0, 4.0, 6.0])
        );
    }

    #[test]
    fn malformed_value_reports_line() {
        let err = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 abc\n")
            .unwrap_err();
        assert_eq!(err.0, 4);
        let err =
            parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n").unwrap_err();
        assert_eq!(err.0, 3);
        let err = parse("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n").unwrap_err();
        assert!(matches!(err.1, ParseFailure::Syntax(_)));
        assert!(parse("not a header\n").is_err());
    }

    #[test]
    fn complex_and_pattern_are_unsupported() {
        for field in ["complex", "pattern"] {
            let text = format!("%%MatrixMarket matrix coordinate {field} general\n1 1 1\n1 1 1\n");
            assert!(matches!(
                parse(&text).unwrap_err().1,
                ParseFailure::Unsupported(_)
            ));
        }
    }

    #[test]
    fn file_errors_carry_path_and_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.mtx");
        fs::write(&p, "%%MatrixMarket matrix array real general\n1 1\nx\n").unwrap();
        match read_matrix_market(&p) {
            Err(Error::Parse { line, path, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(path, p);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            read_matrix_market(dir.path().join("missing.mtx")),
            Err(Error::Io(_))
        ));
    }

    #[test]
    fn vector_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.mtx");
        let v = Vector::from_vec(vec![0.1, -2.0, 1e-300, 3.0]);
        write_vector(&p, &v).unwrap();
        assert_eq!(read_vector(&p).unwrap(), v);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn write_read_is_bit_exact(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in proptest::collection::vec(-1e6f64..1e6, 36),
        ) {
            let m = Matrix::from_fn(rows, cols, |i, j| seed[i * 6 + j] / 7.0);
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("m.mtx");
            write_matrix_market(&p, &m).unwrap();
            let back = read_matrix_market(&p).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
