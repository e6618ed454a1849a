//! Matrix Market coordinate format (real, general or symmetric).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::la::{DenseMatrix, SparseMatrix};

const BANNER: &str = "%%MatrixMarket";

/// Reads a real coordinate Matrix Market file. Symmetric files are expanded
/// to full storage.
pub fn mm_read(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    parse(reader, path)
}

/// Parses Matrix Market text from any reader; `path` is only used in errors.
pub fn parse(reader: impl BufRead, path: &Path) -> Result<SparseMatrix> {
    let err = |line: usize, message: String| Error::MatrixMarket {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (_, banner) = lines
        .next()
        .ok_or_else(|| err(1, "empty file, banner line missing".into()))?;
    let banner = banner?;
    let fields: Vec<String> = banner.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() != 5 || fields[0] != BANNER.to_lowercase() {
        return Err(err(1, format!("malformed banner `{banner}`")));
    }
    if fields[1] != "matrix" || fields[2] != "coordinate" {
        return Err(err(
            1,
            format!("unsupported object/format `{} {}`", fields[1], fields[2]),
        ));
    }
    match fields[3].as_str() {
        "real" | "integer" => {}
        other => {
            return Err(err(
                1,
                format!("unsupported field `{other}`, expected real"),
            ))
        }
    }
    let symmetric = match fields[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(err(1, format!("unsupported symmetry `{other}`"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    let mut entries_read = 0usize;
    let mut last_line = 1;
    for (lineno, line) in lines {
        let line = line?;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if tokens.len() != 3 {
                    return Err(err(lineno, format!("malformed size line `{trimmed}`")));
                }
                let parse_count = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| err(lineno, format!("invalid count `{t}`")))
                };
                let (m, n, nnz) = (
                    parse_count(tokens[0])?,
                    parse_count(tokens[1])?,
                    parse_count(tokens[2])?,
                );
                if symmetric && m != n {
                    return Err(err(lineno, "symmetric matrix must be square".into()));
                }
                size = Some((m, n, nnz));
                triplets.reserve(if symmetric { 2 * nnz } else { nnz });
            }
            Some((m, n, nnz)) => {
                if tokens.len() != 3 {
                    return Err(err(
                        lineno,
                        format!("expected `row col value`, got `{trimmed}`"),
                    ));
                }
                if entries_read == nnz {
                    return Err(err(lineno, format!("more than the declared {nnz} entries")));
                }
                let index = |t: &str, bound: usize, what: &str| -> Result<usize> {
                    let i = t
                        .parse::<usize>()
                        .map_err(|_| err(lineno, format!("invalid {what} index `{t}`")))?;
                    if i == 0 || i > bound {
                        return Err(err(lineno, format!("{what} index {i} outside 1..={bound}")));
                    }
                    Ok(i - 1)
                };
                let i = index(tokens[0], m, "row")?;
                let j = index(tokens[1], n, "column")?;
                let v: f64 = tokens[2]
                    .parse()
                    .map_err(|_| err(lineno, format!("invalid value `{}`", tokens[2])))?;
                if symmetric && j > i {
                    return Err(err(
                        lineno,
                        "symmetric file stores an upper-triangular entry".into(),
                    ));
                }
                triplets.push((i, j, v));
                if symmetric && i != j {
                    triplets.push((j, i, v));
                }
                entries_read += 1;
            }
        }
    }
    let (m, n, nnz) = size.ok_or_else(|| err(last_line, "size line missing".into()))?;
    if entries_read != nnz {
        return Err(err(
            last_line,
            format!("declared {nnz} entries but found {entries_read}"),
        ));
    }
    Ok(SparseMatrix::from_triplets(m, n, &triplets))
}

/// Writes `a` as a `general` coordinate file with 17 significant digits per
/// value, so reading back is value-exact.
pub fn mm_write(path: impl AsRef<Path>, a: &SparseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_to(&mut w, a)?;
    w.flush()?;
    Ok(())
}

pub fn write_to(w: &mut impl Write, a: &SparseMatrix) -> Result<()> {
    writeln!(w, "{BANNER} matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.n_rows(), a.n_cols(), a.nnz())?;
    for (i, j, v) in a.triplets() {
        writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

/// Writes a dense matrix in `array real general` format (column-major,
/// 17 significant digits).
pub fn mm_write_dense(path: impl AsRef<Path>, a: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_dense_to(&mut w, a)?;
    w.flush()?;
    Ok(())
}

pub fn write_dense_to(w: &mut impl Write, a: &DenseMatrix) -> Result<()> {
    writeln!(w, "{BANNER} matrix array real general")?;
    writeln!(w, "{} {}", a.nrows(), a.ncols())?;
    for v in a.iter() {
        writeln!(w, "{v:.16e}")?;
    }
    Ok(())
}

/// Reads an `array real general` Matrix Market file.
pub fn mm_read_dense(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    parse_dense(BufReader::new(File::open(path)?), path)
}

pub fn parse_dense(reader: impl BufRead, path: &Path) -> Result<DenseMatrix> {
    let err = |line: usize, message: String| Error::MatrixMarket {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, banner) = lines
        .next()
        .ok_or_else(|| err(1, "empty file, banner line missing".into()))?;
    let banner = banner?;
    let fields: Vec<String> = banner.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() != 5
        || fields[0] != BANNER.to_lowercase()
        || fields[1] != "matrix"
        || fields[2] != "array"
        || fields[3] != "real"
        || fields[4] != "general"
    {
        return Err(err(
            1,
            format!("expected `{BANNER} matrix array real general`, got `{banner}`"),
        ));
    }
    let mut shape: Option<(usize, usize)> = None;
    let mut values = Vec::new();
    let mut last_line = 1;
    for (lineno, line) in lines {
        let line = line?;
        last_line = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        match shape {
            None => {
                let tokens: Vec<&str> = trimmed.split_whitespace().collect();
                let dims: Vec<usize> = tokens.iter().filter_map(|t| t.parse().ok()).collect();
                if tokens.len() != 2 || dims.len() != 2 {
                    return Err(err(lineno, format!("malformed size line `{trimmed}`")));
                }
                shape = Some((dims[0], dims[1]));
                values.reserve(dims[0] * dims[1]);
            }
            Some((m, n)) => {
                if values.len() == m * n {
                    return Err(err(
                        lineno,
                        format!("more than the declared {} values", m * n),
                    ));
                }
                let v: f64 = trimmed
                    .parse()
                    .map_err(|_| err(lineno, format!("invalid value `{trimmed}`")))?;
                values.push(v);
            }
        }
    }
    let (m, n) = shape.ok_or_else(|| err(last_line, "size line missing".into()))?;
    if values.len() != m * n {
        return Err(err(
            last_line,
            format!("declared {} values but found {}", m * n, values.len()),
        ));
    }
    Ok(DenseMatrix::from_vec(m, n, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse_str(s: &str) -> Result<SparseMatrix> {
        parse(Cursor::new(s), Path::new("test.mtx"))
    }

    #[test]
    fn symmetric_expansion() {
        let a = parse_str(
            "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 3\n1 1 2.0\n2 1 1.0\n2 2 2.0\n",
        )
        .unwrap();
        assert_eq!(
            a.to_dense(),
            crate::la::DenseMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])
        );
    }

    #[test]
    fn zero_index_is_rejected_with_line() {
        let e = parse_str("%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n")
            .unwrap_err();
        match e {
            Error::MatrixMarket { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_str("").is_err());
        assert!(parse_str("%%MatrixMarket matrix array real general\n1 1\n1\n").is_err());
        assert!(
            parse_str("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n")
                .is_err()
        );
        assert!(
            parse_str("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n").is_err()
        );
        assert!(
            parse_str("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n").is_err()
        );
        assert!(parse_str("1 1 1\n1 1 1.0\n").is_err());
    }

    #[test]
    fn dense_roundtrip_exact() {
        let a = DenseMatrix::from_fn(3, 2, |i, j| (i as f64 + 0.1) / (j as f64 + 3.0) - 1e-300);
        let mut buf = Vec::new();
        write_dense_to(&mut buf, &a).unwrap();
        let back = parse_dense(Cursor::new(buf), Path::new("x.mtx")).unwrap();
        assert_eq!(back, a);
        assert!(parse_dense(
            Cursor::new("%%MatrixMarket matrix array real general\n2 1\n1.0\n"),
            Path::new("x")
        )
        .is_err());
    }

    #[test]
    fn writes_exact_decimal() {
        let a = SparseMatrix::from_triplets(1, 2, &[(0, 1, 0.1 + 0.2)]);
        let mut buf = Vec::new();
        write_to(&mut buf, &a).unwrap();
        let back = parse_str(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, a);
    }
}
