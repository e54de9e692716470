//! Matrix Market exchange format reader and writer.
//!
//! Supported kinds: `coordinate` and `array` formats with `real`, `integer`
//! or `pattern` fields and `general`, `symmetric` or `skew-symmetric`
//! symmetry. Symmetric and skew storage is expanded to full storage at load;
//! indices are converted from 1-based to 0-based; pattern entries get the
//! value 1.0. Complex fields are not supported.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq)]
enum MmFormat {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum MmField {
    Real,
    Integer,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum MmSymmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::MatrixMarket {
        line,
        message: message.into(),
    }
}

/// Read a square matrix from a Matrix Market file.
pub fn mm_read(path: impl AsRef<Path>) -> Result<Matrix> {
    let file = File::open(path.as_ref())?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    // banner
    let (format, field, symmetry) = {
        let (idx, first) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty file"))
            .and_then(|(i, l)| Ok((i, l?)))?;
        let lineno = idx + 1;
        let tokens: Vec<String> = first.split_whitespace().map(|t| t.to_string()).collect();
        if tokens.len() < 5 || tokens[0] != "%%MatrixMarket" {
            return Err(parse_err(
                lineno,
                "malformed banner: expected `%%MatrixMarket matrix <format> <field> <symmetry>`",
            ));
        }
        if tokens[1].to_lowercase() != "matrix" {
            return Err(parse_err(lineno, "only the `matrix` object is supported"));
        }
        let format = match tokens[2].to_lowercase().as_str() {
            "coordinate" => MmFormat::Coordinate,
            "array" => MmFormat::Array,
            other => return Err(parse_err(lineno, format!("unknown format `{other}`"))),
        };
        let field = match tokens[3].to_lowercase().as_str() {
            "real" => MmField::Real,
            "integer" => MmField::Integer,
            "pattern" => MmField::Pattern,
            "complex" => {
                return Err(parse_err(lineno, "complex field is not supported"));
            }
            other => return Err(parse_err(lineno, format!("unknown field `{other}`"))),
        };
        let symmetry = match tokens[4].to_lowercase().as_str() {
            "general" => MmSymmetry::General,
            "symmetric" => MmSymmetry::Symmetric,
            "skew-symmetric" => MmSymmetry::SkewSymmetric,
            "hermitian" => {
                return Err(parse_err(lineno, "hermitian symmetry is not supported"));
            }
            other => return Err(parse_err(lineno, format!("unknown symmetry `{other}`"))),
        };
        if format == MmFormat::Array && field == MmField::Pattern {
            return Err(parse_err(
                lineno,
                "pattern field requires coordinate format",
            ));
        }
        (format, field, symmetry)
    };

    // skip comments and blank lines, find the size line
    let (size_lineno, size_line) = loop {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, "missing size line"))
            .and_then(|(i, l)| Ok((i, l?)))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        break (idx + 1, line);
    };
    let dims: Vec<&str> = size_line.split_whitespace().collect();

    match format {
        MmFormat::Coordinate => {
            if dims.len() != 3 {
                return Err(parse_err(
                    size_lineno,
                    "coordinate size line needs `m n nnz`",
                ));
            }
            let m: usize = dims[0]
                .parse()
                .map_err(|_| parse_err(size_lineno, "bad row count"))?;
            let n: usize = dims[1]
                .parse()
                .map_err(|_| parse_err(size_lineno, "bad column count"))?;
            let nnz: usize = dims[2]
                .parse()
                .map_err(|_| parse_err(size_lineno, "bad entry count"))?;
            if m != n {
                return Err(parse_err(size_lineno, format!("non-square matrix {m}x{n}")));
            }
            read_coordinate(lines, n, nnz, field, symmetry)
        }
        MmFormat::Array => {
            if dims.len() != 2 {
                return Err(parse_err(size_lineno, "array size line needs `m n`"));
            }
            let m: usize = dims[0]
                .parse()
                .map_err(|_| parse_err(size_lineno, "bad row count"))?;
            let n: usize = dims[1]
                .parse()
                .map_err(|_| parse_err(size_lineno, "bad column count"))?;
            if m != n {
                return Err(parse_err(size_lineno, format!("non-square matrix {m}x{n}")));
            }
            read_array(lines, n, field, symmetry)
        }
    }
}

fn read_coordinate(
    lines: impl Iterator<Item = (usize, std::io::Result<String>)>,
    n: usize,
    nnz: usize,
    field: MmField,
    symmetry: MmSymmetry,
) -> Result<Matrix> {
    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(2 * nnz);
    let mut seen = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if seen == nnz {
            return Err(parse_err(lineno, "more entries than declared"));
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let need = if field == MmField::Pattern { 2 } else { 3 };
        if tokens.len() < need {
            return Err(parse_err(lineno, "too few fields on entry line"));
        }
        let i: usize = tokens[0]
            .parse()
            .map_err(|_| parse_err(lineno, "bad row index"))?;
        let j: usize = tokens[1]
            .parse()
            .map_err(|_| parse_err(lineno, "bad column index"))?;
        if i < 1 || i > n || j < 1 || j > n {
            return Err(parse_err(
                lineno,
                format!("index ({i}, {j}) out of range for n = {n}"),
            ));
        }
        let value = match field {
            MmField::Pattern => 1.0,
            MmField::Real | MmField::Integer => tokens[2]
                .parse::<f64>()
                .map_err(|_| parse_err(lineno, "bad numeric value"))?,
        };
        if !value.is_finite() {
            return Err(parse_err(lineno, "non-finite value"));
        }
        let (i, j) = (i - 1, j - 1);
        match symmetry {
            MmSymmetry::General => triplets.push((i, j, value)),
            MmSymmetry::Symmetric => {
                triplets.push((i, j, value));
                if i != j {
                    triplets.push((j, i, value));
                }
            }
            MmSymmetry::SkewSymmetric => {
                if i == j {
                    return Err(parse_err(
                        lineno,
                        "skew-symmetric file lists a diagonal entry",
                    ));
                }
                triplets.push((i, j, value));
                triplets.push((j, i, -value));
            }
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(parse_err(
            0,
            format!("expected {nnz} entries, found {seen}"),
        ));
    }

    triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    for w in triplets.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            return Err(parse_err(
                0,
                format!("duplicate entry at ({}, {})", w[0].0 + 1, w[0].1 + 1),
            ));
        }
    }

    let mut row_ptr = vec![0usize; n + 1];
    let mut col_idx = Vec::with_capacity(triplets.len());
    let mut values = Vec::with_capacity(triplets.len());
    for &(i, _, _) in &triplets {
        row_ptr[i + 1] += 1;
    }
    for i in 0..n {
        row_ptr[i + 1] += row_ptr[i];
    }
    for (_, j, v) in triplets {
        col_idx.push(j);
        values.push(v);
    }
    let hint = symmetry == MmSymmetry::Symmetric;
    Ok(Matrix::csr(n, row_ptr, col_idx, values)?.with_symmetry_hint(hint))
}

fn read_array(
    lines: impl Iterator<Item = (usize, std::io::Result<String>)>,
    n: usize,
    _field: MmField,
    symmetry: MmSymmetry,
) -> Result<Matrix> {
    let expected = match symmetry {
        MmSymmetry::General => n * n,
        MmSymmetry::Symmetric => n * (n + 1) / 2,
        MmSymmetry::SkewSymmetric => n * (n - 1) / 2,
    };
    let mut values = Vec::with_capacity(expected);
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        for tok in trimmed.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(lineno, "bad numeric value"))?;
            if !v.is_finite() {
                return Err(parse_err(lineno, "non-finite value"));
            }
            values.push(v);
        }
    }
    if values.len() != expected {
        return Err(parse_err(
            0,
            format!("expected {expected} array values, found {}", values.len()),
        ));
    }
    // array data is listed column by column
    let mut entries = vec![0.0; n * n];
    let mut it = values.into_iter();
    match symmetry {
        MmSymmetry::General => {
            for j in 0..n {
                for i in 0..n {
                    entries[i * n + j] = it.next().unwrap();
                }
            }
        }
        MmSymmetry::Symmetric => {
            for j in 0..n {
                for i in j..n {
                    let v = it.next().unwrap();
                    entries[i * n + j] = v;
                    entries[j * n + i] = v;
                }
            }
        }
        MmSymmetry::SkewSymmetric => {
            for j in 0..n {
                for i in j + 1..n {
                    let v = it.next().unwrap();
                    entries[i * n + j] = v;
                    entries[j * n + i] = -v;
                }
            }
        }
    }
    let hint = symmetry == MmSymmetry::Symmetric;
    Ok(Matrix::dense(n, entries)?.with_symmetry_hint(hint))
}

/// Write a matrix in Matrix Market exchange format.
///
/// CSR storage is written as `coordinate real general` with every stored
/// entry; dense storage as `array real general`. Values are printed with the
/// shortest representation that parses back to the identical double, so a
/// write/read round trip is exact.
pub fn mm_write(matrix: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut w = BufWriter::new(file);
    let n = matrix.n();
    if let Some((row_ptr, col_idx, values)) = matrix.csr_parts() {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", n, n, values.len())?;
        for i in 0..n {
            for k in row_ptr[i]..row_ptr[i + 1] {
                writeln!(w, "{} {} {}", i + 1, col_idx[k] + 1, values[k])?;
            }
        }
    } else {
        writeln!(w, "%%MatrixMarket matrix array real general")?;
        writeln!(w, "{} {}", n, n)?;
        for j in 0..n {
            for i in 0..n {
                writeln!(w, "{}", matrix.get(i, j))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{generate, MatrixSpec};

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn coordinate_general() {
        let f = write_tmp(
            "%%MatrixMarket matrix coordinate real general\n\
             % a comment\n\
             2 2 2\n\
             1 1 2.0\n\
             2 2 1.0\n",
        );
        let m = mm_read(f.path()).unwrap();
        assert_eq!(m.n(), 2);
        assert_eq!(m.get(0, 0), 2.0);
        assert_eq!(m.get(1, 1), 1.0);
        assert_eq!(m.get(0, 1), 0.0);
    }

    #[test]
    fn symmetric_expansion() {
        let f = write_tmp(
            "%%MatrixMarket matrix coordinate real symmetric\n\
             2 2 3\n\
             1 1 5.0\n\
             2 1 3.0\n\
             2 2 7.0\n",
        );
        let m = mm_read(f.path()).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert!(m.symmetry_hint());
    }

    #[test]
    fn skew_symmetric_expansion() {
        let f = write_tmp(
            "%%MatrixMarket matrix coordinate real skew-symmetric\n\
             2 2 1\n\
             2 1 4.0\n",
        );
        let m = mm_read(f.path()).unwrap();
        assert_eq!(m.get(1, 0), 4.0);
        assert_eq!(m.get(0, 1), -4.0);
        assert_eq!(m.get(0, 0), 0.0);
    }

    #[test]
    fn pattern_entries_are_unit() {
        let f = write_tmp(
            "%%MatrixMarket matrix coordinate pattern general\n\
             2 2 2\n\
             1 2\n\
             2 1\n",
        );
        let m = mm_read(f.path()).unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 0), 1.0);
    }

    #[test]
    fn array_general_column_major() {
        let f = write_tmp(
            "%%MatrixMarket matrix array real general\n\
             2 2\n\
             1\n3\n2\n4\n",
        );
        let m = mm_read(f.path()).unwrap();
        // columns (1,3) and (2,4)
        assert_eq!(m.get(0, 0), 1.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(0, 1), 2.0);
        assert_eq!(m.get(1, 1), 4.0);
    }

    #[test]
    fn array_symmetric_lower_triangle() {
        // lower triangle by columns: (1,1), (2,1), (2,2)
        let f = write_tmp(
            "%%MatrixMarket matrix array real symmetric\n\
             2 2\n\
             4\n-1\n3\n",
        );
        let m = mm_read(f.path()).unwrap();
        assert_eq!(m.get(0, 0), 4.0);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.get(0, 1), -1.0);
        assert_eq!(m.get(1, 1), 3.0);
    }

    #[test]
    fn rejects_malformed_inputs() {
        let banner = write_tmp("%%NotMatrixMarket matrix coordinate real general\n1 1 0\n");
        assert!(matches!(
            mm_read(banner.path()),
            Err(Error::MatrixMarket { .. })
        ));

        let complex =
            write_tmp("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
        assert!(mm_read(complex.path()).is_err());

        let nonsquare =
            write_tmp("%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 1.0\n");
        assert!(mm_read(nonsquare.path()).is_err());

        let out_of_range =
            write_tmp("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
        assert!(mm_read(out_of_range.path()).is_err());

        let duplicate =
            write_tmp("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 2.0\n");
        assert!(mm_read(duplicate.path()).is_err());
    }

    #[test]
    fn roundtrip_is_bitwise_exact() {
        let a = generate(&MatrixSpec::RandomTridiagonal { n: 50, seed: 7 }).unwrap();
        let tmp = tempfile::NamedTempFile::new().unwrap();
        mm_write(&a, tmp.path()).unwrap();
        let b = mm_read(tmp.path()).unwrap();
        let (rp_a, ci_a, v_a) = a.csr_parts().unwrap();
        let (rp_b, ci_b, v_b) = b.csr_parts().unwrap();
        assert_eq!(rp_a, rp_b);
        assert_eq!(ci_a, ci_b);
        for (x, y) in v_a.iter().zip(v_b.iter()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn dense_roundtrip() {
        let a = Matrix::dense(2, vec![1.5, -2.25, 0.1, 4.0]).unwrap();
        let tmp = tempfile::NamedTempFile::new().unwrap();
        mm_write(&a, tmp.path()).unwrap();
        let b = mm_read(tmp.path()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.get(i, j).to_bits(), b.get(i, j).to_bits());
            }
        }
    }
}
