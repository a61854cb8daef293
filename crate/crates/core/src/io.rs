//! Plain-text CSV matrices and vectors: one row per line, `.` decimal
//! separator, no header.

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

pub fn parse_matrix_csv(text: &str) -> Result<DenseMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: cannot parse {field:?} as a number", lineno + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    DenseMatrix::from_rows(rows)
}

/// Reads a vector stored either as a single row or as a single column.
pub fn parse_vector_csv(text: &str) -> Result<DenseVector> {
    let m = parse_matrix_csv(text)?;
    match m.shape() {
        (1, _) => DenseVector::new(m.row(0).to_vec()),
        (_, 1) => DenseVector::new(m.column(0)),
        (r, c) => Err(Error::Shape(format!("expected a single row or column, got {r}x{c}"))),
    }
}

pub fn format_matrix_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn format_vector_csv(v: &[f64]) -> String {
    let line: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
    line.join(",") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bit_exact() {
        let m = DenseMatrix::from_rows(vec![vec![0.1, -2.5e-17], vec![1.0 / 3.0, 4.0]]).unwrap();
        assert_eq!(parse_matrix_csv(&format_matrix_csv(&m)).unwrap(), m);
    }

    #[test]
    fn ragged_and_garbage() {
        assert!(matches!(parse_matrix_csv("1,2\n3\n"), Err(Error::Shape(_))));
        assert!(matches!(parse_matrix_csv("1,x\n"), Err(Error::Parse(_))));
        assert!(parse_matrix_csv("\n\n").is_err());
        assert!(parse_matrix_csv("1,nan\n").is_err());
    }

    #[test]
    fn vectors_as_row_or_column() {
        assert_eq!(parse_vector_csv("1,2,3\n").unwrap().as_slice(), &[1.0, 2.0, 3.0]);
        assert_eq!(parse_vector_csv("1\n2\n3\n").unwrap().as_slice(), &[1.0, 2.0, 3.0]);
        assert!(parse_vector_csv("1,2\n3,4\n").is_err());
    }
}
