//! Text matrix format: header `d d`, then `d` rows of `d` tokens `re,im`.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt::Write;

pub fn write_cmat(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = String::with_capacity(n * n * 24 + 16);
    let _ = writeln!(out, "{n} {n}");
    for i in 0..n {
        for (j, z) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            // Debug formatting is the shortest representation that round-trips.
            let _ = write!(out, "{:?},{:?}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

pub fn parse_cmat(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (line_no, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::Parse { line: line_no, message: format!("bad dimension {s:?}") })
    };
    if dims.len() != 2 {
        return Err(Error::Parse { line: line_no, message: "header must be \"d d\"".into() });
    }
    let (r, c) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    if r != c || r == 0 {
        return Err(Error::Parse {
            line: line_no,
            message: format!("matrix must be square and nonempty, got {r}x{c}"),
        });
    }
    let mut data = Vec::with_capacity(r * r);
    let mut rows = 0;
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        if rows == r {
            return Err(Error::Parse { line: line_no, message: format!("unexpected data after {r} rows") });
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != r {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {r} entries, found {}", tokens.len()),
            });
        }
        for tok in tokens {
            data.push(parse_entry(tok).map_err(|message| Error::Parse { line: line_no, message })?);
        }
        rows += 1;
    }
    if rows != r {
        return Err(Error::Parse { line: line_no + rows + 1, message: format!("expected {r} rows, found {rows}") });
    }
    ComplexMatrix::from_row_major(r, data)
}

fn parse_entry(tok: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = tok.split_once(',').ok_or_else(|| format!("entry {tok:?} is not of the form re,im"))?;
    let parse = |s: &str| -> std::result::Result<f64, String> {
        let v: f64 = s.parse().map_err(|_| format!("bad number {s:?}"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite value {s:?}"))
        }
    };
    Ok(Complex64::new(parse(re)?, parse(im)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new(0.1 * i as f64 - 1e-300, (j as f64).sqrt() / 3.0));
        assert_eq!(parse_cmat(&write_cmat(&m)).unwrap(), m);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse_cmat("2 2\n1,0 0,0\n0,0 NaN,0\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "non-finite value \"NaN\"".into() });
        assert!(matches!(parse_cmat("2 2\n1,0 0,0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_cmat("2 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_cmat("1 1\n1;0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_cmat("1 1\n1,inf\n"), Err(Error::Parse { line: 2, .. })));
    }
}
