//! Text formats: the knot record file, the Λ-matrix file, and the Laurent
//! polynomial grammar shared with the command line.
//!
//! Polynomial grammar: signed terms of the forms `c`, `c*t^e`, `t^e`, `t`
//! with integer `c` and integer exponent `e`; whitespace is ignored.
//! Example: `t^-1 - 1 + t`.
//!
//! Knot files are line oriented with `#` comments:
//! ```text
//! knot trefoil
//! seifert 2
//! -1 1
//! 0 -1
//! ```
//!
//! Λ-matrix files: a size line `n`, then n lines of n entries separated by
//! semicolons, each entry in the polynomial grammar.

use std::fmt;

use zgenus_core::exactmat::ExactMatrix;
use zgenus_core::knot::KnotRecord;
use zgenus_core::laurent::{HermitianLambdaMatrix, LambdaMatrix, LaurentPoly};
use zgenus_core::num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Parse one polynomial in the grammar. `line` is only used for error
/// reporting.
pub fn parse_poly(input: &str, line: usize) -> Result<LaurentPoly, ParseError> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err(line, "empty polynomial"));
    }
    let bytes = compact.as_bytes();
    let mut pos = 0usize;
    let mut poly = LaurentPoly::zero();
    let mut first_term = true;
    while pos < bytes.len() {
        // sign
        let mut sign = 1i64;
        match bytes[pos] {
            b'+' => pos += 1,
            b'-' => {
                sign = -1;
                pos += 1;
            }
            _ if first_term => {}
            c => {
                return Err(err(
                    line,
                    format!("expected '+' or '-' before term, found '{}'", c as char),
                ))
            }
        }
        first_term = false;
        if pos >= bytes.len() {
            return Err(err(line, "dangling sign"));
        }
        // coefficient and/or t-power
        let mut coeff: Option<i64> = None;
        if bytes[pos].is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let c: i64 = compact[start..pos]
                .parse()
                .map_err(|_| err(line, "coefficient out of range"))?;
            coeff = Some(c);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                if pos >= bytes.len() || bytes[pos] != b't' {
                    return Err(err(line, "expected 't' after '*'"));
                }
            } else if pos < bytes.len() && bytes[pos] == b't' {
                return Err(err(line, "write coefficients as 'c*t^e'"));
            }
        }
        let mut exp = 0i64;
        if pos < bytes.len() && bytes[pos] == b't' {
            pos += 1;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let start = pos;
                if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                    pos += 1;
                }
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(err(line, "missing exponent after '^'"));
                }
                exp = compact[start..pos]
                    .parse()
                    .map_err(|_| err(line, "exponent out of range"))?;
            }
        } else if coeff.is_none() {
            return Err(err(
                line,
                format!("expected a term at '{}'", &compact[pos..]),
            ));
        }
        let c = sign * coeff.unwrap_or(1);
        poly = poly.add(&LaurentPoly::monomial(exp, c));
    }
    Ok(poly)
}

/// Canonical printed form; `parse_poly` of the output returns the input.
pub fn print_poly(p: &LaurentPoly) -> String {
    p.to_string()
}

/// Parse a whole knot file: records of `knot <name>` followed by
/// `seifert <n>` and n rows of n integers. `#` starts a comment.
pub fn parse_knot_file(input: &str) -> Result<Vec<KnotRecord>, ParseError> {
    let mut records = Vec::new();
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();
    while let Some((lineno, line)) = lines.next() {
        let Some(name) = line.strip_prefix("knot ") else {
            return Err(err(lineno, format!("expected 'knot <name>', found '{line}'")));
        };
        let name = name.trim();
        if name.is_empty() {
            return Err(err(lineno, "empty knot name"));
        }
        let Some((szline, sz)) = lines.next() else {
            return Err(err(lineno, "missing 'seifert <n>' after knot header"));
        };
        let Some(n_str) = sz.strip_prefix("seifert ") else {
            return Err(err(szline, format!("expected 'seifert <n>', found '{sz}'")));
        };
        let n: usize = n_str
            .trim()
            .parse()
            .map_err(|_| err(szline, format!("bad matrix size '{n_str}'")))?;
        if n % 2 != 0 {
            return Err(err(szline, format!("Seifert matrix size {n} is odd")));
        }
        let mut entries: Vec<BigInt> = Vec::with_capacity(n * n);
        for row in 0..n {
            let Some((rline, rtext)) = lines.next() else {
                return Err(err(szline, format!("missing row {} of {n}", row + 1)));
            };
            let cells: Vec<&str> = rtext.split_whitespace().collect();
            if cells.len() != n {
                return Err(err(
                    rline,
                    format!("expected {n} entries in row {}, found {}", row + 1, cells.len()),
                ));
            }
            for cell in cells {
                let v: i64 = cell
                    .parse()
                    .map_err(|_| err(rline, format!("bad integer '{cell}'")))?;
                entries.push(BigInt::from(v));
            }
        }
        let record = KnotRecord::new(name, ExactMatrix::new(n, n, entries), "file");
        if let Err(e) = record.validate() {
            return Err(err(lineno, format!("{e}")));
        }
        records.push(record);
    }
    Ok(records)
}

pub fn print_knot_file(records: &[KnotRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!("knot {}\n", r.name));
        let n = r.seifert.rows();
        out.push_str(&format!("seifert {n}\n"));
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| r.seifert[(i, j)].to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// Parse a Hermitian Λ-matrix file.
pub fn parse_lambda_matrix_file(input: &str) -> Result<HermitianLambdaMatrix, ParseError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let Some((szline, sz)) = lines.next() else {
        return Err(err(1, "empty file"));
    };
    let n: usize = sz
        .parse()
        .map_err(|_| err(szline, format!("expected matrix size, found '{sz}'")))?;
    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let Some((rline, rtext)) = lines.next() else {
            return Err(err(szline, format!("missing row {} of {n}", row + 1)));
        };
        let cells: Vec<&str> = rtext.split(';').collect();
        if cells.len() != n {
            return Err(err(
                rline,
                format!("expected {n} entries in row {}, found {}", row + 1, cells.len()),
            ));
        }
        for cell in cells {
            entries.push(parse_poly(cell, rline)?);
        }
    }
    let m = LambdaMatrix::new(n, entries);
    HermitianLambdaMatrix::new(m).map_err(|e| err(szline, format!("{e}")))
}

pub fn print_lambda_matrix(m: &HermitianLambdaMatrix) -> String {
    let n = m.size();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| print_poly(&m.matrix()[(i, j)])).collect();
        out.push_str(&row.join(" ; "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use zgenus_core::knot::standard;

    #[test]
    fn poly_round_trip() {
        let cases = ["t^-1 - 1 + t", "5", "-3*t^2 + 1", "t", "0", "2*t^-3 - t + 4"];
        for c in cases {
            let p = parse_poly(c, 1).unwrap();
            let printed = print_poly(&p);
            let back = parse_poly(&printed, 1).unwrap();
            assert_eq!(p, back, "{c} -> {printed}");
        }
        // the trefoil polynomial parses to the expected value
        let tre = parse_poly("t^-1-1+t", 1).unwrap();
        assert_eq!(tre, standard::trefoil().alexander().unwrap());
    }

    #[test]
    fn poly_print_parse_roundtrip_random() {
        // deterministic sweep over random-ish sparse polynomials
        let mut state: u64 = 0x9e37;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let nterms = (next() % 5) as usize;
            let mut p = LaurentPoly::zero();
            for _ in 0..nterms {
                let e = (next() % 11) as i64 - 5;
                let c = (next() % 19) as i64 - 9;
                p = p.add(&LaurentPoly::monomial(e, c));
            }
            let printed = print_poly(&p);
            let back = parse_poly(&printed, 1).unwrap();
            assert_eq!(p, back, "{printed}");
        }
    }

    #[test]
    fn poly_errors() {
        assert!(parse_poly("", 3).is_err());
        assert!(parse_poly("t^", 1).is_err());
        assert!(parse_poly("2t", 1).is_err());
        assert!(parse_poly("+ +1", 1).is_err());
        assert!(parse_poly("x", 1).is_err());
    }

    #[test]
    fn knot_file_round_trip() {
        let text = "# sample\nknot trefoil\nseifert 2\n-1 1\n0 -1\n\nknot unknot\nseifert 0\n";
        let records = parse_knot_file(text).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].name, "trefoil");
        assert_eq!(records[0].seifert, standard::trefoil().seifert);
        assert_eq!(records[1].seifert.rows(), 0);
        let printed = print_knot_file(&records);
        let back = parse_knot_file(&printed).unwrap();
        assert_eq!(records, back);
    }

    #[test]
    fn knot_file_errors_carry_lines() {
        let odd = "knot bad\nseifert 3\n1 0 0\n0 1 0\n0 0 1\n";
        let e = parse_knot_file(odd).unwrap_err();
        assert_eq!(e.line, 2);
        let singular = "knot bad\nseifert 2\n0 0\n0 0\n";
        let e2 = parse_knot_file(singular).unwrap_err();
        assert_eq!(e2.line, 1);
        assert!(e2.message.contains("det"));
        let short = "knot bad\nseifert 2\n1 1\n";
        assert!(parse_knot_file(short).is_err());
    }

    #[test]
    fn lambda_file_round_trip() {
        let text = "2\n0 ; 1 + t\n1 + t^-1 ; 0\n";
        let m = parse_lambda_matrix_file(text).unwrap();
        let printed = print_lambda_matrix(&m);
        let back = parse_lambda_matrix_file(&printed).unwrap();
        assert_eq!(m, back);
        // non-Hermitian rejected
        let bad = "2\n0 ; t\nt ; 0\n";
        assert!(parse_lambda_matrix_file(bad).is_err());
    }
}
