//! Text formats: scalar literals, form literals, algebra spec files and
//! J-matrix files.
//!
//! Scalar literals: `p/q`, `p/q+r/s s3`, `-r/s s3`, with `s3` the token
//! for √3 (a space before `s3` is optional). Form literals: signed sums of
//! `c*e{i1 i2 ...}`; when every index is a single digit the braces may hold
//! them unseparated, e.g. `-1*e{12}+1*e{34}+1*e{56}`.
//!
//! Algebra files: a `dim N` line followed by `d eK = <form literal>` lines,
//! one per non-closed generator. `#` starts a comment. Matrix files: 2n
//! lines of 2n scalar literals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::forms::KForm;
use crate::lie::{LieAlgebraSpec, LieError};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn at(pos: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line: None,
            pos,
            msg: msg.into(),
        }
    }

    fn on_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {}, column {}: {}", l, self.pos + 1, self.msg),
            None => write!(f, "column {}: {}", self.pos + 1, self.msg),
        }
    }
}

impl fmt::Debug for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::at(start, "expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<BigInt>()
            .map_err(|_| ParseError::at(start, "malformed number"))
    }

    /// `p` or `p/q`, with optional leading sign.
    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let num = self.integer()?;
        let num = if neg { -num } else { num };
        if self.eat(b'/') {
            let pos = self.pos;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(ParseError::at(pos, "zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from(num))
        }
    }

    /// Consumes the token `s3` (optionally preceded by whitespace or `*`)
    /// when present.
    fn try_s3(&mut self) -> bool {
        let save = self.pos;
        self.skip_ws();
        self.eat(b'*');
        self.skip_ws();
        if self.src[self.pos..].starts_with(b"s3") {
            // must not run into a longer identifier or number
            let after = self.src.get(self.pos + 2).copied();
            if !matches!(after, Some(c) if c.is_ascii_alphanumeric()) {
                self.pos += 2;
                return true;
            }
        }
        self.pos = save;
        false
    }

    /// A full scalar literal, consumed greedily.
    fn scalar(&mut self) -> Result<Scalar, ParseError> {
        self.skip_ws();
        // bare `s3` / `-s3`
        let save = self.pos;
        let neg = self.eat(b'-');
        if !neg {
            // do not consume '+' here; rational() handles it
        }
        if self.try_s3() {
            let one = Rational::from(BigInt::from(if neg { -1 } else { 1 }));
            return Ok(Scalar::new(Rational::zero(), one));
        }
        self.pos = save;

        let first = self.rational()?;
        if self.try_s3() {
            return Ok(Scalar::new(Rational::zero(), first));
        }
        // optional `± r/s s3` continuation; only taken when the s3 is there
        let save = self.pos;
        let mut probe = Cursor {
            src: self.src,
            pos: self.pos,
        };
        probe.skip_ws();
        if matches!(probe.peek(), Some(b'+') | Some(b'-')) {
            if let Ok(second) = probe.rational() {
                if probe.try_s3() {
                    self.pos = probe.pos;
                    return Ok(Scalar::new(first, second));
                }
            }
        }
        self.pos = save;
        Ok(Scalar::new(first, Rational::zero()))
    }

    /// `e{...}` multi-index; digits may be packed (`e{135}`) or
    /// whitespace-separated (`e{1 3 5}`).
    fn monomial_indices(&mut self) -> Result<Vec<u8>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if !self.eat(b'e') {
            return Err(ParseError::at(start, "expected `e{...}`"));
        }
        if !self.eat(b'{') {
            return Err(ParseError::at(self.pos, "expected `{` after `e`"));
        }
        let body_start = self.pos;
        while self.peek().is_some() && self.peek() != Some(b'}') {
            self.pos += 1;
        }
        if !self.eat(b'}') {
            return Err(ParseError::at(self.pos, "unterminated `e{...}`"));
        }
        let body = std::str::from_utf8(&self.src[body_start..self.pos - 1]).unwrap();
        let mut out = Vec::new();
        if body.contains(char::is_whitespace) {
            for tok in body.split_whitespace() {
                let v: u8 = tok
                    .parse()
                    .map_err(|_| ParseError::at(body_start, "malformed index"))?;
                out.push(v);
            }
        } else {
            for ch in body.chars() {
                let v = ch
                    .to_digit(10)
                    .ok_or_else(|| ParseError::at(body_start, "malformed index"))?;
                out.push(v as u8);
            }
        }
        if out.is_empty() {
            return Err(ParseError::at(body_start, "empty multi-index"));
        }
        Ok(out)
    }
}

/// Parses a scalar literal; the whole string must be consumed.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseError> {
    let mut c = Cursor::new(text);
    let s = c.scalar()?;
    if !c.at_end() {
        return Err(ParseError::at(c.pos, "trailing input after scalar"));
    }
    Ok(s)
}

/// Parses a whitespace-separated row of scalar literals.
pub fn parse_scalar_row(text: &str) -> Result<Vec<Scalar>, ParseError> {
    let mut c = Cursor::new(text);
    let mut out = Vec::new();
    while !c.at_end() {
        out.push(c.scalar()?);
    }
    Ok(out)
}

/// Parses a form literal. `dim` fixes the ambient dimension; the degree is
/// inferred from the first term.
pub fn parse_form(text: &str, dim: u8) -> Result<KForm<Scalar>, ParseError> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    if c.peek() == Some(b'0') && {
        let mut probe = Cursor { src: c.src, pos: c.pos + 1 };
        probe.at_end()
    } {
        return Ok(KForm::zero(dim, 0));
    }
    let mut form: Option<KForm<Scalar>> = None;
    while !c.at_end() {
        let term_start = c.pos;
        let coeff = c.scalar()?;
        let save = c.pos;
        c.skip_ws();
        let monomial = if c.eat(b'*') {
            let ix = c.monomial_indices()?;
            KForm::monomial(dim, &ix, coeff)
                .map_err(|e| ParseError::at(term_start, e.to_string()))?
        } else {
            c.pos = save;
            KForm::unit(dim).scale(&coeff)
        };
        form = Some(match form {
            None => monomial,
            Some(f) => {
                if f.degree() != monomial.degree() {
                    return Err(ParseError::at(
                        term_start,
                        format!(
                            "mixed degrees in form literal: {} vs {}",
                            f.degree(),
                            monomial.degree()
                        ),
                    ));
                }
                f + monomial
            }
        });
    }
    form.ok_or_else(|| ParseError::at(0, "empty form literal"))
}

/// Parses an algebra spec file (see module docs for the format) and
/// validates the Jacobi identity.
pub fn parse_algebra(text: &str) -> Result<LieAlgebraSpec<Scalar>, ParseError> {
    let mut dim: Option<u8> = None;
    let mut diffs: Vec<(usize, u8, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("dim") {
            if dim.is_some() {
                return Err(ParseError::at(0, "duplicate `dim` line").on_line(lineno + 1));
            }
            let n: u8 = rest
                .trim()
                .parse()
                .map_err(|_| ParseError::at(0, "malformed dimension").on_line(lineno + 1))?;
            if n == 0 {
                return Err(ParseError::at(0, "dimension must be positive").on_line(lineno + 1));
            }
            dim = Some(n);
            continue;
        }
        if let Some(rest) = line.strip_prefix("d") {
            let rest = rest.trim_start();
            let Some(rest) = rest.strip_prefix('e') else {
                return Err(
                    ParseError::at(0, "expected `d eK = <form>`").on_line(lineno + 1)
                );
            };
            let Some(eq) = rest.find('=') else {
                return Err(ParseError::at(0, "missing `=`").on_line(lineno + 1));
            };
            let gen: u8 = rest[..eq]
                .trim()
                .parse()
                .map_err(|_| ParseError::at(0, "malformed generator index").on_line(lineno + 1))?;
            diffs.push((lineno + 1, gen, rest[eq + 1..].to_string()));
            continue;
        }
        return Err(ParseError::at(0, format!("unrecognized line `{line}`")).on_line(lineno + 1));
    }
    let Some(n) = dim else {
        return Err(ParseError::at(0, "missing `dim N` line"));
    };
    let mut forms: Vec<KForm<Scalar>> = (0..n).map(|_| KForm::zero(n, 2)).collect();
    for (lineno, gen, body) in diffs {
        if gen == 0 || gen > n {
            return Err(
                ParseError::at(0, format!("generator e{gen} outside 1..={n}")).on_line(lineno)
            );
        }
        let f = parse_form(&body, n).map_err(|e| e.on_line(lineno))?;
        if f.degree() != 2 && !f.is_zero() {
            return Err(ParseError::at(0, "differential must be a 2-form").on_line(lineno));
        }
        let f = if f.is_zero() { KForm::zero(n, 2) } else { f };
        forms[(gen - 1) as usize] = f;
    }
    LieAlgebraSpec::new(n, forms).map_err(|e| match e {
        LieError::JacobiFailure { generator, residue } => ParseError::at(
            0,
            format!(
                "Jacobi identity fails at generator e{generator}: d\u{b2}e{generator} = {residue}"
            ),
        ),
        other => ParseError::at(0, other.to_string()),
    })
}

/// Serializes a spec in the algebra file format.
pub fn algebra_to_text(spec: &LieAlgebraSpec<Scalar>) -> String {
    let mut out = format!("dim {}\n", spec.dim());
    for i in 1..=spec.dim() {
        let d = spec.diff_of_generator(i);
        if !d.is_zero() {
            out.push_str(&format!("d e{} = {}\n", i, d.to_literal()));
        }
    }
    out
}

/// Parses a square matrix of scalar literals, one row per line.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Scalar>>, ParseError> {
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = parse_scalar_row(line).map_err(|e| e.on_line(lineno + 1))?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError::at(0, "empty matrix file"));
    }
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(ParseError::at(
                0,
                format!("row {} has {} entries, expected {}", i + 1, r.len(), n),
            ));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::signed_monomials;

    #[test]
    fn scalar_literals() {
        assert_eq!(parse_scalar("3").unwrap(), Scalar::int(3));
        assert_eq!(parse_scalar("-1/2").unwrap(), Scalar::rat(-1, 2));
        assert_eq!(
            parse_scalar("1/2+1/2 s3").unwrap(),
            Scalar::rat(1, 2) + Scalar::sqrt3_times(1, 2)
        );
        assert_eq!(
            parse_scalar("1/2-1/2s3").unwrap(),
            Scalar::rat(1, 2) - Scalar::sqrt3_times(1, 2)
        );
        assert_eq!(parse_scalar("2 s3").unwrap(), Scalar::sqrt3_times(2, 1));
        assert_eq!(parse_scalar("s3").unwrap(), Scalar::sqrt3());
        assert_eq!(parse_scalar("-s3").unwrap(), -Scalar::sqrt3());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("3x").is_err());
    }

    #[test]
    fn scalar_roundtrip_via_literal() {
        for s in [
            Scalar::int(0),
            Scalar::int(-7),
            Scalar::rat(3, 4),
            Scalar::sqrt3(),
            -Scalar::sqrt3_times(2, 5),
            Scalar::rat(-1, 2) + Scalar::sqrt3_times(5, 3),
            Scalar::rat(1, 2) - Scalar::sqrt3_times(1, 2),
        ] {
            assert_eq!(parse_scalar(&s.to_literal()).unwrap(), s, "{}", s.to_literal());
        }
    }

    #[test]
    fn form_literals() {
        let sigma = parse_form("-1*e{12}+1*e{34}+1*e{56}", 6).unwrap();
        assert_eq!(
            sigma,
            signed_monomials(6, &[(-1, &[1, 2]), (1, &[3, 4]), (1, &[5, 6])])
        );
        let spaced = parse_form("1*e{1 2} - 1*e{3 4}", 6).unwrap();
        assert_eq!(spaced, signed_monomials(6, &[(1, &[1, 2]), (-1, &[3, 4])]));
        let irr = parse_form("-3 s3*e{145}", 6).unwrap();
        assert_eq!(irr.coeff(&[1, 4, 5]), -Scalar::sqrt3_times(3, 1));
        assert!(parse_form("1*e{12}+1*e{345}", 6).is_err());
        assert!(parse_form("1*e{12", 6).is_err());
    }

    #[test]
    fn form_roundtrip_via_literal() {
        let f = signed_monomials(6, &[(3, &[1, 3, 5]), (1, &[1, 4, 6]), (-8, &[2, 4, 5])]);
        let g = f.clone() + KForm::monomial(6, &[1, 4, 5], -Scalar::sqrt3_times(3, 1)).unwrap();
        assert_eq!(parse_form(&g.to_literal(), 6).unwrap(), g);
    }

    #[test]
    fn algebra_file_m6() {
        let text = "dim 6\nd e4 = 1*e{15}\nd e6 = 1*e{13}\n";
        let spec = parse_algebra(text).unwrap();
        assert_eq!(spec.dim(), 6);
        assert_eq!(
            spec.diff_of_generator(4),
            &signed_monomials(6, &[(1, &[1, 5])])
        );
        assert!(spec.diff_of_generator(1).is_zero());
        // round-trip
        let again = parse_algebra(&algebra_to_text(&spec)).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn algebra_file_errors() {
        // abelian: just the dim line
        assert!(parse_algebra("dim 6\n").is_ok());
        let bad = parse_algebra("dim 3\nd e2 = 1*e{13}\nd e3 = 1*e{23}\n");
        let err = bad.unwrap_err();
        assert!(err.msg.contains("Jacobi"), "{err}");
        let syntax = parse_algebra("dim 3\nd e2 1*e{13}\n").unwrap_err();
        assert_eq!(syntax.line, Some(2));
    }

    #[test]
    fn matrix_rows() {
        let rows = parse_matrix("0 1\n-1 0\n").unwrap();
        assert_eq!(rows[0][1], Scalar::int(1));
        assert_eq!(rows[1][0], Scalar::int(-1));
        let with_s3 = parse_matrix("1/2 1/2 s3\n-1/2 s3 1/2\n").unwrap();
        assert_eq!(with_s3[0][1], Scalar::sqrt3_times(1, 2));
        assert_eq!(with_s3[1][0], -Scalar::sqrt3_times(1, 2));
        assert!(parse_matrix("1 2 3\n4 5\n").is_err());
    }
}
