//! Matrix files.
//!
//! JSON: `{"rows":R,"cols":C,"data":[[["re","im"],...],...]}` with every number
//! written as a string. CSV: one row per line, comma-separated complex literals
//! `a`, `bi`, `a+bi`, `a-bi`, where `a` and `b` are decimals or rationals `p/q`;
//! lines starting with `#` are ignored.
//!
//! [`to_json`] writes the canonical form: compact JSON plus a trailing
//! newline, floats in shortest round-trip notation and rationals reduced.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numfield::{rational_to_f64, ApproxC, ExactC, Mat, Scalar};

/// One real literal as written in a file.
#[derive(Debug, Clone, PartialEq)]
pub struct RealLit {
    /// Exact value of the literal (decimals are converted digit by digit).
    pub value: BigRational,
    /// Written as `p/q`.
    pub is_ratio: bool,
    /// Correctly rounded float value.
    pub float: f64,
}

impl RealLit {
    pub fn parse(s: &str) -> Result<RealLit> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        if let Some((p, q)) = s.split_once('/') {
            let num: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in '{s}'")))?;
            let den: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in '{s}'")))?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            let value = BigRational::new(num, den);
            let float = rational_to_f64(&value);
            return Ok(RealLit {
                value,
                is_ratio: true,
                float,
            });
        }
        let value = parse_decimal(s)?;
        let float: f64 = s.parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
        Ok(RealLit {
            value,
            is_ratio: false,
            float,
        })
    }
}

/// Exact value of `[-+]digits[.digits][e[-+]digits]`.
fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad number '{s}'"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = BigRational::from_integer(digits);
    if scale >= 0 {
        v *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -v } else { v })
}

/// Parse a complex literal: `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> Result<(RealLit, RealLit)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty entry".into()));
    }
    let zero = || RealLit {
        value: BigRational::zero(),
        is_ratio: false,
        float: 0.0,
    };
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok((RealLit::parse(&t)?, zero()));
    };
    // split at the last sign that is not leading and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (RealLit::parse(&body[..p])?, &body[p..]),
        None => (zero(), body),
    };
    let im = match im {
        "" | "+" => RealLit {
            value: BigRational::one(),
            is_ratio: false,
            float: 1.0,
        },
        "-" => RealLit {
            value: -BigRational::one(),
            is_ratio: false,
            float: -1.0,
        },
        other => RealLit::parse(other)?,
    };
    Ok((re, im))
}

/// A parsed matrix file, not yet committed to a backend.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixText {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(RealLit, RealLit)>,
}

impl MatrixText {
    /// Any entry written as `p/q`.
    pub fn has_rational(&self) -> bool {
        self.entries.iter().any(|(r, i)| r.is_ratio || i.is_ratio)
    }

    pub fn to_exact(&self) -> Mat<ExactC> {
        let mut it = self.entries.iter();
        Mat::from_fn(self.rows, self.cols, |_, _| {
            let (r, i) = it.next().expect("entry count checked at parse time");
            Complex::new(r.value.clone(), i.value.clone())
        })
    }

    pub fn to_float(&self) -> Mat<ApproxC> {
        let mut it = self.entries.iter();
        Mat::from_fn(self.rows, self.cols, |_, _| {
            let (r, i) = it.next().expect("entry count checked at parse time");
            Complex::new(r.float, i.float)
        })
    }

    fn from_rows(rows: Vec<Vec<(RealLit, RealLit)>>) -> Result<MatrixText> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("rows have different lengths".into()));
        }
        Ok(MatrixText {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<[String; 2]>>,
}

pub fn parse_json(text: &str) -> Result<MatrixText> {
    let jm: JsonMatrix = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    if jm.data.len() != jm.rows {
        return Err(Error::Parse(format!("declared {} rows, found {}", jm.rows, jm.data.len())));
    }
    let rows = jm
        .data
        .iter()
        .map(|row| {
            if row.len() != jm.cols {
                return Err(Error::Parse(format!("declared {} columns, found {}", jm.cols, row.len())));
            }
            row.iter()
                .map(|[re, im]| Ok((RealLit::parse(re)?, RealLit::parse(im)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut mt = MatrixText::from_rows(rows)?;
    mt.rows = jm.rows;
    mt.cols = jm.cols;
    Ok(mt)
}

pub fn parse_csv(text: &str) -> Result<MatrixText> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(',').map(parse_complex).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("no matrix rows".into()));
    }
    MatrixText::from_rows(rows)
}

/// JSON if the text starts with `{`, CSV otherwise.
pub fn parse_auto(text: &str) -> Result<MatrixText> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

/// The JSON value of a matrix.
pub fn json_value<T: Scalar>(m: &Mat<T>) -> serde_json::Value {
    serde_json::to_value(json_matrix(m)).expect("matrix serializes")
}

fn json_matrix<T: Scalar>(m: &Mat<T>) -> JsonMatrix {
    JsonMatrix {
        rows: m.rows(),
        cols: m.cols(),
        data: m.to_rows().iter().map(|row| row.iter().map(Scalar::part_strings).collect()).collect(),
    }
}

/// Canonical JSON text of a matrix, newline-terminated.
pub fn to_json<T: Scalar>(m: &Mat<T>) -> String {
    let mut s = serde_json::to_string(&json_matrix(m)).expect("matrix serializes");
    s.push('\n');
    s
}

/// CSV text of a matrix.
pub fn to_csv<T: Scalar>(m: &Mat<T>) -> String {
    let mut out = String::new();
    for row in m.to_rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|v| {
                let [re, im] = v.part_strings();
                if im == "0" {
                    re
                } else if im.starts_with('-') {
                    format!("{re}{im}i")
                } else {
                    format!("{re}+{im}i")
                }
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
