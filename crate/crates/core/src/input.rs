//! Text formats for similarity matrices.
//!
//! Two layouts are accepted:
//!
//! * dense: `n` lines of `n` values separated by whitespace, commas or semicolons;
//! * sparse: a header `n m` followed by `m` lines `i j w` with 1-based `i != j`.
//!
//! Blank lines and lines starting with `#` are ignored. Values are read as exact
//! decimals and scaled to a common integer unit, so `0.5` and `1.25` become
//! `50` and `125`. With a quantization step `eps` every value is instead
//! rounded to the nearest multiple of `eps`.

use std::collections::HashMap;

use thiserror::Error;

use crate::matrix::SimilarityMatrix;
use crate::Weight;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("entries ({row},{col}) and ({col},{row}) differ: {upper} vs {lower}")]
    Asymmetric {
        row: usize,
        col: usize,
        upper: String,
        lower: String,
    },
    #[error("negative off-diagonal entry at ({row},{col}); use --shift to renormalize")]
    NegativeEntry { row: usize, col: usize },
    #[error("values exceed the supported range after scaling")]
    Overflow,
    #[error("quantization step must be a positive finite number, got {0}")]
    BadQuantum(f64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InputFormat {
    #[default]
    Auto,
    Dense,
    Sparse,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadOptions {
    pub format: InputFormat,
    /// Replace each off-diagonal entry `d` by `max(d) - d`.
    pub dissimilarity: bool,
    /// Subtract the smallest off-diagonal entry from every off-diagonal entry.
    pub shift: bool,
    /// Round values to multiples of this step instead of reading them exactly.
    pub quantize: Option<f64>,
}

/// Parses a matrix from text. See the module docs for the accepted layouts.
pub fn load_matrix(source: &str, options: &LoadOptions) -> Result<SimilarityMatrix, LoadError> {
    if let Some(eps) = options.quantize {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(LoadError::BadQuantum(eps));
        }
    }
    let lines: Vec<Line<'_>> = source
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                return None;
            }
            let tokens = text
                .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
                .filter(|t| !t.is_empty())
                .collect();
            Some(Line {
                number: i + 1,
                tokens,
            })
        })
        .collect();

    let format = match options.format {
        InputFormat::Auto => detect_format(&lines),
        f => f,
    };
    let raw = match format {
        InputFormat::Sparse => parse_sparse(&lines, options)?,
        _ => parse_dense(&lines, options)?,
    };
    raw.finish(options)
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

fn detect_format(lines: &[Line<'_>]) -> InputFormat {
    let Some(first) = lines.first() else {
        return InputFormat::Dense;
    };
    let header_like = first.tokens.len() == 2
        && first.tokens.iter().all(|t| t.parse::<usize>().is_ok());
    if header_like && lines[1..].iter().all(|l| l.tokens.len() == 3) {
        InputFormat::Sparse
    } else {
        InputFormat::Dense
    }
}

/// An exact decimal `mantissa * 10^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Decimal {
    mantissa: i128,
    exponent: i32,
}

fn parse_decimal(token: &str) -> Option<Decimal> {
    let (body, exp) = match token.find(['e', 'E']) {
        Some(i) => (&token[..i], token[i + 1..].parse::<i32>().ok()?),
        None => (token, 0),
    };
    let (negative, body) = match body.as_bytes().first()? {
        b'-' => (true, &body[1..]),
        b'+' => (false, &body[1..]),
        _ => (false, body),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let frac_trimmed = frac_part.trim_end_matches('0');
    let mut mantissa: i128 = 0;
    for c in int_part.chars().chain(frac_trimmed.chars()) {
        let d = c.to_digit(10)? as i128;
        mantissa = mantissa.checked_mul(10)?.checked_add(d)?;
    }
    if !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let exponent = exp.checked_sub(i32::try_from(frac_trimmed.len()).ok()?)?;
    Some(Decimal {
        mantissa: if negative { -mantissa } else { mantissa },
        exponent: if mantissa == 0 { 0 } else { exponent },
    })
}

/// A parsed value, kept both exactly and as a float for tolerance checks.
#[derive(Clone, Copy, Debug)]
struct Value {
    exact: Decimal,
    approx: f64,
}

fn parse_value(token: &str, line: usize) -> Result<Value, LoadError> {
    let exact = parse_decimal(token);
    let approx = token.parse::<f64>().ok();
    match (exact, approx) {
        (Some(exact), Some(approx)) if approx.is_finite() => Ok(Value { exact, approx }),
        _ => Err(LoadError::Malformed {
            line,
            message: format!("cannot read '{token}' as a number"),
        }),
    }
}

/// Upper-triangular entries (0-based `i < j`) before normalization.
struct RawMatrix {
    n: usize,
    entries: Vec<(usize, usize, Value)>,
    /// True if pairs not listed in `entries` exist and read as zero.
    implicit_zeros: bool,
}

fn parse_dense(lines: &[Line<'_>], options: &LoadOptions) -> Result<RawMatrix, LoadError> {
    let n = lines.len();
    let mut rows = Vec::with_capacity(n);
    for line in lines {
        if line.tokens.len() != n {
            return Err(LoadError::Malformed {
                line: line.number,
                message: format!(
                    "expected {n} values in a {n}x{n} dense matrix, found {}",
                    line.tokens.len()
                ),
            });
        }
        let row = line
            .tokens
            .iter()
            .map(|t| parse_value(t, line.number))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (upper, lower) = (rows[i][j], rows[j][i]);
            let symmetric = match options.quantize {
                Some(eps) => (upper.approx - lower.approx).abs() <= eps,
                None => normalize(upper.exact) == normalize(lower.exact),
            };
            if !symmetric {
                return Err(LoadError::Asymmetric {
                    row: i + 1,
                    col: j + 1,
                    upper: lines[i].tokens[j].to_string(),
                    lower: lines[j].tokens[i].to_string(),
                });
            }
            entries.push((i, j, upper));
        }
    }
    Ok(RawMatrix {
        n,
        entries,
        implicit_zeros: false,
    })
}

fn normalize(d: Decimal) -> Decimal {
    let mut d = d;
    if d.mantissa == 0 {
        return Decimal {
            mantissa: 0,
            exponent: 0,
        };
    }
    while d.mantissa % 10 == 0 {
        d.mantissa /= 10;
        d.exponent += 1;
    }
    d
}

fn parse_sparse(lines: &[Line<'_>], options: &LoadOptions) -> Result<RawMatrix, LoadError> {
    let Some(header) = lines.first() else {
        return Err(LoadError::Malformed {
            line: 1,
            message: "missing header 'n m'".into(),
        });
    };
    let header_num = |k: usize| -> Result<usize, LoadError> {
        header
            .tokens
            .get(k)
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| LoadError::Malformed {
                line: header.number,
                message: "header must be 'n m' with nonnegative integers".into(),
            })
    };
    if header.tokens.len() != 2 {
        return Err(LoadError::Malformed {
            line: header.number,
            message: "header must be 'n m' with nonnegative integers".into(),
        });
    }
    let (n, m) = (header_num(0)?, header_num(1)?);
    let body = &lines[1..];
    if body.len() != m {
        let line = body.get(m).map_or(header.number, |l| l.number);
        return Err(LoadError::Malformed {
            line,
            message: format!("header announces {m} entries, found {}", body.len()),
        });
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::with_capacity(m);
    let mut entries = Vec::with_capacity(m);
    for line in body {
        let malformed = |message: String| LoadError::Malformed {
            line: line.number,
            message,
        };
        if line.tokens.len() != 3 {
            return Err(malformed("expected 'i j w'".into()));
        }
        let index = |t: &str| -> Result<usize, LoadError> {
            match t.parse::<usize>() {
                Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                _ => Err(malformed(format!("vertex '{t}' is not in 1..={n}"))),
            }
        };
        let (a, b) = (index(line.tokens[0])?, index(line.tokens[1])?);
        if a == b {
            return Err(malformed("diagonal entries are not allowed in sparse input".into()));
        }
        let value = parse_value(line.tokens[2], line.number)?;
        if value.exact.mantissa == 0 {
            return Err(malformed("sparse entries must be nonzero".into()));
        }
        if value.exact.mantissa < 0 && !options.shift {
            return Err(LoadError::NegativeEntry {
                row: a.min(b) + 1,
                col: a.max(b) + 1,
            });
        }
        let key = (a.min(b), a.max(b));
        if let Some(first) = seen.insert(key, line.number) {
            return Err(malformed(format!(
                "pair ({},{}) already listed on line {first}",
                key.0 + 1,
                key.1 + 1
            )));
        }
        entries.push((key.0, key.1, value));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    Ok(RawMatrix {
        n,
        implicit_zeros: entries.len() < pairs,
        entries,
    })
}

impl RawMatrix {
    fn finish(self, options: &LoadOptions) -> Result<SimilarityMatrix, LoadError> {
        let RawMatrix {
            n,
            entries,
            mut implicit_zeros,
        } = self;
        let mut ticks = to_ticks(&entries, options.quantize)?;

        if options.dissimilarity && implicit_zeros {
            let listed: HashMap<(usize, usize), i128> =
                ticks.iter().map(|&(i, j, t)| ((i, j), t)).collect();
            ticks = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| (i, j, listed.get(&(i, j)).copied().unwrap_or(0)))
                .collect();
            implicit_zeros = false;
        }
        if options.dissimilarity {
            if let Some(a_max) = ticks.iter().map(|e| e.2).max() {
                for e in &mut ticks {
                    e.2 = a_max.checked_sub(e.2).ok_or(LoadError::Overflow)?;
                }
            }
        }
        if options.shift {
            let listed_min = ticks.iter().map(|e| e.2).min();
            let floor = match (listed_min, implicit_zeros) {
                (Some(v), true) => v.min(0),
                (Some(v), false) => v,
                (None, _) => 0,
            };
            for e in &mut ticks {
                e.2 = e.2.checked_sub(floor).ok_or(LoadError::Overflow)?;
            }
        }

        let mut edges = Vec::with_capacity(ticks.len());
        for (i, j, t) in ticks {
            if t < 0 {
                return Err(LoadError::NegativeEntry {
                    row: i + 1,
                    col: j + 1,
                });
            }
            if t > 0 {
                let w = Weight::try_from(t).map_err(|_| LoadError::Overflow)?;
                edges.push((i, j, w));
            }
        }
        edges.sort_unstable();
        Ok(SimilarityMatrix::from_sorted_edges(n, edges))
    }
}

fn to_ticks(
    entries: &[(usize, usize, Value)],
    quantize: Option<f64>,
) -> Result<Vec<(usize, usize, i128)>, LoadError> {
    if let Some(eps) = quantize {
        return entries
            .iter()
            .map(|&(i, j, v)| {
                let t = (v.approx / eps).round();
                if t.abs() < 1e30 {
                    Ok((i, j, t as i128))
                } else {
                    Err(LoadError::Overflow)
                }
            })
            .collect();
    }
    let unit = entries
        .iter()
        .filter(|e| e.2.exact.mantissa != 0)
        .map(|e| e.2.exact.exponent)
        .min()
        .unwrap_or(0);
    entries
        .iter()
        .map(|&(i, j, v)| {
            let shift = u32::try_from(v.exact.exponent - unit).map_err(|_| LoadError::Overflow)?;
            let t = 10i128
                .checked_pow(shift)
                .and_then(|p| p.checked_mul(v.exact.mantissa))
                .ok_or(LoadError::Overflow)?;
            Ok((i, j, t))
        })
        .collect()
}
