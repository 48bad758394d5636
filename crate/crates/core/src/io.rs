//! Plain-text loaders for custom cost matrices and priors.
//!
//! Cost file: first line `n`, then `n` lines of `n` costs, then optionally one
//! line of `n` prior weights. Entries are separated by commas and/or spaces;
//! blank lines and lines starting with `#` are skipped.

use crate::error::{Result, VoiError};
use crate::measure::{CostMatrix, ProbVector};

fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_row(line: usize, s: &str) -> Result<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>().map_err(|_| VoiError::Parse {
                line,
                message: format!("not a number: '{t}'"),
            })
        })
        .collect()
}

/// Parses a cost file, returning the matrix and the optional trailing prior.
pub fn parse_cost_csv(text: &str) -> Result<(CostMatrix, Option<ProbVector>)> {
    let mut lines = records(text);
    let (line, head) = lines.next().ok_or(VoiError::Parse {
        line: 1,
        message: "empty cost file".into(),
    })?;
    let n: usize = head
        .trim_end_matches(',')
        .trim()
        .parse()
        .map_err(|_| VoiError::Parse {
            line,
            message: format!("expected size n, found '{head}'"),
        })?;
    if n == 0 {
        return Err(VoiError::InvalidSize {
            n,
            reason: "cost matrix must be non-empty",
        });
    }
    let mut entries = Vec::with_capacity(n * n);
    let mut last_line = line;
    for _ in 0..n {
        let (line, s) = lines.next().ok_or(VoiError::Parse {
            line: last_line + 1,
            message: format!("expected {n} cost rows"),
        })?;
        let row = parse_row(line, s)?;
        if row.len() != n {
            return Err(VoiError::Parse {
                line,
                message: format!("expected {n} entries, found {}", row.len()),
            });
        }
        entries.extend(row);
        last_line = line;
    }
    let prior = match lines.next() {
        None => None,
        Some((line, s)) => {
            let weights = parse_row(line, s)?;
            if weights.len() != n {
                return Err(VoiError::Parse {
                    line,
                    message: format!("expected {n} prior weights, found {}", weights.len()),
                });
            }
            Some(ProbVector::new(weights)?)
        }
    };
    if let Some((line, _)) = lines.next() {
        return Err(VoiError::Parse {
            line,
            message: "unexpected trailing content".into(),
        });
    }
    Ok((CostMatrix::new(n, entries)?, prior))
}

/// Parses a prior: all weights, on one or several lines.
pub fn parse_prior_csv(text: &str) -> Result<ProbVector> {
    let mut weights = Vec::new();
    for (line, s) in records(text) {
        weights.extend(parse_row(line, s)?);
    }
    if weights.is_empty() {
        return Err(VoiError::Parse {
            line: 1,
            message: "empty prior file".into(),
        });
    }
    ProbVector::new(weights)
}
