//! Range syntax for sweep parameters.
//!
//! Integers: `3`, `0:3` (inclusive) or `-2,-1,1,2`. Floats: `0.5`,
//! `0:0.3:0.1` (inclusive, `start:stop:step`) or `0,0.1,0.3`.

use crate::error::{Error, Result};

fn bad(what: &str, text: &str, why: &str) -> Error {
    Error::Config(format!("invalid {what} range `{text}`: {why}"))
}

pub fn parse_int_range(what: &str, text: &str) -> Result<Vec<i64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(bad(what, text, "empty"));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|e| bad(what, text, &e.to_string()))
    };
    if text.contains(',') {
        return text.split(',').map(parse).collect();
    }
    // a leading sign belongs to the first bound, not to the separator
    match text[1..].find(':').map(|i| i + 1) {
        Some(i) => {
            let (lo, hi) = (parse(&text[..i])?, parse(&text[i + 1..])?);
            if hi < lo {
                return Err(bad(what, text, "upper bound below lower bound"));
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![parse(text)?]),
    }
}

pub fn parse_float_range(what: &str, text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(bad(what, text, "empty"));
    }
    let parse = |s: &str| -> Result<f64> {
        let v = s
            .trim()
            .parse::<f64>()
            .map_err(|e| bad(what, text, &e.to_string()))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad(what, text, "non-finite value"))
        }
    };
    if text.contains(',') {
        return text.split(',').map(parse).collect();
    }
    let parts: Vec<&str> = split_colons(text);
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [lo, hi, step] => {
            let (lo, hi, step) = (parse(lo)?, parse(hi)?, parse(step)?);
            if step <= 0.0 {
                return Err(bad(what, text, "step must be positive"));
            }
            if hi < lo {
                return Err(bad(what, text, "upper bound below lower bound"));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize;
            if count > 100_000 {
                return Err(bad(what, text, "too many points"));
            }
            Ok((0..=count).map(|i| tidy(lo + i as f64 * step)).collect())
        }
        _ => Err(bad(what, text, "expected `start:stop:step`")),
    }
}

/// Split on `:` without treating a leading minus as part of a separator.
fn split_colons(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == ':' && i > start {
            parts.push(&text[start..i]);
            start = i + 1;
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Remove accumulated binary noise such as `0.30000000000000004`.
fn tidy(v: f64) -> f64 {
    let s = format!("{v:.12e}");
    s.parse().unwrap_or(v)
}

/// Spin-orbit values with `κ = 0` removed; an empty result is an error.
pub fn parse_kappa_range(text: &str) -> Result<Vec<i32>> {
    let values: Vec<i32> = parse_int_range("kappa", text)?
        .into_iter()
        .filter(|k| *k != 0)
        .map(|k| i32::try_from(k).map_err(|_| bad("kappa", text, "out of range")))
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(bad("kappa", text, "no nonzero values"));
    }
    Ok(values)
}

pub fn parse_unsigned_range(what: &str, text: &str) -> Result<Vec<u32>> {
    parse_int_range(what, text)?
        .into_iter()
        .map(|v| u32::try_from(v).map_err(|_| bad(what, text, "values must be >= 0")))
        .collect()
}
