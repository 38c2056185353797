//! Small lexical helpers shared by the descriptor parsers.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Parses a real number, also accepting `pi`, `2pi`, `pi/2`, `3*pi/4`.
pub(crate) fn parse_real(what: &'static str, token: &str) -> Result<f64> {
    let t = token.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || Error::descriptor(what, token, "expected a number");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t, 1.0),
    };
    let lower = num.to_ascii_lowercase();
    let coeff = match lower.strip_suffix("pi") {
        Some("") => 1.0,
        Some(c) => c.trim_end_matches('*').trim().parse::<f64>().map_err(|_| bad())?,
        None => return Err(bad()),
    };
    Ok(coeff * PI / den)
}

/// Splits at every top-level occurrence of `sep` (outside brackets).
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}

/// Strips one pair of enclosing brackets, e.g. `[1,2]` → `1,2`.
pub(crate) fn strip_brackets<'a>(what: &'static str, s: &'a str, open: char, close: char) -> Result<&'a str> {
    let t = s.trim();
    t.strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| Error::descriptor(what, s, format!("expected {open}...{close}")))
}
