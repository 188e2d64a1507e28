use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("cannot parse angle {text:?}: bad token {token:?}")]
pub struct ParseError {
    pub text: String,
    pub token: String,
}

/// Radians from either a decimal number or a rational multiple of π written
/// `pi`, `<p>pi`, `pi/<q>` or `<p>pi/<q>`.
pub fn parse_angle(text: &str) -> Result<f64, ParseError> {
    let fail = |token: &str| ParseError {
        text: text.to_string(),
        token: token.to_string(),
    };
    let trimmed = text.trim();
    let Some(pos) = trimmed.find("pi") else {
        return trimmed
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| fail(trimmed));
    };
    let (num, rest) = trimmed.split_at(pos);
    let rest = &rest[2..];
    let p: i64 = match num.trim() {
        "" => 1,
        "-" => -1,
        s => s.parse().map_err(|_| fail(s))?,
    };
    let q: i64 = match rest.trim() {
        "" => 1,
        r => {
            let digits = r.strip_prefix('/').ok_or_else(|| fail(r))?.trim();
            match digits.parse() {
                Ok(q) if q != 0 => q,
                _ => return Err(fail(digits)),
            }
        }
    };
    Ok(p as f64 * PI / q as f64)
}
