//! Text forms of numbers used in flags and config files: reals with optional
//! `pi` factors (`pi/3`, `-2pi/3`, `0.5*pi`), complex numbers (`1`, `i`,
//! `-0.5i`, `1+2i`), points `x1,x2` and sweeps `h_max:h_min:count`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer};

use super::Sweep;

fn plain(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

/// A real number, optionally a rational multiple of `pi`.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(at) = s.find("pi") else {
        return plain(&s);
    };
    let (before, after) = (&s[..at], &s[at + 2..]);
    let factor = match before.trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        f => plain(f)?,
    };
    let divisor = match after {
        "" => 1.0,
        d => plain(d.strip_prefix('/').ok_or_else(|| format!("not a number: {text:?}"))?)?,
    };
    Ok(factor * std::f64::consts::PI / divisor)
}

/// A complex number `re`, `im i`, or `re +- im i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: {text:?}");
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(&s).map(|r| Complex64::new(r, 0.0));
    };
    // Split at the last sign that is not the leading one or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            t => parse_real(t.trim_end_matches('*')).map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(Complex64::new(parse_real(&body[..k]).map_err(|_| bad())?, imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

/// `x1,x2`.
pub fn parse_point(text: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected x1,x2, got {text:?}"));
    }
    Ok([parse_real(parts[0])?, parse_real(parts[1])?])
}

/// `h_max:h_min:count`.
pub fn parse_sweep(text: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected h_max:h_min:count, got {text:?}"));
    }
    let count = parts[2]
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("count must be an integer, got {:?}", parts[2]))?;
    Ok(Sweep {
        h_max: parse_real(parts[0])?,
        h_min: parse_real(parts[1])?,
        count,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberOrText {
    Number(f64),
    Pair([f64; 2]),
    Text(String),
}

fn to_real<E: serde::de::Error>(v: NumberOrText) -> Result<f64, E> {
    match v {
        NumberOrText::Number(v) => Ok(v),
        NumberOrText::Text(t) => parse_real(&t).map_err(E::custom),
        NumberOrText::Pair(_) => Err(E::custom("expected a real number")),
    }
}

pub(crate) fn real<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    to_real(NumberOrText::deserialize(d)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointForm {
    Parts([NumberOrText; 2]),
    Text(String),
}

pub(crate) fn point<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
    match PointForm::deserialize(d)? {
        PointForm::Parts([a, b]) => Ok([to_real(a)?, to_real(b)?]),
        PointForm::Text(t) => parse_point(&t).map_err(serde::de::Error::custom),
    }
}

pub(crate) fn complex<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    match NumberOrText::deserialize(d)? {
        NumberOrText::Number(v) => Ok(Complex64::new(v, 0.0)),
        NumberOrText::Pair([re, im]) => Ok(Complex64::new(re, im)),
        NumberOrText::Text(t) => parse_complex(&t).map_err(serde::de::Error::custom),
    }
}
