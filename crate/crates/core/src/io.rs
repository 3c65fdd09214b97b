//! Text formats for registers and Galois profiles.
//!
//! Register file:
//!
//! ```text
//! n = 4
//! f3 = x0 + x1
//! f2 = x3 + x1 + x0*x1
//! f1 = x2
//! f0 = x1
//! ```
//!
//! Profile file (zero residuals may be omitted):
//!
//! ```text
//! tau = 1
//! g3 = x1
//! g2 = x0*x1
//! g1 = x0
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write;

use crate::anf::AnfPolynomial;
use crate::error::{Error, Result};
use crate::nlfsr::Nlfsr;
use crate::transform::GaloisProfile;

fn syntax(message: impl Into<String>) -> Error {
    Error::Syntax {
        column: 1,
        message: message.into(),
    }
}

/// Non-comment lines as `(line number, key, value)`.
fn assignments(text: &str) -> Result<Vec<(usize, &str, &str)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| syntax("expected 'name = value'").at_line(i + 1))?;
        out.push((i + 1, key.trim(), value.trim()));
    }
    Ok(out)
}

fn indexed_key(key: &str, prefix: char) -> Option<usize> {
    key.strip_prefix(prefix)
        .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|rest| rest.parse().ok())
}

fn parse_count(value: &str, what: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| syntax(format!("expected {what}, found '{value}'")))
}

/// Reads `name = value` lines into one polynomial slot per index `< n`,
/// after the header line `header = K` has been consumed.
fn fill_slots(
    lines: &[(usize, &str, &str)],
    prefix: char,
    n: usize,
) -> Result<Vec<Option<AnfPolynomial>>> {
    let mut slots: Vec<Option<AnfPolynomial>> = vec![None; n];
    for &(line, key, value) in lines {
        let i = indexed_key(key, prefix)
            .ok_or_else(|| syntax(format!("unexpected key '{key}'")).at_line(line))?;
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, n }.at_line(line));
        }
        if slots[i].is_some() {
            return Err(syntax(format!("{prefix}{i} assigned twice")).at_line(line));
        }
        let p = AnfPolynomial::parse_bounded(value, n).map_err(|e| e.at_line(line))?;
        slots[i] = Some(p);
    }
    Ok(slots)
}

pub fn parse_register(text: &str) -> Result<Nlfsr> {
    let lines = assignments(text)?;
    let (&(line, key, value), rest) = lines
        .split_first()
        .ok_or_else(|| syntax("missing 'n = <size>' line").at_line(1))?;
    if key != "n" {
        return Err(syntax("first assignment must be 'n = <size>'").at_line(line));
    }
    let n = parse_count(value, "register size").map_err(|e| e.at_line(line))?;
    if n < 2 {
        return Err(Error::TooSmall(n).at_line(line));
    }
    let slots = fill_slots(rest, 'f', n)?;
    let feedbacks = slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| syntax(format!("f{i} is not assigned"))))
        .collect::<Result<Vec<_>>>()?;
    Nlfsr::new(feedbacks)
}

/// Highest bit first, one `fI = poly` line per bit.
pub fn format_register(m: &Nlfsr) -> String {
    let mut out = format!("n = {}\n", m.n());
    for i in (0..m.n()).rev() {
        writeln!(out, "f{i} = {}", m.feedback(i)).unwrap();
    }
    out
}

/// Parses a profile for an `n`-bit register.
pub fn parse_profile(text: &str, n: usize) -> Result<GaloisProfile> {
    let lines = assignments(text)?;
    let (&(line, key, value), rest) = lines
        .split_first()
        .ok_or_else(|| syntax("missing 'tau = <bit>' line").at_line(1))?;
    if key != "tau" {
        return Err(syntax("first assignment must be 'tau = <bit>'").at_line(line));
    }
    let tau = parse_count(value, "terminal bit").map_err(|e| e.at_line(line))?;
    let slots = fill_slots(rest, 'g', n)?;
    if let Some((i, _)) = slots.iter().enumerate().find(|(i, s)| *i < tau && s.is_some()) {
        return Err(syntax(format!("g{i} lies below tau = {tau}")));
    }
    let parts = slots
        .into_iter()
        .skip(tau)
        .map(Option::unwrap_or_default)
        .collect();
    Ok(GaloisProfile::new(n, tau, parts)?)
}

pub fn format_profile(p: &GaloisProfile) -> String {
    let mut out = format!("tau = {}\n", p.tau());
    for i in (p.tau()..p.n()).rev() {
        let g = p.g(i);
        if !g.is_zero() {
            writeln!(out, "g{i} = {g}").unwrap();
        }
    }
    out
}
