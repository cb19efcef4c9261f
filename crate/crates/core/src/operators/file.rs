//! TOML operator spec files.
//!
//! ```toml
//! domain = "axis"            # or "half-axis"
//!
//! [[diagonal]]
//! offset = -1
//! value = 2                  # constant; a number or a string such as "1-0.5i"
//!
//! [[diagonal]]
//! offset = 0
//! potential = "b"            # refers to [potential.b]
//! shift = 0                  # value at column j uses letter b(j + shift)
//! add = 0                    # constant added to the letter values
//! # values = ["1", "-1"]     # explicit entry per letter instead of add
//!
//! [potential.b]
//! alphabet = [-3, 3]
//! letters = "0 0 0 1 0 1 1 1"
//! period = 8                 # periodic; or base = .. / outside = "error" | "constant 0"
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

use super::{BandOperatorSpec, DiagonalValue, Domain};
use crate::complex::{format_complex, parse_complex};
use crate::error::{Error, Result};
use crate::words::{Alphabet, OutOfWindow, PotentialSource, SourceKind, Word};

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self) -> Option<Complex64> {
        match self {
            Number::Int(i) => Some(Complex64::new(*i as f64, 0.0)),
            Number::Float(x) => Some(Complex64::new(*x, 0.0)),
            Number::Text(s) => parse_complex(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpec {
    #[serde(default)]
    domain: Option<Spanned<String>>,
    #[serde(default)]
    diagonal: Vec<Spanned<DiagonalEntry>>,
    #[serde(default)]
    potential: BTreeMap<String, Spanned<PotentialEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagonalEntry {
    offset: i64,
    value: Option<Number>,
    potential: Option<String>,
    shift: Option<i64>,
    add: Option<Number>,
    values: Option<Vec<Number>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialEntry {
    alphabet: Vec<Number>,
    letters: String,
    period: Option<usize>,
    origin: Option<i64>,
    base: Option<i64>,
    outside: Option<String>,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

pub fn parse_spec(text: &str) -> Result<BandOperatorSpec> {
    let file: FileSpec = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(0);
        Error::parse(line, "spec", e.message().to_string())
    })?;
    let line = |span: std::ops::Range<usize>| line_of(text, span.start);

    let mut sources = BTreeMap::new();
    for (name, entry) in &file.potential {
        let at = line(entry.span());
        let source = build_potential(entry.get_ref())
            .map_err(|(field, msg)| Error::parse(at, field, format!("potential `{name}`: {msg}")))?;
        sources.insert(name.as_str(), Arc::new(source));
    }

    let mut diagonals = BTreeMap::new();
    for entry in &file.diagonal {
        let at = line(entry.span());
        let d = entry.get_ref();
        let value = match (&d.value, &d.potential) {
            (Some(v), None) => {
                if d.shift.is_some() || d.add.is_some() || d.values.is_some() {
                    return Err(Error::parse(at, "value", "constant diagonals take no shift, add or values"));
                }
                DiagonalValue::Constant(v.value().ok_or_else(|| Error::parse(at, "value", "bad complex literal"))?)
            }
            (None, Some(name)) => {
                let source = sources
                    .get(name.as_str())
                    .ok_or_else(|| Error::parse(at, "potential", format!("no [potential.{name}] table")))?;
                let k = source.alphabet().len();
                let table = match (&d.values, &d.add) {
                    (Some(_), Some(_)) => return Err(Error::parse(at, "values", "give either values or add")),
                    (Some(vals), None) => {
                        if vals.len() != k {
                            return Err(Error::parse(at, "values", format!("expected {k} entries")));
                        }
                        vals.iter()
                            .map(|v| v.value().ok_or_else(|| Error::parse(at, "values", "bad complex literal")))
                            .collect::<Result<Vec<_>>>()?
                    }
                    (None, add) => {
                        let add = match add {
                            Some(a) => a.value().ok_or_else(|| Error::parse(at, "add", "bad complex literal"))?,
                            None => Complex64::default(),
                        };
                        source.alphabet().letters().iter().map(|&z| z + add).collect()
                    }
                };
                DiagonalValue::Potential { source: Arc::clone(source), shift: d.shift.unwrap_or(0), table }
            }
            _ => return Err(Error::parse(at, "value", "each diagonal needs exactly one of value or potential")),
        };
        if diagonals.insert(d.offset, value).is_some() {
            return Err(Error::parse(at, "offset", format!("offset {} given twice", d.offset)));
        }
    }

    let domain = match &file.domain {
        None => Domain::Axis,
        Some(s) => match s.get_ref().as_str() {
            "axis" => Domain::Axis,
            "half-axis" => Domain::HalfAxis,
            other => return Err(Error::parse(line(s.span()), "domain", format!("`{other}` is not axis or half-axis"))),
        },
    };
    Ok(BandOperatorSpec { diagonals, domain, lambda: Complex64::default() })
}

fn build_potential(p: &PotentialEntry) -> std::result::Result<PotentialSource, (&'static str, String)> {
    let letters = p
        .alphabet
        .iter()
        .map(|n| n.value().ok_or(("alphabet", "bad complex literal".to_string())))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let alphabet = Alphabet::new(letters).map_err(|e| ("alphabet", e.to_string()))?;
    let word = p
        .letters
        .split_whitespace()
        .map(|t| t.parse::<u8>().map_err(|_| ("letters", format!("bad index `{t}`"))))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Word::new)?;
    match p.period {
        Some(period) => {
            if period != word.len() {
                return Err(("period", format!("{period} does not match {} letters", word.len())));
            }
            if p.base.is_some() || p.outside.is_some() {
                return Err(("period", "periodic potentials take no base or outside".to_string()));
            }
            PotentialSource::periodic_with_origin(alphabet, word, p.origin.unwrap_or(0))
                .map_err(|e| ("letters", e.to_string()))
        }
        None => {
            if p.origin.is_some() {
                return Err(("origin", "only allowed together with period".to_string()));
            }
            let outside = match p.outside.as_deref().map(str::split_whitespace).map(|t| t.collect::<Vec<_>>()) {
                None => OutOfWindow::Error,
                Some(t) if t == ["error"] => OutOfWindow::Error,
                Some(t) if t.len() == 2 && t[0] == "constant" => {
                    OutOfWindow::Constant(t[1].parse().map_err(|_| ("outside", format!("bad letter `{}`", t[1])))?)
                }
                Some(_) => return Err(("outside", "expected \"error\" or \"constant <letter>\"".to_string())),
            };
            PotentialSource::window(alphabet, word, p.base.unwrap_or(0), outside)
                .map_err(|e| ("letters", e.to_string()))
        }
    }
}

fn quoted(z: Complex64) -> String {
    format!("\"{}\"", format_complex(z))
}

/// Writes a spec in the format read by [`parse_spec`]. Only periodic and
/// explicit-window potentials can be written; the cumulative `λ` shift is
/// already part of the main diagonal and is not recorded separately.
pub fn write_spec(spec: &BandOperatorSpec) -> Result<String> {
    let domain = match spec.domain() {
        Domain::Axis => "axis",
        Domain::HalfAxis => "half-axis",
    };
    let mut out = format!("domain = \"{domain}\"\n");
    let mut named: Vec<(String, &Arc<PotentialSource>)> = Vec::new();
    let names = ["b", "c", "d", "e", "f", "g", "h"];
    for (&offset, d) in spec.diagonals() {
        out += &format!("\n[[diagonal]]\noffset = {offset}\n");
        match d {
            DiagonalValue::Constant(c) => out += &format!("value = {}\n", quoted(*c)),
            DiagonalValue::Potential { source, shift, table } => {
                let name = match named.iter().find(|(_, s)| s == &source) {
                    Some((n, _)) => n.clone(),
                    None => {
                        let n = names
                            .get(named.len())
                            .map(|s| s.to_string())
                            .unwrap_or_else(|| format!("p{}", named.len()));
                        named.push((n.clone(), source));
                        n
                    }
                };
                out += &format!("potential = \"{name}\"\n");
                if *shift != 0 {
                    out += &format!("shift = {shift}\n");
                }
                let letters = source.alphabet().letters();
                let add = table[0] - letters[0];
                if table.iter().zip(letters).all(|(t, l)| *t == l + add) {
                    if add != Complex64::default() {
                        out += &format!("add = {}\n", quoted(add));
                    }
                } else {
                    let vals: Vec<String> = table.iter().map(|&z| quoted(z)).collect();
                    out += &format!("values = [{}]\n", vals.join(", "));
                }
            }
        }
    }
    for (name, source) in named {
        let alphabet: Vec<String> = source.alphabet().letters().iter().map(|&z| quoted(z)).collect();
        out += &format!("\n[potential.{name}]\nalphabet = [{}]\n", alphabet.join(", "));
        let letters = |w: &Word| w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        match source.kind() {
            SourceKind::Periodic { word, origin } => {
                out += &format!("letters = \"{}\"\nperiod = {}\n", letters(word), word.len());
                if *origin != 0 {
                    out += &format!("origin = {origin}\n");
                }
            }
            SourceKind::ExplicitWindow { word, base, outside } => {
                out += &format!("letters = \"{}\"\nbase = {base}\n", letters(word));
                out += &match outside {
                    OutOfWindow::Error => "outside = \"error\"\n".to_string(),
                    OutOfWindow::Constant(c) => format!("outside = \"constant {c}\"\n"),
                };
            }
            _ => {
                return Err(Error::validation(
                    "potential",
                    "only periodic and explicit-window potentials have a file form",
                ))
            }
        }
    }
    Ok(out)
}
