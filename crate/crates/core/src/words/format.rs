//! Line-based text format for periodic and explicit-window words.
//!
//! ```text
//! # comments and blank lines are ignored
//! alphabet: -3, 3
//! letters: 0 0 0 1 0 1 1 1
//! period: 8
//! origin: 0
//! ```
//!
//! A file without `period:` describes an explicit window; it takes
//! `base: <index of the first letter>` and `outside: error | constant <letter>`.

use std::collections::HashMap;

use super::{Alphabet, OutOfWindow, PotentialSource, SourceKind, Word};
use crate::complex::{format_complex, parse_complex};
use crate::error::{Error, Result};

const KEYS: [&str; 6] = ["alphabet", "letters", "period", "origin", "base", "outside"];

pub fn parse_source(text: &str) -> Result<PotentialSource> {
    let mut fields: HashMap<&str, (usize, &str)> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once(':').ok_or_else(|| Error::parse(line_no, "line", "expected `key: value`"))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::parse(line_no, key, "unknown field"));
        }
        if fields.insert(key, (line_no, value.trim())).is_some() {
            return Err(Error::parse(line_no, key, "field given twice"));
        }
    }
    let last_line = text.lines().count().max(1);
    let required = |key: &'static str| fields.get(key).copied().ok_or_else(|| Error::parse(last_line, key, "missing"));

    let (line, value) = required("alphabet")?;
    let letters = value
        .split(',')
        .map(|tok| {
            parse_complex(tok)
                .ok_or_else(|| Error::parse(line, "alphabet", format!("bad complex literal `{}`", tok.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    let alphabet = Alphabet::new(letters).map_err(|e| Error::parse(line, "alphabet", e.to_string()))?;

    let (line, value) = required("letters")?;
    let word: Word = value
        .split_whitespace()
        .map(|tok| tok.parse::<u8>().map_err(|_| Error::parse(line, "letters", format!("bad index `{tok}`"))))
        .collect::<Result<Vec<_>>>()?
        .into();
    alphabet.check_word(&word).map_err(|e| Error::parse(line, "letters", e.to_string()))?;

    let int_field = |key: &'static str| -> Result<Option<i64>> {
        fields
            .get(key)
            .map(|&(line, v)| v.parse::<i64>().map_err(|_| Error::parse(line, key, format!("bad integer `{v}`"))))
            .transpose()
    };

    if let Some(period) = int_field("period")? {
        let (line, _) = fields["period"];
        if period != word.len() as i64 {
            return Err(Error::parse(line, "period", format!("{period} does not match {} letters", word.len())));
        }
        for key in ["base", "outside"] {
            if let Some(&(line, _)) = fields.get(key) {
                return Err(Error::parse(line, key, "not allowed for periodic words"));
            }
        }
        let origin = int_field("origin")?.unwrap_or(0);
        return PotentialSource::periodic_with_origin(alphabet, word, origin)
            .map_err(|e| Error::parse(line, "letters", e.to_string()));
    }

    if let Some(&(line, _)) = fields.get("origin") {
        return Err(Error::parse(line, "origin", "only allowed together with `period`"));
    }
    let base = int_field("base")?.unwrap_or(0);
    let outside = match fields.get("outside") {
        None => OutOfWindow::Error,
        Some(&(line, v)) => {
            let mut toks = v.split_whitespace();
            match (toks.next(), toks.next(), toks.next()) {
                (Some("error"), None, None) => OutOfWindow::Error,
                (Some("constant"), Some(c), None) => OutOfWindow::Constant(
                    c.parse().map_err(|_| Error::parse(line, "outside", format!("bad letter `{c}`")))?,
                ),
                _ => return Err(Error::parse(line, "outside", "expected `error` or `constant <letter>`")),
            }
        }
    };
    let line = fields["letters"].0;
    PotentialSource::window(alphabet, word, base, outside).map_err(|e| Error::parse(line, "outside", e.to_string()))
}

pub fn write_source(source: &PotentialSource) -> Result<String> {
    let alphabet: Vec<String> = source.alphabet().letters().iter().map(|&z| format_complex(z)).collect();
    let letters = |w: &Word| w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
    let mut out = format!("alphabet: {}\n", alphabet.join(", "));
    match source.kind() {
        SourceKind::Periodic { word, origin } => {
            out += &format!("letters: {}\nperiod: {}\n", letters(word), word.len());
            if *origin != 0 {
                out += &format!("origin: {origin}\n");
            }
        }
        SourceKind::ExplicitWindow { word, base, outside } => {
            out += &format!("letters: {}\nbase: {base}\n", letters(word));
            out += &match outside {
                OutOfWindow::Error => "outside: error\n".to_string(),
                OutOfWindow::Constant(c) => format!("outside: constant {c}\n"),
            };
        }
        _ => {
            return Err(Error::validation(
                "source",
                "only periodic and explicit-window words have a text form; periodize first",
            ))
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn round_trip_periodic() {
        let src = PotentialSource::periodic_with_origin(
            Alphabet::new(vec![Complex64::new(-3.0, 0.0), Complex64::new(0.5, -1.25)]).unwrap(),
            "0010".parse().unwrap(),
            1,
        )
        .unwrap();
        let text = write_source(&src).unwrap();
        assert_eq!(parse_source(&text).unwrap(), src);
    }

    #[test]
    fn round_trip_window() {
        let src = PotentialSource::window(
            Alphabet::real(&[0.0, 1.0]).unwrap(),
            "1".parse().unwrap(),
            -4,
            OutOfWindow::Constant(0),
        )
        .unwrap();
        assert_eq!(parse_source(&write_source(&src).unwrap()).unwrap(), src);
    }

    #[test]
    fn errors_name_line_and_field() {
        let text = "alphabet: 0, 1\n\nletters: 0 1 2\nperiod: 3\n";
        match parse_source(text) {
            Err(Error::Parse { line, field, .. }) => assert_eq!((line, field.as_str()), (3, "letters")),
            other => panic!("{other:?}"),
        }
        match parse_source("alphabet: 0, 1\nletters: 0 1\nperiod: 5\n") {
            Err(Error::Parse { line, field, .. }) => assert_eq!((line, field.as_str()), (3, "period")),
            other => panic!("{other:?}"),
        }
        match parse_source("alphabet: 0, x\nletters: 0\n") {
            Err(Error::Parse { line: 1, field, .. }) => assert_eq!(field, "alphabet"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_source("letters: 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_source("alphabet: 0\nletters: 0\ncolour: red\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn rotations_do_not_serialize() {
        assert!(write_source(&PotentialSource::fibonacci()).is_err());
    }
}
