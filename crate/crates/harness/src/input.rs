//! Reading observed samples from text files.

use std::path::Path;

use harmonic_entropy_core::CountsHistogram;

use crate::error::{HarnessError, Result};

/// Layout of an input file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    /// One positive integer symbol per line.
    Symbols,
    /// `symbol,count` per line.
    Histogram,
}

/// Parses `text` (the content of `path`) into a histogram. Blank lines are
/// skipped; any other malformed line is reported with its 1-based number.
pub fn parse_histogram(text: &str, format: InputFormat, path: &Path) -> Result<CountsHistogram> {
    let parse_err = |line: usize, detail: String| HarnessError::Parse {
        path: path.to_path_buf(),
        line,
        detail,
    };
    let positive = |field: &str, what: &str, line: usize| -> Result<u64> {
        match field.trim().parse::<u64>() {
            Ok(v) if v > 0 => Ok(v),
            Ok(_) => Err(parse_err(line, format!("{what} must be positive"))),
            Err(_) => Err(parse_err(
                line,
                format!(
                    "expected a positive integer {what}, found `{}`",
                    field.trim()
                ),
            )),
        }
    };

    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        match format {
            InputFormat::Symbols => pairs.push((positive(content, "symbol", line)?, 1)),
            InputFormat::Histogram => {
                let mut fields = content.split(',');
                let (Some(sym), Some(count), None) = (fields.next(), fields.next(), fields.next())
                else {
                    return Err(parse_err(
                        line,
                        format!("expected `symbol,count`, found `{content}`"),
                    ));
                };
                let sym = positive(sym, "symbol", line)?;
                let count = positive(count, "count", line)?;
                if let Some(first) = seen.insert(sym, line) {
                    return Err(parse_err(
                        line,
                        format!("symbol {sym} already listed on line {first}"),
                    ));
                }
                pairs.push((sym, count));
            }
        }
    }
    if pairs.is_empty() {
        return Err(parse_err(0, "input contains no observations".into()));
    }
    let hist = match format {
        InputFormat::Symbols => CountsHistogram::from_symbols(pairs.into_iter().map(|(s, _)| s)),
        InputFormat::Histogram => CountsHistogram::from_pairs(pairs),
    };
    Ok(hist?)
}

/// Reads and parses a sample file.
pub fn read_histogram(path: &Path, format: InputFormat) -> Result<CountsHistogram> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_histogram(&text, format, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, format: InputFormat) -> Result<CountsHistogram> {
        parse_histogram(text, format, Path::new("data.txt"))
    }

    #[test]
    fn symbols_and_histogram_agree() {
        let a = parse("1\n1\n2\n\n", InputFormat::Symbols).unwrap();
        let b = parse("2,1\n1,2\n", InputFormat::Histogram).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 3);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse("1\n2\nx\n", InputFormat::Symbols).unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 3, .. }), "{err}");
        assert!(err.to_string().starts_with("data.txt:3:"));
        for (text, line) in [
            ("1,2\n3\n", 2),
            ("1,0\n", 1),
            ("1,2\n1,3\n", 2),
            ("0\n", 1),
            ("1,2,3\n", 1),
        ] {
            let format = if text.contains(',') {
                InputFormat::Histogram
            } else {
                InputFormat::Symbols
            };
            match parse(text, format).unwrap_err() {
                HarnessError::Parse { line: l, .. } => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other}"),
            }
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(parse("", InputFormat::Symbols).is_err());
        assert!(parse("\n  \n", InputFormat::Histogram).is_err());
    }
}
