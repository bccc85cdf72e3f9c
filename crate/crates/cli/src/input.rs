//! Dataset ingestion: FASTA, one-sequence-per-line text, and raw files.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dea_core::{Alphabet, Dataset};

use crate::error::{CliError, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    /// `>` headers; sequence lines are concatenated, uppercased, whitespace removed.
    #[default]
    Fasta,
    /// One sequence per non-empty line (UTF-8).
    Lines,
    /// Each file is one sequence of bytes.
    Raw,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fasta" => Ok(InputFormat::Fasta),
            "lines" => Ok(InputFormat::Lines),
            "raw" => Ok(InputFormat::Raw),
            _ => Err(format!(
                "unknown format {s:?} (expected fasta, lines or raw)"
            )),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Fasta => "fasta",
            InputFormat::Lines => "lines",
            InputFormat::Raw => "raw",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Declared alphabet, in order. Inferred from first appearance when absent.
    pub alphabet: Option<String>,
    /// Drop characters outside the declared alphabet instead of failing.
    pub drop_unknown: bool,
    /// Keep only the first `n` symbols of every sequence.
    pub truncate: Option<usize>,
}

struct Filter<'a> {
    name: &'a str,
    declared: Option<&'a Alphabet>,
    drop_unknown: bool,
}

impl Filter<'_> {
    fn push(&self, out: &mut String, c: char, line: usize) -> Result<(), ParseError> {
        match self.declared {
            Some(a) if a.id(c).is_none() => {
                if self.drop_unknown {
                    Ok(())
                } else {
                    Err(self.error(
                        line,
                        format!("symbol {c:?} is not in the declared alphabet"),
                    ))
                }
            }
            _ => {
                out.push(c);
                Ok(())
            }
        }
    }

    fn error(&self, line: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            source_name: self.name.to_string(),
            line,
            message: message.into(),
        }
    }
}

fn utf8<'a>(filter: &Filter, bytes: &'a [u8]) -> Result<&'a str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = 1 + bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        filter.error(line, "invalid UTF-8")
    })
}

fn parse_fasta(filter: &Filter, bytes: &[u8]) -> Result<Vec<String>, ParseError> {
    let text = utf8(filter, bytes)?;
    let mut records: Vec<String> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.starts_with('>') {
            records.push(String::new());
            continue;
        }
        if line.starts_with(';') || line.trim().is_empty() {
            continue;
        }
        let Some(current) = records.last_mut() else {
            return Err(filter.error(line_no, "sequence data before the first '>' header"));
        };
        for c in line.chars().filter(|c| !c.is_whitespace()) {
            for u in c.to_uppercase() {
                filter.push(current, u, line_no)?;
            }
        }
    }
    Ok(records)
}

fn parse_lines(filter: &Filter, bytes: &[u8]) -> Result<Vec<String>, ParseError> {
    let text = utf8(filter, bytes)?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut s = String::with_capacity(line.len());
        for c in line.chars() {
            filter.push(&mut s, c, i + 1)?;
        }
        records.push(s);
    }
    Ok(records)
}

fn parse_raw(filter: &Filter, bytes: &[u8]) -> Result<Vec<String>, ParseError> {
    let mut s = String::with_capacity(bytes.len());
    let mut line = 1;
    for &b in bytes {
        // Bytes map onto U+0000..U+00FF.
        filter.push(&mut s, char::from(b), line)?;
        if b == b'\n' {
            line += 1;
        }
    }
    Ok(vec![s])
}

/// Parses the contents of one source into sequence texts.
pub fn parse_records(
    name: &str,
    bytes: &[u8],
    format: InputFormat,
    declared: Option<&Alphabet>,
    drop_unknown: bool,
) -> Result<Vec<String>, ParseError> {
    let filter = Filter {
        name,
        declared,
        drop_unknown,
    };
    if bytes.is_empty() {
        return Err(filter.error(0, "empty input"));
    }
    match format {
        InputFormat::Fasta => parse_fasta(&filter, bytes),
        InputFormat::Lines => parse_lines(&filter, bytes),
        InputFormat::Raw => parse_raw(&filter, bytes),
    }
}

fn declared_alphabet(opts: &ParseOptions) -> Result<Option<Alphabet>, CliError> {
    opts.alphabet
        .as_deref()
        .map(|a| Alphabet::new(a.chars()).map_err(|e| CliError::Usage(format!("--alphabet: {e}"))))
        .transpose()
}

/// Builds a dataset from already-read sources `(name, bytes)`.
pub fn parse_sources<'a>(
    sources: impl IntoIterator<Item = (&'a str, &'a [u8])>,
    format: InputFormat,
    opts: &ParseOptions,
) -> Result<Dataset, CliError> {
    let declared = declared_alphabet(opts)?;
    let mut records = Vec::new();
    let mut last_name = String::from("<input>");
    for (name, bytes) in sources {
        records.extend(parse_records(
            name,
            bytes,
            format,
            declared.as_ref(),
            opts.drop_unknown,
        )?);
        last_name = name.to_string();
    }
    if records.is_empty() {
        return Err(ParseError {
            source_name: last_name,
            line: 0,
            message: "no sequences found".into(),
        }
        .into());
    }
    if let Some(n) = opts.truncate {
        for r in records.iter_mut() {
            if let Some((cut, _)) = r.char_indices().nth(n) {
                r.truncate(cut);
            }
        }
    }
    let dataset = match declared {
        Some(a) => Dataset::with_alphabet(a, &records),
        None => Dataset::from_strs(&records),
    };
    dataset.map_err(|e| {
        ParseError {
            source_name: last_name,
            line: 0,
            message: e.to_string(),
        }
        .into()
    })
}

/// Reads and parses input files. With `raw`, each file is one sequence.
pub fn parse_input(
    paths: &[PathBuf],
    format: InputFormat,
    opts: &ParseOptions,
) -> Result<Dataset, CliError> {
    if paths.is_empty() {
        return Err(CliError::Usage("no input files given".into()));
    }
    let contents = paths
        .iter()
        .map(|p| read(p).map(|b| (p.display().to_string(), b)))
        .collect::<Result<Vec<_>, _>>()?;
    parse_sources(
        contents.iter().map(|(n, b)| (n.as_str(), b.as_slice())),
        format,
        opts,
    )
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a dataset in FASTA (`>seq<i>` headers, 60 columns) or lines format.
pub fn render(d: &Dataset, format: InputFormat) -> String {
    let mut out = String::new();
    for (i, s) in d.sequences().iter().enumerate() {
        let text = d.decode(s);
        match format {
            InputFormat::Fasta => {
                out.push_str(&format!(">seq{}\n", i + 1));
                let chars: Vec<char> = text.chars().collect();
                for chunk in chars.chunks(60) {
                    out.extend(chunk);
                    out.push('\n');
                }
            }
            InputFormat::Lines | InputFormat::Raw => {
                out.push_str(&text);
                out.push('\n');
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, format: InputFormat, opts: &ParseOptions) -> Result<Dataset, CliError> {
        parse_sources([("t", text.as_bytes())], format, opts)
    }

    fn texts(d: &Dataset) -> Vec<String> {
        d.sequences().iter().map(|s| d.decode(s)).collect()
    }

    #[test]
    fn fasta_single_record() {
        let d = parse(">h\nACGT\n", InputFormat::Fasta, &Default::default()).unwrap();
        assert_eq!(texts(&d), vec!["ACGT"]);
    }

    #[test]
    fn fasta_concatenates_and_normalizes() {
        let d = parse(
            ">a desc\nac gt\nAC\n\n>b\n;comment\nttt\n>c\n",
            InputFormat::Fasta,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(texts(&d), vec!["ACGTAC", "TTT", ""]);
    }

    #[test]
    fn fasta_without_header_is_rejected() {
        let err = parse("ACGT\n", InputFormat::Fasta, &Default::default()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn lines_infers_alphabet() {
        let d = parse("ab\nba\n", InputFormat::Lines, &Default::default()).unwrap();
        assert_eq!(texts(&d), vec!["ab", "ba"]);
        assert_eq!(d.alphabet().symbols(), &['a', 'b']);
    }

    #[test]
    fn empty_input_is_a_parse_error() {
        for f in [InputFormat::Fasta, InputFormat::Lines, InputFormat::Raw] {
            let err = parse("", f, &Default::default()).unwrap_err();
            assert!(matches!(err, CliError::Parse(_)), "{f}");
        }
        let err = parse("\n\n", InputFormat::Lines, &Default::default()).unwrap_err();
        assert!(matches!(err, CliError::Parse(_)));
    }

    #[test]
    fn declared_alphabet_reports_line() {
        let opts = ParseOptions {
            alphabet: Some("ACGT".into()),
            ..Default::default()
        };
        let err = parse(">x\nACGT\nACNT\n", InputFormat::Fasta, &opts).unwrap_err();
        match err {
            CliError::Parse(e) => {
                assert_eq!(e.line, 3);
                assert!(e.message.contains("'N'"));
            }
            other => panic!("{other:?}"),
        }
        let opts = ParseOptions {
            drop_unknown: true,
            ..opts
        };
        let d = parse(">x\nACGT\nACNT\n", InputFormat::Fasta, &opts).unwrap();
        assert_eq!(texts(&d), vec!["ACGTACT"]);
        assert_eq!(d.alphabet().symbols(), &['A', 'C', 'G', 'T']);
    }

    #[test]
    fn raw_is_one_sequence_per_source() {
        let d = parse_sources(
            [("a", &b"hi there\n"[..]), ("b", &b"\xffx"[..])],
            InputFormat::Raw,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(d.k(), 2);
        assert_eq!(d.sequences()[0].len(), 9);
        assert_eq!(texts(&d)[1], "\u{ff}x");
    }

    #[test]
    fn truncate_keeps_prefix() {
        let opts = ParseOptions {
            truncate: Some(2),
            ..Default::default()
        };
        let d = parse("abcd\nxy\nz\n", InputFormat::Lines, &opts).unwrap();
        assert_eq!(texts(&d), vec!["ab", "xy", "z"]);
    }

    #[test]
    fn render_roundtrips() {
        let d = Dataset::from_strs(&["ACGT".repeat(20), "TT".into()]).unwrap();
        for f in [InputFormat::Fasta, InputFormat::Lines] {
            let text = render(&d, f);
            let back = parse(&text, f, &Default::default()).unwrap();
            assert_eq!(texts(&back), texts(&d));
        }
    }
}
