//! Line-oriented readers and writers for corpus, segmented and
//! character-segmented files.
//!
//! All readers validate UTF-8 per line and report the absolute byte offset of
//! the first bad byte. `\r\n` is accepted on input; output always uses `\n`.

use std::io::{BufRead, Write};

use crate::corpus::{Reserved, Symbol, DEFAULT_BOUNDARY, DEFAULT_MARKER, DEFAULT_UNK};
use crate::error::{Error, Result};
use crate::segment::{ImportedSource, SegmentationScheme, SegmentedWord};

#[derive(Debug)]
pub struct Line {
    /// 1-based.
    pub number: usize,
    /// Byte offset of the line start within the stream.
    pub offset: u64,
    pub text: String,
}

/// Incremental UTF-8 line iterator; holds one line in memory at a time.
pub struct LineReader<R> {
    inner: R,
    buf: Vec<u8>,
    number: usize,
    offset: u64,
    done: bool,
}

impl<R: BufRead> LineReader<R> {
    pub fn new(inner: R) -> Self {
        LineReader {
            inner,
            buf: Vec::new(),
            number: 0,
            offset: 0,
            done: false,
        }
    }
}

impl<R: BufRead> Iterator for LineReader<R> {
    type Item = Result<Line>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        self.buf.clear();
        let n = match self.inner.read_until(b'\n', &mut self.buf) {
            Ok(n) => n,
            Err(e) => {
                self.done = true;
                return Some(Err(e.into()));
            }
        };
        if n == 0 {
            self.done = true;
            return None;
        }
        self.number += 1;
        let start = self.offset;
        self.offset += n as u64;
        let mut bytes = &self.buf[..];
        if let Some(rest) = bytes.strip_suffix(b"\n") {
            bytes = rest;
            if let Some(rest) = bytes.strip_suffix(b"\r") {
                bytes = rest;
            }
        }
        match std::str::from_utf8(bytes) {
            Ok(s) => Some(Ok(Line {
                number: self.number,
                offset: start,
                text: s.to_string(),
            })),
            Err(e) => {
                self.done = true;
                Some(Err(Error::Decode {
                    line: self.number,
                    offset: start + e.valid_up_to() as u64,
                }))
            }
        }
    }
}

/// Text codec for segmented corpora: `ab@@ d xyz`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentedLineCodec {
    pub continuation_marker: String,
    pub boundary_symbol: String,
    pub unk: String,
}

impl Default for SegmentedLineCodec {
    fn default() -> Self {
        SegmentedLineCodec {
            continuation_marker: DEFAULT_MARKER.to_string(),
            boundary_symbol: DEFAULT_BOUNDARY.to_string(),
            unk: DEFAULT_UNK.to_string(),
        }
    }
}

impl SegmentedLineCodec {
    pub fn new(reserved: &Reserved) -> Result<Self> {
        reserved.validate()?;
        Ok(SegmentedLineCodec {
            continuation_marker: reserved.marker.clone(),
            boundary_symbol: reserved.boundary.clone(),
            unk: reserved.unk.clone(),
        })
    }

    pub fn parse_line(&self, number: usize, line: &str) -> Result<Vec<SegmentedWord>> {
        let marker = self.continuation_marker.as_str();
        let mut row = Vec::new();
        let mut pending: Vec<Symbol> = Vec::new();
        for token in line.split_whitespace() {
            if token == self.unk {
                if !pending.is_empty() {
                    return Err(format_err(number, "UNK unit follows a continuation unit"));
                }
                row.push(SegmentedWord::unk(&self.unk));
                continue;
            }
            let (text, continued) = match token.strip_suffix(marker) {
                Some(t) => (t, true),
                None => (token, false),
            };
            let unit = Symbol::new(text).ok_or_else(|| {
                format_err(number, &format!("empty unit in token {token:?}"))
            })?;
            pending.push(unit);
            if !continued {
                row.push(SegmentedWord::from_units(std::mem::take(&mut pending)).unwrap());
            }
        }
        if let Some(last) = pending.last() {
            return Err(format_err(
                number,
                &format!("dangling continuation marker on {:?}", last.as_str()),
            ));
        }
        Ok(row)
    }

    pub fn format_row(&self, row: &[SegmentedWord], out: &mut String) {
        for (i, w) in row.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            w.render(&self.continuation_marker, out);
        }
    }

    pub fn write_row<W: Write>(&self, row: &[SegmentedWord], out: &mut W) -> Result<()> {
        let mut s = String::new();
        self.format_row(row, &mut s);
        s.push('\n');
        out.write_all(s.as_bytes())?;
        Ok(())
    }

    pub fn rows<R: BufRead>(&self, reader: R) -> SegmentedRows<'_, R> {
        SegmentedRows {
            codec: self,
            lines: LineReader::new(reader),
        }
    }

    /// Reads an externally segmented corpus (e.g. morphological analyzer output).
    pub fn read_imported<R: BufRead>(
        &self,
        reader: R,
        name: &str,
    ) -> Result<(SegmentationScheme, Vec<Vec<SegmentedWord>>)> {
        let rows = self.rows(reader).collect::<Result<Vec<_>>>()?;
        Ok((
            SegmentationScheme::MorphImported(ImportedSource::new(name)),
            rows,
        ))
    }

    /// Reads one character-segmented line into its units.
    pub fn parse_char_line(&self, line: &str) -> Vec<Symbol> {
        line.split_whitespace().filter_map(Symbol::new).collect()
    }
}

fn format_err(line: usize, message: &str) -> Error {
    Error::Format {
        line,
        message: message.to_string(),
    }
}

pub struct SegmentedRows<'a, R> {
    codec: &'a SegmentedLineCodec,
    lines: LineReader<R>,
}

impl<R: BufRead> Iterator for SegmentedRows<'_, R> {
    type Item = Result<Vec<SegmentedWord>>;

    fn next(&mut self) -> Option<Self::Item> {
        let line = match self.lines.next()? {
            Ok(l) => l,
            Err(e) => return Some(Err(e)),
        };
        Some(self.codec.parse_line(line.number, &line.text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read_all(codec: &SegmentedLineCodec, text: &[u8]) -> Result<Vec<Vec<SegmentedWord>>> {
        codec.rows(text).collect()
    }

    #[test]
    fn reads_continuation() {
        let codec = SegmentedLineCodec::default();
        let rows = read_all(&codec, b"ab@@ d\n").unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].len(), 1);
        let w = &rows[0][0];
        assert_eq!(w.units()[0].as_str(), "ab");
        assert!(w.is_continued(0));
        assert_eq!(w.units()[1].as_str(), "d");
    }

    #[test]
    fn dangling_marker_is_error() {
        let codec = SegmentedLineCodec::default();
        match read_all(&codec, b"ok\nab@@\n").unwrap_err() {
            Error::Format { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn bare_marker_is_error() {
        let codec = SegmentedLineCodec::default();
        assert!(read_all(&codec, b"@@ a\n").is_err());
    }

    #[test]
    fn unk_token() {
        let codec = SegmentedLineCodec::default();
        let rows = read_all(&codec, b"abc <unk>\n").unwrap();
        assert!(rows[0][1].is_unk());
        assert!(read_all(&codec, b"a@@ <unk>\n").is_err());
    }

    #[test]
    fn crlf_accepted_and_lf_written() {
        let codec = SegmentedLineCodec::default();
        let rows = read_all(&codec, b"a@@ b c\r\n\r\nd\r\n").unwrap();
        let mut out = Vec::new();
        for r in &rows {
            codec.write_row(r, &mut out).unwrap();
        }
        assert_eq!(out, b"a@@ b c\n\nd\n");
    }

    #[test]
    fn line_reader_offsets() {
        let lines: Vec<_> = LineReader::new(&b"ab\r\ncd\nef"[..])
            .map(|l| l.unwrap())
            .collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].offset, 4);
        assert_eq!(lines[2].text, "ef");
    }

    #[test]
    fn imported_scheme() {
        let codec = SegmentedLineCodec::default();
        let (scheme, rows) = codec.read_imported(&b"b$r@@ hm\n"[..], "farasa").unwrap();
        assert_eq!(scheme.to_string(), "morph:farasa");
        assert_eq!(rows[0][0].surface(), "b$rhm");
    }
}
