//! The one-line ascii map format: `<n> <list>,<list>,...`, where vertex `i`
//! is the `i`-th lowercase letter and each list names its neighbors in
//! cyclic order.

use std::fmt;
use std::io::{self, BufRead, Write};

use crate::error::Error;
use crate::map::{build_map, EmbeddedMap};

pub const MAX_VERTICES: usize = 26;

/// A parse failure with the 1-based column it was detected at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub column: usize,
    pub error: Error,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.error)
    }
}

impl std::error::Error for ParseError {}

fn syntax(column: usize, message: impl Into<String>) -> ParseError {
    ParseError { column, error: Error::Syntax(message.into()) }
}

/// Splits a line into its vertex count and neighbor lists without building
/// the map.
pub fn parse_lists(line: &str) -> Result<(usize, Vec<Vec<usize>>), ParseError> {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let bytes = line.as_bytes();

    let digits = bytes.iter().take_while(|b| b.is_ascii_digit()).count();
    if digits == 0 {
        return Err(syntax(1, "expected a vertex count"));
    }
    if digits > 3 {
        return Err(syntax(1, "vertex count too long"));
    }
    let n: usize = line[..digits].parse().expect("ascii digits");
    if n == 0 {
        return Err(syntax(1, "vertex count must be positive"));
    }
    if n > MAX_VERTICES {
        return Err(ParseError { column: 1, error: Error::TooManyVertices(n) });
    }
    if bytes.get(digits) != Some(&b' ') {
        return Err(syntax(digits + 1, "expected a single space after the vertex count"));
    }

    let mut lists = Vec::with_capacity(n);
    let mut current = Vec::new();
    let body_start = digits + 1;
    for (i, &b) in bytes[body_start..].iter().enumerate() {
        let column = body_start + i + 1;
        match b {
            b'a'..=b'z' => {
                let v = (b - b'a') as usize;
                if v >= n {
                    return Err(syntax(column, format!("letter '{}' is beyond the {n} declared vertices", b as char)));
                }
                current.push(v);
            }
            b',' => {
                if current.is_empty() {
                    return Err(syntax(column, "empty neighbor list"));
                }
                lists.push(std::mem::take(&mut current));
            }
            _ => return Err(syntax(column, format!("unexpected byte 0x{b:02x}"))),
        }
    }
    if current.is_empty() {
        return Err(syntax(bytes.len() + 1, "empty neighbor list"));
    }
    lists.push(current);
    if lists.len() != n {
        return Err(syntax(1, format!("{} neighbor lists for {n} declared vertices", lists.len())));
    }
    Ok((n, lists))
}

/// Parses one line into a map.
pub fn parse_line(line: &str) -> Result<EmbeddedMap, ParseError> {
    let (n, lists) = parse_lists(line)?;
    build_map(n, &lists).map_err(|error| {
        let column = match error {
            Error::Range { vertex, .. }
            | Error::Loop { vertex }
            | Error::MultiEdge { vertex, .. }
            | Error::Asymmetry { from: vertex, .. } => list_column(line, vertex),
            _ => 1,
        };
        ParseError { column, error }
    })
}

fn list_column(line: &str, list_index: usize) -> usize {
    let space = line.find(' ').unwrap_or(0);
    let mut column = space + 2;
    for (i, part) in line[space + 1..].split(',').enumerate() {
        if i == list_index {
            return column;
        }
        column += part.len() + 1;
    }
    column
}

/// Writes the line for `neighbor_lists`, each rotated to start at its
/// smallest neighbor.
pub fn serialize_lists(lists: &[Vec<usize>]) -> Result<String, Error> {
    let n = lists.len();
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    let mut out = String::with_capacity(4 + lists.iter().map(|l| l.len() + 1).sum::<usize>());
    out.push_str(&n.to_string());
    out.push(' ');
    for (v, list) in lists.iter().enumerate() {
        if v > 0 {
            out.push(',');
        }
        let start = list.iter().enumerate().min_by_key(|&(_, &w)| w).map_or(0, |(i, _)| i);
        for k in 0..list.len() {
            out.push((b'a' + list[(start + k) % list.len()] as u8) as char);
        }
    }
    Ok(out)
}

pub fn serialize(map: &EmbeddedMap) -> Result<String, Error> {
    serialize_lists(&map.neighbor_lists())
}

/// One parsed input line.
pub type StreamItem = (usize, Result<EmbeddedMap, ParseError>);

/// Lazily parses maps from a reader, one per line. Blank lines and lines
/// starting with `#` are skipped; line numbers are 1-based. I/O errors end
/// the iteration with an `Err` item.
pub fn read_stream<R: BufRead>(source: R) -> impl Iterator<Item = io::Result<StreamItem>> {
    source.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e)),
        Ok(line) => {
            let trimmed = line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, parse_line(trimmed))))
            }
        }
    })
}

pub fn write_stream<'a, W, I>(maps: I, mut sink: W) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a EmbeddedMap>,
{
    for map in maps {
        let line = serialize(map).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
        writeln!(sink, "{line}")?;
    }
    sink.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    const K7: &str = "7 bcdefg,agdfec,abegfd,acfbge,adgcbf,aebdcg,afcedb";

    #[test]
    fn parses_k7() {
        let m = parse_line(K7).unwrap();
        assert_eq!(m.vertex_count(), 7);
        assert_eq!(m.edge_count(), 21);
    }

    #[test]
    fn parses_triangle_and_serializes_normalized() {
        let t = parse_line("3 bc,ca,ab").unwrap();
        assert_eq!(t.edge_count(), 3);
        assert_eq!(serialize(&t).unwrap(), "3 bc,ac,ab");
    }

    #[test]
    fn degree_sequence_of_first_eight_vertex_entry() {
        let m = parse_line("8 bcde,aefgdh,ahgf,afhbg,aghfb,behdcg,bfced,bdfec").unwrap();
        assert_eq!(m.degree_sequence(), vec![4, 4, 5, 5, 5, 5, 6, 6]);
    }

    #[test]
    fn count_mismatch_is_syntax_error() {
        let err = parse_line("7 bcdefg").unwrap_err();
        assert!(matches!(err.error, Error::Syntax(_)));
    }

    #[test]
    fn grammar_violations() {
        for bad in
            ["", "x", "3bc,ca,ab", "3  bc,ca,ab", "3 bc,,ab", "3 bc,ca,ab,", "3 bd,ca,ab", "3 bC,ca,ab", "0 a", "27 b"]
        {
            assert!(parse_line(bad).is_err(), "{bad:?} should fail");
        }
        assert_eq!(parse_line("27 b").unwrap_err().error, Error::TooManyVertices(27));
    }

    #[test]
    fn build_errors_carry_list_column() {
        let err = parse_line("3 bc,a,ab").unwrap_err();
        assert_eq!(err.error, Error::Asymmetry { from: 2, to: 1 });
        assert_eq!(err.column, 8);
    }

    #[test]
    fn stream_skips_comments_and_isolates_errors() {
        let input = "# header\n3 bc,ca,ab\n\n3 bc,c,ab\n3 bc,ca,ab\n";
        let items: Vec<_> = read_stream(input.as_bytes()).map(|r| r.unwrap()).collect();
        assert_eq!(items.len(), 3);
        assert_eq!(items[0].0, 2);
        assert!(items[0].1.is_ok());
        assert_eq!(items[1].0, 4);
        assert!(items[1].1.is_err());
        assert!(items[2].1.is_ok());
        assert_eq!(read_stream(&b""[..]).count(), 0);
    }

    #[test]
    fn write_stream_emits_one_line_per_map() {
        let m = parse_line(K7).unwrap();
        let mut out = Vec::new();
        write_stream([&m, &m], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(parse_line(text.lines().next().unwrap()).unwrap().neighbor_lists().len(), 7);
    }
}
