//! The graph6 text format for simple undirected graphs.
//!
//! A graph6 string is the vertex count `N(n)` followed by the upper triangle
//! of the adjacency matrix, column by column (`x(0,1), x(0,2), x(1,2), ...`),
//! packed six bits per byte, most significant bit first, each byte offset by
//! 63. The last byte is zero-padded.

use thiserror::Error;

use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";
const MAX_SHORT: usize = 62;
const MAX_MEDIUM: usize = 258_047;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {offset}: character {byte:#04x} outside the printable range 63..=126")]
    BadCharacter { offset: usize, byte: u8 },
    #[error("byte {offset}: truncated vertex count")]
    TruncatedSize { offset: usize },
    #[error("byte {offset}: expected {expected} data bytes for {n} vertices, found {found}")]
    BadLength {
        offset: usize,
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: nonzero padding bits")]
    NonzeroPadding { offset: usize },
}

fn data_len(n: usize) -> usize {
    let bits = n * n.saturating_sub(1) / 2;
    bits.div_ceil(6)
}

/// Decodes a graph6 string. A leading `>>graph6<<` header and a single
/// trailing newline are tolerated. Error offsets index the original input.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let mut start = 0;
    let mut body = text;
    if let Some(rest) = body.strip_prefix(HEADER) {
        start = HEADER.len();
        body = rest;
    }
    let body = body
        .strip_suffix("\r\n")
        .or_else(|| body.strip_suffix('\n'))
        .unwrap_or(body);
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadCharacter {
                offset: start + i,
                byte: b,
            });
        }
    }

    let (n, header_len) = if bytes[0] != 126 {
        (usize::from(bytes[0] - 63), 1)
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return Err(Graph6Error::TruncatedSize { offset: start });
        }
        (read_size(&bytes[2..8]), 8)
    } else {
        if bytes.len() < 4 {
            return Err(Graph6Error::TruncatedSize { offset: start });
        }
        (read_size(&bytes[1..4]), 4)
    };

    let data = &bytes[header_len..];
    let expected = data_len(n);
    if data.len() != expected {
        return Err(Graph6Error::BadLength {
            offset: start + header_len,
            n,
            expected,
            found: data.len(),
        });
    }

    let bits = n * n.saturating_sub(1) / 2;
    let pad = expected * 6 - bits;
    if pad > 0 {
        let last = data[expected - 1] - 63;
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding {
                offset: start + header_len + expected - 1,
            });
        }
    }

    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::new(n, edges).expect("upper-triangle bits always form a simple graph"))
}

fn read_size(chunk: &[u8]) -> usize {
    chunk
        .iter()
        .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63))
}

fn write_size(n: usize, out: &mut Vec<u8>) {
    if n <= MAX_SHORT {
        out.push(n as u8 + 63);
        return;
    }
    let groups = if n <= MAX_MEDIUM {
        out.push(126);
        3
    } else {
        out.extend([126, 126]);
        6
    };
    for g in (0..groups).rev() {
        out.push(((n >> (6 * g)) & 0x3f) as u8 + 63);
    }
}

/// Encodes a graph without header or trailing newline.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::with_capacity(8 + data_len(n));
    write_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}
