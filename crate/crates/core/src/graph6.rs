//! graph6 text encoding (short form, n <= 62).
//!
//! A line is `N(n)` followed by the upper triangle of the adjacency matrix, read column by
//! column (`x(0,1) x(0,2) x(1,2) x(0,3) ...`), packed big-endian into 6-bit groups with each
//! group offset by 63. The final group is zero-padded.

use thiserror::Error;

use crate::graph::Graph;

/// Largest order expressible with the one-byte size header.
pub const MAX_SHORT_ORDER: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 line")]
    Empty,
    #[error("byte {offset}: character {byte:#04x} outside the graph6 range 63..=126")]
    OutOfRange { offset: usize, byte: u8 },
    #[error("byte {offset}: multi-byte size header (n > {MAX_SHORT_ORDER}) is not supported")]
    LongHeader { offset: usize },
    #[error("byte {offset}: expected {expected} bytes for n = {n}, found {found}")]
    Length {
        offset: usize,
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: padding bits in the final group must be zero")]
    TrailingBits { offset: usize },
    #[error("graph with {0} vertices cannot use the short graph6 form")]
    TooLarge(usize),
}

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn encode(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    if n > MAX_SHORT_ORDER {
        return Err(Graph6Error::TooLarge(n));
    }
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(63 + n as u8);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
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
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Decodes one line; a single trailing `\n` (or `\r\n`) is tolerated.
pub fn decode(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.as_bytes();
    let bytes = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    let bytes = bytes.strip_suffix(b"\r").unwrap_or(bytes);
    let (&header, body) = bytes.split_first().ok_or(Graph6Error::Empty)?;
    if !(63..=126).contains(&header) {
        return Err(Graph6Error::OutOfRange {
            offset: 0,
            byte: header,
        });
    }
    if header == 126 {
        return Err(Graph6Error::LongHeader { offset: 0 });
    }
    let n = (header - 63) as usize;
    let expected = body_len(n);
    if body.len() != expected {
        return Err(Graph6Error::Length {
            offset: 1 + body.len().min(expected),
            n,
            expected: 1 + expected,
            found: bytes.len(),
        });
    }
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::OutOfRange {
                offset: 1 + i,
                byte: b,
            });
        }
    }
    let total_bits = n * n.saturating_sub(1) / 2;
    let pad = expected * 6 - total_bits;
    if pad > 0 {
        let last = body[expected - 1] - 63;
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(Graph6Error::TrailingBits { offset: expected });
        }
    }
    let mut rows = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let group = body[k / 6] - 63;
            if group & (0x20 >> (k % 6)) != 0 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
        }
    }
    Ok(Graph::from_rows(&rows).expect("n <= 62"))
}

/// Decodes every non-blank line; errors carry the 1-based line number.
pub fn decode_lines(text: &str) -> Result<Vec<Graph>, (usize, Graph6Error)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| decode(l.trim_end()).map_err(|e| (i + 1, e)))
        .collect()
}

/// Encodes graphs as newline-terminated lines.
pub fn encode_lines<'a, I: IntoIterator<Item = &'a Graph>>(
    graphs: I,
) -> Result<String, Graph6Error> {
    let mut out = String::new();
    for g in graphs {
        out.push_str(&encode(g)?);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hand_encoded_small_graphs() {
        // n = 1: header 63 + 1 = '@', no body
        assert_eq!(encode(&Graph::complete(1).unwrap()).unwrap(), "@");
        // n = 2: header 'A'; one bit x(0,1) = 1 -> 100000b = 32 -> 32 + 63 = '_'
        assert_eq!(encode(&Graph::complete(2).unwrap()).unwrap(), "A_");
        assert_eq!(decode("A_").unwrap(), Graph::complete(2).unwrap());
        assert_eq!(decode("A?").unwrap(), Graph::empty(2).unwrap());
        assert_eq!(decode("?").unwrap(), Graph::empty(0).unwrap());
        // published example: the 5-cycle 0-1-2-3-4-0 is "Dhc"
        assert_eq!(encode(&Graph::cycle(5).unwrap()).unwrap(), "Dhc");
        assert_eq!(encode(&Graph::petersen()).unwrap().len(), 1 + 8);
    }

    #[test]
    fn malformed_lines_report_offsets() {
        assert_eq!(decode(""), Err(Graph6Error::Empty));
        assert_eq!(decode("~??"), Err(Graph6Error::LongHeader { offset: 0 }));
        assert_eq!(
            decode(" "),
            Err(Graph6Error::OutOfRange {
                offset: 0,
                byte: b' '
            })
        );
        assert!(matches!(
            decode("D"),
            Err(Graph6Error::Length {
                offset: 1,
                n: 5,
                ..
            })
        ));
        assert!(matches!(
            decode("A__"),
            Err(Graph6Error::Length { offset: 2, .. })
        ));
        assert_eq!(
            decode("Dh "),
            Err(Graph6Error::OutOfRange {
                offset: 2,
                byte: b' '
            })
        );
        // n = 2 uses one bit; 'B' - 63 = 3 sets padding bits
        assert_eq!(decode("AB"), Err(Graph6Error::TrailingBits { offset: 1 }));
    }

    #[test]
    fn tolerates_line_terminators() {
        assert_eq!(decode("Dhc\n").unwrap(), Graph::cycle(5).unwrap());
        assert_eq!(decode("Dhc\r\n").unwrap(), Graph::cycle(5).unwrap());
        let graphs = decode_lines("@\n\nA_\n").unwrap();
        assert_eq!(graphs.len(), 2);
        assert_eq!(decode_lines("@\nA\n").unwrap_err().0, 2);
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..=20, bits in proptest::collection::vec(any::<bool>(), 190)) {
            let mut edges = Vec::new();
            let mut k = 0;
            for v in 1..n {
                for u in 0..v {
                    if bits[k] { edges.push((u, v)); }
                    k += 1;
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let s = encode(&g).unwrap();
            prop_assert_eq!(decode(&s).unwrap(), g);
            prop_assert_eq!(encode(&decode(&s).unwrap()).unwrap(), s);
        }
    }
}
