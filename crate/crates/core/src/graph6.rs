//! graph6 encoding: size prefix `N(n)` followed by the upper triangle of the
//! adjacency matrix in column-major order (`(0,1), (0,2), (1,2), (0,3), ..`),
//! packed six bits per byte, each byte offset by 63.

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph};

const OFFSET: u8 = 63;

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + OFFSET);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + OFFSET);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + OFFSET);
        }
    }
}

pub fn encode_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + OFFSET);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + OFFSET);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn decode_graph6(text: &str) -> Result<Graph> {
    let s = text.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {b} outside [63, 126]")));
    }
    let six = |b: u8| (b - OFFSET) as usize;
    let (n, body) = match bytes {
        [] => return Err(Error::Graph6("empty input".into())),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Error::Graph6("truncated size prefix".into()));
            }
            let n = rest[..6].iter().fold(0usize, |acc, &b| acc << 6 | six(b));
            (n, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Error::Graph6("truncated size prefix".into()));
            }
            let n = rest[..3].iter().fold(0usize, |acc, &b| acc << 6 | six(b));
            (n, &rest[3..])
        }
        [b, rest @ ..] => (six(*b), rest),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(Error::Graph6(format!(
            "expected {expected} data bytes for {n} vertices, found {}",
            body.len()
        )));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = six(body[k / 6]);
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if nbits % 6 != 0 && six(body[expected - 1]) & ((1 << (6 - nbits % 6)) - 1) != 0 {
        return Err(Error::Graph6("nonzero padding bits".into()));
    }
    Graph::new(n, edges)
}

impl BipartiteGraph {
    /// graph6 of the unified vertex labeling (`U` first, then `V`).
    pub fn to_graph6(&self) -> String {
        encode_graph6(&self.to_graph())
    }

    /// Decodes graph6 and recovers the bipartition by 2-coloring.
    pub fn from_graph6(text: &str) -> Result<Self> {
        BipartiteGraph::from_graph(&decode_graph6(text)?)
    }
}
