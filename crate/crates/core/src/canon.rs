//! Canonical forms of bipartite graphs for isomorph rejection.
//!
//! The canonical biadjacency matrix is the lexicographically smallest
//! row-major 0/1 matrix reachable by permuting rows and columns (and, for
//! square matrices, transposing). For a fixed row order the best column order
//! just sorts columns, so the search only branches over rows: each chosen row
//! splits the ordered column cells into a zero part followed by a one part,
//! and the next row must be one whose emitted string is minimal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Byte string identifying a bipartite graph up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        hex::decode(s)
            .map(CanonicalForm)
            .map_err(|e| Error::InvalidParameter(format!("bad canonical hex: {e}")))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A canonical labeling: the form plus the relabeling that produces it.
#[derive(Debug, Clone)]
pub struct CanonicalLabeling {
    pub form: CanonicalForm,
    /// Whether the parts were exchanged before relabeling.
    pub swapped: bool,
    /// `left_perm[i]` is the canonical index of original row `i`.
    pub left_perm: Vec<usize>,
    /// `right_perm[j]` is the canonical index of original column `j`.
    pub right_perm: Vec<usize>,
}

struct Search<'a> {
    rows: &'a [u64],
    width: usize,
    best: Option<Vec<u64>>,
    best_order: Vec<usize>,
    best_cells: Vec<u64>,
    prefix: Vec<u64>,
    order: Vec<usize>,
}

/// Emitted string of `row` under `cells` (MSB-first) and the refined cells.
fn emit(row: u64, cells: &[u64], width: usize) -> u64 {
    let mut value = 0u64;
    let mut pos = 0usize;
    for &c in cells {
        let size = c.count_ones() as usize;
        let ones = (c & row).count_ones() as usize;
        for p in pos + size - ones..pos + size {
            value |= 1u64 << (width - 1 - p);
        }
        pos += size;
    }
    value
}

fn refine(row: u64, cells: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for &c in cells {
        let zeros = c & !row;
        let ones = c & row;
        if zeros != 0 {
            out.push(zeros);
        }
        if ones != 0 {
            out.push(ones);
        }
    }
    out
}

impl Search<'_> {
    fn run(&mut self, remaining: &[usize], cells: &[u64]) {
        let depth = self.prefix.len();
        if remaining.is_empty() {
            if self.best.as_ref().is_none_or(|b| self.prefix < *b) {
                self.best = Some(self.prefix.clone());
                self.best_order = self.order.clone();
                self.best_cells = cells.to_vec();
            }
            return;
        }
        let values: Vec<u64> = remaining.iter().map(|&r| emit(self.rows[r], cells, self.width)).collect();
        let m = *values.iter().min().expect("nonempty");
        if let Some(best) = &self.best {
            match self.prefix.as_slice().cmp(&best[..depth]).then(m.cmp(&best[depth])) {
                std::cmp::Ordering::Greater => return,
                _ => {}
            }
        }
        let mut tried: Vec<u64> = Vec::new();
        for (k, &r) in remaining.iter().enumerate() {
            if values[k] != m || tried.contains(&self.rows[r]) {
                continue;
            }
            // rows with equal masks lead to identical subtrees
            tried.push(self.rows[r]);
            let rest: Vec<usize> = remaining.iter().copied().filter(|&x| x != r).collect();
            let next = refine(self.rows[r], cells);
            self.prefix.push(m);
            self.order.push(r);
            self.run(&rest, &next);
            self.prefix.pop();
            self.order.pop();
        }
    }
}

struct Best {
    strings: Vec<u64>,
    row_order: Vec<usize>,
    col_order: Vec<usize>,
}

fn minimize(rows: &[u64], width: usize) -> Best {
    let all_cols = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let mut search = Search {
        rows,
        width,
        best: None,
        best_order: Vec::new(),
        best_cells: Vec::new(),
        prefix: Vec::with_capacity(rows.len()),
        order: Vec::with_capacity(rows.len()),
    };
    let initial: Vec<u64> = if width == 0 { Vec::new() } else { vec![all_cols] };
    let remaining: Vec<usize> = (0..rows.len()).collect();
    search.run(&remaining, &initial);
    let mut col_order = Vec::with_capacity(width);
    for &c in &search.best_cells {
        col_order.extend((0..width).filter(|&j| c >> j & 1 == 1));
    }
    Best {
        strings: search.best.unwrap_or_default(),
        row_order: search.best_order,
        col_order,
    }
}

fn transpose(rows: &[u64], width: usize) -> Vec<u64> {
    (0..width)
        .map(|j| rows.iter().enumerate().fold(0u64, |m, (i, &r)| m | ((r >> j & 1) << i)))
        .collect()
}

fn encode(n_left: usize, n_right: usize, strings: &[u64]) -> CanonicalForm {
    let mut bytes = Vec::with_capacity(8 + strings.len() * 8);
    bytes.extend_from_slice(&(n_left as u32).to_be_bytes());
    bytes.extend_from_slice(&(n_right as u32).to_be_bytes());
    let row_bytes = n_right.div_ceil(8);
    for &s in strings {
        // left-align the `n_right`-bit string, keep whole bytes
        let aligned = if n_right == 0 { 0 } else { s << (64 - n_right) };
        bytes.extend_from_slice(&aligned.to_be_bytes()[..row_bytes]);
    }
    CanonicalForm(bytes)
}

fn invert(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

/// Canonical labeling of a bipartite graph with at most 64 vertices per part.
pub fn canonical_labeling(g: &BipartiteGraph) -> Result<CanonicalLabeling> {
    if g.n_left() > 64 || g.n_right() > 64 {
        return Err(Error::TooLarge("canonical form supports at most 64 vertices per part".into()));
    }
    let rows = g.row_masks()?;
    let direct = minimize(&rows, g.n_right());
    let mut swapped = false;
    let mut best = direct;
    if g.n_left() == g.n_right() {
        let t = transpose(&rows, g.n_right());
        let alt = minimize(&t, g.n_left());
        if alt.strings < best.strings {
            best = alt;
            swapped = true;
        }
    }
    Ok(CanonicalLabeling {
        form: encode(g.n_left(), g.n_right(), &best.strings),
        swapped,
        left_perm: invert(&best.row_order),
        right_perm: invert(&best.col_order),
    })
}

pub fn canonical_form(g: &BipartiteGraph) -> Result<CanonicalForm> {
    canonical_labeling(g).map(|c| c.form)
}

/// The canonical representative: relabeled (and possibly part-swapped) so
/// that its biadjacency matrix is the canonical one.
pub fn canonical_graph(g: &BipartiteGraph) -> Result<BipartiteGraph> {
    let lab = canonical_labeling(g)?;
    let base = if lab.swapped { g.swap_parts() } else { g.clone() };
    base.relabel(&lab.left_perm, &lab.right_perm)
}

pub fn is_isomorphic(a: &BipartiteGraph, b: &BipartiteGraph) -> Result<bool> {
    Ok(canonical_form(a)? == canonical_form(b)?)
}
