//! The connectivity-decreasing two-edge swap and a descent built on it.
//!
//! For independent edges `u1 v1`, `u2 v2` and a Fiedler vector `x` with
//! `x[u1] > x[u2]`, `x[v1] <= x[v2]` and `d(v1) = d(v2)`, replacing them by
//! `u1 v2`, `u2 v1` gives a graph with strictly smaller algebraic connectivity
//! whenever the result is connected. In the strict case the change of the
//! quadratic form is `2 (x[u1] - x[u2]) (x[v1] - x[v2])`; in the equality case
//! a perturbed vector `z` certifies the decrease.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, IndependentEdgePair};
use crate::spectral::{algebraic_connectivity, laplacian, laplacian_quadratic_form, rayleigh_quotient};

/// Strictness margin for `x[u1] > x[u2]`, and the band treated as `x[v1] = x[v2]`.
pub const SWAP_STRICT_TOL: f64 = 1e-9;
/// A descent step must lower `a(G)` by more than this.
pub const DEFAULT_TIE_TOL: f64 = 1e-12;

/// Exchanges `(u1, v1), (u2, v2)` for `(u1, v2), (u2, v1)`.
pub fn swap_edges(g: &BipartiteGraph, pair: &IndependentEdgePair) -> Result<BipartiteGraph> {
    let ((u1, v1), (u2, v2)) = (pair.e1, pair.e2);
    if !g.is_independent_pair(pair.e1, pair.e2) {
        return Err(Error::NotIndependent(u1, v1, u2, v2));
    }
    let mut edges: Vec<(usize, usize)> =
        g.edges().iter().copied().filter(|&e| e != pair.e1 && e != pair.e2).collect();
    edges.push((u1, v2));
    edges.push((u2, v1));
    BipartiteGraph::new(g.n_left(), g.n_right(), edges)
}

/// Which part plays the role of `u` in the swap hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// An independent pair oriented for the swap hypothesis, with the Fiedler data
/// that decides whether it qualifies. Vertex fields are unified indices
/// (`u_i -> i`, `v_j -> n_left + j`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapCandidate {
    pub pair: IndependentEdgePair,
    pub u_side: Side,
    pub u1: usize,
    pub v1: usize,
    pub u2: usize,
    pub v2: usize,
    /// `x[u1] - x[u2]`.
    pub fiedler_u_gap: f64,
    /// `x[v1] - x[v2]`.
    pub fiedler_v_gap: f64,
    pub degree_ok: bool,
    pub result_connected: bool,
}

impl SwapCandidate {
    pub fn qualifies(&self) -> bool {
        self.fiedler_u_gap > SWAP_STRICT_TOL
            && self.fiedler_v_gap <= SWAP_STRICT_TOL
            && self.degree_ok
            && self.result_connected
    }

    /// `x^T L(G') x - x^T L(G) x` from the strict-case expansion.
    pub fn predicted_change(&self) -> f64 {
        2.0 * self.fiedler_u_gap * self.fiedler_v_gap
    }

    pub fn is_equality_case(&self) -> bool {
        self.fiedler_v_gap.abs() <= SWAP_STRICT_TOL
    }
}

impl fmt::Display for SwapCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ((a, b), (c, d)) = (self.pair.e1, self.pair.e2);
        write!(
            f,
            "remove u{}v{},u{}v{}; add u{}v{},u{}v{}",
            a + 1,
            b + 1,
            c + 1,
            d + 1,
            a + 1,
            d + 1,
            c + 1,
            b + 1
        )
    }
}

/// The four role assignments of a pair; all of them describe the same swap.
fn orientations(g: &BipartiteGraph, pair: &IndependentEdgePair) -> [(Side, [usize; 4]); 4] {
    let p = g.n_left();
    let ((a, b), (c, d)) = (pair.e1, pair.e2);
    let (b, d) = (p + b, p + d);
    [
        (Side::Left, [a, b, c, d]),
        (Side::Left, [c, d, a, b]),
        (Side::Right, [b, a, d, c]),
        (Side::Right, [d, c, b, a]),
    ]
}

/// Every independent pair, in its first orientation satisfying the Fiedler
/// inequalities, whose swap keeps degrees balanced and the graph connected.
pub fn find_qualifying_swaps(g: &BipartiteGraph, x: &[f64]) -> Result<Vec<SwapCandidate>> {
    if x.len() != g.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "vector has length {}, graph has {} vertices",
            x.len(),
            g.vertex_count()
        )));
    }
    let unified = g.to_graph();
    let mut out = Vec::new();
    for pair in g.independent_edge_pairs() {
        let mut connected = None;
        for (side, [u1, v1, u2, v2]) in orientations(g, &pair) {
            let u_gap = x[u1] - x[u2];
            let v_gap = x[v1] - x[v2];
            if !(u_gap > SWAP_STRICT_TOL && v_gap <= SWAP_STRICT_TOL) {
                continue;
            }
            let degree_ok = unified.degree(v1) == unified.degree(v2);
            if !degree_ok {
                continue;
            }
            let result_connected = *connected.get_or_insert_with(|| {
                swap_edges(g, &pair).map(|h| h.is_connected()).unwrap_or(false)
            });
            if !result_connected {
                break;
            }
            out.push(SwapCandidate {
                pair,
                u_side: side,
                u1,
                v1,
                u2,
                v2,
                fiedler_u_gap: u_gap,
                fiedler_v_gap: v_gap,
                degree_ok,
                result_connected,
            });
            break;
        }
    }
    Ok(out)
}

/// Perturbed vector from the equality case and its Rayleigh quotient on the
/// swapped graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub z: Vec<f64>,
    pub quotient: f64,
    /// Rayleigh quotient of `x` on `L(G)`, standing in for `a(G)`.
    pub a_value: f64,
    pub z_norm_sq: f64,
}

/// Builds `z` with `z[v1] = x[v1] + (x[u2] - x[u1]) / (k - a)`,
/// `z[v2] = x[v1] + (x[u1] - x[u2]) / (k - a)`, every other entry copied from
/// `x`, checks `z` is orthogonal to `1` and returns its quotient on `L(G')`.
///
/// `roles` is `[u1, v1, u2, v2]` in unified indices and must describe an
/// independent pair with `u1, u2` in the same part.
pub fn equality_case_certificate(g: &BipartiteGraph, roles: [usize; 4], x: &[f64], k: usize) -> Result<Certificate> {
    let [u1, v1, u2, v2] = roles;
    let n = g.vertex_count();
    if x.len() != n || roles.iter().any(|&r| r >= n) {
        return Err(Error::InvalidParameter("vector or vertex out of range".into()));
    }
    let p = g.n_left();
    let pair = if u1 < p && u2 < p && v1 >= p && v2 >= p {
        IndependentEdgePair { e1: (u1, v1 - p), e2: (u2, v2 - p) }
    } else if u1 >= p && u2 >= p && v1 < p && v2 < p {
        IndependentEdgePair { e1: (v1, u1 - p), e2: (v2, u2 - p) }
    } else {
        return Err(Error::Precondition("u1, u2 must share a part and v1, v2 the other".into()));
    };
    if !g.is_independent_pair(pair.e1, pair.e2) {
        return Err(Error::NotIndependent(u1, v1, u2, v2));
    }
    let unified = g.to_graph();
    if unified.degree(v1) != k || unified.degree(v2) != k {
        return Err(Error::Precondition(format!("d(v1) and d(v2) must both equal k = {k}")));
    }
    if (x[v1] - x[v2]).abs() > SWAP_STRICT_TOL {
        return Err(Error::Precondition(format!("x[v1] - x[v2] = {:e} is not zero", x[v1] - x[v2])));
    }
    if x[u1] <= x[u2] {
        return Err(Error::Precondition("requires x[u1] > x[u2]".into()));
    }
    let a = rayleigh_quotient(&laplacian(&unified), x)?;
    let kf = k as f64;
    if a >= kf {
        return Err(Error::Precondition(format!("a(G) = {a} is not below k = {k}")));
    }
    let mut z = x.to_vec();
    z[v1] = x[v1] + (x[u2] - x[u1]) / (kf - a);
    z[v2] = x[v1] + (x[u1] - x[u2]) / (kf - a);
    let sum: f64 = z.iter().sum();
    if sum.abs() > 1e-9 {
        return Err(Error::Numerical(format!("z is not orthogonal to 1 (sum {sum:e})")));
    }
    let swapped = swap_edges(g, &pair)?.to_graph();
    let quotient = rayleigh_quotient(&laplacian(&swapped), &z)?;
    let z_norm_sq = z.iter().map(|t| t * t).sum();
    Ok(Certificate { z, quotient, a_value: a, z_norm_sq })
}

/// `x^T L(G') x - x^T L(G) x` evaluated directly.
pub fn quadratic_form_change(g: &BipartiteGraph, pair: &IndependentEdgePair, x: &[f64]) -> Result<f64> {
    let h = swap_edges(g, pair)?;
    Ok(laplacian_quadratic_form(&h.to_graph(), x) - laplacian_quadratic_form(&g.to_graph(), x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalReason {
    NoQualifyingSwap,
    MaxIterations,
    NumericalTie,
}

impl fmt::Display for TerminalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminalReason::NoQualifyingSwap => "no_qualifying_swap",
            TerminalReason::MaxIterations => "max_iterations",
            TerminalReason::NumericalTie => "numerical_tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentStep {
    pub graph6: String,
    pub a_value: f64,
    /// The swap that produced this graph; `None` for the start.
    pub swap: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub steps: Vec<DescentStep>,
    pub terminal_reason: TerminalReason,
}

impl DescentTrace {
    pub fn final_value(&self) -> f64 {
        self.steps.last().map(|s| s.a_value).unwrap_or(f64::NAN)
    }

    pub fn final_graph(&self) -> Result<BipartiteGraph> {
        let last = self.steps.last().ok_or_else(|| Error::Numerical("empty trace".into()))?;
        BipartiteGraph::from_graph6(&last.graph6)
    }

    /// One JSON object per step, then a line with the terminal reason.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            let line = serde_json::json!({"step": i, "graph6": s.graph6, "a": s.a_value, "swap": s.swap});
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out.push_str(&serde_json::json!({"terminal_reason": self.terminal_reason.to_string()}).to_string());
        out.push('\n');
        out
    }
}

/// Repeatedly applies the qualifying swap with the most negative predicted
/// change (first in pair order on ties), recomputing `a(G)` after each step.
pub fn descend(g0: &BipartiteGraph, max_iter: usize, tie_tol: f64) -> Result<DescentTrace> {
    if !g0.is_connected() {
        return Err(Error::Precondition("descent needs a connected start graph".into()));
    }
    let mut g = g0.clone();
    let mut spec = algebraic_connectivity(&g.to_graph())?;
    let mut steps = vec![DescentStep { graph6: g.to_graph6(), a_value: spec.value, swap: None }];
    let terminal_reason = loop {
        let cands = find_qualifying_swaps(&g, &spec.vector)?;
        let Some(best) = cands.iter().min_by(|a, b| a.predicted_change().total_cmp(&b.predicted_change())) else {
            break TerminalReason::NoQualifyingSwap;
        };
        if steps.len() > max_iter {
            break TerminalReason::MaxIterations;
        }
        let next = swap_edges(&g, &best.pair)?;
        let next_spec = algebraic_connectivity(&next.to_graph())?;
        if next_spec.value >= spec.value - tie_tol {
            break TerminalReason::NumericalTie;
        }
        steps.push(DescentStep { graph6: next.to_graph6(), a_value: next_spec.value, swap: Some(best.to_string()) });
        g = next;
        spec = next_spec;
    };
    Ok(DescentTrace { steps, terminal_reason })
}

/// Union of `k` random perfect matchings between `U` and `V`, redrawn until
/// it is simple and connected.
pub fn random_regular_bipartite<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<BipartiteGraph> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    const MAX_ATTEMPTS: usize = 100_000;
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..MAX_ATTEMPTS {
        let mut edges = Vec::with_capacity(n * k);
        for _ in 0..k {
            perm.shuffle(rng);
            edges.extend(perm.iter().enumerate().map(|(i, &j)| (i, j)));
        }
        if let Ok(g) = BipartiteGraph::new(n, n, edges) {
            if g.is_connected() {
                return Ok(g);
            }
        }
    }
    Err(Error::Numerical(format!("no simple connected sample after {MAX_ATTEMPTS} attempts")))
}

pub fn random_cubic_bipartite<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BipartiteGraph> {
    random_regular_bipartite(n, 3, rng)
}
