//! Simple graphs and labeled bipartite graphs.
//!
//! A [`BipartiteGraph`] keeps its two parts `U = {u_0, .., u_{p-1}}` and
//! `V = {v_0, .., v_{q-1}}` explicit. Whenever a single vertex space is needed
//! (Laplacians, vectors indexed by vertex) `u_i` maps to `i` and `v_j` maps to
//! `p + j`.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Each edge is stored as `(min, max)`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for &x in &[a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { index: x, size: n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    /// Common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map(Vec::len)?;
        self.adj.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        is_connected_with(self.n, |v| self.adj[v].iter().copied())
    }

    /// Connectivity of the subgraph induced by `keep`.
    pub fn induced_is_connected(&self, keep: &[bool]) -> bool {
        let verts: Vec<usize> = (0..self.n).filter(|&v| keep[v]).collect();
        let Some(&start) = verts.first() else {
            return true;
        };
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if keep[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == verts.len()
    }

    /// Complement graph (no loops).
    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if !self.has_edge(a, b) {
                    edges.push((a, b));
                }
            }
        }
        Self::from_sorted(self.n, edges)
    }

    /// Edges whose removal disconnects their component.
    pub fn bridges(&self) -> Vec<(usize, usize)> {
        bridges(self.n, &self.adj)
    }

    /// Graph with the given vertex relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        check_permutation(perm, self.n)?;
        Graph::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }
}

/// Path `P_n` on vertices `0..n` with edges `(i, i+1)`.
pub fn path_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("path needs n >= 2, got {n}")));
    }
    Ok(Graph::from_sorted(n, (0..n - 1).map(|i| (i, i + 1)).collect()))
}

/// Cycle `C_n` on vertices `0..n`.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Labeled bipartite graph with parts `U` (size `n_left`) and `V` (size `n_right`).
///
/// Edges are `(u, v)` pairs with `u < n_left`, `v < n_right`, kept sorted and
/// free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<(usize, usize)>,
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

/// A pair of edges `(u1, v1)`, `(u2, v2)` with four distinct endpoints and no
/// edge between the two, i.e. inducing `2K_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IndependentEdgePair {
    pub e1: (usize, usize),
    pub e2: (usize, usize),
}

#[derive(Serialize, Deserialize)]
struct EdgeListJson {
    n_left: usize,
    n_right: usize,
    edges: Vec<[usize; 2]>,
}

impl BipartiteGraph {
    pub fn new(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n_left {
                return Err(Error::VertexOutOfRange { index: u, size: n_left });
            }
            if v >= n_right {
                return Err(Error::VertexOutOfRange { index: v, size: n_right });
            }
            if !set.insert((u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        Ok(Self::from_sorted(n_left, n_right, set.into_iter().collect()))
    }

    fn from_sorted(n_left: usize, n_right: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut left_adj = vec![Vec::new(); n_left];
        let mut right_adj = vec![Vec::new(); n_right];
        for &(u, v) in &edges {
            left_adj[u].push(v);
            right_adj[v].push(u);
        }
        for list in left_adj.iter_mut().chain(right_adj.iter_mut()) {
            list.sort_unstable();
        }
        Self { n_left, n_right, edges, left_adj, right_adj }
    }

    /// Builds a square bipartite graph from biadjacency rows given as bitmasks
    /// (bit `j` of `rows[i]` set iff `u_i ~ v_j`).
    pub fn from_row_masks(n_right: usize, rows: &[u64]) -> Result<Self> {
        if n_right > 64 {
            return Err(Error::TooLarge(format!("{n_right} columns exceed a 64-bit row mask")));
        }
        let mut edges = Vec::new();
        for (i, &mask) in rows.iter().enumerate() {
            if n_right < 64 && mask >> n_right != 0 {
                return Err(Error::VertexOutOfRange { index: 63 - mask.leading_zeros() as usize, size: n_right });
            }
            for j in 0..n_right {
                if mask >> j & 1 == 1 {
                    edges.push((i, j));
                }
            }
        }
        Ok(Self::from_sorted(rows.len(), n_right, edges))
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn vertex_count(&self) -> usize {
        self.n_left + self.n_right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges `(u, v)` in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n_left && self.left_adj[u].binary_search(&v).is_ok()
    }

    /// Neighbors (in `V`) of `u_i`.
    pub fn left_neighbors(&self, u: usize) -> &[usize] {
        &self.left_adj[u]
    }

    /// Neighbors (in `U`) of `v_j`.
    pub fn right_neighbors(&self, v: usize) -> &[usize] {
        &self.right_adj[v]
    }

    pub fn left_degree(&self, u: usize) -> usize {
        self.left_adj[u].len()
    }

    pub fn right_degree(&self, v: usize) -> usize {
        self.right_adj[v].len()
    }

    /// Unified vertex index of `v_j`.
    pub fn right_index(&self, v: usize) -> usize {
        self.n_left + v
    }

    /// Degrees in unified vertex order.
    pub fn degrees(&self) -> Vec<usize> {
        self.left_adj.iter().chain(self.right_adj.iter()).map(Vec::len).collect()
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.left_adj.iter().chain(self.right_adj.iter()).all(|l| l.len() == k)
    }

    pub fn is_cubic(&self) -> bool {
        self.is_regular(3)
    }

    /// Row bitmasks of the biadjacency matrix (requires `n_right <= 64`).
    pub fn row_masks(&self) -> Result<Vec<u64>> {
        if self.n_right > 64 {
            return Err(Error::TooLarge(format!("{} columns exceed a 64-bit row mask", self.n_right)));
        }
        Ok(self
            .left_adj
            .iter()
            .map(|l| l.iter().fold(0u64, |m, &j| m | 1 << j))
            .collect())
    }

    /// Dense 0/1 biadjacency matrix, rows indexed by `U`.
    pub fn biadjacency(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.n_right]; self.n_left];
        for &(u, v) in &self.edges {
            m[u][v] = 1;
        }
        m
    }

    /// The same graph as a plain [`Graph`] on the unified vertex set.
    pub fn to_graph(&self) -> Graph {
        let p = self.n_left;
        Graph::from_sorted(
            self.vertex_count(),
            {
                let mut e: Vec<_> = self.edges.iter().map(|&(u, v)| (u, p + v)).collect();
                e.sort_unstable();
                e
            },
        )
    }

    /// Recovers a bipartition by 2-coloring. In each component the smallest
    /// vertex goes to `U`; within each part the original order is kept.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let n = g.vertex_count();
        let mut color: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = color[v].unwrap_or(false);
                for &w in g.neighbors(v) {
                    match color[w] {
                        None => {
                            color[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return Err(Error::NotBipartite),
                        _ => {}
                    }
                }
            }
        }
        let mut index = vec![0usize; n];
        let (mut p, mut q) = (0, 0);
        for v in 0..n {
            if color[v] == Some(false) {
                index[v] = p;
                p += 1;
            } else {
                index[v] = q;
                q += 1;
            }
        }
        let edges = g.edges().iter().map(|&(a, b)| {
            if color[a] == Some(false) {
                (index[a], index[b])
            } else {
                (index[b], index[a])
            }
        });
        BipartiteGraph::new(p, q, edges)
    }

    /// Exchanges the roles of `U` and `V`.
    pub fn swap_parts(&self) -> BipartiteGraph {
        BipartiteGraph::new(self.n_right, self.n_left, self.edges.iter().map(|&(u, v)| (v, u)))
            .expect("transpose of a valid graph is valid")
    }

    /// Relabels within parts: `u_i -> u_{left[i]}`, `v_j -> v_{right[j]}`.
    pub fn relabel(&self, left: &[usize], right: &[usize]) -> Result<BipartiteGraph> {
        check_permutation(left, self.n_left)?;
        check_permutation(right, self.n_right)?;
        BipartiteGraph::new(
            self.n_left,
            self.n_right,
            self.edges.iter().map(|&(u, v)| (left[u], right[v])),
        )
    }

    pub fn is_connected(&self) -> bool {
        let p = self.n_left;
        is_connected_with(self.vertex_count(), |x| {
            let it: Box<dyn Iterator<Item = usize>> = if x < p {
                Box::new(self.left_adj[x].iter().map(move |&v| p + v))
            } else {
                Box::new(self.right_adj[x - p].iter().copied())
            };
            it
        })
    }

    /// Edges `(u, v)` whose removal disconnects the graph component.
    pub fn bridges(&self) -> Vec<(usize, usize)> {
        let g = self.to_graph();
        let p = self.n_left;
        let mut out: Vec<_> = g.bridges().into_iter().map(|(a, b)| (a, b - p)).collect();
        out.sort_unstable();
        out
    }

    /// Graph with the listed edges removed (missing edges are ignored).
    pub fn without_edges(&self, remove: &[(usize, usize)]) -> BipartiteGraph {
        let edges = self.edges.iter().copied().filter(|e| !remove.contains(e)).collect();
        Self::from_sorted(self.n_left, self.n_right, edges)
    }

    /// Whether `(u1, v1)`, `(u2, v2)` form an independent pair in this graph.
    pub fn is_independent_pair(&self, e1: (usize, usize), e2: (usize, usize)) -> bool {
        let ((u1, v1), (u2, v2)) = (e1, e2);
        u1 != u2
            && v1 != v2
            && self.has_edge(u1, v1)
            && self.has_edge(u2, v2)
            && !self.has_edge(u1, v2)
            && !self.has_edge(u2, v1)
    }

    /// All independent edge pairs, ordered lexicographically by the indices of
    /// the two edges in [`Self::edges`].
    pub fn independent_edge_pairs(&self) -> Vec<IndependentEdgePair> {
        let mut out = Vec::new();
        for (i, &e1) in self.edges.iter().enumerate() {
            for &e2 in &self.edges[i + 1..] {
                if self.is_independent_pair(e1, e2) {
                    out.push(IndependentEdgePair { e1, e2 });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = EdgeListJson {
            n_left: self.n_left,
            n_right: self.n_right,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        };
        serde_json::to_string(&doc).expect("edge list serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: EdgeListJson = serde_json::from_str(text)?;
        BipartiteGraph::new(doc.n_left, doc.n_right, doc.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl Serialize for BipartiteGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EdgeListJson {
            n_left: self.n_left,
            n_right: self.n_right,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartiteGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = EdgeListJson::deserialize(d)?;
        BipartiteGraph::new(doc.n_left, doc.n_right, doc.edges.into_iter().map(|[u, v]| (u, v)))
            .map_err(serde::de::Error::custom)
    }
}

/// The path-like cubic bipartite graph `H_{2n}` on `u_1..u_n`, `v_1..v_n`
/// (stored 0-based). With 1-based labels, `u_i ~ v_j` iff
///
/// * `i in {1, 2}`: `j in {1, 2, 3}`
/// * `i = 3`: `j in {1, 2, 4}`
/// * `4 <= i <= n-3`: `j in {i-1, i, i+1}`
/// * `i = n-2`: `j in {n-3, n-1, n}`
/// * `i in {n-1, n}`: `j in {n-2, n-1, n}`
///
/// The map `u_i <-> v_i` is an automorphism.
pub fn build_h2n(n: usize) -> Result<BipartiteGraph> {
    if n < 6 {
        return Err(Error::InvalidParameter(format!("H_2n is defined for n >= 6, got {n}")));
    }
    let mut edges = Vec::with_capacity(3 * n);
    for i in 1..=n {
        let cols: [usize; 3] = if i <= 2 {
            [1, 2, 3]
        } else if i == 3 {
            [1, 2, 4]
        } else if i <= n - 3 {
            [i - 1, i, i + 1]
        } else if i == n - 2 {
            [n - 3, n - 1, n]
        } else {
            [n - 2, n - 1, n]
        };
        edges.extend(cols.iter().map(|&j| (i - 1, j - 1)));
    }
    BipartiteGraph::new(n, n, edges)
}

/// Complete bipartite graph `K_{p,q}`.
pub fn complete_bipartite(p: usize, q: usize) -> BipartiteGraph {
    let edges = (0..p).flat_map(|u| (0..q).map(move |v| (u, v))).collect();
    BipartiteGraph::from_sorted(p, q, edges)
}

/// Even cycle `C_{2m}` as a bipartite graph: `u_i ~ v_i` and `u_i ~ v_{i-1}`.
/// In unified labels the cycle runs `u_0 v_0 u_1 v_1 ...`.
pub fn even_cycle(m: usize) -> Result<BipartiteGraph> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("even cycle needs m >= 2, got {m}")));
    }
    BipartiteGraph::new(m, m, (0..m).flat_map(|i| [(i, i), (i, (i + m - 1) % m)]))
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidParameter(format!("permutation of length {} for {n} vertices", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
    }
    Ok(())
}

fn is_connected_with<I, F>(n: usize, neighbors: F) -> bool
where
    I: Iterator<Item = usize>,
    F: Fn(usize) -> I,
{
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for w in neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

// Iterative lowlink search.
fn bridges(n: usize, adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut out = Vec::new();
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, parent, next neighbor position)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.2 < adj[v].len() {
                let w = adj[v][top.2];
                top.2 += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        out.push((parent.min(v), parent.max(v)));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}
