//! Independent reference implementations and the shared test corpus.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_lab::enumeration::enumerate_cubic_bipartite;
use spectral_lab::graph::{complete_bipartite, cycle_graph, even_cycle};
use spectral_lab::{build_h2n, path_graph, BipartiteGraph, Graph};

/// Number of eigenvalues of `m` below `t`: the inertia of `m - t I`, read
/// off a symmetric block elimination with Bunch-Parlett pivoting (1x1 or 2x2
/// pivots). Inertia is preserved by congruence (Sylvester).
pub fn count_below(m: &[Vec<f64>], t: f64) -> usize {
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= t;
    }
    let alpha = (1.0 + 17f64.sqrt()) / 8.0;
    let mut negative = 0;
    let mut active: Vec<usize> = (0..m.len()).collect();
    while !active.is_empty() {
        let (mut di, mut dmax) = (active[0], -1.0);
        for &i in &active {
            if a[i][i].abs() > dmax {
                dmax = a[i][i].abs();
                di = i;
            }
        }
        let (mut oi, mut oj, mut omax) = (0, 0, -1.0f64);
        for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                if a[i][j].abs() > omax {
                    (oi, oj, omax) = (i, j, a[i][j].abs());
                }
            }
        }
        if omax <= 0.0 || dmax >= alpha * omax {
            // 1x1 pivot
            let p = di;
            if a[p][p] <= 0.0 {
                negative += 1;
            }
            active.retain(|&x| x != p);
            if a[p][p] != 0.0 {
                for &i in &active {
                    let f = a[i][p] / a[p][p];
                    for &j in &active {
                        a[i][j] -= f * a[p][j];
                    }
                }
            }
        } else {
            // 2x2 pivot on (oi, oj); its determinant is negative-dominated
            let (p, q) = (oi, oj);
            let (app, aqq, apq) = (a[p][p], a[q][q], a[p][q]);
            let det = app * aqq - apq * apq;
            negative += if det < 0.0 { 1 } else if app + aqq < 0.0 { 2 } else { 0 };
            active.retain(|&x| x != p && x != q);
            for &i in &active {
                let (bip, biq) = (a[i][p], a[i][q]);
                // row i of B * inv(P)
                let cp = (bip * aqq - biq * apq) / det;
                let cq = (biq * app - bip * apq) / det;
                for &j in &active {
                    a[i][j] -= cp * a[p][j] + cq * a[q][j];
                }
            }
        }
    }
    negative
}

/// All eigenvalues, ascending, by bisection on the inertia count.
pub fn bisection_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let r = m.iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(1.0f64, f64::max);
    (0..n)
        .map(|k| {
            // odd endpoints keep midpoints off exactly representable eigenvalues
            let (mut lo, mut hi) = (-r - 0.739_085_133, r + 1.377_213_562);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(m, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

pub fn dense_laplacian(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0.0; n]; n];
    for &(a, b) in g.edges() {
        m[a][b] -= 1.0;
        m[b][a] -= 1.0;
        m[a][a] += 1.0;
        m[b][b] += 1.0;
    }
    m
}

/// Independent pairs by the definition: four distinct endpoints and neither
/// cross pair adjacent, over all `O(|E|^2)` edge pairs.
pub fn brute_independent_pairs(g: &BipartiteGraph) -> Vec<((usize, usize), (usize, usize))> {
    let e = g.edges();
    let mut out = Vec::new();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let ((a, b), (c, d)) = (e[i], e[j]);
            if a != c && b != d && !e.contains(&(a, d)) && !e.contains(&(c, b)) {
                out.push((e[i], e[j]));
            }
        }
    }
    out
}

fn row_sets(n: usize) -> Vec<u8> {
    (0u16..1 << n).filter(|m| m.count_ones() == 3).map(|m| m as u8).collect()
}

/// Every labeled `n x n` 0/1 matrix with all line sums 3, as row bytes.
pub fn labeled_cubic_matrices(n: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, rows: &mut Vec<u8>, cols: &mut [u8], choices: &[u8], out: &mut Vec<Vec<u8>>) {
        if rows.len() == n {
            out.push(rows.clone());
            return;
        }
        for &r in choices {
            if (0..n).all(|j| r >> j & 1 == 0 || cols[j] < 3) {
                (0..n).filter(|&j| r >> j & 1 == 1).for_each(|j| cols[j] += 1);
                rows.push(r);
                rec(n, rows, cols, choices, out);
                rows.pop();
                (0..n).filter(|&j| r >> j & 1 == 1).for_each(|j| cols[j] -= 1);
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![0; n], &row_sets(n), &mut out);
    out.retain(|m| (0..n).all(|j| m.iter().filter(|&&r| r >> j & 1 == 1).count() == 3));
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn transpose(m: &[u8]) -> Vec<u8> {
    let n = m.len();
    (0..n).map(|j| (0..n).fold(0u8, |acc, i| acc | ((m[i] >> j & 1) << i))).collect()
}

fn sorted_rows(m: &[u8], tau: &[usize]) -> Vec<u8> {
    let mut rows: Vec<u8> = m
        .iter()
        .map(|&r| (0..tau.len()).fold(0u8, |acc, j| acc | ((r >> j & 1) << tau[j])))
        .collect();
    rows.sort_unstable();
    rows
}

pub fn matrix_connected(m: &[u8]) -> bool {
    let n = m.len();
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, &r) in m.iter().enumerate() {
        for j in 0..n {
            if r >> j & 1 == 1 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
                parent[a] = b;
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..2 * n).all(|v| find(&mut parent, v) == root)
}

/// Isomorphism classes of labeled cubic bipartite matrices, found by
/// expanding the orbit of each new matrix under column permutations and
/// transposition (row order is factored out by sorting rows).
pub struct BruteClasses {
    pub n: usize,
    /// one representative per class, with its connectivity
    pub reps: Vec<(Vec<u8>, bool)>,
    class_of: HashMap<Vec<u8>, usize>,
    perms: Vec<Vec<usize>>,
}

impl BruteClasses {
    pub fn new(n: usize) -> Self {
        let perms = permutations(n);
        let mut class_of: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut reps = Vec::new();
        for m in labeled_cubic_matrices(n) {
            let key = sorted_rows(&m, &(0..n).collect::<Vec<_>>());
            if class_of.contains_key(&key) {
                continue;
            }
            let id = reps.len();
            for base in [m.clone(), transpose(&m)] {
                for tau in &perms {
                    class_of.insert(sorted_rows(&base, tau), id);
                }
            }
            reps.push((m.clone(), matrix_connected(&m)));
        }
        Self { n, reps, class_of, perms }
    }

    pub fn connected_count(&self) -> usize {
        self.reps.iter().filter(|r| r.1).count()
    }

    pub fn class_of(&self, g: &BipartiteGraph) -> Option<usize> {
        let m: Vec<u8> = g.row_masks().ok()?.iter().map(|&r| r as u8).collect();
        self.class_of.get(&sorted_rows(&m, &(0..self.n).collect::<Vec<_>>())).copied()
    }

    pub fn rep_graph(&self, id: usize) -> BipartiteGraph {
        let masks: Vec<u64> = self.reps[id].0.iter().map(|&r| r as u64).collect();
        BipartiteGraph::from_row_masks(self.n, &masks).unwrap()
    }
}

pub fn random_bipartite(rng: &mut impl Rng, p: usize, q: usize, density: f64) -> BipartiteGraph {
    let mut edges = Vec::new();
    for u in 0..p {
        for v in 0..q {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    BipartiteGraph::new(p, q, edges).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

pub fn random_relabel(rng: &mut impl Rng, g: &BipartiteGraph) -> BipartiteGraph {
    let mut l: Vec<usize> = (0..g.n_left()).collect();
    let mut r: Vec<usize> = (0..g.n_right()).collect();
    l.shuffle(rng);
    r.shuffle(rng);
    g.relabel(&l, &r).unwrap()
}

/// The 3-cube as a bipartite graph (even-weight vertices on the left).
pub fn cube_q3() -> BipartiteGraph {
    let even: Vec<u8> = (0u8..8).filter(|v| v.count_ones() % 2 == 0).collect();
    let odd: Vec<u8> = (0u8..8).filter(|v| v.count_ones() % 2 == 1).collect();
    let mut edges = Vec::new();
    for (i, &a) in even.iter().enumerate() {
        for (j, &b) in odd.iter().enumerate() {
            if (a ^ b).count_ones() == 1 {
                edges.push((i, j));
            }
        }
    }
    BipartiteGraph::new(4, 4, edges).unwrap()
}

/// Graphs with at most 16 vertices: every connected cubic bipartite class
/// for `n <= 8`, small paths and cycles, H_12..H_16, complete bipartite
/// graphs, the cube and random graphs.
pub fn small_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 3..=8 {
        for (k, g) in enumerate_cubic_bipartite(n).unwrap().into_iter().enumerate() {
            out.push((format!("cubic n={n} #{k}"), g.to_graph()));
        }
    }
    for n in 2..=16 {
        out.push((format!("P{n}"), path_graph(n).unwrap()));
    }
    for n in 3..=16 {
        out.push((format!("C{n}"), cycle_graph(n).unwrap()));
    }
    for n in 6..=8 {
        out.push((format!("H{}", 2 * n), build_h2n(n).unwrap().to_graph()));
    }
    for (p, q) in [(1, 1), (2, 3), (3, 3), (4, 4), (3, 5)] {
        out.push((format!("K{p},{q}"), complete_bipartite(p, q).to_graph()));
    }
    out.push(("even cycle 8".into(), even_cycle(4).unwrap().to_graph()));
    out.push(("Q3".into(), cube_q3().to_graph()));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for k in 0..40 {
        let n = rng.gen_range(2..=16);
        let density = rng.gen_range(0.15..0.8);
        out.push((format!("random #{k}"), random_graph(&mut rng, n, density)));
    }
    out
}

pub fn unique<T: std::hash::Hash + Eq>(items: impl IntoIterator<Item = T>) -> usize {
    items.into_iter().collect::<HashSet<_>>().len()
}

/// A swap hypothesis instance: graph, unit Fiedler vector and roles
/// `[u1, v1, u2, v2]` (unified indices).
pub struct SwapInstance {
    pub graph: BipartiteGraph,
    pub a: f64,
    pub x: Vec<f64>,
    pub roles: [usize; 4],
}

/// Equality-case instances on 12..16 vertices: for every class whose Fiedler
/// eigenvalue is multiple, and every independent pair, the eigenspace vector
/// with `x[v1] = x[v2]`, oriented so that `x[u1] > x[u2]`.
pub fn equality_instances() -> Vec<SwapInstance> {
    use spectral_lab::spectral::fiedler_space;
    let mut out = Vec::new();
    for n in 6..=8 {
        for g in enumerate_cubic_bipartite(n).unwrap() {
            let space = fiedler_space(&g.to_graph()).unwrap();
            if space.basis.len() < 2 || space.value >= 3.0 - 1e-9 {
                continue;
            }
            let (b1, b2) = (&space.basis[0], &space.basis[1]);
            let p = g.n_left();
            for pair in g.independent_edge_pairs() {
                let ((a, b), (c, d)) = (pair.e1, pair.e2);
                for [u1, v1, u2, v2] in [[a, p + b, c, p + d], [p + b, a, p + d, c]] {
                    let (d1, d2) = (b1[v1] - b1[v2], b2[v1] - b2[v2]);
                    let mut x: Vec<f64> = if d1.abs() < 1e-12 && d2.abs() < 1e-12 {
                        b1.clone()
                    } else {
                        b1.iter().zip(b2).map(|(s, t)| d2 * s - d1 * t).collect()
                    };
                    let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
                    x.iter_mut().for_each(|t| *t /= norm);
                    let gap = x[u1] - x[u2];
                    if gap.abs() < 1e-6 {
                        continue;
                    }
                    let roles = if gap > 0.0 { [u1, v1, u2, v2] } else { [u2, v2, u1, v1] };
                    out.push(SwapInstance { graph: g.clone(), a: space.value, x, roles });
                }
            }
        }
    }
    out
}
