//! Laplacian spectra, algebraic connectivity and Fiedler vectors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Graph};
use crate::linalg::{symmetric_eigen, Eigen, SymmetricMatrix};

/// Relative tolerance for treating two eigenvalues as equal.
pub const MULTIPLICITY_TOL: f64 = 1e-6;

/// Algebraic connectivity with one unit Fiedler vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    /// Second-smallest Laplacian eigenvalue.
    pub value: f64,
    /// Unit eigenvector for `value`, orthogonal to the all-ones vector,
    /// sign-normalized (first entry of largest magnitude is positive).
    pub vector: Vec<f64>,
    /// Number of eigenvalues after the smallest one lying within the
    /// multiplicity tolerance of `value`.
    pub multiplicity: usize,
    /// `max |L x - value * x|`.
    pub residual: f64,
}

/// Orthonormal basis of the Fiedler eigenspace, orthogonal to `1`.
#[derive(Debug, Clone)]
pub struct FiedlerSpace {
    pub value: f64,
    pub basis: Vec<Vec<f64>>,
    pub multiplicity: usize,
    pub spectrum: Vec<f64>,
}

pub fn laplacian(g: &Graph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.vertex_count());
    for v in 0..g.vertex_count() {
        m.set(v, v, g.degree(v) as f64);
    }
    for &(a, b) in g.edges() {
        m.set(a, b, -1.0);
    }
    m
}

pub fn adjacency(g: &Graph) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(g.vertex_count());
    for &(a, b) in g.edges() {
        m.set(a, b, 1.0);
    }
    m
}

pub fn laplacian_eigen(g: &Graph) -> Result<Eigen> {
    symmetric_eigen(&laplacian(g))
}

/// `sum over edges (x_a - x_b)^2`, i.e. `x^T L x` without forming `L`.
pub fn laplacian_quadratic_form(g: &Graph, x: &[f64]) -> f64 {
    g.edges().iter().map(|&(a, b)| (x[a] - x[b]).powi(2)).sum()
}

/// `z^T L z / z^T z`.
pub fn rayleigh_quotient(l: &SymmetricMatrix, z: &[f64]) -> Result<f64> {
    if z.len() != l.order() {
        return Err(Error::InvalidParameter(format!(
            "vector of length {} for matrix of order {}",
            z.len(),
            l.order()
        )));
    }
    let norm2 = dot(z, z);
    if norm2 == 0.0 {
        return Err(Error::InvalidParameter("zero vector".into()));
    }
    Ok(l.quadratic_form(z) / norm2)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Flips the sign so that the first entry of (numerically) largest
/// magnitude is positive.
pub fn normalize_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v.iter().position(|x| x.abs() >= max * (1.0 - 1e-9)).expect("max exists");
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn multiplicity_tol(values: &[f64]) -> f64 {
    let scale = values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    MULTIPLICITY_TOL * scale
}

/// Eigenspace of the second-smallest Laplacian eigenvalue, projected off `1`.
pub fn fiedler_space(g: &Graph) -> Result<FiedlerSpace> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::InvalidParameter("algebraic connectivity needs at least 2 vertices".into()));
    }
    let eig = laplacian_eigen(g)?;
    let value = eig.values[1];
    let tol = multiplicity_tol(&eig.values);
    let close: Vec<usize> = (0..n).filter(|&k| (eig.values[k] - value).abs() <= tol).collect();
    let multiplicity = close.iter().filter(|&&k| k >= 1).count();
    // order: the second eigenvector first, so simple cases return it unchanged
    let mut order: Vec<usize> = close.iter().copied().filter(|&k| k >= 1).collect();
    order.extend(close.iter().copied().filter(|&k| k == 0));
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in order {
        let mut v = eig.vectors[k].clone();
        let c = v.iter().sum::<f64>() * inv_sqrt_n;
        v.iter_mut().for_each(|x| *x -= c * inv_sqrt_n);
        for b in &basis {
            let p = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        if normalize(&mut v) > 1e-6 {
            basis.push(v);
        }
    }
    if basis.is_empty() {
        return Err(Error::Numerical("empty Fiedler eigenspace".into()));
    }
    Ok(FiedlerSpace { value, basis, multiplicity, spectrum: eig.values })
}

fn residual(l: &SymmetricMatrix, x: &[f64], value: f64) -> f64 {
    l.mul_vec(x)
        .iter()
        .zip(x)
        .fold(0.0f64, |m, (lx, xi)| m.max((lx - value * xi).abs()))
}

/// Second-smallest Laplacian eigenvalue and a unit Fiedler vector.
pub fn algebraic_connectivity(g: &Graph) -> Result<SpectralResult> {
    let space = fiedler_space(g)?;
    let mut vector = space.basis[0].clone();
    normalize_sign(&mut vector);
    let res = residual(&laplacian(g), &vector, space.value);
    let order = g.vertex_count() as f64;
    if res > 1e-8 * order {
        return Err(Error::Numerical(format!("Fiedler residual {res:e} too large")));
    }
    Ok(SpectralResult { value: space.value, vector, multiplicity: space.multiplicity, residual: res })
}

/// Largest Laplacian eigenvalue.
pub fn laplacian_spectral_radius(g: &Graph) -> Result<f64> {
    Ok(laplacian_eigen(g)?.values.last().copied().unwrap_or(0.0))
}

/// `lambda_1(A) - lambda_2(A)` for a regular graph.
pub fn spectral_gap(g: &Graph) -> Result<f64> {
    if g.regular_degree().is_none() {
        return Err(Error::NotRegular);
    }
    if g.vertex_count() < 2 {
        return Err(Error::InvalidParameter("spectral gap needs at least 2 vertices".into()));
    }
    let eig = symmetric_eigen(&adjacency(g))?;
    let n = eig.values.len();
    Ok(eig.values[n - 1] - eig.values[n - 2])
}

/// `a(P_n) = 2 - 2 cos(pi / n)`.
pub fn path_fiedler_closed_form(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("path needs n >= 2, got {n}")));
    }
    Ok(2.0 - 2.0 * (std::f64::consts::PI / n as f64).cos())
}

/// A unit Fiedler vector `z` with `z(u_i) = z(v_i)` for a graph on which
/// `u_i <-> v_i` is an automorphism (such as `H_2n`). Built as `x + y` where
/// `y` exchanges the two halves of a Fiedler vector `x`.
pub fn symmetric_fiedler_h2n(g: &BipartiteGraph) -> Result<Vec<f64>> {
    let n = g.n_left();
    if g.n_right() != n || g.swap_parts() != *g {
        return Err(Error::Precondition("u_i <-> v_i is not an automorphism".into()));
    }
    let unified = g.to_graph();
    let space = fiedler_space(&unified)?;
    let mut z = None;
    for x in &space.basis {
        let mut cand: Vec<f64> = (0..2 * n).map(|k| x[k] + x[(k + n) % (2 * n)]).collect();
        if normalize(&mut cand) > 1e-6 {
            z = Some(cand);
            break;
        }
    }
    let mut z = z.ok_or_else(|| {
        Error::Numerical("Fiedler eigenspace has no part-symmetric vector".into())
    })?;
    normalize_sign(&mut z);
    let res = residual(&laplacian(&unified), &z, space.value);
    if res > 1e-8 {
        return Err(Error::Numerical(format!("symmetric Fiedler residual {res:e}")));
    }
    let asym = (0..n).fold(0.0f64, |m, i| m.max((z[i] - z[n + i]).abs()));
    if asym > 1e-8 {
        return Err(Error::Numerical(format!("part asymmetry {asym:e}")));
    }
    Ok(z)
}

/// Checks that `{v : x_v >= -r}` and `{v : x_v <= r}` induce connected subgraphs.
pub fn sublevel_sets_connected(g: &Graph, x: &[f64], r: f64) -> bool {
    let upper: Vec<bool> = x.iter().map(|&xv| xv >= -r).collect();
    let lower: Vec<bool> = x.iter().map(|&xv| xv <= r).collect();
    g.induced_is_connected(&upper) && g.induced_is_connected(&lower)
}

/// Largest `|(d - a) x_u - sum_{w ~ u} x_w|` over vertices, for a
/// `d`-regular graph and eigenpair `(a, x)`.
pub fn neighborhood_sum_defect(g: &Graph, a: f64, x: &[f64]) -> Result<f64> {
    let d = g.regular_degree().ok_or(Error::NotRegular)? as f64;
    Ok((0..g.vertex_count())
        .map(|u| {
            let s: f64 = g.neighbors(u).iter().map(|&w| x[w]).sum();
            ((d - a) * x[u] - s).abs()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_h2n, complete_bipartite, cycle_graph, path_graph};

    #[test]
    fn laplacian_shapes() {
        let l = laplacian(&path_graph(2).unwrap());
        assert_eq!(l, SymmetricMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap());
        let k = laplacian(&complete_bipartite(3, 3).to_graph());
        assert!((0..6).all(|i| k.get(i, i) == 3.0));
        let h = laplacian(&build_h2n(6).unwrap().to_graph());
        assert!((0..12).all(|i| h.row(i).iter().sum::<f64>() == 0.0));
    }

    #[test]
    fn known_values() {
        let p3 = algebraic_connectivity(&path_graph(3).unwrap()).unwrap();
        assert!((p3.value - 1.0).abs() < 1e-12);
        let k = algebraic_connectivity(&complete_bipartite(3, 3).to_graph()).unwrap();
        assert!((k.value - 3.0).abs() < 1e-10);
        assert_eq!(k.multiplicity, 4);
        let two_k2 = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let r = algebraic_connectivity(&two_k2).unwrap();
        assert!(r.value.abs() < 1e-12);
        assert!(r.vector.iter().sum::<f64>().abs() < 1e-9);
        assert!((dot(&r.vector, &r.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form() {
        assert!((path_fiedler_closed_form(2).unwrap() - 2.0).abs() < 1e-15);
        assert!((path_fiedler_closed_form(3).unwrap() - 1.0).abs() < 1e-15);
        assert!((path_fiedler_closed_form(4).unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!(path_fiedler_closed_form(1).is_err());
    }

    #[test]
    fn rayleigh() {
        let l = laplacian(&path_graph(2).unwrap());
        assert!((rayleigh_quotient(&l, &[1.0, -1.0]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(rayleigh_quotient(&l, &[1.0, 1.0]).unwrap(), 0.0);
        assert!(rayleigh_quotient(&l, &[0.0, 0.0]).is_err());
        let g = build_h2n(8).unwrap().to_graph();
        let r = algebraic_connectivity(&g).unwrap();
        let q = rayleigh_quotient(&laplacian(&g), &r.vector).unwrap();
        assert!((q - r.value).abs() < 1e-9);
        assert!((laplacian_quadratic_form(&g, &r.vector) - r.value).abs() < 1e-9);
    }

    #[test]
    fn gap_identity_small() {
        let k33 = complete_bipartite(3, 3).to_graph();
        assert!((spectral_gap(&k33).unwrap() - 3.0).abs() < 1e-10);
        let c6 = cycle_graph(6).unwrap();
        let a = algebraic_connectivity(&c6).unwrap().value;
        assert!((spectral_gap(&c6).unwrap() - a).abs() < 1e-9);
        assert!(matches!(spectral_gap(&path_graph(4).unwrap()), Err(Error::NotRegular)));
    }

    #[test]
    fn symmetric_fiedler() {
        for n in [6, 10] {
            let g = build_h2n(n).unwrap();
            let z = symmetric_fiedler_h2n(&g).unwrap();
            let a = algebraic_connectivity(&g.to_graph()).unwrap().value;
            let q = rayleigh_quotient(&laplacian(&g.to_graph()), &z).unwrap();
            assert!((q - a).abs() < 1e-9);
            assert!((0..n).all(|i| (z[i] - z[n + i]).abs() <= 1e-8));
        }
        let c = crate::graph::even_cycle(5).unwrap();
        assert!(symmetric_fiedler_h2n(&c).is_err());
    }

    #[test]
    fn sign_normalization() {
        let mut v = vec![0.1, -0.5, 0.5];
        normalize_sign(&mut v);
        assert_eq!(v, vec![-0.1, 0.5, -0.5]);
    }

    #[test]
    fn neighborhood_sums() {
        let g = build_h2n(9).unwrap().to_graph();
        let r = algebraic_connectivity(&g).unwrap();
        assert!(neighborhood_sum_defect(&g, r.value, &r.vector).unwrap() < 1e-8);
    }
}
