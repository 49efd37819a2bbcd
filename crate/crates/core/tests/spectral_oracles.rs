mod common;

use common::{bisection_eigenvalues, cube_q3, dense_laplacian, small_corpus};
use spectral_lab::graph::complete_bipartite;
use spectral_lab::linalg::{symmetric_eigen, SymmetricMatrix};
use spectral_lab::matchings::{count_perfect_matchings_bruteforce, perfect_matchings};
use spectral_lab::spectral::{
    laplacian, laplacian_spectral_radius, neighborhood_sum_defect, path_fiedler_closed_form, rayleigh_quotient,
    spectral_gap,
};
use spectral_lab::{algebraic_connectivity, build_h2n, path_graph, Graph};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn jacobi_matches_inertia_bisection_up_to_order_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..300 {
        let n = 1 + trial % 6;
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.gen_range(-3.0..3.0);
                rows[i][j] = x;
                rows[j][i] = x;
            }
        }
        let jac = symmetric_eigen(&SymmetricMatrix::from_rows(&rows).unwrap()).unwrap().values;
        let bis = bisection_eigenvalues(&rows);
        for (a, b) in jac.iter().zip(&bis) {
            assert!((a - b).abs() <= 1e-8, "order {n}: {jac:?} vs {bis:?}");
        }
    }
    for (name, g) in small_corpus().into_iter().filter(|(_, g)| g.vertex_count() <= 6) {
        let jac = symmetric_eigen(&laplacian(&g)).unwrap().values;
        let bis = bisection_eigenvalues(&dense_laplacian(&g));
        for (a, b) in jac.iter().zip(&bis) {
            assert!((a - b).abs() <= 1e-8, "{name}");
        }
    }
}

#[test]
fn k33_values() {
    let k = complete_bipartite(3, 3).to_graph();
    // spectrum of L(K_{3,3}) is 0, 3 (x4), 6
    let bis = bisection_eigenvalues(&dense_laplacian(&k));
    assert!((bis[1] - 3.0).abs() < 1e-9 && (bis[5] - 6.0).abs() < 1e-9);
    let s = algebraic_connectivity(&k).unwrap();
    assert!((s.value - bis[1]).abs() < 1e-9);
    assert_eq!(s.multiplicity, 4);
    assert!((spectral_gap(&k).unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn path_spectrum_is_cosines() {
    for n in [2, 3, 7, 20] {
        let vals = symmetric_eigen(&laplacian(&path_graph(n).unwrap())).unwrap().values;
        for (j, v) in vals.iter().enumerate() {
            let want = 2.0 - 2.0 * (std::f64::consts::PI * j as f64 / n as f64).cos();
            assert!((v - want).abs() < 1e-10);
        }
    }
    assert!((path_fiedler_closed_form(4).unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-15);
}

#[test]
fn rayleigh_examples() {
    let p2 = laplacian(&path_graph(2).unwrap());
    assert!((rayleigh_quotient(&p2, &[1.0, -1.0]).unwrap() - 2.0).abs() < 1e-15);
    let h = build_h2n(7).unwrap().to_graph();
    let l = laplacian(&h);
    assert_eq!(rayleigh_quotient(&l, &vec![1.0; 14]).unwrap(), 0.0);
    assert!(rayleigh_quotient(&l, &vec![0.0; 14]).is_err());
    let s = algebraic_connectivity(&h).unwrap();
    assert!((rayleigh_quotient(&l, &s.vector).unwrap() - s.value).abs() < 1e-9);
    // variational lower bound over vectors orthogonal to 1
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let mut z: Vec<f64> = (0..14).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = z.iter().sum::<f64>() / 14.0;
        z.iter_mut().for_each(|x| *x -= mean);
        assert!(rayleigh_quotient(&l, &z).unwrap() >= s.value - 1e-9);
    }
}

#[test]
fn complement_identity_and_degree_bound() {
    for (name, g) in small_corpus() {
        let n = g.vertex_count();
        if n < 2 {
            continue;
        }
        let a = algebraic_connectivity(&g).unwrap().value;
        let mu = laplacian_spectral_radius(&g.complement()).unwrap();
        assert!((a + mu - n as f64).abs() <= 1e-8, "{name}: {a} + {mu} != {n}");
        // complete graphs have a(K_n) = n > n - 1; the bound is for the rest
        let complete = g.edge_count() == n * (n - 1) / 2;
        if g.is_connected() && !complete {
            assert!(a <= g.min_degree() as f64 + 1e-9, "{name}");
        }
    }
}

#[test]
fn cubic_neighborhood_sums() {
    for (name, g) in small_corpus().into_iter().filter(|(_, g)| g.regular_degree() == Some(3)) {
        let s = algebraic_connectivity(&g).unwrap();
        assert!(neighborhood_sum_defect(&g, s.value, &s.vector).unwrap() <= 1e-8, "{name}");
    }
}

#[test]
fn fiedler_vector_contract() {
    for (name, g) in small_corpus() {
        let s = algebraic_connectivity(&g).unwrap();
        let norm: f64 = s.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12, "{name}");
        assert!(s.vector.iter().sum::<f64>().abs() < 1e-9, "{name}");
        assert!(s.residual <= 1e-8 * g.vertex_count() as f64, "{name}");
        assert_eq!(s.value > 1e-9, g.is_connected(), "{name}");
    }
    let two_k2 = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
    assert!(algebraic_connectivity(&two_k2).unwrap().value.abs() < 1e-12);
}

#[test]
fn cube_and_h12_matchings() {
    assert_eq!(perfect_matchings(&cube_q3()).unwrap(), 9);
    assert_eq!(count_perfect_matchings_bruteforce(&cube_q3()).unwrap(), 9);
    let h = build_h2n(6).unwrap();
    assert_eq!(perfect_matchings(&h).unwrap(), count_perfect_matchings_bruteforce(&h).unwrap());
}
