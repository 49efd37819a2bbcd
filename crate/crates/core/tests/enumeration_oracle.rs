mod common;

use common::{unique, BruteClasses};
use spectral_lab::enumeration::{certify_minimizer, enumerate_cubic_bipartite, structural_spot_checks};
use spectral_lab::{build_h2n, canonical_form};

fn check_against_oracle(n: usize) {
    let oracle = BruteClasses::new(n);
    let found = enumerate_cubic_bipartite(n).unwrap();
    assert_eq!(found.len(), oracle.connected_count(), "n={n}");
    let ids: Vec<usize> = found.iter().map(|g| oracle.class_of(g).expect("cubic matrix")).collect();
    assert_eq!(unique(ids.iter().copied()), found.len(), "two representatives in one class");
    assert!(ids.iter().all(|&id| oracle.reps[id].1));
}

#[test]
fn n3_to_n5_match_oracle() {
    for n in 3..=5 {
        check_against_oracle(n);
    }
}

#[test]
fn n6_matches_oracle() {
    check_against_oracle(6);
}

#[test]
fn canonical_forms_separate_oracle_classes() {
    let oracle = BruteClasses::new(6);
    let forms: Vec<_> = (0..oracle.reps.len()).map(|id| canonical_form(&oracle.rep_graph(id)).unwrap()).collect();
    assert_eq!(unique(forms.iter().cloned()), oracle.reps.len());
}

#[test]
fn deterministic_order() {
    let a = enumerate_cubic_bipartite(6).unwrap();
    let b = enumerate_cubic_bipartite(6).unwrap();
    assert_eq!(a, b);
    let forms: Vec<_> = a.iter().map(|g| canonical_form(g).unwrap()).collect();
    assert!(forms.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn small_order_minimizers_are_reported() {
    for n in 3..=5 {
        let r = certify_minimizer(n).unwrap();
        assert!(!r.asserted && r.pass);
        assert!(!r.argmin.is_empty());
    }
}

#[test]
fn h14_structure() {
    let r = structural_spot_checks(&build_h2n(7).unwrap()).unwrap();
    assert_eq!(r.cut_edges, 0);
    assert!(r.holds(), "{r:?}");
}
