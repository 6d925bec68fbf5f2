//! The base Ramsey fact R(3,3) = 6 by exhaustion.

use mixlab_core::combinatorics::colex;
use mixlab_core::ramsey::{find_homogeneous, Coloring, DEFAULT_BUDGET};

/// Brute force: does some 3-set of `[n]` get one colour on all its pairs?
fn has_mono_triangle(n: usize, color: impl Fn(usize, usize) -> u32) -> bool {
    colex(n, 3).any(|t| {
        let c = color(t[0], t[1]);
        color(t[0], t[2]) == c && color(t[1], t[2]) == c
    })
}

#[test]
fn every_two_coloring_of_k6_has_a_triangle() {
    let edges: Vec<Vec<usize>> = colex(6, 2).collect();
    assert_eq!(edges.len(), 15);
    for mask in 0u32..1 << 15 {
        let col = Coloring::from_fn(2, 6, |a| {
            let i = edges.iter().position(|e| e == a).unwrap();
            mask >> i & 1
        })
        .unwrap();
        let r = find_homogeneous(&col, 3, DEFAULT_BUDGET).unwrap();
        assert!(r.exact);
        assert!(r.target_met, "colouring {mask:#x}");
        assert!(r.cert.verify(&col));
    }
}

#[test]
fn pentagon_coloring_of_k5_has_no_triangle() {
    let color = |a: usize, b: usize| u32::from(!matches!(b - a, 1 | 4));
    assert!(!has_mono_triangle(5, color));
    let col = Coloring::from_fn(2, 5, |a| color(a[0], a[1])).unwrap();
    let r = find_homogeneous(&col, 3, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.cert.size, 2);
    assert!(!r.target_met);
}

#[test]
fn search_agrees_with_brute_force_on_k5() {
    let edges: Vec<Vec<usize>> = colex(5, 2).collect();
    for mask in 0u32..1 << 10 {
        let color = |a: usize, b: usize| {
            let i = edges.iter().position(|e| e[0] == a && e[1] == b).unwrap();
            mask >> i & 1
        };
        let col = Coloring::from_fn(2, 5, |a| color(a[0], a[1])).unwrap();
        let r = find_homogeneous(&col, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.target_met, has_mono_triangle(5, color), "colouring {mask:#x}");
    }
}
