//! Ledrappier cylinder measures against brute-force counting on a 4x4 window.

use mixlab_core::combinatorics::colex;
use mixlab_core::exact::ratio;
use mixlab_core::{CylinderPattern, GroupElement, System};

const SIDE: usize = 4;

fn cell(i: usize) -> (usize, usize) {
    (i % SIDE, i / SIDE)
}

/// All 0/1 arrays on the window obeying every in-window relation
/// `x(n,m) + x(n+1,m) + x(n,m+1) = 0`, as 16-bit masks.
fn window_solutions() -> Vec<u16> {
    let bit = |x: u32, a: usize, b: usize| (x >> (b * SIDE + a)) & 1;
    (0u32..1 << (SIDE * SIDE))
        .filter(|&x| {
            (0..SIDE - 1).all(|a| (0..SIDE - 1).all(|b| bit(x, a, b) ^ bit(x, a + 1, b) ^ bit(x, a, b + 1) == 0))
        })
        .map(|x| x as u16)
        .collect()
}

#[test]
fn window_has_128_solutions() {
    assert_eq!(window_solutions().len(), 128);
}

#[test]
fn measures_match_counting_up_to_three_constraints() {
    let sols = window_solutions();
    let sys = System::ledrappier();
    for size in 0..=3 {
        for cells in colex(SIDE * SIDE, size) {
            for syms in 0u32..1 << size {
                let pattern = CylinderPattern::new(cells.iter().enumerate().map(|(t, &c)| {
                    let (a, b) = cell(c - 1);
                    (GroupElement::from_i64s(&[a as i64, b as i64]), syms >> t & 1)
                }))
                .unwrap();
                let hits = sols
                    .iter()
                    .filter(|&&x| {
                        cells
                            .iter()
                            .enumerate()
                            .all(|(t, &c)| u32::from(x >> (c - 1) & 1) == syms >> t & 1)
                    })
                    .count();
                assert_eq!(
                    sys.measure(&pattern).unwrap().value(),
                    &ratio(hits as i64, sols.len() as i64),
                    "{pattern:?}"
                );
            }
        }
    }
}

#[test]
fn translated_window_keeps_its_measure() {
    let sys = System::ledrappier();
    let pattern = CylinderPattern::new([
        (GroupElement::from_i64s(&[0, 0]), 1),
        (GroupElement::from_i64s(&[2, 1]), 0),
        (GroupElement::from_i64s(&[3, 3]), 1),
    ])
    .unwrap();
    let base = sys.measure(&pattern).unwrap();
    for g in [[1, 0], [-7, 3], [1 << 40, -(1 << 33)]] {
        let moved = sys.translate(&GroupElement::from_i64s(&g), &pattern).unwrap();
        assert_eq!(sys.measure(&moved).unwrap(), base);
    }
}
