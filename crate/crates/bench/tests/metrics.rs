use modmvnf_bench::metrics::{coverage, hypervolume_2d, Pair};
use proptest::prelude::*;

/// Dominated area on an integer grid, counted cell by cell.
fn grid_area(points: &[Pair], reference: (u32, u32)) -> f64 {
    let mut cells = 0;
    for x in 0..reference.0 {
        for y in 0..reference.1 {
            if points.iter().any(|&(c, l)| c <= x as f64 && l <= y as f64) {
                cells += 1;
            }
        }
    }
    cells as f64
}

fn grid_points() -> impl Strategy<Value = Vec<Pair>> {
    proptest::collection::vec((0u32..24, 0u32..24).prop_map(|(a, b)| (a as f64, b as f64)), 0..12)
}

proptest! {
    #[test]
    fn hypervolume_matches_cell_count(pts in grid_points()) {
        prop_assert_eq!(hypervolume_2d(&pts, (24.0, 24.0)), grid_area(&pts, (24, 24)));
    }

    #[test]
    fn adding_a_point_never_shrinks_hypervolume(pts in grid_points(), extra in (0u32..24, 0u32..24)) {
        let r = (24.0, 24.0);
        let mut more = pts.clone();
        more.push((extra.0 as f64, extra.1 as f64));
        prop_assert!(hypervolume_2d(&more, r) >= hypervolume_2d(&pts, r));
    }

    #[test]
    fn coverage_is_a_fraction(a in grid_points(), b in grid_points()) {
        let c = coverage(&a, &b);
        prop_assert!((0.0..=1.0).contains(&c));
        if !b.is_empty() {
            prop_assert_eq!(coverage(&b, &b), 1.0);
        }
    }
}

#[test]
fn hypervolume_by_hand() {
    // staircase against (4,4): 3*1 + 2*1 + 1*1
    let pts = [(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)];
    assert_eq!(hypervolume_2d(&pts, (4.0, 4.0)), 6.0);
    assert_eq!(hypervolume_2d(&[], (4.0, 4.0)), 0.0);
    assert_eq!(coverage(&pts, &[]), 0.0);
    assert_eq!(coverage(&[(0.0, 0.0)], &pts), 1.0);
}
