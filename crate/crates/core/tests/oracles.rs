mod common;

use gridramsey::qform::{build_matrix, min_rectangles};
use gridramsey::search::{min_mono_boxes_exact, MinOutcome};
use gridramsey::{boxes, Coloring, Grid, SearchBudget};

use common::{brute_min_line, brute_min_rectangles, naive_boxes, naive_mono_count};

fn budget() -> SearchBudget {
    SearchBudget::new(u64::MAX, 300)
}

fn exact_min(c: usize, sides: &[u64]) -> u64 {
    match min_mono_boxes_exact(c, &Grid::from_sides(sides).unwrap(), &budget()) {
        MinOutcome::Exact { t, .. } => t.try_into().unwrap(),
        other => panic!("{sides:?}: {other:?}"),
    }
}

#[test]
fn box_enumerators_agree() {
    for shape in [vec![4], vec![3, 3], vec![2, 3, 4], vec![1, 5], vec![3, 2, 2, 2]] {
        let naive = naive_boxes(&shape);
        let fast: Vec<_> = boxes(&shape).collect();
        assert_eq!(naive.len(), fast.len(), "{shape:?}");
        let sides: Vec<u64> = shape.iter().map(|&a| a as u64).collect();
        assert_eq!(Grid::from_sides(&sides).unwrap().box_count(), naive.len().into());
        for b in fast {
            let corners = b.corners().collect();
            assert!(naive.contains(&corners));
        }
    }
}

#[test]
fn mono_counts_agree_on_fixed_colorings() {
    let g = Grid::from_sides(&[3, 4, 2]).unwrap();
    let col = Coloring::from_fn(g, 2, |p| ((p[0] * 7 + p[1] * 3 + p[2]) % 2) as u32).unwrap();
    assert_eq!(col.count_monochromatic_boxes(), naive_mono_count(&col).into());
}

#[test]
fn line_minimum_matches_enumeration() {
    assert_eq!(brute_min_line(4, 2), 2);
    for (a, c) in [(4, 2), (5, 2), (7, 3), (6, 3), (5, 4)] {
        assert_eq!(exact_min(c, &[a as u64]), brute_min_line(a, c), "[{a}] c={c}");
    }
}

#[test]
fn rectangle_minimum_matches_full_enumeration() {
    for r in 1..=4 {
        for s in 1..=6 {
            let brute = brute_min_rectangles(r, s);
            assert_eq!(exact_min(2, &[r as u64, s as u64]), brute, "[{r},{s}]");
            assert_eq!(min_rectangles(r, s, &budget()).unwrap().exact(), Some(brute));
        }
    }
    assert_eq!(brute_min_rectangles(3, 7), 1);
    assert_eq!(brute_min_rectangles(3, 8), 2);
}

#[test]
fn matrix_entries_from_definition() {
    // Count rectangles between one column of each type directly.
    for r in 1..=5 {
        let m = build_matrix(r).unwrap();
        for i in 0..1usize << r {
            for j in 0..1usize << r {
                let mut count = 0;
                for x in 0..r {
                    for y in x + 1..r {
                        let bit = |t: usize, k: usize| t >> k & 1;
                        let same = bit(i, x) == bit(i, y) && bit(j, x) == bit(j, y);
                        count += u64::from(same && bit(i, x) == bit(j, x));
                    }
                }
                assert_eq!(m.entry(i, j), count);
            }
            assert_eq!(m.diag()[i], m.entry(i, i));
        }
    }
}
