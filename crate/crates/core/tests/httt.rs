use std::collections::BTreeSet;

use posqbf::httt::{catalog, find_shape, httt_win_sets, variants, Polyomino, SYMMETRIES};

fn normalized(p: &Polyomino) -> Vec<(i64, i64)> {
    let (mx, my) = p.cells().iter().fold((i64::MAX, i64::MAX), |(a, b), &(x, y)| (a.min(x), b.min(y)));
    let mut c: Vec<_> = p.cells().iter().map(|&(x, y)| (x - mx, y - my)).collect();
    c.sort_unstable();
    c
}

#[test]
fn variants_are_closed_under_the_symmetry_group() {
    for shape in catalog() {
        let vs: BTreeSet<_> = variants(&shape).iter().map(normalized).collect();
        assert_eq!(vs.len(), variants(&shape).len(), "{}", shape.name());
        for v in variants(&shape) {
            for &f in SYMMETRIES.iter() {
                assert!(vs.contains(&normalized(&v.transform(f))), "{}", shape.name());
            }
        }
    }
}

/// Counts placements by brute force: every origin and every transformed copy.
fn brute_force_placements(p: &Polyomino, size: i64) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for &f in SYMMETRIES.iter() {
        let cells: Vec<_> = p.cells().iter().map(|&c| f(c)).collect();
        for ox in -size..=size {
            for oy in -size..=size {
                let placed: Option<Vec<usize>> = cells
                    .iter()
                    .map(|&(x, y)| {
                        let (x, y) = (x + ox, y + oy);
                        ((0..size).contains(&x) && (0..size).contains(&y)).then(|| (y * size + x) as usize)
                    })
                    .collect();
                if let Some(mut s) = placed {
                    s.sort_unstable();
                    out.insert(s);
                }
            }
        }
    }
    out
}

#[test]
fn tippy_placements_on_five_by_five() {
    let shapes = catalog();
    let tippy = find_shape(&shapes, "tippy").unwrap();
    let got: BTreeSet<Vec<usize>> = httt_win_sets(tippy, 5)
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s
        })
        .collect();
    assert_eq!(got, brute_force_placements(tippy, 5));
}

#[test]
fn every_catalog_shape_places_like_brute_force() {
    for shape in catalog() {
        for size in 1..=4 {
            let got: BTreeSet<Vec<usize>> = httt_win_sets(&shape, size)
                .into_iter()
                .map(|mut s| {
                    s.sort_unstable();
                    s
                })
                .collect();
            assert_eq!(got, brute_force_placements(&shape, size as i64), "{} {size}", shape.name());
        }
    }
}
