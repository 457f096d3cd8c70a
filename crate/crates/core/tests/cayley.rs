use std::collections::HashSet;

use bs_shift::cayley::{
    boundary_edge_count, gamma_closed_form, induced_edges, isoperimetric_ratio, rectangle_size,
    Limits, Window,
};
use bs_shift::group::{multiply, neighbors, normalize, Element, GroupParams};
use bs_shift::{Error, ResourceError};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

fn p(n: u32) -> GroupParams {
    GroupParams::new(n).unwrap()
}

fn rect(n: u32, m: u32) -> Window {
    Window::rectangle(p(n), m, &Limits::default()).unwrap()
}

#[test]
fn rectangle_cells_and_order() {
    let w = rect(2, 2);
    assert_eq!(w.len(), 8);
    let cells: Vec<(i64, u64)> = w
        .vertices()
        .iter()
        .map(|g| (i64::try_from(g.k()).unwrap(), g.i()))
        .collect();
    assert_eq!(
        cells,
        vec![
            (0, 0),
            (1, 0),
            (2, 0),
            (3, 0),
            (0, 1),
            (1, 1),
            (2, 1),
            (3, 1)
        ]
    );
    assert_eq!(w.rectangle_height(), Some(2));
    assert_eq!(induced_edges(&w).unwrap().len(), 9);
}

#[test]
fn boundary_matches_closed_form_and_recursion() {
    for n in [2u32, 3] {
        let mut prev: Option<BigUint> = None;
        for m in 1..=5 {
            let brute = BigUint::from(boundary_edge_count(&rect(n, m)).unwrap());
            assert_eq!(brute, gamma_closed_form(p(n), m), "N={n} m={m}");
            if let Some(g) = prev {
                assert_eq!(brute, BigUint::from(2u8) + BigUint::from(n) * g);
            }
            prev = Some(brute);
        }
    }
}

#[test]
fn rectangle_growth() {
    for n in [2u32, 3] {
        for m in 1..=5u32 {
            let d = rect(n, m + 1).len() - rect(n, m).len();
            let nm = (n as usize).pow(m);
            let (mm, nn) = (m as usize, n as usize);
            assert_eq!(d, nm * (mm * nn + nn - mm), "N={n} m={m}");
            assert_eq!(BigUint::from(rect(n, m).len()), rectangle_size(p(n), m));
        }
    }
}

#[test]
fn folner_ratios_decrease() {
    for n in [2u32, 3] {
        for m in 1..6 {
            assert!(isoperimetric_ratio(p(n), m + 1) < isoperimetric_ratio(p(n), m));
        }
    }
}

/// Independent BFS over words in the generators, using only `multiply`.
fn ball_by_words(n: u32, r: u32) -> HashSet<Element> {
    let pp = p(n);
    let gens = [
        Element::a_pow(1),
        Element::a_pow(-1),
        Element::b_pow(1),
        Element::b_pow(-1),
    ];
    let mut seen = HashSet::from([Element::identity()]);
    let mut frontier = vec![Element::identity()];
    for _ in 0..r {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = multiply(g, s, &pp).unwrap();
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    seen
}

#[test]
fn balls_agree_with_word_enumeration() {
    let l = Limits::default();
    for n in [2u32, 3] {
        let mut prev = 0;
        for r in 0..=5 {
            let w = Window::ball(p(n), r, &l).unwrap();
            let oracle = ball_by_words(n, r);
            assert_eq!(w.len(), oracle.len(), "N={n} r={r}");
            assert!(w.vertices().iter().all(|g| oracle.contains(g)));
            assert!(w.len() > prev);
            prev = w.len();
        }
    }
    // the Cayley graph is 4-regular with no loops, so |B(1)| = 5
    assert_eq!(Window::ball(p(2), 1, &l).unwrap().len(), 5);
}

#[test]
fn budgets_are_enforced() {
    let tight = Limits {
        max_vertices: 100,
        ..Limits::default()
    };
    assert!(matches!(
        Window::ball(p(2), 10, &tight),
        Err(Error::Resource(ResourceError::Vertices { .. }))
    ));
    assert!(matches!(
        Window::rectangle(p(2), 10, &tight),
        Err(Error::Resource(ResourceError::Vertices { .. }))
    ));
}

#[test]
fn json_round_trip_and_dot() {
    let l = Limits::default();
    for w in [
        rect(3, 2),
        Window::ball(p(2), 3, &l).unwrap(),
        Window::sheet(p(2), &[1, 0], 2, 2, 3, &l).unwrap(),
    ] {
        let back = Window::from_json(&w.to_json()).unwrap();
        assert_eq!(back.vertices(), w.vertices());
        assert_eq!(back.rectangle_height(), w.rectangle_height());
        let dot = w.to_dot(w.edges().unwrap());
        assert_eq!(dot.matches("->").count(), w.edges().unwrap().len());
        assert!(dot.starts_with("digraph"));
    }
    let bad = serde_json::json!({"N": 2, "vertices": [[1, "2", 1]]});
    assert!(matches!(Window::from_json(&bad), Err(Error::Format(_))));
}

#[test]
fn sheets_are_closed_under_a_within_width() {
    let l = Limits::default();
    let w = Window::sheet(p(2), &[1, 1], 1, 2, 4, &l).unwrap();
    assert_eq!(w.len(), 4 * 9);
    // every row is a contiguous a-segment, so it contributes 8 a-edges
    let a_edges = w
        .edges()
        .unwrap()
        .edges
        .iter()
        .filter(|e| e.2 == bs_shift::group::Generator::A)
        .count();
    assert_eq!(a_edges, 4 * 8);
    assert!(Window::sheet(p(2), &[2], 0, 1, 1, &l).is_err());
}

proptest! {
    #[test]
    fn translation_preserves_the_induced_graph(n in 2u32..5, j in 0u64..4, k in -50i64..50, i in 0u64..4) {
        let g = normalize(j, BigInt::from(k), i, &p(n));
        let w = rect(n, 2);
        let t = w.translate(&g).unwrap();
        prop_assert_eq!(t.len(), w.len());
        prop_assert_eq!(t.edges().unwrap().len(), w.edges().unwrap().len());
        prop_assert_eq!(boundary_edge_count(&t).unwrap(), boundary_edge_count(&w).unwrap());
    }

    #[test]
    fn adjacency_is_symmetric(n in 2u32..5, r in 1u32..4) {
        let w = Window::ball(p(n), r, &Limits::default()).unwrap();
        let adj = w.adjacency().unwrap();
        for (u, list) in adj.iter().enumerate() {
            for &(v, gen, out) in list {
                prop_assert!(adj[v].contains(&(u, gen, !out)));
            }
            let inside = neighbors(w.vertex(u), &p(n)).unwrap().iter().filter(|h| w.contains(h)).count();
            prop_assert_eq!(list.len(), inside);
        }
    }
}
