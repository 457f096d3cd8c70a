use std::collections::HashSet;
use std::sync::Arc;

use bs_shift::cayley::{Limits, Window};
use bs_shift::coloring_engine::{
    count_colorings, entropy_csv, entropy_table, extend_rectangle, glue, greedy_complete,
    legal_symbols, random_admissible, witness_family_even, witness_family_odd, EvenConvention,
    MethodChoice,
};
use bs_shift::group::{multiply, neighbors, Element, GroupParams};
use bs_shift::subshift::{gcs, locally_admissible, Pattern, Symbol};
use bs_shift::Error;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(n: u32) -> GroupParams {
    GroupParams::new(n).unwrap()
}

fn el(word: &str, n: u32) -> Element {
    bs_shift::group::eval_str(word, &p(n)).unwrap()
}

/// The 15-cell pattern around `e` for N = 2 whose four neighbors of `e`
/// carry all of 0..4.
fn four_color_trap() -> Pattern {
    let mut cells: Vec<(Element, Symbol)> = vec![
        (el("A", 2), 0),
        (el("A A", 2), 1),
        (el("a", 2), 1),
        (el("b", 2), 3),
        (el("a b", 2), 0),
        (el("A b", 2), 3),
        (el("A A b", 2), 2),
    ];
    for (t, s) in (-4i64..=2).zip([0, 2, 3, 1, 2, 3, 0]) {
        cells.push((
            multiply(&Element::b_pow(-1), &Element::a_pow(t), &p(2)).unwrap(),
            s,
        ));
    }
    let w = Arc::new(Window::custom(
        p(2),
        std::iter::once(Element::identity()).chain(cells.iter().map(|c| c.0.clone())),
    ));
    let mut pat = Pattern::empty(Arc::clone(&w), 4);
    for (g, s) in cells {
        pat.set(w.ordinal(&g).unwrap(), Some(s));
    }
    pat
}

#[test]
fn four_colors_can_trap_a_cell() {
    let pat = four_color_trap();
    assert_eq!(pat.window().len(), 15);
    assert_eq!(pat.support().len(), 14);
    let x4 = gcs(4).unwrap();
    assert!(locally_admissible(&pat, &x4).unwrap());
    let e = pat.window().ordinal(&Element::identity()).unwrap();
    assert!(legal_symbols(&pat, &x4, e).unwrap().is_empty());
    let err = greedy_complete(&pat, &x4).unwrap_err();
    assert!(
        matches!(err, Error::Construction(ref m) if m.contains("no legal symbol at e")),
        "{err}"
    );
    // with a fifth color the same pattern completes
    let mut five = Pattern::empty(Arc::clone(pat.window()), 5);
    for o in pat.support() {
        five.set(o, pat.get(o));
    }
    let done = greedy_complete(&five, &gcs(5).unwrap()).unwrap();
    assert_eq!(done.get(e), Some(4));
}

#[test]
fn odd_witnesses() {
    let l = Limits::default();
    let x3 = gcs(3).unwrap();
    for (n, m) in [(3u32, 1u32), (3, 2), (5, 1)] {
        let fam = witness_family_odd(p(n), m, &l).unwrap();
        let cells = fam.window().len();
        assert_eq!(fam.free_cells().len(), cells.div_ceil(2));
        let members: Vec<Pattern> = fam.members().unwrap().collect();
        assert_eq!(BigUint::from(members.len()), fam.size());
        let distinct: HashSet<Vec<Symbol>> = members.iter().map(|q| q.symbols().unwrap()).collect();
        assert_eq!(distinct.len(), members.len());
        assert!(members.iter().all(|q| locally_admissible(q, &x3).unwrap()));
        let count = count_colorings(fam.window(), &x3, MethodChoice::Auto, &l)
            .unwrap()
            .count;
        assert!(count >= fam.size());
    }
    assert_eq!(
        witness_family_odd(p(3), 2, &l).unwrap().free_cells().len(),
        9
    );
    assert!(witness_family_odd(p(2), 2, &l).is_err());
}

#[test]
fn even_witnesses() {
    let l = Limits::default();
    let x3 = gcs(3).unwrap();
    for (n, m) in [(2u32, 1u32), (2, 2), (4, 1)] {
        let fam = witness_family_even(p(n), m, EvenConvention::Consistent, &l).unwrap();
        let nn = n as u64;
        let want = m as u64 * (nn.pow(2 * m) / (2 * nn + 1));
        assert_eq!(fam.free_cells().len() as u64, want, "N={n} m={m}");
        assert_eq!(fam.window().rectangle_height(), Some(2 * m));
        let members: Vec<Pattern> = fam.members().unwrap().collect();
        let distinct: HashSet<Vec<Symbol>> = members.iter().map(|q| q.symbols().unwrap()).collect();
        assert_eq!(distinct.len(), members.len());
        assert!(members.iter().all(|q| locally_admissible(q, &x3).unwrap()));
    }
    let fam = witness_family_even(p(2), 2, EvenConvention::Consistent, &l).unwrap();
    assert_eq!(fam.size(), BigUint::from(64u8));
    for conv in [
        EvenConvention::PrintedLongBase,
        EvenConvention::PrintedShortBase,
    ] {
        let err = witness_family_even(p(2), 2, conv, &l).unwrap_err();
        assert!(
            matches!(err, Error::Construction(ref m) if m.contains("edge")),
            "{conv:?}: {err}"
        );
    }
    assert!(witness_family_even(p(3), 1, EvenConvention::Consistent, &l).is_err());
    // too many members to list; construction validates every choice at once
    for (n, m, want) in [
        (2u32, 3u32, 36usize),
        (2, 4, 204),
        (4, 1, 1),
        (6, 1, 2),
        (8, 1, 3),
    ] {
        let fam = witness_family_even(p(n), m, EvenConvention::Consistent, &l).unwrap();
        assert_eq!(fam.free_cells().len(), want, "N={n} m={m}");
        let last = fam.size() - BigUint::from(1u8);
        assert!(locally_admissible(&fam.member(&last).unwrap(), &x3).unwrap());
    }
    // for N = 4 the level-2 step 16 is 7 modulo the block length 9, so the
    // copied base rows are not proper
    let err = witness_family_even(p(4), 2, EvenConvention::Consistent, &l).unwrap_err();
    assert!(
        matches!(err, Error::Construction(ref m) if m.contains("-a->")),
        "{err}"
    );
}

#[test]
fn random_extensions() {
    let l = Limits::default();
    let x3 = gcs(3).unwrap();
    let r2 = Arc::new(Window::rectangle(p(2), 2, &l).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let q = random_admissible(&r2, &x3, None, &mut rng, &l)
            .unwrap()
            .unwrap();
        let e = extend_rectangle(&q, &x3, &l).unwrap();
        assert!(e.is_total());
        assert!(locally_admissible(&e, &x3).unwrap());
        for (o, g) in r2.vertices().iter().enumerate() {
            assert_eq!(e.at(g), q.get(o));
        }
    }
    // a partial input is refused
    let mut partial = Pattern::empty(Arc::clone(&r2), 3);
    partial.set(0, Some(0));
    assert!(matches!(
        extend_rectangle(&partial, &x3, &l),
        Err(Error::Precondition(_))
    ));
}

/// Random separated pair of admissible partial patterns on `w`.
fn separated_pair(w: &Arc<Window>, rng: &mut ChaCha8Rng, l: &Limits) -> (Pattern, Pattern) {
    let x5 = gcs(5).unwrap();
    let params = w.params();
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.shuffle(rng);
    let a_size = rng.gen_range(1..12);
    let a_cells: Vec<usize> = order[..a_size].to_vec();
    let mut blocked: HashSet<Element> = HashSet::new();
    for &o in &a_cells {
        let g = w.vertex(o);
        blocked.insert(g.clone());
        blocked.extend(neighbors(g, &params).unwrap());
    }
    let b_size = rng.gen_range(1..12);
    let b_cells: Vec<usize> = order[a_size..]
        .iter()
        .copied()
        .filter(|&o| !blocked.contains(w.vertex(o)))
        .take(b_size)
        .collect();
    let mut pick = |cells: &[usize]| {
        let full = random_admissible(w, &x5, None, rng, l).unwrap().unwrap();
        let mut q = Pattern::empty(Arc::clone(w), 5);
        for &o in cells {
            q.set(o, full.get(o));
        }
        q
    };
    (pick(&a_cells), pick(&b_cells))
}

#[test]
fn random_gluing() {
    let l = Limits::default();
    let x5 = gcs(5).unwrap();
    let w = Arc::new(Window::ball(p(2), 4, &l).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (a, b) = separated_pair(&w, &mut rng, &l);
        let g = glue(&a, &b, &x5, &w).unwrap();
        assert!(g.is_total());
        assert!(locally_admissible(&g, &x5).unwrap());
        for q in [&a, &b] {
            for o in q.support() {
                assert_eq!(g.get(o), q.get(o));
            }
        }
    }
}

#[test]
fn entropy_rows_respect_the_bounds() {
    let l = Limits::default();
    let rows = entropy_table(p(2), 3, 4, MethodChoice::Auto, &l).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.passes()));
    assert_eq!(rows[3].count.as_ref().unwrap().to_string(), "2282138834088");
    let csv = entropy_csv(&rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "m,cells,count,estimate,method,lower_bound,step_bound,tree_bound,status"
    );
    assert!(lines[1].starts_with("1,2,6,"));
    assert!(lines.iter().skip(1).all(|s| s.ends_with(",ok")));
    // budget exhaustion is a row status, not an error
    let tight = Limits {
        max_states: 10,
        max_nodes: 100,
        ..l
    };
    let rows = entropy_table(p(2), 4, 3, MethodChoice::Auto, &tight).unwrap();
    assert!(rows.last().unwrap().is_resource_failure());
    assert!(entropy_csv(&rows).contains("resource"));
}
