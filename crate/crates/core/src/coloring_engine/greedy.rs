//! Smallest-symbol greedy constructions.

use std::collections::HashSet;
use std::sync::Arc;

use crate::cayley::{Limits, Window};
use crate::error::{Error, Result};
use crate::group::{self, Element, Generator};
use crate::subshift::{first_violation, Nnsft, Pattern, Symbol};

type Adjacency = Vec<Vec<(usize, Generator, bool)>>;

fn legal_from(adj: &Adjacency, cells: &[Option<Symbol>], x: &Nnsft, u: usize) -> Vec<Symbol> {
    (0..x.alphabet() as Symbol)
        .filter(|&s| {
            adj[u].iter().all(|&(v, gen, outgoing)| match cells[v] {
                None => true,
                Some(t) if outgoing => x.allows(gen, s, t),
                Some(t) => x.allows(gen, t, s),
            })
        })
        .collect()
}

/// Symbols that cell `ord` may take given the assigned cells of `p`.
pub fn legal_symbols(p: &Pattern, x: &Nnsft, ord: usize) -> Result<Vec<Symbol>> {
    let adj = p.window().adjacency()?;
    Ok(legal_from(&adj, p.cells(), x, ord))
}

fn require_admissible(p: &Pattern, x: &Nnsft, what: &str) -> Result<()> {
    if let Some(v) = first_violation(p, x)? {
        return Err(Error::Precondition(format!(
            "{what} is not locally admissible: {v}"
        )));
    }
    Ok(())
}

fn stuck(w: &Window, adj: &Adjacency, cells: &[Option<Symbol>], u: usize) -> Error {
    let mut seen: Vec<Symbol> = adj[u].iter().filter_map(|&(v, _, _)| cells[v]).collect();
    seen.sort_unstable();
    seen.dedup();
    Error::Construction(format!(
        "no legal symbol at {} (neighbors carry {:?})",
        w.vertex(u),
        seen
    ))
}

/// Completes `p` to a total pattern on its window, layer by layer outward
/// from the support, giving each cell its smallest legal symbol. Success is
/// guaranteed for proper colorings with at least five colors, since every
/// vertex has four neighbors; otherwise the first stuck cell is reported.
pub fn greedy_complete(p: &Pattern, x: &Nnsft) -> Result<Pattern> {
    require_admissible(p, x, "input pattern")?;
    let w = p.window();
    let adj = w.adjacency()?;
    let mut cells = p.cells().to_vec();
    let mut layer: Vec<usize> = p.support();
    let mut in_done: Vec<bool> = cells.iter().map(Option::is_some).collect();
    loop {
        let mut next: Vec<usize> = Vec::new();
        for &u in &layer {
            for &(v, _, _) in &adj[u] {
                if !in_done[v] {
                    in_done[v] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            // a piece of the window the support does not reach
            match (0..cells.len()).find(|&u| !in_done[u]) {
                Some(u) => {
                    in_done[u] = true;
                    next.push(u);
                }
                None => break,
            }
        }
        next.sort_unstable();
        for &u in &next {
            let legal = legal_from(&adj, &cells, x, u);
            let Some(&s) = legal.first() else {
                return Err(stuck(w, &adj, &cells, u));
            };
            cells[u] = Some(s);
        }
        layer = next;
    }
    Pattern::from_cells(Arc::clone(w), p.alphabet().max(x.alphabet()), cells)
}

/// Extends a proper coloring of `R_m` to `R_{m+1}`: the new cells of level
/// 0 first, then level 1, and so on, `k` ascending inside a level. Each new
/// cell sees at most two colored neighbors, so three colors suffice.
pub fn extend_rectangle(p: &Pattern, x: &Nnsft, limits: &Limits) -> Result<Pattern> {
    let m = p
        .window()
        .rectangle_height()
        .ok_or_else(|| Error::Precondition("input must live on a rectangle".into()))?;
    if !p.is_total() {
        return Err(Error::Precondition("input pattern must be total".into()));
    }
    if !x.is_proper_coloring() || x.alphabet() < 3 {
        return Err(Error::Precondition(
            "rectangle extension needs a coloring shift with n >= 3".into(),
        ));
    }
    require_admissible(p, x, "input pattern")?;
    let params = p.window().params();
    let big = Arc::new(Window::rectangle(params, m + 1, limits)?);
    let adj = big.adjacency()?;
    let mut cells = vec![None; big.len()];
    for (o, g) in p.window().vertices().iter().enumerate() {
        let at = big.ordinal(g).expect("R_m inside R_{m+1}");
        cells[at] = p.get(o);
    }
    // level-major order already visits H_0, H_1, ... with k ascending
    for u in 0..big.len() {
        if cells[u].is_some() {
            continue;
        }
        let legal = legal_from(&adj, &cells, x, u);
        let Some(&s) = legal.first() else {
            return Err(stuck(&big, &adj, &cells, u));
        };
        cells[u] = Some(s);
    }
    Pattern::from_cells(big, x.alphabet(), cells)
}

/// Joins two separated admissible patterns and completes the union on `w`.
/// The supports must be disjoint with no Cayley edge between them.
pub fn glue(p: &Pattern, q: &Pattern, x: &Nnsft, w: &Arc<Window>) -> Result<Pattern> {
    if !x.is_proper_coloring() || x.alphabet() < 5 {
        return Err(Error::Precondition(
            "gluing needs a coloring shift with n >= 5".into(),
        ));
    }
    require_admissible(p, x, "first pattern")?;
    require_admissible(q, x, "second pattern")?;
    let params = w.params();
    let support = |pat: &Pattern| -> Vec<(Element, Symbol)> {
        pat.support()
            .into_iter()
            .map(|o| (pat.window().vertex(o).clone(), pat.get(o).expect("support")))
            .collect()
    };
    let sp = support(p);
    let sq = support(q);
    let q_set: HashSet<&Element> = sq.iter().map(|(g, _)| g).collect();
    for (g, _) in &sp {
        if q_set.contains(g) {
            return Err(Error::Precondition(format!("supports overlap at {g}")));
        }
        let [ga, ga_inv, gb, gb_inv] = group::neighbors(g, &params)?;
        for (h, label) in [(ga, "a"), (ga_inv, "a^-1"), (gb, "b"), (gb_inv, "b^-1")] {
            if q_set.contains(&h) {
                return Err(Error::Precondition(format!(
                    "supports are adjacent along edge {g} -{label}-> {h}"
                )));
            }
        }
    }
    let mut cells = vec![None; w.len()];
    for (g, s) in sp.iter().chain(sq.iter()) {
        let o = w.ordinal(g).ok_or_else(|| {
            Error::Precondition(format!("support vertex {g} lies outside the target window"))
        })?;
        cells[o] = Some(*s);
    }
    let union = Pattern::from_cells(Arc::clone(w), x.alphabet(), cells)?;
    greedy_complete(&union, x)
}
