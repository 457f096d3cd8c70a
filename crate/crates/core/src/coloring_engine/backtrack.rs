//! Exhaustive search with forced-value propagation. Independent pieces of
//! the unassigned subgraph are counted separately and multiplied.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use num_bigint::BigUint;

use super::{
    require_fixed_alphabet, with_fallback, Count, CountResult, CountStats, Method, Run,
    MAX_SEARCH_ALPHABET,
};
use crate::cayley::{Limits, Window};
use crate::error::{ResourceError, Result};
use crate::group::Generator;
use crate::subshift::{Nnsft, Pattern, Symbol};

/// Constraint network of a window: per-vertex neighbor lists with the mask
/// table that restricts the neighbor once this vertex is assigned.
pub(crate) struct Network {
    n: u32,
    adj: Vec<Vec<(usize, u8)>>,
    /// Index `2 * gen + dir`; entry `[s]` is the set of legal neighbor
    /// symbols given own symbol `s`.
    tables: [Vec<u64>; 4],
}

impl Network {
    pub(crate) fn new(w: &Window, x: &Nnsft) -> Result<Self> {
        let n = x.alphabet();
        if n > MAX_SEARCH_ALPHABET {
            return Err(ResourceError::Unsupported(format!(
                "search needs alphabet <= {MAX_SEARCH_ALPHABET}, got {n}"
            ))
            .into());
        }
        let mut tables: [Vec<u64>; 4] = Default::default();
        for (gi, gen) in [Generator::A, Generator::B].into_iter().enumerate() {
            let mut fwd = vec![0u64; n as usize];
            let mut bwd = vec![0u64; n as usize];
            for s in 0..n {
                for t in 0..n {
                    if x.allows(gen, s as Symbol, t as Symbol) {
                        fwd[s as usize] |= 1 << t;
                        bwd[t as usize] |= 1 << s;
                    }
                }
            }
            tables[2 * gi] = fwd;
            tables[2 * gi + 1] = bwd;
        }
        let mut adj = vec![Vec::new(); w.len()];
        for &(u, v, gen) in &w.edges()?.edges {
            let gi = match gen {
                Generator::A => 0,
                Generator::B => 2,
            };
            adj[u].push((v, gi));
            adj[v].push((u, gi + 1));
        }
        Ok(Network { n, adj, tables })
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

#[derive(Clone)]
struct State {
    dom: Vec<u64>,
    assigned: Vec<bool>,
    trail: Vec<(usize, u64, bool)>,
    stamp: Vec<u32>,
    generation: u32,
}

impl State {
    fn new(size: usize, full: u64) -> Self {
        State {
            dom: vec![full; size],
            assigned: vec![false; size],
            trail: Vec::new(),
            stamp: vec![0; size],
            generation: 0,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, d, a) = self.trail.pop().expect("non-empty");
            self.dom[v] = d;
            self.assigned[v] = a;
        }
    }

    /// Assigns `u := s` and propagates singletons. False on contradiction;
    /// the caller undoes to its mark either way.
    fn assign(&mut self, net: &Network, u: usize, s: u32) -> bool {
        let mut queue = vec![(u, s)];
        while let Some((u, s)) = queue.pop() {
            if self.assigned[u] {
                if self.dom[u] != 1 << s {
                    return false;
                }
                continue;
            }
            if self.dom[u] & (1 << s) == 0 {
                return false;
            }
            self.trail.push((u, self.dom[u], false));
            self.dom[u] = 1 << s;
            self.assigned[u] = true;
            for &(v, t) in &net.adj[u] {
                let mask = net.tables[t as usize][s as usize];
                let d = self.dom[v];
                if self.assigned[v] {
                    if d & mask == 0 {
                        return false;
                    }
                    continue;
                }
                let nd = d & mask;
                if nd == d {
                    continue;
                }
                if nd == 0 {
                    return false;
                }
                self.trail.push((v, d, false));
                self.dom[v] = nd;
                if nd.count_ones() == 1 {
                    queue.push((v, nd.trailing_zeros()));
                }
            }
        }
        true
    }

    /// Connected pieces of the unassigned vertices among `cells`, each in
    /// ascending window order.
    fn components(&mut self, net: &Network, cells: &[usize]) -> Vec<Vec<usize>> {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let g = self.generation;
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for &c in cells {
            if self.assigned[c] || self.stamp[c] == g {
                continue;
            }
            let mut comp = vec![c];
            self.stamp[c] = g;
            stack.push(c);
            while let Some(u) = stack.pop() {
                for &(v, _) in &net.adj[u] {
                    if !self.assigned[v] && self.stamp[v] != g {
                        self.stamp[v] = g;
                        comp.push(v);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

struct Search<'a> {
    net: &'a Network,
    nodes: &'a AtomicU64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&self) -> Run<()> {
        let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.budget {
            return Err(ResourceError::Nodes {
                budget: self.budget,
            }
            .into());
        }
        Ok(())
    }

    /// Count of completions of the unassigned cells in `cells`, which must
    /// form one connected piece (or be fully assigned).
    fn count<C: Count>(&self, st: &mut State, cells: &[usize]) -> Run<C> {
        self.tick()?;
        let comps = st.components(self.net, cells);
        self.count_pieces(st, comps)
    }

    fn count_pieces<C: Count>(&self, st: &mut State, comps: Vec<Vec<usize>>) -> Run<C> {
        let mut total = C::one();
        for comp in comps {
            let c = self.count_connected::<C>(st, &comp)?;
            if c.is_zero() {
                return Ok(C::zero());
            }
            total = total.mul(&c)?;
        }
        Ok(total)
    }

    fn count_connected<C: Count>(&self, st: &mut State, comp: &[usize]) -> Run<C> {
        if comp.len() == 1 {
            return Ok(C::from_u64(st.dom[comp[0]].count_ones() as u64));
        }
        let u = comp[0];
        let mut total = C::zero();
        let mut d = st.dom[u];
        while d != 0 {
            let s = d.trailing_zeros();
            d &= d - 1;
            let mark = st.trail.len();
            if st.assign(self.net, u, s) {
                let c = self.count::<C>(st, comp)?;
                total = total.add(&c)?;
            }
            st.undo(mark);
        }
        Ok(total)
    }

    /// Top level: the first branching vertex is split across threads.
    fn count_parallel<C: Count>(&self, st: &mut State, cells: &[usize]) -> Run<C> {
        self.tick()?;
        let mut comps = st.components(self.net, cells);
        if comps.is_empty() {
            return Ok(C::one());
        }
        // split the largest piece; the rest are counted sequentially
        let big = (0..comps.len())
            .max_by_key(|&i| (comps[i].len(), std::cmp::Reverse(i)))
            .expect("non-empty");
        let main = comps.remove(big);
        if main.len() == 1 {
            comps.push(main);
            return self.count_pieces(st, comps);
        }
        let rest = self.count_pieces::<C>(st, comps)?;
        if rest.is_zero() {
            return Ok(C::zero());
        }
        let u = main[0];
        let symbols: Vec<u32> = (0..64).filter(|&s| st.dom[u] & (1 << s) != 0).collect();
        let parts: Vec<Run<C>> = symbols
            .par_iter()
            .map(|&s| {
                let mut local = st.clone();
                if local.assign(self.net, u, s) {
                    self.count::<C>(&mut local, &main)
                } else {
                    Ok(C::zero())
                }
            })
            .collect();
        let mut total = C::zero();
        for p in parts {
            total = total.add(&p?)?;
        }
        total.mul(&rest)
    }
}

fn seed_state(net: &Network, size: usize, fixed: Option<&Pattern>) -> Option<State> {
    let mut st = State::new(size, net.full());
    if let Some(p) = fixed {
        for (u, s) in p.cells().iter().enumerate() {
            if let Some(s) = s {
                if !st.assign(net, u, *s as u32) {
                    return None;
                }
            }
        }
    }
    Some(st)
}

/// Exact number of total patterns on `w` admissible for `x` that agree with
/// `fixed` on its support.
pub fn count_colorings_backtracking(
    w: &Window,
    x: &Nnsft,
    fixed: Option<&Pattern>,
    limits: &Limits,
) -> Result<CountResult> {
    require_fixed_alphabet(fixed, w, x)?;
    let net = Network::new(w, x)?;
    let (count, stats) = with_fallback(
        || run_count::<u128>(&net, w.len(), fixed, limits),
        || run_count::<BigUint>(&net, w.len(), fixed, limits),
    )?;
    Ok(CountResult {
        count,
        method: Method::Backtracking,
        stats,
    })
}

fn run_count<C: Count>(
    net: &Network,
    size: usize,
    fixed: Option<&Pattern>,
    limits: &Limits,
) -> Run<(C, CountStats)> {
    let Some(mut st) = seed_state(net, size, fixed) else {
        return Ok((C::zero(), CountStats::default()));
    };
    let nodes = AtomicU64::new(0);
    let search = Search {
        net,
        nodes: &nodes,
        budget: limits.max_nodes,
    };
    let cells: Vec<usize> = (0..size).collect();
    let value = search.count_parallel::<C>(&mut st, &cells)?;
    Ok((
        value,
        CountStats {
            nodes: nodes.load(Ordering::Relaxed),
            peak_states: 0,
        },
    ))
}

/// Some admissible total pattern extending `fixed`, found by search with a
/// randomized symbol order; `None` if none exists.
pub fn random_admissible<R: Rng + ?Sized>(
    w: &Arc<Window>,
    x: &Nnsft,
    fixed: Option<&Pattern>,
    rng: &mut R,
    limits: &Limits,
) -> Result<Option<Pattern>> {
    require_fixed_alphabet(fixed, w, x)?;
    let net = Network::new(w, x)?;
    let Some(mut st) = seed_state(&net, w.len(), fixed) else {
        return Ok(None);
    };
    let mut nodes = 0u64;
    if !find(&net, &mut st, 0, rng, &mut nodes, limits.max_nodes)? {
        return Ok(None);
    }
    let symbols = st
        .dom
        .iter()
        .map(|d| d.trailing_zeros() as Symbol)
        .collect();
    Pattern::total(Arc::clone(w), x.alphabet(), symbols).map(Some)
}

fn find<R: Rng + ?Sized>(
    net: &Network,
    st: &mut State,
    from: usize,
    rng: &mut R,
    nodes: &mut u64,
    budget: u64,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(ResourceError::Nodes { budget }.into());
    }
    let Some(u) = (from..st.dom.len()).find(|&u| !st.assigned[u]) else {
        return Ok(true);
    };
    let mut symbols: Vec<u32> = (0..net.n).filter(|&s| st.dom[u] & (1 << s) != 0).collect();
    symbols.shuffle(rng);
    for s in symbols {
        let mark = st.trail.len();
        if st.assign(net, u, s) && find(net, st, u + 1, rng, nodes, budget)? {
            return Ok(true);
        }
        st.undo(mark);
    }
    Ok(false)
}
