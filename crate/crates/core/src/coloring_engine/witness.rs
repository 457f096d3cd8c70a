//! Families of proper 3-colorings of rectangles with many free binary
//! choices, giving lower bounds on pattern counts.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random_admissible;
use crate::cayley::{Limits, Window};
use crate::error::{Error, ResourceError, Result};
use crate::group::GroupParams;
use crate::subshift::{first_violation, gcs, Nnsft, Pattern, Symbol};

/// Largest family that [`WitnessFamily::members`] will enumerate.
pub const MAX_ENUMERATED_FREE: usize = 30;

/// A template pattern on a rectangle plus cells that may each take either
/// of two symbols independently.
#[derive(Debug, Clone)]
pub struct WitnessFamily {
    window: Arc<Window>,
    template: Vec<Option<Symbol>>,
    free: Vec<usize>,
    choices: [Symbol; 2],
}

impl WitnessFamily {
    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    /// Ordinals of the free cells, ascending.
    pub fn free_cells(&self) -> &[usize] {
        &self.free
    }

    pub fn choices(&self) -> [Symbol; 2] {
        self.choices
    }

    /// Fixed part; free cells are unassigned.
    pub fn template(&self) -> Pattern {
        Pattern::from_cells(Arc::clone(&self.window), 3, self.template.clone())
            .expect("valid template")
    }

    /// `2^(free cells)`.
    pub fn size(&self) -> BigUint {
        BigUint::one() << self.free.len()
    }

    /// Member number `index`: bit `b` of `index` picks the second choice for
    /// free cell `b`.
    pub fn member(&self, index: &BigUint) -> Result<Pattern> {
        if *index >= self.size() {
            return Err(Error::Parameter(format!(
                "member {index} outside family of size {}",
                self.size()
            )));
        }
        let mut cells = self.template.clone();
        for (b, &o) in self.free.iter().enumerate() {
            cells[o] = Some(self.choices[index.bit(b as u64) as usize]);
        }
        Pattern::from_cells(Arc::clone(&self.window), 3, cells)
    }

    /// All members in index order.
    pub fn members(&self) -> Result<impl Iterator<Item = Pattern> + '_> {
        if self.free.len() > MAX_ENUMERATED_FREE {
            return Err(ResourceError::Unsupported(format!(
                "enumerating 2^{} patterns",
                self.free.len()
            ))
            .into());
        }
        Ok((0u64..1 << self.free.len())
            .map(move |i| self.member(&BigUint::from(i)).expect("in range")))
    }

    /// Checks every edge for every choice at once: fixed-fixed pairs must be
    /// allowed, a free cell must be compatible with both choices against
    /// its fixed neighbors, and free cells may not be adjacent.
    fn validate(&self, x: &Nnsft) -> Result<()> {
        let is_free = {
            let mut v = vec![false; self.template.len()];
            for &o in &self.free {
                v[o] = true;
            }
            v
        };
        let options = |o: usize| -> Vec<Symbol> {
            if is_free[o] {
                self.choices.to_vec()
            } else {
                self.template[o].into_iter().collect()
            }
        };
        for &(u, v, gen) in &self.window.edges()?.edges {
            let (su, sv) = (options(u), options(v));
            if su.is_empty() || sv.is_empty() {
                return Err(Error::Construction(format!(
                    "cell {} left unassigned",
                    self.window.vertex(if su.is_empty() { u } else { v })
                )));
            }
            for &s in &su {
                for &t in &sv {
                    if !x.allows(gen, s, t) {
                        return Err(Error::Construction(format!(
                            "edge {} -{}-> {} carries ({s}, {t})",
                            self.window.vertex(u),
                            gen.as_char(),
                            self.window.vertex(v)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Odd `N`: the rectangle is bipartite under the parity of `i + k`. The
/// smaller class gets 0, every cell of the larger class (class 0 on a tie)
/// chooses 1 or 2.
pub fn witness_family_odd(params: GroupParams, m: u32, limits: &Limits) -> Result<WitnessFamily> {
    if params.n().is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "odd witness family needs odd N, got {}",
            params.n()
        )));
    }
    let w = Arc::new(Window::rectangle(params, m, limits)?);
    let parity: Vec<u8> = w
        .vertices()
        .iter()
        .map(|g| ((g.i() as u8) ^ (g.k().bit(0) as u8)) & 1)
        .collect();
    let ones = parity.iter().filter(|&&p| p == 1).count();
    let free_class = if ones > parity.len() - ones { 1 } else { 0 };
    let mut template = vec![None; w.len()];
    let mut free = Vec::new();
    for (o, &p) in parity.iter().enumerate() {
        if p == free_class {
            free.push(o);
        } else {
            template[o] = Some(0);
        }
    }
    let fam = WitnessFamily {
        window: w,
        template,
        free,
        choices: [1, 2],
    };
    fam.validate(&gcs(3)?)?;
    Ok(fam)
}

/// Layout of the even-`N` construction on `R_{2m}`.
///
/// Even levels repeat a base word. On odd levels every cell above a 0 of
/// the base at a position `(2N + 1) t` inside a full block is free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EvenConvention {
    /// Base `0 (1 2)^N`. The a-neighbors of free cells get 0 and the other
    /// odd-level cells are found by search, so the layout works for every
    /// level step `N^i`.
    #[default]
    Consistent,
    /// Base `0 (1 2)^(2N)`; odd blocks: free, 0 at offsets `N` and `N + 1`,
    /// 2 at other even and 1 at other odd offsets.
    PrintedLongBase,
    /// As `PrintedLongBase` with base `0 (1 2)^N`.
    PrintedShortBase,
}

impl EvenConvention {
    fn base(self, n: u64, pos: u64) -> Symbol {
        let period = match self {
            EvenConvention::PrintedLongBase => 4 * n + 1,
            _ => 2 * n + 1,
        };
        match pos % period {
            0 => 0,
            r if r % 2 == 1 => 1,
            _ => 2,
        }
    }

    /// Symbol at offset `k` of a printed odd-level block; `None` for the
    /// free cell.
    fn odd(n: u64, k: u64) -> Option<Symbol> {
        Some(match k {
            0 => return None,
            k if k == n || k == n + 1 => 0,
            k if k % 2 == 0 => 2,
            _ => 1,
        })
    }
}

/// Even `N`: the family on `R_{2m}` with `m * floor(N^(2m) / (2N + 1))` free
/// cells. Cells that the layout does not pin down are filled once, treating
/// free cells as if they carried both choices, so every member shares the
/// same fill. The template is validated for all choices at once and a clash
/// is reported with its edge.
pub fn witness_family_even(
    params: GroupParams,
    m: u32,
    convention: EvenConvention,
    limits: &Limits,
) -> Result<WitnessFamily> {
    let big_n = params.n() as u64;
    if big_n % 2 == 1 {
        return Err(Error::Parameter(format!(
            "even witness family needs even N, got {big_n}"
        )));
    }
    if m == 0 {
        return Err(Error::Parameter("even witness family needs m >= 1".into()));
    }
    let height = 2 * m;
    let w = Arc::new(Window::rectangle(params, height, limits)?);
    let width = (w.len() / height as usize) as u64;
    let block = 2 * big_n + 1;
    let covered = block * (width / block);
    let x = gcs(3)?;
    let choices: [Symbol; 2] = [1, 2];
    let mut template: Vec<Option<Symbol>> = vec![None; w.len()];
    let mut free = Vec::new();
    for (o, g) in w.vertices().iter().enumerate() {
        let pos: u64 = g.k().try_into().expect("rectangle column");
        if g.i() % 2 == 0 {
            template[o] = Some(convention.base(big_n, pos));
        } else if pos < covered {
            match convention {
                EvenConvention::Consistent => {
                    if pos.is_multiple_of(block) {
                        free.push(o);
                    }
                }
                _ => match EvenConvention::odd(big_n, pos % block) {
                    Some(s) => template[o] = Some(s),
                    None => free.push(o),
                },
            }
        }
    }
    let mut is_free = vec![false; w.len()];
    free.iter().for_each(|&o| is_free[o] = true);
    let adj = w.adjacency()?;
    match convention {
        EvenConvention::Consistent => {
            fill_by_search(&w, &x, &mut template, &free, &is_free, &adj, limits)?
        }
        _ => fill_greedy(&w, &x, &mut template, &is_free, &adj, choices)?,
    }
    let fam = WitnessFamily {
        window: w,
        template,
        free,
        choices,
    };
    fam.validate(&x)?;
    Ok(fam)
}

type Adjacency = Vec<Vec<(usize, crate::group::Generator, bool)>>;

/// Smallest symbol per open cell that fits every possible neighbor value.
fn fill_greedy(
    w: &Window,
    x: &Nnsft,
    template: &mut [Option<Symbol>],
    is_free: &[bool],
    adj: &Adjacency,
    choices: [Symbol; 2],
) -> Result<()> {
    for u in 0..w.len() {
        if template[u].is_some() || is_free[u] {
            continue;
        }
        let legal = (0..3).find(|&s: &Symbol| {
            adj[u].iter().all(|&(v, gen, outgoing)| {
                let opts: Vec<Symbol> = if is_free[v] {
                    choices.to_vec()
                } else {
                    template[v].into_iter().collect()
                };
                opts.iter().all(|&t| {
                    if outgoing {
                        x.allows(gen, s, t)
                    } else {
                        x.allows(gen, t, s)
                    }
                })
            })
        });
        match legal {
            Some(s) => template[u] = Some(s),
            None => {
                return Err(Error::Construction(format!(
                    "no legal fill symbol at {}",
                    w.vertex(u)
                )))
            }
        }
    }
    Ok(())
}

/// Pins the neighbors of free cells to 0 (the only symbol compatible with
/// both choices) and completes the rest by a seeded search.
fn fill_by_search(
    w: &Arc<Window>,
    x: &Nnsft,
    template: &mut [Option<Symbol>],
    free: &[usize],
    is_free: &[bool],
    adj: &Adjacency,
    limits: &Limits,
) -> Result<()> {
    for &f in free {
        for &(v, _, _) in &adj[f] {
            match template[v] {
                _ if is_free[v] => {
                    return Err(Error::Construction(format!(
                        "free cells {} and {} are adjacent",
                        w.vertex(f),
                        w.vertex(v)
                    )))
                }
                Some(0) | None => template[v] = Some(0),
                Some(s) => {
                    return Err(Error::Construction(format!(
                        "free cell {} touches {} carrying {s}",
                        w.vertex(f),
                        w.vertex(v)
                    )))
                }
            }
        }
    }
    // free cells are stood in for by 1; all their neighbors are 0, so the
    // stand-in adds no constraint beyond the wildcard one
    let mut fixed = Pattern::empty(Arc::clone(w), 3);
    for (o, s) in template.iter().enumerate() {
        fixed.set(o, if is_free[o] { Some(1) } else { *s });
    }
    // the copied base rows can already clash once the level step N^2 is
    // not +-1 modulo the block length
    if let Some(v) = first_violation(&fixed, x)? {
        return Err(Error::Construction(v.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let done = random_admissible(w, x, Some(&fixed), &mut rng, limits)?.ok_or_else(|| {
        Error::Construction("odd levels admit no proper fill around the free cells".into())
    })?;
    for (o, slot) in template.iter_mut().enumerate() {
        if slot.is_none() && !is_free[o] {
            *slot = done.get(o);
        }
    }
    Ok(())
}
