//! Column-scan transfer counting on rectangles.
//!
//! Cells are visited column by column (`k` ascending) and bottom to top
//! inside a column. The state keeps, for every level `i`, the symbols of the
//! last `N^i` cells of that level; an entry whose `a`-partner lies outside the
//! rectangle is replaced by a blank so equivalent states merge.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::{with_fallback, Count, CountResult, CountStats, Method, Run};
use crate::cayley::{Limits, Window};
use crate::error::{Error, ResourceError, Result};
use crate::group::Generator;
use crate::subshift::{Nnsft, Symbol};

struct Layout {
    n: u32,
    m: u32,
    width: u64,
    bits: u32,
    /// Buffer length `N^i` and bit offset of each level.
    len: Vec<u64>,
    offset: Vec<u32>,
    allow_a: Vec<bool>,
    allow_b: Vec<bool>,
}

impl Layout {
    fn new(w: &Window, x: &Nnsft) -> Result<Self> {
        let m = w
            .rectangle_height()
            .ok_or_else(|| Error::Parameter("frontier counting needs a rectangle window".into()))?;
        let big_n = w.params().n() as u64;
        let n = x.alphabet();
        let bits = 32 - n.leading_zeros();
        let mut len = Vec::new();
        let mut offset = Vec::new();
        let mut total: u64 = 0;
        let mut l = 1u64;
        for _ in 0..m {
            len.push(l);
            offset.push((total * bits as u64).min(u32::MAX as u64) as u32);
            total += l;
            l = l.saturating_mul(big_n);
        }
        if total.saturating_mul(bits as u64) > 128 {
            return Err(ResourceError::Unsupported(format!(
                "frontier of {total} cells at {bits} bits each does not fit a 128-bit key"
            ))
            .into());
        }
        let width = len[m as usize - 1] * big_n;
        let dense = |g| -> Vec<bool> {
            let mut v = vec![false; (n * n) as usize];
            for s in 0..n {
                for t in 0..n {
                    v[(s * n + t) as usize] = x.allows(g, s as Symbol, t as Symbol);
                }
            }
            v
        };
        Ok(Layout {
            n,
            m,
            width,
            bits,
            len,
            offset,
            allow_a: dense(Generator::A),
            allow_b: dense(Generator::B),
        })
    }

    #[inline]
    fn get(&self, key: u128, level: usize, idx: u64) -> u32 {
        let shift = self.offset[level] + idx as u32 * self.bits;
        ((key >> shift) & ((1u128 << self.bits) - 1)) as u32
    }

    #[inline]
    fn seg_mask(&self, level: usize) -> u128 {
        let width = self.len[level] as u32 * self.bits;
        if width >= 128 {
            u128::MAX
        } else {
            (1u128 << width) - 1
        }
    }

    /// Drops the oldest entry of `level` and appends `code`.
    #[inline]
    fn push(&self, key: u128, level: usize, code: u32) -> u128 {
        let lo = self.offset[level];
        let mask = self.seg_mask(level);
        let seg = (key >> lo) & mask;
        let top = (self.len[level] as u32 - 1) * self.bits;
        let seg = (seg >> self.bits) | ((code as u128) << top);
        (key & !(mask << lo)) | (seg << lo)
    }

    /// Mask that blanks, after column `k`, every entry whose partner
    /// `position + N^i` falls outside the rectangle.
    fn dead_mask(&self, k: u64) -> u128 {
        let mut keep = u128::MAX;
        for level in 0..self.m as usize {
            let l = self.len[level];
            for idx in 0..l {
                // entry idx holds position k - l + 1 + idx, partner at k + 1 + idx
                if k + 1 + idx >= self.width {
                    let shift = self.offset[level] + idx as u32 * self.bits;
                    keep &= !(((1u128 << self.bits) - 1) << shift);
                }
            }
        }
        keep
    }
}

fn run<C: Count>(lay: &Layout, limits: &Limits) -> Run<(C, CountStats)> {
    let n = lay.n;
    let mut states: HashMap<u128, C> = HashMap::from([(0u128, C::one())]);
    let mut stats = CountStats {
        nodes: 0,
        peak_states: 1,
    };
    for k in 0..lay.width {
        for level in 0..lay.m as usize {
            let mut next: HashMap<u128, C> = HashMap::with_capacity(states.len() * 2);
            for (key, cnt) in &states {
                // entry 0 is position k - N^i, the a-predecessor
                let left = lay.get(*key, level, 0);
                let below = if level > 0 {
                    lay.get(*key, level - 1, lay.len[level - 1] - 1)
                } else {
                    0
                };
                for c in 0..n {
                    if left != 0 && !lay.allow_a[((left - 1) * n + c) as usize] {
                        continue;
                    }
                    if below != 0 && !lay.allow_b[((below - 1) * n + c) as usize] {
                        continue;
                    }
                    let nk = lay.push(*key, level, c + 1);
                    match next.get_mut(&nk) {
                        Some(v) => *v = v.add(cnt)?,
                        None => {
                            next.insert(nk, cnt.clone());
                        }
                    }
                }
            }
            stats.nodes += states.len() as u64;
            if next.len() > limits.max_states {
                return Err(ResourceError::States {
                    requested: next.len() as u128,
                    budget: limits.max_states,
                }
                .into());
            }
            stats.peak_states = stats.peak_states.max(next.len() as u64);
            states = next;
        }
        let keep = lay.dead_mask(k);
        if keep != u128::MAX {
            let mut merged: HashMap<u128, C> = HashMap::with_capacity(states.len());
            for (key, cnt) in states {
                let nk = key & keep;
                match merged.get_mut(&nk) {
                    Some(v) => *v = v.add(&cnt)?,
                    None => {
                        merged.insert(nk, cnt);
                    }
                }
            }
            states = merged;
        }
    }
    let mut total = C::zero();
    for v in states.values() {
        total = total.add(v)?;
    }
    Ok((total, stats))
}

/// Exact count of admissible total patterns on a rectangle window.
pub fn count_colorings_frontier(w: &Window, x: &Nnsft, limits: &Limits) -> Result<CountResult> {
    let lay = Layout::new(w, x)?;
    let (count, stats) = with_fallback(
        || run::<u128>(&lay, limits),
        || run::<BigUint>(&lay, limits),
    )?;
    Ok(CountResult {
        count,
        method: Method::FrontierDp,
        stats,
    })
}
