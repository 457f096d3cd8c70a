//! Sheet-tree transfer counting on rectangles.
//!
//! Deleting the base row of `R_h` leaves `N` disjoint copies of `R_{h-1}`:
//! copy `c` consists of the cells `(c + N t, i)` with `i >= 1`, relabelled
//! `(t, i - 1)`, and its base row sits on the base cells `c, c + N, ...`.
//! So with
//!
//! * `W_h(P)` = number of admissible patterns on `R_h` with base row `P`,
//! * `Z_h(u)` = sum over `Q` of `W_h(Q)` times the product of `B[u_t][Q_t]`,
//!
//! we get `W_h(P) = path_ok(P) * prod_c Z_{h-1}(P_c, P_{c+N}, ...)` and
//! `Z_0 = 1`. Tables are indexed by rows written little-endian in base `n`.
//! The last level is summed without materializing `W_m`: for `N = 2` the
//! odd positions are eliminated one at a time, otherwise the base row is
//! enumerated.

use num_bigint::BigUint;

use super::{with_fallback, Count, CountResult, CountStats, Method, Run};
use crate::cayley::{Limits, Window};
use crate::error::{Error, ResourceError, Result};
use crate::group::Generator;
use crate::subshift::{Nnsft, Symbol};

struct Ctx<'a> {
    n: usize,
    big_n: usize,
    allow_a: Vec<bool>,
    allow_b: Vec<bool>,
    limits: &'a Limits,
}

impl Ctx<'_> {
    #[inline]
    fn a(&self, s: usize, t: usize) -> bool {
        self.allow_a[s * self.n + t]
    }

    #[inline]
    fn b(&self, s: usize, t: usize) -> bool {
        self.allow_b[s * self.n + t]
    }

    fn table_size(&self, len: u64) -> Run<usize> {
        let size = (self.n as u128)
            .checked_pow(len.min(200) as u32)
            .filter(|_| len <= 200);
        match size {
            Some(s) if s <= self.limits.max_states as u128 => Ok(s as usize),
            _ => Err(ResourceError::States {
                requested: size.unwrap_or(u128::MAX),
                budget: self.limits.max_states,
            }
            .into()),
        }
    }

    /// `Z_h` for `h = 0 .. top`, returned for `h = top` only.
    fn z_table<C: Count>(&self, top: u32, stats: &mut CountStats) -> Run<Vec<C>> {
        let mut z: Vec<C> = vec![C::one(); self.n];
        let mut row_len = 1usize;
        for _h in 1..=top {
            let child_len = row_len;
            row_len *= self.big_n;
            let size = self.table_size(row_len as u64)?;
            stats.peak_states = stats.peak_states.max(size as u64);
            // W_h
            let mut w: Vec<C> = Vec::with_capacity(size);
            let mut digits = vec![0usize; row_len];
            for idx in 0..size {
                if idx > 0 {
                    increment(&mut digits, self.n);
                }
                if !(0..row_len - 1).all(|t| self.a(digits[t], digits[t + 1])) {
                    w.push(C::zero());
                    continue;
                }
                let mut v = C::one();
                for c in 0..self.big_n {
                    let mut child = 0usize;
                    for t in (0..child_len).rev() {
                        child = child * self.n + digits[c + self.big_n * t];
                    }
                    let f = &z[child];
                    if f.is_zero() {
                        v = C::zero();
                        break;
                    }
                    v = v.mul(f)?;
                }
                w.push(v);
            }
            stats.nodes += size as u64;
            z = self.b_transform(w, row_len)?;
        }
        Ok(z)
    }

    /// `Z(u) = sum_Q T(Q) prod_t B[u_t][Q_t]`, one coordinate at a time.
    fn b_transform<C: Count>(&self, mut t: Vec<C>, row_len: usize) -> Run<Vec<C>> {
        let n = self.n;
        let mut stride = 1usize;
        let mut buf = vec![C::zero(); n];
        for _ in 0..row_len {
            let block = stride * n;
            for base in (0..t.len()).step_by(block) {
                for off in 0..stride {
                    let at = |d: usize| base + off + d * stride;
                    for (u, slot) in buf.iter_mut().enumerate() {
                        let mut acc = C::zero();
                        for q in 0..n {
                            if self.b(u, q) {
                                acc = acc.add(&t[at(q)])?;
                            }
                        }
                        *slot = acc;
                    }
                    for u in 0..n {
                        t[at(u)] = buf[u].clone();
                    }
                }
            }
            stride = block;
        }
        Ok(t)
    }

    /// `sum_P path_ok(P) Z(P_even) Z(P_odd)` for `N = 2`, where `z` is
    /// indexed by rows of length `half`.
    fn top_two<C: Count>(&self, z: &[C], half: usize, stats: &mut CountStats) -> Run<C> {
        let n = self.n;
        // digits: E_0 .. E_s, O_s .. O_{half-1}; position d has weight n^d
        let size = self.table_size(half as u64 + 1)?;
        stats.peak_states = stats.peak_states.max(size as u64);
        let mut t: Vec<C> = (0..size).map(|idx| z[idx / n].clone()).collect();
        let pow: Vec<usize> = (0..=half).map(|d| n.pow(d as u32)).collect();
        let mut tmp = vec![C::zero(); n];
        for s in 0..half - 1 {
            // replace digit s+1 (O_s) by E_{s+1}
            let stride = pow[s + 1];
            for base in 0..size {
                if !(base / stride).is_multiple_of(n) {
                    continue;
                }
                let e_s = (base / pow[s]) % n;
                for (o, slot) in tmp.iter_mut().enumerate() {
                    *slot = if self.a(e_s, o) {
                        t[base + o * stride].clone()
                    } else {
                        C::zero()
                    };
                }
                for e_next in 0..n {
                    let mut acc = C::zero();
                    for (o, v) in tmp.iter().enumerate() {
                        if self.a(o, e_next) && !v.is_zero() {
                            acc = acc.add(v)?;
                        }
                    }
                    t[base + e_next * stride] = acc;
                }
            }
            stats.nodes += size as u64;
        }
        // eliminate O_{half-1} and pair with Z(E)
        let stride = pow[half];
        let mut total = C::zero();
        for e in 0..stride {
            let ze = &z[e];
            if ze.is_zero() {
                continue;
            }
            let last = (e / pow[half - 1]) % n;
            let mut f = C::zero();
            for o in 0..n {
                if self.a(last, o) {
                    f = f.add(&t[e + o * stride])?;
                }
            }
            if !f.is_zero() {
                total = total.add(&f.mul(ze)?)?;
            }
        }
        Ok(total)
    }

    /// Base-row enumeration for general `N`, pruned along the row path.
    fn top_enumerate<C: Count>(&self, z: &[C], child_len: usize, stats: &mut CountStats) -> Run<C> {
        let row_len = child_len * self.big_n;
        let mut row = vec![0usize; row_len];
        let mut total = C::zero();
        self.walk(z, child_len, &mut row, 0, &mut total, stats)?;
        Ok(total)
    }

    fn walk<C: Count>(
        &self,
        z: &[C],
        child_len: usize,
        row: &mut [usize],
        pos: usize,
        total: &mut C,
        stats: &mut CountStats,
    ) -> Run<()> {
        stats.nodes += 1;
        if stats.nodes > self.limits.max_nodes {
            return Err(ResourceError::Nodes {
                budget: self.limits.max_nodes,
            }
            .into());
        }
        if pos == row.len() {
            let mut v = C::one();
            for c in 0..self.big_n {
                let mut child = 0usize;
                for t in (0..child_len).rev() {
                    child = child * self.n + row[c + self.big_n * t];
                }
                v = v.mul(&z[child])?;
                if v.is_zero() {
                    return Ok(());
                }
            }
            *total = total.add(&v)?;
            return Ok(());
        }
        for s in 0..self.n {
            if pos > 0 && !self.a(row[pos - 1], s) {
                continue;
            }
            row[pos] = s;
            self.walk(z, child_len, row, pos + 1, total, stats)?;
        }
        Ok(())
    }
}

fn increment(digits: &mut [usize], n: usize) {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < n {
            return;
        }
        *d = 0;
    }
}

fn run<C: Count>(ctx: &Ctx<'_>, m: u32) -> Run<(C, CountStats)> {
    let mut stats = CountStats::default();
    let z = ctx.z_table::<C>(m - 1, &mut stats)?;
    let child_len = ctx.big_n.pow(m - 1);
    let total = if ctx.big_n == 2 {
        ctx.top_two(&z, child_len, &mut stats)?
    } else {
        ctx.top_enumerate(&z, child_len, &mut stats)?
    };
    Ok((total, stats))
}

/// Exact count of admissible total patterns on a rectangle window.
pub fn count_colorings_tree(w: &Window, x: &Nnsft, limits: &Limits) -> Result<CountResult> {
    let m = w
        .rectangle_height()
        .ok_or_else(|| Error::Parameter("sheet-tree counting needs a rectangle window".into()))?;
    let n = x.alphabet() as usize;
    let dense = |g| -> Vec<bool> {
        let mut v = vec![false; n * n];
        for s in 0..n {
            for t in 0..n {
                v[s * n + t] = x.allows(g, s as Symbol, t as Symbol);
            }
        }
        v
    };
    let ctx = Ctx {
        n,
        big_n: w.params().n() as usize,
        allow_a: dense(Generator::A),
        allow_b: dense(Generator::B),
        limits,
    };
    let (count, stats) = with_fallback(|| run::<u128>(&ctx, m), || run::<BigUint>(&ctx, m))?;
    Ok(CountResult {
        count,
        method: Method::SheetTreeDp,
        stats,
    })
}
