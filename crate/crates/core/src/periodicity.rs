//! Periodicity propagation along levels and the search for configurations
//! whose levels are monochromatic.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cayley::Window;
use crate::error::{Error, Result};
use crate::group::{self, Element, Generator, GroupParams};
use crate::subshift::{exact_stab, restrict, ConfigOracle, Nnsft, Pattern, Symbol};

/// Checks `(B^j a^k b^(i+j+l)) a^p = a^(p N^(i+l)) (B^j a^k b^(i+j+l))`.
pub fn check_group_identity(
    params: GroupParams,
    p: u64,
    l: u64,
    i: u64,
    j: u64,
    k: &BigInt,
) -> Result<bool> {
    let up = i
        .checked_add(j)
        .and_then(|s| s.checked_add(l))
        .ok_or(crate::error::GroupError::LevelOverflow)?;
    let g = group::normalize(j, k.clone(), up, &params);
    let left = group::multiply(&g, &Element::a_pow(p), &params)?;
    let shift = group::psi_pow(&BigInt::from(p), i + l, &params)?;
    let right = group::multiply(&Element::a_pow(shift), &g, &params)?;
    Ok(left == right)
}

/// Horizontal period `p` claimed for every level at or above `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicitySpec {
    pub p: u64,
    pub l: u64,
}

impl PeriodicitySpec {
    pub fn new(p: u64, l: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::Parameter("period must be at least 1".into()));
        }
        Ok(PeriodicitySpec { p, l })
    }
}

/// Requires `a^(p N^l)` in the stabilizer of `x` (decided exactly), then
/// checks `x(v a^p) = x(v)` for every `v` in `w` of level at least `l`.
pub fn check_section_periodicity(
    x: &ConfigOracle,
    spec: PeriodicitySpec,
    w: &Window,
    params: GroupParams,
) -> Result<bool> {
    let period = group::psi_pow(&BigInt::from(spec.p), spec.l, &params)?;
    let h = Element::a_pow(period);
    if !exact_stab(x, &h)? {
        return Err(Error::Precondition(format!(
            "{h} does not stabilize the configuration"
        )));
    }
    let step = Element::a_pow(spec.p);
    for v in w.vertices() {
        if v.level() < spec.l as i64 {
            continue;
        }
        let moved = group::multiply(v, &step, &params)?;
        if x.evaluate(&moved)? != x.evaluate(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A configuration whose level `L` is entirely colored `levels[L mod q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicWitness {
    pub levels: Vec<Symbol>,
}

impl PeriodicWitness {
    pub fn config(&self) -> ConfigOracle {
        ConfigOracle::LevelSequence {
            word: self.levels.clone(),
            phase: 0,
        }
    }

    pub fn expand(&self, w: &std::sync::Arc<Window>) -> Result<Pattern> {
        restrict(&self.config(), w)
    }

    pub fn horizontal_ok(&self, x: &Nnsft) -> bool {
        self.levels.iter().all(|&c| x.allows(Generator::A, c, c))
    }

    pub fn vertical_cycle_ok(&self, x: &Nnsft) -> bool {
        let q = self.levels.len();
        (0..q).all(|r| x.allows(Generator::B, self.levels[r], self.levels[(r + 1) % q]))
    }

    /// Symbols as base-36 digits when they fit, otherwise comma-separated.
    pub fn levels_string(&self) -> String {
        if self.levels.iter().all(|&c| c < 36) {
            self.levels
                .iter()
                .map(|&c| std::char::from_digit(c as u32, 36).expect("digit"))
                .collect()
        } else {
            self.levels
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    pub fn to_json(&self, x: &Nnsft) -> Value {
        json!({
            "levels": self.levels_string(),
            "horizontal_ok": self.horizontal_ok(x),
            "vertical_cycle_ok": self.vertical_cycle_ok(x),
        })
    }
}

/// Lexicographically least among the shortest level words `c_0 .. c_(q-1)`
/// with every `(c_r, c_r)` allowed on `a` and every `(c_r, c_(r+1 mod q))`
/// allowed on `b`. `None` means no configuration with monochromatic levels
/// exists.
pub fn find_periodic_monochromatic(x: &Nnsft) -> Option<PeriodicWitness> {
    let n = x.alphabet() as usize;
    let good: Vec<bool> = (0..n)
        .map(|c| x.allows(Generator::A, c as Symbol, c as Symbol))
        .collect();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|c| {
            if !good[c] {
                return Vec::new();
            }
            (0..n)
                .filter(|&d| good[d] && x.allows(Generator::B, c as Symbol, d as Symbol))
                .collect()
        })
        .collect();
    // shortest cycle length through each vertex by BFS
    let mut q = usize::MAX;
    for c in (0..n).filter(|&c| good[c]) {
        let mut dist = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        dist[c] = 0;
        queue.push_back(c);
        while let Some(u) = queue.pop_front() {
            for &v in &succ[u] {
                if v == c {
                    q = q.min(dist[u] + 1);
                }
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    if q == usize::MAX {
        return None;
    }
    for start in (0..n).filter(|&c| good[c]) {
        // back[t][v]: v reaches start in exactly t steps
        let mut back = vec![vec![false; n]; q + 1];
        back[0][start] = true;
        for t in 1..=q {
            for v in 0..n {
                back[t][v] = succ[v].iter().any(|&u| back[t - 1][u]);
            }
        }
        if !back[q][start] {
            continue;
        }
        let mut word = vec![start as Symbol];
        let mut cur = start;
        for t in (1..q).rev() {
            let next = *succ[cur].iter().find(|&&v| back[t][v]).expect("reachable");
            word.push(next as Symbol);
            cur = next;
        }
        return Some(PeriodicWitness { levels: word });
    }
    unreachable!("a cycle of length q passes through some start vertex")
}

/// The level word rotated left by `n_steps`, i.e. the description of
/// `sigma_(b^-n_steps) x`.
pub fn shift_limit_levels(x: &ConfigOracle, n_steps: i64) -> Result<ConfigOracle> {
    match x {
        ConfigOracle::LevelSequence { word, phase } => {
            let q = word.len() as i64;
            let r = n_steps.rem_euclid(q) as usize;
            let mut rotated = word.clone();
            rotated.rotate_left(r);
            Ok(ConfigOracle::LevelSequence {
                word: rotated,
                phase: *phase,
            })
        }
        _ => Err(Error::Parameter(
            "level shifting needs a level-sequence configuration".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::gcs;

    #[test]
    fn identity_examples() {
        let p2 = GroupParams::new(2).unwrap();
        assert!(check_group_identity(p2, 1, 0, 0, 0, &BigInt::from(0)).unwrap());
        assert!(check_group_identity(p2, 1, 1, 0, 0, &BigInt::from(1)).unwrap());
    }

    #[test]
    fn witness_examples() {
        assert_eq!(find_periodic_monochromatic(&gcs(3).unwrap()), None);
        let all: Vec<(Symbol, Symbol)> = (0..2).flat_map(|s| (0..2).map(move |t| (s, t))).collect();
        let x = Nnsft::new(2, all, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(
            find_periodic_monochromatic(&x).unwrap().levels_string(),
            "01"
        );
        let x = Nnsft::new(1, [(0, 0)], [(0, 0)]).unwrap();
        assert_eq!(
            find_periodic_monochromatic(&x).unwrap().levels_string(),
            "0"
        );
    }

    #[test]
    fn rotation() {
        let x = ConfigOracle::level_sequence_str("012", 0).unwrap();
        let r = shift_limit_levels(&x, 1).unwrap();
        assert_eq!(r, ConfigOracle::level_sequence(vec![1, 2, 0], 0).unwrap());
        let y = ConfigOracle::level_sequence_str("01", 0).unwrap();
        assert_eq!(shift_limit_levels(&y, 2).unwrap(), y);
    }
}
