//! Counting admissible patterns on windows, plus the constructive
//! extension, completion, gluing and witness-family routines.

mod backtrack;
mod entropy;
mod frontier;
mod greedy;
mod tree;
mod witness;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cayley::{Limits, Window};
use crate::error::{Error, ResourceError, Result};
use crate::subshift::{Nnsft, Pattern};

pub use backtrack::{count_colorings_backtracking, random_admissible};
pub use entropy::{entropy_csv, entropy_row, entropy_table, ln_biguint, EntropyRow};
pub use frontier::count_colorings_frontier;
pub use greedy::{extend_rectangle, glue, greedy_complete, legal_symbols};
pub use tree::count_colorings_tree;
pub use witness::{witness_family_even, witness_family_odd, EvenConvention, WitnessFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Backtracking,
    FrontierDp,
    SheetTreeDp,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Backtracking => "backtracking",
            Method::FrontierDp => "frontier_dp",
            Method::SheetTreeDp => "sheet_tree_dp",
        })
    }
}

/// Which counter to run. `Auto` tries the sheet-tree DP, then the frontier
/// DP, then backtracking, moving on only when a budget is exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodChoice {
    Auto,
    Only(Method),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CountStats {
    /// Search nodes visited (backtracking) or cell transitions (DP).
    pub nodes: u64,
    /// Largest state map or table held at once.
    pub peak_states: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "ser_decimal")]
    pub count: BigUint,
    pub method: Method,
    pub stats: CountStats,
}

fn ser_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Counts total patterns on `w` that are admissible for `x`. Rectangles may
/// use any method; other windows only support backtracking.
pub fn count_colorings(
    w: &Window,
    x: &Nnsft,
    choice: MethodChoice,
    limits: &Limits,
) -> Result<CountResult> {
    match choice {
        MethodChoice::Only(Method::Backtracking) => {
            count_colorings_backtracking(w, x, None, limits)
        }
        MethodChoice::Only(Method::FrontierDp) => count_colorings_frontier(w, x, limits),
        MethodChoice::Only(Method::SheetTreeDp) => count_colorings_tree(w, x, limits),
        MethodChoice::Auto => {
            if w.rectangle_height().is_none() {
                return count_colorings_backtracking(w, x, None, limits);
            }
            match count_colorings_tree(w, x, limits) {
                Err(e) if e.is_resource() => {}
                other => return other,
            }
            match count_colorings_frontier(w, x, limits) {
                Err(e) if e.is_resource() => {}
                other => return other,
            }
            count_colorings_backtracking(w, x, None, limits)
        }
    }
}

/// Alphabet sizes above this are rejected by the bitmask search.
pub const MAX_SEARCH_ALPHABET: u32 = 64;

fn require_fixed_alphabet(fixed: Option<&Pattern>, w: &Window, x: &Nnsft) -> Result<()> {
    if let Some(p) = fixed {
        if p.window().vertices() != w.vertices() {
            return Err(Error::Parameter(
                "fixed pattern lives on a different window".into(),
            ));
        }
        if p.alphabet() > x.alphabet() {
            return Err(Error::Parameter(format!(
                "fixed pattern alphabet {} exceeds shift alphabet {}",
                p.alphabet(),
                x.alphabet()
            )));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Exact counts with a fast path.

/// Why a typed run stopped: either the fixed-width type overflowed (rerun
/// with big integers) or a real error.
pub(crate) enum Fail {
    Overflow,
    Error(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Error(e)
    }
}

impl From<ResourceError> for Fail {
    fn from(e: ResourceError) -> Self {
        Fail::Error(e.into())
    }
}

pub(crate) type Run<T> = std::result::Result<T, Fail>;

pub(crate) trait Count: Clone + Send + Sync + Sized + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Run<Self>;
    fn mul(&self, o: &Self) -> Run<Self>;
    fn into_big(self) -> BigUint;
}

impl Count for u128 {
    #[inline]
    fn zero() -> Self {
        0
    }
    #[inline]
    fn one() -> Self {
        1
    }
    #[inline]
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn add(&self, o: &Self) -> Run<Self> {
        self.checked_add(*o).ok_or(Fail::Overflow)
    }
    #[inline]
    fn mul(&self, o: &Self) -> Run<Self> {
        self.checked_mul(*o).ok_or(Fail::Overflow)
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_u64(v: u64) -> Self {
        BigUint::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Run<Self> {
        Ok(self + o)
    }
    fn mul(&self, o: &Self) -> Run<Self> {
        Ok(self * o)
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// Runs `f` with `u128` counts and falls back to big integers on overflow.
pub(crate) fn with_fallback<F, G>(fast: F, slow: G) -> Result<(BigUint, CountStats)>
where
    F: FnOnce() -> Run<(u128, CountStats)>,
    G: FnOnce() -> Run<(BigUint, CountStats)>,
{
    match fast() {
        Ok((c, s)) => Ok((c.into_big(), s)),
        Err(Fail::Error(e)) => Err(e),
        Err(Fail::Overflow) => match slow() {
            Ok(r) => Ok(r),
            Err(Fail::Error(e)) => Err(e),
            Err(Fail::Overflow) => unreachable!("big integers do not overflow"),
        },
    }
}
