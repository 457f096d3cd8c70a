//! Frozen 3-colorings and finite-window certificates of frozenness.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::cayley::{isoperimetric_ratio, Limits, Window};
use crate::coloring_engine::count_colorings_backtracking;
use crate::error::{Error, Result};
use crate::group::{self, Element, Generator, GroupParams};
use crate::subshift::{
    first_violation, restrict, ConfigOracle, EdgeViolation, FormulaVariant, Nnsft, Pattern,
};

/// The closed form used for a given `N`, chosen by `N mod 3`.
pub fn frozen_variant(params: GroupParams) -> FormulaVariant {
    match params.n() % 3 {
        1 => FormulaVariant::FrozenMod1,
        2 => FormulaVariant::FrozenMod2,
        _ => FormulaVariant::FrozenMod0,
    }
}

pub fn frozen_config(params: GroupParams) -> ConfigOracle {
    ConfigOracle::Formula {
        variant: frozen_variant(params),
        params,
    }
}

/// First forbidden edge of `x` that touches `w`, including edges that leave
/// `w`; `None` if every such edge is allowed.
pub fn verify_proper(
    x: &ConfigOracle,
    w: &Arc<Window>,
    shift: &Nnsft,
) -> Result<Option<EdgeViolation>> {
    let inside = restrict(x, w)?;
    if inside.alphabet() > shift.alphabet() {
        return Err(Error::Parameter(format!(
            "configuration uses {} symbols, shift has {}",
            inside.alphabet(),
            shift.alphabet()
        )));
    }
    if let Some(v) = first_violation(&inside, shift)? {
        return Ok(Some(v));
    }
    let p = w.params();
    for (o, g) in w.vertices().iter().enumerate() {
        let s = inside.get(o).expect("total");
        let [ga, ga_inv, gb, gb_inv] = group::neighbors(g, &p)?;
        let outward = [
            (ga, Generator::A, true),
            (ga_inv, Generator::A, false),
            (gb, Generator::B, true),
            (gb_inv, Generator::B, false),
        ];
        for (h, gen, forward) in outward {
            if w.contains(&h) {
                continue;
            }
            let t = x.evaluate(&h)?;
            let (from, to, pair) = if forward {
                (g.clone(), h, (s, t))
            } else {
                (h, g.clone(), (t, s))
            };
            if !shift.allows(gen, pair.0, pair.1) {
                return Ok(Some(EdgeViolation {
                    from,
                    to,
                    gen,
                    symbols: pair,
                }));
            }
        }
    }
    Ok(None)
}

/// Outcome of recoloring a finite set with everything around it held fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenVerdict {
    /// Exactly one admissible filling exists and it is the configuration.
    pub unique: bool,
    pub fillings: BigUint,
}

impl FrozenVerdict {
    pub fn to_json(&self, window: &Window) -> Value {
        let fillings = match self.fillings.to_u64() {
            Some(v) => json!(v),
            None => json!(self.fillings.to_string()),
        };
        json!({"window": window.to_json(), "unique": self.unique, "fillings": fillings})
    }
}

/// Counts every admissible filling of `f` given `x` on the vertices
/// adjacent to `f` from outside. A unique filling equal to `x` on every
/// tested window is evidence for frozenness, not a proof.
pub fn verify_frozen_window(
    x: &ConfigOracle,
    f: &Window,
    shift: &Nnsft,
    limits: &Limits,
) -> Result<FrozenVerdict> {
    let p = f.params();
    let mut collar: Vec<Element> = Vec::new();
    let mut seen: HashSet<Element> = HashSet::new();
    for g in f.vertices() {
        for h in group::neighbors(g, &p)? {
            if !f.contains(&h) && seen.insert(h.clone()) {
                collar.push(h);
            }
        }
    }
    let inner = f.len();
    let all = Arc::new(Window::custom(
        p,
        f.vertices().iter().cloned().chain(collar),
    ));
    let mut fixed = Pattern::empty(Arc::clone(&all), shift.alphabet());
    for o in inner..all.len() {
        let s = x.evaluate(all.vertex(o))?;
        if s as u32 >= shift.alphabet() {
            return Err(Error::Parameter(format!(
                "symbol {s} outside the shift alphabet"
            )));
        }
        fixed.set(o, Some(s));
    }
    let fillings = count_colorings_backtracking(&all, shift, Some(&fixed), limits)?.count;
    let own = restrict(x, &all)?;
    let x_fits = first_violation(&own, shift)?.is_none();
    Ok(FrozenVerdict {
        unique: fillings.is_one() && x_fits,
        fillings,
    })
}

/// `(m, gamma_m / |R_m|)` for `m = 1 ..= m_max`, exact.
pub fn isoperimetric_ratio_table(params: GroupParams, m_max: u32) -> Vec<(u32, BigRational)> {
    (1..=m_max)
        .map(|m| (m, isoperimetric_ratio(params, m)))
        .collect()
}

/// The standard battery of finite sets: each cell of `R_3`, each edge of
/// `R_3`, and `R_2`, all at the origin.
pub fn frozen_test_windows(params: GroupParams, limits: &Limits) -> Result<Vec<(String, Window)>> {
    let r3 = Window::rectangle(params, 3, limits)?;
    let mut out = Vec::new();
    for g in r3.vertices() {
        out.push((format!("cell {g}"), Window::custom(params, [g.clone()])));
    }
    for &(u, v, gen) in &r3.edges()?.edges {
        let (g, h) = (r3.vertex(u), r3.vertex(v));
        out.push((
            format!("edge {g} -{}-> {h}", gen.as_char()),
            Window::custom(params, [g.clone(), h.clone()]),
        ));
    }
    out.push(("R2".to_string(), Window::rectangle(params, 2, limits)?));
    Ok(out)
}
