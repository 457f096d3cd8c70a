//! Pattern counts on `R_1, R_2, ...` with per-row bound checks.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{count_colorings, Method, MethodChoice};
use crate::cayley::{rectangle_size, Limits, Window};
use crate::error::{Error, Result};
use crate::group::GroupParams;
use crate::subshift::gcs;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyRow {
    pub m: u32,
    pub cells: u64,
    /// `None` when the count could not be obtained within budget.
    #[serde(serialize_with = "ser_opt_decimal")]
    pub count: Option<BigUint>,
    /// `ln(count) / cells`; `None` for a zero or missing count.
    pub estimate: Option<f64>,
    pub method: Option<Method>,
    /// `(n - 2)^cells <= count`.
    pub lower_ok: Option<bool>,
    /// `count <= count(m - 1) (n - 1)^(cells - cells(m - 1))`; `None` for
    /// the first row or when the previous count is missing.
    pub step_ok: Option<bool>,
    /// `count <= n (n - 1)^(cells - 1)`.
    pub tree_ok: Option<bool>,
    pub error: Option<String>,
}

fn ser_opt_decimal<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(c) => s.serialize_str(&c.to_string()),
        None => s.serialize_none(),
    }
}

impl EntropyRow {
    /// True when the count is present and every applicable bound holds.
    pub fn passes(&self) -> bool {
        self.count.is_some()
            && self.lower_ok == Some(true)
            && self.tree_ok == Some(true)
            && self.step_ok != Some(false)
    }

    /// True when the row failed only for lack of resources.
    pub fn is_resource_failure(&self) -> bool {
        self.count.is_none()
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().expect("finite").ln()
    } else {
        let shift = bits - 64;
        (v >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// One row for `R_m` and `C_n`; `prev` is the count on `R_{m-1}` if known.
pub fn entropy_row(
    params: GroupParams,
    n: u32,
    m: u32,
    prev: Option<&BigUint>,
    choice: MethodChoice,
    limits: &Limits,
) -> Result<EntropyRow> {
    let x = gcs(n)?;
    let cells = rectangle_size(params, m)
        .to_u64()
        .ok_or_else(|| Error::Parameter(format!("R_{m} is too large")))?;
    let counted =
        Window::rectangle(params, m, limits).and_then(|w| count_colorings(&w, &x, choice, limits));
    let res = match counted {
        Ok(r) => r,
        Err(e) if e.is_resource() => {
            return Ok(EntropyRow {
                m,
                cells,
                count: None,
                estimate: None,
                method: None,
                lower_ok: None,
                step_ok: None,
                tree_ok: None,
                error: Some(e.to_string()),
            })
        }
        Err(e) => return Err(e),
    };
    let count = res.count;
    let pow = |base: u32, e: u64| num_traits::pow::pow(BigUint::from(base), e as usize);
    let lower_ok = pow(n - 2, cells) <= count;
    let tree_ok = count <= BigUint::from(n) * pow(n - 1, cells - 1);
    let step_ok = match (m, prev) {
        (2.., Some(p)) => {
            let prev_cells = rectangle_size(params, m - 1)
                .to_u64()
                .expect("smaller than R_m");
            Some(count <= p * pow(n - 1, cells - prev_cells))
        }
        _ => None,
    };
    let estimate = (!count.is_zero()).then(|| ln_biguint(&count) / cells as f64);
    Ok(EntropyRow {
        m,
        cells,
        count: Some(count),
        estimate,
        method: Some(res.method),
        lower_ok: Some(lower_ok),
        step_ok,
        tree_ok: Some(tree_ok),
        error: None,
    })
}

/// Rows for `m = 1 ..= m_max`. Rows that run out of budget are reported
/// as such and do not stop the table.
pub fn entropy_table(
    params: GroupParams,
    n: u32,
    m_max: u32,
    choice: MethodChoice,
    limits: &Limits,
) -> Result<Vec<EntropyRow>> {
    let mut rows: Vec<EntropyRow> = Vec::new();
    for m in 1..=m_max {
        let prev = rows.last().and_then(|r| r.count.as_ref());
        let row = entropy_row(params, n, m, prev, choice, limits)?;
        rows.push(row);
    }
    Ok(rows)
}

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "n/a",
    }
}

/// CSV with columns `m,cells,count,estimate` followed by the bound checks.
/// Estimates carry 17 significant digits.
pub fn entropy_csv(rows: &[EntropyRow]) -> String {
    let mut out =
        String::from("m,cells,count,estimate,method,lower_bound,step_bound,tree_bound,status\n");
    for r in rows {
        let count = r
            .count
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default();
        let estimate = r.estimate.map(|e| format!("{e:.16e}")).unwrap_or_default();
        let method = r.method.map(|m| m.to_string()).unwrap_or_default();
        let status = match &r.error {
            Some(e) => format!("\"resource: {}\"", e.replace('"', "'")),
            None if r.passes() => "ok".to_string(),
            None => "bound violated".to_string(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.m,
            r.cells,
            count,
            estimate,
            method,
            flag(r.lower_ok),
            flag(r.step_ok),
            flag(r.tree_ok),
            status
        );
    }
    out
}
