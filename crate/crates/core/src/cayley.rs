//! Finite windows of the Cayley graph of BS(1,N) with generators `{a, b}`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, ResourceError, Result};
use crate::group::{self, Element, Generator, GroupParams};

/// Default cap on the number of vertices a window may hold.
pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

/// Budgets shared by window construction and the search routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    /// Backtracking nodes.
    pub max_nodes: u64,
    /// Entries in a DP state map or transfer table.
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: DEFAULT_MAX_VERTICES,
            max_nodes: 200_000_000,
            max_states: 40_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WindowKind {
    Rectangle {
        m: u32,
    },
    Ball {
        r: u32,
    },
    Sheet {
        branches: Vec<u32>,
        depth_down: u32,
        depth_up: u32,
        width: u64,
    },
    Custom,
}

/// A finite, deduplicated vertex set with a fixed enumeration order.
#[derive(Debug, Clone)]
pub struct Window {
    params: GroupParams,
    vertices: Vec<Element>,
    index: HashMap<Element, usize>,
    kind: WindowKind,
    edges: OnceLock<EdgeList>,
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.vertices == other.vertices && self.kind == other.kind
    }
}

impl Window {
    /// Builds a window from arbitrary reduced elements, keeping first
    /// occurrences in order.
    pub fn from_elements<I>(params: GroupParams, elements: I, kind: WindowKind) -> Self
    where
        I: IntoIterator<Item = Element>,
    {
        let mut vertices = Vec::new();
        let mut index = HashMap::new();
        for g in elements {
            debug_assert!(g.is_reduced(&params));
            if !index.contains_key(&g) {
                index.insert(g.clone(), vertices.len());
                vertices.push(g);
            }
        }
        Window {
            params,
            vertices,
            index,
            kind,
            edges: OnceLock::new(),
        }
    }

    pub fn custom<I: IntoIterator<Item = Element>>(params: GroupParams, elements: I) -> Self {
        Self::from_elements(params, elements, WindowKind::Custom)
    }

    /// `R_m = { a^k b^i : 0 <= k < N^m, 0 <= i < m }`, level-major.
    pub fn rectangle(params: GroupParams, m: u32, limits: &Limits) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter(
                "rectangle height must be at least 1".into(),
            ));
        }
        let width = rectangle_width(params, m, limits)?;
        let requested = width as u128 * m as u128;
        if requested > limits.max_vertices as u128 {
            return Err(ResourceError::Vertices {
                requested,
                budget: limits.max_vertices,
            }
            .into());
        }
        let elements = (0..m as u64).flat_map(|i| (0..width).map(move |k| Element::ak_bi(k, i)));
        Ok(Self::from_elements(
            params,
            elements,
            WindowKind::Rectangle { m },
        ))
    }

    /// Word-metric ball of radius `r` around the identity, in BFS order.
    pub fn ball(params: GroupParams, r: u32, limits: &Limits) -> Result<Self> {
        let mut vertices = vec![Element::identity()];
        let mut index = HashMap::from([(Element::identity(), 0usize)]);
        let mut depth = vec![0u32];
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            if depth[u] == r {
                continue;
            }
            for nb in group::neighbors(&vertices[u], &params)? {
                if index.contains_key(&nb) {
                    continue;
                }
                if vertices.len() >= limits.max_vertices {
                    return Err(ResourceError::Vertices {
                        requested: vertices.len() as u128 + 1,
                        budget: limits.max_vertices,
                    }
                    .into());
                }
                index.insert(nb.clone(), vertices.len());
                depth.push(depth[u] + 1);
                queue.push_back(vertices.len());
                vertices.push(nb);
            }
        }
        Ok(Window {
            params,
            vertices,
            index,
            kind: WindowKind::Ball { r },
            edges: OnceLock::new(),
        })
    }

    /// Finite truncation of the sheet through the identity that goes down
    /// `depth_down` rows and up `depth_up` rows along `branches`, keeping
    /// `|k| <= width` on each row (rows are `h a^k`).
    pub fn sheet(
        params: GroupParams,
        branches: &[u32],
        depth_down: u32,
        depth_up: u32,
        width: u64,
        limits: &Limits,
    ) -> Result<Self> {
        if branches.len() < depth_up as usize {
            return Err(Error::Parameter(format!(
                "sheet needs {depth_up} branch digits, got {}",
                branches.len()
            )));
        }
        if let Some(&bad) = branches.iter().find(|&&d| d >= params.n()) {
            return Err(Error::Parameter(format!(
                "branch digit {bad} is not below N = {}",
                params.n()
            )));
        }
        let rows = depth_down as u128 + depth_up as u128 + 1;
        let requested = rows * (2 * width as u128 + 1);
        if requested > limits.max_vertices as u128 {
            return Err(ResourceError::Vertices {
                requested,
                budget: limits.max_vertices,
            }
            .into());
        }
        let mut bases = Vec::with_capacity(rows as usize);
        for n in (1..=depth_down).rev() {
            bases.push(Element::b_pow(-(n as i64)));
        }
        let mut h = Element::identity();
        bases.push(h.clone());
        for &d in branches.iter().take(depth_up as usize) {
            h = group::multiply(&h, &Element::a_pow(d), &params)?;
            h = group::multiply(&h, &Element::b_pow(1), &params)?;
            bases.push(h.clone());
        }
        let mut elements = Vec::with_capacity(requested as usize);
        let w = width as i64;
        for base in &bases {
            for k in -w..=w {
                elements.push(group::multiply(base, &Element::a_pow(k), &params)?);
            }
        }
        Ok(Self::from_elements(
            params,
            elements,
            WindowKind::Sheet {
                branches: branches.to_vec(),
                depth_down,
                depth_up,
                width,
            },
        ))
    }

    /// Left translate `g * W` of this window.
    pub fn translate(&self, g: &Element) -> Result<Self> {
        let elements = self
            .vertices
            .iter()
            .map(|v| group::multiply(g, v, &self.params))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::from_elements(
            self.params,
            elements,
            WindowKind::Custom,
        ))
    }

    #[inline]
    pub fn params(&self) -> GroupParams {
        self.params
    }

    #[inline]
    pub fn kind(&self) -> &WindowKind {
        &self.kind
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn vertices(&self) -> &[Element] {
        &self.vertices
    }

    #[inline]
    pub fn vertex(&self, ord: usize) -> &Element {
        &self.vertices[ord]
    }

    #[inline]
    pub fn ordinal(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.index.contains_key(g)
    }

    /// Induced edges, computed once and cached.
    pub fn edges(&self) -> Result<&EdgeList> {
        if let Some(e) = self.edges.get() {
            return Ok(e);
        }
        let computed = induced_edges(self)?;
        let _ = self.edges.set(computed);
        Ok(self.edges.get().expect("just set"))
    }

    /// Per-vertex incident edges as `(other, generator, outgoing)`, where
    /// `outgoing` means `other = this * generator`.
    pub fn adjacency(&self) -> Result<Vec<Vec<(usize, Generator, bool)>>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(u, v, g) in &self.edges()?.edges {
            adj[u].push((v, g, true));
            adj[v].push((u, g, false));
        }
        Ok(adj)
    }

    /// Rectangle height, if this window is a rectangle.
    pub fn rectangle_height(&self) -> Option<u32> {
        match self.kind {
            WindowKind::Rectangle { m } => Some(m),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.params.n(),
            "kind": self.kind,
            "vertices": self.vertices.iter().map(element_to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("N")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Format("window needs integer field N".into()))?;
        let params = GroupParams::new(n as u32)?;
        let kind: WindowKind = match v.get("kind") {
            Some(k) => {
                serde_json::from_value(k.clone()).map_err(|e| Error::Format(e.to_string()))?
            }
            None => WindowKind::Custom,
        };
        let verts = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("window needs a vertices array".into()))?;
        let mut elements = Vec::with_capacity(verts.len());
        for item in verts {
            elements.push(element_from_json(item, &params)?);
        }
        Ok(Self::from_elements(params, elements, kind))
    }

    /// Graphviz rendering; vertices are labelled by their canonical word.
    pub fn to_dot(&self, edges: &EdgeList) -> String {
        let mut out = String::from("digraph window {\n");
        for (ord, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  {ord} [label=\"{v}\"];");
        }
        for &(u, v, gen) in &edges.edges {
            let _ = writeln!(out, "  {u} -> {v} [label=\"{}\"];", gen.as_char());
        }
        out.push_str("}\n");
        out
    }
}

/// Number of columns `N^m` of `R_m`, checked against the vertex budget.
pub fn rectangle_width(params: GroupParams, m: u32, limits: &Limits) -> Result<u64> {
    let mut w: u128 = 1;
    for _ in 0..m {
        w *= params.n() as u128;
        if w * m as u128 > limits.max_vertices as u128 {
            return Err(ResourceError::Vertices {
                requested: w * m as u128,
                budget: limits.max_vertices,
            }
            .into());
        }
    }
    Ok(w as u64)
}

pub fn element_to_json(g: &Element) -> Value {
    json!([g.j(), g.k().to_string(), g.i()])
}

pub fn element_from_json(v: &Value, params: &GroupParams) -> Result<Element> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| Error::Format(format!("bad vertex {v}")))?;
    let j = arr[0]
        .as_u64()
        .ok_or_else(|| Error::Format(format!("bad j in {v}")))?;
    let i = arr[2]
        .as_u64()
        .ok_or_else(|| Error::Format(format!("bad i in {v}")))?;
    let k = parse_bigint(&arr[1])?;
    Element::from_reduced(j, k, i, params)
        .ok_or_else(|| Error::Format(format!("vertex {v} is not reduced")))
}

pub(crate) fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Format(format!("bad integer {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Format(format!("bad integer {n}"))),
        other => Err(Error::Format(format!("expected integer, found {other}"))),
    }
}

/// Induced edges `(u, v, s)` with `vertex(v) = vertex(u) * s`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeList {
    pub edges: Vec<(usize, usize, Generator)>,
}

impl EdgeList {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn induced_edges(w: &Window) -> Result<EdgeList> {
    let p = w.params();
    let mut edges = Vec::new();
    for (u, g) in w.vertices().iter().enumerate() {
        let [ga, _, gb, _] = group::neighbors(g, &p)?;
        if let Some(v) = w.ordinal(&ga) {
            edges.push((u, v, Generator::A));
        }
        if let Some(v) = w.ordinal(&gb) {
            edges.push((u, v, Generator::B));
        }
    }
    Ok(EdgeList { edges })
}

/// Number of Cayley edges with exactly one endpoint in `w`.
pub fn boundary_edge_count(w: &Window) -> Result<u64> {
    let p = w.params();
    let mut count = 0;
    for g in w.vertices() {
        for nb in group::neighbors(g, &p)? {
            if !w.contains(&nb) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `gamma_m = 2 (N^(m+1) - 1) / (N - 1)`, the boundary size of `R_m`.
pub fn gamma_closed_form(params: GroupParams, m: u32) -> BigUint {
    let n = BigUint::from(params.n());
    let top = num_traits::pow::pow(n.clone(), m as usize + 1) - BigUint::one();
    BigUint::from(2u32) * top / (n - BigUint::one())
}

/// `|R_m| = m N^m`.
pub fn rectangle_size(params: GroupParams, m: u32) -> BigUint {
    BigUint::from(m) * num_traits::pow::pow(BigUint::from(params.n()), m as usize)
}

/// `gamma_m / |R_m|` as an exact rational.
pub fn isoperimetric_ratio(params: GroupParams, m: u32) -> BigRational {
    BigRational::new(
        gamma_closed_form(params, m).into(),
        rectangle_size(params, m).into(),
    )
}

/// Rectangle cell `(k, i)` to its ordinal in level-major order.
#[inline]
pub fn rect_ordinal(width: u64, k: u64, i: u64) -> usize {
    (i * width + k) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(n: u32) -> GroupParams {
        GroupParams::new(n).unwrap()
    }

    #[test]
    fn rectangle_sizes() {
        let l = Limits::default();
        let r1 = Window::rectangle(p(2), 1, &l).unwrap();
        assert_eq!(r1.vertices(), &[Element::identity(), Element::a_pow(1)]);
        assert_eq!(Window::rectangle(p(2), 2, &l).unwrap().len(), 8);
        assert_eq!(Window::rectangle(p(3), 2, &l).unwrap().len(), 18);
        let small = Limits {
            max_vertices: 100,
            ..Limits::default()
        };
        assert!(matches!(
            Window::rectangle(p(2), 6, &small),
            Err(Error::Resource(ResourceError::Vertices { .. }))
        ));
    }

    #[test]
    fn rectangle_is_level_major() {
        let r = Window::rectangle(p(3), 2, &Limits::default()).unwrap();
        for (ord, v) in r.vertices().iter().enumerate() {
            assert_eq!(ord, rect_ordinal(9, v.k().try_into().unwrap(), v.i()));
        }
    }

    #[test]
    fn ball_small_radii() {
        let l = Limits::default();
        assert_eq!(Window::ball(p(2), 0, &l).unwrap().len(), 1);
        assert_eq!(Window::ball(p(2), 1, &l).unwrap().len(), 5);
        // frozen regression value from BFS; cross-checked by word enumeration below
        let b2 = Window::ball(p(2), 2, &l).unwrap();
        let mut words: HashSet<Element> = HashSet::new();
        let gens = [
            Element::a_pow(1),
            Element::a_pow(-1),
            Element::b_pow(1),
            Element::b_pow(-1),
        ];
        words.insert(Element::identity());
        for s in &gens {
            words.insert(s.clone());
            for t in &gens {
                words.insert(group::multiply(s, t, &p(2)).unwrap());
            }
        }
        assert_eq!(b2.len(), words.len());
        assert_eq!(b2.len(), 17);
    }

    #[test]
    fn sheet_windows() {
        let l = Limits::default();
        let row = Window::sheet(p(2), &[], 0, 0, 3, &l).unwrap();
        assert_eq!(row.len(), 7);
        assert!(row.vertices().iter().all(|v| v.level() == 0));
        let s = Window::sheet(p(2), &[0, 0], 1, 2, 2, &l).unwrap();
        assert_eq!(s.len(), (1 + 2 + 1) * 5);
        // level 2 row of the sheet along branch (0, 0) is b^2 a^k = a^(4k) b^2
        assert!(s.contains(&Element::ak_bi(4, 2)));
        assert!(s.contains(&Element::ak_bi(-8, 2)));
        assert!(Window::sheet(p(2), &[0], 0, 2, 1, &l).is_err());
        assert!(Window::sheet(p(2), &[2], 0, 1, 1, &l).is_err());
    }

    #[test]
    fn induced_edges_of_small_rectangles() {
        let l = Limits::default();
        let r1 = Window::rectangle(p(2), 1, &l).unwrap();
        assert_eq!(
            induced_edges(&r1).unwrap().edges,
            vec![(0, 1, Generator::A)]
        );
        // 3 + 2 horizontal, 4 vertical
        let r2 = Window::rectangle(p(2), 2, &l).unwrap();
        let e = induced_edges(&r2).unwrap();
        assert_eq!(e.len(), 9);
        let brute: usize = r2
            .vertices()
            .iter()
            .map(|g| {
                let nb = group::neighbors(g, &p(2)).unwrap();
                nb.iter().filter(|h| r2.contains(h)).count()
            })
            .sum();
        assert_eq!(brute, 2 * e.len());
    }

    #[test]
    fn boundary_counts_match_closed_form() {
        let l = Limits::default();
        assert_eq!(
            boundary_edge_count(&Window::rectangle(p(2), 1, &l).unwrap()).unwrap(),
            6
        );
        assert_eq!(
            boundary_edge_count(&Window::rectangle(p(2), 2, &l).unwrap()).unwrap(),
            14
        );
        assert_eq!(
            boundary_edge_count(&Window::rectangle(p(3), 3, &l).unwrap()).unwrap(),
            80
        );
        assert_eq!(gamma_closed_form(p(2), 1), BigUint::from(6u32));
        assert_eq!(gamma_closed_form(p(2), 2), BigUint::from(14u32));
        assert_eq!(gamma_closed_form(p(3), 2), BigUint::from(26u32));
        assert_eq!(
            boundary_edge_count(&Window::rectangle(p(3), 2, &l).unwrap()).unwrap(),
            26
        );
    }

    #[test]
    fn json_round_trip() {
        let w = Window::sheet(p(3), &[1, 2], 1, 2, 2, &Limits::default()).unwrap();
        let back = Window::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);
        let bad = json!({"N": 2, "vertices": [[1, "2", 1]]});
        assert!(Window::from_json(&bad).is_err());
    }

    #[test]
    fn dot_output_names_generators() {
        let w = Window::rectangle(p(2), 1, &Limits::default()).unwrap();
        let dot = w.to_dot(&induced_edges(&w).unwrap());
        assert!(dot.contains("0 [label=\"e\"]"));
        assert!(dot.contains("0 -> 1 [label=\"a\"]"));
    }
}
