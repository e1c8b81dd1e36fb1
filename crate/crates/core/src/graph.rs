//! Atom configurations described by a triangle-free graph: vertices are
//! atoms, edge weights are pairwise overlaps.
//!
//! Vertex `i` becomes an atom of size `r+δ−1−α(i)+β(i)` and rank `r−α(i)`;
//! edge `w` makes its two endpoints share `γ(w)` elements. Vertices are
//! 0-based.

use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{self, BoundsError};
use crate::construction::{knapsack_max, Atom, AtomConfiguration};

/// Largest vertex count for the `V_{<k}` enumeration on graphs with edges.
pub const VERTEX_CAP: usize = 20;
const KNAPSACK_LIMIT: i64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub m: usize,
    pub edges: Vec<[usize; 2]>,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub gamma: Vec<i64>,
    pub k: i64,
    pub r: i64,
    pub delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum GraphViolation {
    /// Lengths disagree with `m` or the edge list, bad endpoints, repeated
    /// edges, or `0 < r < k`, `δ ≥ 2` failing.
    Structure { reason: String },
    /// (i) no 3-cycles
    Triangle { vertices: [usize; 3] },
    /// (ii) `0 ≤ α(i) ≤ r − 1`
    Alpha { vertex: usize, value: i64 },
    /// (iii) `β(i) ≥ 0`
    Beta { vertex: usize, value: i64 },
    /// (iv) `γ(w) ≥ 1`
    Gamma { edge: usize, value: i64 },
    /// (v) `k ≤ rm − Σα − Σγ`
    Capacity { k: i64, capacity: i64 },
    /// (vi) `r − α(i) > Σ_{w∋i} γ(w)`
    Degree { vertex: usize, rank: i64, load: i64 },
}

impl GraphViolation {
    pub fn label(&self) -> &'static str {
        match self {
            GraphViolation::Structure { .. } => "structure",
            GraphViolation::Triangle { .. } => "i",
            GraphViolation::Alpha { .. } => "ii",
            GraphViolation::Beta { .. } => "iii",
            GraphViolation::Gamma { .. } => "iv",
            GraphViolation::Capacity { .. } => "v",
            GraphViolation::Degree { .. } => "vi",
        }
    }
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::Structure { reason } => write!(f, "structure: {reason}"),
            GraphViolation::Triangle { vertices: [a, b, c] } => {
                write!(f, "(i) triangle on vertices {a}, {b}, {c}")
            }
            GraphViolation::Alpha { vertex, value } => {
                write!(f, "(ii) α({vertex}) = {value} outside [0, r−1]")
            }
            GraphViolation::Beta { vertex, value } => write!(f, "(iii) β({vertex}) = {value} < 0"),
            GraphViolation::Gamma { edge, value } => write!(f, "(iv) γ of edge {edge} = {value} < 1"),
            GraphViolation::Capacity { k, capacity } => {
                write!(f, "(v) k = {k} exceeds rm − Σα − Σγ = {capacity}")
            }
            GraphViolation::Degree { vertex, rank, load } => {
                write!(f, "(vi) vertex {vertex}: r − α = {rank} is not above Σγ = {load}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GraphReport {
    pub violations: Vec<GraphViolation>,
}

impl GraphReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GraphReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid graph spec: {0}")]
    InvalidGraphSpec(GraphReport),
    #[error("{m} vertices with edges exceeds the enumeration cap of {cap}")]
    TooLarge { m: usize, cap: usize },
    #[error("integer overflow evaluating graph parameters")]
    Overflow,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("no graph instance reaches d_b = {d_b} (best found {found})")]
    Unrealized { d_b: i64, found: i64 },
}

/// `(n, d)` of the matroid a valid spec describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphParams {
    pub n: i64,
    pub d: i64,
}

pub fn validate_graph_spec(g: &GraphSpec) -> GraphReport {
    let mut report = GraphReport::default();
    let mut structure = |reason: String| {
        report.violations.push(GraphViolation::Structure { reason });
    };
    if g.m == 0 {
        structure("no vertices".into());
    }
    if g.alpha.len() != g.m || g.beta.len() != g.m {
        structure(format!(
            "alpha and beta need {} entries, got {} and {}",
            g.m,
            g.alpha.len(),
            g.beta.len()
        ));
    }
    if g.gamma.len() != g.edges.len() {
        structure(format!("gamma needs {} entries, got {}", g.edges.len(), g.gamma.len()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for (e, &[a, b]) in g.edges.iter().enumerate() {
        if a >= g.m || b >= g.m {
            structure(format!("edge {e} = [{a},{b}] has an endpoint outside 0..{}", g.m));
        } else if a == b {
            structure(format!("edge {e} is a loop at vertex {a}"));
        } else if !seen.insert((a.min(b), a.max(b))) {
            structure(format!("edge {e} = [{a},{b}] repeats an earlier edge"));
        }
    }
    if !(0 < g.r && g.r < g.k) {
        structure(format!("need 0 < r < k, got r = {}, k = {}", g.r, g.k));
    }
    if g.delta < 2 {
        structure(format!("need δ ≥ 2, got {}", g.delta));
    }
    if !report.passes() {
        return report;
    }

    let adjacent = |a: usize, b: usize| seen.contains(&(a.min(b), a.max(b)));
    for a in 0..g.m {
        for b in a + 1..g.m {
            if !adjacent(a, b) {
                continue;
            }
            for c in b + 1..g.m {
                if adjacent(a, c) && adjacent(b, c) {
                    report.violations.push(GraphViolation::Triangle { vertices: [a, b, c] });
                }
            }
        }
    }
    for (i, &a) in g.alpha.iter().enumerate() {
        if !(0 <= a && a < g.r) {
            report.violations.push(GraphViolation::Alpha { vertex: i, value: a });
        }
    }
    for (i, &b) in g.beta.iter().enumerate() {
        if b < 0 {
            report.violations.push(GraphViolation::Beta { vertex: i, value: b });
        }
    }
    for (e, &c) in g.gamma.iter().enumerate() {
        if c < 1 {
            report.violations.push(GraphViolation::Gamma { edge: e, value: c });
        }
    }
    let wide = |x: i64| x as i128;
    let capacity = wide(g.r) * g.m as i128
        - g.alpha.iter().copied().map(wide).sum::<i128>()
        - g.gamma.iter().copied().map(wide).sum::<i128>();
    if wide(g.k) > capacity {
        let capacity = i64::try_from(capacity).unwrap_or(i64::MIN);
        report.violations.push(GraphViolation::Capacity { k: g.k, capacity });
    }
    for i in 0..g.m {
        let load: i128 = g
            .edges
            .iter()
            .zip(&g.gamma)
            .filter(|(w, _)| w.contains(&i))
            .map(|(_, &c)| wide(c))
            .sum();
        let rank = wide(g.r) - wide(g.alpha[i]);
        if rank <= load {
            report.violations.push(GraphViolation::Degree {
                vertex: i,
                rank: rank as i64,
                load: i64::try_from(load).unwrap_or(i64::MAX),
            });
        }
    }
    report
}

fn ensure_valid(g: &GraphSpec) -> Result<(), GraphError> {
    let report = validate_graph_spec(g);
    if report.passes() {
        Ok(())
    } else {
        Err(GraphError::InvalidGraphSpec(report))
    }
}

fn narrow(x: i128) -> Result<i64, GraphError> {
    i64::try_from(x).map_err(|_| GraphError::Overflow)
}

/// `Σ_{i∈I} ((δ−1) + β(i))` maximised over `I` with
/// `r|I| − Σ_I α − Σ_{w⊆I} γ < k`.
fn max_weight_below_k(g: &GraphSpec) -> Result<i128, GraphError> {
    let value = |i: usize| (g.delta - 1) as i128 + g.beta[i] as i128;
    if g.edges.is_empty() && g.k <= KNAPSACK_LIMIT {
        // edge-free: independent costs r − α(i), a knapsack of capacity k − 1
        let weights: Vec<usize> = g.alpha.iter().map(|&a| (g.r - a) as usize).collect();
        let values: Vec<usize> = (0..g.m)
            .map(|i| usize::try_from(value(i)).map_err(|_| GraphError::Overflow))
            .collect::<Result<_, _>>()?;
        return Ok(knapsack_max(&weights, &values, (g.k - 1) as usize) as i128);
    }
    if g.m > VERTEX_CAP {
        return Err(GraphError::TooLarge { m: g.m, cap: VERTEX_CAP });
    }
    let mut adjacency = vec![vec![0i128; g.m]; g.m];
    for (&[a, b], &c) in g.edges.iter().zip(&g.gamma) {
        adjacency[a][b] = c as i128;
        adjacency[b][a] = c as i128;
    }
    // each added vertex j raises the cost by r − α(j) − (γ to I) > 0, so the
    // search can stop at the first I that reaches k
    let mut best = 0i128;
    let mut stack: Vec<(Vec<usize>, i128, i128)> = Vec::new();
    for i in (0..g.m).rev() {
        stack.push((vec![i], (g.r - g.alpha[i]) as i128, value(i)));
    }
    while let Some((set, cost, weight)) = stack.pop() {
        if cost >= g.k as i128 {
            continue;
        }
        best = best.max(weight);
        let last = *set.last().expect("nonempty");
        for j in (last + 1..g.m).rev() {
            let shared: i128 = set.iter().map(|&i| adjacency[i][j]).sum();
            let mut next = set.clone();
            next.push(j);
            stack.push((next, cost + (g.r - g.alpha[j]) as i128 - shared, weight + value(j)));
        }
    }
    Ok(best)
}

/// `n = (r+δ−1)m − Σα + Σβ − Σγ` and
/// `d = n − k + 1 − max_{I∈V_{<k}} ((δ−1)|I| + Σ_{i∈I} β(i))`.
pub fn graph_params(g: &GraphSpec) -> Result<GraphParams, GraphError> {
    ensure_valid(g)?;
    let sum = |v: &[i64]| v.iter().map(|&x| x as i128).sum::<i128>();
    let span = g.r as i128 + g.delta as i128 - 1;
    let n = span * g.m as i128 - sum(&g.alpha) + sum(&g.beta) - sum(&g.gamma);
    let d = n - g.k as i128 + 1 - max_weight_below_k(g)?;
    Ok(GraphParams { n: narrow(n)?, d: narrow(d)? })
}

/// Atoms realising the spec: shared edge elements first in edge order, then
/// each vertex's private elements in vertex order.
pub fn graph_to_atom_config(g: &GraphSpec) -> Result<AtomConfiguration, GraphError> {
    ensure_valid(g)?;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); g.m];
    let mut next = 0usize;
    let to_usize = |x: i64| usize::try_from(x).map_err(|_| GraphError::Overflow);
    for (&[a, b], &c) in g.edges.iter().zip(&g.gamma) {
        for _ in 0..to_usize(c)? {
            members[a].push(next);
            members[b].push(next);
            next += 1;
        }
    }
    let mut atoms = Vec::with_capacity(g.m);
    for (i, shared) in members.into_iter().enumerate() {
        let size = to_usize(g.r + g.delta - 1 - g.alpha[i] + g.beta[i])?;
        let private = size - shared.len();
        let elements = shared.into_iter().chain(next..next + private);
        next += private;
        atoms.push(Atom::new(elements, to_usize(g.r - g.alpha[i])?));
    }
    Ok(AtomConfiguration::new(next, to_usize(g.k)?, atoms))
}

/// Edge-free spec on `⌈n/(r+δ−1)⌉ − 1` vertices with `α ≡ 0` and the
/// `r+δ−1−b` surplus spread as evenly as possible over `β`, larger shares
/// first.
pub fn spread_graph_instance(n: i64, k: i64, r: i64, delta: i64) -> Result<GraphSpec, GraphError> {
    let inputs = bounds::bound_inputs(n, k, r, delta)?;
    let m = inputs.m as usize;
    let beta = (0..inputs.m)
        .map(|i| if i < inputs.v { inputs.spread + 1 } else { inputs.spread })
        .collect();
    Ok(GraphSpec {
        m,
        edges: Vec::new(),
        alpha: vec![0; m],
        beta,
        gamma: Vec::new(),
        k,
        r,
        delta,
    })
}

/// Edge-free spec on `⌈n/(r+δ−1)⌉` vertices with `β ≡ 0` whose rank deficits
/// `α` absorb `b`, filled greedily from the first vertex. Its distance is
/// `n − k + 1 − ⌈k/r⌉(δ−1)` when the budget fits.
pub fn deficit_graph_instance(n: i64, k: i64, r: i64, delta: i64) -> Result<GraphSpec, GraphError> {
    let inputs = bounds::bound_inputs(n, k, r, delta)?;
    let m = (inputs.m + 1) as usize;
    let mut left = inputs.b;
    let alpha = (0..m)
        .map(|_| {
            let a = left.min(r - 1);
            left -= a;
            a
        })
        .collect();
    let g = GraphSpec {
        m,
        edges: Vec::new(),
        alpha,
        beta: vec![0; m],
        gamma: Vec::new(),
        k,
        r,
        delta,
    };
    if left > 0 {
        let report = GraphReport {
            violations: vec![GraphViolation::Structure {
                reason: format!("b = {} does not fit in {m} deficits of at most r − 1", inputs.b),
            }],
        };
        return Err(GraphError::InvalidGraphSpec(report));
    }
    ensure_valid(&g)?;
    Ok(g)
}

/// A graph instance whose distance equals `d_b`.
///
/// Tries the even-spread instance first and falls back to the deficit
/// instance when the spread one lands below `d_b`.
pub fn build_theorem42_instance(n: i64, k: i64, r: i64, delta: i64) -> Result<GraphSpec, GraphError> {
    let (d_b, _) = bounds::theorem42_bound(n, k, r, delta)?;
    let spread = spread_graph_instance(n, k, r, delta)?;
    let spread_d = graph_params(&spread)?.d;
    if spread_d >= d_b {
        return Ok(spread);
    }
    match deficit_graph_instance(n, k, r, delta) {
        Ok(g) if graph_params(&g)?.d >= d_b => Ok(g),
        Ok(g) => Err(GraphError::Unrealized { d_b, found: graph_params(&g)?.d.max(spread_d) }),
        Err(_) => Err(GraphError::Unrealized { d_b, found: spread_d }),
    }
}

pub fn to_dot(g: &GraphSpec) -> String {
    let mut out = String::from("graph construction {\n");
    for i in 0..g.m {
        let alpha = g.alpha.get(i).copied().unwrap_or(0);
        let beta = g.beta.get(i).copied().unwrap_or(0);
        let _ = writeln!(out, "  {i} [label=\"{i} α={alpha} β={beta}\"];");
    }
    for (e, [a, b]) in g.edges.iter().enumerate() {
        let gamma = g.gamma.get(e).copied().unwrap_or(0);
        let _ = writeln!(out, "  {a} -- {b} [label=\"{gamma}\"];");
    }
    out.push_str("}\n");
    out
}
