//! Exhaustive search over atom configurations for the largest distance at
//! given `(n, k, r, δ)`.
//!
//! The default space has every overlap inside one shared pool `X`, with atom
//! `i` holding the first `x_i` pool elements. A configuration is then a
//! multiset of `(x_i, |F_i|, ρ(F_i))` triples, listed in non-increasing order,
//! with the two largest `x_i` equal (so the pool is exactly `x_1`
//! elements). The general space (small `n` only) allows any overlap pattern,
//! described by how many elements lie in exactly each set of atoms.

use std::collections::HashSet;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundsError, Branch};
use crate::construction::{params_of_config, validate_atom_config, Atom, AtomConfiguration, ConstructionError};

/// Default ground-set limit for the pool search.
pub const SEARCH_CAP: usize = 14;
/// Ground-set limit for the general search.
pub const GENERAL_CAP: usize = 8;
/// Atom limit for the general search.
pub const GENERAL_ATOM_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub max_n: usize,
    /// Allow arbitrary overlap patterns instead of a single pool.
    pub general: bool,
    /// Accept `min η ≥ δ−1` and `max ρ ≤ r` instead of equality.
    pub relaxed: bool,
    /// Stop after this many configurations.
    pub max_configs: Option<usize>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_n: SEARCH_CAP, general: false, relaxed: false, max_configs: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("no configuration exists in the search space")]
    NoConfiguration,
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// `(x, size, rank)`: pool overlap, atom size, atom rank.
type Triple = (usize, usize, usize);

struct PoolSearch<'a> {
    r: usize,
    delta: usize,
    out: &'a mut Vec<Vec<Triple>>,
}

impl PoolSearch<'_> {
    fn extend(&mut self, list: &mut Vec<Triple>, remaining: usize) {
        if remaining == 0 {
            self.out.push(list.clone());
            return;
        }
        let prev = *list.last().expect("seeded with the first atom");
        let pool = list[0].0;
        for x in (0..=prev.0.min(pool)).rev() {
            for rho in (x + 1..=self.r).rev() {
                let lo = rho + self.delta - 1;
                let hi = x + remaining;
                for size in (lo..=hi).rev() {
                    if (x, size, rho) > prev {
                        continue;
                    }
                    list.push((x, size, rho));
                    self.extend(list, remaining - (size - x));
                    list.pop();
                }
            }
        }
    }
}

fn pool_triples(n: usize, r: usize, delta: usize) -> Vec<Vec<Triple>> {
    let mut out = Vec::new();
    let mut search = PoolSearch { r, delta, out: &mut out };
    for x in 0..r {
        for rho in x + 1..=r {
            // the first atom brings the whole pool plus its private part
            for size in rho + delta - 1..=n {
                let mut list = vec![(x, size, rho)];
                search.extend(&mut list, n - size);
            }
        }
    }
    // the pool is exactly the largest overlap, shared by at least two atoms
    out.retain(|l| if l.len() == 1 { l[0].0 == 0 } else { l[0].0 == l[1].0 });
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn materialize_pool(list: &[Triple], k: usize) -> AtomConfiguration {
    let pool = list[0].0;
    let mut next = pool;
    let atoms = list
        .iter()
        .map(|&(x, size, rho)| {
            let private = size - x;
            let elements = (0..x).chain(next..next + private);
            next += private;
            Atom::new(elements, rho)
        })
        .collect();
    AtomConfiguration::new(next, k, atoms)
}

/// Element-type counts: entry `t - 1` is the number of elements lying in
/// exactly the atoms of bitmask `t`.
fn general_configs(n: usize, k: usize, r: usize, delta: usize) -> Vec<AtomConfiguration> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for m in 1..=GENERAL_ATOM_CAP.min(n / delta) {
        let types = (1usize << m) - 1;
        let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
        let mut counts = vec![0usize; types];
        compositions(n, &mut counts, 0, &mut |counts| {
            let size = |i: usize| (1..=types).filter(|t| t >> i & 1 == 1).map(|t| counts[t - 1]).sum::<usize>();
            let overlap = |i: usize| {
                (1..=types).filter(|&t| t >> i & 1 == 1 && t.count_ones() > 1).map(|t| counts[t - 1]).sum::<usize>()
            };
            let sizes: Vec<usize> = (0..m).map(size).collect();
            let overlaps: Vec<usize> = (0..m).map(overlap).collect();
            // ρ_i ranges over (overlap_i, min(r, |F_i| − δ + 1)]
            let ranges: Vec<std::ops::RangeInclusive<usize>> = (0..m)
                .map(|i| overlaps[i] + 1..=r.min((sizes[i] + 1).saturating_sub(delta)))
                .collect();
            if ranges.iter().any(|rg| rg.is_empty()) {
                return;
            }
            for ranks in ranges.into_iter().multi_cartesian_product() {
                let key = perms
                    .iter()
                    .map(|p| {
                        let relabel = |t: usize| (0..m).filter(|&i| t >> p[i] & 1 == 1).fold(0, |a, i| a | 1 << i);
                        let mut c = vec![0usize; types];
                        for t in 1..=types {
                            c[relabel(t) - 1] = counts[t - 1];
                        }
                        let rk: Vec<usize> = (0..m).map(|i| ranks[p[i]]).collect();
                        (rk, c)
                    })
                    .min()
                    .expect("at least one permutation");
                if !seen.insert((m, key)) {
                    continue;
                }
                out.push(materialize_general(m, counts, &ranks, k));
            }
        });
    }
    out
}

fn compositions(total: usize, parts: &mut Vec<usize>, at: usize, f: &mut dyn FnMut(&[usize])) {
    if at + 1 == parts.len() {
        parts[at] = total;
        f(parts);
        return;
    }
    for v in (0..=total).rev() {
        parts[at] = v;
        compositions(total - v, parts, at + 1, f);
    }
}

fn materialize_general(m: usize, counts: &[usize], ranks: &[usize], k: usize) -> AtomConfiguration {
    let mut order: Vec<usize> = (1..=counts.len()).collect();
    order.sort_by_key(|&t| (std::cmp::Reverse(t.count_ones()), t));
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut next = 0;
    for t in order {
        for _ in 0..counts[t - 1] {
            for (i, atom) in members.iter_mut().enumerate() {
                if t >> i & 1 == 1 {
                    atom.push(next);
                }
            }
            next += 1;
        }
    }
    let atoms = members.into_iter().zip(ranks).map(|(e, &rho)| Atom::new(e, rho)).collect();
    AtomConfiguration::new(next, k, atoms)
}

fn in_target(cfg: &AtomConfiguration, r: usize, delta: usize, relaxed: bool) -> bool {
    let min_eta = cfg.atoms.iter().map(Atom::nullity).min().unwrap_or(0);
    let max_rho = cfg.atoms.iter().map(|a| a.rho).max().unwrap_or(0);
    if relaxed {
        min_eta + 1 >= delta && max_rho <= r
    } else {
        min_eta + 1 == delta && max_rho == r
    }
}

/// Every valid configuration in the search space for `(n, k, r, δ)`.
///
/// Empty when `0 < r < k ≤ n` or `δ ≥ 2` fails.
pub fn enumerate_configs(
    n: usize,
    k: usize,
    r: usize,
    delta: usize,
    limits: SearchLimits,
) -> Result<Vec<AtomConfiguration>, SearchError> {
    if n > limits.max_n {
        return Err(SearchError::TooLarge(format!("n = {n} exceeds the search cap {}", limits.max_n)));
    }
    if limits.general && n > GENERAL_CAP {
        return Err(SearchError::TooLarge(format!("general search needs n ≤ {GENERAL_CAP}, got {n}")));
    }
    if !(0 < r && r < k && k <= n) || delta < 2 {
        return Ok(Vec::new());
    }
    let candidates = if limits.general {
        general_configs(n, k, r, delta)
    } else {
        pool_triples(n, r, delta).iter().map(|l| materialize_pool(l, k)).collect()
    };
    Ok(candidates
        .into_iter()
        .filter(|c| in_target(c, r, delta, limits.relaxed) && validate_atom_config(c).passes())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub delta: usize,
    pub best_d: usize,
    pub witness: AtomConfiguration,
    pub perfect: bool,
    pub singleton: i64,
    pub configs_examined: usize,
    /// False when `max_configs` cut the search short.
    pub exhausted: bool,
    /// `"single_pool"` or `"general"`; the pool space may miss configurations.
    pub space: &'static str,
    pub relaxed: bool,
}

/// The largest distance over [`enumerate_configs`], with the first witness
/// in enumeration order.
pub fn search_dmax(
    n: usize,
    k: usize,
    r: usize,
    delta: usize,
    limits: SearchLimits,
) -> Result<SearchResult, SearchError> {
    let configs = enumerate_configs(n, k, r, delta, limits)?;
    let cut = limits.max_configs.unwrap_or(usize::MAX);
    let exhausted = configs.len() <= cut;
    let mut best: Option<(usize, &AtomConfiguration)> = None;
    let mut examined = 0;
    for cfg in configs.iter().take(cut) {
        examined += 1;
        let d = params_of_config(cfg)?.d;
        if best.is_none_or(|(b, _)| d > b) {
            best = Some((d, cfg));
        }
    }
    let (best_d, witness) = best.ok_or(SearchError::NoConfiguration)?;
    let singleton = bounds::singleton_bound(n as i64, k as i64, r as i64, delta as i64)?;
    Ok(SearchResult {
        n,
        k,
        r,
        delta,
        best_d,
        witness: witness.clone(),
        perfect: best_d as i64 == singleton,
        singleton,
        configs_examined: examined,
        exhausted,
        space: if limits.general { "general" } else { "single_pool" },
        relaxed: limits.relaxed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TightnessVerdict {
    /// A configuration meets the Singleton bound, so the upper bound does
    /// not apply.
    NotApplicable { best_d: usize, singleton: i64 },
    Checked { best_d: usize, d_b: i64, branch: Branch, within_bound: bool, tight: bool },
}

impl TightnessVerdict {
    pub fn violates(&self) -> bool {
        matches!(self, TightnessVerdict::Checked { within_bound: false, .. })
    }
}

/// Compares the search optimum with `d_b` at a point without a perfect
/// configuration.
pub fn check_tightness(
    n: usize,
    k: usize,
    r: usize,
    delta: usize,
    limits: SearchLimits,
) -> Result<TightnessVerdict, SearchError> {
    let (d_b, branch) = bounds::theorem42_bound(n as i64, k as i64, r as i64, delta as i64)?;
    let result = search_dmax(n, k, r, delta, limits)?;
    if result.perfect {
        return Ok(TightnessVerdict::NotApplicable { best_d: result.best_d, singleton: result.singleton });
    }
    let best = result.best_d as i64;
    Ok(TightnessVerdict::Checked {
        best_d: result.best_d,
        d_b,
        branch,
        within_bound: best <= d_b,
        tight: best == d_b,
    })
}
