//! Explicit configurations meeting the generalized Singleton bound when
//! `⌈k/r⌉ = 2`.
//!
//! All atoms have size `r+δ−1` and rank `r`. A pool `X` of `a` elements
//! absorbs the `b` surplus: the first `⌈b/a⌉` atoms contain all of `X`, the
//! next one the first `b − (⌈b/a⌉−1)a` elements of it, the rest none.

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{ceil_div, Hypothesis};
use crate::construction::{Atom, AtomConfiguration};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PerfectError {
    #[error("hypothesis not met: {0} violated")]
    HypothesisNotMet(Hypothesis),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PerfectParams {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub delta: usize,
    /// `r⌈k/r⌉ − k`
    pub a: usize,
    /// `(r+δ−1)⌈n/(r+δ−1)⌉ − n`
    pub b: usize,
    /// `⌈n/(r+δ−1)⌉`, the number of atoms
    pub m: usize,
    /// `⌈b/a⌉`, the atoms holding all of `X`
    pub full_pool_atoms: usize,
}

/// Checks the hypotheses in a fixed order and names the first that fails.
pub fn check_theorem41_hypotheses(
    n: usize,
    k: usize,
    r: usize,
    delta: usize,
) -> Result<PerfectParams, PerfectError> {
    let fail = |h| Err(PerfectError::HypothesisNotMet(h));
    let (n, k, r, delta) = (n as i64, k as i64, r as i64, delta as i64);
    if r <= 0 {
        return fail(Hypothesis::RPositive);
    }
    if r >= k {
        return fail(Hypothesis::RBelowK);
    }
    if delta < 2 {
        return fail(Hypothesis::DeltaAtLeastTwo);
    }
    let groups = ceil_div(k, r);
    if k > n - groups * (delta - 1) {
        return fail(Hypothesis::KFitsLocality);
    }
    if groups != 2 {
        return fail(Hypothesis::CeilKOverRIsTwo);
    }
    let span = r + delta - 1;
    let a = r * groups - k;
    let m = ceil_div(n, span);
    let b = span * m - n;
    if b <= a {
        return fail(Hypothesis::BExceedsA);
    }
    if a < groups - 1 {
        return fail(Hypothesis::ALowerBound);
    }
    let full_pool_atoms = ceil_div(b, a);
    if m < full_pool_atoms + 1 {
        return fail(Hypothesis::AtomCount);
    }
    let u = |x: i64| x as usize;
    Ok(PerfectParams {
        n: u(n),
        k: u(k),
        r: u(r),
        delta: u(delta),
        a: u(a),
        b: u(b),
        m: u(m),
        full_pool_atoms: u(full_pool_atoms),
    })
}

pub fn build_perfect_config(
    n: usize,
    k: usize,
    r: usize,
    delta: usize,
) -> Result<AtomConfiguration, PerfectError> {
    let p = check_theorem41_hypotheses(n, k, r, delta)?;
    let span = r + delta - 1;
    let t = p.full_pool_atoms;
    let partial = p.b - (t - 1) * p.a;
    let mut next = p.a;
    let atoms = (0..p.m)
        .map(|i| {
            let pooled = match i {
                _ if i < t => p.a,
                _ if i == t => partial,
                _ => 0,
            };
            let private = span - pooled;
            let elements = (0..pooled).chain(next..next + private);
            next += private;
            Atom::new(elements, r)
        })
        .collect();
    debug_assert_eq!(next, n);
    Ok(AtomConfiguration::new(next, k, atoms))
}
