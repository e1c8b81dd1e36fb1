//! Closed-form minimum-distance bounds for `(n, k, r, δ)` parameter tuples.
//!
//! Everything here is exact integer arithmetic, generic over the signed
//! integer width. Every intermediate is overflow-checked; an overflow is an
//! error, never a wrap.

use std::fmt;

use num_traits::{PrimInt, Signed};
use serde::Serialize;
use thiserror::Error;

/// Signed machine integers usable by the bound formulas.
pub trait BoundInt:
    PrimInt + Signed + fmt::Debug + fmt::Display + Serialize + Send + Sync + 'static
{
}

impl<T> BoundInt for T where
    T: PrimInt + Signed + fmt::Debug + fmt::Display + Serialize + Send + Sync + 'static
{
}

/// A named inequality on `(n, k, r, δ)` that a formula or construction needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    KPositive,
    RPositive,
    RAtMostK,
    RBelowK,
    KAtMostN,
    DeltaAtLeastTwo,
    KFitsLocality,
    BExceedsA,
    MPositive,
    CeilKOverRIsTwo,
    ALowerBound,
    AtomCount,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::KPositive => "0 < k",
            Hypothesis::RPositive => "0 < r",
            Hypothesis::RAtMostK => "r ≤ k",
            Hypothesis::RBelowK => "r < k",
            Hypothesis::KAtMostN => "k ≤ n",
            Hypothesis::DeltaAtLeastTwo => "δ ≥ 2",
            Hypothesis::KFitsLocality => "k ≤ n − ⌈k/r⌉(δ−1)",
            Hypothesis::BExceedsA => "b > a",
            Hypothesis::MPositive => "⌈n/(r+δ−1)⌉ − 1 ≥ 1",
            Hypothesis::CeilKOverRIsTwo => "⌈k/r⌉ = 2",
            Hypothesis::ALowerBound => "a ≥ ⌈k/r⌉ − 1",
            Hypothesis::AtomCount => "⌈n/(r+δ−1)⌉ ≥ ⌈b/a⌉ + 1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("bad parameters: {0} violated")]
    BadParams(Hypothesis),
    #[error("hypothesis not met: {0} violated")]
    HypothesisNotMet(Hypothesis),
    #[error("the improvement over d_old is only defined on the EQ6 branch")]
    WrongBranch,
    #[error("integer overflow while evaluating a bound")]
    Overflow,
}

type Result<T> = std::result::Result<T, BoundsError>;

fn add<T: BoundInt>(a: T, b: T) -> Result<T> {
    a.checked_add(&b).ok_or(BoundsError::Overflow)
}

fn sub<T: BoundInt>(a: T, b: T) -> Result<T> {
    a.checked_sub(&b).ok_or(BoundsError::Overflow)
}

fn mul<T: BoundInt>(a: T, b: T) -> Result<T> {
    a.checked_mul(&b).ok_or(BoundsError::Overflow)
}

/// `⌈a/b⌉` for `a ≥ 0`, `b > 0`.
pub fn ceil_div<T: BoundInt>(a: T, b: T) -> T {
    debug_assert!(a >= T::zero() && b > T::zero());
    let q = a / b;
    if a % b == T::zero() {
        q
    } else {
        q + T::one()
    }
}

/// `⌊a/b⌋` for `a ≥ 0`, `b > 0`.
pub fn floor_div<T: BoundInt>(a: T, b: T) -> T {
    debug_assert!(a >= T::zero() && b > T::zero());
    a / b
}

fn require(cond: bool, h: Hypothesis) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(BoundsError::HypothesisNotMet(h))
    }
}

/// `0 < r ≤ k ≤ n`, `δ ≥ 2`: the minimum for any of the bounds to make sense.
pub fn check_basic<T: BoundInt>(n: T, k: T, r: T, delta: T) -> Result<()> {
    let bad = |cond: bool, h| if cond { Ok(()) } else { Err(BoundsError::BadParams(h)) };
    bad(k > T::zero(), Hypothesis::KPositive)?;
    bad(r > T::zero(), Hypothesis::RPositive)?;
    bad(r <= k, Hypothesis::RAtMostK)?;
    bad(k <= n, Hypothesis::KAtMostN)?;
    bad(delta >= T::one() + T::one(), Hypothesis::DeltaAtLeastTwo)
}

/// `n − k + 1 − (⌈k/r⌉ − 1)(δ − 1)`.
pub fn singleton_bound<T: BoundInt>(n: T, k: T, r: T, delta: T) -> Result<T> {
    check_basic(n, k, r, delta)?;
    let one = T::one();
    let groups = sub(ceil_div(k, r), one)?;
    sub(add(sub(n, k)?, one)?, mul(groups, sub(delta, one)?)?)
}

/// Derived quantities shared by the improved lower bound and its
/// constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundInputs<T> {
    pub n: T,
    pub k: T,
    pub r: T,
    pub delta: T,
    /// `⌈k/r⌉`
    pub groups: T,
    /// `r + δ − 1`
    pub span: T,
    /// `r⌈k/r⌉ − k`
    pub a: T,
    /// `(r+δ−1)⌈n/(r+δ−1)⌉ − n`
    pub b: T,
    /// `⌈n/(r+δ−1)⌉ − 1`
    pub m: T,
    /// `⌊(r+δ−1−b)/m⌋`
    pub spread: T,
    /// `r+δ−1−b − spread·m`
    pub v: T,
}

/// Checks `0 < r < k ≤ n − ⌈k/r⌉(δ−1)`, `δ ≥ 2`, `b > a` and derives
/// `a, b, m, v`.
pub fn bound_inputs<T: BoundInt>(n: T, k: T, r: T, delta: T) -> Result<BoundInputs<T>> {
    let one = T::one();
    require(r > T::zero(), Hypothesis::RPositive)?;
    require(r < k, Hypothesis::RBelowK)?;
    require(delta >= one + one, Hypothesis::DeltaAtLeastTwo)?;
    let groups = ceil_div(k, r);
    require(k <= sub(n, mul(groups, sub(delta, one)?)?)?, Hypothesis::KFitsLocality)?;
    let span = sub(add(r, delta)?, one)?;
    let a = sub(mul(r, groups)?, k)?;
    let blocks = ceil_div(n, span);
    let b = sub(mul(span, blocks)?, n)?;
    require(b > a, Hypothesis::BExceedsA)?;
    let m = sub(blocks, one)?;
    require(m >= one, Hypothesis::MPositive)?;
    let rest = sub(span, b)?;
    let spread = floor_div(rest, m);
    let v = sub(rest, mul(spread, m)?)?;
    Ok(BoundInputs { n, k, r, delta, groups, span, a, b, m, spread, v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    /// `δ − 1` is covered by the spread: the plain `n−k+1−⌈k/r⌉(δ−1)` bound.
    #[serde(rename = "EQ5")]
    Eq5,
    /// The improved `d_new` bound.
    #[serde(rename = "EQ6")]
    Eq6,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Eq5 => "EQ5",
            Branch::Eq6 => "EQ6",
        })
    }
}

impl<T: BoundInt> BoundInputs<T> {
    fn tail(&self) -> Result<T> {
        let base = add(sub(self.n, self.k)?, T::one())?;
        Ok(base)
    }

    /// `min{v, ⌈k/r⌉ − 1}`
    fn remainder_term(&self) -> T {
        self.v.min(self.groups - T::one())
    }

    /// `n − k + 1 − ⌈k/r⌉(δ−1)`
    pub fn base_value(&self) -> Result<T> {
        sub(self.tail()?, mul(self.groups, sub(self.delta, T::one())?)?)
    }

    /// `n − k + 1 − min{v, ⌈k/r⌉−1} − (⌈k/r⌉−1)(⌊(r+δ−1−b)/m⌋ + δ − 1)`
    pub fn d_new(&self) -> Result<T> {
        let one = T::one();
        let per_group = add(self.spread, sub(self.delta, one)?)?;
        sub(sub(self.tail()?, self.remainder_term())?, mul(self.groups - one, per_group)?)
    }

    /// `n − k + 1 − ⌈k/r⌉(δ−1) + (b − r)`
    pub fn d_old(&self) -> Result<T> {
        add(self.base_value()?, sub(self.b, self.r)?)
    }

    pub fn branch(&self) -> Result<Branch> {
        let covered = add(mul(self.groups - T::one(), self.spread)?, self.remainder_term())?;
        Ok(if self.delta - T::one() <= covered { Branch::Eq5 } else { Branch::Eq6 })
    }

    pub fn d_b(&self) -> Result<(T, Branch)> {
        let branch = self.branch()?;
        let value = match branch {
            Branch::Eq5 => self.base_value()?,
            Branch::Eq6 => self.d_new()?,
        };
        Ok((value, branch))
    }

    /// `⌊(r+δ−1−b)/m⌋ (m − ⌈k/r⌉ + 1)`
    pub fn eq7_rhs(&self) -> Result<T> {
        mul(self.spread, add(sub(self.m, self.groups)?, T::one())?)
    }
}

/// `d_old = n − k + 1 − ⌈k/r⌉(δ−1) + (b − r)`.
pub fn d_old_bound<T: BoundInt>(n: T, k: T, r: T, delta: T) -> Result<T> {
    bound_inputs(n, k, r, delta)?.d_old()
}

/// The two-branch lower bound `d_b` on the best achievable distance.
pub fn theorem42_bound<T: BoundInt>(n: T, k: T, r: T, delta: T) -> Result<(T, Branch)> {
    bound_inputs(n, k, r, delta)?.d_b()
}

/// `(d_new − d_old, ⌊(r+δ−1−b)/m⌋(m − ⌈k/r⌉ + 1))`; only on the EQ6 branch.
pub fn improvement_delta<T: BoundInt>(n: T, k: T, r: T, delta: T) -> Result<(T, T)> {
    let inputs = bound_inputs(n, k, r, delta)?;
    if inputs.branch()? != Branch::Eq6 {
        return Err(BoundsError::WrongBranch);
    }
    Ok((sub(inputs.d_new()?, inputs.d_old()?)?, inputs.eq7_rhs()?))
}

/// Lower bound on the largest nullity sum over `⌈k/r⌉ − 1` atoms when a total
/// nullity `s` is spread as evenly as possible over `m` atoms:
/// `(⌈k/r⌉−1)⌊s/m⌋ + min{⌈k/r⌉−1, s − ⌊s/m⌋m}`.
pub fn even_distribution_bound<T: BoundInt>(s: T, m: T, k: T, r: T) -> Result<T> {
    if m < T::one() {
        return Err(BoundsError::BadParams(Hypothesis::MPositive));
    }
    if k <= T::zero() {
        return Err(BoundsError::BadParams(Hypothesis::KPositive));
    }
    if r <= T::zero() {
        return Err(BoundsError::BadParams(Hypothesis::RPositive));
    }
    if s < T::zero() {
        return Err(BoundsError::Overflow);
    }
    let groups = ceil_div(k, r) - T::one();
    let per = floor_div(s, m);
    let leftover = sub(s, mul(per, m)?)?;
    add(mul(groups, per)?, groups.min(leftover))
}

/// Every bound for one tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundReport<T> {
    pub n: T,
    pub k: T,
    pub r: T,
    pub delta: T,
    pub a: T,
    pub b: T,
    pub m: T,
    pub v: T,
    pub singleton: T,
    pub d_old: T,
    pub d_base: T,
    pub d_new: T,
    pub d_b: T,
    pub branch: Branch,
    /// `d_new − d_old`
    pub delta_improvement: T,
    pub eq7_rhs: T,
}

pub const CSV_HEADER: &str =
    "n,k,r,delta,a,b,m,v,singleton,d_old,d_base,d_new,d_b,branch,delta_improvement,eq7_rhs";

impl<T: BoundInt> BoundReport<T> {
    pub fn compute(n: T, k: T, r: T, delta: T) -> Result<Self> {
        let singleton = singleton_bound(n, k, r, delta)?;
        let inputs = bound_inputs(n, k, r, delta)?;
        let (d_b, branch) = inputs.d_b()?;
        let d_new = inputs.d_new()?;
        let d_old = inputs.d_old()?;
        Ok(Self {
            n,
            k,
            r,
            delta,
            a: inputs.a,
            b: inputs.b,
            m: inputs.m,
            v: inputs.v,
            singleton,
            d_old,
            d_base: inputs.base_value()?,
            d_new,
            d_b,
            branch,
            delta_improvement: sub(d_new, d_old)?,
            eq7_rhs: inputs.eq7_rhs()?,
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.r,
            self.delta,
            self.a,
            self.b,
            self.m,
            self.v,
            self.singleton,
            self.d_old,
            self.d_base,
            self.d_new,
            self.d_b,
            self.branch,
            self.delta_improvement,
            self.eq7_rhs
        )
    }
}
