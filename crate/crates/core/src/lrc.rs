//! LRC parameters read off a matroid: distance from the coatoms of the
//! cyclic-flat lattice, and locality certificates.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds;
use crate::matroid::{Matroid, MatroidError};
use crate::subset::SubsetMask;

/// Largest ground set searched by [`verify_locality`] unless overridden.
pub const LOCALITY_SEARCH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LrcError {
    #[error("matroid has coloops (the top cyclic flat is not the ground set)")]
    HasColoops,
    #[error("matroid has rank zero")]
    ZeroRank,
    #[error("no locality set for elements {0:?}")]
    NoLocality(Vec<usize>),
    #[error("ground set of {n} elements exceeds the locality search cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("certificate rejected for element {element}: {reason}")]
    BadCertificate { element: usize, reason: String },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// `(n, k, d, r, δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LrcParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub r: usize,
    pub delta: usize,
}

impl LrcParams {
    pub fn new(n: usize, k: usize, d: usize, r: usize, delta: usize) -> Result<Self, LrcError> {
        let p = Self { n, k, d, r, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), LrcError> {
        if !(0 < self.r && self.r <= self.k && self.k <= self.n) {
            return Err(LrcError::BadParams(format!("need 0 < r ≤ k ≤ n, got {self}")));
        }
        if self.d < 1 || self.delta < 2 {
            return Err(LrcError::BadParams(format!("need d ≥ 1 and δ ≥ 2, got {self}")));
        }
        Ok(())
    }

    /// `n − k + 1 − (⌈k/r⌉ − 1)(δ − 1)`.
    pub fn singleton_bound(&self) -> i64 {
        bounds::singleton_bound(self.n as i64, self.k as i64, self.r as i64, self.delta as i64)
            .expect("validated parameters")
    }
}

impl fmt::Display for LrcParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.n, self.k, self.d, self.r, self.delta)
    }
}

/// Whether `p` meets the generalized Singleton bound with equality.
pub fn is_perfect(p: &LrcParams) -> bool {
    p.d as i64 == p.singleton_bound()
}

/// `n − k + 1 − max{η(Z) : Z a coatom of the cyclic-flat lattice}`.
pub fn global_distance(m: &Matroid) -> Result<usize, LrcError> {
    let k = m.rank(&m.ground())?;
    if k == 0 {
        return Err(LrcError::ZeroRank);
    }
    let lattice = m.lattice()?;
    if lattice.top().flat != m.ground() {
        return Err(LrcError::HasColoops);
    }
    let worst = lattice.coatoms().map(|z| z.nullity()).max().unwrap_or(0);
    Ok(m.ground_size() - k + 1 - worst)
}

/// Distance of `M|S` for a cyclic set `S` of positive rank.
pub fn restricted_distance(m: &Matroid, s: &SubsetMask) -> Result<usize, LrcError> {
    global_distance(&m.restrict(s)?)
}

/// Map from each element to a locality set containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocalityCertificate {
    sets: BTreeMap<usize, Vec<usize>>,
}

impl LocalityCertificate {
    pub fn new(sets: BTreeMap<usize, Vec<usize>>) -> Self {
        let sets = sets
            .into_iter()
            .map(|(x, mut s)| {
                s.sort_unstable();
                s.dedup();
                (x, s)
            })
            .collect();
        Self { sets }
    }

    pub fn get(&self, element: usize) -> Option<&[usize]> {
        self.sets.get(&element).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.sets.iter().map(|(&x, s)| (x, s.as_slice()))
    }

    /// The distinct sets, sorted.
    pub fn distinct_sets(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<_> = self.sets.values().cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    /// Re-checks every entry against `m` independently of how it was found.
    pub fn check(&self, m: &Matroid, r: usize, delta: usize) -> Result<(), LrcError> {
        let n = m.ground_size();
        for x in 0..n {
            let bad = |reason: &str| LrcError::BadCertificate { element: x, reason: reason.into() };
            let s = self.get(x).ok_or_else(|| bad("missing entry"))?;
            let mask = SubsetMask::from_indices(n, s.iter().copied())
                .map_err(|e| bad(&e.to_string()))?;
            if !mask.contains(x) {
                return Err(bad("set does not contain the element"));
            }
            if mask.len() > r + delta - 1 {
                return Err(bad("set larger than r + δ − 1"));
            }
            if !m.is_cyclic(&mask)? {
                return Err(bad("set is not cyclic"));
            }
            if m.rank(&mask)? == 0 {
                return Err(bad("set has rank zero"));
            }
            if restricted_distance(m, &mask)? < delta {
                return Err(bad("restricted distance below δ"));
            }
        }
        Ok(())
    }
}

/// Search options for [`verify_locality`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalitySearch {
    pub cap: usize,
}

impl Default for LocalitySearch {
    fn default() -> Self {
        Self { cap: LOCALITY_SEARCH_CAP }
    }
}

/// Finds, for every element `x`, the smallest (then lexicographically first)
/// cyclic set `S ∋ x` with `|S| ≤ r + δ − 1`, `ρ(S) > 0` and `d(M|S) ≥ δ`.
pub fn verify_locality(m: &Matroid, r: usize, delta: usize) -> Result<LocalityCertificate, LrcError> {
    verify_locality_with(m, r, delta, LocalitySearch::default())
}

pub fn verify_locality_with(
    m: &Matroid,
    r: usize,
    delta: usize,
    opts: LocalitySearch,
) -> Result<LocalityCertificate, LrcError> {
    let partial = partial_locality(m, r, delta, opts)?;
    if !partial.uncovered.is_empty() {
        return Err(LrcError::NoLocality(partial.uncovered));
    }
    Ok(partial.certificate)
}

/// Locality sets for the elements that have one, and the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialLocality {
    pub certificate: LocalityCertificate,
    pub uncovered: Vec<usize>,
}

/// The search behind [`verify_locality`], keeping partial results.
pub fn partial_locality(
    m: &Matroid,
    r: usize,
    delta: usize,
    opts: LocalitySearch,
) -> Result<PartialLocality, LrcError> {
    let n = m.ground_size();
    if delta < 2 {
        return Err(LrcError::BadParams(format!("δ = {delta} < 2")));
    }
    if n > opts.cap {
        return Err(LrcError::TooLarge { n, cap: opts.cap });
    }
    let table = m.rank_table()?;
    let full = table[table.len() - 1] as usize;
    if r < 1 || r > full {
        return Err(LrcError::BadParams(format!("need 1 ≤ r ≤ ρ(E) = {full}, got r = {r}")));
    }
    let limit = (r + delta - 1).min(n);
    let rank = |bits: u64| table[bits as usize] as usize;

    // S is a locality set iff it is cyclic, has positive rank and no deletion
    // of δ−1 elements drops its rank
    let qualifies = |s: SubsetMask| {
        let bits = s.bits();
        let rs = rank(bits);
        if rs == 0 || s.iter().any(|e| rank(bits & !(1 << e)) != rs) {
            return false;
        }
        s.iter().combinations((delta - 1).min(s.len())).all(|x| {
            let removed = x.iter().fold(0u64, |acc, &e| acc | 1 << e);
            rank(bits & !removed) == rs
        })
    };

    let mut candidates: Vec<SubsetMask> = (1..1u64 << n)
        .filter(|b| b.count_ones() as usize <= limit)
        .map(|b| SubsetMask::from_bits_unchecked(b, n))
        .collect();
    candidates.sort();

    let mut found: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut uncovered = m.ground();
    for s in candidates {
        if uncovered.is_empty() {
            break;
        }
        let fresh = s.intersection(&uncovered);
        if fresh.is_empty() || !qualifies(s) {
            continue;
        }
        for x in fresh.iter() {
            found.insert(x, s.to_vec());
        }
        uncovered = uncovered.difference(&s);
    }
    Ok(PartialLocality {
        certificate: LocalityCertificate::new(found),
        uncovered: uncovered.to_vec(),
    })
}

/// `(n, k, d, r, δ)` of `m`, after certifying locality `(r, δ)`.
pub fn lrc_params(
    m: &Matroid,
    r: usize,
    delta: usize,
) -> Result<(LrcParams, LocalityCertificate), LrcError> {
    let d = global_distance(m)?;
    let k = m.rank(&m.ground())?;
    let cert = verify_locality(m, r, delta)?;
    Ok((LrcParams::new(m.ground_size(), k, d, r, delta)?, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1() -> Matroid {
        let f1 = SubsetMask::from_indices(8, 0..4).unwrap();
        let f2 = SubsetMask::from_indices(8, 4..8).unwrap();
        Matroid::from_cyclic_flats(
            8,
            &[
                (SubsetMask::empty(8).unwrap(), 0),
                (f1, 3),
                (f2, 3),
                (SubsetMask::full(8).unwrap(), 5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn uniform_distance() {
        for n in 2..8 {
            for k in 1..n {
                assert_eq!(global_distance(&Matroid::uniform(k, n).unwrap()), Ok(n - k + 1));
            }
        }
    }

    #[test]
    fn c1_distance_and_locality() {
        let m = c1();
        assert_eq!(global_distance(&m), Ok(3));
        let cert = verify_locality(&m, 3, 2).unwrap();
        assert_eq!(cert.get(1), Some(&[0, 1, 2, 3][..]));
        assert_eq!(cert.get(6), Some(&[4, 5, 6, 7][..]));
        cert.check(&m, 3, 2).unwrap();
    }

    #[test]
    fn uniform_locality_uses_three_sets() {
        let m = Matroid::uniform(2, 4).unwrap();
        let cert = verify_locality(&m, 2, 2).unwrap();
        assert_eq!(cert.len(), 4);
        assert_eq!(cert.get(0), Some(&[0, 1, 2][..]));
        assert_eq!(cert.get(3), Some(&[0, 1, 3][..]));
        assert_eq!(restricted_distance(&m, &SubsetMask::from_indices(4, [0, 1, 2]).unwrap()), Ok(2));
    }

    #[test]
    fn free_matroid_has_no_locality() {
        let m = Matroid::free(4).unwrap();
        assert_eq!(verify_locality(&m, 2, 2), Err(LrcError::NoLocality(vec![0, 1, 2, 3])));
        assert_eq!(global_distance(&m), Err(LrcError::HasColoops));
    }

    #[test]
    fn zero_rank_rejected() {
        let m = Matroid::uniform(0, 3).unwrap();
        assert_eq!(global_distance(&m), Err(LrcError::ZeroRank));
    }

    #[test]
    fn locality_search_cap() {
        let m = Matroid::uniform(3, 17).unwrap();
        assert_eq!(verify_locality(&m, 3, 2), Err(LrcError::TooLarge { n: 17, cap: 16 }));
        let cert = verify_locality_with(&m, 3, 2, LocalitySearch { cap: 20 }).unwrap();
        assert_eq!(cert.len(), 17);
    }

    #[test]
    fn perfectness() {
        assert!(is_perfect(&LrcParams::new(10, 5, 5, 3, 2).unwrap()));
        assert!(is_perfect(&LrcParams::new(8, 5, 3, 3, 2).unwrap()));
        assert!(!is_perfect(&LrcParams::new(8, 5, 2, 3, 2).unwrap()));
        assert!(LrcParams::new(8, 5, 2, 6, 2).is_err());
        assert_eq!(LrcParams::new(8, 5, 3, 3, 2).unwrap().to_string(), "(8,5,3,3,2)");
    }

    #[test]
    fn certificate_json_is_element_map() {
        let m = Matroid::uniform(2, 3).unwrap();
        let cert = verify_locality(&m, 2, 2).unwrap();
        assert_eq!(serde_json::to_string(&cert).unwrap(), r#"{"0":[0,1,2],"1":[0,1,2],"2":[0,1,2]}"#);
    }
}
