//! Matroids defined by a family of atoms `F_1..F_m`, their ranks and a
//! global rank `k`.
//!
//! The cyclic flats are the unions `F_I` with `ρ(F_I) < k`, plus `E`, where
//! `ρ(F_I) = min{|F_I| − Σ_{i∈I} η(F_i), k}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lrc::{LocalityCertificate, LrcError, LrcParams};
use crate::matroid::{CyclicFlat, CyclicFlatLattice, Matroid, MatroidError};
use crate::subset::{SubsetMask, MAX_ELEMENTS};

/// Atom count up to which `Z_{<k}` is enumerated without a node budget.
pub const ATOM_CAP: usize = 20;
/// Node budget for the `Z_{<k}` enumeration above [`ATOM_CAP`].
pub const ENUMERATION_BUDGET: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub elements: Vec<usize>,
    pub rho: usize,
}

impl Atom {
    pub fn new(elements: impl IntoIterator<Item = usize>, rho: usize) -> Self {
        let mut elements: Vec<usize> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        Self { elements, rho }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `|F_i| − ρ(F_i)`, saturating at zero for malformed atoms.
    pub fn nullity(&self) -> usize {
        self.len().saturating_sub(self.rho)
    }
}

/// Atoms over the ground set `{0, .., n-1}` with global rank `k`.
///
/// Atom indices in reports and DFS output are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct AtomConfiguration {
    n: usize,
    pub k: usize,
    pub atoms: Vec<Atom>,
}

#[derive(Serialize, Deserialize)]
struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    k: usize,
    atoms: Vec<Atom>,
}

impl TryFrom<RawConfig> for AtomConfiguration {
    type Error = String;

    fn try_from(raw: RawConfig) -> Result<Self, String> {
        let inferred =
            raw.atoms.iter().flat_map(|a| a.elements.iter()).max().map_or(0, |&e| e + 1);
        let n = raw.n.unwrap_or(inferred);
        if inferred > n {
            return Err(format!("element {} outside the ground set of size {n}", inferred - 1));
        }
        let atoms = raw.atoms.into_iter().map(|a| Atom::new(a.elements, a.rho)).collect();
        Ok(Self { n, k: raw.k, atoms })
    }
}

impl From<AtomConfiguration> for RawConfig {
    fn from(c: AtomConfiguration) -> Self {
        let inferred = c.atoms.iter().flat_map(|a| a.elements.iter()).max().map_or(0, |&e| e + 1);
        RawConfig { n: (inferred != c.n).then_some(c.n), k: c.k, atoms: c.atoms }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid atom configuration: {0}")]
    InvalidConfig(ConfigReport),
    #[error("Z_<k enumeration over {m} atoms exceeded its budget of {budget} nodes")]
    TooManyAtoms { m: usize, budget: usize },
    #[error("ground set of {0} elements is too large to materialise a matroid")]
    GroundTooLarge(usize),
    #[error(transparent)]
    Params(#[from] LrcError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// A violated condition on an atom configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum ConfigViolation {
    /// No atoms, `k = 0`, or an element index outside `0..n`.
    Structure { reason: String },
    /// (i) `0 < ρ(F_j) < |F_j|`
    AtomRank { atom: usize, rank: usize, size: usize },
    /// (ii) the atoms cover `E`
    Uncovered { elements: Vec<usize> },
    /// (iii) `k ≤ |F_[m]| − Σ η(F_i)`
    GlobalRank { k: usize, capacity: usize },
    /// (iv) `|F_{[m]∖{j}} ∩ F_j| < ρ(F_j)`
    Overlap { atom: usize, overlap: usize, rank: usize },
}

impl ConfigViolation {
    /// Roman numeral of the violated condition, or `"structure"`.
    pub fn label(&self) -> &'static str {
        match self {
            ConfigViolation::Structure { .. } => "structure",
            ConfigViolation::AtomRank { .. } => "i",
            ConfigViolation::Uncovered { .. } => "ii",
            ConfigViolation::GlobalRank { .. } => "iii",
            ConfigViolation::Overlap { .. } => "iv",
        }
    }
}

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigViolation::Structure { reason } => write!(f, "structure: {reason}"),
            ConfigViolation::AtomRank { atom, rank, size } => {
                write!(f, "(i) atom {atom}: need 0 < ρ = {rank} < |F| = {size}")
            }
            ConfigViolation::Uncovered { elements } => {
                write!(f, "(ii) elements {elements:?} lie in no atom")
            }
            ConfigViolation::GlobalRank { k, capacity } => {
                write!(f, "(iii) k = {k} exceeds |F_[m]| − Ση = {capacity}")
            }
            ConfigViolation::Overlap { atom, overlap, rank } => {
                write!(f, "(iv) atom {atom}: overlap {overlap} with the other atoms is not below ρ = {rank}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ConfigReport {
    pub violations: Vec<ConfigViolation>,
}

impl ConfigReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ConfigReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passes() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Fixed-width bit set over `0..n`, for ground sets beyond one machine word.
#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn of(n: usize, elements: &[usize]) -> Self {
        let mut b = Bits::new(n);
        for &e in elements {
            b.0[e / 64] |= 1 << (e % 64);
        }
        b
    }

    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A member of `Z_{<k}`: the atom indices `I` and `ρ(F_I)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionFlat {
    pub atoms: Vec<usize>,
    pub elements: Vec<usize>,
    pub rank: usize,
    /// `Σ_{i∈I} η(F_i)`
    pub nullity_sum: usize,
}

impl AtomConfiguration {
    pub fn new(n: usize, k: usize, atoms: Vec<Atom>) -> Self {
        let atoms = atoms.into_iter().map(|a| Atom::new(a.elements, a.rho)).collect();
        Self { n, k, atoms }
    }

    /// Ground set size taken as one past the largest element.
    pub fn from_atoms(k: usize, atoms: Vec<Atom>) -> Self {
        let n = atoms.iter().flat_map(|a| a.elements.iter()).max().map_or(0, |&e| e + 1);
        Self::new(n, k, atoms)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.atoms.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    fn atom_bits(&self) -> Vec<Bits> {
        self.atoms.iter().map(|a| Bits::of(self.n, &a.elements)).collect()
    }

    fn ensure_valid(&self) -> Result<(), ConstructionError> {
        let report = validate_atom_config(self);
        if report.passes() {
            Ok(())
        } else {
            Err(ConstructionError::InvalidConfig(report))
        }
    }

    fn pairwise_disjoint(&self) -> bool {
        let total: usize = self.atoms.iter().map(Atom::len).sum();
        let mut seen = Bits::new(self.n);
        for b in self.atom_bits() {
            seen.or_assign(&b);
        }
        seen.count() == total
    }
}

/// Checks conditions (i)–(iv), listing every violation with its witness.
pub fn validate_atom_config(cfg: &AtomConfiguration) -> ConfigReport {
    let mut report = ConfigReport::default();
    let n = cfg.n;
    let push = |r: &mut ConfigReport, v| r.violations.push(v);
    if cfg.atoms.is_empty() {
        push(&mut report, ConfigViolation::Structure { reason: "no atoms".into() });
        return report;
    }
    if cfg.k == 0 {
        push(&mut report, ConfigViolation::Structure { reason: "k must be positive".into() });
    }
    for (j, a) in cfg.atoms.iter().enumerate() {
        if let Some(&e) = a.elements.iter().find(|&&e| e >= n) {
            push(
                &mut report,
                ConfigViolation::Structure {
                    reason: format!("atom {j} holds element {e} outside 0..{n}"),
                },
            );
            return report;
        }
    }

    for (j, a) in cfg.atoms.iter().enumerate() {
        if a.rho == 0 || a.rho >= a.len() {
            push(&mut report, ConfigViolation::AtomRank { atom: j, rank: a.rho, size: a.len() });
        }
    }

    let bits = cfg.atom_bits();
    let mut all = Bits::new(n);
    for b in &bits {
        all.or_assign(b);
    }
    let uncovered: Vec<usize> = (0..n).filter(|&e| all.0[e / 64] >> (e % 64) & 1 == 0).collect();
    if !uncovered.is_empty() {
        push(&mut report, ConfigViolation::Uncovered { elements: uncovered });
    }

    let capacity =
        all.count().saturating_sub(cfg.atoms.iter().map(Atom::nullity).sum::<usize>());
    if cfg.k > capacity {
        push(&mut report, ConfigViolation::GlobalRank { k: cfg.k, capacity });
    }

    for j in 0..bits.len() {
        let mut others = Bits::new(n);
        for (i, b) in bits.iter().enumerate() {
            if i != j {
                others.or_assign(b);
            }
        }
        let overlap = others.and_count(&bits[j]);
        if overlap >= cfg.atoms[j].rho {
            push(
                &mut report,
                ConfigViolation::Overlap { atom: j, overlap, rank: cfg.atoms[j].rho },
            );
        }
    }
    report
}

/// `ρ(F_I) = min{|F_I| − Σ_{i∈I} η(F_i), k}` for the atom indices in `set`.
pub fn extend_rank(cfg: &AtomConfiguration, set: &[usize]) -> Result<usize, ConstructionError> {
    cfg.ensure_valid()?;
    let mut union = Bits::new(cfg.n);
    let mut nullity = 0;
    for &i in set {
        let atom = cfg.atoms.get(i).ok_or_else(|| {
            ConstructionError::InvalidConfig(ConfigReport {
                violations: vec![ConfigViolation::Structure {
                    reason: format!("atom index {i} out of range"),
                }],
            })
        })?;
        union.or_assign(&Bits::of(cfg.n, &atom.elements));
        nullity += atom.nullity();
    }
    Ok((union.count() - nullity).min(cfg.k))
}

/// Every `I ≠ ∅` with `ρ(F_I) < k`, in depth-first order over ascending
/// index lists.
///
/// Adding an atom to `I` strictly increases `|F_I| − Σ η` on a valid
/// configuration, so once a union reaches rank `k` none of its supersets
/// need visiting.
pub fn z_below_k(cfg: &AtomConfiguration) -> Result<Vec<UnionFlat>, ConstructionError> {
    cfg.ensure_valid()?;
    let bits = cfg.atom_bits();
    let m = cfg.m();
    let mut out = Vec::new();
    let mut visited = 0usize;
    let mut stack: Vec<(Vec<usize>, Bits, usize)> = (0..m)
        .rev()
        .map(|i| (vec![i], bits[i].clone(), cfg.atoms[i].nullity()))
        .collect();
    while let Some((set, union, nullity)) = stack.pop() {
        visited += 1;
        if m > ATOM_CAP && visited > ENUMERATION_BUDGET {
            return Err(ConstructionError::TooManyAtoms { m, budget: ENUMERATION_BUDGET });
        }
        let rank = union.count() - nullity;
        if rank >= cfg.k {
            continue;
        }
        let last = *set.last().expect("nonempty");
        for j in (last + 1..m).rev() {
            let mut next = union.clone();
            next.or_assign(&bits[j]);
            let mut s = set.clone();
            s.push(j);
            stack.push((s, next, nullity + cfg.atoms[j].nullity()));
        }
        let elements = (0..cfg.n).filter(|&e| union.0[e / 64] >> (e % 64) & 1 == 1).collect();
        out.push(UnionFlat { atoms: set, elements, rank, nullity_sum: nullity });
    }
    Ok(out)
}

/// Largest value of `Σ values[i]` over index sets whose `Σ weights[i]` stays
/// at most `cap`.
pub(crate) fn knapsack_max(weights: &[usize], values: &[usize], cap: usize) -> usize {
    let mut best = vec![0usize; cap + 1];
    for (&w, &v) in weights.iter().zip(values) {
        if w > cap {
            continue;
        }
        for c in (w..=cap).rev() {
            best[c] = best[c].max(best[c - w] + v);
        }
    }
    best[cap]
}

/// `max{Σ_{i∈I} η(F_i) : ρ(F_I) < k}`, zero for `I = ∅`.
fn max_nullity_below_k(cfg: &AtomConfiguration) -> Result<usize, ConstructionError> {
    if cfg.pairwise_disjoint() {
        // for disjoint atoms ρ(F_I) = Σ ρ(F_i), so this is a knapsack
        let weights: Vec<usize> = cfg.atoms.iter().map(|a| a.rho).collect();
        let values: Vec<usize> = cfg.atoms.iter().map(Atom::nullity).collect();
        return Ok(knapsack_max(&weights, &values, cfg.k - 1));
    }
    Ok(z_below_k(cfg)?.iter().map(|z| z.nullity_sum).max().unwrap_or(0))
}

/// Materialises the matroid through its lattice of cyclic flats.
pub fn build_matroid(cfg: &AtomConfiguration) -> Result<Matroid, ConstructionError> {
    cfg.ensure_valid()?;
    let n = cfg.n;
    if n > MAX_ELEMENTS {
        return Err(ConstructionError::GroundTooLarge(n));
    }
    let mask = |elements: &[usize]| SubsetMask::from_indices(n, elements.iter().copied());
    let mut members = vec![
        CyclicFlat::new(SubsetMask::empty(n).map_err(MatroidError::from)?, 0),
        CyclicFlat::new(SubsetMask::full(n).map_err(MatroidError::from)?, cfg.k),
    ];
    for z in z_below_k(cfg)? {
        members.push(CyclicFlat::new(mask(&z.elements).map_err(MatroidError::from)?, z.rank));
    }
    let lattice = CyclicFlatLattice::new(n, members).map_err(MatroidError::from)?;
    Ok(Matroid::from_lattice_trusted(lattice))
}

/// `(n, k, d, r, δ)` with `δ − 1 = min η(F_i)` and `r = max ρ(F_i)`.
pub fn params_of_config(cfg: &AtomConfiguration) -> Result<LrcParams, ConstructionError> {
    cfg.ensure_valid()?;
    let worst = max_nullity_below_k(cfg)?;
    let delta = cfg.atoms.iter().map(Atom::nullity).min().expect("validated") + 1;
    let r = cfg.atoms.iter().map(|a| a.rho).max().expect("validated");
    let d = cfg.n + 1 - cfg.k - worst;
    Ok(LrcParams::new(cfg.n, cfg.k, d, r, delta)?)
}

fn min_nullity(cfg: &AtomConfiguration) -> usize {
    cfg.atoms.iter().map(Atom::nullity).min().unwrap_or(0)
}

/// For each atom, its first `ρ(F_i) + δ − 1` elements.
pub fn locality_sets_of_config(cfg: &AtomConfiguration) -> Result<Vec<Vec<usize>>, ConstructionError> {
    cfg.ensure_valid()?;
    let extra = min_nullity(cfg);
    Ok(cfg.atoms.iter().map(|a| a.elements[..a.rho + extra].to_vec()).collect())
}

/// A locality certificate read off the atoms: each element gets the
/// lexicographically first `(ρ(F_i) + δ − 1)`-subset of the first atom
/// containing it that also contains the element.
pub fn certificate_of_config(cfg: &AtomConfiguration) -> Result<LocalityCertificate, ConstructionError> {
    cfg.ensure_valid()?;
    let extra = min_nullity(cfg);
    let mut sets = std::collections::BTreeMap::new();
    for a in &cfg.atoms {
        let size = a.rho + extra;
        for &x in &a.elements {
            sets.entry(x).or_insert_with(|| {
                let mut s: Vec<usize> =
                    a.elements.iter().copied().filter(|&e| e != x).take(size - 1).collect();
                s.push(x);
                s
            });
        }
    }
    Ok(LocalityCertificate::new(sets))
}
