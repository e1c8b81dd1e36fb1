//! Matroids over at most 64 elements, their derived structures, and the
//! verifiers for the rank and cyclic-flat axiom systems.

mod axioms;
mod lattice;

use std::borrow::Cow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subset::{SubsetError, SubsetMask, MAX_ELEMENTS};

pub use axioms::{verify_rank_axioms, AxiomCheckMode, RankAxiom, RankAxiomReport, RankViolation};
pub use lattice::{
    verify_z_axioms, CyclicFlat, CyclicFlatLattice, LatticeError, ZAxiom, ZAxiomReport,
    ZViolation,
};

/// Default ceiling on `n` for anything that sweeps all `2^n` subsets.
pub const DEFAULT_SWEEP_CAP: usize = 22;

/// Largest `n` for which a full rank table is ever allocated.
pub const RANK_TABLE_LIMIT: usize = 26;

/// Version tag written into serialized matroid documents.
pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("element {index} is outside the ground set of size {n}")]
    OutOfGround { index: usize, n: usize },
    #[error("ground set of {0} elements exceeds the {MAX_ELEMENTS}-element limit")]
    GroundTooLarge(usize),
    #[error("n = {n} exceeds the subset-sweep cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("rank table for n = {n} needs {expected} entries, got {got}")]
    TableSize { n: usize, expected: usize, got: usize },
    #[error("candidate lattice violates the cyclic-flat axioms ({} violations)", .0.violations.len())]
    InvalidLattice(Box<ZAxiomReport>),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unsupported document: {0}")]
    Document(String),
}

impl From<SubsetError> for MatroidError {
    fn from(e: SubsetError) -> Self {
        match e {
            SubsetError::GroundTooLarge(n) => MatroidError::GroundTooLarge(n),
            SubsetError::OutOfGround { index, n } => MatroidError::OutOfGround { index, n },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    /// `ranks[bits]` is the rank of the subset with that bit pattern.
    RankTable(Vec<u8>),
    /// Rank of `X` is `min over Z of ρ(Z) + |X \ Z|`.
    CyclicFlats(CyclicFlatLattice),
}

#[derive(Clone, Debug)]
pub struct Matroid {
    n: usize,
    backend: Backend,
    sweep_cap: usize,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.backend == other.backend
    }
}

impl Matroid {
    /// Wraps a rank table without checking the rank axioms.
    pub fn from_rank_table(n: usize, ranks: Vec<u8>) -> Result<Self, MatroidError> {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundTooLarge(n));
        }
        if n > RANK_TABLE_LIMIT {
            return Err(MatroidError::TooLarge { n, cap: RANK_TABLE_LIMIT });
        }
        let expected = 1usize << n;
        if ranks.len() != expected {
            return Err(MatroidError::TableSize { n, expected, got: ranks.len() });
        }
        Ok(Self { n, backend: Backend::RankTable(ranks), sweep_cap: DEFAULT_SWEEP_CAP })
    }

    /// Tabulates `rank_fn` over every subset of `{0, .., n-1}`.
    pub fn from_rank_fn<F>(n: usize, mut rank_fn: F) -> Result<Self, MatroidError>
    where
        F: FnMut(SubsetMask) -> usize,
    {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundTooLarge(n));
        }
        if n > RANK_TABLE_LIMIT {
            return Err(MatroidError::TooLarge { n, cap: RANK_TABLE_LIMIT });
        }
        let ranks = (0..1u64 << n)
            .map(|bits| {
                let r = rank_fn(SubsetMask::from_bits_unchecked(bits, n));
                u8::try_from(r).expect("rank of a subset of at most 64 elements fits in u8")
            })
            .collect();
        Self::from_rank_table(n, ranks)
    }

    pub fn uniform(k: usize, n: usize) -> Result<Self, MatroidError> {
        Self::from_rank_fn(n, |x| x.len().min(k))
    }

    pub fn free(n: usize) -> Result<Self, MatroidError> {
        Self::from_rank_fn(n, |x| x.len())
    }

    /// Builds the matroid whose cyclic flats are `candidates`, after checking
    /// Z0–Z3.
    pub fn from_cyclic_flats(
        n: usize,
        candidates: &[(SubsetMask, usize)],
    ) -> Result<Self, MatroidError> {
        if n > MAX_ELEMENTS {
            return Err(MatroidError::GroundTooLarge(n));
        }
        let report = verify_z_axioms(n, candidates);
        if !report.passes() {
            return Err(MatroidError::InvalidLattice(Box::new(report)));
        }
        let members = candidates.iter().map(|&(f, r)| CyclicFlat::new(f, r)).collect();
        Ok(Self::from_lattice_trusted(CyclicFlatLattice::new(n, members)?))
    }

    /// Lattice-backed matroid whose axioms the caller already guarantees.
    pub(crate) fn from_lattice_trusted(lattice: CyclicFlatLattice) -> Self {
        Self { n: lattice.ground_size(), backend: Backend::CyclicFlats(lattice), sweep_cap: DEFAULT_SWEEP_CAP }
    }

    /// Overrides the subset-sweep cap (circuits, cyclic flats, exhaustive
    /// axiom checks, restriction).
    pub fn with_sweep_cap(mut self, cap: usize) -> Self {
        self.sweep_cap = cap.min(MAX_ELEMENTS);
        self
    }

    pub fn sweep_cap(&self) -> usize {
        self.sweep_cap
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> SubsetMask {
        SubsetMask::full(self.n).expect("n checked at construction")
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    fn check(&self, x: &SubsetMask) -> Result<SubsetMask, MatroidError> {
        let outside = if self.n == 64 { 0 } else { x.bits() >> self.n };
        if outside != 0 {
            let index = self.n + outside.trailing_zeros() as usize;
            return Err(MatroidError::OutOfGround { index, n: self.n });
        }
        Ok(SubsetMask::from_bits_unchecked(x.bits(), self.n))
    }

    fn check_sweep(&self) -> Result<(), MatroidError> {
        if self.n > self.sweep_cap {
            Err(MatroidError::TooLarge { n: self.n, cap: self.sweep_cap })
        } else {
            Ok(())
        }
    }

    #[inline]
    pub(crate) fn rank_bits(&self, bits: u64) -> usize {
        match &self.backend {
            Backend::RankTable(t) => t[bits as usize] as usize,
            Backend::CyclicFlats(l) => l
                .members()
                .iter()
                .map(|z| z.rank + (bits & !z.flat.bits()).count_ones() as usize)
                .min()
                .expect("lattice is nonempty"),
        }
    }

    pub fn rank(&self, x: &SubsetMask) -> Result<usize, MatroidError> {
        let x = self.check(x)?;
        Ok(self.rank_bits(x.bits()))
    }

    /// `|X| − ρ(X)`.
    pub fn nullity(&self, x: &SubsetMask) -> Result<usize, MatroidError> {
        Ok(x.len() - self.rank(x)?)
    }

    pub fn closure(&self, x: &SubsetMask) -> Result<SubsetMask, MatroidError> {
        let x = self.check(x)?;
        let r = self.rank_bits(x.bits());
        let mut cl = x;
        for e in x.complement().iter() {
            if self.rank_bits(x.bits() | 1 << e) == r {
                cl = cl.with(e);
            }
        }
        Ok(cl)
    }

    pub fn is_flat(&self, x: &SubsetMask) -> Result<bool, MatroidError> {
        Ok(self.closure(x)? == self.check(x)?)
    }

    /// No element of `X` is a coloop of `M|X`.
    pub fn is_cyclic(&self, x: &SubsetMask) -> Result<bool, MatroidError> {
        let x = self.check(x)?;
        let r = self.rank_bits(x.bits());
        Ok(x.iter().all(|e| self.rank_bits(x.bits() & !(1 << e)) == r))
    }

    /// The largest cyclic subset of `X` (the union of the circuits inside it),
    /// by repeatedly discarding coloops of the restriction.
    pub fn cyclic_core(&self, x: &SubsetMask) -> Result<SubsetMask, MatroidError> {
        let mut s = self.check(x)?;
        loop {
            let r = self.rank_bits(s.bits());
            match s.iter().find(|&e| self.rank_bits(s.bits() & !(1 << e)) + 1 == r) {
                Some(e) => s = s.without(e),
                None => return Ok(s),
            }
        }
    }

    /// The rank table, materialising it for lattice-backed matroids.
    pub fn rank_table(&self) -> Result<Cow<'_, [u8]>, MatroidError> {
        match &self.backend {
            Backend::RankTable(t) => Ok(Cow::Borrowed(t)),
            Backend::CyclicFlats(_) => {
                self.check_sweep()?;
                Ok(Cow::Owned((0..1u64 << self.n).map(|b| self.rank_bits(b) as u8).collect()))
            }
        }
    }

    /// Copy of `self` backed by a full rank table.
    pub fn to_rank_table(&self) -> Result<Matroid, MatroidError> {
        let table = self.rank_table()?.into_owned();
        Ok(Matroid::from_rank_table(self.n, table)?.with_sweep_cap(self.sweep_cap))
    }

    /// All circuits, sorted by size then lexicographically.
    pub fn circuits(&self) -> Result<Vec<SubsetMask>, MatroidError> {
        self.check_sweep()?;
        let table = self.rank_table()?;
        let mut out = Vec::new();
        for bits in 1..1u64 << self.n {
            let size = bits.count_ones() as usize;
            let r = table[bits as usize] as usize;
            if r + 1 != size {
                continue;
            }
            let x = SubsetMask::from_bits_unchecked(bits, self.n);
            if x.iter().all(|e| table[(bits & !(1 << e)) as usize] as usize == r) {
                out.push(x);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Sweeps every subset and collects the cyclic flats.
    pub fn cyclic_flats(&self) -> Result<CyclicFlatLattice, MatroidError> {
        self.check_sweep()?;
        let table = self.rank_table()?;
        let mut members = Vec::new();
        for bits in 0..1u64 << self.n {
            let r = table[bits as usize];
            let x = SubsetMask::from_bits_unchecked(bits, self.n);
            let cyclic = x.iter().all(|e| table[(bits & !(1 << e)) as usize] == r);
            let flat = x.complement().iter().all(|e| table[(bits | 1 << e) as usize] > r);
            if cyclic && flat {
                members.push(CyclicFlat::new(x, r as usize));
            }
        }
        Ok(CyclicFlatLattice::new(self.n, members)?)
    }

    /// The stored lattice for lattice-backed matroids, a sweep otherwise.
    pub fn lattice(&self) -> Result<Cow<'_, CyclicFlatLattice>, MatroidError> {
        match &self.backend {
            Backend::CyclicFlats(l) => Ok(Cow::Borrowed(l)),
            Backend::RankTable(_) => Ok(Cow::Owned(self.cyclic_flats()?)),
        }
    }

    /// `M|X`, with the elements of `X` relabelled `0..|X|` in ascending order.
    pub fn restrict(&self, x: &SubsetMask) -> Result<Matroid, MatroidError> {
        let x = self.check(x)?;
        if x.len() > self.sweep_cap {
            return Err(MatroidError::TooLarge { n: x.len(), cap: self.sweep_cap });
        }
        Ok(Matroid::from_rank_fn(x.len(), |y| self.rank_bits(y.expand(&x).bits()))?
            .with_sweep_cap(self.sweep_cap))
    }

    pub fn to_document(&self) -> MatroidDocument {
        let payload = match &self.backend {
            Backend::RankTable(t) => Payload::RankTable { ranks: t.clone() },
            Backend::CyclicFlats(l) => Payload::CyclicFlats {
                flats: l
                    .members()
                    .iter()
                    .map(|m| FlatEntry { elements: m.flat.to_vec(), rank: m.rank })
                    .collect(),
            },
        };
        MatroidDocument { version: DOCUMENT_VERSION, n: self.n, payload }
    }

    pub fn from_document(doc: &MatroidDocument) -> Result<Self, MatroidError> {
        if doc.version != DOCUMENT_VERSION {
            return Err(MatroidError::Document(format!("version {}", doc.version)));
        }
        match &doc.payload {
            Payload::RankTable { ranks } => Matroid::from_rank_table(doc.n, ranks.clone()),
            Payload::CyclicFlats { flats } => {
                let pairs = flats
                    .iter()
                    .map(|f| Ok((SubsetMask::from_indices(doc.n, f.elements.iter().copied())?, f.rank)))
                    .collect::<Result<Vec<_>, MatroidError>>()?;
                Matroid::from_cyclic_flats(doc.n, &pairs)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, MatroidError> {
        let doc: MatroidDocument =
            serde_json::from_str(s).map_err(|e| MatroidError::Document(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// Versioned JSON form: `{"version":1,"n":…,"backend":"rank_table"|"cyclic_flats", …}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatroidDocument {
    pub version: u32,
    pub n: usize,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case")]
pub enum Payload {
    RankTable { ranks: Vec<u8> },
    CyclicFlats { flats: Vec<FlatEntry> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatEntry {
    pub elements: Vec<usize>,
    pub rank: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn uniform_rank_and_nullity() {
        let m = Matroid::uniform(2, 4).unwrap();
        assert_eq!(m.rank(&set(4, &[])).unwrap(), 0);
        assert_eq!(m.rank(&set(4, &[0, 1, 2])).unwrap(), 2);
        assert_eq!(m.nullity(&m.ground()).unwrap(), 2);
        assert_eq!(m.nullity(&set(4, &[])).unwrap(), 0);
    }

    #[test]
    fn out_of_ground_is_an_error() {
        let m = Matroid::uniform(2, 4).unwrap();
        let wide = set(6, &[0, 5]);
        assert_eq!(m.rank(&wide), Err(MatroidError::OutOfGround { index: 5, n: 4 }));
        assert!(m.closure(&wide).is_err());
        assert!(m.cyclic_core(&wide).is_err());
        assert!(m.restrict(&wide).is_err());
    }

    #[test]
    fn uniform_closure_circuits_and_flats() {
        let m = Matroid::uniform(2, 4).unwrap();
        assert_eq!(m.closure(&set(4, &[0])).unwrap(), set(4, &[0]));
        assert_eq!(m.closure(&m.ground()).unwrap(), m.ground());
        let circuits = m.circuits().unwrap();
        assert_eq!(circuits.len(), 4);
        assert!(circuits.iter().all(|c| c.len() == 3));
        assert_eq!(m.cyclic_core(&m.ground()).unwrap(), m.ground());
        let l = m.cyclic_flats().unwrap();
        assert_eq!(l.to_pairs(), vec![(set(4, &[]), 0), (m.ground(), 2)]);
        assert_eq!(l.coatoms().map(|c| c.flat).collect::<Vec<_>>(), vec![set(4, &[])]);
    }

    #[test]
    fn free_matroid_has_no_dependencies() {
        let m = Matroid::free(3).unwrap();
        assert!(m.circuits().unwrap().is_empty());
        assert!(m.cyclic_core(&m.ground()).unwrap().is_empty());
        let l = m.cyclic_flats().unwrap();
        assert_eq!(l.len(), 1);
        assert!(l.top().flat.is_empty());
    }

    #[test]
    fn restriction_of_uniform_is_uniform() {
        let m = Matroid::uniform(2, 4).unwrap();
        let r = m.restrict(&set(4, &[0, 2, 3])).unwrap();
        assert_eq!(r, Matroid::uniform(2, 3).unwrap());
        assert_eq!(m.restrict(&m.ground()).unwrap(), m);
    }

    #[test]
    fn lattice_backend_from_uniform_lattice() {
        for (k, n) in [(1, 3), (2, 4), (3, 5)] {
            let e = SubsetMask::full(n).unwrap();
            let m = Matroid::from_cyclic_flats(n, &[(SubsetMask::empty(n).unwrap(), 0), (e, k)])
                .unwrap();
            assert_eq!(m.to_rank_table().unwrap(), Matroid::uniform(k, n).unwrap());
        }
        let bad = Matroid::from_cyclic_flats(1, &[(SubsetMask::empty(1).unwrap(), 1)]);
        assert!(matches!(bad, Err(MatroidError::InvalidLattice(_))));
    }

    #[test]
    fn sweep_cap_is_enforced() {
        let m = Matroid::uniform(2, 10).unwrap().with_sweep_cap(8);
        assert_eq!(m.circuits(), Err(MatroidError::TooLarge { n: 10, cap: 8 }));
        assert!(m.cyclic_flats().is_err());
    }

    #[test]
    fn document_roundtrip_both_backends() {
        let m = Matroid::uniform(2, 4).unwrap();
        let json = m.to_json();
        assert!(json.starts_with(r#"{"version":1,"n":4,"backend":"rank_table","ranks":["#));
        assert_eq!(Matroid::from_json(&json).unwrap(), m);

        let l = m.cyclic_flats().unwrap();
        let lm = Matroid::from_cyclic_flats(4, &l.to_pairs()).unwrap();
        let json = lm.to_json();
        assert_eq!(
            json,
            r#"{"version":1,"n":4,"backend":"cyclic_flats","flats":[{"elements":[],"rank":0},{"elements":[0,1,2,3],"rank":2}]}"#
        );
        assert_eq!(Matroid::from_json(&json).unwrap(), lm);
        assert!(Matroid::from_json(r#"{"version":9,"n":1,"backend":"rank_table","ranks":[0,1]}"#).is_err());
    }
}
