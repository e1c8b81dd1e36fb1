//! The lattice of cyclic flats and the axiom system that characterises it.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::subset::SubsetMask;

/// A cyclic flat together with its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicFlat {
    pub flat: SubsetMask,
    pub rank: usize,
}

impl CyclicFlat {
    pub fn new(flat: SubsetMask, rank: usize) -> Self {
        Self { flat, rank }
    }

    pub fn nullity(&self) -> usize {
        self.flat.len().saturating_sub(self.rank)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice has no members")]
    Empty,
    #[error("set {0} listed more than once")]
    Duplicate(SubsetMask),
    #[error("member {0} does not live on the {1}-element ground set")]
    GroundMismatch(SubsetMask, usize),
    #[error("no least member under inclusion")]
    NoBottom,
    #[error("no greatest member under inclusion")]
    NoTop,
}

/// The poset `(Z, ⊆)` of cyclic flats with cached bottom, top, atoms and
/// coatoms.
///
/// Members are kept sorted (cardinality, then lexicographic), so two lattices
/// over the same sets compare equal regardless of input order. Meet and join
/// are computed from the inclusion order alone, which for a lattice of cyclic
/// flats coincides with `X ∧ Y` = union of circuits in `X ∩ Y` and
/// `X ∨ Y = cl(X ∪ Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFlatLattice {
    n: usize,
    members: Vec<CyclicFlat>,
    bottom: usize,
    top: usize,
    atoms: Vec<usize>,
    coatoms: Vec<usize>,
}

impl CyclicFlatLattice {
    /// Builds the lattice view over `members`.
    ///
    /// Only checks that a least and a greatest member exist; the full axiom
    /// check is [`verify_z_axioms`].
    pub fn new(n: usize, mut members: Vec<CyclicFlat>) -> Result<Self, LatticeError> {
        if members.is_empty() {
            return Err(LatticeError::Empty);
        }
        for m in &members {
            if m.flat.ground_size() != n {
                return Err(LatticeError::GroundMismatch(m.flat, n));
            }
        }
        members.sort_by(|a, b| a.flat.cmp(&b.flat).then(a.rank.cmp(&b.rank)));
        for w in members.windows(2) {
            if w[0].flat == w[1].flat {
                return Err(LatticeError::Duplicate(w[0].flat));
            }
        }
        let bottom = (0..members.len())
            .find(|&i| members.iter().all(|m| members[i].flat.is_subset_of(&m.flat)))
            .ok_or(LatticeError::NoBottom)?;
        let top = (0..members.len())
            .find(|&i| members.iter().all(|m| m.flat.is_subset_of(&members[i].flat)))
            .ok_or(LatticeError::NoTop)?;

        let mut lattice = Self { n, members, bottom, top, atoms: Vec::new(), coatoms: Vec::new() };
        lattice.atoms = (0..lattice.members.len())
            .filter(|&i| i != bottom && lattice.covers_pair(bottom, i))
            .collect();
        lattice.coatoms = (0..lattice.members.len())
            .filter(|&i| i != top && lattice.covers_pair(i, top))
            .collect();
        Ok(lattice)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[CyclicFlat] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn bottom(&self) -> &CyclicFlat {
        &self.members[self.bottom]
    }

    pub fn top(&self) -> &CyclicFlat {
        &self.members[self.top]
    }

    pub fn atoms(&self) -> impl Iterator<Item = &CyclicFlat> {
        self.atoms.iter().map(|&i| &self.members[i])
    }

    pub fn coatoms(&self) -> impl Iterator<Item = &CyclicFlat> {
        self.coatoms.iter().map(|&i| &self.members[i])
    }

    pub fn position(&self, flat: &SubsetMask) -> Option<usize> {
        self.members.iter().position(|m| m.flat == *flat)
    }

    pub fn rank_of(&self, flat: &SubsetMask) -> Option<usize> {
        self.position(flat).map(|i| self.members[i].rank)
    }

    /// `lower ⋖ upper`: strict inclusion with nothing in between.
    fn covers_pair(&self, lower: usize, upper: usize) -> bool {
        let (lo, hi) = (self.members[lower].flat, self.members[upper].flat);
        lo.is_proper_subset_of(&hi)
            && !self
                .members
                .iter()
                .any(|m| lo.is_proper_subset_of(&m.flat) && m.flat.is_proper_subset_of(&hi))
    }

    /// Greatest member contained in both, if unique.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        let bound = self.members[i].flat.intersection(&self.members[j].flat);
        greatest_below(&self.members, &bound)
    }

    /// Least member containing both, if unique.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        let bound = self.members[i].flat.union(&self.members[j].flat);
        least_above(&self.members, &bound)
    }

    /// Covering pairs `(lower, upper)` as member indices.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.members.len() {
            for j in 0..self.members.len() {
                if self.covers_pair(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Graphviz rendering: one node per cyclic flat labelled `set|rank`,
    /// edges along covering relations.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cyclic_flats {\n  rankdir=BT;\n");
        for (i, m) in self.members.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}|{}\"];", m.flat, m.rank);
        }
        for (lo, hi) in self.covers() {
            let _ = writeln!(out, "  n{lo} -> n{hi};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_pairs(&self) -> Vec<(SubsetMask, usize)> {
        self.members.iter().map(|m| (m.flat, m.rank)).collect()
    }
}

fn greatest_below(members: &[CyclicFlat], bound: &SubsetMask) -> Option<usize> {
    let below: Vec<usize> =
        (0..members.len()).filter(|&i| members[i].flat.is_subset_of(bound)).collect();
    below
        .iter()
        .copied()
        .find(|&i| below.iter().all(|&j| members[j].flat.is_subset_of(&members[i].flat)))
}

fn least_above(members: &[CyclicFlat], bound: &SubsetMask) -> Option<usize> {
    let above: Vec<usize> =
        (0..members.len()).filter(|&i| bound.is_subset_of(&members[i].flat)).collect();
    above
        .iter()
        .copied()
        .find(|&i| above.iter().all(|&j| members[i].flat.is_subset_of(&members[j].flat)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZAxiom {
    Z0,
    Z1,
    Z2,
    Z3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZViolation {
    /// Z0: a set occurs twice or lies outside the ground set.
    Malformed { detail: String },
    /// Z0: no least member.
    NoBottom,
    /// Z0: no greatest member.
    NoTop,
    /// Z0: the pair has no unique greatest lower bound.
    NoMeet { x: Vec<usize>, y: Vec<usize> },
    /// Z0: the pair has no unique least upper bound.
    NoJoin { x: Vec<usize>, y: Vec<usize> },
    /// Z1: the least member has nonzero rank.
    BottomRank { rank: usize },
    /// Z2: `0 < ρ(Y) − ρ(X) < |Y| − |X|` fails for `X ⊊ Y`.
    NestedGap { lower: Vec<usize>, upper: Vec<usize> },
    /// Z3: the corrected submodular inequality fails.
    Submodular { x: Vec<usize>, y: Vec<usize> },
}

impl ZViolation {
    pub fn axiom(&self) -> ZAxiom {
        match self {
            ZViolation::Malformed { .. }
            | ZViolation::NoBottom
            | ZViolation::NoTop
            | ZViolation::NoMeet { .. }
            | ZViolation::NoJoin { .. } => ZAxiom::Z0,
            ZViolation::BottomRank { .. } => ZAxiom::Z1,
            ZViolation::NestedGap { .. } => ZAxiom::Z2,
            ZViolation::Submodular { .. } => ZAxiom::Z3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ZAxiomReport {
    pub violations: Vec<ZViolation>,
    /// Z3 is only meaningful once Z0 holds; it is skipped otherwise.
    pub z3_checked: bool,
}

impl ZAxiomReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn holds(&self, axiom: ZAxiom) -> bool {
        !self.violations.iter().any(|v| v.axiom() == axiom)
    }
}

/// Checks Z0–Z3 on a candidate family of (set, rank) pairs over `n` elements.
pub fn verify_z_axioms(n: usize, candidates: &[(SubsetMask, usize)]) -> ZAxiomReport {
    let mut report = ZAxiomReport::default();
    if candidates.is_empty() {
        report.violations.push(ZViolation::Malformed { detail: "no members".into() });
        return report;
    }
    let members: Vec<CyclicFlat> =
        candidates.iter().map(|&(flat, rank)| CyclicFlat::new(flat, rank)).collect();
    let mut malformed = false;
    for (i, m) in members.iter().enumerate() {
        if m.flat.ground_size() != n {
            report.violations.push(ZViolation::Malformed {
                detail: format!("{} is not over {n} elements", m.flat),
            });
            malformed = true;
        }
        if members[..i].iter().any(|o| o.flat == m.flat) {
            report.violations.push(ZViolation::Malformed {
                detail: format!("{} listed more than once", m.flat),
            });
            malformed = true;
        }
    }
    if malformed {
        return report;
    }

    // Z0
    let bottom = (0..members.len())
        .find(|&i| members.iter().all(|m| members[i].flat.is_subset_of(&m.flat)));
    let top = (0..members.len())
        .find(|&i| members.iter().all(|m| m.flat.is_subset_of(&members[i].flat)));
    if bottom.is_none() {
        report.violations.push(ZViolation::NoBottom);
    }
    if top.is_none() {
        report.violations.push(ZViolation::NoTop);
    }
    let mut meets = vec![None; members.len() * members.len()];
    let mut joins = vec![None; members.len() * members.len()];
    for i in 0..members.len() {
        for j in i..members.len() {
            let (x, y) = (members[i].flat, members[j].flat);
            let meet = greatest_below(&members, &x.intersection(&y));
            let join = least_above(&members, &x.union(&y));
            if meet.is_none() {
                report.violations.push(ZViolation::NoMeet { x: x.to_vec(), y: y.to_vec() });
            }
            if join.is_none() {
                report.violations.push(ZViolation::NoJoin { x: x.to_vec(), y: y.to_vec() });
            }
            meets[i * members.len() + j] = meet;
            joins[i * members.len() + j] = join;
        }
    }

    // Z1
    if let Some(b) = bottom {
        if members[b].rank != 0 {
            report.violations.push(ZViolation::BottomRank { rank: members[b].rank });
        }
    }

    // Z2
    for x in &members {
        for y in &members {
            if x.flat.is_proper_subset_of(&y.flat) {
                let rank_gap = y.rank as i64 - x.rank as i64;
                let size_gap = (y.flat.len() - x.flat.len()) as i64;
                if !(0 < rank_gap && rank_gap < size_gap) {
                    report.violations.push(ZViolation::NestedGap {
                        lower: x.flat.to_vec(),
                        upper: y.flat.to_vec(),
                    });
                }
            }
        }
    }

    // Z3
    if report.holds(ZAxiom::Z0) {
        report.z3_checked = true;
        for i in 0..members.len() {
            for j in i..members.len() {
                let (x, y) = (&members[i], &members[j]);
                let meet = &members[meets[i * members.len() + j].expect("Z0 holds")];
                let join = &members[joins[i * members.len() + j].expect("Z0 holds")];
                let correction = x.flat.intersection(&y.flat).difference(&meet.flat).len();
                if x.rank + y.rank < join.rank + meet.rank + correction {
                    report.violations.push(ZViolation::Submodular {
                        x: x.flat.to_vec(),
                        y: y.flat.to_vec(),
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::from_indices(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn uniform_lattice_passes() {
        let l = [(set(4, &[]), 0), (set(4, &[0, 1, 2, 3]), 2)];
        let report = verify_z_axioms(4, &l);
        assert!(report.passes(), "{report:?}");
        assert!(report.z3_checked);
    }

    #[test]
    fn nonzero_bottom_fails_z1() {
        let report = verify_z_axioms(2, &[(set(2, &[]), 1)]);
        assert!(!report.holds(ZAxiom::Z1));
        assert!(report.holds(ZAxiom::Z0));
    }

    #[test]
    fn nested_gap_violation() {
        // rank jump equal to the size jump is not allowed
        let l = [(set(3, &[]), 0), (set(3, &[0, 1, 2]), 3)];
        let report = verify_z_axioms(3, &l);
        assert!(!report.holds(ZAxiom::Z2));
    }

    #[test]
    fn missing_join_fails_z0() {
        let l = [(set(4, &[]), 0), (set(4, &[0, 1]), 1), (set(4, &[2, 3]), 1)];
        let report = verify_z_axioms(4, &l);
        assert!(!report.holds(ZAxiom::Z0));
        assert!(!report.z3_checked);
    }

    #[test]
    fn lattice_accessors_and_dot() {
        let e = set(8, &[0, 1, 2, 3, 4, 5, 6, 7]);
        let f1 = set(8, &[0, 1, 2, 3]);
        let f2 = set(8, &[4, 5, 6, 7]);
        let l = CyclicFlatLattice::new(
            8,
            vec![
                CyclicFlat::new(e, 5),
                CyclicFlat::new(f2, 3),
                CyclicFlat::new(set(8, &[]), 0),
                CyclicFlat::new(f1, 3),
            ],
        )
        .unwrap();
        assert!(l.bottom().flat.is_empty());
        assert_eq!(l.top().flat, e);
        let atoms: Vec<_> = l.atoms().map(|m| m.flat).collect();
        let coatoms: Vec<_> = l.coatoms().map(|m| m.flat).collect();
        assert_eq!(atoms, vec![f1, f2]);
        assert_eq!(coatoms, vec![f1, f2]);
        let i1 = l.position(&f1).unwrap();
        let i2 = l.position(&f2).unwrap();
        assert_eq!(l.members()[l.join(i1, i2).unwrap()].flat, e);
        assert!(l.members()[l.meet(i1, i2).unwrap()].flat.is_empty());
        let dot = l.to_dot();
        assert_eq!(dot.matches("label=").count(), 4);
        assert_eq!(dot.matches("->").count(), 4);
        assert!(dot.contains("\"{0,1,2,3}|3\""));
    }

    #[test]
    fn duplicate_members_rejected() {
        let s = set(3, &[]);
        assert_eq!(
            CyclicFlatLattice::new(3, vec![CyclicFlat::new(s, 0), CyclicFlat::new(s, 0)]),
            Err(LatticeError::Duplicate(s))
        );
        assert!(!verify_z_axioms(3, &[(s, 0), (s, 0)]).passes());
    }
}
