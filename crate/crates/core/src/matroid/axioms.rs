use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Matroid;
use crate::subset::SubsetMask;

/// Largest `n` for which submodularity is checked on every pair of subsets.
pub const EXHAUSTIVE_PAIR_CAP: usize = 12;
/// Number of random pairs drawn above [`EXHAUSTIVE_PAIR_CAP`].
pub const SAMPLED_PAIRS: usize = 1 << 18;
const SAMPLE_SEED: u64 = 0x5eed_1a77_1ce5;
const KEPT_VIOLATIONS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RankAxiom {
    /// `0 ≤ ρ(X) ≤ |X|`
    Bounded,
    /// `X ⊆ Y ⇒ ρ(X) ≤ ρ(Y)`
    Monotone,
    /// `ρ(X) + ρ(Y) ≥ ρ(X ∪ Y) + ρ(X ∩ Y)`
    Submodular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum RankViolation {
    Bounded { set: Vec<usize>, rank: usize },
    Monotone { smaller: Vec<usize>, larger: Vec<usize> },
    Submodular { x: Vec<usize>, y: Vec<usize> },
}

impl RankViolation {
    pub fn axiom(&self) -> RankAxiom {
        match self {
            RankViolation::Bounded { .. } => RankAxiom::Bounded,
            RankViolation::Monotone { .. } => RankAxiom::Monotone,
            RankViolation::Submodular { .. } => RankAxiom::Submodular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum AxiomCheckMode {
    Exhaustive,
    /// Submodularity checked on this many random pairs only.
    Sampled { pairs: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankAxiomReport {
    pub mode: AxiomCheckMode,
    /// Total number of violations found.
    pub violation_count: usize,
    /// The first violations found, in sweep order.
    pub violations: Vec<RankViolation>,
}

impl RankAxiomReport {
    pub fn passes(&self) -> bool {
        self.violation_count == 0
    }

    pub fn holds(&self, axiom: RankAxiom) -> bool {
        !self.violations.iter().any(|v| v.axiom() == axiom)
    }

    fn record(&mut self, v: RankViolation) {
        self.violation_count += 1;
        if self.violations.len() < KEPT_VIOLATIONS {
            self.violations.push(v);
        }
    }
}

/// Checks boundedness, monotonicity and submodularity of the rank function.
///
/// Boundedness and monotonicity (via single-element extensions) are always
/// exhaustive. Submodularity runs over every pair for `n ≤ 12` and over a
/// fixed-seed random sample otherwise. Requires `n` within the sweep cap.
pub fn verify_rank_axioms(m: &Matroid) -> Result<RankAxiomReport, super::MatroidError> {
    let n = m.ground_size();
    let table = m.rank_table()?;
    let mode = if n <= EXHAUSTIVE_PAIR_CAP {
        AxiomCheckMode::Exhaustive
    } else {
        AxiomCheckMode::Sampled { pairs: SAMPLED_PAIRS }
    };
    let mut report = RankAxiomReport { mode, violation_count: 0, violations: Vec::new() };
    let set = |bits: u64| SubsetMask::from_bits_unchecked(bits, n).to_vec();
    let size = 1u64 << n;

    for bits in 0..size {
        let r = table[bits as usize] as usize;
        if r > bits.count_ones() as usize {
            report.record(RankViolation::Bounded { set: set(bits), rank: r });
        }
        for e in 0..n {
            let larger = bits | 1 << e;
            if larger != bits && table[larger as usize] < table[bits as usize] {
                report.record(RankViolation::Monotone { smaller: set(bits), larger: set(larger) });
            }
        }
    }

    let submodular = |x: u64, y: u64| {
        table[x as usize] as u32 + table[y as usize] as u32
            >= table[(x | y) as usize] as u32 + table[(x & y) as usize] as u32
    };
    match mode {
        AxiomCheckMode::Exhaustive => {
            for x in 0..size {
                for y in x + 1..size {
                    // nested pairs satisfy the inequality with equality
                    if x & y == x || x & y == y {
                        continue;
                    }
                    if !submodular(x, y) {
                        report.record(RankViolation::Submodular { x: set(x), y: set(y) });
                    }
                }
            }
        }
        AxiomCheckMode::Sampled { pairs } => {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            for _ in 0..pairs {
                let x = rng.gen_range(0..size);
                let y = rng.gen_range(0..size);
                if !submodular(x, y) {
                    report.record(RankViolation::Submodular { x: set(x), y: set(y) });
                }
            }
        }
    }
    Ok(report)
}
