//! Linear codes over small fields, used as an independent check on the
//! matroid side: distances by codeword enumeration, locality by projection.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::gf::{GaloisField, UnsupportedField};
use crate::lrc::{global_distance, partial_locality, LocalitySearch, LrcError};
use crate::matroid::{Matroid, MatroidError};
use crate::subset::SubsetMask;

/// Largest length for which the code matroid is tabulated.
pub const CODE_MATROID_CAP: usize = 14;
/// Largest number of codewords enumerated.
pub const CODEWORD_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] UnsupportedField),
    #[error("malformed generator: {0}")]
    Shape(String),
    #[error("entry {value} at row {row}, column {col} is not in GF({q})")]
    EntryOutOfRange { row: usize, col: usize, value: u64, q: usize },
    #[error("generator has rank {rank} but {k} rows")]
    NotFullRank { rank: usize, k: usize },
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("could not parse generator: {0}")]
    Parse(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// A code given by a full-row-rank `k × n` generator over GF(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: GaloisField,
    generator: Vec<Vec<u8>>,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct CodeDocument {
    q: usize,
    generator: Vec<Vec<u64>>,
}

impl LinearCode {
    pub fn new(q: usize, rows: Vec<Vec<u64>>) -> Result<Self, CodeError> {
        let field = GaloisField::new(q)?;
        let k = rows.len();
        if k == 0 {
            return Err(CodeError::Shape("no rows".into()));
        }
        let n = rows[0].len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(CodeError::Shape("rows must be nonempty and of equal length".into()));
        }
        let mut generator = Vec::with_capacity(k);
        for (row, r) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(n);
            for (col, &value) in r.iter().enumerate() {
                if value >= q as u64 {
                    return Err(CodeError::EntryOutOfRange { row, col, value, q });
                }
                out.push(value as u8);
            }
            generator.push(out);
        }
        let rank = field.rank(&generator);
        if rank < k {
            return Err(CodeError::NotFullRank { rank, k });
        }
        Ok(Self { field, generator, n })
    }

    /// Uniformly random entries, redrawn until the rows are independent.
    pub fn random<R: Rng + ?Sized>(q: usize, k: usize, n: usize, rng: &mut R) -> Result<Self, CodeError> {
        if k == 0 || k > n {
            return Err(CodeError::Shape(format!("need 0 < k ≤ n, got k = {k}, n = {n}")));
        }
        GaloisField::new(q)?;
        loop {
            let rows = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..q as u64)).collect()).collect();
            match Self::new(q, rows) {
                Err(CodeError::NotFullRank { .. }) => continue,
                other => return other,
            }
        }
    }

    /// One row per line, entries separated by whitespace.
    pub fn from_text(q: usize, text: &str) -> Result<Self, CodeError> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<u64>().map_err(|e| CodeError::Parse(format!("{t:?}: {e}"))))
                    .collect()
            })
            .collect::<Result<Vec<Vec<u64>>, _>>()?;
        Self::new(q, rows)
    }

    /// Either `{"q": .., "generator": [[..], ..]}` or a bare list of rows,
    /// which needs `q` from the caller.
    pub fn from_json(text: &str, q: Option<usize>) -> Result<Self, CodeError> {
        if let Ok(doc) = serde_json::from_str::<CodeDocument>(text) {
            if let Some(q) = q {
                if q != doc.q {
                    return Err(CodeError::Parse(format!("document says q = {}, caller {q}", doc.q)));
                }
            }
            return Self::new(doc.q, doc.generator);
        }
        let rows: Vec<Vec<u64>> =
            serde_json::from_str(text).map_err(|e| CodeError::Parse(e.to_string()))?;
        let q = q.ok_or_else(|| CodeError::Parse("bare row list needs q".into()))?;
        Self::new(q, rows)
    }

    pub fn to_json(&self) -> String {
        let doc = CodeDocument {
            q: self.q(),
            generator: self.generator.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect(),
        };
        serde_json::to_string(&doc).expect("code serializes")
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> &[Vec<u8>] {
        &self.generator
    }

    /// Rank of the columns in `cols` (bit `j` selects column `j`).
    pub fn column_rank(&self, cols: u64) -> usize {
        let sub: Vec<Vec<u8>> = self
            .generator
            .iter()
            .map(|row| (0..self.n).filter(|&j| cols >> j & 1 == 1).map(|j| row[j]).collect())
            .collect();
        if cols == 0 {
            0
        } else {
            self.field.rank(&sub)
        }
    }

    /// Every codeword, the zero word first.
    pub fn codewords(&self) -> Result<Vec<Vec<u8>>, CodeError> {
        let q = self.q() as u64;
        let total = q.checked_pow(self.k() as u32).filter(|&t| t <= CODEWORD_LIMIT);
        let total = total.ok_or_else(|| {
            CodeError::TooLarge(format!("{}^{} codewords exceed {CODEWORD_LIMIT}", q, self.k()))
        })?;
        let mut out = Vec::with_capacity(total as usize);
        let mut message = vec![0u8; self.k()];
        for _ in 0..total {
            let mut word = vec![0u8; self.n];
            for (coef, row) in message.iter().zip(&self.generator) {
                if *coef == 0 {
                    continue;
                }
                for (w, &g) in word.iter_mut().zip(row) {
                    *w = self.field.add(*w, self.field.mul(*coef, g));
                }
            }
            out.push(word);
            for digit in message.iter_mut() {
                *digit += 1;
                if *digit as u64 == q {
                    *digit = 0;
                } else {
                    break;
                }
            }
        }
        Ok(out)
    }
}

/// The matroid on the columns: `ρ(X)` is the rank of the column submatrix.
pub fn matroid_of_code(c: &LinearCode) -> Result<Matroid, CodeError> {
    if c.n() > CODE_MATROID_CAP {
        return Err(CodeError::TooLarge(format!("n = {} exceeds {CODE_MATROID_CAP}", c.n())));
    }
    Ok(Matroid::from_rank_fn(c.n(), |x| c.column_rank(x.bits()))?)
}

fn weight_on(word: &[u8], support: u64) -> usize {
    word.iter().enumerate().filter(|&(j, &x)| x != 0 && support >> j & 1 == 1).count()
}

/// Minimum Hamming weight of a nonzero codeword.
pub fn code_min_distance(c: &LinearCode) -> Result<usize, CodeError> {
    let words = c.codewords()?;
    Ok(words.iter().skip(1).map(|w| weight_on(w, u64::MAX)).min().unwrap_or(0))
}

/// Minimum distance of the code punctured to `set`, `None` when the
/// projection is the zero code.
fn projected_distance(words: &[Vec<u8>], set: u64) -> Option<usize> {
    words.iter().map(|w| weight_on(w, set)).filter(|&x| x > 0).min()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalitySetCheck {
    pub set: Vec<usize>,
    pub size_ok: bool,
    /// Distance of the punctured code, `None` for the zero code.
    pub code_distance: Option<usize>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub r: usize,
    pub delta: usize,
    pub code_distance: usize,
    /// `None` when the matroid has coloops; the code then has a weight-one
    /// word and the comparison is against 1.
    pub matroid_distance: Option<usize>,
    pub distance_agrees: bool,
    pub locality_sets: Vec<LocalitySetCheck>,
    /// Elements the matroid search found no locality set for.
    pub uncovered: Vec<usize>,
    pub disagreements: Vec<String>,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares the code and its matroid on distance and on locality.
///
/// Locality sets found on the matroid are re-checked on the code by
/// projection. Elements the matroid leaves uncovered are searched for on the
/// code by brute force, and any set found there is a disagreement.
pub fn check_code_matroid_agreement(
    c: &LinearCode,
    r: usize,
    delta: usize,
) -> Result<AgreementReport, CodeError> {
    let m = matroid_of_code(c)?;
    let words = c.codewords()?;
    let code_distance = words.iter().skip(1).map(|w| weight_on(w, u64::MAX)).min().unwrap_or(0);
    let mut disagreements = Vec::new();

    let (matroid_distance, distance_agrees) = match global_distance(&m) {
        Ok(d) => (Some(d), d == code_distance),
        Err(LrcError::HasColoops) => (None, code_distance == 1),
        Err(e) => {
            disagreements.push(format!("matroid distance unavailable: {e}"));
            (None, false)
        }
    };
    if !distance_agrees {
        disagreements.push(format!(
            "code distance {code_distance}, matroid distance {matroid_distance:?}"
        ));
    }

    let limit = r + delta - 1;
    let search = LocalitySearch { cap: CODE_MATROID_CAP };
    let partial = partial_locality(&m, r, delta, search).map_err(|e| match e {
        LrcError::Matroid(e) => CodeError::Matroid(e),
        other => CodeError::Shape(other.to_string()),
    })?;
    let mut locality_sets = Vec::new();
    for set in partial.certificate.distinct_sets() {
        let bits = SubsetMask::from_indices(c.n(), set.iter().copied())
            .map_err(MatroidError::from)?
            .bits();
        let size_ok = set.len() <= limit;
        let d = projected_distance(&words, bits);
        let ok = size_ok && d.is_some_and(|d| d >= delta);
        if !ok {
            disagreements.push(format!("matroid locality set {set:?} fails on the code (d = {d:?})"));
        }
        locality_sets.push(LocalitySetCheck { set, size_ok, code_distance: d, ok });
    }
    for &x in &partial.uncovered {
        let rest = (0..c.n()).filter(|&e| e != x).fold(0u64, |acc, e| acc | 1 << e);
        let mut sub = rest;
        loop {
            let set = sub | 1 << x;
            if set.count_ones() as usize <= limit
                && projected_distance(&words, set).is_some_and(|d| d >= delta)
            {
                disagreements.push(format!(
                    "element {x} has code locality set {:?} the matroid missed",
                    SubsetMask::from_bits(set, c.n()).map(|s| s.to_vec()).unwrap_or_default()
                ));
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    Ok(AgreementReport {
        n: c.n(),
        k: c.k(),
        q: c.q(),
        r,
        delta,
        code_distance,
        matroid_distance,
        distance_agrees,
        locality_sets,
        uncovered: partial.uncovered,
        disagreements,
    })
}
