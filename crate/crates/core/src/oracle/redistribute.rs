//! Moves surplus nullity out of atoms until every atom has nullity exactly
//! `δ − 1`, keeping the configuration valid at every step.

use thiserror::Error;

use crate::construction::{validate_atom_config, z_below_k, Atom, AtomConfiguration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RedistributeError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("blocked: {0}")]
    Blocked(String),
}

/// Every configuration visited, starting with the input.
///
/// `δ − 1` is the smallest atom nullity and `r` the largest atom rank of the
/// input. Each step takes the first atom `F_u` with nullity above `δ − 1`
/// and drops its last element not shared with another atom (or its last
/// element, if all are shared). A dropped element that is now in no atom is
/// given to the first atom of rank below `r`, whose rank goes up by one, or
/// else swapped into an atom `F_k` for an element `F_k` shares with some
/// `F_l`.
pub fn redistribution_trace(cfg: &AtomConfiguration) -> Result<Vec<AtomConfiguration>, RedistributeError> {
    let report = validate_atom_config(cfg);
    if !report.passes() {
        return Err(RedistributeError::PreconditionFailed(format!("invalid configuration: {report}")));
    }
    let n = cfg.ground_size();
    let r = cfg.atoms.iter().map(|a| a.rho).max().expect("validated");
    let target = cfg.atoms.iter().map(Atom::nullity).min().expect("validated");
    let delta = target + 1;
    let groups = cfg.k.div_ceil(r);
    let widest = z_below_k(cfg)
        .map_err(|e| RedistributeError::PreconditionFailed(e.to_string()))?
        .iter()
        .map(|z| z.atoms.len())
        .max()
        .unwrap_or(0);
    if widest != groups - 1 {
        return Err(RedistributeError::PreconditionFailed(format!(
            "largest I with ρ(F_I) < k has {widest} atoms, expected ⌈k/r⌉ − 1 = {}",
            groups - 1
        )));
    }
    let needed = n.div_ceil(r + delta - 1);
    if cfg.m() < needed {
        return Err(RedistributeError::PreconditionFailed(format!(
            "{} atoms, need at least ⌈n/(r+δ−1)⌉ = {needed}",
            cfg.m()
        )));
    }

    let mut trace = vec![cfg.clone()];
    let mut cur = cfg.clone();
    while let Some(u) = cur.atoms.iter().position(|a| a.nullity() > target) {
        let holders = |cur: &AtomConfiguration, x: usize| cur.atoms.iter().filter(|a| a.elements.contains(&x)).count();
        let x = *cur.atoms[u]
            .elements
            .iter()
            .rev()
            .find(|&&x| holders(&cur, x) == 1)
            .unwrap_or_else(|| cur.atoms[u].elements.last().expect("nonempty atom"));
        cur.atoms[u].elements.retain(|&e| e != x);

        if holders(&cur, x) == 0 {
            if let Some(j) = (0..cur.m()).find(|&j| j != u && cur.atoms[j].rho < r) {
                let atom = &mut cur.atoms[j];
                *atom = Atom::new(atom.elements.iter().copied().chain([x]), atom.rho + 1);
            } else {
                let pair = (0..cur.m()).filter(|&k| k != u).find_map(|k| {
                    cur.atoms[k]
                        .elements
                        .iter()
                        .copied()
                        .find(|&y| (0..cur.m()).any(|l| l != k && cur.atoms[l].elements.contains(&y)))
                        .map(|y| (k, y))
                });
                let Some((k, y)) = pair else {
                    return Err(RedistributeError::Blocked(format!(
                        "element {x} left atom {u} but every other atom has rank {r} and no two atoms overlap"
                    )));
                };
                let atom = &mut cur.atoms[k];
                *atom = Atom::new(atom.elements.iter().copied().filter(|&e| e != y).chain([x]), atom.rho);
            }
        }
        let report = validate_atom_config(&cur);
        if !report.passes() {
            return Err(RedistributeError::Blocked(format!("step produced an invalid configuration: {report}")));
        }
        trace.push(cur.clone());
    }
    Ok(trace)
}

/// The final configuration of [`redistribution_trace`].
pub fn perfect_by_redistribution(cfg: &AtomConfiguration) -> Result<AtomConfiguration, RedistributeError> {
    Ok(redistribution_trace(cfg)?.pop().expect("trace starts with the input"))
}
