//! Brute-force oracles shared by the integration tests. None of these reuse
//! the pruned enumerations of the library.
#![allow(dead_code)]

use lrc_core::construction::AtomConfiguration;
use lrc_core::matroid::Matroid;
use rand::Rng;
use lrc_core::GraphSpec;

/// `n − k + 1 − max Σ_{i∈I} η(F_i)` over every `I ⊆ [m]` with
/// `|F_I| − Σ_{i∈I} η(F_i) < k`, by plain subset enumeration.
pub fn brute_config_distance(cfg: &AtomConfiguration) -> usize {
    let m = cfg.atoms.len();
    assert!(m <= 20, "brute force over 2^{m} unions");
    let mut worst = 0;
    for mask in 1u32..1 << m {
        let mut union = std::collections::BTreeSet::new();
        let mut nullity = 0;
        for (i, a) in cfg.atoms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                union.extend(a.elements.iter().copied());
                nullity += a.len() - a.rho;
            }
        }
        if union.len() - nullity < cfg.k {
            worst = worst.max(nullity);
        }
    }
    cfg.ground_size() + 1 - cfg.k - worst
}

/// `min{|X| : ρ(E∖X) < ρ(E)}` from the full rank table.
pub fn brute_matroid_distance(m: &Matroid) -> usize {
    let n = m.ground_size();
    let table = m.rank_table().unwrap();
    let full = (1u64 << n) - 1;
    let k = table[full as usize];
    (0..=full)
        .filter(|&x| table[(full & !x) as usize] < k)
        .map(|x| x.count_ones() as usize)
        .min()
        .unwrap()
}

pub fn has_triangle(m: usize, edges: &[[usize; 2]]) -> bool {
    let adj = |a: usize, b: usize| edges.iter().any(|e| (e[0] == a && e[1] == b) || (e[0] == b && e[1] == a));
    (0..m).any(|a| (a + 1..m).any(|b| adj(a, b) && (b + 1..m).any(|c| adj(a, c) && adj(b, c))))
}

/// A random spec with at most `max_m` vertices that passes validation.
pub fn random_graph_spec<R: Rng>(rng: &mut R, max_m: usize) -> GraphSpec {
    loop {
        let m = rng.gen_range(1..=max_m);
        let r: i64 = rng.gen_range(2..=6);
        let delta: i64 = rng.gen_range(2..=4);
        let mut edges = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if rng.gen_bool(0.35) {
                    edges.push([a, b]);
                    if has_triangle(m, &edges) {
                        edges.pop();
                    }
                }
            }
        }
        let gamma: Vec<i64> = edges.iter().map(|_| rng.gen_range(1..=2)).collect();
        let alpha: Vec<i64> = (0..m).map(|_| rng.gen_range(0..r)).collect();
        let beta: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        let capacity = r * m as i64 - alpha.iter().sum::<i64>() - gamma.iter().sum::<i64>();
        if capacity <= r {
            continue;
        }
        let k = rng.gen_range(r + 1..=capacity);
        let g = GraphSpec { m, edges, alpha, beta, gamma, k, r, delta };
        if lrc_core::graph::validate_graph_spec(&g).passes() {
            return g;
        }
    }
}

/// Every `(n, k, r, δ)` with `n ≤ max_n`, `0 < r < k ≤ n`, `2 ≤ δ ≤ n`.
pub fn tuples(max_n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (1..=max_n).flat_map(move |n| {
        (1..n).flat_map(move |r| (2..=n).flat_map(move |delta| (r + 1..=n).map(move |k| (n, k, r, delta))))
    })
}

/// The two-branch bound recomputed from its definition with plain integer
/// arithmetic. `None` when the hypotheses fail.
pub fn oracle_d_b(n: i64, k: i64, r: i64, delta: i64) -> Option<i64> {
    let cdiv = |a: i64, b: i64| (a + b - 1) / b;
    if !(0 < r && r < k && delta >= 2) {
        return None;
    }
    let g = cdiv(k, r);
    if k > n - g * (delta - 1) {
        return None;
    }
    let s = r + delta - 1;
    let a = r * g - k;
    let b = s * cdiv(n, s) - n;
    let m = cdiv(n, s) - 1;
    if b <= a || m < 1 {
        return None;
    }
    let spread = (s - b) / m;
    let v = (s - b) % m;
    let rem = v.min(g - 1);
    if delta - 1 <= (g - 1) * spread + rem {
        Some(n - k + 1 - g * (delta - 1))
    } else {
        Some(n - k + 1 - rem - (g - 1) * (spread + delta - 1))
    }
}

/// `n − k + 1 − (⌈k/r⌉ − 1)(δ − 1)`
pub fn oracle_singleton(n: usize, k: usize, r: usize, delta: usize) -> usize {
    n + 1 - k - (k.div_ceil(r) - 1) * (delta - 1)
}

/// Codewords of a prime-field code, by direct enumeration of messages.
pub fn prime_field_codewords(q: u64, rows: &[Vec<u8>]) -> Vec<Vec<u64>> {
    let k = rows.len();
    let n = rows[0].len();
    let mut out = Vec::with_capacity(q.pow(k as u32) as usize);
    let mut msg = vec![0u64; k];
    loop {
        out.push((0..n).map(|j| (0..k).map(|i| msg[i] * rows[i][j] as u64).sum::<u64>() % q).collect());
        let mut i = 0;
        while i < k {
            msg[i] += 1;
            if msg[i] < q {
                break;
            }
            msg[i] = 0;
            i += 1;
        }
        if i == k {
            return out;
        }
    }
}

/// Minimum nonzero weight of the words restricted to `positions`.
pub fn punctured_distance(words: &[Vec<u64>], positions: &[usize]) -> Option<usize> {
    words
        .iter()
        .map(|w| positions.iter().filter(|&&j| w[j] != 0).count())
        .filter(|&x| x > 0)
        .min()
}
