//! Exact arithmetic in GF(q) for the prime powers q ≤ 9.
//!
//! Elements are `0..q`, read as base-p digit vectors of polynomial
//! coefficients. Multiplication goes through log/antilog tables built from a
//! generator of the multiplicative group.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("GF({0}) is not supported (need a prime power up to 9)")]
pub struct UnsupportedField(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    q: usize,
    p: usize,
    exp: Vec<u8>,
    log: Vec<u8>,
}

fn prime_power(q: usize) -> Option<(usize, u32)> {
    match q {
        2 | 3 | 5 | 7 => Some((q, 1)),
        4 => Some((2, 2)),
        8 => Some((2, 3)),
        9 => Some((3, 2)),
        _ => None,
    }
}

fn digits(x: usize, p: usize, deg: u32) -> Vec<usize> {
    (0..deg).map(|i| x / p.pow(i) % p).collect()
}

fn undigits(d: &[usize], p: usize) -> usize {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two field elements modulo the monic polynomial whose lower
/// coefficients are `modulus`.
fn poly_mul(a: usize, b: usize, p: usize, deg: u32, modulus: &[usize]) -> usize {
    let (a, b) = (digits(a, p, deg), digits(b, p, deg));
    let mut prod = vec![0usize; 2 * deg as usize];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // x^deg ≡ −(modulus), reduce from the top
    for top in (deg as usize..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in modulus.iter().enumerate() {
            let at = top - deg as usize + i;
            prod[at] = (prod[at] + c * (p - m)) % p;
        }
    }
    undigits(&prod[..deg as usize], p)
}

impl GaloisField {
    pub fn new(q: usize) -> Result<Self, UnsupportedField> {
        let (p, deg) = prime_power(q).ok_or(UnsupportedField(q))?;
        // search monic polynomials x^deg + ... and generators g until g has
        // order q − 1; such a polynomial is irreducible
        for low in 0..q {
            let modulus = digits(low, p, deg);
            if modulus[0] == 0 && deg > 1 {
                continue;
            }
            let mul = |a: usize, b: usize| {
                if deg == 1 {
                    a * b % p
                } else {
                    poly_mul(a, b, p, deg, &modulus)
                }
            };
            for g in 2.min(q - 1)..q {
                let mut exp = Vec::with_capacity(q - 1);
                let mut x = 1usize;
                for _ in 0..q - 1 {
                    exp.push(x as u8);
                    x = mul(x, g);
                }
                let mut seen = vec![false; q];
                if x != 1 || exp.contains(&0) || !exp.iter().all(|&e| !std::mem::replace(&mut seen[e as usize], true)) {
                    continue;
                }
                let mut log = vec![0u8; q];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u8;
                }
                return Ok(Self { q, p, exp, log });
            }
            if deg == 1 {
                break;
            }
        }
        unreachable!("every supported field has a primitive element")
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        let (mut a, mut b) = (a as usize, b as usize);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u8
    }

    pub fn neg(&self, a: u8) -> u8 {
        let mut a = a as usize;
        let (mut out, mut place) = (0, 1);
        while a > 0 {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out as u8
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a as usize] as usize + self.log[b as usize] as usize) % (self.q - 1);
        self.exp[e]
    }

    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        let e = (self.q - 1 - self.log[a as usize] as usize) % (self.q - 1);
        self.exp[e]
    }

    /// Rank of the given rows (each of equal length) by Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<u8>]) -> usize {
        let mut rows: Vec<Vec<u8>> = rows.to_vec();
        let cols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(rank, pivot);
            let inv = self.inv(rows[rank][c]);
            for x in rows[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != rank && rows[i][c] != 0 {
                    let f = rows[i][c];
                    let pivot_row = rows[rank].clone();
                    for (x, &p) in rows[i].iter_mut().zip(&pivot_row) {
                        *x = self.sub(*x, self.mul(f, p));
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_hold() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = GaloisField::new(q).unwrap();
            let all: Vec<u8> = (0..q as u8).collect();
            for &a in &all {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
                }
                for &b in &all {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &all {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_orders() {
        for q in [0, 1, 6, 10, 16] {
            assert_eq!(GaloisField::new(q), Err(UnsupportedField(q)));
        }
    }

    #[test]
    fn characteristic_two_addition_is_xor() {
        let f = GaloisField::new(8).unwrap();
        for a in 0..8u8 {
            for b in 0..8u8 {
                assert_eq!(f.add(a, b), a ^ b);
            }
        }
    }

    #[test]
    fn rank_over_gf3() {
        let f = GaloisField::new(3).unwrap();
        assert_eq!(f.rank(&[vec![1, 2, 0], vec![2, 1, 0]]), 1);
        assert_eq!(f.rank(&[vec![1, 0, 1], vec![0, 1, 1]]), 2);
    }
}
