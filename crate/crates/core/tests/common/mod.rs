//! Slow, independent reference implementations used as test oracles.
//!
//! Prime-field polynomial arithmetic here works on plain `u64` residues so
//! that it shares no code with the library.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symfq_core::{Elem, Field, SymSystem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(f: &Field, r: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    (0..r)
        .map(|_| f.elem(rng.gen_range(0..f.order())))
        .collect()
}

/// `Π_1..Π_s` as sums of products over index subsets.
pub fn pi_naive(f: &Field, x: &[Elem], s: usize) -> Vec<Elem> {
    let r = x.len();
    let mut out = vec![f.zero(); s];
    for mask in 1u32..(1 << r) {
        let k = mask.count_ones() as usize;
        if k > s {
            continue;
        }
        let prod = (0..r)
            .filter(|i| mask >> i & 1 == 1)
            .fold(f.one(), |acc, i| f.mul(acc, x[i]));
        out[k - 1] = f.add(out[k - 1], prod);
    }
    out
}

pub fn all_points(q: u32, r: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as u64).pow(r as u32);
    (0..total).map(move |mut c| {
        (0..r)
            .map(|_| {
                let d = (c % q as u64) as u32;
                c /= q as u64;
                d
            })
            .collect()
    })
}

/// `(affine, distinct)` by scanning all of `F_q^r`. `pairs` are 0-based.
pub fn naive_count(f: &Field, sys: &SymSystem, pairs: &[(usize, usize)]) -> (u128, u128) {
    let (mut affine, mut distinct) = (0u128, 0u128);
    for p in all_points(f.order(), sys.r()) {
        let x: Vec<Elem> = p.iter().map(|&i| f.elem(i)).collect();
        let y = pi_naive(f, &x, sys.s());
        if sys.polys().iter().all(|g| g.eval(f, &y).is_zero()) {
            affine += 1;
            if pairs.iter().all(|&(a, b)| x[a] != x[b]) {
                distinct += 1;
            }
        }
    }
    (affine, distinct)
}

pub fn all_pairs(r: usize) -> Vec<(usize, usize)> {
    (0..r)
        .flat_map(|a| (a + 1..r).map(move |b| (a, b)))
        .collect()
}

// Dense polynomials over F_p, lowest degree first, no trailing zeros.

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    for _ in 0..p - 2 {
        r = r * a % p;
    }
    r
}

/// Schoolbook division; returns (quotient, remainder).
pub fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    let mut quo = vec![0; rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * lead_inv % p;
        quo[shift] = c;
        for (i, bi) in b.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + p - c * bi % p) % p;
        }
        rem = trim(rem);
    }
    (trim(quo), rem)
}

/// `∏ (T − x_k)` over F_p.
pub fn from_roots(x: &[u64], p: u64) -> Vec<u64> {
    x.iter()
        .fold(vec![1], |acc, &c| pmul(&acc, &[(p - c % p) % p, 1], p))
}

fn monic_of_degree(d: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(d as u32);
    (0..total).map(move |mut c| {
        let mut v: Vec<u64> = (0..d)
            .map(|_| {
                let x = c % p;
                c /= p;
                x
            })
            .collect();
        v.push(1);
        v
    })
}

/// All monic irreducibles of degree `1..=n`, by sieving out products.
pub fn irreducibles(n: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out: Vec<Vec<Vec<u64>>> = vec![vec![]; n + 1];
    for d in 1..=n {
        for g in monic_of_degree(d, p) {
            let reducible =
                (1..=d / 2).any(|e| out[e].iter().any(|h| pdivrem(&g, h, p).1.is_empty()));
            if !reducible {
                out[d].push(g);
            }
        }
    }
    out
}

/// Trial-division factorization: `(counts by degree with multiplicity, squarefree)`.
pub fn brute_pattern(f: &[u64], p: u64, irr: &[Vec<Vec<u64>>]) -> (Vec<u32>, bool) {
    let n = f.len() - 1;
    let mut counts = vec![0u32; n];
    let mut squarefree = true;
    let mut rest = f.to_vec();
    for (d, gs) in irr.iter().enumerate().skip(1) {
        for g in gs {
            let mut mult = 0;
            loop {
                let (q, r) = pdivrem(&rest, g, p);
                if !r.is_empty() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                counts[d - 1] += mult;
                squarefree &= mult == 1;
            }
        }
    }
    assert_eq!(rest, vec![1], "irreducible list too short");
    (counts, squarefree)
}

/// Determinant by the Leibniz expansion over F_p.
pub fn leibniz_det(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0u64;
    permute(&mut perm, 0, &mut |pi| {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| pi[i] > pi[j])
            .count();
        let prod = (0..n).fold(1u64, |acc, i| acc * m[i][pi[i]] % p);
        total = if inversions % 2 == 0 {
            (total + prod) % p
        } else {
            (total + p - prod) % p
        };
    });
    total
}

fn permute(a: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == a.len() {
        visit(a);
        return;
    }
    for i in k..a.len() {
        a.swap(k, i);
        permute(a, k + 1, visit);
        a.swap(k, i);
    }
}

/// `|{g(c) : c ∈ F_p}|` by evaluating at every point.
pub fn value_set(g: &[u64], p: u64) -> usize {
    let mut seen = vec![false; p as usize];
    for c in 0..p {
        let v = g.iter().rev().fold(0, |acc, &a| (acc * c + a) % p);
        seen[v as usize] = true;
    }
    seen.iter().filter(|&&b| b).count()
}

/// Systems over prime fields used by the counting tests, as `(s, text)`.
pub const CORPUS: &[(usize, &str)] = &[
    (1, "Y1"),
    (1, "Y1 - 1"),
    (2, "Y2"),
    (2, "Y2 - 1"),
    (2, "Y1^2 + Y2"),
    (2, "Y1^2 - 2*Y2 + 1"),
    (3, "Y3 + Y1*Y2"),
    (3, "Y1 + Y3\nY2"),
    (2, "Y1\nY2 - 1"),
    (3, "Y1^3 + Y2*Y1 + Y3 + 2"),
];
