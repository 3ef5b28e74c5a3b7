//! Average value-set cardinality of the polynomials
//! `f_a + b_{n−s−1}T^{n−s−1} + … + b_0` with `f_a = T^n + a_{n−1}T^{n−1} + … + a_{n−s}T^{n−s}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BoundCheck};
use crate::census::{count_points, Ineq};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::interval::{self, Interval};
use crate::mpoly::MPoly;
use crate::symsys::{odometer, SymSystem};
use crate::upoly::{PolyRing, UPoly};
use crate::work::{binomial_u128, pow_u128, Limits};

/// `|{f(c) : c ∈ F_q}|`.
pub fn value_set_cardinality(f: &Field, p: &UPoly) -> u64 {
    let mut seen = vec![false; f.order() as usize];
    value_set_into(f, p, &mut seen)
}

fn value_set_into(f: &Field, p: &UPoly, seen: &mut [bool]) -> u64 {
    seen.iter_mut().for_each(|s| *s = false);
    let ring = PolyRing::new(f);
    let mut n = 0;
    for c in f.elements() {
        let v = ring.eval(p, c).index() as usize;
        if !seen[v] {
            seen[v] = true;
            n += 1;
        }
    }
    n
}

/// Fixed top coefficients `(a_{n−1}, …, a_{n−s})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffWindow {
    n: usize,
    a: Vec<Elem>,
}

impl CoeffWindow {
    pub fn new(n: usize, a: Vec<Elem>) -> Result<Self> {
        let s = a.len();
        if s == 0 || s + 2 > n {
            return Err(Error::HypothesisRangeViolation(format!(
                "window length s = {s} must satisfy 1 <= s <= n - 2 (n = {n})"
            )));
        }
        Ok(CoeffWindow { n, a })
    }

    /// Parses a comma list `a_{n−1},…,a_{n−s}` of integers.
    pub fn parse(f: &Field, n: usize, list: &str) -> Result<Self> {
        let a = list
            .split(',')
            .map(|t| {
                let v = i64::from_str(t.trim())
                    .map_err(|_| Error::InvalidInput(format!("bad coefficient {t:?}")))?;
                crate::factpat::elem_from_int(f, v)
                    .ok_or_else(|| Error::InvalidInput(format!("{v} is not an element index")))
            })
            .collect::<Result<Vec<_>>>()?;
        CoeffWindow::new(n, a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Elem] {
        &self.a
    }

    /// `a_j` with `a_n = 1` and `a_j = 0` below the window.
    pub fn coeff(&self, j: usize) -> Elem {
        if j == self.n {
            Elem::ONE
        } else if j + self.s() >= self.n && j < self.n {
            self.a[self.n - 1 - j]
        } else {
            Elem::ZERO
        }
    }

    pub fn f_a(&self) -> UPoly {
        UPoly::from_coeffs((0..=self.n).map(|j| self.coeff(j)).collect())
    }

    /// The strict range `2(s + 1) <= n` of the point-count estimates.
    pub fn in_estimate_range(&self) -> bool {
        2 * (self.s() + 1) <= self.n
    }

    pub fn describe(&self) -> String {
        let a: Vec<String> = self.a.iter().map(|e| e.index().to_string()).collect();
        format!("n={} s={} a=({})", self.n, self.s(), a.join(","))
    }
}

/// Exact average of `V(f_a + b)` over all `b ∈ F_q^{n−s}`.
pub fn average_value_set_direct(
    f: &Field,
    win: &CoeffWindow,
    limits: &Limits,
) -> Result<BigRational> {
    let q = f.order();
    let free = win.n - win.s();
    let members = pow_u128(q as u64, free as u32);
    limits.check(members.saturating_mul(q as u128 * win.n as u128))?;
    let base: Vec<Elem> = (0..=win.n).map(|j| win.coeff(j)).collect();
    let slice = |first: u32| {
        let mut coeffs = base.clone();
        let mut b = vec![Elem::ZERO; free];
        b[free - 1] = f.elem(first);
        let mut seen = vec![false; q as usize];
        let mut total = 0u128;
        loop {
            coeffs[..free].copy_from_slice(&b);
            total += value_set_into(f, &UPoly::from_coeffs(coeffs.clone()), &mut seen) as u128;
            if !odometer(f, &mut b[..free - 1], q) {
                break;
            }
        }
        total
    };
    let total: u128 = limits.install(|| (0..q).into_par_iter().map(slice).sum());
    Ok(BigRational::new(BigInt::from(total), BigInt::from(members)))
}

/// `H[j − r][i] = H_{i,j}` for `r <= j <= n`, `0 <= i < r`, as polynomials in
/// `Y_k = Π_k` (`k <= r`), where `T^j ≡ Σ_i H_{i,j} T^i` modulo `∏ (T − x_k)`.
pub fn build_h_table(f: &Field, r: usize, n: usize) -> Vec<Vec<MPoly>> {
    assert!(1 <= r && r <= n, "H table needs 1 <= r <= n");
    let signed_pi = |k: usize, negative: bool| {
        let p = MPoly::var(r, k);
        if negative {
            p.neg(f)
        } else {
            p
        }
    };
    let base: Vec<MPoly> = (0..r)
        .map(|i| signed_pi(r - i, (r - 1 - i) % 2 == 1))
        .collect();
    let mut table = vec![base.clone()];
    for _ in r..n {
        let prev = table.last().unwrap();
        let top = &prev[r - 1];
        let row = (0..r)
            .map(|k| {
                let shifted = top.mul(f, &base[k]);
                if k == 0 {
                    shifted
                } else {
                    shifted.add(f, &prev[k - 1])
                }
            })
            .collect();
        table.push(row);
    }
    table
}

/// `R_j^a = a_j + Σ_{i=r}^{n} a_i H_{j,i}` for `n − s <= j <= r − 1`, as a
/// system in `Y_1..Y_s` over `r` variables.
pub fn build_rj_system(f: &Field, win: &CoeffWindow, r: usize) -> Result<SymSystem> {
    let (n, s) = (win.n, win.s());
    if r + s < n + 1 || r > n {
        return Err(Error::HypothesisRangeViolation(format!(
            "r = {r} outside n - s + 1 ..= n = {}..={n}",
            n - s + 1
        )));
    }
    let h = build_h_table(f, r, n);
    // only Π_1..Π_r occur
    let inner = s.min(r);
    let mut polys = Vec::new();
    for j in n - s..r {
        let mut p = MPoly::constant(r, win.coeff(j));
        for i in r..=n {
            p = p.add(f, &h[i - r][j].scale(f, win.coeff(i)));
        }
        polys.push(p.with_nvars(inner)?);
    }
    SymSystem::relaxed(polys, inner, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiMethod {
    Subsets,
    Pointcount,
}

impl FromStr for ChiMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subsets" => Ok(ChiMethod::Subsets),
            "pointcount" => Ok(ChiMethod::Pointcount),
            other => Err(Error::InvalidInput(format!("unknown chi method {other:?}"))),
        }
    }
}

/// Number of `r`-subsets `X ⊂ F_q` for which `f_a mod ∏_{x∈X} (T − x)` has
/// degree at most `n − s − 1`.
pub fn chi(
    f: &Field,
    win: &CoeffWindow,
    r: usize,
    method: ChiMethod,
    limits: &Limits,
) -> Result<u128> {
    if r == 0 || r > win.n {
        return Err(Error::HypothesisRangeViolation(format!(
            "r = {r} must lie in 1..={}",
            win.n
        )));
    }
    match method {
        ChiMethod::Subsets => chi_subsets(f, win, r, limits),
        ChiMethod::Pointcount => {
            let sys = build_rj_system(f, win, r)?;
            let rep = count_points(f, &sys, &Ineq::AllPairs, limits)?;
            let fact: u128 = (1..=r as u128).product();
            if rep.distinct_count % fact != 0 {
                return Err(Error::NonDivisibleCount {
                    count: rep.distinct_count.min(u64::MAX as u128) as u64,
                    divisor: fact as u64,
                });
            }
            Ok(rep.distinct_count / fact)
        }
    }
}

fn chi_subsets(f: &Field, win: &CoeffWindow, r: usize, limits: &Limits) -> Result<u128> {
    let q = f.order();
    if r > q as usize {
        return Ok(0);
    }
    limits.check(binomial_u128(q as u64, r as u64))?;
    let fa = win.f_a();
    let limit = win.n - win.s();
    let ring = PolyRing::new(f);
    let slice = |first: u32| {
        let mut n = 0u128;
        let mut subset = vec![first];
        // extend `subset` with increasing indices
        fn rec(
            f: &Field,
            ring: &PolyRing,
            fa: &UPoly,
            limit: usize,
            q: u32,
            r: usize,
            subset: &mut Vec<u32>,
            n: &mut u128,
        ) {
            if subset.len() == r {
                let roots: Vec<Elem> = subset.iter().map(|&i| f.elem(i)).collect();
                let rem = ring
                    .rem(fa, &UPoly::from_roots(f, &roots))
                    .expect("monic divisor");
                if rem.degree().is_none_or(|d| d < limit) {
                    *n += 1;
                }
                return;
            }
            let start = subset.last().unwrap() + 1;
            for next in start..q {
                if (q - next) as usize + subset.len() < r {
                    break;
                }
                subset.push(next);
                rec(f, ring, fa, limit, q, r, subset, n);
                subset.pop();
            }
        }
        rec(f, &ring, &fa, limit, q, r, &mut subset, &mut n);
        n
    };
    Ok(limits.install(|| (0..q).into_par_iter().map(slice).sum()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiAverage {
    pub value: BigRational,
    /// `(r, χ(a, r))` for `n − s + 1 <= r <= n`.
    pub chis: Vec<(usize, u128)>,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `Σ_{r=1}^{n−s} (−1)^{r−1} C(q,r) q^{1−r} + q^{−(n−s−1)} Σ_{r>n−s} (−1)^{r−1} χ(a,r)`.
pub fn average_value_set_via_chi(
    f: &Field,
    win: &CoeffWindow,
    method: ChiMethod,
    limits: &Limits,
) -> Result<ChiAverage> {
    let q = f.order() as u64;
    let (n, s) = (win.n, win.s());
    let head = cohen_head(q, n - s);
    let mut tail = BigRational::zero();
    let mut chis = Vec::new();
    for r in n - s + 1..=n {
        let c = chi(f, win, r, method, limits)?;
        chis.push((r, c));
        let term = rat(c);
        if r % 2 == 1 {
            tail += term;
        } else {
            tail -= term;
        }
    }
    let value = head + tail * bounds::qpow(q, -(n as i64 - s as i64 - 1));
    Ok(ChiAverage { value, chis })
}

/// `Σ_{r=1}^{k} (−1)^{r−1} C(q,r) q^{1−r}`.
pub fn cohen_head(q: u64, k: usize) -> BigRational {
    (1..=k)
        .map(|r| {
            let c = rat(binomial_big(q, r as u64)) * bounds::qpow(q, 1 - r as i64);
            if r % 2 == 1 {
                c
            } else {
                -c
            }
        })
        .sum()
}

fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `μ_n = Σ_{r=1}^{n} (−1)^{r−1}/r!`.
pub fn mu(n: usize) -> BigRational {
    let mut fact = BigInt::one();
    let mut sum = BigRational::zero();
    for r in 1..=n {
        fact *= r;
        let t = BigRational::new(BigInt::one(), fact.clone());
        if r % 2 == 1 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    sum
}

/// `(D_r, δ_r)` with `D_r = Σ_{j=n−r+1}^{s} (j − 1)` and `δ_r = s!/(n−r)!`.
pub fn chi_constants(n: usize, s: usize, r: usize) -> (BigInt, BigInt) {
    let js = n - r + 1..=s;
    let d: BigInt = js.clone().map(|j| BigInt::from(j) - 1).sum();
    let delta: BigInt = js.map(BigInt::from).product();
    (d, delta)
}

/// `(n − 2)^5 e^{2√n} / 2^{n−2}`.
pub fn envelope(n: usize) -> Interval {
    let two_sqrt = interval::sqrt(&(n as u64).into()).mul(&Interval::int(2));
    let e = interval::exp(&two_sqrt);
    let num = Interval::int(BigInt::from(n as i64 - 2).pow(5));
    num.mul(&e)
        .mul(&Interval::exact(bounds::qpow(2, -(n as i64 - 2))))
        .round_out()
}

/// Per-`r` estimates for `χ(a, r)`, then the two estimates for the average.
pub fn verify_value_set_bounds(
    f: &Field,
    win: &CoeffWindow,
    limits: &Limits,
) -> Result<Vec<BoundCheck>> {
    if !win.in_estimate_range() {
        return Err(Error::HypothesisRangeViolation(format!(
            "the value-set estimates need 2(s + 1) <= n, got s = {}, n = {}",
            win.s(),
            win.n
        )));
    }
    let q = f.order() as u64;
    let (n, s) = (win.n, win.s());
    let avg = average_value_set_via_chi(f, win, ChiMethod::Subsets, limits)?;
    let label = win.describe();
    let mut out = Vec::new();
    let mut sum_terms = BigRational::zero();
    let one_plus = BigRational::one() + bounds::qpow(q, -1);
    for &(r, c) in &avg.chis {
        let (d, delta) = chi_constants(n, s, r);
        let fact = rat((1..=r as u64).product::<u64>());
        let pair = rat(r * (r - 1)) / (rat(2) * &fact) * rat(delta.clone());
        let big = rat(BigInt::from(14) * d.pow(3) * delta.pow(2)) / &fact;
        let bound = &pair * bounds::qpow(q, n as i64 - s as i64 - 1)
            + &big * rat(q + 1) * bounds::qpow(q, n as i64 - s as i64 - 2);
        sum_terms += pair + big * &one_plus;
        let main = Interval::exact(bounds::qpow(q, n as i64 - s as i64) / &fact);
        out.push(
            BoundCheck::two_sided(
                "chi",
                format!("{label} r={r}"),
                Interval::int(c),
                main.clone(),
                Interval::exact(bound),
                &main,
            )
            .with_constants(d, delta),
        );
    }
    let inv_2e = Interval::int(1).div_pos(&interval::e().mul(&Interval::int(2)));
    let main = Interval::exact(mu(n) * rat(q)).add(&inv_2e).round_out();
    let seven_q = BigRational::new(BigInt::from(7), BigInt::from(q));
    let head_fact = rat(2 * (1..=(n - s - 1) as u64).product::<u64>());
    let corollary = BigRational::one() / head_fact + &seven_q + sum_terms;
    let observed = Interval::exact(avg.value);
    out.push(BoundCheck::two_sided(
        "value_set_corollary",
        label.clone(),
        observed.clone(),
        main.clone(),
        Interval::exact(corollary),
        &main,
    ));
    let final_bound = envelope(n).add(&Interval::exact(seven_q));
    out.push(BoundCheck::two_sided(
        "value_set_final",
        label,
        observed,
        main.clone(),
        final_bound,
        &main,
    ));
    Ok(out)
}
