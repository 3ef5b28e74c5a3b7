//! Factorization patterns in linear families of monic polynomials
//! `A(L, α) = {T^n + a_{n−1}T^{n−1} + … + a_0 : L(a_{n−s}, …, a_{n−1}) + α = 0}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundCheck};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::interval::Interval;
use crate::linalg;
use crate::symsys::odometer;
use crate::upoly::{FactPattern, PolyRing, UPoly};
use crate::work::{pow_u128, Limits};

/// `w(λ) = ∏ i^{λ_i} λ_i!` and `T(λ) = 1/w(λ)`.
pub fn pattern_constants(lambda: &FactPattern) -> (BigUint, BigRational) {
    let mut w = BigUint::one();
    for i in 1..=lambda.n() {
        let c = lambda.count(i);
        for k in 1..=c {
            w *= BigUint::from(i) * BigUint::from(k);
        }
    }
    let t = BigRational::new(BigInt::one(), BigInt::from(w.clone()));
    (w, t)
}

/// All patterns of degree `n`, most linear factors first.
pub fn enumerate_patterns(n: usize) -> Vec<FactPattern> {
    fn rec(rest: usize, max_part: usize, counts: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(counts.clone());
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            counts[part - 1] += 1;
            rec(rest - part, part, counts, out);
            counts[part - 1] -= 1;
        }
    }
    let mut raw = Vec::new();
    rec(n, n, &mut vec![0; n], &mut raw);
    let mut out: Vec<FactPattern> = raw
        .into_iter()
        .map(|c| FactPattern::new(n, c).expect("partition of n"))
        .collect();
    out.sort();
    let total: BigRational = out.iter().map(|l| pattern_constants(l).1).sum();
    assert!(
        total.is_one(),
        "sum of T(lambda) over patterns of {n} is {total}"
    );
    out
}

/// A linear family, stored with its constraints in reduced row-echelon form.
///
/// Column `c` of `rows` is the coefficient `a_{n−s+c}`; since
/// `a_{n−k} = (−1)^k Π_k`, the pivot of a row in column `c` sits at
/// position `i = s − c` in `Π`-index terms.
#[derive(Clone, Debug)]
pub struct LinearFamily {
    field: Field,
    n: usize,
    s: usize,
    rows: Vec<Vec<Elem>>,
    alpha: Vec<Elem>,
    pivot_cols: Vec<usize>,
    pivots: Vec<usize>,
    hypotheses_met: bool,
}

impl LinearFamily {
    /// Constraints `Σ_c rows[j][c]·a_{n−s+c} + alpha[j] = 0`.
    pub fn new(field: &Field, n: usize, rows: Vec<Vec<Elem>>, alpha: Vec<Elem>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput(
                "a family needs at least one constraint".into(),
            ));
        }
        if rows.len() != alpha.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                got: alpha.len(),
            });
        }
        let s = rows[0].len();
        if s == 0 || s > n {
            return Err(Error::InvalidInput(format!(
                "constraint window of length {s} does not fit degree {n}"
            )));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != s) {
            return Err(Error::DimensionMismatch {
                expected: s,
                got: bad.len(),
            });
        }
        if field.order() as usize <= n {
            return Err(Error::HypothesisRangeViolation(format!(
                "q = {} must exceed n = {n}",
                field.order()
            )));
        }
        let m = rows.len();
        let mut aug: Vec<Vec<Elem>> = rows
            .iter()
            .zip(&alpha)
            .map(|(r, &a)| {
                let mut row = r.clone();
                row.push(a);
                row
            })
            .collect();
        let pivots_aug = linalg::rref(field, &mut aug);
        let pivot_cols: Vec<usize> = pivots_aug.iter().copied().filter(|&c| c < s).collect();
        if pivot_cols.len() < m {
            return Err(if pivots_aug.contains(&s) {
                Error::InconsistentSystem
            } else {
                Error::DependentConstraints
            });
        }
        let rows: Vec<Vec<Elem>> = aug.iter().map(|r| r[..s].to_vec()).collect();
        let alpha: Vec<Elem> = aug.iter().map(|r| r[s]).collect();
        let mut pivots: Vec<usize> = pivot_cols.iter().map(|&c| s - c).collect();
        pivots.sort_unstable();
        let hypotheses_met = m <= s && s + m + 2 <= n;
        Ok(LinearFamily {
            field: field.clone(),
            n,
            s,
            rows,
            alpha,
            pivot_cols,
            pivots,
            hypotheses_met,
        })
    }

    /// Polynomials `T^n + b_1 T^{n−1} + … + b_n` with `b_i = values[j]` for
    /// `i = indices[j]`.
    pub fn prescribed(field: &Field, n: usize, indices: &[usize], values: &[Elem]) -> Result<Self> {
        if indices.len() != values.len() || indices.is_empty() {
            return Err(Error::InvalidInput(
                "prescribed coefficients need matching nonempty index and value lists".into(),
            ));
        }
        let mut idx: Vec<(usize, Elem)> = indices
            .iter()
            .copied()
            .zip(values.iter().copied())
            .collect();
        idx.sort_by_key(|p| p.0);
        if idx.windows(2).any(|w| w[0].0 == w[1].0) || idx[0].0 == 0 || idx.last().unwrap().0 > n {
            return Err(Error::InvalidInput(format!(
                "prescribed indices must be distinct and lie in 1..={n}"
            )));
        }
        let s = idx.last().unwrap().0;
        let rows = idx
            .iter()
            .map(|&(i, _)| {
                let mut r = vec![Elem::ZERO; s];
                r[s - i] = Elem::ONE;
                r
            })
            .collect();
        let alpha = idx.iter().map(|&(_, v)| field.neg(v)).collect();
        let mut fam = LinearFamily::new(field, n, rows, alpha)?;
        let m = idx.len();
        fam.hypotheses_met = s + m + 2 <= n;
        Ok(fam)
    }

    /// One constraint per line, `c_1 … c_s | alpha`, meaning
    /// `Σ c_k·a_{n−s+k−1} + alpha = 0`. `#` starts a comment.
    pub fn parse(field: &Field, n: usize, text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut alpha = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let (lhs, rhs) = line
                .split_once('|')
                .ok_or_else(|| err("expected `c_1 ... c_s | alpha`".into()))?;
            let parse = |tok: &str| -> Result<Elem> {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| err(format!("bad coefficient {tok:?}")))?;
                elem_from_int(field, v).ok_or_else(|| err(format!("{v} is not an element index")))
            };
            let row = lhs
                .split_whitespace()
                .map(parse)
                .collect::<Result<Vec<_>>>()?;
            let a: Vec<Elem> = rhs.split_whitespace().map(parse).collect::<Result<_>>()?;
            if a.len() != 1 {
                return Err(err("expected exactly one alpha".into()));
            }
            rows.push(row);
            alpha.push(a[0]);
        }
        LinearFamily::new(field, n, rows, alpha)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Reduced constraint rows and right-hand sides.
    pub fn rows(&self) -> (&[Vec<Elem>], &[Elem]) {
        (&self.rows, &self.alpha)
    }

    /// `i_1 < … < i_m`.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `(D_L, δ_L)`.
    pub fn constants(&self) -> (BigInt, BigInt) {
        let d: BigInt = self.pivots.iter().map(|&i| BigInt::from(i) - 1).sum();
        let delta: BigInt = self.pivots.iter().map(|&i| BigInt::from(i)).product();
        (d, delta)
    }

    pub fn hypotheses_met(&self) -> bool {
        self.hypotheses_met
    }

    pub fn describe(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .zip(&self.alpha)
            .map(|(r, a)| {
                let cs: Vec<String> = r.iter().map(|c| c.index().to_string()).collect();
                format!("{} | {}", cs.join(" "), a.index())
            })
            .collect();
        format!("n={} s={} [{}]", self.n, self.s, rows.join("; "))
    }

    /// Whether the monic polynomial with low coefficients `coeffs` (`a_0` first,
    /// length `n`) belongs to the family.
    pub fn contains(&self, coeffs: &[Elem]) -> bool {
        let f = &self.field;
        let off = self.n - self.s;
        self.rows.iter().zip(&self.alpha).all(|(row, &a)| {
            let v = row
                .iter()
                .enumerate()
                .fold(a, |acc, (c, &l)| f.add(acc, f.mul(l, coeffs[off + c])));
            v.is_zero()
        })
    }

    fn free_positions(&self) -> Vec<usize> {
        let off = self.n - self.s;
        (0..off)
            .chain(
                (0..self.s)
                    .filter(|c| !self.pivot_cols.contains(c))
                    .map(|c| off + c),
            )
            .collect()
    }

    /// Fills the pivot coefficients from the free ones.
    fn complete(&self, coeffs: &mut [Elem]) {
        let f = &self.field;
        let off = self.n - self.s;
        for (row, (&pc, &a)) in self
            .rows
            .iter()
            .zip(self.pivot_cols.iter().zip(&self.alpha))
        {
            let mut v = f.neg(a);
            for (c, &l) in row.iter().enumerate() {
                if c != pc && !l.is_zero() {
                    v = f.sub(v, f.mul(l, coeffs[off + c]));
                }
            }
            coeffs[off + pc] = v;
        }
    }

    /// Calls `visit` with the low coefficients of every member, split into
    /// `q` independent slices by the first free coordinate.
    fn members_par<T: Send>(
        &self,
        limits: &Limits,
        init: impl Fn() -> T + Sync,
        visit: impl Fn(&mut T, &[Elem]) + Sync,
    ) -> Vec<T> {
        let f = &self.field;
        let q = f.order();
        let free = self.free_positions();
        let slice = |first: u32| {
            let mut acc = init();
            let mut vals = vec![Elem::ZERO; free.len()];
            let mut coeffs = vec![Elem::ZERO; self.n];
            if let Some(v) = vals.first_mut() {
                *v = f.elem(first);
            } else if first > 0 {
                return acc;
            }
            loop {
                for (&p, &v) in free.iter().zip(&vals) {
                    coeffs[p] = v;
                }
                self.complete(&mut coeffs);
                visit(&mut acc, &coeffs);
                if vals.len() < 2 || !odometer(f, &mut vals[1..], q) {
                    break;
                }
            }
            acc
        };
        limits.install(|| (0..q).into_par_iter().map(slice).collect())
    }
}

pub(crate) fn elem_from_int(f: &Field, v: i64) -> Option<Elem> {
    if f.is_prime_field() {
        Some(f.from_int(v))
    } else if v >= 0 && v < f.order() as i64 {
        Some(f.elem(v as u32))
    } else if v < 0 && -v < f.order() as i64 {
        Some(f.neg(f.elem((-v) as u32)))
    } else {
        None
    }
}

fn monic(coeffs: &[Elem]) -> UPoly {
    let mut c = coeffs.to_vec();
    c.push(Elem::ONE);
    UPoly::from_coeffs(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub pattern: String,
    pub total: u64,
    pub squarefree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub family: String,
    pub pivots: Vec<usize>,
    pub hypotheses_met: bool,
    pub entries: Vec<CensusEntry>,
    pub work: u128,
}

impl Census {
    pub fn entry(&self, lambda: &FactPattern) -> Option<&CensusEntry> {
        let key = lambda.to_string();
        self.entries.iter().find(|e| e.pattern == key)
    }

    pub fn members(&self) -> u128 {
        self.entries.iter().map(|e| e.total as u128).sum()
    }
}

/// Tallies the pattern and squarefreeness of every member.
pub fn family_census(fam: &LinearFamily, limits: &Limits) -> Result<Census> {
    let f = &fam.field;
    let q = f.order() as u64;
    let work = pow_u128(q, (fam.n - fam.m()) as u32);
    limits.check(work)?;
    let ring = PolyRing::new(f);
    let parts = fam.members_par(
        limits,
        BTreeMap::<FactPattern, (u64, u64)>::new,
        |acc, coeffs| {
            let p = monic(coeffs);
            let lambda = ring.factorization_pattern(&p).expect("monic");
            let e = acc.entry(lambda).or_default();
            e.0 += 1;
            if ring.is_squarefree(&p) {
                e.1 += 1;
            }
        },
    );
    let mut tally: BTreeMap<FactPattern, (u64, u64)> = enumerate_patterns(fam.n)
        .into_iter()
        .map(|l| (l, (0, 0)))
        .collect();
    for part in parts {
        for (l, (t, sq)) in part {
            let e = tally.get_mut(&l).expect("every pattern is pre-populated");
            e.0 += t;
            e.1 += sq;
        }
    }
    Ok(Census {
        q: f.order(),
        n: fam.n,
        m: fam.m(),
        s: fam.s,
        family: fam.describe(),
        pivots: fam.pivots.clone(),
        hypotheses_met: fam.hypotheses_met,
        entries: tally
            .into_iter()
            .map(|(l, (total, squarefree))| CensusEntry {
                pattern: l.to_string(),
                total,
                squarefree,
            })
            .collect(),
        work,
    })
}

/// Per pattern: the squarefree and total estimates and the discriminant-locus
/// bound; plus the discriminant-locus bound for the whole family.
pub fn verify_pattern_bounds(census: &Census) -> Result<Vec<BoundCheck>> {
    let (q, n, m) = (census.q as u64, census.n, census.m);
    let d: BigInt = census.pivots.iter().map(|&i| BigInt::from(i) - 1).sum();
    let delta: BigInt = census.pivots.iter().map(|&i| BigInt::from(i)).product();
    let qnm = bounds::qpow(q, n as i64 - m as i64);
    let qnm1 = bounds::qpow(q, n as i64 - m as i64 - 1);
    let n2 = BigRational::from_integer(BigInt::from(n * n));
    let core = BigRational::from_integer(BigInt::from(21) * d.pow(3) * delta.pow(2))
        + &n2 * BigRational::from_integer(delta.clone());
    let disc = Interval::exact(BigRational::from_integer(BigInt::from(n * (n - 1))) * &qnm1);
    let family_size = Interval::exact(qnm.clone());

    let mut out = Vec::new();
    let mut nonsquarefree_total = 0u64;
    for e in &census.entries {
        let lambda: FactPattern = e.pattern.parse()?;
        if lambda.n() != n {
            return Err(Error::InvalidPattern(format!(
                "{} has degree {}",
                e.pattern,
                lambda.n()
            )));
        }
        let (_, t) = pattern_constants(&lambda);
        let main = Interval::exact(&t * &qnm);
        let sq_bound = &qnm1 * &t * &core;
        let total_bound = &sq_bound + &qnm1 * &n2;
        let nsq = e.total.checked_sub(e.squarefree).ok_or_else(|| {
            Error::InvalidInput(format!("{}: squarefree count exceeds total", e.pattern))
        })?;
        nonsquarefree_total += nsq;
        out.push(BoundCheck::two_sided(
            "pattern_squarefree",
            e.pattern.clone(),
            Interval::int(e.squarefree),
            main.clone(),
            Interval::exact(sq_bound),
            &main,
        ));
        out.push(BoundCheck::two_sided(
            "pattern_total",
            e.pattern.clone(),
            Interval::int(e.total),
            main.clone(),
            Interval::exact(total_bound),
            &main,
        ));
        out.push(BoundCheck::upper(
            "discriminant_locus",
            e.pattern.clone(),
            Interval::int(nsq),
            disc.clone(),
            &family_size,
        ));
    }
    out.push(BoundCheck::upper(
        "discriminant_locus",
        "all".into(),
        Interval::int(nonsquarefree_total),
        disc,
        &family_size,
    ));
    Ok(out
        .into_iter()
        .map(|c| {
            c.with_constants(d.clone(), delta.clone())
                .with_hypotheses(census.hypotheses_met)
        })
        .collect())
}

#[derive(Clone, Debug)]
struct ExtData {
    field: Field,
    embed: Vec<Elem>,
    descend: HashMap<Elem, Elem>,
    theta: Elem,
    /// `A_i[a][h] = θ^{q^{a+h}}`.
    matrix: Vec<Vec<Elem>>,
}

/// Block `(i, j)` of a pattern: `i` coordinates starting at `offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub degree: usize,
    pub index: usize,
    pub offset: usize,
}

/// Normal-basis encoding of the roots of polynomials with pattern `λ`.
#[derive(Clone, Debug)]
pub struct RootEncoding {
    base: Field,
    lambda: FactPattern,
    blocks: Vec<Block>,
    exts: BTreeMap<usize, ExtData>,
}

pub fn build_root_encoding(base: &Field, lambda: &FactPattern) -> Result<RootEncoding> {
    let q = base.order();
    let n = lambda.n();
    let mut blocks = Vec::new();
    let mut offset = 0;
    for i in 1..=n {
        for j in 1..=lambda.count(i) as usize {
            blocks.push(Block {
                degree: i,
                index: j,
                offset,
            });
            offset += i;
        }
    }
    let mut exts = BTreeMap::new();
    for i in (1..=n).filter(|&i| lambda.count(i) > 0) {
        let field = if i == 1 {
            base.clone()
        } else {
            Field::new(base.characteristic() as u64, base.degree() * i as u32)?
        };
        let embed = base.embedding_into(&field)?;
        let descend = embed
            .iter()
            .enumerate()
            .map(|(k, &e)| (e, base.elem(k as u32)))
            .collect();
        let theta = if i == 1 {
            Elem::ONE
        } else {
            field.find_normal_element(q)?
        };
        let conj = field.conjugates(theta, q)?;
        let matrix: Vec<Vec<Elem>> = (0..i)
            .map(|a| (0..i).map(|h| conj[(a + h) % i]).collect())
            .collect();
        assert!(
            !linalg::det(&field, matrix.clone()).is_zero(),
            "A_{i} must be invertible for a normal element"
        );
        exts.insert(
            i,
            ExtData {
                field,
                embed,
                descend,
                theta,
                matrix,
            },
        );
    }
    Ok(RootEncoding {
        base: base.clone(),
        lambda: lambda.clone(),
        blocks,
        exts,
    })
}

impl RootEncoding {
    pub fn pattern(&self) -> &FactPattern {
        &self.lambda
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `ℓ_{i,j}`, 0-based start of block `(i, j)`.
    pub fn offset(&self, i: usize, j: usize) -> Option<usize> {
        self.blocks
            .iter()
            .find(|b| b.degree == i && b.index == j)
            .map(|b| b.offset)
    }

    /// `F_{q^i}`, the normal element `θ_i` and `A_i`.
    pub fn extension(&self, i: usize) -> Option<(&Field, Elem, &[Vec<Elem>])> {
        self.exts
            .get(&i)
            .map(|e| (&e.field, e.theta, e.matrix.as_slice()))
    }

    /// Image of a base-field element in `F_{q^i}`.
    pub fn embed(&self, i: usize, x: Elem) -> Elem {
        self.exts[&i].embed[x.index() as usize]
    }

    /// `Y_{ℓ+1..ℓ+i} = A_i · x_block` for every block, as elements of the
    /// block's `F_{q^i}`.
    pub fn roots(&self, x: &[Elem]) -> Vec<Vec<Elem>> {
        assert_eq!(x.len(), self.lambda.n());
        self.blocks
            .iter()
            .map(|b| {
                let e = &self.exts[&b.degree];
                let f = &e.field;
                e.matrix
                    .iter()
                    .map(|row| {
                        row.iter()
                            .zip(&x[b.offset..b.offset + b.degree])
                            .fold(Elem::ZERO, |acc, (&a, &xv)| {
                                f.add(acc, f.mul(a, e.embed[xv.index() as usize]))
                            })
                    })
                    .collect()
            })
            .collect()
    }

    /// `G(x, T) = ∏_blocks ∏_{a<i} (T − α^{q^a})` in `F_q[T]`.
    pub fn evaluate_g(&self, x: &[Elem]) -> Result<UPoly> {
        if x.len() != self.lambda.n() {
            return Err(Error::DimensionMismatch {
                expected: self.lambda.n(),
                got: x.len(),
            });
        }
        let base_ring = PolyRing::new(&self.base);
        let mut g = UPoly::one();
        for (b, roots) in self.blocks.iter().zip(self.roots(x)) {
            let e = &self.exts[&b.degree];
            let ext_poly = UPoly::from_roots(&e.field, &roots);
            let coeffs = ext_poly
                .coeffs()
                .iter()
                .map(|c| {
                    e.descend
                        .get(c)
                        .copied()
                        .ok_or(Error::CoefficientNotRational)
                })
                .collect::<Result<Vec<_>>>()?;
            g = base_ring.mul(&g, &UPoly::from_coeffs(coeffs));
        }
        Ok(g)
    }

    /// Every block of length `i` has `i` distinct cyclic shifts.
    pub fn is_type_lambda(&self, x: &[Elem]) -> bool {
        self.blocks.iter().all(|b| {
            let block = &x[b.offset..b.offset + b.degree];
            (1..b.degree).all(|shift| {
                b.degree % shift != 0 || {
                    let rotated = block.iter().cycle().skip(shift).take(b.degree);
                    !rotated.eq(block.iter())
                }
            })
        })
    }

    /// No root is shared by two different blocks of the same degree.
    pub fn blocks_disjoint(&self, roots: &[Vec<Elem>]) -> bool {
        for (a, ba) in self.blocks.iter().enumerate() {
            for (b, bb) in self.blocks.iter().enumerate().skip(a + 1) {
                if ba.degree == bb.degree && roots[a].iter().any(|r| roots[b].contains(r)) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub q: u32,
    pub n: usize,
    pub pattern: String,
    pub family: String,
    pub w: u64,
    /// `x` of type `λ` with `G(x, T)` in the family.
    pub type_lambda_zeros: u64,
    /// Of those, the ones whose blocks share no root.
    pub distinct_zeros: u64,
    /// Distinct squarefree members reached.
    pub squarefree_members: u64,
    pub min_preimages: Option<u64>,
    pub max_preimages: Option<u64>,
    /// `x` where "type λ" and "G(x, T) has pattern λ" disagree.
    pub type_pattern_mismatches: u64,
    pub census_squarefree: u64,
    pub preimages_ok: bool,
    pub identity_ok: bool,
    pub pass: bool,
    pub work: u128,
}

/// Scans all of `F_q^n` and checks the root correspondence for `λ` in `fam`.
pub fn correspondence_check(
    fam: &LinearFamily,
    lambda: &FactPattern,
    limits: &Limits,
) -> Result<CorrespondenceReport> {
    let f = &fam.field;
    let n = fam.n;
    if lambda.n() != n {
        return Err(Error::InvalidPattern(format!(
            "{lambda} is not a pattern of degree {n}"
        )));
    }
    let q = f.order();
    let work =
        pow_u128(q as u64, n as u32).saturating_add(pow_u128(q as u64, (n - fam.m()) as u32));
    limits.check(work)?;
    let enc = build_root_encoding(f, lambda)?;
    let ring = PolyRing::new(f);

    #[derive(Default)]
    struct Acc {
        zeros: u64,
        distinct: u64,
        mismatches: u64,
        preimages: HashMap<Vec<Elem>, u64>,
    }
    let slice = |first: u32| -> Result<Acc> {
        let mut acc = Acc::default();
        let mut x = vec![Elem::ZERO; n];
        x[0] = f.elem(first);
        loop {
            let g = enc.evaluate_g(&x)?;
            let typed = enc.is_type_lambda(&x);
            let has_pattern = ring.factorization_pattern(&g)? == *lambda;
            if typed != has_pattern {
                acc.mismatches += 1;
            }
            if typed && fam.contains(&g.coeffs()[..n]) {
                acc.zeros += 1;
                if enc.blocks_disjoint(&enc.roots(&x)) {
                    acc.distinct += 1;
                }
                if ring.is_squarefree(&g) {
                    *acc.preimages.entry(g.coeffs().to_vec()).or_default() += 1;
                }
            }
            if !odometer(f, &mut x[1..], q) {
                break;
            }
        }
        Ok(acc)
    };
    let parts: Vec<Result<Acc>> = limits.install(|| (0..q).into_par_iter().map(slice).collect());
    let mut total = Acc::default();
    for p in parts {
        let p = p?;
        total.zeros += p.zeros;
        total.distinct += p.distinct;
        total.mismatches += p.mismatches;
        for (k, v) in p.preimages {
            *total.preimages.entry(k).or_default() += v;
        }
    }
    let census = family_census(fam, limits)?;
    let census_sq = census.entry(lambda).map_or(0, |e| e.squarefree);
    let (w, _) = pattern_constants(lambda);
    let w: u64 = w
        .try_into()
        .map_err(|_| Error::InvalidInput("w(lambda) overflows".into()))?;
    let min = total.preimages.values().min().copied();
    let max = total.preimages.values().max().copied();
    let preimages_ok = total.preimages.values().all(|&c| c == w);
    let identity_ok = total.distinct == w * census_sq && total.preimages.len() as u64 == census_sq;
    Ok(CorrespondenceReport {
        q,
        n,
        pattern: lambda.to_string(),
        family: fam.describe(),
        w,
        type_lambda_zeros: total.zeros,
        distinct_zeros: total.distinct,
        squarefree_members: total.preimages.len() as u64,
        min_preimages: min,
        max_preimages: max,
        type_pattern_mismatches: total.mismatches,
        census_squarefree: census_sq,
        preimages_ok,
        identity_ok,
        pass: preimages_ok && identity_ok && total.mismatches == 0,
        work,
    })
}
