//! Systems `R_i = S_i(Π_1, …, Π_s)` in `r` variables and the checks that
//! go with them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::linalg;
use crate::mpoly::MPoly;
use crate::work::{pow_u128, Limits};

/// `(Π_1(x), …, Π_s(x))` by expanding `∏ (T + x_i)` truncated at degree `s`.
pub fn elem_sym_eval(f: &Field, x: &[Elem], s: usize) -> Vec<Elem> {
    let mut pi = vec![Elem::ZERO; s + 1];
    pi[0] = Elem::ONE;
    for (i, &xi) in x.iter().enumerate() {
        for k in (1..=s.min(i + 1)).rev() {
            pi[k] = f.add(pi[k], f.mul(xi, pi[k - 1]));
        }
    }
    pi.remove(0);
    pi
}

/// Flattened polynomial for hot evaluation loops.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    terms: Vec<(Elem, Vec<(usize, u64)>)>,
}

impl Compiled {
    pub(crate) fn new(p: &MPoly) -> Self {
        Compiled {
            terms: p
                .terms()
                .map(|(m, c)| {
                    let vars = m
                        .exps()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(j, &e)| (j, e as u64))
                        .collect();
                    (c, vars)
                })
                .collect(),
        }
    }

    pub(crate) fn eval(&self, f: &Field, y: &[Elem]) -> Elem {
        let mut acc = Elem::ZERO;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(j, e) in vars {
                t = f.mul(t, f.pow(y[j], e));
                if t.is_zero() {
                    break;
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymSystem {
    polys: Vec<MPoly>,
    s: usize,
    r: usize,
    degrees: Vec<u32>,
    standing: bool,
}

impl SymSystem {
    /// Requires `m <= s <= r - m - 2`.
    pub fn new(polys: Vec<MPoly>, s: usize, r: usize) -> Result<Self> {
        let sys = SymSystem::relaxed(polys, s, r)?;
        if !sys.standing {
            return Err(Error::StandingAssumption { m: sys.m(), s, r });
        }
        Ok(sys)
    }

    /// Accepts any `1 <= s <= r`; [`SymSystem::satisfies_standing_assumption`]
    /// records whether the estimates apply.
    pub fn relaxed(polys: Vec<MPoly>, s: usize, r: usize) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::InvalidInput(
                "a system needs at least one polynomial".into(),
            ));
        }
        if s == 0 || s > r {
            return Err(Error::InvalidInput(format!(
                "inner dimension s = {s} must satisfy 1 <= s <= r = {r}"
            )));
        }
        let mut degrees = Vec::with_capacity(polys.len());
        for p in &polys {
            if p.nvars() != s {
                return Err(Error::DimensionMismatch {
                    expected: s,
                    got: p.nvars(),
                });
            }
            match p.weight() {
                None => return Err(Error::ZeroPolynomial),
                Some(0) => {
                    return Err(Error::InvalidInput(format!(
                        "constant polynomial {} in system",
                        p.to_text()
                    )))
                }
                Some(w) => degrees.push(w),
            }
        }
        let m = polys.len();
        let standing = m <= s && s + m + 2 <= r;
        Ok(SymSystem {
            polys,
            s,
            r,
            degrees,
            standing,
        })
    }

    /// Parses one polynomial per line; blank lines and `#` comments skipped.
    pub fn parse(f: &Field, s: usize, r: usize, text: &str) -> Result<Self> {
        let mut polys = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            polys.push(MPoly::parse(f, s, line).map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    line: i + 1,
                    message,
                },
                other => other,
            })?);
        }
        SymSystem::relaxed(polys, s, r)
    }

    pub fn m(&self) -> usize {
        self.polys.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    /// `d_i`, the weighted degree of `S_i` (equal to `deg R_i`).
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn satisfies_standing_assumption(&self) -> bool {
        self.standing
    }

    /// Same system in a different number of outer variables.
    pub fn with_r(&self, r: usize) -> Result<Self> {
        SymSystem::relaxed(self.polys.clone(), self.s, r)
    }

    pub fn leading_system(&self) -> Vec<MPoly> {
        self.polys
            .iter()
            .map(|p| {
                p.highest_weight_component()
                    .expect("nonzero by construction")
            })
            .collect()
    }

    /// Coefficients pushed through an embedding table.
    pub fn map_coeffs(&self, table: &[Elem]) -> SymSystem {
        SymSystem {
            polys: self.polys.iter().map(|p| p.map_coeffs(table)).collect(),
            ..self.clone()
        }
    }

    /// One polynomial per line in canonical text form.
    pub fn to_text(&self) -> String {
        self.polys
            .iter()
            .map(MPoly::to_text)
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// `s`, `r` and the polynomials on one line; used to pair reports with
    /// their system.
    pub fn describe(&self) -> String {
        format!(
            "s={} r={} [{}]",
            self.s,
            self.r,
            self.polys
                .iter()
                .map(MPoly::to_text)
                .collect::<Vec<_>>()
                .join("; ")
        )
    }
}

/// `(R_1(x), …, R_m(x))`.
pub fn system_eval(f: &Field, sys: &SymSystem, x: &[Elem]) -> Result<Vec<Elem>> {
    if x.len() != sys.r {
        return Err(Error::DimensionMismatch {
            expected: sys.r,
            got: x.len(),
        });
    }
    let pi = elem_sym_eval(f, x, sys.s);
    Ok(sys.polys.iter().map(|p| p.eval(f, &pi)).collect())
}

pub fn jacobian_rank_at(f: &Field, polys: &[MPoly], y: &[Elem]) -> usize {
    let rows = polys
        .iter()
        .map(|p| {
            (1..=p.nvars())
                .map(|j| p.derivative(f, j).eval(f, y))
                .collect()
        })
        .collect();
    linalg::rank(f, rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankDrop {
    /// `"S"` or `"S^wt"`.
    pub system: String,
    pub degree: u32,
    /// Coordinates as element indices of `F_{q^degree}`.
    pub point: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisLevel {
    pub degree: u32,
    pub field_order: u64,
    pub zeros: u64,
    pub rank_drops: u64,
    pub leading_zeros: u64,
    pub leading_rank_drops: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub q: u32,
    pub s: usize,
    pub m: usize,
    pub max_ext: u32,
    pub scope: String,
    pub levels: Vec<HypothesisLevel>,
    pub pass: bool,
    pub witnesses: Vec<RankDrop>,
    pub work: u64,
}

const MAX_WITNESSES: usize = 8;

/// Full-rank Jacobian on the zeros of `S` and of `S^wt`, checked over
/// `F_{q^j}` for every `j <= max_ext`.
pub fn hypothesis_check(
    f: &Field,
    sys: &SymSystem,
    max_ext: u32,
    limits: &Limits,
) -> Result<HypothesisReport> {
    if max_ext == 0 {
        return Err(Error::InvalidInput(
            "extension degree must be at least 1".into(),
        ));
    }
    let q = f.order() as u64;
    let s = sys.s;
    let needed: u128 = (1..=max_ext)
        .map(|j| pow_u128(q, s as u32 * j).saturating_mul(2))
        .fold(0u128, |a, b| a.saturating_add(b));
    limits.check(needed)?;

    let leading = sys.leading_system();
    let mut levels = Vec::new();
    let mut witnesses = Vec::new();
    for j in 1..=max_ext {
        let ext = if j == 1 {
            f.clone()
        } else {
            Field::new(f.characteristic() as u64, f.degree() * j)?
        };
        let table = f.embedding_into(&ext)?;
        let mut level = HypothesisLevel {
            degree: j,
            field_order: ext.order() as u64,
            zeros: 0,
            rank_drops: 0,
            leading_zeros: 0,
            leading_rank_drops: 0,
        };
        for (label, polys) in [("S", &sys.polys), ("S^wt", &leading)] {
            let mapped: Vec<MPoly> = polys.iter().map(|p| p.map_coeffs(&table)).collect();
            let (zeros, drops) = scan_rank_drops(&ext, &mapped, s, limits);
            let (z, d) = if label == "S" {
                (&mut level.zeros, &mut level.rank_drops)
            } else {
                (&mut level.leading_zeros, &mut level.leading_rank_drops)
            };
            *z = zeros;
            *d = drops.len() as u64;
            for point in drops
                .into_iter()
                .take(MAX_WITNESSES.saturating_sub(witnesses.len()))
            {
                witnesses.push(RankDrop {
                    system: label.into(),
                    degree: j,
                    point: point.iter().map(|e| e.index()).collect(),
                });
            }
        }
        levels.push(level);
    }
    let pass = levels
        .iter()
        .all(|l| l.rank_drops == 0 && l.leading_rank_drops == 0);
    Ok(HypothesisReport {
        q: f.order(),
        s,
        m: sys.m(),
        max_ext,
        scope: format!("sampled up to degree {max_ext}"),
        levels,
        pass,
        witnesses,
        work: needed.min(u64::MAX as u128) as u64,
    })
}

/// Counts zeros of `polys` in `F^s` and collects those where the Jacobian
/// has rank below `m`.
fn scan_rank_drops(f: &Field, polys: &[MPoly], s: usize, limits: &Limits) -> (u64, Vec<Vec<Elem>>) {
    use rayon::prelude::*;

    let compiled: Vec<Compiled> = polys.iter().map(Compiled::new).collect();
    let jac: Vec<Vec<Compiled>> = polys
        .iter()
        .map(|p| {
            (1..=s)
                .map(|j| Compiled::new(&p.derivative(f, j)))
                .collect()
        })
        .collect();
    let m = polys.len();
    let q = f.order();
    let scan_slice = |first: u32| {
        let mut zeros = 0u64;
        let mut drops = Vec::new();
        let mut y = vec![Elem::ZERO; s];
        y[0] = f.elem(first);
        loop {
            if compiled.iter().all(|c| c.eval(f, &y).is_zero()) {
                zeros += 1;
                let rows = jac
                    .iter()
                    .map(|row| row.iter().map(|c| c.eval(f, &y)).collect())
                    .collect();
                if linalg::rank(f, rows) < m {
                    drops.push(y.clone());
                }
            }
            if !odometer(f, &mut y[1..], q) {
                break;
            }
        }
        (zeros, drops)
    };
    let parts: Vec<(u64, Vec<Vec<Elem>>)> =
        limits.install(|| (0..q).into_par_iter().map(scan_slice).collect());
    parts
        .into_iter()
        .fold((0, Vec::new()), |(z, mut d), (pz, pd)| {
            d.extend(pd);
            (z + pz, d)
        })
}

/// Advances `y` to the next tuple in index order; false after the last one.
pub(crate) fn odometer(f: &Field, y: &mut [Elem], q: u32) -> bool {
    for c in y.iter_mut().rev() {
        let next = c.index() + 1;
        if next < q {
            *c = f.elem(next);
            return true;
        }
        *c = Elem::ZERO;
    }
    false
}

/// The Jacobian of `(Π_1, …, Π_r)` at `x` factors as `B_r(x)·A_r(x)` and its
/// determinant is `(−1)^(r(r−1)/2)·∏_{i<j} (x_j − x_i)`.
pub fn vandermonde_factorization_check(f: &Field, x: &[Elem]) -> bool {
    let r = x.len();
    if r == 0 {
        return true;
    }
    let mut pi = vec![Elem::ONE];
    pi.extend(elem_sym_eval(f, x, r));
    let sign = |k: usize| {
        if k.is_multiple_of(2) {
            Elem::ONE
        } else {
            f.neg(Elem::ONE)
        }
    };

    // ∂Π_i/∂X_j = Π_{i−1} − X_j Π_{i−2} + … ± X_j^{i−1}
    let jac: Vec<Vec<Elem>> = (1..=r)
        .map(|i| {
            x.iter()
                .map(|&xj| {
                    (0..i).fold(Elem::ZERO, |acc, t| {
                        let term = f.mul(f.mul(sign(t), f.pow(xj, t as u64)), pi[i - 1 - t]);
                        f.add(acc, term)
                    })
                })
                .collect()
        })
        .collect();
    let b: Vec<Vec<Elem>> = (1..=r)
        .map(|i| {
            (1..=r)
                .map(|k| {
                    if k <= i {
                        f.mul(sign(k - 1), pi[i - k])
                    } else {
                        Elem::ZERO
                    }
                })
                .collect()
        })
        .collect();
    let a: Vec<Vec<Elem>> = (0..r)
        .map(|k| x.iter().map(|&xj| f.pow(xj, k as u64)).collect())
        .collect();
    if linalg::mat_mul(f, &b, &a) != jac {
        return false;
    }
    let mut expected = sign(r * (r - 1) / 2);
    for i in 0..r {
        for j in i + 1..r {
            expected = f.mul(expected, f.sub(x[j], x[i]));
        }
    }
    linalg::det(f, jac) == expected
}

/// Checks `R_i^{d_i}(x) = S_i^wt(Π(x))` at every sample point, recovering the
/// top homogeneous part by interpolating `t ↦ R_i(t·x)` at `d_i + 1` scalars.
/// Coefficients of `sys` and the sample must live in `f`.
pub fn leading_component_identity_check(
    f: &Field,
    sys: &SymSystem,
    sample: &[Vec<Elem>],
) -> Result<bool> {
    let dmax = *sys.degrees.iter().max().expect("nonempty system") as usize;
    if dmax + 1 > f.order() as usize {
        return Err(Error::InsufficientScalars {
            needed: dmax + 1,
            available: f.order() as usize,
        });
    }
    let leading = sys.leading_system();
    for x in sample {
        if x.len() != sys.r {
            return Err(Error::DimensionMismatch {
                expected: sys.r,
                got: x.len(),
            });
        }
        let pi = elem_sym_eval(f, x, sys.s);
        for (i, p) in sys.polys.iter().enumerate() {
            let d = sys.degrees[i] as usize;
            let ts: Vec<Elem> = (0..=d as u32).map(|t| f.elem(t)).collect();
            // leading coefficient of the interpolant = Σ_k φ(t_k) / ∏_{l≠k} (t_k − t_l)
            let mut top = Elem::ZERO;
            for (k, &tk) in ts.iter().enumerate() {
                let scaled: Vec<Elem> = x.iter().map(|&xi| f.mul(tk, xi)).collect();
                let phi = p.eval(f, &elem_sym_eval(f, &scaled, sys.s));
                let denom = ts
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != k)
                    .fold(Elem::ONE, |acc, (_, &tl)| f.mul(acc, f.sub(tk, tl)));
                top = f.add(top, f.div(phi, denom));
            }
            if top != leading[i].eval(f, &pi) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
