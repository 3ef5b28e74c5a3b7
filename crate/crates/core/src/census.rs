//! Exhaustive point counts of `V_r = {R_1 = … = R_m = 0}` over `F_q`.
//!
//! `Π` is symmetric, so the count runs over multisets of size `r` and weights
//! each zero by its orbit size `r!/∏ mult!`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundCheck};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::interval::Interval;
use crate::symsys::{odometer, Compiled, SymSystem};
use crate::work::{binomial_u128, pow_u128, Limits};

/// Largest `r` whose factorial fits the tallies.
pub const MAX_R: usize = 30;

/// Coordinate-inequality set `ℐ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ineq {
    None,
    AllPairs,
    /// 1-based pairs `i < j`.
    Pairs(Vec<(usize, usize)>),
}

impl Ineq {
    pub fn size(&self, r: usize) -> usize {
        match self {
            Ineq::None => 0,
            Ineq::AllPairs => r * r.saturating_sub(1) / 2,
            Ineq::Pairs(p) => p.len(),
        }
    }

    fn validate(&self, r: usize) -> Result<()> {
        if let Ineq::Pairs(p) = self {
            for &(i, j) in p {
                if !(1 <= i && i < j && j <= r) {
                    return Err(Error::InvalidInput(format!(
                        "inequality pair ({i},{j}) outside 1 <= i < j <= {r}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Ineq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ineq::None => f.write_str("none"),
            Ineq::AllPairs => f.write_str("all"),
            Ineq::Pairs(p) => {
                let parts: Vec<String> = p.iter().map(|(i, j)| format!("{i}-{j}")).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for Ineq {
    type Err = Error;

    /// `none`, `all`, or pairs like `1-2,3-4`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" | "" => Ok(Ineq::None),
            "all" => Ok(Ineq::AllPairs),
            list => {
                let mut pairs = Vec::new();
                for part in list.split(',') {
                    let (a, b) = part
                        .trim()
                        .split_once('-')
                        .ok_or_else(|| Error::InvalidInput(format!("bad pair {part:?}")))?;
                    let a: usize = a
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad pair {part:?}")))?;
                    let b: usize = b
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad pair {part:?}")))?;
                    pairs.push((a.min(b), a.max(b)));
                }
                pairs.sort_unstable();
                pairs.dedup();
                Ok(Ineq::Pairs(pairs))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub q: u32,
    pub r: usize,
    pub m: usize,
    pub s: usize,
    pub system: String,
    pub ineq: String,
    pub ineq_size: usize,
    pub affine_count: u128,
    pub distinct_count: u128,
    pub infinity_count: Option<u128>,
    pub work: u128,
    #[serde(skip)]
    pub wall_time: Duration,
}

fn factorials(r: usize) -> Vec<u128> {
    let mut out = vec![1u128; r + 1];
    for i in 1..=r {
        out[i] = out[i - 1] * i as u128;
    }
    out
}

/// Sum over multisets of size `r` of `weight(multiset)` for those on which
/// every polynomial vanishes at `Π(multiset)`. Returns (weighted zeros,
/// `r!`-weighted zeros with all entries distinct, zeros counted once).
fn orbit_tally(
    f: &Field,
    polys: &[Compiled],
    s: usize,
    r: usize,
    limits: &Limits,
) -> (u128, u128, u128) {
    let q = f.order();
    let fact = factorials(r);
    let branch = |first: u32| {
        let mut stack = vec![vec![Elem::ZERO; s + 1]; r + 1];
        stack[0][0] = Elem::ONE;
        let mut acc = (0u128, 0u128, 0u128);
        dfs(
            f, polys, s, r, q, &fact, &mut stack, 0, first, 1, 1, true, &mut acc,
        );
        acc
    };
    let parts: Vec<(u128, u128, u128)> =
        limits.install(|| (0..q).into_par_iter().map(branch).collect());
    parts
        .into_iter()
        .fold((0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    f: &Field,
    polys: &[Compiled],
    s: usize,
    r: usize,
    q: u32,
    fact: &[u128],
    stack: &mut [Vec<Elem>],
    depth: usize,
    c: u32,
    run: u128,
    denom: u128,
    distinct: bool,
    acc: &mut (u128, u128, u128),
) {
    // `run` is the multiplicity of `c` so far, `denom` the product of the
    // factorials of all multiplicities
    let x = f.elem(c);
    let (prev, next) = stack.split_at_mut(depth + 1);
    let (src, dst) = (&prev[depth], &mut next[0]);
    dst[0] = Elem::ONE;
    for k in 1..=s {
        dst[k] = f.add(src[k], f.mul(x, src[k - 1]));
    }
    let depth = depth + 1;
    if depth == r {
        let pi = &stack[depth][1..];
        if polys.iter().all(|p| p.eval(f, pi).is_zero()) {
            acc.0 += fact[r] / denom;
            acc.2 += 1;
            if distinct {
                acc.1 += fact[r];
            }
        }
        return;
    }
    for next_c in c..q {
        let (run2, denom2, distinct2) = if next_c == c {
            (run + 1, denom * (run + 1), false)
        } else {
            (1, denom, distinct)
        };
        dfs(
            f,
            polys,
            s,
            r,
            q,
            fact,
            stack,
            depth,
            next_c,
            run2,
            denom2,
            distinct && distinct2,
            acc,
        );
    }
}

fn check_r(r: usize) -> Result<()> {
    if r > MAX_R {
        return Err(Error::InvalidInput(format!(
            "r = {r} exceeds the supported maximum {MAX_R}"
        )));
    }
    Ok(())
}

/// Exact `|V_r(F_q)|` and `|V_r^≠(F_q)|`.
pub fn count_points(
    f: &Field,
    sys: &SymSystem,
    ineq: &Ineq,
    limits: &Limits,
) -> Result<CountReport> {
    let start = Instant::now();
    let (q, r, s) = (f.order() as u64, sys.r(), sys.s());
    check_r(r)?;
    ineq.validate(r)?;
    let multisets = binomial_u128(q + r as u64 - 1, r as u64);
    let direct = matches!(ineq, Ineq::Pairs(_));
    let work = if direct {
        multisets.saturating_add(pow_u128(q, r as u32))
    } else {
        multisets
    };
    limits.check(work)?;

    let compiled: Vec<Compiled> = sys.polys().iter().map(Compiled::new).collect();
    let (affine, all_distinct, _) = orbit_tally(f, &compiled, s, r, limits);
    let distinct = match ineq {
        Ineq::None => affine,
        Ineq::AllPairs => all_distinct,
        Ineq::Pairs(pairs) => direct_count(f, &compiled, s, r, pairs, limits),
    };
    Ok(CountReport {
        q: f.order(),
        r,
        m: sys.m(),
        s,
        system: sys.describe(),
        ineq: ineq.to_string(),
        ineq_size: ineq.size(r),
        affine_count: affine,
        distinct_count: distinct,
        infinity_count: None,
        work,
        wall_time: start.elapsed(),
    })
}

fn direct_count(
    f: &Field,
    polys: &[Compiled],
    s: usize,
    r: usize,
    pairs: &[(usize, usize)],
    limits: &Limits,
) -> u128 {
    let q = f.order();
    let slice = |first: u32| {
        let mut x = vec![Elem::ZERO; r];
        x[0] = f.elem(first);
        let mut n = 0u128;
        loop {
            if pairs.iter().all(|&(i, j)| x[i - 1] != x[j - 1]) {
                let pi = crate::symsys::elem_sym_eval(f, &x, s);
                if polys.iter().all(|p| p.eval(f, &pi).is_zero()) {
                    n += 1;
                }
            }
            if !odometer(f, &mut x[1..], q) {
                break;
            }
        }
        n
    };
    limits.install(|| (0..q).into_par_iter().map(slice).sum())
}

/// Points of the closure at infinity in `P^(r−1)(F_q)`: the affine cone of
/// `S^wt(Π(x)) = 0` minus the origin, divided by `q − 1`.
pub fn count_infinity(f: &Field, sys: &SymSystem, limits: &Limits) -> Result<u128> {
    let (q, r, s) = (f.order() as u64, sys.r(), sys.s());
    check_r(r)?;
    limits.check(binomial_u128(q + r as u64 - 1, r as u64))?;
    let leading = sys.leading_system();
    if !leading.iter().all(|p| p.is_weighted_homogeneous()) {
        return Err(Error::NonHomogeneousLeadingPart);
    }
    let compiled: Vec<Compiled> = leading.iter().map(Compiled::new).collect();
    let (cone, _, _) = orbit_tally(f, &compiled, s, r, limits);
    let divisor = (q - 1) as u128;
    if cone == 0 || (cone - 1) % divisor != 0 {
        return Err(Error::NonDivisibleCount {
            count: cone.min(u64::MAX as u128) as u64,
            divisor: q - 1,
        });
    }
    Ok((cone - 1) / divisor)
}

fn int(n: u128) -> Interval {
    Interval::int(BigInt::from(n))
}

fn rat(x: BigRational) -> Interval {
    Interval::exact(x)
}

/// Compares the counts in `report` with the affine, distinct-coordinate and
/// (when counted) projective estimates.
pub fn verify_estimate(report: &CountReport, sys: &SymSystem) -> Result<Vec<BoundCheck>> {
    if report.system != sys.describe() || report.r != sys.r() || report.m != sys.m() {
        return Err(Error::MismatchedReport);
    }
    let (q, r, m) = (report.q as u64, report.r, report.m);
    let (d, delta) = bounds::degree_constants(sys.degrees());
    let main = rat(bounds::qpow(q, r as i64 - m as i64));
    let label = format!("q={q} r={r} m={m}");
    let met = sys.satisfies_standing_assumption();

    let mut out = vec![BoundCheck::two_sided(
        "affine",
        label.clone(),
        int(report.affine_count),
        main.clone(),
        rat(bounds::affine_bound(&d, &delta, q, r, m)),
        &main,
    )];
    out.push(BoundCheck::two_sided(
        "distinct",
        format!("{label} I={}", report.ineq),
        int(report.distinct_count),
        main.clone(),
        rat(bounds::distinct_bound(
            &d,
            &delta,
            q,
            r,
            m,
            report.ineq_size,
        )),
        &main,
    ));
    if let Some(inf) = report.infinity_count {
        let main_inf = Interval::int(bounds::projective_points(q, r as i64 - m as i64 - 1));
        out.push(BoundCheck::two_sided(
            "projective_closure",
            label,
            int(inf),
            main_inf.clone(),
            rat(bounds::infinity_bound(&d, &delta, q, r, m)),
            &main_inf,
        ));
    }
    Ok(out
        .into_iter()
        .map(|c| {
            c.with_constants(d.clone(), delta.clone())
                .with_hypotheses(met)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::MPoly;

    fn sys(f: &Field, s: usize, r: usize, polys: &[&str]) -> SymSystem {
        SymSystem::relaxed(
            polys
                .iter()
                .map(|t| MPoly::parse(f, s, t).unwrap())
                .collect(),
            s,
            r,
        )
        .unwrap()
    }

    #[test]
    fn hyperplane_counts() {
        let f = Field::prime(5).unwrap();
        let rep =
            count_points(&f, &sys(&f, 1, 4, &["Y1"]), &Ineq::None, &Limits::default()).unwrap();
        assert_eq!(rep.affine_count, 125);
        let rep = count_points(
            &f,
            &sys(&f, 1, 3, &["Y1"]),
            &Ineq::AllPairs,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(rep.distinct_count, 12);
        let f3 = Field::prime(3).unwrap();
        let rep = count_points(
            &f3,
            &sys(&f3, 1, 4, &["Y1 - 1"]),
            &Ineq::None,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(rep.affine_count, 27);
    }

    #[test]
    fn partial_ineq_falls_back_to_direct() {
        let f = Field::prime(5).unwrap();
        let s = sys(&f, 1, 3, &["Y1"]);
        let ineq: Ineq = "1-2".parse().unwrap();
        let rep = count_points(&f, &s, &ineq, &Limits::default()).unwrap();
        // x1 != x2, x3 = −x1 − x2: 20 points
        assert_eq!(rep.distinct_count, 20);
        assert_eq!(rep.ineq_size, 1);
        assert!(count_points(&f, &s, &"2-4".parse().unwrap(), &Limits::default()).is_err());
    }

    #[test]
    fn infinity_examples() {
        let f = Field::prime(3).unwrap();
        assert_eq!(
            count_infinity(&f, &sys(&f, 1, 5, &["Y1"]), &Limits::default()).unwrap(),
            40
        );
        let n = count_infinity(&f, &sys(&f, 2, 5, &["Y2"]), &Limits::default()).unwrap();
        // Π_2 = 0 is a nondegenerate quadric in 5 variables over F_3 (char != 2)
        assert_eq!(n, (3u128.pow(4) - 1) / 2);
    }

    #[test]
    fn ceiling_is_enforced() {
        let f = Field::prime(7).unwrap();
        let tight = Limits {
            work_ceiling: 100,
            workers: 1,
        };
        assert!(matches!(
            count_points(&f, &sys(&f, 1, 10, &["Y1"]), &Ineq::None, &tight),
            Err(Error::WorkCeilingExceeded { needed: 8008, .. })
        ));
    }

    #[test]
    fn estimate_examples() {
        let f = Field::prime(7).unwrap();
        let s = sys(&f, 2, 5, &["Y2 - 1"]);
        let rep = count_points(&f, &s, &Ineq::AllPairs, &Limits::default()).unwrap();
        let checks = verify_estimate(&rep, &s).unwrap();
        assert_eq!(checks[0].main_term, Interval::int(2401));
        assert_eq!(checks[0].bound, Interval::int(21952));
        assert!(checks[0].pass && checks[0].vacuous);

        let other = sys(&f, 2, 5, &["Y2 - 2"]);
        assert_eq!(
            verify_estimate(&rep, &other).unwrap_err(),
            Error::MismatchedReport
        );

        let hyper = sys(&f, 1, 4, &["Y1"]);
        let mut rep = count_points(&f, &hyper, &Ineq::None, &Limits::default()).unwrap();
        rep.infinity_count = Some(count_infinity(&f, &hyper, &Limits::default()).unwrap());
        let checks = verify_estimate(&rep, &hyper).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks
            .iter()
            .all(|c| c.pass && c.observed_deviation == Interval::zero()));
    }
}
