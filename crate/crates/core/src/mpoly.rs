//! Sparse multivariate polynomials in `Y_1 .. Y_s` with the weight grading
//! `wt(Y_j) = j`.
//!
//! Text form: terms `c * Y1^e1 Y3^e3` joined by ` + `, highest term first in
//! graded reverse-lexicographic order. Only variables with a positive
//! exponent are written, always with an explicit exponent; a constant term is
//! just its coefficient; the zero polynomial is `0`. Coefficients are element
//! indices of the coefficient field (residues for prime fields).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};

/// Exponent vector, ordered graded reverse-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weight(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &e)| (j as u32 + 1) * e)
            .sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    // the smaller exponent in the last differing variable wins
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Elem) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(Monomial::one(nvars), c, None);
        p
    }

    /// The variable `Y_j`, 1-based.
    pub fn var(nvars: usize, j: usize) -> Self {
        assert!((1..=nvars).contains(&j), "Y{j} out of range");
        let mut e = vec![0; nvars];
        e[j - 1] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(Monomial(e), Elem::ONE);
        p
    }

    pub fn from_terms(
        f: &Field,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Elem)>,
    ) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e), c, Some(f));
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Elem, f: Option<&Field>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let f = f.expect("field needed to combine like terms");
                let sum = f.add(*existing, c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending grevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, Elem)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the constant term.
    pub fn constant_term(&self) -> Elem {
        self.terms
            .get(&Monomial::one(self.nvars))
            .copied()
            .unwrap_or(Elem::ZERO)
    }

    /// Weighted degree; `None` for the zero polynomial.
    pub fn weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Largest variable index (1-based) that occurs, 0 for constants.
    pub fn max_var(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|m| m.0.iter().rposition(|&e| e > 0))
            .max()
            .map_or(0, |j| j + 1)
    }

    /// Sum of the terms of maximal weight.
    pub fn highest_weight_component(&self) -> Result<MPoly> {
        let w = self.weight().ok_or(Error::ZeroPolynomial)?;
        Ok(MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == w)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        })
    }

    pub fn is_weighted_homogeneous(&self) -> bool {
        let mut ws = self.terms.keys().map(Monomial::weight);
        match ws.next() {
            None => true,
            Some(w) => ws.all(|x| x == w),
        }
    }

    pub fn add(&self, f: &Field, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c, Some(f));
        }
        out
    }

    pub fn neg(&self, f: &Field) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), f.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, f: &Field, other: &MPoly) -> MPoly {
        self.add(f, &other.neg(f))
    }

    pub fn scale(&self, f: &Field, c: Elem) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &x)| (m.clone(), f.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, f: &Field, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.mul(b), f.mul(ca, cb), Some(f));
            }
        }
        out
    }

    /// `d/dY_j`, 1-based, with exponents reduced in characteristic p.
    pub fn derivative(&self, f: &Field, j: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[j - 1];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[j - 1] -= 1;
            out.add_term(Monomial(exps), f.mul(c, f.from_int(e as i64)), Some(f));
        }
        out
    }

    pub fn eval(&self, f: &Field, y: &[Elem]) -> Elem {
        debug_assert!(y.len() >= self.nvars);
        self.terms.iter().fold(Elem::ZERO, |acc, (m, &c)| {
            let v =
                m.0.iter()
                    .zip(y)
                    .filter(|(&e, _)| e > 0)
                    .fold(c, |t, (&e, &yj)| f.mul(t, f.pow(yj, e as u64)));
            f.add(acc, v)
        })
    }

    /// Re-homes the coefficients in `ext` through an embedding table of the
    /// coefficient field.
    pub fn map_coeffs(&self, table: &[Elem]) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), table[c.index() as usize]))
                .collect(),
        }
    }

    /// Same polynomial in `nvars` variables; fails if a dropped variable occurs.
    pub fn with_nvars(&self, nvars: usize) -> Result<MPoly> {
        if self.max_var() > nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                got: self.max_var(),
            });
        }
        Ok(MPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| {
                    let mut e = m.0.clone();
                    e.resize(nvars, 0);
                    (Monomial(e), c)
                })
                .collect(),
        })
    }

    /// Canonical text form (see module docs).
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> =
                    m.0.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(j, e)| format!("Y{}^{}", j + 1, e))
                        .collect();
                if vars.is_empty() {
                    c.index().to_string()
                } else {
                    format!("{} * {}", c.index(), vars.join(" "))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses the text form. Also accepts `-` between terms, `*` between
    /// factors, implicit unit coefficients, and omitted `^1`.
    pub fn parse(f: &Field, nvars: usize, text: &str) -> Result<MPoly> {
        let err = |message: String| Error::Parse { line: 1, message };
        let mut out = MPoly::zero(nvars);
        let mut sign_negative = false;
        let mut current = String::new();
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for ch in text.chars() {
            if ch == '+' || ch == '-' {
                if current.trim().is_empty() && !pieces.is_empty() {
                    return Err(err(format!("dangling operator in {text:?}")));
                }
                if !current.trim().is_empty() {
                    pieces.push((sign_negative, std::mem::take(&mut current)));
                }
                current.clear();
                sign_negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.trim().is_empty() {
            return Err(err(format!("missing term in {text:?}")));
        }
        pieces.push((sign_negative, current));

        for (negative, term) in pieces {
            let mut coeff = Elem::ONE;
            let mut exps = vec![0u32; nvars];
            for tok in term.split(|c: char| c == '*' || c.is_whitespace()) {
                if tok.is_empty() {
                    continue;
                }
                if let Some(rest) = tok.strip_prefix('Y') {
                    let (idx, e) = match rest.split_once('^') {
                        Some((i, e)) => (i, e),
                        None => (rest, "1"),
                    };
                    let j: usize = idx
                        .parse()
                        .map_err(|_| err(format!("bad variable {tok:?}")))?;
                    let e: u32 = e
                        .parse()
                        .map_err(|_| err(format!("bad exponent in {tok:?}")))?;
                    if j == 0 || j > nvars {
                        return Err(err(format!("variable Y{j} outside Y1..Y{nvars}")));
                    }
                    exps[j - 1] += e;
                } else {
                    let v: u64 = tok
                        .parse()
                        .map_err(|_| err(format!("bad coefficient {tok:?}")))?;
                    let c = if f.is_prime_field() {
                        f.from_int((v % f.order() as u64) as i64)
                    } else if v < f.order() as u64 {
                        f.elem(v as u32)
                    } else {
                        return Err(err(format!("coefficient {v} is not an element index")));
                    };
                    coeff = f.mul(coeff, c);
                }
            }
            if negative {
                coeff = f.neg(coeff);
            }
            out.add_term(Monomial(exps), coeff, Some(f));
        }
        Ok(out)
    }
}
