//! Dense univariate polynomials over a [`Field`] and factorization patterns.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};

/// Dense polynomial, coefficients low-to-high, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Elem>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly {
            coeffs: vec![Elem::ONE],
        }
    }

    /// The indeterminate `T`.
    pub fn t() -> Self {
        UPoly {
            coeffs: vec![Elem::ZERO, Elem::ONE],
        }
    }

    pub fn monomial(c: Elem, degree: usize) -> Self {
        let mut coeffs = vec![Elem::ZERO; degree + 1];
        coeffs[degree] = c;
        UPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// Integer coefficients, low-to-high, reduced into the prime subfield.
    pub fn from_ints(f: &Field, coeffs: &[i64]) -> Self {
        UPoly::from_coeffs(coeffs.iter().map(|&c| f.from_int(c)).collect())
    }

    /// `(T - r_1) .. (T - r_k)`.
    pub fn from_roots(f: &Field, roots: &[Elem]) -> Self {
        let mut out = vec![Elem::ONE];
        for &r in roots {
            let neg = f.neg(r);
            out.push(Elem::ZERO);
            for i in (0..out.len()).rev() {
                let lower = if i == 0 { Elem::ZERO } else { out[i - 1] };
                out[i] = f.add(lower, f.mul(neg, out[i]));
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `T^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Elem::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
}

/// Arithmetic in `F[T]` for a borrowed field.
#[derive(Clone, Copy)]
pub struct PolyRing<'a> {
    pub field: &'a Field,
}

impl<'a> PolyRing<'a> {
    pub fn new(field: &'a Field) -> Self {
        PolyRing { field }
    }

    pub fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        let f = self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        let f = self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn scale(&self, a: &UPoly, c: Elem) -> UPoly {
        UPoly::from_coeffs(a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        if a.is_zero() || b.is_zero() {
            return UPoly::zero();
        }
        let f = self.field;
        let mut out = vec![Elem::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn eval(&self, a: &UPoly, x: Elem) -> Elem {
        let f = self.field;
        a.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self, a: &UPoly) -> UPoly {
        let f = self.field;
        UPoly::from_coeffs(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
                .collect(),
        )
    }

    /// Long division: `a = quot * b + rem` with `deg rem < deg b`.
    pub fn divrem(&self, a: &UPoly, b: &UPoly) -> Result<(UPoly, UPoly)> {
        let f = self.field;
        let db = b.degree().ok_or(Error::DivisionByZeroPoly)?;
        let lead_inv = f.inv(b.coeffs[db]).expect("leading coefficient is nonzero");
        let mut rem = a.coeffs.clone();
        let Some(da) = a.degree().filter(|&d| d >= db) else {
            return Ok((UPoly::zero(), a.clone()));
        };
        let mut quot = vec![Elem::ZERO; da - db + 1];
        for shift in (0..=da - db).rev() {
            let c = f.mul(rem[shift + db], lead_inv);
            quot[shift] = c;
            if c.is_zero() {
                continue;
            }
            for (i, &bi) in b.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, bi));
            }
        }
        rem.truncate(db);
        Ok((UPoly::from_coeffs(quot), UPoly::from_coeffs(rem)))
    }

    pub fn rem(&self, a: &UPoly, b: &UPoly) -> Result<UPoly> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Exact quotient; the caller guarantees `b | a`.
    fn exact_div(&self, a: &UPoly, b: &UPoly) -> UPoly {
        let (q, r) = self.divrem(a, b).expect("nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    pub fn make_monic(&self, a: &UPoly) -> UPoly {
        match a.leading() {
            None => UPoly::zero(),
            Some(l) => self.scale(a, self.field.inv(l).expect("nonzero")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &UPoly, b: &UPoly) -> UPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.make_monic(&x)
    }

    /// `base^e mod m`.
    pub fn pow_mod(&self, base: &UPoly, mut e: u128, m: &UPoly) -> Result<UPoly> {
        let mut acc = self.rem(&UPoly::one(), m)?;
        let mut b = self.rem(base, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &b), m)?;
            }
            b = self.rem(&self.mul(&b, &b), m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Squarefree test via `gcd(f, f') = 1`; `f' = 0` means `f` is a p-th power.
    pub fn is_squarefree(&self, a: &UPoly) -> bool {
        if a.is_constant() {
            return !a.is_zero();
        }
        let d = self.derivative(a);
        if d.is_zero() {
            return false;
        }
        self.gcd(a, &d).is_constant()
    }

    /// `g` with `g^p = a`, for `a` whose exponents are all multiples of p.
    fn pth_root(&self, a: &UPoly) -> UPoly {
        let f = self.field;
        let p = f.characteristic() as usize;
        let e = (f.order() / f.characteristic()) as u64;
        UPoly::from_coeffs(a.coeffs.iter().step_by(p).map(|&c| f.pow(c, e)).collect())
    }

    /// Squarefree decomposition `a = prod g_i^{e_i}` of a monic polynomial,
    /// returned as `(g_i, e_i)` with each `g_i` squarefree, monic and
    /// nonconstant. The `g_i` need not be pairwise coprime across the
    /// p-th-root descent, but the multiset of irreducible factors with
    /// multiplicity is exact.
    pub fn squarefree_decomposition(&self, a: &UPoly) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if a.is_constant() {
            return out;
        }
        let p = self.field.characteristic() as usize;
        let d = self.derivative(a);
        if d.is_zero() {
            let root = self.pth_root(a);
            for (g, e) in self.squarefree_decomposition(&root) {
                out.push((g, e * p));
            }
            return out;
        }
        let mut c = self.gcd(a, &d);
        let mut w = self.exact_div(a, &c);
        let mut i = 1;
        while !w.is_constant() {
            let y = self.gcd(&w, &c);
            let fac = self.exact_div(&w, &y);
            if !fac.is_constant() {
                out.push((fac, i));
            }
            i += 1;
            w = y;
            c = self.exact_div(&c, &w);
        }
        if !c.is_constant() {
            let root = self.pth_root(&c);
            for (g, e) in self.squarefree_decomposition(&root) {
                out.push((g, e * p));
            }
        }
        out
    }

    /// Distinct-degree splitting of a squarefree monic polynomial: returns
    /// `(d, number of irreducible factors of degree d)`.
    pub fn distinct_degree(&self, g: &UPoly) -> Vec<(usize, usize)> {
        let q = self.field.order() as u128;
        let mut out = Vec::new();
        let mut rest = g.clone();
        let mut h = UPoly::t();
        let mut d = 1;
        while rest.degree().unwrap_or(0) >= 2 * d {
            h = self.pow_mod(&h, q, &rest).expect("nonconstant modulus");
            let gd = self.gcd(&rest, &self.sub(&h, &UPoly::t()));
            let k = gd.degree().unwrap_or(0);
            if k > 0 {
                out.push((d, k / d));
                rest = self.exact_div(&rest, &gd);
                h = self.rem(&h, &rest).expect("nonzero");
            }
            d += 1;
        }
        if let Some(k) = rest.degree().filter(|&k| k > 0) {
            out.push((k, 1));
        }
        out
    }

    /// Degrees and multiplicities of the irreducible factors of a monic `a`.
    pub fn factorization_pattern(&self, a: &UPoly) -> Result<FactPattern> {
        if !a.is_monic() {
            return Err(Error::NotMonic);
        }
        let n = a.degree().expect("monic is nonzero");
        if n == 0 {
            return Err(Error::InvalidPattern("degree must be at least 1".into()));
        }
        let mut counts = vec![0u32; n];
        for (g, e) in self.squarefree_decomposition(a) {
            for (d, k) in self.distinct_degree(&g) {
                counts[d - 1] += (k * e) as u32;
            }
        }
        FactPattern::new(n, counts)
    }
}

/// Factorization pattern `1^{l_1} 2^{l_2} .. n^{l_n}` with `sum i l_i = n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactPattern {
    n: usize,
    counts: Vec<u32>,
}

impl FactPattern {
    /// `counts[i - 1]` is the number of degree-`i` factors.
    pub fn new(n: usize, mut counts: Vec<u32>) -> Result<Self> {
        if counts.len() > n && counts[n..].iter().any(|&c| c != 0) {
            return Err(Error::InvalidPattern(format!(
                "factor degree exceeds n = {n}"
            )));
        }
        counts.resize(n, 0);
        let total: usize = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i + 1) * c as usize)
            .sum();
        if total != n || n == 0 {
            return Err(Error::InvalidPattern(format!(
                "sum of i * lambda_i is {total}, expected {n}"
            )));
        }
        Ok(FactPattern { n, counts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// `lambda_i`, for `1 <= i <= n`.
    pub fn count(&self, i: usize) -> u32 {
        self.counts.get(i - 1).copied().unwrap_or(0)
    }

    /// Pattern of a product.
    pub fn combine(&self, other: &FactPattern) -> FactPattern {
        let n = self.n + other.n;
        let mut counts = vec![0u32; n];
        for (i, &c) in self.counts.iter().enumerate() {
            counts[i] += c;
        }
        for (i, &c) in other.counts.iter().enumerate() {
            counts[i] += c;
        }
        FactPattern { n, counts }
    }

    /// Every factor has degree 1 (the pattern `1^n`).
    pub fn all_linear(n: usize) -> FactPattern {
        let mut counts = vec![0; n];
        counts[0] = n as u32;
        FactPattern { n, counts }
    }
}

impl Ord for FactPattern {
    /// Patterns with more linear factors first, then more quadratic ones, ...
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| other.counts.cmp(&self.counts))
    }
}

impl PartialOrd for FactPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FactPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}^{}", i + 1, c)?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for FactPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut counts: Vec<u32> = Vec::new();
        for part in s.split_whitespace() {
            let (deg, mult) = part
                .split_once('^')
                .ok_or_else(|| Error::InvalidPattern(format!("expected i^k, got {part:?}")))?;
            let bad = || Error::InvalidPattern(format!("bad term {part:?}"));
            let deg: usize = deg.parse().map_err(|_| bad())?;
            let mult: u32 = mult.parse().map_err(|_| bad())?;
            if deg == 0 {
                return Err(bad());
            }
            if counts.len() < deg {
                counts.resize(deg, 0);
            }
            counts[deg - 1] += mult;
        }
        let n = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i + 1) * c as usize)
            .sum();
        FactPattern::new(n, counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Field, c: &[i64]) -> UPoly {
        UPoly::from_ints(f, c)
    }

    #[test]
    fn divrem_cubic_by_product_of_linears() {
        // (T-1)(T-2)(T-3) = T^3 - 6T^2 + 11T - 6 = T^3 + T^2 + 4T + 1 over F_7;
        // T^3 mod it = 6T^2 - 11T + 6 = 6T^2 + 3T + 6.
        let f = Field::prime(7).unwrap();
        let r = PolyRing::new(&f);
        let g = UPoly::from_roots(&f, &[f.from_int(1), f.from_int(2), f.from_int(3)]);
        assert_eq!(g, poly(&f, &[1, 4, 1, 1]));
        let (q, rem) = r.divrem(&poly(&f, &[0, 0, 0, 1]), &g).unwrap();
        assert_eq!(q, UPoly::one());
        assert_eq!(rem, poly(&f, &[6, 3, 6]));
    }

    #[test]
    fn divrem_by_t_gives_constant_term() {
        let f = Field::prime(5).unwrap();
        let r = PolyRing::new(&f);
        let a = poly(&f, &[3, 1, 4, 1]);
        let (_, rem) = r.divrem(&a, &UPoly::t()).unwrap();
        assert_eq!(rem, poly(&f, &[3]));
        let b = poly(&f, &[1, 0, 1]);
        assert_eq!(r.divrem(&b, &b).unwrap(), (UPoly::one(), UPoly::zero()));
        assert_eq!(
            r.divrem(&b, &UPoly::zero()).unwrap_err(),
            Error::DivisionByZeroPoly
        );
    }

    #[test]
    fn squarefree_examples() {
        let f3 = Field::prime(3).unwrap();
        let r = PolyRing::new(&f3);
        assert!(r.is_squarefree(&poly(&f3, &[1, 0, 1])));
        assert!(!r.is_squarefree(&poly(&f3, &[0, 0, 1])));
        // T^3 - 2 over F_3 has zero derivative.
        assert!(!r.is_squarefree(&poly(&f3, &[-2, 0, 0, 1])));
    }

    #[test]
    fn pattern_examples() {
        let f3 = Field::prime(3).unwrap();
        let r3 = PolyRing::new(&f3);
        assert_eq!(
            r3.factorization_pattern(&poly(&f3, &[1, 0, 1]))
                .unwrap()
                .to_string(),
            "2^1"
        );
        assert_eq!(
            r3.factorization_pattern(&poly(&f3, &[0, 0, 1]))
                .unwrap()
                .to_string(),
            "1^2"
        );
        let f5 = Field::prime(5).unwrap();
        let r5 = PolyRing::new(&f5);
        let one = f5.from_int(1);
        let two = f5.from_int(2);
        let g = UPoly::from_roots(&f5, &[one, one, two]);
        assert_eq!(r5.factorization_pattern(&g).unwrap().to_string(), "1^3");
        assert_eq!(
            r5.factorization_pattern(&poly(&f5, &[1, 2])).unwrap_err(),
            Error::NotMonic
        );
    }

    #[test]
    fn pattern_of_pth_powers_in_char_2() {
        // (T^2 + T + 1)^2 (T + 1)^4 over F_2 = pattern 1^4 2^2.
        let f2 = Field::prime(2).unwrap();
        let r = PolyRing::new(&f2);
        let quad = poly(&f2, &[1, 1, 1]);
        let lin = poly(&f2, &[1, 1]);
        let mut a = r.mul(&quad, &quad);
        for _ in 0..4 {
            a = r.mul(&a, &lin);
        }
        assert_eq!(r.factorization_pattern(&a).unwrap().to_string(), "1^4 2^2");
    }

    #[test]
    fn pattern_over_extension_field() {
        // T^2 + 1 over F_9 splits (F_9 contains i); over F_3 it does not.
        let f9 = Field::new(3, 2).unwrap();
        let r = PolyRing::new(&f9);
        let a = UPoly::from_ints(&f9, &[1, 0, 1]);
        assert_eq!(r.factorization_pattern(&a).unwrap().to_string(), "1^2");
        // T^3 - t over F_9 where t^2 = -1: zero derivative, p-th root descent.
        let t = f9.from_coeffs(&[0, 1]);
        let b = UPoly::from_coeffs(vec![f9.neg(t), f9.zero(), f9.zero(), f9.one()]);
        assert_eq!(r.factorization_pattern(&b).unwrap().to_string(), "1^3");
    }

    #[test]
    fn pattern_parse_and_order() {
        let a: FactPattern = "1^1 2^1".parse().unwrap();
        assert_eq!(a.n(), 3);
        assert_eq!(a.count(2), 1);
        let b: FactPattern = "1^3".parse().unwrap();
        let c: FactPattern = "3^1".parse().unwrap();
        let mut v = vec![c.clone(), a.clone(), b.clone()];
        v.sort();
        assert_eq!(v, vec![b, a, c]);
        assert!(FactPattern::new(3, vec![1, 0, 1]).is_err());
        assert!("0^2".parse::<FactPattern>().is_err());
    }
}
