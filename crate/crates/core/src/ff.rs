//! Finite fields F_p and F_{p^k}.
//!
//! Elements are stored by index: the coefficient vector `(c_0, .., c_{k-1})`
//! of `c_0 + c_1 t + .. + c_{k-1} t^{k-1}` modulo the field's defining
//! polynomial is encoded as `c_0 + c_1 p + .. + c_{k-1} p^{k-1}`. Canonical
//! enumeration order is index order, so the prime subfield occupies the
//! indices `0..p`.
//!
//! Multiplication goes through discrete log tables built once at
//! construction; a [`Field`] is immutable afterwards.

use crate::error::{Error, Result};
use crate::linalg;

/// Largest field order a [`Field`] may be built with.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense helpers over F_p on low-to-high digit vectors, used before the log
// tables exist.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_mod_p(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    pow_mod_p(a, p - 2, p)
}

fn pow_mod_p(a: u32, mut e: u32, p: u32) -> u32 {
    let (mut base, mut acc) = (a as u64 % p as u64, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn mul_mod_poly(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
        }
    }
    rem_mod_p(&prod, m, p)
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
fn is_irreducible_mod_p(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits(idx as u32, p, d);
            g.push(1);
            if rem_mod_p(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(idx % p);
        idx /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl Field {
    /// Builds F_{p^k}, choosing the least monic irreducible modulus of
    /// degree `k` in index order of its lower coefficients.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidInput("extension degree must be >= 1".into()));
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge {
                p,
                k,
                ceiling: MAX_FIELD_ORDER,
            });
        }
        let (p, q) = (p as u32, order as u32);
        let modulus = if k == 1 {
            None
        } else {
            let lower = (p as u64).pow(k) as u32;
            let found = (0..lower).find_map(|idx| {
                let mut f = digits(idx, p, k as usize);
                f.push(1);
                (f[0] != 0 && is_irreducible_mod_p(&f, p)).then_some(f)
            });
            Some(found.ok_or(Error::NoIrreducibleFound { p, k })?)
        };

        // Multiplicative generator: first index whose order is q - 1.
        let slow_mul = |a: u32, b: u32| -> u32 {
            match &modulus {
                None => (a as u64 * b as u64 % p as u64) as u32,
                Some(m) => {
                    let r =
                        mul_mod_poly(&digits(a, p, k as usize), &digits(b, p, k as usize), m, p);
                    undigits(&r, p)
                }
            }
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let (mut base, mut acc) = (a, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };
        let group = (q - 1) as u64;
        let factors = prime_factors(group);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&l| slow_pow(g, group / l) != 1))
            .ok_or(Error::NoIrreducibleFound { p, k })?;

        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..(q - 1) as usize {
            exp[i] = cur;
            exp[i + q as usize - 1] = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator);
        }
        Ok(Field {
            p,
            k,
            q,
            modulus,
            exp,
            log,
        })
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// Defining polynomial, low-to-high and monic; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Element with the given index; panics when out of range.
    pub fn elem(&self, index: u32) -> Elem {
        assert!(index < self.q, "index {index} outside F_{}", self.q);
        Elem(index)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Elem {
        assert!(coeffs.len() <= self.k as usize);
        Elem(undigits(
            &coeffs.iter().map(|c| c % self.p).collect::<Vec<_>>(),
            self.p,
        ))
    }

    /// Coefficient vector of length `k` over F_p.
    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        digits(x.0, self.p, self.k as usize)
    }

    /// Returns the prime-subfield value of `x`, if it lies there.
    pub fn as_prime(&self, x: Elem) -> Option<u32> {
        (x.0 < self.p).then_some(x.0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(Elem)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        for _ in 0..self.k {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        for _ in 0..self.k {
            let d = (self.p - x % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let l = self.log[a.0 as usize];
        Some(Elem(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    /// `a / b`; panics on division by zero.
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b).expect("division by zero in F_q"))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let l = self.log[a.0 as usize] as u128 * e as u128 % (self.q - 1) as u128;
        Elem(self.exp[l as usize])
    }

    /// `x^(p^e)`: the `e`-th iterate of the absolute Frobenius.
    pub fn frobenius(&self, x: Elem, e: u32) -> Elem {
        self.frobenius_over(x, self.p, e)
    }

    /// `x^(base^e)` for a subfield order `base`.
    pub fn frobenius_over(&self, x: Elem, base: u32, e: u32) -> Elem {
        if x.0 == 0 {
            return x;
        }
        let modulus = (self.q - 1) as u64;
        let mut factor = 1u64 % modulus.max(1);
        for _ in 0..e {
            factor = factor * base as u64 % modulus.max(1);
        }
        if modulus == 1 {
            return x;
        }
        self.pow(x, factor)
    }

    /// The degree `i` with `base^i = q`, if F_base is a subfield.
    pub fn degree_over(&self, base: u32) -> Result<u32> {
        let not_ext = Error::NotAnExtension { base, ext: self.q };
        let (mut b, mut j) = (base, 0u32);
        while b > 1 && b % self.p == 0 {
            b /= self.p;
            j += 1;
        }
        if b != 1 || j == 0 || !self.k.is_multiple_of(j) {
            return Err(not_ext);
        }
        Ok(self.k / j)
    }

    /// Conjugates `theta, theta^base, .., theta^(base^(i-1))`.
    pub fn conjugates(&self, theta: Elem, base: u32) -> Result<Vec<Elem>> {
        let i = self.degree_over(base)?;
        let mut out = Vec::with_capacity(i as usize);
        let mut cur = theta;
        for _ in 0..i {
            out.push(cur);
            cur = self.pow(cur, base as u64);
        }
        Ok(out)
    }

    /// Whether the conjugates of `theta` over F_base form a basis.
    ///
    /// Over the prime field the coefficient vectors are rank-tested directly;
    /// over a larger subfield the Moore matrix determinant is used.
    pub fn is_normal(&self, theta: Elem, base: u32) -> Result<bool> {
        let conj = self.conjugates(theta, base)?;
        if base == self.p {
            let prime = Field::prime(self.p as u64)?;
            let rows: Vec<Vec<Elem>> = conj
                .iter()
                .map(|&c| self.coeffs(c).into_iter().map(Elem).collect())
                .collect();
            Ok(linalg::rank(&prime, rows) == conj.len())
        } else {
            let n = conj.len();
            let moore: Vec<Vec<Elem>> = (0..n)
                .map(|a| (0..n).map(|h| conj[(a + h) % n]).collect())
                .collect();
            Ok(!linalg::det(self, moore).is_zero())
        }
    }

    /// First element in index order that generates a normal basis over F_base.
    pub fn find_normal_element(&self, base: u32) -> Result<Elem> {
        for theta in self.elements().skip(1) {
            if self.is_normal(theta, base)? {
                return Ok(theta);
            }
        }
        Err(Error::NormalElementNotFound {
            order: self.q,
            base,
        })
    }

    /// Table sending each element of `self` to its image in `ext`.
    ///
    /// The generator `t` of `self` is sent to the first root of the defining
    /// polynomial in `ext` (index order).
    pub fn embedding_into(&self, ext: &Field) -> Result<Vec<Elem>> {
        if self.p != ext.p || !ext.k.is_multiple_of(self.k) {
            return Err(Error::NotAnExtension {
                base: self.q,
                ext: ext.q,
            });
        }
        let Some(m) = &self.modulus else {
            return Ok((0..self.q).map(Elem).collect());
        };
        let eval = |beta: Elem| {
            m.iter()
                .rev()
                .fold(Elem::ZERO, |acc, &c| ext.add(ext.mul(acc, beta), Elem(c)))
        };
        let beta = ext
            .elements()
            .find(|&b| eval(b).is_zero())
            .ok_or(Error::NotAnExtension {
                base: self.q,
                ext: ext.q,
            })?;
        let powers: Vec<Elem> = (0..self.k).map(|j| ext.pow(beta, j as u64)).collect();
        Ok(self
            .elements()
            .map(|x| {
                self.coeffs(x)
                    .iter()
                    .zip(&powers)
                    .fold(Elem::ZERO, |acc, (&c, &b)| {
                        ext.add(acc, ext.mul(Elem(c), b))
                    })
            })
            .collect())
    }
}
