//! Closed rational intervals with outward-rounded enclosures of `e`, square
//! roots and the exponential.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Denominator bits kept after outward rounding.
const PRECISION_BITS: u64 = 96;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    pub fn exact(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Interval::exact(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Interval::int(0)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// Division by an interval of strictly positive numbers.
    pub fn div_pos(&self, o: &Interval) -> Interval {
        assert!(o.lo.is_positive(), "divisor must be positive");
        let inv = Interval::new(o.hi.recip(), o.lo.recip());
        self.mul(&inv)
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Interval::new(-self.hi.clone(), -self.lo.clone())
        } else {
            Interval::new(BigRational::zero(), (-self.lo.clone()).max(self.hi.clone()))
        }
    }

    /// Widens the endpoints to dyadic rationals with bounded denominators.
    pub fn round_out(&self) -> Interval {
        if self.is_exact() && self.lo.denom().bits() <= PRECISION_BITS {
            return self.clone();
        }
        let scale = BigRational::from_integer(BigInt::one() << PRECISION_BITS);
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        Interval::new(lo, hi)
    }

    /// Certainly `self <= o`.
    pub fn certainly_le(&self, o: &Interval) -> bool {
        self.hi <= o.lo
    }

    /// Decimal rendering: exact values as integers or `a/b`, others as
    /// `[lo, hi]` rounded outward to `digits` places.
    pub fn render(&self, digits: usize) -> String {
        if self.is_exact() {
            if self.lo.is_integer() {
                return self.lo.to_integer().to_string();
            }
            return format!("{}/{}", self.lo.numer(), self.lo.denom());
        }
        format!(
            "[{}, {}]",
            decimal(&self.lo, digits, false),
            decimal(&self.hi, digits, true)
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(12))
    }
}

/// Fixed-point decimal with `digits` fractional places, rounded down or up.
pub fn decimal(x: &BigRational, digits: usize, round_up: bool) -> String {
    let scale = BigRational::from_integer(BigInt::from(10u32).pow(digits as u32));
    let scaled = x * scale;
    let n = if round_up {
        scaled.ceil()
    } else {
        scaled.floor()
    }
    .to_integer();
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
        }
        s.insert(s.len() - digits, '.');
    }
    if neg {
        s.insert(0, '-');
    }
    s
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Enclosure of Euler's number.
pub fn e() -> Interval {
    // Σ_{k≤N} 1/k! < e < Σ_{k≤N} 1/k! + 2/(N+1)!
    let n = 40u32;
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for k in 0..=n {
        if k > 0 {
            term /= BigRational::from_integer(BigInt::from(k));
        }
        sum += &term;
    }
    let tail = term * rat(2, n as i64 + 1);
    Interval::new(sum.clone(), sum + tail).round_out()
}

/// Enclosure of `√n`.
pub fn sqrt(n: &BigUint) -> Interval {
    let scaled: BigUint = n << (2 * PRECISION_BITS);
    let root = scaled.sqrt();
    let denom = BigInt::one() << PRECISION_BITS;
    let lo = BigRational::new(BigInt::from(root.clone()), denom.clone());
    let hi = if &root * &root == scaled {
        lo.clone()
    } else {
        BigRational::new(BigInt::from(root + 1u32), denom)
    };
    Interval::new(lo, hi)
}

/// Enclosure of `exp(x)` for `x` in a nonnegative interval.
pub fn exp(x: &Interval) -> Interval {
    assert!(!x.lo.is_negative(), "exp enclosure expects x >= 0");
    let lo = taylor(&x.lo, false);
    let hi = taylor(&x.hi, true);
    Interval::new(lo, hi).round_out()
}

fn taylor(x: &BigRational, upper: bool) -> BigRational {
    // terms until the tail ratio x/(k+2) is below 1/2, then the geometric
    // remainder bound doubles the last term
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut k: i64 = 0;
    let half = rat(1, 2);
    let tiny = BigRational::new(BigInt::one(), BigInt::one() << (PRECISION_BITS + 8));
    loop {
        sum += &term;
        let next = &term * x / BigRational::from_integer(BigInt::from(k + 1));
        let ratio = x / BigRational::from_integer(BigInt::from(k + 2));
        k += 1;
        term = next;
        if ratio < half && term < tiny {
            break;
        }
        // keep the exact expansion compact
        let scale = BigRational::from_integer(BigInt::one() << (PRECISION_BITS + 16));
        if !upper {
            term = (&term * &scale).floor() / &scale;
        } else {
            term = (&term * &scale).ceil() / &scale;
        }
    }
    if upper {
        sum + term * BigRational::from_integer(BigInt::from(2))
    } else {
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(i: &Interval) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (i.lo().to_f64().unwrap(), i.hi().to_f64().unwrap())
    }

    #[test]
    fn e_encloses_std_constant() {
        let (lo, hi) = approx(&e());
        assert!(lo <= std::f64::consts::E && std::f64::consts::E <= hi);
        assert!(hi - lo < 1e-20);
    }

    #[test]
    fn sqrt_bounds() {
        let s = sqrt(&BigUint::from(16u32));
        assert!(s.is_exact());
        assert_eq!(s.render(3), "4");
        let s = sqrt(&BigUint::from(2u32));
        let (lo, hi) = approx(&s);
        assert!(lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= hi);
        // squares straddle 2
        let two = BigRational::from_integer(BigInt::from(2));
        assert!(s.lo() * s.lo() <= two && two <= s.hi() * s.hi());
    }

    #[test]
    fn exp_encloses() {
        for x in [0.0f64, 0.5, 1.0, 7.483, 20.0] {
            let r = BigRational::from_float(x).unwrap();
            let (lo, hi) = approx(&exp(&Interval::exact(r)));
            let want = x.exp();
            assert!(
                lo <= want * (1.0 + 1e-15) && want * (1.0 - 1e-15) <= hi,
                "{x}"
            );
            assert!((hi - lo) / want < 1e-20);
        }
        let one = exp(&Interval::int(1));
        assert!(one.lo() <= e().hi() && e().lo() <= one.hi());
    }

    #[test]
    fn abs_and_render() {
        let i = Interval::new(rat(-3, 2), rat(1, 1));
        assert_eq!(i.abs(), Interval::new(rat(0, 1), rat(3, 2)));
        assert_eq!(Interval::exact(rat(17, 5)).render(4), "17/5");
        assert_eq!(
            Interval::new(rat(1, 3), rat(2, 3)).render(3),
            "[0.333, 0.667]"
        );
        assert_eq!(decimal(&rat(-1, 8), 2, false), "-0.13");
        assert_eq!(decimal(&rat(5, 100), 3, true), "0.050");
    }
}
