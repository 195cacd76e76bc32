//! Exact arithmetic helpers.
//!
//! Every verdict in the crate is decided with integers or arbitrary
//! precision rationals. Thresholds that involve roots (for example
//! `|L|^(-1/6)` or `2·sqrt(delta)`) are carried as [`Real`] values of the
//! form `c · r^(1/n)` and compared exactly by raising both sides to a common
//! power.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as a rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` for any signed exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3/16"`, `"7"`, or a finite decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((w, f)) = s.split_once('.') {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = w.starts_with('-');
        let w: BigInt = if w.is_empty() || w == "-" {
            BigInt::zero()
        } else {
            w.parse().map_err(|_| bad())?
        };
        let den = num_traits::pow(BigInt::from(10u32), f.len());
        let frac: BigInt = f.parse().map_err(|_| bad())?;
        let mag = w.abs() * &den + frac;
        let num = if neg { -mag } else { mag };
        return Ok(Rational::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Formats as `n/d`, or `n` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Smallest integer `a` with `a >= x` for a nonnegative rational.
pub fn ceil_u64(x: &Rational) -> u64 {
    x.ceil().to_integer().to_u64().expect("ceil out of range")
}

/// A nonnegative real `coeff · radicand^(1/index)`.
#[derive(Clone, Debug)]
pub struct Real {
    coeff: Rational,
    radicand: Rational,
    index: u32,
}

impl Real {
    pub fn rational(x: Rational) -> Self {
        assert!(!x.is_negative(), "Real must be nonnegative");
        Real { coeff: x, radicand: Rational::one(), index: 1 }
    }

    /// `radicand^(1/index)`.
    pub fn root(radicand: Rational, index: u32) -> Self {
        assert!(index >= 1);
        assert!(!radicand.is_negative(), "Real must be nonnegative");
        Real { coeff: Rational::one(), radicand, index }
    }

    pub fn sqrt(x: Rational) -> Self {
        Self::root(x, 2)
    }

    pub fn scale(mut self, c: &Rational) -> Self {
        assert!(!c.is_negative());
        self.coeff *= c;
        self
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.index == 1 || self.radicand.is_one() || self.radicand.is_zero() {
            Some(&self.coeff * self.radicand_root_if_trivial())
        } else {
            None
        }
    }

    fn radicand_root_if_trivial(&self) -> Rational {
        if self.index == 1 {
            self.radicand.clone()
        } else if self.radicand.is_zero() {
            Rational::zero()
        } else {
            Rational::one()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.radicand.is_zero()
    }

    /// Value raised to the integer power `n` (a multiple of `index`).
    fn raised(&self, n: u32) -> Rational {
        debug_assert!(n.is_multiple_of(self.index));
        let c = num_traits::pow(self.coeff.clone(), n as usize);
        let r = num_traits::pow(self.radicand.clone(), (n / self.index) as usize);
        c * r
    }

    pub fn cmp_real(&self, other: &Real) -> Ordering {
        let n = self.index.lcm(&other.index);
        self.raised(n).cmp(&other.raised(n))
    }

    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        if x.is_negative() {
            return Ordering::Greater;
        }
        self.cmp_real(&Real::rational(x.clone()))
    }

    pub fn max(self, other: Real) -> Real {
        if self.cmp_real(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        let c = to_f64(&self.coeff);
        let r = to_f64(&self.radicand);
        if r.is_finite() && r > 0.0 {
            c * r.powf(1.0 / self.index as f64)
        } else {
            // Radicand outside f64 range: go through logarithms of the parts.
            let ln = ln_rational(&self.coeff) + ln_rational(&self.radicand) / self.index as f64;
            ln.exp()
        }
    }

    /// `⌈self · n⌉`, exactly.
    pub fn ceil_mul(&self, n: u64) -> u64 {
        let target = self.clone().scale(&int(n));
        let est = target.to_f64();
        let mut a: u64 = if est.is_finite() && est > 0.0 { est.ceil().min(u64::MAX as f64) as u64 } else { 0 };
        while target.cmp_rational(&int(a)) == Ordering::Greater {
            a += 1;
        }
        while a > 0 && target.cmp_rational(&int(a - 1)) != Ordering::Greater {
            a -= 1;
        }
        a
    }

    /// True iff `self · n <= m`, i.e. `m/n >= self`.
    pub fn le_fraction(&self, m: u64, n: u64) -> bool {
        assert!(n > 0);
        self.cmp_rational(&Rational::new(BigInt::from(m), BigInt::from(n))) != Ordering::Greater
    }
}

fn ln_rational(x: &Rational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    ln_big(n) - ln_big(d)
}

fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_real(other) == Ordering::Equal
    }
}

impl From<Rational> for Real {
    fn from(x: Rational) -> Self {
        Real::rational(x)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", fmt_rational(&r));
        }
        if !self.coeff.is_one() {
            write!(f, "{}*", fmt_rational(&self.coeff))?;
        }
        write!(f, "({})^(1/{})", fmt_rational(&self.radicand), self.index)
    }
}
