use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::exact::{int, pow2, ratio, Rational};

/// Default largest exact value, in bits.
pub const DEFAULT_CUTOFF_BITS: u64 = 1 << 16;

/// A nonnegative integer, exact when small and a tower descriptor otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Exact(BigUint),
    /// `2^x`.
    Pow2(Box<Magnitude>),
    /// A value described only by how it was formed.
    Opaque(String),
}

impl Magnitude {
    pub fn from_u64(x: u64) -> Self {
        Magnitude::Exact(BigUint::from(x))
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Exact(x) => Some(x),
            _ => None,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.exact().and_then(ToPrimitive::to_u64)
    }

    /// `2^self`, exact while it stays within `cutoff_bits`.
    pub fn pow2(self, cutoff_bits: u64) -> Magnitude {
        match self.to_u64() {
            Some(x) if x < cutoff_bits => Magnitude::Exact(BigUint::one() << x),
            _ => Magnitude::Pow2(Box::new(self)),
        }
    }

    /// `self / 2^a` for a power of two that divides it.
    fn div_pow2(&self, a: u64) -> Option<Magnitude> {
        match self {
            Magnitude::Exact(x) => {
                let d = BigUint::one() << a;
                (x % &d).is_zero().then(|| Magnitude::Exact(x / d))
            }
            Magnitude::Pow2(e) => match e.exact() {
                Some(x) if *x >= BigUint::from(a) => Some(Magnitude::Pow2(Box::new(Magnitude::Exact(x - a)))),
                Some(_) => None,
                None => Some(Magnitude::Opaque(format!("({self})/2^{a}"))),
            },
            Magnitude::Opaque(s) => Some(Magnitude::Opaque(format!("({s})/2^{a}"))),
        }
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Exact(x) if x.bits() <= 64 => write!(f, "{x}"),
            Magnitude::Exact(x) => write!(f, "<{} bits>", x.bits()),
            Magnitude::Pow2(e) => write!(f, "2^({e})"),
            Magnitude::Opaque(s) => write!(f, "{s}"),
        }
    }
}

/// `Ack_1(n) = 2^n`; `Ack_{k+1}(n)` iterates `Ack_k` `n` times from 1.
pub fn ackermann(k: u32, n: u64, cutoff_bits: u64) -> Result<Magnitude> {
    if k == 0 {
        return invalid("Ackermann level starts at 1");
    }
    if k == 1 {
        return Ok(Magnitude::from_u64(n).pow2(cutoff_bits));
    }
    let mut x = Magnitude::from_u64(1);
    for step in 0..n {
        let Some(arg) = x.to_u64() else {
            return Ok(Magnitude::Opaque(format!("Ack_{k}({n}) [exceeded at step {step}]")));
        };
        x = ackermann(k - 1, arg, cutoff_bits)?;
    }
    Ok(x)
}

/// `δ_k = 2^(-8^k)`, exact.
pub fn delta_k(k: u32) -> Result<Rational> {
    if k == 0 {
        return invalid("delta_k needs k >= 1");
    }
    if k > 6 {
        return Err(Error::Regime(format!("delta_{k} = 2^-(8^{k}) is too small to materialize")));
    }
    Ok(pow2(-(8i64.pow(k))))
}

/// The schedule functions `t`, `e`, `f*`, `A_k`, `A_k*`, `m_k`, `δ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSchedule {
    /// `t(1) = 2^200`, `e(i) = 2^(i+10)`, `A_k(1) = 2^(2^(3k+2))`.
    pub strict: bool,
    /// Desk `t(1)`.
    pub t1: u64,
    /// Desk `e(1), e(2), …`; the last entry repeats.
    pub e: Vec<u64>,
    /// Desk values `A_k(1), A_k(2), …` replacing the recurrence.
    pub a: BTreeMap<usize, Vec<u64>>,
    /// Desk values `A_k*(1), A_k*(2), …` replacing `t(A_k(i))/e(i)`.
    pub a_star: BTreeMap<usize, Vec<u64>>,
    /// Balanced-graph `α` and `β` for every core build; `None` keeps the defaults.
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub max_retries: u32,
    pub cutoff_bits: u64,
}

/// A schedule identity and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: String,
    pub detail: String,
}

impl ParamSchedule {
    pub fn strict() -> Self {
        ParamSchedule {
            strict: true,
            t1: 0,
            e: Vec::new(),
            a: BTreeMap::new(),
            a_star: BTreeMap::new(),
            alpha: None,
            beta: None,
            max_retries: 64,
            cutoff_bits: DEFAULT_CUTOFF_BITS,
        }
    }

    /// `t = (2, 4, 16)` with `e ≡ 1`, `A_3 = (1, 2)` and `A_3* = (1, 2)`.
    pub fn desk() -> Self {
        ParamSchedule {
            strict: false,
            t1: 2,
            e: vec![1],
            a: BTreeMap::from([(3, vec![1, 2])]),
            a_star: BTreeMap::from([(3, vec![1, 2])]),
            alpha: Some(ratio(1, 1)),
            beta: Some(ratio(1, 2)),
            max_retries: 64,
            cutoff_bits: DEFAULT_CUTOFF_BITS,
        }
    }

    pub fn e(&self, i: usize) -> Result<Magnitude> {
        if i == 0 {
            return invalid("e(i) needs i >= 1");
        }
        if self.strict {
            return Ok(Magnitude::Exact(BigUint::one() << (i + 10)));
        }
        match self.e.get(i - 1).or(self.e.last()) {
            Some(&x) => Ok(Magnitude::from_u64(x)),
            None => invalid("desk schedule has no e values"),
        }
    }

    fn e_log2(&self, i: usize) -> Result<u64> {
        if self.strict {
            return Ok(i as u64 + 10);
        }
        let e = self.e(i)?.to_u64().unwrap_or(0);
        if !e.is_power_of_two() {
            return invalid(format!("e({i}) = {e} is not a power of 2"));
        }
        Ok(e.trailing_zeros() as u64)
    }

    /// `t(i)`, `i >= 1`.
    pub fn t(&self, i: usize) -> Result<Magnitude> {
        if i == 0 {
            return invalid("t(i) needs i >= 1");
        }
        let mut x = if self.strict { Magnitude::from_u64(200).pow2(self.cutoff_bits) } else { Magnitude::from_u64(self.t1) };
        for j in 1..i {
            if j > 64 || matches!(x, Magnitude::Opaque(_)) {
                return Ok(Magnitude::Opaque(format!("t({i})")));
            }
            let a = self.e_log2(j)?;
            x = match x.div_pow2(a) {
                Some(q) => {
                    if q.exact().is_some_and(Zero::is_zero) {
                        return Err(Error::Invalid(format!("t({j})/e({j}) is zero")));
                    }
                    q.pow2(self.cutoff_bits)
                }
                None => return Err(Error::Invalid(format!("t({j})/e({j}) is not an integer"))),
            };
        }
        Ok(x)
    }

    pub fn t_usize(&self, i: usize) -> Result<usize> {
        let t = self.t(i)?;
        t.to_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| Error::Regime(format!("t({i}) = {t} cannot be materialized")))
    }

    /// `f*(i) = t(f(i))/e(i)`.
    pub fn f_star(&self, fi: &Magnitude, i: usize) -> Result<Magnitude> {
        let t = match fi.to_u64().and_then(|x| usize::try_from(x).ok()) {
            Some(x) => self.t(x)?,
            None => Magnitude::Opaque(format!("t({fi})")),
        };
        t.div_pow2(self.e_log2(i)?).ok_or_else(|| Error::Invalid(format!("f*({i}) is not an integer")))
    }

    /// `A_k(i)`.
    pub fn a_k(&self, k: usize, i: usize) -> Result<Magnitude> {
        if k < 2 || i == 0 {
            return invalid(format!("A_k(i) needs k >= 2 and i >= 1, got k = {k}, i = {i}"));
        }
        if k == 2 {
            return Ok(Magnitude::from_u64(i as u64));
        }
        if let Some(&v) = self.a.get(&k).and_then(|v| v.get(i - 1)) {
            return Ok(Magnitude::from_u64(v));
        }
        if i == 1 {
            return Ok(Magnitude::from_u64(1u64 << (3 * k + 2).min(63)).pow2(self.cutoff_bits));
        }
        let inner = self.a_k_star(k, i - 1)?;
        match inner.to_u64().and_then(|x| usize::try_from(x).ok()) {
            Some(x) if x >= 1 => self.a_k(k - 1, x),
            _ => Ok(Magnitude::Opaque(format!("A_{}({inner})", k - 1))),
        }
    }

    /// `A_k*(i) = t(A_k(i))/e(i)`.
    pub fn a_k_star(&self, k: usize, i: usize) -> Result<Magnitude> {
        if let Some(&v) = self.a_star.get(&k).and_then(|v| v.get(i - 1)) {
            return Ok(Magnitude::from_u64(v));
        }
        self.f_star(&self.a_k(k, i)?, i)
    }

    /// `m_k(i) = A_2*(⋯(A_k*(i))⋯)`.
    pub fn m_k(&self, k: usize, i: usize) -> Result<Magnitude> {
        let mut x = Magnitude::from_u64(i as u64);
        for h in (2..=k).rev() {
            x = match x.to_u64().and_then(|x| usize::try_from(x).ok()) {
                Some(v) if v >= 1 => self.a_k_star(h, v)?,
                _ => Magnitude::Opaque(format!("A_{h}*({x})")),
            };
        }
        Ok(x)
    }

    pub fn a_k_usize(&self, k: usize, i: usize) -> Result<usize> {
        let v = self.a_k(k, i)?;
        v.to_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| Error::Regime(format!("A_{k}({i}) = {v} cannot be materialized")))
    }

    pub fn a_k_star_usize(&self, k: usize, i: usize) -> Result<usize> {
        let v = self.a_k_star(k, i)?;
        v.to_u64()
            .and_then(|x| usize::try_from(x).ok())
            .ok_or_else(|| Error::Regime(format!("A_{k}*({i}) = {v} cannot be materialized")))
    }

    /// Checks the identities the strict schedule satisfies on the values a
    /// build with `(k, s)` uses, and lists every one that fails.
    pub fn violations(&self, k: usize, s: usize) -> Result<Vec<Violation>> {
        let mut out = Vec::new();
        let mut flag = |identity: String, ok: bool, detail: String| {
            if !ok {
                out.push(Violation { identity, detail });
            }
        };
        let levels = self.levels_used(k, s)?;
        for i in 2..=levels {
            let (a, b) = (self.t(i - 1)?, self.t(i)?);
            let ok = match (a.exact(), b.exact()) {
                (Some(a), Some(b)) => *b >= a * 4u32,
                _ => true,
            };
            flag(format!("t({i}) >= 4t({})", i - 1), ok, format!("t({}) = {a}, t({i}) = {b}", i - 1));
        }
        for h in 3..=k {
            let hs = self.sub_levels(k, s, h)?;
            for i in 1..=hs {
                let a = self.a_k(h, i)?;
                if i == 1 {
                    let paper = Magnitude::from_u64(1u64 << (3 * h + 2).min(63)).pow2(self.cutoff_bits);
                    flag(format!("A_{h}(1) = 2^(2^{})", 3 * h + 2), a == paper, format!("A_{h}(1) = {a}"));
                } else {
                    let prev = self.a_k_star(h, i - 1)?;
                    let want = match prev.to_u64().and_then(|x| usize::try_from(x).ok()) {
                        Some(x) if x >= 1 => self.a_k(h - 1, x)?,
                        _ => Magnitude::Opaque(String::new()),
                    };
                    flag(format!("A_{h}({i}) = A_{}(A_{h}*({}))", h - 1, i - 1), a == want, format!("{a} vs {want}"));
                }
                let star = self.a_k_star(h, i)?;
                let want = self.f_star(&a, i);
                let detail = match &want {
                    Ok(w) => format!("{star} vs {w}"),
                    Err(e) => format!("{star} vs {e}"),
                };
                flag(format!("A_{h}*({i}) = t(A_{h}({i}))/e({i})"), want.as_ref().ok() == Some(&star), detail);
                if let (Some(x), Ok(ack)) = (a.to_u64(), ackermann(h as u32, i as u64, 64)) {
                    let ok = ack.to_u64().is_some_and(|v| x >= v);
                    flag(format!("A_{h}({i}) >= Ack_{h}({i})"), ok, format!("{x} vs {ack}"));
                }
            }
        }
        let m = self.m_k(k, s)?;
        let ok = m.to_u64() == Some(levels as u64);
        flag(format!("m_{k}({s}) equals the levels consumed"), ok, format!("m_{k}({s}) = {m}, consumed {levels}"));
        Ok(out)
    }

    /// Length `s_h` of the family built at uniformity `h` inside a `(k, s)` build.
    pub fn sub_levels(&self, k: usize, s: usize, h: usize) -> Result<usize> {
        let mut s_h = s;
        for g in ((h + 1)..=k).rev() {
            s_h = self.a_k_star_usize(g, s_h)?;
        }
        Ok(s_h)
    }

    /// Number of chain levels `𝒱_1 … 𝒱_m` a `(k, s)` build reads.
    pub fn levels_used(&self, k: usize, s: usize) -> Result<usize> {
        let mut need = self.sub_levels(k, s, 2)? + 1;
        for h in 3..=k {
            let s_h = self.sub_levels(k, s, h)?;
            need = need.max(self.a_k_usize(h, s_h)?);
        }
        Ok(need)
    }
}

/// `(2k/2^k)·2^(-s)`.
pub fn pasted_density(k: usize, s: usize) -> Rational {
    int(2 * k as u64) * pow2(-(k as i64)) * pow2(-(s as i64))
}
