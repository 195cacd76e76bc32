use num_bigint::BigInt;

use crate::error::{invalid, Error, Result};
use crate::exact::{fmt_rational, int, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleParams {
    pub delta: Rational,
    pub p: Rational,
    /// Class size of the base graph.
    pub k: usize,
    /// Blowup factor.
    pub m: usize,
    /// Accept any `p` and `k`, recording the audits instead of enforcing them.
    pub relaxed: bool,
    pub max_attempts: u32,
}

impl CounterexampleParams {
    /// `δ = 1/2`, `p = 1/30`, `k = 12`, `m = 3`, relaxed.
    pub fn desk() -> Self {
        CounterexampleParams {
            delta: Rational::new(1.into(), 2.into()),
            p: Rational::new(1.into(), 30.into()),
            k: 12,
            m: 3,
            relaxed: true,
            max_attempts: 64,
        }
    }

    pub fn q(&self) -> Rational {
        int(3) * &self.p
    }

    /// `[⌈64δ⁻²q⁻¹⌉, ⌊δ³q⁻²/4⌋]`, or `None` when empty.
    pub fn k_window(&self) -> Option<(BigInt, BigInt)> {
        let q = self.q();
        let lo = int(64) / (&self.delta * &self.delta * &q);
        let hi = &self.delta * &self.delta * &self.delta / (int(4) * &q * &q);
        let lo = lo.ceil().to_integer();
        let hi = hi.floor().to_integer();
        (lo <= hi).then_some((lo, hi))
    }

    /// `p <= 10⁻³δ⁵`.
    pub fn p_in_range(&self) -> bool {
        self.p <= num_traits::pow(self.delta.clone(), 5) / int(1000)
    }

    pub fn k_in_window(&self) -> bool {
        self.k_window().is_some_and(|(lo, hi)| {
            let k = BigInt::from(self.k);
            lo <= k && k <= hi
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta <= int(0) || self.delta > int(1) {
            return invalid("delta must lie in (0, 1]");
        }
        if self.p <= int(0) || self.q() > int(1) {
            return invalid("need 0 < p and q = 3p <= 1");
        }
        if self.k == 0 || self.m == 0 || self.max_attempts == 0 {
            return invalid("k, m and the attempt budget must be positive");
        }
        if !self.relaxed {
            if !self.p_in_range() {
                return Err(Error::Regime(format!("p = {} exceeds 10^-3·δ^5", self.p)));
            }
            match self.k_window() {
                None => return Err(Error::Regime("the k-window is empty".into())),
                Some((lo, hi)) if !self.k_in_window() => {
                    return Err(Error::Regime(format!("k = {} outside [{lo}, {hi}]", self.k)))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// `δ³k²q`, the triangle budget.
    pub fn triangle_bound(&self) -> Rational {
        num_traits::pow(self.delta.clone(), 3) * int((self.k * self.k) as u64) * self.q()
    }

    /// Subset size `⌈δk⌉` used on the base graph.
    pub fn base_threshold(&self) -> usize {
        let c = (&self.delta * int(self.k as u64)).ceil().to_integer();
        usize::try_from(c).unwrap_or(usize::MAX)
    }

    pub fn to_text(&self) -> String {
        format!(
            "counterexample v1\ndelta {}\np {}\nk {}\nm {}\nrelaxed {}\nmax_attempts {}\n",
            fmt_rational(&self.delta),
            fmt_rational(&self.p),
            self.k,
            self.m,
            self.relaxed,
            self.max_attempts
        )
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("counterexample v1") {
            return Err(Error::Parse("missing counterexample header".into()));
        }
        let mut out = CounterexampleParams::desk();
        for l in lines {
            let (key, val) = l.trim().split_once(' ').ok_or_else(|| Error::Parse(format!("bad line {l:?}")))?;
            let num = |v: &str| v.parse::<u64>().map_err(|_| Error::Parse(format!("bad number {v:?}")));
            match key {
                "delta" => out.delta = parse_rational(val)?,
                "p" => out.p = parse_rational(val)?,
                "k" => out.k = num(val)? as usize,
                "m" => out.m = num(val)? as usize,
                "relaxed" => out.relaxed = val.trim().parse().map_err(|_| Error::Parse(format!("bad flag {val:?}")))?,
                "max_attempts" => out.max_attempts = num(val)? as u32,
                _ => return Err(Error::Parse(format!("unknown key {key:?}"))),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn window_is_nonempty_at_the_p_bound() {
        for d in [ratio(1, 2), ratio(1, 4), ratio(1, 10)] {
            let p = num_traits::pow(d.clone(), 5) / int(1000);
            let params = CounterexampleParams { delta: d, p, relaxed: false, ..CounterexampleParams::desk() };
            assert!(params.k_window().is_some());
        }
    }

    #[test]
    fn strict_rejects_desk_sizes() {
        let params = CounterexampleParams { relaxed: false, ..CounterexampleParams::desk() };
        assert!(matches!(params.validate(), Err(Error::Regime(_))));
        assert!(CounterexampleParams::desk().validate().is_ok());
    }

    #[test]
    fn text_round_trip() {
        let p = CounterexampleParams::desk();
        assert_eq!(CounterexampleParams::from_text(&p.to_text()).unwrap(), p);
    }
}
