use crate::error::{invalid, Error, Result};
use crate::exact::{fmt_rational, int, parse_rational, ratio, Rational, Real};

/// Largest exponent accepted for `|ℒ_i| = 2^(|ℛ_i|/e(i))`.
pub const MAX_LEFT_EXPONENT: usize = 24;

/// Sizes and parameters of a chain `ℛ₁ ≻ … ≻ ℛ_s`, `ℒ₁ ≻ … ≻ ℒ_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthProfile {
    /// `|ℛ_i|` for `i = 1..=s`.
    pub r_sizes: Vec<usize>,
    /// Divisors `e(i)` in `|ℒ_i| = 2^(|ℛ_i|/e(i))`.
    pub e: Vec<usize>,
    /// Vertices per `ℒ_s`-cluster.
    pub blowup_l: usize,
    /// Vertices per `ℛ_s`-cluster.
    pub blowup_r: usize,
    /// Per-level `α_i`; `None` means `|ℒ_i|^(-1/6)`.
    pub alpha: Vec<Option<Rational>>,
    /// Per-level `β`; `None` means `1/16`.
    pub beta: Vec<Option<Rational>>,
    pub require_quadrupling: bool,
    pub max_retries: u32,
    /// Keep the last sample when the retries run out.
    pub keep_unaccepted: bool,
    /// Enforce `|ℛ₁| >= 2^200`, `|ℛ_{i+1}| >= 4|ℛ_i|` and `e(i) = 2^(i+10)`.
    pub strict: bool,
}

impl GrowthProfile {
    /// The paper's sizing rule for the given `|ℛ_i|`.
    pub fn paper(r_sizes: Vec<usize>) -> Self {
        let s = r_sizes.len();
        GrowthProfile {
            e: (1..=s).map(|i| 1usize << (i + 10).min(63)).collect(),
            r_sizes,
            blowup_l: 1,
            blowup_r: 1,
            alpha: vec![None; s],
            beta: vec![None; s],
            require_quadrupling: true,
            max_retries: 64,
            keep_unaccepted: false,
            strict: true,
        }
    }

    /// `s = 3`, `|ℛ| = (8, 32, 128)`, `e = (2, 4, 8)`, so `|ℒ| = (16, 256, 65536)`.
    pub fn desk() -> Self {
        GrowthProfile {
            r_sizes: vec![8, 32, 128],
            e: vec![2, 4, 8],
            blowup_l: 1,
            blowup_r: 1,
            alpha: vec![Some(ratio(1, 2)), Some(ratio(3, 4)), Some(ratio(1, 2))],
            beta: vec![Some(ratio(1, 2)); 3],
            require_quadrupling: true,
            max_retries: 64,
            keep_unaccepted: false,
            strict: false,
        }
    }

    pub fn s(&self) -> usize {
        self.r_sizes.len()
    }

    /// `|ℒ_i|` for `i = 1..=s`.
    pub fn l_sizes(&self) -> Result<Vec<usize>> {
        self.r_sizes
            .iter()
            .zip(&self.e)
            .enumerate()
            .map(|(i, (&r, &e))| {
                if e == 0 || r % e != 0 {
                    return invalid(format!("level {}: e(i)={e} does not divide |R_i|={r}", i + 1));
                }
                let x = r / e;
                if x > MAX_LEFT_EXPONENT {
                    return invalid(format!("level {}: |L_i| = 2^{x} exceeds 2^{MAX_LEFT_EXPONENT}", i + 1));
                }
                Ok(1usize << x)
            })
            .collect()
    }

    pub fn left_size(&self) -> Result<usize> {
        Ok(self.l_sizes()?.last().copied().unwrap_or(1) * self.blowup_l)
    }

    pub fn right_size(&self) -> usize {
        self.r_sizes.last().copied().unwrap_or(1) * self.blowup_r
    }

    /// `α_i`, 1-based level.
    pub fn alpha_at(&self, i: usize) -> Result<Real> {
        match self.alpha.get(i - 1).cloned().flatten() {
            Some(a) => Ok(Real::rational(a)),
            None => {
                let l = self.l_sizes()?[i - 1];
                Ok(Real::root(ratio(1, l as i64), 6))
            }
        }
    }

    pub fn beta_at(&self, i: usize) -> Rational {
        self.beta.get(i - 1).cloned().flatten().unwrap_or_else(|| ratio(1, 16))
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.s();
        if s == 0 {
            return invalid("profile needs at least one level");
        }
        if self.e.len() != s {
            return invalid(format!("{} divisors for {s} levels", self.e.len()));
        }
        for (name, v) in [("alpha", self.alpha.len()), ("beta", self.beta.len())] {
            if v != s && v != 0 {
                return invalid(format!("{name} has {v} entries for {s} levels"));
            }
        }
        if self.blowup_l == 0 || self.blowup_r == 0 {
            return invalid("blowup factors must be at least 1");
        }
        if self.strict {
            let r1 = self.r_sizes[0] as f64;
            if r1.log2() < 200.0 {
                return Err(Error::Regime(format!("|R_1| = {} is below 2^200", self.r_sizes[0])));
            }
        }
        for (i, &r) in self.r_sizes.iter().enumerate() {
            if !r.is_power_of_two() || r < 2 {
                return invalid(format!("|R_{}| = {r} is not a power of 2 of at least 2", i + 1));
            }
            if i > 0 {
                let prev = self.r_sizes[i - 1];
                if r < 2 * prev {
                    return invalid(format!("|R_{}| = {r} must be at least 2|R_{i}| = {}", i + 1, 2 * prev));
                }
                if (self.require_quadrupling || self.strict) && r < 4 * prev {
                    return invalid(format!("|R_{}| = {r} must be at least 4|R_{i}| = {}", i + 1, 4 * prev));
                }
            }
            if self.strict && self.e[i] != 1usize << (i + 11).min(63) {
                return Err(Error::Regime(format!("level {}: e(i) must be 2^{}", i + 1, i + 11)));
            }
        }
        let l = self.l_sizes()?;
        if l[0] < 2 {
            return invalid("|L_1| must be at least 2");
        }
        for i in 1..s {
            if l[i] < 2 * l[i - 1] {
                return invalid(format!("|L_{}| = {} must be at least 2|L_{i}|", i + 1, l[i]));
            }
        }
        for (i, a) in self.alpha.iter().enumerate() {
            if let Some(a) = a {
                if *a < int(0) {
                    return invalid(format!("alpha_{} is negative", i + 1));
                }
            }
        }
        for (i, b) in self.beta.iter().enumerate() {
            if let Some(b) = b {
                if *b < int(0) || *b > ratio(1, 2) {
                    return invalid(format!("beta_{} must lie in [0, 1/2]", i + 1));
                }
            }
        }
        self.left_size()?;
        Ok(())
    }
}

fn join<T>(xs: &[T], f: impl Fn(&T) -> String) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(" ")
}

fn opt_rational(x: &Option<Rational>) -> String {
    x.as_ref().map_or_else(|| "-".into(), fmt_rational)
}

impl GrowthProfile {
    pub fn to_text(&self) -> String {
        format!(
            "profile v1\nr_sizes {}\ne {}\nblowup {} {}\nalpha {}\nbeta {}\nquadrupling {}\nmax_retries {}\nkeep_unaccepted {}\nstrict {}\n",
            join(&self.r_sizes, |x| x.to_string()),
            join(&self.e, |x| x.to_string()),
            self.blowup_l,
            self.blowup_r,
            join(&self.alpha, opt_rational),
            join(&self.beta, opt_rational),
            self.require_quadrupling,
            self.max_retries,
            self.keep_unaccepted,
            self.strict,
        )
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |m: String| Error::Parse(format!("profile: {m}"));
        let mut lines = text.lines();
        if lines.next() != Some("profile v1") {
            return Err(perr("missing header".into()));
        }
        let mut next = |key: &str| -> Result<Vec<String>> {
            let l = lines.next().ok_or_else(|| perr(format!("missing {key}")))?;
            let mut it = l.split_whitespace();
            if it.next() != Some(key) {
                return Err(perr(format!("expected {key}")));
            }
            Ok(it.map(str::to_string).collect())
        };
        let ints = |v: Vec<String>| -> Result<Vec<usize>> {
            v.iter().map(|x| x.parse().map_err(|_| perr(format!("bad integer {x}")))).collect()
        };
        let opts = |v: Vec<String>| -> Result<Vec<Option<Rational>>> {
            v.iter().map(|x| if x == "-" { Ok(None) } else { parse_rational(x).map(Some) }).collect()
        };
        let flag = |v: Vec<String>| -> Result<bool> {
            match v.as_slice() {
                [x] if x == "true" => Ok(true),
                [x] if x == "false" => Ok(false),
                _ => Err(perr("bad flag".into())),
            }
        };
        let r_sizes = ints(next("r_sizes")?)?;
        let e = ints(next("e")?)?;
        let blowup = ints(next("blowup")?)?;
        if blowup.len() != 2 {
            return Err(perr("blowup needs two factors".into()));
        }
        let p = GrowthProfile {
            r_sizes,
            e,
            blowup_l: blowup[0],
            blowup_r: blowup[1],
            alpha: opts(next("alpha")?)?,
            beta: opts(next("beta")?)?,
            require_quadrupling: flag(next("quadrupling")?)?,
            max_retries: match ints(next("max_retries")?)?.as_slice() {
                [x] => u32::try_from(*x).map_err(|_| perr("max_retries too large".into()))?,
                _ => return Err(perr("bad max_retries".into())),
            },
            keep_unaccepted: flag(next("keep_unaccepted")?)?,
            strict: flag(next("strict")?)?,
        };
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_sizes() {
        let p = GrowthProfile::desk();
        p.validate().unwrap();
        assert_eq!(p.l_sizes().unwrap(), vec![16, 256, 65536]);
        assert_eq!(p.left_size().unwrap(), 65536);
        assert_eq!(p.right_size(), 128);
    }

    #[test]
    fn paper_profile_is_out_of_regime() {
        let p = GrowthProfile::paper(vec![8, 32]);
        assert!(matches!(p.validate(), Err(Error::Regime(_))));
    }

    #[test]
    fn default_alpha_is_sixth_root() {
        let mut p = GrowthProfile::desk();
        p.alpha = vec![];
        // 16^(-1/6) = 2^(-2/3): between 5/8 and 2/3.
        let a = p.alpha_at(1).unwrap();
        assert_eq!(a.cmp_rational(&ratio(5, 8)), std::cmp::Ordering::Greater);
        assert_eq!(a.cmp_rational(&ratio(2, 3)), std::cmp::Ordering::Less);
    }

    #[test]
    fn text_round_trip() {
        let mut p = GrowthProfile::desk();
        p.alpha[1] = None;
        assert_eq!(GrowthProfile::from_text(&p.to_text()).unwrap(), p);
        assert!(GrowthProfile::from_text("profile v1\nr_sizes 8\n").is_err());
    }

    #[test]
    fn rejects_bad_sizes() {
        let mut p = GrowthProfile::desk();
        p.r_sizes = vec![8, 16, 128];
        assert!(p.validate().is_err());
        p.require_quadrupling = false;
        p.e = vec![2, 2, 8];
        p.validate().unwrap();
        p.r_sizes = vec![8, 24, 128];
        assert!(p.validate().is_err());
    }
}
