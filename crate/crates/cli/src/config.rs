//! TOML inputs for the build commands. Rationals are strings such as `"3/4"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use hardreg::core_construction::GrowthProfile;
use hardreg::counterexample::CounterexampleParams;
use hardreg::exact::parse_rational;
use hardreg::hypergraph_construction::{ParamSchedule, DEFAULT_CUTOFF_BITS};
use hardreg::{Error, Rational, Result};

fn rational(s: &str) -> Result<Rational> {
    parse_rational(s)
}

fn optional(s: &Option<String>) -> Result<Option<Rational>> {
    s.as_deref().map(rational).transpose()
}

fn one() -> usize {
    1
}

fn retries() -> u32 {
    64
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub r_sizes: Vec<usize>,
    pub e: Vec<usize>,
    #[serde(default = "one")]
    pub blowup_l: usize,
    #[serde(default = "one")]
    pub blowup_r: usize,
    /// One entry per level; `"default"` keeps the built-in value.
    #[serde(default)]
    pub alpha: Vec<String>,
    #[serde(default)]
    pub beta: Vec<String>,
    #[serde(default = "yes")]
    pub require_quadrupling: bool,
    #[serde(default = "retries")]
    pub max_retries: u32,
    #[serde(default)]
    pub keep_unaccepted: bool,
    #[serde(default)]
    pub strict: bool,
}

fn per_level(v: &[String], s: usize, what: &str) -> Result<Vec<Option<Rational>>> {
    if v.is_empty() {
        return Ok(vec![None; s]);
    }
    if v.len() != s {
        return Err(Error::Parse(format!("{what} needs {s} entries, got {}", v.len())));
    }
    v.iter().map(|x| if x == "default" { Ok(None) } else { rational(x).map(Some) }).collect()
}

impl ProfileFile {
    pub fn to_profile(&self) -> Result<GrowthProfile> {
        let s = self.r_sizes.len();
        Ok(GrowthProfile {
            r_sizes: self.r_sizes.clone(),
            e: self.e.clone(),
            blowup_l: self.blowup_l,
            blowup_r: self.blowup_r,
            alpha: per_level(&self.alpha, s, "alpha")?,
            beta: per_level(&self.beta, s, "beta")?,
            require_quadrupling: self.require_quadrupling,
            max_retries: self.max_retries,
            keep_unaccepted: self.keep_unaccepted,
            strict: self.strict,
        })
    }
}

fn cutoff() -> u64 {
    DEFAULT_CUTOFF_BITS
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub t1: u64,
    #[serde(default)]
    pub e: Vec<u64>,
    /// Keyed by `k`.
    #[serde(default)]
    pub a: BTreeMap<String, Vec<u64>>,
    #[serde(default)]
    pub a_star: BTreeMap<String, Vec<u64>>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    #[serde(default = "retries")]
    pub max_retries: u32,
    #[serde(default = "cutoff")]
    pub cutoff_bits: u64,
}

fn by_k(m: &BTreeMap<String, Vec<u64>>) -> Result<BTreeMap<usize, Vec<u64>>> {
    m.iter()
        .map(|(k, v)| k.parse().map(|k| (k, v.clone())).map_err(|_| Error::Parse(format!("bad uniformity key {k:?}"))))
        .collect()
}

impl ScheduleFile {
    pub fn to_schedule(&self) -> Result<ParamSchedule> {
        Ok(ParamSchedule {
            strict: self.strict,
            t1: self.t1,
            e: self.e.clone(),
            a: by_k(&self.a)?,
            a_star: by_k(&self.a_star)?,
            alpha: optional(&self.alpha)?,
            beta: optional(&self.beta)?,
            max_retries: self.max_retries,
            cutoff_bits: self.cutoff_bits,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleFile {
    pub delta: String,
    pub p: String,
    pub k: usize,
    pub m: usize,
    #[serde(default)]
    pub relaxed: bool,
    #[serde(default = "retries")]
    pub max_attempts: u32,
}

impl CounterexampleFile {
    pub fn to_params(&self) -> Result<CounterexampleParams> {
        Ok(CounterexampleParams {
            delta: rational(&self.delta)?,
            p: rational(&self.p)?,
            k: self.k,
            m: self.m,
            relaxed: self.relaxed,
            max_attempts: self.max_attempts,
        })
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn render<T: Serialize>(v: &T) -> String {
    toml::to_string(v).expect("config types serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_files_match_the_builtins() {
        let p: ProfileFile = parse(include_str!("../../../profiles/desk-core.toml"), "profile").unwrap();
        assert_eq!(p.to_profile().unwrap(), GrowthProfile::desk());
        let s: ScheduleFile = parse(include_str!("../../../profiles/desk-schedule.toml"), "schedule").unwrap();
        assert_eq!(s.to_schedule().unwrap(), ParamSchedule::desk());
        let c: CounterexampleFile = parse(include_str!("../../../profiles/desk-counterexample.toml"), "params").unwrap();
        assert_eq!(c.to_params().unwrap(), CounterexampleParams::desk());
    }

    #[test]
    fn render_round_trips() {
        let c: CounterexampleFile = parse(include_str!("../../../profiles/desk-counterexample.toml"), "params").unwrap();
        let back: CounterexampleFile = parse(&render(&c), "params").unwrap();
        assert_eq!(back.to_params().unwrap(), CounterexampleParams::desk());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse::<ProfileFile>("r_sizes = [8]\ne = [2]\ncolour = 1\n", "profile").is_err());
    }
}
