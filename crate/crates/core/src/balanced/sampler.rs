use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use crate::balanced::{verify_balanced, BalanceSpec, Condition};
use crate::error::{Error, Result};
use crate::graphs::io::{bipartite_from_text, bipartite_to_text};
use crate::graphs::BipartiteGraph;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnExhaustion {
    Error,
    /// Keep the last sample, marked as not accepted.
    KeepLast,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleOptions {
    pub max_retries: u32,
    pub on_exhaustion: OnExhaustion,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { max_retries: 64, on_exhaustion: OnExhaustion::Error }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SamplerTelemetry {
    pub attempts: u32,
    /// First failing condition per rejected attempt.
    pub failures: BTreeMap<Condition, u32>,
}

impl SamplerTelemetry {
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self.failures.iter().map(|(c, n)| format!("{c}: {n}")).collect();
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join(", ")
        }
    }
}

#[derive(Clone, Debug)]
pub struct BalancedGraph {
    pub graph: BipartiteGraph,
    /// `φ` on `𝐘`, an involution inside every `𝒴`-cell.
    pub phi: Vec<usize>,
    pub accepted: bool,
    pub telemetry: SamplerTelemetry,
}

impl BalancedGraph {
    pub fn to_text(&self) -> String {
        let phi: Vec<String> = self.phi.iter().map(|v| v.to_string()).collect();
        format!("balanced v1\naccepted {}\nphi {}\n{}", self.accepted, phi.join(" "), bipartite_to_text(&self.graph))
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |m: &str| Error::Parse(format!("balanced: {m}"));
        let mut parts = text.splitn(4, '\n');
        if parts.next() != Some("balanced v1") {
            return Err(perr("missing header"));
        }
        let accepted = match parts.next() {
            Some("accepted true") => true,
            Some("accepted false") => false,
            _ => return Err(perr("bad accepted line")),
        };
        let phi = parts
            .next()
            .and_then(|l| l.strip_prefix("phi"))
            .ok_or_else(|| perr("missing phi"))?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| perr("bad phi entry")))
            .collect::<Result<Vec<usize>>>()?;
        let graph = bipartite_from_text(parts.next().ok_or_else(|| perr("missing graph"))?)?;
        if phi.len() != graph.right() || phi.iter().enumerate().any(|(y, &p)| p >= phi.len() || phi[p] != y) {
            return Err(perr("phi is not an involution on Y"));
        }
        Ok(BalancedGraph { graph, phi, accepted, telemetry: SamplerTelemetry::default() })
    }
}

/// One draw: every `𝒴`-cell is split in index order, `Γ₁` gets exactly
/// `|X|/2` uniform neighbours in every `X`-cell for each `y ∈ 𝐘₁`, and the
/// `k`-th vertex of the second half gets the complement of the `k`-th of
/// the first.
pub fn sample_once(spec: &BalanceSpec, seed: u64) -> (BipartiteGraph, Vec<usize>) {
    let mut rng = seed::rng(seed);
    let mut g = BipartiteGraph::empty(spec.x_size(), spec.y_size());
    let mut phi = vec![0usize; spec.y_size()];
    for cell in spec.y.cells() {
        let half = cell.len() / 2;
        for k in 0..half {
            let (y1, y2) = (cell[k], cell[half + k]);
            phi[y1] = y2;
            phi[y2] = y1;
            for xc in spec.x.cells() {
                let mut xs = xc.clone();
                xs.shuffle(&mut rng);
                for (j, &x) in xs.iter().enumerate() {
                    if j < xs.len() / 2 {
                        g.add_edge(x, y1);
                    } else {
                        g.add_edge(x, y2);
                    }
                }
            }
        }
    }
    (g, phi)
}

/// Samples until `verify_balanced` accepts or the retries run out. Each
/// attempt uses `derive(seed, ["balanced", attempt])`.
pub fn sample_balanced(spec: &BalanceSpec, seed: u64, opts: &SampleOptions) -> Result<BalancedGraph> {
    let mut telemetry = SamplerTelemetry::default();
    let mut last = None;
    for attempt in 0..opts.max_retries.max(1) {
        let s = seed::derive(seed, &["balanced", &attempt.to_string()]);
        let (g, phi) = sample_once(spec, s);
        telemetry.attempts += 1;
        let report = verify_balanced(&g, spec)?;
        match report.violation {
            None => return Ok(BalancedGraph { graph: g, phi, accepted: true, telemetry }),
            Some(v) => *telemetry.failures.entry(v.condition).or_default() += 1,
        }
        last = Some((g, phi));
    }
    match opts.on_exhaustion {
        OnExhaustion::Error => Err(Error::Exhausted { attempts: telemetry.attempts, failures: telemetry.summary() }),
        OnExhaustion::KeepLast => {
            let (graph, phi) = last.unwrap();
            Ok(BalancedGraph { graph, phi, accepted: false, telemetry })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balanced::check_condition;
    use crate::exact::{ratio, Real};
    use crate::partitions::VertexPartition;

    #[test]
    fn forced_conditions_hold_on_every_draw() {
        let x = VertexPartition::blocks(16, 2).unwrap();
        let y = VertexPartition::blocks(12, 3).unwrap();
        let f = vec![(0..8).collect(), (4..12).collect()];
        let spec = BalanceSpec::new(x, y, f, Real::rational(ratio(1, 4)), ratio(1, 16)).unwrap();
        for s in 0..10 {
            let (g, _) = sample_once(&spec, s);
            assert!(check_condition(&g, &spec, Condition::Equitable).unwrap().is_none());
            assert!(check_condition(&g, &spec, Condition::ComplementClosed).unwrap().is_none());
        }
    }

    #[test]
    fn empty_family_succeeds_immediately() {
        let x = VertexPartition::blocks(8, 2).unwrap();
        let y = VertexPartition::blocks(8, 2).unwrap();
        let spec = BalanceSpec::new(x, y, vec![], Real::rational(ratio(1, 4)), ratio(1, 16)).unwrap();
        let b = sample_balanced(&spec, 7, &SampleOptions::default()).unwrap();
        assert!(b.accepted);
        assert_eq!(b.telemetry.attempts, 1);
        let back = BalancedGraph::from_text(&b.to_text()).unwrap();
        assert_eq!(back.graph, b.graph);
        assert_eq!(back.phi, b.phi);
    }
}
