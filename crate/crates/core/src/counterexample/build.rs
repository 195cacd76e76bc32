use rand::seq::index::sample;
use rand::Rng as _;

use crate::bits::and_count;
use crate::counterexample::CounterexampleParams;
use crate::error::{invalid, Error, Result};
use crate::exact::{int, Rational};
use crate::graphs::io::{bipartite_from_text, bipartite_to_text};
use crate::graphs::BipartiteGraph;
use crate::seed;

/// Class pairs in the order the graphs are stored.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// A tripartite graph on classes `(V_0, V_1, V_2)` of equal size, stored as
/// its three bipartite graphs in [`PAIRS`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tripartite {
    pub n: usize,
    pub pairs: [BipartiteGraph; 3],
}

impl Tripartite {
    pub fn new(pairs: [BipartiteGraph; 3]) -> Result<Self> {
        let n = pairs[0].left();
        if pairs.iter().any(|g| g.left() != n || g.right() != n) {
            return invalid("all three classes must have the same size");
        }
        Ok(Tripartite { n, pairs })
    }

    pub fn empty(n: usize) -> Self {
        Tripartite { n, pairs: [BipartiteGraph::empty(n, n), BipartiteGraph::empty(n, n), BipartiteGraph::empty(n, n)] }
    }

    /// Triangles `(a, b, c)` with `a ∈ V_0`, `b ∈ V_1`, `c ∈ V_2`, in
    /// lexicographic order.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let [g01, g02, g12] = &self.pairs;
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in g01.neighbors_iter(a) {
                let (ra, rb) = (g02.row(a), g12.row(b));
                if and_count(ra, rb) == 0 {
                    continue;
                }
                for (w, (x, y)) in ra.iter().zip(rb).enumerate() {
                    let mut bits = x & y;
                    while bits != 0 {
                        out.push([a, b, w * 64 + bits.trailing_zeros() as usize]);
                        bits &= bits - 1;
                    }
                }
            }
        }
        out
    }

    pub fn triangle_count(&self) -> u64 {
        let [g01, g02, g12] = &self.pairs;
        (0..self.n).map(|a| g01.neighbors_iter(a).map(|b| and_count(g02.row(a), g12.row(b))).sum::<u64>()).sum()
    }

    pub fn blowup(&self, m: usize) -> Result<Tripartite> {
        Ok(Tripartite {
            n: self.n * m,
            pairs: [self.pairs[0].blowup(m)?, self.pairs[1].blowup(m)?, self.pairs[2].blowup(m)?],
        })
    }

    pub fn densities(&self) -> [Rational; 3] {
        [self.pairs[0].density(), self.pairs[1].density(), self.pairs[2].density()]
    }

    /// `e(G) / (3n²)`.
    pub fn density(&self) -> Rational {
        let e: u64 = self.pairs.iter().map(BipartiteGraph::edge_count).sum();
        int(e) / int(3 * (self.n * self.n) as u64)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("tripartite v1\nn {}\n", self.n);
        for g in &self.pairs {
            out.push_str(&bipartite_to_text(g));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut blocks: Vec<String> = Vec::new();
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("tripartite v1") {
            return Err(Error::Parse("missing tripartite header".into()));
        }
        lines.next();
        for l in lines {
            if l.starts_with("kgraph") {
                blocks.push(String::new());
            }
            let cur = blocks.last_mut().ok_or_else(|| Error::Parse("graph body before header".into()))?;
            cur.push_str(l);
            cur.push('\n');
        }
        if blocks.len() != 3 {
            return Err(Error::Parse(format!("expected 3 graphs, found {}", blocks.len())));
        }
        let g: Vec<BipartiteGraph> = blocks.iter().map(|b| bipartite_from_text(b)).collect::<Result<_>>()?;
        Tripartite::new([g[0].clone(), g[1].clone(), g[2].clone()])
    }
}

/// One sample of the random tripartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attempt {
    pub triangles: u64,
    /// `X < δ³k²q`.
    pub triangle_bound: bool,
    /// Largest `|d(S,T)/q - 1|` over the audited pairs.
    pub max_deviation: Rational,
    /// `max_deviation <= δ/3`.
    pub deviation_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildAudit {
    pub relaxed: bool,
    pub attempts: Vec<Attempt>,
    pub chosen: usize,
    /// Both audits passed on the chosen sample under strict parameters.
    pub guaranteed: bool,
    /// `(pair, u, v)` in deletion order.
    pub deleted: Vec<(usize, usize, usize)>,
    pub deletions: [u64; 3],
    pub base_densities: [Rational; 3],
}

impl BuildAudit {
    pub fn to_text(&self) -> String {
        let mut out = format!("audit v1\nrelaxed {}\nguaranteed {}\nchosen {}\n", self.relaxed, self.guaranteed, self.chosen);
        for (i, a) in self.attempts.iter().enumerate() {
            out.push_str(&format!(
                "attempt {i} triangles {} bound {} deviation {} deviation_ok {}\n",
                a.triangles, a.triangle_bound, a.max_deviation, a.deviation_ok
            ));
        }
        out.push_str(&format!("deletions {} {} {}\n", self.deletions[0], self.deletions[1], self.deletions[2]));
        for (pair, u, v) in &self.deleted {
            out.push_str(&format!("deleted {pair} {u} {v}\n"));
        }
        for (i, d) in self.base_densities.iter().enumerate() {
            let (a, b) = PAIRS[i];
            out.push_str(&format!("density {a}{b} {d}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleFree {
    pub base: Tripartite,
    pub blowup: Tripartite,
    pub audit: BuildAudit,
}

/// Audit of `d(S,T) = (1 ± δ/3)q` on the full pairs and `samples` random
/// pairs of threshold size per class pair.
fn deviation(g: &Tripartite, params: &CounterexampleParams, rng: &mut seed::Rng, samples: usize) -> Rational {
    let q = params.q();
    let t = params.base_threshold().min(g.n);
    let mut worst = int(0);
    let mut note = |e: u64, s: usize, tt: usize| {
        let d = int(e) / int((s * tt) as u64);
        let dev = (d / &q) - int(1);
        let dev = if dev < int(0) { -dev } else { dev };
        if dev > worst {
            worst = dev;
        }
    };
    for gr in &g.pairs {
        note(gr.edge_count(), g.n, g.n);
        for _ in 0..samples {
            let s = sample(rng, g.n, t).into_vec();
            let tt = sample(rng, g.n, t).into_vec();
            note(gr.edges_between(&s, &tt).expect("in range"), t, t);
        }
    }
    worst
}

pub const AUDIT_SAMPLES: usize = 32;

/// Samples `G(k, q)` tripartite graphs until the audits pass (strict) or the
/// triangle bound holds (relaxed), deletes one edge per surviving triangle
/// from the pair class with fewest deletions so far, and blows up by `m`.
pub fn build_triangle_free(params: &CounterexampleParams, master: u64) -> Result<TriangleFree> {
    params.validate()?;
    let k = params.k;
    let q = params.q();
    let (num, den) = (q.numer(), q.denom());
    let (num, den) = match (u32::try_from(num), u32::try_from(den)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return invalid("q needs a 32-bit numerator and denominator"),
    };
    let bound = params.triangle_bound();
    let tol = &params.delta / int(3);
    let mut attempts: Vec<Attempt> = Vec::new();
    let mut best: Option<(usize, Tripartite)> = None;
    let mut chosen = None;
    for i in 0..params.max_attempts {
        let mut rng = seed::rng_for(master, &["counterexample", "sample", &i.to_string()]);
        let mut pairs = [BipartiteGraph::empty(k, k), BipartiteGraph::empty(k, k), BipartiteGraph::empty(k, k)];
        for g in pairs.iter_mut() {
            for u in 0..k {
                for v in 0..k {
                    if rng.random_ratio(num, den) {
                        g.add_edge(u, v);
                    }
                }
            }
        }
        let g = Tripartite::new(pairs)?;
        let x = g.triangle_count();
        let dev = deviation(&g, params, &mut rng, AUDIT_SAMPLES);
        let a = Attempt { triangles: x, triangle_bound: int(x) < bound, deviation_ok: dev <= tol, max_deviation: dev };
        let accept = a.triangle_bound && (params.relaxed || a.deviation_ok);
        if best.as_ref().is_none_or(|(j, _)| attempts[*j].triangles > x) {
            best = Some((attempts.len(), g.clone()));
        }
        attempts.push(a);
        if accept {
            chosen = Some((attempts.len() - 1, g));
            break;
        }
    }
    let (idx, mut g) = match (chosen, params.relaxed) {
        (Some(c), _) => c,
        (None, true) => best.expect("at least one attempt"),
        (None, false) => {
            let failures = format!(
                "triangle bound {} / deviation {}",
                attempts.iter().filter(|a| !a.triangle_bound).count(),
                attempts.iter().filter(|a| !a.deviation_ok).count()
            );
            return Err(Error::Exhausted { attempts: params.max_attempts, failures });
        }
    };
    let guaranteed = !params.relaxed && attempts[idx].triangle_bound && attempts[idx].deviation_ok;
    let mut deletions = [0u64; 3];
    let mut deleted = Vec::new();
    for [a, b, c] in g.triangles() {
        let ends = [(a, b), (a, c), (b, c)];
        if (0..3).any(|i| !g.pairs[i].has_edge(ends[i].0, ends[i].1)) {
            continue;
        }
        let i = (0..3).min_by_key(|&i| (deletions[i], i)).unwrap();
        g.pairs[i].remove_edge(ends[i].0, ends[i].1);
        deletions[i] += 1;
        deleted.push((i, ends[i].0, ends[i].1));
    }
    let blowup = g.blowup(params.m)?;
    let audit = BuildAudit {
        relaxed: params.relaxed,
        attempts,
        chosen: idx,
        guaranteed,
        deleted,
        deletions,
        base_densities: g.densities(),
    };
    Ok(TriangleFree { base: g, blowup, audit })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_build_is_triangle_free_and_balanced() {
        let params = CounterexampleParams::desk();
        let t = build_triangle_free(&params, 3).unwrap();
        assert_eq!(t.base.triangles().len(), 0);
        assert_eq!(t.blowup.triangle_count(), 0);
        let x = t.audit.attempts[t.audit.chosen].triangles;
        assert!(t.audit.deleted.len() as u64 <= x);
        let d = t.audit.deletions;
        assert!(d.iter().max().unwrap() - d.iter().min().unwrap() <= 1);
        assert_eq!(t.blowup.density(), t.base.density());
    }

    #[test]
    fn triangles_listed_lexicographically() {
        let full = BipartiteGraph::complete(2, 2);
        let g = Tripartite::new([full.clone(), full.clone(), full]).unwrap();
        let t = g.triangles();
        assert_eq!(t.len(), 8);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.triangle_count(), 8);
    }

    #[test]
    fn text_round_trip() {
        let t = build_triangle_free(&CounterexampleParams::desk(), 1).unwrap();
        assert_eq!(Tripartite::from_text(&t.base.to_text()).unwrap(), t.base);
    }
}
