use std::collections::HashSet;
use std::fmt::Write as _;

use crate::bits::{self, BitSet};
use crate::core_construction::witness::{host_for, witnesses_on};
use crate::core_construction::CoreSequence;
use crate::error::{invalid, precondition, Error, Result};
use crate::exact::{fmt_rational, int, parse_rational, pow2, ratio, Rational, Real};
use crate::graphs::io::{bipartite_hash, sha256_hex};
use crate::graphs::BipartiteGraph;
use crate::partitions::{best_host, in_beta, refines_beta, subset_beta, VertexPartition};

/// How `γ` is chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum GammaChoice {
    /// `max{2⁵√δ, 32/|ℛ₁|^(1/6)}`.
    Paper,
    Desk(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerLine {
    pub level: usize,
    /// Cell of `𝒫`.
    pub p_cell: usize,
    /// Cluster of `ℛ_i`.
    pub r_cluster: usize,
    pub e_pr: u64,
    /// `e(P, R \ 𝐑*_i)`.
    pub e_out: u64,
    pub p1: Vec<usize>,
    /// `γ'·max{0, e(P, R) − e(P, R \ 𝐑*_i)}`.
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepReport {
    pub name: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

impl StepReport {
    fn ge(name: &str, lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs >= rhs;
        StepReport { name: name.into(), lhs, rhs, holds }
    }

    fn gt(name: &str, lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs > rhs;
        StepReport { name: name.into(), lhs, rhs, holds }
    }

    fn le(name: &str, lhs: Rational, rhs: Rational) -> Self {
        let holds = lhs <= rhs;
        StepReport { name: name.into(), lhs, rhs, holds }
    }

    /// `lhs − rhs`, signed so that nonnegative means the step holds with room.
    pub fn slack(&self) -> Rational {
        if self.name.starts_with("upper:") {
            &self.rhs - &self.lhs
        } else {
            &self.lhs - &self.rhs
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub graph_sha256: String,
    pub left: usize,
    pub right: usize,
    pub level: usize,
    pub member: usize,
    pub t: usize,
    pub delta: Rational,
    pub gamma: Rational,
    pub c: Rational,
    pub edges: u64,
    pub p_part: VertexPartition,
    pub q_part: VertexPartition,
    /// `ℒ_1 … ℒ_t`.
    pub l_parts: Vec<VertexPartition>,
    pub r_parts: Vec<VertexPartition>,
    pub lines: Vec<LedgerLine>,
    pub total: Rational,
}

impl Certificate {
    pub fn gamma_prime(&self) -> Rational {
        &self.gamma / int(32)
    }

    pub fn refutes(&self) -> bool {
        self.total > &self.delta * int(self.edges)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refutation {
    pub certificate: Certificate,
    pub steps: Vec<StepReport>,
}

impl Refutation {
    pub fn refutes(&self) -> bool {
        self.certificate.refutes()
    }

    pub fn failing_steps(&self) -> Vec<&StepReport> {
        self.steps.iter().filter(|s| !s.holds).collect()
    }
}

fn resolve_gamma(seq: &CoreSequence, delta: &Rational, choice: &GammaChoice) -> Result<Rational> {
    let gamma = match choice {
        GammaChoice::Desk(g) => g.clone(),
        GammaChoice::Paper => {
            let a = Real::sqrt(delta.clone()).scale(&int(32));
            let b = Real::root(ratio(1, seq.r_part(1).len() as i64), 6).scale(&int(32));
            let g = a.max(b);
            if g.cmp_rational(&ratio(1, 4)) == std::cmp::Ordering::Greater {
                return Err(Error::Regime(format!("paper gamma = {g} exceeds 1/4")));
            }
            match g.as_rational() {
                Some(r) => r,
                None => return Err(Error::Regime(format!("paper gamma = {g} is irrational"))),
            }
        }
    };
    if gamma <= int(0) || gamma > ratio(1, 4) {
        return precondition(format!("gamma = {gamma} must lie in (0, 1/4]"));
    }
    Ok(gamma)
}

/// `𝐑*_i`: the union of `Q ∩ R` over `R ∈ ℛ_i`, `Q ∈ 𝒬` with `Q ⊂_c R`.
fn r_star(q: &VertexPartition, ri: &VertexPartition, c: &Rational) -> BitSet {
    let mut out = BitSet::new(q.ground_size());
    for cell in q.cells() {
        let (h, overlap) = best_host(cell, ri);
        if subset_beta(cell.len() - overlap, cell.len(), c) {
            for &v in cell {
                if ri.cell_of(v) == h {
                    out.insert(v);
                }
            }
        }
    }
    out
}

/// The unique `i` with `P ∈_γ ℒ_{i-1}` and `P ∉_γ ℒ_i`, if `P ∉_γ ℒ_t`.
fn split_level(p: &[usize], ls: &[&VertexPartition], gamma: &Rational) -> Result<Option<usize>> {
    for (k, l) in ls.iter().enumerate() {
        if in_beta(p, l, gamma)?.is_none() {
            return Ok(Some(k + 1));
        }
    }
    Ok(None)
}

/// Builds the certificate that no `⟨δ⟩`-regular `𝒫 ∪ 𝒬` with `𝒬 ≺_c ℛ_t`
/// and `𝒫 ⊀_γ ℒ_t` exists for member `m` of `𝒢_ℓ`, and evaluates each step
/// of the counting argument.
pub fn refute_partition(
    seq: &CoreSequence,
    ell: usize,
    m: usize,
    p: &VertexPartition,
    q: &VertexPartition,
    delta: &Rational,
    t: usize,
    choice: &GammaChoice,
) -> Result<Refutation> {
    if ell > seq.s() || m >= seq.members(ell) {
        return invalid(format!("no member {m} at level {ell}"));
    }
    if t == 0 || t > ell {
        return invalid(format!("t = {t} outside 1..={ell}"));
    }
    if *delta < int(0) {
        return invalid("delta must be nonnegative");
    }
    if p.ground_size() != seq.left_size() || q.ground_size() != seq.right_size() {
        return invalid("partitions do not match the sides");
    }
    let gamma = resolve_gamma(seq, delta, choice)?;
    let c = pow2(-9);
    if !refines_beta(q, seq.r_part(t), &c)?.holds {
        return precondition("Q is not a 2^-9-refinement of R_t");
    }
    let pref = refines_beta(p, seq.l_part(t), &gamma)?;
    if pref.holds {
        return precondition("P refines L_t up to gamma; nothing to refute");
    }
    let g = seq.member_graph(ell, m);
    let gp = &gamma / int(32);
    let ls: Vec<&VertexPartition> = (1..=t).map(|i| seq.l_part(i)).collect();
    let stars: Vec<BitSet> = (1..=t).map(|i| r_star(q, seq.r_part(i), &c)).collect();
    let (nl, nr) = (seq.left_size() as u64, seq.right_size() as u64);
    let pden = pow2(-(ell as i64));

    let mut steps = vec![
        StepReport::le("upper: delta <= 2^-20", delta.clone(), pow2(-20)),
        StepReport::ge("gamma/8 >= delta", &gamma / int(8), delta.clone()),
    ];
    let mut lines = Vec::new();
    let mut d_mass = 0u64;
    let mut d_union = Vec::new();
    let mut worst_count: Option<StepReport> = None;
    let mut worst_line: Option<StepReport> = None;
    for (pi, cell) in p.cells().iter().enumerate() {
        let Some(i) = split_level(cell, &ls, &gamma)? else { continue };
        d_mass += cell.len() as u64;
        d_union.extend_from_slice(cell);
        let host = host_for(seq, i, cell, &gamma)?;
        let rep = witnesses_on(seq, &g, ell, m, i, cell, host, &gamma)?;
        let count = StepReport::ge(
            "witness clusters per P (worst P)",
            int(rep.witnesses.len() as u64),
            rep.required.clone(),
        );
        keep_worst(&mut worst_count, count);
        let mut sum = Rational::from_integer(0.into());
        for w in rep.witnesses.iter().filter(|w| w.p1_isolated && w.p1_large) {
            if int(w.p1.len() as u64) < delta * int(cell.len() as u64) {
                continue;
            }
            let r_set = seq.r_part(i).cell(w.cluster);
            let mut out_mask = BitSet::from_indices(g.right(), r_set.iter().copied());
            let star = stars[i - 1].complement();
            out_mask.intersect_with(&star);
            let e_out = g.edges_into(cell.iter().copied(), &out_mask);
            let value = &gp * int(w.e_pr.saturating_sub(e_out));
            sum += &value;
            lines.push(LedgerLine {
                level: i,
                p_cell: pi,
                r_cluster: w.cluster,
                e_pr: w.e_pr,
                e_out,
                p1: w.p1.clone(),
                value,
            });
        }
        let outside_t = stars[t - 1].complement();
        let e_pt = g.edges_into(cell.iter().copied(), &outside_t);
        let target = &gp * (ratio(1, 24) * &pden * int(cell.len() as u64 * nr) - int(e_pt));
        keep_worst(&mut worst_line, StepReport::ge("ledger sum per P vs (1/24)p|P||R| bound (worst P)", sum, target));
    }
    steps.push(StepReport::gt("mass of D > gamma|L|", int(d_mass), &gamma * int(nl)));
    for (k, star) in stars.iter().enumerate() {
        steps.push(StepReport::le(
            &format!("upper: |R \\ R*_{}| <= 2^-8|R|", k + 1),
            int(nr - star.count()),
            pow2(-8) * int(nr),
        ));
    }
    steps.extend(worst_count);
    let outside_t = stars[t - 1].complement();
    let e_dt = g.edges_into(d_union.iter().copied(), &outside_t);
    steps.push(StepReport::le(
        "upper: e(D, R \\ R*_t) <= p|D||R|/200",
        int(e_dt),
        &pden * int(d_mass * nr) / int(200),
    ));
    steps.extend(worst_line);
    let total: Rational = lines.iter().map(|l| &l.value).sum();
    let edges = g.edge_count();
    steps.push(StepReport::gt("total > delta e(G)", total.clone(), delta * int(edges)));
    let certificate = Certificate {
        graph_sha256: bipartite_hash(&g),
        left: g.left(),
        right: g.right(),
        level: ell,
        member: m,
        t,
        delta: delta.clone(),
        gamma,
        c,
        edges,
        p_part: p.clone(),
        q_part: q.clone(),
        l_parts: (1..=t).map(|i| seq.l_part(i).clone()).collect(),
        r_parts: (1..=t).map(|i| seq.r_part(i).clone()).collect(),
        lines,
        total,
    };
    Ok(Refutation { certificate, steps })
}

fn keep_worst(slot: &mut Option<StepReport>, s: StepReport) {
    if slot.as_ref().is_none_or(|w| s.slack() < w.slack()) {
        *slot = Some(s);
    }
}

fn labels_line(name: &str, p: &VertexPartition) -> String {
    let mut out = format!("labels {name} {}", p.ground_size());
    for l in p.labels() {
        let _ = write!(out, " {l}");
    }
    out
}

fn p1_mask(cell: &[usize], p1: &[usize]) -> String {
    let inside: HashSet<usize> = p1.iter().copied().collect();
    let mut bytes = vec![0u8; cell.len().div_ceil(8)];
    for (k, v) in cell.iter().enumerate() {
        if inside.contains(v) {
            bytes[k / 8] |= 1 << (k % 8);
        }
    }
    hex::encode(bytes)
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut body = String::from("hardreg certificate v1\n");
        let _ = writeln!(body, "graph {}", self.graph_sha256);
        let _ = writeln!(body, "shape {} {}", self.left, self.right);
        let _ = writeln!(body, "member {} {}", self.level, self.member);
        let _ = writeln!(body, "t {}", self.t);
        let _ = writeln!(body, "delta {}", fmt_rational(&self.delta));
        let _ = writeln!(body, "gamma {}", fmt_rational(&self.gamma));
        let _ = writeln!(body, "gamma_prime {}", fmt_rational(&self.gamma_prime()));
        let _ = writeln!(body, "c {}", fmt_rational(&self.c));
        let _ = writeln!(body, "edges {}", self.edges);
        let _ = writeln!(body, "{}", labels_line("P", &self.p_part));
        let _ = writeln!(body, "{}", labels_line("Q", &self.q_part));
        for (k, l) in self.l_parts.iter().enumerate() {
            let _ = writeln!(body, "{}", labels_line(&format!("L{}", k + 1), l));
        }
        for (k, r) in self.r_parts.iter().enumerate() {
            let _ = writeln!(body, "{}", labels_line(&format!("R{}", k + 1), r));
        }
        for l in &self.lines {
            let cell = self.p_part.cell(l.p_cell);
            let _ = writeln!(
                body,
                "line {} {} {} {} {} {} {} {}",
                l.level,
                l.p_cell,
                l.r_cluster,
                l.e_pr,
                l.e_out,
                l.p1.len(),
                p1_mask(cell, &l.p1),
                fmt_rational(&l.value)
            );
        }
        let _ = writeln!(body, "total {}", fmt_rational(&self.total));
        let _ = writeln!(body, "refutes {}", self.refutes());
        let digest = sha256_hex(body.as_bytes());
        body.push_str(&format!("digest {digest}\n"));
        body
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |m: String| Error::Parse(format!("certificate: {m}"));
        let (body, digest_line) = match text.trim_end_matches('\n').rsplit_once('\n') {
            Some((b, d)) => (format!("{b}\n"), d),
            None => return Err(perr("truncated".into())),
        };
        let digest = digest_line.strip_prefix("digest ").ok_or_else(|| perr("missing digest".into()))?;
        if sha256_hex(body.as_bytes()) != digest {
            return Err(perr("digest mismatch".into()));
        }
        let mut lines = body.lines();
        if lines.next() != Some("hardreg certificate v1") {
            return Err(perr("missing header".into()));
        }
        let mut field = |key: &str| -> Result<String> {
            let l = lines.next().ok_or_else(|| perr(format!("missing {key}")))?;
            l.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| perr(format!("expected {key}, got {:.40}", l)))
        };
        let num = |s: &str| -> Result<u64> { s.parse().map_err(|_| perr(format!("bad number {s:.40}"))) };
        let graph_sha256 = field("graph")?;
        let shape = field("shape")?;
        let (a, b) = shape.split_once(' ').ok_or_else(|| perr("bad shape".into()))?;
        let (left, right) = (num(a)? as usize, num(b)? as usize);
        let member = field("member")?;
        let (a, b) = member.split_once(' ').ok_or_else(|| perr("bad member".into()))?;
        let (level, member) = (num(a)? as usize, num(b)? as usize);
        let t = num(&field("t")?)? as usize;
        let delta = parse_rational(&field("delta")?)?;
        let gamma = parse_rational(&field("gamma")?)?;
        let gamma_prime = parse_rational(&field("gamma_prime")?)?;
        let c = parse_rational(&field("c")?)?;
        let edges = num(&field("edges")?)?;
        if gamma_prime != &gamma / int(32) {
            return Err(perr("gamma_prime is not gamma/32".into()));
        }
        let mut part = |name: &str| -> Result<VertexPartition> {
            let l = field("labels")?;
            let mut it = l.split(' ');
            if it.next() != Some(name) {
                return Err(perr(format!("expected labels {name}")));
            }
            let n = num(it.next().unwrap_or(""))? as usize;
            let labels: Vec<usize> = it.map(|x| num(x).map(|v| v as usize)).collect::<Result<_>>()?;
            if labels.len() != n {
                return Err(perr(format!("labels {name}: {} entries for n = {n}", labels.len())));
            }
            let p = VertexPartition::from_labels(&labels)?;
            if p.labels() != labels.as_slice() {
                return Err(perr(format!("labels {name} not canonical")));
            }
            Ok(p)
        };
        let p_part = part("P")?;
        let q_part = part("Q")?;
        let l_parts = (1..=t).map(|k| part(&format!("L{k}"))).collect::<Result<Vec<_>>>()?;
        let r_parts = (1..=t).map(|k| part(&format!("R{k}"))).collect::<Result<Vec<_>>>()?;
        let mut ledger = Vec::new();
        let mut total = None;
        let mut claimed_refutes = None;
        for l in lines {
            if let Some(rest) = l.strip_prefix("line ") {
                let f: Vec<&str> = rest.split(' ').collect();
                if f.len() != 8 {
                    return Err(perr("ledger line needs 8 fields".into()));
                }
                let p_cell = num(f[1])? as usize;
                let cell = p_part.cells().get(p_cell).ok_or_else(|| perr("P cell out of range".into()))?;
                let bytes = hex::decode(f[6]).map_err(|_| perr("bad P1 mask".into()))?;
                if bytes.len() != cell.len().div_ceil(8) {
                    return Err(perr("P1 mask has the wrong length".into()));
                }
                let p1: Vec<usize> =
                    cell.iter().enumerate().filter(|(k, _)| bytes[k / 8] >> (k % 8) & 1 == 1).map(|(_, &v)| v).collect();
                if bytes.iter().map(|b| b.count_ones() as usize).sum::<usize>() != p1.len() {
                    return Err(perr("P1 mask has bits past the cell".into()));
                }
                if p1.len() as u64 != num(f[5])? {
                    return Err(perr("P1 count disagrees with its mask".into()));
                }
                ledger.push(LedgerLine {
                    level: num(f[0])? as usize,
                    p_cell,
                    r_cluster: num(f[2])? as usize,
                    e_pr: num(f[3])?,
                    e_out: num(f[4])?,
                    p1,
                    value: parse_rational(f[7])?,
                });
            } else if let Some(rest) = l.strip_prefix("total ") {
                total = Some(parse_rational(rest)?);
            } else if let Some(rest) = l.strip_prefix("refutes ") {
                claimed_refutes = Some(rest == "true");
            } else {
                return Err(perr(format!("unexpected line {l:.40}")));
            }
        }
        let total = total.ok_or_else(|| perr("missing total".into()))?;
        let cert = Certificate {
            graph_sha256,
            left,
            right,
            level,
            member,
            t,
            delta,
            gamma,
            c,
            edges,
            p_part,
            q_part,
            l_parts,
            r_parts,
            lines: ledger,
            total,
        };
        if claimed_refutes != Some(cert.refutes()) {
            return Err(perr("refutes flag disagrees with total".into()));
        }
        Ok(cert)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub failures: Vec<String>,
    pub lines_checked: usize,
    pub refutes: bool,
}

impl CertificateCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Parses `text` and recomputes every ledger line against `g`.
pub fn verify_certificate(text: &str, g: &BipartiteGraph) -> Result<CertificateCheck> {
    let cert = Certificate::from_text(text)?;
    let mut f = Vec::new();
    if bipartite_hash(g) != cert.graph_sha256 {
        f.push("graph hash differs".into());
    }
    if (g.left(), g.right()) != (cert.left, cert.right) {
        return Ok(CertificateCheck { failures: vec!["graph shape differs".into()], lines_checked: 0, refutes: false });
    }
    if g.edge_count() != cert.edges {
        f.push(format!("e(G) is {}, certificate says {}", g.edge_count(), cert.edges));
    }
    if cert.p_part.ground_size() != g.left() || cert.q_part.ground_size() != g.right() {
        return Ok(CertificateCheck { failures: vec!["partitions do not match the sides".into()], lines_checked: 0, refutes: false });
    }
    if cert.l_parts.iter().any(|l| l.ground_size() != g.left()) || cert.r_parts.iter().any(|r| r.ground_size() != g.right()) {
        return Ok(CertificateCheck { failures: vec!["chain partitions do not match the sides".into()], lines_checked: 0, refutes: false });
    }
    if cert.t == 0 {
        f.push("t must be positive".into());
    }
    if cert.gamma <= int(0) || cert.gamma > ratio(1, 4) {
        f.push("gamma outside (0, 1/4]".into());
        return Ok(CertificateCheck { failures: f, lines_checked: 0, refutes: false });
    }
    if cert.c < int(0) || cert.c > ratio(1, 2) || int(1) - &cert.c < cert.delta || cert.delta < int(0) {
        f.push("c and delta out of range".into());
        return Ok(CertificateCheck { failures: f, lines_checked: 0, refutes: false });
    }
    for k in 1..cert.t {
        if !cert.l_parts[k].refines(&cert.l_parts[k - 1]) || !cert.r_parts[k].refines(&cert.r_parts[k - 1]) {
            f.push(format!("level {} does not refine level {k}", k + 1));
        }
    }
    if !refines_beta(&cert.q_part, &cert.r_parts[cert.t - 1], &cert.c)?.holds {
        f.push("Q is not a c-refinement of R_t".into());
    }
    if refines_beta(&cert.p_part, &cert.l_parts[cert.t - 1], &cert.gamma)?.holds {
        f.push("P refines L_t up to gamma".into());
    }
    let ls: Vec<&VertexPartition> = cert.l_parts.iter().collect();
    let stars: Vec<BitSet> = cert.r_parts.iter().map(|r| r_star(&cert.q_part, r, &cert.c)).collect();
    let gp = cert.gamma_prime();
    let mut seen = HashSet::new();
    let mut sum = Rational::from_integer(0.into());
    for (k, l) in cert.lines.iter().enumerate() {
        let tag = format!("line {k}");
        let cell = cert.p_part.cell(l.p_cell);
        match split_level(cell, &ls, &cert.gamma)? {
            Some(i) if i == l.level => {}
            other => f.push(format!("{tag}: P {} splits at level {other:?}, not {}", l.p_cell, l.level)),
        }
        if l.level == 0 || l.level > cert.t || l.r_cluster >= cert.r_parts[l.level.clamp(1, cert.t) - 1].len() {
            f.push(format!("{tag}: cluster out of range"));
            continue;
        }
        if !seen.insert((l.p_cell, l.r_cluster, l.level)) {
            f.push(format!("{tag}: repeated (P, R)"));
        }
        let r_set = cert.r_parts[l.level - 1].cell(l.r_cluster);
        let r_mask = BitSet::from_indices(g.right(), r_set.iter().copied());
        let e_pr = g.edges_into(cell.iter().copied(), &r_mask);
        let mut out_mask = r_mask.clone();
        out_mask.intersect_with(&stars[l.level - 1].complement());
        let e_out = g.edges_into(cell.iter().copied(), &out_mask);
        if e_pr != l.e_pr || e_out != l.e_out {
            f.push(format!("{tag}: edge counts ({}, {}) recount as ({e_pr}, {e_out})", l.e_pr, l.e_out));
        }
        let isolated = l.p1.iter().all(|&u| bits::and_count(g.row(u), r_mask.words()) == 0);
        if !isolated {
            f.push(format!("{tag}: P1 has edges into R"));
        }
        let (n1, np) = (int(l.p1.len() as u64), int(cell.len() as u64));
        if &n1 * int(8) < &cert.gamma * &np || n1 < &cert.delta * &np {
            f.push(format!("{tag}: P1 too small"));
        }
        let value = &gp * int(e_pr.saturating_sub(e_out));
        if value != l.value {
            f.push(format!("{tag}: value {} recomputes as {}", fmt_rational(&l.value), fmt_rational(&value)));
        }
        sum += value;
    }
    if sum != cert.total {
        f.push(format!("total {} recomputes as {}", fmt_rational(&cert.total), fmt_rational(&sum)));
    }
    let refutes = sum > &cert.delta * int(g.edge_count());
    Ok(CertificateCheck { failures: f, lines_checked: cert.lines.len(), refutes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_construction::{build_core_sequence, default_parts, GrowthProfile};

    fn small() -> CoreSequence {
        let p = GrowthProfile {
            r_sizes: vec![4, 16],
            e: vec![2, 4],
            blowup_l: 2,
            blowup_r: 1,
            alpha: vec![Some(ratio(1, 1)); 2],
            beta: vec![Some(ratio(1, 2)); 2],
            require_quadrupling: true,
            max_retries: 16,
            keep_unaccepted: false,
            strict: false,
        };
        let (l, r) = default_parts(&p).unwrap();
        build_core_sequence(&p, &l, &r, 21).unwrap()
    }

    fn fixture(seq: &CoreSequence, delta: Rational) -> Refutation {
        let p = seq.l_part(1).clone();
        let q = seq.r_part(2).clone();
        refute_partition(seq, 2, 1, &p, &q, &delta, 2, &GammaChoice::Desk(ratio(1, 4))).unwrap()
    }

    #[test]
    fn adversarial_round_trip() {
        let seq = small();
        let r = fixture(&seq, pow2(-20));
        assert!(!r.certificate.lines.is_empty());
        assert!(r.refutes());
        let text = r.certificate.to_text();
        let g = seq.member_graph(2, 1);
        let check = verify_certificate(&text, &g).unwrap();
        assert!(check.ok(), "{:?}", check.failures);
        assert!(check.refutes);
        assert_eq!(Certificate::from_text(&text).unwrap(), r.certificate);
    }

    #[test]
    fn tampered_line_fails() {
        let seq = small();
        let text = fixture(&seq, pow2(-20)).certificate.to_text();
        let g = seq.member_graph(2, 1);
        let lines: Vec<&str> = text.lines().collect();
        for k in 0..lines.len() {
            let mut t: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
            t[k].push('0');
            let tampered = t.join("\n") + "\n";
            let bad = match verify_certificate(&tampered, &g) {
                Ok(c) => !c.ok(),
                Err(_) => true,
            };
            assert!(bad, "tampering line {k} went unnoticed");
        }
    }

    #[test]
    fn refining_partition_is_not_refuted() {
        let seq = small();
        let p = seq.l_part(2).clone();
        let q = seq.r_part(2).clone();
        let r = refute_partition(&seq, 2, 0, &p, &q, &pow2(-20), 2, &GammaChoice::Desk(ratio(1, 4)));
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_budget_refutes_with_any_line() {
        let seq = small();
        let r = fixture(&seq, int(0));
        assert!(r.certificate.total > int(0));
        assert!(r.refutes());
    }

    #[test]
    fn paper_gamma_is_out_of_regime() {
        let seq = small();
        let p = seq.l_part(1).clone();
        let q = seq.r_part(2).clone();
        let r = refute_partition(&seq, 2, 0, &p, &q, &pow2(-20), 2, &GammaChoice::Paper);
        assert!(matches!(r, Err(Error::Regime(_))));
    }
}
