use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use hardreg::core_construction::{
    core_files, default_parts, load_core_sequence, refute_partition, verify_all_core_properties, verify_certificate,
    verify_quasirandomness, verify_structure, build_core_sequence, Certificate, CoreSequence, GammaChoice,
};
use hardreg::counterexample::{build_triangle_free, verify_counterexample, TriangleFree, Tripartite};
use hardreg::exact::{int, parse_rational};
use hardreg::graphs::io::{kgraph_from_text, kgraph_to_text};
use hardreg::hypergraph_construction::{build_pasted_instance, pasted_density, verify_family, verify_pasted, PastedInstance};
use hardreg::regularity::{CheckOptions, EpsVerdict, PairVerdict};
use hardreg::{seed, Error, Result, VertexPartition};

use crate::config::{self, CounterexampleFile, ProfileFile, ScheduleFile};
use crate::manifest::{self, RunManifest};
use crate::report::{Report, Status};
use crate::{CliError, Outcome};

type CliResult = std::result::Result<Outcome, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn core_build(cfg: &str, seed: u64) -> Result<(CoreSequence, Vec<(String, String)>)> {
    let file: ProfileFile = config::parse(cfg, "profile")?;
    let profile = file.to_profile()?;
    let (l, r) = default_parts(&profile)?;
    let seq = build_core_sequence(&profile, &l, &r, seed::derive(seed, &["build-core"]))?;
    let files = core_files(&seq);
    Ok((seq, files))
}

fn hypergraph_build(cfg: &str, k: usize, s: usize, seed: u64) -> Result<(PastedInstance, Vec<(String, String)>)> {
    let file: ScheduleFile = config::parse(cfg, "schedule")?;
    let sched = file.to_schedule()?;
    let inst = build_pasted_instance(k, s, &sched, seed::derive(seed, &["build-hypergraph"]))?;
    let mut files = vec![("h.txt".to_string(), kgraph_to_text(&inst.h)), ("v0.txt".to_string(), inst.v0.to_text())];
    for (x, p) in inst.pieces.iter().enumerate() {
        files.push((format!("piece_{x}.txt"), kgraph_to_text(p)));
    }
    for (i, lvl) in inst.chain.iter().enumerate() {
        for (h, part) in lvl.iter().enumerate() {
            files.push((format!("chain_{}_{h}.txt", i + 1), part.to_text()));
        }
    }
    Ok((inst, files))
}

fn counterexample_build(cfg: &str, seed: u64) -> Result<(TriangleFree, Vec<(String, String)>)> {
    let file: CounterexampleFile = config::parse(cfg, "params")?;
    let params = file.to_params()?;
    let t = build_triangle_free(&params, seed::derive(seed, &["counterexample"]))?;
    let files = vec![
        ("base.txt".to_string(), t.base.to_text()),
        ("blowup.txt".to_string(), t.blowup.to_text()),
        ("audit.txt".to_string(), t.audit.to_text()),
    ];
    Ok((t, files))
}

fn finish(mut man: RunManifest, out: &Path, files: &[(String, String)], start: Instant) -> Result<()> {
    man.artifacts = manifest::write_all(out, files)?;
    man.elapsed_ms = start.elapsed().as_millis();
    man.save(out)?;
    println!("wrote {} artifacts to {} in {} ms", man.artifacts.len(), out.display(), man.elapsed_ms);
    Ok(())
}

pub fn build_core(profile: &Path, seed: u64, out: &Path, strict: Option<bool>) -> CliResult {
    let start = Instant::now();
    let mut file: ProfileFile = config::parse(&read(profile)?, "profile")?;
    if let Some(s) = strict {
        file.strict = s;
    }
    let cfg = config::render(&file);
    let (seq, files) = core_build(&cfg, seed)?;
    let rejected = seq.gamma_records().filter(|g| !g.balanced.accepted).count();
    if rejected > 0 {
        println!("{rejected} balanced graphs kept without passing acceptance");
    }
    finish(RunManifest::new("build-core", seed, cfg, BTreeMap::new()), out, &files, start)?;
    Ok(Outcome::Pass)
}

pub fn build_hypergraph(k: usize, s: usize, schedule: &Path, seed: u64, out: &Path, strict: Option<bool>) -> CliResult {
    let start = Instant::now();
    let mut file: ScheduleFile = config::parse(&read(schedule)?, "schedule")?;
    if let Some(st) = strict {
        file.strict = st;
    }
    let cfg = config::render(&file);
    let (_, files) = hypergraph_build(&cfg, k, s, seed)?;
    for v in file.to_schedule()?.violations(k, s)? {
        println!("schedule override: {} ({})", v.identity, v.detail);
    }
    let args = BTreeMap::from([("k".to_string(), k.to_string()), ("s".to_string(), s.to_string())]);
    finish(RunManifest::new("build-hypergraph", seed, cfg, args), out, &files, start)?;
    Ok(Outcome::Pass)
}

pub fn counterexample(params: &Path, seed: u64, out: &Path, strict: Option<bool>) -> CliResult {
    let start = Instant::now();
    let mut file: CounterexampleFile = config::parse(&read(params)?, "params")?;
    if let Some(s) = strict {
        file.relaxed = !s;
    }
    let cfg = config::render(&file);
    let (t, files) = counterexample_build(&cfg, seed)?;
    let a = &t.audit;
    println!(
        "attempts {}, chosen {} with {} triangles, {} edges deleted, guaranteed {}",
        a.attempts.len(),
        a.chosen,
        a.attempts[a.chosen].triangles,
        a.deleted.len(),
        a.guaranteed
    );
    finish(RunManifest::new("counterexample", seed, cfg, BTreeMap::new()), out, &files, start)?;
    Ok(if t.base.triangle_count() == 0 { Outcome::Pass } else { Outcome::Fail })
}

pub fn replay(path: &Path, out: &Path) -> CliResult {
    let man = RunManifest::load(path)?;
    let files = rebuild(&man)?;
    let fresh = manifest::write_all(out, &files)?;
    let mut same = fresh.len() == man.artifacts.len();
    for (a, b) in fresh.iter().zip(&man.artifacts) {
        if a != b {
            println!("differs: {}", a.name);
            same = false;
        }
    }
    println!("{} artifacts, {}", fresh.len(), if same { "identical" } else { "not identical" });
    Ok(if same { Outcome::Pass } else { Outcome::Fail })
}

fn rebuild(man: &RunManifest) -> Result<Vec<(String, String)>> {
    match man.command.as_str() {
        "build-core" => Ok(core_build(&man.config, man.seed)?.1),
        "build-hypergraph" => {
            let k = man.arg("k")?.parse().map_err(|_| Error::Parse("bad k".into()))?;
            let s = man.arg("s")?.parse().map_err(|_| Error::Parse("bad s".into()))?;
            Ok(hypergraph_build(&man.config, k, s, man.seed)?.1)
        }
        "counterexample" => Ok(counterexample_build(&man.config, man.seed)?.1),
        c => Err(Error::Parse(format!("unknown command {c:?} in manifest"))),
    }
}

const CORE_SUITES: &[&str] = &["structure", "core-properties", "quasirandom", "gamma"];
const HYPERGRAPH_SUITES: &[&str] = &["replay", "pasted", "family"];
const COUNTEREXAMPLE_SUITES: &[&str] = &["replay", "counterexample"];

pub fn verify(dir: &Path, suite: &str, opts: &CheckOptions, samples: usize, seed: u64, json: bool) -> CliResult {
    let man = RunManifest::load(dir)?;
    let suites = match man.command.as_str() {
        "build-core" => CORE_SUITES,
        "build-hypergraph" => HYPERGRAPH_SUITES,
        "counterexample" => COUNTEREXAMPLE_SUITES,
        c => return Err(CliError::Usage(format!("{} was written by unknown command {c:?}", dir.display()))),
    };
    if suite == "list" {
        println!("{}", suites.join("\n"));
        return Ok(Outcome::Pass);
    }
    let chosen: Vec<&str> = match suite {
        "all" => suites.to_vec(),
        s if suites.contains(&s) => vec![s],
        s => return Err(CliError::Usage(format!("unknown suite {s:?}; available: all, {}", suites.join(", ")))),
    };
    let mut rep = Report::default();
    rep.push("artifacts", "hashes", manifest::stale(dir, &man.artifacts).is_empty(), stale_detail(dir, &man));
    match man.command.as_str() {
        "build-core" => {
            let seq = load_core_sequence(dir)?;
            for s in chosen {
                core_suite(&seq, s, opts, &mut rep)?;
            }
        }
        "build-hypergraph" => hypergraph_suites(dir, &man, &chosen, &mut rep)?,
        _ => counterexample_suites(dir, &man, &chosen, opts, samples, seed, &mut rep)?,
    }
    if json {
        println!("{}", rep.to_json());
    } else {
        print!("{}", rep.to_text());
    }
    Ok(if rep.failed() { Outcome::Fail } else { Outcome::Pass })
}

fn stale_detail(dir: &Path, man: &RunManifest) -> String {
    let s = manifest::stale(dir, &man.artifacts);
    if s.is_empty() {
        format!("{} files match the manifest", man.artifacts.len())
    } else {
        format!("changed or missing: {}", s.join(", "))
    }
}

fn first<T: std::fmt::Debug>(v: &[T]) -> String {
    match v.first() {
        None => "no failures".into(),
        Some(x) => format!("{} failures, first {x:?}", v.len()),
    }
}

fn core_suite(seq: &CoreSequence, suite: &str, opts: &CheckOptions, rep: &mut Report) -> Result<()> {
    match suite {
        "structure" => {
            let r = verify_structure(seq);
            rep.push(suite, "density", r.density_failures.is_empty(), first(&r.density_failures));
            rep.push(suite, "chain", r.chain_failures.is_empty(), first(&r.chain_failures));
            rep.push(suite, "blowup", r.blowup_failures.is_empty(), first(&r.blowup_failures));
            rep.push(suite, "neighbour-family", r.family_failures.is_empty(), first(&r.family_failures));
        }
        "core-properties" => {
            let all = verify_all_core_properties(seq)?;
            let bad1: Vec<_> = all.iter().filter(|r| !r.item1_holds()).map(|r| (r.level, r.member, r.l)).collect();
            let bad2: Vec<_> = all.iter().filter(|r| !r.item2_holds()).map(|r| (r.level, r.member, r.l)).collect();
            rep.push(suite, "item1", bad1.is_empty(), format!("{} blocks checked; {}", all.len(), first(&bad1)));
            rep.push(suite, "item2", bad2.is_empty(), format!("{} blocks checked; {}", all.len(), first(&bad2)));
        }
        "quasirandom" => {
            for ell in 1..=seq.s() {
                for m in 0..seq.members(ell) {
                    let q = verify_quasirandomness(seq, ell, m, opts)?;
                    let claim = format!("G_{ell}[{m}]");
                    let detail = format!("alpha_hat {}, eps {}", q.alpha_hat, q.epsilon);
                    let status = match (&q.verdict, q.biregular) {
                        (_, false) => Status::Fail,
                        _ if q.vacuous => Status::Pass,
                        (EpsVerdict::Regular, _) => Status::Pass,
                        (EpsVerdict::Irregular(_), _) => Status::Fail,
                        (EpsVerdict::NoWitnessFound, _) => Status::Undecided,
                    };
                    rep.push_status(suite, &claim, status, if q.vacuous { format!("{detail} (vacuous)") } else { detail });
                }
            }
        }
        "gamma" => {
            let n = seq.gamma_records().count();
            let bad = seq.gamma_records().filter(|g| !g.balanced.accepted).count();
            rep.push(suite, "accepted", bad == 0, format!("{bad} of {n} balanced graphs unaccepted"));
        }
        _ => unreachable!("suite names are checked by the caller"),
    }
    Ok(())
}

fn replay_claim(dir: &Path, man: &RunManifest, rep: &mut Report) -> Result<()> {
    let files = rebuild(man)?;
    let differ: Vec<&str> = files
        .iter()
        .zip(&man.artifacts)
        .filter(|((name, text), a)| *name != a.name || hardreg::graphs::io::sha256_hex(text.as_bytes()) != a.sha256)
        .map(|((name, _), _)| name.as_str())
        .collect();
    let ok = differ.is_empty() && files.len() == man.artifacts.len();
    rep.push("replay", "identical", ok, if ok { format!("{} artifacts rebuilt from {}", files.len(), dir.display()) } else { format!("differs: {}", differ.join(", ")) });
    Ok(())
}

fn hypergraph_suites(dir: &Path, man: &RunManifest, chosen: &[&str], rep: &mut Report) -> Result<()> {
    let k: usize = man.arg("k")?.parse().map_err(|_| Error::Parse("bad k".into()))?;
    let s: usize = man.arg("s")?.parse().map_err(|_| Error::Parse("bad s".into()))?;
    let sched = config::parse::<ScheduleFile>(&man.config, "schedule")?.to_schedule()?;
    let inst = build_pasted_instance(k, s, &sched, seed::derive(man.seed, &["build-hypergraph"]))?;
    for &suite in chosen {
        match suite {
            "replay" => replay_claim(dir, man, rep)?,
            "pasted" => {
                let stored = kgraph_from_text(&read(&dir.join("h.txt"))?)?;
                let expected = pasted_density(k, s);
                let d = stored.density();
                rep.push(suite, "density", d == expected, format!("stored h.txt has density {d}, expected {expected}"));
                let r = verify_pasted(&inst, &sched)?;
                rep.push(suite, "disjoint", r.disjoint, "e(H) equals the sum over pieces");
                rep.push(suite, "pieces", r.holds(s), format!("piece densities {:?}", r.piece_densities.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
                rep.push(suite, "v0", r.v0_cells <= r.v0_bound, format!("{} cells, bound {}", r.v0_cells, r.v0_bound));
            }
            "family" => {
                for (x, fam) in inst.families.iter().enumerate() {
                    let r = verify_family(fam, &sched)?;
                    let detail = format!(
                        "{} members; density {}; lift {}; bookkeeping {}",
                        r.members_checked,
                        first(&r.density_failures),
                        first(&r.lift_failures),
                        first(&r.bookkeeping_failures)
                    );
                    rep.push(suite, &format!("edge{x}"), r.holds(), detail);
                }
            }
            _ => unreachable!("suite names are checked by the caller"),
        }
    }
    Ok(())
}

fn counterexample_suites(
    dir: &Path,
    man: &RunManifest,
    chosen: &[&str],
    opts: &CheckOptions,
    samples: usize,
    seed: u64,
    rep: &mut Report,
) -> Result<()> {
    let params = config::parse::<CounterexampleFile>(&man.config, "params")?.to_params()?;
    for &suite in chosen {
        if suite == "replay" {
            replay_claim(dir, man, rep)?;
            continue;
        }
        let base = Tripartite::from_text(&read(&dir.join("base.txt"))?)?;
        let blowup = Tripartite::from_text(&read(&dir.join("blowup.txt"))?)?;
        rep.push(suite, "blowup-of-base", base.blowup(params.m)? == blowup, format!("m = {}", params.m));
        let r = verify_counterexample(&base, &blowup, &params, opts, samples, seed)?;
        rep.push(suite, "base-triangle-free", r.base_triangle_free, "exhaustive enumeration");
        rep.push(suite, "blowup-triangle-free", r.blowup_triangle_free, "exhaustive enumeration");
        for p in &r.pairs {
            let name = format!("V{}V{}", p.classes.0, p.classes.1);
            rep.push(suite, &format!("density-{name}"), p.density_ok, format!("d = {}, p = {}", p.density, params.p));
            let detail = match &p.worst_ratio {
                Some(x) => format!("worst d(S,T)/d = {x}, need {}", int(1) - &params.delta),
                None => "vacuous".into(),
            };
            let (status, detail) = match (p.strong, params.relaxed) {
                (None, _) => (Status::Undecided, detail),
                (Some(ok), true) => (Status::Measured, format!("{}; {detail}", if ok { "holds" } else { "fails" })),
                (Some(true), false) => (Status::Pass, detail),
                (Some(false), false) => (Status::Fail, detail),
            };
            rep.push_status(suite, &format!("strong-{name}"), status, detail);
            let implied = p.strong != Some(true) || matches!(p.delta_regular, PairVerdict::Regular);
            let why = if p.strong == Some(true) { verdict_name(&p.delta_regular) } else { "vacuous" };
            rep.push(suite, &format!("strong-implies-pair-check-{name}"), implied, why);
        }
        rep.push(suite, "recount", r.recount_exact, format!("{} samples recounted through convex combinations", r.samples.len()));
        let bound = match (r.samples_within_bound, params.relaxed) {
            (_, true) => Status::Measured,
            (true, false) => Status::Pass,
            (false, false) => Status::Fail,
        };
        let within = r.samples.iter().filter(|s| s.bound).count();
        rep.push_status(suite, "blowup-bound", bound, format!("{within} of {} samples meet (1-δ)d|S||T|", r.samples.len()));
    }
    Ok(())
}

fn verdict_name(v: &PairVerdict) -> &'static str {
    match v {
        PairVerdict::Regular => "regular",
        PairVerdict::Irregular(_) => "irregular",
        PairVerdict::NoWitnessFound => "no witness found",
    }
}

#[allow(clippy::too_many_arguments)]
pub fn certify(
    dir: &Path,
    p: &Path,
    q: &Path,
    delta: &str,
    level: usize,
    member: usize,
    t: usize,
    gamma: &str,
    out: &Path,
) -> CliResult {
    let seq = load_core_sequence(dir)?;
    let p = VertexPartition::from_text(&read(p)?)?;
    let q = VertexPartition::from_text(&read(q)?)?;
    let delta = parse_rational(delta)?;
    let choice = if gamma == "paper" { GammaChoice::Paper } else { GammaChoice::Desk(parse_rational(gamma)?) };
    let r = refute_partition(&seq, level, member, &p, &q, &delta, t, &choice)?;
    for s in r.failing_steps() {
        println!("step failed: {} ({} vs {})", s.name, s.lhs, s.rhs);
    }
    fs::write(out, r.certificate.to_text()).map_err(Error::from)?;
    let check = verify_certificate(&read(out)?, &seq.member_graph(level, member))?;
    println!(
        "{} ledger lines, total {}, refutes {}, re-verified {}",
        check.lines_checked,
        r.certificate.total,
        check.refutes,
        check.ok()
    );
    Ok(if check.ok() && check.refutes { Outcome::Pass } else { Outcome::Fail })
}

pub fn verify_cert(dir: &Path, cert: &Path) -> CliResult {
    let seq = load_core_sequence(dir)?;
    let text = read(cert)?;
    let parsed = match Certificate::from_text(&text) {
        Ok(c) => c,
        Err(e) => {
            println!("certificate rejected: {e}");
            return Ok(Outcome::Fail);
        }
    };
    if parsed.level == 0 || parsed.level > seq.s() || parsed.member >= seq.members(parsed.level) {
        println!("certificate names member {} of level {}, which the directory lacks", parsed.member, parsed.level);
        return Ok(Outcome::Fail);
    }
    let check = verify_certificate(&text, &seq.member_graph(parsed.level, parsed.member))?;
    for f in &check.failures {
        println!("failure: {f}");
    }
    println!("{} ledger lines checked, refutes {}, ok {}", check.lines_checked, check.refutes, check.ok());
    Ok(if check.ok() && check.refutes { Outcome::Pass } else { Outcome::Fail })
}
