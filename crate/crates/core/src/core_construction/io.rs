//! Directory layout of a saved `CoreSequence`:
//!
//! ```text
//! core.txt              seed, then the profile
//! L{i}.txt, R{i}.txt    ℒ_i and ℛ_i, i = 1..=s
//! quotient_{j}_{m}.txt  G̃ of member m of 𝒢_j, j = 1..=s
//! gamma_{i}_{p}.txt     seed of Γ_i splitting member p of 𝒢_{i-1}, then Γ_i
//! ```

use std::fs;
use std::path::Path;

use crate::balanced::BalancedGraph;
use crate::core_construction::build::parents;
use crate::core_construction::{CoreSequence, GammaRecord, GrowthProfile};
use crate::error::{Error, Result};
use crate::graphs::io::{bipartite_from_text, bipartite_to_text, sha256_hex};
use crate::graphs::BipartiteGraph;
use crate::partitions::VertexPartition;
use crate::seed;

/// Files in the order they are written, each with its content.
pub fn core_files(seq: &CoreSequence) -> Vec<(String, String)> {
    let s = seq.s();
    let mut out = vec![("core.txt".to_string(), format!("core v1\nseed {}\n{}", seq.seed, seq.profile.to_text()))];
    for i in 1..=s {
        out.push((format!("L{i}.txt"), seq.l_parts[i].to_text()));
        out.push((format!("R{i}.txt"), seq.r_parts[i].to_text()));
    }
    for j in 1..=s {
        for (m, q) in seq.quotients[j].iter().enumerate() {
            out.push((format!("quotient_{j}_{m}.txt"), bipartite_to_text(q)));
        }
    }
    for g in seq.gamma_records() {
        out.push((format!("gamma_{}_{}.txt", g.level, g.parent), format!("seed {}\n{}", g.seed, g.balanced.to_text())));
    }
    out
}

/// Writes every file and returns `(name, sha256)` pairs.
pub fn save_core_sequence(seq: &CoreSequence, dir: &Path) -> Result<Vec<(String, String)>> {
    fs::create_dir_all(dir)?;
    let mut hashes = Vec::new();
    for (name, text) in core_files(seq) {
        fs::write(dir.join(&name), &text)?;
        hashes.push((name, sha256_hex(text.as_bytes())));
    }
    Ok(hashes)
}

fn read(dir: &Path, name: &str) -> Result<String> {
    fs::read_to_string(dir.join(name)).map_err(|e| Error::Parse(format!("{name}: {e}")))
}

pub fn load_core_sequence(dir: &Path) -> Result<CoreSequence> {
    let head = read(dir, "core.txt")?;
    let perr = |m: &str| Error::Parse(format!("core.txt: {m}"));
    let mut lines = head.splitn(3, '\n');
    if lines.next() != Some("core v1") {
        return Err(perr("missing header"));
    }
    let seed: u64 = lines
        .next()
        .and_then(|l| l.strip_prefix("seed "))
        .and_then(|x| x.parse().ok())
        .ok_or_else(|| perr("bad seed line"))?;
    let profile = GrowthProfile::from_text(lines.next().unwrap_or(""))?;
    profile.validate()?;
    let s = profile.s();
    let mut l_parts = vec![VertexPartition::trivial(profile.left_size()?)?];
    let mut r_parts = vec![VertexPartition::trivial(profile.right_size())?];
    for i in 1..=s {
        l_parts.push(VertexPartition::from_text(&read(dir, &format!("L{i}.txt"))?)?);
        r_parts.push(VertexPartition::from_text(&read(dir, &format!("R{i}.txt"))?)?);
    }
    let l_sizes = profile.l_sizes()?;
    for i in 1..=s {
        if l_parts[i].ground_size() != l_parts[0].ground_size() || l_parts[i].len() != l_sizes[i - 1] {
            return Err(Error::Parse(format!("L{i}.txt does not match the profile")));
        }
        if r_parts[i].ground_size() != r_parts[0].ground_size() || r_parts[i].len() != profile.r_sizes[i - 1] {
            return Err(Error::Parse(format!("R{i}.txt does not match the profile")));
        }
    }
    let mut l_parent = vec![Vec::new()];
    let mut r_parent = vec![Vec::new()];
    for i in 1..=s {
        l_parent.push(parents(&l_parts[i], &l_parts[i - 1]));
        r_parent.push(parents(&r_parts[i], &r_parts[i - 1]));
    }
    let mut quotients = vec![vec![BipartiteGraph::complete(1, 1)]];
    for j in 1..=s {
        let mut level = Vec::with_capacity(1 << j);
        for m in 0..1usize << j {
            let name = format!("quotient_{j}_{m}.txt");
            let q = bipartite_from_text(&read(dir, &name)?)?;
            if (q.left(), q.right()) != (l_parts[j].len(), r_parts[j].len()) {
                return Err(Error::Parse(format!("{name} has the wrong shape")));
            }
            level.push(q);
        }
        quotients.push(level);
    }
    let mut gammas = Vec::with_capacity(s);
    for i in 1..=s {
        let mut level = Vec::with_capacity(1 << (i - 1));
        for parent in 0..1usize << (i - 1) {
            let name = format!("gamma_{i}_{parent}.txt");
            let text = read(dir, &name)?;
            let (first, rest) = text.split_once('\n').ok_or_else(|| Error::Parse(format!("{name}: truncated")))?;
            let gseed: u64 = first
                .strip_prefix("seed ")
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::Parse(format!("{name}: bad seed line")))?;
            if gseed != seed::derive(seed, &["core", &i.to_string(), &parent.to_string()]) {
                return Err(Error::Parse(format!("{name}: seed does not derive from the master seed")));
            }
            let balanced = BalancedGraph::from_text(rest)?;
            if (balanced.graph.left(), balanced.graph.right()) != (l_parts[i].len(), r_parts[i].len()) {
                return Err(Error::Parse(format!("{name} has the wrong shape")));
            }
            level.push(GammaRecord {
                level: i,
                parent,
                seed: gseed,
                alpha: profile.alpha_at(i)?,
                beta: profile.beta_at(i),
                balanced,
            });
        }
        gammas.push(level);
    }
    Ok(CoreSequence { profile, seed, l_parts, r_parts, l_parent, r_parent, quotients, gammas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_construction::build::tests::small_profile;
    use crate::core_construction::{build_core_sequence, default_parts, verify_structure};

    #[test]
    fn save_load_round_trip() {
        let p = small_profile();
        let (l, r) = default_parts(&p).unwrap();
        let seq = build_core_sequence(&p, &l, &r, 9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let h1 = save_core_sequence(&seq, dir.path()).unwrap();
        let back = load_core_sequence(dir.path()).unwrap();
        assert_eq!(core_files(&back), core_files(&seq));
        assert!(verify_structure(&back).holds());
        let dir2 = tempfile::tempdir().unwrap();
        assert_eq!(save_core_sequence(&back, dir2.path()).unwrap(), h1);
    }

    #[test]
    fn foreign_seed_is_rejected() {
        let p = small_profile();
        let (l, r) = default_parts(&p).unwrap();
        let seq = build_core_sequence(&p, &l, &r, 9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        save_core_sequence(&seq, dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join("core.txt")).unwrap();
        fs::write(dir.path().join("core.txt"), text.replace("seed 9", "seed 10")).unwrap();
        assert!(load_core_sequence(dir.path()).is_err());
    }
}
