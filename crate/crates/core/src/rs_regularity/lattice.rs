use rand::Rng as _;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::graphs::density_of;
use crate::partitions::Polyad;
use crate::regularity::{CheckOptions, Mode};
use crate::seed;

/// Exact mode refuses parts with more active faces than this.
pub const MAX_ACTIVE_FACES: usize = 16;

/// The cliques of a polyad, each with the index of its face in every part and
/// whether it lies in the target k-graph. Only faces lying in some clique
/// ("active" faces) affect `𝒦(S)`, so sub-polyads are enumerated over them.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    part_len: Vec<usize>,
    /// Per part, the positions (in the polyad's part) of the active faces.
    active: Vec<Vec<usize>>,
    /// Per clique, the active-face index in each part.
    faces: Vec<Vec<u32>>,
    hit: Vec<bool>,
}

/// A sub-polyad `S ⊆ P` with its clique and target counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubPolyad {
    /// Per part of `P`, which tuples `S` keeps.
    pub keep: Vec<Vec<bool>>,
    /// `|𝒦(S)|`.
    pub cliques: u64,
    /// `|H ∩ 𝒦(S)|`.
    pub hits: u64,
}

impl SubPolyad {
    pub fn density(&self) -> Rational {
        density_of(self.hits, self.cliques)
    }

    pub fn polyad(&self, p: &Polyad) -> Polyad {
        p.sub(&self.keep)
    }
}

impl Lattice {
    pub(crate) fn new(p: &Polyad, target: impl Fn(&[usize]) -> bool) -> Self {
        let k = p.k();
        let cliques = p.clique_tuples();
        let mut used: Vec<Vec<bool>> = p.parts().iter().map(|part| vec![false; part.len()]).collect();
        let mut pos: Vec<Vec<usize>> = Vec::with_capacity(cliques.len());
        let mut face = Vec::with_capacity(k - 1);
        for t in &cliques {
            let mut row = Vec::with_capacity(k);
            for i in 0..k {
                face.clear();
                face.extend(t.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x));
                let ix = p.parts()[i].binary_search(&face).expect("clique face lies in its part");
                used[i][ix] = true;
                row.push(ix);
            }
            pos.push(row);
        }
        let active: Vec<Vec<usize>> =
            used.iter().map(|u| u.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()).collect();
        let rank: Vec<Vec<u32>> = used
            .iter()
            .map(|u| {
                let mut r = vec![u32::MAX; u.len()];
                let mut next = 0;
                for (i, &b) in u.iter().enumerate() {
                    if b {
                        r[i] = next;
                        next += 1;
                    }
                }
                r
            })
            .collect();
        let faces = pos.iter().map(|row| row.iter().enumerate().map(|(i, &ix)| rank[i][ix]).collect()).collect();
        let hit = cliques.iter().map(|t| target(t)).collect();
        Lattice { part_len: p.parts().iter().map(Vec::len).collect(), active, faces, hit }
    }

    pub(crate) fn cliques(&self) -> u64 {
        self.faces.len() as u64
    }

    pub(crate) fn hits(&self) -> u64 {
        self.hit.iter().filter(|&&b| b).count() as u64
    }

    pub(crate) fn whole(&self) -> SubPolyad {
        SubPolyad { keep: self.part_len.iter().map(|&n| vec![true; n]).collect(), cliques: self.cliques(), hits: self.hits() }
    }

    fn materialize(&self, chosen: &[Vec<bool>]) -> SubPolyad {
        let mut keep: Vec<Vec<bool>> = self.part_len.iter().map(|&n| vec![false; n]).collect();
        for (i, c) in chosen.iter().enumerate() {
            for (a, &b) in c.iter().enumerate() {
                keep[i][self.active[i][a]] = b;
            }
        }
        let (cliques, hits) = self.count(chosen);
        SubPolyad { keep, cliques, hits }
    }

    fn count(&self, chosen: &[Vec<bool>]) -> (u64, u64) {
        let mut c = 0;
        let mut h = 0;
        for (row, &hit) in self.faces.iter().zip(&self.hit) {
            if row.iter().enumerate().all(|(i, &f)| chosen[i][f as usize]) {
                c += 1;
                h += hit as u64;
            }
        }
        (c, h)
    }

    /// Number of sub-polyads exact mode would visit.
    pub(crate) fn exact_size(&self) -> u128 {
        let bits: usize = self.active.iter().map(Vec::len).sum();
        if bits >= 127 {
            u128::MAX
        } else {
            1u128 << bits
        }
    }

    /// Calls `visit(cliques, hits)` for every sub-polyad (exact mode) or for
    /// `P` and the sampled ones. When `visit` returns true the sub-polyad is
    /// materialized and passed to `record`. Returns whether the walk was
    /// exhaustive.
    pub(crate) fn walk(
        &self,
        opts: &CheckOptions,
        mut visit: impl FnMut(u64, u64) -> bool,
        mut record: impl FnMut(SubPolyad),
    ) -> Result<bool> {
        if self.faces.is_empty() {
            return Ok(true);
        }
        match opts.mode {
            Mode::Exact => {
                let needed = self.exact_size();
                if needed > opts.cap || self.active.iter().any(|a| a.len() > MAX_ACTIVE_FACES) {
                    return Err(Error::CapExceeded { needed, cap: opts.cap });
                }
                self.walk_exact(&mut visit, &mut record);
                Ok(true)
            }
            Mode::Sampled { seed, restarts } => {
                let all: Vec<Vec<bool>> = self.active.iter().map(|a| vec![true; a.len()]).collect();
                if visit(self.cliques(), self.hits()) {
                    record(self.materialize(&all));
                }
                let mut rng = seed::rng(seed);
                for _ in 0..restarts {
                    let chosen: Vec<Vec<bool>> = self
                        .active
                        .iter()
                        .map(|a| {
                            let keep = rng.random_range(1..=8u32);
                            (0..a.len()).map(|_| rng.random_ratio(keep, 8)).collect()
                        })
                        .collect();
                    let (c, h) = self.count(&chosen);
                    if visit(c, h) {
                        record(self.materialize(&chosen));
                    }
                }
                Ok(false)
            }
        }
    }

    fn walk_exact(&self, visit: &mut impl FnMut(u64, u64) -> bool, record: &mut impl FnMut(SubPolyad)) {
        let k = self.active.len();
        let last = k - 1;
        let width: Vec<usize> = self.active.iter().map(Vec::len).collect();
        let inner = 1usize << width[last];
        let mut outer = vec![0u32; last];
        let mut cnt = vec![0u64; width[last]];
        let mut hit = vec![0u64; width[last]];
        let mut sum_c = vec![0u64; inner];
        let mut sum_h = vec![0u64; inner];
        loop {
            cnt.iter_mut().for_each(|x| *x = 0);
            hit.iter_mut().for_each(|x| *x = 0);
            for (row, &h) in self.faces.iter().zip(&self.hit) {
                if (0..last).all(|i| outer[i] >> row[i] & 1 == 1) {
                    cnt[row[last] as usize] += 1;
                    hit[row[last] as usize] += h as u64;
                }
            }
            for mask in 1..inner {
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                sum_c[mask] = sum_c[rest] + cnt[low];
                sum_h[mask] = sum_h[rest] + hit[low];
            }
            for mask in 0..inner {
                if visit(sum_c[mask], sum_h[mask]) {
                    let mut chosen: Vec<Vec<bool>> =
                        (0..last).map(|i| (0..width[i]).map(|b| outer[i] >> b & 1 == 1).collect()).collect();
                    chosen.push((0..width[last]).map(|b| mask >> b & 1 == 1).collect());
                    record(self.materialize(&chosen));
                }
            }
            let mut i = 0;
            loop {
                if i == last {
                    return;
                }
                outer[i] += 1;
                if (outer[i] as usize) < 1usize << width[i] {
                    break;
                }
                outer[i] = 0;
                i += 1;
            }
        }
    }
}
