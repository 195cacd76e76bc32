//! Canonical serialization.
//!
//! Text form (both graph kinds):
//!
//! ```text
//! kgraph v1
//! sizes 4 4 4
//! edges 2
//! 0 1 2
//! 3 0 1
//! ```
//!
//! Edge tuples are local indices per class, sorted lexicographically.
//! A bipartite graph is written as a 2-partite 2-graph.
//!
//! Binary form: a magic tag, a `u32` format version, then little-endian
//! payload. k-graphs store sorted edge codes; bipartite graphs store their
//! packed adjacency rows.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graphs::bipartite::BipartiteGraph;
use crate::graphs::kgraph::KPartiteKGraph;

pub const FORMAT_VERSION: u32 = 1;
const KGRAPH_MAGIC: &[u8; 4] = b"HRKG";
const BIPARTITE_MAGIC: &[u8; 4] = b"HRBG";

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn kgraph_to_text(h: &KPartiteKGraph) -> String {
    let mut out = String::from("kgraph v1\nsizes");
    for s in h.sizes() {
        out.push_str(&format!(" {s}"));
    }
    out.push_str(&format!("\nedges {}\n", h.edge_count()));
    for t in h.tuples() {
        let line: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn kgraph_from_text(text: &str) -> Result<KPartiteKGraph> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("kgraph v1") {
        return Err(perr("missing 'kgraph v1' header"));
    }
    let sizes: Vec<usize> = match lines.next().and_then(|l| l.strip_prefix("sizes ")) {
        Some(rest) => rest
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| perr(format!("bad class size {x:?}"))))
            .collect::<Result<_>>()?,
        None => return Err(perr("missing sizes line")),
    };
    let count: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("edges "))
        .and_then(|x| x.trim().parse().ok())
        .ok_or_else(|| perr("missing edges line"))?;
    let mut tuples = Vec::with_capacity(count);
    let mut prev: Option<Vec<usize>> = None;
    for line in lines.by_ref().take(count) {
        let t: Vec<usize> = line
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| perr(format!("bad vertex {x:?}"))))
            .collect::<Result<_>>()?;
        if let Some(p) = &prev {
            if *p >= t {
                return Err(perr("edge list not strictly sorted"));
            }
        }
        prev = Some(t.clone());
        tuples.push(t);
    }
    if tuples.len() != count {
        return Err(perr("edge list shorter than declared"));
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(perr("trailing content after edge list"));
    }
    KPartiteKGraph::from_tuples(&sizes, tuples)
}

pub fn bipartite_to_text(g: &BipartiteGraph) -> String {
    let mut out = format!("kgraph v1\nsizes {} {}\nedges {}\n", g.left(), g.right(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn bipartite_from_text(text: &str) -> Result<BipartiteGraph> {
    let h = kgraph_from_text(text)?;
    if h.k() != 2 {
        return Err(perr("expected a 2-partite graph"));
    }
    let s = h.sizes();
    BipartiteGraph::from_edges(s[0], s[1], h.tuples().map(|t| (t[0], t[1])))
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(perr("truncated binary container"));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn header(&mut self, magic: &[u8; 4]) -> Result<()> {
        if self.take(4)? != magic {
            return Err(perr("wrong magic tag"));
        }
        let v = self.u32()?;
        if v != FORMAT_VERSION {
            return Err(perr(format!("unsupported format version {v}")));
        }
        Ok(())
    }
    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(perr("trailing bytes in binary container"));
        }
        Ok(())
    }
}

pub fn kgraph_to_bytes(h: &KPartiteKGraph) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 8 * (h.k() + h.codes().len()));
    out.extend_from_slice(KGRAPH_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(h.k() as u32).to_le_bytes());
    for s in h.sizes() {
        out.extend_from_slice(&(s as u64).to_le_bytes());
    }
    out.extend_from_slice(&(h.codes().len() as u64).to_le_bytes());
    for &c in h.codes() {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

pub fn kgraph_from_bytes(buf: &[u8]) -> Result<KPartiteKGraph> {
    let mut r = Reader { buf, pos: 0 };
    r.header(KGRAPH_MAGIC)?;
    let k = r.u32()? as usize;
    let sizes: Vec<usize> = (0..k).map(|_| r.u64().map(|x| x as usize)).collect::<Result<_>>()?;
    let n = r.u64()? as usize;
    let codes: Vec<u64> = (0..n).map(|_| r.u64()).collect::<Result<_>>()?;
    r.finish()?;
    if codes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(perr("edge codes not strictly sorted"));
    }
    KPartiteKGraph::from_codes(&sizes, codes)
}

pub fn bipartite_to_bytes(g: &BipartiteGraph) -> Vec<u8> {
    let words = g.raw_words();
    let mut out = Vec::with_capacity(24 + 8 * words.len());
    out.extend_from_slice(BIPARTITE_MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(g.left() as u64).to_le_bytes());
    out.extend_from_slice(&(g.right() as u64).to_le_bytes());
    for w in words {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

pub fn bipartite_from_bytes(buf: &[u8]) -> Result<BipartiteGraph> {
    let mut r = Reader { buf, pos: 0 };
    r.header(BIPARTITE_MAGIC)?;
    let left = r.u64()? as usize;
    let right = r.u64()? as usize;
    let n = left
        .checked_mul(crate::bits::words_for(right))
        .ok_or_else(|| perr("graph dimensions overflow"))?;
    if buf.len() != 24 + 8 * n {
        return Err(perr("binary container length does not match its dimensions"));
    }
    let words: Vec<u64> = (0..n).map(|_| r.u64()).collect::<Result<_>>()?;
    r.finish()?;
    BipartiteGraph::from_raw(left, right, words)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Content hash of a bipartite graph's canonical binary form.
pub fn bipartite_hash(g: &BipartiteGraph) -> String {
    sha256_hex(&bipartite_to_bytes(g))
}

pub fn kgraph_hash(h: &KPartiteKGraph) -> String {
    sha256_hex(&kgraph_to_bytes(h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let h = KPartiteKGraph::from_tuples(&[2, 3, 2], [vec![1, 2, 0], vec![0, 0, 1]]).unwrap();
        let t = kgraph_to_text(&h);
        assert_eq!(t, "kgraph v1\nsizes 2 3 2\nedges 2\n0 0 1\n1 2 0\n");
        assert_eq!(kgraph_from_text(&t).unwrap(), h);
        assert!(kgraph_from_text("kgraph v1\nsizes 2 2\nedges 2\n1 1\n0 0\n").is_err());
        assert!(kgraph_from_text("graph\n").is_err());
    }

    #[test]
    fn binary_roundtrip() {
        let g = BipartiteGraph::from_edges(3, 70, [(0, 69), (2, 1)]).unwrap();
        let b = bipartite_to_bytes(&g);
        assert_eq!(bipartite_from_bytes(&b).unwrap(), g);
        let mut bad = b.clone();
        bad[4] = 9;
        assert!(bipartite_from_bytes(&bad).is_err());
        assert!(bipartite_from_bytes(&b[..b.len() - 1]).is_err());
        assert_eq!(bipartite_from_text(&bipartite_to_text(&g)).unwrap(), g);

        let h = KPartiteKGraph::from_tuples(&[2, 2], [vec![1, 1]]).unwrap();
        assert_eq!(kgraph_from_bytes(&kgraph_to_bytes(&h)).unwrap(), h);
    }
}
