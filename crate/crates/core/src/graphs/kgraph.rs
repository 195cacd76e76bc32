use crate::error::{invalid, Result};
use crate::exact::Rational;
use crate::graphs::bipartite::{density_of, BipartiteGraph};
use crate::graphs::classes::VertexClassSet;

/// Mixed-radix encoding of tuples `(x_0, ..., x_{r-1})` with `x_i < sizes[i]`.
/// The first coordinate is the most significant, so code order is
/// lexicographic tuple order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedRadix {
    sizes: Vec<usize>,
    len: u64,
}

impl MixedRadix {
    pub fn new(sizes: &[usize]) -> Result<Self> {
        let mut len: u64 = 1;
        for &s in sizes {
            if s == 0 {
                return invalid("mixed radix with an empty coordinate");
            }
            len = match len.checked_mul(s as u64) {
                Some(l) => l,
                None => return invalid("product of class sizes overflows 64 bits"),
            };
        }
        Ok(MixedRadix { sizes: sizes.to_vec(), len })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn encode(&self, t: &[usize]) -> Result<u64> {
        if t.len() != self.sizes.len() {
            return invalid(format!("tuple of length {} for radix of length {}", t.len(), self.sizes.len()));
        }
        let mut c = 0u64;
        for (&x, &s) in t.iter().zip(&self.sizes) {
            if x >= s {
                return invalid(format!("coordinate {x} out of range {s}"));
            }
            c = c * s as u64 + x as u64;
        }
        Ok(c)
    }

    pub fn decode(&self, mut c: u64) -> Vec<usize> {
        debug_assert!(c < self.len);
        let mut t = vec![0; self.sizes.len()];
        for i in (0..self.sizes.len()).rev() {
            let s = self.sizes[i] as u64;
            t[i] = (c % s) as usize;
            c /= s;
        }
        t
    }
}

/// k-partite k-graph with edges stored as sorted mixed-radix codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPartiteKGraph {
    classes: VertexClassSet,
    radix: MixedRadix,
    edges: Vec<u64>,
}

impl KPartiteKGraph {
    pub fn empty(sizes: &[usize]) -> Result<Self> {
        Self::with_classes(VertexClassSet::from_sizes(sizes)?)
    }

    pub fn with_classes(classes: VertexClassSet) -> Result<Self> {
        if classes.len() < 2 {
            return invalid("a k-partite k-graph needs k >= 2");
        }
        let radix = MixedRadix::new(&classes.sizes())?;
        Ok(KPartiteKGraph { classes, radix, edges: Vec::new() })
    }

    /// Edges as tuples of local indices, one per class.
    pub fn from_tuples(sizes: &[usize], tuples: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut h = Self::empty(sizes)?;
        let mut codes = Vec::new();
        for t in tuples {
            codes.push(h.radix.encode(&t)?);
        }
        codes.sort_unstable();
        codes.dedup();
        h.edges = codes;
        Ok(h)
    }

    pub fn from_codes(sizes: &[usize], mut codes: Vec<u64>) -> Result<Self> {
        let mut h = Self::empty(sizes)?;
        if let Some(&c) = codes.iter().find(|&&c| c >= h.radix.len()) {
            return invalid(format!("edge code {c} out of range"));
        }
        codes.sort_unstable();
        codes.dedup();
        h.edges = codes;
        Ok(h)
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &VertexClassSet {
        &self.classes
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.sizes()
    }

    pub fn radix(&self) -> &MixedRadix {
        &self.radix
    }

    pub fn codes(&self) -> &[u64] {
        &self.edges
    }

    pub fn edge_count(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        match self.radix.encode(t) {
            Ok(c) => self.edges.binary_search(&c).is_ok(),
            Err(_) => false,
        }
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.edges.iter().map(|&c| self.radix.decode(c))
    }

    /// Edges as sorted global vertex sets (class offsets applied).
    pub fn global_edges(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.tuples().map(|t| t.iter().enumerate().map(|(c, &v)| self.classes.global(c, v)).collect())
    }

    /// `e(H)/∏|V_i|`.
    pub fn density(&self) -> Rational {
        density_of(self.edge_count(), self.radix.len())
    }

    pub fn union(&self, other: &KPartiteKGraph) -> Result<KPartiteKGraph> {
        if self.sizes() != other.sizes() {
            return invalid("union of k-graphs on different classes");
        }
        let mut codes = self.edges.clone();
        codes.extend_from_slice(&other.edges);
        codes.sort_unstable();
        codes.dedup();
        Ok(KPartiteKGraph { classes: self.classes.clone(), radix: self.radix.clone(), edges: codes })
    }

    pub fn is_edge_disjoint(&self, other: &KPartiteKGraph) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.edges.len() && j < other.edges.len() {
            match self.edges[i].cmp(&other.edges[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

/// The auxiliary bipartite graph of a k-graph along one axis: left vertices
/// are the tuples over the other classes (mixed radix, class order), right
/// vertices are the axis class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxGraphView {
    pub axis: usize,
    pub others: Vec<usize>,
    pub left_radix: MixedRadix,
    pub graph: BipartiteGraph,
}

impl AuxGraphView {
    /// Tuple over the other classes for a left vertex.
    pub fn decode_left(&self, u: usize) -> Vec<usize> {
        self.left_radix.decode(u as u64)
    }
}

/// `G_H^axis` with `axis` 0-based.
pub fn aux_graph(h: &KPartiteKGraph, axis: usize) -> Result<AuxGraphView> {
    let k = h.k();
    if axis >= k {
        return invalid(format!("axis {axis} out of range for k = {k}"));
    }
    let sizes = h.sizes();
    let others: Vec<usize> = (0..k).filter(|&c| c != axis).collect();
    let osizes: Vec<usize> = others.iter().map(|&c| sizes[c]).collect();
    let left_radix = MixedRadix::new(&osizes)?;
    let left = usize::try_from(left_radix.len()).map_err(|_| crate::error::Error::Invalid("aux left side too large".into()))?;
    let mut graph = BipartiteGraph::empty(left, sizes[axis]);
    let mut rest = Vec::with_capacity(k - 1);
    for t in h.tuples() {
        rest.clear();
        rest.extend(others.iter().map(|&c| t[c]));
        let u = left_radix.encode(&rest)? as usize;
        graph.add_edge(u, t[axis]);
    }
    Ok(AuxGraphView { axis, others, left_radix, graph })
}

/// Inverse of `aux_graph(·, k-1)`: reads a bipartite graph whose left side is
/// the mixed-radix product of `left_sizes` as a k-graph with the right side as
/// the last class.
pub fn lift_graph_to_kgraph(g: &BipartiteGraph, left_sizes: &[usize]) -> Result<KPartiteKGraph> {
    let radix = MixedRadix::new(left_sizes)?;
    if radix.len() != g.left() as u64 {
        return invalid(format!(
            "left side has {} vertices but the product of {:?} is {}",
            g.left(),
            left_sizes,
            radix.len()
        ));
    }
    let mut sizes = left_sizes.to_vec();
    sizes.push(g.right());
    let n = g.right() as u64;
    // code(t, v) = code(t)·n + v keeps the edge list sorted.
    let codes: Vec<u64> = g.edges().map(|(u, v)| u as u64 * n + v as u64).collect();
    let mut h = KPartiteKGraph::empty(&sizes)?;
    h.edges = codes;
    Ok(h)
}
