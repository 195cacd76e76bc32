use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{invalid, Error, Result};
use crate::graphs::{KPartiteKGraph, MixedRadix, VertexClassSet};
use crate::partitions::vertex::VertexPartition;

/// An r-set of global vertices, sorted ascending.
pub type Edge = Vec<usize>;

/// A cell of layer `r >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub edges: Vec<Edge>,
    /// Clusters of the vertex partition spanned by the cell, ascending.
    pub clusters: Vec<usize>,
    /// The underlying polyad: entry `i` is the cell of layer `r-1` (a cluster
    /// when `r = 2`) holding the faces that omit `clusters[i]`.
    pub under: Vec<usize>,
}

/// All r-sets meeting r distinct cells of `p`, in lexicographic order.
/// Empty when `r` exceeds the number of cells.
pub fn cross_k(p: &VertexPartition, r: usize) -> Result<Vec<Edge>> {
    if r < 2 {
        return invalid("cross_k needs r >= 2");
    }
    Ok(cross_edges(p, r))
}

pub(crate) fn cross_edges(p: &VertexPartition, r: usize) -> Vec<Edge> {
    let mut out = Vec::new();
    if r > p.len() {
        return out;
    }
    for combo in combinations(p.len(), r) {
        let cells: Vec<&[usize]> = combo.iter().map(|&c| p.cell(c)).collect();
        let mut idx = vec![0usize; r];
        loop {
            let mut e: Edge = (0..r).map(|j| cells[j][idx[j]]).collect();
            e.sort_unstable();
            out.push(e);
            let mut j = r;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < cells[j].len() {
                    break;
                }
                idx[j] = 0;
                if j == 0 {
                    j = usize::MAX;
                    break;
                }
            }
            if j == usize::MAX {
                break;
            }
        }
    }
    out.sort_unstable();
    out
}

/// `|Cross_r(P)|`, the elementary symmetric polynomial of the cell sizes.
pub fn cross_count(p: &VertexPartition, r: usize) -> u128 {
    let mut e = vec![0u128; r + 1];
    e[0] = 1;
    for c in p.cells() {
        for j in (1..=r).rev() {
            e[j] += e[j - 1] * c.len() as u128;
        }
    }
    e[r]
}

/// Lexicographic r-combinations of `0..n`.
pub fn combinations(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if r <= n { Some((0..r).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = r;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - r + i {
                c[i] += 1;
                for j in i + 1..r {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// A layered partition `P(1) ∪ ... ∪ P(arity)`.
#[derive(Clone, Debug)]
pub struct KPartition {
    vertex: VertexPartition,
    layers: Vec<Vec<Cell>>,
    lookup: Vec<HashMap<Edge, usize>>,
}

impl PartialEq for KPartition {
    fn eq(&self, other: &Self) -> bool {
        self.vertex == other.vertex && self.layers == other.layers
    }
}

impl KPartition {
    /// Validates and builds. `layers[j]` lists the cells of arity `j + 2`,
    /// each cell given by its edges.
    pub fn new(vertex: VertexPartition, layers: Vec<Vec<Vec<Edge>>>) -> Result<Self> {
        let mut kp = KPartition { vertex, layers: Vec::new(), lookup: Vec::new() };
        for (j, cells) in layers.into_iter().enumerate() {
            kp.push_layer(j + 2, cells)?;
        }
        Ok(kp)
    }

    pub fn trivial(vertex: VertexPartition) -> Self {
        KPartition { vertex, layers: Vec::new(), lookup: Vec::new() }
    }

    /// Every layer up to `arity` has one cell per set of clusters.
    pub fn complete(vertex: VertexPartition, arity: usize) -> Result<Self> {
        Self::from_labels(vertex, arity, |_, _| 0)
    }

    /// Layer `r` groups the edges of `Cross_r` by spanned clusters and by
    /// `label(r, edge)`.
    pub fn from_labels(vertex: VertexPartition, arity: usize, mut label: impl FnMut(usize, &Edge) -> u64) -> Result<Self> {
        let mut kp = KPartition::trivial(vertex);
        for r in 2..=arity {
            let mut groups: BTreeMap<(Vec<usize>, u64), Vec<Edge>> = BTreeMap::new();
            for e in cross_edges(&kp.vertex, r) {
                let mut cl: Vec<usize> = e.iter().map(|&v| kp.vertex.cell_of(v)).collect();
                cl.sort_unstable();
                let l = label(r, &e);
                groups.entry((cl, l)).or_default().push(e);
            }
            kp.push_layer(r, groups.into_values().collect())?;
        }
        Ok(kp)
    }

    fn push_layer(&mut self, r: usize, cells: Vec<Vec<Edge>>) -> Result<()> {
        if r != self.layers.len() + 2 {
            return invalid("layers must be added in order");
        }
        let n = self.vertex.ground_size();
        let mut lookup: HashMap<Edge, usize> = HashMap::new();
        let mut out = Vec::with_capacity(cells.len());
        let mut total: u128 = 0;
        for (ci, mut edges) in cells.into_iter().enumerate() {
            if edges.is_empty() {
                return invalid(format!("layer {r} has an empty cell"));
            }
            edges.sort_unstable();
            let mut key: Option<(Vec<usize>, Vec<usize>)> = None;
            for e in &edges {
                if e.len() != r || e.windows(2).any(|w| w[0] >= w[1]) || e.iter().any(|&v| v >= n) {
                    return invalid(format!("malformed {r}-set {e:?}"));
                }
                let k = self.polyad_of(e)?;
                match &key {
                    None => key = Some(k),
                    Some(k0) if *k0 != k => {
                        return invalid(format!("layer {r} cell {ci} is not underlain by a single polyad"))
                    }
                    _ => {}
                }
                if lookup.insert(e.clone(), ci).is_some() {
                    return invalid(format!("{r}-set {e:?} lies in two cells"));
                }
                total += 1;
            }
            let (clusters, under) = key.unwrap();
            out.push(Cell { edges, clusters, under });
        }
        if total != cross_count(&self.vertex, r) {
            return invalid(format!("layer {r} does not cover Cross_{r} of the vertex partition"));
        }
        self.layers.push(out);
        self.lookup.push(lookup);
        Ok(())
    }

    /// Clusters and underlying polyad of a crossing set, using the layers
    /// already present.
    fn polyad_of(&self, e: &Edge) -> Result<(Vec<usize>, Vec<usize>)> {
        let r = e.len();
        let mut by_cluster: Vec<(usize, usize)> = e.iter().map(|&v| (self.vertex.cell_of(v), v)).collect();
        by_cluster.sort_unstable();
        if by_cluster.windows(2).any(|w| w[0].0 == w[1].0) {
            return invalid(format!("{e:?} does not cross distinct clusters"));
        }
        let clusters: Vec<usize> = by_cluster.iter().map(|x| x.0).collect();
        let mut under = Vec::with_capacity(r);
        for i in 0..r {
            let mut face: Edge = by_cluster.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.1).collect();
            face.sort_unstable();
            let c = if r == 2 {
                self.vertex.cell_of(face[0])
            } else {
                *self.lookup[r - 3]
                    .get(&face)
                    .ok_or_else(|| Error::Invalid(format!("face {face:?} missing from layer {}", r - 1)))?
            };
            under.push(c);
        }
        Ok((clusters, under))
    }

    /// Number of layers including the vertex partition.
    pub fn arity(&self) -> usize {
        self.layers.len() + 1
    }

    pub fn vertex(&self) -> &VertexPartition {
        &self.vertex
    }

    pub fn ground_size(&self) -> usize {
        self.vertex.ground_size()
    }

    /// Cells of layer `r >= 2`.
    pub fn layer(&self, r: usize) -> &[Cell] {
        &self.layers[r - 2]
    }

    /// Number of cells in layer `r >= 1`.
    pub fn layer_len(&self, r: usize) -> usize {
        if r == 1 {
            self.vertex.len()
        } else {
            self.layers[r - 2].len()
        }
    }

    /// Edges of a cell of layer `r`, with clusters read as 1-sets.
    pub fn cell_edges(&self, r: usize, c: usize) -> Vec<Edge> {
        if r == 1 {
            self.vertex.cell(c).iter().map(|&v| vec![v]).collect()
        } else {
            self.layers[r - 2][c].edges.clone()
        }
    }

    pub fn cell_of_edge(&self, e: &Edge) -> Option<usize> {
        match e.len() {
            0 => None,
            1 => (e[0] < self.ground_size()).then(|| self.vertex.cell_of(e[0])),
            r => self.lookup.get(r - 2)?.get(e).copied(),
        }
    }

    pub fn drop_top(&self) -> KPartition {
        let mut p = self.clone();
        p.layers.pop();
        p.lookup.pop();
        p
    }

    /// Restriction to the vertices in `keep`, which must be a union of
    /// clusters. Vertices are renumbered by their rank in `keep`; the
    /// returned vector maps new indices to old ones.
    pub fn restrict(&self, keep: &[usize]) -> Result<(KPartition, Vec<usize>)> {
        let mut old: Vec<usize> = keep.to_vec();
        old.sort_unstable();
        old.dedup();
        let vertex = self.vertex.restrict(&old)?;
        let pos: HashMap<usize, usize> = old.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut layers = Vec::new();
        for cells in &self.layers {
            let mut kept = Vec::new();
            for c in cells {
                if c.edges[0].iter().all(|v| pos.contains_key(v)) {
                    kept.push(c.edges.iter().map(|e| e.iter().map(|v| pos[v]).collect()).collect());
                }
            }
            layers.push(kept);
        }
        Ok((KPartition::new(vertex, layers)?, old))
    }

    /// Clusters inside class `i`. Fails if the vertex partition does not
    /// refine the classes.
    pub fn class_clusters(&self, classes: &VertexClassSet, i: usize) -> Result<Vec<usize>> {
        self.check_refines_classes(classes)?;
        Ok((0..self.vertex.len())
            .filter(|&c| classes.locate(self.vertex.cell(c)[0]).unwrap().0 == i)
            .collect())
    }

    pub fn check_refines_classes(&self, classes: &VertexClassSet) -> Result<()> {
        if classes.total() != self.ground_size() {
            return invalid("class set and partition have different ground sets");
        }
        for c in self.vertex.cells() {
            let k0 = classes.locate(c[0]).unwrap().0;
            if c.iter().any(|&v| classes.locate(v).unwrap().0 != k0) {
                return invalid("vertex partition does not refine the classes");
            }
        }
        Ok(())
    }

    /// `E_i(P)`: top-layer cells inside `∏_{j≠i} V_j`.
    pub fn e_cells(&self, classes: &VertexClassSet, i: usize) -> Result<Vec<usize>> {
        self.check_refines_classes(classes)?;
        let k = classes.len();
        if self.arity() + 1 != k {
            return invalid(format!("a {}-partition cannot partition a {k}-partite k-graph", self.arity()));
        }
        let top = self.arity();
        let want: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        let mut out = Vec::new();
        for c in 0..self.layer_len(top) {
            let e = if top == 1 { vec![self.vertex.cell(c)[0]] } else { self.layers[top - 2][c].edges[0].clone() };
            let mut cls: Vec<usize> = e.iter().map(|&v| classes.locate(v).unwrap().0).collect();
            cls.sort_unstable();
            if cls == want {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// `E_i(P)` as a partition of the mixed-radix product `∏_{j≠i} V_j`
    /// (local coordinates, class order), with the cell ids it came from.
    pub fn e_partition(&self, classes: &VertexClassSet, i: usize) -> Result<(VertexPartition, Vec<usize>)> {
        let cells = self.e_cells(classes, i)?;
        let k = classes.len();
        let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        let radix = MixedRadix::new(&others.iter().map(|&j| classes.size(j)).collect::<Vec<_>>())?;
        let n = radix.len() as usize;
        let top = self.arity();
        let mut groups = Vec::with_capacity(cells.len());
        for &c in &cells {
            let mut g = Vec::new();
            for e in self.cell_edges(top, c) {
                let t = class_tuple(&e, classes);
                let local: Vec<usize> = t.iter().map(|&(_, l)| l).collect();
                g.push(radix.encode(&local)? as usize);
            }
            groups.push(g);
        }
        // VertexPartition reorders cells canonically; recover the id map.
        let p = VertexPartition::new(n, groups.clone())
            .map_err(|e| Error::Invalid(format!("E_{i}(P) does not partition the product: {e}")))?;
        let ids = (0..p.len())
            .map(|pc| {
                let v = p.cell(pc)[0];
                cells[groups.iter().position(|g| g.contains(&v)).unwrap()]
            })
            .collect();
        Ok((p, ids))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("kpartition v1\nn {}\narity {}\nlayer 1 cells {}\n", self.ground_size(), self.arity(), self.vertex.len());
        for c in self.vertex.cells() {
            out.push_str(&join(c, " "));
            out.push('\n');
        }
        for (j, cells) in self.layers.iter().enumerate() {
            out.push_str(&format!("layer {} cells {}\n", j + 2, cells.len()));
            for c in cells {
                out.push_str(&format!("under {} |", join(&c.under, " ")));
                for e in &c.edges {
                    out.push(' ');
                    out.push_str(&join(e, ","));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |m: &str| Error::Parse(format!("kpartition: {m}"));
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("kpartition v1") {
            return Err(perr("missing header"));
        }
        let mut field = |name: &str| -> Result<usize> {
            lines
                .next()
                .and_then(|l| l.strip_prefix(name))
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| perr(&format!("missing {name}")))
        };
        let n = field("n ")?;
        let arity = field("arity ")?;
        let c1 = field("layer 1 cells ")?;
        let mut lines = text.lines().skip(4);
        let mut cells = Vec::new();
        for _ in 0..c1 {
            let l = lines.next().ok_or_else(|| perr("truncated layer 1"))?;
            cells.push(parse_list(l, ' ').ok_or_else(|| perr("bad vertex"))?);
        }
        let vertex = VertexPartition::new(n, cells)?;
        let mut layers = Vec::new();
        let mut unders = Vec::new();
        for r in 2..=arity {
            let head = lines.next().ok_or_else(|| perr("missing layer"))?;
            let count: usize = head
                .strip_prefix(&format!("layer {r} cells "))
                .and_then(|x| x.trim().parse().ok())
                .ok_or_else(|| perr("bad layer header"))?;
            let mut layer = Vec::new();
            let mut under = Vec::new();
            for _ in 0..count {
                let l = lines.next().ok_or_else(|| perr("truncated layer"))?;
                let (u, es) = l.strip_prefix("under ").and_then(|x| x.split_once('|')).ok_or_else(|| perr("bad cell line"))?;
                under.push(parse_list(u, ' ').ok_or_else(|| perr("bad under map"))?);
                let edges = es
                    .split_whitespace()
                    .map(|e| parse_list(e, ','))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| perr("bad edge"))?;
                layer.push(edges);
            }
            layers.push(layer);
            unders.push(under);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(perr("trailing content"));
        }
        let kp = KPartition::new(vertex, layers)?;
        for (j, under) in unders.iter().enumerate() {
            for (c, u) in under.iter().enumerate() {
                if kp.layers[j][c].under != *u {
                    return Err(perr("under map does not match the cells"));
                }
            }
        }
        Ok(kp)
    }
}

fn join(v: &[usize], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn parse_list(s: &str, sep: char) -> Option<Vec<usize>> {
    s.split(sep).filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse().ok()).collect()
}

/// `(class, local)` pairs of a set's vertices, in class order.
pub fn class_tuple(e: &[usize], classes: &VertexClassSet) -> Vec<(usize, usize)> {
    let mut t: Vec<(usize, usize)> = e.iter().map(|&v| classes.locate(v).expect("vertex in range")).collect();
    t.sort_unstable();
    t
}

/// A k-polyad `(F_0, ..., F_{k-1})` on classes `(V_0, ..., V_{k-1})`.
///
/// Tuples are written in class order. Part `i` holds (k-1)-tuples omitting
/// class `i`; for `k = 2` the parts are the vertex sets themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyad {
    classes: Vec<Vec<usize>>,
    parts: Vec<Vec<Vec<usize>>>,
}

impl Polyad {
    pub fn new(classes: Vec<Vec<usize>>, parts: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let k = classes.len();
        if k < 2 || parts.len() != k {
            return invalid("a k-polyad needs k >= 2 classes and k parts");
        }
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                if owner.insert(v, i).is_some() {
                    return invalid("polyad classes overlap");
                }
            }
        }
        let mut parts = parts;
        for (i, part) in parts.iter_mut().enumerate() {
            for t in part.iter() {
                if t.len() != k - 1 {
                    return invalid("polyad tuple of the wrong length");
                }
                let expect = (0..k).filter(|&j| j != i);
                for (&v, j) in t.iter().zip(expect) {
                    if owner.get(&v) != Some(&j) {
                        return invalid(format!("part {i} tuple {t:?} not on the expected classes"));
                    }
                }
            }
            part.sort_unstable();
            part.dedup();
        }
        let mut classes = classes;
        classes.iter_mut().for_each(|c| c.sort_unstable());
        Ok(Polyad { classes, parts })
    }

    /// The 2-polyad on `(a, b)`.
    pub fn pair(a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        let pa = b.iter().map(|&v| vec![v]).collect();
        let pb = a.iter().map(|&v| vec![v]).collect();
        Polyad::new(vec![a, b], vec![pa, pb])
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn parts(&self) -> &[Vec<Vec<usize>>] {
        &self.parts
    }

    /// Sub-polyad keeping only the selected tuples of each part.
    pub fn sub(&self, keep: &[Vec<bool>]) -> Polyad {
        let parts = self
            .parts
            .iter()
            .zip(keep)
            .map(|(p, m)| p.iter().zip(m).filter(|(_, &b)| b).map(|(t, _)| t.clone()).collect())
            .collect();
        Polyad { classes: self.classes.clone(), parts }
    }

    /// `𝒦(P)` as k-tuples in class order, sorted.
    pub fn clique_tuples(&self) -> Vec<Vec<usize>> {
        let k = self.k();
        let sets: Vec<HashSet<&Vec<usize>>> = self.parts.iter().map(|p| p.iter().collect()).collect();
        let mut out = Vec::new();
        let mut face = Vec::with_capacity(k - 1);
        for f in &self.parts[k - 1] {
            'v: for &v in &self.classes[k - 1] {
                let mut t = f.clone();
                t.push(v);
                for i in 0..k - 1 {
                    face.clear();
                    face.extend(t.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &x)| x));
                    if !sets[i].contains(&face) {
                        continue 'v;
                    }
                }
                out.push(t);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn clique_count(&self) -> usize {
        self.clique_tuples().len()
    }
}

/// `𝒦(P)` as a k-partite k-graph whose classes are the polyad's classes
/// (local index = rank within the class).
pub fn clique_set(p: &Polyad) -> Result<KPartiteKGraph> {
    let sizes: Vec<usize> = p.classes.iter().map(|c| c.len()).collect();
    let rank: Vec<HashMap<usize, usize>> =
        p.classes.iter().map(|c| c.iter().enumerate().map(|(i, &v)| (v, i)).collect()).collect();
    let tuples = p.clique_tuples().into_iter().map(|t| t.iter().enumerate().map(|(i, v)| rank[i][v]).collect());
    KPartiteKGraph::from_tuples(&sizes, tuples)
}

/// `F ∘ V`: every tuple of `F` extended by every vertex of `V`.
pub fn compose(f: &[Vec<usize>], v: &[usize]) -> Result<Vec<Vec<usize>>> {
    let used: HashSet<usize> = f.iter().flatten().copied().collect();
    if v.iter().any(|x| used.contains(x)) {
        return invalid("V meets the vertex set of F");
    }
    let mut out = Vec::with_capacity(f.len() * v.len());
    for t in f {
        for &x in v {
            let mut e = t.clone();
            e.push(x);
            out.push(e);
        }
    }
    Ok(out)
}

/// The polyads of `P` whose clique sets tile `F ∘ V`, for a top-layer cell
/// `F ∈ E_k(P)` and a cluster `V` inside the last class. The last part of
/// every returned polyad is `F`.
pub fn decompose_polyads(p: &KPartition, classes: &VertexClassSet, f: usize, v: usize) -> Result<Vec<Polyad>> {
    let k = classes.len();
    let top = p.arity();
    let e_k = p.e_cells(classes, k - 1)?;
    if !e_k.contains(&f) {
        return invalid("F is not a cell of E_k(P)");
    }
    if !p.class_clusters(classes, k - 1)?.contains(&v) {
        return invalid("V is not a cluster of the last class");
    }
    let f_edges = p.cell_edges(top, f);
    let mut keys: BTreeSet<Vec<usize>> = BTreeSet::new();
    for e in &f_edges {
        for &x in p.vertex().cell(v) {
            let mut t = e.clone();
            t.push(x);
            let ct = class_tuple(&t, classes);
            let mut key = Vec::with_capacity(k);
            for i in 0..k {
                let mut face: Edge = ct.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &(c, l))| classes.global(c, l)).collect();
                face.sort_unstable();
                key.push(p.cell_of_edge(&face).ok_or_else(|| Error::Invalid("face outside P".into()))?);
            }
            keys.insert(key);
        }
    }
    let mut out = Vec::new();
    for key in keys {
        // Cluster of class i: read from a face containing class i.
        let mut cl_classes: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut parts = Vec::with_capacity(k);
        for (i, &cell) in key.iter().enumerate() {
            let edges = p.cell_edges(top, cell);
            let tuples: Vec<Vec<usize>> = edges
                .iter()
                .map(|e| class_tuple(e, classes).iter().map(|&(c, l)| classes.global(c, l)).collect())
                .collect();
            for (j, &x) in tuples[0].iter().enumerate() {
                let class = if j < i { j } else { j + 1 };
                if cl_classes[class].is_empty() {
                    cl_classes[class] = p.vertex().cell(p.vertex().cell_of(x)).to_vec();
                }
            }
            parts.push(tuples);
        }
        out.push(Polyad::new(cl_classes, parts)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_lex() {
        let c: Vec<_> = combinations(4, 2).collect();
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![0, 1]);
        assert_eq!(c[5], vec![2, 3]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(3, 0).count(), 1);
    }

    #[test]
    fn cross_examples() {
        let single = VertexPartition::singletons(5);
        assert_eq!(cross_k(&single, 2).unwrap().len(), 10);
        let one = VertexPartition::trivial(4).unwrap();
        assert!(cross_k(&one, 2).unwrap().is_empty());
        let three = VertexPartition::blocks(6, 3).unwrap();
        let x = cross_k(&three, 2).unwrap();
        assert_eq!(x.len(), 12);
        assert_eq!(cross_count(&three, 2), 12);
        assert_eq!(cross_count(&three, 3), 8);
        assert!(cross_k(&three, 1).is_err());
    }

    #[test]
    fn complete_partition_layers() {
        let v = VertexPartition::blocks(6, 3).unwrap();
        let p = KPartition::complete(v, 3).unwrap();
        assert_eq!(p.layer(2).len(), 3);
        assert_eq!(p.layer(3).len(), 1);
        assert_eq!(p.layer(3)[0].under, vec![2, 1, 0]);
        assert_eq!(p.layer(2)[0].clusters, vec![0, 1]);
        assert_eq!(p.layer(2)[0].under, vec![1, 0]);
        let t = p.to_text();
        assert_eq!(KPartition::from_text(&t).unwrap(), p);
    }

    #[test]
    fn layer_must_cover_cross() {
        let v = VertexPartition::blocks(4, 2).unwrap();
        let partial = vec![vec![vec![0, 2], vec![0, 3]]];
        assert!(KPartition::new(v.clone(), vec![partial]).is_err());
        let bad = vec![vec![vec![0, 1]]];
        assert!(KPartition::new(v, vec![bad]).is_err());
    }

    #[test]
    fn pair_polyad_is_complete_bipartite() {
        let p = Polyad::pair(vec![0, 1], vec![5, 6, 7]).unwrap();
        assert_eq!(p.clique_count(), 6);
        let h = clique_set(&p).unwrap();
        assert_eq!(h.edge_count(), 6);
        assert_eq!(h.density(), crate::exact::int(1));
    }

    #[test]
    fn triangle_polyad() {
        // classes {0,1}, {2,3}, {4,5}; triangle 0-2-4 and a stray edge 1-3.
        let f0 = vec![vec![2, 4]];
        let f1 = vec![vec![0, 4]];
        let f2 = vec![vec![0, 2], vec![1, 3]];
        let p = Polyad::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]], vec![f0, f1, f2]).unwrap();
        assert_eq!(p.clique_tuples(), vec![vec![0, 2, 4]]);
        let empty = Polyad::new(vec![vec![0, 1], vec![2, 3], vec![4, 5]], vec![vec![], vec![vec![0, 4]], vec![vec![0, 2]]]).unwrap();
        assert!(empty.clique_tuples().is_empty());
    }

    #[test]
    fn compose_examples() {
        assert!(compose(&[], &[1, 2]).unwrap().is_empty());
        let f: Vec<Vec<usize>> = (0..5).map(|i| vec![i, 10 + i]).collect();
        assert_eq!(compose(&f, &[20, 21, 22]).unwrap().len(), 15);
        assert!(compose(&f, &[0]).is_err());
        assert_eq!(compose(&[vec![0], vec![1]], &[2, 3]).unwrap().len(), 4);
    }
}
