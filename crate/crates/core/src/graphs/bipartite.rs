use num_bigint::BigInt;

use crate::bits::{self, BitSet};
use crate::error::{invalid, Result};
use crate::exact::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Bipartite graph on `(A, B)` with `A = 0..left`, `B = 0..right`.
/// One bit-packed adjacency row per left vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BipartiteGraph({}x{}, {} edges)", self.left, self.right, self.edge_count())
    }
}

impl BipartiteGraph {
    pub fn empty(left: usize, right: usize) -> Self {
        let stride = bits::words_for(right);
        BipartiteGraph { left, right, stride, rows: vec![0; stride * left] }
    }

    pub fn complete(left: usize, right: usize) -> Self {
        let mut g = Self::empty(left, right);
        let full = BitSet::full(right);
        for u in 0..left {
            g.row_mut(u).copy_from_slice(full.words());
        }
        g
    }

    pub fn from_edges(left: usize, right: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(left, right);
        for (u, v) in edges {
            if u >= left || v >= right {
                return invalid(format!("edge ({u},{v}) outside {left}x{right}"));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds from one bitset row per left vertex.
    pub fn from_rows(right: usize, rows: &[BitSet]) -> Result<Self> {
        let mut g = Self::empty(rows.len(), right);
        for (u, r) in rows.iter().enumerate() {
            if r.len() != right {
                return invalid("row length mismatch");
            }
            g.row_mut(u).copy_from_slice(r.words());
        }
        Ok(g)
    }

    pub(crate) fn from_raw(left: usize, right: usize, rows: Vec<u64>) -> Result<Self> {
        let stride = bits::words_for(right);
        if rows.len() != stride * left {
            return invalid("raw row buffer has wrong length");
        }
        let g = BipartiteGraph { left, right, stride, rows };
        let r = right % 64;
        if r != 0 && (0..left).any(|u| g.row(u)[stride - 1] >> r != 0) {
            return invalid("raw rows carry bits beyond the right side");
        }
        Ok(g)
    }

    pub(crate) fn raw_words(&self) -> &[u64] {
        &self.rows
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, u: usize) -> &mut [u64] {
        &mut self.rows[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.stride + v / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.stride + v / 64] &= !(1 << (v % 64));
    }

    pub fn set_edge(&mut self, u: usize, v: usize, on: bool) {
        if on {
            self.add_edge(u, v)
        } else {
            self.remove_edge(u, v)
        }
    }

    pub fn edge_count(&self) -> u64 {
        bits::count(&self.rows)
    }

    pub fn degree(&self, u: usize) -> u64 {
        bits::count(self.row(u))
    }

    /// Degrees of all right vertices.
    pub fn right_degrees(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.right];
        for u in 0..self.left {
            for v in self.neighbors_iter(u) {
                d[v] += 1;
            }
        }
        d
    }

    pub fn degree_of(&self, side: Side, v: usize) -> u64 {
        match side {
            Side::Left => self.degree(v),
            Side::Right => (0..self.left).filter(|&u| self.has_edge(u, v)).count() as u64,
        }
    }

    pub fn neighbors_iter(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        self.neighbors_iter(u).collect()
    }

    pub fn row_set(&self, u: usize) -> BitSet {
        let mut s = BitSet::new(self.right);
        s.words_mut().copy_from_slice(self.row(u));
        s
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.left).flat_map(move |u| self.neighbors_iter(u).map(move |v| (u, v)))
    }

    /// Exact density `e(G)/(|A||B|)`; zero when a side is empty.
    pub fn density(&self) -> Rational {
        density_of(self.edge_count(), self.left as u64 * self.right as u64)
    }

    /// `|N(v) ∩ N(w)|` for two vertices on the same side.
    pub fn codegree(&self, side: Side, v: usize, w: usize) -> Result<u64> {
        match side {
            Side::Left => {
                if v >= self.left || w >= self.left {
                    return invalid("left vertex out of range");
                }
                Ok(bits::and_count(self.row(v), self.row(w)))
            }
            Side::Right => {
                if v >= self.right || w >= self.right {
                    return invalid("right vertex out of range");
                }
                Ok((0..self.left).filter(|&u| self.has_edge(u, v) && self.has_edge(u, w)).count() as u64)
            }
        }
    }

    /// `e(S, T)` for a left subset `S` and right subset `T`.
    pub fn edges_between(&self, s: &[usize], t: &[usize]) -> Result<u64> {
        if let Some(&u) = s.iter().find(|&&u| u >= self.left) {
            return invalid(format!("left vertex {u} out of range"));
        }
        if let Some(&v) = t.iter().find(|&&v| v >= self.right) {
            return invalid(format!("right vertex {v} out of range"));
        }
        let mask = BitSet::from_indices(self.right, t.iter().copied());
        Ok(self.edges_into(s.iter().copied(), &mask))
    }

    /// `e(S, T)` with `T` given as a bitset over the right side.
    pub fn edges_into(&self, s: impl IntoIterator<Item = usize>, t: &BitSet) -> u64 {
        s.into_iter().map(|u| bits::and_count(self.row(u), t.words())).sum()
    }

    pub fn transpose(&self) -> BipartiteGraph {
        let mut t = BipartiteGraph::empty(self.right, self.left);
        for (u, v) in self.edges() {
            t.add_edge(v, u);
        }
        t
    }

    /// Every vertex becomes `m` copies and every edge a complete `m × m` block.
    /// Copy `j` of vertex `u` is `u·m + j`.
    pub fn blowup(&self, m: usize) -> Result<BipartiteGraph> {
        if m == 0 {
            return invalid("blowup factor must be at least 1");
        }
        self.blowup_sides(m, m)
    }

    /// Blowup with independent factors on the two sides.
    pub fn blowup_sides(&self, ml: usize, mr: usize) -> Result<BipartiteGraph> {
        if ml == 0 || mr == 0 {
            return invalid("blowup factor must be at least 1");
        }
        let mut g = BipartiteGraph::empty(self.left * ml, self.right * mr);
        let mut row = BitSet::new(self.right * mr);
        for u in 0..self.left {
            row.words_mut().iter_mut().for_each(|w| *w = 0);
            for v in self.neighbors_iter(u) {
                for j in 0..mr {
                    row.insert(v * mr + j);
                }
            }
            for i in 0..ml {
                g.row_mut(u * ml + i).copy_from_slice(row.words());
            }
        }
        Ok(g)
    }

    /// Induced subgraph on `S × T`, vertices renumbered in the given order.
    pub fn induced(&self, s: &[usize], t: &[usize]) -> BipartiteGraph {
        let mut g = BipartiteGraph::empty(s.len(), t.len());
        for (i, &u) in s.iter().enumerate() {
            for (j, &v) in t.iter().enumerate() {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn complement(&self) -> BipartiteGraph {
        let mut g = self.clone();
        let full = BitSet::full(self.right);
        for u in 0..self.left {
            for (w, f) in g.row_mut(u).iter_mut().zip(full.words()) {
                *w = !*w & f;
            }
        }
        g
    }

    fn same_shape(&self, other: &BipartiteGraph) -> Result<()> {
        if self.left != other.left || self.right != other.right {
            return invalid(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.left, self.right, other.left, other.right
            ));
        }
        Ok(())
    }

    pub fn union(&self, other: &BipartiteGraph) -> Result<BipartiteGraph> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &BipartiteGraph) -> Result<BipartiteGraph> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &BipartiteGraph) -> Result<BipartiteGraph> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_edge_disjoint(&self, other: &BipartiteGraph) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.rows.iter().zip(&other.rows).all(|(a, b)| a & b == 0))
    }

    pub fn is_subgraph_of(&self, other: &BipartiteGraph) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0))
    }

    /// Number of vertex pairs on which the two graphs differ.
    pub fn symmetric_difference_count(&self, other: &BipartiteGraph) -> Result<u64> {
        self.same_shape(other)?;
        Ok(self.rows.iter().zip(&other.rows).map(|(a, b)| (a ^ b).count_ones() as u64).sum())
    }

    fn zip_with(&self, other: &BipartiteGraph, f: impl Fn(u64, u64) -> u64) -> Result<BipartiteGraph> {
        self.same_shape(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(&a, &b)| f(a, b)).collect();
        Ok(BipartiteGraph { left: self.left, right: self.right, stride: self.stride, rows })
    }
}

/// `num / den` as an exact rational, with `0/0 = 0`.
pub fn density_of(num: u64, den: u64) -> Rational {
    if den == 0 {
        return Rational::from_integer(BigInt::from(0));
    }
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    #[test]
    fn trivial_densities() {
        assert_eq!(BipartiteGraph::complete(4, 4).density(), int(1));
        assert_eq!(BipartiteGraph::empty(4, 4).density(), int(0));
        assert_eq!(BipartiteGraph::empty(0, 4).density(), int(0));
    }

    #[test]
    fn blowup_single_edge() {
        let g = BipartiteGraph::from_edges(1, 1, [(0, 0)]).unwrap();
        assert_eq!(g.blowup(2).unwrap(), BipartiteGraph::complete(2, 2));
        assert!(g.blowup(0).is_err());
    }

    #[test]
    fn codegree_and_sides() {
        let g = BipartiteGraph::from_edges(3, 3, [(0, 0), (0, 1), (1, 1), (2, 2)]).unwrap();
        assert_eq!(g.codegree(Side::Left, 0, 0).unwrap(), 2);
        assert_eq!(g.codegree(Side::Left, 0, 1).unwrap(), 1);
        assert_eq!(g.codegree(Side::Left, 0, 2).unwrap(), 0);
        assert_eq!(g.codegree(Side::Right, 0, 1).unwrap(), 1);
        assert!(g.codegree(Side::Right, 0, 3).is_err());
        assert_eq!(g.density(), ratio(4, 9));
        assert_eq!(g.right_degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn edges_between_bounds() {
        let g = BipartiteGraph::complete(3, 70);
        assert_eq!(g.edges_between(&[], &[1, 2]).unwrap(), 0);
        assert_eq!(g.edges_between(&[0, 2], &[1, 69]).unwrap(), 4);
        assert!(g.edges_between(&[3], &[0]).is_err());
        assert!(g.edges_between(&[0], &[70]).is_err());
    }

    #[test]
    fn set_algebra() {
        let a = BipartiteGraph::from_edges(2, 2, [(0, 0), (1, 1)]).unwrap();
        let c = a.complement();
        assert!(a.is_edge_disjoint(&c).unwrap());
        assert_eq!(a.union(&c).unwrap(), BipartiteGraph::complete(2, 2));
        assert_eq!(a.symmetric_difference_count(&c).unwrap(), 4);
        assert_eq!(a.transpose().transpose(), a);
    }
}
