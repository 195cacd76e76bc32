use crate::error::{invalid, Error, Result};

/// A partition of `0..n` into non-empty cells.
///
/// Cells are stored sorted and ordered by their smallest vertex, so two
/// partitions with the same cells compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexPartition {
    n: usize,
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl VertexPartition {
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; n];
        let mut cells = cells;
        for c in cells.iter_mut() {
            if c.is_empty() {
                return invalid("partition has an empty cell");
            }
            c.sort_unstable();
        }
        cells.sort_by_key(|c| c[0]);
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                if v >= n {
                    return invalid(format!("vertex {v} outside ground set of size {n}"));
                }
                if cell_of[v] != usize::MAX {
                    return invalid(format!("vertex {v} lies in two cells"));
                }
                cell_of[v] = i;
            }
        }
        if let Some(v) = cell_of.iter().position(|&c| c == usize::MAX) {
            return invalid(format!("vertex {v} is not covered"));
        }
        Ok(VertexPartition { n, cells, cell_of })
    }

    /// Cells given by a label per vertex.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (v, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(v);
        }
        Self::new(labels.len(), groups.into_values().collect())
    }

    /// `count` consecutive index blocks of equal size.
    pub fn blocks(n: usize, count: usize) -> Result<Self> {
        if count == 0 || !n.is_multiple_of(count) {
            return invalid(format!("{n} vertices do not split into {count} equal blocks"));
        }
        let b = n / count;
        Self::new(n, (0..count).map(|i| (i * b..(i + 1) * b).collect()).collect())
    }

    pub fn trivial(n: usize) -> Result<Self> {
        Self::new(n, vec![(0..n).collect()])
    }

    pub fn singletons(n: usize) -> Self {
        Self::new(n, (0..n).map(|v| vec![v]).collect()).expect("singletons are a partition")
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.cell_of
    }

    pub fn is_equitable(&self) -> bool {
        self.cells.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Exact refinement: every cell of `self` lies inside one cell of `other`.
    pub fn refines(&self, other: &VertexPartition) -> bool {
        self.n == other.n
            && self.cells.iter().all(|c| {
                let h = other.cell_of(c[0]);
                c.iter().all(|&v| other.cell_of(v) == h)
            })
    }

    /// Cells contained in `set` (which must be a union of cells), renumbered
    /// by position within the sorted `set`.
    pub fn restrict(&self, set: &[usize]) -> Result<VertexPartition> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let pos: std::collections::HashMap<usize, usize> = sorted.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut cells = Vec::new();
        for c in &self.cells {
            let inside = c.iter().filter(|v| pos.contains_key(v)).count();
            if inside == 0 {
                continue;
            }
            if inside != c.len() {
                return invalid("restriction set cuts a cell");
            }
            cells.push(c.iter().map(|v| pos[v]).collect());
        }
        VertexPartition::new(sorted.len(), cells)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("partition v1\nn {}\ncells {}\n", self.n, self.cells.len());
        for c in &self.cells {
            let line: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let perr = |m: &str| Error::Parse(format!("partition: {m}"));
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("partition v1") {
            return Err(perr("missing header"));
        }
        let n: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("n "))
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| perr("missing n line"))?;
        let count: usize = lines
            .next()
            .and_then(|l| l.strip_prefix("cells "))
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| perr("missing cells line"))?;
        let mut cells = Vec::with_capacity(count);
        for line in lines.by_ref().take(count) {
            let c: Vec<usize> = line
                .split_whitespace()
                .map(|x| x.parse().map_err(|_| perr("bad vertex")))
                .collect::<Result<_>>()?;
            cells.push(c);
        }
        if cells.len() != count {
            return Err(perr("fewer cells than declared"));
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(perr("trailing content"));
        }
        let p = VertexPartition::new(n, cells)?;
        if p.to_text() != text && p.to_text() != format!("{text}\n") {
            return Err(perr("not in canonical form"));
        }
        Ok(p)
    }
}
