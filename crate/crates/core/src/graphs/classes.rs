use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Named, disjoint, contiguous vertex classes over a global index space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexClassSet {
    names: Vec<String>,
    offsets: Vec<usize>,
}

impl VertexClassSet {
    pub fn new(classes: Vec<(String, usize)>) -> Result<Self> {
        if classes.is_empty() {
            return invalid("a class set needs at least one class");
        }
        let mut names = Vec::with_capacity(classes.len());
        let mut offsets = vec![0];
        for (name, size) in classes {
            if size == 0 {
                return invalid(format!("class {name} is empty"));
            }
            names.push(name);
            offsets.push(offsets.last().unwrap() + size);
        }
        Ok(VertexClassSet { names, offsets })
    }

    /// Classes `V0, V1, ...` with the given sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        Self::new(sizes.iter().enumerate().map(|(i, &s)| (format!("V{i}"), s)).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn size(&self, class: usize) -> usize {
        self.offsets[class + 1] - self.offsets[class]
    }

    pub fn sizes(&self) -> Vec<usize> {
        (0..self.len()).map(|c| self.size(c)).collect()
    }

    pub fn name(&self, class: usize) -> &str {
        &self.names[class]
    }

    pub fn offset(&self, class: usize) -> usize {
        self.offsets[class]
    }

    pub fn range(&self, class: usize) -> std::ops::Range<usize> {
        self.offsets[class]..self.offsets[class + 1]
    }

    pub fn global(&self, class: usize, local: usize) -> usize {
        debug_assert!(local < self.size(class));
        self.offsets[class] + local
    }

    /// `(class, local index)` of a global vertex.
    pub fn locate(&self, v: usize) -> Option<(usize, usize)> {
        if v >= self.total() {
            return None;
        }
        let c = self.offsets.partition_point(|&o| o <= v) - 1;
        Some((c, v - self.offsets[c]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_and_ranges() {
        let c = VertexClassSet::from_sizes(&[3, 1, 4]).unwrap();
        assert_eq!(c.total(), 8);
        assert_eq!(c.locate(0), Some((0, 0)));
        assert_eq!(c.locate(3), Some((1, 0)));
        assert_eq!(c.locate(7), Some((2, 3)));
        assert_eq!(c.locate(8), None);
        assert_eq!(c.range(2), 4..8);
        assert!(VertexClassSet::from_sizes(&[2, 0]).is_err());
    }
}
