use crate::error::{Error, Result};

/// Disjoint blocks covering `0..size`, in canonical order: each block sorted,
/// blocks ordered by their smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>, size: usize) -> Result<Self> {
        let mut block_of = vec![usize::MAX; size];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                if x >= size {
                    return Err(Error::InvalidPartition(format!("index {x} out of range")));
                }
                if block_of[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("index {x} in two blocks")));
                }
                block_of[x] = i;
            }
        }
        if let Some(x) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("index {x} not covered")));
        }
        Ok(Partition { blocks, block_of })
    }

    pub fn singletons(size: usize) -> Self {
        Partition { blocks: (0..size).map(|x| vec![x]).collect(), block_of: (0..size).collect() }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn size(&self) -> usize {
        self.block_of.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let p = Partition::new(vec![vec![5, 4], vec![0], vec![2, 1], vec![3]], 6).unwrap();
        assert_eq!(p.blocks(), &[vec![0], vec![1, 2], vec![3], vec![4, 5]]);
        assert_eq!(p.block_of(5), 3);
    }

    #[test]
    fn rejects_overlap_and_gaps() {
        assert!(Partition::new(vec![vec![0, 1], vec![1]], 2).is_err());
        assert!(Partition::new(vec![vec![0]], 2).is_err());
        assert!(Partition::new(vec![vec![0], vec![]], 1).is_err());
    }
}
