//! Partitions of `{0, …, d-1}` with refinement order and join.
//!
//! Blocks are kept sorted and ordered by their minimum, so two partitions
//! are equal exactly when they are structurally equal.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::permgroup::{Perm, PermGroup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("blocks do not partition 1..={0}")]
    NotAPartition(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Partition {
    d: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// From 0-based blocks; validates disjointness and coverage.
    pub fn new(d: usize, blocks: Vec<Vec<usize>>) -> Result<Self, PartitionError> {
        let mut seen = vec![false; d];
        for b in &blocks {
            if b.is_empty() {
                return Err(PartitionError::NotAPartition(d));
            }
            for &i in b {
                if i >= d || seen[i] {
                    return Err(PartitionError::NotAPartition(d));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PartitionError::NotAPartition(d));
        }
        Ok(Partition::canonical(d, blocks))
    }

    /// From 1-based blocks, the serialized form.
    pub fn from_blocks_1based(d: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut zero = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut z = Vec::with_capacity(b.len());
            for &i in b {
                z.push(i.checked_sub(1).ok_or(PartitionError::NotAPartition(d))?);
            }
            zero.push(z);
        }
        Partition::new(d, zero)
    }

    fn canonical(d: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b[0]);
        Partition { d, blocks }
    }

    /// Points with equal labels share a block.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match blocks.iter_mut().find(|(k, _)| *k == l) {
                Some((_, b)) => b.push(i),
                None => blocks.push((l, vec![i])),
            }
        }
        Partition::canonical(labels.len(), blocks.into_iter().map(|(_, b)| b).collect())
    }

    pub fn discrete(d: usize) -> Self {
        Partition { d, blocks: (0..d).map(|i| vec![i]).collect() }
    }

    pub fn whole(d: usize) -> Self {
        Partition { d, blocks: if d == 0 { vec![] } else { vec![(0..d).collect()] } }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn blocks_1based(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()
    }

    pub fn block_index(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.binary_search(&i).is_ok()).expect("point in range")
    }

    pub fn block_of(&self, i: usize) -> &[usize] {
        &self.blocks[self.block_index(i)]
    }

    fn check_dim(&self, o: &Partition) -> Result<(), PartitionError> {
        if self.d != o.d {
            return Err(PartitionError::DimensionMismatch(self.d, o.d));
        }
        Ok(())
    }

    /// `self ≼ other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool, PartitionError> {
        self.check_dim(other)?;
        Ok(self.blocks.iter().all(|b| {
            let k = other.block_index(b[0]);
            b.iter().all(|&i| other.block_index(i) == k)
        }))
    }

    /// Finest common coarsening: connected components of the co-block graph.
    pub fn join(&self, other: &Partition) -> Result<Partition, PartitionError> {
        self.check_dim(other)?;
        let mut parent: Vec<usize> = (0..self.d).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for b in self.blocks.iter().chain(&other.blocks) {
            for w in b.windows(2) {
                let (a, c) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != c {
                    parent[a.max(c)] = a.min(c);
                }
            }
        }
        let labels: Vec<usize> = (0..self.d).map(|i| find(&mut parent, i)).collect();
        Ok(Partition::from_labels(&labels))
    }

    /// `σ(I) = I` for every block.
    pub fn invariant_under(&self, sigma: &Perm) -> bool {
        sigma.degree() == self.d
            && self.blocks.iter().enumerate().all(|(k, b)| b.iter().all(|&i| self.block_index(sigma.apply(i)) == k))
    }

    /// `Π |I|!`, the order of the block-wise symmetric group.
    pub fn sym_order(&self) -> BigUint {
        self.blocks
            .iter()
            .flat_map(|b| 2..=b.len())
            .fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
    }

    /// Transpositions inside blocks, as 0-based pairs `i < j`.
    pub fn internal_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for (x, &i) in b.iter().enumerate() {
                for &j in &b[x + 1..] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The same partition restricted to the given points, relabeled
    /// `0..points.len()` in the given order.
    pub fn restrict(&self, points: &[usize]) -> Partition {
        let labels: Vec<usize> = points.iter().map(|&i| self.block_index(i)).collect();
        Partition::from_labels(&labels)
    }
}

/// Thickest partition `J_G` with `Σ_{J_G} ⊆ G`.
///
/// Components of the graph with an edge `{i, j}` whenever `(i j) ∈ G`. If
/// `(i j)` and `(j k)` lie in `G`, so does their conjugate `(i k)`, so every
/// component carries all of its internal transpositions.
pub fn thickest_sym_partition(g: &PermGroup) -> Partition {
    let d = g.degree();
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..d {
        for j in (i + 1)..d {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            if g.contains(&Perm::transposition(d, i, j)) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let labels: Vec<usize> = (0..d).map(|i| find(&mut parent, i)).collect();
    Partition::from_labels(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: usize, blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks_1based(d, &blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn refinement_examples() {
        let disc = p(3, &[&[1], &[2], &[3]]);
        let j = p(3, &[&[1, 2], &[3]]);
        assert!(disc.refines(&j).unwrap());
        assert!(!j.refines(&disc).unwrap());
        assert!(j.refines(&j).unwrap());
        assert!(j.refines(&Partition::discrete(4)).is_err());
    }

    #[test]
    fn join_examples() {
        let a = p(4, &[&[1, 2], &[3], &[4]]);
        let b = p(4, &[&[1], &[2, 3], &[4]]);
        assert_eq!(a.join(&b).unwrap(), p(4, &[&[1, 2, 3], &[4]]));
        assert_eq!(a.join(&a).unwrap(), a);
        assert_eq!(p(2, &[&[1], &[2]]).join(&p(2, &[&[1, 2]])).unwrap(), p(2, &[&[1, 2]]));
    }

    #[test]
    fn invariance_examples() {
        let j = p(3, &[&[1, 2], &[3]]);
        assert!(j.invariant_under(&Perm::from_cycles(3, &[&[1, 2]]).unwrap()));
        assert!(!j.invariant_under(&Perm::from_cycles(3, &[&[2, 3]]).unwrap()));
        assert!(j.invariant_under(&Perm::identity(3)));
    }

    #[test]
    fn thickest_examples() {
        let s3 = PermGroup::generate(3, &[Perm::from_cycles(3, &[&[1, 2]]).unwrap(), Perm::from_cycles(3, &[&[2, 3]]).unwrap()]).unwrap();
        assert_eq!(thickest_sym_partition(&s3), Partition::whole(3));
        let c3 = PermGroup::generate(3, &[Perm::from_cycles(3, &[&[1, 2, 3]]).unwrap()]).unwrap();
        assert_eq!(thickest_sym_partition(&c3), Partition::discrete(3));
        let t = PermGroup::generate(4, &[Perm::from_cycles(4, &[&[1, 2]]).unwrap()]).unwrap();
        assert_eq!(thickest_sym_partition(&t), p(4, &[&[1, 2], &[3], &[4]]));
    }

    #[test]
    fn rejects_overlapping_blocks() {
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
    }
}
