use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::perm::Perm;
use super::PermError;
use crate::partitions::Partition;

/// One level of a stabilizer chain: a base point, the strong generators
/// fixing all earlier base points, and a transversal of the basic orbit.
#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `transversal[b]` maps `base` to `b`, for `b` in the orbit.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: usize, d: usize) -> Self {
        let mut transversal = vec![None; d];
        transversal[base] = Some(Perm::identity(d));
        Level { base, gens: Vec::new(), transversal }
    }

    fn rebuild_orbit(&mut self) {
        let d = self.transversal.len();
        self.transversal = vec![None; d];
        self.transversal[self.base] = Some(Perm::identity(d));
        let mut queue = vec![self.base];
        while let Some(p) = queue.pop() {
            let u = self.transversal[p].clone().expect("orbit point");
            for g in &self.gens {
                let q = g.apply(p);
                if self.transversal[q].is_none() {
                    self.transversal[q] = Some(g.compose(&u));
                    queue.push(q);
                }
            }
        }
    }

    fn orbit(&self) -> impl Iterator<Item = usize> + '_ {
        self.transversal.iter().enumerate().filter_map(|(i, u)| u.as_ref().map(|_| i))
    }
}

/// Permutation group given by generators, with a stabilizer chain built by
/// the deterministic Schreier–Sims algorithm at construction.
#[derive(Clone, Debug)]
pub struct PermGroup {
    d: usize,
    generators: Vec<Perm>,
    chain: Vec<Level>,
}

impl PermGroup {
    pub fn generate(d: usize, gens: &[Perm]) -> Result<Self, PermError> {
        for g in gens {
            if g.degree() != d {
                return Err(PermError::DegreeMismatch(d, g.degree()));
            }
        }
        let mut group = PermGroup { d, generators: gens.to_vec(), chain: Vec::new() };
        for g in gens {
            if !g.is_identity() {
                group.extend_at(0, g.clone());
            }
        }
        group.complete();
        Ok(group)
    }

    pub fn trivial(d: usize) -> Self {
        PermGroup { d, generators: Vec::new(), chain: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Sifts `g` through the chain from `start`; returns the residue and
    /// the level where sifting stopped (`chain.len()` if it went through).
    fn sift(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (i, level) in self.chain.iter().enumerate().skip(start) {
            let b = g.apply(level.base);
            match &level.transversal[b] {
                Some(u) => g = u.inverse().compose(&g),
                None => return (g, i),
            }
        }
        (g, self.chain.len())
    }

    /// Adds a non-trivial `h` as strong generator at levels `from..=to`,
    /// creating a new level when `to` is past the end.
    fn add_strong(&mut self, h: Perm, from: usize, to: usize) {
        if to == self.chain.len() {
            let base = (0..self.d).find(|&i| h.apply(i) != i).expect("non-identity");
            self.chain.push(Level::new(base, self.d));
        }
        for level in &mut self.chain[from..=to] {
            level.gens.push(h.clone());
            level.rebuild_orbit();
        }
    }

    fn extend_at(&mut self, level: usize, g: Perm) {
        let (h, j) = self.sift(g, level);
        if !h.is_identity() {
            self.add_strong(h, level, j);
        }
    }

    /// Runs Schreier generators through the chain from the bottom level up
    /// until every level's stabilizer is generated by the next one.
    fn complete(&mut self) {
        let mut i = self.chain.len();
        while i > 0 {
            let lvl = i - 1;
            match self.failing_schreier_generator(lvl) {
                Some((h, j)) => {
                    self.add_strong(h, lvl + 1, j);
                    i = self.chain.len().min(j + 1);
                }
                None => i -= 1,
            }
        }
    }

    fn failing_schreier_generator(&self, lvl: usize) -> Option<(Perm, usize)> {
        let level = &self.chain[lvl];
        for beta in level.orbit() {
            let u_beta = level.transversal[beta].as_ref().unwrap();
            for s in &level.gens {
                let gamma = s.apply(beta);
                let u_gamma = level.transversal[gamma].as_ref().unwrap();
                let schreier = u_gamma.inverse().compose(&s.compose(u_beta));
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = self.sift(schreier, lvl + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    pub fn order(&self) -> BigUint {
        self.chain
            .iter()
            .map(|l| BigUint::from(l.orbit().count()))
            .fold(BigUint::one(), |a, b| a * b)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.d && self.sift(g.clone(), 0).0.is_identity()
    }

    pub fn orbits(&self) -> Partition {
        let mut labels: Vec<usize> = (0..self.d).collect();
        fn find(l: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while l[i] != i {
                l[i] = l[l[i]];
                i = l[i];
            }
            i
        }
        for g in &self.generators {
            for i in 0..self.d {
                let (a, b) = (find(&mut labels, i), find(&mut labels, g.apply(i)));
                if a != b {
                    labels[a.max(b)] = a.min(b);
                }
            }
        }
        let roots: Vec<usize> = (0..self.d).map(|i| find(&mut labels, i)).collect();
        Partition::from_labels(&roots)
    }

    /// True iff the whole set lies in a single orbit.
    pub fn is_transitive_on(&self, set: &[usize]) -> bool {
        let orbits = self.orbits();
        match set.first() {
            None => true,
            Some(&first) => {
                let b = orbits.block_index(first);
                set.iter().all(|&i| orbits.block_index(i) == b)
            }
        }
    }

    /// Base of the stabilizer chain.
    pub fn base(&self) -> Vec<usize> {
        self.chain.iter().map(|l| l.base).collect()
    }
}
