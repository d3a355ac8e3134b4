use alloc::vec::Vec;
use core::fmt;

use super::PermError;

/// Largest supported degree; images are stored as bytes.
pub const MAX_DEGREE: usize = 64;

/// A permutation of `{0, …, d-1}`. Displayed and serialized 1-based.
///
/// Composition is right-to-left: `a.compose(&b)` is `i ↦ a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(d: usize) -> Self {
        assert!(d <= MAX_DEGREE, "degree {d} exceeds {MAX_DEGREE}");
        Perm { images: (0..d as u8).collect() }
    }

    /// From 0-based images; checks bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let d = images.len();
        if d > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(d));
        }
        let mut seen = [false; MAX_DEGREE];
        for &i in images {
            if i >= d || seen[i] {
                return Err(PermError::NotBijection);
            }
            seen[i] = true;
        }
        Ok(Perm { images: images.iter().map(|&i| i as u8).collect() })
    }

    /// From 1-based images, the serialized form.
    pub fn from_images_1based(images: &[usize]) -> Result<Self, PermError> {
        let zero: Option<Vec<usize>> = images.iter().map(|&i| i.checked_sub(1)).collect();
        Perm::from_images(&zero.ok_or(PermError::NotBijection)?)
    }

    /// Product of the given 1-based cycles on `d` points.
    pub fn from_cycles(d: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut img: Vec<usize> = (0..d).collect();
        let mut touched = alloc::vec![false; d];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                let b = c[(k + 1) % c.len()];
                if a == 0 || a > d || b == 0 || b > d || touched[a - 1] {
                    return Err(PermError::NotBijection);
                }
                touched[a - 1] = true;
                img[a - 1] = b - 1;
            }
        }
        Perm::from_images(&img)
    }

    /// The transposition of 0-based points `i` and `j`.
    pub fn transposition(d: usize, i: usize, j: usize) -> Self {
        let mut p = Perm::identity(d);
        p.images.swap(i, j);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    pub fn images_1based(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    /// `self ∘ other`; panics on degree mismatch (use [`Perm::try_compose`] otherwise).
    pub fn compose(&self, other: &Perm) -> Perm {
        self.try_compose(other).expect("degree mismatch")
    }

    pub fn try_compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Perm { images: other.images.iter().map(|&i| self.images[i as usize]).collect() })
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = alloc::vec![0u8; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// Moved points, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.apply(i) != i).collect()
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point,
    /// ordered by that point. 0-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = alloc::vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut c = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                c.push(i);
                i = self.apply(i);
            }
            out.push(c);
        }
        out
    }

    /// Sorted lengths of the non-trivial cycles.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn is_transposition(&self) -> bool {
        self.cycle_type() == [2]
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Perm {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..n.unsigned_abs() {
            acc = base.compose(&acc);
        }
        acc
    }
}

/// Cycle notation, 1-based; `()` for the identity.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, i) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", i + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle factorization together with its length `n_σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleFactorization {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleFactorization {
    pub fn of(p: &Perm) -> Self {
        CycleFactorization { cycles: p.cycles() }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}
