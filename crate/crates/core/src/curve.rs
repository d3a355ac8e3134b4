//! Reduced plane curves given by their components.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{discriminant, norm3, Poly, Ring, TriPoly, QI};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("curve has no components")]
    Empty,
    #[error("component {0} is the zero polynomial")]
    ZeroFactor(usize),
    #[error("component {0} has degree 0")]
    ConstantFactor(usize),
    #[error("non-reduced: the curve has a repeated component")]
    NonReduced,
}

/// A reduced curve `C = C_1 ∪ … ∪ C_k`, each component given by a
/// homogeneous polynomial with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    factors: Vec<TriPoly>,
    product: TriPoly,
}

impl CurveSpec {
    /// Validates the factors and checks reducedness of their product by
    /// restricting it to a few random lines: a repeated component makes
    /// every restriction have a repeated root.
    pub fn new(factors: Vec<TriPoly>) -> Result<Self, CurveError> {
        if factors.is_empty() {
            return Err(CurveError::Empty);
        }
        for (i, f) in factors.iter().enumerate() {
            if f.is_zero() {
                return Err(CurveError::ZeroFactor(i));
            }
            if f.degree() == 0 {
                return Err(CurveError::ConstantFactor(i));
            }
        }
        let product = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.mul(f));
        let curve = CurveSpec { factors, product };
        if !curve.is_reduced() {
            return Err(CurveError::NonReduced);
        }
        Ok(curve)
    }

    fn is_reduced(&self) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let rand_pt = |rng: &mut ChaCha8Rng| -> [QI; 3] { core::array::from_fn(|_| QI::frac(rng.gen_range(-29..=29), rng.gen_range(1..=7))) };
        for _ in 0..4 {
            let a = rand_pt(&mut rng);
            let b = rand_pt(&mut rng);
            let p = self.restrict_to_line(&a, &b);
            if p.deg() < self.degree() as usize {
                continue;
            }
            if !discriminant(&p).map(|v| v.is_zero()).unwrap_or(true) {
                return true;
            }
        }
        false
    }

    /// `F(a + t·b)` as an exact polynomial in `t`.
    pub fn restrict_to_line(&self, a: &[QI; 3], b: &[QI; 3]) -> Poly<QI> {
        let forms: [[QI; 3]; 3] = core::array::from_fn(|i| [a[i].clone(), b[i].clone(), QI::zero()]);
        let h = self.product.substitute_affine(&forms, |c| c.clone());
        Poly::new(h.coeffs().iter().map(|c| c.coeff(0)).collect())
    }

    pub fn factors(&self) -> &[TriPoly] {
        &self.factors
    }

    /// The defining polynomial `F = Π F_i`.
    pub fn polynomial(&self) -> &TriPoly {
        &self.product
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.factors.iter().map(TriPoly::degree).collect()
    }

    pub fn degree(&self) -> u32 {
        self.product.degree()
    }

    pub fn num_components(&self) -> usize {
        self.factors.len()
    }

    pub fn is_line(&self, i: usize) -> bool {
        self.factors[i].degree() == 1
    }

    /// Scale-free `|F_i(x)|` for each component.
    pub fn component_values(&self, x: &[Complex64; 3]) -> Vec<f64> {
        self.factors.iter().map(|f| f.relative_value(x)).collect()
    }

    /// Component on which `x` lies: the smallest scale-free value, provided
    /// the runner-up exceeds it by `ratio`.
    pub fn component_of(&self, x: &[Complex64; 3], ratio: f64) -> Option<usize> {
        let v = self.component_values(x);
        let (best, &bv) = v.iter().enumerate().min_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
        let runner = v.iter().enumerate().filter(|&(i, _)| i != best).map(|(_, &x)| x).fold(f64::INFINITY, f64::min);
        (runner >= ratio * bv).then_some(best)
    }

    /// `|F(x)|` relative to coefficient size at the normalized point.
    pub fn residual(&self, x: &[Complex64; 3]) -> f64 {
        self.product.relative_value(x)
    }

    /// Scale-free size of the gradient at a unit-normalized point.
    pub fn gradient_residual(&self, x: &[Complex64; 3]) -> f64 {
        let n = norm3(x);
        let u = [x[0] / n, x[1] / n, x[2] / n];
        let g = self.product.gradient_c64(&u);
        norm3(&g) / self.product.coeff_norm()
    }
}

/// Normalizes a projective point: unit norm, largest coordinate real positive.
pub fn normalize_point(x: &[Complex64; 3]) -> [Complex64; 3] {
    let k = (0..3).max_by(|&a, &b| x[a].norm().partial_cmp(&x[b].norm()).unwrap()).unwrap();
    let phase = x[k] / x[k].norm();
    let n = norm3(x);
    core::array::from_fn(|i| x[i] / phase / n)
}

/// Distance between projective points after normalization.
pub fn projective_distance(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    let (a, b) = (normalize_point(a), normalize_point(b));
    norm3(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_square() {
        let x1 = TriPoly::from_int_terms(1, &[([1, 0, 0], 1)]).unwrap();
        assert_eq!(CurveSpec::new(alloc::vec![x1.mul(&x1)]), Err(CurveError::NonReduced));
        assert_eq!(CurveSpec::new(alloc::vec![x1.clone(), x1.scale(&QI::int(3))]), Err(CurveError::NonReduced));
    }

    #[test]
    fn accepts_two_conics() {
        let a = TriPoly::from_int_terms(2, &[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -2)]).unwrap();
        let b = TriPoly::from_int_terms(2, &[([2, 0, 0], 1), ([0, 2, 0], -4), ([0, 0, 2], 3)]).unwrap();
        let c = CurveSpec::new(alloc::vec![a, b]).unwrap();
        assert_eq!(c.degree(), 4);
        assert_eq!(c.num_components(), 2);
        let p = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(c.residual(&p) < 1e-15);
        assert!(c.gradient_residual(&p) < 1e-15);
    }
}
