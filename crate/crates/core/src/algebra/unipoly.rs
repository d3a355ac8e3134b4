use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Dense polynomial with complex double coefficients, index = monomial degree.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    /// Trailing exact zeros are dropped; tiny but non-zero leading
    /// coefficients are kept (the root finder decides what to do with them).
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_real(c: &[f64]) -> Self {
        UniPoly::new(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Monic polynomial `Π (z - rᵢ)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        UniPoly::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// `Σ |cᵢ| |z|^i`, the scale against which backward error is measured.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, f: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&c| c * f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let p = UniPoly::from_real(&[1.0, 0.0, 1.0]);
        assert!(p.eval(Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(p.eval(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        let q = UniPoly::from_real(&[-2.0, 3.0]);
        assert_eq!(q.eval(Complex64::new(1.0, 0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn derivative_matches_central_difference() {
        let p = UniPoly::new(vec![
            Complex64::new(0.3, -1.0),
            Complex64::new(2.0, 0.5),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.7),
            Complex64::new(1.5, 0.2),
        ]);
        let dp = p.derivative();
        for k in 0..16 {
            let z = Complex64::from_polar(1.0, 0.37 + k as f64 * 0.41);
            let h = 1e-5;
            let fd = (p.eval(z + h) - p.eval(z - h)) / (2.0 * h);
            let exact = dp.eval(z);
            assert!((fd - exact).norm() / exact.norm() < 1e-6);
            assert!((p.eval_with_derivative(z).1 - exact).norm() < 1e-12);
        }
    }
}
