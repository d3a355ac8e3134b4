//! Affine charts adapted to a pencil of lines.
//!
//! A chart is a frame `(Q, P0, P1)` of `P²`. The point with chart
//! coordinates `(r, s)` is `P0 + s·P1 + r·Q`, so `s` indexes the line through
//! `Q` and `P0 + s·P1` and `r` moves along it. With `F(Q) ≠ 0` the
//! restriction `H(r, s) = F(P0 + s·P1 + r·Q)` has constant leading
//! coefficient `F(Q)` in `r`: no intersection point escapes to `r = ∞`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{det3, discriminant, solve3, BiPoly, Field, Poly, Ring, TriPoly, UniPoly, QI};
use crate::curve::CurveSpec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("frame points are linearly dependent")]
    DegenerateFrame,
    #[error("base point lies on the curve")]
    BaseOnCurve,
    #[error("discriminant vanishes identically (non-reduced curve)")]
    ZeroDiscriminant,
    #[error("line at s = ∞ is not transversal (discriminant degree {found}, expected {expected})")]
    DefectiveDiscriminant { expected: usize, found: usize },
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub q: [QI; 3],
    pub p0: [QI; 3],
    pub p1: [QI; 3],
    /// `H(r, s)`, outer variable `r`.
    pub h: BiPoly,
    /// `D(s) = disc_r H`.
    pub disc: Poly<QI>,
    h_num: NumBiPoly,
    /// `M = [P0 | P1 | Q]` as floats, for coordinate recovery.
    m: [[Complex64; 3]; 3],
}

fn substitution(q: &[QI; 3], p0: &[QI; 3], p1: &[QI; 3]) -> [[QI; 3]; 3] {
    core::array::from_fn(|i| [p0[i].clone(), q[i].clone(), p1[i].clone()])
}

/// `H_F(r, s) = F(P0 + s·P1 + r·Q)` for any homogeneous `F`.
pub fn chart_poly(f: &TriPoly, q: &[QI; 3], p0: &[QI; 3], p1: &[QI; 3]) -> BiPoly {
    f.substitute_affine(&substitution(q, p0, p1), |c| c.clone())
}

impl Chart {
    pub fn new(curve: &CurveSpec, q: [QI; 3], p0: [QI; 3], p1: [QI; 3]) -> Result<Self, ChartError> {
        let m_exact = [
            [p0[0].clone(), p1[0].clone(), q[0].clone()],
            [p0[1].clone(), p1[1].clone(), q[1].clone()],
            [p0[2].clone(), p1[2].clone(), q[2].clone()],
        ];
        let det = m_exact[0][0].mul(&m_exact[1][1].mul(&m_exact[2][2]).sub(&m_exact[1][2].mul(&m_exact[2][1])))
            .sub(&m_exact[0][1].mul(&m_exact[1][0].mul(&m_exact[2][2]).sub(&m_exact[1][2].mul(&m_exact[2][0]))))
            .add(&m_exact[0][2].mul(&m_exact[1][0].mul(&m_exact[2][1]).sub(&m_exact[1][1].mul(&m_exact[2][0]))));
        if det.is_zero() {
            return Err(ChartError::DegenerateFrame);
        }
        if curve.factors().iter().any(|f| f.eval(&q).is_zero()) {
            return Err(ChartError::BaseOnCurve);
        }
        let h = chart_poly(curve.polynomial(), &q, &p0, &p1);
        let d = curve.degree() as usize;
        let disc = if d >= 2 { discriminant(&h).expect("degree ≥ 2") } else { Poly::constant(QI::one()) };
        if disc.is_zero_poly() {
            return Err(ChartError::ZeroDiscriminant);
        }
        let expected = d * (d - 1);
        if disc.deg() != expected {
            return Err(ChartError::DefectiveDiscriminant { expected, found: disc.deg() });
        }
        let h_num = NumBiPoly::from_exact(&h);
        let m = core::array::from_fn(|i| core::array::from_fn(|j| m_exact[i][j].to_c64()));
        Ok(Chart { q, p0, p1, h, disc, h_num, m })
    }

    /// A chart from small random rational frame points; `None` when the
    /// draw fails the genericity checks.
    pub fn random<G: Rng>(curve: &CurveSpec, rng: &mut G) -> Result<Self, ChartError> {
        let mut pt = || -> [QI; 3] { core::array::from_fn(|_| QI::frac(rng.gen_range(-6..=6), rng.gen_range(1..=4))) };
        let (q, p0, p1) = (pt(), pt(), pt());
        Chart::new(curve, q, p0, p1)
    }

    pub fn degree(&self) -> usize {
        self.h.deg()
    }

    /// Point of `P²` with chart coordinates `(r, s)`.
    pub fn point(&self, r: Complex64, s: Complex64) -> [Complex64; 3] {
        core::array::from_fn(|i| self.m[i][0] + s * self.m[i][1] + r * self.m[i][2])
    }

    /// Chart coordinates `(r, s)` of a projective point, `None` on the line
    /// at infinity of the chart.
    pub fn coords(&self, x: &[Complex64; 3]) -> Option<(Complex64, Complex64)> {
        let c = solve3(self.m, *x).ok()?;
        if c[0].norm() <= 1e-14 * (c[1].norm() + c[2].norm()) {
            return None;
        }
        Some((c[2] / c[0], c[1] / c[0]))
    }

    /// Exact chart coordinates of an exact point.
    pub fn coords_exact(&self, x: &[QI; 3]) -> Option<(QI, QI)> {
        // Cramer's rule on [P0 | P1 | Q] c = x
        let cols = [&self.p0, &self.p1, &self.q];
        let det_with = |k: usize| -> QI {
            let col = |j: usize, i: usize| -> QI { if j == k { x[i].clone() } else { cols[j][i].clone() } };
            let m: [[QI; 3]; 3] = core::array::from_fn(|i| core::array::from_fn(|j| col(j, i)));
            m[0][0].mul(&m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1])))
                .sub(&m[0][1].mul(&m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]))))
                .add(&m[0][2].mul(&m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]))))
        };
        let c0 = det_with(0);
        if c0.is_zero() {
            return None;
        }
        let inv = c0.inv();
        Some((det_with(2).mul(&inv), det_with(1).mul(&inv)))
    }

    /// `H(·, s)` as a floating polynomial in `r`.
    pub fn restrict(&self, s: Complex64) -> UniPoly {
        self.h_num.restrict(s)
    }

    /// `H`, `∂H/∂r`, `∂H/∂s` at `(r, s)`.
    pub fn eval_with_partials(&self, r: Complex64, s: Complex64) -> (Complex64, Complex64, Complex64) {
        self.h_num.eval_with_partials(r, s)
    }

    /// `Σ |terms|` of `H` at `(r, s)`, the natural scale of its value.
    pub fn abs_eval(&self, r: Complex64, s: Complex64) -> f64 {
        self.h_num.abs_eval(r, s)
    }

    /// Dual coordinates `A + s·B` of the line with parameter `s`.
    pub fn line(&self, s: Complex64) -> [Complex64; 3] {
        let q: [Complex64; 3] = core::array::from_fn(|i| self.m[i][2]);
        let u = core::array::from_fn(|i| self.m[i][0] + s * self.m[i][1]);
        crate::algebra::cross(&q, &u)
    }

    pub fn base_point(&self) -> [Complex64; 3] {
        core::array::from_fn(|i| self.m[i][2])
    }

    pub fn frame_det(&self) -> Complex64 {
        det3(&self.m)
    }
}

/// Floating copy of a bivariate polynomial: coefficient of `r^k` is a
/// polynomial in `s`.
#[derive(Clone, Debug)]
pub struct NumBiPoly {
    coeffs: Vec<UniPoly>,
}

impl NumBiPoly {
    pub fn from_exact(h: &BiPoly) -> Self {
        NumBiPoly { coeffs: h.coeffs().iter().map(|c| UniPoly::new(c.coeffs().iter().map(QI::to_c64).collect())).collect() }
    }

    pub fn restrict(&self, s: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.eval(s)).collect())
    }

    /// Value and both first partials at `(r, s)`.
    pub fn eval_with_partials(&self, r: Complex64, s: Complex64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut h, mut hr, mut hs) = (zero, zero, zero);
        for c in self.coeffs.iter().rev() {
            let (v, dv) = c.eval_with_derivative(s);
            hr = hr * r + h;
            h = h * r + v;
            hs = hs * r + dv;
        }
        (h, hr, hs)
    }

    /// `Σ |c_ij| |r|^i |s|^j`, the scale for residuals of this polynomial.
    pub fn abs_eval(&self, r: Complex64, s: Complex64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * r.norm() + c.abs_eval(s);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic() -> CurveSpec {
        CurveSpec::new(alloc::vec![TriPoly::from_int_terms(2, &[([1, 0, 1], 1), ([0, 2, 0], -1)]).unwrap()]).unwrap()
    }

    fn v(a: i64, b: i64, c: i64) -> [QI; 3] {
        [QI::int(a), QI::int(b), QI::int(c)]
    }

    #[test]
    fn conic_chart_has_two_branch_points() {
        let ch = Chart::new(&conic(), v(0, 1, 0), v(1, 0, 0), v(1, 1, 3)).unwrap();
        assert_eq!(ch.disc.deg(), 2);
        assert_eq!(ch.degree(), 2);
    }

    #[test]
    fn rejects_base_on_curve() {
        assert_eq!(Chart::new(&conic(), v(1, 0, 0), v(0, 1, 0), v(1, 1, 3)).unwrap_err(), ChartError::BaseOnCurve);
    }

    #[test]
    fn coordinates_round_trip() {
        let ch = Chart::new(&conic(), v(0, 1, 0), v(1, 0, 0), v(1, 1, 3)).unwrap();
        let (r, s) = (Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5));
        let x = ch.point(r, s);
        let (r2, s2) = ch.coords(&x).unwrap();
        assert!((r - r2).norm() < 1e-12 && (s - s2).norm() < 1e-12);
        let (re, se) = ch.coords_exact(&v(2, 3, 5)).unwrap();
        let x = ch.point(re.to_c64(), se.to_c64());
        assert!(crate::curve::projective_distance(&x, &crate::algebra::to_c64_3(&v(2, 3, 5))) < 1e-12);
    }

    #[test]
    fn partials_match_finite_differences() {
        let ch = Chart::new(&conic(), v(0, 1, 0), v(1, 0, 0), v(1, 1, 3)).unwrap();
        let (r, s) = (Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5));
        let (h, hr, hs) = ch.eval_with_partials(r, s);
        let e = 1e-6;
        let fr = (ch.eval_with_partials(r + e, s).0 - ch.eval_with_partials(r - e, s).0) / (2.0 * e);
        let fs = (ch.eval_with_partials(r, s + e).0 - ch.eval_with_partials(r, s - e).0) / (2.0 * e);
        assert!((fr - hr).norm() < 1e-6 && (fs - hs).norm() < 1e-6);
        assert!((ch.restrict(s).eval(r) - h).norm() < 1e-12);
    }
}
