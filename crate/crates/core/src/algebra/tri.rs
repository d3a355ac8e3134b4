//! Homogeneous polynomials in the projective coordinates `(x1, x2, x3)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::poly::Poly;
use super::ring::{Ring, QI};
use super::AlgebraError;

/// Homogeneous trivariate polynomial with Gaussian-rational coefficients.
///
/// The zero polynomial is allowed (no terms) and keeps a nominal degree so
/// derivatives of linear forms stay well-typed.
#[derive(Clone, PartialEq, Debug)]
pub struct TriPoly {
    degree: u32,
    terms: BTreeMap<[u32; 3], QI>,
}

impl TriPoly {
    /// Builds a polynomial, merging duplicate exponents and dropping zeros.
    /// Every exponent triple must sum to `degree`.
    pub fn new(
        degree: u32,
        terms: impl IntoIterator<Item = ([u32; 3], QI)>,
    ) -> Result<Self, AlgebraError> {
        let mut map: BTreeMap<[u32; 3], QI> = BTreeMap::new();
        for (e, c) in terms {
            if e[0] + e[1] + e[2] != degree {
                return Err(AlgebraError::NotHomogeneous { expected: degree, found: e });
            }
            let slot = map.entry(e).or_insert_with(QI::zero);
            *slot = slot.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(TriPoly { degree, terms: map })
    }

    /// Convenience for tests and fixtures: integer coefficients.
    pub fn from_int_terms(degree: u32, terms: &[([u32; 3], i64)]) -> Result<Self, AlgebraError> {
        TriPoly::new(degree, terms.iter().map(|&(e, c)| (e, QI::int(c))))
    }

    /// The linear form `a·x1 + b·x2 + c·x3`.
    pub fn linear(coeffs: [QI; 3]) -> Self {
        let [a, b, c] = coeffs;
        TriPoly::new(1, [([1, 0, 0], a), ([0, 1, 0], b), ([0, 0, 1], c)]).expect("degree-1 terms")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &QI)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(QI::is_real)
    }

    pub fn mul(&self, o: &TriPoly) -> TriPoly {
        let mut map: BTreeMap<[u32; 3], QI> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let slot = map.entry(e).or_insert_with(QI::zero);
                *slot = slot.add(&ca.mul(cb));
            }
        }
        map.retain(|_, c| !c.is_zero());
        TriPoly { degree: self.degree + o.degree, terms: map }
    }

    /// Sum of two polynomials of the same degree (a zero operand adapts).
    pub fn add(&self, o: &TriPoly) -> TriPoly {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &TriPoly) -> TriPoly {
        self.combine(o, true)
    }

    fn combine(&self, o: &TriPoly, negate: bool) -> TriPoly {
        if o.is_zero() {
            return self.clone();
        }
        let degree = if self.is_zero() { o.degree } else { self.degree };
        debug_assert!(self.is_zero() || o.degree == self.degree);
        let mut map = self.terms.clone();
        for (e, c) in &o.terms {
            let slot = map.entry(*e).or_insert_with(QI::zero);
            *slot = if negate { slot.sub(c) } else { slot.add(c) };
        }
        map.retain(|_, c| !c.is_zero());
        TriPoly { degree, terms: map }
    }

    pub fn scale(&self, c: &QI) -> TriPoly {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    /// Partial derivative in `x_{var+1}`.
    pub fn partial(&self, var: usize) -> TriPoly {
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            map.insert(ne, c.mul(&QI::int(e[var] as i64)));
        }
        TriPoly { degree: self.degree.saturating_sub(1), terms: map }
    }

    pub fn gradient(&self) -> [TriPoly; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    /// Determinant of the matrix of second partials.
    pub fn hessian_det(&self) -> TriPoly {
        let h: Vec<Vec<TriPoly>> =
            (0..3).map(|i| (0..3).map(|j| self.partial(i).partial(j)).collect()).collect();
        let minor = |a: usize, b: usize, c: usize, d: usize| {
            h[1][a].mul(&h[2][b]).sub(&h[1][c].mul(&h[2][d]))
        };
        h[0][0]
            .mul(&minor(1, 2, 2, 1))
            .sub(&h[0][1].mul(&minor(0, 2, 2, 0)))
            .add(&h[0][2].mul(&minor(0, 1, 1, 0)))
    }

    pub fn eval(&self, x: &[QI; 3]) -> QI {
        let mut acc = QI::zero();
        for (e, c) in &self.terms {
            let m = x[0].pow(e[0]).mul(&x[1].pow(e[1])).mul(&x[2].pow(e[2]));
            acc = acc.add(&c.mul(&m));
        }
        acc
    }

    pub fn eval_c64(&self, x: &[Complex64; 3]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c.to_c64() * x[0].powu(e[0]) * x[1].powu(e[1]) * x[2].powu(e[2]);
        }
        acc
    }

    pub fn gradient_c64(&self, x: &[Complex64; 3]) -> [Complex64; 3] {
        let mut g = [Complex64::new(0.0, 0.0); 3];
        for (e, c) in &self.terms {
            let c = c.to_c64();
            for v in 0..3 {
                if e[v] == 0 {
                    continue;
                }
                let mut t = c * e[v] as f64;
                for w in 0..3 {
                    let p = if w == v { e[w] - 1 } else { e[w] };
                    t *= x[w].powu(p);
                }
                g[v] += t;
            }
        }
        g
    }

    /// `Σ |c|`, the natural scale for residuals at unit-norm points.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).sum()
    }

    /// `|F(x)| / (‖F‖₁ ‖x‖^d)`: scale-free vanishing measure at a point.
    pub fn relative_value(&self, x: &[Complex64; 3]) -> f64 {
        let n = norm3(x);
        let s = self.coeff_norm();
        if s == 0.0 || n == 0.0 {
            return 0.0;
        }
        let u = [x[0] / n, x[1] / n, x[2] / n];
        self.eval_c64(&u).norm() / s
    }

    /// Substitutes `x_i = a_i + b_i·X + c_i·Y`, returning a polynomial in `X`
    /// whose coefficients are polynomials in `Y`.
    ///
    /// `forms[i] = [a_i, b_i, c_i]`; `conv` maps the exact coefficients into
    /// the target ring (identity for `QI`, `to_c64` for floats).
    pub fn substitute_affine<R: Ring>(&self, forms: &[[R; 3]; 3], conv: impl Fn(&QI) -> R) -> Poly<Poly<R>> {
        let lin: Vec<Poly<Poly<R>>> = forms
            .iter()
            .map(|[a, b, c]| {
                Poly::new(alloc::vec![
                    Poly::new(alloc::vec![a.clone(), c.clone()]),
                    Poly::constant(b.clone()),
                ])
            })
            .collect();
        let d = self.degree as usize;
        let powers: Vec<Vec<Poly<Poly<R>>>> = lin
            .iter()
            .map(|l| {
                let mut v = Vec::with_capacity(d + 1);
                v.push(Poly::one());
                for k in 1..=d {
                    let next = v[k - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc: Poly<Poly<R>> = Poly::zero_poly();
        for (e, c) in &self.terms {
            let m = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize]);
            let cc = Poly::constant(conv(c));
            acc = acc.add(&m.scale(&cc));
        }
        acc
    }
}

pub fn norm3(x: &[Complex64; 3]) -> f64 {
    libm::sqrt(x.iter().map(|c| c.norm_sqr()).sum::<f64>())
}

/// Cross product of two projective triples (line through two points, or the
/// intersection point of two lines).
pub fn cross<R: Ring>(a: &[R; 3], b: &[R; 3]) -> [R; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

pub fn dot<R: Ring>(a: &[R; 3], b: &[R; 3]) -> R {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

pub fn to_c64_3(x: &[QI; 3]) -> [Complex64; 3] {
    [x[0].to_c64(), x[1].to_c64(), x[2].to_c64()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic() -> TriPoly {
        // x1 x3 - x2^2
        TriPoly::from_int_terms(2, &[([1, 0, 1], 1), ([0, 2, 0], -1)]).unwrap()
    }

    #[test]
    fn rejects_non_homogeneous() {
        let r = TriPoly::from_int_terms(2, &[([1, 0, 1], 1), ([0, 1, 0], -1)]);
        assert!(matches!(r, Err(AlgebraError::NotHomogeneous { .. })));
    }

    #[test]
    fn partials_and_euler_identity() {
        let f = TriPoly::from_int_terms(3, &[([0, 2, 1], 1), ([3, 0, 0], -1), ([2, 0, 1], -1)]).unwrap();
        // Euler: Σ x_i ∂_i F = d·F
        let x = [QI::int(2), QI::frac(1, 3), QI::int(-5)];
        let g = f.gradient();
        let lhs = x[0].mul(&g[0].eval(&x)).add(&x[1].mul(&g[1].eval(&x))).add(&x[2].mul(&g[2].eval(&x)));
        assert_eq!(lhs, f.eval(&x).mul(&QI::int(3)));
    }

    #[test]
    fn hessian_of_conic_is_constant() {
        // Hessian matrix [[0,0,1],[0,-2,0],[1,0,0]] has determinant 2.
        let h = conic().hessian_det();
        assert_eq!(h.degree(), 0);
        assert_eq!(h.eval(&[QI::int(1), QI::int(1), QI::int(1)]), QI::int(2));
    }

    #[test]
    fn hessian_vanishes_at_flex_of_cubic() {
        // x2 x3^2 - x1^3: affine y = x^3, flex at the origin (0:0:1)
        let f = TriPoly::from_int_terms(3, &[([0, 1, 2], 1), ([3, 0, 0], -1)]).unwrap();
        let h = f.hessian_det();
        assert!(h.eval(&[QI::int(0), QI::int(0), QI::int(1)]).is_zero());
        assert!(!h.eval(&[QI::int(1), QI::int(1), QI::int(1)]).is_zero());
    }

    #[test]
    fn affine_substitution_matches_pointwise_eval() {
        let f = conic();
        let forms = [
            [QI::int(1), QI::int(2), QI::int(0)],
            [QI::int(0), QI::int(1), QI::int(1)],
            [QI::int(3), QI::int(0), QI::int(-1)],
        ];
        let g = f.substitute_affine(&forms, |c| c.clone());
        for (xv, yv) in [(0, 0), (1, 2), (-3, 5)] {
            let (xq, yq) = (QI::int(xv), QI::int(yv));
            let pt = [
                forms[0][0].add(&forms[0][1].mul(&xq)).add(&forms[0][2].mul(&yq)),
                forms[1][0].add(&forms[1][1].mul(&xq)).add(&forms[1][2].mul(&yq)),
                forms[2][0].add(&forms[2][1].mul(&xq)).add(&forms[2][2].mul(&yq)),
            ];
            let via = g.eval(&Poly::constant(xq.clone())).eval(&yq);
            assert_eq!(via, f.eval(&pt));
        }
    }

    #[test]
    fn cross_gives_incident_line() {
        let a = [QI::int(1), QI::int(2), QI::int(3)];
        let b = [QI::int(-1), QI::int(0), QI::int(4)];
        let l = cross(&a, &b);
        assert!(dot(&l, &a).is_zero());
        assert!(dot(&l, &b).is_zero());
    }
}
