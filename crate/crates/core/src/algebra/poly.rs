//! Dense univariate polynomials over an exact ring.
//!
//! `Poly<QI>` is the workhorse for discriminants in the pencil parameter, and
//! `Poly<Poly<QI>>` represents bivariate polynomials (outer variable first),
//! so resultants over `Q(i)[s]` come for free from the generic code.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::ring::{Field, Ring, QI};
use super::AlgebraError;

/// Dense polynomial, coefficient of `x^k` at index `k`, no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
}

/// Exact bivariate polynomial: outer variable `r`, coefficients in `Q(i)[s]`.
pub type BiPoly = Poly<Poly<QI>>;

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({:?})", c)?,
                1 => write!(f, "({:?})x", c)?,
                _ => write!(f, "({:?})x^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero_poly() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// `c · x^k`
    pub fn monomial(c: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::monomial(R::one(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; only for places where the
    /// zero case is excluded by construction.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| R::from_i64(k as i64).mul(c))
                .collect(),
        )
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Composition `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Poly::zero_poly();
        for c in self.coeffs.iter().rev() {
            acc = Ring::add(&Ring::mul(&acc, other), &Poly::constant(c.clone()));
        }
        acc
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo_rem by zero polynomial");
        let Some(da) = self.degree() else {
            return Poly::zero_poly();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut steps = da - db + 1;
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let lr = r[top].clone();
            let shift = top - db;
            for c in r.iter_mut() {
                *c = c.mul(&lb);
            }
            for (k, bc) in b.coeffs.iter().enumerate() {
                r[shift + k] = r[shift + k].sub(&lr.mul(bc));
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps -= 1;
        }
        let fix = lb.pow(steps as u32);
        let out = Poly::new(r);
        if steps > 0 {
            out.scale(&fix)
        } else {
            out
        }
    }

    /// Exact quotient; panics if `b` does not divide `self`.
    pub fn div_exact_poly(&self, b: &Self) -> Self {
        let (q, r) = self.div_rem_exact_ring(b);
        assert!(r.is_zero_poly(), "inexact polynomial division");
        q
    }

    /// Long division, dividing leading coefficients with `Ring::div_exact`.
    fn div_rem_exact_ring(&self, b: &Self) -> (Self, Self) {
        let db = b.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else {
            return (Poly::zero_poly(), Poly::zero_poly());
        };
        if da < db {
            return (Poly::zero_poly(), self.clone());
        }
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![R::zero(); da - db + 1];
        while r.len() > db {
            let top = r.len() - 1;
            if r[top].is_zero() {
                r.pop();
                continue;
            }
            let c = r[top].div_exact(&lb);
            let shift = top - db;
            for (k, bc) in b.coeffs.iter().enumerate() {
                r[shift + k] = r[shift + k].sub(&c.mul(bc));
            }
            q[shift] = c;
            r.pop();
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn is_zero_poly(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn div_coeffs_exact(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.div_exact(c)).collect())
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly::zero_poly()
    }
    fn one() -> Self {
        Poly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Poly::zero_poly();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }
    fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }
    fn from_i64(n: i64) -> Self {
        Poly::constant(R::from_i64(n))
    }
    fn div_exact(&self, o: &Self) -> Self {
        self.div_exact_poly(o)
    }
}

/// Resultant with the convention `Res(p, q) = lc(p)^deg(q) · Π q(αᵢ)` over the
/// roots `αᵢ` of `p` (the Sylvester determinant).
///
/// Computed by the subresultant pseudo-remainder sequence, which keeps every
/// intermediate division exact in `R`.
pub fn resultant<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Result<R, AlgebraError> {
    if p.is_zero_poly() && q.is_zero_poly() {
        return Err(AlgebraError::UndefinedResultant);
    }
    if p.is_zero_poly() || q.is_zero_poly() {
        return Ok(R::zero());
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut negate = false;
    if a.deg() < b.deg() {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            negate = true;
        }
        core::mem::swap(&mut a, &mut b);
    }
    let sign = |v: R, negate: bool| if negate { v.neg() } else { v };
    if b.deg() == 0 {
        return Ok(sign(b.lc().pow(a.deg() as u32), negate));
    }
    let mut g = R::one();
    let mut h = R::one();
    loop {
        let (da, db) = (a.deg(), b.deg());
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero_poly() {
            return Ok(R::zero());
        }
        a = b;
        b = r.div_coeffs_exact(&g.mul(&h.pow(delta)));
        g = a.lc();
        if delta > 0 {
            h = g.pow(delta).div_exact(&h.pow(delta - 1));
        }
        if b.deg() == 0 {
            let da = a.deg() as u32;
            let out = b.lc().pow(da).div_exact(&h.pow(da - 1));
            return Ok(sign(out, negate));
        }
    }
}

/// Discriminant `(-1)^(d(d-1)/2) · Res(p, p') / lc(p)`; zero iff `p` has a
/// repeated root.
pub fn discriminant<R: Ring>(p: &Poly<R>) -> Result<R, AlgebraError> {
    let d = p.degree().ok_or(AlgebraError::DegreeTooLow)?;
    if d == 0 {
        return Err(AlgebraError::DegreeTooLow);
    }
    let res = resultant(p, &p.derivative())?;
    let q = res.div_exact(&p.lc());
    Ok(if (d * (d - 1) / 2) % 2 == 1 { q.neg() } else { q })
}

impl<F: Field> Poly<F> {
    pub fn monic(&self) -> Self {
        if self.is_zero_poly() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    /// Euclidean division over a field.
    pub fn div_rem(&self, b: &Self) -> (Self, Self) {
        self.div_rem_exact_ring(b)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero_poly() {
            let (_, r) = a.div_rem(&b);
            a = b;
            // keep the remainder sequence monic to slow coefficient growth
            b = r.monic();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, made monic: same roots, each simple.
    pub fn squarefree_part(&self) -> Self {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun decomposition: returns `[f₁, f₂, …]` with `self = lc · Π fᵢ^i`,
    /// every `fᵢ` monic, squarefree and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let fp = self.derivative();
        let a0 = self.gcd(&fp);
        let mut b = self.div_rem(&a0).0;
        let c = fp.div_rem(&a0).0;
        let mut d = Ring::sub(&c, &b.derivative());
        while b.deg() > 0 {
            let a = b.gcd(&d);
            let nb = b.div_rem(&a).0;
            let nc = d.div_rem(&a).0;
            d = Ring::sub(&nc, &nb.derivative());
            b = nb;
            out.push(a.monic());
        }
        out
    }
}

impl Poly<QI> {
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    /// Float copy of the coefficients, scaled so the largest has modulus one.
    pub fn to_c64_normalized(&self) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = self.coeffs.iter().map(QI::to_c64).collect();
        let m = v.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if m > 0.0 {
            for c in v.iter_mut() {
                *c /= m;
            }
        }
        v
    }
}

impl BiPoly {
    /// Substitute an exact value for the inner variable.
    pub fn eval_inner(&self, s: &QI) -> Poly<QI> {
        Poly::new(self.coeffs.iter().map(|c| c.eval(s)).collect())
    }

    /// Total degree in the inner variable.
    pub fn inner_degree(&self) -> usize {
        self.coeffs.iter().filter_map(|c| c.degree()).max().unwrap_or(0)
    }

    /// Partial derivative in the inner variable.
    pub fn inner_derivative(&self) -> BiPoly {
        Poly::new(self.coeffs.iter().map(|c| c.derivative()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly<QI> {
        Poly::new(c.iter().map(|&x| QI::int(x)).collect())
    }

    /// Sylvester determinant by fraction-free cofactor expansion; the oracle
    /// for the resultant convention.
    fn sylvester<R: Ring>(a: &Poly<R>, b: &Poly<R>) -> R {
        let (m, n) = (a.deg(), b.deg());
        let size = m + n;
        let mut mat = vec![vec![R::zero(); size]; size];
        for i in 0..n {
            for k in 0..=m {
                mat[i][i + k] = a.coeff(m - k);
            }
        }
        for i in 0..m {
            for k in 0..=n {
                mat[n + i][i + k] = b.coeff(n - k);
            }
        }
        det(&mat)
    }

    fn det<R: Ring>(m: &[Vec<R>]) -> R {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = R::zero();
        for col in 0..n {
            if m[0][col].is_zero() {
                continue;
            }
            let minor: Vec<Vec<R>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = m[0][col].mul(&det(&minor));
            acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn resultant_linear_pair() {
        // Res(v - 3, v - 5) = q(3) = -2
        assert_eq!(resultant(&p(&[-3, 1]), &p(&[-5, 1])).unwrap(), QI::int(-2));
    }

    #[test]
    fn resultant_common_root_is_zero() {
        assert!(resultant(&p(&[-7, 1]), &p(&[-7, 1])).unwrap().is_zero());
    }

    #[test]
    fn resultant_both_zero_is_error() {
        assert_eq!(
            resultant(&Poly::<QI>::zero_poly(), &Poly::zero_poly()),
            Err(AlgebraError::UndefinedResultant)
        );
    }

    #[test]
    fn resultant_over_polynomial_ring() {
        // Res_v(v^2 - s, 2v) = -4s; Sylvester oracle computed alongside.
        let s = Poly::<QI>::x();
        let a: BiPoly = Poly::new(vec![s.neg(), Poly::zero_poly(), Poly::one()]);
        let b: BiPoly = Poly::new(vec![Poly::zero_poly(), Poly::from_i64(2)]);
        let expected = s.scale(&QI::int(-4));
        assert_eq!(sylvester(&a, &b), expected);
        assert_eq!(resultant(&a, &b).unwrap(), expected);
    }

    #[test]
    fn discriminant_quadratic_in_s() {
        let s = Poly::<QI>::x();
        let a: BiPoly = Poly::new(vec![s.neg(), Poly::zero_poly(), Poly::one()]);
        assert_eq!(discriminant(&a).unwrap(), s.scale(&QI::int(4)));
    }

    #[test]
    fn discriminant_repeated_root() {
        assert!(discriminant(&p(&[1, -2, 1])).unwrap().is_zero());
    }

    #[test]
    fn discriminant_depressed_cubic() {
        // v^3 + P v + Q over Q(i)[P][Q]: compare against the Sylvester oracle
        // and the closed form -4P^3 - 27Q^2 at many integer points.
        for pp in -3..=3 {
            for qq in -3..=3 {
                let c = p(&[qq, pp, 0, 1]);
                let closed = QI::int(-4 * pp * pp * pp - 27 * qq * qq);
                let syl = sylvester(&c, &c.derivative());
                assert_eq!(discriminant(&c).unwrap(), closed);
                assert_eq!(syl.neg(), closed); // d = 3: sign (-1)^3, lc = 1
            }
        }
    }

    #[test]
    fn squarefree_examples() {
        // (v-1)^2 (v+2) -> (v-1)(v+2)
        let f = Ring::mul(&Ring::mul(&p(&[-1, 1]), &p(&[-1, 1])), &p(&[2, 1]));
        assert_eq!(f.squarefree_part(), Ring::mul(&p(&[-1, 1]), &p(&[2, 1])));
        assert_eq!(p(&[1, 0, 1]).squarefree_part(), p(&[1, 0, 1]));
        assert_eq!(p(&[0, 0, 0, 1]).squarefree_part(), p(&[0, 1]));
    }

    #[test]
    fn yun_decomposition_recovers_multiplicities() {
        // (v-1)^3 (v+1)^1 (v-2)^2
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        let c = p(&[-2, 1]);
        let f = Ring::mul(&Ring::mul(&a.pow(3), &b), &c.pow(2));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![b, c, a]);
    }

    #[test]
    fn pseudo_rem_identity() {
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[5, 0, 2]);
        let r = a.pseudo_rem(&b);
        // lc(b)^(3-2+1) a - r must be divisible by b
        let lhs = Ring::sub(&a.scale(&QI::int(4)), &r);
        let (_, rem) = lhs.div_rem(&b);
        assert!(rem.is_zero_poly());
    }

    #[test]
    fn resultant_matches_sylvester_random() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 11) as i64 - 5
        };
        for _ in 0..40 {
            let da = 1 + (next().unsigned_abs() % 5) as usize;
            let db = 1 + (next().unsigned_abs() % 5) as usize;
            let mut ca: Vec<i64> = (0..=da).map(|_| next()).collect();
            let mut cb: Vec<i64> = (0..=db).map(|_| next()).collect();
            if ca[da] == 0 {
                ca[da] = 1;
            }
            if cb[db] == 0 {
                cb[db] = 2;
            }
            let (a, b) = (p(&ca), p(&cb));
            assert_eq!(resultant(&a, &b).unwrap(), sylvester(&a, &b));
        }
    }
}
