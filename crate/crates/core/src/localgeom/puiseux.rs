//! Newton–Puiseux expansion of the branches of a curve at a point.
//!
//! Local coordinates `(X, Y)` around `P` are chosen so that the line
//! `X = 0` is transversal to every branch. Each branch then reads
//! `X = T^N`, `Y = Σ_k b_k T^k` with `N` its multiplicity, and the adapted
//! coordinates `x2 = X`, `x1 = Y − b_N X` put it in the normal form
//! `x2 = t^r`, `x1 = Σ_{i ≥ s} a_i t^i`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_integer::Integer;

use super::LocalError;
use crate::algebra::{cluster_roots, cross, roots, Poly, Ring, TriPoly, UniPoly, QI};
use crate::curve::{normalize_point, CurveSpec};

/// Terms kept beyond the tangent multiplicity.
pub const DEFAULT_BUFFER: u32 = 4;
/// Coefficients below this fraction of the largest are treated as zero.
const REL_ZERO: f64 = 1e-9;
/// Sums cancelling below this fraction of their terms are treated as zero.
const CANCEL: f64 = 1e-10;
/// Maximal `x`-degree kept during substitutions.
const X_TRUNC: usize = 64;
/// Candidate shears for the transversal direction.
const SHEARS: [(i64, i64); 8] = [(1, 3), (-2, 7), (3, 5), (-5, 11), (7, 13), (2, 1), (-3, 2), (11, 17)];

/// One analytic branch at a point, in the normal form
/// `x2 = t^r`, `x1 = Σ_{i ≥ s} a_i t^i`, `a_s ≠ 0`, `s > r ≥ 1`.
#[derive(Clone, Debug)]
pub struct PuiseuxBranch {
    /// Unit-normalized base point.
    pub point: [Complex64; 3],
    pub exact_point: Option<[QI; 3]>,
    /// Index of the component carrying the branch.
    pub component: usize,
    pub r: u32,
    pub s: u32,
    /// Coefficients `a_s, …, a_{s+buffer}`.
    pub coeffs: Vec<Complex64>,
    /// Columns `E1, E2, E0` with `X = x1·E1 + x2·E2 + x3·E0` in the
    /// original coordinates; `E0` is the base point.
    pub frame: [[Complex64; 3]; 3],
    /// Tangent line `x1 = 0`, as dual coordinates in the original frame.
    pub tangent: [Complex64; 3],
}

impl PuiseuxBranch {
    /// `a_i` for `s ≤ i ≤ s + buffer`, zero outside the stored window.
    pub fn a(&self, i: u32) -> Complex64 {
        i.checked_sub(self.s).and_then(|k| self.coeffs.get(k as usize).copied()).unwrap_or_default()
    }

    /// Point of `P²` with adapted affine coordinates `(x1, x2)`.
    pub fn adapted_point(&self, x1: Complex64, x2: Complex64) -> [Complex64; 3] {
        let [e1, e2, e0] = self.frame;
        core::array::from_fn(|i| e1[i] * x1 + e2[i] * x2 + e0[i])
    }
}

/// Dense coefficient grid: `c[i][j]` multiplies `x^i y^j`.
#[derive(Clone, Debug)]
struct Grid {
    c: Vec<Vec<Complex64>>,
}

impl Grid {
    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.c.get(i).and_then(|row| row.get(j)).copied().unwrap_or_default()
    }

    fn scale(&self) -> f64 {
        self.c.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn clean(&mut self) {
        let tol = REL_ZERO * self.scale();
        for z in self.c.iter_mut().flatten() {
            if z.norm() <= tol {
                *z = Complex64::default();
            }
        }
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.c.iter().enumerate().flat_map(|(i, row)| {
            row.iter().enumerate().filter(|(_, z)| z.norm() > 0.0).map(move |(j, &z)| (i, j, z))
        })
    }

    /// `g(x^q, x^p (c + y)) / x^{shift}`, truncated in `x`.
    fn substitute(&self, q: usize, p: usize, c: Complex64, shift: usize) -> Grid {
        let ydeg = self.c.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![vec![Complex64::default(); ydeg]; X_TRUNC + 1];
        // sum of absolute contributions, to detect cancellation
        let mut mag = vec![vec![0.0f64; ydeg]; X_TRUNC + 1];
        // binomial rows of (c + y)^j
        let mut binom: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0)]];
        for j in 1..ydeg {
            let prev = &binom[j - 1];
            let mut row = vec![Complex64::default(); j + 1];
            for (k, &b) in prev.iter().enumerate() {
                row[k] += b * c;
                row[k + 1] += b;
            }
            binom.push(row);
        }
        for (i, j, a) in self.nonzero() {
            let e = q * i + p * j;
            debug_assert!(e >= shift);
            let e = e - shift;
            if e > X_TRUNC {
                continue;
            }
            for (k, &b) in binom[j].iter().enumerate() {
                out[e][k] += a * b;
                mag[e][k] += a.norm() * b.norm();
            }
        }
        for (row, mrow) in out.iter_mut().zip(&mag) {
            for (z, &m) in row.iter_mut().zip(mrow) {
                if z.norm() <= CANCEL * m {
                    *z = Complex64::default();
                }
            }
        }
        while out.last().is_some_and(|row| row.iter().all(|z| z.norm() == 0.0)) {
            out.pop();
        }
        Grid { c: out }
    }
}

fn grid_from<R: Ring>(h: &Poly<Poly<R>>, conv: impl Fn(&R) -> Complex64) -> Grid {
    let mut g = Grid { c: h.coeffs().iter().map(|row| row.coeffs().iter().map(&conv).collect()).collect() };
    g.clean();
    g
}

struct Raw {
    n: usize,
    /// `(exponent, coefficient)` of `Y` in `T`, increasing exponents.
    series: Vec<(usize, Complex64)>,
}

/// Expands all roots `Y(X) → 0` of the grid. `n`, `e`, `series` describe
/// the substitutions so far: `X = T^n`, `Y = series + T^e · y`.
fn expand(g: Grid, n: usize, e: usize, series: Vec<(usize, Complex64)>, want: Option<usize>, out: &mut Vec<Raw>, depth: usize) -> Result<(), LocalError> {
    if depth > 200 {
        return Err(LocalError::SeparationFailed);
    }
    let m0 = (0..).take(g.c.first().map_or(0, Vec::len)).find(|&j| g.get(0, j).norm() > 0.0);
    let Some(m0) = m0 else {
        return Err(LocalError::SeparationFailed);
    };
    if m0 == 0 {
        // no root through the origin; cannot happen for a point on the curve
        return Err(LocalError::NotOnCurve);
    }
    let s_known = series.iter().find(|&&(k, _)| k > n).map(|&(k, _)| k);
    let done = m0 == 1 && s_known.is_some_and(|s| e > s + want.unwrap_or(DEFAULT_BUFFER as usize));
    if done {
        out.push(Raw { n, series });
        return Ok(());
    }
    // first edge of the Newton polygon leaving (0, m0)
    let mut best: Option<(usize, usize)> = None; // slope as i / (m0 - j)
    for (i, j, _) in g.nonzero() {
        if j >= m0 {
            continue;
        }
        let (num, den) = (i, m0 - j);
        best = match best {
            Some((bn, bd)) if bn * den <= num * bd => Some((bn, bd)),
            _ => Some((num, den)),
        };
    }
    let Some((num, den)) = best else {
        // y divides g up to truncation: the remaining series vanishes
        if m0 == 1 && s_known.is_some() {
            out.push(Raw { n, series });
            return Ok(());
        }
        return Err(LocalError::SeparationFailed);
    };
    let gcd = num.gcd(&den);
    let (p, q) = (num / gcd, den / gcd);
    if p == 0 {
        return Err(LocalError::NotOnCurve);
    }
    // edge points satisfy q·i + p·j = p·m0
    let edge: Vec<(usize, Complex64)> = g.nonzero().filter(|&(i, j, _)| q * i + p * j == p * m0).map(|(_, j, a)| (j, a)).collect();
    let j_low = edge.iter().map(|&(j, _)| j).min().expect("edge has two points");
    let mut psi = vec![Complex64::default(); (m0 - j_low) / q + 1];
    for &(j, a) in &edge {
        psi[(j - j_low) / q] = a;
    }
    let psi = UniPoly::new(psi);
    let ws = match roots(&psi, 1e-12) {
        Ok(z) => z,
        Err(crate::algebra::AlgebraError::RootsNotConverged { partial }) => partial,
        Err(err) => return Err(err.into()),
    };
    for (w, mult) in cluster_roots(&ws, 1e-6) {
        let w = refine_multiple(&psi, w, mult);
        let c = w.powf(1.0 / q as f64);
        let g1 = g.substitute(q, p, c, p * m0);
        let mut s1: Vec<(usize, Complex64)> = series.iter().map(|&(k, b)| (k * q, b)).collect();
        let e1 = q * e + p;
        s1.push((e1, c));
        expand(g1, n * q, e1, s1, want, out, depth + 1)?;
    }
    Ok(())
}

/// Newton on the `(m-1)`-th derivative, where an `m`-fold root is simple.
fn refine_multiple(p: &UniPoly, w: Complex64, m: usize) -> Complex64 {
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    let dd = d.derivative();
    let mut w = w;
    for _ in 0..20 {
        let den = dd.eval(w);
        if den.norm() == 0.0 {
            break;
        }
        let step = d.eval(w) / den;
        w -= step;
        if step.norm() <= 1e-16 * w.norm().max(1e-300) {
            break;
        }
    }
    w
}

/// Lowest total degree of a grid: the multiplicity of the point.
fn order(g: &Grid) -> Option<usize> {
    g.nonzero().map(|(i, j, _)| i + j).min()
}

/// Local equation of component `f` at `p` in coordinates `(X, Y)` where
/// the point is `P + X·U + Y·W`. Exact when `p` is.
fn local_grid(f: &TriPoly, p: &[Complex64; 3], exact: Option<&[QI; 3]>, u: &[QI; 3], w: &[QI; 3]) -> Grid {
    match exact {
        Some(pe) => {
            let forms: [[QI; 3]; 3] = core::array::from_fn(|i| [pe[i].clone(), u[i].clone(), w[i].clone()]);
            grid_from(&f.substitute_affine(&forms, |c| c.clone()), QI::to_c64)
        }
        None => {
            let forms: [[Complex64; 3]; 3] = core::array::from_fn(|i| [p[i], u[i].to_c64(), w[i].to_c64()]);
            grid_from(&f.substitute_affine(&forms, QI::to_c64), |z| *z)
        }
    }
}

/// Branches of component `comp` at the point.
pub fn component_branches(curve: &CurveSpec, comp: usize, point: &[Complex64; 3], exact: Option<&[QI; 3]>, buffer: u32) -> Result<Vec<PuiseuxBranch>, LocalError> {
    let f = &curve.factors()[comp];
    if f.relative_value(point) > 1e-8 {
        return Err(LocalError::NotOnCurve);
    }
    // affine chart: scale so the largest coordinate is 1, move the other two
    let k = (0..3).max_by(|&a, &b| point[a].norm().partial_cmp(&point[b].norm()).unwrap()).unwrap();
    let (ia, ib) = ((k + 1) % 3, (k + 2) % 3);
    let base: [Complex64; 3] = core::array::from_fn(|i| point[i] / point[k]);
    let base_exact: Option<[QI; 3]> = exact.map(|e| {
        let inv = crate::algebra::Field::inv(&e[k]);
        core::array::from_fn(|i| e[i].mul(&inv))
    });
    let unit = |i: usize| -> [QI; 3] { core::array::from_fn(|j| if i == j { QI::one() } else { QI::zero() }) };
    let (u, v) = (unit(ia), unit(ib));

    let mut chosen = None;
    for &(an, ad) in &SHEARS {
        let alpha = QI::frac(an, ad);
        let w: [QI; 3] = core::array::from_fn(|i| alpha.mul(&u[i]).add(&v[i]));
        let g = local_grid(f, &base, base_exact.as_ref(), &u, &w);
        let m = order(&g).ok_or(LocalError::NotOnCurve)?;
        if m == 0 {
            return Err(LocalError::NotOnCurve);
        }
        let lead = (0..=m).map(|j| g.get(m - j, j).norm()).fold(0.0, f64::max);
        if g.get(0, m).norm() > 1e-6 * lead {
            chosen = Some((g, m, w));
            break;
        }
    }
    let (g, m, w) = chosen.ok_or(LocalError::SeparationFailed)?;
    let mut raw = Vec::new();
    expand(g, 1, 0, Vec::new(), Some(buffer as usize), &mut raw, 0)?;
    if raw.iter().map(|b| b.n).sum::<usize>() != m {
        return Err(LocalError::SeparationFailed);
    }

    let e0 = base;
    let uc: [Complex64; 3] = core::array::from_fn(|i| u[i].to_c64());
    let wc: [Complex64; 3] = core::array::from_fn(|i| w[i].to_c64());
    let mut out = Vec::with_capacity(raw.len());
    for b in raw {
        let coeff = |k: usize| b.series.iter().find(|&&(e, _)| e == k).map(|&(_, c)| c).unwrap_or_default();
        let c1 = coeff(b.n);
        let s = b.series.iter().find(|&&(e, _)| e > b.n).map(|&(e, _)| e).ok_or(LocalError::SeparationFailed)?;
        // point = P + X·U + Y·W with X = x2, Y = x1 + c1·x2
        let e1 = wc;
        let e2: [Complex64; 3] = core::array::from_fn(|i| uc[i] + c1 * wc[i]);
        let tangent = normalize_point(&cross(&e0, &e2));
        out.push(PuiseuxBranch {
            point: normalize_point(point),
            exact_point: exact.cloned(),
            component: comp,
            r: b.n as u32,
            s: s as u32,
            coeffs: (s..=s + buffer as usize).map(coeff).collect(),
            frame: [e1, e2, e0],
            tangent,
        });
    }
    Ok(out)
}

/// All branches of all non-line components through the point.
pub fn branches_at(curve: &CurveSpec, point: &[Complex64; 3], exact: Option<&[QI; 3]>) -> Result<Vec<PuiseuxBranch>, LocalError> {
    if curve.residual(point) > 1e-8 {
        return Err(LocalError::NotOnCurve);
    }
    let mut out = Vec::new();
    for (i, f) in curve.factors().iter().enumerate() {
        if curve.is_line(i) || f.relative_value(point) > 1e-8 {
            continue;
        }
        out.extend(component_branches(curve, i, point, exact, DEFAULT_BUFFER)?);
    }
    Ok(out)
}

/// Multiplicity of the curve at the point: lowest degree of the local equation.
pub fn multiplicity_at(curve: &CurveSpec, point: &[Complex64; 3], exact: Option<&[QI; 3]>) -> usize {
    let k = (0..3).max_by(|&a, &b| point[a].norm().partial_cmp(&point[b].norm()).unwrap()).unwrap();
    let base: [Complex64; 3] = core::array::from_fn(|i| point[i] / point[k]);
    let base_exact: Option<[QI; 3]> = exact.map(|e| {
        let inv = crate::algebra::Field::inv(&e[k]);
        core::array::from_fn(|i| e[i].mul(&inv))
    });
    let unit = |i: usize| -> [QI; 3] { core::array::from_fn(|j| if i == j { QI::one() } else { QI::zero() }) };
    let g = local_grid(curve.polynomial(), &base, base_exact.as_ref(), &unit((k + 1) % 3), &unit((k + 2) % 3));
    order(&g).unwrap_or(0)
}
