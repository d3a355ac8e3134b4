//! Singular points and flexes by exact elimination in a chart.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::LocalError;
use crate::algebra::{rationalize, resultant, roots, cluster_roots, solve2, to_c64_3, Poly, Ring, TriPoly, UniPoly, QI};
use crate::chart::{chart_poly, Chart, NumBiPoly};
use crate::curve::{normalize_point, projective_distance, CurveSpec};

/// Residual bound a singular point or flex must meet after refinement.
pub const CERTIFY_TOL: f64 = 1e-10;
/// Largest `|value| / Σ|terms|` of `F` and its Hessian at an accepted flex.
const FLEX_CANCEL: f64 = 1e-9;
/// Flex candidates this close to a singular point are discarded.
const SINGULAR_CLEARANCE: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct CurvePoint {
    /// Unit-normalized projective coordinates.
    pub point: [Complex64; 3],
    /// Exact coordinates when rational recognition succeeded and verified.
    pub exact: Option<[QI; 3]>,
    /// Certified residual (0 for exact points).
    pub residual: f64,
}

/// Simple roots of the squarefree part of an exact polynomial.
pub fn distinct_roots(p: &Poly<QI>) -> Result<Vec<Complex64>, LocalError> {
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    let sf = p.squarefree_part();
    let num = UniPoly::new(sf.to_c64_normalized());
    let mut z = match roots(&num, 1e-11) {
        Ok(z) => z,
        Err(crate::algebra::AlgebraError::RootsNotConverged { partial }) => partial,
        Err(e) => return Err(e.into()),
    };
    let dn = num.derivative();
    for zk in z.iter_mut() {
        for _ in 0..6 {
            let d = dn.eval(*zk);
            if d.norm() == 0.0 {
                break;
            }
            let step = num.eval(*zk) / d;
            *zk -= step;
            if step.norm() <= 1e-16 * (1.0 + zk.norm()) {
                break;
            }
        }
    }
    Ok(z)
}

/// Tries to recognize `x` as a point with small Gaussian-rational coordinates
/// satisfying all the given polynomials exactly.
pub(crate) fn recognize_exact(x: &[Complex64; 3], vanish: &[TriPoly]) -> Option<[QI; 3]> {
    let k = (0..3).max_by(|&a, &b| x[a].norm().partial_cmp(&x[b].norm()).unwrap())?;
    let y: [Complex64; 3] = core::array::from_fn(|i| x[i] / x[k]);
    let mut out: [QI; 3] = core::array::from_fn(|_| QI::zero());
    for i in 0..3 {
        let re = rationalize(y[i].re, 1000)?;
        let im = rationalize(y[i].im, 1000)?;
        let q = QI::new(re, im);
        if (q.to_c64() - y[i]).norm() > 1e-6 {
            return None;
        }
        out[i] = q;
    }
    vanish.iter().all(|f| f.eval(&out).is_zero()).then_some(out)
}

/// `z` as an exact root of `p`, when it has a small Gaussian-rational value.
fn rational_root(p: &Poly<QI>, z: Complex64) -> Option<QI> {
    let q = QI::new(rationalize(z.re, 10_000)?, rationalize(z.im, 10_000)?);
    ((q.to_c64() - z).norm() <= 1e-6 * (1.0 + z.norm()) && p.eval(&q).is_zero()).then_some(q)
}

/// Scales an exact point so its largest coordinate is 1.
fn normalize_exact(e: &[QI; 3]) -> [QI; 3] {
    let k = (0..3).max_by(|&a, &b| e[a].to_c64().norm().partial_cmp(&e[b].to_c64().norm()).unwrap()).unwrap();
    let inv = crate::algebra::Field::inv(&e[k]);
    core::array::from_fn(|i| e[i].mul(&inv))
}

fn dedupe(points: &mut Vec<CurvePoint>) {
    dedupe_within(points, 1e-7)
}

fn dedupe_within(points: &mut Vec<CurvePoint>, tol: f64) {
    let mut kept: Vec<CurvePoint> = Vec::new();
    for p in points.drain(..) {
        match kept.iter_mut().find(|k| projective_distance(&k.point, &p.point) < tol) {
            Some(k) => {
                if k.exact.is_none() && p.exact.is_some() || p.residual < k.residual {
                    *k = p;
                }
            }
            None => kept.push(p),
        }
    }
    *points = kept;
}

/// Newton on a square system `(A, B) = 0` in `(r, s)`; keeps the best iterate.
pub(crate) fn newton2(a: &NumBiPoly, b: &NumBiPoly, mut r: Complex64, mut s: Complex64, iters: usize) -> (Complex64, Complex64) {
    let res = |r: Complex64, s: Complex64| {
        let (va, _, _) = a.eval_with_partials(r, s);
        let (vb, _, _) = b.eval_with_partials(r, s);
        va.norm() / a.abs_eval(r, s).max(1e-300) + vb.norm() / b.abs_eval(r, s).max(1e-300)
    };
    let mut best = (r, s, res(r, s));
    for _ in 0..iters {
        let (va, ar, as_) = a.eval_with_partials(r, s);
        let (vb, br, bs) = b.eval_with_partials(r, s);
        let Ok([dr, ds]) = solve2([[ar, as_], [br, bs]], [va, vb]) else { break };
        r -= dr;
        s -= ds;
        if !(r.is_finite() && s.is_finite()) {
            break;
        }
        let e = res(r, s);
        if e < best.2 {
            best = (r, s, e);
        }
        if e == 0.0 || (dr.norm() + ds.norm()) <= 1e-17 * (1.0 + r.norm() + s.norm()) {
            break;
        }
    }
    (best.0, best.1)
}

/// All singular points of the curve: common zeros of `F` and its gradient,
/// including the intersections of distinct components.
pub fn singular_points_in_chart(curve: &CurveSpec, chart: &Chart) -> Result<Vec<CurvePoint>, LocalError> {
    if curve.degree() < 2 {
        return Ok(Vec::new());
    }
    let h = &chart.h;
    let hr = h.derivative();
    let hs = h.inner_derivative();
    let res_s = resultant(h, &hs)?;
    let elim = if res_s.is_zero_poly() { chart.disc.clone() } else { chart.disc.gcd(&res_s) };
    let gradient = curve.polynomial().gradient();
    let mut vanish = alloc::vec![curve.polynomial().clone()];
    vanish.extend(gradient.iter().cloned());

    let (nhr, nhs) = (NumBiPoly::from_exact(&hr), NumBiPoly::from_exact(&hs));
    let elim_sqf = elim.squarefree_part();
    let mut out = Vec::new();
    for s in distinct_roots(&elim)? {
        if let Some(sq) = rational_root(&elim_sqf, s) {
            // exact fiber: the singular r values are the common roots of
            // H, H_r and H_s over this s
            let g = h.eval_inner(&sq).gcd(&hr.eval_inner(&sq)).gcd(&hs.eval_inner(&sq));
            for r in distinct_roots(&g)? {
                let point = match rational_root(&g.squarefree_part(), r) {
                    Some(rq) => {
                        let e: [QI; 3] = core::array::from_fn(|i| chart.p0[i].add(&sq.mul(&chart.p1[i])).add(&rq.mul(&chart.q[i])));
                        let exact = recognize_exact(&to_c64_3(&e), &vanish).or(Some(e));
                        let exact = exact.map(|e| normalize_exact(&e));
                        CurvePoint { point: normalize_point(&to_c64_3(exact.as_ref().unwrap())), exact, residual: 0.0 }
                    }
                    None => {
                        let point = normalize_point(&chart.point(r, s));
                        let residual = curve.residual(&point) + curve.gradient_residual(&point);
                        CurvePoint { point, exact: None, residual }
                    }
                };
                if point.residual < CERTIFY_TOL {
                    out.push(point);
                }
            }
            continue;
        }
        let fiber = chart.restrict(s);
        let rts = match roots(&fiber, 1e-10) {
            Ok(z) => z,
            Err(crate::algebra::AlgebraError::RootsNotConverged { partial }) => partial,
            Err(e) => return Err(e.into()),
        };
        for (r, mult) in cluster_roots(&rts, 1e-3) {
            if mult < 2 {
                continue;
            }
            let (r, s) = newton2(&nhr, &nhs, r, s, 100);
            let x = chart.point(r, s);
            let exact = recognize_exact(&x, &vanish);
            let point = match &exact {
                Some(e) => normalize_point(&to_c64_3(e)),
                None => normalize_point(&x),
            };
            let residual = if exact.is_some() { 0.0 } else { curve.residual(&point) + curve.gradient_residual(&point) };
            if residual < CERTIFY_TOL {
                out.push(CurvePoint { point, exact, residual });
            }
        }
    }
    dedupe(&mut out);
    Ok(out)
}

/// Smooth points of components of degree ≥ 3 where the Hessian vanishes.
/// Returned per component index.
pub fn flex_points_in_chart(curve: &CurveSpec, chart: &Chart, singular: &[CurvePoint]) -> Result<Vec<(usize, CurvePoint)>, LocalError> {
    let mut out = Vec::new();
    for (i, f) in curve.factors().iter().enumerate() {
        if f.degree() < 3 {
            continue;
        }
        let hess = f.hessian_det();
        let hi = chart_poly(f, &chart.q, &chart.p0, &chart.p1);
        let ki = chart_poly(&hess, &chart.q, &chart.p0, &chart.p1);
        let elim = resultant(&hi, &ki)?;
        if elim.is_zero_poly() {
            // a line component inside the Hessian; lines are skipped above
            continue;
        }
        let (nh, nk) = (NumBiPoly::from_exact(&hi), NumBiPoly::from_exact(&ki));
        let vanish = [f.clone(), hess.clone()];
        let mut found = Vec::new();
        let elim_sqf = elim.squarefree_part();
        for s in distinct_roots(&elim)? {
            if let Some(sq) = rational_root(&elim_sqf, s) {
                // exact fiber, as for singular points; these are typically
                // the lines through rational singular points, where the
                // numerical system is badly conditioned
                let g = hi.eval_inner(&sq).gcd(&ki.eval_inner(&sq));
                for r in distinct_roots(&g)? {
                    let point = match rational_root(&g.squarefree_part(), r) {
                        Some(rq) => {
                            let e: [QI; 3] = core::array::from_fn(|i| chart.p0[i].add(&sq.mul(&chart.p1[i])).add(&rq.mul(&chart.q[i])));
                            let e = normalize_exact(&e);
                            CurvePoint { point: normalize_point(&to_c64_3(&e)), exact: Some(e), residual: 0.0 }
                        }
                        None => {
                            let point = normalize_point(&chart.point(r, s));
                            let residual = f.relative_value(&point) + hess.relative_value(&point);
                            CurvePoint { point, exact: None, residual }
                        }
                    };
                    if point.residual < CERTIFY_TOL && !singular.iter().any(|p| projective_distance(&p.point, &point.point) < SINGULAR_CLEARANCE) {
                        found.push(point);
                    }
                }
                continue;
            }
            let fiber = nh.restrict(s);
            let rts = match roots(&fiber, 1e-10) {
                Ok(z) => z,
                Err(crate::algebra::AlgebraError::RootsNotConverged { partial }) => partial,
                Err(e) => return Err(e.into()),
            };
            for (r, _) in cluster_roots(&rts, 1e-6) {
                let (kv, _, _) = nk.eval_with_partials(r, s);
                if kv.norm() > 1e-4 * nk.abs_eval(r, s) {
                    continue;
                }
                let (r, s1) = newton2(&nh, &nk, r, s, 50);
                // s is a root of the exact eliminant; a refinement that
                // wanders off it has converged somewhere else
                if (s1 - s).norm() > 1e-6 * (1.0 + s.norm()) {
                    continue;
                }
                let s = s1;
                // near singular points both values are small without being
                // zero; require them to cancel relative to their terms
                let (hv, _, _) = nh.eval_with_partials(r, s);
                let (kv, _, _) = nk.eval_with_partials(r, s);
                if hv.norm() > FLEX_CANCEL * nh.abs_eval(r, s) || kv.norm() > FLEX_CANCEL * nk.abs_eval(r, s) {
                    continue;
                }
                let x = chart.point(r, s);
                let exact = recognize_exact(&x, &vanish);
                let point = match &exact {
                    Some(e) => normalize_point(&to_c64_3(e)),
                    None => normalize_point(&x),
                };
                let residual = if exact.is_some() { 0.0 } else { f.relative_value(&point) + hess.relative_value(&point) };
                if residual >= CERTIFY_TOL {
                    continue;
                }
                if singular.iter().any(|p| projective_distance(&p.point, &point) < SINGULAR_CLEARANCE) {
                    continue;
                }
                found.push(CurvePoint { point, exact, residual });
            }
        }
        dedupe_within(&mut found, 1e-6);
        out.extend(found.into_iter().map(|p| (i, p)));
    }
    Ok(out)
}

/// A deterministic generic chart for point computations.
pub fn default_chart(curve: &CurveSpec) -> Result<Chart, LocalError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut last = None;
    for _ in 0..100 {
        match Chart::random(curve, &mut rng) {
            Ok(c) => return Ok(c),
            Err(crate::chart::ChartError::ZeroDiscriminant) => return Err(LocalError::NonReduced),
            Err(e) => last = Some(e),
        }
    }
    Err(LocalError::Chart(last.expect("at least one attempt")))
}

pub fn singular_points(curve: &CurveSpec) -> Result<Vec<CurvePoint>, LocalError> {
    singular_points_in_chart(curve, &default_chart(curve)?)
}

pub fn flex_points(curve: &CurveSpec) -> Result<Vec<(usize, CurvePoint)>, LocalError> {
    let chart = default_chart(curve)?;
    let sing = singular_points_in_chart(curve, &chart)?;
    flex_points_in_chart(curve, &chart, &sing)
}

