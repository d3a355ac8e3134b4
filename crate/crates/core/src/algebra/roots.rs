//! Simultaneous root finding (Aberth–Ehrlich) with Newton polishing.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use super::unipoly::UniPoly;
use super::AlgebraError;

const MAX_ITERATIONS: usize = 600;
/// Fixed irrational angular offset for the starting circle.
const ANGLE_OFFSET: f64 = 0.618_033_988_749_894_8;

/// All `deg p` roots of `p`, each with backward error `|p(z)| ≤ tol · Σ|cᵢ||z|^i`.
///
/// Starting points sit on a circle whose radius comes from Fujiwara's bound,
/// rotated by a fixed irrational angle. Multiple roots converge only linearly
/// and land within roughly `eps^(1/m)` of the true root; callers that care
/// deflate or cluster.
pub fn roots(p: &UniPoly, tol: f64) -> Result<Vec<Complex64>, AlgebraError> {
    let n = p.degree().ok_or(AlgebraError::DegreeTooLow)?;
    if n == 0 {
        return Err(AlgebraError::DegreeTooLow);
    }
    let lc = p.lc();
    if lc.norm() <= 1e-13 * p.max_coeff() {
        return Err(AlgebraError::LeadingCoefficientTiny);
    }
    let monic = p.scaled(lc.inv());
    if n == 1 {
        return Ok(alloc::vec![-monic.coeffs()[0]]);
    }
    let dp = monic.derivative();

    let radius = fujiwara_bound(&monic).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * radius, TAU * k as f64 / n as f64 + ANGLE_OFFSET))
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_rel_step = 0.0f64;
        for k in 0..n {
            let pk = monic.eval(z[k]);
            if pk.norm() == 0.0 {
                continue;
            }
            let ratio = pk / dp.eval(z[k]);
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        sum += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let w = if denom.norm() > 0.0 && denom.is_finite() { ratio / denom } else { ratio };
            if !w.is_finite() {
                continue;
            }
            z[k] -= w;
            max_rel_step = max_rel_step.max(w.norm() / (1.0 + z[k].norm()));
        }
        if max_rel_step < 4.0 * f64::EPSILON {
            converged = true;
            break;
        }
    }

    for zk in z.iter_mut() {
        polish(&monic, &dp, zk);
    }

    let ok = z.iter().all(|&zk| backward_ok(&monic, zk, tol));
    if !ok || (!converged && z.iter().any(|c| !c.is_finite())) {
        return Err(AlgebraError::RootsNotConverged { partial: z });
    }
    Ok(z)
}

fn backward_ok(p: &UniPoly, z: Complex64, tol: f64) -> bool {
    z.is_finite() && p.eval(z).norm() <= tol * p.abs_eval(z)
}

/// A few Newton steps, each kept only if it lowers the residual.
fn polish(p: &UniPoly, dp: &UniPoly, z: &mut Complex64) {
    let mut r = p.eval(*z).norm();
    for _ in 0..8 {
        let d = dp.eval(*z);
        if d.norm() == 0.0 {
            break;
        }
        let cand = *z - p.eval(*z) / d;
        let rc = p.eval(cand).norm();
        if rc.is_nan() || rc >= r {
            break;
        }
        *z = cand;
        r = rc;
    }
}

/// Fujiwara's bound on root moduli of a monic polynomial.
pub fn fujiwara_bound(monic: &UniPoly) -> f64 {
    let c = monic.coeffs();
    let n = c.len() - 1;
    let mut b = 0.0f64;
    for k in 1..=n {
        let a = c[n - k].norm();
        let a = if k == n { a / 2.0 } else { a };
        b = b.max(libm::pow(a, 1.0 / k as f64));
    }
    2.0 * b
}

/// Groups numerically close roots; returns `(mean, multiplicity)` pairs.
///
/// Two roots join a cluster when closer than `rel · max(1, |z|)`. The cluster
/// mean is far more accurate than its members for a genuine multiple root.
pub fn cluster_roots(roots: &[Complex64], rel: f64) -> Vec<(Complex64, usize)> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while l[i] != i {
            l[i] = l[l[i]];
            i = l[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1.0f64.max(roots[i].norm()).max(roots[j].norm());
            if (roots[i] - roots[j]).norm() < rel * scale {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b] = a;
                }
            }
        }
    }
    let mut out: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &z) in roots.iter().enumerate().take(n) {
        let r = find(&mut label, i);
        if let Some(e) = out.iter_mut().find(|e| e.0 == r) {
            e.1 += z;
            e.2 += 1;
        } else {
            out.push((r, z, 1));
        }
    }
    out.into_iter().map(|(_, s, m)| (s / m as f64, m)).collect()
}
