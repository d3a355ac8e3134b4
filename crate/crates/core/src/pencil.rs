//! A generic pencil of lines, its branch points and petal loops.
//!
//! The pencil is the family of lines through the chart base point `Q`,
//! indexed by the chart parameter `s`. Branch points are the roots of the
//! discriminant `D(s)`; each is a line tangent to the curve or a line
//! through a singular point.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{cluster_roots, roots, Poly, Ring, UniPoly, QI};
use crate::chart::{Chart, ChartError, NumBiPoly};
use crate::localgeom::newton2;
use crate::curve::CurveSpec;
use crate::localgeom::{multiplicity_at, CurvePoint, LocalError, PuiseuxBranch};

pub const MAX_ATTEMPTS: usize = 100;
pub const S0_CANDIDATES: usize = 32;
/// Vertices on each petal circle.
pub const CIRCLE_VERTICES: usize = 64;
/// Obstacle disks have this many petal radii.
const OBSTACLE: f64 = 1.4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PencilError {
    #[error("degenerate curve/pencil interaction after {0} attempts")]
    Degenerate(usize),
    #[error("branch point at s = {0} is neither a tangency nor on a singular point line")]
    Unclassifiable(Complex64),
    #[error("no clearance-respecting spoke to branch point {0}; try another seed")]
    NoClearance(usize),
    #[error(transparent)]
    Local(#[from] LocalError),
}

/// Roots of the discriminant, each with its multiplicity.
#[derive(Clone, Debug)]
pub struct DiscRoot {
    pub s: Complex64,
    pub multiplicity: usize,
    /// Index into the singular point list when the line passes through one.
    pub singular: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct PencilConfig {
    pub seed: u64,
    pub chart: Chart,
    pub s0: Complex64,
    pub roots: Vec<DiscRoot>,
    /// Degree of the squarefree part of `D`.
    pub sqf_degree: usize,
    /// Frames rejected before this one.
    pub rejected: usize,
}

impl PencilConfig {
    /// `H(·, s)`: the intersection of the line `s` with the curve.
    pub fn restrict(&self, s: Complex64) -> UniPoly {
        self.chart.restrict(s)
    }

    /// The pencil line `A + s·B` in dual coordinates.
    pub fn line(&self, s: Complex64) -> [Complex64; 3] {
        self.chart.line(s)
    }

    pub fn branch_locations(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.s).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BranchKind {
    /// Simple tangency with the curve: a point of the dual curve.
    DualTangent,
    /// Line through a singular point carrying a branch with `r ≥ 2`.
    MultipleBranchLine { point: [Complex64; 3], branches: Vec<(u32, u32)> },
    /// Line through a singular point whose branches are all smooth; the
    /// monodromy around it is expected to be trivial.
    SingularPointLine { point: [Complex64; 3] },
}

impl BranchKind {
    pub fn name(&self) -> &'static str {
        match self {
            BranchKind::DualTangent => "dual-tangent",
            BranchKind::MultipleBranchLine { .. } => "multiple-branch-line",
            BranchKind::SingularPointLine { .. } => "singular-point-line",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchPoint {
    pub s: Complex64,
    pub kind: BranchKind,
    pub multiplicity: usize,
}

fn disc_roots(chart: &Chart) -> Result<Vec<(Complex64, usize)>, LocalError> {
    let mut out = Vec::new();
    for (k, f) in chart.disc.squarefree_decomposition().iter().enumerate() {
        for z in crate::localgeom::distinct_roots(f)? {
            out.push((z, k + 1));
        }
    }
    Ok(out)
}

fn min_separation(z: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..z.len() {
        for j in 0..i {
            best = best.min((z[i] - z[j]).norm());
        }
    }
    best
}

/// Chart parameter of a singular point, exact when possible.
fn singular_s(chart: &Chart, p: &CurvePoint) -> Option<(Complex64, Option<QI>)> {
    match &p.exact {
        Some(e) => chart.coords_exact(e).map(|(_, s)| (s.to_c64(), Some(s))),
        None => chart.coords(&p.point).map(|(_, s)| (s, None)),
    }
}

/// The pencil line through a singular point must meet the curve there with
/// exactly its multiplicity, and be transversal everywhere else.
fn transversal_at(curve: &CurveSpec, chart: &Chart, p: &CurvePoint, s: Complex64, exact: Option<&QI>) -> bool {
    let m = multiplicity_at(curve, &p.point, p.exact.as_ref());
    match (exact, p.exact.as_ref().and_then(|e| chart.coords_exact(e))) {
        (Some(sq), Some((rq, _))) => {
            let g = chart.h.eval_inner(sq);
            let lin = Poly::new(alloc::vec![rq.neg(), QI::one()]);
            let mut q = g;
            for _ in 0..m {
                let (quo, rem) = q.div_rem(&lin);
                if !rem.is_zero_poly() {
                    return false;
                }
                q = quo;
            }
            !q.eval(&rq).is_zero() && (q.deg() == 0 || q.gcd(&q.derivative()).deg() == 0)
        }
        _ => {
            let Some((r, _)) = chart.coords(&p.point) else { return false };
            let Ok(z) = roots(&chart.restrict(s), 1e-12) else { return false };
            let scale = 1.0 + z.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let near = z.iter().filter(|&&x| (x - r).norm() < 1e-3 * scale).count();
            let rest: Vec<Complex64> = z.iter().copied().filter(|&x| (x - r).norm() >= 1e-3 * scale).collect();
            near == m && (rest.len() < 2 || min_separation(&rest) > 1e-6 * scale)
        }
    }
}

/// Accepts the frame when every multiple root of `D` is a line through
/// exactly one singular point and every singular point has its own line.
fn validate(curve: &CurveSpec, chart: &Chart, singular: &[CurvePoint]) -> Result<Option<Vec<DiscRoot>>, LocalError> {
    let raw = disc_roots(chart)?;
    let locs: Vec<Complex64> = raw.iter().map(|r| r.0).collect();
    let scale = 1.0 + locs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if locs.len() > 1 && min_separation(&locs) < 1e-6 * scale {
        return Ok(None);
    }
    let mut roots: Vec<DiscRoot> = raw.iter().map(|&(s, multiplicity)| DiscRoot { s, multiplicity, singular: None }).collect();
    for (i, p) in singular.iter().enumerate() {
        let Some((s, exact)) = singular_s(chart, p) else { return Ok(None) };
        if !transversal_at(curve, chart, p, s, exact.as_ref()) {
            return Ok(None);
        }
        if let Some(e) = &exact {
            // the line through the point must be a multiple root of D
            let d1 = chart.disc.eval(e);
            let dd = chart.disc.derivative().eval(e);
            if !d1.is_zero() || !dd.is_zero() {
                return Ok(None);
            }
        }
        let Some(k) = (0..roots.len()).min_by(|&a, &b| (roots[a].s - s).norm().partial_cmp(&(roots[b].s - s).norm()).unwrap()) else {
            return Ok(None);
        };
        if (roots[k].s - s).norm() > 1e-6 * scale || roots[k].singular.is_some() || roots[k].multiplicity < 2 {
            return Ok(None);
        }
        roots[k].singular = Some(i);
        roots[k].s = s;
    }
    // tangency roots are simple solutions of H = H_r = 0; polish there
    let (h, hr) = (NumBiPoly::from_exact(&chart.h), NumBiPoly::from_exact(&chart.h.derivative()));
    for root in roots.iter_mut().filter(|r| r.singular.is_none()) {
        let Some(r0) = closest_pair_mean(&chart.restrict(root.s)) else { return Ok(None) };
        let (_, s) = newton2(&h, &hr, r0, root.s, 50);
        if (s - root.s).norm() > 1e-3 * scale {
            return Ok(None);
        }
        if !simple_tangency(chart, s)? {
            return Ok(None);
        }
        root.s = s;
    }
    if roots.iter().map(|r| r.multiplicity).sum::<usize>() != chart.disc.deg() {
        return Ok(None);
    }
    if roots.iter().any(|r| r.singular.is_none() && r.multiplicity != 1) {
        return Ok(None);
    }
    Ok(Some(roots))
}

/// The line `s` meets the curve in exactly one double point and otherwise
/// simple points.
fn simple_tangency(chart: &Chart, s: Complex64) -> Result<bool, LocalError> {
    let z = match roots(&chart.restrict(s), 1e-12) {
        Ok(z) => z,
        Err(crate::algebra::AlgebraError::RootsNotConverged { partial }) => partial,
        Err(e) => return Err(e.into()),
    };
    let scale = 1.0 + z.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(cluster_roots(&z, 1e-5).iter().filter(|c| c.1 == 2).count() == 1 && min_separation(&z) < 1e-5 * scale)
}

/// Midpoint of the two closest roots.
fn closest_pair_mean(p: &UniPoly) -> Option<Complex64> {
    let z = match roots(p, 1e-12) {
        Ok(z) => z,
        Err(crate::algebra::AlgebraError::RootsNotConverged { partial }) => partial,
        Err(_) => return None,
    };
    let mut best: Option<(f64, Complex64)> = None;
    for i in 0..z.len() {
        for j in 0..i {
            let d = (z[i] - z[j]).norm();
            if best.is_none_or(|b| d < b.0) {
                best = Some((d, (z[i] + z[j]) / 2.0));
            }
        }
    }
    best.map(|b| b.1)
}

/// Normalized root separation of the fiber over `s`.
fn fiber_separation(chart: &Chart, s: Complex64) -> f64 {
    let p = chart.restrict(s);
    let z = match roots(&p, 1e-12) {
        Ok(z) => z,
        Err(_) => return 0.0,
    };
    let scale = 1.0 + z.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if z.len() < 2 {
        return 1.0;
    }
    min_separation(&z) / scale
}

/// Petal radius of each branch point as seen from `s0`.
pub fn petal_radii(points: &[Complex64], s0: Complex64) -> Vec<f64> {
    (0..points.len())
        .map(|j| {
            let d = (0..points.len()).filter(|&k| k != j).map(|k| (points[j] - points[k]).norm()).fold(f64::INFINITY, f64::min);
            d.min((points[j] - s0).norm()) / 3.0
        })
        .collect()
}

/// Distance from `c` to the segment `[a, b]` and the parameter of the
/// closest point.
fn segment_distance(a: Complex64, b: Complex64, c: Complex64) -> (f64, f64) {
    let ab = b - a;
    let t = if ab.norm_sqr() == 0.0 { 0.0 } else { (((c - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0) };
    ((a + ab * t - c).norm(), t)
}

fn obstructions(points: &[Complex64], s0: Complex64) -> usize {
    let rho = petal_radii(points, s0);
    let mut n = 0;
    for j in 0..points.len() {
        for k in 0..points.len() {
            if k != j && segment_distance(s0, points[j], points[k]).0 < OBSTACLE * rho[k] * 1.2 {
                n += 1;
            }
        }
    }
    n
}

/// Deterministic generic pencil for the curve. `singular` must list all
/// singular points.
pub fn choose_pencil(curve: &CurveSpec, seed: u64, singular: &[CurvePoint]) -> Result<PencilConfig, PencilError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejected = 0;
    for _ in 0..MAX_ATTEMPTS {
        let chart = match Chart::random(curve, &mut rng) {
            Ok(c) => c,
            Err(ChartError::ZeroDiscriminant) => return Err(LocalError::NonReduced.into()),
            Err(_) => {
                rejected += 1;
                continue;
            }
        };
        let Some(roots) = validate(curve, &chart, singular)? else {
            rejected += 1;
            continue;
        };
        let sqf_degree = chart.disc.squarefree_part().deg();
        let locs: Vec<Complex64> = roots.iter().map(|r| r.s).collect();
        let n = locs.len().max(1) as f64;
        let center = locs.iter().sum::<Complex64>() / n;
        let radius = locs.iter().map(|z| (z - center).norm()).fold(1.0, f64::max);
        let mut best: Option<(usize, f64, Complex64)> = None;
        for _ in 0..S0_CANDIDATES {
            let s0 = center + Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * radius;
            let near = locs.iter().map(|z| (z - s0).norm()).fold(f64::INFINITY, f64::min) / radius;
            let score = fiber_separation(&chart, s0).min(near);
            let obs = obstructions(&locs, s0);
            let better = match best {
                None => true,
                Some((bo, bs, _)) => obs < bo || (obs == bo && score > bs),
            };
            if better {
                best = Some((obs, score, s0));
            }
        }
        let (_, score, s0) = best.expect("at least one candidate");
        if score <= 1e-8 {
            rejected += 1;
            continue;
        }
        return Ok(PencilConfig { seed, chart, s0, roots, sqf_degree, rejected });
    }
    Err(PencilError::Degenerate(MAX_ATTEMPTS))
}

/// Classifies the roots of the discriminant. `branches[i]` are the
/// branches at `singular[i]`.
pub fn branch_points(pencil: &PencilConfig, singular: &[CurvePoint], branches: &[Vec<PuiseuxBranch>]) -> Result<Vec<BranchPoint>, PencilError> {
    let mut out = Vec::with_capacity(pencil.roots.len());
    for root in &pencil.roots {
        let kind = match root.singular {
            Some(i) => {
                let point = singular[i].point;
                let data: Vec<(u32, u32)> = branches.get(i).map(|b| b.iter().map(|b| (b.r, b.s)).collect()).unwrap_or_default();
                if data.iter().any(|&(r, _)| r >= 2) {
                    BranchKind::MultipleBranchLine { point, branches: data }
                } else {
                    BranchKind::SingularPointLine { point }
                }
            }
            None => {
                if !simple_tangency(&pencil.chart, root.s)? {
                    return Err(PencilError::Unclassifiable(root.s));
                }
                BranchKind::DualTangent
            }
        };
        out.push(BranchPoint { s: root.s, kind, multiplicity: root.multiplicity });
    }
    Ok(out)
}

/// Closed polyline from `s0` around one branch point and back.
#[derive(Clone, Debug)]
pub struct LoopPath {
    pub target: usize,
    pub points: Vec<Complex64>,
    /// Radius of the circle around the target.
    pub radius: f64,
    /// Obstacles bypassed by the spoke.
    pub detours: usize,
    /// Index of the first and last vertex of the circle.
    pub circle: (usize, usize),
}

impl LoopPath {
    /// Closest approach to `z`.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.points.windows(2).map(|w| segment_distance(w[0], w[1], z).0).fold(f64::INFINITY, f64::min)
    }
}

/// Winding number of a closed polyline about `z`.
pub fn winding_number(points: &[Complex64], z: Complex64) -> i64 {
    let mut total = 0.0;
    for w in points.windows(2) {
        total += ((w[1] - z) / (w[0] - z)).arg();
    }
    libm::round(total / (2.0 * PI)) as i64
}

/// Points on the arc of the circle `(c, rad)` from angle `a0` to `a1`
/// (signed sweep), excluding the start.
fn arc(c: Complex64, rad: f64, a0: f64, sweep: f64, out: &mut Vec<Complex64>) {
    let n = libm::ceil((sweep.abs() / (2.0 * PI)) * CIRCLE_VERTICES as f64).max(2.0) as usize;
    for k in 1..=n {
        out.push(c + Complex64::from_polar(rad, a0 + sweep * k as f64 / n as f64));
    }
}

/// Spoke from `a` to `b`, detouring around obstacle disks on the side the
/// straight segment passes them.
fn spoke(a: Complex64, b: Complex64, disks: &[(Complex64, f64)]) -> (Vec<Complex64>, usize) {
    let mut hits: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    let ab = b - a;
    let len = ab.norm();
    let u = ab / len;
    for &(c, rad) in disks {
        // along-track and cross-track coordinates of the center
        let w = (c - a) * u.conj();
        if w.im.abs() >= rad || w.re <= 0.0 || w.re >= len {
            continue;
        }
        let half = libm::sqrt(rad * rad - w.im * w.im);
        hits.push((w.re - half, w.re + half, c, rad));
    }
    hits.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut out = alloc::vec![a];
    for &(t_in, t_out, c, rad) in &hits {
        let p_in = a + u * t_in;
        let p_out = a + u * t_out;
        out.push(p_in);
        let a0 = (p_in - c).arg();
        let a1 = (p_out - c).arg();
        // the arc must stay on the side of the segment, away from the
        // direction back toward `a`
        let back = (a - c).arg();
        let mut sweep = a1 - a0;
        while sweep <= -PI {
            sweep += 2.0 * PI;
        }
        while sweep > PI {
            sweep -= 2.0 * PI;
        }
        let rel = |x: f64| {
            let r = libm::fmod(x - a0, 2.0 * PI);
            if r < 0.0 { r + 2.0 * PI } else { r }
        };
        let contains_back = if sweep >= 0.0 { rel(back) < sweep } else { rel(back) > 2.0 * PI + sweep };
        if contains_back {
            sweep = if sweep >= 0.0 { sweep - 2.0 * PI } else { sweep + 2.0 * PI };
        }
        arc(c, rad, a0, sweep, &mut out);
        out.pop();
        out.push(p_out);
    }
    out.push(b);
    (out, hits.len())
}

/// One petal per branch point, ordered counterclockwise by the direction
/// of its spoke as seen from `s0`.
pub fn build_loops(points: &[Complex64], s0: Complex64) -> Result<Vec<LoopPath>, PencilError> {
    let rho = petal_radii(points, s0);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| (points[a] - s0).arg().partial_cmp(&(points[b] - s0).arg()).unwrap());
    let mut out = Vec::with_capacity(points.len());
    for j in order {
        let p = points[j];
        if rho[j].is_nan() || rho[j] <= 0.0 {
            return Err(PencilError::NoClearance(j));
        }
        let dir = (s0 - p) / (s0 - p).norm();
        let e = p + dir * rho[j];
        let disks: Vec<(Complex64, f64)> = (0..points.len()).filter(|&k| k != j).map(|k| (points[k], OBSTACLE * rho[k])).collect();
        let (mut path, detours) = spoke(s0, e, &disks);
        let start = path.len() - 1;
        arc(p, rho[j], dir.arg(), 2.0 * PI, &mut path);
        *path.last_mut().unwrap() = e;
        let end = path.len() - 1;
        let (back, _) = spoke(s0, e, &disks);
        path.extend(back.iter().rev().skip(1));
        let lp = LoopPath { target: j, points: path, radius: rho[j], detours, circle: (start, end) };
        for (k, &q) in points.iter().enumerate() {
            if k != j && lp.distance_to(q) < rho[k] {
                return Err(PencilError::NoClearance(j));
            }
        }
        out.push(lp);
    }
    Ok(out)
}

/// `D(s)` evaluated in floating point.
pub fn discriminant_at(pencil: &PencilConfig, s: Complex64) -> Complex64 {
    let d: &Poly<QI> = &pencil.chart.disc;
    d.eval_c64(s)
}
