//! Continuation of the roots of `G(·, s)` along polylines in the `s` plane,
//! and the resulting monodromy permutations.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{roots, AlgebraError, UniPoly};
use crate::chart::Chart;
use crate::curve::CurveSpec;
use crate::partitions::Partition;
use crate::pencil::LoopPath;
use crate::permgroup::Perm;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrackError {
    #[error("near-collision on path at s = {0}; loop clearance too small")]
    NearCollision(Complex64),
    #[error("matching failure: end roots do not match the start roots")]
    MatchingFailure,
    #[error("root {root} changed component from {from} to {to} at s = {s}")]
    LabelFlip { root: usize, from: usize, to: usize, s: Complex64 },
    #[error("root {0} has no unambiguous component at the start")]
    AmbiguousLabel(usize),
    #[error("start fiber has {found} distinct roots, expected {expected}")]
    StartFiber { expected: usize, found: usize },
    #[error("invalid loop letter {0}")]
    BadLetter(i32),
    #[error("limit fiber does not show the expected cluster of {expected} roots (found {found})")]
    LimitCluster { expected: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug)]
pub struct TrackOptions {
    /// Bound on `|G| / Σ|terms of G|` at accepted roots.
    pub newton_tol: f64,
    /// Cap on a step in `s`, also capped by half the distance to the
    /// nearest obstacle.
    pub max_step: f64,
    pub initial_step: f64,
    pub min_step: f64,
    /// Two roots closer than this many `newton_tol` (relative) abort the step.
    pub min_root_sep_factor: f64,
    pub max_newton_iters: usize,
    /// Steps between component label checks.
    pub label_check_every: usize,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            newton_tol: 1e-10,
            max_step: 0.5,
            initial_step: 1e-2,
            min_step: 1e-12,
            min_root_sep_factor: 1e3,
            max_newton_iters: 20,
            label_check_every: 16,
        }
    }
}

/// A one-parameter family of univariate polynomials `G(·, s)` of fixed degree.
pub trait RootFamily: Sync {
    fn degree(&self) -> usize;
    fn restrict(&self, s: Complex64) -> UniPoly;
    /// `G`, `∂G/∂r`, `∂G/∂s`.
    fn eval(&self, r: Complex64, s: Complex64) -> (Complex64, Complex64, Complex64);
    /// Natural size of `G(r, s)`, for relative residuals.
    fn scale(&self, r: Complex64, s: Complex64) -> f64;
    /// Label of the root, if it is clearly distinguished: the smallest label
    /// value must beat the runner-up by `ratio`.
    fn label(&self, _r: Complex64, _s: Complex64, _ratio: f64) -> Option<usize> {
        Some(0)
    }
}

/// The pencil of lines of a chart, labelled by curve components.
pub struct PencilFamily<'a> {
    pub curve: &'a CurveSpec,
    pub chart: &'a Chart,
}

impl RootFamily for PencilFamily<'_> {
    fn degree(&self) -> usize {
        self.chart.degree()
    }
    fn restrict(&self, s: Complex64) -> UniPoly {
        self.chart.restrict(s)
    }
    fn eval(&self, r: Complex64, s: Complex64) -> (Complex64, Complex64, Complex64) {
        self.chart.eval_with_partials(r, s)
    }
    fn scale(&self, r: Complex64, s: Complex64) -> f64 {
        self.chart.abs_eval(r, s)
    }
    fn label(&self, r: Complex64, s: Complex64, ratio: f64) -> Option<usize> {
        self.curve.component_of(&self.chart.point(r, s), ratio)
    }
}

/// Fractions of the remaining distance to the target line at which
/// [`limit_partition`] checks the sheet cluster.
const LIMIT_STAGES: [f64; 6] = [0.3, 0.1, 0.03, 0.01, 3e-3, 1e-3];

#[derive(Clone, Debug)]
pub struct TrackResult {
    /// Root `i` at the start ends at start root `permutation(i)`.
    pub permutation: Perm,
    pub end_roots: Vec<Complex64>,
    pub steps: usize,
    pub rejected_steps: usize,
    pub min_separation: f64,
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

fn newton<F: RootFamily + ?Sized>(fam: &F, mut r: Complex64, s: Complex64, opts: &TrackOptions) -> Option<(Complex64, usize)> {
    for it in 0..opts.max_newton_iters {
        let (g, gr, _) = fam.eval(r, s);
        if gr.norm() == 0.0 {
            return None;
        }
        let dr = g / gr;
        r -= dr;
        if !r.is_finite() {
            return None;
        }
        if dr.norm() <= 1e-13 * (1.0 + r.norm()) {
            let (g, _, _) = fam.eval(r, s);
            return (g.norm() <= opts.newton_tol * fam.scale(r, s)).then_some((r, it + 1));
        }
    }
    let (g, _, _) = fam.eval(r, s);
    (g.norm() <= opts.newton_tol * fam.scale(r, s)).then_some((r, opts.max_newton_iters))
}

/// Polished, pairwise distinct roots of `G(·, s)`.
pub fn start_roots<F: RootFamily + ?Sized>(fam: &F, s: Complex64, opts: &TrackOptions) -> Result<Vec<Complex64>, TrackError> {
    let p = fam.restrict(s);
    let z = roots(&p, 1e-13)?;
    let mut out = Vec::with_capacity(z.len());
    for r in z {
        out.push(newton(fam, r, s, opts).map(|x| x.0).unwrap_or(r));
    }
    let scale = 1.0 + out.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if out.len() != fam.degree() || (out.len() > 1 && min_separation(&out) <= opts.min_root_sep_factor * opts.newton_tol * scale) {
        return Err(TrackError::StartFiber { expected: fam.degree(), found: out.len() });
    }
    Ok(out)
}

/// One predictor-corrector step of all roots from `s` to `s1`.
fn step<F: RootFamily + ?Sized>(fam: &F, roots: &[Complex64], s: Complex64, s1: Complex64, opts: &TrackOptions) -> Option<(Vec<Complex64>, usize)> {
    let ds = s1 - s;
    let mut out = Vec::with_capacity(roots.len());
    let mut worst = 0;
    for (i, &r) in roots.iter().enumerate() {
        let (_, gr, gs) = fam.eval(r, s);
        if gr.norm() == 0.0 {
            return None;
        }
        let pred = r - gs / gr * ds;
        let (r1, its) = newton(fam, pred, s1, opts)?;
        let near = roots.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, z)| (z - r).norm()).fold(f64::INFINITY, f64::min);
        if (r1 - pred).norm() >= 0.25 * near || (r1 - r).norm() >= 0.5 * near {
            return None;
        }
        worst = worst.max(its);
        out.push(r1);
    }
    let scale = 1.0 + out.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if out.len() > 1 && min_separation(&out) <= opts.min_root_sep_factor * opts.newton_tol * scale {
        return None;
    }
    Some((out, worst))
}

/// Tracks the roots `start` of `G(·, path[0])` along a closed polyline.
/// `obstacles` are the points where roots may collide.
pub fn track<F: RootFamily + ?Sized>(fam: &F, path: &[Complex64], start: &[Complex64], obstacles: &[Complex64], opts: &TrackOptions) -> Result<TrackResult, TrackError> {
    let mut res = follow(fam, path, start, obstacles, opts)?;
    res.permutation = match_roots(start, &res.end_roots)?;
    Ok(res)
}

/// Tracks along an open polyline; the permutation is left as the identity.
pub fn follow<F: RootFamily + ?Sized>(fam: &F, path: &[Complex64], start: &[Complex64], obstacles: &[Complex64], opts: &TrackOptions) -> Result<TrackResult, TrackError> {
    let d = start.len();
    let mut labels = Vec::with_capacity(d);
    let s_start = path.first().copied().unwrap_or_default();
    for (i, &r) in start.iter().enumerate() {
        labels.push(fam.label(r, s_start, 1e6).ok_or(TrackError::AmbiguousLabel(i))?);
    }
    let mut roots = start.to_vec();
    let mut res = TrackResult { permutation: Perm::identity(d), end_roots: Vec::new(), steps: 0, rejected_steps: 0, min_separation: min_separation(start) };
    let mut h = opts.initial_step;
    let mut easy = 0;
    let check_labels = |roots: &[Complex64], s: Complex64| -> Result<(), TrackError> {
        for (i, &r) in roots.iter().enumerate() {
            if let Some(k) = fam.label(r, s, 10.0) {
                if k != labels[i] {
                    return Err(TrackError::LabelFlip { root: i, from: labels[i], to: k, s });
                }
            }
        }
        Ok(())
    };
    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        let mut t = 0.0;
        while t < len {
            let s = a + (b - a) * (t / len);
            let clear = obstacles.iter().map(|o| (o - s).norm()).fold(f64::INFINITY, f64::min);
            let hh = h.min(opts.max_step).min(0.5 * clear).min(len - t);
            let t1 = if hh >= len - t { len } else { t + hh };
            let s1 = if t1 == len { b } else { a + (b - a) * (t1 / len) };
            match step(fam, &roots, s, s1, opts) {
                Some((next, its)) => {
                    roots = next;
                    t = t1;
                    res.steps += 1;
                    res.min_separation = res.min_separation.min(min_separation(&roots));
                    if its <= 3 {
                        easy += 1;
                        if easy >= 3 {
                            h *= 2.0;
                            easy = 0;
                        }
                    } else {
                        easy = 0;
                    }
                    if res.steps.is_multiple_of(opts.label_check_every.max(1)) {
                        check_labels(&roots, s1)?;
                    }
                }
                None => {
                    res.rejected_steps += 1;
                    easy = 0;
                    h = hh / 2.0;
                    if h < opts.min_step {
                        return Err(TrackError::NearCollision(s));
                    }
                }
            }
        }
    }
    let s_end = path.last().copied().unwrap_or_default();
    check_labels(&roots, s_end)?;
    res.end_roots = roots;
    Ok(res)
}

/// `σ(i) = j` when the root tracked from `start[i]` ends at `start[j]`.
fn match_roots(start: &[Complex64], end: &[Complex64]) -> Result<Perm, TrackError> {
    let tol = 0.25 * min_separation(start);
    let mut images = Vec::with_capacity(end.len());
    for e in end {
        let (j, dist) = start.iter().enumerate().map(|(j, z)| (j, (z - e).norm())).fold((usize::MAX, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        if dist >= tol {
            return Err(TrackError::MatchingFailure);
        }
        images.push(j);
    }
    Perm::from_images(&images).map_err(|_| TrackError::MatchingFailure)
}

/// One permutation per loop, each tracked from the same start roots.
pub fn monodromy_generators<F: RootFamily + ?Sized>(fam: &F, loops: &[LoopPath], start: &[Complex64], obstacles: &[Complex64], opts: &TrackOptions) -> Result<Vec<TrackResult>, TrackError> {
    loops.iter().map(|l| track(fam, &l.points, start, obstacles, opts)).collect()
}

/// Polyline of the loop product read left to right; negative letters run
/// the loop backwards.
pub fn word_path(loops: &[LoopPath], word: &[i32]) -> Result<Vec<Complex64>, TrackError> {
    let mut path: Vec<Complex64> = Vec::new();
    for &w in word {
        let k = w.unsigned_abs() as usize;
        if w == 0 || k > loops.len() {
            return Err(TrackError::BadLetter(w));
        }
        let pts = &loops[k - 1].points;
        let skip = usize::from(!path.is_empty());
        if w > 0 {
            path.extend(pts.iter().skip(skip));
        } else {
            path.extend(pts.iter().rev().skip(skip));
        }
    }
    Ok(path)
}

/// Re-tracks the concatenated loops of a word and compares with `expected`.
pub fn validate_word<F: RootFamily + ?Sized>(fam: &F, loops: &[LoopPath], word: &[i32], expected: &Perm, start: &[Complex64], obstacles: &[Complex64], opts: &TrackOptions) -> Result<bool, TrackError> {
    if word.is_empty() {
        return Ok(expected.is_identity());
    }
    let path = word_path(loops, word)?;
    Ok(track(fam, &path, start, obstacles, opts)?.permutation == *expected)
}

/// Groups the sheets by their limit on the line `target`: the roots that
/// converge to `limit` (a root of multiplicity `mult` of `G(·, target)`)
/// form one block, every other sheet is a singleton. The sheets are
/// followed along the loop's spoke and then toward the target in
/// geometric stages, stopping as soon as the cluster is unambiguous.
#[allow(clippy::too_many_arguments)]
pub fn limit_partition<F: RootFamily + ?Sized>(
    fam: &F,
    lp: &LoopPath,
    target: Complex64,
    limit: Complex64,
    mult: usize,
    start: &[Complex64],
    obstacles: &[Complex64],
    opts: &TrackOptions,
) -> Result<Partition, TrackError> {
    let e = lp.points[lp.circle.0];
    let others: Vec<Complex64> = obstacles.iter().copied().filter(|o| (o - target).norm() > 0.0).collect();
    // distance from the limit to the nearest root outside the cluster
    let fiber = roots(&fam.restrict(target), 1e-13)?;
    let mut dist: Vec<f64> = fiber.iter().map(|z| (z - limit).norm()).collect();
    dist.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let far = dist.get(mult).copied().unwrap_or(f64::INFINITY);

    let mut res = follow(fam, &lp.points[..=lp.circle.0], start, &others, opts)?;
    let mut at = e;
    let mut near: Vec<usize> = Vec::new();
    for f in LIMIT_STAGES {
        let next = target + (e - target) * f;
        res = follow(fam, &[at, next], &res.end_roots, &others, opts)?;
        at = next;
        let d: Vec<f64> = res.end_roots.iter().map(|z| (z - limit).norm()).collect();
        near = (0..d.len()).filter(|&i| d[i] < 0.5 * far).collect();
        if near.len() == mult && near.iter().all(|&i| d[i] < 0.1 * far) {
            break;
        }
    }
    if near.len() != mult {
        return Err(TrackError::LimitCluster { expected: mult, found: near.len() });
    }
    let mut blocks: Vec<Vec<usize>> = alloc::vec![near.clone()];
    blocks.extend((0..start.len()).filter(|i| !near.contains(i)).map(|i| alloc::vec![i]));
    Ok(Partition::new(start.len(), blocks).expect("blocks cover the sheets"))
}
