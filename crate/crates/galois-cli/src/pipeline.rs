//! End-to-end computation of the monodromy group of a curve.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use galois_core::algebra::QI;
use galois_core::curve::{normalize_point, CurveSpec};
use galois_core::localgeom::{
    branches_at, check_r_conditions, component_branches, default_chart, dual_parametrization_check, flex_points_in_chart,
    local_degree_check, multiplicity_at, singular_points_in_chart, CurvePoint, LocalError, PuiseuxBranch, DEFAULT_BUFFER,
};
use galois_core::partitions::{thickest_sym_partition, Partition};
use galois_core::pencil::{branch_points, build_loops, choose_pencil, BranchKind, BranchPoint, LoopPath, PencilConfig, PencilError};
use galois_core::permgroup::{
    check_prop_conditions, evaluate, is_product_of_symmetric, word_for, Perm, PermError, PermGroup, PropReport,
};
use galois_core::tracker::{limit_partition, start_roots, track, word_path, PencilFamily, TrackError, TrackOptions, TrackResult};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};

use crate::report::*;

/// Required ratio between the closest and the runner-up component value
/// when labelling a sheet.
pub const LABEL_RATIO: f64 = 1e6;
/// Smooth points sampled for the dual parametrization check.
pub const DUAL_POINTS: usize = 16;
/// Longest generator word tried for a transposition.
pub const WORD_BUDGET: usize = 12;

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub seed: u64,
    /// Newton residual tolerance for tracking.
    pub tol: f64,
    /// Worker threads for loop tracking; 0 picks the available parallelism.
    pub threads: usize,
    pub timings: bool,
    /// Re-track every loop with twice the polyline samples.
    pub sample_doubling: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { seed: 1, tol: 1e-10, threads: 0, timings: false, sample_doubling: false }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("[local] {0} (hint: check that the curve is reduced, or raise the expansion buffer)")]
    Local(#[from] LocalError),
    #[error("[pencil] {0} (hint: rerun with another --seed)")]
    Pencil(#[from] PencilError),
    #[error("[tracking] {0} (hint: rerun with another --seed or a looser --tol)")]
    Track(#[from] TrackError),
    #[error("[group] {0}")]
    Group(#[from] PermError),
    #[error("[labels] sheet {0} is not clearly on one component (hint: rerun with another --seed)")]
    AmbiguousComponent(usize),
    #[error("[input] the curve has degree {0}; at least 2 is needed for a covering")]
    DegreeTooSmall(u32),
}

impl PipelineError {
    pub fn stage(&self) -> &'static str {
        match self {
            PipelineError::Local(_) => "local",
            PipelineError::Pencil(_) => "pencil",
            PipelineError::Track(_) => "tracking",
            PipelineError::Group(_) => "group",
            PipelineError::AmbiguousComponent(_) => "labels",
            PipelineError::DegreeTooSmall(_) => "input",
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("sheet indices must differ")]
    SameSheet,
    #[error("sheet {0} is out of range 1..={1}")]
    OutOfRange(usize, usize),
    #[error("no such transposition exists: sheets {0} and {1} lie on different components")]
    CrossComponent(usize, usize),
    #[error("sheets {0} and {1} lie on a line; its sheet is fixed by every loop")]
    LineComponent(usize, usize),
    #[error("word search failed: {0}")]
    Word(PermError),
    #[error("re-tracking the loop failed: {0}")]
    Track(String),
}

impl CertificateError {
    /// A finding about the group rather than a usage or runtime problem.
    pub fn is_finding(&self) -> bool {
        matches!(self, CertificateError::CrossComponent(..) | CertificateError::LineComponent(..) | CertificateError::Word(PermError::NotMember))
    }
}

/// A finished run: the report plus what certificates need for re-tracking.
pub struct PipelineRun {
    pub report: PipelineReport,
    pub curve: CurveSpec,
    pub pencil: PencilConfig,
    pub points: Vec<BranchPoint>,
    pub loops: Vec<LoopPath>,
    pub start: Vec<Complex64>,
    pub generators: Vec<Perm>,
    pub labels: Vec<usize>,
    pub track_options: TrackOptions,
}

fn exact_strings(x: &[QI; 3]) -> [String; 3] {
    [x[0].to_string(), x[1].to_string(), x[2].to_string()]
}

fn blocks(p: &Partition) -> Vec<Vec<usize>> {
    p.blocks_1based()
}

fn local_row(kind: &str, b: &PuiseuxBranch, index: usize) -> LocalRow {
    let (local_degree, error) = match local_degree_check(b, 8, 1e-8) {
        Ok(rep) => (
            Some(LocalDegreeSummary { passes: rep.passes(), near_q: rep.near_q, on_fiber: rep.on_fiber, near_section: rep.near_section }),
            None,
        ),
        Err(e) => (None, Some(e.to_string())),
    };
    LocalRow {
        kind: kind.into(),
        point: c3(&b.point),
        exact: b.exact_point.as_ref().map(exact_strings),
        component: b.component + 1,
        branch: index + 1,
        r: b.r,
        s: b.s,
        tangent: c3(&b.tangent),
        local_degree,
        error,
    }
}

/// Singular points with their branches and the local table of singular
/// points and flexes.
pub struct LocalData {
    pub singular: Vec<CurvePoint>,
    pub branches: Vec<Vec<PuiseuxBranch>>,
    pub flexes: Vec<(usize, CurvePoint)>,
    pub rows: Vec<LocalRow>,
    pub all_branches: Vec<PuiseuxBranch>,
}

pub fn local_data(curve: &CurveSpec) -> Result<LocalData, LocalError> {
    let chart = default_chart(curve)?;
    let singular = singular_points_in_chart(curve, &chart)?;
    let branches: Vec<Vec<PuiseuxBranch>> =
        singular.iter().map(|p| branches_at(curve, &p.point, p.exact.as_ref())).collect::<Result<_, _>>()?;
    let flexes = flex_points_in_chart(curve, &chart, &singular)?;
    let mut rows = Vec::new();
    let mut all_branches = Vec::new();
    for bs in &branches {
        for (k, b) in bs.iter().enumerate() {
            rows.push(local_row("singular", b, k));
            all_branches.push(b.clone());
        }
    }
    for (comp, p) in &flexes {
        for (k, b) in component_branches(curve, *comp, &p.point, p.exact.as_ref(), DEFAULT_BUFFER)?.iter().enumerate() {
            rows.push(local_row("flex", b, k));
            all_branches.push(b.clone());
        }
    }
    Ok(LocalData { singular, branches, flexes, rows, all_branches })
}

/// Tracks every loop, `threads` at a time; results keep the loop order.
pub fn track_loops(
    fam: &PencilFamily<'_>,
    loops: &[Vec<Complex64>],
    start: &[Complex64],
    obstacles: &[Complex64],
    opts: &TrackOptions,
    threads: usize,
) -> Result<Vec<TrackResult>, TrackError> {
    let n = loops.len();
    let workers = effective_threads(threads).clamp(1, n.max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<TrackResult, TrackError>>>> = Mutex::new((0..n).map(|_| None).collect());
    std::thread::scope(|sc| {
        for _ in 0..workers {
            sc.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= n {
                    break;
                }
                let res = track(fam, &loops[k], start, obstacles, opts);
                slots.lock().expect("no worker panicked")[k] = Some(res);
            });
        }
    });
    slots.into_inner().expect("no worker panicked").into_iter().map(|r| r.expect("every loop is tracked")).collect()
}

pub fn effective_threads(threads: usize) -> usize {
    if threads > 0 {
        threads
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}

/// Inserts the midpoint of every segment.
pub fn refine(points: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(2 * points.len());
    for w in points.windows(2) {
        out.push(w[0]);
        out.push((w[0] + w[1]) * 0.5);
    }
    out.extend(points.last());
    out
}

fn dual_param_summary(curve: &CurveSpec, pencil: &PencilConfig, opts: &TrackOptions, seed: u64, notes: &mut Vec<String>) -> DualParamSummary {
    let fam = PencilFamily { curve, chart: &pencil.chart };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_d0a1);
    let obstacles = pencil.branch_locations();
    let mut sum = DualParamSummary { points: 0, samples: 0, max_incidence: 0.0, max_tangency: 0.0, max_discriminant: 0.0 };
    if curve.factors().iter().all(|f| f.degree() < 2) {
        return sum;
    }
    let mut attempts = 0;
    while sum.points < DUAL_POINTS && attempts < 20 * DUAL_POINTS {
        attempts += 1;
        let s = pencil.s0 + Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if obstacles.iter().any(|o| (o - s).norm() < 1e-2) {
            continue;
        }
        let Ok(roots) = start_roots(&fam, s, opts) else { continue };
        let r = roots[rng.gen_range(0..roots.len())];
        let x = normalize_point(&pencil.chart.point(r, s));
        let Some(comp) = curve.component_of(&x, LABEL_RATIO) else { continue };
        if curve.is_line(comp) {
            continue;
        }
        let res = component_branches(curve, comp, &x, None, DEFAULT_BUFFER)
            .and_then(|bs| bs.first().cloned().ok_or(LocalError::NotOnCurve))
            .and_then(|b| dual_parametrization_check(curve, &b, 4, 1e-9));
        match res {
            Ok(rep) => {
                sum.points += 1;
                sum.samples += rep.samples;
                sum.max_incidence = sum.max_incidence.max(rep.incidence);
                sum.max_tangency = sum.max_tangency.max(rep.tangency);
                sum.max_discriminant = sum.max_discriminant.max(rep.discriminant);
            }
            Err(e) => notes.push(format!("dual parametrization at s = {s}: {e}")),
        }
    }
    sum
}

fn prop_summary(rep: &PropReport, transpositions: usize) -> PropositionSummary {
    let lemmas = rep
        .lemmas
        .iter()
        .map(|l| LemmaSummary {
            sigma: l.sigma.images_1based(),
            hypotheses_hold: l.hypotheses_hold,
            j_h: blocks(&l.j_h),
            order_h: l.order_h.to_string(),
            conclusion_holds: l.conclusion_holds,
            cycles: l
                .cycles
                .iter()
                .map(|c| CycleReport {
                    cycle: c.cycle.iter().map(|i| i + 1).collect(),
                    partition: Vec::new(),
                    block: c.block.as_ref().map(|b| b.iter().map(|i| i + 1).collect()),
                    invariant: c.invariant,
                    cond_i: c.cond_i,
                    cond_ii: c.cond_ii,
                    cond_iii: c.cond_iii,
                })
                .collect(),
        })
        .collect();
    PropositionSummary {
        transpositions,
        lemmas,
        hypotheses_hold: rep.hypotheses_hold,
        j_g: blocks(&rep.j_g),
        order_g: rep.order_g.to_string(),
        conclusion_holds: rep.conclusion_holds,
        candidate: rep.candidate.as_ref().map(|c| CandidateSummary {
            partition: blocks(&c.partition),
            invariant: c.invariant,
            transitive_on_blocks: c.transitive_on_blocks,
            equals_j_g: c.equals_j_g,
            order_matches: c.order_matches,
            holds: c.holds(),
        }),
        passes: rep.passes(),
    }
}

/// Runs the proposition checker on raw generators: transpositions are
/// detected, every other non-identity generator needs one partition family.
pub fn proposition(
    generators: &[Perm],
    families: &[Vec<Partition>],
    candidate: Option<&Partition>,
) -> Result<PropositionSummary, PermError> {
    let transpositions: Vec<Perm> = generators.iter().filter(|g| g.is_transposition()).cloned().collect();
    let sigmas: Vec<Perm> = generators.iter().filter(|g| !g.is_transposition() && !g.is_identity()).cloned().collect();
    let rep = check_prop_conditions(&transpositions, &sigmas, families, candidate)?;
    let mut sum = prop_summary(&rep, transpositions.len());
    for (lemma, fam) in sum.lemmas.iter_mut().zip(families) {
        for (c, j) in lemma.cycles.iter_mut().zip(fam) {
            c.partition = blocks(j);
        }
    }
    Ok(sum)
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn run_pipeline(curve: &CurveSpec, opts: &PipelineOptions) -> Result<PipelineRun, PipelineError> {
    if curve.degree() < 2 {
        return Err(PipelineError::DegreeTooSmall(curve.degree()));
    }
    let t_total = Instant::now();
    let track_options = TrackOptions { newton_tol: opts.tol, ..TrackOptions::default() };
    let mut notes = Vec::new();

    let t = Instant::now();
    let local = local_data(curve)?;
    let r_report = check_r_conditions(curve, &local.all_branches)?;
    let local_ms = ms(t);

    let t = Instant::now();
    let pencil = choose_pencil(curve, opts.seed, &local.singular)?;
    let points = branch_points(&pencil, &local.singular, &local.branches)?;
    let locations = pencil.branch_locations();
    let loops = build_loops(&locations, pencil.s0)?;
    let fam = PencilFamily { curve, chart: &pencil.chart };
    let start = start_roots(&fam, pencil.s0, &track_options)?;
    let labels: Vec<usize> = start
        .iter()
        .enumerate()
        .map(|(i, &r)| curve.component_of(&pencil.chart.point(r, pencil.s0), LABEL_RATIO).ok_or(PipelineError::AmbiguousComponent(i + 1)))
        .collect::<Result<_, _>>()?;
    let pencil_ms = ms(t);

    let t = Instant::now();
    let paths: Vec<Vec<Complex64>> = loops.iter().map(|l| l.points.clone()).collect();
    let results = track_loops(&fam, &paths, &start, &locations, &track_options, opts.threads)?;
    let generators: Vec<Perm> = results.iter().map(|r| r.permutation.clone()).collect();
    let sample_doubling = if opts.sample_doubling {
        let fine: Vec<Vec<Complex64>> = paths.iter().map(|p| refine(p)).collect();
        let again = track_loops(&fam, &fine, &start, &locations, &track_options, opts.threads)?;
        Some(again.iter().zip(&results).all(|(a, b)| a.permutation == b.permutation))
    } else {
        None
    };
    let tracking_ms = ms(t);

    let t = Instant::now();
    let d = start.len();
    let group = PermGroup::generate(d, &generators)?;
    let components = Partition::from_labels(&labels);
    let line_sheets: Vec<usize> = (0..d).filter(|&i| curve.is_line(labels[i])).collect();
    let line_sheets_fixed = generators.iter().all(|g| line_sheets.iter().all(|&i| g.apply(i) == i));
    let verdict = line_sheets_fixed && is_product_of_symmetric(&group, &components);
    let j_g = thickest_sym_partition(&group);

    let kind_of = |l: &LoopPath| &points[l.target].kind;
    let word: Vec<i32> = (1..=generators.len() as i32).collect();
    let petal_product_identity = generators.is_empty() || evaluate(&generators, d, &word)?.is_identity();
    let mut singular_lines_trivial = true;
    let mut dual_tangents_transpositions = true;
    let mut cycle_types_match_branches = true;
    for (l, g) in loops.iter().zip(&generators) {
        match kind_of(l) {
            BranchKind::DualTangent => dual_tangents_transpositions &= g.is_transposition(),
            BranchKind::SingularPointLine { .. } => singular_lines_trivial &= g.is_identity(),
            BranchKind::MultipleBranchLine { branches, .. } => {
                let mut expected: Vec<usize> = branches.iter().filter(|b| b.0 >= 2).map(|b| b.0 as usize).collect();
                expected.sort_unstable();
                cycle_types_match_branches &= g.cycle_type() == expected;
            }
        }
    }
    let checks = Checks {
        line_sheets_fixed,
        partition_invariant: generators.iter().all(|g| components.invariant_under(g)),
        petal_product_identity,
        singular_lines_trivial,
        dual_tangents_transpositions,
        cycle_types_match_branches,
        labels_stable: true,
        j_g_matches_components: !verdict || j_g == components,
        sample_doubling,
    };

    // one partition family per non-transposition generator, from the
    // sheets that merge at the singular point of its line
    let mut families = Vec::new();
    for (l, g) in loops.iter().zip(&generators) {
        if g.is_transposition() || g.is_identity() {
            continue;
        }
        let cycles = g.cycles().len();
        let fallback = || Partition::new(d, g.cycles().into_iter().chain((0..d).filter(|&i| g.apply(i) == i).map(|i| vec![i])).collect())
            .expect("cycles partition the sheets");
        let part = match (kind_of(l), pencil.roots[l.target].singular) {
            (BranchKind::MultipleBranchLine { .. }, Some(k)) => {
                let p = &local.singular[k];
                let mult = multiplicity_at(curve, &p.point, p.exact.as_ref());
                let limit = pencil.chart.coords(&p.point).map(|c| c.0);
                match limit.map(|lim| limit_partition(&fam, l, pencil.roots[l.target].s, lim, mult, &start, &locations, &track_options)) {
                    Some(Ok(part)) => part,
                    Some(Err(e)) => {
                        notes.push(format!("limit partition for loop {}: {e}", l.target + 1));
                        fallback()
                    }
                    None => fallback(),
                }
            }
            _ => fallback(),
        };
        families.push(vec![part; cycles]);
    }
    let proposition = proposition(&generators, &families, Some(&components))?;
    let dual = dual_param_summary(curve, &pencil, &track_options, opts.seed, &mut notes);
    let group_ms = ms(t);

    let report = PipelineReport {
        schema_version: SCHEMA_VERSION.into(),
        seed: opts.seed,
        tolerance: opts.tol,
        curve: CurveSummary {
            degree: curve.degree(),
            degrees: curve.degrees(),
            components: curve.num_components(),
            lines: (0..curve.num_components()).filter(|&i| curve.is_line(i)).map(|i| i + 1).collect(),
        },
        pencil: PencilReport {
            base_point: exact_strings(&pencil.chart.q),
            p0: exact_strings(&pencil.chart.p0),
            p1: exact_strings(&pencil.chart.p1),
            s0: c2(pencil.s0),
            discriminant_degree: pencil.chart.disc.deg(),
            distinct_roots: pencil.sqf_degree,
            rejected_frames: pencil.rejected,
        },
        branch_points: points
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let (point, branches) = match &p.kind {
                    BranchKind::DualTangent => (None, Vec::new()),
                    BranchKind::MultipleBranchLine { point, branches } => (Some(c3(point)), branches.iter().map(|b| [b.0, b.1]).collect()),
                    BranchKind::SingularPointLine { point } => (Some(c3(point)), Vec::new()),
                };
                BranchPointReport { index: k + 1, s: c2(p.s), kind: p.kind.name().into(), multiplicity: p.multiplicity, point, branches }
            })
            .collect(),
        loops: loops
            .iter()
            .map(|l| LoopReport { target: l.target + 1, radius: l.radius, detours: l.detours, points: l.points.iter().map(|&z| c2(z)).collect() })
            .collect(),
        start_fiber: start.iter().map(|&z| c2(z)).collect(),
        sheet_components: labels.iter().map(|c| c + 1).collect(),
        component_partition: blocks(&components),
        generators: loops
            .iter()
            .zip(&results)
            .enumerate()
            .map(|(k, (l, r))| GeneratorReport {
                loop_index: k + 1,
                branch_point: l.target + 1,
                kind: kind_of(l).name().into(),
                permutation: r.permutation.images_1based(),
                cycle_type: r.permutation.cycle_type(),
                steps: r.steps,
                rejected_steps: r.rejected_steps,
            })
            .collect(),
        group: GroupReport { order: group.order().to_string(), orbits: blocks(&group.orbits()), j_g: blocks(&j_g) },
        checks: checks.clone(),
        local: local.rows,
        dual_parametrization: dual,
        conditions: Conditions {
            r_conditions: RConditions {
                r0: r_report.r0,
                r1: r_report.r1,
                r2: r_report.r2,
                r3: checks.dual_tangents_transpositions,
                dual_lines: r_report.dual_lines.iter().map(|l| c3(&l.coords)).collect(),
            },
            proposition,
            notes,
        },
        verdict,
        timings: opts.timings.then(|| Timings { local_ms, pencil_ms, tracking_ms, group_ms, total_ms: ms(t_total) }),
    };
    Ok(PipelineRun { report, curve: curve.clone(), pencil, points, loops, start, generators, labels, track_options })
}

impl PipelineRun {
    pub fn family(&self) -> PencilFamily<'_> {
        PencilFamily { curve: &self.curve, chart: &self.pencil.chart }
    }

    /// A loop realizing the transposition of sheets `i` and `j` (1-based),
    /// confirmed by re-tracking the concatenated polyline.
    pub fn certificate(&self, i: usize, j: usize) -> Result<MonodromyCertificate, CertificateError> {
        let d = self.start.len();
        for k in [i, j] {
            if k == 0 || k > d {
                return Err(CertificateError::OutOfRange(k, d));
            }
        }
        if i == j {
            return Err(CertificateError::SameSheet);
        }
        let (ci, cj) = (self.labels[i - 1], self.labels[j - 1]);
        if ci != cj {
            return Err(CertificateError::CrossComponent(i, j));
        }
        if self.curve.is_line(ci) {
            return Err(CertificateError::LineComponent(i, j));
        }
        let target = Perm::transposition(d, i - 1, j - 1);
        let group = PermGroup::generate(d, &self.generators).map_err(CertificateError::Word)?;
        let word = word_for(&group, &target, WORD_BUDGET).map_err(CertificateError::Word)?;
        let polyline = word_path(&self.loops, &word).map_err(|e| CertificateError::Track(e.to_string()))?;
        let res = track(&self.family(), &polyline, &self.start, &self.pencil.branch_locations(), &self.track_options)
            .map_err(|e| CertificateError::Track(e.to_string()))?;
        Ok(MonodromyCertificate {
            schema_version: SCHEMA_VERSION.into(),
            seed: self.report.seed,
            pair: [i, j],
            component: ci + 1,
            validated: res.permutation == target,
            word,
            polyline: polyline.iter().map(|&z| c2(z)).collect(),
            permutation: res.permutation.images_1based(),
        })
    }
}
