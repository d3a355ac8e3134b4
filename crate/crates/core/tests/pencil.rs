mod common;

use common::*;
use galois_core::algebra::QI;
use galois_core::chart::{Chart, ChartError};
use galois_core::curve::CurveSpec;
use galois_core::localgeom::{branches_at, singular_points};
use galois_core::pencil::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn classify(c: &CurveSpec, seed: u64) -> (PencilConfig, Vec<BranchPoint>) {
    let sing = singular_points(c).unwrap();
    let br: Vec<_> = sing.iter().map(|p| branches_at(c, &p.point, p.exact.as_ref()).unwrap()).collect();
    let pencil = choose_pencil(c, seed, &sing).unwrap();
    let bp = branch_points(&pencil, &sing, &br).unwrap();
    (pencil, bp)
}

fn kinds(bp: &[BranchPoint]) -> (usize, usize, usize) {
    let mut k = (0, 0, 0);
    for b in bp {
        match b.kind {
            BranchKind::DualTangent => k.0 += 1,
            BranchKind::MultipleBranchLine { .. } => k.1 += 1,
            BranchKind::SingularPointLine { .. } => k.2 += 1,
        }
    }
    k
}

#[test]
fn branch_point_kinds() {
    assert_eq!(kinds(&classify(&conic(), 1).1), (2, 0, 0));
    assert_eq!(kinds(&classify(&fermat_cubic(), 2).1), (6, 0, 0));
    assert_eq!(kinds(&classify(&smooth_quartic(), 3).1), (12, 0, 0));
    let (_, bp) = classify(&cuspidal_cubic(), 4);
    assert_eq!(kinds(&bp), (3, 1, 0));
    let cusp = bp.iter().find(|b| matches!(b.kind, BranchKind::MultipleBranchLine { .. })).unwrap();
    assert_eq!(cusp.kind, BranchKind::MultipleBranchLine { point: cusp_point(&bp), branches: vec![(2, 3)] });
    assert_eq!(kinds(&classify(&nodal_cubic(), 5).1), (4, 0, 1));
    assert_eq!(kinds(&classify(&two_conics(), 6).1), (4, 0, 4));
    // ramphoid cusp at (0:0:1) and a unibranch triple point at (1:0:0)
    let (_, bp) = classify(&ramphoid_cusp(), 7);
    let mut data: Vec<_> = bp
        .iter()
        .filter_map(|b| match &b.kind {
            BranchKind::MultipleBranchLine { branches, .. } => Some(branches.clone()),
            _ => None,
        })
        .collect();
    data.sort();
    assert_eq!(data, vec![vec![(2, 4)], vec![(3, 5)]]);
}

fn cusp_point(bp: &[BranchPoint]) -> [Complex64; 3] {
    bp.iter()
        .find_map(|b| match &b.kind {
            BranchKind::MultipleBranchLine { point, .. } => Some(*point),
            _ => None,
        })
        .unwrap()
}

#[test]
fn smooth_dual_tangent_count_matches_exact_degree() {
    for (c, n) in [(conic(), 2usize), (fermat_cubic(), 3), (smooth_quartic(), 4)] {
        let (pencil, bp) = classify(&c, 11);
        assert_eq!(bp.len(), n * (n - 1));
        assert_eq!(pencil.chart.disc.deg(), n * (n - 1));
        assert_eq!(pencil.sqf_degree, bp.len());
    }
}

#[test]
fn ramphoid_classifies_for_many_seeds() {
    let c = ramphoid_cusp();
    for seed in 1..=16 {
        let (_, bp) = classify(&c, seed);
        assert_eq!(kinds(&bp), (5, 2, 0), "seed {seed}");
    }
}

#[test]
fn pencil_is_deterministic() {
    let c = cuspidal_cubic();
    let sing = singular_points(&c).unwrap();
    let a = choose_pencil(&c, 42, &sing).unwrap();
    let b = choose_pencil(&c, 42, &sing).unwrap();
    assert_eq!(a.s0, b.s0);
    assert_eq!(a.chart.q, b.chart.q);
    assert_eq!(a.branch_locations(), b.branch_locations());
}

#[test]
fn base_point_on_curve_is_rejected() {
    let c = conic();
    let q = [QI::int(0), QI::int(0), QI::int(1)];
    let p0 = [QI::int(1), QI::int(2), QI::int(0)];
    let p1 = [QI::int(0), QI::int(1), QI::int(3)];
    assert_eq!(Chart::new(&c, q, p0, p1).unwrap_err(), ChartError::BaseOnCurve);
}

#[test]
fn start_fiber_is_well_separated() {
    for c in [conic(), fermat_cubic(), nodal_cubic(), two_conics()] {
        let (pencil, _) = classify(&c, 9);
        let z = galois_core::algebra::roots(&pencil.restrict(pencil.s0), 1e-13).unwrap();
        assert_eq!(z.len(), c.degree() as usize);
        for i in 0..z.len() {
            for j in 0..i {
                assert!((z[i] - z[j]).norm() > 1e-6);
            }
        }
    }
}

fn check_loops(points: &[Complex64], s0: Complex64) -> Vec<LoopPath> {
    let loops = build_loops(points, s0).unwrap();
    assert_eq!(loops.len(), points.len());
    let rho = petal_radii(points, s0);
    for l in &loops {
        assert_eq!(l.points.first(), Some(&s0));
        assert_eq!(l.points.last(), Some(&s0));
        for (k, &p) in points.iter().enumerate() {
            let w = winding_number(&l.points, p);
            assert_eq!(w, (k == l.target) as i64, "target {} point {k}", l.target);
            if k != l.target {
                assert!(l.distance_to(p) >= rho[k]);
            }
        }
    }
    loops
}

#[test]
fn loop_examples() {
    let c = |a: f64, b: f64| Complex64::new(a, b);
    check_loops(&[c(-1.0, 0.0), c(1.0, 0.0)], c(0.0, 0.3));
    check_loops(&[c(2.0, 1.0)], c(0.0, 0.0));
    // collinear with the start: spokes must detour
    let loops = check_loops(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)], c(0.0, 0.0));
    assert!(loops.iter().any(|l| l.detours > 0));
}

proptest! {
    #[test]
    fn random_loops_wind_once(pts in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..8), s in (-6.0f64..6.0, -6.0f64..6.0)) {
        let points: Vec<Complex64> = pts.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let s0 = Complex64::new(s.0, s.1);
        let rho = petal_radii(&points, s0);
        prop_assume!(rho.iter().all(|&r| r > 1e-3));
        check_loops(&points, s0);
    }
}
