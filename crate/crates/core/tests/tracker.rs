mod common;

use std::f64::consts::PI;

use common::*;
use galois_core::algebra::UniPoly;
use galois_core::curve::CurveSpec;
use galois_core::localgeom::{branches_at, singular_points};
use galois_core::pencil::*;
use galois_core::permgroup::{evaluate, Perm, PermGroup};
use galois_core::tracker::*;
use num_complex::Complex64;

/// `G(r, s) = r² − s`.
struct Sqrt;

impl RootFamily for Sqrt {
    fn degree(&self) -> usize {
        2
    }
    fn restrict(&self, s: Complex64) -> UniPoly {
        UniPoly::new(vec![-s, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }
    fn eval(&self, r: Complex64, s: Complex64) -> (Complex64, Complex64, Complex64) {
        (r * r - s, r * 2.0, Complex64::new(-1.0, 0.0))
    }
    fn scale(&self, r: Complex64, s: Complex64) -> f64 {
        r.norm_sqr() + s.norm()
    }
}

fn circle(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    let start = Complex64::new(1.0, 0.0) - center;
    (0..=n).map(|k| center + start / start.norm() * radius * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

#[test]
fn square_root_monodromy() {
    let opts = TrackOptions::default();
    let one = Complex64::new(1.0, 0.0);
    let start = start_roots(&Sqrt, one, &opts).unwrap();
    let res = track(&Sqrt, &circle(Complex64::new(0.0, 0.0), 1.0, 64), &start, &[Complex64::new(0.0, 0.0)], &opts).unwrap();
    assert_eq!(res.permutation, Perm::transposition(2, 0, 1));
    // a loop around s = 2 encloses no branch point
    let res = track(&Sqrt, &circle(Complex64::new(2.0, 0.0), 1.0, 64), &start, &[Complex64::new(0.0, 0.0)], &opts).unwrap();
    assert!(res.permutation.is_identity());
}

struct Setup {
    curve: CurveSpec,
    pencil: PencilConfig,
    points: Vec<BranchPoint>,
    loops: Vec<LoopPath>,
    start: Vec<Complex64>,
}

impl Setup {
    fn new(curve: CurveSpec, seed: u64) -> Setup {
        let sing = singular_points(&curve).unwrap();
        let br: Vec<_> = sing.iter().map(|p| branches_at(&curve, &p.point, p.exact.as_ref()).unwrap()).collect();
        let pencil = choose_pencil(&curve, seed, &sing).unwrap();
        let points = branch_points(&pencil, &sing, &br).unwrap();
        let loops = build_loops(&pencil.branch_locations(), pencil.s0).unwrap();
        let fam = PencilFamily { curve: &curve, chart: &pencil.chart };
        let start = start_roots(&fam, pencil.s0, &TrackOptions::default()).unwrap();
        Setup { curve, pencil, points, loops, start }
    }

    fn fam(&self) -> PencilFamily<'_> {
        PencilFamily { curve: &self.curve, chart: &self.pencil.chart }
    }

    fn perms(&self) -> Vec<Perm> {
        monodromy_generators(&self.fam(), &self.loops, &self.start, &self.pencil.branch_locations(), &TrackOptions::default())
            .unwrap()
            .into_iter()
            .map(|r| r.permutation)
            .collect()
    }

    fn kind_of(&self, l: &LoopPath) -> &BranchKind {
        &self.points[l.target].kind
    }
}

fn product_in_order(perms: &[Perm]) -> Perm {
    let word: Vec<i32> = (1..=perms.len() as i32).collect();
    evaluate(perms, perms[0].degree(), &word).unwrap()
}

#[test]
fn conic_generators_are_the_transposition() {
    let s = Setup::new(conic(), 1);
    let perms = s.perms();
    assert_eq!(perms, vec![Perm::transposition(2, 0, 1); 2]);
}

#[test]
fn smooth_cubic_generates_s3() {
    let s = Setup::new(fermat_cubic(), 2);
    let perms = s.perms();
    assert_eq!(perms.len(), 6);
    assert!(perms.iter().all(Perm::is_transposition));
    let g = PermGroup::generate(3, &perms).unwrap();
    assert_eq!(g.order(), 6u32.into());
    assert!(product_in_order(&perms).is_identity());
}

#[test]
fn node_line_is_trivial_and_cusp_line_is_a_two_cycle() {
    let s = Setup::new(nodal_cubic(), 3);
    for (l, p) in s.loops.iter().zip(s.perms()) {
        match s.kind_of(l) {
            BranchKind::SingularPointLine { .. } => assert!(p.is_identity()),
            _ => assert!(p.is_transposition()),
        }
    }
    let s = Setup::new(cuspidal_cubic(), 4);
    for (l, p) in s.loops.iter().zip(s.perms()) {
        assert!(p.is_transposition(), "{:?}", s.kind_of(l));
    }
}

#[test]
fn petal_product_is_identity() {
    for (c, seed) in [(conic(), 5), (fermat_cubic(), 6), (nodal_cubic(), 7), (cuspidal_cubic(), 8), (two_conics(), 9), (smooth_quartic(), 10)] {
        let s = Setup::new(c, seed);
        assert!(product_in_order(&s.perms()).is_identity(), "seed {seed}");
    }
}

#[test]
fn composition_consistency() {
    let s = Setup::new(fermat_cubic(), 11);
    let perms = s.perms();
    let opts = TrackOptions::default();
    let obstacles = s.pencil.branch_locations();
    for word in [vec![1, 2], vec![3, -5], vec![-6, 4, 2], vec![2, 2]] {
        let expected = evaluate(&perms, 3, &word).unwrap();
        assert!(validate_word(&s.fam(), &s.loops, &word, &expected, &s.start, &obstacles, &opts).unwrap(), "{word:?}");
    }
    assert!(validate_word(&s.fam(), &s.loops, &[], &Perm::identity(3), &s.start, &obstacles, &opts).unwrap());
    assert!(validate_word(&s.fam(), &s.loops, &[1], &perms[0], &s.start, &obstacles, &opts).unwrap());
    let c = Setup::new(conic(), 12);
    assert!(validate_word(&c.fam(), &c.loops, &[1, 1], &Perm::identity(2), &c.start, &c.pencil.branch_locations(), &opts).unwrap());
}

#[test]
fn sample_doubling_keeps_permutations() {
    let s = Setup::new(cuspidal_cubic(), 13);
    let perms = s.perms();
    let doubled: Vec<LoopPath> = s
        .loops
        .iter()
        .map(|l| {
            let mut pts = Vec::with_capacity(2 * l.points.len());
            for w in l.points.windows(2) {
                pts.push(w[0]);
                pts.push((w[0] + w[1]) / 2.0);
            }
            pts.push(*l.points.last().unwrap());
            LoopPath { points: pts, circle: (2 * l.circle.0, 2 * l.circle.1), ..l.clone() }
        })
        .collect();
    let again: Vec<Perm> = monodromy_generators(&s.fam(), &doubled, &s.start, &s.pencil.branch_locations(), &TrackOptions::default())
        .unwrap()
        .into_iter()
        .map(|r| r.permutation)
        .collect();
    assert_eq!(perms, again);
}

#[test]
fn cusp_limit_partition() {
    let s = Setup::new(cuspidal_cubic(), 14);
    let perms = s.perms();
    let (k, l) = s.loops.iter().enumerate().find(|(_, l)| matches!(s.kind_of(l), BranchKind::MultipleBranchLine { .. })).unwrap();
    let BranchKind::MultipleBranchLine { point, .. } = s.kind_of(l) else { unreachable!() };
    let (r, _) = s.pencil.chart.coords(point).unwrap();
    let target = s.points[l.target].s;
    let part = limit_partition(&s.fam(), l, target, r, 2, &s.start, &s.pencil.branch_locations(), &TrackOptions::default()).unwrap();
    assert_eq!(part.blocks().iter().map(Vec::len).max(), Some(2));
    assert!(part.invariant_under(&perms[k]));
    // the cusp sheets are exactly the ones the cusp loop swaps
    let big = part.blocks().iter().find(|b| b.len() == 2).unwrap();
    assert_eq!(&perms[k].support(), big);
}
