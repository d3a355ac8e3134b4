#![allow(dead_code)]

use galois_core::algebra::TriPoly;
use galois_core::curve::CurveSpec;

pub fn tri(d: u32, t: &[([u32; 3], i64)]) -> TriPoly {
    TriPoly::from_int_terms(d, t).unwrap()
}

pub fn conic() -> CurveSpec {
    CurveSpec::new(vec![tri(2, &[([1, 0, 1], 1), ([0, 2, 0], -1)])]).unwrap()
}

pub fn fermat_cubic() -> CurveSpec {
    CurveSpec::new(vec![tri(3, &[([3, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 3], 1)])]).unwrap()
}

/// x2² x3 = x1³
pub fn cuspidal_cubic() -> CurveSpec {
    CurveSpec::new(vec![tri(3, &[([0, 2, 1], 1), ([3, 0, 0], -1)])]).unwrap()
}

/// x2² x3 = x1²(x1 + x3)
pub fn nodal_cubic() -> CurveSpec {
    CurveSpec::new(vec![tri(3, &[([0, 2, 1], 1), ([3, 0, 0], -1), ([2, 0, 1], -1)])]).unwrap()
}

/// x1² + x2² = 2x3² and x1² − 4x2² + 3x3², meeting at (±1 : ±1 : 1)
pub fn two_conics() -> CurveSpec {
    CurveSpec::new(vec![
        tri(2, &[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -2)]),
        tri(2, &[([2, 0, 0], 1), ([0, 2, 0], -4), ([0, 0, 2], 3)]),
    ])
    .unwrap()
}

/// x1 x3 = x2² together with the line x1 = 2 x3 + x2
pub fn conic_and_line() -> CurveSpec {
    CurveSpec::new(vec![tri(2, &[([1, 0, 1], 1), ([0, 2, 0], -1)]), tri(1, &[([1, 0, 0], 1), ([0, 1, 0], -1), ([0, 0, 1], -2)])]).unwrap()
}

/// x1⁴ + x2⁴ + x3⁴ − x1² x2 x3, smooth
pub fn smooth_quartic() -> CurveSpec {
    CurveSpec::new(vec![tri(4, &[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1), ([2, 1, 1], -1)])]).unwrap()
}

/// (x1 x3 − x2²)² = x2⁵/x3 homogenized: a single branch with r = 2, s = 4
/// at (0 : 0 : 1) in the chart x3 = 1.
pub fn ramphoid_cusp() -> CurveSpec {
    // (x1 x3 - x2^2)^2 x3 - x2^5, degree 5
    CurveSpec::new(vec![tri(5, &[([2, 0, 3], 1), ([1, 2, 2], -2), ([0, 4, 1], 1), ([0, 5, 0], -1)])]).unwrap()
}
