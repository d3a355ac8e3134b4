//! Tiny dense complex solvers for Newton steps.

use num_complex::Complex64;

use super::AlgebraError;

pub fn det3(m: &[[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Solves the 2×2 system `m · x = b` by Cramer's rule.
pub fn solve2(m: [[Complex64; 2]; 2], b: [Complex64; 2]) -> Result<[Complex64; 2], AlgebraError> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    if det.norm() <= 1e-300 || det.norm() <= 1e-15 * scale * scale {
        return Err(AlgebraError::Singular);
    }
    Ok([(b[0] * m[1][1] - m[0][1] * b[1]) / det, (m[0][0] * b[1] - b[0] * m[1][0]) / det])
}

/// Gaussian elimination with partial pivoting.
pub fn solve3(mut m: [[Complex64; 3]; 3], mut b: [Complex64; 3]) -> Result<[Complex64; 3], AlgebraError> {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap())
            .unwrap();
        if m[piv][col].norm() <= 1e-300 {
            return Err(AlgebraError::Singular);
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (x, v) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *x -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 3];
    for i in (0..3).rev() {
        let mut acc = b[i];
        for k in (i + 1)..3 {
            acc -= m[i][k] * x[k];
        }
        x[i] = acc / m[i][i];
    }
    Ok(x)
}
