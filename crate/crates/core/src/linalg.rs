//! Determinant and permanent of small complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(m: &DMatrix<Complex64>) -> Complex64 {
    m.clone().lu().determinant()
}

/// Permanent Σ_σ ∏_i m_{i,σ(i)} by Ryser's formula with Gray-code updates.
pub fn permanent(m: &DMatrix<Complex64>) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "permanent of a non-square matrix");
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray = 0usize;
    for step in 1..(1usize << n) {
        let next = step ^ (step >> 1);
        let col = (gray ^ next).trailing_zeros() as usize;
        let added = next & (1 << col) != 0;
        for (i, s) in row_sums.iter_mut().enumerate() {
            if added {
                *s += m[(i, col)];
            } else {
                *s -= m[(i, col)];
            }
        }
        gray = next;
        let prod: Complex64 = row_sums.iter().product();
        if (n - next.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}

/// perm(|m|), the size of the full expansion of det m or perm m.
pub fn abs_permanent(m: &DMatrix<Complex64>) -> f64 {
    permanent(&m.map(|z| Complex64::new(z.norm(), 0.0))).re
}
