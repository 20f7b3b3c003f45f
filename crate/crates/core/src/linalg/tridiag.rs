//! Symmetric tridiagonal eigenproblem by implicit QL with Wilkinson shifts.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Diagonalizes the real symmetric tridiagonal matrix with diagonal `diag`
/// and couplings `off[i]` between `i` and `i + 1` (`off.len() == diag.len()`,
/// last entry ignored). On return `diag` holds the eigenvalues in ascending order.
///
/// `z` is a row-major `rows x n` block whose columns are rotated along with
/// the iteration: pass the identity to get eigenvectors as columns, a single
/// row to track only that component of each eigenvector, or an empty slice.
pub fn tridiagonal_eigen(diag: &mut [f64], off: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = diag.len();
    assert_eq!(off.len(), n, "coupling vector must match diagonal length");
    if n == 0 {
        return Ok(());
    }
    assert_eq!(z.len() % n, 0, "rotation block must have n columns");
    let rows = z.len() / n;
    off[n - 1] = 0.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd || off[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence { routine: "tridiagonal QL", iterations: MAX_SWEEPS });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                for k in 0..rows {
                    let row = &mut z[k * n..(k + 1) * n];
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    sort_with_columns(diag, z, rows);
    Ok(())
}

fn sort_with_columns(diag: &mut [f64], z: &mut [f64], rows: usize) {
    let n = diag.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let sorted: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    diag.copy_from_slice(&sorted);
    for r in 0..rows {
        let row = &mut z[r * n..(r + 1) * n];
        let permuted: Vec<f64> = order.iter().map(|&k| row[k]).collect();
        row.copy_from_slice(&permuted);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_laplacian_closed_form() {
        // Tridiagonal (2, -1): eigenvalues 2 - 2 cos(k pi / (n + 1)).
        let n = 12;
        let mut d = vec![2.0; n];
        let mut e = vec![-1.0; n];
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        tridiagonal_eigen(&mut d, &mut e, &mut z).unwrap();
        for (k, &lam) in d.iter().enumerate() {
            let expect = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((lam - expect).abs() < 1e-13, "{lam} vs {expect}");
        }
        // Columns are orthonormal eigenvectors.
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n).map(|r| z[r * n + a] * z[r * n + b]).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let mut d = vec![3.0, -1.0, 2.0];
        let mut e = vec![0.0; 3];
        tridiagonal_eigen(&mut d, &mut e, &mut []).unwrap();
        assert_eq!(d, vec![-1.0, 2.0, 3.0]);
    }
}
