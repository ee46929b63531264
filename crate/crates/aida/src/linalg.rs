//! Dense eigenvalue routines for small matrices.
//!
//! Two solvers: a cyclic Jacobi rotation diagonalization for symmetric
//! matrices, and a general real eigensolver (Gaussian similarity reduction
//! to upper Hessenberg followed by Francis double-shift QR iteration, after
//! the classic treatment in Numerical Recipes). Sizes stay small here
//! (3x3 stability blocks, assembled Jacobians up to 300, finite-difference
//! Hessians up to 200), so no attempt is made at blocking or balancing.

use crate::error::{Error, Result};
use num_complex::Complex64;

fn check_square(a: &[Vec<f64>], max_dim: usize, what: &str) -> Result<usize> {
    let n = a.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > max_dim {
        return Err(Error::InvalidArgument(format!(
            "{what} supports dimensions up to {max_dim}, got {n}"
        )));
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteInput { index: i * n + j });
            }
        }
    }
    Ok(n)
}

fn frobenius(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .flat_map(|row| row.iter())
        .map(|&v| v * v)
        .sum::<f64>()
        .sqrt()
}

fn off_diagonal_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// sorted ascending.
///
/// The input must be symmetric to 1e-8 (relative to its magnitude) and at
/// most 200x200. Iteration stops once the off-diagonal norm falls below
/// 1e-13 of the Frobenius norm.
pub fn symmetric_eigs(a: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = check_square(a, 200, "symmetric_eigs")?;
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(1.0);
    for i in 0..n {
        for j in i + 1..n {
            if (a[i][j] - a[j][i]).abs() > 1e-8 * scale {
                return Err(Error::InvalidArgument(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }

    // Work on a symmetrized copy.
    let mut w = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            w[i][j] = 0.5 * (a[i][j] + a[j][i]);
        }
    }
    let norm = frobenius(&w);
    if norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = 1e-13 * norm;

    const MAX_SWEEPS: usize = 50;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&w) <= target {
            let mut eigs: Vec<f64> = (0..n).map(|i| w[i][i]).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eigs);
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = w[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = 0.5 * (w[q][q] - w[p][p]) / apq;
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let wkp = w[k][p];
                    let wkq = w[k][q];
                    w[k][p] = c * wkp - s * wkq;
                    w[k][q] = s * wkp + c * wkq;
                }
                for k in 0..n {
                    let wpk = w[p][k];
                    let wqk = w[q][k];
                    w[p][k] = c * wpk - s * wqk;
                    w[q][k] = s * wpk + c * wqk;
                }
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "jacobi rotations did not converge in {MAX_SWEEPS} sweeps"
    )))
}

/// Roots of the 2x2 block `[[a, b], [c, d]]`, larger-modulus root first on
/// the real branch. Triangular blocks read the diagonal off exactly.
fn eig2x2(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 2] {
    if b == 0.0 || c == 0.0 {
        return [Complex64::new(a, 0.0), Complex64::new(d, 0.0)];
    }
    let mid = 0.5 * (a + d);
    let off = 0.5 * (a - d);
    let disc = off * off + b * c;
    if disc >= 0.0 {
        let z = disc.sqrt();
        let big = if mid >= 0.0 { mid + z } else { mid - z };
        let det = a * d - b * c;
        let small = if big != 0.0 { det / big } else { mid - z };
        [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
    } else {
        let z = (-disc).sqrt();
        [Complex64::new(mid, z), Complex64::new(mid, -z)]
    }
}

/// True when index 1 of a 3x3 matrix is decoupled from the other two
/// (zero off-diagonals in both its row and its column).
fn middle_decoupled(a: &[Vec<f64>]) -> bool {
    a[1][0] == 0.0 && a[1][2] == 0.0 && a[0][1] == 0.0 && a[2][1] == 0.0
}

fn sign_nr(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Gaussian-elimination similarity reduction to upper Hessenberg form.
fn to_hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    for m in 1..n.saturating_sub(1) {
        let mut x = 0.0f64;
        let mut piv = m;
        for j in m..n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                piv = j;
            }
        }
        if piv != m {
            a.swap(piv, m);
            for row in a.iter_mut() {
                row.swap(piv, m);
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let mut y = a[i][m - 1];
                if y != 0.0 {
                    y /= x;
                    a[i][m - 1] = 0.0;
                    for j in m..n {
                        a[i][j] -= y * a[m][j];
                    }
                    for j in 0..n {
                        a[j][m] += y * a[j][i];
                    }
                }
            }
        }
    }
    // Entries below the subdiagonal are junk after elimination.
    for i in 2..n {
        for j in 0..i - 1 {
            a[i][j] = 0.0;
        }
    }
}

/// Francis double-shift QR iteration on an upper Hessenberg matrix.
fn hqr(a: &mut [Vec<f64>], cap_per_eig: usize) -> Result<Vec<Complex64>> {
    let n = a.len();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }
    let eps = f64::EPSILON;

    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = 0isize;
            let mut ll = nn;
            while ll >= 1 {
                let (i, im1) = (ll as usize, (ll - 1) as usize);
                let mut s = a[im1][im1].abs() + a[i][i].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[i][im1].abs() <= eps * s {
                    a[i][im1] = 0.0;
                    l = ll;
                    break;
                }
                ll -= 1;
            }

            let mut x = a[nn as usize][nn as usize];
            if l == nn {
                // One root found.
                wr[nn as usize] = x + t;
                wi[nn as usize] = 0.0;
                nn -= 1;
                break;
            }

            let mut y = a[(nn - 1) as usize][(nn - 1) as usize];
            let mut w = a[nn as usize][(nn - 1) as usize] * a[(nn - 1) as usize][nn as usize];
            if l == nn - 1 {
                // Two roots found.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + sign_nr(z, p);
                    let big = x + z;
                    wr[(nn - 1) as usize] = big;
                    wr[nn as usize] = if z != 0.0 { x - w / z } else { big };
                    wi[(nn - 1) as usize] = 0.0;
                    wi[nn as usize] = 0.0;
                } else {
                    wr[(nn - 1) as usize] = x + p;
                    wr[nn as usize] = x + p;
                    wi[nn as usize] = z;
                    wi[(nn - 1) as usize] = -z;
                }
                nn -= 2;
                break;
            }

            // No root yet: perform a double QR step.
            if its == cap_per_eig {
                let found = n - 1 - nn as usize;
                return Err(Error::NoConvergence(format!(
                    "qr iteration exceeded {cap_per_eig} steps per eigenvalue \
                     with {found} of {n} eigenvalues deflated"
                )));
            }
            if its == 10 || its == 20 {
                // Exceptional shift.
                t += x;
                for i in 0..=nn as usize {
                    a[i][i] -= x;
                }
                let s = a[nn as usize][(nn - 1) as usize].abs()
                    + a[(nn - 1) as usize][(nn - 2) as usize].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // Form the shift and look for two consecutive small subdiagonals.
            let mut m = nn - 2;
            let mut p = 0.0;
            let mut q = 0.0;
            let mut r = 0.0;
            while m >= l {
                let mu = m as usize;
                let z = a[mu][mu];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[mu + 1][mu] + a[mu][mu + 1];
                q = a[mu + 1][mu + 1] - z - rr - ss;
                r = a[mu + 2][mu + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[mu][mu - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[mu - 1][mu - 1].abs() + z.abs() + a[mu + 1][mu + 1].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                let iu = i as usize;
                a[iu][iu - 2] = 0.0;
                if i != m + 2 {
                    a[iu][iu - 3] = 0.0;
                }
            }

            for k in m..=nn - 1 {
                let ku = k as usize;
                if k != m {
                    p = a[ku][ku - 1];
                    q = a[ku + 1][ku - 1];
                    r = if k != nn - 1 { a[ku + 2][ku - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign_nr((p * p + q * q + r * r).sqrt(), p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[ku][ku - 1] = -a[ku][ku - 1];
                    }
                } else {
                    a[ku][ku - 1] = -s * x;
                }
                p += s;
                x = p / s;
                let yy = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in ku..=nn as usize {
                    let mut pp = a[ku][j] + q * a[ku + 1][j];
                    if k != nn - 1 {
                        pp += r * a[ku + 2][j];
                        a[ku + 2][j] -= pp * z;
                    }
                    a[ku + 1][j] -= pp * yy;
                    a[ku][j] -= pp * x;
                }
                let mmin = nn.min(k + 3) as usize;
                for i in l as usize..=mmin {
                    let mut pp = x * a[i][ku] + yy * a[i][ku + 1];
                    if k != nn - 1 {
                        pp += z * a[i][ku + 2];
                        a[i][ku + 2] -= pp * r;
                    }
                    a[i][ku + 1] -= pp * q;
                    a[i][ku] -= pp;
                }
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// All eigenvalues of a real square matrix of dimension at most 300.
///
/// 3x3 matrices whose middle index decouples (the structure of the
/// stability blocks) reduce to one diagonal entry plus a quadratic;
/// everything else goes through Hessenberg reduction and QR iteration.
pub fn eigs_numeric(a: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    let n = check_square(a, 300, "eigs_numeric")?;
    match n {
        1 => Ok(vec![Complex64::new(a[0][0], 0.0)]),
        2 => Ok(eig2x2(a[0][0], a[0][1], a[1][0], a[1][1]).to_vec()),
        3 if middle_decoupled(a) => {
            let outer = eig2x2(a[0][0], a[0][2], a[2][0], a[2][2]);
            Ok(vec![Complex64::new(a[1][1], 0.0), outer[0], outer[1]])
        }
        _ => {
            let mut work: Vec<Vec<f64>> = a.to_vec();
            to_hessenberg(&mut work);
            hqr(&mut work, 60)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sort_complex(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    fn assert_spectrum_close(got: Vec<Complex64>, expected: Vec<Complex64>, tol: f64) {
        let got = sort_complex(got);
        let expected = sort_complex(expected);
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            assert!(
                (g - e).norm() <= tol,
                "eig {g} differs from expected {e} (tol {tol:e})"
            );
        }
    }

    #[test]
    fn identity_spectra() {
        let id3 = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert_spectrum_close(
            eigs_numeric(&id3).unwrap(),
            vec![Complex64::new(1.0, 0.0); 3],
            0.0,
        );
        let id4 = (0..4)
            .map(|i| (0..4).map(|j| f64::from(i == j)).collect())
            .collect::<Vec<Vec<f64>>>();
        assert_spectrum_close(
            eigs_numeric(&id4).unwrap(),
            vec![Complex64::new(1.0, 0.0); 4],
            1e-14,
        );
    }

    #[test]
    fn one_by_one_and_two_by_two() {
        assert_eq!(eigs_numeric(&[vec![10.0]]).unwrap()[0].re, 10.0);
        let rot = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        assert_spectrum_close(
            eigs_numeric(&rot).unwrap(),
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)],
            1e-15,
        );
    }

    #[test]
    fn companion_matrix_roots() {
        // Characteristic polynomial (x-1)(x-2)(x-3)(x-4).
        let c = vec![
            vec![10.0, -35.0, 50.0, -24.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ];
        let expected = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        assert_spectrum_close(eigs_numeric(&c).unwrap(), expected, 1e-10);
    }

    #[test]
    fn rotation_block_gives_unit_complex_pair() {
        let th = 0.7f64;
        // Not middle-decoupled, so this exercises the QR path on a 3x3.
        let a = vec![
            vec![th.cos(), -th.sin(), 0.0],
            vec![th.sin(), th.cos(), 0.0],
            vec![0.0, 0.0, 5.0],
        ];
        let expected = vec![
            Complex64::new(th.cos(), th.sin()),
            Complex64::new(th.cos(), -th.sin()),
            Complex64::new(5.0, 0.0),
        ];
        assert_spectrum_close(eigs_numeric(&a).unwrap(), expected, 1e-12);
    }

    #[test]
    fn defective_triangular_matrix() {
        let a = vec![
            vec![2.0, 1.0, 0.0, 0.0],
            vec![0.0, 2.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0, 1.0],
            vec![0.0, 0.0, 0.0, 2.0],
        ];
        assert_spectrum_close(
            eigs_numeric(&a).unwrap(),
            vec![Complex64::new(2.0, 0.0); 4],
            1e-10,
        );
    }

    #[test]
    fn jacobi_reads_diagonal_exactly() {
        let n = 100;
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { (i + 1) as f64 } else { 0.0 })
                    .collect()
            })
            .collect();
        let eigs = symmetric_eigs(&a).unwrap();
        for (k, &v) in eigs.iter().enumerate() {
            assert_eq!(v, (k + 1) as f64);
        }
    }

    #[test]
    fn jacobi_textbook_two_by_two() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let eigs = symmetric_eigs(&a).unwrap();
        assert!((eigs[0] - 1.0).abs() <= 1e-13);
        assert!((eigs[1] - 3.0).abs() <= 1e-13);
        assert_eq!(symmetric_eigs(&[vec![10.0]]).unwrap(), vec![10.0]);
    }

    #[test]
    fn jacobi_rejects_asymmetric_input() {
        let a = vec![vec![1.0, 2.0], vec![0.0, 1.0]];
        assert!(symmetric_eigs(&a).is_err());
    }

    #[test]
    fn jacobi_agrees_with_qr_on_a_dense_symmetric_matrix() {
        // Deterministic dense symmetric matrix.
        let n = 12;
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = ((i * 7 + j * 3) % 11) as f64 / 11.0 + f64::from(i == j) * 2.0;
                a[i][j] = v;
            }
        }
        for i in 0..n {
            for j in 0..i {
                let m = 0.5 * (a[i][j] + a[j][i]);
                a[i][j] = m;
                a[j][i] = m;
            }
        }
        let sym = symmetric_eigs(&a).unwrap();
        let mut qr: Vec<f64> = eigs_numeric(&a)
            .unwrap()
            .into_iter()
            .map(|z| {
                assert!(z.im.abs() < 1e-9);
                z.re
            })
            .collect();
        qr.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (s, q) in sym.iter().zip(&qr) {
            assert!((s - q).abs() <= 1e-10, "jacobi {s} vs qr {q}");
        }
    }

    #[test]
    fn rejects_oversized_and_ragged_input() {
        let big = vec![vec![0.0; 301]; 301];
        assert!(eigs_numeric(&big).is_err());
        let ragged = vec![vec![1.0, 2.0], vec![3.0]];
        assert!(eigs_numeric(&ragged).is_err());
    }
}
