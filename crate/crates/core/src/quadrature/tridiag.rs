//! Symmetric tridiagonal eigensolver, implicit-shift QL variant.
//!
//! Golub-Welsch needs eigenvalues plus only the FIRST component of each
//! normalized eigenvector, so the rotations update a single row vector
//! instead of a full matrix. Memory stays O(n) and the solve is O(n^2)
//! even at the largest rule sizes.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 60;

fn sign_like<T: Real>(magnitude: T, sign_of: T) -> T {
    if sign_of >= T::zero() {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

/// Eigen-decomposition driver.
///
/// `d[0..n]` holds the diagonal and is overwritten with the eigenvalues in
/// ascending order. `e[0..n-1]` holds the off-diagonals (`e[j]` couples
/// rows `j` and `j+1`); `e[n-1]` is scratch. Returns the first component of
/// each normalized eigenvector, ordered like the eigenvalues.
pub(crate) fn eigen_first_components<T: Real>(d: &mut [T], e: &mut [T]) -> Result<Vec<T>> {
    let n = d.len();
    debug_assert!(n >= 1 && e.len() == n);
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    e[n - 1] = T::zero();

    for l in 0..n {
        let mut sweeps = 0usize;
        loop {
            // first index m >= l whose off-diagonal is negligible
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::EigenFailure { size: n });
            }

            // Wilkinson-style shift from the leading 2x2
            let mut g = (d[l + 1] - d[l]) / (T::of(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();

            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    // rotation annihilated early; restart the scan
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::of(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    // ascending eigenvalue order, carrying the vector components
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| d[a].partial_cmp(&d[b]).expect("eigenvalues are finite"));
    let sorted_d: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let sorted_z: Vec<T> = order.iter().map(|&i| z[i]).collect();
    d.copy_from_slice(&sorted_d);
    Ok(sorted_z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let mut d = vec![3.25];
        let mut e = vec![0.0];
        let z = eigen_first_components(&mut d, &mut e).unwrap();
        assert_eq!(d, vec![3.25]);
        assert_eq!(z, vec![1.0]);
    }

    #[test]
    fn decoupled_diagonal() {
        let mut d = vec![2.0, -1.0, 0.5];
        let mut e = vec![0.0, 0.0, 0.0];
        let z = eigen_first_components(&mut d, &mut e).unwrap();
        assert_eq!(d, vec![-1.0, 0.5, 2.0]);
        // first basis vector belongs to the eigenvalue 2
        assert_eq!(z, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn two_by_two() {
        // [[2, 1], [1, 2]]: eigenvalues 1 and 3, both first components 1/sqrt(2)
        let mut d = vec![2.0f64, 2.0];
        let mut e = vec![1.0f64, 0.0];
        let z = eigen_first_components(&mut d, &mut e).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-14);
        assert!((d[1] - 3.0).abs() < 1e-14);
        let inv_sqrt2 = 0.5f64.sqrt();
        assert!((z[0].abs() - inv_sqrt2).abs() < 1e-14);
        assert!((z[1].abs() - inv_sqrt2).abs() < 1e-14);
    }

    #[test]
    fn first_row_has_unit_norm() {
        // the first row of an orthogonal eigenvector matrix is a unit vector
        let n = 40;
        let mut d: Vec<f64> = (0..n).map(|i| ((i * 37) % 11) as f64 * 0.3 - 1.0).collect();
        let mut e: Vec<f64> = (0..n).map(|i| 0.1 + ((i * 17) % 7) as f64 * 0.11).collect();
        e[n - 1] = 0.0;
        let z = eigen_first_components(&mut d, &mut e).unwrap();
        let norm2: f64 = z.iter().map(|v| v * v).sum();
        assert!((norm2 - 1.0).abs() < 1e-12, "norm^2 = {norm2}");
        for w in d.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn eigenvalues_match_characteristic_roots() {
        // [[1, 2], [2, -1]]: eigenvalues +-sqrt(5)
        let mut d = vec![1.0, -1.0];
        let mut e = vec![2.0, 0.0];
        eigen_first_components(&mut d, &mut e).unwrap();
        let r = 5.0f64.sqrt();
        assert!((d[0] + r).abs() < 1e-14);
        assert!((d[1] - r).abs() < 1e-14);
    }
}
