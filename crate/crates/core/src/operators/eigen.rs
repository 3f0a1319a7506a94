//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use alloc::vec::Vec;

use super::{normalize_sign, DenseOperator, SpectrumKind, SpectrumResult};
use crate::error::{Error, Result};
use crate::numeric::{abs, sqrt};

const MAX_SWEEPS: usize = 100;
/// Stop once the off-diagonal Frobenius norm is below this fraction of `‖M‖_F`.
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Full spectrum `μ_1 ≥ μ_2 ≥ …` of a symmetric operator with orthonormal
/// eigenvectors. Ties keep the solver's index order.
pub fn eigen_spectrum(op: &DenseOperator) -> Result<SpectrumResult> {
    if !op.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = op.nrows();
    let (diag, v) = jacobi(n, op.data().to_vec())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(core::cmp::Ordering::Equal));
    let values = order.iter().map(|&j| diag[j]).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let mut col: Vec<f64> = (0..n).map(|i| v[i * n + j]).collect();
            normalize_sign(&mut col);
            col
        })
        .collect();
    Ok(SpectrumResult {
        kind: SpectrumKind::Eigen,
        values,
        vectors,
        left_vectors: Vec::new(),
    })
}

fn off_diagonal_norm(n: usize, a: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sqrt(s)
}

/// Returns the diagonal after convergence and the accumulated rotations
/// (eigenvectors in columns, row-major storage).
fn jacobi(n: usize, mut a: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = alloc::vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = sqrt(a.iter().map(|x| x * x).sum());
    let target = OFF_DIAGONAL_TOL * frob;
    let mut sweeps = 0;
    while off_diagonal_norm(n, &a) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if abs(theta) > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (abs(theta) + sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    Ok((diag, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::FiniteRealSet;
    use alloc::vec;

    fn labels(n: usize) -> FiniteRealSet {
        FiniteRealSet::from_integers(0..n as i64).unwrap()
    }

    fn op(n: usize, data: Vec<f64>) -> DenseOperator {
        DenseOperator::from_matrix(labels(n), labels(n), data).unwrap()
    }

    #[test]
    fn documented_three_by_three() {
        let m = op(3, vec![3.0, 2.0, 1.0, 2.0, 3.0, 2.0, 1.0, 2.0, 3.0]);
        let s = eigen_spectrum(&m).unwrap();
        // symmetric eigenvectors (1, x, 1): 2x² + x − 4 = 0 and μ = 4 + 2x
        let x1 = (-1.0 + 33f64.sqrt()) / 4.0;
        let x2 = (-1.0 - 33f64.sqrt()) / 4.0;
        let mu = |x: f64| 3.0 + 2.0 * x + 1.0;
        let expect = [mu(x1), 2.0, mu(x2)];
        for (a, b) in s.values.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!((s.values[0] - 6.37228).abs() < 1e-5);
        assert!((s.values[2] - 0.62772).abs() < 1e-5);
        assert!(s.max_residual(&m) < 1e-12);
        // antisymmetric eigenvector (1, 0, −1)
        let f2 = &s.vectors[1];
        assert!((f2[0] - 0.5f64.sqrt()).abs() < 1e-12 && f2[1].abs() < 1e-12);
    }

    #[test]
    fn identity_and_rank_one() {
        let mut id = vec![0.0; 16];
        for i in 0..4 {
            id[i * 4 + i] = 1.0;
        }
        let s = eigen_spectrum(&op(4, id)).unwrap();
        assert_eq!(s.values, vec![1.0; 4]);
        let s = eigen_spectrum(&op(5, vec![1.0; 25])).unwrap();
        assert!((s.values[0] - 5.0).abs() < 1e-12);
        assert!(s.values[1..].iter().all(|x| x.abs() < 1e-12));
        assert!(s.vectors[0].iter().all(|x| (x - 1.0 / 5f64.sqrt()).abs() < 1e-12));
    }

    #[test]
    fn rejects_nonsymmetric() {
        let m = op(2, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(eigen_spectrum(&m), Err(Error::NotSymmetric));
        let rect = DenseOperator::from_matrix(labels(2), labels(3), vec![0.0; 6]).unwrap();
        assert_eq!(eigen_spectrum(&rect), Err(Error::NotSymmetric));
    }

    #[test]
    fn pseudo_random_symmetric_matrices() {
        let mut state = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [1usize, 2, 7, 20, 33] {
            let mut d = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let x = next();
                    d[i * n + j] = x;
                    d[j * n + i] = x;
                }
            }
            let m = op(n, d);
            let s = eigen_spectrum(&m).unwrap();
            let scale = m.frobenius();
            assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.max_residual(&m) <= 1e-9 * scale);
            let sum: f64 = s.values.iter().sum();
            assert!((sum - m.trace()).abs() <= 1e-9 * scale.max(1.0));
            for i in 0..n {
                for j in 0..n {
                    let dot: f64 = s.vectors[i].iter().zip(&s.vectors[j]).map(|(a, b)| a * b).sum();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - e).abs() < 1e-10);
                }
            }
            let r = s.reconstruct();
            for (a, b) in r.iter().zip(m.data()) {
                assert!((a - b).abs() <= 1e-8 * scale);
            }
        }
    }
}
