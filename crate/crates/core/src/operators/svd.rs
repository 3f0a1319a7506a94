//! One-sided (Hestenes) Jacobi singular value decomposition.
//!
//! Working on the columns of `M` directly keeps tiny singular values
//! accurate in absolute terms, which forming `MᵀM` would not.

use alloc::vec::Vec;

use super::{normalize_sign, DenseOperator, SpectrumKind, SpectrumResult};
use crate::numeric::{abs, sqrt};

const MAX_SWEEPS: usize = 100;

/// Singular triples `(λ_j, u_j, v_j)` with `λ_1 ≥ λ_2 ≥ … ≥ 0`, one per
/// column when `|cols| ≤ |rows|` and one per row otherwise.
pub fn singular_spectrum(op: &DenseOperator) -> SpectrumResult {
    if op.ncols() > op.nrows() {
        let t = singular_spectrum(&op.transpose());
        return SpectrumResult {
            kind: SpectrumKind::Singular,
            values: t.values,
            vectors: t.left_vectors,
            left_vectors: t.vectors,
        };
    }
    let (m, n) = (op.nrows(), op.ncols());
    // column-major copies: w[j] is column j of M, v[j] column j of V
    let mut w: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| op.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = w[p].iter().zip(&w[q]).fold((0.0, 0.0, 0.0), |(a, b, g), (x, y)| {
                    (a + x * x, b + y * y, g + x * y)
                });
                if gamma == 0.0 || abs(gamma) <= 1e-15 * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = {
                    let t = 1.0 / (abs(zeta) + sqrt(1.0 + zeta * zeta));
                    if zeta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| sqrt(col.iter().map(|x| x * x).sum())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));
    let top = order.first().map_or(0.0, |&j| norms[j]);
    let negligible = (m.max(n) as f64) * f64::EPSILON * top;

    let mut values = Vec::with_capacity(n);
    let mut rights = Vec::with_capacity(n);
    let mut lefts: Vec<Option<Vec<f64>>> = Vec::with_capacity(n);
    for &j in &order {
        let sigma = norms[j];
        let mut vj = v[j].clone();
        if sigma > negligible && sigma > 0.0 {
            let mut uj: Vec<f64> = w[j].iter().map(|x| x / sigma).collect();
            if normalize_sign(&mut vj) {
                uj.iter_mut().for_each(|x| *x = -*x);
            }
            lefts.push(Some(uj));
        } else {
            normalize_sign(&mut vj);
            lefts.push(None);
        }
        values.push(sigma);
        rights.push(vj);
    }
    let left_vectors = complete_orthonormal(m, lefts);
    SpectrumResult {
        kind: SpectrumKind::Singular,
        values,
        vectors: rights,
        left_vectors,
    }
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Fills the missing left vectors (null directions) by Gram–Schmidt over
/// the standard basis.
fn complete_orthonormal(m: usize, partial: Vec<Option<Vec<f64>>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = partial.iter().flatten().cloned().collect();
    let mut next_unit = 0;
    partial
        .into_iter()
        .map(|slot| match slot {
            Some(u) => u,
            None => loop {
                let mut e = alloc::vec![0.0; m];
                e[next_unit % m] = 1.0;
                next_unit += 1;
                for _ in 0..2 {
                    for b in &basis {
                        let d: f64 = e.iter().zip(b).map(|(x, y)| x * y).sum();
                        e.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
                    }
                }
                let norm = sqrt(e.iter().map(|x| x * x).sum());
                if norm > 0.5 {
                    e.iter_mut().for_each(|x| *x /= norm);
                    normalize_sign(&mut e);
                    basis.push(e.clone());
                    break e;
                }
            },
        })
        .collect()
}
