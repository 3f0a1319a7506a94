//! Convolution operators `T^g_{A,B}(x, y) = g(x - y)` and `T̃^g_{A,B}(x, y) = g(x + y)`
//! on dense matrices indexed by finite sets, with their spectra.

mod eigen;
mod lemmas;
mod svd;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::conv::MultiplicityMap;
use crate::error::{Error, Result};
use crate::numeric::{pairwise_sum, pow};
use crate::rational::Rational;
use crate::set::FiniteRealSet;
use crate::Budget;

pub use eigen::eigen_spectrum;
pub use lemmas::{verify_action_g_bound, verify_rank_one_lemma};
pub use svd::singular_spectrum;

/// A finitely supported nonnegative weight `g`, sorted by point.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFunction {
    entries: Vec<(Rational, f64)>,
}

impl WeightFunction {
    /// Drops zero weights. Negative or non-finite weights are rejected.
    pub fn from_entries(entries: impl IntoIterator<Item = (Rational, f64)>) -> Result<Self> {
        let mut map: BTreeMap<Rational, f64> = BTreeMap::new();
        for (x, w) in entries {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Precondition("weights must be finite and nonnegative".into()));
            }
            if map.insert(x, w).is_some() {
                return Err(Error::Precondition("duplicate weight point".into()));
            }
        }
        Ok(WeightFunction {
            entries: map.into_iter().filter(|(_, w)| *w > 0.0).collect(),
        })
    }

    pub fn zero() -> Self {
        WeightFunction { entries: Vec::new() }
    }

    pub fn indicator(s: &FiniteRealSet) -> Self {
        WeightFunction {
            entries: s.iter().map(|x| (x.clone(), 1.0)).collect(),
        }
    }

    pub fn point_mass(x: Rational, w: f64) -> Result<Self> {
        Self::from_entries([(x, w)])
    }

    pub fn from_multiplicity(m: &MultiplicityMap) -> Self {
        Self::from_multiplicity_pow(m, 1.0)
    }

    /// `x ↦ m(x)^p`.
    pub fn from_multiplicity_pow(m: &MultiplicityMap, p: f64) -> Self {
        WeightFunction {
            entries: m
                .iter()
                .map(|(x, c)| (x.clone(), if p == 1.0 { c as f64 } else { pow(c as f64, p) }))
                .collect(),
        }
    }

    pub fn get(&self, x: &Rational) -> f64 {
        match self.entries.binary_search_by(|(k, _)| k.cmp(x)) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn entries(&self) -> &[(Rational, f64)] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `g(-x) = g(x)` on the whole support.
    pub fn is_hermitian(&self) -> bool {
        self.entries.iter().all(|(x, w)| self.get(&-x) == *w)
    }

    /// `‖g‖₂²`
    pub fn l2_squared(&self) -> f64 {
        let sq: Vec<f64> = self.entries.iter().map(|(_, w)| w * w).collect();
        pairwise_sum(&sq)
    }

    /// `‖g‖_∞`
    pub fn sup(&self) -> f64 {
        self.entries.iter().map(|(_, w)| *w).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    /// entries `g(x - y)`
    Difference,
    /// entries `g(x + y)`
    Sum,
    /// an arbitrary matrix with set labels
    Explicit,
}

/// A dense real matrix with rows indexed by `A` and columns by `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    rows: FiniteRealSet,
    cols: FiniteRealSet,
    data: Vec<f64>,
    kind: OperatorKind,
}

impl DenseOperator {
    /// Wraps a row-major matrix.
    pub fn from_matrix(rows: FiniteRealSet, cols: FiniteRealSet, data: Vec<f64>) -> Result<Self> {
        let expected = rows.len() * cols.len();
        if data.len() != expected {
            return Err(Error::Dimension { expected, got: data.len() });
        }
        Ok(DenseOperator {
            rows,
            cols,
            data,
            kind: OperatorKind::Explicit,
        })
    }

    pub fn rows(&self) -> &FiniteRealSet {
        &self.rows
    }

    pub fn cols(&self) -> &FiniteRealSet {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.ncols() + j]
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Exact entrywise symmetry.
    pub fn is_symmetric(&self) -> bool {
        let n = self.nrows();
        self.is_square() && (0..n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> f64 {
        let diag: Vec<f64> = (0..self.nrows().min(self.ncols())).map(|i| self.get(i, i)).collect();
        pairwise_sum(&diag)
    }

    pub fn frobenius(&self) -> f64 {
        let sq: Vec<f64> = self.data.iter().map(|x| x * x).collect();
        crate::numeric::sqrt(pairwise_sum(&sq))
    }

    /// `M v` for `v` indexed by the columns.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.ncols();
        self.data.chunks(n).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `Mᵀ u` for `u` indexed by the rows.
    pub fn matvec_t(&self, u: &[f64]) -> Vec<f64> {
        let n = self.ncols();
        let mut out = alloc::vec![0.0; n];
        for (row, ui) in self.data.chunks(n).zip(u) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * ui;
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseOperator {
        let (m, n) = (self.nrows(), self.ncols());
        let mut data = alloc::vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                data[j * m + i] = self.data[i * n + j];
            }
        }
        DenseOperator {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            data,
            kind: self.kind,
        }
    }
}

/// `T^g_{A,B}` (difference kind) or `T̃^g_{A,B}` (sum kind).
pub fn build_operator(
    g: &WeightFunction,
    rows: &FiniteRealSet,
    cols: &FiniteRealSet,
    kind: OperatorKind,
    budget: &Budget,
) -> Result<DenseOperator> {
    let required = (rows.len() as u64).saturating_mul(cols.len() as u64);
    if required > budget.dense_entries {
        return Err(Error::Budget {
            what: "dense operator entries",
            required,
            budget: budget.dense_entries,
        });
    }
    let mut data = Vec::with_capacity(required as usize);
    for x in rows {
        for y in cols {
            let w = match kind {
                OperatorKind::Difference => g.get(&(x - y)),
                OperatorKind::Sum => g.get(&(x + y)),
                OperatorKind::Explicit => {
                    return Err(Error::Precondition("explicit operators are built from matrices".into()))
                }
            };
            data.push(w);
        }
    }
    Ok(DenseOperator {
        rows: rows.clone(),
        cols: cols.clone(),
        data,
        kind,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumKind {
    Eigen,
    Singular,
}

/// Descending eigenvalues or singular values with their vectors.
///
/// For eigen spectra `vectors[j]` is the unit eigenvector of `values[j]`.
/// For singular spectra `vectors[j]` is the right vector `v_j` (indexed by
/// columns) and `left_vectors[j]` the left vector `u_j` (indexed by rows).
/// Each vector's first component above `1e-12` in magnitude is positive;
/// for singular triples with nonzero value the sign is fixed on `v_j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub kind: SpectrumKind,
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub left_vectors: Vec<Vec<f64>>,
}

impl SpectrumResult {
    /// Largest `‖M v_j − λ_j u_j‖` (or `‖M f_j − μ_j f_j‖`).
    pub fn max_residual(&self, op: &DenseOperator) -> f64 {
        let lefts = match self.kind {
            SpectrumKind::Eigen => &self.vectors,
            SpectrumKind::Singular => &self.left_vectors,
        };
        self.values
            .iter()
            .zip(&self.vectors)
            .zip(lefts)
            .map(|((l, v), u)| {
                let mv = op.matvec(v);
                let sq: f64 = mv.iter().zip(u).map(|(a, b)| (a - l * b) * (a - l * b)).sum();
                crate::numeric::sqrt(sq)
            })
            .fold(0.0, f64::max)
    }

    /// `Σ_j λ_j u_j(x) v_j(y)` as a row-major matrix.
    pub fn reconstruct(&self) -> Vec<f64> {
        let lefts = match self.kind {
            SpectrumKind::Eigen => &self.vectors,
            SpectrumKind::Singular => &self.left_vectors,
        };
        let m = lefts.first().map_or(0, |u| u.len());
        let n = self.vectors.first().map_or(0, |v| v.len());
        let mut out = alloc::vec![0.0; m * n];
        for ((l, u), v) in self.values.iter().zip(lefts).zip(&self.vectors) {
            for i in 0..m {
                for j in 0..n {
                    out[i * n + j] += l * u[i] * v[j];
                }
            }
        }
        out
    }
}

pub(crate) fn normalize_sign(v: &mut [f64]) -> bool {
    if let Some(x) = v.iter().find(|x| crate::numeric::abs(**x) > 1e-12) {
        if *x < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
            return true;
        }
    }
    false
}

/// `⟨M a, b⟩` with `a` indexed by the columns and `b` by the rows.
pub fn apply_action(op: &DenseOperator, a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != op.ncols() {
        return Err(Error::Dimension { expected: op.ncols(), got: a.len() });
    }
    if b.len() != op.nrows() {
        return Err(Error::Dimension { expected: op.nrows(), got: b.len() });
    }
    let ma = op.matvec(a);
    let terms: Vec<f64> = ma.iter().zip(b).map(|(x, y)| x * y).collect();
    Ok(pairwise_sum(&terms))
}

/// The same pairing computed on the group side:
/// `Σ_z g(z) Σ_y a(y) b(y + z)` for the difference kind and
/// `Σ_z g(z) Σ_y a(y) b(z - y)` for the sum kind, where `a` lives on `cols`
/// and `b` on `rows`.
pub fn action_by_convolution(
    g: &WeightFunction,
    kind: OperatorKind,
    rows: &FiniteRealSet,
    cols: &FiniteRealSet,
    a: &[f64],
    b: &[f64],
) -> Result<f64> {
    if a.len() != cols.len() {
        return Err(Error::Dimension { expected: cols.len(), got: a.len() });
    }
    if b.len() != rows.len() {
        return Err(Error::Dimension { expected: rows.len(), got: b.len() });
    }
    let mut corr: BTreeMap<Rational, Vec<f64>> = BTreeMap::new();
    for (y, ay) in cols.iter().zip(a) {
        for (x, bx) in rows.iter().zip(b) {
            let z = match kind {
                OperatorKind::Difference => x - y,
                OperatorKind::Sum => x + y,
                OperatorKind::Explicit => {
                    return Err(Error::Precondition("explicit operators carry no weight".into()))
                }
            };
            corr.entry(z).or_default().push(ay * bx);
        }
    }
    let terms: Vec<f64> = corr
        .iter()
        .map(|(z, prods)| g.get(z) * pairwise_sum(prods))
        .collect();
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conv::convolve_minus;
    use alloc::vec;

    fn set(v: &[i64]) -> FiniteRealSet {
        FiniteRealSet::from_integers(v.iter().copied()).unwrap()
    }

    #[test]
    fn build_examples() {
        let a = set(&[0, 1, 2]);
        let g = WeightFunction::from_multiplicity(&convolve_minus(&a, &a));
        assert!(g.is_hermitian());
        let op = build_operator(&g, &a, &a, OperatorKind::Difference, &Budget::default()).unwrap();
        assert_eq!(op.data(), &[3.0, 2.0, 1.0, 2.0, 3.0, 2.0, 1.0, 2.0, 3.0]);
        assert!(op.is_symmetric());
        assert_eq!(op.trace(), 9.0);

        let b = set(&[0, 1]);
        let ind = WeightFunction::indicator(&a);
        let ones = build_operator(&ind, &b, &b, OperatorKind::Sum, &Budget::default()).unwrap();
        assert_eq!(ones.data(), &[1.0; 4]);

        let zero = build_operator(&WeightFunction::zero(), &a, &b, OperatorKind::Difference, &Budget::default()).unwrap();
        assert!(zero.data().iter().all(|x| *x == 0.0));

        let tight = Budget { dense_entries: 8, ..Budget::default() };
        assert!(matches!(
            build_operator(&g, &a, &a, OperatorKind::Difference, &tight),
            Err(Error::Budget { required: 9, .. })
        ));
    }

    #[test]
    fn weight_validation() {
        assert!(WeightFunction::from_entries([(Rational::one(), -1.0)]).is_err());
        let g = WeightFunction::from_entries([(Rational::one(), 2.0), (Rational::zero(), 0.0)]).unwrap();
        assert_eq!(g.entries().len(), 1);
        assert!(!g.is_hermitian());
        assert_eq!(g.l2_squared(), 4.0);
        assert_eq!(g.sup(), 2.0);
    }

    #[test]
    fn action_examples() {
        let a = set(&[0, 1, 2]);
        let m = convolve_minus(&a, &a);
        let ones = vec![1.0; 3];
        for (p, expect) in [(1.0, 19.0), (0.5, 3f64.powf(1.5) + 4.0 * 2f64.sqrt() + 2.0)] {
            let g = WeightFunction::from_multiplicity_pow(&m, p);
            let op = build_operator(&g, &a, &a, OperatorKind::Difference, &Budget::default()).unwrap();
            let lhs = apply_action(&op, &ones, &ones).unwrap();
            let rhs = action_by_convolution(&g, OperatorKind::Difference, &a, &a, &ones, &ones).unwrap();
            assert!((lhs - expect).abs() < 1e-12 * expect);
            assert!((rhs - expect).abs() < 1e-12 * expect);
        }
        let g = WeightFunction::from_multiplicity(&m);
        let op = build_operator(&g, &a, &a, OperatorKind::Difference, &Budget::default()).unwrap();
        assert_eq!(apply_action(&op, &[0.0; 3], &ones).unwrap(), 0.0);
        assert!(matches!(apply_action(&op, &[1.0; 2], &ones), Err(Error::Dimension { .. })));
    }

    #[test]
    fn action_orientation_for_asymmetric_weights() {
        let rows = set(&[0, 3, 7]);
        let cols = set(&[1, 2]);
        let g = WeightFunction::from_entries([
            (Rational::from(1), 2.0),
            (Rational::from(-1), 0.5),
            (Rational::from(5), 3.0),
            (Rational::from(9), 1.5),
        ])
        .unwrap();
        let a = [0.3, 0.9];
        let b = [0.2, 0.7, 0.4];
        for kind in [OperatorKind::Difference, OperatorKind::Sum] {
            let op = build_operator(&g, &rows, &cols, kind, &Budget::default()).unwrap();
            let lhs = apply_action(&op, &a, &b).unwrap();
            let rhs = action_by_convolution(&g, kind, &rows, &cols, &a, &b).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs(), "{kind:?}: {lhs} vs {rhs}");
        }
    }
}
