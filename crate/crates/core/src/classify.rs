//! Row statistics, class membership tests and Gershgorin localization.
//!
//! Every comparison takes one absolute tolerance `tol`: weak inequalities
//! `a >= b` are tested as `a >= b - tol`, strict ones `a > b` as
//! `a > b + tol`. With `tol = 0` the tests are exact in the scalar type.

use serde::Serialize;

use crate::scalar::Scalar;
use crate::tensor::SymTensor;

/// Aggregates over row `i`, i.e. over all `a_{i i2 ... im}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RowStats<T> {
    pub row: usize,
    /// `a_{i...i}`
    pub diag: T,
    pub row_sum: T,
    /// Signed sum of the off-diagonal entries of the row.
    pub offdiag_sum: T,
    /// Largest off-diagonal entry, implicit zeros included. `None` when the
    /// row has no off-diagonal entries (`n = 1`).
    pub max_offdiag: Option<T>,
    /// Gershgorin radius: sum of absolute off-diagonal entries.
    pub abs_offdiag_sum: T,
}

/// Computes [`RowStats`] for every row without expanding the dense array.
///
/// A canonical entry `alpha` contributes to row `i` once per permutation
/// whose first coordinate is `i`, which is `multiplicity(alpha) * count_i / m`.
pub fn row_stats<T: Scalar>(a: &SymTensor<T>) -> Vec<RowStats<T>> {
    let n = a.dim();
    let row_len = a.row_len();
    let mut diag = vec![T::zero(); n];
    let mut signed = vec![T::zero(); n];
    let mut absolute = vec![T::zero(); n];
    let mut max_off: Vec<Option<T>> = vec![None; n];
    let mut stored_off = vec![0u64; n];

    for (k, v) in a.entries() {
        if k.is_diagonal() {
            diag[k.as_slice()[0]] = v.clone();
            continue;
        }
        let mult = k.multiplicity();
        for (i, c) in k.groups() {
            let w = (u128::from(mult) * c as u128 / k.order() as u128) as u64;
            let wt = T::from_count(w);
            // the absolute sum is the exact negation of the signed one on Z rows
            signed[i] = signed[i].clone() + wt.clone() * v.clone();
            absolute[i] = absolute[i].clone() + wt * v.abs();
            stored_off[i] += w;
            max_off[i] = Some(match max_off[i].take() {
                Some(m) => T::max_of(m, v.clone()),
                None => v.clone(),
            });
        }
    }

    (0..n)
        .map(|i| {
            let has_implicit_zero = stored_off[i] < row_len - 1;
            let max_offdiag = match max_off[i].take() {
                Some(m) if has_implicit_zero => Some(T::max_of(m, T::zero())),
                Some(m) => Some(m),
                None if row_len > 1 => Some(T::zero()),
                None => None,
            };
            RowStats {
                row: i,
                row_sum: diag[i].clone() + signed[i].clone(),
                diag: diag[i].clone(),
                offdiag_sum: signed[i].clone(),
                max_offdiag,
                abs_offdiag_sum: absolute[i].clone(),
            }
        })
        .collect()
}

/// Which B/B0 condition a row violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowViolation {
    /// The row sum is not positive (B) or is negative (B0).
    RowSum,
    /// Some off-diagonal entry is not below (B) or exceeds (B0) the row mean.
    RowMean,
}

impl std::fmt::Display for RowViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowViolation::RowSum => write!(f, "the row-sum condition"),
            RowViolation::RowMean => write!(f, "the row-mean vs off-diagonal condition"),
        }
    }
}

/// First row violating the B (`strict`) or B0 condition, if any.
pub fn first_b_violation<T: Scalar>(
    rows: &[RowStats<T>],
    row_len: u64,
    tol: &T,
    strict: bool,
) -> Option<(usize, RowViolation)> {
    let n_row = T::from_count(row_len);
    rows.iter().find_map(|r| {
        let sum_ok = if strict {
            r.row_sum > tol.clone()
        } else {
            r.row_sum >= -tol.clone()
        };
        if !sum_ok {
            return Some((r.row, RowViolation::RowSum));
        }
        let mean = r.row_sum.clone() / n_row.clone();
        let mean_ok = match &r.max_offdiag {
            None => true,
            Some(d) if strict => mean > d.clone() + tol.clone(),
            Some(d) => mean >= d.clone() - tol.clone(),
        };
        (!mean_ok).then_some((r.row, RowViolation::RowMean))
    })
}

pub fn is_b<T: Scalar>(a: &SymTensor<T>, tol: &T) -> bool {
    first_b_violation(&row_stats(a), a.row_len(), tol, true).is_none()
}

pub fn is_b0<T: Scalar>(a: &SymTensor<T>, tol: &T) -> bool {
    first_b_violation(&row_stats(a), a.row_len(), tol, false).is_none()
}

/// Every off-diagonal entry is `<= tol`.
pub fn is_z<T: Scalar>(a: &SymTensor<T>, tol: &T) -> bool {
    a.entries()
        .filter(|(k, _)| !k.is_diagonal())
        .all(|(_, v)| *v <= *tol)
}

fn dd_rows<T: Scalar>(rows: &[RowStats<T>], tol: &T) -> bool {
    rows.iter()
        .all(|r| r.diag >= r.abs_offdiag_sum.clone() - tol.clone())
}

fn sdd_rows<T: Scalar>(rows: &[RowStats<T>], tol: &T) -> bool {
    rows.iter()
        .all(|r| r.diag > r.abs_offdiag_sum.clone() + tol.clone())
}

pub fn is_dd<T: Scalar>(a: &SymTensor<T>, tol: &T) -> bool {
    dd_rows(&row_stats(a), tol)
}

pub fn is_sdd<T: Scalar>(a: &SymTensor<T>, tol: &T) -> bool {
    sdd_rows(&row_stats(a), tol)
}

/// Sufficient M-tensor certificate from diagonal dominance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MCertificate {
    pub is_m: bool,
    pub is_strong_m: bool,
}

/// A diagonally dominated Z tensor is an M tensor; a strictly diagonally
/// dominated one is a strong M tensor. `false` means "not certified", not
/// "not an M tensor".
pub fn certify_m_via_dd<T: Scalar>(a: &SymTensor<T>, tol: &T) -> MCertificate {
    let rows = row_stats(a);
    let z = is_z(a, tol);
    MCertificate {
        is_m: z && dd_rows(&rows, tol),
        is_strong_m: z && sdd_rows(&rows, tol),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<T> {
    pub is_b: bool,
    pub is_b0: bool,
    pub is_z: bool,
    pub is_dd: bool,
    pub is_sdd: bool,
    pub is_m_certified: bool,
    pub tol: T,
    pub rows: Vec<RowStats<T>>,
}

pub fn classify<T: Scalar>(a: &SymTensor<T>, tol: &T) -> Classification<T> {
    let rows = row_stats(a);
    let row_len = a.row_len();
    let is_z = is_z(a, tol);
    let is_dd = dd_rows(&rows, tol);
    Classification {
        is_b: first_b_violation(&rows, row_len, tol, true).is_none(),
        is_b0: first_b_violation(&rows, row_len, tol, false).is_none(),
        is_z,
        is_dd,
        is_sdd: sdd_rows(&rows, tol),
        is_m_certified: is_z && is_dd,
        tol: tol.clone(),
        rows,
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

/// Per-row discs `[a_{i...i} - R_i, a_{i...i} + R_i]` containing every
/// eigenvalue of the tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct GershgorinIntervals<T> {
    pub intervals: Vec<Interval<T>>,
}

impl<T: Scalar> GershgorinIntervals<T> {
    /// Whether `lambda` lies in the union, each interval widened by `slack`.
    pub fn contains(&self, lambda: &T, slack: &T) -> bool {
        self.intervals.iter().any(|iv| {
            *lambda >= iv.lo.clone() - slack.clone() && *lambda <= iv.hi.clone() + slack.clone()
        })
    }
}

pub fn gershgorin<T: Scalar>(a: &SymTensor<T>) -> GershgorinIntervals<T> {
    let intervals = row_stats(a)
        .into_iter()
        .map(|r| Interval {
            lo: r.diag.clone() - r.abs_offdiag_sum.clone(),
            hi: r.diag + r.abs_offdiag_sum,
        })
        .collect();
    GershgorinIntervals { intervals }
}
