//! Decomposition of symmetric B0 tensors into a diagonally dominated
//! symmetric M tensor plus positive multiples of partially all-one tensors.
//!
//! Starting from `B_1 = A`, each step takes `J_k` as the rows of `B_k` that
//! still hold a positive off-diagonal entry, `h_k` as the smallest of those
//! rows' largest off-diagonal entries, and sets `B_{k+1} = B_k - h_k E^{J_k}`.
//! The row achieving `h_k` loses all its positive off-diagonal entries, so
//! the sets shrink strictly and the loop stops after at most `n` steps with
//! a Z tensor `M`, which is diagonally dominated because it is still B0.
//!
//! For even order every `E^J x^m = (sum_{j in J} x_j)^m` is nonnegative, so
//! `A x^m >= M x^m >= 0`, and `> 0` for `x != 0` when `M` is strictly
//! diagonally dominated (the B case).

use crate::classify::{self, first_b_violation, row_stats};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::SymTensor;

/// Relative floor for the Z / dominance checks on a computed residual.
pub const RESIDUAL_CHECK_FLOOR: f64 = 1e-12;
/// Relative floor for the reconstruction check.
pub const RECONSTRUCTION_FLOOR: f64 = 1e-10;

/// One extraction `h * E^set`.
#[derive(Clone, Debug, PartialEq)]
pub struct Step<T> {
    /// Sorted zero-based index set.
    pub set: Vec<usize>,
    pub h: T,
}

/// Witness of `A = M + sum_k h_k E^{J_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompCert<T> {
    pub steps: Vec<Step<T>>,
    pub residual: SymTensor<T>,
    /// The input was a B tensor and `M` is strictly diagonally dominated.
    pub strict: bool,
    pub input_digest: String,
    /// Largest entrywise deviation of `M + sum h_k E^{J_k}` from the input.
    pub recon_error: T,
    pub tol: T,
}

impl<T: Scalar> DecompCert<T> {
    /// `M + sum_k h_k E^{J_k}`.
    pub fn reconstruct(&self) -> Result<SymTensor<T>> {
        let (m, n) = (self.residual.order(), self.residual.dim());
        self.steps.iter().try_fold(self.residual.clone(), |acc, step| {
            acc.axpy(step.h.clone(), &SymTensor::partial_all_one(m, n, &step.set)?)
        })
    }
}

/// Rows holding at least one positive off-diagonal entry. By symmetry these
/// are exactly the indices occurring in a positive off-diagonal canonical
/// entry.
pub fn j_hat<T: Scalar>(a: &SymTensor<T>) -> Vec<usize> {
    let mut hit = vec![false; a.dim()];
    for (k, v) in a.entries() {
        if !k.is_diagonal() && v.is_positive() {
            for &i in k.as_slice() {
                hit[i] = true;
            }
        }
    }
    hit.iter()
        .enumerate()
        .filter_map(|(i, &h)| h.then_some(i))
        .collect()
}

/// Largest positive off-diagonal entry of each row, `None` if there is none.
fn largest_positive_offdiag<T: Scalar>(a: &SymTensor<T>) -> Vec<Option<T>> {
    let mut d: Vec<Option<T>> = vec![None; a.dim()];
    for (k, v) in a.entries() {
        if k.is_diagonal() || !v.is_positive() {
            continue;
        }
        for (i, _) in k.groups() {
            d[i] = Some(match d[i].take() {
                Some(cur) => T::max_of(cur, v.clone()),
                None => v.clone(),
            });
        }
    }
    d
}

fn check_b0<T: Scalar>(a: &SymTensor<T>, tol: &T) -> Result<bool> {
    let rows = row_stats(a);
    if let Some((row, why)) = first_b_violation(&rows, a.row_len(), tol, false) {
        return Err(Error::NotB0 {
            row: row + 1,
            reason: why.to_string(),
        });
    }
    Ok(first_b_violation(&rows, a.row_len(), tol, true).is_none())
}

/// Runs the decomposition on a symmetric B0 tensor.
///
/// After every subtraction entries with `|value| <= tol * max|a|` are set to
/// zero. The certificate is strict when `a` is a B tensor within `tol` and
/// the computed residual is strictly diagonally dominated in floating point;
/// a B input whose margin is lost to rounding yields a non-strict
/// certificate.
pub fn decompose_b0<T: Scalar>(a: &SymTensor<T>, tol: &T) -> Result<DecompCert<T>> {
    decompose_b0_with_trace(a, tol).map(|(cert, _)| cert)
}

/// Like [`decompose_b0`], also returning the intermediate tensors
/// `B_1 = a, B_2, ..., B_{s+1} = M`.
pub fn decompose_b0_with_trace<T: Scalar>(
    a: &SymTensor<T>,
    tol: &T,
) -> Result<(DecompCert<T>, Vec<SymTensor<T>>)> {
    let strict = check_b0(a, tol)?;
    let snap = tol.clone() * a.max_abs_entry();

    let mut work = a.clone();
    let mut trace = vec![work.clone()];
    let mut steps = Vec::new();
    let mut active = j_hat(&work);

    while !active.is_empty() {
        if steps.len() == a.dim() {
            return Err(Error::Invariant(format!(
                "decomposition did not terminate within {} steps",
                a.dim()
            )));
        }
        let d = largest_positive_offdiag(&work);
        let h = active
            .iter()
            .map(|&i| d[i].clone().expect("active rows have a positive off-diagonal entry"))
            .reduce(T::min_of)
            .expect("active set is non-empty");

        work.sub_partial_all_one(&h, &active);
        if snap.is_positive() {
            work.prune(&snap);
        }

        let next = j_hat(&work);
        if next.len() >= active.len() || !next.iter().all(|i| active.binary_search(i).is_ok()) {
            return Err(Error::Invariant(format!(
                "active set did not shrink: {active:?} -> {next:?}"
            )));
        }
        steps.push(Step { set: active, h });
        trace.push(work.clone());
        active = next;
    }

    let strict = strict
        && row_stats(&work)
            .iter()
            .all(|r| r.diag > r.abs_offdiag_sum);
    let mut cert = DecompCert {
        steps,
        residual: work,
        strict,
        input_digest: a.digest(),
        recon_error: T::zero(),
        tol: tol.clone(),
    };
    cert.recon_error = cert.reconstruct()?.max_abs_diff(a)?;
    Ok((cert, trace))
}

/// The first certificate clause that failed verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// Some `h_k <= 0` or `J_k` empty / out of range.
    PositiveSteps,
    /// Some `J_{k+1}` is not a proper subset of `J_k`.
    Nesting,
    Reconstruction,
    ZTensor,
    DiagonalDominance,
    StrictDiagonalDominance,
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Clause::PositiveSteps => "positive steps",
            Clause::Nesting => "strict nesting",
            Clause::Reconstruction => "reconstruction",
            Clause::ZTensor => "residual is a Z tensor",
            Clause::DiagonalDominance => "residual is diagonally dominated",
            Clause::StrictDiagonalDominance => "residual is strictly diagonally dominated",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport<T> {
    pub valid: bool,
    pub violation: Option<Clause>,
    pub max_deviation: T,
    /// Absolute tolerance applied to the reconstruction clause.
    pub recon_tol: T,
    /// Absolute tolerance applied to the residual clauses.
    pub residual_tol: T,
}

/// Re-checks a certificate against its input tensor.
///
/// The residual `M` is a computed quantity, so its Z and dominance clauses
/// use `max(tol, 1e-12) * max(1, max|a|)`; reconstruction uses
/// `max(tol, 1e-10) * max(1, max|a|)`.
pub fn verify_cert<T: Scalar>(
    a: &SymTensor<T>,
    cert: &DecompCert<T>,
    tol: &T,
) -> Result<VerifyReport<T>> {
    let digest = a.digest();
    if digest != cert.input_digest {
        return Err(Error::DigestMismatch {
            cert: cert.input_digest.clone(),
            input: digest,
        });
    }
    let m = &cert.residual;
    if m.order() != a.order() || m.dim() != a.dim() {
        return Err(Error::ShapeMismatch(a.order(), a.dim(), m.order(), m.dim()));
    }

    let scale = T::max_of(T::one(), a.max_abs_entry());
    let floor = |f: f64| T::max_of(tol.clone(), T::from_f64(f).expect("finite")) * scale.clone();
    let recon_tol = floor(RECONSTRUCTION_FLOOR);
    let residual_tol = floor(RESIDUAL_CHECK_FLOOR);

    let steps_ok = cert.steps.iter().all(|s| {
        s.h.is_positive()
            && !s.set.is_empty()
            && s.set.windows(2).all(|w| w[0] < w[1])
            && s.set.iter().all(|&i| i < a.dim())
    });
    let nested = cert.steps.windows(2).all(|w| {
        let (outer, inner) = (&w[0].set, &w[1].set);
        inner.len() < outer.len() && inner.iter().all(|i| outer.binary_search(i).is_ok())
    });

    let max_deviation = if steps_ok {
        cert.reconstruct()?.max_abs_diff(a)?
    } else {
        T::zero()
    };

    let rows = row_stats(m);
    let violation = if !steps_ok {
        Some(Clause::PositiveSteps)
    } else if !nested {
        Some(Clause::Nesting)
    } else if !classify::is_z(m, &residual_tol) {
        Some(Clause::ZTensor)
    } else if !rows
        .iter()
        .all(|r| r.diag >= r.abs_offdiag_sum.clone() - residual_tol.clone())
    {
        Some(Clause::DiagonalDominance)
    } else if cert.strict && !rows.iter().all(|r| r.diag > r.abs_offdiag_sum) {
        // strictness is not relaxed by the tolerance
        Some(Clause::StrictDiagonalDominance)
    } else if max_deviation > recon_tol {
        Some(Clause::Reconstruction)
    } else {
        None
    };

    Ok(VerifyReport {
        valid: violation.is_none(),
        violation,
        max_deviation,
        recon_tol,
        residual_tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    PositiveDefinite,
    PositiveSemidefinite,
    /// The sufficient condition does not apply; nothing is claimed.
    NotCertified,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::PositiveDefinite => "PD",
            Verdict::PositiveSemidefinite => "PSD",
            Verdict::NotCertified => "NOT_CERTIFIED",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certification<T> {
    pub verdict: Verdict,
    pub cert: Option<DecompCert<T>>,
}

/// PD for B tensors, PSD for B0 tensors, each backed by a verified
/// decomposition. Even order only.
pub fn certify_definiteness<T: Scalar>(a: &SymTensor<T>, tol: &T) -> Result<Certification<T>> {
    if !a.order().is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "definiteness certificates require even order, got order {}",
            a.order()
        )));
    }
    let cert = match decompose_b0(a, tol) {
        Ok(cert) => cert,
        Err(Error::NotB0 { .. }) => {
            return Ok(Certification {
                verdict: Verdict::NotCertified,
                cert: None,
            })
        }
        Err(e) => return Err(e),
    };
    let report = verify_cert(a, &cert, tol)?;
    if let Some(clause) = report.violation {
        return Err(Error::Invariant(format!(
            "freshly computed certificate fails the {clause} clause"
        )));
    }
    let verdict = if cert.strict {
        Verdict::PositiveDefinite
    } else {
        Verdict::PositiveSemidefinite
    };
    Ok(Certification {
        verdict,
        cert: Some(cert),
    })
}
