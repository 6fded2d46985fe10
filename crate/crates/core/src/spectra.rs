//! Numerical cross-checks: H-eigenpair residuals, smallest H-eigenvalue
//! estimation, spectral radius of nonnegative tensors and a brute-force
//! sphere minimum.
//!
//! For even `m` the critical points of `A x^m` on the surface
//! `sum |x_i|^m = 1` are exactly the real solutions of
//! `A x^{m-1} = lambda x^{[m-1]}` with `lambda = A x^m`, so minimizing the
//! form on that surface yields H-eigenpairs directly.

use std::cmp::Ordering;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{power_vec, SymTensor};

/// Default residual threshold for accepting an H-eigenpair.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-10;
/// Default iteration cap per restart.
pub const DEFAULT_MAX_ITERS: usize = 5000;
/// Name of the step rule recorded in reports.
pub const STEP_RULE: &str = "projected-gradient/armijo-halving-doubling";

/// A candidate solution of `A x^{m-1} = lambda x^{[m-1]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HEigenPair<T> {
    pub lambda: T,
    /// Normalized so that `sum |x_i|^m = 1`.
    pub x: Vec<T>,
    /// Max-norm of `A x^{m-1} - lambda x^{[m-1]}`.
    pub residual: T,
}

fn m_normalize<T: Scalar + Float>(x: &[T], order: usize) -> Result<Vec<T>> {
    let p = T::from_usize(order).expect("small integer");
    let total = x
        .iter()
        .fold(T::zero(), |acc, v| acc + Float::powi(Float::abs(*v), order as i32));
    if total.is_zero() || !Float::is_finite(total) {
        return Err(Error::ZeroVector);
    }
    let norm = Float::powf(total, T::one() / p);
    Ok(x.iter().map(|v| *v / norm).collect())
}

fn defect<T: Scalar + Float>(a: &SymTensor<T>, lambda: T, x: &[T]) -> Result<Vec<T>> {
    let ax = a.apply(x)?;
    let xp = power_vec(x, (a.order() - 1) as u32);
    Ok(ax
        .iter()
        .zip(&xp)
        .map(|(g, c)| *g - lambda * *c)
        .collect())
}

fn max_abs<T: Scalar + Float>(v: &[T]) -> T {
    v.iter()
        .fold(T::zero(), |acc, e| Float::max(acc, Float::abs(*e)))
}

/// Max-norm of `A x^{m-1} - lambda x^{[m-1]}` after scaling `x` to unit
/// m-norm.
pub fn residual<T: Scalar + Float>(a: &SymTensor<T>, lambda: T, x: &[T]) -> Result<T> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: x.len(),
        });
    }
    let x = m_normalize(x, a.order())?;
    Ok(max_abs(&defect(a, lambda, &x)?))
}

/// Builds the pair at `x` with `lambda = A x^m` (x normalized first).
pub fn rayleigh_pair<T: Scalar + Float>(a: &SymTensor<T>, x: &[T]) -> Result<HEigenPair<T>> {
    let x = m_normalize(x, a.order())?;
    let lambda = a.eval_xm(&x)?;
    let residual = max_abs(&defect(a, lambda, &x)?);
    Ok(HEigenPair {
        lambda,
        x,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectraOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SpectraOptions {
    fn default() -> Self {
        SpectraOptions {
            restarts: 16,
            max_iters: DEFAULT_MAX_ITERS,
            seed: 0,
            tol: DEFAULT_RESIDUAL_TOL,
        }
    }
}

/// Outcome of one restart.
#[derive(Clone, Debug, PartialEq)]
pub struct RestartOutcome<T> {
    pub restart: usize,
    pub pair: HEigenPair<T>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport<T> {
    /// Smallest converged `lambda`; `None` when nothing converged.
    pub min_h_estimate: Option<T>,
    pub best_pair: Option<HEigenPair<T>>,
    /// Converged pairs ordered by `(lambda, x)`.
    pub pairs: Vec<HEigenPair<T>>,
    pub restarts: usize,
    pub converged_count: usize,
    /// Iterations used by each restart, in restart order.
    pub iterations: Vec<usize>,
    pub max_iters: usize,
    pub seed: u64,
    pub tol: f64,
    pub step_rule: &'static str,
}

impl<T> SpectrumReport<T> {
    /// `false` when no restart converged ("inconclusive").
    pub fn is_conclusive(&self) -> bool {
        self.converged_count > 0
    }
}

/// Random generator for restart `restart`: the master seed selects the
/// ChaCha8 key and the restart number selects the stream.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn cmp_pairs<T: Scalar + Float>(a: &HEigenPair<T>, b: &HEigenPair<T>) -> Ordering {
    a.lambda
        .partial_cmp(&b.lambda)
        .unwrap_or(Ordering::Equal)
        .then_with(|| {
            a.x.iter()
                .zip(&b.x)
                .map(|(p, q)| p.partial_cmp(q).unwrap_or(Ordering::Equal))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Minimizes `A x^m` on `sum |x_i|^m = 1` from a given start.
///
/// The search direction is the residual vector `A x^{m-1} - lambda x^{[m-1]}`,
/// which is `1/m` times the gradient of `A y^m / sum |y_i|^m` at `x`. Steps
/// that fail the Armijo test are halved; accepted steps double the next trial.
/// Once the objective stops decreasing in floating point the iterate is
/// refined by [`newton_polish`].
pub fn descend<T: Scalar + Float>(
    a: &SymTensor<T>,
    start: &[T],
    max_iters: usize,
    tol: T,
) -> Result<(HEigenPair<T>, usize, bool)> {
    let m = a.order();
    let mt = T::from_usize(m).expect("small integer");
    let scale = Float::max(a.max_abs_entry(), T::min_positive_value());
    let initial_step = T::one() / (mt * scale * T::from_count(a.row_len()));
    let armijo = T::from_f64(1e-4).expect("constant");
    let tiny = T::epsilon() * T::epsilon();

    let mut x = m_normalize(start, m)?;
    let mut f = a.eval_xm(&x)?;
    let mut step = initial_step;
    let mut iters = max_iters;

    'outer: for iter in 0..max_iters {
        let p = defect(a, f, &x)?;
        let r = max_abs(&p);
        if r <= tol {
            return Ok((HEigenPair { lambda: f, x, residual: r }, iter, true));
        }
        let p_sq = p.iter().fold(T::zero(), |acc, v| acc + *v * *v);
        loop {
            let trial: Vec<T> = x.iter().zip(&p).map(|(xi, pi)| *xi - step * *pi).collect();
            let trial = m_normalize(&trial, m)?;
            let f_new = a.eval_xm(&trial)?;
            if f_new < f && f_new <= f - armijo * step * mt * p_sq {
                x = trial;
                f = f_new;
                step = step + step;
                break;
            }
            step = step / (T::one() + T::one());
            if step < initial_step * tiny {
                iters = iter + 1;
                break 'outer;
            }
        }
    }
    let residual = max_abs(&defect(a, f, &x)?);
    let pair = HEigenPair { lambda: f, x, residual };
    if residual <= tol {
        return Ok((pair, iters, true));
    }
    let polished = newton_polish(a, &pair, 20)?;
    let drift = Float::abs(polished.lambda - pair.lambda);
    let allowed = T::from_f64(1e-6).expect("constant") * Float::max(T::one(), Float::abs(pair.lambda));
    if polished.residual < pair.residual && drift <= allowed {
        let ok = polished.residual <= tol;
        Ok((polished, iters, ok))
    } else {
        Ok((pair, iters, false))
    }
}

/// Newton refinement of an approximate H-eigenpair on the system
/// `A x^{m-1} - lambda x^{[m-1]} = 0`, `sum |x_i|^m = 1`.
///
/// Returns the best pair seen (by residual); stops early when the Jacobian is
/// numerically singular or the residual stops improving.
pub fn newton_polish<T: Scalar + Float>(
    a: &SymTensor<T>,
    pair: &HEigenPair<T>,
    max_steps: usize,
) -> Result<HEigenPair<T>> {
    let (m, n) = (a.order(), a.dim());
    let mt = T::from_usize(m).expect("small integer");
    let m1 = T::from_usize(m - 1).expect("small integer");
    let mut best = pair.clone();
    let mut x = pair.x.clone();
    let mut lambda = pair.lambda;

    for _ in 0..max_steps {
        let f = defect(a, lambda, &x)?;
        let h = a.apply2(&x)?;
        // signed powers |x_i|^{k} sign(x_i)
        let signed = |k: i32| -> Vec<T> {
            x.iter()
                .map(|v| Float::powi(Float::abs(*v), k) * Float::signum(*v))
                .collect()
        };
        let g = signed(m as i32 - 1);
        let c = x
            .iter()
            .fold(T::zero(), |acc, v| acc + Float::powi(Float::abs(*v), m as i32))
            - T::one();

        let mut jac = vec![vec![T::zero(); n + 2]; n + 1];
        for i in 0..n {
            for j in 0..n {
                jac[i][j] = m1 * h[i][j];
            }
            jac[i][i] = jac[i][i] - m1 * lambda * Float::powi(Float::abs(x[i]), m as i32 - 2);
            jac[i][n] = -g[i];
            jac[i][n + 1] = -f[i];
            jac[n][i] = g[i];
        }
        jac[n][n + 1] = -c / mt;
        let Some(d) = solve_augmented(jac) else { break };

        let trial: Vec<T> = x.iter().zip(&d).map(|(xi, di)| *xi + *di).collect();
        let Ok(candidate) = rayleigh_pair(a, &trial) else { break };
        if !(candidate.residual < best.residual) {
            break;
        }
        x = candidate.x.clone();
        lambda = candidate.lambda;
        best = candidate;
    }
    Ok(best)
}

/// Gaussian elimination with partial pivoting on an `k x (k+1)` augmented
/// matrix; `None` when a pivot is negligible.
fn solve_augmented<T: Scalar + Float>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let k = a.len();
    let scale = a
        .iter()
        .flat_map(|row| row[..k].iter())
        .fold(T::zero(), |acc, v| Float::max(acc, Float::abs(*v)));
    let eps = T::epsilon() * scale * T::from_usize(k).expect("small integer");
    for col in 0..k {
        let pivot = (col..k).max_by(|&p, &q| {
            Float::abs(a[p][col])
                .partial_cmp(&Float::abs(a[q][col]))
                .unwrap_or(Ordering::Equal)
        })?;
        if !(Float::abs(a[pivot][col]) > eps) {
            return None;
        }
        a.swap(col, pivot);
        for r in col + 1..k {
            let factor = a[r][col] / a[col][col];
            for c in col..=k {
                a[r][c] = a[r][c] - factor * a[col][c];
            }
        }
    }
    let mut out = vec![T::zero(); k];
    for r in (0..k).rev() {
        let tail = (r + 1..k).fold(T::zero(), |acc, c| acc + a[r][c] * out[c]);
        out[r] = (a[r][k] - tail) / a[r][r];
    }
    Some(out)
}

/// Multi-start estimate of the smallest H-eigenvalue of an even-order
/// symmetric tensor.
///
/// Restart `k` starts from a point with components uniform in `[-1, 1]`
/// drawn from [`restart_rng`]`(seed, k)`. Restarts run in parallel and are
/// merged in restart order, so the report does not depend on scheduling.
pub fn min_h_eigenvalue<T: Scalar + Float>(
    a: &SymTensor<T>,
    opts: &SpectraOptions,
) -> Result<SpectrumReport<T>> {
    if !a.order().is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "smallest H-eigenvalue search requires even order, got order {}",
            a.order()
        )));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidSpec("restarts must be at least 1".into()));
    }
    let tol = T::from_f64(opts.tol).ok_or(Error::NonFinite(opts.tol))?;

    let outcomes: Vec<RestartOutcome<T>> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = restart_rng(opts.seed, k);
            let start: Vec<T> = loop {
                let s: Vec<f64> = (0..a.dim())
                    .map(|_| 2.0 * rng.random::<f64>() - 1.0)
                    .collect();
                if s.iter().any(|v| *v != 0.0) {
                    break s.into_iter().map(|v| T::from_f64(v).expect("finite")).collect();
                }
            };
            descend(a, &start, opts.max_iters, tol).map(|(pair, iterations, converged)| {
                RestartOutcome {
                    restart: k,
                    pair,
                    iterations,
                    converged,
                }
            })
        })
        .collect::<Result<_>>()?;

    let iterations = outcomes.iter().map(|o| o.iterations).collect();
    let mut pairs: Vec<HEigenPair<T>> = outcomes
        .into_iter()
        .filter(|o| o.converged)
        .map(|o| o.pair)
        .collect();
    pairs.sort_by(cmp_pairs);

    Ok(SpectrumReport {
        min_h_estimate: pairs.first().map(|p| p.lambda),
        best_pair: pairs.first().cloned(),
        converged_count: pairs.len(),
        pairs,
        restarts: opts.restarts,
        iterations,
        max_iters: opts.max_iters,
        seed: opts.seed,
        tol: opts.tol,
        step_rule: STEP_RULE,
    })
}

/// Bracketed spectral radius estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusEstimate<T> {
    pub estimate: T,
    pub lower: T,
    pub upper: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Spectral radius of a nonnegative tensor by power iteration on `B + I`.
///
/// The iterate stays positive, so the min and max of
/// `(B x^{m-1})_i / x_i^{m-1}` bracket the radius at every step; the loop
/// stops once `upper - lower <= tol * max(1, upper)` and otherwise returns
/// the last bracket.
pub fn spectral_radius_nonneg<T: Scalar + Float>(
    b: &SymTensor<T>,
    tol: T,
    max_iters: usize,
) -> Result<RadiusEstimate<T>> {
    if let Some((k, v)) = b.entries().find(|(_, v)| v.is_negative()) {
        return Err(Error::NegativeEntry {
            index: k.to_one_based(),
            value: v.to_f64_lossy(),
        });
    }
    if b.is_zero() {
        return Ok(RadiusEstimate {
            estimate: T::zero(),
            lower: T::zero(),
            upper: T::zero(),
            iterations: 0,
            converged: true,
        });
    }
    let m = b.order();
    let root = T::one() / T::from_usize(m - 1).expect("small integer");
    let mut x = vec![T::one(); b.dim()];
    let mut lower = T::zero();
    let mut upper = T::infinity();

    for iter in 0..max_iters.max(1) {
        let bx = b.apply(&x)?;
        let xp = power_vec(&x, (m - 1) as u32);
        let y: Vec<T> = bx.iter().zip(&xp).map(|(u, v)| *u + *v).collect();
        let (lo, hi) = y.iter().zip(&xp).fold(
            (T::infinity(), T::neg_infinity()),
            |(lo, hi), (yi, xi)| {
                let r = *yi / *xi - T::one();
                (Float::min(lo, r), Float::max(hi, r))
            },
        );
        lower = Float::max(lower, Float::max(lo, T::zero()));
        upper = Float::min(upper, hi);
        if upper - lower <= tol * Float::max(T::one(), upper) {
            return Ok(RadiusEstimate {
                estimate: (lower + upper) / (T::one() + T::one()),
                lower,
                upper,
                iterations: iter + 1,
                converged: true,
            });
        }
        let next: Vec<T> = y.iter().map(|v| Float::powf(*v, root)).collect();
        let top = next.iter().fold(T::zero(), |acc, v| Float::max(acc, *v));
        x = next.iter().map(|v| *v / top).collect();
    }
    Ok(RadiusEstimate {
        estimate: (lower + upper) / (T::one() + T::one()),
        lower,
        upper,
        iterations: max_iters.max(1),
        converged: false,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereMin<T> {
    pub min_value: T,
    /// Unit Euclidean vector attaining `min_value` on the grid.
    pub argmin: Vec<T>,
    pub points: usize,
}

/// Minimum of `A x^m` over a uniform angular grid on the unit Euclidean
/// sphere, for `n <= 3`.
///
/// `resolution` is the number of angle steps over a half turn (`n = 2`
/// samples `2 * resolution` angles; `n = 3` samples `resolution + 1` polar
/// by `2 * resolution` azimuthal angles). A negative minimum proves the form
/// is not positive semi-definite; a positive one is only evidence.
pub fn sphere_min_oracle<T: Scalar + Float>(
    a: &SymTensor<T>,
    resolution: usize,
) -> Result<SphereMin<T>> {
    if a.dim() > 3 {
        return Err(Error::Unsupported(format!(
            "sphere oracle supports dimension <= 3, got {}",
            a.dim()
        )));
    }
    if resolution == 0 {
        return Err(Error::InvalidSpec("resolution must be at least 1".into()));
    }
    let mut best: Option<(T, Vec<T>)> = None;
    let mut points = 0usize;
    let mut visit = |x: Vec<T>| -> Result<()> {
        points += 1;
        let v = a.eval_xm(&x)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, x));
        }
        Ok(())
    };
    let pi = std::f64::consts::PI;
    let cast = |v: f64| T::from_f64(v).expect("finite");
    match a.dim() {
        1 => {
            visit(vec![T::one()])?;
            visit(vec![-T::one()])?;
        }
        2 => {
            for k in 0..2 * resolution {
                let t = pi * k as f64 / resolution as f64;
                visit(vec![cast(t.cos()), cast(t.sin())])?;
            }
        }
        _ => {
            for j in 0..=resolution {
                let theta = pi * j as f64 / resolution as f64;
                let azimuths = if j == 0 || j == resolution { 1 } else { 2 * resolution };
                for k in 0..azimuths {
                    let phi = pi * k as f64 / resolution as f64;
                    visit(vec![
                        cast(theta.sin() * phi.cos()),
                        cast(theta.sin() * phi.sin()),
                        cast(theta.cos()),
                    ])?;
                }
            }
        }
    }
    let (min_value, argmin) = best.expect("grid is non-empty");
    Ok(SphereMin {
        min_value,
        argmin,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(m: usize, n: usize) -> SymTensor<f64> {
        SymTensor::all_one(m, n).unwrap()
    }

    #[test]
    fn residual_examples() {
        let id = SymTensor::<f64>::identity(4, 2).unwrap();
        assert_eq!(residual(&id, 1.0, &[1.0, 0.0]).unwrap(), 0.0);
        let c = 2f64.powf(-0.25);
        assert!(residual(&ones(4, 2), 8.0, &[c, c]).unwrap() < 1e-12);
        assert!(residual(&ones(4, 2), 0.0, &[c, -c]).unwrap() < 1e-12);
        assert!(matches!(
            residual(&id, 1.0, &[0.0, 0.0]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn min_h_of_diagonal_tensors() {
        let opts = SpectraOptions {
            restarts: 6,
            ..SpectraOptions::default()
        };
        let id = SymTensor::<f64>::identity(4, 2).unwrap();
        let r = min_h_eigenvalue(&id, &opts).unwrap();
        assert!((r.min_h_estimate.unwrap() - 1.0).abs() < 1e-9);

        let d = SymTensor::diagonal(4, 2, &[2.0, 3.0]).unwrap();
        let r = min_h_eigenvalue(&d, &opts).unwrap();
        assert!((r.min_h_estimate.unwrap() - 2.0).abs() < 1e-9);
        assert!(r.converged_count <= r.restarts);
    }

    /// H-eigenvalues of E (m=4, n=2) from a brute-force angular scan of the
    /// eigen-equation: lambda = A x^m at points where the residual vanishes.
    #[test]
    fn all_one_h_eigenvalues_by_scan() {
        let e = ones(4, 2);
        let mut found = Vec::new();
        let steps = 200_000;
        let mut prev = f64::INFINITY;
        let mut prev2 = f64::INFINITY;
        let mut prev_x = vec![0.0, 0.0];
        for k in 0..=steps {
            let t = std::f64::consts::PI * k as f64 / steps as f64;
            let x = vec![t.cos(), t.sin()];
            let pair = rayleigh_pair(&e, &x).unwrap();
            if prev < prev2 && prev <= pair.residual && prev < 1e-3 {
                found.push(rayleigh_pair(&e, &prev_x).unwrap().lambda);
            }
            prev2 = prev;
            prev = pair.residual;
            prev_x = x;
        }
        found.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(found.len(), 2, "{found:?}");
        assert!(found[0].abs() < 1e-6);
        assert!((found[1] - 8.0).abs() < 1e-6);

        let r = min_h_eigenvalue(&e, &SpectraOptions::default()).unwrap();
        assert!(r.is_conclusive());
        assert!(r.min_h_estimate.unwrap().abs() < 1e-8);
    }

    #[test]
    fn newton_polish_reaches_machine_precision() {
        let mut a = SymTensor::<f64>::identity(4, 3).unwrap();
        a.set(&[0, 0, 1, 2], -0.3).unwrap();
        a.set(&[0, 1, 1, 1], 0.2).unwrap();
        let rough = rayleigh_pair(&a, &[0.9, 0.3, -0.2]).unwrap();
        let (pair, _, ok) = descend(&a, &rough.x, 5000, 1e-12).unwrap();
        assert!(ok, "residual {}", pair.residual);
        assert!(residual(&a, pair.lambda, &pair.x).unwrap() <= 1e-12);
    }

    #[test]
    fn apply2_matches_difference_of_apply() {
        let mut a = SymTensor::<f64>::identity(4, 3).unwrap();
        a.set(&[0, 0, 1, 2], -0.3).unwrap();
        a.set(&[0, 1, 1, 1], 0.2).unwrap();
        a.set(&[1, 2, 2, 2], 0.7).unwrap();
        let x = [0.4, -0.8, 0.5];
        let h = a.apply2(&x).unwrap();
        let step = 1e-6;
        for j in 0..3 {
            let mut up = x;
            let mut dn = x;
            up[j] += step;
            dn[j] -= step;
            let (gu, gd) = (a.apply(&up).unwrap(), a.apply(&dn).unwrap());
            for i in 0..3 {
                // d/dx_j (A x^{m-1})_i = (m-1) (A x^{m-2})_{ij}
                let fd = (gu[i] - gd[i]) / (2.0 * step);
                assert!((fd - 3.0 * h[i][j]).abs() < 1e-8, "{i} {j}");
            }
        }
    }

    #[test]
    fn odd_order_is_refused() {
        assert!(matches!(
            min_h_eigenvalue(&ones(3, 2), &SpectraOptions::default()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn spectral_radius_examples() {
        let r = spectral_radius_nonneg(&ones(4, 2), 1e-12, 1000).unwrap();
        assert!((r.estimate - 8.0).abs() < 1e-9);
        let z = SymTensor::<f64>::zeros(4, 2).unwrap();
        assert_eq!(spectral_radius_nonneg(&z, 1e-12, 10).unwrap().estimate, 0.0);
        let neg = SymTensor::<f64>::identity(4, 2).unwrap().scale(-1.0);
        assert!(matches!(
            spectral_radius_nonneg(&neg, 1e-12, 10),
            Err(Error::NegativeEntry { .. })
        ));
    }

    #[test]
    fn sphere_oracle_examples() {
        let d = SymTensor::diagonal(4, 2, &[1.0, -1.0]).unwrap();
        let s = sphere_min_oracle(&d, 180).unwrap();
        assert!(s.min_value <= -1.0 + 1e-12);
        assert!(s.argmin[0].abs() < 1e-9 && (s.argmin[1].abs() - 1.0).abs() < 1e-9);

        let id = SymTensor::<f64>::identity(4, 2).unwrap();
        let s = sphere_min_oracle(&id, 180).unwrap();
        assert!((s.min_value - 0.5).abs() < 1e-12);

        let s = sphere_min_oracle(&ones(4, 2), 180).unwrap();
        assert!(s.min_value.abs() < 1e-12);
        assert!((s.argmin[0] + s.argmin[1]).abs() < 1e-9);

        assert!(sphere_min_oracle(&ones(4, 4), 10).is_err());
        let s3 = sphere_min_oracle(&SymTensor::<f64>::identity(4, 3).unwrap(), 60).unwrap();
        assert!((s3.min_value - 1.0 / 3.0).abs() < 1e-2);
    }
}
