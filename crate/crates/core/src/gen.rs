//! Seeded generators of symmetric tensors in each class.
//!
//! Generation is reproducible across platforms: the stream comes from
//! ChaCha8 keyed by `seed_from_u64(seed)` (stream 0), uniforms are the
//! 53-bit `random::<f64>()` of `rand`, and canonical indices are visited in
//! lexicographic order. For each off-diagonal canonical index two uniforms
//! are consumed (inclusion test against `density`, then the value); for each
//! row one more is consumed afterwards for the diagonal or the margin.
//!
//! Class membership is obtained by lifting the diagonal rather than by
//! rejection: after the off-diagonal entries are drawn, `a_{i...i}` is set so
//! the row satisfies the class inequality, then nudged upward one ulp at a
//! time until the inequality holds at `tol = 0` both in floating point and
//! in exact arithmetic on the stored values.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{self, row_stats, RowStats};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::{canonical_indices, SymTensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenKind {
    B,
    B0,
    #[serde(rename = "Z_dd")]
    ZDd,
    #[serde(rename = "Z_sdd")]
    ZSdd,
    #[serde(rename = "symmetric_arbitrary")]
    SymmetricArbitrary,
    #[serde(rename = "nonneg")]
    Nonneg,
}

impl GenKind {
    pub const ALL: [GenKind; 6] = [
        GenKind::B,
        GenKind::B0,
        GenKind::ZDd,
        GenKind::ZSdd,
        GenKind::SymmetricArbitrary,
        GenKind::Nonneg,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GenKind::B => "B",
            GenKind::B0 => "B0",
            GenKind::ZDd => "Z_dd",
            GenKind::ZSdd => "Z_sdd",
            GenKind::SymmetricArbitrary => "symmetric_arbitrary",
            GenKind::Nonneg => "nonneg",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidSpec(format!("unknown kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub order: usize,
    pub dim: usize,
    pub seed: u64,
    /// Fraction of off-diagonal canonical entries that are sampled.
    pub density: f64,
}

impl GenSpec {
    pub fn new(kind: GenKind, order: usize, dim: usize, seed: u64) -> Self {
        GenSpec {
            kind,
            order,
            dim,
            seed,
            density: 1.0,
        }
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidSpec(format!("order {} < 2", self.order)));
        }
        if self.dim < 1 {
            return Err(Error::InvalidSpec(format!("dim {} < 1", self.dim)));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "density {} outside (0, 1]",
                self.density
            )));
        }
        Ok(())
    }
}

fn row_satisfies<T: Scalar>(kind: GenKind, r: &RowStats<T>, row_len: &T) -> bool {
    let zero = T::zero();
    match kind {
        GenKind::B => {
            r.row_sum > zero
                && r.max_offdiag
                    .as_ref()
                    .is_none_or(|d| r.row_sum.clone() > d.clone() * row_len.clone())
        }
        GenKind::B0 => {
            r.row_sum >= zero
                && r.max_offdiag
                    .as_ref()
                    .is_none_or(|d| r.row_sum.clone() >= d.clone() * row_len.clone())
        }
        GenKind::ZDd => r.diag >= r.abs_offdiag_sum,
        GenKind::ZSdd => r.diag > r.abs_offdiag_sum,
        GenKind::SymmetricArbitrary | GenKind::Nonneg => true,
    }
}

/// The row with diagonal `diag`, as computed in `f64` and exactly.
fn both_satisfy(
    kind: GenKind,
    r: &mut RowStats<f64>,
    q: &mut RowStats<BigRational>,
    diag: f64,
    row_len: u64,
) -> bool {
    r.diag = diag;
    r.row_sum = diag + r.offdiag_sum;
    q.diag = BigRational::from_f64_exact(diag).expect("finite diagonal");
    q.row_sum = q.diag.clone() + q.offdiag_sum.clone();
    let f_ok = match kind {
        // the f64 B tests divide by the row length
        GenKind::B => {
            r.row_sum > 0.0 && r.max_offdiag.is_none_or(|d| r.row_sum / row_len as f64 > d)
        }
        GenKind::B0 => {
            r.row_sum >= 0.0 && r.max_offdiag.is_none_or(|d| r.row_sum / row_len as f64 >= d)
        }
        _ => row_satisfies(kind, r, &(row_len as f64)),
    };
    f_ok && row_satisfies(kind, q, &BigRational::from_count(row_len))
}

/// Generates a tensor of the requested class.
pub fn generate(spec: &GenSpec) -> Result<SymTensor<f64>> {
    spec.validate()?;
    let (m, n) = (spec.order, spec.dim);
    let mut t = SymTensor::<f64>::zeros(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let all: Vec<usize> = (0..n).collect();
    for key in canonical_indices(m, &all).filter(|k| !k.is_diagonal()) {
        let keep = rng.random::<f64>() < spec.density;
        let u = rng.random::<f64>();
        if !keep {
            continue;
        }
        let v = match spec.kind {
            GenKind::Nonneg => u,
            GenKind::ZDd | GenKind::ZSdd => -(2.0 * u - 1.0).abs(),
            _ => 2.0 * u - 1.0,
        };
        t.set(key.as_slice(), v)?;
    }

    let row_len = t.row_len() as f64;
    let mut rows = row_stats(&t);
    let mut exact_rows = row_stats(&t.to_exact::<BigRational>());
    for (r, q) in rows.iter_mut().zip(exact_rows.iter_mut()) {
        let u = rng.random::<f64>();
        let diag = match spec.kind {
            GenKind::SymmetricArbitrary => 2.0 * u - 1.0,
            GenKind::Nonneg => u,
            GenKind::B | GenKind::B0 => {
                let margin = if spec.kind == GenKind::B {
                    0.01 + 0.09 * (1.0 - u)
                } else {
                    0.0
                };
                let ceiling = r.max_offdiag.map_or(0.0, |d| d.max(0.0));
                row_len * (ceiling + margin) - r.offdiag_sum
            }
            GenKind::ZDd => r.abs_offdiag_sum,
            GenKind::ZSdd => r.abs_offdiag_sum + 0.01 + 0.09 * (1.0 - u),
        };
        let mut diag = diag;
        while !both_satisfy(spec.kind, r, q, diag, t.row_len()) {
            diag = diag.next_up();
        }
        t.set_diag(r.row, diag);
    }

    let zero = 0.0;
    let ok = match spec.kind {
        GenKind::B => classify::is_b(&t, &zero),
        GenKind::B0 => classify::is_b0(&t, &zero),
        GenKind::ZDd => classify::is_z(&t, &zero) && classify::is_dd(&t, &zero),
        GenKind::ZSdd => classify::is_z(&t, &zero) && classify::is_sdd(&t, &zero),
        GenKind::Nonneg => t.entries().all(|(_, v)| *v >= 0.0),
        GenKind::SymmetricArbitrary => true,
    };
    if !ok {
        return Err(Error::Invariant(format!(
            "generated tensor is not in class {}",
            spec.kind
        )));
    }
    Ok(t)
}

/// Lifts every diagonal entry to `R_i + margin`, producing a strictly
/// diagonally dominated tensor with the same off-diagonal part.
pub fn lift_to_sdd(t: &SymTensor<f64>, margin: f64) -> SymTensor<f64> {
    let mut out = t.clone();
    for r in row_stats(t) {
        let mut d = r.abs_offdiag_sum + margin;
        while d <= r.abs_offdiag_sum {
            d = d.next_up();
        }
        out.set_diag(r.row, d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{is_b, is_b0, is_dd, is_sdd, is_z};
    use crate::decompose::decompose_b0;

    #[test]
    fn generated_b_is_b() {
        let t = generate(&GenSpec::new(GenKind::B, 4, 3, 42)).unwrap();
        assert!(is_b(&t, &0.0));
        // dense by default
        assert_eq!(t.nnz(), 15);
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec::new(GenKind::B0, 4, 4, 7).with_density(0.6);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(
            a.entries().collect::<Vec<_>>(),
            b.entries().collect::<Vec<_>>()
        );
        let c = generate(&GenSpec::new(GenKind::B0, 4, 4, 8).with_density(0.6)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn z_sdd_needs_no_decomposition_steps() {
        let t = generate(&GenSpec::new(GenKind::ZSdd, 4, 3, 5)).unwrap();
        assert!(is_z(&t, &0.0) && is_sdd(&t, &0.0));
        assert!(decompose_b0(&t, &0.0).unwrap().steps.is_empty());
    }

    #[test]
    fn every_kind_is_in_class() {
        for kind in GenKind::ALL {
            for seed in 0..30 {
                for (m, n) in [(2, 1), (2, 5), (3, 3), (4, 2), (4, 4), (6, 3)] {
                    let density = if seed % 3 == 0 { 0.3 } else { 1.0 };
                    let t = generate(&GenSpec::new(kind, m, n, seed).with_density(density)).unwrap();
                    let ok = match kind {
                        GenKind::B => is_b(&t, &0.0),
                        GenKind::B0 => is_b0(&t, &0.0),
                        GenKind::ZDd => is_z(&t, &0.0) && is_dd(&t, &0.0),
                        GenKind::ZSdd => is_z(&t, &0.0) && is_sdd(&t, &0.0),
                        GenKind::Nonneg => t.entries().all(|(_, v)| *v >= 0.0),
                        GenKind::SymmetricArbitrary => true,
                    };
                    assert!(ok, "{kind} m={m} n={n} seed={seed}");
                }
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&GenSpec::new(GenKind::B, 1, 3, 0)).is_err());
        assert!(generate(&GenSpec::new(GenKind::B, 4, 0, 0)).is_err());
        assert!(generate(&GenSpec::new(GenKind::B, 4, 3, 0).with_density(0.0)).is_err());
        assert!(generate(&GenSpec::new(GenKind::B, 4, 3, 0).with_density(1.5)).is_err());
        assert!("nope".parse::<GenKind>().is_err());
        assert_eq!("z_SDD".parse::<GenKind>().unwrap(), GenKind::ZSdd);
    }

    #[test]
    fn lift_gives_sdd() {
        let t = generate(&GenSpec::new(GenKind::SymmetricArbitrary, 4, 3, 1)).unwrap();
        assert!(is_sdd(&lift_to_sdd(&t, 0.05), &0.0));
    }

    #[test]
    fn membership_holds_exactly() {
        let zero = BigRational::from_count(0);
        for seed in 0..12 {
            for (m, n) in [(4, 3), (6, 4), (3, 5)] {
                let b0 = generate(&GenSpec::new(GenKind::B0, m, n, seed)).unwrap();
                assert!(is_b0(&b0.to_exact::<BigRational>(), &zero), "B0 m={m} n={n} seed={seed}");
                let b = generate(&GenSpec::new(GenKind::B, m, n, seed)).unwrap();
                assert!(is_b(&b.to_exact::<BigRational>(), &zero), "B m={m} n={n} seed={seed}");
                let z = generate(&GenSpec::new(GenKind::ZDd, m, n, seed)).unwrap();
                assert!(is_dd(&z.to_exact::<BigRational>(), &zero), "Z_dd m={m} n={n} seed={seed}");
            }
        }
    }
}
