//! Symmetric tensors in multinomial-compressed storage.
//!
//! A symmetric tensor of order `m` and dimension `n` is stored as a map from
//! canonical (non-decreasing) multi-indices to values. Only the
//! `C(n+m-1, m)` canonical entries are kept; the dense `n^m` array is
//! materialized on demand by [`SymTensor::to_dense`].
//!
//! Indices are zero-based throughout the API. The JSON formats in
//! [`crate::io`] use one-based indices.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Canonical multi-index: the sorted index tuple of a symmetric entry.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Wraps indices that are already sorted.
    fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] <= w[1]));
        MultiIndex(indices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// All indices equal.
    pub fn is_diagonal(&self) -> bool {
        self.0.first() == self.0.last()
    }

    pub fn count(&self, i: usize) -> usize {
        self.0.iter().filter(|&&j| j == i).count()
    }

    /// Distinct indices with their counts, ascending.
    pub fn groups(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .copied()
            .dedup_with_count()
            .map(|(count, i)| (i, count))
    }

    /// Number of distinct permutations, `m! / prod(count_j!)`.
    pub fn multiplicity(&self) -> u64 {
        let mut total: u128 = 1;
        let mut placed: u128 = 0;
        for (_, c) in self.groups() {
            // multiply by C(placed + c, c) incrementally; every prefix is integral
            for k in 1..=c as u128 {
                placed += 1;
                total = total * placed / k;
            }
        }
        u64::try_from(total).expect("multiplicity overflows u64")
    }

    /// Number of permutations whose first coordinate is `i`:
    /// `multiplicity * count_i / m`.
    pub fn row_weight(&self, i: usize) -> u64 {
        let c = self.count(i) as u128;
        let w = u128::from(self.multiplicity()) * c / self.order() as u128;
        w as u64
    }

    /// Product of `x` over the index tuple.
    pub fn monomial<T: Scalar>(&self, x: &[T]) -> T {
        self.0
            .iter()
            .fold(T::one(), |acc, &j| acc * x[j].clone())
    }

    /// Product of `x` over the index tuple with one occurrence of `i` removed.
    pub fn monomial_without<T: Scalar>(&self, x: &[T], i: usize) -> T {
        let mut skipped = false;
        let mut acc = T::one();
        for &j in &self.0 {
            if !skipped && j == i {
                skipped = true;
                continue;
            }
            acc = acc * x[j].clone();
        }
        acc
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_one_based().iter().join(","))
    }
}

/// Sorts `idx` and returns it together with its permutation count.
///
/// `idx` is zero-based; every element must be below `dim`.
pub fn canonicalize(idx: &[usize], dim: usize) -> Result<(MultiIndex, u64)> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
        return Err(Error::IndexOutOfRange {
            index: bad + 1,
            dim,
        });
    }
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    let mi = MultiIndex::from_sorted(sorted);
    let mult = mi.multiplicity();
    Ok((mi, mult))
}

/// Sorted, deduplicated copy of a zero-based index set.
pub fn normalize_index_set(set: &[usize], dim: usize) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if let Some(&bad) = set.iter().find(|&&i| i >= dim) {
        return Err(Error::IndexOutOfRange {
            index: bad + 1,
            dim,
        });
    }
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Canonical multi-indices of an order-`order` tensor over `indices`
/// (which must be sorted), in lexicographic order.
pub fn canonical_indices(
    order: usize,
    indices: &[usize],
) -> impl Iterator<Item = MultiIndex> + '_ {
    indices
        .iter()
        .copied()
        .combinations_with_replacement(order)
        .map(MultiIndex::from_sorted)
}

/// Componentwise `x_i^p`.
pub fn power_vec<T: Scalar>(x: &[T], p: u32) -> Vec<T> {
    x.iter().map(|v| num_traits::pow(v.clone(), p as usize)).collect()
}

/// `n^e` as a checked integer.
pub(crate) fn checked_pow(n: usize, e: usize) -> Option<u64> {
    (n as u64).checked_pow(u32::try_from(e).ok()?)
}

fn check_shape(order: usize, dim: usize) -> Result<()> {
    if order < 2 {
        return Err(Error::InvalidOrder(order));
    }
    if dim < 1 {
        return Err(Error::InvalidDim(dim));
    }
    // row weights and n^{m-1} must fit in u64
    if order > 20 || checked_pow(dim, order).is_none() {
        return Err(Error::TooLarge { order, dim });
    }
    Ok(())
}

/// Real symmetric tensor of order `m >= 2` and dimension `n >= 1`.
///
/// Absent entries are zero; exact zeros are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<T> {
    order: usize,
    dim: usize,
    entries: BTreeMap<MultiIndex, T>,
}

impl<T: Scalar> SymTensor<T> {
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        check_shape(order, dim)?;
        Ok(SymTensor {
            order,
            dim,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a tensor from `(index, value)` pairs with arbitrary index order.
    /// Two pairs that canonicalize to the same entry are rejected.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        let mut t = Self::zeros(order, dim)?;
        for (idx, value) in entries {
            let key = t.key(&idx)?;
            if t.entries.contains_key(&key) {
                return Err(Error::Format(format!("duplicate canonical index {key}")));
            }
            if !value.is_zero() {
                t.entries.insert(key, value);
            }
        }
        Ok(t)
    }

    /// Builds a tensor from a dense row-major array (last index fastest).
    ///
    /// With `symmetrize` each canonical entry becomes the mean over its
    /// permutations. Otherwise every permutation must agree with the first
    /// one encountered to within `tol`.
    pub fn from_dense(
        order: usize,
        dim: usize,
        values: &[T],
        symmetrize: bool,
        tol: T,
    ) -> Result<Self> {
        check_shape(order, dim)?;
        let expected = checked_pow(dim, order)
            .and_then(|n| usize::try_from(n).ok())
            .ok_or(Error::TooLarge { order, dim })?;
        if values.len() != expected {
            return Err(Error::DenseLength {
                got: values.len(),
                expected,
            });
        }

        // canonical key -> (first dense index seen, first value, running sum)
        let mut groups: BTreeMap<MultiIndex, (Vec<usize>, T, T)> = BTreeMap::new();
        let mut idx = vec![0usize; order];
        for v in values {
            let (key, _) = canonicalize(&idx, dim)?;
            match groups.get_mut(&key) {
                Some((first, reference, sum)) => {
                    if !symmetrize {
                        let diff = (v.clone() - reference.clone()).abs();
                        if diff > tol {
                            return Err(Error::Asymmetric {
                                first: first.iter().map(|i| i + 1).collect(),
                                second: idx.iter().map(|i| i + 1).collect(),
                                diff: diff.to_f64_lossy(),
                            });
                        }
                    }
                    *sum = sum.clone() + v.clone();
                }
                None => {
                    groups.insert(key, (idx.clone(), v.clone(), v.clone()));
                }
            }
            // advance odometer, last index fastest
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < dim {
                    break;
                }
                *slot = 0;
            }
        }

        let entries = groups
            .into_iter()
            .map(|(key, (_, first, sum))| {
                let value = if symmetrize {
                    sum / T::from_count(key.multiplicity())
                } else {
                    first
                };
                (key, value)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Ok(SymTensor {
            order,
            dim,
            entries,
        })
    }

    /// The identity tensor: ones on `(i, ..., i)`.
    pub fn identity(order: usize, dim: usize) -> Result<Self> {
        Self::diagonal(order, dim, &vec![T::one(); dim])
    }

    /// Diagonal tensor with `diag[i]` at `(i, ..., i)`.
    pub fn diagonal(order: usize, dim: usize, diag: &[T]) -> Result<Self> {
        let mut t = Self::zeros(order, dim)?;
        if diag.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: diag.len(),
            });
        }
        for (i, d) in diag.iter().enumerate() {
            if !d.is_zero() {
                t.entries
                    .insert(MultiIndex::from_sorted(vec![i; order]), d.clone());
            }
        }
        Ok(t)
    }

    /// Partially all-one tensor: one exactly where every index lies in `set`.
    pub fn partial_all_one(order: usize, dim: usize, set: &[usize]) -> Result<Self> {
        let mut t = Self::zeros(order, dim)?;
        let set = normalize_index_set(set, dim)?;
        t.entries = canonical_indices(order, &set)
            .map(|k| (k, T::one()))
            .collect();
        Ok(t)
    }

    /// The all-one tensor.
    pub fn all_one(order: usize, dim: usize) -> Result<Self> {
        Self::partial_all_one(order, dim, &(0..dim).collect::<Vec<_>>())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (nonzero canonical) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `n^{m-1}`, the number of entries in one row.
    pub fn row_len(&self) -> u64 {
        checked_pow(self.dim, self.order - 1).expect("shape checked at construction")
    }

    /// Stored entries in lexicographic canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &T)> {
        self.entries.iter()
    }

    fn key(&self, idx: &[usize]) -> Result<MultiIndex> {
        if idx.len() != self.order {
            return Err(Error::IndexLength {
                got: idx.len(),
                expected: self.order,
            });
        }
        canonicalize(idx, self.dim).map(|(k, _)| k)
    }

    /// Entry at any (not necessarily sorted) zero-based index tuple.
    pub fn get(&self, idx: &[usize]) -> Result<T> {
        let key = self.key(idx)?;
        Ok(self.entries.get(&key).cloned().unwrap_or_else(T::zero))
    }

    /// Sets the entry at `idx` and all its permutations.
    pub fn set(&mut self, idx: &[usize], value: T) -> Result<()> {
        let key = self.key(idx)?;
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    /// `a_{i...i}`.
    pub fn diag(&self, i: usize) -> T {
        self.entries
            .get(&MultiIndex::from_sorted(vec![i; self.order]))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn set_diag(&mut self, i: usize, value: T) {
        let key = MultiIndex::from_sorted(vec![i; self.order]);
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    /// Largest absolute entry, zero for the zero tensor.
    pub fn max_abs_entry(&self) -> T {
        self.entries
            .values()
            .map(|v| v.abs())
            .fold(T::zero(), T::max_of)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn check_vec(&self, x: &[T]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// The homogeneous form `A x^m`.
    pub fn eval_xm(&self, x: &[T]) -> Result<T> {
        self.check_vec(x)?;
        Ok(self.entries.iter().fold(T::zero(), |acc, (k, v)| {
            acc + v.clone() * T::from_count(k.multiplicity()) * k.monomial(x)
        }))
    }

    /// The vector `A x^{m-1}`.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_vec(x)?;
        let mut out = vec![T::zero(); self.dim];
        for (k, v) in &self.entries {
            let mult = k.multiplicity();
            for (i, c) in k.groups() {
                let w = (u128::from(mult) * c as u128 / self.order as u128) as u64;
                out[i] = out[i].clone() + v.clone() * T::from_count(w) * k.monomial_without(x, i);
            }
        }
        Ok(out)
    }

    /// The symmetric matrix `(A x^{m-2})_{ij}`; `m(m-1)` times it is the
    /// Hessian of `A x^m`.
    pub fn apply2(&self, x: &[T]) -> Result<Vec<Vec<T>>> {
        self.check_vec(x)?;
        let n = self.dim;
        let pairs = u128::from(self.order as u64) * (self.order as u128 - 1);
        let mut out = vec![vec![T::zero(); n]; n];
        if self.order < 2 {
            return Ok(out);
        }
        for (k, v) in &self.entries {
            let mult = u128::from(k.multiplicity());
            for (i, ci) in k.groups() {
                for (j, cj) in k.groups() {
                    let cj = if i == j { cj - 1 } else { cj };
                    if cj == 0 {
                        continue;
                    }
                    let w = (mult * ci as u128 * cj as u128 / pairs) as u64;
                    let mut rest = k.as_slice().to_vec();
                    let p = rest.iter().position(|&s| s == i).expect("present");
                    rest.remove(p);
                    let q = rest.iter().position(|&s| s == j).expect("present");
                    rest.remove(q);
                    let mono = rest.iter().fold(T::one(), |acc, &s| acc * x[s].clone());
                    out[i][j] = out[i][j].clone() + v.clone() * T::from_count(w) * mono;
                }
            }
        }
        Ok(out)
    }

    /// Restriction of all indices to `set`, re-indexed by position in the
    /// sorted set.
    pub fn principal_subtensor(&self, set: &[usize]) -> Result<Self> {
        let set = normalize_index_set(set, self.dim)?;
        let mut position = vec![None; self.dim];
        for (p, &i) in set.iter().enumerate() {
            position[i] = Some(p);
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|(k, v)| {
                let idx: Option<Vec<usize>> = k.as_slice().iter().map(|&i| position[i]).collect();
                // relabeling by a monotone map keeps the tuple sorted
                idx.map(|idx| (MultiIndex::from_sorted(idx), v.clone()))
            })
            .collect();
        Ok(SymTensor {
            order: self.order,
            dim: set.len(),
            entries,
        })
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.order != other.order || self.dim != other.dim {
            return Err(Error::ShapeMismatch(
                self.order, self.dim, other.order, other.dim,
            ));
        }
        Ok(())
    }

    /// `self + c * other`. Exact zeros in the result are dropped.
    pub fn axpy(&self, c: T, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.entries {
            let updated = out.entries.get(k).cloned().unwrap_or_else(T::zero)
                + c.clone() * v.clone();
            if updated.is_zero() {
                out.entries.remove(k);
            } else {
                out.entries.insert(k.clone(), updated);
            }
        }
        Ok(out)
    }

    /// `c * self`.
    pub fn scale(&self, c: T) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), c.clone() * v.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SymTensor {
            order: self.order,
            dim: self.dim,
            entries,
        }
    }

    /// Subtracts `h` from every entry whose indices all lie in the sorted
    /// set `set` (i.e. `self - h E^set`), in place.
    pub(crate) fn sub_partial_all_one(&mut self, h: &T, set: &[usize]) {
        for key in canonical_indices(self.order, set) {
            let updated = self.entries.get(&key).cloned().unwrap_or_else(T::zero) - h.clone();
            if updated.is_zero() {
                self.entries.remove(&key);
            } else {
                self.entries.insert(key, updated);
            }
        }
    }

    /// Sets every entry with `|value| <= threshold` to zero.
    pub fn prune(&mut self, threshold: &T) {
        self.entries.retain(|_, v| v.abs() > *threshold);
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_shape(other)?;
        let diff = self.axpy(-T::one(), other)?;
        Ok(diff.max_abs_entry())
    }

    /// Materializes the dense `n^m` array, row-major with the last index
    /// fastest.
    pub fn to_dense(&self) -> Result<Vec<T>> {
        let len = checked_pow(self.dim, self.order)
            .and_then(|n| usize::try_from(n).ok())
            .filter(|&n| n <= 1 << 28)
            .ok_or(Error::TooLarge {
                order: self.order,
                dim: self.dim,
            })?;
        let mut out = vec![T::zero(); len];
        let mut idx = vec![0usize; self.order];
        for slot_value in out.iter_mut() {
            *slot_value = self.get(&idx)?;
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < self.dim {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(out)
    }

    /// Converts every entry with `f`.
    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> SymTensor<U> {
        SymTensor {
            order: self.order,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Hex SHA-256 over the shape and the canonical entry list.
    pub fn digest(&self) -> String {
        let mut bytes = Vec::with_capacity(16 + self.entries.len() * (8 + 8 * self.order));
        bytes.extend_from_slice(b"symtensor/v1");
        bytes.extend_from_slice(&(self.order as u64).to_le_bytes());
        bytes.extend_from_slice(&(self.dim as u64).to_le_bytes());
        for (k, v) in &self.entries {
            for &i in k.as_slice() {
                bytes.extend_from_slice(&(i as u64).to_le_bytes());
            }
            v.write_digest_bytes(&mut bytes);
        }
        hex::encode(Sha256::digest(&bytes))
    }
}

impl SymTensor<f64> {
    /// Exact conversion into another scalar type.
    pub fn to_exact<U: Scalar>(&self) -> SymTensor<U> {
        self.map(|v| U::from_f64_exact(*v).expect("stored values are finite"))
    }
}
