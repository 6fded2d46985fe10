//! Independent oracles used by the integration suites. Nothing here calls
//! into the compressed-storage evaluation paths it is compared against.

#![allow(dead_code)]

use btc_core::SymTensor;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Advances a base-`n` odometer (last digit fastest); false on wrap-around.
pub fn advance(idx: &mut [usize], n: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}

/// `sum a_{i1..im} x_i1 ... x_im` over all `n^m` tuples.
pub fn dense_eval(t: &SymTensor<f64>, x: &[f64]) -> f64 {
    let (m, n) = (t.order(), t.dim());
    let mut idx = vec![0; m];
    let mut total = 0.0;
    loop {
        total += t.get(&idx).unwrap() * idx.iter().map(|&i| x[i]).product::<f64>();
        if !advance(&mut idx, n) {
            return total;
        }
    }
}

/// `(A x^{m-1})_i` by looping over all `n^{m-1}` tails of every row.
pub fn dense_apply(t: &SymTensor<f64>, x: &[f64]) -> Vec<f64> {
    let (m, n) = (t.order(), t.dim());
    (0..n)
        .map(|i| {
            let mut tail = vec![0; m - 1];
            let mut total = 0.0;
            loop {
                let mut idx = vec![i];
                idx.extend(&tail);
                total += t.get(&idx).unwrap() * tail.iter().map(|&j| x[j]).product::<f64>();
                if !advance(&mut tail, n) {
                    return total;
                }
            }
        })
        .collect()
}

/// Leading principal minors of a square matrix by fraction-free (Bareiss)
/// elimination over the integers. The f64 entries are scaled by a common
/// power of two so the integer matrix is exact.
pub fn leading_minors_signs(a: &[Vec<f64>]) -> Vec<i8> {
    let n = a.len();
    let rational: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| row.iter().map(|v| BigRational::from_float(*v).unwrap()).collect())
        .collect();
    let mut denom = BigInt::one();
    for v in rational.iter().flatten() {
        let d = v.denom();
        if d > &denom {
            denom = d.clone(); // all denominators are powers of two
        }
    }
    let mut m: Vec<Vec<BigInt>> = rational
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| (v * BigRational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();

    let sign = |v: &BigInt| -> i8 {
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    };
    let mut signs = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        // after step k the pivot m[k][k] is the (k+1)-th leading minor (scaled by denom^(k+1))
        signs.push(sign(&m[k][k]));
        if m[k][k].is_zero() {
            // later minors are irrelevant once one vanishes for a PD test
            signs.extend(std::iter::repeat_n(0, n - k - 1));
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    signs
}

/// Sylvester's criterion: all leading principal minors positive.
pub fn sylvester_pd(a: &[Vec<f64>]) -> bool {
    leading_minors_signs(a).iter().all(|&s| s > 0)
}

/// Dense symmetric matrix of an order-2 tensor.
pub fn matrix_of(t: &SymTensor<f64>) -> Vec<Vec<f64>> {
    let n = t.dim();
    (0..n)
        .map(|i| (0..n).map(|j| t.get(&[i, j]).unwrap()).collect())
        .collect()
}

/// Largest real root of the characteristic polynomial of a small matrix,
/// by Faddeev-LeVerrier coefficients and bisection above the last sign
/// change on a fine scan.
pub fn dominant_real_eigenvalue(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    // coefficients c_k of det(lambda I - A) = sum c_k lambda^(n-k)
    let mut coeffs = vec![1.0];
    let mut mk = vec![vec![0.0; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += a[i][l] * mk[l][j];
                }
                next[i][j] = s + if i == j { coeffs[k - 1] } else { 0.0 };
            }
        }
        let mut trace = 0.0;
        for i in 0..n {
            for l in 0..n {
                trace += a[i][l] * next[l][i];
            }
        }
        coeffs.push(-trace / k as f64);
        mk = next;
    }
    let p = |x: f64| coeffs.iter().fold(0.0, |acc, c| acc * x + c);
    let bound = 1.0 + a.iter().flatten().map(|v| v.abs()).sum::<f64>();
    let steps = 200_000;
    let mut hi = bound;
    let mut found = None;
    for s in 1..=steps {
        let lo = bound - 2.0 * bound * s as f64 / steps as f64;
        if p(lo).signum() != p(hi).signum() || p(lo) == 0.0 {
            found = Some((lo, hi));
            break;
        }
        hi = lo;
    }
    let (mut lo, mut hi) = found.expect("real eigenvalue exists");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid).signum() == p(hi).signum() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `x` with the entries outside `set` dropped.
pub fn restricted_sum(x: &[f64], set: &[usize]) -> f64 {
    set.iter().map(|&j| x[j]).sum()
}
