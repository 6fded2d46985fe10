//! Scalar abstraction shared by every tensor routine.
//!
//! The tensor algebra, classification and decomposition only need ring
//! operations, division by an integer and a total order on the values that
//! actually occur, so they run unchanged over `f32`, `f64` and exact
//! rationals. Routines that need roots or transcendental functions (the
//! spectral estimators) additionally require [`num_traits::Float`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// Lossy conversion used for reporting.
    fn to_f64_lossy(&self) -> f64;

    /// Exact conversion from an `f64`; `None` for non-finite input.
    fn from_f64_exact(v: f64) -> Option<Self>;

    /// Appends a platform-independent byte encoding of the value, used for
    /// content digests.
    fn write_digest_bytes(&self, out: &mut Vec<u8>);

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("integer count not representable in scalar type")
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn from_f64_exact(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn write_digest_bytes(&self, out: &mut Vec<u8>) {
        // -0.0 and 0.0 represent the same entry
        let v = if *self == 0.0 { 0.0f64 } else { *self };
        out.extend_from_slice(&v.to_bits().to_le_bytes());
    }
}

impl Scalar for f32 {
    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }

    fn from_f64_exact(v: f64) -> Option<Self> {
        let s = v as f32;
        (s.is_finite() && f64::from(s) == v).then_some(s)
    }

    fn write_digest_bytes(&self, out: &mut Vec<u8>) {
        f64::from(*self).write_digest_bytes(out);
    }
}

impl Scalar for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_f64_exact(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn write_digest_bytes(&self, out: &mut Vec<u8>) {
        // dyadic rationals hash like the f64 they came from
        match self.to_f64() {
            Some(f) if BigRational::from_float(f).as_ref() == Some(self) => {
                f.write_digest_bytes(out)
            }
            _ => {
                out.push(0xff);
                out.extend_from_slice(self.numer().to_signed_bytes_le().as_slice());
                out.push(b'/');
                out.extend_from_slice(self.denom().to_signed_bytes_le().as_slice());
            }
        }
    }

    fn from_count(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trips_dyadic_floats() {
        for v in [0.5, -0.125, 3.0, 1e-3] {
            let q = BigRational::from_f64_exact(v).unwrap();
            assert_eq!(q.to_f64_lossy(), v);
        }
        assert!(BigRational::from_f64_exact(f64::NAN).is_none());
    }

    #[test]
    fn digest_bytes_agree_between_f64_and_rational() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        0.75f64.write_digest_bytes(&mut a);
        BigRational::from_f64_exact(0.75).unwrap().write_digest_bytes(&mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn f32_exact_conversion_rejects_rounding() {
        assert_eq!(f32::from_f64_exact(0.5), Some(0.5));
        assert_eq!(f32::from_f64_exact(0.1), None);
    }
}
