//! The integer scalar abstraction shared by every lattice computation.
//!
//! All geometry is written against [`Scalar`], a bundle of `num-traits`
//! bounds. The crate root fixes the default instantiation to
//! [`num_bigint::BigInt`]; `i64` and `i128` satisfy the same bounds and may be
//! used when the caller knows the coordinates stay small.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact, signed, ordered integer type.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + ToBigInt
    + TryFrom<BigInt>
    + FromStr
    + Send
    + Sync
    + 'static
{
    fn int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("scalar type cannot hold an i64")
    }

    fn from_big(n: &BigInt) -> Option<Self> {
        Self::try_from(n.clone()).ok()
    }

    fn to_big(&self) -> BigInt {
        self.to_bigint().expect("scalar converts to BigInt")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + ToBigInt
        + TryFrom<BigInt>
        + FromStr
        + Send
        + Sync
        + 'static
{
}

/// Convert a slice of `i64` literals into scalars.
pub fn vec_from<T: Scalar>(xs: &[i64]) -> Vec<T> {
    xs.iter().map(|&x| T::int(x)).collect()
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn neg<T: Scalar>(a: &[T]) -> Vec<T> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn scale<T: Scalar>(k: &T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| k.clone() * x.clone()).collect()
}

/// `a + k * b`
pub fn add_scaled<T: Scalar>(a: &[T], k: &T, b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + k.clone() * y.clone())
        .collect()
}

pub fn is_zero_vec<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Non-negative gcd of all entries; zero for the zero vector.
pub fn content<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |g, x| g.gcd(x))
}

/// Append one coordinate.
pub fn extend<T: Scalar>(a: &[T], last: T) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + 1);
    out.extend_from_slice(a);
    out.push(last);
    out
}

pub fn fmt_vec<T: Display>(a: &[T]) -> String {
    let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}
