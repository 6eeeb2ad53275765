//! Scalar traits shared by the matrix, polynomial and Smith form code.
//!
//! Everything in this crate is exact. The traits below let the linear algebra
//! run over machine integers, arbitrary-precision integers or rationals
//! without duplicating the algorithms.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_integer::Integer;
use num_traits::{Num, Signed};

/// A commutative ring element with exact arithmetic.
pub trait Scalar: Clone + PartialEq + Debug + Display + Num + Neg<Output = Self> {}

impl<T> Scalar for T where T: Clone + PartialEq + Debug + Display + Num + Neg<Output = T> {}

/// A Euclidean domain with a sign, used by Smith normal form and Bareiss
/// elimination. Division through `Num::div` must be exact whenever it is
/// called from those routines.
pub trait EuclideanScalar: Scalar + Integer + Signed {}

impl<T> EuclideanScalar for T where T: Scalar + Integer + Signed {}

/// Convert a small literal into any scalar.
pub fn lit<T: Scalar>(v: i64) -> T {
    let mut acc = T::zero();
    let one = T::one();
    let mut base = one.clone();
    let mut n = v.unsigned_abs();
    // binary expansion keeps this cheap for large literals
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        n >>= 1;
    }
    if v < 0 {
        -acc
    } else {
        acc
    }
}
