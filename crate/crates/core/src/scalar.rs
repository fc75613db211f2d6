//! Endpoint scalars for the region engine.

use num_traits::{Num, Signed};
use std::fmt::Debug;

/// Arithmetic required of interval endpoints: a totally ordered field with
/// exact operations. `num_rational::BigRational` is the canonical instance;
/// any exact `Ratio` type works. Floats are ruled out by the `Ord` bound.
pub trait Scalar: Clone + Ord + Num + Signed + Debug {}

impl<T: Clone + Ord + Num + Signed + Debug> Scalar for T {}

/// Exact halving, used by halo constructions.
pub fn half<T: Scalar>(x: T) -> T {
    let two = T::one() + T::one();
    x / two
}
