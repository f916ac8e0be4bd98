//! Scalar traits the exact layers are generic over.
//!
//! Lattice computations only need a Euclidean ring of signed integers, so
//! they run over `i64`, `i128` or `BigInt` alike. Polynomial coefficients
//! only need field arithmetic, so `Ratio<i64>` and `BigRational` both work.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Signed integers with exact Euclidean division.
pub trait IntegerScalar: num_integer::Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive {
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("every integer scalar holds an i64")
    }

    /// Converts to `i64`, failing when the value does not fit.
    fn to_i64_checked(&self) -> Option<i64> {
        self.to_i64()
    }
}

impl<T> IntegerScalar for T where
    T: num_integer::Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive
{
}

/// Exact field elements used as polynomial coefficients.
pub trait Coefficient: Num + Signed + Clone + Debug + Display + PartialOrd {
    fn from_i64_exact(v: i64) -> Self;

    fn is_integral(&self) -> bool;
}

impl<I> Coefficient for num_rational::Ratio<I>
where
    I: IntegerScalar,
{
    fn from_i64_exact(v: i64) -> Self {
        num_rational::Ratio::from_integer(I::from_i64_exact(v))
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}
