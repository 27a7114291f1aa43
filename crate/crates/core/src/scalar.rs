//! Real scalar abstraction shared by every numeric routine in the crate.
//!
//! All operators and states are complex matrices/vectors over `Complex<T>`
//! where `T: Real`. The default instantiation is `f64`; `f32` is supported
//! for the linear algebra but the tolerances quoted throughout the crate are
//! calibrated for double precision.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Complex scalar over a [`Real`] base field.
pub type C<T> = Complex<T>;

/// Floating-point base field for operator and state entries.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Convert an `f64` literal, rounding if necessary.
    fn of(x: f64) -> Self;

    /// Widen to `f64` for reporting.
    fn as_f64(self) -> f64;

    /// Dense row-major product `c = a * b` with `a` of shape `m x k` and `b`
    /// of shape `k x n`. `c` is overwritten.
    fn gemm(m: usize, k: usize, n: usize, a: &[C<Self>], b: &[C<Self>], c: &mut [C<Self>]);
}

macro_rules! impl_real {
    ($t:ty, $kernel:ident) => {
        impl Real for $t {
            #[inline]
            fn of(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }

            fn gemm(m: usize, k: usize, n: usize, a: &[C<Self>], b: &[C<Self>], c: &mut [C<Self>]) {
                assert_eq!(a.len(), m * k);
                assert_eq!(b.len(), k * n);
                assert_eq!(c.len(), m * n);
                if m == 0 || n == 0 {
                    return;
                }
                if k == 0 {
                    c.fill(C::new(0.0, 0.0));
                    return;
                }
                // SAFETY: `Complex<T>` is `repr(C)` with layout `[T; 2]`, the
                // slices have the asserted lengths and the strides describe
                // dense row-major storage of exactly those shapes.
                unsafe {
                    matrixmultiply::$kernel(
                        matrixmultiply::CGemmOption::Standard,
                        matrixmultiply::CGemmOption::Standard,
                        m,
                        k,
                        n,
                        [1.0, 0.0],
                        a.as_ptr() as *const [$t; 2],
                        k as isize,
                        1,
                        b.as_ptr() as *const [$t; 2],
                        n as isize,
                        1,
                        [0.0, 0.0],
                        c.as_mut_ptr() as *mut [$t; 2],
                        n as isize,
                        1,
                    );
                }
            }
        }
    };
}

impl_real!(f32, cgemm);
impl_real!(f64, zgemm);

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    C::new(x, T::zero())
}
