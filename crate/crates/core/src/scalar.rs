use num_traits as nt;

/// Scalar type the whole library is generic over.
///
/// Everything downstream needs is bundled here once: IEEE float ops, the
/// usual constants, and conversions from the `f64` literals that carry the
/// model constants. Implemented by `f32` and `f64` through the blanket impl.
pub trait Scalar:
    nt::Float
    + nt::FloatConst
    + nt::FromPrimitive
    + nt::ToPrimitive
    + core::iter::Sum<Self>
    + core::fmt::Debug
    + core::fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: nt::Float
        + nt::FloatConst
        + nt::FromPrimitive
        + nt::ToPrimitive
        + core::iter::Sum<T>
        + core::fmt::Debug
        + core::fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Lift an `f64` constant into the working scalar.
///
/// Infallible for the intended instantiations: every constant in this crate
/// is representable (with rounding) in `f32` and exactly in `f64`.
#[inline]
pub fn cst<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("constant not representable in scalar type")
}

/// Best-effort `f64` view of a scalar, for error messages and reports.
#[inline]
pub fn as_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
