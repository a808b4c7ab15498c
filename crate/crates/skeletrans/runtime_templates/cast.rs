//! C-style conversions behind one `cast()` surface.
//!
//! `a.cast::<u16>()` is the typed form; bare `a.cast()` leans on inference
//! to simulate C's implicit conversions. Integer narrowing wraps modulo
//! 2^width (two's complement), pointer casts reinterpret the pointee type,
//! pointers convert to integers (synthetic addresses), and arrays decay to
//! pointers. Integer-to-pointer conversion is deliberately not implemented,
//! so it is rejected at compile time.

use super::ptr::{Array, CVal, Ptr};

pub trait CastIntoTyped<U> {
    fn cast_into(self) -> U;
}

/// Provides the `cast()` method for every type with a conversion.
pub trait CastTo: Sized {
    fn cast<U>(self) -> U
    where
        Self: CastIntoTyped<U>,
    {
        self.cast_into()
    }
}

impl<T> CastTo for T {}

macro_rules! impl_numeric_casts {
    ($from:ty => $($to:ty),*) => {$(
        impl CastIntoTyped<$to> for $from {
            fn cast_into(self) -> $to { self as $to }
        }
    )*};
}

macro_rules! impl_all_numeric_casts {
    ($($from:ty),*) => {$(
        impl_numeric_casts!($from => u8, i8, u16, i16, u32, i32, u64, i64, usize, isize, f32, f64);
    )*};
}

impl_all_numeric_casts!(u8, i8, u16, i16, u32, i32, u64, i64, usize, isize, f32, f64);

/// Pointer reinterpretation: `(U *)p`.
impl<T, U> CastIntoTyped<Ptr<U>> for Ptr<T> {
    fn cast_into(self) -> Ptr<U> {
        self.cast_ptr()
    }
}

/// Array decay (optionally with reinterpretation): `(U *)arr`, `arr` in
/// pointer context.
impl<T: CVal, U, const N: usize> CastIntoTyped<Ptr<U>> for Array<T, N> {
    fn cast_into(self) -> Ptr<U> {
        self.as_ptr().cast_ptr()
    }
}

impl<T: CVal, U, const N: usize> CastIntoTyped<Ptr<U>> for &Array<T, N> {
    fn cast_into(self) -> Ptr<U> {
        self.as_ptr().cast_ptr()
    }
}

macro_rules! impl_ptr_to_int {
    ($($to:ty),*) => {$(
        impl<T> CastIntoTyped<$to> for Ptr<T> {
            fn cast_into(self) -> $to { self.addr() as $to }
        }
    )*};
}
impl_ptr_to_int!(u64, i64, usize, isize, u32, i32);
