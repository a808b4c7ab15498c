//! Vendored compatibility runtime: C semantics behind a safe Rust surface.
//!
//! Generated code never needs `unsafe`; pointers are bounds-checked handles
//! into shared byte buffers, and C idioms (arrays, strings, globals,
//! variadics, `for`/`do`/`switch`, casts, `sizeof`, `++`/`--`) are provided
//! as types and macros re-exported from [`prelude`].
//!
//! Out-of-bounds access, null dereference and use-after-free trap with a
//! panic carrying a diagnostic instead of exhibiting undefined behavior.

pub mod cast;
pub mod ctrl;
pub mod file;
pub mod global;
pub mod libc;
pub mod ptr;
pub mod va;

pub const RUNTIME_VERSION: &str = "skeletrans-runtime 1";

#[allow(unused_imports)]
pub mod prelude {
    pub use super::cast::{CastIntoTyped, CastTo};
    pub use super::ctrl::{post_dec, post_inc, pre_dec, pre_inc, CSized, StepOne};
    pub use super::file::FilePtr;
    pub use super::global::Global;
    pub use super::libc::{
        c_fclose, c_fopen, c_fread, c_free, c_fwrite, c_malloc, c_memcpy, c_memmove, c_memset,
        c_printf, c_snprintf, c_strcmp, c_strlen,
    };
    pub use super::ptr::{arr, c_null, c_ref, cstr, Array, CRef, CVal, FuncPtr, Ptr, Void};
    pub use super::ctrl::{c_do, c_for, c_sizeof, c_sizeofval, c_switch};
    pub use super::global::global;
    pub use super::va::{va_format, VaList};
    pub use super::RUNTIME_VERSION;
}
