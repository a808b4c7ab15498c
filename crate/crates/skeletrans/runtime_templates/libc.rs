//! Safe counterparts of the supported libc subset, exposed as `c_name!()`
//! macros over byte-level buffer operations.

use super::ptr::Ptr;

pub fn memcpy_impl<D, S>(dest: &Ptr<D>, src: &Ptr<S>, n: usize) {
    let data = src.read_bytes(n);
    dest.write_bytes(&data);
}

/// Overlap-safe move: the source range is materialized before writing.
pub fn memmove_impl<D, S>(dest: &Ptr<D>, src: &Ptr<S>, n: usize) {
    let data = src.read_bytes(n);
    dest.write_bytes(&data);
}

pub fn memset_impl<D>(dest: &Ptr<D>, value: i32, n: usize) {
    dest.write_bytes(&vec![value as u8; n]);
}

pub fn memcmp_impl<A, B>(a: &Ptr<A>, b: &Ptr<B>, n: usize) -> i32 {
    let ab = a.read_bytes(n);
    let bb = b.read_bytes(n);
    for i in 0..n {
        if ab[i] != bb[i] {
            return ab[i] as i32 - bb[i] as i32;
        }
    }
    0
}

pub fn strlen_impl(s: &Ptr<u8>) -> usize {
    s.c_str_bytes().len()
}

pub fn strcmp_impl(a: &Ptr<u8>, b: &Ptr<u8>) -> i32 {
    let ab = a.c_str_bytes();
    let bb = b.c_str_bytes();
    let n = ab.len().min(bb.len());
    for i in 0..n {
        if ab[i] != bb[i] {
            return ab[i] as i32 - bb[i] as i32;
        }
    }
    ab.len() as i32 - bb.len() as i32
}

#[macro_export]
macro_rules! c_malloc {
    ($n:expr) => {
        $crate::runtime::ptr::Ptr::<u8>::alloc_n(($n) as usize)
    };
}
pub use c_malloc;

#[macro_export]
macro_rules! c_free {
    ($p:expr) => {
        ($p).free()
    };
}
pub use c_free;

#[macro_export]
macro_rules! c_memcpy {
    ($d:expr, $s:expr, $n:expr) => {{
        let __d = $d;
        $crate::runtime::libc::memcpy_impl(&__d, &$s, ($n) as usize);
        __d
    }};
}
pub use c_memcpy;

#[macro_export]
macro_rules! c_memmove {
    ($d:expr, $s:expr, $n:expr) => {{
        let __d = $d;
        $crate::runtime::libc::memmove_impl(&__d, &$s, ($n) as usize);
        __d
    }};
}
pub use c_memmove;

#[macro_export]
macro_rules! c_memset {
    ($d:expr, $v:expr, $n:expr) => {{
        let __d = $d;
        $crate::runtime::libc::memset_impl(&__d, ($v) as i32, ($n) as usize);
        __d
    }};
}
pub use c_memset;

#[macro_export]
macro_rules! c_strlen {
    ($s:expr) => {
        $crate::runtime::libc::strlen_impl(&$s)
    };
}
pub use c_strlen;

#[macro_export]
macro_rules! c_strcmp {
    ($a:expr, $b:expr) => {
        $crate::runtime::libc::strcmp_impl(&$a, &$b)
    };
}
pub use c_strcmp;

#[macro_export]
macro_rules! c_fopen {
    ($path:expr, $mode:expr) => {
        $crate::runtime::file::FilePtr::open(&($path).to_string(), &($mode).to_string())
    };
}
pub use c_fopen;

#[macro_export]
macro_rules! c_fclose {
    ($f:expr) => {
        ($f).close()
    };
}
pub use c_fclose;

#[macro_export]
macro_rules! c_fread {
    ($buf:expr, $size:expr, $nmemb:expr, $f:expr) => {
        ($f).read_items(&$buf, ($size) as usize, ($nmemb) as usize)
    };
}
pub use c_fread;

#[macro_export]
macro_rules! c_fwrite {
    ($buf:expr, $size:expr, $nmemb:expr, $f:expr) => {
        ($f).write_items(&$buf, ($size) as usize, ($nmemb) as usize)
    };
}
pub use c_fwrite;

#[macro_export]
macro_rules! c_snprintf {
    ($buf:expr, $size:expr, $fmt:expr $(, $arg:expr)* $(,)?) => {{
        let __va: $crate::runtime::va::VaList = &[$(&$arg),*];
        $crate::runtime::va::snprintf($buf, ($size) as usize, &($fmt).to_string(), __va)
    }};
}
pub use c_snprintf;

#[macro_export]
macro_rules! c_printf {
    ($fmt:expr $(, $arg:expr)* $(,)?) => {{
        let __va: $crate::runtime::va::VaList = &[$(&$arg),*];
        let __s = $crate::runtime::va::va_format_impl(&($fmt).to_string(), __va);
        ::std::print!("{}", __s);
        __s.len() as i32
    }};
}
pub use c_printf;
