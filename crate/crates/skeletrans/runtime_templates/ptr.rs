//! Pointers, arrays, C strings and the byte-buffer store behind them.
//!
//! Every allocation is a reference-counted byte buffer with a liveness
//! flag; a `Ptr<T>` is a (buffer, byte-offset) pair, so pointer arithmetic,
//! subscripting, pointer difference and cross-type pointer casts all behave
//! like C while staying bounds-checked. Values are stored little-endian.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock, Weak};

static NEXT_BUF_ID: AtomicU64 = AtomicU64::new(1);

/// Weak registry of live buffers so pointers can round-trip through
/// memory (e.g. arrays of pointers, pointer-typed struct fields).
fn registry() -> &'static Mutex<BTreeMap<u64, Weak<ByteBuf>>> {
    static REGISTRY: OnceLock<Mutex<BTreeMap<u64, Weak<ByteBuf>>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(BTreeMap::new()))
}

fn register_buf(buf: &Arc<ByteBuf>) {
    let mut reg = registry().lock().unwrap_or_else(|e| e.into_inner());
    if reg.len() % 1024 == 1023 {
        reg.retain(|_, w| w.strong_count() > 0);
    }
    reg.insert(buf.id, Arc::downgrade(buf));
}

fn lookup_buf(id: u64) -> Option<Arc<ByteBuf>> {
    registry()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get(&id)
        .and_then(Weak::upgrade)
}

/// Synthetic address space: each buffer gets a 4 GiB-spaced base so
/// pointer-to-integer casts produce distinct, ordered addresses.
const ADDR_BASE: u64 = 0x1000_0000_0000;
const ADDR_STRIDE: u64 = 0x1_0000_0000;

pub struct ByteBuf {
    id: u64,
    inner: Mutex<BufInner>,
}

struct BufInner {
    bytes: Vec<u8>,
    alive: bool,
}

impl ByteBuf {
    pub fn new(bytes: Vec<u8>) -> Arc<ByteBuf> {
        let buf = Arc::new(ByteBuf {
            id: NEXT_BUF_ID.fetch_add(1, Ordering::Relaxed),
            inner: Mutex::new(BufInner { bytes, alive: true }),
        });
        register_buf(&buf);
        buf
    }

    pub fn zeroed(len: usize) -> Arc<ByteBuf> {
        Self::new(vec![0; len])
    }

    fn read(&self, off: isize, out: &mut [u8], what: &str) {
        let inner = self.inner.lock().unwrap();
        if !inner.alive {
            trap(&format!("{what}: use after free"));
        }
        let (start, end) = span_of(off, out.len(), inner.bytes.len(), what);
        out.copy_from_slice(&inner.bytes[start..end]);
    }

    fn write(&self, off: isize, data: &[u8], what: &str) {
        let mut inner = self.inner.lock().unwrap();
        if !inner.alive {
            trap(&format!("{what}: use after free"));
        }
        let (start, end) = span_of(off, data.len(), inner.bytes.len(), what);
        inner.bytes[start..end].copy_from_slice(data);
    }

    fn len(&self) -> usize {
        self.inner.lock().unwrap().bytes.len()
    }

    fn kill(&self) {
        self.inner.lock().unwrap().alive = false;
    }
}

fn span_of(off: isize, len: usize, buf_len: usize, what: &str) -> (usize, usize) {
    if off < 0 {
        trap(&format!("{what}: negative offset {off}"));
    }
    let start = off as usize;
    let end = start.checked_add(len).unwrap_or(usize::MAX);
    if end > buf_len {
        trap(&format!(
            "{what}: access [{start}..{end}] out of bounds (buffer is {buf_len} bytes)"
        ));
    }
    (start, end)
}

#[cold]
fn trap(msg: &str) -> ! {
    panic!("runtime trap: {msg}");
}

/// Plain-data values that can live inside a buffer.
pub trait CVal: Clone + Send + 'static {
    const SIZE: usize;
    fn store(&self, out: &mut [u8]);
    fn load(inp: &[u8]) -> Self;
}

#[macro_export]
macro_rules! impl_cval_num {
    ($($t:ty),*) => {$(
        impl CVal for $t {
            const SIZE: usize = std::mem::size_of::<$t>();
            fn store(&self, out: &mut [u8]) { out.copy_from_slice(&self.to_le_bytes()); }
            fn load(inp: &[u8]) -> Self { <$t>::from_le_bytes(inp.try_into().unwrap()) }
        }
    )*};
}
impl_cval_num!(u8, i8, u16, i16, u32, i32, u64, i64, usize, isize, f32, f64);

impl CVal for bool {
    const SIZE: usize = 1;
    fn store(&self, out: &mut [u8]) {
        out[0] = *self as u8;
    }
    fn load(inp: &[u8]) -> Self {
        inp[0] != 0
    }
}

/// The C `void` type: never a value, only meaningful behind `Ptr`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Void {}

impl fmt::Debug for Void {
    fn fmt(&self, _: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {}
    }
}

/// A C pointer: shared handle into a byte buffer plus a byte offset.
///
/// The handle may legally point out of bounds (C allows forming such
/// pointers); every access is checked. `T` is phantom, so `Ptr<T>` exists
/// for any `T` while element access requires `T: CVal`.
pub struct Ptr<T> {
    buf: Option<Arc<ByteBuf>>,
    off: isize,
    _t: PhantomData<fn() -> T>,
}

impl<T> Ptr<T> {
    pub fn null() -> Self {
        Ptr {
            buf: None,
            off: 0,
            _t: PhantomData,
        }
    }

    pub fn is_null(&self) -> bool {
        self.buf.is_none()
    }

    pub(crate) fn from_parts(buf: Arc<ByteBuf>, off: isize) -> Self {
        Ptr {
            buf: Some(buf),
            off,
            _t: PhantomData,
        }
    }

    fn expect_buf(&self, what: &str) -> &Arc<ByteBuf> {
        match &self.buf {
            Some(b) => b,
            None => trap(&format!("{what}: null pointer dereference")),
        }
    }

    /// Reinterpret this pointer at another element type, C-cast style.
    pub fn cast_ptr<U>(&self) -> Ptr<U> {
        Ptr {
            buf: self.buf.clone(),
            off: self.off,
            _t: PhantomData,
        }
    }

    /// Synthetic integer address (stable per buffer, offset-accurate).
    pub fn addr(&self) -> u64 {
        match &self.buf {
            None => 0,
            Some(b) => ADDR_BASE
                .wrapping_add(b.id.wrapping_mul(ADDR_STRIDE))
                .wrapping_add(self.off as u64),
        }
    }

    pub fn read_bytes(&self, len: usize) -> Vec<u8> {
        let mut out = vec![0; len];
        self.expect_buf("read").read(self.off, &mut out, "read");
        out
    }

    pub fn write_bytes(&self, data: &[u8]) {
        self.expect_buf("write").write(self.off, data, "write");
    }

    /// Remaining bytes between this pointer and the end of its buffer.
    pub fn bytes_left(&self) -> usize {
        let b = self.expect_buf("bounds query");
        (b.len() as isize - self.off).max(0) as usize
    }

    pub fn byte_offset(&self, delta: isize) -> Ptr<T> {
        Ptr {
            buf: self.buf.clone(),
            off: self.off + delta,
            _t: PhantomData,
        }
    }

    /// Mark the backing allocation dead; later access traps.
    pub fn free(&self) {
        self.expect_buf("free").kill();
    }
}

impl<T: CVal> Ptr<T> {
    /// Allocate a one-element cell; the translation of a C local whose
    /// address is taken.
    pub fn alloc_one(v: T) -> Ptr<T> {
        let p = Ptr::from_parts(ByteBuf::zeroed(T::SIZE), 0);
        p.set(v);
        p
    }

    /// Allocate `n` zeroed elements.
    pub fn alloc_n(n: usize) -> Ptr<T> {
        Ptr::from_parts(ByteBuf::zeroed(T::SIZE * n), 0)
    }

    /// `*p`
    pub fn get(&self) -> T {
        let mut tmp = vec![0u8; T::SIZE];
        self.expect_buf("deref").read(self.off, &mut tmp, "deref");
        T::load(&tmp)
    }

    /// `*p = v`
    pub fn set(&self, v: T) {
        let mut tmp = vec![0u8; T::SIZE];
        v.store(&mut tmp);
        self.expect_buf("deref").write(self.off, &tmp, "deref");
    }

    /// `p[i]`
    pub fn idx<I: CIdx>(&self, i: I) -> T {
        self.byte_offset(i.as_isize() * T::SIZE as isize).get()
    }

    /// `p[i] = v`
    pub fn set_idx<I: CIdx>(&self, i: I, v: T) {
        self.byte_offset(i.as_isize() * T::SIZE as isize).set(v);
    }

    /// In-place update of `*p`.
    pub fn update<R>(&self, f: impl FnOnce(&mut T) -> R) -> R {
        let mut v = self.get();
        let r = f(&mut v);
        self.set(v);
        r
    }
}

impl Ptr<u8> {
    /// Allocate a NUL-terminated C string.
    pub fn from_str_lit(s: &str) -> Ptr<u8> {
        let mut bytes = s.as_bytes().to_vec();
        bytes.push(0);
        Ptr::from_parts(ByteBuf::new(bytes), 0)
    }

    /// Bytes up to (not including) the NUL terminator.
    pub fn c_str_bytes(&self) -> Vec<u8> {
        let b = self.expect_buf("string read");
        let mut out = Vec::new();
        let mut off = self.off;
        loop {
            let mut byte = [0u8; 1];
            b.read(off, &mut byte, "string read");
            if byte[0] == 0 {
                return out;
            }
            out.push(byte[0]);
            off += 1;
        }
    }
}

impl fmt::Display for Ptr<u8> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.c_str_bytes()))
    }
}

impl<T> Clone for Ptr<T> {
    fn clone(&self) -> Self {
        Ptr {
            buf: self.buf.clone(),
            off: self.off,
            _t: PhantomData,
        }
    }
}

impl<T> Default for Ptr<T> {
    fn default() -> Self {
        Ptr::null()
    }
}

impl<T> fmt::Debug for Ptr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.buf {
            None => write!(f, "Ptr(null)"),
            Some(b) => write!(f, "Ptr(buf#{}+{})", b.id, self.off),
        }
    }
}

impl<T> PartialEq for Ptr<T> {
    fn eq(&self, other: &Self) -> bool {
        match (&self.buf, &other.buf) {
            (None, None) => true,
            (Some(a), Some(b)) => a.id == b.id && self.off == other.off,
            _ => false,
        }
    }
}

impl<T> Eq for Ptr<T> {}

impl<T> PartialOrd for Ptr<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (&self.buf, &other.buf) {
            (Some(a), Some(b)) if a.id == b.id => self.off.partial_cmp(&other.off),
            (None, None) => Some(std::cmp::Ordering::Equal),
            _ => None,
        }
    }
}

/// Integer types accepted as subscripts and pointer-arithmetic operands.
pub trait CIdx: Copy {
    fn as_isize(self) -> isize;
}

#[macro_export]
macro_rules! impl_cidx {
    ($($t:ty),*) => {$(
        impl CIdx for $t {
            fn as_isize(self) -> isize { self as isize }
        }
    )*};
}
impl_cidx!(u8, i8, u16, i16, u32, i32, u64, i64, usize, isize);

impl<T: CVal, I: CIdx> std::ops::Add<I> for Ptr<T> {
    type Output = Ptr<T>;
    fn add(self, rhs: I) -> Ptr<T> {
        self.byte_offset(rhs.as_isize() * T::SIZE as isize)
    }
}

impl<T: CVal, I: CIdx> std::ops::Add<I> for &Ptr<T> {
    type Output = Ptr<T>;
    fn add(self, rhs: I) -> Ptr<T> {
        self.byte_offset(rhs.as_isize() * T::SIZE as isize)
    }
}

impl<T: CVal, I: CIdx> std::ops::Sub<I> for Ptr<T> {
    type Output = Ptr<T>;
    fn sub(self, rhs: I) -> Ptr<T> {
        self.byte_offset(-(rhs.as_isize() * T::SIZE as isize))
    }
}

impl<T: CVal, I: CIdx> std::ops::AddAssign<I> for Ptr<T> {
    fn add_assign(&mut self, rhs: I) {
        self.off += rhs.as_isize() * T::SIZE as isize;
    }
}

impl<T: CVal, I: CIdx> std::ops::SubAssign<I> for Ptr<T> {
    fn sub_assign(&mut self, rhs: I) {
        self.off -= rhs.as_isize() * T::SIZE as isize;
    }
}

/// Pointer difference in elements, like C.
impl<T: CVal> std::ops::Sub<Ptr<T>> for Ptr<T> {
    type Output = isize;
    fn sub(self, rhs: Ptr<T>) -> isize {
        match (&self.buf, &rhs.buf) {
            (Some(a), Some(b)) if a.id == b.id => (self.off - rhs.off) / T::SIZE as isize,
            _ => trap("pointer difference across unrelated buffers"),
        }
    }
}

/// A C array value: a fixed-extent view of an owned buffer. Cloning an
/// `Array` clones the handle (the view aliases), mirroring how C arrays
/// decay rather than copy in expression context.
pub struct Array<T, const N: usize> {
    buf: Arc<ByteBuf>,
    _t: PhantomData<fn() -> T>,
}

impl<T: CVal, const N: usize> Array<T, N> {
    pub fn zeroed() -> Self {
        Array {
            buf: ByteBuf::zeroed(T::SIZE * N),
            _t: PhantomData,
        }
    }

    /// Build from a (possibly shorter) element list; the remainder stays
    /// zero-initialized, matching C's partial aggregate initializers.
    pub fn from_list(items: Vec<T>) -> Self {
        let a = Self::zeroed();
        if items.len() > N {
            trap(&format!(
                "array initializer has {} elements but extent is {N}",
                items.len()
            ));
        }
        for (i, v) in items.into_iter().enumerate() {
            a.set_idx(i, v);
        }
        a
    }

    pub fn len(&self) -> usize {
        N
    }

    pub fn is_empty(&self) -> bool {
        N == 0
    }

    pub fn byte_size(&self) -> usize {
        T::SIZE * N
    }

    pub fn idx<I: CIdx>(&self, i: I) -> T {
        self.as_ptr().idx(i)
    }

    pub fn set_idx<I: CIdx>(&self, i: I, v: T) {
        self.as_ptr().set_idx(i, v);
    }

    /// Decay to a pointer to the first element (aliases this array).
    pub fn as_ptr(&self) -> Ptr<T> {
        Ptr::from_parts(self.buf.clone(), 0)
    }
}

impl<T: CVal, const N: usize> Default for Array<T, N> {
    fn default() -> Self {
        Self::zeroed()
    }
}

impl<T, const N: usize> Clone for Array<T, N> {
    fn clone(&self) -> Self {
        Array {
            buf: self.buf.clone(),
            _t: PhantomData,
        }
    }
}

impl<T, const N: usize> fmt::Debug for Array<T, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Array<_, {N}>(buf#{})", self.buf.id)
    }
}

impl<T: CVal, const N: usize> CVal for Array<T, N> {
    const SIZE: usize = T::SIZE * N;
    fn store(&self, out: &mut [u8]) {
        let bytes = self.as_ptr().read_bytes(T::SIZE * N);
        out.copy_from_slice(&bytes);
    }
    fn load(inp: &[u8]) -> Self {
        let a = Self::zeroed();
        a.as_ptr().write_bytes(inp);
        a
    }
}

/// Pointers round-trip through buffers as (buffer id, offset) pairs. A
/// pointer whose buffer has been dropped entirely loads as null; pointers
/// to freed-but-referenced buffers still trap on access.
impl<T: 'static> CVal for Ptr<T> {
    const SIZE: usize = 16;
    fn store(&self, out: &mut [u8]) {
        let id = self.buf.as_ref().map(|b| b.id).unwrap_or(0);
        out[..8].copy_from_slice(&id.to_le_bytes());
        out[8..16].copy_from_slice(&(self.off as i64).to_le_bytes());
    }
    fn load(inp: &[u8]) -> Self {
        let id = u64::from_le_bytes(inp[..8].try_into().unwrap());
        if id == 0 {
            return Ptr::null();
        }
        let off = i64::from_le_bytes(inp[8..16].try_into().unwrap()) as isize;
        match lookup_buf(id) {
            Some(buf) => Ptr::from_parts(buf, off),
            None => Ptr::null(),
        }
    }
}

/// Things `c_ref!` can take the address of.
pub trait CRef {
    type Target;
    fn c_ref(&self) -> Ptr<Self::Target>;
}

impl<T: CVal, const N: usize> CRef for Array<T, N> {
    type Target = T;
    fn c_ref(&self) -> Ptr<T> {
        self.as_ptr()
    }
}

/// Taking the address of a cell-modeled local (itself a `Ptr`) yields the
/// cell handle: reads/writes through the result alias the original.
impl<T> CRef for Ptr<T> {
    type Target = T;
    fn c_ref(&self) -> Ptr<T> {
        self.clone()
    }
}

/// A nullable C function pointer.
pub struct FuncPtr<F>(Option<F>);

impl<F> FuncPtr<F> {
    pub fn new(f: F) -> Self {
        FuncPtr(Some(f))
    }

    pub fn null() -> Self {
        FuncPtr(None)
    }

    pub fn is_null(&self) -> bool {
        self.0.is_none()
    }
}

impl<F: Clone> Clone for FuncPtr<F> {
    fn clone(&self) -> Self {
        FuncPtr(self.0.clone())
    }
}

impl<F> Default for FuncPtr<F> {
    fn default() -> Self {
        FuncPtr(None)
    }
}

impl<F> fmt::Debug for FuncPtr<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FuncPtr({})",
            if self.0.is_some() { "fn" } else { "null" }
        )
    }
}

#[macro_export]
macro_rules! impl_funcptr_call {
    ($($a:ident : $A:ident),*) => {
        impl<R $(, $A)*> FuncPtr<fn($($A),*) -> R> {
            pub fn call(&self, $($a: $A),*) -> R {
                match &self.0 {
                    Some(f) => f($($a),*),
                    None => trap("call through null function pointer"),
                }
            }
        }
    };
}
impl_funcptr_call!();
impl_funcptr_call!(a0: A0);
impl_funcptr_call!(a0: A0, a1: A1);
impl_funcptr_call!(a0: A0, a1: A1, a2: A2);
impl_funcptr_call!(a0: A0, a1: A1, a2: A2, a3: A3);
impl_funcptr_call!(a0: A0, a1: A1, a2: A2, a3: A3, a4: A4);
impl_funcptr_call!(a0: A0, a1: A1, a2: A2, a3: A3, a4: A4, a5: A5);

#[macro_export]
macro_rules! arr {
    () => { $crate::runtime::ptr::Array::from_list(::std::vec::Vec::new()) };
    ($($v:expr),+ $(,)?) => {
        $crate::runtime::ptr::Array::from_list(::std::vec![$($v),+])
    };
}
pub use arr;

#[macro_export]
macro_rules! cstr {
    ($s:expr) => {
        $crate::runtime::ptr::Ptr::<u8>::from_str_lit($s)
    };
}
pub use cstr;

#[macro_export]
macro_rules! c_ref {
    ($x:expr) => {
        $crate::runtime::ptr::CRef::c_ref(&$x)
    };
}
pub use c_ref;

#[macro_export]
macro_rules! c_null {
    () => {
        $crate::runtime::ptr::Ptr::null()
    };
}
pub use c_null;
