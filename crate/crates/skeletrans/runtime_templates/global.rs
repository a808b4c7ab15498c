//! Safe mutable globals: a `Mutex`-backed, lazily initialized cell,
//! replacing C's `static` variables without `static mut`.

use std::sync::{Mutex, MutexGuard, OnceLock};

pub struct Global<T> {
    cell: OnceLock<Mutex<T>>,
    init: fn() -> T,
}

impl<T> Global<T> {
    pub const fn new(init: fn() -> T) -> Self {
        Global {
            cell: OnceLock::new(),
            init,
        }
    }

    fn lock(&self) -> MutexGuard<'_, T> {
        self.cell
            .get_or_init(|| Mutex::new((self.init)()))
            .lock()
            .unwrap_or_else(|e| e.into_inner())
    }

    pub fn get(&self) -> T
    where
        T: Clone,
    {
        self.lock().clone()
    }

    pub fn set(&self, value: T) {
        *self.lock() = value;
    }

    pub fn with<R>(&self, f: impl FnOnce(&T) -> R) -> R {
        f(&self.lock())
    }

    pub fn with_mut<R>(&self, f: impl FnOnce(&mut T) -> R) -> R {
        f(&mut self.lock())
    }
}

/// Declare a lazily initialized global:
/// `global!(pub static COUNT: i32 = 0);`
#[macro_export]
macro_rules! global {
    ($vis:vis static $name:ident: $ty:ty = $init:expr) => {
        $vis static $name: $crate::runtime::global::Global<$ty> =
            $crate::runtime::global::Global::new(|| $init);
    };
    ($vis:vis static $name:ident: $ty:ty = $init:expr;) => {
        $crate::runtime::global::global!($vis static $name: $ty = $init);
    };
}
pub use global;
