//! C control flow and operators: `c_for!`, `c_do!`, `c_switch!`,
//! increment/decrement helpers, `c_sizeof!`/`c_sizeofval!`.

use super::ptr::{CVal, Ptr};

/// Types `++`/`--` apply to: all integers and pointers.
pub trait StepOne: Clone {
    fn step_add(&mut self);
    fn step_sub(&mut self);
}

#[macro_export]
macro_rules! impl_step_int {
    ($($t:ty),*) => {$(
        impl StepOne for $t {
            fn step_add(&mut self) { *self = self.wrapping_add(1); }
            fn step_sub(&mut self) { *self = self.wrapping_sub(1); }
        }
    )*};
}
impl_step_int!(u8, i8, u16, i16, u32, i32, u64, i64, usize, isize);

impl<T: CVal> StepOne for Ptr<T> {
    fn step_add(&mut self) {
        *self = self.byte_offset(T::SIZE as isize);
    }
    fn step_sub(&mut self) {
        *self = self.byte_offset(-(T::SIZE as isize));
    }
}

/// `x++`: returns the old value.
pub fn post_inc<T: StepOne>(x: &mut T) -> T {
    let old = x.clone();
    x.step_add();
    old
}

/// `++x`: returns the new value.
pub fn pre_inc<T: StepOne>(x: &mut T) -> T {
    x.step_add();
    x.clone()
}

/// `x--`: returns the old value.
pub fn post_dec<T: StepOne>(x: &mut T) -> T {
    let old = x.clone();
    x.step_sub();
    old
}

/// `--x`: returns the new value.
pub fn pre_dec<T: StepOne>(x: &mut T) -> T {
    x.step_sub();
    x.clone()
}

/// `sizeof(value)` for runtime values.
pub trait CSized {
    fn c_byte_size(&self) -> usize;
}

impl<T: CVal> CSized for T {
    fn c_byte_size(&self) -> usize {
        T::SIZE
    }
}

/// A C `for` loop. The step clause runs before every condition check except
/// the first, so `continue` inside the body re-evaluates the step exactly
/// like C.
#[macro_export]
macro_rules! c_for {
    ($init:stmt; $cond:expr; $step:expr => $body:block) => {{
        $init;
        let mut __c_for_first = true;
        loop {
            if __c_for_first {
                __c_for_first = false;
            } else {
                $step;
            }
            if !($cond) {
                break;
            }
            $body
        }
    }};
    (; $cond:expr; $step:expr => $body:block) => {{
        let mut __c_for_first = true;
        loop {
            if __c_for_first {
                __c_for_first = false;
            } else {
                $step;
            }
            if !($cond) {
                break;
            }
            $body
        }
    }};
}
pub use c_for;

/// A C `do { .. } while (cond)` loop: the body always runs once, and
/// `continue` jumps to the condition check.
#[macro_export]
macro_rules! c_do {
    ($body:block while $cond:expr) => {{
        let mut __c_do_first = true;
        loop {
            if __c_do_first {
                __c_do_first = false;
            } else if !($cond) {
                break;
            }
            $body
        }
    }};
}
pub use c_do;

/// A C `switch` with fallthrough between consecutive arms when no `break`
/// marker is present. Cases sharing one arm are comma-separated
/// (`case 1, 2 => ..`); `default` must be the final arm when present.
#[macro_export]
macro_rules! c_switch {
    (@marker break) => {};
    ($sel:expr;
     $(case $($v:expr),+ => $body:block $($brk:ident)?;)+
     $(default => $dbody:block;)?
    ) => {{
        let __c_switch_sel = $sel;
        #[allow(unused_mut, unused_assignments)]
        let mut __c_switch_fall = false;
        #[allow(unused_mut, unused_assignments)]
        let mut __c_switch_matched = false;
        '__c_switch: {
            $(
                if __c_switch_fall $(|| __c_switch_sel == $v)+ {
                    __c_switch_fall = true;
                    __c_switch_matched = true;
                    $body
                    $(
                        c_switch!(@marker $brk);
                        break '__c_switch;
                    )?
                }
            )+
            $(
                if __c_switch_fall || !__c_switch_matched {
                    $dbody
                }
            )?
            let _ = (__c_switch_fall, __c_switch_matched);
        }
    }};
}
pub use c_switch;

/// `sizeof(type)`.
#[macro_export]
macro_rules! c_sizeof {
    ($t:ty) => {
        <$t as $crate::runtime::ptr::CVal>::SIZE
    };
}
pub use c_sizeof;

/// `sizeof(value)`.
#[macro_export]
macro_rules! c_sizeofval {
    ($v:expr) => {
        $crate::runtime::ctrl::CSized::c_byte_size(&$v)
    };
}
pub use c_sizeofval;
