//! Variadic arguments: a `VaList` is a slice of `Display` references and
//! `va_format!` is the C-style formatter consuming it.
//!
//! Supported directives: `%d` `%i` `%u` `%s` `%c` `%x` `%X` `%o` `%f` `%%`,
//! with optional width and zero-pad flags (e.g. `%02x`). Numeric directives
//! reparse the argument's `Display` output, which is exact for the integer
//! and float types generated code produces.

use std::fmt::Display;

pub type VaList<'a> = &'a [&'a dyn Display];

pub fn va_format_impl(fmt: &str, va: VaList) -> String {
    let mut out = String::new();
    let mut args = va.iter();
    let mut chars = fmt.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '%' {
            out.push(c);
            continue;
        }
        let mut zero_pad = false;
        let mut width = 0usize;
        let mut precision: Option<usize> = None;
        while let Some(&d) = chars.peek() {
            match d {
                '0' if width == 0 && !zero_pad => {
                    zero_pad = true;
                    chars.next();
                }
                '0'..='9' => {
                    width = width * 10 + (d as usize - '0' as usize);
                    chars.next();
                }
                '.' => {
                    chars.next();
                    let mut p = 0usize;
                    while let Some(&e) = chars.peek() {
                        if e.is_ascii_digit() {
                            p = p * 10 + (e as usize - '0' as usize);
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    precision = Some(p);
                }
                'l' | 'h' | 'z' => {
                    chars.next(); // length modifiers are irrelevant here
                }
                _ => break,
            }
        }
        let spec = match chars.next() {
            Some(s) => s,
            None => {
                out.push('%');
                break;
            }
        };
        if spec == '%' {
            out.push('%');
            continue;
        }
        let rendered = match args.next() {
            Some(arg) => render_directive(spec, precision, &arg.to_string()),
            None => String::from("(missing)"),
        };
        if rendered.len() < width {
            let pad = if zero_pad && spec != 's' { '0' } else { ' ' };
            for _ in 0..(width - rendered.len()) {
                out.push(pad);
            }
        }
        out.push_str(&rendered);
    }
    out
}

fn render_directive(spec: char, precision: Option<usize>, shown: &str) -> String {
    match spec {
        'd' | 'i' | 'u' => shown.to_string(),
        's' => shown.to_string(),
        'c' => match shown.parse::<u32>() {
            Ok(v) => char::from_u32(v).map(String::from).unwrap_or_default(),
            Err(_) => shown.chars().next().map(String::from).unwrap_or_default(),
        },
        'x' => match shown.parse::<i128>() {
            Ok(v) => format!("{:x}", v & 0xffff_ffff),
            Err(_) => shown.to_string(),
        },
        'X' => match shown.parse::<i128>() {
            Ok(v) => format!("{:X}", v & 0xffff_ffff),
            Err(_) => shown.to_string(),
        },
        'o' => match shown.parse::<i128>() {
            Ok(v) => format!("{:o}", v & 0xffff_ffff),
            Err(_) => shown.to_string(),
        },
        'f' => match shown.parse::<f64>() {
            Ok(v) => format!("{:.*}", precision.unwrap_or(6), v),
            Err(_) => shown.to_string(),
        },
        _ => shown.to_string(),
    }
}

/// The `snprintf` reference: formats into `buf`, truncating to `size - 1`
/// bytes and always NUL-terminating; returns the number of bytes written
/// (the truncated length).
pub fn snprintf(buf: super::ptr::Ptr<u8>, size: usize, format: &str, va: VaList) -> i32 {
    if size == 0 {
        return 0;
    }
    let tmp = va_format_impl(format, va);
    let mut length = tmp.as_bytes().len();
    if length > size - 1 {
        length = size - 1;
    }
    for (i, b) in tmp.as_bytes()[..length].iter().enumerate() {
        buf.set_idx(i, *b);
    }
    buf.set_idx(length, 0u8);
    length as i32
}

#[macro_export]
macro_rules! va_format {
    ($fmt:expr, $va:expr) => {
        $crate::runtime::va::va_format_impl(&($fmt).to_string(), $va)
    };
}
pub use va_format;
