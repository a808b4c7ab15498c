//! Behavioral probes for the compatibility runtime. Each probe prints one
//! `name=value` line; a C oracle program prints the same lines, and the
//! harness requires byte-exact agreement.

mod runtime;

#[forbid(unsafe_code)]
mod checks {
    use crate::runtime::prelude::*;

    global!(pub static COUNTER: i32 = 0);
    global!(pub static INIT_CALLS: i32 = 0);
    global!(pub static TRACKED: i32 = {
        INIT_CALLS.with_mut(|v| *v += 1);
        42
    });

    pub fn run() {
        // Pointer arithmetic, ordering and subscripts over a 5-element buffer.
        let a: Array<i32, 5> = arr![10, 11, 12, 13, 14];
        let p: Ptr<i32> = a.cast();
        let q = p.clone() + 2;
        println!(
            "ptr_arith={},{},{}",
            q.idx(0),
            q.clone() - p.clone(),
            (p < q) as i32
        );

        // Array decay to pointer.
        let arr3: Array<i32, 3> = arr![1, 2, 3];
        let dp: Ptr<i32> = arr3.cast();
        println!("array_decay={}", dp.idx(0) + dp.idx(1) + dp.idx(2));

        // Null-terminated strings.
        let s = cstr!("Hello World!");
        println!("cstr={},{}", s.idx(12), c_strlen!(s));

        // Integer narrowing wraps modulo 2^16.
        let big: i32 = 70000;
        let w: u16 = big.cast();
        println!("cast_wrap={}", w);

        // Pointer-to-integer conversion (byte-accurate differences).
        let pi: u64 = p.clone().cast();
        let qi: u64 = q.clone().cast();
        println!("ptr_int={},{}", qi - pi, (pi != 0) as i32);

        // Cast composition a -> u16 -> i32.
        let a64: i64 = -70000;
        let c1: u16 = a64.cast();
        let c2: i32 = c1.cast();
        println!("cast_chain={}", c2);

        // C for loop: iteration counts and continue re-evaluating the step.
        let mut counts = [0i32; 3];
        for (slot, n) in [(0usize, 0i32), (1, 1), (2, 7)] {
            let mut hits = 0;
            c_for!(let mut i = 0; i < n; post_inc(&mut i) => {
                hits += 1;
            });
            counts[slot] = hits;
        }
        let mut odd_sum = 0;
        c_for!(let mut i = 0; i < 10; post_inc(&mut i) => {
            if i % 2 == 0 {
                continue;
            }
            odd_sum += i;
        });
        println!(
            "c_for={},{},{},{}",
            counts[0], counts[1], counts[2], odd_sum
        );

        // do-while runs at least once.
        let mut n = 0;
        let mut body_runs = 0;
        c_do!({
            body_runs += 1;
            n -= 1;
        } while n > 0);
        println!("c_do={}", body_runs);

        // switch with fallthrough between consecutive arms.
        let mut outs = [0i32; 4];
        for (slot, code) in [(0usize, 0i32), (1, 1), (2, 2), (3, 9)] {
            let mut score = 0;
            c_switch!(code;
                case 0 => { score += 1; };
                case 1 => { score += 2; } break;
                case 2 => { score += 10; } break;
                default => { score = -1; };
            );
            outs[slot] = score;
        }
        println!("c_switch={},{},{},{}", outs[0], outs[1], outs[2], outs[3]);

        // Shared global: 4 tasks adding 1000 each.
        let mut handles = Vec::new();
        for _ in 0..4 {
            handles.push(std::thread::spawn(|| {
                for _ in 0..1000 {
                    COUNTER.with_mut(|v| *v += 1);
                }
            }));
        }
        for h in handles {
            h.join().unwrap();
        }
        println!("global={}", COUNTER.get());

        // Lazy init runs exactly once under concurrent first access.
        let mut readers = Vec::new();
        for _ in 0..4 {
            readers.push(std::thread::spawn(|| TRACKED.get()));
        }
        let mut sum = 0;
        for r in readers {
            sum += r.join().unwrap();
        }
        println!("global_once={},{}", INIT_CALLS.get(), (sum == 4 * 42) as i32);

        // va_format over a VaList.
        let va: VaList = &[&7, &"x"];
        println!("va={}", va_format!("%d-%s", va));

        // snprintf reference: truncate to size-1 and NUL-terminate.
        let buf: Ptr<u8> = c_malloc!(8);
        c_snprintf!(buf.clone(), 8, "value=%d", 1234);
        println!("snprintf={},{}", buf.clone(), c_strlen!(buf));

        // sizeof.
        let sized: Array<i32, 3> = arr![7, 8, 9];
        println!("sizeof={},{}", c_sizeof!(i32), c_sizeofval!(sized));

        // Postfix/prefix increment and decrement.
        let mut x = 5;
        let r1 = post_inc(&mut x);
        let r2 = x;
        let r3 = pre_inc(&mut x);
        let r4 = post_dec(&mut x);
        let r5 = pre_dec(&mut x);
        println!("incdec={},{},{},{},{}", r1, r2, r3, r4, r5);

        // c_ref aliases its target.
        let b: Ptr<i32> = Ptr::alloc_one(5);
        let pb = c_ref!(b);
        pb.set(7);
        println!("c_ref={}", b.get());

        // memmove over overlapping ranges.
        let m: Ptr<u8> = c_malloc!(16);
        c_for!(let mut i = 0usize; i < 16; post_inc(&mut i) => {
            m.set_idx(i, i as u8);
        });
        c_memmove!(m.clone() + 3, m.clone(), 13);
        let mut parts: Vec<String> = Vec::new();
        c_for!(let mut i = 0usize; i < 16; post_inc(&mut i) => {
            parts.push(format!("{}", m.idx(i)));
        });
        println!("memmove={}", parts.join(","));

        // strcmp sign behavior.
        let sgn = |v: i32| (v > 0) as i32 - (v < 0) as i32;
        println!(
            "strcmp={},{},{}",
            sgn(c_strcmp!(cstr!("abc"), cstr!("abc"))),
            sgn(c_strcmp!(cstr!("abc"), cstr!("abd"))),
            sgn(c_strcmp!(cstr!("abd"), cstr!("abc")))
        );

        // malloc-backed storage is usable.
        let mem: Ptr<u8> = c_malloc!(4);
        mem.set_idx(0, 77u8);
        println!("malloc={}", mem.idx(0));

        // memcpy copies and returns the destination.
        let src = cstr!("wxyz");
        let dst: Ptr<u8> = c_malloc!(5);
        let ret = c_memcpy!(dst.clone(), src, 5);
        println!("memcpy={},{}", ret, (ret == dst) as i32);
    }
}

fn main() {
    checks::run();
}
