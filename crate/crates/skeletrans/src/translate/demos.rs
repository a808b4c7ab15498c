//! Fixed demonstration pairs injected into translation prompts, three per
//! unit kind.

use crate::analyzer::UnitKind;

pub fn demos_for(kind: UnitKind) -> Vec<(String, String)> {
    let pairs: &[(&str, &str)] = match kind {
        UnitKind::Macro => &[
            ("#define MAX_LEN 256", "pub const MAX_LEN: i32 = 256;"),
            (
                "#define ROTATE_LEFT(x, n) (((x) << (n)) | ((x) >> (32 - (n))))",
                "#[macro_export]\nmacro_rules! ROTATE_LEFT { ($x:expr, $n:expr) => { (($x << $n) | ($x >> (32 - $n))) }; }\npub use ROTATE_LEFT;",
            ),
            (
                "#define IS_SET(flags, bit) (((flags) >> (bit)) & 1)",
                "#[macro_export]\nmacro_rules! IS_SET { ($flags:expr, $bit:expr) => { (($flags >> $bit) & 1) }; }\npub use IS_SET;",
            ),
        ],
        UnitKind::Definition => &[
            ("typedef unsigned int word_t;", "pub type word_t = u32;"),
            (
                "typedef struct Pair {\n  int first;\n  int second;\n} Pair;",
                "#[derive(Debug, Clone, Default)]\npub struct Pair {\n    pub first: i32,\n    pub second: i32,\n}",
            ),
            (
                "typedef enum { MODE_OFF = 0, MODE_ON = 1 } mode_t;",
                "pub type mode_t = i32;\npub const MODE_OFF: i32 = 0;\npub const MODE_ON: i32 = 1;",
            ),
        ],
        UnitKind::Function => &[
            (
                "int add(int a, int b)\n{\n  return a + b;\n}",
                "{\n    return (a + b);\n}",
            ),
            (
                "int sum(int *a, int n)\n{\n  int s = 0;\n  int i;\n  for (i = 0; i < n; i++) {\n    s = s + a[i];\n  }\n  return s;\n}",
                "{\n    let mut s: i32 = 0;\n    let mut i: i32 = 0;\n    c_for!(i = 0; (i < n); post_inc(&mut i) => {\n        s = (s + a.idx(i));\n    });\n    return s;\n}",
            ),
            (
                "unsigned short low(unsigned int v)\n{\n  return (unsigned short)v;\n}",
                "{\n    return (v).cast::<u16>();\n}",
            ),
        ],
    };
    pairs
        .iter()
        .map(|(c, r)| (c.to_string(), r.to_string()))
        .collect()
}
