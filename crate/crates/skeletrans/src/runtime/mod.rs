//! The vendored compatibility runtime: emission and conformance.
//!
//! The runtime sources live in this crate as templates and are written
//! verbatim into every generated project under `src/runtime/`. The
//! conformance harness compiles a probe program against a freshly emitted
//! runtime, executes it, and compares every probe line against the frozen
//! expectations (which a C oracle program reproduces byte-for-byte; see
//! `conformance/oracle.c`).

use crate::pipeline::{run_binary, PipelineError, Toolchain};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RuntimeError {
    #[error("write denied at {0}")]
    WriteDenied(PathBuf),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("toolchain missing: {0}")]
    ToolchainMissing(String),
    #[error("probe program failed to compile (a runtime regression):\n{0}")]
    ProbeCompileFailure(String),
    #[error("probe binary exited with status {0}:\n{1}")]
    ProbeRunFailure(i32, String),
}

/// The runtime source files, in emission order.
pub const RUNTIME_FILES: [(&str, &str); 7] = [
    ("mod.rs", include_str!("../../runtime_templates/mod.rs")),
    ("ptr.rs", include_str!("../../runtime_templates/ptr.rs")),
    ("cast.rs", include_str!("../../runtime_templates/cast.rs")),
    ("ctrl.rs", include_str!("../../runtime_templates/ctrl.rs")),
    ("global.rs", include_str!("../../runtime_templates/global.rs")),
    ("va.rs", include_str!("../../runtime_templates/va.rs")),
    ("file.rs", include_str!("../../runtime_templates/file.rs")),
];

pub const LIBC_FILE: (&str, &str) = ("libc.rs", include_str!("../../runtime_templates/libc.rs"));

const PROBE_MAIN: &str = include_str!("../../conformance/probe_main.rs");
const ORACLE_C: &str = include_str!("../../conformance/oracle.c");

/// The frozen ABI between the runtime, the skeleton builder, translation
/// prompts and repair rules: every listed name is exported from the
/// runtime prelude.
#[derive(Debug, Clone, Serialize)]
pub struct RuntimeSurface {
    pub types: Vec<&'static str>,
    pub macros: Vec<&'static str>,
    pub conversions: Vec<&'static str>,
    pub helpers: Vec<&'static str>,
}

pub fn runtime_surface() -> RuntimeSurface {
    RuntimeSurface {
        types: vec![
            "Ptr", "Array", "FuncPtr", "FilePtr", "VaList", "Global", "Void",
        ],
        macros: vec![
            "arr",
            "cstr",
            "c_ref",
            "c_for",
            "c_do",
            "c_switch",
            "c_sizeof",
            "c_sizeofval",
            "global",
            "va_format",
            "c_malloc",
            "c_free",
            "c_memcpy",
            "c_memmove",
            "c_memset",
            "c_strlen",
            "c_strcmp",
            "c_fopen",
            "c_fclose",
            "c_fread",
            "c_fwrite",
            "c_snprintf",
            "c_printf",
        ],
        conversions: vec!["CastIntoTyped", "CastTo"],
        helpers: vec!["post_inc", "pre_inc", "post_dec", "pre_dec"],
    }
}

/// Write the runtime sources into `outdir` (creating it). Byte-identical
/// across invocations.
pub fn emit_runtime(outdir: &Path) -> Result<Vec<PathBuf>, RuntimeError> {
    std::fs::create_dir_all(outdir).map_err(|e| classify_io(e, outdir))?;
    let mut written = Vec::new();
    for (name, text) in RUNTIME_FILES.iter().chain(std::iter::once(&LIBC_FILE)) {
        let path = outdir.join(name);
        std::fs::write(&path, text).map_err(|e| classify_io(e, &path))?;
        written.push(path);
    }
    Ok(written)
}

fn classify_io(e: std::io::Error, path: &Path) -> RuntimeError {
    if e.kind() == std::io::ErrorKind::PermissionDenied {
        RuntimeError::WriteDenied(path.to_path_buf())
    } else {
        RuntimeError::Io(e)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeResult {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub probes: Vec<ProbeResult>,
    pub toolchain_version: String,
    pub total: usize,
    pub passed: usize,
}

impl ConformanceReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.total && self.total > 0
    }
}

/// Frozen probe expectations. Values are derived from C semantics and
/// reproduced by the C oracle program; see `expected_oracle_source()`.
pub const EXPECTED_PROBES: &[(&str, &str)] = &[
    ("ptr_arith", "12,2,1"),
    ("array_decay", "6"),
    ("cstr", "0,12"),
    ("cast_wrap", "4464"),
    ("ptr_int", "8,1"),
    ("cast_chain", "61072"),
    ("c_for", "0,1,7,25"),
    ("c_do", "1"),
    ("c_switch", "3,2,10,-1"),
    ("global", "4000"),
    ("global_once", "1,1"),
    ("va", "7-x"),
    ("snprintf", "value=1,7"),
    ("sizeof", "4,12"),
    ("incdec", "5,6,7,7,5"),
    ("c_ref", "7"),
    ("memmove", "0,1,2,0,1,2,3,4,5,6,7,8,9,10,11,12"),
    ("strcmp", "0,-1,1"),
    ("malloc", "77"),
    ("memcpy", "wxyz,1"),
];

/// The C oracle program that must print exactly the expected probe lines.
pub fn expected_oracle_source() -> &'static str {
    ORACLE_C
}

/// Source of a program that must NOT compile: integer-to-pointer casts are
/// rejected at compile time.
const INT2PTR_REJECT: &str = "mod runtime;\nuse runtime::prelude::*;\n\nfn main() {\n    let _p: Ptr<i32> = (5usize).cast();\n}\n";

/// Compile and execute the behavioral probes in `workspace`, returning the
/// per-probe report. The probe module carries `#[forbid(unsafe_code)]`, so
/// a passing run also witnesses that callers never need unsafe.
pub fn run_conformance(
    workspace: &Path,
    toolchain: &Toolchain,
) -> Result<ConformanceReport, RuntimeError> {
    let src = workspace.join("src");
    emit_runtime(&src.join("runtime"))?;
    std::fs::write(src.join("main.rs"), PROBE_MAIN)?;

    let bin = workspace.join("probe_bin");
    let diags = toolchain
        .build_binary(&src.join("main.rs"), &bin)
        .map_err(pipeline_to_runtime)?;
    if diags.error_count() > 0 {
        return Err(RuntimeError::ProbeCompileFailure(diags.rendered()));
    }
    let (status, stdout, stderr) = run_binary(&bin, &[]).map_err(pipeline_to_runtime)?;
    if status != 0 {
        return Err(RuntimeError::ProbeRunFailure(status, stderr));
    }

    let observed: std::collections::BTreeMap<&str, &str> = stdout
        .lines()
        .filter_map(|l| l.split_once('='))
        .collect();
    let mut probes = Vec::new();
    for (name, expected) in EXPECTED_PROBES {
        let got = observed.get(name).copied().unwrap_or("(missing)");
        probes.push(ProbeResult {
            name: name.to_string(),
            expected: expected.to_string(),
            observed: got.to_string(),
            pass: got == *expected,
        });
    }

    // Negative probe: integer-to-pointer conversion must not compile.
    let reject_dir = workspace.join("reject");
    let reject_src = reject_dir.join("src");
    emit_runtime(&reject_src.join("runtime"))?;
    std::fs::write(reject_src.join("main.rs"), INT2PTR_REJECT)?;
    let reject_diags = toolchain
        .build_binary(&reject_src.join("main.rs"), &reject_dir.join("reject_bin"))
        .map_err(pipeline_to_runtime)?;
    let rejected = reject_diags.error_count() > 0;
    probes.push(ProbeResult {
        name: "int2ptr_rejected".to_string(),
        expected: "yes".to_string(),
        observed: if rejected { "yes" } else { "no" }.to_string(),
        pass: rejected,
    });

    let passed = probes.iter().filter(|p| p.pass).count();
    Ok(ConformanceReport {
        total: probes.len(),
        passed,
        probes,
        toolchain_version: toolchain.version.clone(),
    })
}

fn pipeline_to_runtime(e: PipelineError) -> RuntimeError {
    match e {
        PipelineError::ToolchainMissing(m) => RuntimeError::ToolchainMissing(m),
        PipelineError::Io(e) => RuntimeError::Io(e),
        other => RuntimeError::ProbeCompileFailure(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emit_twice_is_byte_identical() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let w1 = emit_runtime(d1.path()).unwrap();
        let w2 = emit_runtime(d2.path()).unwrap();
        assert_eq!(w1.len(), w2.len());
        for (a, b) in w1.iter().zip(&w2) {
            assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
        }
    }

    #[test]
    fn permission_denied_maps_to_write_denied() {
        let err = classify_io(
            std::io::Error::new(std::io::ErrorKind::PermissionDenied, "nope"),
            Path::new("/x"),
        );
        assert!(matches!(err, RuntimeError::WriteDenied(_)));
        let err = classify_io(
            std::io::Error::new(std::io::ErrorKind::NotFound, "gone"),
            Path::new("/x"),
        );
        assert!(matches!(err, RuntimeError::Io(_)));
    }

    #[test]
    fn every_surface_name_is_exported_from_the_prelude() {
        let prelude = RUNTIME_FILES[0].1;
        let surface = runtime_surface();
        for name in surface
            .types
            .iter()
            .chain(&surface.macros)
            .chain(&surface.conversions)
            .chain(&surface.helpers)
        {
            assert!(
                prelude.contains(name),
                "runtime prelude does not export `{name}`"
            );
        }
    }

    #[test]
    fn runtime_templates_contain_no_unsafe() {
        for (name, text) in RUNTIME_FILES.iter().chain(std::iter::once(&LIBC_FILE)) {
            for marker in ["unsafe {", "unsafe fn", "unsafe impl", "unsafe trait"] {
                assert!(!text.contains(marker), "{name} contains `{marker}`");
            }
        }
    }
}
