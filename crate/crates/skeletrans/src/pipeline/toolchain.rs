//! Driving the Rust toolchain with machine-readable diagnostics.
//!
//! Generated projects have no external dependencies (the runtime is
//! vendored source), so `rustc` is invoked directly: `--emit=metadata` for
//! fast full type checking of libraries, plain codegen for probe binaries.
//! Overflow checks are disabled so integer arithmetic wraps like C.

use super::PipelineError;
use crate::repair::{parse_diagnostics, Diagnostics};
use std::path::{Path, PathBuf};
use std::process::Command;

#[derive(Debug, Clone)]
pub struct Toolchain {
    rustc: PathBuf,
    pub version: String,
}

impl Toolchain {
    /// Locate `rustc` ($RUSTC or PATH) and record its version.
    pub fn detect() -> Result<Toolchain, PipelineError> {
        let rustc = std::env::var_os("RUSTC")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("rustc"));
        let out = Command::new(&rustc)
            .arg("--version")
            .output()
            .map_err(|e| PipelineError::ToolchainMissing(format!("{}: {e}", rustc.display())))?;
        if !out.status.success() {
            return Err(PipelineError::ToolchainMissing(format!(
                "{} --version failed",
                rustc.display()
            )));
        }
        Ok(Toolchain {
            rustc,
            version: String::from_utf8_lossy(&out.stdout).trim().to_string(),
        })
    }

    /// Type-check the project at `dir` (expects `src/lib.rs`). Returns the
    /// parsed diagnostics; zero errors means the project compiles.
    pub fn check_project(&self, dir: &Path) -> Result<Diagnostics, PipelineError> {
        let lib = dir.join("src/lib.rs");
        if !lib.exists() {
            return Err(PipelineError::NonDiagnosticFailure(format!(
                "no src/lib.rs under {}",
                dir.display()
            )));
        }
        let out_dir = dir.join("target-check");
        std::fs::create_dir_all(&out_dir).map_err(PipelineError::Io)?;
        let out = Command::new(&self.rustc)
            .current_dir(dir)
            .args([
                "--edition=2021",
                "--crate-type=lib",
                "--crate-name=translated",
                "--emit=metadata",
                "--error-format=json",
                "-C",
                "overflow-checks=off",
                "--out-dir",
            ])
            .arg(&out_dir)
            .arg("src/lib.rs")
            .output()
            .map_err(|e| PipelineError::ToolchainMissing(e.to_string()))?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        parse_diagnostics(&stderr).map_err(|_| {
            PipelineError::NonDiagnosticFailure(format!(
                "toolchain produced non-JSON output: {}",
                stderr.chars().take(400).collect::<String>()
            ))
        })
    }

    /// Build a standalone binary from `main_rs` (module tree resolved
    /// relative to it). Returns diagnostics; the binary lands at `out`.
    pub fn build_binary(&self, main_rs: &Path, out: &Path) -> Result<Diagnostics, PipelineError> {
        let run = Command::new(&self.rustc)
            .args([
                "--edition=2021",
                "--error-format=json",
                "-C",
                "overflow-checks=off",
                "-o",
            ])
            .arg(out)
            .arg(main_rs)
            .output()
            .map_err(|e| PipelineError::ToolchainMissing(e.to_string()))?;
        let stderr = String::from_utf8_lossy(&run.stderr);
        parse_diagnostics(&stderr).map_err(|_| {
            PipelineError::NonDiagnosticFailure(format!(
                "toolchain produced non-JSON output: {}",
                stderr.chars().take(400).collect::<String>()
            ))
        })
    }

    /// Build a test harness binary (`rustc --test`) from a library root.
    pub fn build_test_binary(
        &self,
        lib_rs: &Path,
        out: &Path,
    ) -> Result<Diagnostics, PipelineError> {
        let run = Command::new(&self.rustc)
            .args([
                "--edition=2021",
                "--test",
                "--error-format=json",
                "-C",
                "overflow-checks=off",
                "-o",
            ])
            .arg(out)
            .arg(lib_rs)
            .output()
            .map_err(|e| PipelineError::ToolchainMissing(e.to_string()))?;
        let stderr = String::from_utf8_lossy(&run.stderr);
        parse_diagnostics(&stderr).map_err(|_| {
            PipelineError::NonDiagnosticFailure(format!(
                "toolchain produced non-JSON output: {}",
                stderr.chars().take(400).collect::<String>()
            ))
        })
    }
}

/// Run a built binary, capturing output.
pub fn run_binary(bin: &Path, args: &[&str]) -> Result<(i32, String, String), PipelineError> {
    let out = Command::new(bin)
        .args(args)
        .output()
        .map_err(PipelineError::Io)?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    ))
}
