//! The three-step repair chain: bracket repair, rule-based repairs, then
//! backend refinement — recompiling after every acceptance and accepting
//! only candidates that strictly reduce the error count.

use super::rules::{apply_rule_repairs_with, RuleSet};
use super::{sha256_hex, Diagnostics, RepairError, RepairStage, RepairStep, RepairTrace};
use crate::translate::{extract_code_block, CompletionBackend, Prompt};

#[derive(Debug, Clone, Copy)]
pub struct RepairLimits {
    pub bracket_rounds: usize,
    pub refine_rounds: usize,
    pub candidates_per_round: usize,
}

impl Default for RepairLimits {
    fn default() -> Self {
        RepairLimits {
            bracket_rounds: 5,
            refine_rounds: 3,
            candidates_per_round: 1,
        }
    }
}

#[derive(Debug)]
pub enum RepairOutcome {
    /// Zero errors reached; carries the repaired code.
    Fixed(String),
    /// The chain exhausted its stages; carries the best code seen and the
    /// diagnostics still attached to it.
    Failed {
        code: String,
        diagnostics: Diagnostics,
    },
}

/// One candidate compile: insert `code` into the workspace and type-check.
pub type CompileFn<'a> = dyn FnMut(&str) -> Result<Diagnostics, RepairError> + 'a;

fn bracket_prompt(code: &str, diags: &Diagnostics) -> Prompt {
    Prompt {
        system: "Fix the compilation bugs in the following Rust code with the provided compilation error messages, possibly because of mismatched parentheses.\nOnly fix lines that have unmatched parentheses bugs, don't modify any other code.".to_string(),
        sections: vec![
            (
                "Demonstrations".to_string(),
                "C Code:\nfn f(x: i32) -> i32 { return (x + 1; }\nRust Code:\nfn f(x: i32) -> i32 { return (x + 1); }\n".to_string(),
            ),
            ("Rust Source Code".to_string(), code.to_string()),
            ("Compilation Error Messages".to_string(), diags.rendered()),
        ],
        token_budget: crate::translate::DEFAULT_MAX_TOKENS,
    }
}

fn refine_prompt(code: &str, diags: &Diagnostics) -> Prompt {
    Prompt {
        system: "Fix the compilation bugs in the following Rust code according to the compilation information:".to_string(),
        sections: vec![
            (
                "Instruction".to_string(),
                "Adjust types with cast(), fix borrows, and keep the surrounding code unchanged. Return the complete fixed code in one fenced block.".to_string(),
            ),
            (
                "Demonstrations".to_string(),
                "Rust Source Code:\nlet n: u32 = -1;\nCompilation Information:\nerror[E0600]: cannot apply unary operator `-` to type `u32`\nFixed:\nlet n: u32 = (-1i32).cast();\n".to_string(),
            ),
            ("Rust Source Code".to_string(), code.to_string()),
            ("Compilation Information".to_string(), diags.rendered()),
        ],
        token_budget: crate::translate::DEFAULT_MAX_TOKENS,
    }
}

/// One backend-driven stage (bracket or refine): per round, ask for
/// candidates, accept a candidate iff it strictly reduces the error count,
/// stop at zero errors, at the round limit, or when a deterministic backend
/// repeats a rejected candidate.
fn backend_stage(
    stage: RepairStage,
    code: &mut String,
    diags: &mut Diagnostics,
    backend: &dyn CompletionBackend,
    compile: &mut CompileFn<'_>,
    rounds: usize,
    candidates_per_round: usize,
    trace: &mut RepairTrace,
) -> Result<(), RepairError> {
    let make_prompt = match stage {
        RepairStage::Bracket => bracket_prompt,
        _ => refine_prompt,
    };
    let mut last_rejected: Option<String> = None;
    for round in 1..=rounds {
        if diags.error_count() == 0 {
            break;
        }
        let before = diags.error_count();
        // Gather this round's candidates; best error count wins, ties to
        // the earliest candidate.
        let mut best: Option<(String, Diagnostics, usize)> = None;
        let mut first_candidate: Option<String> = None;
        for _ in 0..candidates_per_round.max(1) {
            let completion = match backend.complete(&make_prompt(code, diags)) {
                Ok(c) => c,
                Err(crate::translate::TranslateError::BackendUnavailable(m)) => {
                    return Err(RepairError::BackendUnavailable(m));
                }
                Err(_) => continue,
            };
            let candidate = match extract_code_block(&completion) {
                Ok(c) => c,
                Err(_) => continue,
            };
            if first_candidate.is_none() {
                first_candidate = Some(candidate.clone());
            }
            let cand_diags = compile(&candidate)?;
            let count = cand_diags.error_count();
            let better = match &best {
                None => true,
                Some((_, _, b)) => count < *b,
            };
            if better {
                best = Some((candidate, cand_diags, count));
            }
        }
        let Some((candidate, cand_diags, after)) = best else {
            break; // backend produced nothing usable this round
        };
        let accepted = after < before;
        trace.record(RepairStep {
            stage,
            round,
            candidate_sha256: sha256_hex(&candidate),
            errors_before: before,
            errors_after: after,
            accepted,
            rules_applied: Vec::new(),
        });
        if accepted {
            *code = candidate;
            *diags = cand_diags;
            last_rejected = None;
        } else {
            if backend.deterministic() && last_rejected.as_deref() == Some(candidate.as_str()) {
                break; // identical rejected candidate: no further improvement possible
            }
            last_rejected = Some(candidate);
        }
    }
    Ok(())
}

/// Bracket repair (stage 1). Precondition: `diags.error_count() > 0`.
pub fn repair_brackets(
    code: &str,
    diags: &Diagnostics,
    backend: &dyn CompletionBackend,
    compile: &mut CompileFn<'_>,
    max_rounds: usize,
) -> Result<(String, Diagnostics, RepairTrace), RepairError> {
    let mut code = code.to_string();
    let mut diags = diags.clone();
    let mut trace = RepairTrace::default();
    backend_stage(
        RepairStage::Bracket,
        &mut code,
        &mut diags,
        backend,
        compile,
        max_rounds,
        1,
        &mut trace,
    )?;
    Ok((code, diags, trace))
}

/// Backend refinement (stage 3). Same acceptance loop as bracket repair
/// with the refinement prompt.
pub fn llm_refine(
    code: &str,
    diags: &Diagnostics,
    backend: &dyn CompletionBackend,
    compile: &mut CompileFn<'_>,
    max_rounds: usize,
) -> Result<(String, Diagnostics, RepairTrace), RepairError> {
    let mut code = code.to_string();
    let mut diags = diags.clone();
    let mut trace = RepairTrace::default();
    backend_stage(
        RepairStage::Refine,
        &mut code,
        &mut diags,
        backend,
        compile,
        max_rounds,
        1,
        &mut trace,
    )?;
    Ok((code, diags, trace))
}

/// Execute bracket → rule → refine in order, recompiling after each
/// acceptance. Success iff the final error count is zero; accepted states
/// have strictly decreasing error counts, and the result never carries more
/// errors than the input.
pub fn run_chain(
    code: &str,
    initial_diags: &Diagnostics,
    backend: Option<&dyn CompletionBackend>,
    rules: &RuleSet,
    limits: &RepairLimits,
    compile: &mut CompileFn<'_>,
) -> Result<(RepairOutcome, RepairTrace), RepairError> {
    let mut code = code.to_string();
    let mut diags = initial_diags.clone();
    let mut trace = RepairTrace::default();

    // Stage 1: bracket repair.
    if diags.error_count() > 0 {
        if let Some(backend) = backend {
            match backend_stage(
                RepairStage::Bracket,
                &mut code,
                &mut diags,
                backend,
                compile,
                limits.bracket_rounds,
                limits.candidates_per_round,
                &mut trace,
            ) {
                Ok(()) => {}
                Err(RepairError::BackendUnavailable(_)) => {} // chain continues
                Err(e) => return Err(e),
            }
        }
    }

    // Stage 2: rule-based repairs.
    if diags.error_count() > 0 {
        let before = diags.error_count();
        let (candidate, applied) = apply_rule_repairs_with(&code, &diags, rules);
        if !applied.is_empty() {
            let cand_diags = compile(&candidate)?;
            let after = cand_diags.error_count();
            let accepted = after < before;
            trace.record(RepairStep {
                stage: RepairStage::Rule,
                round: 1,
                candidate_sha256: sha256_hex(&candidate),
                errors_before: before,
                errors_after: after,
                accepted,
                rules_applied: applied,
            });
            if accepted {
                code = candidate;
                diags = cand_diags;
            }
        }
    }

    // Stage 3: backend refinement.
    if diags.error_count() > 0 {
        if let Some(backend) = backend {
            match backend_stage(
                RepairStage::Refine,
                &mut code,
                &mut diags,
                backend,
                compile,
                limits.refine_rounds,
                limits.candidates_per_round,
                &mut trace,
            ) {
                Ok(()) => {}
                Err(RepairError::BackendUnavailable(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }

    let outcome = if diags.error_count() == 0 {
        RepairOutcome::Fixed(code)
    } else {
        RepairOutcome::Failed {
            code,
            diagnostics: diags,
        }
    };
    Ok((outcome, trace))
}
