use super::*;
use std::path::{Path, PathBuf};

pub(crate) fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures/c")
        .join(name)
}

fn parse_fixture(name: &str) -> ProjectMetadata {
    parse_project(&fixture_dir(name), &AnalyzerOptions::default()).unwrap()
}

fn parse_tree(files: &[(&str, &str)]) -> Result<ProjectMetadata, AnalyzerError> {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in files {
        let path = dir.path().join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).unwrap();
        }
        std::fs::write(path, text).unwrap();
    }
    parse_project(dir.path(), &AnalyzerOptions::default())
}

#[test]
fn md5_fixture_counts_match_dataset_row() {
    let md = parse_fixture("md5");
    assert_eq!(md.files.len(), 2);
    assert_eq!(md.signatures.len(), 8);
    assert_eq!(md.macros.len(), 20);
    assert_eq!(md.type_decls.len(), 1);
    assert_eq!(md.type_decls[0].name, "MD5_CTX");
}

#[test]
fn md5_units_are_one_per_entity() {
    let md = parse_fixture("md5");
    let units = slice_units(&md);
    assert_eq!(units.len(), 29); // 8 functions + 20 macros + 1 definition
    // Definitions and macros come before any function.
    let first_fn = units
        .iter()
        .position(|u| u.kind == UnitKind::Function)
        .unwrap();
    assert!(units[..first_fn]
        .iter()
        .all(|u| u.kind != UnitKind::Function));
    // MD5Update calls MD5Transform, so it depends on it and is ordered after.
    let update = units.iter().find(|u| u.name == "MD5Update").unwrap();
    assert!(update.dependencies.iter().any(|d| d == "MD5Transform"));
    let pos = |n: &str| units.iter().position(|u| u.name == n).unwrap();
    assert!(pos("MD5Transform") < pos("MD5Update"));
    assert!(pos("MD5Update") < pos("MD5Final"));
}

#[test]
fn avl_fixture_counts_match_dataset_row() {
    let md = parse_fixture("avl");
    assert_eq!(md.files.len(), 9);
    assert_eq!(md.signatures.len(), 29);
    assert_eq!(md.macros.len(), 29);
    assert_eq!(md.type_decls.len(), 9);
    assert_eq!(slice_units(&md).len(), 29 + 29 + 9);
}

#[test]
fn empty_directory_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    match parse_project(dir.path(), &AnalyzerOptions::default()) {
        Err(AnalyzerError::EmptyProject(_)) => {}
        other => panic!("expected EmptyProject, got {other:?}"),
    }
}

#[test]
fn hand_parsed_single_function() {
    let md = parse_tree(&[("add.c", "int add(int a,int b){return a+b;}")]).unwrap();
    assert_eq!(md.signatures.len(), 1);
    let sig = &md.signatures[0];
    assert_eq!(sig.name, "add");
    assert_eq!(sig.params.len(), 2);
    assert_eq!(sig.params[0].0, "a");
    assert_eq!(sig.params[0].1, CType::int());
    assert_eq!(sig.params[1].1, CType::int());
    assert_eq!(sig.return_type, CType::int());
    assert!(!sig.is_variadic);
    assert!(md.call_graph.is_empty());
    assert_eq!(md.decl_table.get("add"), Some(&PathBuf::from("add.c")));
}

#[test]
fn call_graph_edges_and_externals() {
    let md = parse_tree(&[(
        "t.c",
        "void g(void){}\nvoid f(void){ g(); printf(\"x\"); }\n",
    )])
    .unwrap();
    assert_eq!(
        md.call_graph,
        vec![CallEdge {
            caller: "f".into(),
            callee: "g".into()
        }]
    );
    let ext = md.external_refs.get("f").unwrap();
    assert!(ext.contains("printf"));
}

#[test]
fn recursion_makes_a_self_edge_and_scheduler_tolerates_cycles() {
    let md = parse_tree(&[("t.c", "int f(int n){ if (n) { return f(n-1); } return 0; }")])
        .unwrap();
    assert_eq!(
        md.call_graph,
        vec![CallEdge {
            caller: "f".into(),
            callee: "f".into()
        }]
    );
    let units = slice_units(&md);
    assert_eq!(units.len(), 1);
}

#[test]
fn mutual_recursion_breaks_ties_by_name() {
    let md = parse_tree(&[(
        "t.c",
        "int g(int n);\nint f(int n){ return g(n); }\nint g(int n){ return f(n); }\n",
    )])
    .unwrap();
    let units = slice_units(&md);
    let names: Vec<&str> = units.iter().map(|u| u.name.as_str()).collect();
    assert_eq!(names, ["f", "g"]);
}

#[test]
fn duplicate_definition_names_both_files() {
    let err = parse_tree(&[
        ("a.c", "int dup(void){return 1;}"),
        ("b.c", "int dup(void){return 2;}"),
    ])
    .unwrap_err();
    match err {
        AnalyzerError::DuplicateDefinition { name, first, second } => {
            assert_eq!(name, "dup");
            assert_eq!(first, PathBuf::from("a.c"));
            assert_eq!(second, PathBuf::from("b.c"));
        }
        other => panic!("expected DuplicateDefinition, got {other:?}"),
    }
}

#[test]
fn reparsing_is_byte_identical() {
    for fixture in ["md5", "arith", "calls", "avl"] {
        let a = parse_fixture(fixture).to_json();
        let b = parse_fixture(fixture).to_json();
        assert_eq!(a, b, "non-deterministic metadata for {fixture}");
    }
}

#[test]
fn metadata_json_round_trips() {
    let md = parse_fixture("md5");
    let json = md.to_json();
    let back = ProjectMetadata::from_json(&json).unwrap();
    assert_eq!(back.to_json(), json);
    assert_eq!(back.schema_version, METADATA_SCHEMA_VERSION);
}

#[test]
fn unit_count_invariant_holds_on_all_fixtures() {
    for fixture in ["md5", "arith", "calls", "avl", "faulty"] {
        let md = parse_fixture(fixture);
        let units = slice_units(&md);
        assert_eq!(
            units.len(),
            md.signatures.len() + md.macros.len() + md.type_decls.len(),
            "unit count mismatch for {fixture}"
        );
    }
}

#[test]
fn unit_order_is_topological_on_call_graph_condensation() {
    for fixture in ["md5", "arith", "calls", "avl"] {
        let md = parse_fixture(fixture);
        let units = slice_units(&md);
        let pos: std::collections::BTreeMap<&str, usize> = units
            .iter()
            .enumerate()
            .filter(|(_, u)| u.kind == UnitKind::Function)
            .map(|(i, u)| (u.name.as_str(), i))
            .collect();
        // For every edge caller→callee not in the same SCC, the callee must
        // be scheduled first. Same-SCC membership is detected via reachability.
        for e in &md.call_graph {
            if reaches(&md, &e.callee, &e.caller) && reaches(&md, &e.caller, &e.callee) {
                continue; // same cycle
            }
            assert!(
                pos[e.callee.as_str()] < pos[e.caller.as_str()],
                "{fixture}: {} should precede {}",
                e.callee,
                e.caller
            );
        }
    }
}

/// Independent reachability oracle over the call graph (caller → callee
/// direction), used to identify cycles without trusting the scheduler.
fn reaches(md: &ProjectMetadata, from: &str, to: &str) -> bool {
    let mut stack = vec![from.to_string()];
    let mut seen = std::collections::BTreeSet::new();
    while let Some(cur) = stack.pop() {
        if cur == to {
            return true;
        }
        if !seen.insert(cur.clone()) {
            continue;
        }
        for e in &md.call_graph {
            if e.caller == cur {
                stack.push(e.callee.clone());
            }
        }
    }
    false
}

#[test]
fn dependencies_resolve_to_decl_table_or_externals() {
    for fixture in ["md5", "arith", "calls", "avl"] {
        let md = parse_fixture(fixture);
        for u in slice_units(&md) {
            for d in &u.dependencies {
                assert!(
                    md.decl_table.contains_key(d),
                    "{fixture}: dependency {d} not in decl_table"
                );
            }
        }
        for (_, exts) in &md.external_refs {
            for e in exts {
                assert!(
                    !md.decl_table.contains_key(e),
                    "{fixture}: external {e} is project-defined"
                );
            }
        }
    }
}

#[test]
fn ifdef_branches_follow_define_set() {
    let src = "#define HAVE_X\n#ifdef HAVE_X\nint with_x(void){return 1;}\n#else\nint without_x(void){return 0;}\n#endif\n#ifndef HAVE_Y\nint no_y(void){return 2;}\n#endif\n";
    let md = parse_tree(&[("t.c", src)]).unwrap();
    let names: Vec<&str> = md.signatures.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["with_x", "no_y"]);
}

#[test]
fn unevaluable_if_takes_primary_branch_with_warning() {
    let src = "#if CHAR_BIT == 8\nint a(void){return 1;}\n#else\nint b(void){return 0;}\n#endif\n";
    let md = parse_tree(&[("t.c", src)]).unwrap();
    let names: Vec<&str> = md.signatures.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["a"]);
    assert!(md.warnings.iter().any(|w| w.contains("cannot evaluate")));
}

#[test]
fn spans_lie_within_files() {
    for fixture in ["md5", "arith", "calls", "avl"] {
        let root = fixture_dir(fixture);
        let md = parse_fixture(fixture);
        for sig in &md.signatures {
            let len = std::fs::read(root.join(&sig.source_file)).unwrap().len();
            assert!(sig.source_span.0 < sig.source_span.1);
            assert!(sig.source_span.1 <= len, "{fixture}:{}", sig.name);
        }
    }
}

#[test]
fn variadic_and_function_pointer_signatures_parse() {
    let md = parse_fixture("calls");
    let log_line = md.function("log_line").unwrap();
    assert!(log_line.is_variadic);
    assert_eq!(log_line.params.len(), 2);
    let emit = md.function("emit").unwrap();
    assert!(emit.params[2].1.is_va_list);
    let reducer = md
        .type_decls
        .iter()
        .find(|t| t.name == "Reducer")
        .unwrap();
    match &reducer.kind {
        TypeDeclKind::Typedef { target } => {
            let fp = target.func_ptr.as_ref().unwrap();
            assert_eq!(fp.params.len(), 2);
        }
        other => panic!("Reducer should be a typedef, got {other:?}"),
    }
}
