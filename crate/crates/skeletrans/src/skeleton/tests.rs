use super::*;
use crate::analyzer::{parse_project, AnalyzerOptions};

fn fixture(name: &str) -> ProjectMetadata {
    parse_project(
        &crate::analyzer::tests::fixture_dir(name),
        &AnalyzerOptions::default(),
    )
    .unwrap()
}

fn toolchain() -> Toolchain {
    Toolchain::detect().unwrap()
}

#[test]
fn md5_skeleton_compiles_clean() {
    let md = fixture("md5");
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    project.verify(&toolchain(), dir.path()).unwrap();
    // 2 logical modules (md5.h+md5.c merge) plus hub and runtime.
    assert_eq!(project.modules().len(), 1);
    assert!(!project.reexport_hub.is_empty());
}

#[test]
fn calls_skeleton_compiles_clean() {
    let md = fixture("calls");
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    project.verify(&toolchain(), dir.path()).unwrap();
}

#[test]
fn avl_skeleton_has_29_function_stubs_and_compiles() {
    let md = fixture("avl");
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    assert_eq!(project.stub_index().len(), 29);
    let dir = tempfile::tempdir().unwrap();
    project.verify(&toolchain(), dir.path()).unwrap();
}

#[test]
fn empty_metadata_skeleton_compiles() {
    let md = ProjectMetadata::new(Vec::new());
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    project.verify(&toolchain(), dir.path()).unwrap();
}

#[test]
fn stub_spans_point_at_placeholder_bodies() {
    let md = fixture("arith");
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    let modules = project.modules();
    for (id, slot) in project.stub_index() {
        let text = &modules[&slot.module];
        assert_eq!(
            &text[slot.span.0..slot.span.1],
            STUB_BODY,
            "bad span for {id}"
        );
        assert_eq!(slot.state, BodyState::Placeholder);
    }
}

#[test]
fn replace_then_revert_is_identity_on_project_bytes() {
    let md = fixture("arith");
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    let before = project.modules();
    let slot = "arith::add";
    let filled = project.replace_stub(slot, "{ return a + b; }").unwrap();
    assert_ne!(filled.modules(), before);
    assert_eq!(filled.stub_index()[slot].state, BodyState::Filled);
    let reverted = filled.revert_stub(slot).unwrap();
    assert_eq!(reverted.modules(), before, "revert must restore bytes");
    assert_eq!(reverted.stub_index()[slot].state, BodyState::Reverted);
    // Value semantics: the original project was never touched.
    assert_eq!(project.modules(), before);
    assert_eq!(project.stub_index()[slot].state, BodyState::Placeholder);
}

#[test]
fn replace_accepts_broken_bodies_without_compiling() {
    let md = fixture("arith");
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    let broken = project
        .replace_stub("arith::add", "{ this is not rust }")
        .unwrap();
    assert!(broken.modules()["arith"].contains("this is not rust"));
}

#[test]
fn unknown_slot_is_rejected() {
    let md = fixture("arith");
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    match project.replace_stub("arith::nope", "{}") {
        Err(SkeletonError::UnknownSlot(s)) => assert_eq!(s, "arith::nope"),
        other => panic!("expected UnknownSlot, got {other:?}"),
    }
}

#[test]
fn filled_arith_function_compiles_in_context() {
    let md = fixture("arith");
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    let filled = project
        .replace_stub("arith::add", "{ return a + b; }")
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    filled.verify(&toolchain(), dir.path()).unwrap();
}

#[test]
fn hub_has_one_line_per_decl_table_entry() {
    for name in ["md5", "arith", "calls", "avl"] {
        let md = fixture(name);
        let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
        let lines = project
            .reexport_hub
            .lines()
            .filter(|l| l.starts_with("pub use "))
            .count();
        assert_eq!(lines, md.decl_table.len(), "hub mismatch for {name}");
    }
}

#[test]
fn every_hub_identifier_is_importable() {
    // Compile a probe module that references each re-export through the hub.
    let md = fixture("calls");
    let mut project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    let mut probe = String::from("pub fn __hub_probe() {\n");
    for id in md.decl_table.keys() {
        probe.push_str(&format!(
            "    {{ use crate::hub::{}; let _ = stringify!({}); }}\n",
            sanitize_ident(id),
            sanitize_ident(id)
        ));
    }
    probe.push_str("}\n");
    project.lib_rs.push_str("pub mod hub_probe;\n");
    let dir = tempfile::tempdir().unwrap();
    project.write_to(dir.path()).unwrap();
    std::fs::write(dir.path().join("src/hub_probe.rs"), probe).unwrap();
    let diags = toolchain().check_project(dir.path()).unwrap();
    assert_eq!(diags.error_count(), 0, "{}", diags.rendered());
}

#[test]
fn unknown_include_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("a.c"),
        "#include \"missing.h\"\nint f(void){return 0;}\n",
    )
    .unwrap();
    let md = parse_project(dir.path(), &AnalyzerOptions::default()).unwrap();
    match build_skeleton(&md, &BTreeMap::new()) {
        Err(SkeletonError::UnknownInclude { include, .. }) => {
            assert_eq!(include, "missing.h");
        }
        other => panic!("expected UnknownInclude, got {other:?}"),
    }
}

#[test]
fn system_includes_map_to_runtime_prelude_only() {
    let md = fixture("calls");
    let (imports, _) = map_includes_and_reexports(&md).unwrap();
    for (module, lines) in imports {
        assert_eq!(lines[0], "use crate::runtime::prelude::*;", "{module}");
        assert!(lines.iter().all(|l| !l.contains("stdio")), "{module}");
    }
}

#[test]
fn projects_with_no_includes_still_reexport_everything() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("solo.c"), "int one(void){return 1;}\n").unwrap();
    let md = parse_project(dir.path(), &AnalyzerOptions::default()).unwrap();
    let project = build_skeleton(&md, &BTreeMap::new()).unwrap();
    assert!(project.reexport_hub.contains("pub use crate::solo::one;"));
    let scratch = tempfile::tempdir().unwrap();
    project.verify(&toolchain(), scratch.path()).unwrap();
}
