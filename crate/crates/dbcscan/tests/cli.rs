//! End-to-end CLI tests: exit codes, record-file schema stability, catalog
//! extension, the evolve policy gate, and offline corpus management.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_dbcscan"))
}

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("spawn dbcscan")
}

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
        .display()
        .to_string()
}

fn write(path: &Path, content: &str) {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).unwrap();
    }
    std::fs::write(path, content).unwrap();
}

#[test]
fn scan_writes_record_file_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "scan",
            &fixture("golden/CheckoutService.java"),
            "--project",
            "demo",
            "--snapshot",
            "v1",
            "--out",
            "out",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let record_file = dir.path().join("out/demo-v1.json");
    let content = std::fs::read_to_string(&record_file).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&content).unwrap();
    assert_eq!(doc["projectId"], "demo");
    assert_eq!(doc["snapshotId"], "v1");
    assert_eq!(doc["tool"]["name"], "dbcscan");
    assert!(doc["tool"]["catalogHash"].as_str().unwrap().len() == 64);
    assert_eq!(doc["records"].as_array().unwrap().len(), 1);
    assert_eq!(doc["records"][0]["constructId"], "CREIllegalArgumentException");
    // round-trip stability through the CLI-written file
    let reparsed: dbcscan::report::SnapshotReport =
        serde_json::from_str(&content).unwrap();
    let mut emitted = serde_json::to_string_pretty(&reparsed).unwrap();
    emitted.push('\n');
    assert_eq!(content, emitted);
}

#[test]
fn scan_empty_dir_writes_valid_empty_record_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(dir.path().join("empty")).unwrap();
    let out = run(
        &["scan", "empty", "--project", "none", "--out", "out"],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/none-v1.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 0);
}

#[test]
fn scan_missing_root_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["scan", "does-not-exist"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scan_with_extended_catalog_detects_new_construct() {
    let dir = tempfile::tempdir().unwrap();
    write(
        &dir.path().join("extra.tsv"),
        "CRE\tCREVendorPanic\tVendorPanicException\n",
    );
    write(
        &dir.path().join("src/App.java"),
        r#"
public class App {
    void f(int x) {
        if (x < 0) { throw new VendorPanicException(); }
    }
}
"#,
    );
    let out = run(
        &[
            "scan", "src", "--project", "p", "--out", "out", "--catalog", "extra.tsv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/p-v1.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc["records"][0]["constructId"], "CREVendorPanic");
}

#[test]
fn usage_tables_are_consistent_across_three_projects() {
    let dir = tempfile::tempdir().unwrap();
    for p in ["p1", "p2", "p3"] {
        let out = run(
            &["scan", &fixture(&format!("synthetic/{p}")), "--project", p, "--out", "out"],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let out = run(
        &[
            "usage",
            "out/p1-v1.json",
            "out/p2-v1.json",
            "out/p3-v1.json",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let combined = &doc["combined"];
    let by_category = combined["countsByCategory"].as_object().unwrap();
    let total: u64 = by_category.values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, combined["totalRecords"].as_u64().unwrap());
    assert_eq!(total, 116);
    // the java and kotlin splits partition the combined totals
    let java: u64 = doc["java"]["totalRecords"].as_u64().unwrap();
    let kotlin: u64 = doc["kotlin"]["totalRecords"].as_u64().unwrap();
    assert_eq!(java + kotlin, total);
    // every gini sits in [0, 1]
    for scope in ["combined", "java", "kotlin"] {
        for (_, v) in doc[scope]["giniByCategory"].as_object().unwrap() {
            let g = v.as_f64().unwrap();
            assert!((0.0..=1.0).contains(&g));
        }
    }
}

#[test]
fn usage_single_project_has_zero_gini() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["scan", &fixture("synthetic/p1"), "--project", "solo", "--out", "out"],
        dir.path(),
    );
    assert!(out.status.success());
    let out = run(&["usage", "out/solo-v1.json", "--format", "json"], dir.path());
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for (_, v) in doc["combined"]["giniByCategory"].as_object().unwrap() {
        assert_eq!(v.as_f64().unwrap(), 0.0);
    }
}

#[test]
fn usage_rejects_invalid_record_file() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("broken.json"), "{\"not\": \"a report\"}");
    let out = run(&["usage", "broken.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("broken.json"), "{stderr}");
}

#[test]
fn evolve_reports_patterns_and_honors_fail_on_critical() {
    let dir = tempfile::tempdir().unwrap();
    let v1 = fixture("golden/listing1/v1");
    let v2 = fixture("golden/listing1/v2");
    let out = run(
        &["evolve", &v1, &v2, "--project", "listing1", "--format", "json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["patternCounts"]["PreStrengthened"].as_u64(), Some(1));

    let gated = run(
        &["evolve", &v1, &v2, "--project", "listing1", "--fail-on-critical"],
        dir.path(),
    );
    assert_eq!(gated.status.code(), Some(3));
}

#[test]
fn evolve_identical_snapshots_all_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let v1 = fixture("golden/listing1/v1");
    let out = run(
        &["evolve", &v1, &v1, "--project", "same", "--format", "json", "--fail-on-critical"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["patternCounts"]["Unchanged"].as_u64(), Some(1));
    assert_eq!(doc["patternCounts"]["PreStrengthened"].as_u64(), Some(0));
}

#[test]
fn evolve_mismatched_projects_is_fatal_without_flag() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(dir.path().join("alpha")).unwrap();
    std::fs::create_dir_all(dir.path().join("beta")).unwrap();
    let out = run(&["evolve", "alpha", "beta"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}

#[test]
fn lsp_reports_violation_with_locations() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["lsp", &fixture("golden/EntryItems.java")], dir.path());
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("violation:"), "{stdout}");
    assert!(stdout.contains("TagEntry.setName"), "{stdout}");
    assert!(stdout.contains("EntryItem.setName"), "{stdout}");
}

#[test]
fn lsp_records_crosscheck_detects_stale_file() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixture("golden/EntryItems.java");
    let out = run(
        &["scan", &src, "--project", "entries", "--out", "out"],
        dir.path(),
    );
    assert!(out.status.success());
    // matching records pass
    let ok = run(
        &["lsp", &src, "--records", "out/entries-v1.json"],
        dir.path(),
    );
    assert_eq!(ok.status.code(), Some(0), "{ok:?}");
    // a doctored file fails
    let path = dir.path().join("out/entries-v1.json");
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["records"].as_array_mut().unwrap().clear();
    write(&path, &serde_json::to_string_pretty(&doc).unwrap());
    let stale = run(
        &["lsp", &src, "--records", "out/entries-v1.json"],
        dir.path(),
    );
    assert_eq!(stale.status.code(), Some(1));
}

#[test]
fn corpus_ingest_applies_inclusion_criteria() {
    let dir = tempfile::tempdir().unwrap();
    write(
        &dir.path().join("candidates.tsv"),
        "# candidates\n\
         keeper\thttps://github.com/org/keeper\tKotlin\tfalse\t2021-05-01\n\
         archived\thttps://github.com/org/archived\tJava\ttrue\t2021-05-01\n\
         stale\thttps://github.com/org/stale\tJava\tfalse\t2017-12-31\n\
         elsewhere\thttps://gitlab.com/org/elsewhere\tJava\tfalse\t2021-05-01\n\
         nometa\thttps://github.com/org/nometa\n",
    );
    let out = run(
        &["corpus", "ingest", "candidates.tsv", "--manifest", "corpus.json"],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let doc: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("corpus.json")).unwrap(),
    )
    .unwrap();
    let projects = doc["projects"].as_array().unwrap();
    assert_eq!(projects.len(), 1);
    assert_eq!(projects[0]["projectId"], "keeper");
}

fn git(cwd: &Path, args: &[&str]) {
    let out = Command::new("git")
        .arg("-C")
        .arg(cwd)
        .args([
            "-c",
            "user.email=fixture@example.com",
            "-c",
            "user.name=Fixture",
        ])
        .args(args)
        .output()
        .expect("run git");
    assert!(
        out.status.success(),
        "git {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn corpus_fetch_materializes_stripped_version_pair_from_git_tags() {
    let dir = tempfile::tempdir().unwrap();
    let repo = dir.path().join("upstream");
    std::fs::create_dir_all(&repo).unwrap();
    git(&repo, &["init", "--quiet"]);
    write(
        &repo.join("src/Main.java"),
        "public class Main { void f(int x) { if (x<0) { throw new IllegalArgumentException(); } } }",
    );
    write(&repo.join("README.md"), "not source");
    write(&repo.join("assets/logo.png"), "binary-ish");
    git(&repo, &["add", "."]);
    git(&repo, &["commit", "--quiet", "-m", "first"]);
    git(&repo, &["tag", "v0.1"]);
    write(
        &repo.join("src/Extra.kt"),
        "class Extra { fun g(x: Int) { require(x > 0) } }\n",
    );
    git(&repo, &["add", "."]);
    git(
        &repo,
        &["commit", "--quiet", "-m", "second", "--date", "2030-01-01T00:00:00"],
    );
    git(&repo, &["tag", "v0.2"]);

    write(
        &dir.path().join("corpus.json"),
        &format!(
            r#"{{ "projects": [ {{
                "projectId": "demo",
                "sourceUrl": "{}",
                "language": "Mixed"
            }} ] }}"#,
            repo.display()
        ),
    );
    let out = run(
        &[
            "corpus", "fetch", "--manifest", "corpus.json", "--dest", "dest", "--jobs", "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("v1=v0.1"), "{stdout}");
    assert!(stdout.contains("v2=v0.2"), "{stdout}");

    let v1 = dir.path().join("dest/demo/v1");
    let v2 = dir.path().join("dest/demo/v2");
    assert!(v1.join("src/Main.java").exists());
    assert!(!v1.join("README.md").exists());
    assert!(!v1.join("assets").exists());
    assert!(!v1.join("src/Extra.kt").exists());
    assert!(v2.join("src/Extra.kt").exists());

    // the materialized pair feeds evolve directly
    let evolve = run(
        &[
            "evolve",
            "dest/demo/v1",
            "dest/demo/v2",
            "--project",
            "demo",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert_eq!(evolve.status.code(), Some(0), "{evolve:?}");
}

#[test]
fn corpus_fetch_local_mode_needs_no_git() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("tree/app/A.java"), "public class A {}");
    write(&dir.path().join("tree/app/skip.xml"), "<x/>");
    write(
        &dir.path().join("corpus.json"),
        &format!(
            r#"{{ "projects": [ {{
                "projectId": "local",
                "sourceUrl": "",
                "language": "Java",
                "localPath": "{}"
            }} ] }}"#,
            dir.path().join("tree").display()
        ),
    );
    let out = run(
        &["corpus", "fetch", "--manifest", "corpus.json", "--dest", "dest"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(dir.path().join("dest/local/v1/app/A.java").exists());
    assert!(!dir.path().join("dest/local/v1/app/skip.xml").exists());
}

#[test]
fn corpus_fetch_unreachable_repo_is_partial_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    write(
        &dir.path().join("corpus.json"),
        r#"{ "projects": [
            { "projectId": "broken", "sourceUrl": "/nonexistent/repo", "language": "Java" }
        ] }"#,
    );
    let out = run(
        &["corpus", "fetch", "--manifest", "corpus.json", "--dest", "dest"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}
