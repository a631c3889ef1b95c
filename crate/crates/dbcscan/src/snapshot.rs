//! One project snapshot: parsed units, detected records, and the method
//! table that evolution and LSP analyses key on.
//!
//! Scanning is parallel per file and deterministic: results merge under a
//! stable sort on (filePath, line, constructId, parameterIndex), so totals do
//! not depend on scan order or the job count.

use crate::catalog::Catalog;
use crate::detect::{self, ArtifactKind, ContractRecord};
use crate::error::{Error, Result};
use crate::evolution::{MethodContracts, MethodKey};
use crate::source_model::{
    count_artifacts, parse_file, ArtifactCounts, MemberDecl, MemberKind, ParseStatus, SourceUnit,
};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub project_id: String,
    pub snapshot_id: String,
    pub units: Vec<SourceUnit>,
    /// All records, sorted by (filePath, line, constructId, parameterIndex).
    pub records: Vec<ContractRecord>,
    /// Contracts per method, with colliding keys excluded.
    pub methods: MethodContracts,
    /// Keys excluded because two members share the same identity.
    pub collisions: Vec<MethodKey>,
    pub diagnostics: Vec<Diagnostic>,
    pub artifact_counts: ArtifactCounts,
}

impl Snapshot {
    /// Files skipped or parsed only partially.
    pub fn has_partial_failures(&self) -> bool {
        !self.diagnostics.is_empty()
    }
}

/// Scan a directory tree of Java/Kotlin sources.
pub fn scan_dir(
    root: &Path,
    catalog: &Catalog,
    project_id: &str,
    snapshot_id: &str,
    jobs: Option<usize>,
) -> Result<Snapshot> {
    let mut files = Vec::new();
    if !root.exists() {
        return Err(Error::io(
            root.to_path_buf(),
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such path"),
        ));
    }
    let mut diagnostics = Vec::new();
    if root.is_file() {
        files.push(root.to_path_buf());
    } else {
        for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
            match entry {
                Ok(e) if e.file_type().is_file() => {
                    let p = e.path();
                    if crate::source_model::Language::from_path(&p.to_string_lossy()).is_some() {
                        files.push(p.to_path_buf());
                    }
                }
                Ok(_) => {}
                Err(e) => diagnostics.push(Diagnostic {
                    path: e
                        .path()
                        .map(|p| p.display().to_string())
                        .unwrap_or_default(),
                    message: format!("walk error: {e}"),
                }),
            }
        }
    }

    let parse_one = |path: &std::path::PathBuf| -> std::result::Result<SourceUnit, Diagnostic> {
        let rel = relative_path(root, path);
        let bytes = std::fs::read(path).map_err(|e| Diagnostic {
            path: rel.clone(),
            message: format!("skipped: {e}"),
        })?;
        Ok(parse_file(&rel, &bytes))
    };

    let results: Vec<std::result::Result<SourceUnit, Diagnostic>> = match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
            pool.install(|| files.par_iter().map(parse_one).collect())
        }
        None => files.par_iter().map(parse_one).collect(),
    };

    let mut units = Vec::new();
    for r in results {
        match r {
            Ok(u) => units.push(u),
            Err(d) => diagnostics.push(d),
        }
    }
    Ok(build_snapshot(
        units,
        catalog,
        project_id,
        snapshot_id,
        diagnostics,
    ))
}

/// Assemble a snapshot from already-parsed units.
pub fn build_snapshot(
    units: Vec<SourceUnit>,
    catalog: &Catalog,
    project_id: &str,
    snapshot_id: &str,
    mut diagnostics: Vec<Diagnostic>,
) -> Snapshot {
    for unit in &units {
        if let ParseStatus::PartialError(detail) = &unit.parse_status {
            diagnostics.push(Diagnostic {
                path: unit.path.clone(),
                message: format!("partial parse: {detail}"),
            });
        }
    }

    let mut records: Vec<ContractRecord> = units
        .par_iter()
        .flat_map_iter(|u| detect::detect_all(u, catalog))
        .collect();
    records.sort_by_key(|r| r.sort_key());
    let mut seen = BTreeSet::new();
    records.retain(|r| seen.insert(r.identity()));

    let (methods, collisions) = method_table(&units, &records);
    let artifact_counts = count_artifacts(&units);

    Snapshot {
        project_id: project_id.to_string(),
        snapshot_id: snapshot_id.to_string(),
        units,
        records,
        methods,
        collisions,
        diagnostics,
        artifact_counts,
    }
}

fn relative_path(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    let s = rel.to_string_lossy().replace('\\', "/");
    if s.is_empty() {
        path.file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default()
    } else {
        s
    }
}

pub(crate) fn method_key(owner_class: &str, member: &MemberDecl) -> MethodKey {
    MethodKey {
        owner_class: owner_class.to_string(),
        member_name: member.name.clone(),
        parameter_type_texts: member.parameters.iter().map(|p| p.type_text.clone()).collect(),
        member_kind: member.kind,
    }
}

/// Build the method table and attach each method/constructor record to its
/// enclosing member, located by owner, name, kind, and line span. Identical
/// keys from two distinct members collide; both are excluded from matching.
fn method_table(
    units: &[SourceUnit],
    records: &[ContractRecord],
) -> (MethodContracts, Vec<MethodKey>) {
    struct Slot<'a> {
        key: MethodKey,
        member: &'a MemberDecl,
    }
    // (owner, name) -> members, for record association
    let mut by_owner_name: BTreeMap<(String, String), Vec<Slot>> = BTreeMap::new();
    let mut key_count: BTreeMap<MethodKey, usize> = BTreeMap::new();

    for unit in units {
        let facade = unit.facade_class_name();
        let mut add = |owner: String, member: &MemberDecl| {
            if !matches!(member.kind, MemberKind::Method | MemberKind::Constructor) {
                return;
            }
            let key = method_key(&owner, member);
            *key_count.entry(key.clone()).or_insert(0) += 1;
        };
        for m in &unit.top_level_members {
            add(facade.clone(), m);
        }
        for t in unit.all_types() {
            for m in &t.members {
                add(t.qualified_name.clone(), m);
            }
        }
    }

    // second pass builds slots now that collisions are known
    let mut units_slots: Vec<(String, &MemberDecl)> = Vec::new();
    for unit in units {
        let facade = unit.facade_class_name();
        for m in &unit.top_level_members {
            units_slots.push((facade.clone(), m));
        }
        for t in unit.all_types() {
            for m in &t.members {
                units_slots.push((t.qualified_name.clone(), m));
            }
        }
    }
    let collisions: Vec<MethodKey> = key_count
        .iter()
        .filter(|(_, n)| **n > 1)
        .map(|(k, _)| k.clone())
        .collect();
    let collided: BTreeSet<&MethodKey> = collisions.iter().collect();

    let mut methods = MethodContracts::new();
    for (owner, member) in &units_slots {
        if !matches!(member.kind, MemberKind::Method | MemberKind::Constructor) {
            continue;
        }
        let key = method_key(owner, member);
        if collided.contains(&key) {
            continue;
        }
        methods.entry(key.clone()).or_default();
        by_owner_name
            .entry((owner.clone(), member.name.clone()))
            .or_default()
            .push(Slot { key, member });
    }

    for r in records {
        if !matches!(r.artifact_kind, ArtifactKind::Method | ArtifactKind::Constructor) {
            continue;
        }
        let Some(slots) = by_owner_name.get(&(r.owner_class.clone(), r.artifact_name.clone()))
        else {
            continue;
        };
        let wanted = match r.artifact_kind {
            ArtifactKind::Method => MemberKind::Method,
            ArtifactKind::Constructor => MemberKind::Constructor,
            ArtifactKind::FieldOrProperty => unreachable!(),
        };
        if let Some(slot) = slots.iter().find(|s| {
            s.member.kind == wanted && s.member.line <= r.line && r.line <= s.member.line_end
        }) {
            if let Some(contracts) = methods.get_mut(&slot.key) {
                contracts.push(r.clone());
            }
        }
    }
    (methods, collisions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Catalog {
        Catalog::load_default().unwrap()
    }

    #[test]
    fn records_attach_to_their_methods() {
        let src = r#"
public class A {
    void f(int x) {
        if (x < 0) { throw new IllegalArgumentException(); }
    }
    void f(int x, int y) {
        if (y < 0) { throw new IllegalStateException(); }
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        let snap = build_snapshot(vec![unit], &catalog(), "p", "v1", Vec::new());
        assert_eq!(snap.records.len(), 2);
        let one_arg = snap
            .methods
            .iter()
            .find(|(k, _)| k.parameter_type_texts.len() == 1)
            .unwrap();
        assert_eq!(one_arg.1.len(), 1);
        assert_eq!(one_arg.1[0].construct_id, "CREIllegalArgumentException");
        let two_arg = snap
            .methods
            .iter()
            .find(|(k, _)| k.parameter_type_texts.len() == 2)
            .unwrap();
        assert_eq!(two_arg.1[0].construct_id, "CREIllegalStateException");
    }

    #[test]
    fn duplicate_signatures_collide_and_are_excluded() {
        let a = parse_file(
            "x/A.java",
            b"package p; public class A { void f() { if (g()) { throw new IllegalStateException(); } } }",
        );
        let b = parse_file(
            "y/A.java",
            b"package p; public class A { void f() { } }",
        );
        let snap = build_snapshot(vec![a, b], &catalog(), "p", "v1", Vec::new());
        assert_eq!(snap.collisions.len(), 1);
        assert!(snap.methods.is_empty());
        // the record itself is still part of the usage statistics
        assert_eq!(snap.records.len(), 1);
    }

    #[test]
    fn scan_dir_collects_and_sorts() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir_all(dir.path().join("sub")).unwrap();
        std::fs::write(
            dir.path().join("sub/B.java"),
            "public class B { void f(int x) { if (x<0) { throw new IllegalArgumentException(); } } }",
        )
        .unwrap();
        std::fs::write(
            dir.path().join("A.kt"),
            "class A { fun f(x: Int) { require(x > 0) } }\n",
        )
        .unwrap();
        std::fs::write(dir.path().join("ignore.xml"), "<x/>").unwrap();
        let snap = scan_dir(dir.path(), &catalog(), "p", "v1", None).unwrap();
        assert_eq!(snap.units.len(), 2);
        assert_eq!(snap.records.len(), 2);
        assert_eq!(snap.records[0].file_path, "A.kt");
        assert_eq!(snap.records[1].file_path, "sub/B.java");
        assert_eq!(snap.artifact_counts.compilation_units, 2);
    }

    #[test]
    fn serial_and_parallel_scans_agree() {
        let dir = tempfile::tempdir().unwrap();
        for i in 0..12 {
            std::fs::write(
                dir.path().join(format!("C{i}.java")),
                format!(
                    "public class C{i} {{ void f(int x) {{ if (x<{i}) {{ throw new IllegalArgumentException(); }} }} }}"
                ),
            )
            .unwrap();
        }
        let serial = scan_dir(dir.path(), &catalog(), "p", "v1", Some(1)).unwrap();
        let parallel = scan_dir(dir.path(), &catalog(), "p", "v1", Some(8)).unwrap();
        assert_eq!(serial.records, parallel.records);
    }
}
