//! Intra-corpus class hierarchies and Liskov-substitution checking.
//!
//! Supertype references resolve through, in order: an exact import, a
//! same-package simple-name match, and same-file nesting. Unresolved edges
//! (external supertypes) are counted and excluded. Each overriding method is
//! compared against its nearest ancestor declaration only; a diff record
//! classified as strengthened preconditions or weakened postconditions marks
//! an LSP violation.

use crate::evolution::{classify_diff, DiffRecord, MethodKey};
use crate::snapshot::Snapshot;
use crate::source_model::{MemberKind, SourceUnit, TypeDecl, Visibility};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyEdge {
    pub sub_class: String,
    pub super_type_text: String,
    /// Qualified name of a type in this snapshot, when resolvable.
    pub resolved_super: Option<String>,
}

/// One override pair with its contract diff.
#[derive(Debug, Clone, Serialize)]
pub struct LspPair {
    pub sub_method: MethodKey,
    pub super_method: MethodKey,
    pub sub_location: (String, u32),
    pub super_location: (String, u32),
    pub diff: DiffRecord,
    pub violation: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LspAnalysis {
    pub edges: Vec<HierarchyEdge>,
    pub unresolved_edges: usize,
    /// Override pairs with at least one contract on either side.
    pub pairs: Vec<LspPair>,
    /// Override pairs inspected, including contract-free ones.
    pub pairs_inspected: usize,
}

impl LspAnalysis {
    pub fn violations(&self) -> impl Iterator<Item = &LspPair> {
        self.pairs.iter().filter(|p| p.violation)
    }

    pub fn diff_records(&self) -> Vec<DiffRecord> {
        self.pairs.iter().map(|p| p.diff.clone()).collect()
    }
}

struct ClassInfo<'a> {
    qualified_name: String,
    unit: &'a SourceUnit,
    decl: &'a TypeDecl,
}

struct MethodSlot<'a> {
    key: MethodKey,
    visibility: Visibility,
    line: u32,
    file: &'a str,
}

/// Resolve every supertype reference in the snapshot.
pub fn resolve_hierarchy(snapshot: &Snapshot) -> Vec<HierarchyEdge> {
    let index = class_index(snapshot);
    let mut edges = Vec::new();
    for info in index.values() {
        for raw in &info.decl.super_types {
            edges.push(resolve_edge(info, raw, &index));
        }
    }
    edges.sort_by(|a, b| {
        (&a.sub_class, &a.super_type_text).cmp(&(&b.sub_class, &b.super_type_text))
    });
    edges
}

/// Full LSP analysis: hierarchy, override pairing, diff classification.
pub fn analyze(snapshot: &Snapshot) -> LspAnalysis {
    let index = class_index(snapshot);
    let mut analysis = LspAnalysis::default();

    // adjacency on resolved edges, declaration order preserved
    let mut supers_of: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for info in index.values() {
        let mut resolved = Vec::new();
        for raw in &info.decl.super_types {
            let edge = resolve_edge(info, raw, &index);
            if let Some(s) = &edge.resolved_super {
                resolved.push(s.clone());
            } else {
                analysis.unresolved_edges += 1;
            }
            analysis.edges.push(edge);
        }
        supers_of.insert(info.qualified_name.clone(), resolved);
    }
    analysis
        .edges
        .sort_by(|a, b| (&a.sub_class, &a.super_type_text).cmp(&(&b.sub_class, &b.super_type_text)));

    let methods_by_class = method_slots(&index);
    let collided: BTreeSet<&MethodKey> = snapshot.collisions.iter().collect();
    let empty: Vec<crate::detect::ContractRecord> = Vec::new();

    for (class, slots) in &methods_by_class {
        for slot in slots {
            if slot.visibility == Visibility::Private {
                continue;
            }
            // nearest ancestor declaring the same signature wins
            let Some(super_slot) =
                find_nearest_override(class, slot, &supers_of, &methods_by_class)
            else {
                continue;
            };
            analysis.pairs_inspected += 1;
            if collided.contains(&slot.key) || collided.contains(&super_slot.key) {
                continue;
            }
            let before = snapshot.methods.get(&super_slot.key).unwrap_or(&empty);
            let after = snapshot.methods.get(&slot.key).unwrap_or(&empty);
            if before.is_empty() && after.is_empty() {
                continue;
            }
            let classifications = classify_diff(before, after);
            let diff = DiffRecord {
                key: slot.key.clone(),
                before: before.clone(),
                after: after.clone(),
                classifications,
            };
            let violation = diff.is_critical();
            analysis.pairs.push(LspPair {
                sub_method: slot.key.clone(),
                super_method: super_slot.key.clone(),
                sub_location: (slot.file.to_string(), slot.line),
                super_location: (super_slot.file.to_string(), super_slot.line),
                diff,
                violation,
            });
        }
    }
    analysis
}

/// Diff records for all override pairs, as consumed by the reports.
pub fn lsp_diff_records(snapshot: &Snapshot) -> Vec<DiffRecord> {
    analyze(snapshot).diff_records()
}

fn class_index(snapshot: &Snapshot) -> BTreeMap<String, ClassInfo<'_>> {
    let mut index: BTreeMap<String, ClassInfo> = BTreeMap::new();
    let mut duplicate: BTreeSet<String> = BTreeSet::new();
    for unit in &snapshot.units {
        for decl in unit.all_types() {
            let entry = ClassInfo {
                qualified_name: decl.qualified_name.clone(),
                unit,
                decl,
            };
            if index.insert(decl.qualified_name.clone(), entry).is_some() {
                duplicate.insert(decl.qualified_name.clone());
            }
        }
    }
    // duplicate-source collisions make the name ambiguous; drop it entirely
    for name in duplicate {
        index.remove(&name);
    }
    index
}

fn resolve_edge(
    info: &ClassInfo<'_>,
    raw_super: &str,
    index: &BTreeMap<String, ClassInfo<'_>>,
) -> HierarchyEdge {
    let base = strip_type_decorations(raw_super);
    let resolved = resolve_name(info, &base, index);
    HierarchyEdge {
        sub_class: info.qualified_name.clone(),
        super_type_text: raw_super.to_string(),
        resolved_super: resolved,
    }
}

fn resolve_name(
    info: &ClassInfo<'_>,
    base: &str,
    index: &BTreeMap<String, ClassInfo<'_>>,
) -> Option<String> {
    if base.is_empty() {
        return None;
    }
    if base.contains('.') {
        // absolute or package-relative dotted reference
        if index.contains_key(base) {
            return Some(base.to_string());
        }
        let pkg_relative = qualify(&info.unit.package, base);
        if index.contains_key(&pkg_relative) {
            return Some(pkg_relative);
        }
        return None;
    }
    // (1) exact import
    for imp in &info.unit.imports {
        if !imp.is_wildcard && imp.local_name() == base {
            if index.contains_key(&imp.qualified_name) {
                return Some(imp.qualified_name.clone());
            }
        }
    }
    // (2) same package
    let same_pkg = qualify(&info.unit.package, base);
    if index.contains_key(&same_pkg) {
        return Some(same_pkg);
    }
    // (3) same file, any nesting level
    for decl in info.unit.all_types() {
        if decl.name == base {
            return Some(decl.qualified_name.clone());
        }
    }
    None
}

fn qualify(package: &str, name: &str) -> String {
    if package.is_empty() {
        name.to_string()
    } else {
        format!("{package}.{name}")
    }
}

/// Type reference minus generics, constructor arguments, and delegation.
fn strip_type_decorations(raw: &str) -> String {
    let mut s = raw.trim();
    if let Some(i) = s.find('<') {
        s = s[..i].trim_end();
    }
    if let Some(i) = s.find('(') {
        s = s[..i].trim_end();
    }
    if let Some(i) = s.find(" by ") {
        s = s[..i].trim_end();
    }
    s.trim().to_string()
}

fn method_slots<'a>(
    index: &BTreeMap<String, ClassInfo<'a>>,
) -> BTreeMap<String, Vec<MethodSlot<'a>>> {
    let mut out: BTreeMap<String, Vec<MethodSlot>> = BTreeMap::new();
    for info in index.values() {
        let mut slots = Vec::new();
        for m in &info.decl.members {
            if m.kind != MemberKind::Method {
                continue;
            }
            slots.push(MethodSlot {
                key: crate::snapshot::method_key(&info.qualified_name, m),
                visibility: m.visibility,
                line: m.line,
                file: &info.unit.path,
            });
        }
        out.insert(info.qualified_name.clone(), slots);
    }
    out
}

/// Breadth-first walk up the resolved ancestors; the first class declaring a
/// matching non-private signature is the contract the client sees.
fn find_nearest_override<'a>(
    class: &str,
    slot: &MethodSlot<'_>,
    supers_of: &BTreeMap<String, Vec<String>>,
    methods_by_class: &'a BTreeMap<String, Vec<MethodSlot<'a>>>,
) -> Option<&'a MethodSlot<'a>> {
    let signature = slot.key.signature();
    let mut queue: VecDeque<&str> = VecDeque::new();
    let mut visited: BTreeSet<&str> = BTreeSet::new();
    visited.insert(class);
    if let Some(supers) = supers_of.get(class) {
        for s in supers {
            queue.push_back(s);
        }
    }
    while let Some(current) = queue.pop_front() {
        if !visited.insert(current) {
            continue;
        }
        if let Some(slots) = methods_by_class.get(current) {
            if let Some(found) = slots
                .iter()
                .find(|s| s.visibility != Visibility::Private && s.key.signature() == signature)
            {
                return Some(found);
            }
        }
        if let Some(supers) = supers_of.get(current) {
            for s in supers {
                queue.push_back(s);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::evolution::EvolutionPattern;
    use crate::snapshot::build_snapshot;
    use crate::source_model::parse_file;

    fn catalog() -> Catalog {
        Catalog::load_default().unwrap()
    }

    fn snap(files: &[(&str, &str)]) -> Snapshot {
        let units = files
            .iter()
            .map(|(p, s)| parse_file(p, s.as_bytes()))
            .collect();
        build_snapshot(units, &catalog(), "p", "v1", Vec::new())
    }

    const ENTRY_ITEM: &str = r#"
public class EntryItem {
  public void setName(String name) {
    if (name != null) {
      this.name = name;
      this.normalizedName = StringNormalizer.normalizeWithResult(this.name, false);
    } else {
      this.name = "null";
      this.normalizedName = null;
    }
  }
}
"#;

    const TAG_ENTRY: &str = r#"
public class TagEntry extends EntryItem {
  public final String id;

  @Override
  public void setName(String name) {
    if (name != null) {
      if (!id.endsWith(name))
        throw new IllegalStateException("The display name and tag name need to be equal.");
      super.setName(name);
    } else {
      super.setName(id.substring(SCHEME.length()));
    }
  }
}
"#;

    #[test]
    fn same_package_edge_resolves() {
        let s = snap(&[("EntryItem.java", ENTRY_ITEM), ("TagEntry.java", TAG_ENTRY)]);
        let edges = resolve_hierarchy(&s);
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].sub_class, "TagEntry");
        assert_eq!(edges[0].resolved_super.as_deref(), Some("EntryItem"));
    }

    #[test]
    fn external_supertype_stays_unresolved() {
        let s = snap(&[(
            "A.java",
            "public class A extends AppCompatActivity { public void f() {} }",
        )]);
        let edges = resolve_hierarchy(&s);
        assert_eq!(edges.len(), 1);
        assert!(edges[0].resolved_super.is_none());
        assert!(analyze(&s).pairs.is_empty());
    }

    #[test]
    fn subclass_cre_on_contractless_super_violates() {
        let s = snap(&[("EntryItem.java", ENTRY_ITEM), ("TagEntry.java", TAG_ENTRY)]);
        let analysis = analyze(&s);
        assert_eq!(analysis.pairs.len(), 1);
        let pair = &analysis.pairs[0];
        assert!(pair.violation);
        assert_eq!(
            pair.diff.classifications[0].pattern,
            EvolutionPattern::PreStrengthened
        );
        assert_eq!(pair.sub_method.member_name, "setName");
    }

    #[test]
    fn weakening_override_is_no_violation() {
        let sup = r#"
import androidx.annotation.NonNull;
public class Base {
    public void set(@NonNull String s) {}
}
"#;
        let sub = r#"
public class Impl extends Base {
    @Override
    public void set(String s) {}
}
"#;
        let s = snap(&[("Base.java", sup), ("Impl.java", sub)]);
        let analysis = analyze(&s);
        assert_eq!(analysis.pairs.len(), 1);
        let pair = &analysis.pairs[0];
        assert!(!pair.violation);
        assert_eq!(pair.diff.classifications[0].pattern, EvolutionPattern::PreWeakened);
    }

    #[test]
    fn identical_contracts_are_unchanged() {
        let sup = r#"
import androidx.annotation.NonNull;
public class Base {
    public void set(@NonNull String s) {}
}
"#;
        let sub = r#"
import androidx.annotation.NonNull;
public class Impl extends Base {
    @Override
    public void set(@NonNull String s) {}
}
"#;
        let s = snap(&[("Base.java", sup), ("Impl.java", sub)]);
        let analysis = analyze(&s);
        assert_eq!(analysis.pairs.len(), 1);
        assert_eq!(
            analysis.pairs[0].diff.classifications[0].pattern,
            EvolutionPattern::Unchanged
        );
        assert!(!analysis.pairs[0].violation);
    }

    #[test]
    fn transitive_override_pairs_with_nearest_declaration_once() {
        let c = "package p; public class C { public void m(int x) { if (x<0) { throw new IllegalArgumentException(); } } }";
        let b = "package p; public class B extends C { }";
        let a = "package p; public class A extends B { public void m(int x) { } }";
        let s = snap(&[("C.java", c), ("B.java", b), ("A.java", a)]);
        let analysis = analyze(&s);
        assert_eq!(analysis.pairs.len(), 1);
        let pair = &analysis.pairs[0];
        assert_eq!(pair.super_method.owner_class, "p.C");
        assert_eq!(pair.sub_method.owner_class, "p.A");
    }

    #[test]
    fn nearest_ancestor_shadows_farther_declaration() {
        let c = "package p; public class C { public void m() {} }";
        let b = r#"
package p;
public class B extends C {
    public void m() { if (x()) { throw new IllegalStateException(); } }
}
"#;
        let a = "package p; public class A extends B { public void m() {} }";
        let s = snap(&[("C.java", c), ("B.java", b), ("A.java", a)]);
        let analysis = analyze(&s);
        // A.m pairs with B.m (weakening); B.m pairs with C.m (strengthening)
        assert_eq!(analysis.pairs.len(), 2);
        let a_pair = analysis
            .pairs
            .iter()
            .find(|p| p.sub_method.owner_class == "p.A")
            .unwrap();
        assert_eq!(a_pair.super_method.owner_class, "p.B");
        assert!(!a_pair.violation);
        let b_pair = analysis
            .pairs
            .iter()
            .find(|p| p.sub_method.owner_class == "p.B")
            .unwrap();
        assert!(b_pair.violation);
    }

    #[test]
    fn kotlin_same_package_constructor_call_supertype_resolves() {
        let base = "package app\nopen class Base {\n    open fun f(x: Int) {}\n}\n";
        let sub = r#"
package app
class Sub : Base() {
    override fun f(x: Int) {
        if (x < 0) {
            throw IllegalArgumentException()
        }
    }
}
"#;
        let s = snap(&[("Base.kt", base), ("Sub.kt", sub)]);
        let analysis = analyze(&s);
        assert_eq!(analysis.pairs.len(), 1);
        assert!(analysis.pairs[0].violation);
    }

    #[test]
    fn import_match_beats_same_package() {
        let other = "package lib; public class Target { public void go() {} }";
        let local = "package p; public class Target { public void go() {} }";
        let sub = r#"
package p;
import lib.Target;
public class Sub extends Target {
    @Override
    public void go() { if (bad()) { throw new IllegalStateException(); } }
}
"#;
        let s = snap(&[("lib/Target.java", other), ("p/Target.java", local), ("Sub.java", sub)]);
        let analysis = analyze(&s);
        assert_eq!(analysis.pairs.len(), 1);
        assert_eq!(analysis.pairs[0].super_method.owner_class, "lib.Target");
    }

    #[test]
    fn snapshot_without_resolved_edges_has_no_lsp_records() {
        let s = snap(&[("A.java", "public class A { public void f() {} }")]);
        assert!(lsp_diff_records(&s).is_empty());
    }
}
