//! Assertion detection.
//!
//! Java asserts are statements and match directly. The five Kotlin names
//! (`assert`, `require`, `requireNotNull`, `check`, `checkNotNull`) are plain
//! functions, so a unit that also declares a function with one of those names
//! or imports one from outside the standard library is ambiguous for that
//! name and contributes no records for it.

use super::ContractRecord;
use crate::catalog::{Catalog, Category, KOTLIN_ASSERTION_NAMES};
use crate::classify::ContractKind;
use crate::source_model::{Language, SourceUnit};
use std::collections::HashSet;

pub fn detect_assertions(unit: &SourceUnit, catalog: &Catalog) -> Vec<ContractRecord> {
    match unit.language {
        Language::Java => detect_java(unit, catalog),
        Language::Kotlin => detect_kotlin(unit, catalog),
    }
}

fn detect_java(unit: &SourceUnit, catalog: &Catalog) -> Vec<ContractRecord> {
    let Some(id) = catalog.assertion_id(Language::Java, "assert") else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for ctx in super::unit_members(unit) {
        let Some(body) = &ctx.member.body else {
            continue;
        };
        for a in body.asserts() {
            out.push(ContractRecord {
                file_path: unit.path.clone(),
                construct_id: id.to_string(),
                category: Category::Assertion,
                kind: ContractKind::Unclassified,
                condition_text: a.condition.clone(),
                artifact_name: ctx.member.name.clone(),
                artifact_kind: ctx.member.kind.into(),
                owner_class: ctx.owner_class.clone(),
                parameter_index: None,
                line: a.line,
            });
        }
    }
    out
}

fn detect_kotlin(unit: &SourceUnit, catalog: &Catalog) -> Vec<ContractRecord> {
    let ambiguous: HashSet<&str> = KOTLIN_ASSERTION_NAMES
        .iter()
        .copied()
        .filter(|name| is_ambiguous(unit, name))
        .collect();
    let mut out = Vec::new();
    for ctx in super::unit_members(unit) {
        let Some(body) = &ctx.member.body else {
            continue;
        };
        for call in &body.calls {
            if call.receiver.is_some() {
                continue;
            }
            let name = call.callee.as_str();
            if !KOTLIN_ASSERTION_NAMES.contains(&name) || ambiguous.contains(name) {
                continue;
            }
            let Some(id) = catalog.assertion_id(Language::Kotlin, name) else {
                continue;
            };
            out.push(ContractRecord {
                file_path: unit.path.clone(),
                construct_id: id.to_string(),
                category: Category::Assertion,
                kind: ContractKind::Unclassified,
                condition_text: call.args.first().cloned().unwrap_or_default(),
                artifact_name: ctx.member.name.clone(),
                artifact_kind: ctx.member.kind.into(),
                owner_class: ctx.owner_class.clone(),
                parameter_index: None,
                line: call.line,
            });
        }
    }
    out
}

/// A same-named function declaration or a non-stdlib member import shadows
/// the standard-library assertion; `import kotlin.*` paths denote the
/// cataloged construct itself and do not trigger ambiguity.
fn is_ambiguous(unit: &SourceUnit, name: &str) -> bool {
    if unit.declared_function_names.contains(name) {
        return true;
    }
    unit.imports.iter().any(|imp| {
        !imp.is_wildcard && imp.local_name() == name && !is_stdlib_path(&imp.qualified_name)
    })
}

fn is_stdlib_path(q: &str) -> bool {
    q == "kotlin" || q.starts_with("kotlin.")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source_model::parse_file;

    fn catalog() -> Catalog {
        Catalog::load_default().unwrap()
    }

    #[test]
    fn java_assert_statement_matches() {
        let src = r#"
public class A {
    void f(int x) {
        assert x > 0;
        assert x < 10 : "too big";
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        let records = detect_assertions(&unit, &catalog());
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].construct_id, "JavaAssert");
        assert_eq!(records[0].condition_text, "x > 0");
        assert_eq!(records[1].condition_text, "x < 10");
        assert_eq!(records[0].kind, ContractKind::Unclassified);
    }

    #[test]
    fn kotlin_require_without_declaration_matches() {
        let src = r#"
class A {
    fun f(items: List<Int>) {
        require(items.isNotEmpty())
    }
}
"#;
        let unit = parse_file("A.kt", src.as_bytes());
        let records = detect_assertions(&unit, &catalog());
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].construct_id, "KotlinRequire");
        assert_eq!(records[0].condition_text, "items.isNotEmpty()");
    }

    #[test]
    fn declared_function_makes_name_ambiguous() {
        let src = r#"
class A {
    fun check(b: Boolean) {}
    fun f(x: Boolean) {
        check(x)
        require(x)
    }
}
"#;
        let unit = parse_file("A.kt", src.as_bytes());
        let records = detect_assertions(&unit, &catalog());
        // `check` is shadowed, `require` is not
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].construct_id, "KotlinRequire");
    }

    #[test]
    fn nonstdlib_import_makes_name_ambiguous_but_kotlin_import_does_not() {
        let shadowed = r#"
import com.example.validation.requireNotNull

fun f(x: Any?) {
    requireNotNull(x)
}
"#;
        let unit = parse_file("A.kt", shadowed.as_bytes());
        assert!(detect_assertions(&unit, &catalog()).is_empty());

        let stdlib = r#"
import kotlin.requireNotNull

fun f(x: Any?) {
    requireNotNull(x)
}
"#;
        let unit = parse_file("B.kt", stdlib.as_bytes());
        assert_eq!(detect_assertions(&unit, &catalog()).len(), 1);
    }

    #[test]
    fn receiver_calls_do_not_match() {
        let src = r#"
class A {
    fun f(v: Validator) {
        v.check(true)
    }
}
"#;
        let unit = parse_file("A.kt", src.as_bytes());
        assert!(detect_assertions(&unit, &catalog()).is_empty());
    }

    #[test]
    fn kotlin_names_do_not_fire_in_java() {
        let src = r#"
public class A {
    void f(Object x) {
        require(x);
        check(x);
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        assert!(detect_assertions(&unit, &catalog()).is_empty());
    }
}
