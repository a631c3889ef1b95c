//! Conditional-runtime-exception detection.
//!
//! The recognized shape is a throw that is the sole statement of an if
//! branch, braced or bare, in the then or the else position:
//! `if (<condition>) { throw new <exception>(<args>) }`. Throws sitting
//! deeper inside a branch do not match. The guard text is recorded as
//! written, never negated, also for else-branch throws.

use super::{ContractRecord, MemberCtx};
use crate::catalog::{Catalog, Category};
use crate::classify::ContractKind;
use crate::source_model::{SourceUnit, Stmt, ThrowStmt};

pub fn detect_cre(unit: &SourceUnit, catalog: &Catalog) -> Vec<ContractRecord> {
    let mut out = Vec::new();
    for ctx in super::unit_members(unit) {
        let Some(body) = &ctx.member.body else {
            continue;
        };
        for if_stmt in body.ifs() {
            let mut branches: Vec<&[Stmt]> = vec![&if_stmt.then_branch];
            if let Some(e) = &if_stmt.else_branch {
                branches.push(e);
            }
            for branch in branches {
                let [Stmt::Throw(t)] = branch else {
                    continue;
                };
                if let Some(record) = match_throw(unit, catalog, &ctx, t, &if_stmt.condition) {
                    out.push(record);
                }
            }
        }
    }
    out
}

fn match_throw(
    unit: &SourceUnit,
    catalog: &Catalog,
    ctx: &MemberCtx<'_>,
    t: &ThrowStmt,
    condition: &str,
) -> Option<ContractRecord> {
    let simple = simple_type_name(&t.exception_type);
    let id = catalog.cre_id_for(simple)?;
    Some(ContractRecord {
        file_path: unit.path.clone(),
        construct_id: id.to_string(),
        category: Category::Cre,
        kind: ContractKind::Pre,
        condition_text: condition.to_string(),
        artifact_name: ctx.member.name.clone(),
        artifact_kind: ctx.member.kind.into(),
        owner_class: ctx.owner_class.clone(),
        parameter_index: None,
        line: t.line,
    })
}

/// Simple name of a type reference: generics stripped, last dotted segment.
fn simple_type_name(type_text: &str) -> &str {
    let base = type_text.split('<').next().unwrap_or(type_text).trim();
    base.rsplit('.').next().unwrap_or(base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source_model::parse_file;

    fn catalog() -> Catalog {
        Catalog::load_default().unwrap()
    }

    #[test]
    fn braced_then_branch_matches() {
        let src = r#"
public class Checkout {
    public void proceedWithCheckout(List<Item> shoppingCart) {
        if (shoppingCart.isEmpty()) {
            throw new IllegalArgumentException();
        }
    }
}
"#;
        let unit = parse_file("Checkout.java", src.as_bytes());
        let records = detect_cre(&unit, &catalog());
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!(r.construct_id, "CREIllegalArgumentException");
        assert_eq!(r.condition_text, "shoppingCart.isEmpty()");
        assert_eq!(r.kind, ContractKind::Pre);
        assert_eq!(r.artifact_name, "proceedWithCheckout");
    }

    #[test]
    fn bare_then_and_else_branch_match() {
        let src = r#"
public class A {
    void f(int x) {
        if (x < 0) throw new IllegalStateException();
        if (x > 9) { ok(); } else { throw new UnsupportedOperationException(); }
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        let records = detect_cre(&unit, &catalog());
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].construct_id, "CREIllegalStateException");
        assert_eq!(records[1].construct_id, "UCREUnsupportedOperationException");
        // else-branch condition recorded as written, not negated
        assert_eq!(records[1].condition_text, "x > 9");
    }

    #[test]
    fn unguarded_throw_does_not_match() {
        let src = r#"
public class A {
    void f() {
        throw new IllegalArgumentException();
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        assert!(detect_cre(&unit, &catalog()).is_empty());
    }

    #[test]
    fn throw_deeper_in_branch_does_not_match() {
        let src = r#"
public class A {
    void f(int x) {
        if (x < 0) {
            log();
            throw new IllegalArgumentException();
        }
        if (x > 0) {
            for (int i = 0; i < x; i++) { throw new IllegalStateException(); }
        }
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        assert!(detect_cre(&unit, &catalog()).is_empty());
    }

    #[test]
    fn nested_if_sole_throw_matches_inner_guard() {
        let src = r#"
public class TagEntry {
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
        let unit = parse_file("TagEntry.java", src.as_bytes());
        let records = detect_cre(&unit, &catalog());
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].construct_id, "CREIllegalStateException");
        assert_eq!(records[0].condition_text, "!id.endsWith(name)");
    }

    #[test]
    fn kotlin_throw_matches_without_new() {
        let src = r#"
class A {
    fun f(x: Int) {
        if (x < 0) {
            throw IllegalArgumentException("neg")
        }
    }
}
"#;
        let unit = parse_file("A.kt", src.as_bytes());
        let records = detect_cre(&unit, &catalog());
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].construct_id, "CREIllegalArgumentException");
    }

    #[test]
    fn kotlin_elvis_throw_is_not_a_cre() {
        let src = r#"
class A {
    fun f(x: String?) {
        val y = x ?: throw IllegalArgumentException()
    }
}
"#;
        let unit = parse_file("A.kt", src.as_bytes());
        assert!(detect_cre(&unit, &catalog()).is_empty());
    }

    #[test]
    fn noncatalog_exception_is_ignored() {
        let src = r#"
public class A {
    void f(int x) {
        if (x < 0) { throw new MyCustomException(); }
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        assert!(detect_cre(&unit, &catalog()).is_empty());
    }
}
