//! Import-gated detection of precondition-API calls.
//!
//! Records are emitted only when the unit imports one of the cataloged API
//! classes (class import, package wildcard, or a static/member import of a
//! method). Receiver-form calls match on the class simple name; statically
//! imported methods match on the bare name. The first argument text becomes
//! the condition.

use super::{ContractRecord, MemberCtx};
use crate::catalog::{ApiFamily, Catalog, Category};
use crate::classify::ContractKind;
use crate::source_model::{CallExpr, SourceUnit};
use std::collections::HashMap;

pub fn detect_api(unit: &SourceUnit, catalog: &Catalog) -> Vec<ContractRecord> {
    let visible = visible_apis(unit, catalog);
    if visible.receivers.is_empty() && visible.bare.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for ctx in super::unit_members(unit) {
        let Some(body) = &ctx.member.body else {
            continue;
        };
        for call in &body.calls {
            if let Some(id) = resolve_call(&visible, catalog, call) {
                out.push(make_record(unit, &ctx, call, id));
            }
        }
    }
    out
}

struct VisibleApis<'c> {
    /// local receiver name -> families the name can stand for
    receivers: HashMap<String, Vec<&'c ApiFamily>>,
    /// bare method name -> construct id
    bare: HashMap<String, String>,
}

fn visible_apis<'c>(unit: &SourceUnit, catalog: &'c Catalog) -> VisibleApis<'c> {
    let mut receivers: HashMap<String, Vec<&ApiFamily>> = HashMap::new();
    let mut bare = HashMap::new();
    for import in &unit.imports {
        for fam in catalog.api_families() {
            let class_fqn = format!("{}.{}", fam.package, fam.class);
            if !import.is_wildcard && import.qualified_name == class_fqn {
                receivers
                    .entry(import.local_name().to_string())
                    .or_default()
                    .push(fam);
            } else if import.is_wildcard && import.qualified_name == fam.package {
                receivers.entry(fam.class.clone()).or_default().push(fam);
            } else if import.is_wildcard && import.qualified_name == class_fqn {
                // static wildcard: every cataloged method, bare
                for (method, id) in &fam.methods {
                    bare.insert(method.clone(), id.clone());
                }
            } else if !import.is_wildcard {
                if let Some(rest) = import
                    .qualified_name
                    .strip_prefix(&format!("{class_fqn}."))
                {
                    if let Some(id) = fam.methods.get(rest) {
                        bare.insert(import.local_name().to_string(), id.clone());
                    }
                }
            }
        }
    }
    VisibleApis { receivers, bare }
}

fn resolve_call(visible: &VisibleApis, catalog: &Catalog, call: &CallExpr) -> Option<String> {
    match &call.receiver {
        Some(recv) => {
            let fams = visible.receivers.get(recv)?;
            // the imported family wins; a same-class sibling (the two Validate
            // packages share one method pool) backs up methods listed only there
            for fam in fams {
                if let Some(id) = fam.methods.get(&call.callee) {
                    return Some(id.clone());
                }
            }
            for fam in fams {
                for sibling in catalog.api_families() {
                    if sibling.class == fam.class && sibling.package != fam.package {
                        if let Some(id) = sibling.methods.get(&call.callee) {
                            return Some(id.clone());
                        }
                    }
                }
            }
            None
        }
        None => visible.bare.get(&call.callee).cloned(),
    }
}

fn make_record(
    unit: &SourceUnit,
    ctx: &MemberCtx<'_>,
    call: &CallExpr,
    construct_id: String,
) -> ContractRecord {
    ContractRecord {
        file_path: unit.path.clone(),
        construct_id,
        category: Category::Api,
        kind: ContractKind::Pre,
        condition_text: call.args.first().cloned().unwrap_or_default(),
        artifact_name: ctx.member.name.clone(),
        artifact_kind: ctx.member.kind.into(),
        owner_class: ctx.owner_class.clone(),
        parameter_index: None,
        line: call.line,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source_model::parse_file;

    fn catalog() -> Catalog {
        Catalog::load_default().unwrap()
    }

    #[test]
    fn kotlin_validate_with_lang3_import() {
        let src = r#"
import org.apache.commons.lang3.Validate

class Cart {
    fun addToShoppingCart(items: List<Item>): List<Item> {
        Validate.notEmpty(items)
        shoppingCart.addAll(items)
        return shoppingCart
    }
}
"#;
        let unit = parse_file("Cart.kt", src.as_bytes());
        let records = detect_api(&unit, &catalog());
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert!(r.construct_id.contains("ValidateNotEmpty"), "{}", r.construct_id);
        assert_eq!(r.kind, ContractKind::Pre);
        assert_eq!(r.condition_text, "items");
    }

    #[test]
    fn no_import_no_record() {
        let src = r#"
class Cart {
    fun add(items: List<Item>) {
        Validate.notEmpty(items)
    }
}
"#;
        let unit = parse_file("Cart.kt", src.as_bytes());
        assert!(detect_api(&unit, &catalog()).is_empty());
    }

    #[test]
    fn guava_static_import_matches_bare_call() {
        let src = r#"
import static com.google.common.base.Preconditions.checkNotNull;

public class A {
    void f(Object x) {
        checkNotNull(x);
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        let records = detect_api(&unit, &catalog());
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].construct_id, "GuavaPreconditionNotNull");
        assert_eq!(records[0].condition_text, "x");
    }

    #[test]
    fn guava_receiver_form_with_class_import() {
        let src = r#"
import com.google.common.base.Preconditions;

public class A {
    void f(Object x, boolean ok) {
        Preconditions.checkNotNull(x, "must not be null");
        Preconditions.checkArgument(ok);
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        let records = detect_api(&unit, &catalog());
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].construct_id, "GuavaPreconditionNotNull");
        assert_eq!(records[1].construct_id, "GuavaPreconditionArgument");
    }

    #[test]
    fn noncatalog_method_on_imported_class_is_ignored() {
        let src = r#"
import com.google.common.base.Preconditions;

public class A {
    void f(Object x) {
        Preconditions.somethingElse(x);
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        assert!(detect_api(&unit, &catalog()).is_empty());
    }

    #[test]
    fn static_wildcard_exposes_all_methods() {
        let src = r#"
import static org.springframework.util.Assert.*;

public class A {
    void f(String s) {
        hasText(s);
        notNull(s);
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        let records = detect_api(&unit, &catalog());
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].construct_id, "SpringAssertHasText");
        assert_eq!(records[1].construct_id, "SpringAssertNotNull");
    }

    #[test]
    fn package_wildcard_enables_receiver_form() {
        let src = r#"
import org.apache.commons.lang3.*;

public class A {
    void f(int a, int b, int c) {
        Validate.inclusiveBetween(a, b, c);
    }
}
"#;
        let unit = parse_file("A.java", src.as_bytes());
        let records = detect_api(&unit, &catalog());
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].construct_id, "CommonsLang3ValidateInclusiveBetween");
    }
}
