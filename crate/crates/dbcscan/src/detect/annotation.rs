//! Import-gated annotation detection.
//!
//! A catalog package is open for a unit when any import reaches into it
//! (member import, deeper subpackage import, or `.*` wildcard). Simple-name
//! annotation uses resolve against open packages in catalog order; fully
//! qualified uses resolve without any import. The contract kind follows the
//! attachment site.

use super::{ArtifactKind, ContractRecord};
use crate::catalog::{Catalog, Category};
use crate::classify::classify;
use crate::source_model::{AnnotationSite, AnnotationUse, SourceUnit};
use std::collections::BTreeMap;

pub fn detect_annotations(unit: &SourceUnit, catalog: &Catalog) -> Vec<ContractRecord> {
    let open: Vec<&(String, BTreeMap<String, String>)> = catalog
        .annotation_packages()
        .iter()
        .filter(|(pkg, _)| unit_opens_package(unit, pkg))
        .collect();

    let resolve = |a: &AnnotationUse| -> Option<String> {
        if let Some(pkg) = a.package_part() {
            // fully qualified use needs no import
            return catalog.annotation_id(pkg, a.simple_name()).map(String::from);
        }
        for (_, names) in &open {
            if let Some(id) = names.get(a.simple_name()) {
                return Some(id.clone());
            }
        }
        None
    };

    let mut out = Vec::new();

    for t in unit.all_types() {
        for a in &t.annotations {
            if let Some(id) = resolve(a) {
                out.push(make_record(unit, a, id, &t.name, ArtifactKind::FieldOrProperty, &t.qualified_name));
            }
        }
    }
    for ctx in super::unit_members(unit) {
        for a in &ctx.member.annotations {
            if let Some(id) = resolve(a) {
                out.push(make_record(
                    unit,
                    a,
                    id,
                    &ctx.member.name,
                    ctx.member.kind.into(),
                    &ctx.owner_class,
                ));
            }
        }
        for p in &ctx.member.parameters {
            for a in &p.annotations {
                if let Some(id) = resolve(a) {
                    out.push(make_record(
                        unit,
                        a,
                        id,
                        &ctx.member.name,
                        ctx.member.kind.into(),
                        &ctx.owner_class,
                    ));
                }
            }
        }
    }
    out
}

fn unit_opens_package(unit: &SourceUnit, package: &str) -> bool {
    let prefix = format!("{package}.");
    unit.imports.iter().any(|imp| {
        if imp.is_wildcard {
            imp.qualified_name == package || imp.qualified_name.starts_with(&prefix)
        } else {
            imp.qualified_name.starts_with(&prefix)
        }
    })
}

fn make_record(
    unit: &SourceUnit,
    a: &AnnotationUse,
    construct_id: String,
    artifact_name: &str,
    artifact_kind: ArtifactKind,
    owner_class: &str,
) -> ContractRecord {
    let parameter_index = match a.site {
        AnnotationSite::Parameter(i) => Some(i),
        _ => None,
    };
    let condition_text = match &a.args_text {
        Some(args) => format!("{}{}", a.name_text, args),
        None => String::new(),
    };
    ContractRecord {
        file_path: unit.path.clone(),
        construct_id,
        category: Category::Annotation,
        kind: classify(Some(a.site), Category::Annotation),
        condition_text,
        artifact_name: artifact_name.to_string(),
        artifact_kind,
        owner_class: owner_class.to_string(),
        parameter_index,
        line: a.line,
    }
}
