//! Detectors: walk a parsed unit against the catalog and emit one
//! `ContractRecord` per recognized construct occurrence.
//!
//! Each detector is a pure function of `(SourceUnit, Catalog)`; units may be
//! processed in parallel and merged with a stable sort. Categories follow
//! their own recognition rules: CREs need a guarded throw, APIs and
//! annotations are import-gated, Kotlin assertion names are subject to the
//! declaration/import ambiguity rule, and Kotlin Contracts match a
//! `contract { returns(...) implies (...) }` shape.

mod annotation;
mod api;
mod assertion;
mod cre;
mod kotlin_contract;

use crate::catalog::{Catalog, Category};
use crate::classify::ContractKind;
use crate::source_model::{MemberDecl, MemberKind, SourceUnit};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArtifactKind {
    Method,
    Constructor,
    FieldOrProperty,
}

impl From<MemberKind> for ArtifactKind {
    fn from(k: MemberKind) -> Self {
        match k {
            MemberKind::Method => ArtifactKind::Method,
            MemberKind::Constructor => ArtifactKind::Constructor,
            MemberKind::FieldOrProperty => ArtifactKind::FieldOrProperty,
        }
    }
}

/// One detected contract occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ContractRecord {
    pub file_path: String,
    pub construct_id: String,
    pub category: Category,
    pub kind: ContractKind,
    /// Normalized guard/argument text, or annotation name plus arguments;
    /// empty for bare annotations.
    pub condition_text: String,
    pub artifact_name: String,
    pub artifact_kind: ArtifactKind,
    pub owner_class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter_index: Option<usize>,
    pub line: u32,
}

impl ContractRecord {
    /// Sort key shared by per-unit and per-snapshot orderings.
    pub fn sort_key(&self) -> (String, u32, String, usize) {
        (
            self.file_path.clone(),
            self.line,
            self.construct_id.clone(),
            self.parameter_index.map_or(usize::MAX, |i| i),
        )
    }

    /// Uniqueness tuple within one snapshot's record set.
    pub fn identity(&self) -> (String, u32, String, Option<usize>) {
        (
            self.file_path.clone(),
            self.line,
            self.construct_id.clone(),
            self.parameter_index,
        )
    }
}

/// A member together with its owning class name as used in records.
pub(crate) struct MemberCtx<'a> {
    pub owner_class: String,
    pub member: &'a MemberDecl,
}

/// All members of a unit with their record-level owner names. Kotlin
/// top-level members report the file facade class.
pub(crate) fn unit_members(unit: &SourceUnit) -> Vec<MemberCtx<'_>> {
    let mut out = Vec::new();
    let facade = unit.facade_class_name();
    for m in &unit.top_level_members {
        out.push(MemberCtx {
            owner_class: facade.clone(),
            member: m,
        });
    }
    for t in unit.all_types() {
        for m in &t.members {
            out.push(MemberCtx {
                owner_class: t.qualified_name.clone(),
                member: m,
            });
        }
    }
    out
}

pub use annotation::detect_annotations;
pub use api::detect_api;
pub use assertion::detect_assertions;
pub use cre::detect_cre;
pub use kotlin_contract::detect_kotlin_contracts;

/// Union of the five detectors, deterministically sorted by
/// (line, constructId, parameterIndex) and deduplicated on the record
/// identity tuple.
pub fn detect_all(unit: &SourceUnit, catalog: &Catalog) -> Vec<ContractRecord> {
    let mut records = detect_cre(unit, catalog);
    records.extend(detect_api(unit, catalog));
    records.extend(detect_assertions(unit, catalog));
    records.extend(detect_annotations(unit, catalog));
    records.extend(detect_kotlin_contracts(unit));
    records.sort_by_key(|r| r.sort_key());
    let mut seen = HashSet::new();
    records.retain(|r| seen.insert(r.identity()));
    records
}
