//! Contract-kind resolution.
//!
//! CREs and the precondition APIs always resolve to preconditions, assertions
//! and contract DSLs stay unclassified, and annotations follow their
//! attachment site: parameters are preconditions, the method/return position
//! is a postcondition, fields and properties are class invariants. Type-level
//! annotations are class-scoped and map to invariants as well.

use crate::catalog::Category;
use crate::source_model::AnnotationSite;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContractKind {
    Pre,
    Post,
    Invariant,
    Unclassified,
}

impl fmt::Display for ContractKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ContractKind::Pre => "Pre",
            ContractKind::Post => "Post",
            ContractKind::Invariant => "Invariant",
            ContractKind::Unclassified => "Unclassified",
        };
        write!(f, "{s}")
    }
}

/// Total and deterministic over (site, category).
pub fn classify(site: Option<AnnotationSite>, category: Category) -> ContractKind {
    match category {
        Category::Cre | Category::Api => ContractKind::Pre,
        Category::Assertion | Category::Other => ContractKind::Unclassified,
        Category::Annotation => match site {
            Some(AnnotationSite::Parameter(_)) => ContractKind::Pre,
            Some(AnnotationSite::MethodOrReturn) => ContractKind::Post,
            Some(AnnotationSite::FieldOrProperty) | Some(AnnotationSite::TypeDecl) => {
                ContractKind::Invariant
            }
            None => ContractKind::Unclassified,
        },
    }
}
