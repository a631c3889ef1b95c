//! Kotlin Contracts DSL detection: a `contract { ... }` call whose lambda
//! contains `returns(...)` followed by `implies (<condition>)`. The implies
//! clause, parentheses included, becomes the condition text.

use super::ContractRecord;
use crate::catalog::Category;
use crate::classify::ContractKind;
use crate::source_model::text::{capture_balanced, normalize_ws};
use crate::source_model::{Language, SourceUnit};

pub const KOTLIN_CONTRACTS_ID: &str = "KotlinContracts";

pub fn detect_kotlin_contracts(unit: &SourceUnit) -> Vec<ContractRecord> {
    if unit.language != Language::Kotlin {
        return Vec::new();
    }
    let mut out = Vec::new();
    for ctx in super::unit_members(unit) {
        let Some(body) = &ctx.member.body else {
            continue;
        };
        for call in &body.calls {
            if call.callee != "contract" || call.receiver.is_some() {
                continue;
            }
            let Some(lambda) = &call.lambda_text else {
                continue;
            };
            if let Some(clause) = implies_clause(lambda) {
                out.push(ContractRecord {
                    file_path: unit.path.clone(),
                    construct_id: KOTLIN_CONTRACTS_ID.to_string(),
                    category: Category::Other,
                    kind: ContractKind::Unclassified,
                    condition_text: clause,
                    artifact_name: ctx.member.name.clone(),
                    artifact_kind: ctx.member.kind.into(),
                    owner_class: ctx.owner_class.clone(),
                    parameter_index: None,
                    line: call.line,
                });
            }
        }
    }
    out
}

/// Find `returns(...)? implies (<clause>)` and return the clause text with
/// its parentheses, whitespace-normalized.
fn implies_clause(lambda: &str) -> Option<String> {
    let bytes = lambda.as_bytes();
    let mut search_from = 0usize;
    while let Some(rel) = lambda[search_from..].find("returns") {
        let start = search_from + rel;
        search_from = start + 1;
        // word boundaries
        if start > 0 && is_ident_byte(bytes[start - 1]) {
            continue;
        }
        let mut pos = start + "returns".len();
        if pos < bytes.len() && is_ident_byte(bytes[pos]) {
            // returnsNotNull and friends still qualify as a returns(...) shape
            let tail: String = lambda[pos..]
                .chars()
                .take_while(|c| c.is_alphanumeric() || *c == '_')
                .collect();
            pos += tail.len();
        }
        pos = skip_ws(lambda, pos);
        if pos < bytes.len() && bytes[pos] == b'(' {
            let (_, after) = capture_balanced(lambda, pos)?;
            pos = skip_ws(lambda, after);
        }
        if !lambda[pos..].starts_with("implies") {
            continue;
        }
        pos = skip_ws(lambda, pos + "implies".len());
        if pos < bytes.len() && bytes[pos] == b'(' {
            let (clause, _) = capture_balanced(lambda, pos)?;
            return Some(normalize_ws(clause));
        }
    }
    None
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn skip_ws(s: &str, mut i: usize) -> usize {
    let bytes = s.as_bytes();
    while i < bytes.len() && bytes[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}
