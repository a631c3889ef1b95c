//! Contract evolution across two snapshots of one project: match methods by
//! stable identity, build one diff record per method that carries contracts
//! in either version, and classify each record into evolution patterns.
//!
//! Pattern rules per kind (preconditions and postconditions):
//! an added entry strengthens, a removed entry weakens; a persisting
//! construct whose condition gained a top-level `&`/`&&` clause strengthens
//! and one that gained a `|`/`||` clause weakens, with the mirrored clause
//! removals mapping to the opposite pattern so that swapping the snapshots
//! swaps strengthened and weakened. Any other text change on a persisting
//! construct is a minor change. Changes to invariant or unclassified records
//! have no polarity and classify as unclassified.

use crate::classify::ContractKind;
use crate::detect::ContractRecord;
use crate::source_model::text::{normalize_ws, split_top_level, strip_outer_parens};
use crate::source_model::MemberKind;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Stable identity of a method across versions and hierarchies.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MethodKey {
    pub owner_class: String,
    pub member_name: String,
    pub parameter_type_texts: Vec<String>,
    pub member_kind: MemberKind,
}

impl MethodKey {
    /// Identity with the owner erased, for override pairing.
    pub fn signature(&self) -> (String, Vec<String>, MemberKind) {
        (
            self.member_name.clone(),
            self.parameter_type_texts.clone(),
            self.member_kind,
        )
    }
}

impl fmt::Display for MethodKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}.{}({})",
            self.owner_class,
            self.member_name,
            self.parameter_type_texts.join(", ")
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Presence {
    Both,
    OnlyV1,
    OnlyV2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EvolutionPattern {
    Unchanged,
    MinorChange,
    PreStrengthened,
    PreWeakened,
    PostStrengthened,
    PostWeakened,
    Unclassified,
}

impl EvolutionPattern {
    /// Strengthened preconditions and weakened postconditions can break
    /// existing clients.
    pub fn is_critical(self) -> bool {
        matches!(
            self,
            EvolutionPattern::PreStrengthened | EvolutionPattern::PostWeakened
        )
    }

    pub const ALL: [EvolutionPattern; 7] = [
        EvolutionPattern::Unchanged,
        EvolutionPattern::MinorChange,
        EvolutionPattern::PreStrengthened,
        EvolutionPattern::PreWeakened,
        EvolutionPattern::PostStrengthened,
        EvolutionPattern::PostWeakened,
        EvolutionPattern::Unclassified,
    ];
}

impl fmt::Display for EvolutionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EvolutionPattern::Unchanged => "unchanged",
            EvolutionPattern::MinorChange => "minor change",
            EvolutionPattern::PreStrengthened => "pre-conditions strengthened",
            EvolutionPattern::PreWeakened => "pre-conditions weakened",
            EvolutionPattern::PostStrengthened => "post-conditions strengthened",
            EvolutionPattern::PostWeakened => "post-conditions weakened",
            EvolutionPattern::Unclassified => "unclassified",
        };
        write!(f, "{s}")
    }
}

/// One classification entry: the record kind it stems from (absent for the
/// whole-record `Unchanged` case) and the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Option<ContractKind>,
    pub pattern: EvolutionPattern,
}

/// Paired contract sets of one method across two versions (or an override
/// pair), with its pattern classifications.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiffRecord {
    pub key: MethodKey,
    pub before: Vec<ContractRecord>,
    pub after: Vec<ContractRecord>,
    pub classifications: Vec<Classification>,
}

impl DiffRecord {
    pub fn is_critical(&self) -> bool {
        self.classifications.iter().any(|c| c.pattern.is_critical())
    }
}

/// Methods of one snapshot with their associated contracts.
pub type MethodContracts = BTreeMap<MethodKey, Vec<ContractRecord>>;

/// Match methods across two snapshots by exact key; file paths play no part,
/// classes may move freely.
pub fn match_methods(v1: &MethodContracts, v2: &MethodContracts) -> Vec<(MethodKey, Presence)> {
    let mut out = Vec::new();
    for key in v1.keys() {
        if v2.contains_key(key) {
            out.push((key.clone(), Presence::Both));
        } else {
            out.push((key.clone(), Presence::OnlyV1));
        }
    }
    for key in v2.keys() {
        if !v1.contains_key(key) {
            out.push((key.clone(), Presence::OnlyV2));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Walk every contract of both versions, guarding against double counting
/// with a per-contract unique index. A contract in v1 opens a diff record
/// holding both versions' contract sets for its method; a v2 contract whose
/// method had no v1 contracts opens a record with an empty before side; a v2
/// contract whose method already had v1 contracts is covered by the v1-driven
/// record and contributes nothing new.
pub fn build_diff_records(v1: &MethodContracts, v2: &MethodContracts) -> Vec<DiffRecord> {
    let mut seen: BTreeSet<(bool, String, u32, String, Option<usize>)> = BTreeSet::new();
    let mut out = Vec::new();
    let empty: Vec<ContractRecord> = Vec::new();

    let visit =
        |records: &[ContractRecord], key: &MethodKey, first_version: bool, out: &mut Vec<DiffRecord>,
         seen: &mut BTreeSet<(bool, String, u32, String, Option<usize>)>| {
            for r in records {
                let index = unique_index(first_version, r);
                if seen.contains(&index) {
                    continue;
                }
                let before = v1.get(key).unwrap_or(&empty);
                let after = v2.get(key).unwrap_or(&empty);
                if !first_version {
                    // covered by the v1-driven record for this method
                    if !before.is_empty() {
                        continue;
                    }
                }
                for b in before {
                    seen.insert(unique_index(true, b));
                }
                for a in after {
                    seen.insert(unique_index(false, a));
                }
                let classifications = classify_diff(before, after);
                out.push(DiffRecord {
                    key: key.clone(),
                    before: before.clone(),
                    after: after.clone(),
                    classifications,
                });
            }
        };

    for (key, records) in v1 {
        visit(records, key, true, &mut out, &mut seen);
    }
    for (key, records) in v2 {
        visit(records, key, false, &mut out, &mut seen);
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out
}

fn unique_index(
    first_version: bool,
    r: &ContractRecord,
) -> (bool, String, u32, String, Option<usize>) {
    (
        first_version,
        r.file_path.clone(),
        r.line,
        r.construct_id.clone(),
        r.parameter_index,
    )
}

/// Multiset entry a contract occurrence is compared by.
type EntryKey = (String, Option<usize>);

fn entries_of(records: &[ContractRecord], kind: ContractKind) -> BTreeMap<EntryKey, Vec<String>> {
    let mut map: BTreeMap<EntryKey, Vec<String>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.kind == kind) {
        map.entry((r.construct_id.clone(), r.parameter_index))
            .or_default()
            .push(normalize_ws(&r.condition_text));
    }
    for conditions in map.values_mut() {
        conditions.sort();
    }
    map
}

/// Classify one diff record. Identical multisets across all kinds yield the
/// single classification `Unchanged`.
pub fn classify_diff(before: &[ContractRecord], after: &[ContractRecord]) -> Vec<Classification> {
    let kinds = [
        ContractKind::Pre,
        ContractKind::Post,
        ContractKind::Invariant,
        ContractKind::Unclassified,
    ];
    let mut changed_any = false;
    let mut out: BTreeSet<Classification> = BTreeSet::new();

    for kind in kinds {
        let b = entries_of(before, kind);
        let a = entries_of(after, kind);
        if b == a {
            continue;
        }
        changed_any = true;
        match kind {
            ContractKind::Pre | ContractKind::Post => {
                for pattern in classify_kind_change(&b, &a, kind) {
                    out.insert(Classification {
                        kind: Some(kind),
                        pattern,
                    });
                }
            }
            // polarity is undefined for these kinds
            ContractKind::Invariant | ContractKind::Unclassified => {
                out.insert(Classification {
                    kind: Some(kind),
                    pattern: EvolutionPattern::Unclassified,
                });
            }
        }
    }

    if !changed_any {
        return vec![Classification {
            kind: None,
            pattern: EvolutionPattern::Unchanged,
        }];
    }
    if out.is_empty() {
        out.insert(Classification {
            kind: None,
            pattern: EvolutionPattern::Unclassified,
        });
    }
    out.into_iter().collect()
}

fn strengthened(kind: ContractKind) -> EvolutionPattern {
    match kind {
        ContractKind::Pre => EvolutionPattern::PreStrengthened,
        _ => EvolutionPattern::PostStrengthened,
    }
}

fn weakened(kind: ContractKind) -> EvolutionPattern {
    match kind {
        ContractKind::Pre => EvolutionPattern::PreWeakened,
        _ => EvolutionPattern::PostWeakened,
    }
}

fn classify_kind_change(
    before: &BTreeMap<EntryKey, Vec<String>>,
    after: &BTreeMap<EntryKey, Vec<String>>,
    kind: ContractKind,
) -> BTreeSet<EvolutionPattern> {
    let mut patterns = BTreeSet::new();
    let mut keys: BTreeSet<&EntryKey> = before.keys().collect();
    keys.extend(after.keys());

    for key in keys {
        let empty = Vec::new();
        let b_conditions = before.get(key).unwrap_or(&empty);
        let a_conditions = after.get(key).unwrap_or(&empty);
        if b_conditions == a_conditions {
            continue;
        }
        // multiset difference: drop exact matches first
        let mut b_rem = b_conditions.clone();
        let mut a_rem: Vec<String> = Vec::new();
        for c in a_conditions {
            if let Some(pos) = b_rem.iter().position(|x| x == c) {
                b_rem.remove(pos);
            } else {
                a_rem.push(c.clone());
            }
        }
        // pair the leftovers: each changed condition is either a clause
        // extension, a clause removal, or a minor change
        let mut b_used = vec![false; b_rem.len()];
        for a_cond in &a_rem {
            let mut matched = false;
            for (i, b_cond) in b_rem.iter().enumerate() {
                if b_used[i] {
                    continue;
                }
                if let Some(p) = condition_change_pattern(b_cond, a_cond, kind) {
                    patterns.insert(p);
                    b_used[i] = true;
                    matched = true;
                    break;
                }
            }
            if !matched {
                // prefer pairing as a minor change over counting both an
                // addition and a removal when a partner is available
                if let Some(i) = b_used.iter().position(|u| !u) {
                    b_used[i] = true;
                    patterns.insert(EvolutionPattern::MinorChange);
                } else {
                    patterns.insert(strengthened(kind));
                }
            }
        }
        for (i, _) in b_rem.iter().enumerate() {
            if !b_used[i] {
                patterns.insert(weakened(kind));
            }
        }
    }
    patterns
}

/// Pattern for a persisting construct whose condition text changed, when the
/// change is a pure top-level clause extension or removal.
fn condition_change_pattern(
    old: &str,
    new: &str,
    kind: ContractKind,
) -> Option<EvolutionPattern> {
    if is_clause_extension(old, new, '&') {
        return Some(strengthened(kind));
    }
    if is_clause_extension(old, new, '|') {
        return Some(weakened(kind));
    }
    if is_clause_extension(new, old, '&') {
        return Some(weakened(kind));
    }
    if is_clause_extension(new, old, '|') {
        return Some(strengthened(kind));
    }
    None
}

/// True when `new` equals `old` extended by one or more top-level clauses
/// joined with the given operator (single or doubled), comparing clause
/// multisets after normalization.
fn is_clause_extension(old: &str, new: &str, op: char) -> bool {
    let old_clauses = top_level_clauses(old, op);
    let new_clauses = top_level_clauses(new, op);
    if new_clauses.len() <= old_clauses.len() {
        return false;
    }
    let mut remaining = new_clauses;
    for c in &old_clauses {
        match remaining.iter().position(|x| x == c) {
            Some(pos) => {
                remaining.remove(pos);
            }
            None => return false,
        }
    }
    true
}

/// Top-level clauses for the given operator. The opposite operator binds the
/// expression into a single clause: `a || b` has one '&'-clause. Splitting
/// skips parentheses and string literals; clauses are normalized by trimming
/// redundant outer parentheses and whitespace.
fn top_level_clauses(expr: &str, op: char) -> Vec<String> {
    let normalized = normalize_ws(expr);
    let trimmed = strip_outer_parens(&normalized);
    let opposite = if op == '&' { '|' } else { '&' };
    if split_top_level(trimmed, opposite).len() > 1 {
        return vec![normalize_clause(trimmed)];
    }
    split_top_level(trimmed, op)
        .into_iter()
        .map(|c| normalize_clause(&c))
        .collect()
}

fn normalize_clause(c: &str) -> String {
    normalize_ws(strip_outer_parens(&normalize_ws(c)))
}

/// Tally of classifications across a set of diff records, shaped like the
/// published evolution table.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PatternCounts(pub BTreeMap<EvolutionPattern, u64>);

impl PatternCounts {
    pub fn tally(records: &[DiffRecord]) -> PatternCounts {
        let mut counts = BTreeMap::new();
        for p in EvolutionPattern::ALL {
            counts.insert(p, 0);
        }
        for r in records {
            for c in &r.classifications {
                *counts.entry(c.pattern).or_insert(0) += 1;
            }
        }
        PatternCounts(counts)
    }

    pub fn get(&self, p: EvolutionPattern) -> u64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn critical_total(&self) -> u64 {
        self.get(EvolutionPattern::PreStrengthened) + self.get(EvolutionPattern::PostWeakened)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Category;
    use crate::detect::ArtifactKind;

    fn key(name: &str) -> MethodKey {
        MethodKey {
            owner_class: "com.app.A".into(),
            member_name: name.into(),
            parameter_type_texts: vec!["String".into()],
            member_kind: MemberKind::Method,
        }
    }

    fn record(construct: &str, kind: ContractKind, cond: &str, line: u32) -> ContractRecord {
        ContractRecord {
            file_path: "A.java".into(),
            construct_id: construct.into(),
            category: Category::Cre,
            kind,
            condition_text: cond.into(),
            artifact_name: "f".into(),
            artifact_kind: ArtifactKind::Method,
            owner_class: "com.app.A".into(),
            parameter_index: None,
            line,
        }
    }

    #[test]
    fn match_methods_cases() {
        let mut v1 = MethodContracts::new();
        let mut v2 = MethodContracts::new();
        v1.insert(key("same"), vec![]);
        v2.insert(key("same"), vec![]);
        v1.insert(key("gone"), vec![]);
        v2.insert(key("added"), vec![]);
        let mut overload = key("same");
        overload.parameter_type_texts = vec!["String".into(), "int".into()];
        v2.insert(overload.clone(), vec![]);

        let matched = match_methods(&v1, &v2);
        let find = |k: &MethodKey| matched.iter().find(|(mk, _)| mk == k).unwrap().1;
        assert_eq!(find(&key("same")), Presence::Both);
        assert_eq!(find(&key("gone")), Presence::OnlyV1);
        assert_eq!(find(&key("added")), Presence::OnlyV2);
        assert_eq!(find(&overload), Presence::OnlyV2);
    }

    #[test]
    fn identical_sides_classify_unchanged() {
        let r = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 5);
        let c = classify_diff(&[r.clone()], &[r]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].pattern, EvolutionPattern::Unchanged);
        assert_eq!(c[0].kind, None);
    }

    #[test]
    fn added_pre_strengthens_removed_pre_weakens() {
        let r = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 5);
        let c = classify_diff(&[], &[r.clone()]);
        assert_eq!(c[0].pattern, EvolutionPattern::PreStrengthened);
        let c = classify_diff(&[r], &[]);
        assert_eq!(c[0].pattern, EvolutionPattern::PreWeakened);
    }

    #[test]
    fn added_post_strengthens_removed_post_weakens() {
        let r = record("AndroidXNullable", ContractKind::Post, "", 3);
        let c = classify_diff(&[], &[r.clone()]);
        assert_eq!(c[0].pattern, EvolutionPattern::PostStrengthened);
        let c = classify_diff(&[r], &[]);
        assert_eq!(c[0].pattern, EvolutionPattern::PostWeakened);
    }

    #[test]
    fn conjunction_extension_strengthens() {
        let old = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 5);
        let new = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0 && y > 0", 5);
        let c = classify_diff(&[old], &[new]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].pattern, EvolutionPattern::PreStrengthened);
    }

    #[test]
    fn disjunction_extension_weakens() {
        let old = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 5);
        let new = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0 || y > 0", 5);
        let c = classify_diff(&[old], &[new]);
        assert_eq!(c[0].pattern, EvolutionPattern::PreWeakened);
    }

    #[test]
    fn single_ampersand_counts_like_double() {
        let old = record("CREIllegalStateException", ContractKind::Pre, "a", 2);
        let new = record("CREIllegalStateException", ContractKind::Pre, "a & b", 2);
        let c = classify_diff(&[old], &[new]);
        assert_eq!(c[0].pattern, EvolutionPattern::PreStrengthened);
    }

    #[test]
    fn unrelated_text_change_is_minor() {
        let old = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 5);
        let new = record("CREIllegalArgumentException", ContractKind::Pre, "y > 0", 5);
        let c = classify_diff(&[old], &[new]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].pattern, EvolutionPattern::MinorChange);
    }

    #[test]
    fn clause_logic_respects_nesting_and_strings() {
        // the added clause hides inside parentheses: not a top-level extension
        let old = record("CREIllegalArgumentException", ContractKind::Pre, "f(a) > 0", 1);
        let new = record("CREIllegalArgumentException", ContractKind::Pre, "f(a && b) > 0", 1);
        let c = classify_diff(&[old], &[new]);
        assert_eq!(c[0].pattern, EvolutionPattern::MinorChange);
    }

    #[test]
    fn mixed_operator_change_is_minor() {
        let old = record("CREIllegalArgumentException", ContractKind::Pre, "a && b", 1);
        let new = record("CREIllegalArgumentException", ContractKind::Pre, "a || c", 1);
        let c = classify_diff(&[old], &[new]);
        assert_eq!(c[0].pattern, EvolutionPattern::MinorChange);
    }

    #[test]
    fn invariant_change_is_unclassified() {
        let old = record("AndroidXColorInt", ContractKind::Invariant, "", 2);
        let c = classify_diff(&[old], &[]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].pattern, EvolutionPattern::Unclassified);
        assert_eq!(c[0].kind, Some(ContractKind::Invariant));
    }

    #[test]
    fn assertion_change_is_unclassified() {
        let old = record("KotlinRequire", ContractKind::Unclassified, "x > 0", 2);
        let new = record("KotlinRequire", ContractKind::Unclassified, "x > 1", 2);
        let c = classify_diff(&[old], &[new]);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].pattern, EvolutionPattern::Unclassified);
    }

    #[test]
    fn one_record_can_carry_both_kinds() {
        let pre_old = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 5);
        let post_new = record("AndroidXNullable", ContractKind::Post, "", 4);
        // pre persists unchanged, post added, plus a pre added
        let pre_new = record("CRENullPointerException", ContractKind::Pre, "y != null", 6);
        let c = classify_diff(
            &[pre_old.clone()],
            &[pre_old, post_new, pre_new],
        );
        let patterns: Vec<_> = c.iter().map(|x| x.pattern).collect();
        assert!(patterns.contains(&EvolutionPattern::PreStrengthened));
        assert!(patterns.contains(&EvolutionPattern::PostStrengthened));
    }

    #[test]
    fn diff_records_unique_index_prevents_double_counting() {
        // v1: contracts in A and B; v2: A unchanged, B modified, new method C
        let mut v1 = MethodContracts::new();
        let mut v2 = MethodContracts::new();
        let a1 = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 10);
        let b1 = record("CREIllegalStateException", ContractKind::Pre, "s != null", 20);
        let b2 = record("CREIllegalStateException", ContractKind::Pre, "s != null && t != null", 20);
        let c2 = record("CRENullPointerException", ContractKind::Pre, "p != null", 30);
        v1.insert(key("a"), vec![a1.clone()]);
        v1.insert(key("b"), vec![b1]);
        v2.insert(key("a"), vec![a1]);
        v2.insert(key("b"), vec![b2]);
        v2.insert(key("c"), vec![c2]);

        let diffs = build_diff_records(&v1, &v2);
        assert_eq!(diffs.len(), 3);
        let by_name = |n: &str| diffs.iter().find(|d| d.key.member_name == n).unwrap();
        assert_eq!(by_name("a").classifications[0].pattern, EvolutionPattern::Unchanged);
        assert_eq!(by_name("b").classifications[0].pattern, EvolutionPattern::PreStrengthened);
        let c = by_name("c");
        assert!(c.before.is_empty());
        assert_eq!(c.classifications[0].pattern, EvolutionPattern::PreStrengthened);

        // no contract occurrence appears in two records
        let mut seen = std::collections::HashSet::new();
        for d in &diffs {
            for (side, recs) in [(true, &d.before), (false, &d.after)] {
                for r in recs {
                    assert!(seen.insert((side, r.identity())), "{r:?} counted twice");
                }
            }
        }
    }

    #[test]
    fn v1_only_method_keeps_empty_after_side() {
        let mut v1 = MethodContracts::new();
        let v2 = MethodContracts::new();
        v1.insert(
            key("gone"),
            vec![record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 8)],
        );
        let diffs = build_diff_records(&v1, &v2);
        assert_eq!(diffs.len(), 1);
        assert!(diffs[0].after.is_empty());
        assert_eq!(diffs[0].classifications[0].pattern, EvolutionPattern::PreWeakened);
    }

    #[test]
    fn swapping_snapshots_swaps_polarity() {
        let old = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0", 5);
        let new = record("CREIllegalArgumentException", ContractKind::Pre, "x > 0 && y > 0", 5);
        let forward = classify_diff(std::slice::from_ref(&old), std::slice::from_ref(&new));
        let backward = classify_diff(std::slice::from_ref(&new), std::slice::from_ref(&old));
        assert_eq!(forward[0].pattern, EvolutionPattern::PreStrengthened);
        assert_eq!(backward[0].pattern, EvolutionPattern::PreWeakened);
    }
}
