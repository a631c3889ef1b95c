//! Record-file serialization and report rendering.
//!
//! One JSON document per project snapshot:
//! `{projectId, snapshotId, tool: {name, version, catalogHash},
//!   artifactCounts, records: [...]}` with records sorted by
//! (filePath, line, constructId, parameterIndex) and optional fields omitted.
//! Serialization is stable: serialize -> parse -> serialize is
//! byte-identical. CSV exports are comma-separated, UTF-8, `\n`-terminated,
//! with a header row.

use crate::analytics::UsageSummary;
use crate::catalog::{Catalog, Category};
use crate::detect::ContractRecord;
use crate::error::{Error, Result};
use crate::evolution::{EvolutionPattern, PatternCounts};
use crate::snapshot::Snapshot;
use crate::source_model::ArtifactCounts;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const TOOL_NAME: &str = "dbcscan";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub catalog_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SnapshotReport {
    pub project_id: String,
    pub snapshot_id: String,
    pub tool: ToolInfo,
    pub artifact_counts: ArtifactCounts,
    pub records: Vec<ContractRecord>,
}

impl SnapshotReport {
    pub fn from_snapshot(snapshot: &Snapshot, catalog: &Catalog) -> SnapshotReport {
        SnapshotReport {
            project_id: snapshot.project_id.clone(),
            snapshot_id: snapshot.snapshot_id.clone(),
            tool: ToolInfo {
                name: TOOL_NAME.to_string(),
                version: TOOL_VERSION.to_string(),
                catalog_hash: catalog.content_hash().to_string(),
            },
            artifact_counts: snapshot.artifact_counts.clone(),
            records: snapshot.records.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }

    pub fn from_json(path_for_errors: &str, content: &str) -> Result<SnapshotReport> {
        let report: SnapshotReport =
            serde_json::from_str(content).map_err(|e| Error::RecordFile {
                path: path_for_errors.to_string(),
                message: e.to_string(),
            })?;
        Ok(report)
    }

    pub fn load(path: &Path) -> Result<SnapshotReport> {
        let content =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.to_path_buf(), e))?;
        Self::from_json(&path.display().to_string(), &content)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path.to_path_buf(), e))
    }
}

/// Minimal CSV quoting: fields with commas, quotes, or newlines get wrapped.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn records_to_csv(records: &[ContractRecord]) -> String {
    let mut out = String::from(
        "filePath,constructId,category,kind,conditionText,artifactName,artifactKind,ownerClass,parameterIndex,line\n",
    );
    for r in records {
        out.push_str(&csv_line(&[
            r.file_path.clone(),
            r.construct_id.clone(),
            r.category.to_string(),
            r.kind.to_string(),
            r.condition_text.clone(),
            r.artifact_name.clone(),
            format!("{:?}", r.artifact_kind),
            r.owner_class.clone(),
            r.parameter_index.map(|i| i.to_string()).unwrap_or_default(),
            r.line.to_string(),
        ]));
        out.push('\n');
    }
    out
}

/// Usage summary tables, one CSV per table, keyed by a stable file stem.
pub fn usage_to_csv(label: &str, summary: &UsageSummary) -> Vec<(String, String)> {
    let mut files = Vec::new();

    let mut by_category = String::from("scope,category,records,applications,gini\n");
    for cat in Category::ALL {
        by_category.push_str(&csv_line(&[
            label.to_string(),
            cat.to_string(),
            summary
                .counts_by_category
                .get(&cat)
                .copied()
                .unwrap_or(0)
                .to_string(),
            summary
                .projects_with_at_least_one
                .get(&cat)
                .copied()
                .unwrap_or(0)
                .to_string(),
            format!("{:.4}", summary.gini_by_category.get(&cat).copied().unwrap_or(0.0)),
        ]));
        by_category.push('\n');
    }
    files.push((format!("usage_by_category_{label}.csv"), by_category));

    let mut by_construct = String::from("scope,constructId,records\n");
    for (construct, count) in &summary.counts_by_construct {
        by_construct.push_str(&csv_line(&[
            label.to_string(),
            construct.clone(),
            count.to_string(),
        ]));
        by_construct.push('\n');
    }
    files.push((format!("usage_by_construct_{label}.csv"), by_construct));

    let mut by_kind = String::from("scope,kind,records\n");
    for (kind, count) in &summary.counts_by_kind {
        by_kind.push_str(&csv_line(&[
            label.to_string(),
            kind.to_string(),
            count.to_string(),
        ]));
        by_kind.push('\n');
    }
    files.push((format!("usage_by_kind_{label}.csv"), by_kind));

    let mut top = String::from("scope,category,rank,projectId,records\n");
    for (cat, entries) in &summary.top_projects {
        for (rank, (project, count)) in entries.iter().enumerate() {
            top.push_str(&csv_line(&[
                label.to_string(),
                cat.to_string(),
                (rank + 1).to_string(),
                project.clone(),
                count.to_string(),
            ]));
            top.push('\n');
        }
    }
    files.push((format!("usage_top_projects_{label}.csv"), top));

    files
}

pub fn usage_table(label: &str, summary: &UsageSummary) -> String {
    let mut out = String::new();
    out.push_str(&format!("== usage ({label}) ==\n"));
    out.push_str(&format!(
        "{:<12} {:>10} {:>14} {:>8}\n",
        "category", "records", "applications", "gini"
    ));
    for cat in Category::ALL {
        out.push_str(&format!(
            "{:<12} {:>10} {:>14} {:>8.2}\n",
            cat.to_string(),
            summary.counts_by_category.get(&cat).copied().unwrap_or(0),
            summary
                .projects_with_at_least_one
                .get(&cat)
                .copied()
                .unwrap_or(0),
            summary.gini_by_category.get(&cat).copied().unwrap_or(0.0),
        ));
    }
    out.push_str(&format!(
        "{:<12} {:>10}\n",
        "total",
        summary.total_records
    ));
    out.push_str(&format!(
        "contract-to-method ratio: {:.4} ({} / {})\n",
        summary.contract_to_method_ratio, summary.total_records, summary.total_visible_artifacts
    ));
    out.push_str(&format!(
        "{:<14} {:>8}\n",
        "kind", "records"
    ));
    for (kind, count) in &summary.counts_by_kind {
        out.push_str(&format!("{:<14} {:>8}\n", kind.to_string(), count));
    }
    for (cat, entries) in &summary.top_projects {
        if entries.is_empty() {
            continue;
        }
        let list = entries
            .iter()
            .map(|(p, c)| format!("{p} ({c})"))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("top {cat}: {list}\n"));
    }
    out
}

pub fn pattern_counts_table(header: &str, counts: &PatternCounts) -> String {
    let mut out = String::new();
    out.push_str(&format!("== {header} ==\n"));
    out.push_str(&format!("{:<30} {:>8} {:>10}\n", "pattern", "count", "critical"));
    for p in EvolutionPattern::ALL {
        out.push_str(&format!(
            "{:<30} {:>8} {:>10}\n",
            p.to_string(),
            counts.get(p),
            if p.is_critical() { "yes" } else { "no" }
        ));
    }
    out
}

pub fn pattern_counts_csv(counts: &PatternCounts) -> String {
    let mut out = String::from("pattern,count,critical\n");
    for p in EvolutionPattern::ALL {
        out.push_str(&csv_line(&[
            p.to_string(),
            counts.get(p).to_string(),
            p.is_critical().to_string(),
        ]));
        out.push('\n');
    }
    out
}
