//! Aggregate statistics over detected records: counts by category, construct,
//! and kind; per-project concentration (Gini); top users; and the
//! contract-to-method ratio metrics used by the evolution reporting.

use crate::catalog::Category;
use crate::classify::ContractKind;
use crate::detect::ContractRecord;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Records of one project snapshot plus its visible method+constructor count.
pub struct ProjectRecords<'a> {
    pub project_id: &'a str,
    pub records: &'a [ContractRecord],
    pub visible_artifacts: u64,
}

#[derive(Debug, Clone, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UsageSummary {
    pub counts_by_category: BTreeMap<Category, u64>,
    pub counts_by_construct: BTreeMap<String, u64>,
    pub counts_by_kind: BTreeMap<ContractKind, u64>,
    /// Projects with at least one record, per category.
    pub projects_with_at_least_one: BTreeMap<Category, u64>,
    pub gini_by_category: BTreeMap<Category, f64>,
    /// Highest-count projects per category, count-descending.
    pub top_projects: BTreeMap<Category, Vec<(String, u64)>>,
    pub total_records: u64,
    pub total_visible_artifacts: u64,
    /// total records / visible methods+constructors
    pub contract_to_method_ratio: f64,
}

pub const DEFAULT_TOP_N: usize = 5;

pub fn summarize(projects: &[ProjectRecords<'_>]) -> UsageSummary {
    summarize_top_n(projects, DEFAULT_TOP_N)
}

pub fn summarize_top_n(projects: &[ProjectRecords<'_>], top_n: usize) -> UsageSummary {
    let mut summary = UsageSummary::default();
    // per-category per-project counts drive gini and the top lists
    let mut per_category: BTreeMap<Category, BTreeMap<String, u64>> = BTreeMap::new();
    for cat in Category::ALL {
        per_category.insert(cat, BTreeMap::new());
    }

    for p in projects {
        summary.total_visible_artifacts += p.visible_artifacts;
        for cat in Category::ALL {
            per_category
                .get_mut(&cat)
                .unwrap()
                .entry(p.project_id.to_string())
                .or_insert(0);
        }
        for r in p.records {
            summary.total_records += 1;
            *summary.counts_by_category.entry(r.category).or_insert(0) += 1;
            *summary
                .counts_by_construct
                .entry(r.construct_id.clone())
                .or_insert(0) += 1;
            *summary.counts_by_kind.entry(r.kind).or_insert(0) += 1;
            *per_category
                .get_mut(&r.category)
                .unwrap()
                .get_mut(p.project_id)
                .unwrap() += 1;
        }
    }

    for (cat, by_project) in &per_category {
        let values: Vec<u64> = by_project.values().copied().collect();
        if values.is_empty() {
            continue;
        }
        summary
            .projects_with_at_least_one
            .insert(*cat, values.iter().filter(|v| **v > 0).count() as u64);
        summary
            .gini_by_category
            .insert(*cat, gini(&values).unwrap_or(0.0));
        let mut ranked: Vec<(String, u64)> = by_project
            .iter()
            .filter(|(_, c)| **c > 0)
            .map(|(p, c)| (p.clone(), *c))
            .collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(top_n);
        summary.top_projects.insert(*cat, ranked);
    }

    summary.contract_to_method_ratio = if summary.total_visible_artifacts == 0 {
        0.0
    } else {
        summary.total_records as f64 / summary.total_visible_artifacts as f64
    };
    summary
}

/// Gini coefficient of a non-negative count distribution, in [0, 1]:
/// G = sum_ij |x_i - x_j| / (2 n sum_i x_i). Zero for all-equal inputs, and
/// approaches one as everything concentrates in a single holder. An all-zero
/// distribution is defined as 0; an empty one is a domain error.
pub fn gini(values: &[u64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let total: u64 = values.iter().sum();
    if total == 0 {
        return Ok(0.0);
    }
    // sorted form of the pairwise-difference sum:
    // sum_ij |x_i - x_j| = 2 * sum_k (2k - n + 1) x_(k), x ascending
    let mut sorted: Vec<u64> = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(k, &x)| (2.0 * k as f64 - n + 1.0) * x as f64)
        .sum();
    Ok(weighted / (n * total as f64))
}

/// One project's method/contract counts in two snapshots.
#[derive(Debug, Clone)]
pub struct RatioInput {
    pub project_id: String,
    pub v1_methods: u64,
    pub v1_contracts: u64,
    pub v2_methods: u64,
    pub v2_contracts: u64,
}

#[derive(Debug, Clone, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SnapshotRatioStats {
    pub median_methods: f64,
    pub average_methods: f64,
    pub median_contracts: f64,
    pub average_contracts: f64,
    pub median_ratio: f64,
    pub average_ratio: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RatioMetrics {
    pub v1: SnapshotRatioStats,
    pub v2: SnapshotRatioStats,
    /// median of per-project (ratio2 - ratio1)
    pub median_ratio_delta: f64,
    /// average of per-project (ratio2 - ratio1)
    pub average_ratio_delta: f64,
    /// projects whose ratio was pinned to 0 because they have no methods
    pub zero_method_projects: Vec<String>,
}

/// Median/average of methods, contracts, and their ratio per snapshot, plus
/// per-project ratio deltas. Only projects present in both snapshots belong
/// in the input. A project with zero methods gets ratio 0 and is flagged.
pub fn ratio_metrics(projects: &[RatioInput]) -> RatioMetrics {
    let mut m = RatioMetrics::default();
    if projects.is_empty() {
        return m;
    }
    let ratio = |contracts: u64, methods: u64, flagged: &mut bool| -> f64 {
        if methods == 0 {
            *flagged = true;
            0.0
        } else {
            contracts as f64 / methods as f64
        }
    };
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    let mut deltas = Vec::new();
    for p in projects {
        let mut flagged = false;
        let a = ratio(p.v1_contracts, p.v1_methods, &mut flagged);
        let b = ratio(p.v2_contracts, p.v2_methods, &mut flagged);
        if flagged {
            m.zero_method_projects.push(p.project_id.clone());
        }
        r1.push(a);
        r2.push(b);
        deltas.push(b - a);
    }
    let methods1: Vec<f64> = projects.iter().map(|p| p.v1_methods as f64).collect();
    let methods2: Vec<f64> = projects.iter().map(|p| p.v2_methods as f64).collect();
    let contracts1: Vec<f64> = projects.iter().map(|p| p.v1_contracts as f64).collect();
    let contracts2: Vec<f64> = projects.iter().map(|p| p.v2_contracts as f64).collect();

    m.v1 = SnapshotRatioStats {
        median_methods: median(&methods1),
        average_methods: mean(&methods1),
        median_contracts: median(&contracts1),
        average_contracts: mean(&contracts1),
        median_ratio: median(&r1),
        average_ratio: mean(&r1),
    };
    m.v2 = SnapshotRatioStats {
        median_methods: median(&methods2),
        average_methods: mean(&methods2),
        median_contracts: median(&contracts2),
        average_contracts: mean(&contracts2),
        median_ratio: median(&r2),
        average_ratio: mean(&r2),
    };
    m.median_ratio_delta = median(&deltas);
    m.average_ratio_delta = mean(&deltas);
    m
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Median with the arithmetic midpoint for even-sized inputs.
fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}
