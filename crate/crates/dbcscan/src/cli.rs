//! Command-line interface.
//!
//! Exit codes: 0 success, 1 fatal error, 2 partial success (some files
//! skipped or projects failed), 3 policy failure (`--fail-on-critical`).

use crate::analytics::{self, ProjectRecords, RatioInput};
use crate::catalog::Catalog;
use crate::corpus::{
    self, filter_projects, select_version_pair, CorpusManifest, FilterCriteria, ProjectEntry,
};
use crate::detect::ContractRecord;
use crate::error::{Error, Result};
use crate::evolution::{build_diff_records, PatternCounts};
use crate::inheritance;
use crate::report::{self, SnapshotReport};
use crate::snapshot::scan_dir;
use crate::source_model::Language;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FATAL: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_POLICY: i32 = 3;

#[derive(Parser)]
#[command(
    name = "dbcscan",
    version,
    about = "Detects Design-by-Contract constructs in Java/Kotlin sources and checks their evolution and inheritance safety"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    globals: GlobalArgs,
}

#[derive(Args)]
struct GlobalArgs {
    /// Extra catalog files (TSV) merged over the shipped defaults.
    #[arg(long = "catalog", global = true, value_name = "PATH")]
    catalog: Vec<PathBuf>,

    /// Worker threads for scanning/fetching.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Output directory for generated files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Scan source snapshots and write one record file per snapshot.
    Scan {
        /// Snapshot directories (or single files).
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Project id (single path only; defaults to the directory name).
        #[arg(long)]
        project: Option<String>,
        /// Snapshot id (single path only; defaults to v1 or the directory name).
        #[arg(long)]
        snapshot: Option<String>,
    },
    /// Aggregate record files into usage statistics.
    Usage {
        /// Record files produced by `scan`.
        #[arg(required = true)]
        record_files: Vec<PathBuf>,
        /// Top-N projects per category.
        #[arg(long, default_value_t = analytics::DEFAULT_TOP_N)]
        top: usize,
    },
    /// Diff the contracts of two versions of one project.
    Evolve {
        /// First (older) snapshot sources.
        v1: PathBuf,
        /// Second (newer) snapshot sources.
        v2: PathBuf,
        /// Project id; both snapshots must belong to it.
        #[arg(long)]
        project: Option<String>,
        /// Exit 3 when any critical pattern (strengthened preconditions or
        /// weakened postconditions) is found.
        #[arg(long)]
        fail_on_critical: bool,
    },
    /// Check overridden methods against the Liskov Substitution Principle.
    Lsp {
        /// Snapshot sources (scanned as one snapshot).
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Record file to cross-check against the scan.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Corpus management.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Filter a candidates list into a corpus manifest.
    Ingest {
        /// Candidates file: projectId, url, language, archived, lastCommit (TSV).
        candidates: PathBuf,
        /// Manifest file to write.
        #[arg(long)]
        manifest: PathBuf,
        /// Required hosting forge.
        #[arg(long, default_value = "github.com")]
        forge: String,
        /// Inclusive last-commit cutoff date (YYYY-MM-DD).
        #[arg(long, default_value = "2018-01-01")]
        cutoff: String,
    },
    /// Clone manifest projects and materialize stripped version snapshots.
    Fetch {
        /// Manifest written by `corpus ingest` (possibly hand-edited).
        #[arg(long)]
        manifest: PathBuf,
        /// Destination directory; snapshots land in <dest>/<project>/<vN>.
        #[arg(long)]
        dest: PathBuf,
        /// Clone cache directory (defaults to <dest>/.cache).
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FATAL
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let catalog = load_catalog(&cli.globals)?;
    match cli.command {
        Command::Scan {
            paths,
            project,
            snapshot,
        } => cmd_scan(&cli.globals, &catalog, &paths, project, snapshot),
        Command::Usage { record_files, top } => cmd_usage(&cli.globals, &record_files, top),
        Command::Evolve {
            v1,
            v2,
            project,
            fail_on_critical,
        } => cmd_evolve(&cli.globals, &catalog, &v1, &v2, project, fail_on_critical),
        Command::Lsp { paths, records } => cmd_lsp(&cli.globals, &catalog, &paths, records),
        Command::Corpus(corpus_cmd) => match corpus_cmd {
            CorpusCommand::Ingest {
                candidates,
                manifest,
                forge,
                cutoff,
            } => cmd_ingest(&candidates, &manifest, forge, cutoff),
            CorpusCommand::Fetch {
                manifest,
                dest,
                cache,
            } => cmd_fetch(&cli.globals, &manifest, &dest, cache),
        },
    }
}

fn load_catalog(globals: &GlobalArgs) -> Result<Catalog> {
    if globals.catalog.is_empty() {
        Catalog::load_default()
    } else {
        Catalog::load_extended(&globals.catalog)
    }
}

fn out_dir(globals: &GlobalArgs) -> PathBuf {
    globals.out.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn ensure_out_dir(globals: &GlobalArgs) -> Result<PathBuf> {
    let dir = out_dir(globals);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(dir.clone(), e))?;
    Ok(dir)
}

/// (project, snapshot) ids for a scanned path: explicit flags win, then a
/// `<project>/<vN>` layout, then the directory name with snapshot `v1`.
fn infer_ids(
    path: &Path,
    project: Option<&str>,
    snapshot: Option<&str>,
    multi: bool,
) -> (String, String) {
    let base = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "project".to_string());
    let parent = path
        .parent()
        .and_then(|p| p.file_name())
        .map(|s| s.to_string_lossy().into_owned());
    let looks_like_version =
        base.len() >= 2 && base.starts_with('v') && base[1..].chars().all(|c| c.is_ascii_digit());
    let (derived_project, derived_snapshot) = if looks_like_version {
        (parent.unwrap_or_else(|| base.clone()), base.clone())
    } else {
        (base, "v1".to_string())
    };
    if multi {
        (derived_project, derived_snapshot)
    } else {
        (
            project.map(String::from).unwrap_or(derived_project),
            snapshot.map(String::from).unwrap_or(derived_snapshot),
        )
    }
}

fn cmd_scan(
    globals: &GlobalArgs,
    catalog: &Catalog,
    paths: &[PathBuf],
    project: Option<String>,
    snapshot: Option<String>,
) -> Result<i32> {
    let dir = ensure_out_dir(globals)?;
    let multi = paths.len() > 1;
    let mut partial = false;
    for path in paths {
        let (project_id, snapshot_id) =
            infer_ids(path, project.as_deref(), snapshot.as_deref(), multi);
        let snap = scan_dir(path, catalog, &project_id, &snapshot_id, globals.jobs)?;
        partial |= snap.has_partial_failures();
        for d in &snap.diagnostics {
            eprintln!("warning: {}: {}", d.path, d.message);
        }
        let report = SnapshotReport::from_snapshot(&snap, catalog);
        let file = dir.join(format!("{project_id}-{snapshot_id}.json"));
        report.save(&file)?;
        match globals.format {
            Format::Csv => {
                let csv_file = dir.join(format!("{project_id}-{snapshot_id}.csv"));
                std::fs::write(&csv_file, report::records_to_csv(&snap.records))
                    .map_err(|e| Error::io(csv_file.clone(), e))?;
                println!("{}: {} records -> {}", project_id, snap.records.len(), csv_file.display());
            }
            _ => {
                println!(
                    "{}/{}: {} records, {} units -> {}",
                    project_id,
                    snapshot_id,
                    snap.records.len(),
                    snap.artifact_counts.compilation_units,
                    file.display()
                );
            }
        }
    }
    Ok(if partial { EXIT_PARTIAL } else { EXIT_OK })
}

fn language_of_record(r: &ContractRecord) -> Option<Language> {
    Language::from_path(&r.file_path)
}

fn cmd_usage(globals: &GlobalArgs, record_files: &[PathBuf], top: usize) -> Result<i32> {
    // merge snapshots per project: every loaded record file contributes its
    // records and visible-artifact count to its project
    let mut per_project: BTreeMap<String, (Vec<ContractRecord>, u64)> = BTreeMap::new();
    for path in record_files {
        let report = SnapshotReport::load(path)?;
        let entry = per_project.entry(report.project_id.clone()).or_default();
        entry.1 += report.artifact_counts.visible_artifacts();
        entry.0.extend(report.records);
    }

    let scopes: [(&str, Option<Language>); 3] = [
        ("combined", None),
        ("java", Some(Language::Java)),
        ("kotlin", Some(Language::Kotlin)),
    ];

    let mut table_out = String::new();
    let mut json_out = serde_json::Map::new();
    let dir = ensure_out_dir(globals)?;

    for (label, lang) in scopes {
        let filtered: Vec<(String, Vec<ContractRecord>, u64)> = per_project
            .iter()
            .map(|(p, (records, visible))| {
                let records: Vec<ContractRecord> = records
                    .iter()
                    .filter(|r| lang.is_none() || language_of_record(r) == lang)
                    .cloned()
                    .collect();
                // visible-artifact counts are whole-snapshot; only the
                // combined scope reports a meaningful ratio
                (p.clone(), records, if lang.is_none() { *visible } else { 0 })
            })
            .collect();
        let inputs: Vec<ProjectRecords> = filtered
            .iter()
            .map(|(p, records, visible)| ProjectRecords {
                project_id: p,
                records,
                visible_artifacts: *visible,
            })
            .collect();
        let summary = analytics::summarize_top_n(&inputs, top);
        match globals.format {
            Format::Table => table_out.push_str(&report::usage_table(label, &summary)),
            Format::Csv => {
                for (name, content) in report::usage_to_csv(label, &summary) {
                    let f = dir.join(name);
                    std::fs::write(&f, content).map_err(|e| Error::io(f.clone(), e))?;
                    println!("wrote {}", f.display());
                }
            }
            Format::Json => {
                json_out.insert(
                    label.to_string(),
                    serde_json::to_value(&summary).expect("summary serialization"),
                );
            }
        }
    }
    match globals.format {
        Format::Table => print!("{table_out}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Object(json_out)).unwrap()
        ),
        Format::Csv => {}
    }
    Ok(EXIT_OK)
}

fn cmd_evolve(
    globals: &GlobalArgs,
    catalog: &Catalog,
    v1: &Path,
    v2: &Path,
    project: Option<String>,
    fail_on_critical: bool,
) -> Result<i32> {
    let (p1, _) = infer_ids(v1, project.as_deref(), Some("v1"), false);
    let (p2, _) = infer_ids(v2, project.as_deref(), Some("v2"), false);
    if project.is_none() && p1 != p2 {
        return Err(Error::ProjectMismatch { left: p1, right: p2 });
    }
    let project_id = project.unwrap_or(p1);
    let snap1 = scan_dir(v1, catalog, &project_id, "v1", globals.jobs)?;
    let snap2 = scan_dir(v2, catalog, &project_id, "v2", globals.jobs)?;

    let diffs = build_diff_records(&snap1.methods, &snap2.methods);
    let counts = PatternCounts::tally(&diffs);
    let ratio = analytics::ratio_metrics(&[RatioInput {
        project_id: project_id.clone(),
        v1_methods: snap1.artifact_counts.visible_artifacts(),
        v1_contracts: snap1.records.len() as u64,
        v2_methods: snap2.artifact_counts.visible_artifacts(),
        v2_contracts: snap2.records.len() as u64,
    }]);

    match globals.format {
        Format::Table => {
            print!("{}", report::pattern_counts_table(
                &format!("evolution {project_id} ({} diff records)", diffs.len()),
                &counts,
            ));
            println!(
                "methods v1={} v2={}; contracts v1={} v2={}; ratio v1={:.4} v2={:.4}; delta={:+.4}",
                snap1.artifact_counts.visible_artifacts(),
                snap2.artifact_counts.visible_artifacts(),
                snap1.records.len(),
                snap2.records.len(),
                ratio.v1.average_ratio,
                ratio.v2.average_ratio,
                ratio.average_ratio_delta,
            );
        }
        Format::Csv => {
            let dir = ensure_out_dir(globals)?;
            let f = dir.join(format!("evolution_{project_id}.csv"));
            std::fs::write(&f, report::pattern_counts_csv(&counts))
                .map_err(|e| Error::io(f.clone(), e))?;
            println!("wrote {}", f.display());
        }
        Format::Json => {
            let doc = serde_json::json!({
                "projectId": project_id,
                "diffRecords": diffs,
                "patternCounts": counts,
                "ratioMetrics": ratio,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }

    if fail_on_critical && counts.critical_total() > 0 {
        return Ok(EXIT_POLICY);
    }
    let partial = snap1.has_partial_failures() || snap2.has_partial_failures();
    Ok(if partial { EXIT_PARTIAL } else { EXIT_OK })
}

fn cmd_lsp(
    globals: &GlobalArgs,
    catalog: &Catalog,
    paths: &[PathBuf],
    records: Option<PathBuf>,
) -> Result<i32> {
    // several roots scan as one snapshot
    let mut units = Vec::new();
    let mut diagnostics = Vec::new();
    let (project_id, snapshot_id) = infer_ids(&paths[0], None, None, false);
    for path in paths {
        let snap = scan_dir(path, catalog, &project_id, &snapshot_id, globals.jobs)?;
        units.extend(snap.units);
        diagnostics.extend(snap.diagnostics);
    }
    let snap = crate::snapshot::build_snapshot(units, catalog, &project_id, &snapshot_id, diagnostics);

    if let Some(records_path) = records {
        let expected = SnapshotReport::load(&records_path)?;
        if expected.records != snap.records {
            return Err(Error::RecordFile {
                path: records_path.display().to_string(),
                message: format!(
                    "record file does not match scanned sources ({} vs {} records)",
                    expected.records.len(),
                    snap.records.len()
                ),
            });
        }
    }

    let analysis = inheritance::analyze(&snap);
    let counts = PatternCounts::tally(&analysis.diff_records());

    match globals.format {
        Format::Table => {
            print!("{}", report::pattern_counts_table(
                &format!(
                    "lsp {project_id} ({} override pairs, {} with contracts, {} unresolved edges)",
                    analysis.pairs_inspected,
                    analysis.pairs.len(),
                    analysis.unresolved_edges
                ),
                &counts,
            ));
            for v in analysis.violations() {
                println!(
                    "violation: {} at {}:{} overriding {} at {}:{} [{}]",
                    v.sub_method,
                    v.sub_location.0,
                    v.sub_location.1,
                    v.super_method,
                    v.super_location.0,
                    v.super_location.1,
                    v.diff
                        .classifications
                        .iter()
                        .filter(|c| c.pattern.is_critical())
                        .map(|c| c.pattern.to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                );
            }
        }
        Format::Csv => {
            let dir = ensure_out_dir(globals)?;
            let f = dir.join(format!("lsp_{project_id}.csv"));
            std::fs::write(&f, report::pattern_counts_csv(&counts))
                .map_err(|e| Error::io(f.clone(), e))?;
            println!("wrote {}", f.display());
        }
        Format::Json => {
            let doc = serde_json::json!({
                "projectId": project_id,
                "pairs": analysis.pairs,
                "patternCounts": counts,
                "unresolvedEdges": analysis.unresolved_edges,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(if snap.has_partial_failures() {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    })
}

fn cmd_ingest(candidates: &Path, manifest: &Path, forge: String, cutoff: String) -> Result<i32> {
    let cands = corpus::read_candidates(candidates)?;
    let criteria = FilterCriteria {
        forge_host: forge,
        cutoff_date: cutoff,
    };
    let (kept, diagnostics) = filter_projects(&cands, &criteria);
    for d in &diagnostics {
        eprintln!("{}: {}", d.path, d.message);
    }
    let out = CorpusManifest {
        projects: kept
            .into_iter()
            .map(|c| ProjectEntry {
                project_id: c.project_id,
                source_url: c.url,
                language: c.language.expect("filtered candidates carry a language"),
                version1_ref: None,
                version2_ref: None,
                local_path: None,
            })
            .collect(),
    };
    out.save(manifest)?;
    println!(
        "{} of {} candidates retained -> {}",
        out.projects.len(),
        cands.len(),
        manifest.display()
    );
    Ok(EXIT_OK)
}

fn cmd_fetch(
    globals: &GlobalArgs,
    manifest_path: &Path,
    dest: &Path,
    cache: Option<PathBuf>,
) -> Result<i32> {
    let manifest = CorpusManifest::load(manifest_path)?;
    let cache_dir = cache.unwrap_or_else(|| dest.join(".cache"));
    std::fs::create_dir_all(dest).map_err(|e| Error::io(dest.to_path_buf(), e))?;

    let fetch_one = |entry: &ProjectEntry| -> Result<String> {
        if entry.local_path.is_some() {
            let out = dest.join(&entry.project_id).join("v1");
            let stats = corpus::materialize_snapshot(entry, None, &cache_dir, &out)?;
            return Ok(format!(
                "{} local: kept {} files, removed {}",
                entry.project_id, stats.files_kept, stats.files_removed
            ));
        }
        let repo = corpus::ensure_clone(&entry.source_url, &entry.project_id, &cache_dir)?;
        let (v1, v2, ambiguous) = match (&entry.version1_ref, &entry.version2_ref) {
            (Some(a), b) => (a.clone(), b.clone(), false),
            _ => {
                let refs = corpus::list_refs(&repo)?;
                let pair = select_version_pair(&refs)?;
                (pair.v1, pair.v2, pair.ambiguous_order)
            }
        };
        corpus::materialize_snapshot(entry, Some(&v1), &cache_dir, &dest.join(&entry.project_id).join("v1"))?;
        if let Some(v2ref) = &v2 {
            corpus::materialize_snapshot(
                entry,
                Some(v2ref),
                &cache_dir,
                &dest.join(&entry.project_id).join("v2"),
            )?;
        }
        Ok(format!(
            "{} v1={} v2={}{}",
            entry.project_id,
            v1,
            v2.as_deref().unwrap_or("-"),
            if ambiguous {
                " (ambiguous ref order; override in the manifest if wrong)"
            } else {
                ""
            }
        ))
    };

    let results: Vec<(String, Result<String>)> = {
        use rayon::prelude::*;
        let run = || {
            manifest
                .projects
                .par_iter()
                .map(|p| (p.project_id.clone(), fetch_one(p)))
                .collect()
        };
        match globals.jobs {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?
                .install(run),
            None => run(),
        }
    };

    let mut failures = 0;
    for (project, result) in results {
        match result {
            Ok(line) => println!("{line}"),
            Err(e) => {
                failures += 1;
                eprintln!("{project} failed: {e}");
            }
        }
    }
    Ok(if failures > 0 { EXIT_PARTIAL } else { EXIT_OK })
}
