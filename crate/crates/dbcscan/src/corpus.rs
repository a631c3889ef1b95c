//! Corpus construction: candidate filtering, version-pair selection, and
//! snapshot materialization (checkout plus stripping to Java/Kotlin files).
//!
//! Version-control access goes through the installed `git` client as a
//! subprocess, clone/checkout only. A fully offline mode accepts existing
//! directories as snapshots.

use crate::error::{Error, Result};
use crate::snapshot::Diagnostic;
use crate::source_model::Language;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectLanguage {
    Java,
    Kotlin,
    Mixed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectEntry {
    pub project_id: String,
    pub source_url: String,
    pub language: ProjectLanguage,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version1_ref: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version2_ref: Option<String>,
    /// Offline mode: an existing directory used as the snapshot source.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_path: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusManifest {
    pub projects: Vec<ProjectEntry>,
}

impl CorpusManifest {
    pub fn load(path: &Path) -> Result<CorpusManifest> {
        let content =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.to_path_buf(), e))?;
        let manifest: CorpusManifest =
            serde_json::from_str(&content).map_err(|e| Error::Manifest {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        let mut seen = std::collections::HashSet::new();
        for p in &manifest.projects {
            if !seen.insert(&p.project_id) {
                return Err(Error::Manifest {
                    path: path.display().to_string(),
                    message: format!("duplicate project id `{}`", p.project_id),
                });
            }
        }
        Ok(manifest)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut json = serde_json::to_string_pretty(self).expect("manifest serialization");
        json.push('\n');
        std::fs::write(path, json).map_err(|e| Error::io(path.to_path_buf(), e))
    }
}

/// One ingest candidate, as read from the line-oriented candidates file:
/// `projectId<TAB>url<TAB>language<TAB>archived<TAB>lastCommitDate`.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub project_id: String,
    pub url: String,
    pub language: Option<ProjectLanguage>,
    pub archived: Option<bool>,
    /// ISO date (YYYY-MM-DD).
    pub last_commit: Option<String>,
}

pub fn read_candidates(path: &Path) -> Result<Vec<Candidate>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path.to_path_buf(), e))?;
    let mut out = Vec::new();
    for (lineno, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 {
            return Err(Error::Manifest {
                path: path.display().to_string(),
                message: format!("line {}: need at least projectId and url", lineno + 1),
            });
        }
        let language = fields.get(2).and_then(|s| match *s {
            "Java" => Some(ProjectLanguage::Java),
            "Kotlin" => Some(ProjectLanguage::Kotlin),
            "Mixed" => Some(ProjectLanguage::Mixed),
            _ => None,
        });
        let archived = fields.get(3).and_then(|s| match *s {
            "true" => Some(true),
            "false" => Some(false),
            _ => None,
        });
        let last_commit = fields
            .get(4)
            .filter(|s| is_iso_date(s))
            .map(|s| s.to_string());
        out.push(Candidate {
            project_id: fields[0].to_string(),
            url: fields[1].to_string(),
            language,
            archived,
            last_commit,
        });
    }
    Ok(out)
}

fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter()
            .enumerate()
            .all(|(i, c)| (i == 4 || i == 7) || c.is_ascii_digit())
}

#[derive(Debug, Clone)]
pub struct FilterCriteria {
    /// Hosting forge the source must live on.
    pub forge_host: String,
    /// Inclusive last-commit cutoff, ISO date.
    pub cutoff_date: String,
}

impl Default for FilterCriteria {
    fn default() -> Self {
        FilterCriteria {
            forge_host: "github.com".to_string(),
            cutoff_date: "2018-01-01".to_string(),
        }
    }
}

/// Apply the four inclusion criteria: hosted on the forge, Java/Kotlin, not
/// archived, active on or after the cutoff. Candidates missing metadata are
/// excluded with a diagnostic. Output order follows the input.
pub fn filter_projects(
    candidates: &[Candidate],
    criteria: &FilterCriteria,
) -> (Vec<Candidate>, Vec<Diagnostic>) {
    let mut kept = Vec::new();
    let mut diagnostics = Vec::new();
    for c in candidates {
        let exclude = |why: &str, diagnostics: &mut Vec<Diagnostic>| {
            diagnostics.push(Diagnostic {
                path: c.project_id.clone(),
                message: why.to_string(),
            });
        };
        match url_host(&c.url) {
            Some(host) if host == criteria.forge_host => {}
            Some(_) => {
                exclude("excluded: not hosted on the configured forge", &mut diagnostics);
                continue;
            }
            None => {
                exclude("excluded: unparseable url", &mut diagnostics);
                continue;
            }
        }
        if c.language.is_none() {
            exclude("excluded: missing or unsupported language tag", &mut diagnostics);
            continue;
        }
        match c.archived {
            Some(false) => {}
            Some(true) => {
                exclude("excluded: archived", &mut diagnostics);
                continue;
            }
            None => {
                exclude("excluded: missing archived flag", &mut diagnostics);
                continue;
            }
        }
        match &c.last_commit {
            Some(date) if date.as_str() >= criteria.cutoff_date.as_str() => {}
            Some(_) => {
                exclude("excluded: inactive since before the cutoff", &mut diagnostics);
                continue;
            }
            None => {
                exclude("excluded: missing last-commit date", &mut diagnostics);
                continue;
            }
        }
        kept.push(c.clone());
    }
    (kept, diagnostics)
}

fn url_host(url: &str) -> Option<String> {
    let after_scheme = url.split("://").nth(1).unwrap_or(url);
    let host = after_scheme.split('/').next()?;
    let host = host.split('@').next_back()?;
    let host = host.split(':').next()?;
    if host.is_empty() {
        None
    } else {
        Some(host.to_string())
    }
}

/// A version reference with its creation timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefInfo {
    pub name: String,
    pub timestamp: i64,
}

#[derive(Debug, Clone, Default)]
pub struct RefSets {
    pub releases: Vec<RefInfo>,
    pub tags: Vec<RefInfo>,
    pub head: Option<RefInfo>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionPair {
    pub v1: String,
    pub v2: Option<String>,
    /// Refs whose ordering needed the version-string fallback; surfaced for
    /// manual manifest overrides.
    pub ambiguous_order: bool,
}

/// Three-level fallback: oldest+newest release, else oldest+newest tag, else
/// the most recent commit alone (such projects skip the evolution study).
pub fn select_version_pair(refs: &RefSets) -> Result<VersionPair> {
    for pool in [&refs.releases, &refs.tags] {
        if pool.len() >= 2 {
            let (sorted, ambiguous) = sort_refs(pool);
            return Ok(VersionPair {
                v1: sorted.first().unwrap().name.clone(),
                v2: Some(sorted.last().unwrap().name.clone()),
                ambiguous_order: ambiguous,
            });
        }
    }
    match &refs.head {
        Some(head) => Ok(VersionPair {
            v1: head.name.clone(),
            v2: None,
            ambiguous_order: false,
        }),
        None => Err(Error::Invalid("no releases, tags, or head commit".into())),
    }
}

/// Creation-timestamp order with a natural version-string sort breaking ties.
fn sort_refs(refs: &[RefInfo]) -> (Vec<RefInfo>, bool) {
    let mut sorted = refs.to_vec();
    let mut ambiguous = false;
    sorted.sort_by(|a, b| {
        a.timestamp.cmp(&b.timestamp).then_with(|| {
            ambiguous = true;
            natural_cmp(&a.name, &b.name)
        })
    });
    // a tie between first/last candidates is what actually matters
    let tie_at_ends = sorted.len() >= 2
        && (sorted[0].timestamp == sorted[1].timestamp
            || sorted[sorted.len() - 1].timestamp == sorted[sorted.len() - 2].timestamp);
    (sorted, ambiguous && tie_at_ends)
}

/// Digit runs compare numerically, the rest byte-wise: v1.9 < v1.10.
fn natural_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    let mut ai = a.chars().peekable();
    let mut bi = b.chars().peekable();
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return std::cmp::Ordering::Equal,
            (None, Some(_)) => return std::cmp::Ordering::Less,
            (Some(_), None) => return std::cmp::Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let mut na = 0u64;
                while let Some(c) = ai.peek().copied().filter(|c| c.is_ascii_digit()) {
                    na = na.saturating_mul(10).saturating_add(c as u64 - '0' as u64);
                    ai.next();
                }
                let mut nb = 0u64;
                while let Some(c) = bi.peek().copied().filter(|c| c.is_ascii_digit()) {
                    nb = nb.saturating_mul(10).saturating_add(c as u64 - '0' as u64);
                    bi.next();
                }
                if na != nb {
                    return na.cmp(&nb);
                }
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(&y);
                }
                ai.next();
                bi.next();
            }
        }
    }
}

pub struct MaterializeStats {
    pub files_kept: usize,
    pub files_removed: usize,
}

/// Materialize one snapshot into `dest`: local copy or git checkout at
/// `version_ref`, keeping only `.java`/`.kt`/`.kts` files. Idempotent: the
/// destination is rebuilt from scratch on every call.
pub fn materialize_snapshot(
    entry: &ProjectEntry,
    version_ref: Option<&str>,
    cache_dir: &Path,
    dest: &Path,
) -> Result<MaterializeStats> {
    if dest.exists() {
        std::fs::remove_dir_all(dest).map_err(|e| Error::io(dest.to_path_buf(), e))?;
    }
    std::fs::create_dir_all(dest).map_err(|e| Error::io(dest.to_path_buf(), e))?;

    match &entry.local_path {
        Some(local) => copy_stripped(Path::new(local), dest),
        None => {
            let repo = ensure_clone(&entry.source_url, &entry.project_id, cache_dir)?;
            let reference = version_ref
                .map(String::from)
                .or_else(|| entry.version1_ref.clone())
                .unwrap_or_else(|| "HEAD".to_string());
            export_tree(&repo, &reference, dest)?;
            strip_in_place(dest)
        }
    }
}

/// Clone (or reuse) a cached repository for the project.
pub fn ensure_clone(url: &str, project_id: &str, cache_dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(cache_dir).map_err(|e| Error::io(cache_dir.to_path_buf(), e))?;
    let repo = cache_dir.join(project_id);
    if repo.join(".git").exists() || repo.join("HEAD").exists() {
        return Ok(repo);
    }
    let output = Command::new("git")
        .args(["clone", "--quiet", url])
        .arg(&repo)
        .output()
        .map_err(|e| Error::Git {
            repo: url.to_string(),
            detail: format!("failed to run git: {e}"),
        })?;
    if !output.status.success() {
        return Err(Error::Git {
            repo: url.to_string(),
            detail: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    Ok(repo)
}

/// Tags of a cached repository with creation timestamps, plus the head.
pub fn list_refs(repo: &Path) -> Result<RefSets> {
    let tags_out = git(repo, &[
        "for-each-ref",
        "refs/tags",
        "--format=%(creatordate:unix)\t%(refname:short)",
    ])?;
    let mut tags = Vec::new();
    for line in tags_out.lines() {
        let mut parts = line.splitn(2, '\t');
        let ts: i64 = parts.next().unwrap_or("0").trim().parse().unwrap_or(0);
        if let Some(name) = parts.next() {
            tags.push(RefInfo {
                name: name.to_string(),
                timestamp: ts,
            });
        }
    }
    let head_hash = git(repo, &["rev-parse", "HEAD"])?.trim().to_string();
    let head_time: i64 = git(repo, &["log", "-1", "--format=%ct"])?
        .trim()
        .parse()
        .unwrap_or(0);
    Ok(RefSets {
        releases: Vec::new(),
        tags,
        head: Some(RefInfo {
            name: head_hash,
            timestamp: head_time,
        }),
    })
}

fn git(repo: &Path, args: &[&str]) -> Result<String> {
    let output = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(args)
        .output()
        .map_err(|e| Error::Git {
            repo: repo.display().to_string(),
            detail: format!("failed to run git: {e}"),
        })?;
    if !output.status.success() {
        return Err(Error::Git {
            repo: repo.display().to_string(),
            detail: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }
    Ok(String::from_utf8_lossy(&output.stdout).into_owned())
}

fn export_tree(repo: &Path, reference: &str, dest: &Path) -> Result<()> {
    let archive = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(["archive", "--format=tar", reference])
        .output()
        .map_err(|e| Error::Git {
            repo: repo.display().to_string(),
            detail: format!("failed to run git archive: {e}"),
        })?;
    if !archive.status.success() {
        return Err(Error::Git {
            repo: repo.display().to_string(),
            detail: String::from_utf8_lossy(&archive.stderr).trim().to_string(),
        });
    }
    let mut tar = Command::new("tar")
        .arg("-x")
        .arg("-C")
        .arg(dest)
        .stdin(std::process::Stdio::piped())
        .spawn()
        .map_err(|e| Error::Git {
            repo: repo.display().to_string(),
            detail: format!("failed to run tar: {e}"),
        })?;
    use std::io::Write;
    tar.stdin
        .as_mut()
        .expect("piped stdin")
        .write_all(&archive.stdout)
        .map_err(|e| Error::io(dest.to_path_buf(), e))?;
    let status = tar.wait().map_err(|e| Error::io(dest.to_path_buf(), e))?;
    if !status.success() {
        return Err(Error::Git {
            repo: repo.display().to_string(),
            detail: "tar extraction failed".to_string(),
        });
    }
    Ok(())
}

/// Copy only Java/Kotlin files, preserving relative paths.
fn copy_stripped(src: &Path, dest: &Path) -> Result<MaterializeStats> {
    let mut stats = MaterializeStats {
        files_kept: 0,
        files_removed: 0,
    };
    for entry in walkdir::WalkDir::new(src).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::Invalid(format!("walk {}: {e}", src.display())))?;
        if !entry.file_type().is_file() {
            continue;
        }
        let path = entry.path();
        if Language::from_path(&path.to_string_lossy()).is_none() {
            stats.files_removed += 1;
            continue;
        }
        let rel = path.strip_prefix(src).unwrap_or(path);
        let target = dest.join(rel);
        if let Some(parent) = target.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent.to_path_buf(), e))?;
        }
        std::fs::copy(path, &target).map_err(|e| Error::io(target.clone(), e))?;
        stats.files_kept += 1;
    }
    Ok(stats)
}

/// Remove every non-Java/Kotlin file under `dest`, then empty directories.
fn strip_in_place(dest: &Path) -> Result<MaterializeStats> {
    let mut stats = MaterializeStats {
        files_kept: 0,
        files_removed: 0,
    };
    let mut dirs = Vec::new();
    for entry in walkdir::WalkDir::new(dest).contents_first(true) {
        let entry = entry.map_err(|e| Error::Invalid(format!("walk {}: {e}", dest.display())))?;
        let path = entry.path();
        if entry.file_type().is_dir() {
            dirs.push(path.to_path_buf());
            continue;
        }
        if Language::from_path(&path.to_string_lossy()).is_some() {
            stats.files_kept += 1;
        } else {
            std::fs::remove_file(path).map_err(|e| Error::io(path.to_path_buf(), e))?;
            stats.files_removed += 1;
        }
    }
    for dir in dirs {
        // contents-first order makes empty-directory removal safe
        let _ = std::fs::remove_dir(&dir);
    }
    Ok(stats)
}
