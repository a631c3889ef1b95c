//! Data-driven registry of the contract constructs.
//!
//! The default catalog ships as line-oriented TSV files compiled into the
//! binary; users extend it at runtime with files in the same format, so new
//! constructs never require a rebuild. Matchers are category-specific:
//! exception simple names for CREs, package+class+method for APIs, function
//! names for assertions, package+simple-name for annotations, and a pattern
//! tag for DSL-shaped constructs.

use crate::error::{Error, Result};
use crate::source_model::Language;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

const DEFAULT_FILES: &[(&str, &str)] = &[
    ("data/cre.tsv", include_str!("../data/cre.tsv")),
    ("data/api.tsv", include_str!("../data/api.tsv")),
    ("data/assertions.tsv", include_str!("../data/assertions.tsv")),
    ("data/annotations.tsv", include_str!("../data/annotations.tsv")),
    ("data/other.tsv", include_str!("../data/other.tsv")),
];

/// Names an assertion call is known by in Kotlin sources.
pub const KOTLIN_ASSERTION_NAMES: &[&str] =
    &["assert", "require", "requireNotNull", "check", "checkNotNull"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    #[serde(rename = "CRE")]
    Cre,
    #[serde(rename = "API")]
    Api,
    Assertion,
    Annotation,
    Other,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Cre,
        Category::Api,
        Category::Assertion,
        Category::Annotation,
        Category::Other,
    ];

    pub fn parse(s: &str) -> Option<Category> {
        match s {
            "CRE" => Some(Category::Cre),
            "API" => Some(Category::Api),
            "Assertion" => Some(Category::Assertion),
            "Annotation" => Some(Category::Annotation),
            "Other" => Some(Category::Other),
            _ => None,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::Cre => "CRE",
            Category::Api => "API",
            Category::Assertion => "Assertion",
            Category::Annotation => "Annotation",
            Category::Other => "Other",
        };
        write!(f, "{s}")
    }
}

/// Default contract kind a construct resolves to before site rules apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefaultKind {
    Pre,
    Post,
    Invariant,
    Unclassified,
    SiteDependent,
}

/// Category-specific match data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matcher {
    /// Thrown exception simple name.
    ExceptionName(String),
    /// API package, class simple name, and method.
    ApiMethod {
        package: String,
        class: String,
        method: String,
    },
    /// Assertion function name (or the `assert` statement for Java).
    AssertionName(String),
    /// Annotation package prefix and simple name.
    Annotation { package: String, name: String },
    /// Structural DSL pattern tag.
    PatternTag(String),
}

#[derive(Debug, Clone)]
pub struct ConstructSpec {
    pub id: String,
    pub category: Category,
    pub matcher: Matcher,
    pub languages: Vec<Language>,
}

impl ConstructSpec {
    pub fn default_kind(&self) -> DefaultKind {
        match self.category {
            Category::Cre | Category::Api => DefaultKind::Pre,
            Category::Assertion | Category::Other => DefaultKind::Unclassified,
            Category::Annotation => DefaultKind::SiteDependent,
        }
    }
}

/// One API family: every cataloged method of one package+class.
#[derive(Debug, Clone, Default)]
pub struct ApiFamily {
    pub package: String,
    pub class: String,
    /// method name -> construct id
    pub methods: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub specs: Vec<ConstructSpec>,
    cre_by_name: HashMap<String, String>,
    api_families: Vec<ApiFamily>,
    /// (language, function name) -> construct id
    assertion_ids: HashMap<(Language, String), String>,
    /// package -> simple name -> construct id, in shipped file order
    annotation_packages: Vec<(String, BTreeMap<String, String>)>,
    /// sha-256 over the loaded entries, for record-file provenance
    content_hash: String,
}

impl Catalog {
    /// Load the shipped default catalog. The data files mirror the published
    /// construct lists; counts per category are fixed and checked by tests.
    pub fn load_default() -> Result<Catalog> {
        let mut builder = CatalogBuilder::default();
        for (name, content) in DEFAULT_FILES {
            builder.add_file(name, content)?;
        }
        Ok(builder.finish())
    }

    /// Default catalog merged with user extension files (same TSV format).
    /// Duplicate ids, in the extensions or against the defaults, are errors.
    pub fn load_extended<P: AsRef<std::path::Path>>(paths: &[P]) -> Result<Catalog> {
        let mut builder = CatalogBuilder::default();
        for (name, content) in DEFAULT_FILES {
            builder.add_file(name, content)?;
        }
        for p in paths {
            let path = p.as_ref();
            let content =
                std::fs::read_to_string(path).map_err(|e| Error::io(path.to_path_buf(), e))?;
            builder.add_file(&path.display().to_string(), &content)?;
        }
        Ok(builder.finish())
    }

    pub fn count_by(&self, category: Category) -> usize {
        self.specs.iter().filter(|s| s.category == category).count()
    }

    pub fn total(&self) -> usize {
        self.specs.len()
    }

    pub fn cre_id_for(&self, exception_simple_name: &str) -> Option<&str> {
        self.cre_by_name.get(exception_simple_name).map(|s| s.as_str())
    }

    pub fn api_families(&self) -> &[ApiFamily] {
        &self.api_families
    }

    pub fn assertion_id(&self, language: Language, name: &str) -> Option<&str> {
        self.assertion_ids
            .get(&(language, name.to_string()))
            .map(|s| s.as_str())
    }

    /// Annotation packages in catalog order with their name->id tables.
    pub fn annotation_packages(&self) -> &[(String, BTreeMap<String, String>)] {
        &self.annotation_packages
    }

    /// Resolve an annotation by package prefix plus simple name.
    pub fn annotation_id(&self, package: &str, simple_name: &str) -> Option<&str> {
        self.annotation_packages
            .iter()
            .find(|(p, _)| package == p || package.starts_with(&format!("{p}.")))
            .and_then(|(_, names)| names.get(simple_name))
            .map(|s| s.as_str())
    }

    pub fn spec(&self, id: &str) -> Option<&ConstructSpec> {
        self.specs.iter().find(|s| s.id == id)
    }

    /// Hash over the loaded construct entries; stored in record files so
    /// consumers can tell which catalog produced them.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }
}

#[derive(Default)]
struct CatalogBuilder {
    specs: Vec<ConstructSpec>,
    seen_ids: HashMap<String, (String, usize)>,
    seen_matchers: HashSet<String>,
    hasher_input: String,
}

impl CatalogBuilder {
    fn add_file(&mut self, path: &str, content: &str) -> Result<()> {
        for (lineno, raw) in content.lines().enumerate() {
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.add_line(path, lineno + 1, line)?;
        }
        Ok(())
    }

    fn add_line(&mut self, path: &str, lineno: usize, line: &str) -> Result<()> {
        let mut fields = line.split('\t');
        let err = |message: String| Error::Catalog {
            path: path.to_string(),
            line: lineno,
            message,
        };
        let category = fields
            .next()
            .and_then(Category::parse)
            .ok_or_else(|| err("unknown or missing category".into()))?;
        let id = fields
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| err("missing construct id".into()))?
            .to_string();
        let rest: Vec<&str> = fields.collect();

        let (matcher, languages, matcher_key) = match category {
            Category::Cre => {
                let [name] = rest[..] else {
                    return Err(err("CRE rows need exactly one matcher field".into()));
                };
                (
                    Matcher::ExceptionName(name.to_string()),
                    vec![Language::Java, Language::Kotlin],
                    format!("CRE/{name}"),
                )
            }
            Category::Api => {
                let [package, class, method] = rest[..] else {
                    return Err(err("API rows need package, class, and method".into()));
                };
                (
                    Matcher::ApiMethod {
                        package: package.to_string(),
                        class: class.to_string(),
                        method: method.to_string(),
                    },
                    vec![Language::Java, Language::Kotlin],
                    format!("API/{package}/{class}/{method}"),
                )
            }
            Category::Assertion => {
                let [language, name] = rest[..] else {
                    return Err(err("Assertion rows need language and function name".into()));
                };
                let lang = match language {
                    "Java" => Language::Java,
                    "Kotlin" => Language::Kotlin,
                    other => return Err(err(format!("unknown language `{other}`"))),
                };
                (
                    Matcher::AssertionName(name.to_string()),
                    vec![lang],
                    format!("Assertion/{language}/{name}"),
                )
            }
            Category::Annotation => {
                let [package, name] = rest[..] else {
                    return Err(err("Annotation rows need package and simple name".into()));
                };
                (
                    Matcher::Annotation {
                        package: package.to_string(),
                        name: name.to_string(),
                    },
                    vec![Language::Java, Language::Kotlin],
                    format!("Annotation/{package}/{name}"),
                )
            }
            Category::Other => {
                let [tag] = rest[..] else {
                    return Err(err("Other rows need a pattern tag".into()));
                };
                (
                    Matcher::PatternTag(tag.to_string()),
                    vec![Language::Kotlin],
                    format!("Other/{tag}"),
                )
            }
        };

        if let Some((prev_path, prev_line)) = self.seen_ids.get(&id) {
            let _ = (prev_path, prev_line);
            return Err(Error::DuplicateConstruct {
                id,
                path: path.to_string(),
                line: lineno,
            });
        }
        if !self.seen_matchers.insert(matcher_key.clone()) {
            return Err(err(format!("duplicate matcher `{matcher_key}`")));
        }
        self.seen_ids
            .insert(id.clone(), (path.to_string(), lineno));
        self.hasher_input.push_str(&matcher_key);
        self.hasher_input.push('\t');
        self.hasher_input.push_str(&id);
        self.hasher_input.push('\n');
        self.specs.push(ConstructSpec {
            id,
            category,
            matcher,
            languages,
        });
        Ok(())
    }

    fn finish(self) -> Catalog {
        use sha2::{Digest, Sha256};
        let mut catalog = Catalog {
            content_hash: hex::encode(Sha256::digest(self.hasher_input.as_bytes())),
            specs: self.specs,
            ..Default::default()
        };
        let mut families: BTreeMap<(String, String), ApiFamily> = BTreeMap::new();
        for spec in &catalog.specs {
            match &spec.matcher {
                Matcher::ExceptionName(name) => {
                    catalog.cre_by_name.insert(name.clone(), spec.id.clone());
                }
                Matcher::ApiMethod {
                    package,
                    class,
                    method,
                } => {
                    let fam = families
                        .entry((package.clone(), class.clone()))
                        .or_insert_with(|| ApiFamily {
                            package: package.clone(),
                            class: class.clone(),
                            ..Default::default()
                        });
                    fam.methods.insert(method.clone(), spec.id.clone());
                }
                Matcher::AssertionName(name) => {
                    for lang in &spec.languages {
                        catalog
                            .assertion_ids
                            .insert((*lang, name.clone()), spec.id.clone());
                    }
                }
                Matcher::Annotation { package, name } => {
                    if let Some((_, names)) = catalog
                        .annotation_packages
                        .iter_mut()
                        .find(|(p, _)| p == package)
                    {
                        names.insert(name.clone(), spec.id.clone());
                    } else {
                        let mut names = BTreeMap::new();
                        names.insert(name.clone(), spec.id.clone());
                        catalog.annotation_packages.push((package.clone(), names));
                    }
                }
                Matcher::PatternTag(_) => {}
            }
        }
        catalog.api_families = families.into_values().collect();
        catalog
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_catalog_matches_published_counts() {
        let c = Catalog::load_default().unwrap();
        assert_eq!(c.count_by(Category::Cre), 74);
        assert_eq!(c.count_by(Category::Api), 31);
        assert_eq!(c.count_by(Category::Assertion), 6);
        assert_eq!(c.count_by(Category::Annotation), 136);
        assert_eq!(c.count_by(Category::Other), 1);
        assert_eq!(c.total(), 248);
    }

    #[test]
    fn unsupported_operation_exception_has_its_own_id() {
        let c = Catalog::load_default().unwrap();
        assert_eq!(
            c.cre_id_for("UnsupportedOperationException"),
            Some("UCREUnsupportedOperationException")
        );
        assert_eq!(
            c.cre_id_for("IllegalArgumentException"),
            Some("CREIllegalArgumentException")
        );
    }

    #[test]
    fn nonnull_and_nullable_exist_under_android_and_androidx() {
        let c = Catalog::load_default().unwrap();
        assert_eq!(c.annotation_id("android.annotation", "NonNull"), Some("AndroidNonNull"));
        assert_eq!(c.annotation_id("androidx.annotation", "NonNull"), Some("AndroidXNonNull"));
        assert_eq!(c.annotation_id("android.annotation", "Nullable"), Some("AndroidNullable"));
        assert_eq!(c.annotation_id("androidx.annotation", "Nullable"), Some("AndroidXNullable"));
    }

    #[test]
    fn jsr305_prefix_covers_concurrent_subpackage() {
        let c = Catalog::load_default().unwrap();
        assert_eq!(
            c.annotation_id("javax.annotation.concurrent", "ThreadSafe"),
            Some("JSR305ThreadSafe")
        );
    }

    #[test]
    fn extension_adds_constructs() {
        let dir = std::env::temp_dir().join("dbcscan-catalog-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("extra.tsv");
        std::fs::write(&path, "CRE\tCRECustomBoom\tCustomBoomException\n").unwrap();
        let c = Catalog::load_extended(&[&path]).unwrap();
        assert_eq!(c.count_by(Category::Cre), 75);
        assert_eq!(c.cre_id_for("CustomBoomException"), Some("CRECustomBoom"));
    }

    #[test]
    fn extension_with_duplicate_id_errors_naming_it() {
        let dir = std::env::temp_dir().join("dbcscan-catalog-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("dup.tsv");
        std::fs::write(&path, "Annotation\tAndroidXNonNull\tandroidx.annotation\tNonNull2\n").unwrap();
        let err = Catalog::load_extended(&[&path]).unwrap_err();
        assert!(err.to_string().contains("AndroidXNonNull"));
    }

    #[test]
    fn empty_extension_list_equals_default() {
        let a = Catalog::load_default().unwrap();
        let b = Catalog::load_extended::<&std::path::Path>(&[]).unwrap();
        assert_eq!(a.total(), b.total());
        assert_eq!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn malformed_row_is_fatal_with_location() {
        let dir = std::env::temp_dir().join("dbcscan-catalog-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.tsv");
        std::fs::write(&path, "CRE\tOnlyTwoFields\n").unwrap();
        let err = Catalog::load_extended(&[&path]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.tsv") && msg.contains(":1"), "{msg}");
    }

    #[test]
    fn shipped_matcher_keys_are_injective() {
        // construction would fail on duplicates; spot-check the lookup too
        let c = Catalog::load_default().unwrap();
        let mut seen = std::collections::HashSet::new();
        for spec in &c.specs {
            let key = format!("{:?}/{:?}", spec.matcher, spec.languages);
            assert!(seen.insert(key), "{:?}", spec.matcher);
        }
    }

    #[test]
    fn default_kinds_follow_category() {
        let c = Catalog::load_default().unwrap();
        for spec in &c.specs {
            let expect = match spec.category {
                Category::Cre | Category::Api => DefaultKind::Pre,
                Category::Assertion | Category::Other => DefaultKind::Unclassified,
                Category::Annotation => DefaultKind::SiteDependent,
            };
            assert_eq!(spec.default_kind(), expect);
        }
    }
}
