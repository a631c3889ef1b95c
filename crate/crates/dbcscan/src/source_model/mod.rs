//! Language-agnostic structural view of Java and Kotlin sources.
//!
//! Parsing is grammar-backed (tree-sitter) and error-tolerant: a file with
//! syntax errors yields a `SourceUnit` with `ParseStatus::PartialError` and as
//! many well-formed declarations as could be recovered. Units are immutable
//! plain data after construction and safe to share across threads.

mod java;
mod kotlin;
pub mod text;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Language {
    Java,
    Kotlin,
}

impl Language {
    /// Language from the file extension; `.kts` scripts are Kotlin units.
    pub fn from_path(path: &str) -> Option<Language> {
        let lower = path.rsplit('/').next().unwrap_or(path).to_ascii_lowercase();
        if lower.ends_with(".java") {
            Some(Language::Java)
        } else if lower.ends_with(".kt") || lower.ends_with(".kts") {
            Some(Language::Kotlin)
        } else {
            None
        }
    }
}

impl std::fmt::Display for Language {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Language::Java => write!(f, "Java"),
            Language::Kotlin => write!(f, "Kotlin"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseStatus {
    Ok,
    PartialError(String),
}

#[derive(Debug, Clone)]
pub struct SourceUnit {
    /// Relative path with forward slashes.
    pub path: String,
    pub language: Language,
    pub package: String,
    pub imports: Vec<ImportDecl>,
    pub types: Vec<TypeDecl>,
    /// Kotlin top-level functions and properties. They belong to no
    /// `TypeDecl`; records attribute them to the file facade class name.
    pub top_level_members: Vec<MemberDecl>,
    pub parse_status: ParseStatus,
    /// Physical line count including comments and blanks.
    pub line_count: u64,
    /// Names of functions declared anywhere in the unit (members, top-level,
    /// local). Kotlin only; feeds the assertion-ambiguity rule.
    pub declared_function_names: std::collections::HashSet<String>,
}

impl SourceUnit {
    /// JVM-style owner name for top-level Kotlin members (`FooKt` for Foo.kt).
    pub fn facade_class_name(&self) -> String {
        let stem = self
            .path
            .rsplit('/')
            .next()
            .unwrap_or(&self.path)
            .split('.')
            .next()
            .unwrap_or("File");
        let mut chars = stem.chars();
        let capitalized = match chars.next() {
            Some(c) => c.to_uppercase().collect::<String>() + chars.as_str(),
            None => String::from("File"),
        };
        if self.package.is_empty() {
            format!("{capitalized}Kt")
        } else {
            format!("{}.{capitalized}Kt", self.package)
        }
    }

    /// Depth-first iterator over all type declarations, nested ones included.
    pub fn all_types(&self) -> Vec<&TypeDecl> {
        let mut out = Vec::new();
        fn walk<'a>(t: &'a TypeDecl, out: &mut Vec<&'a TypeDecl>) {
            out.push(t);
            for n in &t.nested_types {
                walk(n, out);
            }
        }
        for t in &self.types {
            walk(t, &mut out);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportDecl {
    /// Dotted path without any trailing `.*`.
    pub qualified_name: String,
    pub is_wildcard: bool,
    /// Java `import static`.
    pub is_static: bool,
    /// Kotlin `import a.b as c`.
    pub alias: Option<String>,
    pub line: u32,
}

impl ImportDecl {
    pub fn last_segment(&self) -> &str {
        self.qualified_name
            .rsplit('.')
            .next()
            .unwrap_or(&self.qualified_name)
    }

    /// Name the import binds locally: the alias when present, else the last
    /// path segment.
    pub fn local_name(&self) -> &str {
        self.alias.as_deref().unwrap_or_else(|| self.last_segment())
    }
}

#[derive(Debug, Clone)]
pub struct TypeDecl {
    pub name: String,
    /// Package plus nesting chain, e.g. `com.app.Outer.Inner`.
    pub qualified_name: String,
    pub is_interface: bool,
    /// Supertype references as written (whitespace-normalized).
    pub super_types: Vec<String>,
    pub annotations: Vec<AnnotationUse>,
    pub members: Vec<MemberDecl>,
    pub nested_types: Vec<TypeDecl>,
    pub line: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Visibility {
    Public,
    Protected,
    Internal,
    PackagePrivate,
    Private,
}

impl Visibility {
    /// Member is part of the client-facing surface (Table-2 style counting).
    pub fn is_visible(self) -> bool {
        matches!(
            self,
            Visibility::Public | Visibility::Protected | Visibility::Internal
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MemberKind {
    Method,
    Constructor,
    FieldOrProperty,
}

#[derive(Debug, Clone)]
pub struct Parameter {
    pub name: String,
    /// Whitespace-normalized type text, annotations excluded.
    pub type_text: String,
    pub annotations: Vec<AnnotationUse>,
}

#[derive(Debug, Clone)]
pub struct MemberDecl {
    pub kind: MemberKind,
    pub name: String,
    pub visibility: Visibility,
    pub parameters: Vec<Parameter>,
    pub return_type_text: Option<String>,
    pub annotations: Vec<AnnotationUse>,
    pub body: Option<StatementTree>,
    /// `@Override` in Java, `override` modifier in Kotlin.
    pub is_override: bool,
    pub line: u32,
    pub line_end: u32,
}

/// Syntactic attachment site of an annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnnotationSite {
    Parameter(usize),
    MethodOrReturn,
    FieldOrProperty,
    TypeDecl,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationUse {
    /// As written, simple or qualified, without the `@`.
    pub name_text: String,
    /// Argument list text including parentheses, when present.
    pub args_text: Option<String>,
    pub site: AnnotationSite,
    /// Kotlin use-site target (`get`, `set`, `field`, ...).
    pub use_site_target: Option<String>,
    pub line: u32,
}

impl AnnotationUse {
    /// Simple name, i.e. the last segment of a possibly qualified name.
    pub fn simple_name(&self) -> &str {
        self.name_text.rsplit('.').next().unwrap_or(&self.name_text)
    }

    /// Package part of a fully qualified annotation name, if any.
    pub fn package_part(&self) -> Option<&str> {
        self.name_text.rfind('.').map(|i| &self.name_text[..i])
    }
}

/// Facade over a member body: a statement tree for control-flow patterns plus
/// a flat, source-ordered list of call expressions.
#[derive(Debug, Clone, Default)]
pub struct StatementTree {
    pub statements: Vec<Stmt>,
    pub calls: Vec<CallExpr>,
}

#[derive(Debug, Clone)]
pub enum Stmt {
    If(IfStmt),
    Throw(ThrowStmt),
    /// Java `assert` statement.
    Assert(AssertStmt),
    /// Any other statement; children preserve nesting so that throws deeper
    /// inside a branch can be told apart from a branch's sole statement.
    Other { children: Vec<Stmt>, line: u32 },
}

impl Stmt {
    pub fn line(&self) -> u32 {
        match self {
            Stmt::If(s) => s.line,
            Stmt::Throw(s) => s.line,
            Stmt::Assert(s) => s.line,
            Stmt::Other { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IfStmt {
    /// Condition text as written, whitespace-normalized, without the
    /// surrounding parentheses.
    pub condition: String,
    pub then_branch: Vec<Stmt>,
    pub else_branch: Option<Vec<Stmt>>,
    pub line: u32,
}

#[derive(Debug, Clone)]
pub struct ThrowStmt {
    /// Thrown exception type text (callee text for Kotlin constructor calls).
    pub exception_type: String,
    pub args: Vec<String>,
    pub line: u32,
}

#[derive(Debug, Clone)]
pub struct AssertStmt {
    pub condition: String,
    pub line: u32,
}

#[derive(Debug, Clone)]
pub struct CallExpr {
    /// Called name without receiver, e.g. `notEmpty` for `Validate.notEmpty`.
    pub callee: String,
    /// Receiver text when the call is qualified.
    pub receiver: Option<String>,
    pub args: Vec<String>,
    /// Raw source text of a trailing lambda, for DSL-shaped constructs.
    pub lambda_text: Option<String>,
    pub line: u32,
}

impl StatementTree {
    /// All if-statements in source order, nested ones included.
    pub fn ifs(&self) -> Vec<&IfStmt> {
        let mut out = Vec::new();
        fn walk<'a>(stmts: &'a [Stmt], out: &mut Vec<&'a IfStmt>) {
            for s in stmts {
                match s {
                    Stmt::If(i) => {
                        out.push(i);
                        walk(&i.then_branch, out);
                        if let Some(e) = &i.else_branch {
                            walk(e, out);
                        }
                    }
                    Stmt::Other { children, .. } => walk(children, out),
                    _ => {}
                }
            }
        }
        walk(&self.statements, &mut out);
        out
    }

    /// All throw-statements in source order, at any depth.
    pub fn throws(&self) -> Vec<&ThrowStmt> {
        let mut out = Vec::new();
        fn walk<'a>(stmts: &'a [Stmt], out: &mut Vec<&'a ThrowStmt>) {
            for s in stmts {
                match s {
                    Stmt::Throw(t) => out.push(t),
                    Stmt::If(i) => {
                        walk(&i.then_branch, out);
                        if let Some(e) = &i.else_branch {
                            walk(e, out);
                        }
                    }
                    Stmt::Other { children, .. } => walk(children, out),
                    _ => {}
                }
            }
        }
        walk(&self.statements, &mut out);
        out
    }

    /// Java assert-statements in source order.
    pub fn asserts(&self) -> Vec<&AssertStmt> {
        let mut out = Vec::new();
        fn walk<'a>(stmts: &'a [Stmt], out: &mut Vec<&'a AssertStmt>) {
            for s in stmts {
                match s {
                    Stmt::Assert(a) => out.push(a),
                    Stmt::If(i) => {
                        walk(&i.then_branch, out);
                        if let Some(e) = &i.else_branch {
                            walk(e, out);
                        }
                    }
                    Stmt::Other { children, .. } => walk(children, out),
                    _ => {}
                }
            }
        }
        walk(&self.statements, &mut out);
        out
    }
}

/// Dataset metrics for a set of parsed units.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ArtifactCounts {
    pub compilation_units: u64,
    pub classes: u64,
    pub methods_all: u64,
    pub constructors_all: u64,
    pub methods_visible: u64,
    pub constructors_visible: u64,
    /// Physical KLOC including comments.
    pub kloc: f64,
}

impl ArtifactCounts {
    pub fn visible_artifacts(&self) -> u64 {
        self.methods_visible + self.constructors_visible
    }
}

/// Parse one file. Never fails: unparseable content produces a unit with
/// `ParseStatus::PartialError` and whatever declarations were recoverable.
pub fn parse_file(path: &str, bytes: &[u8]) -> SourceUnit {
    let language = Language::from_path(path).unwrap_or(Language::Java);
    parse_file_as(path, bytes, language)
}

/// Parse with an explicit language, bypassing extension sniffing.
pub fn parse_file_as(path: &str, bytes: &[u8], language: Language) -> SourceUnit {
    let source = String::from_utf8_lossy(bytes);
    let line_count = count_lines(&source);
    let mut unit = match language {
        Language::Java => java::parse(path, &source),
        Language::Kotlin => kotlin::parse(path, &source),
    };
    unit.line_count = line_count;
    unit
}

fn count_lines(s: &str) -> u64 {
    if s.is_empty() {
        return 0;
    }
    let newlines = s.bytes().filter(|b| *b == b'\n').count() as u64;
    if s.ends_with('\n') {
        newlines
    } else {
        newlines + 1
    }
}

/// Dataset metrics over parsed units. Visible counts keep members with
/// public, protected, or internal visibility; package-private stays in the
/// `*_all` totals only.
pub fn count_artifacts(units: &[SourceUnit]) -> ArtifactCounts {
    let mut c = ArtifactCounts {
        compilation_units: units.len() as u64,
        ..Default::default()
    };
    let mut lines: u64 = 0;
    for unit in units {
        lines += unit.line_count;
        let mut members: Vec<&MemberDecl> = unit.top_level_members.iter().collect();
        for t in unit.all_types() {
            c.classes += 1;
            members.extend(t.members.iter());
        }
        for m in members {
            match m.kind {
                MemberKind::Method => {
                    c.methods_all += 1;
                    if m.visibility.is_visible() {
                        c.methods_visible += 1;
                    }
                }
                MemberKind::Constructor => {
                    c.constructors_all += 1;
                    if m.visibility.is_visible() {
                        c.constructors_visible += 1;
                    }
                }
                MemberKind::FieldOrProperty => {}
            }
        }
    }
    c.kloc = lines as f64 / 1000.0;
    c
}
