//! Java extraction on top of the tree-sitter grammar.

use super::text::normalize_ws;
use super::*;
use tree_sitter::Node;

pub(super) fn parse(path: &str, source: &str) -> SourceUnit {
    let mut parser = tree_sitter::Parser::new();
    parser
        .set_language(&tree_sitter_java::LANGUAGE.into())
        .expect("java grammar");
    let mut unit = SourceUnit {
        path: path.to_string(),
        language: Language::Java,
        package: String::new(),
        imports: Vec::new(),
        types: Vec::new(),
        top_level_members: Vec::new(),
        parse_status: ParseStatus::Ok,
        line_count: 0,
        declared_function_names: std::collections::HashSet::new(),
    };
    let tree = match parser.parse(source, None) {
        Some(t) => t,
        None => {
            unit.parse_status = ParseStatus::PartialError("parser produced no tree".into());
            return unit;
        }
    };
    let root = tree.root_node();
    if let Some(location) = visible_error_location(root) {
        unit.parse_status = ParseStatus::PartialError(location);
    }
    let src = source.as_bytes();

    let mut top_level: Vec<Node> = Vec::new();
    let mut cur = root.walk();
    for child in root.children(&mut cur) {
        flatten_errors(child, &mut top_level);
    }
    for child in top_level {
        match child.kind() {
            "package_declaration" => {
                if let Some(name) = child.named_child(0) {
                    unit.package = text(name, src);
                }
            }
            "import_declaration" => {
                if let Some(imp) = parse_import(child, src) {
                    unit.imports.push(imp);
                }
            }
            _ => {
                if let Some(t) = parse_type(child, src, &unit.package) {
                    unit.types.push(t);
                }
            }
        }
    }
    unit
}

/// Collect nodes, looking through ERROR wrappers so declarations inside
/// partially broken regions are still recovered.
pub(super) fn flatten_errors<'t>(node: Node<'t>, out: &mut Vec<Node<'t>>) {
    if node.kind() == "ERROR" {
        let mut cur = node.walk();
        for child in node.children(&mut cur) {
            flatten_errors(child, out);
        }
    } else {
        out.push(node);
    }
}

/// Location of the first visible ERROR or missing node. Grammars sometimes
/// set the error flag through invisible recovery tokens even though every
/// construct parsed; only a visible error degrades the unit to partial.
pub(super) fn visible_error_location(root: Node) -> Option<String> {
    let mut cursor = root.walk();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.is_error() || node.is_missing() {
            return Some(format!("syntax error near line {}", node.start_position().row + 1));
        }
        for child in node.children(&mut cursor) {
            if child.has_error() {
                stack.push(child);
            }
        }
    }
    None
}

fn text(node: Node, src: &[u8]) -> String {
    node.utf8_text(src).unwrap_or_default().to_string()
}

fn line(node: Node) -> u32 {
    node.start_position().row as u32 + 1
}

fn parse_import(node: Node, src: &[u8]) -> Option<ImportDecl> {
    let mut is_static = false;
    let mut path = None;
    let mut is_wildcard = false;
    let mut cur = node.walk();
    for child in node.children(&mut cur) {
        match child.kind() {
            "static" => is_static = true,
            "scoped_identifier" | "identifier" => path = Some(text(child, src)),
            "asterisk" => is_wildcard = true,
            _ => {}
        }
    }
    Some(ImportDecl {
        qualified_name: path?,
        is_wildcard,
        is_static,
        alias: None,
        line: line(node),
    })
}

fn is_type_decl(kind: &str) -> bool {
    matches!(
        kind,
        "class_declaration"
            | "interface_declaration"
            | "enum_declaration"
            | "record_declaration"
            | "annotation_type_declaration"
    )
}

fn parse_type(node: Node, src: &[u8], qualifier: &str) -> Option<TypeDecl> {
    if !is_type_decl(node.kind()) {
        return None;
    }
    let name = text(node.child_by_field_name("name")?, src);
    let qualified_name = if qualifier.is_empty() {
        name.clone()
    } else {
        format!("{qualifier}.{name}")
    };
    let is_interface = node.kind() == "interface_declaration";
    let is_enum = node.kind() == "enum_declaration";

    let mut super_types = Vec::new();
    if let Some(sc) = node.child_by_field_name("superclass") {
        // node text is `extends X`; keep the type reference only
        let mut cur = sc.walk();
        for child in sc.children(&mut cur) {
            if child.is_named() {
                super_types.push(normalize_ws(&text(child, src)));
            }
        }
    }
    for field in ["interfaces", "extends_interfaces"] {
        if let Some(si) = node.child_by_field_name(field) {
            collect_type_list(si, src, &mut super_types);
        }
    }
    if super_types.is_empty() {
        // extends clause of interfaces is not always a field
        let mut cur = node.walk();
        for child in node.children(&mut cur) {
            if child.kind() == "extends_interfaces" || child.kind() == "super_interfaces" {
                collect_type_list(child, src, &mut super_types);
            }
        }
    }

    let annotations = annotations_from_modifiers(node, src, AnnotationSite::TypeDecl);

    let mut decl = TypeDecl {
        name,
        qualified_name,
        is_interface,
        super_types,
        annotations,
        members: Vec::new(),
        nested_types: Vec::new(),
        line: line(node),
    };

    if let Some(body) = node.child_by_field_name("body") {
        parse_body(body, src, &mut decl, is_interface, is_enum);
    } else {
        let mut cur = node.walk();
        for child in node.children(&mut cur) {
            if matches!(child.kind(), "class_body" | "interface_body" | "enum_body") {
                parse_body(child, src, &mut decl, is_interface, is_enum);
            }
        }
    }
    Some(decl)
}

fn collect_type_list(node: Node, src: &[u8], out: &mut Vec<String>) {
    let mut cur = node.walk();
    for child in node.children(&mut cur) {
        if child.kind() == "type_list" {
            let mut inner = child.walk();
            for t in child.children(&mut inner) {
                if t.is_named() {
                    out.push(normalize_ws(&text(t, src)));
                }
            }
        } else if child.is_named() {
            out.push(normalize_ws(&text(child, src)));
        }
    }
}

fn parse_body(body: Node, src: &[u8], decl: &mut TypeDecl, is_interface: bool, is_enum: bool) {
    let mut children: Vec<Node> = Vec::new();
    let mut cur = body.walk();
    for child in body.children(&mut cur) {
        flatten_errors(child, &mut children);
    }
    for child in children {
        match child.kind() {
            "method_declaration" => {
                decl.members
                    .push(parse_method(child, src, is_interface, false));
            }
            "constructor_declaration" => {
                decl.members.push(parse_method(child, src, false, is_enum));
            }
            "compact_constructor_declaration" => {
                let mut m = parse_method(child, src, false, false);
                m.kind = MemberKind::Constructor;
                decl.members.push(m);
            }
            "field_declaration" | "constant_declaration" => {
                decl.members.push(parse_field(child, src, is_interface));
            }
            "enum_body_declarations" => {
                parse_body(child, src, decl, false, is_enum);
            }
            k if is_type_decl(k) => {
                if let Some(nested) = parse_type(child, src, &decl.qualified_name) {
                    decl.nested_types.push(nested);
                }
            }
            _ => {}
        }
    }
}

fn visibility_from_modifiers(node: Node, src: &[u8], default: Visibility) -> Visibility {
    let Some(mods) = modifiers_node(node) else {
        return default;
    };
    let mut cur = mods.walk();
    for child in mods.children(&mut cur) {
        match child.kind() {
            "public" => return Visibility::Public,
            "protected" => return Visibility::Protected,
            "private" => return Visibility::Private,
            _ => {}
        }
    }
    let _ = src;
    default
}

fn modifiers_node<'t>(node: Node<'t>) -> Option<Node<'t>> {
    let mut cur = node.walk();
    let found = node.children(&mut cur).find(|c| c.kind() == "modifiers");
    found
}

fn annotations_from_modifiers(node: Node, src: &[u8], site: AnnotationSite) -> Vec<AnnotationUse> {
    let Some(mods) = modifiers_node(node) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut cur = mods.walk();
    for child in mods.children(&mut cur) {
        if let Some(a) = parse_annotation(child, src, site) {
            out.push(a);
        }
    }
    out
}

fn parse_annotation(node: Node, src: &[u8], site: AnnotationSite) -> Option<AnnotationUse> {
    match node.kind() {
        "marker_annotation" => Some(AnnotationUse {
            name_text: text(node.child_by_field_name("name")?, src),
            args_text: None,
            site,
            use_site_target: None,
            line: line(node),
        }),
        "annotation" => Some(AnnotationUse {
            name_text: text(node.child_by_field_name("name")?, src),
            args_text: node
                .child_by_field_name("arguments")
                .map(|a| normalize_ws(&text(a, src))),
            site,
            use_site_target: None,
            line: line(node),
        }),
        _ => None,
    }
}

fn parse_method(node: Node, src: &[u8], in_interface: bool, enum_ctor: bool) -> MemberDecl {
    let kind = if node.kind() == "method_declaration" {
        MemberKind::Method
    } else {
        MemberKind::Constructor
    };
    let default_vis = if in_interface {
        Visibility::Public
    } else if enum_ctor && kind == MemberKind::Constructor {
        Visibility::Private
    } else {
        Visibility::PackagePrivate
    };
    let name = node
        .child_by_field_name("name")
        .map(|n| text(n, src))
        .unwrap_or_default();
    let annotations = annotations_from_modifiers(node, src, AnnotationSite::MethodOrReturn);
    let is_override = annotations.iter().any(|a| a.simple_name() == "Override");
    let parameters = node
        .child_by_field_name("parameters")
        .map(|p| parse_parameters(p, src))
        .unwrap_or_default();
    let return_type_text = node
        .child_by_field_name("type")
        .map(|t| normalize_ws(&text(t, src)));
    let body = node
        .child_by_field_name("body")
        .map(|b| build_statement_tree(b, src));

    MemberDecl {
        kind,
        name,
        visibility: visibility_from_modifiers(node, src, default_vis),
        parameters,
        return_type_text,
        annotations,
        body,
        is_override,
        line: line(node),
        line_end: node.end_position().row as u32 + 1,
    }
}

fn parse_parameters(params: Node, src: &[u8]) -> Vec<Parameter> {
    let mut out = Vec::new();
    let mut cur = params.walk();
    for child in params.children(&mut cur) {
        if !matches!(child.kind(), "formal_parameter" | "spread_parameter") {
            continue;
        }
        let index = out.len();
        let annotations = annotations_from_modifiers(child, src, AnnotationSite::Parameter(index));
        let (type_text, name) = if child.kind() == "spread_parameter" {
            // children: modifiers? type `...` variable_declarator
            let mut ty = String::new();
            let mut nm = String::new();
            let mut c2 = child.walk();
            for part in child.children(&mut c2) {
                match part.kind() {
                    "modifiers" => {}
                    "variable_declarator" => nm = text(part, src),
                    k if k != "..." && part.is_named() => {
                        if ty.is_empty() {
                            ty = format!("{}...", text(part, src));
                        }
                    }
                    _ => {}
                }
            }
            (ty, nm)
        } else {
            let ty = child
                .child_by_field_name("type")
                .map(|t| text(t, src))
                .unwrap_or_default();
            let nm = child
                .child_by_field_name("name")
                .map(|n| text(n, src))
                .unwrap_or_default();
            (ty, nm)
        };
        out.push(Parameter {
            name,
            type_text: normalize_ws(&type_text),
            annotations,
        });
    }
    out
}

fn parse_field(node: Node, src: &[u8], in_interface: bool) -> MemberDecl {
    let default_vis = if in_interface {
        Visibility::Public
    } else {
        Visibility::PackagePrivate
    };
    let annotations = annotations_from_modifiers(node, src, AnnotationSite::FieldOrProperty);
    let name = node
        .child_by_field_name("declarator")
        .and_then(|d| d.child_by_field_name("name"))
        .map(|n| text(n, src))
        .unwrap_or_default();
    let type_text = node
        .child_by_field_name("type")
        .map(|t| normalize_ws(&text(t, src)));
    // initializer expressions can carry API calls worth detecting
    let mut body = StatementTree::default();
    let mut cur = node.walk();
    for child in node.children(&mut cur) {
        if child.kind() == "variable_declarator" {
            if let Some(value) = child.child_by_field_name("value") {
                walk_expr_embedding(value, src, &mut body.calls, &mut body.statements);
            }
        }
    }
    MemberDecl {
        kind: MemberKind::FieldOrProperty,
        name,
        visibility: visibility_from_modifiers(node, src, default_vis),
        parameters: Vec::new(),
        return_type_text: type_text,
        annotations,
        body: Some(body),
        is_override: false,
        line: line(node),
        line_end: node.end_position().row as u32 + 1,
    }
}

/// Build the statement tree plus the flat call list for one member body.
/// Anonymous classes and lambdas fold into the enclosing member; nested named
/// type declarations are handled by their own `TypeDecl` and skipped here.
fn build_statement_tree(body: Node, src: &[u8]) -> StatementTree {
    let mut tree = StatementTree::default();
    tree.statements = child_statements(body, src, &mut tree.calls);
    tree
}

fn child_statements(node: Node, src: &[u8], calls: &mut Vec<CallExpr>) -> Vec<Stmt> {
    let mut out = Vec::new();
    let mut cur = node.walk();
    for child in node.children(&mut cur) {
        if let Some(s) = parse_statement(child, src, calls) {
            out.push(s);
        }
    }
    out
}

/// A branch is either a block (its statements) or one bare statement.
fn branch_statements(node: Node, src: &[u8], calls: &mut Vec<CallExpr>) -> Vec<Stmt> {
    if node.kind() == "block" {
        child_statements(node, src, calls)
    } else {
        parse_statement(node, src, calls).into_iter().collect()
    }
}

fn parse_statement(node: Node, src: &[u8], calls: &mut Vec<CallExpr>) -> Option<Stmt> {
    if !node.is_named() || node.kind() == "line_comment" || node.kind() == "block_comment" {
        return None;
    }
    match node.kind() {
        "if_statement" => {
            let condition = node
                .child_by_field_name("condition")
                .map(|c| normalize_ws(strip_parens_node(c, src).as_str()))
                .unwrap_or_default();
            collect_calls_under(node.child_by_field_name("condition"), src, calls);
            let then_branch = node
                .child_by_field_name("consequence")
                .map(|b| branch_statements(b, src, calls))
                .unwrap_or_default();
            let else_branch = node
                .child_by_field_name("alternative")
                .map(|b| branch_statements(b, src, calls));
            Some(Stmt::If(IfStmt {
                condition,
                then_branch,
                else_branch,
                line: line(node),
            }))
        }
        "throw_statement" => {
            let mut exception_type = String::new();
            let mut args = Vec::new();
            let mut cur = node.walk();
            for child in node.children(&mut cur) {
                if child.kind() == "object_creation_expression" {
                    if let Some(t) = child.child_by_field_name("type") {
                        exception_type = normalize_ws(&text(t, src));
                    }
                    if let Some(a) = child.child_by_field_name("arguments") {
                        args = argument_texts(a, src);
                    }
                } else if child.is_named() && exception_type.is_empty() {
                    exception_type = normalize_ws(&text(child, src));
                }
                collect_calls_under(Some(child), src, calls);
            }
            Some(Stmt::Throw(ThrowStmt {
                exception_type,
                args,
                line: line(node),
            }))
        }
        "assert_statement" => {
            let condition = node
                .named_child(0)
                .map(|c| normalize_ws(&text(c, src)))
                .unwrap_or_default();
            collect_calls_under(Some(node), src, calls);
            Some(Stmt::Assert(AssertStmt {
                condition,
                line: line(node),
            }))
        }
        // Leaf statements: harvest calls, and fold statements of any embedded
        // lambda block or anonymous class body into this node's children so
        // guarded throws inside listener callbacks are still visible.
        "local_variable_declaration" | "expression_statement" | "return_statement"
        | "yield_statement" => {
            let mut children = Vec::new();
            walk_expr_embedding(node, src, calls, &mut children);
            Some(Stmt::Other {
                children,
                line: line(node),
            })
        }
        // statements with nested statement children keep their structure
        "block" | "for_statement" | "enhanced_for_statement" | "while_statement"
        | "do_statement" | "switch_expression" | "switch_statement" | "try_statement"
        | "try_with_resources_statement" | "synchronized_statement" | "labeled_statement"
        | "switch_block" | "switch_block_statement_group" | "switch_rule" | "catch_clause"
        | "finally_clause" | "resource_specification" => {
            let mut children = Vec::new();
            let mut cur = node.walk();
            for child in node.children(&mut cur) {
                if let Some(s) = parse_statement(child, src, calls) {
                    children.push(s);
                } else if child.is_named() {
                    // conditions, resources, iterables: harvest calls only
                    collect_calls_under(Some(child), src, calls);
                }
            }
            Some(Stmt::Other {
                children,
                line: line(node),
            })
        }
        "local_class_declaration" | "class_declaration" | "interface_declaration"
        | "enum_declaration" | "record_declaration" | "annotation_type_declaration" => None,
        k if k.ends_with("_statement") => {
            collect_calls_under(Some(node), src, calls);
            Some(Stmt::Other {
                children: Vec::new(),
                line: line(node),
            })
        }
        _ => {
            collect_calls_under(Some(node), src, calls);
            None
        }
    }
}

/// Expression walker that records calls and, for anonymous class bodies and
/// lambda blocks, parses the contained statements into `embedded` instead of
/// flattening them away. Each call ends up recorded exactly once.
fn walk_expr_embedding(node: Node, src: &[u8], calls: &mut Vec<CallExpr>, embedded: &mut Vec<Stmt>) {
    match node.kind() {
        "class_body" => {
            let mut cur = node.walk();
            for child in node.children(&mut cur) {
                match child.kind() {
                    "method_declaration" | "constructor_declaration" => {
                        if let Some(body) = child.child_by_field_name("body") {
                            embedded.push(Stmt::Other {
                                children: child_statements(body, src, calls),
                                line: line(body),
                            });
                        }
                    }
                    "field_declaration" => walk_expr_embedding(child, src, calls, embedded),
                    _ => {}
                }
            }
        }
        "lambda_expression" => {
            if let Some(body) = node.child_by_field_name("body") {
                if body.kind() == "block" {
                    embedded.push(Stmt::Other {
                        children: child_statements(body, src, calls),
                        line: line(body),
                    });
                } else {
                    walk_expr_embedding(body, src, calls, embedded);
                }
            }
        }
        kind => {
            if kind == "method_invocation" {
                let callee = node
                    .child_by_field_name("name")
                    .map(|x| text(x, src))
                    .unwrap_or_default();
                let receiver = node
                    .child_by_field_name("object")
                    .map(|x| normalize_ws(&text(x, src)));
                let args = node
                    .child_by_field_name("arguments")
                    .map(|a| argument_texts(a, src))
                    .unwrap_or_default();
                calls.push(CallExpr {
                    callee,
                    receiver,
                    args,
                    lambda_text: None,
                    line: line(node),
                });
            }
            let mut cur = node.walk();
            let children: Vec<Node> = node.children(&mut cur).collect();
            for child in children {
                walk_expr_embedding(child, src, calls, embedded);
            }
        }
    }
}

fn strip_parens_node(node: Node, src: &[u8]) -> String {
    // parenthesized_expression: keep the inner expression text
    if node.kind() == "parenthesized_expression" {
        if let Some(inner) = node.named_child(0) {
            return text(inner, src);
        }
    }
    text(node, src)
}

fn argument_texts(args: Node, src: &[u8]) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = args.walk();
    for child in args.children(&mut cur) {
        if child.is_named() {
            out.push(normalize_ws(&text(child, src)));
        }
    }
    out
}

/// Collect every method invocation under `node` in source order, descending
/// into expressions, lambdas, and anonymous class bodies.
fn collect_calls_under(node: Option<Node>, src: &[u8], calls: &mut Vec<CallExpr>) {
    let Some(node) = node else { return };
    let mut stack = vec![node];
    // depth-first with explicit order reversal keeps source order
    while let Some(n) = stack.pop() {
        if n.kind() == "method_invocation" {
            let callee = n
                .child_by_field_name("name")
                .map(|x| text(x, src))
                .unwrap_or_default();
            let receiver = n.child_by_field_name("object").map(|x| normalize_ws(&text(x, src)));
            let args = n
                .child_by_field_name("arguments")
                .map(|a| argument_texts(a, src))
                .unwrap_or_default();
            calls.push(CallExpr {
                callee,
                receiver,
                args,
                lambda_text: None,
                line: line(n),
            });
        }
        let mut cur = n.walk();
        let children: Vec<Node> = n.children(&mut cur).collect();
        for child in children.into_iter().rev() {
            stack.push(child);
        }
    }
}
