//! Kotlin extraction on top of the tree-sitter grammar.

use super::text::normalize_ws;
use super::*;
use std::collections::HashSet;
use tree_sitter::Node;

pub(super) fn parse(path: &str, source: &str) -> SourceUnit {
    let mut parser = tree_sitter::Parser::new();
    parser
        .set_language(&tree_sitter_kotlin_ng::LANGUAGE.into())
        .expect("kotlin grammar");
    let mut unit = SourceUnit {
        path: path.to_string(),
        language: Language::Kotlin,
        package: String::new(),
        imports: Vec::new(),
        types: Vec::new(),
        top_level_members: Vec::new(),
        parse_status: ParseStatus::Ok,
        line_count: 0,
        declared_function_names: HashSet::new(),
    };
    let tree = match parser.parse(source, None) {
        Some(t) => t,
        None => {
            unit.parse_status = ParseStatus::PartialError("parser produced no tree".into());
            return unit;
        }
    };
    let root = tree.root_node();
    if let Some(location) = super::java::visible_error_location(root) {
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
            "package_header" => {
                if let Some(q) = find_child(child, "qualified_identifier") {
                    unit.package = text(q, src);
                }
            }
            "import" => {
                if let Some(imp) = parse_import(child, src) {
                    unit.imports.push(imp);
                }
            }
            "class_declaration" | "object_declaration" => {
                if let Some(t) = parse_type(child, src, &unit.package) {
                    unit.types.push(t);
                }
            }
            "function_declaration" => {
                unit.top_level_members.push(parse_function(child, src));
            }
            "property_declaration" => {
                unit.top_level_members.push(parse_property(child, src));
            }
            _ => {}
        }
    }
    unit.declared_function_names = declared_function_names(root, src);
    unit
}

/// Collect nodes, looking through ERROR wrappers so declarations inside
/// partially broken regions are still recovered.
fn flatten_errors<'t>(node: Node<'t>, out: &mut Vec<Node<'t>>) {
    if node.kind() == "ERROR" {
        let mut cur = node.walk();
        for child in node.children(&mut cur) {
            flatten_errors(child, out);
        }
    } else {
        out.push(node);
    }
}

fn text(node: Node, src: &[u8]) -> String {
    node.utf8_text(src).unwrap_or_default().to_string()
}

fn line(node: Node) -> u32 {
    node.start_position().row as u32 + 1
}

fn find_child<'t>(node: Node<'t>, kind: &str) -> Option<Node<'t>> {
    let mut cur = node.walk();
    let found = node.children(&mut cur).find(|c| c.kind() == kind);
    found
}

fn has_anon_child(node: Node, token: &str) -> bool {
    let mut cur = node.walk();
    let found = node
        .children(&mut cur)
        .any(|c| !c.is_named() && c.kind() == token);
    found
}

fn parse_import(node: Node, src: &[u8]) -> Option<ImportDecl> {
    let q = find_child(node, "qualified_identifier")
        .or_else(|| find_child(node, "identifier"))
        .map(|n| text(n, src))?;
    let is_wildcard = has_anon_child(node, "*");
    // `import a.b as c` carries the alias as a trailing identifier child
    let alias = {
        let mut cur = node.walk();
        let last = node
            .children(&mut cur)
            .filter(|c| c.is_named() && c.kind() == "identifier")
            .last();
        last.map(|n| text(n, src))
    };
    Some(ImportDecl {
        qualified_name: q,
        is_wildcard,
        is_static: false,
        alias,
        line: line(node),
    })
}

fn modifiers_node<'t>(node: Node<'t>) -> Option<Node<'t>> {
    find_child(node, "modifiers")
}

fn visibility_of(node: Node, src: &[u8]) -> Visibility {
    let Some(mods) = modifiers_node(node) else {
        return Visibility::Public;
    };
    let mut cur = mods.walk();
    for child in mods.children(&mut cur) {
        if child.kind() == "visibility_modifier" {
            return match text(child, src).as_str() {
                "private" => Visibility::Private,
                "protected" => Visibility::Protected,
                "internal" => Visibility::Internal,
                _ => Visibility::Public,
            };
        }
    }
    Visibility::Public
}

fn has_override(node: Node, src: &[u8]) -> bool {
    let Some(mods) = modifiers_node(node) else {
        return false;
    };
    let mut cur = mods.walk();
    let found = mods
        .children(&mut cur)
        .any(|c| c.kind() == "member_modifier" && text(c, src) == "override");
    found
}

fn annotations_of(node: Node, src: &[u8], site: AnnotationSite) -> Vec<AnnotationUse> {
    let mut out = Vec::new();
    for holder in ["modifiers", "parameter_modifiers"] {
        let Some(mods) = find_child(node, holder) else {
            continue;
        };
        let mut cur = mods.walk();
        for child in mods.children(&mut cur) {
            if child.kind() == "annotation" {
                out.extend(parse_annotation(child, src, site));
            }
        }
    }
    out
}

fn parse_annotation(node: Node, src: &[u8], site: AnnotationSite) -> Option<AnnotationUse> {
    let use_site_target = find_child(node, "use_site_target")
        .map(|t| text(t, src).trim_end_matches(':').to_string());
    let (name_text, args_text) = if let Some(ci) = find_child(node, "constructor_invocation") {
        let name = find_child(ci, "user_type")
            .map(|t| text(t, src))
            .unwrap_or_default();
        let args = find_child(ci, "value_arguments").map(|a| normalize_ws(&text(a, src)));
        (name, args)
    } else if let Some(ut) = find_child(node, "user_type") {
        (text(ut, src), None)
    } else {
        return None;
    };
    // an explicit @get: target marks the return position
    let effective_site = match (site, use_site_target.as_deref()) {
        (AnnotationSite::FieldOrProperty, Some("get")) => AnnotationSite::MethodOrReturn,
        (s, _) => s,
    };
    Some(AnnotationUse {
        name_text: normalize_ws(&name_text),
        args_text,
        site: effective_site,
        use_site_target,
        line: line(node),
    })
}

fn is_type_node_kind(kind: &str) -> bool {
    kind.ends_with("_type") || kind == "user_type"
}

fn parse_type(node: Node, src: &[u8], qualifier: &str) -> Option<TypeDecl> {
    let name = find_child(node, "identifier")
        .map(|n| text(n, src))
        .unwrap_or_else(|| "Companion".to_string());
    let qualified_name = if qualifier.is_empty() {
        name.clone()
    } else {
        format!("{qualifier}.{name}")
    };
    let is_interface = has_anon_child(node, "interface");

    let mut super_types = Vec::new();
    if let Some(dspecs) = find_child(node, "delegation_specifiers") {
        let mut cur = dspecs.walk();
        for spec in dspecs.children(&mut cur) {
            if spec.kind() != "delegation_specifier" {
                continue;
            }
            let tnode = find_child(spec, "constructor_invocation")
                .and_then(|ci| find_child(ci, "user_type"))
                .or_else(|| find_child(spec, "user_type"))
                .or_else(|| {
                    let mut c2 = spec.walk();
                    let found = spec.children(&mut c2).find(|c| is_type_node_kind(c.kind()));
                    found
                });
            if let Some(t) = tnode {
                super_types.push(normalize_ws(&text(t, src)));
            } else {
                super_types.push(normalize_ws(&text(spec, src)));
            }
        }
    }

    let mut decl = TypeDecl {
        name: name.clone(),
        qualified_name,
        is_interface,
        super_types,
        annotations: annotations_of(node, src, AnnotationSite::TypeDecl),
        members: Vec::new(),
        nested_types: Vec::new(),
        line: line(node),
    };

    // explicit primary constructor (with or without keyword/modifiers)
    if let Some(pc) = find_child(node, "primary_constructor") {
        decl.members.push(parse_primary_constructor(pc, src, &name));
    }

    if let Some(body) = find_child(node, "class_body").or_else(|| find_child(node, "enum_class_body"))
    {
        parse_body(body, src, &mut decl);
    }
    Some(decl)
}

fn parse_primary_constructor(pc: Node, src: &[u8], class_name: &str) -> MemberDecl {
    let mut parameters = Vec::new();
    if let Some(params) = find_child(pc, "class_parameters") {
        let mut cur = params.walk();
        for child in params.children(&mut cur) {
            if child.kind() != "class_parameter" {
                continue;
            }
            let index = parameters.len();
            let annotations = annotations_of(child, src, AnnotationSite::Parameter(index));
            let name = find_child(child, "identifier")
                .map(|n| text(n, src))
                .unwrap_or_default();
            let type_text = type_text_of(child, src);
            parameters.push(Parameter {
                name,
                type_text,
                annotations,
            });
        }
    }
    MemberDecl {
        kind: MemberKind::Constructor,
        name: class_name.to_string(),
        visibility: visibility_of(pc, src),
        parameters,
        return_type_text: None,
        annotations: Vec::new(),
        body: None,
        is_override: false,
        line: line(pc),
        line_end: pc.end_position().row as u32 + 1,
    }
}

/// Last type-shaped child: parameter and property types sit after the colon.
fn type_text_of(node: Node, src: &[u8]) -> String {
    let mut cur = node.walk();
    let mut ty = String::new();
    for child in node.children(&mut cur) {
        if is_type_node_kind(child.kind()) {
            ty = text(child, src);
        }
    }
    normalize_ws(&ty)
}

fn parse_body(body: Node, src: &[u8], decl: &mut TypeDecl) {
    let mut children: Vec<Node> = Vec::new();
    let mut cur = body.walk();
    for child in body.children(&mut cur) {
        flatten_errors(child, &mut children);
    }
    for child in children {
        match child.kind() {
            "function_declaration" => decl.members.push(parse_function(child, src)),
            "property_declaration" => decl.members.push(parse_property(child, src)),
            "secondary_constructor" => {
                decl.members
                    .push(parse_secondary_constructor(child, src, &decl.name));
            }
            "class_declaration" | "object_declaration" | "companion_object" => {
                if let Some(nested) = parse_type(child, src, &decl.qualified_name) {
                    decl.nested_types.push(nested);
                }
            }
            "anonymous_initializer" => {
                // `init { ... }` blocks are scanned but belong to no member;
                // fold them into a synthetic constructor-less body by
                // attaching to the primary constructor when present.
                if let Some(block) = find_child(child, "block") {
                    let tree = build_statement_tree(block, src);
                    if let Some(ctor) = decl
                        .members
                        .iter_mut()
                        .find(|m| m.kind == MemberKind::Constructor && m.body.is_none())
                    {
                        ctor.body = Some(tree);
                        ctor.line_end = ctor.line_end.max(child.end_position().row as u32 + 1);
                    }
                }
            }
            _ => {}
        }
    }
}

fn parse_function(node: Node, src: &[u8]) -> MemberDecl {
    let name = find_child(node, "identifier")
        .map(|n| text(n, src))
        .unwrap_or_default();
    let annotations = annotations_of(node, src, AnnotationSite::MethodOrReturn);
    let parameters = find_child(node, "function_value_parameters")
        .map(|p| parse_parameters(p, src))
        .unwrap_or_default();
    // return type: a type-shaped child after the parameter list
    let return_type_text = {
        let mut seen_params = false;
        let mut ty = None;
        let mut cur = node.walk();
        for child in node.children(&mut cur) {
            if child.kind() == "function_value_parameters" {
                seen_params = true;
            } else if seen_params && is_type_node_kind(child.kind()) {
                ty = Some(normalize_ws(&text(child, src)));
            }
        }
        ty
    };
    let body = find_child(node, "function_body").map(|b| build_statement_tree(b, src));
    MemberDecl {
        kind: MemberKind::Method,
        name,
        visibility: visibility_of(node, src),
        parameters,
        return_type_text,
        annotations,
        body,
        is_override: has_override(node, src),
        line: line(node),
        line_end: node.end_position().row as u32 + 1,
    }
}

fn parse_parameters(params: Node, src: &[u8]) -> Vec<Parameter> {
    let mut out = Vec::new();
    // a parameter's annotations sit in a preceding parameter_modifiers sibling
    let mut pending: Vec<AnnotationUse> = Vec::new();
    let mut cur = params.walk();
    for child in params.children(&mut cur) {
        match child.kind() {
            "parameter_modifiers" | "modifiers" => {
                let mut c2 = child.walk();
                for m in child.children(&mut c2) {
                    if m.kind() == "annotation" {
                        pending.extend(parse_annotation(m, src, AnnotationSite::Parameter(0)));
                    }
                }
            }
            "parameter" => {
                let index = out.len();
                let mut annotations =
                    annotations_of(child, src, AnnotationSite::Parameter(index));
                for mut a in pending.drain(..) {
                    a.site = AnnotationSite::Parameter(index);
                    annotations.push(a);
                }
                let name = find_child(child, "identifier")
                    .map(|n| text(n, src))
                    .unwrap_or_default();
                out.push(Parameter {
                    name,
                    type_text: type_text_of(child, src),
                    annotations,
                });
            }
            _ => {}
        }
    }
    out
}

fn parse_secondary_constructor(node: Node, src: &[u8], class_name: &str) -> MemberDecl {
    let parameters = find_child(node, "function_value_parameters")
        .map(|p| parse_parameters(p, src))
        .unwrap_or_default();
    let mut tree = StatementTree::default();
    if let Some(dcall) = find_child(node, "constructor_delegation_call") {
        let mut folded = HashSet::new();
        walk_expr(dcall, src, &mut tree.calls, &mut Vec::new(), &mut folded);
    }
    if let Some(block) = find_child(node, "block") {
        let inner = build_statement_tree(block, src);
        tree.statements = inner.statements;
        tree.calls.extend(inner.calls);
    }
    MemberDecl {
        kind: MemberKind::Constructor,
        name: class_name.to_string(),
        visibility: visibility_of(node, src),
        parameters,
        return_type_text: None,
        annotations: annotations_of(node, src, AnnotationSite::MethodOrReturn),
        body: Some(tree),
        is_override: false,
        line: line(node),
        line_end: node.end_position().row as u32 + 1,
    }
}

fn parse_property(node: Node, src: &[u8]) -> MemberDecl {
    let name = find_child(node, "variable_declaration")
        .and_then(|v| find_child(v, "identifier"))
        .map(|n| text(n, src))
        .unwrap_or_default();
    let type_text = find_child(node, "variable_declaration").map(|v| type_text_of(v, src));
    // initializer plus getter/setter bodies make up the property's code
    let mut tree = StatementTree::default();
    let mut embedded = Vec::new();
    let mut folded = HashSet::new();
    let mut cur = node.walk();
    for child in node.children(&mut cur) {
        match child.kind() {
            "getter" | "setter" => {
                if let Some(fb) = find_child(child, "function_body") {
                    let inner = build_statement_tree(fb, src);
                    tree.statements.extend(inner.statements);
                    tree.calls.extend(inner.calls);
                }
            }
            "modifiers" | "variable_declaration" => {}
            _ if child.is_named() => {
                walk_expr(child, src, &mut tree.calls, &mut embedded, &mut folded);
            }
            _ => {}
        }
    }
    tree.statements.extend(embedded);
    MemberDecl {
        kind: MemberKind::FieldOrProperty,
        name,
        visibility: visibility_of(node, src),
        parameters: Vec::new(),
        return_type_text: type_text.filter(|t| !t.is_empty()),
        annotations: annotations_of(node, src, AnnotationSite::FieldOrProperty),
        body: Some(tree),
        is_override: has_override(node, src),
        line: line(node),
        line_end: node.end_position().row as u32 + 1,
    }
}

fn build_statement_tree(body: Node, src: &[u8]) -> StatementTree {
    let mut tree = StatementTree::default();
    // function_body is either a block or `= expression`
    if let Some(block) = find_child(body, "block") {
        tree.statements = block_statements(block, src, &mut tree.calls);
    } else if body.kind() == "block" {
        tree.statements = block_statements(body, src, &mut tree.calls);
    } else {
        let mut embedded = Vec::new();
        let mut folded = HashSet::new();
        let mut cur = body.walk();
        for child in body.children(&mut cur) {
            if child.is_named() {
                walk_expr(child, src, &mut tree.calls, &mut embedded, &mut folded);
            }
        }
        tree.statements = embedded;
    }
    tree
}

fn block_statements(block: Node, src: &[u8], calls: &mut Vec<CallExpr>) -> Vec<Stmt> {
    let mut out = Vec::new();
    let mut cur = block.walk();
    for child in block.children(&mut cur) {
        if !child.is_named() {
            continue;
        }
        if let Some(s) = parse_statement(child, src, calls) {
            out.push(s);
        }
    }
    out
}

/// Then/else branches: a block keeps its statement list, any other node is a
/// single bare statement.
fn branch_statements(node: Node, src: &[u8], calls: &mut Vec<CallExpr>) -> Vec<Stmt> {
    if node.kind() == "block" {
        block_statements(node, src, calls)
    } else {
        parse_statement(node, src, calls).into_iter().collect()
    }
}

fn parse_statement(node: Node, src: &[u8], calls: &mut Vec<CallExpr>) -> Option<Stmt> {
    match node.kind() {
        "comment" | "multiline_comment" | "line_comment" => None,
        "if_expression" => {
            // children layout: 'if' '(' cond ')' then ('else' else)?
            let mut cond: Option<Node> = None;
            let mut then_node: Option<Node> = None;
            let mut else_node: Option<Node> = None;
            let mut after_close = false;
            let mut after_else = false;
            let mut cur = node.walk();
            for child in node.children(&mut cur) {
                if !child.is_named() {
                    match child.kind() {
                        ")" => after_close = true,
                        "else" => after_else = true,
                        _ => {}
                    }
                    continue;
                }
                if !after_close {
                    cond = Some(child);
                } else if !after_else {
                    if then_node.is_none() {
                        then_node = Some(child);
                    }
                } else if else_node.is_none() {
                    else_node = Some(child);
                }
            }
            let condition = cond.map(|c| normalize_ws(&text(c, src))).unwrap_or_default();
            if let Some(c) = cond {
                let mut embedded = Vec::new();
                let mut folded = HashSet::new();
                walk_expr(c, src, calls, &mut embedded, &mut folded);
            }
            let then_branch = then_node
                .map(|n| branch_statements(n, src, calls))
                .unwrap_or_default();
            let else_branch = else_node.map(|n| branch_statements(n, src, calls));
            Some(Stmt::If(IfStmt {
                condition,
                then_branch,
                else_branch,
                line: line(node),
            }))
        }
        "throw_expression" => {
            let mut exception_type = String::new();
            let mut args = Vec::new();
            let mut cur = node.walk();
            for child in node.children(&mut cur) {
                if !child.is_named() {
                    continue;
                }
                if child.kind() == "call_expression" {
                    if let Some((callee, _recv, cargs, _lambda)) = call_parts(child, src) {
                        exception_type = callee;
                        args = cargs;
                    }
                    // nested calls inside the thrown expression still count
                    let mut embedded = Vec::new();
                    let mut folded = HashSet::new();
                    let mut c2 = child.walk();
                    for sub in child.children(&mut c2) {
                        if sub.kind() == "value_arguments" {
                            walk_expr(sub, src, calls, &mut embedded, &mut folded);
                        }
                    }
                } else if exception_type.is_empty() {
                    exception_type = normalize_ws(&text(child, src));
                    let mut embedded = Vec::new();
                    let mut folded = HashSet::new();
                    walk_expr(child, src, calls, &mut embedded, &mut folded);
                }
            }
            Some(Stmt::Throw(ThrowStmt {
                exception_type,
                args,
                line: line(node),
            }))
        }
        "for_statement" | "while_statement" | "do_while_statement" | "when_expression"
        | "try_expression" | "block" => {
            let mut children = Vec::new();
            let mut cur = node.walk();
            for child in node.children(&mut cur) {
                if !child.is_named() {
                    continue;
                }
                match child.kind() {
                    "block" | "when_entry" | "catch_block" | "finally_block"
                    | "control_structure_body" => {
                        let mut c2 = child.walk();
                        let mut sub = Vec::new();
                        for g in child.children(&mut c2) {
                            if !g.is_named() {
                                continue;
                            }
                            if g.kind() == "block" {
                                sub.extend(block_statements(g, src, calls));
                            } else if let Some(s) = parse_statement(g, src, calls) {
                                sub.push(s);
                            }
                        }
                        children.extend(sub);
                    }
                    _ => {
                        if let Some(s) = parse_statement(child, src, calls) {
                            children.push(s);
                        }
                    }
                }
            }
            Some(Stmt::Other {
                children,
                line: line(node),
            })
        }
        "class_declaration" | "object_declaration" | "function_declaration" => {
            // local declarations occupy a statement slot; a local function's
            // body still gets scanned for calls and guarded throws
            let mut children = Vec::new();
            if node.kind() == "function_declaration" {
                if let Some(fb) = find_child(node, "function_body") {
                    let inner = build_statement_tree(fb, src);
                    children = inner.statements;
                    calls.extend(inner.calls);
                }
            }
            Some(Stmt::Other {
                children,
                line: line(node),
            })
        }
        _ => {
            // expression statement: property_declaration, call, assignment...
            let mut embedded = Vec::new();
            let mut folded = HashSet::new();
            walk_expr(node, src, calls, &mut embedded, &mut folded);
            Some(Stmt::Other {
                children: embedded,
                line: line(node),
            })
        }
    }
}

/// Split a call expression into callee, receiver, argument texts, and the
/// trailing lambda. A call with both an argument list and a trailing lambda
/// parses as an outer call wrapping an inner one; both layers are fused here.
fn call_parts<'t>(
    node: Node<'t>,
    src: &[u8],
) -> Option<(String, Option<String>, Vec<String>, Option<Node<'t>>)> {
    let first = node.named_child(0)?;
    let lambda = find_child(node, "annotated_lambda");
    let target = if first.kind() == "call_expression" && lambda.is_some() {
        first
    } else {
        node
    };
    let callee_node = target.named_child(0)?;
    let (callee, receiver) = match callee_node.kind() {
        "identifier" => (text(callee_node, src), None),
        "navigation_expression" => {
            let recv = callee_node
                .named_child(0)
                .map(|r| normalize_ws(&text(r, src)));
            let name = {
                let mut cur = callee_node.walk();
                let last = callee_node
                    .children(&mut cur)
                    .filter(|c| c.is_named())
                    .last();
                last.map(|n| text(n, src)).unwrap_or_default()
            };
            (name, recv)
        }
        _ => (normalize_ws(&text(callee_node, src)), None),
    };
    let args = find_child(target, "value_arguments")
        .map(|a| {
            let mut out = Vec::new();
            let mut cur = a.walk();
            for arg in a.children(&mut cur) {
                if arg.kind() == "value_argument" {
                    out.push(normalize_ws(&text(arg, src)));
                }
            }
            out
        })
        .unwrap_or_default();
    Some((callee, receiver, args, lambda))
}

/// Expression walker: records every call exactly once, parses lambda bodies
/// and object-literal members into `embedded` statements.
fn walk_expr(
    node: Node,
    src: &[u8],
    calls: &mut Vec<CallExpr>,
    embedded: &mut Vec<Stmt>,
    folded: &mut HashSet<usize>,
) {
    match node.kind() {
        "call_expression" => {
            if folded.contains(&node.id()) {
                // inner layer of a fused lambda call: only walk its arguments
                if let Some(args) = find_child(node, "value_arguments") {
                    walk_expr(args, src, calls, embedded, folded);
                }
                if let Some(first) = node.named_child(0) {
                    if first.kind() != "identifier" {
                        walk_expr(first, src, calls, embedded, folded);
                    }
                }
                return;
            }
            if let Some((callee, receiver, args, lambda)) = call_parts(node, src) {
                let first = node.named_child(0);
                if let (Some(f), Some(_)) = (first, lambda) {
                    if f.kind() == "call_expression" {
                        folded.insert(f.id());
                    }
                }
                calls.push(CallExpr {
                    callee,
                    receiver,
                    args,
                    lambda_text: lambda.map(|l| text(l, src)),
                    line: line(node),
                });
            }
            let mut cur = node.walk();
            let children: Vec<Node> = node.children(&mut cur).collect();
            for child in children {
                match child.kind() {
                    "annotated_lambda" | "lambda_literal" => {
                        walk_expr(child, src, calls, embedded, folded)
                    }
                    _ if child.is_named() => walk_expr(child, src, calls, embedded, folded),
                    _ => {}
                }
            }
        }
        "lambda_literal" => {
            let mut sub_calls = Vec::new();
            let mut stmts = Vec::new();
            let mut cur = node.walk();
            for child in node.children(&mut cur) {
                if !child.is_named() || child.kind() == "lambda_parameters" {
                    continue;
                }
                if let Some(s) = parse_statement(child, src, &mut sub_calls) {
                    stmts.push(s);
                }
            }
            calls.extend(sub_calls);
            embedded.push(Stmt::Other {
                children: stmts,
                line: line(node),
            });
        }
        "object_literal" => {
            if let Some(body) = find_child(node, "class_body") {
                let mut cur = body.walk();
                for child in body.children(&mut cur) {
                    match child.kind() {
                        "function_declaration" | "property_declaration" => {
                            if let Some(fb) = find_child(child, "function_body") {
                                let inner = build_statement_tree(fb, src);
                                calls.extend(inner.calls.clone());
                                embedded.push(Stmt::Other {
                                    children: inner.statements,
                                    line: line(child),
                                });
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        _ => {
            let mut cur = node.walk();
            let children: Vec<Node> = node.children(&mut cur).collect();
            for child in children {
                if child.is_named() {
                    walk_expr(child, src, calls, embedded, folded);
                }
            }
        }
    }
}

/// Names of all functions declared anywhere in the unit, local ones included.
fn declared_function_names(root: Node, src: &[u8]) -> HashSet<String> {
    let mut out = HashSet::new();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.kind() == "function_declaration" {
            if let Some(name) = find_child(node, "identifier") {
                out.insert(text(name, src));
            }
        }
        let mut cur = node.walk();
        for child in node.children(&mut cur) {
            stack.push(child);
        }
    }
    out
}
