//! Dev helper: parse a file and print the CST with node kinds.
use std::io::Read;

fn dump(node: tree_sitter::Node, src: &[u8], depth: usize) {
    let text = node.utf8_text(src).unwrap_or("");
    let short: String = text.chars().take(40).collect::<String>().replace('\n', "\\n");
    println!(
        "{}{} [{}..{}] {:?}{}",
        "  ".repeat(depth),
        node.kind(),
        node.start_position().row + 1,
        node.end_position().row + 1,
        short,
        if node.is_named() { "" } else { " (anon)" }
    );
    let mut cur = node.walk();
    for child in node.children(&mut cur) {
        dump(child, src, depth + 1);
    }
}

fn main() {
    let path = std::env::args().nth(1).expect("usage: dump_tree <file>");
    let mut src = Vec::new();
    std::fs::File::open(&path).unwrap().read_to_end(&mut src).unwrap();
    let mut parser = tree_sitter::Parser::new();
    let lang: tree_sitter::Language = if path.ends_with(".java") {
        tree_sitter_java::LANGUAGE.into()
    } else {
        tree_sitter_kotlin_ng::LANGUAGE.into()
    };
    parser.set_language(&lang).unwrap();
    let tree = parser.parse(&src, None).unwrap();
    dump(tree.root_node(), &src, 0);
}
