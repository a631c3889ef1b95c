//! Text normalization shared by the extractors and the diff machinery.

/// Trim and collapse internal whitespace runs to single spaces. Stored
/// condition/argument texts are normalized this way so the same expression
/// compares equal across reformatted versions.
pub fn normalize_ws(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_ws = false;
    for ch in s.trim().chars() {
        if ch.is_whitespace() {
            in_ws = true;
        } else {
            if in_ws && !out.is_empty() {
                out.push(' ');
            }
            in_ws = false;
            out.push(ch);
        }
    }
    out
}

/// Strip matching outer parentheses, repeatedly, as long as they wrap the
/// whole expression: `((x > 0))` becomes `x > 0`, but `(a) && (b)` is kept.
pub fn strip_outer_parens(s: &str) -> &str {
    let mut cur = s.trim();
    loop {
        let bytes = cur.as_bytes();
        if bytes.len() < 2 || bytes[0] != b'(' || bytes[bytes.len() - 1] != b')' {
            return cur;
        }
        let mut depth = 0i32;
        let mut wraps = true;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 && i != bytes.len() - 1 {
                        wraps = false;
                        break;
                    }
                }
                _ => {}
            }
        }
        if !wraps || depth != 0 {
            return cur;
        }
        cur = cur[1..cur.len() - 1].trim();
    }
}

/// Split an expression at top level on the given single- or double-character
/// operator (`&`/`&&` or `|`/`||`), ignoring occurrences inside parentheses,
/// brackets, braces, and string or character literals.
pub fn split_top_level(expr: &str, op: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut in_string: Option<char> = None;
    let bytes: Vec<char> = expr.chars().collect();
    let mut i = 0usize;
    let mut byte_pos = 0usize;
    let mut part_start_byte = 0usize;
    while i < bytes.len() {
        let ch = bytes[i];
        let ch_len = ch.len_utf8();
        if let Some(quote) = in_string {
            if ch == '\\' {
                // skip the escaped character
                if i + 1 < bytes.len() {
                    byte_pos += ch_len + bytes[i + 1].len_utf8();
                    i += 2;
                    continue;
                }
            } else if ch == quote {
                in_string = None;
            }
        } else {
            match ch {
                '"' | '\'' => in_string = Some(ch),
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                c if c == op && depth == 0 => {
                    let double = i + 1 < bytes.len() && bytes[i + 1] == op;
                    parts.push(expr[part_start_byte..byte_pos].to_string());
                    let skip = if double { 2 } else { 1 };
                    byte_pos += ch_len * skip;
                    i += skip;
                    part_start_byte = byte_pos;
                    continue;
                }
                _ => {}
            }
        }
        byte_pos += ch_len;
        i += 1;
    }
    parts.push(expr[part_start_byte..].to_string());
    parts
}

/// Capture a balanced parenthesized group starting at `from` (which must
/// point at `(`). Returns the group text including parentheses and the index
/// one past the closing parenthesis.
pub fn capture_balanced(s: &str, from: usize) -> Option<(&str, usize)> {
    let bytes = s.as_bytes();
    if from >= bytes.len() || bytes[from] != b'(' {
        return None;
    }
    let mut depth = 0i32;
    let mut in_string: Option<u8> = None;
    let mut i = from;
    while i < bytes.len() {
        let b = bytes[i];
        if let Some(quote) = in_string {
            if b == b'\\' {
                i += 2;
                continue;
            }
            if b == quote {
                in_string = None;
            }
        } else {
            match b {
                b'"' | b'\'' => in_string = Some(b),
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some((&s[from..=i], i + 1));
                    }
                }
                _ => {}
            }
        }
        i += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_collapses_runs() {
        assert_eq!(normalize_ws("  a  &&\n\tb "), "a && b");
        assert_eq!(normalize_ws(""), "");
    }

    #[test]
    fn strip_outer_parens_only_when_wrapping() {
        assert_eq!(strip_outer_parens("((x > 0))"), "x > 0");
        assert_eq!(strip_outer_parens("(a) && (b)"), "(a) && (b)");
        assert_eq!(strip_outer_parens("plain"), "plain");
    }

    #[test]
    fn split_respects_nesting_and_strings() {
        let parts = split_top_level("f(a && b) && c", '&');
        assert_eq!(parts, vec!["f(a && b) ", " c"]);
        let parts = split_top_level(r#"s.equals("a&&b") && ok"#, '&');
        assert_eq!(parts.len(), 2);
    }

    #[test]
    fn split_single_and_double_operators_alike() {
        assert_eq!(split_top_level("a & b & c", '&').len(), 3);
        assert_eq!(split_top_level("a || b | c", '|').len(), 3);
    }

    #[test]
    fn capture_balanced_group() {
        let s = "implies (a != (b)) rest";
        let (grp, end) = capture_balanced(s, 8).unwrap();
        assert_eq!(grp, "(a != (b))");
        assert_eq!(&s[end..], " rest");
    }
}
