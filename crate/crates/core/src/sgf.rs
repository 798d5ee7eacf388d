//! Minimal SGF FF[4] reader/writer covering the subset used for problem
//! files and solution export: SZ, AB, AW, PL, MA, TR, C, GN, B, W plus
//! variations. Property values use the standard backslash escapes.

use std::fmt::Write as _;

use crate::board::Intersection;

/// A single SGF node: ordered `(identifier, values)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SgfNode {
    pub props: Vec<(String, Vec<String>)>,
}

impl SgfNode {
    pub fn values(&self, ident: &str) -> Option<&[String]> {
        self.props
            .iter()
            .find(|(id, _)| id == ident)
            .map(|(_, v)| v.as_slice())
    }

    pub fn value(&self, ident: &str) -> Option<&str> {
        self.values(ident).and_then(|v| v.first()).map(|s| s.as_str())
    }

    pub fn push(&mut self, ident: &str, value: impl Into<String>) {
        if let Some((_, vals)) = self.props.iter_mut().find(|(id, _)| id == ident) {
            vals.push(value.into());
        } else {
            self.props.push((ident.to_string(), vec![value.into()]));
        }
    }
}

/// A game tree: a main sequence of nodes followed by variations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SgfTree {
    pub nodes: Vec<SgfNode>,
    pub variations: Vec<SgfTree>,
}

/// Parse failure with the byte offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("SGF parse error at byte {offset}: {message}")]
pub struct SgfParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> SgfParseError {
        SgfParseError {
            offset: self.at,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.at < self.bytes.len() && self.bytes[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.at).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), SgfParseError> {
        if self.peek() == Some(b) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn tree(&mut self) -> Result<SgfTree, SgfParseError> {
        self.skip_ws();
        self.expect(b'(')?;
        let mut tree = SgfTree::default();
        self.skip_ws();
        while self.peek() == Some(b';') {
            self.at += 1;
            tree.nodes.push(self.node()?);
            self.skip_ws();
        }
        if tree.nodes.is_empty() {
            return Err(self.err("game tree has no nodes"));
        }
        while self.peek() == Some(b'(') {
            tree.variations.push(self.tree()?);
            self.skip_ws();
        }
        self.expect(b')')?;
        Ok(tree)
    }

    fn node(&mut self) -> Result<SgfNode, SgfParseError> {
        let mut node = SgfNode::default();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_uppercase() => {
                    let mut ident = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphabetic() {
                            ident.push(c.to_ascii_uppercase() as char);
                            self.at += 1;
                        } else {
                            break;
                        }
                    }
                    let mut values = Vec::new();
                    self.skip_ws();
                    if self.peek() != Some(b'[') {
                        return Err(self.err("property without value"));
                    }
                    while self.peek() == Some(b'[') {
                        values.push(self.value()?);
                        self.skip_ws();
                    }
                    node.props.push((ident, values));
                }
                _ => return Ok(node),
            }
        }
    }

    fn value(&mut self) -> Result<String, SgfParseError> {
        self.expect(b'[')?;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(self.err("unterminated property value")),
                Some(b']') => {
                    self.at += 1;
                    return Ok(out);
                }
                Some(b'\\') => {
                    self.at += 1;
                    match self.peek() {
                        None => return Err(self.err("trailing escape")),
                        Some(c) => {
                            out.push(c as char);
                            self.at += 1;
                        }
                    }
                }
                Some(c) => {
                    out.push(c as char);
                    self.at += 1;
                }
            }
        }
    }
}

/// Parse the first game tree in the input.
pub fn parse(bytes: &[u8]) -> Result<SgfTree, SgfParseError> {
    let mut p = Parser { bytes, at: 0 };
    let tree = p.tree()?;
    p.skip_ws();
    Ok(tree)
}

/// Serialize a tree. Escapes `]` and `\` in values.
pub fn write(tree: &SgfTree) -> String {
    let mut out = String::new();
    write_tree(tree, &mut out);
    out
}

fn write_tree(tree: &SgfTree, out: &mut String) {
    out.push('(');
    for node in &tree.nodes {
        out.push(';');
        for (ident, values) in &node.props {
            out.push_str(ident);
            for v in values {
                out.push('[');
                for ch in v.chars() {
                    if ch == ']' || ch == '\\' {
                        out.push('\\');
                    }
                    out.push(ch);
                }
                out.push(']');
            }
        }
    }
    for var in &tree.variations {
        write_tree(var, out);
    }
    out.push(')');
}

/// SGF point encoding: column then row, `a` = 0.
pub fn point_to_sgf(i: Intersection, size: u8) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{}{}",
        (b'a' + i.col(size) as u8) as char,
        (b'a' + i.row(size) as u8) as char
    );
    s
}

pub fn sgf_to_point(s: &str, size: u8) -> Option<Intersection> {
    let b = s.as_bytes();
    if b.len() != 2 {
        return None;
    }
    let col = b[0].checked_sub(b'a')? as usize;
    let row = b[1].checked_sub(b'a')? as usize;
    if col >= size as usize || row >= size as usize {
        return None;
    }
    Some(Intersection::from_coords(col, row, size))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_tree() {
        let tree = parse(b"(;FF[4]SZ[5]AB[aa][bb];B[cc])").unwrap();
        assert_eq!(tree.nodes.len(), 2);
        assert_eq!(tree.nodes[0].value("SZ"), Some("5"));
        assert_eq!(tree.nodes[0].values("AB").unwrap().len(), 2);
        assert_eq!(tree.nodes[1].value("B"), Some("cc"));
    }

    #[test]
    fn parses_variations_and_escapes() {
        let tree = parse(b"(;SZ[5]C[a \\] bracket](;B[aa])(;B[bb];W[cc]))").unwrap();
        assert_eq!(tree.variations.len(), 2);
        assert_eq!(tree.nodes[0].value("C"), Some("a ] bracket"));
    }

    #[test]
    fn truncated_input_reports_offset() {
        let err = parse(b"(;SZ[5]AB[aa").unwrap_err();
        assert!(err.offset > 0);
    }

    #[test]
    fn write_parse_round_trip() {
        let src = b"(;FF[4]SZ[5]AB[aa][bb]C[x \\] y](;B[cc])(;B[dd]))";
        let tree = parse(src).unwrap();
        let text = write(&tree);
        let again = parse(text.as_bytes()).unwrap();
        assert_eq!(tree, again);
    }

    #[test]
    fn point_round_trip() {
        for size in [5u8, 9, 19] {
            for idx in 0..(size as usize * size as usize) {
                let i = Intersection::from_index(idx);
                let s = point_to_sgf(i, size);
                assert_eq!(sgf_to_point(&s, size), Some(i));
            }
        }
    }
}
