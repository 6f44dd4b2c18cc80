//! Newick reading and canonical writing.
//!
//! The reader accepts unrooted (top-level trifurcation) and rooted (top-level
//! bifurcation) trees; a rooted tree is unrooted by suppressing its root.
//! Branch lengths, internal node labels and `[...]` comments are skipped.

use std::collections::HashMap;

use crate::error::{Error, NewickError, Result};
use crate::phylo::tree::{PhyloTree, Token, TreeBuilder};
use crate::taxa::Universe;

enum Node {
    Leaf(String),
    Internal(Vec<Node>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

const DELIMS: &[u8] = b"(),;:[";

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        loop {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.peek() == Some(b'[') {
                match self.src[self.pos..].iter().position(|&c| c == b']') {
                    Some(off) => self.pos += off + 1,
                    None => self.pos = self.src.len(),
                }
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> NewickError {
        match std::str::from_utf8(&self.src[self.pos..]).ok().and_then(|s| s.chars().next()) {
            Some(ch) => NewickError::Unexpected { ch, pos: self.pos },
            None if self.depth > 0 => NewickError::Unbalanced(self.pos),
            None => NewickError::UnexpectedEnd,
        }
    }

    fn subtree(&mut self) -> Result<Node, NewickError> {
        self.skip_ws();
        let node = if self.peek() == Some(b'(') {
            self.pos += 1;
            self.depth += 1;
            let mut children = vec![self.subtree()?];
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                        children.push(self.subtree()?);
                    }
                    Some(b')') => {
                        self.pos += 1;
                        self.depth -= 1;
                        break;
                    }
                    None => return Err(NewickError::Unbalanced(self.pos)),
                    _ => return Err(self.unexpected()),
                }
            }
            // Internal labels (support values) carry no taxon.
            self.label()?;
            Node::Internal(children)
        } else {
            let start = self.pos;
            match self.label()? {
                Some(l) => Node::Leaf(l),
                None if self.peek().is_none() && self.depth > 0 => {
                    return Err(NewickError::Unbalanced(self.pos))
                }
                None if matches!(self.peek(), Some(b',' | b')' | b';' | b':')) => {
                    return Err(NewickError::EmptyLabel(start))
                }
                None => return Err(self.unexpected()),
            }
        };
        self.branch_length()?;
        Ok(node)
    }

    fn label(&mut self) -> Result<Option<String>, NewickError> {
        self.skip_ws();
        if self.peek() == Some(b'\'') {
            let start = self.pos;
            self.pos += 1;
            let mut out = Vec::new();
            loop {
                match self.peek() {
                    None => return Err(NewickError::UnexpectedEnd),
                    Some(b'\'') if self.src.get(self.pos + 1) == Some(&b'\'') => {
                        out.push(b'\'');
                        self.pos += 2;
                    }
                    Some(b'\'') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => {
                        out.push(c);
                        self.pos += 1;
                    }
                }
            }
            if out.is_empty() {
                return Err(NewickError::EmptyLabel(start));
            }
            return Ok(Some(String::from_utf8_lossy(&out).into_owned()));
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if DELIMS.contains(&c) || c.is_ascii_whitespace() || c == b'\'' {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            Ok(None)
        } else {
            Ok(Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
        }
    }

    fn branch_length(&mut self) -> Result<(), NewickError> {
        self.skip_ws();
        if self.peek() == Some(b':') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit() || b"+-.eE".contains(&c)) {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.unexpected());
            }
        }
        Ok(())
    }
}

/// Parses a pair of trees, one Newick string per line. Text after `#` is
/// ignored and blank lines are skipped. The second tree uses the taxon ids of
/// the first.
pub fn parse_pair(text: &str) -> Result<(PhyloTree, PhyloTree)> {
    let lines: Vec<&str> =
        text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
    let [a, b] = lines[..] else { return Err(NewickError::TreeCount(lines.len()).into()) };
    let t1 = parse_newick(a, None)?;
    let t2 = parse_newick(b, Some(t1.universe()))?;
    Ok((t1, t2))
}

/// Parses one Newick tree.
///
/// Taxon ids follow `universe` when given (the label sets must coincide),
/// otherwise the order of first appearance.
pub fn parse_newick(text: &str, universe: Option<&Universe>) -> Result<PhyloTree> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, depth: 0 };
    let root = p.subtree()?;
    p.skip_ws();
    match p.peek() {
        Some(b';') => {
            p.pos += 1;
            p.skip_ws();
            if p.pos < p.src.len() {
                return Err(NewickError::Trailing(p.pos).into());
            }
        }
        Some(b')') => return Err(NewickError::Unbalanced(p.pos).into()),
        Some(_) => return Err(p.unexpected().into()),
        None => {}
    }

    let mut labels = Vec::new();
    collect_labels(&root, &mut labels);
    let mut seen = HashMap::new();
    for l in &labels {
        if seen.insert(l.as_str(), ()).is_some() {
            return Err(NewickError::DuplicateLabel(l.clone()).into());
        }
    }
    check_shape(&root, true)?;
    if labels.len() < 3 {
        return Err(NewickError::TooFewLeaves(labels.len()).into());
    }

    let universe = match universe {
        Some(u) => {
            if u.len() != labels.len() {
                return Err(NewickError::UniverseSize { expected: u.len(), found: labels.len() }.into());
            }
            for l in &labels {
                if u.id_of(l).is_none() {
                    return Err(NewickError::UnknownLabel(l.clone()).into());
                }
            }
            u.clone()
        }
        None => Universe::new(labels),
    };
    let ids: HashMap<&str, usize> =
        universe.labels().iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();

    let mut b = TreeBuilder::new(universe.clone());
    let top = b.add_internal();
    if let Node::Internal(children) = &root {
        for c in children {
            let v = add_node(&mut b, c, &ids);
            b.add_edge(top, v);
        }
    }
    b.build()
}

fn collect_labels(node: &Node, out: &mut Vec<String>) {
    match node {
        Node::Leaf(l) => out.push(l.clone()),
        Node::Internal(cs) => cs.iter().for_each(|c| collect_labels(c, out)),
    }
}

fn check_shape(node: &Node, top: bool) -> Result<(), NewickError> {
    match node {
        Node::Leaf(_) if top => Err(NewickError::TooFewLeaves(1)),
        Node::Leaf(_) => Ok(()),
        Node::Internal(cs) => {
            let ok = if top { cs.len() == 2 || cs.len() == 3 } else { cs.len() == 2 };
            if !ok {
                return Err(NewickError::NonBinary(cs.len()));
            }
            cs.iter().try_for_each(|c| check_shape(c, false))
        }
    }
}

fn add_node(b: &mut TreeBuilder, node: &Node, ids: &HashMap<&str, usize>) -> usize {
    match node {
        Node::Leaf(l) => b.add_leaf(ids[l.as_str()]),
        Node::Internal(cs) => {
            let v = b.add_internal();
            for c in cs {
                let w = add_node(b, c, ids);
                b.add_edge(v, w);
            }
            v
        }
    }
}

/// Canonical Newick: the tree hangs from the neighbor of the first taxon's
/// leaf (a top-level trifurcation) and children are ordered by smallest taxon
/// id, so equal trees serialize identically.
pub fn write_newick(tree: &PhyloTree) -> String {
    let mut out = String::new();
    let mut need_comma = false;
    for tok in tree.canonical_tokens() {
        match tok {
            Token::Open => {
                if need_comma {
                    out.push(',');
                }
                out.push('(');
                need_comma = false;
            }
            Token::Close => {
                out.push(')');
                need_comma = true;
            }
            Token::Taxon(t) => {
                if need_comma {
                    out.push(',');
                }
                push_label(&mut out, tree.label(t));
                need_comma = true;
            }
        }
    }
    out.push(';');
    out
}

fn push_label(out: &mut String, label: &str) {
    let plain = !label.is_empty()
        && label.bytes().all(|c| !DELIMS.contains(&c) && !c.is_ascii_whitespace() && c != b'\'' && c != b']');
    if plain {
        out.push_str(label);
    } else {
        out.push('\'');
        out.push_str(&label.replace('\'', "''"));
        out.push('\'');
    }
}

impl std::str::FromStr for PhyloTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_newick(s, None)
    }
}
