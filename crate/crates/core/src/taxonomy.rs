//! Thesaurus trees and tree cuts.
//!
//! A [`Taxonomy`] is a rooted tree whose leaves are words and whose internal
//! nodes are word classes. A [`TreeCut`] is an antichain of nodes whose leaf
//! sets partition the leaves of the tree.
//!
//! Two textual forms are accepted: an s-expression such as
//! `(ANIMAL (BIRD swallow crow robin) (INSECT bee bug))`, where a bare token is
//! a leaf word, and a JSON form made of `{"label": .., "children": [..]}`
//! objects.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Positional identifier of a node inside a [`Taxonomy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("taxonomy has no nodes")]
    Empty,
    #[error("duplicate leaf word {word:?}")]
    DuplicateLeaf { word: String },
    #[error("node {node} ({label:?}) refers to missing parent {parent}")]
    Orphan {
        node: NodeId,
        label: String,
        parent: usize,
    },
    #[error("multiple roots: {first:?} and {second:?}")]
    MultipleRoots { first: String, second: String },
    #[error("cycle through node {node} ({label:?})")]
    Cycle { node: NodeId, label: String },
    #[error("invalid label {label:?}: {reason}")]
    InvalidLabel { label: String, reason: &'static str },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown word {0:?}")]
    UnknownWord(String),
    #[error("invalid tree cut: {0}")]
    InvalidCut(CutViolation),
    #[error("cannot resolve node path {path:?}: {reason}")]
    BadPath { path: String, reason: String },
    #[error("json: {0}")]
    Json(String),
}

/// First problem found by [`Taxonomy::validate_cut`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutViolation {
    Empty,
    UnknownNode(NodeId),
    Repeated(NodeId),
    Dominates {
        ancestor: NodeId,
        descendant: NodeId,
    },
    /// No member covers the leaves below this node (the highest such node).
    Uncovered(NodeId),
}

impl fmt::Display for CutViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutViolation::Empty => write!(f, "cut has no members"),
            CutViolation::UnknownNode(n) => write!(f, "unknown node {n}"),
            CutViolation::Repeated(n) => write!(f, "node {n} appears twice"),
            CutViolation::Dominates {
                ancestor,
                descendant,
            } => write!(f, "{ancestor} dominates {descendant}"),
            CutViolation::Uncovered(n) => write!(f, "leaves under {n} are not covered"),
        }
    }
}

/// Flat description of a node used to build a [`Taxonomy`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub label: String,
    pub parent: Option<usize>,
}

impl NodeSpec {
    pub fn new(label: impl Into<String>, parent: Option<usize>) -> Self {
        NodeSpec {
            label: label.into(),
            parent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    label: String,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
}

impl Node {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Nested JSON form of a taxonomy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonNode {
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<JsonNode>,
}

/// A validated thesaurus tree. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    nodes: Vec<Node>,
    root: NodeId,
    words: HashMap<String, NodeId>,
    // preorder position and exclusive end of the subtree, per node
    pre: Vec<usize>,
    end: Vec<usize>,
    preorder: Vec<NodeId>,
    // leaves in preorder; each node owns the range leaf_lo..leaf_hi
    leaves: Vec<NodeId>,
    leaf_lo: Vec<usize>,
    leaf_hi: Vec<usize>,
    depth: Vec<usize>,
}

const RESERVED: &[char] = &['(', ')', ';', '/', '[', ']'];

fn check_label(label: &str) -> Result<(), TaxonomyError> {
    let reason = if label.is_empty() {
        Some("empty")
    } else if label.chars().any(char::is_whitespace) {
        Some("contains whitespace")
    } else if label.contains(RESERVED) {
        Some("contains one of ( ) ; / [ ]")
    } else {
        None
    };
    match reason {
        Some(reason) => Err(TaxonomyError::InvalidLabel {
            label: label.to_string(),
            reason,
        }),
        None => Ok(()),
    }
}

impl Taxonomy {
    /// Builds a taxonomy from a flat node list. Children keep the order in
    /// which they appear in `specs`.
    pub fn from_nodes(specs: Vec<NodeSpec>) -> Result<Self, TaxonomyError> {
        if specs.is_empty() {
            return Err(TaxonomyError::Empty);
        }
        let n = specs.len();
        let mut nodes: Vec<Node> = Vec::with_capacity(n);
        let mut root: Option<NodeId> = None;
        for (i, spec) in specs.iter().enumerate() {
            check_label(&spec.label)?;
            let parent = match spec.parent {
                Some(p) if p >= n => {
                    return Err(TaxonomyError::Orphan {
                        node: NodeId(i),
                        label: spec.label.clone(),
                        parent: p,
                    })
                }
                Some(p) => Some(NodeId(p)),
                None => {
                    if let Some(r) = root {
                        return Err(TaxonomyError::MultipleRoots {
                            first: specs[r.0].label.clone(),
                            second: spec.label.clone(),
                        });
                    }
                    root = Some(NodeId(i));
                    None
                }
            };
            nodes.push(Node {
                label: spec.label.clone(),
                parent,
                children: Vec::new(),
            });
        }
        for i in 0..n {
            if let Some(p) = nodes[i].parent {
                nodes[p.0].children.push(NodeId(i));
            }
        }
        let root = match root {
            Some(r) => r,
            None => {
                // every node has a parent, so following parents must loop
                let node = find_cycle(&nodes, NodeId(0));
                return Err(TaxonomyError::Cycle {
                    node,
                    label: nodes[node.0].label.clone(),
                });
            }
        };

        let mut pre = vec![usize::MAX; n];
        let mut end = vec![0; n];
        let mut depth = vec![0; n];
        let mut leaf_lo = vec![0; n];
        let mut leaf_hi = vec![0; n];
        let mut preorder = Vec::with_capacity(n);
        let mut leaves = Vec::new();
        // (node, entering?)
        let mut stack = vec![(root, true)];
        while let Some((id, enter)) = stack.pop() {
            if enter {
                pre[id.0] = preorder.len();
                preorder.push(id);
                leaf_lo[id.0] = leaves.len();
                stack.push((id, false));
                let node = &nodes[id.0];
                if node.children.is_empty() {
                    leaves.push(id);
                }
                for &c in node.children.iter().rev() {
                    depth[c.0] = depth[id.0] + 1;
                    stack.push((c, true));
                }
            } else {
                end[id.0] = preorder.len();
                leaf_hi[id.0] = leaves.len();
            }
        }
        if preorder.len() != n {
            let stray = (0..n).find(|&i| pre[i] == usize::MAX).unwrap();
            let node = find_cycle(&nodes, NodeId(stray));
            return Err(TaxonomyError::Cycle {
                node,
                label: nodes[node.0].label.clone(),
            });
        }

        let mut words = HashMap::with_capacity(leaves.len());
        for &leaf in &leaves {
            let word = nodes[leaf.0].label.clone();
            if words.insert(word.clone(), leaf).is_some() {
                return Err(TaxonomyError::DuplicateLeaf { word });
            }
        }

        Ok(Taxonomy {
            nodes,
            root,
            words,
            pre,
            end,
            preorder,
            leaves,
            leaf_lo,
            leaf_hi,
            depth,
        })
    }

    /// Parses either the s-expression or the JSON form, chosen by the first
    /// significant character.
    pub fn parse(text: &str) -> Result<Self, TaxonomyError> {
        let first = text
            .lines()
            .map(str::trim_start)
            .filter(|l| !l.is_empty() && !l.starts_with(';'))
            .find_map(|l| l.chars().next());
        match first {
            Some('{') => Self::from_json(text),
            _ => Self::parse_sexpr(text),
        }
    }

    pub fn parse_sexpr(text: &str) -> Result<Self, TaxonomyError> {
        let tokens = tokenize(text);
        let mut specs = Vec::new();
        let mut pos = 0;
        match tokens.first() {
            None => return Err(TaxonomyError::Empty),
            Some(tok) if tok.kind == Tok::Atom => {
                specs.push(NodeSpec::new(tok.text.clone(), None));
                pos = 1;
            }
            Some(_) => parse_list(&tokens, &mut pos, None, &mut specs)?,
        }
        if let Some(extra) = tokens.get(pos) {
            return Err(TaxonomyError::Syntax {
                line: extra.line,
                message: "unexpected input after the tree".into(),
            });
        }
        Self::from_nodes(specs)
    }

    pub fn from_json(text: &str) -> Result<Self, TaxonomyError> {
        let tree: JsonNode =
            serde_json::from_str(text).map_err(|e| TaxonomyError::Json(e.to_string()))?;
        Self::from_json_tree(&tree)
    }

    pub fn from_json_tree(tree: &JsonNode) -> Result<Self, TaxonomyError> {
        let mut specs = Vec::new();
        let mut stack = vec![(tree, None)];
        while let Some((node, parent)) = stack.pop() {
            let id = specs.len();
            specs.push(NodeSpec::new(node.label.clone(), parent));
            for child in node.children.iter().rev() {
                stack.push((child, Some(id)));
            }
        }
        // the stack visits children in reverse so that preorder matches the
        // document order; parents are always pushed before their children
        Self::from_nodes(specs)
    }

    pub fn to_json_tree(&self) -> JsonNode {
        fn build(t: &Taxonomy, id: NodeId) -> JsonNode {
            JsonNode {
                label: t.label(id).to_string(),
                children: t.children(id).iter().map(|&c| build(t, c)).collect(),
            }
        }
        build(self, self.root)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_tree()).expect("json tree serializes")
    }

    /// Compact s-expression; parses back to the same tree.
    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        if self.is_leaf(self.root) {
            out.push('(');
            out.push_str(self.label(self.root));
            out.push(')');
            return out;
        }
        enum Step {
            Open(NodeId),
            Close,
        }
        let mut stack = vec![Step::Open(self.root)];
        let mut first = true;
        while let Some(step) = stack.pop() {
            match step {
                Step::Open(id) => {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    if self.is_leaf(id) {
                        out.push_str(self.label(id));
                    } else {
                        out.push('(');
                        out.push_str(self.label(id));
                        stack.push(Step::Close);
                        for &c in self.children(id).iter().rev() {
                            stack.push(Step::Open(c));
                        }
                    }
                }
                Step::Close => out.push(')'),
            }
        }
        out
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves.len()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id.0)
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.0 < self.nodes.len()
    }

    pub fn check(&self, id: NodeId) -> Result<NodeId, TaxonomyError> {
        if self.contains(id) {
            Ok(id)
        } else {
            Err(TaxonomyError::UnknownNode(id))
        }
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.nodes[id.0].label
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.0].parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id.0].children
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id.0].children.is_empty()
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.depth[id.0]
    }

    /// Leaf node carrying `word`.
    pub fn leaf(&self, word: &str) -> Option<NodeId> {
        self.words.get(word).copied()
    }

    /// All nodes, parents before children, children left to right.
    pub fn preorder(&self) -> &[NodeId] {
        &self.preorder
    }

    pub fn preorder_index(&self, id: NodeId) -> usize {
        self.pre[id.0]
    }

    /// All leaves in left-to-right order.
    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    /// Leaves dominated by `id` (the node itself when it is a leaf).
    pub fn leaves_under(&self, id: NodeId) -> Result<&[NodeId], TaxonomyError> {
        self.check(id)?;
        Ok(&self.leaves[self.leaf_lo[id.0]..self.leaf_hi[id.0]])
    }

    /// `|C|`, the number of leaves under a node.
    #[inline]
    pub fn leaf_count(&self, id: NodeId) -> usize {
        self.leaf_hi[id.0] - self.leaf_lo[id.0]
    }

    /// True when `a` is `b` or an ancestor of `b`.
    #[inline]
    pub fn dominates_or_equal(&self, a: NodeId, b: NodeId) -> bool {
        let pb = self.pre[b.0];
        self.pre[a.0] <= pb && pb < self.end[a.0]
    }

    /// True when `a` is a proper ancestor of `b`.
    #[inline]
    pub fn dominates(&self, a: NodeId, b: NodeId) -> bool {
        a != b && self.dominates_or_equal(a, b)
    }

    /// `id` followed by its ancestors up to the root.
    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(id), move |&n| self.parent(n))
    }

    /// Root-to-node label path, `/`-separated. A sibling index `[k]` is
    /// appended to a segment whose label is shared with an earlier sibling.
    pub fn path(&self, id: NodeId) -> String {
        let mut segs: Vec<String> = Vec::new();
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            let label = self.label(cur);
            let k = self
                .children(p)
                .iter()
                .take_while(|&&c| c != cur)
                .filter(|&&c| self.label(c) == label)
                .count();
            if k == 0 {
                segs.push(label.to_string());
            } else {
                segs.push(format!("{label}[{k}]"));
            }
            cur = p;
        }
        segs.push(self.label(self.root).to_string());
        segs.reverse();
        segs.join("/")
    }

    pub fn resolve_path(&self, path: &str) -> Result<NodeId, TaxonomyError> {
        let bad = |reason: String| TaxonomyError::BadPath {
            path: path.to_string(),
            reason,
        };
        let mut segs = path.split('/');
        let first = segs.next().unwrap_or_default();
        if first != self.label(self.root) {
            return Err(bad(format!("root is {:?}", self.label(self.root))));
        }
        let mut cur = self.root;
        for seg in segs {
            let (label, k) = match seg.strip_suffix(']').and_then(|s| s.split_once('[')) {
                Some((label, k)) => (
                    label,
                    k.parse::<usize>()
                        .map_err(|_| bad(format!("bad sibling index in {seg:?}")))?,
                ),
                None => (seg, 0),
            };
            cur = self
                .children(cur)
                .iter()
                .copied()
                .filter(|&c| self.label(c) == label)
                .nth(k)
                .ok_or_else(|| bad(format!("no child {seg:?} under {:?}", self.label(cur))))?;
        }
        Ok(cur)
    }

    /// Cut made of the root alone.
    pub fn root_cut(&self) -> TreeCut {
        TreeCut {
            members: vec![self.root],
        }
    }

    /// Cut made of every leaf.
    pub fn leaf_cut(&self) -> TreeCut {
        TreeCut {
            members: self.leaves.clone(),
        }
    }

    /// Validates `members` as a cut and returns it in canonical
    /// (left-to-right) order.
    pub fn cut(&self, members: impl IntoIterator<Item = NodeId>) -> Result<TreeCut, TaxonomyError> {
        let cut = TreeCut::new(members.into_iter().collect());
        self.validate_cut(&cut).map_err(TaxonomyError::InvalidCut)?;
        Ok(self.canonical(cut))
    }

    /// Cut from root-to-node label paths (see [`Taxonomy::path`]).
    pub fn cut_from_paths<'a>(
        &self,
        paths: impl IntoIterator<Item = &'a str>,
    ) -> Result<TreeCut, TaxonomyError> {
        let ids = paths
            .into_iter()
            .map(|p| self.resolve_path(p))
            .collect::<Result<Vec<_>, _>>()?;
        self.cut(ids)
    }

    fn canonical(&self, mut cut: TreeCut) -> TreeCut {
        cut.members.sort_by_key(|m| self.pre[m.0]);
        cut
    }

    pub fn validate_cut(&self, cut: &TreeCut) -> Result<(), CutViolation> {
        if cut.members.is_empty() {
            return Err(CutViolation::Empty);
        }
        if let Some(&m) = cut.members.iter().find(|m| !self.contains(**m)) {
            return Err(CutViolation::UnknownNode(m));
        }
        let mut sorted = cut.members.clone();
        sorted.sort_by_key(|m| self.pre[m.0]);
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(CutViolation::Repeated(w[0]));
            }
            // in preorder, a dominated member immediately follows its ancestor
            if self.dominates(w[0], w[1]) {
                return Err(CutViolation::Dominates {
                    ancestor: w[0],
                    descendant: w[1],
                });
            }
        }
        let covered: usize = sorted.iter().map(|&m| self.leaf_count(m)).sum();
        if covered == self.num_leaves() {
            return Ok(());
        }
        // highest node whose subtree holds no member and is not below one
        let has_member_in = |id: NodeId| {
            let lo = self.pre[id.0];
            let i = sorted.partition_point(|m| self.pre[m.0] < lo);
            i < sorted.len() && self.pre[sorted[i].0] < self.end[id.0]
        };
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if sorted
                .binary_search_by_key(&self.pre[id.0], |m| self.pre[m.0])
                .is_ok()
            {
                continue;
            }
            if !has_member_in(id) {
                return Err(CutViolation::Uncovered(id));
            }
            stack.extend(self.children(id).iter().rev());
        }
        unreachable!("leaf coverage mismatch without an uncovered node")
    }

    /// Position of the member of `cut` that dominates (or is) `node`.
    /// `cut` must be canonical, as returned by the methods of this type.
    pub fn covering_member(&self, cut: &TreeCut, node: NodeId) -> Option<usize> {
        let p = self.pre[node.0];
        let i = cut.members.partition_point(|m| self.pre[m.0] <= p);
        if i == 0 {
            return None;
        }
        let m = cut.members[i - 1];
        self.dominates_or_equal(m, node).then_some(i - 1)
    }

    /// Coarsest cut refining both `a` and `b`: for each leaf, the deeper of its
    /// two covering members.
    pub fn meet(&self, a: &TreeCut, b: &TreeCut) -> Result<TreeCut, TaxonomyError> {
        self.validate_cut(a).map_err(TaxonomyError::InvalidCut)?;
        self.validate_cut(b).map_err(TaxonomyError::InvalidCut)?;
        let a = self.canonical(a.clone());
        let b = self.canonical(b.clone());
        let mut members = Vec::with_capacity(a.len().max(b.len()));
        for &x in &a.members {
            if self.covering_member(&b, x).is_some() {
                members.push(x);
            }
        }
        for &y in &b.members {
            if let Some(i) = self.covering_member(&a, y) {
                if a.members[i] != y {
                    members.push(y);
                }
            }
        }
        Ok(self.canonical(TreeCut { members }))
    }

    /// True when every member of `fine` lies under some member of `coarse`.
    pub fn is_refinement(&self, fine: &TreeCut, coarse: &TreeCut) -> bool {
        let coarse = self.canonical(coarse.clone());
        fine.members
            .iter()
            .all(|&m| self.covering_member(&coarse, m).is_some())
    }
}

fn find_cycle(nodes: &[Node], start: NodeId) -> NodeId {
    let mut seen = vec![false; nodes.len()];
    let mut cur = start;
    loop {
        if seen[cur.0] {
            return cur;
        }
        seen[cur.0] = true;
        match nodes[cur.0].parent {
            Some(p) => cur = p,
            None => return cur,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Atom,
}

#[derive(Debug)]
struct Token {
    kind: Tok,
    text: String,
    line: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = match line.find(';') {
            Some(i) => &line[..i],
            None => line,
        };
        let mut atom = String::new();
        let flush = |atom: &mut String, out: &mut Vec<Token>| {
            if !atom.is_empty() {
                out.push(Token {
                    kind: Tok::Atom,
                    text: std::mem::take(atom),
                    line: line_no,
                });
            }
        };
        for ch in line.chars() {
            match ch {
                '(' | ')' => {
                    flush(&mut atom, &mut out);
                    out.push(Token {
                        kind: if ch == '(' { Tok::Open } else { Tok::Close },
                        text: ch.to_string(),
                        line: line_no,
                    });
                }
                c if c.is_whitespace() => flush(&mut atom, &mut out),
                c => atom.push(c),
            }
        }
        flush(&mut atom, &mut out);
    }
    out
}

// Parses `( LABEL item* )` starting at tokens[*pos], which must be `(`.
fn parse_list(
    tokens: &[Token],
    pos: &mut usize,
    parent: Option<usize>,
    specs: &mut Vec<NodeSpec>,
) -> Result<(), TaxonomyError> {
    let syntax = |line: usize, message: &str| TaxonomyError::Syntax {
        line,
        message: message.to_string(),
    };
    let open = &tokens[*pos];
    if open.kind != Tok::Open {
        return Err(syntax(open.line, "expected '('"));
    }
    *pos += 1;
    let label = match tokens.get(*pos) {
        Some(t) if t.kind == Tok::Atom => t,
        Some(t) => return Err(syntax(t.line, "expected a label after '('")),
        None => return Err(syntax(open.line, "unterminated list")),
    };
    let id = specs.len();
    specs.push(NodeSpec::new(label.text.clone(), parent));
    *pos += 1;
    loop {
        match tokens.get(*pos) {
            None => return Err(syntax(open.line, "unterminated list")),
            Some(t) => match t.kind {
                Tok::Close => {
                    *pos += 1;
                    return Ok(());
                }
                Tok::Atom => {
                    specs.push(NodeSpec::new(t.text.clone(), Some(id)));
                    *pos += 1;
                }
                Tok::Open => parse_list(tokens, pos, Some(id), specs)?,
            },
        }
    }
}

/// Antichain of nodes covering every leaf exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeCut {
    members: Vec<NodeId>,
}

impl TreeCut {
    /// Unchecked; see [`Taxonomy::cut`] for the validating constructor.
    pub fn new(members: Vec<NodeId>) -> Self {
        TreeCut { members }
    }

    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const ANIMAL: &str = "(ANIMAL (BIRD swallow crow robin) (INSECT bee bug))";

    fn animal() -> Taxonomy {
        Taxonomy::parse(ANIMAL).unwrap()
    }

    fn id(t: &Taxonomy, label: &str) -> NodeId {
        t.preorder()
            .iter()
            .copied()
            .find(|&n| t.label(n) == label)
            .unwrap()
    }

    #[test]
    fn parses_nested_form() {
        let t = animal();
        assert_eq!(t.len(), 8);
        assert_eq!(t.num_leaves(), 5);
        assert_eq!(t.label(t.root()), "ANIMAL");
        let words: Vec<_> = t.leaves().iter().map(|&l| t.label(l)).collect();
        assert_eq!(words, ["swallow", "crow", "robin", "bee", "bug"]);
    }

    #[test]
    fn duplicate_leaf_is_rejected() {
        assert_eq!(
            Taxonomy::parse("(A x x)"),
            Err(TaxonomyError::DuplicateLeaf { word: "x".into() })
        );
    }

    #[test]
    fn single_leaf_taxonomy() {
        let t = Taxonomy::parse("(x)").unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.is_leaf(t.root()));
        assert_eq!(t.leaf("x"), Some(t.root()));
        assert_eq!(t.to_sexpr(), "(x)");
    }

    #[test]
    fn comments_and_layout() {
        let t = Taxonomy::parse(
            "; a comment\n(ANIMAL\n  (BIRD swallow crow robin) ; birds\n  (INSECT bee bug))\n",
        )
        .unwrap();
        assert_eq!(t, animal());
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            Taxonomy::parse("(A x"),
            Err(TaxonomyError::Syntax { .. })
        ));
        assert!(matches!(
            Taxonomy::parse("(A x) (B y)"),
            Err(TaxonomyError::Syntax { .. })
        ));
        assert!(matches!(
            Taxonomy::parse("(() x)"),
            Err(TaxonomyError::Syntax { .. })
        ));
        assert_eq!(Taxonomy::parse("  ; nothing\n"), Err(TaxonomyError::Empty));
    }

    #[test]
    fn node_list_errors() {
        let orphan = vec![NodeSpec::new("A", None), NodeSpec::new("x", Some(7))];
        assert!(matches!(
            Taxonomy::from_nodes(orphan),
            Err(TaxonomyError::Orphan { parent: 7, .. })
        ));
        let two_roots = vec![NodeSpec::new("A", None), NodeSpec::new("B", None)];
        assert!(matches!(
            Taxonomy::from_nodes(two_roots),
            Err(TaxonomyError::MultipleRoots { .. })
        ));
        let cycle = vec![
            NodeSpec::new("A", None),
            NodeSpec::new("x", Some(0)),
            NodeSpec::new("B", Some(3)),
            NodeSpec::new("C", Some(2)),
        ];
        assert!(matches!(
            Taxonomy::from_nodes(cycle),
            Err(TaxonomyError::Cycle { .. })
        ));
        let rootless = vec![NodeSpec::new("A", Some(0))];
        assert!(matches!(
            Taxonomy::from_nodes(rootless),
            Err(TaxonomyError::Cycle { .. })
        ));
        assert!(matches!(
            Taxonomy::parse("(A b/c)"),
            Err(TaxonomyError::InvalidLabel { .. })
        ));
    }

    #[test]
    fn shared_labels_are_display_only() {
        let t = Taxonomy::parse("(ROOT (X a b) (X c d))").unwrap();
        let xs: Vec<_> = t
            .preorder()
            .iter()
            .copied()
            .filter(|&n| t.label(n) == "X")
            .collect();
        assert_eq!(xs.len(), 2);
        assert_eq!(t.path(xs[0]), "ROOT/X");
        assert_eq!(t.path(xs[1]), "ROOT/X[1]");
        for &n in t.preorder() {
            assert_eq!(t.resolve_path(&t.path(n)).unwrap(), n);
        }
    }

    #[test]
    fn json_round_trip() {
        let t = animal();
        let json = t.to_json();
        let back = Taxonomy::parse(&json).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_sexpr(), ANIMAL);
    }

    #[test]
    fn leaves_under_nodes() {
        let t = animal();
        let bird = id(&t, "BIRD");
        let words: Vec<_> = t
            .leaves_under(bird)
            .unwrap()
            .iter()
            .map(|&l| t.label(l))
            .collect();
        assert_eq!(words, ["swallow", "crow", "robin"]);
        let robin = t.leaf("robin").unwrap();
        assert_eq!(t.leaves_under(robin).unwrap(), &[robin]);
        assert_eq!(t.leaves_under(t.root()).unwrap().len(), 5);
        assert_eq!(
            t.leaves_under(NodeId(99)),
            Err(TaxonomyError::UnknownNode(NodeId(99)))
        );
    }

    #[test]
    fn validate_cut_reports_first_violation() {
        let t = animal();
        let (animal_id, bird, insect) = (t.root(), id(&t, "BIRD"), id(&t, "INSECT"));
        assert_eq!(t.validate_cut(&TreeCut::new(vec![bird, insect])), Ok(()));
        assert_eq!(
            t.validate_cut(&TreeCut::new(vec![animal_id, bird])),
            Err(CutViolation::Dominates {
                ancestor: animal_id,
                descendant: bird
            })
        );
        assert_eq!(
            t.validate_cut(&TreeCut::new(vec![bird])),
            Err(CutViolation::Uncovered(insect))
        );
        assert_eq!(
            t.validate_cut(&TreeCut::new(vec![bird, bird, insect])),
            Err(CutViolation::Repeated(bird))
        );
        assert_eq!(
            t.validate_cut(&TreeCut::new(vec![NodeId(42)])),
            Err(CutViolation::UnknownNode(NodeId(42)))
        );
        let bee = t.leaf("bee").unwrap();
        assert_eq!(
            t.validate_cut(&TreeCut::new(vec![bird, bee])),
            Err(CutViolation::Uncovered(t.leaf("bug").unwrap()))
        );
    }

    #[test]
    fn meet_examples() {
        let t = animal();
        let (bird, insect) = (id(&t, "BIRD"), id(&t, "INSECT"));
        let split = t.cut([insect, bird]).unwrap();
        assert_eq!(t.meet(&t.root_cut(), &split).unwrap(), split);
        assert_eq!(t.meet(&split, &split).unwrap(), split);
        let bad = TreeCut::new(vec![bird]);
        assert!(matches!(
            t.meet(&bad, &split),
            Err(TaxonomyError::InvalidCut(_))
        ));
    }

    #[test]
    fn meet_of_crossing_cuts() {
        let t = Taxonomy::parse("(R (L a b) (M c d))").unwrap();
        let (l, m) = (id(&t, "L"), id(&t, "M"));
        let leaf = |w: &str| t.leaf(w).unwrap();
        let a = t.cut([l, leaf("c"), leaf("d")]).unwrap();
        let b = t.cut([leaf("a"), leaf("b"), m]).unwrap();
        let meet = t.meet(&a, &b).unwrap();
        assert_eq!(meet, t.leaf_cut());
        assert_eq!(t.meet(&b, &a).unwrap(), meet);
    }

    #[test]
    fn covering_member_lookup() {
        let t = animal();
        let cut = t.cut([id(&t, "INSECT"), id(&t, "BIRD")]).unwrap();
        assert_eq!(t.covering_member(&cut, t.leaf("crow").unwrap()), Some(0));
        assert_eq!(t.covering_member(&cut, t.leaf("bug").unwrap()), Some(1));
        assert_eq!(t.covering_member(&cut, id(&t, "INSECT")), Some(1));
        assert_eq!(t.covering_member(&cut, t.root()), None);
    }
}
