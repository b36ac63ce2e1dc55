//! W-arrows and W-trees on crossing-free diagrams.
//!
//! A presentation is a set of `n` based circles carrying arrows. Every
//! end sits at a positive rational position; the base point is at 0 and
//! ends are met in increasing position order. Surgery turns each arrow
//! into one classical crossing: the over event at the tail, the under
//! event at the head, sign `+` for an even number of twists.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gauss::{BasedDiagram, Event, Role, Sign};
use crate::word::{FreeWord, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrowError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("component {comp} out of range for {components} components")]
    ComponentOutOfRange { comp: usize, components: usize },
    #[error("position {0} is not positive")]
    PositionNotPositive(Rational64),
    #[error("two ends at position {pos} on component {}", .comp + 1)]
    CoincidentPositions { comp: usize, pos: Rational64 },
    #[error("not ascending: component {} has a head before a tail", .0 + 1)]
    NotAscending(usize),
    #[error("malformed tree: {0}")]
    MalformedTree(String),
}

/// An end of an arrow or tree: component and position on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndPos {
    pub comp: usize,
    pub at: Rational64,
}

impl EndPos {
    pub fn new(comp: usize, at: Rational64) -> Self {
        EndPos { comp, at }
    }

    pub fn int(comp: usize, at: i64) -> Self {
        EndPos::new(comp, Rational64::from_integer(at))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WArrow {
    pub tail: EndPos,
    pub head: EndPos,
    /// Twist parity.
    pub twisted: bool,
}

/// A node of a W-tree, read from the head towards the tails. `twisted`
/// is the parity of twists on the edge leaving the node towards the head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeNode {
    Tail { at: EndPos, twisted: bool },
    Vertex { left: Box<TreeNode>, right: Box<TreeNode>, twisted: bool },
}

impl TreeNode {
    pub fn tail(at: EndPos) -> Self {
        TreeNode::Tail { at, twisted: false }
    }

    pub fn join(left: TreeNode, right: TreeNode) -> Self {
        TreeNode::Vertex {
            left: Box::new(left),
            right: Box::new(right),
            twisted: false,
        }
    }

    pub fn twist(self) -> Self {
        match self {
            TreeNode::Tail { at, twisted } => TreeNode::Tail { at, twisted: !twisted },
            TreeNode::Vertex { left, right, twisted } => TreeNode::Vertex {
                left,
                right,
                twisted: !twisted,
            },
        }
    }

    fn is_twisted(&self) -> bool {
        match self {
            TreeNode::Tail { twisted, .. } | TreeNode::Vertex { twisted, .. } => *twisted,
        }
    }

    fn collect_tails(&self, out: &mut Vec<EndPos>) {
        match self {
            TreeNode::Tail { at, .. } => out.push(*at),
            TreeNode::Vertex { left, right, .. } => {
                left.collect_tails(out);
                right.collect_tails(out);
            }
        }
    }

    /// Word read at the head: a tail gives its own letter, a vertex the
    /// commutator `[w_left, w_right]`, a twisted edge the inverse.
    fn head_word(&self) -> FreeWord<EndPos> {
        let w = match self {
            TreeNode::Tail { at, .. } => FreeWord::generator(*at),
            TreeNode::Vertex { left, right, .. } => FreeWord::commutator(&left.head_word(), &right.head_word()),
        };
        if self.is_twisted() {
            w.inverse()
        } else {
            w
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WTree {
    pub head: EndPos,
    pub root: TreeNode,
}

impl WTree {
    pub fn tails(&self) -> Vec<EndPos> {
        let mut out = Vec::new();
        self.root.collect_tails(&mut out);
        out
    }

    pub fn degree(&self) -> usize {
        self.tails().len()
    }

    fn validate(&self) -> Result<(), ArrowError> {
        let mut ends = self.tails();
        ends.push(self.head);
        for e in &ends {
            if e.at <= Rational64::zero() {
                return Err(ArrowError::PositionNotPositive(e.at));
            }
        }
        ends.sort();
        if let Some(w) = ends.windows(2).find(|w| w[0] == w[1]) {
            return Err(ArrowError::MalformedTree(format!(
                "two ends at position {} on component {}",
                w[0].at,
                w[0].comp + 1
            )));
        }
        Ok(())
    }
}

/// Number of arrows in the expansion of a tree of the given shape.
fn expansion_size(node: &TreeNode) -> usize {
    match node {
        TreeNode::Tail { .. } => 1,
        TreeNode::Vertex { left, right, .. } => 2 * (expansion_size(left) + expansion_size(right)),
    }
}

/// Replaces a tree by arrows: the head word `w` of the tree is written
/// letter by letter at consecutive positions starting at the head, and
/// each letter becomes an arrow from (a copy near) its tail, twisted iff
/// the letter is inverted. Copies of one end are spread over an interval
/// of length below `1 / (degree + 2)` after the end's position.
pub fn expand_tree(t: &WTree) -> Result<Vec<WArrow>, ArrowError> {
    t.validate()?;
    let word = t.root.head_word();
    let n = word.len();
    debug_assert_eq!(n, expansion_size(&t.root));
    let step = Rational64::new(1, ((n + 1) * (t.degree() + 2)) as i64);
    let mut copies: BTreeMap<EndPos, i64> = BTreeMap::new();
    Ok(word
        .letters()
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let c = copies.entry(l.gen).or_insert(0);
            let tail = EndPos::new(l.gen.comp, l.gen.at + step * Rational64::from_integer(*c));
            *c += 1;
            WArrow {
                tail,
                head: EndPos::new(t.head.comp, t.head.at + step * Rational64::from_integer(k as i64)),
                twisted: l.inverse,
            }
        })
        .collect())
}

/// Arrows on `components` based circles.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ArrowPresentation {
    pub components: usize,
    pub arrows: Vec<WArrow>,
}

impl ArrowPresentation {
    pub fn new(components: usize, arrows: Vec<WArrow>) -> Result<Self, ArrowError> {
        let p = ArrowPresentation { components, arrows };
        p.check_ends()?;
        Ok(p)
    }

    fn check_ends(&self) -> Result<(), ArrowError> {
        for a in &self.arrows {
            for e in [a.tail, a.head] {
                if e.comp >= self.components {
                    return Err(ArrowError::ComponentOutOfRange {
                        comp: e.comp + 1,
                        components: self.components,
                    });
                }
                if e.at <= Rational64::zero() {
                    return Err(ArrowError::PositionNotPositive(e.at));
                }
            }
        }
        Ok(())
    }

    /// All ends of component `i` in position order: `(position, arrow, role)`.
    fn ends_on(&self, i: usize) -> Vec<(Rational64, usize, Role)> {
        let mut ends: Vec<_> = self
            .arrows
            .iter()
            .enumerate()
            .flat_map(|(k, a)| {
                let mut v = Vec::new();
                if a.tail.comp == i {
                    v.push((a.tail.at, k, Role::Over));
                }
                if a.head.comp == i {
                    v.push((a.head.at, k, Role::Under));
                }
                v
            })
            .collect();
        ends.sort();
        ends
    }

    /// Ascending: on every component all tails come before all heads.
    pub fn is_ascending(&self) -> bool {
        (0..self.components).all(|i| self.first_descent(i).is_none())
    }

    fn first_descent(&self, i: usize) -> Option<usize> {
        let ends = self.ends_on(i);
        let mut seen_head = false;
        for (_, _, role) in ends {
            match role {
                Role::Under => seen_head = true,
                Role::Over if seen_head => return Some(i),
                Role::Over => {}
            }
        }
        None
    }

    pub fn parse(text: &str) -> Result<Self, ArrowError> {
        let mut components = None;
        let mut arrows = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |msg: &str| ArrowError::Syntax {
                line: no + 1,
                msg: msg.to_string(),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["components", n] => {
                    if components.is_some() {
                        return Err(syntax("repeated components header"));
                    }
                    components = Some(n.parse::<usize>().map_err(|_| syntax("bad component count"))?);
                }
                ["arrow", tail, "->", head, "twists", t] => {
                    if components.is_none() {
                        return Err(syntax("arrow before components header"));
                    }
                    let twists: u64 = t.parse().map_err(|_| syntax("bad twist count"))?;
                    arrows.push(WArrow {
                        tail: parse_end(tail).ok_or_else(|| syntax("bad tail end"))?,
                        head: parse_end(head).ok_or_else(|| syntax("bad head end"))?,
                        twisted: twists % 2 == 1,
                    });
                }
                _ => return Err(syntax("expected `components <n>` or `arrow <c>@<pos> -> <c>@<pos> twists <t>`")),
            }
        }
        let components = components.ok_or(ArrowError::Syntax {
            line: 0,
            msg: "missing components header".into(),
        })?;
        ArrowPresentation::new(components, arrows)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_end(s: &str) -> Option<EndPos> {
    let (c, p) = s.split_once('@')?;
    let comp: usize = c.parse().ok()?;
    if comp == 0 {
        return None;
    }
    let at = match p.split_once('/') {
        Some((a, b)) => {
            let den: i64 = b.parse().ok()?;
            if den == 0 {
                return None;
            }
            Rational64::new(a.parse().ok()?, den)
        }
        None => Rational64::from_integer(p.parse().ok()?),
    };
    Some(EndPos::new(comp - 1, at))
}

impl fmt::Display for ArrowPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "components {}", self.components)?;
        for a in &self.arrows {
            writeln!(
                f,
                "arrow {}@{} -> {}@{} twists {}",
                a.tail.comp + 1,
                a.tail.at,
                a.head.comp + 1,
                a.head.at,
                u8::from(a.twisted)
            )?;
        }
        Ok(())
    }
}

/// One arrow per crossing; event `k` of a component sits at position
/// `k + 1`.
pub fn from_diagram(d: &BasedDiagram) -> ArrowPresentation {
    let mut crossings: Vec<_> = d.crossings().into_iter().collect();
    crossings.sort_by_key(|(id, _)| *id);
    let pos = |loc: crate::gauss::EventLoc| EndPos::int(loc.comp, loc.index as i64 + 1);
    ArrowPresentation {
        components: d.component_count(),
        arrows: crossings
            .into_iter()
            .map(|(_, c)| WArrow {
                tail: pos(c.over),
                head: pos(c.under),
                twisted: c.sign == Sign::Neg,
            })
            .collect(),
    }
}

/// Appends the expansion of `t`.
pub fn add_tree(p: &ArrowPresentation, t: &WTree) -> Result<ArrowPresentation, ArrowError> {
    let mut arrows = p.arrows.clone();
    arrows.extend(expand_tree(t)?);
    ArrowPresentation::new(p.components, arrows)
}

/// Arrow `k` becomes crossing `k + 1`.
pub fn surgery(p: &ArrowPresentation) -> Result<BasedDiagram, ArrowError> {
    p.check_ends()?;
    let mut comps = Vec::with_capacity(p.components);
    for i in 0..p.components {
        let ends = p.ends_on(i);
        if let Some(w) = ends.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ArrowError::CoincidentPositions { comp: i, pos: w[0].0 });
        }
        comps.push(
            ends.into_iter()
                .map(|(_, k, role)| {
                    let sign = if p.arrows[k].twisted { Sign::Neg } else { Sign::Pos };
                    Event {
                        crossing: k as u32 + 1,
                        role,
                        sign,
                    }
                })
                .collect(),
        );
    }
    Ok(BasedDiagram::new(comps).expect("surgery yields a valid code"))
}

/// Words `l_i`: the tail components of the heads met along component
/// `i`, inverted for twisted arrows. Requires an ascending presentation.
pub fn l_words(p: &ArrowPresentation) -> Result<Vec<FreeWord<usize>>, ArrowError> {
    p.check_ends()?;
    if let Some(i) = (0..p.components).find_map(|i| p.first_descent(i)) {
        return Err(ArrowError::NotAscending(i));
    }
    Ok((0..p.components)
        .map(|i| {
            p.ends_on(i)
                .into_iter()
                .filter(|(_, _, role)| *role == Role::Under)
                .map(|(_, k, _)| {
                    let a = &p.arrows[k];
                    Letter::new(a.tail.comp, a.twisted)
                })
                .collect()
        })
        .collect())
}

/// A random degree-`k` tree over the arrow presentation of `d`, shaped
/// `(t_1, (t_2, ( ... , t_k)))` so that its head word is the left-normed
/// commutator of the tail letters. Every end lands in a uniformly chosen
/// gap between the events of its component; ends sharing a gap are spread
/// evenly inside it. Edge twists are uniform.
pub fn random_wk_tree(d: &BasedDiagram, k: usize, self_only: bool, seed: u64) -> WTree {
    assert!(k >= 1, "degree must be at least 1");
    let n = d.component_count();
    assert!(n >= 1, "need at least one component");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let head_comp = rng.gen_range(0..n);
    // (component, gap) for the head followed by the tails
    let mut slots: Vec<(usize, usize)> = Vec::with_capacity(k + 1);
    for e in 0..=k {
        let c = if self_only || e == 0 { head_comp } else { rng.gen_range(0..n) };
        slots.push((c, rng.gen_range(0..=d.component(c).len())));
    }
    let mut order: Vec<usize> = (0..=k).collect();
    order.shuffle(&mut rng);
    let mut seen: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut count: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for s in &slots {
        *count.entry(*s).or_default() += 1;
    }
    let mut ends = vec![EndPos::int(0, 0); k + 1];
    for e in order {
        let s = slots[e];
        let r = seen.entry(s).or_default();
        *r += 1;
        let at = Rational64::from_integer(s.1 as i64) + Rational64::new(*r, count[&s] + 1);
        ends[e] = EndPos::new(s.0, at);
    }
    let mut node = TreeNode::Tail {
        at: ends[k],
        twisted: rng.gen(),
    };
    for e in (1..k).rev() {
        let leaf = TreeNode::Tail {
            at: ends[e],
            twisted: rng.gen(),
        };
        node = TreeNode::Vertex {
            left: Box::new(leaf),
            right: Box::new(node),
            twisted: rng.gen(),
        };
    }
    if k > 1 && rng.gen() {
        node = node.twist();
    }
    WTree { head: ends[0], root: node }
}
