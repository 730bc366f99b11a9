//! Instance generator driven by the 3-dimensional matching reduction.
//!
//! The construction runs in two steps. First the 3DM instance is turned
//! into a bipartite "two overlapping matchings" problem: `S` holds the
//! ground elements of `X` and `Y` plus all hyperedges except the first one
//! of every `z`-group, `T` holds all hyperedges, and each retained hyperedge
//! chains to its predecessor inside its `z`-group. Second, that problem is
//! embedded into a perfect distance matching question by ordering `S` as
//! `S1\S2, S1∩S2, S2\S1`, inserting padding `S`-nodes around the middle
//! block, pairing them with fresh `T`-nodes, and setting `d` to the
//! pre-padding size of `S`. The resulting instance has a perfect
//! `d`-distance matching exactly when the 3DM instance has a matching
//! covering `Z`.

use crate::core::{Edge, Instance, Mode, Variant};
use crate::rational::rat;
use crate::{Error, Result};

/// A 3-dimensional matching instance over ground sets of equal size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeDimMatching {
    size: usize,
    triples: Vec<(usize, usize, usize)>,
}

impl ThreeDimMatching {
    /// `size` is `|X| = |Y| = |Z|`; triples are 1-based and must be
    /// pairwise distinct.
    pub fn new(size: usize, triples: Vec<(usize, usize, usize)>) -> Result<Self> {
        for &(x, y, z) in &triples {
            if x == 0 || x > size || y == 0 || y > size || z == 0 || z > size {
                return Err(Error::InvalidInput(format!(
                    "triple ({x},{y},{z}) out of range 1..={size}"
                )));
            }
        }
        let mut seen = triples.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate hyperedges".into()));
        }
        Ok(ThreeDimMatching { size, triples })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn triples(&self) -> &[(usize, usize, usize)] {
        &self.triples
    }
}

/// The generated instance plus human-readable provenance, emitted as
/// comments when the instance is serialized.
#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub instance: Instance,
    pub provenance: Vec<String>,
}

/// Abstract node of the intermediate bipartite problem's `S` side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SNode {
    /// Ground element x_i.
    X(usize),
    /// Ground element y_i.
    Y(usize),
    /// Hyperedge (by input index) retained on the S side.
    Hyper(usize),
}

/// Builds the perfect distance matching instance for a 3DM instance.
pub fn gen_from_3dm(tdm: &ThreeDimMatching) -> Result<ReductionOutput> {
    let size = tdm.size();
    let triples = tdm.triples();

    // group hyperedges by their z element, keeping input order
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); size];
    for (idx, &(_, _, z)) in triples.iter().enumerate() {
        groups[z - 1].push(idx);
    }

    // S side of the intermediate problem
    let mut first_of_group = vec![false; triples.len()];
    for group in &groups {
        if let Some(&head) = group.first() {
            first_of_group[head] = true;
        }
    }
    let s_x: Vec<SNode> = (1..=size).map(SNode::X).collect();
    let s_hyper: Vec<SNode> = (0..triples.len())
        .filter(|&i| !first_of_group[i])
        .map(SNode::Hyper)
        .collect();
    let s_y: Vec<SNode> = (1..=size).map(SNode::Y).collect();

    // intermediate edges as (S-node, hyperedge index)
    let mut inter_edges: Vec<(SNode, usize)> = Vec::new();
    for (idx, &(x, y, _)) in triples.iter().enumerate() {
        inter_edges.push((SNode::X(x), idx));
        inter_edges.push((SNode::Y(y), idx));
    }
    for group in &groups {
        for pair in group.windows(2) {
            // the retained hyperedge chains to its predecessor and itself
            inter_edges.push((SNode::Hyper(pair[1]), pair[0]));
            inter_edges.push((SNode::Hyper(pair[1]), pair[1]));
        }
    }

    // S1 \ S2 = X-part, S1 ∩ S2 = retained hyperedges, S2 \ S1 = Y-part.
    // The degenerate inclusions (empty X or Y part) need no padding: with
    // d = |S| every T-node is usable at most once, which already encodes
    // "both sides are matchings".
    let inter_s_count = s_x.len() + s_hyper.len() + s_y.len();
    let d = inter_s_count.max(1);
    let degenerate = s_x.is_empty() || s_y.is_empty();

    // final S order with padding blocks
    let mut order: Vec<Option<SNode>> = Vec::new();
    order.extend(s_x.iter().copied().map(Some));
    let pad_before = if degenerate { 0 } else { s_y.len() };
    order.extend(std::iter::repeat_n(None, pad_before));
    order.extend(s_hyper.iter().copied().map(Some));
    let pad_after = if degenerate { 0 } else { s_x.len() };
    order.extend(std::iter::repeat_n(None, pad_after));
    order.extend(s_y.iter().copied().map(Some));

    let n = order.len();
    let k = triples.len() + pad_before + pad_after;

    // positions of the real S-nodes
    let pos_of = |node: SNode| -> usize {
        order
            .iter()
            .position(|slot| *slot == Some(node))
            .expect("every intermediate S-node is placed")
            + 1
    };

    let mut edges = Vec::new();
    let mut provenance = Vec::new();
    provenance.push(format!(
        "3dm reduction: |X|=|Y|=|Z|={size}, {} hyperedges, d={d}",
        triples.len()
    ));
    for (idx, &(x, y, z)) in triples.iter().enumerate() {
        provenance.push(format!(
            "t{} encodes hyperedge {} = (x{x}, y{y}, z{z})",
            idx + 1,
            idx + 1
        ));
    }
    for (pos, slot) in order.iter().enumerate() {
        let line = match slot {
            Some(SNode::X(i)) => format!("s{} encodes x{i}", pos + 1),
            Some(SNode::Y(i)) => format!("s{} encodes y{i}", pos + 1),
            Some(SNode::Hyper(idx)) => format!("s{} encodes hyperedge {}", pos + 1, idx + 1),
            None => format!("s{} is padding", pos + 1),
        };
        provenance.push(line);
    }

    for &(node, hyper) in &inter_edges {
        edges.push(Edge::new(pos_of(node), hyper + 1, rat(1)));
    }
    // padding S-nodes get a private fresh T-node each
    let mut next_t = triples.len() + 1;
    for (pos, slot) in order.iter().enumerate() {
        if slot.is_none() {
            edges.push(Edge::new(pos + 1, next_t, rat(1)));
            provenance.push(format!("t{next_t} pads s{}", pos + 1));
            next_t += 1;
        }
    }

    let instance = Instance::new(n, k, d, edges, Variant::Line, Mode::Perfect)?;

    // degree claim: when no ground element occurs in more than three
    // triples, the construction keeps the maximum degree at four
    let mut occur = vec![0usize; 3 * size];
    for &(x, y, z) in triples {
        occur[x - 1] += 1;
        occur[size + y - 1] += 1;
        occur[2 * size + z - 1] += 1;
    }
    if occur.iter().all(|&c| c <= 3) {
        let max_deg = (1..=n)
            .map(|s| instance.edges_at_s(s).len())
            .chain((1..=k).map(|t| instance.edges_at_t(t).len()))
            .max()
            .unwrap_or(0);
        debug_assert!(max_deg <= 4, "degree bound of the reduction violated");
    }

    Ok(ReductionOutput {
        instance,
        provenance,
    })
}
