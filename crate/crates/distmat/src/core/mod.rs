//! Instance and matching model: feasibility, hit sets, windows and the
//! reduction from the non-perfect to the perfect problem.
//!
//! Conventions used throughout the crate:
//!
//! * `S`-nodes are the positions `1..=n` (the order is part of the input),
//!   `T`-nodes are `1..=k`.
//! * Edges are stored sorted by `(s, t)`; an [`EdgeId`] is the index into
//!   that canonical order, so sorted id lists are already in canonical
//!   lexicographic edge order.
//! * Instances and matchings are immutable after construction; every
//!   operation here is a pure function.

mod format;

pub use format::{
    digest, parse_edge_list, parse_instance, parse_matching, serialize_instance,
    serialize_matching, ParsedInstance,
};

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::rational::{rat, Rat};
use crate::{Error, Result};

/// Index into [`Instance::edges`].
pub type EdgeId = usize;

/// Whether the `S`-positions are on a line or a cycle.
///
/// Cyclic distance is `min(|j-i|, n-|j-i|)`. With `n < 2d-1` every pair of
/// positions is cyclically closer than `d`, so each `T`-node is usable at
/// most once; such instances are legal, just degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Line,
    Cycle,
}

/// Whether every `S`-node must be covered (perfect) or not (maximum).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Perfect,
    Maximum,
}

/// An edge between `S`-position `s` (1-based) and `T`-node `t` (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub s: usize,
    pub t: usize,
    pub weight: Rat,
}

impl Edge {
    pub fn new(s: usize, t: usize, weight: Rat) -> Self {
        Edge { s, t, weight }
    }
}

/// An ordered bipartite instance of the distance matching problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    k: usize,
    d: usize,
    edges: Vec<Edge>,
    variant: Variant,
    mode: Mode,
    adj_s: Vec<Vec<EdgeId>>,
    adj_t: Vec<Vec<EdgeId>>,
}

impl Instance {
    /// Builds an instance, sorting edges into canonical `(s, t)` order.
    ///
    /// Rejects `d == 0`, out-of-range endpoints and duplicate `(s, t)` pairs
    /// (the graph is simple by definition).
    pub fn new(
        n: usize,
        k: usize,
        d: usize,
        mut edges: Vec<Edge>,
        variant: Variant,
        mode: Mode,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput(
                "distance parameter must be positive".into(),
            ));
        }
        for e in &edges {
            if e.s == 0 || e.s > n {
                return Err(Error::InvalidInput(format!(
                    "edge endpoint s{} out of range 1..={n}",
                    e.s
                )));
            }
            if e.t == 0 || e.t > k {
                return Err(Error::InvalidInput(format!(
                    "edge endpoint t{} out of range 1..={k}",
                    e.t
                )));
            }
        }
        edges.sort_by_key(|e| (e.s, e.t));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].s, w[0].t) == (w[1].s, w[1].t))
        {
            return Err(Error::InvalidInput(format!(
                "duplicate edge s{} t{}",
                w[0].s, w[0].t
            )));
        }
        let mut adj_s = vec![Vec::new(); n];
        let mut adj_t = vec![Vec::new(); k];
        for (id, e) in edges.iter().enumerate() {
            adj_s[e.s - 1].push(id);
            adj_t[e.t - 1].push(id);
        }
        Ok(Instance {
            n,
            k,
            d,
            edges,
            variant,
            mode,
            adj_s,
            adj_t,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// Edge ids incident to `S`-position `s`, ascending (hence by `t`).
    pub fn edges_at_s(&self, s: usize) -> &[EdgeId] {
        &self.adj_s[s - 1]
    }

    /// Edge ids incident to `T`-node `t`, ascending (hence by `s`).
    pub fn edges_at_t(&self, t: usize) -> &[EdgeId] {
        &self.adj_t[t - 1]
    }

    /// Looks up the id of edge `(s, t)` if present.
    pub fn edge_id(&self, s: usize, t: usize) -> Option<EdgeId> {
        if s == 0 || s > self.n {
            return None;
        }
        self.adj_s[s - 1]
            .binary_search_by(|id| self.edges[*id].t.cmp(&t))
            .ok()
            .map(|pos| self.adj_s[s - 1][pos])
    }

    /// Same instance under a different mode.
    pub fn with_mode(&self, mode: Mode) -> Instance {
        let mut inst = self.clone();
        inst.mode = mode;
        inst
    }

    /// Same graph with all weights replaced by 1 (cardinality view).
    pub fn unit_weights(&self) -> Instance {
        let mut inst = self.clone();
        for e in &mut inst.edges {
            e.weight = rat(1);
        }
        inst
    }

    /// Distance between `S`-positions `i` and `j` under the variant.
    pub fn separation(&self, i: usize, j: usize) -> usize {
        let gap = i.abs_diff(j);
        match self.variant {
            Variant::Line => gap,
            Variant::Cycle => gap.min(self.n - gap),
        }
    }

    /// The window of up to `d` positions ending at `i` (inclusive).
    pub fn left_window(&self, i: usize) -> Vec<usize> {
        debug_assert!(i >= 1 && i <= self.n);
        match self.variant {
            Variant::Line => (i.saturating_sub(self.d - 1).max(1)..=i).collect(),
            Variant::Cycle => {
                let len = self.d.min(self.n);
                (0..len)
                    .map(|off| wrap_pos(i + self.n - (len - 1 - off), self.n))
                    .collect()
            }
        }
    }

    /// The window of up to `d` positions starting at `i` (inclusive).
    pub fn right_window(&self, i: usize) -> Vec<usize> {
        debug_assert!(i >= 1 && i <= self.n);
        match self.variant {
            Variant::Line => (i..=(i + self.d - 1).min(self.n)).collect(),
            Variant::Cycle => {
                let len = self.d.min(self.n);
                (0..len).map(|off| wrap_pos(i + off, self.n)).collect()
            }
        }
    }

    /// Both windows around position `i`.
    pub fn window(&self, i: usize) -> Window {
        Window {
            center: i,
            left: self.left_window(i),
            right: self.right_window(i),
        }
    }

    /// Feasibility of `m` under this instance's variant and mode.
    ///
    /// Returns the first violation found in a fixed scan order: `S`-degrees
    /// ascending by position, then distance conflicts ascending by `T`-node
    /// and position, then uncovered nodes (perfect mode only).
    pub fn feasibility(&self, m: &Matching) -> Result<Feasibility> {
        for &id in m.ids() {
            if id >= self.edges.len() {
                return Err(Error::InvalidInput(format!("edge id {id} out of range")));
            }
        }
        let mut cover: Vec<Option<EdgeId>> = vec![None; self.n];
        for &id in m.ids() {
            let s = self.edges[id].s;
            if let Some(prev) = cover[s - 1] {
                return Ok(Feasibility::Violated(Violation::Degree {
                    s,
                    first: prev,
                    second: id,
                }));
            }
            cover[s - 1] = Some(id);
        }
        for t in 1..=self.k {
            let mut hits: Vec<EdgeId> = m
                .ids()
                .iter()
                .copied()
                .filter(|&id| self.edges[id].t == t)
                .collect();
            hits.sort_by_key(|&id| self.edges[id].s);
            for w in hits.windows(2) {
                if self.separation(self.edges[w[0]].s, self.edges[w[1]].s) < self.d {
                    return Ok(Feasibility::Violated(Violation::Distance {
                        first: w[0],
                        second: w[1],
                    }));
                }
            }
            if self.variant == Variant::Cycle && hits.len() >= 2 {
                let (first, last) = (hits[0], hits[hits.len() - 1]);
                if self.separation(self.edges[first].s, self.edges[last].s) < self.d {
                    return Ok(Feasibility::Violated(Violation::Distance {
                        first,
                        second: last,
                    }));
                }
            }
        }
        if self.mode == Mode::Perfect {
            if let Some(s) = cover.iter().position(|c| c.is_none()) {
                return Ok(Feasibility::Violated(Violation::Uncovered { s: s + 1 }));
            }
        }
        Ok(Feasibility::Feasible)
    }

    pub fn is_feasible(&self, m: &Matching) -> Result<bool> {
        Ok(matches!(self.feasibility(m)?, Feasibility::Feasible))
    }

    /// Degree and distance constraints only, ignoring the coverage
    /// requirement of perfect mode. This is the notion of feasibility used
    /// by the greedy and local-search machinery.
    pub fn is_feasible_partial(&self, m: &Matching) -> Result<bool> {
        self.with_mode_view(Mode::Maximum).is_feasible(m)
    }

    fn with_mode_view(&self, mode: Mode) -> Instance {
        if self.mode == mode {
            self.clone()
        } else {
            self.with_mode(mode)
        }
    }

    /// Whether edge `id` can join `m` without breaking degree or distance
    /// constraints. `m` is assumed partially feasible.
    pub fn edge_compatible(&self, m: &Matching, id: EdgeId) -> bool {
        let e = &self.edges[id];
        for &other in m.ids() {
            let o = &self.edges[other];
            if o.s == e.s {
                return false;
            }
            if o.t == e.t && self.separation(o.s, e.s) < self.d {
                return false;
            }
        }
        true
    }

    /// Total weight of `m`, exactly.
    pub fn weight(&self, m: &Matching) -> Rat {
        m.ids()
            .iter()
            .map(|&id| self.edges[id].weight.clone())
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// The minimal subset of `m` whose removal makes `m + probe` feasible:
    /// edges of `m` at the probe's `S`-node plus edges of `m` at its
    /// `T`-node within distance `< d`.
    pub fn hit_set(&self, m: &Matching, probe: EdgeId) -> Result<Vec<EdgeId>> {
        if probe >= self.edges.len() {
            return Err(Error::InvalidInput(format!("edge id {probe} out of range")));
        }
        if m.contains(probe) {
            return Err(Error::InvalidInput(
                "probe edge already belongs to the matching".into(),
            ));
        }
        let e = &self.edges[probe];
        let mut hit: Vec<EdgeId> = m
            .ids()
            .iter()
            .copied()
            .filter(|&id| {
                let o = &self.edges[id];
                o.s == e.s || (o.t == e.t && self.separation(o.s, e.s) < self.d)
            })
            .collect();
        hit.sort_unstable();
        Ok(hit)
    }

    /// Union of the hit sets of all probes.
    pub fn hit_set_union(&self, m: &Matching, probes: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let mut out = BTreeSet::new();
        for &probe in probes {
            out.extend(self.hit_set(m, probe)?);
        }
        Ok(out.into_iter().collect())
    }

    /// Hit set in the loop-extended setting: a graph edge hits its plain hit
    /// set plus every loop at its `S`-node; a loop hits only itself.
    pub fn hit_set_plus(&self, em: &ExtendedMatching, probe: Probe) -> Result<HitSetPlus> {
        match probe {
            Probe::Edge(id) => {
                let edges = self.hit_set(&em.matching, id)?;
                let s = self.edges[id].s;
                let loops = em.loops.iter().copied().filter(|&l| l == s).collect();
                Ok(HitSetPlus { edges, loops })
            }
            Probe::Loop(s) => {
                if !em.loops.contains(&s) {
                    return Err(Error::InvalidInput(format!(
                        "no loop at s{s} in the matching"
                    )));
                }
                Ok(HitSetPlus {
                    edges: Vec::new(),
                    loops: vec![s],
                })
            }
        }
    }

    /// Union of extended hit sets over a set of graph edges.
    pub fn hit_set_plus_union(
        &self,
        em: &ExtendedMatching,
        probes: &[EdgeId],
    ) -> Result<HitSetPlus> {
        let mut edges = BTreeSet::new();
        let mut stations = BTreeSet::new();
        for &probe in probes {
            let h = self.hit_set_plus(em, Probe::Edge(probe))?;
            edges.extend(h.edges);
            stations.insert(self.edges[probe].s);
        }
        let loops = em
            .loops
            .iter()
            .copied()
            .filter(|l| stations.contains(l))
            .collect();
        Ok(HitSetPlus {
            edges: edges.into_iter().collect(),
            loops,
        })
    }
}

fn wrap_pos(raw: usize, n: usize) -> usize {
    (raw - 1) % n + 1
}

/// Reduces a maximum-mode instance to a perfect one by giving every
/// `S`-node a private zero-weight `T`-node. Optimal values coincide.
pub fn to_perfect(inst: &Instance) -> Result<Instance> {
    if inst.mode() == Mode::Perfect {
        return Err(Error::InvalidInput(
            "instance is already in perfect mode".into(),
        ));
    }
    let mut edges = inst.edges().to_vec();
    for s in 1..=inst.n() {
        edges.push(Edge::new(s, inst.k() + s, Rat::zero()));
    }
    Instance::new(
        inst.n(),
        inst.k() + inst.n(),
        inst.d(),
        edges,
        inst.variant(),
        Mode::Perfect,
    )
}

/// A set of edge ids, kept sorted; the canonical representation of a
/// (candidate) distance matching.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    ids: Vec<EdgeId>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { ids: Vec::new() }
    }

    /// Builds a matching from edge ids, rejecting duplicates.
    pub fn from_ids(mut ids: Vec<EdgeId>) -> Result<Self> {
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate edge in matching".into()));
        }
        Ok(Matching { ids })
    }

    /// Looks the `(s, t)` pairs up in `inst` and builds a matching.
    pub fn from_pairs(inst: &Instance, pairs: &[(usize, usize)]) -> Result<Self> {
        let ids = pairs
            .iter()
            .map(|&(s, t)| {
                inst.edge_id(s, t)
                    .ok_or_else(|| Error::InvalidInput(format!("no edge s{s} t{t} in instance")))
            })
            .collect::<Result<Vec<_>>>()?;
        Matching::from_ids(ids)
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    /// The `(s, t)` pairs of this matching in canonical order.
    pub fn pairs(&self, inst: &Instance) -> Vec<(usize, usize)> {
        self.ids
            .iter()
            .map(|&id| (inst.edge(id).s, inst.edge(id).t))
            .collect()
    }

    /// Replaces `removed` by `added`; both inputs must be disjoint from /
    /// contained in the matching respectively.
    pub fn replace(&self, removed: &[EdgeId], added: &[EdgeId]) -> Result<Matching> {
        let removed: BTreeSet<_> = removed.iter().copied().collect();
        let mut ids: Vec<EdgeId> = self
            .ids
            .iter()
            .copied()
            .filter(|id| !removed.contains(id))
            .collect();
        ids.extend_from_slice(added);
        Matching::from_ids(ids)
    }
}

/// A matching together with a multiset of loops on `S`-nodes, the extended
/// objects behind the loop-aware local-optimality theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedMatching {
    pub matching: Matching,
    /// Loop positions, sorted, with multiplicity.
    pub loops: Vec<usize>,
}

impl ExtendedMatching {
    pub fn new(matching: Matching, mut loops: Vec<usize>) -> Self {
        loops.sort_unstable();
        ExtendedMatching { matching, loops }
    }

    /// Loops count toward the size of an extended matching.
    pub fn size(&self) -> usize {
        self.matching.len() + self.loops.len()
    }
}

/// Probe argument for [`Instance::hit_set_plus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Edge(EdgeId),
    Loop(usize),
}

/// Result of an extended hit-set query; loops are reported with
/// multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HitSetPlus {
    pub edges: Vec<EdgeId>,
    pub loops: Vec<usize>,
}

impl HitSetPlus {
    pub fn size(&self) -> usize {
        self.edges.len() + self.loops.len()
    }
}

/// Windows around an `S`-position; both sides include the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub center: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Outcome of a feasibility check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Violated(Violation),
}

/// The first constraint violation found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two matching edges share `S`-position `s`.
    Degree {
        s: usize,
        first: EdgeId,
        second: EdgeId,
    },
    /// Two matching edges share a `T`-node at distance `< d`.
    Distance { first: EdgeId, second: EdgeId },
    /// Perfect mode: `S`-position `s` is uncovered.
    Uncovered { s: usize },
}

impl Violation {
    /// Human-readable rendering with 1-based node names.
    pub fn describe(&self, inst: &Instance) -> String {
        match self {
            Violation::Degree { s, first, second } => {
                let a = inst.edge(*first);
                let b = inst.edge(*second);
                format!(
                    "degree violation at s{s}: edges s{}t{} and s{}t{}",
                    a.s, a.t, b.s, b.t
                )
            }
            Violation::Distance { first, second } => {
                let a = inst.edge(*first);
                let b = inst.edge(*second);
                format!(
                    "distance violation: edges s{}t{} and s{}t{}",
                    a.s, a.t, b.s, b.t
                )
            }
            Violation::Uncovered { s } => format!("perfect mode: s{s} is uncovered"),
        }
    }
}
