//! Plain maximum-weight bipartite matching on exact rationals.
//!
//! These are the subroutines used where the distance constraint degenerates
//! to ordinary matching: window subproblems, the `n < d` base case of the
//! window DP, and the initial assignment of the regular-instance
//! construction. Implemented as unit-capacity successive-shortest-path
//! augmentation (Bellman-Ford, so negative weights are fine and everything
//! stays rational).

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::core::{EdgeId, Instance, Matching};
use crate::rational::Rat;

struct Arc {
    to: usize,
    rev: usize,
    cap: u32,
    cost: Rat,
}

struct FlowNet {
    adj: Vec<Vec<Arc>>,
}

/// Per-node distance and parent arc after a shortest-path sweep.
type PathState = (Vec<Option<Rat>>, Vec<Option<(usize, usize)>>);

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            adj: (0..nodes).map(|_| Vec::new()).collect(),
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: u32, cost: Rat) {
        let rev_from = self.adj[to].len();
        let rev_to = self.adj[from].len();
        self.adj[from].push(Arc {
            to,
            rev: rev_from,
            cap,
            cost: cost.clone(),
        });
        self.adj[to].push(Arc {
            to: from,
            rev: rev_to,
            cap: 0,
            cost: -cost,
        });
    }

    /// Bellman-Ford from `src`; returns per-node distance and parent arc.
    fn shortest_paths(&self, src: usize) -> PathState {
        let n = self.adj.len();
        let mut dist: Vec<Option<Rat>> = vec![None; n];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        dist[src] = Some(Rat::zero());
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                let Some(du) = dist[u].clone() else { continue };
                for (ai, arc) in self.adj[u].iter().enumerate() {
                    if arc.cap == 0 {
                        continue;
                    }
                    let cand = du.clone() + arc.cost.clone();
                    let better = match &dist[arc.to] {
                        None => true,
                        Some(cur) => cand < *cur,
                    };
                    if better {
                        dist[arc.to] = Some(cand);
                        parent[arc.to] = Some((u, ai));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (dist, parent)
    }

    /// Pushes one unit along the recorded parent path into `dst`.
    fn augment(&mut self, parent: &[Option<(usize, usize)>], dst: usize) {
        let mut v = dst;
        while let Some((u, ai)) = parent[v] {
            let rev = self.adj[u][ai].rev;
            self.adj[u][ai].cap -= 1;
            self.adj[v][rev].cap += 1;
            v = u;
        }
    }
}

/// Induced bipartite subproblem: the chosen `S`-positions against all of
/// `T`, with optional exclusions. Local node ids are assigned in ascending
/// order so the whole computation is deterministic.
struct SubProblem {
    edges: Vec<EdgeId>,
    s_nodes: Vec<usize>,
    t_nodes: Vec<usize>,
}

impl SubProblem {
    fn build(
        inst: &Instance,
        s_positions: &[usize],
        banned_s: &BTreeSet<usize>,
        banned_t: &BTreeSet<usize>,
    ) -> Self {
        let mut s_sel: Vec<usize> = s_positions
            .iter()
            .copied()
            .filter(|s| !banned_s.contains(s))
            .collect();
        s_sel.sort_unstable();
        s_sel.dedup();
        let mut edges = Vec::new();
        let mut t_set = BTreeSet::new();
        for &s in &s_sel {
            for &id in inst.edges_at_s(s) {
                let t = inst.edge(id).t;
                if !banned_t.contains(&t) {
                    edges.push(id);
                    t_set.insert(t);
                }
            }
        }
        edges.sort_unstable();
        SubProblem {
            edges,
            s_nodes: s_sel,
            t_nodes: t_set.into_iter().collect(),
        }
    }

    fn s_local(&self, s: usize) -> usize {
        self.s_nodes.binary_search(&s).unwrap()
    }

    fn t_local(&self, t: usize) -> usize {
        self.t_nodes.binary_search(&t).unwrap()
    }

    /// Builds the unit-capacity network; edge arcs are stored in ascending
    /// edge-id order. Returns (net, source, sink, arc index of each edge).
    fn network(&self, inst: &Instance) -> (FlowNet, usize, usize, Vec<(usize, usize)>) {
        let ns = self.s_nodes.len();
        let nt = self.t_nodes.len();
        let source = ns + nt;
        let sink = ns + nt + 1;
        let mut net = FlowNet::new(ns + nt + 2);
        for si in 0..ns {
            net.add_arc(source, si, 1, Rat::zero());
        }
        let mut edge_arcs = Vec::with_capacity(self.edges.len());
        for &id in &self.edges {
            let e = inst.edge(id);
            let from = self.s_local(e.s);
            let to = ns + self.t_local(e.t);
            edge_arcs.push((from, net.adj[from].len()));
            net.add_arc(from, to, 1, -e.weight.clone());
        }
        for ti in 0..nt {
            net.add_arc(ns + ti, sink, 1, Rat::zero());
        }
        (net, source, sink, edge_arcs)
    }

    fn matched_ids(&self, net: &FlowNet, edge_arcs: &[(usize, usize)]) -> Vec<EdgeId> {
        self.edges
            .iter()
            .zip(edge_arcs)
            .filter(|(_, &(u, ai))| net.adj[u][ai].cap == 0)
            .map(|(&id, _)| id)
            .collect()
    }
}

/// Value of a maximum-weight matching (any size) on the induced subproblem.
fn max_weight_value_filtered(
    inst: &Instance,
    s_positions: &[usize],
    banned_s: &BTreeSet<usize>,
    banned_t: &BTreeSet<usize>,
) -> Rat {
    let sub = SubProblem::build(inst, s_positions, banned_s, banned_t);
    let (mut net, source, sink, _) = sub.network(inst);
    let mut total = Rat::zero();
    loop {
        let (dist, parent) = net.shortest_paths(source);
        match &dist[sink] {
            Some(cost) if cost < &Rat::zero() => {
                total -= cost.clone();
                net.augment(&parent, sink);
            }
            _ => break,
        }
    }
    total
}

/// Value of a maximum-weight matching of the `S`-positions against `T`.
pub fn max_weight_value(inst: &Instance, s_positions: &[usize]) -> Rat {
    max_weight_value_filtered(inst, s_positions, &BTreeSet::new(), &BTreeSet::new())
}

/// Maximum-weight matching of the given `S`-positions against all of `T`.
///
/// Among the optimal matchings, the lexicographically smallest canonical
/// edge set is returned: candidate edges are fixed greedily in `(s, t)`
/// order whenever the optimal value stays reachable.
pub fn max_weight_bipartite_matching(inst: &Instance, s_positions: &[usize]) -> Matching {
    let total = max_weight_value(inst, s_positions);
    let sub = SubProblem::build(inst, s_positions, &BTreeSet::new(), &BTreeSet::new());
    let mut fixed: Vec<EdgeId> = Vec::new();
    let mut fixed_weight = Rat::zero();
    let mut used_s = BTreeSet::new();
    let mut used_t = BTreeSet::new();
    for &id in &sub.edges {
        let e = inst.edge(id);
        if used_s.contains(&e.s) || used_t.contains(&e.t) {
            continue;
        }
        let mut banned_s = used_s.clone();
        banned_s.insert(e.s);
        let mut banned_t = used_t.clone();
        banned_t.insert(e.t);
        let rest = max_weight_value_filtered(inst, s_positions, &banned_s, &banned_t);
        if fixed_weight.clone() + e.weight.clone() + rest == total {
            fixed.push(id);
            fixed_weight += e.weight.clone();
            used_s = banned_s;
            used_t = banned_t;
        }
    }
    Matching::from_ids(fixed).expect("greedy fixing never repeats an edge")
}

/// Maximum-weight matching covering every given `S`-position exactly once,
/// or `None` when no such matching exists. Negative weights are honored.
pub fn max_weight_s_perfect(inst: &Instance, s_positions: &[usize]) -> Option<(Matching, Rat)> {
    let sub = SubProblem::build(inst, s_positions, &BTreeSet::new(), &BTreeSet::new());
    let (mut net, source, sink, edge_arcs) = sub.network(inst);
    let mut total = Rat::zero();
    for _ in 0..sub.s_nodes.len() {
        let (dist, parent) = net.shortest_paths(source);
        let cost = dist[sink].as_ref()?;
        total -= cost.clone();
        net.augment(&parent, sink);
    }
    let m = Matching::from_ids(sub.matched_ids(&net, &edge_arcs)).expect("flow yields a matching");
    Some((m, total))
}

/// Size of a maximum matching of the (filtered) `S`-positions against `T`,
/// via Kuhn's augmenting paths with ascending scan order.
fn kuhn_size(
    inst: &Instance,
    s_positions: &[usize],
    banned_s: &BTreeSet<usize>,
    banned_t: &BTreeSet<usize>,
) -> usize {
    // partner_of_t[t-1] = S-position matched at t
    let mut partner: Vec<Option<usize>> = vec![None; inst.k()];
    fn try_augment(
        inst: &Instance,
        s: usize,
        banned_t: &BTreeSet<usize>,
        partner: &mut Vec<Option<usize>>,
        visited: &mut Vec<bool>,
    ) -> bool {
        for &id in inst.edges_at_s(s) {
            let t = inst.edge(id).t;
            if banned_t.contains(&t) || visited[t - 1] {
                continue;
            }
            visited[t - 1] = true;
            let free = match partner[t - 1] {
                None => true,
                Some(prev) => try_augment(inst, prev, banned_t, partner, visited),
            };
            if free {
                partner[t - 1] = Some(s);
                return true;
            }
        }
        false
    }
    let mut size = 0;
    for &s in s_positions {
        if banned_s.contains(&s) {
            continue;
        }
        let mut visited = vec![false; inst.k()];
        if try_augment(inst, s, banned_t, &mut partner, &mut visited) {
            size += 1;
        }
    }
    size
}

/// Maximum-cardinality matching of the given `S`-positions against `T`,
/// ignoring weights. Among the maximum matchings the lexicographically
/// smallest canonical edge set is returned, by the same greedy fixing as
/// the weighted variant.
pub fn max_cardinality_matching(inst: &Instance, s_positions: &[usize]) -> Matching {
    let mut s_sel: Vec<usize> = s_positions.to_vec();
    s_sel.sort_unstable();
    s_sel.dedup();
    let target = kuhn_size(inst, &s_sel, &BTreeSet::new(), &BTreeSet::new());
    let mut fixed: Vec<EdgeId> = Vec::new();
    let mut used_s = BTreeSet::new();
    let mut used_t = BTreeSet::new();
    for &s in &s_sel {
        for &id in inst.edges_at_s(s) {
            let t = inst.edge(id).t;
            if used_s.contains(&s) || used_t.contains(&t) {
                continue;
            }
            let mut banned_s = used_s.clone();
            banned_s.insert(s);
            let mut banned_t = used_t.clone();
            banned_t.insert(t);
            if fixed.len() + 1 + kuhn_size(inst, &s_sel, &banned_s, &banned_t) == target {
                fixed.push(id);
                used_s = banned_s;
                used_t = banned_t;
                break;
            }
        }
    }
    let mut ids = fixed;
    ids.sort_unstable();
    Matching::from_ids(ids).expect("greedy fixing never repeats an edge")
}
