//! Approximation algorithms and their exact guarantee arithmetic.
//!
//! * [`greedy`]: weighted greedy, factor 3 (both variants);
//! * [`s_greedy`] / [`t_greedy`]: cardinality greedy, factor 2; the two
//!   produce identical edge sets;
//! * [`window_partition`]: the combinatorial `2 - 1/d` approximation built
//!   from maximum-weight matchings on windows spaced `2d-1` apart;
//! * [`local_search`]: improvement search over outside sets of at most `l`
//!   edges, with the guarantee [`rho`]`(l)` for the unweighted problem.
//!
//! Guarantee checks never use tolerances; every bound is a rational
//! comparison.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::core::{EdgeId, ExtendedMatching, Instance, Matching, Variant};
use crate::exact::max_weight_bipartite_matching;
use crate::rational::{rat, Rat};
use crate::{Error, Result};

/// Largest `l` accepted by the local-search machinery; the subset
/// enumeration is exponential in `l`.
pub const MAX_LOCAL_SEARCH_DEPTH: usize = 5;

/// Weighted greedy: scan edges by non-increasing weight (ties by `(s, t)`),
/// keeping every edge that preserves feasibility. Edges of non-positive
/// weight are dropped. An explicit `order` (a permutation of all edge ids)
/// overrides the scan order; it exists to reproduce adversarial examples.
pub fn greedy(inst: &Instance, order: Option<&[EdgeId]>) -> Result<Matching> {
    let scan: Vec<EdgeId> = match order {
        Some(ids) => {
            let mut seen = vec![false; inst.edges().len()];
            for &id in ids {
                if id >= inst.edges().len() || seen[id] {
                    return Err(Error::InvalidInput(
                        "greedy order must be a permutation of the edge ids".into(),
                    ));
                }
                seen[id] = true;
            }
            if ids.len() != inst.edges().len() {
                return Err(Error::InvalidInput(
                    "greedy order must list every edge exactly once".into(),
                ));
            }
            ids.to_vec()
        }
        None => {
            let mut ids: Vec<EdgeId> = (0..inst.edges().len()).collect();
            ids.sort_by(|&a, &b| {
                inst.edge(b)
                    .weight
                    .cmp(&inst.edge(a).weight)
                    .then(a.cmp(&b))
            });
            ids
        }
    };
    let mut picked: Vec<EdgeId> = Vec::new();
    for id in scan {
        if inst.edge(id).weight <= Rat::zero() {
            continue;
        }
        let m = Matching::from_ids(picked.clone())?;
        if inst.edge_compatible(&m, id) {
            picked.push(id);
        }
    }
    Matching::from_ids(picked)
}

/// Cardinality greedy over `S`: each position takes the smallest-index
/// feasible `T`-neighbor, if any.
pub fn s_greedy(inst: &Instance) -> Matching {
    let mut picked: Vec<EdgeId> = Vec::new();
    for s in 1..=inst.n() {
        let m = Matching::from_ids(picked.clone()).expect("greedy additions stay distinct");
        // neighbor ids at s are ascending by t
        if let Some(&id) = inst
            .edges_at_s(s)
            .iter()
            .find(|&&id| inst.edge_compatible(&m, id))
        {
            picked.push(id);
        }
    }
    Matching::from_ids(picked).expect("greedy additions stay distinct")
}

/// Cardinality greedy over `T`: each `T`-node sweeps `S` left to right,
/// claiming free positions and jumping `d` after each claim. Produces the
/// same edge set as [`s_greedy`].
pub fn t_greedy(inst: &Instance) -> Matching {
    let mut picked: Vec<EdgeId> = Vec::new();
    let mut claimed = vec![false; inst.n()];
    for t in 1..=inst.k() {
        let mut claimed_now: Vec<usize> = Vec::new();
        let mut i = 1usize;
        while i <= inst.n() {
            match inst.edge_id(i, t) {
                Some(id) if !claimed[i - 1] => {
                    picked.push(id);
                    claimed_now.push(i);
                    i += inst.d();
                }
                _ => i += 1,
            }
        }
        for i in claimed_now {
            claimed[i - 1] = true;
        }
    }
    Matching::from_ids(picked).expect("claimed positions are distinct")
}

/// Combinatorial `2 - 1/d` approximation (line variant).
///
/// Appends the unique number of dummy positions in `d-1..=3d-3` that makes
/// `2d-1` divide the cyclic length, solves a maximum-weight matching on
/// every window of `d` consecutive positions spaced `2d-1` apart, and keeps
/// the best offset (ties: smallest offset).
pub fn window_partition(inst: &Instance) -> Result<Matching> {
    if inst.variant() == Variant::Cycle {
        return Err(Error::InvalidInput(
            "the window partition algorithm supports the line variant only".into(),
        ));
    }
    let n = inst.n();
    let d = inst.d();
    if n == 0 || inst.edges().is_empty() {
        return Ok(Matching::empty());
    }
    let width = 2 * d - 1;
    let dummies = (d.saturating_sub(1)..=3 * d - 3)
        .find(|k| (n + k).is_multiple_of(width))
        .expect("an interval of length 2d-1 contains every residue");
    let total = n + dummies;
    let rounds = total / width;

    let mut best: Option<(Rat, Matching)> = None;
    for offset in 1..=width {
        let mut ids: Vec<EdgeId> = Vec::new();
        for round in 0..rounds {
            let start = offset + round * width;
            let positions: Vec<usize> = (0..d)
                .map(|off| (start + off - 1) % total + 1)
                .filter(|&pos| pos <= n)
                .collect();
            if positions.is_empty() {
                continue;
            }
            let sub = max_weight_bipartite_matching(inst, &positions);
            ids.extend_from_slice(sub.ids());
        }
        let m = Matching::from_ids(ids)?;
        debug_assert!(inst.is_feasible_partial(&m).unwrap());
        let w = inst.weight(&m);
        match &best {
            Some((bw, _)) if *bw >= w => {}
            _ => best = Some((w, m)),
        }
    }
    Ok(best.expect("at least one offset").1)
}

/// Guarantee factor for `l`-locally optimal solutions: `3, 2`, then
/// `(4r - 3)/(2r - 1)` of the value two steps back; strictly decreasing
/// with limit `3/2`.
pub fn rho(l: usize) -> Result<Rat> {
    if l == 0 {
        return Err(Error::InvalidInput(
            "the local optimality level must be positive".into(),
        ));
    }
    let mut values = vec![rat(3), rat(2)];
    while values.len() < l {
        let prev = values[values.len() - 2].clone();
        values.push((rat(4) * prev.clone() - rat(3)) / (rat(2) * prev - rat(1)));
    }
    Ok(values[l - 1].clone())
}

/// A certificate that a matching is not `l`-locally optimal: a feasible
/// outside set that hits strictly fewer matching edges than its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSearchWitness {
    pub additions: Vec<EdgeId>,
    pub hit: Vec<EdgeId>,
}

/// Finds an improving set `X` of at most `l` edges outside `m` (itself a
/// feasible distance matching) with `|X| > |hit(X, m)|`, or `None` if `m`
/// is `l`-locally optimal. Depth-first over edges in canonical order; the
/// first witness found is returned.
pub fn find_improvement(
    inst: &Instance,
    m: &Matching,
    l: usize,
) -> Result<Option<LocalSearchWitness>> {
    if l == 0 || l > MAX_LOCAL_SEARCH_DEPTH {
        return Err(Error::TooLarge(format!(
            "local search depth must lie in 1..={MAX_LOCAL_SEARCH_DEPTH}, got {l}"
        )));
    }
    if !inst.is_feasible_partial(m)? {
        return Err(Error::InvalidInput(
            "local search requires a feasible matching".into(),
        ));
    }
    let candidates: Vec<EdgeId> = (0..inst.edges().len())
        .filter(|&id| !m.contains(id))
        .collect();

    struct Dfs<'a> {
        inst: &'a Instance,
        m: &'a Matching,
        candidates: &'a [EdgeId],
        l: usize,
    }
    impl Dfs<'_> {
        fn compatible_with_chosen(&self, chosen: &[EdgeId], id: EdgeId) -> bool {
            let e = self.inst.edge(id);
            chosen.iter().all(|&c| {
                let o = self.inst.edge(c);
                o.s != e.s && (o.t != e.t || self.inst.separation(o.s, e.s) >= self.inst.d())
            })
        }
        fn run(
            &self,
            from: usize,
            chosen: &mut Vec<EdgeId>,
            hit: &BTreeSet<EdgeId>,
        ) -> Result<Option<LocalSearchWitness>> {
            for idx in from..self.candidates.len() {
                let id = self.candidates[idx];
                if !self.compatible_with_chosen(chosen, id) {
                    continue;
                }
                let mut next_hit = hit.clone();
                next_hit.extend(self.inst.hit_set(self.m, id)?);
                chosen.push(id);
                if chosen.len() > next_hit.len() {
                    let witness = LocalSearchWitness {
                        additions: chosen.clone(),
                        hit: next_hit.into_iter().collect(),
                    };
                    chosen.pop();
                    return Ok(Some(witness));
                }
                // no extension can win once the hit set reaches l
                if chosen.len() < self.l && next_hit.len() < self.l {
                    if let Some(w) = self.run(idx + 1, chosen, &next_hit)? {
                        chosen.pop();
                        return Ok(Some(w));
                    }
                }
                chosen.pop();
            }
            Ok(None)
        }
    }
    let dfs = Dfs {
        inst,
        m,
        candidates: &candidates,
        l,
    };
    dfs.run(0, &mut Vec::new(), &BTreeSet::new())
}

/// Local search: starting from `init` (default: weighted greedy), repeatedly
/// replaces the hit set of an improving set until the matching is
/// `l`-locally optimal. Every round grows the matching by at least one edge.
pub fn local_search(inst: &Instance, l: usize, init: Option<&Matching>) -> Result<Matching> {
    let mut m = match init {
        Some(m) => {
            if !inst.is_feasible_partial(m)? {
                return Err(Error::InvalidInput(
                    "local search initializer must be feasible".into(),
                ));
            }
            m.clone()
        }
        None => greedy(inst, None)?,
    };
    let mut rounds = 0usize;
    while let Some(witness) = find_improvement(inst, &m, l)? {
        let before = m.len();
        m = m.replace(&witness.hit, &witness.additions)?;
        debug_assert!(inst.is_feasible_partial(&m).unwrap());
        debug_assert!(m.len() > before);
        rounds += 1;
        assert!(rounds <= inst.n() + 1, "local search failed to terminate");
    }
    Ok(m)
}

/// Local optimality of `em` relative to `em_star` in the loop-extended
/// setting: true iff no subset of `em_star`'s extra edges of size at most
/// `l` hits (edges plus loops) fewer elements than its size. Both extended
/// matchings must carry the same loop multiset.
pub fn is_locally_optimal_wrt(
    inst: &Instance,
    em: &ExtendedMatching,
    em_star: &ExtendedMatching,
    l: usize,
) -> Result<bool> {
    if l == 0 || l > MAX_LOCAL_SEARCH_DEPTH {
        return Err(Error::TooLarge(format!(
            "local optimality level must lie in 1..={MAX_LOCAL_SEARCH_DEPTH}, got {l}"
        )));
    }
    if em.loops != em_star.loops {
        return Err(Error::InvalidInput("loop multisets must agree".into()));
    }
    if !inst.is_feasible_partial(&em.matching)? || !inst.is_feasible_partial(&em_star.matching)? {
        return Err(Error::InvalidInput(
            "both matchings must be feasible".into(),
        ));
    }
    let diff: Vec<EdgeId> = em_star
        .matching
        .ids()
        .iter()
        .copied()
        .filter(|&id| !em.matching.contains(id))
        .collect();

    fn dfs(
        inst: &Instance,
        em: &ExtendedMatching,
        diff: &[EdgeId],
        l: usize,
        from: usize,
        chosen: &mut Vec<EdgeId>,
    ) -> Result<bool> {
        for idx in from..diff.len() {
            chosen.push(diff[idx]);
            let hit = inst.hit_set_plus_union(em, chosen)?;
            if chosen.len() > hit.size() {
                chosen.pop();
                return Ok(true);
            }
            if chosen.len() < l && hit.size() < l && dfs(inst, em, diff, l, idx + 1, chosen)? {
                chosen.pop();
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
    let found = dfs(inst, em, &diff, l, 0, &mut Vec::new())?;
    Ok(!found)
}
