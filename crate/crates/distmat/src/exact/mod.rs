//! Exact optima for the distance matching problem.
//!
//! Three independent routes are provided and cross-checked against each
//! other in the test suites:
//!
//! * [`solve_fpt`]: dynamic program over windows of `d` consecutive
//!   assignments, after degree pruning and the perfect-mode reduction;
//! * [`solve_constant_t`]: dynamic program over per-`T`-node cooldown
//!   vectors, efficient when `|T|` is small;
//! * [`solve_bruteforce`]: exhaustive backtracking, the reference oracle
//!   for everything else (and the only exact route for cycle instances).

mod matching;

pub use matching::{
    max_cardinality_matching, max_weight_bipartite_matching, max_weight_s_perfect, max_weight_value,
};

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::core::{to_perfect, EdgeId, Instance, Matching, Mode, Variant};
use crate::rational::Rat;
use crate::{Error, Result};

/// Outcome of an exact solve. Infeasibility (perfect mode only) is a result,
/// not an error.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Optimal { matching: Matching, value: Rat },
    Infeasible,
}

impl SolveOutcome {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            SolveOutcome::Optimal { value, .. } => Some(value),
            SolveOutcome::Infeasible => None,
        }
    }

    pub fn matching(&self) -> Option<&Matching> {
        match self {
            SolveOutcome::Optimal { matching, .. } => Some(matching),
            SolveOutcome::Infeasible => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, SolveOutcome::Infeasible)
    }

    pub fn expect_optimal(self, what: &str) -> (Matching, Rat) {
        match self {
            SolveOutcome::Optimal { matching, value } => (matching, value),
            SolveOutcome::Infeasible => panic!("{what}: unexpectedly infeasible"),
        }
    }
}

/// Edge-count guard for the exhaustive oracle.
pub const BRUTE_FORCE_EDGE_LIMIT: usize = 30;

/// Largest cooldown-DP state space accepted before refusing the solve.
const CONSTANT_T_STATE_LIMIT: u128 = 2_000_000;

/// Keeps only the `min(2d-1, deg)` heaviest edges at every `S`-node (ties
/// keep the smaller `T`-index). The optimal perfect value is unchanged.
pub fn prune_degrees(inst: &Instance) -> Result<Instance> {
    if inst.mode() != Mode::Perfect {
        return Err(Error::InvalidInput(
            "degree pruning applies to perfect-mode instances; reduce with to_perfect first".into(),
        ));
    }
    let cap = 2 * inst.d() - 1;
    let mut kept = Vec::new();
    for s in 1..=inst.n() {
        let mut ids: Vec<EdgeId> = inst.edges_at_s(s).to_vec();
        ids.sort_by(|&a, &b| {
            let (ea, eb) = (inst.edge(a), inst.edge(b));
            eb.weight.cmp(&ea.weight).then(ea.t.cmp(&eb.t))
        });
        ids.truncate(cap);
        kept.extend(ids.into_iter().map(|id| inst.edge(id).clone()));
    }
    Instance::new(
        inst.n(),
        inst.k(),
        inst.d(),
        kept,
        inst.variant(),
        inst.mode(),
    )
}

/// Exhaustive backtracking over `S`-positions with feasibility pruning.
///
/// Deterministic: among optimal matchings the lexicographically smallest
/// canonical edge set is returned. Handles both variants and both modes.
pub fn solve_bruteforce(inst: &Instance) -> Result<SolveOutcome> {
    if inst.edges().len() > BRUTE_FORCE_EDGE_LIMIT {
        return Err(Error::TooLarge(format!(
            "brute force accepts at most {BRUTE_FORCE_EDGE_LIMIT} edges, instance has {}",
            inst.edges().len()
        )));
    }
    struct Search<'a> {
        inst: &'a Instance,
        positions_at_t: Vec<Vec<usize>>,
        chosen: Vec<EdgeId>,
        value: Rat,
        best: Option<(Rat, Vec<EdgeId>)>,
    }
    impl Search<'_> {
        fn compatible(&self, t: usize, pos: usize) -> bool {
            self.positions_at_t[t - 1]
                .iter()
                .all(|&p| self.inst.separation(p, pos) >= self.inst.d())
        }
        fn offer(&mut self) {
            let better = match &self.best {
                None => true,
                Some((bv, bids)) => self.value > *bv || (self.value == *bv && self.chosen < *bids),
            };
            if better {
                self.best = Some((self.value.clone(), self.chosen.clone()));
            }
        }
        fn go(&mut self, pos: usize) {
            if pos > self.inst.n() {
                self.offer();
                return;
            }
            for &id in self.inst.edges_at_s(pos) {
                let e = self.inst.edge(id);
                if self.compatible(e.t, pos) {
                    self.positions_at_t[e.t - 1].push(pos);
                    self.chosen.push(id);
                    self.value += e.weight.clone();
                    self.go(pos + 1);
                    self.value -= e.weight.clone();
                    self.chosen.pop();
                    self.positions_at_t[e.t - 1].pop();
                }
            }
            if self.inst.mode() == Mode::Maximum {
                self.go(pos + 1);
            }
        }
    }
    let mut search = Search {
        inst,
        positions_at_t: vec![Vec::new(); inst.k()],
        chosen: Vec::new(),
        value: Rat::zero(),
        best: None,
    };
    search.go(1);
    Ok(match search.best {
        None => SolveOutcome::Infeasible,
        Some((value, ids)) => SolveOutcome::Optimal {
            matching: Matching::from_ids(ids)?,
            value,
        },
    })
}

/// Instrumentation for the window DP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FptStats {
    /// Total states stored across all levels.
    pub states: usize,
    /// The `n * (2d-1)^d` bound those states must stay under.
    pub bound: usize,
}

/// Window DP parameterized by `d`.
///
/// Internally reduces to perfect mode and prunes degrees; when `n < d` the
/// distance constraint degenerates and a plain maximum-weight matching
/// covering `S` is used instead.
pub fn solve_fpt(inst: &Instance) -> Result<SolveOutcome> {
    solve_fpt_with_options(inst, false).map(|(outcome, _)| outcome)
}

/// As [`solve_fpt`]; `heavy_candidates_only` additionally restricts every
/// transition maximum to the `d` heaviest non-conflicting edges of the node
/// leaving the window. Off by default; equality with the plain DP is
/// enforced by tests.
pub fn solve_fpt_with_options(
    inst: &Instance,
    heavy_candidates_only: bool,
) -> Result<(SolveOutcome, FptStats)> {
    if inst.variant() == Variant::Cycle {
        return Err(Error::InvalidInput(
            "the window DP supports the line variant only".into(),
        ));
    }
    let work0 = match inst.mode() {
        Mode::Maximum => to_perfect(inst)?,
        Mode::Perfect => inst.clone(),
    };
    let n = work0.n();
    let d = work0.d();
    let mut stats = FptStats {
        states: 0,
        bound: n * (2 * d - 1).pow(d as u32),
    };
    if n == 0 {
        return Ok((
            SolveOutcome::Optimal {
                matching: Matching::empty(),
                value: Rat::zero(),
            },
            stats,
        ));
    }
    if (1..=n).any(|s| work0.edges_at_s(s).is_empty()) {
        return Ok((SolveOutcome::Infeasible, stats));
    }
    let work = prune_degrees(&work0)?;

    if n < d {
        // every pair of positions conflicts, so all T-nodes must be distinct
        let positions: Vec<usize> = (1..=n).collect();
        return Ok(match max_weight_s_perfect(&work, &positions) {
            None => (SolveOutcome::Infeasible, stats),
            Some((m, value)) => {
                let matching = restrict_to_original(inst, &work, &m)?;
                (SolveOutcome::Optimal { matching, value }, stats)
            }
        });
    }

    // neighbor lists as (t, weight), ascending by t
    let neigh: Vec<Vec<(u32, Rat)>> = (1..=n)
        .map(|s| {
            work.edges_at_s(s)
                .iter()
                .map(|&id| (work.edge(id).t as u32, work.edge(id).weight.clone()))
                .collect()
        })
        .collect();

    type Key = Vec<u32>;
    // per level: state tuple -> (value, T-node chosen for the position that
    // left the window when this state was created; unused at the base level)
    let mut levels: Vec<BTreeMap<Key, (Rat, u32)>> = Vec::with_capacity(n - d + 1);

    // base level i = d: tuple position j holds the partner of s_{d-j+1}
    let mut base: BTreeMap<Key, (Rat, u32)> = BTreeMap::new();
    let mut tuple: Vec<u32> = Vec::with_capacity(d);
    fn enumerate_base(
        neigh: &[Vec<(u32, Rat)>],
        d: usize,
        j: usize,
        tuple: &mut Vec<u32>,
        value: Rat,
        out: &mut BTreeMap<Vec<u32>, (Rat, u32)>,
    ) {
        if j > d {
            out.insert(tuple.clone(), (value, 0));
            return;
        }
        for (t, w) in &neigh[d - j] {
            // s_{d-j+1} has 0-based index d-j
            if tuple.contains(t) {
                continue;
            }
            tuple.push(*t);
            enumerate_base(neigh, d, j + 1, tuple, value.clone() + w.clone(), out);
            tuple.pop();
        }
    }
    enumerate_base(&neigh, d, 1, &mut tuple, Rat::zero(), &mut base);
    stats.states += base.len();
    levels.push(base);

    for i in (d + 1)..=n {
        let prev = levels.last().unwrap();
        // heaviest-first candidate list of the node leaving the window
        let leaving = i - d; // 1-based position s_{i-d}
        let mut heavy: Vec<(u32, Rat)> = neigh[leaving - 1].clone();
        heavy.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        // best completion per window prefix (z_2..z_d)
        let mut best: BTreeMap<Key, (Rat, u32)> = BTreeMap::new();
        for (key, (val, _)) in prev.iter() {
            let prefix = key[..d - 1].to_vec();
            let t_last = key[d - 1];
            if heavy_candidates_only {
                let allowed: Vec<u32> = heavy
                    .iter()
                    .map(|(t, _)| *t)
                    .filter(|t| !prefix.contains(t))
                    .take(d)
                    .collect();
                if !allowed.contains(&t_last) {
                    continue;
                }
            }
            match best.get(&prefix) {
                Some((bv, _)) if *bv >= *val => {}
                _ => {
                    best.insert(prefix, (val.clone(), t_last));
                }
            }
        }

        let mut cur: BTreeMap<Key, (Rat, u32)> = BTreeMap::new();
        for (prefix, (val, t_last)) in best {
            for (z1, w) in &neigh[i - 1] {
                if prefix.contains(z1) {
                    continue;
                }
                let mut key = Vec::with_capacity(d);
                key.push(*z1);
                key.extend_from_slice(&prefix);
                cur.insert(key, (val.clone() + w.clone(), t_last));
            }
        }
        stats.states += cur.len();
        levels.push(cur);
    }
    debug_assert!(
        stats.states <= stats.bound,
        "window DP state bound violated"
    );

    // final maximization over the states at level n
    let last = levels.last().unwrap();
    let Some((mut key, (value, _))) = last
        .iter()
        .fold(None::<(&Key, &(Rat, u32))>, |acc, (k, v)| match acc {
            Some((_, (bv, _))) if *bv >= v.0 => acc,
            _ => Some((k, v)),
        })
        .map(|(k, v)| (k.clone(), v.clone()))
    else {
        return Ok((SolveOutcome::Infeasible, stats));
    };

    // backtrack: level n..d+1 recovers the partner of each node leaving the
    // window; the base tuple covers s_1..s_d
    let mut partner: Vec<u32> = vec![0; n]; // partner[pos-1]
    for (offset, z) in key.iter().enumerate() {
        partner[n - 1 - offset] = *z;
    }
    for i in ((d + 1)..=n).rev() {
        let (_, t_last) = &levels[i - d][&key];
        partner[i - d - 1] = *t_last;
        let mut next = key[1..].to_vec();
        next.push(*t_last);
        key = next;
    }

    let pairs: Vec<(usize, usize)> = (1..=n)
        .map(|pos| (pos, partner[pos - 1] as usize))
        .collect();
    let matching = pairs_to_original(inst, &pairs)?;
    Ok((SolveOutcome::Optimal { matching, value }, stats))
}

/// Maps a matching on a transformed instance back to original edge ids,
/// dropping the zero-weight edges introduced by the perfect-mode reduction.
fn restrict_to_original(original: &Instance, work: &Instance, m: &Matching) -> Result<Matching> {
    let pairs: Vec<(usize, usize)> = m
        .ids()
        .iter()
        .map(|&id| (work.edge(id).s, work.edge(id).t))
        .collect();
    pairs_to_original(original, &pairs)
}

fn pairs_to_original(original: &Instance, pairs: &[(usize, usize)]) -> Result<Matching> {
    let ids: Vec<EdgeId> = pairs
        .iter()
        .filter(|&&(_, t)| t <= original.k())
        .map(|&(s, t)| {
            original
                .edge_id(s, t)
                .ok_or_else(|| Error::InvalidInput(format!("edge s{s} t{t} missing from instance")))
        })
        .collect::<Result<Vec<_>>>()?;
    Matching::from_ids(ids)
}

/// Cooldown DP; efficient when `|T|` is small.
///
/// States are vectors giving, for each `T`-node, how many of the topmost
/// processed positions it is still banned from. Maximum mode is handled by
/// an extra skip transition rather than the perfect-mode reduction.
pub fn solve_constant_t(inst: &Instance) -> Result<SolveOutcome> {
    if inst.variant() == Variant::Cycle {
        return Err(Error::InvalidInput(
            "the cooldown DP supports the line variant only".into(),
        ));
    }
    let n = inst.n();
    let k = inst.k();
    let d = inst.d();
    if n == 0 {
        return Ok(SolveOutcome::Optimal {
            matching: Matching::empty(),
            value: Rat::zero(),
        });
    }
    let space = (d as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if space > CONSTANT_T_STATE_LIMIT {
        return Err(Error::TooLarge(format!(
            "cooldown DP needs d^k = {d}^{k} states, limit is {CONSTANT_T_STATE_LIMIT}"
        )));
    }
    let space = space as usize;
    let maximum = inst.mode() == Mode::Maximum;

    // choice encoding: 0 = skip, j >= 1 = match t_j
    let decode = |code: usize| -> Vec<usize> {
        let mut c = code;
        (0..k)
            .map(|_| {
                let v = c % d;
                c /= d;
                v
            })
            .collect()
    };
    let encode = |cool: &[usize]| -> usize { cool.iter().rev().fold(0, |acc, &v| acc * d + v) };
    let shift_match = |cool: &[usize], j: usize| -> usize {
        let next: Vec<usize> = cool
            .iter()
            .enumerate()
            .map(|(l, &v)| {
                if l + 1 == j {
                    d - 1
                } else {
                    v.saturating_sub(1)
                }
            })
            .collect();
        encode(&next)
    };
    let shift_skip = |cool: &[usize]| -> usize {
        let next: Vec<usize> = cool.iter().map(|&v| v.saturating_sub(1)).collect();
        encode(&next)
    };

    let weight_of = |s: usize, j: usize| -> Option<Rat> {
        inst.edge_id(s, j).map(|id| inst.edge(id).weight.clone())
    };

    let mut levels: Vec<Vec<Option<(Rat, usize)>>> = Vec::with_capacity(n);
    for i in 1..=n {
        let mut cur: Vec<Option<(Rat, usize)>> = vec![None; space];
        for (code, slot) in cur.iter_mut().enumerate() {
            let cool = decode(code);
            let mut best: Option<(Rat, usize)> = None;
            let mut consider = |value: Option<Rat>, choice: usize| {
                if let Some(v) = value {
                    match &best {
                        Some((bv, _)) if *bv >= v => {}
                        _ => best = Some((v, choice)),
                    }
                }
            };
            for j in 1..=k {
                if cool[j - 1] != 0 {
                    continue;
                }
                let Some(w) = weight_of(i, j) else { continue };
                let value = if i == 1 {
                    Some(w)
                } else {
                    levels[i - 2][shift_match(&cool, j)]
                        .as_ref()
                        .map(|(v, _)| v.clone() + w)
                };
                consider(value, j);
            }
            if maximum {
                let value = if i == 1 {
                    Some(Rat::zero())
                } else {
                    levels[i - 2][shift_skip(&cool)]
                        .as_ref()
                        .map(|(v, _)| v.clone())
                };
                consider(value, 0);
            }
            *slot = best;
        }
        levels.push(cur);
    }

    let Some((value, _)) = levels[n - 1][0].clone() else {
        return Ok(SolveOutcome::Infeasible);
    };

    // reconstruct forward from (n, all-zero cooldowns)
    let mut pairs = Vec::new();
    let mut code = 0usize;
    for i in (1..=n).rev() {
        let (_, choice) = levels[i - 1][code]
            .clone()
            .expect("state on the optimal path");
        let cool = decode(code);
        if choice == 0 {
            code = shift_skip(&cool);
        } else {
            pairs.push((i, choice));
            code = shift_match(&cool, choice);
        }
    }
    pairs.reverse();
    let matching = Matching::from_pairs(inst, &pairs)?;
    Ok(SolveOutcome::Optimal { matching, value })
}
