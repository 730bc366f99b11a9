//! Exact-rational LP toolkit for the natural relaxation.
//!
//! The relaxation has one variable per edge, a degree row per `S`-node
//! (`<= 1` in maximum mode, `= 1` in perfect mode) and a window row per
//! `(s, t)` pair bounding the mass `t` receives from any `d` consecutive
//! positions. Window rows whose support is contained in another row for the
//! same `T`-node are redundant and dropped, so when `d >= n` exactly one
//! row per `T`-node remains.
//!
//! On top of the relaxation this module provides: canonical optima
//! supported on the heaviest edges per node, flat edge orders with exact
//! slack certificates, the LP-guided rounding algorithm with guarantee
//! `2 - 1/(2d-1)`, the coloring-based decomposition of a fractional
//! solution into distance matchings, and integrality-gap measurement.

mod simplex;

pub use simplex::{Relation, SimplexOutcome, SimplexProblem};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::core::{Edge, EdgeId, Instance, Matching, Mode, Variant};
use crate::exact::{solve_bruteforce, solve_fpt, SolveOutcome, BRUTE_FORCE_EDGE_LIMIT};
use crate::rational::{rat, Rat};
use crate::{Error, Result};

/// What a row constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Degree { s: usize },
    Window { s: usize, t: usize },
}

/// A constraint row: all coefficients are 1 and the right-hand side is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub kind: RowKind,
    pub relation: Relation,
    pub support: Vec<EdgeId>,
}

/// The natural relaxation of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    pub rows: Vec<LpRow>,
}

/// An exact-rational vector over the edges.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub x: Vec<Rat>,
}

impl FractionalSolution {
    pub fn value(&self, inst: &Instance) -> Rat {
        inst.edges()
            .iter()
            .zip(&self.x)
            .map(|(e, v)| e.weight.clone() * v.clone())
            .fold(Rat::zero(), |acc, v| acc + v)
    }

    pub fn is_integral(&self) -> bool {
        self.x.iter().all(|v| v.denom().is_one())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        solution: FractionalSolution,
        value: Rat,
    },
    Infeasible,
}

impl LpOutcome {
    pub fn expect_optimal(self, what: &str) -> (FractionalSolution, Rat) {
        match self {
            LpOutcome::Optimal { solution, value } => (solution, value),
            LpOutcome::Infeasible => panic!("{what}: LP unexpectedly infeasible"),
        }
    }
}

fn require_line(inst: &Instance, what: &str) -> Result<()> {
    if inst.variant() == Variant::Cycle {
        return Err(Error::InvalidInput(format!(
            "{what} supports the line variant only"
        )));
    }
    Ok(())
}

/// Builds the relaxation; maximum mode yields inequality degree rows,
/// perfect mode equalities.
pub fn build_lp(inst: &Instance) -> Result<LinearProgram> {
    require_line(inst, "the LP relaxation")?;
    let relation = match inst.mode() {
        Mode::Maximum => Relation::Le,
        Mode::Perfect => Relation::Eq,
    };
    let mut rows = Vec::new();
    for s in 1..=inst.n() {
        rows.push(LpRow {
            kind: RowKind::Degree { s },
            relation,
            support: inst.edges_at_s(s).to_vec(),
        });
    }
    for t in 1..=inst.k() {
        // candidate window supports, then keep only maximal ones
        let mut candidates: Vec<(usize, Vec<EdgeId>)> = Vec::new();
        for s in 1..=inst.n() {
            let window = inst.right_window(s);
            let support: Vec<EdgeId> = inst
                .edges_at_t(t)
                .iter()
                .copied()
                .filter(|&id| window.contains(&inst.edge(id).s))
                .collect();
            if support.is_empty() {
                continue;
            }
            candidates.push((s, support));
        }
        for (i, (s, support)) in candidates.iter().enumerate() {
            let dominated = candidates.iter().enumerate().any(|(j, (_, other))| {
                if i == j {
                    return false;
                }
                let subset = support.iter().all(|id| other.contains(id));
                let strictly = other.len() > support.len();
                // for equal supports keep the earliest position
                subset && (strictly || j < i)
            });
            if !dominated {
                rows.push(LpRow {
                    kind: RowKind::Window { s: *s, t },
                    relation: Relation::Le,
                    support: support.clone(),
                });
            }
        }
    }
    Ok(LinearProgram {
        num_vars: inst.edges().len(),
        objective: inst.edges().iter().map(|e| e.weight.clone()).collect(),
        rows,
    })
}

/// Optimal vertex solution via the exact simplex.
pub fn solve_lp_exact(lp: &LinearProgram) -> Result<LpOutcome> {
    let problem = SimplexProblem {
        num_vars: lp.num_vars,
        objective: lp.objective.clone(),
        rows: lp
            .rows
            .iter()
            .map(|row| {
                let coeffs = row.support.iter().map(|&id| (id, rat(1))).collect();
                (coeffs, row.relation, rat(1))
            })
            .collect(),
    };
    Ok(match simplex::solve(&problem)? {
        SimplexOutcome::Optimal { x, value } => LpOutcome::Optimal {
            solution: FractionalSolution { x },
            value,
        },
        SimplexOutcome::Infeasible => LpOutcome::Infeasible,
    })
}

/// The approximation factor `2 - 1/(2d-1)`.
pub fn theta(d: usize) -> Rat {
    rat(2) - Rat::new(BigInt::one(), BigInt::from(2 * d as i64 - 1))
}

/// Keep-flags for the `min(2d-1, deg)` heaviest edges at every `S`-node
/// (ties keep the smaller `T`-index).
fn heaviest_support(inst: &Instance) -> Vec<bool> {
    let cap = 2 * inst.d() - 1;
    let mut keep = vec![false; inst.edges().len()];
    for s in 1..=inst.n() {
        let mut ids: Vec<EdgeId> = inst.edges_at_s(s).to_vec();
        ids.sort_by(|&a, &b| {
            let (ea, eb) = (inst.edge(a), inst.edge(b));
            eb.weight.cmp(&ea.weight).then(ea.t.cmp(&eb.t))
        });
        for &id in ids.iter().take(cap) {
            keep[id] = true;
        }
    }
    keep
}

/// An optimal solution of the maximum-mode relaxation supported on the
/// heaviest `2d-1` edges per `S`-node, obtained by restricting the edge set
/// before solving; the restriction provably loses nothing. Returns the
/// solution (over all edges, zero outside the support) and its value.
pub fn canonical_optimal(inst: &Instance) -> Result<(FractionalSolution, Rat)> {
    require_line(inst, "canonical LP optima")?;
    let keep = heaviest_support(inst);
    let sub_edges: Vec<Edge> = inst
        .edges()
        .iter()
        .enumerate()
        .filter(|(id, _)| keep[*id])
        .map(|(_, e)| e.clone())
        .collect();
    let sub = Instance::new(
        inst.n(),
        inst.k(),
        inst.d(),
        sub_edges,
        inst.variant(),
        Mode::Maximum,
    )?;
    let (solution, value) =
        solve_lp_exact(&build_lp(&sub)?)?.expect_optimal("maximum-mode relaxation");
    let mut x = vec![Rat::zero(); inst.edges().len()];
    for (sub_id, v) in solution.x.into_iter().enumerate() {
        let e = sub.edge(sub_id);
        let id = inst
            .edge_id(e.s, e.t)
            .expect("restricted edges exist in the instance");
        x[id] = v;
    }
    Ok((FractionalSolution { x }, value))
}

/// An edge permutation with its per-position slack pair: the later mass at
/// the edge's `S`-node, and the later mass at its `T`-node within the
/// two-sided window.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatOrder {
    pub order: Vec<EdgeId>,
    pub slacks: Vec<(Rat, Rat)>,
}

fn validate_solution_shape(inst: &Instance, x: &FractionalSolution) -> Result<()> {
    if x.x.len() != inst.edges().len() {
        return Err(Error::InvalidInput(
            "solution length does not match the edge count".into(),
        ));
    }
    if x.x.iter().any(|v| v.is_negative()) {
        return Err(Error::InvalidInput(
            "fractional solutions must be nonnegative".into(),
        ));
    }
    Ok(())
}

/// Orders edges by `S`-position, largest `x` first within a node (ties by
/// `T`-index), and computes the slack certificate. Requires `x` to be
/// supported on the heaviest `2d-1` edges per node, as produced by
/// [`canonical_optimal`]; the result is then `(2 - 1/(2d-1))`-flat.
pub fn flat_order(inst: &Instance, x: &FractionalSolution) -> Result<FlatOrder> {
    require_line(inst, "flat orders")?;
    validate_solution_shape(inst, x)?;
    let keep = heaviest_support(inst);
    if let Some(id) = (0..inst.edges().len()).find(|&id| !keep[id] && !x.x[id].is_zero()) {
        let e = inst.edge(id);
        return Err(Error::InvalidInput(format!(
            "solution puts mass on s{}t{}, outside the heaviest-edge support",
            e.s, e.t
        )));
    }
    let mut order = Vec::with_capacity(inst.edges().len());
    for s in 1..=inst.n() {
        let mut ids: Vec<EdgeId> = inst.edges_at_s(s).to_vec();
        ids.sort_by(|&a, &b| {
            x.x[b]
                .cmp(&x.x[a])
                .then(inst.edge(a).t.cmp(&inst.edge(b).t))
        });
        order.extend(ids);
    }
    let slacks = slacks_for(inst, x, &order);
    Ok(FlatOrder { order, slacks })
}

fn slacks_for(inst: &Instance, x: &FractionalSolution, order: &[EdgeId]) -> Vec<(Rat, Rat)> {
    let mut slacks = Vec::with_capacity(order.len());
    for (i, &id) in order.iter().enumerate() {
        let e = inst.edge(id);
        let mut same_s = Rat::zero();
        let mut same_t = Rat::zero();
        for &later in &order[i + 1..] {
            let o = inst.edge(later);
            if o.s == e.s {
                same_s += x.x[later].clone();
            }
            if o.t == e.t && inst.separation(o.s, e.s) < inst.d() {
                same_t += x.x[later].clone();
            }
        }
        slacks.push((same_s, same_t));
    }
    slacks
}

/// The flatness of an edge order with respect to `x`: the largest
/// `slack_s + slack_t + x_e` over all positions. An order is `t`-flat
/// exactly when `t` is at least this value.
pub fn flatness_of(inst: &Instance, x: &FractionalSolution, order: &[EdgeId]) -> Result<Rat> {
    require_line(inst, "flatness certificates")?;
    validate_solution_shape(inst, x)?;
    let mut seen = vec![false; inst.edges().len()];
    for &id in order {
        if id >= seen.len() || seen[id] {
            return Err(Error::InvalidInput(
                "order must be a permutation of the edges".into(),
            ));
        }
        seen[id] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::InvalidInput("order must cover every edge".into()));
    }
    let slacks = slacks_for(inst, x, order);
    Ok(order
        .iter()
        .zip(&slacks)
        .map(|(&id, (a, b))| a.clone() + b.clone() + x.x[id].clone())
        .fold(Rat::zero(), |acc, v| acc.max(v)))
}

/// Result of the LP-guided rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRounding {
    pub matching: Matching,
    /// Value of the fractional optimum the rounding certifies against.
    pub lp_value: Rat,
    /// The guarantee factor `2 - 1/(2d-1)`.
    pub factor: Rat,
}

/// LP-guided rounding: computes a canonical optimum and its flat order,
/// then sweeps the order forward discounting every edge's one-sided
/// conflict neighborhood, and finally inserts the surviving candidates
/// backwards whenever feasible. Guarantees
/// `factor * w(matching) >= lp_value >= OPT`.
pub fn wdm_lp_apx(inst: &Instance) -> Result<LpRounding> {
    require_line(inst, "LP rounding")?;
    let factor = theta(inst.d());
    if inst.edges().is_empty() {
        return Ok(LpRounding {
            matching: Matching::empty(),
            lp_value: Rat::zero(),
            factor,
        });
    }
    let (x, lp_value) = canonical_optimal(inst)?;
    let order = flat_order(inst, &x)?;

    let mut adjusted: Vec<Rat> = inst.edges().iter().map(|e| e.weight.clone()).collect();
    let mut candidate = vec![false; inst.edges().len()];
    for &id in &order.order {
        if adjusted[id] <= Rat::zero() {
            continue;
        }
        candidate[id] = true;
        let amount = adjusted[id].clone();
        let e = inst.edge(id);
        // the edge's own node, plus its T-node across the right window
        let mut conflict: Vec<EdgeId> = inst.edges_at_s(e.s).to_vec();
        for &other in inst.edges_at_t(e.t) {
            let o = inst.edge(other);
            if o.s >= e.s && o.s < e.s + inst.d() {
                conflict.push(other);
            }
        }
        for id2 in conflict {
            adjusted[id2] -= amount.clone();
        }
    }
    let mut picked: Vec<EdgeId> = Vec::new();
    for &id in order.order.iter().rev() {
        if !candidate[id] {
            continue;
        }
        let m = Matching::from_ids(picked.clone())?;
        if inst.edge_compatible(&m, id) {
            picked.push(id);
        }
    }
    Ok(LpRounding {
        matching: Matching::from_ids(picked)?,
        lp_value,
        factor,
    })
}

/// A fractional solution expressed as `1/K` times a short list of distance
/// matchings.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// The common denominator `K`.
    pub denominator: BigInt,
    /// Number of parts, `floor(K * theta)`.
    pub q: usize,
    /// `(1/K, matching)` pairs; their weighted characteristic sum is `x`.
    pub parts: Vec<(Rat, Matching)>,
}

/// Guard on `K * theta` for the decomposition.
const DECOMPOSE_LIMIT: i64 = 10_000;

/// Colors the edges of a flat order in reverse, giving each edge `K x_e`
/// colors disjoint from its already-colored conflict neighborhood; color
/// classes are then feasible matchings and sum back to `x` exactly.
pub fn fractional_decompose(
    inst: &Instance,
    x: &FractionalSolution,
    order: &FlatOrder,
    bound: &Rat,
) -> Result<Decomposition> {
    require_line(inst, "fractional decomposition")?;
    validate_solution_shape(inst, x)?;
    let flatness = flatness_of(inst, x, &order.order)?;
    if inst.edges().is_empty() {
        return Ok(Decomposition {
            denominator: BigInt::one(),
            q: 0,
            parts: Vec::new(),
        });
    }
    if flatness > *bound {
        return Err(Error::InvalidInput(format!(
            "order is not {bound}-flat (flatness {flatness})"
        )));
    }
    let denominator: BigInt = x.x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let k_theta = Rat::from_integer(denominator.clone()) * bound.clone();
    if k_theta > rat(DECOMPOSE_LIMIT) {
        return Err(Error::TooLarge(format!(
            "decomposition needs K*theta = {k_theta} colors, limit is {DECOMPOSE_LIMIT}"
        )));
    }
    let q = k_theta
        .floor()
        .to_integer()
        .to_usize()
        .expect("bounded above");

    let m = inst.edges().len();
    let mut colors: Vec<Vec<usize>> = vec![Vec::new(); m];
    // reverse flat order; position in the order for "later" tests
    let mut position = vec![0usize; m];
    for (i, &id) in order.order.iter().enumerate() {
        position[id] = i;
    }
    for (i, &id) in order.order.iter().enumerate().rev() {
        let e = inst.edge(id);
        let need_big = (x.x[id].clone() * Rat::from_integer(denominator.clone())).to_integer();
        let need = need_big
            .to_usize()
            .expect("per-edge color count is bounded by K");
        if need == 0 {
            continue;
        }
        let mut banned = vec![false; q + 1];
        for other in 0..m {
            let o = inst.edge(other);
            if position[other] <= i {
                continue;
            }
            let conflicts = o.s == e.s || (o.t == e.t && inst.separation(o.s, e.s) < inst.d());
            if conflicts {
                for &c in &colors[other] {
                    banned[c] = true;
                }
            }
        }
        let mut chosen = Vec::with_capacity(need);
        for (c, flag) in banned.iter().enumerate().skip(1) {
            if !flag {
                chosen.push(c);
                if chosen.len() == need {
                    break;
                }
            }
        }
        if chosen.len() < need {
            return Err(Error::InvalidInput(
                "flatness certificate did not supply enough free colors".into(),
            ));
        }
        colors[id] = chosen;
    }

    let lambda = Rat::new(BigInt::one(), denominator.clone());
    let mut parts = Vec::with_capacity(q);
    for c in 1..=q {
        let ids: Vec<EdgeId> = (0..m).filter(|&id| colors[id].contains(&c)).collect();
        let matching = Matching::from_ids(ids)?;
        debug_assert!(inst.is_feasible_partial(&matching).unwrap());
        parts.push((lambda.clone(), matching));
    }
    Ok(Decomposition {
        denominator,
        q,
        parts,
    })
}

/// LP optimum divided by the exact integral optimum, in maximum mode;
/// `0/0` counts as gap 1.
pub fn integrality_gap(inst: &Instance) -> Result<Rat> {
    require_line(inst, "integrality gap measurement")?;
    let view = inst.with_mode(Mode::Maximum);
    let (_, lp_value) = solve_lp_exact(&build_lp(&view)?)?.expect_optimal("maximum-mode LP");
    let ip = if view.edges().len() <= BRUTE_FORCE_EDGE_LIMIT {
        solve_bruteforce(&view)?
    } else {
        solve_fpt(&view)?
    };
    let SolveOutcome::Optimal {
        value: ip_value, ..
    } = ip
    else {
        return Err(Error::InvalidInput(
            "maximum mode cannot be infeasible".into(),
        ));
    };
    if ip_value.is_zero() {
        assert!(
            lp_value.is_zero(),
            "a positive LP value implies a positive matching, so IP = 0 forces LP = 0"
        );
        return Ok(rat(1));
    }
    Ok(lp_value / ip_value)
}

/// Text rendering of the relaxation for cross-checking with external
/// solvers; one row per line, coefficients as exact rationals.
pub fn export_lp_text(inst: &Instance, lp: &LinearProgram) -> String {
    let mut out = String::new();
    let var = |id: EdgeId| {
        let e = inst.edge(id);
        format!("x_{}_{}", e.s, e.t)
    };
    let terms = |ids: &[EdgeId]| -> String {
        if ids.is_empty() {
            return "0".to_string();
        }
        ids.iter()
            .map(|&id| var(id))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    out.push_str("maximize: ");
    let obj: Vec<String> = (0..lp.num_vars)
        .map(|id| {
            format!(
                "{} {}",
                crate::rational::fmt_rat(&lp.objective[id]),
                var(id)
            )
        })
        .collect();
    if obj.is_empty() {
        out.push('0');
    } else {
        out.push_str(&obj.join(" + "));
    }
    out.push('\n');
    for row in &lp.rows {
        let name = match row.kind {
            RowKind::Degree { s } => format!("degree_s{s}"),
            RowKind::Window { s, t } => format!("window_s{s}_t{t}"),
        };
        let rel = match row.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        out.push_str(&format!("{name}: {} {rel} 1\n", terms(&row.support)));
    }
    out.push_str("# x >= 0 for all variables\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fixture, gen_random, RandomSpec, SplitMix64};
    use crate::rational::ratio;

    #[test]
    fn single_edge_lp_has_two_rows() {
        let inst = Instance::new(
            1,
            1,
            1,
            vec![Edge::new(1, 1, rat(1))],
            Variant::Line,
            Mode::Maximum,
        )
        .unwrap();
        let lp = build_lp(&inst).unwrap();
        assert_eq!(lp.rows.len(), 2);
        let (_, value) = solve_lp_exact(&lp).unwrap().expect_optimal("lp");
        assert_eq!(value, rat(1));
    }

    #[test]
    fn window_rows_collapse_when_d_covers_everything() {
        let edges = vec![
            Edge::new(1, 1, rat(1)),
            Edge::new(2, 1, rat(1)),
            Edge::new(3, 1, rat(1)),
            Edge::new(2, 2, rat(1)),
        ];
        let inst = Instance::new(3, 2, 5, edges, Variant::Line, Mode::Maximum).unwrap();
        let lp = build_lp(&inst).unwrap();
        let windows: Vec<&LpRow> = lp
            .rows
            .iter()
            .filter(|r| matches!(r.kind, RowKind::Window { .. }))
            .collect();
        assert_eq!(windows.len(), 2); // one per T-node
        assert_eq!(windows[0].support.len(), 3);
    }

    #[test]
    fn fig5_lp_value_and_gap() {
        let fx = fixture("fig5").unwrap();
        let lp = build_lp(&fx.instance).unwrap();
        let (solution, value) = solve_lp_exact(&lp).unwrap().expect_optimal("fig5");
        assert_eq!(value, rat(6));
        // x = 1/2 everywhere is feasible with the same value; the vertex
        // the simplex returns must also reach 6
        assert_eq!(solution.value(&fx.instance), rat(6));
        assert_eq!(integrality_gap(&fx.instance).unwrap(), ratio(6, 5));
    }

    #[test]
    fn zero_weights_give_zero_value() {
        let edges = vec![Edge::new(1, 1, rat(0)), Edge::new(2, 2, rat(0))];
        let inst = Instance::new(2, 2, 2, edges, Variant::Line, Mode::Maximum).unwrap();
        let (_, value) = solve_lp_exact(&build_lp(&inst).unwrap())
            .unwrap()
            .expect_optimal("lp");
        assert_eq!(value, rat(0));
    }

    #[test]
    fn perfect_lp_detects_infeasibility() {
        // isolated s2 makes LP2 infeasible
        let inst = Instance::new(
            2,
            1,
            2,
            vec![Edge::new(1, 1, rat(1))],
            Variant::Line,
            Mode::Perfect,
        )
        .unwrap();
        let out = solve_lp_exact(&build_lp(&inst).unwrap()).unwrap();
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn canonical_optimal_matches_unrestricted_value() {
        let mut master = SplitMix64::new(0xcafe);
        for _ in 0..30 {
            let spec = RandomSpec {
                n: 6,
                k: 3,
                d: 2,
                density_num: 2,
                density_den: 3,
                weight_min: 1,
                weight_max: 12,
                weight_denom: 3,
            };
            let inst = gen_random(&spec, master.next_u64());
            let (x, value) = canonical_optimal(&inst).unwrap();
            let (_, full) = solve_lp_exact(&build_lp(&inst).unwrap())
                .unwrap()
                .expect_optimal("full LP");
            assert_eq!(value, full);
            assert_eq!(x.value(&inst), value);
            // support check: mass only on the heaviest 2d-1 edges per node
            let keep = heaviest_support(&inst);
            for (id, v) in x.x.iter().enumerate() {
                assert!(keep[id] || v.is_zero());
            }
        }
    }

    #[test]
    fn flat_order_certificates() {
        // single edge: both slacks zero
        let inst = Instance::new(
            1,
            1,
            1,
            vec![Edge::new(1, 1, rat(1))],
            Variant::Line,
            Mode::Maximum,
        )
        .unwrap();
        let (x, _) = canonical_optimal(&inst).unwrap();
        let fo = flat_order(&inst, &x).unwrap();
        assert_eq!(fo.order.len(), 1);
        assert_eq!(fo.slacks[0], (rat(0), rat(0)));
        assert_eq!(flatness_of(&inst, &x, &fo.order).unwrap(), x.x[0].clone());

        // the paper's gap instance at d = 5: flatness at most 2 - 1/9
        let fx = fixture("fig5").unwrap();
        let (x, _) = canonical_optimal(&fx.instance).unwrap();
        let fo = flat_order(&fx.instance, &x).unwrap();
        let flat = flatness_of(&fx.instance, &x, &fo.order).unwrap();
        assert!(flat <= theta(5));
        // any order is 3-flat
        assert!(flat <= rat(3));
    }

    #[test]
    fn any_order_of_a_feasible_solution_is_three_flat() {
        let mut master = SplitMix64::new(0x3f1a);
        for _ in 0..20 {
            let spec = RandomSpec::basic(6, 3, 2);
            let inst = gen_random(&spec, master.next_u64());
            let (x, _) = canonical_optimal(&inst).unwrap();
            let mut order: Vec<EdgeId> = (0..inst.edges().len()).collect();
            let mut rng = master.split();
            rng.shuffle(&mut order);
            assert!(flatness_of(&inst, &x, &order).unwrap() <= rat(3));
        }
    }

    #[test]
    fn flat_order_rejects_off_support_mass() {
        // d=1 and two edges at one node: only the heaviest may carry mass
        let edges = vec![Edge::new(1, 1, rat(1)), Edge::new(1, 2, rat(2))];
        let inst = Instance::new(1, 2, 1, edges, Variant::Line, Mode::Maximum).unwrap();
        let bad = FractionalSolution {
            x: vec![rat(1), rat(0)],
        };
        assert!(flat_order(&inst, &bad).is_err());
    }

    #[test]
    fn zero_solution_is_flat_at_zero() {
        let fx = fixture("fig3a").unwrap();
        let x = FractionalSolution {
            x: vec![rat(0); fx.instance.edges().len()],
        };
        let order: Vec<EdgeId> = (0..fx.instance.edges().len()).collect();
        assert_eq!(flatness_of(&fx.instance, &x, &order).unwrap(), rat(0));
    }

    #[test]
    fn rounding_trivial_cases() {
        // all weights non-positive: empty result
        let edges = vec![Edge::new(1, 1, rat(0)), Edge::new(2, 1, rat(-1))];
        let inst = Instance::new(2, 1, 2, edges, Variant::Line, Mode::Maximum).unwrap();
        let out = wdm_lp_apx(&inst).unwrap();
        assert!(out.matching.is_empty());

        // single positive edge: kept
        let inst = Instance::new(
            3,
            1,
            2,
            vec![Edge::new(2, 1, ratio(5, 3))],
            Variant::Line,
            Mode::Maximum,
        )
        .unwrap();
        let out = wdm_lp_apx(&inst).unwrap();
        assert_eq!(out.matching.pairs(&inst), vec![(2, 1)]);
    }

    #[test]
    fn rounding_matches_the_recursive_definition() {
        // literal recursion over the flat order, for cross-checking
        fn recursive(
            inst: &Instance,
            order: &[EdgeId],
            alive: &mut [bool],
            w: &mut [Rat],
        ) -> Vec<EdgeId> {
            for id in 0..alive.len() {
                if alive[id] && w[id] <= Rat::zero() {
                    alive[id] = false;
                }
            }
            let Some(&head) = order.iter().find(|&&id| alive[id]) else {
                return Vec::new();
            };
            let e = inst.edge(head);
            let discount = w[head].clone();
            let mut w2 = w.to_vec();
            for &other in inst.edges_at_s(e.s) {
                w2[other] -= discount.clone();
            }
            for &other in inst.edges_at_t(e.t) {
                let o = inst.edge(other);
                if o.s >= e.s && o.s < e.s + inst.d() && o.s != e.s {
                    w2[other] -= discount.clone();
                }
            }
            let mut alive2 = alive.to_vec();
            alive2[head] = false;
            let rest = recursive(inst, order, &mut alive2, &mut w2);
            let m = Matching::from_ids(rest.clone()).unwrap();
            if inst.edge_compatible(&m, head) {
                let mut out = rest;
                out.push(head);
                out
            } else {
                rest
            }
        }

        let mut master = SplitMix64::new(0xbeef);
        for _ in 0..25 {
            let spec = RandomSpec {
                n: 6,
                k: 3,
                d: 2,
                density_num: 1,
                density_den: 2,
                weight_min: -2,
                weight_max: 10,
                weight_denom: 2,
            };
            let inst = gen_random(&spec, master.next_u64());
            if inst.edges().is_empty() {
                continue;
            }
            let (x, _) = canonical_optimal(&inst).unwrap();
            let order = flat_order(&inst, &x).unwrap();
            let mut alive = vec![true; inst.edges().len()];
            let mut w: Vec<Rat> = inst.edges().iter().map(|e| e.weight.clone()).collect();
            let reference = recursive(&inst, &order.order, &mut alive, &mut w);
            let reference = Matching::from_ids(reference).unwrap();
            let iterative = wdm_lp_apx(&inst).unwrap().matching;
            assert_eq!(
                reference, iterative,
                "sweep disagrees with recursion on {inst:?}"
            );
        }
    }

    #[test]
    fn decomposition_of_an_integral_solution_is_itself() {
        let fx = fixture("fig3a").unwrap();
        let inst = &fx.instance;
        let opt = fx.reference("optimal").unwrap();
        let x = FractionalSolution {
            x: (0..inst.edges().len())
                .map(|id| if opt.contains(id) { rat(1) } else { rat(0) })
                .collect(),
        };
        let order = flat_order(inst, &x).unwrap();
        let dec = fractional_decompose(inst, &x, &order, &theta(inst.d())).unwrap();
        assert_eq!(dec.denominator, BigInt::one());
        assert_eq!(dec.q, 1);
        assert_eq!(dec.parts.len(), 1);
        assert_eq!(&dec.parts[0].1, opt);
    }

    #[test]
    fn decomposition_of_fig5_half_solution() {
        let fx = fixture("fig5").unwrap();
        let inst = &fx.instance;
        let m = inst.edges().len();
        let x = FractionalSolution {
            x: vec![ratio(1, 2); m],
        };
        let order = flat_order(inst, &x).unwrap();
        let bound = theta(5);
        let dec = fractional_decompose(inst, &x, &order, &bound).unwrap();
        assert_eq!(dec.denominator, BigInt::from(2));
        assert_eq!(dec.q, 3); // floor(2 * 17/9)
        assert_eq!(dec.parts.len(), 3);
        // the parts sum back to x and stay feasible
        let mut sum = vec![rat(0); m];
        for (lambda, part) in &dec.parts {
            assert!(inst.is_feasible_partial(part).unwrap());
            for &id in part.ids() {
                sum[id] += lambda.clone();
            }
        }
        assert_eq!(sum, x.x);
        // the heaviest part certifies the averaging bound
        let best = dec.parts.iter().map(|(_, p)| inst.weight(p)).max().unwrap();
        assert!(best.clone() * bound.clone() >= x.value(inst));
    }

    #[test]
    fn gap_is_one_for_small_d() {
        let mut master = SplitMix64::new(0x9a9);
        for d in [1usize, 2] {
            for _ in 0..20 {
                let spec = RandomSpec {
                    n: 6,
                    k: 3,
                    d,
                    density_num: 1,
                    density_den: 2,
                    weight_min: 1,
                    weight_max: 9,
                    weight_denom: 2,
                };
                let inst = gen_random(&spec, master.next_u64());
                assert_eq!(
                    integrality_gap(&inst).unwrap(),
                    rat(1),
                    "gap above 1 at d={d}"
                );
            }
        }
    }

    #[test]
    fn disjoint_edges_have_gap_one() {
        let edges = vec![Edge::new(1, 1, rat(2)), Edge::new(4, 2, rat(3))];
        let inst = Instance::new(4, 2, 3, edges, Variant::Line, Mode::Maximum).unwrap();
        assert_eq!(integrality_gap(&inst).unwrap(), rat(1));
    }

    #[test]
    fn export_text_shape() {
        let inst = Instance::new(
            2,
            1,
            2,
            vec![Edge::new(1, 1, ratio(1, 2)), Edge::new(2, 1, rat(3))],
            Variant::Line,
            Mode::Maximum,
        )
        .unwrap();
        let text = export_lp_text(&inst, &build_lp(&inst).unwrap());
        assert!(text.starts_with("maximize: 1/2 x_1_1 + 3 x_2_1\n"));
        assert!(text.contains("degree_s1: x_1_1 <= 1\n"));
        assert!(text.contains("window_s1_t1: x_1_1 + x_2_1 <= 1\n"));
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(1), rat(1));
        assert_eq!(theta(2), ratio(5, 3));
        assert_eq!(theta(5), ratio(17, 9));
    }
}
