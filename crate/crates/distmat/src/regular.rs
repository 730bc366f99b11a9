//! Regular instances: recognition, constructive perfect matchings, and the
//! full decomposition into `r` perfect distance matchings.
//!
//! An instance is `r`-regular when every `S`-node has degree `r` and every
//! `T`-node has exactly `r` edges into every window of `d` consecutive
//! positions. For such instances a perfect distance matching always exists:
//! match the first `d` positions by a plain perfect matching, then give
//! each later position the partner of the position `d` steps back. The
//! counting argument over the two windows ending and starting around the
//! reused node shows the required edge is present. Removing the result
//! leaves an `(r-1)`-regular instance, which yields the decomposition.

use crate::core::{Edge, EdgeId, Instance, Matching, Variant};
use crate::exact::max_cardinality_matching;
use crate::{Error, Result};

/// Outcome of the regularity check: the degree `r`, or the first violation
/// in scan order (degrees by position, then windows by start and `T`-node).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    Regular {
        r: usize,
    },
    DegreeViolation {
        s: usize,
        observed: usize,
        expected: usize,
    },
    WindowViolation {
        t: usize,
        window_start: usize,
        observed: usize,
        expected: usize,
    },
}

/// Checks regularity (line variant only).
pub fn check_regular(inst: &Instance) -> Result<Regularity> {
    if inst.variant() == Variant::Cycle {
        return Err(Error::InvalidInput(
            "regularity is defined for the line variant".into(),
        ));
    }
    let n = inst.n();
    if n == 0 {
        return Ok(Regularity::Regular { r: 0 });
    }
    let r = inst.edges_at_s(1).len();
    for s in 2..=n {
        let observed = inst.edges_at_s(s).len();
        if observed != r {
            return Ok(Regularity::DegreeViolation {
                s,
                observed,
                expected: r,
            });
        }
    }
    if n >= inst.d() {
        let d = inst.d();
        for start in 1..=(n - d + 1) {
            for t in 1..=inst.k() {
                let observed = inst
                    .edges_at_t(t)
                    .iter()
                    .filter(|&&id| {
                        let s = inst.edge(id).s;
                        s >= start && s < start + d
                    })
                    .count();
                if observed != r {
                    return Ok(Regularity::WindowViolation {
                        t,
                        window_start: start,
                        observed,
                        expected: r,
                    });
                }
            }
        }
    }
    Ok(Regularity::Regular { r })
}

fn require_regular(inst: &Instance) -> Result<usize> {
    match check_regular(inst)? {
        Regularity::Regular { r } => {
            if r == 0 && inst.n() > 0 {
                Err(Error::InvalidInput(
                    "a 0-regular instance with S-nodes has no perfect matching".into(),
                ))
            } else {
                Ok(r)
            }
        }
        violation => Err(Error::InvalidInput(format!(
            "instance is not regular: {violation:?}"
        ))),
    }
}

/// Constructs a perfect distance matching of a regular instance.
///
/// Weights are ignored; the initial block uses plain augmenting paths. The
/// extension step reuses the partner of the node `d` positions back, at
/// distance exactly `d`, which the window counting argument supports.
/// (Reusing the node `d-1` back, as a literal reading might suggest, would
/// violate the distance constraint.)
pub fn regular_perfect(inst: &Instance) -> Result<Matching> {
    require_regular(inst)?;
    let n = inst.n();
    if n == 0 {
        return Ok(Matching::empty());
    }
    let d = inst.d();
    let head = d.min(n);
    let positions: Vec<usize> = (1..=head).collect();
    let start = max_cardinality_matching(inst, &positions);
    if start.len() < head {
        return Err(Error::InvalidInput(
            "regular instance did not admit a perfect matching on the first window".into(),
        ));
    }
    let mut partner: Vec<usize> = vec![0; n + 1];
    for &id in start.ids() {
        let e = inst.edge(id);
        partner[e.s] = e.t;
    }
    for i in (head + 1)..=n {
        let t = partner[i - d];
        if inst.edge_id(i, t).is_none() {
            return Err(Error::InvalidInput(format!(
                "regularity promised edge s{i} t{t}; the sequential extension cannot continue"
            )));
        }
        partner[i] = t;
    }
    let ids: Vec<EdgeId> = (1..=n)
        .map(|s| inst.edge_id(s, partner[s]).expect("partner edges exist"))
        .collect();
    Matching::from_ids(ids)
}

/// Splits a regular instance into `r` pairwise-disjoint perfect distance
/// matchings covering every edge. The residual regularity drops by exactly
/// one per extraction, which is asserted.
pub fn regular_decompose(inst: &Instance) -> Result<Vec<Matching>> {
    let r = require_regular(inst)?;
    let mut parts = Vec::with_capacity(r);
    let mut remaining: Vec<Edge> = inst.edges().to_vec();
    for round in 0..r {
        let residual = Instance::new(
            inst.n(),
            inst.k(),
            inst.d(),
            remaining.clone(),
            inst.variant(),
            inst.mode(),
        )?;
        let expected = r - round;
        match check_regular(&residual)? {
            Regularity::Regular { r: observed } if observed == expected => {}
            other => {
                return Err(Error::InvalidInput(format!(
                    "residual should be {expected}-regular, got {other:?}"
                )))
            }
        }
        let part = regular_perfect(&residual)?;
        let pairs = part.pairs(&residual);
        remaining.retain(|e| !pairs.contains(&(e.s, e.t)));
        parts.push(Matching::from_pairs(inst, &pairs)?);
    }
    debug_assert!(remaining.is_empty());
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Mode;
    use crate::gen::gen_regular;
    use crate::rational::rat;

    fn k22() -> Instance {
        let edges = vec![
            Edge::new(1, 1, rat(1)),
            Edge::new(1, 2, rat(1)),
            Edge::new(2, 1, rat(1)),
            Edge::new(2, 2, rat(1)),
        ];
        Instance::new(2, 2, 2, edges, Variant::Line, Mode::Perfect).unwrap()
    }

    #[test]
    fn complete_two_by_two_is_two_regular() {
        assert_eq!(check_regular(&k22()).unwrap(), Regularity::Regular { r: 2 });
    }

    #[test]
    fn single_window_case() {
        // d = n: regularity degenerates to equal degrees plus one window
        let edges = vec![
            Edge::new(1, 1, rat(1)),
            Edge::new(2, 2, rat(1)),
            Edge::new(3, 3, rat(1)),
        ];
        let inst = Instance::new(3, 3, 3, edges, Variant::Line, Mode::Perfect).unwrap();
        assert_eq!(check_regular(&inst).unwrap(), Regularity::Regular { r: 1 });
    }

    #[test]
    fn removing_an_edge_breaks_regularity() {
        let inst = k22();
        let edges: Vec<Edge> = inst.edges()[1..].to_vec();
        let broken = Instance::new(2, 2, 2, edges, Variant::Line, Mode::Perfect).unwrap();
        assert!(matches!(
            check_regular(&broken).unwrap(),
            Regularity::DegreeViolation {
                s: 2,
                observed: 2,
                expected: 1
            }
        ));
    }

    #[test]
    fn perfect_on_k22_is_lexicographic() {
        let m = regular_perfect(&k22()).unwrap();
        assert_eq!(m.pairs(&k22()), vec![(1, 1), (2, 2)]);
        assert!(k22().is_feasible(&m).unwrap());
    }

    #[test]
    fn one_regular_instance_is_its_own_matching() {
        let inst = gen_regular(7, 3, 1, 3).unwrap();
        let m = regular_perfect(&inst).unwrap();
        assert_eq!(m.len(), 7);
        assert_eq!(regular_decompose(&inst).unwrap().len(), 1);
    }

    #[test]
    fn k22_decomposes_into_two_matchings() {
        let parts = regular_decompose(&k22()).unwrap();
        assert_eq!(parts.len(), 2);
        let mut all: Vec<EdgeId> = parts.iter().flat_map(|p| p.ids().to_vec()).collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn generated_instances_decompose_cleanly() {
        for (n, d, r, seed) in [(10, 2, 2, 4u64), (12, 3, 3, 8), (20, 4, 2, 15)] {
            let inst = gen_regular(n, d, r, seed).unwrap();
            let parts = regular_decompose(&inst).unwrap();
            assert_eq!(parts.len(), r);
            let mut covered: Vec<EdgeId> = Vec::new();
            for part in &parts {
                assert!(
                    inst.is_feasible(part).unwrap(),
                    "part must be feasible and perfect"
                );
                assert_eq!(part.len(), n);
                covered.extend(part.ids());
            }
            covered.sort_unstable();
            let every: Vec<EdgeId> = (0..inst.edges().len()).collect();
            assert_eq!(covered, every, "parts must partition the edge set");
        }
    }

    #[test]
    fn irregular_input_is_rejected() {
        let edges = vec![Edge::new(1, 1, rat(1)), Edge::new(2, 1, rat(1))];
        let inst = Instance::new(2, 1, 2, edges, Variant::Line, Mode::Perfect).unwrap();
        // degrees are all 1 but the single window sees t1 twice
        assert!(matches!(
            check_regular(&inst).unwrap(),
            Regularity::WindowViolation { .. }
        ));
        assert!(regular_perfect(&inst).is_err());
    }
}
