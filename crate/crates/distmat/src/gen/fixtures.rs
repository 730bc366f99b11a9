//! Built-in example instances with their reference matchings.
//!
//! Each fixture is a small named instance exercising a tight case of one of
//! the algorithms: feasibility (fig1), greedy worst cases (fig3a, fig3b),
//! the window partition bound (fig4), the LP integrality gap (fig5) and
//! local-search optimality (fig6, fig7). Fixtures are also shipped as files
//! under `fixtures/` in the repository; serialization here must match those
//! files byte-for-byte.

use crate::core::{Edge, EdgeId, Instance, Matching, Mode, Variant};
use crate::rational::rat;
use crate::{Error, Result};

/// A named instance plus named reference matchings and edge orders.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub instance: Instance,
    refs: Vec<(&'static str, Matching)>,
    orders: Vec<(&'static str, Vec<EdgeId>)>,
}

impl Fixture {
    /// A reference matching by name (`feasible`, `wavy`, `optimal`, ...).
    pub fn reference(&self, name: &str) -> Result<&Matching> {
        self.refs
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "fixture {} has no reference `{name}` (available: {})",
                    self.name,
                    self.refs
                        .iter()
                        .map(|(n, _)| *n)
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }

    /// A named edge order (only `adversarial` on fig3a).
    pub fn order(&self, name: &str) -> Result<&[EdgeId]> {
        self.orders
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, o)| o.as_slice())
            .ok_or_else(|| {
                Error::InvalidInput(format!("fixture {} has no order `{name}`", self.name))
            })
    }

    pub fn reference_names(&self) -> Vec<&'static str> {
        self.refs.iter().map(|(n, _)| *n).collect()
    }
}

pub fn fixture_names() -> &'static [&'static str] {
    &["fig1", "fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7"]
}

/// Builds the named fixture.
pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "fig1" => fig1(),
        "fig3a" => fig3a(),
        "fig3b" => fig3b(),
        "fig4" => fig4(),
        "fig5" => fig5(),
        "fig6" => fig6(),
        "fig7" => fig7(),
        other => Err(Error::InvalidInput(format!(
            "unknown fixture `{other}` (available: {})",
            fixture_names().join(", ")
        ))),
    }
}

fn unit_instance(n: usize, k: usize, d: usize, mode: Mode, pairs: &[(usize, usize)]) -> Instance {
    let edges = pairs
        .iter()
        .map(|&(s, t)| Edge::new(s, t, rat(1)))
        .collect();
    Instance::new(n, k, d, edges, Variant::Line, mode).expect("fixture data is valid")
}

fn named(
    name: &'static str,
    instance: Instance,
    refs: &[(&'static str, &[(usize, usize)])],
    orders: &[(&'static str, &[(usize, usize)])],
) -> Result<Fixture> {
    let refs = refs
        .iter()
        .map(|(n, pairs)| Ok((*n, Matching::from_pairs(&instance, pairs)?)))
        .collect::<Result<Vec<_>>>()?;
    let orders = orders
        .iter()
        .map(|(n, pairs)| {
            let ids = pairs
                .iter()
                .map(|&(s, t)| {
                    instance
                        .edge_id(s, t)
                        .ok_or_else(|| Error::InvalidInput(format!("no edge s{s} t{t}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((*n, ids))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Fixture {
        name,
        instance,
        refs,
        orders,
    })
}

/// Perfect 3-distance matching feasibility example: the union of the
/// feasible and the infeasible drawing, with both as references.
fn fig1() -> Result<Fixture> {
    let instance = unit_instance(
        5,
        3,
        3,
        Mode::Perfect,
        &[(1, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2), (5, 3)],
    );
    named(
        "fig1",
        instance,
        &[
            ("feasible", &[(1, 2), (2, 3), (3, 1), (4, 2), (5, 3)]),
            ("infeasible", &[(1, 2), (2, 3), (3, 2), (4, 1), (5, 3)]),
        ],
        &[],
    )
}

/// Tight example for the weighted greedy: processing s2t2 first leaves a
/// single edge while the optimum has three.
fn fig3a() -> Result<Fixture> {
    let instance = unit_instance(3, 2, 2, Mode::Maximum, &[(1, 2), (2, 1), (2, 2), (3, 2)]);
    named(
        "fig3a",
        instance,
        &[("wavy", &[(2, 2)]), ("optimal", &[(1, 2), (2, 1), (3, 2)])],
        &[("adversarial", &[(2, 2), (1, 2), (2, 1), (3, 2)])],
    )
}

/// Tight example for S-Greedy and T-Greedy: both pick s1t1 only.
fn fig3b() -> Result<Fixture> {
    let instance = unit_instance(2, 2, 2, Mode::Maximum, &[(1, 1), (1, 2), (2, 1)]);
    named(
        "fig3b",
        instance,
        &[("wavy", &[(1, 1)]), ("optimal", &[(1, 2), (2, 1)])],
        &[],
    )
}

/// Tight example for the window partition at d=3: the edge set itself is
/// feasible (5 edges), the algorithm finds 3.
fn fig4() -> Result<Fixture> {
    let instance = unit_instance(
        5,
        3,
        3,
        Mode::Maximum,
        &[(1, 1), (2, 2), (3, 3), (4, 1), (5, 2)],
    );
    named(
        "fig4",
        instance,
        &[
            ("wavy", &[(1, 1), (4, 1), (5, 2)]),
            ("optimal", &[(1, 1), (2, 2), (3, 3), (4, 1), (5, 2)]),
        ],
        &[],
    )
}

/// Integrality gap 6/5 example: x = 1/2 everywhere is LP-optimal (value 6),
/// the best integral solution has 5 edges.
fn fig5() -> Result<Fixture> {
    let instance = unit_instance(
        8,
        4,
        5,
        Mode::Maximum,
        &[
            (1, 1),
            (1, 3),
            (2, 2),
            (2, 4),
            (4, 2),
            (4, 3),
            (5, 1),
            (5, 4),
            (7, 1),
            (7, 2),
            (8, 3),
            (8, 4),
        ],
    );
    named(
        "fig5",
        instance,
        &[("optimal", &[(1, 1), (2, 2), (5, 4), (7, 2), (8, 3)])],
        &[],
    )
}

/// 2-locally optimal matching of size 2 against an optimum of size 4.
fn fig6() -> Result<Fixture> {
    let instance = unit_instance(
        4,
        2,
        2,
        Mode::Maximum,
        &[(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 2)],
    );
    named(
        "fig6",
        instance,
        &[
            ("wavy", &[(2, 1), (3, 2)]),
            ("mstar", &[(1, 1), (2, 2), (3, 1), (4, 2)]),
        ],
        &[],
    )
}

/// 3-locally optimal 5-distance matching of size 10 against a perfect
/// optimum of size 18; the complement of the wavy edges is optimal.
fn fig7() -> Result<Fixture> {
    let all: &[(usize, usize)] = &[
        (1, 1),
        (2, 1),
        (2, 3),
        (3, 2),
        (3, 3),
        (4, 5),
        (5, 2),
        (5, 4),
        (6, 1),
        (6, 4),
        (7, 3),
        (8, 5),
        (8, 6),
        (9, 2),
        (10, 3),
        (10, 4),
        (11, 6),
        (11, 8),
        (12, 5),
        (13, 6),
        (14, 3),
        (15, 7),
        (15, 8),
        (16, 5),
        (16, 8),
        (17, 5),
        (17, 6),
        (18, 6),
    ];
    let wavy: &[(usize, usize)] = &[
        (2, 1),
        (3, 3),
        (5, 2),
        (6, 4),
        (8, 5),
        (10, 3),
        (11, 6),
        (15, 8),
        (16, 5),
        (17, 6),
    ];
    let mstar: Vec<(usize, usize)> = all.iter().copied().filter(|p| !wavy.contains(p)).collect();
    let instance = unit_instance(18, 8, 5, Mode::Maximum, all);
    named("fig7", instance, &[("wavy", wavy), ("mstar", &mstar)], &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_build_and_reference_matchings_check_out() {
        for name in fixture_names() {
            let fx = fixture(name).unwrap();
            assert_eq!(fx.name, *name);
            for (ref_name, m) in &fx.refs {
                if *ref_name == "infeasible" {
                    assert!(!fx.instance.is_feasible(m).unwrap(), "{name}/{ref_name}");
                } else {
                    assert!(
                        fx.instance.is_feasible_partial(m).unwrap(),
                        "{name}/{ref_name} should satisfy degree and distance constraints"
                    );
                }
            }
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn fixture_shapes_match_the_figures() {
        let fig5 = fixture("fig5").unwrap();
        assert_eq!(
            (fig5.instance.n(), fig5.instance.k(), fig5.instance.d()),
            (8, 4, 5)
        );
        assert_eq!(fig5.instance.edges().len(), 12);
        assert_eq!(fig5.reference("optimal").unwrap().len(), 5);

        let fig6 = fixture("fig6").unwrap();
        assert_eq!(
            (fig6.instance.n(), fig6.instance.k(), fig6.instance.d()),
            (4, 2, 2)
        );
        assert_eq!(fig6.instance.edges().len(), 6);
        assert_eq!(fig6.reference("wavy").unwrap().len(), 2);
        assert_eq!(fig6.reference("mstar").unwrap().len(), 4);

        let fig7 = fixture("fig7").unwrap();
        assert_eq!(
            (fig7.instance.n(), fig7.instance.k(), fig7.instance.d()),
            (18, 8, 5)
        );
        assert_eq!(fig7.instance.edges().len(), 28);
        assert_eq!(fig7.reference("wavy").unwrap().len(), 10);
        assert_eq!(fig7.reference("mstar").unwrap().len(), 18);
    }

    #[test]
    fn fig7_mstar_is_perfect() {
        let fx = fixture("fig7").unwrap();
        let mstar = fx.reference("mstar").unwrap();
        let perfect = fx.instance.with_mode(Mode::Perfect);
        assert!(perfect.is_feasible(mstar).unwrap());
    }
}
