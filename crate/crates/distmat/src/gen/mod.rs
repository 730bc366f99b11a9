//! Reproducible instance generators and the built-in example fixtures.
//!
//! Everything here is a pure function of its seed: the RNG is a fixed
//! SplitMix64 (see [`rng`]) and all iteration orders are canonical, so a
//! seed identifies an instance byte-for-byte across platforms and builds.

mod fixtures;
mod rng;
mod threedm;

pub use fixtures::{fixture, fixture_names, Fixture};
pub use rng::SplitMix64;
pub use threedm::{gen_from_3dm, ReductionOutput, ThreeDimMatching};

use crate::core::{Edge, Instance, Mode, Variant};
use crate::rational::Rat;
use crate::{Error, Result};

use num_bigint::BigInt;

/// Parameters for [`gen_random`]. Each `(s, t)` pair appears independently
/// with probability `density_num/density_den`; weights are uniform rationals
/// `numerator/weight_denom` with the numerator drawn from
/// `weight_min..=weight_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub density_num: u64,
    pub density_den: u64,
    pub weight_min: i64,
    pub weight_max: i64,
    pub weight_denom: u64,
}

impl RandomSpec {
    /// Half density, weights in `{1/2, 1, ..., 5}`.
    pub fn basic(n: usize, k: usize, d: usize) -> Self {
        RandomSpec {
            n,
            k,
            d,
            density_num: 1,
            density_den: 2,
            weight_min: 1,
            weight_max: 10,
            weight_denom: 2,
        }
    }
}

/// Random instance (line variant, maximum mode); a pure function of
/// `(spec, seed)`.
pub fn gen_random(spec: &RandomSpec, seed: u64) -> Instance {
    assert!(spec.d >= 1, "distance parameter must be positive");
    assert!(spec.density_num <= spec.density_den && spec.density_den > 0);
    assert!(spec.weight_min <= spec.weight_max && spec.weight_denom > 0);
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for s in 1..=spec.n {
        for t in 1..=spec.k {
            if rng.chance(spec.density_num, spec.density_den) {
                let numer = rng.range_i64(spec.weight_min, spec.weight_max);
                let weight = Rat::new(BigInt::from(numer), BigInt::from(spec.weight_denom));
                edges.push(Edge::new(s, t, weight));
            }
        }
    }
    Instance::new(spec.n, spec.k, spec.d, edges, Variant::Line, Mode::Maximum)
        .expect("generated edges are valid by construction")
}

/// Regular instance: `k = d` and `s_i t_j` is an edge iff the residue
/// `(i-1) mod d` falls in the `r` consecutive residues starting at `j-1`.
/// Every `S`-node then has degree `r` and every `T`-node has exactly `r`
/// edges into every window of `d` consecutive positions. The seed permutes
/// the `T`-labels and assigns uniform integer weights from `1..=100`.
pub fn gen_regular(n: usize, d: usize, r: usize, seed: u64) -> Result<Instance> {
    if d == 0 || r == 0 {
        return Err(Error::InvalidInput("d and r must be positive".into()));
    }
    if r > d {
        return Err(Error::InvalidInput(format!(
            "a simple regular instance needs r <= d, got r={r}, d={d}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut labels: Vec<usize> = (1..=d).collect();
    rng.shuffle(&mut labels);
    let mut edges = Vec::new();
    for i in 1..=n {
        let residue = (i - 1) % d;
        for j in 1..=d {
            let offset = (residue + d - (j - 1)) % d;
            if offset < r {
                let weight = Rat::from_integer(BigInt::from(rng.range_i64(1, 100)));
                edges.push(Edge::new(i, labels[j - 1], weight));
            }
        }
    }
    Instance::new(n, d, d, edges, Variant::Line, Mode::Perfect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::serialize_instance;
    use crate::regular::{check_regular, Regularity};

    #[test]
    fn density_extremes() {
        let mut spec = RandomSpec::basic(4, 3, 2);
        spec.density_num = 1;
        spec.density_den = 1;
        assert_eq!(gen_random(&spec, 7).edges().len(), 12);
        spec.density_num = 0;
        assert_eq!(gen_random(&spec, 7).edges().len(), 0);
    }

    #[test]
    fn same_seed_same_bytes() {
        let spec = RandomSpec::basic(6, 4, 3);
        let a = gen_random(&spec, 42);
        let b = gen_random(&spec, 42);
        assert_eq!(a, b);
        assert_eq!(
            serialize_instance(&a, &[], &[]),
            serialize_instance(&b, &[], &[])
        );
        let c = gen_random(&spec, 43);
        assert_ne!(
            serialize_instance(&a, &[], &[]),
            serialize_instance(&c, &[], &[])
        );
    }

    #[test]
    fn regular_generator_is_regular() {
        for (n, d, r, seed) in [(4, 2, 2, 1u64), (9, 3, 2, 5), (12, 4, 3, 9), (7, 3, 1, 2)] {
            let inst = gen_regular(n, d, r, seed).unwrap();
            assert_eq!(check_regular(&inst).unwrap(), Regularity::Regular { r });
            assert_eq!(inst.k(), d);
            for s in 1..=n {
                assert_eq!(inst.edges_at_s(s).len(), r);
            }
        }
    }

    #[test]
    fn regular_generator_rejects_r_above_d() {
        assert!(gen_regular(6, 2, 3, 0).is_err());
        assert!(gen_regular(6, 2, 0, 0).is_err());
    }

    #[test]
    fn r_equal_one_is_a_perfect_matching_edge_set() {
        let inst = gen_regular(6, 3, 1, 11).unwrap();
        let ids: Vec<_> = (0..inst.edges().len()).collect();
        let m = crate::core::Matching::from_ids(ids).unwrap();
        assert!(inst.is_feasible(&m).unwrap());
    }
}
