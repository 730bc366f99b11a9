//! Property tests: the model invariants that hold for every instance.

use proptest::prelude::*;

use distmat::core::{
    parse_instance, serialize_instance, EdgeId, Instance, Matching, Mode, Variant,
};
use distmat::exact::solve_bruteforce;
use distmat::gen::{gen_random, RandomSpec, SplitMix64};

/// Random instance driven entirely by a seed, covering both variants and
/// modes and degenerate shapes (n = 0, edge-free).
fn build_instance(seed: u64) -> Instance {
    let mut rng = SplitMix64::new(seed);
    let n = rng.below(8) as usize;
    let k = rng.below(5) as usize;
    let d = 1 + rng.below(4) as usize;
    let spec = RandomSpec {
        n: n.max(1),
        k: k.max(1),
        d,
        density_num: rng.below(4),
        density_den: 3,
        weight_min: -3,
        weight_max: 9,
        weight_denom: 1 + rng.below(4),
    };
    let base = if n == 0 || k == 0 {
        Instance::new(n, k, d, vec![], Variant::Line, Mode::Maximum).unwrap()
    } else {
        gen_random(&spec, rng.next_u64())
    };
    let variant = if rng.chance(1, 3) {
        Variant::Cycle
    } else {
        Variant::Line
    };
    let mode = if rng.chance(1, 3) {
        Mode::Perfect
    } else {
        Mode::Maximum
    };
    Instance::new(
        base.n(),
        base.k(),
        base.d(),
        base.edges().to_vec(),
        variant,
        mode,
    )
    .unwrap()
}

/// Any subset of the edges, feasible or not.
fn random_subset(inst: &Instance, seed: u64) -> Matching {
    let mut rng = SplitMix64::new(seed);
    let ids: Vec<EdgeId> = (0..inst.edges().len())
        .filter(|_| rng.chance(1, 3))
        .collect();
    Matching::from_ids(ids).unwrap()
}

/// A feasible (degree + distance) matching grown greedily from a shuffle.
fn random_feasible(inst: &Instance, seed: u64) -> Matching {
    let mut rng = SplitMix64::new(seed);
    let mut ids: Vec<EdgeId> = (0..inst.edges().len()).collect();
    rng.shuffle(&mut ids);
    let mut picked = Vec::new();
    for id in ids {
        if !rng.chance(2, 3) {
            continue;
        }
        let m = Matching::from_ids(picked.clone()).unwrap();
        if inst.edge_compatible(&m, id) {
            picked.push(id);
        }
    }
    Matching::from_ids(picked).unwrap()
}

/// Independent quadratic re-implementation of the feasibility predicate.
fn oracle_feasible(inst: &Instance, m: &Matching) -> bool {
    let ids = m.ids();
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let (ea, eb) = (inst.edge(a), inst.edge(b));
            if ea.s == eb.s {
                return false;
            }
            if ea.t == eb.t {
                let gap = ea.s.abs_diff(eb.s);
                let dist = match inst.variant() {
                    Variant::Line => gap,
                    Variant::Cycle => gap.min(inst.n() - gap),
                };
                if dist < inst.d() {
                    return false;
                }
            }
        }
    }
    if inst.mode() == Mode::Perfect {
        let mut covered = vec![false; inst.n()];
        for &id in ids {
            covered[inst.edge(id).s - 1] = true;
        }
        if !covered.iter().all(|&c| c) {
            return false;
        }
    }
    true
}

proptest! {
    #[test]
    fn feasibility_agrees_with_quadratic_oracle(seed in any::<u64>(), mseed in any::<u64>()) {
        let inst = build_instance(seed);
        let m = random_subset(&inst, mseed);
        prop_assert_eq!(inst.is_feasible(&m).unwrap(), oracle_feasible(&inst, &m));
    }

    #[test]
    fn hit_set_makes_insertion_feasible_and_is_minimal(seed in any::<u64>(), mseed in any::<u64>()) {
        let inst = build_instance(seed);
        let m = random_feasible(&inst, mseed);
        for probe in 0..inst.edges().len() {
            if m.contains(probe) {
                continue;
            }
            let hit = inst.hit_set(&m, probe).unwrap();
            let swapped = m.replace(&hit, &[probe]).unwrap();
            prop_assert!(inst.is_feasible_partial(&swapped).unwrap());
            // minimality: leaving out any single hit edge breaks feasibility
            for &kept in &hit {
                let partial: Vec<EdgeId> =
                    hit.iter().copied().filter(|&h| h != kept).collect();
                let broken = m.replace(&partial, &[probe]).unwrap();
                prop_assert!(!inst.is_feasible_partial(&broken).unwrap());
            }
        }
    }

    #[test]
    fn hit_set_union_is_the_union(seed in any::<u64>(), mseed in any::<u64>(), xseed in any::<u64>()) {
        let inst = build_instance(seed);
        let m = random_feasible(&inst, mseed);
        let mut rng = SplitMix64::new(xseed);
        let probes: Vec<EdgeId> = (0..inst.edges().len())
            .filter(|&id| !m.contains(id) && rng.chance(1, 2))
            .collect();
        let union = inst.hit_set_union(&m, &probes).unwrap();
        let mut expected: Vec<EdgeId> = probes
            .iter()
            .flat_map(|&p| inst.hit_set(&m, p).unwrap())
            .collect();
        expected.sort_unstable();
        expected.dedup();
        prop_assert_eq!(union, expected);
    }

    #[test]
    fn window_sizes_hold_everywhere(seed in any::<u64>()) {
        let inst = build_instance(seed);
        for i in 1..=inst.n() {
            let w = inst.window(i);
            match inst.variant() {
                Variant::Line => {
                    prop_assert_eq!(w.left.len(), inst.d().min(i));
                    prop_assert_eq!(w.right.len(), inst.d().min(inst.n() - i + 1));
                }
                Variant::Cycle => {
                    prop_assert_eq!(w.left.len(), inst.d().min(inst.n()));
                    prop_assert_eq!(w.right.len(), inst.d().min(inst.n()));
                }
            }
            prop_assert_eq!(w.center, i);
        }
    }

    #[test]
    fn serialization_round_trips_bit_exactly(seed in any::<u64>(), lseed in any::<u64>()) {
        let inst = build_instance(seed);
        let mut rng = SplitMix64::new(lseed);
        let loops: Vec<usize> = if inst.n() == 0 {
            vec![]
        } else {
            (0..rng.below(4)).map(|_| 1 + rng.below(inst.n() as u64) as usize).collect()
        };
        let text = serialize_instance(&inst, &loops, &[]);
        let parsed = parse_instance(&text).unwrap();
        prop_assert_eq!(&parsed.instance, &inst);
        let mut sorted = loops;
        sorted.sort_unstable();
        prop_assert_eq!(&parsed.loops, &sorted);
        prop_assert_eq!(serialize_instance(&parsed.instance, &parsed.loops, &[]), text);
    }
}

#[test]
fn to_perfect_preserves_the_brute_force_optimum() {
    let mut master = SplitMix64::new(0x70f);
    for _ in 0..80 {
        let seed = master.next_u64();
        let mut rng = SplitMix64::new(seed);
        let spec = RandomSpec {
            n: 1 + rng.below(6) as usize,
            k: 1 + rng.below(3) as usize,
            d: 1 + rng.below(3) as usize,
            density_num: 1 + rng.below(3),
            density_den: 3,
            weight_min: -2,
            weight_max: 8,
            weight_denom: 2,
        };
        let inst = gen_random(&spec, rng.next_u64());
        let direct = solve_bruteforce(&inst).unwrap();
        let reduced = solve_bruteforce(&distmat::core::to_perfect(&inst).unwrap()).unwrap();
        assert_eq!(
            direct.value(),
            reduced.value(),
            "reduction changed the optimum: {inst:?}"
        );
    }
}
