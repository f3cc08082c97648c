// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Property tests for the structural, decoration, move, invariant, oracle
//! and file-format invariants. Each case draws a seed and builds its graph
//! and decoration from it.

mod common;

use std::collections::BTreeMap;

use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trivalent::cli::{parse_decorated_graph, serialize};
use trivalent::decoration::{
    apply_trivial_mod, apply_trivial_mods, cycle_b, cycle_b_three_ways, trivial_mod_equivalent, validate_decoration,
    weak_class, TrivialMod,
};
use trivalent::graph::{boundary_isomorphism, cycle_basis, TrivalentGraph};
use trivalent::invariants::{a_tilde, arf, classify, decoration_class, frak_c, normal_form};
use trivalent::moves::{ih_apply, ih_plan, refined_epsilon, replay_graph, IhMove, Pairing};
use trivalent::oracle::{check_classification, move_orbit, sl2_orbit, OrbitBounds};

fn identity(g: &TrivalentGraph) -> BTreeMap<String, String> {
    g.boundary()
        .iter()
        .map(|&h| (g.name(h).to_string(), g.name(h).to_string()))
        .collect()
}

fn setup(seed: u64, range: i64) -> (ChaCha8Rng, TrivalentGraph, trivalent::decoration::Decoration) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = common::random_graph(&mut rng, 8, 3);
    let d = common::random_decoration(&mut rng, &g, range);
    (rng, g, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counting_identities(seed in any::<u64>()) {
        let (_, g, d) = setup(seed, 10);
        let (v, i, e) = (g.vertex_count(), g.internal_edges().len(), g.boundary().len());
        prop_assert_eq!(3 * v, 2 * i + e);
        prop_assert_eq!(v + 2, 2 * g.genus() + e);
        let s: i64 = g.boundary().iter().map(|&h| d.alpha(h)).sum();
        prop_assert_eq!(s, 2 * v as i64);
    }

    #[test]
    fn cycle_basis_has_genus_many_simple_cycles(seed in any::<u64>()) {
        let (_, g, _) = setup(seed, 1);
        let basis = cycle_basis(&g);
        prop_assert_eq!(basis.len(), g.genus());
        for c in &basis {
            let mut vs: Vec<usize> = c.steps(&g).iter().map(|s| s.vertex).collect();
            let n = vs.len();
            vs.sort_unstable();
            vs.dedup();
            prop_assert_eq!(vs.len(), n);
        }
        prop_assert!(boundary_isomorphism(&g, &g, &identity(&g)).unwrap().is_some());
    }

    #[test]
    fn trivial_mods_keep_validity_and_cycle_data(seed in any::<u64>()) {
        let (mut rng, g, d) = setup(seed, 20);
        let bs: Vec<_> = cycle_basis(&g).iter().map(|c| cycle_b(&g, &d, c).unwrap()).collect();
        let weak = weak_class(&g, &d).ok();
        let mut cur = d.clone();
        for _ in 0..8 {
            let m = common::random_trivial_mod(&mut rng, &g);
            cur = apply_trivial_mod(&g, &cur, &m).unwrap();
            prop_assert!(validate_decoration(&g, &cur).is_ok());
        }
        let after: Vec<_> = cycle_basis(&g).iter().map(|c| cycle_b(&g, &cur, c).unwrap()).collect();
        prop_assert_eq!(bs, after);
        prop_assert_eq!(weak, weak_class(&g, &cur).ok());
    }

    #[test]
    fn cycle_formulas_agree(seed in any::<u64>()) {
        let (_, g, d) = setup(seed, 20);
        for c in common::simple_cycles(&g) {
            let [a, b, e] = cycle_b_three_ways(&g, &d, &c).unwrap();
            prop_assert_eq!(a, b);
            prop_assert_eq!(a, e);
        }
    }

    #[test]
    fn trivial_mod_equivalence_witnesses(seed in any::<u64>()) {
        let (mut rng, g, d) = setup(seed, 10);
        prop_assert_eq!(trivial_mod_equivalent(&g, &d, &d).unwrap(), Some(vec![]));
        let script: Vec<TrivialMod> = (0..5).map(|_| common::random_trivial_mod(&mut rng, &g)).collect();
        let d2 = apply_trivial_mods(&g, &d, &script).unwrap();
        let forward = trivial_mod_equivalent(&g, &d, &d2).unwrap().expect("reachable");
        prop_assert!(apply_trivial_mods(&g, &d, &forward).unwrap().same_residues(&d2));
        let back = trivial_mod_equivalent(&g, &d2, &d).unwrap().expect("symmetric");
        prop_assert!(apply_trivial_mods(&g, &d2, &back).unwrap().same_residues(&d));
        let inverse: Vec<TrivialMod> = script.iter().rev().map(|m| m.inverse()).collect();
        prop_assert!(apply_trivial_mods(&g, &d2, &inverse).unwrap().same_residues(&d));
    }

    #[test]
    fn ih_apply_transports_exactly(seed in any::<u64>(), c in any::<bool>()) {
        let (mut rng, g, d) = setup(seed, 20);
        let edges: Vec<(usize, usize)> = g.internal_edges().into_iter().filter(|&(x, _)| !g.is_loop(x)).collect();
        prop_assume!(!edges.is_empty());
        let (u, v) = edges[rng.random_range(0..edges.len())];
        let p = if c { Pairing::C } else { Pairing::B };
        let (g2, d2, t) = ih_apply(&g, &d, &IhMove::new(g.name(u), g.name(v), p)).unwrap();
        prop_assert_eq!(t.before.b, t.after.b);
        prop_assert_eq!(refined_epsilon(&t.before), refined_epsilon(&t.after));
        prop_assert!(validate_decoration(&g2, &d2).is_ok());
        prop_assert_eq!(classify(&g, &d).unwrap().record(), classify(&g2, &d2).unwrap().record());
    }

    #[test]
    fn invariants_fixed_by_trivial_mods(seed in any::<u64>()) {
        let (mut rng, g, d) = setup(seed, 12);
        let before = (a_tilde(&g, &d).ok(), decoration_class(&g, &d).ok(), arf(&g, &d).ok());
        let script: Vec<TrivialMod> = (0..6).map(|_| common::random_trivial_mod(&mut rng, &g)).collect();
        let d2 = apply_trivial_mods(&g, &d, &script).unwrap();
        prop_assert_eq!(before, (a_tilde(&g, &d2).ok(), decoration_class(&g, &d2).ok(), arf(&g, &d2).ok()));
    }

    #[test]
    fn arf_ignores_orientation(seed in any::<u64>()) {
        let (mut rng, g, _) = setup(seed, 1);
        let d = common::random_even_decoration(&mut rng, &g, 12);
        if let (Ok(_), Ok(cycles)) = (arf(&g, &d), frak_c(&g, &d)) {
            for c in cycles {
                let q = |r: trivalent::decoration::Residue| (r.value().rem_euclid(4) / 2 + 1) % 2;
                prop_assert_eq!(q(cycle_b(&g, &d, &c).unwrap()), q(cycle_b(&g, &d, &c.reversed()).unwrap()));
            }
        }
    }

    #[test]
    fn normal_form_idempotent(seed in any::<u64>()) {
        let (_, g, d) = setup(seed, 12);
        let n = normal_form(&g, &d).unwrap();
        let again = normal_form(&n.graph, &n.decoration).unwrap();
        prop_assert_eq!(n.record(), again.record());
        prop_assert_eq!(classify(&g, &d).unwrap().record(), classify(&n.graph, &n.decoration).unwrap().record());
    }

    #[test]
    fn plans_replay(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: usize = rng.random_range(1..=8);
        let genus = rng.random_range(0..=2.min(v.div_ceil(2)));
        let g1 = common::random_graph_with(&mut rng, v, genus);
        let g2 = common::random_graph_with(&mut rng, v, genus);
        let map = identity(&g1);
        prop_assume!(g2.boundary().iter().all(|&h| map.contains_key(g2.name(h))));
        let script = ih_plan(&g1, &g2, &map).unwrap();
        let end = replay_graph(&g1, &script).unwrap();
        prop_assert!(boundary_isomorphism(&end, &g2, &map).unwrap().is_some());
    }

    #[test]
    fn file_format_round_trips(seed in any::<u64>()) {
        let (_, g, d) = setup(seed, 20);
        let text = serialize(&g, Some(&d));
        let (g2, d2) = parse_decorated_graph(&text).unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert_eq!(d2.clone(), Some(d.canonical()));
        prop_assert_eq!(serialize(&g2, d2.as_ref()), text);
    }

    #[test]
    fn sl2_orbit_keeps_gcd(a in -8i64..=8, b in -8i64..=8) {
        for (p, q) in sl2_orbit(a, b, 8) {
            prop_assert_eq!(p.gcd(&q), a.gcd(&b));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn orbit_snapshots_share_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_graph(&mut rng, 4, 2);
        let d = common::random_decoration(&mut rng, &g, 6);
        let bounds = OrbitBounds { depth: 2, frontier: 5_000, ..OrbitBounds::default() };
        let record = classify(&g, &d).unwrap().record();
        for s in move_orbit(&g, &d, &bounds).unwrap().snapshots {
            prop_assert!(validate_decoration(&g, &s).is_ok());
            prop_assert_eq!(&classify(&g, &s).unwrap().record(), &record);
        }
    }
}

#[test]
fn classification_sound_on_small_corpus() {
    let bounds = OrbitBounds {
        param: 1,
        frontier: 200_000,
        ..OrbitBounds::default()
    };
    for g in common::small_graphs(2) {
        let r = check_classification(&g, 2, &bounds).unwrap();
        assert!(r.violations.is_empty(), "{}", r.to_text());
    }
}
