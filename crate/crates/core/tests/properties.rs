mod common;

use std::collections::BTreeSet;

use kh_core::complex::{deloop, dg_reduce, gaussian_eliminate, ChainComplex};
use kh_core::homology::{homology_table, HomologyTable};
use kh_core::tangle::{cube_oracle, kh, kh_with, random_alternating_tangle, AssemblyOptions, TangleDiagram};
use kh_core::{Ring, Q, Z};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn table<R: Ring>(t: &TangleDiagram) -> HomologyTable {
    homology_table(&kh::<R>(t).unwrap()).unwrap()
}

fn braid_word(strands: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let gen = (1..strands as i32, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g });
    prop::collection::vec(gen, 1..=max_len)
}

/// Random deloops and eliminations, in any order, until nothing is left.
fn reduce_randomly<R: Ring, G: Rng>(rng: &mut G, mut c: ChainComplex<R>) -> ChainComplex<R> {
    loop {
        let mut moves: Vec<(bool, i32, usize, usize)> = Vec::new();
        for r in c.degrees() {
            for (e, g) in c.object(r).iter().enumerate() {
                for l in 0..g.smoothing.n_loops() {
                    moves.push((true, r, e, l));
                }
            }
        }
        for (r, row, col, l) in c.all_cells() {
            if l.unit_identity().is_some() && c.object(r)[col] == c.object(r + 1)[row] {
                moves.push((false, r, col, row));
            }
        }
        let Some(&(is_loop, r, a, b)) = moves.choose(rng) else { return c };
        c = if is_loop { deloop(&c, r, a, b).unwrap() } else { gaussian_eliminate(&c, r, a, b).unwrap() };
    }
}

/// A random order that attaches each crossing next to earlier ones.
fn random_connected_order<G: Rng>(rng: &mut G, t: &TangleDiagram) -> Vec<usize> {
    let n = t.crossings.len();
    let mut order = vec![rng.gen_range(0..n)];
    while order.len() < n {
        let edges: BTreeSet<i64> = order.iter().flat_map(|&k| t.crossings[k]).collect();
        let nbrs: Vec<usize> = (0..n).filter(|k| !order.contains(k) && t.crossings[*k].iter().any(|e| edges.contains(e))).collect();
        order.push(*nbrs.choose(rng).unwrap());
    }
    order
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn braid_closures_match_the_oracle(strands in 2usize..=4, word in braid_word(4, 7)) {
        let word: Vec<i32> = word.into_iter().filter(|g| g.unsigned_abs() < strands as u32).collect();
        prop_assume!(!word.is_empty());
        let t = braid_closure(strands, &word);
        let z = table::<Z>(&t);
        prop_assert!(z.same_groups(&cube_oracle::<Z>(&t).unwrap()));
        prop_assert!(table::<Q>(&t).same_groups(&cube_oracle::<Q>(&t).unwrap()));
        prop_assert_eq!(z.euler_characteristic(), state_sum(&t));
    }

    #[test]
    fn cancelling_pair_changes_nothing(word in braid_word(3, 6), at in any::<prop::sample::Index>(), g in 1i32..=2, s in any::<bool>()) {
        let a = braid_closure(3, &word);
        let mut longer = word.clone();
        let g = if s { g } else { -g };
        let k = at.index(word.len() + 1);
        longer.splice(k..k, [g, -g]);
        let b = braid_closure(3, &longer);
        prop_assert!(table::<Z>(&a).same_groups(&table::<Z>(&b)));
    }

    #[test]
    fn braid_relation_changes_nothing(pre in braid_word(3, 3), post in braid_word(3, 3), positive in any::<bool>()) {
        let s = if positive { 1 } else { -1 };
        let mut w1 = pre.clone();
        w1.extend([s, 2 * s, s]);
        w1.extend(&post);
        let mut w2 = pre.clone();
        w2.extend([2 * s, s, 2 * s]);
        w2.extend(&post);
        let (a, b) = (braid_closure(3, &w1), braid_closure(3, &w2));
        prop_assert!(table::<Z>(&a).same_groups(&table::<Z>(&b)));
    }

    #[test]
    fn random_reduction_order_gives_the_same_reduced_complex(seed in any::<u64>(), n in 1usize..=4) {
        let g = random_alternating_tangle(seed, n, 8, seed % 3 != 0);
        let t = &g.diagram;
        let opts = AssemblyOptions { unreduced: true, ..Default::default() };
        let formal = kh_with::<Q>(t, &opts).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ours = reduce_randomly(&mut rng, formal.clone());
        prop_assert!(ours.is_reduced());
        prop_assert_eq!(ours.object_multiset(), kh::<Q>(t).unwrap().object_multiset());
        prop_assert_eq!(dg_reduce(&formal).unwrap().0.object_multiset(), ours.object_multiset());
    }

    #[test]
    fn assembly_order_does_not_matter(word in braid_word(3, 6), seed in any::<u64>()) {
        let t = braid_closure(3, &word);
        prop_assume!(t.loops == 0 && t.components().len() == 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = random_connected_order(&mut rng, &t);
        let opts = AssemblyOptions { order: Some(order), ..Default::default() };
        let c = kh_with::<Z>(&t, &opts).unwrap();
        prop_assert!(homology_table(&c).unwrap().same_groups(&table::<Z>(&t)));
    }

    #[test]
    fn mirror_reflects_the_table(word in braid_word(3, 6)) {
        let t = braid_closure(3, &word);
        let m = t.mirror().unwrap();
        let a = table::<Q>(&t);
        let b = table::<Q>(&m);
        let flipped: BTreeSet<_> = b.entries.iter().map(|(&(i, j), e)| ((-i, -j), e.betti)).collect();
        let direct: BTreeSet<_> = a.entries.iter().map(|(&k, e)| (k, e.betti)).collect();
        prop_assert_eq!(direct, flipped);
    }
}

#[test]
fn unreduced_unknot_diagram_reduces_to_two_generators() {
    let t = braid_closure(2, &[1, -1, 1]);
    let opts = AssemblyOptions { unreduced: true, ..Default::default() };
    let formal = kh_with::<Z>(&t, &opts).unwrap();
    assert_eq!(formal.n_objects(), 8);
    let h = homology_table(&dg_reduce(&formal).unwrap().0).unwrap();
    assert_eq!(h.entries.keys().copied().collect::<Vec<_>>(), vec![(0, -1), (0, 1)]);
}
