use std::collections::BTreeMap;

use super::*;
use crate::cobcore::OrientedSmoothing;
use crate::planar::{BasicOperator, WordStep};
use crate::tangle::{crossing_complex, crossing_smoothings, kh, random_alternating_tangle, CrossingSign};
use crate::Z;

fn zero_differential(a: OrientedSmoothing, b: OrientedSmoothing) -> ChainComplex<Z> {
    ChainComplex::from_parts(
        4,
        -1,
        vec![vec![GradedSmoothing::new(a, -2)], vec![GradedSmoothing::new(b, -1)]],
        vec![BTreeMap::new()],
    )
}

#[test]
fn negative_crossing_is_diagonal() {
    let c = crossing_complex::<Z>(CrossingSign::Negative);
    assert_eq!(diagonality(&c).unwrap(), DiagonalityVerdict::Diagonal(-1));
    assert_eq!(coherent_diagonality(&c).unwrap(), CoherenceVerdict::Coherent(-1));
}

#[test]
fn positive_crossing_is_coherent() {
    let c = crossing_complex::<Z>(CrossingSign::Positive);
    // 0-smoothing{1} in degree 0 and 1-smoothing{2} in degree 1
    assert_eq!(coherent_diagonality(&c).unwrap(), CoherenceVerdict::Coherent(-2));
}

#[test]
fn same_smoothing_twice_is_not_diagonal() {
    let (_, s1) = crossing_smoothings();
    let c = zero_differential(s1.clone(), s1);
    assert!(matches!(diagonality(&c).unwrap(), DiagonalityVerdict::NotDiagonal { .. }));
}

#[test]
fn zero_map_between_crossing_smoothings_is_not_coherent() {
    let (s0, s1) = crossing_smoothings();
    let c = zero_differential(s0, s1);
    assert_eq!(diagonality(&c).unwrap(), DiagonalityVerdict::Diagonal(-1));
    match coherent_diagonality(&c).unwrap() {
        CoherenceVerdict::Counterexample { word, expected, found } => {
            assert_eq!(word.len(), 1);
            assert_eq!(expected, -1 - operator_rotation_number(&word));
            assert!(matches!(found, DiagonalityVerdict::NotDiagonal { .. }));
        }
        other => panic!("expected a counterexample, got {other:?}"),
    }
}

#[test]
fn empty_complex_is_diagonal_zero() {
    let c = ChainComplex::<Z>::empty(4);
    assert_eq!(diagonality(&c).unwrap(), DiagonalityVerdict::Diagonal(0));
}

#[test]
fn unreduced_input_is_flagged() {
    let s = OrientedSmoothing::loops_only(1, 0);
    let c: ChainComplex<Z> = ChainComplex::single(0, GradedSmoothing::new(s, 0));
    assert_eq!(diagonality_of_reduced(&c), DiagonalityVerdict::NotReduced);
    // the unknot deloops to ∅{1} ⊕ ∅{−1}: 2r − R is ∓1
    assert!(matches!(diagonality(&c).unwrap(), DiagonalityVerdict::NotDiagonal { .. }));
}

#[test]
fn expected_constants() {
    let join = OperatorWord::unary(BasicOperator::join(4, 1, 4, 0));
    assert_eq!(expected_constant(&[-1, -1], &join), -1);
    let neg_curl = BasicOperator::curl(4, 0, Polarity::EvenTails);
    assert_eq!(neg_curl.rotation_number(), -1);
    assert_eq!(expected_constant(&[3], &OperatorWord::unary(neg_curl)), 4);
    assert_eq!(expected_constant(&[2, 5], &OperatorWord { inputs: vec![2, 2], steps: vec![] }), 7);
}

#[test]
fn two_crossings_compose_to_predicted_constant() {
    let a = crossing_complex::<Z>(CrossingSign::Negative);
    let w = OperatorWord::unary(BasicOperator::join(4, 1, 4, 0));
    let out = apply_to_complexes(&w, &[a.clone(), a]).unwrap();
    assert_eq!(diagonality(&out).unwrap(), DiagonalityVerdict::Diagonal(expected_constant(&[-1, -1], &w)));
    let closed = w.then(WordStep::Unary { slot: 0, op: BasicOperator::curl(6, 0, Polarity::EvenTails) });
    let out = apply_to_complexes(&closed, &[crossing_complex::<Z>(CrossingSign::Negative), crossing_complex(CrossingSign::Negative)]).unwrap();
    assert_eq!(diagonality(&out).unwrap().constant(), Some(expected_constant(&[-1, -1], &closed)));
}

#[test]
fn alternating_tangles_are_diagonal() {
    for seed in 0..60 {
        let g = random_alternating_tangle(seed, 1 + seed as usize % 5, 6, true);
        let c = kh::<Z>(&g.diagram).unwrap();
        let v = diagonality(&c).unwrap();
        assert!(v.constant().is_some(), "{}: {v}", g.diagram.to_pd_text());
    }
}

#[test]
fn one_tangles_are_single_lines() {
    let mut seen = 0;
    for seed in 0..40 {
        let g = random_alternating_tangle(seed, 1 + seed as usize % 5, 2, true);
        if g.diagram.open_edges.len() != 2 {
            continue;
        }
        seen += 1;
        let c = kh::<Z>(&g.diagram).unwrap();
        assert!(single_line_constant(&c).is_some(), "{}", g.diagram.to_pd_text());
    }
    assert!(seen > 10);
}

#[test]
fn witness_serializes() {
    let (_, s1) = crossing_smoothings();
    let c = zero_differential(s1.clone(), s1);
    let v = diagonality(&c).unwrap();
    let j = v.to_json();
    assert_eq!(j["status"], "not_diagonal");
    assert_eq!(j["witness"].as_array().unwrap().len(), 2);
}
