use super::*;
use crate::homology::{homology_table, HomologyTable};
use crate::{Q, Z};

fn table_q(t: &TangleDiagram) -> HomologyTable {
    homology_table(&kh::<Q>(t).unwrap()).unwrap()
}

fn table_z(t: &TangleDiagram) -> HomologyTable {
    homology_table(&kh::<Z>(t).unwrap()).unwrap()
}

fn betti(entries: &[((i32, i32), usize)]) -> BTreeMap<(i32, i32), usize> {
    entries.iter().copied().collect()
}

fn betti_of(t: &HomologyTable) -> BTreeMap<(i32, i32), usize> {
    t.entries.iter().filter(|(_, e)| e.betti > 0).map(|(&k, e)| (k, e.betti)).collect()
}

const TREFOIL_KT: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
const FIGURE8: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

#[test]
fn parse_hopf() {
    let t = parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
    assert_eq!(t.n_crossings(), 2);
    assert!(t.is_closed());
}

#[test]
fn thrice_used_label_is_rejected() {
    assert!(matches!(parse_pd("X(1,1,1,2) X(2,3,3,4)"), Err(Error::BadIncidence(_))));
}

#[test]
fn json_input() {
    let t = parse_pd(r#"{"crossings":[[1,2,3,4]],"open_edges":[1,2,3,4]}"#).unwrap();
    assert_eq!(t.open_edges, vec![1, 2, 3, 4]);
    assert!(t.boundary_declared);
}

#[test]
fn same_over_twice_is_not_alternating() {
    // both crossings carry edge 2 and edge 3 as over-strand ends
    let t = parse_pd("X(1,2,4,3) X(4,2,1,3)").unwrap();
    assert!(!is_alternating(&t));
    assert!(matches!(assign_gravity(&t), Err(Error::NotAlternating(_))));
}

#[test]
fn trefoil_is_alternating() {
    let t = parse_pd(TREFOIL_KT).unwrap();
    assert!(assign_gravity(&t).is_ok());
    assert_eq!(t.writhe_counts().unwrap(), (0, 3));
}

#[test]
fn crossing_complexes_have_constant_diagonal() {
    for (sign, c) in [(CrossingSign::Negative, -1), (CrossingSign::Positive, -2)] {
        let x = crossing_complex::<Z>(sign);
        x.validate().unwrap();
        for (r, g) in x.graded_objects() {
            assert_eq!(2 * r as i64 - g.shifted_rotation_number(), c);
        }
    }
}

#[test]
fn unknot_diagrams() {
    let expect = betti(&[((0, -1), 1), ((0, 1), 1)]);
    let circle = parse_pd("O").unwrap();
    assert_eq!(betti_of(&table_q(&circle)), expect);
    assert_eq!(betti_of(&cube_oracle::<Q>(&circle).unwrap()), expect);
    let kink = parse_pd("X(1,2,2,1)").unwrap();
    assert_eq!(betti_of(&table_q(&kink)), expect);
    assert_eq!(betti_of(&cube_oracle::<Q>(&kink).unwrap()), expect);
}

#[test]
fn left_trefoil_matches_knot_atlas() {
    let t = parse_pd(TREFOIL_KT).unwrap();
    let expect = betti(&[((0, -1), 1), ((0, -3), 1), ((-2, -5), 1), ((-3, -9), 1)]);
    assert_eq!(betti_of(&cube_oracle::<Q>(&t).unwrap()), expect);
    assert_eq!(betti_of(&table_q(&t)), expect);
    let z = table_z(&t);
    assert_eq!(z.get(-2, -7).unwrap().torsion, vec![2]);
    assert!(z.same_groups(&cube_oracle::<Z>(&t).unwrap()));
}

#[test]
fn mirror_flips_gradings() {
    let t = parse_pd(TREFOIL_KT).unwrap().mirror().unwrap();
    assert_eq!(t.writhe_counts().unwrap(), (3, 0));
    let expect = betti(&[((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)]);
    assert_eq!(betti_of(&table_q(&t)), expect);
}

#[test]
fn figure_eight_matches_knot_atlas() {
    let t = parse_pd(FIGURE8).unwrap();
    let expect = betti(&[((-2, -5), 1), ((-1, -1), 1), ((0, -1), 1), ((0, 1), 1), ((1, 1), 1), ((2, 5), 1)]);
    assert_eq!(betti_of(&cube_oracle::<Q>(&t).unwrap()), expect);
    assert_eq!(betti_of(&table_q(&t)), expect);
    assert!(table_z(&t).same_groups(&cube_oracle::<Z>(&t).unwrap()));
}

#[test]
fn hopf_matches_oracle() {
    let t = parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
    assert!(table_z(&t).same_groups(&cube_oracle::<Z>(&t).unwrap()));
}

#[test]
fn open_diagram_is_not_closed_for_oracle() {
    let t = parse_pd("X(1,2,3,4)").unwrap();
    assert!(matches!(cube_oracle::<Q>(&t), Err(Error::NotClosed)));
}

#[test]
fn hopf_order() {
    let t = parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap();
    assert_eq!(crossing_order(&t).unwrap(), vec![0, 1]);
}

#[test]
fn generated_tangles_are_valid() {
    for seed in 0..40 {
        let g = random_alternating_tangle(seed, 1 + (seed as usize % 6), 8, seed % 3 != 0);
        let t = &g.diagram;
        t.validate().unwrap();
        assert!(!t.is_split());
        assert_eq!(is_alternating(t), g.alternating, "seed {seed}: {}", t.to_pd_text());
        let c = kh::<Z>(t).unwrap();
        assert_eq!(c.arity, t.open_edges.len());
    }
}

#[test]
fn torus_diagram_is_rejected() {
    // parses, but the faces of this code give Euler characteristic 0
    let t = parse_pd("X(1,4,2,3) X(3,6,4,5) X(5,2,6,1)").unwrap();
    assert_eq!(t.n_crossings(), 3);
    assert!(matches!(kh::<Q>(&t), Err(Error::NonPlanar(_))));
}

#[test]
fn borromean_rings() {
    let t = parse_pd("X(1,2,3,4) X(5,6,7,3) X(4,7,8,9) X(6,10,11,8) X(9,11,12,1) X(10,5,2,12)").unwrap();
    assert!(assign_gravity(&t).is_ok());
    let expect = betti(&[
        ((3, 7), 1),
        ((2, 5), 2),
        ((2, 3), 1),
        ((0, 1), 4),
        ((1, 1), 2),
        ((-1, -1), 2),
        ((0, -1), 4),
        ((-2, -3), 1),
        ((-2, -5), 2),
        ((-3, -7), 1),
    ]);
    assert_eq!(betti_of(&table_q(&t)), expect);
    assert!(table_z(&t).same_groups(&cube_oracle::<Z>(&t).unwrap()));
}

#[test]
fn crossing_order_does_not_change_homology() {
    let t = parse_pd(FIGURE8).unwrap();
    let base = table_z(&t);
    for order in [[0, 1, 2, 3], [3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
        let opts = AssemblyOptions { order: Some(order.to_vec()), ..Default::default() };
        let c = kh_with::<Z>(&t, &opts).unwrap();
        assert!(homology_table(&c).unwrap().same_groups(&base));
    }
}

#[test]
fn split_link_convolves() {
    let t = parse_pd("X(1,4,2,3) X(3,2,4,1) O").unwrap();
    let hopf = table_q(&parse_pd("X(1,4,2,3) X(3,2,4,1)").unwrap());
    let both = table_q(&t);
    for (&(i, j), e) in &hopf.entries {
        assert_eq!(both.betti(i, j + 1), e.betti + hopf.betti(i, j + 2));
    }
    assert!(both.same_groups(&cube_oracle::<Q>(&t).unwrap()));
}
