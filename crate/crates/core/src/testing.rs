//! Small random instances, shared by the property tests and `kh selftest`.

use rand::Rng;

use crate::cobcore::{OrientedSmoothing, Polarity};

/// Every noncrossing perfect matching of `points`, as pairs in order.
pub fn noncrossing_matchings(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for m in (1..points.len()).step_by(2) {
        let inner = noncrossing_matchings(&points[1..m]);
        let outer = noncrossing_matchings(&points[m + 1..]);
        for a in &inner {
            for b in &outer {
                let mut v = vec![(points[0], points[m])];
                v.extend_from_slice(a);
                v.extend_from_slice(b);
                out.push(v);
            }
        }
    }
    out
}

fn orient(pairs: Vec<(usize, usize)>, polarity: Polarity) -> Vec<(usize, usize)> {
    pairs
        .into_iter()
        .map(|(a, b)| if polarity.is_tail(a) { (a, b) } else { (b, a) })
        .collect()
}

/// All loop-free smoothings of `n` points with the given polarity.
pub fn all_smoothings(n: usize, polarity: Polarity) -> Vec<OrientedSmoothing> {
    let points: Vec<usize> = (0..n).collect();
    noncrossing_matchings(&points)
        .into_iter()
        .map(|m| OrientedSmoothing::new(&orient(m, polarity), &[]).expect("noncrossing"))
        .collect()
}

/// A uniform-ish random noncrossing matching on `points` (even length).
fn random_matching<G: Rng>(rng: &mut G, points: &[usize], out: &mut Vec<(usize, usize)>) {
    if points.is_empty() {
        return;
    }
    let m = 2 * rng.gen_range(0..points.len() / 2) + 1;
    out.push((points[0], points[m]));
    random_matching(rng, &points[1..m], out);
    random_matching(rng, &points[m + 1..], out);
}

/// A random smoothing of `n` points with up to `max_loops` loops of random sign.
pub fn random_smoothing<G: Rng>(rng: &mut G, n: usize, polarity: Polarity, max_loops: usize) -> OrientedSmoothing {
    let points: Vec<usize> = (0..n).collect();
    let mut pairs = Vec::new();
    random_matching(rng, &points, &mut pairs);
    let loops: Vec<i8> = (0..rng.gen_range(0..=max_loops))
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    OrientedSmoothing::new(&orient(pairs, polarity), &loops).expect("noncrossing")
}

pub fn random_polarity<G: Rng>(rng: &mut G) -> Polarity {
    if rng.gen_bool(0.5) {
        Polarity::EvenTails
    } else {
        Polarity::EvenHeads
    }
}
