//! Khovanov homology straight from the cube of resolutions, sharing nothing
//! with the cobordism machinery. Exponential in the crossing count.

use std::collections::BTreeMap;

use super::{CrossingSign, TangleDiagram};
use crate::error::{Error, Result};
use crate::homology::{ground_ring_of, smith_homology, HomologyTable, ScalarComplex};
use crate::ring::Ring;

struct State {
    /// Circle index of every edge label.
    circle: BTreeMap<i64, usize>,
    count: usize,
}

fn resolve(t: &TangleDiagram, s: usize) -> State {
    let labels: Vec<i64> = t.occurrences().keys().copied().collect();
    let pos: BTreeMap<i64, usize> = labels.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut join = |a: i64, b: i64| {
        let (x, y) = (find(&mut parent, pos[&a]), find(&mut parent, pos[&b]));
        parent[x.max(y)] = x.min(y);
    };
    for (k, &[a, b, c, d]) in t.crossings.iter().enumerate() {
        if s >> k & 1 == 0 {
            join(a, b);
            join(c, d);
        } else {
            join(a, d);
            join(b, c);
        }
    }
    let mut ids = BTreeMap::new();
    let mut circle = BTreeMap::new();
    for (k, &e) in labels.iter().enumerate() {
        let r = find(&mut parent, k);
        let n = ids.len();
        circle.insert(e, *ids.entry(r).or_insert(n));
    }
    let count = ids.len() + t.loops;
    State { circle, count }
}

/// Khovanov homology of a closed diagram by brute force over all `2^n`
/// resolutions. Generators are bit masks over circles (bit set = `x`).
pub fn cube_oracle<R: Ring>(t: &TangleDiagram) -> Result<HomologyTable> {
    t.validate()?;
    if !t.open_edges.is_empty() {
        return Err(Error::NotClosed);
    }
    let n = t.crossings.len();
    if n > 20 {
        return Err(Error::DimensionMismatch(format!("{n} crossings is too many for the cube")));
    }
    let signs = t.signs()?;
    let n_plus = signs.iter().filter(|&&s| s == CrossingSign::Positive).count() as i32;
    let n_minus = n as i32 - n_plus;
    let states: Vec<State> = (0..1usize << n).map(|s| resolve(t, s)).collect();
    let qdeg = |s: usize, m: usize| {
        let k = states[s].count as i32;
        let xs = m.count_ones() as i32;
        (k - 2 * xs) + s.count_ones() as i32 + n_plus - 2 * n_minus
    };
    // index of each generator inside its (j, i) block
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut dims: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (s, st) in states.iter().enumerate() {
        let i = s.count_ones() as usize;
        for m in 0..1usize << st.count {
            let v = dims.entry(qdeg(s, m)).or_insert_with(|| vec![0; n + 1]);
            index.insert((s, m), v[i]);
            v[i] += 1;
        }
    }
    let mut cx: BTreeMap<i32, ScalarComplex<R>> =
        dims.into_iter().map(|(j, d)| (j, ScalarComplex::new(-n_minus, d))).collect();
    for (s, st) in states.iter().enumerate() {
        for c in (0..n).filter(|&c| s >> c & 1 == 0) {
            let s2 = s | 1 << c;
            let st2 = &states[s2];
            let sign = if (s & ((1 << c) - 1)).count_ones() % 2 == 0 { R::one() } else { -R::one() };
            let [a, b, cc, _] = t.crossings[c];
            // circles not touched by crossing c keep their identity
            let mut carry = vec![usize::MAX; st.count];
            for (e, &k) in &st.circle {
                carry[k] = st2.circle[e];
            }
            for l in 0..t.loops {
                carry[st.count - t.loops + l] = st2.count - t.loops + l;
            }
            let (ca, cc_) = (st.circle[&a], st.circle[&cc]);
            let i = s.count_ones() as usize;
            for m in 0..1usize << st.count {
                let mut base = 0usize;
                for k in (0..st.count).filter(|&k| k != ca && k != cc_) {
                    if m >> k & 1 == 1 {
                        base |= 1 << carry[k];
                    }
                }
                let images: Vec<usize> = if ca != cc_ {
                    // merge
                    let out = st2.circle[&a];
                    match (m >> ca & 1, m >> cc_ & 1) {
                        (0, 0) => vec![base],
                        (1, 1) => vec![],
                        _ => vec![base | 1 << out],
                    }
                } else {
                    // split into the circles through a and b
                    let (o1, o2) = (st2.circle[&a], st2.circle[&b]);
                    if m >> ca & 1 == 0 {
                        vec![base | 1 << o1, base | 1 << o2]
                    } else {
                        vec![base | 1 << o1 | 1 << o2]
                    }
                };
                let j = qdeg(s, m);
                let col = index[&(s, m)];
                for m2 in images {
                    debug_assert_eq!(qdeg(s2, m2), j);
                    let row = index[&(s2, m2)];
                    cx.get_mut(&j).unwrap().maps[i].add(row, col, sign.clone());
                }
            }
        }
    }
    let mut entries = BTreeMap::new();
    for (j, sc) in cx {
        debug_assert!(sc.is_complex());
        for (i, e) in smith_homology(&sc) {
            entries.insert((i, j), e);
        }
    }
    Ok(HomologyTable { ring: ground_ring_of::<R>(), entries })
}
