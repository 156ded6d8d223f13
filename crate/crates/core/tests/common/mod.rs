#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use kh_core::cli::{corpus_dir, load_corpus, Input};
use kh_core::complex::ChainComplex;
use kh_core::planar::{apply_to_complexes, BasicOperator, OperatorWord, WordStep};
use kh_core::tangle::{boundary_order, crossing_order, kh_with, AssemblyOptions, CrossingSign, TangleDiagram};
use kh_core::Ring;
use rand::seq::SliceRandom;
use rand::Rng;

/// Published rational Khovanov homology of the Borromean rings.
pub const BORROMEAN_TABLE: [((i32, i32), usize); 10] = [
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
];

/// Every diagram of the bundled corpus with its alternation label.
pub fn corpus_diagrams() -> Vec<(String, TangleDiagram, Option<bool>)> {
    load_corpus(&corpus_dir())
        .expect("corpus loads")
        .into_iter()
        .filter_map(|i| match i {
            Input::Diagram { name, diagram, alternating } => Some((name, diagram, alternating)),
            Input::Complex { .. } => None,
        })
        .collect()
}

pub fn corpus_diagram(name: &str) -> TangleDiagram {
    corpus_diagrams()
        .into_iter()
        .find(|(n, _, _)| n == name)
        .unwrap_or_else(|| panic!("{name} not in corpus"))
        .1
}

/// Closure of a braid word on `strands` strands; generator `±i` crosses
/// strands `i` and `i+1`, positive when the left strand goes over.
pub fn braid_closure(strands: usize, word: &[i32]) -> TangleDiagram {
    let mut cur: Vec<i64> = (1..=strands as i64).collect();
    let mut next = strands as i64 + 1;
    let mut xs: Vec<[i64; 4]> = Vec::new();
    let mut touched = vec![false; strands];
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        let (a, b) = (cur[i], cur[i + 1]);
        let (c, d) = (next, next + 1);
        next += 2;
        xs.push(if g > 0 { [a, b, d, c] } else { [b, d, c, a] });
        cur[i] = c;
        cur[i + 1] = d;
        touched[i] = true;
        touched[i + 1] = true;
    }
    let close: BTreeMap<i64, i64> = cur.iter().enumerate().map(|(k, &e)| (e, k as i64 + 1)).collect();
    for x in xs.iter_mut() {
        for e in x.iter_mut() {
            *e = close.get(e).copied().unwrap_or(*e);
        }
    }
    let mut t = TangleDiagram::link(xs);
    t.loops = touched.iter().filter(|&&x| !x).count();
    t
}

/// Insert a Reidemeister I kink on `edge`. `twist` picks which of the two
/// kinks (the loop on the left or right side of the strand).
pub fn insert_kink(t: &TangleDiagram, edge: i64, twist: bool) -> TangleDiagram {
    let heads = t.edge_heads().expect("oriented");
    let (hx, hp) = heads[&edge].expect("closed edge");
    let top = t.crossings.iter().flatten().copied().max().unwrap_or(0);
    let (f, g) = (top + 1, top + 2);
    let mut out = t.clone();
    out.crossings[hx][hp] = g;
    out.crossings.push(if twist { [edge, f, f, g] } else { [edge, g, f, f] });
    out
}

/// The sub-diagram on crossings `idx`: edges used once become its boundary.
pub fn sub_diagram(t: &TangleDiagram, idx: &[usize]) -> TangleDiagram {
    let crossings: Vec<[i64; 4]> = idx.iter().map(|&k| t.crossings[k]).collect();
    let mut count: BTreeMap<i64, usize> = BTreeMap::new();
    for e in crossings.iter().flatten() {
        *count.entry(*e).or_default() += 1;
    }
    let mut open = Vec::new();
    for e in crossings.iter().flatten() {
        if count[e] == 1 && !open.contains(e) {
            open.push(*e);
        }
    }
    TangleDiagram { crossings, open_edges: open, loops: 0, boundary_declared: false }
}

/// Close equal neighbours, lowest gap first (wrapping); returns the gaps.
pub fn close_labels(labels: &mut Vec<i64>) -> Vec<usize> {
    let mut gaps = Vec::new();
    while labels.len() >= 2 {
        let n = labels.len();
        let Some(i) = (0..n).find(|&i| labels[i] == labels[(i + 1) % n]) else { break };
        gaps.push(i);
        if i + 1 < n {
            labels.drain(i..i + 2);
        } else {
            labels.pop();
            labels.remove(0);
        }
    }
    gaps
}

/// A diagram cut into two connected pieces, glued back by one join and
/// then curls.
pub struct Split {
    pub left_crossings: Vec<usize>,
    pub right_crossings: Vec<usize>,
    pub left: TangleDiagram,
    pub right: TangleDiagram,
    pub left_labels: Vec<i64>,
    pub right_labels: Vec<i64>,
    pub join: (usize, usize),
    /// Gaps closed after the join, in order.
    pub curls: Vec<usize>,
    /// Boundary labels of the glued result.
    pub labels: Vec<i64>,
}

fn connected(t: &TangleDiagram) -> bool {
    t.components().len() == 1
}

/// Cut `t` along the crossing set `part`; `None` unless both pieces are
/// connected and one join followed by curls glues them back.
pub fn split_at(t: &TangleDiagram, part: &BTreeSet<usize>) -> Option<Split> {
    let a: Vec<usize> = (0..t.crossings.len()).filter(|k| part.contains(k)).collect();
    let b: Vec<usize> = (0..t.crossings.len()).filter(|k| !part.contains(k)).collect();
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let left = sub_diagram(t, &a);
    let right = sub_diagram(t, &b);
    if !connected(&left) || !connected(&right) {
        return None;
    }
    let left_labels = boundary_order(&left).ok()?;
    let right_labels = boundary_order(&right).ok()?;
    for (p1, e) in left_labels.iter().enumerate() {
        let Some(p2) = right_labels.iter().position(|x| x == e) else { continue };
        let n2 = right_labels.len();
        let mut l: Vec<i64> = left_labels[..p1].to_vec();
        l.extend((1..n2).map(|k| right_labels[(p2 + k) % n2]));
        l.extend_from_slice(&left_labels[p1 + 1..]);
        let curls = close_labels(&mut l);
        let distinct: BTreeSet<i64> = l.iter().copied().collect();
        if distinct.len() == l.len() {
            return Some(Split { left_crossings: a, right_crossings: b, left, right, left_labels, right_labels, join: (p1, p2), curls, labels: l });
        }
    }
    None
}

/// A random connected set of crossings grown from a random start.
pub fn random_part<G: Rng>(rng: &mut G, t: &TangleDiagram) -> BTreeSet<usize> {
    let n = t.crossings.len();
    let size = rng.gen_range(1..n);
    let mut part = BTreeSet::from([rng.gen_range(0..n)]);
    while part.len() < size {
        let edges: BTreeSet<i64> = part.iter().flat_map(|&k| t.crossings[k]).collect();
        let mut nbrs: Vec<usize> =
            (0..n).filter(|k| !part.contains(k) && t.crossings[*k].iter().any(|e| edges.contains(e))).collect();
        if nbrs.is_empty() {
            break;
        }
        nbrs.shuffle(rng);
        part.insert(nbrs[0]);
    }
    part
}

/// A prefix of the greedy assembly order.
pub fn prefix_part(t: &TangleDiagram, k: usize) -> BTreeSet<usize> {
    crossing_order(t).expect("orderable").into_iter().take(k).collect()
}

/// The gluing word of a split, with curl signs read off the complex
/// after each step. `None` when the joined points are not head to tail.
pub fn gluing_word<R: Ring>(s: &Split, a: &ChainComplex<R>, b: &ChainComplex<R>) -> Option<(OperatorWord, ChainComplex<R>)> {
    let tail = |c: &ChainComplex<R>, p: usize| c.graded_objects().next().map(|(_, g)| g.smoothing.is_tail(p));
    if tail(a, s.join.0)? == tail(b, s.join.1)? {
        return None;
    }
    let join = BasicOperator::join(a.arity, s.join.0, b.arity, s.join.1);
    let mut w = OperatorWord::unary(join);
    let mut cur = apply_to_complexes(&w, &[a.clone(), b.clone()]).expect("join applies");
    for &gap in &s.curls {
        let pol = cur
            .graded_objects()
            .next()
            .and_then(|(_, g)| g.smoothing.polarity())
            .expect("oriented boundary");
        let op = BasicOperator::curl(cur.arity, gap, pol);
        w = w.then(WordStep::Unary { slot: 0, op });
        cur = apply_to_complexes(&OperatorWord::unary(op), &[cur]).expect("curl applies");
    }
    Some((w, cur))
}

/// Unreduced or reduced complex of a piece, with its boundary left where
/// the assembly puts it.
pub fn piece<R: Ring>(t: &TangleDiagram, unreduced: bool) -> ChainComplex<R> {
    let opts = AssemblyOptions { require_alternating: false, order: None, unreduced };
    kh_with::<R>(t, &opts).expect("piece assembles")
}

/// Like [`piece`], but normalized with the crossing signs of the whole
/// diagram `t` (a piece alone may orient a boundary-to-boundary strand the
/// other way). A sign flip is the shift `[1]{3}` of the crossing complex.
pub fn piece_in<R: Ring>(t: &TangleDiagram, crossings: &[usize], sub: &TangleDiagram, unreduced: bool) -> ChainComplex<R> {
    let full = t.signs().expect("signs");
    let own = sub.signs().expect("signs");
    let pos = |s: &CrossingSign| *s == CrossingSign::Positive;
    let d = crossings.iter().filter(|&&k| pos(&full[k])).count() as i32 - own.iter().filter(|s| pos(s)).count() as i32;
    piece::<R>(sub, unreduced).shifted(d, 3 * d)
}

/// Rotate `labels` onto `target`; the shift to pass to `rotate_complex`.
pub fn shift_onto(labels: &[i64], target: &[i64]) -> Option<usize> {
    let n = labels.len();
    if n != target.len() {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    (0..n).find(|&s| (0..n).all(|i| labels[(i + s) % n] == target[i]))
}

/// Jones polynomial by the state sum, as `j -> coefficient`.
pub fn state_sum(t: &TangleDiagram) -> BTreeMap<i32, i64> {
    let (np, nn) = t.writhe_counts().unwrap();
    let n = t.n_crossings();
    let edges: BTreeSet<i64> = t.crossings.iter().flatten().copied().collect();
    let index: BTreeMap<i64, usize> = edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut out: BTreeMap<i32, i64> = BTreeMap::new();
    for s in 0u32..(1 << n) {
        let mut parent: Vec<usize> = (0..edges.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut join = |a: i64, b: i64| {
            let (x, y) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
            parent[x] = y;
        };
        for (k, x) in t.crossings.iter().enumerate() {
            if s >> k & 1 == 0 {
                join(x[0], x[1]);
                join(x[2], x[3]);
            } else {
                join(x[0], x[3]);
                join(x[1], x[2]);
            }
        }
        let loops = (0..edges.len()).filter(|&e| find(&mut parent, e) == e).count() as u32 + t.loops as u32;
        let r = s.count_ones() as i32;
        let sign = if (r - nn as i32) % 2 == 0 { 1 } else { -1 };
        // (q + 1/q)^loops
        for x in 0..=loops {
            let j = r + np as i32 - 2 * nn as i32 + loops as i32 - 2 * x as i32;
            *out.entry(j).or_default() += sign * binom(loops, x);
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}
