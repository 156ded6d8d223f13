use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use super::ChainComplex;
use crate::cobcore::{CobLin, GradedSmoothing};
use crate::ring::Ring;

/// A node of the reduction graph. `out` holds maps to nodes of the next
/// level; `inn` lists sources in the previous level.
pub(crate) struct Node<R> {
    pub obj: GradedSmoothing,
    pub tag: (i32, i32),
    pub out: BTreeMap<usize, CobLin<R>>,
    pub inn: BTreeSet<usize>,
}

/// Mutable graph form of a complex used during reduction. Removed nodes
/// stay as `None` so indices are stable.
pub(crate) struct Work<R> {
    pub arity: usize,
    pub min_degree: i32,
    pub levels: Vec<Vec<Option<Node<R>>>>,
    cand: VecDeque<(usize, usize, usize)>,
    pub deloops: usize,
    pub eliminations: usize,
}

impl<R: Ring> Work<R> {
    pub fn new(arity: usize, min_degree: i32, n_levels: usize) -> Self {
        Work {
            arity,
            min_degree,
            levels: (0..n_levels).map(|_| Vec::new()).collect(),
            cand: VecDeque::new(),
            deloops: 0,
            eliminations: 0,
        }
    }

    pub fn from_complex(c: &ChainComplex<R>) -> Self {
        let mut w = Self::new(c.arity, c.min_degree, c.objects.len());
        for (k, o) in c.objects.iter().enumerate() {
            for g in o {
                w.push(k, g.clone(), (c.min_degree + k as i32, 0));
            }
        }
        for (k, d) in c.diffs.iter().enumerate() {
            for (&(row, col), l) in d {
                w.set(k, col, row, l.clone());
            }
        }
        w
    }

    pub fn push(&mut self, level: usize, obj: GradedSmoothing, tag: (i32, i32)) -> usize {
        let v = &mut self.levels[level];
        v.push(Some(Node { obj, tag, out: BTreeMap::new(), inn: BTreeSet::new() }));
        v.len() - 1
    }

    pub fn node(&self, level: usize, i: usize) -> &Node<R> {
        self.levels[level][i].as_ref().expect("live node")
    }

    fn node_mut(&mut self, level: usize, i: usize) -> &mut Node<R> {
        self.levels[level][i].as_mut().expect("live node")
    }

    /// Set the map `level:s → level+1:t` (zero removes it).
    pub fn set(&mut self, level: usize, s: usize, t: usize, l: CobLin<R>) {
        if l.is_zero() {
            if self.node_mut(level, s).out.remove(&t).is_some() {
                self.node_mut(level + 1, t).inn.remove(&s);
            }
            return;
        }
        self.node_mut(level, s).out.insert(t, l);
        self.node_mut(level + 1, t).inn.insert(s);
        self.cand.push_back((level, s, t));
    }

    fn take(&mut self, level: usize, s: usize, t: usize) -> Option<CobLin<R>> {
        let l = self.node_mut(level, s).out.remove(&t)?;
        self.node_mut(level + 1, t).inn.remove(&s);
        Some(l)
    }

    /// Replace loop curve `c` of node `level:i` by `∅{+1} ⊕ ∅{−1}`. The
    /// `{+1}` copy keeps index `i`; the `{−1}` copy's index is returned.
    pub fn deloop(&mut self, level: usize, i: usize, c: usize) -> usize {
        self.deloops += 1;
        let (obj, tag) = {
            let n = self.node(level, i);
            (n.obj.clone(), n.tag)
        };
        let reduced = Arc::new(obj.smoothing.without_loop(c));
        self.node_mut(level, i).obj = GradedSmoothing { smoothing: reduced.clone(), q_shift: obj.q_shift + 1 };
        let j = self.push(level, GradedSmoothing { smoothing: reduced.clone(), q_shift: obj.q_shift - 1 }, tag);

        // out of the loop: precompose with a plain cup ({+1}) or dotted cup ({−1})
        let outs: Vec<usize> = self.node(level, i).out.keys().copied().collect();
        for t in outs {
            let g = self.take(level, i, t).unwrap();
            let (plus, minus) = split_by_dot(&g, false, c, reduced.clone(), g.top.clone());
            self.set(level, i, t, plus);
            self.set(level, j, t, minus);
        }
        // into the loop: postcompose with a dotted cap ({+1}) or plain cap ({−1})
        if level > 0 {
            let ins: Vec<usize> = self.node(level, i).inn.iter().copied().collect();
            for s in ins {
                let f = self.take(level - 1, s, i).unwrap();
                let (dotted, plain) = split_by_dot(&f, true, c, f.bottom.clone(), reduced.clone());
                self.set(level - 1, s, i, plain);
                self.set(level - 1, s, j, dotted);
            }
        }
        j
    }

    /// Gaussian elimination of the invertible map `level:s → level+1:t`.
    pub fn eliminate(&mut self, level: usize, s: usize, t: usize) {
        self.eliminations += 1;
        let phi = self.take(level, s, t).expect("map present");
        let uinv = phi.unit_identity().and_then(|u| u.inverse()).expect("invertible");
        let neg = -uinv;
        let sources: Vec<usize> = self.node(level + 1, t).inn.iter().copied().collect();
        let targets: Vec<usize> = self.node(level, s).out.keys().copied().collect();
        for &c in &sources {
            let gamma = self.node(level, c).out[&t].clone();
            for &d in &targets {
                let delta = &self.node(level, s).out[&d];
                let mut corr = gamma.then(delta).expect("matching").scaled(&neg);
                if corr.is_zero() {
                    continue;
                }
                if let Some(eps) = self.node(level, c).out.get(&d) {
                    corr.add_assign(eps);
                }
                self.set(level, c, d, corr);
            }
        }
        self.remove(level, s);
        self.remove(level + 1, t);
    }

    fn remove(&mut self, level: usize, i: usize) {
        let n = self.levels[level][i].take().expect("live node");
        for t in n.out.keys() {
            self.node_mut(level + 1, *t).inn.remove(&i);
        }
        for s in n.inn {
            self.node_mut(level - 1, s).out.remove(&i);
        }
    }

    fn is_invertible(&self, level: usize, s: usize, t: usize) -> bool {
        let (Some(Some(a)), Some(Some(b))) = (
            self.levels[level].get(s),
            self.levels.get(level + 1).and_then(|v| v.get(t)),
        ) else {
            return false;
        };
        a.obj == b.obj && a.out.get(&t).is_some_and(|l| l.unit_identity().is_some())
    }

    /// Eliminate every invertible map among the pending candidates.
    pub fn eliminate_pending(&mut self) {
        while let Some((level, s, t)) = self.cand.pop_front() {
            if self.is_invertible(level, s, t) {
                self.eliminate(level, s, t);
            }
        }
    }

    fn first_loop(&self) -> Option<(usize, usize, usize)> {
        for (level, v) in self.levels.iter().enumerate() {
            for (i, n) in v.iter().enumerate() {
                if let Some(n) = n {
                    if n.obj.smoothing.n_loops() > 0 {
                        return Some((level, i, n.obj.smoothing.n_arcs()));
                    }
                }
            }
        }
        None
    }

    /// Reduce completely: eliminate what is available, then deloop the first
    /// looped object and repeat.
    pub fn reduce(&mut self) {
        loop {
            self.eliminate_pending();
            match self.first_loop() {
                Some((level, i, c)) => {
                    self.deloop(level, i, c);
                }
                None => break,
            }
        }
        self.rescan();
        self.eliminate_pending();
    }

    /// Queue every live map as a candidate.
    pub fn rescan(&mut self) {
        for level in 0..self.levels.len() {
            for (s, n) in self.levels[level].iter().enumerate() {
                if let Some(n) = n {
                    for &t in n.out.keys() {
                        self.cand.push_back((level, s, t));
                    }
                }
            }
        }
    }

    /// Live nodes of a level as `(index, node)`.
    pub fn live(&self, level: usize) -> impl Iterator<Item = (usize, &Node<R>)> {
        self.levels[level].iter().enumerate().filter_map(|(i, n)| n.as_ref().map(|n| (i, n)))
    }

    pub fn into_complex(self) -> ChainComplex<R> {
        let mut objects = Vec::with_capacity(self.levels.len());
        let mut index: Vec<Vec<usize>> = Vec::with_capacity(self.levels.len());
        for v in &self.levels {
            let mut idx = vec![usize::MAX; v.len()];
            let mut o = Vec::new();
            for (i, n) in v.iter().enumerate() {
                if let Some(n) = n {
                    idx[i] = o.len();
                    o.push(n.obj.clone());
                }
            }
            objects.push(o);
            index.push(idx);
        }
        let mut diffs = Vec::with_capacity(self.levels.len());
        for (level, v) in self.levels.into_iter().enumerate() {
            let mut d = BTreeMap::new();
            for (i, n) in v.into_iter().enumerate() {
                if let Some(n) = n {
                    for (t, l) in n.out {
                        d.insert((index[level + 1][t], index[level][i]), l);
                    }
                }
            }
            diffs.push(d);
        }
        ChainComplex { arity: self.arity, min_degree: self.min_degree, objects, diffs }.trimmed()
    }
}

/// Split a map by whether the disc on loop `c` (of its top if `top`, else
/// its bottom) is dotted, dropping that disc. Returns `(dotted, undotted)`.
fn split_by_dot<R: Ring>(
    l: &CobLin<R>,
    top: bool,
    c: usize,
    bottom: Arc<crate::cobcore::OrientedSmoothing>,
    top_s: Arc<crate::cobcore::OrientedSmoothing>,
) -> (CobLin<R>, CobLin<R>) {
    let mut dotted = CobLin::zero(bottom.clone(), top_s.clone());
    let mut plain = CobLin::zero(bottom, top_s);
    for (cob, r) in l.terms() {
        let (d, rest) = cob.drop_loop(top, c);
        if d {
            dotted.add_term(rest, r.clone());
        } else {
            plain.add_term(rest, r.clone());
        }
    }
    (dotted, plain)
}
