use crate::cobcore::cob::Gluing;
use crate::cobcore::{Circles, Cob, CobLin, OrientedSmoothing};
use crate::error::{Error, Result};
use crate::ring::Ring;

use std::sync::Arc;

/// A single planar step on smoothings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Step {
    /// Curl joining points `p` and `p + 1` (mod `2k`).
    Curl(usize),
    /// Join point `.0` of the first input to point `.1` of the second.
    Join(usize, usize),
    /// Place a boundary-free second input beside the first.
    Union,
    /// Renumber boundary points so that old point `.0` becomes point 0.
    Rotate(usize),
}

/// Result of a step on smoothings, with enough bookkeeping to carry
/// cobordisms along.
#[derive(Clone, Debug)]
pub(crate) struct Traced {
    pub out: OrientedSmoothing,
    /// For every output curve, an input `(input, curve)` it contains.
    pub from: Vec<(usize, usize)>,
    /// Input arcs `(input, curve)` at the two ends of each strip of the
    /// diagram.
    pub strips: Vec<((usize, usize), (usize, usize))>,
}

struct Builder {
    arcs: Vec<(u16, u16)>,
    arc_src: Vec<(usize, usize)>,
    pos: Vec<(usize, usize)>,
    neg: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder { arcs: Vec::new(), arc_src: Vec::new(), pos: Vec::new(), neg: Vec::new() }
    }

    fn arc(&mut self, t: usize, h: usize, src: (usize, usize)) {
        self.arcs.push((t as u16, h as u16));
        self.arc_src.push(src);
    }

    fn loops_of(&mut self, input: usize, s: &OrientedSmoothing) {
        for c in s.n_arcs()..s.n_curves() {
            if s.loop_sign(c) > 0 {
                self.pos.push((input, c));
            } else {
                self.neg.push((input, c));
            }
        }
    }

    fn finish(self, points: usize, strips: Vec<((usize, usize), (usize, usize))>) -> Traced {
        let out = OrientedSmoothing::from_parts(points, self.arcs.clone(), self.pos.len() as u32, self.neg.len() as u32);
        let mut from = Vec::with_capacity(out.n_curves());
        for (t, _) in out.arcs() {
            let i = self.arcs.iter().position(|a| a.0 as usize == t).unwrap();
            from.push(self.arc_src[i]);
        }
        from.extend(self.pos);
        from.extend(self.neg);
        Traced { out, from, strips }
    }
}

pub(crate) fn curl(s: &OrientedSmoothing, p: usize) -> Result<Traced> {
    let n = s.boundary_count();
    if n < 2 || p >= n {
        return Err(Error::ArityMismatch(format!("curl at {p} on {n} points")));
    }
    let q = (p + 1) % n;
    let idx = |x: usize| -> usize {
        let below = (x > p) as usize + (x > q) as usize;
        x - below
    };
    let mut b = Builder::new();
    let p_head = !s.is_tail(p);
    let (ap, aq) = (s.arc_at(p), s.arc_at(q));
    for a in 0..s.n_arcs() {
        if a == ap || a == aq {
            continue;
        }
        let (t, h) = s.arc(a);
        b.arc(idx(t), idx(h), (0, a));
    }
    b.loops_of(0, s);
    if ap == aq {
        let sign = if p_head { 1 } else { -1 };
        if sign > 0 {
            b.pos.push((0, ap));
        } else {
            b.neg.push((0, ap));
        }
    } else if p_head {
        let x = s.mate(p);
        let y = s.mate(q);
        b.arc(idx(x), idx(y), (0, ap));
    } else {
        let x = s.mate(q);
        let y = s.mate(p);
        b.arc(idx(x), idx(y), (0, aq));
    }
    Ok(b.finish(n - 2, vec![((0, ap), (0, aq))]))
}

pub(crate) fn join(s1: &OrientedSmoothing, p1: usize, s2: &OrientedSmoothing, p2: usize) -> Result<Traced> {
    let (n1, n2) = (s1.boundary_count(), s2.boundary_count());
    if p1 >= n1 || p2 >= n2 {
        return Err(Error::ArityMismatch(format!("join at {p1}/{p2} on {n1}+{n2} points")));
    }
    if s1.is_tail(p1) == s2.is_tail(p2) {
        return Err(Error::OrientationMismatch(format!("points {p1} and {p2} are both {}", if s1.is_tail(p1) { "tails" } else { "heads" })));
    }
    let i1 = |x: usize| if x < p1 { x } else { x + n2 - 2 };
    let i2 = |y: usize| p1 + (y + n2 - p2 - 1) % n2;
    let mut b = Builder::new();
    let (a1, a2) = (s1.arc_at(p1), s2.arc_at(p2));
    for a in 0..s1.n_arcs() {
        if a != a1 {
            let (t, h) = s1.arc(a);
            b.arc(i1(t), i1(h), (0, a));
        }
    }
    for a in 0..s2.n_arcs() {
        if a != a2 {
            let (t, h) = s2.arc(a);
            b.arc(i2(t), i2(h), (1, a));
        }
    }
    if s1.is_tail(p1) {
        b.arc(i2(s2.mate(p2)), i1(s1.mate(p1)), (0, a1));
    } else {
        b.arc(i1(s1.mate(p1)), i2(s2.mate(p2)), (0, a1));
    }
    b.loops_of(0, s1);
    b.loops_of(1, s2);
    Ok(b.finish(n1 + n2 - 2, vec![((0, a1), (1, a2))]))
}

pub(crate) fn union(s1: &OrientedSmoothing, s2: &OrientedSmoothing) -> Result<Traced> {
    if s2.boundary_count() != 0 {
        return Err(Error::ArityMismatch("disjoint union needs a closed second input".into()));
    }
    let mut b = Builder::new();
    for a in 0..s1.n_arcs() {
        let (t, h) = s1.arc(a);
        b.arc(t, h, (0, a));
    }
    b.loops_of(0, s1);
    b.loops_of(1, s2);
    Ok(b.finish(s1.boundary_count(), Vec::new()))
}

pub(crate) fn rotate(s: &OrientedSmoothing, shift: usize) -> Traced {
    let n = s.boundary_count();
    let mut b = Builder::new();
    for a in 0..s.n_arcs() {
        let (t, h) = s.arc(a);
        b.arc((t + n - shift) % n, (h + n - shift) % n, (0, a));
    }
    b.loops_of(0, s);
    b.finish(n, Vec::new())
}

pub(crate) fn trace(step: Step, inputs: &[&OrientedSmoothing]) -> Result<Traced> {
    match (step, inputs) {
        (Step::Rotate(k), [s]) if s.boundary_count() > 0 => Ok(rotate(s, k % s.boundary_count())),
        (Step::Rotate(_), [s]) => Ok(rotate(s, 0)),
        (Step::Curl(p), [s]) => curl(s, p),
        (Step::Join(p1, p2), [a, b]) => join(a, p1, b, p2),
        (Step::Union, [a, b]) => union(a, b),
        _ => Err(Error::ArityMismatch(format!("{step:?} on {} inputs", inputs.len()))),
    }
}

/// Carry input cobordisms `f_i: σ_i → τ_i` through a step. `bot` and `top`
/// are the traces of the `σ_i` and of the `τ_i`.
pub(crate) fn cob_through(fs: &[&Cob], bot: &Traced, top: &Traced, out: &Circles) -> Vec<(u32, Cob)> {
    let mut gl = Gluing::default();
    let offs: Vec<usize> = fs.iter().map(|f| gl.add_discs(f.n_comps(), f.dot_mask())).collect();
    let mut pieces = Vec::with_capacity(bot.from.len() + top.from.len());
    for &(i, c) in &bot.from {
        pieces.push(offs[i] + fs[i].comp_of_bottom(c));
    }
    for &(i, c) in &top.from {
        pieces.push(offs[i] + fs[i].comp_of_top(c));
    }
    for &((i1, c1), (i2, c2)) in &bot.strips {
        let a = offs[i1] + fs[i1].comp_of_bottom(c1);
        let b = offs[i2] + fs[i2].comp_of_bottom(c2);
        gl.union(a, b);
        gl.add_chi(a, -1);
    }
    gl.finish(out, &pieces)
}

/// Carry linear combinations through a step.
pub(crate) fn lin_through<R: Ring>(fs: &[&CobLin<R>], bot: &Traced, top: &Traced) -> CobLin<R> {
    let b = Arc::new(bot.out.clone());
    let t = Arc::new(top.out.clone());
    let circles = Circles::new(&b, &t);
    let mut out = CobLin::zero(b, t);
    let mut stack: Vec<(Vec<&Cob>, R)> = vec![(Vec::new(), R::one())];
    for f in fs {
        let mut next = Vec::new();
        for (chosen, r) in &stack {
            for (c, x) in f.terms() {
                let mut v = chosen.clone();
                v.push(c);
                next.push((v, r.clone() * x.clone()));
            }
        }
        stack = next;
    }
    for (chosen, r) in stack {
        for (twos, c) in cob_through(&chosen, bot, top, &circles) {
            out.add_term(c, crate::cobcore::lin::pow2::<R>(twos) * r.clone());
        }
    }
    out
}
