use super::{crossing_complex_with, CrossingSign, TangleDiagram};
use crate::cobcore::{GradedSmoothing, OrientedSmoothing, Polarity};
use crate::complex::{dg_reduce, ChainComplex};
use crate::error::{Error, Result};
use crate::planar::{apply_basic_to_complexes, disjoint_union, rotate_complex, BasicOperator};
use crate::ring::Ring;

/// Switches for [`kh_with`].
#[derive(Clone, Debug, Default)]
pub struct AssemblyOptions {
    /// Fail with `NotAlternating` when an attachment needs a reoriented crossing.
    pub require_alternating: bool,
    /// Use this crossing order instead of the greedy one.
    pub order: Option<Vec<usize>>,
    /// Return the formal (unreduced) complex: no `dg_reduce` between steps.
    pub unreduced: bool,
}

fn reduce<R: Ring>(c: ChainComplex<R>, opts: &AssemblyOptions) -> Result<ChainComplex<R>> {
    if opts.unreduced {
        Ok(c)
    } else {
        Ok(dg_reduce(&c)?.0)
    }
}

/// One attachment: join `crossing` along boundary point `join.0` and its
/// own point `join.1`, then close the listed gaps with curls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Attach {
    pub crossing: usize,
    pub join: Option<(usize, usize)>,
    pub curls: Vec<usize>,
}

/// Close adjacent equal labels, lowest gap first; returns the gaps used.
pub(crate) fn close_adjacent(labels: &mut Vec<i64>) -> Vec<usize> {
    let mut gaps = Vec::new();
    loop {
        let n = labels.len();
        if n < 2 {
            break;
        }
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

/// Boundary labels after joining `x` at `(p1, p2)` and closing.
pub(crate) fn simulate(labels: &[i64], x: &[i64; 4], p1: usize, p2: usize) -> (Vec<i64>, Vec<usize>) {
    let mut l = Vec::with_capacity(labels.len() + 2);
    l.extend_from_slice(&labels[..p1]);
    l.extend((1..4).map(|k| x[(p2 + k) % 4]));
    l.extend_from_slice(&labels[p1 + 1..]);
    let gaps = close_adjacent(&mut l);
    (l, gaps)
}

/// Plan one connected component, starting from its lowest crossing (or
/// following `order` when given).
fn plan_component(t: &TangleDiagram, comp: &[usize], order: Option<&[usize]>) -> Result<(Vec<Attach>, Vec<i64>)> {
    let start = order.map_or(comp[0], |o| o[0]);
    let mut labels: Vec<i64> = t.crossings[start].to_vec();
    let curls = close_adjacent(&mut labels);
    let mut steps = vec![Attach { crossing: start, join: None, curls }];
    let mut used = vec![false; t.crossings.len()];
    used[start] = true;
    for k in 1..comp.len() {
        let candidates: Vec<usize> = match order {
            Some(o) => vec![o[k]],
            None => comp.iter().copied().filter(|&x| !used[x]).collect(),
        };
        let mut best: Option<(usize, usize, usize, usize, Vec<i64>, Vec<usize>)> = None;
        for &x in &candidates {
            let lx = &t.crossings[x];
            for p2 in 0..4 {
                for p1 in (0..labels.len()).filter(|&p| labels[p] == lx[p2]) {
                    let (nl, gaps) = simulate(&labels, lx, p1, p2);
                    if best.as_ref().map_or(true, |b| nl.len() < b.0) {
                        best = Some((nl.len(), x, p1, p2, nl, gaps));
                    }
                }
            }
        }
        let Some((_, x, p1, p2, nl, gaps)) = best else {
            return Err(Error::BadIncidence(format!("no crossing can be attached after {} steps", steps.len())));
        };
        used[x] = true;
        labels = nl;
        steps.push(Attach { crossing: x, join: Some((p1, p2)), curls: gaps });
    }
    Ok((steps, labels))
}

/// Greedy order in which [`kh`] attaches crossings: each step takes the
/// crossing whose attachment leaves the smallest boundary (lowest index on
/// ties). Components are visited in order of their lowest crossing.
pub fn crossing_order(t: &TangleDiagram) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for comp in t.components() {
        let (steps, _) = plan_component(t, &comp, None)?;
        out.extend(steps.into_iter().map(|s| s.crossing));
    }
    Ok(out)
}

fn polarity_of(tails: &[bool]) -> Polarity {
    if tails.first().copied().unwrap_or(true) {
        Polarity::EvenTails
    } else {
        Polarity::EvenHeads
    }
}

fn remove_gap<T>(v: &mut Vec<T>, gap: usize) {
    if gap + 1 < v.len() {
        v.drain(gap..gap + 2);
    } else {
        v.pop();
        v.remove(0);
    }
}

/// Build one component; returns the reduced complex and its boundary labels.
fn build_component<R: Ring>(
    t: &TangleDiagram,
    signs: &[CrossingSign],
    steps: &[Attach],
    opts: &AssemblyOptions,
) -> Result<(ChainComplex<R>, Vec<i64>)> {
    let mut c: Option<ChainComplex<R>> = None;
    let mut labels: Vec<i64> = Vec::new();
    let mut tails: Vec<bool> = Vec::new();
    for st in steps {
        let x = st.crossing;
        let lx = t.crossings[x];
        match (st.join, c.take()) {
            (None, _) => {
                c = Some(crossing_complex_with(signs[x], Polarity::EvenTails));
                labels = lx.to_vec();
                tails = vec![true, false, true, false];
            }
            (Some((p1, p2)), Some(cur)) => {
                let flip = tails[p1] == (p2 % 2 == 0);
                if flip && opts.require_alternating {
                    return Err(Error::NotAlternating(lx[p2]));
                }
                let pol = if flip { Polarity::EvenHeads } else { Polarity::EvenTails };
                let xc = crossing_complex_with::<R>(signs[x], pol);
                let op = BasicOperator::join(cur.arity, p1, 4, p2);
                let joined = apply_basic_to_complexes(&op, &[&cur, &xc])?;
                let xt = |k: usize| (k % 2 == 0) != flip;
                let mut nl = labels[..p1].to_vec();
                let mut nt = tails[..p1].to_vec();
                for k in 1..4 {
                    nl.push(lx[(p2 + k) % 4]);
                    nt.push(xt((p2 + k) % 4));
                }
                nl.extend_from_slice(&labels[p1 + 1..]);
                nt.extend_from_slice(&tails[p1 + 1..]);
                labels = nl;
                tails = nt;
                c = Some(joined);
            }
            (Some(_), None) => unreachable!("first step has no join"),
        }
        let mut cur = c.take().unwrap();
        for &gap in &st.curls {
            let op = BasicOperator::curl(labels.len(), gap, polarity_of(&tails));
            cur = apply_basic_to_complexes(&op, &[&cur])?;
            remove_gap(&mut labels, gap);
            remove_gap(&mut tails, gap);
        }
        c = Some(reduce(cur, opts)?);
    }
    Ok((c.expect("nonempty component"), labels))
}

fn unknot<R: Ring>() -> ChainComplex<R> {
    ChainComplex::single(0, GradedSmoothing::new(OrientedSmoothing::loops_only(1, 0), 0))
}

/// The reduced Khovanov complex of a diagram.
pub fn kh<R: Ring>(t: &TangleDiagram) -> Result<ChainComplex<R>> {
    kh_with(t, &AssemblyOptions::default())
}

pub fn kh_with<R: Ring>(t: &TangleDiagram, opts: &AssemblyOptions) -> Result<ChainComplex<R>> {
    t.validate()?;
    let signs = t.signs()?;
    let comps = t.components();
    let mut open_comps: Vec<usize> = Vec::new();
    let mut built: Vec<(ChainComplex<R>, Vec<i64>)> = Vec::new();
    for (k, comp) in comps.iter().enumerate() {
        let order: Option<Vec<usize>> = opts
            .order
            .as_ref()
            .map(|o| o.iter().copied().filter(|x| comp.contains(x)).collect());
        let (steps, final_labels) = plan_component(t, comp, order.as_deref())?;
        let mut left = final_labels.clone();
        left.sort_unstable();
        let mut open: Vec<i64> = comp.iter().flat_map(|&x| t.crossings[x]).filter(|e| t.open_edges.contains(e)).collect();
        open.sort_unstable();
        if left != open {
            return Err(Error::NonPlanar(left.into_iter().filter(|e| !open.contains(e)).collect()));
        }
        let (c, labels) = build_component::<R>(t, &signs, &steps, opts)?;
        if !labels.is_empty() {
            open_comps.push(k);
        }
        built.push((c, labels));
    }
    if open_comps.len() > 1 {
        return Err(Error::Split);
    }
    let main = open_comps.first().copied().unwrap_or(0);
    let (mut acc, labels) = if built.is_empty() {
        if t.loops == 0 {
            return Ok(ChainComplex::single(0, GradedSmoothing::new(OrientedSmoothing::empty(), 0)));
        }
        (reduce(unknot::<R>(), opts)?, Vec::new())
    } else {
        let (c, l) = built[main].clone();
        (c, l)
    };
    for (k, (c, _)) in built.iter().enumerate() {
        if k != main {
            acc = reduce(disjoint_union(&acc, c)?, opts)?;
        }
    }
    let extra = if built.is_empty() { t.loops.saturating_sub(1) } else { t.loops };
    for _ in 0..extra {
        acc = reduce(disjoint_union(&acc, &unknot())?, opts)?;
    }
    if !labels.is_empty() && t.boundary_declared {
        let n = labels.len();
        if t.open_edges.len() != n {
            return Err(Error::BoundaryOrder);
        }
        let shift = (0..n)
            .find(|&s| (0..n).all(|i| labels[(i + s) % n] == t.open_edges[i]))
            .ok_or(Error::BoundaryOrder)?;
        if shift != 0 {
            acc = rotate_complex(&acc, shift)?;
        }
    }
    Ok(acc)
}

/// Boundary labels of the assembled complex, in order.
pub fn boundary_order(t: &TangleDiagram) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for comp in t.components() {
        let (_, labels) = plan_component(t, &comp, None)?;
        out.extend(labels);
    }
    Ok(out)
}
