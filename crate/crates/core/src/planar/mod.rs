//! Planar arc diagrams as words in basic operators, acting on smoothings,
//! cobordisms and complexes.

mod trace;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::cobcore::{CobLin, GradedSmoothing, OrientedSmoothing, Polarity};
use crate::complex::{ChainComplex, PerturbedDoubleComplex};
use crate::error::{Error, Result};
use crate::ring::Ring;

pub(crate) use trace::Step;
use trace::{lin_through, trace, Traced};

/// Orientation of a curl.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurlSign {
    /// The curl runs counterclockwise, from a head at `gap` to the tail at `gap + 1`.
    Positive,
    Negative,
}

/// A basic planar diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasicOperator {
    /// One input of `arity` points; a curl joins points `gap` and `gap + 1`
    /// (mod `arity`).
    Unary { arity: usize, gap: usize, sign: CurlSign },
    /// Two inputs joined by one arc between `left_point` of the first and
    /// `right_point` of the second.
    Binary { left_arity: usize, right_arity: usize, left_point: usize, right_point: usize },
}

impl BasicOperator {
    /// The curl at `gap` compatible with boundary `polarity`.
    pub fn curl(arity: usize, gap: usize, polarity: Polarity) -> Self {
        let sign = if polarity.is_tail(gap) { CurlSign::Negative } else { CurlSign::Positive };
        BasicOperator::Unary { arity, gap, sign }
    }

    pub fn join(left_arity: usize, left_point: usize, right_arity: usize, right_point: usize) -> Self {
        BasicOperator::Binary { left_arity, right_arity, left_point, right_point }
    }

    pub fn n_inputs(&self) -> usize {
        match self {
            BasicOperator::Unary { .. } => 1,
            BasicOperator::Binary { .. } => 2,
        }
    }

    pub fn output_arity(&self) -> usize {
        match *self {
            BasicOperator::Unary { arity, .. } => arity - 2,
            BasicOperator::Binary { left_arity, right_arity, .. } => left_arity + right_arity - 2,
        }
    }

    /// Contribution to the rotation number of a word.
    pub fn rotation_number(&self) -> i64 {
        match self {
            BasicOperator::Unary { sign: CurlSign::Positive, .. } => 0,
            BasicOperator::Unary { sign: CurlSign::Negative, .. } => -1,
            BasicOperator::Binary { .. } => -1,
        }
    }

    fn check(&self, inputs: &[&OrientedSmoothing]) -> Result<Step> {
        match *self {
            BasicOperator::Unary { arity, gap, sign } => {
                let [s] = inputs else { return Err(Error::ArityMismatch("unary operator takes one input".into())) };
                if s.boundary_count() != arity || arity < 2 || gap >= arity {
                    return Err(Error::ArityMismatch(format!("curl for {arity} points on {}", s.boundary_count())));
                }
                let head = !s.is_tail(gap);
                if head != (sign == CurlSign::Positive) {
                    return Err(Error::OrientationMismatch(format!("{sign:?} curl at {gap}")));
                }
                Ok(Step::Curl(gap))
            }
            BasicOperator::Binary { left_arity, right_arity, left_point, right_point } => {
                let [a, b] = inputs else { return Err(Error::ArityMismatch("binary operator takes two inputs".into())) };
                if a.boundary_count() != left_arity || b.boundary_count() != right_arity || left_point >= left_arity || right_point >= right_arity {
                    return Err(Error::ArityMismatch(format!(
                        "join for {left_arity}+{right_arity} points on {}+{}",
                        a.boundary_count(),
                        b.boundary_count()
                    )));
                }
                Ok(Step::Join(left_point, right_point))
            }
        }
    }
}

/// One application inside an [`OperatorWord`]. Slots start as the word's
/// inputs; a binary step stores its result in `left` and removes `right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WordStep {
    Unary { slot: usize, op: BasicOperator },
    Binary { left: usize, right: usize, op: BasicOperator },
}

/// A composite planar diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorWord {
    pub inputs: Vec<usize>,
    pub steps: Vec<WordStep>,
}

impl OperatorWord {
    pub fn identity(arity: usize) -> Self {
        OperatorWord { inputs: vec![arity], steps: Vec::new() }
    }

    pub fn unary(op: BasicOperator) -> Self {
        match op {
            BasicOperator::Unary { arity, .. } => OperatorWord { inputs: vec![arity], steps: vec![WordStep::Unary { slot: 0, op }] },
            BasicOperator::Binary { left_arity, right_arity, .. } => OperatorWord {
                inputs: vec![left_arity, right_arity],
                steps: vec![WordStep::Binary { left: 0, right: 1, op }],
            },
        }
    }

    /// Append a step acting on the current slots.
    pub fn then(mut self, step: WordStep) -> Self {
        self.steps.push(step);
        self
    }

    /// Check that arities chain and the word has a single output.
    pub fn output_arity(&self) -> Result<usize> {
        let mut slots = self.inputs.clone();
        for st in &self.steps {
            match *st {
                WordStep::Unary { slot, op } => {
                    let BasicOperator::Unary { arity, .. } = op else {
                        return Err(Error::ArityMismatch("binary operator in a unary step".into()));
                    };
                    if slots.get(slot) != Some(&arity) {
                        return Err(Error::ArityMismatch(format!("slot {slot} is not of arity {arity}")));
                    }
                    slots[slot] = op.output_arity();
                }
                WordStep::Binary { left, right, op } => {
                    let BasicOperator::Binary { left_arity, right_arity, .. } = op else {
                        return Err(Error::ArityMismatch("unary operator in a binary step".into()));
                    };
                    if left == right || slots.get(left) != Some(&left_arity) || slots.get(right) != Some(&right_arity) {
                        return Err(Error::ArityMismatch(format!("slots {left},{right} do not fit {left_arity}+{right_arity}")));
                    }
                    slots[left] = op.output_arity();
                    slots.remove(right);
                }
            }
        }
        match slots.as_slice() {
            [a] => Ok(*a),
            _ => Err(Error::ArityMismatch(format!("word leaves {} outputs", slots.len()))),
        }
    }

    /// Number of unary steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// `R_w`: positive curls 0, negative curls −1, joins −1.
pub fn operator_rotation_number(w: &OperatorWord) -> i64 {
    w.steps
        .iter()
        .map(|s| match s {
            WordStep::Unary { op, .. } | WordStep::Binary { op, .. } => op.rotation_number(),
        })
        .sum()
}

fn run_word<T>(
    w: &OperatorWord,
    inputs: Vec<T>,
    mut unary: impl FnMut(&BasicOperator, T) -> Result<T>,
    mut binary: impl FnMut(&BasicOperator, T, T) -> Result<T>,
) -> Result<T> {
    if inputs.len() != w.inputs.len() {
        return Err(Error::ArityMismatch(format!("word takes {} inputs, got {}", w.inputs.len(), inputs.len())));
    }
    w.output_arity()?;
    let mut slots: Vec<Option<T>> = inputs.into_iter().map(Some).collect();
    for st in &w.steps {
        match *st {
            WordStep::Unary { slot, ref op } => {
                let x = slots[slot].take().unwrap();
                slots[slot] = Some(unary(op, x)?);
            }
            WordStep::Binary { left, right, ref op } => {
                let a = slots[left].take().unwrap();
                let b = slots[right].take().unwrap();
                slots[left] = Some(binary(op, a, b)?);
                slots.remove(right);
            }
        }
    }
    Ok(slots.pop().unwrap().unwrap())
}

pub fn apply_basic_to_smoothings(op: &BasicOperator, inputs: &[&OrientedSmoothing]) -> Result<OrientedSmoothing> {
    let step = op.check(inputs)?;
    Ok(trace(step, inputs)?.out)
}

pub fn apply_to_smoothings(w: &OperatorWord, inputs: &[OrientedSmoothing]) -> Result<OrientedSmoothing> {
    run_word(
        w,
        inputs.to_vec(),
        |op, s| apply_basic_to_smoothings(op, &[&s]),
        |op, a, b| apply_basic_to_smoothings(op, &[&a, &b]),
    )
}

/// Apply a single step to complexes, with the usual sign on the second
/// factor's differential.
pub(crate) fn apply_step<R: Ring>(step: Step, inputs: &[&ChainComplex<R>]) -> Result<ChainComplex<R>> {
    match inputs {
        [c] => Ok(unary_complex(step, c)?),
        [a, b] => tensor(step, a, b),
        _ => Err(Error::ArityMismatch("steps take one or two inputs".into())),
    }
}

fn unary_complex<R: Ring>(step: Step, c: &ChainComplex<R>) -> Result<ChainComplex<R>> {
    let mut traced: HashMap<Arc<OrientedSmoothing>, Traced> = HashMap::new();
    for (_, g) in c.graded_objects() {
        if !traced.contains_key(&g.smoothing) {
            traced.insert(g.smoothing.clone(), trace(step, &[&g.smoothing])?);
        }
    }
    let arity = match step {
        Step::Curl(_) => c.arity.checked_sub(2).ok_or_else(|| Error::ArityMismatch("curl on a closed complex".into()))?,
        _ => c.arity,
    };
    let outs: HashMap<Arc<OrientedSmoothing>, Arc<OrientedSmoothing>> =
        traced.iter().map(|(k, t)| (k.clone(), Arc::new(t.out.clone()))).collect();
    Ok(c.map_smoothings(
        arity,
        |s| outs[s].clone(),
        |l, _, _| lin_through(&[l], &traced[&l.bottom], &traced[&l.top]),
    ))
}

fn tensor<R: Ring>(step: Step, a: &ChainComplex<R>, b: &ChainComplex<R>) -> Result<ChainComplex<R>> {
    let pdc = tensor_pdc(step, a, b)?;
    Ok(pdc.to_total_unchecked())
}

/// The double complex `Ω_{p,q} = D(a^p, b^q)` with `d⁰ = D(d_a, 1)` and
/// `d¹ = (−1)^p D(1, d_b)`.
pub(crate) fn tensor_pdc<R: Ring>(step: Step, a: &ChainComplex<R>, b: &ChainComplex<R>) -> Result<PerturbedDoubleComplex<R>> {
    let arity = match step {
        Step::Join(..) => (a.arity + b.arity).checked_sub(2).unwrap_or(0),
        Step::Union => a.arity,
        Step::Curl(_) | Step::Rotate(_) => return Err(Error::ArityMismatch("unary step given two inputs".into())),
    };
    let mut pdc = PerturbedDoubleComplex::new(arity);
    let mut traced: HashMap<(usize, usize, usize, usize), Traced> = HashMap::new();
    for (ka, oa) in a.objects.iter().enumerate() {
        for (kb, ob) in b.objects.iter().enumerate() {
            if oa.is_empty() || ob.is_empty() {
                continue;
            }
            let pos = (a.min_degree + ka as i32, b.min_degree + kb as i32);
            let mut objs = Vec::with_capacity(oa.len() * ob.len());
            for (ia, ga) in oa.iter().enumerate() {
                for (ib, gb) in ob.iter().enumerate() {
                    let t = trace(step, &[&ga.smoothing, &gb.smoothing])?;
                    objs.push(GradedSmoothing { smoothing: Arc::new(t.out.clone()), q_shift: ga.q_shift + gb.q_shift });
                    traced.insert((ka, kb, ia, ib), t);
                }
            }
            pdc.objects.insert(pos, objs);
        }
    }
    let one = R::one();
    for (ka, da) in a.diffs.iter().enumerate() {
        let p = a.min_degree + ka as i32;
        for (kb, ob) in b.objects.iter().enumerate() {
            let q = b.min_degree + kb as i32;
            let mut cells = BTreeMap::new();
            let nb = ob.len();
            for (&(ra, ca), l) in da {
                for (ib, gb) in ob.iter().enumerate() {
                    let id = CobLin::identity(gb.smoothing.clone());
                    let m = lin_through(&[l, &id], &traced[&(ka, kb, ca, ib)], &traced[&(ka + 1, kb, ra, ib)]);
                    if !m.is_zero() {
                        cells.insert((ra * nb + ib, ca * nb + ib), m);
                    }
                }
            }
            if !cells.is_empty() {
                pdc.maps.insert((p, q, 0), cells);
            }
        }
    }
    for (ka, oa) in a.objects.iter().enumerate() {
        let p = a.min_degree + ka as i32;
        let sign = if p.rem_euclid(2) == 0 { one.clone() } else { -one.clone() };
        for (kb, db) in b.diffs.iter().enumerate() {
            let q = b.min_degree + kb as i32;
            let nb_src = b.objects[kb].len();
            let nb_tgt = b.objects.get(kb + 1).map_or(0, Vec::len);
            let mut cells = BTreeMap::new();
            for (&(rb, cb), l) in db {
                for (ia, ga) in oa.iter().enumerate() {
                    let id = CobLin::identity(ga.smoothing.clone());
                    let m = lin_through(&[&id, l], &traced[&(ka, kb, ia, cb)], &traced[&(ka, kb + 1, ia, rb)]).scaled(&sign);
                    if !m.is_zero() {
                        cells.insert((ia * nb_tgt + rb, ia * nb_src + cb), m);
                    }
                }
            }
            if !cells.is_empty() {
                pdc.maps.insert((p, q, 1), cells);
            }
        }
    }
    Ok(pdc)
}

pub fn apply_basic_to_complexes<R: Ring>(op: &BasicOperator, inputs: &[&ChainComplex<R>]) -> Result<ChainComplex<R>> {
    let step = check_complexes(op, inputs)?;
    apply_step(step, inputs)
}

fn check_complexes<R: Ring>(op: &BasicOperator, inputs: &[&ChainComplex<R>]) -> Result<Step> {
    match (*op, inputs) {
        (BasicOperator::Unary { arity, gap, .. }, [c]) => {
            if c.arity != arity || arity < 2 || gap >= arity {
                return Err(Error::ArityMismatch(format!("curl for {arity} points on a complex of arity {}", c.arity)));
            }
            for (_, g) in c.graded_objects() {
                op.check(&[&g.smoothing])?;
            }
            Ok(Step::Curl(gap))
        }
        (BasicOperator::Binary { left_arity, right_arity, left_point, right_point }, [a, b]) => {
            if a.arity != left_arity || b.arity != right_arity || left_point >= left_arity || right_point >= right_arity {
                return Err(Error::ArityMismatch(format!("join for {left_arity}+{right_arity} on {}+{}", a.arity, b.arity)));
            }
            Ok(Step::Join(left_point, right_point))
        }
        _ => Err(Error::ArityMismatch("operator and inputs disagree".into())),
    }
}

pub fn apply_to_complexes<R: Ring>(w: &OperatorWord, inputs: &[ChainComplex<R>]) -> Result<ChainComplex<R>> {
    run_word(
        w,
        inputs.to_vec(),
        |op, c| apply_basic_to_complexes(op, &[&c]),
        |op, a, b| apply_basic_to_complexes(op, &[&a, &b]),
    )
}

/// Renumber the boundary of every object so that old point `shift`
/// becomes point 0.
pub fn rotate_complex<R: Ring>(c: &ChainComplex<R>, shift: usize) -> Result<ChainComplex<R>> {
    apply_step(Step::Rotate(shift), &[c])
}

/// The binary composite as a double complex, one column per degree of `b`.
pub fn apply_as_pdc<R: Ring>(op: &BasicOperator, a: &ChainComplex<R>, b: &ChainComplex<R>) -> Result<PerturbedDoubleComplex<R>> {
    let step = check_complexes(op, &[a, b])?;
    tensor_pdc(step, a, b)
}

/// Disjoint union with a boundary-free complex.
pub fn disjoint_union<R: Ring>(a: &ChainComplex<R>, closed: &ChainComplex<R>) -> Result<ChainComplex<R>> {
    if closed.arity != 0 {
        return Err(Error::ArityMismatch("second factor of a disjoint union must be closed".into()));
    }
    apply_step(Step::Union, &[a, closed])
}

/// All words of at most `max_len` curls on an input of `arity` points with
/// the given boundary polarity (each curl's sign is forced by orientation).
pub fn enumerate_partial_closures(arity: usize, polarity: Polarity, max_len: usize) -> Vec<OperatorWord> {
    let mut out = vec![OperatorWord::identity(arity)];
    let mut frontier = vec![(OperatorWord::identity(arity), arity, polarity)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, n, pol) in &frontier {
            if *n < 2 {
                continue;
            }
            for gap in 0..*n {
                let op = BasicOperator::curl(*n, gap, *pol);
                // survivors are renumbered from the lowest one, an odd shift
                // only for the curl across the basepoint
                let new_pol = if gap == n - 1 { pol.flipped() } else { *pol };
                let w2 = w.clone().then(WordStep::Unary { slot: 0, op });
                out.push(w2.clone());
                next.push((w2, n - 2, new_pol));
            }
        }
        frontier = next;
    }
    out
}
