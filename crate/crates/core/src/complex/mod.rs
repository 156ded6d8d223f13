//! Chain complexes of formal direct sums of smoothings, their reduction by
//! delooping and Gaussian elimination, and perturbed double complexes.

mod json;
mod pdc;
mod work;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cobcore::{cells_compose, Cells, CobLin, GradedSmoothing, MatMorphism, MatObject, OrientedSmoothing};
use crate::error::{Error, Result};
use crate::ring::Ring;

pub use json::{ComplexDoc, COMPLEX_FORMAT_VERSION};
pub use pdc::PerturbedDoubleComplex;
pub(crate) use work::Work;

/// A bounded chain complex. `objects[i]` sits in homological degree
/// `min_degree + i` and `diffs[i]` maps it to `objects[i + 1]`.
#[derive(Clone, PartialEq)]
pub struct ChainComplex<R> {
    pub arity: usize,
    pub min_degree: i32,
    pub objects: Vec<MatObject>,
    pub diffs: Vec<Cells<R>>,
}

/// Counters from a run of [`dg_reduce`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReductionReport {
    pub deloop_count: usize,
    pub elimination_count: usize,
}

impl<R: Ring> ChainComplex<R> {
    pub fn empty(arity: usize) -> Self {
        ChainComplex { arity, min_degree: 0, objects: Vec::new(), diffs: Vec::new() }
    }

    /// One object in degree `r`, zero differential.
    pub fn single(r: i32, obj: GradedSmoothing) -> Self {
        ChainComplex {
            arity: obj.smoothing.boundary_count(),
            min_degree: r,
            objects: vec![vec![obj]],
            diffs: vec![BTreeMap::new()],
        }
    }

    /// Build from parts; `diffs` may be shorter than `objects` (missing
    /// differentials are zero).
    pub fn from_parts(arity: usize, min_degree: i32, objects: Vec<MatObject>, mut diffs: Vec<Cells<R>>) -> Self {
        diffs.resize_with(objects.len(), BTreeMap::new);
        ChainComplex { arity, min_degree, objects, diffs }
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.objects.len() as i32 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> {
        self.min_degree..self.min_degree + self.objects.len() as i32
    }

    pub fn object(&self, r: i32) -> &[GradedSmoothing] {
        let i = r - self.min_degree;
        if i < 0 || i as usize >= self.objects.len() {
            &[]
        } else {
            &self.objects[i as usize]
        }
    }

    pub fn cells(&self, r: i32) -> Option<&Cells<R>> {
        let i = r - self.min_degree;
        if i < 0 {
            return None;
        }
        self.diffs.get(i as usize)
    }

    /// The differential leaving degree `r`.
    pub fn differential(&self, r: i32) -> MatMorphism<R> {
        MatMorphism {
            source: self.object(r).to_vec(),
            target: self.object(r + 1).to_vec(),
            cells: self.cells(r).cloned().unwrap_or_default(),
        }
    }

    pub fn n_objects(&self) -> usize {
        self.objects.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.n_objects() == 0
    }

    /// All `(degree, object)` pairs in order.
    pub fn graded_objects(&self) -> impl Iterator<Item = (i32, &GradedSmoothing)> {
        self.objects
            .iter()
            .enumerate()
            .flat_map(move |(i, o)| o.iter().map(move |g| (self.min_degree + i as i32, g)))
    }

    /// Sorted multiset of `(degree, object)`, the comparison used for reduced forms.
    pub fn object_multiset(&self) -> Vec<(i32, GradedSmoothing)> {
        let mut v: Vec<_> = self.graded_objects().map(|(r, g)| (r, g.clone())).collect();
        v.sort();
        v
    }

    pub fn total_loops(&self) -> usize {
        self.graded_objects().map(|(_, g)| g.smoothing.n_loops()).sum()
    }

    /// Shift every q-shift by `dq` and every degree by `dr`.
    pub fn shifted(&self, dr: i32, dq: i32) -> Self {
        let mut c = self.clone();
        c.min_degree += dr;
        for o in c.objects.iter_mut() {
            for g in o.iter_mut() {
                g.q_shift += dq;
            }
        }
        c
    }

    /// Drop empty degrees at either end.
    pub fn trimmed(mut self) -> Self {
        while self.objects.last().is_some_and(Vec::is_empty) {
            self.objects.pop();
            self.diffs.pop();
        }
        let lead = self.objects.iter().take_while(|o| o.is_empty()).count();
        if lead == self.objects.len() {
            return Self::empty(self.arity);
        }
        self.objects.drain(..lead);
        self.diffs.drain(..lead);
        self.min_degree += lead as i32;
        if let Some(last) = self.diffs.last_mut() {
            last.clear();
        }
        self
    }

    /// Check shapes, homogeneity of every cell, and `d∘d = 0`.
    pub fn validate(&self) -> Result<()> {
        if self.diffs.len() != self.objects.len() {
            return Err(Error::DimensionMismatch("one differential per degree expected".into()));
        }
        for (k, obj) in self.objects.iter().enumerate() {
            let r = self.min_degree + k as i32;
            for g in obj {
                if g.smoothing.boundary_count() != self.arity {
                    return Err(Error::DimensionMismatch(format!("object of arity {} in degree {r}", g.smoothing.boundary_count())));
                }
            }
            let next = self.object(r + 1);
            for (&(row, col), lin) in &self.diffs[k] {
                if row >= next.len() || col >= obj.len() {
                    return Err(Error::DimensionMismatch(format!("cell ({row},{col}) out of range in degree {r}")));
                }
                if *lin.bottom != *obj[col].smoothing || *lin.top != *next[row].smoothing {
                    return Err(Error::BoundaryMismatch);
                }
                let shift = next[row].q_shift as i64 - obj[col].q_shift as i64;
                if lin.degrees().iter().any(|&d| d + shift != 0) {
                    return Err(Error::InhomogeneousDifferential { degree: r, row, col });
                }
            }
        }
        for k in 0..self.objects.len().saturating_sub(1) {
            if !cells_compose(&self.diffs[k], &self.diffs[k + 1]).is_empty() {
                return Err(Error::NotAComplex(self.min_degree + k as i32));
            }
        }
        Ok(())
    }

    /// No loops and no invertible cells.
    pub fn is_reduced(&self) -> bool {
        self.total_loops() == 0 && find_invertible_entry(self).is_none()
    }

    /// Cells as `(degree, row, col, map)`.
    pub fn all_cells(&self) -> impl Iterator<Item = (i32, usize, usize, &CobLin<R>)> {
        self.diffs
            .iter()
            .enumerate()
            .flat_map(move |(k, d)| d.iter().map(move |(&(row, col), l)| (self.min_degree + k as i32, row, col, l)))
    }

    /// Apply `f` to every object smoothing and every cell, keeping shape.
    pub(crate) fn map_smoothings(
        &self,
        arity: usize,
        mut obj: impl FnMut(&OrientedSmoothing) -> Arc<OrientedSmoothing>,
        mut cell: impl FnMut(&CobLin<R>, Arc<OrientedSmoothing>, Arc<OrientedSmoothing>) -> CobLin<R>,
    ) -> Self {
        let objects: Vec<MatObject> = self
            .objects
            .iter()
            .map(|o| o.iter().map(|g| GradedSmoothing { smoothing: obj(&g.smoothing), q_shift: g.q_shift }).collect())
            .collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| {
                d.iter()
                    .map(|(&(row, col), l)| {
                        let b = objects[k][col].smoothing.clone();
                        let t = objects[k + 1][row].smoothing.clone();
                        ((row, col), cell(l, b, t))
                    })
                    .filter(|(_, l)| !l.is_zero())
                    .collect()
            })
            .collect();
        ChainComplex { arity, min_degree: self.min_degree, objects, diffs }
    }
}

impl<R: Ring> std::fmt::Debug for ChainComplex<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "complex (arity {}):", self.arity)?;
        for (k, o) in self.objects.iter().enumerate() {
            let r = self.min_degree + k as i32;
            let names: Vec<String> = o.iter().map(|g| g.to_string()).collect();
            writeln!(f, "  [{r}] {}", names.join(" ⊕ "))?;
            for (&(row, col), l) in &self.diffs[k] {
                writeln!(f, "      {col} -> {row}: {l:?}")?;
            }
        }
        Ok(())
    }
}

/// Replace loop `c` of object `entry` in degree `r` by `∅{+1} ⊕ ∅{−1}`.
pub fn deloop<R: Ring>(c: &ChainComplex<R>, r: i32, entry: usize, c_loop: usize) -> Result<ChainComplex<R>> {
    let g = c.object(r).get(entry).ok_or(Error::NoSuchLoop)?;
    if c_loop >= g.smoothing.n_loops() {
        return Err(Error::NoSuchLoop);
    }
    let mut w = Work::from_complex(c);
    let k = (r - c.min_degree) as usize;
    w.deloop(k, entry, g.smoothing.n_arcs() + c_loop);
    Ok(w.into_complex())
}

/// First cell `(degree, source, target)` that is a unit times the identity
/// of a loop-free smoothing with equal shifts.
pub fn find_invertible_entry<R: Ring>(c: &ChainComplex<R>) -> Option<(i32, usize, usize)> {
    for (r, row, col, l) in c.all_cells() {
        if l.unit_identity().is_some() && c.object(r)[col] == c.object(r + 1)[row] {
            return Some((r, col, row));
        }
    }
    None
}

/// Cancel the invertible cell `source → target` leaving degree `r`.
pub fn gaussian_eliminate<R: Ring>(c: &ChainComplex<R>, r: i32, source: usize, target: usize) -> Result<ChainComplex<R>> {
    let ok = c
        .cells(r)
        .and_then(|d| d.get(&(target, source)))
        .is_some_and(|l| l.unit_identity().is_some())
        && c.object(r)[source] == c.object(r + 1)[target];
    if !ok {
        return Err(Error::NotInvertible);
    }
    let mut w = Work::from_complex(c);
    w.eliminate((r - c.min_degree) as usize, source, target);
    Ok(w.into_complex())
}

/// Deloop and eliminate until the complex is reduced.
pub fn dg_reduce<R: Ring>(c: &ChainComplex<R>) -> Result<(ChainComplex<R>, ReductionReport)> {
    let mut w = Work::from_complex(c);
    w.reduce();
    let report = ReductionReport { deloop_count: w.deloops, elimination_count: w.eliminations };
    Ok((w.into_complex(), report))
}
