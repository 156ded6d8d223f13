use std::collections::BTreeMap;

use super::lin::CobLin;
use super::smoothing::GradedSmoothing;
use crate::error::{Error, Result};
use crate::ring::Ring;

/// A formal direct sum of graded smoothings.
pub type MatObject = Vec<GradedSmoothing>;

/// Sparse matrix of cobordism combinations, keyed `(row, col)` with rows
/// indexing the target and columns the source.
pub type Cells<R> = BTreeMap<(usize, usize), CobLin<R>>;

/// A morphism between direct sums.
#[derive(Clone, PartialEq)]
pub struct MatMorphism<R> {
    pub source: MatObject,
    pub target: MatObject,
    pub cells: Cells<R>,
}

impl<R: Ring> MatMorphism<R> {
    pub fn zero(source: MatObject, target: MatObject) -> Self {
        MatMorphism { source, target, cells: BTreeMap::new() }
    }

    pub fn identity(obj: MatObject) -> Self {
        let cells = obj
            .iter()
            .enumerate()
            .map(|(i, g)| ((i, i), CobLin::identity(g.smoothing.clone())))
            .collect();
        MatMorphism { source: obj.clone(), target: obj, cells }
    }

    pub fn is_zero(&self) -> bool {
        self.cells.values().all(CobLin::is_zero)
    }

    /// `g ∘ f` for `f = self`.
    pub fn then(&self, g: &MatMorphism<R>) -> Result<MatMorphism<R>> {
        if self.target != g.source {
            return Err(Error::DimensionMismatch(format!(
                "composing through {} vs {} objects",
                self.target.len(),
                g.source.len()
            )));
        }
        Ok(MatMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            cells: cells_compose(&self.cells, &g.cells),
        })
    }

    /// Each nonzero entry has homogeneous degree `q_shift(target) − q_shift(source)`
    /// adjusted to zero overall. Returns the first offending cell.
    pub fn check_degree_zero(&self) -> Option<(usize, usize)> {
        for (&(r, c), l) in &self.cells {
            let shift = self.target[r].q_shift as i64 - self.source[c].q_shift as i64;
            if l.degrees().iter().any(|&d| d + shift != 0) {
                return Some((r, c));
            }
        }
        None
    }
}

/// Compose sparse cell maps, `g ∘ f`.
pub fn cells_compose<R: Ring>(f: &Cells<R>, g: &Cells<R>) -> Cells<R> {
    let mut by_row: BTreeMap<usize, Vec<(usize, &CobLin<R>)>> = BTreeMap::new();
    for (&(tgt, mid), l) in g {
        by_row.entry(mid).or_default().push((tgt, l));
    }
    let mut out: Cells<R> = BTreeMap::new();
    for (&(mid, src), a) in f {
        let Some(gs) = by_row.get(&mid) else { continue };
        for &(tgt, b) in gs {
            let p = a.then(b).expect("matching boundaries");
            if p.is_zero() {
                continue;
            }
            match out.get_mut(&(tgt, src)) {
                Some(e) => e.add_assign(&p),
                None => {
                    out.insert((tgt, src), p);
                }
            }
        }
    }
    out.retain(|_, l| !l.is_zero());
    out
}

pub fn mat_compose<R: Ring>(f: &MatMorphism<R>, g: &MatMorphism<R>) -> Result<MatMorphism<R>> {
    f.then(g)
}

impl<R: Ring> std::fmt::Debug for MatMorphism<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatMorphism")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("cells", &self.cells)
            .finish()
    }
}
