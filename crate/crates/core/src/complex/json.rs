use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ChainComplex;
use crate::cobcore::{Cob, CobLin, GradedSmoothing, OrientedSmoothing};
use crate::error::{Error, Result};
use crate::ring::Ring;

pub const COMPLEX_FORMAT_VERSION: u32 = 1;

/// Serialized form of a [`ChainComplex`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub format: String,
    pub version: u32,
    pub ring: String,
    pub arity: usize,
    pub objects: Vec<ObjectDoc>,
    pub differentials: Vec<CellDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectDoc {
    pub degree: i32,
    pub index: usize,
    /// `(tail, head)` pairs.
    pub arcs: Vec<[usize; 2]>,
    /// Loop orientations, `+1` or `-1`.
    pub loops: Vec<i8>,
    pub q_shift: i32,
    /// Shifted rotation number `R(σ) + q`.
    pub rotation: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellDoc {
    pub degree: i32,
    pub source: usize,
    pub target: usize,
    pub terms: Vec<TermDoc>,
}

/// One cobordism term: a component label per curve (source curves, then
/// target curves) and the labels of dotted components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub components: Vec<usize>,
    pub dots: Vec<usize>,
    pub coefficient: String,
}

fn smoothing_doc(s: &OrientedSmoothing) -> (Vec<[usize; 2]>, Vec<i8>) {
    let arcs = s.arcs().map(|(t, h)| [t, h]).collect();
    let loops = (s.n_arcs()..s.n_curves()).map(|c| s.loop_sign(c)).collect();
    (arcs, loops)
}

impl ComplexDoc {
    pub fn from_complex<R: Ring>(c: &ChainComplex<R>) -> Self {
        let mut objects = Vec::new();
        for (k, o) in c.objects.iter().enumerate() {
            for (index, g) in o.iter().enumerate() {
                let (arcs, loops) = smoothing_doc(&g.smoothing);
                objects.push(ObjectDoc {
                    degree: c.min_degree + k as i32,
                    index,
                    arcs,
                    loops,
                    q_shift: g.q_shift,
                    rotation: g.shifted_rotation_number(),
                });
            }
        }
        let differentials = c
            .all_cells()
            .map(|(degree, row, col, l)| CellDoc {
                degree,
                source: col,
                target: row,
                terms: l
                    .terms()
                    .map(|(cob, r)| TermDoc {
                        components: cob.labels().iter().map(|&x| x as usize).collect(),
                        dots: (0..cob.n_comps()).filter(|&x| cob.is_dotted(x)).collect(),
                        coefficient: r.to_string(),
                    })
                    .collect(),
            })
            .collect();
        ComplexDoc {
            format: "kh-complex".into(),
            version: COMPLEX_FORMAT_VERSION,
            ring: R::NAME.into(),
            arity: c.arity,
            objects,
            differentials,
        }
    }

    /// Rebuild and validate the complex.
    pub fn to_complex<R: Ring>(&self) -> Result<ChainComplex<R>> {
        if self.version != COMPLEX_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported complex version {}", self.version)));
        }
        let mut by_degree: BTreeMap<i32, BTreeMap<usize, GradedSmoothing>> = BTreeMap::new();
        for o in &self.objects {
            let arcs: Vec<(usize, usize)> = o.arcs.iter().map(|a| (a[0], a[1])).collect();
            let s = OrientedSmoothing::new(&arcs, &o.loops)?;
            if s.boundary_count() != self.arity {
                return Err(Error::Parse(format!("object arity {} differs from {}", s.boundary_count(), self.arity)));
            }
            let g = GradedSmoothing { smoothing: Arc::new(s), q_shift: o.q_shift };
            if by_degree.entry(o.degree).or_default().insert(o.index, g).is_some() {
                return Err(Error::Parse(format!("duplicate object {} in degree {}", o.index, o.degree)));
            }
        }
        let Some((&lo, _)) = by_degree.iter().next() else {
            return Ok(ChainComplex::empty(self.arity));
        };
        let hi = *by_degree.keys().last().unwrap();
        let mut objects = Vec::new();
        for r in lo..=hi {
            let m = by_degree.remove(&r).unwrap_or_default();
            if m.keys().enumerate().any(|(i, &k)| i != k) {
                return Err(Error::Parse(format!("object indices in degree {r} are not 0..n")));
            }
            objects.push(m.into_values().collect::<Vec<_>>());
        }
        let mut c = ChainComplex::from_parts(self.arity, lo, objects, Vec::new());
        for cell in &self.differentials {
            let (src, tgt) = (c.object(cell.degree).get(cell.source), c.object(cell.degree + 1).get(cell.target));
            let (Some(src), Some(tgt)) = (src, tgt) else {
                return Err(Error::Parse(format!("cell out of range in degree {}", cell.degree)));
            };
            let mut l = CobLin::zero(src.smoothing.clone(), tgt.smoothing.clone());
            for t in &cell.terms {
                let cob = Cob::from_labels(&src.smoothing, &tgt.smoothing, &t.components, |x| t.dots.contains(&x))
                    .ok_or_else(|| Error::Parse("term is not a reduced cobordism".into()))?;
                let coef = R::parse_exact(&t.coefficient).ok_or_else(|| Error::Parse(format!("bad coefficient {:?}", t.coefficient)))?;
                l.add_term(cob, coef);
            }
            let k = (cell.degree - lo) as usize;
            c.diffs[k].insert((cell.target, cell.source), l);
        }
        c.validate()?;
        Ok(c)
    }

    pub fn ring(&self) -> &str {
        &self.ring
    }
}
