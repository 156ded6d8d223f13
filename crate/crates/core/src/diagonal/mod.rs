//! Diagonal and coherently diagonal complexes: on a reduced form every
//! object `σ{q}` in degree `r` has the same `2r − R(σ{q})`.

use serde::Serialize;

use crate::cobcore::{GradedSmoothing, Polarity};
use crate::complex::{dg_reduce, ChainComplex};
use crate::error::{Error, Result};
use crate::planar::{apply_to_complexes, enumerate_partial_closures, operator_rotation_number, OperatorWord};
use crate::ring::Ring;

#[cfg(test)]
mod tests;

/// Outcome of a diagonality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagonalityVerdict {
    /// All objects share `2r − R = C`. An empty complex is `Diagonal(0)`.
    Diagonal(i64),
    /// Two objects with different constants.
    NotDiagonal { witness: [(i32, GradedSmoothing); 2] },
    /// Only from [`diagonality_of_reduced`]: the input still has loops or
    /// invertible entries.
    NotReduced,
}

impl DiagonalityVerdict {
    pub fn constant(&self) -> Option<i64> {
        match self {
            DiagonalityVerdict::Diagonal(c) => Some(*c),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            DiagonalityVerdict::Diagonal(c) => serde_json::json!({"status": "diagonal", "constant": c}),
            DiagonalityVerdict::NotDiagonal { witness } => serde_json::json!({
                "status": "not_diagonal",
                "witness": witness.iter().map(|(r, g)| witness_json(*r, g)).collect::<Vec<_>>(),
            }),
            DiagonalityVerdict::NotReduced => serde_json::json!({"status": "not_reduced"}),
        }
    }
}

#[derive(Serialize)]
struct WitnessDoc {
    degree: i32,
    arcs: Vec<[usize; 2]>,
    positive_loops: u32,
    negative_loops: u32,
    q_shift: i32,
    shifted_rotation: i64,
    constant: i64,
}

fn witness_json(r: i32, g: &GradedSmoothing) -> serde_json::Value {
    serde_json::to_value(WitnessDoc {
        degree: r,
        arcs: g.smoothing.arcs().map(|(t, h)| [t, h]).collect(),
        positive_loops: g.smoothing.pos_loops(),
        negative_loops: g.smoothing.neg_loops(),
        q_shift: g.q_shift,
        shifted_rotation: g.shifted_rotation_number(),
        constant: 2 * r as i64 - g.shifted_rotation_number(),
    })
    .expect("plain data")
}

impl std::fmt::Display for DiagonalityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiagonalityVerdict::Diagonal(c) => write!(f, "diagonal C={c}"),
            DiagonalityVerdict::NotDiagonal { witness } => {
                write!(f, "not diagonal:")?;
                for (r, g) in witness {
                    let c = 2 * *r as i64 - g.shifted_rotation_number();
                    write!(f, " [r={r} {}{{{}}} 2r-R={c}]", g.smoothing, g.q_shift)?;
                }
                Ok(())
            }
            DiagonalityVerdict::NotReduced => write!(f, "not reduced"),
        }
    }
}

/// Check a complex that is already in reduced form.
pub fn diagonality_of_reduced<R: Ring>(c: &ChainComplex<R>) -> DiagonalityVerdict {
    if !c.is_reduced() {
        return DiagonalityVerdict::NotReduced;
    }
    let mut first: Option<(i32, &GradedSmoothing, i64)> = None;
    for (r, g) in c.graded_objects() {
        let k = 2 * r as i64 - g.shifted_rotation_number();
        match first {
            None => first = Some((r, g, k)),
            Some((r0, g0, k0)) if k0 != k => {
                return DiagonalityVerdict::NotDiagonal { witness: [(r0, g0.clone()), (r, g.clone())] };
            }
            Some(_) => {}
        }
    }
    DiagonalityVerdict::Diagonal(first.map_or(0, |f| f.2))
}

/// Reduce if needed, then check.
pub fn diagonality<R: Ring>(c: &ChainComplex<R>) -> Result<DiagonalityVerdict> {
    check_orientations(c)?;
    if c.is_reduced() {
        return Ok(diagonality_of_reduced(c));
    }
    Ok(diagonality_of_reduced(&dg_reduce(c)?.0))
}

fn check_orientations<R: Ring>(c: &ChainComplex<R>) -> Result<Option<Polarity>> {
    let mut pol = None;
    for (_, g) in c.graded_objects() {
        if c.arity == 0 {
            continue;
        }
        let p = g.smoothing.polarity().ok_or(Error::NotAlternating(0))?;
        if pol.is_some_and(|q| q != p) {
            return Err(Error::NotAlternating(0));
        }
        pol = Some(p);
    }
    Ok(pol)
}

/// Outcome of a coherence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoherenceVerdict {
    /// Diagonal with constant `C`, and every partial closure `w` is
    /// `(C − R_w)`-diagonal.
    Coherent(i64),
    /// The complex itself is not diagonal.
    NotDiagonal(DiagonalityVerdict),
    /// A partial closure breaks the prediction.
    Counterexample { word: OperatorWord, expected: i64, found: DiagonalityVerdict },
}

impl CoherenceVerdict {
    pub fn constant(&self) -> Option<i64> {
        match self {
            CoherenceVerdict::Coherent(c) => Some(*c),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CoherenceVerdict::Coherent(c) => serde_json::json!({"status": "coherent", "constant": c}),
            CoherenceVerdict::NotDiagonal(v) => serde_json::json!({"status": "not_diagonal", "base": v.to_json()}),
            CoherenceVerdict::Counterexample { word, expected, found } => serde_json::json!({
                "status": "not_coherent",
                "closure": word_json(word),
                "expected_constant": expected,
                "found": found.to_json(),
            }),
        }
    }
}

fn word_json(w: &OperatorWord) -> serde_json::Value {
    use crate::planar::{BasicOperator, WordStep};
    let steps: Vec<serde_json::Value> = w
        .steps
        .iter()
        .map(|s| match s {
            WordStep::Unary { op: BasicOperator::Unary { arity, gap, sign }, .. } => {
                serde_json::json!({"arity": arity, "gap": gap, "sign": format!("{sign:?}").to_lowercase()})
            }
            other => serde_json::json!(format!("{other:?}")),
        })
        .collect();
    serde_json::Value::Array(steps)
}

impl std::fmt::Display for CoherenceVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoherenceVerdict::Coherent(c) => write!(f, "coherently diagonal C={c}"),
            CoherenceVerdict::NotDiagonal(v) => write!(f, "{v}"),
            CoherenceVerdict::Counterexample { word, expected, found } => {
                write!(f, "diagonal but not coherent: closure {} expected C={expected}, got {found}", word_json(word))
            }
        }
    }
}

/// Check diagonality and then every partial closure with fewer than `k`
/// curls on a complex of `2k` points.
pub fn coherent_diagonality<R: Ring>(c: &ChainComplex<R>) -> Result<CoherenceVerdict> {
    let pol = check_orientations(c)?;
    let reduced = if c.is_reduced() { c.clone() } else { dg_reduce(c)?.0 };
    let base = diagonality_of_reduced(&reduced);
    let DiagonalityVerdict::Diagonal(k0) = base else {
        return Ok(CoherenceVerdict::NotDiagonal(base));
    };
    let Some(pol) = pol else { return Ok(CoherenceVerdict::Coherent(k0)) };
    let k = c.arity / 2;
    for w in enumerate_partial_closures(c.arity, pol, k.saturating_sub(1)) {
        if w.is_empty() {
            continue;
        }
        let expected = expected_constant(&[k0], &w);
        let out = apply_to_complexes(&w, &[reduced.clone()])?;
        let found = diagonality(&out)?;
        if found.constant() != Some(expected) {
            return Ok(CoherenceVerdict::Counterexample { word: w, expected, found });
        }
    }
    Ok(CoherenceVerdict::Coherent(k0))
}

/// `Σ C_i − R_w`.
pub fn expected_constant(parts: &[i64], word: &OperatorWord) -> i64 {
    parts.iter().sum::<i64>() - operator_rotation_number(word)
}

/// For complexes of single arcs: the `K` with `q = 2r + K` for every
/// object, if there is one.
pub fn single_line_constant<R: Ring>(c: &ChainComplex<R>) -> Option<i64> {
    let mut k = None;
    for (r, g) in c.graded_objects() {
        if g.smoothing.n_curves() != 1 || g.smoothing.n_arcs() != 1 {
            return None;
        }
        let x = g.q_shift as i64 - 2 * r as i64;
        if k.is_some_and(|y| y != x) {
            return None;
        }
        k = Some(x);
    }
    k
}
