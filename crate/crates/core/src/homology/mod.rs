//! Bigraded homology of fully reduced link complexes.

pub mod snf;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::ring::{GroundRing, Ring};

pub use snf::{prime_power_parts, SparseMatrix};

/// Homology in one bidegree: free rank and torsion summands (prime powers).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyEntry {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl HomologyEntry {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

/// Nonzero homology groups indexed by `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub ring: GroundRing,
    pub entries: BTreeMap<(i32, i32), HomologyEntry>,
}

/// Matrices of a complex of free modules. `maps[k]` goes from degree
/// `min_degree + k` to the next; entries keyed `(row, col)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarComplex<R> {
    pub min_degree: i32,
    pub dims: Vec<usize>,
    pub maps: Vec<SparseMatrix<R>>,
}

impl<R: Ring> ScalarComplex<R> {
    pub fn new(min_degree: i32, dims: Vec<usize>) -> Self {
        let maps = (0..dims.len())
            .map(|k| SparseMatrix::zero(dims.get(k + 1).copied().unwrap_or(0), dims[k]))
            .collect();
        ScalarComplex { min_degree, dims, maps }
    }

    /// `d∘d = 0`.
    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| w[0].then(&w[1]).is_zero())
    }
}

/// Split a reduced complex over the empty boundary into scalar complexes,
/// one per quantum degree.
pub fn scalar_complexes<R: Ring>(c: &ChainComplex<R>) -> Result<BTreeMap<i32, ScalarComplex<R>>> {
    let mut index: Vec<Vec<(i32, usize)>> = Vec::new();
    let mut out: BTreeMap<i32, ScalarComplex<R>> = BTreeMap::new();
    let n = c.objects.len();
    let mut counts: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for o in &c.objects {
        if o.iter().any(|g| g.smoothing.n_curves() != 0) {
            return Err(Error::NotFullyReduced);
        }
    }
    for (k, o) in c.objects.iter().enumerate() {
        let mut idx = Vec::with_capacity(o.len());
        for g in o {
            let v = counts.entry(g.q_shift).or_insert_with(|| vec![0; n]);
            idx.push((g.q_shift, v[k]));
            v[k] += 1;
        }
        index.push(idx);
    }
    for (&j, dims) in &counts {
        out.insert(j, ScalarComplex::new(c.min_degree, dims.clone()));
    }
    for (k, d) in c.diffs.iter().enumerate() {
        for (&(row, col), l) in d {
            let (js, cs) = index[k][col];
            let (jt, rt) = index[k + 1][row];
            let x = l.scalar().ok_or(Error::NotFullyReduced)?;
            if x.is_zero() {
                continue;
            }
            if js != jt {
                return Err(Error::InhomogeneousDifferential { degree: c.min_degree + k as i32, row, col });
            }
            out.get_mut(&js).unwrap().maps[k].add(rt, cs, x);
        }
    }
    Ok(out)
}

/// Homology of a scalar complex, degree by degree.
pub fn smith_homology<R: Ring>(sc: &ScalarComplex<R>) -> Vec<(i32, HomologyEntry)> {
    let factors: Vec<Vec<R>> = sc.maps.iter().map(|m| m.invariant_factors()).collect();
    let mut out = Vec::new();
    for (k, &dim) in sc.dims.iter().enumerate() {
        let rank_out = factors[k].len();
        let (rank_in, torsion) = if k == 0 {
            (0, Vec::new())
        } else {
            let t: Vec<u64> = factors[k - 1]
                .iter()
                .filter(|x| !x.is_unit())
                .flat_map(|x| prime_power_parts(&x.norm()))
                .collect();
            (factors[k - 1].len(), t)
        };
        let mut torsion = torsion;
        torsion.sort_unstable();
        let e = HomologyEntry { betti: dim - rank_out - rank_in, torsion };
        if !e.is_zero() {
            out.push((sc.min_degree + k as i32, e));
        }
    }
    out
}

pub fn ground_ring_of<R: Ring>() -> GroundRing {
    if R::NAME == "q" {
        GroundRing::Rationals
    } else {
        GroundRing::Integers
    }
}

/// Homology table of a reduced complex over the empty boundary.
pub fn homology_table<R: Ring>(c: &ChainComplex<R>) -> Result<HomologyTable> {
    let mut entries = BTreeMap::new();
    for (j, sc) in scalar_complexes(c)? {
        for (i, e) in smith_homology(&sc) {
            entries.insert((i, j), e);
        }
    }
    Ok(HomologyTable { ring: ground_ring_of::<R>(), entries })
}

/// `K` such that every nonzero entry has `j − 2i ∈ {K − 1, K + 1}`. When
/// only one diagonal `j − 2i = a` is occupied, `K = a + 1` is reported.
/// An empty table gives `None`.
pub fn two_line_check(t: &HomologyTable) -> Option<i32> {
    let mut diag: Vec<i32> = t.entries.keys().map(|&(i, j)| j - 2 * i).collect();
    diag.sort_unstable();
    diag.dedup();
    match diag.as_slice() {
        [a] => Some(a + 1),
        [a, b] if b - a == 2 => Some(a + 1),
        _ => None,
    }
}

#[derive(Serialize)]
struct TableDoc<'a> {
    ring: &'a str,
    /// Rows as printed: `j` descending.
    rows: Vec<RowDoc>,
}

#[derive(Serialize)]
struct RowDoc {
    j: i32,
    cells: Vec<CellDoc>,
}

#[derive(Serialize)]
struct CellDoc {
    i: i32,
    betti: usize,
    torsion: Vec<u64>,
}

impl HomologyTable {
    pub fn get(&self, i: i32, j: i32) -> Option<&HomologyEntry> {
        self.entries.get(&(i, j))
    }

    pub fn betti(&self, i: i32, j: i32) -> usize {
        self.get(i, j).map_or(0, |e| e.betti)
    }

    /// Tables agree as groups (ring labels ignored).
    pub fn same_groups(&self, other: &HomologyTable) -> bool {
        self.entries == other.entries
    }

    /// Rational ranks only.
    pub fn rational(&self) -> HomologyTable {
        HomologyTable {
            ring: GroundRing::Rationals,
            entries: self
                .entries
                .iter()
                .filter(|(_, e)| e.betti > 0)
                .map(|(&k, e)| (k, HomologyEntry { betti: e.betti, torsion: Vec::new() }))
                .collect(),
        }
    }

    /// `Σ (−1)^i q^j betti(i, j)` as a map `j → coefficient`.
    pub fn euler_characteristic(&self) -> BTreeMap<i32, i64> {
        let mut out = BTreeMap::new();
        for (&(i, j), e) in &self.entries {
            let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            *out.entry(j).or_insert(0) += s * e.betti as i64;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut js: Vec<i32> = self.entries.keys().map(|k| k.1).collect();
        js.sort_unstable_by(|a, b| b.cmp(a));
        js.dedup();
        let rows = js
            .into_iter()
            .map(|j| RowDoc {
                j,
                cells: self
                    .entries
                    .iter()
                    .filter(|(k, _)| k.1 == j)
                    .map(|(&(i, _), e)| CellDoc { i, betti: e.betti, torsion: e.torsion.clone() })
                    .collect(),
            })
            .collect();
        serde_json::to_value(TableDoc { ring: self.ring.name(), rows }).expect("serializable")
    }

    /// Aligned text table: rows `j` descending, columns `i` ascending.
    /// Cells read `betti` with torsion appended as `+Z/n`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.entries.is_empty() {
            out.push_str("(zero)\n");
            return out;
        }
        let imin = self.entries.keys().map(|k| k.0).min().unwrap();
        let imax = self.entries.keys().map(|k| k.0).max().unwrap();
        let jmin = self.entries.keys().map(|k| k.1).min().unwrap();
        let jmax = self.entries.keys().map(|k| k.1).max().unwrap();
        let cell = |i: i32, j: i32| -> String {
            match self.get(i, j) {
                None => String::new(),
                Some(e) => {
                    let mut s = if e.betti > 0 || e.torsion.is_empty() { e.betti.to_string() } else { String::new() };
                    for t in &e.torsion {
                        if !s.is_empty() {
                            s.push('+');
                        }
                        let _ = write!(s, "Z/{t}");
                    }
                    s
                }
            }
        };
        let js: Vec<i32> = (jmin..=jmax).rev().filter(|j| (j - jmin) % 2 == 0 || self.entries.keys().any(|k| k.1 == *j)).collect();
        let mut width = 3;
        for i in imin..=imax {
            width = width.max(i.to_string().len());
            for &j in &js {
                width = width.max(cell(i, j).len());
            }
        }
        let jw = js.iter().map(|j| j.to_string().len()).max().unwrap().max(3);
        let _ = write!(out, "{:>jw$} |", "j\\i");
        for i in imin..=imax {
            let _ = write!(out, " {:>width$}", i);
        }
        out.push('\n');
        let _ = writeln!(out, "{}-+{}", "-".repeat(jw), "-".repeat((width + 1) * (imax - imin + 1) as usize));
        for &j in &js {
            let _ = write!(out, "{:>jw$} |", j);
            for i in imin..=imax {
                let c = cell(i, j);
                let _ = write!(out, " {:>width$}", if c.is_empty() { "." } else { c.as_str() });
            }
            out.push('\n');
        }
        out
    }
}
