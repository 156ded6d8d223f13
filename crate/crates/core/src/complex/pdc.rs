use std::collections::BTreeMap;

use super::{ChainComplex, Work};
use crate::cobcore::{cells_compose, Cells, MatObject};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// Objects `Ω_{p,q}` with maps `d^i: Ω_{p,q} → Ω_{p−i+1,q+i}`.
///
/// `maps[(p, q, i)]` holds the cells of `d^i` leaving `(p, q)`, keyed
/// `(target index, source index)`.
#[derive(Clone, PartialEq)]
pub struct PerturbedDoubleComplex<R> {
    pub arity: usize,
    pub objects: BTreeMap<(i32, i32), MatObject>,
    pub maps: BTreeMap<(i32, i32, u32), Cells<R>>,
}

pub fn target_of(p: i32, q: i32, i: u32) -> (i32, i32) {
    (p - i as i32 + 1, q + i as i32)
}

impl<R: Ring> PerturbedDoubleComplex<R> {
    pub fn new(arity: usize) -> Self {
        PerturbedDoubleComplex { arity, objects: BTreeMap::new(), maps: BTreeMap::new() }
    }

    pub fn object(&self, pos: (i32, i32)) -> &[crate::cobcore::GradedSmoothing] {
        self.objects.get(&pos).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn map(&self, p: i32, q: i32, i: u32) -> Option<&Cells<R>> {
        self.maps.get(&(p, q, i)).filter(|c| !c.is_empty())
    }

    pub fn max_type(&self) -> u32 {
        self.maps.iter().filter(|(_, c)| !c.is_empty()).map(|(k, _)| k.2).max().unwrap_or(0)
    }

    pub fn n_objects(&self) -> usize {
        self.objects.values().map(Vec::len).sum()
    }

    /// Objects of every position other than column `q`.
    pub fn objects_outside_column(&self, q: i32) -> Vec<((i32, i32), MatObject)> {
        self.objects.iter().filter(|(k, _)| k.1 != q).map(|(k, v)| (*k, v.clone())).collect()
    }

    /// `Σ_{i=0..k} d^i ∘ d^{k−i} = 0` for every source and every `k`.
    pub fn check_relations(&self) -> Result<()> {
        let top = 2 * self.max_type();
        for &(p, q) in self.objects.keys() {
            for k in 0..=top {
                let mut acc: BTreeMap<(i32, i32), Cells<R>> = BTreeMap::new();
                for i in 0..=k {
                    let j = k - i;
                    let Some(first) = self.map(p, q, j) else { continue };
                    let (pm, qm) = target_of(p, q, j);
                    let Some(second) = self.map(pm, qm, i) else { continue };
                    let comp = cells_compose(first, second);
                    let slot = acc.entry(target_of(pm, qm, i)).or_default();
                    for (key, l) in comp {
                        match slot.get_mut(&key) {
                            Some(e) => e.add_assign(&l),
                            None => {
                                slot.insert(key, l);
                            }
                        }
                    }
                }
                for cells in acc.values() {
                    if cells.values().any(|l| !l.is_zero()) {
                        return Err(Error::InvalidPdc(format!("relation of order {k} fails at ({p},{q})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Shapes and homogeneity, then the defining relations.
    pub fn validate(&self) -> Result<()> {
        for (&(p, q, i), cells) in &self.maps {
            let src = self.object((p, q));
            let tgt = self.object(target_of(p, q, i));
            for (&(row, col), l) in cells {
                if row >= tgt.len() || col >= src.len() {
                    return Err(Error::InvalidPdc(format!("cell ({row},{col}) of d^{i} at ({p},{q}) out of range")));
                }
                if *l.bottom != *src[col].smoothing || *l.top != *tgt[row].smoothing {
                    return Err(Error::BoundaryMismatch);
                }
                let shift = tgt[row].q_shift as i64 - src[col].q_shift as i64;
                if l.degrees().iter().any(|&d| d + shift != 0) {
                    return Err(Error::InvalidPdc(format!("inhomogeneous cell in d^{i} at ({p},{q})")));
                }
            }
        }
        self.check_relations()
    }

    /// Node graph over total degree `p + q`; positions within a degree are
    /// laid out by increasing `p`.
    pub(crate) fn to_work(&self) -> (Work<R>, BTreeMap<(i32, i32), (usize, usize)>) {
        let (lo, hi) = match (
            self.objects.keys().map(|k| k.0 + k.1).min(),
            self.objects.keys().map(|k| k.0 + k.1).max(),
        ) {
            (Some(a), Some(b)) => (a, b),
            _ => return (Work::new(self.arity, 0, 0), BTreeMap::new()),
        };
        let mut w = Work::new(self.arity, lo, (hi - lo + 1) as usize);
        let mut at = BTreeMap::new();
        for (&(p, q), o) in &self.objects {
            let level = (p + q - lo) as usize;
            let first = w.levels[level].len();
            for g in o {
                w.push(level, g.clone(), (p, q));
            }
            at.insert((p, q), (level, first));
        }
        for (&(p, q, i), cells) in &self.maps {
            let (ls, fs) = at[&(p, q)];
            let (_, ft) = at[&target_of(p, q, i)];
            for (&(row, col), l) in cells {
                w.set(ls, fs + col, ft + row, l.clone());
            }
        }
        (w, at)
    }

    pub(crate) fn from_work(w: Work<R>) -> Result<Self> {
        let mut out = Self::new(w.arity);
        let mut place: Vec<Vec<usize>> = Vec::new();
        for level in 0..w.levels.len() {
            let mut idx = vec![usize::MAX; w.levels[level].len()];
            for (i, n) in w.live(level) {
                let o = out.objects.entry(n.tag).or_default();
                idx[i] = o.len();
                o.push(n.obj.clone());
            }
            place.push(idx);
        }
        for level in 0..w.levels.len() {
            for (i, n) in w.live(level) {
                let (p, q) = n.tag;
                for (&t, l) in &n.out {
                    let (pt, qt) = w.node(level + 1, t).tag;
                    let ty = qt - q;
                    if ty < 0 || pt != p - ty + 1 {
                        return Err(Error::InvalidPdc(format!("arrow ({p},{q}) -> ({pt},{qt}) has no type")));
                    }
                    out.maps
                        .entry((p, q, ty as u32))
                        .or_default()
                        .insert((place[level + 1][t], place[level][i]), l.clone());
                }
            }
        }
        Ok(out)
    }

    /// `Tot^n = ⊕_{p+q=n} Ω_{p,q}`, `d = Σ d^i`.
    pub fn total_complex(&self) -> Result<ChainComplex<R>> {
        self.validate()?;
        Ok(self.to_work().0.into_complex())
    }

    /// Total complex without checking the relations.
    pub(crate) fn to_total_unchecked(&self) -> ChainComplex<R> {
        self.to_work().0.into_complex()
    }

    /// Gaussian elimination of the invertible `d⁰` cell from
    /// `Ω_{p,q}[source]` to `Ω_{p+1,q}[target]`, with every composite arrow
    /// `s → t` through it corrected by `−γ φ⁻¹ δ` (of type `i + j` when `γ`
    /// has type `i` and `δ` type `j`).
    pub fn vertical_gauss_eliminate(&self, q: i32, p: i32, source: usize, target: usize) -> Result<Self> {
        let cell = self.maps.get(&(p, q, 0)).and_then(|c| c.get(&(target, source)));
        let ok = cell.is_some_and(|l| l.unit_identity().is_some())
            && self.object((p, q)).get(source) == self.object((p + 1, q)).get(target);
        if !ok {
            return Err(Error::NotInvertible);
        }
        let (mut w, at) = self.to_work();
        let (ls, fs) = at[&(p, q)];
        let (_, ft) = at[&(p + 1, q)];
        w.eliminate(ls, fs + source, ft + target);
        Self::from_work(w)
    }

    /// Deloop loop `c_loop` of `Ω_{pos}[entry]`; incident arrows of every
    /// type are conjugated.
    pub fn deloop_in_pdc(&self, pos: (i32, i32), entry: usize, c_loop: usize) -> Result<Self> {
        let g = self.object(pos).get(entry).ok_or(Error::NoSuchLoop)?;
        if c_loop >= g.smoothing.n_loops() {
            return Err(Error::NoSuchLoop);
        }
        let curve = g.smoothing.n_arcs() + c_loop;
        let (mut w, at) = self.to_work();
        let (l, f) = at[&pos];
        w.deloop(l, f + entry, curve);
        Self::from_work(w)
    }

    /// First invertible `d⁰` cell in column `q` as `(p, source, target)`.
    pub fn find_vertical_invertible(&self, q: i32) -> Option<(i32, usize, usize)> {
        for (&(p, qq, i), cells) in &self.maps {
            if qq != q || i != 0 {
                continue;
            }
            for (&(row, col), l) in cells {
                if l.unit_identity().is_some() && self.object((p, q))[col] == self.object((p + 1, q))[row] {
                    return Some((p, col, row));
                }
            }
        }
        None
    }

    /// Reduce the vertical complex in column `q` (delooping and eliminating
    /// only inside it).
    pub fn reduce_column(&self, q: i32) -> Result<Self> {
        let mut cur = self.clone();
        loop {
            if let Some((p, s, t)) = cur.find_vertical_invertible(q) {
                cur = cur.vertical_gauss_eliminate(q, p, s, t)?;
                continue;
            }
            let looped = cur
                .objects
                .iter()
                .filter(|(k, _)| k.1 == q)
                .find_map(|(&k, o)| o.iter().position(|g| g.smoothing.n_loops() > 0).map(|e| (k, e)));
            match looped {
                Some((pos, e)) => cur = cur.deloop_in_pdc(pos, e, 0)?,
                None => return Ok(cur),
            }
        }
    }
}

impl<R: Ring> std::fmt::Debug for PerturbedDoubleComplex<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, o) in &self.objects {
            writeln!(f, "{k:?}: {}", o.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ⊕ "))?;
        }
        for (k, c) in &self.maps {
            writeln!(f, "d^{} from ({},{}): {} cells", k.2, k.0, k.1, c.len())?;
        }
        Ok(())
    }
}
