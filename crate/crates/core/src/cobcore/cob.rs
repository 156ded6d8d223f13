use std::fmt;

use super::smoothing::OrientedSmoothing;

/// A dotted cobordism in reduced normal form.
///
/// Neck-cutting reduces every cobordism between two smoothings to a sum of
/// disjoint unions of (possibly dotted) discs, one disc per boundary circle.
/// The boundary circles are fixed by the bottom and top smoothings: each
/// loop is a circle, and the arcs of the bottom and top glue along the
/// vertical boundary into further circles. A reduced cobordism is thus a
/// labelling of curves by circle (bottom curves first, then top curves)
/// together with the set of dotted circles.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cob {
    n_bottom: u16,
    comp_of: Vec<u16>,
    dots: u128,
}

/// Canonical circle labelling of the boundary of cobordisms `bottom → top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circles {
    pub labels: Vec<u16>,
    pub count: usize,
    n_bottom: usize,
}

impl Circles {
    pub fn new(bottom: &OrientedSmoothing, top: &OrientedSmoothing) -> Circles {
        assert_eq!(bottom.boundary_count(), top.boundary_count(), "boundary mismatch");
        let nb = bottom.n_curves();
        let mut labels = vec![u16::MAX; nb + top.n_curves()];
        let mut count = 0u16;
        for c in 0..nb {
            if labels[c] != u16::MAX {
                continue;
            }
            if bottom.is_loop(c) {
                labels[c] = count;
            } else {
                let p = bottom.arc(c).0;
                let mut cur = p;
                loop {
                    labels[bottom.arc_at(cur)] = count;
                    let q = bottom.mate(cur);
                    labels[nb + top.arc_at(q)] = count;
                    cur = top.mate(q);
                    if cur == p {
                        break;
                    }
                }
            }
            count += 1;
        }
        for l in labels[nb..].iter_mut() {
            if *l == u16::MAX {
                *l = count;
                count += 1;
            }
        }
        assert!(count <= 128, "too many boundary circles");
        Circles { labels, count: count as usize, n_bottom: nb }
    }

    pub fn of_bottom(&self, c: usize) -> usize {
        self.labels[c] as usize
    }

    pub fn of_top(&self, c: usize) -> usize {
        self.labels[self.n_bottom + c] as usize
    }

    pub fn cob(&self, dots: u128) -> Cob {
        Cob { n_bottom: self.n_bottom as u16, comp_of: self.labels.clone(), dots }
    }
}

impl Cob {
    /// Undotted discs on every boundary circle.
    pub fn plain(bottom: &OrientedSmoothing, top: &OrientedSmoothing) -> Cob {
        Circles::new(bottom, top).cob(0)
    }

    /// Build from a circle labelling. Returns `None` unless `labels` is the
    /// circle partition of `bottom → top` (up to renaming).
    pub fn from_labels(
        bottom: &OrientedSmoothing,
        top: &OrientedSmoothing,
        labels: &[usize],
        dotted: impl Fn(usize) -> bool,
    ) -> Option<Cob> {
        let circles = Circles::new(bottom, top);
        if labels.len() != circles.labels.len() {
            return None;
        }
        let mut map: Vec<Option<usize>> = Vec::new();
        let mut dots = 0u128;
        for (i, &l) in labels.iter().enumerate() {
            if map.len() <= l {
                map.resize(l + 1, None);
            }
            let c = circles.labels[i] as usize;
            match map[l] {
                Some(prev) if prev != c => return None,
                Some(_) => {}
                None => {
                    if map.iter().any(|m| *m == Some(c)) {
                        return None;
                    }
                    map[l] = Some(c);
                    if dotted(l) {
                        dots |= 1 << c;
                    }
                }
            }
        }
        Some(circles.cob(dots))
    }

    pub fn n_bottom(&self) -> usize {
        self.n_bottom as usize
    }

    pub fn n_top(&self) -> usize {
        self.comp_of.len() - self.n_bottom as usize
    }

    pub fn n_comps(&self) -> usize {
        self.comp_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
    }

    pub fn comp_of_bottom(&self, c: usize) -> usize {
        self.comp_of[c] as usize
    }

    pub fn comp_of_top(&self, c: usize) -> usize {
        self.comp_of[self.n_bottom as usize + c] as usize
    }

    pub fn labels(&self) -> &[u16] {
        &self.comp_of
    }

    pub fn dot_mask(&self) -> u128 {
        self.dots
    }

    pub fn is_dotted(&self, comp: usize) -> bool {
        self.dots >> comp & 1 == 1
    }

    pub fn n_dots(&self) -> u32 {
        self.dots.count_ones()
    }

    /// The identity of a loop-free smoothing (undotted curtains).
    pub fn is_identity(&self) -> bool {
        let n = self.n_bottom as usize;
        self.dots == 0
            && self.comp_of.len() == 2 * n
            && (0..n).all(|i| self.comp_of[i] as usize == i && self.comp_of[n + i] as usize == i)
    }

    /// Quantum degree `χ − k − 2·dots` (each component is a disc).
    pub fn degree(&self, bottom: &OrientedSmoothing) -> i64 {
        self.n_comps() as i64 - (bottom.boundary_count() / 2) as i64 - 2 * self.n_dots() as i64
    }

    /// Remove the disc on a loop (its own circle) of the bottom (`top =
    /// false`) or top smoothing; returns whether that disc was dotted and the
    /// remaining cobordism, relabelled canonically.
    pub fn drop_loop(&self, top: bool, c: usize) -> (bool, Cob) {
        let at = if top { self.n_bottom as usize + c } else { c };
        let gone = self.comp_of[at] as usize;
        let mut map = vec![u16::MAX; self.n_comps()];
        let mut comp_of = Vec::with_capacity(self.comp_of.len() - 1);
        let mut dots = 0u128;
        let mut next = 0u16;
        for (i, &l) in self.comp_of.iter().enumerate() {
            if i == at {
                continue;
            }
            debug_assert_ne!(l as usize, gone, "loop is not its own circle");
            if map[l as usize] == u16::MAX {
                map[l as usize] = next;
                if self.is_dotted(l as usize) {
                    dots |= 1 << next;
                }
                next += 1;
            }
            comp_of.push(map[l as usize]);
        }
        let n_bottom = self.n_bottom - (!top) as u16;
        (self.is_dotted(gone), Cob { n_bottom, comp_of, dots })
    }

    /// Glue `self: σ → τ` below `other: τ → υ` and reduce. Each returned
    /// pair is a power of two and a reduced cobordism; the composite is the
    /// sum of `2^n · cob` over the list.
    pub fn compose(
        &self,
        other: &Cob,
        tau: &OrientedSmoothing,
        out: &Circles,
    ) -> Vec<(u32, Cob)> {
        let mut gl = Gluing::default();
        let off_f = gl.add_discs(self.n_comps(), self.dots);
        let off_g = gl.add_discs(other.n_comps(), other.dots);
        for c in 0..tau.n_curves() {
            let a = off_f + self.comp_of_top(c);
            let b = off_g + other.comp_of_bottom(c);
            gl.union(a, b);
            if !tau.is_loop(c) {
                gl.add_chi(a, -1);
            }
        }
        let nb = self.n_bottom as usize;
        let mut pieces = Vec::with_capacity(out.labels.len());
        pieces.extend((0..nb).map(|c| off_f + self.comp_of_bottom(c)));
        pieces.extend((0..other.n_top()).map(|c| off_g + other.comp_of_top(c)));
        gl.finish(out, &pieces)
    }
}

/// Union-find bookkeeping for gluing discs (plus connecting strips) into a
/// surface, then cutting it back into discs with the local relations.
#[derive(Default)]
pub(crate) struct Gluing {
    parent: Vec<usize>,
    chi: Vec<i64>,
    dots: Vec<u32>,
}

impl Gluing {
    /// Add `n` discs, dotted per `mask`; returns the id of the first.
    pub(crate) fn add_discs(&mut self, n: usize, mask: u128) -> usize {
        let off = self.parent.len();
        for i in 0..n {
            self.parent.push(off + i);
            self.chi.push(1);
            self.dots.push((mask >> i & 1) as u32);
        }
        off
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[rb] = ra;
            self.chi[ra] += self.chi[rb];
            self.dots[ra] += self.dots[rb];
        }
    }

    pub(crate) fn add_chi(&mut self, piece: usize, delta: i64) {
        let r = self.find(piece);
        self.chi[r] += delta;
    }

    /// Cut the glued surface into discs on the circles of `out`. Each outer
    /// curve `i` (bottom then top) lies on piece `pieces[i]`.
    ///
    /// A connected component with `b ≥ 1` boundary circles, genus `g` and `d`
    /// dots becomes `2^g · Δ^b(X^(g+d))` in `A = R[X]/X²`: zero when
    /// `g + d ≥ 2`, all circles dotted when `g + d = 1`, and the sum over
    /// circles `j` of "every circle but `j` dotted" when `g + d = 0`. Closed
    /// components evaluate to 1 (dotted sphere), 2 (torus) or 0.
    pub(crate) fn finish(&mut self, out: &Circles, pieces: &[usize]) -> Vec<(u32, Cob)> {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        let mut circles_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut root_of_circle = vec![usize::MAX; out.count];
        for (i, &p) in pieces.iter().enumerate() {
            let c = out.labels[i] as usize;
            if root_of_circle[c] == usize::MAX {
                let r = roots[p];
                root_of_circle[c] = r;
                circles_of[r].push(c);
            }
            debug_assert_eq!(root_of_circle[c], roots[p]);
        }
        let mut twos = 0u32;
        let mut fixed = 0u128;
        let mut choices: Vec<&[usize]> = Vec::new();
        for r in 0..n {
            if roots[r] != r {
                continue;
            }
            let b = circles_of[r].len() as i64;
            let twice_genus = 2 - self.chi[r] - b;
            debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0, "bad genus");
            let genus = (twice_genus / 2) as u32;
            let m = genus + self.dots[r];
            if b == 0 {
                match (genus, self.dots[r]) {
                    (0, 1) => {}
                    (1, 0) => twos += 1,
                    _ => return Vec::new(),
                }
                continue;
            }
            match m {
                0 => {
                    for &c in &circles_of[r] {
                        fixed |= 1 << c;
                    }
                    if b > 1 {
                        choices.push(&circles_of[r]);
                    } else {
                        fixed &= !(1 << circles_of[r][0]);
                    }
                }
                1 => {
                    twos += genus;
                    for &c in &circles_of[r] {
                        fixed |= 1 << c;
                    }
                }
                _ => return Vec::new(),
            }
        }
        let mut masks = vec![fixed];
        for ch in choices {
            let mut next = Vec::with_capacity(masks.len() * ch.len());
            for &m in &masks {
                for &c in ch {
                    next.push(m & !(1 << c));
                }
            }
            masks = next;
        }
        masks.into_iter().map(|m| (twos, out.cob(m))).collect()
    }
}

impl fmt::Debug for Cob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nb = self.n_bottom as usize;
        write!(f, "<")?;
        for (i, c) in self.comp_of.iter().enumerate() {
            if i == nb {
                write!(f, "|")?;
            } else if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
            if self.is_dotted(*c as usize) {
                write!(f, "*")?;
            }
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(arcs: &[(usize, usize)]) -> OrientedSmoothing {
        OrientedSmoothing::new(arcs, &[]).unwrap()
    }

    #[test]
    fn identity_components() {
        let s = sm(&[(0, 1)]);
        let id = Cob::plain(&s, &s);
        assert_eq!(id.n_comps(), 1);
        assert!(id.is_identity());
        let s = sm(&[(0, 1), (2, 3)]);
        let id = Cob::plain(&s, &s);
        assert_eq!(id.n_comps(), 2);
        assert!(id.is_identity());
        assert_eq!(id.degree(&s), 0);
    }

    #[test]
    fn saddle_degree() {
        let a = sm(&[(0, 1), (2, 3)]);
        let b = sm(&[(0, 3), (2, 1)]);
        let saddle = Cob::plain(&a, &b);
        assert_eq!(saddle.n_comps(), 1);
        assert_eq!(saddle.degree(&a), -1);
    }

    #[test]
    fn dotted_curtain_degree() {
        let s = sm(&[(0, 1)]);
        let c = Circles::new(&s, &s).cob(1);
        assert_eq!(c.degree(&s), -2);
    }

    #[test]
    fn labels_must_be_circles() {
        let a = sm(&[(0, 1), (2, 3)]);
        assert!(Cob::from_labels(&a, &a, &[5, 7, 5, 7], |l| l == 7).is_some());
        assert!(Cob::from_labels(&a, &a, &[0, 0, 0, 0], |_| false).is_none());
        assert!(Cob::from_labels(&a, &a, &[0, 1, 1, 0], |_| false).is_none());
    }

    #[test]
    fn saddle_twice_is_sum_of_dotted_curtains() {
        let a = sm(&[(0, 1), (2, 3)]);
        let b = sm(&[(0, 3), (2, 1)]);
        let s1 = Cob::plain(&a, &b);
        let s2 = Cob::plain(&b, &a);
        let out = Circles::new(&a, &a);
        let mut r = s1.compose(&s2, &b, &out);
        r.sort();
        assert_eq!(r, vec![(0, out.cob(1)), (0, out.cob(2))]);
    }
}
