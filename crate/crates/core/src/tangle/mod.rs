//! Tangle and link diagrams in PD notation, their Khovanov complexes via
//! local assembly, and an independent cube-of-resolutions oracle.

mod assemble;
mod generate;
mod oracle;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cobcore::{Circles, CobLin, GradedSmoothing, OrientedSmoothing, Polarity};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::ring::Ring;

pub use assemble::{boundary_order, crossing_order, kh, kh_with, AssemblyOptions};
pub use generate::{random_alternating_tangle, GeneratedTangle};
pub use oracle::cube_oracle;

/// A planar diagram. Each crossing lists its four edges counterclockwise,
/// starting at the incoming under-strand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangleDiagram {
    pub crossings: Vec<[i64; 4]>,
    /// Boundary edges in counterclockwise order (empty for links).
    #[serde(default)]
    pub open_edges: Vec<i64>,
    /// Crossingless unknotted components.
    #[serde(default)]
    pub loops: usize,
    /// Whether `open_edges` gives the boundary order (otherwise it lists the
    /// edges in order of first appearance and any rotation is accepted).
    #[serde(skip, default = "yes")]
    pub boundary_declared: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CrossingSign {
    Positive,
    Negative,
}

/// Direction of every edge: `true` when the strand runs along the edge
/// toward the gravity arrow, i.e. into the under-crossing end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GravityAssignment {
    /// For each edge, the `(crossing, position)` its arrow points into; open
    /// edges whose inner end is an over-crossing point out of the tangle and
    /// map to `None`.
    pub into: BTreeMap<i64, Option<(usize, usize)>>,
    /// For each open edge in boundary order, whether the strand enters there.
    pub boundary_in: Vec<bool>,
}

impl TangleDiagram {
    pub fn link(crossings: Vec<[i64; 4]>) -> Self {
        TangleDiagram { crossings, open_edges: Vec::new(), loops: 0, boundary_declared: true }
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_closed(&self) -> bool {
        self.open_edges.is_empty()
    }

    /// `(crossing, position)` occurrences of every edge label.
    pub fn occurrences(&self) -> BTreeMap<i64, Vec<(usize, usize)>> {
        let mut m: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        for (x, c) in self.crossings.iter().enumerate() {
            for (p, &e) in c.iter().enumerate() {
                m.entry(e).or_default().push((x, p));
            }
        }
        m
    }

    /// Edge incidence checks.
    pub fn validate(&self) -> Result<()> {
        let occ = self.occurrences();
        let mut once = BTreeSet::new();
        for (&e, v) in &occ {
            if e <= 0 {
                return Err(Error::BadIncidence(format!("edge label {e} is not positive")));
            }
            match v.len() {
                1 => {
                    once.insert(e);
                }
                2 => {}
                n => return Err(Error::BadIncidence(format!("edge {e} appears {n} times"))),
            }
        }
        let declared: BTreeSet<i64> = self.open_edges.iter().copied().collect();
        if declared.len() != self.open_edges.len() {
            return Err(Error::BadIncidence("open edge listed twice".into()));
        }
        if declared != once {
            return Err(Error::BadIncidence(format!(
                "edges used once {:?} differ from open edges {:?}",
                once, declared
            )));
        }
        if self.open_edges.len() % 2 != 0 {
            return Err(Error::BadIncidence("odd number of open edges".into()));
        }
        Ok(())
    }

    /// Connected components of crossings (edges join crossings).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.crossings.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for v in self.occurrences().values() {
            if let [(a, _), (b, _)] = v.as_slice() {
                let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            comps.entry(r).or_default().push(x);
        }
        comps.into_values().collect()
    }

    /// Split: more than one connected piece (free loops count as pieces).
    pub fn is_split(&self) -> bool {
        self.components().len() + self.loops > 1
    }

    /// Which end `(crossing, position)` each edge flows into, found by
    /// following strands from the incoming under-strands. Strands without
    /// under-crossings fall back to the label heuristic (edges numbered
    /// consecutively along each component).
    pub fn edge_heads(&self) -> Result<BTreeMap<i64, Option<(usize, usize)>>> {
        let occ = self.occurrences();
        let mut head: BTreeMap<i64, Option<(usize, usize)>> = BTreeMap::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        let mut known_in = vec![[None::<bool>; 4]; self.crossings.len()];
        let set_in = |known: &mut Vec<[Option<bool>; 4]>, q: &mut VecDeque<(usize, usize)>, x: usize, p: usize, v: bool| -> Result<()> {
            match known[x][p] {
                Some(old) if old != v => Err(Error::BadIncidence(format!("inconsistent strand orientation at crossing {x}"))),
                Some(_) => Ok(()),
                None => {
                    known[x][p] = Some(v);
                    q.push_back((x, p));
                    Ok(())
                }
            }
        };
        for x in 0..self.crossings.len() {
            set_in(&mut known_in, &mut queue, x, 0, true)?;
        }
        let mut next_fallback = 0usize;
        loop {
            while let Some((x, p)) = queue.pop_front() {
                let inc = known_in[x][p].unwrap();
                let other = (p + 2) % 4;
                set_in(&mut known_in, &mut queue, x, other, !inc)?;
                let e = self.crossings[x][p];
                for &(y, r) in &occ[&e] {
                    if (y, r) != (x, p) {
                        set_in(&mut known_in, &mut queue, y, r, !inc)?;
                    }
                }
            }
            let pending = (next_fallback..self.crossings.len()).find(|&x| known_in[x][1].is_none());
            let Some(x) = pending else { break };
            next_fallback = x;
            let [_, j, _, l] = self.crossings[x];
            let l_incoming = j - l == 1 || l - j > 1;
            set_in(&mut known_in, &mut queue, x, 3, l_incoming)?;
        }
        for (&e, v) in &occ {
            let mut h = None;
            for &(x, p) in v {
                if known_in[x][p] == Some(true) {
                    h = Some((x, p));
                }
            }
            head.insert(e, h);
        }
        Ok(head)
    }

    /// Sign of every crossing: positive when the over-strand runs from the
    /// fourth edge to the second.
    pub fn signs(&self) -> Result<Vec<CrossingSign>> {
        let heads = self.edge_heads()?;
        Ok(self
            .crossings
            .iter()
            .enumerate()
            .map(|(x, c)| {
                if heads[&c[3]] == Some((x, 3)) {
                    CrossingSign::Positive
                } else {
                    CrossingSign::Negative
                }
            })
            .collect())
    }

    pub fn writhe_counts(&self) -> Result<(usize, usize)> {
        let s = self.signs()?;
        let pos = s.iter().filter(|&&x| x == CrossingSign::Positive).count();
        Ok((pos, s.len() - pos))
    }

    /// PD text, one crossing per token.
    pub fn to_pd_text(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("X({},{},{},{})", c[0], c[1], c[2], c[3]))
            .collect();
        parts.extend((0..self.loops).map(|_| "O".to_string()));
        parts.join(" ")
    }

    /// The mirror image: every crossing switched.
    pub fn mirror(&self) -> Result<Self> {
        let signs = self.signs()?;
        let mut t = self.clone();
        for (c, s) in t.crossings.iter_mut().zip(signs) {
            *c = match s {
                CrossingSign::Positive => [c[3], c[0], c[1], c[2]],
                CrossingSign::Negative => [c[1], c[2], c[3], c[0]],
            };
        }
        Ok(t)
    }
}

/// Parse PD text (`X(a,b,c,d)` tokens, `O` for a free loop, `#` comments)
/// or the JSON form `{"crossings": [[a,b,c,d], ...], "open_edges": [...]}`.
pub fn parse_pd(input: &str) -> Result<TangleDiagram> {
    let trimmed = input.trim_start();
    let t = if trimmed.starts_with('{') {
        serde_json::from_str::<TangleDiagram>(trimmed).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        parse_text(input)?
    };
    t.validate()?;
    Ok(t)
}

fn parse_text(input: &str) -> Result<TangleDiagram> {
    let mut crossings = Vec::new();
    let mut loops = 0;
    for line in input.lines() {
        let line = line.split('#').next().unwrap_or("");
        let mut rest = line.trim();
        if let Some(r) = rest.strip_prefix("PD") {
            rest = r.trim_start().trim_start_matches(['[', '(']).trim_end().trim_end_matches([']', ')']);
        }
        let chars: Vec<char> = rest.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            if ch.is_whitespace() || ch == ',' {
                i += 1;
                continue;
            }
            match ch {
                'X' => {
                    let open = chars.get(i + 1).copied();
                    let close = match open {
                        Some('(') => ')',
                        Some('[') => ']',
                        _ => return Err(Error::Parse(format!("expected '(' after X in {line:?}"))),
                    };
                    let end = chars[i + 2..]
                        .iter()
                        .position(|&c| c == close)
                        .ok_or_else(|| Error::Parse(format!("unterminated crossing in {line:?}")))?;
                    let body: String = chars[i + 2..i + 2 + end].iter().collect();
                    let nums: Vec<i64> = body
                        .split(',')
                        .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad edge label {s:?}"))))
                        .collect::<Result<_>>()?;
                    let q: [i64; 4] = nums
                        .try_into()
                        .map_err(|_| Error::Parse(format!("crossing needs four edges: X({body})")))?;
                    crossings.push(q);
                    i += 3 + end;
                }
                'O' => {
                    loops += 1;
                    i += 1;
                }
                _ => return Err(Error::Parse(format!("unexpected {ch:?} in {line:?}"))),
            }
        }
    }
    let mut t = TangleDiagram { crossings, open_edges: Vec::new(), loops, boundary_declared: false };
    let occ = t.occurrences();
    let mut seen = BTreeSet::new();
    for c in &t.crossings {
        for &e in c {
            if occ[&e].len() == 1 && seen.insert(e) {
                t.open_edges.push(e);
            }
        }
    }
    Ok(t)
}

/// Gravity: every edge points into its under-crossing end. Exists exactly
/// when every edge joins an over end to an under end.
pub fn assign_gravity(t: &TangleDiagram) -> Result<GravityAssignment> {
    t.validate()?;
    if t.is_split() {
        return Err(Error::Split);
    }
    let occ = t.occurrences();
    let mut into = BTreeMap::new();
    for (&e, v) in &occ {
        match v.as_slice() {
            [(x, p)] => {
                into.insert(e, (p % 2 == 0).then_some((*x, *p)));
            }
            [(x1, p1), (x2, p2)] => {
                if p1 % 2 == p2 % 2 {
                    return Err(Error::NotAlternating(e));
                }
                into.insert(e, Some(if p1 % 2 == 0 { (*x1, *p1) } else { (*x2, *p2) }));
            }
            _ => unreachable!("validated"),
        }
    }
    let boundary_in: Vec<bool> = t.open_edges.iter().map(|e| into[e].is_some()).collect();
    if t.boundary_declared && boundary_in.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::BoundaryOrder);
    }
    Ok(GravityAssignment { into, boundary_in })
}

/// Whether every edge joins an over end to an under end.
pub fn is_alternating(t: &TangleDiagram) -> bool {
    t.occurrences().values().all(|v| match v.as_slice() {
        [(_, p1), (_, p2)] => p1 % 2 != p2 % 2,
        _ => true,
    })
}

/// The two oriented smoothings of a crossing disc with points `0..4`
/// counterclockwise from the incoming under-strand and under ends as tails.
pub fn crossing_smoothings() -> (OrientedSmoothing, OrientedSmoothing) {
    (
        OrientedSmoothing::new(&[(0, 1), (2, 3)], &[]).unwrap(),
        OrientedSmoothing::new(&[(0, 3), (2, 1)], &[]).unwrap(),
    )
}

/// The complex of a single crossing. Negative: `0-smoothing{−2}` in degree
/// −1 and `1-smoothing{−1}` in degree 0; positive: `0-smoothing{1}` in degree
/// 0 and `1-smoothing{2}` in degree 1; the differential is the saddle.
pub fn crossing_complex<R: Ring>(sign: CrossingSign) -> ChainComplex<R> {
    crossing_complex_with(sign, Polarity::EvenTails)
}

pub(crate) fn crossing_complex_with<R: Ring>(sign: CrossingSign, polarity: Polarity) -> ChainComplex<R> {
    let (mut s0, mut s1) = crossing_smoothings();
    if polarity == Polarity::EvenHeads {
        s0 = s0.reversed();
        s1 = s1.reversed();
    }
    let (r, q) = match sign {
        CrossingSign::Negative => (-1, -2),
        CrossingSign::Positive => (0, 1),
    };
    let a = GradedSmoothing::new(s0, q);
    let b = GradedSmoothing::new(s1, q + 1);
    let saddle = CobLin::from_term(
        a.smoothing.clone(),
        b.smoothing.clone(),
        Circles::new(&a.smoothing, &b.smoothing).cob(0),
        R::one(),
    );
    ChainComplex::from_parts(4, r, vec![vec![a], vec![b]], vec![[((0, 0), saddle)].into()])
}

#[cfg(test)]
mod tests;
