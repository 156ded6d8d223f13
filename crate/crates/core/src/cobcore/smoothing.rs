use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which boundary points are tails (where a strand enters the disc).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    /// Even-indexed points are tails, odd-indexed points are heads.
    EvenTails,
    /// Even-indexed points are heads.
    EvenHeads,
}

impl Polarity {
    pub fn is_tail(self, p: usize) -> bool {
        (p % 2 == 0) == (self == Polarity::EvenTails)
    }

    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::EvenTails => Polarity::EvenHeads,
            Polarity::EvenHeads => Polarity::EvenTails,
        }
    }
}

/// A crossingless tangle in a disc: a planar matching of `2k` boundary
/// points by oriented arcs, plus free oriented loops.
///
/// Curves are indexed: arcs first (sorted by their smaller endpoint), then
/// positive loops, then negative loops.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedSmoothing {
    points: usize,
    arcs: Vec<(u16, u16)>,
    pos_loops: u32,
    neg_loops: u32,
    arc_at: Vec<u16>,
}

impl OrientedSmoothing {
    /// Validated constructor. `arcs` are `(tail, head)` pairs; `loops` are
    /// orientation signs `+1` (counterclockwise) or `-1`.
    pub fn new(arcs: &[(usize, usize)], loops: &[i8]) -> Result<Self> {
        let points = arcs.len() * 2;
        let mut used = vec![false; points];
        for &(t, h) in arcs {
            for p in [t, h] {
                if p >= points {
                    return Err(Error::InvalidSmoothing(format!("point {p} out of range")));
                }
                if used[p] {
                    return Err(Error::InvalidSmoothing(format!("point {p} used twice")));
                }
                used[p] = true;
            }
        }
        let norm = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        for (i, &(a, b)) in arcs.iter().enumerate() {
            let (a0, a1) = norm(a, b);
            for &(c, d) in &arcs[i + 1..] {
                let (c0, c1) = norm(c, d);
                let c_in = a0 < c0 && c0 < a1;
                let d_in = a0 < c1 && c1 < a1;
                if c_in != d_in {
                    return Err(Error::CrossingMatching(a, b, c, d));
                }
            }
        }
        if let Some(&(t0, _)) = arcs.first() {
            let pol = if t0 % 2 == 0 { Polarity::EvenTails } else { Polarity::EvenHeads };
            for &(t, h) in arcs {
                if !pol.is_tail(t) {
                    return Err(Error::NonAlternating(t));
                }
                if pol.is_tail(h) {
                    return Err(Error::NonAlternating(h));
                }
            }
        }
        let mut pos = 0;
        let mut neg = 0;
        for &l in loops {
            match l {
                1 => pos += 1,
                -1 => neg += 1,
                other => return Err(Error::InvalidSmoothing(format!("loop sign {other}"))),
            }
        }
        Ok(Self::from_parts(
            points,
            arcs.iter().map(|&(t, h)| (t as u16, h as u16)).collect(),
            pos,
            neg,
        ))
    }

    /// Trusted constructor; canonicalizes arc order.
    pub(crate) fn from_parts(points: usize, mut arcs: Vec<(u16, u16)>, pos_loops: u32, neg_loops: u32) -> Self {
        arcs.sort_by_key(|&(t, h)| t.min(h));
        let mut arc_at = vec![0u16; points];
        for (i, &(t, h)) in arcs.iter().enumerate() {
            arc_at[t as usize] = i as u16;
            arc_at[h as usize] = i as u16;
        }
        OrientedSmoothing { points, arcs, pos_loops, neg_loops, arc_at }
    }

    pub fn empty() -> Self {
        Self::from_parts(0, vec![], 0, 0)
    }

    pub fn loops_only(pos: u32, neg: u32) -> Self {
        Self::from_parts(0, vec![], pos, neg)
    }

    pub fn boundary_count(&self) -> usize {
        self.points
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().map(|&(t, h)| (t as usize, h as usize))
    }

    pub fn arc(&self, i: usize) -> (usize, usize) {
        let (t, h) = self.arcs[i];
        (t as usize, h as usize)
    }

    pub fn n_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn pos_loops(&self) -> u32 {
        self.pos_loops
    }

    pub fn neg_loops(&self) -> u32 {
        self.neg_loops
    }

    pub fn n_loops(&self) -> usize {
        (self.pos_loops + self.neg_loops) as usize
    }

    pub fn n_curves(&self) -> usize {
        self.arcs.len() + self.n_loops()
    }

    /// Index of the arc ending at boundary point `p`.
    pub fn arc_at(&self, p: usize) -> usize {
        self.arc_at[p] as usize
    }

    /// The other endpoint of the arc at `p`.
    pub fn mate(&self, p: usize) -> usize {
        let (t, h) = self.arc(self.arc_at(p));
        if t == p { h } else { t }
    }

    pub fn is_tail(&self, p: usize) -> bool {
        self.arc(self.arc_at(p)).0 == p
    }

    pub fn polarity(&self) -> Option<Polarity> {
        self.arcs.first().map(|&(t, _)| {
            if t % 2 == 0 { Polarity::EvenTails } else { Polarity::EvenHeads }
        })
    }

    /// Sign of the loop with curve index `c` (which must be a loop).
    pub fn loop_sign(&self, c: usize) -> i8 {
        let l = c - self.arcs.len();
        if l < self.pos_loops as usize { 1 } else { -1 }
    }

    pub fn is_loop(&self, c: usize) -> bool {
        c >= self.arcs.len()
    }

    /// The same smoothing with loop curve `c` removed.
    pub fn without_loop(&self, c: usize) -> OrientedSmoothing {
        let mut s = self.clone();
        if self.loop_sign(c) > 0 {
            s.pos_loops -= 1;
        } else {
            s.neg_loops -= 1;
        }
        s
    }

    pub fn with_loops(&self, pos: u32, neg: u32) -> OrientedSmoothing {
        let mut s = self.clone();
        s.pos_loops += pos;
        s.neg_loops += neg;
        s
    }

    /// All arcs reversed (loop orientations too).
    pub fn reversed(&self) -> OrientedSmoothing {
        Self::from_parts(
            self.points,
            self.arcs.iter().map(|&(t, h)| (h, t)).collect(),
            self.neg_loops,
            self.pos_loops,
        )
    }

    /// Re-index boundary points so that old point `shift` becomes point 0.
    pub fn rotated(&self, shift: usize) -> OrientedSmoothing {
        if self.points == 0 {
            return self.clone();
        }
        let n = self.points as u16;
        let s = (shift % self.points) as u16;
        let f = |p: u16| (p + n - s) % n;
        Self::from_parts(
            self.points,
            self.arcs.iter().map(|&(t, h)| (f(t), f(h))).collect(),
            self.pos_loops,
            self.neg_loops,
        )
    }

    /// Rotation number: signed loop count of the standard closure.
    pub fn rotation_number(&self) -> i64 {
        let (pos, neg) = self.closure_loop_counts();
        pos as i64 - neg as i64
    }

    /// The boundary-free smoothing obtained by the standard closure.
    pub fn standard_closure(&self) -> OrientedSmoothing {
        let (pos, neg) = self.closure_loop_counts();
        Self::loops_only(pos, neg)
    }

    /// Positive and negative loop counts of the standard closure.
    ///
    /// The standard closure caps every head `p` to the next point `p + 1`
    /// (mod `2k`) by a small arc outside the disc. Turning of each closed
    /// curve is summed in units of `1 / 2k` of a full turn: an inside arc
    /// from `a` to `b` turns by `((b - a) mod 2k) - k`, a cap travelling
    /// counterclockwise across one gap by `k + 1`.
    fn closure_loop_counts(&self) -> (u32, u32) {
        let mut pos = self.pos_loops;
        let mut neg = self.neg_loops;
        if self.points == 0 {
            return (pos, neg);
        }
        let n = self.points as i64;
        let k = n / 2;
        let mut seen = vec![false; self.arcs.len()];
        for start in 0..self.arcs.len() {
            if seen[start] {
                continue;
            }
            let mut turning = 0i64;
            let mut a = start;
            loop {
                seen[a] = true;
                let (t, h) = self.arc(a);
                turning += (h as i64 - t as i64).rem_euclid(n) - k;
                turning += k + 1;
                a = self.arc_at((h + 1) % self.points);
                if a == start {
                    break;
                }
            }
            debug_assert_eq!(turning.abs(), n);
            if turning > 0 {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        (pos, neg)
    }
}

impl fmt::Debug for OrientedSmoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for OrientedSmoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (t, h)) in self.arcs().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t}>{h}")?;
        }
        if self.pos_loops > 0 {
            write!(f, " +o{}", self.pos_loops)?;
        }
        if self.neg_loops > 0 {
            write!(f, " -o{}", self.neg_loops)?;
        }
        write!(f, "]")
    }
}

/// A smoothing with a quantum degree shift, `σ{q}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedSmoothing {
    pub smoothing: Arc<OrientedSmoothing>,
    pub q_shift: i32,
}

impl GradedSmoothing {
    pub fn new(smoothing: OrientedSmoothing, q_shift: i32) -> Self {
        GradedSmoothing { smoothing: Arc::new(smoothing), q_shift }
    }

    pub fn shifted_rotation_number(&self) -> i64 {
        self.smoothing.rotation_number() + self.q_shift as i64
    }
}

impl fmt::Display for GradedSmoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.smoothing, self.q_shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(arcs: &[(usize, usize)]) -> OrientedSmoothing {
        OrientedSmoothing::new(arcs, &[]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(OrientedSmoothing::new(&[(0, 1)], &[]).is_ok());
        assert!(OrientedSmoothing::new(&[(0, 1), (3, 2)], &[]).is_err());
        assert!(OrientedSmoothing::new(&[(0, 1), (2, 3)], &[]).is_ok());
        assert!(matches!(
            OrientedSmoothing::new(&[(0, 2), (1, 3)], &[]),
            Err(Error::CrossingMatching(..))
        ));
        assert!(matches!(
            OrientedSmoothing::new(&[(0, 1), (3, 2)], &[]),
            Err(Error::NonAlternating(_))
        ));
        assert!(OrientedSmoothing::new(&[(0, 1), (0, 2)], &[]).is_err());
    }

    #[test]
    fn loops_are_unordered() {
        let a = OrientedSmoothing::new(&[(0, 1)], &[1, -1, 1]).unwrap();
        let b = OrientedSmoothing::new(&[(0, 1)], &[1, 1, -1]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rotation_numbers() {
        assert_eq!(OrientedSmoothing::loops_only(1, 0).rotation_number(), 1);
        assert_eq!(OrientedSmoothing::empty().rotation_number(), 0);
        assert_eq!(sm(&[(0, 1)]).rotation_number(), 1);
        assert_eq!(sm(&[(1, 0)]).rotation_number(), 1);
        assert_eq!(sm(&[(0, 1), (2, 3)]).rotation_number(), 1);
        assert_eq!(sm(&[(0, 3), (2, 1)]).rotation_number(), 2);
        assert_eq!(sm(&[(1, 0), (3, 2)]).rotation_number(), 2);
        assert_eq!(sm(&[(3, 0), (1, 2)]).rotation_number(), 1);
    }

    #[test]
    fn closure_matches_rotation() {
        let s = sm(&[(0, 1), (2, 3)]);
        assert_eq!(s.standard_closure(), OrientedSmoothing::loops_only(1, 0));
        let s = sm(&[(0, 3), (2, 1)]);
        assert_eq!(s.standard_closure(), OrientedSmoothing::loops_only(2, 0));
        let c = OrientedSmoothing::loops_only(2, 1);
        assert_eq!(c.standard_closure(), c);
    }

    #[test]
    fn shifted() {
        assert_eq!(GradedSmoothing::new(sm(&[(0, 1)]), -2).shifted_rotation_number(), -1);
        assert_eq!(GradedSmoothing::new(OrientedSmoothing::loops_only(1, 0), 0).shifted_rotation_number(), 1);
        assert_eq!(GradedSmoothing::new(OrientedSmoothing::empty(), 5).shifted_rotation_number(), 5);
    }

    #[test]
    fn rotation_invariant_under_reindexing() {
        let s = sm(&[(0, 5), (2, 1), (4, 3)]);
        for sh in 0..6 {
            assert_eq!(s.rotated(sh).rotation_number(), s.rotation_number());
        }
    }
}
