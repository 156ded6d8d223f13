//! Random planar tangle diagrams, built the same way they are assembled:
//! crossings are attached one boundary point at a time and adjacent
//! boundary points are closed up.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TangleDiagram;

/// A generated diagram together with whether it was built alternating.
#[derive(Clone, Debug)]
pub struct GeneratedTangle {
    pub diagram: TangleDiagram,
    pub alternating: bool,
}

/// A connected tangle with `crossings` crossings and at most `max_boundary`
/// boundary points (at least two when `max_boundary ≥ 2`, none otherwise).
/// With `alternating` false at least one edge joins two over or two under
/// ends, which needs at least two crossings. Deterministic in `seed`.
pub fn random_alternating_tangle(seed: u64, crossings: usize, max_boundary: usize, alternating: bool) -> GeneratedTangle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = crossings.max(if alternating { 1 } else { 2 });
    loop {
        if let Some(g) = attempt(&mut rng, n, max_boundary, alternating) {
            return g;
        }
    }
}

fn attempt(rng: &mut ChaCha8Rng, n: usize, max_boundary: usize, alternating: bool) -> Option<GeneratedTangle> {
    let mut b = Builder { xs: vec![[1, 2, 3, 4]], next: 5, bd: (0..4).map(|p| (0, p)).collect(), mismatch: false };
    b.close(rng, if n > 1 { max_boundary.saturating_sub(2) } else { max_boundary }, max_boundary, alternating)?;
    for k in 1..n {
        let p1 = rng.gen_range(0..b.bd.len());
        let (x1, q1) = b.bd[p1];
        let flip = !alternating && rng.gen_bool(0.3);
        let want_odd = (q1 % 2 == 0) != flip;
        let p2 = 2 * rng.gen_range(0..2) + want_odd as usize;
        b.mismatch |= flip;
        let e = b.xs[x1][q1];
        let mut c = [0i64; 4];
        for (p, slot) in c.iter_mut().enumerate() {
            *slot = if p == p2 {
                e
            } else {
                b.next += 1;
                b.next
            };
        }
        b.xs.push(c);
        let mut nb = b.bd[..p1].to_vec();
        nb.extend((1..4).map(|j| (k, (p2 + j) % 4)));
        nb.extend_from_slice(&b.bd[p1 + 1..]);
        b.bd = nb;
        let room = if k + 1 < n { max_boundary.saturating_sub(2) } else { max_boundary };
        b.close(rng, room, max_boundary, alternating)?;
    }
    if !alternating && !b.mismatch {
        return None;
    }
    let open: Vec<i64> = b.bd.iter().map(|&(x, p)| b.xs[x][p]).collect();
    let diagram = compact(TangleDiagram { crossings: b.xs, open_edges: open, loops: 0, boundary_declared: true });
    if diagram.validate().is_err() || diagram.signs().is_err() {
        return None;
    }
    Some(GeneratedTangle { diagram, alternating })
}

struct Builder {
    xs: Vec<[i64; 4]>,
    next: i64,
    /// boundary ends as (crossing, position), counterclockwise
    bd: Vec<(usize, usize)>,
    mismatch: bool,
}

impl Builder {
    /// Curl adjacent boundary points together until at most `room` remain
    /// (but never below two when `max_boundary ≥ 2`), plus a few at random.
    fn close(&mut self, rng: &mut ChaCha8Rng, room: usize, max_boundary: usize, alternating: bool) -> Option<()> {
        let floor = if max_boundary >= 2 { 2 } else { 0 };
        loop {
            let n = self.bd.len();
            let must = n > room.max(floor);
            let may = n > floor.max(2) && rng.gen_bool(0.25);
            if !(must || may) || n < 2 {
                return Some(());
            }
            let gaps: Vec<usize> = (0..n)
                .filter(|&i| !alternating || self.bd[i].1 % 2 != self.bd[(i + 1) % n].1 % 2)
                .collect();
            if gaps.is_empty() {
                return None;
            }
            let i = gaps[rng.gen_range(0..gaps.len())];
            let j = (i + 1) % n;
            let (a, b) = (self.bd[i], self.bd[j]);
            self.mismatch |= a.1 % 2 == b.1 % 2;
            let keep = self.xs[a.0][a.1];
            let gone = self.xs[b.0][b.1];
            for c in self.xs.iter_mut() {
                for e in c.iter_mut() {
                    if *e == gone {
                        *e = keep;
                    }
                }
            }
            if j > i {
                self.bd.drain(i..=j);
            } else {
                self.bd.remove(i);
                self.bd.remove(0);
            }
        }
    }
}

/// Relabel edges `1, 2, ...` in order of first appearance.
fn compact(mut t: TangleDiagram) -> TangleDiagram {
    let mut map = std::collections::BTreeMap::new();
    for c in &t.crossings {
        for &e in c {
            let n = map.len() as i64 + 1;
            map.entry(e).or_insert(n);
        }
    }
    for c in t.crossings.iter_mut() {
        for e in c.iter_mut() {
            *e = map[e];
        }
    }
    for e in t.open_edges.iter_mut() {
        *e = map[e];
    }
    t
}
