use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::cob::{Circles, Cob};
use super::smoothing::OrientedSmoothing;
use crate::error::{Error, Result};
use crate::ring::Ring;

/// A formal linear combination of reduced cobordisms between two fixed
/// smoothings.
#[derive(Clone, PartialEq)]
pub struct CobLin<R> {
    pub bottom: Arc<OrientedSmoothing>,
    pub top: Arc<OrientedSmoothing>,
    terms: BTreeMap<Cob, R>,
}

pub(crate) fn pow2<R: Ring>(n: u32) -> R {
    let mut x = R::one();
    for _ in 0..n {
        x = x.clone() + x;
    }
    x
}

impl<R: Ring> CobLin<R> {
    pub fn zero(bottom: Arc<OrientedSmoothing>, top: Arc<OrientedSmoothing>) -> Self {
        CobLin { bottom, top, terms: BTreeMap::new() }
    }

    /// The identity; on a smoothing with loops each loop tube is cut into
    /// its two dotted halves.
    pub fn identity(s: Arc<OrientedSmoothing>) -> Self {
        let circles = Circles::new(&s, &s);
        let mut masks = vec![0u128];
        for c in s.n_arcs()..s.n_curves() {
            let b = 1u128 << circles.of_bottom(c);
            let t = 1u128 << circles.of_top(c);
            masks = masks.iter().flat_map(|m| [m | b, m | t]).collect();
        }
        let mut out = Self::zero(s.clone(), s);
        for m in masks {
            out.add_term(circles.cob(m), R::one());
        }
        out
    }

    pub fn from_term(bottom: Arc<OrientedSmoothing>, top: Arc<OrientedSmoothing>, cob: Cob, coef: R) -> Self {
        let mut l = Self::zero(bottom, top);
        l.add_term(cob, coef);
        l
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Cob, &R)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, cob: Cob, coef: R) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&cob) {
            Some(c) => {
                let s = c.clone() + coef;
                if s.is_zero() {
                    self.terms.remove(&cob);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(cob, coef);
            }
        }
    }

    pub fn add_assign(&mut self, other: &CobLin<R>) {
        debug_assert!(self.bottom == other.bottom && self.top == other.top);
        for (c, r) in &other.terms {
            self.add_term(c.clone(), r.clone());
        }
    }

    pub fn scaled(&self, r: &R) -> CobLin<R> {
        let mut out = Self::zero(self.bottom.clone(), self.top.clone());
        for (c, x) in &self.terms {
            out.add_term(c.clone(), x.clone() * r.clone());
        }
        out
    }

    pub fn negated(&self) -> CobLin<R> {
        self.scaled(&-R::one())
    }

    /// `other ∘ self`: first `self: σ → τ`, then `other: τ → υ`.
    pub fn then(&self, other: &CobLin<R>) -> Result<CobLin<R>> {
        if *self.top != *other.bottom {
            return Err(Error::BoundaryMismatch);
        }
        let mut out = Self::zero(self.bottom.clone(), other.top.clone());
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let circles = Circles::new(&self.bottom, &other.top);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                for (twos, c) in f.compose(g, &self.top, &circles) {
                    out.add_term(c, pow2::<R>(twos) * a.clone() * b.clone());
                }
            }
        }
        Ok(out)
    }

    /// If this is `u · identity` with `u` a unit, returns `u`.
    pub fn unit_identity(&self) -> Option<&R> {
        if self.bottom != self.top || self.terms.len() != 1 {
            return None;
        }
        let (c, r) = self.terms.iter().next()?;
        (self.bottom.n_loops() == 0 && c.is_identity() && r.is_unit()).then_some(r)
    }

    /// The scalar value of a cobordism between empty smoothings.
    pub fn scalar(&self) -> Option<R> {
        if self.bottom.n_curves() != 0 || self.top.n_curves() != 0 {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(R::zero))
    }

    /// Degrees of all terms (empty for zero).
    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().map(|c| c.degree(&self.bottom)).collect()
    }
}

/// Compose two cobordism combinations (`g ∘ f`).
pub fn compose_cob<R: Ring>(f: &CobLin<R>, g: &CobLin<R>) -> Result<CobLin<R>> {
    f.then(g)
}

pub fn identity_cobordism<R: Ring>(s: &OrientedSmoothing) -> CobLin<R> {
    CobLin::identity(Arc::new(s.clone()))
}

impl<R: Ring> fmt::Debug for CobLin<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<R: Ring> fmt::Display for CobLin<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if r.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({r}){c}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Z;
    use num_traits::{One, Zero};

    fn empty() -> Arc<OrientedSmoothing> {
        Arc::new(OrientedSmoothing::empty())
    }

    fn circle() -> Arc<OrientedSmoothing> {
        Arc::new(OrientedSmoothing::loops_only(1, 0))
    }

    fn term(b: &Arc<OrientedSmoothing>, t: &Arc<OrientedSmoothing>, dots: u128) -> CobLin<Z> {
        CobLin::from_term(b.clone(), t.clone(), Circles::new(b, t).cob(dots), Z::one())
    }

    fn cup(dot: bool) -> CobLin<Z> {
        term(&empty(), &circle(), dot as u128)
    }

    fn cap(dot: bool) -> CobLin<Z> {
        term(&circle(), &empty(), dot as u128)
    }

    fn scalar(l: &CobLin<Z>) -> Z {
        l.scalar().unwrap()
    }

    #[test]
    fn local_relations() {
        assert_eq!(scalar(&cup(false).then(&cap(false)).unwrap()), Z::zero());
        assert_eq!(scalar(&cup(false).then(&cap(true)).unwrap()), Z::one());
        assert_eq!(scalar(&cup(true).then(&cap(false)).unwrap()), Z::one());
        assert_eq!(scalar(&cup(true).then(&cap(true)).unwrap()), Z::zero());
    }

    #[test]
    fn handle_is_twice_dot() {
        // pair of pants after neck cutting is a sum over the undotted circle
        let two = Arc::new(OrientedSmoothing::loops_only(2, 0));
        let mut pants = CobLin::zero(circle(), two.clone());
        for m in [0b110u128, 0b101, 0b011] {
            pants.add_term(Circles::new(&circle(), &two).cob(m), Z::one());
        }
        let mut merge = CobLin::zero(two.clone(), circle());
        for m in [0b110u128, 0b101, 0b011] {
            merge.add_term(Circles::new(&two, &circle()).cob(m), Z::one());
        }
        let handle = pants.then(&merge).unwrap();
        let mut expected = CobLin::zero(circle(), circle());
        expected.add_term(Circles::new(&circle(), &circle()).cob(0b11), Z::from(2));
        assert_eq!(handle, expected);
        let closed = cup(false).then(&handle).unwrap().then(&cap(false)).unwrap();
        assert_eq!(scalar(&closed), Z::from(2));
    }

    #[test]
    fn identity_is_cut_neck() {
        let mut s = cap(true).then(&cup(false)).unwrap();
        s.add_assign(&cap(false).then(&cup(true)).unwrap());
        assert_eq!(s, CobLin::identity(circle()));
        let id = CobLin::<Z>::identity(circle());
        assert_eq!(id.then(&id).unwrap(), id);
    }
}
