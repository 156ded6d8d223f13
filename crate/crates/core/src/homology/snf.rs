use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::ring::Ring;

/// Sparse matrix with entries keyed `(row, col)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<R> {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), R>,
}

impl<R: Ring> SparseMatrix<R> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, row: usize, col: usize, x: R) {
        if x.is_zero() {
            return;
        }
        let e = self.entries.entry((row, col)).or_insert_with(R::zero);
        *e = e.clone() + x;
        if e.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn get(&self, row: usize, col: usize) -> R {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(R::zero)
    }

    /// `other * self`.
    pub fn then(&self, other: &SparseMatrix<R>) -> SparseMatrix<R> {
        let mut by_row: BTreeMap<usize, Vec<(usize, &R)>> = BTreeMap::new();
        for (&(r, c), x) in &other.entries {
            by_row.entry(c).or_default().push((r, x));
        }
        let mut out = SparseMatrix::zero(other.rows, self.cols);
        for (&(mid, c), x) in &self.entries {
            if let Some(v) = by_row.get(&mid) {
                for &(r, y) in v {
                    out.add(r, c, y.clone() * x.clone());
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero invariant factors (normalized), via unit pivoting on the
    /// sparse matrix and a Euclidean Smith reduction of whatever is left.
    pub fn invariant_factors(&self) -> Vec<R> {
        let mut rows: BTreeMap<usize, BTreeMap<usize, R>> = BTreeMap::new();
        let mut cols: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (&(r, c), x) in &self.entries {
            rows.entry(r).or_default().insert(c, x.clone());
            cols.entry(c).or_default().insert(r);
        }
        let mut factors = Vec::new();
        loop {
            // a unit in the sparsest row, in its sparsest column
            let mut best: Option<(usize, usize, usize, usize)> = None;
            for (&r, row) in &rows {
                if best.is_some_and(|b| b.0 <= row.len()) {
                    continue;
                }
                for (&c, x) in row {
                    if x.is_unit() {
                        let cc = cols[&c].len();
                        if best.map_or(true, |b| (row.len(), cc) < (b.0, b.1)) {
                            best = Some((row.len(), cc, r, c));
                        }
                    }
                }
            }
            let Some((_, _, pr, pc)) = best else { break };
            let prow = rows.remove(&pr).unwrap();
            let inv = prow[&pc].inverse().unwrap();
            for (&c, _) in &prow {
                cols.get_mut(&c).unwrap().remove(&pr);
            }
            let others: Vec<usize> = cols[&pc].iter().copied().collect();
            for r in others {
                let row = rows.get_mut(&r).unwrap();
                let f = row[&pc].clone() * inv.clone();
                for (&c, x) in &prow {
                    let v = row.get(&c).cloned().unwrap_or_else(R::zero) - f.clone() * x.clone();
                    if v.is_zero() {
                        if row.remove(&c).is_some() {
                            cols.get_mut(&c).unwrap().remove(&r);
                        }
                    } else {
                        if row.insert(c, v).is_none() {
                            cols.entry(c).or_default().insert(r);
                        }
                    }
                }
                if row.is_empty() {
                    rows.remove(&r);
                }
            }
            cols.remove(&pc);
            factors.push(R::one());
        }
        if !rows.is_empty() {
            let col_ids: Vec<usize> = cols.iter().filter(|(_, s)| !s.is_empty()).map(|(&c, _)| c).collect();
            let dense: Vec<Vec<R>> = rows
                .values()
                .map(|row| col_ids.iter().map(|c| row.get(c).cloned().unwrap_or_else(R::zero)).collect())
                .collect();
            factors.extend(dense_smith(dense));
        }
        factors
    }
}

/// Diagonalize by Euclidean row and column operations; returns the nonzero
/// diagonal (normalized).
fn dense_smith<R: Ring>(mut m: Vec<Vec<R>>) -> Vec<R> {
    let mut out = Vec::new();
    loop {
        let mut best: Option<(BigUint, usize, usize)> = None;
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    let n = x.norm();
                    if best.as_ref().map_or(true, |b| n < b.0) {
                        best = Some((n, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        let p = m[pi][pj].clone();
        let mut dirty = false;
        for i in 0..m.len() {
            if i == pi || m[i][pj].is_zero() {
                continue;
            }
            let (q, r) = m[i][pj].div_rem_euclid(&p);
            for j in 0..m[i].len() {
                let v = m[i][j].clone() - q.clone() * m[pi][j].clone();
                m[i][j] = v;
            }
            if !r.is_zero() {
                dirty = true;
            }
        }
        for j in 0..m[pi].len() {
            if j == pj || m[pi][j].is_zero() {
                continue;
            }
            let (q, r) = m[pi][j].div_rem_euclid(&p);
            for row in m.iter_mut() {
                let v = row[j].clone() - q.clone() * row[pj].clone();
                row[j] = v;
            }
            if !r.is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        out.push(p.normalizing_unit() * p);
        m.remove(pi);
        for row in m.iter_mut() {
            row.remove(pj);
        }
    }
    out
}

/// Split an order into prime powers.
pub fn prime_power_parts(n: &BigUint) -> Vec<u64> {
    let mut n = n.to_u64().expect("torsion order fits in u64");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Q, Z};

    fn mat(rows: usize, cols: usize, e: &[(usize, usize, i64)]) -> SparseMatrix<Z> {
        let mut m = SparseMatrix::zero(rows, cols);
        for &(r, c, x) in e {
            m.add(r, c, Z::from(x));
        }
        m
    }

    #[test]
    fn factors_of_diagonalizable() {
        let m = mat(2, 2, &[(0, 0, 2), (0, 1, 4), (1, 0, 6), (1, 1, 8)]);
        let mut f = m.invariant_factors();
        f.sort();
        // det = -8, gcd of entries = 2
        assert_eq!(f, vec![Z::from(2), Z::from(4)]);
    }

    #[test]
    fn rank_over_rationals() {
        let mut m = SparseMatrix::<Q>::zero(3, 3);
        for (r, c, x) in [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4), (2, 2, 3)] {
            m.add(r, c, Q::from_integer(x.into()));
        }
        assert_eq!(m.invariant_factors().len(), 2);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_parts(&BigUint::from(12u32)), vec![4, 3]);
        assert_eq!(prime_power_parts(&BigUint::from(7u32)), vec![7]);
        assert!(prime_power_parts(&BigUint::from(1u32)).is_empty());
    }
}
