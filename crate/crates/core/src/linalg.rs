//! Dense exact linear algebra over the ambient field.

use crate::ffield::{Fe, Field};

/// A subspace of `F^ncols` kept in reduced row echelon form.
///
/// Every stored row has a pivot equal to one, and every other stored row is
/// zero in that pivot column.
#[derive(Clone)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the stored rows in place.
    pub fn reduce(&self, v: &mut [Fe]) {
        let f = &self.field;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Fe>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let f = self.field.clone();
        let inv = f.inv(v[piv]).expect("pivot is nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in &mut self.rows {
            let c = row[piv];
            if c.is_zero() {
                continue;
            }
            for (x, &r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(piv);
        true
    }

    /// Basis of `{x : r . x = 0 for every stored row r}`.
    pub fn null_space(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let mut is_pivot = vec![None; self.ncols];
        for (k, &p) in self.pivots.iter().enumerate() {
            is_pivot[p] = Some(k);
        }
        (0..self.ncols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![Fe::ZERO; self.ncols];
                v[free] = Fe::ONE;
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = f.neg(row[free]);
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_null_space() {
        let f = Field::prime(3).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
        let mut ech = Echelon::new(&f, 3);
        assert!(ech.insert(e(&[1, 2, 0])));
        assert!(ech.insert(e(&[0, 1, 1])));
        assert!(!ech.insert(e(&[1, 0, 1])));
        assert_eq!(ech.rank(), 2);
        let ns = ech.null_space();
        assert_eq!(ns.len(), 1);
        for row in [e(&[1, 2, 0]), e(&[0, 1, 1])] {
            let dot = row
                .iter()
                .zip(&ns[0])
                .fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
            assert!(dot.is_zero());
        }
        assert!(ech.contains(&e(&[2, 0, 2])));
        assert!(!ech.contains(&e(&[0, 0, 1])));
    }
}
