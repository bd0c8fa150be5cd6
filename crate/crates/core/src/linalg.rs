//! Exact linear algebra over the rationals: an incrementally maintained
//! reduced row echelon form and nullspaces.

use num_traits::{One, Zero};

use crate::Rational;

/// Reduced row echelon basis of a subspace of `Q^ncols`.
///
/// Every row has a leading 1 at its pivot column and zeros in the pivot
/// columns of all other rows, so the basis is canonical: two spans are
/// equal iff their [`Echelon::sorted_rows`] are equal.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_col: vec![None; ncols],
        }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<Rational>>>(ncols: usize, rows: I) -> Self {
        let mut e = Self::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in insertion order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.row_of_col[col].is_some()
    }

    /// Rows in insertion order.
    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Rows ordered by pivot column: the canonical basis.
    pub fn sorted_rows(&self) -> Vec<&Vec<Rational>> {
        (0..self.ncols)
            .filter_map(|c| self.row_of_col[c].map(|r| &self.rows[r]))
            .collect()
    }

    /// Residue of `v` modulo the span (zero in every pivot column).
    pub fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.ncols);
        for col in 0..self.ncols {
            if v[col].is_zero() {
                continue;
            }
            if let Some(r) = self.row_of_col[col] {
                let c = v[col].clone();
                for (x, y) in v.iter_mut().zip(&self.rows[r]).skip(col) {
                    if !y.is_zero() {
                        *x -= &c * y;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns the new pivot column, or `None` if `v`
    /// was already in the span.
    pub fn insert(&mut self, v: Vec<Rational>) -> Option<usize> {
        let mut v = self.reduce(v);
        let pivot = v.iter().position(|x| !x.is_zero())?;
        if !v[pivot].is_one() {
            let inv = v[pivot].recip();
            for x in v.iter_mut().skip(pivot) {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        for row in &mut self.rows {
            if row[pivot].is_zero() {
                continue;
            }
            let c = row[pivot].clone();
            for (x, y) in row.iter_mut().zip(&v).skip(pivot) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        self.row_of_col[pivot] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(pivot);
        Some(pivot)
    }
}

/// Rank of a list of vectors of common length `ncols`.
pub fn rank(ncols: usize, rows: impl IntoIterator<Item = Vec<Rational>>) -> usize {
    Echelon::from_rows(ncols, rows).rank()
}

/// Basis of `{x : r . x = 0 for every row r}`, one vector per free column,
/// each with a 1 in its free column.
pub fn nullspace(
    ncols: usize,
    rows: impl IntoIterator<Item = Vec<Rational>>,
) -> Vec<Vec<Rational>> {
    let e = Echelon::from_rows(ncols, rows);
    (0..ncols)
        .filter(|c| !e.is_pivot(*c))
        .map(|free| {
            let mut x = vec![Rational::zero(); ncols];
            x[free] = Rational::one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                x[p] = -row[free].clone();
            }
            x
        })
        .collect()
}
