//! Exact linear algebra: a dense rational matrix for kernel computations and a
//! sparse incremental echelon form for rank and dimension counting.
//!
//! All elimination is exact. The dense path uses rational arithmetic with the pivot
//! chosen to minimize coefficient growth (smallest combined numerator/denominator
//! bit size, ties broken by lowest row index). The sparse path works over the
//! integers fraction-free, stripping the content gcd of every reduced row, so
//! intermediate entries stay small and results are deterministic.

use super::{Integer, Rational};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Matrix from explicit rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert!(r.len() == ncols, "ragged rows");
            data.extend(r);
        }
        ExactMatrix {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    fn bit_size(x: &Rational) -> u64 {
        x.numer().bits() + x.denom().bits()
    }

    /// Reduced row echelon form in place; returns the pivot (row, col) list.
    fn rref(&mut self) -> Vec<(usize, usize)> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            // pick the candidate with the smallest entries to limit growth
            let mut best: Option<(usize, u64)> = None;
            for r in next_row..self.rows {
                let v = self.get(r, col);
                if v.is_zero() {
                    continue;
                }
                let sz = Self::bit_size(v);
                match best {
                    None => best = Some((r, sz)),
                    Some((_, bs)) if sz < bs => best = Some((r, sz)),
                    _ => {}
                }
            }
            let Some((prow, _)) = best else { continue };
            self.swap_rows(next_row, prow);
            let inv = {
                let p = self.get(next_row, col).clone();
                Rational::one() / p
            };
            for c in col..self.cols {
                let v = self.get(next_row, c) * &inv;
                self.set(next_row, c, v);
            }
            for r in 0..self.rows {
                if r == next_row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for c in col..self.cols {
                    let v = self.get(r, c) - &factor * self.get(next_row, c);
                    self.set(r, c, v);
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {x : A x = 0}, one vector per free column, ordered
    /// by free column index.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut x = vec![Rational::zero(); self.cols];
            x[free] = Rational::one();
            for &(pr, pc) in &pivots {
                x[pc] = -m.get(pr, free).clone();
            }
            basis.push(x);
        }
        basis
    }
}

/// Sparse integer row: (column, coefficient) pairs sorted by column, no zeros.
pub type SparseRow = Vec<(u32, Integer)>;

/// Incremental echelon form over the rationals, held fraction-free over the
/// integers. Rows are reduced against existing pivots on insertion; the structure
/// only ever grows, so ranks of nested spans can share a prefix via `clone`.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseRow>,
    pivot_of_col: BTreeMap<u32, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Current rank.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce and insert an integer row. Returns true when the rank grew.
    pub fn add_row(&mut self, row: SparseRow) -> bool {
        let mut row = normalize(row);
        while let Some(&(lead, _)) = row.first() {
            match self.pivot_of_col.get(&lead) {
                None => {
                    self.pivot_of_col.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
                Some(&idx) => {
                    let pivot = &self.rows[idx];
                    // fraction-free: (pivot lead) * row - (row lead) * pivot
                    let a = pivot[0].1.clone();
                    let b = row[0].1.clone();
                    row = normalize(combine(&a, &row, &-b, pivot));
                }
            }
        }
        false
    }

    /// Clear denominators and insert a rational row.
    pub fn add_rational_row(&mut self, row: &[(u32, Rational)]) -> bool {
        self.add_row(clear_denominators(row))
    }
}

/// a*x + b*y for sorted sparse rows.
fn combine(a: &Integer, x: &SparseRow, b: &Integer, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let next = match (x.get(i), y.get(j)) {
            (Some(&(cx, ref vx)), Some(&(cy, ref vy))) => {
                if cx < cy {
                    i += 1;
                    (cx, a * vx)
                } else if cy < cx {
                    j += 1;
                    (cy, b * vy)
                } else {
                    i += 1;
                    j += 1;
                    (cx, a * vx + b * vy)
                }
            }
            (Some(&(cx, ref vx)), None) => {
                i += 1;
                (cx, a * vx)
            }
            (None, Some(&(cy, ref vy))) => {
                j += 1;
                (cy, b * vy)
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    out
}

/// Strip the content gcd and make the leading coefficient positive.
fn normalize(mut row: SparseRow) -> SparseRow {
    row.retain(|(_, v)| !v.is_zero());
    if row.is_empty() {
        return row;
    }
    let mut g = Integer::zero();
    for (_, v) in &row {
        g = num::integer::gcd(g, v.abs());
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in &mut row {
            *v /= &g;
        }
    }
    row
}

/// Convert a rational sparse row to an integer one via the denominator lcm.
pub fn clear_denominators(row: &[(u32, Rational)]) -> SparseRow {
    let mut l = Integer::one();
    for (_, v) in row {
        l = num::integer::lcm(l, v.denom().clone());
    }
    let mut out: SparseRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&l / v.denom())))
        .collect();
    out.sort_by_key(|&(c, _)| c);
    out
}

/// Dimensions of two spans, their sum, and (by inclusion-exclusion) their
/// intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubspaceDims {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_sum: usize,
    pub dim_intersection: usize,
}

/// Compute span dimensions for two generating sets in a common coordinate space.
pub fn subspace_dims(a: &[Vec<(u32, Rational)>], b: &[Vec<(u32, Rational)>]) -> SubspaceDims {
    let mut ea = Echelon::new();
    for r in a {
        ea.add_rational_row(r);
    }
    let dim_a = ea.rank();
    let mut eb = Echelon::new();
    for r in b {
        eb.add_rational_row(r);
    }
    let dim_b = eb.rank();
    let mut esum = ea;
    for r in b {
        esum.add_rational_row(r);
    }
    let dim_sum = esum.rank();
    SubspaceDims {
        dim_a,
        dim_b,
        dim_sum,
        dim_intersection: dim_a + dim_b - dim_sum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    #[test]
    fn kernel_of_difference() {
        // kernel of (1 -1) is spanned by (1, 1)
        let m = ExactMatrix::from_rows(vec![vec![rat(1), rat(-1)]]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![rat(1), rat(1)]]);
    }

    #[test]
    fn rank_and_kernel_shapes() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // verify A x = 0 exactly
        for r in 0..3 {
            let mut acc = Rational::zero();
            for c in 0..3 {
                acc += m.get(r, c) * &k[0][c];
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn rational_pivots_stay_exact() {
        let m = ExactMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 4), ratio(1, 6)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn echelon_counts_rank() {
        let mut e = Echelon::new();
        assert!(e.add_row(vec![(0, 1.into()), (1, 2.into())]));
        assert!(e.add_row(vec![(1, 1.into()), (2, 1.into())]));
        // dependent: 1*r0 + 2*r1 reduced to zero
        assert!(!e.add_row(vec![(0, 1.into()), (1, 4.into()), (2, 2.into())]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn echelon_handles_rationals() {
        let mut e = Echelon::new();
        assert!(e.add_rational_row(&[(0, ratio(1, 2)), (1, ratio(1, 3))]));
        assert!(!e.add_rational_row(&[(0, ratio(3, 2)), (1, rat(1))]));
        assert_eq!(e.rank(), 1);
    }

    #[test]
    fn inclusion_exclusion() {
        let u = vec![vec![(0, rat(1))]];
        let w = vec![vec![(0, rat(1)), (1, rat(1))]];
        let d = subspace_dims(&u, &w);
        assert_eq!(
            d,
            SubspaceDims {
                dim_a: 1,
                dim_b: 1,
                dim_sum: 2,
                dim_intersection: 0
            }
        );
        let d2 = subspace_dims(&u, &u);
        assert_eq!(d2.dim_intersection, 1);
    }

    #[test]
    fn normalize_strips_content_and_sign() {
        let mut e = Echelon::new();
        e.add_row(vec![(0, (-4).into()), (2, 6.into())]);
        assert_eq!(e.rows[0], vec![(0, 2.into()), (2, (-3).into())]);
    }
}
