//! Interval matrices, rigorous operator-norm bounds, and the 3x3 block
//! layout used by the cone and covering checks.
//!
//! `op_norm_upper` bounds the Euclidean operator norm from above for every
//! member matrix, `min_norm_lower` bounds `inf {|Ax| : |x| = 1}` from
//! below. Both are exact on 1x1 blocks, which is all the rotating Henon
//! application needs; the general-dimension paths stay sound but not sharp.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::{add_up, mul_up, sqrt_down, sqrt_up, sub_down, sub_up, IntervalScalar};

/// A rectangular block of intervals. A point matrix `P` is a *member* iff
/// `P[i][j]` lies in the `(i, j)` entry for all `i, j`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Interval<T>>,
}

impl<T: IntervalScalar> IntervalMatrix<T> {
    /// A `rows x cols` matrix with every entry equal to `fill`.
    pub fn filled(rows: usize, cols: usize, fill: Interval<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, Interval::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Interval::one());
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(rows: &[Vec<Interval<T>>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        })
    }

    /// 1x1 convenience constructor.
    pub fn scalar(entry: Interval<T>) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![entry],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Interval<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Interval<T>) {
        self.data[i * self.cols + j] = v;
    }

    /// Membership test: `p` (row-major) lies entrywise inside the matrix.
    pub fn contains_point(&self, p: &[T]) -> bool {
        p.len() == self.data.len() && self.data.iter().zip(p).all(|(iv, &x)| iv.contains(x))
    }

    /// Entrywise closed containment of `other` in `self`.
    pub fn encloses(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.encloses(b))
    }

    /// Interval matrix product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Interval::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix addition".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = *a + *b;
        }
        Ok(out)
    }

    /// Scales every entry by an interval factor.
    pub fn scale(&self, k: Interval<T>) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = *a * k;
        }
        out
    }

    /// Upper bound on `sup { |P| : P member }` in the Euclidean operator
    /// norm. Exact for 1x1 blocks; otherwise `sqrt(|B|_1 * |B|_inf)` over
    /// the entrywise magnitude matrix `B`, all sums rounded up.
    pub fn op_norm_upper(&self) -> T {
        if self.rows == 1 && self.cols == 1 {
            return self.get(0, 0).mag();
        }
        let mut norm1 = T::zero();
        for j in 0..self.cols {
            let mut s = T::zero();
            for i in 0..self.rows {
                s = add_up(s, self.get(i, j).mag());
            }
            norm1 = norm1.max(s);
        }
        let mut norminf = T::zero();
        for i in 0..self.rows {
            let mut s = T::zero();
            for j in 0..self.cols {
                s = add_up(s, self.get(i, j).mag());
            }
            norminf = norminf.max(s);
        }
        sqrt_up(mul_up(norm1, norminf))
    }

    /// Lower bound on `inf { |P|_m : P member }` where
    /// `|A|_m = inf { |Ax| : |x| = 1 }`. Exact for 1x1 blocks. For wider
    /// than tall blocks the infimum is 0. Otherwise uses
    /// `|P|_m >= sigma_min(mid) - |P - mid|` with a Gershgorin bound on
    /// `mid^T mid`, returning 0 when inconclusive.
    pub fn min_norm_lower(&self) -> T {
        if self.rows == 1 && self.cols == 1 {
            return self.get(0, 0).mig();
        }
        if self.cols > self.rows {
            return T::zero();
        }

        let half = T::one() / (T::one() + T::one());
        let mut mid = Self::zeros(self.rows, self.cols);
        let mut rad = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let m = (e.lo() * half + e.hi() * half).max(e.lo()).min(e.hi());
                mid.set(i, j, Interval::point(m));
                let r = sub_up(e.hi(), m).max(sub_up(m, e.lo()));
                rad.set(i, j, Interval::point(r));
            }
        }

        // Gram matrix of the midpoint, with rigorous rounding.
        let mut gram = Self::zeros(self.cols, self.cols);
        for i in 0..self.cols {
            for j in 0..self.cols {
                let mut acc = Interval::zero();
                for k in 0..self.rows {
                    acc = acc + mid.get(k, i) * mid.get(k, j);
                }
                gram.set(i, j, acc);
            }
        }

        // Gershgorin lower bound on the smallest eigenvalue of the Gram
        // matrix, hence on sigma_min(mid)^2.
        let mut lambda_lo = T::infinity();
        for i in 0..self.cols {
            let mut offdiag = T::zero();
            for j in 0..self.cols {
                if j != i {
                    offdiag = add_up(offdiag, gram.get(i, j).mag());
                }
            }
            lambda_lo = lambda_lo.min(sub_down(gram.get(i, i).lo(), offdiag));
        }
        if lambda_lo <= T::zero() {
            return T::zero();
        }
        let sigma = sqrt_down(lambda_lo);
        sub_down(sigma, rad.op_norm_upper()).max(T::zero())
    }
}

/// The 3x3 block decomposition of a `(c+u+s) x (c+u+s)` interval matrix:
/// block row/column 1 is the central direction, 2 the unstable, 3 the
/// stable one.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockBounds<T> {
    dims: [usize; 3],
    blocks: Vec<IntervalMatrix<T>>,
}

impl<T: IntervalScalar> BlockBounds<T> {
    /// Builds block bounds from `(c, u, s)` dimensions and the nine blocks
    /// in row-major block order; shapes must be consistent.
    pub fn from_blocks(dims: [usize; 3], blocks: Vec<IntervalMatrix<T>>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::DimensionMismatch(
                "block dimensions must be positive".into(),
            ));
        }
        if blocks.len() != 9 {
            return Err(Error::DimensionMismatch(
                "block bounds need exactly 9 blocks".into(),
            ));
        }
        for (idx, b) in blocks.iter().enumerate() {
            let (r, c) = (idx / 3, idx % 3);
            if b.rows() != dims[r] || b.cols() != dims[c] {
                return Err(Error::DimensionMismatch(format!(
                    "block ({}, {}) has shape {}x{}, expected {}x{}",
                    r + 1,
                    c + 1,
                    b.rows(),
                    b.cols(),
                    dims[r],
                    dims[c]
                )));
            }
        }
        Ok(Self { dims, blocks })
    }

    /// All nine blocks 1x1, from a row-major list of entries.
    pub fn from_scalar_entries(entries: [Interval<T>; 9]) -> Self {
        Self {
            dims: [1, 1, 1],
            blocks: entries.into_iter().map(IntervalMatrix::scalar).collect(),
        }
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Block at 1-based block position `(r, c)`, `r, c in {1, 2, 3}`.
    pub fn block(&self, r: usize, c: usize) -> &IntervalMatrix<T> {
        assert!((1..=3).contains(&r) && (1..=3).contains(&c));
        &self.blocks[(r - 1) * 3 + (c - 1)]
    }

    /// Swaps the roles of the unstable and stable directions, as required
    /// when feeding an inverse map into the forward-form checks.
    pub fn swap_unstable_stable(&self) -> Self {
        let perm = [0usize, 2, 1];
        let mut blocks = Vec::with_capacity(9);
        for r in 0..3 {
            for c in 0..3 {
                blocks.push(self.blocks[perm[r] * 3 + perm[c]].clone());
            }
        }
        Self {
            dims: [self.dims[0], self.dims[2], self.dims[1]],
            blocks,
        }
    }

    /// Entrywise closed containment in `other`.
    pub fn contained_in(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| b.encloses(a))
    }

    /// Largest entrywise excess of `self` over `other`; nonpositive iff
    /// `self` is contained in `other`.
    pub fn containment_excess(&self, other: &Self) -> T {
        debug_assert_eq!(self.dims, other.dims);
        let mut worst = T::neg_infinity();
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    let x = a.get(i, j);
                    let y = b.get(i, j);
                    worst = worst.max(sub_up(y.lo(), x.lo()));
                    worst = worst.max(sub_up(x.hi(), y.hi()));
                }
            }
        }
        worst
    }

    /// Assembles the full `(c+u+s) x (c+u+s)` interval matrix.
    pub fn to_matrix(&self) -> IntervalMatrix<T> {
        let n = self.dims.iter().sum();
        let offs = [0, self.dims[0], self.dims[0] + self.dims[1]];
        let mut m = IntervalMatrix::zeros(n, n);
        for r in 0..3 {
            for c in 0..3 {
                let b = &self.blocks[r * 3 + c];
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        m.set(offs[r] + i, offs[c] + j, b.get(i, j));
                    }
                }
            }
        }
        m
    }
}
