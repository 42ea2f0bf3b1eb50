//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Row convention throughout: a lattice is the integer row span of a matrix,
//! and linear systems are written `x · M = b`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense rectangular matrix of big integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row slices. Panics if the rows are ragged.
    pub fn from_rows<T, R>(rows: &[R]) -> Self
    where
        T: Into<BigInt> + Clone,
        R: AsRef<[T]>,
    {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), ncols, "ragged matrix");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: nrows, cols: ncols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Appends the rows of `other` below `self`.
    pub fn stack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &x[i] * &self[(i, j)]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries, all positive.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows.min(self.d.cols);
        (0..k).map(|i| self.d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form.
///
/// Pivot rule: smallest nonzero absolute value in the active block, ties
/// broken by lowest (row, column) index. Output is therefore deterministic.
pub fn smith(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = smallest_entry(&d, t) else {
                return SmithDecomposition { u, v, d };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Row and column are clear; enforce the divisibility chain.
            let bad_row = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => {
                    if pivot.is_negative() {
                        d.negate_row(t);
                        u.negate_row(t);
                    }
                    break;
                }
            }
        }
    }
    SmithDecomposition { u, v, d }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Row-style Hermite normal form: returns the nonzero rows of the echelon
/// basis of the row lattice, pivots positive, entries above pivots reduced
/// into `[0, pivot)`.
pub fn hermite(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        // Euclid down the column until a single nonzero entry remains at `row`.
        loop {
            let pivot = (row..a.rows)
                .filter(|&i| !a[(i, col)].is_zero())
                .min_by(|&x, &y| a[(x, col)].abs().cmp(&a[(y, col)].abs()));
            let Some(p) = pivot else { break };
            a.swap_rows(row, p);
            let mut done = true;
            for i in row + 1..a.rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, col)] / &a[(row, col)]);
                a.add_row_multiple(i, row, &q);
                done &= a[(i, col)].is_zero();
            }
            if done {
                break;
            }
        }
        if a[(row, col)].is_zero() {
            continue;
        }
        if a[(row, col)].is_negative() {
            a.negate_row(row);
        }
        for i in 0..row {
            let q = -a[(i, col)].div_floor(&a[(row, col)]);
            a.add_row_multiple(i, row, &q);
        }
        row += 1;
    }
    let keep: Vec<Vec<BigInt>> = (0..row).map(|i| a.row(i).to_vec()).collect();
    if keep.is_empty() {
        return IntMatrix::zeros(0, m.cols);
    }
    IntMatrix::from_rows(&keep)
}

/// A particular solution of `x · M = b` together with a basis of `{y : y · M = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<BigInt>,
    pub homogeneous: Vec<Vec<BigInt>>,
}

/// Reusable solver for `x · M = b` with fixed `M`; the Smith form is computed once.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    smith: SmithDecomposition,
    factors: Vec<BigInt>,
}

impl LinearSolver {
    pub fn new(m: &IntMatrix) -> Self {
        let smith = smith(m);
        let factors = smith.invariant_factors();
        LinearSolver { smith, factors }
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }

    /// Basis of the left kernel: rows `rank..` of `U`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.smith.u.rows).map(|i| self.smith.u.row(i).to_vec()).collect()
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Solution> {
        let SmithDecomposition { u, v, .. } = &self.smith;
        assert_eq!(b.len(), v.rows, "right-hand side has the wrong length");
        // x U^{-1} D = b V
        let c = v.left_mul(b);
        let rank = self.rank();
        if c[rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut z = vec![BigInt::zero(); u.rows];
        for (i, f) in self.factors.iter().enumerate() {
            let (q, r) = c[i].div_rem(f);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
        Some(Solution { particular: u.left_mul(&z), homogeneous: self.kernel() })
    }
}

/// Solves `x · M = b` over the integers.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Solution> {
    LinearSolver::new(m).solve(b)
}

/// Whether `v` lies in the integer row span of `lattice`.
pub fn member(lattice: &IntMatrix, v: &[BigInt]) -> bool {
    if lattice.rows == 0 {
        return v.iter().all(Zero::is_zero);
    }
    solve(lattice, v).is_some()
}

/// Reduces a rational into `[0, 1)`.
pub fn frac_mod1(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// The finite part of `ℤ^m / L`, presented through its character group
/// `{φ ∈ (ℚ/ℤ)^m : M·φ ≡ 0}` (φ as a column vector; `M` spans `L` by rows).
///
/// For `M = A` square and nonsingular this is exactly the set of phase
/// vectors `φ` with `A·φ ∈ ℤ^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    pub generators: Vec<Vec<BigRational>>,
    pub orders: Vec<BigInt>,
    pub free_rank: usize,
    pub dim: usize,
}

impl FiniteQuotient {
    pub fn order(&self) -> BigInt {
        self.orders.iter().product()
    }

    /// All elements, each coordinate reduced into `[0, 1)`. Enumeration order
    /// is mixed-radix in the generators; callers that need a canonical order sort.
    pub fn elements(&self) -> QuotientIter<'_> {
        let radix: Vec<u64> = self
            .orders
            .iter()
            .map(|o| u64::try_from(o).expect("quotient too large to enumerate"))
            .collect();
        QuotientIter { q: self, radix, counter: vec![0; self.orders.len()], done: false }
    }
}

pub struct QuotientIter<'a> {
    q: &'a FiniteQuotient,
    radix: Vec<u64>,
    counter: Vec<u64>,
    done: bool,
}

impl Iterator for QuotientIter<'_> {
    type Item = Vec<BigRational>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.q.dim];
        for (c, g) in self.counter.iter().zip(&self.q.generators) {
            if *c == 0 {
                continue;
            }
            let c = BigRational::from_integer(BigInt::from(*c));
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += &c * gi;
            }
        }
        x.iter_mut().for_each(|xi| *xi = frac_mod1(xi));

        // advance
        let mut i = 0;
        loop {
            if i == self.counter.len() {
                self.done = true;
                break;
            }
            self.counter[i] += 1;
            if self.counter[i] < self.radix[i] {
                break;
            }
            self.counter[i] = 0;
            i += 1;
        }
        Some(x)
    }
}

pub fn quotient(lattice: &IntMatrix) -> FiniteQuotient {
    let m = lattice.cols;
    if lattice.rows == 0 {
        return FiniteQuotient { generators: vec![], orders: vec![], free_rank: m, dim: m };
    }
    let s = smith(lattice);
    let factors = s.invariant_factors();
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (i, d) in factors.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let g = (0..m)
            .map(|r| frac_mod1(&BigRational::new(s.v[(r, i)].clone(), d.clone())))
            .collect();
        generators.push(g);
        orders.push(d.clone());
    }
    FiniteQuotient { generators, orders, free_rank: m - factors.len(), dim: m }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn diag_of(s: &SmithDecomposition) -> Vec<i64> {
        let k = s.d.rows().min(s.d.cols());
        (0..k).map(|i| i64::try_from(&s.d[(i, i)]).unwrap()).collect()
    }

    fn check_smith(m: &IntMatrix) -> SmithDecomposition {
        let s = smith(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(determinant(&s.u).abs(), BigInt::one());
        assert_eq!(determinant(&s.v).abs(), BigInt::one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn smith_identity() {
        let s = check_smith(&IntMatrix::identity(3));
        assert_eq!(diag_of(&s), vec![1, 1, 1]);
    }

    #[test]
    fn smith_small() {
        let s = check_smith(&IntMatrix::from_rows(&[[2i64, 1], [0, 3]]));
        assert_eq!(diag_of(&s), vec![1, 6]);
    }

    #[test]
    fn smith_already_diagonal() {
        let m = IntMatrix::from_rows(&[[2i64, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]);
        let s = check_smith(&m);
        assert_eq!(diag_of(&s), vec![2, 2, 2, 2]);
    }

    #[test]
    fn smith_fixes_divisibility() {
        let s = check_smith(&IntMatrix::from_rows(&[[2i64, 0], [0, 3]]));
        assert_eq!(diag_of(&s), vec![1, 6]);
        let s = check_smith(&IntMatrix::from_rows(&[[0i64, 0, 4], [6, 0, 0], [0, 10, 0], [0, 0, 0]]));
        assert_eq!(diag_of(&s), vec![2, 2, 60]);
    }

    #[test]
    fn determinant_examples() {
        let m = IntMatrix::from_rows(&[[3i64, 1, 0, 0], [0, 3, 1, 0], [0, 0, 2, 0], [0, 0, 0, 2]]);
        assert_eq!(determinant(&m), BigInt::from(36));
        let m = IntMatrix::from_rows(&[[0i64, 1], [1, 0]]);
        assert_eq!(determinant(&m), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[[2i64, 0], [2, 0]]);
        assert!(determinant(&m).is_zero());
    }

    #[test]
    fn solve_examples() {
        let m = IntMatrix::from_rows(&[[2i64]]);
        let s = solve(&m, &bi(&[4])).unwrap();
        assert_eq!(s.particular, bi(&[2]));
        assert!(s.homogeneous.is_empty());
        assert!(solve(&m, &bi(&[3])).is_none());

        let m = IntMatrix::from_rows(&[[2i64, 0], [0, 3]]);
        assert_eq!(solve(&m, &bi(&[2, 3])).unwrap().particular, bi(&[1, 1]));
    }

    #[test]
    fn solve_with_kernel() {
        let m = IntMatrix::from_rows(&[[1i64, 1], [2, 2], [0, 1]]);
        let s = solve(&m, &bi(&[3, 5])).unwrap();
        assert_eq!(m.left_mul(&s.particular), bi(&[3, 5]));
        assert_eq!(s.homogeneous.len(), 1);
        assert!(m.left_mul(&s.homogeneous[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn member_examples() {
        let l = IntMatrix::from_rows(&[[2i64, 0], [0, 2]]);
        assert!(member(&l, &bi(&[2, 0])));
        assert!(!member(&l, &bi(&[1, 0])));
        assert!(member(&l, &bi(&[0, 0])));
        assert!(member(&IntMatrix::zeros(0, 2), &bi(&[0, 0])));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(&IntMatrix::from_rows(&[[2i64, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]));
        assert_eq!(q.order(), BigInt::from(16));
        assert_eq!(q.orders, bi(&[2, 2, 2, 2]));
        assert_eq!(q.elements().count(), 16);

        let q = quotient(&IntMatrix::from_rows(&[[2i64, 1], [0, 3]]));
        assert_eq!(q.orders, bi(&[6]));
        assert_eq!(q.free_rank, 0);

        let q = quotient(&IntMatrix::from_rows(&[[1i64, 0]]));
        assert_eq!(q.free_rank, 1);
        assert_eq!(q.order(), BigInt::one());
        assert_eq!(q.elements().count(), 1);
    }

    #[test]
    fn hermite_basis() {
        let m = IntMatrix::from_rows(&[[2i64, 4], [3, 6], [0, 5]]);
        let h = hermite(&m);
        assert_eq!(h, IntMatrix::from_rows(&[[1i64, 2], [0, 5]]));
        assert_eq!(hermite(&IntMatrix::zeros(2, 2)).rows(), 0);
    }
}
