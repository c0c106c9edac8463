//! Exact rational scalars and small dense matrices over them.
//!
//! Every routine here is exact: there is no floating point anywhere in this
//! module. Matrices are expected to be small (at most about 12x12), so plain
//! Gaussian elimination and cofactor expansions are used throughout.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `[-]digits[/digits]`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = match den {
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            d.parse().ok()?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Renders a rational as `n` or `n/d`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator and denominator both overflow f64; scale down first
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Minimal commutative-ring interface used by the division-free determinant.
pub trait CommRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
}

impl CommRing for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
}

/// Determinant of a square array over any commutative ring, by Laplace
/// expansion along rows with memoisation over column subsets. Uses
/// `O(n 2^n)` ring operations and no division.
pub fn ring_det<R: CommRing>(rows: &[Vec<R>], one: &R) -> R {
    let n = rows.len();
    if n == 0 {
        return one.one_like();
    }
    // dp[mask]: signed sum over bijections of the first popcount(mask) rows
    // onto the columns in mask.
    let size = 1usize << n;
    let mut dp: Vec<Option<R>> = vec![None; size];
    dp[0] = Some(one.one_like());
    for mask in 0..size {
        let Some(acc) = dp[mask].take() else { continue };
        if acc.is_zero_elem() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(acc);
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let entry = &rows[row][col];
            if entry.is_zero_elem() {
                continue;
            }
            // sign of placing `col` after the already used columns above it
            let above = (mask >> col).count_ones();
            let term = acc.mul_ref(entry);
            let next = mask | (1 << col);
            let slot = dp[next].get_or_insert_with(|| one.zero_like());
            *slot = if above % 2 == 0 {
                slot.add_ref(&term)
            } else {
                slot.sub_ref(&term)
            };
        }
        dp[mask] = Some(acc);
    }
    dp[size - 1].take().unwrap_or_else(|| one.zero_like())
}

/// Adjugate of a square array over a commutative ring via cofactors.
pub fn ring_adjugate<R: CommRing>(rows: &[Vec<R>], one: &R) -> Vec<Vec<R>> {
    let n = rows.len();
    let mut adj = vec![vec![one.zero_like(); n]; n];
    if n == 1 {
        adj[0][0] = one.one_like();
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<R>> = rows
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let d = ring_det(&minor, one);
            // adj is the transposed cofactor matrix
            adj[j][i] = if (i + j) % 2 == 0 {
                d
            } else {
                one.zero_like().sub_ref(&d)
            };
        }
    }
    adj
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(fmt_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer entries; panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| int(x)).collect())
                .collect(),
        )
        .expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn try_mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }

    /// `u^T * self * v`.
    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Rational {
        dot(u, &self.mul_vec(v))
    }

    /// Row echelon reduction in place; returns (rank, sign of the row
    /// permutation, pivot columns).
    fn eliminate(&mut self) -> (usize, bool, Vec<usize>) {
        let mut rank = 0;
        let mut flipped = false;
        let mut pivots = Vec::new();
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if p != rank {
                self.swap_rows(p, rank);
                flipped = !flipped;
            }
            let pivot = self[(rank, col)].clone();
            for r in rank + 1..self.rows {
                if self[(r, col)].is_zero() {
                    continue;
                }
                let factor = &self[(r, col)] / &pivot;
                for c in col..self.cols {
                    let delta = &factor * &self[(rank, c)];
                    self[(r, c)] -= delta;
                }
            }
            pivots.push(col);
            rank += 1;
        }
        (rank, flipped, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().0
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let (rank, flipped, _) = m.eliminate();
        if rank < self.rows {
            return Ok(Rational::zero());
        }
        let mut det = Rational::one();
        for i in 0..self.rows {
            det *= &m[(i, i)];
        }
        Ok(if flipped { -det } else { det })
    }

    /// Basis of the right null space `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let (rank, _, pivots) = m.eliminate();
        // back substitution to reduced row echelon form
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let p = m[(i, pc)].clone();
            for c in 0..m.cols {
                let v = &m[(i, c)] / &p;
                m[(i, c)] = v;
            }
            for r in 0..i {
                let factor = m[(r, pc)].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..m.cols {
                    let delta = &factor * &m[(i, c)];
                    m[(r, c)] -= delta;
                }
            }
        }
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); m.cols];
                v[f] = Rational::one();
                for (i, &pc) in pivots.iter().enumerate().take(rank) {
                    v[pc] = -m[(i, f)].clone();
                }
                v
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter()
        .zip(v)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn mat_inverse(m: &RatMatrix) -> Result<RatMatrix> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
    }
    let n = m.rows;
    let mut a = RatMatrix::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] = m[(r, c)].clone();
        }
        a[(r, n + r)] = Rational::one();
    }
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !a[(r, col)].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap_rows(p, col);
        let pivot = a[(col, col)].clone();
        for c in 0..2 * n {
            let v = &a[(col, c)] / &pivot;
            a[(col, c)] = v;
        }
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for c in 0..2 * n {
                let delta = &factor * &a[(col, c)];
                a[(r, c)] -= delta;
            }
        }
    }
    let mut inv = RatMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            inv[(r, c)] = a[(r, n + c)].clone();
        }
    }
    Ok(inv)
}

/// Adjugate and determinant, defined for singular input as well.
pub fn mat_adjugate_det(m: &RatMatrix) -> Result<(RatMatrix, Rational)> {
    let det = m.determinant()?;
    if !det.is_zero() {
        let inv = mat_inverse(m)?;
        return Ok((inv.scale(&det), det));
    }
    let adj = ring_adjugate(&m.to_rows(), &Rational::one());
    Ok((RatMatrix::from_rows(adj)?, det))
}

/// A lattice given by an echelon basis of rational rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    /// Basis rows in Hermite normal form (up to the common scale).
    pub basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl LatticeBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates of `row` in this basis, or `None` when `row` is
    /// not a lattice point.
    pub fn coordinates(&self, row: &[Rational]) -> Option<Vec<BigInt>> {
        let mut rest = row.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let k = &rest[pc] / &b[pc];
            if !k.is_integer() {
                return None;
            }
            if !k.is_zero() {
                for (x, y) in rest.iter_mut().zip(b) {
                    *x -= &k * y;
                }
            }
            coords.push(k.to_integer());
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }
}

/// Hermite-style basis for the additive group generated by `rows`.
///
/// Denominators are cleared by their LCM, the integer matrix is brought to
/// row Hermite normal form with unimodular row operations, and the nonzero
/// rows are scaled back.
pub fn hnf_basis(rows: &[Vec<Rational>]) -> LatticeBasis {
    let scale = common_denominator(rows.iter().flatten());
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|q| (q * Rational::from_integer(scale.clone())).to_integer())
                .collect()
        })
        .collect();

    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top == m.len() {
            break;
        }
        // gcd-combine everything below `top` into row `top`
        for r in top + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let a = m[top][col].clone();
            let b = m[r][col].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (ua, ub) = (&a / &g, &b / &g);
            // [x y; -ub ua] has determinant x*ua + y*ub = 1
            for c in col..cols {
                let p = m[top][c].clone();
                let q = m[r][c].clone();
                m[top][c] = &x * &p + &y * &q;
                m[r][c] = &ua * &q - &ub * &p;
            }
        }
        if m[top][col].is_zero() {
            continue;
        }
        if m[top][col].is_negative() {
            for c in col..cols {
                m[top][c] = -m[top][c].clone();
            }
        }
        let pivot = m[top][col].clone();
        for r in 0..top {
            let q = m[r][col].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for c in col..cols {
                let delta = &q * &m[top][c];
                m[r][c] -= delta;
            }
        }
        pivots.push(col);
        top += 1;
    }
    let denom = Rational::from_integer(scale);
    let basis = m
        .into_iter()
        .take(top)
        .map(|row| {
            row.into_iter()
                .map(|x| Rational::from_integer(x) / &denom)
                .collect()
        })
        .collect();
    LatticeBasis { basis, pivots }
}
