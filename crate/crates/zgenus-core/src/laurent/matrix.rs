//! Square matrices over Λ and Λ₀, Hermitian matrices, and congruences.

use alloc::vec::Vec;
use core::fmt;


use crate::exactmat::ExactMatrix;

use super::lambda0::Lambda0Scalar;
use super::poly::{LaurentError, LaurentPoly};

/// Square matrix over Λ = Z[t, 1/t], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct LambdaMatrix {
    n: usize,
    entries: Vec<LaurentPoly>,
}

impl fmt::Debug for LambdaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entries[i * self.n + j])?;
            }
        }
        write!(f, "]")
    }
}

impl LambdaMatrix {
    pub fn new(n: usize, entries: Vec<LaurentPoly>) -> Self {
        assert_eq!(entries.len(), n * n);
        LambdaMatrix { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        LambdaMatrix { n, entries: alloc::vec![LaurentPoly::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = LaurentPoly::one();
        }
        m
    }

    pub fn from_integer(m: &ExactMatrix) -> Self {
        assert!(m.is_square());
        let n = m.rows();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = LaurentPoly::monomial(0, m[(i, j)].clone());
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        LambdaMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let p = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&p);
                }
            }
        }
        out
    }

    /// Conjugate transpose: transpose with t -> 1/t applied entrywise.
    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].involute();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.conj_transpose()
    }

    /// Exact determinant by fraction-free elimination over Λ.
    pub fn determinant(&self) -> LaurentPoly {
        let n = self.n;
        if n == 0 {
            return LaurentPoly::one();
        }
        let mut a = self.entries.clone();
        let mut sign = 1i64;
        let mut prev = LaurentPoly::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let mut found = None;
                for i in k + 1..n {
                    if !a[i * n + k].is_zero() {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return LaurentPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k * n + k]
                        .mul(&a[i * n + j])
                        .sub(&a[i * n + k].mul(&a[k * n + j]));
                    a[i * n + j] = num
                        .div_exact(&prev)
                        .expect("Bareiss division is exact over an integral domain");
                }
                a[i * n + k] = LaurentPoly::zero();
            }
            prev = a[k * n + k].clone();
        }
        let det = a[n * n - 1].clone();
        if sign < 0 {
            det.neg()
        } else {
            det
        }
    }

    /// Is the determinant a unit ±t^k of Λ?
    pub fn is_unit(&self) -> bool {
        self.determinant().is_unit()
    }

    pub fn eval_at_pm1(&self, sign: i8) -> ExactMatrix {
        let n = self.n;
        let mut out = ExactMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(i, j)].eval_at_pm1(sign);
            }
        }
        out
    }

    pub fn substitute_power(&self, w: i64) -> Self {
        LambdaMatrix {
            n: self.n,
            entries: self.entries.iter().map(|p| p.substitute_power(w)).collect(),
        }
    }

    pub fn block_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut out = Self::zero(n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                out[(self.n + i, self.n + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Congruence `conj(t)ᵀ · self · t` by a Λ₀-matrix. The result is a
    /// Λ₀-matrix; use [`Lambda0Matrix::to_lambda`] to demote it.
    pub fn congruence(&self, t: &Lambda0Matrix) -> Lambda0Matrix {
        let a = Lambda0Matrix::from_lambda(self);
        t.conj_transpose().mul(&a).mul(t)
    }
}

impl core::ops::Index<(usize, usize)> for LambdaMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        &self.entries[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for LambdaMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        &mut self.entries[i * self.n + j]
    }
}

/// Hermitian matrix over Λ: equal to its conjugate transpose.
#[derive(Clone, PartialEq, Eq)]
pub struct HermitianLambdaMatrix(LambdaMatrix);

impl fmt::Debug for HermitianLambdaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl HermitianLambdaMatrix {
    pub fn new(m: LambdaMatrix) -> Result<Self, LaurentError> {
        let n = m.size();
        for i in 0..n {
            for j in 0..n {
                if m[(i, j)] != m[(j, i)].involute() {
                    return Err(LaurentError::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(HermitianLambdaMatrix(m))
    }

    pub fn from_integer_symmetric(m: &ExactMatrix) -> Result<Self, LaurentError> {
        Self::new(LambdaMatrix::from_integer(m))
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn matrix(&self) -> &LambdaMatrix {
        &self.0
    }

    pub fn eval_at_pm1(&self, sign: i8) -> ExactMatrix {
        self.0.eval_at_pm1(sign)
    }

    /// Block sum with t -> t^w substituted in the second summand; this is
    /// the presentation-matrix combinator for satellite knots.
    pub fn satellite_sum(&self, pattern: &Self, w: i64) -> Self {
        let sub = pattern.0.substitute_power(w);
        HermitianLambdaMatrix(self.0.block_sum(&sub))
    }
}

/// Square matrix over Λ₀.
#[derive(Clone, PartialEq, Eq)]
pub struct Lambda0Matrix {
    n: usize,
    entries: Vec<Lambda0Scalar>,
}

impl fmt::Debug for Lambda0Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entries[i * self.n + j])?;
            }
        }
        write!(f, "]")
    }
}

impl Lambda0Matrix {
    pub fn zero(n: usize) -> Self {
        Lambda0Matrix { n, entries: alloc::vec![Lambda0Scalar::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m[(i, i)] = Lambda0Scalar::one();
        }
        m
    }

    pub fn from_lambda(m: &LambdaMatrix) -> Self {
        let n = m.size();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = Lambda0Scalar::from(m[(i, j)].clone());
            }
        }
        out
    }

    pub fn from_integer(m: &ExactMatrix) -> Self {
        Self::from_lambda(&LambdaMatrix::from_integer(m))
    }

    /// Elementary transvection `I + c·E_{ij}`.
    pub fn transvection(n: usize, i: usize, j: usize, c: Lambda0Scalar) -> Self {
        assert!(i != j);
        let mut m = Self::identity(n);
        m[(i, j)] = c;
        m
    }

    /// Diagonal scaling matrix.
    pub fn diagonal(scalars: Vec<Lambda0Scalar>) -> Self {
        let n = scalars.len();
        let mut m = Self::zero(n);
        for (i, s) in scalars.into_iter().enumerate() {
            m[(i, i)] = s;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let p = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&p);
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].involute();
            }
        }
        out
    }

    /// Determinant by cofactor expansion along the first column with
    /// memoization over row subsets; exact over Λ₀.
    pub fn determinant(&self) -> Lambda0Scalar {
        let n = self.n;
        if n == 0 {
            return Lambda0Scalar::one();
        }
        // minor_det(rows, col) over the rows in `rows` (bitmask) and columns
        // col..n, computed recursively.
        fn minor(
            m: &Lambda0Matrix,
            rows: u32,
            col: usize,
            memo: &mut alloc::collections::BTreeMap<(u32, usize), Lambda0Scalar>,
        ) -> Lambda0Scalar {
            if col == m.n {
                return Lambda0Scalar::one();
            }
            if let Some(hit) = memo.get(&(rows, col)) {
                return hit.clone();
            }
            let mut acc = Lambda0Scalar::zero();
            let mut sign_pos = true;
            for i in 0..m.n {
                if rows & (1 << i) == 0 {
                    continue;
                }
                let e = &m[(i, col)];
                if !e.is_zero() {
                    let sub = minor(m, rows & !(1 << i), col + 1, memo);
                    let term = e.mul(&sub);
                    acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
                }
                sign_pos = !sign_pos;
            }
            memo.insert((rows, col), acc.clone());
            acc
        }
        assert!(n <= 16, "determinant expansion limited to desk-scale sizes");
        let mut memo = alloc::collections::BTreeMap::new();
        minor(self, (1u32 << n) - 1, 0, &mut memo)
    }

    /// Demote to a Λ-matrix if every entry has cleared its (1-t)-denominator.
    pub fn to_lambda(&self) -> Result<LambdaMatrix, LaurentError> {
        let n = self.n;
        let mut out = LambdaMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(i, j)].to_lambda().ok_or(LaurentError::NotInLambda)?;
            }
        }
        Ok(out)
    }
}

impl core::ops::Index<(usize, usize)> for Lambda0Matrix {
    type Output = Lambda0Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Lambda0Scalar {
        &self.entries[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Lambda0Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Lambda0Scalar {
        &mut self.entries[i * self.n + j]
    }
}
