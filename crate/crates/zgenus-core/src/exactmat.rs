//! Exact integer linear algebra.
//!
//! Dense matrices over arbitrary-precision integers, with the operations the
//! rest of the crate is built on: Smith normal form with unimodular
//! transformation certificates, adjugate, fraction-free determinant, and the
//! exact signature of symmetric matrices via rational congruence
//! diagonalization.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatError {
    NotSquare { rows: usize, cols: usize },
    NotSymmetric { row: usize, col: usize },
    ShapeMismatch(String),
}

impl fmt::Display for MatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, expected square")
            }
            MatError::NotSymmetric { row, col } => {
                write!(f, "matrix is not symmetric at ({row},{col})")
            }
            MatError::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
        }
    }
}

/// Dense integer matrix in row-major order. All arithmetic is exact; there is
/// no entry size limit.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        ExactMatrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from rows of machine integers; handy in tests and parsers.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        ExactMatrix { rows: r, cols: c, entries }
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

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn block_sum(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Leading principal submatrix of size `n`.
    pub fn leading_block(&self, n: usize) -> Self {
        assert!(n <= self.rows && n <= self.cols);
        let mut out = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += &self[(i, j)] * &v[j];
                }
                acc
            })
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.entries.clone();
        let at = |a: &Vec<BigInt>, i: usize, j: usize| a[i * n + j].clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                // pivot search below row k
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
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&a, k, k) * at(&a, i, j) - at(&a, i, k) * at(&a, k, j);
                    a[i * n + j] = &num / &prev; // exact by Bareiss
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = at(&a, k, k);
        }
        let det = at(&a, n - 1, n - 1);
        Ok(if sign < 0 { -det } else { det })
    }

    /// Classical adjugate (transposed cofactor matrix), so that
    /// `a * adjugate(a) = det(a) * I`.
    pub fn adjugate(&self) -> Result<ExactMatrix, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(ExactMatrix::zero(0, 0));
        }
        let mut adj = ExactMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.delete_row_col(i, j);
                let c = minor.determinant()?;
                let sign_neg = (i + j) % 2 == 1;
                adj[(j, i)] = if sign_neg { -c } else { c };
            }
        }
        #[cfg(debug_assertions)]
        {
            let det = self.determinant()?;
            let prod = self.mul(&adj);
            let expect = ExactMatrix::identity(n).scale(&det);
            debug_assert_eq!(prod, expect, "adjugate postcondition failed");
        }
        Ok(adj)
    }

    fn delete_row_col(&self, row: usize, col: usize) -> ExactMatrix {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            for j in 0..self.cols {
                if j == col {
                    continue;
                }
                entries.push(self[(i, j)].clone());
            }
        }
        ExactMatrix::new(self.rows - 1, self.cols - 1, entries)
    }

    /// `tᵀ · self · t` for an integer base change `t`.
    pub fn congruent_transform(&self, t: &ExactMatrix) -> Result<ExactMatrix, MatError> {
        if self.rows != self.cols {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        if t.rows != self.cols {
            return Err(MatError::ShapeMismatch(alloc::format!(
                "congruence: {}x{} vs {}x{}",
                self.rows,
                self.cols,
                t.rows,
                t.cols
            )));
        }
        Ok(t.transpose().mul(&self.mul(t)))
    }

    /// Exact signature (positives minus negatives) of a symmetric matrix,
    /// by recursive symmetric congruence diagonalization over the rationals.
    /// All-zero diagonal blocks are handled by hyperbolic 2x2 splits, each
    /// contributing zero.
    pub fn signature(&self) -> Result<i64, MatError> {
        if !self.is_square() {
            return Err(MatError::NotSquare { rows: self.rows, cols: self.cols });
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Err(MatError::NotSymmetric { row: i, col: j });
                }
            }
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let mut live: Vec<usize> = (0..n).collect();
        let mut sig: i64 = 0;
        while !live.is_empty() {
            // prefer a nonzero diagonal pivot
            if let Some(pos) = live.iter().position(|&i| !a[i][i].is_zero()) {
                let p = live[pos];
                let pivot = a[p][p].clone();
                sig += if pivot.is_positive() { 1 } else { -1 };
                live.remove(pos);
                for (ki, &k) in live.iter().enumerate() {
                    if a[k][p].is_zero() {
                        continue;
                    }
                    let factor = &a[k][p] / &pivot;
                    for &l in live.iter().skip(ki) {
                        let upd = &a[k][l] - &factor * &a[p][l];
                        a[k][l] = upd.clone();
                        a[l][k] = upd;
                    }
                    a[k][p] = BigRational::zero();
                    a[p][k] = BigRational::zero();
                }
                continue;
            }
            // zero diagonal: find an off-diagonal entry; a hyperbolic pair
            // contributes +1 and -1
            let mut pair = None;
            'outer: for (pi, &i) in live.iter().enumerate() {
                for &j in live.iter().skip(pi + 1) {
                    if !a[i][j].is_zero() {
                        pair = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = pair else {
                break; // remaining block is zero
            };
            let c = a[i][j].clone();
            live.retain(|&k| k != i && k != j);
            // eliminate the hyperbolic plane spanned by i, j:
            // v_k' = v_k - (a_jk/c) v_i - (a_ik/c) v_j, which gives
            // a_kl' = a_kl - (a_ik a_jl + a_jk a_il)/c
            let snapshot: Vec<(BigRational, BigRational)> = live
                .iter()
                .map(|&k| (a[i][k].clone(), a[j][k].clone()))
                .collect();
            for (ki, &k) in live.iter().enumerate() {
                for (li, &l) in live.iter().enumerate().skip(ki) {
                    let (ref aik, ref ajk) = snapshot[ki];
                    let (ref ail, ref ajl) = snapshot[li];
                    let upd = &a[k][l] - &((aik * ajl + ajk * ail) / &c);
                    a[k][l] = upd.clone();
                    a[l][k] = upd;
                }
            }
        }
        Ok(sig)
    }
}

impl core::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

/// Smith normal form `u · a · w = diag(d)` with unimodular `u`, `w` and
/// non-negative invariant factors `d`, each dividing the next, zeros last.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub d: Vec<BigInt>,
    pub u: ExactMatrix,
    pub w: ExactMatrix,
}

impl SnfResult {
    /// Invariant factors different from one; their count is the minimal
    /// number of generators of the cokernel.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.d.iter().filter(|x| !x.is_one()).cloned().collect()
    }
}

/// Smith normal form with transformation certificate. Pivoting picks the
/// smallest nonzero absolute value in the remaining block, which keeps
/// intermediate entries small at desk scale.
pub fn snf(a: &ExactMatrix) -> SnfResult {
    let rows = a.rows();
    let cols = a.cols();
    let mut m = a.clone();
    let mut u = ExactMatrix::identity(rows);
    let mut w = ExactMatrix::identity(cols);

    let add_row = |m: &mut ExactMatrix, dst: usize, src: usize, c: &BigInt| {
        for j in 0..m.cols() {
            let t = &m[(src, j)] * c;
            m[(dst, j)] += t;
        }
    };
    let add_col = |m: &mut ExactMatrix, dst: usize, src: usize, c: &BigInt| {
        for i in 0..m.rows() {
            let t = &m[(i, src)] * c;
            m[(i, dst)] += t;
        }
    };
    let swap_rows = |m: &mut ExactMatrix, i: usize, k: usize| {
        for j in 0..m.cols() {
            let tmp = m[(i, j)].clone();
            m[(i, j)] = m[(k, j)].clone();
            m[(k, j)] = tmp;
        }
    };
    let swap_cols = |m: &mut ExactMatrix, j: usize, k: usize| {
        for i in 0..m.rows() {
            let tmp = m[(i, j)].clone();
            m[(i, j)] = m[(i, k)].clone();
            m[(i, k)] = tmp;
        }
    };

    let mut k = 0;
    while k < rows.min(cols) {
        // smallest nonzero |entry| in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if m[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if m[(i, j)].abs() < m[(pi, pj)].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != k {
            swap_rows(&mut m, pi, k);
            swap_rows(&mut u, pi, k);
        }
        if pj != k {
            swap_cols(&mut m, pj, k);
            swap_cols(&mut w, pj, k);
        }

        loop {
            // clear column k
            let mut dirty = false;
            for i in k + 1..rows {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let q = div_round(&m[(i, k)], &m[(k, k)]);
                if !q.is_zero() {
                    let qn = -&q;
                    add_row(&mut m, i, k, &qn);
                    add_row(&mut u, i, k, &qn);
                }
                if !m[(i, k)].is_zero() {
                    // remainder became the new, smaller pivot
                    swap_rows(&mut m, i, k);
                    swap_rows(&mut u, i, k);
                    dirty = true;
                }
            }
            // clear row k
            for j in k + 1..cols {
                if m[(k, j)].is_zero() {
                    continue;
                }
                let q = div_round(&m[(k, j)], &m[(k, k)]);
                if !q.is_zero() {
                    let qn = -&q;
                    add_col(&mut m, j, k, &qn);
                    add_col(&mut w, j, k, &qn);
                }
                if !m[(k, j)].is_zero() {
                    swap_cols(&mut m, j, k);
                    swap_cols(&mut w, j, k);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let mut bad = None;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&m[(i, j)] % &m[(k, k)]).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    add_row(&mut m, k, i, &BigInt::one());
                    add_row(&mut u, k, i, &BigInt::one());
                }
                None => break,
            }
        }
        k += 1;
    }

    // canonicalize: non-negative diagonal
    for i in 0..rows.min(cols) {
        if m[(i, i)].is_negative() {
            for j in 0..cols {
                let v = -&m[(i, j)];
                m[(i, j)] = v;
            }
            for j in 0..rows {
                let v = -&u[(i, j)];
                u[(i, j)] = v;
            }
        }
    }

    let d: Vec<BigInt> = (0..rows.min(cols)).map(|i| m[(i, i)].clone()).collect();

    #[cfg(debug_assertions)]
    {
        let prod = u.mul(&a.mul(&w));
        for i in 0..rows {
            for j in 0..cols {
                let expect = if i == j && i < d.len() { d[i].clone() } else { BigInt::zero() };
                debug_assert_eq!(prod[(i, j)], expect, "snf certificate failed at ({i},{j})");
            }
        }
    }

    SnfResult { d, u, w }
}

/// Rounded division used by the SNF reduction: quotient with remainder of
/// minimal absolute value.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    let two_r = r.abs() * 2u32;
    if two_r > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Does `v` lie in the integer column span of `a`? Decided exactly from the
/// SNF certificate.
pub fn in_image(a: &ExactMatrix, v: &[BigInt]) -> bool {
    assert_eq!(v.len(), a.rows());
    let s = snf(a);
    // a x = v  <=>  diag(d) (w^{-1} x) = u v; solvable iff d_i | (u v)_i and
    // zero rows of diag(d) meet zero entries.
    let uv = s.u.apply(v);
    for (i, val) in uv.iter().enumerate() {
        if i < s.d.len() && !s.d[i].is_zero() {
            if !(val % &s.d[i]).is_zero() {
                return false;
            }
        } else if !val.is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_rows(rows)
    }

    #[test]
    fn snf_identity() {
        let a = ExactMatrix::identity(3);
        let s = snf(&a);
        assert_eq!(s.d, vec![BigInt::one(), BigInt::one(), BigInt::one()]);
        assert_eq!(s.u, ExactMatrix::identity(3));
        assert_eq!(s.w, ExactMatrix::identity(3));
    }

    #[test]
    fn snf_appendix_matrix() {
        // cokernel annihilator generated by 93
        let a = mat(&[vec![12, 3], vec![3, 24]]);
        let s = snf(&a);
        assert_eq!(s.d, vec![BigInt::from(3), BigInt::from(93)]);
        assert!((&s.d[1] % &s.d[0]).is_zero());
        let prod = s.u.mul(&a.mul(&s.w));
        assert_eq!(prod[(0, 0)], BigInt::from(3));
        assert_eq!(prod[(1, 1)], BigInt::from(93));
        assert!(prod[(0, 1)].is_zero() && prod[(1, 0)].is_zero());
        // last invariant factor annihilates the cokernel
        for i in 0..2 {
            let mut v = vec![BigInt::zero(); 2];
            v[i] = BigInt::from(93);
            assert!(in_image(&a, &v));
        }
        // ... and nothing smaller does on the second generator
        let mut v = vec![BigInt::zero(); 2];
        v[1] = BigInt::from(31);
        assert!(!in_image(&a, &v));
    }

    #[test]
    fn snf_zero() {
        let a = ExactMatrix::zero(2, 2);
        let s = snf(&a);
        assert_eq!(s.d, vec![BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            mat(&[vec![12, 3], vec![3, 24]]).determinant().unwrap(),
            BigInt::from(279)
        );
        assert_eq!(ExactMatrix::identity(4).determinant().unwrap(), BigInt::one());
        assert_eq!(
            mat(&[vec![0, 1], vec![1, 0]]).determinant().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(ExactMatrix::zero(0, 0).determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn adjugate_examples() {
        let a = mat(&[vec![12, 3], vec![3, 24]]);
        let adj = a.adjugate().unwrap();
        assert_eq!(adj, mat(&[vec![24, -3], vec![-3, 12]]));
        let prod = a.mul(&adj);
        assert_eq!(prod, ExactMatrix::identity(2).scale(&BigInt::from(279)));
        assert_eq!(
            ExactMatrix::identity(3).adjugate().unwrap(),
            ExactMatrix::identity(3)
        );
        // generic 2x2 cofactor formula
        let g = mat(&[vec![5, -7], vec![2, 9]]);
        assert_eq!(g.adjugate().unwrap(), mat(&[vec![9, 7], vec![-2, 5]]));
        assert!(mat(&[vec![1, 2, 3]]).adjugate().is_err());
    }

    #[test]
    fn signature_examples() {
        assert_eq!(mat(&[vec![1, 0], vec![0, -1]]).signature().unwrap(), 0);
        assert_eq!(mat(&[vec![0, 2], vec![2, 0]]).signature().unwrap(), 0);
        // leading principal minors 2 and 3 are both positive
        assert_eq!(mat(&[vec![2, 1], vec![1, 2]]).signature().unwrap(), 2);
        assert_eq!(ExactMatrix::zero(3, 3).signature().unwrap(), 0);
        assert!(mat(&[vec![0, 1], vec![2, 0]]).signature().is_err());
    }

    #[test]
    fn congruent_transform_swaps_diag() {
        let a = mat(&[vec![1, 0], vec![0, -1]]);
        let t = mat(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            a.congruent_transform(&t).unwrap(),
            mat(&[vec![-1, 0], vec![0, 1]])
        );
        let t2 = mat(&[vec![1, 2], vec![0, 1]]);
        let b = mat(&[vec![12, 3], vec![3, 24]]);
        assert_eq!(
            b.congruent_transform(&t2).unwrap().determinant().unwrap(),
            b.determinant().unwrap()
        );
        let id = ExactMatrix::identity(2);
        assert_eq!(id.congruent_transform(&t2).unwrap(), t2.transpose().mul(&t2));
    }

    /// Jacobi's rule: when all leading principal minors are nonzero, the
    /// signature is the number of sign agreements minus disagreements in the
    /// minor sequence 1, D1, D2, …, Dn.
    fn signature_by_minors(s: &ExactMatrix) -> Option<i64> {
        let n = s.rows();
        let mut prev = BigInt::one();
        let mut sig = 0i64;
        for k in 1..=n {
            let d = s.leading_block(k).determinant().unwrap();
            if d.is_zero() {
                return None;
            }
            sig += if d.sign() == prev.sign() { 1 } else { -1 };
            prev = d;
        }
        Some(sig)
    }

    #[test]
    fn signature_matches_minor_oracle() {
        // fixed examples with nonzero leading minors
        for rows in [
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![2, 1], vec![1, -2]],
            vec![vec![-1, 3], vec![3, 5]],
            vec![vec![3, 1, 0], vec![1, -2, 4], vec![0, 4, 1]],
        ] {
            let m = mat(&rows);
            assert_eq!(
                Some(m.signature().unwrap()),
                signature_by_minors(&m),
                "{rows:?}"
            );
        }
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec(-9i64..=9, n * n).prop_map(move |v| {
            ExactMatrix::new(n, n, v.into_iter().map(BigInt::from).collect())
        })
    }

    fn unimodular(n: usize) -> impl Strategy<Value = ExactMatrix> {
        // product of a few elementary transvections and swaps
        proptest::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 1..6).prop_map(
            move |ops| {
                let mut t = ExactMatrix::identity(n);
                for (i, j, c, swap) in ops {
                    if i == j {
                        continue;
                    }
                    let mut e = ExactMatrix::identity(n);
                    if swap {
                        e[(i, i)] = BigInt::zero();
                        e[(j, j)] = BigInt::zero();
                        e[(i, j)] = BigInt::one();
                        e[(j, i)] = -BigInt::one();
                    } else {
                        e[(i, j)] = BigInt::from(c);
                    }
                    t = t.mul(&e);
                }
                t
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn snf_certificate_holds(a in small_matrix(3)) {
            let s = snf(&a);
            let prod = s.u.mul(&a.mul(&s.w));
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { s.d[i].clone() } else { BigInt::zero() };
                    prop_assert_eq!(&prod[(i, j)], &expect);
                }
            }
            for i in 0..2 {
                if !s.d[i].is_zero() {
                    prop_assert!((&s.d[i + 1] % &s.d[i]).is_zero());
                } else {
                    prop_assert!(s.d[i + 1].is_zero());
                }
                prop_assert!(!s.d[i].is_negative());
            }
            prop_assert!(s.u.determinant().unwrap().abs().is_one());
            prop_assert!(s.w.determinant().unwrap().abs().is_one());
        }

        #[test]
        fn adjugate_identity_holds(a in small_matrix(4)) {
            let adj = a.adjugate().unwrap();
            let det = a.determinant().unwrap();
            let prod = a.mul(&adj);
            prop_assert_eq!(prod, ExactMatrix::identity(4).scale(&det));
        }

        #[test]
        fn signature_agrees_with_minors(a in small_matrix(4)) {
            let s = a.add(&a.transpose());
            if let Some(by_minors) = signature_by_minors(&s) {
                prop_assert_eq!(s.signature().unwrap(), by_minors);
            }
        }

        #[test]
        fn signature_congruence_invariant(a in small_matrix(4), t in unimodular(4)) {
            let s = a.add(&a.transpose()); // symmetric
            let sig = s.signature().unwrap();
            let moved = s.congruent_transform(&t).unwrap();
            prop_assert_eq!(moved.signature().unwrap(), sig);
        }

        #[test]
        fn snf_last_factor_annihilates(a in small_matrix(3)) {
            let det = a.determinant().unwrap();
            prop_assume!(!det.is_zero());
            let s = snf(&a);
            let last = s.d.last().unwrap().clone();
            for i in 0..3 {
                let mut v = vec![BigInt::zero(); 3];
                v[i] = last.clone();
                prop_assert!(in_image(&a, &v));
            }
        }
    }
}
