//! Normalization of Hermitian presentation matrices over Λ.
//!
//! Given a Hermitian matrix `A(t)` whose value `A(1)` is unimodular and
//! indefinite, produce a base change over Λ₀ with unit determinant that
//! turns `A(t)` into a Hermitian Λ-matrix `B(t)` with `B(1)` diagonal with
//! ±1 entries and unchanged signature. The even case is reduced to the odd
//! case by splitting a hyperbolic plane off `A(1)` over the integers and
//! applying one of two localized row operations; the odd case is a plain
//! integer diagonalization. Every step returns a certificate that is
//! re-verified symbolically.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactmat::{snf, ExactMatrix, MatError};
use crate::laurent::{
    HermitianLambdaMatrix, Lambda0Matrix, Lambda0Scalar, LambdaMatrix, LaurentError, LaurentPoly,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlanchError {
    NotUnimodular(BigInt),
    /// `A(1)` definite: outside the normalization hypothesis.
    Definite,
    NotEven,
    NotOdd,
    SizeExceeded { size: usize, bound: usize },
    /// Vector search budget exhausted; reported, never looped on.
    SearchBudget { examined: u64 },
    /// A definite value that is not diagonalizable over the integers.
    DefiniteNotDiagonalizable,
    /// A congruence result failed to land in Λ; indicates an internal bug.
    NotInLambda,
    CertificateMismatch(String),
    Mat(MatError),
    Laurent(LaurentError),
}

impl fmt::Display for BlanchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlanchError::NotUnimodular(d) => {
                write!(f, "value at t=1 has determinant {d}, expected +-1")
            }
            BlanchError::Definite => write!(f, "value at t=1 is definite"),
            BlanchError::NotEven => write!(f, "matrix is not even"),
            BlanchError::NotOdd => write!(f, "matrix is not odd"),
            BlanchError::SizeExceeded { size, bound } => {
                write!(f, "size {size} exceeds the search bound {bound}")
            }
            BlanchError::SearchBudget { examined } => {
                write!(f, "vector search budget exhausted after {examined} candidates")
            }
            BlanchError::DefiniteNotDiagonalizable => {
                write!(f, "definite value is not diagonalizable over the integers")
            }
            BlanchError::NotInLambda => {
                write!(f, "congruence result left Z[t,1/t]; internal error")
            }
            BlanchError::CertificateMismatch(msg) => write!(f, "certificate mismatch: {msg}"),
            BlanchError::Mat(e) => write!(f, "{e}"),
            BlanchError::Laurent(e) => write!(f, "{e}"),
        }
    }
}

impl From<MatError> for BlanchError {
    fn from(e: MatError) -> Self {
        BlanchError::Mat(e)
    }
}

impl From<LaurentError> for BlanchError {
    fn from(e: LaurentError) -> Self {
        BlanchError::Laurent(e)
    }
}

/// Size cap for the integer vector searches.
pub const SIZE_BOUND: usize = 8;

const VECTOR_BUDGET: u64 = 20_000_000;
const MAX_RADIUS: i64 = 40;

/// Parity of a symmetric integer matrix: even iff every diagonal entry is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

pub fn parity(s: &ExactMatrix) -> Result<Parity, BlanchError> {
    if !s.is_symmetric() {
        return Err(BlanchError::Mat(MatError::NotSymmetric { row: 0, col: 0 }));
    }
    for i in 0..s.rows() {
        if s[(i, i)].is_odd() {
            return Ok(Parity::Odd);
        }
    }
    Ok(Parity::Even)
}

/// Certificate for the full normalization: `b = conj(t)ᵀ·a·t` exactly over
/// Λ₀ with the result in Λ, `det_t` a unit ±t^k, `b(1)` diagonal with ±1
/// entries, and the signature of the value at 1 preserved.
#[derive(Debug, Clone)]
pub struct NormalizationCertificate {
    pub b: HermitianLambdaMatrix,
    pub t: Lambda0Matrix,
    pub det_t: LaurentPoly,
}

impl NormalizationCertificate {
    /// Re-verify every invariant against the original matrix.
    pub fn verify(&self, a: &HermitianLambdaMatrix) -> Result<(), BlanchError> {
        let recomputed = a
            .matrix()
            .congruence(&self.t)
            .to_lambda()
            .map_err(|_| BlanchError::NotInLambda)?;
        if &recomputed != self.b.matrix() {
            return Err(BlanchError::CertificateMismatch(String::from(
                "b != conj(t)^T a t",
            )));
        }
        if !self.det_t.is_unit() {
            return Err(BlanchError::CertificateMismatch(String::from(
                "det_t is not a unit of the Laurent ring",
            )));
        }
        let det = self.t.determinant();
        if det != Lambda0Scalar::from(self.det_t.clone()) {
            return Err(BlanchError::CertificateMismatch(String::from(
                "stored det_t differs from det(t)",
            )));
        }
        let b1 = self.b.eval_at_pm1(1);
        for i in 0..b1.rows() {
            for j in 0..b1.cols() {
                if i == j {
                    if !b1[(i, j)].clone().abs().is_one() {
                        return Err(BlanchError::CertificateMismatch(String::from(
                            "b(1) diagonal entry is not +-1",
                        )));
                    }
                } else if !b1[(i, j)].is_zero() {
                    return Err(BlanchError::CertificateMismatch(String::from(
                        "b(1) is not diagonal",
                    )));
                }
            }
        }
        let sig_a = a.eval_at_pm1(1).signature()?;
        let sig_b = b1.signature()?;
        if sig_a != sig_b {
            return Err(BlanchError::CertificateMismatch(String::from(
                "signature changed",
            )));
        }
        Ok(())
    }

    /// Counts of +1 and -1 entries on the diagonal of b(1).
    pub fn sign_counts(&self) -> (usize, usize) {
        let b1 = self.b.eval_at_pm1(1);
        let mut pos = 0;
        let mut neg = 0;
        for i in 0..b1.rows() {
            if b1[(i, i)].is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        (pos, neg)
    }
}

/// Enumerate integer vectors by growing sup-norm shells, lexicographically
/// within a shell, first nonzero coordinate positive. The callback returns
/// `Some(r)` to stop with a result. Errors when the budget runs out.
fn search_vectors<T>(
    n: usize,
    mut visit: impl FnMut(&[i64]) -> Option<T>,
) -> Result<T, BlanchError> {
    let mut examined: u64 = 0;
    for radius in 1..=MAX_RADIUS {
        let mut v = vec![-radius; n];
        'outer: loop {
            // only the current shell (sup-norm == radius), canonical sign
            let on_shell = v.iter().any(|&c| c.abs() == radius);
            let sign_canonical = v.iter().find(|&&c| c != 0).map(|&c| c > 0).unwrap_or(false);
            if on_shell && sign_canonical {
                examined += 1;
                if examined > VECTOR_BUDGET {
                    return Err(BlanchError::SearchBudget { examined });
                }
                if let Some(r) = visit(&v) {
                    return Ok(r);
                }
            }
            // next vector in lex order
            for i in (0..n).rev() {
                if v[i] < radius {
                    v[i] += 1;
                    continue 'outer;
                }
                v[i] = -radius;
            }
            break;
        }
    }
    Err(BlanchError::SearchBudget { examined })
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

fn quadratic_value(s: &ExactMatrix, v: &[BigInt]) -> BigInt {
    let sv = s.apply(v);
    v.iter().zip(&sv).map(|(a, b)| a * b).sum()
}

fn is_primitive(v: &[i64]) -> bool {
    let mut g = 0i64;
    for &c in v {
        g = num_integer::gcd(g, c);
    }
    g == 1
}

/// Integer kernel basis of the full-rank k x n matrix `r`, as the trailing
/// columns of the right SNF certificate.
fn kernel_basis(r: &ExactMatrix) -> Vec<Vec<BigInt>> {
    let k = r.rows();
    let n = r.cols();
    let s = snf(r);
    let rank = s.d.iter().filter(|d| !d.is_zero()).count();
    debug_assert_eq!(rank, k, "kernel_basis expects full row rank");
    let mut basis = Vec::with_capacity(n - rank);
    for j in rank..n {
        let col = s.w.column(j);
        debug_assert!(r.apply(&col).iter().all(|x| x.is_zero()));
        basis.push(col);
    }
    basis
}

fn columns_to_matrix(n: usize, cols: &[Vec<BigInt>]) -> ExactMatrix {
    let mut m = ExactMatrix::zero(n, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = col[i].clone();
        }
    }
    m
}

fn check_unimodular(m: &ExactMatrix) -> Result<(), BlanchError> {
    let det = m.determinant()?;
    if det.clone().abs().is_one() {
        Ok(())
    } else {
        Err(BlanchError::CertificateMismatch(String::from(
            "assembled base change is not unimodular",
        )))
    }
}

/// Split a hyperbolic plane off an even, unimodular, indefinite form:
/// returns unimodular `u` with `uᵀ·s·u = [[0,1],[1,0]] ⊕ R`. Found by a
/// bounded search for a primitive isotropic vector plus a dual partner and
/// the orthogonal complement.
pub fn split_hyperbolic(s: &ExactMatrix) -> Result<ExactMatrix, BlanchError> {
    let n = s.rows();
    precheck_square_symmetric(s)?;
    if n > SIZE_BOUND {
        return Err(BlanchError::SizeExceeded { size: n, bound: SIZE_BOUND });
    }
    let det = s.determinant()?;
    if !det.clone().abs().is_one() {
        return Err(BlanchError::NotUnimodular(det));
    }
    if parity(s)? != Parity::Even {
        return Err(BlanchError::NotOdd); // odd input: wrong entry point
    }
    let sig = s.signature()?;
    if sig.unsigned_abs() as usize == n {
        return Err(BlanchError::Definite);
    }

    let v = search_vectors(n, |cand| {
        if !is_primitive(cand) {
            return None;
        }
        let vb = to_big(cand);
        if quadratic_value(s, &vb).is_zero() {
            Some(vb)
        } else {
            None
        }
    })?;

    // dual partner: vᵀ·s·w = 1, then make its norm zero
    let row = {
        let sv = s.apply(&v); // s symmetric: vᵀs = (s v)ᵀ
        ExactMatrix::new(1, n, sv)
    };
    let sr = snf(&row);
    debug_assert!(sr.d[0].is_one(), "unimodular form and primitive v force gcd 1");
    // row · w_cert · e1 = u^{-1} d e1 with d = 1
    let u_scalar = sr.u[(0, 0)].clone(); // ±1
    let mut w = sr.w.column(0);
    if !u_scalar.is_one() {
        for c in &mut w {
            *c = -&*c;
        }
    }
    {
        let val: BigInt = row.apply(&w).remove(0);
        debug_assert!(val.is_one());
    }
    let w_norm = quadratic_value(s, &w);
    debug_assert!(w_norm.is_even(), "even form");
    let half = &w_norm / BigInt::from(2);
    for i in 0..n {
        let t = &half * &v[i];
        w[i] -= t;
    }
    debug_assert!(quadratic_value(s, &w).is_zero());

    // complement: kernel of the 2 x n pairing matrix
    let mut rows = s.apply(&v);
    rows.extend(s.apply(&w));
    let pairings = ExactMatrix::new(2, n, rows);
    let comp = kernel_basis(&pairings);
    let mut cols = vec![v, w];
    cols.extend(comp);
    let u = columns_to_matrix(n, &cols);
    check_unimodular(&u)?;
    let moved = s.congruent_transform(&u)?;
    // verify the H-corner
    let ok = moved[(0, 0)].is_zero()
        && moved[(1, 1)].is_zero()
        && moved[(0, 1)].is_one()
        && (2..n).all(|j| moved[(0, j)].is_zero() && moved[(1, j)].is_zero());
    if !ok {
        return Err(BlanchError::CertificateMismatch(String::from(
            "hyperbolic split verification failed",
        )));
    }
    Ok(u)
}

fn precheck_square_symmetric(s: &ExactMatrix) -> Result<(), BlanchError> {
    if !s.is_square() {
        return Err(BlanchError::Mat(MatError::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        }));
    }
    if !s.is_symmetric() {
        return Err(BlanchError::Mat(MatError::NotSymmetric { row: 0, col: 0 }));
    }
    Ok(())
}

/// Diagonalize an odd, unimodular, indefinite form over the integers:
/// unimodular `u` with `uᵀ·s·u = diag(±1, …)`, +1 entries first. The inner
/// worker also serves definite diagonalizable values.
pub fn diagonalize_odd_indefinite(s: &ExactMatrix) -> Result<ExactMatrix, BlanchError> {
    let n = s.rows();
    precheck_square_symmetric(s)?;
    if n > SIZE_BOUND {
        return Err(BlanchError::SizeExceeded { size: n, bound: SIZE_BOUND });
    }
    let det = s.determinant()?;
    if !det.clone().abs().is_one() {
        return Err(BlanchError::NotUnimodular(det));
    }
    if parity(s)? != Parity::Odd {
        return Err(BlanchError::NotEven);
    }
    if s.signature()?.unsigned_abs() as usize == n && n > 0 {
        return Err(BlanchError::Definite);
    }
    let u = diagonalize_unimodular(s)?;
    Ok(sort_signs(s, u))
}

/// Worker: peel off norm-±1 vectors whose complement stays odd (or empty),
/// recursing on the complement.
fn diagonalize_unimodular(s: &ExactMatrix) -> Result<ExactMatrix, BlanchError> {
    let n = s.rows();
    if n == 0 {
        return Ok(ExactMatrix::identity(0));
    }
    let found = search_vectors(n, |cand| {
        let vb = to_big(cand);
        let norm = quadratic_value(s, &vb);
        if !norm.clone().abs().is_one() {
            return None;
        }
        // complement of the split Z v ⊕ v^⊥
        let row = ExactMatrix::new(1, n, s.apply(&vb));
        let comp = kernel_basis(&row);
        let comp_mat = columns_to_matrix(n, &comp);
        let gram = comp_mat.transpose().mul(&s.mul(&comp_mat));
        if n > 1 {
            // an even complement cannot reach diag(±1); try the next vector
            match parity(&gram) {
                Ok(Parity::Even) => return None,
                Ok(Parity::Odd) => {}
                Err(_) => return None,
            }
        }
        Some((vb, comp, gram))
    })?;
    let (v, comp, gram) = found;
    let sub = diagonalize_unimodular(&gram)?;
    let comp_mat = columns_to_matrix(n, &comp);
    let tail = comp_mat.mul(&sub);
    let mut cols = vec![v.clone()];
    for j in 0..tail.cols() {
        cols.push(tail.column(j));
    }
    let u = columns_to_matrix(n, &cols);
    check_unimodular(&u)?;
    let moved = s.congruent_transform(&u)?;
    for i in 0..n {
        for j in 0..n {
            let want_unit = i == j;
            if want_unit && !moved[(i, j)].clone().abs().is_one() {
                return Err(BlanchError::CertificateMismatch(String::from(
                    "diagonalization produced a non-unit diagonal entry",
                )));
            }
            if !want_unit && !moved[(i, j)].is_zero() {
                return Err(BlanchError::CertificateMismatch(String::from(
                    "diagonalization left an off-diagonal entry",
                )));
            }
        }
    }
    Ok(u)
}

/// Permute columns of the diagonalizing base change so +1 entries precede
/// -1 entries.
fn sort_signs(s: &ExactMatrix, u: ExactMatrix) -> ExactMatrix {
    let n = s.rows();
    let moved = s.congruent_transform(&u).expect("shape");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| if moved[(i, i)].is_positive() { 0 } else { 1 });
    let mut perm = ExactMatrix::zero(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        perm[(old_col, new_col)] = BigInt::one();
    }
    u.mul(&perm)
}

/// Outcome of the even-to-odd reduction step.
pub struct EvenToOddStep {
    pub c: LambdaMatrix,
    pub t: Lambda0Matrix,
    pub det_t: LaurentPoly,
}

/// Reduce a Hermitian matrix with `a(1) = H ⊕ R` to one with odd value at 1
/// by a Λ₀ base change with unit determinant. Two cases on the parity of
/// `b₁₁(1)` where `a₁₁ = (1-t)(1-1/t)·b₁₁`:
/// even: add 1/(1-t)·row 1 to row 2 (and the conjugate column move), det 1;
/// odd: scale row/column 1 by 1/(1-t) and row/column 2 by (1-1/t), det -1/t.
pub fn even_to_odd(a: &HermitianLambdaMatrix) -> Result<EvenToOddStep, BlanchError> {
    let n = a.size();
    assert!(n >= 2);
    let a1 = a.eval_at_pm1(1);
    // hypothesis: a(1) = H ⊕ R exactly
    let hyp = a1[(0, 0)].is_zero()
        && a1[(1, 1)].is_zero()
        && a1[(0, 1)].is_one()
        && (2..n).all(|j| a1[(0, j)].is_zero() && a1[(1, j)].is_zero());
    if !hyp {
        return Err(BlanchError::CertificateMismatch(String::from(
            "even_to_odd requires the value at 1 to be H ⊕ R",
        )));
    }
    let x = LaurentPoly::from_terms(&[(0, 2), (1, -1), (-1, -1)]); // (1-t)(1-1/t)
    let b11 = a.matrix()[(0, 0)]
        .div_exact(&x)
        .ok_or(BlanchError::NotInLambda)?;
    let b11_odd = b11.eval_at_pm1(1).is_odd();

    let (t, det_t) = if !b11_odd {
        // add 1/(1-1/t) times column 1 to column 2; the conjugate-transposed
        // factor contributes the 1/(1-t) row operation of the proof
        let t = Lambda0Matrix::transvection(n, 0, 1, Lambda0Scalar::inv_one_minus_t_inv());
        (t, LaurentPoly::one())
    } else {
        let mut scalars = vec![Lambda0Scalar::one(); n];
        scalars[0] = Lambda0Scalar::inv_one_minus_t();
        // (1 - 1/t)
        scalars[1] = Lambda0Scalar::from(LaurentPoly::from_terms(&[(0, 1), (-1, -1)]));
        let t = Lambda0Matrix::diagonal(scalars);
        (t, LaurentPoly::monomial(-1, -1))
    };
    let c = a
        .matrix()
        .congruence(&t)
        .to_lambda()
        .map_err(|_| BlanchError::NotInLambda)?;
    let c1 = c.eval_at_pm1(1);
    if parity(&c1)? != Parity::Odd {
        return Err(BlanchError::CertificateMismatch(String::from(
            "even-to-odd step failed to produce an odd value at 1",
        )));
    }
    debug_assert_eq!(t.determinant(), Lambda0Scalar::from(det_t.clone()));
    Ok(EvenToOddStep { c, t, det_t })
}

/// Full normalization pipeline. Requires `a(1)` unimodular and indefinite.
pub fn normalize_blanchfield(
    a: &HermitianLambdaMatrix,
) -> Result<NormalizationCertificate, BlanchError> {
    let n = a.size();
    let s = a.eval_at_pm1(1);
    let det = s.determinant()?;
    if !det.clone().abs().is_one() {
        return Err(BlanchError::NotUnimodular(det));
    }
    if n == 0 || s.signature()?.unsigned_abs() as usize == n {
        return Err(BlanchError::Definite);
    }

    let (t, det_t) = match parity(&s)? {
        Parity::Odd => {
            let u = diagonalize_odd_indefinite(&s)?;
            let det_u = u.determinant()?;
            (
                Lambda0Matrix::from_integer(&u),
                LaurentPoly::constant(det_u),
            )
        }
        Parity::Even => {
            let u0 = split_hyperbolic(&s)?;
            let det_u0 = u0.determinant()?;
            let u0_l = LambdaMatrix::from_integer(&u0);
            let a_split = HermitianLambdaMatrix::new(
                u0_l.conj_transpose().mul(a.matrix()).mul(&u0_l),
            )?;
            let step = even_to_odd(&a_split)?;
            let c1 = step.c.eval_at_pm1(1);
            let u1 = diagonalize_odd_indefinite(&c1)?;
            let det_u1 = u1.determinant()?;
            let t = Lambda0Matrix::from_integer(&u0)
                .mul(&step.t)
                .mul(&Lambda0Matrix::from_integer(&u1));
            let det_t = LaurentPoly::constant(det_u0)
                .mul(&step.det_t)
                .mul(&LaurentPoly::constant(det_u1));
            (t, det_t)
        }
    };

    let b = a
        .matrix()
        .congruence(&t)
        .to_lambda()
        .map_err(|_| BlanchError::NotInLambda)?;
    let b = HermitianLambdaMatrix::new(b)?;
    let cert = NormalizationCertificate { b, t, det_t };
    cert.verify(a)?;
    Ok(cert)
}

/// The signed unknotting report: counts (p, n) of positive and negative
/// diagonal entries of the diagonalized value at 1. A knot whose pairing the
/// input presents can be turned into one with trivial Alexander polynomial
/// by p positive and n negative crossing changes; this library performs no
/// topology, it only reports the counts.
pub fn signed_unknotting_report(
    a: &HermitianLambdaMatrix,
) -> Result<(usize, usize), BlanchError> {
    let n = a.size();
    let s = a.eval_at_pm1(1);
    let det = s.determinant()?;
    if !det.clone().abs().is_one() {
        return Err(BlanchError::NotUnimodular(det));
    }
    if n == 0 {
        return Ok((0, 0));
    }
    let sig = s.signature()?;
    if sig.unsigned_abs() as usize == n {
        // definite: accept only values already diagonalizable over Z
        let u = diagonalize_unimodular(&s).map_err(|e| match e {
            BlanchError::SearchBudget { .. } => BlanchError::DefiniteNotDiagonalizable,
            other => other,
        })?;
        let moved = s.congruent_transform(&u)?;
        let mut pos = 0;
        let mut neg = 0;
        for i in 0..n {
            if moved[(i, i)].is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
        }
        return Ok((pos, neg));
    }
    let cert = normalize_blanchfield(a)?;
    Ok(cert.sign_counts())
}

/// Block sum of two Hermitian presentation matrices with t -> t^w applied
/// to the second summand: the combinator for satellite presentation
/// matrices. The signature at 1 is additive.
pub fn satellite_sum(
    companion: &HermitianLambdaMatrix,
    pattern: &HermitianLambdaMatrix,
    winding: i64,
) -> HermitianLambdaMatrix {
    companion.satellite_sum(pattern, winding)
}

/// Deterministic generator of Hermitian matrices with unimodular indefinite
/// value at 1, built as `conj(T)ᵀ·D·T` for a constant diagonal D of mixed
/// signs and a random unit-determinant T over Λ. Used by the verification
/// suite.
pub fn sample_indefinite_unimodular(seed: u64, size: usize) -> HermitianLambdaMatrix {
    assert!(size >= 2);
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = move || {
        // splitmix64
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let mut d = LambdaMatrix::zero(size);
    for i in 0..size {
        // at least one of each sign
        let sign = if i == 0 {
            1
        } else if i == 1 {
            -1
        } else if next() % 2 == 0 {
            1
        } else {
            -1
        };
        d[(i, i)] = LaurentPoly::constant(sign);
    }
    let mut t = LambdaMatrix::identity(size);
    let ops = 2 + (next() % 4) as usize;
    for _ in 0..ops {
        let i = (next() % size as u64) as usize;
        let mut j = (next() % size as u64) as usize;
        if i == j {
            j = (j + 1) % size;
        }
        let exp = (next() % 3) as i64 - 1;
        let coeff = (next() % 3) as i64 - 1;
        let mut e = LambdaMatrix::identity(size);
        e[(i, j)] = LaurentPoly::from_terms(&[(exp, coeff)]);
        t = t.mul(&e);
        // sprinkle unit scalings t^k on the diagonal
        if next() % 3 == 0 {
            let k = (next() % size as u64) as usize;
            let mut u = LambdaMatrix::identity(size);
            u[(k, k)] = LaurentPoly::monomial(1, 1);
            t = t.mul(&u);
        }
    }
    let m = t.conj_transpose().mul(&d).mul(&t);
    HermitianLambdaMatrix::new(m).expect("construction is Hermitian")
}
