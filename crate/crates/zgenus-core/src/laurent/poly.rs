//! Integer Laurent polynomials.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactmat::ExactMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LaurentError {
    /// `det(t·V - Vᵀ)` does not evaluate to ±1 at t = 1, so the input cannot
    /// be the Seifert matrix of a knot.
    NotSeifert { at_one: BigInt },
    NotSquare { rows: usize, cols: usize },
    /// A congruence result was required to lie in Λ but has a genuine
    /// (1-t)-denominator left.
    NotInLambda,
    NotHermitian { row: usize, col: usize },
}

impl fmt::Display for LaurentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaurentError::NotSeifert { at_one } => write!(
                f,
                "det(t*V - V^T) evaluates to {at_one} at t = 1 (expected +-1); \
                 not a knot Seifert matrix"
            ),
            LaurentError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, expected square")
            }
            LaurentError::NotInLambda => {
                write!(f, "result does not lie in Z[t,1/t] (denominator (1-t) remains)")
            }
            LaurentError::NotHermitian { row, col } => {
                write!(f, "matrix is not Hermitian at ({row},{col})")
            }
        }
    }
}

/// Laurent polynomial with integer coefficients, stored as a sparse
/// exponent -> coefficient map with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c.into())
    }

    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let c: BigInt = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// Build from a (exponent, coefficient) list.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p.add_term(e, &BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, exp: i64, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Exponent span max - min; 0 for constants and for the zero polynomial.
    pub fn degree_span(&self) -> i64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, &(-c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    pub fn mul_monomial(&self, exp: i64, coeff: &BigInt) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(e + exp, &(c * coeff));
        }
        out
    }

    /// The ring involution t -> 1/t.
    pub fn involute(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.involute()
    }

    /// Exact evaluation at t = 1 or t = -1.
    pub fn eval_at_pm1(&self, sign: i8) -> BigInt {
        assert!(sign == 1 || sign == -1);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            if sign == 1 || e.rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    /// Substitute t -> t^w. For w = 0 this is the constant p(1).
    pub fn substitute_power(&self, w: i64) -> Self {
        if w == 0 {
            return Self::constant(self.eval_at_pm1(1));
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e * w, c.clone())).collect(),
        }
    }

    /// Units of Λ are exactly ±t^k; returns (sign, k) when `self` is one.
    pub fn as_unit(&self) -> Option<(i8, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some((1, *e))
        } else if (-c).is_one() {
            Some((-1, *e))
        } else {
            None
        }
    }

    pub fn is_unit(&self) -> bool {
        self.as_unit().is_some()
    }

    /// Dense coefficient vector shifted so the lowest exponent sits at
    /// index 0; returns (shift, coefficients).
    fn to_dense(&self) -> (i64, Vec<BigInt>) {
        if self.is_zero() {
            return (0, Vec::new());
        }
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        let mut v = alloc::vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(shift: i64, v: &[BigInt]) -> Self {
        let mut p = Self::zero();
        for (i, c) in v.iter().enumerate() {
            p.add_term(shift + i as i64, c);
        }
        p
    }

    /// Exact division in Λ: returns `self / d` when the division leaves no
    /// remainder, `None` otherwise.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (s_lo, mut num) = self.to_dense();
        let (d_lo, den) = d.to_dense();
        if num.len() < den.len() {
            return None;
        }
        let lead = den.last().unwrap();
        let qlen = num.len() - den.len() + 1;
        let mut q = alloc::vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = num[k + den.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            if !(&top % lead).is_zero() {
                return None;
            }
            let c = &top / lead;
            for (i, dc) in den.iter().enumerate() {
                let sub = dc * &c;
                num[k + i] -= sub;
            }
            q[k] = c;
        }
        if num.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::from_dense(s_lo - d_lo, &q))
    }

    /// Does the cyclotomic polynomial `Φ_{2^a} = t^{2^{a-1}} + 1` divide
    /// `self`? Used to detect Alexander roots among 2-power roots of unity.
    pub fn divisible_by_cyclotomic_pow2(&self, a: u32) -> bool {
        assert!(a >= 1);
        let phi = if a == 1 {
            LaurentPoly::from_terms(&[(0, 1), (1, 1)])
        } else {
            LaurentPoly::from_terms(&[(0, 1), (1i64 << (a - 1), 1)])
        };
        self.div_exact(&phi).is_some()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text form, compatible with the CLI grammar: terms like `3`,
/// `t^2`, `-2*t^-1`, written from lowest to highest exponent.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one();
            match (*e, unit_coeff) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{e}")?,
                (_, false) => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

/// The Alexander polynomial of the knot with Seifert matrix `v`:
/// `det(t·v - vᵀ)` normalized by a unit ±t^k to be symmetric under the
/// involution with value 1 at t = 1.
pub fn alexander_from_seifert(v: &ExactMatrix) -> Result<LaurentPoly, LaurentError> {
    if !v.is_square() {
        return Err(LaurentError::NotSquare { rows: v.rows(), cols: v.cols() });
    }
    let n = v.rows();
    let m = seifert_characteristic_matrix(v);
    let det = m.determinant();
    let at_one = det.eval_at_pm1(1);
    if !at_one.abs().is_one() {
        return Err(LaurentError::NotSeifert { at_one });
    }
    // involute(det) = (-1)^n t^-n det for any square v, so for even n the
    // unique symmetric representative with value +1 at t = 1 is
    // sign(det(1)) * t^(-n/2) * det.
    if n % 2 != 0 {
        return Err(LaurentError::NotSeifert { at_one });
    }
    let sign = if at_one.is_one() { BigInt::one() } else { -BigInt::one() };
    let normalized = det.mul_monomial(-(n as i64) / 2, &sign);
    debug_assert!(normalized.is_symmetric());
    debug_assert!(normalized.eval_at_pm1(1).is_one());
    Ok(normalized)
}

/// The Λ-matrix `t·v - vᵀ`.
pub(crate) fn seifert_characteristic_matrix(v: &ExactMatrix) -> super::LambdaMatrix {
    let n = v.rows();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut p = LaurentPoly::monomial(1, v[(i, j)].clone());
            p.add_term(0, &(-&v[(j, i)]));
            entries.push(p);
        }
    }
    super::LambdaMatrix::new(n, entries)
}
