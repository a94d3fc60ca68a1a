//! Scalars of the localization Λ₀ = Z[t, 1/t, 1/(t-1)], stored as
//! `num / (1-t)^k` in canonical form.

use core::fmt;


use super::poly::LaurentPoly;

/// Element of Λ₀ in the canonical form `num / (1-t)^k`: either k = 0, or
/// (1-t) does not divide `num`. The involution is closed on this form since
/// 1/(1-1/t) = -t/(1-t).
#[derive(Clone, PartialEq, Eq)]
pub struct Lambda0Scalar {
    num: LaurentPoly,
    k: u32,
}

fn one_minus_t() -> LaurentPoly {
    LaurentPoly::from_terms(&[(0, 1), (1, -1)])
}

impl Lambda0Scalar {
    pub fn new(num: LaurentPoly, k: u32) -> Self {
        let mut s = Lambda0Scalar { num, k };
        s.canonicalize();
        s
    }

    pub fn zero() -> Self {
        Lambda0Scalar { num: LaurentPoly::zero(), k: 0 }
    }

    pub fn one() -> Self {
        Lambda0Scalar { num: LaurentPoly::one(), k: 0 }
    }

    /// 1/(1-t).
    pub fn inv_one_minus_t() -> Self {
        Lambda0Scalar { num: LaurentPoly::one(), k: 1 }
    }

    /// 1/(1-1/t) = -t/(1-t).
    pub fn inv_one_minus_t_inv() -> Self {
        Lambda0Scalar { num: LaurentPoly::monomial(1, -1), k: 1 }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_power(&self) -> u32 {
        self.k
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        let d = one_minus_t();
        while self.k > 0 {
            match self.num.div_exact(&d) {
                Some(q) => {
                    self.num = q;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Lies in Λ (no denominator left)?
    pub fn is_lambda(&self) -> bool {
        self.k == 0
    }

    pub fn to_lambda(&self) -> Option<LaurentPoly> {
        if self.k == 0 {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.k.max(other.k);
        let d = one_minus_t();
        let mut a = self.num.clone();
        for _ in self.k..k {
            a = a.mul(&d);
        }
        let mut b = other.num.clone();
        for _ in other.k..k {
            b = b.mul(&d);
        }
        Lambda0Scalar::new(a.add(&b), k)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Lambda0Scalar { num: self.num.neg(), k: self.k }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Lambda0Scalar::new(self.num.mul(&other.num), self.k + other.k)
    }

    /// The involution t -> 1/t, using conj(1/(1-t)) = -t/(1-t).
    pub fn involute(&self) -> Self {
        let mut num = self.num.involute();
        if self.k > 0 {
            let minus_t_pow = LaurentPoly::monomial(self.k as i64, if self.k % 2 == 0 { 1 } else { -1 });
            num = num.mul(&minus_t_pow);
        }
        Lambda0Scalar::new(num, self.k)
    }

    /// Multiplicative inverse, defined exactly for the units of Λ₀:
    /// ±t^a (1-t)^b with b ∈ Z.
    pub fn invert(&self) -> Option<Self> {
        // self = num/(1-t)^k with canonical num; invertible iff
        // num = ±t^a (1-t)^m
        let mut m = 0u32;
        let mut core = self.num.clone();
        let d = one_minus_t();
        while let Some(q) = core.div_exact(&d) {
            core = q;
            m += 1;
        }
        let (sign, a) = core.as_unit()?;
        // 1/self = (1-t)^(k-m) * (sign) * t^(-a)
        let unit = LaurentPoly::monomial(-a, sign as i64);
        if self.k >= m {
            let mut num = unit;
            for _ in 0..(self.k - m) {
                num = num.mul(&d);
            }
            Some(Lambda0Scalar::new(num, 0))
        } else {
            Some(Lambda0Scalar::new(unit, m - self.k))
        }
    }
}

impl From<LaurentPoly> for Lambda0Scalar {
    fn from(p: LaurentPoly) -> Self {
        Lambda0Scalar { num: p, k: 0 }
    }
}

impl From<i64> for Lambda0Scalar {
    fn from(c: i64) -> Self {
        Lambda0Scalar { num: LaurentPoly::constant(c), k: 0 }
    }
}

impl fmt::Debug for Lambda0Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Lambda0Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / (1-t)^{}", self.num, self.k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn involution_identity_on_localized_unit() {
        // 1/(1-t) + 1/(1-1/t) = 1, the key identity of the row operation
        let s = Lambda0Scalar::inv_one_minus_t().add(&Lambda0Scalar::inv_one_minus_t_inv());
        assert_eq!(s, Lambda0Scalar::one());
        assert_eq!(
            Lambda0Scalar::inv_one_minus_t().involute(),
            Lambda0Scalar::inv_one_minus_t_inv()
        );
    }

    #[test]
    fn canonical_form_cancels() {
        let d = one_minus_t();
        let s = Lambda0Scalar::new(d.mul(&d), 1);
        assert!(s.is_lambda());
        assert_eq!(s.to_lambda().unwrap(), d);
    }

    #[test]
    fn inversion_of_units() {
        let u = Lambda0Scalar::new(LaurentPoly::monomial(2, -1), 1); // -t^2/(1-t)
        let inv = u.invert().unwrap();
        assert_eq!(u.mul(&inv), Lambda0Scalar::one());
        let nonunit = Lambda0Scalar::from(LaurentPoly::from_terms(&[(0, 1), (1, 1)]));
        assert!(nonunit.invert().is_none());
    }

    fn arb_scalar() -> impl Strategy<Value = Lambda0Scalar> {
        (
            proptest::collection::vec((-3i64..=3, -5i64..=5), 0..4),
            0u32..3,
        )
            .prop_map(|(terms, k)| Lambda0Scalar::new(LaurentPoly::from_terms(&terms), k))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn involution_props(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(a.involute().involute(), a.clone());
            prop_assert_eq!(a.mul(&b).involute(), a.involute().mul(&b.involute()));
            prop_assert_eq!(a.add(&b).involute(), a.involute().add(&b.involute()));
        }

        #[test]
        fn canonical_is_stable(a in arb_scalar()) {
            // adding zero or multiplying by one must not change the form
            prop_assert_eq!(a.add(&Lambda0Scalar::zero()), a.clone());
            prop_assert_eq!(a.mul(&Lambda0Scalar::one()), a);
        }
    }
}
