//! The number-theoretic criterion engine for pairings with at most two
//! cyclic summands: Jacobi symbols, the two-generator presentability test
//! with constructive witnesses, and the derived genus/unknotting
//! obstructions.
//!
//! Notation: a pairing decomposes as (a₁/q₁) ⊕ (a₂/q₂) with q₁ | q₂ odd,
//! gcd(aᵢ, qᵢ) = 1, possibly padded with qᵢ = 1. For u ∈ {±1}, criterion (B)
//! decides whether the pairing is presented by an odd symmetric 2x2 integer
//! matrix of determinant ≡ u (mod 4); criterion (C) carries the witness:
//!
//!   (C1) α odd,
//!   (C2) αγ - β² = (-1)^((q₁q₂-u)/2) · q₂/q₁,
//!   (C3) λ₁²α ≡ a₁ (mod q₁),
//!   (C4) λ₂²α ≡ (-1)^((q₁q₂-u)/2) · a₂ (mod q₂),
//!
//! and the presenting matrix is q₁·[[α,β],[β,γ]].

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::exactmat::ExactMatrix;
use crate::finpair::{
    isometry_search, pairing_from_matrix, CyclicDecomposition, FinitePairing, PairError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Crit2Error {
    BadModulus(i64),
    BadInput(String),
    /// Prime search bound exhausted; a budget failure, never "no witness".
    PrimeBoundExhausted { bound: i64 },
    /// The constructed witness failed re-verification; an internal bug.
    WitnessVerification(String),
    TooManySummands(usize),
    Pairing(PairError),
}

impl fmt::Display for Crit2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Crit2Error::BadModulus(y) => write!(f, "modulus {y} must be odd and positive"),
            Crit2Error::BadInput(msg) => write!(f, "bad criterion input: {msg}"),
            Crit2Error::PrimeBoundExhausted { bound } => {
                write!(f, "prime search bound {bound} exhausted (budget failure)")
            }
            Crit2Error::WitnessVerification(msg) => {
                write!(f, "witness verification failed: {msg}")
            }
            Crit2Error::TooManySummands(n) => write!(
                f,
                "decomposition has {n} summands; the two-generator criterion needs at most 2 \
                 (use the generator-count bound instead)"
            ),
            Crit2Error::Pairing(e) => write!(f, "{e}"),
        }
    }
}

impl From<PairError> for Crit2Error {
    fn from(e: PairError) -> Self {
        Crit2Error::Pairing(e)
    }
}

/// Jacobi symbol (x|y) for odd positive y, by binary reciprocity.
pub fn jacobi(x: i64, y: i64) -> Result<i32, Crit2Error> {
    if y <= 0 || y % 2 == 0 {
        return Err(Crit2Error::BadModulus(y));
    }
    let mut num = x.rem_euclid(y);
    let mut den = y;
    let mut acc = 1i32;
    loop {
        num %= den;
        if num == 0 {
            return Ok(if den == 1 { acc } else { 0 });
        }
        while num % 2 == 0 {
            num /= 2;
            if den % 8 == 3 || den % 8 == 5 {
                acc = -acc;
            }
        }
        if num == 1 {
            return Ok(acc);
        }
        if num % 4 == 3 && den % 4 == 3 {
            acc = -acc;
        }
        core::mem::swap(&mut num, &mut den);
    }
}

fn pow_mod(base: i64, mut exp: i64, m: i64) -> i64 {
    let m128 = m as i128;
    let mut b = (base.rem_euclid(m)) as i128;
    let mut acc: i128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as i64
}

/// Legendre symbol via Euler's criterion; p an odd prime.
fn legendre(x: i64, p: i64) -> i32 {
    let r = x.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Product-of-Legendre-symbols evaluation of the Jacobi symbol; the
/// independent oracle for [`jacobi`].
pub fn jacobi_by_factorization(x: i64, y: i64) -> Result<i32, Crit2Error> {
    if y <= 0 || y % 2 == 0 {
        return Err(Crit2Error::BadModulus(y));
    }
    let mut acc = 1i32;
    for (p, e) in factorize_i64(y) {
        let l = legendre(x, p);
        if l == 0 {
            return Ok(0);
        }
        if e % 2 == 1 {
            acc *= l;
        }
    }
    Ok(acc)
}

pub(crate) fn factorize_i64(mut n: i64) -> Vec<(i64, u32)> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut d = 2i64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Is x a square residue modulo odd q >= 1? Decided by CRT over the prime
/// power factors; q = 1 is always a square.
pub fn is_square_mod(x: i64, q: i64) -> Result<bool, Crit2Error> {
    if q <= 0 || q % 2 == 0 {
        return Err(Crit2Error::BadModulus(q));
    }
    if q == 1 {
        return Ok(true);
    }
    for (p, e) in factorize_i64(q) {
        if !is_square_mod_prime_power(x, p, e) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_square_mod_prime_power(x: i64, p: i64, e: u32) -> bool {
    let pe = p.pow(e);
    let mut r = x.rem_euclid(pe);
    if r == 0 {
        return true;
    }
    let mut j = 0u32;
    while r % p == 0 {
        r /= p;
        j += 1;
    }
    if j >= e {
        return true;
    }
    if j % 2 == 1 {
        return false;
    }
    legendre(r, p) == 1
}

/// A square root of x modulo odd q, when one exists: Tonelli-Shanks at each
/// prime, Hensel lifting to prime powers, CRT recombination.
pub fn sqrt_mod(x: i64, q: i64) -> Result<Option<i64>, Crit2Error> {
    if q <= 0 || q % 2 == 0 {
        return Err(Crit2Error::BadModulus(q));
    }
    if q == 1 {
        return Ok(Some(0));
    }
    let mut root: i64 = 0;
    let mut modulus: i64 = 1;
    for (p, e) in factorize_i64(q) {
        let pe = p.pow(e);
        let Some(r) = sqrt_mod_prime_power(x.rem_euclid(pe), p, e) else {
            return Ok(None);
        };
        root = crt_pair(root, modulus, r, pe);
        modulus *= pe;
    }
    Ok(Some(root))
}

fn crt_pair(r1: i64, m1: i64, r2: i64, m2: i64) -> i64 {
    // m1, m2 coprime
    if m1 == 1 {
        return r2.rem_euclid(m2);
    }
    let m1_inv = mod_inverse_i64(m1.rem_euclid(m2), m2).expect("coprime moduli");
    let m = m1 as i128 * m2 as i128;
    let diff = (r2 - r1).rem_euclid(m2) as i128;
    let add = (m1 as i128) * (diff * m1_inv as i128 % m2 as i128);
    ((r1 as i128 + add).rem_euclid(m)) as i64
}

pub(crate) fn mod_inverse_i64(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (m as i128, a.rem_euclid(m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some((t0.rem_euclid(m as i128)) as i64)
}

fn sqrt_mod_prime_power(x: i64, p: i64, e: u32) -> Option<i64> {
    let pe = p.pow(e);
    let x = x.rem_euclid(pe);
    if x == 0 {
        return Some(0);
    }
    let mut j = 0u32;
    let mut unit = x;
    while unit % p == 0 {
        unit /= p;
        j += 1;
    }
    if j % 2 == 1 {
        return None;
    }
    let rem_e = e - j;
    let r0 = tonelli_shanks(unit % p, p)?;
    // Hensel: lift r with r² ≡ unit (mod p^k) one power at a time
    let mut r = r0;
    let mut pk = p;
    for _ in 1..rem_e {
        let pk_next = pk * p;
        let val =
            ((r as i128 * r as i128 - unit as i128).rem_euclid(pk_next as i128)) as i64;
        let t = val / pk;
        let inv_2r = mod_inverse_i64((2 * r) % p, p).expect("p odd, r a unit");
        let delta = (t % p * inv_2r % p).rem_euclid(p);
        r = (r as i128 + ((p - delta) % p) as i128 * pk as i128).rem_euclid(pk_next as i128)
            as i64;
        debug_assert_eq!(
            (r as i128 * r as i128).rem_euclid(pk_next as i128),
            (unit as i128).rem_euclid(pk_next as i128)
        );
        pk = pk_next;
    }
    // reattach p^(j/2)
    Some((p.pow(j / 2) as i128 * r as i128 % pe as i128) as i64)
}

/// Tonelli-Shanks square root modulo an odd prime.
fn tonelli_shanks(n: i64, p: i64) -> Option<i64> {
    let n = n.rem_euclid(p);
    if n == 0 {
        return Some(0);
    }
    if legendre(n, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(n, (p + 1) / 4, p));
    }
    let mut s = p - 1;
    let mut e = 0u32;
    while s % 2 == 0 {
        s /= 2;
        e += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut b = pow_mod(n, s, p);
    let mut g = pow_mod(z, s, p);
    let mut x = pow_mod(n, (s + 1) / 2, p);
    let mut r = e;
    loop {
        let mut t = b;
        let mut m = 0u32;
        while m < r && t != 1 {
            t = pow_mod(t, 2, p);
            m += 1;
        }
        if m == 0 {
            return Some(x);
        }
        let gs = pow_mod(g, 1 << (r - m - 1), p);
        g = pow_mod(gs, 2, p);
        x = (x as i128 * gs as i128 % p as i128) as i64;
        b = (b as i128 * g as i128 % p as i128) as i64;
        r = m;
    }
}

/// Input for the two-generator presentability criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriterionInput {
    pub a1: i64,
    pub q1: i64,
    pub a2: i64,
    pub q2: i64,
    pub u: i8,
}

impl CriterionInput {
    pub fn new(a1: i64, q1: i64, a2: i64, q2: i64, u: i8) -> Result<Self, Crit2Error> {
        if u != 1 && u != -1 {
            return Err(Crit2Error::BadInput(alloc::format!("u = {u}, expected +-1")));
        }
        for q in [q1, q2] {
            if q <= 0 || q % 2 == 0 {
                return Err(Crit2Error::BadModulus(q));
            }
        }
        if q2 % q1 != 0 {
            return Err(Crit2Error::BadInput(alloc::format!("{q1} does not divide {q2}")));
        }
        let canon = |a: i64, q: i64| -> Result<i64, Crit2Error> {
            if q == 1 {
                return Ok(1); // residue is irrelevant on the trivial summand
            }
            let a = a.rem_euclid(q);
            if num_integer::gcd(a, q) != 1 {
                return Err(Crit2Error::BadInput(alloc::format!(
                    "residue {a} is not coprime to modulus {q}"
                )));
            }
            Ok(a)
        };
        Ok(CriterionInput { a1: canon(a1, q1)?, q1, a2: canon(a2, q2)?, q2, u })
    }

    /// Pad a decomposition of length <= 2 to the (a1,q1,a2,q2) shape.
    pub fn from_decomposition(d: &CyclicDecomposition, u: i8) -> Result<Self, Crit2Error> {
        if d.summands.len() > 2 {
            return Err(Crit2Error::TooManySummands(d.summands.len()));
        }
        // summands are stored in ascending divisibility order; pad on the left
        let mut padded: Vec<(i64, i64)> = Vec::with_capacity(2);
        for _ in d.summands.len()..2 {
            padded.push((1, 1));
        }
        for s in &d.summands {
            padded.push((big_to_i64(&s.residue)?, big_to_i64(&s.modulus)?));
        }
        CriterionInput::new(padded[0].0, padded[0].1, padded[1].0, padded[1].1, u)
    }

    /// (-1)^((q1·q2 - u)/2) as ±1.
    pub fn sign(&self) -> i64 {
        let exp = (self.q1 * self.q2 - self.u as i64) / 2;
        if exp % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn diagonal_pairing(&self) -> FinitePairing {
        let mut summands = Vec::new();
        if self.q1 > 1 {
            summands.push((BigInt::from(self.q1), BigInt::from(self.a1)));
        }
        if self.q2 > 1 {
            summands.push((BigInt::from(self.q2), BigInt::from(self.a2)));
        }
        FinitePairing::from_cyclic(&summands)
    }
}

fn big_to_i64(x: &BigInt) -> Result<i64, Crit2Error> {
    use num_traits::ToPrimitive;
    x.to_i64()
        .ok_or_else(|| Crit2Error::BadInput(String::from("value exceeds machine range")))
}

/// Criterion (B): (B1) the sign-adjusted product a₁a₂ is a square residue
/// modulo q₁, and (B2) u = 1, or q₁q₂ ≡ 3 (mod 4), or (a₂ | q₂/q₁) = 1.
pub fn criterion_b(input: &CriterionInput) -> Result<bool, Crit2Error> {
    let s = input.sign();
    let b1 = is_square_mod(s * input.a1 % input.q1 * input.a2 % input.q1, input.q1)?;
    if !b1 {
        return Ok(false);
    }
    let b2 = input.u == 1
        || (input.q1 * input.q2) % 4 == 3
        || jacobi(input.a2, input.q2 / input.q1)? == 1;
    Ok(b2)
}

/// Witness for criterion (C); all four conditions are machine-checkable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CWitness {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub lambda1: i64,
    pub lambda2: i64,
}

impl CWitness {
    /// Check (C1)-(C4) against the input.
    pub fn verify(&self, input: &CriterionInput) -> Result<(), Crit2Error> {
        let s = input.sign();
        if self.alpha % 2 == 0 {
            return Err(Crit2Error::WitnessVerification(String::from("(C1): alpha is even")));
        }
        let qq = input.q2 / input.q1;
        let lhs = self
            .alpha
            .checked_mul(self.gamma)
            .and_then(|ag| ag.checked_sub(self.beta.checked_mul(self.beta)?))
            .ok_or_else(|| Crit2Error::WitnessVerification(String::from("(C2): overflow")))?;
        if lhs != s * qq {
            return Err(Crit2Error::WitnessVerification(alloc::format!(
                "(C2): alpha*gamma - beta^2 = {lhs}, expected {}",
                s * qq
            )));
        }
        if input.q1 > 1 {
            let c3 = (self.lambda1 as i128 * self.lambda1 as i128 % input.q1 as i128
                * self.alpha as i128)
                .rem_euclid(input.q1 as i128) as i64;
            if c3 != input.a1.rem_euclid(input.q1) {
                return Err(Crit2Error::WitnessVerification(String::from("(C3) failed")));
            }
        }
        if input.q2 > 1 {
            let rhs4 = (s * input.a2).rem_euclid(input.q2);
            let c4 = (self.lambda2 as i128 * self.lambda2 as i128 % input.q2 as i128
                * self.alpha as i128)
                .rem_euclid(input.q2 as i128) as i64;
            if c4 != rhs4 {
                return Err(Crit2Error::WitnessVerification(String::from("(C4) failed")));
            }
        }
        Ok(())
    }
}

/// Deterministic witness construction for inputs with criterion (B) true:
/// scan (σ₁,σ₂) in the fixed order (+,+),(+,-),(-,+),(-,-) and primes
/// p ≡ σ₁·s·a₂ (mod q₂), p ≡ σ₂ (mod 4) ascending; α = σ₁p is accepted once
/// -s·q₂/q₁ is a square mod p. Exhausting the prime bound is a budget
/// failure, never "no witness".
pub fn construct_witness(input: &CriterionInput, prime_bound: i64) -> Result<CWitness, Crit2Error> {
    if !criterion_b(input)? {
        return Err(Crit2Error::BadInput(String::from(
            "construct_witness requires criterion (B) to hold",
        )));
    }
    let s = input.sign();
    let qq = input.q2 / input.q1;

    if input.q2 == 1 {
        // trivial group: all congruences hold mod 1
        let w = CWitness { alpha: 1, beta: 0, gamma: s, lambda1: 1, lambda2: 1 };
        w.verify(input)?;
        return Ok(w);
    }

    let lambda1 = if input.q1 == 1 {
        1
    } else {
        // (C3) with α ≡ s·a₂ (mod q₁): λ₁² ≡ a₁·(s·a₂)^{-1} (mod q₁)
        let sa2 = (s * input.a2).rem_euclid(input.q1);
        let inv = mod_inverse_i64(sa2, input.q1)
            .ok_or_else(|| Crit2Error::WitnessVerification(String::from("s*a2 not a unit")))?;
        let target = (input.a1 as i128 * inv as i128).rem_euclid(input.q1 as i128) as i64;
        sqrt_mod(target, input.q1)?.ok_or_else(|| {
            Crit2Error::WitnessVerification(String::from("(B1) held but no square root found"))
        })?
    };

    for (sigma1, sigma2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
        // p ≡ σ₁·s·a₂ (mod q₂) and p ≡ σ₂ (mod 4)
        let r_q2 = (sigma1 * s % input.q2 * input.a2 % input.q2).rem_euclid(input.q2);
        let r4 = sigma2.rem_euclid(4);
        let modulus = 4 * input.q2;
        let r = crt_pair(r_q2, input.q2, r4, 4);
        let mut p = r;
        if p < 3 {
            p += modulus;
        }
        while p <= prime_bound {
            if is_prime_i64(p) && legendre((-s * qq).rem_euclid(p), p) == 1 {
                let beta = tonelli_shanks((-s * qq).rem_euclid(p), p)
                    .expect("legendre symbol said square");
                let alpha = sigma1 * p;
                // γ = (β² + s·qq)/α, integral since β² ≡ -s·qq (mod p)
                let num = beta * beta + s * qq;
                debug_assert_eq!(num % p, 0);
                let gamma = num / alpha;
                let w = CWitness { alpha, beta, gamma, lambda1, lambda2: 1 };
                w.verify(input)?;
                return Ok(w);
            }
            p += modulus;
        }
    }
    Err(Crit2Error::PrimeBoundExhausted { bound: prime_bound })
}

pub(crate) fn is_prime_i64(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3i64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The presenting matrix `q₁·[[α,β],[β,γ]]` of a verified witness, checked
/// end to end: odd, symmetric, det ≡ u (mod 4), and its cokernel pairing
/// isometric to the input's diagonal pairing.
pub fn matrix_from_witness(
    w: &CWitness,
    input: &CriterionInput,
    iso_budget: u64,
) -> Result<ExactMatrix, Crit2Error> {
    w.verify(input)?;
    let q1 = input.q1;
    let m = ExactMatrix::from_rows(&[
        vec![q1 * w.alpha, q1 * w.beta],
        vec![q1 * w.beta, q1 * w.gamma],
    ]);
    let det = m.determinant().expect("square");
    let expected_det = BigInt::from(input.sign() * input.q1 * input.q2);
    if det != expected_det {
        return Err(Crit2Error::WitnessVerification(alloc::format!(
            "determinant {det}, expected {expected_det}"
        )));
    }
    let four = BigInt::from(4);
    if det.mod_floor(&four) != BigInt::from(input.u as i64).mod_floor(&four) {
        return Err(Crit2Error::WitnessVerification(String::from("det mod 4 mismatch")));
    }
    if (q1 * w.alpha) % 2 == 0 && (q1 * w.gamma) % 2 == 0 {
        return Err(Crit2Error::WitnessVerification(String::from("matrix is even")));
    }
    let target = input.diagonal_pairing();
    let pm = pairing_from_matrix(&m)?;
    match isometry_search(&pm, &target, iso_budget)? {
        Some(_) => {}
        None => {
            return Err(Crit2Error::WitnessVerification(String::from(
                "presented pairing is not isometric to the target",
            )))
        }
    }
    Ok(m)
}

/// The five published obstruction cases for the sesquilinear linking pairing
/// of a double branched cover, evaluated verbatim on (a₁/q₁, a₂/q₂).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cor53Case {
    I,
    II,
    III,
    IV,
    V,
}

impl fmt::Display for Cor53Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cor53Case::I => "i",
            Cor53Case::II => "ii",
            Cor53Case::III => "iii",
            Cor53Case::IV => "iv",
            Cor53Case::V => "v",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cor53Finding {
    pub case: Cor53Case,
    /// algebraic unknotting number is at least 3
    pub ua_ge_3: bool,
    /// Z-slice genus is at least 2
    pub gz_ge_2: bool,
}

/// Evaluate the five cases on a padded decomposition (a₁/q₁) ⊕ (a₂/q₂). The
/// residues are those of the doubled pairing ℓ = 2·lk.
pub fn cor53(d: &CyclicDecomposition) -> Result<Vec<Cor53Finding>, Crit2Error> {
    // u plays no role in the case conditions; +1 reuses input validation
    let input = CriterionInput::from_decomposition(d, 1)?;
    let (a1, q1, a2, q2) = (input.a1, input.q1, input.a2, input.q2);
    let mut out = Vec::new();
    let a1a2_sq = is_square_mod(a1 * a2 % q1, q1)?;
    let neg_a1a2_sq = is_square_mod((-a1 * a2).rem_euclid(q1), q1)?;
    let jac = jacobi(a2, q2 / q1)?;
    // everything is a square mod 1, so padded q = 1 summands never fire
    if q1 % 4 == 1 && !a1a2_sq {
        out.push(Cor53Finding { case: Cor53Case::I, ua_ge_3: true, gz_ge_2: true });
    }
    if q1 % 4 == 3 && q2 % 4 == 3 && !a1a2_sq && jac == -1 {
        out.push(Cor53Finding { case: Cor53Case::II, ua_ge_3: true, gz_ge_2: true });
    }
    if q1 % 4 == 3 && q2 % 4 == 1 && !a1a2_sq {
        out.push(Cor53Finding { case: Cor53Case::III, ua_ge_3: false, gz_ge_2: true });
    }
    if q1 % 4 == 3 && q2 % 4 == 3 && !neg_a1a2_sq {
        out.push(Cor53Finding { case: Cor53Case::IV, ua_ge_3: false, gz_ge_2: true });
    }
    if (q1 * q2) % 4 == 1 && jac == -1 {
        out.push(Cor53Finding { case: Cor53Case::V, ua_ge_3: false, gz_ge_2: true });
    }
    Ok(out)
}

/// Which diagonal parities the exhaustive scan accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleParity {
    /// odd matrices: at least one odd diagonal entry (the theorem's case)
    OddOnly,
    /// even matrices only; diagnostic scans
    EvenOnly,
}

/// Exhaustive independent oracle for the two-generator statement: scan all
/// symmetric 2x2 integer matrices with entries bounded by `entry_bound`,
/// determinant of absolute value |group| and ≡ u (mod 4), and the requested
/// parity; return the first (in a fixed scan order) that presents `p`.
pub fn exhaustive_2x2_oracle(
    p: &FinitePairing,
    u: i8,
    entry_bound: i64,
    parity: OracleParity,
    iso_budget: u64,
) -> Result<Option<ExactMatrix>, Crit2Error> {
    let order = big_to_i64(&p.group_order())?;
    if p.rank() > 2 {
        return Err(Crit2Error::TooManySummands(p.rank()));
    }
    if order > 10_000 {
        return Err(Crit2Error::Pairing(PairError::TooLarge(alloc::format!(
            "oracle group order {order} exceeds 10^4"
        ))));
    }
    // exactly one of ±order is ≡ u (mod 4) since the order is odd
    let det = if order.rem_euclid(4) == (u as i64).rem_euclid(4) {
        order
    } else {
        -order
    };
    debug_assert_eq!(det.rem_euclid(4), (u as i64).rem_euclid(4));
    // target invariant factors padded to length 2 with 1
    let (t1, t2) = match p.rank() {
        0 => (1i64, 1i64),
        1 => (1, big_to_i64(&p.factors()[0])?),
        _ => (big_to_i64(&p.factors()[0])?, big_to_i64(&p.factors()[1])?),
    };

    let a_order = (1..=entry_bound).flat_map(|m| [m, -m]).chain(core::iter::once(0));
    for a in a_order {
        for b in 0..=entry_bound {
            let c_candidates: Vec<i64> = if a == 0 {
                // det = -b²: only when -det is a perfect square
                if b * b != -det {
                    continue;
                }
                (-entry_bound..=entry_bound).collect()
            } else {
                let num = det + b * b;
                if num % a != 0 {
                    continue;
                }
                vec![num / a]
            };
            for c in c_candidates {
                if c.abs() > entry_bound {
                    continue;
                }
                if a != 0 && a * c - b * b != det {
                    continue;
                }
                let odd = a % 2 != 0 || c % 2 != 0;
                match parity {
                    OracleParity::OddOnly if !odd => continue,
                    OracleParity::EvenOnly if odd => continue,
                    _ => {}
                }
                // invariant factors of [[a,b],[b,c]]: gcd of entries, then |det|/gcd
                let d1 = num_integer::gcd(num_integer::gcd(a.abs(), b), c.abs());
                debug_assert!(d1 != 0, "det != 0 forces a nonzero entry");
                let d2 = det.abs() / d1;
                if (d1, d2) != (t1, t2) {
                    continue;
                }
                let m = ExactMatrix::from_rows(&[vec![a, b], vec![b, c]]);
                let pm = pairing_from_matrix(&m)?;
                if isometry_search(&pm, p, iso_budget)?.is_some() {
                    return Ok(Some(m));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(1, 9).unwrap(), 1);
        assert_eq!(jacobi(-1, 7).unwrap(), -1); // (-1|y) = (-1)^((y-1)/2)
        assert_eq!(jacobi(2, 15).unwrap(), 1); // (2|3)(2|5) = (-1)(-1)
        assert_eq!(jacobi(3, 9).unwrap(), 0);
        assert_eq!(jacobi(10, 21).unwrap(), -1);
        assert_eq!(jacobi(5, 1).unwrap(), 1);
        assert!(jacobi(1, 4).is_err());
        assert!(jacobi(1, -3).is_err());
    }

    #[test]
    fn squares_examples() {
        assert!(!is_square_mod(-1, 7).unwrap());
        assert!(is_square_mod(12345, 1).unwrap());
        assert!(is_square_mod(2, 7).unwrap()); // 3² = 2 mod 7
        assert!(is_square_mod(4, 9).unwrap());
        assert!(!is_square_mod(3, 9).unwrap()); // odd valuation
        assert!(is_square_mod(9, 27).unwrap()); // even valuation, unit part 1
        assert!(is_square_mod(0, 15).unwrap());
    }

    #[test]
    fn sqrt_mod_agrees_with_is_square() {
        for q in [1i64, 3, 5, 7, 9, 15, 21, 25, 27, 45, 49, 81, 125] {
            for x in 0..q {
                let has = is_square_mod(x, q).unwrap();
                let root = sqrt_mod(x, q).unwrap();
                assert_eq!(root.is_some(), has, "x={x} q={q}");
                if let Some(r) = root {
                    assert_eq!((r * r).rem_euclid(q), x.rem_euclid(q), "x={x} q={q} r={r}");
                }
            }
        }
    }

    #[test]
    fn criterion_b_examples() {
        let t = CriterionInput::new(1, 1, 1, 1, 1).unwrap();
        assert!(criterion_b(&t).unwrap());
        // (1,3,1,3,-1): sign = -1 and -1 is not a square mod 3
        let f = CriterionInput::new(1, 3, 1, 3, -1).unwrap();
        assert!(!criterion_b(&f).unwrap());
        let g = CriterionInput::new(1, 1, 1, 3, -1).unwrap();
        assert!(criterion_b(&g).unwrap());
    }

    #[test]
    fn witness_trivial_group() {
        let t = CriterionInput::new(1, 1, 1, 1, 1).unwrap();
        let w = construct_witness(&t, 1_000_000).unwrap();
        assert_eq!((w.alpha, w.beta, w.gamma), (1, 0, 1));
        let m = matrix_from_witness(&w, &t, 100_000).unwrap();
        assert_eq!(m, ExactMatrix::identity(2));
        // u = -1 gives diag(1,-1)
        let t2 = CriterionInput::new(1, 1, 1, 1, -1).unwrap();
        let w2 = construct_witness(&t2, 1_000_000).unwrap();
        assert_eq!((w2.alpha, w2.beta, w2.gamma), (1, 0, -1));
        let m2 = matrix_from_witness(&w2, &t2, 100_000).unwrap();
        assert_eq!(m2, ExactMatrix::from_rows(&[vec![1, 0], vec![0, -1]]));
    }

    #[test]
    fn witness_z3_and_z5sq() {
        // (1,1,1,3,-1): sign = +1, witness matrix has det +3 ≡ -1 (mod 4)
        let t = CriterionInput::new(1, 1, 1, 3, -1).unwrap();
        let w = construct_witness(&t, 1_000_000).unwrap();
        assert_eq!(w.alpha * w.gamma - w.beta * w.beta, 3);
        assert_eq!(w.alpha.rem_euclid(2), 1);
        let m = matrix_from_witness(&w, &t, 100_000).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(3));

        // (2,5,2,5,1): (B1) 4 is a square mod 5, (B2) u = 1
        let t2 = CriterionInput::new(2, 5, 2, 5, 1).unwrap();
        assert!(criterion_b(&t2).unwrap());
        let w2 = construct_witness(&t2, 1_000_000).unwrap();
        let m2 = matrix_from_witness(&w2, &t2, 1_000_000).unwrap();
        assert_eq!(m2.determinant().unwrap().abs(), BigInt::from(25));
    }

    #[test]
    fn cor53_examples() {
        use crate::finpair::CyclicSummand;
        let d = CyclicDecomposition {
            summands: vec![
                CyclicSummand { modulus: BigInt::from(3), residue: BigInt::from(1) },
                CyclicSummand { modulus: BigInt::from(3), residue: BigInt::from(1) },
            ],
        };
        let f = cor53(&d).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].case, Cor53Case::IV);
        assert!(f[0].gz_ge_2 && !f[0].ua_ge_3);

        let d2 = CyclicDecomposition {
            summands: vec![
                CyclicSummand { modulus: BigInt::from(5), residue: BigInt::from(2) },
                CyclicSummand { modulus: BigInt::from(5), residue: BigInt::from(1) },
            ],
        };
        let f2 = cor53(&d2).unwrap();
        assert!(f2.iter().any(|x| x.case == Cor53Case::I && x.ua_ge_3 && x.gz_ge_2));

        let trivial = CyclicDecomposition { summands: vec![] };
        assert!(cor53(&trivial).unwrap().is_empty());
    }

    #[test]
    fn cor53_sign_flip_invariant() {
        use crate::finpair::CyclicSummand;
        let cases: [(i64, i64, i64, i64); 5] =
            [(3, 1, 3, 1), (3, 2, 9, 4), (5, 2, 5, 1), (1, 1, 7, 3), (3, 1, 15, 2)];
        for (q1, a1, q2, a2) in cases {
            let mk = |a1: i64, a2: i64| CyclicDecomposition {
                summands: [(q1, a1), (q2, a2)]
                    .iter()
                    .filter(|(q, _)| *q > 1)
                    .map(|&(q, a)| CyclicSummand {
                        modulus: BigInt::from(q),
                        residue: BigInt::from(a.rem_euclid(q)),
                    })
                    .collect(),
            };
            let d = mk(a1, a2);
            let dn = d.negate();
            let f: Vec<_> = cor53(&d).unwrap().iter().map(|x| x.case).collect();
            let fneg: Vec<_> = cor53(&dn).unwrap().iter().map(|x| x.case).collect();
            assert_eq!(f, fneg, "sign flip changed cor53 cases for ({q1},{a1},{q2},{a2})");
        }
    }

    #[test]
    fn oracle_finds_trivial_and_z3() {
        let trivial = FinitePairing::trivial();
        let m = exhaustive_2x2_oracle(&trivial, 1, 5, OracleParity::OddOnly, 10_000)
            .unwrap()
            .unwrap();
        assert_eq!(m, ExactMatrix::identity(2));

        let z3 = FinitePairing::from_cyclic(&[(BigInt::from(3), BigInt::from(1))]);
        let m2 = exhaustive_2x2_oracle(&z3, -1, 10, OracleParity::OddOnly, 10_000)
            .unwrap()
            .unwrap();
        assert_eq!(m2, ExactMatrix::from_rows(&[vec![1, 0], vec![0, 3]]));
    }

    #[test]
    fn oracle_rejects_obstructed() {
        // ℓ = (1/3, 1/3) with u = -1: criterion (B) is false, so the scan
        // over odd matrices must come up empty
        let p = FinitePairing::from_cyclic(&[
            (BigInt::from(3), BigInt::from(1)),
            (BigInt::from(3), BigInt::from(1)),
        ]);
        let res = exhaustive_2x2_oracle(&p, -1, 60, OracleParity::OddOnly, 2_000_000).unwrap();
        assert_eq!(res, None);
    }

    /// Extended equivalence sweep past the verification gate; run with
    /// `cargo test --release -- --ignored`.
    #[test]
    #[ignore = "extended sweep; minutes of runtime"]
    fn equivalence_sweep_extended() {
        for q2 in (1..=39i64).step_by(2) {
            for q1 in (1..=q2).step_by(2) {
                if q2 % q1 != 0 {
                    continue;
                }
                for a1 in (1..=q1).filter(|a| num_integer::gcd(*a, q1) == 1) {
                    for a2 in (1..=q2).filter(|a| num_integer::gcd(*a, q2) == 1) {
                        for u in [1i8, -1] {
                            let input = CriterionInput::new(a1, q1, a2, q2, u).unwrap();
                            if criterion_b(&input).unwrap() {
                                let w = construct_witness(&input, 2_000_000).unwrap();
                                matrix_from_witness(&w, &input, 20_000_000).unwrap_or_else(
                                    |e| panic!("({a1},{q1},{a2},{q2},{u}): {e}"),
                                );
                            } else if q2 <= 33 {
                                let found = exhaustive_2x2_oracle(
                                    &input.diagonal_pairing(),
                                    u,
                                    200,
                                    OracleParity::OddOnly,
                                    20_000_000,
                                )
                                .unwrap();
                                assert!(
                                    found.is_none(),
                                    "unexpected presentation for ({a1},{q1},{a2},{q2},{u})"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn jacobi_oracle_agreement(x in -300i64..=300, y_half in 0i64..150) {
            let y = 2 * y_half + 1;
            prop_assert_eq!(jacobi(x, y).unwrap(), jacobi_by_factorization(x, y).unwrap());
        }

        #[test]
        fn unit_square_invariance(
            q1_idx in 0usize..4,
            mult in 1i64..4,
            a1 in 1i64..30,
            a2 in 1i64..30,
            s in 1i64..15,
            r in 1i64..15,
            u_flag in any::<bool>(),
        ) {
            let q1 = [1i64, 3, 5, 9][q1_idx];
            let q2 = q1 * (2 * mult - 1);
            let u = if u_flag { 1 } else { -1 };
            prop_assume!(num_integer::gcd(a1, q1) == 1 && num_integer::gcd(a2, q2) == 1);
            prop_assume!(num_integer::gcd(s, q1) == 1 && num_integer::gcd(r, q2) == 1);
            let base = CriterionInput::new(a1, q1, a2, q2, u).unwrap();
            let scaled = CriterionInput::new(
                s * s % q1 * a1,
                q1,
                r * r % q2 * a2,
                q2,
                u,
            ).unwrap();
            prop_assert_eq!(criterion_b(&base).unwrap(), criterion_b(&scaled).unwrap());
        }
    }
}
