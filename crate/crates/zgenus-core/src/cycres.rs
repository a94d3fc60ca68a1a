//! Finite cyclotomic quotient rings Z[t]/(m, Φ_p) with the conjugation
//! t -> t^(p-1), and Hermitian pairings on their cyclic modules.
//!
//! Everything here is desk scale: rings are enumerated exhaustively, norm
//! and trace surjectivity are decided by exhaustion, isometries between
//! cyclic Hermitian pairings are found by scanning for a multiplier λ with
//! λ·conj(λ)·v₁ = v₂, and the Gram-Schmidt style diagonalization re-verifies
//! each automorphism by recomputing the Gram matrix. Moduli are restricted
//! to prime powers q^k with q ≠ p; q = p is the ramified case and rejected.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::finpair::QzValue;
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycresError {
    BadPrime(u64),
    /// q = p ramifies: the module order must be coprime with ξ - 1/ξ.
    Ramified { p: u64, q: u64 },
    NotCoprime { p: u64, m: u64 },
    TooLarge { size: u64, budget: u64 },
    NotHermitian,
    Degenerate,
    /// A solution guaranteed by theory was not found by exhaustion; this is
    /// a bug, not a negative answer.
    TheoryViolation(String),
    NonEquivariant { k: u32 },
    NotSymmetric,
}

impl fmt::Display for CycresError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycresError::BadPrime(p) => write!(f, "{p} is not an odd prime"),
            CycresError::Ramified { p, q } => write!(
                f,
                "q = {q} equals p = {p}: the prime ramifies (the module order must be \
                 coprime with the different); rejected"
            ),
            CycresError::NotCoprime { p, m } => {
                write!(f, "modulus {m} is not coprime to p = {p}")
            }
            CycresError::TooLarge { size, budget } => {
                write!(f, "ring of size {size} exceeds the exhaustion budget {budget}")
            }
            CycresError::NotHermitian => write!(f, "matrix is not conj-transpose symmetric"),
            CycresError::Degenerate => write!(f, "pairing is degenerate"),
            CycresError::TheoryViolation(msg) => {
                write!(f, "exhaustive search found no solution required by theory: {msg}")
            }
            CycresError::NonEquivariant { k } => {
                write!(f, "linking table is not equivariant under t^{k}")
            }
            CycresError::NotSymmetric => write!(f, "linking table is not symmetric"),
        }
    }
}

/// The finite ring Z[t]/(m, Φ_p): polynomials of degree < p-1 with
/// coefficients mod m, with conjugation t -> t^(p-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotRing {
    p: u64,
    m: u64,
}

/// Element of a [`QuotRing`]: coefficient vector of length p-1, entries in
/// [0, m).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuotElem {
    coeffs: Vec<u64>,
}

impl QuotRing {
    pub fn new(p: u64, m: u64) -> Result<Self, CycresError> {
        if p < 3 || p % 2 == 0 || !crate::crit2::is_prime_i64(p as i64) {
            return Err(CycresError::BadPrime(p));
        }
        if m < 2 {
            return Err(CycresError::NotCoprime { p, m });
        }
        if m % p == 0 {
            return Err(CycresError::NotCoprime { p, m });
        }
        Ok(QuotRing { p, m })
    }

    /// Constructor for prime power moduli q^k; rejects the ramified q = p.
    pub fn prime_power(p: u64, q: u64, k: u32) -> Result<Self, CycresError> {
        if !crate::crit2::is_prime_i64(q as i64) {
            return Err(CycresError::BadPrime(q));
        }
        if q == p {
            return Err(CycresError::Ramified { p, q });
        }
        let m = q.checked_pow(k).ok_or(CycresError::TooLarge {
            size: u64::MAX,
            budget: u64::MAX,
        })?;
        QuotRing::new(p, m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        (self.p - 1) as usize
    }

    /// |ring| = m^(p-1); None on overflow.
    pub fn size(&self) -> Option<u64> {
        let mut acc: u64 = 1;
        for _ in 0..self.degree() {
            acc = acc.checked_mul(self.m)?;
        }
        Some(acc)
    }

    pub fn zero(&self) -> QuotElem {
        QuotElem { coeffs: vec![0; self.degree()] }
    }

    pub fn one(&self) -> QuotElem {
        self.from_int(1)
    }

    pub fn from_int(&self, c: i64) -> QuotElem {
        let mut e = self.zero();
        e.coeffs[0] = c.rem_euclid(self.m as i64) as u64;
        e
    }

    /// The class of t.
    pub fn t_gen(&self) -> QuotElem {
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> QuotElem {
        assert!(coeffs.len() <= self.degree() + 1);
        // allow a t^(p-1) coefficient and reduce it through Φ_p
        let mut full = vec![0i64; self.p as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            full[i] = c;
        }
        self.reduce_mod_p_cycle(&full)
    }

    /// Reduce a coefficient vector of length p (exponents 0..p-1 mod t^p-1)
    /// through Φ_p: subtract the t^(p-1) coefficient from everything.
    fn reduce_mod_p_cycle(&self, full: &[i64]) -> QuotElem {
        let deg = self.degree();
        let top = full[deg];
        let m = self.m as i64;
        let mut coeffs = Vec::with_capacity(deg);
        for i in 0..deg {
            coeffs.push((full[i] - top).rem_euclid(m) as u64);
        }
        QuotElem { coeffs }
    }

    pub fn add(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        QuotElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.m)
                .collect(),
        }
    }

    pub fn sub(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        QuotElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + self.m - y) % self.m)
                .collect(),
        }
    }

    pub fn neg(&self, a: &QuotElem) -> QuotElem {
        QuotElem {
            coeffs: a.coeffs.iter().map(|x| (self.m - x) % self.m).collect(),
        }
    }

    pub fn mul(&self, a: &QuotElem, b: &QuotElem) -> QuotElem {
        let p = self.p as usize;
        let m = self.m as u128;
        // convolution with exponents folded mod p (t^p = 1)
        let mut full = vec![0u128; p];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                let idx = (i + j) % p;
                full[idx] = (full[idx] + x as u128 * y as u128) % m;
            }
        }
        let as_i64: Vec<i64> = full.iter().map(|&x| x as i64).collect();
        self.reduce_mod_p_cycle(&as_i64)
    }

    pub fn scale(&self, a: &QuotElem, c: i64) -> QuotElem {
        self.mul(a, &self.from_int(c))
    }

    /// Conjugation t -> t^(p-1) = 1/t.
    pub fn conj(&self, a: &QuotElem) -> QuotElem {
        let p = self.p as usize;
        let mut full = vec![0i64; p];
        for (i, &c) in a.coeffs.iter().enumerate() {
            let target = (p - i) % p;
            full[target] += c as i64;
        }
        self.reduce_mod_p_cycle(&full)
    }

    /// N(x) = x·conj(x); lands in the fixed subring.
    pub fn norm(&self, a: &QuotElem) -> QuotElem {
        let n = self.mul(a, &self.conj(a));
        debug_assert_eq!(self.conj(&n), n, "norm must be conjugation-fixed");
        n
    }

    /// T(x) = x + conj(x); lands in the fixed subring.
    pub fn trace(&self, a: &QuotElem) -> QuotElem {
        let t = self.add(a, &self.conj(a));
        debug_assert_eq!(self.conj(&t), t, "trace must be conjugation-fixed");
        t
    }

    pub fn is_zero(&self, a: &QuotElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    /// Unit test: for every prime q | m, the reduction mod q must be coprime
    /// to Φ_p in F_q[t].
    pub fn is_unit(&self, a: &QuotElem) -> bool {
        for (q, _) in crate::crit2::factorize_i64(self.m as i64) {
            let q = q as u64;
            // gcd(a mod q, Φ_p mod q) over F_q, with a lifted to degree < p
            let mut f: Vec<u64> = a.coeffs.iter().map(|&c| c % q).collect();
            let mut phi: Vec<u64> = vec![1; self.p as usize]; // 1 + t + … + t^(p-1)
            if poly_gcd_is_one(&mut f, &mut phi, q) {
                continue;
            }
            return false;
        }
        true
    }

    /// Element with index `idx` in the coefficient-lexicographic enumeration
    /// (the t^0 coefficient varies fastest).
    pub fn element(&self, mut idx: u64) -> QuotElem {
        let mut coeffs = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            coeffs.push(idx % self.m);
            idx /= self.m;
        }
        QuotElem { coeffs }
    }

    pub fn index_of(&self, a: &QuotElem) -> u64 {
        let mut idx = 0u64;
        for &c in a.coeffs.iter().rev() {
            idx = idx * self.m + c;
        }
        idx
    }

    /// Multiplicative inverse by exhaustive scan, if the element is a unit.
    pub fn invert(&self, a: &QuotElem) -> Option<QuotElem> {
        if !self.is_unit(a) {
            return None;
        }
        let size = self.size().expect("desk-scale ring");
        let one = self.one();
        for idx in 0..size {
            let cand = self.element(idx);
            if self.mul(a, &cand) == one {
                return Some(cand);
            }
        }
        None
    }

    /// The conjugation-fixed subring, by exhaustion.
    pub fn fixed_subring(&self, budget: u64) -> Result<Vec<QuotElem>, CycresError> {
        let size = self.size().filter(|&s| s <= budget).ok_or(CycresError::TooLarge {
            size: self.size().unwrap_or(u64::MAX),
            budget,
        })?;
        let mut out = Vec::new();
        for idx in 0..size {
            let e = self.element(idx);
            if self.conj(&e) == e {
                out.push(e);
            }
        }
        Ok(out)
    }

    /// Pretty printer `c0 + c1*t + …` for diagnostics.
    pub fn display(&self, a: &QuotElem) -> String {
        let mut s = String::new();
        let mut first = true;
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                s.push_str(" + ");
            }
            first = false;
            match i {
                0 => s.push_str(&alloc::format!("{c}")),
                1 if c == 1 => s.push('t'),
                1 => s.push_str(&alloc::format!("{c}*t")),
                _ if c == 1 => s.push_str(&alloc::format!("t^{i}")),
                _ => s.push_str(&alloc::format!("{c}*t^{i}")),
            }
        }
        if first {
            s.push('0');
        }
        s
    }
}

impl QuotElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// gcd(f, g) over F_q[t]; true iff it is 1.
fn poly_gcd_is_one(f: &mut Vec<u64>, g: &mut Vec<u64>, q: u64) -> bool {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let inv_mod = |a: u64| -> u64 {
        crate::crit2::mod_inverse_i64(a as i64, q as i64).expect("q prime, a != 0") as u64
    };
    trim(f);
    trim(g);
    while !g.is_empty() {
        // f mod g
        while f.len() >= g.len() && !f.is_empty() {
            let shift = f.len() - g.len();
            let c = (f.last().unwrap() * inv_mod(*g.last().unwrap())) % q;
            for (i, &gc) in g.iter().enumerate() {
                let idx = i + shift;
                f[idx] = (f[idx] + q * q - c * gc % q) % q;
            }
            trim(f);
        }
        core::mem::swap(f, g);
    }
    f.len() == 1 && f[0] != 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrTrace {
    Norm,
    Trace,
}

/// Exhaustive surjectivity check: trace onto the fixed subring, norm onto
/// its units.
pub fn surjectivity_check(
    ring: &QuotRing,
    which: NormOrTrace,
    budget: u64,
) -> Result<bool, CycresError> {
    let size = ring.size().filter(|&s| s <= budget).ok_or(CycresError::TooLarge {
        size: ring.size().unwrap_or(u64::MAX),
        budget,
    })?;
    let fixed = ring.fixed_subring(budget)?;
    let mut images: Vec<QuotElem> = Vec::new();
    for idx in 0..size {
        let e = ring.element(idx);
        let img = match which {
            NormOrTrace::Norm => ring.norm(&e),
            NormOrTrace::Trace => ring.trace(&e),
        };
        images.push(img);
    }
    images.sort();
    images.dedup();
    let targets: Vec<&QuotElem> = match which {
        NormOrTrace::Trace => fixed.iter().collect(),
        NormOrTrace::Norm => fixed.iter().filter(|e| ring.is_unit(e)).collect(),
    };
    Ok(targets.iter().all(|t| images.binary_search(t).is_ok()))
}

/// First λ (in enumeration order) with norm(λ)·mu ≡ 1 modulo the radical of
/// the modulus. Theory guarantees existence for units mu of the fixed
/// subring; failure is reported as a bug.
pub fn solve_norm(ring: &QuotRing, mu: &QuotElem) -> Result<QuotElem, CycresError> {
    if ring.conj(mu) != *mu || !ring.is_unit(mu) {
        return Err(CycresError::TheoryViolation(String::from(
            "solve_norm needs a conjugation-fixed unit",
        )));
    }
    let radical: u64 = crate::crit2::factorize_i64(ring.m as i64)
        .iter()
        .map(|(q, _)| *q as u64)
        .product();
    let size = ring.size().ok_or(CycresError::TooLarge {
        size: u64::MAX,
        budget: u64::MAX,
    })?;
    let one = ring.one();
    for idx in 0..size {
        let lambda = ring.element(idx);
        let val = ring.mul(&ring.norm(&lambda), mu);
        let diff = ring.sub(&val, &one);
        if diff.coeffs.iter().all(|&c| c % radical == 0) {
            return Ok(lambda);
        }
    }
    Err(CycresError::TheoryViolation(String::from(
        "no λ with norm(λ)·mu ≡ 1 modulo the radical",
    )))
}

/// Hermitian Gram matrix over a quotient ring: values ℓ(gᵢ,gⱼ) of a pairing
/// on ⊕ R/(m, Φ_p), stored as ring elements (the numerators over m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermGram {
    ring: QuotRing,
    n: usize,
    entries: Vec<QuotElem>,
}

impl HermGram {
    pub fn new(ring: QuotRing, n: usize, entries: Vec<QuotElem>) -> Result<Self, CycresError> {
        assert_eq!(entries.len(), n * n);
        for i in 0..n {
            for j in 0..n {
                if entries[j * n + i] != ring.conj(&entries[i * n + j]) {
                    return Err(CycresError::NotHermitian);
                }
            }
        }
        Ok(HermGram { ring, n, entries })
    }

    pub fn ring(&self) -> &QuotRing {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &QuotElem {
        &self.entries[i * self.n + j]
    }

    /// Determinant over the quotient ring by Laplace expansion; the pairing
    /// is non-degenerate iff this is a unit.
    pub fn determinant(&self) -> QuotElem {
        fn det_rec(g: &HermGram, rows: &mut Vec<usize>, col: usize) -> QuotElem {
            let ring = &g.ring;
            if col == g.n {
                return ring.one();
            }
            let mut acc = ring.zero();
            for pos in 0..rows.len() {
                let i = rows[pos];
                let e = g.entry(i, col).clone();
                if ring.is_zero(&e) {
                    continue;
                }
                rows.remove(pos);
                let sub = det_rec(g, rows, col + 1);
                rows.insert(pos, i);
                let term = ring.mul(&e, &sub);
                acc = if pos % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            acc
        }
        let mut rows: Vec<usize> = (0..self.n).collect();
        det_rec(self, &mut rows, 0)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.ring.is_unit(&self.determinant())
    }

    /// `conj(U)ᵀ · G · U` for an automorphism given by the matrix of new
    /// generators in terms of old ones (columns).
    pub fn transform(&self, u: &[QuotElem]) -> HermGram {
        let n = self.n;
        assert_eq!(u.len(), n * n);
        let ring = &self.ring;
        let mut out = vec![ring.zero(); n * n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = ring.zero();
                for i in 0..n {
                    for j in 0..n {
                        let term = ring.mul(
                            &ring.mul(&ring.conj(&u[i * n + a]), self.entry(i, j)),
                            &u[j * n + b],
                        );
                        acc = ring.add(&acc, &term);
                    }
                }
                out[a * n + b] = acc;
            }
        }
        HermGram { ring: self.ring.clone(), n, entries: out }
    }
}

/// Does q^(k-1)·v ≠ 0 hold in R/(q^k), i.e. is some coefficient of v not
/// divisible by q? This is the "maximal annihilator depth" condition.
fn has_full_depth(ring: &QuotRing, v: &QuotElem) -> bool {
    let (q, _) = crate::crit2::factorize_i64(ring.m as i64)[0];
    v.coeffs.iter().any(|&c| c % q as u64 != 0)
}

/// Multiplier isometry between two cyclic (1x1) Hermitian pairings over the
/// same ring: a unit λ with λ·conj(λ)·v₁ = v₂, found by exhaustive scan and
/// re-verified. Existence is guaranteed for non-degenerate values; running
/// out of candidates is a theory violation.
pub fn isometry_cyclic(
    ring: &QuotRing,
    v1: &QuotElem,
    v2: &QuotElem,
) -> Result<QuotElem, CycresError> {
    if has_full_depth(ring, v1) != has_full_depth(ring, v2) {
        return Err(CycresError::TheoryViolation(String::from(
            "annihilator depths differ; the values are not even module-isomorphic",
        )));
    }
    let size = ring.size().ok_or(CycresError::TooLarge {
        size: u64::MAX,
        budget: u64::MAX,
    })?;
    for idx in 0..size {
        let lambda = ring.element(idx);
        if !ring.is_unit(&lambda) {
            continue;
        }
        if ring.mul(&ring.norm(&lambda), v1) == *v2 {
            return Ok(lambda);
        }
    }
    Err(CycresError::TheoryViolation(alloc::format!(
        "no multiplier takes {} to {}",
        ring.display(v1),
        ring.display(v2)
    )))
}

/// Desk verification that all non-degenerate cyclic Hermitian pairings on
/// R/(q^k, Φ_p) are pairwise isometric. The ring size budget is 10^4.
pub fn all_pairings_isometric(p: u64, q: u64, k: u32) -> Result<bool, CycresError> {
    const BUDGET: u64 = 10_000;
    let ring = QuotRing::prime_power(p, q, k)?;
    let size = ring.size().filter(|&s| s <= BUDGET).ok_or(CycresError::TooLarge {
        size: ring.size().unwrap_or(u64::MAX),
        budget: BUDGET,
    })?;
    // non-degenerate Hermitian values = conjugation-fixed units
    let mut values = Vec::new();
    for idx in 0..size {
        let e = ring.element(idx);
        if ring.conj(&e) == e && ring.is_unit(&e) {
            values.push(e);
        }
    }
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            match isometry_cyclic(&ring, &values[i], &values[j]) {
                Ok(lambda) => {
                    debug_assert!(ring.is_unit(&lambda));
                }
                Err(CycresError::TheoryViolation(_)) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(true)
}

/// Make the last diagonal entry of a non-degenerate homogeneous Gram matrix
/// reach full depth: swap a good diagonal entry into place, or add a
/// suitable multiple of another generator. The returned automorphism has
/// been applied and verified by recomputation.
pub fn homogeneous_fix(g: &HermGram) -> Result<(HermGram, Vec<QuotElem>), CycresError> {
    let ring = g.ring().clone();
    let n = g.size();
    let last = n - 1;
    let identity = |ring: &QuotRing| -> Vec<QuotElem> {
        let mut u = vec![ring.zero(); n * n];
        for i in 0..n {
            u[i * n + i] = ring.one();
        }
        u
    };
    if has_full_depth(&ring, g.entry(last, last)) {
        let u = identity(&ring);
        return Ok((g.clone(), u));
    }
    // a good diagonal entry elsewhere: swap it to the last slot
    for i in 0..last {
        if has_full_depth(&ring, g.entry(i, i)) {
            let mut u = identity(&ring);
            u[i * n + i] = ring.zero();
            u[last * n + last] = ring.zero();
            u[i * n + last] = ring.one();
            u[last * n + i] = ring.one();
            let moved = g.transform(&u);
            debug_assert!(has_full_depth(&ring, moved.entry(last, last)));
            return Ok((moved, u));
        }
    }
    // no diagonal entry works; find a full-depth off-diagonal entry and mix
    for i in 0..n {
        for j in 0..n {
            if i == j || !has_full_depth(&ring, g.entry(i, j)) {
                continue;
            }
            // arrange the pair as (other, last)
            let (work, pre) = if i == last || j == last {
                (g.clone(), identity(&ring))
            } else {
                let mut u = identity(&ring);
                u[j * n + j] = ring.zero();
                u[last * n + last] = ring.zero();
                u[j * n + last] = ring.one();
                u[last * n + j] = ring.one();
                (g.transform(&u), u)
            };
            let partner = if i == last { j } else { i };
            let size = ring.size().expect("desk scale");
            for lidx in 0..size {
                let lambda = ring.element(lidx);
                // candidate: g_last <- g_last + λ·g_partner
                let mut u = identity(&ring);
                u[partner * n + last] = lambda.clone();
                let moved = work.transform(&u);
                if has_full_depth(&ring, moved.entry(last, last)) {
                    let total = mat_mul(&ring, n, &pre, &u);
                    return Ok((moved, total));
                }
            }
        }
    }
    Err(CycresError::Degenerate)
}

fn mat_mul(ring: &QuotRing, n: usize, a: &[QuotElem], b: &[QuotElem]) -> Vec<QuotElem> {
    let mut out = vec![ring.zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            if ring.is_zero(&a[i * n + k]) {
                continue;
            }
            for j in 0..n {
                let t = ring.mul(&a[i * n + k], &b[k * n + j]);
                out[i * n + j] = ring.add(&out[i * n + j], &t);
            }
        }
    }
    out
}

/// Gram-Schmidt style diagonalization of a non-degenerate Hermitian Gram
/// matrix on a homogeneous module ⊕ R/(q^k, Φ_p). Returns the diagonal Gram
/// and the verified automorphism.
pub fn gram_schmidt_diag(g: &HermGram) -> Result<(HermGram, Vec<QuotElem>), CycresError> {
    let ring = g.ring().clone();
    let n = g.size();
    let mut current = g.clone();
    let mut total: Vec<QuotElem> = {
        let mut u = vec![ring.zero(); n * n];
        for i in 0..n {
            u[i * n + i] = ring.one();
        }
        u
    };
    // clear trailing rows one by one
    for idx in (1..n).rev() {
        // work on the leading (idx+1)-block; trailing entries are already diagonal
        let block_entries: Vec<QuotElem> = {
            let mut v = Vec::with_capacity((idx + 1) * (idx + 1));
            for i in 0..=idx {
                for j in 0..=idx {
                    v.push(current.entry(i, j).clone());
                }
            }
            v
        };
        let block = HermGram::new(ring.clone(), idx + 1, block_entries)?;
        let (fixed_block, u_fix) = homogeneous_fix(&block)?;
        let d = fixed_block.entry(idx, idx).clone();
        let d_inv = ring.invert(&d).ok_or(CycresError::Degenerate)?;
        // g_i <- g_i - λ_i g_idx with λ_i = ℓ(g_idx, g_i)/ℓ(g_idx, g_idx)
        let mut u_clear = vec![ring.zero(); (idx + 1) * (idx + 1)];
        for i in 0..=idx {
            u_clear[i * (idx + 1) + i] = ring.one();
        }
        for i in 0..idx {
            let lambda = ring.mul(fixed_block.entry(idx, i), &d_inv);
            u_clear[idx * (idx + 1) + i] = ring.neg(&lambda);
        }
        let u_block = mat_mul(&ring, idx + 1, &u_fix, &u_clear);
        let cleared = block.transform(&u_block);
        for i in 0..idx {
            if !ring.is_zero(cleared.entry(idx, i)) || !ring.is_zero(cleared.entry(i, idx)) {
                return Err(CycresError::TheoryViolation(String::from(
                    "row clearing failed",
                )));
            }
        }
        // embed the block automorphism into the full size and accumulate
        let mut u_full = vec![ring.zero(); n * n];
        for i in 0..n {
            u_full[i * n + i] = ring.one();
        }
        for i in 0..=idx {
            for j in 0..=idx {
                u_full[i * n + j] = u_block[i * (idx + 1) + j].clone();
            }
        }
        total = mat_mul(&ring, n, &total, &u_full);
        current = g.transform(&total);
    }
    // verify diagonality
    for i in 0..n {
        for j in 0..n {
            if i != j && !ring.is_zero(current.entry(i, j)) {
                return Err(CycresError::TheoryViolation(String::from(
                    "result is not diagonal",
                )));
            }
        }
    }
    Ok((current, total))
}

/// An equivariant symmetric linking table on a finite module with a t-action
/// of order n: cyclic summand orders, images of the generators under t, and
/// the Q/Z Gram matrix of lk on the generators.
#[derive(Debug, Clone)]
pub struct EquivariantLk {
    pub orders: Vec<u64>,
    pub t_action: Vec<Vec<u64>>, // column images of generators
    pub cover_order: u32,
    pub gram: Vec<QzValue>,
}

/// The sesquilinear table ℓ': for each generator pair, the n coefficients of
/// Σ_{k=1..n} t^k · lk(t^k x, y), stored with index k-1.
#[derive(Debug, Clone, PartialEq)]
pub struct SesquilinearTable {
    pub rank: usize,
    pub cover_order: u32,
    pub values: Vec<Vec<QzValue>>, // (i,j) -> n coefficients
}

impl EquivariantLk {
    fn rank(&self) -> usize {
        self.orders.len()
    }

    fn lk(&self, x: &[u64], y: &[u64]) -> QzValue {
        let n = self.rank();
        let mut acc = QzValue::zero();
        for i in 0..n {
            for j in 0..n {
                let c = BigInt::from(x[i]) * BigInt::from(y[j]);
                acc = acc.add(&self.gram[i * n + j].scale(&c));
            }
        }
        acc
    }

    fn apply_t(&self, x: &[u64]) -> Vec<u64> {
        let n = self.rank();
        let mut out = vec![0u64; n];
        for (j, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for i in 0..n {
                out[i] = (out[i] + c * self.t_action[j][i]) % self.orders[i];
            }
        }
        out
    }

    fn generator(&self, i: usize) -> Vec<u64> {
        let mut g = vec![0u64; self.rank()];
        g[i] = 1;
        g
    }

    /// Symmetry, equivariance and t^n = 1, checked on generator pairs
    /// (enough by bilinearity).
    pub fn validate(&self) -> Result<(), CycresError> {
        let r = self.rank();
        for i in 0..r {
            for j in 0..r {
                if self.gram[i * r + j] != self.gram[j * r + i] {
                    return Err(CycresError::NotSymmetric);
                }
            }
        }
        for i in 0..r {
            let mut x = self.generator(i);
            for _ in 0..self.cover_order {
                x = self.apply_t(&x);
            }
            if x != self.generator(i) {
                return Err(CycresError::NonEquivariant { k: self.cover_order });
            }
        }
        for i in 0..r {
            for j in 0..r {
                let ti = self.apply_t(&self.generator(i));
                let tj = self.apply_t(&self.generator(j));
                if self.lk(&ti, &tj) != self.lk(&self.generator(i), &self.generator(j)) {
                    return Err(CycresError::NonEquivariant { k: 1 });
                }
            }
        }
        Ok(())
    }
}

/// (x,y) -> Σ_{k=1..n} t^k · lk(t^k x, y) on generator pairs.
pub fn sesquilinearize(table: &EquivariantLk) -> Result<SesquilinearTable, CycresError> {
    table.validate()?;
    let r = table.rank();
    let n = table.cover_order as usize;
    let mut values = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let mut coeffs = vec![QzValue::zero(); n];
            let mut tx = table.generator(i);
            for k in 1..=n {
                tx = table.apply_t(&tx);
                coeffs[k - 1] = table.lk(&tx, &table.generator(j));
            }
            values.push(coeffs);
        }
    }
    Ok(SesquilinearTable { rank: r, cover_order: table.cover_order, values })
}

/// lk(x,y) = θ(ℓ'(x,y)): the coefficient of t^n = 1.
pub fn recover_lk(table: &SesquilinearTable) -> Vec<QzValue> {
    let n = table.cover_order as usize;
    table.values.iter().map(|coeffs| coeffs[n - 1].clone()).collect()
}
