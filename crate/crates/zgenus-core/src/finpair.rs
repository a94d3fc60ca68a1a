//! Symmetric Q/Z-valued pairings on finite abelian groups.
//!
//! A pairing is carried by the invariant factors q₁ | q₂ | … of its group
//! together with the Gram matrix of values on the corresponding generators.
//! Construction from a symmetric presentation matrix goes through the Smith
//! normal form certificate and the adjugate formula; the orthogonal cyclic
//! decomposition works one prime at a time by symmetric Gauss elimination
//! (2 is invertible since all group orders here are odd).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactmat::{snf, ExactMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairError {
    SingularMatrix,
    EvenOrder(BigInt),
    Degenerate,
    NotSymmetric,
    /// Exhaustive search ran out of its candidate budget; distinct from a
    /// negative answer.
    BudgetExceeded { budget: u64 },
    TooLarge(String),
}

impl fmt::Display for PairError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairError::SingularMatrix => write!(f, "presentation matrix has determinant zero"),
            PairError::EvenOrder(n) => write!(f, "group order {n} is even; odd order required"),
            PairError::Degenerate => write!(f, "pairing is degenerate"),
            PairError::NotSymmetric => write!(f, "matrix is not symmetric"),
            PairError::BudgetExceeded { budget } => {
                write!(f, "isometry search budget of {budget} candidates exceeded")
            }
            PairError::TooLarge(msg) => write!(f, "input too large: {msg}"),
        }
    }
}

/// A value in Q/Z as a reduced fraction with 0 <= num < den.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QzValue {
    num: BigInt,
    den: BigInt,
}

impl fmt::Debug for QzValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for QzValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl QzValue {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero());
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        let num = num.mod_floor(&den);
        let g = num.gcd(&den);
        QzValue { num: &num / &g, den: &den / &g }
    }

    pub fn zero() -> Self {
        QzValue { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Additive order in Q/Z (the reduced denominator).
    pub fn order(&self) -> BigInt {
        self.den.clone()
    }

    pub fn add(&self, other: &Self) -> Self {
        QzValue::new(
            &self.num * &other.den + &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub fn neg(&self) -> Self {
        QzValue::new(-&self.num, self.den.clone())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QzValue::new(&self.num * c, self.den.clone())
    }
}

/// Symmetric pairing on ⊕ Z/qᵢ with invariant factors q₁ | q₂ | … (each > 1)
/// and Gram matrix of Q/Z values on the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePairing {
    factors: Vec<BigInt>,
    gram: Vec<QzValue>, // n x n, row-major
}

impl FinitePairing {
    pub fn new(factors: Vec<BigInt>, gram: Vec<QzValue>) -> Self {
        let n = factors.len();
        assert_eq!(gram.len(), n * n);
        for (i, q) in factors.iter().enumerate() {
            assert!(*q > BigInt::one(), "invariant factors must exceed 1");
            if i + 1 < n {
                assert!(factors[i + 1].mod_floor(q).is_zero(), "divisibility chain");
            }
        }
        for i in 0..n {
            for j in 0..n {
                assert_eq!(gram[i * n + j], gram[j * n + i], "gram must be symmetric");
                let g = factors[i].gcd(&factors[j]);
                assert!(
                    g.mod_floor(&gram[i * n + j].order()).is_zero(),
                    "gram value order must divide gcd of generator orders"
                );
            }
        }
        FinitePairing { factors, gram }
    }

    /// The trivial pairing on the trivial group.
    pub fn trivial() -> Self {
        FinitePairing { factors: vec![], gram: vec![] }
    }

    /// Diagonal pairing ⊕ (aᵢ/qᵢ) on ⊕ Z/qᵢ.
    pub fn from_cyclic(summands: &[(BigInt, BigInt)]) -> Self {
        let n = summands.len();
        let mut gram = vec![QzValue::zero(); n * n];
        let mut factors = Vec::with_capacity(n);
        for (i, (q, a)) in summands.iter().enumerate() {
            factors.push(q.clone());
            gram[i * n + i] = QzValue::new(a.clone(), q.clone());
        }
        FinitePairing::new(factors, gram)
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn gram(&self, i: usize, j: usize) -> &QzValue {
        &self.gram[i * self.factors.len() + j]
    }

    pub fn group_order(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, q| acc * q)
    }

    /// Value of the pairing on arbitrary elements given in generator
    /// coordinates.
    pub fn eval(&self, x: &[BigInt], y: &[BigInt]) -> QzValue {
        let n = self.factors.len();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        let mut acc = QzValue::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                acc = acc.add(&self.gram(i, j).scale(&(&x[i] * &y[j])));
            }
        }
        acc
    }

    /// Entrywise negation (the pairing of the mirror image).
    pub fn negate(&self) -> Self {
        FinitePairing {
            factors: self.factors.clone(),
            gram: self.gram.iter().map(|v| v.neg()).collect(),
        }
    }

    /// Entrywise doubling: the sesquilinear pairing of the double cover is
    /// twice the bilinear one.
    pub fn double(&self) -> Self {
        FinitePairing {
            factors: self.factors.clone(),
            gram: self.gram.iter().map(|v| v.scale(&BigInt::from(2))).collect(),
        }
    }

    /// Brute-force non-degeneracy check; only for small groups.
    pub fn is_nondegenerate_brute(&self, budget: u64) -> Result<bool, PairError> {
        let order = self.group_order();
        if order > BigInt::from(budget) {
            return Err(PairError::TooLarge(alloc::format!(
                "group order {order} exceeds budget {budget}"
            )));
        }
        let small = SmallPairing::try_from_pairing(self)?;
        for x in 0..small.order {
            let xv = small.element(x);
            if xv.iter().all(|&c| c == 0) {
                continue;
            }
            let mut pairs_to_zero = true;
            for y in 0..small.order {
                let yv = small.element(y);
                if small.eval(&xv, &yv) != 0 {
                    pairs_to_zero = false;
                    break;
                }
            }
            if pairs_to_zero {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Pairing on the cokernel of a symmetric integer matrix with nonzero
/// determinant: group = coker(a) via SNF, generators the columns of the
/// inverse left certificate, values `gᵢᵀ·Adj(a)·gⱼ / det(a)` in Q/Z.
pub fn pairing_from_matrix(a: &ExactMatrix) -> Result<FinitePairing, PairError> {
    if !a.is_symmetric() {
        return Err(PairError::NotSymmetric);
    }
    let det = a.determinant().map_err(|_| PairError::NotSymmetric)?;
    if det.is_zero() {
        return Err(PairError::SingularMatrix);
    }
    let n = a.rows();
    let s = snf(a);
    // u·a·w = diag(d); generators of coker(a) are the columns of u^{-1}
    let u_det = s.u.determinant().expect("square");
    let u_adj = s.u.adjugate().expect("square");
    // u^{-1} = adj(u)/det(u), det(u) = ±1
    let u_inv = if u_det.is_one() { u_adj } else { u_adj.neg() };
    let adj = a.adjugate().expect("square");
    let mut kept = Vec::new();
    for i in 0..n {
        if !s.d[i].is_one() {
            debug_assert!(!s.d[i].is_zero());
            kept.push(i);
        }
    }
    let m = kept.len();
    let mut factors = Vec::with_capacity(m);
    let mut gram = vec![QzValue::zero(); m * m];
    let cols: Vec<Vec<BigInt>> = kept.iter().map(|&i| u_inv.column(i)).collect();
    for (bi, &i) in kept.iter().enumerate() {
        factors.push(s.d[i].clone());
        for (bj, _) in kept.iter().enumerate() {
            let adj_gj = adj.apply(&cols[bj]);
            let mut num = BigInt::zero();
            for r in 0..n {
                num += &cols[bi][r] * &adj_gj[r];
            }
            gram[bi * m + bj] = QzValue::new(num, det.clone());
        }
    }
    Ok(FinitePairing::new(factors, gram))
}

/// The two linking pairings of the double branched cover of a knot with
/// Seifert matrix `v`: the bilinear `lk`, presented by `v + vᵀ`, and the
/// sesquilinear `ell = 2·lk`.
pub fn double_cover_pairing(v: &ExactMatrix) -> Result<(FinitePairing, FinitePairing), PairError> {
    let s = v.add(&v.transpose());
    let det = s.determinant().map_err(|_| PairError::NotSymmetric)?;
    if det.is_zero() {
        return Err(PairError::SingularMatrix);
    }
    if det.is_even() {
        return Err(PairError::EvenOrder(det.abs()));
    }
    let lk = pairing_from_matrix(&s)?;
    let ell = lk.double();
    Ok((lk, ell))
}

/// One cyclic orthogonal summand: the pairing `a/q` on Z/q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSummand {
    pub modulus: BigInt,
    pub residue: BigInt,
}

/// Orthogonal sum of cyclic pairings (aᵢ/qᵢ) with q₁ | q₂ | …; residues are
/// the least positive representatives, coprime to their moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub summands: Vec<CyclicSummand>,
}

impl CyclicDecomposition {
    pub fn to_pairing(&self) -> FinitePairing {
        FinitePairing::from_cyclic(
            &self
                .summands
                .iter()
                .map(|s| (s.modulus.clone(), s.residue.clone()))
                .collect::<Vec<_>>(),
        )
    }

    /// Entrywise negation aᵢ -> -aᵢ mod qᵢ.
    pub fn negate(&self) -> Self {
        CyclicDecomposition {
            summands: self
                .summands
                .iter()
                .map(|s| CyclicSummand {
                    modulus: s.modulus.clone(),
                    residue: (-&s.residue).mod_floor(&s.modulus),
                })
                .collect(),
        }
    }
}

/// Orthogonal cyclic decomposition of a non-degenerate pairing on a group of
/// odd order: split into prime components, diagonalize each by symmetric
/// Gauss elimination (with the add-a-generator fix when no diagonal entry
/// reaches maximal order), recombine primes by the Chinese remainder theorem.
pub fn decompose(p: &FinitePairing) -> Result<CyclicDecomposition, PairError> {
    let order = p.group_order();
    if order.is_even() {
        return Err(PairError::EvenOrder(order));
    }
    if p.rank() == 0 {
        return Ok(CyclicDecomposition { summands: vec![] });
    }

    let primes = factorize(&order);
    // per prime: list of (exponent, residue) with exponents descending
    let mut per_prime: Vec<(BigInt, Vec<(u32, BigInt)>)> = Vec::new();
    for (prime, _) in &primes {
        let comp = prime_component(p, prime);
        let diag = diagonalize_prime_component(comp, prime)?;
        per_prime.push((prime.clone(), diag));
    }

    // Combine across primes, largest exponents together, so the divisibility
    // chain holds.
    let max_len = per_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut combined: Vec<CyclicSummand> = Vec::new();
    for slot in 0..max_len {
        // slot 0 = largest summand of each prime
        let mut modulus = BigInt::one();
        let mut parts: Vec<(BigInt, BigInt)> = Vec::new(); // (p^e, residue)
        for (prime, list) in &per_prime {
            if slot < list.len() {
                let (e, a) = &list[slot];
                let q = prime.pow(*e);
                modulus *= &q;
                parts.push((q, a.clone()));
            }
        }
        if modulus.is_one() {
            continue;
        }
        // residue A with A/modulus = Σ aᵢ/qᵢ in Q/Z: A = Σ aᵢ·(modulus/qᵢ)
        let mut a_total = BigInt::zero();
        for (q, a) in &parts {
            a_total += a * (&modulus / q);
        }
        let a_total = a_total.mod_floor(&modulus);
        debug_assert!(a_total.gcd(&modulus).is_one());
        combined.push(CyclicSummand { modulus, residue: a_total });
    }
    combined.reverse(); // ascending divisibility order q₁ | q₂ | …
    Ok(CyclicDecomposition { summands: combined })
}

/// Generators and Gram of the π-primary component of `p`.
struct PrimeComponent {
    /// exponents vᵢ of the summands Z/π^{vᵢ}, only vᵢ > 0
    exps: Vec<u32>,
    /// Gram values in Q/Z with π-power denominators
    gram: Vec<QzValue>,
}

fn prime_component(p: &FinitePairing, prime: &BigInt) -> PrimeComponent {
    let n = p.rank();
    let mut exps = Vec::new();
    let mut scalars = Vec::new(); // qᵢ / π^{vᵢ}: multiplier taking gᵢ to the component generator
    for i in 0..n {
        let mut v = 0u32;
        let mut rest = p.factors()[i].clone();
        while rest.mod_floor(prime).is_zero() {
            rest /= prime;
            v += 1;
        }
        if v > 0 {
            exps.push(v);
            scalars.push((i, rest));
        }
    }
    let m = exps.len();
    let mut gram = vec![QzValue::zero(); m * m];
    for a in 0..m {
        for b in 0..m {
            let (i, ref si) = scalars[a];
            let (j, ref sj) = scalars[b];
            gram[a * m + b] = p.gram(i, j).scale(&(si * sj));
        }
    }
    PrimeComponent { exps, gram }
}

/// Symmetric Gauss elimination on one prime component; returns summands as
/// (exponent, residue) sorted by descending exponent.
fn diagonalize_prime_component(
    mut comp: PrimeComponent,
    prime: &BigInt,
) -> Result<Vec<(u32, BigInt)>, PairError> {
    let mut out: Vec<(u32, BigInt)> = Vec::new();
    while !comp.exps.is_empty() {
        let m = comp.exps.len();
        let vmax = *comp.exps.iter().max().unwrap();
        let target_order = prime.pow(vmax);
        // a diagonal entry of maximal order?
        let mut pivot = (0..m).find(|&i| comp.gram[i * m + i].order() == target_order);
        if pivot.is_none() {
            // fix move: gᵢ <- gᵢ + gⱼ for an off-diagonal entry of maximal
            // order (valid since 2 is a unit in odd order)
            let mut fixed = false;
            'search: for i in 0..m {
                for j in 0..m {
                    if i == j {
                        continue;
                    }
                    if comp.gram[i * m + j].order() == target_order {
                        add_generator(&mut comp, i, j, &BigInt::one());
                        fixed = true;
                        break 'search;
                    }
                }
            }
            if !fixed {
                return Err(PairError::Degenerate);
            }
            pivot = (0..m).find(|&i| comp.gram[i * m + i].order() == target_order);
            if pivot.is_none() {
                return Err(PairError::Degenerate);
            }
        }
        let piv = pivot.unwrap();
        // generator order must match the value order, else degenerate
        if comp.exps[piv] != vmax {
            return Err(PairError::Degenerate);
        }
        let pivot_val = comp.gram[piv * m + piv].clone();
        // clear row/column piv: gᵢ <- gᵢ - λᵢ gₚ with
        // λᵢ = ℓ(gᵢ,gₚ)/ℓ(gₚ,gₚ) (integral because the pivot has maximal order)
        for i in 0..m {
            if i == piv {
                continue;
            }
            let v = comp.gram[i * m + piv].clone();
            if v.is_zero() {
                continue;
            }
            // v = b/π^f, pivot = a/π^vmax; λ = b·a^{-1}·π^{vmax-f}
            let f_ord = v.order();
            let shift = &target_order / &f_ord;
            let a_inv = mod_inverse(pivot_val.numerator(), &target_order)
                .expect("pivot numerator is a unit");
            let lambda = (v.numerator() * &a_inv * &shift).mod_floor(&target_order);
            add_generator(&mut comp, i, piv, &(-lambda));
            debug_assert!(comp.gram[i * m + piv].is_zero());
        }
        // split off the pivot summand
        let a_res = pivot_val.numerator().mod_floor(&target_order);
        out.push((vmax, a_res));
        remove_generator(&mut comp, piv);
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(out)
}

/// gᵢ <- gᵢ + λ·gⱼ, updating the Gram matrix bilinearly.
fn add_generator(comp: &mut PrimeComponent, i: usize, j: usize, lambda: &BigInt) {
    let m = comp.exps.len();
    let old = comp.gram.clone();
    for k in 0..m {
        if k == i {
            continue;
        }
        let upd = old[i * m + k].add(&old[j * m + k].scale(lambda));
        comp.gram[i * m + k] = upd.clone();
        comp.gram[k * m + i] = upd;
    }
    let diag = old[i * m + i]
        .add(&old[i * m + j].scale(&(lambda * 2)))
        .add(&old[j * m + j].scale(&(lambda * lambda)));
    comp.gram[i * m + i] = diag;
}

fn remove_generator(comp: &mut PrimeComponent, idx: usize) {
    let m = comp.exps.len();
    let mut gram = Vec::with_capacity((m - 1) * (m - 1));
    for i in 0..m {
        if i == idx {
            continue;
        }
        for j in 0..m {
            if j == idx {
                continue;
            }
            gram.push(comp.gram[i * m + j].clone());
        }
    }
    comp.exps.remove(idx);
    comp.gram = gram;
}

pub(crate) fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if n.mod_floor(&d).is_zero() {
            let mut e = 0;
            while n.mod_floor(&d).is_zero() {
                n /= &d;
                e += 1;
            }
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// A pairing flattened to machine integers for exhaustive searches: group
/// orders fit in i64 and all Gram values share the common denominator
/// `den` (the largest invariant factor).
struct SmallPairing {
    factors: Vec<i64>,
    order: u64,
    den: i64,
    gram_num: Vec<i64>, // numerators over `den`
}

impl SmallPairing {
    fn try_from_pairing(p: &FinitePairing) -> Result<SmallPairing, PairError> {
        let order = p
            .group_order()
            .to_u64()
            .ok_or_else(|| PairError::TooLarge(String::from("group order exceeds u64")))?;
        let n = p.rank();
        let den_big = if n == 0 { BigInt::one() } else { p.factors()[n - 1].clone() };
        let den = den_big
            .to_i64()
            .ok_or_else(|| PairError::TooLarge(String::from("invariant factor exceeds i64")))?;
        let mut factors = Vec::with_capacity(n);
        for q in p.factors() {
            factors.push(q.to_i64().ok_or_else(|| {
                PairError::TooLarge(String::from("invariant factor exceeds i64"))
            })?);
        }
        let mut gram_num = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = p.gram(i, j);
                let scaled = (v.numerator() * &den_big) / v.denominator();
                gram_num.push(scaled.to_i64().ok_or_else(|| {
                    PairError::TooLarge(String::from("gram numerator exceeds i64"))
                })?);
            }
        }
        Ok(SmallPairing { factors, order, den, gram_num })
    }

    fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Decode index -> coordinates.
    fn element(&self, mut idx: u64) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.factors.len());
        for q in &self.factors {
            v.push((idx % (*q as u64)) as i64);
            idx /= *q as u64;
        }
        v
    }

    /// Pairing value numerator over `den`.
    fn eval(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        let mut acc: i128 = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0 {
                    continue;
                }
                let term = (x[i] as i128) * (y[j] as i128) % (self.den as i128)
                    * (self.gram_num[i * n + j] as i128);
                acc = (acc + term) % (self.den as i128);
            }
        }
        acc.rem_euclid(self.den as i128) as i64
    }

    fn element_order(&self, x: &[i64]) -> i64 {
        let mut ord: i64 = 1;
        for (c, q) in x.iter().zip(&self.factors) {
            let g = num_integer::gcd(*c, *q);
            ord = num_integer::lcm(ord, q / g);
        }
        ord
    }

    /// Sorted multiset of self-values ℓ(x,x); an isometry invariant used to
    /// prune hopeless searches.
    fn self_value_multiset(&self) -> Vec<i64> {
        let mut vals = Vec::with_capacity(self.order as usize);
        for idx in 0..self.order {
            let x = self.element(idx);
            vals.push(self.eval(&x, &x));
        }
        vals.sort_unstable();
        vals
    }
}

/// An isometry between two pairings: images of the first pairing's
/// generators in coordinates of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    pub images: Vec<Vec<i64>>,
}

/// Exhaustive isometry search. Returns `Ok(Some(..))` with the
/// lexicographically first isometry, `Ok(None)` if the pairings are not
/// isometric, and an error if the candidate budget is exceeded. The budget
/// counts examined homomorphism candidates.
pub fn isometry_search(
    p1: &FinitePairing,
    p2: &FinitePairing,
    budget: u64,
) -> Result<Option<Isometry>, PairError> {
    if p1.factors() != p2.factors() {
        return Ok(None); // groups are not even isomorphic
    }
    let s1 = SmallPairing::try_from_pairing(p1)?;
    let s2 = SmallPairing::try_from_pairing(p2)?;
    if s1.rank() == 0 {
        return Ok(Some(Isometry { images: vec![] }));
    }
    if s1.self_value_multiset() != s2.self_value_multiset() {
        return Ok(None);
    }
    let mut counter: u64 = 0;
    let mut images: Vec<Vec<i64>> = Vec::new();
    if search_images(&s1, &s2, &mut images, &mut counter, budget)? {
        Ok(Some(Isometry { images }))
    } else {
        Ok(None)
    }
}

fn search_images(
    s1: &SmallPairing,
    s2: &SmallPairing,
    images: &mut Vec<Vec<i64>>,
    counter: &mut u64,
    budget: u64,
) -> Result<bool, PairError> {
    let k = images.len();
    if k == s1.rank() {
        return Ok(is_automorphism_basis(s2, images));
    }
    let gk: Vec<i64> = (0..s1.rank()).map(|i| if i == k { 1 } else { 0 }).collect();
    let want_self = s1.eval(&gk, &gk);
    let want_order = s1.factors[k];
    for idx in 0..s2.order {
        *counter += 1;
        if *counter > budget {
            return Err(PairError::BudgetExceeded { budget });
        }
        let cand = s2.element(idx);
        if s2.element_order(&cand) != want_order {
            continue;
        }
        if s2.eval(&cand, &cand) != want_self {
            continue;
        }
        // cross constraints against earlier images
        let mut ok = true;
        for (j, img) in images.iter().enumerate() {
            let gj: Vec<i64> = (0..s1.rank()).map(|i| if i == j { 1 } else { 0 }).collect();
            if s2.eval(img, &cand) != s1.eval(&gj, &gk) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        images.push(cand);
        if search_images(s1, s2, images, counter, budget)? {
            return Ok(true);
        }
        images.pop();
    }
    Ok(false)
}

/// Do the candidate images generate the whole group? Checked prime by prime
/// on G/πG: there the images must form an invertible matrix over F_π.
fn is_automorphism_basis(s: &SmallPairing, images: &[Vec<i64>]) -> bool {
    let n = s.rank();
    debug_assert_eq!(images.len(), n);
    let overall = s.factors[n - 1];
    let mut rest = overall;
    let mut primes = Vec::new();
    let mut d = 2i64;
    while d * d <= rest {
        if rest % d == 0 {
            primes.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    for p in primes {
        let idx: Vec<usize> = (0..n).filter(|&i| s.factors[i] % p == 0).collect();
        let m = idx.len();
        // matrix over F_p of the images restricted to the p-torsion quotient
        let mut mat: Vec<i64> = Vec::with_capacity(m * m);
        for &row in &idx {
            for &col in &idx {
                mat.push(images[col][row].rem_euclid(p));
            }
        }
        if det_mod_p(&mut mat, m, p) == 0 {
            return false;
        }
    }
    true
}

fn det_mod_p(mat: &mut [i64], n: usize, p: i64) -> i64 {
    let mut det: i64 = 1;
    for k in 0..n {
        let piv = (k..n).find(|&i| mat[i * n + k] % p != 0);
        let Some(piv) = piv else { return 0 };
        if piv != k {
            for j in 0..n {
                mat.swap(k * n + j, piv * n + j);
            }
            det = (p - det) % p;
        }
        let inv = inv_mod_p(mat[k * n + k].rem_euclid(p), p);
        det = det * mat[k * n + k].rem_euclid(p) % p;
        for i in k + 1..n {
            let f = mat[i * n + k].rem_euclid(p) * inv % p;
            if f == 0 {
                continue;
            }
            for j in k..n {
                mat[i * n + j] = (mat[i * n + j] - f * mat[k * n + j]).rem_euclid(p);
            }
        }
    }
    det.rem_euclid(p)
}

fn inv_mod_p(a: i64, p: i64) -> i64 {
    // Fermat; p is prime and a != 0 mod p
    let mut base = a.rem_euclid(p);
    let mut e = p - 2;
    let mut acc = 1i64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn mat(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_rows(rows)
    }

    #[test]
    fn pairing_from_1x1() {
        let p = pairing_from_matrix(&mat(&[vec![3]])).unwrap();
        assert_eq!(p.factors(), &[big(3)]);
        assert_eq!(p.gram(0, 0), &QzValue::new(big(1), big(3)));
    }

    #[test]
    fn pairing_from_appendix_matrix() {
        let p = pairing_from_matrix(&mat(&[vec![12, 3], vec![3, 24]])).unwrap();
        assert_eq!(p.factors(), &[big(3), big(93)]);
        assert_eq!(p.group_order(), big(279));
    }

    #[test]
    fn pairing_from_identity_is_trivial() {
        let p = pairing_from_matrix(&ExactMatrix::identity(4)).unwrap();
        assert_eq!(p.rank(), 0);
        assert_eq!(p.group_order(), big(1));
    }

    #[test]
    fn appendix_isometry() {
        // congruent over Z[1/2] but not over Z; pairings isometric anyway
        let a = pairing_from_matrix(&mat(&[vec![12, 3], vec![3, 24]])).unwrap();
        let b = pairing_from_matrix(&mat(&[vec![3, 3], vec![3, 96]])).unwrap();
        let iso = isometry_search(&a, &b, 100_000).unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn non_isometric_mod7() {
        let a = FinitePairing::from_cyclic(&[(big(7), big(1))]);
        let b = FinitePairing::from_cyclic(&[(big(7), big(3))]);
        // squares mod 7 are {1,2,4}; 3 is not equivalent to 1
        assert_eq!(isometry_search(&a, &b, 10_000).unwrap(), None);
        let c = FinitePairing::from_cyclic(&[(big(7), big(6))]);
        // -1 is not a square mod 7 either
        assert_eq!(isometry_search(&a, &c, 10_000).unwrap(), None);
        let d = FinitePairing::from_cyclic(&[(big(7), big(4))]);
        assert!(isometry_search(&a, &d, 10_000).unwrap().is_some());
    }

    #[test]
    fn self_isometry_is_identity() {
        let a = FinitePairing::from_cyclic(&[(big(3), big(1)), (big(9), big(2))]);
        let iso = isometry_search(&a, &a, 100_000).unwrap().unwrap();
        assert_eq!(iso.images, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn trefoil_double_cover() {
        let v = mat(&[vec![-1, 1], vec![0, -1]]);
        let (lk, ell) = double_cover_pairing(&v).unwrap();
        assert_eq!(lk.factors(), &[big(3)]);
        let dl = decompose(&lk).unwrap();
        assert_eq!(dl.summands.len(), 1);
        assert_eq!(dl.summands[0].modulus, big(3));
        assert_eq!(dl.summands[0].residue, big(1));
        let de = decompose(&ell).unwrap();
        assert_eq!(de.summands[0].residue, big(2));
    }

    #[test]
    fn unknot_double_cover_trivial() {
        let v = ExactMatrix::zero(0, 0);
        let (lk, ell) = double_cover_pairing(&v).unwrap();
        assert_eq!(lk.rank(), 0);
        assert_eq!(ell.rank(), 0);
    }

    #[test]
    fn granny_double_cover() {
        let tre = mat(&[vec![-1, 1], vec![0, -1]]);
        let v = tre.block_sum(&tre);
        let (_, ell) = double_cover_pairing(&v).unwrap();
        assert_eq!(ell.factors(), &[big(3), big(3)]);
        let d = decompose(&ell).unwrap();
        assert_eq!(d.summands.len(), 2);
        assert_eq!(d.summands[0].residue, big(2));
        assert_eq!(d.summands[1].residue, big(2));
    }

    #[test]
    fn singular_and_even_inputs_rejected() {
        let w = mat(&[vec![1, 1], vec![1, 1]]); // v+vᵀ singular
        assert!(matches!(double_cover_pairing(&w), Err(PairError::SingularMatrix)));
        // a symmetrization with even nonzero determinant
        let u = mat(&[vec![1, 0], vec![0, 0]]);
        match double_cover_pairing(&u) {
            Err(PairError::SingularMatrix) | Err(PairError::EvenOrder(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
        let even = mat(&[vec![0, 1], vec![1, 0]]);
        // det(v+vᵀ) = det [[0,2],[2,0]] = -4: even
        assert!(matches!(
            double_cover_pairing(&even),
            Err(PairError::EvenOrder(_))
        ));
    }

    #[test]
    fn decompose_cyclic_is_identity() {
        let p = FinitePairing::from_cyclic(&[(big(3), big(1))]);
        let d = decompose(&p).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.summands[0].modulus, big(3));
        assert_eq!(d.summands[0].residue, big(1));
    }

    #[test]
    fn decompose_hyperbolic_mod3() {
        // gram [[0,1/3],[1/3,0]] on (Z/3)^2
        let gram = vec![
            QzValue::zero(),
            QzValue::new(big(1), big(3)),
            QzValue::new(big(1), big(3)),
            QzValue::zero(),
        ];
        let p = FinitePairing::new(vec![big(3), big(3)], gram);
        let d = decompose(&p).unwrap();
        assert_eq!(d.summands.len(), 2);
        let a = &d.summands[0].residue;
        let b = &d.summands[1].residue;
        // the product class is a unit-square invariant: a·b ≡ -1 mod 3
        assert_eq!((a * b).mod_floor(&big(3)), big(2));
        // the rebuilt diagonal pairing is isometric to the original
        let rebuilt = d.to_pairing();
        assert!(isometry_search(&p, &rebuilt, 100_000).unwrap().is_some());
    }

    #[test]
    fn decompose_hyperbolic_mod9_depth_fix() {
        // on (Z/9)² no diagonal entry reaches depth 2; the add-a-generator
        // move must create one before Gauss can proceed
        let gram = vec![
            QzValue::zero(),
            QzValue::new(big(1), big(9)),
            QzValue::new(big(1), big(9)),
            QzValue::zero(),
        ];
        let p = FinitePairing::new(vec![big(9), big(9)], gram);
        let d = decompose(&p).unwrap();
        assert_eq!(d.summands.len(), 2);
        assert!(d.summands.iter().all(|s| s.modulus == big(9)));
        let rebuilt = d.to_pairing();
        assert!(isometry_search(&p, &rebuilt, 2_000_000).unwrap().is_some());
    }

    #[test]
    fn decompose_mixed_exponents() {
        // Z/3 ⊕ Z/9 with an off-diagonal tie of order 3
        let gram = vec![
            QzValue::new(big(1), big(3)),
            QzValue::new(big(1), big(3)),
            QzValue::new(big(1), big(3)),
            QzValue::new(big(2), big(9)),
        ];
        let p = FinitePairing::new(vec![big(3), big(9)], gram);
        let d = decompose(&p).unwrap();
        assert_eq!(
            d.summands.iter().map(|s| s.modulus.clone()).collect::<Vec<_>>(),
            vec![big(3), big(9)]
        );
        let rebuilt = d.to_pairing();
        assert!(isometry_search(&p, &rebuilt, 2_000_000).unwrap().is_some());
    }

    #[test]
    fn decompose_recombines_primes() {
        // coker(diag(3,5)) is cyclic of order 15; the two prime components
        // must CRT back into a single summand
        let m = mat(&[vec![3, 0], vec![0, 5]]);
        let p = pairing_from_matrix(&m).unwrap();
        let d = decompose(&p).unwrap();
        assert_eq!(d.summands.len(), 1);
        assert_eq!(d.summands[0].modulus, big(15));
        assert!(d.summands[0].residue.gcd(&big(15)).is_one());
        let rebuilt = d.to_pairing();
        assert!(isometry_search(&p, &rebuilt, 100_000).unwrap().is_some());
    }

    #[test]
    fn degenerate_rejected() {
        // claim group Z/9 but pair with value of order 3 only
        let gram = vec![QzValue::new(big(3), big(9))];
        let p = FinitePairing::new(vec![big(9)], gram);
        assert!(matches!(decompose(&p), Err(PairError::Degenerate)));
        assert!(!p.is_nondegenerate_brute(100).unwrap());
    }

    #[test]
    fn mirror_negates() {
        let s = mat(&[vec![-2, 1], vec![1, -2]]);
        let p = pairing_from_matrix(&s).unwrap();
        let pn = pairing_from_matrix(&s.neg()).unwrap();
        for i in 0..p.rank() {
            for j in 0..p.rank() {
                assert_eq!(p.gram(i, j).neg(), pn.gram(i, j).clone());
            }
        }
        let d = decompose(&p).unwrap();
        let dn = decompose(&pn).unwrap();
        assert_eq!(d.negate(), dn);
    }

    fn arb_odd_sym(n: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec(-6i64..=6, n * n).prop_map(move |v| {
            let mut m = ExactMatrix::zero(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let x = v[i * n + j];
                    m[(i, j)] = BigInt::from(x);
                    m[(j, i)] = BigInt::from(x);
                }
                // odd diagonal keeps determinants odd more often
                m[(i, i)] = BigInt::from(2 * v[i * n + i] + 1);
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn congruent_matrices_isometric(a in arb_odd_sym(2), c1 in -2i64..=2, c2 in -2i64..=2) {
            let det = a.determinant().unwrap();
            prop_assume!(det.is_odd() && !det.is_zero());
            prop_assume!(det.abs() < BigInt::from(600));
            let mut t = ExactMatrix::identity(2);
            t[(0, 1)] = BigInt::from(c1);
            let mut t2 = ExactMatrix::identity(2);
            t2[(1, 0)] = BigInt::from(c2);
            let t = t.mul(&t2);
            let b = a.congruent_transform(&t).unwrap();
            let pa = pairing_from_matrix(&a).unwrap();
            let pb = pairing_from_matrix(&b).unwrap();
            prop_assert!(isometry_search(&pa, &pb, 2_000_000).unwrap().is_some());
        }

        #[test]
        fn congruent_3x3_isometric(a in arb_odd_sym(3), c1 in -1i64..=1, c2 in -1i64..=1) {
            let det = a.determinant().unwrap();
            prop_assume!(det.is_odd() && !det.is_zero());
            prop_assume!(det.abs() < BigInt::from(200));
            let mut t = ExactMatrix::identity(3);
            t[(0, 2)] = BigInt::from(c1);
            let mut t2 = ExactMatrix::identity(3);
            t2[(2, 1)] = BigInt::from(c2);
            let t = t.mul(&t2);
            let b = a.congruent_transform(&t).unwrap();
            let pa = pairing_from_matrix(&a).unwrap();
            let pb = pairing_from_matrix(&b).unwrap();
            prop_assert!(isometry_search(&pa, &pb, 5_000_000).unwrap().is_some());
        }

        #[test]
        fn decompose_rebuild_isometric(a in arb_odd_sym(3)) {
            let det = a.determinant().unwrap();
            prop_assume!(det.is_odd() && !det.is_zero());
            prop_assume!(det.abs() <= BigInt::from(2000));
            let p = pairing_from_matrix(&a).unwrap();
            let d = decompose(&p).unwrap();
            let rebuilt = d.to_pairing();
            prop_assert!(isometry_search(&p, &rebuilt, 5_000_000).unwrap().is_some());
        }

        #[test]
        fn group_order_is_det(a in arb_odd_sym(3)) {
            let det = a.determinant().unwrap();
            prop_assume!(!det.is_zero());
            let p = pairing_from_matrix(&a).unwrap();
            prop_assert_eq!(p.group_order(), det.abs());
        }

        #[test]
        fn ell_is_twice_lk(v_raw in proptest::collection::vec(-3i64..=3, 4)) {
            let v = ExactMatrix::new(2, 2, v_raw.into_iter().map(BigInt::from).collect());
            let s = v.add(&v.transpose());
            let det = s.determinant().unwrap();
            prop_assume!(det.is_odd() && !det.is_zero());
            let (lk, ell) = double_cover_pairing(&v).unwrap();
            for i in 0..lk.rank() {
                for j in 0..lk.rank() {
                    prop_assert_eq!(
                        ell.gram(i, j).clone(),
                        lk.gram(i, j).add(lk.gram(i, j))
                    );
                }
            }
        }
    }
}

#[cfg(test)]
mod negative_det_tests {
    use super::*;

    #[test]
    fn negative_determinant_values_keep_their_sign() {
        // det = -3; the pairing value on e1 is 2/(-3) = 1/3, not 2/3
        let m = ExactMatrix::from_rows(&[alloc::vec![11, 5], alloc::vec![5, 2]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(-3));
        let p = pairing_from_matrix(&m).unwrap();
        assert_eq!(p.gram(0, 0), &QzValue::new(BigInt::from(1), BigInt::from(3)));
        let target = FinitePairing::from_cyclic(&[(BigInt::from(3), BigInt::from(1))]);
        assert!(isometry_search(&p, &target, 10_000).unwrap().is_some());
    }
}
