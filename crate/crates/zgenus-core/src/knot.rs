//! Knot records and the classical invariants computed from a Seifert
//! matrix: Alexander polynomial, determinant, Levine-Tristram signatures,
//! Arf invariant, and the generator count of the double branched cover.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactmat::{snf, ExactMatrix, MatError};
use crate::interval::{
    complex_power, hermitian_signature, primitive_root_of_unity, ComplexInterval, Interval,
    PRECISIONS,
};
use crate::laurent::{alexander_from_seifert, LaurentError, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KnotError {
    OddSize { name: String, size: usize },
    /// det(V - Vᵀ) != 1: not the Seifert matrix of a knot.
    NotSeifert { name: String, det: BigInt },
    /// ω is a root of the Alexander polynomial; the signature jumps there.
    AlexanderRoot { a: u32 },
    /// The interval computation could not certify all signs even at the
    /// highest precision; an error, not a guess.
    Uncertified { max_prec: u64 },
    Mat(MatError),
    Laurent(LaurentError),
}

impl fmt::Display for KnotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotError::OddSize { name, size } => {
                write!(f, "knot {name}: Seifert matrix has odd size {size}")
            }
            KnotError::NotSeifert { name, det } => write!(
                f,
                "knot {name}: det(V - V^T) = {det}, expected 1; not a knot Seifert matrix"
            ),
            KnotError::AlexanderRoot { a } => write!(
                f,
                "omega is a primitive 2^{a}-th root at which the Alexander polynomial vanishes"
            ),
            KnotError::Uncertified { max_prec } => write!(
                f,
                "sign not certified at {max_prec} bits of interval precision"
            ),
            KnotError::Mat(e) => write!(f, "{e}"),
            KnotError::Laurent(e) => write!(f, "{e}"),
        }
    }
}

impl From<MatError> for KnotError {
    fn from(e: MatError) -> Self {
        KnotError::Mat(e)
    }
}

impl From<LaurentError> for KnotError {
    fn from(e: LaurentError) -> Self {
        KnotError::Laurent(e)
    }
}

/// A named knot given by a Seifert matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotRecord {
    pub name: String,
    pub seifert: ExactMatrix,
    pub source: String,
}

impl KnotRecord {
    pub fn new(name: impl Into<String>, seifert: ExactMatrix, source: impl Into<String>) -> Self {
        KnotRecord { name: name.into(), seifert, source: source.into() }
    }

    /// Seifert-matrix sanity: square, even size, V - Vᵀ unimodular skew.
    pub fn validate(&self) -> Result<(), KnotError> {
        let v = &self.seifert;
        if !v.is_square() {
            return Err(KnotError::Mat(MatError::NotSquare {
                rows: v.rows(),
                cols: v.cols(),
            }));
        }
        if v.rows() % 2 != 0 {
            return Err(KnotError::OddSize { name: self.name.clone(), size: v.rows() });
        }
        let skew = v.add(&v.transpose().neg());
        let det = skew.determinant()?;
        if !det.is_one() {
            return Err(KnotError::NotSeifert { name: self.name.clone(), det });
        }
        Ok(())
    }

    /// Genus of the Seifert surface behind the matrix: size/2.
    pub fn genus(&self) -> usize {
        self.seifert.rows() / 2
    }

    pub fn alexander(&self) -> Result<LaurentPoly, KnotError> {
        Ok(alexander_from_seifert(&self.seifert)?)
    }

    /// |det(V + Vᵀ)|, always odd for knots.
    pub fn determinant(&self) -> Result<BigInt, KnotError> {
        let s = self.seifert.add(&self.seifert.transpose());
        let det = s.determinant()?.abs();
        debug_assert!(det.is_odd());
        Ok(det)
    }

    /// Number of invariant factors > 1 of V + Vᵀ: the minimal generator
    /// count of the first homology of the double branched cover.
    pub fn min_generators_double_cover(&self) -> Result<usize, KnotError> {
        let s = self.seifert.add(&self.seifert.transpose());
        Ok(snf(&s).nontrivial_factors().len())
    }
}

/// Evaluation points for Levine-Tristram signatures: -1, or a primitive
/// 2^a-th root of unity exp(2πik/2^a) with odd k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Omega {
    MinusOne,
    TwoPowerRoot { a: u32, k: u64 },
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Omega::MinusOne => write!(f, "-1"),
            Omega::TwoPowerRoot { a, k } => write!(f, "exp(2*pi*i*{k}/{})", 1u64 << a),
        }
    }
}

/// The default sampling set: -1 plus primitive 2^a-th roots for a <= 6, one
/// representative per conjugate pair.
pub fn omega_sample_set() -> Vec<Omega> {
    let mut out = vec![Omega::MinusOne];
    for a in 2..=6u32 {
        let half = 1u64 << (a - 1);
        let mut k = 1;
        while k < half {
            out.push(Omega::TwoPowerRoot { a, k });
            k += 2;
        }
    }
    out
}

/// Levine-Tristram signature σ_ω = signature of (1-ω)V + (1-conj ω)Vᵀ.
/// Exact integer arithmetic at ω = -1; dyadic interval arithmetic with
/// certified sign separation elsewhere. Evaluation at an Alexander root is
/// rejected, as is any sign the intervals cannot certify at 1024 bits.
pub fn lt_signature(record: &KnotRecord, omega: Omega) -> Result<i64, KnotError> {
    let v = &record.seifert;
    match omega {
        Omega::MinusOne => {
            // (1-(-1))V + (1-(-1))Vᵀ = 2(V + Vᵀ)
            let s = v.add(&v.transpose());
            Ok(s.signature()?)
        }
        Omega::TwoPowerRoot { a, k } => {
            assert!(k % 2 == 1, "k must be odd for a primitive root");
            let delta = record.alexander()?;
            if delta.divisible_by_cyclotomic_pow2(a) {
                return Err(KnotError::AlexanderRoot { a });
            }
            for &prec in &PRECISIONS {
                let root = primitive_root_of_unity(a, prec);
                let omega_k = complex_power(&root, k, prec);
                let h = hermitian_matrix_at(v, &omega_k, prec);
                if let Some(sig) = hermitian_signature(&h, prec) {
                    return Ok(sig);
                }
            }
            Err(KnotError::Uncertified { max_prec: *PRECISIONS.last().unwrap() })
        }
    }
}

/// Entries of (1-ω)V + (1-conj ω)Vᵀ: with ω = c + i·s,
/// h_ij = (V_ij + V_ji)(1 - c) + i·s·(V_ji - V_ij), which keeps the diagonal
/// exactly real.
fn hermitian_matrix_at(
    v: &ExactMatrix,
    omega: &ComplexInterval,
    prec: u64,
) -> Vec<Vec<ComplexInterval>> {
    let n = v.rows();
    let one_minus_c = Interval::exact(1).sub(&omega.re, prec);
    let s = omega.im.clone();
    let mut h = vec![vec![ComplexInterval::exact(0, 0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let sum = &v[(i, j)] + &v[(j, i)];
            let diff = &v[(j, i)] - &v[(i, j)];
            h[i][j] = ComplexInterval {
                re: one_minus_c.scale_int(&sum),
                im: s.scale_int(&diff),
            };
        }
    }
    h
}

/// Arf invariant: bring V - Vᵀ to the standard symplectic block form by an
/// integer base change P, then sum the products of the paired diagonal
/// entries of PᵀVP mod 2.
pub fn arf(record: &KnotRecord) -> Result<u8, KnotError> {
    record.validate()?;
    let v = &record.seifert;
    let n = v.rows();
    if n == 0 {
        return Ok(0);
    }
    let skew = v.add(&v.transpose().neg());
    let p = symplectic_base_change(&skew)?;
    let moved = v.congruent_transform(&p)?;
    let mut acc = BigInt::zero();
    for i in (0..n).step_by(2) {
        acc += &moved[(i, i)] * &moved[(i + 1, i + 1)];
    }
    Ok(if acc.is_odd() { 1 } else { 0 })
}

/// Unimodular P with Pᵀ·S·P = ⊕ [[0,1],[-1,0]] for unimodular skew S.
fn symplectic_base_change(s: &ExactMatrix) -> Result<ExactMatrix, KnotError> {
    let n = s.rows();
    let mut m = s.clone();
    let mut p = ExactMatrix::identity(n);

    let add_pair = |m: &mut ExactMatrix, p: &mut ExactMatrix, dst: usize, src: usize, c: &BigInt| {
        // column dst += c * column src, and the matching row move
        for i in 0..m.rows() {
            let t = &m[(i, src)] * c;
            m[(i, dst)] += t;
        }
        for j in 0..m.cols() {
            let t = &m[(src, j)] * c;
            m[(dst, j)] += t;
        }
        for i in 0..p.rows() {
            let t = &p[(i, src)] * c;
            p[(i, dst)] += t;
        }
    };
    let swap_pair = |m: &mut ExactMatrix, p: &mut ExactMatrix, a: usize, b: usize| {
        for i in 0..m.rows() {
            let t = m[(i, a)].clone();
            m[(i, a)] = m[(i, b)].clone();
            m[(i, b)] = t;
        }
        for j in 0..m.cols() {
            let t = m[(a, j)].clone();
            m[(a, j)] = m[(b, j)].clone();
            m[(b, j)] = t;
        }
        for i in 0..p.rows() {
            let t = p[(i, a)].clone();
            p[(i, a)] = p[(i, b)].clone();
            p[(i, b)] = t;
        }
    };
    let negate_col = |m: &mut ExactMatrix, p: &mut ExactMatrix, a: usize| {
        for i in 0..m.rows() {
            let t = -&m[(i, a)];
            m[(i, a)] = t;
        }
        for j in 0..m.cols() {
            let t = -&m[(a, j)];
            m[(a, j)] = t;
        }
        for i in 0..p.rows() {
            let t = -&p[(i, a)];
            p[(i, a)] = t;
        }
    };

    let mut o = 0;
    let mut guard = 0u32;
    while o < n {
        // concentrate a ±1 at (o, o+1) by Euclidean reduction
        loop {
            guard += 1;
            assert!(guard < 100_000, "symplectic reduction failed to terminate");
            // minimal nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in o..n {
                for j in (i + 1)..n {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some((i, j)),
                        Some((bi, bj)) => {
                            if m[(i, j)].abs() < m[(bi, bj)].abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Err(KnotError::NotSeifert {
                    name: String::from("<internal>"),
                    det: BigInt::zero(),
                });
            };
            if m[(bi, bj)].clone().abs().is_one() {
                if bi != o {
                    swap_pair(&mut m, &mut p, bi, o);
                }
                let bj = if bj == o { bi } else { bj };
                if bj != o + 1 {
                    swap_pair(&mut m, &mut p, bj, o + 1);
                }
                if m[(o, o + 1)].is_negative() {
                    negate_col(&mut m, &mut p, o + 1);
                }
                break;
            }
            // reduce some entry of row bi or row bj by the minimal one
            let g = m[(bi, bj)].clone();
            let mut progressed = false;
            'reduce: for &row in &[bi, bj] {
                for k in o..n {
                    if k == row {
                        continue;
                    }
                    let val = m[(row, k)].clone();
                    if val.is_zero() || (&val % &g).is_zero() {
                        continue;
                    }
                    // col_k -= q·col_partner, where m[(row, partner)] = ±g
                    let partner = if row == bi { bj } else { bi };
                    let q = div_round_big(&val, &m[(row, partner)]);
                    add_pair(&mut m, &mut p, k, partner, &(-q));
                    progressed = true;
                    break 'reduce;
                }
            }
            if !progressed {
                // all entries in rows bi, bj divisible by g: mix another
                // non-divisible entry into row bi
                let mut mixed = false;
                'mix: for i in o..n {
                    for j in (i + 1)..n {
                        if !(&m[(i, j)] % &g).is_zero() {
                            // add column i (and row i) into column bi
                            let target = if i == bi || i == bj { j } else { i };
                            add_pair(&mut m, &mut p, bi, target, &BigInt::one());
                            mixed = true;
                            break 'mix;
                        }
                    }
                }
                if !mixed {
                    // g divides everything; by unimodularity g = ±1, so the
                    // |g| = 1 branch above must have caught it
                    return Err(KnotError::NotSeifert {
                        name: String::from("<internal>"),
                        det: g,
                    });
                }
            }
        }
        // clear the rest of rows/columns o and o+1
        for k in (o + 2)..n {
            let c = m[(o, k)].clone();
            if !c.is_zero() {
                add_pair(&mut m, &mut p, k, o + 1, &(-c));
            }
            let c2 = m[(o + 1, k)].clone();
            if !c2.is_zero() {
                add_pair(&mut m, &mut p, k, o, &c2);
            }
            debug_assert!(m[(o, k)].is_zero() && m[(o + 1, k)].is_zero());
        }
        o += 2;
    }
    // final shape check
    for i in 0..n {
        for j in 0..n {
            let expect = if i + 1 == j && i % 2 == 0 {
                BigInt::one()
            } else if j + 1 == i && j % 2 == 0 {
                -BigInt::one()
            } else {
                BigInt::zero()
            };
            debug_assert_eq!(m[(i, j)], expect, "symplectic reduction failed at ({i},{j})");
        }
    }
    Ok(p)
}

fn div_round_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.abs() * 2u32 > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Standard small knots used throughout the tests and the documentation.
pub mod standard {
    use super::*;

    pub fn unknot() -> KnotRecord {
        KnotRecord::new("unknot", ExactMatrix::zero(0, 0), "builtin")
    }

    pub fn trefoil() -> KnotRecord {
        KnotRecord::new(
            "trefoil",
            ExactMatrix::from_rows(&[vec![-1, 1], vec![0, -1]]),
            "builtin",
        )
    }

    pub fn figure_eight() -> KnotRecord {
        KnotRecord::new(
            "figure8",
            ExactMatrix::from_rows(&[vec![1, 1], vec![0, -1]]),
            "builtin",
        )
    }

    /// Connected sum of two trefoils of the same handedness.
    pub fn granny() -> KnotRecord {
        let t = trefoil().seifert;
        KnotRecord::new("granny", t.block_sum(&t), "builtin")
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validation() {
        assert!(trefoil().validate().is_ok());
        assert!(unknot().validate().is_ok());
        let odd = KnotRecord::new("odd", ExactMatrix::from_rows(&[vec![1]]), "t");
        assert!(matches!(odd.validate(), Err(KnotError::OddSize { .. })));
        let bad = KnotRecord::new("bad", ExactMatrix::zero(2, 2), "t");
        assert!(matches!(bad.validate(), Err(KnotError::NotSeifert { .. })));
    }

    #[test]
    fn determinants() {
        assert_eq!(trefoil().determinant().unwrap(), BigInt::from(3));
        assert_eq!(unknot().determinant().unwrap(), BigInt::from(1));
        assert_eq!(figure_eight().determinant().unwrap(), BigInt::from(5));
        assert_eq!(granny().determinant().unwrap(), BigInt::from(9));
    }

    #[test]
    fn determinant_is_alexander_at_minus_one() {
        for k in [unknot(), trefoil(), figure_eight(), granny()] {
            let delta = k.alexander().unwrap();
            assert_eq!(k.determinant().unwrap(), delta.eval_at_pm1(-1).abs(), "{}", k.name);
        }
    }

    #[test]
    fn signatures_at_minus_one() {
        assert_eq!(lt_signature(&trefoil(), Omega::MinusOne).unwrap(), -2);
        assert_eq!(lt_signature(&unknot(), Omega::MinusOne).unwrap(), 0);
        assert_eq!(lt_signature(&figure_eight(), Omega::MinusOne).unwrap(), 0);
        assert_eq!(lt_signature(&granny(), Omega::MinusOne).unwrap(), -4);
    }

    #[test]
    fn signature_at_i_trefoil() {
        // H = [[-2, 1-i], [1+i, -2]], eigenvalues -2 ± √2: signature -2
        let sig = lt_signature(&trefoil(), Omega::TwoPowerRoot { a: 2, k: 1 }).unwrap();
        assert_eq!(sig, -2);
        // figure-eight at i: H = [[2, 1-i],[1+i, -2]]: det = -4-2 < 0: sig 0
        let sig8 = lt_signature(&figure_eight(), Omega::TwoPowerRoot { a: 2, k: 1 }).unwrap();
        assert_eq!(sig8, 0);
    }

    #[test]
    fn two_power_roots_never_hit_alexander_roots() {
        // Φ_{2^a}(1) = 2 while Δ(1) = 1, so no knot Alexander polynomial has
        // a 2-power cyclotomic factor; the whole sample set is always usable.
        for k in [trefoil(), figure_eight(), granny()] {
            let delta = k.alexander().unwrap();
            for a in 1..=6 {
                assert!(!delta.divisible_by_cyclotomic_pow2(a), "{} a={a}", k.name);
            }
        }
        for omega in omega_sample_set() {
            lt_signature(&granny(), omega).unwrap();
        }
    }

    #[test]
    fn arf_examples() {
        assert_eq!(arf(&unknot()).unwrap(), 0);
        assert_eq!(arf(&trefoil()).unwrap(), 1);
        assert_eq!(arf(&figure_eight()).unwrap(), 1);
        assert_eq!(arf(&granny()).unwrap(), 0); // 1 + 1 mod 2
    }

    #[test]
    fn min_generators() {
        assert_eq!(trefoil().min_generators_double_cover().unwrap(), 1);
        assert_eq!(unknot().min_generators_double_cover().unwrap(), 0);
        assert_eq!(granny().min_generators_double_cover().unwrap(), 2);
    }

    #[test]
    fn omega_sample_set_size() {
        let set = omega_sample_set();
        assert_eq!(set.len(), 1 + 1 + 2 + 4 + 8 + 16);
        assert!(set.iter().all(|o| match o {
            Omega::MinusOne => true,
            Omega::TwoPowerRoot { a, k } => k % 2 == 1 && *k < (1 << (a - 1)),
        }));
    }

    /// At ω = i the Hermitian matrix (1-i)V + (1+i)Vᵀ has integer real and
    /// imaginary parts Re = V+Vᵀ, Im = Vᵀ-V; the symmetric realification
    /// [[Re, -Im], [Im, Re]] doubles every eigenvalue, so its exact integer
    /// signature halves to σ_i — an interval-free second route.
    fn signature_at_i_by_realification(v: &ExactMatrix) -> i64 {
        let n = v.rows();
        let re = v.add(&v.transpose());
        let im = v.transpose().add(&v.neg());
        let mut m = ExactMatrix::zero(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = re[(i, j)].clone();
                m[(n + i, n + j)] = re[(i, j)].clone();
                m[(i, n + j)] = -&im[(i, j)];
                m[(n + i, j)] = im[(i, j)].clone();
            }
        }
        let sig = m.signature().unwrap();
        assert_eq!(sig % 2, 0);
        sig / 2
    }

    #[test]
    fn interval_signature_matches_realification_at_i() {
        let knots = [trefoil(), figure_eight(), granny()];
        for k in &knots {
            let by_interval = lt_signature(k, Omega::TwoPowerRoot { a: 2, k: 1 }).unwrap();
            let by_realification = signature_at_i_by_realification(&k.seifert);
            assert_eq!(by_interval, by_realification, "{}", k.name);
        }
        // connected sums shuffle the spectrum around; cross-check a few
        let sum = trefoil().seifert.block_sum(&figure_eight().seifert);
        let rec = KnotRecord::new("sum", sum, "test");
        assert_eq!(
            lt_signature(&rec, Omega::TwoPowerRoot { a: 2, k: 1 }).unwrap(),
            signature_at_i_by_realification(&rec.seifert)
        );
    }

    fn unimodular(n: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec((0..n, 0..n, -2i64..=2), 1..5).prop_map(move |ops| {
            let mut t = ExactMatrix::identity(n);
            for (i, j, c) in ops {
                if i == j {
                    continue;
                }
                let mut e = ExactMatrix::identity(n);
                e[(i, j)] = BigInt::from(c);
                t = t.mul(&e);
            }
            t
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn arf_is_congruence_invariant(t in unimodular(4), pick in 0usize..2) {
            let base = if pick == 0 { granny() } else {
                let v = trefoil().seifert.block_sum(&figure_eight().seifert);
                KnotRecord::new("sum", v, "test")
            };
            let moved = KnotRecord::new(
                base.name.clone(),
                base.seifert.congruent_transform(&t).unwrap(),
                "moved",
            );
            prop_assert!(moved.validate().is_ok());
            prop_assert_eq!(arf(&moved).unwrap(), arf(&base).unwrap());
        }

        #[test]
        fn interval_and_realification_agree_at_i(t in unimodular(4)) {
            let base = granny().seifert.congruent_transform(&t).unwrap();
            let rec = KnotRecord::new("moved", base, "test");
            prop_assert!(rec.validate().is_ok());
            let by_interval = lt_signature(&rec, Omega::TwoPowerRoot { a: 2, k: 1 }).unwrap();
            prop_assert_eq!(by_interval, signature_at_i_by_realification(&rec.seifert));
        }

        #[test]
        fn lt_at_minus_one_is_symmetrized_signature(t in unimodular(2)) {
            let moved = KnotRecord::new(
                "tre",
                trefoil().seifert.congruent_transform(&t).unwrap(),
                "moved",
            );
            let s = moved.seifert.add(&moved.seifert.transpose());
            prop_assert_eq!(
                lt_signature(&moved, Omega::MinusOne).unwrap(),
                s.signature().unwrap()
            );
            // bounded by the matrix size
            prop_assert!(lt_signature(&moved, Omega::MinusOne).unwrap().abs() <= 2);
        }
    }
}
