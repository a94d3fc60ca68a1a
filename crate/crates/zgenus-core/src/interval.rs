//! Dyadic interval arithmetic with directed rounding, for certified sign
//! decisions about algebraic real numbers (cosines of 2-power angles and the
//! entries they generate). An interval certifies a sign only when zero lies
//! strictly outside it, or when it is the exact point zero.

use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// m · 2^e with arbitrary-precision mantissa.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        Dyadic { m, e }
    }

    pub fn from_int(x: impl Into<BigInt>) -> Self {
        Dyadic { m: x.into(), e: 0 }
    }

    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn sign(&self) -> i8 {
        match self.m.sign() {
            Sign::Plus => 1,
            Sign::NoSign => 0,
            Sign::Minus => -1,
        }
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, i64) {
        // bring both to the smaller exponent
        let e = self.e.min(other.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &other.m << (other.e - e) as usize;
        (a, b, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, e) = self.align(other);
        Dyadic { m: a + b, e }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, e) = self.align(other);
        Dyadic { m: a - b, e }
    }

    pub fn neg(&self) -> Self {
        Dyadic { m: -&self.m, e: self.e }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic { m: &self.m * &other.m, e: self.e + other.e }
    }

    pub fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }

    /// Round to at most `prec` mantissa bits, toward -inf.
    pub fn round_down(&self, prec: u64) -> Self {
        let bits = self.m.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = (bits - prec) as usize;
        // BigInt >> rounds toward -inf for negative numbers (floor division)
        Dyadic { m: &self.m >> shift, e: self.e + shift as i64 }
    }

    /// Round to at most `prec` mantissa bits, toward +inf.
    pub fn round_up(&self, prec: u64) -> Self {
        let bits = self.m.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = (bits - prec) as usize;
        let down = &self.m >> shift;
        let back = &down << shift;
        let m = if back == self.m { down } else { down + 1 };
        Dyadic { m, e: self.e + shift as i64 }
    }

    /// Largest dyadic with `prec` mantissa bits whose square is <= self.
    pub fn sqrt_down(&self, prec: u64) -> Self {
        assert!(!self.m.is_negative());
        if self.m.is_zero() {
            return Dyadic::zero();
        }
        // scale so the exponent is even and the mantissa has >= 2 prec bits
        let mut extra = 0i64;
        while (self.m.bits() as i64 + extra) < 2 * prec as i64 || (self.e - extra) % 2 != 0 {
            extra += 1;
        }
        let scaled = &self.m << extra as usize;
        let root = scaled.sqrt(); // floor integer square root
        Dyadic { m: root, e: (self.e - extra) / 2 }
    }

    /// Smallest dyadic with `prec` mantissa bits whose square is >= self.
    pub fn sqrt_up(&self, prec: u64) -> Self {
        assert!(!self.m.is_negative());
        if self.m.is_zero() {
            return Dyadic::zero();
        }
        let mut extra = 0i64;
        while (self.m.bits() as i64 + extra) < 2 * prec as i64 || (self.e - extra) % 2 != 0 {
            extra += 1;
        }
        let scaled = &self.m << extra as usize;
        let root = scaled.sqrt();
        let m = if &root * &root == scaled { root } else { root + 1 };
        Dyadic { m, e: (self.e - extra) / 2 }
    }

    /// Directed reciprocal bounds: (down, up) with down <= 1/self <= up.
    /// Requires self != 0.
    fn recip_bounds(&self, prec: u64) -> (Dyadic, Dyadic) {
        assert!(!self.m.is_zero());
        let negate = self.m.is_negative();
        let m = self.m.abs();
        let shift = prec + m.bits();
        let num = BigInt::one() << shift as usize;
        let (q, r) = num.div_rem(&m);
        let down = Dyadic { m: q.clone(), e: -self.e - shift as i64 };
        let up = Dyadic {
            m: if r.is_zero() { q } else { q + 1 },
            e: -self.e - shift as i64,
        };
        if negate {
            (up.neg(), down.neg())
        } else {
            (down, up)
        }
    }
}

/// Closed interval with dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn exact(x: impl Into<BigInt>) -> Self {
        let d = Dyadic::from_int(x);
        Interval { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        Interval::exact(0)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u64) -> Self {
        debug_assert!(lo.cmp(&hi) != core::cmp::Ordering::Greater);
        Interval { lo: lo.round_down(prec), hi: hi.round_up(prec) }
    }

    pub fn add(&self, other: &Self, prec: u64) -> Self {
        Interval::rounded(self.lo.add(&other.lo), self.hi.add(&other.hi), prec)
    }

    pub fn sub(&self, other: &Self, prec: u64) -> Self {
        Interval::rounded(self.lo.sub(&other.hi), self.hi.sub(&other.lo), prec)
    }

    pub fn neg(&self) -> Self {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, other: &Self, prec: u64) -> Self {
        let candidates = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if c.cmp(&lo) == core::cmp::Ordering::Less {
                lo = c.clone();
            }
            if c.cmp(&hi) == core::cmp::Ordering::Greater {
                hi = c.clone();
            }
        }
        Interval::rounded(lo, hi, prec)
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let a = self.lo.mul(&Dyadic::from_int(c.clone()));
        let b = self.hi.mul(&Dyadic::from_int(c.clone()));
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    /// Certified sign: +1 / -1 when zero lies strictly outside, 0 when the
    /// interval is the exact point zero, None otherwise.
    pub fn certified_sign(&self) -> Option<i8> {
        if self.lo.sign() > 0 {
            Some(1)
        } else if self.hi.sign() < 0 {
            Some(-1)
        } else if self.is_exact_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// 1/self; requires a certified nonzero sign.
    pub fn recip(&self, prec: u64) -> Self {
        let (lo_down, _) = self.hi.recip_bounds(prec);
        let (_, hi_up) = self.lo.recip_bounds(prec);
        Interval { lo: lo_down, hi: hi_up }
    }

    /// Square root of a non-negative interval; the lower endpoint is clamped
    /// to zero if rounding drove it negative.
    pub fn sqrt(&self, prec: u64) -> Self {
        let lo = if self.lo.sign() < 0 { Dyadic::zero() } else { self.lo.sqrt_down(prec) };
        Interval { lo, hi: self.hi.sqrt_up(prec) }
    }

    fn half(&self, prec: u64) -> Self {
        Interval::rounded(
            Dyadic { m: self.lo.m.clone(), e: self.lo.e - 1 },
            Dyadic { m: self.hi.m.clone(), e: self.hi.e - 1 },
            prec,
        )
    }
}

/// Complex number with interval real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn exact(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        ComplexInterval { re: Interval::exact(re), im: Interval::exact(im) }
    }

    pub fn add(&self, other: &Self, prec: u64) -> Self {
        ComplexInterval {
            re: self.re.add(&other.re, prec),
            im: self.im.add(&other.im, prec),
        }
    }

    pub fn sub(&self, other: &Self, prec: u64) -> Self {
        ComplexInterval {
            re: self.re.sub(&other.re, prec),
            im: self.im.sub(&other.im, prec),
        }
    }

    pub fn mul(&self, other: &Self, prec: u64) -> Self {
        ComplexInterval {
            re: self.re.mul(&other.re, prec).sub(&self.im.mul(&other.im, prec), prec),
            im: self.re.mul(&other.im, prec).add(&self.im.mul(&other.re, prec), prec),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexInterval { re: self.re.clone(), im: self.im.neg() }
    }

    /// Multiply by i.
    pub fn times_i(&self) -> Self {
        ComplexInterval { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_exact_zero() && self.im.is_exact_zero()
    }

    /// Division by a real interval with certified sign.
    pub fn div_real(&self, d: &Interval, prec: u64) -> Self {
        let r = d.recip(prec);
        ComplexInterval { re: self.re.mul(&r, prec), im: self.im.mul(&r, prec) }
    }
}

/// cos and sin of 2π/2^a as intervals, by the half-angle tower from
/// cos(π/2) = 0: cos(θ/2) = sqrt((1+cos θ)/2), sin(θ/2) = sqrt((1-cos θ)/2).
pub fn primitive_root_of_unity(a: u32, prec: u64) -> ComplexInterval {
    assert!(a >= 1);
    if a == 1 {
        return ComplexInterval::exact(-1, 0); // 2π/2 = π
    }
    if a == 2 {
        return ComplexInterval::exact(0, 1); // i
    }
    // angle π/2^(a-1): start with cos(π/2) = 0, halve a-2 times
    let one = Interval::exact(1);
    let mut cos = Interval::zero();
    let mut last_cos_before = Interval::zero();
    for _ in 0..(a - 2) {
        last_cos_before = cos.clone();
        cos = one.add(&cos, prec).half(prec).sqrt(prec);
    }
    let sin = one.sub(&last_cos_before, prec).half(prec).sqrt(prec);
    ComplexInterval { re: cos, im: sin }
}

/// ω^k by repeated multiplication.
pub fn complex_power(omega: &ComplexInterval, k: u64, prec: u64) -> ComplexInterval {
    let mut acc = ComplexInterval::exact(1, 0);
    for _ in 0..k {
        acc = acc.mul(omega, prec);
    }
    acc
}

/// Signature of a Hermitian matrix of complex intervals by congruence
/// elimination. Returns None when a sign cannot be certified at this
/// precision. Diagonal entries must have exactly zero imaginary part.
pub fn hermitian_signature(h: &[Vec<ComplexInterval>], prec: u64) -> Option<i64> {
    let n = h.len();
    let mut m: Vec<Vec<ComplexInterval>> = h.to_vec();
    let mut live: Vec<usize> = (0..n).collect();
    let mut sig: i64 = 0;
    'outer: while !live.is_empty() {
        // certified nonzero diagonal pivot?
        let pivot = live
            .iter()
            .position(|&i| matches!(m[i][i].re.certified_sign(), Some(1) | Some(-1)));
        if let Some(pos) = pivot {
            let p = live[pos];
            let pivot_val = m[p][p].re.clone();
            sig += m[p][p].re.certified_sign().unwrap() as i64;
            live.remove(pos);
            let live_now = live.clone();
            // snapshot the pivot column: the corrections of every remaining
            // row read it, and it must not be zeroed under their feet
            let col: alloc::vec::Vec<ComplexInterval> =
                live_now.iter().map(|&i| m[i][p].clone()).collect();
            for (ai, &i) in live_now.iter().enumerate() {
                let f = col[ai].clone();
                if f.is_exact_zero() {
                    continue;
                }
                for (aj, &j) in live_now.iter().enumerate() {
                    // h_ij -= h_ip * conj(h_jp) / h_pp
                    let num = f.mul(&col[aj].conj(), prec);
                    let corr = num.div_real(&pivot_val, prec);
                    m[i][j] = m[i][j].sub(&corr, prec);
                }
            }
            for &i in &live_now {
                m[i][p] = ComplexInterval::exact(0, 0);
                m[p][i] = ComplexInterval::exact(0, 0);
            }
            // re-zero the diagonal imaginary parts (they are mathematically 0)
            for &i in &live {
                if m[i][i].im.certified_sign() == Some(0) {
                    m[i][i].im = Interval::zero();
                }
            }
            continue;
        }
        // no certified diagonal: if everything left is exactly zero, done
        let all_zero = live
            .iter()
            .all(|&i| live.iter().all(|&j| m[i][j].is_exact_zero()));
        if all_zero {
            break;
        }
        // find a certified nonzero off-diagonal entry and mix it into a
        // diagonal slot: v_i <- v_i + c v_j with c = 1 or i
        for (pi, &i) in live.iter().enumerate() {
            for &j in live.iter().skip(pi + 1) {
                let entry = &m[i][j];
                let re_ok = matches!(entry.re.certified_sign(), Some(1) | Some(-1));
                let im_ok = matches!(entry.im.certified_sign(), Some(1) | Some(-1));
                if !re_ok && !im_ok {
                    continue;
                }
                for use_i in [false, true] {
                    let mut trial = m.clone();
                    transvect(&mut trial, i, j, use_i, prec);
                    if matches!(trial[i][i].re.certified_sign(), Some(1) | Some(-1)) {
                        m = trial;
                        continue 'outer;
                    }
                }
            }
        }
        return None; // refine precision
    }
    Some(sig)
}

/// v_i <- v_i + c v_j with c = 1 (use_i = false) or c = i (use_i = true).
fn transvect(m: &mut [Vec<ComplexInterval>], i: usize, j: usize, use_i: bool, prec: u64) {
    let n = m.len();
    let c = if use_i {
        ComplexInterval::exact(0, 1)
    } else {
        ComplexInterval::exact(1, 0)
    };
    let cbar = c.conj();
    // h_ii' = h_ii + c h_ij + cbar h_ji + h_jj  (|c|² = 1)
    let new_ii = m[i][i]
        .add(&c.mul(&m[i][j], prec), prec)
        .add(&cbar.mul(&m[j][i], prec), prec)
        .add(&m[j][j], prec);
    for k in 0..n {
        if k == i {
            continue;
        }
        // h_ik' = h_ik + cbar h_jk ; h_ki' = conj
        m[i][k] = m[i][k].add(&cbar.mul(&m[j][k], prec), prec);
        m[k][i] = m[i][k].conj();
    }
    m[i][i] = new_ii;
    if m[i][i].im.certified_sign() == Some(0) {
        m[i][i].im = Interval::zero();
    }
}

/// Precision ladder used by the signature computations.
pub const PRECISIONS: [u64; 4] = [128, 256, 512, 1024];

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_f64(d: &Dyadic) -> f64 {
        use num_traits::ToPrimitive;
        let scaled = d.round_down(52);
        scaled.m.to_f64().unwrap() * 2f64.powi(scaled.e as i32)
    }

    #[test]
    fn dyadic_rounding_directions() {
        let third_ish = Dyadic::new(BigInt::from(0b101010101u64), -9);
        let down = third_ish.round_down(4);
        let up = third_ish.round_up(4);
        assert!(down.cmp(&third_ish) != core::cmp::Ordering::Greater);
        assert!(up.cmp(&third_ish) != core::cmp::Ordering::Less);
        let neg = third_ish.neg();
        assert!(neg.round_down(4).cmp(&neg) != core::cmp::Ordering::Greater);
        assert!(neg.round_up(4).cmp(&neg) != core::cmp::Ordering::Less);
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt_down(100);
        let hi = two.sqrt_up(100);
        assert!(lo.mul(&lo).cmp(&two) != core::cmp::Ordering::Greater);
        assert!(hi.mul(&hi).cmp(&two) != core::cmp::Ordering::Less);
        assert!((approx_f64(&lo) - 1.41421356).abs() < 1e-6);
    }

    #[test]
    fn roots_of_unity_values() {
        let prec = 128;
        let i8th = primitive_root_of_unity(3, prec); // exp(iπ/4)
        let c = approx_f64(&i8th.re.lo);
        let s = approx_f64(&i8th.im.lo);
        assert!((c - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((s - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        // ω^(2^(a-1)) = -1
        let w = primitive_root_of_unity(4, prec);
        let m1 = complex_power(&w, 8, prec);
        assert_eq!(m1.re.certified_sign(), Some(-1));
        assert_eq!(m1.im.certified_sign(), None); // tiny interval around 0
        let sixteenth = primitive_root_of_unity(4, prec);
        assert!((approx_f64(&sixteenth.re.lo) - (core::f64::consts::PI / 8.0).cos()).abs() < 1e-9);
    }

    #[test]
    fn signature_of_exact_matrices() {
        let h = vec![
            vec![ComplexInterval::exact(2, 0), ComplexInterval::exact(0, 1)],
            vec![ComplexInterval::exact(0, -1), ComplexInterval::exact(-3, 0)],
        ];
        // eigenvalues of [[2,i],[-i,-3]]: det = -6 - 1 = -7 < 0: signature 0
        assert_eq!(hermitian_signature(&h, 128), Some(0));
        let d = vec![
            vec![ComplexInterval::exact(1, 0), ComplexInterval::exact(0, 0)],
            vec![ComplexInterval::exact(0, 0), ComplexInterval::exact(5, 0)],
        ];
        assert_eq!(hermitian_signature(&d, 128), Some(2));
        // zero diagonal, hyperbolic: signature 0 via the mixing transvection
        let hyp = vec![
            vec![ComplexInterval::exact(0, 0), ComplexInterval::exact(0, 2)],
            vec![ComplexInterval::exact(0, -2), ComplexInterval::exact(0, 0)],
        ];
        assert_eq!(hermitian_signature(&hyp, 128), Some(0));
        let zero = vec![vec![ComplexInterval::exact(0, 0)]];
        assert_eq!(hermitian_signature(&zero, 128), Some(0));
    }
}
