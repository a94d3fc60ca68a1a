//! The verification suite: one machine-checked criterion per entry, each
//! printing a single pass/fail line. `zgenus selftest` and the `acceptance`
//! integration test both run exactly this code.

use std::fmt::Write as _;
use std::time::Instant;

use zgenus_core::blanch::{
    even_to_odd, normalize_blanchfield, sample_indefinite_unimodular,
};
use zgenus_core::bounds::{report, LowerTag, SearchParams};
use zgenus_core::crit2::{
    construct_witness, criterion_b, exhaustive_2x2_oracle, jacobi, jacobi_by_factorization,
    matrix_from_witness, Cor53Case, CriterionInput, OracleParity,
};
use zgenus_core::cycres::{
    all_pairings_isometric, surjectivity_check, NormOrTrace, QuotRing,
};
use zgenus_core::exactmat::{in_image, snf, ExactMatrix};
use zgenus_core::finpair::{isometry_search, pairing_from_matrix, FinitePairing};
use zgenus_core::knot::standard;
use zgenus_core::laurent::{HermitianLambdaMatrix, LambdaMatrix, LaurentPoly};
use zgenus_core::num_bigint::BigInt;

use crate::formats::parse_knot_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Pass => write!(f, "PASS"),
            Status::Fail => write!(f, "FAIL"),
            Status::Skipped => write!(f, "SKIPPED"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub status: Status,
    pub details: String,
    pub millis: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {}: {} [{} ms] {} — {}",
            self.id, self.status, self.millis, self.name, self.details
        )
    }
}

/// Environment variable naming a knot file with Seifert matrices for the
/// table-reproduction criterion. Without it the criterion is skipped.
pub const TABLE1_ENV: &str = "ZGENUS_TABLE1";

/// Witness prime search bound override.
pub const PRIME_BOUND_ENV: &str = "PRIME_BOUND";
/// Isometry/oracle candidate budget override.
pub const OBSTRUCT_BUDGET_ENV: &str = "OBSTRUCT_BUDGET";

fn env_u64(name: &str, default: u64) -> u64 {
    std::env::var(name)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

/// Run every criterion and collect the outcomes.
pub fn run_all() -> Vec<CriterionOutcome> {
    let runners: [(usize, &'static str, fn() -> Result<String, String>); 8] = [
        (1, "cokernel annihilator, determinants, isometry of the worked pair", c1_worked_pair),
        (2, "norm value, odd-cover isometries, and the mod-7 contrast", c2_cyclotomic),
        (3, "two-generator criterion vs exhaustive oracle, q2 <= 27", c3_equivalence_sweep),
        (4, "normalization certificates on 200 random Hermitian matrices", c4_normalization_fuzz),
        (5, "norm/trace surjectivity and isometry sweep over small covers", c5_cover_sweep),
        (6, "classical invariants of the standard knots", c6_classical),
        (7, "table reproduction from supplied Seifert data", c7_table1),
        (8, "Jacobi symbol against Legendre-product factorization", c8_jacobi),
    ];
    let mut out = Vec::new();
    for (id, name, f) in runners {
        let start = Instant::now();
        let (status, details) = match f() {
            Ok(d) if d == "SKIPPED_NO_DATA" => {
                (Status::Skipped, String::from("no Seifert data supplied; see README"))
            }
            Ok(d) => (Status::Pass, d),
            Err(e) => (Status::Fail, e),
        };
        out.push(CriterionOutcome {
            id,
            name,
            status,
            details,
            millis: start.elapsed().as_millis(),
        });
    }
    out
}

pub fn all_passed(outcomes: &[CriterionOutcome]) -> bool {
    outcomes.iter().all(|o| o.status != Status::Fail)
}

fn c1_worked_pair() -> Result<String, String> {
    let a = ExactMatrix::from_rows(&[vec![12, 3], vec![3, 24]]);
    let b = ExactMatrix::from_rows(&[vec![3, 3], vec![3, 96]]);
    let s = snf(&a);
    let ann = s.d.last().cloned().ok_or("empty SNF")?;
    if ann != BigInt::from(93) {
        return Err(format!("annihilator generator {ann}, expected 93"));
    }
    for i in 0..2 {
        let mut v = vec![BigInt::from(0); 2];
        v[i] = BigInt::from(93);
        if !in_image(&a, &v) {
            return Err(format!("93·e{} not in the image", i + 1));
        }
    }
    let det_a = a.determinant().map_err(|e| e.to_string())?;
    let det_b = b.determinant().map_err(|e| e.to_string())?;
    if det_a != BigInt::from(279) || det_b != BigInt::from(279) {
        return Err(format!("determinants {det_a}, {det_b}, expected 279, 279"));
    }
    let pa = pairing_from_matrix(&a).map_err(|e| e.to_string())?;
    let pb = pairing_from_matrix(&b).map_err(|e| e.to_string())?;
    let budget = env_u64(OBSTRUCT_BUDGET_ENV, 100_000);
    match isometry_search(&pa, &pb, budget).map_err(|e| e.to_string())? {
        Some(_) => Ok(String::from(
            "annihilator 93, det 279 = 279, pairings isometric",
        )),
        None => Err(String::from("pairings reported non-isometric")),
    }
}

fn c2_cyclotomic() -> Result<String, String> {
    let ring = QuotRing::prime_power(3, 7, 1).map_err(|e| e.to_string())?;
    let x = ring.from_coeffs(&[3, 6]);
    let n = ring.norm(&x);
    if n != ring.from_int(-1) {
        return Err(format!("norm(3+6t) = {}, expected -1", ring.display(&n)));
    }
    if !all_pairings_isometric(3, 7, 1).map_err(|e| e.to_string())? {
        return Err(String::from("pairings over Z[t]/(7,Φ3) not all isometric"));
    }
    // the double-cover contrast: 1/7 vs -1/7 on Z/7 are NOT isometric
    let p1 = FinitePairing::from_cyclic(&[(BigInt::from(7), BigInt::from(1))]);
    let p2 = FinitePairing::from_cyclic(&[(BigInt::from(7), BigInt::from(6))]);
    match isometry_search(&p1, &p2, 10_000).map_err(|e| e.to_string())? {
        None => Ok(String::from(
            "norm(3+6t) = -1 mod 7; odd-cover pairings isometric; 1/7 vs -1/7 not",
        )),
        Some(_) => Err(String::from("1/7 and -1/7 must not be isometric over Z")),
    }
}

fn c3_equivalence_sweep() -> Result<String, String> {
    let prime_bound = env_u64(PRIME_BOUND_ENV, 1_000_000) as i64;
    let iso_budget = env_u64(OBSTRUCT_BUDGET_ENV, 5_000_000);
    let mut true_count = 0u64;
    let mut false_count = 0u64;
    let mut diagnostics = String::new();
    for q2 in (1..=27i64).step_by(2) {
        for q1 in (1..=q2).step_by(2) {
            if q2 % q1 != 0 {
                continue;
            }
            for a1 in 1..=q1 {
                if num_gcd(a1, q1) != 1 {
                    continue;
                }
                for a2 in 1..=q2 {
                    if num_gcd(a2, q2) != 1 {
                        continue;
                    }
                    for u in [1i8, -1] {
                        let input = CriterionInput::new(a1, q1, a2, q2, u)
                            .map_err(|e| e.to_string())?;
                        let b = criterion_b(&input).map_err(|e| e.to_string())?;
                        if b {
                            let w = construct_witness(&input, prime_bound).map_err(|e| {
                                format!("witness failed for ({a1},{q1},{a2},{q2},{u}): {e}")
                            })?;
                            matrix_from_witness(&w, &input, iso_budget).map_err(|e| {
                                format!("matrix failed for ({a1},{q1},{a2},{q2},{u}): {e}")
                            })?;
                            true_count += 1;
                        } else {
                            let found = exhaustive_2x2_oracle(
                                &input.diagonal_pairing(),
                                u,
                                200,
                                OracleParity::OddOnly,
                                iso_budget,
                            )
                            .map_err(|e| e.to_string())?;
                            if let Some(m) = found {
                                return Err(format!(
                                    "criterion false for ({a1},{q1},{a2},{q2},{u}) but the \
                                     oracle found {m:?}"
                                ));
                            }
                            false_count += 1;
                        }
                    }
                }
            }
        }
    }
    // diagnostic only: even 2x2 presentations for obstructed pairings are
    // outside the odd-matrix statement but interesting to log
    for (a1, q1, a2, q2) in [(1i64, 3i64, 1i64, 3i64), (2, 3, 2, 3)] {
        let input = CriterionInput::new(a1, q1, a2, q2, -1).map_err(|e| e.to_string())?;
        if let Some(m) = exhaustive_2x2_oracle(
            &input.diagonal_pairing(),
            -1,
            60,
            OracleParity::EvenOnly,
            iso_budget,
        )
        .map_err(|e| e.to_string())?
        {
            let _ = write!(
                diagnostics,
                "; diagnostic: even presentation {m:?} for ({a1},{q1},{a2},{q2},-1)"
            );
        }
    }
    Ok(format!(
        "{true_count} witnessed, {false_count} refuted by exhaustion, 0 mismatches{diagnostics}"
    ))
}

fn num_gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn c4_normalization_fuzz() -> Result<String, String> {
    // the literal hyperbolic case first: C = [[0,1],[1,1]] and B(1) = diag(1,-1)
    let h = HermitianLambdaMatrix::from_integer_symmetric(&ExactMatrix::from_rows(&[
        vec![0, 1],
        vec![1, 0],
    ]))
    .map_err(|e| e.to_string())?;
    let step = even_to_odd(&h).map_err(|e| e.to_string())?;
    let expect_c = LambdaMatrix::from_integer(&ExactMatrix::from_rows(&[
        vec![0, 1],
        vec![1, 1],
    ]));
    if step.c != expect_c {
        return Err(format!("even-to-odd gave {:?}, expected [[0,1],[1,1]]", step.c));
    }
    if step.det_t != LaurentPoly::one() {
        return Err(String::from("even-to-odd determinant should be 1 here"));
    }
    let cert = normalize_blanchfield(&h).map_err(|e| e.to_string())?;
    if cert.b.eval_at_pm1(1) != ExactMatrix::from_rows(&[vec![1, 0], vec![0, -1]]) {
        return Err(String::from("B(1) != diag(1,-1) for the hyperbolic case"));
    }
    cert.verify(&h).map_err(|e| e.to_string())?;

    let mut count = 0u32;
    for i in 0..200u64 {
        let size = 2 + (i % 5) as usize; // 2..=6
        let a = sample_indefinite_unimodular(0x5eed + i, size);
        let cert = normalize_blanchfield(&a)
            .map_err(|e| format!("case {i} (size {size}): {e}"))?;
        cert.verify(&a).map_err(|e| format!("case {i} verify: {e}"))?;
        count += 1;
    }
    Ok(format!(
        "literal hyperbolic case plus {count} random certificates verified exactly"
    ))
}

fn c5_cover_sweep() -> Result<String, String> {
    let mut checked = 0u32;
    for p in [3u64, 5, 7] {
        for q in [2u64, 3, 5, 7, 11, 13] {
            if q == p {
                continue;
            }
            let mut k = 1u32;
            loop {
                let size = (q as u128).pow(k * (p as u32 - 1));
                if size > 10_000 {
                    break;
                }
                let ring = QuotRing::prime_power(p, q, k).map_err(|e| e.to_string())?;
                for which in [NormOrTrace::Norm, NormOrTrace::Trace] {
                    let ok = surjectivity_check(&ring, which, 1_000_000)
                        .map_err(|e| e.to_string())?;
                    if !ok {
                        return Err(format!("{which:?} not surjective for p={p} q={q} k={k}"));
                    }
                }
                let iso = all_pairings_isometric(p, q, k).map_err(|e| e.to_string())?;
                if !iso {
                    return Err(format!("pairings not all isometric for p={p} q={q} k={k}"));
                }
                checked += 1;
                k += 1;
            }
        }
    }
    Ok(format!("{checked} rings: norm and trace surjective, all pairings isometric"))
}

fn c6_classical() -> Result<String, String> {
    // a small move budget keeps this under its time budget; for these knots
    // the walk outcome is budget-independent (no larger trivial corner exists)
    let params = SearchParams { budget: 2_000, ..Default::default() };

    let tre = standard::trefoil();
    let delta = tre.alexander().map_err(|e| e.to_string())?;
    if delta != LaurentPoly::from_terms(&[(1, 1), (0, -1), (-1, 1)]) {
        return Err(format!("trefoil Alexander polynomial {delta}"));
    }
    if tre.determinant().map_err(|e| e.to_string())? != BigInt::from(3) {
        return Err(String::from("trefoil determinant != 3"));
    }
    let sig = zgenus_core::knot::lt_signature(&tre, zgenus_core::knot::Omega::MinusOne)
        .map_err(|e| e.to_string())?;
    if sig.abs() != 2 {
        return Err(format!("trefoil signature {sig}, expected ±2"));
    }
    if zgenus_core::knot::arf(&tre).map_err(|e| e.to_string())? != 1 {
        return Err(String::from("trefoil Arf != 1"));
    }
    let rt = report(&tre, &params).map_err(|e| e.to_string())?;
    if rt.gz_exact != Some(1) {
        return Err(format!("trefoil g_Z = {:?}, expected 1", rt.gz_exact));
    }

    let unk = standard::unknot();
    let ru = report(&unk, &params).map_err(|e| e.to_string())?;
    if ru.gz_exact != Some(0)
        || !unk.alexander().map_err(|e| e.to_string())?.is_one()
        || unk.determinant().map_err(|e| e.to_string())? != BigInt::from(1)
        || zgenus_core::knot::arf(&unk).map_err(|e| e.to_string())? != 0
    {
        return Err(String::from("unknot invariants not all trivial"));
    }

    let gra = standard::granny();
    let rg = report(&gra, &params).map_err(|e| e.to_string())?;
    if rg.gz_exact != Some(2) {
        return Err(format!("granny g_Z = {:?}, expected 2", rg.gz_exact));
    }
    let has_cor = rg.gz_lower.tags.iter().any(|t| *t == LowerTag::Cor53(Cor53Case::IV));
    let has_lt = rg.gz_lower.tags.contains(&LowerTag::LtSig);
    if !has_cor || !has_lt {
        return Err(format!(
            "granny lower-bound tags {:?} must include COR53_iv and LT_SIG",
            rg.gz_lower.tags
        ));
    }
    Ok(String::from(
        "trefoil: Δ = t^-1 - 1 + t, det 3, σ = -2, Arf 1, g_Z = 1; unknot trivial; \
         granny g_Z = 2 via COR53_iv and LT_SIG",
    ))
}

/// Expected obstruction source for the named table knots.
fn table1_expectation(name: &str) -> Option<LowerTag> {
    const CASE_III: &[&str] = &[
        "9_48", "10_74", "11a155", "11a173", "11a352", "11n71", "11n75", "11n167", "12a164",
        "12a166", "12a177", "12a244", "12a298", "12a413", "12a493", "12a503", "12a810",
        "12a895", "12a1142", "12n334", "12n379", "12n460", "12n495", "12n549", "12n583",
        "12n869",
    ];
    const CASE_IV: &[&str] = &[
        "9_37", "11a135", "12a265", "12a396", "12a769", "12a873", "12a905", "12n388",
        "12n480", "12n737", "12n813", "12n846",
    ];
    const MIN_GENS: &[&str] = &[
        "12a554", "12a750", "12n553", "12n554", "12n555", "12n556", "12n642",
    ];
    if CASE_III.contains(&name) {
        Some(LowerTag::Cor53(Cor53Case::III))
    } else if CASE_IV.contains(&name) {
        Some(LowerTag::Cor53(Cor53Case::IV))
    } else if MIN_GENS.contains(&name) {
        Some(LowerTag::MinGens)
    } else {
        None
    }
}

fn c7_table1() -> Result<String, String> {
    let Ok(path) = std::env::var(TABLE1_ENV) else {
        return Ok(String::from("SKIPPED_NO_DATA"));
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let records = parse_knot_file(&text).map_err(|e| e.to_string())?;
    let mut matched = 0u32;
    for r in &records {
        let Some(expected) = table1_expectation(&r.name) else {
            continue;
        };
        let lower = zgenus_core::bounds::gz_lower(r).map_err(|e| e.to_string())?;
        if lower.value != 2 {
            return Err(format!("{}: gz lower bound {}, expected 2", r.name, lower.value));
        }
        let ok = match expected {
            LowerTag::MinGens => lower.tags.contains(&LowerTag::MinGens),
            tag => lower.tags.contains(&tag),
        };
        if !ok {
            return Err(format!(
                "{}: expected source {expected}, tags were {:?}",
                r.name, lower.tags
            ));
        }
        matched += 1;
    }
    if matched == 0 {
        return Err(format!(
            "file {path} contained no knots named in the reproduction table"
        ));
    }
    Ok(format!("{matched} table knots reproduced with the expected obstruction"))
}

fn c8_jacobi() -> Result<String, String> {
    let mut count = 0u64;
    for y in (1..1000i64).step_by(2) {
        for x in -1000..=1000i64 {
            let fast = jacobi(x, y).map_err(|e| e.to_string())?;
            let slow = jacobi_by_factorization(x, y).map_err(|e| e.to_string())?;
            if fast != slow {
                return Err(format!("jacobi({x},{y}) = {fast} but oracle says {slow}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} evaluations agree with the Legendre-product oracle"))
}
