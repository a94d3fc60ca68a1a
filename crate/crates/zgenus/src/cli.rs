//! Command line front end.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on budget failures
//! (exhausted searches that are neither success nor refutation).

use std::fmt::Write as _;
use std::process::ExitCode;

use serde_json::json;

use zgenus_core::blanch::{normalize_blanchfield, signed_unknotting_report, BlanchError};
use zgenus_core::bounds::{report, BoundReport, BoundsError, SearchParams};
use zgenus_core::crit2::{
    construct_witness, cor53, criterion_b, matrix_from_witness, Crit2Error, CriterionInput,
};
use zgenus_core::cycres::{
    all_pairings_isometric, solve_norm, surjectivity_check, CycresError, NormOrTrace, QuotRing,
};
use zgenus_core::finpair::{decompose, double_cover_pairing, PairError};
use zgenus_core::knot::{arf, lt_signature, KnotError, KnotRecord, Omega};

use crate::acceptance;
use crate::formats::{parse_knot_file, parse_lambda_matrix_file, print_poly};

const USAGE: &str = "zgenus — exact lower/upper bounds for the Z-slice genus and algebraic
unknotting number of knots from Seifert matrices.

USAGE:
    zgenus <COMMAND> [ARGS]

COMMANDS:
    invariants <knots-file>       Alexander polynomial, determinant, signature,
                                  Arf invariant and double-cover generator count
    bounds <knots-file>           per-knot bound report
        [--seed N] [--budget N] [--threads N]
    obstruct <knots-file>         two-generator linking-form obstructions
    decompose <knots-file>        cyclic decomposition of the double-cover pairings
    criterion --a1 N --q1 N --a2 N --q2 N --u {1|-1}
                                  the two-generator presentability criterion
    normalize-blanchfield <lambda-file>
                                  normalization certificate for a Hermitian matrix
    verify-odd-cover --p P --q Q --k K
                                  norm/trace surjectivity and pairing isometries
    selftest                      run the verification suite

OPTIONS:
    --json                        machine-readable output (all commands)
    -h, --help                    this text

ENVIRONMENT:
    OBSTRUCT_BUDGET               isometry search candidate budget (default 100000)
    PRIME_BOUND                   witness prime search bound (default 1000000)
    ZGENUS_TABLE1                 knot file for the table-reproduction criterion";

#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Input(String),
    Budget(String),
}

impl AppError {
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) | AppError::Input(_) => 1,
            AppError::Budget(_) => 2,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(m) => write!(f, "usage error: {m}"),
            AppError::Input(m) => write!(f, "input error: {m}"),
            AppError::Budget(m) => write!(f, "budget exhausted: {m}"),
        }
    }
}

fn classify_pair(e: PairError) -> AppError {
    match e {
        PairError::BudgetExceeded { .. } | PairError::TooLarge(_) => {
            AppError::Budget(e.to_string())
        }
        other => AppError::Input(other.to_string()),
    }
}

fn classify_crit2(e: Crit2Error) -> AppError {
    match e {
        Crit2Error::PrimeBoundExhausted { .. } => AppError::Budget(e.to_string()),
        Crit2Error::Pairing(p) => classify_pair(p),
        other => AppError::Input(other.to_string()),
    }
}

fn classify_blanch(e: BlanchError) -> AppError {
    match e {
        BlanchError::SearchBudget { .. } | BlanchError::SizeExceeded { .. } => {
            AppError::Budget(e.to_string())
        }
        other => AppError::Input(other.to_string()),
    }
}

fn classify_cycres(e: CycresError) -> AppError {
    match e {
        CycresError::TooLarge { .. } => AppError::Budget(e.to_string()),
        other => AppError::Input(other.to_string()),
    }
}

fn classify_knot(e: KnotError) -> AppError {
    match e {
        KnotError::Uncertified { .. } => AppError::Budget(e.to_string()),
        other => AppError::Input(other.to_string()),
    }
}

fn classify_bounds(e: BoundsError) -> AppError {
    match e {
        BoundsError::Knot(k) => classify_knot(k),
        BoundsError::Pairing(p) => classify_pair(p),
        BoundsError::Criterion(c) => classify_crit2(c),
        BoundsError::Mat(m) => AppError::Input(m.to_string()),
        BoundsError::Inconsistent(m) => AppError::Input(m),
    }
}

/// Parsed command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Invariants { file: String, json: bool },
    Bounds { file: String, json: bool, seed: u64, budget: u64, threads: usize },
    Obstruct { file: String, json: bool },
    Decompose { file: String, json: bool },
    Criterion { input: (i64, i64, i64, i64, i8), json: bool },
    NormalizeBlanchfield { file: String, json: bool },
    VerifyOddCover { p: u64, q: u64, k: u32, json: bool },
    Selftest { json: bool },
    Help,
}

pub fn parse_args(args: &[String]) -> Result<Command, AppError> {
    if args.is_empty() {
        return Err(AppError::Usage(String::from("missing command")));
    }
    if args.iter().any(|a| a == "-h" || a == "--help") {
        return Ok(Command::Help);
    }
    let cmd = args[0].as_str();
    let rest = &args[1..];

    struct Flags {
        json: bool,
        named: Vec<(String, String)>,
        positional: Vec<String>,
    }
    let mut flags = Flags { json: false, named: Vec::new(), positional: Vec::new() };
    let mut i = 0;
    while i < rest.len() {
        let a = &rest[i];
        if a == "--json" {
            flags.json = true;
            i += 1;
        } else if let Some(name) = a.strip_prefix("--") {
            let Some(value) = rest.get(i + 1) else {
                return Err(AppError::Usage(format!("flag --{name} needs a value")));
            };
            flags.named.push((name.to_string(), value.clone()));
            i += 2;
        } else {
            flags.positional.push(a.clone());
            i += 1;
        }
    }
    let get_named = |flags: &Flags, name: &str| -> Option<String> {
        flags.named.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone())
    };
    let parse_named = |flags: &Flags, name: &str| -> Result<i64, AppError> {
        let v = get_named(flags, name)
            .ok_or_else(|| AppError::Usage(format!("missing required flag --{name}")))?;
        v.parse()
            .map_err(|_| AppError::Usage(format!("--{name}: '{v}' is not an integer")))
    };
    let known = |flags: &Flags, allowed: &[&str]| -> Result<(), AppError> {
        for (n, _) in &flags.named {
            if !allowed.contains(&n.as_str()) {
                return Err(AppError::Usage(format!("unknown flag --{n}")));
            }
        }
        Ok(())
    };
    let one_file = |flags: &Flags| -> Result<String, AppError> {
        match flags.positional.as_slice() {
            [f] => Ok(f.clone()),
            [] => Err(AppError::Usage(String::from("missing input file"))),
            _ => Err(AppError::Usage(String::from("too many positional arguments"))),
        }
    };

    match cmd {
        "invariants" => {
            known(&flags, &[])?;
            Ok(Command::Invariants { file: one_file(&flags)?, json: flags.json })
        }
        "bounds" => {
            known(&flags, &["seed", "budget", "threads"])?;
            let seed = get_named(&flags, "seed")
                .map(|v| v.parse().map_err(|_| AppError::Usage(format!("bad --seed '{v}'"))))
                .transpose()?
                .unwrap_or(1);
            let budget = get_named(&flags, "budget")
                .map(|v| v.parse().map_err(|_| AppError::Usage(format!("bad --budget '{v}'"))))
                .transpose()?
                .unwrap_or(100_000);
            let threads = get_named(&flags, "threads")
                .map(|v| v.parse().map_err(|_| AppError::Usage(format!("bad --threads '{v}'"))))
                .transpose()?
                .unwrap_or(0);
            Ok(Command::Bounds { file: one_file(&flags)?, json: flags.json, seed, budget, threads })
        }
        "obstruct" => {
            known(&flags, &[])?;
            Ok(Command::Obstruct { file: one_file(&flags)?, json: flags.json })
        }
        "decompose" => {
            known(&flags, &[])?;
            Ok(Command::Decompose { file: one_file(&flags)?, json: flags.json })
        }
        "criterion" => {
            known(&flags, &["a1", "q1", "a2", "q2", "u"])?;
            if !flags.positional.is_empty() {
                return Err(AppError::Usage(String::from("criterion takes no positional args")));
            }
            let u = parse_named(&flags, "u")?;
            if u != 1 && u != -1 {
                return Err(AppError::Usage(String::from("--u must be 1 or -1")));
            }
            Ok(Command::Criterion {
                input: (
                    parse_named(&flags, "a1")?,
                    parse_named(&flags, "q1")?,
                    parse_named(&flags, "a2")?,
                    parse_named(&flags, "q2")?,
                    u as i8,
                ),
                json: flags.json,
            })
        }
        "normalize-blanchfield" => {
            known(&flags, &[])?;
            Ok(Command::NormalizeBlanchfield { file: one_file(&flags)?, json: flags.json })
        }
        "verify-odd-cover" => {
            known(&flags, &["p", "q", "k"])?;
            Ok(Command::VerifyOddCover {
                p: parse_named(&flags, "p")? as u64,
                q: parse_named(&flags, "q")? as u64,
                k: parse_named(&flags, "k")? as u32,
                json: flags.json,
            })
        }
        "selftest" => {
            known(&flags, &[])?;
            Ok(Command::Selftest { json: flags.json })
        }
        other => Err(AppError::Usage(format!("unknown command '{other}'"))),
    }
}

fn load_knots(path: &str) -> Result<Vec<KnotRecord>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Input(format!("{path}: {e}")))?;
    parse_knot_file(&text).map_err(|e| AppError::Input(format!("{path}: {e}")))
}

pub fn run(cmd: Command) -> Result<String, AppError> {
    match cmd {
        Command::Help => Ok(USAGE.to_string()),
        Command::Invariants { file, json } => run_invariants(&file, json),
        Command::Bounds { file, json, seed, budget, threads } => {
            run_bounds(&file, json, seed, budget, threads)
        }
        Command::Obstruct { file, json } => run_obstruct(&file, json),
        Command::Decompose { file, json } => run_decompose(&file, json),
        Command::Criterion { input, json } => run_criterion(input, json),
        Command::NormalizeBlanchfield { file, json } => run_normalize(&file, json),
        Command::VerifyOddCover { p, q, k, json } => run_verify_odd_cover(p, q, k, json),
        Command::Selftest { json } => run_selftest(json),
    }
}

fn run_invariants(file: &str, json: bool) -> Result<String, AppError> {
    let records = load_knots(file)?;
    let mut lines = Vec::new();
    let mut objects = Vec::new();
    for r in &records {
        let delta = r.alexander().map_err(classify_knot)?;
        let det = r.determinant().map_err(classify_knot)?;
        let sig = lt_signature(r, Omega::MinusOne).map_err(classify_knot)?;
        let arf_val = arf(r).map_err(classify_knot)?;
        let gens = r.min_generators_double_cover().map_err(classify_knot)?;
        if json {
            objects.push(json!({
                "name": r.name,
                "alexander": print_poly(&delta),
                "determinant": det.to_string(),
                "signature": sig,
                "arf": arf_val,
                "double_cover_generators": gens,
            }));
        } else {
            lines.push(format!(
                "{}: Delta = {}; det = {}; signature = {}; Arf = {}; H1(double cover) needs {} generator(s)",
                r.name,
                print_poly(&delta),
                det,
                sig,
                arf_val,
                gens
            ));
        }
    }
    if json {
        Ok(serde_json::to_string_pretty(&objects).unwrap())
    } else {
        Ok(lines.join("\n"))
    }
}

fn format_report_line(r: &BoundReport) -> String {
    let tags = |ts: &[zgenus_core::bounds::LowerTag]| -> String {
        ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
    };
    let mut line = format!(
        "{} {}({}) {}({}) {}({}) {}",
        r.name,
        r.gz_lower.value,
        tags(&r.gz_lower.tags),
        r.gz_upper,
        r.gz_upper_tag,
        r.ua_lower.value,
        tags(&r.ua_lower.tags),
        r.ua_upper,
    );
    if let Some(g) = r.gz_exact {
        let _ = write!(line, " g_Z={g}");
    }
    for n in &r.notes {
        let _ = write!(line, " # {n}");
    }
    line
}

fn report_json(r: &BoundReport) -> serde_json::Value {
    json!({
        "name": r.name,
        "gz_lower": r.gz_lower.value,
        "gz_lower_tags": r.gz_lower.tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "gz_upper": r.gz_upper,
        "gz_upper_tag": r.gz_upper_tag.to_string(),
        "ua_lower": r.ua_lower.value,
        "ua_lower_tags": r.ua_lower.tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "ua_upper": r.ua_upper,
        "gz_exact": r.gz_exact,
        "witness": r.witness.as_ref().map(|(t, corner)| {
            let rows: Vec<Vec<String>> = (0..t.rows())
                .map(|i| (0..t.cols()).map(|j| t[(i, j)].to_string()).collect())
                .collect();
            json!({"transform": rows, "corner_half_size": corner})
        }),
        "chain_deg_ok": r.chain_deg_ok,
        "notes": r.notes,
    })
}

fn run_bounds(
    file: &str,
    json: bool,
    seed: u64,
    budget: u64,
    threads: usize,
) -> Result<String, AppError> {
    let records = load_knots(file)?;
    let params = SearchParams { seed, budget };
    let threads = if threads == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        threads
    };
    let results: Vec<Result<BoundReport, BoundsError>> = if threads <= 1 || records.len() <= 1 {
        records.iter().map(|r| report(r, &params)).collect()
    } else {
        // chunked scope threads; output order stays the input order
        let mut results: Vec<Option<Result<BoundReport, BoundsError>>> =
            (0..records.len()).map(|_| None).collect();
        let chunk = records.len().div_ceil(threads);
        std::thread::scope(|s| {
            for (records_chunk, results_chunk) in
                records.chunks(chunk).zip(results.chunks_mut(chunk))
            {
                s.spawn(move || {
                    for (r, slot) in records_chunk.iter().zip(results_chunk.iter_mut()) {
                        *slot = Some(report(r, &params));
                    }
                });
            }
        });
        results.into_iter().map(|r| r.expect("all slots filled")).collect()
    };
    let mut lines = Vec::new();
    let mut objects = Vec::new();
    for res in results {
        let r = res.map_err(classify_bounds)?;
        if json {
            objects.push(report_json(&r));
        } else {
            lines.push(format_report_line(&r));
        }
    }
    if json {
        Ok(serde_json::to_string_pretty(&objects).unwrap())
    } else {
        Ok(lines.join("\n"))
    }
}

fn run_obstruct(file: &str, json: bool) -> Result<String, AppError> {
    let records = load_knots(file)?;
    let mut lines = Vec::new();
    let mut objects = Vec::new();
    for r in &records {
        let gens = r.min_generators_double_cover().map_err(classify_knot)?;
        if gens > 2 {
            if json {
                objects.push(json!({
                    "name": r.name,
                    "generators": gens,
                    "cases": [],
                    "note": "more than two generators: gz_lower comes from MIN_GENS",
                }));
            } else {
                lines.push(format!(
                    "{}: H1(double cover) needs {gens} generators; two-generator criterion \
                     skipped, MIN_GENS carries the bound",
                    r.name
                ));
            }
            continue;
        }
        let (_, ell) = double_cover_pairing(&r.seifert).map_err(classify_pair)?;
        let d = decompose(&ell).map_err(classify_pair)?;
        let findings = cor53(&d).map_err(classify_crit2)?;
        let desc: Vec<String> = d
            .summands
            .iter()
            .map(|s| format!("{}/{}", s.residue, s.modulus))
            .collect();
        if json {
            objects.push(json!({
                "name": r.name,
                "generators": gens,
                "ell_decomposition": desc,
                "cases": findings.iter().map(|f| json!({
                    "case": f.case.to_string(),
                    "ua_ge_3": f.ua_ge_3,
                    "gz_ge_2": f.gz_ge_2,
                })).collect::<Vec<_>>(),
            }));
        } else {
            let mut line = format!("{}: ell = ({})", r.name, desc.join(", "));
            if findings.is_empty() {
                line.push_str("; no case fires");
            }
            for f in &findings {
                if f.ua_ge_3 {
                    let _ = write!(line, "; Cor5.3({}): u_a >= 3, g_Z >= 2", f.case);
                } else {
                    let _ = write!(line, "; Cor5.3({}): g_Z >= 2", f.case);
                }
            }
            lines.push(line);
        }
    }
    if json {
        Ok(serde_json::to_string_pretty(&objects).unwrap())
    } else {
        Ok(lines.join("\n"))
    }
}

fn run_decompose(file: &str, json: bool) -> Result<String, AppError> {
    let records = load_knots(file)?;
    let mut lines = Vec::new();
    let mut objects = Vec::new();
    for r in &records {
        let (lk, ell) = double_cover_pairing(&r.seifert).map_err(classify_pair)?;
        let dlk = decompose(&lk).map_err(classify_pair)?;
        let dell = decompose(&ell).map_err(classify_pair)?;
        let show = |d: &zgenus_core::finpair::CyclicDecomposition| -> Vec<String> {
            d.summands.iter().map(|s| format!("{}/{}", s.residue, s.modulus)).collect()
        };
        if json {
            objects.push(json!({
                "name": r.name,
                "group": lk.factors().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "lk": show(&dlk),
                "ell": show(&dell),
            }));
        } else {
            let groups: Vec<String> = lk.factors().iter().map(|f| format!("Z/{f}")).collect();
            lines.push(format!(
                "{}: H1 = {}; lk = ({}); ell = ({})",
                r.name,
                if groups.is_empty() { String::from("trivial") } else { groups.join(" + ") },
                show(&dlk).join(", "),
                show(&dell).join(", "),
            ));
        }
    }
    if json {
        Ok(serde_json::to_string_pretty(&objects).unwrap())
    } else {
        Ok(lines.join("\n"))
    }
}

fn run_criterion(input: (i64, i64, i64, i64, i8), json: bool) -> Result<String, AppError> {
    let (a1, q1, a2, q2, u) = input;
    let ci = CriterionInput::new(a1, q1, a2, q2, u).map_err(classify_crit2)?;
    let b = criterion_b(&ci).map_err(classify_crit2)?;
    let prime_bound = std::env::var(acceptance::PRIME_BOUND_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1_000_000i64);
    let iso_budget = std::env::var(acceptance::OBSTRUCT_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(100_000u64);

    let mut witness_json = serde_json::Value::Null;
    let mut text = format!("B: {b}");
    if b {
        let w = construct_witness(&ci, prime_bound).map_err(classify_crit2)?;
        let m = matrix_from_witness(&w, &ci, iso_budget).map_err(classify_crit2)?;
        let _ = write!(
            text,
            "; witness alpha={} beta={} gamma={} lambda1={} lambda2={}; matrix [[{},{}],[{},{}]] verified",
            w.alpha, w.beta, w.gamma, w.lambda1, w.lambda2,
            m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]
        );
        witness_json = json!({
            "alpha": w.alpha, "beta": w.beta, "gamma": w.gamma,
            "lambda1": w.lambda1, "lambda2": w.lambda2,
            "matrix": [[m[(0,0)].to_string(), m[(0,1)].to_string()],
                       [m[(1,0)].to_string(), m[(1,1)].to_string()]],
        });
    }
    // the published obstruction cases for this decomposition
    let d = zgenus_core::finpair::CyclicDecomposition {
        summands: [(q1, a1), (q2, a2)]
            .iter()
            .filter(|(q, _)| *q > 1)
            .map(|&(q, a)| zgenus_core::finpair::CyclicSummand {
                modulus: q.into(),
                residue: a.rem_euclid(q).into(),
            })
            .collect(),
    };
    let findings = cor53(&d).map_err(classify_crit2)?;
    for f in &findings {
        if f.ua_ge_3 {
            let _ = write!(text, "; Cor5.3({}): u_a >= 3, g_Z >= 2", f.case);
        } else {
            let _ = write!(text, "; Cor5.3({}): g_Z >= 2", f.case);
        }
    }
    if json {
        Ok(serde_json::to_string_pretty(&json!({
            "input": {"a1": a1, "q1": q1, "a2": a2, "q2": q2, "u": u},
            "criterion_b": b,
            "witness": witness_json,
            "cor53": findings.iter().map(|f| json!({
                "case": f.case.to_string(), "ua_ge_3": f.ua_ge_3, "gz_ge_2": f.gz_ge_2,
            })).collect::<Vec<_>>(),
        }))
        .unwrap())
    } else {
        Ok(text)
    }
}

fn run_normalize(file: &str, json: bool) -> Result<String, AppError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| AppError::Input(format!("{file}: {e}")))?;
    let a = parse_lambda_matrix_file(&text)
        .map_err(|e| AppError::Input(format!("{file}: {e}")))?;
    let cert = normalize_blanchfield(&a).map_err(classify_blanch)?;
    let (p, n) = signed_unknotting_report(&a).map_err(classify_blanch)?;
    if json {
        let b_rows: Vec<Vec<String>> = (0..cert.b.size())
            .map(|i| (0..cert.b.size()).map(|j| print_poly(&cert.b.matrix()[(i, j)])).collect())
            .collect();
        let t_rows: Vec<Vec<String>> = (0..cert.t.size())
            .map(|i| (0..cert.t.size()).map(|j| cert.t[(i, j)].to_string()).collect())
            .collect();
        Ok(serde_json::to_string_pretty(&json!({
            "b": b_rows,
            "t": t_rows,
            "det_t": print_poly(&cert.det_t),
            "positive": p,
            "negative": n,
        }))
        .unwrap())
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "B(t) =");
        for i in 0..cert.b.size() {
            let row: Vec<String> =
                (0..cert.b.size()).map(|j| print_poly(&cert.b.matrix()[(i, j)])).collect();
            let _ = writeln!(out, "  {}", row.join(" ; "));
        }
        let _ = writeln!(out, "T (over Z[t,1/t,(1-t)^-1]) =");
        for i in 0..cert.t.size() {
            let row: Vec<String> =
                (0..cert.t.size()).map(|j| cert.t[(i, j)].to_string()).collect();
            let _ = writeln!(out, "  {}", row.join(" ; "));
        }
        let _ = writeln!(out, "det T = {}", print_poly(&cert.det_t));
        let _ = write!(
            out,
            "any knot this matrix presents can be trivialized by {p} positive and {n} negative crossing changes"
        );
        Ok(out)
    }
}

fn run_verify_odd_cover(p: u64, q: u64, k: u32, json: bool) -> Result<String, AppError> {
    let ring = QuotRing::prime_power(p, q, k).map_err(classify_cycres)?;
    let norm_ok =
        surjectivity_check(&ring, NormOrTrace::Norm, 1_000_000).map_err(classify_cycres)?;
    let trace_ok =
        surjectivity_check(&ring, NormOrTrace::Trace, 1_000_000).map_err(classify_cycres)?;
    let iso = all_pairings_isometric(p, q, k).map_err(classify_cycres)?;
    let lambda = solve_norm(&ring, &ring.from_int(-1)).map_err(classify_cycres)?;
    let norm_lambda = ring.norm(&lambda);
    if json {
        Ok(serde_json::to_string_pretty(&json!({
            "p": p, "q": q, "k": k,
            "norm_surjective": norm_ok,
            "trace_surjective": trace_ok,
            "all_pairings_isometric": iso,
            "lambda_with_norm_minus_one": ring.display(&lambda),
            "norm_of_lambda": ring.display(&norm_lambda),
        }))
        .unwrap())
    } else {
        Ok(format!(
            "ring Z[t]/({}, Phi_{p}): norm surjective: {norm_ok}; trace surjective: {trace_ok}; \
             all pairings isometric: {iso}; norm({}) = {} (solves norm = -1)",
            q.pow(k),
            ring.display(&lambda),
            ring.display(&norm_lambda),
        ))
    }
}

fn run_selftest(json: bool) -> Result<String, AppError> {
    let outcomes = acceptance::run_all();
    let ok = acceptance::all_passed(&outcomes);
    let out = if json {
        serde_json::to_string_pretty(
            &outcomes
                .iter()
                .map(|o| {
                    json!({
                        "id": o.id,
                        "name": o.name,
                        "status": o.status.to_string(),
                        "details": o.details,
                        "millis": o.millis,
                    })
                })
                .collect::<Vec<_>>(),
        )
        .unwrap()
    } else {
        outcomes.iter().map(|o| o.line()).collect::<Vec<_>>().join("\n")
    };
    if ok {
        Ok(out)
    } else {
        // selftest failures are printed on stdout but exit nonzero
        println!("{out}");
        Err(AppError::Input(String::from("selftest failed")))
    }
}

/// Entry point used by the binary.
pub fn main_with_args(args: &[String]) -> ExitCode {
    match parse_args(args) {
        Ok(cmd) => match run(cmd) {
            Ok(output) => {
                println!("{output}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(e.exit_code())
            }
        },
        Err(e) => {
            eprintln!("{e}");
            eprintln!("{USAGE}");
            ExitCode::from(e.exit_code())
        }
    }
}
