//! Acceptance gate: runs every exit criterion and prints one PASS/FAIL line
//! per criterion. Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ffdecomp::sweep::{plan, SweepConfig};
use ffdecomp::task::{execute_all, Fields, Task};
use ffdecomp::Payload;
use ffdecomp_core::charsum::karatsuba_ratio;
use ffdecomp_core::charsum::{indicator_tally, weil_report, Character, CyclotomicReducer, Poly};
use ffdecomp_core::decomp::{self, DecompQuery, SearchLimits, SearchStatus};
use ffdecomp_core::experiments::{
    growth_exponent_report, packing_bound_harness, w_identity_report, DEFAULT_EPSILON,
};
use ffdecomp_core::fpcore::arith::{divisors, pow_mod, primes_in};
use ffdecomp_core::setalg::{growth_product, growth_product_by_conjugation, productset_in};
use ffdecomp_core::{BoundReport, FpSet, PrimeField, Subgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WEIL_TOLERANCE: f64 = 1e-6;
const IDENTITY_RELATIVE_TOLERANCE: f64 = 1e-6;
const INTERVAL_RELATIVE_TOLERANCE: f64 = 1e-6;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "indicator identity, p <= 499",
        limit: secs(30),
        run: indicator_identity,
    },
    Criterion {
        id: 2,
        name: "Weil bound, 200 instances, p <= 997",
        limit: secs(10),
        run: weil_bound,
    },
    Criterion {
        id: 3,
        name: "Vinogradov bound, 500 instances, p <= 499",
        limit: secs(10),
        run: vinogradov_bound,
    },
    Criterion {
        id: 4,
        name: "no nontrivial decompositions of QR(p) and G_d",
        limit: secs(600),
        run: no_decompositions,
    },
    Criterion {
        id: 5,
        name: "QR(p) != A + A, 5 <= p <= 61",
        limit: secs(600),
        run: qr_not_self_sum,
    },
    Criterion {
        id: 6,
        name: "packing maximizer #A*#B <= p, p <= 199",
        limit: secs(300),
        run: packing_bound,
    },
    Criterion {
        id: 7,
        name: "W and N identities, 100 instances each",
        limit: secs(30),
        run: w_n_identities,
    },
    Criterion {
        id: 8,
        name: "subgroup intersection bound, p <= 2003",
        limit: secs(120),
        run: shkvyu,
    },
    Criterion {
        id: 9,
        name: "#(8AB - 8AB) inequality, 200 instances",
        limit: secs(60),
        run: bourgain,
    },
    Criterion {
        id: 10,
        name: "interval product counts, 200 instances",
        limit: secs(60),
        run: interval,
    },
    Criterion {
        id: 11,
        name: "A(A+b) conjugation identity, 500 instances",
        limit: secs(10),
        run: conjugation,
    },
    Criterion {
        id: 12,
        name: "bitset kernels vs double loops, 1000 instances",
        limit: secs(30),
        run: oracle_equivalence,
    },
    Criterion {
        id: 13,
        name: "search output independent of --workers",
        limit: secs(1200),
        run: determinism,
    },
    Criterion {
        id: 14,
        name: "report-only metrics finite, p <= 499",
        limit: secs(120),
        run: report_metrics,
    },
];

fn main() {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let result =
            catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".to_owned()));
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > c.limit => Err(format!(
                "{detail}; exceeded time limit of {}s",
                c.limit.as_secs()
            )),
            other => other,
        };
        match result {
            Ok(detail) => println!(
                "PASS  criterion {:>2}: {} ({:.1}s) {}",
                c.id,
                c.name,
                elapsed.as_secs_f64(),
                detail
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL  criterion {:>2}: {} ({:.1}s) {}",
                    c.id,
                    c.name,
                    elapsed.as_secs_f64(),
                    why
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        CRITERIA.len() - failed,
        failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn sweep_tasks(json: &str) -> Vec<Task> {
    let config: SweepConfig = serde_json::from_str(json).expect("valid sweep config");
    plan(&config, config.seed, Path::new("acceptance")).expect("plannable sweep")
}

fn bound_reports(tasks: &[Task]) -> Vec<BoundReport> {
    let fields = Fields::load(tasks.iter().map(Task::prime), None).expect("fields");
    execute_all(tasks, &fields, 1)
        .expect("tasks run")
        .into_iter()
        .map(|p| match p {
            Payload::BoundReport(r) => r,
            Payload::DecompReport(_) => panic!("unexpected search report"),
        })
        .collect()
}

fn first_failure(reports: &[BoundReport]) -> Option<&BoundReport> {
    reports
        .iter()
        .find(|r| r.ok == Some(false) || !r.is_finite())
}

fn fields_up_to(hi: u64) -> Vec<PrimeField> {
    primes_in(3, hi)
        .into_iter()
        .map(|p| PrimeField::new(p).unwrap())
        .collect()
}

fn indicator_identity() -> Outcome {
    let mut reducer = CyclotomicReducer::new();
    let mut checked = 0u64;
    for field in fields_up_to(499) {
        let p = field.p() as u64;
        for d in divisors(p - 1) {
            for v in 1..p {
                let tally =
                    indicator_tally(&field, d as u32, v as u32).map_err(|e| e.to_string())?;
                let exact = tally
                    .exact_integer(&mut reducer)
                    .ok_or_else(|| format!("p={p} d={d} v={v}: sum is not an integer"))?;
                // Euler's criterion
                let in_group = pow_mod(v, (p - 1) / d, p) == 1;
                let expected = if in_group { d as i64 } else { 0 };
                if exact != expected {
                    return Err(format!(
                        "p={p} d={d} v={v}: got {exact}, expected {expected}"
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} exact checks"))
}

fn weil_bound() -> Outcome {
    let tasks = sweep_tasks(
        r#"{"experiment":"weil","p_range":[3,997],"samples":200,"seed":2,"max_degree":6}"#,
    );
    let reports = bound_reports(&tasks);
    if let Some(r) = reports.iter().find(|r| !r.hypothesis_ok) {
        return Err(format!(
            "generator produced an inadmissible instance: {:?}",
            r.instance
        ));
    }
    if let Some(r) = first_failure(&reports) {
        return Err(format!(
            "bound violated: {:?} lhs={} rhs={}",
            r.instance, r.lhs, r.rhs
        ));
    }
    if reports.iter().any(|r| r.tolerance != Some(WEIL_TOLERANCE)) {
        return Err("unexpected tolerance".into());
    }

    // hypothesis failures must be flagged, not asserted
    let flagged = [
        (7u64, 2u32, 1u32, "0,0,1"),
        (13, 3, 1, "0,0,0,1"),
        (13, 4, 2, "0,0,1"),
        (11, 2, 1, "4,4,1"),
        (13, 6, 2, "0,0,0,5"),
    ];
    for (p, d, j, poly) in flagged {
        let field = PrimeField::new(p).unwrap();
        let chi = Character::new(&field, d, j).unwrap();
        let r = weil_report(&chi, &Poly::parse(p as u32, poly).unwrap()).unwrap();
        if r.hypothesis_ok || r.ok.is_some() {
            return Err(format!("p={p} d={d} j={j} F={poly} not flagged"));
        }
    }
    for (p, d, j, poly) in [(7u64, 2u32, 1u32, "0,1,1"), (13, 6, 2, "5,0,0,5")] {
        let field = PrimeField::new(p).unwrap();
        let chi = Character::new(&field, d, j).unwrap();
        let r = weil_report(&chi, &Poly::parse(p as u32, poly).unwrap()).unwrap();
        if !r.hypothesis_ok || r.ok != Some(true) {
            return Err(format!("p={p} d={d} j={j} F={poly} wrongly flagged"));
        }
    }
    Ok(format!(
        "{} admissible instances, {} flags checked",
        reports.len(),
        flagged.len()
    ))
}

fn vinogradov_bound() -> Outcome {
    let tasks =
        sweep_tasks(r#"{"experiment":"vinogradov","p_range":[3,499],"samples":500,"seed":3}"#);
    let reports = bound_reports(&tasks);
    if reports.len() != 500 {
        return Err(format!("{} instances", reports.len()));
    }
    match first_failure(&reports) {
        Some(r) => Err(format!(
            "violated: {:?} lhs={} rhs={}",
            r.instance, r.lhs, r.rhs
        )),
        None => Ok("500/500 within sqrt(p #A #B)".into()),
    }
}

fn exhaustive(target: FpSet, self_mode: bool) -> decomp::DecompReport {
    let q = if self_mode {
        DecompQuery::self_decomposition(target)
    } else {
        DecompQuery::decomposition(target)
    };
    decomp::run(&q.limits(SearchLimits::unbounded()).workers(1)).expect("search runs")
}

fn no_decompositions() -> Outcome {
    let mut problems = Vec::new();
    let mut runs = 0;
    for field in fields_up_to(37).into_iter().filter(|f| f.p() >= 5) {
        let r = exhaustive(Subgroup::new(&field, 2).unwrap().into_elements(), false);
        runs += 1;
        if r.status != SearchStatus::ExhaustedNone {
            problems.push(format!(
                "QR({}): {:?} {:?}",
                field.p(),
                r.status,
                r.witnesses
            ));
        }
    }
    for field in fields_up_to(31) {
        let p = field.p() as u64;
        for d in divisors(p - 1).into_iter().filter(|&d| d >= 2 && d < p - 1) {
            let r = exhaustive(
                Subgroup::new(&field, d as u32).unwrap().into_elements(),
                false,
            );
            runs += 1;
            if r.status != SearchStatus::ExhaustedNone {
                let w = r
                    .witnesses
                    .first()
                    .map(|w| format!("A={:?} B={:?}", w.a, w.b));
                problems.push(format!(
                    "G_{d} mod {p}: {:?} {}",
                    r.status,
                    w.unwrap_or_default()
                ));
            }
        }
    }
    if problems.is_empty() {
        Ok(format!("{runs} exhaustive searches, none decomposable"))
    } else {
        Err(format!(
            "{} of {runs} targets decompose: {}",
            problems.len(),
            problems.join("; ")
        ))
    }
}

fn qr_not_self_sum() -> Outcome {
    let mut runs = 0;
    for field in fields_up_to(61).into_iter().filter(|f| f.p() >= 5) {
        let r = exhaustive(Subgroup::new(&field, 2).unwrap().into_elements(), true);
        runs += 1;
        if r.status != SearchStatus::ExhaustedNone {
            return Err(format!(
                "QR({}): {:?} {:?}",
                field.p(),
                r.status,
                r.witnesses
            ));
        }
    }
    Ok(format!("{runs} exhaustive searches"))
}

fn packing_bound() -> Outcome {
    let mut runs = 0;
    for field in fields_up_to(199) {
        let p = field.p() as u64;
        for d in divisors(p - 1).into_iter().filter(|&d| d >= 2) {
            let r = packing_bound_harness(&field, d as u32, SearchLimits::unbounded(), 1)
                .map_err(|e| e.to_string())?;
            runs += 1;
            if r.extras["status"] != "found" || r.ok != Some(true) {
                return Err(format!(
                    "p={p} d={d}: {:?} product={} ok={:?}",
                    r.extras["status"], r.lhs, r.ok
                ));
            }
        }
    }
    Ok(format!("{runs} maximizers, all with #A*#B <= p"))
}

fn w_n_identities() -> Outcome {
    for exp in ["wsum", "nsum"] {
        let tasks = sweep_tasks(&format!(
            r#"{{"experiment":"{exp}","p_range":[3,199],"samples":100,"seed":7,"max_set":6}}"#
        ));
        let reports = bound_reports(&tasks);
        for r in &reports {
            let p = r.instance["p"].as_f64().unwrap();
            let l = r.instance["B"].as_array().unwrap().len();
            let tol = IDENTITY_RELATIVE_TOLERANCE * p * 2f64.powi(l as i32);
            if l > 6 || r.tolerance != Some(tol) || r.ok != Some(true) || !r.is_finite() {
                return Err(format!(
                    "{exp}: {:?} gap/tolerance mismatch: {r:?}",
                    r.instance
                ));
            }
        }
    }
    let field = PrimeField::new(7).unwrap();
    let r = w_identity_report(&field, 2, &FpSet::from_elements(7, [3, 5])).unwrap();
    if r.extras["W"] != 2 {
        return Err(format!("W(7, 2, {{3,5}}) = {}", r.extras["W"]));
    }
    Ok("100 W + 100 N instances agree; W(7,2,{3,5}) = 2".into())
}

fn shkvyu() -> Outcome {
    let tasks = sweep_tasks(
        r#"{"experiment":"shkvyu","p_range":[3,2003],"d_filter":"order<=30","samples":100,"seed":8,"m":[2,3]}"#,
    );
    let reports = bound_reports(&tasks);
    let asserted = reports.iter().filter(|r| r.hypothesis_ok).count();
    if asserted == 0 {
        return Err("no instance satisfies the hypothesis".into());
    }
    match first_failure(&reports) {
        Some(r) => Err(format!(
            "violated: {:?} lhs={} rhs={}",
            r.instance, r.lhs, r.rhs
        )),
        None => Ok(format!("{} instances, {asserted} asserted", reports.len())),
    }
}

fn bourgain() -> Outcome {
    let tasks = sweep_tasks(r#"{"experiment":"bourgain","p_range":[3,61],"samples":200,"seed":9}"#);
    let reports = bound_reports(&tasks);
    match first_failure(&reports) {
        Some(r) => Err(format!(
            "violated: {:?} lhs={} rhs={}",
            r.instance, r.lhs, r.rhs
        )),
        None => Ok(format!(
            "{}/{} strict inequalities hold",
            reports.len(),
            reports.len()
        )),
    }
}

fn interval() -> Outcome {
    let tasks =
        sweep_tasks(r#"{"experiment":"interval","p_range":[3,101],"samples":200,"seed":10}"#);
    let reports = bound_reports(&tasks);
    for r in &reports {
        let p = r.instance["p"].as_f64().unwrap();
        let j = r.extras["J"].as_f64().unwrap();
        let fourier = r.extras["J_fourier"].as_f64().unwrap();
        if (j - fourier).abs() > INTERVAL_RELATIVE_TOLERANCE * p * p {
            return Err(format!("{:?}: direct {j} vs Fourier {fourier}", r.instance));
        }
        if r.lhs > r.extras["error_bound"].as_f64().unwrap() || r.ok != Some(true) {
            return Err(format!("{:?}: error inequality fails", r.instance));
        }
    }
    let a = FpSet::from_elements(7, [1, 6]);
    let b = FpSet::from_elements(7, [1, 2, 3]);
    let r = ffdecomp_core::experiments::interval_mult_report(7, 0, 6, &a, &b).unwrap();
    if r.extras["J"] != 6 || r.extras["is_decomposition"] != true || r.ok != Some(true) {
        return Err(format!("F_7^* witness: {:?}", r.extras));
    }
    Ok(format!(
        "{} instances; F_7^* = {{1,6}}{{1,2,3}} with J = 6",
        reports.len()
    ))
}

fn random_set(rng: &mut ChaCha8Rng, p: u32, max: usize) -> FpSet {
    let size = rng.gen_range(0..=max);
    FpSet::from_elements(p, (0..size).map(|_| rng.gen_range(0..p)))
}

fn conjugation() -> Outcome {
    let fields = fields_up_to(499);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let field = &fields[rng.gen_range(0..fields.len())];
        let p = field.p();
        let a = random_set(&mut rng, p, 24);
        let b = rng.gen_range(1..p);
        let direct = growth_product(field, &a, b).map_err(|e| e.to_string())?;
        let conj = growth_product_by_conjugation(field, &a, b).map_err(|e| e.to_string())?;
        let shifted = a.translate(b as i64);
        let naive = FpSet::from_elements(
            p,
            a.iter().flat_map(|x| {
                shifted
                    .iter()
                    .map(move |y| (x as u64 * y as u64 % p as u64) as u32)
            }),
        );
        if direct != conj || direct != naive {
            return Err(format!("p={p} A={a} b={b}: {direct} vs {conj} vs {naive}"));
        }
    }
    Ok("500 exact set equalities".into())
}

fn oracle_equivalence() -> Outcome {
    let fields = fields_up_to(199);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let field = &fields[rng.gen_range(0..fields.len())];
        let p = field.p();
        let a = random_set(&mut rng, p, 40);
        let b = random_set(&mut rng, p, 40);
        let mut sum = vec![false; p as usize];
        let mut prod = vec![false; p as usize];
        for x in a.iter() {
            for y in b.iter() {
                sum[((x + y) % p) as usize] = true;
                prod[(x as u64 * y as u64 % p as u64) as usize] = true;
            }
        }
        let to_set =
            |flags: &[bool]| FpSet::from_elements(p, (0..p).filter(|&i| flags[i as usize]));
        let (sum, prod) = (to_set(&sum), to_set(&prod));
        if a.sumset(&b).unwrap() != sum {
            return Err(format!("sumset mismatch p={p} A={a} B={b}"));
        }
        if a.productset(&b).unwrap() != prod || productset_in(field, &a, &b).unwrap() != prod {
            return Err(format!("productset mismatch p={p} A={a} B={b}"));
        }
    }
    Ok("1000 instances, sumset and both productset kernels".into())
}

fn run_sweep(dir: &Path, name: &str, config: &str, workers: &str) -> Result<Vec<u8>, String> {
    let cfg = dir.join(format!("{name}.json"));
    let out = dir.join(format!("{name}-{workers}.jsonl"));
    std::fs::write(&cfg, config).map_err(|e| e.to_string())?;
    let status = Command::new(env!("CARGO_BIN_EXE_ffdecomp"))
        .args([
            "sweep",
            cfg.to_str().unwrap(),
            "--workers",
            workers,
            "--reproducible",
            "--no-cache",
        ])
        .args(["--out", out.to_str().unwrap()])
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if !matches!(status.code(), Some(0) | Some(1)) {
        return Err(format!("{name}: exit {status}"));
    }
    let text = std::fs::read_to_string(out).map_err(|e| e.to_string())?;
    let mut lines: Vec<&str> = text.lines().collect();
    lines.sort_unstable();
    Ok(lines.join("\n").into_bytes())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sweeps = [
        (
            "qr",
            r#"{"experiment":"search","p_range":[5,37],"set":"qr","node_budget":null,"time_budget":null}"#,
        ),
        (
            "subgroups",
            r#"{"experiment":"search","p_range":[3,31],"set":"subgroup","d_filter":"nontrivial"}"#,
        ),
        (
            "self",
            r#"{"experiment":"search","p_range":[5,61],"set":"qr","mode":"self_decomposition"}"#,
        ),
        (
            "packing",
            r#"{"experiment":"packing","p_range":[3,199],"d_filter":"d>=2"}"#,
        ),
    ];
    let mut lines = 0;
    for (name, config) in sweeps {
        let one = run_sweep(dir.path(), name, config, "1")?;
        let four = run_sweep(dir.path(), name, config, "4")?;
        if one != four {
            return Err(format!("{name}: outputs differ between 1 and 4 workers"));
        }
        lines += one.split(|&b| b == b'\n').count();
    }
    Ok(format!(
        "{lines} records byte-identical across worker counts"
    ))
}

fn report_metrics() -> Outcome {
    let mut ratios = 0;
    let mut exponents = 0;
    let mut flagged = 0;
    for field in fields_up_to(499) {
        let p = field.p() as u64;
        let legendre = Character::legendre(&field);
        for d in divisors(p - 1) {
            let group = Subgroup::new(&field, d as u32).unwrap();
            for nu in 1..=3 {
                let r = karatsuba_ratio(&legendre, group.elements(), group.elements(), nu)
                    .map_err(|e| e.to_string())?;
                let ratio = r.extras["ratio"].as_f64().unwrap_or(f64::NAN);
                if !ratio.is_finite() || !r.is_finite() {
                    return Err(format!("p={p} d={d} nu={nu}: ratio {ratio}"));
                }
                ratios += 1;
            }
            if group.order() < 2 {
                continue;
            }
            let r = growth_exponent_report(&field, d as u32, DEFAULT_EPSILON)
                .map_err(|e| e.to_string())?;
            if !r.is_finite() {
                return Err(format!("p={p} d={d}: non-finite growth report"));
            }
            if r.extras["zero_in_shift"] == true {
                flagged += 1;
            } else if r.lhs < 1.0 || r.ok != Some(true) {
                return Err(format!("p={p} d={d}: e = {} < 1", r.lhs));
            }
            exponents += 1;
        }
    }
    Ok(format!(
        "{ratios} Karatsuba ratios, {exponents} growth exponents ({flagged} flagged with 0 in G+1)"
    ))
}
