//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use pascal_chase::chase::{apply_step, check_script, eval_config, replay, WeightedConfig};
use pascal_chase::exact::Weight;
use pascal_chase::harness::{catalog_identity_text, factorial_binom, oracle_sum, sweep, Certificate, SweepSpec};
use pascal_chase::lang::{constraints_hold, eval_expr, format_identity, parse_identity, Bindings, FibConvention};
use pascal_chase::render::{figure_config, figure_svg, svg_labels, Figure, RenderOptions, FIGURES};
use pascal_chase::scripts::{builtin_identity, catalog, generate_script};
use pascal_chase::triangle::{self, Coord};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

mod common;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bind(pairs: &[(&str, i64)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Valid parameter tuples of a catalog entry with every parameter at most `bound`.
fn valid_tuples(id: &str, bound: i64) -> Result<Vec<Bindings>, String> {
    let spec = SweepSpec::from_catalog(id, bound).map_err(|e| e.to_string())?;
    let (tuples, _) = spec.instances(None).map_err(|e| e.to_string())?;
    let ast = builtin_identity(id).map_err(|e| e.to_string())?;
    Ok(tuples
        .into_iter()
        .filter(|b| constraints_hold(&ast, b).unwrap_or(false))
        .collect())
}

fn deterministic_runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

const SWEEP_IDS: [&str; 19] = [
    "row_sum",
    "half_row_even",
    "half_row_odd",
    "hockey_stick",
    "weighted_row",
    "weighted_half_even",
    "weighted_half_odd",
    "lagrange",
    "chu_vandermonde",
    "alternating",
    "alternating_k",
    "alt_binom",
    "hockey_variant",
    "hockey_gen",
    "upside_down_cv",
    "boscarol",
    "hor",
    "knuth",
    "fib_row",
];

fn c1_sweeps() -> Outcome {
    let started = Instant::now();
    let mut total = 0;
    for id in SWEEP_IDS {
        let spec = SweepSpec::from_catalog(id, 25).map_err(|e| e.to_string())?;
        let r = sweep(&spec).map_err(|e| e.to_string())?;
        ensure(r.failed == 0 && r.complete && r.passed > 0, || format!("{r}"))?;
        total += r.passed;
    }
    let secs = started.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "{} identities, {total} instances, 0 failures, {secs:.1}s",
        SWEEP_IDS.len()
    ))
}

fn c2_binomial_theorem() -> Outcome {
    let (a, b) = (Weight::var("a"), Weight::var("b"));
    let sum = &a + &b;
    let mut power = Weight::one();
    for n in 0..=20u32 {
        let expansion: Weight = (0..=n)
            .map(|k| {
                let c = Weight::integer(triangle::binom(n as i64, k as i64).unwrap());
                c * a.pow(n - k) * b.pow(k)
            })
            .sum();
        ensure(power == expansion, || format!("n={n}: {power} != {expansion}"))?;
        power = &power * &sum;
    }
    Ok("(a+b)^n matches the binomial expansion for n = 0..20".into())
}

fn c3_scripts() -> Outcome {
    let mut scripts = 0;
    for entry in catalog().iter().filter(|e| e.has_script()) {
        let ast = entry.ast();
        for b in valid_tuples(entry.id, 15)? {
            let s = generate_script(entry.id, &b).map_err(|e| format!("{} {b:?}: {e}", entry.id))?;
            let r = check_script(&s);
            ensure(r.valid, || format!("{} {b:?}: {r}", entry.id))?;
            let lhs = eval_expr(&ast.lhs, &b, &ast.indeterminates).map_err(|e| e.to_string())?;
            let rhs = eval_expr(&ast.rhs, &b, &ast.indeterminates).map_err(|e| e.to_string())?;
            ensure(lhs == r.value && rhs == r.value, || {
                format!("{} {b:?}: value {}, lhs {lhs}, rhs {rhs}", entry.id, r.value)
            })?;
            scripts += 1;
        }
    }
    Ok(format!("{scripts} scripts VALID with value = LHS = RHS"))
}

fn c4_step_invariance() -> Outcome {
    let mut runner = deterministic_runner(10_000);
    runner
        .run(&(common::config(), common::step()), |(c, s)| {
            let before = eval_config(&c).unwrap();
            let after = apply_step(&c, &s).unwrap();
            proptest::prop_assert_eq!(eval_config(&after).unwrap(), before);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("10000 random (config, step) trials preserve the value".into())
}

fn rows_of(states: &[WeightedConfig], r: u32, want: &[i64]) -> bool {
    let want: Vec<Weight> = want.iter().map(|&w| Weight::integer(w)).collect();
    states
        .iter()
        .any(|c| c.rows() == vec![r] && c.row_cells(r).into_iter().map(|(_, w)| w).collect::<Vec<_>>() == want)
}

fn c5_figure_weights() -> Outcome {
    let states = |id: &str, p: &[(&str, i64)]| replay(&generate_script(id, &bind(p)).unwrap()).unwrap();

    let lagrange = states("lagrange", &[("n", 4)]);
    let lagrange_rows: [(u32, &[i64]); 5] = [
        (8, &[1]),
        (7, &[1, 1]),
        (6, &[1, 2, 1]),
        (5, &[1, 3, 3, 1]),
        (4, &[1, 4, 6, 4, 1]),
    ];
    for (r, w) in lagrange_rows {
        ensure(rows_of(&lagrange, r, w), || format!("lagrange row {r}"))?;
    }

    let alt = states("alt_binom", &[("n", 8), ("m", 3)]);
    let alt_rows: [(u32, &[i64]); 4] = [
        (8, &[1, -4, 10, -20, 35, -56]),
        (7, &[1, -3, 6, -10, 15, -21]),
        (6, &[1, -2, 3, -4, 5, -6]),
        (5, &[1, -1, 1, -1, 1, -1]),
    ];
    for (r, w) in alt_rows {
        ensure(rows_of(&alt, r, w), || format!("alt_binom row {r}"))?;
    }

    let (bosc, _, last) = figure_config(Figure::by_name("fig16").unwrap()).map_err(|e| e.to_string())?;
    for at in [Coord::new(3, 3), Coord::new(4, 4)] {
        ensure(bosc.get(at) == Weight::integer(16), || {
            format!("boscarol {at} is {}", bosc.get(at))
        })?;
    }
    ensure(
        (0..=7).all(|k| last.get(Coord::new(7, k)) == Weight::integer(2)) && last.len() == 8,
        || format!("boscarol final {last}"),
    )?;

    let weighted = states("weighted_row", &[("n", 6)]);
    ensure(rows_of(&weighted, 5, &[1, 3, 5, 7, 9, 11]), || {
        "weighted_row lift".into()
    })?;
    Ok("lagrange, alt_binom, boscarol and weighted_row weights match exactly".into())
}

fn c6_erratum() -> Outcome {
    let printed = SweepSpec::from_texts(
        "lagrange_as_printed",
        builtin_identity("lagrange_as_printed").unwrap(),
        &["n=1..10"],
    )
    .map_err(|e| e.to_string())?;
    let r = sweep(&printed).map_err(|e| e.to_string())?;
    ensure(r.failed == 10 && r.passed == 0, || format!("{r}"))?;
    for f in &r.failures {
        let lhs: Weight = f.lhs.parse().map_err(|e| format!("{e:?}"))?;
        let rhs: Weight = f.rhs.parse().map_err(|e| format!("{e:?}"))?;
        ensure(lhs == &rhs - &Weight::one(), || format!("{f}"))?;
    }
    let fixed = SweepSpec::from_texts("lagrange", builtin_identity("lagrange").unwrap(), &["n=1..10"])
        .map_err(|e| e.to_string())?;
    let r2 = sweep(&fixed).map_err(|e| e.to_string())?;
    ensure(r2.passed == 10 && r2.failed == 0, || format!("{r2}"))?;
    Ok(format!(
        "k=1 form: {} failures with LHS = RHS - 1; k=0 form: {} passed",
        r.failed, r2.passed
    ))
}

fn c7_fib_quarterly() -> Outcome {
    let mut spec = SweepSpec::from_catalog("fib_quarterly", 25).map_err(|e| e.to_string())?;
    spec.fib = FibConvention::Negafibonacci;
    let a = sweep(&spec).map_err(|e| e.to_string())?;
    let b = sweep(&spec).map_err(|e| e.to_string())?;
    ensure(a.complete && a.total == 325, || format!("{a}"))?;
    ensure(a.outcome() == b.outcome(), || "two runs differ".into())?;
    let verdict = if a.failed == 0 { "holds" } else { "fails" };
    Ok(format!("{a}; identity {verdict} under negafibonacci; deterministic"))
}

fn c8_oracle() -> Outcome {
    for n in 0..=60i64 {
        for k in 0..=n {
            let t = triangle::binom(n, k).map_err(|e| e.to_string())?;
            ensure(t == factorial_binom(n, k), || format!("C({n},{k})"))?;
        }
    }
    let mut compared = 0;
    for entry in catalog() {
        let ast = entry.ast();
        for b in valid_tuples(entry.id, 20)? {
            let dsl = eval_expr(&ast.lhs, &b, &ast.indeterminates).map_err(|e| e.to_string())?;
            let oracle = oracle_sum(entry.id, &b).map_err(|e| e.to_string())?;
            ensure(dsl == oracle, || {
                format!("{} {b:?}: dsl {dsl}, oracle {oracle}", entry.id)
            })?;
            compared += 1;
        }
    }
    Ok(format!(
        "binomials agree for n <= 60; {compared} DSL/oracle comparisons agree"
    ))
}

fn c9_round_trips() -> Outcome {
    for entry in catalog() {
        let ast = entry.ast();
        let text = format_identity(&ast);
        let back = parse_identity(&text).map_err(|e| format!("{}: {e}", entry.id))?;
        ensure(back == ast, || format!("{}: {text}", entry.id))?;
        ensure(format_identity(&back) == text, || entry.id.to_string())?;
    }
    let mut certs = 0;
    for entry in catalog().iter().filter(|e| e.has_script()) {
        let identity = catalog_identity_text(entry.id).map_err(|e| e.to_string())?;
        for b in valid_tuples(entry.id, 5)? {
            let script = generate_script(entry.id, &b).map_err(|e| e.to_string())?;
            let (cert, _) = Certificate::certify(&script, &identity);
            let json = cert.to_json();
            let back = Certificate::from_json(&json).map_err(|e| e.to_string())?;
            ensure(back == cert && back.to_json() == json, || format!("{} {b:?}", entry.id))?;
            certs += 1;
        }
    }
    let mut runner = deterministic_runner(1_000);
    runner
        .run(&common::poly(), |w| {
            let text = w.to_string();
            let back: Weight = text.parse().unwrap();
            proptest::prop_assert_eq!(&back, &w);
            proptest::prop_assert_eq!(back.to_string(), text);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "{} identities, {certs} certificates, 1000 weights round-trip",
        catalog().len()
    ))
}

fn c10_golden() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let labels: [(&str, &[&str]); 8] = [
        ("fig3", &["64", "32", "1"]),
        ("fig5", &["1"]),
        ("fig7", &["1", "3", "5", "7", "9", "11"]),
        ("fig9", &["1", "2", "3", "4", "6"]),
        (
            "fig12",
            &[
                "-56", "35", "-20", "10", "-4", "-21", "15", "-10", "6", "-3", "-6", "5", "-2", "-1",
            ],
        ),
        ("fig16", &["16", "8", "4", "2"]),
        ("fig18_left", &["1", "-1", "-2", "3", "-4", "6", "-3"]),
        (
            "fig18_right",
            &["70", "-35", "15", "-5", "35", "-20", "10", "-4", "-10", "6", "5"],
        ),
    ];
    for f in &FIGURES {
        let a = figure_svg(f, &RenderOptions::default()).map_err(|e| e.to_string())?;
        let b = figure_svg(f, &RenderOptions::default()).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{} not deterministic", f.name))?;
        let stored = std::fs::read_to_string(dir.join(format!("{}.svg", f.name))).map_err(|e| e.to_string())?;
        ensure(stored == a, || format!("{} differs from its golden file", f.name))?;
        let have = svg_labels(&a);
        let want = labels
            .iter()
            .find(|(n, _)| *n == f.name)
            .map(|(_, l)| *l)
            .unwrap_or(&[]);
        for l in want {
            ensure(have.iter().any(|h| h == l), || format!("{} lacks label {l}", f.name))?;
        }
    }
    Ok(format!(
        "{} figure files byte-identical with expected labels",
        FIGURES.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("identity sweeps, parameters <= 25", c1_sweeps),
        ("binomial theorem, n <= 20", c2_binomial_theorem),
        ("proof scripts, parameters <= 15", c3_scripts),
        ("step invariance, 10000 trials", c4_step_invariance),
        ("figure weights", c5_figure_weights),
        ("printed Lagrange erratum", c6_erratum),
        ("Fibonacci Quarterly report", c7_fib_quarterly),
        ("oracle cross-check", c8_oracle),
        ("round trips", c9_round_trips),
        ("golden figures", c10_golden),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
