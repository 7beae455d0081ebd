//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use conformable_gegenbauer::alphapoly::{integer, rational, Alpha};
use conformable_gegenbauer::cli::{plot_csv, plot_series, sample_points, DEFAULT_PLOT_ALPHAS, DEFAULT_SAMPLES};
use conformable_gegenbauer::parallel::Execution;
use conformable_gegenbauer::quadrature::{
    normalization_audit, normalization_oracle_report, orthogonality_report, NormGrid, QuadratureConfig,
};
use conformable_gegenbauer::suites::{run_suite, Suite, SuiteOptions};
use conformable_gegenbauer::verify::{self, Grid, Status, VerificationReport};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn all_exact(reports: &[VerificationReport]) -> Check {
    match reports.iter().find(|r| r.status != Status::ExactPass) {
        None => Ok(format!("{} exact reports", reports.len())),
        Some(r) => Err(r.to_string()),
    }
}

fn all_passed(reports: &[VerificationReport]) -> Check {
    match reports.iter().find(|r| !r.passed()) {
        None => {
            let worst = reports
                .iter()
                .filter_map(|r| match r.status {
                    Status::NumericPass { max_residual } => Some(max_residual),
                    _ => None,
                })
                .fold(0.0, f64::max);
            Ok(format!("{} reports, max residual {worst:e}", reports.len()))
        }
        Some(r) => Err(r.to_string()),
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn alphas(xs: &[&str]) -> Vec<Alpha> {
    xs.iter().map(|a| Alpha::parse(a).unwrap()).collect()
}

fn c1() -> Check {
    all_exact(&[verify::constructor_agreement(&Grid::standard(), Execution::Parallel)])
}

fn c2() -> Check {
    all_exact(&[verify::ode_annihilation(&Grid::standard(), Execution::Parallel)])
}

fn c3() -> Check {
    all_exact(&[verify::generating_function_equivalence(
        &[rational(1, 2), integer(1), integer(3)],
        10,
        Execution::Parallel,
    )])
}

fn c4() -> Check {
    let grid = Grid::standard();
    let mut reports = vec![verify::diff_relation_suite(&grid, 3, 8, Execution::Parallel)];
    reports.extend(verify::recurrence_suite(&grid, 1, 11, Execution::Parallel));
    reports.push(verify::endpoint_suite(&grid, Execution::Parallel));
    all_exact(&reports)
}

fn c5() -> Check {
    let grid = Grid::standard();
    let exact = verify::special_case_reductions(&grid.alphas, 10);
    let exact_summary = all_exact(&exact)?;
    let numeric = verify::classical_evaluation(&grid.lambdas, grid.n_max, 200, 1e-12, Execution::Parallel);
    let numeric_summary = all_passed(&[numeric])?;
    Ok(format!("{exact_summary}; classical evaluation {numeric_summary}"))
}

fn c6() -> Check {
    let grid = NormGrid {
        n_max: 8,
        lambdas: vec![integer(1), integer(3)],
        alphas: alphas(&["1/2", "1"]),
    };
    let report = orthogonality_report(&grid, &QuadratureConfig::default(), 1e-8, Execution::Parallel).map_err(|e| e.to_string())?;
    all_passed(&[report])
}

fn c7() -> Check {
    let cfg = QuadratureConfig::default();
    let grid = NormGrid {
        n_max: 6,
        lambdas: vec![integer(1), integer(3)],
        alphas: alphas(&["1/4", "1/2", "1"]),
    };
    let oracle = normalization_oracle_report(&grid, &cfg, 1e-6, Execution::Parallel).map_err(|e| e.to_string())?;
    let summary = all_passed(&[oracle])?;

    let audit = normalization_audit(&NormGrid::audit_default(), &cfg, 1e-6, Execution::Parallel).map_err(|e| e.to_string())?;
    let row = audit
        .rows
        .iter()
        .find(|r| r.n == 0 && r.lambda == integer(1) && r.alpha == Alpha::one())
        .ok_or("audit has no (0, 1, 1) row")?;
    let eq44 = row.eq44.ok_or("printed formula has a pole at (0, 1, 1)")?;
    ensure((row.quadrature - PI / 2.0).abs() < 1e-10, format!("quadrature {} != pi/2", row.quadrature))?;
    ensure((eq44 - PI.sqrt() / 2.0).abs() < 1e-12, format!("printed formula {eq44} != sqrt(pi)/2"))?;
    let printed = audit
        .reports
        .iter()
        .find(|r| r.identity.starts_with("printed normalisation formula"))
        .ok_or("no printed-formula audit entry")?;
    ensure(printed.audit && !printed.passed(), "printed formula not flagged")?;
    ensure(
        printed.notes.iter().any(|n| n.starts_with("n=0 lambda=1 alpha=1: formula")),
        "(0, 1, 1) missing from the flagged rows",
    )?;
    Ok(format!("{summary}; flagged (0,1,1): formula {eq44:.7} vs quadrature {:.7}", row.quadrature))
}

/// `C_1 .. C_5` at `λ = 3` in `u`, written out by hand.
fn listed(n: usize, u: f64) -> (f64, f64) {
    let terms: Vec<f64> = match n {
        1 => vec![6.0 * u],
        2 => vec![24.0 * u * u, -3.0],
        3 => vec![80.0 * u.powi(3), -24.0 * u],
        4 => vec![240.0 * u.powi(4), -120.0 * u * u, 6.0],
        5 => vec![672.0 * u.powi(5), -480.0 * u.powi(3), 60.0 * u],
        _ => unreachable!(),
    };
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}

fn c8() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let lambda = integer(3);
    let alphas = alphas(&DEFAULT_PLOT_ALPHAS);
    let xs = sample_points(0.0, 1.0, DEFAULT_SAMPLES).map_err(|e| e.to_string())?;
    let mut endpoints = Vec::new();
    for n in 1..=5usize {
        let series = plot_series(n, &lambda, &alphas, &xs).map_err(|e| e.to_string())?;
        let csv = plot_csv(&series);
        let again = plot_csv(&plot_series(n, &lambda, &alphas, &xs).map_err(|e| e.to_string())?);
        ensure(csv == again, format!("n={n}: output not deterministic"))?;
        let golden = std::fs::read_to_string(dir.join(format!("plot_n{n}.csv"))).map_err(|e| e.to_string())?;
        ensure(csv == golden, format!("n={n}: differs from golden file"))?;

        // Γ(2λ+n)/(Γ(2λ) n!) = (n+5)!/(5! n!) for λ = 3
        let expected = ((n + 1)..=(n + 5)).product::<usize>() as f64 / 120.0;
        for s in &series {
            let a = s.alpha.value();
            let end = *s.ordinates.last().unwrap();
            ensure(
                (end - expected).abs() <= 1e-12 * expected,
                format!("n={n} alpha={a}: C(1) = {end}, expected {expected}"),
            )?;
            for (&x, &y) in s.abscissas.iter().zip(&s.ordinates) {
                let (v, scale) = listed(n, x.powf(a));
                ensure(
                    (y - v).abs() <= 1e-13 * scale.max(1.0),
                    format!("n={n} alpha={a} x={x}: {y} vs hand-written {v}"),
                )?;
            }
        }
        endpoints.push(expected);
    }
    Ok(format!("5 golden files byte-identical; endpoints {endpoints:?}"))
}

fn c9() -> Check {
    let run = run_suite(Suite::All, &SuiteOptions::default()).map_err(|e| e.to_string())?;
    let find = |prefix: &str| run.reports.iter().find(|r| r.identity.starts_with(prefix));
    let entries = [
        "T^beta under the printed operator",
        "T^beta series as printed",
        "T^beta Rodrigues normalisation",
        "printed normalisation formula",
        "pre-simplification normalisation display",
    ];
    for e in entries {
        let r = find(e).ok_or(format!("missing audit entry {e:?}"))?;
        ensure(r.audit, format!("{e:?} is not marked as audit"))?;
    }
    let flags = run.reports.iter().filter(|r| r.audit && !r.passed()).count();
    ensure(flags > 0, "no audit entry flagged anything")?;
    ensure(run.passed(), format!("{} blocking failures", run.blocking_failures()))?;
    Ok(format!(
        "{} reports, {} audit entries ({flags} flagged), run still passes",
        run.reports.len(),
        run.reports.iter().filter(|r| r.audit).count()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("constructor agreement", c1),
        ("ODE annihilation", c2),
        ("generating-function equivalence", c3),
        ("identity suite", c4),
        ("special-case reductions", c5),
        ("orthogonality", c6),
        ("normalisation oracle and printed-formula flag", c7),
        ("figure reproduction", c8),
        ("audit completeness", c9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {} [{secs:.2}s]", i + 1, why.trim_end());
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
