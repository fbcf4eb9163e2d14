//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines always appear in the test output.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{ingest, rhombus, small_fixtures};
use fsdraw_core::aux_graph::{AuxGraph, Mode};
use fsdraw_core::fixtures::{gen_fan, gen_grid, gen_polygon, skew};
use fsdraw_core::model::DrawingDocument;
use fsdraw_core::pipeline::{compare, optimize, OptimizeOptions};
use fsdraw_core::solver::{bellman_ford, solve, SolverConfig, SolverKind};
use fsdraw_core::verify::oracle_lambda;
use fsdraw_core::{Drawing, FaceSymmetricDrawing, IngestConfig};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(problems: Vec<String>, summary: String) -> Verdict {
    match problems.first() {
        None => Verdict { ok: true, detail: summary },
        Some(first) => Verdict {
            ok: false,
            detail: format!("{} problem(s), first: {first}", problems.len()),
        },
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn rhombus_family() -> Verdict {
    let mut problems = Vec::new();
    let mut slowest = Duration::ZERO;
    for delta in [PI / 12.0, PI / 6.0, PI / 4.0, PI / 3.0] {
        let (run, took) = timed(|| optimize(&ingest(&rhombus(delta)), &OptimizeOptions::default()).unwrap());
        slowest = slowest.max(took);
        if (run.lambda_star() - FRAC_PI_2).abs() > 1e-6 {
            problems.push(format!("delta {delta}: lambda* {}", run.lambda_star()));
        }
        if run.exit_code() != 0 {
            problems.push(format!("delta {delta}: exit {}", run.exit_code()));
        }
        if took > Duration::from_millis(100) {
            problems.push(format!("delta {delta}: took {took:?}"));
        }
    }
    verdict(problems, format!("4 rhombi at pi/2, slowest {slowest:?}"))
}

fn polygon_family() -> Verdict {
    let mut problems = Vec::new();
    let (_, took) = timed(|| {
        for k in 2..=8 {
            let fsd = ingest(&gen_polygon(k).unwrap());
            let run = optimize(&fsd, &OptimizeOptions::default()).unwrap();
            let want = (k as f64 - 1.0) * PI / k as f64;
            let oracle = oracle_lambda(&run.aux, 1e-11).unwrap();
            if (run.lambda_star() - want).abs() > 1e-6 || (oracle - want).abs() > 1e-6 {
                problems.push(format!("k={k}: solver {} oracle {oracle} want {want}", run.lambda_star()));
            }
        }
    });
    if took > Duration::from_secs(1) {
        problems.push(format!("took {took:?}"));
    }
    verdict(problems, format!("k=2..8 match (k-1)pi/k and the oracle, {took:?}"))
}

fn grid_family() -> Verdict {
    let mut problems = Vec::new();
    let mut count = 0;
    for m in 1..=5 {
        for n in 1..=5 {
            let d = skew(&gen_grid(m, n).unwrap(), PI / 6.0).unwrap();
            let run = optimize(&ingest(&d), &OptimizeOptions::default()).unwrap();
            let res = run.report.resolution.unwrap_or(f64::NAN);
            if (run.lambda_star() - FRAC_PI_2).abs() > 1e-6 || !((res - run.lambda_star()).abs() <= 1e-6) {
                problems.push(format!("{m}x{n}: lambda* {} resolution {res}", run.lambda_star()));
            }
            count += 1;
        }
    }
    verdict(problems, format!("{count} skewed grids at pi/2 with matching output resolution"))
}

fn oracle_equivalence() -> Verdict {
    let cfg = SolverConfig::default();
    let mut problems = Vec::new();
    let mut count = 0;
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for f in small_fixtures() {
        let fsd = ingest(&f.drawing);
        assert!(fsd.zone_count() <= 12, "{}", f.name);
        let aux = AuxGraph::from_drawing(&fsd, Mode::Safe);
        let oracle = oracle_lambda(&aux, 1e-12).unwrap();
        let bisect = solve(&aux, SolverKind::Bisect, None, &cfg).unwrap().lambda_star;
        let exact = solve(&aux, SolverKind::Exact, None, &cfg).unwrap().lambda_star;
        let gaps = ((bisect - oracle).abs(), (exact - oracle).abs(), (bisect - exact).abs());
        worst = (worst.0.max(gaps.0), worst.1.max(gaps.1), worst.2.max(gaps.2));
        if gaps.0 > 2e-9 || gaps.1 > 1e-9 || gaps.2 > 1e-9 {
            problems.push(format!("{}: oracle {oracle} bisect {bisect} exact {exact}", f.name));
        }
        count += 1;
    }
    if count < 30 {
        problems.push(format!("only {count} fixtures"));
    }
    verdict(
        problems,
        format!(
            "{count} fixtures; worst gaps bisect {:.1e}, exact {:.1e}, bisect-exact {:.1e}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn property_suite() -> Verdict {
    let mut problems = Vec::new();
    let mut count = 0;
    for f in small_fixtures() {
        let fsd = ingest(&f.drawing);
        let both = compare(&fsd, &OptimizeOptions::default()).unwrap();
        let safe = &both.safe;
        if !(safe.certificate.worst_violation <= 1e-9) {
            problems.push(format!("{}: (a) violation {}", f.name, safe.certificate.worst_violation));
        }
        if safe.lambda_star() + 1e-6 < 2.0 * PI && bellman_ford(&safe.aux, safe.lambda_star() + 1e-6).is_feasible() {
            problems.push(format!("{}: (b) feasible above lambda*", f.name));
        }
        let res_out = safe.report.resolution.unwrap_or(f64::NAN);
        if !(res_out >= safe.resolution_in - 1e-9) {
            problems.push(format!("{}: (c) resolution {} -> {res_out}", f.name, safe.resolution_in));
        }
        if !safe.report.passed(Mode::Safe) {
            problems.push(format!("{}: (d) {:?}", f.name, safe.report));
        }
        if both.unsafe_.lambda_star() < safe.lambda_star() - 2e-9 {
            problems.push(format!(
                "{}: (e) unsafe {} < safe {}",
                f.name,
                both.unsafe_.lambda_star(),
                safe.lambda_star()
            ));
        }
        count += 1;
    }
    verdict(problems, format!("(a)-(e) hold on {count} fixtures"))
}

fn improvement() -> Verdict {
    let mut problems = Vec::new();
    let mut notes = Vec::new();
    let cases = [
        ("grid(10,12) skew pi/6", skew(&gen_grid(10, 12).unwrap(), PI / 6.0).unwrap()),
        ("fan(12) skew 0.5", skew(&gen_fan(12).unwrap(), 0.5).unwrap()),
    ];
    for (name, d) in cases {
        let both = compare(&ingest(&d), &OptimizeOptions::default()).unwrap();
        let res_in = both.safe.resolution_in;
        let res_out = both.safe.report.resolution.unwrap_or(0.0);
        let factor = res_out / res_in;
        notes.push(format!(
            "{name}: {res_in:.4} -> {res_out:.4} (x{factor:.2}), unsafe {:.4}",
            both.unsafe_.lambda_star()
        ));
        if factor < 1.2 {
            problems.push(format!("{name}: factor {factor}"));
        }
        if both.unsafe_.lambda_star() < both.safe.lambda_star() - 2e-9 {
            problems.push(format!("{name}: unsafe below safe"));
        }
        if both.safe.exit_code() != 0 {
            problems.push(format!("{name}: safe checks {:?}", both.safe.report));
        }
    }
    verdict(problems, notes.join("; "))
}

fn scale() -> Verdict {
    let d = skew(&gen_fan(220).unwrap(), 0.5).unwrap();
    let opts = OptimizeOptions {
        solver_cfg: SolverConfig {
            tol: 1e-9,
            max_iter: 64,
        },
        ..Default::default()
    };
    let (run, took) = timed(|| optimize(&ingest(&d), &opts).unwrap());
    let mut problems = Vec::new();
    if took > Duration::from_secs(120) {
        problems.push(format!("took {took:?}"));
    }
    if run.exit_code() != 0 {
        problems.push(format!("exit {}", run.exit_code()));
    }
    verdict(
        problems,
        format!(
            "fan(220), {} zones, {} aux edges: lambda* {:.6} in {took:.2?}",
            run.aux.zone_count,
            run.aux.edges.len(),
            run.lambda_star()
        ),
    )
}

fn reingest(d: &Drawing, fsd: &FaceSymmetricDrawing) -> FaceSymmetricDrawing {
    let json = DrawingDocument::from_drawing(d, Some(&fsd.zones)).to_json_pretty();
    FaceSymmetricDrawing::from_json(&json, &IngestConfig::default()).unwrap()
}

fn idempotence() -> Verdict {
    let opts = OptimizeOptions::default();
    let tol = opts.solver_cfg.tol;
    let mut problems = Vec::new();
    let (mut worst_lambda, mut worst_rot) = (0.0f64, 0.0f64);
    let mut count = 0;
    for f in small_fixtures() {
        let fsd = ingest(&f.drawing);
        let first = optimize(&fsd, &opts).unwrap();
        let again = optimize(&reingest(&first.output, &fsd), &opts).unwrap();
        let dl = (again.lambda_star() - first.lambda_star()).abs();
        let dr = again.rotations().iter().fold(0.0f64, |m, d| m.max(d.abs()));
        worst_lambda = worst_lambda.max(dl);
        worst_rot = worst_rot.max(dr);
        if dl > 2.0 * tol || dr > 1e-6 {
            problems.push(format!("{}: lambda shift {dl:e}, rotation {dr:e}", f.name));
        }
        count += 1;
    }
    verdict(
        problems,
        format!("{count} fixtures; worst lambda shift {worst_lambda:.1e}, worst rotation {worst_rot:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("rhombus family", rhombus_family),
        ("polygon family", polygon_family),
        ("grid family", grid_family),
        ("oracle equivalence", oracle_equivalence),
        ("property suite", property_suite),
        ("improvement on skewed inputs", improvement),
        ("scale", scale),
        ("idempotence", idempotence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        let status = if v.ok { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} {name}: {}", i + 1, v.detail);
        failed += usize::from(!v.ok);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
