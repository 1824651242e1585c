//! Acceptance criteria, one PASS/FAIL line each; exits nonzero if any fails.

use riesz_gas::verify::{self, CheckOutcome};
use std::path::Path;
use std::time::{Duration, Instant};

struct Line {
    passed: bool,
    text: String,
}

fn timed(check: impl FnOnce() -> CheckOutcome) -> (CheckOutcome, Duration) {
    let start = Instant::now();
    let out = check();
    (out, start.elapsed())
}

fn from_check(out: CheckOutcome, elapsed: Duration, limit: Option<Duration>) -> Line {
    let within = limit.is_none_or(|l| elapsed < l);
    let budget = limit.map_or(String::new(), |l| {
        format!(" [{:.2}s, limit {}s]", elapsed.as_secs_f64(), l.as_secs())
    });
    Line {
        passed: out.passed && within,
        text: format!("{}: {}{budget}", out.name, out.detail),
    }
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .expect("output directory")
        .map(|e| {
            let e = e.expect("entry");
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).expect("readable"),
            )
        })
        .collect();
    out.sort();
    out
}

fn determinism() -> Line {
    let (a, b) = (
        tempfile::tempdir().expect("tempdir"),
        tempfile::tempdir().expect("tempdir"),
    );
    let run = |dir: &Path| {
        riesz_gas::cli::run_cli([
            "riesz-gas",
            "verify",
            "--seed",
            "20",
            "--out",
            dir.to_str().expect("utf-8 path"),
        ])
    };
    let (ca, cb) = (run(a.path()), run(b.path()));
    let (fa, fb) = (files(a.path()), files(b.path()));
    let identical = !fa.is_empty() && fa == fb;
    Line {
        passed: ca == 0 && cb == 0 && identical,
        text: format!(
            "determinism: verify exit codes ({ca}, {cb}), {} files, byte-identical = {identical}",
            fa.len()
        ),
    }
}

fn main() {
    let secs = Duration::from_secs;
    let mut lines = Vec::new();
    let (o, t) = timed(verify::coulomb_identity);
    lines.push(from_check(o, t, Some(secs(1))));
    let (o, t) = timed(verify::kernel_symmetry_and_bounds);
    lines.push(from_check(o, t, None));
    let (o, t) = timed(verify::logarithmic_limit);
    lines.push(from_check(o, t, None));
    let (o, t) = timed(verify::riesz_composition);
    lines.push(from_check(o, t, None));
    let (o, t) = timed(|| verify::hls_suite(20));
    lines.push(from_check(o, t, None));
    let (o, t) = timed(verify::critical_mass_arithmetic);
    lines.push(from_check(o, t, None));
    let (o, t) = timed(verify::solver_conservation);
    lines.push(from_check(o, t, Some(secs(60))));
    let (o, t) = timed(verify::initial_data_contract);
    lines.push(from_check(o, t, None));
    let (o, t) = timed(verify::steady_state_oracle);
    lines.push(from_check(o, t, Some(secs(30))));
    let (o, t) = timed(verify::stability_bookkeeping);
    lines.push(from_check(o, t, None));
    let (o, t) = timed(verify::viscosity_sweep);
    lines.push(from_check(o, t, None));
    lines.push(determinism());

    for (k, line) in lines.iter().enumerate() {
        println!(
            "{} criterion {:>2} {}",
            if line.passed { "PASS" } else { "FAIL" },
            k + 1,
            line.text
        );
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        lines.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
