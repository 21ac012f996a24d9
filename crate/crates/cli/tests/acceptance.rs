//! One line per acceptance criterion. Counts and tolerances are pinned here
//! rather than taken from the sweep defaults.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use galesolve::oracles::Problem;
use galesolve_cli::sweep::{render, run_all, run_sweep, Family, SweepReport};
use galesolve_cli::RunConfig;

const SEED: u64 = 1;
const SOLVER_BUDGET: Duration = Duration::from_secs(300);

fn sweep(family: Family, count: usize, cfg: &RunConfig) -> SweepReport {
    run_sweep(family, count, cfg).expect("sweep configuration is valid")
}

fn summary(reports: &[SweepReport]) -> (bool, String) {
    let ok = reports.iter().all(SweepReport::ok);
    let parts: Vec<String> = reports.iter().map(|r| format!("{} {}/{}", r.family, r.passed, r.count)).collect();
    let mut text = parts.join(", ");
    for r in reports {
        for f in r.failures.iter().take(3) {
            text.push_str(&format!("; {} instance {} seed {}: {}", r.family, f.index, f.seed, f.message));
        }
    }
    (ok, text)
}

fn main() -> ExitCode {
    let cfg = RunConfig { seed: SEED, lassos: 1000, depth: 3, ..RunConfig::default() };
    let mut lines: Vec<(usize, &str, bool, String)> = Vec::new();

    let start = Instant::now();
    let solver = sweep(Family::Solver, 500, &cfg);
    let took = start.elapsed();
    let (ok, text) = summary(std::slice::from_ref(&solver));
    lines.push((
        1,
        "solver equals brute force, strategies unbeaten (tolerance 0, budget 300s)",
        ok && took < SOLVER_BUDGET,
        format!("{text}, {:.1}s", took.as_secs_f64()),
    ));

    let (ok, text) = summary(&[sweep(Family::Duality, 100, &cfg)]);
    lines.push((2, "prefix and chain evaluators agree, 1000 lassos per instance (tolerance 0)", ok, text));

    let mut lem: Vec<SweepReport> = (1..=3).map(|n| sweep(Family::Lem(n), 200, &cfg)).collect();
    lem.push(sweep(Family::Llpo, 200, &cfg));
    let (ok, text) = summary(&lem);
    let agree: usize = lem[..3].iter().map(|r| r.passed).sum();
    lines.push((3, "lem winners equal the evaluator (600/600), llpo answers valid", ok && agree == 600, text));

    let (ok, text) = summary(&[sweep(Family::Ne, 300, &cfg)]);
    lines.push((4, "ne_multi, ne_ap and spe outputs verify; ne_ap outcome equals maximin (tolerance 0)", ok, text));

    let gadgets: Vec<SweepReport> =
        [Family::Announce, Family::Adjoin, Family::SpeChain, Family::Hat].map(|f| sweep(f, 100, &cfg)).to_vec();
    let (ok, text) = summary(&gadgets);
    lines.push((5, "announce, adjoin and spe-chain decodings and hat winners match components (tolerance 0)", ok, text));

    let traces: Vec<SweepReport> = [Problem::Win, Problem::Det, Problem::DetD2, Problem::NeAp, Problem::Spe]
        .map(|p| sweep(Family::Trace(p), 50, &cfg))
        .to_vec();
    let (ok, text) = summary(&traces);
    lines.push((6, "trace shapes conform and instrumented answers equal direct ones", ok, text));

    let (ok, text) = summary(&[sweep(Family::Deviation, 200, &cfg)]);
    lines.push((7, "depth-3 history-dependent deviations never beat positional ones", ok, text));

    let first = render(&run_all(&cfg).expect("full sweep"));
    let second = render(&run_all(&cfg).expect("full sweep"));
    let same = first == second;
    lines.push((8, "two full sweeps with the same seed give byte-identical reports", same, format!("{} bytes", first.len())));

    let mut all = true;
    for (n, what, ok, detail) in &lines {
        all &= ok;
        println!("criterion {n} {}: {what} [{detail}]", if *ok { "PASS" } else { "FAIL" });
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
