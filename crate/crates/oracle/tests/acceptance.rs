//! Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

use std::time::Instant;

use fridge_oracle::verify::{
    asymptotic_identities, contraction, crossing_geometry, degeneracy_sweep, formula_equivalence,
    ladder_saturation, pareto_dominance, vertex_oracle, Check, DEFAULT_SEED,
};

struct Criterion {
    id: u8,
    title: &'static str,
    limit_secs: Option<f64>,
    run: fn() -> Vec<Check>,
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "formula/oracle equivalence, 500 machines, |Δr| ≤ 1e-12",
            limit_secs: Some(10.0),
            run: || {
                formula_equivalence(DEFAULT_SEED, 500, &[])
                    .into_iter()
                    .filter(|c| c.name == "formula_equivalence")
                    .collect()
            },
        },
        Criterion {
            id: 2,
            title: "Haar Pareto sweep, 1e5 unitaries, slack 1e-9",
            limit_secs: Some(60.0),
            run: || vec![pareto_dominance(DEFAULT_SEED, 100_000, &[]).0],
        },
        Criterion {
            id: 3,
            title: "majorization solver vs vertex oracle, 200 instances, 1e-10",
            limit_secs: None,
            run: || vec![vertex_oracle(DEFAULT_SEED, 200, &[])],
        },
        Criterion {
            id: 4,
            title: "crossing geometry and endpoint orderings",
            limit_secs: None,
            run: || crossing_geometry(&[]),
        },
        Criterion {
            id: 5,
            title: "asymptotic identities",
            limit_secs: None,
            run: || asymptotic_identities(&[]),
        },
        Criterion {
            id: 6,
            title: "second-law saturation of the ladders",
            limit_secs: None,
            run: || {
                ladder_saturation(&[])
                    .into_iter()
                    .filter(|c| c.name != "ladder_stage_heat")
                    .collect()
            },
        },
        Criterion {
            id: 7,
            title: "degeneracy classification, 50 machines per type",
            limit_secs: None,
            run: || vec![degeneracy_sweep(DEFAULT_SEED, 50, &[])],
        },
        Criterion {
            id: 8,
            title: "contraction law, n ≤ 50, 1e-13",
            limit_secs: None,
            run: || vec![contraction(DEFAULT_SEED, &[])],
        },
    ]
}

fn main() {
    let mut all_ok = true;
    for c in criteria() {
        let start = Instant::now();
        let checks = (c.run)();
        let secs = start.elapsed().as_secs_f64();
        let in_time = c.limit_secs.is_none_or(|l| secs <= l);
        let ok = in_time && !checks.is_empty() && checks.iter().all(|k| k.passed);
        all_ok &= ok;
        let limit = c.limit_secs.map_or(String::new(), |l| format!(", limit {l} s"));
        println!(
            "criterion {}: {} -- {} ({secs:.2} s{limit})",
            c.id,
            c.title,
            if ok { "PASS" } else { "FAIL" }
        );
        for k in &checks {
            println!(
                "    {} {}: residual {:e} (tolerance {:e}); {}",
                if k.passed { "ok  " } else { "FAIL" },
                k.name,
                k.residual,
                k.tolerance,
                k.detail
            );
        }
    }
    if !all_ok {
        std::process::exit(1);
    }
}
