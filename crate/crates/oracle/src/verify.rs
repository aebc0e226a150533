//! The oracle suite: every closed form checked against an independent
//! computation, with residuals.
//!
//! Each check can be told to corrupt its closed-form side (`mutate`), which
//! must make that check, and only that check, fail.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use fridge_core::crossing::{find_crossing, population_difference};
use fridge_core::curves::coherent_single_curve;
use fridge_core::ladder::{coherent_ladder, incoherent_c_gap, incoherent_ladder, LadderSpec, PreheatModel};
use fridge_core::majorization::{solve_one_qubit, solve_two_qubit, vertex_oracle_min, PopVector};
use fridge_core::protocols::{
    algorithmic_cooling, autonomous_steady_state, coherent_population_for_mu, degeneracy_classifier,
    repeated_coherent, repeated_incoherent, two_qubit_coherent_single, two_qubit_incoherent_single, Repetitions,
    TwoQubit,
};
use fridge_core::virtual_qubit::{extract_virtual_qubit, n_swap_population, swap_update};
use fridge_core::{
    boltzmann_population, FridgeError, MachineSpec, Population, Result, Temperature,
};

use crate::dense::gibbs_ground;
use crate::gradient::{analytic_gradient, thermalization_gradient_check};
use crate::haar::{haar_pareto_sweep, DominanceReport};
use crate::simulate::{
    dense_algorithmic, dense_coherent_single, dense_incoherent_single, dense_repeated_coherent,
    dense_repeated_incoherent, dense_repeated_incoherent_from, carnot_factor,
};
use crate::sweep::audit_degeneracies;

pub const DEFAULT_SEED: u64 = 0x5EED_F81D_6E00_0001;

/// Offset applied to a closed form under mutation.
const CORRUPTION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    fn new(name: &str, residual: f64, tolerance: f64, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            residual,
            tolerance,
            detail,
            seconds: 0.0,
        }
    }

    /// Pass iff `residual ≤ tolerance`.
    fn bound(name: &str, residual: f64, tolerance: f64, detail: String) -> Self {
        Self::new(name, residual, tolerance, residual <= tolerance, detail)
    }

    fn failed(name: &str, err: &FridgeError) -> Self {
        Self::new(name, f64::INFINITY, 0.0, false, format!("error: {err}"))
    }
}

/// Names accepted by `mutate`.
pub const CHECK_NAMES: &[&str] = &[
    "formula_equivalence",
    "energy_equivalence",
    "pareto_dominance",
    "vertex_oracle",
    "crossing_geometry",
    "endpoint_ordering",
    "incoherent_autonomous_limit",
    "algorithmic_half_temperature",
    "coherent_repetition_limit",
    "ladder_gap_positive",
    "ladder_gap_rate",
    "ladder_embedded_preheat",
    "ladder_stage_heat",
    "degeneracy_sweep",
    "contraction",
    "thermalization_gradient",
];

fn taint(x: f64, on: bool) -> f64 {
    if on {
        x + CORRUPTION
    } else {
        x
    }
}

fn stream(seed: u64, salt: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index);
    rng
}

fn fin(t: f64) -> Temperature {
    Temperature::Finite(t)
}

/// Random resonant machine with `E ∈ [0.2, 3]`, `E_C ∈ [0.05, 5]`,
/// `T_R ∈ [0.2, 5]` and `T_H ∈ [T_R, 20]`, infinite with probability 0.15.
pub fn random_machine(rng: &mut ChaCha8Rng) -> Result<MachineSpec> {
    let e = rng.random_range(0.2..3.0);
    let e_c = rng.random_range(0.05..5.0);
    let tr = rng.random_range(0.2..5.0);
    let th = if rng.random_bool(0.15) {
        Temperature::Infinite
    } else {
        fin(rng.random_range(tr..20.0))
    };
    MachineSpec::two_qubit_resonant(e, e_c, fin(tr), Some(th))
}

struct DrawResidual {
    r: f64,
    energy: f64,
}

fn one_draw(spec: &MachineSpec, rng: &mut ChaCha8Rng, mutate_r: bool, mutate_e: bool) -> Result<DrawResidual> {
    let p = TwoQubit::from_spec(spec)?;
    let mut r_res = 0.0f64;
    let mut e_res = 0.0f64;
    let scale = p.e + p.e_b + p.e_c;
    let mut cmp_r = |closed: f64, dense: f64| r_res = r_res.max((taint(closed, mutate_r) - dense).abs());
    let mut cmp_e = |closed: f64, dense: f64| e_res = e_res.max((taint(closed, mutate_e) - dense).abs() / scale);

    let inc = two_qubit_incoherent_single(spec)?;
    let d = dense_incoherent_single(spec)?;
    cmp_r(inc.r_final.r(), d.r);
    cmp_e(inc.heat_drawn.unwrap_or(f64::NAN), d.heat);

    let mu = rng.random_range(0.0..=1.0);
    let target = coherent_population_for_mu(spec, mu)?;
    let coh = two_qubit_coherent_single(spec, target)?;
    let d = dense_coherent_single(spec, mu)?;
    cmp_r(coh.r_final.r(), d.r);
    cmp_e(coh.work_cost.delta_f, d.work);

    let n = rng.random_range(1..=30u64);
    let rep = repeated_incoherent(spec, Repetitions::Finite(n))?;
    let d = dense_repeated_incoherent(spec, n)?;
    cmp_r(rep.r_final.r(), d.r);
    cmp_e(rep.heat_drawn.unwrap_or(f64::NAN), d.heat);

    let n = rng.random_range(1..=30u64);
    let rep = repeated_coherent(spec, Repetitions::Finite(n))?;
    let d = dense_repeated_coherent(spec, n)?;
    cmp_r(rep.r_final.r(), d.r);
    cmp_e(rep.work_cost.delta_f, d.work);

    let n = rng.random_range(1..=30u64);
    let algo = algorithmic_cooling(spec, Repetitions::Finite(n), 1.0, p.r)?;
    let d = dense_algorithmic(spec, n, 1.0, p.r)?;
    cmp_r(algo.r_final.r(), d.r);

    Ok(DrawResidual { r: r_res, energy: e_res })
}

/// Closed-form populations and energies against dense simulation on
/// `draws` random machines.
pub fn formula_equivalence(seed: u64, draws: usize, mutate: &[&str]) -> Vec<Check> {
    let mutate_r = mutate.contains(&"formula_equivalence");
    let mutate_e = mutate.contains(&"energy_equivalence");
    let results: Vec<Result<DrawResidual>> = (0..draws as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 1, i);
            let spec = random_machine(&mut rng)?;
            one_draw(&spec, &mut rng, mutate_r, mutate_e)
        })
        .collect();
    let mut r_max = 0.0f64;
    let mut e_max = 0.0f64;
    for res in results {
        match res {
            Ok(d) => {
                r_max = r_max.max(d.r);
                e_max = e_max.max(d.energy);
            }
            Err(e) => {
                return vec![
                    Check::failed("formula_equivalence", &e),
                    Check::failed("energy_equivalence", &e),
                ]
            }
        }
    }
    vec![
        Check::bound(
            "formula_equivalence",
            r_max,
            1e-12,
            format!("{draws} machines: incoherent, coherent, repeated and algorithmic populations"),
        ),
        Check::bound(
            "energy_equivalence",
            e_max,
            1e-12,
            format!("{draws} machines: heat and work relative to E + E_B + E_C"),
        ),
    ]
}

/// The reference machine `(E, E_C, T_R) = (1, 0.4, 1)`.
pub fn reference_machine() -> MachineSpec {
    MachineSpec::two_qubit_resonant(1.0, 0.4, fin(1.0), None).expect("valid reference machine")
}

/// Haar unitaries against the analytic single-cycle coherent curve.
pub fn pareto_dominance(seed: u64, samples: usize, mutate: &[&str]) -> (Check, Option<DominanceReport>) {
    const NAME: &str = "pareto_dominance";
    if samples == 0 {
        return (Check::new(NAME, 0.0, 0.0, true, "skipped: no samples requested".into()), None);
    }
    let spec = reference_machine();
    let run = || -> Result<DominanceReport> {
        let mut curve = coherent_single_curve(&spec, 101)?;
        if mutate.contains(&NAME) {
            for p in &mut curve.points {
                p.r = Population::new(p.r.r() - 1e-3)?;
            }
        }
        haar_pareto_sweep(&spec, samples, &curve, seed)
    };
    match run() {
        Ok(rep) => {
            let check = Check::new(
                NAME,
                rep.max_excess,
                rep.slack,
                rep.is_clean(),
                format!("{} of {samples} samples dominate the curve (seed {seed})", rep.dominating.len()),
            );
            (check, Some(rep))
        }
        Err(e) => (Check::failed(NAME, &e), None),
    }
}

/// Closed-form constrained minimum against the exhaustive permutation oracle.
pub fn vertex_oracle(seed: u64, instances: usize, mutate: &[&str]) -> Check {
    const NAME: &str = "vertex_oracle";
    let on = mutate.contains(&NAME);
    let results: Vec<Result<f64>> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, 3, i);
            let tr = fin(rng.random_range(0.2..5.0));
            let e = rng.random_range(0.2..3.0);
            let e_c = rng.random_range(0.05..5.0);
            let e_b = e + e_c;
            let r = boltzmann_population(e, tr)?;
            let r_b = boltzmann_population(e_b, tr)?;
            let frac = rng.random_range(0.0..=1.0);
            let rt = r.r() + frac * (r_b.r() - r.r());
            if i % 2 == 0 {
                let rho = PopVector::new(fridge_core::thermal::product_diagonal(&[r, r_b]))?;
                let h = fridge_core::thermal::product_energies(&[e, e_b]);
                let closed = solve_one_qubit(&rho, &h, rt)?.objective;
                Ok((taint(closed, on) - vertex_oracle_min(&rho, &h, 2, rt)?).abs())
            } else {
                let spec = MachineSpec::two_qubit_resonant(e, e_c, tr, None)?;
                let p = TwoQubit::from_spec(&spec)?;
                let rho = PopVector::new(fridge_core::thermal::product_diagonal(&[p.r, p.r_b, p.r_c]))?;
                let h = fridge_core::thermal::product_energies(&[e, e_b, e_c]);
                let closed = solve_two_qubit(&rho, &h, rt, p.regime())?.objective;
                Ok((taint(closed, on) - vertex_oracle_min(&rho, &h, 4, rt)?).abs())
            }
        })
        .collect();
    match results.into_iter().collect::<Result<Vec<_>>>() {
        Ok(v) => Check::bound(
            NAME,
            v.into_iter().fold(0.0, f64::max),
            1e-10,
            format!("{instances} instances, alternating dimension 4 and 8"),
        ),
        Err(e) => Check::failed(NAME, &e),
    }
}

/// Crossing of the single-cycle curves on the reference machine, and the
/// endpoint orderings on a 10 × 10 grid of `(E_C, T_R)`.
pub fn crossing_geometry(mutate: &[&str]) -> Vec<Check> {
    let flip = if mutate.contains(&"crossing_geometry") { -1.0 } else { 1.0 };
    let spec = reference_machine();
    let crossing = || -> Result<Check> {
        let rep = find_crossing(&spec, 1e-10)?;
        let p = TwoQubit::from_spec(&spec)?;
        let end = p.coherent_endpoint_cost();
        let mut worst = f64::INFINITY;
        for k in 1..=50 {
            let below = rep.delta_f_crit * k as f64 / 51.0;
            worst = worst.min(flip * population_difference(&p, below));
            let above = rep.delta_f_crit_prime + (end - rep.delta_f_crit_prime) * k as f64 / 50.0;
            worst = worst.min(-flip * population_difference(&p, above));
        }
        let ok = rep.delta_f_crit > 0.0 && rep.sign_changes >= 2 && worst > 0.0;
        Ok(Check::new(
            "crossing_geometry",
            worst,
            0.0,
            ok,
            format!(
                "ΔF_crit = {:.12}, ΔF'_crit = {:.12}, T_crit = {}, {} sign changes; smallest probe margin {worst:e}",
                rep.delta_f_crit, rep.delta_f_crit_prime, rep.t_crit, rep.sign_changes
            ),
        ))
    };
    let inflate = mutate.contains(&"endpoint_ordering");
    let ordering = || -> Result<Check> {
        let mut violations = 0usize;
        let mut margin = f64::INFINITY;
        for i in 0..10 {
            for j in 0..10 {
                let e_c = 0.05 + (5.0 - 0.05) * i as f64 / 9.0;
                let tr = 0.2 + (5.0 - 0.2) * j as f64 / 9.0;
                let spec = MachineSpec::two_qubit_resonant(1.0, e_c, fin(tr), Some(Temperature::Infinite))?;
                let p = TwoQubit::from_spec(&spec)?;
                let coh = two_qubit_coherent_single(&spec, p.r_b)?;
                let inc = two_qubit_incoherent_single(&spec)?;
                let df_coh = coh.work_cost.delta_f * if inflate { 1e6 } else { 1.0 };
                let t_gap = inc.t_final.value() - coh.t_final.value();
                let f_gap = inc.work_cost.delta_f - df_coh;
                margin = margin.min(t_gap.min(f_gap));
                if !(t_gap > 0.0 && f_gap > 0.0) {
                    violations += 1;
                }
            }
        }
        Ok(Check::new(
            "endpoint_ordering",
            violations as f64,
            0.0,
            violations == 0,
            format!("T_coh* < T_inc* and ΔF_coh* < ΔF_inc* on 100 machines; smallest margin {margin:e}"),
        ))
    };
    vec![
        crossing().unwrap_or_else(|e| Check::failed("crossing_geometry", &e)),
        ordering().unwrap_or_else(|e| Check::failed("endpoint_ordering", &e)),
    ]
}

fn asymptotic_grid() -> Result<Vec<MachineSpec>> {
    let mut out = Vec::new();
    for &e in &[0.5, 1.0, 2.0] {
        for &e_c in &[0.1, 0.4, 1.0, 2.5] {
            for &tr in &[0.3, 1.0, 3.0] {
                for th in [fin(1.5 * tr), fin(10.0 * tr), Temperature::Infinite] {
                    out.push(MachineSpec::two_qubit_resonant(e, e_c, fin(tr), Some(th))?);
                }
            }
        }
    }
    Ok(out)
}

/// Relative tolerance used for identities that hold exactly in real arithmetic.
pub const EXACT_REL: f64 = 4.0 * f64::EPSILON;

/// Limits of the repeated protocols on a 108-machine grid.
pub fn asymptotic_identities(mutate: &[&str]) -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let grid = asymptotic_grid()?;
        let (mut auto_res, mut half_res, mut coh_res) = (0.0f64, 0.0f64, 0.0f64);
        for spec in &grid {
            let p = TwoQubit::from_spec(spec)?;
            let rep = repeated_incoherent(spec, Repetitions::Infinite)?;
            let auto = autonomous_steady_state(spec)?;
            let dq = rep.heat_drawn.unwrap_or(f64::NAN) - auto.heat_drawn.unwrap_or(f64::NAN);
            let dr = taint(rep.r_final.r(), mutate.contains(&"incoherent_autonomous_limit")) - auto.r_final.r();
            auto_res = auto_res.max(dr.abs()).max(dq.abs());

            let t_coh = two_qubit_coherent_single(spec, p.r_b)?.t_final.value();
            let algo = algorithmic_cooling(spec, Repetitions::Infinite, 1.0, p.r)?;
            let t_algo = taint(algo.t_final.value(), mutate.contains(&"algorithmic_half_temperature"));
            half_res = half_res.max(((t_algo - 0.5 * t_coh) / t_algo).abs());

            let coh = repeated_coherent(spec, Repetitions::Infinite)?;
            let expected = spec.t_room.value() * p.e / (p.e_b + p.e_c);
            let t_rc = taint(coh.t_final.value(), mutate.contains(&"coherent_repetition_limit"));
            coh_res = coh_res.max(((t_rc - expected) / expected).abs());
        }
        let n = grid.len();
        Ok(vec![
            Check::bound(
                "incoherent_autonomous_limit",
                auto_res,
                1e-14,
                format!("{n} machines: r_final and heat of infinitely repeated incoherent cycles vs the autonomous steady state"),
            ),
            Check::bound(
                "algorithmic_half_temperature",
                half_res,
                EXACT_REL,
                format!("{n} machines: algorithmic limit vs half the coherent single-cycle temperature (relative)"),
            ),
            Check::bound(
                "coherent_repetition_limit",
                coh_res,
                EXACT_REL,
                format!("{n} machines: repeated coherent limit vs T_R E/(E_B + E_C) (relative)"),
            ),
        ])
    };
    run().unwrap_or_else(|e| {
        ["incoherent_autonomous_limit", "algorithmic_half_temperature", "coherent_repetition_limit"]
            .iter()
            .map(|n| Check::failed(n, &e))
            .collect()
    })
}

/// Second-law saturation of the ladders at `T_R = 1`, `T_C = 0.5`.
pub fn ladder_saturation(mutate: &[&str]) -> Vec<Check> {
    let run = || -> Result<Vec<Check>> {
        let gap = |n: usize| -> Result<f64> { Ok(coherent_ladder(&LadderSpec::coherent(n, 0.5, 1.0)?)?.gap) };
        let mut min_gap = f64::INFINITY;
        for n in 1..=256 {
            min_gap = min_gap.min(gap(n)?);
        }
        let min_gap = if mutate.contains(&"ladder_gap_positive") { -min_gap } else { min_gap };

        let mut ratios = Vec::new();
        let mut dev = 0.0f64;
        for n in [16, 32, 64] {
            let scale = if mutate.contains(&"ladder_gap_rate") { 2.0 } else { 1.0 };
            let ratio = scale * gap(2 * n)? / gap(n)?;
            dev = dev.max((ratio - 0.5).abs());
            ratios.push(format!("N={n}: {ratio:.6}"));
        }

        let mut preheat_res = 0.0f64;
        for &th in &[1.5, 2.0, 10.0, 100.0] {
            for n in [1, 2, 4, 8, 16, 32, 64] {
                let mut spec = LadderSpec::coherent(n, 0.5, 1.0)?.with_hot(fin(th), PreheatModel::Embedded);
                spec.e_ground_offset = Some(50.0 * th * (n as f64 + 1.0));
                let w_inc = incoherent_ladder(&spec)?.w_total.delta_f;
                let w_coh = coherent_ladder(&spec)?.w_total.delta_f;
                preheat_res = preheat_res.max((taint(w_inc, mutate.contains(&"ladder_embedded_preheat")) - w_coh).abs());
            }
        }

        let mut heat_res = 0.0f64;
        let spec = LadderSpec::coherent(8, 0.5, 1.0)?.with_hot(fin(10.0), PreheatModel::RealQubits);
        let inc = incoherent_ladder(&spec)?;
        let th = fin(10.0);
        let carnot = carnot_factor(spec.t_room, th);
        for i in 1..=spec.n_steps {
            let e_c = incoherent_c_gap(&spec, th, i);
            let stage = MachineSpec::two_qubit_resonant(1.0, e_c, spec.t_room, Some(th))?;
            let r_prev = inc.per_step[i - 1].r_i.r();
            let run = dense_repeated_incoherent_from(&stage, 400, r_prev)?;
            let preheat = e_c * (gibbs_ground(e_c, spec.t_room)? - gibbs_ground(e_c, th)?);
            let closed = taint(inc.per_step[i].w_i / carnot, mutate.contains(&"ladder_stage_heat"));
            heat_res = heat_res.max((run.heat - preheat - closed).abs()).max((run.r - inc.per_step[i].r_i.r()).abs());
        }

        Ok(vec![
            Check::new(
                "ladder_gap_positive",
                min_gap,
                0.0,
                min_gap > 0.0,
                "coherent ladder gap W − ΔF_target for N = 1..=256".into(),
            ),
            Check::bound("ladder_gap_rate", dev, 0.1, format!("gap(2N)/gap(N): {}", ratios.join(", "))),
            Check::bound(
                "ladder_embedded_preheat",
                preheat_res,
                1e-9,
                "|W_inc − W_coh| with the embedded ladder at E_g = 50 T_H (N + 1)".into(),
            ),
            Check::bound(
                "ladder_stage_heat",
                heat_res,
                1e-12,
                "maintenance heat and population of each stage (N = 8, T_H = 10) vs 400 dense cycles".into(),
            ),
        ])
    };
    run().unwrap_or_else(|e| {
        ["ladder_gap_positive", "ladder_gap_rate", "ladder_embedded_preheat", "ladder_stage_heat"]
            .iter()
            .map(|n| Check::failed(n, &e))
            .collect()
    })
}

/// Builds a gap triple `(E, E_B, E_C)` from two generic energies.
pub type GapBuilder = fn(f64, f64) -> [f64; 3];

/// Gap triples realizing each degeneracy type, built from two generic
/// energies `x` and `y = u x` with `u ∈ [1.2, 1.8]`.
pub fn degeneracy_types() -> Vec<(&'static str, GapBuilder)> {
    vec![
        ("E = E_B", |x, y| [x, x, y]),
        ("E = E_C", |x, y| [x, y, x]),
        ("E_B = E_C", |x, y| [y, x, x]),
        ("E = 0", |x, y| [0.0, x, y]),
        ("E_B = 0", |x, y| [x, 0.0, y]),
        ("E_C = 0", |x, y| [x, y, 0.0]),
        ("E = E_B + E_C", |x, y| [x + y, x, y]),
        ("E_B = E + E_C", |x, y| [x, x + y, y]),
        ("E_C = E + E_B", |x, y| [x, y, x + y]),
        ("E = E_B = 0", |x, _| [0.0, 0.0, x]),
        ("E = E_C = 0", |x, _| [0.0, x, 0.0]),
        ("E_B = E_C = 0", |x, _| [x, 0.0, 0.0]),
        ("E = E_B, E_C = 0", |x, _| [x, x, 0.0]),
        ("E_B = E_C, E = 0", |x, _| [0.0, x, x]),
        ("E = E_C, E_B = 0", |x, _| [x, 0.0, x]),
        ("all zero", |_, _| [0.0, 0.0, 0.0]),
        ("all equal", |x, _| [x, x, x]),
        ("E = E_B, E_C = 2E", |x, _| [x, x, 2.0 * x]),
        ("E_B = E_C, E = 2E_B", |x, _| [2.0 * x, x, x]),
        ("E = E_C, E_B = 2E", |x, _| [x, 2.0 * x, x]),
    ]
}

/// Exhaustive energy-conserving sweeps on `per_type` machines of every
/// degeneracy type; cooling must appear exactly where the classifier allows it.
pub fn degeneracy_sweep(seed: u64, per_type: usize, mutate: &[&str]) -> Check {
    const NAME: &str = "degeneracy_sweep";
    let flip = mutate.contains(&NAME);
    let types = degeneracy_types();
    let jobs: Vec<(usize, usize)> = (0..types.len()).flat_map(|t| (0..per_type).map(move |k| (t, k))).collect();
    let results: Vec<Result<(bool, f64, f64, String)>> = jobs
        .par_iter()
        .map(|&(t, k)| {
            let mut rng = stream(seed, 7, (t * per_type + k) as u64);
            let x = rng.random_range(0.3..3.0);
            let y = x * rng.random_range(1.2..1.8);
            let g = (types[t].1)(x, y);
            let tr = rng.random_range(0.2..5.0);
            let th = if rng.random_bool(0.2) {
                Temperature::Infinite
            } else {
                fin(tr * rng.random_range(1.5..20.0))
            };
            let spec = MachineSpec::two_qubit(g[0], g[1], g[2], fin(tr), Some(th))?;
            let audit = audit_degeneracies(&spec, 9)?;
            let enabled = degeneracy_classifier(g[0], g[1], g[2])?.cooling_enabled ^ flip;
            let pair_gain = audit.best_pair_r - audit.initial_r;
            let block_gain = audit.block_r - audit.initial_r;
            let mut ok = block_gain >= pair_gain - 1e-15;
            let mut disabled_gain = 0.0;
            let mut match_res = 0.0;
            if enabled {
                ok &= pair_gain > 1e-12;
                if g[0] > 0.0 {
                    let closed = two_qubit_incoherent_single(&spec)?.r_final.r();
                    let swept = audit
                        .pairs
                        .iter()
                        .find(|p| p.subspace == (2, 5))
                        .map_or(f64::NAN, |p| p.best_r);
                    match_res = (closed - swept).abs();
                    ok &= match_res <= 1e-12;
                }
            } else {
                disabled_gain = pair_gain.max(block_gain);
                ok &= disabled_gain <= 1e-13;
            }
            Ok((ok, disabled_gain, match_res, types[t].0.to_string()))
        })
        .collect();
    let mut worst_disabled = 0.0f64;
    let mut worst_match = 0.0f64;
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok((ok, dg, mr, name)) => {
                worst_disabled = worst_disabled.max(dg);
                worst_match = worst_match.max(mr);
                if !ok && !failures.contains(&name) {
                    failures.push(name);
                }
            }
            Err(e) => return Check::failed(NAME, &e),
        }
    }
    let detail = if failures.is_empty() {
        format!(
            "{} types × {per_type} machines; largest gain where disabled {worst_disabled:e}, resonant swap vs closed form {worst_match:e}",
            types.len()
        )
    } else {
        format!("failing types: {}", failures.join("; "))
    };
    Check::new(NAME, worst_disabled, 1e-13, failures.is_empty(), detail)
}

/// Iterated virtual-qubit swaps against the closed `n`-step formula.
pub fn contraction(seed: u64, mutate: &[&str]) -> Check {
    const NAME: &str = "contraction";
    let on = mutate.contains(&NAME);
    let run = || -> Result<(f64, f64)> {
        let (mut formula_res, mut ratio_res) = (0.0f64, 0.0f64);
        for i in 0..200u64 {
            let mut rng = stream(seed, 11, i);
            let w: Vec<f64> = (0..4).map(|_| rng.random_range(0.01..1.0)).collect();
            let total: f64 = w.iter().sum();
            let p: Vec<f64> = w.iter().map(|x| x / total).collect();
            let vq = extract_virtual_qubit(&p, 0, 1 + (i as usize % 3), rng.random_range(0.1..3.0))?;
            let r0 = Population::new(rng.random_range(0.05..0.95))?;
            let rv = vq.r_v.r();
            let mut r = r0;
            for n in 1..=50u64 {
                let next = swap_update(r, &vq);
                let closed = n_swap_population(r0, &vq, Repetitions::Finite(n)).r();
                formula_res = formula_res.max((taint(closed, on) - next.r()).abs());
                let shrink = (rv - next.r()) - (1.0 - vq.norm) * (rv - r.r());
                ratio_res = ratio_res.max(shrink.abs());
                r = next;
            }
        }
        Ok((formula_res, ratio_res))
    };
    match run() {
        Ok((f, q)) => Check::new(
            NAME,
            f,
            1e-13,
            f <= 1e-13 && q <= EXACT_REL,
            format!("200 virtual qubits, n ≤ 50; per-step shrink residual {q:e} (tolerance {EXACT_REL:e})"),
        ),
        Err(e) => Check::failed(NAME, &e),
    }
}

/// Finite-difference slopes of the resonant swap gain in `T_B` and `T_C`.
pub fn thermalization_gradient(mutate: &[&str]) -> Check {
    const NAME: &str = "thermalization_gradient";
    let on = mutate.contains(&NAME);
    let run = || -> Result<(f64, bool, f64)> {
        let mut rel = 0.0f64;
        let mut signs = true;
        for &e_c in &[0.1, 0.4, 1.0, 3.0] {
            for &tr in &[0.5, 1.0, 2.0] {
                let th = 4.0 * tr;
                let spec = MachineSpec::two_qubit_resonant(1.0, e_c, fin(tr), Some(fin(th)))?;
                for &(tb, tc) in &[(tr, tr), (tr, th), (0.5 * (tr + th), tr), (th, th)] {
                    let (db, dc) = thermalization_gradient_check(&spec, fin(tb), fin(tc))?;
                    let (ab, ac) = analytic_gradient(&spec, fin(tb), fin(tc))?;
                    signs &= db < 0.0 && dc > 0.0;
                    rel = rel.max(((db - taint(ab, on)) / ab).abs()).max(((dc - ac) / ac).abs());
                }
            }
        }
        let t = fin(1.0);
        let tiny = MachineSpec::two_qubit_resonant(1.0, 1e-6, t, Some(fin(4.0)))?;
        let normal = MachineSpec::two_qubit_resonant(1.0, 0.4, t, Some(fin(4.0)))?;
        let decoupling = thermalization_gradient_check(&tiny, t, t)?.1 / thermalization_gradient_check(&normal, t, t)?.1;
        Ok((rel, signs, decoupling))
    };
    match run() {
        Ok((rel, signs, dec)) => Check::new(
            NAME,
            rel,
            1e-6,
            rel <= 1e-6 && signs && dec.abs() < 1e-3,
            format!("48 points; signs {}; slope ratio at E_C = 1e−6 vs 0.4: {dec:e}", if signs { "ok" } else { "wrong" }),
        ),
        Err(e) => Check::failed(NAME, &e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub dominance: Option<DominanceReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Haar samples; zero skips the Pareto sweep.
    pub samples: usize,
    pub mutate: Option<String>,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn stamp(mut checks: Vec<Check>, secs: f64) -> Vec<Check> {
    for c in &mut checks {
        c.seconds = secs;
    }
    checks
}

/// Run every check. Unknown mutation names are a configuration error.
pub fn run_suite(opts: &VerifyOptions) -> Result<VerifyReport> {
    let mutate: Vec<&str> = match &opts.mutate {
        Some(name) if !CHECK_NAMES.contains(&name.as_str()) => {
            return Err(FridgeError::Configuration(format!(
                "unknown check '{name}'; expected one of {}",
                CHECK_NAMES.join(", ")
            )))
        }
        Some(name) => vec![name.as_str()],
        None => Vec::new(),
    };
    let m = &mutate[..];
    let seed = opts.seed;
    let mut checks = Vec::new();
    let (c, s) = timed(|| formula_equivalence(seed, 500, m));
    checks.extend(stamp(c, s));
    let ((pareto, dominance), s) = timed(|| pareto_dominance(seed, opts.samples, m));
    checks.extend(stamp(vec![pareto], s));
    let (c, s) = timed(|| vertex_oracle(seed, 200, m));
    checks.extend(stamp(vec![c], s));
    let (c, s) = timed(|| crossing_geometry(m));
    checks.extend(stamp(c, s));
    let (c, s) = timed(|| asymptotic_identities(m));
    checks.extend(stamp(c, s));
    let (c, s) = timed(|| ladder_saturation(m));
    checks.extend(stamp(c, s));
    let (c, s) = timed(|| degeneracy_sweep(seed, 50, m));
    checks.extend(stamp(vec![c], s));
    let (c, s) = timed(|| contraction(seed, m));
    checks.extend(stamp(vec![c], s));
    let (c, s) = timed(|| thermalization_gradient(m));
    checks.extend(stamp(vec![c], s));
    Ok(VerifyReport {
        seed,
        samples: opts.samples,
        passed: checks.iter().all(|c| c.passed),
        checks,
        dominance,
    })
}
