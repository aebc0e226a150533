//! Where the single-cycle incoherent and coherent curves cross.
//!
//! Both curves are inverted to `r(ΔF)` on the common range `[0, ΔF*_coh]`.
//! Close to `ΔF = 0` the incoherent population rises like `√ΔF` and wins;
//! at the coherent endpoint the coherent curve wins, so they cross at
//! least once.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::protocols::TwoQubit;
use crate::thermal::{temperature_from_population, MachineSpec, Population, Temperature};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub delta_f_crit: f64,
    pub t_crit: Temperature,
    pub delta_f_crit_prime: f64,
    /// Sign changes of `T_inc − T_coh`, counting the common origin.
    pub sign_changes: usize,
    /// Every interior crossing found, in increasing `ΔF`.
    pub crossings: Vec<f64>,
}

/// Coherent single-cycle population bought with work `df ∈ [0, ΔF*_coh]`.
pub fn coherent_population_at_cost(p: &TwoQubit, df: f64) -> f64 {
    let (r, r_b, r_c) = (p.r.r(), p.r_b.r(), p.r_c.r());
    let df = df.max(0.0);
    let value = if p.e_c <= p.e {
        r + df / p.e_c
    } else {
        let first = (p.e_c - p.e) * (r_c - r);
        if df <= first {
            r + df / (p.e_c - p.e)
        } else {
            r_c + (df - first) / p.e_c
        }
    };
    value.min(r_b)
}

/// Incoherent cost and population at hot inverse temperature `β_H`.
fn incoherent_at_beta(p: &TwoQubit, beta_h: f64) -> (f64, f64) {
    let s = Population::from_log_odds(p.e_c * beta_h);
    let br = p.t_room.beta();
    let heat = p.e_c * (s.complement() - p.r_c.complement());
    let df = heat * (1.0 - beta_h / br);
    let (r, r_b) = (p.r.r(), p.r_b.r());
    let r_inc = r * r_b + ((1.0 - r) * r_b + r * p.r_b.complement()) * s.complement();
    (df, r_inc)
}

/// Incoherent single-cycle population bought with work `df`, found by
/// bisection on `β_H ∈ [0, β_R]`; saturates at the `T_H = ∞` endpoint.
pub fn incoherent_population_at_cost(p: &TwoQubit, df: f64) -> f64 {
    let br = p.t_room.beta();
    let (df_max, r_max) = incoherent_at_beta(p, 0.0);
    if df >= df_max {
        return r_max;
    }
    if df <= 0.0 {
        return p.r.r();
    }
    // Cost decreases with β_H.
    let (mut lo, mut hi) = (0.0, br);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if incoherent_at_beta(p, mid).0 > df {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    incoherent_at_beta(p, 0.5 * (lo + hi)).1
}

/// `r_inc(ΔF) − r_coh(ΔF)`; positive where the incoherent curve is colder.
pub fn population_difference(p: &TwoQubit, df: f64) -> f64 {
    incoherent_population_at_cost(p, df) - coherent_population_at_cost(p, df)
}

fn probe_grid(df_max: f64) -> Vec<f64> {
    let mut g: Vec<f64> = (0..200).map(|i| df_max * 10f64.powf(-10.0 + 8.0 * i as f64 / 200.0)).collect();
    g.extend((1..=2000).map(|i| df_max * (0.01 + 0.99 * i as f64 / 2000.0)));
    g
}

pub fn find_crossing(spec: &MachineSpec, tolerance: f64) -> Result<CrossingReport> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let p = TwoQubit::from_spec(spec)?;
    if !matches!(p.t_room, Temperature::Finite(_)) {
        return Err(domain("crossing analysis needs a finite room temperature"));
    }
    let df_max = p.coherent_endpoint_cost();
    let grid = probe_grid(df_max);
    let mut crossings = Vec::new();
    let mut prev = (grid[0], population_difference(&p, grid[0]));
    for &x in &grid[1..] {
        let d = population_difference(&p, x);
        if d == 0.0 || (d > 0.0) != (prev.1 > 0.0) {
            let (mut a, mut b) = (prev.0, x);
            let sa = prev.1 > 0.0;
            while b - a > tolerance {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if (population_difference(&p, m) > 0.0) == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            crossings.push(0.5 * (a + b));
        }
        prev = (x, d);
    }
    let (first, last) = match (crossings.first(), crossings.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => {
            return Ok(CrossingReport {
                delta_f_crit: 0.0,
                t_crit: p.t_room,
                delta_f_crit_prime: 0.0,
                sign_changes: 0,
                crossings,
            })
        }
    };
    let r_crit = Population::new(coherent_population_at_cost(&p, first))?;
    Ok(CrossingReport {
        delta_f_crit: first,
        t_crit: temperature_from_population(p.e, r_crit)?,
        delta_f_crit_prime: last,
        sign_changes: 1 + crossings.len(),
        crossings,
    })
}

/// Temperature reached under `df` of work by either scenario.
pub fn temperature_at_cost(p: &TwoQubit, df: f64, incoherent: bool) -> Result<Temperature> {
    let r = if incoherent {
        incoherent_population_at_cost(p, df)
    } else {
        coherent_population_at_cost(p, df)
    };
    temperature_from_population(p.e, Population::new(r)?)
}
