//! Virtual qubits: two machine levels treated as a qubit of their own.
//!
//! Swapping the target with a virtual qubit of norm `N_V` and normalized
//! ground population `r_V` moves the target population a fraction `N_V` of
//! the way to `r_V`, so repeated swaps against a refreshed machine converge
//! geometrically.

use serde::{Deserialize, Serialize};

use crate::error::{domain, FridgeError, Result};
use crate::protocols::Repetitions;
use crate::thermal::{Population, Temperature, WorkCost};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirtualQubit {
    pub p_g: f64,
    pub p_e: f64,
    pub norm: f64,
    pub r_v: Population,
    pub gap: f64,
    pub t_v: Temperature,
}

impl VirtualQubit {
    /// Normalized bias `(p_g − p_e) / N_V`.
    pub fn bias(&self) -> f64 {
        (self.p_g - self.p_e) / self.norm
    }
}

/// Build the virtual qubit on levels `level_g`, `level_e` of a diagonal machine state.
pub fn extract_virtual_qubit(
    machine_state: &[f64],
    level_g: usize,
    level_e: usize,
    gap: f64,
) -> Result<VirtualQubit> {
    let n = machine_state.len();
    if level_g >= n || level_e >= n || level_g == level_e {
        return Err(domain(format!("invalid virtual qubit levels ({level_g}, {level_e}) for dimension {n}")));
    }
    if !(gap.is_finite() && gap >= 0.0) {
        return Err(domain(format!("virtual gap must be non-negative, got {gap}")));
    }
    let (p_g, p_e) = (machine_state[level_g], machine_state[level_e]);
    let norm = p_g + p_e;
    if norm <= 0.0 {
        return Err(FridgeError::EmptyVirtualQubit);
    }
    // ln(p_g/p_e) directly, so the Gibbs ratio is exact in log space.
    let log_ratio = p_g.ln() - p_e.ln();
    let r_v = Population::from_log_odds(log_ratio);
    let t_v = if p_e == 0.0 {
        Temperature::Zero
    } else if log_ratio == 0.0 {
        Temperature::Infinite
    } else if gap == 0.0 {
        return Err(domain("a zero-gap virtual qubit with unequal populations has no temperature"));
    } else {
        let t = gap / log_ratio;
        if t > 0.0 {
            Temperature::Finite(t)
        } else {
            Temperature::Negative(t)
        }
    };
    Ok(VirtualQubit {
        p_g,
        p_e,
        norm,
        r_v,
        gap,
        t_v,
    })
}

/// Virtual qubit from the log Gibbs ratio and norm, for thermal machines
/// where both are known in closed form.
pub(crate) fn thermal_virtual_qubit(log_ratio: f64, norm: f64, gap: f64) -> VirtualQubit {
    let r_v = Population::from_log_odds(log_ratio);
    let t_v = if log_ratio == f64::INFINITY {
        Temperature::Zero
    } else {
        Temperature::from_beta(log_ratio / gap)
    };
    VirtualQubit {
        p_g: norm * r_v.r(),
        p_e: norm * r_v.complement(),
        norm,
        r_v,
        gap,
        t_v,
    }
}

/// `r' = N_V r_V + (1 − N_V) r`.
pub fn swap_update(r: Population, vq: &VirtualQubit) -> Population {
    let rv = vq.r_v.r();
    let updated = vq.norm * rv + (1.0 - vq.norm) * r.r();
    Population::new(updated.clamp(0.0, 1.0)).expect("clamped")
}

/// `r^(n) = r_V − (r_V − r_0)(1 − N_V)^n`.
pub fn n_swap_population(r0: Population, vq: &VirtualQubit, n: Repetitions) -> Population {
    match n {
        Repetitions::Infinite => vq.r_v,
        Repetitions::Finite(0) => r0,
        Repetitions::Finite(k) => {
            let rv = vq.r_v.r();
            let decay = (1.0 - vq.norm).powi(k.min(i32::MAX as u64) as i32);
            let r = rv - (rv - r0.r()) * decay;
            Population::new(r.clamp(0.0, 1.0)).expect("clamped")
        }
    }
}

/// `(r_after − r_before)(E_V − E)`.
pub fn swap_work_cost(r_before: Population, r_after: Population, target_gap: f64, vq_gap: f64) -> WorkCost {
    WorkCost::new((r_after.r() - r_before.r()) * (vq_gap - target_gap))
}

/// `T_V · E / E_V`: the target temperature reached after infinitely many swaps.
pub fn asymptotic_temperature(vq: &VirtualQubit, target_gap: f64) -> Temperature {
    if vq.gap == 0.0 || target_gap == 0.0 {
        return vq.t_v;
    }
    vq.t_v.scaled(target_gap / vq.gap)
}
