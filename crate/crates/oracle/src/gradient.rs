//! Finite-difference check of which machine qubit should be heated.
//!
//! The gain of the resonant swap is `p_101 − p_010`. Its slope in `T_B` is
//! negative and its slope in `T_C` positive, so `B` belongs at the room and
//! `C` at the hot bath.

use fridge_core::{FridgeError, MachineSpec, Result, Temperature};

use crate::dense::build_thermal_state;

/// Relative finite-difference step.
pub const FD_STEP: f64 = 1e-5;

fn finite(t: Temperature, what: &str) -> Result<f64> {
    match t {
        Temperature::Finite(x) => Ok(x),
        _ => Err(FridgeError::Domain(format!("{what} must be finite for a finite-difference check, got {t}"))),
    }
}

fn swap_gain(spec: &MachineSpec, t_b: f64, t_c: f64) -> Result<f64> {
    let gaps = [spec.e(), spec.machine[0].gap, spec.machine[1].gap];
    let s = build_thermal_state(&gaps, &[spec.t_room, Temperature::Finite(t_b), Temperature::Finite(t_c)])?;
    let d = s.diagonal();
    Ok(d[5] - d[2])
}

fn check_range(spec: &MachineSpec, t: f64, what: &str) -> Result<()> {
    let lo = spec.t_room.value();
    let hi = spec.t_hot.map_or(f64::INFINITY, |th| th.value());
    if t < lo || t > hi {
        return Err(FridgeError::Domain(format!("{what} = {t} lies outside [T_R, T_H]")));
    }
    Ok(())
}

/// `(∂/∂T_B, ∂/∂T_C)` of `p_101 − p_010` by central differences with step `1e−5·T`.
pub fn thermalization_gradient_check(spec: &MachineSpec, t_b: Temperature, t_c: Temperature) -> Result<(f64, f64)> {
    spec.require_machine_size(2)?;
    spec.require_resonance()?;
    let (tb, tc) = (finite(t_b, "T_B")?, finite(t_c, "T_C")?);
    check_range(spec, tb, "T_B")?;
    check_range(spec, tc, "T_C")?;
    let (hb, hc) = (FD_STEP * tb, FD_STEP * tc);
    let db = (swap_gain(spec, tb + hb, tc)? - swap_gain(spec, tb - hb, tc)?) / (2.0 * hb);
    let dc = (swap_gain(spec, tb, tc + hc)? - swap_gain(spec, tb, tc - hc)?) / (2.0 * hc);
    Ok((db, dc))
}

/// Closed-form slopes of `p_101 − p_010`, with
/// `p_101 = (1 − r) r_B (1 − r_C)` and `p_010 = r (1 − r_B) r_C`.
pub fn analytic_gradient(spec: &MachineSpec, t_b: Temperature, t_c: Temperature) -> Result<(f64, f64)> {
    let (tb, tc) = (finite(t_b, "T_B")?, finite(t_c, "T_C")?);
    let (e, e_b, e_c) = (spec.e(), spec.machine[0].gap, spec.machine[1].gap);
    let tr = finite(spec.t_room, "T_R")?;
    let ground = |g: f64, t: f64| 1.0 / (1.0 + (-g / t).exp());
    let (r, r_b, r_c) = (ground(e, tr), ground(e_b, tb), ground(e_c, tc));
    // d r(g, T)/dT = −(g/T²) r (1 − r)
    let dr_b = -(e_b / (tb * tb)) * r_b * (1.0 - r_b);
    let dr_c = -(e_c / (tc * tc)) * r_c * (1.0 - r_c);
    let slope_b = ((1.0 - r) * (1.0 - r_c) + r * r_c) * dr_b;
    let slope_c = -((1.0 - r) * r_b + r * (1.0 - r_b)) * dr_c;
    Ok((slope_b, slope_c))
}
