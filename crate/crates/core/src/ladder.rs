//! Ladder machines that approach the second-law bound as the number of
//! stages grows.
//!
//! The coherent ladder swaps the target with `N` qubits of linearly
//! increasing gap. The incoherent ladder replaces each with a resonant pair
//! `(B_i, C_i)` whose `{01,10}` virtual qubit has the same temperature as the
//! corresponding coherent stage.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::thermal::{binary_entropy, boltzmann_population, resource_free_energy, Population, Temperature, WorkCost};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PreheatModel {
    /// `N` physical `C` qubits heated from `T_R` to `T_H`.
    RealQubits,
    /// One embedded ladder of `N + 1` levels plus a ground level at `−E_g`.
    Embedded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderSpec {
    pub n_steps: usize,
    pub target_gap: f64,
    pub t_cold: Temperature,
    pub t_room: Temperature,
    pub t_hot: Option<Temperature>,
    pub e_ground_offset: Option<f64>,
    pub preheat: PreheatModel,
}

impl LadderSpec {
    pub fn coherent(n_steps: usize, t_cold: f64, t_room: f64) -> Result<Self> {
        let spec = LadderSpec {
            n_steps,
            target_gap: 1.0,
            t_cold: Temperature::finite(t_cold)?,
            t_room: Temperature::finite(t_room)?,
            t_hot: None,
            e_ground_offset: None,
            preheat: PreheatModel::RealQubits,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_hot(mut self, t_hot: Temperature, preheat: PreheatModel) -> Self {
        self.t_hot = Some(t_hot);
        self.preheat = preheat;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(domain("a ladder needs at least one stage"));
        }
        if !(self.target_gap.is_finite() && self.target_gap > 0.0) {
            return Err(domain("target gap must be positive"));
        }
        if !matches!(self.t_room, Temperature::Finite(_)) || !matches!(self.t_cold, Temperature::Finite(_)) {
            return Err(domain("ladder temperatures must be finite and positive"));
        }
        if self.t_cold.value() > self.t_room.value() {
            return Err(domain(format!(
                "cold temperature {} exceeds room temperature {}",
                self.t_cold, self.t_room
            )));
        }
        Ok(())
    }

    /// Gap of coherent stage `i`: `E (1 + (i/N)(T_R/T_C − 1))`.
    pub fn coherent_gap(&self, i: usize) -> f64 {
        let frac = i as f64 / self.n_steps as f64;
        self.target_gap * (1.0 + frac * (self.t_room.value() / self.t_cold.value() - 1.0))
    }

    /// `E_inc,max = E (1/T_C − 1/T_H) / (1/T_R − 1/T_H)`.
    pub fn incoherent_max_gap(&self, t_hot: Temperature) -> f64 {
        let bh = t_hot.beta();
        self.target_gap * (self.t_cold.beta() - bh) / (self.t_room.beta() - bh)
    }

    /// Stage temperature `1/T_i = 1/T_R + (i/N)(1/T_C − 1/T_R)`.
    pub fn stage_temperature(&self, i: usize) -> Temperature {
        let frac = i as f64 / self.n_steps as f64;
        let (br, bc) = (self.t_room.beta(), self.t_cold.beta());
        Temperature::from_beta(br + frac * (bc - br))
    }

    /// Default `E_g = 50 · max(T_H, T_R) · (N + 1)`; with an infinite hot
    /// bath the room temperature sets the scale.
    pub fn ground_offset(&self) -> f64 {
        self.e_ground_offset.unwrap_or_else(|| {
            let scale = match self.t_hot {
                Some(Temperature::Finite(th)) => th.max(self.t_room.value()),
                _ => self.t_room.value(),
            };
            50.0 * scale * (self.n_steps as f64 + 1.0)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderStep {
    pub i: usize,
    pub t_i: Temperature,
    pub r_i: Population,
    pub w_i: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderOutcome {
    pub w_total: WorkCost,
    pub df_target: f64,
    pub gap: f64,
    pub q_init: Option<f64>,
    pub per_step: Vec<LadderStep>,
}

/// Free-energy increase of the target between `r_0` and `r_N` at `T_R`:
/// `T_R (S(r_0) − S(r_N)) − E (r_N − r_0)`.
fn target_free_energy(spec: &LadderSpec, r0: Population, rn: Population) -> f64 {
    spec.t_room.value() * (binary_entropy(r0) - binary_entropy(rn)) - spec.target_gap * (rn.r() - r0.r())
}

fn stage_populations(spec: &LadderSpec) -> Result<Vec<Population>> {
    (0..=spec.n_steps)
        .map(|i| boltzmann_population(spec.target_gap, spec.stage_temperature(i)))
        .collect()
}

pub fn coherent_ladder(spec: &LadderSpec) -> Result<LadderOutcome> {
    spec.validate()?;
    let pops = stage_populations(spec)?;
    let mut steps = vec![LadderStep {
        i: 0,
        t_i: spec.t_room,
        r_i: pops[0],
        w_i: 0.0,
    }];
    let mut total = 0.0;
    for i in 1..=spec.n_steps {
        let w = (pops[i].r() - pops[i - 1].r()) * (spec.coherent_gap(i) - spec.target_gap);
        total += w;
        steps.push(LadderStep {
            i,
            t_i: spec.stage_temperature(i),
            r_i: pops[i],
            w_i: w,
        });
    }
    let df = target_free_energy(spec, pops[0], pops[spec.n_steps]);
    Ok(LadderOutcome {
        w_total: WorkCost::new(total),
        df_target: df,
        gap: total - df,
        q_init: None,
        per_step: steps,
    })
}

fn require_hot(spec: &LadderSpec) -> Result<Temperature> {
    let th = spec
        .t_hot
        .ok_or_else(|| crate::FridgeError::Configuration("incoherent ladder needs T_H".into()))?;
    if !th.is_bath() || th.beta() >= spec.t_room.beta() {
        return Err(domain(format!("hot bath {th} must be strictly hotter than the room")));
    }
    Ok(th)
}

/// `C`-qubit gap of incoherent stage `i`: `(i/N)(E_inc,max − E)`.
pub fn incoherent_c_gap(spec: &LadderSpec, t_hot: Temperature, i: usize) -> f64 {
    i as f64 / spec.n_steps as f64 * (spec.incoherent_max_gap(t_hot) - spec.target_gap)
}

/// Mean-energy difference of the embedded `(N + 2)`-level system between
/// its thermal states at `T_H` and `T_R`.
pub fn embedded_ladder_preheat(spec: &LadderSpec) -> Result<f64> {
    let th = spec
        .t_hot
        .ok_or_else(|| crate::FridgeError::Configuration("embedded ladder needs T_H".into()))?;
    if th.beta() == spec.t_room.beta() {
        return Ok(0.0);
    }
    let th = require_hot(spec)?;
    let e_g = spec.ground_offset();
    if !(e_g.is_finite() && e_g >= 0.0) {
        return Err(domain("ground offset must be non-negative"));
    }
    // Shift so the offset ground level sits at zero.
    let mut levels = vec![0.0];
    levels.extend((0..=spec.n_steps).map(|i| e_g + incoherent_c_gap(spec, th, i)));
    let mean = |t: Temperature| -> f64 {
        let b = t.beta();
        let (mut z, mut ez) = (0.0, 0.0);
        for &e in &levels {
            let w = (-b * e).exp();
            z += w;
            ez += e * w;
        }
        ez / z
    };
    Ok(mean(th) - mean(spec.t_room))
}

pub fn incoherent_ladder(spec: &LadderSpec) -> Result<LadderOutcome> {
    spec.validate()?;
    let th = require_hot(spec)?;
    let pops = stage_populations(spec)?;
    let carnot = resource_free_energy(1.0, th, spec.t_room)?.delta_f;
    let q_init = match spec.preheat {
        PreheatModel::RealQubits => (1..=spec.n_steps)
            .map(|i| {
                let g = incoherent_c_gap(spec, th, i);
                let cold = boltzmann_population(g, spec.t_room)?;
                let hot = boltzmann_population(g, th)?;
                Ok(g * (hot.complement() - cold.complement()))
            })
            .sum::<Result<f64>>()?,
        PreheatModel::Embedded => embedded_ladder_preheat(spec)?,
    };
    let mut steps = vec![LadderStep {
        i: 0,
        t_i: spec.t_room,
        r_i: pops[0],
        w_i: 0.0,
    }];
    let mut maintenance = 0.0;
    for i in 1..=spec.n_steps {
        let q = (pops[i].r() - pops[i - 1].r()) * incoherent_c_gap(spec, th, i);
        maintenance += q;
        steps.push(LadderStep {
            i,
            t_i: spec.stage_temperature(i),
            r_i: pops[i],
            w_i: q * carnot,
        });
    }
    let total = (q_init + maintenance) * carnot;
    let df = target_free_energy(spec, pops[0], pops[spec.n_steps]);
    Ok(LadderOutcome {
        w_total: WorkCost::new(total),
        df_target: df,
        gap: total - df,
        q_init: Some(q_init),
        per_step: steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_stage_is_one_swap() {
        let spec = LadderSpec::coherent(1, 0.5, 1.0).unwrap();
        let out = coherent_ladder(&spec).unwrap();
        let r = 1.0 / (1.0 + (-1.0f64).exp());
        let r_max = 1.0 / (1.0 + (-2.0f64).exp());
        assert_abs_diff_eq!(out.w_total.delta_f, (r_max - r) * (2.0 - 1.0), epsilon = 1e-15);
        assert!(out.gap > 0.0);
        assert!(out.df_target > 0.0);
    }

    #[test]
    fn no_cooling_no_work() {
        let spec = LadderSpec::coherent(4, 1.0, 1.0).unwrap();
        let out = coherent_ladder(&spec).unwrap();
        assert_eq!(out.w_total.delta_f, 0.0);
        assert_abs_diff_eq!(out.gap, 0.0, epsilon = 1e-16);
        assert!(LadderSpec::coherent(4, 2.0, 1.0).is_err());
    }

    #[test]
    fn incoherent_matches_coherent_up_to_preheat() {
        let spec = LadderSpec::coherent(8, 0.5, 1.0)
            .unwrap()
            .with_hot(Temperature::Finite(10.0), PreheatModel::RealQubits);
        let coh = coherent_ladder(&spec).unwrap();
        let inc = incoherent_ladder(&spec).unwrap();
        let offset = inc.q_init.unwrap() * (1.0 - 0.1);
        assert_abs_diff_eq!(inc.w_total.delta_f - coh.w_total.delta_f, offset, epsilon = 1e-14);
        for (a, b) in inc.per_step.iter().zip(&coh.per_step) {
            assert_eq!(a.t_i, b.t_i);
        }
    }

    #[test]
    fn embedded_preheat_vanishes() {
        let mut spec = LadderSpec::coherent(3, 0.5, 1.0)
            .unwrap()
            .with_hot(Temperature::Finite(2.0), PreheatModel::Embedded);
        assert!(embedded_ladder_preheat(&spec).unwrap() < 1e-15);
        spec.t_hot = Some(Temperature::Finite(1.0));
        assert_eq!(embedded_ladder_preheat(&spec).unwrap(), 0.0);
        spec.t_hot = Some(Temperature::Finite(0.5));
        assert!(embedded_ladder_preheat(&spec).is_err());
    }
}
