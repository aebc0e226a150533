//! Cooling curves: `(ΔF, T)` pairs traced out by one control parameter.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::ladder::{coherent_ladder, incoherent_ladder, LadderSpec, PreheatModel};
use crate::protocols::{
    algorithmic_cooling, coherent_population_for_mu, internal_resource, repeated_coherent,
    repeated_incoherent, two_qubit_coherent_single, two_qubit_incoherent_single, InternalControl,
    ProtocolOutcome, Repetitions, TwoQubit,
};
use crate::thermal::{MachineSpec, Population, Temperature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlKind {
    THot,
    Mu,
    Nu,
    N,
    /// Number of ladder stages.
    Stages,
}

impl fmt::Display for ControlKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ControlKind::THot => "t_hot",
            ControlKind::Mu => "mu",
            ControlKind::Nu => "nu",
            ControlKind::N => "n",
            ControlKind::Stages => "N",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Control value; `f64::INFINITY` encodes an infinite `T_H` or `n`.
    pub control: f64,
    pub delta_f: f64,
    pub temperature: Temperature,
    pub r: Population,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolingCurve {
    pub control: ControlKind,
    pub points: Vec<CurvePoint>,
}

/// `grid − 1` hot temperatures with `(T_H − T_R)/T_R` log-spaced on
/// `[1e−3, 1e3]`, followed by `Infinite`.
pub fn hot_grid(t_room: Temperature, grid: usize) -> Result<Vec<Temperature>> {
    if grid == 0 {
        return Err(domain("grid must contain at least one point"));
    }
    let mut out = Vec::with_capacity(grid);
    if let Temperature::Finite(tr) = t_room {
        let m = grid - 1;
        for i in 0..m {
            let frac = if m == 1 { 0.0 } else { i as f64 / (m - 1) as f64 };
            let x = 10f64.powf(-3.0 + 6.0 * frac);
            out.push(Temperature::Finite(tr * (1.0 + x)));
        }
    }
    out.push(Temperature::Infinite);
    Ok(out)
}

/// `i/(grid − 1)` for `i = 0..grid`; a single point is the endpoint `1`.
pub fn unit_grid(grid: usize) -> Result<Vec<f64>> {
    match grid {
        0 => Err(domain("grid must contain at least one point")),
        1 => Ok(vec![1.0]),
        g => Ok((0..g).map(|i| i as f64 / (g - 1) as f64).collect()),
    }
}

/// `0, 1, …, grid − 2` followed by `Infinite`.
pub fn repetition_grid(grid: usize) -> Result<Vec<Repetitions>> {
    if grid == 0 {
        return Err(domain("grid must contain at least one point"));
    }
    let mut v: Vec<_> = (0..grid as u64 - 1).map(Repetitions::Finite).collect();
    v.push(Repetitions::Infinite);
    Ok(v)
}

fn rep_value(n: Repetitions) -> f64 {
    match n {
        Repetitions::Finite(k) => k as f64,
        Repetitions::Infinite => f64::INFINITY,
    }
}

fn from_outcome(control: f64, out: &ProtocolOutcome) -> CurvePoint {
    CurvePoint {
        control,
        delta_f: out.work_cost.delta_f,
        temperature: out.t_final,
        r: out.r_final,
    }
}

pub fn incoherent_single_curve(spec: &MachineSpec, grid: usize) -> Result<CoolingCurve> {
    let points = hot_grid(spec.t_room, grid)?
        .into_iter()
        .map(|th| Ok(from_outcome(th.value(), &two_qubit_incoherent_single(&spec.with_hot(th)?)?)))
        .collect::<Result<_>>()?;
    Ok(CoolingCurve { control: ControlKind::THot, points })
}

pub fn coherent_single_curve(spec: &MachineSpec, grid: usize) -> Result<CoolingCurve> {
    let points = unit_grid(grid)?
        .into_iter()
        .map(|mu| {
            let target = coherent_population_for_mu(spec, mu)?;
            Ok(from_outcome(mu, &two_qubit_coherent_single(spec, target)?))
        })
        .collect::<Result<_>>()?;
    Ok(CoolingCurve { control: ControlKind::Mu, points })
}

/// `n` repetitions at each hot temperature of [`hot_grid`].
pub fn incoherent_repeat_curve(spec: &MachineSpec, n: Repetitions, grid: usize) -> Result<CoolingCurve> {
    let points = hot_grid(spec.t_room, grid)?
        .into_iter()
        .map(|th| Ok(from_outcome(th.value(), &repeated_incoherent(&spec.with_hot(th)?, n)?)))
        .collect::<Result<_>>()?;
    Ok(CoolingCurve { control: ControlKind::THot, points })
}

pub fn coherent_repeat_curve(spec: &MachineSpec, grid: usize) -> Result<CoolingCurve> {
    let points = repetition_grid(grid)?
        .into_iter()
        .map(|n| Ok(from_outcome(rep_value(n), &repeated_coherent(spec, n)?)))
        .collect::<Result<_>>()?;
    Ok(CoolingCurve { control: ControlKind::N, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgoStart {
    /// Start from the thermal target, `r_0 = r`.
    Thermal,
    /// Start after infinitely many coherent repetitions, including their cost.
    CoherentAsymptote,
}

pub fn algorithmic_curve(spec: &MachineSpec, nu: f64, start: AlgoStart, grid: usize) -> Result<CoolingCurve> {
    let p = TwoQubit::from_spec(spec)?;
    let (r0, offset) = match start {
        AlgoStart::Thermal => (p.r, 0.0),
        AlgoStart::CoherentAsymptote => {
            let pre = repeated_coherent(spec, Repetitions::Infinite)?;
            (pre.r_final, pre.work_cost.delta_f)
        }
    };
    let points = repetition_grid(grid)?
        .into_iter()
        .map(|n| {
            let mut pt = from_outcome(rep_value(n), &algorithmic_cooling(spec, n, nu, r0)?);
            pt.delta_f += offset;
            Ok(pt)
        })
        .collect::<Result<_>>()?;
    Ok(CoolingCurve { control: ControlKind::N, points })
}

pub fn internal_incoherent_curve(spec: &MachineSpec, grid: usize) -> Result<CoolingCurve> {
    let points = hot_grid(spec.t_room, grid)?
        .into_iter()
        .map(|th| Ok(from_outcome(th.value(), &internal_resource(spec, InternalControl::HotBath(th))?.outcome)))
        .collect::<Result<_>>()?;
    Ok(CoolingCurve { control: ControlKind::THot, points })
}

pub fn internal_coherent_curve(spec: &MachineSpec, grid: usize) -> Result<CoolingCurve> {
    let points = unit_grid(grid)?
        .into_iter()
        .map(|mu| Ok(from_outcome(mu, &internal_resource(spec, InternalControl::LocalRotation(mu))?.outcome)))
        .collect::<Result<_>>()?;
    Ok(CoolingCurve { control: ControlKind::Mu, points })
}

/// Total ladder work for `N = 1..=grid` stages at fixed `T_C`.
pub fn ladder_curve(base: &LadderSpec, incoherent: bool, grid: usize) -> Result<CoolingCurve> {
    if grid == 0 {
        return Err(domain("grid must contain at least one point"));
    }
    let points = (1..=grid)
        .map(|n| {
            let spec = LadderSpec { n_steps: n, ..*base };
            let out = if incoherent {
                incoherent_ladder(&spec)?
            } else {
                coherent_ladder(&spec)?
            };
            let last = out.per_step.last().expect("ladder has stages");
            Ok(CurvePoint {
                control: n as f64,
                delta_f: out.w_total.delta_f,
                temperature: last.t_i,
                r: last.r_i,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CoolingCurve { control: ControlKind::Stages, points })
}

/// Default incoherent ladder preheat model for curves.
pub const LADDER_PREHEAT: PreheatModel = PreheatModel::Embedded;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = hot_grid(Temperature::Finite(1.0), 4).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[3], Temperature::Infinite);
        assert!((g[0].value() - 1.001).abs() < 1e-15);
        assert!((g[2].value() - 1001.0).abs() < 1e-9);
        assert_eq!(unit_grid(1).unwrap(), vec![1.0]);
        assert_eq!(repetition_grid(1).unwrap(), vec![Repetitions::Infinite]);
    }

    #[test]
    fn single_point_curves_are_endpoints() {
        let spec = MachineSpec::two_qubit_resonant(1.0, 0.4, Temperature::Finite(1.0), None).unwrap();
        let coh = coherent_single_curve(&spec, 1).unwrap();
        assert_eq!(coh.points.len(), 1);
        assert!((coh.points[0].temperature.value() - 1.0 / 1.4).abs() < 1e-15);
        let inc = incoherent_single_curve(&spec, 1).unwrap();
        assert_eq!(inc.points[0].control, f64::INFINITY);
    }

    #[test]
    fn controls_increase() {
        let spec = MachineSpec::two_qubit_resonant(1.0, 0.4, Temperature::Finite(1.0), None).unwrap();
        for curve in [
            incoherent_single_curve(&spec, 30).unwrap(),
            coherent_single_curve(&spec, 30).unwrap(),
            coherent_repeat_curve(&spec, 30).unwrap(),
        ] {
            assert!(curve.points.windows(2).all(|w| w[0].control < w[1].control));
        }
    }
}
