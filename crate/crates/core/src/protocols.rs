//! Closed-form evaluators for every cooling protocol of the one- and
//! two-qubit machines.
//!
//! In the two-qubit machine the target is `A`, the machine is `B` (gap
//! `E_B = E + E_C`) and `C`. Incoherent protocols heat `C` to `T_H` and swap
//! the degenerate pair `|010⟩ ↔ |101⟩`; coherent protocols apply arbitrary
//! unitaries whose energy change is the work cost.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, FridgeError, Result};
use crate::majorization::{solve_one_qubit, solve_two_qubit, PopVector, Regime};
use crate::thermal::{
    boltzmann_population, product_diagonal, product_energies, resource_free_energy,
    temperature_from_population, MachineSpec, Population, Temperature, WorkCost,
};
use crate::virtual_qubit::{n_swap_population, swap_work_cost, thermal_virtual_qubit, VirtualQubit};

/// Number of protocol cycles, with the asymptotic limit as its own value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Repetitions {
    Finite(u64),
    Infinite,
}

impl Repetitions {
    fn prev(self) -> Repetitions {
        match self {
            Repetitions::Finite(n) => Repetitions::Finite(n.saturating_sub(1)),
            Repetitions::Infinite => Repetitions::Infinite,
        }
    }
}

impl fmt::Display for Repetitions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Repetitions::Finite(n) => write!(f, "{n}"),
            Repetitions::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub step: Repetitions,
    pub r: f64,
    pub cumulative_work: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolOutcome {
    pub r_final: Population,
    pub t_final: Temperature,
    pub work_cost: WorkCost,
    /// Heat drawn from the hot bath; incoherent protocols only.
    pub heat_drawn: Option<f64>,
    pub trajectory: Vec<TrajectoryPoint>,
    pub cooling_possible: bool,
}

impl ProtocolOutcome {
    fn new(
        e: f64,
        r_final: Population,
        work: f64,
        heat_drawn: Option<f64>,
        trajectory: Vec<TrajectoryPoint>,
        r_initial: Population,
    ) -> Result<Self> {
        Ok(ProtocolOutcome {
            t_final: temperature_from_population(e, r_final)?,
            cooling_possible: r_final.log_odds() > r_initial.log_odds(),
            r_final,
            work_cost: WorkCost::new(work),
            heat_drawn,
            trajectory,
        })
    }
}

fn point(step: Repetitions, r: f64, w: f64) -> TrajectoryPoint {
    TrajectoryPoint {
        step,
        r,
        cumulative_work: w,
    }
}

/// Parameters of a resonant two-qubit machine with its room-temperature populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubit {
    pub e: f64,
    pub e_b: f64,
    pub e_c: f64,
    pub t_room: Temperature,
    pub t_hot: Option<Temperature>,
    pub r: Population,
    pub r_b: Population,
    pub r_c: Population,
}

impl TwoQubit {
    pub fn from_spec(spec: &MachineSpec) -> Result<Self> {
        spec.require_resonance()?;
        let (e, e_b, e_c) = (spec.e(), spec.machine[0].gap, spec.machine[1].gap);
        let tr = spec.t_room;
        Ok(TwoQubit {
            e,
            e_b,
            e_c,
            t_room: tr,
            t_hot: spec.t_hot,
            r: boltzmann_population(e, tr)?,
            r_b: boltzmann_population(e_b, tr)?,
            r_c: boltzmann_population(e_c, tr)?,
        })
    }

    pub fn regime(&self) -> Regime {
        if self.e_c <= self.e {
            Regime::EcLeE
        } else {
            Regime::EcGtE
        }
    }

    pub fn r_c_hot(&self, t_hot: Temperature) -> Result<Population> {
        boltzmann_population(self.e_c, t_hot)
    }

    fn initial_diagonal(&self) -> Result<PopVector> {
        PopVector::new(product_diagonal(&[self.r, self.r_b, self.r_c]))
    }

    fn energies(&self) -> Vec<f64> {
        product_energies(&[self.e, self.e_b, self.e_c])
    }

    /// Single-cycle coherent minimal work `ΔF*_coh`.
    pub fn coherent_endpoint_cost(&self) -> f64 {
        let (r, r_b, r_c) = (self.r.r(), self.r_b.r(), self.r_c.r());
        if self.e_c <= self.e {
            self.e_c * (r_b - r)
        } else {
            (self.e_c - self.e) * (r_c - r) + self.e_c * (r_b - r_c)
        }
    }

    /// `{00, 11}_BC` with `B` at `T_R` and `C` at population `r_c`.
    fn coherent_virtual_qubit(&self, r_c: Population) -> VirtualQubit {
        let norm = self.r_b.r() * r_c.r() + self.r_b.complement() * r_c.complement();
        thermal_virtual_qubit(self.r_b.log_odds() + r_c.log_odds(), norm, self.e_b + self.e_c)
    }

    /// `{01, 10}_BC` with `B` at `T_R` and `C` at `T_H`.
    pub fn incoherent_virtual_qubit(&self, t_hot: Temperature) -> Result<VirtualQubit> {
        let rch = self.r_c_hot(t_hot)?;
        let norm = self.r_b.r() * rch.complement() + self.r_b.complement() * rch.r();
        Ok(thermal_virtual_qubit(self.r_b.log_odds() - rch.log_odds(), norm, self.e_b - self.e_c))
    }

    /// Population after a full swap against the `{01,10}` subspace with `C` at population `s`.
    fn degenerate_swap(&self, s: Population) -> f64 {
        let (r, r_b) = (self.r.r(), self.r_b.r());
        r * r_b + ((1.0 - r) * r_b + r * self.r_b.complement()) * s.complement()
    }

    /// Asymptote of repeated coherent cycles, `1/(1 + e^{−(E_B+E_C)/T_R})`.
    pub fn coherent_asymptote(&self) -> Population {
        self.coherent_virtual_qubit(self.r_c).r_v
    }

    /// Asymptote of full algorithmic cooling, `1/(1 + e^{−2E_B/T_R})`.
    pub fn algorithmic_asymptote(&self) -> Population {
        self.coherent_virtual_qubit(self.r_b).r_v
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(domain(format!("{name} must lie in [0, 1], got {x}")))
    }
}

/// Incoherent control of a one-qubit machine never cools: the only
/// energy-conserving unitaries act on subspaces where the hot state is
/// either proportional to the identity or already colder in the target.
pub fn one_qubit_incoherent(spec: &MachineSpec) -> Result<ProtocolOutcome> {
    spec.require_machine_size(1)?;
    let r = boltzmann_population(spec.e(), spec.t_room)?;
    let traj = vec![point(Repetitions::Finite(0), r.r(), 0.0)];
    let t_final = if spec.e() > 0.0 {
        temperature_from_population(spec.e(), r)?
    } else {
        spec.t_room
    };
    Ok(ProtocolOutcome {
        r_final: r,
        t_final,
        work_cost: WorkCost::zero(),
        heat_drawn: Some(0.0),
        trajectory: traj,
        cooling_possible: false,
    })
}

/// Partial swap of `|01⟩` and `|10⟩` to reach `r_target`; needs `E < E_B`.
pub fn one_qubit_coherent(spec: &MachineSpec, r_target: Population) -> Result<ProtocolOutcome> {
    spec.require_machine_size(1)?;
    let (e, e_b) = (spec.e(), spec.machine[0].gap);
    if e >= e_b {
        return Err(FridgeError::CoolingImpossible(format!(
            "one-qubit coherent cooling needs E < E_B, got E = {e}, E_B = {e_b}"
        )));
    }
    let r = boltzmann_population(e, spec.t_room)?;
    let r_b = boltzmann_population(e_b, spec.t_room)?;
    let rho = PopVector::new(product_diagonal(&[r, r_b]))?;
    let res = solve_one_qubit(&rho, &product_energies(&[e, e_b]), r_target.r())?;
    let traj = vec![
        point(Repetitions::Finite(0), r.r(), 0.0),
        point(Repetitions::Finite(1), r_target.r(), res.energy_increase),
    ];
    ProtocolOutcome::new(e, r_target, res.energy_increase, None, traj, r)
}

/// Heat `C` to `T_H`, then swap `|010⟩ ↔ |101⟩`.
pub fn two_qubit_incoherent_single(spec: &MachineSpec) -> Result<ProtocolOutcome> {
    let p = TwoQubit::from_spec(spec)?;
    let th = spec.require_hot()?;
    let rch = p.r_c_hot(th)?;
    let r_inc = p.degenerate_swap(rch);
    let heat = p.e_c * (rch.complement() - p.r_c.complement());
    let work = resource_free_energy(heat, th, spec.t_room)?.delta_f;
    let traj = vec![
        point(Repetitions::Finite(0), p.r.r(), 0.0),
        point(Repetitions::Finite(1), r_inc, work),
    ];
    ProtocolOutcome::new(p.e, Population::new(r_inc)?, work, Some(heat), traj, p.r)
}

/// Minimal-work coherent single cycle reaching `r_target ∈ [r, r_B]`.
pub fn two_qubit_coherent_single(spec: &MachineSpec, r_target: Population) -> Result<ProtocolOutcome> {
    let p = TwoQubit::from_spec(spec)?;
    let res = solve_two_qubit(&p.initial_diagonal()?, &p.energies(), r_target.r(), p.regime())?;
    let traj = vec![
        point(Repetitions::Finite(0), p.r.r(), 0.0),
        point(Repetitions::Finite(1), r_target.r(), res.energy_increase),
    ];
    ProtocolOutcome::new(p.e, r_target, res.energy_increase, None, traj, p.r)
}

/// Target population of the coherent single cycle at unitary parameter `μ`.
///
/// For `E_C ≤ E` this is `r + μ (r_B − r)`. For `E_C > E` the first half of
/// the range swaps A with C and the second half A with B.
pub fn coherent_population_for_mu(spec: &MachineSpec, mu: f64) -> Result<Population> {
    check_unit("mu", mu)?;
    let p = TwoQubit::from_spec(spec)?;
    if mu == 1.0 {
        return Ok(p.r_b);
    }
    let (r, r_b, r_c) = (p.r.r(), p.r_b.r(), p.r_c.r());
    let value = match p.regime() {
        Regime::EcLeE => r + mu * (r_b - r),
        Regime::EcGtE if mu <= 0.5 => r + 2.0 * mu * (r_c - r),
        Regime::EcGtE => r_c + (2.0 * mu - 1.0) * (r_b - r_c),
    };
    Population::new(value)
}

/// `n` cycles of: reset B to `T_R`, heat C to `T_H`, swap `|010⟩ ↔ |101⟩`.
pub fn repeated_incoherent(spec: &MachineSpec, n: Repetitions) -> Result<ProtocolOutcome> {
    let p = TwoQubit::from_spec(spec)?;
    let th = spec.require_hot()?;
    let vq = p.incoherent_virtual_qubit(th)?;
    let preheat = p.e_c * (p.r_c_hot(th)?.complement() - p.r_c.complement());
    let carnot = resource_free_energy(1.0, th, spec.t_room)?.delta_f;
    let heat_after = |k: Repetitions| -> f64 {
        match k {
            Repetitions::Finite(0) => preheat,
            k => preheat + p.e_c * (n_swap_population(p.r, &vq, k.prev()).r() - p.r.r()),
        }
    };
    let mut traj = Vec::new();
    let steps = match n {
        Repetitions::Finite(k) => (0..=k).map(Repetitions::Finite).collect::<Vec<_>>(),
        Repetitions::Infinite => vec![Repetitions::Finite(0), Repetitions::Infinite],
    };
    for k in steps {
        let r_k = n_swap_population(p.r, &vq, k).r();
        traj.push(point(k, r_k, heat_after(k) * carnot));
    }
    let q = heat_after(n);
    ProtocolOutcome::new(p.e, n_swap_population(p.r, &vq, n), q * carnot, Some(q), traj, p.r)
}

/// Steady state of the autonomous three-qubit refrigerator.
pub fn autonomous_steady_state(spec: &MachineSpec) -> Result<ProtocolOutcome> {
    let p = TwoQubit::from_spec(spec)?;
    let th = spec.require_hot()?;
    let beta_v = (p.e_b * spec.t_room.beta() - p.e_c * th.beta()) / p.e;
    let t_auto = Temperature::from_beta(beta_v);
    let r_auto = boltzmann_population(p.e, t_auto)?;
    let rch = p.r_c_hot(th)?;
    let q = p.e_c * (rch.complement() - p.r_c.complement() + r_auto.r() - p.r.r());
    let work = resource_free_energy(q, th, spec.t_room)?.delta_f;
    let traj = vec![
        point(Repetitions::Finite(0), p.r.r(), 0.0),
        point(Repetitions::Infinite, r_auto.r(), work),
    ];
    ProtocolOutcome::new(p.e, r_auto, work, Some(q), traj, p.r)
}

/// Optimal single cycle to `r_B`, then `n − 1` swaps `|100⟩ ↔ |011⟩`
/// against a machine rethermalized to `T_R`.
pub fn repeated_coherent(spec: &MachineSpec, n: Repetitions) -> Result<ProtocolOutcome> {
    let p = TwoQubit::from_spec(spec)?;
    let vq = p.coherent_virtual_qubit(p.r_c);
    let first = p.coherent_endpoint_cost();
    let at = |k: Repetitions| -> (Population, f64) {
        match k {
            Repetitions::Finite(0) => (p.r, 0.0),
            k => {
                let rk = n_swap_population(p.r_b, &vq, k.prev());
                (rk, first + swap_work_cost(p.r_b, rk, p.e, vq.gap).delta_f)
            }
        }
    };
    let steps = match n {
        Repetitions::Finite(k) => (0..=k).map(Repetitions::Finite).collect::<Vec<_>>(),
        Repetitions::Infinite => vec![Repetitions::Finite(0), Repetitions::Finite(1), Repetitions::Infinite],
    };
    let traj = steps
        .into_iter()
        .map(|k| {
            let (rk, w) = at(k);
            point(k, rk.r(), w)
        })
        .collect();
    let (r_n, w_n) = at(n);
    ProtocolOutcome::new(p.e, r_n, w_n, None, traj, p.r)
}

/// `n` algorithmic-cooling cycles: reset B, precool C by a `ν`-partial swap
/// with B, reset B, swap `|100⟩ ↔ |011⟩`. The target starts at `r0`.
pub fn algorithmic_cooling(
    spec: &MachineSpec,
    n: Repetitions,
    nu: f64,
    r0: Population,
) -> Result<ProtocolOutcome> {
    check_unit("nu", nu)?;
    let p = TwoQubit::from_spec(spec)?;
    if r0.r() < p.r.r() - 1e-12 {
        return Err(domain(format!("initial population {} is below the thermal value {}", r0.r(), p.r.r())));
    }
    let gain = nu * (p.r_b.r() - p.r_c.r());
    let r_c_nu = if nu == 1.0 {
        p.r_b
    } else {
        Population::new(p.r_c.r() + gain)?
    };
    let vq = p.coherent_virtual_qubit(r_c_nu);
    if r0.r() > vq.r_v.r() + 1e-12 {
        return Err(FridgeError::Infeasible(format!(
            "initial population {} already exceeds the asymptote {}",
            r0.r(),
            vq.r_v.r()
        )));
    }
    let work_at = |k: Repetitions| -> f64 {
        match k {
            Repetitions::Finite(0) => 0.0,
            k => {
                let rk = n_swap_population(r0, &vq, k).r();
                let rprev = n_swap_population(r0, &vq, k.prev()).r();
                p.e * gain + 2.0 * p.e_c * (rk - r0.r()) + p.e * (rprev - r0.r())
            }
        }
    };
    let steps = match n {
        Repetitions::Finite(k) => (0..=k).map(Repetitions::Finite).collect::<Vec<_>>(),
        Repetitions::Infinite => vec![Repetitions::Finite(0), Repetitions::Infinite],
    };
    let traj = steps
        .into_iter()
        .map(|k| point(k, n_swap_population(r0, &vq, k).r(), work_at(k)))
        .collect();
    ProtocolOutcome::new(p.e, n_swap_population(r0, &vq, n), work_at(n), None, traj, r0)
}

/// Precooling parameter `ν` whose algorithmic asymptote is `r_target`.
pub fn optimal_precool_nu(spec: &MachineSpec, r_target: Population) -> Result<f64> {
    let p = TwoQubit::from_spec(spec)?;
    let lo = p.coherent_asymptote().log_odds();
    let hi = p.algorithmic_asymptote().log_odds();
    let lam = r_target.log_odds();
    let slack = 1e-12 * hi.abs().max(1.0);
    if lam < lo - slack || lam > hi + slack {
        return Err(FridgeError::Infeasible(format!(
            "population {} is outside the precooling range [{}, {}]",
            r_target.r(),
            p.coherent_asymptote().r(),
            p.algorithmic_asymptote().r()
        )));
    }
    // Gibbs ratio of {00,11}: λ_target = λ_B + λ_C(ν).
    let x = Population::from_log_odds(lam - p.r_b.log_odds()).r();
    let span = p.r_b.r() - p.r_c.r();
    Ok(if span == 0.0 { 0.0 } else { ((x - p.r_c.r()) / span).clamp(0.0, 1.0) })
}

/// Cheapest coherent schedule reaching `t_target`: A↔C (when `E_C > E`),
/// A↔B, repeated coherent swaps, then `ν`-tuned algorithmic cooling.
pub fn optimal_sequence(spec: &MachineSpec, t_target: Temperature) -> Result<ProtocolOutcome> {
    let p = TwoQubit::from_spec(spec)?;
    if t_target.beta() <= spec.t_room.beta() {
        return Ok(ProtocolOutcome {
            r_final: p.r,
            t_final: spec.t_room,
            work_cost: WorkCost::zero(),
            heat_drawn: None,
            trajectory: Vec::new(),
            cooling_possible: false,
        });
    }
    if t_target == Temperature::Zero {
        return Err(FridgeError::Infeasible("zero temperature is unreachable".into()));
    }
    let target = boltzmann_population(p.e, t_target)?;
    let r_coh_inf = p.coherent_asymptote();
    let r_algo = p.algorithmic_asymptote();
    let slack = 1e-12 * r_algo.log_odds().abs().max(1.0);
    if target.log_odds() > r_algo.log_odds() + slack {
        return Err(FridgeError::Infeasible(format!(
            "temperature {t_target} is below the algorithmic limit {}",
            spec.t_room.scaled(p.e / (2.0 * p.e_b))
        )));
    }

    let mut phases = Vec::new();
    if p.e_c > p.e {
        phases.push((p.r_c, p.e_c - p.e));
    }
    phases.push((p.r_b, p.e_b - p.e));
    phases.push((r_coh_inf, 2.0 * p.e_c));

    let rt = target.r();
    let mut cur = p.r.r();
    let mut work = 0.0;
    let mut traj = vec![point(Repetitions::Finite(0), cur, 0.0)];
    for (k, (milestone, grad)) in phases.iter().enumerate() {
        let step = Repetitions::Finite(k as u64 + 1);
        if target.log_odds() <= milestone.log_odds() {
            work += grad * (rt - cur);
            traj.push(point(step, rt, work));
            return ProtocolOutcome::new(p.e, target, work, None, traj, p.r);
        }
        work += grad * (milestone.r() - cur);
        cur = milestone.r();
        traj.push(point(step, cur, work));
    }
    let nu = optimal_precool_nu(spec, target)?;
    work += p.e * nu * (p.r_b.r() - p.r_c.r()) + (p.e + 2.0 * p.e_c) * (rt - r_coh_inf.r());
    traj.push(point(Repetitions::Finite(phases.len() as u64 + 1), rt, work));
    ProtocolOutcome::new(p.e, target, work, None, traj, p.r)
}

/// Control of the internal-resource variants, where qubit `C` itself is the resource.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InternalControl {
    /// Incoherent: `C` is thermalized at `T_H` and its free energy is the cost.
    HotBath(Temperature),
    /// Coherent: a local rotation of `C` with population mixing `μ`.
    LocalRotation(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InternalOutcome {
    pub outcome: ProtocolOutcome,
    /// Whether the incoherent variant is strictly cheaper at the same final
    /// temperature; `None` when the two cannot be matched or nothing is done.
    pub incoherent_dominates: Option<bool>,
}

/// Free energy of `C` at population `s` relative to its room-temperature state.
fn internal_incoherent_cost(p: &TwoQubit, s: Population) -> f64 {
    let br = p.t_room.beta();
    if br == 0.0 || p.e_c == 0.0 {
        return 0.0;
    }
    let carnot = 1.0 - s.log_odds() / p.r_c.log_odds();
    p.e_c * carnot * s.complement() + (s.ln_r() - p.r_c.ln_r()) / br
}

pub fn internal_resource(spec: &MachineSpec, control: InternalControl) -> Result<InternalOutcome> {
    let p = TwoQubit::from_spec(spec)?;
    let (r, r_c) = (p.r.r(), p.r_c.r());
    match control {
        InternalControl::HotBath(th) => {
            spec.with_hot(th)?;
            let s = boltzmann_population(p.e_c, th)?;
            let r_fin = p.degenerate_swap(s);
            let cost = internal_incoherent_cost(&p, s);
            let coh_cost = p.e_c * (r_c - s.r());
            let dominates = if coh_cost <= 0.0 {
                None
            } else {
                Some(cost < coh_cost)
            };
            let traj = vec![point(Repetitions::Finite(0), r, 0.0), point(Repetitions::Finite(1), r_fin, cost)];
            Ok(InternalOutcome {
                outcome: ProtocolOutcome::new(p.e, Population::new(r_fin)?, cost, None, traj, p.r)?,
                incoherent_dominates: dominates,
            })
        }
        InternalControl::LocalRotation(mu) => {
            check_unit("mu", mu)?;
            let s = (1.0 - mu) * r_c + mu * p.r_c.complement();
            let sp = Population::new(s)?;
            let cost = (r_c - s) * p.e_c;
            let r_fin = p.degenerate_swap(sp);
            let dominates = if s < 0.5 || cost <= 0.0 {
                None
            } else {
                Some(internal_incoherent_cost(&p, sp) < cost)
            };
            let traj = vec![point(Repetitions::Finite(0), r, 0.0), point(Repetitions::Finite(1), r_fin, cost)];
            Ok(InternalOutcome {
                outcome: ProtocolOutcome::new(p.e, Population::new(r_fin)?, cost, None, traj, p.r)?,
                incoherent_dominates: dominates,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Qubit {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy {
    /// `E_i = E_j`.
    EqualGaps(Qubit, Qubit),
    /// `E_i = 0`.
    ZeroGap(Qubit),
    /// `E_sum = E_j + E_k`.
    SumGap { sum: Qubit, parts: (Qubit, Qubit) },
}

/// Combinations of two or more independent degeneracies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegeneracyCombination {
    /// Two zero gaps.
    TwoZero,
    /// Two equal gaps and the third zero.
    EqualAndZero,
    /// All gaps zero.
    AllZero,
    /// All gaps equal and non-zero.
    AllEqual,
    /// Two equal gaps and the third twice as large.
    EqualAndDouble,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub degeneracies: Vec<Degeneracy>,
    pub combination: Option<DegeneracyCombination>,
    pub cooling_enabled: bool,
    /// Basis indices of the cooling pair `|010⟩, |101⟩` when enabled.
    pub cooling_subspace: Option<(usize, usize)>,
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

/// Enumerate the spectral degeneracies of `E|1⟩⟨1|_A + E_B|1⟩⟨1|_B + E_C|1⟩⟨1|_C`.
///
/// Only `E_B = E + E_C` with `E_C > 0` opens a subspace in which the hot
/// machine state is hotter in the target than it should be, so only it cools.
pub fn degeneracy_classifier(e: f64, e_b: f64, e_c: f64) -> Result<DegeneracyReport> {
    if [e, e_b, e_c].iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
        return Err(domain("gaps must be finite and non-negative"));
    }
    use Qubit::*;
    let gaps = [(A, e), (B, e_b), (C, e_c)];
    let mut degs = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            if close(gaps[i].1, gaps[j].1) {
                degs.push(Degeneracy::EqualGaps(gaps[i].0, gaps[j].0));
            }
        }
    }
    for (q, g) in gaps {
        if close(g, 0.0) {
            degs.push(Degeneracy::ZeroGap(q));
        }
    }
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let (a, b) = if gaps[j].0 as u8 <= gaps[k].0 as u8 { (j, k) } else { (k, j) };
        if close(gaps[i].1, gaps[a].1 + gaps[b].1) {
            degs.push(Degeneracy::SumGap {
                sum: gaps[i].0,
                parts: (gaps[a].0, gaps[b].0),
            });
        }
    }
    let zeros = gaps.iter().filter(|(_, g)| close(*g, 0.0)).count();
    let sorted = {
        let mut v = [e, e_b, e_c];
        v.sort_by(f64::total_cmp);
        v
    };
    let combination = if zeros == 3 {
        Some(DegeneracyCombination::AllZero)
    } else if zeros == 2 {
        Some(DegeneracyCombination::TwoZero)
    } else if close(sorted[0], sorted[2]) {
        Some(DegeneracyCombination::AllEqual)
    } else if zeros == 1 && close(sorted[1], sorted[2]) {
        Some(DegeneracyCombination::EqualAndZero)
    } else if zeros == 0 && close(sorted[0], sorted[1]) && close(sorted[2], 2.0 * sorted[0]) {
        Some(DegeneracyCombination::EqualAndDouble)
    } else {
        None
    };
    let cooling_enabled = crate::thermal::is_resonant(e, e_b, e_c) && !close(e_c, 0.0);
    Ok(DegeneracyReport {
        degeneracies: degs,
        combination,
        cooling_enabled,
        cooling_subspace: cooling_enabled.then_some((2, 5)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn t(x: f64) -> Temperature {
        Temperature::Finite(x)
    }

    fn spec(e_c: f64, tr: f64, th: Option<Temperature>) -> MachineSpec {
        MachineSpec::two_qubit_resonant(1.0, e_c, t(tr), th).unwrap()
    }

    #[test]
    fn one_qubit_incoherent_never_cools() {
        for (e, e_b) in [(1.0, 1.0), (1.0, 0.7), (0.0, 1.0)] {
            let s = MachineSpec::one_qubit(e, e_b, t(1.0), Some(t(3.0))).unwrap();
            let out = one_qubit_incoherent(&s).unwrap();
            assert!(!out.cooling_possible);
            assert_eq!(out.work_cost.delta_f, 0.0);
        }
    }

    #[test]
    fn one_qubit_coherent_endpoint() {
        let s = MachineSpec::one_qubit(1.0, 2.0, t(1.0), None).unwrap();
        let r_b = boltzmann_population(2.0, t(1.0)).unwrap();
        let out = one_qubit_coherent(&s, r_b).unwrap();
        assert_abs_diff_eq!(out.t_final.value(), 0.5, epsilon = 1e-15);
        let bad = MachineSpec::one_qubit(1.0, 0.5, t(1.0), None).unwrap();
        assert!(matches!(
            one_qubit_coherent(&bad, r_b),
            Err(FridgeError::CoolingImpossible(_))
        ));
    }

    #[test]
    fn incoherent_limits() {
        let s = spec(0.4, 1.0, Some(t(1.0)));
        let out = two_qubit_incoherent_single(&s).unwrap();
        let p = TwoQubit::from_spec(&s).unwrap();
        assert_abs_diff_eq!(out.r_final.r(), p.r.r(), epsilon = 1e-15);
        assert_eq!(out.work_cost.delta_f, 0.0);
        let s = spec(0.4, 1.0, Some(Temperature::Infinite));
        let out = two_qubit_incoherent_single(&s).unwrap();
        assert_abs_diff_eq!(out.r_final.r(), 0.5 * (p.r.r() + p.r_b.r()), epsilon = 1e-15);
        assert_abs_diff_eq!(out.work_cost.delta_f, 0.4 * (p.r_c.r() - 0.5), epsilon = 1e-15);
        assert!(matches!(two_qubit_incoherent_single(&spec(0.4, 1.0, None)), Err(FridgeError::Configuration(_))));
    }

    #[test]
    fn coherent_endpoint_branches() {
        for e_c in [0.4, 2.5] {
            let s = spec(e_c, 1.0, None);
            let p = TwoQubit::from_spec(&s).unwrap();
            let out = two_qubit_coherent_single(&s, p.r_b).unwrap();
            assert_abs_diff_eq!(out.work_cost.delta_f, p.coherent_endpoint_cost(), epsilon = 1e-15);
            assert_abs_diff_eq!(out.t_final.value(), 1.0 / (1.0 + e_c), epsilon = 1e-15);
        }
    }

    #[test]
    fn repeated_incoherent_preheat_only_at_zero() {
        let s = spec(0.4, 1.0, Some(t(3.0)));
        let p = TwoQubit::from_spec(&s).unwrap();
        let out = repeated_incoherent(&s, Repetitions::Finite(0)).unwrap();
        let rch = p.r_c_hot(t(3.0)).unwrap();
        assert_abs_diff_eq!(out.heat_drawn.unwrap(), 0.4 * (p.r_c.r() - rch.r()), epsilon = 1e-15);
        assert_eq!(out.r_final, p.r);
    }

    #[test]
    fn repeated_incoherent_infinite_hot_reaches_coherent_endpoint() {
        let s = spec(0.4, 1.0, Some(Temperature::Infinite));
        let out = repeated_incoherent(&s, Repetitions::Infinite).unwrap();
        assert_abs_diff_eq!(out.t_final.value(), 1.0 / 1.4, epsilon = 1e-14);
    }

    #[test]
    fn autonomous_example() {
        let s = spec(1.0, 1.0, Some(t(4.0)));
        let out = autonomous_steady_state(&s).unwrap();
        assert_abs_diff_eq!(out.t_final.value(), 1.0 / (2.0 - 0.25), epsilon = 1e-15);
        let s = spec(1.0, 1.0, Some(t(1.0)));
        assert_abs_diff_eq!(autonomous_steady_state(&s).unwrap().t_final.value(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn repeated_coherent_consistency() {
        let s = spec(0.4, 1.0, None);
        let p = TwoQubit::from_spec(&s).unwrap();
        let one = repeated_coherent(&s, Repetitions::Finite(1)).unwrap();
        assert_eq!(one.r_final, p.r_b);
        assert_abs_diff_eq!(one.work_cost.delta_f, p.coherent_endpoint_cost(), epsilon = 1e-15);
        let inf = repeated_coherent(&s, Repetitions::Infinite).unwrap();
        assert_abs_diff_eq!(inf.r_final.r(), 1.0 / (1.0 + (-1.8f64).exp()), epsilon = 1e-15);
    }

    #[test]
    fn algorithmic_limits() {
        let s = spec(1.0, 1.0, None);
        let p = TwoQubit::from_spec(&s).unwrap();
        let full = algorithmic_cooling(&s, Repetitions::Infinite, 1.0, p.r).unwrap();
        assert_abs_diff_eq!(full.t_final.value(), 0.25, epsilon = 1e-15);
        let r_coh = p.coherent_asymptote();
        let zero = algorithmic_cooling(&s, Repetitions::Infinite, 0.0, r_coh).unwrap();
        assert_abs_diff_eq!(zero.r_final.r(), r_coh.r(), epsilon = 1e-15);
    }

    #[test]
    fn optimal_sequence_endpoints() {
        let s = spec(2.0, 1.0, None);
        let triv = optimal_sequence(&s, t(1.0)).unwrap();
        assert!(triv.trajectory.is_empty());
        assert_eq!(triv.work_cost.delta_f, 0.0);
        let p = TwoQubit::from_spec(&s).unwrap();
        let t_algo = t(1.0 / 6.0);
        let full = optimal_sequence(&s, t_algo).unwrap();
        let (r, r_b, r_c) = (p.r.r(), p.r_b.r(), p.r_c.r());
        let (rc, ra) = (p.coherent_asymptote().r(), p.algorithmic_asymptote().r());
        let expected = (r_c - r) * (2.0 - 1.0) + (r_b - r_c) * (3.0 - 1.0) + (rc - r_b) * 4.0
            + (r_b - r_c) * (3.0 - 2.0)
            + (ra - rc) * (1.0 + 4.0);
        assert_abs_diff_eq!(full.work_cost.delta_f, expected, epsilon = 1e-14);
        assert!(optimal_sequence(&s, t(0.1)).is_err());
    }

    #[test]
    fn internal_examples() {
        let s = spec(1.0 / 3.0, 1.0, None);
        let inc = internal_resource(&s, InternalControl::HotBath(t(1.0))).unwrap();
        assert_abs_diff_eq!(inc.outcome.work_cost.delta_f, 0.0, epsilon = 1e-15);
        let coh = internal_resource(&s, InternalControl::LocalRotation(0.0)).unwrap();
        assert_eq!(coh.outcome.work_cost.delta_f, 0.0);
        let coh = internal_resource(&s, InternalControl::LocalRotation(0.3)).unwrap();
        assert_eq!(coh.incoherent_dominates, Some(true));
    }

    #[test]
    fn classifier_examples() {
        let rep = degeneracy_classifier(1.0, 1.4, 0.4).unwrap();
        assert!(rep.cooling_enabled);
        assert_eq!(rep.cooling_subspace, Some((2, 5)));
        let rep = degeneracy_classifier(1.0, 0.5, 0.5).unwrap();
        assert!(!rep.cooling_enabled);
        assert!(rep.degeneracies.contains(&Degeneracy::SumGap { sum: Qubit::A, parts: (Qubit::B, Qubit::C) }));
        let rep = degeneracy_classifier(0.0, 0.0, 0.0).unwrap();
        assert!(!rep.cooling_enabled);
        assert_eq!(rep.combination, Some(DegeneracyCombination::AllZero));
        let rep = degeneracy_classifier(0.0, 0.7, 0.7).unwrap();
        assert!(rep.cooling_enabled);
        assert_eq!(rep.combination, Some(DegeneracyCombination::EqualAndZero));
    }
}
