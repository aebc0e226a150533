//! Step-by-step dense simulations of the cooling protocols.
//!
//! Every protocol is replayed as explicit unitaries and bath resets on the
//! `8 × 8` density matrix of target, `B` and `C`. Heat is read off as the energy
//! the hot bath deposits in `C` when it is reset; work as the energy change
//! of a unitary.

use fridge_core::{FridgeError, MachineSpec, Population, Result, Temperature};

use crate::dense::{gibbs_ground, hamiltonian_diagonal, DenseState, UnitaryOp};

/// Outcome of a dense run: final target population plus the energy bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseRun {
    pub r: f64,
    /// Heat drawn from the hot bath.
    pub heat: f64,
    /// Energy supplied by unitaries.
    pub work: f64,
}

struct Machine {
    gaps: [f64; 3],
    h: Vec<f64>,
    t_room: Temperature,
}

impl Machine {
    fn new(spec: &MachineSpec) -> Result<Self> {
        spec.require_machine_size(2)?;
        let gaps = [spec.e(), spec.machine[0].gap, spec.machine[1].gap];
        Ok(Machine {
            gaps,
            h: hamiltonian_diagonal(&gaps),
            t_room: spec.t_room,
        })
    }

    fn ground(&self, q: usize, t: Temperature) -> Result<f64> {
        gibbs_ground(self.gaps[q], t)
    }

    fn room_state(&self) -> Result<DenseState> {
        let g = [
            self.ground(0, self.t_room)?,
            self.ground(1, self.t_room)?,
            self.ground(2, self.t_room)?,
        ];
        DenseState::product(&g)
    }

    fn c_energy(&self, s: &DenseState) -> f64 {
        self.gaps[2] * (1.0 - s.ground_population(2))
    }

    /// Apply `u`, accumulating its energy change into `work`.
    fn unitary(&self, s: &DenseState, u: &UnitaryOp, work: &mut f64) -> Result<DenseState> {
        let out = s.apply(u)?;
        *work += out.energy(&self.h) - s.energy(&self.h);
        Ok(out)
    }

    /// Reset `B` to the room and `C` to population `c_ground`, returning the
    /// energy the bath puts into `C`.
    fn reset_machine(&self, s: &DenseState, c_ground: f64) -> Result<(DenseState, f64)> {
        let before = self.c_energy(s);
        let out = s.reset(&[1, 2], &[self.ground(1, self.t_room)?, c_ground])?;
        let q = self.c_energy(&out) - before;
        Ok((out, q))
    }
}

/// `|010⟩ ↔ |101⟩`, checked against the Hamiltonian.
fn resonant_swap(m: &Machine) -> Result<UnitaryOp> {
    UnitaryOp::swap(8, 2, 5).conserving(&m.h)
}

/// Work-optimal coherent single cycle, written in terms of partial swaps of
/// the target with `B` and `C`.
fn coherent_cycle(m: &Machine, mu: f64) -> Vec<UnitaryOp> {
    let ab = |mix: f64| UnitaryOp::partial_swap(8, 2, 4, mix).then(&UnitaryOp::partial_swap(8, 3, 5, mix));
    let ac = |mix: f64| UnitaryOp::partial_swap(8, 1, 4, mix).then(&UnitaryOp::partial_swap(8, 3, 6, mix));
    if m.gaps[2] <= m.gaps[0] {
        vec![ab(mu)]
    } else if mu <= 0.5 {
        vec![ac(2.0 * mu)]
    } else {
        vec![ac(1.0), ab(2.0 * mu - 1.0)]
    }
}

/// Heat `C` to `T_H` and apply the resonant swap once.
pub fn dense_incoherent_single(spec: &MachineSpec) -> Result<DenseRun> {
    dense_repeated_incoherent(spec, 1)
}

/// `n` cycles of: reset `B` to `T_R`, heat `C` to `T_H`, resonant swap.
pub fn dense_repeated_incoherent(spec: &MachineSpec, n: u64) -> Result<DenseRun> {
    let r0 = gibbs_ground(spec.e(), spec.t_room)?;
    dense_repeated_incoherent_from(spec, n, r0)
}

/// As [`dense_repeated_incoherent`] with the target starting at ground population `r0`.
pub fn dense_repeated_incoherent_from(spec: &MachineSpec, n: u64, r0: f64) -> Result<DenseRun> {
    let m = Machine::new(spec)?;
    let th = spec.require_hot()?;
    let c_hot = m.ground(2, th)?;
    let u = resonant_swap(&m)?;
    let mut s = DenseState::product(&[r0, m.ground(1, m.t_room)?, m.ground(2, m.t_room)?])?;
    let mut heat = 0.0;
    let mut work = 0.0;
    for _ in 0..n {
        let (next, q) = m.reset_machine(&s, c_hot)?;
        heat += q;
        s = m.unitary(&next, &u, &mut work)?;
    }
    Ok(DenseRun { r: s.target_population(), heat, work })
}

/// Coherent single cycle at unitary parameter `μ ∈ [0, 1]`.
pub fn dense_coherent_single(spec: &MachineSpec, mu: f64) -> Result<DenseRun> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(FridgeError::Domain(format!("mu must lie in [0, 1], got {mu}")));
    }
    let m = Machine::new(spec)?;
    let mut s = m.room_state()?;
    let mut work = 0.0;
    for u in coherent_cycle(&m, mu) {
        s = m.unitary(&s, &u, &mut work)?;
    }
    Ok(DenseRun { r: s.target_population(), heat: 0.0, work })
}

/// Full coherent cycle, then `n − 1` swaps `|100⟩ ↔ |011⟩` against a machine
/// rethermalized to the room.
pub fn dense_repeated_coherent(spec: &MachineSpec, n: u64) -> Result<DenseRun> {
    let m = Machine::new(spec)?;
    let mut s = m.room_state()?;
    let mut work = 0.0;
    if n == 0 {
        return Ok(DenseRun { r: s.target_population(), heat: 0.0, work });
    }
    for u in coherent_cycle(&m, 1.0) {
        s = m.unitary(&s, &u, &mut work)?;
    }
    let c_room = m.ground(2, m.t_room)?;
    let swap = UnitaryOp::swap(8, 4, 3);
    for _ in 1..n {
        let (next, _) = m.reset_machine(&s, c_room)?;
        s = m.unitary(&next, &swap, &mut work)?;
    }
    Ok(DenseRun { r: s.target_population(), heat: 0.0, work })
}

/// `n` algorithmic-cooling cycles from a target at ground population `r0`.
///
/// With `ν = 1` each cycle resets `B`, swaps `B ↔ C`, resets `B` again and
/// swaps `|100⟩ ↔ |011⟩`. For `ν < 1` the partially precooled `C` is modeled
/// by resetting it directly to `r_C + ν (r_B − r_C)`.
pub fn dense_algorithmic(spec: &MachineSpec, n: u64, nu: f64, r0: Population) -> Result<DenseRun> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(FridgeError::Domain(format!("nu must lie in [0, 1], got {nu}")));
    }
    let m = Machine::new(spec)?;
    let b_room = m.ground(1, m.t_room)?;
    let c_room = m.ground(2, m.t_room)?;
    let mut s = DenseState::product(&[r0.r(), b_room, c_room])?;
    let mut work = 0.0;
    let bc_swap = UnitaryOp::swap(8, 1, 2).then(&UnitaryOp::swap(8, 5, 6));
    let target_swap = UnitaryOp::swap(8, 4, 3);
    let c_nu = c_room + nu * (b_room - c_room);
    for _ in 0..n {
        if nu == 1.0 {
            s = s.reset(&[1], &[b_room])?;
            s = m.unitary(&s, &bc_swap, &mut work)?;
            s = s.reset(&[1], &[b_room])?;
        } else {
            s = s.reset(&[1, 2], &[b_room, c_nu])?;
        }
        s = m.unitary(&s, &target_swap, &mut work)?;
    }
    Ok(DenseRun { r: s.target_population(), heat: 0.0, work })
}

/// One-qubit machine: partial swap `|01⟩ ↔ |10⟩` with transfer fraction `μ`.
pub fn dense_one_qubit_coherent(spec: &MachineSpec, mu: f64) -> Result<DenseRun> {
    spec.require_machine_size(1)?;
    let gaps = [spec.e(), spec.machine[0].gap];
    let h = hamiltonian_diagonal(&gaps);
    let s = DenseState::product(&[gibbs_ground(gaps[0], spec.t_room)?, gibbs_ground(gaps[1], spec.t_room)?])?;
    let out = s.apply(&UnitaryOp::partial_swap(4, 1, 2, mu))?;
    Ok(DenseRun {
        r: out.target_population(),
        heat: 0.0,
        work: out.energy(&h) - s.energy(&h),
    })
}

/// Carnot factor `1 − T_R/T_H`, evaluated independently of the core helpers.
pub fn carnot_factor(t_room: Temperature, t_hot: Temperature) -> f64 {
    match (t_room, t_hot) {
        (_, Temperature::Infinite) => 1.0,
        (Temperature::Finite(tr), Temperature::Finite(th)) => 1.0 - tr / th,
        _ => 0.0,
    }
}
