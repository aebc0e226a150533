//! Energy-conserving unitaries on degenerate subspaces of the hot machine.

use serde::{Deserialize, Serialize};

use fridge_core::{FridgeError, MachineSpec, Result, Temperature};

use crate::dense::{build_thermal_state, hamiltonian_diagonal, DenseState, UnitaryOp};

fn degenerate(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub subspace: (usize, usize),
    pub initial_r: f64,
    pub best_r: f64,
    /// Rotation angle of the best grid point; `π/2` is the full swap.
    pub best_theta: f64,
}

impl SweepReport {
    pub fn improvement(&self) -> f64 {
        self.best_r - self.initial_r
    }
}

fn gaps_of(spec: &MachineSpec) -> Vec<f64> {
    let mut g = vec![spec.e()];
    g.extend(spec.machine.iter().map(|q| q.gap));
    g
}

/// `ρ^H`: target and `B` at room temperature, `C` at `T_H`.
pub fn hot_machine_state(spec: &MachineSpec) -> Result<DenseState> {
    spec.require_machine_size(2)?;
    let th = spec.require_hot()?;
    build_thermal_state(&gaps_of(spec), &[spec.t_room, spec.t_room, th])
}

/// All pairs of basis states with equal energy.
pub fn degenerate_pairs(h: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            if degenerate(h[i], h[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Grid sweep of `exp(−iθ(|i⟩⟨j| + |j⟩⟨i|))`, `θ ∈ [0, π/2]`, on `ρ^H`.
pub fn degenerate_subspace_sweep(spec: &MachineSpec, subspace: (usize, usize), grid: usize) -> Result<SweepReport> {
    let state = hot_machine_state(spec)?;
    let h = hamiltonian_diagonal(&gaps_of(spec));
    let (i, j) = subspace;
    if i >= h.len() || j >= h.len() || i == j {
        return Err(FridgeError::Domain(format!("invalid subspace ({i}, {j})")));
    }
    if !degenerate(h[i], h[j]) {
        return Err(FridgeError::Domain(format!(
            "levels {i} and {j} have energies {} and {}",
            h[i], h[j]
        )));
    }
    if grid < 2 {
        return Err(FridgeError::Domain("sweep grid needs at least two points".into()));
    }
    let initial_r = state.target_population();
    let mut best = (initial_r, 0.0);
    for k in 0..grid {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / (grid - 1) as f64;
        let u = UnitaryOp::rotation(h.len(), i, j, theta).conserving(&h)?;
        let r = state.apply(&u)?.target_population();
        if r > best.0 {
            best = (r, theta);
        }
    }
    Ok(SweepReport {
        subspace,
        initial_r,
        best_r: best.0,
        best_theta: best.1,
    })
}

/// Largest target ground population reachable by any energy-conserving
/// unitary on a diagonal state.
///
/// Such unitaries are block diagonal over the energy eigenspaces, and within
/// a block the reachable diagonals are those majorized by the block's
/// populations. The best a block can do is to put its `k` largest
/// populations on its `k` target-ground levels.
pub fn block_bound(diagonal: &[f64], h: &[f64]) -> f64 {
    let half = diagonal.len() / 2;
    let mut seen = vec![false; h.len()];
    let mut total = 0.0;
    for i in 0..h.len() {
        if seen[i] {
            continue;
        }
        let block: Vec<usize> = (i..h.len()).filter(|&j| !seen[j] && degenerate(h[i], h[j])).collect();
        for &j in &block {
            seen[j] = true;
        }
        let k = block.iter().filter(|&&j| j < half).count();
        let mut pops: Vec<f64> = block.iter().map(|&j| diagonal[j]).collect();
        pops.sort_by(|a, b| b.total_cmp(a));
        total += pops[..k].iter().sum::<f64>();
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyAudit {
    pub initial_r: f64,
    /// Best over every degenerate pair swept on the grid.
    pub best_pair_r: f64,
    /// Exact optimum over all energy-conserving unitaries.
    pub block_r: f64,
    pub pairs: Vec<SweepReport>,
}

/// Sweep every degenerate pair of `ρ^H` and compare with the block bound.
pub fn audit_degeneracies(spec: &MachineSpec, grid: usize) -> Result<DegeneracyAudit> {
    let state = hot_machine_state(spec)?;
    let h = hamiltonian_diagonal(&gaps_of(spec));
    let pairs = degenerate_pairs(&h)
        .into_iter()
        .map(|p| degenerate_subspace_sweep(spec, p, grid))
        .collect::<Result<Vec<_>>>()?;
    let initial_r = state.target_population();
    let best_pair_r = pairs.iter().map(|p| p.best_r).fold(initial_r, f64::max);
    Ok(DegeneracyAudit {
        initial_r,
        best_pair_r,
        block_r: block_bound(&state.diagonal(), &h),
        pairs,
    })
}

/// Machine with gaps `(E, E_B, E_C)` for sweeps that need not be resonant.
pub fn sweep_machine(e: f64, e_b: f64, e_c: f64, t_room: Temperature, t_hot: Temperature) -> Result<MachineSpec> {
    MachineSpec::two_qubit(e, e_b, e_c, t_room, Some(t_hot))
}
