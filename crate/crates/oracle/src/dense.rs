//! Dense density matrices on up to three qubits.
//!
//! Basis ordering is `|a b c⟩ ↦ 4a + 2b + c` with the target first. Nothing
//! here reuses the closed-form population helpers of `fridge-core`; Gibbs
//! weights are recomputed from `exp(−βE)` so that the oracle stays independent.

use nalgebra::DMatrix;
use num_complex::Complex64;

use fridge_core::{FridgeError, Population, Result, Temperature};

pub const MAX_QUBITS: usize = 3;
pub const TRACE_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    matrix: DMatrix<Complex64>,
    n_qubits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryTag {
    EnergyConserving,
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: DMatrix<Complex64>,
    tag: UnitaryTag,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(FridgeError::Unsupported(format!(
            "dense oracle handles 1 to {MAX_QUBITS} qubits, got {n}"
        )));
    }
    Ok(())
}

/// Ground population of a qubit with gap `gap` at `temp`, from the Gibbs weights.
pub fn gibbs_ground(gap: f64, temp: Temperature) -> Result<f64> {
    if !(gap.is_finite() && gap >= 0.0) {
        return Err(FridgeError::Domain(format!("gap must be non-negative, got {gap}")));
    }
    match temp {
        Temperature::Zero => Ok(1.0),
        Temperature::Infinite => Ok(0.5),
        Temperature::Finite(t) => {
            let w = (-gap / t).exp();
            Ok(1.0 / (1.0 + w))
        }
        Temperature::Negative(_) => Err(FridgeError::Domain("bath temperatures must be positive".into())),
    }
}

/// `Σ_q E_q |1⟩⟨1|_q`, enumerated bit by bit.
pub fn hamiltonian_diagonal(gaps: &[f64]) -> Vec<f64> {
    let n = gaps.len();
    (0..1usize << n)
        .map(|idx| {
            (0..n)
                .filter(|&q| idx & (1 << (n - 1 - q)) != 0)
                .map(|q| gaps[q])
                .sum()
        })
        .collect()
}

fn qubit_matrix(p0: f64) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(p0, 0.0),
        Complex64::new(1.0 - p0, 0.0),
    ]))
}

impl DenseState {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !dim.is_power_of_two() {
            return Err(FridgeError::Domain(format!("state must be square with power-of-two dimension, got {dim}")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        let state = DenseState { matrix, n_qubits };
        state.check_invariants()?;
        Ok(state)
    }

    /// Tensor product of diagonal qubit states with the given ground populations.
    pub fn product(ground: &[f64]) -> Result<Self> {
        check_qubits(ground.len())?;
        if ground.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(FridgeError::Domain("ground populations must lie in [0, 1]".into()));
        }
        let mut m = DMatrix::from_element(1, 1, ONE);
        for &p in ground {
            m = m.kronecker(&qubit_matrix(p));
        }
        Ok(DenseState { matrix: m, n_qubits: ground.len() })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn energy(&self, h: &[f64]) -> f64 {
        (0..self.dim()).map(|i| h[i] * self.matrix[(i, i)].re).sum()
    }

    /// Ground population of qubit `q` (0 is the target).
    pub fn ground_population(&self, q: usize) -> f64 {
        let bit = 1 << (self.n_qubits - 1 - q);
        (0..self.dim()).filter(|i| i & bit == 0).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn target_population(&self) -> f64 {
        self.ground_population(0)
    }

    /// Hermiticity, unit trace and eigenvalues above `−1e−12`.
    pub fn check_invariants(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(FridgeError::Domain(format!("trace {tr} differs from 1")));
        }
        let herm = (&self.matrix - self.matrix.adjoint()).norm();
        if herm > UNITARY_TOL {
            return Err(FridgeError::Domain(format!("state not Hermitian, residual {herm:e}")));
        }
        let eig = self.matrix.clone().symmetric_eigenvalues();
        if let Some(min) = eig.iter().copied().reduce(f64::min) {
            if min < -TRACE_TOL {
                return Err(FridgeError::Domain(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(())
    }

    /// Trace out `qubits` and replace them by diagonal states with the given
    /// ground populations.
    pub fn reset(&self, qubits: &[usize], ground: &[f64]) -> Result<Self> {
        if qubits.len() != ground.len() || qubits.iter().any(|&q| q >= self.n_qubits) {
            return Err(FridgeError::Domain("reset qubits and populations mismatch".into()));
        }
        let n = self.n_qubits;
        let dim = self.dim();
        let mask: usize = qubits.iter().map(|&q| 1 << (n - 1 - q)).sum();
        let weight = |idx: usize| -> f64 {
            qubits
                .iter()
                .zip(ground)
                .map(|(&q, &p)| if idx & (1 << (n - 1 - q)) == 0 { p } else { 1.0 - p })
                .product()
        };
        let mut out = DMatrix::from_element(dim, dim, ZERO);
        for i in 0..dim {
            for j in 0..dim {
                // The fresh factor is diagonal, so only equal reset bits survive.
                if i & mask != j & mask {
                    continue;
                }
                let mut reduced = ZERO;
                for m in 0..dim {
                    if m & !mask != 0 {
                        continue;
                    }
                    reduced += self.matrix[((i & !mask) | m, (j & !mask) | m)];
                }
                out[(i, j)] = reduced * weight(i);
            }
        }
        Ok(DenseState { matrix: out, n_qubits: n })
    }

    /// `U ρ U†`, asserting unitarity before and trace preservation after.
    pub fn apply(&self, u: &UnitaryOp) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(FridgeError::DimensionMismatch {
                expected: self.dim(),
                got: u.dim(),
            });
        }
        u.check_unitary()?;
        let matrix = &u.matrix * &self.matrix * u.matrix.adjoint();
        let out = DenseState { matrix, n_qubits: self.n_qubits };
        let tr = out.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(FridgeError::Domain(format!("trace drifted to {tr}")));
        }
        Ok(out)
    }
}

/// Thermal product state of target plus machine, one temperature per qubit.
pub fn build_thermal_state(gaps: &[f64], temps: &[Temperature]) -> Result<DenseState> {
    if gaps.len() != temps.len() {
        return Err(FridgeError::DimensionMismatch {
            expected: gaps.len(),
            got: temps.len(),
        });
    }
    check_qubits(gaps.len())?;
    let ground = gaps
        .iter()
        .zip(temps)
        .map(|(&g, &t)| gibbs_ground(g, t))
        .collect::<Result<Vec<_>>>()?;
    DenseState::product(&ground)
}

/// Target ground population and energy change under `u`.
pub fn apply_and_measure(state: &DenseState, u: &UnitaryOp, h: &[f64]) -> Result<(Population, f64)> {
    if h.len() != state.dim() {
        return Err(FridgeError::DimensionMismatch {
            expected: state.dim(),
            got: h.len(),
        });
    }
    let out = state.apply(u)?;
    let de = out.energy(h) - state.energy(h);
    if u.tag == UnitaryTag::EnergyConserving && de.abs() > UNITARY_TOL {
        return Err(FridgeError::Domain(format!("energy-conserving unitary changed ⟨H⟩ by {de:e}")));
    }
    let r = out.target_population().clamp(0.0, 1.0);
    Ok((Population::new(r)?, de))
}

impl UnitaryOp {
    pub fn general(matrix: DMatrix<Complex64>) -> Result<Self> {
        let u = UnitaryOp { matrix, tag: UnitaryTag::General };
        u.check_unitary()?;
        Ok(u)
    }

    /// Tag as energy conserving after checking `[U, H] = 0`.
    pub fn energy_conserving(matrix: DMatrix<Complex64>, h: &[f64]) -> Result<Self> {
        let u = UnitaryOp { matrix, tag: UnitaryTag::EnergyConserving };
        u.check_unitary()?;
        if h.len() != u.dim() {
            return Err(FridgeError::DimensionMismatch { expected: u.dim(), got: h.len() });
        }
        let mut worst = 0.0f64;
        for i in 0..u.dim() {
            for j in 0..u.dim() {
                worst = worst.max((u.matrix[(i, j)] * (h[j] - h[i])).norm());
            }
        }
        if worst > UNITARY_TOL {
            return Err(FridgeError::Domain(format!("unitary does not commute with H, residual {worst:e}")));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Self {
        UnitaryOp {
            matrix: DMatrix::identity(dim, dim),
            tag: UnitaryTag::EnergyConserving,
        }
    }

    /// `exp(−iθ (|i⟩⟨j| + |j⟩⟨i|))`: moves a fraction `sin²θ` of population between `i` and `j`.
    pub fn rotation(dim: usize, i: usize, j: usize, theta: f64) -> Self {
        let mut m = DMatrix::identity(dim, dim);
        let (c, s) = (theta.cos(), theta.sin());
        m[(i, i)] = Complex64::new(c, 0.0);
        m[(j, j)] = Complex64::new(c, 0.0);
        m[(i, j)] = Complex64::new(0.0, -s);
        m[(j, i)] = Complex64::new(0.0, -s);
        UnitaryOp { matrix: m, tag: UnitaryTag::General }
    }

    /// Exact transposition of basis states `i` and `j`.
    pub fn swap(dim: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::identity(dim, dim);
        m[(i, i)] = ZERO;
        m[(j, j)] = ZERO;
        m[(i, j)] = ONE;
        m[(j, i)] = ONE;
        UnitaryOp { matrix: m, tag: UnitaryTag::General }
    }

    /// Rotation whose population transfer fraction is `mix ∈ [0, 1]`.
    pub fn partial_swap(dim: usize, i: usize, j: usize, mix: f64) -> Self {
        if mix == 1.0 {
            Self::swap(dim, i, j)
        } else {
            Self::rotation(dim, i, j, mix.clamp(0.0, 1.0).sqrt().asin())
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &UnitaryOp) -> Self {
        let tag = if self.tag == UnitaryTag::EnergyConserving && next.tag == UnitaryTag::EnergyConserving {
            UnitaryTag::EnergyConserving
        } else {
            UnitaryTag::General
        };
        UnitaryOp { matrix: &next.matrix * &self.matrix, tag }
    }

    /// Retag after checking commutation with `h`.
    pub fn conserving(self, h: &[f64]) -> Result<Self> {
        Self::energy_conserving(self.matrix, h)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn tag(&self) -> UnitaryTag {
        self.tag
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim();
        (&self.matrix * self.matrix.adjoint() - DMatrix::<Complex64>::identity(d, d)).norm()
    }

    fn check_unitary(&self) -> Result<()> {
        if self.matrix.nrows() != self.matrix.ncols() {
            return Err(FridgeError::Domain("unitary must be square".into()));
        }
        let res = self.unitarity_residual();
        if res > UNITARY_TOL {
            return Err(FridgeError::Domain(format!("matrix is not unitary, residual {res:e}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_temperatures_give_maximally_mixed() {
        let s = build_thermal_state(&[1.0, 2.0, 3.0], &[Temperature::Infinite; 3]).unwrap();
        assert!(s.diagonal().iter().all(|&p| (p - 0.125).abs() < 1e-16));
    }

    #[test]
    fn reset_replaces_marginal() {
        let s = DenseState::product(&[0.7, 0.6, 0.9]).unwrap();
        let u = UnitaryOp::swap(8, 2, 5);
        let t = s.apply(&u).unwrap().reset(&[1, 2], &[0.6, 0.9]).unwrap();
        assert!((t.ground_population(1) - 0.6).abs() < 1e-15);
        assert!((t.ground_population(2) - 0.9).abs() < 1e-15);
        let r = s.apply(&u).unwrap().target_population();
        assert!((t.target_population() - r).abs() < 1e-15);
        t.check_invariants().unwrap();
    }

    #[test]
    fn identity_changes_nothing() {
        let s = DenseState::product(&[0.7, 0.6]).unwrap();
        let h = hamiltonian_diagonal(&[1.0, 1.5]);
        let (r, de) = apply_and_measure(&s, &UnitaryOp::identity(4), &h).unwrap();
        assert_eq!(r.r(), s.target_population());
        assert_eq!(de, 0.0);
    }

    #[test]
    fn conserving_tag_is_checked() {
        let h = hamiltonian_diagonal(&[1.0, 1.4, 0.4]);
        assert!(UnitaryOp::swap(8, 2, 5).conserving(&h).is_ok());
        assert!(UnitaryOp::swap(8, 2, 4).conserving(&h).is_err());
        assert!(DenseState::product(&[0.5; 4]).is_err());
    }
}
