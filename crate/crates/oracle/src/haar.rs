//! Haar-random unitaries and the Pareto dominance sweep.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use fridge_core::curves::CoolingCurve;
use fridge_core::{MachineSpec, Result};

use crate::dense::{build_thermal_state, hamiltonian_diagonal, DenseState, UnitaryOp};

pub const DOMINANCE_SLACK: f64 = 1e-9;
const CHUNK: usize = 1024;

/// Haar unitary from the QR decomposition of a complex Ginibre matrix, with
/// the phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Piecewise-linear frontier `r(ΔF)` through the curve points, flat beyond
/// the last one.
#[derive(Debug, Clone)]
pub struct Frontier {
    knots: Vec<(f64, f64)>,
}

impl Frontier {
    pub fn from_curve(curve: &CoolingCurve) -> Self {
        let mut knots: Vec<_> = curve.points.iter().map(|p| (p.delta_f, p.r.r())).collect();
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        Frontier { knots }
    }

    pub fn from_knots(mut knots: Vec<(f64, f64)>) -> Self {
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        Frontier { knots }
    }

    pub fn r_at(&self, df: f64) -> f64 {
        let k = &self.knots;
        match k.iter().position(|p| p.0 > df) {
            None => k.last().map_or(f64::NEG_INFINITY, |p| p.1),
            Some(0) => k[0].1,
            Some(i) => {
                let (a, b) = (k[i - 1], k[i]);
                a.1 + (b.1 - a.1) * (df - a.0) / (b.0 - a.0)
            }
        }
    }

    /// Amount by which `(df, r)` exceeds the frontier.
    pub fn excess(&self, df: f64, r: f64) -> f64 {
        r - self.r_at(df)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub index: u64,
    pub delta_f: f64,
    pub r: f64,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub seed: u64,
    pub samples: usize,
    pub slack: f64,
    /// Largest `r − frontier(ΔF)` seen; negative when every sample lies below.
    pub max_excess: f64,
    pub dominating: Vec<SamplePoint>,
}

impl DominanceReport {
    pub fn is_clean(&self) -> bool {
        self.dominating.is_empty()
    }
}

/// `(ΔF, r)` reached by applying `u` to `state`.
pub fn sample_point(state: &DenseState, h: &[f64], u: &UnitaryOp) -> Result<(f64, f64)> {
    let out = state.apply(u)?;
    Ok((out.energy(h) - state.energy(h), out.target_population()))
}

/// Draw `samples` Haar unitaries on the room-temperature machine and report
/// every point strictly above the analytic curve.
///
/// Sample `0` is the identity. Chunks of 1024 samples run in parallel, each on
/// its own ChaCha stream of `seed`, so the report depends on the seed alone.
pub fn haar_pareto_sweep(spec: &MachineSpec, samples: usize, analytic_curve: &CoolingCurve, seed: u64) -> Result<DominanceReport> {
    let frontier = Frontier::from_curve(analytic_curve);
    let mut gaps = vec![spec.e()];
    gaps.extend(spec.machine.iter().map(|q| q.gap));
    let temps = vec![spec.t_room; gaps.len()];
    let state = build_thermal_state(&gaps, &temps)?;
    let h = hamiltonian_diagonal(&gaps);
    let dim = state.dim();
    let chunks = samples.div_ceil(CHUNK);
    let per_chunk: Vec<Result<(f64, Vec<SamplePoint>)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut best = f64::NEG_INFINITY;
            let mut hits = Vec::new();
            for k in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let u = if k == 0 {
                    UnitaryOp::identity(dim)
                } else {
                    UnitaryOp::general(haar_unitary(&mut rng, dim))?
                };
                let (df, r) = sample_point(&state, &h, &u)?;
                let ex = frontier.excess(df, r);
                best = best.max(ex);
                if ex > DOMINANCE_SLACK {
                    hits.push(SamplePoint { index: k as u64, delta_f: df, r, excess: ex });
                }
            }
            Ok((best, hits))
        })
        .collect();
    let mut report = DominanceReport {
        seed,
        samples,
        slack: DOMINANCE_SLACK,
        max_excess: f64::NEG_INFINITY,
        dominating: Vec::new(),
    };
    for chunk in per_chunk {
        let (best, hits) = chunk?;
        report.max_excess = report.max_excess.max(best);
        report.dominating.extend(hits);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fridge_core::Temperature;

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let u = UnitaryOp::general(haar_unitary(&mut rng, 8)).unwrap();
            assert!(u.unitarity_residual() < 1e-12);
        }
    }

    #[test]
    fn frontier_interpolates() {
        let f = Frontier::from_knots(vec![(0.0, 0.5), (1.0, 0.7), (2.0, 0.8)]);
        assert!((f.r_at(0.5) - 0.6).abs() < 1e-15);
        assert_eq!(f.r_at(5.0), 0.8);
        assert_eq!(f.r_at(-1.0), 0.5);
    }

    #[test]
    fn empty_sweep() {
        let spec = MachineSpec::two_qubit_resonant(1.0, 0.4, Temperature::Finite(1.0), None).unwrap();
        let curve = fridge_core::curves::coherent_single_curve(&spec, 11).unwrap();
        let rep = haar_pareto_sweep(&spec, 0, &curve, 1).unwrap();
        assert!(rep.is_clean());
        assert_eq!(rep.max_excess, f64::NEG_INFINITY);
    }
}
