//! Majorization, T-transforms and the constrained energy minimization
//! `min ⟨x, H⟩` over `x ≺ ρ_in` with a fixed target ground population.
//!
//! Vectors use the product basis with the target most significant, so the
//! target-ground subspace is the first half of the indices.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{domain, FridgeError, Result};

/// Normalization tolerance for [`PopVector`].
pub const NORM_TOL: f64 = 1e-12;

const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopVector(Vec<f64>);

impl PopVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(domain("population vector is empty"));
        }
        if let Some(x) = entries.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(domain(format!("population entries must be non-negative, got {x}")));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(domain(format!("population vector sums to {total}, not 1")));
        }
        Ok(PopVector(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the first `k` entries.
    pub fn ground_sum(&self, k: usize) -> f64 {
        self.0[..k].iter().sum()
    }

    pub fn energy(&self, h: &[f64]) -> f64 {
        self.0.iter().zip(h).map(|(x, e)| x * e).sum()
    }

    fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// `x_i ← t x_i + (1 − t) x_j`, `x_j ← (1 − t) x_i + t x_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTransform {
    pub i: usize,
    pub j: usize,
    pub t: f64,
}

impl TTransform {
    pub fn apply(&self, x: &mut [f64]) {
        let (a, b) = (x[self.i], x[self.j]);
        x[self.i] = self.t * a + (1.0 - self.t) * b;
        x[self.j] = (1.0 - self.t) * a + self.t * b;
    }
}

pub fn apply_sequence(x: &[f64], seq: &[TTransform]) -> Vec<f64> {
    let mut y = x.to_vec();
    for tt in seq {
        tt.apply(&mut y);
    }
    y
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedMinResult {
    pub minimizer: PopVector,
    /// `⟨minimizer, H⟩`.
    pub objective: f64,
    /// `⟨minimizer, H⟩ − ⟨ρ_in, H⟩`, evaluated in closed form.
    pub energy_increase: f64,
    pub transform_sequence: Vec<TTransform>,
    /// Keys `mu`, `t_1`, `t_2`; `t_1 = t_2` is the weight of the last active stage.
    pub swap_parameters: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `E_C ≤ E`: a single A↔B partial swap.
    EcLeE,
    /// `E_C > E`: A↔C first, then A↔B.
    EcGtE,
}

/// True iff `x ≺ y`: sorted partial sums of `x` never exceed those of `y`.
pub fn majorizes(y: &PopVector, x: &PopVector) -> Result<bool> {
    if y.len() != x.len() {
        return Err(FridgeError::DimensionMismatch {
            expected: y.len(),
            got: x.len(),
        });
    }
    let (ys, xs) = (y.sorted_desc(), x.sorted_desc());
    let (mut sy, mut sx) = (0.0, 0.0);
    for (a, b) in ys.iter().zip(&xs) {
        sy += a;
        sx += b;
        if sx > sy + NORM_TOL {
            return Ok(false);
        }
    }
    Ok((sx - sy).abs() <= NORM_TOL)
}

fn check_dims(rho_in: &PopVector, h: &[f64], n: usize) -> Result<()> {
    if rho_in.len() != n {
        return Err(FridgeError::DimensionMismatch {
            expected: n,
            got: rho_in.len(),
        });
    }
    if h.len() != n {
        return Err(FridgeError::DimensionMismatch { expected: n, got: h.len() });
    }
    Ok(())
}

fn check_target(r_target: f64, lo: f64, hi: f64) -> Result<f64> {
    if r_target < lo - FEASIBILITY_TOL || r_target > hi + FEASIBILITY_TOL {
        return Err(FridgeError::Infeasible(format!(
            "target population {r_target} outside reachable range [{lo}, {hi}]"
        )));
    }
    // Snap rounding-level misses onto the endpoints so the no-op and full
    // swap requests are exact.
    let ulps = 4.0 * f64::EPSILON;
    let snapped = if (r_target - lo).abs() <= ulps * lo.abs().max(1.0) {
        lo
    } else if (r_target - hi).abs() <= ulps * hi.abs().max(1.0) {
        hi
    } else {
        r_target
    };
    Ok(snapped.clamp(lo, hi))
}

fn fraction(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        (num / den).clamp(0.0, 1.0)
    }
}

fn finish(
    rho_in: &PopVector,
    h: &[f64],
    seq: Vec<TTransform>,
    energy_increase: f64,
    params: &[(&str, f64)],
) -> Result<ConstrainedMinResult> {
    let y = apply_sequence(rho_in.entries(), &seq);
    let minimizer = PopVector(y.into_iter().map(|v| v.max(0.0)).collect());
    Ok(ConstrainedMinResult {
        objective: minimizer.energy(h),
        minimizer,
        energy_increase,
        transform_sequence: seq,
        swap_parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    })
}

/// One-qubit machine, basis `2a + b`: partial swap of `|01⟩` and `|10⟩`.
pub fn solve_one_qubit(rho_in: &PopVector, h: &[f64], r_target: f64) -> Result<ConstrainedMinResult> {
    check_dims(rho_in, h, 4)?;
    let x = rho_in.entries();
    let (e, e_b) = (h[2] - h[0], h[1] - h[0]);
    if e_b <= e {
        return Err(FridgeError::CoolingImpossible(format!(
            "one-qubit coherent cooling needs E < E_B, got E = {e}, E_B = {e_b}"
        )));
    }
    let r = x[0] + x[1];
    let r_b = x[0] + x[2];
    let r_target = check_target(r_target, r, r_b)?;
    let mu = fraction(r_target - r, r_b - r);
    let seq = vec![TTransform { i: 1, j: 2, t: 1.0 - mu }];
    let inc = (r_target - r) * (e_b - e);
    finish(rho_in, h, seq, inc, &[("mu", mu), ("t_1", 1.0 - mu), ("t_2", 1.0 - mu)])
}

fn ab_swap(m: f64) -> [TTransform; 2] {
    [TTransform { i: 2, j: 4, t: 1.0 - m }, TTransform { i: 3, j: 5, t: 1.0 - m }]
}

fn ac_swap(m: f64) -> [TTransform; 2] {
    [TTransform { i: 1, j: 4, t: 1.0 - m }, TTransform { i: 3, j: 6, t: 1.0 - m }]
}

/// Two-qubit machine at resonance, basis `4a + 2b + c`.
///
/// `EcLeE`: A↔B partial swap with `μ = (r_t − r)/(r_B − r)`.
/// `EcGtE`: A↔C with mixing `min(2μ, 1)`, then A↔B with `max(2μ − 1, 0)`.
pub fn solve_two_qubit(
    rho_in: &PopVector,
    h: &[f64],
    r_target: f64,
    regime: Regime,
) -> Result<ConstrainedMinResult> {
    check_dims(rho_in, h, 8)?;
    let x = rho_in.entries();
    let (e, e_b, e_c) = (h[4] - h[0], h[2] - h[0], h[1] - h[0]);
    if !crate::thermal::is_resonant(e, e_b, e_c) {
        return Err(domain(format!("energies are not resonant: E = {e}, E_B = {e_b}, E_C = {e_c}")));
    }
    let consistent = match regime {
        Regime::EcLeE => e_c <= e,
        Regime::EcGtE => e_c > e,
    };
    if !consistent {
        return Err(domain(format!("regime {regime:?} inconsistent with E = {e}, E_C = {e_c}")));
    }
    let r: f64 = x[..4].iter().sum();
    let r_b = x[0] + x[1] + x[4] + x[5];
    let r_c = x[0] + x[2] + x[4] + x[6];
    let r_target = check_target(r_target, r, r_b)?;
    match regime {
        Regime::EcLeE => {
            let mu = fraction(r_target - r, r_b - r);
            let inc = mu * e_c * (r_b - r);
            finish(rho_in, h, ab_swap(mu).to_vec(), inc, &[("mu", mu), ("t_1", 1.0 - mu), ("t_2", 1.0 - mu)])
        }
        Regime::EcGtE => {
            if r_target <= r_c {
                let m = fraction(r_target - r, r_c - r);
                let inc = m * (e_c - e) * (r_c - r);
                finish(rho_in, h, ac_swap(m).to_vec(), inc, &[("mu", 0.5 * m), ("t_1", 1.0 - m), ("t_2", 1.0 - m)])
            } else {
                let m = fraction(r_target - r_c, r_b - r_c);
                let inc = (e_c - e) * (r_c - r) + m * e_c * (r_b - r_c);
                let mut seq = ac_swap(1.0).to_vec();
                seq.extend(ab_swap(m));
                finish(rho_in, h, seq, inc, &[("mu", 0.5 * (1.0 + m)), ("t_1", 1.0 - m), ("t_2", 1.0 - m)])
            }
        }
    }
}

/// Maximal cooling: the `k` largest entries go to the ground half, and each
/// half is made passive. Ties keep ascending index order.
pub fn endpoint_minimizer(rho_in: &PopVector, k: usize, h: &[f64]) -> Result<ConstrainedMinResult> {
    let n = rho_in.len();
    if h.len() != n {
        return Err(FridgeError::DimensionMismatch { expected: n, got: h.len() });
    }
    if k > n {
        return Err(domain(format!("ground subspace size {k} exceeds dimension {n}")));
    }
    let x = rho_in.entries();
    let by_value: Vec<usize> = (0..n).sorted_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b))).collect();
    let by_energy = |range: std::ops::Range<usize>| -> Vec<usize> {
        range.sorted_by(|&a, &b| h[a].total_cmp(&h[b]).then(a.cmp(&b))).collect()
    };
    let mut target = vec![0.0; n];
    for (slot, src) in by_energy(0..k).into_iter().zip(&by_value[..k]) {
        target[slot] = x[*src];
    }
    for (slot, src) in by_energy(k..n).into_iter().zip(&by_value[k..]) {
        target[slot] = x[*src];
    }
    let mut cur = x.to_vec();
    let mut seq = Vec::new();
    for p in 0..n {
        if cur[p] != target[p] {
            let q = (p + 1..n)
                .find(|&q| cur[q] == target[p] && cur[q] != target[q])
                .or_else(|| (p + 1..n).find(|&q| cur[q] == target[p]))
                .expect("target is a permutation of the input");
            cur.swap(p, q);
            seq.push(TTransform { i: p, j: q, t: 0.0 });
        }
    }
    let inc = PopVector(target.clone()).energy(h) - rho_in.energy(h);
    let result = ConstrainedMinResult {
        objective: PopVector(target.clone()).energy(h),
        minimizer: PopVector(target),
        energy_increase: inc,
        transform_sequence: seq,
        swap_parameters: BTreeMap::new(),
    };
    Ok(result)
}

/// Exhaustive oracle for the constrained minimum.
///
/// Every permutation of `ρ_in` projects to a point `(ground sum, energy)`.
/// The feasible set's image is the convex hull of those points, so the
/// minimum at `r_target` lies on a segment between two of them; each
/// segment meets the constraint at most once, in closed form.
pub fn vertex_oracle_min(rho_in: &PopVector, h: &[f64], k: usize, r_target: f64) -> Result<f64> {
    let n = rho_in.len();
    if n > 8 {
        return Err(FridgeError::Unsupported(format!("vertex oracle is limited to dimension 8, got {n}")));
    }
    if h.len() != n {
        return Err(FridgeError::DimensionMismatch { expected: n, got: h.len() });
    }
    let x = rho_in.entries();
    let sorted = rho_in.sorted_desc();
    let hi: f64 = sorted[..k].iter().sum();
    let lo: f64 = sorted[n - k..].iter().sum();
    if r_target > hi + FEASIBILITY_TOL || r_target < lo - FEASIBILITY_TOL {
        return Err(FridgeError::Infeasible(format!(
            "target population {r_target} outside [{lo}, {hi}]"
        )));
    }

    // For each set of source indices landing in the ground half, keep the
    // cheapest arrangement; other permutations with the same ground sum are
    // dominated and cannot lie on the lower hull.
    let mut best: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    for perm in (0..n).permutations(n) {
        let mut mask = 0u32;
        let mut s = 0.0;
        let mut f = 0.0;
        for (slot, &src) in perm.iter().enumerate() {
            if slot < k {
                mask |= 1 << src;
                s += x[src];
            }
            f += x[src] * h[slot];
        }
        best.entry(mask)
            .and_modify(|e| {
                if f < e.1 {
                    *e = (s, f)
                }
            })
            .or_insert((s, f));
    }
    let pts: Vec<(f64, f64)> = best.into_values().collect();

    let mut min = f64::INFINITY;
    for (a, &(s1, f1)) in pts.iter().enumerate() {
        if (s1 - r_target).abs() <= FEASIBILITY_TOL {
            min = min.min(f1);
        }
        for &(s2, f2) in &pts[a + 1..] {
            let (slo, shi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
            if r_target < slo - FEASIBILITY_TOL || r_target > shi + FEASIBILITY_TOL {
                continue;
            }
            let f = if s2 == s1 {
                f1.min(f2)
            } else {
                let lam = ((r_target - s1) / (s2 - s1)).clamp(0.0, 1.0);
                f1 + lam * (f2 - f1)
            };
            min = min.min(f);
        }
    }
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::{boltzmann_population, product_diagonal, product_energies, Temperature};
    use approx::assert_abs_diff_eq;

    fn pv(v: &[f64]) -> PopVector {
        PopVector::new(v.to_vec()).unwrap()
    }

    fn two_qubit(e: f64, e_c: f64, t: f64) -> (PopVector, Vec<f64>) {
        let tr = Temperature::Finite(t);
        let gaps = [e, e + e_c, e_c];
        let pops: Vec<_> = gaps.iter().map(|g| boltzmann_population(*g, tr).unwrap()).collect();
        (pv(&product_diagonal(&pops)), product_energies(&gaps))
    }

    #[test]
    fn majorization_examples() {
        assert!(majorizes(&pv(&[1.0, 0.0]), &pv(&[0.5, 0.5])).unwrap());
        assert!(!majorizes(&pv(&[0.5, 0.5]), &pv(&[0.6, 0.4])).unwrap());
        let v = pv(&[0.1, 0.5, 0.3, 0.1]);
        let w = pv(&[0.3, 0.1, 0.1, 0.5]);
        assert!(majorizes(&v, &w).unwrap() && majorizes(&w, &v).unwrap());
        assert!(majorizes(&pv(&[1.0]), &pv(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn t_transform_limits() {
        let x = [0.7, 0.3];
        assert_eq!(apply_sequence(&x, &[TTransform { i: 0, j: 1, t: 1.0 }]), x.to_vec());
        assert_eq!(apply_sequence(&x, &[TTransform { i: 0, j: 1, t: 0.0 }]), vec![0.3, 0.7]);
    }

    #[test]
    fn one_qubit_grid_matches_oracle() {
        let tr = Temperature::Finite(1.0);
        let (e, e_b) = (1.0, 1.4);
        let pops = [boltzmann_population(e, tr).unwrap(), boltzmann_population(e_b, tr).unwrap()];
        let rho = pv(&product_diagonal(&pops));
        let h = product_energies(&[e, e_b]);
        let (r, r_b) = (pops[0].r(), pops[1].r());
        let res = solve_one_qubit(&rho, &h, 0.77).unwrap();
        assert_abs_diff_eq!(res.energy_increase, (0.77 - r) * 0.4, epsilon = 1e-15);
        for i in 0..=10 {
            let rt = r + (r_b - r) * i as f64 / 10.0;
            let res = solve_one_qubit(&rho, &h, rt).unwrap();
            let oracle = vertex_oracle_min(&rho, &h, 2, rt).unwrap();
            assert_abs_diff_eq!(res.objective, oracle, epsilon = 1e-10);
            assert_abs_diff_eq!(res.minimizer.ground_sum(2), rt, epsilon = 1e-12);
        }
        assert!(solve_one_qubit(&rho, &h, r_b + 1e-6).is_err());
    }

    #[test]
    fn two_qubit_kink_at_r_c() {
        let (rho, h) = two_qubit(1.0, 2.0, 1.0);
        let x = rho.entries();
        let r: f64 = x[..4].iter().sum();
        let r_c = x[0] + x[2] + x[4] + x[6];
        let res = solve_two_qubit(&rho, &h, r_c, Regime::EcGtE).unwrap();
        assert_abs_diff_eq!(res.energy_increase, (2.0 - 1.0) * (r_c - r), epsilon = 1e-15);
        assert_abs_diff_eq!(res.swap_parameters["mu"], 0.5, epsilon = 1e-15);
        assert!(solve_two_qubit(&rho, &h, r_c, Regime::EcLeE).is_err());
    }

    #[test]
    fn endpoint_is_fixed_point_for_passive_input() {
        let rho = pv(&[0.4, 0.3, 0.2, 0.1]);
        let res = endpoint_minimizer(&rho, 2, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(res.minimizer, rho);
        assert!(res.transform_sequence.is_empty());
        let uniform = pv(&[0.25; 4]);
        let res = endpoint_minimizer(&uniform, 2, &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(res.energy_increase, 0.0);
    }

    #[test]
    fn endpoint_reaches_r_b() {
        let (rho, h) = two_qubit(1.0, 0.4, 1.0);
        let x = rho.entries();
        let r_b = x[0] + x[1] + x[4] + x[5];
        let end = endpoint_minimizer(&rho, 4, &h).unwrap();
        assert_abs_diff_eq!(end.minimizer.ground_sum(4), r_b, epsilon = 1e-15);
        let closed = solve_two_qubit(&rho, &h, r_b, Regime::EcLeE).unwrap();
        assert_abs_diff_eq!(end.energy_increase, closed.energy_increase, epsilon = 1e-14);
        let replay = apply_sequence(x, &end.transform_sequence);
        assert_eq!(replay, end.minimizer.entries().to_vec());
    }

    #[test]
    fn oracle_dimension_two() {
        let rho = pv(&[0.3, 0.7]);
        let h = [0.0, 1.0];
        assert_abs_diff_eq!(vertex_oracle_min(&rho, &h, 1, 0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert!(vertex_oracle_min(&rho, &h, 1, 0.8).is_err());
    }
}
