//! Thermal-state arithmetic shared by every protocol.
//!
//! Populations are stored as log-odds `λ = ln(r / (1 − r))`. For a thermal
//! qubit `λ = gap / T` exactly, so `r ↔ T` round trips stay accurate even
//! when `r` is within an ulp of 1.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{domain, FridgeError, Result};

/// Tolerance for the resonance `E_B = E + E_C`, scaled by `max(1, E_B)`.
pub const RESONANCE_TOL: f64 = 1e-9;

/// A temperature, with the limits that the theory needs exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    /// Pure ground state.
    Zero,
    Finite(f64),
    /// Symmetric populations, `β = 0`.
    Infinite,
    /// Inverted populations. Never produced by a cooling protocol.
    Negative(f64),
}

impl Temperature {
    /// A positive temperature. `f64::INFINITY` maps to [`Temperature::Infinite`].
    pub fn finite(t: f64) -> Result<Self> {
        if t == f64::INFINITY {
            Ok(Temperature::Infinite)
        } else if t.is_finite() && t > 0.0 {
            Ok(Temperature::Finite(t))
        } else {
            Err(domain(format!("temperature must be positive, got {t}")))
        }
    }

    pub fn from_beta(beta: f64) -> Self {
        if beta == f64::INFINITY {
            Temperature::Zero
        } else if beta == 0.0 {
            Temperature::Infinite
        } else if beta > 0.0 {
            Temperature::Finite(1.0 / beta)
        } else {
            Temperature::Negative(1.0 / beta)
        }
    }

    /// Inverse temperature; `Zero` gives `+∞` and `Infinite` gives `0`.
    pub fn beta(&self) -> f64 {
        match *self {
            Temperature::Zero => f64::INFINITY,
            Temperature::Finite(t) | Temperature::Negative(t) => 1.0 / t,
            Temperature::Infinite => 0.0,
        }
    }

    /// Numeric value, with `Infinite` as `f64::INFINITY`.
    pub fn value(&self) -> f64 {
        match *self {
            Temperature::Zero => 0.0,
            Temperature::Finite(t) | Temperature::Negative(t) => t,
            Temperature::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Temperature::Infinite)
    }

    /// True for `Finite` and `Infinite`, the values a bath may take.
    pub fn is_bath(&self) -> bool {
        matches!(self, Temperature::Finite(_) | Temperature::Infinite)
    }

    /// Multiply by a positive factor.
    pub fn scaled(self, factor: f64) -> Self {
        debug_assert!(factor > 0.0 && factor.is_finite());
        match self {
            Temperature::Finite(t) => Temperature::Finite(t * factor),
            Temperature::Negative(t) => Temperature::Negative(t * factor),
            other => other,
        }
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Temperature::Infinite => write!(f, "inf"),
            other => write!(f, "{}", other.value()),
        }
    }
}

impl Serialize for Temperature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Temperature::Infinite => s.serialize_str("inf"),
            other => s.serialize_f64(other.value()),
        }
    }
}

impl<'de> Deserialize<'de> for Temperature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Temperature;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Temperature, E> {
                Ok(if v == 0.0 {
                    Temperature::Zero
                } else if v == f64::INFINITY {
                    Temperature::Infinite
                } else if v > 0.0 {
                    Temperature::Finite(v)
                } else {
                    Temperature::Negative(v)
                })
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Temperature, E> {
                self.visit_f64(v as f64)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Temperature, E> {
                self.visit_f64(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Temperature, E> {
                match v {
                    "inf" | "Infinite" | "infinity" => Ok(Temperature::Infinite),
                    _ => Err(E::custom(format!("unknown temperature {v:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Ground-state population of a qubit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Population {
    log_odds: f64,
}

impl Population {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(domain(format!("population must lie in [0, 1], got {r}")));
        }
        Ok(Population {
            log_odds: r.ln() - (-r).ln_1p(),
        })
    }

    /// From `λ = ln(r / (1 − r))`; `±∞` are the pure states.
    pub fn from_log_odds(log_odds: f64) -> Self {
        debug_assert!(!log_odds.is_nan());
        Population { log_odds }
    }

    pub fn half() -> Self {
        Population { log_odds: 0.0 }
    }

    pub fn r(&self) -> f64 {
        1.0 / (1.0 + (-self.log_odds).exp())
    }

    /// `1 − r`, computed without cancellation.
    pub fn complement(&self) -> f64 {
        1.0 / (1.0 + self.log_odds.exp())
    }

    pub fn log_odds(&self) -> f64 {
        self.log_odds
    }

    /// `ln r`.
    pub fn ln_r(&self) -> f64 {
        if self.log_odds > 0.0 {
            -(-self.log_odds).exp().ln_1p()
        } else {
            self.log_odds - self.log_odds.exp().ln_1p()
        }
    }
}

impl Serialize for Population {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.r())
    }
}

impl<'de> Deserialize<'de> for Population {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = f64::deserialize(d)?;
        Population::new(r).map_err(de::Error::custom)
    }
}

/// Free energy drawn from the resource; positive when the resource is spent.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct WorkCost {
    pub delta_f: f64,
}

impl WorkCost {
    pub fn new(delta_f: f64) -> Self {
        WorkCost { delta_f }
    }

    pub fn zero() -> Self {
        WorkCost { delta_f: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitSpec {
    pub gap: f64,
}

impl QubitSpec {
    pub fn new(gap: f64) -> Result<Self> {
        if gap.is_finite() && gap >= 0.0 {
            Ok(QubitSpec { gap })
        } else {
            Err(domain(format!("qubit gap must be finite and non-negative, got {gap}")))
        }
    }
}

/// Target qubit, machine qubits and bath temperatures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MachineSpec {
    pub target: QubitSpec,
    pub machine: Vec<QubitSpec>,
    pub t_room: Temperature,
    pub t_hot: Option<Temperature>,
}

impl MachineSpec {
    pub fn new(
        target: QubitSpec,
        machine: Vec<QubitSpec>,
        t_room: Temperature,
        t_hot: Option<Temperature>,
    ) -> Result<Self> {
        if !t_room.is_bath() {
            return Err(domain(format!("room temperature must be positive, got {t_room}")));
        }
        if let Some(th) = t_hot {
            if !th.is_bath() {
                return Err(domain(format!("hot temperature must be positive, got {th}")));
            }
            if th.beta() > t_room.beta() {
                return Err(domain(format!(
                    "hot bath ({th}) must not be colder than the room ({t_room})"
                )));
            }
        }
        Ok(MachineSpec {
            target,
            machine,
            t_room,
            t_hot,
        })
    }

    pub fn one_qubit(e: f64, e_b: f64, t_room: Temperature, t_hot: Option<Temperature>) -> Result<Self> {
        Self::new(QubitSpec::new(e)?, vec![QubitSpec::new(e_b)?], t_room, t_hot)
    }

    /// Two machine qubits with arbitrary gaps; resonance is not enforced.
    pub fn two_qubit(
        e: f64,
        e_b: f64,
        e_c: f64,
        t_room: Temperature,
        t_hot: Option<Temperature>,
    ) -> Result<Self> {
        Self::new(
            QubitSpec::new(e)?,
            vec![QubitSpec::new(e_b)?, QubitSpec::new(e_c)?],
            t_room,
            t_hot,
        )
    }

    /// Two machine qubits with `E_B = E + E_C`.
    pub fn two_qubit_resonant(
        e: f64,
        e_c: f64,
        t_room: Temperature,
        t_hot: Option<Temperature>,
    ) -> Result<Self> {
        Self::two_qubit(e, e + e_c, e_c, t_room, t_hot)
    }

    pub fn e(&self) -> f64 {
        self.target.gap
    }

    pub fn machine_gap(&self, i: usize) -> Result<f64> {
        self.machine
            .get(i)
            .map(|q| q.gap)
            .ok_or(FridgeError::DimensionMismatch {
                expected: i + 1,
                got: self.machine.len(),
            })
    }

    pub fn require_machine_size(&self, n: usize) -> Result<()> {
        if self.machine.len() == n {
            Ok(())
        } else {
            Err(FridgeError::DimensionMismatch {
                expected: n,
                got: self.machine.len(),
            })
        }
    }

    /// `E_B = E + E_C` within [`RESONANCE_TOL`].
    pub fn is_resonant(&self) -> bool {
        match (self.machine_gap(0), self.machine_gap(1)) {
            (Ok(e_b), Ok(e_c)) => is_resonant(self.e(), e_b, e_c),
            _ => false,
        }
    }

    pub fn require_resonance(&self) -> Result<()> {
        self.require_machine_size(2)?;
        if self.is_resonant() {
            Ok(())
        } else {
            Err(domain(format!(
                "machine is not resonant: E_B = {} but E + E_C = {}",
                self.machine[0].gap,
                self.e() + self.machine[1].gap
            )))
        }
    }

    pub fn require_hot(&self) -> Result<Temperature> {
        self.t_hot
            .ok_or_else(|| FridgeError::Configuration("hot bath temperature T_H is not set".into()))
    }

    pub fn with_hot(&self, t_hot: Temperature) -> Result<Self> {
        Self::new(self.target, self.machine.clone(), self.t_room, Some(t_hot))
    }
}

pub fn is_resonant(e: f64, e_b: f64, e_c: f64) -> bool {
    (e_b - e - e_c).abs() <= RESONANCE_TOL * e_b.max(1.0)
}

/// `r(gap, T) = 1 / (1 + e^{−gap/T})`.
pub fn boltzmann_population(gap: f64, temp: Temperature) -> Result<Population> {
    if !(gap.is_finite() && gap >= 0.0) {
        return Err(domain(format!("gap must be finite and non-negative, got {gap}")));
    }
    if !temp.is_bath() {
        return Err(domain(format!("temperature must be positive or infinite, got {temp}")));
    }
    Ok(Population::from_log_odds(gap * temp.beta()))
}

/// Inverse of [`boltzmann_population`]: `T = gap / ln(r / (1 − r))`.
///
/// `r = 1/2` gives `Infinite`, `r = 1` gives `Zero` and `r < 1/2` gives a
/// `Negative` temperature.
pub fn temperature_from_population(gap: f64, r: Population) -> Result<Temperature> {
    if !(gap.is_finite() && gap > 0.0) {
        return Err(domain(format!("gap must be positive to define a temperature, got {gap}")));
    }
    let lambda = r.log_odds();
    Ok(if lambda == 0.0 {
        Temperature::Infinite
    } else if lambda == f64::INFINITY {
        Temperature::Zero
    } else {
        let t = gap / lambda;
        if t > 0.0 {
            Temperature::Finite(t)
        } else {
            Temperature::Negative(t)
        }
    })
}

/// Free energy carried by heat `Q` drawn from a bath at `t_hot`: `Q (1 − T_R/T_H)`.
pub fn resource_free_energy(heat: f64, t_hot: Temperature, t_room: Temperature) -> Result<WorkCost> {
    if !t_hot.is_bath() || !t_room.is_bath() {
        return Err(domain("bath temperatures must be positive or infinite"));
    }
    let (bh, br) = (t_hot.beta(), t_room.beta());
    if bh > br {
        return Err(domain(format!("t_hot ({t_hot}) is below t_room ({t_room})")));
    }
    let carnot = if br == 0.0 { 0.0 } else { 1.0 - bh / br };
    Ok(WorkCost::new(heat * carnot))
}

/// Diagonal of `τ_1 ⊗ τ_2 ⊗ …`, first factor most significant.
pub fn product_diagonal(pops: &[Population]) -> Vec<f64> {
    let n = pops.len();
    (0..1usize << n)
        .map(|idx| {
            pops.iter()
                .enumerate()
                .map(|(q, p)| {
                    if (idx >> (n - 1 - q)) & 1 == 0 {
                        p.r()
                    } else {
                        p.complement()
                    }
                })
                .product()
        })
        .collect()
}

/// Diagonal of `Σ_i E_i |1⟩⟨1|_i`, same ordering as [`product_diagonal`].
pub fn product_energies(gaps: &[f64]) -> Vec<f64> {
    let n = gaps.len();
    (0..1usize << n)
        .map(|idx| {
            gaps.iter()
                .enumerate()
                .filter(|(q, _)| (idx >> (n - 1 - q)) & 1 == 1)
                .map(|(_, g)| g)
                .sum()
        })
        .collect()
}

/// Binary entropy `−r ln r − (1 − r) ln(1 − r)` in nats.
pub fn binary_entropy(r: Population) -> f64 {
    let (p, q) = (r.r(), r.complement());
    let term = |x: f64, lnx: f64| if x > 0.0 { -x * lnx } else { 0.0 };
    let ln_q = Population::from_log_odds(-r.log_odds()).ln_r();
    term(p, r.ln_r()) + term(q, ln_q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn boltzmann_examples() {
        let t1 = Temperature::Finite(1.0);
        assert_eq!(boltzmann_population(0.0, t1).unwrap().r(), 0.5);
        assert_eq!(boltzmann_population(0.4, Temperature::Infinite).unwrap().r(), 0.5);
        assert_relative_eq!(
            boltzmann_population(1.0, t1).unwrap().r(),
            0.731_058_578_630_004_9,
            max_relative = 1e-15
        );
        assert!(boltzmann_population(1.0, Temperature::Negative(-1.0)).is_err());
        assert!(Temperature::finite(0.0).is_err());
    }

    #[test]
    fn temperature_examples() {
        let r = boltzmann_population(1.0, Temperature::Finite(0.7)).unwrap();
        assert_relative_eq!(temperature_from_population(1.0, r).unwrap().value(), 0.7, max_relative = 1e-15);
        assert_eq!(
            temperature_from_population(1.0, Population::new(0.5).unwrap()).unwrap(),
            Temperature::Infinite
        );
        let t = temperature_from_population(1.0, Population::new(0.8).unwrap()).unwrap();
        assert_relative_eq!(t.value(), 0.721_347_520_444_481_7, max_relative = 1e-14);
        let neg = temperature_from_population(1.0, Population::new(0.3).unwrap()).unwrap();
        assert!(matches!(neg, Temperature::Negative(_)));
        assert_eq!(
            temperature_from_population(1.0, Population::new(1.0).unwrap()).unwrap(),
            Temperature::Zero
        );
    }

    #[test]
    fn free_energy_examples() {
        let t1 = Temperature::Finite(1.0);
        assert_eq!(resource_free_energy(0.3, t1, t1).unwrap().delta_f, 0.0);
        assert_eq!(resource_free_energy(0.2, Temperature::Infinite, t1).unwrap().delta_f, 0.2);
        assert_relative_eq!(
            resource_free_energy(0.2, Temperature::Finite(2.0), t1).unwrap().delta_f,
            0.1,
            max_relative = 1e-15
        );
        assert!(resource_free_energy(0.2, Temperature::Finite(0.5), t1).is_err());
    }

    #[test]
    fn product_state_ordering() {
        let a = Population::new(0.9).unwrap();
        let b = Population::new(0.6).unwrap();
        let d = product_diagonal(&[a, b]);
        assert_relative_eq!(d[1], 0.9 * 0.4, max_relative = 1e-15);
        assert_relative_eq!(d[2], 0.1 * 0.6, max_relative = 1e-15);
        let h = product_energies(&[1.0, 1.4, 0.4]);
        for (x, y) in h.iter().zip([0.0, 0.4, 1.4, 1.8, 1.0, 1.4, 2.4, 2.8]) {
            assert_relative_eq!(*x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn complement_is_accurate_near_one() {
        let p = boltzmann_population(40.0, Temperature::Finite(1.0)).unwrap();
        assert_relative_eq!(p.complement(), (-40.0f64).exp() / (1.0 + (-40.0f64).exp()), max_relative = 1e-14);
        assert_relative_eq!(binary_entropy(Population::half()), std::f64::consts::LN_2, max_relative = 1e-15);
    }
}
