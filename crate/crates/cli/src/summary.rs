//! Lowest achievable temperatures and their work costs for one machine.

use serde::Serialize;

use fridge_core::protocols::{
    algorithmic_cooling, autonomous_steady_state, one_qubit_coherent, repeated_coherent,
    two_qubit_coherent_single, two_qubit_incoherent_single, ProtocolOutcome, Repetitions, TwoQubit,
};
use fridge_core::majorization::Regime;
use fridge_core::{MachineSpec, Population, Result, Temperature};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Entry {
    #[serde(rename = "T")]
    pub temperature: Temperature,
    pub r: Population,
    pub delta_f: f64,
}

impl From<&ProtocolOutcome> for Entry {
    fn from(o: &ProtocolOutcome) -> Self {
        Entry {
            temperature: o.t_final,
            r: o.r_final,
            delta_f: o.work_cost.delta_f,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MachineEcho {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "E_B")]
    pub e_b: f64,
    #[serde(rename = "E_C")]
    pub e_c: f64,
    #[serde(rename = "T_R")]
    pub t_room: Temperature,
    #[serde(rename = "T_H")]
    pub t_hot: Option<Temperature>,
}

/// Two-qubit machine optima; the incoherent entries are the `T_H → ∞` limits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQubitSummary {
    pub regime: &'static str,
    pub inc: Entry,
    pub auto: Entry,
    pub coh: Entry,
    pub coh_inf: Entry,
    pub algo_inf: Entry,
}

/// Incoherent entries at the configured finite `T_H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtHot {
    #[serde(rename = "T_H")]
    pub t_hot: Temperature,
    pub inc: Entry,
    pub auto: Entry,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub machine: MachineEcho,
    /// Qubit `B` alone as a one-qubit machine; `None` when it cannot cool.
    pub one_qubit: Option<Entry>,
    pub two_qubit: TwoQubitSummary,
    pub at_t_hot: Option<AtHot>,
}

pub fn summarize(spec: &MachineSpec) -> Result<Summary> {
    let p = TwoQubit::from_spec(spec)?;
    let inf = spec.with_hot(Temperature::Infinite)?;
    let one_qubit = if p.e_b > p.e {
        let single = MachineSpec::one_qubit(p.e, p.e_b, spec.t_room, None)?;
        Some(Entry::from(&one_qubit_coherent(&single, p.r_b)?))
    } else {
        None
    };
    let coh_inf = repeated_coherent(spec, Repetitions::Infinite)?;
    let mut algo_inf = Entry::from(&algorithmic_cooling(spec, Repetitions::Infinite, 1.0, coh_inf.r_final)?);
    algo_inf.delta_f += coh_inf.work_cost.delta_f;
    let two_qubit = TwoQubitSummary {
        regime: match p.regime() {
            Regime::EcLeE => "ec_le_e",
            Regime::EcGtE => "ec_gt_e",
        },
        inc: Entry::from(&two_qubit_incoherent_single(&inf)?),
        auto: Entry::from(&autonomous_steady_state(&inf)?),
        coh: Entry::from(&two_qubit_coherent_single(spec, p.r_b)?),
        coh_inf: Entry::from(&coh_inf),
        algo_inf,
    };
    let at_t_hot = match spec.t_hot {
        Some(th) if !th.is_infinite() => Some(AtHot {
            t_hot: th,
            inc: Entry::from(&two_qubit_incoherent_single(spec)?),
            auto: Entry::from(&autonomous_steady_state(spec)?),
        }),
        _ => None,
    };
    Ok(Summary {
        machine: MachineEcho {
            e: p.e,
            e_b: p.e_b,
            e_c: p.e_c,
            t_room: spec.t_room,
            t_hot: spec.t_hot,
        },
        one_qubit,
        two_qubit,
        at_t_hot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(e_c: f64, tr: Temperature) -> MachineSpec {
        MachineSpec::two_qubit_resonant(1.0, e_c, tr, None).unwrap()
    }

    #[test]
    fn infinite_room_costs_nothing() {
        let s = summarize(&spec(0.4, Temperature::Infinite)).unwrap();
        let t = &s.two_qubit;
        for e in [t.inc, t.auto, t.coh, t.coh_inf, t.algo_inf, s.one_qubit.unwrap()] {
            assert_eq!(e.delta_f, 0.0);
            assert_eq!(e.temperature, Temperature::Infinite);
        }
    }

    #[test]
    fn vanishing_c_gap_costs_coincide() {
        let s = summarize(&spec(1e-9, Temperature::Finite(1.0))).unwrap();
        assert!(s.two_qubit.coh.delta_f.abs() < 1e-9);
        assert!(s.two_qubit.inc.delta_f.abs() < 1e-9);
    }

    #[test]
    fn orderings_at_unit_gaps() {
        let s = summarize(&spec(1.0, Temperature::Finite(1.0))).unwrap();
        let t = &s.two_qubit;
        assert_eq!(t.regime, "ec_le_e");
        assert!(t.coh.temperature.value() < t.inc.temperature.value());
        assert!(t.coh.delta_f < t.inc.delta_f);
        assert!(t.coh_inf.temperature.value() < t.coh.temperature.value());
        assert!(t.algo_inf.temperature.value() < t.coh_inf.temperature.value());
        assert!((t.auto.r.r() - t.coh.r.r()).abs() < 1e-15);
    }
}
