//! Number formatting and CSV output for cooling curves.

use std::io::Write;

use fridge_core::curves::CoolingCurve;
use fridge_core::Temperature;

pub const CSV_HEADER: &str = "control,delta_f,temperature,r";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Six significant digits.
    Short,
    /// Shortest representation that parses back to the same bits.
    Full,
}

impl Precision {
    pub fn number(self, x: f64) -> String {
        if x.is_infinite() {
            return if x > 0.0 { "inf".into() } else { "-inf".into() };
        }
        if x.is_nan() {
            return "nan".into();
        }
        match self {
            Precision::Full => full(x),
            Precision::Short => sig6(x),
        }
    }

    pub fn temperature(self, t: Temperature) -> String {
        match t {
            Temperature::Infinite => "inf".into(),
            other => self.number(other.value()),
        }
    }
}

fn full(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `%g`-style rendering with six significant digits.
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_csv(out: &mut impl Write, curve: &CoolingCurve, precision: Precision) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in &curve.points {
        writeln!(
            out,
            "{},{},{},{}",
            precision.number(p.control),
            precision.number(p.delta_f),
            precision.temperature(p.temperature),
            precision.number(p.r.r())
        )?;
    }
    Ok(())
}
