//! CSV emitters for traces, ρ sweeps and scenario tables.
//!
//! Floats are printed with 6 significant digits in the style of `%g`;
//! infinities as `inf`; absent values as an empty field.

use std::io::Write;

use crate::error::Result;
use crate::pipeline::IterationTrace;
use crate::scalar::Real;
use crate::spectral::Lambda;

use super::experiment::{ScenarioRow, SweepRow};

/// `%.6g` formatting.
pub fn fmt_g6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Round to 6 significant digits first; the exponent may shift (9.999995 -> 10).
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_g6).unwrap_or_default()
}

fn lambda_str<T: Real>(l: Lambda<T>) -> String {
    match l {
        Lambda::Finite(v) => fmt_g6(v.as_f64()),
        Lambda::Infinite => "inf".into(),
    }
}

pub fn write_trace_csv<T: Real, W: Write>(mut out: W, trace: &IterationTrace<T>) -> Result<()> {
    writeln!(out, "k,lambda,rho,residual,isnr_db")?;
    for r in &trace.records {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.k,
            lambda_str(r.lambda),
            fmt_g6(r.rho.as_f64()),
            fmt_g6(r.residual.as_f64()),
            opt(r.isnr.map(|v| v.as_f64()))
        )?;
    }
    Ok(())
}

pub fn write_rho_sweep_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "image,bsnr_db,rho,adaptive_flag,isnr_db")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.image,
            fmt_g6(r.bsnr_db),
            fmt_g6(r.rho),
            u8::from(r.adaptive),
            fmt_g6(r.isnr_db)
        )?;
    }
    Ok(())
}

pub fn write_scenarios_csv<W: Write>(mut out: W, rows: &[ScenarioRow]) -> Result<()> {
    writeln!(out, "image,scenario,bsnr_db,isnr_db,ref_gfd_db,delta_db,secs_per_iter")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.image,
            r.scenario,
            fmt_g6(r.bsnr_db),
            fmt_g6(r.isnr_db),
            opt(r.ref_gfd_db),
            opt(r.delta_db()),
            fmt_g6(r.secs_per_iter)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g6_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (9.73, "9.73"),
            (40.0, "40"),
            (123456.0, "123456"),
            (1234567.0, "1.23457e+06"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-2.5, "-2.5"),
            (9.9999996, "10"),
            (0.1 + 0.2, "0.3"),
            (999999.5, "1e+06"),
            (f64::INFINITY, "inf"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g6(x), want, "{x}");
        }
    }
}
