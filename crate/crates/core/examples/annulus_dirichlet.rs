//! Crank–Nicolson on annuli: second-order agreement with the kernel
//! solution and the nested exhaustion under the universal bound.

use std::f64::consts::LN_2;

use cdh::analysis::acceptance::annulus_order_study;
use cdh::analysis::{fit_rate, ErrorSeries};
use cdh::solver::{annulus_solve, doubling_schedule, nested_annulus_limit, AnnulusProblem};
use cdh::transforms::InitialDatum;
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let d3 = Dimension::THREE;
    let bump = InitialDatum::gaussian_bump(0.0, 0.4, 1.0, d3)?;

    let p = AnnulusProblem::new((-4f64).exp(), 4f64.exp(), bump.clone(), 401, 0.005)?;
    let traj = annulus_solve(&p, &[0.1, 0.5, 1.0])?;
    for snap in &traj.snapshots {
        let max = snap.values().iter().cloned().fold(0.0, f64::max);
        println!("t = {}: max u = {max:.6}", snap.time());
    }

    let study = annulus_order_study(&bump)?;
    for (h, e) in &study {
        println!("h = {h:.5}  sup error = {e:.3e}");
    }
    let fit = fit_rate(&ErrorSeries::new(study, 0.0)?)?;
    println!("observed order {:.3}", fit.exponent);

    let m = 32;
    let h = LN_2 / m as f64;
    let datum = InitialDatum::gaussian_bump(0.5, 0.25, 1.0, d3)?;
    let (_, report) = nested_annulus_limit(&datum, &doubling_schedule(1.0 / 16.0, 16.0, 4), m, h * h, 1.0, 0.0625)?;
    for ((r, big_r), inc) in report.levels.iter().skip(1).zip(&report.increments) {
        println!("({r:.4}, {big_r:.0}): sup increment {inc:.3e}");
    }
    println!(
        "monotone: {}, max u / K·F(t + τ) = {:.4}, gap to kernel {:.2e}",
        report.monotone, report.bound_ratio, report.kernel_gap
    );
    Ok(())
}
