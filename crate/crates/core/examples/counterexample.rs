//! θ·F is a solution that stays a fixed distance from every radial
//! multiple of F.

use std::f64::consts::{PI, TAU};

use cdh::analysis::{counterexample_gap, counterexample_gap_exact};
use cdh::profiles::AngularRange;
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    for (lo, hi) in [(0.0, PI), (0.0, TAU), (1.0, 1.5)] {
        let range = AngularRange::new(lo, hi)?;
        print!("θ ∈ [{lo:.3}, {hi:.3}]  exact {:.6}:", counterexample_gap_exact(&range));
        for t in [1.0, 10.0, 100.0] {
            print!("  g({t}) = {:.6}", counterexample_gap(t, Dimension::THREE, &range)?);
        }
        println!();
    }
    Ok(())
}
