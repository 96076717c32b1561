//! The closed-form profiles F, E, the non-radial θ·F and the two-branch
//! profile of dimension one, with the hotspot and decay laws.

use cdh::profiles::{
    decay_descriptor, hotspot, profile_e, profile_f, profile_f1, profile_fn, AngularRange, EBehaviour,
};
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let d3 = Dimension::THREE;
    println!("{:>6} {:>12} {:>12}", "r", "F(r, 1)", "E(r, 1)");
    for r in [0.05, 0.2, 0.5, 1.0, 2.0, 4.0] {
        println!("{r:>6} {:>12.6} {:>12.6}", profile_f(r, 1.0, d3)?, profile_e(r, 1.0, d3, 2.0)?);
    }

    for t in [1.0, 4.0, 16.0] {
        let h = hotspot(t, d3)?;
        println!("t = {t:>4}: max F = {:.6} at r = {:.3e}", h.value, h.radius);
    }

    let range = AngularRange::default();
    let theta = 2.0;
    println!(
        "θ·F at θ = {theta}: {:.6} (= {theta} × {:.6})",
        profile_fn(0.5, theta, 1.0, d3, &range)?,
        profile_f(0.5, 1.0, d3)?
    );

    // two branches of weight 1/4 and 3/4
    for x in [-1.0, -0.3, 0.3, 1.0] {
        println!("F1({x:>4}, 1) = {:.6}", profile_f1(x, 1.0, 0.25)?);
    }

    for n in [1, 2, 3, 5] {
        let d = decay_descriptor(Dimension::new(n)?);
        let e = match d.e {
            EBehaviour::Limit(l) => format!("E → {l}"),
            EBehaviour::Decays(r) => format!("E ~ t^{} e^(-{} t)", r.power, r.exp_rate),
        };
        println!("N = {n}: F ~ t^{} e^(-{} t), {e}", d.f_rate.power, d.f_rate.exp_rate);
    }
    Ok(())
}
