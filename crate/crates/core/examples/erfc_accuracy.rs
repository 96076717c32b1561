//! erfc against the quadrature of its defining integral.

use cdh::analysis::acceptance::{erfc_accuracy, erfc_oracle};
use cdh::profiles::erfc;

fn main() {
    for x in [-3.0, -0.5, 0.0, 0.5, 2.0, 5.0, 8.0] {
        let (a, b) = (erfc(x), erfc_oracle(x));
        println!("erfc({x:>4}) = {a:.17e}   oracle {b:.17e}   diff {:.1e}", (a - b).abs());
    }
    let check = erfc_accuracy(erfc).expect("oracle runs");
    println!("10⁴ points on [-8, 8]: {}", check.detail);

    fn off_by_a_little(x: f64) -> f64 {
        erfc(x) * (1.0 + 1e-9)
    }
    let broken = erfc_accuracy(off_by_a_little).expect("oracle runs");
    println!("perturbed erfc passes: {}", broken.passed);
}
