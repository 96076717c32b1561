//! Gauss–Legendre quadrature: fixed rules, composite panels and adaptive
//! bisection, plus the [`Integral`] result type used by every weighted
//! functional in the crate.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Result of an improper integral: either a finite value with an error
/// bound (quadrature + truncation), or a certified divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integral {
    Finite { value: f64, error_bound: f64 },
    Infinite,
}

impl Integral {
    pub fn finite(value: f64, error_bound: f64) -> Self {
        Integral::Finite { value, error_bound }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Integral::Finite { value, .. } => Some(*value),
            Integral::Infinite => None,
        }
    }

    pub fn error_bound(&self) -> Option<f64> {
        match self {
            Integral::Finite { error_bound, .. } => Some(*error_bound),
            Integral::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Integral::Infinite)
    }

    /// Value, with `+∞` standing in for divergence.
    pub fn value_or_inf(&self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }

    pub fn scale(self, c: f64) -> Self {
        match self {
            Integral::Finite { value, error_bound } => Integral::Finite {
                value: c * value,
                error_bound: c.abs() * error_bound,
            },
            Integral::Infinite => Integral::Infinite,
        }
    }
}

impl std::ops::Add for Integral {
    type Output = Integral;

    fn add(self, rhs: Integral) -> Integral {
        match (self, rhs) {
            (
                Integral::Finite { value: a, error_bound: ea },
                Integral::Finite { value: b, error_bound: eb },
            ) => Integral::Finite {
                value: a + b,
                error_bound: ea + eb,
            },
            _ => Integral::Infinite,
        }
    }
}

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_n`, found by Newton iteration from the
    /// Chebyshev-like initial guesses `cos(π(i - 1/4)/(n + 1/2))`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f`.
    #[inline]
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// Composite rule on `n_panels` equal panels of `[a, b]`.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, n_panels: usize, mut f: F) -> f64 {
        let n_panels = n_panels.max(1);
        let h = (b - a) / n_panels as f64;
        (0..n_panels)
            .map(|k| {
                let lo = a + k as f64 * h;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Shared 20-point rule used by the solvers.
pub fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Shared 10-point rule.
pub fn gl10() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

/// Shared rule of the given order (cached for orders up to 32).
pub fn gauss_legendre(order: usize) -> &'static GaussLegendre {
    const MAX: usize = 32;
    static RULES: [OnceLock<GaussLegendre>; MAX] = [const { OnceLock::new() }; MAX];
    let order = order.clamp(1, MAX);
    RULES[order - 1].get_or_init(|| GaussLegendre::new(order))
}

/// Adaptive bisection: a panel is accepted once the 10-point and 20-point
/// rules agree to `tol` (scaled by the panel's share of the interval) or to
/// rounding level relative to the panel's value.
/// The first three levels are always bisected so that narrow features
/// missed by both rules on the whole interval are still seen.
/// Returns `(value, estimated_error)`.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> (f64, f64) {
        let coarse = gl10().integrate(a, b, f);
        let fine = gl20().integrate(a, b, f);
        let err = (fine - coarse).abs();
        let floor = 64.0 * f64::EPSILON * fine.abs();
        if (err <= tol.max(floor) && depth >= 3) || depth >= 48 {
            return (fine, err);
        }
        let mid = 0.5 * (a + b);
        let (l, el) = recurse(f, a, mid, 0.5 * tol, depth + 1);
        let (r, er) = recurse(f, mid, b, 0.5 * tol, depth + 1);
        (l + r, el + er)
    }
    if a == b {
        return (0.0, 0.0);
    }
    recurse(&f, a, b, tol, 0)
}

/// Adaptive integration over consecutive intervals between sorted
/// breakpoints.
pub fn adaptive_with_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: f64) -> (f64, f64) {
    let pieces = breaks.len().saturating_sub(1).max(1) as f64;
    breaks
        .windows(2)
        .map(|w| adaptive(&f, w[0], w[1], tol / pieces))
        .fold((0.0, 0.0), |(v, e), (dv, de)| (v + dv, e + de))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 10, 20, 33] {
            let s: f64 = GaussLegendre::new(n).weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(5);
        // ∫_0^2 x^9 dx = 2^10 / 10
        let v = rule.integrate(0.0, 2.0, |x| x.powi(9));
        assert!((v - 102.4).abs() < 1e-11);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let (v, _) = adaptive(|x| (-x * x / 1e-4).exp(), -1.0, 1.0, 1e-14);
        let exact = (PI * 1e-4).sqrt();
        assert!((v - exact).abs() < 1e-13, "{v} vs {exact}");
    }

    #[test]
    fn integral_arithmetic_propagates_divergence() {
        let a = Integral::finite(1.0, 1e-12);
        assert!((a + Integral::Infinite).is_infinite());
        let b = a.scale(-2.0);
        assert_eq!(b.value(), Some(-2.0));
        assert_eq!(b.error_bound(), Some(2e-12));
    }
}
