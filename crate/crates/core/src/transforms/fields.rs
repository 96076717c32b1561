use crate::error::{Error, Result};
use crate::profiles::Dimension;
use crate::tridiag;

/// A function of the log coordinate `y` sampled on a strictly increasing
/// grid at a fixed time, with declared limits as `y → ±∞`.
///
/// Between nodes the field is a natural cubic spline; beyond the grid it
/// takes its tail values.
#[derive(Debug, Clone, PartialEq)]
pub struct LineField {
    grid: Vec<f64>,
    values: Vec<f64>,
    time: f64,
    tail_left: f64,
    tail_right: f64,
    second_derivs: Vec<f64>,
}

impl LineField {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, time: f64, tails: (f64, f64)) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::domain(format!(
                "grid has {} nodes but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.len() < 2 {
            return Err(Error::domain("a line field needs at least two nodes"));
        }
        check_strictly_increasing(&grid, "line field grid")?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("line field values must be finite"));
        }
        if !(tails.0.is_finite() && tails.1.is_finite()) {
            return Err(Error::domain("line field tails must be finite"));
        }
        if !(time >= 0.0 && time.is_finite()) {
            return Err(Error::domain(format!("invalid time {time}")));
        }
        let second_derivs = natural_spline(&grid, &values)?;
        Ok(LineField {
            grid,
            values,
            time,
            tail_left: tails.0,
            tail_right: tails.1,
            second_derivs,
        })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: Vec<f64>, time: f64, tails: (f64, f64), f: F) -> Result<Self> {
        let values = grid.iter().map(|&y| f(y)).collect();
        LineField::new(grid, values, time, tails)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn tail_left(&self) -> f64 {
        self.tail_left
    }

    pub fn tail_right(&self) -> f64 {
        self.tail_right
    }

    pub fn tails(&self) -> (f64, f64) {
        (self.tail_left, self.tail_right)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Same samples, different time stamp.
    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    fn cell(&self, y: f64) -> usize {
        match self.grid.binary_search_by(|g| g.partial_cmp(&y).unwrap()) {
            Ok(i) => i.min(self.grid.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.grid.len() - 2),
        }
    }

    /// Spline value at `y`; tail values outside the grid.
    pub fn eval(&self, y: f64) -> f64 {
        let n = self.grid.len();
        if y < self.grid[0] {
            return self.tail_left;
        }
        if y > self.grid[n - 1] {
            return self.tail_right;
        }
        let i = self.cell(y);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let a = (x1 - y) / h;
        let b = (y - x0) / h;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second_derivs[i] + (b * b * b - b) * self.second_derivs[i + 1]) * h * h
                / 6.0
    }

    /// Spline derivative at `y`; zero outside the grid.
    pub fn derivative(&self, y: f64) -> f64 {
        let n = self.grid.len();
        if y < self.grid[0] || y > self.grid[n - 1] {
            return 0.0;
        }
        let i = self.cell(y);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let a = (x1 - y) / h;
        let b = (y - x0) / h;
        (self.values[i + 1] - self.values[i]) / h
            + (-(3.0 * a * a - 1.0) * self.second_derivs[i] + (3.0 * b * b - 1.0) * self.second_derivs[i + 1]) * h
                / 6.0
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Grid node with the largest value.
    pub fn argmax(&self) -> (f64, f64) {
        let (i, v) = self
            .values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
        (self.grid[i], v)
    }

    /// Exact integral of the spline over the grid span.
    pub fn integral(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.grid.len() - 1 {
            let h = self.grid[i + 1] - self.grid[i];
            acc += 0.5 * h * (self.values[i] + self.values[i + 1])
                - h * h * h * (self.second_derivs[i] + self.second_derivs[i + 1]) / 24.0;
        }
        acc
    }

    /// Composite trapezoid `∫ weight(y)·g(value) dy` over the grid.
    pub fn trapezoid<W: Fn(f64, f64) -> f64>(&self, integrand: W) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(y, v)| 0.5 * (y[1] - y[0]) * (integrand(y[0], v[0]) + integrand(y[1], v[1])))
            .sum()
    }
}

/// A radial function `u(|x|)` sampled at increasing positive radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    radii: Vec<f64>,
    values: Vec<f64>,
    time: f64,
    dim: Dimension,
    origin_value: f64,
    outer_value: f64,
}

impl RadialField {
    pub fn new(
        radii: Vec<f64>,
        values: Vec<f64>,
        time: f64,
        dim: Dimension,
        origin_value: f64,
        outer_value: f64,
    ) -> Result<Self> {
        if radii.len() != values.len() {
            return Err(Error::domain(format!(
                "{} radii but {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii.is_empty() {
            return Err(Error::domain("radial field needs at least one radius"));
        }
        if radii[0] <= 0.0 {
            return Err(Error::domain("radii must be positive"));
        }
        check_strictly_increasing(&radii, "radii")?;
        if values.iter().any(|v| !v.is_finite()) || !origin_value.is_finite() || !outer_value.is_finite() {
            return Err(Error::domain("radial field values must be finite"));
        }
        Ok(RadialField {
            radii,
            values,
            time,
            dim,
            origin_value,
            outer_value,
        })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(
        radii: Vec<f64>,
        time: f64,
        dim: Dimension,
        limits: (f64, f64),
        f: F,
    ) -> Result<Self> {
        let values = radii.iter().map(|&r| f(r)).collect();
        RadialField::new(radii, values, time, dim, limits.0, limits.1)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn origin_value(&self) -> f64 {
        self.origin_value
    }

    pub fn outer_value(&self) -> f64 {
        self.outer_value
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every sample is nonnegative, as required of solutions.
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0) && self.origin_value >= 0.0
    }
}

pub(crate) fn check_strictly_increasing(xs: &[f64], what: &str) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain(format!("{what} must be finite")));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

/// Second derivatives of the natural cubic spline through `(xs, ys)`.
fn natural_spline(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return Ok(m);
    }
    let k = n - 2;
    let mut lower = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut upper = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for j in 0..k {
        let i = j + 1;
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        lower[j] = h0 / 6.0;
        diag[j] = (h0 + h1) / 3.0;
        upper[j] = h1 / 6.0;
        rhs[j] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
    }
    tridiag::solve(&lower, &diag, &upper, &mut rhs)?;
    m[1..n - 1].copy_from_slice(&rhs);
    Ok(m)
}

/// `n` equally spaced points on `[a, b]`, endpoints included.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "uniform grid needs two points");
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + i as f64 * h }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_cubic_interior_to_fourth_order() {
        let f = |y: f64| (0.7 * y).sin();
        let errs: Vec<f64> = [101usize, 201]
            .iter()
            .map(|&n| {
                let field = LineField::from_fn(uniform_grid(-3.0, 3.0, n), 0.0, (0.0, 0.0), f).unwrap();
                (0..200)
                    .map(|k| -1.0 + k as f64 * 0.01 + 0.0037)
                    .map(|y| (field.eval(y) - f(y)).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[1] < 1e-8);
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 3.5, "order {order}");
    }

    #[test]
    fn spline_integral_is_exact_for_the_interpolant() {
        let field = LineField::from_fn(uniform_grid(0.0, 2.0, 41), 0.0, (0.0, 0.0), |y| y * y).unwrap();
        let by_quadrature: f64 = field
            .grid()
            .windows(2)
            .map(|w| crate::quadrature::gl20().integrate(w[0], w[1], |y| field.eval(y)))
            .sum();
        assert!((field.integral() - by_quadrature).abs() < 1e-13);
        assert!((field.integral() - 8.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn tails_apply_outside_grid() {
        let field = LineField::new(vec![0.0, 1.0], vec![2.0, 0.0], 0.5, (2.0, 0.0)).unwrap();
        assert_eq!(field.eval(-5.0), 2.0);
        assert_eq!(field.eval(5.0), 0.0);
        assert!((field.eval(0.5) - 1.0).abs() < 1e-15);
        assert_eq!(field.derivative(3.0), 0.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(LineField::new(vec![0.0, 0.0], vec![1.0, 1.0], 0.0, (0.0, 0.0)).is_err());
        assert!(LineField::new(vec![0.0, 1.0], vec![1.0], 0.0, (0.0, 0.0)).is_err());
        assert!(LineField::new(vec![0.0, 1.0], vec![1.0, f64::NAN], 0.0, (0.0, 0.0)).is_err());
        let d = Dimension::THREE;
        assert!(RadialField::new(vec![0.0, 1.0], vec![1.0, 1.0], 0.0, d, 0.0, 0.0).is_err());
        assert!(RadialField::new(vec![2.0, 1.0], vec![1.0, 1.0], 0.0, d, 0.0, 0.0).is_err());
    }
}
