use crate::error::{Error, Result};
use crate::profiles::{erfc, Dimension};

use super::fields::{check_strictly_increasing, LineField};

/// Bound `|v(y) - tail| ≤ amplitude·exp(-rate·d)` at distance `d` beyond
/// the edge of a datum's core interval. `rate = ∞` means the datum equals
/// its tail exactly there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub amplitude: f64,
    pub rate: f64,
}

impl Envelope {
    pub const EXACT: Envelope = Envelope {
        amplitude: 0.0,
        rate: f64::INFINITY,
    };

    pub fn is_exact(&self) -> bool {
        self.amplitude == 0.0
    }

    /// `∫_0^∞ amplitude·e^{-rate·s} ds`.
    pub fn mass(&self) -> f64 {
        if self.is_exact() {
            0.0
        } else {
            self.amplitude / self.rate
        }
    }

    /// `∫_0^∞ (|edge| + s)³ amplitude·e^{-rate·s} ds`, the tail bound for
    /// the `|y|³` weight.
    pub fn cubic_moment(&self, edge: f64) -> f64 {
        if self.is_exact() {
            return 0.0;
        }
        let b = edge.abs();
        let l = self.rate;
        // Σ C(3,k) b^{3-k} k! / λ^{k+1}
        self.amplitude * (b.powi(3) / l + 3.0 * b * b / l.powi(2) + 6.0 * b / l.powi(3) + 6.0 / l.powi(4))
    }

    /// `∫_0^∞ e^{a(edge ± s)} amplitude·e^{-rate·s} ds` with `sign = +1` for
    /// the right tail and `-1` for the left; `None` if the weight wins.
    pub fn exp_weighted(&self, edge: f64, a: f64, sign: f64) -> Option<f64> {
        if self.is_exact() {
            return Some(0.0);
        }
        let decay = self.rate - sign * a;
        if decay <= 0.0 {
            return None;
        }
        Some(self.amplitude * (a * edge).exp() / decay)
    }
}

/// The core interval of a datum and the envelopes that bound it outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Core {
    pub lo: f64,
    pub hi: f64,
    pub left: Envelope,
    pub right: Envelope,
}

/// A function of `y` on the whole line with finite limits at `±∞`, as
/// consumed by the heat-kernel solver.
///
/// The solver splits `v = tail_left·H(y - s) + tail_right·(1 - H(y - s)) +
/// remainder`, evolves the step analytically and integrates the remainder
/// over the core interval.
pub trait LineDatum: Sync {
    fn value(&self, y: f64) -> f64;

    /// `(lim_{y→-∞} v, lim_{y→+∞} v)`.
    fn tails(&self) -> (f64, f64);

    /// Position `s` of the step separating the two tails.
    fn split_point(&self) -> f64;

    fn core(&self) -> Core;

    /// Points inside the core where the datum is not smooth (jumps, kinks,
    /// interpolation nodes). Need not be sorted.
    fn breakpoints(&self) -> Vec<f64>;

    /// Length over which the datum varies appreciably.
    fn feature_scale(&self) -> f64;

    /// Gauss–Legendre order used per panel.
    fn panel_order(&self) -> usize {
        20
    }

    /// Time stamp of the datum; fields carry their own, analytic data start
    /// at zero.
    fn time(&self) -> f64 {
        0.0
    }

    fn remainder(&self, y: f64) -> f64 {
        let (l, r) = self.tails();
        self.value(y) - if y < self.split_point() { l } else { r }
    }
}

/// Radial initial data `u₀(|x|)` described analytically, so that weighted
/// integrals and the heat-kernel convolution can be evaluated with
/// certified truncation.
///
/// All families are stated through `y = log r`, where `v₀(y) = u₀(e^y)`.
#[derive(Debug, Clone, PartialEq)]
pub enum DatumFamily {
    /// `height` on `r₁ ≤ r ≤ r₂`, zero elsewhere.
    AnnulusIndicator { r1: f64, r2: f64, height: f64 },
    /// `height·exp(-(y - center)²/(2 width²))`.
    GaussianBumpInY { center: f64, width: f64, height: f64 },
    /// `K / (1 + (r/transition_radius)^sharpness)`: `K` at the origin, decaying
    /// like `r^{-sharpness}` at infinity.
    StepToK { k: f64, transition_radius: f64, sharpness: f64 },
    /// `(K/2)·erfc(y - shift)`.
    SmoothErfcLike { k: f64, shift: f64 },
    /// Monotone cubic interpolation of samples in `y`, with declared limits.
    Tabulated(Tabulated),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialDatum {
    pub family: DatumFamily,
    pub dim: Dimension,
}

impl InitialDatum {
    pub fn new(family: DatumFamily, dim: Dimension) -> Result<Self> {
        family.validate()?;
        Ok(InitialDatum { family, dim })
    }

    pub fn annulus_indicator(r1: f64, r2: f64, height: f64, dim: Dimension) -> Result<Self> {
        Self::new(DatumFamily::AnnulusIndicator { r1, r2, height }, dim)
    }

    pub fn gaussian_bump(center: f64, width: f64, height: f64, dim: Dimension) -> Result<Self> {
        Self::new(DatumFamily::GaussianBumpInY { center, width, height }, dim)
    }

    pub fn step_to_k(k: f64, transition_radius: f64, sharpness: f64, dim: Dimension) -> Result<Self> {
        Self::new(
            DatumFamily::StepToK {
                k,
                transition_radius,
                sharpness,
            },
            dim,
        )
    }

    pub fn smooth_erfc_like(k: f64, shift: f64, dim: Dimension) -> Result<Self> {
        Self::new(DatumFamily::SmoothErfcLike { k, shift }, dim)
    }

    pub fn tabulated(table: Tabulated, dim: Dimension) -> Result<Self> {
        Self::new(DatumFamily::Tabulated(table), dim)
    }

    pub fn family_name(&self) -> &'static str {
        self.family.name()
    }

    /// `u₀(r)` for `r > 0`; `u₀(0)` is the left tail.
    pub fn value_at_radius(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return self.origin_value();
        }
        self.value(r.ln())
    }

    /// `u₀(0) = lim_{y→-∞} v₀(y)`.
    pub fn origin_value(&self) -> f64 {
        self.tails().0
    }

    /// `v₀'(y)` where classical; `None` for data with jumps.
    pub fn derivative_in_y(&self, y: f64) -> Option<f64> {
        match &self.family {
            DatumFamily::AnnulusIndicator { .. } => None,
            DatumFamily::GaussianBumpInY { center, width, height } => {
                let d = y - center;
                Some(-height * d / (width * width) * (-d * d / (2.0 * width * width)).exp())
            }
            DatumFamily::StepToK {
                k,
                transition_radius,
                sharpness,
            } => {
                let s = logistic(sharpness * (y - transition_radius.ln()));
                Some(-k * sharpness * s * (1.0 - s))
            }
            DatumFamily::SmoothErfcLike { k, shift } => {
                let d = y - shift;
                Some(-k / std::f64::consts::PI.sqrt() * (-d * d).exp())
            }
            DatumFamily::Tabulated(t) => {
                if t.has_jumps() {
                    None
                } else {
                    Some(t.derivative(y))
                }
            }
        }
    }

    /// Envelopes bounding `|v₀'|` outside the core, for data where
    /// [`derivative_in_y`](Self::derivative_in_y) is defined.
    pub fn derivative_envelopes(&self) -> Option<(Envelope, Envelope)> {
        let env = match &self.family {
            DatumFamily::AnnulusIndicator { .. } => return None,
            DatumFamily::Tabulated(t) => {
                if t.has_jumps() {
                    return None;
                }
                Envelope::EXACT
            }
            DatumFamily::GaussianBumpInY { width, height, .. } => {
                // (L+s)/w²·e^{-(L+s)²/2w²} ≤ (L + 2w²/L)/w²·e^{-L²/2w²}·e^{-Ls/2w²}
                let l = GAUSS_CORE_WIDTHS * width;
                let w2 = width * width;
                Envelope {
                    amplitude: height * (l + 2.0 * w2 / l) / w2 * (-l * l / (2.0 * w2)).exp(),
                    rate: l / (2.0 * w2),
                }
            }
            DatumFamily::StepToK { k, sharpness, .. } => Envelope {
                amplitude: k * sharpness * (-LOGISTIC_CORE).exp(),
                rate: *sharpness,
            },
            DatumFamily::SmoothErfcLike { k, .. } => Envelope {
                amplitude: k / std::f64::consts::PI.sqrt() * (-ERFC_CORE * ERFC_CORE).exp(),
                rate: 2.0 * ERFC_CORE,
            },
        };
        Some((env, env))
    }

    /// Samples `v₀` on `grid` as a [`LineField`] at time zero.
    pub fn sample_line(&self, grid: Vec<f64>) -> Result<LineField> {
        LineField::from_fn(grid, 0.0, self.tails(), |y| self.value(y))
    }
}

impl DatumFamily {
    pub fn name(&self) -> &'static str {
        match self {
            DatumFamily::AnnulusIndicator { .. } => "annulus_indicator",
            DatumFamily::GaussianBumpInY { .. } => "gaussian_bump_in_y",
            DatumFamily::StepToK { .. } => "step_to_K",
            DatumFamily::SmoothErfcLike { .. } => "smooth_erfc_like",
            DatumFamily::Tabulated(_) => "tabulated",
        }
    }

    fn validate(&self) -> Result<()> {
        let finite_nonneg = |x: f64, what: &str| {
            if x >= 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{what} must be finite and nonnegative, got {x}")))
            }
        };
        let positive = |x: f64, what: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{what} must be positive, got {x}")))
            }
        };
        match self {
            DatumFamily::AnnulusIndicator { r1, r2, height } => {
                positive(*r1, "r1")?;
                positive(*r2, "r2")?;
                if r2 <= r1 {
                    return Err(Error::domain(format!("annulus needs r1 < r2, got [{r1}, {r2}]")));
                }
                finite_nonneg(*height, "height")
            }
            DatumFamily::GaussianBumpInY { center, width, height } => {
                if !center.is_finite() {
                    return Err(Error::domain("center must be finite"));
                }
                positive(*width, "width")?;
                finite_nonneg(*height, "height")
            }
            DatumFamily::StepToK {
                k,
                transition_radius,
                sharpness,
            } => {
                positive(*k, "K")?;
                positive(*transition_radius, "transition_radius")?;
                positive(*sharpness, "sharpness")
            }
            DatumFamily::SmoothErfcLike { k, shift } => {
                positive(*k, "K")?;
                if shift.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain("shift must be finite"))
                }
            }
            DatumFamily::Tabulated(t) => t.validate(),
        }
    }
}

#[inline]
fn logistic(x: f64) -> f64 {
    // 1/(1 + e^{-x}), evaluated without overflow on either side
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Distance beyond which the smooth families are replaced by their
/// exponential envelopes.
const GAUSS_CORE_WIDTHS: f64 = 16.0;
const ERFC_CORE: f64 = 8.0;
const LOGISTIC_CORE: f64 = 40.0;

impl LineDatum for InitialDatum {
    fn value(&self, y: f64) -> f64 {
        match &self.family {
            DatumFamily::AnnulusIndicator { r1, r2, height } => {
                if y >= r1.ln() && y <= r2.ln() {
                    *height
                } else {
                    0.0
                }
            }
            DatumFamily::GaussianBumpInY { center, width, height } => {
                let d = y - center;
                height * (-d * d / (2.0 * width * width)).exp()
            }
            DatumFamily::StepToK {
                k,
                transition_radius,
                sharpness,
            } => k * logistic(-sharpness * (y - transition_radius.ln())),
            DatumFamily::SmoothErfcLike { k, shift } => 0.5 * k * erfc(y - shift),
            DatumFamily::Tabulated(t) => t.value(y),
        }
    }

    fn tails(&self) -> (f64, f64) {
        match &self.family {
            DatumFamily::AnnulusIndicator { .. } | DatumFamily::GaussianBumpInY { .. } => (0.0, 0.0),
            DatumFamily::StepToK { k, .. } | DatumFamily::SmoothErfcLike { k, .. } => (*k, 0.0),
            DatumFamily::Tabulated(t) => (t.tail_left, t.tail_right),
        }
    }

    fn split_point(&self) -> f64 {
        match &self.family {
            DatumFamily::StepToK { transition_radius, .. } => transition_radius.ln(),
            DatumFamily::SmoothErfcLike { shift, .. } => *shift,
            DatumFamily::Tabulated(t) => t.ys[0],
            _ => 0.0,
        }
    }

    fn core(&self) -> Core {
        match &self.family {
            DatumFamily::AnnulusIndicator { r1, r2, .. } => Core {
                lo: r1.ln(),
                hi: r2.ln(),
                left: Envelope::EXACT,
                right: Envelope::EXACT,
            },
            DatumFamily::GaussianBumpInY { center, width, height } => {
                // e^{-(L+s)²/2w²} ≤ e^{-L²/2w²}·e^{-L s/w²}
                let l = GAUSS_CORE_WIDTHS * width;
                let env = Envelope {
                    amplitude: height * (-l * l / (2.0 * width * width)).exp(),
                    rate: l / (width * width),
                };
                Core {
                    lo: center - l,
                    hi: center + l,
                    left: env,
                    right: env,
                }
            }
            DatumFamily::StepToK {
                k,
                transition_radius,
                sharpness,
            } => {
                // K/(1 + e^{p d}) ≤ K e^{-p d}
                let l = LOGISTIC_CORE / sharpness;
                let c = transition_radius.ln();
                let env = Envelope {
                    amplitude: k * (-LOGISTIC_CORE).exp(),
                    rate: *sharpness,
                };
                Core {
                    lo: c - l,
                    hi: c + l,
                    left: env,
                    right: env,
                }
            }
            DatumFamily::SmoothErfcLike { k, shift } => {
                // erfc(L + s) ≤ e^{-(L+s)²} ≤ e^{-L²} e^{-2Ls}
                let env = Envelope {
                    amplitude: 0.5 * k * (-ERFC_CORE * ERFC_CORE).exp(),
                    rate: 2.0 * ERFC_CORE,
                };
                Core {
                    lo: shift - ERFC_CORE,
                    hi: shift + ERFC_CORE,
                    left: env,
                    right: env,
                }
            }
            DatumFamily::Tabulated(t) => Core {
                lo: t.ys[0],
                hi: *t.ys.last().unwrap(),
                left: Envelope::EXACT,
                right: Envelope::EXACT,
            },
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match &self.family {
            DatumFamily::AnnulusIndicator { r1, r2, .. } => vec![r1.ln(), r2.ln()],
            DatumFamily::Tabulated(t) => t.ys.clone(),
            _ => vec![self.split_point()],
        }
    }

    fn feature_scale(&self) -> f64 {
        match &self.family {
            DatumFamily::AnnulusIndicator { r1, r2, .. } => (r2.ln() - r1.ln()).max(1e-3),
            DatumFamily::GaussianBumpInY { width, .. } => *width,
            DatumFamily::StepToK { sharpness, .. } => 1.0 / sharpness,
            DatumFamily::SmoothErfcLike { .. } => 0.5,
            DatumFamily::Tabulated(t) => t.min_spacing(),
        }
    }

    fn panel_order(&self) -> usize {
        match &self.family {
            DatumFamily::Tabulated(_) => 8,
            _ => 20,
        }
    }
}

/// Samples `(r_k, u₀(r_k))` interpolated monotonically (Fritsch–Carlson) in
/// `y = log r`; beyond the first and last radius the datum takes the
/// declared limits.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    radii: Vec<f64>,
    values: Vec<f64>,
    tail_left: f64,
    tail_right: f64,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl Tabulated {
    pub fn new(radii: Vec<f64>, values: Vec<f64>, tail_left: f64, tail_right: f64) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::domain("tabulated datum needs at least two (radius, value) samples"));
        }
        if radii[0] <= 0.0 {
            return Err(Error::domain("tabulated radii must be positive"));
        }
        check_strictly_increasing(&radii, "tabulated radii")?;
        let ys: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let slopes = fritsch_carlson_slopes(&ys, &values);
        let t = Tabulated {
            radii,
            values,
            tail_left,
            tail_right,
            ys,
            slopes,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if self.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::domain("tabulated values must be finite and nonnegative"));
        }
        if !(self.tail_left.is_finite() && self.tail_left >= 0.0 && self.tail_right.is_finite() && self.tail_right >= 0.0)
        {
            return Err(Error::domain("tabulated tails must be finite and nonnegative"));
        }
        Ok(())
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tails(&self) -> (f64, f64) {
        (self.tail_left, self.tail_right)
    }

    /// Whether the table ends disagree with the declared limits.
    pub fn has_jumps(&self) -> bool {
        self.values[0] != self.tail_left || *self.values.last().unwrap() != self.tail_right
    }

    fn min_spacing(&self) -> f64 {
        self.ys.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    fn locate(&self, y: f64) -> Option<usize> {
        let n = self.ys.len();
        if y < self.ys[0] || y > self.ys[n - 1] {
            return None;
        }
        let i = match self.ys.binary_search_by(|g| g.partial_cmp(&y).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Some(i.min(n - 2))
    }

    pub fn value(&self, y: f64) -> f64 {
        match self.locate(y) {
            None if y < self.ys[0] => self.tail_left,
            None => self.tail_right,
            Some(i) => {
                let h = self.ys[i + 1] - self.ys[i];
                let s = (y - self.ys[i]) / h;
                let (h00, h10, h01, h11) = hermite_basis(s);
                h00 * self.values[i] + h10 * h * self.slopes[i] + h01 * self.values[i + 1] + h11 * h * self.slopes[i + 1]
            }
        }
    }

    pub fn derivative(&self, y: f64) -> f64 {
        match self.locate(y) {
            None => 0.0,
            Some(i) => {
                let h = self.ys[i + 1] - self.ys[i];
                let s = (y - self.ys[i]) / h;
                let d00 = 6.0 * s * s - 6.0 * s;
                let d10 = 3.0 * s * s - 4.0 * s + 1.0;
                let d01 = -6.0 * s * s + 6.0 * s;
                let d11 = 3.0 * s * s - 2.0 * s;
                (d00 * self.values[i] + d01 * self.values[i + 1]) / h
                    + d10 * self.slopes[i]
                    + d11 * self.slopes[i + 1]
            }
        }
    }
}

#[inline]
fn hermite_basis(s: f64) -> (f64, f64, f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    (
        2.0 * s3 - 3.0 * s2 + 1.0,
        s3 - 2.0 * s2 + s,
        -2.0 * s3 + 3.0 * s2,
        s3 - s2,
    )
}

/// Fritsch–Carlson slopes: secant averages, zeroed at local extrema and
/// limited so each cubic piece stays monotone.
fn fritsch_carlson_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        m[i] = if delta[i - 1] * delta[i] <= 0.0 {
            0.0
        } else {
            0.5 * (delta[i - 1] + delta[i])
        };
    }
    for i in 0..n - 1 {
        if delta[i] == 0.0 {
            m[i] = 0.0;
            m[i + 1] = 0.0;
            continue;
        }
        let a = m[i] / delta[i];
        let b = m[i + 1] / delta[i];
        let s = a * a + b * b;
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            m[i] = tau * a * delta[i];
            m[i + 1] = tau * b * delta[i];
        }
    }
    m
}

/// `LineField` viewed as a kernel-solver datum: spline between nodes,
/// tails beyond.
impl LineDatum for LineField {
    fn value(&self, y: f64) -> f64 {
        self.eval(y)
    }

    fn tails(&self) -> (f64, f64) {
        LineField::tails(self)
    }

    fn split_point(&self) -> f64 {
        self.grid()[0]
    }

    fn core(&self) -> Core {
        Core {
            lo: self.grid()[0],
            hi: *self.grid().last().unwrap(),
            left: Envelope::EXACT,
            right: Envelope::EXACT,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.grid().to_vec()
    }

    fn feature_scale(&self) -> f64 {
        self.grid().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    fn panel_order(&self) -> usize {
        6
    }

    fn time(&self) -> f64 {
        LineField::time(self)
    }
}

/// Initial data on the real line in `N = 1`, where the origin splits the
/// line into two independent half-lines. Each branch is a datum in `|x|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBranchDatum {
    pub left: InitialDatum,
    pub right: InitialDatum,
}

impl TwoBranchDatum {
    pub fn new(left: InitialDatum, right: InitialDatum) -> Result<Self> {
        if left.dim != Dimension::ONE || right.dim != Dimension::ONE {
            return Err(Error::domain("two-branch data live in dimension N = 1"));
        }
        Ok(TwoBranchDatum { left, right })
    }

    /// `u₀(x)`: left branch at `|x|` for `x < 0`, right branch for `x > 0`.
    pub fn value(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.left.value_at_radius(-x)
        } else if x > 0.0 {
            self.right.value_at_radius(x)
        } else {
            0.0
        }
    }
}
