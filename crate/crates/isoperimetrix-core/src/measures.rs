//! One-dimensional probability measures: density `exp(-psi)`, CDF, quantile,
//! median, and a log-concavity certificate.
//!
//! Built-in families (gaussian, two-sided exponential, `exp(-|x|^alpha)`,
//! uniform, the cusp counterexample `|x|^alpha` on [-1,1]) carry closed-form
//! kernels where available; grid-specified measures use a piecewise
//! log-linear density, which keeps cell masses, quantiles and the inverse
//! density integrals in closed form per cell.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::numerics::{self, QuadratureConfig};

/// Outcome of the log-concavity check run at build time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogConcavity {
    /// Finite-difference second derivative of psi >= -1e-6 on the sample grid.
    Verified,
    /// Violated near the recorded abscissa.
    ViolatedAt(f64),
    /// Not checked.
    Unchecked,
}

impl LogConcavity {
    pub fn is_verified(&self) -> bool {
        matches!(self, LogConcavity::Verified)
    }
}

/// A parsed measure family token.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// Standard normal.
    Gaussian,
    /// Two-sided exponential, density `exp(-|x|)/2`.
    Exponential,
    /// `Z_alpha^-1 exp(-|x|^alpha)`, `alpha > 0`.
    ExpAlpha { alpha: f64 },
    /// Uniform on `[a, b]`.
    Uniform { a: f64, b: f64 },
    /// `(1+alpha)/2 |x|^alpha` on `[-1, 1]`; not log-concave for `alpha > 0`.
    Cusp { alpha: f64 },
    /// Potential grid: knots carry `psi` values (density `exp(-psi)`).
    PotentialGrid { name: String, x: Vec<f64>, psi: Vec<f64> },
    /// Density grid: knots carry strictly positive density values.
    DensityGrid { name: String, x: Vec<f64>, rho: Vec<f64> },
}

/// Result of parsing one measure token; grid variants need file contents the
/// caller must supply.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedMeasure {
    Spec(MeasureSpec),
    /// `potential-grid:<path>`: caller loads the file and calls
    /// [`MeasureSpec::potential_grid`].
    PotentialGridFile { path: String },
    /// `density-grid:<path>`: caller loads the file and calls
    /// [`MeasureSpec::density_grid`].
    DensityGridFile { path: String },
}

impl MeasureSpec {
    /// Parse the measure grammar:
    /// `gaussian | exponential | exp_alpha:a | uniform:a,b | cusp:a |
    /// potential-grid:file | density-grid:file`.
    pub fn parse(token: &str) -> Result<ParsedMeasure> {
        let bad = |detail: String| Error::InvalidParameter { detail };
        let t = token.trim();
        if t == "gaussian" {
            return Ok(ParsedMeasure::Spec(MeasureSpec::Gaussian));
        }
        if t == "exponential" {
            return Ok(ParsedMeasure::Spec(MeasureSpec::Exponential));
        }
        if let Some(rest) = t.strip_prefix("exp_alpha:") {
            let alpha: f64 = rest
                .parse()
                .map_err(|_| bad(format!("bad exp_alpha parameter `{rest}`")))?;
            if !(alpha > 0.0) {
                return Err(bad(format!("exp_alpha needs alpha > 0, got {alpha}")));
            }
            return Ok(ParsedMeasure::Spec(MeasureSpec::ExpAlpha { alpha }));
        }
        if let Some(rest) = t.strip_prefix("uniform:") {
            let mut it = rest.splitn(2, ',');
            let a: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| bad(format!("bad uniform bounds `{rest}`")))?;
            let b: f64 = it
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| bad(format!("bad uniform bounds `{rest}`")))?;
            if !(b > a) {
                return Err(bad(format!("uniform needs a < b, got {a}, {b}")));
            }
            return Ok(ParsedMeasure::Spec(MeasureSpec::Uniform { a, b }));
        }
        if let Some(rest) = t.strip_prefix("cusp:") {
            let alpha: f64 = rest
                .parse()
                .map_err(|_| bad(format!("bad cusp parameter `{rest}`")))?;
            if !(alpha > 0.0) {
                return Err(bad(format!("cusp needs alpha > 0, got {alpha}")));
            }
            return Ok(ParsedMeasure::Spec(MeasureSpec::Cusp { alpha }));
        }
        if let Some(path) = t.strip_prefix("potential-grid:") {
            return Ok(ParsedMeasure::PotentialGridFile { path: path.to_string() });
        }
        if let Some(path) = t.strip_prefix("density-grid:") {
            return Ok(ParsedMeasure::DensityGridFile { path: path.to_string() });
        }
        Err(bad(format!("unknown measure `{t}`")))
    }

    /// Grid of potential values; at least 8 strictly increasing knots.
    pub fn potential_grid(name: &str, x: Vec<f64>, psi: Vec<f64>) -> Result<MeasureSpec> {
        validate_grid(&x, &psi, 8)?;
        Ok(MeasureSpec::PotentialGrid { name: name.to_string(), x, psi })
    }

    /// Grid of density values; at least 8 strictly increasing knots, all
    /// values strictly positive.
    pub fn density_grid(name: &str, x: Vec<f64>, rho: Vec<f64>) -> Result<MeasureSpec> {
        validate_grid(&x, &rho, 8)?;
        if let Some(&v) = rho.iter().find(|v| !(**v > 0.0)) {
            return Err(Error::BadGrid { detail: format!("non-positive density value {v}") });
        }
        Ok(MeasureSpec::DensityGrid { name: name.to_string(), x, rho })
    }

    /// Canonical token for reports.
    pub fn describe(&self) -> String {
        match self {
            MeasureSpec::Gaussian => "gaussian".to_string(),
            MeasureSpec::Exponential => "exponential".to_string(),
            MeasureSpec::ExpAlpha { alpha } => format!("exp_alpha:{alpha}"),
            MeasureSpec::Uniform { a, b } => format!("uniform:{a},{b}"),
            MeasureSpec::Cusp { alpha } => format!("cusp:{alpha}"),
            MeasureSpec::PotentialGrid { name, .. } => format!("potential-grid:{name}"),
            MeasureSpec::DensityGrid { name, .. } => format!("density-grid:{name}"),
        }
    }
}

fn validate_grid(x: &[f64], v: &[f64], min_rows: usize) -> Result<()> {
    if x.len() != v.len() {
        return Err(Error::BadGrid {
            detail: format!("{} x values vs {} ordinates", x.len(), v.len()),
        });
    }
    if x.len() < min_rows {
        return Err(Error::BadGrid {
            detail: format!("need at least {min_rows} rows, got {}", x.len()),
        });
    }
    for w in x.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::BadGrid {
                detail: format!("x not strictly increasing at {}", w[0]),
            });
        }
    }
    if x.iter().chain(v.iter()).any(|t| !t.is_finite()) {
        return Err(Error::BadGrid { detail: "non-finite entries".to_string() });
    }
    Ok(())
}

/// Piecewise log-linear density on a knot grid, with optional exponential
/// tails continuing the edge slopes.
#[derive(Debug, Clone)]
struct GridDensity {
    x: Vec<f64>,
    /// Normalized potential at the knots.
    psi: Vec<f64>,
    /// CDF at the knots (cdf[0] = left tail mass).
    cdf: Vec<f64>,
    /// Upper-tail masses at the knots, accumulated from the right so deep
    /// upper quantiles keep full relative precision.
    sf: Vec<f64>,
    /// Slope of psi going left from x[0] (> 0 means a decaying tail exists).
    left_slope: f64,
    /// Slope of psi going right from the last knot.
    right_slope: f64,
}

/// Mass of one log-linear cell: integral of `exp(-psi)` with psi linear from
/// `p0` to `p1` over width `dx`.
fn cell_mass(p0: f64, p1: f64, dx: f64) -> f64 {
    let dpsi = p1 - p0;
    if math::fabs(dpsi) < 1e-12 {
        dx * math::exp(-0.5 * (p0 + p1))
    } else {
        dx * math::exp(-p0) * (-math::expm1(-dpsi)) / dpsi
    }
}

impl GridDensity {
    fn build(x: Vec<f64>, raw_psi: Vec<f64>) -> Result<GridDensity> {
        let n = x.len();
        let left_slope = (raw_psi[0] - raw_psi[1]) / (x[1] - x[0]);
        let right_slope = (raw_psi[n - 1] - raw_psi[n - 2]) / (x[n - 1] - x[n - 2]);

        let left_mass = if left_slope > 0.0 { math::exp(-raw_psi[0]) / left_slope } else { 0.0 };
        let right_mass =
            if right_slope > 0.0 { math::exp(-raw_psi[n - 1]) / right_slope } else { 0.0 };

        let mut cdf = Vec::with_capacity(n);
        cdf.push(left_mass);
        for i in 1..n {
            let m = cell_mass(raw_psi[i - 1], raw_psi[i], x[i] - x[i - 1]);
            let prev = cdf[i - 1];
            cdf.push(prev + m);
        }
        let mut sf = alloc::vec![0.0f64; n];
        sf[n - 1] = right_mass;
        for i in (0..n - 1).rev() {
            sf[i] = sf[i + 1] + cell_mass(raw_psi[i], raw_psi[i + 1], x[i + 1] - x[i]);
        }
        let total = cdf[n - 1] + right_mass;
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::NonNormalizable {
                detail: format!("grid density integral = {total}"),
            });
        }
        // silent renormalization
        let log_total = math::log(total);
        let psi: Vec<f64> = raw_psi.iter().map(|p| p + log_total).collect();
        for c in cdf.iter_mut() {
            *c /= total;
        }
        for s in sf.iter_mut() {
            *s /= total;
        }
        Ok(GridDensity { x, psi, cdf, sf, left_slope, right_slope })
    }

    fn support(&self) -> (f64, f64) {
        let lo = if self.left_slope > 0.0 { f64::NEG_INFINITY } else { self.x[0] };
        let hi =
            if self.right_slope > 0.0 { f64::INFINITY } else { *self.x.last().unwrap() };
        (lo, hi)
    }

    fn log_density(&self, xq: f64) -> f64 {
        let n = self.x.len();
        if xq < self.x[0] {
            return if self.left_slope > 0.0 {
                self.psi[0] + self.left_slope * (self.x[0] - xq)
            } else {
                f64::INFINITY
            };
        }
        if xq > self.x[n - 1] {
            return if self.right_slope > 0.0 {
                self.psi[n - 1] + self.right_slope * (xq - self.x[n - 1])
            } else {
                f64::INFINITY
            };
        }
        let i = match self.x.partition_point(|&k| k <= xq) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let w = (xq - self.x[i]) / (self.x[i + 1] - self.x[i]);
        self.psi[i] + w * (self.psi[i + 1] - self.psi[i])
    }

    fn cdf(&self, xq: f64) -> f64 {
        let n = self.x.len();
        if xq <= self.x[0] {
            return if self.left_slope > 0.0 {
                self.cdf[0] * math::exp(-self.left_slope * (self.x[0] - xq))
            } else {
                0.0
            };
        }
        if xq >= self.x[n - 1] {
            let tail = 1.0 - self.cdf[n - 1];
            return if self.right_slope > 0.0 {
                1.0 - tail * math::exp(-self.right_slope * (xq - self.x[n - 1]))
            } else {
                1.0
            };
        }
        let i = match self.x.partition_point(|&k| k <= xq) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let dx = self.x[i + 1] - self.x[i];
        let w = xq - self.x[i];
        let slope = (self.psi[i + 1] - self.psi[i]) / dx;
        let partial = if math::fabs(slope) < 1e-300 {
            math::exp(-self.psi[i]) * w
        } else {
            math::exp(-self.psi[i]) * (-math::expm1(-slope * w)) / slope
        };
        (self.cdf[i] + partial).min(1.0)
    }

    fn quantile(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.cdf[0] {
            // left tail: mass below x is cdf[0] * exp(-s (x0 - x))
            if self.left_slope > 0.0 && t > 0.0 {
                return self.x[0] + math::log(t / self.cdf[0]) / self.left_slope;
            }
            return self.x[0];
        }
        let top = self.cdf[n - 1];
        if t >= top {
            let tail = 1.0 - top;
            if self.right_slope > 0.0 && t < 1.0 && tail > 0.0 {
                return self.x[n - 1] - math::log((1.0 - t) / tail) / self.right_slope;
            }
            return self.x[n - 1];
        }
        let i = match self.cdf.partition_point(|&c| c <= t) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let need = t - self.cdf[i];
        let dx = self.x[i + 1] - self.x[i];
        let slope = (self.psi[i + 1] - self.psi[i]) / dx;
        let rho0 = math::exp(-self.psi[i]);
        let w = if math::fabs(slope) < 1e-300 {
            need / rho0
        } else {
            let arg = -need * slope / rho0;
            // need = rho0 (1 - exp(-slope w)) / slope  =>  w = -log1p(arg)/slope
            if arg > -1.0 {
                -math::log1p(arg) / slope
            } else {
                dx
            }
        };
        self.x[i] + w.clamp(0.0, dx)
    }

    /// Abscissa whose upper-tail mass is `s`, driven by the right-accumulated
    /// suffix masses (no `1 - s` cancellation).
    fn quantile_upper(&self, s: f64) -> f64 {
        let n = self.x.len();
        if s <= self.sf[n - 1] {
            if self.right_slope > 0.0 && s > 0.0 {
                return self.x[n - 1] + math::log(self.sf[n - 1] / s) / self.right_slope;
            }
            return self.x[n - 1];
        }
        if s >= self.sf[0] {
            // deep in the left tail: the complement is small there, so the
            // forward quantile keeps precision
            return self.quantile(1.0 - s);
        }
        let idx = self.sf.partition_point(|v| *v >= s);
        let i = idx.saturating_sub(1).min(n - 2);
        let need = s - self.sf[i + 1];
        let dx = self.x[i + 1] - self.x[i];
        let slope_back = (self.psi[i] - self.psi[i + 1]) / dx;
        let rho1 = math::exp(-self.psi[i + 1]);
        let u = if math::fabs(slope_back) < 1e-300 {
            need / rho1
        } else {
            let arg = -need * slope_back / rho1;
            if arg > -1.0 {
                -math::log1p(arg) / slope_back
            } else {
                dx
            }
        };
        self.x[i + 1] - u.clamp(0.0, dx)
    }

    /// Exact integral of `rho^(-e)` over `[a, b]` (log-linear cells mean the
    /// integrand is again exponential in each cell).
    fn inv_density_integral(&self, a: f64, b: f64, e: f64) -> f64 {
        let mut acc = 0.0f64;
        let n = self.x.len();
        let mut seg = |lo: f64, hi: f64, p_lo: f64, slope: f64| {
            // integral of exp(e * (p_lo + slope (x - lo))) over [lo, hi]
            let width = hi - lo;
            if width <= 0.0 {
                return;
            }
            let s = e * slope;
            let base = math::exp(e * p_lo);
            acc += if math::fabs(s * width) < 1e-12 {
                base * width * math::exp(0.5 * s * width)
            } else {
                base * (math::exp(s * width) - 1.0) / s
            };
        };
        // left tail part
        if a < self.x[0] {
            let hi = b.min(self.x[0]);
            if self.left_slope > 0.0 {
                // psi increases leftwards: psi(x) = psi0 + sL (x0 - x)
                // in "seg" orientation from a: p(a) and slope -sL going right
                let p_a = self.psi[0] + self.left_slope * (self.x[0] - a);
                seg(a, hi, p_a, -self.left_slope);
            } else {
                return f64::INFINITY; // rho = 0 off support
            }
        }
        for i in 0..n - 1 {
            let lo = a.max(self.x[i]);
            let hi = b.min(self.x[i + 1]);
            if hi > lo {
                let slope = (self.psi[i + 1] - self.psi[i]) / (self.x[i + 1] - self.x[i]);
                let p_lo = self.psi[i] + slope * (lo - self.x[i]);
                seg(lo, hi, p_lo, slope);
            }
        }
        if b > self.x[n - 1] {
            let lo = a.max(self.x[n - 1]);
            if self.right_slope > 0.0 {
                let p_lo = self.psi[n - 1] + self.right_slope * (lo - self.x[n - 1]);
                seg(lo, b, p_lo, self.right_slope);
            } else {
                return f64::INFINITY;
            }
        }
        acc
    }
}

#[derive(Debug, Clone)]
enum Kernel {
    Gaussian,
    Exponential,
    /// `exp(-|x|^alpha) / z`; `z = 2 Gamma(1 + 1/alpha)`.
    ExpAlpha { alpha: f64, z: f64 },
    Uniform { a: f64, b: f64 },
    Cusp { alpha: f64 },
    Grid(GridDensity),
}

/// An absolutely continuous probability measure on the line.
///
/// Immutable after build; all evaluation methods are pure.
#[derive(Debug, Clone)]
pub struct Measure1D {
    kernel: Kernel,
    support: (f64, f64),
    is_even: bool,
    log_concavity: LogConcavity,
    desc: String,
    cfg: QuadratureConfig,
}

/// Tolerance on the finite-difference second derivative of psi.
pub const LOG_CONCAVITY_SLACK: f64 = 1e-6;

impl Measure1D {
    /// Build a measure from a parsed spec; normalization, evenness and the
    /// log-concavity certificate are established here.
    pub fn build(spec: &MeasureSpec) -> Result<Measure1D> {
        Self::build_with(spec, &QuadratureConfig::default())
    }

    pub fn build_with(spec: &MeasureSpec, cfg: &QuadratureConfig) -> Result<Measure1D> {
        cfg.validate()?;
        let desc = spec.describe();
        let (kernel, support, is_even) = match spec {
            MeasureSpec::Gaussian => {
                (Kernel::Gaussian, (f64::NEG_INFINITY, f64::INFINITY), true)
            }
            MeasureSpec::Exponential => {
                (Kernel::Exponential, (f64::NEG_INFINITY, f64::INFINITY), true)
            }
            MeasureSpec::ExpAlpha { alpha } => {
                let z = 2.0 * math::tgamma(1.0 + 1.0 / alpha);
                if !z.is_finite() {
                    return Err(Error::NonNormalizable {
                        detail: format!("normalization for alpha = {alpha} not finite"),
                    });
                }
                (
                    Kernel::ExpAlpha { alpha: *alpha, z },
                    (f64::NEG_INFINITY, f64::INFINITY),
                    true,
                )
            }
            MeasureSpec::Uniform { a, b } => {
                (Kernel::Uniform { a: *a, b: *b }, (*a, *b), *a == -*b)
            }
            MeasureSpec::Cusp { alpha } => (Kernel::Cusp { alpha: *alpha }, (-1.0, 1.0), true),
            MeasureSpec::PotentialGrid { x, psi, .. } => {
                let g = GridDensity::build(x.clone(), psi.clone())?;
                let support = g.support();
                (Kernel::Grid(g), support, false)
            }
            MeasureSpec::DensityGrid { x, rho, .. } => {
                let psi: Vec<f64> = rho.iter().map(|r| -math::log(*r)).collect();
                let g = GridDensity::build(x.clone(), psi)?;
                let support = g.support();
                (Kernel::Grid(g), support, false)
            }
        };
        let mut m = Measure1D {
            kernel,
            support,
            is_even,
            log_concavity: LogConcavity::Unchecked,
            desc,
            cfg: cfg.clone(),
        };
        if let Kernel::Grid(_) = m.kernel {
            m.is_even = m.check_even();
        }
        m.log_concavity = m.check_log_concavity();
        Ok(m)
    }

    /// Build directly from a potential grid already in memory (used by the
    /// profile-to-measure correspondence; no minimum row count).
    pub fn from_log_density_grid(x: Vec<f64>, psi: Vec<f64>, desc: &str) -> Result<Measure1D> {
        validate_grid(&x, &psi, 2)?;
        let g = GridDensity::build(x, psi)?;
        let support = g.support();
        let mut m = Measure1D {
            kernel: Kernel::Grid(g),
            support,
            is_even: false,
            log_concavity: LogConcavity::Unchecked,
            desc: desc.to_string(),
            cfg: QuadratureConfig::default(),
        };
        m.is_even = m.check_even();
        m.log_concavity = m.check_log_concavity();
        Ok(m)
    }

    pub fn describe(&self) -> &str {
        &self.desc
    }

    /// Closed support interval (possibly unbounded).
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn is_even(&self) -> bool {
        self.is_even
    }

    pub fn log_concavity(&self) -> LogConcavity {
        self.log_concavity
    }

    /// Potential `psi(x)`; `+inf` off the closed support.
    pub fn log_density(&self, x: f64) -> f64 {
        if x < self.support.0 || x > self.support.1 {
            return f64::INFINITY;
        }
        match &self.kernel {
            Kernel::Gaussian => 0.5 * x * x + math::HALF_LN_TWO_PI,
            Kernel::Exponential => math::fabs(x) + core::f64::consts::LN_2,
            Kernel::ExpAlpha { alpha, z } => math::pow(math::fabs(x), *alpha) + math::log(*z),
            Kernel::Uniform { a, b } => math::log(b - a),
            Kernel::Cusp { alpha } => {
                -alpha * math::log(math::fabs(x)) - math::log((1.0 + alpha) / 2.0)
            }
            Kernel::Grid(g) => g.log_density(x),
        }
    }

    /// Density `exp(-psi(x))`.
    pub fn density(&self, x: f64) -> f64 {
        let p = self.log_density(x);
        if p.is_infinite() {
            0.0
        } else {
            math::exp(-p)
        }
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.support.0 {
            return 0.0;
        }
        if x >= self.support.1 {
            return 1.0;
        }
        match &self.kernel {
            Kernel::Gaussian => math::normal_cdf(x),
            Kernel::Exponential => {
                if x <= 0.0 {
                    0.5 * math::exp(x)
                } else {
                    1.0 - 0.5 * math::exp(-x)
                }
            }
            Kernel::ExpAlpha { alpha, z } => {
                // tail form beyond |x| = 1 avoids cancellation
                if math::fabs(x) > 1.0 {
                    let tail = self.exp_alpha_tail(*alpha, *z, math::fabs(x));
                    return if x > 0.0 { 1.0 - tail } else { tail };
                }
                let body = numerics::integrate(
                    &|s: f64| math::exp(-math::pow(s, *alpha)),
                    0.0,
                    math::fabs(x),
                    &self.cfg,
                )
                .unwrap_or(0.0);
                if x >= 0.0 {
                    0.5 + body / z
                } else {
                    0.5 - body / z
                }
            }
            Kernel::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Kernel::Cusp { alpha } => {
                let p = math::pow(math::fabs(x), 1.0 + alpha);
                if x <= 0.0 {
                    0.5 * (1.0 - p)
                } else {
                    0.5 * (1.0 + p)
                }
            }
            Kernel::Grid(g) => g.cdf(x),
        }
    }

    /// Quantile function on (0, 1); the endpoints map to the support edges.
    pub fn quantile(&self, t: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&t));
        if t <= 0.0 {
            return self.support.0;
        }
        if t >= 1.0 {
            return self.support.1;
        }
        match &self.kernel {
            Kernel::Gaussian => {
                // invert in log space on the small side: keeps the tail
                // quantiles relatively accurate
                let lo = t.min(1.0 - t);
                let hi = 1.0 + math::sqrt(-2.0 * math::log(lo));
                let z = numerics::invert_monotone(
                    &|x| math::log(math::normal_cdf(x)),
                    math::log(lo),
                    -hi,
                    0.0,
                )
                .unwrap_or(0.0);
                if t <= 0.5 {
                    z
                } else {
                    -z
                }
            }
            Kernel::Exponential => {
                if t <= 0.5 {
                    math::log(2.0 * t)
                } else {
                    -math::log(2.0 * (1.0 - t))
                }
            }
            Kernel::ExpAlpha { alpha, z } => {
                let lo = t.min(1.0 - t);
                let sign = if t <= 0.5 { -1.0 } else { 1.0 };
                let edge = self.exp_alpha_tail(*alpha, *z, 1.0);
                let mag = if lo < edge {
                    // deep tail: invert the tail mass in log space
                    let hi = 1.0 + math::pow(-math::log(lo * z / 8.0), 1.0 / alpha);
                    numerics::invert_monotone(
                        &|u| math::log(self.exp_alpha_tail(*alpha, *z, u)),
                        math::log(lo),
                        1.0,
                        hi,
                    )
                    .unwrap_or(1.0)
                } else {
                    numerics::invert_monotone(&|x| self.cdf(x), lo, -1.0, 0.0)
                        .map(math::fabs)
                        .unwrap_or(0.0)
                };
                sign * mag
            }
            Kernel::Uniform { a, b } => a + t * (b - a),
            Kernel::Cusp { alpha } => {
                if t <= 0.5 {
                    -math::pow(1.0 - 2.0 * t, 1.0 / (1.0 + alpha))
                } else {
                    math::pow(2.0 * t - 1.0, 1.0 / (1.0 + alpha))
                }
            }
            Kernel::Grid(g) => g.quantile(t),
        }
    }

    /// `Q(1 - s)` evaluated without forming `1 - s`, so deep upper quantiles
    /// keep full relative precision.
    pub fn quantile_upper(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.support.1;
        }
        if s >= 1.0 {
            return self.support.0;
        }
        match &self.kernel {
            Kernel::Uniform { a, b } => b - s * (b - a),
            Kernel::Grid(g) => g.quantile_upper(s),
            // the remaining built-in families are even
            _ => -self.quantile(s),
        }
    }

    /// `F(b) - F(a)`, clamped to `[0, 1]`.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        (self.cdf(b) - self.cdf(a)).clamp(0.0, 1.0)
    }

    /// `Q(1/2)`.
    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// `integral of h(x) rho(x) dx` over the finite interval `[a, b]`.
    pub fn segment_integral<F: Fn(f64) -> f64>(&self, h: &F, a: f64, b: f64) -> Result<f64> {
        let lo = a.max(self.support.0);
        let hi = b.min(self.support.1);
        if hi <= lo {
            return Ok(0.0);
        }
        numerics::integrate(&|x| h(x) * self.density(x), lo, hi, &self.cfg)
    }

    /// `integral of rho(x)^(-e) dx` over `[a, b]`; `+inf` when the integral
    /// leaves the support or diverges.
    pub fn inv_density_integral(&self, a: f64, b: f64, e: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        if a < self.support.0 || b > self.support.1 {
            return Ok(f64::INFINITY);
        }
        if let Kernel::Grid(g) = &self.kernel {
            return Ok(g.inv_density_integral(a, b, e));
        }
        let f = |x: f64| {
            let p = self.log_density(x);
            if p.is_infinite() {
                f64::INFINITY
            } else {
                math::exp(e * p)
            }
        };
        match numerics::integrate(&f, a, b, &self.cfg) {
            Ok(v) => Ok(v),
            Err(Error::DivergentIntegral { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }

    pub fn quadrature_config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Upper tail mass of the `exp(-|x|^alpha)` family at `u >= 0`.
    fn exp_alpha_tail(&self, alpha: f64, z: f64, u: f64) -> f64 {
        let f = |s: f64| math::exp(-math::pow(s, alpha));
        numerics::integrate_semi_infinite(&f, u, &self.cfg, None)
            .map(|v| v / z)
            .unwrap_or(0.0)
    }

    fn check_even(&self) -> bool {
        let (lo, hi) = self.support;
        if lo.is_finite() != hi.is_finite() {
            return false;
        }
        if lo.is_finite() && math::fabs(lo + hi) > 1e-9 * (math::fabs(lo) + math::fabs(hi)) {
            return false;
        }
        for i in 1..64 {
            let t = i as f64 / 64.0;
            let x = self.quantile(t);
            let (a, b) = (self.density(x), self.density(-x));
            if math::fabs(a - b) > 1e-7 * (1.0 + a.max(b)) {
                return false;
            }
        }
        true
    }

    fn check_log_concavity(&self) -> LogConcavity {
        // grid kernels: check chord slopes of psi on the knots themselves
        // (quantile sampling would alias the piecewise-linear representation)
        if let Kernel::Grid(g) = &self.kernel {
            let mut prev: Option<f64> = None;
            for i in 0..g.x.len() - 1 {
                let s = (g.psi[i + 1] - g.psi[i]) / (g.x[i + 1] - g.x[i]);
                if let Some(p) = prev {
                    if s < p - LOG_CONCAVITY_SLACK * (1.0 + math::fabs(p)) {
                        return LogConcavity::ViolatedAt(g.x[i]);
                    }
                }
                prev = Some(s);
            }
            return LogConcavity::Verified;
        }
        // sample at quantile-spaced points so the check concentrates where
        // the mass is, plus points straddling the median
        let mut worst: Option<f64> = None;
        let check = |x: f64, h: f64| -> Option<f64> {
            let (pm, p0, pp) =
                (self.log_density(x - h), self.log_density(x), self.log_density(x + h));
            if p0.is_infinite() && (pm.is_finite() || pp.is_finite()) {
                // density vanishes in the interior: psi spikes to +inf
                return Some(x);
            }
            if !(pm.is_finite() && p0.is_finite() && pp.is_finite()) {
                return None;
            }
            let second = (pm - 2.0 * p0 + pp) / (h * h);
            if second < -LOG_CONCAVITY_SLACK {
                return Some(x);
            }
            None
        };
        let (lo, hi) = self.support;
        for i in 1..400 {
            let t = i as f64 / 400.0;
            let x = self.quantile(t);
            let mut h = 1e-4 * (1.0 + math::fabs(x));
            if lo.is_finite() {
                h = h.min(0.45 * (x - lo).max(f64::MIN_POSITIVE));
            }
            if hi.is_finite() {
                h = h.min(0.45 * (hi - x).max(f64::MIN_POSITIVE));
            }
            if h <= 0.0 || !h.is_finite() {
                continue;
            }
            if let Some(w) = check(x, h) {
                if worst.map_or(true, |p| math::fabs(w) < math::fabs(p)) {
                    worst = Some(w);
                }
            }
        }
        match worst {
            Some(w) => LogConcavity::ViolatedAt(w),
            None => LogConcavity::Verified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn build(token: &str) -> Measure1D {
        match MeasureSpec::parse(token).unwrap() {
            ParsedMeasure::Spec(s) => Measure1D::build(&s).unwrap(),
            _ => panic!("grid specs need files"),
        }
    }

    #[test]
    fn gaussian_density_at_zero() {
        let m = build("gaussian");
        assert_abs_diff_eq!(m.density(0.0), 0.3989422804014327, epsilon = 1e-12);
    }

    #[test]
    fn exponential_median_and_quartile() {
        let m = build("exponential");
        assert_abs_diff_eq!(m.median(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.quantile(0.25), -core::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn cusp_certificate_violated_near_origin() {
        let m = build("cusp:0.5");
        match m.log_concavity() {
            LogConcavity::ViolatedAt(x) => assert!(math::fabs(x) < 0.05, "witness at {x}"),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn log_concave_builtins_verified() {
        for tok in ["gaussian", "exponential", "exp_alpha:1.5", "uniform:0,1"] {
            let m = build(tok);
            assert!(m.log_concavity().is_verified(), "{tok} should be log-concave");
        }
    }

    #[test]
    fn exp_alpha_below_one_not_log_concave() {
        let m = build("exp_alpha:0.7");
        assert!(matches!(m.log_concavity(), LogConcavity::ViolatedAt(_)));
    }

    #[test]
    fn masses() {
        let g = build("gaussian");
        assert_abs_diff_eq!(g.mass(f64::NEG_INFINITY, 0.0), 0.5, epsilon = 1e-12);
        let u = build("uniform:0,1");
        assert_abs_diff_eq!(u.mass(0.0, 0.25), 0.25, epsilon = 1e-12);
        let e = build("exponential");
        assert_abs_diff_eq!(e.mass(0.0, core::f64::consts::LN_2), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn medians() {
        assert_abs_diff_eq!(build("gaussian").median(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(build("uniform:0,1").median(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(build("exp_alpha:1.5").median(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn quantile_cdf_round_trip_all_builtins() {
        for tok in
            ["gaussian", "exponential", "exp_alpha:1.5", "exp_alpha:1.0", "uniform:-1,3", "cusp:0.5"]
        {
            let m = build(tok);
            for i in 1..1000 {
                let t = i as f64 / 1000.0;
                let x = m.quantile(t);
                let back = m.cdf(x);
                assert!(
                    math::fabs(back - t) < 1e-8,
                    "{tok}: Q({t}) = {x}, F back = {back}"
                );
            }
        }
    }

    #[test]
    fn grid_measure_matches_exponential() {
        // coarse grid sampling of the two-sided exponential potential
        let xs: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.25).collect();
        let psi: Vec<f64> =
            xs.iter().map(|x| math::fabs(*x) + core::f64::consts::LN_2).collect();
        let spec = MeasureSpec::potential_grid("exp-sampled", xs, psi).unwrap();
        let m = Measure1D::build(&spec).unwrap();
        assert!(m.is_even());
        assert!(m.log_concavity().is_verified());
        // piecewise log-linear representation of a piecewise linear psi is exact
        assert_abs_diff_eq!(m.cdf(0.0), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m.quantile(0.25), -core::f64::consts::LN_2, epsilon = 1e-10);
        assert_abs_diff_eq!(m.density(1.0), 0.5 * math::exp(-1.0), epsilon = 1e-12);
        // exact tail handling beyond the grid
        assert_abs_diff_eq!(m.cdf(-12.0), 0.5 * math::exp(-12.0), epsilon = 1e-14);
    }

    #[test]
    fn spec_parsing_and_gates() {
        assert!(MeasureSpec::parse("exp_alpha:0").is_err());
        assert!(MeasureSpec::parse("uniform:2,1").is_err());
        assert!(MeasureSpec::parse("nonsense").is_err());
        match MeasureSpec::parse("potential-grid:/tmp/f.csv").unwrap() {
            ParsedMeasure::PotentialGridFile { path } => assert_eq!(path, "/tmp/f.csv"),
            other => panic!("{other:?}"),
        }
        // short grids rejected
        let r = MeasureSpec::potential_grid("g", alloc::vec![0.0, 1.0], alloc::vec![0.0, 1.0]);
        assert!(matches!(r, Err(Error::BadGrid { .. })));
    }

    #[test]
    fn inv_density_integral_closed_forms() {
        let e = build("exponential");
        // rho^-1 on [-ln2, 0]: 2(e^{ln 2} - 1) = 2
        let v = e.inv_density_integral(-core::f64::consts::LN_2, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-9);
        let u = build("uniform:0,1");
        assert_abs_diff_eq!(
            u.inv_density_integral(0.25, 0.5, 1.0).unwrap(),
            0.25,
            epsilon = 1e-12
        );
    }
}
