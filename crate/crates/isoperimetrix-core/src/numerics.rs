//! Deterministic numerical kernel: adaptive quadrature on finite and
//! semi-infinite intervals, monotone function inversion, grid functions and
//! infimum scans.
//!
//! Everything here is pure and reentrant; no global state.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Tolerances and budgets for the quadrature and root-finding routines.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance on integral values.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum number of interval subdivisions.
    pub max_subdivisions: usize,
    /// Semi-infinite integrals are truncated where the integrand's mass
    /// envelope drops below this.
    pub tail_cutoff_mass: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 4096,
            tail_cutoff_mass: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.tail_cutoff_mass > 0.0) {
            return Err(Error::InvalidParameter {
                detail: alloc::string::String::from("tolerances must be positive"),
            });
        }
        if self.max_subdivisions < 16 {
            return Err(Error::InvalidParameter {
                detail: alloc::string::String::from("max_subdivisions must be >= 16"),
            });
        }
        Ok(())
    }
}

// 15-point Kronrod / 7-point Gauss pair (positive abscissae).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod pass over `[a, b]`; returns (estimate, error estimate).
fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = math::fabs(kronrod);

    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (math::fabs(f1) + math::fabs(f2));
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * math::fabs(fc - mean);
    for j in 0..7 {
        res_asc += WGK[j] * (math::fabs(fv[j] - mean) + math::fabs(fv[14 - j] - mean));
    }

    let value = kronrod * half;
    res_abs *= math::fabs(half);
    res_asc *= math::fabs(half);

    let mut err = math::fabs((kronrod - gauss) * half);
    if res_asc != 0.0 && err != 0.0 {
        let scale = math::pow(200.0 * err / res_asc, 1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

const OVERFLOW_GUARD: f64 = 1e300;

/// Integrate `f` over the finite interval `[a, b]`.
///
/// Adaptive bisection on Gauss-Kronrod 15; integrable endpoint
/// singularities are handled by subdivision (the rule never evaluates the
/// endpoints). Deterministic for a fixed config.
pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b.is_infinite() {
        return integrate_semi_infinite(f, a, cfg, None);
    }
    let (value, err) = gk15(f, a, b);
    let mut total = value;
    let mut total_err = err;
    // worklist of (a, b, value, err), worst segment split first
    let mut segs: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, value, err)];
    let mut splits = 0usize;
    loop {
        if !total.is_finite() || math::fabs(total) > OVERFLOW_GUARD {
            return Err(Error::DivergentIntegral {
                detail: alloc::format!("partial sum {total:e} past overflow guard"),
            });
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * math::fabs(total));
        if total_err <= tol {
            return Ok(total);
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::NonConvergent {
                detail: alloc::format!(
                    "error {total_err:e} > tol {tol:e} after {splits} subdivisions"
                ),
            });
        }
        // split the segment with the largest error estimate
        let mut worst = 0usize;
        for (i, s) in segs.iter().enumerate() {
            if s.3 > segs[worst].3 {
                worst = i;
            }
        }
        let (sa, sb, sv, se) = segs.swap_remove(worst);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            // cannot refine further in f64; accept what we have
            segs.push((sa, sb, sv, 0.0));
            total_err -= se;
            continue;
        }
        let (v1, e1) = gk15(f, sa, mid);
        let (v2, e2) = gk15(f, mid, sb);
        total += v1 + v2 - sv;
        total_err += e1 + e2 - se;
        segs.push((sa, mid, v1, e1));
        segs.push((mid, sb, v2, e2));
        splits += 1;
    }
}

/// Integrate `f` over `[a, +inf)`.
///
/// With `tail_mass` supplied, the integral is truncated at the first point
/// where the envelope (a bound on the remaining mass of `|f|`) drops below
/// `cfg.tail_cutoff_mass`. Without an envelope, geometrically growing blocks
/// are summed until three consecutive blocks are negligible.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    cfg: &QuadratureConfig,
    tail_mass: Option<&dyn Fn(f64) -> f64>,
) -> Result<f64> {
    if let Some(env) = tail_mass {
        let mut cut = if a > 1.0 { 2.0 * a } else { a + 1.0 };
        let mut tries = 0;
        while env(cut) > cfg.tail_cutoff_mass {
            cut *= 2.0;
            tries += 1;
            if tries > 2048 || cut > OVERFLOW_GUARD {
                return Err(Error::DivergentIntegral {
                    detail: alloc::string::String::from("tail envelope never decays"),
                });
            }
        }
        return integrate(f, a, cut, cfg);
    }

    let mut total = 0.0f64;
    let mut lo = a;
    // block widths scale with the start point so slowly-decaying tails
    // launched from large abscissas are not undersampled
    let mut width = 1.0f64.max(math::fabs(a));
    let mut quiet_blocks = 0;
    for _ in 0..256 {
        let hi = lo + width;
        let block = integrate(f, lo, hi, cfg)?;
        total += block;
        if !total.is_finite() || math::fabs(total) > OVERFLOW_GUARD {
            return Err(Error::DivergentIntegral {
                detail: alloc::format!("partial sum {total:e} past overflow guard"),
            });
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * math::fabs(total));
        if math::fabs(block) < 0.125 * tol {
            quiet_blocks += 1;
            if quiet_blocks >= 3 {
                return Ok(total);
            }
        } else {
            quiet_blocks = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::NonConvergent {
        detail: alloc::string::String::from("semi-infinite block sum did not settle"),
    })
}

/// `integral of (s-a)^(-w) g(s) ds` over `[a, b]` with `0 <= w < 1`.
///
/// The substitution `u = (s-a)^(1-w)` removes the endpoint singularity
/// exactly, so plain adaptive quadrature applies to the transformed
/// integrand. Bisection toward the singular endpoint would instead stall on
/// floating-point absorption of `s - a`.
pub fn integrate_singular_left<F: Fn(f64) -> f64 + ?Sized>(
    g: &F,
    a: f64,
    b: f64,
    w: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(b > a) {
        return Ok(0.0);
    }
    if w == 0.0 {
        return integrate(&|s| g(s), a, b, cfg);
    }
    if !(0.0..1.0).contains(&w) {
        return Err(Error::InvalidParameter {
            detail: alloc::format!("singular weight exponent must be in [0, 1), got {w}"),
        });
    }
    let c = 1.0 - w;
    let u_hi = math::pow(b - a, c);
    let transformed = |u: f64| g(a + math::pow(u, 1.0 / c)) / c;
    integrate(&transformed, 0.0, u_hi, cfg)
}

/// Absolute tolerance used by `invert_monotone`: |f(x) - y| <= TOL * (1 + |y|).
pub const ROOT_ABS_TOL: f64 = 1e-12;

/// Solve `f(x) = y` for continuous, strictly monotone `f` on `[lo, hi]`.
///
/// Bisection with a secant (regula falsi, Illinois variant) acceleration;
/// deterministic. Errors with `NotBracketed` if `y` lies outside `f([lo, hi])`.
pub fn invert_monotone<F: Fn(f64) -> f64 + ?Sized>(f: &F, y: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::NotBracketed { y, lo, hi });
    }
    let flo = f(lo);
    let fhi = f(hi);
    let increasing = fhi >= flo;
    // residuals oriented so g is increasing with root at f(x) = y
    let g = |v: f64| if increasing { v - y } else { y - v };
    let (mut a, mut b) = (lo, hi);
    let (mut ga, mut gb) = (g(flo), g(fhi));
    let y_tol = ROOT_ABS_TOL * (1.0 + math::fabs(y));
    if math::fabs(ga) <= y_tol {
        return Ok(a);
    }
    if math::fabs(gb) <= y_tol {
        return Ok(b);
    }
    if ga > 0.0 || gb < 0.0 {
        return Err(Error::NotBracketed { y, lo, hi });
    }
    let mut side = 0i8;
    for _ in 0..256 {
        // Illinois: secant step, fall back to bisection when degenerate
        let mut x = if (gb - ga).abs() > f64::MIN_POSITIVE {
            (a * gb - b * ga) / (gb - ga)
        } else {
            0.5 * (a + b)
        };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let gx = g(f(x));
        if math::fabs(gx) <= y_tol || (b - a) <= f64::EPSILON * (math::fabs(a) + math::fabs(b)) {
            return Ok(x);
        }
        if gx < 0.0 {
            a = x;
            ga = gx;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            gb = gx;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}

/// Expand `[seed, grow * seed, ...]` until `f` brackets `y`, then invert.
/// `f` must be monotone on the positive half-line.
pub fn invert_monotone_expanding<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    y: f64,
    seed: f64,
) -> Result<f64> {
    let mut lo = seed;
    let mut hi = seed;
    let increasing = f(2.0 * seed) >= f(seed);
    let below = |v: f64| if increasing { v < y } else { v > y };
    let mut tries = 0;
    while below(f(hi)) {
        hi *= 4.0;
        tries += 1;
        if tries > 600 {
            return Err(Error::NotBracketed { y, lo, hi });
        }
    }
    tries = 0;
    while !below(f(lo)) && lo > f64::MIN_POSITIVE {
        lo *= 0.25;
        tries += 1;
        if tries > 600 {
            return Err(Error::NotBracketed { y, lo, hi });
        }
    }
    invert_monotone(f, y, lo, hi)
}

/// Golden-section minimization of a unimodal-enough `f` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Log-spaced grid from `lo` to `hi` (both positive, both included).
pub fn log_grid(lo: f64, hi: f64, points_per_decade: usize) -> Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo);
    let decades = (math::log(hi) - math::log(lo)) / core::f64::consts::LN_10;
    let n = (math::ceil(decades * points_per_decade as f64) as usize).max(2);
    let llo = math::log(lo);
    let lhi = math::log(hi);
    let mut grid = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = llo + (lhi - llo) * (i as f64) / (n as f64);
        grid.push(math::exp(x));
    }
    *grid.first_mut().unwrap() = lo;
    *grid.last_mut().unwrap() = hi;
    grid
}

/// Default scan resolution for the `inf` operations (points per decade).
pub const SCAN_POINTS_PER_DECADE: usize = 512;
/// Default lower scan endpoint when an interval opens at 0.
pub const SCAN_FLOOR: f64 = 1e-8;

/// Grid minimum of `f` over `grid`, refined by golden section between the
/// neighbors of the best grid point. Non-finite values are skipped.
pub fn inf_scan_grid<F: Fn(f64) -> f64 + ?Sized>(f: &F, grid: &[f64]) -> Result<(f64, f64)> {
    if grid.is_empty() {
        return Err(Error::EmptyInterval);
    }
    let mut best = None::<(usize, f64)>;
    for (i, &t) in grid.iter().enumerate() {
        let v = f(t);
        if v.is_finite() && best.map_or(true, |(_, bv)| v < bv) {
            best = Some((i, v));
        }
    }
    let (i, grid_min) = best.ok_or(Error::EmptyInterval)?;
    let lo = if i > 0 { grid[i - 1] } else { grid[i] };
    let hi = if i + 1 < grid.len() { grid[i + 1] } else { grid[i] };
    let (mut argmin, mut min) = (grid[i], grid_min);
    if hi > lo {
        let (x, v) = golden_min(f, lo, hi, 80);
        if v.is_finite() && v < min {
            argmin = x;
            min = v;
        }
    }
    Ok((argmin, min))
}

/// Infimum of `f` over `[lo, hi]` on a log-spaced grid (`points_per_decade`
/// points per decade), refined locally. Returns `(argmin, min)`.
pub fn inf_scan<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    points_per_decade: usize,
) -> Result<(f64, f64)> {
    if !(hi > lo) {
        return Err(Error::EmptyInterval);
    }
    let lo_eff = if lo > 0.0 { lo } else { (SCAN_FLOOR).min(hi * 0.5) };
    let grid = log_grid(lo_eff, hi, points_per_decade.max(2));
    inf_scan_grid(f, &grid)
}

/// How a [`GridFunction`] behaves outside its knot range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extrapolation {
    /// Hold the edge value constant ("no extrapolation").
    None,
    /// Continue the first/last segment linearly.
    LinearTail,
}

/// Piecewise-linear function on strictly increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
    extrapolation: Extrapolation,
}

impl GridFunction {
    pub fn new(knots: Vec<f64>, values: Vec<f64>, extrapolation: Extrapolation) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::BadGrid {
                detail: alloc::format!(
                    "{} knots vs {} values",
                    knots.len(),
                    values.len()
                ),
            });
        }
        if knots.is_empty() {
            return Err(Error::BadGrid {
                detail: alloc::string::String::from("empty grid"),
            });
        }
        for w in knots.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::BadGrid {
                    detail: alloc::format!("knots not strictly increasing at x = {}", w[0]),
                });
            }
        }
        if knots.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::BadGrid {
                detail: alloc::string::String::from("non-finite entries"),
            });
        }
        Ok(GridFunction { knots, values, extrapolation })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn extrapolation(&self) -> Extrapolation {
        self.extrapolation
    }

    /// Value of the function at `x` (piecewise-linear between knots).
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if n == 1 {
            return self.values[0];
        }
        if x <= self.knots[0] {
            return match self.extrapolation {
                Extrapolation::None => self.values[0],
                Extrapolation::LinearTail => {
                    let s = (self.values[1] - self.values[0]) / (self.knots[1] - self.knots[0]);
                    self.values[0] + s * (x - self.knots[0])
                }
            };
        }
        if x >= self.knots[n - 1] {
            return match self.extrapolation {
                Extrapolation::None => self.values[n - 1],
                Extrapolation::LinearTail => {
                    let s = (self.values[n - 1] - self.values[n - 2])
                        / (self.knots[n - 1] - self.knots[n - 2]);
                    self.values[n - 1] + s * (x - self.knots[n - 1])
                }
            };
        }
        let i = match self.knots.partition_point(|&k| k <= x) {
            0 => 0,
            p => p - 1,
        };
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Largest absolute value attained (piecewise-linear, so at a knot).
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, &v| m.max(math::fabs(v)))
    }
}
