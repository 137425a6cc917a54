//! Orlicz functions and (quasi-)norms.
//!
//! A class-N function is a continuous increasing surjection of the positive
//! half-line; Young functions are the convex ones. The Luxemburg norm, its
//! weak variant built from the adjoint `N^(t) = 1/N^{-1}(1/t)`, the dual
//! norm on indicators, the Legendre transform, and the monotonicity
//! predicates that gate the transfer theorems all live here.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::measures::Measure1D;
use crate::numerics::{self, Extrapolation, GridFunction};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Construction recipe of an [`OrliczFunction`], kept for reports.
#[derive(Debug, Clone, PartialEq)]
pub enum OrliczTag {
    /// `t^p`
    Power { p: f64 },
    /// `phi_q(t) = t^q log(1 + t^q)`
    Phi { q: f64 },
    /// Replaced by `2 (t / N^{-1}(2))^q` below `N^{-1}(2)`.
    Truncated { q: f64 },
    /// Output of the integral transform between capacity exponents.
    Transformed { p1: f64, p2: f64, p3: f64 },
    /// Piecewise linear from a grid.
    Grid,
    /// Adjoint of another function.
    Adjoint,
    /// Assembled from explicit closures.
    Custom,
}

/// An element of class N: evaluation, inverse, and a descriptive tag.
#[derive(Clone)]
pub struct OrliczFunction {
    tag: OrliczTag,
    desc: String,
    eval: ScalarFn,
    inv: ScalarFn,
}

impl core::fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("OrliczFunction")
            .field("tag", &self.tag)
            .field("desc", &self.desc)
            .finish()
    }
}

impl OrliczFunction {
    /// `N(t) = t^p`, `p > 0`.
    pub fn power(p: f64) -> Result<OrliczFunction> {
        if !(p > 0.0) {
            return Err(Error::InvalidParameter { detail: format!("power needs p > 0, got {p}") });
        }
        Ok(OrliczFunction {
            tag: OrliczTag::Power { p },
            desc: format!("power:{p}"),
            eval: Arc::new(move |t| math::pow(t, p)),
            inv: Arc::new(move |y| math::pow(y, 1.0 / p)),
        })
    }

    /// `phi_q(t) = t^q log(1 + t^q)`, the q-log-Sobolev Orlicz function.
    pub fn phi(q: f64) -> Result<OrliczFunction> {
        if !(q > 0.0) {
            return Err(Error::InvalidParameter { detail: format!("phi needs q > 0, got {q}") });
        }
        let eval = move |t: f64| {
            let u = math::pow(t, q);
            u * math::log1p(u)
        };
        let inv = move |y: f64| {
            if y <= 0.0 {
                return 0.0;
            }
            numerics::invert_monotone_expanding(
                &|t: f64| {
                    let u = math::pow(t, q);
                    u * math::log1p(u)
                },
                y,
                1.0,
            )
            .unwrap_or(f64::NAN)
        };
        Ok(OrliczFunction {
            tag: OrliczTag::Phi { q },
            desc: format!("phi:{q}"),
            eval: Arc::new(eval),
            inv: Arc::new(inv),
        })
    }

    /// Piecewise-linear N from `(t, N(t))` pairs; a segment from the origin
    /// is prepended and the last segment continues linearly.
    pub fn from_grid(points: &GridFunction) -> Result<OrliczFunction> {
        let mut ts: Vec<f64> = Vec::new();
        let mut vs: Vec<f64> = Vec::new();
        if points.knots()[0] > 0.0 {
            ts.push(0.0);
            vs.push(0.0);
        }
        ts.extend_from_slice(points.knots());
        vs.extend_from_slice(points.values());
        if ts[0] < 0.0 || vs[0] < 0.0 {
            return Err(Error::BadGrid { detail: "grid N needs t, N(t) >= 0".to_string() });
        }
        for w in vs.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::BadGrid {
                    detail: format!("grid N not strictly increasing at N = {}", w[0]),
                });
            }
        }
        let fwd = GridFunction::new(ts.clone(), vs.clone(), Extrapolation::LinearTail)?;
        let bwd = GridFunction::new(vs, ts, Extrapolation::LinearTail)?;
        Ok(OrliczFunction {
            tag: OrliczTag::Grid,
            desc: "grid".to_string(),
            eval: Arc::new(move |t| fwd.eval(t).max(0.0)),
            inv: Arc::new(move |y| bwd.eval(y).max(0.0)),
        })
    }

    /// Assemble from explicit closures (used by the integral transforms).
    pub fn from_parts(
        tag: OrliczTag,
        desc: &str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        inv: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> OrliczFunction {
        OrliczFunction { tag, desc: desc.to_string(), eval: Arc::new(eval), inv: Arc::new(inv) }
    }

    pub fn tag(&self) -> &OrliczTag {
        &self.tag
    }

    pub fn describe(&self) -> &str {
        &self.desc
    }

    /// `N(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// `N^{-1}(y)`.
    pub fn inv(&self, y: f64) -> f64 {
        (self.inv)(y)
    }

    /// Adjoint evaluation `N^(t) = 1 / N^{-1}(1/t)`; `N^(0) = 0`.
    pub fn wedge(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t.is_infinite() {
            return f64::INFINITY;
        }
        1.0 / self.inv(1.0 / t)
    }

    /// The adjoint as a function; an involution on class N. Its inverse is
    /// closed-form: `(N^)^{-1}(y) = 1 / N(1/y)`.
    pub fn adjoint(&self) -> OrliczFunction {
        let inner_inv = Arc::clone(&self.inv);
        let inner_eval = Arc::clone(&self.eval);
        OrliczFunction {
            tag: OrliczTag::Adjoint,
            desc: format!("adjoint({})", self.desc),
            eval: Arc::new(move |t| if t <= 0.0 { 0.0 } else { 1.0 / inner_inv(1.0 / t) }),
            inv: Arc::new(move |y| if y <= 0.0 { 0.0 } else { 1.0 / inner_eval(1.0 / y) }),
        }
    }
}

/// Verdict of a single monotonicity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TriState {
    Holds,
    FailsAt(f64),
    Unchecked,
}

impl TriState {
    pub fn holds(&self) -> bool {
        matches!(self, TriState::Holds)
    }
}

/// Grid-verified predicates of an Orlicz function.
#[derive(Debug, Clone)]
pub struct PredicateReport {
    /// Convex increasing with N(0) = 0.
    pub is_young: TriState,
    /// `N(t)^{1/q}/t` non-decreasing, with the q it was checked at.
    pub ratio_nondecreasing: (f64, TriState),
    /// `N(t^alpha)/t` non-increasing, with the alpha it was checked at.
    pub power_nonincreasing: (f64, TriState),
    /// Abscissas the verdicts were established on.
    pub checked_grid: Vec<f64>,
}

/// Relative slack for the grid monotonicity verdicts.
pub const PREDICATE_SLACK: f64 = 1e-9;

/// Default predicate grid: log-spaced on [1e-8, 1e8], 64 points per decade.
pub fn predicate_grid() -> Vec<f64> {
    numerics::log_grid(1e-8, 1e8, 64)
}

fn nondecreasing_on(vals: &[(f64, f64)]) -> TriState {
    for w in vals.windows(2) {
        let (_, a) = w[0];
        let (t, b) = w[1];
        if !(a.is_finite() && b.is_finite()) {
            continue;
        }
        if b < a * (1.0 - PREDICATE_SLACK) - PREDICATE_SLACK {
            return TriState::FailsAt(t);
        }
    }
    TriState::Holds
}

fn nonincreasing_on(vals: &[(f64, f64)]) -> TriState {
    for w in vals.windows(2) {
        let (_, a) = w[0];
        let (t, b) = w[1];
        if !(a.is_finite() && b.is_finite()) {
            continue;
        }
        if b > a * (1.0 + PREDICATE_SLACK) + PREDICATE_SLACK {
            return TriState::FailsAt(t);
        }
    }
    TriState::Holds
}

/// Convexity on a grid: chord slopes must be non-decreasing.
pub fn young_on_grid(n: &OrliczFunction, grid: &[f64]) -> TriState {
    if n.eval(0.0) > 1e-12 {
        return TriState::FailsAt(0.0);
    }
    let mut prev_slope: Option<f64> = None;
    let mut prev_t = 0.0f64;
    let mut prev_v = n.eval(0.0);
    for &t in grid {
        let v = n.eval(t);
        if !v.is_finite() {
            break;
        }
        if v < prev_v * (1.0 - PREDICATE_SLACK) {
            return TriState::FailsAt(t);
        }
        let slope = (v - prev_v) / (t - prev_t);
        if let Some(ps) = prev_slope {
            if slope < ps * (1.0 - PREDICATE_SLACK) - PREDICATE_SLACK {
                return TriState::FailsAt(t);
            }
        }
        prev_slope = Some(slope);
        prev_t = t;
        prev_v = v;
    }
    TriState::Holds
}

/// Check the three predicates that gate the transfer maps, on the default log grid.
pub fn check_predicates(n: &OrliczFunction, q: f64, alpha: f64) -> PredicateReport {
    check_predicates_on(n, q, alpha, &predicate_grid())
}

/// Same as [`check_predicates`] on a caller-supplied grid.
pub fn check_predicates_on(
    n: &OrliczFunction,
    q: f64,
    alpha: f64,
    grid: &[f64],
) -> PredicateReport {
    let is_young = young_on_grid(n, grid);
    let ratio: Vec<(f64, f64)> =
        grid.iter().map(|&t| (t, math::pow(n.eval(t), 1.0 / q) / t)).collect();
    let ratio_verdict = nondecreasing_on(&ratio);
    let power: Vec<(f64, f64)> =
        grid.iter().map(|&t| (t, n.eval(math::pow(t, alpha)) / t)).collect();
    let power_verdict = nonincreasing_on(&power);
    PredicateReport {
        is_young,
        ratio_nondecreasing: (q, ratio_verdict),
        power_nonincreasing: (alpha, power_verdict),
        checked_grid: grid.to_vec(),
    }
}

/// Mass of `{ f >= level }` under `m`, exact for piecewise-linear `f` with
/// held tails.
pub fn mass_where_ge(f: &GridFunction, m: &Measure1D, level: f64) -> f64 {
    let knots = f.knots();
    let values = f.values();
    let n = knots.len();
    let mut mass = 0.0f64;
    // held tails
    if values[0] >= level {
        mass += m.cdf(knots[0]);
    }
    if values[n - 1] >= level {
        mass += 1.0 - m.cdf(knots[n - 1]);
    }
    for i in 0..n - 1 {
        let (x0, x1) = (knots[i], knots[i + 1]);
        let (y0, y1) = (values[i], values[i + 1]);
        if y0 >= level && y1 >= level {
            mass += m.mass(x0, x1);
        } else if y0 < level && y1 < level {
            // nothing
        } else {
            let xi = x0 + (level - y0) * (x1 - x0) / (y1 - y0);
            if y1 >= level {
                mass += m.mass(xi, x1);
            } else {
                mass += m.mass(x0, xi);
            }
        }
    }
    mass.clamp(0.0, 1.0)
}

/// Mass of `{ |f| >= level }` for `level > 0`.
pub fn mass_where_abs_ge(f: &GridFunction, m: &Measure1D, level: f64) -> f64 {
    let above = mass_where_ge(f, m, level);
    let neg = GridFunction::new(
        f.knots().to_vec(),
        f.values().iter().map(|v| -v).collect(),
        f.extrapolation(),
    )
    .expect("negation preserves the grid");
    let below = mass_where_ge(&neg, m, level);
    (above + below).clamp(0.0, 1.0)
}

/// Expectation of a piecewise-linear `f` (held tails) under `m`.
pub fn expectation(f: &GridFunction, m: &Measure1D) -> Result<f64> {
    let knots = f.knots();
    let values = f.values();
    let n = knots.len();
    let mut acc = values[0] * m.cdf(knots[0]);
    acc += values[n - 1] * (1.0 - m.cdf(knots[n - 1]));
    for i in 0..n - 1 {
        acc += m.segment_integral(&|x| f.eval(x), knots[i], knots[i + 1])?;
    }
    Ok(acc)
}

/// A median of `f` under `m`: both `{f <= M}` and `{f >= M}` carry mass >= 1/2.
pub fn median_of(f: &GridFunction, m: &Measure1D) -> f64 {
    let lo0 = f.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let hi0 = f.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi0 - lo0 < 1e-15 {
        return lo0;
    }
    // mass{f >= c} is non-increasing in c; find the boundary of >= 1/2
    let (mut lo, mut hi) = (lo0 - 1e-12, hi0 + 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass_where_ge(f, m, mid) >= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

const LUXEMBURG_GUARD: f64 = 1e300;

/// Modular integral of `N(|f|/v)` under `m`; tails are exact for held edges.
fn modular<FV: Fn(f64) -> f64>(f: &GridFunction, m: &Measure1D, nv: &FV, v: f64) -> Result<f64> {
    let knots = f.knots();
    let values = f.values();
    let n = knots.len();
    let mut acc = nv(math::fabs(values[0]) / v) * m.cdf(knots[0]);
    acc += nv(math::fabs(values[n - 1]) / v) * (1.0 - m.cdf(knots[n - 1]));
    for i in 0..n - 1 {
        acc += m.segment_integral(&|x| nv(math::fabs(f.eval(x)) / v), knots[i], knots[i + 1])?;
        if acc > LUXEMBURG_GUARD {
            return Ok(f64::INFINITY);
        }
    }
    Ok(acc)
}

/// Luxemburg norm: the infimum of `v > 0` with `integral N(|f|/v) dmu <= 1`,
/// found by monotone root-finding on a doubling bracket.
pub fn orlicz_norm(f: &GridFunction, m: &Measure1D, n: &OrliczFunction) -> Result<f64> {
    if f.extrapolation() == Extrapolation::LinearTail {
        return Err(Error::InvalidParameter {
            detail: "norms over the whole line need held tails, not linear extrapolation"
                .to_string(),
        });
    }
    let peak = f.max_abs();
    if peak == 0.0 {
        return Ok(0.0);
    }
    let nv = |t: f64| n.eval(t);
    // seed: exact if f were a full-mass plateau at its peak
    let mut v_hi = (peak / n.inv(1.0)).max(f64::MIN_POSITIVE);
    let mut tries = 0usize;
    while modular(f, m, &nv, v_hi)? > 1.0 {
        v_hi *= 2.0;
        tries += 1;
        if tries > 2000 || v_hi > LUXEMBURG_GUARD {
            return Err(Error::NotFinite);
        }
    }
    let mut v_lo = v_hi;
    tries = 0;
    while modular(f, m, &nv, v_lo)? <= 1.0 {
        v_lo *= 0.5;
        tries += 1;
        if v_lo < 1e-300 {
            return Ok(0.0);
        }
        if tries > 2000 {
            break;
        }
    }
    let g = |v: f64| modular(f, m, &nv, v).unwrap_or(f64::INFINITY);
    numerics::invert_monotone(&g, 1.0, v_lo, v_hi)
}

/// Luxemburg norm of `f - c`.
pub fn orlicz_norm_shifted(
    f: &GridFunction,
    c: f64,
    m: &Measure1D,
    n: &OrliczFunction,
) -> Result<f64> {
    let shifted = GridFunction::new(
        f.knots().to_vec(),
        f.values().iter().map(|v| v - c).collect(),
        f.extrapolation(),
    )?;
    orlicz_norm(&shifted, m, n)
}

/// Weak quasi-norm: `sup_t N^(mu{|f| >= t}) t` over the level grid of `f`,
/// refined locally.
pub fn weak_orlicz_norm(f: &GridFunction, m: &Measure1D, n: &OrliczFunction) -> f64 {
    let peak = f.max_abs();
    if peak == 0.0 {
        return 0.0;
    }
    let score = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let mass = mass_where_abs_ge(f, m, t);
        if mass <= 0.0 {
            0.0
        } else {
            n.wedge(mass) * t
        }
    };
    // candidate levels: knot magnitudes (plateau edges) and a log sweep
    let mut levels: Vec<f64> =
        f.values().iter().map(|v| math::fabs(*v)).filter(|v| *v > 0.0).collect();
    let floor = peak * 1e-12;
    levels.extend(numerics::log_grid(floor, peak, 64));
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best_i = 0usize;
    let mut best = 0.0f64;
    for (i, &t) in levels.iter().enumerate() {
        let s = score(t);
        if s > best {
            best = s;
            best_i = i;
        }
    }
    let lo = if best_i > 0 { levels[best_i - 1] } else { levels[best_i] };
    let hi = if best_i + 1 < levels.len() { levels[best_i + 1] } else { levels[best_i] };
    if hi > lo {
        let (_, neg_best) = numerics::golden_min(&|t| -score(t), lo, hi, 60);
        best = best.max(-neg_best);
    }
    best
}

/// Dual norm of an indicator with mass `a`: `a N^{-1}(1/a)`. Requires a
/// Young function.
pub fn dual_norm_indicator(m: &Measure1D, a_mass: f64, n: &OrliczFunction) -> Result<f64> {
    let _ = m;
    if !(a_mass > 0.0 && a_mass <= 1.0) {
        return Err(Error::InvalidParameter {
            detail: format!("indicator mass must be in (0, 1], got {a_mass}"),
        });
    }
    match young_on_grid(n, &predicate_grid()) {
        TriState::Holds => Ok(a_mass * n.inv(1.0 / a_mass)),
        TriState::FailsAt(w) => Err(Error::NotYoung { witness: w }),
        TriState::Unchecked => Err(Error::NotYoung { witness: f64::NAN }),
    }
}

/// Legendre-Fenchel transform `N*(s) = sup_t { s t - N(t) }`; `+inf` when the
/// supremum diverges at the grid edge.
pub fn legendre(n: &OrliczFunction, s: f64) -> f64 {
    if s < 0.0 {
        return f64::INFINITY;
    }
    if s == 0.0 {
        return 0.0;
    }
    const T_LO: f64 = 1e-12;
    const T_HI: f64 = 1e12;
    let value = |t: f64| s * t - n.eval(t);
    // divergence test at the upper grid edge
    if value(T_HI) > value(T_HI / 2.0) && value(T_HI) > 0.0 {
        return f64::INFINITY;
    }
    let obj = |u: f64| -value(math::exp(u));
    let (_, neg) = numerics::golden_min(&obj, math::log(T_LO), math::log(T_HI), 200);
    (-neg).max(0.0)
}

/// Truncation at zero: replace `N` below `N^{-1}(2)` by the exact power
/// `2 (t / N^{-1}(2))^q`. Preserves the adjoint on `[0, 1/2]` and the
/// `N(t)^{1/q}/t` monotonicity.
pub fn truncate_at_zero(n: &OrliczFunction, q: f64) -> Result<OrliczFunction> {
    let report = check_predicates(n, q, 1.0);
    if let TriState::FailsAt(w) = report.ratio_nondecreasing.1 {
        return Err(Error::PredicateFails {
            predicate: format!("N(t)^(1/{q})/t non-decreasing"),
            witness: w,
        });
    }
    let s2 = n.inv(2.0);
    if !(s2.is_finite() && s2 > 0.0) {
        return Err(Error::InvalidParameter { detail: format!("N^-1(2) = {s2}") });
    }
    let inner_eval = Arc::clone(&n.eval);
    let inner_inv = Arc::clone(&n.inv);
    let desc = format!("truncated({}, q={q})", n.desc);
    Ok(OrliczFunction {
        tag: OrliczTag::Truncated { q },
        desc,
        eval: Arc::new(move |t| if t <= s2 { 2.0 * math::pow(t / s2, q) } else { inner_eval(t) }),
        inv: Arc::new(
            move |y| if y <= 2.0 { s2 * math::pow(y / 2.0, 1.0 / q) } else { inner_inv(y) },
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Measure1D, MeasureSpec, ParsedMeasure};
    use approx::assert_abs_diff_eq;

    fn build(token: &str) -> Measure1D {
        match MeasureSpec::parse(token).unwrap() {
            ParsedMeasure::Spec(s) => Measure1D::build(&s).unwrap(),
            _ => unreachable!(),
        }
    }

    /// Quasi-indicator of the right half-line of mass `a`: a steep ramp whose
    /// width carries negligible measure.
    fn indicator_of_mass(m: &Measure1D, a: f64) -> GridFunction {
        let edge = m.quantile(1.0 - a);
        let below = m.quantile((1.0 - a) * 0.999_999);
        let w = (edge - below).max(1e-12) * 1e-6;
        GridFunction::new(alloc::vec![edge - w, edge], alloc::vec![0.0, 1.0], Extrapolation::None)
            .unwrap()
    }

    #[test]
    fn norm_of_indicator_is_wedge_of_mass() {
        let m = build("gaussian");
        let n = OrliczFunction::power(2.0).unwrap();
        let f = indicator_of_mass(&m, 0.25);
        let v = orlicz_norm(&f, &m, &n).unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-6); // N^(1/4) = sqrt(1/4)
        let w = weak_orlicz_norm(&f, &m, &n);
        assert_abs_diff_eq!(w, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn norm_of_constant_is_the_constant() {
        let m = build("exponential");
        let p = OrliczFunction::power(3.0).unwrap();
        let f =
            GridFunction::new(alloc::vec![-1.0, 1.0], alloc::vec![2.5, 2.5], Extrapolation::None)
                .unwrap();
        // any N with N(1) = 1 maps a constant to itself
        assert_abs_diff_eq!(orlicz_norm(&f, &m, &p).unwrap(), 2.5, epsilon = 1e-9);
        // for phi_2 the norm solves phi_2(c/v) = 1 instead
        let n = OrliczFunction::phi(2.0).unwrap();
        let v = orlicz_norm(&f, &m, &n).unwrap();
        assert_abs_diff_eq!(n.eval(2.5 / v), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn norm_of_identity_on_uniform_is_l2() {
        let m = build("uniform:0,1");
        let n = OrliczFunction::power(2.0).unwrap();
        let f =
            GridFunction::new(alloc::vec![0.0, 1.0], alloc::vec![0.0, 1.0], Extrapolation::None)
                .unwrap();
        let v = orlicz_norm(&f, &m, &n).unwrap();
        assert_abs_diff_eq!(v, 1.0 / math::sqrt(3.0), epsilon = 1e-9);
    }

    #[test]
    fn dual_norm_indicator_formula() {
        let m = build("gaussian");
        let n2 = OrliczFunction::power(2.0).unwrap();
        assert_abs_diff_eq!(dual_norm_indicator(&m, 0.25, &n2).unwrap(), 0.5, epsilon = 1e-12);
        // any Young N with N^{-1}(1) = 1 sends full mass to 1
        assert_abs_diff_eq!(dual_norm_indicator(&m, 1.0, &n2).unwrap(), 1.0, epsilon = 1e-12);
        let phi2 = OrliczFunction::phi(2.0).unwrap();
        let expected = 0.5 * phi2.inv(2.0);
        assert_abs_diff_eq!(
            dual_norm_indicator(&m, 0.5, &phi2).unwrap(),
            expected,
            epsilon = 1e-10
        );
        let sqrtn = OrliczFunction::power(0.5).unwrap();
        assert!(matches!(dual_norm_indicator(&m, 0.5, &sqrtn), Err(Error::NotYoung { .. })));
    }

    #[test]
    fn adjoint_of_power_and_involution() {
        let n = OrliczFunction::power(3.0).unwrap();
        let adj = n.adjoint();
        for t in [1e-6, 1e-2, 0.5, 1.0, 7.0, 1e5] {
            assert_abs_diff_eq!(adj.eval(t), math::pow(t, 1.0 / 3.0), epsilon = 1e-9);
        }
        for base in [
            OrliczFunction::power(2.0).unwrap(),
            OrliczFunction::phi(1.5).unwrap(),
            OrliczFunction::phi(2.0).unwrap(),
        ] {
            let back = base.adjoint().adjoint();
            for t in [1e-4, 0.3, 1.0, 42.0] {
                let (a, b) = (base.eval(t), back.eval(t));
                assert!(
                    math::fabs(a - b) <= 1e-8 * (1.0 + math::fabs(a)),
                    "involution broke at {t}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn adjoint_power_rescaling_identity() {
        // N(t^alpha)^ = (N^)^{1/alpha}
        let n = OrliczFunction::phi(2.0).unwrap();
        let alpha = 2.0;
        let n_inner = n.clone();
        let n_inner2 = n.clone();
        let composed = OrliczFunction::from_parts(
            OrliczTag::Custom,
            "phi2(t^2)",
            move |t| n_inner.eval(math::pow(t, alpha)),
            move |y| math::pow(n_inner2.inv(y), 1.0 / alpha),
        );
        for t in [1e-3, 0.2, 0.5, 2.0, 50.0] {
            let lhs = composed.wedge(t);
            let rhs = math::pow(n.wedge(t), 1.0 / alpha);
            assert!(math::fabs(lhs - rhs) <= 1e-9 * (1.0 + rhs), "at {t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn weak_norm_below_strong_norm() {
        let m = build("gaussian");
        let n = OrliczFunction::phi(2.0).unwrap();
        let f = GridFunction::new(
            alloc::vec![-2.0, -0.5, 0.3, 1.7],
            alloc::vec![0.2, 1.4, -0.6, 0.9],
            Extrapolation::None,
        )
        .unwrap();
        let strong = orlicz_norm(&f, &m, &n).unwrap();
        let weak = weak_orlicz_norm(&f, &m, &n);
        assert!(weak <= strong * (1.0 + 1e-9), "weak {weak} > strong {strong}");
        let zero =
            GridFunction::new(alloc::vec![0.0, 1.0], alloc::vec![0.0, 0.0], Extrapolation::None)
                .unwrap();
        assert_eq!(weak_orlicz_norm(&zero, &m, &n), 0.0);
    }

    #[test]
    fn legendre_closed_forms() {
        let n2 = OrliczFunction::power(2.0).unwrap();
        assert_abs_diff_eq!(legendre(&n2, 2.0), 1.0, epsilon = 1e-8);
        let n1 = OrliczFunction::power(1.0).unwrap();
        assert_eq!(legendre(&n1, 2.0), f64::INFINITY);
        assert_abs_diff_eq!(legendre(&n1, 0.5), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn truncation_behaviour() {
        // power functions are fixed points
        let n = OrliczFunction::power(2.0).unwrap();
        let t0 = truncate_at_zero(&n, 2.0).unwrap();
        for t in [0.01, 0.5, 1.0, 3.0] {
            assert_abs_diff_eq!(t0.eval(t), n.eval(t), epsilon = 1e-12);
        }
        // splice continuity
        let phi = OrliczFunction::phi(2.0).unwrap();
        let tr = truncate_at_zero(&phi, 2.0).unwrap();
        let s2 = phi.inv(2.0);
        assert!(math::fabs(tr.eval(s2 * (1.0 - 1e-12)) - 2.0) <= 1e-9);
        // adjoint agrees with the original on [0, 1/2] and is an exact power
        // beyond: N0^(t) = 2^{1/q}/phi_q^{-1}(2) t^{1/q} for t >= 1/2
        for t in [0.01, 0.1, 0.3, 0.5] {
            assert!(math::fabs(tr.wedge(t) - phi.wedge(t)) <= 1e-9 * (1.0 + phi.wedge(t)));
        }
        let coeff = math::sqrt(2.0) / s2;
        for t in [0.5, 1.0, 4.0] {
            assert_abs_diff_eq!(tr.wedge(t), coeff * math::sqrt(t), epsilon = 1e-9);
        }
        // ratio predicate preserved
        let rep = check_predicates(&tr, 2.0, 1.0);
        assert!(rep.ratio_nondecreasing.1.holds());
    }

    #[test]
    fn predicate_checks() {
        // t^p has N(t^alpha)/t = t^(p alpha - 1), non-increasing iff alpha <= 1/p
        let n2 = OrliczFunction::power(2.0).unwrap();
        let rep = check_predicates(&n2, 2.0, 0.5);
        assert!(rep.is_young.holds());
        assert!(rep.ratio_nondecreasing.1.holds());
        assert!(rep.power_nonincreasing.1.holds());
        let rep = check_predicates(&n2, 2.0, 1.0);
        assert!(matches!(rep.power_nonincreasing.1, TriState::FailsAt(_)));

        let phi = OrliczFunction::phi(2.0).unwrap();
        let rep = check_predicates(&phi, 2.0, 1.0 / 4.0);
        assert!(rep.is_young.holds());
        assert!(rep.ratio_nondecreasing.1.holds());
        assert!(rep.power_nonincreasing.1.holds(), "phi_q with alpha = 1/(2q)");

        let sq = OrliczFunction::power(0.5).unwrap();
        let rep = check_predicates(&sq, 2.0, 1.0);
        assert!(matches!(rep.is_young, TriState::FailsAt(_)));
    }

    #[test]
    fn median_and_expectation_basics() {
        let m = build("gaussian");
        let f =
            GridFunction::new(alloc::vec![-3.0, 3.0], alloc::vec![-3.0, 3.0], Extrapolation::None)
                .unwrap();
        assert_abs_diff_eq!(median_of(&f, &m), 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(expectation(&f, &m).unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn median_expectation_norm_comparability_small_sample() {
        // deterministic miniature of the median/expectation comparability sweep
        let measures = ["gaussian", "exponential", "uniform:-1,2"];
        let ns = [OrliczFunction::power(2.0).unwrap(), OrliczFunction::phi(1.5).unwrap()];
        let mut seed = 0x243f_6a88_85a3_08d3u64;
        let mut rng = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for tok in measures {
            let m = build(tok);
            for n in &ns {
                for _ in 0..4 {
                    let (lo, hi) = (m.quantile(0.02), m.quantile(0.98));
                    let k = 5;
                    let knots: Vec<f64> =
                        (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect();
                    let values: Vec<f64> = (0..k).map(|_| 4.0 * rng() - 2.0).collect();
                    let f = GridFunction::new(knots, values, Extrapolation::None).unwrap();
                    let e = expectation(&f, &m).unwrap();
                    let med = median_of(&f, &m);
                    let ne = orlicz_norm_shifted(&f, e, &m, n).unwrap();
                    let nm = orlicz_norm_shifted(&f, med, &m, n).unwrap();
                    assert!(
                        0.5 * ne <= nm * (1.0 + 1e-7) && nm <= 3.0 * ne * (1.0 + 1e-7),
                        "comparability failed on {tok}: |f-E| = {ne}, |f-M| = {nm}"
                    );
                }
            }
        }
    }
}
