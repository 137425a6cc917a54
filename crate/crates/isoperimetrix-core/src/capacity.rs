//! Weighted q-capacities on the line.
//!
//! `Cap_q(a, b)` is the infimum of the `L_q(mu)` norm of `|Phi'|` over
//! `[0,1]`-valued test functions with plateau masses `mu{Phi=1} >= a` and
//! `mu{Phi=0} >= 1-b`. In one dimension the extremal ramp between two points
//! is explicit, which gives interval capacities in closed form; `Cap_q(t,1/2)`
//! is realized over half-line and symmetric two-tail configurations, with an
//! independent discretized minimizer ([`cap_oracle`]) as the safety net.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::measures::Measure1D;
use crate::numerics::{self, QuadratureConfig};
use crate::orlicz::{self, OrliczFunction, TriState};
use crate::profiles::{profile_of, Profile};

/// How a capacity bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Exact over the searched configuration family.
    ExactConfig,
    /// A certified lower bound.
    LowerBound,
    /// Output of the discretized variational oracle.
    Oracle,
}

/// Exponent `q` plus a lower-bound function `t -> L(t) <= Cap_q(t, 1/2)`.
#[derive(Clone)]
pub struct CapacityBound {
    q: f64,
    kind: BoundKind,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    desc: String,
}

impl core::fmt::Debug for CapacityBound {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CapacityBound")
            .field("q", &self.q)
            .field("kind", &self.kind)
            .field("desc", &self.desc)
            .finish()
    }
}

impl CapacityBound {
    pub fn from_fn(
        q: f64,
        kind: BoundKind,
        desc: &str,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> CapacityBound {
        CapacityBound { q, kind, eval: Arc::new(eval), desc: desc.to_string() }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn kind(&self) -> BoundKind {
        self.kind
    }

    pub fn describe(&self) -> &str {
        &self.desc
    }

    /// `L(t)` on (0, 1/2].
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn sample(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&t| (t, self.eval(t))).collect()
    }
}

/// Conjugate exponent `q* = q/(q-1)`; `+inf` at `q = 1`.
pub fn conjugate(q: f64) -> f64 {
    if q <= 1.0 {
        f64::INFINITY
    } else {
        q / (q - 1.0)
    }
}

/// Exact capacity between the endpoints of `[a, b]`:
/// `(integral of rho^{-1/(q-1)})^{-(q-1)/q}`, the minimum of the ramp energy
/// over functions with `Phi(a) = 1`, `Phi(b) = 0`.
///
/// Returns 0 when the inverse-density integral diverges (the capacity
/// genuinely degenerates, e.g. across a density zero).
pub fn interval_capacity(m: &Measure1D, a: f64, b: f64, q: f64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::InvalidParameter {
            detail: format!("interval capacity needs q > 1, got {q}"),
        });
    }
    if !(a < b) {
        return Err(Error::InvalidParameter { detail: format!("need a < b, got [{a}, {b}]") });
    }
    let integral = m.inv_density_integral(a, b, 1.0 / (q - 1.0))?;
    if !integral.is_finite() {
        return Ok(0.0);
    }
    if integral <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(math::pow(integral, -(q - 1.0) / q))
}

/// `Cap_q(t, 1/2)` via configuration search.
///
/// `q = 1` goes through the profile (the capacity-profile identity makes the
/// infimum of `I` over `[t, 1/2]` exact up to the endpoint convention);
/// `q > 1` takes the best of the left half-line, right half-line and (for
/// even measures) the symmetric two-tail configuration with the per-side ramp
/// energies summed before the `1/q` power.
pub fn capq(m: &Measure1D, q: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 0.5) {
        return Err(Error::InvalidParameter { detail: format!("t must be in (0, 1/2], got {t}") });
    }
    if q < 1.0 {
        return Err(Error::InvalidParameter { detail: format!("q must be >= 1, got {q}") });
    }
    if q == 1.0 {
        let p = profile_of(m);
        if t >= 0.5 {
            return Ok(p.eval(0.5));
        }
        let grid = numerics::log_grid(t, 0.5, 256);
        let (_, v) = numerics::inf_scan_grid(&|s| p.eval(s), &grid)?;
        return Ok(v.max(0.0));
    }
    let median = m.quantile(0.5);
    let mut best = f64::INFINITY;
    if t < 0.5 {
        let left = interval_capacity(m, m.quantile(t), median, q)?;
        let right = interval_capacity(m, median, m.quantile(1.0 - t), q)?;
        best = left.min(right);
    }
    if m.is_even() {
        // Phi = 1 on both tails of total mass t, 0 on the central half
        let x0 = m.quantile(0.75);
        let x1 = m.quantile(1.0 - 0.5 * t);
        if x1 > x0 {
            let integral = m.inv_density_integral(x0, x1, 1.0 / (q - 1.0))?;
            if integral.is_finite() && integral > 0.0 {
                let sym = math::pow(2.0, 1.0 / q) * math::pow(integral, -(q - 1.0) / q);
                best = best.min(sym);
            }
        }
    }
    Ok(best)
}

/// The capacity-profile identity at `q = 1`: a non-decreasing profile bound
/// is the same thing as a `Cap_1(t, 1/2)` bound.
pub fn cap1_profile_bridge(p: &Profile) -> Result<CapacityBound> {
    let grid = numerics::log_grid(1e-8, 0.5, 64);
    let mut prev = 0.0f64;
    for &t in &grid {
        let v = p.eval(t);
        if v < prev * (1.0 - 1e-9) - 1e-12 {
            return Err(Error::NotMonotone { witness: t });
        }
        prev = v;
    }
    let inner = p.clone();
    Ok(CapacityBound::from_fn(
        1.0,
        BoundKind::LowerBound,
        &format!("cap1({})", p.describe()),
        move |t| inner.eval(t),
    ))
}

/// The converse reading of the same identity: a `Cap_1` lower bound certifies
/// the symmetrized profile from below.
pub fn cap1_bound_to_profile(b: &CapacityBound) -> Result<Profile> {
    if b.q() != 1.0 {
        return Err(Error::InvalidParameter {
            detail: format!("profile bridge needs q = 1, got {}", b.q()),
        });
    }
    let inner = b.clone();
    Ok(Profile::from_fn(
        &format!("profile-from({})", b.describe()),
        crate::profiles::Provenance::UserSupplied,
        move |t| inner.eval(t.min(1.0 - t)),
    ))
}

/// `gamma_{p,p0} = (p0/p - 1)^{1/p0} / (1 - p/p0)^{1/p}`, the constant of the
/// capacity-exponent lifting; 1 in the `p0 = inf` limit.
pub fn lift_gamma(p: f64, p0: f64) -> f64 {
    if p0.is_infinite() {
        return 1.0;
    }
    if p == p0 {
        return f64::INFINITY;
    }
    math::pow(p0 / p - 1.0, 1.0 / p0) / math::pow(1.0 - p / p0, 1.0 / p)
}

/// Lift a `Cap_{q0}` lower bound to a `Cap_q` lower bound (`q >= q0`):
///
/// `L_q(a) = gamma^{-1} (integral_a^{1/2} (s-a)^{-p/p0} L_{q0}(s)^{-p} ds)^{-1/p}`
///
/// with `p = q*`, `p0 = q0*`. The identity at `q = q0`.
pub fn lift(bound: &CapacityBound, q: f64) -> Result<CapacityBound> {
    let q0 = bound.q();
    if q < q0 {
        return Err(Error::InvalidParameter {
            detail: format!("can only lift upward: q = {q} < q0 = {q0}"),
        });
    }
    if q == q0 {
        return Ok(bound.clone());
    }
    let p = conjugate(q);
    let p0 = conjugate(q0);
    let w = if p0.is_infinite() { 0.0 } else { p / p0 };
    let gamma = lift_gamma(p, p0);
    let inner = bound.clone();
    let cfg = QuadratureConfig::default();
    let desc = format!("lift({} -> q={q})", bound.describe());
    Ok(CapacityBound::from_fn(q, BoundKind::LowerBound, &desc, move |a| {
        if !(a > 0.0 && a < 0.5) {
            return if a >= 0.5 { f64::INFINITY } else { 0.0 };
        }
        let g = |s: f64| {
            let l = inner.eval(s);
            if !(l > 0.0) {
                return f64::INFINITY;
            }
            math::pow(l, -p)
        };
        match numerics::integrate_singular_left(&g, a, 0.5, w, &cfg) {
            Ok(v) if v.is_finite() && v > 0.0 => math::pow(v, -1.0 / p) / gamma,
            Ok(_) => 0.0,
            Err(_) => 0.0,
        }
    }))
}

/// Proof-exact constant for [`singularity_smooth`]:
/// `delta^p = 2^{p/p0} + 2^{p/alpha} / (2^{1 - p/p0} - 1)`.
pub fn smoothing_delta(p: f64, p0: f64, alpha: f64) -> f64 {
    let w = if p0.is_infinite() { 0.0 } else { p / p0 };
    math::pow(
        math::pow(2.0, w) + math::pow(2.0, p / alpha) / (math::pow(2.0, 1.0 - w) - 1.0),
        1.0 / p,
    )
}

/// Both sides of the weight-smoothing estimate: the singular weight
/// `(s-t)^{-p/p0}` against `N^(s)^{-p}` is controlled by the smooth weight
/// `s^{-p/p0}`, at the cost of the explicit factor [`smoothing_delta`].
///
/// Returns `(lhs, rhs, delta)` with `lhs <= delta * rhs` verified.
/// Requires `N(t)^{1/alpha}/t` non-decreasing and `p < p0` strictly.
pub fn singularity_smooth(
    n: &OrliczFunction,
    q: f64,
    q0: f64,
    alpha: f64,
    t: f64,
) -> Result<(f64, f64, f64)> {
    if !(q >= q0) {
        return Err(Error::InvalidParameter {
            detail: format!("need q >= q0 for p <= p0, got q = {q}, q0 = {q0}"),
        });
    }
    let p = conjugate(q);
    let p0 = conjugate(q0);
    if p == p0 {
        return Err(Error::InvalidParameter {
            detail: "p = p0 is degenerate (the smoothing constant diverges)".to_string(),
        });
    }
    let report = orlicz::check_predicates(n, alpha, 1.0);
    if let TriState::FailsAt(wit) = report.ratio_nondecreasing.1 {
        return Err(Error::PredicateFails {
            predicate: format!("N(t)^(1/{alpha})/t non-decreasing"),
            witness: wit,
        });
    }
    let w = if p0.is_infinite() { 0.0 } else { p / p0 };
    let cfg = QuadratureConfig::default();
    let core = |s: f64| math::pow(n.wedge(s), -p);
    let sing_tail = |s: f64| {
        let weight = if w == 0.0 { 1.0 } else { math::pow(s - t, -w) };
        weight * core(s)
    };
    let smooth = |s: f64| {
        let weight = if w == 0.0 { 1.0 } else { math::pow(s, -w) };
        weight * core(s)
    };
    // head [t, 2t] via the singularity-removing substitution, tail beyond
    let lhs_p = numerics::integrate_singular_left(&core, t, 2.0 * t, w, &cfg)?
        + numerics::integrate_semi_infinite(&sing_tail, 2.0 * t, &cfg, None)?;
    let rhs_p = numerics::integrate_semi_infinite(&smooth, t, &cfg, None)?;
    let (lhs, rhs) = (math::pow(lhs_p, 1.0 / p), math::pow(rhs_p, 1.0 / p));
    let delta = smoothing_delta(p, p0, alpha);
    if lhs > delta * rhs * (1.0 + 1e-9) {
        return Err(Error::PredicateFails {
            predicate: format!("smoothing estimate lhs <= delta rhs (lhs={lhs}, rhs={rhs})"),
            witness: t,
        });
    }
    Ok((lhs, rhs, delta))
}

/// Result of the discretized variational minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// `(min energy)^{1/q}`.
    pub value: f64,
    /// Which plateau configuration won.
    pub config: String,
    /// A non-monotone configuration beat the monotone ones by more than 2%.
    pub nonmonotone_won: bool,
}

/// Discretized capacity oracle: minimizes the energy
/// `sum_j mass_j |dPhi/dx|^q` over piecewise-linear `Phi in [0,1]` on a
/// quantile-spaced grid, with the plateau constraints `mu{Phi=1} >= t`,
/// `mu{Phi=0} >= 1/2` enforced by sweeping pinned regions. Deterministic
/// (fixed sweep order), and independent of the closed-form ramp used by
/// [`interval_capacity`]: the inner minimization is plain coordinate descent.
pub fn cap_oracle(m: &Measure1D, q: f64, t: f64, grid_size: usize) -> Result<f64> {
    cap_oracle_detailed(m, q, t, grid_size).map(|r| r.value)
}

pub fn cap_oracle_detailed(
    m: &Measure1D,
    q: f64,
    t: f64,
    grid_size: usize,
) -> Result<OracleResult> {
    if grid_size < 64 {
        return Err(Error::InvalidParameter {
            detail: format!("oracle grid must have >= 64 cells, got {grid_size}"),
        });
    }
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::InvalidParameter { detail: format!("t must be in (0, 1/2), got {t}") });
    }
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter { detail: format!("q must be >= 1, got {q}") });
    }
    // quantile grid with the plateau breakpoints included exactly
    let mut us: Vec<f64> = (0..=grid_size).map(|i| i as f64 / grid_size as f64).collect();
    let breakpoints = [
        t,
        0.5,
        1.0 - t,
        0.5 * t,
        1.0 - 0.5 * t,
        0.25,
        0.75,
        0.5 - 0.5 * t,
        0.5 + 0.5 * t,
    ];
    us.extend(breakpoints);
    // boundary-layer refinement: the extremal ramp concentrates where the
    // density is smallest, right against the plateau edges
    for b in breakpoints {
        for d in [1e-5, 1e-4, 1e-3] {
            us.push(b - d);
            us.push(b + d);
        }
    }
    us.retain(|u| *u > 0.0 && *u < 1.0);
    us.push(1e-6);
    us.push(1.0 - 1e-6);
    us.sort_by(|a, b| a.partial_cmp(b).unwrap());
    us.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let xs: Vec<f64> = us.iter().map(|&u| m.quantile(u)).collect();
    let n = xs.len();
    let mut cells: Vec<(f64, f64)> = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let mass = us[i + 1] - us[i];
        let width = xs[i + 1] - xs[i];
        cells.push((mass, width.max(1e-300)));
    }

    let find = |u: f64| -> usize { us.partition_point(|v| *v < u - 1e-12) };
    let eps = 1e-9;

    // pinned regions: (first node, last node, level)
    let mut configs: Vec<(String, Vec<(usize, usize, f64)>)> = Vec::new();
    configs.push((
        "left-half-line".to_string(),
        alloc::vec![(0usize, find(t), 1.0), (find(0.5), n - 1, 0.0)],
    ));
    configs.push((
        "right-half-line".to_string(),
        alloc::vec![(find(1.0 - t), n - 1, 1.0), (0usize, find(0.5), 0.0)],
    ));
    if m.is_even() {
        configs.push((
            "two-tail".to_string(),
            alloc::vec![
                (0usize, find(0.5 * t), 1.0),
                (find(1.0 - 0.5 * t), n - 1, 1.0),
                (find(0.25), find(0.75), 0.0),
            ],
        ));
        configs.push((
            "center-plug".to_string(),
            alloc::vec![
                (find(0.5 - 0.5 * t), find(0.5 + 0.5 * t), 1.0),
                (0usize, find(0.25), 0.0),
                (find(0.75), n - 1, 0.0),
            ],
        ));
    }

    let energy = |phi: &[f64]| -> f64 {
        let mut e = 0.0;
        for (i, (mass, width)) in cells.iter().enumerate() {
            let slope = math::fabs(phi[i + 1] - phi[i]) / width;
            if slope > 0.0 {
                e += mass * math::pow(slope, q);
            }
        }
        e
    };

    let mut best: Option<(f64, String)> = None;
    let mut monotone_best = f64::INFINITY;
    for (name, pins) in &configs {
        let mut phi = alloc::vec![f64::NAN; n];
        let mut pinned = alloc::vec![false; n];
        for &(a, b, level) in pins {
            for j in a..=b.min(n - 1) {
                phi[j] = level;
                pinned[j] = true;
            }
        }
        // plateau masses, counting the off-grid tails
        let mut mass_one = 0.0;
        let mut mass_zero = 0.0;
        for (i, (mass, _)) in cells.iter().enumerate() {
            if pinned[i] && pinned[i + 1] && phi[i] == phi[i + 1] {
                if phi[i] == 1.0 {
                    mass_one += mass;
                } else {
                    mass_zero += mass;
                }
            }
        }
        if phi[0] == 1.0 {
            mass_one += us[0];
        } else if phi[0] == 0.0 {
            mass_zero += us[0];
        }
        if phi[n - 1] == 1.0 {
            mass_one += 1.0 - us[n - 1];
        } else if phi[n - 1] == 0.0 {
            mass_zero += 1.0 - us[n - 1];
        }
        if mass_one + eps < t || mass_zero + eps < 0.5 {
            continue;
        }
        // free nodes start linear-in-mass between their pinned neighbors
        let mut i = 0usize;
        while i < n {
            if pinned[i] {
                i += 1;
                continue;
            }
            let lo = (0..i).rev().find(|&j| pinned[j]);
            let hi = (i..n).find(|&j| pinned[j]);
            match (lo, hi) {
                (Some(a), Some(b)) => {
                    let span = us[b] - us[a];
                    for j in a + 1..b {
                        phi[j] = phi[a] + (phi[b] - phi[a]) * (us[j] - us[a]) / span;
                    }
                    i = b;
                }
                (Some(a), None) => {
                    for j in a + 1..n {
                        phi[j] = phi[a];
                    }
                    break;
                }
                (None, Some(b)) => {
                    for j in 0..b {
                        phi[j] = phi[b];
                    }
                    i = b;
                }
                (None, None) => {
                    return Err(Error::InvalidParameter {
                        detail: "configuration pins nothing".to_string(),
                    })
                }
            }
        }
        // coordinate descent, fixed sweep order
        let mut e_prev = energy(&phi);
        let mut quiet = 0;
        for _sweep in 0..20_000 {
            for j in 1..n - 1 {
                if pinned[j] {
                    continue;
                }
                let (m_l, w_l) = cells[j - 1];
                let (m_r, w_r) = cells[j];
                let a = phi[j - 1];
                let b = phi[j + 1];
                let new = if q == 2.0 {
                    let cl = m_l / (w_l * w_l);
                    let cr = m_r / (w_r * w_r);
                    (cl * a + cr * b) / (cl + cr)
                } else {
                    let node = |v: f64| {
                        m_l * math::pow(math::fabs(v - a) / w_l, q)
                            + m_r * math::pow(math::fabs(b - v) / w_r, q)
                    };
                    let (lo, hi) = (a.min(b), a.max(b));
                    if hi - lo < 1e-15 {
                        a
                    } else {
                        numerics::golden_min(&node, lo, hi, 60).0
                    }
                };
                phi[j] = new.clamp(0.0, 1.0);
            }
            let e_now = energy(&phi);
            if e_prev - e_now <= 1e-12 * e_prev.max(1e-300) {
                quiet += 1;
                if quiet >= 3 {
                    e_prev = e_now;
                    break;
                }
            } else {
                quiet = 0;
            }
            e_prev = e_now;
        }
        let value = math::pow(e_prev, 1.0 / q);
        if name.ends_with("half-line") {
            monotone_best = monotone_best.min(value);
        }
        if best.as_ref().map_or(true, |(v, _)| value < *v) {
            best = Some((value, name.clone()));
        }
    }
    let (value, config) = best
        .ok_or(Error::NonConvergent { detail: "no feasible oracle configuration".to_string() })?;
    let nonmonotone_won = !config.ends_with("half-line") && value < monotone_best * (1.0 - 0.02);
    Ok(OracleResult { value, config, nonmonotone_won })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{MeasureSpec, ParsedMeasure};
    use approx::assert_abs_diff_eq;

    fn build(token: &str) -> Measure1D {
        match MeasureSpec::parse(token).unwrap() {
            ParsedMeasure::Spec(s) => Measure1D::build(&s).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn interval_capacity_closed_forms() {
        let e = build("exponential");
        let v = interval_capacity(&e, -core::f64::consts::LN_2, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(v, 1.0 / math::sqrt(2.0), epsilon = 1e-9);
        let u = build("uniform:0,1");
        assert_abs_diff_eq!(interval_capacity(&u, 0.25, 0.5, 2.0).unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn interval_capacity_domain_monotone() {
        let g = build("gaussian");
        let narrow = interval_capacity(&g, -0.5, 0.5, 2.0).unwrap();
        let wide = interval_capacity(&g, -1.0, 1.0, 2.0).unwrap();
        assert!(wide < narrow, "wider interval must have smaller capacity");
    }

    #[test]
    fn capq_exponential_values() {
        let e = build("exponential");
        for t in [0.1, 0.25, 0.4] {
            assert_abs_diff_eq!(capq(&e, 1.0, t).unwrap(), t, epsilon = 1e-6);
        }
        // q = 2 at t = 1/4: closed form 1/sqrt(2); the symmetric two-tail
        // configuration gives the same value
        let v = capq(&e, 2.0, 0.25).unwrap();
        assert_abs_diff_eq!(v, 1.0 / math::sqrt(2.0), epsilon = 1e-9);
        let x0 = e.quantile(0.75);
        let x1 = e.quantile(1.0 - 0.125);
        let integral = e.inv_density_integral(x0, x1, 1.0).unwrap();
        let sym = math::sqrt(2.0) * math::pow(integral, -0.5);
        assert_abs_diff_eq!(sym, v, epsilon = 1e-9);
    }

    #[test]
    fn capq_gaussian_envelope_sane() {
        let g = build("gaussian");
        for t in [1e-4, 1e-2, 0.1, 0.3] {
            let v = capq(&g, 2.0, t).unwrap();
            let envelope = math::sqrt(t) * math::sqrt(math::log1p(1.0 / t));
            let ratio = v / envelope;
            assert!((0.3..4.0).contains(&ratio), "t={t}: cap={v}, envelope={envelope}");
        }
    }

    #[test]
    fn profile_bridge_both_ways() {
        let e = build("exponential");
        let p = profile_of(&e);
        let b = cap1_profile_bridge(&p).unwrap();
        for t in [0.05, 0.2, 0.5] {
            assert_abs_diff_eq!(b.eval(t), t, epsilon = 1e-9);
        }
        let back = cap1_bound_to_profile(&b).unwrap();
        assert_abs_diff_eq!(back.eval(0.3), 0.3, epsilon = 1e-9);
        // trivial zero bound passes
        let zero = Profile::from_fn("zero", crate::profiles::Provenance::Analytic, |_| 0.0);
        assert!(cap1_profile_bridge(&zero).is_ok());
        // gaussian profile restricted to [0, 1/2]
        let g = cap1_profile_bridge(&crate::profiles::gaussian_profile()).unwrap();
        assert_abs_diff_eq!(g.eval(0.5), 0.3989422804014327, epsilon = 1e-9);
    }

    #[test]
    fn lift_constant_closed_form() {
        let c = 0.7;
        let b = CapacityBound::from_fn(1.0, BoundKind::LowerBound, "const", move |_| c);
        let lifted = lift(&b, 2.0).unwrap();
        for a in [0.05, 0.2, 0.4] {
            // gamma_{2, inf} = 1 and L_2(a) = c (1/2 - a)^{-1/2}
            assert_abs_diff_eq!(lifted.eval(a), c / math::sqrt(0.5 - a), epsilon = 1e-8);
        }
        assert_abs_diff_eq!(lift_gamma(2.0, f64::INFINITY), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn lift_identity_and_monotonicity() {
        let small = CapacityBound::from_fn(1.0, BoundKind::LowerBound, "s", |t| t);
        let large = CapacityBound::from_fn(1.0, BoundKind::LowerBound, "l", |t| 2.0 * t);
        let same = lift(&small, 1.0).unwrap();
        for t in [0.1, 0.3] {
            assert_eq!(same.eval(t), small.eval(t));
        }
        let ls = lift(&small, 2.0).unwrap();
        let ll = lift(&large, 2.0).unwrap();
        for t in [0.05, 0.2, 0.45] {
            assert!(ll.eval(t) >= ls.eval(t), "lift must preserve pointwise order");
        }
        assert!(matches!(lift(&large, 0.5), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn smoothing_estimate_holds() {
        // linear-near-zero truncation of t^2 keeps the tail integrable for
        // the q0 = 1 lift
        let n = OrliczFunction::power(2.0).unwrap();
        let n0 = orlicz::truncate_at_zero(&n, 1.0).unwrap();
        let (lhs, rhs, delta) = singularity_smooth(&n0, 2.0, 1.0, 1.0, 0.1).unwrap();
        assert!(lhs <= delta * rhs);
        assert!(lhs >= rhs * (1.0 - 1e-9), "singular weight dominates the smooth one");
        // proof-exact constant at (p, p0, alpha) = (2, inf, 1)
        assert_abs_diff_eq!(delta, math::sqrt(5.0), epsilon = 1e-12);
        // p = p0 rejected
        assert!(singularity_smooth(&n0, 1.5, 1.5, 1.0, 0.1).is_err());
        // phi:2 truncated at q0 = 1.5, lifted within q = 2
        let phi = OrliczFunction::phi(2.0).unwrap();
        let phi0 = orlicz::truncate_at_zero(&phi, 1.5).unwrap();
        let (l2, r2, d2) = singularity_smooth(&phi0, 2.0, 1.5, 1.5, 0.2).unwrap();
        assert!(l2.is_finite() && r2.is_finite() && l2 <= d2 * r2);
    }

    #[test]
    fn oracle_matches_closed_forms() {
        let e = build("exponential");
        let v = cap_oracle(&e, 2.0, 0.25, 256).unwrap();
        let exact = 1.0 / math::sqrt(2.0);
        assert!(math::fabs(v - exact) <= 0.02 * exact, "oracle {v} vs closed form {exact}");
        let u = build("uniform:0,1");
        let v = cap_oracle(&u, 2.0, 0.25, 256).unwrap();
        assert!(math::fabs(v - 2.0) <= 0.04, "oracle {v} vs 2.0");
    }

    #[test]
    fn cap1_sandwich_against_oracles() {
        // profile infimum vs the discretized minimizer, once with total
        // variation (q = 1) and once with barely superlinear energies
        let pairs: [(&str, f64); 10] = [
            ("exponential", 0.05),
            ("exponential", 0.15),
            ("exponential", 0.3),
            ("exponential", 0.45),
            ("gaussian", 0.05),
            ("gaussian", 0.2),
            ("gaussian", 0.4),
            ("uniform:0,1", 0.1),
            ("uniform:0,1", 0.25),
            ("uniform:0,1", 0.45),
        ];
        // the barely-superlinear exponent must sit very close to 1: the
        // continuum value already deviates from the boundary-measure limit
        // by a factor t^{-(q-1)}, which blows past 2% for q = 1.01
        for (tok, t) in pairs {
            let m = build(tok);
            let via_profile = capq(&m, 1.0, t).unwrap();
            for q in [1.0, 1.001] {
                let oracle = cap_oracle(&m, q, t, 128).unwrap();
                assert!(
                    oracle >= via_profile * (1.0 - 1e-3),
                    "{tok} t={t} q={q}: oracle {oracle} below profile infimum {via_profile}"
                );
                assert!(
                    (oracle - via_profile).abs() <= 0.02 * via_profile + 1e-6,
                    "{tok} t={t} q={q}: oracle {oracle} vs profile infimum {via_profile}"
                );
            }
        }
    }

    #[test]
    fn cap2_exponential_dominates_adjoint_shape() {
        // with the square function the exponential capacity never drops
        // below 0.9 of the sqrt(t) shape on [1e-4, 0.45]
        let e = build("exponential");
        for &t in numerics::log_grid(1e-4, 0.45, 24).iter() {
            let ratio = capq(&e, 2.0, t).unwrap() / math::sqrt(t);
            assert!(ratio >= 0.9, "ratio {ratio} at t = {t}");
        }
    }

    #[test]
    fn oracle_never_beats_configurations_by_much() {
        for (tok, q, t) in [
            ("exponential", 2.0, 0.25),
            ("exponential", 3.0, 0.1),
            ("gaussian", 2.0, 0.2),
            ("uniform:0,1", 1.5, 0.3),
        ] {
            let m = build(tok);
            let cfg_value = capq(&m, q, t).unwrap();
            let oracle = cap_oracle(&m, q, t, 256).unwrap();
            assert!(
                oracle >= cfg_value * (1.0 - 0.02),
                "{tok} q={q} t={t}: oracle {oracle} below configuration {cfg_value}"
            );
        }
    }
}
