//! Isoperimetric profiles.
//!
//! The profile of a 1-D measure is realized over half-line competitors,
//! `I(t) = min(rho(Q(t)), rho(Q(1-t)))`, which is exact for even log-concave
//! measures and an upper bound otherwise (the provenance records which).
//! Also here: the Gaussian profile and its elementary comparator
//! `I0(t) = t log^{1/2}(1 + 1/t)`, the Cheeger and Gaussian hierarchy
//! constants, and the bijection between symmetric concave profiles and even
//! log-concave measures.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::measures::Measure1D;
use crate::numerics::{self, SCAN_FLOOR, SCAN_POINTS_PER_DECADE};

/// Where a profile came from, and whether it is exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// Computed from a measure over half-line competitors. `exact` is set
    /// when the measure's log-concavity certificate verifies (Bobkov's
    /// characterization makes half-lines extremal); otherwise the values are
    /// upper bounds.
    MeasureDerived { exact: bool },
    Analytic,
    UserSupplied,
}

/// A function `J` on `[0, 1]` with its symmetrized restriction
/// `J~(t) = min(J(t), J(1-t))`.
#[derive(Clone)]
pub struct Profile {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    provenance: Provenance,
    desc: String,
}

impl core::fmt::Debug for Profile {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Profile")
            .field("provenance", &self.provenance)
            .field("desc", &self.desc)
            .finish()
    }
}

impl Profile {
    pub fn from_fn(
        desc: &str,
        provenance: Provenance,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Profile {
        Profile { eval: Arc::new(eval), provenance, desc: desc.to_string() }
    }

    /// `J(t)`; 0 at the endpoints by continuity.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 || t >= 1.0 {
            return 0.0;
        }
        (self.eval)(t)
    }

    /// `J~(t) = min(J(t), J(1-t))` on `[0, 1/2]`.
    pub fn tilde(&self, t: f64) -> f64 {
        self.eval(t).min(self.eval(1.0 - t))
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn describe(&self) -> &str {
        &self.desc
    }

    /// Scale by a positive constant.
    pub fn scaled(&self, c: f64) -> Profile {
        let inner = Arc::clone(&self.eval);
        Profile {
            eval: Arc::new(move |t| c * inner(t)),
            provenance: self.provenance.clone(),
            desc: format!("{} * {c}", self.desc),
        }
    }

    /// Sample `(t, J(t))` on a grid.
    pub fn sample(&self, grid: &[f64]) -> Vec<(f64, f64)> {
        grid.iter().map(|&t| (t, self.eval(t))).collect()
    }

    /// Default export grid: `n` log-spaced points on (0, 1/2] mirrored onto
    /// [1/2, 1).
    pub fn export_grid(n: usize) -> Vec<f64> {
        let half = numerics::log_grid(1e-8, 0.5, (n / 16).max(2));
        let mut grid: Vec<f64> = half.clone();
        grid.extend(half.iter().rev().map(|t| 1.0 - t));
        grid.dedup();
        grid
    }
}

/// Half-line profile of a measure: `I(t) = min(rho(Q(t)), rho(Q(1-t)))`.
///
/// Evaluation goes through the small-side mass and the cancellation-free
/// upper quantile, so the deep range stays smooth enough for quadrature.
pub fn profile_of(m: &Measure1D) -> Profile {
    let exact = m.log_concavity().is_verified();
    let desc = format!("profile({})", m.describe());
    let mm = m.clone();
    Profile::from_fn(&desc, Provenance::MeasureDerived { exact }, move |t| {
        let u = t.min(1.0 - t);
        let lower = mm.density(mm.quantile(u));
        if mm.is_even() {
            lower
        } else {
            lower.min(mm.density(mm.quantile_upper(u)))
        }
    })
}

/// The Gaussian isoperimetric profile `I_gamma = phi o Phi^{-1}`.
pub fn gaussian_profile() -> Profile {
    Profile::from_fn("gaussian-profile", Provenance::Analytic, |t| {
        // symmetric by construction: work on the small side in log space
        let lo = t.min(1.0 - t);
        let hi = 1.0 + math::sqrt(-2.0 * math::log(lo));
        let x = numerics::invert_monotone(
            &|z| math::log(math::normal_cdf(z)),
            math::log(lo),
            -hi,
            0.0,
        )
        .unwrap_or(0.0);
        math::normal_pdf(x)
    })
}

/// `I0(t) = t log^{1/2}(1 + 1/t)`, the elementary comparator equivalent to
/// the Gaussian profile on (0, 1/2].
pub fn i0(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    t * math::sqrt(math::log1p(1.0 / t))
}

/// [`i0`] wrapped as a profile (not symmetrized; meaningful on (0, 1/2]).
pub fn comparator_i0() -> Profile {
    Profile::from_fn("comparator-i0", Provenance::Analytic, i0)
}

/// Scan grid used by the hierarchy constants: log-spaced on `[1e-8, 1/2]`.
fn half_scan_grid() -> Vec<f64> {
    numerics::log_grid(SCAN_FLOOR, 0.5, SCAN_POINTS_PER_DECADE)
}

/// Cheeger constant `D_Che = inf_{t in (0,1/2]} J~(t)/t`.
pub fn cheeger_constant(p: &Profile) -> f64 {
    let grid = half_scan_grid();
    let f = |t: f64| p.tilde(t) / t;
    match numerics::inf_scan_grid(&f, &grid) {
        Ok((_, v)) => v.max(0.0),
        Err(_) => 0.0,
    }
}

/// Result of the Gaussian-comparison scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianConstant {
    /// Infimum of `J/I_gamma` over the scan grid.
    pub value: f64,
    /// Where it was attained.
    pub argmin: f64,
    /// The ratio was still decaying at the smallest grid points, so the true
    /// infimum may only be attained in the `t -> 0` limit.
    pub edge_decay: bool,
}

/// Gaussian isoperimetric constant `D_Gau = inf_{t in (0,1)} J(t)/I_gamma(t)`,
/// reported with a decay diagnostic for sub-Gaussian profiles.
pub fn gaussian_constant(p: &Profile) -> GaussianConstant {
    let gauss = gaussian_profile();
    let f = |t: f64| {
        let d = gauss.eval(t);
        if d <= 0.0 {
            f64::INFINITY
        } else {
            p.eval(t) / d
        }
    };
    let half = half_scan_grid();
    let mut grid = half.clone();
    grid.extend(half.iter().rev().map(|t| 1.0 - t));
    let (argmin, value) = match numerics::inf_scan_grid(&f, &grid) {
        Ok(r) => r,
        Err(_) => (0.5, 0.0),
    };
    // compare the two smallest decades on each side
    let probe = |a: f64, b: f64| f(a) < 0.95 * f(b);
    let edge_decay = probe(grid[0], grid[0] * 10.0)
        || probe(1.0 - SCAN_FLOOR, 1.0 - SCAN_FLOOR * 10.0);
    GaussianConstant { value: value.max(0.0), argmin, edge_decay }
}

const BOBKOV_T_MIN: f64 = 1e-9;

/// Inverse of the profile map: build the even log-concave measure whose
/// half-line profile is `J`, via `x(t) = integral_{1/2}^t ds/J(s)` and
/// `rho(x(t)) = J(t)`.
///
/// `J` must be continuous, concave, symmetric about 1/2, strictly positive
/// inside and vanishing at the endpoints.
pub fn measure_from_profile(j: &Profile) -> Result<Measure1D> {
    // validation grid: dense where the construction will look
    let check: Vec<f64> = numerics::log_grid(BOBKOV_T_MIN, 0.5, 64);
    for &t in &check {
        let a = j.eval(t);
        let b = j.eval(1.0 - t);
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::NotVanishing { endpoint: t });
        }
        if math::fabs(a - b) > 1e-5 * a.max(b).max(1e-300) {
            return Err(Error::NotSymmetric { witness: t });
        }
    }
    if j.eval(1e-7) > 0.05 * j.eval(0.5) {
        return Err(Error::NotVanishing { endpoint: 0.0 });
    }
    // concavity: chord slopes non-increasing on a mixed grid
    {
        let mut grid = check.clone();
        grid.extend((1..=99).map(|i| i as f64 / 100.0));
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup();
        let mut prev_slope: Option<f64> = None;
        let mut prev = (grid[0], j.eval(grid[0]));
        for &t in grid.iter().skip(1) {
            let v = j.eval(t);
            let slope = (v - prev.1) / (t - prev.0);
            if let Some(ps) = prev_slope {
                if slope > ps + 1e-7 * (1.0 + math::fabs(ps)) {
                    return Err(Error::NotConcave { witness: t });
                }
            }
            prev_slope = Some(slope);
            prev = (t, v);
        }
    }

    // construction grid on (0, 1/2]: log-spaced tail + uniform middle
    let mut ts: Vec<f64> = numerics::log_grid(BOBKOV_T_MIN, 0.01, 256);
    let mid_n = 980usize;
    for i in 0..=mid_n {
        ts.push(0.01 + (0.5 - 0.01) * i as f64 / mid_n as f64);
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let cfg = numerics::QuadratureConfig::default();
    // x(t) decreasing from 0 as t runs down from 1/2
    let n = ts.len();
    let mut xs = alloc::vec![0.0f64; n];
    for i in (0..n - 1).rev() {
        let step = numerics::integrate(&|s| 1.0 / j.eval(s), ts[i], ts[i + 1], &cfg)?;
        xs[i] = xs[i + 1] - step;
    }
    // assemble symmetric knots
    let mut x_knots: Vec<f64> = Vec::with_capacity(2 * n - 1);
    let mut psi: Vec<f64> = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        x_knots.push(xs[i]);
        psi.push(-math::log(j.eval(ts[i])));
    }
    for i in (0..n - 1).rev() {
        x_knots.push(-xs[i]);
        psi.push(-math::log(j.eval(ts[i])));
    }
    Measure1D::from_log_density_grid(x_knots, psi, &format!("bobkov({})", j.describe()))
}

/// A valid upper bound for the profile of the k-fold product: the boundary
/// measure of a one-coordinate half-space, which is just the 1-D profile.
pub fn coordinate_halfspace_upper(m: &Measure1D, k: usize, t: f64) -> f64 {
    debug_assert!(k >= 1);
    let _ = k;
    profile_of(m).eval(t)
}

/// Boundary-measure refinement over unions of up to 3 intervals with
/// endpoints on a quantile grid (total mass fixed to the grid multiple
/// nearest `t`). A diagnostic competitor for non-log-concave measures; the
/// half-line value of [`profile_of`] is an upper bound for it by
/// construction.
pub fn refined_boundary_measure(m: &Measure1D, t: f64, grid_size: usize) -> f64 {
    let g = grid_size.max(8);
    // rho(Q(u)) on the grid; u = 0 and u = 1 are "free" endpoints
    let dens: Vec<f64> = (0..=g).map(|i| m.density(m.quantile(i as f64 / g as f64))).collect();
    let cost = |i: usize| -> f64 {
        if i == 0 || i == g {
            0.0
        } else {
            dens[i]
        }
    };
    let tm = ((t * g as f64) as usize).clamp(1, g - 1);
    let mut best = f64::INFINITY;
    // one interval
    for s in 0..=(g - tm) {
        best = best.min(cost(s) + cost(s + tm));
    }
    // two intervals
    for m1 in 1..tm {
        let m2 = tm - m1;
        for s1 in 0..=g {
            if s1 + m1 > g {
                break;
            }
            let e1 = s1 + m1;
            for s2 in (e1 + 1)..=g {
                if s2 + m2 > g {
                    break;
                }
                let c = cost(s1) + cost(e1) + cost(s2) + cost(s2 + m2);
                if c < best {
                    best = c;
                }
            }
        }
    }
    // three intervals on a coarser lattice to keep the enumeration small
    let step = (g / 16).max(1);
    for m1 in (1..tm).step_by(step) {
        for m2 in (1..tm - m1).step_by(step) {
            let m3 = tm - m1 - m2;
            if m3 == 0 {
                continue;
            }
            let mut s1 = 0;
            while s1 + m1 <= g {
                let e1 = s1 + m1;
                let mut s2 = e1 + 1;
                while s2 + m2 <= g {
                    let e2 = s2 + m2;
                    let mut s3 = e2 + 1;
                    while s3 + m3 <= g {
                        let c = cost(s1)
                            + cost(e1)
                            + cost(s2)
                            + cost(e2)
                            + cost(s3)
                            + cost(s3 + m3);
                        if c < best {
                            best = c;
                        }
                        s3 += step;
                    }
                    s2 += step;
                }
                s1 += step;
            }
        }
    }
    best
}
