//! Constructive machinery for dimension-free tensorization.
//!
//! From a concave symmetric profile `J` with finite control rate `D`
//! (growth of `J/I0` towards 0 bounded by `D`), build the envelopes
//! `g`, `J0`, `J1`, the Young function whose adjoint is
//! `N^(t) = (integral_t^inf ds / J1(s)^2)^{-1/2}`, and the function `T` with
//! `N^(t) = t^{1/2} T(log(1 + 1/t))` that feeds the tensorizable
//! variance-interpolation inequality. "Essentially monotone" claims are
//! certified by computing the worst ratio in the forbidden direction and
//! reporting it as the essential constant.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::measures::Measure1D;
use crate::numerics::{self, GridFunction, QuadratureConfig};
use crate::profiles::{i0, Profile};

pub use crate::profiles::coordinate_halfspace_upper;

const GRID_FLOOR: f64 = 1e-8;
/// T is represented on `[log 3, X_MAX]`; at `X_MAX` the corresponding mass
/// `t = 1/(e^x - 1)` reaches 1e-12.
pub const T_DOMAIN_LO: f64 = 1.0986122886681098; // log 3
pub const T_DOMAIN_HI: f64 = 27.631021115928547; // log(1 + 1e12)

/// Monotonicity certificate: strict verdicts carry an optional violation
/// witness, "essential" verdicts carry the worst forbidden-direction ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub name: String,
    /// For strict claims: true iff no violation beyond 1e-9 slack.
    pub holds: bool,
    /// Witness of the first violation (NaN if none).
    pub witness: f64,
    /// Essential constant (1.0 for strictly monotone data).
    pub essential_constant: f64,
}

fn certify_nondecreasing(name: &str, pts: &[(f64, f64)]) -> Certificate {
    let mut holds = true;
    let mut witness = f64::NAN;
    // essential constant: sup over t <= s of f(t)/f(s) = max f(t)/suffix-min
    let mut suffix_min = alloc::vec![0.0f64; pts.len()];
    let mut run = f64::INFINITY;
    for i in (0..pts.len()).rev() {
        run = run.min(pts[i].1);
        suffix_min[i] = run;
    }
    let mut essential: f64 = 1.0;
    let mut prev = f64::NEG_INFINITY;
    for (i, &(t, v)) in pts.iter().enumerate() {
        if holds && v < prev * (1.0 - 1e-9) - 1e-300 {
            holds = false;
            witness = t;
        }
        prev = prev.max(v);
        if suffix_min[i] > 0.0 {
            essential = essential.max(v / suffix_min[i]);
        }
    }
    Certificate { name: name.to_string(), holds, witness, essential_constant: essential }
}

fn certify_nonincreasing(name: &str, pts: &[(f64, f64)]) -> Certificate {
    let flipped: Vec<(f64, f64)> = pts.iter().rev().map(|&(t, v)| (t, v)).collect();
    let mut c = certify_nondecreasing(name, &flipped);
    c.name = name.to_string();
    c
}

/// Control rate of `J` against the comparator `I0`:
/// `sup { [J(t)/I0(t)] / [J(s)/I0(s)] : 0 < t <= s <= 1/2 }`.
/// `+inf` is signaled once the ratio exceeds 1e6.
pub fn control_rate(j: &Profile) -> f64 {
    let grid = numerics::log_grid(GRID_FLOOR, 0.5, 512);
    let r: Vec<f64> = grid
        .iter()
        .map(|&t| {
            let d = i0(t);
            if d > 0.0 {
                j.eval(t) / d
            } else {
                f64::NAN
            }
        })
        .collect();
    let mut suffix_min = alloc::vec![f64::INFINITY; r.len()];
    let mut run = f64::INFINITY;
    for i in (0..r.len()).rev() {
        if r[i].is_finite() {
            run = run.min(r[i]);
        }
        suffix_min[i] = run;
    }
    let mut d = 1.0f64;
    for i in 0..r.len() {
        if r[i].is_finite() && suffix_min[i] > 0.0 && suffix_min[i].is_finite() {
            d = d.max(r[i] / suffix_min[i]);
        } else if r[i].is_finite() && r[i] > 0.0 && suffix_min[i] == 0.0 {
            return f64::INFINITY;
        }
    }
    if d > 1e6 {
        f64::INFINITY
    } else {
        d
    }
}

/// The assembled machinery; immutable after build.
#[derive(Clone)]
pub struct TensorMachinery {
    j: Profile,
    /// Control rate.
    pub d: f64,
    /// Non-decreasing envelope `g(t) = min_{s in [t, 1/2]} J(s)/I0(s)`.
    g: GridFunction,
    /// `2 J(1/2)`: slope of the linear extension beyond 1/2.
    lin: f64,
    /// Suffix integrals of `1/J1^2` on `head_knots` (down from 1/2).
    head_knots: Vec<f64>,
    head_suffix: Vec<f64>,
    facts: Vec<Certificate>,
    cfg: QuadratureConfig,
}

impl core::fmt::Debug for TensorMachinery {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("TensorMachinery")
            .field("j", &self.j)
            .field("d", &self.d)
            .field("facts", &self.facts)
            .finish()
    }
}

impl TensorMachinery {
    /// `J1`: the profile on `[0, 1/2]`, linear `2 J(1/2) t` beyond.
    pub fn j1(&self, t: f64) -> f64 {
        if t <= 0.5 {
            self.j.eval(t)
        } else {
            self.lin * t
        }
    }

    /// `J0 = g I0` on `[0, 1/2]`, same linear extension beyond.
    pub fn j0(&self, t: f64) -> f64 {
        if t <= 0.5 {
            self.g.eval(t) * i0(t)
        } else {
            self.lin * t
        }
    }

    /// The envelope `g` (non-decreasing, `g <= J/I0 <= D g` exactly at the
    /// construction knots; interpolated between them).
    pub fn g(&self, t: f64) -> f64 {
        self.g.eval(t.min(0.5))
    }

    /// `N^(t) = (integral_t^inf ds/J1(s)^2)^{-1/2}`; the adjoint of the Young
    /// function produced by the integral transform.
    pub fn n_wedge(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let tail = |a: f64| 1.0 / (self.lin * self.lin * a); // exact beyond 1/2
        if t >= 0.5 {
            return math::pow(tail(t), -0.5);
        }
        // suffix value at the first knot >= t plus the partial cell
        let i = self.head_knots.partition_point(|k| *k < t);
        let mut acc = if i < self.head_knots.len() { self.head_suffix[i] } else { tail(0.5) };
        if i < self.head_knots.len() && self.head_knots[i] > t {
            let j = self.j.clone();
            acc += numerics::integrate(
                &|s| {
                    let v = j.eval(s);
                    1.0 / (v * v)
                },
                t,
                self.head_knots[i],
                &self.cfg,
            )
            .unwrap_or(f64::INFINITY);
        }
        math::pow(acc, -0.5)
    }

    /// `T(x) = N^(t)/sqrt(t)` at `t = 1/(e^x - 1)`, on `[log 3, X_MAX]`.
    pub fn t_fn(&self, x: f64) -> f64 {
        let x = x.clamp(T_DOMAIN_LO, T_DOMAIN_HI);
        let t = 1.0 / math::expm1(x);
        self.n_wedge(t) / math::sqrt(t)
    }

    pub fn profile(&self) -> &Profile {
        &self.j
    }

    pub fn facts(&self) -> &[Certificate] {
        &self.facts
    }

    pub fn fact(&self, name: &str) -> Option<&Certificate> {
        self.facts.iter().find(|c| c.name == name)
    }
}

/// Build every envelope and certify the monotonicity facts on a grid.
///
/// Requires `J` continuous concave symmetric vanishing at the endpoints and
/// a finite control rate.
pub fn build_machinery(j: &Profile) -> Result<TensorMachinery> {
    // shape validation mirrors the profile-to-measure bijection's gates
    let check: Vec<f64> = numerics::log_grid(GRID_FLOOR, 0.5, 64);
    for &t in &check {
        let a = j.eval(t);
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::NotVanishing { endpoint: t });
        }
        let b = j.eval(1.0 - t);
        if math::fabs(a - b) > 1e-5 * a.max(b) {
            return Err(Error::NotSymmetric { witness: t });
        }
    }
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
    let d = control_rate(j);
    if !d.is_finite() {
        return Err(Error::InfiniteControlRate);
    }

    // g: suffix minimum of J/I0 over [t, 1/2]
    let grid = numerics::log_grid(GRID_FLOOR, 0.5, 512);
    let mut g_vals = alloc::vec![0.0f64; grid.len()];
    let mut run = f64::INFINITY;
    for i in (0..grid.len()).rev() {
        let t = grid[i];
        run = run.min(j.eval(t) / i0(t));
        g_vals[i] = run;
    }
    let g = GridFunction::new(grid.clone(), g_vals, numerics::Extrapolation::None)?;

    let lin = 2.0 * j.eval(0.5);
    // profiles of grid-backed measures are piecewise smooth with many
    // derivative kinks; a slightly looser per-cell tolerance with a larger
    // subdivision budget keeps the suffix integrals robust there
    let cfg = QuadratureConfig {
        rel_tol: 1e-9,
        abs_tol: 1e-12,
        max_subdivisions: 20_000,
        ..QuadratureConfig::default()
    };

    // suffix integrals of 1/J1^2 from each head knot up to 1/2, plus the
    // exact linear tail beyond
    let head_knots = numerics::log_grid(1e-13, 0.5, 128);
    let mut head_suffix = alloc::vec![0.0f64; head_knots.len()];
    let tail_at_half = 1.0 / (lin * lin * 0.5);
    let jj = j.clone();
    let inv_sq = |s: f64| {
        let v = jj.eval(s);
        1.0 / (v * v)
    };
    let n = head_knots.len();
    head_suffix[n - 1] = tail_at_half;
    for i in (0..n - 1).rev() {
        let cell = numerics::integrate(&inv_sq, head_knots[i], head_knots[i + 1], &cfg)?;
        head_suffix[i] = head_suffix[i + 1] + cell;
    }

    let mut mach = TensorMachinery {
        j: j.clone(),
        d,
        g,
        lin,
        head_knots,
        head_suffix,
        facts: Vec::new(),
        cfg,
    };

    // certificates are established on the envelope's own knots (where the
    // suffix-minimum is exact), extended across the linear region beyond 1/2
    let mut fact_grid = grid.clone();
    fact_grid.extend(numerics::log_grid(0.5000001, 1e4, 64));
    let on = |f: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
        fact_grid.iter().map(|&t| (t, f(t))).collect()
    };
    let m = &mach;
    let mut facts = alloc::vec![
        certify_nondecreasing("j0-over-sqrt", &on(&|t| m.j0(t) / math::sqrt(t))),
        certify_nondecreasing("j1-over-sqrt-essential", &on(&|t| m.j1(t) / math::sqrt(t))),
        certify_nonincreasing("j1-over-t", &on(&|t| m.j1(t) / t)),
        certify_nonincreasing("j0-over-t-essential", &on(&|t| m.j0(t) / t)),
        certify_nondecreasing("j0-over-i0", &on(&|t| m.j0(t) / i0(t))),
        certify_nondecreasing("j1-over-i0-essential", &on(&|t| m.j1(t) / i0(t))),
    ];
    // sandwich J0 <= J1 <= D J0
    {
        let mut holds = true;
        let mut witness = f64::NAN;
        for &t in &fact_grid {
            let (a, b) = (m.j0(t), m.j1(t));
            if !(a <= b * (1.0 + 1e-9) && b <= d * a * (1.0 + 1e-9)) {
                holds = false;
                witness = t;
                break;
            }
        }
        facts.push(Certificate {
            name: "j0-j1-sandwich".to_string(),
            holds,
            witness,
            essential_constant: d,
        });
    }
    // T non-decreasing, T(x)^2/x essentially non-increasing
    {
        let xs: Vec<f64> = (0..=400)
            .map(|i| T_DOMAIN_LO + (T_DOMAIN_HI - T_DOMAIN_LO) * i as f64 / 400.0)
            .collect();
        let t_pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, m.t_fn(x))).collect();
        facts.push(certify_nondecreasing("t-nondecreasing", &t_pts));
        let t2x: Vec<(f64, f64)> =
            xs.iter().map(|&x| (x, m.t_fn(x) * m.t_fn(x) / x)).collect();
        facts.push(certify_nonincreasing("t-squared-over-x-essential", &t2x));
    }
    mach.facts = facts;
    Ok(mach)
}

/// Result of the tail-integral comparison establishing
/// `N^(t) ~ J1(t)/sqrt(t)` up to D-dependent constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LastThingCheck {
    /// `inf_t (integral_t^inf J1(t)^2 / (J1(s)^2 t) ds)^{1/2}`; at least 1.
    pub lower: f64,
    /// The supremum of the same expression.
    pub upper: f64,
    /// Upper normalized by the control rate.
    pub upper_over_d: f64,
}

/// Evaluate the comparison `1 <= (integral_t^inf J1(t)^2/(J1(s)^2 t) ds)^{1/2} <= C D`
/// over `t in (0, 1]`; errors if the lower bound dips below `1 - 1e-6`.
pub fn last_thing_check(mach: &TensorMachinery) -> Result<LastThingCheck> {
    let grid = numerics::log_grid(GRID_FLOOR, 1.0, 128);
    let mut lower = f64::INFINITY;
    let mut upper = 0.0f64;
    for &t in &grid {
        // the expression equals J1(t) / (sqrt(t) N^(t)); n_wedge handles the
        // linear tail beyond 1/2 in closed form
        let value = mach.j1(t) / (math::sqrt(t) * mach.n_wedge(t));
        if !value.is_finite() {
            return Err(Error::DivergentIntegral {
                detail: format!("tail comparison not finite at t = {t}"),
            });
        }
        lower = lower.min(value);
        upper = upper.max(value);
    }
    if lower < 1.0 - 1e-6 {
        return Err(Error::PredicateFails {
            predicate: format!("tail-integral comparison lower bound >= 1 (got {lower})"),
            witness: lower,
        });
    }
    Ok(LastThingCheck { lower, upper, upper_over_d: upper / mach.d })
}

/// Variance-interpolation functional: the supremum over `p in (1, 2)` (a
/// 64-point log grid in `1/(2-p)`) of
/// `(integral f^2 - (integral |f|^p)^{2/p})^{1/2} T(1/(2-p))`.
///
/// Used to produce test-function lower bounds on the constant of the
/// tensorizable inequality.
pub fn beckner_functional(
    f: &GridFunction,
    m: &Measure1D,
    t_fn: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    let knots = f.knots();
    let k = knots.len();
    let moment = |p: f64| -> Result<f64> {
        let mut acc = math::pow(math::fabs(f.values()[0]), p) * m.cdf(knots[0]);
        acc += math::pow(math::fabs(f.values()[k - 1]), p) * (1.0 - m.cdf(knots[k - 1]));
        for i in 0..k - 1 {
            acc += m.segment_integral(
                &|x| math::pow(math::fabs(f.eval(x)), p),
                knots[i],
                knots[i + 1],
            )?;
        }
        Ok(acc)
    };
    let second = moment(2.0)?;
    let mut best = 0.0f64;
    // 64 log-spaced values of 1/(2-p)
    let xs = {
        let full = numerics::log_grid(T_DOMAIN_LO * 1.0001, T_DOMAIN_HI, 20);
        let step = (full.len() / 64).max(1);
        full.into_iter().step_by(step).collect::<Vec<f64>>()
    };
    for x in xs {
        let p = 2.0 - 1.0 / x;
        let mp = moment(p)?;
        let gap = second - math::pow(mp, 2.0 / p);
        if gap > 0.0 {
            let v = math::sqrt(gap) * t_fn(x);
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{MeasureSpec, ParsedMeasure};
    use crate::profiles::{gaussian_profile, Provenance};
    use approx::assert_abs_diff_eq;

    fn build(token: &str) -> Measure1D {
        match MeasureSpec::parse(token).unwrap() {
            ParsedMeasure::Spec(s) => Measure1D::build(&s).unwrap(),
            _ => unreachable!(),
        }
    }

    fn tent() -> Profile {
        Profile::from_fn("tent", Provenance::Analytic, |t| t.min(1.0 - t))
    }

    #[test]
    fn control_rates() {
        // J = I0 restricted: the ratio is constant 1
        let j = Profile::from_fn("i0", Provenance::Analytic, |t| i0(t.min(1.0 - t)));
        assert_abs_diff_eq!(control_rate(&j), 1.0, epsilon = 1e-9);
        // exponential profile: t/I0(t) is increasing, so D = 1
        assert_abs_diff_eq!(control_rate(&tent()), 1.0, epsilon = 1e-6);
        // gaussian profile: finite, modest
        let dg = control_rate(&gaussian_profile());
        assert!(dg.is_finite() && dg > 1.0 && dg < 3.0, "control rate {dg}");
        // too-slow vanishing towards 0 blows the ratio up
        let bad = Profile::from_fn("bad", Provenance::Analytic, |t| {
            let s = t.min(1.0 - t);
            math::pow(s, 0.1)
        });
        assert!(control_rate(&bad).is_infinite());
    }

    #[test]
    fn machinery_envelopes_for_gaussian_profile() {
        let mach = build_machinery(&gaussian_profile()).unwrap();
        assert!(mach.d.is_finite());
        for &t in numerics::log_grid(1e-6, 100.0, 16).iter() {
            let (a, b) = (mach.j0(t), mach.j1(t));
            assert!(a <= b * (1.0 + 1e-9), "J0 > J1 at {t}");
            assert!(b <= mach.d * a * (1.0 + 1e-9), "J1 > D J0 at {t}");
        }
        for c in mach.facts() {
            if c.name == "t-squared-over-x-essential" {
                // the constant here is D-dependent but not bounded by D
                assert!(c.essential_constant.is_finite());
            } else if c.name.ends_with("essential") {
                assert!(
                    c.essential_constant.is_finite()
                        && c.essential_constant <= mach.d * (1.0 + 1e-6),
                    "{}: essential constant {} vs D = {}",
                    c.name,
                    c.essential_constant,
                    mach.d
                );
            } else {
                assert!(c.holds, "{} failed at {}", c.name, c.witness);
            }
        }
    }

    #[test]
    fn machinery_scaling_invariance() {
        let j = gaussian_profile();
        let mach1 = build_machinery(&j).unwrap();
        let mach2 = build_machinery(&j.scaled(3.0)).unwrap();
        assert_abs_diff_eq!(mach1.d, mach2.d, epsilon = 1e-9);
        for &t in [1e-4, 0.01, 0.3].iter() {
            assert_abs_diff_eq!(mach2.n_wedge(t) / mach1.n_wedge(t), 3.0, epsilon = 1e-6);
        }
        let l1 = last_thing_check(&mach1).unwrap();
        let l2 = last_thing_check(&mach2).unwrap();
        assert_abs_diff_eq!(l1.lower, l2.lower, epsilon = 1e-6);
        assert_abs_diff_eq!(l1.upper, l2.upper, epsilon = 1e-6);
    }

    #[test]
    fn last_thing_bounds() {
        for j in [gaussian_profile(), tent()] {
            let mach = build_machinery(&j).unwrap();
            let check = last_thing_check(&mach).unwrap();
            assert!(check.lower >= 1.0 - 1e-6, "{}: lower {}", j.describe(), check.lower);
            assert!(check.upper.is_finite());
            assert!(check.upper_over_d.is_finite());
        }
    }

    #[test]
    fn young_certificate_via_transform() {
        // the machinery's N arises from the adjoint-side integral transform
        // with (p1, p2, p3) = (inf, 2, 2) applied to J1^; certify Young and
        // the square-root ratio on the transform's own graph
        let mach = build_machinery(&tent()).unwrap();
        let lin = 2.0 * tent().eval(0.5);
        let jm = mach.clone();
        let j1 = crate::orlicz::OrliczFunction::from_parts(
            crate::orlicz::OrliczTag::Custom,
            "j1",
            move |t| jm.j1(t),
            move |y| {
                // piecewise inverse: J1 = t on [0, 1/2], lin * t beyond
                if y <= 0.5 {
                    y
                } else {
                    y / lin
                }
            },
        );
        let n1 = j1.adjoint();
        let (_, rep) = crate::hierarchy::transform_n2(&n1, f64::INFINITY, 2.0, 2.0).unwrap();
        assert!(rep.is_young.holds());
        assert!(rep.ratio_nondecreasing.1.holds());
    }

    #[test]
    fn wedge_comparability_with_j1() {
        let mach = build_machinery(&gaussian_profile()).unwrap();
        let check = last_thing_check(&mach).unwrap();
        for &t in numerics::log_grid(1e-6, 1.0, 24).iter() {
            let ratio = mach.n_wedge(t) * math::sqrt(t) / mach.j1(t);
            assert!(
                ratio <= 1.0 + 1e-6 && ratio >= 1.0 / check.upper - 1e-9,
                "comparability broke at t = {t}: ratio {ratio}, upper {}",
                check.upper
            );
        }
    }

    #[test]
    fn beckner_functional_values() {
        let m = build("exponential");
        let mach = build_machinery(&tent()).unwrap();
        let t_fn = |x: f64| mach.t_fn(x);
        // constants score zero
        let c = GridFunction::new(
            alloc::vec![-1.0, 1.0],
            alloc::vec![1.0, 1.0],
            numerics::Extrapolation::None,
        )
        .unwrap();
        assert_abs_diff_eq!(beckner_functional(&c, &m, &t_fn).unwrap(), 0.0, epsilon = 1e-12);
        // indicator gap formula: integral f^2 - (integral |f|^p)^{2/p}
        // = a - a^{2/p} for an indicator of mass a
        let a = 0.25;
        let edge = m.quantile(1.0 - a);
        let f = GridFunction::new(
            alloc::vec![edge - 1e-9, edge],
            alloc::vec![0.0, 1.0],
            numerics::Extrapolation::None,
        )
        .unwrap();
        let p = 1.5;
        let gap = a - math::pow(a, 2.0 / p);
        assert!(gap > 0.0, "indicator gap a - a^(2/p) = {gap}");
        // the functional dominates the single-p score at the grid point
        // nearest 1/(2-p) = 2
        let v = beckner_functional(&f, &m, &t_fn).unwrap();
        assert!(v > 0.0 && v.is_finite());
        let single = math::sqrt(gap) * mach.t_fn(1.0 / (2.0 - p));
        assert!(v >= 0.5 * single, "sup {v} vs single-p score {single}");
    }

    #[test]
    fn machinery_survives_profile_measure_round_trip() {
        // building the machinery from the profile of the measure the profile
        // generates reproduces N^ within 1e-3 relative error
        let j = gaussian_profile();
        let direct = build_machinery(&j).unwrap();
        let nu = crate::profiles::measure_from_profile(&j).unwrap();
        let round = build_machinery(&crate::profiles::profile_of(&nu)).unwrap();
        for &t in numerics::log_grid(1e-4, 0.5, 24).iter() {
            let (a, b) = (direct.n_wedge(t), round.n_wedge(t));
            assert!(
                math::fabs(a - b) <= 1e-3 * a,
                "N^ mismatch at t = {t}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn capacity_beckner_bracket_one_sided() {
        // every test function upper-bounds the functional constant, and no
        // upper bound may dip below the capacity-derived constant divided by
        // sqrt(20)
        let m = build("exponential");
        let mach = build_machinery(&tent()).unwrap();
        let t_fn = |x: f64| mach.t_fn(x);
        // capacity-derived constant for the sqrt(t) T(log(1+1/t)) shape
        let mut d2 = f64::INFINITY;
        for &t in numerics::log_grid(1e-6, 0.5, 24).iter() {
            let shape = math::sqrt(t) * mach.t_fn(math::log1p(1.0 / t));
            let cap = crate::capacity::capq(&m, 2.0, t).unwrap();
            d2 = d2.min(cap / shape);
        }
        assert!(d2.is_finite() && d2 > 0.0);
        // test family: ramps of varying width around the median
        for w in [0.5, 1.0, 2.0, 4.0] {
            let f = GridFunction::new(
                alloc::vec![-w, w],
                alloc::vec![0.0, 1.0],
                numerics::Extrapolation::None,
            )
            .unwrap();
            let b = beckner_functional(&f, &m, &t_fn).unwrap();
            if b <= 0.0 {
                continue;
            }
            let grad = crate::hierarchy::grad_norm_q(&f, &m, 2.0);
            let upper = grad / b;
            assert!(
                upper >= d2 / math::sqrt(20.0) * (1.0 - 1e-6),
                "upper bound {upper} below D2/sqrt(20) = {}",
                d2 / math::sqrt(20.0)
            );
        }
    }

    #[test]
    fn coordinate_upper_bound_reexported() {
        let m = build("exponential");
        assert_abs_diff_eq!(coordinate_halfspace_upper(&m, 5, 0.5), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn machinery_rejects_bad_profiles() {
        let bad = Profile::from_fn("slow-vanish", Provenance::Analytic, |t| {
            math::pow(t.min(1.0 - t), 0.1)
        });
        assert!(matches!(build_machinery(&bad), Err(Error::InfiniteControlRate)));
        let asym = Profile::from_fn("asym", Provenance::Analytic, |t| t * (1.0 - t) * (1.5 - t));
        assert!(matches!(build_machinery(&asym), Err(Error::NotSymmetric { .. })));
    }
}
