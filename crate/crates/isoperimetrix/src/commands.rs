//! Command implementations behind the CLI verbs.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Result};
use serde_json::{json, Value};

use isoperimetrix_core::capacity::{self, BoundKind, CapacityBound};
use isoperimetrix_core::hierarchy::{self, BridgeDirection};
use isoperimetrix_core::measures::{Measure1D, MeasureSpec, ParsedMeasure};
use isoperimetrix_core::numerics::{self, QuadratureConfig};
use isoperimetrix_core::orlicz::{self, OrliczFunction};
use isoperimetrix_core::profiles::{self, Provenance};
use isoperimetrix_core::tensorize;
use isoperimetrix_core::GridFunction;

use crate::config;
use crate::formats;
use crate::report::Report;
use crate::suites;

/// Output format of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every verb.
#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from --out extension when omitted.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Omit the timestamp so identical runs produce identical bytes.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Override the relative quadrature tolerance.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
}

impl CommonArgs {
    fn format_or(&self, default: Format) -> Format {
        if let Some(f) = self.format {
            return f;
        }
        if let Some(out) = &self.out {
            if out.extension().and_then(|e| e.to_str()) == Some("csv") {
                return Format::Csv;
            }
        }
        default
    }
}

/// Resolve a measure token, loading grid files where the grammar names one.
pub fn parse_measure(token: &str, cfg: &QuadratureConfig) -> Result<Measure1D> {
    let spec = match MeasureSpec::parse(token).map_err(|e| anyhow!("{e}"))? {
        ParsedMeasure::Spec(s) => s,
        ParsedMeasure::PotentialGridFile { path } => {
            let (x, v) = formats::read_grid_csv(Path::new(&path))?;
            MeasureSpec::potential_grid(&path, x, v).map_err(|e| anyhow!("{e}"))?
        }
        ParsedMeasure::DensityGridFile { path } => {
            let (x, v) = formats::read_grid_csv(Path::new(&path))?;
            MeasureSpec::density_grid(&path, x, v).map_err(|e| anyhow!("{e}"))?
        }
    };
    Measure1D::build_with(&spec, cfg).map_err(|e| anyhow!("{e}"))
}

/// Orlicz grammar: `power:p | phi:q | grid:file`.
pub fn parse_orlicz(token: &str) -> Result<OrliczFunction> {
    if let Some(p) = token.strip_prefix("power:") {
        return OrliczFunction::power(p.parse()?).map_err(|e| anyhow!("{e}"));
    }
    if let Some(q) = token.strip_prefix("phi:") {
        return OrliczFunction::phi(q.parse()?).map_err(|e| anyhow!("{e}"));
    }
    if let Some(path) = token.strip_prefix("grid:") {
        let (ts, ns) = formats::read_two_column_csv(Path::new(path), "t,N")?;
        let g = isoperimetrix_core::GridFunction::new(
            ts,
            ns,
            isoperimetrix_core::numerics::Extrapolation::LinearTail,
        )
        .map_err(|e| anyhow!("{e}"))?;
        return OrliczFunction::from_grid(&g).map_err(|e| anyhow!("{e}"));
    }
    bail!("unknown Orlicz spec `{token}` (expected power:p | phi:q | grid:file)")
}

/// Test-function grammar for `norm` and `beckner`:
/// `indicator:mass | grid:file`.
fn parse_test_function(token: &str, m: &Measure1D) -> Result<GridFunction> {
    if let Some(mass) = token.strip_prefix("indicator:") {
        let a: f64 = mass.parse()?;
        if !(a > 0.0 && a < 1.0) {
            bail!("indicator mass must be in (0, 1), got {a}");
        }
        return suites::indicator_of_mass(m, a);
    }
    if let Some(path) = token.strip_prefix("grid:") {
        return formats::read_grid_function(Path::new(path));
    }
    bail!("unknown test function `{token}` (expected indicator:mass | grid:file)")
}

fn export_grid(n: usize) -> Vec<f64> {
    profiles::Profile::export_grid(n.max(16))
}

fn half_grid(n: usize) -> Vec<f64> {
    numerics::log_grid(1e-8, 0.5, (n.max(16) / 8).max(2))
}

fn make_report(common: &CommonArgs, cfg: &QuadratureConfig, echo: String) -> Report {
    Report::new(echo, config::config_hash(cfg), !common.no_timestamp)
}

fn emit_report(common: &CommonArgs, report: &Report) -> Result<()> {
    formats::emit(common.out.as_deref(), &report.to_json_string())
}

// --- verbs ------------------------------------------------------------------

pub fn profile(
    common: &CommonArgs,
    echo: String,
    measure_tok: &str,
    grid_n: usize,
) -> Result<i32> {
    let cfg = config::effective_config(common.rel_tol)?;
    let m = parse_measure(measure_tok, &cfg)?;
    let p = profiles::profile_of(&m);
    let grid = export_grid(grid_n);
    match common.format_or(Format::Csv) {
        Format::Csv => formats::emit(common.out.as_deref(), &formats::profile_csv(&p, &grid))?,
        Format::Json => {
            let mut report = make_report(common, &cfg, echo);
            report.inputs = json!({"measure": measure_tok, "grid": grid_n});
            report.result = json!({
                "series": p.sample(&grid).iter().map(|(t, v)| json!([t, v])).collect::<Vec<_>>(),
            });
            report.diagnostics = json!({
                "provenance": format!("{:?}", p.provenance()),
                "log_concavity": format!("{:?}", m.log_concavity()),
            });
            emit_report(common, &report)?;
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn norm(
    common: &CommonArgs,
    echo: String,
    measure_tok: &str,
    n_tok: &str,
    f_tok: &str,
) -> Result<i32> {
    let cfg = config::effective_config(common.rel_tol)?;
    let m = parse_measure(measure_tok, &cfg)?;
    let n = parse_orlicz(n_tok)?;
    let f = parse_test_function(f_tok, &m)?;
    let strong = orlicz::orlicz_norm(&f, &m, &n).map_err(|e| anyhow!("{e}"))?;
    let weak = orlicz::weak_orlicz_norm(&f, &m, &n);
    let mut report = make_report(common, &cfg, echo);
    report.inputs = json!({"measure": measure_tok, "N": n_tok, "f": f_tok});
    report.result = json!({"orlicz_norm": strong, "weak_orlicz_norm": weak});
    report.diagnostics = json!({"weak_below_strong": weak <= strong * (1.0 + 1e-9)});
    emit_report(common, &report)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn capacity_cmd(
    common: &CommonArgs,
    echo: String,
    measure_tok: &str,
    q: f64,
    t: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    oracle: bool,
    grid_n: usize,
) -> Result<i32> {
    let cfg = config::effective_config(common.rel_tol)?;
    let m = parse_measure(measure_tok, &cfg)?;
    let mut report = make_report(common, &cfg, echo);
    report.inputs = json!({
        "measure": measure_tok, "q": q, "t": t, "a": a, "b": b,
        "oracle": oracle, "grid": grid_n,
    });
    let result = match (a, b, t) {
        (Some(a), Some(b), _) => {
            let v = capacity::interval_capacity(&m, a, b, q).map_err(|e| anyhow!("{e}"))?;
            json!({"interval_capacity": v})
        }
        (_, _, Some(t)) => {
            let v = capacity::capq(&m, q, t).map_err(|e| anyhow!("{e}"))?;
            let mut obj = json!({"capq": v});
            if oracle {
                let detail =
                    capacity::cap_oracle_detailed(&m, q, t, grid_n).map_err(|e| anyhow!("{e}"))?;
                obj["oracle"] = json!({
                    "value": detail.value,
                    "config": detail.config,
                    "nonmonotone_won": detail.nonmonotone_won,
                    "relative_gap": (detail.value - v) / v.max(1e-300),
                });
            }
            obj
        }
        _ => bail!("capacity needs either --t or both --a and --b"),
    };
    report.result = result;
    emit_report(common, &report)?;
    Ok(0)
}

#[derive(Debug, Clone, clap::Subcommand)]
pub enum ConstantCmd {
    /// Best constant in the linear boundary-measure lower bound.
    Cheeger,
    /// Infimum of the profile against the gaussian comparator.
    Gaussian,
    /// Two-sided spectral-gap bracket from the Hardy-type criterion.
    Poincare,
    /// Upper bound on the 2-log-Sobolev constant from exponential tilts.
    Dls2Upper,
}

pub fn constant(
    common: &CommonArgs,
    echo: String,
    which: &ConstantCmd,
    measure_tok: &str,
) -> Result<i32> {
    let cfg = config::effective_config(common.rel_tol)?;
    let m = parse_measure(measure_tok, &cfg)?;
    let mut report = make_report(common, &cfg, echo);
    report.inputs = json!({"measure": measure_tok});
    match which {
        ConstantCmd::Cheeger => {
            let v = profiles::cheeger_constant(&profiles::profile_of(&m));
            report.result = json!({"cheeger_constant": v});
        }
        ConstantCmd::Gaussian => {
            let g = profiles::gaussian_constant(&profiles::profile_of(&m));
            report.result = json!({"gaussian_constant": g.value});
            report.diagnostics = json!({
                "argmin": g.argmin,
                "edge_decay": g.edge_decay,
            });
        }
        ConstantCmd::Poincare => {
            let ledger = hierarchy::poincare_bracket(&m).map_err(|e| anyhow!("{e}"))?;
            report.result = json!({"lo": ledger.lo(), "hi": ledger.hi()});
            report.constants_ledger = Some(formats::ledger_json(&ledger));
        }
        ConstantCmd::Dls2Upper => {
            let (upper, lambda) = hierarchy::dls_upper_exponential_tilts(
                &m,
                2.0,
                &[0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0],
            )
            .map_err(|e| anyhow!("{e}"))?;
            report.result = json!({"dls2_upper": upper});
            report.diagnostics = json!({"best_lambda": lambda});
        }
    }
    emit_report(common, &report)?;
    Ok(0)
}

#[derive(Debug, Clone, clap::Subcommand)]
pub enum TransferCmd {
    /// Orlicz-Sobolev constant to a profile lower bound.
    OsToIso {
        #[arg(long = "N")]
        n: String,
        #[arg(long)]
        q: f64,
        #[arg(long = "D")]
        d: f64,
    },
    /// Measure profile to an Orlicz-Sobolev constant.
    IsoToOs {
        #[arg(long)]
        measure: String,
        #[arg(long = "N")]
        n: String,
        #[arg(long)]
        q: f64,
    },
    /// Orlicz-Sobolev constant to a capacity lower bound.
    OsToCap {
        #[arg(long = "N")]
        n: String,
        #[arg(long)]
        q: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long)]
        weak: bool,
    },
    /// Measured capacity curve to an Orlicz-Sobolev constant bracket.
    CapToOs {
        #[arg(long)]
        measure: String,
        #[arg(long = "N")]
        n: String,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        weak: bool,
    },
    /// q-log-Sobolev bridge through phi_q.
    Qls {
        #[arg(long)]
        q: f64,
        #[arg(long = "D")]
        d: f64,
        #[arg(long, value_parser = ["to-iso", "from-iso"])]
        direction: String,
    },
    /// Closed-form two-sided constants for shape-alpha functions.
    ClosedForm {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        q: f64,
    },
}

pub fn transfer(common: &CommonArgs, echo: String, which: &TransferCmd) -> Result<i32> {
    let cfg = config::effective_config(common.rel_tol)?;
    let mut report = make_report(common, &cfg, echo);
    let grid = half_grid(1024);
    match which {
        TransferCmd::OsToIso { n, q, d } => {
            let nf = parse_orlicz(n)?;
            let r = hierarchy::os_to_iso(&nf, *q, *d).map_err(|e| anyhow!("{e}"))?;
            let p = r.profile().ok_or_else(|| anyhow!("expected profile bound"))?;
            if common.format_or(Format::Json) == Format::Csv {
                formats::emit(common.out.as_deref(), &formats::profile_csv(p, &grid))?;
                return Ok(0);
            }
            report.inputs = json!({"N": n, "q": q, "D": d});
            report.result = json!({
                "bound_lo_constant": r.ledger.lo(),
                "bound_at_half": p.eval(0.5),
                "series": p.sample(&half_grid(128)).iter().map(|(t, v)| json!([t, v])).collect::<Vec<_>>(),
            });
            report.constants_ledger = Some(formats::ledger_json(&r.ledger));
            report.diagnostics = json!({"notes": r.notes});
        }
        TransferCmd::IsoToOs { measure, n, q } => {
            let m = parse_measure(measure, &cfg)?;
            let nf = parse_orlicz(n)?;
            let p = profiles::profile_of(&m);
            let ledger = hierarchy::iso_to_os(&p, &nf, *q).map_err(|e| anyhow!("{e}"))?;
            report.inputs = json!({"measure": measure, "N": n, "q": q});
            report.result = json!({"orlicz_sobolev_constant": ledger.lo()});
            report.constants_ledger = Some(formats::ledger_json(&ledger));
        }
        TransferCmd::OsToCap { n, q, d, weak } => {
            let nf = parse_orlicz(n)?;
            let bound = hierarchy::os_to_cap(&nf, *q, *d, *weak);
            if common.format_or(Format::Json) == Format::Csv {
                formats::emit(common.out.as_deref(), &formats::capacity_csv(&bound, &grid))?;
                return Ok(0);
            }
            report.inputs = json!({"N": n, "q": q, "D": d, "weak": weak});
            report.result = json!({
                "series": bound.sample(&half_grid(128)).iter().map(|(t, v)| json!([t, v])).collect::<Vec<_>>(),
            });
        }
        TransferCmd::CapToOs { measure, n, q, weak } => {
            let m = parse_measure(measure, &cfg)?;
            let nf = parse_orlicz(n)?;
            let (qv, mv) = (*q, m.clone());
            let cap = CapacityBound::from_fn(
                *q,
                BoundKind::ExactConfig,
                &format!("capq({measure})"),
                move |t| capacity::capq(&mv, qv, t).unwrap_or(0.0),
            );
            let ledger = hierarchy::cap_to_os(&cap, &nf, *weak).map_err(|e| anyhow!("{e}"))?;
            report.inputs = json!({"measure": measure, "N": n, "q": q, "weak": weak});
            report.result = json!({"lo": ledger.lo(), "hi": ledger.hi()});
            report.constants_ledger = Some(formats::ledger_json(&ledger));
        }
        TransferCmd::Qls { q, d, direction } => {
            let dir = if direction == "to-iso" {
                BridgeDirection::ToIso
            } else {
                BridgeDirection::FromIso
            };
            let r = hierarchy::qls_bridge(*q, *d, dir).map_err(|e| anyhow!("{e}"))?;
            report.inputs = json!({"q": q, "D": d, "direction": direction});
            report.result = match &r.bound {
                hierarchy::TransferBound::Profile(p) => json!({
                    "kind": "profile",
                    "lo_constant": r.ledger.lo(),
                    "series": p.sample(&half_grid(128)).iter().map(|(t, v)| json!([t, v])).collect::<Vec<_>>(),
                }),
                hierarchy::TransferBound::Capacity(c) => json!({
                    "kind": "capacity",
                    "lo_constant": r.ledger.lo(),
                    "series": c.sample(&half_grid(128)).iter().map(|(t, v)| json!([t, v])).collect::<Vec<_>>(),
                }),
            };
            report.constants_ledger = Some(formats::ledger_json(&r.ledger));
            report.diagnostics = json!({"notes": r.notes});
        }
        TransferCmd::ClosedForm { alpha, q } => {
            let (c, b) = hierarchy::closed_form_constants(*alpha, *q).map_err(|e| anyhow!("{e}"))?;
            report.inputs = json!({"alpha": alpha, "q": q});
            report.result = json!({"C": c, "B": b});
        }
    }
    emit_report(common, &report)?;
    Ok(0)
}

#[derive(Debug, Clone, clap::Subcommand)]
pub enum TensorCmd {
    /// Build every envelope and export the certified bundle.
    Machinery {
        #[arg(long)]
        profile_from: String,
    },
    /// Growth bound of profile/comparator towards 0.
    ControlRate {
        #[arg(long)]
        profile_from: String,
    },
    /// Tail-integral comparison bounds.
    LastThing {
        #[arg(long)]
        profile_from: String,
    },
    /// Variance-interpolation functional of a test function.
    Beckner {
        #[arg(long)]
        profile_from: String,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        f: String,
    },
}

fn profile_from(token: &str, cfg: &QuadratureConfig) -> Result<profiles::Profile> {
    if token == "i0" {
        return Ok(profiles::Profile::from_fn("i0", Provenance::Analytic, |t| {
            profiles::i0(t.min(1.0 - t))
        }));
    }
    let m = parse_measure(token, cfg)?;
    Ok(profiles::profile_of(&m))
}

pub fn tensor(common: &CommonArgs, echo: String, which: &TensorCmd) -> Result<i32> {
    let cfg = config::effective_config(common.rel_tol)?;
    let mut report = make_report(common, &cfg, echo);
    match which {
        TensorCmd::Machinery { profile_from: tok } => {
            let j = profile_from(tok, &cfg)?;
            let mach = tensorize::build_machinery(&j).map_err(|e| anyhow!("{e}"))?;
            let last = tensorize::last_thing_check(&mach).map_err(|e| anyhow!("{e}"))?;
            let grid = numerics::log_grid(1e-8, 0.5, 16);
            report.inputs = json!({"profile_from": tok});
            report.result = formats::machinery_json(&mach, &last, &grid);
        }
        TensorCmd::ControlRate { profile_from: tok } => {
            let j = profile_from(tok, &cfg)?;
            let d = tensorize::control_rate(&j);
            report.inputs = json!({"profile_from": tok});
            report.result = json!({"control_rate": if d.is_finite() { json!(d) } else { json!("infinite") }});
        }
        TensorCmd::LastThing { profile_from: tok } => {
            let j = profile_from(tok, &cfg)?;
            let mach = tensorize::build_machinery(&j).map_err(|e| anyhow!("{e}"))?;
            let last = tensorize::last_thing_check(&mach).map_err(|e| anyhow!("{e}"))?;
            report.inputs = json!({"profile_from": tok});
            report.result = json!({
                "lower": last.lower,
                "upper": last.upper,
                "upper_over_control_rate": last.upper_over_d,
            });
        }
        TensorCmd::Beckner { profile_from: tok, measure: mtok, f } => {
            let j = profile_from(tok, &cfg)?;
            let mach = tensorize::build_machinery(&j).map_err(|e| anyhow!("{e}"))?;
            let m = parse_measure(mtok, &cfg)?;
            let func = parse_test_function(f, &m)?;
            let v = tensorize::beckner_functional(&func, &m, &|x| mach.t_fn(x))
                .map_err(|e| anyhow!("{e}"))?;
            report.inputs = json!({"profile_from": tok, "measure": mtok, "f": f});
            report.result = json!({"beckner_functional": v});
        }
    }
    emit_report(common, &report)?;
    Ok(0)
}

/// `verify` verb: whole suites, `all`, or the parameterized single checks.
#[allow(clippy::too_many_arguments)]
pub fn verify(
    common: &CommonArgs,
    echo: String,
    target: &str,
    suite_flag: Option<&str>,
    measure_tok: Option<&str>,
    n_tok: Option<&str>,
    a: Option<f64>,
) -> Result<i32> {
    let cfg = config::effective_config(common.rel_tol)?;
    if let Some(s) = suite_flag {
        if s != "paper" {
            bail!("unknown suite collection `{s}` (only `paper` exists)");
        }
    }
    let reports: Vec<suites::SuiteReport> = match target {
        "all" => suites::run_all(true)?,
        "mazya-duality" if measure_tok.is_some() => {
            // single parameterized duality check
            let m = parse_measure(measure_tok.unwrap(), &cfg)?;
            let n = parse_orlicz(n_tok.ok_or_else(|| anyhow!("--N required"))?)?;
            let a = a.ok_or_else(|| anyhow!("--a required"))?;
            let check = suites::mazya_duality_single(&m, &n, a)?;
            vec![suites::SuiteReport {
                name: "mazya-duality(single)".to_string(),
                passed: check.passed,
                checks: vec![check],
            }]
        }
        name => vec![suites::run_suite(name)?],
    };
    let mut all_passed = true;
    for r in &reports {
        for c in &r.checks {
            println!(
                "{} {} :: {} = {:.6e} ({})",
                if c.passed { "PASS" } else { "FAIL" },
                r.name,
                c.name,
                c.value,
                c.constraint
            );
            all_passed &= c.passed;
        }
    }
    let mut report = make_report(common, &cfg, echo);
    report.inputs = json!({"target": target, "suite": suite_flag});
    report.result = Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "suite": r.name,
                    "passed": r.passed,
                    "checks": r.checks.iter().map(|c| json!({
                        "name": c.name,
                        "passed": c.passed,
                        "value": c.value,
                        "constraint": c.constraint,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    );
    report.diagnostics = json!({"all_passed": all_passed});
    if common.out.is_some() {
        emit_report(common, &report)?;
    }
    Ok(if all_passed { 0 } else { 2 })
}
