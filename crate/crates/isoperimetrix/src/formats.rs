//! File formats: the `x,value` CSV grids consumed by measures and Orlicz
//! specs, CSV series emission for profiles and capacity bounds, and the JSON
//! renderings of ledgers and tensorization bundles.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use isoperimetrix_core::capacity::CapacityBound;
use isoperimetrix_core::hierarchy::{ConstantLedger, Side};
use isoperimetrix_core::numerics::{Extrapolation, GridFunction};
use isoperimetrix_core::profiles::Profile;
use isoperimetrix_core::tensorize::{LastThingCheck, TensorMachinery};
use serde_json::{json, Value};

/// Read a two-column CSV with header `x,value`, strictly increasing x.
pub fn read_grid_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    read_two_column_csv(path, "x,value")
}

/// Read a two-column CSV with the given header, strictly increasing
/// abscissas.
pub fn read_two_column_csv(path: &Path, header_expect: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading grid file {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == header_expect => {}
        Some((_, header)) => bail!("expected header `{header_expect}`, found `{header}`"),
        None => bail!("empty grid file"),
    }
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.splitn(2, ',');
        let x: f64 = cols
            .next()
            .and_then(|c| c.trim().parse().ok())
            .with_context(|| format!("line {}: bad x", lineno + 1))?;
        let v: f64 = cols
            .next()
            .and_then(|c| c.trim().parse().ok())
            .with_context(|| format!("line {}: bad value", lineno + 1))?;
        if let Some(&prev) = xs.last() {
            if x <= prev {
                bail!("line {}: x not strictly increasing ({x} after {prev})", lineno + 1);
            }
        }
        xs.push(x);
        vs.push(v);
    }
    Ok((xs, vs))
}

/// Grid function from an `x,value` CSV (used for `--f grid:FILE` and
/// `grid:FILE` Orlicz specs).
pub fn read_grid_function(path: &Path) -> Result<GridFunction> {
    let (xs, vs) = read_grid_csv(path)?;
    GridFunction::new(xs, vs, Extrapolation::None).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Render a `(t, value)` series as CSV with the given header.
pub fn series_csv(header: &str, series: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(series.len() * 32 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for (t, v) in series {
        out.push_str(&format!("{t:.17e},{v:.17e}\n"));
    }
    out
}

/// Profile export: CSV `t,J(t)` on the given grid.
pub fn profile_csv(p: &Profile, grid: &[f64]) -> String {
    series_csv("t,J(t)", &p.sample(grid))
}

/// Capacity-bound export: CSV `t,L(t)`.
pub fn capacity_csv(b: &CapacityBound, grid: &[f64]) -> String {
    series_csv("t,L(t)", &b.sample(grid))
}

fn side_str(side: Side) -> &'static str {
    match side {
        Side::Both => "both",
        Side::Lo => "lo",
        Side::Hi => "hi",
    }
}

/// Ledger JSON: `{instance, lo, hi, seed, factors: [{label, value, citation,
/// side}], markers}`.
pub fn ledger_json(l: &ConstantLedger) -> Value {
    json!({
        "instance": l.instance,
        "lo": l.lo(),
        "hi": l.hi(),
        "seed": l.seed,
        "seed_label": l.seed_label,
        "factors": l.factors.iter().map(|f| json!({
            "label": f.label,
            "value": f.value,
            "citation": f.citation,
            "side": side_str(f.side),
        })).collect::<Vec<_>>(),
        "markers": l.markers,
    })
}

fn sampled(series: &[(f64, f64)]) -> Value {
    Value::Array(
        series
            .iter()
            .map(|(t, v)| Value::Array(vec![json!(t), json!(v)]))
            .collect(),
    )
}

/// Tensorization bundle: sampled `g`, `J0`, `J1`, `N^`, `T` grids plus the
/// certificates and the tail-comparison bounds.
pub fn machinery_json(
    mach: &TensorMachinery,
    last: &LastThingCheck,
    grid: &[f64],
) -> Value {
    let t_grid: Vec<f64> = (0..=96)
        .map(|i| {
            isoperimetrix_core::tensorize::T_DOMAIN_LO
                + (isoperimetrix_core::tensorize::T_DOMAIN_HI
                    - isoperimetrix_core::tensorize::T_DOMAIN_LO)
                    * i as f64
                    / 96.0
        })
        .collect();
    json!({
        "control_rate": mach.d,
        "g": sampled(&grid.iter().map(|&t| (t, mach.g(t))).collect::<Vec<_>>()),
        "j0": sampled(&grid.iter().map(|&t| (t, mach.j0(t))).collect::<Vec<_>>()),
        "j1": sampled(&grid.iter().map(|&t| (t, mach.j1(t))).collect::<Vec<_>>()),
        "n_wedge": sampled(&grid.iter().map(|&t| (t, mach.n_wedge(t))).collect::<Vec<_>>()),
        "t_fn": sampled(&t_grid.iter().map(|&x| (x, mach.t_fn(x))).collect::<Vec<_>>()),
        "certificates": mach.facts().iter().map(|c| json!({
            "name": c.name,
            "holds": c.holds,
            "witness": if c.witness.is_nan() { Value::Null } else { json!(c.witness) },
            "essential_constant": c.essential_constant,
        })).collect::<Vec<_>>(),
        "tail_comparison": {
            "lower": last.lower,
            "upper": last.upper,
            "upper_over_control_rate": last.upper_over_d,
        },
    })
}

/// Write text to a path, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_csv_round_trip() {
        let dir = std::env::temp_dir();
        let path = dir.join("isoperimetrix_grid_test.csv");
        std::fs::write(&path, "x,value\n0,1\n1,2\n2,2.5\n").unwrap();
        let (xs, vs) = read_grid_csv(&path).unwrap();
        assert_eq!(xs, vec![0.0, 1.0, 2.0]);
        assert_eq!(vs, vec![1.0, 2.0, 2.5]);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn grid_csv_rejects_bad_input() {
        let dir = std::env::temp_dir();
        let path = dir.join("isoperimetrix_grid_bad.csv");
        std::fs::write(&path, "x,value\n1,1\n1,2\n").unwrap();
        assert!(read_grid_csv(&path).is_err());
        std::fs::write(&path, "wrong,header\n1,1\n").unwrap();
        assert!(read_grid_csv(&path).is_err());
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn series_csv_shape() {
        let s = series_csv("t,J(t)", &[(0.5, 0.25)]);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("t,J(t)"));
        assert!(lines.next().unwrap().starts_with("5.0"));
    }
}
