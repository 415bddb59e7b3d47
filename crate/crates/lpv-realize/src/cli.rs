//! Command implementations behind the thin binary: parse a model, realize it
//! at a point, run the analysis pipeline, simulate trajectories, and run the
//! built-in example regression table.

use crate::analysis::{analyze, AnalysisConfig, AnalysisReport, ToleranceConfig};
use crate::builtin::{self, ExampleId, FactTable};
use crate::error::{Error, Result};
use crate::model::{parse_model, LpvIoModel};
use crate::realization::build_direct;
use crate::simulate::simulate_io;
use crate::trajfile;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Resolved command-line configuration; every report embeds it verbatim.
#[derive(Debug, Clone)]
pub struct CliConfig {
    /// `lo:hi:count` per dimension; `None` uses the (bounded) model domain.
    pub grid: Option<Vec<(f64, f64, usize)>>,
    pub grid_points_per_dim: usize,
    pub rank_epsilon_scale: f64,
    pub horizon: Option<usize>,
    pub trial_count: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            grid: None,
            grid_points_per_dim: 101,
            rank_epsilon_scale: 1e3,
            horizon: None,
            trial_count: 10,
            seed: 0,
            output: None,
        }
    }
}

/// Parses a grid specification `lo:hi:count[,lo:hi:count...]`.
pub fn parse_grid_spec(spec: &str) -> Result<Vec<(f64, f64, usize)>> {
    spec.split(',')
        .map(|dim| {
            let parts: Vec<&str> = dim.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Grid(format!(
                    "grid dimension `{dim}` must be lo:hi:count"
                )));
            }
            let lo: f64 = parts[0]
                .parse()
                .map_err(|_| Error::Grid(format!("bad grid bound `{}`", parts[0])))?;
            let hi: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Grid(format!("bad grid bound `{}`", parts[1])))?;
            let count: usize = parts[2]
                .parse()
                .map_err(|_| Error::Grid(format!("bad grid count `{}`", parts[2])))?;
            Ok((lo, hi, count))
        })
        .collect()
}

pub fn load_model(path: &Path) -> Result<LpvIoModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Trajectory(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}

fn analysis_config(model: &LpvIoModel, cfg: &CliConfig) -> Result<AnalysisConfig> {
    let (grid_box, per_dim) = match &cfg.grid {
        Some(dims) => {
            let boxes: Vec<(f64, f64)> = dims.iter().map(|&(lo, hi, _)| (lo, hi)).collect();
            let count = dims.first().map(|&(_, _, c)| c).unwrap_or(cfg.grid_points_per_dim);
            (boxes, count)
        }
        None => {
            let boxes: Vec<(f64, f64)> = model
                .domain()
                .iter()
                .map(|iv| {
                    if iv.lo.is_finite() && iv.hi.is_finite() {
                        Ok((iv.lo, iv.hi))
                    } else {
                        Err(Error::Grid(
                            "model domain is unbounded; supply --grid lo:hi:count".into(),
                        ))
                    }
                })
                .collect::<Result<_>>()?;
            (boxes, cfg.grid_points_per_dim)
        }
    };
    let tolerances = ToleranceConfig {
        rank_epsilon: cfg.rank_epsilon_scale * f64::EPSILON,
        ..ToleranceConfig::default()
    };
    Ok(AnalysisConfig {
        grid_box,
        grid_points_per_dim: per_dim,
        horizon: cfg.horizon,
        trial_count: cfg.trial_count,
        seed: cfg.seed,
        tolerances,
    })
}

/// `check`: full analysis, report written to the output path or stdout.
/// The exit status reflects tool failures only, never verdicts.
pub fn cmd_check(model_path: &Path, cfg: &CliConfig) -> Result<AnalysisReport> {
    let model = load_model(model_path)?;
    let config = analysis_config(&model, cfg)?;
    let report = analyze(&model, &config)?;
    let text = serde_json::to_string_pretty(&report)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(report)
}

#[derive(Serialize)]
struct RealizeOutput {
    point: Vec<f64>,
    kind: crate::realization::StructureKind,
    n_x: usize,
    #[serde(rename = "F")]
    f: Vec<Vec<f64>>,
    #[serde(rename = "G")]
    g: Vec<Vec<f64>>,
    #[serde(rename = "H")]
    h: Vec<Vec<f64>>,
    #[serde(rename = "J")]
    j: Vec<Vec<f64>>,
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

/// `realize --at p`: evaluates the direct realization at one point and
/// prints the system matrices as a structured document.
pub fn cmd_realize(model_path: &Path, at: &[f64], output: Option<&Path>) -> Result<String> {
    let model = load_model(model_path)?;
    let r = build_direct(&model)?;
    let m = r.eval(at)?;
    let out = RealizeOutput {
        point: at.to_vec(),
        kind: r.kind(),
        n_x: r.n_x(),
        f: matrix_rows(&m.f),
        g: matrix_rows(&m.g),
        h: matrix_rows(&m.h),
        j: matrix_rows(&m.j),
    };
    let text = serde_json::to_string_pretty(&out)?;
    match output {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(text)
}

/// `simulate`: runs the IO difference equation over trajectory files.
pub fn cmd_simulate(
    model_path: &Path,
    input_path: &Path,
    scheduling_path: &Path,
    output_path: &Path,
) -> Result<()> {
    let model = load_model(model_path)?;
    let u = trajfile::read_signal(input_path)?;
    let p = trajfile::read_scheduling(scheduling_path)?;
    if u.len() != p.len() {
        return Err(Error::Trajectory(format!(
            "input has {} steps but scheduling has {} steps",
            u.len(),
            p.len()
        )));
    }
    let init_y = vec![DVector::zeros(model.n_y()); model.n_a()];
    let init_u = vec![DVector::zeros(model.n_u()); model.n_b() - 1];
    let y = simulate_io(&model, &u, &p, &init_y, &init_u)?;
    trajfile::write_signal(output_path, "y", &y)?;
    Ok(())
}

/// Renders the fact table as aligned text.
pub fn format_fact_table(table: &FactTable) -> String {
    let mut widths = [7usize, 4, 8, 3];
    for r in &table.rows {
        widths[0] = widths[0].max(r.example.len());
        widths[1] = widths[1].max(r.fact.len());
        widths[2] = widths[2].max(r.expected.len());
        widths[3] = widths[3].max(r.got.len());
    }
    let mut s = format!(
        "{:<w0$}  {:<w1$}  {:<w2$}  {:<w3$}  result\n",
        "example",
        "fact",
        "expected",
        "got",
        w0 = widths[0],
        w1 = widths[1],
        w2 = widths[2],
        w3 = widths[3],
    );
    for r in &table.rows {
        s.push_str(&format!(
            "{:<w0$}  {:<w1$}  {:<w2$}  {:<w3$}  {}\n",
            r.example,
            r.fact,
            r.expected,
            r.got,
            if r.pass { "pass" } else { "FAIL" },
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2],
            w3 = widths[3],
        ));
    }
    s
}

/// `examples run-all`: evaluates the regression table; true iff all pass.
pub fn cmd_examples(only: Option<&[ExampleId]>, json: bool) -> Result<(String, bool)> {
    let table = match only {
        Some(ids) => builtin::run(ids)?,
        None => builtin::run_all()?,
    };
    let pass = table.all_pass();
    let text = if json {
        serde_json::to_string_pretty(&table)?
    } else {
        format_fact_table(&table)
    };
    Ok((text, pass))
}
