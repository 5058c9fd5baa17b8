use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use dtigra::experiment::{self, ExperimentConfig, Seeds, SolverChoice, TableRow};
use dtigra::signal::{l2_norm, RNG_ALGORITHM};
use dtigra::{DtigraConfig, StopReason, TheoryConstantsF64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{coef_csv, read_coef_csv, read_signal_csv, signal_csv, Staged};
use crate::{Common, SolverKind};

/// Exit status when a solver stopped on a safeguard instead of the discrepancy principle.
const SAFEGUARD_EXIT: u8 = 2;

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn apply_overrides(mut cfg: ExperimentConfig, common: &Common) -> Result<ExperimentConfig> {
    if let Some(s) = common.seed_noise {
        cfg.seeds.noise = s;
    }
    if let Some(s) = common.seed_start {
        cfg.seeds.start = s;
    }
    if let Some(p) = common.p {
        cfg.p = p;
    }
    if let Some(n) = common.noise {
        cfg.noise = n;
    }
    if let Some(n) = common.start_norm {
        cfg.start_norm = n;
    }
    match (common.solver, cfg.solver) {
        (Some(SolverKind::Dtigra), SolverChoice::Landweber { .. }) => {
            cfg.solver = SolverChoice::Dtigra(DtigraConfig::default());
        }
        (Some(SolverKind::Landweber), SolverChoice::Dtigra(_)) => {
            cfg.solver = SolverChoice::landweber_default();
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let base = match &common.config {
        Some(path) => read_json(path)?,
        None => ExperimentConfig::default(),
    };
    apply_overrides(base, common)
}

#[derive(Serialize, Deserialize)]
struct Metadata {
    delta: f64,
    relative_noise: f64,
    y_norm: f64,
    grid_size: usize,
    seeds: Seeds,
    rng: String,
    config: ExperimentConfig,
}

pub fn generate(common: &Common, out: &Path) -> Result<ExitCode> {
    let cfg = load_config(common)?;
    let bundle = experiment::generate(&cfg)?;
    let meta = Metadata {
        delta: bundle.delta,
        relative_noise: cfg.noise,
        y_norm: l2_norm(&bundle.y),
        grid_size: cfg.grid_size(),
        seeds: cfg.seeds,
        rng: RNG_ALGORITHM.to_string(),
        config: cfg,
    };
    let mut staged = Staged::default();
    staged.add("x_true.csv", coef_csv(&bundle.x_true));
    staged.add("f_true.csv", signal_csv(&bundle.f_true));
    staged.add("y.csv", signal_csv(&bundle.y));
    staged.add("y_delta.csv", signal_csv(&bundle.y_delta));
    staged.add_json("metadata.json", &meta)?;
    staged.commit(out)?;
    eprintln!("wrote data bundle to {} (delta = {:e})", out.display(), meta.delta);
    Ok(ExitCode::SUCCESS)
}

pub fn solve(common: &Common, data: &Path, out: &Path) -> Result<ExitCode> {
    let meta: Metadata = read_json(&data.join("metadata.json"))?;
    let base = match &common.config {
        Some(path) => read_json(path)?,
        None => meta.config.clone(),
    };
    let cfg = apply_overrides(base, common)?;
    let y_delta = read_signal_csv(&data.join("y_delta.csv"))?;
    let x_true = read_coef_csv(&data.join("x_true.csv"))?;
    let n = cfg.grid_size();
    for (what, len) in [("metadata grid_size", meta.grid_size), ("y_delta.csv", y_delta.grid_size()), ("x_true.csv", x_true.len())] {
        if len != n {
            bail!("{what} has length {len}, but the configuration expects {n}");
        }
    }
    if !(meta.delta > 0.0 && meta.delta.is_finite()) {
        bail!("metadata delta = {} must be positive", meta.delta);
    }

    let result = experiment::solve(&cfg, &y_delta, meta.delta, &x_true)?;
    let tau = match cfg.solver {
        SolverChoice::Dtigra(d) => d.tau,
        SolverChoice::Landweber { tau, .. } => tau,
    };
    let summary = json!({
        "alpha_final": result.alpha_final,
        "j_star": result.j_star,
        "k_star": result.k_star,
        "relative_error": result.relative_error,
        "stop_reason": result.stop_reason(),
        "seed_metadata": {
            "noise": meta.seeds.noise,
            "start": cfg.seeds.start,
            "rng": RNG_ALGORITHM,
        },
        "residual": result.residual,
        "delta": meta.delta,
        "tau": tau,
        "solver": cfg.solver.name(),
        "config": cfg,
    });
    let mut trace = Vec::new();
    result.trace.write_csv(&mut trace)?;
    let mut staged = Staged::default();
    staged.add_json("result.json", &summary)?;
    staged.add("trace.csv", trace);
    staged.add("x_final.csv", coef_csv(&result.x_final));
    staged.commit(out)?;
    eprintln!(
        "{}: stop {} after j* = {}, k* = {}, e = {:.4}",
        cfg.solver.name(),
        result.stop_reason(),
        result.j_star,
        result.k_star,
        result.relative_error.unwrap_or(f64::NAN)
    );
    Ok(if result.stop_reason() == StopReason::Discrepancy {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(SAFEGUARD_EXIT)
    })
}

#[derive(Deserialize)]
struct ConstantsInput {
    #[serde(flatten)]
    constants: TheoryConstantsF64,
    alpha: Option<f64>,
}

pub fn constants(config: &Path, alpha: Option<f64>, out: Option<&Path>) -> Result<ExitCode> {
    let input: ConstantsInput = read_json(config)?;
    input.constants.validate()?;
    let alpha = alpha.or(input.alpha).unwrap_or(input.constants.alpha0);
    let report = input.constants.report(alpha)?;
    let value = json!({ "constants": report, "input": input.constants });
    let text = serde_json::to_string_pretty(&value)? + "\n";
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_grid(cells: &[ExperimentConfig]) -> Vec<TableRow> {
    cells
        .par_iter()
        .map(|cfg| TableRow::from_outcome(cfg, &experiment::run(cfg)))
        .collect()
}

pub fn reproduce_tables(common: &Common, out: &Path) -> Result<ExitCode> {
    let mut base = match &common.config {
        Some(path) => read_json(path)?,
        None => ExperimentConfig::default(),
    };
    // Grid axes come from the tables; only seeds and solver settings carry over.
    if let Some(s) = common.seed_noise {
        base.seeds.noise = s;
    }
    if let Some(s) = common.seed_start {
        base.seeds.start = s;
    }
    let dtigra_choice = match base.solver {
        SolverChoice::Dtigra(_) => base.solver,
        _ => SolverChoice::Dtigra(DtigraConfig::default()),
    };
    let landweber_choice = match base.solver {
        SolverChoice::Landweber { .. } => base.solver,
        _ => SolverChoice::landweber_default(),
    };
    let mut staged = Staged::default();
    let mut meta = serde_json::Map::new();
    meta.insert("rng".into(), json!(RNG_ALGORITHM));
    meta.insert("base_config".into(), serde_json::to_value(&base)?);
    let tables = [
        (SolverKind::Dtigra, dtigra_choice, "table1.csv", true),
        (SolverKind::Landweber, landweber_choice, "table2.csv", false),
    ];
    for (kind, choice, name, with_outer) in tables {
        if common.solver.is_some_and(|s| s != kind) {
            continue;
        }
        let cells = experiment::table_cells(&base, choice);
        for c in &cells {
            c.validate()?;
        }
        let rows = run_grid(&cells);
        let mut csv = Vec::new();
        experiment::write_table(&rows, with_outer, &mut csv)?;
        staged.add(name, csv);
        let met = rows.iter().filter(|r| r.met_discrepancy()).count();
        eprintln!("{name}: {met} of {} cells met the discrepancy principle", rows.len());
        meta.insert(name.trim_end_matches(".csv").into(), serde_json::to_value(&rows)?);
    }
    staged.add_json("tables_meta.json", &meta)?;
    staged.commit(out)?;
    Ok(ExitCode::SUCCESS)
}
