//! Batch verification harness: loads a scenario config, runs the named
//! suites on the configured geometry and backend, and writes one JSON report
//! per suite plus optional CSV profile tables.
//!
//! Exit codes: 0 all suites pass, 1 at least one suite failed, 2 config error.

use anyhow::{Context, Result, anyhow};
use chiralform::geometry::{Chirality, Geometry, GeometryKind};
use chiralform::par::ExecMode;
use chiralform::scalar::{Exact, Q, q_from_str, q_i64, q_ratio, q_to_string};
use chiralform::suites::{RunSettings, SUITE_NAMES, SuiteReport, run_suite};
use clap::{Parser, Subcommand};
use serde_json::Value;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "chiralform", about = "exact chiral bulk/boundary calculus workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured verification suites and write reports.
    Run {
        config: PathBuf,
        /// Output directory (defaults to the config's `out_dir`, then
        /// `$CHIRALFORM_OUT`, then `reports`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run only the named suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Override the configured arithmetic backend.
        #[arg(long)]
        backend: Option<String>,
    },
    /// Write CSV profile tables for external plotting.
    PlotData {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a config, reporting errors with field paths.
    Validate { config: PathBuf },
}

#[derive(Clone, Debug)]
struct Scenario {
    geometry: Geometry,
    backend: String,
    float_tolerance: f64,
    seed: u64,
    default_samples: usize,
    per_suite_samples: std::collections::BTreeMap<String, usize>,
    suites: Vec<String>,
    bump_support: (Q, Q),
    holonomy_alphas: Vec<Q>,
    ccr_generator_pairs: usize,
    out_dir: Option<PathBuf>,
    plots: Vec<String>,
    sequential: bool,
}

fn config_err(path: &str, msg: impl std::fmt::Display) -> anyhow::Error {
    anyhow!("config error at {path}: {msg}")
}

fn parse_scenario(doc: &Value) -> Result<Scenario> {
    let obj = doc
        .as_object()
        .ok_or_else(|| config_err("$", "expected a JSON object"))?;
    for key in obj.keys() {
        let known = [
            "geometry",
            "chirality",
            "inner_radius",
            "backend",
            "float_tolerance",
            "seed",
            "samples",
            "suites",
            "bump_support",
            "holonomy_alphas",
            "ccr_generator_pairs",
            "out_dir",
            "plots",
            "sequential",
        ];
        if !known.contains(&key.as_str()) {
            return Err(config_err(&format!("$.{key}"), "unknown field"));
        }
    }
    let kind = match obj.get("geometry").and_then(Value::as_str) {
        Some("cylinder") => GeometryKind::Cylinder,
        Some("half_space") => GeometryKind::HalfSpace,
        Some(other) => {
            return Err(config_err("$.geometry", format!("unknown geometry {other:?}")));
        }
        None => return Err(config_err("$.geometry", "required: \"cylinder\" or \"half_space\"")),
    };
    let chirality = match obj.get("chirality").and_then(Value::as_str) {
        Some("+") | None => Chirality::Plus,
        Some("-") => Chirality::Minus,
        Some(other) => {
            return Err(config_err("$.chirality", format!("expected \"+\" or \"-\", got {other:?}")));
        }
    };
    let inner_radius = match obj.get("inner_radius") {
        None => q_ratio(1, 4),
        Some(v) => {
            let s = v
                .as_str()
                .ok_or_else(|| config_err("$.inner_radius", "expected a rational string"))?;
            q_from_str(s).map_err(|e| config_err("$.inner_radius", e))?
        }
    };
    let geometry = Geometry::new(kind, chirality, inner_radius)
        .map_err(|e| config_err("$.inner_radius", e))?;
    let backend = match obj.get("backend").and_then(Value::as_str) {
        None => "exact".to_string(),
        Some(b @ ("exact" | "float")) => b.to_string(),
        Some(other) => {
            return Err(config_err("$.backend", format!("expected \"exact\" or \"float\", got {other:?}")));
        }
    };
    let float_tolerance = match obj.get("float_tolerance") {
        None => 1e-9,
        Some(v) => v
            .as_f64()
            .ok_or_else(|| config_err("$.float_tolerance", "expected a number"))?,
    };
    let seed = match obj.get("seed") {
        None => 0,
        Some(v) => v.as_u64().ok_or_else(|| config_err("$.seed", "expected an unsigned integer"))?,
    };
    let mut default_samples = 100;
    let mut per_suite_samples = std::collections::BTreeMap::new();
    if let Some(samples) = obj.get("samples") {
        let m = samples
            .as_object()
            .ok_or_else(|| config_err("$.samples", "expected an object"))?;
        for (k, v) in m {
            let n = v
                .as_u64()
                .ok_or_else(|| config_err(&format!("$.samples.{k}"), "expected a count"))?
                as usize;
            if k == "default" {
                default_samples = n;
            } else if SUITE_NAMES.contains(&k.as_str()) {
                per_suite_samples.insert(k.clone(), n);
            } else {
                return Err(config_err(&format!("$.samples.{k}"), "unknown suite name"));
            }
        }
    }
    let suites: Vec<String> = match obj.get("suites") {
        None => SUITE_NAMES
            .iter()
            .filter(|s| kind == GeometryKind::Cylinder || **s != "holonomy")
            .map(|s| s.to_string())
            .collect(),
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| config_err("$.suites", "expected an array of suite names"))?;
            let mut out = Vec::new();
            for (i, s) in arr.iter().enumerate() {
                let name = s
                    .as_str()
                    .ok_or_else(|| config_err(&format!("$.suites[{i}]"), "expected a string"))?;
                if !SUITE_NAMES.contains(&name) {
                    return Err(config_err(
                        &format!("$.suites[{i}]"),
                        format!("unknown suite {name:?}; known: {SUITE_NAMES:?}"),
                    ));
                }
                out.push(name.to_string());
            }
            out
        }
    };
    let bump_support = match obj.get("bump_support") {
        None => (q_ratio(1, 2), q_i64(1)),
        Some(v) => {
            let arr = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| config_err("$.bump_support", "expected [lo, hi] rational strings"))?;
            let lo = q_from_str(arr[0].as_str().unwrap_or_default())
                .map_err(|e| config_err("$.bump_support[0]", e))?;
            let hi = q_from_str(arr[1].as_str().unwrap_or_default())
                .map_err(|e| config_err("$.bump_support[1]", e))?;
            if lo >= hi {
                return Err(config_err("$.bump_support", "lower end must be below the upper end"));
            }
            (lo, hi)
        }
    };
    let holonomy_alphas = match obj.get("holonomy_alphas") {
        None => vec![q_i64(1), q_i64(0), q_i64(-2), q_ratio(7, 2)],
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| config_err("$.holonomy_alphas", "expected an array"))?;
            let mut out = Vec::new();
            for (i, a) in arr.iter().enumerate() {
                let s = a
                    .as_str()
                    .ok_or_else(|| config_err(&format!("$.holonomy_alphas[{i}]"), "expected a rational string"))?;
                out.push(q_from_str(s).map_err(|e| config_err(&format!("$.holonomy_alphas[{i}]"), e))?);
            }
            out
        }
    };
    let ccr_generator_pairs = match obj.get("ccr_generator_pairs") {
        None => 4,
        Some(v) => v
            .as_u64()
            .filter(|n| *n >= 1)
            .ok_or_else(|| config_err("$.ccr_generator_pairs", "expected a positive count"))?
            as usize,
    };
    let out_dir = obj
        .get("out_dir")
        .map(|v| {
            v.as_str()
                .map(PathBuf::from)
                .ok_or_else(|| config_err("$.out_dir", "expected a path string"))
        })
        .transpose()?;
    let plots = match obj.get("plots") {
        None => vec![
            "greens_profile".to_string(),
            "coframe".to_string(),
            "collar_homotopy".to_string(),
        ],
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| config_err("$.plots", "expected an array"))?;
            arr.iter()
                .enumerate()
                .map(|(i, p)| {
                    p.as_str().map(String::from).ok_or_else(|| {
                        config_err(&format!("$.plots[{i}]"), "expected a string")
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let sequential = obj
        .get("sequential")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    if kind != GeometryKind::Cylinder && suites.iter().any(|s| s == "holonomy") {
        return Err(config_err("$.suites", "the holonomy suite needs the cylinder geometry"));
    }
    Ok(Scenario {
        geometry,
        backend,
        float_tolerance,
        seed,
        default_samples,
        per_suite_samples,
        suites,
        bump_support,
        holonomy_alphas,
        ccr_generator_pairs,
        out_dir,
        plots,
        sequential,
    })
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| config_err("$", e))?;
    parse_scenario(&doc)
}

fn settings_for(scenario: &Scenario, suite: &str) -> RunSettings {
    let geom = scenario.geometry.clone();
    let mut s = RunSettings::new(geom);
    s.tol = scenario.float_tolerance;
    s.seed = scenario.seed;
    s.n_samples = scenario
        .per_suite_samples
        .get(suite)
        .copied()
        .unwrap_or(scenario.default_samples);
    s.mode = if scenario.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::default_mode()
    };
    s.bump_support = scenario.bump_support.clone();
    s.holonomy_alphas = scenario.holonomy_alphas.clone();
    s.ccr_pairs = scenario.ccr_generator_pairs;
    s
}

fn out_dir_for(scenario: &Scenario, cli_out: Option<PathBuf>) -> PathBuf {
    cli_out
        .or_else(|| scenario.out_dir.clone())
        .or_else(|| std::env::var_os("CHIRALFORM_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("reports"))
}

fn run_command(
    config: &Path,
    out: Option<PathBuf>,
    only: Vec<String>,
    backend: Option<String>,
) -> Result<i32> {
    let mut scenario = load_scenario(config)?;
    if let Some(b) = backend {
        if b != "exact" && b != "float" {
            return Err(config_err("--backend", "expected \"exact\" or \"float\""));
        }
        scenario.backend = b;
    }
    if !only.is_empty() {
        for s in &only {
            if !SUITE_NAMES.contains(&s.as_str()) {
                return Err(config_err("--suite", format!("unknown suite {s:?}")));
            }
        }
        scenario.suites = only;
    }
    let dir = out_dir_for(&scenario, out);
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut all_pass = true;
    for suite in scenario.suites.clone() {
        let settings = settings_for(&scenario, &suite);
        let report: SuiteReport = if scenario.backend == "float" {
            run_suite::<f64>(&suite, &settings)?
        } else {
            run_suite::<Exact>(&suite, &settings)?
        };
        let target = dir.join(format!("{suite}.json"));
        std::fs::write(&target, serde_json::to_string_pretty(&serde_json::to_value(&report)?)?)
            .with_context(|| format!("writing {}", target.display()))?;
        println!(
            "{suite}: {} (max residual {:.3e}, {} checks) -> {}",
            if report.pass { "pass" } else { "FAIL" },
            report.max_residual,
            report.checks.len(),
            target.display()
        );
        all_pass &= report.pass;
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::from(header);
    text.push('\n');
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn plot_command(config: &Path, out: Option<PathBuf>) -> Result<i32> {
    let scenario = load_scenario(config)?;
    let dir = out_dir_for(&scenario, out);
    std::fs::create_dir_all(&dir)?;
    let geom = scenario.geometry.clone();
    for plot in &scenario.plots {
        match plot.as_str() {
            "greens_profile" => {
                // forward kernel of a unit bump along the flow: the profile is
                // the cumulative integral, eventually one
                use chiralform::forms::Form;
                use chiralform::greens::GreensHomotopy;
                let bump = chiralform::reduction::UnitBump::<f64>::new(&q_i64(-1), &q_i64(1));
                let omega: Form<f64> =
                    bump.as_one_form(&geom, chiralform::geometry::SpaceId::Bulk, 0, 0);
                let g = GreensHomotopy::forward(chiralform::geometry::SpaceId::Bulk)
                    .apply(&omega)
                    .map_err(|e| anyhow!("kernel profile: {e}"))?;
                let coeff = g.component(0).cloned().unwrap();
                let mut rows = Vec::new();
                for i in -40i64..=40 {
                    let tau = Q::new(i.into(), 10.into());
                    let point = vec![tau.clone(), q_ratio(1, 3), q_ratio(5, 8)];
                    let (v, _) = coeff.eval_f64(&point);
                    rows.push(format!("{},{v}", q_to_string(&tau)));
                }
                write_csv(&dir.join("greens_profile.csv"), "tau,cumulative", &rows)?;
            }
            "coframe" => {
                let beta: chiralform::forms::Form<f64> =
                    chiralform::forms::invariant_chiral_coframe(&geom);
                let comp = beta.component(0b10).cloned().unwrap();
                let mut rows = Vec::new();
                for i in 0..=20 {
                    let tau = Q::new((i - 10).into(), 5.into());
                    let p = Q::new(i.into(), 20.into());
                    let (v, _) = comp.eval_f64(&[tau.clone(), p.clone()]);
                    rows.push(format!("{},{},{v}", q_to_string(&tau), q_to_string(&p)));
                }
                write_csv(&dir.join("coframe.csv"), "tau,p,beta_p", &rows)?;
            }
            "collar_homotopy" => {
                // radial profiles of the collar bump, its tail integral, and
                // the homotopy applied to a radial one-form
                let bump = chiralform::reduction::UnitBump::<f64>::new(
                    &scenario.bump_support.0,
                    &scenario.bump_support.1,
                );
                let tail = bump
                    .profile
                    .cumulative_to_right(Some(&q_i64(1)))
                    .map_err(|e| anyhow!(e))?;
                let omega: chiralform::forms::Form<f64> =
                    bump.as_one_form(&geom, chiralform::geometry::SpaceId::Tubular, 1, 1);
                let k = chiralform::reduction::boundary_homotopy(&geom, &bump, &omega)
                    .map_err(|e| anyhow!("collar homotopy: {e}"))?;
                let mut rows = Vec::new();
                for i in 0..=40i64 {
                    let rho = Q::new(i.into(), 40.into());
                    let side = chiralform::spline::Side::Below;
                    let b = bump.profile.eval(&rho, side);
                    let t = tail.eval(&rho, side);
                    let kv = k
                        .component(0)
                        .map(|c| c.eval_f64(&[Q::new(1.into(), 3.into()), rho.clone()]).0)
                        .unwrap_or(0.0);
                    rows.push(format!("{},{b},{t},{kv}", q_to_string(&rho)));
                }
                write_csv(
                    &dir.join("collar_homotopy.csv"),
                    "rho,omega,omega_tail,homotopy_of_omega",
                    &rows,
                )?;
            }
            other => {
                return Err(config_err("$.plots", format!("unknown plot {other:?}")));
            }
        }
    }
    Ok(0)
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, out, suites, backend } => {
            match run_command(&config, out, suites, backend) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("{e:#}");
                    2
                }
            }
        }
        Command::PlotData { config, out } => match plot_command(&config, out) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("{e:#}");
                2
            }
        },
        Command::Validate { config } => match load_scenario(&config) {
            Ok(s) => {
                println!(
                    "config ok: {:?} chirality {:?}, backend {}, {} suites",
                    s.geometry.kind,
                    s.geometry.chirality,
                    s.backend,
                    s.suites.len()
                );
                0
            }
            Err(e) => {
                eprintln!("{e:#}");
                2
            }
        },
    };
    std::process::exit(code);
}
