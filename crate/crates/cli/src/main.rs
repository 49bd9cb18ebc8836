//! `polariton`: derive scales, reproduce scenarios, sweep parameters and
//! run custom evolutions from a flat TOML configuration.

mod config;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polariton_core::dynamics::{
    evolve, evolve_krylov, evolve_unitary, spin_lowering, standard_observables, uniform_grid, Layout, LindbladModel,
};
use polariton_core::experiments::{derive_json, run_derive, run_scenario, run_sweep, Artifact, FigureRun, ScenarioId, SweepTable};
use polariton_core::model::{build_h_eff, build_h_jc, build_h_tc, derive, effective_spin_spin, ExchangeTerms, JcTerms};
use polariton_core::quantum::{annihilation, embed, QuantumState, Space};
use polariton_core::selftest::{all_passed, run_selftest};
use polariton_core::units::ordinary;
use polariton_core::{Error, Result};
use serde_json::{json, Value};

use config::{Config, Entry, Kind, Source};

#[derive(Parser, Debug)]
#[command(name = "polariton", version, about = "Kerr-magnon / cavity / NV-spin model chain and dynamics")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override one config key, e.g. `--set omega_c=2.1GHz`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Integrator relative tolerance.
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// Lower-polariton truncation of every dynamics run.
    #[arg(long, global = true, value_name = "INT")]
    dim: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the derived scales as JSON.
    Derive,
    /// Run one scenario: fig1c, fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, derive, cmp_vs_jc.
    Reproduce {
        #[arg(value_name = "FIG_ID")]
        fig_id: Option<String>,
    },
    /// Single-axis sweep of derived quantities.
    Sweep {
        /// Parameter key to sweep.
        #[arg(long)]
        param: Option<String>,
        /// Start value in the parameter's units, e.g. `1GHz`.
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        #[arg(long)]
        points: Option<usize>,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
        /// Derived quantity to tabulate. Repeatable.
        #[arg(long = "quantity")]
        quantities: Vec<String>,
    },
    /// Evolve a Jaynes-Cummings, Tavis-Cummings or exchange model.
    Evolve,
    /// Run the invariant suite.
    Selftest {
        /// Randomized cases per property.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// List the configuration keys with their defaults.
    Keys,
}

fn flag(key: &str, value: toml::Value) -> Entry {
    Entry { key: key.into(), value, source: Source::Flag }
}

fn load(cli: &Cli) -> Result<Config> {
    let mut entries = match &cli.config {
        Some(p) => config::read_file(p)?,
        None => Vec::new(),
    };
    for s in &cli.set {
        entries.push(config::parse_set(s)?);
    }
    if let Some(out) = &cli.out {
        entries.push(flag("out", toml::Value::String(out.display().to_string())));
    }
    if let Some(t) = cli.tol {
        entries.push(flag("rtol", toml::Value::Float(t)));
    }
    if let Some(d) = cli.dim {
        entries.push(flag("lp_dim", toml::Value::Integer(d as i64)));
        entries.push(flag("cmp_lp_dim", toml::Value::Integer(d as i64)));
    }
    if let Command::Sweep { param, from, to, points, log, quantities } = &cli.command {
        let text = |s: &String| toml::Value::String(s.clone());
        let pairs = [("sweep_param", param.as_ref().map(text)), ("sweep_from", from.as_ref().map(text)), ("sweep_to", to.as_ref().map(text))];
        for (k, v) in pairs {
            if let Some(v) = v {
                entries.push(flag(k, v));
            }
        }
        if let Some(n) = points {
            entries.push(flag("sweep_points", toml::Value::Integer(*n as i64)));
        }
        if *log {
            entries.push(flag("sweep_log", toml::Value::Boolean(true)));
        }
        if !quantities.is_empty() {
            entries.push(flag("sweep_quantities", toml::Value::Array(quantities.iter().map(text).collect())));
        }
    }
    Config::from_entries(&entries)
}

fn attach_inputs(provenance: &mut Value, cfg: &Config) {
    if let Value::Object(map) = provenance {
        map.insert("inputs".into(), Value::Object(cfg.inputs.clone()));
    }
}

fn with_inputs(artifact: Artifact, cfg: &Config) -> Artifact {
    match artifact {
        Artifact::Table(mut t) => {
            attach_inputs(&mut t.provenance, cfg);
            Artifact::Table(t)
        }
        Artifact::Json(mut v) => {
            attach_inputs(&mut v["provenance"], cfg);
            Artifact::Json(v)
        }
    }
}

fn write_into(dir: &Path, name: &str, artifact: &Artifact) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    artifact.write(&path)?;
    Ok(path)
}

/// Prints the report even for an unstable lower polariton, then fails
/// with the numerical exit code.
fn cmd_derive(cfg: &Config) -> Result<()> {
    let report = run_derive(&cfg.scenario.params, &cfg.scenario.overrides)?;
    let artifact = with_inputs(Artifact::Json(derive_json(&report, &cfg.scenario)), cfg);
    print!("{}", artifact.render());
    if cfg.out_given {
        let path = write_into(&cfg.out, "derive.json", &artifact)?;
        eprintln!("wrote {}", path.display());
    }
    if !report.lp_stable {
        return Err(Error::UnstablePolariton(report.omega_minus_squared));
    }
    Ok(())
}

fn cmd_reproduce(cfg: &Config, fig_id: Option<&str>) -> Result<()> {
    let name = fig_id
        .map(str::to_string)
        .or_else(|| cfg.scenario_id.clone())
        .ok_or_else(|| Error::InvalidParameter("reproduce needs a FIG_ID (or the `scenario` key)".into()))?;
    let id: ScenarioId = name.parse().map_err(|_| {
        let known: Vec<&str> = ScenarioId::ALL.iter().map(|s| s.name()).collect();
        Error::InvalidParameter(format!("unknown fig-id '{name}'; expected one of {}", known.join(", ")))
    })?;
    let artifact = with_inputs(run_scenario(id, &cfg.scenario)?, cfg);
    let path = write_into(&cfg.out, &id.file_name(), &artifact)?;
    println!("{}", path.display());
    Ok(())
}

fn axis_name(key: &str, kind: Kind) -> String {
    match kind {
        Kind::Freq => format!("{key}_over_2pi_hz"),
        Kind::Length => format!("{key}_m"),
        Kind::Inductance => format!("{key}_h"),
        _ => key.to_string(),
    }
}

fn cmd_sweep(cfg: &Config) -> Result<()> {
    let s = &cfg.sweep;
    let param = s.param.as_deref().ok_or_else(|| Error::InvalidParameter("sweep needs --param (or sweep_param)".into()))?;
    let spec = config::spec(param).filter(|k| {
        let mut p = cfg.scenario.params.clone();
        let mut o = cfg.scenario.overrides.clone();
        matches!(k.kind, Kind::Freq | Kind::Length | Kind::Inductance | Kind::Number)
            && config::set_model(&mut p, &mut o, param, Some(1.0)).unwrap_or(false)
    });
    let spec = spec.ok_or_else(|| Error::InvalidParameter(format!("'{param}' is not a sweepable model parameter")))?;
    let end = |v: &Option<String>, what: &str| -> Result<f64> {
        let text = v.as_ref().ok_or_else(|| Error::InvalidParameter(format!("sweep needs --{what}")))?;
        config::scalar_user_units(spec.kind, param, &toml::Value::String(text.clone()))
    };
    let values = config::axis_values(end(&s.from, "from")?, end(&s.to, "to")?, s.points, s.log)?;
    let table = run_sweep(&cfg.scenario, &axis_name(param, spec.kind), &values, &s.quantities, |p, o, v| {
        config::set_model(p, o, param, Some(config::to_internal(spec.kind, v))).map(|_| ())
    })?;
    let artifact = with_inputs(Artifact::Table(table), cfg);
    let path = write_into(&cfg.out, &format!("sweep_{param}.csv"), &artifact)?;
    println!("{}", path.display());
    Ok(())
}

fn boson_lowering(space: &Space, slot: usize) -> Result<polariton_core::quantum::Operator> {
    embed(&annihilation(space.factors()[slot])?, slot, space)
}

/// Evolution of the model named by `evolve_model`, reported like the
/// figure runs.
fn run_evolve(cfg: &Config) -> Result<SweepTable> {
    let e = &cfg.evolve;
    let sc = &cfg.scenario;
    let d = &sc.dynamics;
    let delta_c = sc.overrides.delta_c.unwrap_or(sc.params.omega_c - sc.params.omega_d);
    let omega_minus = e.omega_minus.unwrap_or(delta_c / d.lp_ratio);
    let g_r = e.g_r.unwrap_or(d.g_r);
    let delta_nv = match (e.delta_nv, e.model.as_str()) {
        (Some(v), _) => v,
        (None, "jc") => omega_minus,
        (None, _) => derive(&sc.params, &sc.overrides)?.scales.delta_nv,
    };
    let dim = d.lp_dim;
    let (space, layout, default_initial) = match e.model.as_str() {
        "jc" => (Space::new(&[2, dim])?, Layout::Jc, vec![0, 0]),
        "tc" => (Space::new(&[2, 2, dim])?, Layout::Tc, vec![0, 1, 0]),
        _ => (Space::new(&[2, 2])?, Layout::Eff, vec![0, 1]),
    };
    let g_eff = if e.model == "jc" { None } else { Some(effective_spin_spin(g_r, delta_nv, sc.overrides.n_minus.unwrap_or(0.0))?) };
    let h = match e.model.as_str() {
        "jc" => build_h_jc(&JcTerms { delta_nv, omega_minus, g_r }, &space)?,
        "tc" => build_h_tc(&JcTerms { delta_nv, omega_minus, g_r }, &space)?,
        _ => {
            let x = g_eff.expect("exchange constant");
            build_h_eff(&ExchangeTerms { omega_eff: x.omega_eff, g_eff: x.g_eff }, &space)?
        }
    };
    let (period, periods) = match g_eff {
        None => (PI / g_r.abs(), d.rabi_periods),
        Some(x) => (PI / x.g_eff.abs(), d.exchange_periods),
    };
    let duration = e.duration.unwrap_or(periods * period);
    let points = e.points.unwrap_or(((duration / period) * d.points_per_period as f64).round() as usize + 1);
    let grid = uniform_grid(duration, points.max(2))?;
    let levels = e.initial.clone().unwrap_or(default_initial);
    let psi0 = QuantumState::basis(&space, &levels)?;
    let obs = standard_observables(&space, layout)?;

    let result = if e.dissipative {
        let mut collapses = vec![(spin_lowering(&space, 0)?, sc.params.gamma_perp)];
        if layout != Layout::Jc {
            collapses.push((spin_lowering(&space, 1)?, sc.params.gamma_perp));
        }
        if layout != Layout::Eff {
            collapses.push((boson_lowering(&space, space.num_factors() - 1)?, sc.params.kappa_minus));
        }
        let model = LindbladModel::new(h, collapses)?;
        match e.method.as_str() {
            "unitary" => return Err(Error::InvalidParameter("evolve_method = unitary needs evolve_dissipative = false".into())),
            "krylov" => evolve_krylov(&model, &psi0, &grid, &obs, &d.tolerances)?,
            "rk" => evolve(&model, &psi0, &grid, &obs, &d.tolerances)?,
            _ if layout == Layout::Tc => evolve_krylov(&model, &psi0, &grid, &obs, &d.tolerances)?,
            _ => evolve(&model, &psi0, &grid, &obs, &d.tolerances)?,
        }
    } else {
        match e.method.as_str() {
            "rk" => evolve(&LindbladModel::closed(h)?, &psi0, &grid, &obs, &d.tolerances)?,
            "krylov" => evolve_krylov(&LindbladModel::closed(h)?, &psi0, &grid, &obs, &d.tolerances)?,
            _ => evolve_unitary(&h, &psi0, &grid, &obs)?,
        }
    };
    let run = FigureRun { result, g_r, omega_minus, delta_nv, g_eff: g_eff.map(|x| x.g_eff), dissipative: e.dissipative };
    let mut table = run.to_table("evolve", sc)?;
    if let Value::Object(map) = &mut table.provenance {
        map.insert(
            "evolve".into(),
            json!({
                "model": e.model,
                "method": e.method,
                "initial": levels,
                "duration_s": duration,
                "points": grid.len(),
                "lp_dim": dim,
            }),
        );
    }
    Ok(table)
}

fn cmd_evolve(cfg: &Config) -> Result<()> {
    let artifact = with_inputs(Artifact::Table(run_evolve(cfg)?), cfg);
    let path = write_into(&cfg.out, "evolve.csv", &artifact)?;
    println!("{}", path.display());
    Ok(())
}

/// Checks of the configuration layer itself, reported with the library
/// suite.
fn cli_checks() -> Vec<(String, bool, String)> {
    let mut out = Vec::new();
    let nominal = Config::from_entries(&[]).map(|c| c.scenario == polariton_core::experiments::ScenarioConfig::default());
    out.push(("empty config resolves to the nominal set".into(), nominal.unwrap_or(false), String::new()));

    let echo = config::parse_text("omega_c = \"2.5 GHz\"\nlp_dim = 12\nr_m_set = [1, 2.5]")
        .and_then(|e| Config::from_entries(&e))
        .map(|c| {
            c.inputs["omega_c"]["given"] == json!("2.5 GHz")
                && (ordinary(c.inputs["omega_c"]["parsed"].as_f64().unwrap_or(0.0)) - 2.5e9).abs() < 1e-3
                && c.inputs["lp_dim"]["parsed"] == json!(12)
                && c.inputs["r_m_set"]["parsed"] == json!([1.0, 2.5])
        });
    out.push(("numeric inputs echo back as parsed".into(), echo.unwrap_or(false), String::new()));

    let unknown = config::parse_text("not_a_key = 1").and_then(|e| Config::from_entries(&e)).is_err();
    out.push(("unknown keys are rejected".into(), unknown, String::new()));
    out
}

fn cmd_selftest(cfg: &Config, samples: usize, seed: u64) -> Result<bool> {
    let checks = run_selftest(&cfg.scenario, samples, seed);
    let mut ok = all_passed(&checks);
    for c in &checks {
        let status = match (c.pass, c.known_deviation) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known deviation)",
            (false, false) => "FAIL",
        };
        let detail = if c.detail.is_empty() { String::new() } else { format!(" [{}]", c.detail) };
        println!("{status:<4} {:<12} {}{detail}", c.module, c.invariant);
    }
    for (name, pass, _) in cli_checks() {
        ok &= pass;
        println!("{:<4} {:<12} {name}", if pass { "PASS" } else { "FAIL" }, "cli");
    }
    Ok(ok)
}

fn cmd_keys() {
    for k in config::KEYS {
        println!("{:<26} {}", k.name, k.doc);
    }
}

fn code_for(e: &Error) -> u8 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = load(cli)?;
    if !matches!(cli.command, Command::Keys) && !cfg.defaulted.is_empty() {
        eprintln!(
            "notice: {} of {} config keys take their nominal defaults (`polariton keys` lists them): {}",
            cfg.defaulted.len(),
            config::KEYS.len(),
            cfg.defaulted.join(", ")
        );
    }
    match &cli.command {
        Command::Derive => cmd_derive(&cfg)?,
        Command::Reproduce { fig_id } => cmd_reproduce(&cfg, fig_id.as_deref())?,
        Command::Sweep { .. } => cmd_sweep(&cfg)?,
        Command::Evolve => cmd_evolve(&cfg)?,
        Command::Selftest { samples, seed } => {
            if !cmd_selftest(&cfg, *samples, *seed)? {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Keys => cmd_keys(),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(code_for(&e))
        }
    }
}
