//! Flat key/value configuration. Keys may sit at the top level of the TOML
//! file or inside any one-level table; the table name is ignored. Every key
//! has a nominal default, so an empty configuration is valid.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use polariton_core::experiments::ScenarioConfig;
use polariton_core::model::{Overrides, PhysicalParams};
use polariton_core::units::{angular, parse_quantity, Quantity};
use polariton_core::{Error, Result};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Ordinary frequency with an optional unit suffix, stored angular.
    Freq,
    Length,
    Time,
    Inductance,
    Number,
    Int,
    Bool,
    Text,
    NumberList,
    IntList,
    TextList,
}

pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    /// Accepts `"none"` to clear the value.
    pub optional: bool,
    pub doc: &'static str,
}

const fn key(name: &'static str, kind: Kind, doc: &'static str) -> KeySpec {
    KeySpec { name, kind, optional: false, doc }
}

const fn opt(name: &'static str, kind: Kind, doc: &'static str) -> KeySpec {
    KeySpec { name, kind, optional: true, doc }
}

pub const KEYS: &[KeySpec] = &[
    key("zero_field_splitting", Kind::Freq, "NV zero-field splitting (2.87 GHz)"),
    key("g_e", Kind::Number, "electron g-factor (2)"),
    key("b_ex", Kind::Number, "external field in tesla (puts Delta_NV at 960 MHz)"),
    key("omega_c", Kind::Freq, "cavity frequency (2 GHz)"),
    key("inductance", Kind::Inductance, "cavity inductance (2 nH)"),
    key("distance", Kind::Length, "spin to center-line distance (50 nm)"),
    key("radius", Kind::Length, "YIG sphere radius (50 nm)"),
    key("k_an", Kind::Number, "anisotropy constant in J/m^3 (calibrated to K = -128 Hz)"),
    key("magnetization", Kind::Number, "saturation magnetization in A/m (1.4e5)"),
    key("b_0", Kind::Number, "bias field in tesla (gamma B_0 = 1 GHz)"),
    opt("s_total", Kind::Number, "total spin of the sphere (none)"),
    key("omega_d", Kind::Freq, "drive frequency (1 GHz)"),
    key("rabi_d", Kind::Freq, "drive Rabi frequency (0 Hz)"),
    key("kappa_c", Kind::Freq, "cavity decay (1 MHz)"),
    key("kappa_m", Kind::Freq, "magnon decay (1 MHz)"),
    key("kappa_minus", Kind::Freq, "lower-polariton decay (1 MHz)"),
    key("gamma_perp", Kind::Freq, "spin dephasing (1 kHz)"),
    opt("mean_m", Kind::Number, "steady-state magnon amplitude (none: solved from the drive)"),
    key("g_m_ref", Kind::Freq, "cavity-magnon coupling at r_ref (0.2 MHz)"),
    key("r_ref", Kind::Length, "reference radius of the coupling calibration (50 nm)"),
    key("g_m_exponent", Kind::Number, "power-law exponent of g_m(R) (1)"),
    opt("lambda", Kind::Freq, "spin-cavity coupling override (none)"),
    opt("delta_c", Kind::Freq, "cavity detuning override (none: omega_c - omega_d)"),
    opt("delta_nv", Kind::Freq, "spin detuning override (none)"),
    opt("r_m", Kind::Number, "squeezing parameter override (3)"),
    opt("delta_s", Kind::Freq, "squeezed-magnon detuning override (none)"),
    opt("g", Kind::Freq, "enhanced coupling override (none)"),
    opt("lp_ratio", Kind::Number, "target Delta_c / omega_- (1e6)"),
    opt("n_minus", Kind::Number, "mean LP occupation in omega_eff (none: 0)"),
    opt("dispersive_ratio", Kind::Number, "dispersive threshold (none: 10)"),
    key("radius_min", Kind::Length, "fig1c/fig2a grid start (10 nm)"),
    key("radius_max", Kind::Length, "fig1c/fig2a grid end (100 nm)"),
    key("radius_points", Kind::Int, "fig1c/fig2a grid size (91)"),
    key("r_m_set", Kind::NumberList, "fig2a squeezing parameters ([0, 3, 5])"),
    key("fig2b_delta_c", Kind::Freq, "fig2b cavity detuning (1 GHz)"),
    key("fig2b_delta_s", Kind::Freq, "fig2b squeezed detuning (0.5 GHz)"),
    key("fig2b_g_max", Kind::Number, "fig2b sweep end in units of G_c (1.5)"),
    key("fig2b_points", Kind::Int, "fig2b grid size (301)"),
    key("g_r", Kind::Freq, "spin-LP coupling of the dynamics runs (3.5 MHz)"),
    key("dynamics_lp_ratio", Kind::Number, "Delta_c / omega_- of the dynamics runs (1e6)"),
    key("lp_dim", Kind::Int, "LP truncation of the dynamics runs (10)"),
    key("rabi_periods", Kind::Number, "fig3 duration in pi/g_r (3)"),
    key("exchange_periods", Kind::Number, "fig4 duration in pi/|g_eff| (2)"),
    key("points_per_period", Kind::Int, "samples per period (400)"),
    key("rtol", Kind::Number, "integrator relative tolerance (1e-10)"),
    key("atol", Kind::Number, "integrator absolute tolerance (rtol / 100)"),
    key("krylov_dim", Kind::Int, "Arnoldi basis size (40)"),
    key("cmp_ratio", Kind::Number, "cmp_vs_jc Delta_c / omega_- (1e3)"),
    key("cmp_g_over_g_c", Kind::Number, "cmp_vs_jc G / G_c (0.999)"),
    key("cmp_omega_over_g", Kind::Number, "cmp_vs_jc omega_- / g_r (50)"),
    key("cmp_lp_dim", Kind::Int, "cmp_vs_jc LP truncation (20)"),
    key("cmp_hp_dim", Kind::Int, "cmp_vs_jc HP truncation (3)"),
    key("cmp_zero_counterrotating", Kind::Bool, "drop counterrotating terms in cmp_vs_jc (false)"),
    opt("scenario", Kind::Text, "scenario for `reproduce` without an argument (none)"),
    key("out", Kind::Text, "output directory (results)"),
    key("evolve_model", Kind::Text, "jc, tc or eff (jc)"),
    opt("evolve_delta_nv", Kind::Freq, "spin detuning (jc: omega_-, tc/eff: derived Delta_NV)"),
    opt("evolve_omega_minus", Kind::Freq, "LP frequency (Delta_c / dynamics_lp_ratio)"),
    opt("evolve_g_r", Kind::Freq, "spin-LP coupling (g_r)"),
    opt("evolve_duration", Kind::Time, "run length (jc: rabi_periods pi/g_r, tc/eff: exchange_periods pi/|g_eff|)"),
    opt("evolve_points", Kind::Int, "grid size (periods x points_per_period + 1)"),
    opt("evolve_initial", Kind::IntList, "initial basis levels, 0 = excited (jc [0,0], tc [0,1,0], eff [0,1])"),
    key("evolve_dissipative", Kind::Bool, "add spin dephasing and LP decay (false)"),
    key("evolve_method", Kind::Text, "auto, unitary, rk or krylov (auto)"),
    opt("sweep_param", Kind::Text, "parameter key swept by `sweep`"),
    opt("sweep_from", Kind::Text, "sweep start, in the parameter's units"),
    opt("sweep_to", Kind::Text, "sweep end, in the parameter's units"),
    key("sweep_points", Kind::Int, "sweep size (51)"),
    key("sweep_log", Kind::Bool, "logarithmic spacing (false)"),
    key("sweep_quantities", Kind::TextList, "derived quantities to tabulate"),
];

pub fn spec(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

/// Where a key's value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    File,
    Set,
    Flag,
}

impl Source {
    fn label(self) -> &'static str {
        match self {
            Self::File => "config",
            Self::Set => "--set",
            Self::Flag => "flag",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: String,
    pub value: toml::Value,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveSpec {
    pub model: String,
    pub delta_nv: Option<f64>,
    pub omega_minus: Option<f64>,
    pub g_r: Option<f64>,
    pub duration: Option<f64>,
    pub points: Option<usize>,
    pub initial: Option<Vec<usize>>,
    pub dissipative: bool,
    pub method: String,
}

impl Default for EvolveSpec {
    fn default() -> Self {
        Self {
            model: "jc".into(),
            delta_nv: None,
            omega_minus: None,
            g_r: None,
            duration: None,
            points: None,
            initial: None,
            dissipative: false,
            method: "auto".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub param: Option<String>,
    pub from: Option<String>,
    pub to: Option<String>,
    pub points: usize,
    pub log: bool,
    pub quantities: Vec<String>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            param: None,
            from: None,
            to: None,
            points: 51,
            log: false,
            quantities: ["G_over_2pi_hz", "omega_minus_over_2pi_hz", "g_r_over_2pi_hz", "g_eff_over_2pi_hz"]
                .map(String::from)
                .to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub scenario: ScenarioConfig,
    pub scenario_id: Option<String>,
    pub out: PathBuf,
    /// `out` was set explicitly.
    pub out_given: bool,
    pub evolve: EvolveSpec,
    pub sweep: SweepSpec,
    /// Every user-supplied key with its raw and parsed value.
    pub inputs: Map<String, Value>,
    pub defaulted: Vec<&'static str>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Reads a config file into entries, flattening one level of tables.
pub fn read_file(path: &Path) -> Result<Vec<Entry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_text(&text)
}

pub fn parse_text(text: &str) -> Result<Vec<Entry>> {
    let table: toml::Table = text.parse().map_err(|e| invalid(format!("config is not valid TOML: {e}")))?;
    let mut out = Vec::new();
    for (k, v) in table {
        match v {
            toml::Value::Table(inner) => {
                for (k2, v2) in inner {
                    if v2.is_table() {
                        return Err(invalid(format!("nested table '{k}.{k2}' is not supported")));
                    }
                    out.push(Entry { key: k2, value: v2, source: Source::File });
                }
            }
            other => out.push(Entry { key: k, value: other, source: Source::File }),
        }
    }
    Ok(out)
}

/// `key=value` from `--set`. The value is read as a TOML value when it
/// parses as one and as a bare string otherwise, so `omega_c=2GHz` works.
pub fn parse_set(arg: &str) -> Result<Entry> {
    let (k, v) = arg.split_once('=').ok_or_else(|| invalid(format!("--set expects key=value, got '{arg}'")))?;
    let k = k.trim();
    let v = v.trim();
    let value = match format!("v = {v}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(v.into())),
        Err(_) => toml::Value::String(v.into()),
    };
    Ok(Entry { key: k.into(), value, source: Source::Set })
}

fn is_none(v: &toml::Value) -> bool {
    matches!(v, toml::Value::String(s) if s.trim().eq_ignore_ascii_case("none"))
}

fn quantity_of(kind: Kind) -> Quantity {
    match kind {
        Kind::Freq => Quantity::Frequency,
        Kind::Length => Quantity::Length,
        Kind::Time => Quantity::Time,
        Kind::Inductance => Quantity::Inductance,
        _ => Quantity::Dimensionless,
    }
}

/// Scalar in the units the user writes (Hz for frequencies, SI otherwise).
pub fn scalar_user_units(kind: Kind, key: &str, v: &toml::Value) -> Result<f64> {
    let x = match v {
        toml::Value::Float(f) => *f,
        toml::Value::Integer(i) => *i as f64,
        toml::Value::String(s) => parse_quantity(s, quantity_of(kind))?,
        other => return Err(invalid(format!("'{key}' expects a number, got {other}"))),
    };
    if !x.is_finite() {
        return Err(invalid(format!("'{key}' must be finite")));
    }
    Ok(x)
}

/// User units to the internal representation (angular for frequencies).
pub fn to_internal(kind: Kind, x: f64) -> f64 {
    if kind == Kind::Freq {
        angular(x)
    } else {
        x
    }
}

fn int_of(key: &str, v: &toml::Value) -> Result<usize> {
    match v {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        other => Err(invalid(format!("'{key}' expects a non-negative integer, got {other}"))),
    }
}

fn bool_of(key: &str, v: &toml::Value) -> Result<bool> {
    v.as_bool().ok_or_else(|| invalid(format!("'{key}' expects true or false, got {v}")))
}

fn text_of(key: &str, v: &toml::Value) -> Result<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(_) | toml::Value::Float(_) => Ok(v.to_string()),
        other => Err(invalid(format!("'{key}' expects a string, got {other}"))),
    }
}

fn list_of<'a>(key: &str, v: &'a toml::Value) -> Result<&'a Vec<toml::Value>> {
    v.as_array().ok_or_else(|| invalid(format!("'{key}' expects an array, got {v}")))
}

fn toml_to_json(v: &toml::Value) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Writes a physical or override key. `value` is internal (angular for
/// frequencies); `None` clears an optional key. Returns false when `key`
/// does not name a model parameter.
pub fn set_model(p: &mut PhysicalParams, o: &mut Overrides, key: &str, value: Option<f64>) -> Result<bool> {
    let need = |v: Option<f64>| v.ok_or_else(|| invalid(format!("'{key}' cannot be none")));
    match key {
        "zero_field_splitting" => p.zero_field_splitting = need(value)?,
        "g_e" => p.g_e = need(value)?,
        "b_ex" => p.b_ex = need(value)?,
        "omega_c" => p.omega_c = need(value)?,
        "inductance" => p.inductance = need(value)?,
        "distance" => p.distance = need(value)?,
        "radius" => p.radius = need(value)?,
        "k_an" => p.k_an = need(value)?,
        "magnetization" => p.magnetization = need(value)?,
        "b_0" => p.b_0 = need(value)?,
        "s_total" => p.s_total = value,
        "omega_d" => p.omega_d = need(value)?,
        "rabi_d" => p.rabi_d = need(value)?,
        "kappa_c" => p.kappa_c = need(value)?,
        "kappa_m" => p.kappa_m = need(value)?,
        "kappa_minus" => p.kappa_minus = need(value)?,
        "gamma_perp" => p.gamma_perp = need(value)?,
        "mean_m" => p.mean_m = value.map(|m| num_complex::Complex64::new(m, 0.0)),
        "g_m_ref" => p.calibration.g_ref = need(value)?,
        "r_ref" => p.calibration.r_ref = need(value)?,
        "g_m_exponent" => p.calibration.exponent = need(value)?,
        "lambda" => o.lambda = value,
        "delta_c" => o.delta_c = value,
        "delta_nv" => o.delta_nv = value,
        "r_m" => o.r_m = value,
        // Δ_s and the LP ratio are two ways to fix the same quantity
        "delta_s" => {
            o.delta_s = value;
            if value.is_some() {
                o.lp_ratio = None;
            }
        }
        "lp_ratio" => {
            o.lp_ratio = value;
            if value.is_some() {
                o.delta_s = None;
            }
        }
        "g" => o.g = value,
        "n_minus" => o.n_minus = value,
        "dispersive_ratio" => o.dispersive_ratio = value,
        _ => return Ok(false),
    }
    Ok(true)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Sweep axis values in user units.
pub fn axis_values(from: f64, to: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(invalid("sweep_points must be at least 2"));
    }
    if log {
        if !(from > 0.0 && to > 0.0) {
            return Err(invalid("a logarithmic sweep needs positive end points"));
        }
        Ok(linspace(from.ln(), to.ln(), points).into_iter().map(f64::exp).collect())
    } else {
        Ok(linspace(from, to, points))
    }
}

impl Config {
    /// Applies `entries` in order over the nominal defaults.
    pub fn from_entries(entries: &[Entry]) -> Result<Self> {
        let mut cfg = Config {
            scenario: ScenarioConfig::default(),
            scenario_id: None,
            out: PathBuf::from("results"),
            out_given: false,
            evolve: EvolveSpec::default(),
            sweep: SweepSpec::default(),
            inputs: Map::new(),
            defaulted: Vec::new(),
        };
        let mut seen = BTreeSet::new();
        let mut radius = (10e-9, 100e-9, 91usize);
        for e in entries {
            let spec = spec(&e.key).ok_or_else(|| invalid(format!("unknown config key '{}'", e.key)))?;
            let parsed = cfg.apply(spec, &e.value, &mut radius)?;
            seen.insert(spec.name);
            cfg.inputs.insert(
                spec.name.into(),
                json!({ "given": toml_to_json(&e.value), "parsed": parsed, "source": e.source.label() }),
            );
        }
        let given = |k: &str| entries.iter().any(|e| e.key == k && !is_none(&e.value));
        if given("delta_s") && given("lp_ratio") {
            return Err(invalid("delta_s and lp_ratio are mutually exclusive"));
        }
        if ["radius_min", "radius_max", "radius_points"].iter().any(|k| seen.contains(k)) {
            let (a, b, n) = radius;
            if !(a > 0.0 && b > a && n >= 2) {
                return Err(invalid("radius grid needs 0 < radius_min < radius_max and radius_points >= 2"));
            }
            cfg.scenario.radius_grid = linspace(a, b, n);
        }
        if seen.contains("rtol") && !seen.contains("atol") {
            let t = &mut cfg.scenario.dynamics.tolerances;
            t.atol = 1e-2 * t.rtol;
        }
        cfg.defaulted = KEYS.iter().map(|k| k.name).filter(|k| !seen.contains(k)).collect();
        Ok(cfg)
    }

    /// Stores one value; returns the parsed value for the provenance echo.
    fn apply(&mut self, spec: &KeySpec, v: &toml::Value, radius: &mut (f64, f64, usize)) -> Result<Value> {
        let key = spec.name;
        if is_none(v) {
            if !spec.optional {
                return Err(invalid(format!("'{key}' cannot be none")));
            }
            let s = &mut self.scenario;
            if !set_model(&mut s.params, &mut s.overrides, key, None)? {
                match key {
                    "scenario" => self.scenario_id = None,
                    "evolve_delta_nv" => self.evolve.delta_nv = None,
                    "evolve_omega_minus" => self.evolve.omega_minus = None,
                    "evolve_g_r" => self.evolve.g_r = None,
                    "evolve_duration" => self.evolve.duration = None,
                    "evolve_points" => self.evolve.points = None,
                    "evolve_initial" => self.evolve.initial = None,
                    "sweep_param" => self.sweep.param = None,
                    "sweep_from" => self.sweep.from = None,
                    "sweep_to" => self.sweep.to = None,
                    _ => unreachable!("optional key without a clear path: {key}"),
                }
            }
            return Ok(Value::Null);
        }
        match spec.kind {
            Kind::Freq | Kind::Length | Kind::Time | Kind::Inductance | Kind::Number => {
                let x = to_internal(spec.kind, scalar_user_units(spec.kind, key, v)?);
                let s = &mut self.scenario;
                if !set_model(&mut s.params, &mut s.overrides, key, Some(x))? {
                    let d = &mut s.dynamics;
                    match key {
                        "radius_min" => radius.0 = x,
                        "radius_max" => radius.1 = x,
                        "fig2b_delta_c" => s.fig2b_delta_c = x,
                        "fig2b_delta_s" => s.fig2b_delta_s = x,
                        "fig2b_g_max" => s.fig2b_g_max = x,
                        "g_r" => d.g_r = x,
                        "dynamics_lp_ratio" => d.lp_ratio = x,
                        "rabi_periods" => d.rabi_periods = x,
                        "exchange_periods" => d.exchange_periods = x,
                        "rtol" => d.tolerances.rtol = x,
                        "atol" => d.tolerances.atol = x,
                        "cmp_ratio" => s.cmp.ratio = x,
                        "cmp_g_over_g_c" => s.cmp.g_over_g_c = x,
                        "cmp_omega_over_g" => s.cmp.omega_over_g = x,
                        "evolve_delta_nv" => self.evolve.delta_nv = Some(x),
                        "evolve_omega_minus" => self.evolve.omega_minus = Some(x),
                        "evolve_g_r" => self.evolve.g_r = Some(x),
                        "evolve_duration" => self.evolve.duration = Some(x),
                        _ => unreachable!("numeric key without a target: {key}"),
                    }
                }
                Ok(json!(x))
            }
            Kind::Int => {
                let n = int_of(key, v)?;
                let s = &mut self.scenario;
                match key {
                    "radius_points" => radius.2 = n,
                    "fig2b_points" => s.fig2b_points = n,
                    "lp_dim" => s.dynamics.lp_dim = n,
                    "points_per_period" => s.dynamics.points_per_period = n,
                    "krylov_dim" => s.dynamics.tolerances.krylov_dim = n,
                    "cmp_lp_dim" => s.cmp.lp_dim = n,
                    "cmp_hp_dim" => s.cmp.hp_dim = n,
                    "evolve_points" => self.evolve.points = Some(n),
                    "sweep_points" => self.sweep.points = n,
                    _ => unreachable!("integer key without a target: {key}"),
                }
                Ok(json!(n))
            }
            Kind::Bool => {
                let b = bool_of(key, v)?;
                match key {
                    "cmp_zero_counterrotating" => self.scenario.cmp.zero_counterrotating = b,
                    "evolve_dissipative" => self.evolve.dissipative = b,
                    "sweep_log" => self.sweep.log = b,
                    _ => unreachable!("boolean key without a target: {key}"),
                }
                Ok(json!(b))
            }
            Kind::Text => {
                let t = text_of(key, v)?;
                match key {
                    "scenario" => self.scenario_id = Some(t.clone()),
                    "out" => {
                        self.out = PathBuf::from(&t);
                        self.out_given = true;
                    }
                    "evolve_model" => {
                        if !["jc", "tc", "eff"].contains(&t.as_str()) {
                            return Err(invalid(format!("evolve_model must be jc, tc or eff, got '{t}'")));
                        }
                        self.evolve.model = t.clone();
                    }
                    "evolve_method" => {
                        if !["auto", "unitary", "rk", "krylov"].contains(&t.as_str()) {
                            return Err(invalid(format!("evolve_method must be auto, unitary, rk or krylov, got '{t}'")));
                        }
                        self.evolve.method = t.clone();
                    }
                    "sweep_param" => self.sweep.param = Some(t.clone()),
                    "sweep_from" => self.sweep.from = Some(t.clone()),
                    "sweep_to" => self.sweep.to = Some(t.clone()),
                    _ => unreachable!("text key without a target: {key}"),
                }
                Ok(json!(t))
            }
            Kind::NumberList => {
                let xs = list_of(key, v)?
                    .iter()
                    .map(|x| scalar_user_units(Kind::Number, key, x))
                    .collect::<Result<Vec<f64>>>()?;
                self.scenario.r_m_set = xs.clone();
                Ok(json!(xs))
            }
            Kind::IntList => {
                let xs = list_of(key, v)?.iter().map(|x| int_of(key, x)).collect::<Result<Vec<usize>>>()?;
                self.evolve.initial = Some(xs.clone());
                Ok(json!(xs))
            }
            Kind::TextList => {
                let xs = list_of(key, v)?.iter().map(|x| text_of(key, x)).collect::<Result<Vec<String>>>()?;
                self.sweep.quantities = xs.clone();
                Ok(json!(xs))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use polariton_core::units::ordinary;

    fn cfg(text: &str) -> Result<Config> {
        Config::from_entries(&parse_text(text)?)
    }

    #[test]
    fn empty_config_is_nominal() {
        let c = cfg("").unwrap();
        assert_eq!(c.scenario, ScenarioConfig::default());
        assert_eq!(c.defaulted.len(), KEYS.len());
        assert!(c.inputs.is_empty());
    }

    #[test]
    fn units_and_sections() {
        let c = cfg("[params]\nomega_c = \"2.5 GHz\"\nradius = \"40nm\"\ninductance = \"3 nH\"\n[dynamics]\nlp_dim = 12\n").unwrap();
        assert!((ordinary(c.scenario.params.omega_c) - 2.5e9).abs() < 1e-3);
        assert!((c.scenario.params.radius - 40e-9).abs() < 1e-20);
        assert!((c.scenario.params.inductance - 3e-9).abs() < 1e-20);
        assert_eq!(c.scenario.dynamics.lp_dim, 12);
        assert_eq!(c.inputs["omega_c"]["given"], json!("2.5 GHz"));
        assert!(!c.defaulted.contains(&"omega_c"));
    }

    #[test]
    fn bare_numbers_are_hz() {
        let c = cfg("kappa_c = 2e6").unwrap();
        assert!((c.scenario.params.kappa_c - angular(2e6)).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(cfg("omega_cc = 1").is_err());
        assert!(cfg("omega_c = \"2 nm\"").is_err());
        assert!(cfg("lp_dim = -3").is_err());
        assert!(cfg("omega_c = \"none\"").is_err());
        assert!(cfg("evolve_model = \"xyz\"").is_err());
        assert!(cfg("[a]\n[a.b]\nc = 1").is_err());
        assert!(cfg("delta_s = \"1 GHz\"\nlp_ratio = 10").is_err());
    }

    #[test]
    fn delta_s_replaces_lp_ratio() {
        let c = cfg("delta_s = \"0.5 GHz\"").unwrap();
        assert_eq!(c.scenario.overrides.lp_ratio, None);
        assert!(c.scenario.overrides.delta_s.is_some());
        let c = cfg("r_m = \"none\"").unwrap();
        assert_eq!(c.scenario.overrides.r_m, None);
    }

    #[test]
    fn set_parses_toml_or_text() {
        let e = parse_set("omega_c=2GHz").unwrap();
        assert_eq!(e.value, toml::Value::String("2GHz".into()));
        let e = parse_set("lp_dim = 14").unwrap();
        assert_eq!(e.value, toml::Value::Integer(14));
        let e = parse_set("r_m_set=[1, 2]").unwrap();
        assert!(e.value.is_array());
        assert!(parse_set("novalue").is_err());
    }

    #[test]
    fn rtol_sets_atol() {
        let c = cfg("rtol = 1e-8").unwrap();
        assert_eq!(c.scenario.dynamics.tolerances.atol, 1e-10);
        let c = cfg("rtol = 1e-8\natol = 0.0").unwrap();
        assert_eq!(c.scenario.dynamics.tolerances.atol, 0.0);
    }

    #[test]
    fn radius_grid() {
        let c = cfg("radius_min = \"20 nm\"\nradius_points = 3").unwrap();
        assert_eq!(c.scenario.radius_grid.len(), 3);
        assert!((c.scenario.radius_grid[1] - 60e-9).abs() < 1e-20);
        assert!(cfg("radius_min = \"200 nm\"").is_err());
    }

    #[test]
    fn every_key_has_a_target() {
        for k in KEYS {
            let v = match k.kind {
                Kind::Freq => "\"1 MHz\"",
                Kind::Length => "\"20 nm\"",
                Kind::Time => "\"1 us\"",
                Kind::Inductance => "\"1 nH\"",
                Kind::Number => "0.5",
                Kind::Int => "3",
                Kind::Bool => "true",
                Kind::Text => match k.name {
                    "evolve_model" => "\"tc\"",
                    "evolve_method" => "\"rk\"",
                    _ => "\"x\"",
                },
                Kind::NumberList => "[1.0]",
                Kind::IntList => "[0, 1]",
                Kind::TextList => "[\"g_r_over_2pi_hz\"]",
            };
            cfg(&format!("{} = {v}", k.name)).unwrap_or_else(|e| panic!("{}: {e}", k.name));
            if k.optional {
                cfg(&format!("{} = \"none\"", k.name)).unwrap_or_else(|e| panic!("{} none: {e}", k.name));
            }
        }
    }

    #[test]
    fn axis_spacing() {
        let v = axis_values(1.0, 100.0, 3, true).unwrap();
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert_eq!(axis_values(0.0, 1.0, 5, false).unwrap()[2], 0.5);
        assert!(axis_values(0.0, 1.0, 3, true).is_err());
        assert!(axis_values(0.0, 1.0, 1, false).is_err());
    }
}
