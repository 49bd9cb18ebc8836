//! Scenario runners that regenerate the data behind each figure and the
//! key derived numbers, emitted as tables with a JSON provenance header.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{
    evolve, evolve_krylov, evolve_unitary, spin_lowering, standard_observables, uniform_grid, EvolutionResult, Layout,
    LindbladModel, Tolerances,
};
use crate::error::{Error, Result};
use crate::model::{
    build_h_cmp, build_h_jc, build_h_tc, cavity_magnon_coupling, critical_coupling, derive, effective_spin_spin,
    enhanced_coupling, mixing_angle, polariton_frequencies, polariton_spin_couplings, CouplingCalibration,
    DerivedReport, JcTerms, Overrides, PhysicalParams, SpinPolaritonTerms,
};
use crate::quantum::{annihilation, embed, QuantumState, Space};
use crate::units::{angular, ordinary};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioId {
    Fig1c,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Derive,
    CmpVsJc,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 9] = [
        Self::Fig1c,
        Self::Fig2a,
        Self::Fig2b,
        Self::Fig3a,
        Self::Fig3b,
        Self::Fig4a,
        Self::Fig4b,
        Self::Derive,
        Self::CmpVsJc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1c => "fig1c",
            Self::Fig2a => "fig2a",
            Self::Fig2b => "fig2b",
            Self::Fig3a => "fig3a",
            Self::Fig3b => "fig3b",
            Self::Fig4a => "fig4a",
            Self::Fig4b => "fig4b",
            Self::Derive => "derive",
            Self::CmpVsJc => "cmp_vs_jc",
        }
    }

    /// Default artifact file name.
    pub fn file_name(self) -> String {
        match self {
            Self::Derive => "derive.json".into(),
            other => format!("{}.csv", other.name()),
        }
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario '{s}'")))
    }
}

/// Settings of the Jaynes–Cummings / Tavis–Cummings figure runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DynamicsConfig {
    /// Spin–LP coupling, rad/s.
    pub g_r: f64,
    /// `Δ_c / ω_−`; fixes ω_− from the cavity detuning of the parameter set.
    pub lp_ratio: f64,
    pub lp_dim: usize,
    /// Duration of the resonant runs in Rabi periods `π/g_r`.
    pub rabi_periods: f64,
    /// Duration of the dispersive runs in exchange periods `π/|g_eff|`.
    pub exchange_periods: f64,
    /// Samples per reported oscillation period.
    pub points_per_period: usize,
    pub tolerances: Tolerances,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            g_r: angular(3.5e6),
            lp_ratio: 1e6,
            lp_dim: 10,
            rabi_periods: 3.0,
            exchange_periods: 2.0,
            points_per_period: 400,
            tolerances: Tolerances::default(),
        }
    }
}

/// Settings of the full spin–polariton versus Jaynes–Cummings comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CmpConfig {
    /// `Δ_c / ω_−`.
    pub ratio: f64,
    /// `G / G_c`.
    pub g_over_g_c: f64,
    /// `ω_− / g_r`, which sets the size of the counterrotating correction.
    pub omega_over_g: f64,
    pub lp_dim: usize,
    pub hp_dim: usize,
    pub zero_counterrotating: bool,
}

impl Default for CmpConfig {
    fn default() -> Self {
        Self { ratio: 1e3, g_over_g_c: 0.999, omega_over_g: 50.0, lp_dim: 20, hp_dim: 3, zero_counterrotating: false }
    }
}

/// Everything a scenario needs, with nominal defaults.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub params: PhysicalParams,
    pub overrides: Overrides,
    /// Sphere radii, m.
    pub radius_grid: Vec<f64>,
    pub r_m_set: Vec<f64>,
    /// Cavity and squeezed-magnon detunings of the polariton sweep, rad/s.
    pub fig2b_delta_c: f64,
    pub fig2b_delta_s: f64,
    /// Sweep `G ∈ [0, fig2b_g_max · G_c]`.
    pub fig2b_g_max: f64,
    pub fig2b_points: usize,
    pub dynamics: DynamicsConfig,
    pub cmp: CmpConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            params: PhysicalParams::default(),
            overrides: Overrides { r_m: Some(3.0), lp_ratio: Some(1e6), ..Default::default() },
            radius_grid: (10..=100).map(|nm| nm as f64 * 1e-9).collect(),
            r_m_set: vec![0.0, 3.0, 5.0],
            fig2b_delta_c: angular(1e9),
            fig2b_delta_s: angular(0.5e9),
            fig2b_g_max: 1.5,
            fig2b_points: 301,
            dynamics: DynamicsConfig::default(),
            cmp: CmpConfig::default(),
        }
    }
}

/// Rectangular table: the sweep axis is the first column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub provenance: Value,
}

impl SweepTable {
    pub fn new(columns: Vec<String>, provenance: Value) -> Self {
        Self { columns, rows: Vec::new(), provenance }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn axis(&self) -> &str {
        &self.columns[0]
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.provenance);
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }
}

/// Writes through a sibling temporary file and a rename, so readers never
/// observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::Io(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn provenance(id: &str, extra: Value) -> Value {
    let mut v = json!({ "scenario": id, "code_version": CODE_VERSION });
    if let (Some(map), Value::Object(more)) = (v.as_object_mut(), extra) {
        map.extend(more);
    }
    v
}

pub fn run_fig1c(radius_grid: &[f64], calibration: &CouplingCalibration) -> Result<SweepTable> {
    check_ascending_positive(radius_grid, "radius grid")?;
    let mut t = SweepTable::new(
        vec!["R_nm".into(), "g_m_over_2pi_hz".into()],
        provenance("fig1c", json!({ "calibration": calibration })),
    );
    for &r in radius_grid {
        t.push(vec![r * 1e9, ordinary(cavity_magnon_coupling(r, calibration)?)])?;
    }
    Ok(t)
}

fn r_m_column(r_m: f64) -> String {
    format!("G_over_2pi_hz_r_m_{r_m}")
}

pub fn run_fig2a(radius_grid: &[f64], r_m_set: &[f64], calibration: &CouplingCalibration) -> Result<SweepTable> {
    check_ascending_positive(radius_grid, "radius grid")?;
    let mut columns = vec!["R_nm".to_string()];
    columns.extend(r_m_set.iter().map(|&r| r_m_column(r)));
    let mut t = SweepTable::new(columns, provenance("fig2a", json!({ "calibration": calibration, "r_m_set": r_m_set })));
    for &r in radius_grid {
        let g_m = cavity_magnon_coupling(r, calibration)?;
        let mut row = vec![r * 1e9];
        for &rm in r_m_set {
            row.push(ordinary(enhanced_coupling(g_m, rm)?));
        }
        t.push(row)?;
    }
    Ok(t)
}

/// Squared polariton frequencies (in Hz²) over a coupling grid (rad/s),
/// with the stability flag `ω_−² > 0`.
pub fn run_fig2b(g_grid: &[f64], delta_c: f64, delta_s: f64) -> Result<SweepTable> {
    if g_grid.windows(2).any(|w| w[1] <= w[0]) || g_grid.iter().any(|g| !(*g >= 0.0)) {
        return Err(Error::InvalidParameter("coupling grid must be nonnegative and ascending".into()));
    }
    let g_c = critical_coupling(delta_c, delta_s)?;
    let mut t = SweepTable::new(
        vec![
            "G_over_2pi_hz".into(),
            "omega_plus_sq_hz2".into(),
            "omega_minus_sq_hz2".into(),
            "stable".into(),
        ],
        provenance(
            "fig2b",
            json!({
                "Delta_c_over_2pi_hz": ordinary(delta_c),
                "Delta_s_over_2pi_hz": ordinary(delta_s),
                "G_c_over_2pi_hz": ordinary(g_c),
            }),
        ),
    );
    let hz2 = |w2: f64| w2 / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    for &g in g_grid {
        let p = polariton_frequencies(delta_c, delta_s, g)?;
        t.push(vec![
            ordinary(g),
            hz2(p.omega_plus_squared()),
            hz2(p.omega_minus_squared),
            if p.is_stable() { 1.0 } else { 0.0 },
        ])?;
    }
    Ok(t)
}

/// Uniform coupling grid `[0, g_max · G_c]`.
pub fn fig2b_grid(delta_c: f64, delta_s: f64, g_max: f64, points: usize) -> Result<Vec<f64>> {
    let g_c = critical_coupling(delta_c, delta_s)?;
    uniform_grid(g_max * g_c, points)
}

/// A dynamics run together with the scales that defined it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureRun {
    pub result: EvolutionResult,
    /// rad/s
    pub g_r: f64,
    pub omega_minus: f64,
    pub delta_nv: f64,
    pub g_eff: Option<f64>,
    pub dissipative: bool,
}

impl FigureRun {
    /// Adds `t_g_r = g_r·t` and, where all parts exist, the total
    /// excitation number next to the observables.
    pub fn to_table(&self, id: &str, cfg: &ScenarioConfig) -> Result<SweepTable> {
        let r = &self.result;
        let mut columns = vec!["t_s".to_string(), "t_g_r".to_string()];
        let names: Vec<&String> = r.observables.keys().collect();
        columns.extend(names.iter().map(|n| n.to_string()));
        let parts: Vec<&str> = ["spin1_occupation", "spin2_occupation", "lp_occupation"]
            .into_iter()
            .filter(|n| r.observables.contains_key(*n))
            .collect();
        columns.push("total_excitation".into());
        let d = &r.diagnostics;
        let prov = provenance(
            id,
            json!({
                "params": cfg.params,
                "dynamics": cfg.dynamics,
                "g_r": self.g_r,
                "omega_minus": self.omega_minus,
                "Delta_nv": self.delta_nv,
                "g_eff": self.g_eff,
                "dissipative": self.dissipative,
                "kappa_minus": if self.dissipative { cfg.params.kappa_minus } else { 0.0 },
                "gamma_perp": if self.dissipative { cfg.params.gamma_perp } else { 0.0 },
                "method": d.method,
                "max_trace_deviation": d.max_trace_deviation(),
                "min_eigenvalue": d.min_eigenvalue(),
                "error_estimate": d.error_estimate,
            }),
        );
        let mut t = SweepTable::new(columns, prov);
        for (k, &time) in r.times.iter().enumerate() {
            let mut row = vec![time, self.g_r * time];
            row.extend(names.iter().map(|n| r.observables[*n][k]));
            row.push(parts.iter().map(|n| r.observables[*n][k]).sum());
            t.push(row)?;
        }
        Ok(t)
    }
}

fn cavity_detuning(cfg: &ScenarioConfig) -> f64 {
    cfg.overrides.delta_c.unwrap_or(cfg.params.omega_c - cfg.params.omega_d)
}

fn lp_frequency(cfg: &ScenarioConfig) -> Result<f64> {
    let ratio = cfg.dynamics.lp_ratio;
    if !(ratio > 1.0) {
        return Err(Error::InvalidParameter(format!("lp_ratio must exceed 1, got {ratio}")));
    }
    let delta_c = cavity_detuning(cfg);
    if !(delta_c > 0.0) {
        return Err(Error::InvalidParameter("cavity detuning must be positive".into()));
    }
    Ok(delta_c / ratio)
}

fn period_grid(period: f64, periods: f64, points_per_period: usize) -> Result<Vec<f64>> {
    if !(periods > 0.0) || points_per_period < 2 {
        return Err(Error::InvalidParameter("need a positive duration and ≥ 2 points per period".into()));
    }
    let n = (periods * points_per_period as f64).round() as usize + 1;
    uniform_grid(periods * period, n)
}

fn boson_lowering(space: &Space, slot: usize) -> Result<crate::quantum::Operator> {
    embed(&annihilation(space.factors()[slot])?, slot, space)
}

/// Resonant spin–LP exchange (`Δ_NV = ω_−`) from `|e, 0⟩`.
pub fn run_fig3(cfg: &ScenarioConfig, dissipative: bool) -> Result<FigureRun> {
    let d = &cfg.dynamics;
    let omega_minus = lp_frequency(cfg)?;
    let space = Space::new(&[2, d.lp_dim])?;
    let terms = JcTerms { delta_nv: omega_minus, omega_minus, g_r: d.g_r };
    let h = build_h_jc(&terms, &space)?;
    let grid = period_grid(std::f64::consts::PI / d.g_r.abs(), d.rabi_periods, d.points_per_period)?;
    let obs = standard_observables(&space, Layout::Jc)?;
    let psi0 = QuantumState::basis(&space, &[0, 0])?;
    let result = if dissipative {
        let model = LindbladModel::new(
            h,
            vec![(boson_lowering(&space, 1)?, cfg.params.kappa_minus), (spin_lowering(&space, 0)?, cfg.params.gamma_perp)],
        )?;
        evolve(&model, &psi0, &grid, &obs, &d.tolerances)?
    } else {
        evolve_unitary(&h, &psi0, &grid, &obs)?
    };
    Ok(FigureRun { result, g_r: d.g_r, omega_minus, delta_nv: omega_minus, g_eff: None, dissipative })
}

/// Dispersive two-spin exchange through the LP from `|e, g, 0⟩`.
pub fn run_fig4(cfg: &ScenarioConfig, dissipative: bool) -> Result<FigureRun> {
    let d = &cfg.dynamics;
    let omega_minus = lp_frequency(cfg)?;
    let report = derive(&cfg.params, &cfg.overrides)?;
    let delta_nv = report.scales.delta_nv;
    let g_eff = effective_spin_spin(d.g_r, delta_nv, 0.0)?.g_eff;
    let space = Space::new(&[2, 2, d.lp_dim])?;
    let h = build_h_tc(&JcTerms { delta_nv, omega_minus, g_r: d.g_r }, &space)?;
    let grid = period_grid(std::f64::consts::PI / g_eff.abs(), d.exchange_periods, d.points_per_period)?;
    let obs = standard_observables(&space, Layout::Tc)?;
    let psi0 = QuantumState::basis(&space, &[0, 1, 0])?;
    let result = if dissipative {
        let model = LindbladModel::new(
            h,
            vec![
                (spin_lowering(&space, 0)?, cfg.params.gamma_perp),
                (spin_lowering(&space, 1)?, cfg.params.gamma_perp),
                (boson_lowering(&space, 2)?, cfg.params.kappa_minus),
            ],
        )?;
        evolve_krylov(&model, &psi0, &grid, &obs, &d.tolerances)?
    } else {
        evolve_unitary(&h, &psi0, &grid, &obs)?
    };
    Ok(FigureRun { result, g_r: d.g_r, omega_minus, delta_nv, g_eff: Some(g_eff), dissipative })
}

/// Full spin–polariton model against its Jaynes–Cummings reduction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CmpComparison {
    pub full: EvolutionResult,
    pub jc: EvolutionResult,
    /// Largest `|⟨σ_+σ_−⟩_full − ⟨σ_+σ_−⟩_JC|` over the run.
    pub max_spin_difference: f64,
    pub max_hp_occupation: f64,
    pub terms: SpinPolaritonTerms,
    pub lambda: f64,
    pub delta_c: f64,
    pub delta_s: f64,
    pub g: f64,
    pub theta: f64,
}

impl CmpComparison {
    pub fn to_table(&self, cfg: &ScenarioConfig) -> Result<SweepTable> {
        let prov = provenance(
            "cmp_vs_jc",
            json!({
                "cmp": cfg.cmp,
                "lambda": self.lambda,
                "terms": self.terms,
                "Delta_c": self.delta_c,
                "Delta_s": self.delta_s,
                "G": self.g,
                "theta": self.theta,
                "max_spin_difference": self.max_spin_difference,
                "max_hp_occupation": self.max_hp_occupation,
            }),
        );
        let mut t = SweepTable::new(
            vec![
                "t_s".into(),
                "t_g_r".into(),
                "spin_full".into(),
                "spin_jc".into(),
                "difference".into(),
                "lp_full".into(),
                "hp_full".into(),
            ],
            prov,
        );
        let g_r = self.terms.couplings.g_r;
        for (k, &time) in self.full.times.iter().enumerate() {
            let s_full = self.full.observables["spin1_occupation"][k];
            let s_jc = self.jc.observables["spin1_occupation"][k];
            t.push(vec![
                time,
                g_r * time,
                s_full,
                s_jc,
                (s_full - s_jc).abs(),
                self.full.observables["lp_occupation"][k],
                self.full.observables["hp_occupation"][k],
            ])?;
        }
        Ok(t)
    }
}

fn derive_lambda(cfg: &ScenarioConfig) -> Result<f64> {
    match cfg.overrides.lambda {
        Some(l) => Ok(l),
        None => crate::model::spin_cavity_coupling(cfg.params.omega_c, cfg.params.inductance, cfg.params.distance, cfg.params.g_e),
    }
}

/// Squeezed detuning placing the lower polariton at `ω_−` for
/// `G = η G_c(Δ_c, Δ_s)`: from `(Δ_c² − ω_−²)(Δ_s² − ω_−²) = η²Δ_c²Δ_s²`.
pub fn squeezed_detuning_at_criticality(delta_c: f64, omega_minus: f64, eta: f64) -> Result<f64> {
    let x = omega_minus * omega_minus;
    let c2 = delta_c * delta_c;
    let denom = c2 - x - eta * eta * c2;
    if !(eta > 0.0 && eta < 1.0) || !(denom > 0.0) || !(omega_minus > 0.0 && omega_minus < delta_c) {
        return Err(Error::UnphysicalRegime(format!(
            "no squeezed detuning gives omega_minus = {omega_minus:e} at G/G_c = {eta}"
        )));
    }
    Ok((x * (c2 - x) / denom).sqrt())
}

pub fn run_cmp_vs_jc(cfg: &ScenarioConfig) -> Result<CmpComparison> {
    let c = &cfg.cmp;
    if !(c.ratio >= 100.0) {
        return Err(Error::InvalidParameter(format!("cmp ratio must be at least 100, got {}", c.ratio)));
    }
    if !(c.g_over_g_c < 1.0) {
        return Err(Error::UnstablePolariton(c.g_over_g_c));
    }
    if !(c.omega_over_g > 1.0) {
        return Err(Error::InvalidParameter("omega_over_g must exceed 1".into()));
    }
    let lambda = derive_lambda(cfg)?;
    // g_r ≈ ½λ√ratio near criticality sets the absolute frequency scale
    let omega_minus = c.omega_over_g * 0.5 * lambda * c.ratio.sqrt();
    let delta_c = c.ratio * omega_minus;
    let delta_s = squeezed_detuning_at_criticality(delta_c, omega_minus, c.g_over_g_c)?;
    let g = c.g_over_g_c * critical_coupling(delta_c, delta_s)?;
    let pol = polariton_frequencies(delta_c, delta_s, g)?;
    let wm = pol.omega_minus()?;
    let theta = mixing_angle(delta_c, delta_s, g)?;
    let mut couplings = polariton_spin_couplings(lambda, theta, delta_c, pol.omega_plus, wm)?;
    if c.zero_counterrotating {
        couplings.g_cr = 0.0;
    }
    let terms = SpinPolaritonTerms { delta_nv: wm, omega_plus: pol.omega_plus, omega_minus: wm, couplings };

    let full_space = Space::new(&[2, c.lp_dim, c.hp_dim])?;
    let jc_space = Space::new(&[2, c.lp_dim])?;
    let h_full = build_h_cmp(&terms, &full_space)?;
    let h_jc = build_h_jc(&JcTerms { delta_nv: wm, omega_minus: wm, g_r: couplings.g_r }, &jc_space)?;
    let grid = period_grid(std::f64::consts::PI / couplings.g_r.abs(), 1.0, cfg.dynamics.points_per_period)?;
    let full = evolve_unitary(
        &h_full,
        &QuantumState::basis(&full_space, &[0, 0, 0])?,
        &grid,
        &standard_observables(&full_space, Layout::Cmp)?,
    )?;
    let jc = evolve_unitary(
        &h_jc,
        &QuantumState::basis(&jc_space, &[0, 0])?,
        &grid,
        &standard_observables(&jc_space, Layout::Jc)?,
    )?;
    let max_spin_difference = max_series_difference(&full.observables["spin1_occupation"], &jc.observables["spin1_occupation"]);
    let max_hp_occupation = full.observables["hp_occupation"].iter().copied().fold(0.0, f64::max);
    Ok(CmpComparison { full, jc, max_spin_difference, max_hp_occupation, terms, lambda, delta_c, delta_s, g, theta })
}

pub fn run_derive(params: &PhysicalParams, overrides: &Overrides) -> Result<DerivedReport> {
    derive(params, overrides)
}

/// JSON document of a derive run: the scales in rad/s, their ordinary
/// frequencies and the diagnostics.
pub fn derive_json(report: &DerivedReport, cfg: &ScenarioConfig) -> Value {
    let mut out = serde_json::to_value(&report.scales).unwrap_or(Value::Null);
    if let Value::Object(map) = &mut out {
        for (k, v) in report.ordinary_frequencies() {
            map.insert(k, json!(v));
        }
        map.insert("omega_minus_squared".into(), json!(report.omega_minus_squared));
        map.insert("lp_stable".into(), json!(report.lp_stable));
        map.insert("G_over_G_c".into(), json!(report.g_over_g_c));
        map.insert("magnon_population".into(), json!(report.magnon_population));
        map.insert("dispersive_ratio".into(), json!(report.dispersive_ratio));
        map.insert("dispersive".into(), json!(report.dispersive));
        map.insert("dispersive_threshold".into(), json!(report.dispersive_threshold));
        map.insert("provenance".into(), provenance("derive", json!({ "params": cfg.params, "overrides": cfg.overrides })));
    }
    out
}

/// One-axis sweep of derived quantities. `apply` writes each axis value
/// into the parameter set; `quantities` name keys of the derive report
/// (see [`derive_json`]). Unresolved quantities are NaN and the
/// `lp_stable` column flags the unstable points.
pub fn run_sweep<F>(cfg: &ScenarioConfig, axis: &str, values: &[f64], quantities: &[String], mut apply: F) -> Result<SweepTable>
where
    F: FnMut(&mut PhysicalParams, &mut Overrides, f64) -> Result<()>,
{
    if quantities.is_empty() {
        return Err(Error::InvalidParameter("sweep needs at least one quantity".into()));
    }
    let mut columns = vec![axis.to_string()];
    columns.extend(quantities.iter().cloned());
    columns.push("lp_stable".into());
    let mut t = SweepTable::new(
        columns,
        provenance("sweep", json!({ "axis": axis, "params": cfg.params, "overrides": cfg.overrides })),
    );
    for &v in values {
        let mut params = cfg.params.clone();
        let mut overrides = cfg.overrides.clone();
        apply(&mut params, &mut overrides, v)?;
        let report = derive(&params, &overrides)?;
        let doc = derive_json(&report, cfg);
        let mut row = vec![v];
        for q in quantities {
            let cell = doc.get(q).ok_or_else(|| Error::InvalidParameter(format!("unknown quantity '{q}'")))?;
            row.push(match cell {
                Value::Number(n) => n.as_f64().unwrap_or(f64::NAN),
                Value::Bool(b) => f64::from(u8::from(*b)),
                Value::Null => f64::NAN,
                _ => return Err(Error::InvalidParameter(format!("quantity '{q}' is not numeric"))),
            });
        }
        row.push(if report.lp_stable { 1.0 } else { 0.0 });
        t.push(row)?;
    }
    Ok(t)
}

/// Output of [`run_scenario`].
#[derive(Clone, Debug, PartialEq)]
pub enum Artifact {
    Table(SweepTable),
    Json(Value),
}

impl Artifact {
    pub fn render(&self) -> String {
        match self {
            Self::Table(t) => t.to_csv(),
            Self::Json(v) => serde_json::to_string_pretty(v).unwrap_or_default() + "\n",
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.render().as_bytes())
    }
}

pub fn run_scenario(id: ScenarioId, cfg: &ScenarioConfig) -> Result<Artifact> {
    let cal = &cfg.params.calibration;
    Ok(match id {
        ScenarioId::Fig1c => Artifact::Table(run_fig1c(&cfg.radius_grid, cal)?),
        ScenarioId::Fig2a => Artifact::Table(run_fig2a(&cfg.radius_grid, &cfg.r_m_set, cal)?),
        ScenarioId::Fig2b => {
            let grid = fig2b_grid(cfg.fig2b_delta_c, cfg.fig2b_delta_s, cfg.fig2b_g_max, cfg.fig2b_points)?;
            Artifact::Table(run_fig2b(&grid, cfg.fig2b_delta_c, cfg.fig2b_delta_s)?)
        }
        ScenarioId::Fig3a => Artifact::Table(run_fig3(cfg, false)?.to_table("fig3a", cfg)?),
        ScenarioId::Fig3b => Artifact::Table(run_fig3(cfg, true)?.to_table("fig3b", cfg)?),
        ScenarioId::Fig4a => Artifact::Table(run_fig4(cfg, false)?.to_table("fig4a", cfg)?),
        ScenarioId::Fig4b => Artifact::Table(run_fig4(cfg, true)?.to_table("fig4b", cfg)?),
        ScenarioId::Derive => Artifact::Json(derive_json(&run_derive(&cfg.params, &cfg.overrides)?, cfg)),
        ScenarioId::CmpVsJc => Artifact::Table(run_cmp_vs_jc(cfg)?.to_table(cfg)?),
    })
}

fn check_ascending_positive(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|v| !(*v > 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!("{what} must be positive and ascending")));
    }
    Ok(())
}

/// Largest pointwise `|a − b|`.
pub fn max_series_difference(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Indices of strict interior local maxima.
pub fn local_maxima(series: &[f64]) -> Vec<usize> {
    (1..series.len().saturating_sub(1)).filter(|&k| series[k] > series[k - 1] && series[k] >= series[k + 1]).collect()
}
