//! Run configuration, command dispatch and CSV emission.
//!
//! A run is described by one JSON document (every field optional, unknown
//! fields rejected) followed by `--set key=value` overrides.
//!
//! CSV schema, one header row, 12 significant digits in scientific notation:
//!
//! | command       | columns |
//! |---------------|---------|
//! | `derive`      | [`DERIVE_COLUMNS`] |
//! | `trace`       | [`TRACE_COLUMNS`] |
//! | `gate-error`  | [`REPORT_COLUMNS`] |
//! | `sweep-temp`  | [`REPORT_COLUMNS`] |
//! | `manybody`    | [`MANYBODY_COLUMNS`] |
//! | `compare`     | [`COMPARE_COLUMNS`] |

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::echogate::{
    analytic_blockade, build_sequence, derive_frequencies, GateParams, Protocol,
    StagedSpacing,
};
use crate::error::{Error, Result};
use crate::errorbudget::{
    sweep_temperature, BudgetSetup, DecayModel, DopplerMode, ErrorReport, Sampling, ThermalModel,
};
use crate::hilbert::{StateVector, C64};
use crate::manybody::{
    lattice_basis, run_echo, DressingParams, EchoRun, EchoSchedule, LatticeConfig, Regime, Segment,
    SwapMode, DEFAULT_TRACE_STEPS,
};
use crate::pulsemodel::{angular_to_mhz, run_sequence, DEFAULT_SUBSTEPS};

pub const DERIVE_COLUMNS: &[&str] = &[
    "V0_MHz",
    "V1_MHz",
    "Vplus_MHz",
    "Omega_c_MHz",
    "Omega_t2_MHz",
    "Omega_t3_MHz",
    "Omega_t4_MHz",
    "kappa",
    "T_wait_ns",
    "t1_ns",
    "t2_ns",
    "t3_ns",
    "t4_ns",
    "t5_ns",
    "t_middle_ns",
    "blockade_ratio_t2",
    "blockade_ratio_t3",
    "kappa2",
    "kappa3",
    "eps1",
    "eps2",
];

pub const TRACE_COLUMNS: &[&str] = &[
    "t_us",
    "pop_rc0",
    "pop_rcr0",
    "pop_rcr1",
    "arg_rc0",
    "log10_deficit_rc0",
    "log10_pop_rcr0",
    "log10_pop_rcr1",
];

pub const REPORT_COLUMNS: &[&str] = &[
    "Ta_uK",
    "E_de",
    "E_ro",
    "E_Do",
    "E_total",
    "dwell_rc_ns",
    "dwell_r0_ns",
    "dwell_r1_ns",
    "sigma_L_um",
    "v_z_um_per_us",
    "harmonic_ok",
];

/// Segment codes: 0 initial, 1 forward, 2 swap, 3 backward.
pub const MANYBODY_COLUMNS: &[&str] = &["t_us", "segment", "M", "P"];

pub const COMPARE_COLUMNS: &[&str] = &[
    "Ta_uK",
    "E_total_echo",
    "E_total_traditional",
    "E_ro_echo",
    "E_ro_traditional",
    "E_de_echo",
    "E_de_traditional",
    "E_Do_echo",
    "E_Do_traditional",
    "ratio",
];

/// Floor applied before taking log10 of a population.
pub const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    MonteCarlo,
    GaussHermite,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub ta_uk: Vec<f64>,
    pub quadrature: Quadrature,
    pub samples: usize,
    pub seed: u64,
    pub nodes: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            ta_uk: vec![0.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0],
            quadrature: Quadrature::MonteCarlo,
            samples: 2000,
            seed: 0,
            nodes: 40,
        }
    }
}

impl SweepConfig {
    pub fn sampling(&self) -> Sampling {
        match self.quadrature {
            Quadrature::MonteCarlo => Sampling::MonteCarlo {
                samples: self.samples,
                seed: self.seed,
            },
            Quadrature::GaussHermite => Sampling::GaussHermite { nodes: self.nodes },
        }
    }

    pub fn grid_kelvin(&self) -> Vec<f64> {
        self.ta_uk.iter().map(|t| t * 1e-6).collect()
    }
}

/// Many-body run; absent values come from the regime preset.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ManybodyConfig {
    pub regime: Regime,
    pub n_atoms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_constant_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c6_00: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c6_11: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0_us: Option<f64>,
    /// Overrides the matched `t0/|ϰ|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backward_duration_us: Option<f64>,
    pub swap: SwapMode,
    pub trace_steps: usize,
}

impl Default for ManybodyConfig {
    fn default() -> Self {
        Self {
            regime: Regime::Dressing,
            n_atoms: 4,
            lattice_constant_um: None,
            omega_mhz: None,
            delta_mhz: None,
            c6_00: None,
            c6_11: None,
            t0_us: None,
            backward_duration_us: None,
            swap: SwapMode::Ideal,
            trace_steps: DEFAULT_TRACE_STEPS,
        }
    }
}

/// Fully resolved many-body inputs.
#[derive(Debug, Clone)]
pub struct ManybodySetup {
    pub regime: Regime,
    pub lattice: LatticeConfig,
    pub dressing: DressingParams,
    pub schedule: EchoSchedule,
    pub trace_steps: usize,
}

impl ManybodyConfig {
    pub fn resolve(&self) -> Result<ManybodySetup> {
        let preset = self.regime.preset();
        let lattice = LatticeConfig {
            n_atoms: self.n_atoms,
            lattice_constant_um: self
                .lattice_constant_um
                .unwrap_or(preset.lattice.lattice_constant_um),
            ..preset.lattice
        };
        lattice.validate()?;
        let dressing = DressingParams {
            omega_mhz: self.omega_mhz.unwrap_or(preset.dressing.omega_mhz),
            delta_mhz: self.delta_mhz.unwrap_or(preset.dressing.delta_mhz),
            c6_00: self.c6_00.unwrap_or(preset.dressing.c6_00),
            c6_11: self.c6_11.unwrap_or(preset.dressing.c6_11),
        };
        dressing.validate()?;
        let mut schedule =
            EchoSchedule::new(self.t0_us.unwrap_or(preset.t0), dressing.kappa(), self.swap)?;
        if let Some(d) = self.backward_duration_us {
            schedule = schedule.with_backward_duration(d)?;
        }
        if self.trace_steps == 0 {
            return Err(Error::invalid("manybody.trace_steps", "must be at least 1"));
        }
        Ok(ManybodySetup {
            regime: self.regime,
            lattice,
            dressing,
            schedule,
            trace_steps: self.trace_steps,
        })
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GateErrorConfig {
    pub ta_uk: f64,
}

impl Default for GateErrorConfig {
    fn default() -> Self {
        Self { ta_uk: 0.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub protocol: Protocol,
    pub gate: GateParams,
    pub thermal: ThermalModel,
    pub decay: DecayModel,
    pub doppler: DopplerMode,
    /// Per-stage substeps for traces and dwell integrals.
    pub substeps: usize,
    pub gate_error: GateErrorConfig,
    pub sweep: SweepConfig,
    pub manybody: ManybodyConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::SpinEcho,
            gate: GateParams::default(),
            thermal: ThermalModel::default(),
            decay: DecayModel::default(),
            doppler: DopplerMode::default(),
            substeps: DEFAULT_SUBSTEPS,
            gate_error: GateErrorConfig::default(),
            sweep: SweepConfig::default(),
            manybody: ManybodyConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Short names accepted by `--set`.
const ALIASES: &[(&str, &str)] = &[
    ("L", "gate.spacing_um"),
    ("eta", "gate.eta"),
    ("phi", "gate.phi"),
    ("samples", "sweep.samples"),
    ("seed", "sweep.seed"),
    ("regime", "manybody.regime"),
];

fn prefix_field(e: Error, prefix: &str) -> Error {
    match e {
        Error::InvalidParameter { field, reason } => Error::InvalidParameter {
            field: format!("{prefix}.{field}"),
            reason,
        },
        other => other,
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.gate.validate().map_err(|e| prefix_field(e, "gate"))?;
        self.thermal.validate()?;
        self.decay.validate()?;
        if self.substeps < 2 {
            return Err(Error::invalid("substeps", "need at least 2 per stage"));
        }
        if !(self.gate_error.ta_uk >= 0.0) || !self.gate_error.ta_uk.is_finite() {
            return Err(Error::invalid("gate_error.ta_uk", "must be non-negative"));
        }
        let s = &self.sweep;
        if s.ta_uk.is_empty() {
            return Err(Error::invalid("sweep.ta_uk", "must not be empty"));
        }
        if s.ta_uk.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(Error::invalid("sweep.ta_uk", "temperatures must be non-negative"));
        }
        if s.samples == 0 {
            return Err(Error::invalid("sweep.samples", "must be at least 1"));
        }
        if s.nodes == 0 {
            return Err(Error::invalid("sweep.nodes", "must be at least 1"));
        }
        self.manybody.resolve()?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = if text.trim().is_empty() {
            Value::Object(Default::default())
        } else {
            serde_json::from_str(text).map_err(|e| Error::Config(format!("parse error: {e}")))?
        };
        Self::from_value(value)
    }

    fn from_value(value: Value) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Reads `path` (or starts from defaults) and applies `overrides` in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        let mut value: Value = if text.trim().is_empty() {
            Value::Object(Default::default())
        } else {
            serde_json::from_str(&text).map_err(|e| {
                let name = path.map(|p| p.display().to_string()).unwrap_or_default();
                Error::Config(format!("{name}: parse error: {e}"))
            })?
        };
        for item in overrides {
            apply_override(&mut value, item)?;
        }
        Self::from_value(value)
    }
}

/// Applies one `key=value` override; the value is read as JSON when it parses,
/// as a string otherwise.
pub fn apply_override(root: &mut Value, item: &str) -> Result<()> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override {item:?} is not key=value")))?;
    let key = key.trim();
    let path = ALIASES
        .iter()
        .find(|(a, _)| *a == key)
        .map_or(key, |(_, full)| *full);
    if path.is_empty() || path.split('.').any(str::is_empty) {
        return Err(Error::Config(format!("override {item:?} has an empty key")));
    }
    let parsed = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().into()));
    let mut node = root;
    let parts: Vec<&str> = path.split('.').collect();
    for part in &parts[..parts.len() - 1] {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override {key:?}: {part:?} is not a block")))?;
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    node.as_object_mut()
        .ok_or_else(|| Error::Config(format!("override {key:?}: parent is not a block")))?
        .insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}

/// A rectangular numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            header: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_value(x))).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv is ascii"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Derive,
    Trace,
    GateError,
    SweepTemp,
    Manybody,
    Compare,
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<CsvTable> {
    match command {
        Command::Derive => derive_table(&cfg.gate),
        Command::Trace => trace_table(cfg),
        Command::GateError => {
            let reports = sweep_temperature(&budget(cfg, cfg.protocol), &[cfg.gate_error.ta_uk * 1e-6])?;
            Ok(report_table(&reports))
        }
        Command::SweepTemp => {
            let reports = sweep_temperature(&budget(cfg, cfg.protocol), &cfg.sweep.grid_kelvin())?;
            Ok(report_table(&reports))
        }
        Command::Manybody => {
            let run = manybody_run(&cfg.manybody.resolve()?)?;
            Ok(manybody_table(&run))
        }
        Command::Compare => compare_table(cfg),
    }
}

pub fn budget(cfg: &RunConfig, protocol: Protocol) -> BudgetSetup {
    BudgetSetup {
        params: cfg.gate.clone(),
        protocol,
        thermal: cfg.thermal.clone(),
        decay: cfg.decay.clone(),
        sampling: cfg.sweep.sampling(),
        doppler: cfg.doppler,
        substeps: cfg.substeps,
    }
}

pub fn derive_table(p: &GateParams) -> Result<CsvTable> {
    let d = derive_frequencies(p)?;
    let a = analytic_blockade(&d);
    let ns = |t: f64| t * 1e3;
    let mut t = CsvTable::new(DERIVE_COLUMNS);
    t.push(vec![
        angular_to_mhz(d.v0),
        angular_to_mhz(d.v1),
        angular_to_mhz(d.v_plus),
        angular_to_mhz(d.omega_c),
        angular_to_mhz(d.omega_t2),
        angular_to_mhz(d.omega_t3),
        angular_to_mhz(d.omega_t4),
        d.kappa,
        ns(d.t_wait),
        ns(d.durations[0]),
        ns(d.durations[1]),
        ns(d.durations[2]),
        ns(d.durations[3]),
        ns(d.durations[4]),
        ns(d.middle_duration(Protocol::SpinEcho, p.t_gap_us)),
        d.blockade_ratio_t2,
        d.blockade_ratio_t3,
        a.kappa2,
        a.kappa3,
        a.eps1,
        a.eps2,
    ]);
    Ok(t)
}

/// `−i|rc 0⟩` (control excited by pulse-1) through the blockade-sensitive
/// middle of the gate, at frozen geometry.
pub fn trace_table(cfg: &RunConfig) -> Result<CsvTable> {
    let d = derive_frequencies(&cfg.gate)?;
    let gate = build_sequence(cfg.protocol, &cfg.gate, &d)?
        .with_spacing(&StagedSpacing::frozen(cfg.gate.spacing_um))?;
    let middle = match cfg.protocol {
        Protocol::SpinEcho => gate.sequence.between("pulse-2", "pulse-4")?,
        Protocol::Traditional => gate.sequence.between("pulse-2pi", "pulse-2pi")?,
    };
    let basis = crate::echogate::gate_basis();
    let psi = StateVector::basis_state(&basis, &["rc", "0"])?.scaled(C64::new(0.0, -1.0));
    let run = run_sequence(&middle, &psi, Some(cfg.substeps))?;
    let traj = run
        .trajectory
        .ok_or_else(|| Error::MissingTrace("trace run".into()))?;
    let rc0 = traj.population_series(&["rc", "0"])?;
    let rcr0 = traj.population_series(&["rc", "r0"])?;
    let rcr1 = traj.population_series(&["rc", "r1"])?;
    let arg = traj.argument_series(&["rc", "0"])?;
    let log = |x: f64| x.max(LOG_FLOOR).log10();
    let mut t = CsvTable::new(TRACE_COLUMNS);
    for k in 0..traj.len() {
        t.push(vec![
            traj.times[k],
            rc0[k],
            rcr0[k],
            rcr1[k],
            arg[k],
            log(1.0 - rc0[k]),
            log(rcr0[k]),
            log(rcr1[k]),
        ]);
    }
    Ok(t)
}

pub fn report_table(reports: &[ErrorReport]) -> CsvTable {
    let dwell = |r: &ErrorReport, l: &str| r.dwell.get(l).copied().unwrap_or(0.0) * 1e3;
    let mut t = CsvTable::new(REPORT_COLUMNS);
    for r in reports {
        t.push(vec![
            r.ta_k * 1e6,
            r.e_de,
            r.e_ro,
            r.e_do,
            r.total,
            dwell(r, "rc"),
            dwell(r, "r0"),
            dwell(r, "r1"),
            r.sigma_l,
            r.v_z,
            if r.harmonic_ok { 1.0 } else { 0.0 },
        ]);
    }
    t
}

pub fn compare_table(cfg: &RunConfig) -> Result<CsvTable> {
    let grid = cfg.sweep.grid_kelvin();
    let echo = sweep_temperature(&budget(cfg, Protocol::SpinEcho), &grid)?;
    let trad = sweep_temperature(&budget(cfg, Protocol::Traditional), &grid)?;
    let mut t = CsvTable::new(COMPARE_COLUMNS);
    for (e, r) in echo.iter().zip(&trad) {
        t.push(vec![
            e.ta_k * 1e6,
            e.total,
            r.total,
            e.e_ro,
            r.e_ro,
            e.e_de,
            r.e_de,
            e.e_do,
            r.e_do,
            r.total / e.total,
        ]);
    }
    Ok(t)
}

pub fn manybody_run(setup: &ManybodySetup) -> Result<EchoRun> {
    let basis = lattice_basis(&setup.lattice)?;
    let psi = setup.regime.initial_state(&basis)?;
    run_echo(
        &setup.lattice,
        &setup.dressing,
        &psi,
        &setup.schedule,
        setup.trace_steps,
    )
}

pub fn manybody_table(run: &EchoRun) -> CsvTable {
    let s = &run.series;
    let mut t = CsvTable::new(MANYBODY_COLUMNS);
    for k in 0..s.times.len() {
        let code = match s.segments[k] {
            Segment::Initial => 0.0,
            Segment::Forward => 1.0,
            Segment::Swap => 2.0,
            Segment::Backward => 3.0,
        };
        t.push(vec![s.times[k], code, s.magnetization[k], s.population_one[k]]);
    }
    t
}

/// Exit status for an error: 2 for configuration problems, 3 for numerics.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_config_error() {
        2
    } else {
        3
    }
}

/// Every column any command can emit.
pub fn documented_columns() -> Vec<&'static str> {
    [
        DERIVE_COLUMNS,
        TRACE_COLUMNS,
        REPORT_COLUMNS,
        MANYBODY_COLUMNS,
        COMPARE_COLUMNS,
    ]
    .concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulsemodel::mhz_to_angular;
    use approx::assert_relative_eq;

    #[test]
    fn empty_config_is_default() {
        let cfg = RunConfig::from_json("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.gate.omega_c_mhz, 10.0);
        assert_eq!(cfg.gate.spacing_um, 8.0);
        assert_eq!(RunConfig::from_json("{}").unwrap(), cfg);
    }

    #[test]
    fn round_trip() {
        let mut cfg = RunConfig::default();
        cfg.gate.eta3 = Some(12.0);
        cfg.manybody.omega_mhz = Some(3.0);
        cfg.manybody.swap = SwapMode::Finite { rabi_mhz: 500.0 };
        cfg.sweep.quadrature = Quadrature::GaussHermite;
        cfg.output.csv = Some("out.csv".into());
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        let default = RunConfig::default();
        assert_eq!(RunConfig::from_json(&default.to_json()).unwrap(), default);
    }

    #[test]
    fn spacing_override_rescales_v0() {
        let base = derive_frequencies(&RunConfig::default().gate).unwrap();
        let cfg = RunConfig::load(None, &["L=16".into()]).unwrap();
        let d = derive_frequencies(&cfg.gate).unwrap();
        assert_relative_eq!(d.v0 / base.v0, 1.0 / 64.0, max_relative = 1e-14);
    }

    #[test]
    fn negative_eta_names_field() {
        let e = RunConfig::load(None, &["eta=-3".into()]).unwrap_err();
        assert!(e.to_string().contains("eta"), "{e}");
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn unknown_fields_rejected() {
        let e = RunConfig::from_json(r#"{"gate": {"etta": 3}}"#).unwrap_err();
        assert!(e.to_string().contains("etta"), "{e}");
        let e = RunConfig::load(None, &["nosuch.key=1".into()]).unwrap_err();
        assert!(e.to_string().contains("nosuch"), "{e}");
        let e = RunConfig::from_json("{\n  \"gate\": {\n    \"eta\": ,\n  }\n}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn override_values_and_strings() {
        let cfg = RunConfig::load(
            None,
            &[
                "protocol=traditional".into(),
                "sweep.ta_uk=[0, 5]".into(),
                "manybody.swap={\"kind\":\"finite\",\"rabi_mhz\":400}".into(),
                "regime=near_resonant".into(),
                "phi=1.5".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.protocol, Protocol::Traditional);
        assert_eq!(cfg.sweep.ta_uk, vec![0.0, 5.0]);
        assert_eq!(cfg.manybody.swap, SwapMode::Finite { rabi_mhz: 400.0 });
        assert_eq!(cfg.manybody.regime, Regime::NearResonant);
        assert_eq!(cfg.gate.phi, 1.5);
        assert!(RunConfig::load(None, &["phi".into()]).is_err());
    }

    #[test]
    fn derive_defaults() {
        let t = run_command(Command::Derive, &RunConfig::default()).unwrap();
        assert_eq!(t.rows.len(), 1);
        let v0 = t.column("V0_MHz").unwrap()[0];
        let tw = t.column("T_wait_ns").unwrap()[0];
        assert!((v0 - 214.4).abs() < 0.05, "{v0}");
        assert!((tw - 5.12).abs() < 0.005, "{tw}");
        assert_relative_eq!(
            mhz_to_angular(t.column("Omega_c_MHz").unwrap()[0]),
            mhz_to_angular(10.0)
        );
    }

    #[test]
    fn csv_formatting() {
        assert_eq!(format_value(214.4), "2.14400000000e2");
        assert_eq!(format_value(-1.0e-6), "-1.00000000000e-6");
        let mut t = CsvTable::new(&["a", "b"]);
        t.push(vec![1.0, 0.5]);
        assert_eq!(t.to_csv_string().unwrap(), "a,b\n1.00000000000e0,5.00000000000e-1\n");
    }

    #[test]
    fn trace_final_deficit() {
        let t = run_command(Command::Trace, &RunConfig::default()).unwrap();
        let pop = t.column("pop_rc0").unwrap();
        assert!(1.0 - pop.last().unwrap() <= 2e-5);
        let arg = t.column("arg_rc0").unwrap();
        assert_relative_eq!(arg[0], -std::f64::consts::FRAC_PI_2, max_relative = 1e-14);
    }

    #[test]
    fn manybody_ends_at_figure_time() {
        let mut cfg = RunConfig::default();
        cfg.manybody.trace_steps = 20;
        let t = run_command(Command::Manybody, &cfg).unwrap();
        let times = t.column("t_us").unwrap();
        assert!((times.last().unwrap() - 0.827).abs() < 1e-3);
    }

    #[test]
    fn columns_are_documented() {
        let doc = documented_columns();
        for c in [Command::Derive, Command::Trace, Command::Manybody] {
            let mut cfg = RunConfig::default();
            cfg.manybody.trace_steps = 2;
            cfg.substeps = 4;
            for h in run_command(c, &cfg).unwrap().header {
                assert!(doc.contains(&h.as_str()), "{h}");
            }
        }
    }
}
