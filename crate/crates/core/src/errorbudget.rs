//! Gate error budget: Rydberg decay from dwell times, rotation error from
//! thermal spacing spread and axial drift, and Doppler dephasing.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::echogate::{
    build_sequence, derive_frequencies, DerivedFrequencies, GateParams, GateSequence, Protocol,
    StagedSpacing, COMPUTATIONAL,
};
use crate::error::{Error, Result};
use crate::pulsemodel::Trajectory;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Mass of ⁸⁷Rb, kg.
pub const RB87_MASS: f64 = 86.909_180_527 * AMU;

/// Default Rydberg lifetime, μs.
pub const DEFAULT_LIFETIME_US: f64 = 1200.0;

pub const RYDBERG_LABELS: [&str; 3] = ["rc", "r0", "r1"];

/// Truncation of the spacing distribution, in standard deviations.
pub const TRUNCATION_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayModel {
    /// Rydberg label → lifetime in μs.
    pub lifetimes_us: BTreeMap<String, f64>,
}

impl Default for DecayModel {
    fn default() -> Self {
        Self::uniform(DEFAULT_LIFETIME_US)
    }
}

impl DecayModel {
    pub fn uniform(tau_us: f64) -> Self {
        Self {
            lifetimes_us: RYDBERG_LABELS
                .iter()
                .map(|l| (l.to_string(), tau_us))
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (label, &tau) in &self.lifetimes_us {
            if !(tau > 0.0) || !tau.is_finite() {
                return Err(Error::invalid(
                    format!("decay.lifetimes_us.{label}"),
                    "must be positive",
                ));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            lifetimes_us: self
                .lifetimes_us
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }
}

/// Harmonic dipole-trap model of the thermal atom positions.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThermalModel {
    /// Trap depth as a temperature, K.
    pub trap_depth_k: f64,
    pub waist_um: f64,
    pub mass_kg: f64,
}

impl Default for ThermalModel {
    fn default() -> Self {
        Self {
            trap_depth_k: 20e-3,
            waist_um: 1.0,
            mass_kg: RB87_MASS,
        }
    }
}

/// Spread and speed used for one temperature point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Motion {
    /// Standard deviation of the pair spacing, μm.
    pub sigma_l: f64,
    /// r.m.s. axial speed, μm/μs.
    pub v_z: f64,
}

impl Motion {
    pub const FROZEN: Motion = Motion {
        sigma_l: 0.0,
        v_z: 0.0,
    };
}

impl ThermalModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("thermal.trap_depth_k", self.trap_depth_k),
            ("thermal.waist_um", self.waist_um),
            ("thermal.mass_kg", self.mass_kg),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(name, "must be positive"));
            }
        }
        Ok(())
    }

    /// Per-atom axial position spread, μm.
    pub fn sigma_axis(&self, ta: f64) -> f64 {
        0.5 * self.waist_um * (ta / self.trap_depth_k).sqrt()
    }

    /// Spread of the difference of two independent positions, μm.
    pub fn sigma_spacing(&self, ta: f64) -> f64 {
        std::f64::consts::SQRT_2 * self.sigma_axis(ta)
    }

    /// `√(k_B Ta / m)` in μm/μs (numerically equal to m/s).
    pub fn v_z(&self, ta: f64) -> f64 {
        (K_B * ta / self.mass_kg).sqrt()
    }

    pub fn motion(&self, ta: f64) -> Result<Motion> {
        check_temperature(ta)?;
        Ok(Motion {
            sigma_l: self.sigma_spacing(ta),
            v_z: self.v_z(ta),
        })
    }

    /// The harmonic approximation is trusted up to a tenth of the trap depth.
    pub fn harmonic_ok(&self, ta: f64) -> bool {
        ta <= self.trap_depth_k / 10.0
    }
}

fn check_temperature(ta: f64) -> Result<()> {
    if !(ta >= 0.0) || !ta.is_finite() {
        return Err(Error::invalid(
            "ta",
            format!("temperature must be finite and non-negative, got {ta}"),
        ));
    }
    Ok(())
}

/// Worst-case axial drift toward (β = −1) or away from (β = +1) each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftScenario {
    pub beta: f64,
    /// Time of the wait midpoint measured from the start of pulse-2, μs.
    pub t_t: f64,
    /// Time of the pulse-4 midpoint, μs.
    pub t_p4: f64,
}

impl DriftScenario {
    pub fn new(beta: f64, d: &DerivedFrequencies, t_gap: f64) -> Self {
        let t_t = PI * (0.5 / d.omega_t2 + 1.0 / d.omega_t3 + d.t_wait / (2.0 * PI)) + t_gap;
        let t_p4 = t_t + PI / (2.0 * d.omega_t4) + d.t_wait / 2.0;
        Self { beta, t_t, t_p4 }
    }

    /// Stage spacings for an initial spacing `l` and speed `v_z`.
    pub fn staged(&self, l: f64, v_z: f64) -> StagedSpacing {
        StagedSpacing {
            pre_drift: l,
            wait: l + 2.0 * self.beta * v_z * self.t_t,
            pulse4: l + 2.0 * self.beta * v_z * self.t_p4,
        }
    }
}

/// How the spacing distribution is averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Sampling {
    MonteCarlo { samples: usize, seed: u64 },
    GaussHermite { nodes: usize },
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling::MonteCarlo {
            samples: 2000,
            seed: 0,
        }
    }
}

/// Standard-normal abscissae with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalQuadrature {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl NormalQuadrature {
    pub fn new(sampling: &Sampling) -> Result<Self> {
        match *sampling {
            Sampling::MonteCarlo { samples, seed } => {
                if samples == 0 {
                    return Err(Error::invalid("samples", "must be at least 1"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut points = Vec::with_capacity(samples);
                while points.len() < samples {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    if z.abs() <= TRUNCATION_SIGMAS {
                        points.push(z);
                    }
                }
                Ok(Self {
                    weights: vec![1.0 / samples as f64; samples],
                    points,
                })
            }
            Sampling::GaussHermite { nodes } => gauss_hermite_normal(nodes),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Golub–Welsch nodes for ∫ f(z) φ(z) dz with φ the standard normal density.
pub fn gauss_hermite_normal(n: usize) -> Result<NormalQuadrature> {
    if n == 0 {
        return Err(Error::invalid("nodes", "must be at least 1"));
    }
    // physicists' Hermite: off-diagonal √(k/2)
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let (values, vectors) = crate::hilbert::symmetric_eigen(&jacobi)?;
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = vectors[(0, k)];
            (std::f64::consts::SQRT_2 * values[k], v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    Ok(NormalQuadrature {
        points: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    })
}

/// Time-integrated Rydberg population per label, averaged over the inputs.
pub type Dwell = BTreeMap<String, f64>;

/// Mean over `trajectories` of ∫ P_α dt for every Rydberg label α present.
pub fn rydberg_dwell(trajectories: &[Trajectory]) -> Result<Dwell> {
    if trajectories.is_empty() {
        return Err(Error::MissingTrace("no trajectories".into()));
    }
    let mut dwell = Dwell::new();
    for tr in trajectories {
        if tr.len() < 2 {
            return Err(Error::MissingTrace("trajectory has no substeps".into()));
        }
        for scheme in tr.basis.schemes() {
            for label in scheme.levels() {
                if !RYDBERG_LABELS.contains(&label.as_str()) {
                    continue;
                }
                let series = tr.level_population_series(scheme.atom_id(), label)?;
                *dwell.entry(label.clone()).or_insert(0.0) += tr.integrate_all(&series);
            }
        }
    }
    let n = trajectories.len() as f64;
    dwell.values_mut().for_each(|v| *v /= n);
    Ok(dwell)
}

/// Traces the four computational inputs and returns their mean dwell.
pub fn gate_dwell(gate: &GateSequence, substeps: usize) -> Result<Dwell> {
    let trajectories = (0..COMPUTATIONAL.len())
        .map(|k| {
            gate.run_input(k, Some(substeps))?
                .trajectory
                .ok_or_else(|| Error::MissingTrace("run did not record a trajectory".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    rydberg_dwell(&trajectories)
}

/// `Σ_α T_α / τ_α`.
pub fn decay_error(dwell: &Dwell, decay: &DecayModel) -> Result<f64> {
    decay.validate()?;
    let mut total = 0.0;
    for (label, &t) in dwell {
        if t == 0.0 {
            continue;
        }
        let tau = decay
            .lifetimes_us
            .get(label)
            .ok_or_else(|| Error::MissingLifetime(label.clone()))?;
        total += t / tau;
    }
    Ok(total)
}

/// Excitation scheme that sets the Doppler wavevector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DopplerMode {
    /// Counterpropagating 480 nm + 780 nm.
    #[default]
    TwoPhoton,
    /// Single 297 nm photon.
    SinglePhotonUv,
}

impl DopplerMode {
    /// Effective wavevector, rad/μm.
    pub fn k_eff(&self) -> f64 {
        match self {
            DopplerMode::TwoPhoton => 2.0 * PI * (1.0 / 0.480 - 1.0 / 0.780),
            DopplerMode::SinglePhotonUv => 2.0 * PI / 0.297,
        }
    }
}

/// `[1 − exp(−k_B Ta (k t)² / 2m)] / 2` with k in rad/μm and t in μs.
pub fn doppler_error(ta: f64, k_eff: f64, t: f64, mass_kg: f64) -> f64 {
    if ta <= 0.0 {
        return 0.0;
    }
    let v2 = K_B * ta / mass_kg; // μm²/μs²
    let kt = k_eff * t;
    -0.5 * (-v2 * kt * kt / 2.0).exp_m1()
}

/// Settings shared by every temperature point of a budget.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetSetup {
    pub params: GateParams,
    pub protocol: Protocol,
    pub thermal: ThermalModel,
    pub decay: DecayModel,
    pub sampling: Sampling,
    pub doppler: DopplerMode,
    /// Substeps per stage for the dwell integrals.
    pub substeps: usize,
}

impl Default for BudgetSetup {
    fn default() -> Self {
        Self {
            params: GateParams::default(),
            protocol: Protocol::SpinEcho,
            thermal: ThermalModel::default(),
            decay: DecayModel::default(),
            sampling: Sampling::default(),
            doppler: DopplerMode::default(),
            substeps: crate::pulsemodel::DEFAULT_SUBSTEPS,
        }
    }
}

/// The β = ±1 pair evaluated for every sample.
pub const BETAS: [f64; 2] = [1.0, -1.0];

/// Precomputed gate and quadrature for repeated rotation-error evaluations.
#[derive(Debug, Clone)]
pub struct RotationModel {
    pub protocol: Protocol,
    pub spacing: f64,
    pub gate: GateSequence,
    pub derived: DerivedFrequencies,
    pub drift: [DriftScenario; 2],
    pub quadrature: NormalQuadrature,
}

impl RotationModel {
    pub fn new(params: &GateParams, protocol: Protocol, sampling: &Sampling) -> Result<Self> {
        Self::with_betas(params, protocol, sampling, BETAS)
    }

    pub fn with_betas(
        params: &GateParams,
        protocol: Protocol,
        sampling: &Sampling,
        betas: [f64; 2],
    ) -> Result<Self> {
        let derived = derive_frequencies(params)?;
        let gate = build_sequence(protocol, params, &derived)?;
        Ok(Self {
            protocol,
            spacing: params.spacing_um,
            drift: betas.map(|b| DriftScenario::new(b, &derived, params.t_gap_us)),
            gate,
            derived,
            quadrature: NormalQuadrature::new(sampling)?,
        })
    }

    fn schedule(&self, l: f64, v_z: f64, drift: &DriftScenario) -> StagedSpacing {
        match self.protocol {
            Protocol::SpinEcho => drift.staged(l, v_z),
            Protocol::Traditional => StagedSpacing::frozen(l),
        }
    }

    /// `Σ_β (1 − |⟨00|U_ideal† U|00⟩|²)/8 ` at spacing `l`.
    pub fn at_spacing(&self, l: f64, v_z: f64) -> Result<f64> {
        let mut sum = 0.0;
        for drift in &self.drift {
            let staged = self.gate.with_spacing(&self.schedule(l, v_z, drift))?;
            sum += staged.channel_00_error()? / 8.0;
        }
        Ok(sum)
    }

    /// Average of [`Self::at_spacing`] over the spacing distribution.
    pub fn rotation_error(&self, motion: Motion) -> Result<f64> {
        if !(motion.sigma_l >= 0.0) || !(motion.v_z >= 0.0) {
            return Err(Error::invalid("motion", "spread and speed must be non-negative"));
        }
        if motion.sigma_l == 0.0 {
            return self.at_spacing(self.spacing, motion.v_z);
        }
        let q = &self.quadrature;
        let values = q
            .points
            .par_iter()
            .map(|&z| self.at_spacing(self.spacing + motion.sigma_l * z, motion.v_z))
            .collect::<Result<Vec<f64>>>()?;
        Ok(values.iter().zip(&q.weights).map(|(v, w)| v * w).sum())
    }
}

/// One temperature point of the budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub ta_k: f64,
    pub e_de: f64,
    pub e_ro: f64,
    pub e_do: f64,
    /// `e_de + e_ro`; Doppler is kept separate.
    pub total: f64,
    pub dwell: Dwell,
    pub sigma_l: f64,
    pub v_z: f64,
    pub harmonic_ok: bool,
}

/// Rotation error at one temperature.
pub fn rotation_error(
    params: &GateParams,
    protocol: Protocol,
    ta: f64,
    thermal: &ThermalModel,
    sampling: &Sampling,
) -> Result<f64> {
    thermal.validate()?;
    let motion = thermal.motion(ta)?;
    RotationModel::new(params, protocol, sampling)?.rotation_error(motion)
}

/// One [`ErrorReport`] per temperature in `grid` (kelvin).
pub fn sweep_temperature(setup: &BudgetSetup, grid: &[f64]) -> Result<Vec<ErrorReport>> {
    if grid.is_empty() {
        return Err(Error::invalid("sweep.ta_grid", "must not be empty"));
    }
    for &ta in grid {
        check_temperature(ta)?;
    }
    setup.thermal.validate()?;
    setup.decay.validate()?;
    if setup.substeps < 2 {
        return Err(Error::invalid("substeps", "need at least 2 per stage"));
    }
    let model = RotationModel::new(&setup.params, setup.protocol, &setup.sampling)?;
    let dwell = gate_dwell(&model.gate, setup.substeps)?;
    let e_de = decay_error(&dwell, &setup.decay)?;
    let t_ryd = model
        .derived
        .middle_duration(setup.protocol, setup.params.t_gap_us);
    grid.iter()
        .map(|&ta| {
            let motion = setup.thermal.motion(ta)?;
            let e_ro = model.rotation_error(motion)?;
            Ok(ErrorReport {
                ta_k: ta,
                e_de,
                e_ro,
                e_do: doppler_error(ta, setup.doppler.k_eff(), t_ryd, setup.thermal.mass_kg),
                total: e_de + e_ro,
                dwell: dwell.clone(),
                sigma_l: motion.sigma_l,
                v_z: motion.v_z,
                harmonic_ok: setup.thermal.harmonic_ok(ta),
            })
        })
        .collect()
}

/// Largest grid temperature whose total error stays at or below `bound`.
pub fn crossover_temperature(reports: &[ErrorReport], bound: f64) -> Option<f64> {
    reports
        .iter()
        .filter(|r| r.total <= bound)
        .map(|r| r.ta_k)
        .max_by(f64::total_cmp)
}
