//! Time-reversed dynamics of a Rydberg-dressed 1D chain.
//!
//! Each atom carries levels `0, 1, r0, r1`. Forward evolution dresses
//! `1 ↔ r0` with (Ω, Δ) under the `r0 r0` interaction; a microwave swap moves
//! `r0` to `r1`; backward evolution dresses `1 ↔ r1` with (ϰΩ, ϰΔ) under the
//! `r1 r1` interaction, where ϰ = C6(r1 r1)/C6(r0 r0) < 0. The backward
//! generator is then `−|ϰ|` times the relabelled forward one, so evolving for
//! `t0/|ϰ|` undoes the forward evolution.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hilbert::{
    build_product_basis, embed_operator, overlap_fidelity, HermitianOperator, Hermiticity,
    LevelScheme, ProductBasis, Propagator, StateVector, C64,
};
use crate::pulsemodel::{add_interactions, mhz_to_angular, pair_interaction, GeometryState, InteractionSpec};

pub const ATOM_LEVELS: [&str; 4] = ["0", "1", "r0", "r1"];
pub const DEFAULT_MAX_ATOMS: usize = 4;
pub const DEFAULT_TRACE_STEPS: usize = 200;

/// Above this interaction/Ω_μ ratio a finite swap is flagged as not strong.
pub const SWAP_RATIO_WARNING: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub n_atoms: usize,
    pub lattice_constant_um: f64,
    pub max_atoms: usize,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            n_atoms: 4,
            lattice_constant_um: 10.0,
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

impl LatticeConfig {
    pub fn new(n_atoms: usize, lattice_constant_um: f64) -> Result<Self> {
        let cfg = Self {
            n_atoms,
            lattice_constant_um,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::invalid("manybody.n_atoms", "need at least one atom"));
        }
        if self.n_atoms > self.max_atoms {
            return Err(Error::invalid(
                "manybody.n_atoms",
                format!("{} exceeds the cap of {}", self.n_atoms, self.max_atoms),
            ));
        }
        if !(self.lattice_constant_um > 0.0) || !self.lattice_constant_um.is_finite() {
            return Err(Error::invalid("manybody.lattice_constant_um", "must be positive"));
        }
        Ok(())
    }

    pub fn position(&self, k: usize) -> f64 {
        k as f64 * self.lattice_constant_um
    }

    pub fn geometry(&self) -> Result<GeometryState> {
        let mut g = GeometryState::new();
        for j in 0..self.n_atoms {
            for k in j + 1..self.n_atoms {
                g.set(j, k, self.position(k) - self.position(j))?;
            }
        }
        Ok(g)
    }
}

/// Dressing lasers and interaction coefficients. Frequencies are X/2π in MHz,
/// C6 values C6/2π in THz·μm⁶.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DressingParams {
    pub omega_mhz: f64,
    pub delta_mhz: f64,
    pub c6_00: f64,
    pub c6_11: f64,
}

impl Default for DressingParams {
    fn default() -> Self {
        Self {
            omega_mhz: 5.0,
            delta_mhz: 50.0,
            c6_00: 56.2,
            c6_11: -52.6,
        }
    }
}

impl DressingParams {
    pub fn kappa(&self) -> f64 {
        self.c6_11 / self.c6_00
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("manybody.omega_mhz", self.omega_mhz),
            ("manybody.delta_mhz", self.delta_mhz),
            ("manybody.c6_00", self.c6_00),
            ("manybody.c6_11", self.c6_11),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if self.c6_00 == 0.0 || self.c6_11 == 0.0 {
            return Err(Error::invalid("manybody.c6_00", "C6 coefficients must be nonzero"));
        }
        if !(self.kappa() < 0.0) {
            return Err(Error::invalid(
                "manybody.c6_11",
                "C6(r1 r1)/C6(r0 r0) must be negative",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RydbergLevel {
    R0,
    R1,
}

impl RydbergLevel {
    pub fn label(&self) -> &'static str {
        match self {
            RydbergLevel::R0 => "r0",
            RydbergLevel::R1 => "r1",
        }
    }
}

pub fn lattice_basis(lattice: &LatticeConfig) -> Result<Arc<ProductBasis>> {
    lattice.validate()?;
    build_product_basis(
        (0..lattice.n_atoms)
            .map(|k| LevelScheme::new(k, ATOM_LEVELS))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// `Σ_k [Ω/2 (|r⟩⟨1| + h.c.) + Δ|r⟩⟨r|]_k + Σ_{j<k} C6/L_jk⁶ |rr⟩⟨rr|`, with
/// (ϰΩ, ϰΔ, C6(r1 r1)) when dressing `r1`.
pub fn dressing_hamiltonian(
    basis: &Arc<ProductBasis>,
    lattice: &LatticeConfig,
    dressing: &DressingParams,
    level: RydbergLevel,
) -> Result<HermitianOperator> {
    dressing.validate()?;
    let (factor, c6) = match level {
        RydbergLevel::R0 => (1.0, dressing.c6_00),
        RydbergLevel::R1 => (dressing.kappa(), dressing.c6_11),
    };
    let omega = factor * mhz_to_angular(dressing.omega_mhz);
    let delta = factor * mhz_to_angular(dressing.delta_mhz);
    let r = level_slot(level);
    let mut local = DMatrix::<C64>::zeros(4, 4);
    local[(r, 1)] = C64::new(omega / 2.0, 0.0);
    local[(1, r)] = C64::new(omega / 2.0, 0.0);
    local[(r, r)] = C64::new(delta, 0.0);
    let mut h = HermitianOperator::zeros(basis);
    for k in 0..lattice.n_atoms {
        h += &embed_operator(basis, &[k], &local, Hermiticity::Require)?;
    }
    add_interactions(&mut h, &pair_specs(lattice, c6, level)?, &lattice.geometry()?)?;
    Ok(h)
}

fn level_slot(level: RydbergLevel) -> usize {
    match level {
        RydbergLevel::R0 => 2,
        RydbergLevel::R1 => 3,
    }
}

fn pair_specs(lattice: &LatticeConfig, c6: f64, level: RydbergLevel) -> Result<Vec<InteractionSpec>> {
    let l = level.label();
    let mut specs = Vec::new();
    for j in 0..lattice.n_atoms {
        for k in j + 1..lattice.n_atoms {
            specs.push(InteractionSpec::new((j, k), c6, (l, l))?);
        }
    }
    Ok(specs)
}

/// Index permutation exchanging `r0` and `r1` on every atom.
pub fn swap_permutation(basis: &ProductBasis) -> Vec<usize> {
    (0..basis.dim())
        .map(|i| {
            let levels: Vec<usize> = basis
                .levels_of(i)
                .into_iter()
                .map(|l| match l {
                    2 => 3,
                    3 => 2,
                    other => other,
                })
                .collect();
            basis
                .index_of_levels(&levels)
                .expect("permuted levels stay in range")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SwapMode {
    /// Instantaneous relabelling `r0 ↔ r1` with unit phase.
    Ideal,
    /// A π pulse `iΩ_μ |r1⟩⟨r0| + h.c.` on every atom, interactions on.
    Finite { rabi_mhz: f64 },
}

impl SwapMode {
    pub fn duration(&self) -> f64 {
        match *self {
            SwapMode::Ideal => 0.0,
            SwapMode::Finite { rabi_mhz } => PI / mhz_to_angular(rabi_mhz),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SwapOutcome {
    pub state: StateVector,
    /// Largest pair interaction over Ω_μ (0 for the ideal swap).
    pub interaction_ratio: f64,
    pub strong: bool,
}

fn swap_hamiltonian(
    basis: &Arc<ProductBasis>,
    lattice: &LatticeConfig,
    dressing: &DressingParams,
    rabi_mhz: f64,
) -> Result<HermitianOperator> {
    let omega = mhz_to_angular(rabi_mhz);
    let mut local = DMatrix::<C64>::zeros(4, 4);
    local[(3, 2)] = C64::new(0.0, omega / 2.0);
    let mut h = HermitianOperator::zeros(basis);
    for k in 0..lattice.n_atoms {
        h += &embed_operator(basis, &[k], &local, Hermiticity::AddAdjoint)?;
    }
    let geometry = lattice.geometry()?;
    add_interactions(&mut h, &pair_specs(lattice, dressing.c6_00, RydbergLevel::R0)?, &geometry)?;
    add_interactions(&mut h, &pair_specs(lattice, dressing.c6_11, RydbergLevel::R1)?, &geometry)?;
    Ok(h)
}

/// Moves `r0` population to `r1` on every atom.
pub fn microwave_swap(
    state: &StateVector,
    lattice: &LatticeConfig,
    dressing: &DressingParams,
    mode: SwapMode,
) -> Result<SwapOutcome> {
    let basis = state.basis();
    match mode {
        SwapMode::Ideal => {
            let perm = swap_permutation(basis);
            let amps = state.amplitudes();
            let mut out = DVector::zeros(amps.len());
            for (i, &j) in perm.iter().enumerate() {
                out[j] = amps[i];
            }
            Ok(SwapOutcome {
                state: StateVector::from_amplitudes(basis, out)?,
                interaction_ratio: 0.0,
                strong: true,
            })
        }
        SwapMode::Finite { rabi_mhz } => {
            if !(rabi_mhz > 0.0) || !rabi_mhz.is_finite() {
                return Err(Error::invalid("manybody.swap.rabi_mhz", "must be positive"));
            }
            let h = swap_hamiltonian(basis, lattice, dressing, rabi_mhz)?;
            let strongest = if lattice.n_atoms > 1 {
                pair_interaction(dressing.c6_00.abs().max(dressing.c6_11.abs()), lattice.lattice_constant_um)?
            } else {
                0.0
            };
            let ratio = strongest / mhz_to_angular(rabi_mhz);
            Ok(SwapOutcome {
                state: Propagator::new(&h)?.apply(state, mode.duration())?,
                interaction_ratio: ratio,
                strong: ratio <= SWAP_RATIO_WARNING,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoSchedule {
    pub t0: f64,
    pub swap: SwapMode,
    pub backward_duration: f64,
}

impl EchoSchedule {
    /// Matched schedule with backward duration `t0/|ϰ|`.
    pub fn new(t0: f64, kappa: f64, swap: SwapMode) -> Result<Self> {
        if !(t0 > 0.0) || !t0.is_finite() {
            return Err(Error::invalid("manybody.t0_us", "must be positive"));
        }
        if !(kappa < 0.0) || !kappa.is_finite() {
            return Err(Error::invalid("manybody.c6_11", "ϰ must be negative"));
        }
        Ok(Self {
            t0,
            swap,
            backward_duration: t0 / kappa.abs(),
        })
    }

    pub fn with_backward_duration(mut self, duration: f64) -> Result<Self> {
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::invalid("manybody.backward_duration", "must be non-negative"));
        }
        self.backward_duration = duration;
        Ok(self)
    }

    pub fn total_duration(&self) -> f64 {
        self.t0 + self.swap.duration() + self.backward_duration
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    Initial,
    Forward,
    Swap,
    Backward,
}

/// Observables on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub segments: Vec<Segment>,
    pub magnetization: Vec<f64>,
    pub population_one: Vec<f64>,
}

impl ObservableSeries {
    fn push(&mut self, t: f64, segment: Segment, state: &StateVector) {
        self.times.push(t);
        self.segments.push(segment);
        self.magnetization.push(magnetization(state));
        self.population_one.push(population_one(state));
    }
}

#[derive(Debug, Clone)]
pub struct EchoRun {
    pub series: ObservableSeries,
    pub initial: StateVector,
    pub after_forward: StateVector,
    pub final_state: StateVector,
    pub swap_ratio: f64,
    pub swap_strong: bool,
}

impl EchoRun {
    pub fn residual(&self) -> Result<f64> {
        echo_residual(&self.initial, &self.final_state)
    }
}

/// Forward dressing, swap, backward dressing; each segment sampled at
/// `trace_steps` uniform points.
pub fn run_echo(
    lattice: &LatticeConfig,
    dressing: &DressingParams,
    initial: &StateVector,
    schedule: &EchoSchedule,
    trace_steps: usize,
) -> Result<EchoRun> {
    let basis = initial.basis();
    if basis.n_atoms() != lattice.n_atoms {
        return Err(Error::DimensionMismatch {
            expected: lattice.n_atoms,
            got: basis.n_atoms(),
        });
    }
    let steps = trace_steps.max(1);
    let mut series = ObservableSeries {
        times: Vec::new(),
        segments: Vec::new(),
        magnetization: Vec::new(),
        population_one: Vec::new(),
    };
    series.push(0.0, Segment::Initial, initial);

    let forward = Propagator::new(&dressing_hamiltonian(basis, lattice, dressing, RydbergLevel::R0)?)?;
    for k in 1..=steps {
        let t = schedule.t0 * k as f64 / steps as f64;
        series.push(t, Segment::Forward, &forward.apply(initial, t)?);
    }
    let after_forward = forward.apply(initial, schedule.t0)?;

    let t_swap = schedule.swap.duration();
    if let SwapMode::Finite { rabi_mhz } = schedule.swap {
        let h = swap_hamiltonian(basis, lattice, dressing, rabi_mhz)?;
        let prop = Propagator::new(&h)?;
        for k in 1..steps {
            let t = t_swap * k as f64 / steps as f64;
            series.push(schedule.t0 + t, Segment::Swap, &prop.apply(&after_forward, t)?);
        }
    }
    let swapped = microwave_swap(&after_forward, lattice, dressing, schedule.swap)?;
    let start = schedule.t0 + t_swap;
    if t_swap > 0.0 {
        series.push(start, Segment::Swap, &swapped.state);
    }

    let backward = Propagator::new(&dressing_hamiltonian(basis, lattice, dressing, RydbergLevel::R1)?)?;
    if schedule.backward_duration > 0.0 {
        for k in 1..=steps {
            let t = schedule.backward_duration * k as f64 / steps as f64;
            series.push(start + t, Segment::Backward, &backward.apply(&swapped.state, t)?);
        }
    }
    let final_state = backward.apply(&swapped.state, schedule.backward_duration)?;
    Ok(EchoRun {
        series,
        initial: initial.clone(),
        after_forward,
        final_state,
        swap_ratio: swapped.interaction_ratio,
        swap_strong: swapped.strong,
    })
}

fn up_amplitudes(basis: &ProductBasis, atom: usize) -> (usize, usize, usize) {
    let pos = basis.position(atom).expect("atom in basis");
    let zero = basis.level_index(atom, "0").expect("level 0");
    let one = basis.level_index(atom, "1").expect("level 1");
    (basis.stride(pos), zero, one)
}

/// Mean over atoms of ⟨ψ| (|↑⟩⟨↑|_k ⊗ 1) |ψ⟩ with |↑⟩ = (|0⟩ + |1⟩)/√2.
pub fn magnetization(state: &StateVector) -> f64 {
    let basis = state.basis();
    let amps = state.amplitudes();
    let n = basis.n_atoms();
    let mut total = 0.0;
    for scheme in basis.schemes() {
        let atom = scheme.atom_id();
        let pos = basis.position(atom).expect("atom in basis");
        let (stride, zero, one) = up_amplitudes(basis, atom);
        for i in 0..basis.dim() {
            if basis.level_at(i, pos) != zero {
                continue;
            }
            let j = i + (one - zero) * stride;
            total += ((amps[i] + amps[j]) * FRAC_1_SQRT_2).norm_sqr();
        }
    }
    total / n as f64
}

/// Mean over atoms of the population in `|1⟩`.
pub fn population_one(state: &StateVector) -> f64 {
    let basis = state.basis();
    let n = basis.n_atoms();
    basis
        .schemes()
        .iter()
        .map(|s| state.level_population(s.atom_id(), "1").expect("level 1"))
        .sum::<f64>()
        / n as f64
}

/// `1 − |⟨initial|final⟩|²`.
pub fn echo_residual(initial: &StateVector, final_state: &StateVector) -> Result<f64> {
    Ok(1.0 - overlap_fidelity(initial, final_state)?)
}

/// Product of identical single-atom states.
pub fn uniform_product(basis: &Arc<ProductBasis>, local: [C64; 4]) -> Result<StateVector> {
    let v = DVector::from_column_slice(&local);
    StateVector::product(basis, &vec![v; basis.n_atoms()])
}

pub fn all_up(basis: &Arc<ProductBasis>) -> Result<StateVector> {
    let a = C64::new(FRAC_1_SQRT_2, 0.0);
    uniform_product(basis, [a, a, C64::new(0.0, 0.0), C64::new(0.0, 0.0)])
}

pub fn all_one(basis: &Arc<ProductBasis>) -> Result<StateVector> {
    let z = C64::new(0.0, 0.0);
    uniform_product(basis, [z, C64::new(1.0, 0.0), z, z])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Dressing,
    NearResonant,
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dressing" => Ok(Regime::Dressing),
            "near_resonant" | "near-resonant" => Ok(Regime::NearResonant),
            other => Err(Error::invalid(
                "regime",
                format!("expected dressing or near_resonant, got {other:?}"),
            )),
        }
    }
}

/// One of the two four-atom demonstrations.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimePreset {
    pub lattice: LatticeConfig,
    pub dressing: DressingParams,
    pub t0: f64,
}

impl Regime {
    pub fn preset(&self) -> RegimePreset {
        match self {
            // 10Ω = Δ = 2π·50 MHz, t0 = 4π/Ω
            Regime::Dressing => RegimePreset {
                lattice: LatticeConfig::default(),
                dressing: DressingParams::default(),
                t0: 0.4,
            },
            // Ω/2 = Δ = 2π·2.5 MHz
            Regime::NearResonant => RegimePreset {
                lattice: LatticeConfig {
                    lattice_constant_um: 16.0,
                    ..LatticeConfig::default()
                },
                dressing: DressingParams {
                    omega_mhz: 5.0,
                    delta_mhz: 2.5,
                    ..DressingParams::default()
                },
                t0: 0.4,
            },
        }
    }

    pub fn initial_state(&self, basis: &Arc<ProductBasis>) -> Result<StateVector> {
        match self {
            Regime::Dressing => all_up(basis),
            Regime::NearResonant => all_one(basis),
        }
    }
}
