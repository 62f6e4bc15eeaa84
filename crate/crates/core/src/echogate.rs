//! The five-pulse spin-echo controlled-phase gate, the traditional
//! π–2π–π blockade gate, and closed-form blockade analytics.
//!
//! Two atoms: the control (id [`CONTROL`], levels `0, 1, rc`) and the target
//! (id [`TARGET`], levels `0, 1, r0, r1`). Pulse order of the echo gate:
//!
//! | stage     | atom    | transition | Rabi                        |
//! |-----------|---------|------------|-----------------------------|
//! | `pulse-1` | control | 0 ↔ rc     | Ω_c                         |
//! | `pulse-2` | target  | 0 ↔ r0     | Ω_t2 e^{iφ₂}                |
//! | `gap`     | n/a     | n/a        | optional, T_gap             |
//! | `pulse-3` | target  | r0 ↔ r1    | Ω_t3 e^{iφ₃}                |
//! | `wait`    | n/a     | n/a        | T = φ/V₁                    |
//! | `pulse-4` | target  | 0 ↔ r1     | iΩ_t4 e^{iφ′}               |
//! | `pulse-5` | control | 0 ↔ rc     | Ω_c                         |
//!
//! Pair shifts are `+V₀` on `|rc r0⟩` and `−V₁` on `|rc r1⟩`; the minus sign
//! comes from the negative C6 of the `rc r1` pair.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector2};

use crate::error::{Error, Result};
use crate::hilbert::{build_product_basis, LevelScheme, ProductBasis, StateVector, C64};
use crate::pulsemodel::{
    mhz_to_angular, pair_interaction, run_sequence, GeometryState, InteractionSpec, PulseSpec,
    Sequence, SequenceRun, Stage, WaitSpec,
};

pub const CONTROL: usize = 0;
pub const TARGET: usize = 1;

pub const CONTROL_LEVELS: [&str; 3] = ["0", "1", "rc"];
pub const TARGET_LEVELS: [&str; 4] = ["0", "1", "r0", "r1"];

/// Computational inputs in matrix order `|00⟩, |01⟩, |10⟩, |11⟩` (control first).
pub const COMPUTATIONAL: [[&str; 2]; 4] = [["0", "0"], ["0", "1"], ["1", "0"], ["1", "1"]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    SpinEcho,
    Traditional,
}

impl Protocol {
    pub fn as_str(&self) -> &'static str {
        match self {
            Protocol::SpinEcho => "spin_echo",
            Protocol::Traditional => "traditional",
        }
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spin_echo" | "spin-echo" | "echo" => Ok(Protocol::SpinEcho),
            "traditional" => Ok(Protocol::Traditional),
            other => Err(Error::invalid(
                "protocol",
                format!("expected spin_echo or traditional, got {other:?}"),
            )),
        }
    }
}

/// Gate inputs. C6 values are C6/2π in THz·μm⁶, frequencies X/2π in MHz,
/// phases in rad and times in μs.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GateParams {
    pub c6_rc_r0: f64,
    pub c6_rc_r1: f64,
    pub spacing_um: f64,
    pub eta: f64,
    /// Ω_t3 = eta3·V₊; defaults to `eta` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta3: Option<f64>,
    pub omega_c_mhz: f64,
    pub phi: f64,
    pub t_gap_us: f64,
    pub phi2: f64,
    pub phi3: f64,
    /// Selects T = (φ + 2π·n)/V₁.
    pub wait_branch: u32,
}

impl Default for GateParams {
    fn default() -> Self {
        Self {
            c6_rc_r0: 56.2,
            c6_rc_r1: -25.6,
            spacing_um: 8.0,
            eta: 18.0,
            eta3: None,
            omega_c_mhz: 10.0,
            phi: PI,
            t_gap_us: 0.0,
            phi2: 0.0,
            phi3: 0.0,
            wait_branch: 0,
        }
    }
}

impl GateParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("c6_rc_r0", self.c6_rc_r0),
            ("c6_rc_r1", self.c6_rc_r1),
            ("spacing_um", self.spacing_um),
            ("eta", self.eta),
            ("omega_c_mhz", self.omega_c_mhz),
            ("phi", self.phi),
            ("t_gap_us", self.t_gap_us),
            ("phi2", self.phi2),
            ("phi3", self.phi3),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if !(self.c6_rc_r0 > 0.0) {
            return Err(Error::invalid("c6_rc_r0", "must be positive"));
        }
        if !(self.c6_rc_r1 < 0.0) {
            return Err(Error::invalid(
                "c6_rc_r1",
                "must be negative (the two pair shifts need opposite signs)",
            ));
        }
        if !(self.spacing_um > 0.0) {
            return Err(Error::invalid("spacing_um", "must be positive"));
        }
        if !(self.eta > 1.0) {
            return Err(Error::invalid("eta", format!("must exceed 1, got {}", self.eta)));
        }
        if let Some(e3) = self.eta3 {
            if !(e3 > 0.0) || !e3.is_finite() {
                return Err(Error::invalid("eta3", "must be positive"));
            }
        }
        if !(self.omega_c_mhz > 0.0) {
            return Err(Error::invalid("omega_c_mhz", "must be positive"));
        }
        if !(self.t_gap_us >= 0.0) {
            return Err(Error::invalid("t_gap_us", "must be non-negative"));
        }
        Ok(())
    }

    /// Copy with both C6 coefficients multiplied by `s`.
    pub fn with_scaled_c6(&self, s: f64) -> Self {
        Self {
            c6_rc_r0: self.c6_rc_r0 * s,
            c6_rc_r1: self.c6_rc_r1 * s,
            ..self.clone()
        }
    }
}

/// Closed-form frequencies (rad/μs) and durations (μs) for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedFrequencies {
    pub v0: f64,
    pub v1: f64,
    pub v_plus: f64,
    pub omega_c: f64,
    pub omega_t2: f64,
    pub omega_t3: f64,
    pub omega_t4: f64,
    /// C6(rc r1)/C6(rc r0), negative.
    pub kappa: f64,
    pub t_wait: f64,
    /// π-pulse durations t₁..t₅.
    pub durations: [f64; 5],
    /// Ω_t2/min(V₀, V₁); blockade needs this ≪ 1.
    pub blockade_ratio_t2: f64,
    /// V₊/Ω_t3; pulse-3 needs this ≪ 1.
    pub blockade_ratio_t3: f64,
}

impl DerivedFrequencies {
    /// Recomputes the wait so that `v1 · T` hits the requested phase branch.
    pub fn with_wait_for(&self, v1: f64, phi: f64, branch: u32) -> Result<Self> {
        Ok(Self {
            t_wait: wait_duration(phi, v1, branch)?,
            ..self.clone()
        })
    }

    /// Duration of the blockade-sensitive middle segment (pulses 2–4 or the 2π pulse).
    pub fn middle_duration(&self, protocol: Protocol, t_gap: f64) -> f64 {
        match protocol {
            Protocol::SpinEcho => {
                self.durations[1] + t_gap + self.durations[2] + self.t_wait + self.durations[3]
            }
            Protocol::Traditional => 2.0 * self.durations[1],
        }
    }
}

/// Smallest positive T with `v1·T ≡ φ (mod 2π)`, shifted by `branch` periods.
fn wait_duration(phi: f64, v1: f64, branch: u32) -> Result<f64> {
    if !(v1 > 0.0) || !phi.is_finite() {
        return Err(Error::invalid(
            "phi",
            format!("φ/V₁ must be positive (φ = {phi}, V₁ = {v1})"),
        ));
    }
    let mut reduced = phi.rem_euclid(2.0 * PI);
    if reduced == 0.0 {
        reduced = 2.0 * PI;
    }
    let t = (reduced + 2.0 * PI * branch as f64) / v1;
    if !(t > 0.0) {
        return Err(Error::invalid("phi", "wait duration must be positive"));
    }
    Ok(t)
}

pub fn derive_frequencies(p: &GateParams) -> Result<DerivedFrequencies> {
    p.validate()?;
    let v0 = pair_interaction(p.c6_rc_r0, p.spacing_um)?;
    let v1 = -pair_interaction(p.c6_rc_r1, p.spacing_um)?;
    let v_plus = v0 + v1;
    let kappa = p.c6_rc_r1 / p.c6_rc_r0;
    let omega_c = mhz_to_angular(p.omega_c_mhz);
    let omega_t2 = v_plus / p.eta;
    let omega_t3 = v_plus * p.eta3.unwrap_or(p.eta);
    let omega_t4 = kappa.abs() * v_plus / p.eta;
    let t_wait = wait_duration(p.phi, v1, p.wait_branch)?;
    let durations = [
        PI / omega_c,
        PI / omega_t2,
        PI / omega_t3,
        PI / omega_t4,
        PI / omega_c,
    ];
    Ok(DerivedFrequencies {
        v0,
        v1,
        v_plus,
        omega_c,
        omega_t2,
        omega_t3,
        omega_t4,
        kappa,
        t_wait,
        durations,
        blockade_ratio_t2: omega_t2 / v0.min(v1),
        blockade_ratio_t3: v_plus / omega_t3,
    })
}

/// Closed-form pulse-2 eigensystem and leakage estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticBlockade {
    pub omega_bar_t2: f64,
    pub omega_bar_t3: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    /// `|v±⟩` in the basis `{|rc 0⟩, |rc r0⟩}`.
    pub v_plus: Vector2<C64>,
    pub v_minus: Vector2<C64>,
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    /// Population left in `|rc r0⟩` after pulse-2.
    pub eps1: f64,
    /// Failure probability of pulse-3.
    pub eps2: f64,
    /// `−i|rc 0⟩ = i(sin α |v+⟩ + cos α |v−⟩)`.
    pub alpha: f64,
}

pub fn analytic_blockade(d: &DerivedFrequencies) -> AnalyticBlockade {
    let o2 = d.omega_t2;
    let omega_bar_t2 = o2.hypot(d.v0);
    let eps_plus = (d.v0 + omega_bar_t2) / 2.0;
    let eps_minus = (d.v0 - omega_bar_t2) / 2.0;
    let norm = |e: f64| (o2 * o2 / 4.0 + e * e).sqrt();
    let norm_plus = norm(eps_plus);
    let norm_minus = norm(eps_minus);
    let vec = |e: f64, n: f64| Vector2::new(C64::new(o2 / 2.0 / n, 0.0), C64::new(e / n, 0.0));
    let kappa2 = o2 / omega_bar_t2;
    let omega_bar_t3 = d.omega_t3.hypot(d.v_plus);
    let kappa3 = d.omega_t3 / omega_bar_t3;
    let sin_alpha = -o2 / (2.0 * norm_plus);
    let cos_alpha = -o2 / (2.0 * norm_minus);
    AnalyticBlockade {
        omega_bar_t2,
        omega_bar_t3,
        eps_plus,
        eps_minus,
        v_plus: vec(eps_plus, norm_plus),
        v_minus: vec(eps_minus, norm_minus),
        norm_plus,
        norm_minus,
        kappa2,
        kappa3,
        eps1: kappa2 * kappa2 * (PI / (2.0 * kappa2)).sin().powi(2),
        eps2: 1.0 - kappa3 * kappa3 * (PI / (2.0 * kappa3)).sin().powi(2),
        alpha: sin_alpha.atan2(cos_alpha),
    }
}

impl AnalyticBlockade {
    /// Closed-form `{|rc 0⟩, |rc r0⟩}` amplitudes at the end of pulse-2,
    /// starting from `−i|rc 0⟩` with a real Rabi frequency.
    pub fn state_after_pulse2(&self, omega_t2: f64) -> Vector2<C64> {
        let i = C64::new(0.0, 1.0);
        let ph = |e: f64| C64::from_polar(1.0, -PI * e / omega_t2);
        self.v_plus * (i * ph(self.eps_plus) * self.alpha.sin())
            + self.v_minus * (i * ph(self.eps_minus) * self.alpha.cos())
    }
}

/// Pulse-2 block `[[0, Ω/2], [Ω/2, V₀]]` on `{|rc 0⟩, |rc r0⟩}`.
pub fn pulse2_block(d: &DerivedFrequencies) -> Matrix2<C64> {
    let h = C64::new(d.omega_t2 / 2.0, 0.0);
    Matrix2::new(C64::new(0.0, 0.0), h, h, C64::new(d.v0, 0.0))
}

/// Pulse-4 block on `{|rc 0⟩, |rc r1⟩}` with laser phase `phase`.
pub fn pulse4_block(d: &DerivedFrequencies, phase: f64) -> Matrix2<C64> {
    let rabi = C64::new(0.0, 1.0) * C64::from_polar(d.omega_t4, phase);
    Matrix2::new(
        C64::new(0.0, 0.0),
        rabi.conj() / 2.0,
        rabi / 2.0,
        C64::new(-d.v1, 0.0),
    )
}

/// Reduces an angle to (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// Pulse-4 laser phase φ′ = φ + φ₂ + φ₃ − V₀·T_gap, reduced to (−π, π].
pub fn pulse4_phase(phi: f64, phi2: f64, phi3: f64, v0: f64, t_gap: f64) -> f64 {
    wrap_phase(phi + phi2 + phi3 - v0 * t_gap)
}

/// Piecewise spacings for the gate; `pre_drift` covers pulses 1–3 (and the
/// gap), `wait` the wait, `pulse4` pulses 4–5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StagedSpacing {
    pub pre_drift: f64,
    pub wait: f64,
    pub pulse4: f64,
}

impl StagedSpacing {
    pub fn frozen(spacing: f64) -> Self {
        Self {
            pre_drift: spacing,
            wait: spacing,
            pulse4: spacing,
        }
    }

    pub fn for_stage(&self, name: &str) -> f64 {
        match name {
            "wait" => self.wait,
            "pulse-4" | "pulse-5" => self.pulse4,
            _ => self.pre_drift,
        }
    }

    pub fn geometry_for(&self, name: &str) -> Result<GeometryState> {
        GeometryState::pair(CONTROL, TARGET, self.for_stage(name))
    }
}

/// A gate pulse sequence plus the conditional phase it should imprint on `|10⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequence {
    pub protocol: Protocol,
    pub sequence: Sequence,
    pub target_phase: f64,
}

pub fn gate_basis() -> Arc<ProductBasis> {
    build_product_basis(vec![
        LevelScheme::new(CONTROL, CONTROL_LEVELS).expect("static levels"),
        LevelScheme::new(TARGET, TARGET_LEVELS).expect("static levels"),
    ])
    .expect("static basis")
}

fn gate_interactions(p: &GateParams) -> Result<Vec<InteractionSpec>> {
    Ok(vec![
        InteractionSpec::new((CONTROL, TARGET), p.c6_rc_r0, ("rc", "r0"))?,
        InteractionSpec::new((CONTROL, TARGET), p.c6_rc_r1, ("rc", "r1"))?,
    ])
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn build_spin_echo_sequence(p: &GateParams, d: &DerivedFrequencies) -> Result<GateSequence> {
    p.validate()?;
    let geo = |name: &str| StagedSpacing::frozen(p.spacing_um).geometry_for(name);
    let phi4 = pulse4_phase(p.phi, p.phi2, p.phi3, d.v0, p.t_gap_us);
    let [t1, t2, t3, t4, t5] = d.durations;
    let mut seq = Sequence::new(gate_interactions(p)?);
    seq.push(Stage::pulse(
        "pulse-1",
        PulseSpec::new(CONTROL, "0", "rc", real(d.omega_c), t1)?,
        geo("pulse-1")?,
    ));
    seq.push(Stage::pulse(
        "pulse-2",
        PulseSpec::new(TARGET, "0", "r0", C64::from_polar(d.omega_t2, p.phi2), t2)?,
        geo("pulse-2")?,
    ));
    if p.t_gap_us > 0.0 {
        seq.push(Stage::wait("gap", WaitSpec::new(p.t_gap_us)?, geo("gap")?));
    }
    seq.push(Stage::pulse(
        "pulse-3",
        PulseSpec::new(TARGET, "r0", "r1", C64::from_polar(d.omega_t3, p.phi3), t3)?,
        geo("pulse-3")?,
    ));
    seq.push(Stage::wait("wait", WaitSpec::new(d.t_wait)?, geo("wait")?));
    seq.push(Stage::pulse(
        "pulse-4",
        PulseSpec::new(
            TARGET,
            "0",
            "r1",
            C64::new(0.0, 1.0) * C64::from_polar(d.omega_t4, phi4),
            t4,
        )?,
        geo("pulse-4")?,
    ));
    seq.push(Stage::pulse(
        "pulse-5",
        PulseSpec::new(CONTROL, "0", "rc", real(d.omega_c), t5)?,
        geo("pulse-5")?,
    ));
    Ok(GateSequence {
        protocol: Protocol::SpinEcho,
        sequence: seq,
        target_phase: wrap_phase(phi4 - p.phi2 - p.phi3),
    })
}

/// Pulses 1 and 5 with a single 2π pulse of duration 2π/Ω_t2 on the target in between.
pub fn build_traditional_sequence(p: &GateParams, d: &DerivedFrequencies) -> Result<GateSequence> {
    p.validate()?;
    let geo = |name: &str| StagedSpacing::frozen(p.spacing_um).geometry_for(name);
    let mut seq = Sequence::new(gate_interactions(p)?);
    seq.push(Stage::pulse(
        "pulse-1",
        PulseSpec::new(CONTROL, "0", "rc", real(d.omega_c), d.durations[0])?,
        geo("pulse-1")?,
    ));
    seq.push(Stage::pulse(
        "pulse-2pi",
        PulseSpec::new(TARGET, "0", "r0", real(d.omega_t2), 2.0 * PI / d.omega_t2)?,
        geo("pulse-2pi")?,
    ));
    seq.push(Stage::pulse(
        "pulse-5",
        PulseSpec::new(CONTROL, "0", "rc", real(d.omega_c), d.durations[4])?,
        geo("pulse-5")?,
    ));
    Ok(GateSequence {
        protocol: Protocol::Traditional,
        sequence: seq,
        target_phase: PI,
    })
}

pub fn build_sequence(
    protocol: Protocol,
    p: &GateParams,
    d: &DerivedFrequencies,
) -> Result<GateSequence> {
    match protocol {
        Protocol::SpinEcho => build_spin_echo_sequence(p, d),
        Protocol::Traditional => build_traditional_sequence(p, d),
    }
}

impl GateSequence {
    pub fn with_spacing(&self, schedule: &StagedSpacing) -> Result<GateSequence> {
        // validated up front so the closure below cannot fail
        for s in [schedule.pre_drift, schedule.wait, schedule.pulse4] {
            GeometryState::pair(CONTROL, TARGET, s)?;
        }
        let sequence = self.sequence.regeometrized(|stage| {
            schedule
                .geometry_for(&stage.name)
                .expect("spacing validated above")
        });
        Ok(GateSequence {
            sequence,
            ..self.clone()
        })
    }

    /// Runs one computational input through the sequence.
    pub fn run_input(&self, input: usize, substeps: Option<usize>) -> Result<SequenceRun> {
        let basis = gate_basis();
        let psi = StateVector::basis_state(&basis, &COMPUTATIONAL[input])?;
        run_sequence(&self.sequence, &psi, substeps)
    }

    /// `1 − |⟨00|U_ideal† U|00⟩|²`, i.e. the population missing from `|00⟩`.
    pub fn channel_00_error(&self) -> Result<f64> {
        let run = self.run_input(0, None)?;
        Ok(1.0 - run.final_state.population(&COMPUTATIONAL[0])?)
    }
}

/// A 4×4 matrix on `{|00⟩, |01⟩, |10⟩, |11⟩}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    pub matrix: Matrix4<C64>,
    /// `|⟨00|U_ideal† U|00⟩|²`.
    pub fidelity: f64,
    /// `‖U − U_ideal‖_F`.
    pub frobenius_distance: f64,
    /// `1 − |⟨in|U_ideal† U|in⟩|²` for each computational input.
    pub channel_errors: [f64; 4],
    /// Population that left the computational subspace, per input.
    pub leakage: [f64; 4],
    /// Worst `| ||psi|| − 1 |` across all stages and inputs.
    pub max_norm_drift: f64,
}

/// `diag{−1, −1, e^{−iφ}, 1}`.
pub fn ideal_matrix(phi: f64) -> Matrix4<C64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(
        real(-1.0),
        real(-1.0),
        C64::from_polar(1.0, -phi),
        real(1.0),
    ))
}

pub fn ideal_gate(phi: f64) -> GateMatrix {
    GateMatrix::compare(ideal_matrix(phi), phi, [0.0; 4], 0.0)
}

impl GateMatrix {
    fn compare(matrix: Matrix4<C64>, phi: f64, leakage: [f64; 4], drift: f64) -> Self {
        let ideal = ideal_matrix(phi);
        let product = ideal.adjoint() * matrix;
        let channel_errors = [0, 1, 2, 3].map(|k| 1.0 - product[(k, k)].norm_sqr());
        Self {
            matrix,
            fidelity: product[(0, 0)].norm_sqr(),
            frobenius_distance: (matrix - ideal).norm(),
            channel_errors,
            leakage,
            max_norm_drift: drift,
        }
    }

    /// The matrix after a π phase on control `|0⟩`: `diag{1, 1, e^{−iφ}, 1}` ideally,
    /// a controlled phase on the target `|0⟩` conditioned on control `|1⟩`.
    pub fn controlled_phase_frame(&self) -> Matrix4<C64> {
        let shift = Matrix4::from_diagonal(&nalgebra::Vector4::new(
            real(-1.0),
            real(-1.0),
            real(1.0),
            real(1.0),
        ));
        shift * self.matrix
    }
}

/// Simulates the four computational inputs under `schedule`.
pub fn simulate_gate(gate: &GateSequence, schedule: &StagedSpacing) -> Result<GateMatrix> {
    let staged = gate.with_spacing(schedule)?;
    let basis = gate_basis();
    let indices: Vec<usize> = COMPUTATIONAL
        .iter()
        .map(|c| basis.index_of(c))
        .collect::<Result<_>>()?;
    let mut m = Matrix4::zeros();
    let mut leakage = [0.0; 4];
    let mut drift: f64 = 0.0;
    for col in 0..4 {
        let run = staged.run_input(col, None)?;
        drift = drift.max(run.max_norm_drift);
        let amps = run.final_state.amplitudes();
        let mut kept = 0.0;
        for (row, &i) in indices.iter().enumerate() {
            m[(row, col)] = amps[i];
            kept += amps[i].norm_sqr();
        }
        leakage[col] = (1.0 - kept).max(0.0);
    }
    Ok(GateMatrix::compare(m, gate.target_phase, leakage, drift))
}

/// Dense copy of a 2×2 block for generic linear-algebra helpers.
pub fn block_to_dmatrix(block: &Matrix2<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |i, j| block[(i, j)])
}
