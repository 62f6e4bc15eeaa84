//! Square pulses, waits and van der Waals pair shifts, assembled into
//! piecewise-constant stage Hamiltonians.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::hilbert::{HermitianOperator, ProductBasis, Propagator, StateVector, C64};

/// Default number of trace samples recorded per stage.
pub const DEFAULT_SUBSTEPS: usize = 200;

/// Pair shift in rad/μs for `c6` given as C6/2π in THz·μm⁶ and `spacing` in μm.
///
/// The sign of `c6` is kept, so a negative coefficient gives a negative shift.
pub fn pair_interaction(c6: f64, spacing: f64) -> Result<f64> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::invalid(
            "spacing",
            format!("must be positive and finite, got {spacing}"),
        ));
    }
    Ok(2.0 * PI * c6 * 1.0e6 / spacing.powi(6))
}

/// Converts an ordinary frequency X/2π in MHz to rad/μs.
pub fn mhz_to_angular(mhz: f64) -> f64 {
    2.0 * PI * mhz
}

/// Converts rad/μs back to X/2π in MHz.
pub fn angular_to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

/// One square pulse on a single atom.
///
/// The drive adds `rabi/2 |upper><lower| + h.c.` and `detuning |upper><upper|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSpec {
    pub actor: usize,
    pub lower: String,
    pub upper: String,
    pub rabi: C64,
    pub detuning: f64,
    pub duration: f64,
}

impl PulseSpec {
    pub fn new(
        actor: usize,
        lower: impl Into<String>,
        upper: impl Into<String>,
        rabi: C64,
        duration: f64,
    ) -> Result<Self> {
        let spec = Self {
            actor,
            lower: lower.into(),
            upper: upper.into(),
            rabi,
            detuning: 0.0,
            duration,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(Error::invalid(
                "duration",
                format!("pulse duration must be positive, got {}", self.duration),
            ));
        }
        if !(self.rabi.norm() > 0.0) || !self.rabi.norm().is_finite() {
            return Err(Error::invalid("rabi", "pulse Rabi frequency must be nonzero"));
        }
        if !self.detuning.is_finite() {
            return Err(Error::invalid("detuning", "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitSpec {
    pub duration: f64,
}

impl WaitSpec {
    pub fn new(duration: f64) -> Result<Self> {
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::invalid(
                "duration",
                format!("wait duration must be non-negative, got {duration}"),
            ));
        }
        Ok(Self { duration })
    }
}

/// Energy shift `pair_interaction(c6, L_ab)` applied when atom `pair.0` is in
/// `labels.0` and atom `pair.1` is in `labels.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionSpec {
    pub pair: (usize, usize),
    pub c6: f64,
    pub labels: (String, String),
}

impl InteractionSpec {
    pub fn new(
        pair: (usize, usize),
        c6: f64,
        labels: (impl Into<String>, impl Into<String>),
    ) -> Result<Self> {
        if !c6.is_finite() || c6 == 0.0 {
            return Err(Error::invalid("c6", "must be finite and nonzero"));
        }
        if pair.0 == pair.1 {
            return Err(Error::invalid("pair", "interaction needs two distinct atoms"));
        }
        Ok(Self {
            pair,
            c6,
            labels: (labels.0.into(), labels.1.into()),
        })
    }
}

/// Interatomic spacings in μm, keyed by unordered atom pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeometryState {
    spacings: BTreeMap<(usize, usize), f64>,
}

fn pair_key(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl GeometryState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pair(a: usize, b: usize, spacing: f64) -> Result<Self> {
        let mut g = Self::new();
        g.set(a, b, spacing)?;
        Ok(g)
    }

    pub fn set(&mut self, a: usize, b: usize, spacing: f64) -> Result<()> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::invalid(
                "spacing",
                format!("must be positive, got {spacing} for pair ({a}, {b})"),
            ));
        }
        self.spacings.insert(pair_key(a, b), spacing);
        Ok(())
    }

    pub fn spacing(&self, a: usize, b: usize) -> Option<f64> {
        self.spacings.get(&pair_key(a, b)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.spacings.iter().map(|(k, v)| (*k, *v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StageKind {
    Pulse(PulseSpec),
    Wait(WaitSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub name: String,
    pub kind: StageKind,
    pub geometry: GeometryState,
}

impl Stage {
    pub fn pulse(name: impl Into<String>, pulse: PulseSpec, geometry: GeometryState) -> Self {
        Self {
            name: name.into(),
            kind: StageKind::Pulse(pulse),
            geometry,
        }
    }

    pub fn wait(name: impl Into<String>, wait: WaitSpec, geometry: GeometryState) -> Self {
        Self {
            name: name.into(),
            kind: StageKind::Wait(wait),
            geometry,
        }
    }

    pub fn duration(&self) -> f64 {
        match &self.kind {
            StageKind::Pulse(p) => p.duration,
            StageKind::Wait(w) => w.duration,
        }
    }
}

/// Ordered, contiguous stages plus the pair interactions active throughout.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sequence {
    pub stages: Vec<Stage>,
    pub interactions: Vec<InteractionSpec>,
}

impl Sequence {
    pub fn new(interactions: Vec<InteractionSpec>) -> Self {
        Self {
            stages: Vec::new(),
            interactions,
        }
    }

    pub fn push(&mut self, stage: Stage) {
        self.stages.push(stage);
    }

    pub fn duration(&self) -> f64 {
        self.stages.iter().map(Stage::duration).sum()
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// Stages from `first` through `last` inclusive, by name.
    pub fn between(&self, first: &str, last: &str) -> Result<Sequence> {
        let lookup = |name: &str| {
            self.stages
                .iter()
                .position(|s| s.name == name)
                .ok_or_else(|| Error::invalid("stage", format!("no stage named {name:?}")))
        };
        let (a, b) = (lookup(first)?, lookup(last)?);
        if a > b {
            return Err(Error::invalid(
                "stage",
                format!("{first:?} comes after {last:?}"),
            ));
        }
        Ok(Sequence {
            stages: self.stages[a..=b].to_vec(),
            interactions: self.interactions.clone(),
        })
    }

    /// Replaces every stage's geometry snapshot with `schedule(stage)`.
    pub fn regeometrized<F>(&self, mut schedule: F) -> Sequence
    where
        F: FnMut(&Stage) -> GeometryState,
    {
        let stages = self
            .stages
            .iter()
            .map(|s| Stage {
                name: s.name.clone(),
                kind: s.kind.clone(),
                geometry: schedule(s),
            })
            .collect();
        Sequence {
            stages,
            interactions: self.interactions.clone(),
        }
    }
}

/// Adds the diagonal pair shifts of `interactions` at `geometry` to `h`.
pub fn add_interactions(
    h: &mut HermitianOperator,
    interactions: &[InteractionSpec],
    geometry: &GeometryState,
) -> Result<()> {
    let basis = Arc::clone(h.basis());
    for spec in interactions {
        let (a, b) = spec.pair;
        let pa = basis.position(a)?;
        let pb = basis.position(b)?;
        let la = basis.level_index(a, &spec.labels.0)?;
        let lb = basis.level_index(b, &spec.labels.1)?;
        let spacing = geometry.spacing(a, b).ok_or(Error::MissingGeometry(a, b))?;
        let v = pair_interaction(spec.c6, spacing)?;
        for i in 0..basis.dim() {
            if basis.level_at(i, pa) == la && basis.level_at(i, pb) == lb {
                h.add_diagonal(i, v);
            }
        }
    }
    Ok(())
}

/// Adds a single-atom drive (and detuning) to `h`.
pub fn add_drive(h: &mut HermitianOperator, pulse: &PulseSpec) -> Result<()> {
    let basis = Arc::clone(h.basis());
    let pos = basis.position(pulse.actor)?;
    let lo = basis.level_index(pulse.actor, &pulse.lower)?;
    let up = basis.level_index(pulse.actor, &pulse.upper)?;
    if lo == up {
        return Err(Error::invalid("transition", "lower and upper level coincide"));
    }
    let stride = basis.stride(pos);
    let half = pulse.rabi * 0.5;
    let mut m = h.matrix().clone();
    for i in 0..basis.dim() {
        if basis.level_at(i, pos) != lo {
            continue;
        }
        let j = i - lo * stride + up * stride;
        m[(j, i)] += half;
        m[(i, j)] += half.conj();
        if pulse.detuning != 0.0 {
            m[(j, j)] += C64::new(pulse.detuning, 0.0);
        }
    }
    *h = HermitianOperator::new(&basis, m)?;
    Ok(())
}

/// Hamiltonian of one stage: its drive (if any) plus every pair shift at the
/// given geometry.
pub fn stage_hamiltonian(
    stage: &Stage,
    basis: &Arc<ProductBasis>,
    interactions: &[InteractionSpec],
    geometry: &GeometryState,
) -> Result<HermitianOperator> {
    let mut h = HermitianOperator::zeros(basis);
    if let StageKind::Pulse(p) = &stage.kind {
        add_drive(&mut h, p)?;
    }
    add_interactions(&mut h, interactions, geometry)?;
    Ok(h)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageSpan {
    pub name: String,
    pub start: f64,
    pub end: f64,
    /// Sample indices `first..=last` covering the stage, boundaries included.
    pub first_sample: usize,
    pub last_sample: usize,
}

/// Sampled states along a sequence.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub basis: Arc<ProductBasis>,
    pub times: Vec<f64>,
    pub states: Vec<DVector<C64>>,
    pub spans: Vec<StageSpan>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn span(&self, name: &str) -> Option<&StageSpan> {
        self.spans.iter().find(|s| s.name == name)
    }

    pub fn population_series<S: AsRef<str>>(&self, config: &[S]) -> Result<Vec<f64>> {
        let i = self.basis.index_of(config)?;
        Ok(self.states.iter().map(|s| s[i].norm_sqr()).collect())
    }

    pub fn argument_series<S: AsRef<str>>(&self, config: &[S]) -> Result<Vec<f64>> {
        let i = self.basis.index_of(config)?;
        Ok(self.states.iter().map(|s| s[i].arg()).collect())
    }

    pub fn level_population_series(&self, atom_id: usize, label: &str) -> Result<Vec<f64>> {
        let pos = self.basis.position(atom_id)?;
        let level = self.basis.level_index(atom_id, label)?;
        Ok(self
            .states
            .iter()
            .map(|s| crate::hilbert::level_population_raw(&self.basis, s, pos, level))
            .collect())
    }

    /// Trapezoidal integral of `series` over samples `first..=last`.
    pub fn integrate(&self, series: &[f64], first: usize, last: usize) -> f64 {
        (first..last)
            .map(|k| 0.5 * (series[k] + series[k + 1]) * (self.times[k + 1] - self.times[k]))
            .sum()
    }

    /// Trapezoidal integral over the whole trajectory.
    pub fn integrate_all(&self, series: &[f64]) -> f64 {
        if self.times.is_empty() {
            0.0
        } else {
            self.integrate(series, 0, self.times.len() - 1)
        }
    }

    pub fn final_state(&self) -> Option<StateVector> {
        self.states
            .last()
            .map(|a| StateVector::from_raw(Arc::clone(&self.basis), a.clone()))
    }
}

#[derive(Debug, Clone)]
pub struct SequenceRun {
    pub final_state: StateVector,
    pub trajectory: Option<Trajectory>,
    /// Largest `| ||psi|| - 1 |` seen at any stage boundary.
    pub max_norm_drift: f64,
}

/// Applies every stage propagator in order. With `substeps = Some(n)` each
/// stage is also sampled at `n` uniform sub-times; the final state does not
/// depend on `substeps`.
pub fn run_sequence(
    seq: &Sequence,
    initial: &StateVector,
    substeps: Option<usize>,
) -> Result<SequenceRun> {
    let basis = Arc::clone(initial.basis());
    let mut state = initial.clone();
    let mut t = 0.0;
    let mut max_norm_drift = (state.norm() - 1.0).abs();
    let mut traj = substeps.map(|_| Trajectory {
        basis: Arc::clone(&basis),
        times: vec![0.0],
        states: vec![state.amplitudes().clone()],
        spans: Vec::new(),
    });

    for stage in &seq.stages {
        let duration = stage.duration();
        let first_sample = traj.as_ref().map_or(0, |tr| tr.times.len() - 1);
        if duration > 0.0 {
            let h = stage_hamiltonian(stage, &basis, &seq.interactions, &stage.geometry)?;
            let prop = Propagator::new(&h)?;
            if let (Some(tr), Some(n)) = (traj.as_mut(), substeps) {
                let n = n.max(1);
                for k in 1..n {
                    let dt = duration * k as f64 / n as f64;
                    let s = prop.apply(&state, dt)?;
                    tr.times.push(t + dt);
                    tr.states.push(s.amplitudes().clone());
                }
            }
            state = prop.apply(&state, duration)?;
        }
        t += duration;
        max_norm_drift = max_norm_drift.max((state.norm() - 1.0).abs());
        if let Some(tr) = traj.as_mut() {
            if duration > 0.0 {
                tr.times.push(t);
                tr.states.push(state.amplitudes().clone());
            }
            tr.spans.push(StageSpan {
                name: stage.name.clone(),
                start: t - duration,
                end: t,
                first_sample,
                last_sample: tr.times.len() - 1,
            });
        }
    }

    Ok(SequenceRun {
        final_state: state,
        trajectory: traj,
        max_norm_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_product_basis, LevelScheme};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gate_basis() -> Arc<ProductBasis> {
        build_product_basis(vec![
            LevelScheme::new(0, ["0", "1", "rc"]).unwrap(),
            LevelScheme::new(1, ["0", "1", "r0", "r1"]).unwrap(),
        ])
        .unwrap()
    }

    fn gate_interactions() -> Vec<InteractionSpec> {
        vec![
            InteractionSpec::new((0, 1), 56.2, ("rc", "r0")).unwrap(),
            InteractionSpec::new((0, 1), -25.6, ("rc", "r1")).unwrap(),
        ]
    }

    #[test]
    fn pair_interaction_values() {
        // 56.2e6 / 8^6 MHz
        let v0 = pair_interaction(56.2, 8.0).unwrap();
        assert_relative_eq!(angular_to_mhz(v0), 56.2e6 / 262_144.0, max_relative = 1e-14);
        assert!((angular_to_mhz(v0) - 214.4).abs() < 0.05);
        let v1 = pair_interaction(-25.6, 8.0).unwrap();
        assert!(v1 < 0.0);
        assert!((angular_to_mhz(v1).abs() - 97.7).abs() < 0.05);
        let lattice = pair_interaction(56.2, 16.0).unwrap();
        assert!((angular_to_mhz(lattice) - 3.35).abs() < 0.005);
        assert!(pair_interaction(56.2, 0.0).is_err());
        assert!(pair_interaction(56.2, -1.0).is_err());
    }

    #[test]
    fn wait_stage_shifts_rc_r1_down() {
        let b = gate_basis();
        let g = GeometryState::pair(0, 1, 8.0).unwrap();
        let stage = Stage::wait("wait", WaitSpec::new(0.005).unwrap(), g.clone());
        let h = stage_hamiltonian(&stage, &b, &gate_interactions(), &g).unwrap();
        let i = b.index_of(&["rc", "r1"]).unwrap();
        let v1 = -pair_interaction(-25.6, 8.0).unwrap();
        assert_eq!(h.matrix()[(i, i)].re, -v1);
        let i0 = b.index_of(&["rc", "r0"]).unwrap();
        assert_eq!(h.matrix()[(i0, i0)].re, pair_interaction(56.2, 8.0).unwrap());
    }

    #[test]
    fn pulse2_block() {
        let b = gate_basis();
        let g = GeometryState::pair(0, 1, 8.0).unwrap();
        let omega = 2.0 * PI * 17.3;
        let p = PulseSpec::new(1, "0", "r0", C64::new(omega, 0.0), PI / omega).unwrap();
        let stage = Stage::pulse("pulse-2", p, g.clone());
        let h = stage_hamiltonian(&stage, &b, &gate_interactions(), &g).unwrap();
        let a = b.index_of(&["rc", "0"]).unwrap();
        let r = b.index_of(&["rc", "r0"]).unwrap();
        let v0 = pair_interaction(56.2, 8.0).unwrap();
        assert_eq!(h.matrix()[(a, a)], C64::new(0.0, 0.0));
        assert_eq!(h.matrix()[(a, r)], C64::new(omega / 2.0, 0.0));
        assert_eq!(h.matrix()[(r, a)], C64::new(omega / 2.0, 0.0));
        assert_eq!(h.matrix()[(r, r)], C64::new(v0, 0.0));
    }

    #[test]
    fn complex_rabi_sits_on_upper_lower_element() {
        let b = gate_basis();
        let g = GeometryState::pair(0, 1, 8.0).unwrap();
        let rabi = C64::new(0.0, 3.0);
        let p = PulseSpec::new(1, "0", "r1", rabi, 1.0).unwrap().with_detuning(2.0);
        let h = stage_hamiltonian(&Stage::pulse("p", p, g.clone()), &b, &[], &g).unwrap();
        let lo = b.index_of(&["1", "0"]).unwrap();
        let up = b.index_of(&["1", "r1"]).unwrap();
        assert_eq!(h.matrix()[(up, lo)], rabi * 0.5);
        assert_eq!(h.matrix()[(lo, up)], (rabi * 0.5).conj());
        assert_eq!(h.matrix()[(up, up)].re, 2.0);
    }

    #[test]
    fn empty_operator_on_ground_subspace() {
        let b = gate_basis();
        let g = GeometryState::pair(0, 1, 8.0).unwrap();
        let stage = Stage::wait("w", WaitSpec::new(1.0).unwrap(), g.clone());
        let h = stage_hamiltonian(&stage, &b, &gate_interactions(), &g).unwrap();
        for c in ["0", "1"] {
            for t in ["0", "1", "r0", "r1"] {
                let i = b.index_of(&[c, t]).unwrap();
                assert!(h.matrix().row(i).iter().all(|z| z.norm() == 0.0));
            }
        }
    }

    #[test]
    fn stage_errors() {
        let b = gate_basis();
        let g = GeometryState::pair(0, 1, 8.0).unwrap();
        let p = PulseSpec::new(1, "0", "r7", C64::new(1.0, 0.0), 1.0).unwrap();
        assert!(matches!(
            stage_hamiltonian(&Stage::pulse("p", p, g.clone()), &b, &[], &g),
            Err(Error::UnknownLabel { .. })
        ));
        let w = Stage::wait("w", WaitSpec::new(1.0).unwrap(), GeometryState::new());
        assert_eq!(
            stage_hamiltonian(&w, &b, &gate_interactions(), &GeometryState::new()).unwrap_err(),
            Error::MissingGeometry(0, 1)
        );
        assert!(PulseSpec::new(0, "0", "rc", C64::new(1.0, 0.0), 0.0).is_err());
        assert!(PulseSpec::new(0, "0", "rc", C64::new(0.0, 0.0), 1.0).is_err());
        assert!(WaitSpec::new(-1.0).is_err());
        assert!(WaitSpec::new(0.0).is_ok());
        assert!(InteractionSpec::new((0, 1), 0.0, ("a", "b")).is_err());
        assert!(GeometryState::pair(0, 1, 0.0).is_err());
    }

    #[test]
    fn empty_sequence_returns_initial() {
        let b = gate_basis();
        let psi = StateVector::basis_state(&b, &["0", "1"]).unwrap();
        let run = run_sequence(&Sequence::default(), &psi, Some(10)).unwrap();
        assert_eq!(run.final_state, psi);
        assert_eq!(run.trajectory.unwrap().len(), 1);
    }

    #[test]
    fn two_pi_on_control_gives_minus_one() {
        let b = gate_basis();
        let g = GeometryState::pair(0, 1, 8.0).unwrap();
        let omega = 2.0 * PI * 10.0;
        let mut seq = Sequence::new(gate_interactions());
        for name in ["pulse-1", "pulse-5"] {
            let p = PulseSpec::new(0, "0", "rc", C64::new(omega, 0.0), PI / omega).unwrap();
            seq.push(Stage::pulse(name, p, g.clone()));
        }
        let psi = StateVector::basis_state(&b, &["0", "1"]).unwrap();
        let run = run_sequence(&seq, &psi, None).unwrap();
        let a = run.final_state.amplitude(&["0", "1"]).unwrap();
        assert!((a + C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(run.max_norm_drift < 1e-12);
    }

    #[test]
    fn trace_does_not_change_final_state() {
        let b = gate_basis();
        let g = GeometryState::pair(0, 1, 8.0).unwrap();
        let omega = 2.0 * PI * 17.0;
        let mut seq = Sequence::new(gate_interactions());
        seq.push(Stage::pulse(
            "a",
            PulseSpec::new(1, "0", "r0", C64::new(omega, 0.0), 0.03).unwrap(),
            g.clone(),
        ));
        seq.push(Stage::wait("w", WaitSpec::new(0.0).unwrap(), g.clone()));
        seq.push(Stage::wait("w2", WaitSpec::new(0.01).unwrap(), g.clone()));
        let psi = StateVector::basis_state(&b, &["rc", "0"]).unwrap();
        let plain = run_sequence(&seq, &psi, None).unwrap();
        let traced = run_sequence(&seq, &psi, Some(37)).unwrap();
        assert_eq!(plain.final_state, traced.final_state);
        let tr = traced.trajectory.unwrap();
        assert_eq!(tr.len(), 1 + 37 + 37);
        let w = tr.span("w").unwrap();
        assert_eq!(w.first_sample, w.last_sample);
        assert_relative_eq!(*tr.times.last().unwrap(), 0.04, max_relative = 1e-15);
        assert_eq!(tr.final_state().unwrap(), traced.final_state);
    }

    proptest! {
        #[test]
        fn interaction_decreases_with_spacing(c6 in 0.1..100.0f64, l in 1.0..20.0f64, dl in 0.01..5.0f64) {
            prop_assert!(pair_interaction(c6, l + dl).unwrap() < pair_interaction(c6, l).unwrap());
        }

        #[test]
        fn interaction_scaling(c6 in -100.0..100.0f64, l in 1.0..20.0f64, s in 0.2..5.0f64) {
            prop_assume!(c6 != 0.0);
            let a = pair_interaction(c6, s * l).unwrap();
            let b = pair_interaction(c6, l).unwrap() / s.powi(6);
            prop_assert!((a - b).abs() <= 1e-14 * b.abs());
        }

        #[test]
        fn interaction_scaling_exact_for_powers_of_two(c6 in -100.0..100.0f64, l in 1.0..20.0f64, e in -2i32..3) {
            let s = 2f64.powi(e);
            prop_assert_eq!(pair_interaction(c6, s * l).unwrap(), pair_interaction(c6, l).unwrap() / s.powi(6));
        }
    }
}
