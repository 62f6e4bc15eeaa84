//! C ABI over the echogate simulator.
//!
//! Every fallible call returns an [`EgStatus`] and writes its result through
//! an out-pointer. On failure a message is kept per thread and can be read
//! with [`eg_last_error_message`]. Handles are opaque and must be released
//! with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use echogate::cli::{manybody_run, ManybodyConfig};
use echogate::echogate::{
    analytic_blockade, build_sequence, derive_frequencies, simulate_gate, GateParams,
    GateSequence, Protocol, StagedSpacing,
};
use echogate::errorbudget::{sweep_temperature, BudgetSetup, Sampling};
use echogate::manybody::{magnetization, population_one, Regime};
use echogate::pulsemodel::angular_to_mhz;
use echogate::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericFailure = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgProtocol {
    SpinEcho = 0,
    Traditional = 1,
}

impl From<EgProtocol> for Protocol {
    fn from(p: EgProtocol) -> Self {
        match p {
            EgProtocol::SpinEcho => Protocol::SpinEcho,
            EgProtocol::Traditional => Protocol::Traditional,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgRegime {
    Dressing = 0,
    NearResonant = 1,
}

/// Gate inputs; C6 in 2π·THz·μm⁶, frequencies in 2π·MHz, times in μs.
/// `eta3 <= 0` means "same as eta".
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EgGateParams {
    pub c6_rc_r0: f64,
    pub c6_rc_r1: f64,
    pub spacing_um: f64,
    pub eta: f64,
    pub eta3: f64,
    pub omega_c_mhz: f64,
    pub phi: f64,
    pub t_gap_us: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub wait_branch: u32,
}

impl From<&GateParams> for EgGateParams {
    fn from(p: &GateParams) -> Self {
        Self {
            c6_rc_r0: p.c6_rc_r0,
            c6_rc_r1: p.c6_rc_r1,
            spacing_um: p.spacing_um,
            eta: p.eta,
            eta3: p.eta3.unwrap_or(0.0),
            omega_c_mhz: p.omega_c_mhz,
            phi: p.phi,
            t_gap_us: p.t_gap_us,
            phi2: p.phi2,
            phi3: p.phi3,
            wait_branch: p.wait_branch,
        }
    }
}

impl From<&EgGateParams> for GateParams {
    fn from(p: &EgGateParams) -> Self {
        Self {
            c6_rc_r0: p.c6_rc_r0,
            c6_rc_r1: p.c6_rc_r1,
            spacing_um: p.spacing_um,
            eta: p.eta,
            eta3: (p.eta3 > 0.0).then_some(p.eta3),
            omega_c_mhz: p.omega_c_mhz,
            phi: p.phi,
            t_gap_us: p.t_gap_us,
            phi2: p.phi2,
            phi3: p.phi3,
            wait_branch: p.wait_branch,
        }
    }
}

/// Frequencies in MHz (X/2π), durations in μs.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EgDerived {
    pub v0_mhz: f64,
    pub v1_mhz: f64,
    pub v_plus_mhz: f64,
    pub omega_c_mhz: f64,
    pub omega_t2_mhz: f64,
    pub omega_t3_mhz: f64,
    pub omega_t4_mhz: f64,
    pub kappa: f64,
    pub t_wait_us: f64,
    pub durations_us: [f64; 5],
    pub eps1: f64,
    pub eps2: f64,
}

/// Row-major 4×4 gate on |00⟩, |01⟩, |10⟩, |11⟩.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EgGateResult {
    pub re: [f64; 16],
    pub im: [f64; 16],
    pub fidelity: f64,
    pub frobenius_distance: f64,
    pub channel_errors: [f64; 4],
    pub leakage: [f64; 4],
    pub max_norm_drift: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EgErrorReport {
    pub ta_k: f64,
    pub e_de: f64,
    pub e_ro: f64,
    pub e_do: f64,
    pub total: f64,
    pub sigma_l_um: f64,
    pub v_z_um_per_us: f64,
    pub harmonic_ok: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EgEchoSummary {
    pub final_time_us: f64,
    pub residual: f64,
    pub magnetization_initial: f64,
    pub magnetization_final: f64,
    pub population_one_initial: f64,
    pub population_one_final: f64,
}

/// A built pulse sequence.
pub struct EgGate {
    gate: GateSequence,
    spacing: f64,
}

/// An error-budget setup with its sampling plan.
pub struct EgBudget {
    setup: BudgetSetup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EgStatus {
    if e.is_config_error() {
        EgStatus::InvalidArgument
    } else {
        EgStatus::NumericFailure
    }
}

/// Runs `f`, recording any error or panic for [`eg_last_error_message`].
fn guard<F>(f: F) -> EgStatus
where
    F: FnOnce() -> Result<(), EgFail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EgStatus::Ok,
        Ok(Err(EgFail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            EgStatus::NullPointer
        }
        Ok(Err(EgFail::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            EgStatus::Panic
        }
    }
}

enum EgFail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for EgFail {
    fn from(e: Error) -> Self {
        EgFail::Core(e)
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, EgFail> {
    p.as_ref().ok_or(EgFail::Null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, EgFail> {
    p.as_mut().ok_or(EgFail::Null(what))
}

/// Message for the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn eg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Writes the default gate parameters.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `EgGateParams`.
#[no_mangle]
pub unsafe extern "C" fn eg_gate_params_default(out: *mut EgGateParams) -> EgStatus {
    guard(|| {
        *deref_mut(out, "out")? = EgGateParams::from(&GateParams::default());
        Ok(())
    })
}

/// # Safety
/// `params` must be NULL or point to a valid `EgGateParams`; `out` must be
/// NULL or point to writable memory for one `EgDerived`.
#[no_mangle]
pub unsafe extern "C" fn eg_derive(params: *const EgGateParams, out: *mut EgDerived) -> EgStatus {
    guard(|| {
        let p = GateParams::from(deref(params, "params")?);
        let out = deref_mut(out, "out")?;
        let d = derive_frequencies(&p)?;
        let a = analytic_blockade(&d);
        *out = EgDerived {
            v0_mhz: angular_to_mhz(d.v0),
            v1_mhz: angular_to_mhz(d.v1),
            v_plus_mhz: angular_to_mhz(d.v_plus),
            omega_c_mhz: angular_to_mhz(d.omega_c),
            omega_t2_mhz: angular_to_mhz(d.omega_t2),
            omega_t3_mhz: angular_to_mhz(d.omega_t3),
            omega_t4_mhz: angular_to_mhz(d.omega_t4),
            kappa: d.kappa,
            t_wait_us: d.t_wait,
            durations_us: d.durations,
            eps1: a.eps1,
            eps2: a.eps2,
        };
        Ok(())
    })
}

/// Builds a gate. On success `*out` owns a handle for [`eg_gate_free`].
///
/// # Safety
/// `params` must be NULL or valid; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn eg_gate_new(
    params: *const EgGateParams,
    protocol: EgProtocol,
    out: *mut *mut EgGate,
) -> EgStatus {
    guard(|| {
        let p = GateParams::from(deref(params, "params")?);
        let out = deref_mut(out, "out")?;
        *out = ptr::null_mut();
        let d = derive_frequencies(&p)?;
        let gate = build_sequence(protocol.into(), &p, &d)?;
        *out = Box::into_raw(Box::new(EgGate {
            gate,
            spacing: p.spacing_um,
        }));
        Ok(())
    })
}

/// # Safety
/// `gate` must be NULL or a handle from [`eg_gate_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eg_gate_free(gate: *mut EgGate) {
    if !gate.is_null() {
        drop(Box::from_raw(gate));
    }
}

/// Simulates the four computational inputs at fixed spacing `spacing_um`
/// (pass a non-positive value for the configured spacing).
///
/// # Safety
/// `gate` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn eg_gate_simulate(
    gate: *const EgGate,
    spacing_um: f64,
    out: *mut EgGateResult,
) -> EgStatus {
    guard(|| {
        let g = deref(gate, "gate")?;
        let out = deref_mut(out, "out")?;
        let l = if spacing_um > 0.0 { spacing_um } else { g.spacing };
        let m = simulate_gate(&g.gate, &StagedSpacing::frozen(l))?;
        let mut r = EgGateResult {
            fidelity: m.fidelity,
            frobenius_distance: m.frobenius_distance,
            channel_errors: m.channel_errors,
            leakage: m.leakage,
            max_norm_drift: m.max_norm_drift,
            ..Default::default()
        };
        for i in 0..4 {
            for j in 0..4 {
                r.re[4 * i + j] = m.matrix[(i, j)].re;
                r.im[4 * i + j] = m.matrix[(i, j)].im;
            }
        }
        *out = r;
        Ok(())
    })
}

/// Budget with default thermal, decay and Doppler models and `samples`
/// Monte Carlo spacings drawn from `seed`.
///
/// # Safety
/// `params` must be NULL or valid; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn eg_budget_new(
    params: *const EgGateParams,
    protocol: EgProtocol,
    samples: usize,
    seed: u64,
    out: *mut *mut EgBudget,
) -> EgStatus {
    guard(|| {
        let p = GateParams::from(deref(params, "params")?);
        let out = deref_mut(out, "out")?;
        *out = ptr::null_mut();
        p.validate()?;
        if samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()).into());
        }
        let setup = BudgetSetup {
            params: p,
            protocol: protocol.into(),
            sampling: Sampling::MonteCarlo { samples, seed },
            ..Default::default()
        };
        *out = Box::into_raw(Box::new(EgBudget { setup }));
        Ok(())
    })
}

/// # Safety
/// `budget` must be NULL or a handle from [`eg_budget_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eg_budget_free(budget: *mut EgBudget) {
    if !budget.is_null() {
        drop(Box::from_raw(budget));
    }
}

/// Error budget at atom temperature `ta_k` (kelvin).
///
/// # Safety
/// `budget` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn eg_budget_evaluate(
    budget: *const EgBudget,
    ta_k: f64,
    out: *mut EgErrorReport,
) -> EgStatus {
    guard(|| {
        let b = deref(budget, "budget")?;
        let out = deref_mut(out, "out")?;
        let r = sweep_temperature(&b.setup, &[ta_k])?.remove(0);
        *out = EgErrorReport {
            ta_k: r.ta_k,
            e_de: r.e_de,
            e_ro: r.e_ro,
            e_do: r.e_do,
            total: r.total,
            sigma_l_um: r.sigma_l,
            v_z_um_per_us: r.v_z,
            harmonic_ok: r.harmonic_ok,
        };
        Ok(())
    })
}

/// Four-atom forward/swap/backward echo with the preset for `regime`.
///
/// # Safety
/// `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn eg_manybody_echo(regime: EgRegime, out: *mut EgEchoSummary) -> EgStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let cfg = ManybodyConfig {
            regime: match regime {
                EgRegime::Dressing => Regime::Dressing,
                EgRegime::NearResonant => Regime::NearResonant,
            },
            trace_steps: 1,
            ..Default::default()
        };
        let setup = cfg.resolve()?;
        let run = manybody_run(&setup)?;
        *out = EgEchoSummary {
            final_time_us: setup.schedule.total_duration(),
            residual: run.residual()?,
            magnetization_initial: magnetization(&run.initial),
            magnetization_final: magnetization(&run.final_state),
            population_one_initial: population_one(&run.initial),
            population_one_final: population_one(&run.final_state),
        };
        Ok(())
    })
}
