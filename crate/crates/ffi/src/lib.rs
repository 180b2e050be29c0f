//! C ABI for the modent simulator.
//!
//! Every entry point returns a [`ModentStatus`] and writes results through
//! out-pointers. On failure the thread-local message from
//! [`modent_last_error_message`] explains why. Panics never cross the
//! boundary; they surface as [`ModentStatus::Panic`].
//!
//! Complex matrices are passed as interleaved `(re, im)` doubles in
//! row-major order, so a 4×4 density matrix takes 32 doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use modent::cli::{parse_config, render_output, run, OutputFormat};
use modent::entanglement::{chsh_violated, concurrence, correlation_tensor, horodecki_m, rho_tp, TwoQubitDensity};
use modent::protocols::{
    absorption, coherent_field_rotation, massive_fermion_protocol, optimize_angles, sequential_rotation,
    simultaneous_coupling_check_for, single_ancilla_rotation, FermionProtocolParams, RotationProtocolParams, MAX_PAIRS,
};
use modent::hilbert::SubsystemKind;
use modent::C64;
use nalgebra::DMatrix;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModentStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    ComputationFailed = 3,
    Panic = 4,
}

/// A complex number passed by value.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModentComplex {
    pub re: f64,
    pub im: f64,
}

impl From<ModentComplex> for C64 {
    fn from(z: ModentComplex) -> Self {
        C64::new(z.re, z.im)
    }
}

/// Opaque handle to a validated two-qubit density matrix.
pub struct ModentTwoQubitState(TwoQubitDensity);

struct Failure {
    status: ModentStatus,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self { status: ModentStatus::InvalidArgument, message: message.into() }
    }
}

impl From<modent::Error> for Failure {
    fn from(e: modent::Error) -> Self {
        let status = match e {
            modent::Error::OutOfRange { .. }
            | modent::Error::InvalidParameters(_)
            | modent::Error::InvalidDensity(_)
            | modent::Error::NotHermitian(_)
            | modent::Error::NotNormalized(_)
            | modent::Error::ZeroVector
            | modent::Error::CutoffTooSmall { .. } => ModentStatus::InvalidArgument,
            _ => ModentStatus::ComputationFailed,
        };
        Self { status, message: e.to_string() }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> ModentStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ModentStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_owned())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            set_last_error(&format!("internal panic: {what}"));
            ModentStatus::Panic
        }
    }
}

fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: non-null out-pointers are required to be valid and writable.
    unsafe { p.as_mut() }.ok_or_else(|| Failure { status: ModentStatus::NullPointer, message: format!("`{name}` is null") })
}

fn state<'a>(p: *const ModentTwoQubitState) -> Result<&'a TwoQubitDensity, Failure> {
    // SAFETY: non-null handles must come from this library and not be freed.
    unsafe { p.as_ref() }
        .map(|s| &s.0)
        .ok_or_else(|| Failure { status: ModentStatus::NullPointer, message: "`state` is null".to_owned() })
}

fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Failure> {
    if p.is_null() {
        return Err(Failure { status: ModentStatus::NullPointer, message: format!("`{name}` is null") });
    }
    // SAFETY: the caller guarantees `len` readable elements at `p`.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn slice_mut<'a, T>(p: *mut T, len: usize, name: &str) -> Result<&'a mut [T], Failure> {
    if p.is_null() {
        return Err(Failure { status: ModentStatus::NullPointer, message: format!("`{name}` is null") });
    }
    // SAFETY: the caller guarantees `len` writable elements at `p`.
    Ok(unsafe { std::slice::from_raw_parts_mut(p, len) })
}

fn write_matrix(m: &DMatrix<C64>, dest: &mut [f64]) {
    let n = m.ncols();
    for i in 0..m.nrows() {
        for j in 0..n {
            dest[2 * (i * n + j)] = m[(i, j)].re;
            dest[2 * (i * n + j) + 1] = m[(i, j)].im;
        }
    }
}

fn boxed(rho: TwoQubitDensity, dest: *mut *mut ModentTwoQubitState) -> Result<(), Failure> {
    *out(dest, "out_state")? = Box::into_raw(Box::new(ModentTwoQubitState(rho)));
    Ok(())
}

fn string_out(text: String, dest: *mut *mut c_char) -> Result<(), Failure> {
    let slot = out(dest, "out_json")?;
    *slot = CString::new(text).map_err(|_| Failure::invalid("output contains a NUL byte"))?.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn modent_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message describing the last failed call on this thread, or NULL after a
/// successful call. The pointer stays valid until the next call into the
/// library from the same thread.
#[no_mangle]
pub extern "C" fn modent_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn modent_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: guaranteed by the caller.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The target-pair state with coherence `gamma` in [0, 1].
///
/// # Safety
/// `out_state` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn modent_state_rho_tp(gamma: f64, out_state: *mut *mut ModentTwoQubitState) -> ModentStatus {
    guard(|| boxed(rho_tp(gamma)?, out_state))
}

/// Builds a state from 32 doubles (row-major, interleaved re/im). The matrix
/// must be Hermitian, positive semidefinite and of unit trace.
///
/// # Safety
/// `re_im` must be NULL or point to 32 readable doubles; `out_state` must be
/// NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn modent_state_from_matrix(re_im: *const f64, out_state: *mut *mut ModentTwoQubitState) -> ModentStatus {
    guard(|| {
        let v = slice(re_im, 32, "re_im")?;
        let m = DMatrix::from_fn(4, 4, |i, j| C64::new(v[2 * (4 * i + j)], v[2 * (4 * i + j) + 1]));
        boxed(TwoQubitDensity::from_matrix(m)?, out_state)
    })
}

/// Releases a state handle. NULL is ignored.
///
/// # Safety
/// `state` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn modent_state_free(state: *mut ModentTwoQubitState) {
    if !state.is_null() {
        // SAFETY: guaranteed by the caller.
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Wootters concurrence of the state.
///
/// # Safety
/// `state` must be NULL or a live handle; `out_value` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn modent_state_concurrence(state: *const ModentTwoQubitState, out_value: *mut f64) -> ModentStatus {
    guard(|| {
        *out(out_value, "out_value")? = concurrence(self::state(state)?);
        Ok(())
    })
}

/// Sum of the two largest eigenvalues of TᵀT; CHSH is violated when it
/// exceeds 1.
///
/// # Safety
/// `state` must be NULL or a live handle; the out-pointers NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn modent_state_horodecki_m(
    state: *const ModentTwoQubitState,
    out_value: *mut f64,
    out_violated: *mut bool,
) -> ModentStatus {
    guard(|| {
        let rho = self::state(state)?;
        *out(out_value, "out_value")? = horodecki_m(rho);
        *out(out_violated, "out_violated")? = chsh_violated(rho);
        Ok(())
    })
}

/// Correlation tensor Tᵢⱼ = Tr[ρ σᵢ⊗σⱼ] as 9 doubles, row-major.
///
/// # Safety
/// `state` must be NULL or a live handle; `out_tensor` NULL or 9 writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn modent_state_correlation_tensor(state: *const ModentTwoQubitState, out_tensor: *mut f64) -> ModentStatus {
    guard(|| {
        let t = correlation_tensor(self::state(state)?).to_array();
        let dest = slice_mut(out_tensor, 9, "out_tensor")?;
        for (k, v) in t.iter().flatten().enumerate() {
            dest[k] = *v;
        }
        Ok(())
    })
}

/// Copies the density matrix into 32 doubles (row-major, interleaved).
///
/// # Safety
/// `state` must be NULL or a live handle; `out_re_im` NULL or 32 writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn modent_state_matrix(state: *const ModentTwoQubitState, out_re_im: *mut f64) -> ModentStatus {
    guard(|| {
        let rho = self::state(state)?;
        write_matrix(rho.matrix(), slice_mut(out_re_im, 32, "out_re_im")?);
        Ok(())
    })
}

/// Absorbs one flying particle shared between two modes into the targets
/// and returns the target-pair state. The flying modes are fermionic when
/// `fermionic` is true and bosonic otherwise.
///
/// # Safety
/// `out_state` must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn modent_absorption(fermionic: bool, out_state: *mut *mut ModentTwoQubitState) -> ModentStatus {
    guard(|| {
        let kind = if fermionic { SubsystemKind::FermionicMode } else { SubsystemKind::BosonicMode { cutoff: 2 } };
        boxed(absorption(kind)?.targets, out_state)
    })
}

/// Target concurrence of the massive-fermion ancilla-pair protocol for
/// `n_pairs` mixing angles in [0, π].
///
/// # Safety
/// `thetas` must be NULL or point to `n_pairs` doubles; `out_value` NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn modent_fermion_concurrence(thetas: *const f64, n_pairs: usize, out_value: *mut f64) -> ModentStatus {
    guard(|| {
        if n_pairs == 0 || n_pairs > MAX_PAIRS {
            return Err(Failure::invalid(format!("n_pairs out of range [1,{MAX_PAIRS}], got {n_pairs}")));
        }
        let params = FermionProtocolParams::from_radians(slice(thetas, n_pairs, "thetas")?)?;
        *out(out_value, "out_value")? = massive_fermion_protocol(&params)?.concurrence;
        Ok(())
    })
}

/// Grid search plus local refinement over the mixing angles. Writes
/// `n_pairs` angles and the best concurrence.
///
/// # Safety
/// `out_angles` must be NULL or hold `n_pairs` writable doubles;
/// `out_concurrence` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn modent_optimize_angles(
    n_pairs: usize,
    grid_points: usize,
    refine_rounds: usize,
    out_angles: *mut f64,
    out_concurrence: *mut f64,
) -> ModentStatus {
    guard(|| {
        if n_pairs == 0 || n_pairs > MAX_PAIRS {
            return Err(Failure::invalid(format!("n_pairs out of range [1,{MAX_PAIRS}], got {n_pairs}")));
        }
        let angles = slice_mut(out_angles, n_pairs, "out_angles")?;
        let best = out(out_concurrence, "out_concurrence")?;
        let search = optimize_angles(n_pairs, grid_points, refine_rounds)?;
        angles.copy_from_slice(&search.best_angles);
        *best = search.best_concurrence;
        Ok(())
    })
}

/// Fidelity of the target after `n_ancillas` sequential couplings. A NULL
/// `per_step_duration` selects the default step π/(4JN).
///
/// # Safety
/// `per_step_duration` must be NULL or readable; `out_fidelity` NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn modent_sequential_fidelity(
    alpha: ModentComplex,
    beta: ModentComplex,
    n_ancillas: usize,
    per_step_duration: *const f64,
    out_fidelity: *mut f64,
) -> ModentStatus {
    guard(|| {
        let dest = out(out_fidelity, "out_fidelity")?;
        let mut params = RotationProtocolParams::new(alpha.into(), beta.into(), n_ancillas)?;
        // SAFETY: the caller guarantees a NULL or readable pointer.
        params.per_step_duration = unsafe { per_step_duration.as_ref() }.copied();
        params.validate()?;
        *dest = sequential_rotation(&params)?.get("fidelity").unwrap_or(f64::NAN);
        Ok(())
    })
}

/// One ancilla in |+⟩ for t = π/(4J): writes the simulated 2×2 target
/// state (8 doubles) and its fidelity to the ideal rotated state.
///
/// # Safety
/// `out_re_im` must be NULL or hold 8 writable doubles; `out_fidelity` NULL
/// or writable.
#[no_mangle]
pub unsafe extern "C" fn modent_single_ancilla_rotation(
    alpha: ModentComplex,
    beta: ModentComplex,
    out_re_im: *mut f64,
    out_fidelity: *mut f64,
) -> ModentStatus {
    guard(|| {
        let dest = slice_mut(out_re_im, 8, "out_re_im")?;
        let fid = out(out_fidelity, "out_fidelity")?;
        let r = single_ancilla_rotation(alpha.into(), beta.into())?;
        write_matrix(r.simulated.matrix(), dest);
        *fid = r.fidelity;
        Ok(())
    })
}

/// Rotation by a coherent field of amplitude `eta`. `cutoff` 0 picks the
/// Fock cutoff automatically.
///
/// # Safety
/// `out_fidelity` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn modent_coherent_fidelity(
    alpha: ModentComplex,
    beta: ModentComplex,
    eta: ModentComplex,
    cutoff: usize,
    out_fidelity: *mut f64,
) -> ModentStatus {
    guard(|| {
        let dest = out(out_fidelity, "out_fidelity")?;
        let cutoff = (cutoff > 0).then_some(cutoff);
        *dest = coherent_field_rotation(alpha.into(), beta.into(), eta.into(), cutoff)?.get("fidelity").unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Compares simultaneous coupling to `n_modes` ancillas against a single
/// collective mode. Writes the trace distance of the target states and the
/// fidelity gain.
///
/// # Safety
/// The out-pointers must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn modent_collective_check(
    n_modes: usize,
    alpha: ModentComplex,
    beta: ModentComplex,
    out_trace_distance: *mut f64,
    out_fidelity_gain: *mut f64,
) -> ModentStatus {
    guard(|| {
        let td = out(out_trace_distance, "out_trace_distance")?;
        let gain = out(out_fidelity_gain, "out_fidelity_gain")?;
        let r = simultaneous_coupling_check_for(n_modes, alpha.into(), beta.into())?;
        *td = r.get("trace_distance").unwrap_or(f64::NAN);
        *gain = r.get("fidelity_gain").unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Runs an experiment described by a JSON config (the same document the
/// command line accepts with `--config`) and returns its JSON result.
/// Output paths in the config are ignored. Free the result with
/// [`modent_string_free`].
///
/// # Safety
/// `config_json` must be NULL or a NUL-terminated string; `out_json` NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn modent_run_json(config_json: *const c_char, out_json: *mut *mut c_char) -> ModentStatus {
    guard(|| {
        if config_json.is_null() {
            return Err(Failure { status: ModentStatus::NullPointer, message: "`config_json` is null".to_owned() });
        }
        // SAFETY: guaranteed by the caller.
        let text = unsafe { CStr::from_ptr(config_json) }.to_str().map_err(|_| Failure::invalid("config is not UTF-8"))?;
        run_config(text, out_json)
    })
}

/// JSON summary table for `n_ancilla` ancillas. Free the result with
/// [`modent_string_free`].
///
/// # Safety
/// `out_json` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn modent_table1_json(n_ancilla: usize, out_json: *mut *mut c_char) -> ModentStatus {
    guard(|| run_config(&format!(r#"{{"experiment":"table1","parameters":{{"n":{n_ancilla}}}}}"#), out_json))
}

fn run_config(text: &str, out_json: *mut *mut c_char) -> Result<(), Failure> {
    out(out_json, "out_json")?;
    let to_failure = |e: modent::cli::CliError| match e {
        modent::cli::CliError::Compute(inner) => Failure::from(inner),
        other => Failure::invalid(other.to_string()),
    };
    let config = parse_config(&[] as &[&str], Some(text)).map_err(to_failure)?;
    let output = run(&config).map_err(to_failure)?;
    string_out(render_output(&output, OutputFormat::Json), out_json)
}
