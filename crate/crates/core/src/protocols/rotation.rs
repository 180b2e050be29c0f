use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector2};

use super::{check_normalized, complex_param, fermionic_coherent, ideal_rotated_state, target_layout, target_state, ExperimentResult, J, TARGET};
use crate::dynamics::{evolve, jc_hamiltonian, propagator, CouplingSpec};
use crate::entanglement::fidelity;
use crate::hilbert::{coherent_mode_state, default_cutoff, DensityOp, SubsystemKind, SystemLayout};
use crate::{Error, Result, C64};

const ANCILLA: &str = "A";

/// Largest truncation weight accepted for the coherent field.
pub const MAX_TRUNCATION_WEIGHT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationProtocolParams {
    pub alpha: C64,
    pub beta: C64,
    pub n_ancillas: usize,
    /// Interaction time per ancilla. `None` means π/(4JN).
    pub per_step_duration: Option<f64>,
}

impl RotationProtocolParams {
    pub fn new(alpha: C64, beta: C64, n_ancillas: usize) -> Result<Self> {
        let p = Self { alpha, beta, n_ancillas, per_step_duration: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_normalized(self.alpha, self.beta)?;
        if self.n_ancillas == 0 {
            return Err(Error::InvalidParameters("n_ancillas must be at least 1".into()));
        }
        if let Some(t) = self.per_step_duration {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::OutOfRange { name: "per_step_duration", value: t, range: "[0,inf)" });
            }
        }
        Ok(())
    }

    pub fn step_duration(&self) -> f64 {
        self.per_step_duration.unwrap_or(PI / (4.0 * J * self.n_ancillas as f64))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationOutcome {
    /// Reduced target state from the full target-plus-ancilla simulation.
    pub simulated: DensityOp,
    /// Closed-form prediction for the same state.
    pub analytic: DensityOp,
    /// Fidelity of `simulated` with the ideal rotated state.
    pub fidelity: f64,
}

/// One target interacting for Jt = π/4 with a single ancilla in (|0⟩ + |1⟩)/√2.
pub fn single_ancilla_rotation(alpha: C64, beta: C64) -> Result<RotationOutcome> {
    let target = target_state(alpha, beta)?;
    let joint = target.tensor(&fermionic_coherent(ANCILLA)?)?;
    let h = jc_hamiltonian(joint.layout(), &CouplingSpec::new(TARGET, [ANCILLA], J)?)?;
    let after = evolve(&joint, &h, PI / (4.0 * J))?;
    let simulated = after.reduced_density(&[TARGET])?;
    let fidelity = fidelity(&simulated, &ideal_rotated_state(alpha, beta)?)?;
    Ok(RotationOutcome { simulated, analytic: rotated_state_closed_form(alpha, beta)?, fidelity })
}

/// ¼ [[2|α|² + |α−β|², √2 α(α+β)* + √2 (α−β)β*], [c.c., |α+β|² + 2|β|²]]
pub fn rotated_state_closed_form(alpha: C64, beta: C64) -> Result<DensityOp> {
    check_normalized(alpha, beta)?;
    let r2 = std::f64::consts::SQRT_2;
    let (s, d) = (alpha + beta, alpha - beta);
    let off = (alpha * s.conj() + d * beta.conj()) * r2 / 4.0;
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new((2.0 * alpha.norm_sqr() + d.norm_sqr()) / 4.0, 0.0),
            off,
            off.conj(),
            C64::new((s.norm_sqr() + 2.0 * beta.norm_sqr()) / 4.0, 0.0),
        ],
    );
    DensityOp::new(target_layout(), m)
}

/// The target's channel for one interaction of duration τ with a fresh
/// ancilla in (|0⟩ + |1⟩)/√2, held as its two Kraus operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationChannel {
    kraus: [Matrix2<C64>; 2],
}

impl RotationChannel {
    pub fn new(duration: f64) -> Result<Self> {
        let layout = SystemLayout::new([(TARGET, SubsystemKind::TwoLevel), (ANCILLA, SubsystemKind::FermionicMode)])?;
        let h = jc_hamiltonian(&layout, &CouplingSpec::new(TARGET, [ANCILLA], J)?)?;
        let u = propagator(&h, duration)?;
        Ok(Self::from_unitary(&Matrix4::from_fn(|r, c| u.matrix()[(r, c)])))
    }

    /// Kₖ = ⟨k|_A U |+⟩_A for a unitary on the (target, ancilla) basis.
    pub fn from_unitary(u: &Matrix4<C64>) -> Self {
        let plus = Vector2::repeat(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let kraus = [0, 1].map(|k| Matrix2::from_fn(|i, j| (0..2).map(|a| u[(2 * i + k, 2 * j + a)] * plus[a]).sum()));
        Self { kraus }
    }

    pub fn kraus(&self) -> &[Matrix2<C64>; 2] {
        &self.kraus
    }

    pub fn apply(&self, rho: &Matrix2<C64>) -> Matrix2<C64> {
        self.kraus.iter().map(|k| k * rho * k.adjoint()).sum()
    }
}

fn to_matrix2(rho: &DensityOp) -> Matrix2<C64> {
    Matrix2::from_fn(|r, c| rho.matrix()[(r, c)])
}

fn to_density(m: &Matrix2<C64>) -> Result<DensityOp> {
    DensityOp::new(target_layout(), DMatrix::from_fn(2, 2, |r, c| m[(r, c)]))
}

fn sequential_final(params: &RotationProtocolParams) -> Result<Matrix2<C64>> {
    params.validate()?;
    let channel = RotationChannel::new(params.step_duration())?;
    let mut rho = to_matrix2(&target_state(params.alpha, params.beta)?.to_density());
    for _ in 0..params.n_ancillas {
        rho = channel.apply(&rho);
    }
    Ok(rho)
}

/// The target interacts with N fresh ancillas one after another. Each used
/// ancilla is traced out immediately because it never interacts again, so
/// the cost is O(N) with a 2×2 state.
pub fn sequential_rotation(params: &RotationProtocolParams) -> Result<ExperimentResult> {
    let rho = to_density(&sequential_final(params)?)?;
    let f = fidelity(&rho, &ideal_rotated_state(params.alpha, params.beta)?)?;
    let n = params.n_ancillas as f64;
    ExperimentResult::new("sequential_rotation")
        .param("alpha", complex_param(params.alpha))
        .param("beta", complex_param(params.beta))
        .param("n_ancillas", params.n_ancillas)
        .param("per_step_duration", params.step_duration())
        .scalar("fidelity", f)
        .scalar("infidelity", 1.0 - f)
        .scalar("infidelity_times_n", (1.0 - f) * n)
        .validated()
}

/// Target state after every step, starting with the initial state.
pub fn sequential_rotation_states(params: &RotationProtocolParams) -> Result<Vec<DensityOp>> {
    params.validate()?;
    let channel = RotationChannel::new(params.step_duration())?;
    let mut rho = to_matrix2(&target_state(params.alpha, params.beta)?.to_density());
    let mut out = Vec::with_capacity(params.n_ancillas + 1);
    out.push(to_density(&rho)?);
    for _ in 0..params.n_ancillas {
        rho = channel.apply(&rho);
        out.push(to_density(&rho)?);
    }
    Ok(out)
}

/// Rotation driven by a bosonic mode in a truncated coherent state of
/// amplitude η, interacting for π/(4J|η|). With η = 0 there is no field and
/// the interaction time is zero.
pub fn coherent_field_rotation(alpha: C64, beta: C64, eta: C64, cutoff: Option<usize>) -> Result<ExperimentResult> {
    check_normalized(alpha, beta)?;
    if !(eta.re.is_finite() && eta.im.is_finite()) {
        return Err(Error::OutOfRange { name: "eta", value: eta.norm(), range: "finite" });
    }
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(eta));
    let field = coherent_mode_state(ANCILLA, cutoff, eta)?;
    if field.truncation_weight > MAX_TRUNCATION_WEIGHT {
        return Err(Error::CutoffTooSmall { cutoff, weight: field.truncation_weight, limit: MAX_TRUNCATION_WEIGHT });
    }
    let duration = if eta.norm() == 0.0 { 0.0 } else { PI / (4.0 * J * eta.norm()) };
    let joint = target_state(alpha, beta)?.tensor(&field.state)?;
    let h = jc_hamiltonian(joint.layout(), &CouplingSpec::new(TARGET, [ANCILLA], J)?)?;
    let after = evolve(&joint, &h, duration)?;
    let rho = after.reduced_density(&[TARGET])?;
    let f = fidelity(&rho, &ideal_rotated_state(alpha, beta)?)?;
    ExperimentResult::new("coherent_field_rotation")
        .param("alpha", complex_param(alpha))
        .param("beta", complex_param(beta))
        .param("eta", complex_param(eta))
        .param("cutoff", cutoff)
        .param("duration", duration)
        .scalar("fidelity", f)
        .scalar("infidelity", 1.0 - f)
        .scalar("truncation_weight", field.truncation_weight)
        .validated()
}
