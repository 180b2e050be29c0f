use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{complex_param, fermionic_coherent, ideal_rotated_state, single_ancilla_rotation, target_state, ExperimentResult, J, TARGET};
use crate::dynamics::{collective_jc_hamiltonian, collective_mode_hamiltonian, evolve, symmetric_product_state, CouplingSpec};
use crate::entanglement::fidelity;
use crate::hilbert::{trace_distance, DensityOp};
use crate::{Error, Result, C64};

/// Largest number of simultaneously coupled ancillas simulated in the full
/// product space.
pub const MAX_SIMULTANEOUS_MODES: usize = 8;

const COLLECTIVE: &str = "B";

/// [`simultaneous_coupling_check_for`] with the target starting in |g⟩.
pub fn simultaneous_coupling_check(n_modes: usize) -> Result<ExperimentResult> {
    simultaneous_coupling_check_for(n_modes, C64::new(1.0, 0.0), C64::new(0.0, 0.0))
}

/// Couples the target simultaneously and equally to N ancillas, each in
/// (|0⟩ + |1⟩)/√2, for a total time π/(4J√N).
///
/// The same evolution is run a second time in a separate space, where the
/// target couples at strength J√N to a single collective mode b = Σₖ aₖ/√N.
/// That gives the single-ancilla interaction Jt = π/4 at the effective
/// strength. The reported `fidelity_gain` is the fidelity difference between
/// the two. The fidelity of the two-level single-ancilla rotation is reported
/// for reference.
pub fn simultaneous_coupling_check_for(n_modes: usize, alpha: C64, beta: C64) -> Result<ExperimentResult> {
    if n_modes == 0 || n_modes > MAX_SIMULTANEOUS_MODES {
        return Err(Error::OutOfRange { name: "n_modes", value: n_modes as f64, range: "[1,8]" });
    }
    let target = target_state(alpha, beta)?;
    let ideal = ideal_rotated_state(alpha, beta)?;
    let duration = PI / (4.0 * J * (n_modes as f64).sqrt());

    let labels: Vec<String> = (1..=n_modes).map(|k| format!("A{k}")).collect();
    let mut joint = target.clone();
    for l in &labels {
        joint = joint.tensor(&fermionic_coherent(l)?)?;
    }
    let h = collective_jc_hamiltonian(joint.layout(), &CouplingSpec::new(TARGET, labels.iter().cloned(), J)?)?;
    let simultaneous = evolve(&joint, &h, duration)?.reduced_density(&[TARGET])?;

    let plus = C64::new(FRAC_1_SQRT_2, 0.0);
    let mode = symmetric_product_state(COLLECTIVE, n_modes, plus, plus)?;
    let joint_b = target.tensor(&mode)?;
    let hb = collective_mode_hamiltonian(joint_b.layout(), TARGET, COLLECTIVE, n_modes, J)?;
    let collective: DensityOp = evolve(&joint_b, &hb, duration)?.reduced_density(&[TARGET])?;

    let f_sim = fidelity(&simultaneous, &ideal)?;
    let f_coll = fidelity(&collective, &ideal)?;
    let f_single = single_ancilla_rotation(alpha, beta)?.fidelity;
    ExperimentResult::new("collective_check")
        .param("n_modes", n_modes)
        .param("alpha", complex_param(alpha))
        .param("beta", complex_param(beta))
        .param("duration", duration)
        .scalar("trace_distance", trace_distance(&simultaneous, &collective)?)
        .scalar("fidelity_simultaneous", f_sim)
        .scalar("fidelity_collective_mode", f_coll)
        .scalar("fidelity_gain", f_sim - f_coll)
        .scalar("fidelity_single_two_level_ancilla", f_single)
        .scalar("fidelity_gain_vs_two_level_ancilla", f_sim - f_single)
        .validated()
}
