use std::f64::consts::PI;

use super::{ExperimentResult, J};
use crate::dynamics::{evolve, jc_hamiltonian, CouplingSpec};
use crate::entanglement::{concurrence, horodecki_m, TwoQubitDensity};
use crate::hilbert::{basis_state, embed_operator, number, superpose, SubsystemKind, SystemLayout, E, G};
use crate::{Error, Result, C64};

const FLY_L: &str = "fly_L";
const FLY_R: &str = "fly_R";
const T_L: &str = "T_L";
const T_R: &str = "T_R";

#[derive(Debug, Clone)]
pub struct AbsorptionOutcome {
    pub targets: TwoQubitDensity,
    pub result: ExperimentResult,
}

/// A flying particle in (|10⟩ + |01⟩)/√2 over its left/right modes is absorbed
/// by one of two ground-state targets. Each side evolves under the exchange
/// Hamiltonian for Jt = π/2, which transfers the excitation completely.
///
/// `flying` selects the mode type of the flying particle.
pub fn absorption(flying: SubsystemKind) -> Result<AbsorptionOutcome> {
    if !flying.is_mode() {
        return Err(Error::WrongSubsystemKind { label: FLY_L.into(), expected: "a field mode" });
    }
    let layout = SystemLayout::new([
        (FLY_L, flying),
        (FLY_R, flying),
        (T_L, SubsystemKind::TwoLevel),
        (T_R, SubsystemKind::TwoLevel),
    ])?;
    let one = C64::new(1.0, 0.0);
    let initial = superpose(&[
        (one, &basis_state(&layout, &[1, 0, G, G])?),
        (one, &basis_state(&layout, &[0, 1, G, G])?),
    ])?;
    let expected = superpose(&[
        (one, &basis_state(&layout, &[0, 0, E, G])?),
        (one, &basis_state(&layout, &[0, 0, G, E])?),
    ])?;

    let t = PI / (2.0 * J);
    let h_left = jc_hamiltonian(&layout, &CouplingSpec::new(T_L, [FLY_L], J)?)?;
    let h_right = jc_hamiltonian(&layout, &CouplingSpec::new(T_R, [FLY_R], J)?)?;
    let after = evolve(&evolve(&initial, &h_left, t)?, &h_right, t)?;

    let occ = |label: &str| -> Result<f64> {
        let n = embed_operator(&layout, &number(label, flying)?, &[label])?;
        Ok(after.expectation(&n)?.re)
    };
    let targets = TwoQubitDensity::from_density(after.reduced_density(&[T_L, T_R])?)?;
    let c = concurrence(&targets);
    let result = ExperimentResult::new("absorption")
        .param("flying_mode", if flying == SubsystemKind::FermionicMode { "fermionic" } else { "bosonic" })
        .param("coupling_time", t)
        .scalar("overlap_with_absorbed_state", after.overlap(&expected)?)
        .scalar("occupation_fly_L", occ(FLY_L)?)
        .scalar("occupation_fly_R", occ(FLY_R)?)
        .scalar("concurrence", c)
        .scalar("M", horodecki_m(&targets))
        .validated()?;
    Ok(AbsorptionOutcome { targets, result })
}

/// Absorption of a single photon (bosonic flying modes).
pub fn massless_absorption() -> Result<AbsorptionOutcome> {
    absorption(SubsystemKind::BosonicMode { cutoff: 2 })
}
