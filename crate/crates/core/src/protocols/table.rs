use serde::Serialize;

use super::{absorption, massless_absorption, optimize_angles, sequential_rotation, RotationProtocolParams};
use crate::entanglement::{concurrence, rho_tp};
use crate::hilbert::SubsystemKind;
use crate::{Error, Result, C64};

/// Grid resolution and refinement used for the massive-fermion row.
pub const TABLE_GRID_POINTS: usize = 64;
pub const TABLE_REFINE_ROUNDS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParticleClass {
    MasslessBosons,
    MassiveBosons,
    MasslessFermions,
    MassiveFermions,
}

impl ParticleClass {
    pub const ALL: [ParticleClass; 4] =
        [Self::MasslessBosons, Self::MassiveBosons, Self::MasslessFermions, Self::MassiveFermions];

    pub fn label(self) -> &'static str {
        match self {
            Self::MasslessBosons => "Massless bosons",
            Self::MassiveBosons => "Massive bosons",
            Self::MasslessFermions => "Massless fermions",
            Self::MassiveFermions => "Massive fermions",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub particle: ParticleClass,
    /// Concurrence between the two targets for one incoming flying particle.
    pub concurrence: f64,
    /// Repetitions needed for a Bell violation (annotation, not simulated).
    pub repetitions: &'static str,
    /// Sequential-rotation fidelity with N ancillas, reported with the
    /// massless-fermion row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation_fidelity: Option<f64>,
}

/// Target concurrence for each class of flying particle, with N ancillas.
///
/// Massless bosons and fermions are absorbed directly; massive bosons give
/// the mixed target state with coherence γ = 1 − 1/(2N); massive fermions use
/// the ancilla-pair protocol optimized over min(N, 2) pairs.
pub fn table1_summary(n_ancilla: usize) -> Result<Vec<Table1Row>> {
    if n_ancilla == 0 {
        return Err(Error::OutOfRange { name: "n", value: 0.0, range: "[1,inf)" });
    }
    let n = n_ancilla as f64;
    let photon = massless_absorption()?.result.get("concurrence").unwrap_or(f64::NAN);
    let boson = concurrence(&rho_tp(1.0 - 1.0 / (2.0 * n))?);
    let fermion = absorption(SubsystemKind::FermionicMode)?.result.get("concurrence").unwrap_or(f64::NAN);
    let rotation = RotationProtocolParams::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), n_ancilla)?;
    let rotation_fidelity = sequential_rotation(&rotation)?.get("fidelity");
    let massive_fermion = optimize_angles(n_ancilla.min(2), TABLE_GRID_POINTS, TABLE_REFINE_ROUNDS)?.best_concurrence;

    let row = |particle, concurrence, repetitions| Table1Row { particle, concurrence, repetitions, rotation_fidelity: None };
    Ok(vec![
        row(ParticleClass::MasslessBosons, photon, "∞"),
        row(ParticleClass::MassiveBosons, boson, "∞"),
        Table1Row { rotation_fidelity, ..row(ParticleClass::MasslessFermions, fermion, "∞") },
        row(ParticleClass::MassiveFermions, massive_fermion, "N"),
    ])
}
