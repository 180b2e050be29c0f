//! End-to-end experiments: absorption of a delocalized flying particle,
//! ancilla-assisted rotations of a target particle, simultaneous versus
//! sequential coupling, the massive-fermion ancilla-pair protocol with its
//! angle search, and the four-class summary table.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::hilbert::{basis_state, superpose, PureState, SubsystemKind, SystemLayout, G, E};
use crate::{Error, Result, C64};

mod absorption;
mod collective;
mod fermion;
mod rotation;
mod table;

pub use absorption::{absorption, massless_absorption, AbsorptionOutcome};
pub use collective::{simultaneous_coupling_check, simultaneous_coupling_check_for, MAX_SIMULTANEOUS_MODES};
pub use fermion::{
    massive_fermion_protocol, massive_fermion_state, optimize_angles, AngleSearch, FermionOutcome,
    FermionProtocolParams, SideOrder, MAX_GRID_CELLS, MAX_PAIRS, TIE_TOL,
};
pub use rotation::{
    coherent_field_rotation, rotated_state_closed_form, sequential_rotation, sequential_rotation_states,
    single_ancilla_rotation, RotationChannel, RotationOutcome, RotationProtocolParams, MAX_TRUNCATION_WEIGHT,
};
pub use table::{table1_summary, ParticleClass, Table1Row, TABLE_GRID_POINTS, TABLE_REFINE_ROUNDS};

/// Coupling strength used by every protocol. Times are in units of 1/J.
pub const J: f64 = 1.0;

/// Label of the single target particle in rotation experiments.
pub const TARGET: &str = "T";

/// Named outputs of one protocol run together with the parameters that
/// produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub scalars: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<Series>,
}

/// Tabular numeric data, one row per sample point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

impl ExperimentResult {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), params: BTreeMap::new(), scalars: BTreeMap::new(), flags: BTreeMap::new(), series: None }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn scalar(mut self, key: &str, value: f64) -> Self {
        self.scalars.insert(key.to_owned(), value);
        self
    }

    pub fn flag(mut self, key: &str, value: bool) -> Self {
        self.flags.insert(key.to_owned(), value);
        self
    }

    pub fn with_series(mut self, series: Series) -> Self {
        self.series = Some(series);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.scalars.get(key).copied()
    }

    /// Every scalar and series entry must be finite.
    pub fn validated(self) -> Result<Self> {
        if let Some((k, v)) = self.scalars.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameters(format!("{}: scalar `{k}` is not finite ({v})", self.name)));
        }
        if let Some(s) = &self.series {
            if s.rows.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameters(format!("{}: series holds a non-finite value", self.name)));
            }
        }
        Ok(self)
    }
}

/// A real number as a JSON number, a complex one as a string such as `0.6+0.8i`.
pub fn complex_param(z: C64) -> Value {
    if z.im == 0.0 {
        Value::from(z.re)
    } else if z.im.is_sign_negative() {
        Value::from(format!("{}-{}i", z.re, -z.im))
    } else {
        Value::from(format!("{}+{}i", z.re, z.im))
    }
}

pub(crate) fn check_normalized(alpha: C64, beta: C64) -> Result<()> {
    let norm2 = alpha.norm_sqr() + beta.norm_sqr();
    if !norm2.is_finite() || (norm2 - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm2.sqrt()));
    }
    Ok(())
}

pub(crate) fn target_layout() -> SystemLayout {
    SystemLayout::single(TARGET, SubsystemKind::TwoLevel).expect("single two-level layout")
}

/// α|g⟩ + β|e⟩ on the target.
pub fn target_state(alpha: C64, beta: C64) -> Result<PureState> {
    check_normalized(alpha, beta)?;
    let l = target_layout();
    superpose(&[(alpha, &basis_state(&l, &[G])?), (beta, &basis_state(&l, &[E])?)])
}

/// Image of α|g⟩ + β|e⟩ under the π/2 rotation:
/// ((α − β)|g⟩ + (α + β)|e⟩)/√2.
pub fn ideal_rotated_state(alpha: C64, beta: C64) -> Result<PureState> {
    check_normalized(alpha, beta)?;
    let l = target_layout();
    superpose(&[(alpha - beta, &basis_state(&l, &[G])?), (alpha + beta, &basis_state(&l, &[E])?)])
}

/// Hard-core mode state (|0⟩ + |1⟩)/√2.
pub(crate) fn fermionic_coherent(label: &str) -> Result<PureState> {
    let l = SystemLayout::single(label, SubsystemKind::FermionicMode)?;
    let one = C64::new(1.0, 0.0);
    superpose(&[(one, &basis_state(&l, &[0])?), (one, &basis_state(&l, &[1])?)])
}
