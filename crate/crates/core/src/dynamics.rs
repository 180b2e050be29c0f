//! Exchange Hamiltonians, the controlled mixing unitary and time evolution.
//!
//! All energies are in units of the coupling J with ħ = 1.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::hilbert::{
    annihilation, embed_operator, linalg, sigma_minus, sigma_plus, tensor_op, LinearOp, PureState,
    SubsystemKind, SystemLayout,
};
use crate::{Error, Result, C64};

/// Maximum Hermiticity defect accepted by [`evolve`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A two-level particle coupled to one or more field modes with strength J.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSpec {
    qubit: String,
    modes: Vec<String>,
    strength: f64,
}

impl CouplingSpec {
    pub fn new<S: Into<String>>(
        qubit: impl Into<String>,
        modes: impl IntoIterator<Item = S>,
        strength: f64,
    ) -> Result<Self> {
        let qubit = qubit.into();
        let modes: Vec<String> = modes.into_iter().map(Into::into).collect();
        if modes.is_empty() {
            return Err(Error::InvalidParameters("coupling needs at least one mode".into()));
        }
        if !(strength > 0.0 && strength.is_finite()) {
            return Err(Error::OutOfRange { name: "J", value: strength, range: "(0, ∞)" });
        }
        for (i, m) in modes.iter().enumerate() {
            if *m == qubit || modes[..i].contains(m) {
                return Err(Error::DuplicateLabel(m.clone()));
            }
        }
        Ok(Self { qubit, modes, strength })
    }

    /// Single-mode coupling with J = 1.
    pub fn unit(qubit: impl Into<String>, mode: impl Into<String>) -> Result<Self> {
        Self::new(qubit, [mode.into()], 1.0)
    }

    pub fn qubit(&self) -> &str {
        &self.qubit
    }

    pub fn modes(&self) -> &[String] {
        &self.modes
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }
}

/// Mixing angle θ ∈ [0, π].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MixingAngle(f64);

impl MixingAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange { name: "theta", value: theta, range: "[0, π]" });
        }
        Ok(Self(theta))
    }

    pub const ZERO: MixingAngle = MixingAngle(0.0);
    pub const HALF_PI: MixingAngle = MixingAngle(PI / 2.0);

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// J(iσ₊a − iσ₋a†) on the two-subsystem layout `[qubit, mode]`.
fn exchange_term(qubit: &str, mode: &str, mode_kind: SubsystemKind, strength: f64) -> Result<LinearOp> {
    let a = annihilation(mode, mode_kind)?;
    let raise = tensor_op(&sigma_plus(qubit), &a)?;
    let lower = tensor_op(&sigma_minus(qubit), &a.adjoint())?;
    let i = C64::new(0.0, strength);
    raise.scale(i).try_add(&lower.scale(-i))
}

fn check_kinds(layout: &SystemLayout, spec: &CouplingSpec) -> Result<Vec<SubsystemKind>> {
    if layout.kind(&spec.qubit)? != SubsystemKind::TwoLevel {
        return Err(Error::WrongSubsystemKind { label: spec.qubit.clone(), expected: "a two-level particle" });
    }
    spec.modes
        .iter()
        .map(|m| {
            let k = layout.kind(m)?;
            if k.is_mode() {
                Ok(k)
            } else {
                Err(Error::WrongSubsystemKind { label: m.clone(), expected: "a field mode" })
            }
        })
        .collect()
}

/// Single-mode exchange Hamiltonian H = J(iσ₊a − iσ₋a†) embedded in `layout`.
///
/// It conserves the total excitation number (qubit excitation plus mode
/// occupation). For a hard-core mode, on the ordered pair {|g,1⟩, |e,0⟩} it is
/// the block J·[[0, −i], [i, 0]].
pub fn jc_hamiltonian(layout: &SystemLayout, spec: &CouplingSpec) -> Result<LinearOp> {
    if spec.modes.len() != 1 {
        return Err(Error::InvalidParameters(format!(
            "single-mode Hamiltonian needs exactly one mode, got {}",
            spec.modes.len()
        )));
    }
    collective_jc_hamiltonian(layout, spec)
}

/// J Σₖ (iσ₊aₖ − iσ₋aₖ†): the qubit coupled simultaneously and equally to
/// every listed mode.
pub fn collective_jc_hamiltonian(layout: &SystemLayout, spec: &CouplingSpec) -> Result<LinearOp> {
    let kinds = check_kinds(layout, spec)?;
    let mut h = LinearOp::zeros(layout.clone());
    for (mode, kind) in spec.modes.iter().zip(kinds) {
        let local = exchange_term(&spec.qubit, mode, kind, spec.strength)?;
        h = h.try_add(&embed_operator(layout, &local, &[&spec.qubit, mode])?)?;
    }
    Ok(h)
}

/// Cached eigendecomposition of a Hermitian Hamiltonian for repeated
/// evaluation of exp(−iHt).
#[derive(Debug, Clone)]
pub struct Propagator {
    layout: SystemLayout,
    energies: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl Propagator {
    pub fn new(h: &LinearOp) -> Result<Self> {
        let err = h.hermiticity_error();
        if err > HERMITIAN_TOL {
            return Err(Error::NotHermitian(err));
        }
        let (energies, vectors) = linalg::eigh(h.matrix());
        Ok(Self { layout: h.layout().clone(), energies, vectors })
    }

    /// exp(−iHt) as a dense matrix.
    pub fn unitary(&self, t: f64) -> LinearOp {
        let n = self.energies.len();
        let mut scaled = self.vectors.clone();
        for (c, &e) in self.energies.iter().enumerate() {
            let phase = C64::from_polar(1.0, -e * t);
            for r in 0..n {
                scaled[(r, c)] *= phase;
            }
        }
        LinearOp::new(self.layout.clone(), scaled * self.vectors.adjoint()).expect("layout dimension")
    }

    /// exp(−iHt)|ψ⟩ via the eigenbasis, without forming the full unitary.
    pub fn evolve(&self, state: &PureState, t: f64) -> Result<PureState> {
        if state.layout() != &self.layout {
            return Err(layout_error(&self.layout, state.layout()));
        }
        let coeffs = self.vectors.adjoint() * state.amplitudes();
        let rotated = DVector::from_iterator(
            coeffs.len(),
            coeffs.iter().zip(&self.energies).map(|(c, &e)| c * C64::from_polar(1.0, -e * t)),
        );
        PureState::from_amplitudes(self.layout.clone(), &self.vectors * rotated)
    }
}

fn layout_error(expected: &SystemLayout, got: &SystemLayout) -> Error {
    if expected.dim() != got.dim() {
        Error::DimensionMismatch { expected: expected.dim(), got: got.dim() }
    } else {
        Error::LayoutMismatch
    }
}

/// exp(−iHt)|ψ⟩ computed through the eigendecomposition of the Hermitian `h`.
pub fn evolve(state: &PureState, h: &LinearOp, t: f64) -> Result<PureState> {
    if state.layout() != h.layout() {
        return Err(layout_error(h.layout(), state.layout()));
    }
    Propagator::new(h)?.evolve(state, t)
}

/// exp(−iHt) for a Hermitian `h`.
pub fn propagator(h: &LinearOp, t: f64) -> Result<LinearOp> {
    Ok(Propagator::new(h)?.unitary(t))
}

/// The 8×8 local block of the controlled mixing unitary on `[qubit, flying, ancilla]`.
///
/// It rotates the ordered pair {|e,1,0⟩, |e,0,1⟩} by
/// `[[cos θ, −sin θ], [sin θ, cos θ]]` and leaves every other basis state fixed.
pub fn mixing_block(angle: MixingAngle) -> DMatrix<C64> {
    // Row-major over (qubit, flying, ancilla): |e,1,0⟩ = 6, |e,0,1⟩ = 5.
    const E10: usize = 6;
    const E01: usize = 5;
    let (s, c) = angle.radians().sin_cos();
    let mut u = DMatrix::identity(8, 8);
    u[(E10, E10)] = C64::new(c, 0.0);
    u[(E01, E10)] = C64::new(s, 0.0);
    u[(E10, E01)] = C64::new(-s, 0.0);
    u[(E01, E01)] = C64::new(c, 0.0);
    u
}

pub(crate) fn check_mixing_kinds(layout: &SystemLayout, qubit: &str, flying: &str, ancilla: &str) -> Result<()> {
    if layout.kind(qubit)? != SubsystemKind::TwoLevel {
        return Err(Error::WrongSubsystemKind { label: qubit.into(), expected: "a two-level particle" });
    }
    for m in [flying, ancilla] {
        if layout.kind(m)? != SubsystemKind::FermionicMode {
            return Err(Error::WrongSubsystemKind { label: m.into(), expected: "a fermionic mode" });
        }
    }
    Ok(())
}

/// Controlled mixing unitary embedded in `layout`.
pub fn controlled_mixing_unitary(
    layout: &SystemLayout,
    qubit: &str,
    flying: &str,
    ancilla: &str,
    angle: MixingAngle,
) -> Result<LinearOp> {
    check_mixing_kinds(layout, qubit, flying, ancilla)?;
    let local_layout = SystemLayout::new([
        (qubit, SubsystemKind::TwoLevel),
        (flying, SubsystemKind::FermionicMode),
        (ancilla, SubsystemKind::FermionicMode),
    ])?;
    let local = LinearOp::new(local_layout, mixing_block(angle))?;
    embed_operator(layout, &local, &[qubit, flying, ancilla])
}

/// Normalized collective lowering operator b = Σₖ aₖ/√N restricted to the
/// permutation-symmetric states of `n_modes` hard-core modes.
///
/// The symmetric subspace is spanned by |n⟩ (n excitations shared
/// symmetrically), so b acts as an (N+1)-level ladder with
/// b|n⟩ = √(n(N−n+1)/N) |n−1⟩. The mode is carried by a subsystem of
/// dimension N+1.
pub fn collective_ladder(label: &str, n_modes: usize) -> Result<LinearOp> {
    if n_modes == 0 {
        return Err(Error::InvalidParameters("collective mode needs at least one mode".into()));
    }
    let layout = SystemLayout::single(label, SubsystemKind::bosonic(n_modes)?)?;
    let d = n_modes + 1;
    let nf = n_modes as f64;
    let m = DMatrix::from_fn(d, d, |r, c| {
        if c == r + 1 {
            C64::new(((c as f64) * (nf - c as f64 + 1.0) / nf).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    LinearOp::new(layout, m)
}

/// The product state ⊗ₖ (c₀|0⟩ + c₁|1⟩) over `n_modes` modes, written in the
/// symmetric basis used by [`collective_ladder`].
pub fn symmetric_product_state(label: &str, n_modes: usize, c0: C64, c1: C64) -> Result<PureState> {
    let layout = SystemLayout::single(label, SubsystemKind::bosonic(n_modes.max(1))?)?;
    let mut binom = 1.0f64;
    let amps = DVector::from_iterator(
        n_modes + 1,
        (0..=n_modes).map(|n| {
            if n > 0 {
                binom *= (n_modes - n + 1) as f64 / n as f64;
            }
            c0.powu((n_modes - n) as u32) * c1.powu(n as u32) * binom.sqrt()
        }),
    );
    PureState::normalized(layout, amps)
}

/// Exchange Hamiltonian between a qubit and the collective mode of
/// [`collective_ladder`], with effective strength J√N.
pub fn collective_mode_hamiltonian(layout: &SystemLayout, qubit: &str, mode: &str, n_modes: usize, strength: f64) -> Result<LinearOp> {
    if layout.kind(qubit)? != SubsystemKind::TwoLevel {
        return Err(Error::WrongSubsystemKind { label: qubit.into(), expected: "a two-level particle" });
    }
    let b = collective_ladder(mode, n_modes)?;
    let expected = n_modes + 1;
    let got = layout.kind(mode)?.dim();
    if got != expected {
        return Err(Error::DimensionMismatch { expected, got });
    }
    let raise = tensor_op(&sigma_plus(qubit), &b)?;
    let lower = tensor_op(&sigma_minus(qubit), &b.adjoint())?;
    let i = C64::new(0.0, strength * (n_modes as f64).sqrt());
    let local = raise.scale(i).try_add(&lower.scale(-i))?;
    embed_operator(layout, &local, &[qubit, mode])
}
