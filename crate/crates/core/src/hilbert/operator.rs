use std::ops::{Add, Mul};

use nalgebra::DMatrix;

use super::layout::{Split, SubsystemKind, SystemLayout};
use super::linalg;
use crate::{Error, Result, C64};

/// Dense complex matrix acting on a [`SystemLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    layout: SystemLayout,
    matrix: DMatrix<C64>,
}

impl LinearOp {
    pub fn new(layout: SystemLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = layout.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: if matrix.nrows() != dim { matrix.nrows() } else { matrix.ncols() },
            });
        }
        Ok(Self { layout, matrix })
    }

    pub fn identity(layout: SystemLayout) -> Self {
        let dim = layout.dim();
        Self { layout, matrix: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(layout: SystemLayout) -> Self {
        let dim = layout.dim();
        Self { layout, matrix: DMatrix::zeros(dim, dim) }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self { layout: self.layout.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { layout: self.layout.clone(), matrix: self.matrix.map(|z| z * s) }
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::hermiticity_error(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Product `self · rhs` on a shared layout.
    pub fn compose(&self, rhs: &LinearOp) -> Result<LinearOp> {
        if self.layout != rhs.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(Self { layout: self.layout.clone(), matrix: &self.matrix * &rhs.matrix })
    }

    pub fn try_add(&self, rhs: &LinearOp) -> Result<LinearOp> {
        if self.layout != rhs.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(Self { layout: self.layout.clone(), matrix: &self.matrix + &rhs.matrix })
    }

    /// `[self, rhs]`
    pub fn commutator(&self, rhs: &LinearOp) -> Result<LinearOp> {
        if self.layout != rhs.layout {
            return Err(Error::LayoutMismatch);
        }
        let m = &self.matrix * &rhs.matrix - &rhs.matrix * &self.matrix;
        Ok(Self { layout: self.layout.clone(), matrix: m })
    }

    /// Largest elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix)
    }
}

impl Add for &LinearOp {
    type Output = LinearOp;

    /// Panics on layout mismatch; use [`LinearOp::try_add`] for a fallible sum.
    fn add(self, rhs: &LinearOp) -> LinearOp {
        self.try_add(rhs).expect("adding operators on different layouts")
    }
}

impl Mul for &LinearOp {
    type Output = LinearOp;

    /// Panics on layout mismatch; use [`LinearOp::compose`] for a fallible product.
    fn mul(self, rhs: &LinearOp) -> LinearOp {
        self.compose(rhs).expect("multiplying operators on different layouts")
    }
}

/// Kronecker product `a ⊗ b` on the concatenated layout.
pub fn tensor_op(a: &LinearOp, b: &LinearOp) -> Result<LinearOp> {
    let layout = a.layout.concat(&b.layout)?;
    Ok(LinearOp { layout, matrix: a.matrix.kronecker(&b.matrix) })
}

/// Lifts `local` to act on the `targets` of `layout` and as the identity on
/// every other subsystem.
///
/// The local basis is row-major over `targets` in the order given, so a local
/// operator built on a layout `[x, y]` may be embedded with `targets = [x, y]`
/// regardless of where x and y sit in `layout`.
pub fn embed_operator(layout: &SystemLayout, local: &LinearOp, targets: &[&str]) -> Result<LinearOp> {
    let positions = layout.positions(targets)?;
    let local_dim: usize = positions.iter().map(|&p| layout.dim_at(p)).product();
    if local_dim != local.dim() {
        return Err(Error::DimensionMismatch { expected: local_dim, got: local.dim() });
    }
    let split = Split::new(layout, &positions);
    let dim = layout.dim();
    let mut full = DMatrix::zeros(dim, dim);
    for (c, &kc) in split.kept_offsets.iter().enumerate() {
        for (r, &kr) in split.kept_offsets.iter().enumerate() {
            let v = local.matrix[(r, c)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            for &t in &split.traced_offsets {
                full[(kr + t, kc + t)] = v;
            }
        }
    }
    Ok(LinearOp { layout: layout.clone(), matrix: full })
}

/// Raising operator σ₊ = |e⟩⟨g| on a single two-level subsystem.
pub fn sigma_plus(label: &str) -> LinearOp {
    let layout = SystemLayout::single(label, SubsystemKind::TwoLevel).expect("valid single layout");
    let mut m = DMatrix::zeros(2, 2);
    m[(1, 0)] = C64::new(1.0, 0.0);
    LinearOp { layout, matrix: m }
}

/// Lowering operator σ₋ = |g⟩⟨e|.
pub fn sigma_minus(label: &str) -> LinearOp {
    sigma_plus(label).adjoint()
}

/// Annihilation operator on a single mode.
///
/// Bosonic modes use a|n⟩ = √n |n−1⟩ truncated at the cutoff; hard-core
/// fermionic modes use a = |0⟩⟨1|.
pub fn annihilation(label: &str, kind: SubsystemKind) -> Result<LinearOp> {
    if !kind.is_mode() {
        return Err(Error::WrongSubsystemKind { label: label.into(), expected: "a field mode" });
    }
    let layout = SystemLayout::single(label, kind)?;
    let d = kind.dim();
    let m = DMatrix::from_fn(d, d, |r, c| {
        if c == r + 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(LinearOp { layout, matrix: m })
}

/// Occupation number operator of a single mode, or |e⟩⟨e| for a two-level particle.
pub fn number(label: &str, kind: SubsystemKind) -> Result<LinearOp> {
    let layout = SystemLayout::single(label, kind)?;
    let d = kind.dim();
    let m = DMatrix::from_fn(d, d, |r, c| {
        if r == c {
            C64::new(r as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(LinearOp { layout, matrix: m })
}
