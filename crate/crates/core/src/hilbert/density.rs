use nalgebra::DMatrix;

use super::layout::{Split, SystemLayout};
use super::linalg;
use crate::{Error, Result, C64};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    layout: SystemLayout,
    matrix: DMatrix<C64>,
}

impl DensityOp {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(layout: SystemLayout, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = layout.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: matrix.nrows() });
        }
        validate(&matrix)?;
        Ok(Self { layout, matrix })
    }

    pub(crate) fn from_parts_unchecked(layout: SystemLayout, matrix: DMatrix<C64>) -> Self {
        Self { layout, matrix }
    }

    /// I/d on `layout`.
    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let d = layout.dim();
        Self { layout, matrix: DMatrix::identity(d, d).unscale(d as f64) }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn tensor(&self, other: &DensityOp) -> Result<DensityOp> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self { layout, matrix: self.matrix.kronecker(&other.matrix) })
    }

    /// Traces out every subsystem not named in `keep`. The result keeps the
    /// layout order of the surviving subsystems.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityOp> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let reduced_layout = self.layout.restrict(keep)?;
        let mut positions = self.layout.positions(keep)?;
        positions.sort_unstable();
        let split = Split::new(&self.layout, &positions);
        let k = split.kept_offsets.len();
        let m = DMatrix::from_fn(k, k, |i, j| {
            let (oi, oj) = (split.kept_offsets[i], split.kept_offsets[j]);
            split
                .traced_offsets
                .iter()
                .map(|&t| self.matrix[(oi + t, oj + t)])
                .sum()
        });
        Ok(Self { layout: reduced_layout, matrix: m })
    }

    /// ρ ↦ U ρ U†
    pub fn conjugate_by(&self, unitary: &DMatrix<C64>) -> Result<DensityOp> {
        if unitary.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: unitary.nrows() });
        }
        Ok(Self { layout: self.layout.clone(), matrix: unitary * &self.matrix * unitary.adjoint() })
    }

    /// Re-runs the validity checks (useful after long chains of operations).
    pub fn validate(&self) -> Result<()> {
        validate(&self.matrix)
    }
}

fn validate(m: &DMatrix<C64>) -> Result<()> {
    let herm = linalg::hermiticity_error(m);
    if herm > HERMITIAN_TOL {
        return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidDensity(format!("trace {tr} is not 1")));
    }
    let min = linalg::eigvalsh(m).first().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Free-function form of [`DensityOp::partial_trace`].
pub fn partial_trace(rho: &DensityOp, keep: &[&str]) -> Result<DensityOp> {
    rho.partial_trace(keep)
}

/// Trace distance ½‖a − b‖₁ between two density operators on the same layout.
pub fn trace_distance(a: &DensityOp, b: &DensityOp) -> Result<f64> {
    if a.layout != b.layout {
        return Err(Error::LayoutMismatch);
    }
    Ok(0.5 * linalg::trace_norm_hermitian(&(&a.matrix - &b.matrix)))
}
