//! Fidelity, Wootters concurrence and the Horodecki CHSH criterion.
//!
//! Pauli convention: σ₃|g⟩ = +|g⟩, i.e. g is spin-up. Two-qubit matrices are
//! written in the ordered basis {gg, ge, eg, ee} with the left particle first.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};

use crate::hilbert::{linalg, DensityOp, PureState, SubsystemKind, SystemLayout};
use crate::{Error, Result, C64};

/// A density operator on exactly two two-dimensional subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    rho: DensityOp,
}

impl TwoQubitDensity {
    /// Validates a 4×4 matrix in the {gg, ge, eg, ee} basis, labelling the
    /// particles `L` and `R`.
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        let layout = SystemLayout::new([("L", SubsystemKind::TwoLevel), ("R", SubsystemKind::TwoLevel)])?;
        Ok(Self { rho: DensityOp::new(layout, matrix)? })
    }

    pub fn from_density(rho: DensityOp) -> Result<Self> {
        let dims: Vec<usize> = rho.layout().dims().collect();
        if dims != [2, 2] {
            return Err(Error::InvalidDensity(format!("expected two 2-level subsystems, got dimensions {dims:?}")));
        }
        rho.validate()?;
        Ok(Self { rho })
    }

    pub fn density(&self) -> &DensityOp {
        &self.rho
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.rho.matrix()
    }
}

impl TryFrom<DensityOp> for TwoQubitDensity {
    type Error = Error;

    fn try_from(rho: DensityOp) -> Result<Self> {
        Self::from_density(rho)
    }
}

/// 3×3 real matrix of Pauli correlations T_ij = Tr[ρ (σ_i ⊗ σ_j)].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTensor(pub Matrix3<f64>);

impl CorrelationTensor {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Row-major entries.
    pub fn to_array(&self) -> [[f64; 3]; 3] {
        let m = &self.0;
        [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ]
    }
}

/// The three Pauli matrices σ₁, σ₂, σ₃ in the {g, e} basis.
pub fn pauli() -> [DMatrix<C64>; 3] {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// ⟨ideal|ρ|ideal⟩, clamped into [0, 1].
pub fn fidelity(rho: &DensityOp, ideal: &PureState) -> Result<f64> {
    if rho.dim() != ideal.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: ideal.dim() });
    }
    let v = ideal.amplitudes();
    let f = v.dotc(&(rho.matrix() * v)).re;
    Ok(f.clamp(0.0, 1.0))
}

/// Wootters concurrence max(0, λ₁ − λ₂ − λ₃ − λ₄).
///
/// The λᵢ are the square roots of the eigenvalues of ρ ρ̃ with
/// ρ̃ = (σ₂⊗σ₂) ρ* (σ₂⊗σ₂). Since √ρ ρ̃ √ρ = B B† with B = √ρ (σ₂⊗σ₂) √ρ*,
/// they are the singular values of B, which avoids taking square roots of
/// eigenvalues near zero.
pub fn concurrence(rho: &TwoQubitDensity) -> f64 {
    let m = rho.matrix();
    let [_, y, _] = pauli();
    let yy = y.kronecker(&y);
    // Eigenvalues of ρ below this are rounding noise from exact zeros.
    const RANK_TOL: f64 = 1e-14;
    let sqrt_rho = linalg::hermitian_function(m, |v| C64::new(if v > RANK_TOL { v.sqrt() } else { 0.0 }, 0.0));
    let b = &sqrt_rho * yy * sqrt_rho.conjugate();
    let mut lambdas: Vec<f64> = b.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
}

/// Target-pair state ½[[0,0,0,0],[0,1,γ,0],[0,γ,1,0],[0,0,0,0]].
pub fn rho_tp(gamma: f64) -> Result<TwoQubitDensity> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::OutOfRange { name: "gamma", value: gamma, range: "[0,1]" });
    }
    let mut m = DMatrix::zeros(4, 4);
    m[(1, 1)] = C64::new(0.5, 0.0);
    m[(2, 2)] = C64::new(0.5, 0.0);
    m[(1, 2)] = C64::new(0.5 * gamma, 0.0);
    m[(2, 1)] = C64::new(0.5 * gamma, 0.0);
    TwoQubitDensity::from_matrix(m)
}

pub fn correlation_tensor(rho: &TwoQubitDensity) -> CorrelationTensor {
    let sigma = pauli();
    let m = rho.matrix();
    CorrelationTensor(Matrix3::from_fn(|i, j| (m * sigma[i].kronecker(&sigma[j])).trace().re))
}

/// Sum of the two largest eigenvalues of TᵀT.
pub fn horodecki_m(rho: &TwoQubitDensity) -> f64 {
    let t = correlation_tensor(rho).0;
    let tt = t.transpose() * t;
    let sym = (tt + tt.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev[0] + ev[1]
}

/// Whether some CHSH setting violates the Bell inequality: M(ρ) > 1.
pub fn chsh_violated(rho: &TwoQubitDensity) -> bool {
    horodecki_m(rho) > 1.0
}

/// Largest CHSH expectation value reachable with optimal settings, 2√M.
pub fn max_chsh_value(rho: &TwoQubitDensity) -> f64 {
    2.0 * horodecki_m(rho).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{basis_state, compose_layout, superpose, SubsystemKind::TwoLevel, E, G};

    fn pair() -> SystemLayout {
        compose_layout([("L", TwoLevel), ("R", TwoLevel)]).unwrap()
    }

    fn bell() -> PureState {
        let l = pair();
        let one = C64::new(1.0, 0.0);
        superpose(&[(one, &basis_state(&l, &[G, E]).unwrap()), (one, &basis_state(&l, &[E, G]).unwrap())]).unwrap()
    }

    #[test]
    fn fidelity_cases() {
        let b = bell();
        assert!((fidelity(&b.to_density(), &b).unwrap() - 1.0).abs() < 1e-15);
        let q = compose_layout([("T", TwoLevel)]).unwrap();
        let mixed = DensityOp::maximally_mixed(q.clone());
        let any = superpose(&[
            (C64::new(0.3, 0.2), &basis_state(&q, &[G]).unwrap()),
            (C64::new(-0.1, 0.9), &basis_state(&q, &[E]).unwrap()),
        ])
        .unwrap();
        assert!((fidelity(&mixed, &any).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(fidelity(&mixed, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn fidelity_of_rotated_mixed_state() {
        // ¼[[3, √2], [√2, 1]] against (|g⟩ + |e⟩)/√2.
        let s2 = 2f64.sqrt();
        let m = DMatrix::from_row_slice(2, 2, &[3.0, s2, s2, 1.0]).map(|x| C64::new(x / 4.0, 0.0));
        let rho = DensityOp::new(compose_layout([("T", TwoLevel)]).unwrap(), m).unwrap();
        let q = rho.layout().clone();
        let ideal = superpose(&[
            (C64::new(1.0, 0.0), &basis_state(&q, &[G]).unwrap()),
            (C64::new(1.0, 0.0), &basis_state(&q, &[E]).unwrap()),
        ])
        .unwrap();
        assert!((fidelity(&rho, &ideal).unwrap() - (2.0 + s2) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn concurrence_cases() {
        let l = pair();
        let ge = TwoQubitDensity::from_density(basis_state(&l, &[G, E]).unwrap().to_density()).unwrap();
        assert!(concurrence(&ge).abs() < 1e-12);
        let b = TwoQubitDensity::from_density(bell().to_density()).unwrap();
        assert!((concurrence(&b) - 1.0).abs() < 1e-10);
        for n in [1u32, 2, 5, 50] {
            let gamma = 1.0 - 1.0 / (2.0 * n as f64);
            assert!((concurrence(&rho_tp(gamma).unwrap()) - gamma).abs() < 1e-10);
        }
    }

    #[test]
    fn rho_tp_limits() {
        let one = rho_tp(1.0).unwrap();
        let b = bell().to_density();
        assert!((one.matrix() - b.matrix()).norm() < 1e-15);
        let zero = rho_tp(0.0).unwrap();
        assert_eq!(zero.matrix()[(1, 2)], C64::new(0.0, 0.0));
        assert_eq!(zero.matrix()[(1, 1)], C64::new(0.5, 0.0));
        let half = rho_tp(0.5).unwrap();
        assert_eq!(half.matrix()[(2, 1)], C64::new(0.25, 0.0));
        assert!(matches!(rho_tp(1.5), Err(Error::OutOfRange { name: "gamma", .. })));
        assert_eq!(rho_tp(-0.1).unwrap_err().to_string(), "gamma out of range [0,1], got -0.1");
    }

    #[test]
    fn correlation_tensor_cases() {
        for gamma in [0.0, 0.3, 1.0] {
            let t = correlation_tensor(&rho_tp(gamma).unwrap()).to_array();
            let want = [[gamma, 0.0, 0.0], [0.0, gamma, 0.0], [0.0, 0.0, -1.0]];
            for i in 0..3 {
                for j in 0..3 {
                    assert!((t[i][j] - want[i][j]).abs() < 1e-15, "{gamma} {i}{j}");
                }
            }
        }
        let mixed = TwoQubitDensity::from_density(DensityOp::maximally_mixed(pair())).unwrap();
        assert!(correlation_tensor(&mixed).0.norm() < 1e-15);
        assert_eq!(horodecki_m(&mixed), 0.0);
        assert!(!chsh_violated(&mixed));
    }

    #[test]
    fn product_state_tensor_factorizes() {
        let q = compose_layout([("L", TwoLevel)]).unwrap();
        let r = compose_layout([("R", TwoLevel)]).unwrap();
        let a = superpose(&[
            (C64::new(0.8, 0.0), &basis_state(&q, &[G]).unwrap()),
            (C64::new(0.0, 0.6), &basis_state(&q, &[E]).unwrap()),
        ])
        .unwrap();
        let b = superpose(&[
            (C64::new(0.5, 0.5), &basis_state(&r, &[G]).unwrap()),
            (C64::new(0.7, -0.1), &basis_state(&r, &[E]).unwrap()),
        ])
        .unwrap();
        let rho = TwoQubitDensity::from_density(a.tensor(&b).unwrap().to_density()).unwrap();
        let t = correlation_tensor(&rho);
        let sigma = pauli();
        let ea: Vec<f64> = sigma.iter().map(|s| a.amplitudes().dotc(&(s * a.amplitudes())).re).collect();
        let eb: Vec<f64> = sigma.iter().map(|s| b.amplitudes().dotc(&(s * b.amplitudes())).re).collect();
        for i in 0..3 {
            for j in 0..3 {
                assert!((t.get(i, j) - ea[i] * eb[j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn horodecki_on_benchmark_states() {
        for k in 0..=10 {
            let gamma = k as f64 / 10.0;
            let rho = rho_tp(gamma).unwrap();
            assert!((horodecki_m(&rho) - (1.0 + gamma * gamma)).abs() < 1e-10);
            assert_eq!(chsh_violated(&rho), gamma > 0.0);
        }
        let b = TwoQubitDensity::from_density(bell().to_density()).unwrap();
        assert!((horodecki_m(&b) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_shapes() {
        let l = compose_layout([("T", TwoLevel)]).unwrap();
        assert!(TwoQubitDensity::from_density(DensityOp::maximally_mixed(l)).is_err());
    }
}
