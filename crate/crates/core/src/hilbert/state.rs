use nalgebra::{DMatrix, DVector};

use super::density::DensityOp;
use super::layout::{Split, SubsystemKind, SystemLayout};
use super::operator::LinearOp;
use crate::{Error, Result, C64};

/// Tolerance on the Euclidean norm of every [`PureState`].
pub const NORM_TOL: f64 = 1e-12;

/// Normalized state vector over a layout's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: SystemLayout,
    amps: DVector<C64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized.
    pub fn from_amplitudes(layout: SystemLayout, amps: DVector<C64>) -> Result<Self> {
        check_len(&layout, amps.len())?;
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { layout, amps })
    }

    /// Normalizes `amps`; fails on the zero vector.
    pub fn normalized(layout: SystemLayout, amps: DVector<C64>) -> Result<Self> {
        check_len(&layout, amps.len())?;
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { layout, amps: amps.unscale(norm) })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, levels: &[usize]) -> Result<C64> {
        Ok(self.amps[self.layout.index_of(levels)?])
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// |⟨self|other⟩|, insensitive to global phase.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(PureState { layout, amps: self.amps.kronecker(&other.amps) })
    }

    pub fn to_density(&self) -> DensityOp {
        DensityOp::from_parts_unchecked(self.layout.clone(), &self.amps * self.amps.adjoint())
    }

    /// ⟨ψ|op|ψ⟩
    pub fn expectation(&self, op: &LinearOp) -> Result<C64> {
        if op.layout() != &self.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self.amps.dotc(&(op.matrix() * &self.amps)))
    }

    /// Applies an operator that must preserve the norm of this state.
    pub fn transform(&self, op: &LinearOp) -> Result<PureState> {
        if op.layout() != &self.layout {
            return Err(Error::LayoutMismatch);
        }
        let amps = op.matrix() * &self.amps;
        let norm = amps.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { layout: self.layout.clone(), amps })
    }

    /// Applies `local` to the `targets` without materialising the embedded
    /// operator. `local` must be unitary.
    pub fn apply_local(&self, local: &DMatrix<C64>, targets: &[&str]) -> Result<PureState> {
        let positions = self.layout.positions(targets)?;
        let split = Split::new(&self.layout, &positions);
        let k = split.kept_offsets.len();
        if local.nrows() != k || local.ncols() != k {
            return Err(Error::DimensionMismatch { expected: k, got: local.nrows() });
        }
        let mut out = self.amps.clone();
        let mut buf = DVector::zeros(k);
        for &t in &split.traced_offsets {
            for (i, &off) in split.kept_offsets.iter().enumerate() {
                buf[i] = self.amps[off + t];
            }
            let mapped = local * &buf;
            for (i, &off) in split.kept_offsets.iter().enumerate() {
                out[off + t] = mapped[i];
            }
        }
        let norm = out.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { layout: self.layout.clone(), amps: out })
    }

    /// Reduced density operator on `keep`, computed directly from the
    /// amplitudes. Kept subsystems retain their order in the layout.
    pub fn reduced_density(&self, keep: &[&str]) -> Result<DensityOp> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let reduced_layout = self.layout.restrict(keep)?;
        let mut positions = self.layout.positions(keep)?;
        positions.sort_unstable();
        let split = Split::new(&self.layout, &positions);
        let k = split.kept_offsets.len();
        let mut m = DMatrix::zeros(k, k);
        for &t in &split.traced_offsets {
            for (i, &oi) in split.kept_offsets.iter().enumerate() {
                let a = self.amps[oi + t];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for (j, &oj) in split.kept_offsets.iter().enumerate() {
                    m[(i, j)] += a * self.amps[oj + t].conj();
                }
            }
        }
        Ok(DensityOp::from_parts_unchecked(reduced_layout, m))
    }
}

fn check_len(layout: &SystemLayout, len: usize) -> Result<()> {
    if len != layout.dim() {
        return Err(Error::DimensionMismatch { expected: layout.dim(), got: len });
    }
    Ok(())
}

/// Computational basis state with the given level on every subsystem.
pub fn basis_state(layout: &SystemLayout, levels: &[usize]) -> Result<PureState> {
    let idx = layout.index_of(levels)?;
    let mut amps = DVector::zeros(layout.dim());
    amps[idx] = C64::new(1.0, 0.0);
    Ok(PureState { layout: layout.clone(), amps })
}

/// Normalized linear combination of states on a common layout.
pub fn superpose(terms: &[(C64, &PureState)]) -> Result<PureState> {
    let (_, first) = terms.first().ok_or(Error::ZeroVector)?;
    let layout = first.layout.clone();
    let mut amps = DVector::zeros(layout.dim());
    for (coef, state) in terms {
        if state.layout != layout {
            return Err(Error::LayoutMismatch);
        }
        amps.axpy(*coef, &state.amps, C64::new(1.0, 0.0));
    }
    PureState::normalized(layout, amps)
}

/// A truncated bosonic coherent state together with the probability weight
/// that was dropped by the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub state: PureState,
    /// Poisson weight of occupations above the cutoff.
    pub truncation_weight: f64,
}

/// Cutoff that keeps the truncation weight of a coherent state with
/// amplitude `eta` far below 1e-10.
pub fn default_cutoff(eta: C64) -> usize {
    let r = eta.norm();
    (r * r + 8.0 * r + 20.0).ceil() as usize
}

/// Coherent state ∝ Σₙ ηⁿ/√(n!) |n⟩ on a single bosonic mode, truncated at
/// `cutoff` and renormalized.
pub fn coherent_mode_state(label: &str, cutoff: usize, eta: C64) -> Result<CoherentState> {
    let kind = SubsystemKind::bosonic(cutoff)?;
    let layout = SystemLayout::single(label, kind)?;
    let r2 = eta.norm_sqr();
    if r2 == 0.0 {
        return Ok(CoherentState { state: basis_state(&layout, &[0])?, truncation_weight: 0.0 });
    }
    // Work with log|amplitude| so large |η| neither overflows nor underflows.
    let (log_r, phase) = (eta.norm().ln(), eta.arg());
    let mut log_fact = 0.0f64;
    let mut log_mags = Vec::with_capacity(cutoff + 1);
    for n in 0..=cutoff {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        log_mags.push(n as f64 * log_r - 0.5 * log_fact);
    }
    let peak = log_mags.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amps = DVector::from_iterator(
        cutoff + 1,
        log_mags
            .iter()
            .enumerate()
            .map(|(n, &lm)| C64::from_polar((lm - peak).exp(), n as f64 * phase)),
    );
    let state = PureState::normalized(layout, amps)?;
    Ok(CoherentState { state, truncation_weight: poisson_tail(r2, cutoff) })
}

/// P(n > cutoff) for a Poisson distribution with mean `mean`.
fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    let log_mean = mean.ln();
    let mut log_p = -mean;
    let mut head = 0.0;
    let mut tail = 0.0;
    let mut n = 0usize;
    loop {
        if n > 0 {
            log_p += log_mean - (n as f64).ln();
        }
        let p = log_p.exp();
        if n <= cutoff {
            head += p;
        } else {
            tail += p;
            if n as f64 > mean && p < 1e-300_f64.max(tail * 1e-17) {
                break;
            }
        }
        n += 1;
    }
    // Direct summation loses precision when the tail is the bulk.
    if tail > 0.5 {
        (1.0 - head).max(0.0)
    } else {
        tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{compose_layout, E, G};
    use SubsystemKind::*;

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn basis_kets() {
        let l = compose_layout([("fly", FermionicMode), ("T", TwoLevel)]).unwrap();
        let s = basis_state(&l, &[1, G]).unwrap();
        assert_eq!(s.amplitudes()[2], one());
        let lr = compose_layout([("L", FermionicMode), ("R", FermionicMode)]).unwrap();
        assert_eq!(basis_state(&lr, &[1, 0]).unwrap().amplitudes()[2], one());
        let t = compose_layout([("T", TwoLevel)]).unwrap();
        assert_eq!(basis_state(&t, &[E]).unwrap().amplitudes()[1], one());
        assert!(matches!(basis_state(&t, &[2]), Err(Error::LevelOutOfRange { .. })));
        assert!(matches!(basis_state(&t, &[0, 0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn superpositions() {
        let lr = compose_layout([("L", FermionicMode), ("R", FermionicMode)]).unwrap();
        let s10 = basis_state(&lr, &[1, 0]).unwrap();
        let s01 = basis_state(&lr, &[0, 1]).unwrap();
        let phi = superpose(&[(one(), &s10), (one(), &s01)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((phi.amplitudes()[2].re - h).abs() < 1e-15 && (phi.amplitudes()[1].re - h).abs() < 1e-15);

        let t = compose_layout([("T", TwoLevel)]).unwrap();
        let g = basis_state(&t, &[G]).unwrap();
        let twice = superpose(&[(C64::new(2.0, 0.0), &g)]).unwrap();
        assert_eq!(twice, g);
        assert_eq!(superpose(&[(one(), &g), (-one(), &g)]), Err(Error::ZeroVector));
        assert_eq!(superpose(&[(one(), &g), (one(), &s10)]), Err(Error::LayoutMismatch));
    }

    #[test]
    fn coherent_state_cases() {
        let vac = coherent_mode_state("m", 5, C64::new(0.0, 0.0)).unwrap();
        assert_eq!(vac.state.amplitudes()[0], one());
        assert_eq!(vac.truncation_weight, 0.0);

        // η = 1: amplitudes ∝ 1/√(n!)
        let c = coherent_mode_state("m", 10, one()).unwrap();
        let mut fact = 1.0;
        let raw: Vec<f64> = (0..=10)
            .map(|n| {
                if n > 0 {
                    fact *= n as f64;
                }
                1.0 / fact.sqrt()
            })
            .collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (n, x) in raw.iter().enumerate() {
            assert!((c.state.amplitudes()[n].re - x / norm).abs() < 1e-15);
        }

        // η = 2, cutoff 30: ⟨n⟩ = |η|² up to the truncation.
        let c = coherent_mode_state("m", 30, C64::new(2.0, 0.0)).unwrap();
        let mean: f64 = c.state.amplitudes().iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum();
        assert!((mean - 4.0).abs() < 1e-9, "{mean}");
        assert!(c.truncation_weight < 1e-12);

        assert_eq!(coherent_mode_state("m", 0, one()), Err(Error::InvalidCutoff(0)));
    }

    #[test]
    fn poisson_tail_matches_direct_sum() {
        // mean 1, cutoff 2: 1 − e⁻¹(1 + 1 + 1/2)
        let expect = 1.0 - (-1.0f64).exp() * 2.5;
        assert!((poisson_tail(1.0, 2) - expect).abs() < 1e-15);
        assert!(poisson_tail(100.0, 5) > 0.999);
    }

    #[test]
    fn reduced_density_of_bell_pair_is_mixed() {
        let l = compose_layout([("a", TwoLevel), ("b", TwoLevel)]).unwrap();
        let ge = basis_state(&l, &[G, E]).unwrap();
        let eg = basis_state(&l, &[E, G]).unwrap();
        let bell = superpose(&[(one(), &ge), (one(), &eg)]).unwrap();
        let r = bell.reduced_density(&["a"]).unwrap();
        assert!((r.matrix() - DMatrix::identity(2, 2).scale(0.5)).norm() < 1e-15);
        assert_eq!(bell.reduced_density(&[]), Err(Error::EmptyKeepSet));
    }
}
