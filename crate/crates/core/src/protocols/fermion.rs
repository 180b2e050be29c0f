use std::f64::consts::PI;

use rayon::prelude::*;

use super::{ExperimentResult, Series};
use crate::dynamics::{mixing_block, MixingAngle};
use crate::entanglement::{concurrence, TwoQubitDensity};
use crate::hilbert::{basis_state, superpose, PureState, SubsystemKind, SystemLayout, E, G};
use crate::{Error, Result, C64};

const T_L: &str = "T_L";
const T_R: &str = "T_R";
const F_L: &str = "F_L";
const F_R: &str = "F_R";

/// Largest number of ancilla pairs simulated.
pub const MAX_PAIRS: usize = 5;
/// Largest number of cells in one angle grid.
pub const MAX_GRID_CELLS: usize = 1 << 20;
/// Two concurrences closer than this count as equal during the angle search.
pub const TIE_TOL: f64 = 1e-12;

/// One mixing angle per ancilla pair, used on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionProtocolParams {
    angles: Vec<MixingAngle>,
}

impl FermionProtocolParams {
    pub fn new(angles: Vec<MixingAngle>) -> Result<Self> {
        if angles.is_empty() || angles.len() > MAX_PAIRS {
            return Err(Error::OutOfRange { name: "pairs", value: angles.len() as f64, range: "[1,5]" });
        }
        Ok(Self { angles })
    }

    pub fn from_radians(thetas: &[f64]) -> Result<Self> {
        Self::new(thetas.iter().map(|&t| MixingAngle::new(t)).collect::<Result<_>>()?)
    }

    pub fn n_pairs(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[MixingAngle] {
        &self.angles
    }
}

/// Order of the two sides within one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SideOrder {
    #[default]
    LeftFirst,
    RightFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FermionOutcome {
    pub targets: TwoQubitDensity,
    pub concurrence: f64,
}

fn ancilla_labels(j: usize) -> (String, String) {
    (format!("A_L{j}"), format!("A_R{j}"))
}

fn one_particle_two_modes(left: &str, right: &str) -> Result<PureState> {
    let l = SystemLayout::new([(left, SubsystemKind::FermionicMode), (right, SubsystemKind::FermionicMode)])?;
    let one = C64::new(1.0, 0.0);
    superpose(&[(one, &basis_state(&l, &[1, 0])?), (one, &basis_state(&l, &[0, 1])?)])
}

fn initial_state(n_pairs: usize) -> Result<PureState> {
    let core = SystemLayout::new([
        (T_L, SubsystemKind::TwoLevel),
        (T_R, SubsystemKind::TwoLevel),
        (F_L, SubsystemKind::FermionicMode),
        (F_R, SubsystemKind::FermionicMode),
    ])?;
    let one = C64::new(1.0, 0.0);
    let mut state = superpose(&[
        (one, &basis_state(&core, &[E, G, 1, 0])?),
        (one, &basis_state(&core, &[G, E, 0, 1])?),
    ])?;
    for j in 1..=n_pairs {
        let (al, ar) = ancilla_labels(j);
        state = state.tensor(&one_particle_two_modes(&al, &ar)?)?;
    }
    Ok(state)
}

/// Global state after the protocol: the targets hold (|eg⟩ + |ge⟩)/√2
/// correlated with a flying fermion, each side shares one fermion per
/// ancilla pair, and pair j is consumed by the mixing unitary at angle θⱼ on
/// the left and right triples (target, flying mode, ancilla).
pub fn massive_fermion_state(params: &FermionProtocolParams, order: SideOrder) -> Result<PureState> {
    let mut state = initial_state(params.n_pairs())?;
    for (j, angle) in params.angles().iter().enumerate() {
        let block = mixing_block(*angle);
        let (al, ar) = ancilla_labels(j + 1);
        let left = [T_L, F_L, al.as_str()];
        let right = [T_R, F_R, ar.as_str()];
        let sides = match order {
            SideOrder::LeftFirst => [left, right],
            SideOrder::RightFirst => [right, left],
        };
        for side in sides {
            state = state.apply_local(&block, &side)?;
        }
    }
    Ok(state)
}

/// Reduced target state and its concurrence after the protocol.
pub fn massive_fermion_protocol(params: &FermionProtocolParams) -> Result<FermionOutcome> {
    let state = massive_fermion_state(params, SideOrder::LeftFirst)?;
    let targets = TwoQubitDensity::from_density(state.reduced_density(&[T_L, T_R])?)?;
    let concurrence = concurrence(&targets);
    Ok(FermionOutcome { targets, concurrence })
}

fn evaluate(thetas: &[f64]) -> Result<f64> {
    Ok(massive_fermion_protocol(&FermionProtocolParams::from_radians(thetas)?)?.concurrence)
}

/// Result of [`optimize_angles`].
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSearch {
    pub best_angles: Vec<f64>,
    pub best_concurrence: f64,
    /// The full initial grid, one row per cell in lexicographic order, with
    /// columns `theta_1 .. theta_n, concurrence`.
    pub grid: Series,
    pub evaluations: usize,
}

impl AngleSearch {
    pub fn to_result(&self) -> ExperimentResult {
        let mut r = ExperimentResult::new("fermion_sweep")
            .param("pairs", self.best_angles.len())
            .scalar("best_concurrence", self.best_concurrence);
        for (i, t) in self.best_angles.iter().enumerate() {
            r = r.scalar(&format!("best_theta_{}", i + 1), *t);
        }
        r.with_series(self.grid.clone())
    }
}

/// Picks the highest value; values within [`TIE_TOL`] of it tie, and the
/// lexicographically smallest angle tuple wins.
fn select(candidates: &[(Vec<f64>, f64)]) -> (Vec<f64>, f64) {
    let max = candidates.iter().map(|(_, c)| *c).fold(f64::NEG_INFINITY, f64::max);
    candidates
        .iter()
        .filter(|(_, c)| *c >= max - TIE_TOL)
        .min_by(|(a, _), (b, _)| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal))
        .cloned()
        .expect("non-empty candidate set")
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn evaluate_all(points: Vec<Vec<f64>>) -> Result<Vec<(Vec<f64>, f64)>> {
    points.into_par_iter().map(|p| evaluate(&p).map(|c| (p, c))).collect()
}

/// Maximizes the target concurrence over the angles θ₁..θₙ ∈ [0, π].
///
/// An exhaustive grid with `grid_points` values per angle is followed by
/// `refine_rounds` rounds of local search. Each round halves the step
/// (starting from half the grid spacing) and evaluates the 3ⁿ points
/// {θ + k·step : k ∈ {−1, 0, 1}} around the incumbent, clamped to [0, π].
/// Grid cells are evaluated in parallel and gathered by index, so the result
/// does not depend on scheduling.
pub fn optimize_angles(n_pairs: usize, grid_points: usize, refine_rounds: usize) -> Result<AngleSearch> {
    if n_pairs == 0 || n_pairs > MAX_PAIRS {
        return Err(Error::OutOfRange { name: "pairs", value: n_pairs as f64, range: "[1,5]" });
    }
    if grid_points < 8 {
        return Err(Error::OutOfRange { name: "grid", value: grid_points as f64, range: "[8,inf)" });
    }
    let cells = u32::try_from(n_pairs).ok().and_then(|n| grid_points.checked_pow(n));
    if cells.map_or(true, |c| c > MAX_GRID_CELLS) {
        return Err(Error::InvalidParameters(format!(
            "grid of {grid_points}^{n_pairs} cells exceeds the limit of {MAX_GRID_CELLS}"
        )));
    }
    if refine_rounds > 60 {
        return Err(Error::OutOfRange { name: "refine", value: refine_rounds as f64, range: "[0,60]" });
    }

    let spacing = PI / (grid_points - 1) as f64;
    let axis: Vec<f64> = (0..grid_points).map(|k| if k + 1 == grid_points { PI } else { k as f64 * spacing }).collect();
    let grid = evaluate_all(cartesian(&vec![axis; n_pairs]))?;
    let mut evaluations = grid.len();
    let (mut best, mut best_c) = select(&grid);

    let mut step = spacing;
    for _ in 0..refine_rounds {
        step /= 2.0;
        let axes: Vec<Vec<f64>> = best
            .iter()
            .map(|&t| {
                let mut v: Vec<f64> = [t - step, t, t + step].iter().map(|x| x.clamp(0.0, PI)).collect();
                v.dedup();
                v
            })
            .collect();
        let local = evaluate_all(cartesian(&axes))?;
        evaluations += local.len();
        (best, best_c) = select(&local);
    }

    let mut columns: Vec<String> = (1..=n_pairs).map(|i| format!("theta_{i}")).collect();
    columns.push("concurrence".into());
    let mut series = Series::new(columns);
    for (p, c) in grid {
        let mut row = p;
        row.push(c);
        series.push(row);
    }
    Ok(AngleSearch { best_angles: best, best_concurrence: best_c, grid: series, evaluations })
}
