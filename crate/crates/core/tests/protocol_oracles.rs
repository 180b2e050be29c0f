use std::f64::consts::{FRAC_PI_2, PI};

use modent::dynamics::{evolve, jc_hamiltonian, CouplingSpec};
use modent::entanglement::fidelity;
use modent::hilbert::{basis_state, SubsystemKind, SystemLayout};
use modent::protocols::*;
use modent::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_amplitudes(rng: &mut ChaCha8Rng) -> (C64, C64) {
    let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (c(v[0] / n, v[1] / n), c(v[2] / n, v[3] / n))
}

fn max_elementwise(a: &nalgebra::DMatrix<C64>, b: &nalgebra::DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn single_ancilla_simulation_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let (a, b) = random_amplitudes(&mut rng);
        let out = single_ancilla_rotation(a, b).unwrap();
        assert!(max_elementwise(out.simulated.matrix(), out.analytic.matrix()) < 1e-10);
    }
}

/// Every ancilla kept in the state vector; the target couples to them one
/// at a time and nothing is traced until the end.
fn full_sequential(alpha: C64, beta: C64, n: usize, tau: f64) -> nalgebra::DMatrix<C64> {
    let mut subs = vec![("T".to_owned(), SubsystemKind::TwoLevel)];
    subs.extend((1..=n).map(|k| (format!("A{k}"), SubsystemKind::FermionicMode)));
    let layout = SystemLayout::new(subs).unwrap();
    let levels = |t: usize, occupied: &[usize]| {
        let mut l = vec![t];
        l.extend_from_slice(occupied);
        l
    };
    // α|g⟩ + β|e⟩ times ⊗ₖ(|0⟩ + |1⟩)/√2, written out over all 2^n occupations.
    let mut amps = nalgebra::DVector::zeros(layout.dim());
    let w = 0.5f64.powf(n as f64 / 2.0);
    for mask in 0..(1usize << n) {
        let occ: Vec<usize> = (0..n).map(|k| (mask >> (n - 1 - k)) & 1).collect();
        amps[layout.index_of(&levels(0, &occ)).unwrap()] = alpha * w;
        amps[layout.index_of(&levels(1, &occ)).unwrap()] = beta * w;
    }
    let mut psi = modent::hilbert::PureState::from_amplitudes(layout.clone(), amps).unwrap();
    for k in 1..=n {
        let h = jc_hamiltonian(&layout, &CouplingSpec::new("T", [format!("A{k}")], 1.0).unwrap()).unwrap();
        psi = evolve(&psi, &h, tau).unwrap();
    }
    psi.reduced_density(&["T"]).unwrap().matrix().clone()
}

#[test]
fn channel_matches_full_state_vector() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in 1..=5 {
        let (a, b) = random_amplitudes(&mut rng);
        let p = RotationProtocolParams::new(a, b, n).unwrap();
        let channel = sequential_rotation_states(&p).unwrap();
        let full = full_sequential(a, b, n, p.step_duration());
        assert!(max_elementwise(channel.last().unwrap().matrix(), &full) < 1e-12, "n={n}");
    }
}

#[test]
fn channel_keeps_valid_states_at_every_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20 {
        let (a, b) = random_amplitudes(&mut rng);
        let p = RotationProtocolParams::new(a, b, rng.gen_range(1..40)).unwrap();
        for rho in sequential_rotation_states(&p).unwrap() {
            assert!((rho.trace() - c(1.0, 0.0)).norm() < 1e-10);
            assert!(rho.eigenvalues()[0] > -1e-10);
        }
    }
}

#[test]
fn one_ancilla_rotation_fidelity() {
    let r = sequential_rotation(&RotationProtocolParams::new(c(1.0, 0.0), c(0.0, 0.0), 1).unwrap()).unwrap();
    assert!((r.get("fidelity").unwrap() - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
}

#[test]
fn collective_mode_reproduces_simultaneous_coupling() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for n in 1..=4 {
        let (a, b) = random_amplitudes(&mut rng);
        let r = simultaneous_coupling_check_for(n, a, b).unwrap();
        assert!(r.get("trace_distance").unwrap() < 1e-10, "n={n}");
        assert!(r.get("fidelity_gain").unwrap().abs() < 1e-10);
    }
}

#[test]
fn one_pair_concurrence_is_half_sin_squared() {
    // Only the branch where both sides swapped into their ancillas keeps
    // the targets coherent: C(θ) = sin²θ / 2.
    for k in 0..=20 {
        let theta = PI * k as f64 / 20.0;
        let out = massive_fermion_protocol(&FermionProtocolParams::from_radians(&[theta]).unwrap()).unwrap();
        let expect = theta.sin().powi(2) / 2.0;
        assert!((out.concurrence - expect).abs() < 1e-10, "θ={theta}: {} vs {expect}", out.concurrence);
    }
}

#[test]
fn paired_protocol_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..200 {
        let t1 = rng.gen_range(0.0..PI);
        let t2 = rng.gen_range(0.0..PI);
        let p = FermionProtocolParams::from_radians(&[t1, t2]).unwrap();
        let l = massive_fermion_state(&p, SideOrder::LeftFirst).unwrap();
        let r = massive_fermion_state(&p, SideOrder::RightFirst).unwrap();
        assert!((l.amplitudes() - r.amplitudes()).norm() < 1e-12);
        let a = massive_fermion_protocol(&p).unwrap().concurrence;
        let b = massive_fermion_protocol(&FermionProtocolParams::from_radians(&[t2, t1]).unwrap()).unwrap().concurrence;
        assert!((a - b).abs() < 1e-10);
        assert!(a <= 0.5 + 1e-9);
    }
    for n in 1..=3 {
        let zero = FermionProtocolParams::from_radians(&vec![0.0; n]).unwrap();
        assert!(massive_fermion_protocol(&zero).unwrap().concurrence.abs() < 1e-12);
    }
    let idle_first = FermionProtocolParams::from_radians(&[0.0, FRAC_PI_2]).unwrap();
    assert!((massive_fermion_protocol(&idle_first).unwrap().concurrence - 0.5).abs() < 1e-12);
}

#[test]
fn angle_search_optima() {
    let one = optimize_angles(1, 32, 4).unwrap();
    assert!((one.best_angles[0] - FRAC_PI_2).abs() < 1e-3);
    assert!((one.best_concurrence - 0.5).abs() < 1e-9);

    let two = optimize_angles(2, 24, 3).unwrap();
    let grid_max = two.grid.column("concurrence").unwrap().into_iter().fold(0.0, f64::max);
    assert!(grid_max <= 0.5 + 1e-9 && two.best_concurrence <= 0.5 + 1e-9);
    assert!((two.best_concurrence - 0.5).abs() < 1e-9);
    // The grid surface is symmetric under θ₁ ↔ θ₂.
    let n = 24;
    let col = two.grid.column("concurrence").unwrap();
    for i in 0..n {
        for j in 0..n {
            assert!((col[i * n + j] - col[j * n + i]).abs() < 1e-10);
        }
    }
}

#[test]
fn angle_search_is_deterministic() {
    let a = optimize_angles(2, 12, 2).unwrap();
    let b = optimize_angles(2, 12, 2).unwrap();
    assert_eq!(a, b);
}

#[test]
fn absorption_leaves_flying_modes_empty() {
    let out = massless_absorption().unwrap();
    assert!(out.result.get("occupation_fly_L").unwrap().abs() < 1e-12);
    assert!(out.result.get("occupation_fly_R").unwrap().abs() < 1e-12);
    assert!((out.result.get("concurrence").unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn coherent_field_rotation_improves_with_amplitude() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..10 {
        let (a, b) = random_amplitudes(&mut rng);
        let f4 = coherent_field_rotation(a, b, c(4.0, 0.0), None).unwrap().get("fidelity").unwrap();
        let f8 = coherent_field_rotation(a, b, c(8.0, 0.0), None).unwrap().get("fidelity").unwrap();
        assert!(f8 > 0.95, "{f8}");
        assert!(f8 >= f4 - 1e-12, "{f8} < {f4}");
    }
    // No field, no interaction: the fidelity is that of the initial state.
    let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
    let r = coherent_field_rotation(a, b, c(0.0, 0.0), None).unwrap();
    let rho = target_state(a, b).unwrap().to_density();
    let expect = fidelity(&rho, &ideal_rotated_state(a, b).unwrap()).unwrap();
    assert!((r.get("fidelity").unwrap() - expect).abs() < 1e-12);
}

#[test]
fn table_rows_for_several_n() {
    for n in [1usize, 5, 50] {
        let rows = table1_summary(n).unwrap();
        assert!((rows[0].concurrence - 1.0).abs() < 1e-10);
        assert!((rows[1].concurrence - (1.0 - 1.0 / (2.0 * n as f64))).abs() < 1e-10);
        assert!((rows[3].concurrence - 0.5).abs() < 1e-9);
    }
}

#[test]
fn experiment_results_reject_non_finite_values() {
    let r = ExperimentResult::new("x").scalar("bad", f64::NAN).validated();
    assert!(r.is_err());
    let layout = SystemLayout::single("T", SubsystemKind::TwoLevel).unwrap();
    assert!(basis_state(&layout, &[2]).is_err());
}
