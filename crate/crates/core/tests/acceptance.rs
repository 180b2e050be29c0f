//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! The process exits 0 so that a failing criterion is reported without
//! aborting the rest of the workspace tests; set `MODENT_ACCEPTANCE_STRICT=1`
//! to exit 1 when any criterion fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use modent::dynamics::{collective_jc_hamiltonian, jc_hamiltonian, propagator, CouplingSpec};
use modent::entanglement::{chsh_violated, concurrence, horodecki_m, rho_tp, TwoQubitDensity};
use modent::hilbert::{compose_layout, PureState, SubsystemKind};
use modent::protocols::*;
use modent::C64;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_amplitudes(rng: &mut ChaCha8Rng) -> (C64, C64) {
    let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (c(v[0] / n, v[1] / n), c(v[2] / n, v[3] / n))
}

fn ginibre(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    ginibre(rng, n).qr().q()
}

fn horodecki_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut violated = true;
    for k in 0..=10 {
        let g = k as f64 / 10.0;
        let rho = rho_tp(g).expect("γ in range");
        worst = worst.max((horodecki_m(&rho) - (1.0 + g * g)).abs());
        if g > 0.0 {
            violated &= chsh_violated(&rho);
        }
    }
    outcome(worst < 1e-10 && violated, format!("max |M - (1+γ²)| = {worst:.2e}, violated for all γ>0: {violated}"))
}

fn table_concurrences() -> Outcome {
    let mut errs = Vec::new();
    let photon = massless_absorption().expect("absorption").result.get("concurrence").unwrap_or(f64::NAN);
    let e_photon = (photon - 1.0).abs();
    let mut e_boson = 0.0f64;
    let mut e_fermion = 0.0f64;
    for n in [1usize, 5, 50] {
        let rows = table1_summary(n).expect("table");
        let gamma = 1.0 - 1.0 / (2.0 * n as f64);
        let direct = concurrence(&rho_tp(gamma).expect("γ in range"));
        e_boson = e_boson.max((direct - gamma).abs()).max((rows[1].concurrence - gamma).abs());
        e_fermion = e_fermion.max((rows[3].concurrence - 0.5).abs());
    }
    if e_photon >= 1e-10 {
        errs.push("massless bosons");
    }
    if e_boson >= 1e-10 {
        errs.push("massive bosons");
    }
    if e_fermion >= 1e-9 {
        errs.push("massive fermions");
    }
    outcome(
        errs.is_empty(),
        format!("|C-1| = {e_photon:.2e}, max |C-(1-1/2N)| = {e_boson:.2e}, max |C-1/2| = {e_fermion:.2e}"),
    )
}

fn closed_form_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (a, b) = random_amplitudes(&mut rng);
        let out = single_ancilla_rotation(a, b).expect("rotation");
        let d = (out.simulated.matrix() - out.analytic.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        worst = worst.max(d);
    }
    outcome(worst < 1e-10, format!("max elementwise distance over 100 inputs = {worst:.2e}"))
}

fn one_over_n_scaling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let ns = [4usize, 8, 16, 32, 64];
    let mut worst_spread = 0.0f64;
    let mut worst_ratio = f64::INFINITY;
    for _ in 0..20 {
        let (a, b) = random_amplitudes(&mut rng);
        let infid: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let p = RotationProtocolParams::new(a, b, n).expect("params");
                sequential_rotation(&p).expect("rotation").get("infidelity").unwrap_or(f64::NAN)
            })
            .collect();
        let products: Vec<f64> = (2..5).map(|i| infid[i] * ns[i] as f64).collect();
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        worst_spread = worst_spread.max((hi - lo) / lo);
        worst_ratio = worst_ratio.min(infid[0] / infid[4]);
    }
    outcome(
        worst_spread <= 0.15 && worst_ratio >= 12.0,
        format!(
            "per-step time π/(4JN): worst spread of (1-F)·N over N=16,32,64 = {:.1}%, worst (1-F)(4)/(1-F)(64) = {worst_ratio:.3}",
            worst_spread * 100.0
        ),
    )
}

fn collective_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut worst_td = 0.0f64;
    let mut worst_gain = 0.0f64;
    for n in [2usize, 3, 4] {
        let mut inputs = vec![(c(1.0, 0.0), c(0.0, 0.0))];
        inputs.extend((0..3).map(|_| random_amplitudes(&mut rng)));
        for (a, b) in inputs {
            let r = simultaneous_coupling_check_for(n, a, b).expect("check");
            worst_td = worst_td.max(r.get("trace_distance").unwrap_or(f64::NAN));
            worst_gain = worst_gain.max(r.get("fidelity_gain").unwrap_or(f64::NAN).abs());
        }
    }
    outcome(
        worst_td < 1e-10 && worst_gain < 1e-10,
        format!("max trace distance = {worst_td:.2e}, max |fidelity gain| = {worst_gain:.2e}"),
    )
}

fn angle_optimization() -> Outcome {
    let one = optimize_angles(1, 64, 3).expect("search");
    let one_ok = (one.best_angles[0] - FRAC_PI_2).abs() < 1e-3 && (one.best_concurrence - 0.5).abs() < 1e-9;
    let two = optimize_angles(2, 64, 3).expect("search");
    let grid_max = two.grid.column("concurrence").unwrap_or_default().into_iter().fold(f64::NEG_INFINITY, f64::max);
    let (t1, t2) = (two.best_angles[0], two.best_angles[1]);
    let at_corner = ((t1).abs() < 1e-3 && (t2 - FRAC_PI_2).abs() < 1e-3) || ((t1 - FRAC_PI_2).abs() < 1e-3 && t2.abs() < 1e-3);
    let two_ok = grid_max <= 0.5 + 1e-9 && two.best_concurrence <= 0.5 + 1e-9 && (two.best_concurrence - 0.5).abs() < 1e-9 && at_corner;
    outcome(
        one_ok && two_ok,
        format!(
            "one pair: θ* = {:.6}, C = {:.12}; two pairs: (θ₁, θ₂) = ({t1:.6}, {t2:.6}), C = {:.12}, grid max = {grid_max:.12}",
            one.best_angles[0], one.best_concurrence, two.best_concurrence
        ),
    )
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut failures = Vec::new();
    let layout = compose_layout([
        ("q", SubsystemKind::TwoLevel),
        ("m", SubsystemKind::BosonicMode { cutoff: 3 }),
        ("f", SubsystemKind::FermionicMode),
    ])
    .expect("layout");
    let dim = layout.dim();
    let (mut unit_err, mut trace_err, mut min_eig) = (0.0f64, 0.0f64, 0.0f64);
    let (mut c_err, mut m_err, mut lr_err, mut sym_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for k in 0..200 {
        let spec = if k % 2 == 0 { CouplingSpec::new("q", ["m"], rng.gen_range(0.1..2.0)) } else { CouplingSpec::new("q", ["m", "f"], rng.gen_range(0.1..2.0)) }
            .expect("spec");
        let h = if k % 2 == 0 { jc_hamiltonian(&layout, &spec) } else { collective_jc_hamiltonian(&layout, &spec) }.expect("hamiltonian");
        let u = propagator(&h, rng.gen_range(-5.0..5.0)).expect("propagator");
        unit_err = unit_err.max((u.matrix().adjoint() * u.matrix() - DMatrix::identity(dim, dim)).norm());
        let amps = DVector::from_fn(dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let psi = PureState::normalized(layout.clone(), amps).expect("state").transform(&u).expect("unitary");
        for keep in [&["q"][..], &["m", "f"][..]] {
            let r = psi.reduced_density(keep).expect("reduce");
            trace_err = trace_err.max((r.trace() - c(1.0, 0.0)).norm());
            min_eig = min_eig.min(r.eigenvalues()[0]);
        }

        let g = ginibre(&mut rng, 4);
        let m = &g * g.adjoint();
        let m = &m / m.trace();
        let lu = random_unitary(&mut rng, 2).kronecker(&random_unitary(&mut rng, 2));
        let a = TwoQubitDensity::from_matrix(m.clone()).expect("density");
        let b = TwoQubitDensity::from_matrix(&lu * &m * lu.adjoint()).expect("density");
        c_err = c_err.max((concurrence(&a) - concurrence(&b)).abs());
        m_err = m_err.max((horodecki_m(&a) - horodecki_m(&b)).abs());

        let (t1, t2) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..PI));
        let p = FermionProtocolParams::from_radians(&[t1, t2]).expect("angles");
        let l = massive_fermion_state(&p, SideOrder::LeftFirst).expect("protocol");
        let r = massive_fermion_state(&p, SideOrder::RightFirst).expect("protocol");
        lr_err = lr_err.max((l.amplitudes() - r.amplitudes()).norm());
        let swapped = FermionProtocolParams::from_radians(&[t2, t1]).expect("angles");
        let ca = massive_fermion_protocol(&p).expect("protocol").concurrence;
        let cb = massive_fermion_protocol(&swapped).expect("protocol").concurrence;
        sym_err = sym_err.max((ca - cb).abs());
    }
    if unit_err >= 1e-10 {
        failures.push("unitarity");
    }
    if trace_err >= 1e-12 || min_eig < -1e-10 {
        failures.push("trace/positivity");
    }
    if c_err >= 1e-10 || m_err >= 1e-10 {
        failures.push("local-unitary invariance");
    }
    if lr_err >= 1e-12 {
        failures.push("left/right commutation");
    }
    if sym_err >= 1e-10 {
        failures.push("θ symmetry");
    }
    outcome(
        failures.is_empty(),
        format!(
            "200 instances: ‖U†U-I‖ {unit_err:.1e}, |tr-1| {trace_err:.1e}, min eig {min_eig:.1e}, ΔC {c_err:.1e}, ΔM {m_err:.1e}, L/R {lr_err:.1e}, θ-swap {sym_err:.1e}{}",
            if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
        ),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("modent-acceptance-{}", std::process::id()));
    if std::fs::create_dir_all(&dir).is_err() {
        return outcome(false, "cannot create a scratch directory");
    }
    let configs: [(&str, &[&str]); 4] = [
        ("table.csv", &["table1", "--n", "5", "--format", "csv"]),
        ("sweep.csv", &["fermion-sweep", "--pairs", "2", "--grid", "16", "--refine", "3", "--format", "csv"]),
        ("rotate.json", &["rotate-sweep", "--n-list", "4,8,16,32,64", "--alpha", "0.6", "--beta", "0.8i", "--format", "json"]),
        ("bell.json", &["bell", "--gamma", "0.5", "--format", "json"]),
    ];
    let mut mismatched = Vec::new();
    for (name, args) in configs {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let path = dir.join(format!("{k}-{name}"));
            let status = Command::new(env!("CARGO_BIN_EXE_modent")).args(args).arg("--out").arg(&path).status();
            match (status, std::fs::read(&path)) {
                (Ok(s), Ok(bytes)) if s.success() => outputs.push(bytes),
                _ => {
                    let _ = std::fs::remove_dir_all(&dir);
                    return outcome(false, format!("run of {name} failed"));
                }
            }
        }
        if outputs[0] != outputs[1] {
            mismatched.push(name);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        mismatched.is_empty(),
        if mismatched.is_empty() { "4 configs, 2 runs each: byte-identical".to_owned() } else { format!("differing outputs: {}", mismatched.join(", ")) },
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("Horodecki identity M = 1 + γ²", Duration::from_secs(1), horodecki_identity),
        ("summary table concurrences", Duration::from_secs(30), table_concurrences),
        ("single-ancilla closed form", Duration::from_secs(5), closed_form_equivalence),
        ("1/N infidelity scaling", Duration::from_secs(10), one_over_n_scaling),
        ("collective-mode equivalence", Duration::from_secs(10), collective_equivalence),
        ("mixing-angle optimization", Duration::from_secs(300), angle_optimization),
        ("property suites", Duration::from_secs(60), property_suites),
        ("CLI determinism", Duration::from_secs(120), determinism),
    ];
    let mut passed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *limit;
        let ok = result.pass && in_time;
        passed += usize::from(ok);
        let timing = if in_time { String::new() } else { format!(" [over the {} s limit]", limit.as_secs()) };
        println!(
            "{} {}. {name}: {} ({:.2} s){timing}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{passed}/{} criteria passed", criteria.len());
    if passed < criteria.len() && std::env::var("MODENT_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
