use modent::entanglement::{chsh_violated, concurrence, correlation_tensor, horodecki_m, max_chsh_value, rho_tp, TwoQubitDensity};
use modent::C64;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u: f64 = rng.gen_range(1e-12..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

fn ginibre(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| c(gaussian(rng), gaussian(rng)))
}

fn random_density(rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let g = ginibre(rng, 4);
    let m = &g * g.adjoint();
    let tr = m.trace();
    m / tr
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    ginibre(rng, n).qr().q()
}

fn random_pure(rng: &mut ChaCha8Rng) -> [C64; 4] {
    let v: Vec<C64> = (0..4).map(|_| c(gaussian(rng), gaussian(rng))).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
}

fn projector(v: &[C64; 4]) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |i, j| v[i] * v[j].conj())
}

#[test]
fn pure_state_concurrence_is_two_abs_ad_minus_bc() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let [a, b, cc, d] = random_pure(&mut rng);
        let rho = TwoQubitDensity::from_matrix(projector(&[a, b, cc, d])).unwrap();
        let expect = 2.0 * (a * d - b * cc).norm();
        assert!((concurrence(&rho) - expect).abs() < 1e-10, "{} vs {expect}", concurrence(&rho));
    }
}

#[test]
fn x_state_concurrence_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let p: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s: f64 = p.iter().sum();
        let p: Vec<f64> = p.iter().map(|x| x / s).collect();
        let z = rng.gen_range(0.0..1.0) * (p[0] * p[3]).sqrt();
        let w = rng.gen_range(0.0..1.0) * (p[1] * p[2]).sqrt();
        let (pz, pw) = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3));
        let mut m = DMatrix::zeros(4, 4);
        for i in 0..4 {
            m[(i, i)] = c(p[i], 0.0);
        }
        m[(0, 3)] = C64::from_polar(z, pz);
        m[(3, 0)] = C64::from_polar(z, -pz);
        m[(1, 2)] = C64::from_polar(w, pw);
        m[(2, 1)] = C64::from_polar(w, -pw);
        let expect = (2.0 * (z - (p[1] * p[2]).sqrt())).max(2.0 * (w - (p[0] * p[3]).sqrt())).max(0.0);
        let got = concurrence(&TwoQubitDensity::from_matrix(m).unwrap());
        assert!((got - expect).abs() < 1e-10, "{got} vs {expect}");
    }
}

fn pauli_dot(n: [f64; 3]) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[c(n[2], 0.0), c(n[0], -n[1]), c(n[0], n[1]), c(-n[2], 0.0)])
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Largest CHSH value for fixed Bob settings, with Alice's settings chosen
/// optimally: |v(b + b')| + |v(b − b')|, v(n)ᵢ = Tr[ρ σᵢ ⊗ n·σ].
fn chsh_for(rho: &DMatrix<C64>, b: [f64; 3], bp: [f64; 3]) -> f64 {
    let vec_norm = |n: [f64; 3]| -> f64 {
        let bob = pauli_dot(n);
        (0..3)
            .map(|i| {
                let mut e = [0.0; 3];
                e[i] = 1.0;
                (rho * pauli_dot(e).kronecker(&bob)).trace().re.powi(2)
            })
            .sum::<f64>()
            .sqrt()
    };
    let plus = [b[0] + bp[0], b[1] + bp[1], b[2] + bp[2]];
    let minus = [b[0] - bp[0], b[1] - bp[1], b[2] - bp[2]];
    vec_norm(plus) + vec_norm(minus)
}

fn brute_force_chsh(rho: &DMatrix<C64>, rng: &mut ChaCha8Rng) -> f64 {
    let eval = |x: &[f64; 4]| chsh_for(rho, unit(x[0], x[1]), unit(x[2], x[3]));
    let mut best = [0.0; 4];
    let mut best_v = f64::NEG_INFINITY;
    for _ in 0..400 {
        let x = [rng.gen_range(0.0..3.2), rng.gen_range(0.0..6.3), rng.gen_range(0.0..3.2), rng.gen_range(0.0..6.3)];
        let v = eval(&x);
        if v > best_v {
            best_v = v;
            best = x;
        }
    }
    let mut step = 0.3;
    while step > 1e-7 {
        let mut improved = false;
        for i in 0..4 {
            for s in [-step, step] {
                let mut x = best;
                x[i] += s;
                let v = eval(&x);
                if v > best_v {
                    best_v = v;
                    best = x;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    best_v
}

#[test]
fn brute_force_chsh_matches_two_sqrt_m() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut states: Vec<DMatrix<C64>> = (0..12).map(|_| random_density(&mut rng)).collect();
    states.push(rho_tp(0.5).unwrap().matrix().clone());
    states.push(projector(&random_pure(&mut rng)));
    for m in states {
        let rho = TwoQubitDensity::from_matrix(m.clone()).unwrap();
        let brute = brute_force_chsh(&m, &mut rng);
        let formula = max_chsh_value(&rho);
        assert!(brute <= formula + 1e-9, "{brute} > {formula}");
        assert!(brute >= formula - 1e-6, "{brute} < {formula}");
    }
}

#[test]
fn horodecki_identity_on_target_pair_family() {
    for k in 0..=10 {
        let g = k as f64 / 10.0;
        let rho = rho_tp(g).unwrap();
        assert!((horodecki_m(&rho) - (1.0 + g * g)).abs() < 1e-10);
        assert!((concurrence(&rho) - g).abs() < 1e-10);
        if g > 0.0 {
            assert!(chsh_violated(&rho));
        }
    }
    // T = diag(γ, γ, −1) from the definition Tᵢⱼ = Tr[ρ σᵢ⊗σⱼ].
    let t = correlation_tensor(&rho_tp(0.3).unwrap());
    let expect = [[0.3, 0.0, 0.0], [0.0, 0.3, 0.0], [0.0, 0.0, -1.0]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((t.get(i, j) - expect[i][j]).abs() < 1e-14);
        }
    }
}

#[test]
fn local_unitaries_leave_concurrence_and_m_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let m = random_density(&mut rng);
        let u = random_unitary(&mut rng, 2).kronecker(&random_unitary(&mut rng, 2));
        let rotated = &u * &m * u.adjoint();
        let a = TwoQubitDensity::from_matrix(m).unwrap();
        let b = TwoQubitDensity::from_matrix(rotated).unwrap();
        assert!((concurrence(&a) - concurrence(&b)).abs() < 1e-10);
        assert!((horodecki_m(&a) - horodecki_m(&b)).abs() < 1e-10);
    }
}

#[test]
fn invalid_two_qubit_inputs() {
    assert!(TwoQubitDensity::from_matrix(DMatrix::identity(4, 4)).is_err());
    assert!(TwoQubitDensity::from_matrix(DMatrix::identity(3, 3) / c(3.0, 0.0)).is_err());
    assert!(rho_tp(-0.1).is_err());
}
