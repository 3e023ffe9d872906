//! End-to-end acceptance gate. Each test covers one criterion and prints a
//! single pass/fail line; run with `--nocapture` to see the lines for
//! passing criteria as well.

use num_complex::Complex64;

use qlat::bipartite::{
    example_rank_two_subspace, min_rank, schmidt_rank, verify_inclusions,
    verify_product_lattice, BipartiteSpace, BipartiteState,
};
use qlat::chsh::{
    build_family, chsh_sum, example_boole_matrix, example_plane_projectors,
    golden_projectors_hadamard_point, omega, omega_prime, product_state, LocalUnitary,
    REFERENCE_EIGENVALUES, REFERENCE_EIGENVALUE_TOL,
};
use qlat::cli::{cmd_search_violations, cmd_verify};
use qlat::exec::indexed_map;
use qlat::hilbert::{hermitian_eigenvalues, random_state, random_subspace, Tolerances};
use qlat::lattice::{commutator_residual, correction_operator, quantum_bounds};
use qlat::measurement::{
    measure_all, rank_reductions, sylvester_bounds, worked_example, OrthogonalDecomposition,
};
use qlat::phasespace::{coherent_family, povm_measure, random_seed_projector, weyl_system};
use qlat::report::ConfigEcho;
use qlat::rng::{child_rng, master_rng};
use rand::Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn config(dims: [usize; 2], trials: usize, seed: u64) -> ConfigEcho {
    ConfigEcho {
        dims,
        trials,
        master_seed: seed,
        tolerances: tol(),
    }
}

/// Print one summary line; the panic message of a failing assertion carries
/// the same criterion tag.
fn report(criterion: &str, checks: &[(&str, bool)]) {
    let all = checks.iter().all(|(_, ok)| *ok);
    println!(
        "acceptance {criterion}: {}",
        if all { "PASS" } else { "FAIL" }
    );
    for (name, ok) in checks {
        assert!(*ok, "{criterion}: check '{name}' failed");
    }
}

#[test]
fn criterion_01_chsh_example_reproduction() {
    let t = tol();
    let f = build_family(&LocalUnitary::hadamard_point(&t), &t).unwrap();
    let computed = example_plane_projectors(&f, &t).unwrap();
    let golden = golden_projectors_hadamard_point();
    let max_dev = computed
        .iter()
        .zip(&golden)
        .flat_map(|(c, g)| c.iter().zip(g.iter()).map(|(x, y)| (x - y).norm()))
        .fold(0.0_f64, f64::max);
    let m = example_boole_matrix(&f, &t).unwrap();
    let eig = hermitian_eigenvalues(&m, &t).unwrap();
    let eig_dev = eig
        .iter()
        .zip(REFERENCE_EIGENVALUES.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    report(
        "criterion 1 (CHSH example reproduction)",
        &[
            ("projectors entrywise within 1e-12", max_dev <= 1e-12),
            (
                "eigenvalues match two-decimal reference",
                eig_dev <= REFERENCE_EIGENVALUE_TOL,
            ),
            ("trace M = 4", (m.trace().re - 4.0).abs() <= 1e-9),
        ],
    );
}

#[test]
fn criterion_02_measurement_example_reproduction() {
    let t = tol();
    let (s, m) = worked_example(&t).unwrap();
    let r = measure_all(&s, &m, &t).unwrap();
    let want_p = [1.0 / 15.0, 1.0 / 3.0, 0.0, 3.0 / 5.0];
    let p_ok = r
        .outcomes
        .iter()
        .zip(want_p.iter())
        .all(|(o, w)| (o.p_ab - w).abs() <= 1e-10);

    // collapsed states up to global phase
    let kets: [Vec<(usize, usize, f64)>; 3] = [
        vec![(0, 0, 1.0)],
        vec![(0, 1, 2.0 / 5.0_f64.sqrt()), (1, 1, 1.0 / 5.0_f64.sqrt())],
        vec![(2, 2, 1.0)],
    ];
    let surviving: Vec<&qlat::measurement::OutcomeRecord> =
        r.outcomes.iter().filter(|o| o.collapsed.is_some()).collect();
    let mut states_ok = surviving.len() == 3;
    for (o, want) in surviving.iter().zip(kets.iter()) {
        let c = o.collapsed.as_ref().unwrap().coeff();
        let overlap: Complex64 = want
            .iter()
            .map(|&(i, j, w)| c[(i, j)] * w)
            .sum();
        states_ok &= (overlap.norm() - 1.0).abs() <= 1e-9;
    }

    let reductions_ok = surviving.iter().all(|o| o.reduction == Some(2));
    report(
        "criterion 2 (measurement example reproduction)",
        &[
            ("outcome probabilities", p_ok),
            ("collapsed states up to phase", states_ok),
            ("surviving reductions equal 2", reductions_ok),
            ("average reduction equals 2", (r.r_ave - 2.0).abs() <= 1e-12),
            ("upper bound equals 8/3", (r.upper_bound - 8.0 / 3.0).abs() <= 1e-10),
        ],
    );
}

#[test]
fn criterion_03_subspace_rank_example() {
    let t = tol();
    let h = example_rank_two_subspace(&t);
    let mut rng = master_rng(3);
    let r = min_rank(&h, BipartiteSpace::new(3, 3).unwrap(), 16, &mut rng, &t).unwrap();
    report(
        "criterion 3 (subspace rank example)",
        &[
            ("upper bound = 2", r.upper_bound == 2),
            ("search converged", r.converged),
        ],
    );
}

#[test]
fn criterion_04_lattice_invariant_suite() {
    let t = tol();
    let trials = 1000_usize;
    let mut all_ok = true;
    for dim in 2..=12_usize {
        let results: Vec<bool> = indexed_map(trials, |i| {
            let mut rng = child_rng(40_000 + dim as u64, i as u64);
            let k1 = 1 + (rng.random::<u32>() as usize) % (dim - 1);
            let k2 = 1 + (rng.random::<u32>() as usize) % (dim - 1);
            let h1 = random_subspace(dim, k1, &mut rng, &t).unwrap();
            let h2 = random_subspace(dim, k2, &mut rng, &t).unwrap();
            let s = random_state(dim, &mut rng);
            let d_op = correction_operator(&h1, &h2, &t).unwrap();
            let trace_ok = d_op.trace().abs() <= 1e-8 * dim as f64;
            let comm_ok = commutator_residual(&h1, &h2, &t).unwrap() <= 1e-8;
            let b = quantum_bounds(&s, &h1, &h2, &t).unwrap();
            let window_ok = b.b_lower <= b.p_join + 1e-9 && b.p_join <= b.b_upper + 1e-9;
            let classical_ok = !b.conditions.any()
                || (b.p_join <= b.classical_upper + 1e-9
                    && b.p_join >= b.classical_lower - 1e-9);
            trace_ok && comm_ok && window_ok && classical_ok
        });
        all_ok &= results.into_iter().all(|ok| ok);
    }
    report(
        "criterion 4 (lattice invariant suite)",
        &[("all dims 2..=12, 1000 triples each", all_ok)],
    );
}

#[test]
fn criterion_05_violation_existence() {
    let r = cmd_search_violations(config([3, 3], 200, 42)).unwrap();
    report(
        "criterion 5 (classical-Boole and CHSH violations found)",
        &[("search report all green", r.all_passed())],
    );
}

#[test]
fn criterion_06_product_state_chsh_soundness() {
    let t = tol();
    let mut rng = master_rng(6);
    let mut omega_min = f64::INFINITY;
    let mut sum_max = f64::NEG_INFINITY;
    let mut op_min = f64::INFINITY;
    let mut op_max = f64::NEG_INFINITY;
    for _ in 0..10 {
        // random valid unitary parameters, bounded away from the a=0 / b=0
        // degenerate edges
        let theta = 0.05 + 1.47 * rng.random::<f64>();
        let (pa, pb) = (
            2.0 * std::f64::consts::PI * rng.random::<f64>(),
            2.0 * std::f64::consts::PI * rng.random::<f64>(),
        );
        let a = Complex64::from_polar(theta.cos(), pa);
        let b = Complex64::from_polar(theta.sin(), pb);
        let u = LocalUnitary::new(a, b, &t).unwrap();
        let f = build_family(&u, &t).unwrap();
        for _ in 0..1000 {
            let s_a = random_state(2, &mut rng);
            let s_b = random_state(2, &mut rng);
            let (_, om) = omega(&s_a, &s_b, &u).unwrap();
            omega_min = omega_min.min(om);
            let r = chsh_sum(&product_state(&s_a, &s_b).unwrap(), &f, &t).unwrap();
            sum_max = sum_max.max(r.chsh_sum);
            let op = omega_prime(&s_a, &s_b, &u, &t).unwrap();
            op_min = op_min.min(op);
            op_max = op_max.max(op);
        }
    }
    report(
        "criterion 6 (product-state CHSH soundness)",
        &[
            ("Omega nonnegative", omega_min >= -1e-9),
            ("chsh_sum at most 3", sum_max <= 3.0 + 1e-9),
            ("Omega' attains both signs", op_min < 0.0 && op_max > 0.0),
        ],
    );
}

#[test]
fn criterion_07_product_lattice_identities() {
    let t = tol();
    let mut all_ok = true;
    for (case, (da, db)) in [(2_usize, 2_usize), (2, 3), (3, 3)].into_iter().enumerate() {
        let results: Vec<bool> = indexed_map(200, |i| {
            let mut rng = child_rng(70_000 + case as u64, i as u64);
            let pick = |rng: &mut rand_chacha::ChaCha8Rng, d: usize| {
                let k = 1 + rng.random::<u32>() as usize % (d - 1);
                random_subspace(d, k, rng, &t).unwrap()
            };
            let h1a = pick(&mut rng, da);
            let h2a = pick(&mut rng, da);
            let h1b = pick(&mut rng, db);
            let h2b = pick(&mut rng, db);
            let res = verify_product_lattice(&h1a, &h2a, &h1b, &h2b, &t).unwrap();
            let (meet_ok, join_ok) = verify_inclusions(&h1a, &h2a, &h1b, &h2b, &t).unwrap();
            res.max() <= 1e-8 && meet_ok && join_ok
        });
        all_ok &= results.into_iter().all(|ok| ok);
    }
    report(
        "criterion 7 (product-lattice identities)",
        &[("200 quadruples per dim pair", all_ok)],
    );
}

#[test]
fn criterion_08_rank_bound_suite() {
    let t = tol();
    // Sylvester window and Frobenius chain over 500 random draws
    let results: Vec<bool> = indexed_map(500, |i| {
        let mut rng = child_rng(80_000, i as u64);
        let d_a = 2 + (rng.random::<u32>() as usize) % 3;
        let d_b = 2 + (rng.random::<u32>() as usize) % 3;
        let space = BipartiteSpace::new(d_a, d_b).unwrap();
        let s = BipartiteState::new(space, random_state(d_a * d_b, &mut rng)).unwrap();
        let p_a = random_subspace(d_a, 1 + (rng.random::<u32>() as usize) % d_a, &mut rng, &t)
            .unwrap()
            .projector();
        let p_b = random_subspace(d_b, 1 + (rng.random::<u32>() as usize) % d_b, &mut rng, &t)
            .unwrap()
            .projector();
        let mut ok = true;
        if let Ok((lo, hi)) = sylvester_bounds(&s, &p_a, &p_b, &t) {
            let c = qlat::measurement::collapse(&s, &p_a, &p_b, &t).unwrap();
            let r = schmidt_rank(&c.state.unwrap(), &t).rank as i64;
            ok &= lo <= r && r <= hi;
        }
        let red = rank_reductions(&s, &p_a, &p_b, &t).unwrap();
        if let (Some(ra), Some(rb), Some(rab)) = (red.r_a, red.r_b, red.r_ab) {
            ok &= ra + rb >= rab && rab >= ra.max(rb);
        }
        ok
    });
    let windows_ok = results.into_iter().all(|ok| ok);

    // average-reduction bound over 100 random product measurements
    let ave_results: Vec<bool> = indexed_map(100, |i| {
        let mut rng = child_rng(80_500, i as u64);
        let d = 3_usize;
        let split = 1 + (rng.random::<u32>() as usize) % (d - 1);
        let dec = |rng: &mut rand_chacha::ChaCha8Rng, t: &Tolerances| {
            let h = random_subspace(d, split, rng, t).unwrap();
            OrthogonalDecomposition::new(
                vec![h.projector(), h.complement(t).projector()],
                t,
            )
            .unwrap()
        };
        let m = qlat::measurement::ProductMeasurement::with_default_labels(
            dec(&mut rng, &t),
            dec(&mut rng, &t),
        )
        .unwrap();
        let s = BipartiteState::new(
            BipartiteSpace::new(d, d).unwrap(),
            random_state(d * d, &mut rng),
        )
        .unwrap();
        let r = measure_all(&s, &m, &t).unwrap();
        r.r_ave <= r.upper_bound + 1e-9
    });
    let ave_ok = ave_results.into_iter().all(|ok| ok);
    report(
        "criterion 8 (rank-bound suite)",
        &[
            ("Sylvester window and Frobenius chain", windows_ok),
            ("average reduction within bound", ave_ok),
        ],
    );
}

#[test]
fn criterion_09_phase_space_suite() {
    let t = tol();
    let mut families_ok = true;
    for d in [3_usize, 5, 7] {
        let sys = weyl_system(d).unwrap();
        let id = qlat::ComplexMatrix::identity(d, d);
        let mut f4 = id.clone();
        for _ in 0..4 {
            f4 = &f4 * &sys.fourier;
        }
        families_ok &= (f4 - &id).norm() <= 1e-9;
        let dual = sys.fourier.adjoint() * &sys.z_op * &sys.fourier;
        families_ok &= (dual - &sys.x_op).norm() <= 1e-9;

        let mut rng = master_rng(90 + d as u64);
        let seed = random_seed_projector(&sys, 1, &mut rng, &t).unwrap();
        // coherent_family validates the resolution of identity and pairwise
        // distinctness internally
        let fam = coherent_family(&sys, seed, &t).unwrap();
        families_ok &= fam.members.len() == d * d;
    }

    let sys = weyl_system(3).unwrap();
    let mut rng = master_rng(91);
    let fam_a = coherent_family(&sys, random_seed_projector(&sys, 1, &mut rng, &t).unwrap(), &t)
        .unwrap();
    let fam_b = coherent_family(&sys, random_seed_projector(&sys, 1, &mut rng, &t).unwrap(), &t)
        .unwrap();
    let mut povm_ok = true;
    for i in 0..50_u64 {
        let mut rng = child_rng(92, i);
        let s = BipartiteState::new(
            BipartiteSpace::new(3, 3).unwrap(),
            random_state(9, &mut rng),
        )
        .unwrap();
        let r = povm_measure(&s, &fam_a, &fam_b, &t).unwrap();
        povm_ok &= r.r_ave <= r.upper_bound + 1e-9;
    }
    report(
        "criterion 9 (phase-space suite)",
        &[
            ("Weyl identities and generic families", families_ok),
            ("coherent-POVM average bound", povm_ok),
        ],
    );
}

#[test]
fn criterion_10_determinism() {
    let cfg = config([3, 3], 50, 42);
    let first = cmd_verify(cfg.clone()).unwrap().to_json();
    let second = cmd_verify(cfg.clone()).unwrap().to_json();
    #[cfg(feature = "parallel")]
    let (single_thread, two_threads) = {
        let run_in = |n: usize, cfg: ConfigEcho| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| cmd_verify(cfg).unwrap().to_json())
        };
        (run_in(1, cfg.clone()), run_in(2, cfg))
    };
    #[cfg(not(feature = "parallel"))]
    let (single_thread, two_threads) = (first.clone(), cmd_verify(cfg).unwrap().to_json());
    report(
        "criterion 10 (deterministic reports)",
        &[
            ("repeat run byte-identical", first == second),
            ("single-thread byte-identical", first == single_thread),
            ("two-thread byte-identical", first == two_threads),
        ],
    );
}
