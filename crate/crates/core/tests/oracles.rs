//! Cross-checks against independent implementations: a dense LAPACK-style
//! eigensolver, Numerov shooting, the directly discretized potentials and
//! closed-form excited states.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use susyrad::analytic::AnalyticSpectrum;
use susyrad::linalg::SymTridiagonal;
use susyrad::radial::{factorized_pair, make_grid, partner_hamiltonians, scalar_hamiltonian, Ladder};
use susyrad::shape_invariance::ground_state_ladder_check;
use susyrad::shooting::shooting_oracle;
use susyrad::spectral::{algebra_check, eigen_decompose, pair_spectra, susy_map, PairingOptions};
use susyrad::superpotential::{case1_potential, case2_potential, ScalarPotential};
use susyrad::{Error, Sign, SuperpotentialSpec, System};

fn dense(t: &SymTridiagonal) -> DMatrix<f64> {
    let n = t.len();
    DMatrix::from_row_slice(n, n, &t.to_dense())
}

fn sorted_eigs(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let e = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|a, b| e.eigenvalues[*a].total_cmp(&e.eigenvalues[*b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = DMatrix::from_columns(&idx.iter().map(|&i| e.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (vals, vecs)
}

#[test]
fn tridiagonal_solver_matches_nalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &n in &[20usize, 100, 255, 256, 400] {
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.1..1.0)).collect();
        let t = SymTridiagonal::new(diag, off).unwrap();
        let (want, vecs) = sorted_eigs(dense(&t));
        let (got, gvecs) = t.lowest_eigenpairs(8).unwrap();
        for k in 0..8 {
            assert!((got[k] - want[k]).abs() < 1e-12, "n={n} k={k}: {} vs {}", got[k], want[k]);
            let dot: f64 = gvecs[k].iter().zip(vecs.column(k).iter()).map(|(a, b)| a * b).sum();
            assert!((dot.abs() - 1.0).abs() < 1e-9, "n={n} k={k}: overlap {dot}");
        }
    }
}

#[test]
fn partner_spectra_match_nalgebra() {
    let spec = SuperpotentialSpec::power_law(1.3, 1.7, 0.8).unwrap();
    let grid = make_grid(6.0, 300).unwrap();
    for system in [System::One, System::Two] {
        let pair = factorized_pair(&grid, 2, &spec, system).unwrap();
        let a = DMatrix::from_row_slice(pair.ladder.rows(), pair.ladder.cols(), &pair.ladder.to_dense());
        let (wp, _) = sorted_eigs(&a * a.transpose());
        let (wm, _) = sorted_eigs(a.transpose() * &a);
        let ours = pair_spectra(&pair, 5, &PairingOptions::default()).unwrap();
        let zp = ours.boundary_states.iter().filter(|b| b.branch == Sign::Plus).count();
        let norm = wp[wp.len() - 1];
        for (k, e) in ours.eigenvalues_plus.iter().enumerate() {
            assert!((e - wp[k + zp]).abs() < 1e-11 * norm);
        }
        for (k, e) in ours.eigenvalues_minus.iter().enumerate() {
            assert!((e - wm[k]).abs() < 1e-11 * norm);
        }
    }
}

#[test]
fn matrix_and_shooting_agree() {
    // (spec, system, r_max) with the three lowest H₊ levels bound.
    let cases = [
        (SuperpotentialSpec::quadratic(1.0, 1.0).unwrap(), System::One, 10.0),
        (SuperpotentialSpec::quadratic(1.0, 1.0).unwrap(), System::Two, 10.0),
        (SuperpotentialSpec::linear(1.0, 0.5).unwrap(), System::One, 120.0),
        (SuperpotentialSpec::power_law(1.0, 3.0, 0.5).unwrap(), System::One, 5.0),
    ];
    for (spec, system, r_max) in cases {
        let ell = 1;
        let grid = make_grid(r_max, 20000).unwrap();
        let pair = factorized_pair(&grid, ell, &spec, system).unwrap();
        let rep = pair_spectra(&pair, 3, &PairingOptions::default()).unwrap();
        let v = case2_potential(&spec, ell, system, Sign::Plus).unwrap();
        let shot = shooting_oracle(&v, spec.mass(), &make_grid(r_max, 100_000).unwrap(), 3).unwrap();
        assert!(shot.complete);
        for (m, s) in rep.eigenvalues_plus.iter().zip(&shot.energies) {
            assert!((m - s).abs() < 1e-5, "{spec} system {}: matrix {m} vs shooting {s}", system.number());
        }
        if let Ok(exact) = AnalyticSpectrum::for_spec(&spec, ell, system, Sign::Plus) {
            for (s, e) in shot.energies.iter().zip(exact.lowest(3)) {
                assert!((s - e).abs() < 1e-6, "{spec}: shooting {s} vs exact {e}");
            }
        }
    }
}

#[test]
fn factorized_and_direct_agree_to_second_order() {
    let spec = SuperpotentialSpec::quadratic(1.0, 1.0).unwrap();
    let v = case2_potential(&spec, 2, System::One, Sign::Minus).unwrap();
    let gap = |n: usize| {
        let grid = make_grid(10.0, n).unwrap();
        let fact = factorized_pair(&grid, 2, &spec, System::One).unwrap();
        let direct = scalar_hamiltonian(&grid, &v, 1.0).unwrap();
        let a = eigen_decompose(&fact.h_minus, 3, grid.h()).unwrap().values;
        let b = eigen_decompose(&direct, 3, grid.h()).unwrap().values;
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    };
    let (g1, g2) = (gap(500), gap(1000));
    assert!(g1 < 1e-3 && g2 < g1);
    let ratio = g1 / g2;
    assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn linear_pair_is_a_coulomb_problem() {
    // H⁽¹⁾₋ for U = γr equals a Coulomb Hamiltonian with α = ℓγ/m.
    let (g, m, ell) = (1.0, 0.5, 2u32);
    let alpha = ell as f64 * g / m;
    let grid = make_grid(150.0, 6000).unwrap();
    let vc = case1_potential(ScalarPotential::coulomb_witten(alpha, m, ell), ell, Sign::Minus, m).unwrap();
    let coulomb = eigen_decompose(&scalar_hamiltonian(&grid, &vc, m).unwrap(), 3, grid.h()).unwrap().values;
    let vl = case2_potential(&SuperpotentialSpec::linear(g, m).unwrap(), ell, System::One, Sign::Minus).unwrap();
    let linear = eigen_decompose(&scalar_hamiltonian(&grid, &vl, m).unwrap(), 3, grid.h()).unwrap().values;
    for (a, b) in coulomb.iter().zip(&linear) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
    let exact =
        AnalyticSpectrum::for_spec(&SuperpotentialSpec::linear(g, m).unwrap(), ell, System::One, Sign::Minus).unwrap();
    for (a, e) in coulomb.iter().zip(exact.lowest(3)) {
        assert!((a - e).abs() < 1e-3, "{a} vs {e}");
    }
}

#[test]
fn ladder_generates_excited_states() {
    let check = ground_state_ladder_check(1, 1.0, 0.5, 4, 2000, None).unwrap();
    for (n, d) in check.deviations.iter().enumerate() {
        assert!(*d < 1e-2, "level {n}: deviation {d}");
    }
    for (e, c) in check.eigenvalues.iter().zip(&check.chain_energies) {
        assert!((e - c).abs() < 1e-3);
    }
    let check = ground_state_ladder_check(2, 0.7, 1.0, 3, 2000, None).unwrap();
    assert!(check.deviations.iter().all(|d| *d < 1e-2), "{:?}", check.deviations);
}

#[test]
fn susy_map_carries_eigenvectors_across() {
    let spec = SuperpotentialSpec::quadratic(1.0, 1.0).unwrap();
    let grid = make_grid(10.0, 1200).unwrap();
    let pair = factorized_pair(&grid, 1, &spec, System::One).unwrap();
    let minus = eigen_decompose(&pair.h_minus, 3, grid.h()).unwrap();
    let plus = eigen_decompose(&pair.h_plus, 4, grid.h()).unwrap();
    for k in 0..3 {
        let img = susy_map(&pair.ladder, &minus.vectors[k], minus.values[k], 1e-6).unwrap();
        assert!(img.residual < 1e-9, "residual {}", img.residual);
        assert!((img.norm_ratio - 1.0).abs() < 1e-9);
        // Image is the next H₊ eigenvector up to sign.
        let dot: f64 = img.vector.iter().zip(&plus.vectors[k + 1]).map(|(a, b)| a * b).sum::<f64>() * grid.h();
        assert!((dot.abs() - 1.0).abs() < 1e-8, "overlap {dot}");
    }
    let err = susy_map(&pair.ladder, &minus.vectors[0], 1e-9, 1e-6).unwrap_err();
    assert!(matches!(err, Error::BelowZeroModeThreshold { .. }));
    let mut bad = minus.vectors[0].clone();
    bad[10] += 1.0;
    assert!(matches!(susy_map(&pair.ladder, &bad, minus.values[0], 1e-6), Err(Error::NotAnEigenvector { .. })));
}

#[test]
fn algebra_check_detects_a_broken_pair() {
    let spec = SuperpotentialSpec::linear(1.0, 0.5).unwrap();
    let grid = make_grid(20.0, 300).unwrap();
    let mut pair = factorized_pair(&grid, 1, &spec, System::One).unwrap();
    assert!(algebra_check(&pair).unwrap().max_relative() < 1e-12);
    let mut diag = pair.h_plus.diag().to_vec();
    diag[5] += 1e-3;
    pair.h_plus = SymTridiagonal::new(diag, pair.h_plus.off().to_vec()).unwrap();
    let res = algebra_check(&pair).unwrap();
    assert!(res.q1_squared_minus_h > 1e-4);
    assert_eq!(res.w_q1_anticommutator, 0.0);
}

#[test]
fn generic_ladder_is_isospectral() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let n = rng.gen_range(50..300);
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(2.0..3.0)).collect();
        let sub: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..-0.2)).collect();
        let a = Ladder::new(n + 1, n, diag, sub).unwrap();
        let pair = partner_hamiltonians(&a);
        let rep = pair_spectra(&pair, 6, &PairingOptions::default()).unwrap();
        assert!(!rep.residuals.pairing_violation, "{}", rep.residuals.max_pair_delta);
    }
}
