//! Coupler statistics against numerically exponentiated-Hamiltonian
//! evolution on truncated tensor-product spaces.

use sqlab::couplers::*;
use sqlab::fockspace::multimode::{Ladder, MultiMode, Term};
use sqlab::fockspace::{oracle_observable, DensityMatrix, Observable};
use sqlab::C64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// -iH t terms for the nonlinear-exchange Hamiltonian at omega = mu = 0.
fn nlx_terms(l: [f64; 4], t: f64) -> Vec<Term> {
    let k = C64::new(0.0, -t);
    vec![
        Term { coeff: k * l[0], ops: vec![(0, Ladder::Raise), (0, Ladder::Raise)] },
        Term { coeff: k * l[0], ops: vec![(0, Ladder::Lower), (0, Ladder::Lower)] },
        Term { coeff: k * l[1], ops: vec![(1, Ladder::Raise), (1, Ladder::Raise)] },
        Term { coeff: k * l[1], ops: vec![(1, Ladder::Lower), (1, Ladder::Lower)] },
        Term { coeff: k * l[2], ops: vec![(0, Ladder::Lower), (1, Ladder::Raise)] },
        Term { coeff: k * l[2], ops: vec![(0, Ladder::Raise), (1, Ladder::Lower)] },
        Term { coeff: k * l[3], ops: vec![(0, Ladder::Lower), (1, Ladder::Lower)] },
        Term { coeff: k * l[3], ops: vec![(0, Ladder::Raise), (1, Ladder::Raise)] },
    ]
}

/// -iH t terms for the symmetric four-mode Hamiltonian.
fn sym_terms(l: [f64; 3], t: f64) -> Vec<Term> {
    let k = C64::new(0.0, -t);
    vec![
        Term { coeff: k * l[0], ops: vec![(0, Ladder::Lower), (2, Ladder::Lower)] },
        Term { coeff: k * l[0], ops: vec![(0, Ladder::Raise), (2, Ladder::Raise)] },
        Term { coeff: k * l[1], ops: vec![(0, Ladder::Lower), (1, Ladder::Raise)] },
        Term { coeff: k * l[1], ops: vec![(0, Ladder::Raise), (1, Ladder::Lower)] },
        Term { coeff: k * l[2], ops: vec![(1, Ladder::Lower), (3, Ladder::Lower)] },
        Term { coeff: k * l[2], ops: vec![(1, Ladder::Raise), (3, Ladder::Raise)] },
    ]
}

#[test]
fn nlx_full_oracle_equivalence() {
    // dims 32^2, lambda t <= 2: analytic g2, S, Q, W against the evolved
    // state within 1e-5
    let lambdas = [0.25, 0.25, 1.0, 0.25];
    let config = CouplerConfig::NlExchange { lambdas, omegas: [0.0, 0.0], mus: [0.0, 0.0] };
    let alphas = vec![C64::new(0.8, 0.2), C64::new(0.3, -0.2)];
    let input = InputState::Coherent(alphas.clone());
    let mm = MultiMode::new(&[32, 32]);
    let t = 1.2;
    let bound = t * lambdas.iter().sum::<f64>() * 2.0 * 32.0;
    let psi = mm.expmv(&nlx_terms(lambdas, t), &mm.coherent(&[alphas[0], alphas[1]]), bound);
    // g2 of mode 1
    let n_or = mm.mean_n(0, &psi);
    let g2_or = mm.second_factorial_moment(0, &psi) / (n_or * n_or);
    let g2_cl = correlation_g2(&config, t, 0.0, &input, 0).unwrap();
    assert!((g2_cl - g2_or).abs() < 1e-5, "g2 {g2_cl} vs {g2_or}");
    // S, Q of mode 1 from the evolved quadrature variances
    let x_terms = vec![
        Term { coeff: c(0.5), ops: vec![(0, Ladder::Lower)] },
        Term { coeff: c(0.5), ops: vec![(0, Ladder::Raise)] },
    ];
    let y_terms = vec![
        Term { coeff: C64::new(0.0, -0.5), ops: vec![(0, Ladder::Lower)] },
        Term { coeff: C64::new(0.0, 0.5), ops: vec![(0, Ladder::Raise)] },
    ];
    let var_of = |terms: &[Term]| {
        let tv = mm.apply_terms(terms, &psi);
        let mean: C64 = psi.iter().zip(tv.iter()).map(|(a, b)| a.conj() * b).sum();
        let second: f64 = tv.iter().map(|x| x.norm_sqr()).sum();
        second - mean.norm_sqr()
    };
    let (s_cl, q_cl) = quadrature_squeezing(&config, t, &input, &[0]).unwrap();
    let s_or = (var_of(&x_terms) - 0.25) / 0.25;
    let q_or = (var_of(&y_terms) - 0.25) / 0.25;
    assert!((s_cl - s_or).abs() < 1e-5, "S {s_cl} vs {s_or}");
    assert!((q_cl - q_or).abs() < 1e-5, "Q {q_cl} vs {q_or}");
    // Wigner of mode 1 at a few points
    let rho = DensityMatrix { dim: 32, entries: mm.reduced_density(0, &psi) };
    for &(x, y) in &[(0.0, 0.0), (0.8, -0.4), (-0.5, 0.6)] {
        let w_cl = quasiprobability_value(&config, t, &input, 0, C64::new(x, y), 0).unwrap();
        let w_or = oracle_observable(&rho, Observable::Wigner(C64::new(x, y))).unwrap();
        assert!((w_cl - w_or).abs() < 1e-5, "W({x},{y}) {w_cl} vs {w_or}");
    }
}

#[test]
fn nlx_fock_input_wigner_against_oracle() {
    let lambdas = [0.25, 0.25, 1.0, 0.25];
    let config = CouplerConfig::NlExchange { lambdas, omegas: [0.0, 0.0], mus: [0.0, 0.0] };
    let t = 0.35;
    let mm = MultiMode::new(&[24, 24]);
    let psi = mm.expmv(&nlx_terms(lambdas, t), &mm.fock(&[1, 0]), t * 1.75 * 2.0 * 24.0);
    let rho = DensityMatrix { dim: 24, entries: mm.reduced_density(0, &psi) };
    let input = InputState::Fock(vec![1, 0]);
    for &(x, y) in &[(0.0, 0.0), (0.5, 0.3)] {
        let w_cl = quasiprobability_value(&config, t, &input, 0, C64::new(x, y), 0).unwrap();
        let w_or = oracle_observable(&rho, Observable::Wigner(C64::new(x, y))).unwrap();
        assert!((w_cl - w_or).abs() < 1e-5, "({x},{y}): {w_cl} vs {w_or}");
    }
}

#[test]
fn asymmetric_statistics_against_oracle() {
    let l1 = 0.6;
    let config = CouplerConfig::Asymmetric { lambda1: l1 };
    let l2 = l1 / 2f64.sqrt();
    let t = 0.9;
    let k = C64::new(0.0, -t);
    // H = i l1 (a1 a2 - h.c.) + i l2 (a1 a3d - h.c.) + i l2 (a2 a3d - h.c.)
    // (signs fixed by the equations of motion dA1 = -l1 A2d - l2 A3, ...)
    let terms = vec![
        Term { coeff: k * C64::new(0.0, 1.0) * l1, ops: vec![(0, Ladder::Lower), (1, Ladder::Lower)] },
        Term { coeff: k * C64::new(0.0, -1.0) * l1, ops: vec![(0, Ladder::Raise), (1, Ladder::Raise)] },
        Term { coeff: k * C64::new(0.0, 1.0) * l2, ops: vec![(0, Ladder::Lower), (2, Ladder::Raise)] },
        Term { coeff: k * C64::new(0.0, -1.0) * l2, ops: vec![(2, Ladder::Lower), (0, Ladder::Raise)] },
        Term { coeff: k * C64::new(0.0, 1.0) * l2, ops: vec![(1, Ladder::Lower), (2, Ladder::Raise)] },
        Term { coeff: k * C64::new(0.0, -1.0) * l2, ops: vec![(2, Ladder::Lower), (1, Ladder::Raise)] },
    ];
    let alphas = [C64::new(0.5, 0.2), C64::new(0.3, 0.0), C64::new(0.2, -0.1)];
    let mm = MultiMode::new(&[16, 16, 16]);
    let psi = mm.expmv(&terms, &mm.coherent(&alphas), t * 2.0 * 2.0 * 16.0);
    let input = InputState::Coherent(alphas.to_vec());
    for mode in 0..3 {
        let n_cl = mean_photon_number(&config, t, &input, mode).unwrap();
        let n_or = mm.mean_n(mode, &psi);
        assert!((n_cl - n_or).abs() < 1e-6, "mode {mode}: {n_cl} vs {n_or}");
    }
    // photon distribution of the signal mode
    let d = photon_number_distribution(&config, t, &input, 0, 24).unwrap();
    let rho = mm.reduced_density(0, &psi);
    for n in 0..10 {
        let or = rho[(n, n)].re;
        assert!((d.values[n] - or).abs() < 1e-6, "n={n}: {} vs {or}", d.values[n]);
    }
}

#[test]
fn symmetric_vacuum_gap_against_oracle() {
    // dim 8^4 sparse check of the super-Poissonian gap
    let lambdas = [0.1, 1.2, 0.5];
    let config = CouplerConfig::Symmetric { lambdas };
    let mm = MultiMode::new(&[8, 8, 8, 8]);
    for &t in &[0.4, 0.9] {
        let psi = mm.expmv(&sym_terms(lambdas, t), &mm.vacuum(), t * 1.8 * 2.0 * 8.0);
        for mode in [0usize, 2] {
            let n = mm.mean_n(mode, &psi);
            let gap_or = mm.second_factorial_moment(mode, &psi) - n * n;
            let gap_cl = vacuum_super_poisson_gap(&config, t, mode).unwrap();
            assert!(gap_cl >= 0.0);
            assert!((gap_cl - gap_or).abs() < 1e-5, "t={t} mode {mode}: {gap_cl} vs {gap_or}");
        }
    }
}

#[test]
fn symmetric_fock_g2_against_oracle() {
    let lambdas = [0.1, 1.2, 0.5];
    let config = CouplerConfig::Symmetric { lambdas };
    let ns = [2usize, 1, 1, 0];
    let input = InputState::Fock(ns.to_vec());
    let mm = MultiMode::new(&[12, 12, 12, 12]);
    let t = 0.7;
    let psi = mm.expmv(&sym_terms(lambdas, t), &mm.fock(&ns), t * 1.8 * 2.0 * 12.0);
    for mode in 0..4 {
        let n_or = mm.mean_n(mode, &psi);
        let g2_or = mm.second_factorial_moment(mode, &psi) / (n_or * n_or);
        let g2_cl = correlation_g2(&config, t, 0.0, &input, mode).unwrap();
        assert!((g2_cl - g2_or).abs() < 1e-5, "mode {mode}: {g2_cl} vs {g2_or}");
    }
}

#[test]
fn printed_asymmetric_identities_hold() {
    // the identity set quoted for the asymmetric tables
    let config = CouplerConfig::Asymmetric { lambda1: 0.85 };
    for i in 0..24 {
        let t = 5.0 * i as f64 / 23.0;
        let TimeCoefficients::Asymmetric { f, g, h, .. } = coefficients(&config, t).unwrap()
        else {
            panic!()
        };
        let r1 = f[0] * f[0] - f[1] * f[1] + f[2] * f[2] - f[3] * f[3] + f[4] * f[4]
            - f[5] * f[5]
            - 1.0;
        assert!(r1.abs() < 1e-10, "t={t}: {r1:.2e}");
        let r2 = f[0] * g[3] - f[1] * g[2] + f[2] * g[1] - f[3] * g[0] - f[4] * g[5]
            + f[5] * g[4];
        assert!(r2.abs() < 1e-10);
        let r3 = f[0] * g[2] - f[1] * g[3] + f[2] * g[0] - f[3] * g[1] - f[4] * g[4]
            + f[5] * g[5];
        assert!(r3.abs() < 1e-10);
        let rh = h[0] * h[0] - h[1] * h[1] + h[2] * h[2] - h[3] * h[3] + h[4] * h[4]
            - h[5] * h[5]
            - 1.0;
        assert!(rh.abs() < 1e-10);
    }
}

#[test]
fn nlx_coefficients_against_matrix_exponential() {
    // the coefficient table is the exponential of the 4x4 quadrature
    // generator; check it entry by entry through the evolved operators
    let lambdas = [0.3, 0.45, 0.8, 0.15];
    let config = CouplerConfig::NlExchange { lambdas, omegas: [0.7, 0.4], mus: [0.3, 0.9] };
    let mm = MultiMode::new(&[28, 28]);
    for &t in &[0.5, 1.1] {
        // evolve a coherent seed with the full (detuned) Hamiltonian in the
        // slowly varying frame: H = k0 n1 + j0 n2 + quadratic couplings
        let k0 = 0.7 + 0.3 / 2.0;
        let j0 = 0.4 + 0.9 / 2.0;
        let k = C64::new(0.0, -t);
        let mut terms = nlx_terms(lambdas, t);
        terms.push(Term { coeff: k * k0, ops: vec![(0, Ladder::Raise), (0, Ladder::Lower)] });
        terms.push(Term { coeff: k * j0, ops: vec![(1, Ladder::Raise), (1, Ladder::Lower)] });
        let alphas = [C64::new(0.3, 0.1), C64::new(-0.2, 0.2)];
        let psi = mm.expmv(&terms, &mm.coherent(&alphas), t * 4.0 * 2.0 * 28.0);
        // <a_1(t)> from the Heisenberg table vs the Schroedinger expectation
        let coeffs = coefficients(&config, t).unwrap();
        let form = coeffs.form(0);
        let want = form.lower[0] * alphas[0]
            + form.raise[0] * alphas[0].conj()
            + form.lower[1] * alphas[1]
            + form.raise[1] * alphas[1].conj();
        let mut a_psi = vec![C64::new(0.0, 0.0); psi.len()];
        mm.apply_lower(0, &psi, &mut a_psi);
        let got: C64 = psi.iter().zip(a_psi.iter()).map(|(a, b)| a.conj() * b).sum();
        assert!((want - got).norm() < 1e-6, "t={t}: {want} vs {got}");
    }
}
