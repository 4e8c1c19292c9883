use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symtomo::fock::{hermite_functions, random_density_state};
use symtomo::linalg;
use symtomo::positivity::{build_m, build_m_classical, build_m_omega, SliceFunction};
use symtomo::quadrature::DiskGrid;
use symtomo::reconstruction::{inverse_radon, purity_from_characteristic};
use symtomo::tomogram::{
    eval_from_state, fock_second_moments, second_moment_p, second_moment_q, tomogram_via_fft, GridSpec,
    TomogramSource,
};
use symtomo::weyl_heisenberg::{characteristic_fn, cocycle, compose, inverse};
use symtomo::{DensityState, GroupElement, PhasePoint};

fn state(seed: u64, max_dim: usize) -> DensityState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 2 + (seed as usize) % (max_dim - 1);
    let rank = 1 + (seed as usize / 7) % dim;
    random_density_state(dim, rank, &mut rng)
}

fn point() -> impl Strategy<Value = PhasePoint> {
    (-2.5..2.5f64, -2.5..2.5f64).prop_map(|(mu, nu)| PhasePoint::new(mu, nu))
}

fn element() -> impl Strategy<Value = GroupElement> {
    (-2.5..2.5f64, -2.5..2.5f64, -3.0..3.0f64).prop_map(|(mu, nu, t)| GroupElement::new(mu, nu, t))
}

fn ray() -> impl Strategy<Value = PhasePoint> {
    (0.3..3.0f64, 0.0..std::f64::consts::TAU).prop_map(|(s, a)| PhasePoint::new(s * a.cos(), s * a.sin()))
}

fn assert_same_element(a: GroupElement, b: GroupElement) {
    assert_abs_diff_eq!(a.mu, b.mu, epsilon = 1e-12);
    assert_abs_diff_eq!(a.nu, b.nu, epsilon = 1e-12);
    assert_abs_diff_eq!(a.t, b.t, epsilon = 1e-12);
}

/// Gauss-Hermite rule for `e^{-x²}`: nodes from the Jacobi matrix, weights from the
/// Christoffel function `1 / Σ p_j(x)²` of the orthonormal Hermite polynomials.
fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    let weights = nodes.iter().map(|&x| 1.0 / orthonormal_hermite(n, x).iter().map(|p| p * p).sum::<f64>()).collect();
    (nodes, weights)
}

fn orthonormal_hermite(count: usize, x: f64) -> Vec<f64> {
    let mut p = vec![std::f64::consts::PI.powf(-0.25)];
    let mut prev = 0.0;
    for j in 0..count - 1 {
        let next = (2f64.sqrt() * x * p[j] - (j as f64).sqrt() * prev) / ((j + 1) as f64).sqrt();
        prev = p[j];
        p.push(next);
    }
    p
}

#[test]
fn hermite_functions_are_orthonormal() {
    let (nodes, weights) = gauss_hermite(48);
    let tables: Vec<Vec<f64>> = nodes.iter().map(|&x| hermite_functions(33, x)).collect();
    for m in 0..=32 {
        for n in 0..=32 {
            let overlap: f64 = nodes
                .iter()
                .zip(&weights)
                .zip(&tables)
                .map(|((&x, &w), u)| w * (x * x).exp() * u[m] * u[n])
                .sum();
            let expect = if m == n { 1.0 } else { 0.0 };
            assert!((overlap - expect).abs() < 1e-8, "<u_{m}, u_{n}> = {overlap}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_law(a in element(), b in element(), c in element()) {
        assert_same_element(compose(compose(a, b), c), compose(a, compose(b, c)));
        assert_same_element(compose(a, GroupElement::IDENTITY), a);
        assert_same_element(compose(a, inverse(a)), GroupElement::IDENTITY);
        assert_same_element(compose(inverse(a), a), GroupElement::IDENTITY);
    }

    #[test]
    fn cocycle_is_antisymmetric_and_bilinear(u in point(), v in point(), w in point(), x in -2.0..2.0f64) {
        assert_abs_diff_eq!(cocycle(u, v), -cocycle(v, u), epsilon = 1e-14);
        assert_abs_diff_eq!(cocycle(u, u), 0.0, epsilon = 1e-14);
        let lhs = cocycle(u.scale(x) + v, w);
        assert_abs_diff_eq!(lhs, x * cocycle(u, w) + cocycle(v, w), epsilon = 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn slice_transform_is_a_characteristic_function(seed in 0u64..10_000, v in point()) {
        let rho = state(seed, 6);
        let src = TomogramSource::from_state(&rho);
        let slice = SliceFunction::new(&src).unwrap();
        let psi = slice.eval(v).unwrap();
        let flipped = slice.eval(-v).unwrap();
        prop_assert!((flipped - psi.conj()).norm() < 1e-8);
        prop_assert!(psi.norm() <= 1.0 + 1e-8);
        prop_assert!((psi - characteristic_fn(&rho, v).unwrap()).norm() < 1e-8);
        prop_assert!((slice.origin_value() - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn quadrature_and_fft_routes_agree(seed in 0u64..10_000, v in ray()) {
        let rho = state(seed, 6);
        let grid = TomogramSource::from_state(&rho).auto_grid(v, 121).unwrap();
        let fft = tomogram_via_fft(&rho, &grid, v).unwrap();
        for (x, w) in grid.points().into_iter().zip(fft) {
            prop_assert!((eval_from_state(&rho, x, v).unwrap() - w).abs() < 1e-6);
        }
    }

    #[test]
    fn second_moments_match_fock(seed in 0u64..10_000) {
        let rho = state(seed, 8);
        let src = TomogramSource::from_state(&rho);
        let quad = GridSpec::symmetric(14.0, 281).unwrap();
        let (q2, p2) = fock_second_moments(&rho).unwrap();
        prop_assert!((second_moment_q(&src, &quad).unwrap() - q2).abs() < 1e-8);
        prop_assert!((second_moment_p(&src, &quad).unwrap() - p2).abs() < 1e-8);
    }

    #[test]
    fn gram_matrices_follow_permutations(
        seed in 0u64..10_000,
        points in proptest::collection::vec(element(), 2..8),
        rotate in 1usize..8,
    ) {
        let rho = state(seed, 5);
        let psi = |v: PhasePoint| characteristic_fn(&rho, v);
        let n = points.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + rotate) % n).collect();
        let shuffled: Vec<GroupElement> = perm.iter().map(|&i| points[i]).collect();
        let phase: Vec<PhasePoint> = points.iter().map(|g| g.project()).collect();
        let phase_shuffled: Vec<PhasePoint> = shuffled.iter().map(|g| g.project()).collect();
        let pairs = [
            (build_m(psi, &points).unwrap(), build_m(psi, &shuffled).unwrap()),
            (build_m_omega(psi, &phase).unwrap(), build_m_omega(psi, &phase_shuffled).unwrap()),
            (build_m_classical(psi, &phase).unwrap(), build_m_classical(psi, &phase_shuffled).unwrap()),
        ];
        for (a, b) in &pairs {
            for j in 0..n {
                for k in 0..n {
                    prop_assert!((b.matrix[(j, k)] - a.matrix[(perm[j], perm[k])]).norm() < 1e-12);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn purity_is_bounded(seed in 0u64..10_000) {
        let rho = state(seed, 6);
        let p = purity_from_characteristic(&TomogramSource::from_state(&rho), &DiskGrid::new(10.0, 96).unwrap()).unwrap();
        prop_assert!(p > 0.0 && p <= 1.0 + 1e-3);
        prop_assert!((p - rho.purity()).abs() < 1e-3);
    }
}

#[test]
fn inversion_roundtrip_on_a_wide_disk() {
    let grid = DiskGrid::new(12.0, 192).unwrap();
    for seed in [3u64, 11, 29] {
        let rho = state(seed, 8);
        let res = inverse_radon(&TomogramSource::from_state(&rho), 32, &grid).unwrap();
        assert!(res.boundary_psi_max.unwrap() < 1e-8);
        let err = linalg::frobenius_distance(res.rho(), &linalg::embed(rho.matrix(), 32));
        assert!(err <= 1e-3, "dim {} error {err:.3e}", rho.dim());
    }
}

#[test]
fn refining_the_disk_reduces_the_error() {
    let rho = state(5, 6);
    let src = TomogramSource::from_state(&rho);
    let truth = linalg::embed(rho.matrix(), 32);
    let errors: Vec<f64> = [(6.0, 64), (8.0, 96), (10.0, 128)]
        .iter()
        .map(|&(r, n)| {
            let res = inverse_radon(&src, 32, &DiskGrid::new(r, n).unwrap()).unwrap();
            linalg::frobenius_distance(res.rho(), &truth)
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}
