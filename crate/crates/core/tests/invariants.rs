//! Property-based invariants across the library.

use proptest::prelude::*;
use zollspec_core::linalg::{structured_schur, CMatrix};
use zollspec_core::numrange::{convex_hull, field_of_values, hausdorff};
use zollspec_core::operator::{hamiltonian, spectrum};
use zollspec_core::polysphere::{poisson_bracket, AmbientPolynomial, MonomialSpec, SpherePoint};
use zollspec_core::pseudospec::{sigma_min, tube_mass};
use zollspec_core::radon::{bracket_field, radon_geodesic, radon_poly, GeodesicPoint};
use zollspec_core::sphharm::{harmonic_coefficients, HarmonicExpansion};
use zollspec_core::Complex64;

fn monomial(max_degree: u32) -> impl Strategy<Value = MonomialSpec> {
    (
        0..=max_degree,
        0..=max_degree,
        0..=max_degree,
        -2.0..2.0f64,
        -2.0..2.0f64,
    )
        .prop_filter("degree bound", move |(a, b, c, _, _)| {
            a + b + c <= max_degree
        })
        .prop_map(|(px, py, pz, re, im)| MonomialSpec { px, py, pz, re, im })
}

fn polynomial(max_degree: u32) -> impl Strategy<Value = AmbientPolynomial> {
    prop::collection::vec(monomial(max_degree), 1..5)
        .prop_map(|m| AmbientPolynomial::from_monomials(&m))
}

fn unit_normal() -> impl Strategy<Value = SpherePoint> {
    (-1.0..1.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(z, phi)| SpherePoint::from_angles(z.acos(), phi))
}

fn complex_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |e| {
        CMatrix::from_fn(n, n, |i, j| Complex64::new(e[i * n + j].0, e[i * n + j].1))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bracket_is_antisymmetric_and_leibniz(p in polynomial(3), q in polynomial(3), r in polynomial(2)) {
        let pq = poisson_bracket(&p, &q);
        let qp = poisson_bracket(&q, &p);
        prop_assert!(pq.max_coefficient_distance(&-&qp) < 1e-12);
        let lhs = poisson_bracket(&p, &(&q * &r));
        let rhs = &(&poisson_bracket(&p, &q) * &r) + &(&q * &poisson_bracket(&p, &r));
        prop_assert!(lhs.max_coefficient_distance(&rhs) < 1e-10);
    }

    #[test]
    fn radius_is_a_casimir(p in polynomial(4)) {
        let b = poisson_bracket(&p, &AmbientPolynomial::radius_squared());
        prop_assert!(b.is_negligible(1e-12));
    }

    #[test]
    fn harmonic_expansion_reproduces_the_polynomial(p in polynomial(4), n in unit_normal()) {
        let exp: HarmonicExpansion = harmonic_coefficients(&p, 4).unwrap();
        prop_assert!((exp.eval(&n) - p.eval(&n)).norm() < 1e-10);
    }

    #[test]
    fn radon_poly_agrees_with_quadrature(p in polynomial(4), n in unit_normal()) {
        let tilde = radon_poly(&p, 4).unwrap();
        let gamma = GeodesicPoint::new(n);
        let direct = radon_geodesic(&p, &gamma, 9).unwrap();
        prop_assert!((tilde.eval(&n) - direct).norm() < 1e-10);
        // averages over a circle do not depend on its orientation
        prop_assert!((tilde.eval(&n.antipode()) - direct).norm() < 1e-10);
    }

    #[test]
    fn bracket_field_is_odd(p in polynomial(4), n in unit_normal()) {
        let b = bracket_field(&p, 4).unwrap();
        prop_assert!((b.eval(&n) + b.eval(&n.antipode())).norm() < 1e-10);
    }

    #[test]
    fn real_potentials_give_normal_operators(p in polynomial(2), re in -3.0..10.0f64, im in -2.0..2.0f64) {
        let v = p.real_part();
        let h = hamiltonian(&v, 4).unwrap();
        let spec = spectrum(&h, false).unwrap();
        let lam = Complex64::new(re, im);
        let dist = spec.eigenvalues.iter().map(|e| (e - lam).norm()).fold(f64::INFINITY, f64::min);
        prop_assert!((sigma_min(&h, lam) - dist).abs() < 1e-9 * spec.operator_norm.max(1.0));
    }

    #[test]
    fn eigenvalues_sum_to_the_trace(p in polynomial(2)) {
        let h = hamiltonian(&p, 5).unwrap();
        let spec = spectrum(&h, false).unwrap();
        prop_assert_eq!(spec.eigenvalues.len(), 36);
        let sum: Complex64 = spec.eigenvalues.iter().sum();
        prop_assert!((sum - h.matrix().trace()).norm() < 1e-9 * spec.operator_norm.max(1.0));
    }

    #[test]
    fn field_of_values_contains_the_spectrum(a in complex_matrix(5)) {
        let region = field_of_values(&a, 64).unwrap();
        prop_assert!(region.is_convex());
        let eig = structured_schur(&a, "random").unwrap().eigenvalues();
        for e in eig {
            prop_assert!(region.contains(e, 1e-9), "eigenvalue {} outside", e);
        }
    }

    #[test]
    fn hull_contains_its_points(pts in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..40)) {
        let points: Vec<Complex64> = pts.iter().map(|(a, b)| Complex64::new(*a, *b)).collect();
        let hull = convex_hull(&points);
        for p in &points {
            prop_assert!(hull.contains(*p, 1e-9));
        }
        prop_assert!(hausdorff(&hull, &hull) < 1e-14);
    }

    #[test]
    fn hausdorff_is_symmetric(
        a in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 3..12),
        b in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 3..12),
    ) {
        let ha = convex_hull(&a.iter().map(|(x, y)| Complex64::new(*x, *y)).collect::<Vec<_>>());
        let hb = convex_hull(&b.iter().map(|(x, y)| Complex64::new(*x, *y)).collect::<Vec<_>>());
        prop_assert!((hausdorff(&ha, &hb) - hausdorff(&hb, &ha)).abs() < 1e-12);
    }

    #[test]
    fn tube_mass_is_a_fraction(
        coeffs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 7),
        n in unit_normal(),
        w in 0.05..1.5f64,
    ) {
        let c: Vec<Complex64> = coeffs.iter().map(|(a, b)| Complex64::new(*a, *b)).collect();
        prop_assume!(c.iter().any(|z| z.norm() > 1e-3));
        let m = tube_mass(3, &c, &GeodesicPoint::new(n), w).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&m));
    }
}
