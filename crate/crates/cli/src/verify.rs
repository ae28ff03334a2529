//! The acceptance checks behind `zollspec verify`.
//!
//! Every check runs on fixed potentials and parameters; only the random
//! sample points depend on the configuration seed, and the determinism check
//! recomputes the configuration's own data artifacts.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use zollspec_core::format::fmt_f64;
use zollspec_core::linalg::triangular_sigma_min;
use zollspec_core::numrange::{hausdorff, limit_range, limit_values, numerical_range_k};
use zollspec_core::operator::{
    block_diagonal_part, cluster_assign, hamiltonian, spectrum, time_average, ClusterLabel,
    SphereConstants,
};
use zollspec_core::polysphere::{AmbientPolynomial, SpherePoint};
use zollspec_core::pseudospec::{
    cluster_quasimode, decay_fit, localized_quasimode, matrix_coefficient_errors, sigma_min,
    tube_mass,
};
use zollspec_core::radon::{
    bracket_field, funk_coefficient, radon_geodesic, radon_poly, GeodesicPoint,
};
use zollspec_core::sphharm::{gram_deviation, multiplication_matrix};
use zollspec_core::Complex64;

use crate::commands::{data_artifacts, tube_half_width};
use crate::config::RunConfig;
use crate::CliError;

/// Outcome of one acceptance check. Runtimes are logged, never recorded, so
/// that reports stay byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub measured: BTreeMap<String, f64>,
    pub thresholds: BTreeMap<String, f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub all_passed: bool,
    pub config: RunConfig,
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn failed(&self) -> Vec<u32> {
        self.criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.id)
            .collect()
    }

    /// Pretty JSON with every float printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFormatter::default());
        self.serialize(&mut ser).expect("report serializes");
        buf.push(b'\n');
        String::from_utf8(buf).expect("JSON is UTF-8")
    }
}

/// Pretty printer that writes floats through [`fmt_f64`].
#[derive(Default)]
struct FixedFormatter {
    pretty: serde_json::ser::PrettyFormatter<'static>,
}

impl serde_json::ser::Formatter for FixedFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}

struct Check {
    id: u32,
    name: &'static str,
    measured: BTreeMap<String, f64>,
    thresholds: BTreeMap<String, f64>,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new(id: u32, name: &'static str) -> Self {
        Check {
            id,
            name,
            measured: BTreeMap::new(),
            thresholds: BTreeMap::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn measure(&mut self, key: &str, value: f64) {
        self.measured.insert(key.to_string(), value);
    }

    fn threshold(&mut self, key: &str, value: f64) {
        self.thresholds.insert(key.to_string(), value);
    }

    /// Records a failure message unless `ok`.
    fn require(&mut self, ok: bool, message: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(message());
        }
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn runtime(&mut self, started: Instant, limit: Duration) {
        let took = started.elapsed();
        log::info!("criterion {} ({}) took {:.2?}", self.id, self.name, took);
        self.require(took <= limit, || {
            format!("runtime exceeded {} s", limit.as_secs())
        });
    }

    fn finish(self) -> CriterionResult {
        let passed = self.failures.is_empty();
        let mut parts = self.notes;
        parts.extend(self.failures.into_iter().map(|f| format!("FAILED: {f}")));
        CriterionResult {
            id: self.id,
            name: self.name.to_string(),
            passed,
            measured: self.measured,
            thresholds: self.thresholds,
            detail: parts.join("; "),
        }
    }
}

/// `(2x + iy)^2`, the quadratic example used by several checks.
pub fn quadratic_example() -> AmbientPolynomial {
    (&AmbientPolynomial::x().scale_real(2.0) + &AmbientPolynomial::y().scale(Complex64::i())).pow(2)
}

type CheckFn = fn(&mut Check, &RunConfig) -> Result<(), CliError>;

const CHECKS: [(u32, &str, CheckFn); 12] = [
    (1, "basis integrity", basis_integrity),
    (2, "exact spectrum of analytic potentials", exact_spectrum),
    (3, "cluster structure", cluster_structure),
    (4, "geodesic average eigenvalues", funk_eigenvalues),
    (5, "quadratic example bracket", quadratic_bracket),
    (6, "projector estimate", projector_estimate),
    (7, "matrix-coefficient law", matrix_coefficient_law),
    (8, "numerical range limit", numerical_range_limit),
    (9, "pseudospectrum evidence", pseudospectrum_evidence),
    (10, "normal-case oracle", normal_case_oracle),
    (11, "averaging identity", averaging_identity),
    (12, "determinism", determinism),
];

/// Runs the checks whose ids are listed (all when `ids` is empty).
pub fn run_criteria(cfg: &RunConfig, ids: &[u32]) -> Vec<CriterionResult> {
    CHECKS
        .iter()
        .filter(|(id, _, _)| ids.is_empty() || ids.contains(id))
        .map(|(id, name, f)| {
            let mut check = Check::new(*id, name);
            if let Err(e) = f(&mut check, cfg) {
                check.failures.push(format!("computation error: {e}"));
            }
            let result = check.finish();
            log::info!(
                "criterion {id}: {}",
                if result.passed { "pass" } else { "FAIL" }
            );
            result
        })
        .collect()
}

pub fn verify(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let criteria = run_criteria(cfg, &[]);
    Ok(VerifyReport {
        all_passed: criteria.iter().all(|c| c.passed),
        config: cfg.clone(),
        criteria,
    })
}

fn basis_integrity(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    let started = Instant::now();
    let dev = gram_deviation(40);
    c.measure("gram_max_deviation", dev);
    c.threshold("gram_max_deviation", 1e-10);
    c.require(dev <= 1e-10, || format!("Gram deviation {dev:e} at L = 40"));
    c.note("L = 40, Gauss-Legendre x trapezoid rule with band 80");
    c.runtime(started, Duration::from_secs(30));
    Ok(())
}

fn exact_spectrum(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    let started = Instant::now();
    let zeta = AmbientPolynomial::zeta();
    let cases = [
        ("zeta2", zeta.pow(2)),
        (
            "zeta2_half_zeta4",
            &zeta.pow(2) + &zeta.pow(4).scale_real(0.5),
        ),
    ];
    let lmax = 16;
    c.threshold("max_distance_to_laplace_spectrum", 1e-8);
    for (label, v) in cases {
        let spec = spectrum(&hamiltonian(&v, lmax)?, false)?;
        let worst = spec
            .eigenvalues
            .iter()
            .map(|lam| {
                (0..=lmax)
                    .map(|l| (lam - SphereConstants::laplace_eigenvalue(l)).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        c.measure(&format!("{label}_max_distance"), worst);
        c.require(worst <= 1e-8, || {
            format!("{label}: an eigenvalue is {worst:e} from every l(l+1)")
        });
    }
    c.note("L = 16");
    c.runtime(started, Duration::from_secs(60));
    Ok(())
}

fn cluster_structure(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    let started = Instant::now();
    let v = quadratic_example();
    let lmax = 20;
    let upto = 18;
    let spec = cluster_assign(spectrum(&hamiltonian(&v, lmax)?, false)?, &v, lmax);
    let radius = spec.disk_radius;
    c.measure("disk_radius", radius);
    let mut outside = 0usize;
    let mut unassigned = 0usize;
    for (lam, label) in spec.eigenvalues.iter().zip(&spec.cluster_of) {
        match label {
            ClusterLabel::Assigned(k) if *k <= upto => {
                if (lam - SphereConstants::cluster_center(*k)).norm() > radius {
                    outside += 1;
                }
            }
            ClusterLabel::Unassigned => unassigned += 1,
            _ => {}
        }
    }
    c.measure("assigned_outside_disk", outside as f64);
    c.measure("unassigned", unassigned as f64);
    c.require(outside == 0, || {
        format!("{outside} assigned eigenvalues lie outside their disk")
    });
    let groups = spec.cluster_groups(upto);
    let mut mismatched = Vec::new();
    for g in &groups {
        if g.count != g.expected {
            mismatched.push(format!(
                "D_{}..D_{} holds {} (expected {})",
                g.first, g.last, g.count, g.expected
            ));
        }
    }
    let merged: Vec<String> = groups
        .iter()
        .filter(|g| g.first != g.last)
        .map(|g| format!("D_{}..D_{}", g.first, g.last))
        .collect();
    c.measure("disk_groups", groups.len() as f64);
    c.measure("mismatched_groups", mismatched.len() as f64);
    c.require(mismatched.is_empty(), || mismatched.join(", "));
    c.note(format!(
        "L = 20, k <= 18; overlapping disks counted jointly: {}",
        if merged.is_empty() {
            "none".to_string()
        } else {
            merged.join(", ")
        }
    ));
    c.runtime(started, Duration::from_secs(120));
    Ok(())
}

fn funk_eigenvalues(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    for (l, want) in [(2usize, -0.5), (4, 0.375), (6, -0.3125)] {
        let got = funk_coefficient(l);
        c.measure(&format!("c_{l}"), got);
        c.threshold(&format!("c_{l}"), want);
        c.require(got == want, || format!("c_{l} = {got}, expected {want}"));
    }
    let gamma = GeodesicPoint::from_normal(1.0, 0.0, 0.0)?;
    let zeta = AmbientPolynomial::zeta();
    let mut worst_quad = 0.0f64;
    for l in 1..=10usize {
        let v = zeta.pow(2 * l as u32);
        // zeta^{2l} equals 1 at (1, 0, 0)
        let avg = radon_geodesic(&v, &gamma, 4 * l + 1)?;
        worst_quad = worst_quad.max((avg - Complex64::new(funk_coefficient(2 * l), 0.0)).norm());
    }
    c.measure("geodesic_average_max_error", worst_quad);
    c.threshold("geodesic_average_max_error", 1e-12);
    c.require(worst_quad <= 1e-12, || {
        format!("geodesic average of zeta^(2l) off by {worst_quad:e}")
    });
    let mut worst_ratio = 0.0f64;
    let mut ok = true;
    for l in 5..=100usize {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let dev = (funk_coefficient(2 * l) * sign * (l as f64 * PI).sqrt() - 1.0).abs();
        worst_ratio = worst_ratio.max(dev * l as f64);
        ok &= dev <= 0.15 / l as f64;
    }
    c.measure("wallis_max_l_times_deviation", worst_ratio);
    c.threshold("wallis_max_l_times_deviation", 0.15);
    c.require(ok, || {
        format!("Wallis bound violated: max l*|dev| = {worst_ratio}")
    });
    c.note("geodesic averages for l = 1..10 at normal (1,0,0); Wallis check for l = 5..100");
    Ok(())
}

/// Uniform point on the sphere from two uniform variates.
fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    SpherePoint::from_angles(z.clamp(-1.0, 1.0).acos(), phi)
}

fn quadratic_bracket(c: &mut Check, cfg: &RunConfig) -> Result<(), CliError> {
    let b = bracket_field(&quadratic_example(), 2)?;
    let shape = &AmbientPolynomial::z()
        * &(&AmbientPolynomial::x().pow(2).scale_real(4.0) + &AmbientPolynomial::y().pow(2));
    let constant = 2.0;
    let dist = b.max_coefficient_distance(&shape.scale_real(constant));
    c.measure("coefficient_distance", dist);
    c.threshold("coefficient_distance", 1e-12);
    c.threshold("proportionality_constant", constant);
    c.require(dist <= 1e-12, || {
        format!("bracket differs from 2 z (4x^2 + y^2) by {dist:e}")
    });

    let cr = 1.5;
    let tb = bracket_field(&AmbientPolynomial::zeta().pow(2).scale_real(cr), 2)?;
    let k = 4.0 * cr * cr * funk_coefficient(2).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = random_point(&mut rng);
        let want = k * p.z() * (p.x() * p.x() + p.y() * p.y());
        worst = worst.max((tb.eval(&p) - Complex64::new(want, 0.0)).norm());
    }
    c.measure("zeta2_identity_max_error", worst);
    c.threshold("zeta2_identity_max_error", 1e-10);
    c.require(worst <= 1e-10, || {
        format!("bracket identity for c zeta^2 off by {worst:e}")
    });
    c.note(format!(
        "c = {cr}, 1000 seeded random points (seed {})",
        cfg.seed
    ));
    Ok(())
}

fn projector_estimate(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    let v = quadratic_example();
    let lmax = 20;
    let spec = cluster_assign(spectrum(&hamiltonian(&v, lmax)?, false)?, &v, lmax);
    let mut pairs = Vec::new();
    for k in 5..=15usize {
        let p = spec.projector(k)?;
        let d = p.distance_to_harmonic();
        c.measure(&format!("distance_k{k:02}"), d);
        pairs.push((k as f64, d));
    }
    let fit = decay_fit(&pairs)?;
    c.measure("fitted_slope", fit.slope);
    c.threshold("slope_min", -1.3);
    c.threshold("slope_max", -0.7);
    c.require((-1.3..=-0.7).contains(&fit.slope), || {
        format!("slope {} outside [-1.3, -0.7]", fit.slope)
    });
    c.note("V = (2x+iy)^2, L = 20, k = 5..15");
    Ok(())
}

fn matrix_coefficient_law(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    let v = quadratic_example();
    let gamma = GeodesicPoint::from_normal(0.3, 0.4, 0.5)?;
    let ks: Vec<usize> = (10..=60).collect();
    let samples = matrix_coefficient_errors(&v, &gamma, &ks)?;
    for s in samples.iter().filter(|s| s.k % 10 == 0) {
        c.measure(&format!("error_k{}", s.k), s.error);
    }
    let fit = decay_fit(
        &samples
            .iter()
            .map(|s| (s.k as f64, s.error))
            .collect::<Vec<_>>(),
    )?;
    c.measure("fitted_slope", fit.slope);
    c.threshold("slope_min", -1.0);
    c.threshold("slope_max", -0.35);
    c.require((-1.0..=-0.35).contains(&fit.slope), || {
        format!("slope {} outside [-1.0, -0.35]", fit.slope)
    });
    c.note("V = (2x+iy)^2, normal (0.3, 0.4, 0.5) normalized, k = 10..60");
    Ok(())
}

fn numerical_range_limit(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    let v = quadratic_example();
    let limit = limit_range(&v, 20000)?;
    let diam = limit.diameter();
    c.measure("limit_diameter", diam);
    let threshold = 0.05 * diam;
    c.threshold("hausdorff_k40_max", threshold);
    let tilde = radon_poly(&v, 2)?;
    let values = limit_values(&tilde, 2000);
    let mut h = BTreeMap::new();
    for k in [5usize, 10, 20, 30, 40] {
        let r = numerical_range_k(&v, k, 360)?;
        let d = hausdorff(&r, &limit);
        c.measure(&format!("hausdorff_k{k:02}"), d);
        h.insert(k, d);
        if k == 40 {
            let delta = values.iter().map(|p| r.distance(*p)).fold(0.0, f64::max);
            c.measure("limit_values_outside_k40", delta);
        }
    }
    c.require(h[&40] <= threshold, || {
        format!("hausdorff at k = 40 is {} > {threshold}", h[&40])
    });
    c.require(h[&40] < h[&10], || {
        format!(
            "hausdorff did not shrink: k=10 {} vs k=40 {}",
            h[&10], h[&40]
        )
    });
    c.note("threshold 0.05 * diameter of the limit range, calibrated by pilot runs; 360 support angles, 20000 lattice points");
    Ok(())
}

fn pseudospectrum_evidence(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    let v = quadratic_example();
    let gamma = GeodesicPoint::from_normal(0.3, 0.4, -0.5)?;
    let n = gamma.normal();
    let bracket = bracket_field(&v, 2)?.eval(&n).re;
    let mu = radon_poly(&v, 2)?.eval(&n) + SphereConstants::Q0;
    c.measure("bracket", bracket);
    c.measure("re_mu", mu.re);
    c.measure("im_mu", mu.im);
    c.threshold("abs_bracket_min", 0.1);
    c.require(bracket.abs() >= 0.1, || {
        format!("bracket {bracket} is too close to 0")
    });
    let lmax = 42;
    let mut pairs = Vec::new();
    for k in 10..=40usize {
        let q = cluster_quasimode(&v, lmax, k, mu)?;
        if k % 10 == 0 {
            c.measure(&format!("sigma_min_block_k{k}"), q.sigma_min_block);
        }
        pairs.push((k as f64, q.sigma_min_block));
    }
    let increases: Vec<usize> = pairs
        .windows(2)
        .filter(|w| w[1].1 > w[0].1)
        .map(|w| w[1].0 as usize)
        .collect();
    c.measure("increases", increases.len() as f64);
    c.require(increases.is_empty(), || {
        format!("sigma_min_block increases at k = {increases:?}")
    });
    let fit = decay_fit(&pairs)?;
    let late: Vec<f64> = pairs
        .windows(2)
        .zip(&fit.local_slopes)
        .filter(|(w, _)| w[0].0 >= 30.0)
        .map(|(_, (_, s))| *s)
        .collect();
    let worst_late = late.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    c.measure("max_local_slope_from_k30", worst_late);
    c.threshold("max_local_slope_from_k30", -1.0);
    c.require(worst_late <= -1.0, || {
        format!("local slope {worst_late} > -1 for k >= 30")
    });

    let k = 40;
    let w = tube_half_width(k);
    let plain = cluster_quasimode(&v, lmax, k, mu)?;
    let plain_mass = tube_mass(k, &plain.coefficients, &gamma, w)?;
    let loc = localized_quasimode(&v, lmax, k, mu, &gamma, w)?;
    c.measure("tube_mass_k40", loc.tube_mass);
    c.measure("plain_singular_vector_tube_mass_k40", plain_mass);
    c.measure("near_kernel_dim_k40", loc.kernel_dim as f64);
    c.measure(
        "localized_sigma_min_block_k40",
        loc.quasimode.sigma_min_block,
    );
    c.measure("full_residual_k40", loc.quasimode.full_residual);
    c.threshold("tube_mass_k40_min", 0.8);
    c.require(loc.tube_mass >= 0.8, || {
        format!("tube mass {} < 0.8 at k = 40", loc.tube_mass)
    });
    c.note(format!(
        "V = (2x+iy)^2, normal (0.3, 0.4, -0.5) normalized, L = {lmax}, k = 10..40, half width 3/sqrt(k); \
         tube mass of the near-kernel vector localized on this geodesic (the mirrored geodesic shares mu)"
    ));
    Ok(())
}

fn normal_case_oracle(c: &mut Check, cfg: &RunConfig) -> Result<(), CliError> {
    let v = AmbientPolynomial::x().pow(2);
    let lmax = 15;
    let h = hamiltonian(&v, lmax)?;
    let spec = spectrum(&h, false)?;
    let norm = spec.operator_norm;
    let top = SphereConstants::laplace_eigenvalue(lmax) + 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let (mut worst_svd, mut worst_lanczos) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let lam = Complex64::new(rng.gen_range(-2.0..top), rng.gen_range(-3.0..3.0));
        let dist = spec
            .eigenvalues
            .iter()
            .map(|e| (e - lam).norm())
            .fold(f64::INFINITY, f64::min);
        worst_svd = worst_svd.max((sigma_min(&h, lam) - dist).abs());
        worst_lanczos =
            worst_lanczos.max((triangular_sigma_min(&spec.schur().t, lam) - dist).abs());
    }
    let tol = 1e-7 * norm;
    c.measure("operator_norm", norm);
    c.measure("svd_max_error", worst_svd);
    c.measure("lanczos_max_error", worst_lanczos);
    c.threshold("max_error", tol);
    c.require(worst_svd <= tol, || {
        format!("SVD sigma_min off by {worst_svd:e}")
    });
    c.require(worst_lanczos <= tol, || {
        format!("Schur-Lanczos sigma_min off by {worst_lanczos:e}")
    });
    c.note(format!(
        "V = x^2, L = 15, 100 seeded shifts (seed {})",
        cfg.seed.wrapping_add(1)
    ));
    Ok(())
}

fn averaging_identity(c: &mut Check, _: &RunConfig) -> Result<(), CliError> {
    let lmax = 12;
    let v = &quadratic_example() + &AmbientPolynomial::z();
    let m = multiplication_matrix(&v, lmax);
    let avg = time_average(&m, 2 * lmax + 3);
    let diff = (avg - block_diagonal_part(&m)).camax();
    c.measure("max_entry_difference", diff);
    c.threshold("max_entry_difference", 1e-10);
    c.require(diff <= 1e-10, || {
        format!("average differs from the block-diagonal part by {diff:e}")
    });
    c.note("V = (2x+iy)^2 + z, L = 12, 27 trapezoid nodes");
    Ok(())
}

fn determinism(c: &mut Check, cfg: &RunConfig) -> Result<(), CliError> {
    let first = data_artifacts(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| CliError::ThreadPool(e.to_string()))?;
    let second = pool.install(|| data_artifacts(cfg))?;
    let differing: Vec<&str> = first
        .files()
        .iter()
        .zip(second.files())
        .filter(|(a, b)| a != b)
        .map(|(a, _)| a.0.as_str())
        .collect();
    let bytes: usize = first.files().iter().map(|(_, content)| content.len()).sum();
    c.measure("artifacts", first.files().len() as f64);
    c.measure("artifact_bytes", bytes as f64);
    c.require(first.files().len() == second.files().len(), || {
        "artifact sets differ".to_string()
    });
    c.require(differing.is_empty(), || {
        format!("artifacts differ between runs: {}", differing.join(", "))
    });
    c.note(
        "all data artifacts of this configuration computed twice, the second time on one thread",
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn config() -> RunConfig {
        parse_config(r#"{"potential": [{"px": 0, "py": 0, "pz": 1, "re": 1.0, "im": 0.0}], "lmax": 4, "samples": 100}"#)
            .unwrap()
    }

    #[test]
    fn selected_fast_criteria_pass() {
        let results = run_criteria(&config(), &[4, 5, 11]);
        assert_eq!(
            results.iter().map(|r| r.id).collect::<Vec<_>>(),
            vec![4, 5, 11]
        );
        for r in &results {
            assert!(r.passed, "{}: {}", r.id, r.detail);
            assert!(!r.measured.is_empty() && !r.thresholds.is_empty());
        }
    }

    #[test]
    fn report_json_uses_fixed_floats() {
        let cfg = config();
        let criteria = run_criteria(&cfg, &[11]);
        let report = VerifyReport {
            all_passed: true,
            config: cfg,
            criteria,
        };
        let text = report.to_json();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["criteria"][0]["id"], 11);
        assert!(
            text.contains("\"max_entry_difference\": 1.0000000000000000e-10"),
            "{text}"
        );
        assert_eq!(text, report.to_json());
    }

    #[test]
    fn failures_are_reported_in_the_detail() {
        let mut c = Check::new(99, "demo");
        c.require(false, || "broken".to_string());
        c.note("context");
        let r = c.finish();
        assert!(!r.passed);
        assert_eq!(r.detail, "context; FAILED: broken");
    }
}
