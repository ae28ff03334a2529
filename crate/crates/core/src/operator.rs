//! Truncated Hamiltonian `H_L = Delta_L + M_V`, its spectrum, assignment of
//! eigenvalues to the cluster disks `D_k = Lambda_k + D`, cluster
//! compressions and spectral projectors.
//!
//! On the round sphere `T = 2 pi`, `beta = 2`, `Q_0 = -1/4`, and the Laplace
//! eigenvalue `l (l + 1)` equals `Lambda_l - 1/4` with `Lambda_l = (l + 1/2)^2`.
//! Results about cluster `k` are certified only inside the trusted band
//! `k <= L - deg V`; outside it they are reported but flagged.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::linalg::{
    spectral_norm, spectral_projector, structured_schur, triangular_eigenvectors, CMatrix,
    SchurForm,
};
use crate::polysphere::AmbientPolynomial;
use crate::sphharm::{
    basis_position, basis_size, multiplication_block, multiplication_matrix, sup_norm_estimate,
    HarmonicIndex, OperatorMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereConstants;

impl SphereConstants {
    /// Common geodesic period.
    pub const PERIOD: f64 = 2.0 * PI;
    /// Morse index.
    pub const BETA: f64 = 2.0;
    /// Principal symbol of `Q_0`, constant on the sphere.
    pub const Q0: f64 = -0.25;

    /// `Lambda_k = (2 pi / T)^2 (k + beta / 4)^2`.
    pub fn cluster_center(k: usize) -> f64 {
        let scale = 2.0 * PI / Self::PERIOD;
        let s = scale * (k as f64 + Self::BETA / 4.0);
        s * s
    }

    pub fn laplace_eigenvalue(l: usize) -> f64 {
        (l * (l + 1)) as f64
    }

    /// Half the gap below cluster `k`: radius of the contour around `Lambda_k`.
    pub fn contour_radius(k: usize) -> f64 {
        if k == 0 {
            return 0.5 * (Self::cluster_center(1) - Self::cluster_center(0));
        }
        0.5 * (Self::cluster_center(k) - Self::cluster_center(k - 1))
    }
}

pub fn laplacian_matrix(lmax: usize) -> OperatorMatrix {
    let n = basis_size(lmax);
    let m = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(
                SphereConstants::laplace_eigenvalue(HarmonicIndex::from_position(i).l()),
                0.0,
            )
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    OperatorMatrix::new(m, lmax, "Delta")
}

/// `H_L = Delta_L + M_V`.
pub fn hamiltonian(v: &AmbientPolynomial, lmax: usize) -> Result<OperatorMatrix> {
    let degree = v.degree_or_zero();
    if lmax < degree {
        return Err(Error::Aliasing { lmax, degree });
    }
    let mut m = multiplication_matrix(v, lmax).into_matrix();
    for i in 0..m.nrows() {
        m[(i, i)] += SphereConstants::laplace_eigenvalue(HarmonicIndex::from_position(i).l());
    }
    Ok(OperatorMatrix::new(m, lmax, format!("H[{v}]")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterLabel {
    Assigned(usize),
    /// Inside more than one disk; the smallest candidate is recorded.
    Ambiguous(usize),
    Unassigned,
}

impl ClusterLabel {
    pub fn cluster(&self) -> Option<usize> {
        match self {
            ClusterLabel::Assigned(k) => Some(*k),
            _ => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            ClusterLabel::Assigned(k) => k.to_string(),
            ClusterLabel::Ambiguous(_) => "ambiguous".into(),
            ClusterLabel::Unassigned => "unassigned".into(),
        }
    }
}

/// Eigenvalue count of a run of mutually overlapping cluster disks.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterGroup {
    pub first: usize,
    pub last: usize,
    pub count: usize,
    pub expected: usize,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Option<CMatrix>,
    pub residuals: Option<Vec<f64>>,
    pub cluster_of: Vec<ClusterLabel>,
    /// Largest `k` for which truncation effects cannot reach cluster `k`.
    pub trusted_band: usize,
    /// Radius of the disks used by [`cluster_assign`].
    pub disk_radius: f64,
    pub operator_norm: f64,
    lmax: usize,
    schur: SchurForm,
    schur_position: Vec<usize>,
}

/// All eigenvalues of `h`, sorted by real then imaginary part.
pub fn spectrum(h: &OperatorMatrix, want_vectors: bool) -> Result<SpectrumResult> {
    let schur = structured_schur(h.matrix(), h.label())?;
    let raw = schur.eigenvalues();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| {
        raw[a]
            .re
            .total_cmp(&raw[b].re)
            .then(raw[a].im.total_cmp(&raw[b].im))
    });
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| raw[i]).collect();
    let operator_norm = spectral_norm(h.matrix());
    let (eigenvectors, residuals) = if want_vectors {
        let x = &schur.q * triangular_eigenvectors(&schur.t);
        let v = CMatrix::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, order[j])]);
        let res: Vec<f64> = (0..v.ncols())
            .map(|j| {
                let col = v.column(j);
                (h.matrix() * col - col * eigenvalues[j]).norm()
            })
            .collect();
        (Some(v), Some(res))
    } else {
        (None, None)
    };
    Ok(SpectrumResult {
        cluster_of: vec![ClusterLabel::Unassigned; eigenvalues.len()],
        eigenvalues,
        eigenvectors,
        residuals,
        trusted_band: h.lmax(),
        disk_radius: 0.0,
        operator_norm,
        lmax: h.lmax(),
        schur,
        schur_position: order,
    })
}

/// Assigns each eigenvalue to the cluster disk containing it, with radius
/// `1/4 + sup|V|` (an upper bound for `||Q_0 + M_V||`).
pub fn cluster_assign(
    mut result: SpectrumResult,
    v: &AmbientPolynomial,
    lmax: usize,
) -> SpectrumResult {
    let radius = 0.25
        + if v.is_zero() {
            0.0
        } else {
            sup_norm_estimate(v)
        };
    result.disk_radius = radius;
    result.trusted_band = lmax.saturating_sub(v.degree_or_zero());
    result.cluster_of = result
        .eigenvalues
        .iter()
        .map(|lam| {
            let hits: Vec<usize> = (0..=lmax + 1)
                .filter(|&k| (lam - SphereConstants::cluster_center(k)).norm() <= radius)
                .collect();
            match hits.as_slice() {
                [] => ClusterLabel::Unassigned,
                [k] => ClusterLabel::Assigned(*k),
                [k, ..] => ClusterLabel::Ambiguous(*k),
            }
        })
        .collect();
    result
}

impl SpectrumResult {
    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn schur(&self) -> &SchurForm {
        &self.schur
    }

    /// True when `D_k` meets `D_{k-1}` or `D_{k+1}`.
    pub fn disk_overlaps_neighbour(&self, k: usize) -> bool {
        let c = SphereConstants::cluster_center(k);
        let below = k > 0 && c - SphereConstants::cluster_center(k - 1) <= 2.0 * self.disk_radius;
        let above = SphereConstants::cluster_center(k + 1) - c <= 2.0 * self.disk_radius;
        below || above
    }

    pub fn cluster_count(&self, k: usize) -> usize {
        self.cluster_of
            .iter()
            .filter(|c| **c == ClusterLabel::Assigned(k))
            .count()
    }

    /// Counts per run of overlapping disks for `k <= upto`; a group is a
    /// maximal run `first..=last` with consecutive disks intersecting.
    pub fn cluster_groups(&self, upto: usize) -> Vec<ClusterGroup> {
        let mut groups = Vec::new();
        let mut first = 0;
        for k in 0..=upto {
            let joins_next = k < upto
                && SphereConstants::cluster_center(k + 1) - SphereConstants::cluster_center(k)
                    <= 2.0 * self.disk_radius;
            if joins_next {
                continue;
            }
            let count = self
                .eigenvalues
                .iter()
                .filter(|lam| {
                    (first..=k).any(|j| {
                        (*lam - SphereConstants::cluster_center(j)).norm() <= self.disk_radius
                    })
                })
                .count();
            let expected = (first..=k).map(|j| 2 * j + 1).sum();
            groups.push(ClusterGroup {
                first,
                last: k,
                count,
                expected,
            });
            first = k + 1;
        }
        groups
    }

    /// Riesz projector onto the generalized eigenspace of cluster `k`.
    pub fn projector(&self, k: usize) -> Result<ClusterProjector> {
        if k > self.trusted_band {
            return Err(Error::OutsideTrustedBand {
                k,
                band: self.trusted_band,
            });
        }
        if self.disk_overlaps_neighbour(k) {
            return Err(Error::AmbiguousCluster { k });
        }
        let mut select = vec![false; self.eigenvalues.len()];
        for (idx, label) in self.cluster_of.iter().enumerate() {
            if *label == ClusterLabel::Assigned(k) {
                select[self.schur_position[idx]] = true;
            }
        }
        let p = spectral_projector(&self.schur, &select);
        let norm = spectral_norm(&p);
        let ill_conditioned = norm > 1e8;
        if ill_conditioned {
            log::warn!(
                "cluster {k}: spectral projector norm {norm:.3e}, basis is nearly defective"
            );
        }
        Ok(ClusterProjector {
            k,
            lmax: self.lmax,
            rank: p.trace().re,
            norm,
            ill_conditioned,
            matrix: p,
        })
    }

    /// CSV with columns `re,im,cluster,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,cluster,residual\n");
        for (i, lam) in self.eigenvalues.iter().enumerate() {
            let res = self
                .residuals
                .as_ref()
                .map(|r| fmt_f64(r[i]))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(lam.re),
                fmt_f64(lam.im),
                self.cluster_of[i].csv_field(),
                res
            );
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ClusterProjector {
    pub k: usize,
    pub lmax: usize,
    pub matrix: CMatrix,
    /// Trace, equal to the algebraic multiplicity of the cluster.
    pub rank: f64,
    pub norm: f64,
    pub ill_conditioned: bool,
}

impl ClusterProjector {
    /// `||P_k - Pi_k||` in the spectral norm.
    pub fn distance_to_harmonic(&self) -> f64 {
        spectral_norm(&(&self.matrix - harmonic_projector(self.lmax, self.k)))
    }
}

/// Convenience: spectrum, assignment and projector for one cluster.
pub fn cluster_projector(
    h: &OperatorMatrix,
    v: &AmbientPolynomial,
    k: usize,
) -> Result<ClusterProjector> {
    let spec = cluster_assign(spectrum(h, false)?, v, h.lmax());
    spec.projector(k)
}

/// Orthogonal projector `Pi_k` onto degree-`k` harmonics inside degree `<= lmax`.
pub fn harmonic_projector(lmax: usize, k: usize) -> CMatrix {
    let n = basis_size(lmax);
    CMatrix::from_fn(n, n, |i, j| {
        if i == j && HarmonicIndex::from_position(i).l() == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Trapezoid approximation of `(1 / 2 pi i) \oint (z - H)^{-1} dz` on the
/// circle of radius [`SphereConstants::contour_radius`] about `Lambda_k`.
pub fn contour_projector(schur: &SchurForm, k: usize, nodes: usize) -> CMatrix {
    let n = schur.dim();
    let center = SphereConstants::cluster_center(k);
    let radius = SphereConstants::contour_radius(k);
    let mut acc = CMatrix::zeros(n, n);
    for j in 0..nodes {
        let w = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / nodes as f64);
        let z = w + center;
        let shifted = CMatrix::from_fn(n, n, |a, b| {
            if a == b {
                z - schur.t[(a, b)]
            } else {
                -schur.t[(a, b)]
            }
        });
        let inv = shifted
            .solve_upper_triangular(&CMatrix::identity(n, n))
            .expect("contour avoids the spectrum");
        acc += inv * w;
    }
    acc /= Complex64::new(nodes as f64, 0.0);
    &schur.q * acc * schur.q.adjoint()
}

/// `B_k = Pi_k (M_V + Q_0) Pi_k`, the `(2k+1) x (2k+1)` cluster compression.
pub fn compression(v: &AmbientPolynomial, k: usize) -> CMatrix {
    let mut b = multiplication_block(v, k..=k, k..=k);
    for i in 0..b.nrows() {
        b[(i, i)] += SphereConstants::Q0;
    }
    b
}

/// Degree-diagonal part of an operator in the harmonic basis.
pub fn block_diagonal_part(m: &OperatorMatrix) -> CMatrix {
    let n = m.dim();
    CMatrix::from_fn(n, n, |i, j| {
        if HarmonicIndex::from_position(i).l() == HarmonicIndex::from_position(j).l() {
            m.matrix()[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Trapezoid average over one period of `e^{i t A} M e^{-i t A}`, where
/// `A = sqrt(Delta - Q_0)` acts as `l + 1/2` on degree `l`.
pub fn time_average(m: &OperatorMatrix, nodes: usize) -> CMatrix {
    let n = m.dim();
    let freq: Vec<f64> = (0..n)
        .map(|i| HarmonicIndex::from_position(i).l() as f64 + 0.5)
        .collect();
    let mut acc = CMatrix::zeros(n, n);
    for j in 0..nodes {
        let t = SphereConstants::PERIOD * j as f64 / nodes as f64;
        let left = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            freq.iter().map(|f| Complex64::from_polar(1.0, t * f)),
        ));
        let right = left.adjoint();
        acc += &left * m.matrix() * right;
    }
    acc / Complex64::new(nodes as f64, 0.0)
}

/// Embeds coefficients over degree `k` into the full basis of degree `<= lmax`.
pub fn embed_degree(coeffs: &[Complex64], k: usize, lmax: usize) -> crate::linalg::CVector {
    assert_eq!(coeffs.len(), 2 * k + 1);
    let mut v = crate::linalg::CVector::zeros(basis_size(lmax));
    for (i, c) in coeffs.iter().enumerate() {
        v[basis_position(k, i as i64 - k as i64)] = *c;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadratic(a: f64) -> AmbientPolynomial {
        (&AmbientPolynomial::x().scale_real(a) + &AmbientPolynomial::y().scale(c(0.0, 1.0))).pow(2)
    }

    #[test]
    fn constants() {
        for l in 0..50 {
            assert_eq!(
                SphereConstants::laplace_eigenvalue(l),
                SphereConstants::cluster_center(l) - 0.25
            );
        }
        assert_eq!(SphereConstants::cluster_center(2), 6.25);
    }

    #[test]
    fn free_hamiltonian() {
        let h = hamiltonian(&AmbientPolynomial::zero(), 2).unwrap();
        let diag: Vec<f64> = (0..9).map(|i| h.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![0.0, 2.0, 2.0, 2.0, 6.0, 6.0, 6.0, 6.0, 6.0]);
        let spec = spectrum(&hamiltonian(&AmbientPolynomial::zero(), 5).unwrap(), true).unwrap();
        for l in 0..=5 {
            let target = c(SphereConstants::laplace_eigenvalue(l), 0.0);
            assert_eq!(
                spec.eigenvalues.iter().filter(|e| **e == target).count(),
                2 * l + 1
            );
        }
    }

    #[test]
    fn constant_potential_shifts_spectrum() {
        let shift = c(0.3, -0.2);
        let spec = spectrum(
            &hamiltonian(&AmbientPolynomial::constant(shift), 4).unwrap(),
            false,
        )
        .unwrap();
        for l in 0..=4 {
            let target = c(SphereConstants::laplace_eigenvalue(l), 0.0) + shift;
            let hits = spec
                .eigenvalues
                .iter()
                .filter(|e| (**e - target).norm() < 1e-12)
                .count();
            assert_eq!(hits, 2 * l + 1);
        }
    }

    #[test]
    fn zeta_squared_is_graded() {
        let h = hamiltonian(&AmbientPolynomial::zeta().pow(2), 10).unwrap();
        // entries only on the diagonal or raising m by two
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                let (a, b) = (
                    HarmonicIndex::from_position(i),
                    HarmonicIndex::from_position(j),
                );
                if i != j && a.m() != b.m() + 2 {
                    assert_eq!(h.matrix()[(i, j)], c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn analytic_potentials_keep_the_free_spectrum() {
        let zeta = AmbientPolynomial::zeta();
        for (v, lmax) in [(zeta.pow(2), 12), (&zeta.pow(2) + &zeta.pow(4), 16)] {
            let spec = spectrum(&hamiltonian(&v, lmax).unwrap(), true).unwrap();
            for e in &spec.eigenvalues {
                let l = (e.re.max(0.0)).sqrt().round() as usize;
                let near = (l.saturating_sub(1)..=l + 1)
                    .map(|l| (e - c(SphereConstants::laplace_eigenvalue(l), 0.0)).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(near <= 1e-8, "eigenvalue {e} off the free spectrum");
            }
            let res = spec.residuals.unwrap();
            assert!(res.iter().all(|r| *r <= 1e-8 * spec.operator_norm));
        }
    }

    #[test]
    fn residuals_for_general_potential() {
        let v = &quadratic(2.0) + &AmbientPolynomial::z().scale(c(0.0, 0.5));
        let spec = spectrum(&hamiltonian(&v, 8).unwrap(), true).unwrap();
        let res = spec.residuals.as_ref().unwrap();
        assert!(res.iter().all(|r| *r <= 1e-8 * spec.operator_norm));
    }

    #[test]
    fn free_cluster_assignment() {
        let v = AmbientPolynomial::zero();
        let spec = cluster_assign(
            spectrum(&hamiltonian(&v, 6).unwrap(), false).unwrap(),
            &v,
            6,
        );
        assert_eq!(spec.disk_radius, 0.25);
        for (lam, label) in spec.eigenvalues.iter().zip(&spec.cluster_of) {
            let k = label.cluster().expect("assigned");
            assert_eq!((SphereConstants::cluster_center(k) - lam.re).abs(), 0.25);
        }
        let idx = spec
            .eigenvalues
            .iter()
            .position(|e| *e == c(6.0, 0.0))
            .unwrap();
        assert_eq!(spec.cluster_of[idx], ClusterLabel::Assigned(2));
    }

    #[test]
    fn real_potential_spectrum_is_real() {
        let v = AmbientPolynomial::x().pow(2);
        let spec = cluster_assign(
            spectrum(&hamiltonian(&v, 10).unwrap(), false).unwrap(),
            &v,
            10,
        );
        assert!(spec.eigenvalues.iter().all(|e| e.im.abs() <= 1e-10));
        for (lam, label) in spec.eigenvalues.iter().zip(&spec.cluster_of) {
            if let ClusterLabel::Assigned(k) = label {
                assert!((lam.re - SphereConstants::cluster_center(*k)).abs() <= spec.disk_radius);
            }
        }
    }

    #[test]
    fn compression_examples() {
        let b = compression(&AmbientPolynomial::zero(), 3);
        assert_eq!(b, CMatrix::identity(7, 7) * c(-0.25, 0.0));
        let b = compression(&AmbientPolynomial::zeta().pow(2), 1);
        let mut nz = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let v = if i == j { b[(i, j)] + 0.25 } else { b[(i, j)] };
                if v.norm() > 1e-14 {
                    nz.push((i, j, v));
                }
            }
        }
        // only <zeta^2 Y_{1,-1}, Y_{1,1}> = -4/5 survives
        assert_eq!(nz.len(), 1);
        assert_eq!((nz[0].0, nz[0].1), (2, 0));
        assert!((nz[0].2 - c(-0.8, 0.0)).norm() < 1e-14);
        let n = b + CMatrix::identity(3, 3) * c(0.25, 0.0);
        assert!((&n * &n).norm() < 1e-14);
    }

    #[test]
    fn compression_matches_full_assembly() {
        let v = quadratic(2.0);
        let m = multiplication_matrix(&v, 6);
        for k in 0..=6 {
            let b = compression(&v, k);
            for i in 0..2 * k + 1 {
                for j in 0..2 * k + 1 {
                    let full = m.matrix()[(k * k + i, k * k + j)]
                        + if i == j { SphereConstants::Q0 } else { 0.0 };
                    assert!((b[(i, j)] - full).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn time_average_is_block_diagonal_extraction() {
        let v = &quadratic(2.0) + &AmbientPolynomial::z().scale(c(0.2, 0.1));
        let lmax = 8;
        let m = multiplication_matrix(&v, lmax);
        let avg = time_average(&m, 2 * lmax + 3);
        assert!((avg - block_diagonal_part(&m)).camax() <= 1e-10);
    }

    #[test]
    fn free_projector_is_harmonic() {
        let v = AmbientPolynomial::zero();
        let h = hamiltonian(&v, 5).unwrap();
        for k in 0..=5 {
            let p = cluster_projector(&h, &v, k).unwrap();
            assert!((p.matrix.clone() - harmonic_projector(5, k)).camax() < 1e-14);
        }
    }

    #[test]
    fn projector_properties_and_contour_cross_check() {
        let v = quadratic(2.0);
        let lmax = 10;
        let h = hamiltonian(&v, lmax).unwrap();
        let spec = cluster_assign(spectrum(&h, false).unwrap(), &v, lmax);
        assert!(
            spec.projector(3).is_err(),
            "overlapping disks must be refused"
        );
        assert!(matches!(
            spec.projector(9),
            Err(Error::OutsideTrustedBand { .. })
        ));
        for k in [5usize, 6, 8] {
            let p = spec.projector(k).unwrap();
            assert!((&p.matrix * &p.matrix - &p.matrix).norm() < 1e-8);
            let comm = &p.matrix * h.matrix() - h.matrix() * &p.matrix;
            assert!(spectral_norm(&comm) <= 1e-6 * spec.operator_norm);
            assert!((p.rank - (2 * k + 1) as f64).abs() < 1e-8);
            let contour = contour_projector(spec.schur(), k, 256);
            assert!(
                (contour - &p.matrix).camax() < 1e-8,
                "contour route disagrees at k={k}"
            );
        }
    }

    #[test]
    fn quadratic_cluster_counts() {
        let v = quadratic(2.0);
        let lmax = 12;
        let spec = cluster_assign(
            spectrum(&hamiltonian(&v, lmax).unwrap(), false).unwrap(),
            &v,
            lmax,
        );
        for g in spec.cluster_groups(spec.trusted_band) {
            assert_eq!(g.count, g.expected, "group {}..={}", g.first, g.last);
        }
        for k in 5..=spec.trusted_band {
            assert_eq!(spec.cluster_count(k), 2 * k + 1);
        }
    }

    #[test]
    fn spectrum_csv_shape() {
        let v = AmbientPolynomial::zero();
        let spec = cluster_assign(spectrum(&hamiltonian(&v, 1).unwrap(), true).unwrap(), &v, 1);
        let csv = spec.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "re,im,cluster,residual");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0.0000000000000000e0,0.0000000000000000e0,0,"));
    }
}
