//! Pseudospectra of `H_L`, cluster quasimodes and the explicit coherent
//! modes `a_k (x' + i y')^k`, with the decay and concentration diagnostics
//! used to witness pseudo-eigenvalues numerically.
//!
//! Grid sweeps reuse a single Schur factorization `H = Q T Q^H`: since `Q`
//! is unitary, `sigma_min(H - lambda) = sigma_min(T - lambda)`, and the
//! latter is found by Lanczos on the inverse Gram operator using two
//! triangular solves per step.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::linalg::{
    smallest_singular_pair, smallest_singular_value, spectral_norm, structured_schur,
    triangular_sigma_min, CMatrix, CVector,
};
use crate::operator::{compression, hamiltonian, SphereConstants};
use crate::plot::{marching_squares, SvgPlot, PALETTE};
use crate::polysphere::{AmbientPolynomial, SpherePoint};
use crate::radon::{radon_geodesic, GeodesicPoint};
use crate::sphharm::{
    degree_harmonics_at, gauss_legendre, multiplication_block, project_function, HarmonicIndex,
    OperatorMatrix, QuadratureRule,
};

/// `sigma_min(H - lambda I)` by a full SVD.
pub fn sigma_min(h: &OperatorMatrix, lambda: Complex64) -> f64 {
    sigma_min_dense(h.matrix(), lambda)
}

/// `sigma_min(A - lambda I)` for any square matrix.
pub fn sigma_min_dense(a: &CMatrix, lambda: Complex64) -> f64 {
    let mut m = a.clone();
    for i in 0..m.nrows() {
        m[(i, i)] -= lambda;
    }
    smallest_singular_value(&m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn is_nonempty(&self) -> bool {
        self.re_min < self.re_max && self.im_min < self.im_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolution {
    pub nx: usize,
    pub ny: usize,
}

/// `sigma_min(H_L - lambda)` at the cell centres of a window, row-major
/// with `values[iy * nx + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudospectrumGrid {
    pub window: Window,
    pub resolution: Resolution,
    pub values: Vec<f64>,
    pub label: String,
    pub lmax: usize,
    pub operator_norm: f64,
    /// Eigenvalues of `H_L`, from the same Schur form.
    pub eigenvalues: Vec<Complex64>,
}

impl PseudospectrumGrid {
    pub fn cell_size(&self) -> (f64, f64) {
        let w = &self.window;
        (
            (w.re_max - w.re_min) / self.resolution.nx as f64,
            (w.im_max - w.im_min) / self.resolution.ny as f64,
        )
    }

    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        let (dx, dy) = self.cell_size();
        Complex64::new(
            self.window.re_min + (ix as f64 + 0.5) * dx,
            self.window.im_min + (iy as f64 + 0.5) * dy,
        )
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.resolution.nx + ix]
    }

    /// Bilinear interpolation between cell centres, clamped at the border.
    pub fn interpolate(&self, lambda: Complex64) -> f64 {
        let (dx, dy) = self.cell_size();
        let (nx, ny) = (self.resolution.nx, self.resolution.ny);
        let fx = ((lambda.re - self.window.re_min) / dx - 0.5).clamp(0.0, (nx - 1) as f64);
        let fy = ((lambda.im - self.window.im_min) / dy - 0.5).clamp(0.0, (ny - 1) as f64);
        let (ix, iy) = (
            (fx.floor() as usize).min(nx - 2),
            (fy.floor() as usize).min(ny - 2),
        );
        let (tx, ty) = (fx - ix as f64, fy - iy as f64);
        let v00 = self.value(ix, iy);
        let v10 = self.value(ix + 1, iy);
        let v01 = self.value(ix, iy + 1);
        let v11 = self.value(ix + 1, iy + 1);
        (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11)
    }

    pub fn min_value(&self) -> (f64, Complex64) {
        let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
        for iy in 0..self.resolution.ny {
            for ix in 0..self.resolution.nx {
                if self.value(ix, iy) < best.0 {
                    best = (self.value(ix, iy), self.point(ix, iy));
                }
            }
        }
        best
    }

    /// CSV with columns `re,im,sigma_min`, rows ordered by `(iy, ix)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,sigma_min\n");
        for iy in 0..self.resolution.ny {
            for ix in 0..self.resolution.nx {
                let p = self.point(ix, iy);
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    fmt_f64(p.re),
                    fmt_f64(p.im),
                    fmt_f64(self.value(ix, iy))
                );
            }
        }
        out
    }

    /// `eps`-level curves of `sigma_min` in complex coordinates.
    pub fn level_set(&self, eps: f64) -> Vec<[(f64, f64); 2]> {
        let (dx, dy) = self.cell_size();
        let to_complex = |(fx, fy): (f64, f64)| {
            (
                self.window.re_min + (fx + 0.5) * dx,
                self.window.im_min + (fy + 0.5) * dy,
            )
        };
        marching_squares(&self.values, self.resolution.nx, self.resolution.ny, eps)
            .into_iter()
            .map(|[a, b]| [to_complex(a), to_complex(b)])
            .collect()
    }

    /// Contour plot of the `eps` level sets with eigenvalues as dots.
    pub fn to_svg(&self, eps_list: &[f64], eigenvalues: &[Complex64]) -> String {
        let w = &self.window;
        let mut plot = SvgPlot::new((w.re_min, w.re_max), (w.im_min, w.im_max));
        plot.axes();
        for (i, eps) in eps_list.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            plot.segments(&self.level_set(*eps), color);
            plot.legend(i, &format!("eps = {eps:.3e}"), color);
        }
        for lam in eigenvalues {
            if lam.re >= w.re_min && lam.re <= w.re_max && lam.im >= w.im_min && lam.im <= w.im_max
            {
                plot.dot((lam.re, lam.im), 2.0, "black");
            }
        }
        plot.finish()
    }
}

/// Samples `sigma_min(H_L - lambda)` at the cell centres of `window`.
pub fn pspec_grid(
    v: &AmbientPolynomial,
    lmax: usize,
    window: Window,
    resolution: Resolution,
) -> Result<PseudospectrumGrid> {
    if resolution.nx < 2 || resolution.ny < 2 {
        return Err(Error::InvalidArgument(
            "resolution must be at least 2 x 2".into(),
        ));
    }
    if !window.is_nonempty() {
        return Err(Error::InvalidArgument(
            "window must have positive width and height".into(),
        ));
    }
    let h = hamiltonian(v, lmax)?;
    let schur = structured_schur(h.matrix(), h.label())?;
    let mut grid = PseudospectrumGrid {
        window,
        resolution,
        values: vec![0.0; resolution.nx * resolution.ny],
        label: h.label().to_string(),
        lmax,
        operator_norm: spectral_norm(h.matrix()),
        eigenvalues: schur.eigenvalues(),
    };
    let points: Vec<Complex64> = (0..resolution.ny)
        .flat_map(|iy| (0..resolution.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| grid.point(ix, iy))
        .collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|lam| triangular_sigma_min(&schur.t, *lam))
        .collect();
    grid.values = values;
    Ok(grid)
}

/// A unit vector in `E_k` together with its residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Quasimode {
    pub k: usize,
    /// Coefficients over `Y_{k,-k}, ..., Y_{k,k}`.
    pub coefficients: Vec<Complex64>,
    pub mu: Complex64,
    /// `||(B_k - mu) psi||`.
    pub sigma_min_block: f64,
    /// `||(H_L - Lambda_k - mu) psi||` over the whole truncated space.
    pub full_residual: f64,
    /// Norm of the part of `(H_L - Lambda_k - mu) psi` outside `E_k`.
    pub coupling: f64,
}

impl Quasimode {
    pub fn eigenvalue_candidate(&self) -> Complex64 {
        self.mu + SphereConstants::cluster_center(self.k)
    }
}

/// Best quasimode in `E_k` for `Lambda_k + mu`: the right singular vector of
/// `B_k - mu` at its smallest singular value.
pub fn cluster_quasimode(
    v: &AmbientPolynomial,
    lmax: usize,
    k: usize,
    mu: Complex64,
) -> Result<Quasimode> {
    let block = shifted_compression(v, lmax, k, mu)?;
    let (_, psi) = smallest_singular_pair(&block);
    Ok(quasimode_from_vector(v, lmax, k, mu, &psi))
}

fn shifted_compression(
    v: &AmbientPolynomial,
    lmax: usize,
    k: usize,
    mu: Complex64,
) -> Result<CMatrix> {
    let degree = v.degree_or_zero();
    let band = lmax.saturating_sub(degree);
    if lmax < degree {
        return Err(Error::Aliasing { lmax, degree });
    }
    if k > band {
        return Err(Error::OutsideTrustedBand { k, band });
    }
    if !mu.re.is_finite() || !mu.im.is_finite() {
        return Err(Error::InvalidArgument("mu must be finite".into()));
    }
    let mut block = compression(v, k);
    for i in 0..block.nrows() {
        block[(i, i)] -= mu;
    }
    Ok(block)
}

/// Residuals of a unit vector `psi` in `E_k` against the block and against
/// `H_L - Lambda_k - mu`.
fn quasimode_from_vector(
    v: &AmbientPolynomial,
    lmax: usize,
    k: usize,
    mu: Complex64,
    psi: &CVector,
) -> Quasimode {
    // only M_V couples degree k to other degrees; the Laplacian is diagonal
    let degree = v.degree_or_zero();
    let lo = k.saturating_sub(degree);
    let hi = (k + degree).min(lmax);
    let coupled = multiplication_block(v, lo..=hi, k..=k);
    let mut residual = &coupled * psi;
    let offset = k * k - lo * lo;
    let l = k as f64;
    for i in 0..2 * k + 1 {
        residual[offset + i] += (l * (l + 1.0) - SphereConstants::cluster_center(k) - mu) * psi[i];
    }
    let full = residual.norm();
    let inside = residual.rows(offset, 2 * k + 1).norm();
    let coupling = (full * full - inside * inside).max(0.0).sqrt();
    Quasimode {
        k,
        coefficients: psi.iter().copied().collect(),
        mu,
        sigma_min_block: inside,
        full_residual: full,
        coupling,
    }
}

/// Quasimode attached to one geodesic when several share the value `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedQuasimode {
    pub quasimode: Quasimode,
    /// Dimension of the near-kernel the mode was chosen from.
    pub kernel_dim: usize,
    /// Singular values of `B_k - mu` spanning the near-kernel, ascending.
    pub kernel_singular_values: Vec<f64>,
    pub tube_mass: f64,
}

/// Right singular vectors of `B_k - mu` whose singular values lie within a
/// factor two of the smallest one.
pub fn near_kernel(block: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    let svd = block.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let floor =
        2.0 * svd.singular_values[order[0]] + 1e-14 * svd.singular_values[order[order.len() - 1]];
    let chosen: Vec<usize> = order
        .into_iter()
        .take_while(|&i| svd.singular_values[i] <= floor)
        .collect();
    (
        chosen.iter().map(|&i| svd.singular_values[i]).collect(),
        chosen.iter().map(|&i| v_t.row(i).adjoint()).collect(),
    )
}

/// The unit vector of the near-kernel of `B_k - mu` with the largest mass in
/// the tube of radius `half_width` about `gamma`. When the level set of
/// `Ṽ + q_0` at `mu` contains several geodesics, the plain singular vector is
/// an arbitrary mixture of their coherent states; this selects the one
/// carried by `gamma`. Its block residual is at most the largest kernel
/// singular value.
pub fn localized_quasimode(
    v: &AmbientPolynomial,
    lmax: usize,
    k: usize,
    mu: Complex64,
    gamma: &GeodesicPoint,
    half_width: f64,
) -> Result<LocalizedQuasimode> {
    check_half_width(half_width)?;
    let block = shifted_compression(v, lmax, k, mu)?;
    let (sigmas, basis) = near_kernel(&block);
    let columns: Vec<Vec<Complex64>> = basis.iter().map(|b| b.iter().copied().collect()).collect();
    let gram = tube_gram(k, &columns, gamma, half_width.sin());
    let (mass, weights) = crate::linalg::hermitian_top_eigenpair(&gram);
    let mut psi = CVector::zeros(2 * k + 1);
    for (w, b) in weights.iter().zip(&basis) {
        psi += b * *w;
    }
    let norm = psi.norm();
    psi.unscale_mut(norm);
    // a deterministic global phase: largest coefficient real positive
    let (_, big) =
        psi.iter().enumerate().fold(
            (0, 0.0),
            |acc, (i, c)| if c.norm() > acc.1 { (i, c.norm()) } else { acc },
        );
    if big > 0.0 {
        let idx = psi.iter().position(|c| c.norm() == big).unwrap_or(0);
        let phase = psi[idx].conj() / big;
        psi *= phase;
    }
    Ok(LocalizedQuasimode {
        quasimode: quasimode_from_vector(v, lmax, k, mu, &psi),
        kernel_dim: basis.len(),
        kernel_singular_values: sigmas,
        tube_mass: mass,
    })
}

/// `ln a_k` with `a_k^{-2} = 2 pi 2^{2k+1} (k!)^2 / (2k+1)!`.
pub fn explicit_mode_log_norm(k: usize) -> f64 {
    let ln_fact = |n: usize| (1..=n).map(|i| (i as f64).ln()).sum::<f64>();
    -0.5 * ((2.0 * PI).ln() + (2 * k + 1) as f64 * 2f64.ln() + 2.0 * ln_fact(k)
        - ln_fact(2 * k + 1))
}

/// `u_k = a_k (x' + i y')^k` in the frame of `gamma`: an element of `E_k`
/// concentrating on the great circle of `gamma` as `k` grows.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitMode {
    pub k: usize,
    pub gamma: GeodesicPoint,
    /// Coefficients over `Y_{k,-k}, ..., Y_{k,k}`.
    pub coefficients: Vec<Complex64>,
}

impl ExplicitMode {
    /// Pointwise value from the closed form.
    pub fn eval(&self, p: &SpherePoint) -> Complex64 {
        explicit_mode_value(self.k, &self.gamma, p)
    }

    /// Pointwise value from the harmonic coefficients.
    pub fn eval_from_coefficients(&self, p: &SpherePoint) -> Complex64 {
        eval_degree(self.k, &self.coefficients, p)
    }

    pub fn coefficient_norm(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn explicit_mode_value(k: usize, gamma: &GeodesicPoint, p: &SpherePoint) -> Complex64 {
    let [x, y, _] = gamma.frame_coords(p);
    Complex64::new(x, y).powu(k as u32) * explicit_mode_log_norm(k).exp()
}

/// `sum_m c_m Y_{k,m}(p)`.
pub fn eval_degree(k: usize, coefficients: &[Complex64], p: &SpherePoint) -> Complex64 {
    degree_harmonics_at(k, p)
        .iter()
        .zip(coefficients)
        .map(|(y, c)| y * c)
        .sum()
}

pub fn explicit_mode(k: usize, gamma: &GeodesicPoint) -> ExplicitMode {
    let rule = QuadratureRule::new(2 * k);
    let g = *gamma;
    let f = move |p: &SpherePoint| explicit_mode_value(k, &g, p);
    let all = project_function(&f, k, &rule);
    let start = HarmonicIndex::new(k, -(k as i64))
        .expect("valid index")
        .position();
    ExplicitMode {
        k,
        gamma: *gamma,
        coefficients: all[start..start + 2 * k + 1].to_vec(),
    }
}

/// `<V u_k, u_k>` by quadrature exact for the product.
pub fn matrix_coefficient(v: &AmbientPolynomial, mode: &ExplicitMode) -> Complex64 {
    let rule = QuadratureRule::new(2 * mode.k + v.degree_or_zero());
    rule.integrate(|p| v.eval(p) * mode.eval(p).norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixCoefficientSample {
    pub k: usize,
    pub value: Complex64,
    pub error: f64,
}

/// `|<V u_k, u_k> - Ṽ(gamma)|` for each `k`.
pub fn matrix_coefficient_errors(
    v: &AmbientPolynomial,
    gamma: &GeodesicPoint,
    ks: &[usize],
) -> Result<Vec<MatrixCoefficientSample>> {
    let target = radon_geodesic(v, gamma, 2 * v.degree_or_zero() + 1)?;
    Ok(ks
        .par_iter()
        .map(|&k| {
            let mode = ExplicitMode {
                k,
                gamma: *gamma,
                coefficients: Vec::new(),
            };
            let value = matrix_coefficient(v, &mode);
            MatrixCoefficientSample {
                k,
                value,
                error: (value - target).norm(),
            }
        })
        .collect())
}

/// Fraction of the `L^2` mass of a degree-`k` function inside the tube of
/// geodesic radius `half_width` around the great circle of `gamma`.
pub fn tube_mass(
    k: usize,
    coefficients: &[Complex64],
    gamma: &GeodesicPoint,
    half_width: f64,
) -> Result<f64> {
    check_half_width(half_width)?;
    let total = tube_integral(k, coefficients, gamma, 1.0);
    if total <= 0.0 {
        return Err(Error::InvalidArgument("mode has zero norm".into()));
    }
    Ok(tube_integral(k, coefficients, gamma, half_width.sin()) / total)
}

fn check_half_width(half_width: f64) -> Result<()> {
    if half_width > 0.0 && half_width < PI / 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "half_width {half_width} outside (0, pi/2)"
        )))
    }
}

fn tube_integral(k: usize, coefficients: &[Complex64], gamma: &GeodesicPoint, h: f64) -> f64 {
    tube_gram(k, &[coefficients.to_vec()], gamma, h)[(0, 0)].re
}

/// `G_ij = \int_{|z'| <= h} conj(psi_i) psi_j` in frame coordinates; exact
/// because the products are polynomials of degree `2k` in `z'` after the
/// azimuthal average.
fn tube_gram(k: usize, modes: &[Vec<Complex64>], gamma: &GeodesicPoint, h: f64) -> CMatrix {
    let (nodes, weights) = gauss_legendre(k + 2);
    let n_phi = 2 * k + 2;
    let d = modes.len();
    let (e1, e2) = gamma.frame();
    let n = gamma.normal().coords();
    let rings: Vec<CMatrix> = nodes
        .par_iter()
        .zip(weights.par_iter())
        .map(|(t, w)| {
            let zp = h * t;
            let s = (1.0 - zp * zp).sqrt();
            let mut ring = CMatrix::zeros(d, d);
            for j in 0..n_phi {
                let phi = 2.0 * PI * j as f64 / n_phi as f64;
                let (c, sn) = (phi.cos(), phi.sin());
                let p = [0, 1, 2].map(|i| s * (c * e1[i] + sn * e2[i]) + zp * n[i]);
                let pt =
                    SpherePoint::normalized(p[0], p[1], p[2]).expect("tube node on the sphere");
                let ys = degree_harmonics_at(k, &pt);
                let vals: Vec<Complex64> = modes
                    .iter()
                    .map(|m| ys.iter().zip(m).map(|(y, c)| y * c).sum())
                    .collect();
                for a in 0..d {
                    for b in 0..d {
                        ring[(a, b)] += vals[a].conj() * vals[b];
                    }
                }
            }
            ring * Complex64::new(w * h * 2.0 * PI / n_phi as f64, 0.0)
        })
        .collect();
    rings.iter().fold(CMatrix::zeros(d, d), |acc, r| acc + r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(sqrt(k_i k_{i+1}), slope between consecutive samples)`.
    pub local_slopes: Vec<(f64, f64)>,
}

/// Least-squares fit of `ln value` against `ln k`.
pub fn decay_fit(pairs: &[(f64, f64)]) -> Result<DecayFit> {
    if pairs.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "decay fit needs at least 4 samples, got {}",
            pairs.len()
        )));
    }
    if let Some((k, v)) = pairs.iter().find(|(k, v)| {
        v.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
            || k.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
    }) {
        return Err(Error::InvalidArgument(format!(
            "nonpositive sample ({k}, {v}) in decay fit"
        )));
    }
    let logs: Vec<(f64, f64)> = pairs.iter().map(|(k, v)| (k.ln(), v.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let local_slopes = logs
        .windows(2)
        .map(|w| {
            (
                ((w[0].0 + w[1].0) / 2.0).exp(),
                (w[1].1 - w[0].1) / (w[1].0 - w[0].0),
            )
        })
        .collect();
    Ok(DecayFit {
        slope,
        intercept: my - slope * mx,
        local_slopes,
    })
}

/// Embeds a vector over `E_k` into the basis of degree `<= lmax`.
pub fn embed(k: usize, coefficients: &[Complex64], lmax: usize) -> CVector {
    crate::operator::embed_degree(coefficients, k, lmax)
}

/// `||(H - lambda) psi||` for a full-space vector.
pub fn residual_norm(h: &OperatorMatrix, lambda: Complex64, psi: &CVector) -> f64 {
    let mut r: CVector = h.matrix() * psi;
    r -= psi * lambda;
    r.norm()
}

/// Dense `(H - lambda)` for diagnostics.
pub fn shifted(h: &OperatorMatrix, lambda: Complex64) -> CMatrix {
    let mut m = h.matrix().clone();
    for i in 0..m.nrows() {
        m[(i, i)] -= lambda;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::spectrum;
    use crate::radon::radon_poly;
    use crate::sphharm::fibonacci_sphere;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadratic() -> AmbientPolynomial {
        (&AmbientPolynomial::x().scale_real(2.0) + &AmbientPolynomial::y().scale(c(0.0, 1.0)))
            .pow(2)
    }

    #[test]
    fn sigma_min_examples() {
        let toy = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.0, 0.0), c(2.0, 0.0)]));
        assert!((sigma_min_dense(&toy, c(1.0, 0.0)) - 1.0).abs() < 1e-14);
        let v = AmbientPolynomial::x().pow(2);
        let h = hamiltonian(&v, 6).unwrap();
        let spec = spectrum(&h, false).unwrap();
        assert!(sigma_min(&h, spec.eigenvalues[7]) <= 1e-8 * spec.operator_norm);
        let schur = structured_schur(h.matrix(), "H").unwrap();
        for lam in [c(3.1, 0.4), c(7.0, -1.0), c(20.0, 0.01)] {
            let dist = spec
                .eigenvalues
                .iter()
                .map(|e| (e - lam).norm())
                .fold(f64::INFINITY, f64::min);
            assert!((sigma_min(&h, lam) - dist).abs() <= 1e-8);
            assert!((triangular_sigma_min(&schur.t, lam) - dist).abs() <= 1e-8);
        }
    }

    #[test]
    fn free_grid_vanishes_at_eigenvalue() {
        let w = Window {
            re_min: 5.0,
            re_max: 7.0,
            im_min: -1.0,
            im_max: 1.0,
        };
        let grid = pspec_grid(
            &AmbientPolynomial::zero(),
            4,
            w,
            Resolution { nx: 21, ny: 21 },
        )
        .unwrap();
        let (mn, at) = grid.min_value();
        assert!(mn < 1e-12 && (at - c(6.0, 0.0)).norm() < 1e-12);
        let (dx, _) = grid.cell_size();
        assert!(grid.interpolate(c(6.0, 0.0)) <= dx * grid.operator_norm);
        assert!(grid.values.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn real_potential_grid_is_conjugation_symmetric() {
        let w = Window {
            re_min: 1.0,
            re_max: 8.0,
            im_min: -1.5,
            im_max: 1.5,
        };
        let res = Resolution { nx: 9, ny: 8 };
        let grid = pspec_grid(&AmbientPolynomial::z().pow(2), 5, w, res).unwrap();
        for iy in 0..res.ny {
            for ix in 0..res.nx {
                assert!((grid.value(ix, iy) - grid.value(ix, res.ny - 1 - iy)).abs() <= 1e-10);
            }
        }
        assert_eq!(grid.to_csv().lines().count(), 1 + 72);
        assert!(grid.to_svg(&[0.1, 0.5], &[c(2.0, 0.0)]).contains("<path"));
    }

    #[test]
    fn grid_validates_arguments() {
        let w = Window {
            re_min: 0.0,
            re_max: 1.0,
            im_min: 0.0,
            im_max: 1.0,
        };
        assert!(pspec_grid(
            &AmbientPolynomial::zero(),
            2,
            w,
            Resolution { nx: 1, ny: 4 }
        )
        .is_err());
    }

    #[test]
    fn free_quasimode() {
        let q = cluster_quasimode(&AmbientPolynomial::zero(), 6, 3, c(-0.25, 0.0)).unwrap();
        assert!(q.sigma_min_block < 1e-14 && q.full_residual < 1e-14);
        assert!((q.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(q.eigenvalue_candidate(), c(12.0, 0.0));
    }

    #[test]
    fn quasimode_far_mu_norm_bound() {
        let v = quadratic();
        let k = 5;
        let bnorm = spectral_norm(&compression(&v, k));
        let mu = c(bnorm + 3.0, 1.0);
        let q = cluster_quasimode(&v, 10, k, mu).unwrap();
        assert!(q.sigma_min_block >= mu.norm() - bnorm);
    }

    #[test]
    fn quasimode_residual_matches_full_operator() {
        let v = &quadratic() + &AmbientPolynomial::z().scale(c(0.0, 0.3));
        let lmax = 9;
        let h = hamiltonian(&v, lmax).unwrap();
        for k in [2usize, 5, 7] {
            let mu = c(0.4, -0.6);
            let q = cluster_quasimode(&v, lmax, k, mu).unwrap();
            let psi = embed(k, &q.coefficients, lmax);
            let full = residual_norm(&h, mu + SphereConstants::cluster_center(k), &psi);
            assert!((full - q.full_residual).abs() < 1e-12);
            assert!(
                q.full_residual.powi(2) <= q.sigma_min_block.powi(2) + q.coupling.powi(2) + 1e-12
            );
            assert!(q.sigma_min_block <= q.full_residual + 1e-12);
        }
        assert!(matches!(
            cluster_quasimode(&v, lmax, 8, c(0.0, 0.0)),
            Err(Error::OutsideTrustedBand { .. })
        ));
    }

    #[test]
    fn localized_quasimode_picks_one_circle() {
        let v = quadratic();
        let g = GeodesicPoint::from_normal(0.3, 0.4, -0.5).unwrap();
        let mu = radon_poly(&v, 2).unwrap().eval(&g.normal()) + SphereConstants::Q0;
        let k = 16;
        let w = 3.0 / (k as f64).sqrt();
        let plain = cluster_quasimode(&v, 20, k, mu).unwrap();
        let loc = localized_quasimode(&v, 20, k, mu, &g, w).unwrap();
        // two circles share this value of the transform
        assert_eq!(loc.kernel_dim, 2);
        assert!(loc.tube_mass >= 0.99);
        let direct = tube_mass(k, &loc.quasimode.coefficients, &g, w).unwrap();
        assert!((direct - loc.tube_mass).abs() < 1e-10);
        assert!(loc.quasimode.sigma_min_block <= loc.kernel_singular_values[1] * (1.0 + 1e-10));
        assert!(plain.sigma_min_block <= loc.quasimode.sigma_min_block * (1.0 + 1e-10));
        let norm: f64 = loc
            .quasimode
            .coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_mode_examples() {
        let eq = GeodesicPoint::from_normal(0.0, 0.0, 1.0).unwrap();
        let m0 = explicit_mode(0, &eq);
        assert!(
            (m0.eval(&SpherePoint::new(0.0, 1.0, 0.0).unwrap()).re - 1.0 / (4.0 * PI).sqrt()).abs()
                < 1e-14
        );
        assert!((explicit_mode_log_norm(1).exp() - (3.0 / (8.0 * PI)).sqrt()).abs() < 1e-15);
        let m1 = explicit_mode(1, &eq);
        // proportional to Y_{1,1} only
        assert!(m1.coefficients[0].norm() < 1e-14 && m1.coefficients[1].norm() < 1e-14);
        assert!((m1.coefficients[2].norm() - 1.0).abs() < 1e-12);
        let g = GeodesicPoint::from_normal(0.2, -0.7, 0.4).unwrap();
        for k in [0usize, 1, 5, 17, 40] {
            let m = explicit_mode(k, &g);
            assert!((m.coefficient_norm() - 1.0).abs() < 1e-10, "k={k}");
            let rule = QuadratureRule::new(2 * k);
            assert!(
                (rule
                    .integrate(|p| Complex64::new(m.eval(p).norm_sqr(), 0.0))
                    .re
                    - 1.0)
                    .abs()
                    < 1e-10
            );
        }
    }

    #[test]
    fn explicit_mode_rotation_equivariance() {
        let g = GeodesicPoint::from_normal(0.5, 0.1, -0.8).unwrap();
        let m = explicit_mode(6, &g);
        for p in fibonacci_sphere(200) {
            assert!((m.eval(&p) - m.eval_from_coefficients(&p)).norm() < 1e-9);
        }
    }

    #[test]
    fn matrix_coefficient_examples() {
        let g = GeodesicPoint::from_normal(0.3, 0.4, 0.5).unwrap();
        let mode = explicit_mode(7, &g);
        assert!(
            (matrix_coefficient(&AmbientPolynomial::real_constant(1.0), &mode) - 1.0).norm()
                < 1e-13
        );
        let eq = GeodesicPoint::from_normal(0.0, 0.0, 1.0).unwrap();
        let z2 = AmbientPolynomial::zeta().pow(2);
        let errs = matrix_coefficient_errors(&z2, &eq, &[2, 8, 32]).unwrap();
        assert!(errs.iter().all(|s| s.value.norm() < 1e-12));
    }

    #[test]
    fn quadratic_matrix_coefficient_closed_form() {
        // for this potential the error is exactly |V - Ṽ|(n) / (2k + 3)
        let v = quadratic();
        let g = GeodesicPoint::from_normal(0.3, 0.4, 0.5).unwrap();
        let tilde = radon_poly(&v, 2).unwrap();
        let gap = (v.eval(&g.normal()) - tilde.eval(&g.normal())).norm();
        let ks: Vec<usize> = (1..20).collect();
        for s in matrix_coefficient_errors(&v, &g, &ks).unwrap() {
            assert!(
                (s.error - gap / (2 * s.k + 3) as f64).abs() < 1e-12,
                "k={}",
                s.k
            );
        }
    }

    #[test]
    fn tube_mass_examples() {
        let eq = GeodesicPoint::from_normal(0.0, 0.0, 1.0).unwrap();
        let m0 = explicit_mode(0, &eq);
        for w in [0.1, 0.7, 1.2] {
            assert!((tube_mass(0, &m0.coefficients, &eq, w).unwrap() - w.sin()).abs() < 1e-12);
        }
        let k = 40;
        let m = explicit_mode(k, &eq);
        let mass = tube_mass(k, &m.coefficients, &eq, 3.0 / (k as f64).sqrt()).unwrap();
        assert!(mass >= 0.9, "mass {mass}");
        assert!(tube_mass(k, &m.coefficients, &eq, PI / 2.0 - 1e-9).unwrap() > 1.0 - 1e-9);
        assert!(tube_mass(k, &m.coefficients, &eq, PI / 2.0).is_err());
    }

    #[test]
    fn decay_fit_examples() {
        let pairs: Vec<(f64, f64)> = (1..10).map(|k| (k as f64, (k as f64).powi(-2))).collect();
        let f = decay_fit(&pairs).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = (1..10).map(|k| (k as f64, 7.0)).collect();
        assert!(decay_fit(&flat).unwrap().slope.abs() < 1e-12);
        let exp: Vec<(f64, f64)> = (1..20).map(|k| (k as f64, (-(k as f64)).exp())).collect();
        let f = decay_fit(&exp).unwrap();
        assert!(f.local_slopes.windows(2).all(|w| w[1].1 < w[0].1));
        assert!(decay_fit(&pairs[..3]).is_err());
        assert!(decay_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0), (4.0, 1.0)]).is_err());
    }
}
