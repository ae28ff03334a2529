//! Orthonormal complex spherical harmonics, band-exact product quadrature on
//! the sphere, and Galerkin matrices of multiplication operators.
//!
//! Convention: `Y_lm(theta, phi) = N_lm P_l^m(cos theta) e^{i m phi}` with the
//! Condon-Shortley phase included in `P_l^m`, orthonormal for
//! `<f, g> = int f conj(g) dA` with total mass `4 pi`. Basis vectors are
//! ordered by `(l, m)`, so `Y_lm` sits at position `l^2 + l + m`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::polysphere::{AmbientPolynomial, SpherePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HarmonicIndex {
    l: usize,
    m: i64,
}

impl HarmonicIndex {
    pub fn new(l: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > l {
            return Err(Error::InvalidIndex { l, m });
        }
        Ok(Self { l, m })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Position in the `(l, m)`-sorted basis.
    pub fn position(&self) -> usize {
        basis_position(self.l, self.m)
    }

    pub fn from_position(pos: usize) -> Self {
        let l = (pos as f64).sqrt() as usize;
        // guard against rounding in the square root
        let l = if (l + 1) * (l + 1) <= pos {
            l + 1
        } else if l * l > pos {
            l - 1
        } else {
            l
        };
        Self {
            l,
            m: pos as i64 - (l * l + l) as i64,
        }
    }
}

/// Number of basis functions with degree at most `lmax`.
pub fn basis_size(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// Position of `Y_lm` in the basis; `m` must satisfy `|m| <= l`.
#[inline]
pub fn basis_position(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

#[inline]
fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Normalized associated Legendre values `N_lm P_l^m(t)` for `0 <= m <= l <= lmax`,
/// stored at `l (l + 1) / 2 + m`. Stable three-term recurrence in `l`.
pub fn normalized_legendre(lmax: usize, t: f64) -> Vec<f64> {
    let mut out = vec![0.0; tri(lmax, lmax) + 1];
    let s = (1.0 - t * t).max(0.0).sqrt();
    let mut pmm = (0.25 / PI).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            pmm *= -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        out[tri(m, m)] = pmm;
        if m == lmax {
            break;
        }
        let mut prev2 = pmm;
        let mut prev1 = ((2 * m + 3) as f64).sqrt() * t * pmm;
        out[tri(m + 1, m)] = prev1;
        for l in (m + 2)..=lmax {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                .sqrt();
            let cur = a * (t * prev1 - b * prev2);
            out[tri(l, m)] = cur;
            prev2 = prev1;
            prev1 = cur;
        }
    }
    out
}

/// Real polar factor of `Y_lm` at `cos theta = t` for every basis position.
fn polar_factors(lmax: usize, t: f64) -> Vec<f64> {
    let table = normalized_legendre(lmax, t);
    let mut out = vec![0.0; basis_size(lmax)];
    for l in 0..=lmax {
        for m in 0..=l {
            let v = table[tri(l, m)];
            out[basis_position(l, m as i64)] = v;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[basis_position(l, -(m as i64))] = sign * v;
            }
        }
    }
    out
}

pub fn ylm_eval(idx: HarmonicIndex, theta: f64, phi: f64) -> Complex64 {
    let HarmonicIndex { l, m } = idx;
    let table = normalized_legendre(l, theta.cos());
    let ma = m.unsigned_abs() as usize;
    let mut v = table[tri(l, ma)];
    if m < 0 && ma % 2 == 1 {
        v = -v;
    }
    Complex64::from_polar(v, m as f64 * phi)
}

/// All `Y_lm` with `l <= lmax` at `pt`, in basis order.
pub fn harmonics_at(lmax: usize, pt: &SpherePoint) -> Vec<Complex64> {
    let (theta, phi) = pt.angles();
    let polar = polar_factors(lmax, theta.cos());
    (0..basis_size(lmax))
        .map(|pos| {
            let m = HarmonicIndex::from_position(pos).m;
            Complex64::from_polar(polar[pos], m as f64 * phi)
        })
        .collect()
}

/// Degree-`l` harmonics `Y_{l,-l..=l}` at `pt`.
pub fn degree_harmonics_at(l: usize, pt: &SpherePoint) -> Vec<Complex64> {
    let (theta, phi) = pt.angles();
    let table = normalized_legendre(l, theta.cos());
    (-(l as i64)..=l as i64)
        .map(|m| {
            let ma = m.unsigned_abs() as usize;
            let mut v = table[tri(l, ma)];
            if m < 0 && ma % 2 == 1 {
                v = -v;
            }
            Complex64::from_polar(v, m as f64 * phi)
        })
        .collect()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule: Gauss-Legendre in `cos theta` times the uniform trapezoid in
/// `phi`. Exact for spherical polynomials of degree at most `band`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    band: usize,
    polar_nodes: Vec<f64>,
    polar_weights: Vec<f64>,
    n_phi: usize,
}

impl QuadratureRule {
    pub fn new(band: usize) -> Self {
        let n_theta = band / 2 + 1;
        let (polar_nodes, polar_weights) = gauss_legendre(n_theta);
        Self {
            band,
            polar_nodes,
            polar_weights,
            n_phi: band + 1,
        }
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn polar_nodes(&self) -> &[f64] {
        &self.polar_nodes
    }

    pub fn polar_weights(&self) -> &[f64] {
        &self.polar_weights
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn azimuths(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_phi).map(move |j| 2.0 * PI * j as f64 / self.n_phi as f64)
    }

    pub fn azimuth_weight(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }

    pub fn len(&self) -> usize {
        self.polar_nodes.len() * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes with their full weights.
    pub fn points(&self) -> Vec<(SpherePoint, f64)> {
        let wphi = self.azimuth_weight();
        let mut out = Vec::with_capacity(self.len());
        for (t, w) in self.polar_nodes.iter().zip(&self.polar_weights) {
            let s = (1.0 - t * t).sqrt();
            for phi in self.azimuths() {
                let pt = SpherePoint::normalized(s * phi.cos(), s * phi.sin(), *t)
                    .expect("quadrature node lies on the sphere");
                out.push((pt, w * wphi));
            }
        }
        out
    }

    pub fn integrate<F: Fn(&SpherePoint) -> Complex64>(&self, f: F) -> Complex64 {
        self.points().iter().map(|(p, w)| f(p) * *w).sum()
    }

    /// Azimuthal Fourier coefficients `(2 pi / N) sum_j f(theta_i, phi_j) e^{-i s phi_j}`
    /// on polar ring `i` for each requested shift `s`.
    fn ring_fourier(
        &self,
        ring: usize,
        f: &(dyn Fn(&SpherePoint) -> Complex64 + Sync),
        shifts: &[i64],
    ) -> Vec<Complex64> {
        let t = self.polar_nodes[ring];
        let s = (1.0 - t * t).sqrt();
        let wphi = self.azimuth_weight();
        let samples: Vec<(f64, Complex64)> = self
            .azimuths()
            .map(|phi| {
                let pt = SpherePoint::normalized(s * phi.cos(), s * phi.sin(), t)
                    .expect("quadrature node lies on the sphere");
                (phi, f(&pt))
            })
            .collect();
        shifts
            .iter()
            .map(|&shift| {
                samples
                    .iter()
                    .map(|(phi, v)| v * Complex64::from_polar(1.0, -(shift as f64) * phi))
                    .sum::<Complex64>()
                    * wphi
            })
            .collect()
    }
}

/// Coefficients `<f, Y_lm>` of a sampled function for `l <= lmax`, computed
/// with `rule`. Exact when `f` is a spherical polynomial of degree `d` and
/// `rule.band() >= lmax + d`.
pub fn project_function(
    f: &(dyn Fn(&SpherePoint) -> Complex64 + Sync),
    lmax: usize,
    rule: &QuadratureRule,
) -> Vec<Complex64> {
    let shifts: Vec<i64> = (-(lmax as i64)..=lmax as i64).collect();
    let rings: Vec<(Vec<Complex64>, Vec<f64>)> = (0..rule.polar_nodes.len())
        .into_par_iter()
        .map(|i| {
            (
                rule.ring_fourier(i, f, &shifts),
                polar_factors(lmax, rule.polar_nodes[i]),
            )
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); basis_size(lmax)];
    for (i, (fourier, polar)) in rings.iter().enumerate() {
        let w = rule.polar_weights[i];
        for (pos, slot) in out.iter_mut().enumerate() {
            let m = HarmonicIndex::from_position(pos).m;
            *slot += fourier[(m + lmax as i64) as usize] * (w * polar[pos]);
        }
    }
    out
}

/// Gram matrix `<Y_a, Y_b>` of the basis up to `lmax` under `rule`. Since
/// `Y_lm = P_lm(cos theta) e^{i m phi}`, the node sum factors exactly into the
/// polar Gauss sum of `P_a P_b` times the azimuthal trapezoid sum of
/// `e^{i (m_b - m_a) phi}`.
pub fn gram_matrix(lmax: usize, rule: &QuadratureRule) -> DMatrix<Complex64> {
    let n = basis_size(lmax);
    let rings: Vec<Vec<f64>> = rule
        .polar_nodes
        .par_iter()
        .zip(&rule.polar_weights)
        .map(|(t, w)| {
            polar_factors(lmax, *t)
                .into_iter()
                .map(|p| p * w.sqrt())
                .collect()
        })
        .collect();
    let p = DMatrix::from_fn(rings.len(), n, |i, j| rings[i][j]);
    let polar = p.transpose() * &p;
    let span = 2 * lmax as i64;
    let wphi = rule.azimuth_weight();
    let phis: Vec<f64> = rule.azimuths().collect();
    let azimuthal: Vec<Complex64> = (-span..=span)
        .map(|d| {
            phis.iter()
                .map(|phi| Complex64::from_polar(1.0, d as f64 * phi))
                .sum::<Complex64>()
                * wphi
        })
        .collect();
    let ms: Vec<i64> = (0..n).map(|i| HarmonicIndex::from_position(i).m).collect();
    DMatrix::from_fn(n, n, |a, b| {
        azimuthal[(ms[b] - ms[a] + span) as usize] * polar[(a, b)]
    })
}

/// Largest entry of `G - I` for the Gram matrix under the band-`2 lmax` rule.
pub fn gram_deviation(lmax: usize) -> f64 {
    let g = gram_matrix(lmax, &QuadratureRule::new(2 * lmax));
    (g - DMatrix::<Complex64>::identity(basis_size(lmax), basis_size(lmax))).camax()
}

/// Harmonic coefficients of a function, in basis order up to `lmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicExpansion {
    lmax: usize,
    coeffs: Vec<Complex64>,
}

impl HarmonicExpansion {
    pub fn from_coefficients(lmax: usize, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), basis_size(lmax));
        Self { lmax, coeffs }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn get(&self, idx: HarmonicIndex) -> Complex64 {
        if idx.l > self.lmax {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[idx.position()]
    }

    /// Nonzero coefficients keyed by index, dropping those below `tol`.
    pub fn significant(&self, tol: f64) -> BTreeMap<HarmonicIndex, Complex64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(pos, c)| (HarmonicIndex::from_position(pos), *c))
            .collect()
    }

    pub fn eval(&self, pt: &SpherePoint) -> Complex64 {
        harmonics_at(self.lmax, pt)
            .iter()
            .zip(&self.coeffs)
            .map(|(y, c)| y * c)
            .sum()
    }
}

/// Harmonic decomposition of a polynomial restricted to the sphere.
pub fn harmonic_coefficients(p: &AmbientPolynomial, lmax: usize) -> Result<HarmonicExpansion> {
    let degree = p.degree_or_zero();
    if lmax < degree {
        return Err(Error::Aliasing { lmax, degree });
    }
    let rule = QuadratureRule::new(lmax + degree);
    let coeffs = project_function(&|pt: &SpherePoint| p.eval(pt), lmax, &rule);
    Ok(HarmonicExpansion { lmax, coeffs })
}

/// Which matrix entries of `M_V` can be nonzero.
///
/// Writing `V` in `(zeta, conj zeta, z)`, a term `zeta^p zbar^r z^s` shifts the
/// azimuthal order by `p - r` and couples degrees `l, l'` only when
/// `|l - l'| <= p + r + s` with matching parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionRules {
    /// shift -> max term degree for even / odd degree parity
    by_shift: BTreeMap<i64, [Option<usize>; 2]>,
}

impl SelectionRules {
    pub fn of(v: &AmbientPolynomial) -> Self {
        let terms = v.zeta_terms();
        let scale = terms.values().map(|c| c.norm()).fold(0.0, f64::max);
        let mut by_shift: BTreeMap<i64, [Option<usize>; 2]> = BTreeMap::new();
        for (e, c) in terms {
            // decimal inputs can leave rounding residue where terms cancel
            if c.norm() <= 1e-14 * scale {
                continue;
            }
            let shift = e[0] as i64 - e[1] as i64;
            let d = (e[0] + e[1] + e[2]) as usize;
            let slot = &mut by_shift.entry(shift).or_insert([None, None])[d % 2];
            *slot = Some(slot.map_or(d, |old| old.max(d)));
        }
        Self { by_shift }
    }

    pub fn shifts(&self) -> Vec<i64> {
        self.by_shift.keys().copied().collect()
    }

    /// Maximum coupling distance in degree.
    pub fn reach(&self) -> usize {
        self.by_shift
            .values()
            .flatten()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub fn allows(&self, l: usize, l_col: usize, shift: i64) -> bool {
        let gap = l.abs_diff(l_col);
        self.by_shift
            .get(&shift)
            .and_then(|slots| slots[gap % 2])
            .is_some_and(|d| d >= gap)
    }

    /// True when every shift is strictly positive or every shift strictly negative.
    pub fn is_strictly_graded(&self) -> bool {
        !self.by_shift.is_empty()
            && (self.by_shift.keys().all(|&s| s > 0) || self.by_shift.keys().all(|&s| s < 0))
    }
}

/// Dense operator in the truncated harmonic basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    matrix: DMatrix<Complex64>,
    lmax: usize,
    label: String,
}

impl OperatorMatrix {
    pub fn new(matrix: DMatrix<Complex64>, lmax: usize, label: impl Into<String>) -> Self {
        assert_eq!(matrix.nrows(), basis_size(lmax));
        assert_eq!(matrix.ncols(), basis_size(lmax));
        Self {
            matrix,
            lmax,
            label: label.into(),
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Nonzero entries as `row,col,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.matrix[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    let _ = writeln!(out, "{i},{j},{},{}", fmt_f64(v.re), fmt_f64(v.im));
                }
            }
        }
        out
    }
}

/// Block of `M_V` with rows of degrees `row_degrees` and columns of degrees
/// `col_degrees`, each block indexed by `(l, m)` order within its range.
pub fn multiplication_block(
    v: &AmbientPolynomial,
    row_degrees: std::ops::RangeInclusive<usize>,
    col_degrees: std::ops::RangeInclusive<usize>,
) -> DMatrix<Complex64> {
    let need = row_degrees.end() + col_degrees.end() + v.degree_or_zero();
    let rule = QuadratureRule::new(need);
    assemble_block(v, row_degrees, col_degrees, &rule)
}

fn assemble_block(
    v: &AmbientPolynomial,
    row_degrees: std::ops::RangeInclusive<usize>,
    col_degrees: std::ops::RangeInclusive<usize>,
    rule: &QuadratureRule,
) -> DMatrix<Complex64> {
    let (r0, r1) = (*row_degrees.start(), *row_degrees.end());
    let (c0, c1) = (*col_degrees.start(), *col_degrees.end());
    let nrows = basis_size(r1) - if r0 == 0 { 0 } else { basis_size(r0 - 1) };
    let ncols = basis_size(c1) - if c0 == 0 { 0 } else { basis_size(c0 - 1) };
    let row_offset = r0 * r0;
    let col_offset = c0 * c0;
    let mut out = DMatrix::<Complex64>::zeros(nrows, ncols);
    if v.is_zero() || nrows == 0 || ncols == 0 {
        return out;
    }
    let rules = SelectionRules::of(v);
    let shifts = rules.shifts();
    let lmax = r1.max(c1);
    let f = |pt: &SpherePoint| v.eval(pt);
    // per ring: Fourier coefficients of V for each shift and polar factors
    let rings: Vec<(Vec<Complex64>, Vec<f64>)> = (0..rule.polar_nodes.len())
        .into_par_iter()
        .map(|i| {
            (
                rule.ring_fourier(i, &f, &shifts),
                polar_factors(lmax, rule.polar_nodes[i]),
            )
        })
        .collect();
    let columns: Vec<Vec<(usize, Complex64)>> = (0..ncols)
        .into_par_iter()
        .map(|jc| {
            let col = HarmonicIndex::from_position(jc + col_offset);
            let mut entries = Vec::new();
            for (si, &shift) in shifts.iter().enumerate() {
                let m = col.m + shift;
                for l in r0..=r1 {
                    if m.unsigned_abs() as usize > l || !rules.allows(l, col.l, shift) {
                        continue;
                    }
                    let row_pos = basis_position(l, m);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i, (fourier, polar)) in rings.iter().enumerate() {
                        acc += fourier[si]
                            * (rule.polar_weights[i] * polar[row_pos] * polar[jc + col_offset]);
                    }
                    entries.push((row_pos - row_offset, acc));
                }
            }
            entries
        })
        .collect();
    for (jc, entries) in columns.into_iter().enumerate() {
        for (ir, val) in entries {
            out[(ir, jc)] = val;
        }
    }
    out
}

/// `M_V` truncated to degrees `<= lmax`, assembled with the rule of band
/// `2 lmax + deg V`. Entries forbidden by [`SelectionRules`] are exact zeros.
pub fn multiplication_matrix(v: &AmbientPolynomial, lmax: usize) -> OperatorMatrix {
    let rule = QuadratureRule::new(2 * lmax + v.degree_or_zero());
    multiplication_matrix_with_rule(v, lmax, &rule)
        .expect("rule band is sufficient by construction")
}

pub fn multiplication_matrix_with_rule(
    v: &AmbientPolynomial,
    lmax: usize,
    rule: &QuadratureRule,
) -> Result<OperatorMatrix> {
    let need = 2 * lmax + v.degree_or_zero();
    if rule.band() < need {
        return Err(Error::InsufficientBand {
            have: rule.band(),
            need,
        });
    }
    let m = assemble_block(v, 0..=lmax, 0..=lmax, rule);
    Ok(OperatorMatrix::new(m, lmax, format!("M_V[{v}]")))
}

/// Upper-bound surrogate for `||M_V|| = sup |V|`: maximum over a dense
/// Fibonacci sampling, inflated by 1 %.
pub fn sup_norm_estimate(v: &AmbientPolynomial) -> f64 {
    const SAMPLES: usize = 20_000;
    let max = fibonacci_sphere(SAMPLES)
        .par_iter()
        .map(|p| v.eval(p).norm())
        .reduce(|| 0.0, f64::max);
    1.01 * max
}

/// Fibonacci lattice of `n` nearly uniform points on the sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<SpherePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            SpherePoint::normalized(r * phi.cos(), r * phi.sin(), z)
                .expect("lattice point on sphere")
        })
        .collect()
}
