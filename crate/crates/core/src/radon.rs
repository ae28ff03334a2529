//! The Funk (Radon) transform on the sphere of oriented great circles and
//! the Poisson-bracket field that decides where the asymptotic
//! pseudospectrum lives.
//!
//! An oriented great circle is identified with its unit normal, so the space
//! of geodesics is again a unit sphere and every function on it is
//! represented by an [`AmbientPolynomial`]. The average over the circle with
//! normal `n` is diagonal on spherical harmonics: degree `l` is scaled by
//! [`funk_coefficient`]`(l)`. [`radon_poly`] carries this out symbolically
//! through the Fischer decomposition, so `Ṽ` is an exact polynomial and the
//! bracket `{Re Ṽ, Im Ṽ}` inherits exact parity.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::operator::SphereConstants;
use crate::polysphere::{poisson_bracket, AmbientPolynomial, SpherePoint};
use crate::sphharm::fibonacci_sphere;

/// A point of the geodesic sphere with a deterministic orthonormal frame
/// `(e1, e2)` spanning the circle's plane, `e1 x e2 = normal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicPoint {
    normal: SpherePoint,
    e1: [f64; 3],
    e2: [f64; 3],
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

impl GeodesicPoint {
    /// `e1` is `normal x z` normalized, or `x` orthogonalized against the
    /// normal when the circle is (nearly) the equator.
    pub fn new(normal: SpherePoint) -> Self {
        let n = normal.coords();
        let e1 = if n[2].abs() > 1.0 - 1e-8 {
            let d = n[0];
            unit([1.0 - d * n[0], -d * n[1], -d * n[2]])
        } else {
            unit(cross(n, [0.0, 0.0, 1.0]))
        };
        let e2 = cross(n, e1);
        Self { normal, e1, e2 }
    }

    pub fn from_normal(x: f64, y: f64, z: f64) -> Result<Self> {
        Ok(Self::new(SpherePoint::normalized(x, y, z)?))
    }

    pub fn normal(&self) -> SpherePoint {
        self.normal
    }

    pub fn frame(&self) -> ([f64; 3], [f64; 3]) {
        (self.e1, self.e2)
    }

    /// The same circle with reversed orientation.
    pub fn antipode(&self) -> Self {
        Self::new(self.normal.antipode())
    }

    /// `gamma(s) = cos(s) e1 + sin(s) e2`.
    pub fn point_at(&self, s: f64) -> SpherePoint {
        let (c, sn) = (s.cos(), s.sin());
        let p = [0, 1, 2].map(|i| c * self.e1[i] + sn * self.e2[i]);
        SpherePoint::normalized(p[0], p[1], p[2]).expect("frame vectors are unit")
    }

    /// Coordinates of `p` in the frame `(e1, e2, normal)`.
    pub fn frame_coords(&self, p: &SpherePoint) -> [f64; 3] {
        let c = p.coords();
        [
            dot(c, self.e1),
            dot(c, self.e2),
            dot(c, self.normal.coords()),
        ]
    }

    /// Geodesic distance from `p` to the great circle.
    pub fn distance_to_circle(&self, p: &SpherePoint) -> f64 {
        dot(p.coords(), self.normal.coords())
            .clamp(-1.0, 1.0)
            .asin()
            .abs()
    }
}

/// `(1/2 pi) \int_0^{2 pi} V(gamma(s)) ds` by the `nodes`-point trapezoid rule,
/// exact for polynomial `V` once `nodes > 2 deg V`.
pub fn radon_geodesic(
    v: &AmbientPolynomial,
    gamma: &GeodesicPoint,
    nodes: usize,
) -> Result<Complex64> {
    let degree = v.degree_or_zero();
    if nodes <= 2 * degree {
        return Err(Error::TooFewNodes { nodes, degree });
    }
    let sum: Complex64 = (0..nodes)
        .map(|j| v.eval(&gamma.point_at(2.0 * PI * j as f64 / nodes as f64)))
        .sum();
    Ok(sum / nodes as f64)
}

/// Eigenvalue of the great-circle average on degree-`l` harmonics:
/// `(-1)^j (2j-1)!! / (2j)!!` for `l = 2j`, zero for odd `l`.
pub fn funk_coefficient(l: usize) -> f64 {
    if l % 2 == 1 {
        return 0.0;
    }
    (1..=l / 2).fold(1.0, |acc, i| -acc * (2 * i - 1) as f64 / (2 * i) as f64)
}

/// `c_{2l} (-1)^l sqrt(l pi)`, which tends to 1.
pub fn wallis_ratio(l: usize) -> f64 {
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    funk_coefficient(2 * l) * sign * (l as f64 * PI).sqrt()
}

/// Splits a homogeneous polynomial of degree `m` into `sum_j r^{2j} h_{m-2j}`
/// with each `h` harmonic; returns the `h` in order of decreasing degree.
fn fischer_decomposition(p: &AmbientPolynomial, m: usize) -> Vec<(usize, AmbientPolynomial)> {
    let mut parts = Vec::new();
    let mut current = p.clone();
    let mut deg = m;
    loop {
        if current.is_zero() {
            break;
        }
        // h = sum_j c_j r^{2j} Delta^j p, c_{j+1} = -c_j / (2 (j+1) (2 deg - 2j - 1))
        let r2 = AmbientPolynomial::radius_squared();
        let mut harmonic = current.clone();
        let mut remainder = AmbientPolynomial::zero();
        let mut lap = current.clone();
        let mut r_power = AmbientPolynomial::real_constant(1.0);
        let mut coeff = 1.0;
        for j in 0..deg / 2 {
            coeff = -coeff / (2 * (j + 1) * (2 * deg - 2 * j - 1)) as f64;
            lap = lap.laplacian();
            if lap.is_zero() {
                break;
            }
            let term = (&r_power * &lap).scale_real(coeff);
            remainder = &remainder - &term;
            r_power = &r_power * &r2;
            harmonic = &harmonic + &(&r_power * &lap).scale_real(coeff);
        }
        parts.push((deg, harmonic));
        if deg < 2 {
            break;
        }
        current = remainder;
        deg -= 2;
    }
    parts
}

/// Harmonic pieces of `v` on the sphere, keyed by degree and summed.
pub fn harmonic_components(v: &AmbientPolynomial) -> Vec<(usize, AmbientPolynomial)> {
    let top = v.degree_or_zero();
    let mut by_degree = vec![AmbientPolynomial::zero(); top + 1];
    for m in 0..=top {
        let part = v.homogeneous_part(m);
        if part.is_zero() {
            continue;
        }
        for (l, h) in fischer_decomposition(&part, m) {
            by_degree[l] = &by_degree[l] + &h;
        }
    }
    by_degree
        .into_iter()
        .enumerate()
        .filter(|(_, h)| !h.is_zero())
        .collect()
}

/// `Ṽ` as a polynomial on the geodesic sphere: every degree-`l` harmonic
/// component of `v` scaled by `c_l`.
pub fn radon_poly(v: &AmbientPolynomial, lmax: usize) -> Result<AmbientPolynomial> {
    let degree = v.degree_or_zero();
    if lmax < degree {
        return Err(Error::Aliasing { lmax, degree });
    }
    Ok(harmonic_components(v)
        .into_iter()
        .fold(AmbientPolynomial::zero(), |acc, (l, h)| {
            let c = funk_coefficient(l);
            if c == 0.0 {
                acc
            } else {
                &acc + &h.scale_real(c)
            }
        }))
}

/// `{Re Ṽ + q_0, Im Ṽ}`; the constant `q_0` drops out.
pub fn bracket_field(v: &AmbientPolynomial, lmax: usize) -> Result<AmbientPolynomial> {
    let tilde = radon_poly(v, lmax)?;
    Ok(poisson_bracket(&tilde.real_part(), &tilde.imag_part()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketClass {
    Negative,
    Positive,
    /// `|bracket| <= tol`: no conclusion is drawn.
    NearZero,
}

impl BracketClass {
    pub fn classify(bracket: f64, tol: f64) -> Self {
        if bracket.abs() <= tol {
            BracketClass::NearZero
        } else if bracket < 0.0 {
            BracketClass::Negative
        } else {
            BracketClass::Positive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BracketClass::Negative => "negative",
            BracketClass::Positive => "positive",
            BracketClass::NearZero => "near-zero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketReport {
    pub gamma: GeodesicPoint,
    /// `(Ṽ + q_0)(gamma)`.
    pub mu: Complex64,
    pub bracket: f64,
    pub classification: BracketClass,
}

impl BracketReport {
    /// Nonzero bracket: `Lambda_k + mu` is a candidate pseudo-eigenvalue,
    /// for one of `gamma`, `-gamma` the bracket is negative.
    pub fn is_candidate(&self) -> bool {
        self.classification != BracketClass::NearZero
    }
}

/// Default near-zero tolerance: `1e-9` times the largest coefficient.
pub fn default_bracket_tolerance(bracket: &AmbientPolynomial) -> f64 {
    1e-9 * bracket.max_abs_coefficient()
}

pub fn classify_locus(
    v: &AmbientPolynomial,
    lmax: usize,
    n_samples: usize,
) -> Result<Vec<BracketReport>> {
    classify_locus_with_tolerance(v, lmax, n_samples, None)
}

/// Bracket sign and `mu` over a Fibonacci lattice of geodesics.
pub fn classify_locus_with_tolerance(
    v: &AmbientPolynomial,
    lmax: usize,
    n_samples: usize,
    tol: Option<f64>,
) -> Result<Vec<BracketReport>> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument(
            "n_samples must be at least 1".into(),
        ));
    }
    let tilde = radon_poly(v, lmax)?;
    let bracket = poisson_bracket(&tilde.real_part(), &tilde.imag_part());
    let tol = tol.unwrap_or_else(|| default_bracket_tolerance(&bracket));
    Ok(fibonacci_sphere(n_samples)
        .into_par_iter()
        .map(|n| {
            let b = bracket.eval(&n).re;
            BracketReport {
                gamma: GeodesicPoint::new(n),
                mu: tilde.eval(&n) + SphereConstants::Q0,
                bracket: b,
                classification: BracketClass::classify(b, tol),
            }
        })
        .collect())
}

/// CSV with columns `nx,ny,nz,re_mu,im_mu,bracket,class`.
pub fn bracket_reports_csv(reports: &[BracketReport]) -> String {
    let mut out = String::from("nx,ny,nz,re_mu,im_mu,bracket,class\n");
    for r in reports {
        let [x, y, z] = r.gamma.normal().coords();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(z),
            fmt_f64(r.mu.re),
            fmt_f64(r.mu.im),
            fmt_f64(r.bracket),
            r.classification.as_str()
        );
    }
    out
}
