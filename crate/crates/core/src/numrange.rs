//! Numerical ranges of the cluster compressions and their limit set, the
//! convex hull of the values of `Ṽ + q_0` on the geodesic sphere.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::linalg::{hermitian_top_eigenpair, CMatrix};
use crate::operator::{compression, SphereConstants};
use crate::plot::{SvgPlot, PALETTE};
use crate::polysphere::AmbientPolynomial;
use crate::radon::radon_poly;
use crate::sphharm::fibonacci_sphere;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    /// Two-dimensional region.
    None,
    Point,
    Segment,
}

/// Convex set represented by its counter-clockwise boundary polygon; points
/// and segments are kept as 1- and 2-vertex polylines.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion {
    boundary: Vec<Complex64>,
    degeneracy: Degeneracy,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Convex hull by the monotone chain, counter-clockwise, dropping collinear
/// and (relatively) coincident points.
pub fn convex_hull(points: &[Complex64]) -> ConvexRegion {
    assert!(!points.is_empty(), "convex hull of an empty set");
    let scale = points
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let tol = 1e-12 * scale;
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| (*a - *b).norm() <= tol);
    let diameter = (pts[pts.len() - 1] - pts[0])
        .norm()
        .max(pts.iter().map(|p| (p - pts[0]).norm()).fold(0.0, f64::max));
    if pts.len() == 1 || diameter <= tol {
        return ConvexRegion {
            boundary: vec![pts[0]],
            degeneracy: Degeneracy::Point,
        };
    }
    let area_tol = tol * diameter;
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], *p) <= area_tol
            {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    if hull.len() <= 2 {
        // all points collinear: keep the two extreme ones
        let (a, b) = farthest_pair(&pts);
        return ConvexRegion {
            boundary: vec![a, b],
            degeneracy: Degeneracy::Segment,
        };
    }
    ConvexRegion {
        boundary: hull,
        degeneracy: Degeneracy::None,
    }
}

fn farthest_pair(pts: &[Complex64]) -> (Complex64, Complex64) {
    let a = pts[0];
    let b = *pts
        .iter()
        .max_by(|p, q| (*p - a).norm().total_cmp(&(*q - a).norm()))
        .unwrap();
    let c = *pts
        .iter()
        .max_by(|p, q| (*p - b).norm().total_cmp(&(*q - b).norm()))
        .unwrap();
    (b, c)
}

impl ConvexRegion {
    pub fn boundary(&self) -> &[Complex64] {
        &self.boundary
    }

    pub fn degeneracy(&self) -> Degeneracy {
        self.degeneracy
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy != Degeneracy::None
    }

    /// Boundary edges as a closed polyline (a single point yields one
    /// zero-length edge).
    fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.boundary.len();
        let count = if self.degeneracy == Degeneracy::Segment {
            1
        } else {
            n
        };
        (0..count).map(move |i| (self.boundary[i], self.boundary[(i + 1) % n]))
    }

    /// Distance from `p` to the boundary polyline.
    pub fn boundary_distance(&self, p: Complex64) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the region (zero inside).
    pub fn distance(&self, p: Complex64) -> f64 {
        if self.degeneracy == Degeneracy::None && self.edges().all(|(a, b)| cross(a, b, p) >= 0.0) {
            return 0.0;
        }
        self.boundary_distance(p)
    }

    pub fn contains(&self, p: Complex64, slack: f64) -> bool {
        self.distance(p) <= slack
    }

    /// Largest distance between boundary vertices.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for a in &self.boundary {
            for b in &self.boundary {
                d = d.max((a - b).norm());
            }
        }
        d
    }

    /// Vertices followed by edge midpoints.
    fn boundary_samples(&self) -> Vec<Complex64> {
        let mut out = self.boundary.clone();
        out.extend(self.edges().map(|(a, b)| (a + b) * 0.5));
        out
    }

    /// Checks that consecutive turns are all left turns.
    pub fn is_convex(&self) -> bool {
        let n = self.boundary.len();
        n < 3
            || (0..n).all(|i| {
                cross(
                    self.boundary[i],
                    self.boundary[(i + 1) % n],
                    self.boundary[(i + 2) % n],
                ) > 0.0
            })
    }

    /// CSV with columns `re,im`, one row per boundary vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im\n");
        for p in &self.boundary {
            let _ = writeln!(out, "{},{}", fmt_f64(p.re), fmt_f64(p.im));
        }
        out
    }
}

/// Field of values `{<B psi, psi> : |psi| = 1}` from the top eigenvectors of
/// the Hermitian parts of `e^{i theta} B` at equally spaced angles.
pub fn field_of_values(b: &CMatrix, n_angles: usize) -> Result<ConvexRegion> {
    if n_angles < 8 {
        return Err(Error::InvalidArgument(format!(
            "n_angles must be at least 8, got {n_angles}"
        )));
    }
    if b.is_empty() || b.nrows() != b.ncols() {
        return Err(Error::InvalidArgument(
            "field of values needs a nonempty square matrix".into(),
        ));
    }
    // angle -theta orders the support points counter-clockwise
    let points: Vec<Complex64> = (0..n_angles)
        .into_par_iter()
        .map(|j| {
            let rot = Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n_angles as f64);
            let rotated = b * rot;
            let herm = (&rotated + rotated.adjoint()) * Complex64::new(0.5, 0.0);
            let (_, v) = hermitian_top_eigenpair(&herm);
            (v.adjoint() * b * &v)[(0, 0)] / v.norm_squared()
        })
        .collect();
    Ok(convex_hull(&points))
}

/// `R_k`: field of values of the compression of `M_V + q_0` to `E_k`.
pub fn numerical_range_k(v: &AmbientPolynomial, k: usize, n_angles: usize) -> Result<ConvexRegion> {
    field_of_values(&compression(v, k), n_angles)
}

/// Convex hull of `Ṽ + q_0` sampled on a Fibonacci lattice of geodesics.
pub fn limit_range(v: &AmbientPolynomial, n_samples: usize) -> Result<ConvexRegion> {
    if n_samples < 100 {
        return Err(Error::InvalidArgument(format!(
            "limit range needs at least 100 samples, got {n_samples}"
        )));
    }
    let tilde = radon_poly(v, v.degree_or_zero())?;
    let values = limit_values(&tilde, n_samples);
    Ok(convex_hull(&values))
}

/// `Ṽ + q_0` on the Fibonacci lattice, given `Ṽ`.
pub fn limit_values(tilde: &AmbientPolynomial, n_samples: usize) -> Vec<Complex64> {
    fibonacci_sphere(n_samples)
        .par_iter()
        .map(|n| tilde.eval(n) + SphereConstants::Q0)
        .collect()
}

/// Symmetric Hausdorff distance between the boundaries, sampled at vertices
/// and edge midpoints.
pub fn hausdorff(a: &ConvexRegion, b: &ConvexRegion) -> f64 {
    let one_way = |from: &ConvexRegion, to: &ConvexRegion| {
        from.boundary_samples()
            .iter()
            .map(|p| to.boundary_distance(*p))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Overlay of several regions, each with a legend label.
pub fn regions_svg(regions: &[(String, &ConvexRegion)]) -> String {
    let all: Vec<Complex64> = regions
        .iter()
        .flat_map(|(_, r)| r.boundary.iter().copied())
        .collect();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for p in &all {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    if all.is_empty() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-3);
    let mut plot = SvgPlot::new((x0 - pad, x1 + pad), (y0 - pad, y1 + pad));
    plot.axes();
    for (i, (label, region)) in regions.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = region.boundary.iter().map(|p| (p.re, p.im)).collect();
        plot.polyline(&pts, color, region.degeneracy == Degeneracy::None);
        plot.legend(i, label, color);
    }
    plot.finish()
}
