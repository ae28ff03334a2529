//! Complex polynomials in the ambient coordinates `(x, y, z)` of `R^3`.
//!
//! Polynomials are stored as representatives: nothing is reduced modulo
//! `x^2 + y^2 + z^2 - 1`. Use [`AmbientPolynomial::canonicalize`] to obtain
//! the normal form on the sphere (all powers of `z` below two) when an exact
//! zero test of the restriction is needed.
//!
//! The Lie-Poisson bracket of `so(3)` is generated by `{x, y} = z`,
//! `{y, z} = x`, `{z, x} = y`; on the unit sphere it is the bracket of the
//! area form, and `r^2` is a Casimir.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const UNIT_TOL: f64 = 1e-12;

/// Exponent triple `(i, j, k)` of the monomial `x^i y^j z^k`.
pub type Exponents = [u32; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    x: f64,
    y: f64,
    z: f64,
}

impl SpherePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if ((x * x + y * y + z * z) - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotOnSphere { x, y, z });
        }
        Ok(Self { x, y, z })
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = (x * x + y * y + z * z).sqrt();
        if r.is_nan() || r <= 0.0 || !r.is_finite() {
            return Err(Error::NotOnSphere { x, y, z });
        }
        Ok(Self {
            x: x / r,
            y: y / r,
            z: z / r,
        })
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let s = theta.sin();
        Self {
            x: s * phi.cos(),
            y: s * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Polar angle in `[0, pi]` and azimuth in `(-pi, pi]`.
    pub fn angles(&self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }

    pub fn antipode(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// One monomial in the JSON potential format.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialSpec {
    pub px: u32,
    pub py: u32,
    pub pz: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AmbientPolynomial {
    terms: BTreeMap<Exponents, Complex64>,
}

impl AmbientPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial([0, 0, 0], c)
    }

    pub fn real_constant(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    pub fn monomial(exps: Exponents, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial([1, 0, 0], Complex64::new(1.0, 0.0))
    }

    pub fn y() -> Self {
        Self::monomial([0, 1, 0], Complex64::new(1.0, 0.0))
    }

    pub fn z() -> Self {
        Self::monomial([0, 0, 1], Complex64::new(1.0, 0.0))
    }

    /// `zeta = x + i y`.
    pub fn zeta() -> Self {
        &Self::x() + &Self::y().scale(Complex64::i())
    }

    /// `x^2 + y^2 + z^2`.
    pub fn radius_squared() -> Self {
        let mut p = Self::zero();
        for e in [[2, 0, 0], [0, 2, 0], [0, 0, 2]] {
            p.add_term(e, Complex64::new(1.0, 0.0));
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn from_monomials(specs: &[MonomialSpec]) -> Self {
        Self::from_terms(
            specs
                .iter()
                .map(|m| ([m.px, m.py, m.pz], Complex64::new(m.re, m.im))),
        )
    }

    pub fn to_monomials(&self) -> Vec<MonomialSpec> {
        self.terms
            .iter()
            .map(|(e, c)| MonomialSpec {
                px: e[0],
                py: e[1],
                pz: e[2],
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    /// Accumulates `c x^i y^j z^k`, dropping the term if it cancels to zero.
    pub fn add_term(&mut self, exps: Exponents, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: Exponents) -> Complex64 {
        self.terms.get(&exps).copied().unwrap_or_default()
    }

    /// Number of stored monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| (e[0] + e[1] + e[2]) as usize)
            .max()
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, pt: &SpherePoint) -> Complex64 {
        self.eval_xyz(pt.x, pt.y, pt.z)
    }

    pub fn eval_xyz(&self, x: f64, y: f64, z: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * (x.powi(e[0] as i32) * y.powi(e[1] as i32) * z.powi(e[2] as i32)))
            .sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, v)| (*e, v.conj())))
    }

    /// Coefficient-wise real part, as a polynomial with real coefficients.
    pub fn real_part(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, v)| (*e, Complex64::new(v.re, 0.0))),
        )
    }

    /// Coefficient-wise imaginary part, as a polynomial with real coefficients.
    pub fn imag_part(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, v)| (*e, Complex64::new(v.im, 0.0))),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::real_constant(1.0);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative along axis 0 (x), 1 (y) or 2 (z).
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(axis < 3, "axis must be 0, 1 or 2");
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e[axis] > 0)
                .map(|(e, c)| {
                    let mut d = *e;
                    d[axis] -= 1;
                    (d, c * e[axis] as f64)
                }),
        )
    }

    /// Euclidean Laplacian in `R^3`.
    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero();
        for axis in 0..3 {
            out = &out + &self.derivative(axis).derivative(axis);
        }
        out
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| (e[0] + e[1] + e[2]) as usize == d)
                .map(|(e, c)| (*e, *c)),
        )
    }

    /// Normal form of the restriction to the unit sphere: every `z^k` with
    /// `k >= 2` is rewritten through `z^2 = 1 - x^2 - y^2`. Two polynomials
    /// agree on the sphere iff their canonical forms are equal.
    pub fn canonicalize(&self) -> Self {
        let mut pending: Vec<(Exponents, Complex64)> =
            self.terms.iter().map(|(e, c)| (*e, *c)).collect();
        let mut out = Self::zero();
        while let Some((e, c)) = pending.pop() {
            if e[2] < 2 {
                out.add_term(e, c);
                continue;
            }
            let [i, j, k] = e;
            pending.push(([i, j, k - 2], c));
            pending.push(([i + 2, j, k - 2], -c));
            pending.push(([i, j + 2, k - 2], -c));
        }
        out
    }

    /// True when every coefficient is within `tol` of zero.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.norm() <= tol)
    }

    /// Largest coefficient-wise distance to `other`.
    pub fn max_coefficient_distance(&self, other: &Self) -> f64 {
        (self - other).max_abs_coefficient()
    }

    /// Rewrites the polynomial in the variables `(zeta, conj(zeta), z)`,
    /// keyed by `(p, r, s)` for `zeta^p conj(zeta)^r z^s`.
    pub fn zeta_terms(&self) -> BTreeMap<Exponents, Complex64> {
        // x = (zeta + zbar)/2, y = -i (zeta - zbar)/2
        let mut out: BTreeMap<Exponents, Complex64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let (i, j, s) = (e[0], e[1], e[2]);
            let prefactor = c * Complex64::new(0.0, -1.0).powu(j) * 0.5f64.powi((i + j) as i32);
            for a in 0..=i {
                for b in 0..=j {
                    let sign = if (j - b) % 2 == 0 { 1.0 } else { -1.0 };
                    let coeff = prefactor * (binomial(i, a) * binomial(j, b) * sign);
                    let key = [a + b, (i - a) + (j - b), s];
                    *out.entry(key).or_insert(Complex64::new(0.0, 0.0)) += coeff;
                }
            }
        }
        out.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        out
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut r = 1.0;
    for t in 0..k {
        r = r * (n - t) as f64 / (t + 1) as f64;
    }
    r.round()
}

/// Lie-Poisson bracket `{p, q} = r . (grad p x grad q)`.
pub fn poisson_bracket(p: &AmbientPolynomial, q: &AmbientPolynomial) -> AmbientPolynomial {
    let dp = [p.derivative(0), p.derivative(1), p.derivative(2)];
    let dq = [q.derivative(0), q.derivative(1), q.derivative(2)];
    let coords = [
        AmbientPolynomial::x(),
        AmbientPolynomial::y(),
        AmbientPolynomial::z(),
    ];
    let mut out = AmbientPolynomial::zero();
    for (c, coord) in coords.iter().enumerate() {
        let (a, b) = ((c + 1) % 3, (c + 2) % 3);
        let cross = &(&dp[a] * &dq[b]) - &(&dp[b] * &dq[a]);
        out = &out + &(coord * &cross);
    }
    out
}

impl Add for &AmbientPolynomial {
    type Output = AmbientPolynomial;
    fn add(self, rhs: &AmbientPolynomial) -> AmbientPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, *c);
        }
        out
    }
}

impl Sub for &AmbientPolynomial {
    type Output = AmbientPolynomial;
    fn sub(self, rhs: &AmbientPolynomial) -> AmbientPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &AmbientPolynomial {
    type Output = AmbientPolynomial;
    fn mul(self, rhs: &AmbientPolynomial) -> AmbientPolynomial {
        let mut out = AmbientPolynomial::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }
}

impl Neg for &AmbientPolynomial {
    type Output = AmbientPolynomial;
    fn neg(self) -> AmbientPolynomial {
        self.scale_real(-1.0)
    }
}

impl Add for AmbientPolynomial {
    type Output = AmbientPolynomial;
    fn add(self, rhs: AmbientPolynomial) -> AmbientPolynomial {
        &self + &rhs
    }
}

impl Sub for AmbientPolynomial {
    type Output = AmbientPolynomial;
    fn sub(self, rhs: AmbientPolynomial) -> AmbientPolynomial {
        &self - &rhs
    }
}

impl Mul for AmbientPolynomial {
    type Output = AmbientPolynomial;
    fn mul(self, rhs: AmbientPolynomial) -> AmbientPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for AmbientPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (name, p) in ["x", "y", "z"].iter().zip(e) {
                match p {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{p}")?,
                }
            }
        }
        Ok(())
    }
}
