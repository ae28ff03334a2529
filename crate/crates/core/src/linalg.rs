//! Dense complex linear algebra on top of nalgebra: a Schur decomposition
//! that first isolates an exact block-triangular structure, triangular
//! eigenvectors, Schur reordering, spectral projectors via a Sylvester solve,
//! and smallest singular values of shifted triangular matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Complex Schur form `A = Q T Q^H` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: CMatrix,
    pub t: CMatrix,
}

impl SchurForm {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }
}

/// Diagonal blocks of a block upper-triangular permutation of `a`, found as
/// strongly connected components of the sparsity graph (exact zeros only).
/// Returns the permutation (new position -> old index) and block boundaries.
pub fn block_triangular_structure(a: &CMatrix) -> (Vec<usize>, Vec<usize>) {
    let n = a.nrows();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, n);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && a[(i, j)] != ZERO {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    // tarjan emits components sinks first; an edge i -> j needs block(i) <= block(j)
    let mut comps = tarjan_scc(&graph);
    comps.reverse();
    let mut order = Vec::with_capacity(n);
    let mut bounds = vec![0];
    for comp in comps {
        let mut idx: Vec<usize> = comp.iter().map(|n| n.index()).collect();
        idx.sort_unstable();
        order.extend(idx);
        bounds.push(order.len());
    }
    (order, bounds)
}

/// Schur decomposition that respects exact block-triangular structure, so
/// eigenvalues isolated by the sparsity pattern are returned exactly.
pub fn structured_schur(a: &CMatrix, name: &str) -> Result<SchurForm> {
    assert!(a.is_square());
    let n = a.nrows();
    let (order, bounds) = block_triangular_structure(a);
    let permuted = CMatrix::from_fn(n, n, |i, j| a[(order[i], order[j])]);
    let mut qb = CMatrix::zeros(n, n);
    let mut blocks: Vec<(usize, CMatrix)> = Vec::new();
    for w in bounds.windows(2) {
        let (s, e) = (w[0], w[1]);
        if e - s == 1 {
            qb[(s, s)] = ONE;
            continue;
        }
        let block = permuted.view((s, s), (e - s, e - s)).clone_owned();
        let schur = nalgebra::linalg::Schur::try_new(block, 1e-15, 100_000)
            .ok_or_else(|| Error::NoConvergence(name.to_string()))?;
        let (q, mut t) = schur.unpack();
        for i in 0..t.nrows() {
            for j in 0..i {
                t[(i, j)] = ZERO;
            }
        }
        qb.view_mut((s, s), (e - s, e - s)).copy_from(&q);
        blocks.push((s, t));
    }
    let mut t = qb.adjoint() * &permuted * &qb;
    for (s, tb) in blocks {
        t.view_mut((s, s), (tb.nrows(), tb.ncols())).copy_from(&tb);
    }
    for i in 0..n {
        for j in 0..i {
            t[(i, j)] = ZERO;
        }
    }
    // undo the permutation on the left factor
    let mut q = CMatrix::zeros(n, n);
    for (p, &old) in order.iter().enumerate() {
        q.row_mut(old).copy_from(&qb.row(p));
    }
    Ok(SchurForm { q, t })
}

/// Right eigenvectors of upper-triangular `t`, one unit column per diagonal
/// entry. Near-singular pivots are perturbed to `eps * ||t||` as in LAPACK's
/// `ztrevc`, which keeps residuals small for defective matrices.
pub fn triangular_eigenvectors(t: &CMatrix) -> CMatrix {
    let n = t.nrows();
    let smin = (f64::EPSILON * t.norm()).max(f64::MIN_POSITIVE);
    let mut x = CMatrix::zeros(n, n);
    for i in 0..n {
        let lambda = t[(i, i)];
        x[(i, i)] = ONE;
        for j in (0..i).rev() {
            let mut acc = ZERO;
            for k in (j + 1)..=i {
                acc += t[(j, k)] * x[(k, i)];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            x[(j, i)] = -acc / d;
            // long Jordan chains grow like smin^{-len}; rescale the partial
            // column before it overflows, the recurrence being linear
            let mag = x[(j, i)].norm();
            if mag > 1e100 {
                for r in j..=i {
                    x[(r, i)] /= mag;
                }
            }
        }
        let norm = x.column(i).norm();
        if norm > 0.0 && norm.is_finite() {
            x.column_mut(i).unscale_mut(norm);
        }
    }
    x
}

fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g == ZERO {
        return (1.0, ZERO);
    }
    if f == ZERO {
        return (0.0, g.conj() / g.norm());
    }
    let fa = f.norm();
    let norm = fa.hypot(g.norm());
    (fa / norm, (f / fa) * g.conj() / norm)
}

/// `x <- c x + s y`, `y <- c y - conj(s) x` (LAPACK `zrot`).
fn rot(x: &mut [Complex64], y: &mut [Complex64], c: f64, s: Complex64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let tmp = *a * c + s * *b;
        *b = *b * c - s.conj() * *a;
        *a = tmp;
    }
}

/// Swaps diagonal entries `k` and `k + 1` of the Schur form by a unitary
/// rotation, updating `q` so that `A = Q T Q^H` still holds.
pub fn swap_adjacent(form: &mut SchurForm, k: usize) {
    let n = form.dim();
    let t11 = form.t[(k, k)];
    let t22 = form.t[(k + 1, k + 1)];
    let (c, s) = givens(form.t[(k, k + 1)], t22 - t11);
    if k + 2 < n {
        let mut rk: Vec<Complex64> = (k + 2..n).map(|j| form.t[(k, j)]).collect();
        let mut rk1: Vec<Complex64> = (k + 2..n).map(|j| form.t[(k + 1, j)]).collect();
        rot(&mut rk, &mut rk1, c, s);
        for (idx, j) in (k + 2..n).enumerate() {
            form.t[(k, j)] = rk[idx];
            form.t[(k + 1, j)] = rk1[idx];
        }
    }
    if k > 0 {
        let mut ck: Vec<Complex64> = (0..k).map(|i| form.t[(i, k)]).collect();
        let mut ck1: Vec<Complex64> = (0..k).map(|i| form.t[(i, k + 1)]).collect();
        rot(&mut ck, &mut ck1, c, s.conj());
        for i in 0..k {
            form.t[(i, k)] = ck[i];
            form.t[(i, k + 1)] = ck1[i];
        }
    }
    form.t[(k, k)] = t22;
    form.t[(k + 1, k + 1)] = t11;
    let mut qk: Vec<Complex64> = form.q.column(k).iter().copied().collect();
    let mut qk1: Vec<Complex64> = form.q.column(k + 1).iter().copied().collect();
    rot(&mut qk, &mut qk1, c, s.conj());
    form.q.column_mut(k).copy_from_slice(&qk);
    form.q.column_mut(k + 1).copy_from_slice(&qk1);
}

/// Moves the selected diagonal entries to the leading block, preserving the
/// relative order of both groups. Returns the size of the leading block.
pub fn reorder_schur(form: &mut SchurForm, select: &[bool]) -> usize {
    assert_eq!(select.len(), form.dim());
    let mut flags = select.to_vec();
    let mut placed = 0;
    for i in 0..flags.len() {
        if !flags[i] {
            continue;
        }
        let mut pos = i;
        while pos > placed {
            swap_adjacent(form, pos - 1);
            flags.swap(pos - 1, pos);
            pos -= 1;
        }
        placed += 1;
    }
    placed
}

/// Solves `T11 Y - Y T22 = C` for upper-triangular `T11`, `T22`.
pub fn triangular_sylvester(t11: &CMatrix, t22: &CMatrix, c: &CMatrix) -> CMatrix {
    let (s, r) = (t11.nrows(), t22.nrows());
    let scale = t11.norm().max(t22.norm());
    let smin = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);
    let mut y = CMatrix::zeros(s, r);
    for j in 0..r {
        let mut rhs: Vec<Complex64> = (0..s).map(|i| c[(i, j)]).collect();
        for k in 0..j {
            let coef = t22[(k, j)];
            if coef != ZERO {
                for i in 0..s {
                    rhs[i] += y[(i, k)] * coef;
                }
            }
        }
        let shift = t22[(j, j)];
        for i in (0..s).rev() {
            let mut acc = rhs[i];
            for k in (i + 1)..s {
                acc -= t11[(i, k)] * y[(k, j)];
            }
            let mut d = t11[(i, i)] - shift;
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            y[(i, j)] = acc / d;
        }
    }
    y
}

/// Spectral (Riesz) projector onto the invariant subspace of the selected
/// eigenvalues of the Schur form.
pub fn spectral_projector(form: &SchurForm, select: &[bool]) -> CMatrix {
    let n = form.dim();
    let mut work = form.clone();
    let s = reorder_schur(&mut work, select);
    if s == 0 {
        return CMatrix::zeros(n, n);
    }
    if s == n {
        return CMatrix::identity(n, n);
    }
    let t11 = work.t.view((0, 0), (s, s)).clone_owned();
    let t12 = work.t.view((0, s), (s, n - s)).clone_owned();
    let t22 = work.t.view((s, s), (n - s, n - s)).clone_owned();
    let y = triangular_sylvester(&t11, &t22, &t12);
    // P = Q [I Y; 0 0] Q^H = Q1 (Q1^H + Y Q2^H)
    let q1 = work.q.columns(0, s);
    let q2 = work.q.columns(s, n - s);
    let right = q1.adjoint() + &y * q2.adjoint();
    q1 * right
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Smallest singular value by a full SVD.
pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().min()
}

/// Smallest singular value and the matching right singular vector.
pub fn smallest_singular_pair(m: &CMatrix) -> (f64, CVector) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let (idx, sigma) =
        svd.singular_values
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, s)| if s < acc.1 { (i, s) } else { acc },
            );
    let v: CVector = v_t.row(idx).adjoint();
    (sigma, v)
}

/// Solves `(A - shift) x = b` for upper-triangular `A`, column by column so
/// that the column-major storage is read contiguously.
fn solve_upper(a: &CMatrix, shift: Complex64, b: &mut [Complex64]) {
    let n = b.len();
    for j in (0..n).rev() {
        let col = a.column(j);
        b[j] /= col[j] - shift;
        let xj = b[j];
        for (bi, aij) in b[..j].iter_mut().zip(col.iter()) {
            *bi -= aij * xj;
        }
    }
}

/// Solves `(A - shift)^H x = b` for upper-triangular `A`.
fn solve_upper_adjoint(a: &CMatrix, shift: Complex64, b: &mut [Complex64]) {
    let n = b.len();
    for i in 0..n {
        let col = a.column(i);
        let acc = col
            .iter()
            .zip(&b[..i])
            .fold(b[i], |acc, (aki, bk)| acc - aki.conj() * bk);
        b[i] = acc / (col[i] - shift).conj();
    }
}

/// `sigma_min(T - shift)` for upper-triangular `T` by Lanczos on
/// `(T - shift)^{-1} (T - shift)^{-H}` with full reorthogonalization. Falls
/// back to a dense SVD when the iteration does not settle.
pub fn triangular_sigma_min(t: &CMatrix, shift: Complex64) -> f64 {
    let n = t.nrows();
    if n == 0 {
        return 0.0;
    }
    if (0..n).any(|i| t[(i, i)] == shift) {
        return 0.0;
    }
    let max_steps = n.min(80);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(max_steps + 1);
    // deterministic start vector with no special alignment
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| {
            let a = ((i as f64 + 1.0) * 0.618_033_988_749_895).fract();
            Complex64::new(1.0 + a, 0.5 - a)
        })
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= norm);
    basis.push(v);
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut prev_theta = 0.0;
    for step in 0..max_steps {
        let mut w = basis[step].clone();
        solve_upper_adjoint(t, shift, &mut w);
        solve_upper(t, shift, &mut w);
        if w.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return 0.0;
        }
        let alpha: f64 = basis[step]
            .iter()
            .zip(&w)
            .map(|(q, x)| (q.conj() * x).re)
            .sum();
        alphas.push(alpha);
        // full reorthogonalization (twice is enough)
        for _ in 0..2 {
            for q in &basis {
                let proj: Complex64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                w.iter_mut().zip(q).for_each(|(x, a)| *x -= proj * a);
            }
        }
        let beta = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let (theta, resid) = top_ritz(&alphas, &betas, beta);
        if step > 0 && (theta - prev_theta).abs() <= 1e-14 * theta && resid <= 1e-12 * theta {
            return 1.0 / theta.sqrt();
        }
        prev_theta = theta;
        if beta <= 1e-14 * theta || step + 1 == n {
            return 1.0 / theta.sqrt();
        }
        betas.push(beta);
        w.iter_mut().for_each(|c| *c /= beta);
        basis.push(w);
    }
    let a = CMatrix::from_fn(
        n,
        n,
        |i, j| if i == j { t[(i, j)] - shift } else { t[(i, j)] },
    );
    smallest_singular_value(&a)
}

/// Largest Ritz value of the Lanczos tridiagonal and its residual bound.
fn top_ritz(alphas: &[f64], betas: &[f64], next_beta: f64) -> (f64, f64) {
    let m = alphas.len();
    let tri = DMatrix::<f64>::from_fn(m, m, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let eig = nalgebra::SymmetricEigen::new(tri);
    let (idx, theta) =
        eig.eigenvalues
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            );
    let last = eig.eigenvectors[(m - 1, idx)].abs();
    (theta, next_beta * last)
}

/// Top eigenpair of a Hermitian matrix.
pub fn hermitian_top_eigenpair(h: &CMatrix) -> (f64, CVector) {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let (idx, val) =
        eig.eigenvalues
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            );
    (val, eig.eigenvectors.column(idx).clone_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(n: usize, seed: u64) -> CMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn check_schur(a: &CMatrix, f: &SchurForm) {
        let n = a.nrows();
        let recon = &f.q * &f.t * f.q.adjoint();
        assert!((recon - a).norm() <= 1e-12 * a.norm().max(1.0));
        let unit = f.q.adjoint() * &f.q - CMatrix::identity(n, n);
        assert!(unit.norm() < 1e-12);
        for i in 0..n {
            for j in 0..i {
                assert_eq!(f.t[(i, j)], ZERO);
            }
        }
    }

    #[test]
    fn structured_schur_dense_matrix() {
        let a = random_matrix(12, 1);
        let f = structured_schur(&a, "dense").unwrap();
        check_schur(&a, &f);
    }

    #[test]
    fn structured_schur_exact_on_triangular_pattern() {
        // lower-triangular with a coupled 2x2 block: eigenvalues of 1x1 blocks are exact
        let mut a = CMatrix::zeros(5, 5);
        for i in 0..5 {
            a[(i, i)] = Complex64::new(i as f64 * 0.1 + 0.3, 0.0);
        }
        a[(3, 0)] = Complex64::new(2.0, 1.0);
        a[(4, 2)] = Complex64::new(-1.0, 0.5);
        a[(1, 2)] = Complex64::new(0.7, 0.0);
        a[(2, 1)] = Complex64::new(0.2, 0.0);
        let f = structured_schur(&a, "pattern").unwrap();
        check_schur(&a, &f);
        let eig = f.eigenvalues();
        for i in [0usize, 3, 4] {
            let target = a[(i, i)];
            assert!(eig.contains(&target), "eigenvalue {target} not exact");
        }
    }

    #[test]
    fn eigenvectors_have_small_residual() {
        let a = random_matrix(15, 2);
        let f = structured_schur(&a, "r").unwrap();
        let v = &f.q * triangular_eigenvectors(&f.t);
        for (i, lam) in f.eigenvalues().iter().enumerate() {
            let col = v.column(i);
            let r = &a * col - col * *lam;
            assert!(r.norm() < 1e-12 * a.norm());
        }
    }

    #[test]
    fn reordering_preserves_decomposition() {
        let a = random_matrix(10, 3);
        let mut f = structured_schur(&a, "r").unwrap();
        let before = f.eigenvalues();
        let select: Vec<bool> = (0..10).map(|i| i % 3 == 2).collect();
        let s = reorder_schur(&mut f, &select);
        assert_eq!(s, 3);
        check_schur_loose(&a, &f);
        let after = f.eigenvalues();
        for (k, i) in [2usize, 5, 8].iter().enumerate() {
            assert!((after[k] - before[*i]).norm() < 1e-12);
        }
    }

    fn check_schur_loose(a: &CMatrix, f: &SchurForm) {
        let recon = &f.q * &f.t * f.q.adjoint();
        assert!((recon - a).norm() <= 1e-12 * a.norm());
        for i in 0..f.dim() {
            for j in 0..i {
                assert!(f.t[(i, j)].norm() < 1e-14);
            }
        }
    }

    #[test]
    fn projector_is_idempotent_and_commutes() {
        let a = random_matrix(14, 4);
        let f = structured_schur(&a, "r").unwrap();
        let eig = f.eigenvalues();
        let select: Vec<bool> = eig.iter().map(|e| e.re > 0.0).collect();
        let p = spectral_projector(&f, &select);
        assert!((&p * &p - &p).norm() < 1e-10);
        assert!((&p * &a - &a * &p).norm() < 1e-10);
        let rank = select.iter().filter(|s| **s).count() as f64;
        assert!((p.trace().re - rank).abs() < 1e-10);
        // dual-route check against the eigenvector expansion
        let v = &f.q * triangular_eigenvectors(&f.t);
        let w = v.clone().try_inverse().unwrap();
        let mut p2 = CMatrix::zeros(14, 14);
        for (i, _) in select.iter().enumerate().filter(|(_, s)| **s) {
            p2 += v.column(i) * w.row(i);
        }
        assert!((p - p2).norm() < 1e-9);
    }

    #[test]
    fn sylvester_solution() {
        let mut t11 = random_matrix(4, 5);
        let mut t22 = random_matrix(3, 6);
        for i in 0..4 {
            for j in 0..i {
                t11[(i, j)] = ZERO;
            }
            t11[(i, i)] += Complex64::new(5.0, 0.0);
        }
        for i in 0..3 {
            for j in 0..i {
                t22[(i, j)] = ZERO;
            }
        }
        let c = random_matrix(4, 7).columns(0, 3).clone_owned();
        let y = triangular_sylvester(&t11, &t22, &c);
        assert!((&t11 * &y - &y * &t22 - c).norm() < 1e-12);
    }

    #[test]
    fn lanczos_sigma_min_matches_svd() {
        let a = random_matrix(30, 8);
        let f = structured_schur(&a, "r").unwrap();
        for shift in [
            Complex64::new(0.1, 0.2),
            Complex64::new(-1.5, 0.7),
            Complex64::new(3.0, -2.0),
        ] {
            let direct = smallest_singular_value(&(&a - CMatrix::identity(30, 30) * shift));
            let fast = triangular_sigma_min(&f.t, shift);
            assert!(
                (direct - fast).abs() <= 1e-10 * direct.max(1e-300),
                "{direct} vs {fast}"
            );
        }
    }

    #[test]
    fn toy_sigma_min() {
        let mut a = CMatrix::zeros(2, 2);
        a[(1, 1)] = Complex64::new(2.0, 0.0);
        let s = smallest_singular_value(&(&a - CMatrix::identity(2, 2) * Complex64::new(1.0, 0.0)));
        assert!((s - 1.0).abs() < 1e-15);
        assert!((triangular_sigma_min(&a, Complex64::new(1.0, 0.0)) - 1.0).abs() < 1e-14);
        assert_eq!(triangular_sigma_min(&a, Complex64::new(2.0, 0.0)), 0.0);
    }
}
