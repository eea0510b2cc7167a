//! Dense-matrix ground truth for lattices of at most twelve sites.
//!
//! Basis convention: site k of the region (row-major order) is tensor factor
//! k, the first factor being the most significant bit of the basis index.

use std::io::{Read, Write};

use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::pauli::{series_partial_sum, ComplexOperator, PauliKey, PauliOperator, Region};

pub const MAX_DENSE_SITES: usize = 12;

type C = Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    pub data: Array2<C>,
}

impl DenseMatrix {
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn identity(dim: usize) -> DenseMatrix {
        DenseMatrix { data: Array2::eye(dim) }
    }

    pub fn zeros(dim: usize) -> DenseMatrix {
        DenseMatrix { data: Array2::zeros((dim, dim)) }
    }

    pub fn dot(&self, o: &DenseMatrix) -> DenseMatrix {
        DenseMatrix { data: self.data.dot(&o.data) }
    }

    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix { data: self.data.t().mapv(|v| v.conj()) }
    }

    pub fn max_abs_diff(&self, o: &DenseMatrix) -> f64 {
        let mut m: f64 = 0.0;
        Zip::from(&self.data).and(&o.data).for_each(|a, b| m = m.max((a - b).norm()));
        m
    }

    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        self.data.columns().into_iter().map(|c| c.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// 8-byte little-endian dimension, then row-major interleaved re/im doubles.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.dim() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(16 * self.data.len());
        for v in self.data.iter() {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_dump<R: Read>(mut r: R) -> Result<DenseMatrix> {
        let mut head = [0u8; 8];
        r.read_exact(&mut head)?;
        let dim = u64::from_le_bytes(head) as usize;
        if dim > 1 << MAX_DENSE_SITES {
            return Err(invalid(format!("dump dimension {dim} too large")));
        }
        let mut bytes = vec![0u8; 16 * dim * dim];
        r.read_exact(&mut bytes)?;
        let vals: Vec<C> = bytes
            .chunks_exact(16)
            .map(|c| C::new(f64::from_le_bytes(c[..8].try_into().unwrap()), f64::from_le_bytes(c[8..].try_into().unwrap())))
            .collect();
        Ok(DenseMatrix { data: Array2::from_shape_vec((dim, dim), vals).unwrap() })
    }
}

fn check_size(region: &Region) -> Result<usize> {
    let n = region.num_sites();
    if n > MAX_DENSE_SITES {
        return Err(Error::Cap { what: "dense region sites", got: n as u64, cap: MAX_DENSE_SITES as u64 });
    }
    Ok(n)
}

/// Key masks translated to basis-index bits.
fn basis_masks(key: PauliKey, n: usize) -> (usize, usize) {
    let rev = |m: u64| (0..n).filter(|k| m >> k & 1 == 1).fold(0usize, |acc, k| acc | 1 << (n - 1 - k));
    (rev(key.x), rev(key.z))
}

fn parity(v: usize) -> bool {
    v.count_ones() & 1 == 1
}

/// Add c·(Z^z X^x) into `m`. A string is a signed permutation:
/// it sends |b⟩ to (−1)^{z·(b⊕x)} |b⊕x⟩.
fn add_string(m: &mut Array2<C>, xm: usize, zm: usize, c: C) {
    for b in 0..m.ncols() {
        let r = b ^ xm;
        m[[r, b]] += if parity(zm & r) { -c } else { c };
    }
}

pub fn to_dense(op: &PauliOperator, region: &Region) -> Result<DenseMatrix> {
    let n = check_size(region)?;
    let op = op.reembed(region)?;
    let scale = op.scale().to_f64().unwrap();
    let mut m = Array2::zeros((1 << n, 1 << n));
    for (k, c) in op.sorted_terms() {
        let (xm, zm) = basis_masks(k, n);
        add_string(&mut m, xm, zm, C::new(c.to_f64().unwrap() * scale, 0.0));
    }
    Ok(DenseMatrix { data: m })
}

pub fn complex_to_dense(op: &ComplexOperator) -> Result<DenseMatrix> {
    let n = check_size(&op.region)?;
    let mut m = Array2::zeros((1 << n, 1 << n));
    for &(k, c) in &op.terms {
        let (xm, zm) = basis_masks(k, n);
        add_string(&mut m, xm, zm, c);
    }
    Ok(DenseMatrix { data: m })
}

/// Coefficients c_f = Tr(P_f† M)/2^N of M in the alpha basis.
///
/// Tr(P† M) = Σ_r (−1)^{z·r} M[r, r⊕x], so for a fixed x mask the values for
/// all z are one Walsh–Hadamard transform and the whole decomposition costs
/// O(4^N·N).
pub fn pauli_decompose(m: &DenseMatrix, region: &Region) -> Result<ComplexOperator> {
    let n = check_size(region)?;
    let dim = 1usize << n;
    if m.dim() != dim {
        return Err(invalid(format!("matrix dimension {} does not match region ({dim})", m.dim())));
    }
    let site_of_bit = |bit: usize| n - 1 - bit;
    let to_key = |xm: usize, zm: usize| {
        let mut key = PauliKey::default();
        for bit in 0..n {
            key.x |= ((xm >> bit & 1) as u64) << site_of_bit(bit);
            key.z |= ((zm >> bit & 1) as u64) << site_of_bit(bit);
        }
        key
    };
    let mut terms = Vec::new();
    let mut v = vec![C::zero(); dim];
    for xm in 0..dim {
        for (r, slot) in v.iter_mut().enumerate() {
            *slot = m.data[[r, r ^ xm]];
        }
        walsh_hadamard(&mut v);
        for (zm, &t) in v.iter().enumerate() {
            let c = t / dim as f64;
            if c != C::zero() {
                terms.push((to_key(xm, zm), c));
            }
        }
    }
    terms.sort_unstable_by_key(|t| t.0);
    Ok(ComplexOperator { region: region.clone(), terms })
}

fn walsh_hadamard(v: &mut [C]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

pub fn hamiltonian_dense(region: &Region) -> Result<DenseMatrix> {
    let n = check_size(region)?;
    let mut m = Array2::zeros((1 << n, 1 << n));
    for &k in region.interaction_keys() {
        let (xm, zm) = basis_masks(k, n);
        add_string(&mut m, xm, zm, C::new(1.0, 0.0));
    }
    Ok(DenseMatrix { data: m })
}

/// e^{X} and e^{−X} by scaling and squaring a shared Taylor expansion.
///
/// X is scaled by 2^{−s} until its 1-norm is at most 1/2; the even and odd
/// parts of the series are summed once and combined as E ± O.
pub fn expm_pair(x: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let norm = x.norm1();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = x.data.mapv(|v| v / 2f64.powi(s));
    let dim = x.dim();
    let mut even: Array2<C> = Array2::eye(dim);
    let mut odd: Array2<C> = Array2::zeros((dim, dim));
    let mut term: Array2<C> = Array2::eye(dim);
    let anorm = norm / 2f64.powi(s);
    let mut bound = 1.0;
    for k in 1..60 {
        term = term.dot(&a).mapv(|v| v / k as f64);
        bound *= anorm / k as f64;
        if k % 2 == 0 {
            even += &term;
        } else {
            odd += &term;
        }
        // Remaining terms are bounded by bound·(1 + 1/2 + 1/4 + …).
        if 2.0 * bound < 1e-17 {
            break;
        }
    }
    let mut p = &even + &odd;
    let mut q = &even - &odd;
    for _ in 0..s {
        p = p.dot(&p);
        q = q.dot(&q);
    }
    let (p, q) = (DenseMatrix { data: p }, DenseMatrix { data: q });
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok((p, q))
}

pub fn expm(x: &DenseMatrix) -> Result<DenseMatrix> {
    Ok(expm_pair(x)?.0)
}

/// τ_z(A) = e^{izH} A e^{−izH}.
pub fn evolve_dense(a: &PauliOperator, z: C, region: &Region) -> Result<DenseMatrix> {
    let am = to_dense(a, region)?;
    evolve_matrix(&am, z, region)
}

pub fn evolve_matrix(am: &DenseMatrix, z: C, region: &Region) -> Result<DenseMatrix> {
    let h = hamiltonian_dense(region)?;
    let x = DenseMatrix { data: h.data.mapv(|v| v * C::i() * z) };
    let (u, v) = expm_pair(&x)?;
    let out = u.dot(am).dot(&v);
    if !out.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    /// ‖Gv − λv‖/λ for the Gram matrix G = M†M at the returned vector.
    pub residual: f64,
}

pub const NORM_TOLERANCE: f64 = 1e-9;

/// Largest singular value by power iteration on M†M.
///
/// When the top of the spectrum is nearly degenerate plain iteration crawls,
/// so after each round of 64 steps the working Gram matrix is squared, which
/// doubles the effective iteration count. Convergence is always judged on
/// the original Gram matrix.
pub fn operator_norm(m: &DenseMatrix) -> Result<NormEstimate> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let g = m.adjoint().dot(m);
    let gnorm = g.norm1();
    if gnorm == 0.0 {
        return Ok(NormEstimate { value: 0.0, iterations: 0, residual: 0.0 });
    }
    let mut work = g.data.mapv(|v| v / gnorm);
    let dim = m.dim();
    let mut v = start_vector(dim);
    let mut iterations = 0;
    let mut last = (0.0, f64::INFINITY);
    for _round in 0..40 {
        for _ in 0..64 {
            let w = work.dot(&v);
            let nw = l2(&w);
            if nw == 0.0 {
                break;
            }
            v = w.mapv(|x| x / nw);
            iterations += 1;
        }
        let (lambda, res) = rayleigh(&g.data, &v);
        last = (lambda, res);
        if res <= NORM_TOLERANCE {
            return Ok(NormEstimate { value: lambda.sqrt(), iterations, residual: res });
        }
        let sq = work.dot(&work);
        let n = sq.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if n == 0.0 || !n.is_finite() {
            break;
        }
        work = sq.mapv(|x| x / n);
    }
    Err(Error::NoConvergence { iterations, residual: last.1 })
}

/// The same estimate for an operator given only by its action on vectors.
///
/// Lanczos on M†M with full reorthogonalization. Nearly degenerate top
/// singular values make plain power iteration crawl; the Krylov basis
/// separates them. The reported residual is recomputed from the Ritz vector.
pub fn operator_norm_matrix_free<F, G>(dim: usize, apply: F, apply_adjoint: G) -> Result<NormEstimate>
where
    F: Fn(&Array1<C>) -> Array1<C>,
    G: Fn(&Array1<C>) -> Array1<C>,
{
    let gram = |v: &Array1<C>| apply_adjoint(&apply(v));
    let max_basis = dim.min(LANCZOS_MAX_BASIS);
    let mut basis: Vec<Array1<C>> = vec![start_vector(dim)];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    loop {
        let j = basis.len() - 1;
        let mut w = gram(&basis[j]);
        alpha.push(dot(&basis[j], &w).re);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.zip_mut_with(b, |x, y| *x -= c * y);
            }
        }
        let b = l2(&w);
        let (theta, s) = top_eigenpair(&alpha, &beta);
        if theta <= 0.0 {
            return Ok(NormEstimate { value: 0.0, iterations: basis.len(), residual: 0.0 });
        }
        let exhausted = b <= 1e-13 * theta || basis.len() == max_basis;
        if exhausted || (b * s[j].abs() / theta <= NORM_TOLERANCE / 4.0 && j % 4 == 3) {
            let mut x = Array1::<C>::zeros(dim);
            for (v, c) in basis.iter().zip(&s) {
                x.zip_mut_with(v, |a, y| *a += *c * y);
            }
            let gx = gram(&x);
            let r = &gx - &x.mapv(|y| y * theta);
            let residual = l2(&r) / (theta * l2(&x));
            if residual <= NORM_TOLERANCE {
                return Ok(NormEstimate { value: theta.sqrt(), iterations: basis.len(), residual });
            }
            if exhausted {
                return Err(Error::NoConvergence { iterations: basis.len(), residual });
            }
        }
        beta.push(b);
        basis.push(w.mapv(|x| x / b));
    }
}

const LANCZOS_MAX_BASIS: usize = 600;

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal `a`
/// and off-diagonal `b`, by Sturm bisection, and its unit eigenvector by
/// inverse iteration.
fn top_eigenpair(a: &[f64], b: &[f64]) -> (f64, Vec<f64>) {
    let m = a.len();
    let off = |i: usize| if i < b.len() { b[i].abs() } else { 0.0 };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..m {
        let r = off(i) + if i > 0 { off(i - 1) } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    // Number of eigenvalues below x.
    let below = |x: f64| {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..m {
            let prev = if i > 0 { b[i - 1] * b[i - 1] / q } else { 0.0 };
            q = a[i] - x - prev;
            if q == 0.0 {
                q = -f64::EPSILON * (x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) == m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = hi;
    // Inverse iteration on T − (θ + δ)I, tridiagonal solve with partial pivoting.
    let shift = theta + f64::EPSILON * 16.0 * (theta.abs() + 1.0);
    let mut s = vec![1.0; m];
    for _ in 0..3 {
        s = solve_tridiagonal(a, b, shift, &s);
        let n = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        s.iter_mut().for_each(|x| *x /= n);
    }
    (theta, s)
}

fn solve_tridiagonal(a: &[f64], b: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let m = a.len();
    // Dense band rows [diag, upper, upper2] after pivoting.
    let mut rows: Vec<[f64; 3]> = (0..m).map(|i| [a[i] - shift, if i + 1 < m { b[i] } else { 0.0 }, 0.0]).collect();
    let mut lower: Vec<f64> = (0..m).map(|i| if i > 0 { b[i - 1] } else { 0.0 }).collect();
    let mut y = rhs.to_vec();
    for i in 0..m.saturating_sub(1) {
        if lower[i + 1].abs() > rows[i][0].abs() {
            let next = [lower[i + 1], rows[i + 1][0], rows[i + 1][1]];
            let cur = rows[i];
            rows[i] = next;
            rows[i + 1] = [cur[1], cur[2], 0.0];
            lower[i + 1] = cur[0];
            y.swap(i, i + 1);
        }
        let f = lower[i + 1] / rows[i][0];
        rows[i + 1][0] -= f * rows[i][1];
        rows[i + 1][1] -= f * rows[i][2];
        y[i + 1] -= f * y[i];
    }
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        let mut v = y[i];
        if i + 1 < m {
            v -= rows[i][1] * x[i + 1];
        }
        if i + 2 < m {
            v -= rows[i][2] * x[i + 2];
        }
        let d = if rows[i][0].abs() < tiny { tiny } else { rows[i][0] };
        x[i] = v / d;
    }
    x
}

/// Matrix-free action of an exact operator on a state vector.
pub fn apply_operator(op: &PauliOperator, v: &Array1<C>, adjoint: bool) -> Array1<C> {
    let n = op.region().num_sites();
    let scale = op.scale().to_f64().unwrap();
    let mut out = Array1::zeros(v.len());
    for (k, c) in op.sorted_terms() {
        let (xm, zm) = basis_masks(k, n);
        let mut c = c.to_f64().unwrap() * scale;
        if adjoint && parity(xm & zm) {
            c = -c;
        }
        for b in 0..v.len() {
            let r = b ^ xm;
            out[r] += v[b] * if parity(zm & r) { -c } else { c };
        }
    }
    out
}

fn start_vector(dim: usize) -> Array1<C> {
    // Deterministic and generic: no exact symmetry of the lattice maps it to itself.
    let v = Array1::from_iter((0..dim).map(|i| C::new(1.0 + ((i * 7919) % 104_729) as f64 / 104_729.0, 0.25 * (i % 5) as f64)));
    let n = l2(&v);
    v.mapv(|x| x / n)
}

fn dot(a: &Array1<C>, b: &Array1<C>) -> C {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn l2(v: &Array1<C>) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn rayleigh(g: &Array2<C>, v: &Array1<C>) -> (f64, f64) {
    let w = g.dot(v);
    let lambda = dot(v, &w).re / dot(v, v).re;
    let r = &w - &v.mapv(|x| x * lambda);
    (lambda, l2(&r) / (lambda * l2(v)))
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    /// Largest entrywise difference between the series and the exponential.
    pub residual: f64,
    pub tail_bound: f64,
    /// residual ≤ tail_bound + 1e-8.
    pub pass: bool,
    /// residual ≤ tail_bound with no floating-point allowance.
    pub within_tail_bound: bool,
}

pub const CROSSCHECK_SLACK: f64 = 1e-8;

/// Compare the truncated series with the dense evolution.
pub fn crosscheck(a: &PauliOperator, z: C, region: &Region, n: usize) -> Result<CrosscheckReport> {
    check_size(region)?;
    let series = series_partial_sum(a, z, n, region)?;
    let lhs = complex_to_dense(&series.op)?;
    let rhs = evolve_dense(a, z, region)?;
    let residual = lhs.max_abs_diff(&rhs);
    Ok(CrosscheckReport {
        residual,
        tail_bound: series.tail_bound,
        pass: residual <= series.tail_bound + CROSSCHECK_SLACK,
        within_tail_bound: residual <= series.tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Site;
    use crate::pauli::{AlphaIndex, AlphaString};

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn single_site_matrices() {
        let r = Region::chain(0, 0).unwrap();
        let a2 = PauliOperator::from_string(&r, &AlphaString::single(Site::x(0), AlphaIndex::A2)).unwrap();
        let m = to_dense(&a2, &r).unwrap();
        assert_eq!(m.data, ndarray::array![[c(0.), c(1.)], [c(1.), c(0.)]]);
        let a3 = PauliOperator::from_string(&r, &AlphaString::single(Site::x(0), AlphaIndex::A3)).unwrap();
        assert_eq!(to_dense(&a3, &r).unwrap().data, ndarray::array![[c(0.), c(1.)], [c(-1.), c(0.)]]);
        let id = PauliOperator::from_string(&Region::rect(0, 1, 0, 1).unwrap(), &AlphaString::identity()).unwrap();
        assert_eq!(to_dense(&id, id.region()).unwrap(), DenseMatrix::identity(16));
    }

    #[test]
    fn norms_of_simple_matrices() {
        assert!((operator_norm(&DenseMatrix::identity(8)).unwrap().value - 1.0).abs() < 1e-12);
        let mut d = DenseMatrix::zeros(2);
        d.data[[0, 0]] = c(3.0);
        d.data[[1, 1]] = c(1.0);
        assert!((operator_norm(&d).unwrap().value - 3.0).abs() < 1e-9);
    }

    #[test]
    fn matrix_free_norm_agrees_with_dense() {
        // Nearly degenerate top: 3 and 3 − 1e−7.
        let mut d = DenseMatrix::zeros(40);
        for i in 0..40 {
            d.data[[i, i]] = c(1.0 + i as f64 / 40.0);
        }
        d.data[[7, 7]] = c(3.0);
        d.data[[20, 20]] = C::new(0.0, 3.0 - 1e-7);
        let mv = |v: &Array1<C>| d.data.dot(v);
        let adj = d.adjoint();
        let e = operator_norm_matrix_free(40, mv, |v| adj.data.dot(v)).unwrap();
        assert!((e.value - 3.0).abs() < 1e-12, "{e:?}");
        let r = Region::rect(0, 1, 0, 1).unwrap();
        let op = PauliOperator::from_strings(
            &r,
            &[
                AlphaString::new(3, [(crate::lattice::Site::xy(0, 0), AlphaIndex::A2), (crate::lattice::Site::xy(1, 1), AlphaIndex::A3)]),
                AlphaString::new(-2, [(crate::lattice::Site::xy(1, 0), AlphaIndex::A1)]),
                AlphaString::new(5, [(crate::lattice::Site::xy(0, 1), AlphaIndex::A3)]),
            ],
        )
        .unwrap();
        let dense = operator_norm(&to_dense(&op, &r).unwrap()).unwrap().value;
        let free = operator_norm_matrix_free(16, |v| apply_operator(&op, v, false), |v| apply_operator(&op, v, true)).unwrap();
        assert!((dense - free.value).abs() < 1e-9 * dense, "{dense} {free:?}");
        assert!(operator_norm_matrix_free(4, |v| v.mapv(|_| C::zero()), |v| v.clone()).unwrap().value == 0.0);
    }

    #[test]
    fn expm_of_diagonal_and_nilpotent() {
        let mut d = DenseMatrix::zeros(2);
        d.data[[0, 0]] = c(5.0);
        d.data[[1, 1]] = C::new(0.0, 2.0);
        let (p, q) = expm_pair(&d).unwrap();
        assert!((p.data[[0, 0]] - c(5f64.exp())).norm() < 1e-12 * 5f64.exp());
        assert!((p.data[[1, 1]] - C::new(0.0, 2.0).exp()).norm() < 1e-13);
        assert!((q.data[[0, 0]] - c((-5f64).exp())).norm() < 1e-16);
        let mut nil = DenseMatrix::zeros(2);
        nil.data[[0, 1]] = c(3.0);
        let e = expm(&nil).unwrap();
        assert_eq!(e.data, ndarray::array![[c(1.), c(3.)], [c(0.), c(1.)]]);
    }

    #[test]
    fn dump_roundtrip() {
        let r = Region::rect(0, 1, 0, 0).unwrap();
        let m = hamiltonian_dense(&r).unwrap();
        let mut buf = Vec::new();
        m.write_dump(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 16 * 16);
        assert_eq!(&buf[..8], &4u64.to_le_bytes());
        assert_eq!(DenseMatrix::read_dump(&buf[..]).unwrap(), m);
    }

    #[test]
    fn decomposition_inverts_to_dense() {
        let r = Region::rect(0, 1, -1, 0).unwrap();
        let a = PauliOperator::from_string(&r, &AlphaString::single(Site::xy(0, 0), AlphaIndex::A2)).unwrap();
        let ops = crate::pauli::iterated_commutant(&a, 3, &r).unwrap();
        for op in &ops {
            let m = to_dense(op, &r).unwrap();
            let back = complex_to_dense(&pauli_decompose(&m, &r).unwrap()).unwrap();
            assert!(m.max_abs_diff(&back) < 1e-9);
        }
    }

    #[test]
    fn crosscheck_at_zero() {
        let r = Region::rect(0, 1, 0, 1).unwrap();
        let a = PauliOperator::from_string(&r, &AlphaString::single(Site::xy(0, 0), AlphaIndex::A2)).unwrap();
        let rep = crosscheck(&a, C::zero(), &r, 5).unwrap();
        assert_eq!(rep.residual, 0.0);
        assert!(rep.pass);
    }
}
