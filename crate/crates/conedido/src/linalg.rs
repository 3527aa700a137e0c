//! Sparse symmetric solvers: CSR matrices with preconditioned conjugate
//! gradients, and Sturm-sequence bisection for symmetric tridiagonal
//! eigenproblems.

use crate::error::{Error, Result};

/// Compressed sparse row matrix.
pub struct CsrMatrix {
    pub n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from unsorted triplets, summing duplicates.
    pub fn from_triplets(n: usize, triplets: &mut Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::new();
        let mut data = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for &(i, j, v) in triplets.iter() {
            if last == Some((i, j)) {
                *data.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                data.push(v);
                indptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        CsrMatrix { n, indptr, indices, data }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for idx in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[idx] * x[self.indices[idx]];
            }
            y[i] = acc;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            for idx in self.indptr[i]..self.indptr[i + 1] {
                if self.indices[idx] == i {
                    d[i] += self.data[idx];
                }
            }
        }
        d
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients to relative residual `tol`.
/// Returns (solution, achieved relative residual).
pub fn cg_jacobi(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
    let n = a.n;
    let diag = a.diagonal();
    if diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::Numerical(
            "matrix has nonpositive diagonal entries; not positive definite".into(),
        ));
    }
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], 0.0));
    }
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for _ in 0..max_iter {
        a.matvec(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            return Err(Error::Numerical(format!(
                "CG broke down (p·Ap = {pap:.3e}); system may be indefinite"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = dot(&r, &r).sqrt();
        if rnorm <= tol * bnorm {
            return Ok((x, rnorm / bnorm));
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::Numerical(format!(
        "CG did not reach tolerance {tol:.1e} in {max_iter} iterations (relative residual {:.3e}); \
         the system is likely ill-conditioned",
        dot(&r, &r).sqrt() / bnorm
    )))
}

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) matrix
/// strictly below x, by the Sturm sequence.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = d - x - if q != 0.0 { e2 / q } else { e2 / 1e-300 };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` smallest eigenvalues of the symmetric tridiagonal matrix
/// with diagonal `diag` and off-diagonal `off`, by bisection.
pub fn tridiag_smallest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n);
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let mut out = Vec::with_capacity(count);
    for m in 1..=count.min(n) {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid) >= m {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 1e-14 * b.abs().max(1.0) {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Eigenvector for an isolated eigenvalue of the symmetric tridiagonal
/// matrix, by two rounds of shifted inverse iteration.
pub fn tridiag_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let shift = lambda + 1e-10 * (1.0 + lambda.abs());
    let mut v: Vec<f64> = (0..n).map(|i| ((i * 2654435761 + 1013904223) % 1000) as f64 / 1000.0 - 0.5).collect();
    for _ in 0..4 {
        // Thomas algorithm on (T - shift I) x = v with partial scaling
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = diag[0] - shift;
        if denom.abs() < 1e-300 {
            denom = 1e-300;
        }
        c[0] = if n > 1 { off[0] / denom } else { 0.0 };
        d[0] = v[0] / denom;
        for i in 1..n {
            let mut m = diag[i] - shift - off[i - 1] * c[i - 1];
            if m.abs() < 1e-300 {
                m = 1e-300;
            }
            if i < n - 1 {
                c[i] = off[i] / m;
            }
            d[i] = (v[i] - off[i - 1] * d[i - 1]) / m;
        }
        v[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            v[i] = d[i] - c[i] * v[i + 1];
        }
        let norm = dot(&v, &v).sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cg_solves_laplacian() {
        // 1-D Dirichlet Laplacian, solution of -u'' = 1 on (0,1)
        let n = 99;
        let h = 1.0 / (n + 1) as f64;
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, 2.0 / (h * h)));
            if i > 0 {
                trip.push((i, i - 1, -1.0 / (h * h)));
            }
            if i + 1 < n {
                trip.push((i, i + 1, -1.0 / (h * h)));
            }
        }
        let a = CsrMatrix::from_triplets(n, &mut trip);
        let b = vec![1.0; n];
        let (x, res) = cg_jacobi(&a, &b, 1e-12, 10_000).unwrap();
        assert!(res <= 1e-12);
        for i in 0..n {
            let t = (i + 1) as f64 * h;
            let exact = 0.5 * t * (1.0 - t);
            assert!((x[i] - exact).abs() < 1e-10, "i={i}: {} vs {exact}", x[i]);
        }
    }

    #[test]
    fn duplicate_triplets_are_summed() {
        let mut trip = vec![(0, 0, 1.0), (0, 0, 1.5), (1, 1, 2.0), (0, 1, 0.5), (1, 0, 0.5)];
        let a = CsrMatrix::from_triplets(2, &mut trip);
        let mut y = vec![0.0; 2];
        a.matvec(&[1.0, 1.0], &mut y);
        assert!((y[0] - 3.0).abs() < 1e-15);
        assert!((y[1] - 2.5).abs() < 1e-15);
    }

    #[test]
    fn tridiag_eigenvalues_of_discrete_laplacian() {
        // eigenvalues of the n x n (2,-1) matrix: 2 - 2cos(k pi/(n+1))
        let n = 50;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let got = tridiag_smallest_eigenvalues(&diag, &off, 3);
        for (m, g) in got.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((m + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((g - exact).abs() < 1e-10, "m={m}: {g} vs {exact}");
        }
        let v = tridiag_eigenvector(&diag, &off, got[0]);
        // residual check
        let mut res: f64 = 0.0;
        for i in 0..n {
            let mut t = diag[i] * v[i] - got[0] * v[i];
            if i > 0 {
                t += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                t += off[i] * v[i + 1];
            }
            res = res.max(t.abs());
        }
        assert!(res < 1e-8, "eigenvector residual {res}");
    }
}
