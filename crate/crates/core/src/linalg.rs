//! Dense symmetric matrices and a deterministic symmetric eigensolver.
//!
//! The solver is the classical Householder tridiagonalization followed by
//! the implicit QL iteration (EISPACK `tred2` / `tql2`). It performs a fixed
//! sequence of floating point operations for a given input, so results are
//! reproducible bit for bit on IEEE-754 hardware.

use crate::error::{Error, Result};

/// Square matrix of `f64`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// `Σ_k coeffs[k] · v_k v_kᵀ`.
    pub fn from_outer_products(n: usize, vectors: &[Vec<f64>], coeffs: &[f64]) -> Self {
        let mut out = Self::zeros(n);
        for (v, &a) in vectors.iter().zip(coeffs) {
            if a == 0.0 {
                continue;
            }
            for i in 0..n {
                let s = a * v[i];
                if s == 0.0 {
                    continue;
                }
                let row = &mut out.data[i * n..(i + 1) * n];
                for (x, &vj) in row[i..].iter_mut().zip(&v[i..]) {
                    *x += s * vj;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out.data[i * n + j] = out.data[j * n + i];
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Frobenius (entrywise) inner product.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const MAX_QL_ITERATIONS: usize = 60;

/// Full eigendecomposition of a symmetric matrix.
pub fn symmetric_eigen(a: &SymMatrix) -> Result<Eigen> {
    let n = a.dim();
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    let mut v = a.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    // Rows of `q` are the eigenvectors; keeps the QL rotations contiguous.
    let mut q = transpose(n, &v);
    tql2(n, &mut q, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = order.iter().map(|&i| q[i * n..(i + 1) * n].to_vec()).collect();
    Ok(Eigen { values, vectors })
}

fn transpose(n: usize, v: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = v[i * n + j];
        }
    }
    t
}

/// Householder reduction to tridiagonal form. On return `d` holds the
/// diagonal, `e[1..]` the subdiagonal and `v` the accumulated transform.
fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    d.copy_from_slice(&v[at(n - 1, 0)..at(n - 1, 0) + n]);

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);

            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal matrix; `q` rows are rotated alongside.
fn tql2(n: usize, q: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let tst1 = d
        .iter()
        .zip(e.iter())
        .map(|(a, b)| a.abs() + b.abs())
        .fold(0.0, f64::max);
    for l in 0..n {
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > MAX_QL_ITERATIONS {
                    return Err(Error::Convergence {
                        iterations,
                        residual: e[l].abs(),
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d[l + 2..n].iter_mut() {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = q.split_at_mut((i + 1) * n);
                    let qi = &mut lo[i * n..];
                    let qi1 = &mut hi[..n];
                    for (a, b) in qi.iter_mut().zip(qi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &SymMatrix) {
        let eig = symmetric_eigen(a).unwrap();
        let n = a.dim();
        let scale = a.frobenius_norm().max(1.0);
        for w in eig.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        for (lam, v) in eig.values.iter().zip(&eig.vectors) {
            let av = a.matvec(v);
            let res: f64 = av.iter().zip(v).map(|(x, y)| (x - lam * y).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-12 * scale, "residual {res}");
        }
        for i in 0..n {
            for j in 0..n {
                let ip = dot(&eig.vectors[i], &eig.vectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_matrix() {
        let a = SymMatrix::from_fn(3, |i, j| if i == j { [2.0, -1.0, 5.0][i] } else { 0.0 });
        let eig = symmetric_eigen(&a).unwrap();
        assert_eq!(eig.values, vec![5.0, 2.0, -1.0]);
        check(&a);
    }

    #[test]
    fn path_graph_spectrum() {
        // Eigenvalues of the path P_n are 2 cos(kπ/(n+1)).
        let n = 7;
        let a = SymMatrix::from_fn(n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
        let eig = symmetric_eigen(&a).unwrap();
        for (k, lam) in eig.values.iter().enumerate() {
            let want = 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((lam - want).abs() < 1e-12);
        }
        check(&a);
    }

    #[test]
    fn dense_pseudo_random() {
        let mut s = 12345u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        let n = 40;
        let mut a = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let x = next();
                a.set(i, j, x);
                a.set(j, i, x);
            }
        }
        check(&a);
    }

    #[test]
    fn zero_and_tiny_matrices() {
        check(&SymMatrix::zeros(4));
        check(&SymMatrix::from_fn(1, |_, _| 3.0));
        assert!(symmetric_eigen(&SymMatrix::zeros(0)).unwrap().values.is_empty());
    }

    #[test]
    fn outer_products_and_inner() {
        let v = vec![vec![1.0, 0.0], vec![0.0, 2.0]];
        let x = SymMatrix::from_outer_products(2, &v, &[3.0, 0.5]);
        assert_eq!(x.diagonal(), vec![3.0, 2.0]);
        assert_eq!(x.inner(&x), 13.0);
        assert!(x.is_symmetric());
    }

    #[test]
    fn highly_degenerate_block_matrix() {
        // Bipartite adjacency of the identity blown up 32 times: rank 8 in dimension 256.
        let a = SymMatrix::from_fn(256, |i, j| {
            let (r, c) = if i < j { (i, j) } else { (j, i) };
            if r < 128 && c >= 128 && r / 32 == (c - 128) / 32 {
                1.0
            } else {
                0.0
            }
        });
        check(&a);
    }
}
