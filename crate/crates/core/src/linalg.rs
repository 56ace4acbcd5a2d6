//! Dense Hermitian matrices and their Cholesky factors.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Diagonal jitter levels tried in turn, relative to the mean diagonal.
pub const JITTER_LEVELS: [f64; 3] = [0.0, 1e-12, 1e-10];

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::default(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Hermitian Toeplitz matrix with entries `lag(i - j)`.
    pub fn toeplitz(n: usize, lag: impl Fn(i64) -> Complex64) -> Self {
        let col: Vec<Complex64> = (0..n as i64).map(&lag).collect();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = if i >= j { col[i - j] } else { col[j - i].conj() };
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(mut self, c: f64) -> Self {
        self.data.iter_mut().for_each(|v| *v *= c);
        self
    }

    pub fn add_identity(mut self, c: f64) -> Self {
        for i in 0..self.n {
            self[(i, i)] += c;
        }
        self
    }

    /// `D M D^H` with `D = diag(d)`.
    pub fn conjugate_by_diagonal(mut self, d: &[Complex64]) -> Self {
        for i in 0..self.n {
            for j in 0..self.n {
                let v = d[i] * self[(i, j)] * d[j].conj();
                self[(i, j)] = v;
            }
        }
        self
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Lower-triangular `L` with `L L^H = K`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    // packed row-major lower triangle
    l: Vec<Complex64>,
    log_det: f64,
}

impl Cholesky {
    fn row(i: usize) -> usize {
        i * (i + 1) / 2
    }

    /// Plain factorization; `None` when a pivot is not strictly positive.
    pub fn factor(k: &CMatrix) -> Option<Self> {
        let n = k.dim();
        let mut l = vec![Complex64::default(); n * (n + 1) / 2];
        let mut log_det = 0.0;
        for i in 0..n {
            for j in 0..=i {
                let mut s = k[(i, j)];
                for p in 0..j {
                    s -= l[Self::row(i) + p] * l[Self::row(j) + p].conj();
                }
                if i == j {
                    let d = s.re;
                    if !(d > 0.0 && d.is_finite()) {
                        return None;
                    }
                    let root = d.sqrt();
                    l[Self::row(i) + i] = Complex64::new(root, 0.0);
                    log_det += 2.0 * root.ln();
                } else {
                    l[Self::row(i) + j] = s / l[Self::row(j) + j].re;
                }
            }
        }
        Some(Self { n, l, log_det })
    }

    /// Factorization with escalating diagonal jitter (see [`JITTER_LEVELS`]).
    pub fn factor_with_jitter(k: &CMatrix) -> Result<Self> {
        let n = k.dim();
        let mean_diag = (0..n).map(|i| k[(i, i)].re).sum::<f64>() / n.max(1) as f64;
        for &jit in &JITTER_LEVELS {
            let attempt = if jit == 0.0 {
                Self::factor(k)
            } else {
                Self::factor(&k.clone().add_identity(jit * mean_diag))
            };
            if let Some(c) = attempt {
                return Ok(c);
            }
        }
        Err(Error::Factorization {
            jitter: JITTER_LEVELS[JITTER_LEVELS.len() - 1],
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `log det K`.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// `L w`.
    pub fn mul_lower(&self, w: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                let r = &self.l[Self::row(i)..Self::row(i) + i + 1];
                r.iter().zip(&w[..=i]).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `y^H K^{-1} y = |L^{-1} y|^2`.
    pub fn quad_form(&self, y: &[Complex64]) -> f64 {
        let mut z = vec![Complex64::default(); self.n];
        self.quad_form_into(y, &mut z)
    }

    /// Same as [`quad_form`](Self::quad_form) using caller scratch of length `n`.
    pub fn quad_form_into(&self, y: &[Complex64], z: &mut [Complex64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let r = &self.l[Self::row(i)..Self::row(i) + i];
            let s: Complex64 = r.iter().zip(&z[..i]).map(|(a, b)| a * b).sum();
            let zi = (y[i] - s) / self.l[Self::row(i) + i].re;
            z[i] = zi;
            acc += zi.norm_sqr();
        }
        acc
    }
}

/// Log-density of a circularly-symmetric complex Gaussian vector with covariance `K`.
pub fn log_likelihood(y: &[Complex64], k: &CMatrix) -> Result<f64> {
    let c = Cholesky::factor(k).ok_or(Error::Factorization { jitter: 0.0 })?;
    Ok(log_likelihood_factored(y, &c))
}

pub fn log_likelihood_factored(y: &[Complex64], c: &Cholesky) -> f64 {
    -(c.dim() as f64) * std::f64::consts::PI.ln() - c.log_det() - c.quad_form(y)
}
