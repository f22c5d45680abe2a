//! Symmetric positive-definite banded storage with Cholesky factorisation.

/// Upper band of a symmetric matrix: `band[i * (bw + 1) + k] = A[i][i + k]`.
#[derive(Debug, Clone)]
pub(crate) struct BandedSpd {
    n: usize,
    bw: usize,
    band: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct BandedCholesky {
    n: usize,
    bw: usize,
    /// Upper factor `U` with `A = Uᵀ U`, same layout as [`BandedSpd`].
    u: Vec<f64>,
}

impl BandedSpd {
    pub fn zeros(n: usize, bw: usize) -> Self {
        BandedSpd {
            n,
            bw,
            band: vec![0.0; n * (bw + 1)],
        }
    }

    /// Adds to `A[i][j]`; entries below the diagonal are mirrored.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        debug_assert!(j - i <= self.bw, "entry outside band");
        self.band[i * (self.bw + 1) + (j - i)] += v;
    }

    #[cfg(test)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j - i > self.bw {
            0.0
        } else {
            self.band[i * (self.bw + 1) + (j - i)]
        }
    }

    /// Fails when a pivot drops to `rel_tol` of its diagonal entry or below,
    /// i.e. the matrix is not (numerically) positive definite.
    pub fn factor(&self, rel_tol: f64) -> Option<BandedCholesky> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut u = self.band.clone();
        for i in 0..n {
            let jmax = (i + bw).min(n - 1);
            for j in i..=jmax {
                let mut s = u[i * w + (j - i)];
                let kmin = j.saturating_sub(bw);
                for k in kmin..i {
                    s -= u[k * w + (i - k)] * u[k * w + (j - k)];
                }
                if j == i {
                    let diag = self.band[i * w];
                    if !(s > rel_tol * diag.abs()) || !s.is_finite() {
                        return None;
                    }
                    u[i * w] = s.sqrt();
                } else {
                    u[i * w + (j - i)] = s / u[i * w];
                }
            }
        }
        Some(BandedCholesky { n, bw, u })
    }
}

impl BandedCholesky {
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut y = rhs.to_vec();
        // Uᵀ y = b
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.u[k * w + (i - k)] * y[k];
            }
            y[i] = s / self.u[i * w];
        }
        // U x = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in (i + 1)..=(i + bw).min(n - 1) {
                s -= self.u[i * w + (j - i)] * y[j];
            }
            y[i] = s / self.u[i * w];
        }
        y
    }
}
