//! Finite Hermitian determinantal measures: exact pmf by
//! inclusion-exclusion over principal minors, and exact sampling through
//! the spectral mixture of projection processes.
//!
//! A kernel `K` with spectrum in `[0,1]` defines the measure with
//! `E prod_{j in S} X_j = det K_S`. Sampling eigendecomposes `K`, keeps
//! eigenvector `i` with an independent coin of probability `lambda_i`, and
//! then draws the rank-`|I|` projection process point by point, the
//! conditional law at each step being the residual kernel diagonal divided
//! by the remaining rank.

use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;
use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::measures::BooleanMeasure;
use crate::numeric::pin_blas_single_thread;

/// Cap for the exact pmf via inclusion-exclusion.
pub const EXACT_PMF_CAP: usize = 12;

/// Eigenvalues within this of [0,1] are clamped; beyond it construction
/// fails naming the offending eigenvalue.
pub const SPECTRUM_TOL: f64 = 1e-9;

/// Hermitian deviation tolerance at construction.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// An n x n complex Hermitian matrix with spectrum in [0,1], validated and
/// eigendecomposed at construction.
#[derive(Debug, Clone)]
pub struct HermitianKernel {
    n: usize,
    entries: Array2<Complex64>,
    eigenvalues: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, matching `eigenvalues`.
    eigenvectors: Array2<Complex64>,
}

impl HermitianKernel {
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        pin_blas_single_thread();
        let (rows, cols) = entries.dim();
        if rows != cols || rows == 0 {
            return Err(Error::InvalidParameter(format!(
                "kernel must be square and nonempty, got {rows}x{cols}"
            )));
        }
        let n = rows;
        let mut max_dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dev = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                max_dev = max_dev.max(dev);
            }
        }
        if max_dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev });
        }
        let (vals, vecs) = entries
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Eigensolver(format!("hermitian eigh: {e}")))?;
        let mut eigenvalues = Vec::with_capacity(n);
        for (index, &v) in vals.iter().enumerate() {
            if v < -SPECTRUM_TOL || v > 1.0 + SPECTRUM_TOL {
                return Err(Error::SpectrumOutOfRange { index, value: v });
            }
            eigenvalues.push(v.clamp(0.0, 1.0));
        }
        Ok(HermitianKernel {
            n,
            entries,
            eigenvalues,
            eigenvectors: vecs,
        })
    }

    /// Diagonal kernel: the product Bernoulli measure with the given means.
    pub fn diagonal(ps: &[f64]) -> Result<Self> {
        let n = ps.len();
        let mut m = Array2::zeros((n, n));
        for (i, &p) in ps.iter().enumerate() {
            m[(i, i)] = Complex64::new(p, 0.0);
        }
        Self::new(m)
    }

    /// Build `U diag(spectrum) U*` from a seeded Haar-ish unitary, giving a
    /// valid kernel with exactly the requested spectrum.
    pub fn from_spectrum_seeded(spectrum: &[f64], seed: crate::rng::SeededRng) -> Result<Self> {
        let n = spectrum.len();
        for &s in spectrum {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::InvalidParameter(format!(
                    "requested eigenvalue {s} outside [0,1]"
                )));
            }
        }
        let mut rng = seed.rng();
        let u = random_unitary(n, &mut rng);
        let mut k = Array2::<Complex64>::zeros((n, n));
        for a in 0..n {
            for b in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, &s) in spectrum.iter().enumerate() {
                    acc += u[(a, l)] * s * u[(b, l)].conj();
                }
                k[(a, b)] = acc;
            }
        }
        // symmetrize away the accumulation dust
        let kh = k.t().mapv(|z| z.conj());
        let k = (&k + &kh).mapv(|z| z * 0.5);
        Self::new(k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    /// Eigenvalues clamped to [0,1], ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Serialize as `{"n": n, "re": [[..]], "im": [[..]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let re: Vec<Vec<f64>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entries[(i, j)].re).collect())
            .collect();
        let im: Vec<Vec<f64>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entries[(i, j)].im).collect())
            .collect();
        json!({"n": self.n, "re": re, "im": im})
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let n = value
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Parse("kernel JSON needs integer field `n`".into()))?
            as usize;
        let read_matrix = |key: &str| -> Result<Vec<Vec<f64>>> {
            let rows = value
                .get(key)
                .and_then(|v| v.as_array())
                .ok_or_else(|| Error::Parse(format!("kernel JSON needs array field `{key}`")))?;
            rows.iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Parse(format!("`{key}` rows must be arrays")))?
                        .iter()
                        .map(|x| {
                            x.as_f64()
                                .ok_or_else(|| Error::Parse(format!("`{key}` entries must be numbers")))
                        })
                        .collect()
                })
                .collect()
        };
        let re = read_matrix("re")?;
        let im = read_matrix("im")?;
        if re.len() != n || im.len() != n || re.iter().any(|r| r.len() != n) || im.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("kernel matrices must be {n}x{n}")));
        }
        let mut entries = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                entries[(i, j)] = Complex64::new(re[i][j], im[i][j]);
            }
        }
        Self::new(entries)
    }

    pub fn read_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        Self::from_json(&value)
    }
}

/// QR-based random unitary with column phase fixing.
fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> Array2<Complex64> {
    use rand_distr::StandardNormal;
    let mut g = Array2::<Complex64>::zeros((n, n));
    for v in g.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v = Complex64::new(re, im);
    }
    // modified Gram-Schmidt on columns
    for c in 0..n {
        for prev in 0..c {
            let mut dot = Complex64::new(0.0, 0.0);
            for r in 0..n {
                dot += g[(r, prev)].conj() * g[(r, c)];
            }
            for r in 0..n {
                let sub = dot * g[(r, prev)];
                g[(r, c)] -= sub;
            }
        }
        let norm: f64 = (0..n).map(|r| g[(r, c)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..n {
            g[(r, c)] /= norm;
        }
    }
    g
}

/// Exact pmf of the determinantal measure: inclusion-exclusion over the
/// principal minors, `P(exactly S) = sum_{T >= S} (-1)^{|T\S|} det K_T`,
/// computed with the signed superset Moebius transform. Small negative
/// dust (>= -1e-9) is clamped to zero.
pub fn dpp_exact_pmf(kernel: &HermitianKernel) -> Result<BooleanMeasure> {
    let n = kernel.n();
    if n > EXACT_PMF_CAP {
        return Err(Error::CapExceeded { n, cap: EXACT_PMF_CAP });
    }
    let size = 1usize << n;
    let mut values = vec![0.0f64; size];
    for (mask, v) in values.iter_mut().enumerate() {
        *v = principal_minor(kernel.entries(), mask, n);
    }
    // signed superset transform: f(S) <- f(S) - f(S | {j})
    for j in 0..n {
        let bit = 1usize << j;
        for mask in 0..size {
            if mask & bit == 0 {
                values[mask] -= values[mask | bit];
            }
        }
    }
    let mut total = 0.0;
    for v in values.iter_mut() {
        if *v < 0.0 {
            if *v < -1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "inclusion-exclusion produced mass {v}; kernel is not a valid DPP kernel"
                )));
            }
            *v = 0.0;
        }
        total += *v;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { total });
    }
    BooleanMeasure::new(n, values)
}

/// det K_S for the principal submatrix indexed by `mask`, by complex LU
/// with partial pivoting. Hermitian minors are real; the imaginary dust is
/// discarded.
fn principal_minor(k: &Array2<Complex64>, mask: usize, n: usize) -> f64 {
    let idx: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
    let m = idx.len();
    if m == 0 {
        return 1.0;
    }
    let mut a: Vec<Complex64> = Vec::with_capacity(m * m);
    for &i in &idx {
        for &j in &idx {
            a.push(k[(i, j)]);
        }
    }
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..m {
        let mut pivot = col;
        let mut best = a[col * m + col].norm();
        for row in col + 1..m {
            let mag = a[row * m + col].norm();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..m {
                a.swap(col * m + j, pivot * m + j);
            }
            det = -det;
        }
        let diag = a[col * m + col];
        det *= diag;
        for row in col + 1..m {
            let factor = a[row * m + col] / diag;
            for j in col..m {
                let sub = factor * a[col * m + j];
                a[row * m + j] -= sub;
            }
        }
    }
    det.re
}

/// Draw one sample of the determinantal measure; returns the sorted index
/// set.
pub fn sample_dpp_finite<R: Rng>(kernel: &HermitianKernel, rng: &mut R) -> Result<Vec<usize>> {
    let n = kernel.n();
    // spectral coins select the projection component
    let mut columns: Vec<Vec<Complex64>> = Vec::new();
    for (i, &lambda) in kernel.spectrum().iter().enumerate() {
        if rng.random::<f64>() < lambda {
            columns.push((0..n).map(|r| kernel.eigenvectors[(r, i)]).collect());
        }
    }
    let k = columns.len();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for step in 0..k {
        let remaining = k - step;
        // conditional intensity: row norms of the residual basis
        let mut row_norms = vec![0.0f64; n];
        for col in &columns {
            for (x, v) in col.iter().enumerate() {
                row_norms[x] += v.norm_sqr();
            }
        }
        let total: f64 = row_norms.iter().sum();
        debug_assert!((total - remaining as f64).abs() < 1e-6);
        let mut pick = rng.random::<f64>() * total;
        let mut x = n - 1;
        for (site, &w) in row_norms.iter().enumerate() {
            pick -= w;
            if pick <= 0.0 {
                x = site;
                break;
            }
        }
        chosen.push(x);
        // project the basis onto {v : v(x) = 0} and re-orthonormalize
        let pivot = (0..columns.len())
            .max_by(|&a, &b| columns[a][x].norm().total_cmp(&columns[b][x].norm()))
            .expect("nonempty basis");
        let pivot_col = columns.swap_remove(pivot);
        let pv = pivot_col[x];
        for col in columns.iter_mut() {
            let factor = col[x] / pv;
            for (r, v) in col.iter_mut().enumerate() {
                *v -= factor * pivot_col[r];
            }
        }
        orthonormalize(&mut columns);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Modified Gram-Schmidt with one re-orthogonalization pass whenever a
/// residual norm falls below 1e-8.
fn orthonormalize(columns: &mut [Vec<Complex64>]) {
    let count = columns.len();
    for c in 0..count {
        for pass in 0..2 {
            for prev in 0..c {
                let dot: Complex64 = columns[prev]
                    .iter()
                    .zip(&columns[c])
                    .map(|(p, v)| p.conj() * v)
                    .sum();
                let prev_col = columns[prev].clone();
                for (v, p) in columns[c].iter_mut().zip(prev_col) {
                    *v -= dot * p;
                }
            }
            let norm: f64 = columns[c].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 || pass == 1 {
                for v in columns[c].iter_mut() {
                    *v /= norm;
                }
                break;
            }
        }
    }
}
