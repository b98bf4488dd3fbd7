//! Shared numerical kernels: elementary symmetric polynomials, the
//! Poisson-binomial law, polynomial root finding, and eigensolver wrappers.

use ndarray::Array2;
use ndarray_linalg::EigVals;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Force single-threaded BLAS. On small matrices the threaded kernels lose
/// to their own synchronization; trial-level parallelism happens in rayon.
pub fn pin_blas_single_thread() {
    use std::sync::Once;
    static ONCE: Once = Once::new();
    ONCE.call_once(|| unsafe {
        openblas_set_num_threads(1);
    });
}

extern "C" {
    fn openblas_set_num_threads(n: std::os::raw::c_int);
}

/// Elementary symmetric polynomials `e_0..=e_k` of the given weights,
/// computed by the standard one-pass recurrence.
pub fn elementary_symmetric(weights: &[f64], k: usize) -> Vec<f64> {
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for &w in weights {
        for m in (1..=k).rev() {
            e[m] += w * e[m - 1];
        }
    }
    e
}

/// Log-space elementary symmetric polynomials: returns `ln e_m` for
/// `m = 0..=k` (`-inf` where `e_m = 0`). Used when the weight spread would
/// overflow the linear recurrence.
pub fn log_elementary_symmetric(log_weights: &[f64], k: usize) -> Vec<f64> {
    let mut e = vec![f64::NEG_INFINITY; k + 1];
    e[0] = 0.0;
    for &lw in log_weights {
        for m in (1..=k).rev() {
            e[m] = log_add_exp(e[m], lw + e[m - 1]);
        }
    }
    e
}

/// `ln(exp(a) + exp(b))` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Exact pmf of a sum of independent Bernoulli(p_i) variables, by the
/// convolution recurrence.
pub fn poisson_binomial_pmf(ps: &[f64]) -> Vec<f64> {
    let mut pmf = vec![0.0; ps.len() + 1];
    pmf[0] = 1.0;
    for (i, &p) in ps.iter().enumerate() {
        for m in (1..=i + 1).rev() {
            pmf[m] = pmf[m] * (1.0 - p) + pmf[m - 1] * p;
        }
        pmf[0] *= 1.0 - p;
    }
    pmf
}

/// Total variation distance between two pmfs on the same index set.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Eigenvalues of a general real matrix (possibly complex output).
pub fn real_matrix_eigenvalues(a: &Array2<f64>) -> Result<Vec<Complex64>> {
    pin_blas_single_thread();
    let vals = a
        .eigvals()
        .map_err(|e| Error::Eigensolver(format!("real eigvals: {e}")))?;
    Ok(vals.to_vec())
}

/// Eigenvalues of a general complex matrix.
pub fn complex_matrix_eigenvalues(a: &Array2<Complex64>) -> Result<Vec<Complex64>> {
    pin_blas_single_thread();
    let vals = a
        .eigvals()
        .map_err(|e| Error::Eigensolver(format!("complex eigvals: {e}")))?;
    Ok(vals.to_vec())
}

/// Roots of a real-coefficient polynomial `sum c_m z^m` via the companion
/// matrix. Leading/trailing zero coefficients are stripped first; a zero at
/// the origin is reported once per stripped trailing coefficient.
pub fn real_polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let eps = scale * 1e-14;
    let mut lo = 0;
    while lo < coeffs.len() && coeffs[lo].abs() <= eps {
        lo += 1;
    }
    let mut hi = coeffs.len();
    while hi > lo && coeffs[hi - 1].abs() <= eps {
        hi -= 1;
    }
    let mut roots: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); lo];
    let c = &coeffs[lo..hi];
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(roots);
    }
    let lead = c[deg];
    let mut comp = Array2::<f64>::zeros((deg, deg));
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    roots.extend(real_matrix_eigenvalues(&comp)?);
    Ok(roots)
}

/// Roots of a complex polynomial via its companion matrix. Exposed as the
/// slow reference route; the samplers use [`aberth_roots`].
pub fn companion_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 || coeffs[deg].norm() == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let lead = coeffs[deg];
    let mut comp = Array2::<Complex64>::zeros((deg, deg));
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    complex_matrix_eigenvalues(&comp)
}

/// Evaluate `p(z)` and `p'(z)` by Horner's rule.
pub fn eval_poly_and_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of a complex polynomial by Aberth-Ehrlich simultaneous
/// iteration, with Bini-style initial radii from the Newton polygon of the
/// coefficient moduli. Falls back to the companion matrix on the rare
/// non-converged instance.
pub fn aberth_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 || coeffs[deg].norm() == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    if deg <= 2 {
        return Ok(closed_form_roots(coeffs));
    }
    let mut z = initial_guesses(coeffs);
    let max_sweeps = 200;
    let tol = 1e-13;
    for _ in 0..max_sweeps {
        let mut moved = 0.0f64;
        for j in 0..deg {
            let (p, dp) = eval_poly_and_derivative(coeffs, z[j]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 { p / dp } else { Complex64::new(tol, tol) };
            let mut repulse = Complex64::new(0.0, 0.0);
            for (i, &zi) in z.iter().enumerate() {
                if i != j {
                    let d = z[j] - zi;
                    if d.norm() > 0.0 {
                        repulse += Complex64::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[j] -= step;
            moved = moved.max(step.norm() / (1.0 + z[j].norm()));
        }
        if moved < tol {
            return Ok(z);
        }
    }
    // rare: hand the polynomial to the eigensolver instead
    companion_roots(coeffs)
}

fn closed_form_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    match coeffs.len() {
        2 => vec![-coeffs[0] / coeffs[1]],
        3 => {
            let (a, b, c) = (coeffs[2], coeffs[1], coeffs[0]);
            let disc = (b * b - 4.0 * a * c).sqrt();
            // pick the sign that avoids cancellation in -b -/+ disc
            let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) } else { -(b - disc) };
            let q = q * 0.5;
            let r1 = q / a;
            let r2 = if q.norm() > 0.0 { c / q } else { Complex64::new(0.0, 0.0) };
            vec![r1, r2]
        }
        _ => unreachable!(),
    }
}

/// Bini's starting points: radii from the upper convex hull of
/// `(m, ln |c_m|)`, angles spread with a fixed irrational offset.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    let logs: Vec<f64> = coeffs
        .iter()
        .map(|c| if c.norm() > 0.0 { c.norm().ln() } else { f64::NEG_INFINITY })
        .collect();
    // upper convex hull indices of (m, logs[m])
    let mut hull: Vec<usize> = Vec::new();
    for m in 0..=deg {
        if logs[m] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b as f64 - a as f64) * (logs[m] - logs[a])
                - (m as f64 - a as f64) * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(m);
    }
    let mut z = Vec::with_capacity(deg);
    let offset = 0.376_991_118_430_775_2; // fixed angular phase
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let r = ((logs[a] - logs[b]) / (b as f64 - a as f64)).exp();
        let count = b - a;
        for t in 0..count {
            let idx = z.len();
            let angle = 2.0 * std::f64::consts::PI * (t as f64 / count as f64)
                + offset * (1.0 + idx as f64 / deg as f64);
            z.push(Complex64::from_polar(r, angle));
        }
    }
    while z.len() < deg {
        let idx = z.len();
        let angle = 2.0 * std::f64::consts::PI * idx as f64 / deg as f64 + offset;
        z.push(Complex64::from_polar(1.0, angle));
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_symmetric_small() {
        let e = elementary_symmetric(&[1.0, 2.0, 3.0], 3);
        assert_eq!(e, vec![1.0, 6.0, 11.0, 6.0]);
    }

    #[test]
    fn log_space_matches_linear() {
        let w = [0.5, 1.5, 2.0, 0.25];
        let lin = elementary_symmetric(&w, 4);
        let logs: Vec<f64> = w.iter().map(|x| x.ln()).collect();
        let log_e = log_elementary_symmetric(&logs, 4);
        for (a, b) in lin.iter().zip(&log_e) {
            assert!((a.ln() - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn poisson_binomial_matches_binomial() {
        let pmf = poisson_binomial_pmf(&[0.5; 4]);
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0].map(|c| c / 16.0);
        for (a, b) in pmf.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-15);
        }
        // heterogeneous: mean must match sum of p
        let ps = [0.1, 0.7, 0.3];
        let pmf = poisson_binomial_pmf(&ps);
        let mean: f64 = pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert!((mean - 1.1).abs() < 1e-14);
    }

    #[test]
    fn real_roots_of_quadratic() {
        // (z+1)^2 = 1 + 2z + z^2
        let roots = real_polynomial_roots(&[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!((r.re + 1.0).abs() < 1e-8 && r.im.abs() < 1e-8);
        }
        // (1 + z^2)/2 has roots +/- i
        let roots = real_polynomial_roots(&[0.5, 0.0, 0.5]).unwrap();
        let mut ims: Vec<f64> = roots.iter().map(|r| r.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-10 && (ims[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn trailing_zero_coefficients_give_origin_roots() {
        // z^2 (monic, rank polynomial of a point mass at rank 2)
        let roots = real_polynomial_roots(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!(r.norm() < 1e-14);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            real_polynomial_roots(&[0.0, 0.0]),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn aberth_agrees_with_companion() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        for trial in 0..20 {
            let deg = 3 + (trial % 12);
            let coeffs: Vec<Complex64> = (0..=deg)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let mut a = aberth_roots(&coeffs).unwrap();
            let mut b = companion_roots(&coeffs).unwrap();
            let key = |z: &Complex64| (z.re, z.im);
            a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
            b.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() < 1e-6, "deg {deg}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn aberth_high_degree_residuals_vanish() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let coeffs: Vec<Complex64> = (0..=200)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let roots = aberth_roots(&coeffs).unwrap();
        assert_eq!(roots.len(), 200);
        for r in roots {
            let (p, _) = eval_poly_and_derivative(&coeffs, r);
            // Horner residual at a root is bounded by round-off times the
            // sum of |c_k| |r|^k
            let cond: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm() * r.norm().powi(k as i32))
                .sum();
            assert!(p.norm() < 1e-10 * cond, "residual {} vs cond {}", p.norm(), cond);
        }
    }

    #[test]
    fn aberth_agrees_with_companion_at_degree_sixty() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        let coeffs: Vec<Complex64> = (0..=60)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let mut a = aberth_roots(&coeffs).unwrap();
        let mut b = companion_roots(&coeffs).unwrap();
        let key = |z: &Complex64| (z.re, z.im);
        a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        b.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-7, "{x} vs {y}");
        }
    }
}
