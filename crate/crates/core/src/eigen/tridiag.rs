//! Symmetric tridiagonal eigenproblems: Sturm-count bisection for the lowest
//! eigenvalues and shifted inverse iteration for their vectors.

use crate::error::{PdmError, Result};

const MAX_BISECTIONS: usize = 400;
const MAX_INVERSE_ITERATIONS: usize = 8;

fn pivot_floor(off: &[f64]) -> f64 {
    let emax = off.iter().fold(0.0f64, |a, &e| a.max(e * e));
    f64::MIN_POSITIVE * emax.max(1.0)
}

/// Number of eigenvalues strictly below `x`, from the signs of the LDLᵀ pivots
/// of `T − xI`.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    sturm_count_with_floor(diag, off, x, pivot_floor(off))
}

fn sturm_count_with_floor(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 {
            d - x
        } else {
            let e = off[i - 1];
            d - x - e * e / q
        };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the whole spectrum.
pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
    (lo - pad, hi + pad)
}

/// The `k` lowest eigenvalues in ascending order, each bisected down to a
/// few ulps. Deterministic: the sequence of trial points depends only on the
/// matrix entries.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(PdmError::invalid(format!(
            "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
            n,
            off.len()
        )));
    }
    if k == 0 || k > n {
        return Err(PdmError::invalid(format!(
            "requested {k} eigenvalues of a {n}x{n} matrix"
        )));
    }
    if diag.iter().chain(off).any(|v| !v.is_finite()) {
        return Err(PdmError::invalid("non-finite matrix entry"));
    }
    let pivmin = pivot_floor(off);
    let (glo, ghi) = gershgorin(diag, off);
    // Absolute resolution for eigenvalues at or near zero.
    let abs_floor = pivmin.max(1e-12 * f64::EPSILON * (ghi - glo));
    let mut lo = vec![glo; k];
    let mut hi = vec![ghi; k];
    let mut values = Vec::with_capacity(k);
    for j in 0..k {
        let mut steps = 0;
        loop {
            let (a, b) = (lo[j], hi[j]);
            let mid = 0.5 * (a + b);
            let tol = 2.0 * f64::EPSILON * a.abs().max(b.abs()) + abs_floor;
            if b - a <= tol || mid <= a || mid >= b {
                break;
            }
            steps += 1;
            if steps > MAX_BISECTIONS {
                return Err(PdmError::NumericFailure(format!(
                    "bisection for eigenvalue {j} did not terminate"
                )));
            }
            let c = sturm_count_with_floor(diag, off, mid, pivmin);
            for i in j..k {
                if i < c {
                    hi[i] = hi[i].min(mid);
                } else {
                    lo[i] = lo[i].max(mid);
                }
            }
        }
        values.push(0.5 * (lo[j] + hi[j]));
    }
    Ok(values)
}

/// LU factorization with partial pivoting of a tridiagonal matrix
/// (the `gttrf` scheme, one extra superdiagonal of fill).
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|&v| v - shift).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        // An exact eigenvalue shift can leave a zero pivot.
        for p in d.iter_mut() {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unit eigenvectors (Euclidean norm) for the given eigenvalues by shifted
/// inverse iteration. Vectors whose eigenvalues lie within a relative `1e-7`
/// of an earlier one are orthogonalized against it.
///
/// The start vector is `1 + i/n`: deterministic, and not orthogonal to
/// eigenvectors of either parity on symmetric problems.
pub fn eigenvectors(diag: &[f64], off: &[f64], values: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = diag.len();
    let (glo, ghi) = gershgorin(diag, off);
    let scale = glo.abs().max(ghi.abs()).max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    for (level, &lambda) in values.iter().enumerate() {
        let lu = TridiagLu::factor(diag, off, lambda, tiny);
        let cluster: Vec<usize> = (0..level)
            .filter(|&j| (values[j] - lambda).abs() <= 1e-7 * lambda.abs().max(1.0))
            .collect();
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / n as f64).collect();
        normalize(&mut v);
        let mut converged = false;
        for iter in 0..MAX_INVERSE_ITERATIONS {
            let mut y = v.clone();
            lu.solve(&mut y);
            if y.iter().any(|x| !x.is_finite()) {
                return Err(PdmError::EigenvectorFailure { level });
            }
            normalize(&mut y);
            for &j in &cluster {
                let p = dot(&y, &out[j]);
                y.iter_mut().zip(&out[j]).for_each(|(a, b)| *a -= p * b);
                normalize(&mut y);
            }
            let overlap = dot(&y, &v).abs();
            v = y;
            if iter > 0 && overlap >= 1.0 - 1e-12 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(PdmError::EigenvectorFailure { level });
        }
        out.push(v);
    }
    Ok(out)
}
