//! Small dense least-squares solver (Householder QR with column scaling).

use crate::scalar::Real;

/// Least-squares fit `y ≈ Σ_j c_j · columns[j]`.
///
/// Returns `None` when the design matrix is rank deficient.
pub fn least_squares<S: Real>(columns: &[Vec<S>], y: &[S]) -> Option<Vec<S>> {
    let m = y.len();
    let n = columns.len();
    if n == 0 || m < n || columns.iter().any(|c| c.len() != m) {
        return None;
    }
    // column-major copy, scaled to unit norm for conditioning
    let mut a: Vec<Vec<S>> = columns.to_vec();
    let mut scale = vec![S::one(); n];
    for (j, col) in a.iter_mut().enumerate() {
        let norm = col.iter().fold(S::zero(), |acc, &v| acc.hypot(v));
        if !(norm > S::zero()) || !norm.is_finite() {
            return None;
        }
        scale[j] = norm;
        for v in col.iter_mut() {
            *v = *v / norm;
        }
    }
    let mut b = y.to_vec();
    let mut diag = vec![S::zero(); n];
    for k in 0..n {
        let norm = a[k][k..].iter().fold(S::zero(), |acc, &v| acc.hypot(v));
        if norm <= S::epsilon() * S::from(16.0).unwrap() {
            return None;
        }
        let alpha = if a[k][k] > S::zero() { -norm } else { norm };
        let mut v: Vec<S> = a[k][k..].to_vec();
        v[0] = v[0] - alpha;
        let vnorm2 = v.iter().fold(S::zero(), |acc, &x| acc + x * x);
        diag[k] = alpha;
        if vnorm2 > S::zero() {
            for col in a.iter_mut().skip(k + 1) {
                let dot = v
                    .iter()
                    .zip(col[k..].iter())
                    .fold(S::zero(), |acc, (&p, &q)| acc + p * q);
                let f = (dot + dot) / vnorm2;
                for (c, &p) in col[k..].iter_mut().zip(v.iter()) {
                    *c = *c - f * p;
                }
            }
            let dot = v
                .iter()
                .zip(b[k..].iter())
                .fold(S::zero(), |acc, (&p, &q)| acc + p * q);
            let f = (dot + dot) / vnorm2;
            for (c, &p) in b[k..].iter_mut().zip(v.iter()) {
                *c = *c - f * p;
            }
        }
    }
    // back substitution on R (upper triangle stored above the diagonal, diag separately)
    let mut x = vec![S::zero(); n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in (k + 1)..n {
            acc = acc - a[j][k] * x[j];
        }
        x[k] = acc / diag[k];
    }
    for (xj, s) in x.iter_mut().zip(scale.iter()) {
        *xj = *xj / *s;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_affine_model() {
        let t: Vec<f64> = (1..=20).map(|k| k as f64).collect();
        let ones = vec![1.0; t.len()];
        let inv: Vec<f64> = t.iter().map(|v| 1.0 / v).collect();
        let y: Vec<f64> = inv.iter().map(|v| 2.5 - 0.75 * v).collect();
        let c = least_squares(&[ones, inv], &y).unwrap();
        assert!((c[0] - 2.5).abs() < 1e-13);
        assert!((c[1] + 0.75).abs() < 1e-13);
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let a = vec![1.0_f64, 2.0, 3.0];
        assert!(least_squares(&[a.clone(), a], &[1.0, 2.0, 3.0]).is_none());
    }

    #[test]
    fn overdetermined_noise_gives_mean() {
        let ones = vec![1.0_f64; 4];
        let c = least_squares(&[ones], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((c[0] - 2.5).abs() < 1e-14);
    }
}
