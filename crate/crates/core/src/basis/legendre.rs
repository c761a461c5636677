/// Largest degree accepted by the evaluator.
pub const MAX_DEGREE: usize = 20_000;

/// Orthonormal Legendre values `q_0(t), …, q_{n-1}(t)` on `[-1, 1]`, written to `out`.
pub fn orthonormal_values(t: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = std::f64::consts::FRAC_1_SQRT_2;
    if n == 1 {
        return;
    }
    out[1] = 1.5f64.sqrt() * t;
    for k in 1..n - 1 {
        let kf = k as f64;
        let a = ((2.0 * kf + 3.0) * (2.0 * kf + 1.0)).sqrt() / (kf + 1.0);
        let b = kf / (kf + 1.0) * ((2.0 * kf + 3.0) / (2.0 * kf - 1.0)).sqrt();
        out[k + 1] = a * t * out[k] - b * out[k - 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees_match_explicit_polynomials() {
        let mut v = [0.0; 4];
        for t in [-0.9, -0.2, 0.0, 0.4, 1.0] {
            orthonormal_values(t, &mut v);
            let p2 = 0.5 * (3.0 * t * t - 1.0);
            let p3 = 0.5 * (5.0 * t * t * t - 3.0 * t);
            assert!((v[2] - (2.5f64).sqrt() * p2).abs() < 1e-14);
            assert!((v[3] - (3.5f64).sqrt() * p3).abs() < 1e-14);
        }
    }
}
