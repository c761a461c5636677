/// Spherical Bessel functions `j_0(x), …, j_nmax(x)` for `x ≥ 0`.
///
/// Miller's backward recurrence, normalized with `Σ (2n+1) j_n(x)² = 1`.
pub fn spherical_bessel_all(nmax: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0 && x.is_finite(), "x must be finite and nonnegative");
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = nmax as f64;
    let reach = top.max(x);
    let start = (reach + 30.0 + 4.0 * reach.sqrt()).ceil() as usize;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    for n in (1..=start).rev() {
        let next = (2 * n + 1) as f64 / x * vals[n] - vals[n + 1];
        vals[n - 1] = next;
        if next.abs() > 1e250 {
            for v in vals[n - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    vals.iter_mut().for_each(|v| *v /= peak);
    let norm: f64 = vals
        .iter()
        .enumerate()
        .map(|(n, v)| (2 * n + 1) as f64 * v * v)
        .sum::<f64>()
        .sqrt();
    // Fix the overall sign against whichever of j0, j1 is larger in size.
    let j0 = x.sin() / x;
    let j1 = x.sin() / (x * x) - x.cos() / x;
    let sign = if j0.abs() >= j1.abs() {
        j0.signum() * vals[0].signum()
    } else {
        j1.signum() * vals[1].signum()
    };
    for (o, v) in out.iter_mut().zip(&vals) {
        *o = sign * v / norm;
    }
    out
}
