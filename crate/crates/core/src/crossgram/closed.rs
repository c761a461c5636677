//! Closed-form cross-Gramian entries between Fourier sampling and the other systems.

use super::bessel::spherical_bessel_all;
use crate::basis::daubechies::daubechies;
use crate::basis::{fourier_frequency, wavelet_label, FunctionSystem, SystemKind};
use crate::C64;
use std::f64::consts::PI;

fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-8 {
        1.0 - y * y / 6.0
    } else {
        y.sin() / y
    }
}

/// `∫_α^β e^{-iωu} du`.
fn exp_integral(omega: f64, alpha: f64, beta: f64) -> C64 {
    let h = beta - alpha;
    C64::from_polar(h * sinc(omega * h / 2.0), -omega * (alpha + beta) / 2.0)
}

/// `∫_0^1 h_j(u) e^{-2πiku} du` for the Haar system on the unit interval.
pub fn haar_fourier_unit(j: usize, k: i64) -> C64 {
    if j == 1 {
        return if k == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        };
    }
    let (s, t) = wavelet_label(j);
    let scale = (1u64 << s) as f64;
    let a = t as f64 / scale;
    let m = (t as f64 + 0.5) / scale;
    let b = (t as f64 + 1.0) / scale;
    let w = 2.0 * PI * k as f64;
    (exp_integral(w, a, m) - exp_integral(w, m, b)) * scale.sqrt()
}

/// `∫_0^1 ψ^per_j(u) e^{-2πiku} du` for periodized Daubechies wavelets.
pub fn daubechies_fourier_unit(p: usize, j: usize, k: i64) -> C64 {
    if j == 1 {
        return if k == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        };
    }
    let d = daubechies(p).expect("validated order");
    let (s, t) = wavelet_label(j);
    let scale = (1u64 << s) as f64;
    let xi = 2.0 * PI * k as f64 / scale;
    let phase = C64::from_polar(1.0 / scale.sqrt(), -xi * t as f64);
    phase * d.psi_hat(xi)
}

/// Legendre row of the Fourier–Legendre section: entries for degrees `0..count` at frequency `k`
/// on the symmetric reference interval.
pub fn legendre_fourier_reference(k: i64, count: usize) -> Vec<C64> {
    let x = PI * (k.unsigned_abs() as f64);
    let j = spherical_bessel_all(count.saturating_sub(1), x);
    let mut out = Vec::with_capacity(count);
    for (n, jn) in j.iter().enumerate().take(count) {
        let mut v = (2.0 * n as f64 + 1.0).sqrt() * jn;
        if k < 0 && n % 2 == 1 {
            v = -v;
        }
        // (-i)^n
        let rot = match n % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, -1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 1.0),
        };
        out.push(rot * v);
    }
    out
}

/// Whether a closed form is available for the (sampling, reconstruction) pair.
pub fn has_closed_form(samp: &FunctionSystem, recon: &FunctionSystem) -> bool {
    if samp.domain != recon.domain {
        return false;
    }
    if samp.kind == recon.kind {
        return true;
    }
    matches!(
        (samp.kind, recon.kind),
        (SystemKind::Fourier, _) | (_, SystemKind::Fourier)
    )
}

/// Row of closed-form entries `⟨φ_col, ψ_row⟩` for `cols = c0..c0+count`.
/// Caller guarantees [`has_closed_form`].
pub fn closed_row(
    samp: &FunctionSystem,
    recon: &FunctionSystem,
    row: usize,
    c0: usize,
    count: usize,
) -> Vec<C64> {
    if samp.kind == recon.kind {
        return (c0..c0 + count)
            .map(|c| {
                if c == row {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
    }
    match (samp.kind, recon.kind) {
        (SystemKind::Fourier, other) => fourier_row(samp, other, row, c0, count),
        (other, SystemKind::Fourier) => (c0..c0 + count)
            .map(|c| fourier_row(recon, other, c, row, 1)[0].conj())
            .collect(),
        _ => unreachable!("no closed form"),
    }
}

fn fourier_row(
    fourier: &FunctionSystem,
    other: SystemKind,
    row: usize,
    c0: usize,
    count: usize,
) -> Vec<C64> {
    let k = fourier_frequency(row);
    let dom = fourier.domain;
    let shift = C64::from_polar(1.0, -2.0 * PI * k as f64 * dom.a / dom.length());
    match other {
        SystemKind::Haar => (c0..c0 + count)
            .map(|j| shift * haar_fourier_unit(j, k))
            .collect(),
        SystemKind::DaubechiesPeriodic(p) => (c0..c0 + count)
            .map(|j| shift * daubechies_fourier_unit(p as usize, j, k))
            .collect(),
        SystemKind::Legendre => {
            let all = legendre_fourier_reference(k, c0 + count - 1);
            // phase e^{-iπk(1 + 2a/L)}
            let ph = C64::from_polar(1.0, -PI * k as f64 * (1.0 + 2.0 * dom.a / dom.length()));
            all[c0 - 1..].iter().map(|v| v * ph).collect()
        }
        SystemKind::Fourier => unreachable!("handled as identity"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_zero_mean() {
        assert_eq!(haar_fourier_unit(2, 0), C64::new(0.0, 0.0));
        assert_eq!(haar_fourier_unit(7, 0).norm(), 0.0);
    }

    #[test]
    fn first_daubechies_is_haar() {
        for j in 1..40 {
            for k in -20..20 {
                let a = haar_fourier_unit(j, k);
                let b = daubechies_fourier_unit(1, j, k);
                assert!((a - b).norm() < 1e-13, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn legendre_constant_column() {
        // degree 0 has only the zero-frequency component
        let r = legendre_fourier_reference(0, 3);
        assert!((r[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(r[1].norm() < 1e-15);
        let r = legendre_fourier_reference(3, 1);
        assert!(r[0].norm() < 1e-15);
    }
}
