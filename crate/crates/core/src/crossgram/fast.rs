//! Fourier samples of Haar expansions through an FFT and a fast Haar synthesis.

use crate::basis::{fourier_frequency, FunctionSystem, SystemKind};
use crate::linalg::LinearOperator;
use crate::{CVec, C64};
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// `A = D F H`: Haar synthesis to cell values, a length-`2^J` DFT, then a per-frequency factor.
#[derive(Clone)]
pub struct FourierHaarOperator {
    level: u32,
    freqs: Vec<i64>,
    diag: Vec<C64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FourierHaarOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierHaarOperator")
            .field("level", &self.level)
            .field("rows", &self.freqs.len())
            .finish()
    }
}

impl FourierHaarOperator {
    /// Sampling rows `r0..=r1` of `fourier`, Haar columns `1..=2^level`.
    pub fn new(fourier: &FunctionSystem, r0: usize, r1: usize, level: u32) -> FourierHaarOperator {
        assert_eq!(fourier.kind, SystemKind::Fourier);
        let n = 1usize << level;
        let dom = fourier.domain;
        let freqs: Vec<i64> = (r0..=r1).map(fourier_frequency).collect();
        let diag = freqs
            .iter()
            .map(|&k| {
                let kf = k as f64;
                let y = PI * kf / n as f64;
                let sinc = if y == 0.0 { 1.0 } else { y.sin() / y };
                let phase = -2.0 * PI * kf * dom.a / dom.length() - y;
                C64::from_polar(sinc / n as f64, phase)
            })
            .collect();
        let mut planner = FftPlanner::new();
        FourierHaarOperator {
            level,
            freqs,
            diag,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    fn width(&self) -> usize {
        1usize << self.level
    }
}

/// Haar coefficients `[c_1, d_{0,0}, d_{1,0}, …]` to the `2^J` cell values.
pub fn haar_synthesis(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    assert!(n.is_power_of_two());
    let mut vals = vec![coeffs[0]];
    while vals.len() < n {
        let width = vals.len();
        let amp = (width as f64).sqrt();
        let mut next = Vec::with_capacity(2 * width);
        for (t, v) in vals.iter().enumerate() {
            let d = coeffs[width + t] * amp;
            next.push(v + d);
            next.push(v - d);
        }
        vals = next;
    }
    vals
}

/// Transpose of [`haar_synthesis`].
pub fn haar_synthesis_adjoint(cells: &[C64]) -> Vec<C64> {
    let n = cells.len();
    assert!(n.is_power_of_two());
    let mut out = vec![C64::new(0.0, 0.0); n];
    let mut w = cells.to_vec();
    while w.len() > 1 {
        let half = w.len() / 2;
        let amp = (half as f64).sqrt();
        let mut coarse = Vec::with_capacity(half);
        for t in 0..half {
            out[half + t] = (w[2 * t] - w[2 * t + 1]) * amp;
            coarse.push(w[2 * t] + w[2 * t + 1]);
        }
        w = coarse;
    }
    out[0] = w[0];
    out
}

impl LinearOperator for FourierHaarOperator {
    fn nrows(&self) -> usize {
        self.freqs.len()
    }

    fn ncols(&self) -> usize {
        self.width()
    }

    fn apply(&self, x: &CVec) -> CVec {
        let n = self.width();
        assert_eq!(x.len(), n);
        let mut cells = haar_synthesis(x.as_slice());
        self.forward.process(&mut cells);
        CVec::from_iterator(
            self.freqs.len(),
            self.freqs
                .iter()
                .zip(&self.diag)
                .map(|(&k, d)| d * cells[k.rem_euclid(n as i64) as usize]),
        )
    }

    fn apply_adjoint(&self, y: &CVec) -> CVec {
        let n = self.width();
        assert_eq!(y.len(), self.freqs.len());
        let mut bins = vec![C64::new(0.0, 0.0); n];
        for ((&k, d), v) in self.freqs.iter().zip(&self.diag).zip(y.iter()) {
            bins[k.rem_euclid(n as i64) as usize] += d.conj() * v;
        }
        self.inverse.process(&mut bins);
        CVec::from_vec(haar_synthesis_adjoint(&bins))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthesis_adjoint_pairing() {
        let x: Vec<C64> = (0..16).map(|i| C64::new(i as f64 * 0.1, 1.0 - i as f64)).collect();
        let y: Vec<C64> = (0..16).map(|i| C64::new((i as f64).cos(), 0.3)).collect();
        let hx = haar_synthesis(&x);
        let hty = haar_synthesis_adjoint(&y);
        let lhs: C64 = hx.iter().zip(&y).map(|(a, b)| a * b.conj()).sum();
        let rhs: C64 = x.iter().zip(&hty).map(|(a, b)| a * b.conj()).sum();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn synthesis_is_orthogonal_up_to_scale() {
        // cell values of an orthonormal expansion carry norm² · n
        let x: Vec<C64> = (0..8).map(|i| C64::new(1.0 / (i as f64 + 1.0), 0.0)).collect();
        let cells = haar_synthesis(&x);
        let e1: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let e2: f64 = cells.iter().map(|v| v.norm_sqr()).sum::<f64>() / 8.0;
        assert!((e1 - e2).abs() < 1e-13);
    }
}
