//! Daubechies filters by spectral factorization and pointwise evaluation of the
//! scaling function and wavelet through dyadic matrix products.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use std::sync::OnceLock;

pub const MAX_VANISHING_MOMENTS: usize = 10;

/// Filters and refinement matrices for one member of the family.
#[derive(Clone, Debug)]
pub struct Daubechies {
    pub p: usize,
    /// Low-pass filter, length `2p`, summing to √2.
    pub h: Vec<f64>,
    /// High-pass filter `g_k = (-1)^k h_{2p-1-k}`.
    pub g: Vec<f64>,
    t0: DMatrix<f64>,
    t1: DMatrix<f64>,
    /// `φ(0), …, φ(2p-2)`.
    v0: DVector<f64>,
}

static CACHE: [OnceLock<Daubechies>; MAX_VANISHING_MOMENTS] =
    [const { OnceLock::new() }; MAX_VANISHING_MOMENTS];

/// Shared, lazily built data for `p` vanishing moments.
pub fn daubechies(p: usize) -> Result<&'static Daubechies> {
    if p == 0 || p > MAX_VANISHING_MOMENTS {
        return Err(Error::InvalidArgument(format!(
            "Daubechies order {p} outside 1..={MAX_VANISHING_MOMENTS}"
        )));
    }
    Ok(CACHE[p - 1].get_or_init(|| Daubechies::build(p)))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn poly_eval(c: &[Complex<f64>], z: Complex<f64>) -> (Complex<f64>, Complex<f64>) {
    // Horner for value and derivative; c ascending.
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

/// Low-pass filter with `p` vanishing moments.
pub fn filter(p: usize) -> Vec<f64> {
    // |m0|² = cos^{2p}(ω/2) P(sin²(ω/2)),  P(y) = Σ C(p-1+k, k) y^k.
    let coeffs: Vec<f64> = (0..p).map(|k| binomial(p - 1 + k, k)).collect();
    let deg = p - 1;
    let mut y_roots: Vec<Complex<f64>> = Vec::with_capacity(deg);
    if deg > 0 {
        let lead = coeffs[deg];
        let comp = DMatrix::from_fn(deg, deg, |i, j| {
            if i == 0 {
                -coeffs[deg - 1 - j] / lead
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let cc: Vec<Complex<f64>> = coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect();
        for mut y in comp.complex_eigenvalues().iter().copied() {
            for _ in 0..50 {
                let (v, d) = poly_eval(&cc, y);
                if d.norm() == 0.0 {
                    break;
                }
                let step = v / d;
                y -= step;
                if step.norm() < 1e-17 * (1.0 + y.norm()) {
                    break;
                }
            }
            y_roots.push(y);
        }
    }
    // y = (2 - z - 1/z)/4  =>  z² - 2(1-2y) z + 1 = 0; keep the root inside the unit circle.
    let mut poly = vec![Complex::new(1.0, 0.0)];
    let mul = |poly: &mut Vec<Complex<f64>>, root: Complex<f64>| {
        // multiply by (z - root), coefficients ascending
        let mut out = vec![Complex::new(0.0, 0.0); poly.len() + 1];
        for (i, &c) in poly.iter().enumerate() {
            out[i + 1] += c;
            out[i] -= c * root;
        }
        *poly = out;
    };
    for _ in 0..p {
        mul(&mut poly, Complex::new(-1.0, 0.0));
    }
    for y in y_roots {
        let b = Complex::new(1.0, 0.0) - y * 2.0;
        let disc = (b * b - 1.0).sqrt();
        let (z1, z2) = (b + disc, b - disc);
        let z = if z1.norm() < z2.norm() { z1 } else { z2 };
        mul(&mut poly, z);
    }
    // Descending powers give the conventional ordering (largest taps first for p = 2).
    let mut h: Vec<f64> = poly.iter().rev().map(|c| c.re).collect();
    let s: f64 = h.iter().sum();
    let scale = std::f64::consts::SQRT_2 / s;
    h.iter_mut().for_each(|v| *v *= scale);
    h
}

impl Daubechies {
    fn build(p: usize) -> Daubechies {
        let h = filter(p);
        let len = h.len();
        let g: Vec<f64> = (0..len)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } * h[len - 1 - k])
            .collect();
        let d = 2 * p - 1;
        let hk = |k: isize| -> f64 {
            if k >= 0 && (k as usize) < len {
                h[k as usize]
            } else {
                0.0
            }
        };
        let s2 = std::f64::consts::SQRT_2;
        let t0 = DMatrix::from_fn(d, d, |i, j| s2 * hk(2 * i as isize - j as isize));
        let t1 = DMatrix::from_fn(d, d, |i, j| s2 * hk(2 * i as isize - j as isize + 1));
        // v0 solves (T0 - I) v = 0 with Σ v = 1.
        let mut m = &t0 - DMatrix::identity(d, d);
        for j in 0..d {
            m[(d - 1, j)] = 1.0;
        }
        let mut rhs = DVector::zeros(d);
        rhs[d - 1] = 1.0;
        let v0 = m.lu().solve(&rhs).expect("refinement eigenvector exists");
        Daubechies {
            p,
            h,
            g,
            t0,
            t1,
            v0,
        }
    }

    /// Support length of φ and ψ: both live on `[0, 2p-1]`.
    pub fn support(&self) -> usize {
        2 * self.p - 1
    }

    /// `[φ(x), φ(x+1), …, φ(x+2p-2)]` for `x ∈ [0, 1)`.
    pub fn phi_vector(&self, x: f64) -> DVector<f64> {
        debug_assert!((0.0..1.0).contains(&x));
        let mut bits = Vec::with_capacity(64);
        let mut f = x;
        while f > 0.0 && bits.len() < 64 {
            f *= 2.0;
            if f >= 1.0 {
                bits.push(true);
                f -= 1.0;
            } else {
                bits.push(false);
            }
        }
        let mut w = self.v0.clone();
        for &b in bits.iter().rev() {
            w = if b { &self.t1 * &w } else { &self.t0 * &w };
        }
        w
    }

    /// Scaling function on the real line.
    pub fn phi(&self, x: f64) -> f64 {
        let d = self.support();
        if !(0.0..d as f64).contains(&x) {
            return 0.0;
        }
        let n = x.floor();
        let v = self.phi_vector(x - n);
        v[n as usize]
    }

    /// Mother wavelet on the real line, `ψ(x) = √2 Σ g_k φ(2x - k)`.
    pub fn psi(&self, x: f64) -> f64 {
        let d = self.support();
        if !(0.0..d as f64).contains(&x) {
            return 0.0;
        }
        let z = 2.0 * x;
        let n = z.floor();
        let v = self.phi_vector(z - n);
        self.psi_from_vector(&v, n as isize)
    }

    /// `ψ(y)` where `2y = n + f` and `v = phi_vector(f)`.
    pub(crate) fn psi_from_vector(&self, v: &DVector<f64>, n: isize) -> f64 {
        let len = self.g.len() as isize;
        let mut acc = 0.0;
        for i in 0..v.len() as isize {
            let k = n - i;
            if (0..len).contains(&k) {
                acc += self.g[k as usize] * v[i as usize];
            }
        }
        std::f64::consts::SQRT_2 * acc
    }

    /// Low-pass symbol `H(ξ) = 2^{-1/2} Σ h_n e^{-iξn}`, with `H(0) = 1`.
    pub fn low_symbol(&self, xi: f64) -> Complex<f64> {
        self.h
            .iter()
            .enumerate()
            .map(|(n, &c)| Complex::from_polar(c, -xi * n as f64))
            .sum::<Complex<f64>>()
            / std::f64::consts::SQRT_2
    }

    /// `Φ̂(ξ) = ∫ φ(x) e^{-iξx} dx` by the truncated infinite product.
    pub fn phi_hat(&self, xi: f64) -> Complex<f64> {
        let terms = (xi.abs().max(1.0).log2().ceil() as usize) + 56;
        let mut acc = Complex::new(1.0, 0.0);
        let mut w = xi;
        for _ in 0..terms {
            w *= 0.5;
            acc *= self.low_symbol(w);
        }
        acc
    }

    /// `Ψ̂(ξ) = 2^{-1/2} Σ g_n e^{-iξn/2} Φ̂(ξ/2)`.
    pub fn psi_hat(&self, xi: f64) -> Complex<f64> {
        let g: Complex<f64> = self
            .g
            .iter()
            .enumerate()
            .map(|(n, &c)| Complex::from_polar(c, -xi * n as f64 / 2.0))
            .sum();
        g / std::f64::consts::SQRT_2 * self.phi_hat(xi / 2.0)
    }
}
