//! Orthonormal function systems on a closed interval.
//!
//! Elements are numbered from 1. Fourier frequencies run 0, 1, −1, 2, −2, …;
//! wavelet systems list the constant first and then wavelets scale by scale;
//! Legendre index `j` is degree `j − 1`.

pub mod daubechies;
pub mod legendre;
pub mod quadrature;

use crate::error::{Error, Result};
use crate::{CVec, C64};
use std::f64::consts::PI;
use std::fmt;

pub use quadrature::{gauss_legendre, Grid};

/// Closed interval `[a, b]` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub const UNIT: Interval = Interval { a: 0.0, b: 1.0 };
    pub const SYMMETRIC: Interval = Interval { a: -1.0, b: 1.0 };

    pub fn new(a: f64, b: f64) -> Interval {
        assert!(a < b && a.is_finite() && b.is_finite(), "bad interval [{a}, {b}]");
        Interval { a, b }
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// Map to the unit interval.
    pub fn to_unit(&self, x: f64) -> f64 {
        (x - self.a) / self.length()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Fourier,
    Haar,
    /// Periodized Daubechies wavelets with `p` vanishing moments.
    DaubechiesPeriodic(u8),
    Legendre,
}

/// Natural label of the `j`-th element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Frequency(i64),
    Scaling,
    Wavelet { scale: u32, shift: u64 },
    Degree(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FunctionSystem {
    pub kind: SystemKind,
    pub domain: Interval,
}

/// Frequency of the `j`-th Fourier element.
pub fn fourier_frequency(j: usize) -> i64 {
    let j = j as i64;
    if j % 2 == 0 {
        j / 2
    } else {
        -(j - 1) / 2
    }
}

/// Inverse of [`fourier_frequency`].
pub fn fourier_index(k: i64) -> usize {
    if k > 0 {
        (2 * k) as usize
    } else {
        (1 - 2 * k) as usize
    }
}

/// Scale and shift of wavelet index `j ≥ 2`.
pub fn wavelet_label(j: usize) -> (u32, u64) {
    let n = (j - 1) as u64;
    let s = 63 - n.leading_zeros();
    (s, n - (1u64 << s))
}

impl FunctionSystem {
    pub fn new(kind: SystemKind, domain: Interval) -> Result<FunctionSystem> {
        if let SystemKind::DaubechiesPeriodic(p) = kind {
            daubechies::daubechies(p as usize)?;
        }
        Ok(FunctionSystem { kind, domain })
    }

    pub fn fourier(domain: Interval) -> FunctionSystem {
        FunctionSystem {
            kind: SystemKind::Fourier,
            domain,
        }
    }

    pub fn haar(domain: Interval) -> FunctionSystem {
        FunctionSystem {
            kind: SystemKind::Haar,
            domain,
        }
    }

    pub fn legendre(domain: Interval) -> FunctionSystem {
        FunctionSystem {
            kind: SystemKind::Legendre,
            domain,
        }
    }

    pub fn daubechies(p: u8, domain: Interval) -> Result<FunctionSystem> {
        FunctionSystem::new(SystemKind::DaubechiesPeriodic(p), domain)
    }

    pub fn is_wavelet(&self) -> bool {
        matches!(
            self.kind,
            SystemKind::Haar | SystemKind::DaubechiesPeriodic(_)
        )
    }

    pub fn label(&self, j: usize) -> Label {
        assert!(j >= 1, "indices start at 1");
        match self.kind {
            SystemKind::Fourier => Label::Frequency(fourier_frequency(j)),
            SystemKind::Legendre => Label::Degree(j - 1),
            SystemKind::Haar | SystemKind::DaubechiesPeriodic(_) => {
                if j == 1 {
                    Label::Scaling
                } else {
                    let (scale, shift) = wavelet_label(j);
                    Label::Wavelet { scale, shift }
                }
            }
        }
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        match (self.kind, label) {
            (SystemKind::Fourier, Label::Frequency(k)) => Some(fourier_index(k)),
            (SystemKind::Legendre, Label::Degree(n)) => Some(n + 1),
            (SystemKind::Haar | SystemKind::DaubechiesPeriodic(_), Label::Scaling) => Some(1),
            (
                SystemKind::Haar | SystemKind::DaubechiesPeriodic(_),
                Label::Wavelet { scale, shift },
            ) if shift < (1u64 << scale) => Some((1usize << scale) + shift as usize + 1),
            _ => None,
        }
    }

    /// Finest dyadic level at which elements `1..=j` have breakpoints.
    pub fn breakpoint_level(&self, j: usize) -> u32 {
        if self.is_wavelet() && j >= 2 {
            wavelet_label(j).0 + 1
        } else {
            0
        }
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 {
            return Err(Error::UnsupportedIndex {
                system: self.to_string(),
                index: j,
                reason: "indices start at 1".into(),
            });
        }
        if self.kind == SystemKind::Legendre && j > legendre::MAX_DEGREE + 1 {
            return Err(Error::UnsupportedIndex {
                system: self.to_string(),
                index: j,
                reason: format!("degree beyond {}", legendre::MAX_DEGREE),
            });
        }
        if self.is_wavelet() && wavelet_label(j.max(2)).0 > 40 {
            return Err(Error::UnsupportedIndex {
                system: self.to_string(),
                index: j,
                reason: "scale beyond 40".into(),
            });
        }
        Ok(())
    }

    /// Values of elements `first..first+count` at the points `xs`, one inner vector per element.
    pub fn eval_block(&self, first: usize, count: usize, xs: &[f64]) -> Result<Vec<Vec<C64>>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        self.check_index(first)?;
        self.check_index(first + count - 1)?;
        for &x in xs {
            if !self.domain.contains(x) {
                return Err(Error::InvalidArgument(format!(
                    "point {x} outside [{}, {}]",
                    self.domain.a, self.domain.b
                )));
            }
        }
        let len = self.domain.length();
        let norm = 1.0 / len.sqrt();
        let mut out = vec![vec![C64::new(0.0, 0.0); xs.len()]; count];
        match self.kind {
            SystemKind::Fourier => {
                for (c, col) in out.iter_mut().enumerate() {
                    let k = fourier_frequency(first + c) as f64;
                    for (v, &x) in col.iter_mut().zip(xs) {
                        *v = C64::from_polar(norm, 2.0 * PI * k * x / len);
                    }
                }
            }
            SystemKind::Legendre => {
                let last = first + count - 1;
                let mut buf = vec![0.0; last];
                let scale = (2.0 / len).sqrt();
                for (i, &x) in xs.iter().enumerate() {
                    let t = (2.0 * self.domain.to_unit(x) - 1.0).clamp(-1.0, 1.0);
                    legendre::orthonormal_values(t, &mut buf);
                    for (c, col) in out.iter_mut().enumerate() {
                        col[i] = C64::new(scale * buf[first + c - 1], 0.0);
                    }
                }
            }
            SystemKind::Haar => {
                for (c, col) in out.iter_mut().enumerate() {
                    let j = first + c;
                    for (v, &x) in col.iter_mut().zip(xs) {
                        *v = C64::new(norm * haar_unit(j, self.domain.to_unit(x)), 0.0);
                    }
                }
            }
            SystemKind::DaubechiesPeriodic(p) => {
                let d = daubechies::daubechies(p as usize)?;
                for (i, &x) in xs.iter().enumerate() {
                    let u = self.domain.to_unit(x);
                    let mut j = first;
                    while j < first + count {
                        if j == 1 {
                            out[0][i] = C64::new(norm, 0.0);
                            j += 1;
                            continue;
                        }
                        let (s, _) = wavelet_label(j);
                        let level_end = ((1usize << (s + 1)) + 1).min(first + count);
                        let vals = periodic_level(d, s, u);
                        for jj in j..level_end {
                            let t = wavelet_label(jj).1 as usize;
                            out[jj - first][i] = C64::new(norm * vals[t], 0.0);
                        }
                        j = level_end;
                    }
                }
            }
        }
        Ok(out)
    }

    fn name(&self) -> String {
        match self.kind {
            SystemKind::Fourier => "fourier".into(),
            SystemKind::Haar => "haar".into(),
            SystemKind::DaubechiesPeriodic(p) => format!("db{p}"),
            SystemKind::Legendre => "legendre".into(),
        }
    }
}

impl fmt::Display for FunctionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}, {}]", self.name(), self.domain.a, self.domain.b)
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<SystemKind> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "fourier" => Ok(SystemKind::Fourier),
            "haar" => Ok(SystemKind::Haar),
            "legendre" => Ok(SystemKind::Legendre),
            _ => {
                if let Some(p) = lower.strip_prefix("db") {
                    let p: u8 = p
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("unknown system '{s}'")))?;
                    daubechies::daubechies(p as usize)?;
                    Ok(SystemKind::DaubechiesPeriodic(p))
                } else {
                    Err(Error::InvalidArgument(format!("unknown system '{s}'")))
                }
            }
        }
    }
}

/// Haar element `j` on the unit interval, cells half-open on the right.
fn haar_unit(j: usize, u: f64) -> f64 {
    if j == 1 {
        return 1.0;
    }
    let (s, t) = wavelet_label(j);
    let scale = (1u64 << s) as f64;
    let y = scale * u - t as f64;
    let amp = scale.sqrt();
    if (0.0..0.5).contains(&y) {
        amp
    } else if (0.5..1.0).contains(&y) {
        -amp
    } else if u == 1.0 && y == 1.0 {
        // close the last cell at the right end of the interval
        -amp
    } else {
        0.0
    }
}

/// All periodized wavelets of level `s` at `u ∈ [0, 1]`, indexed by shift.
fn periodic_level(d: &daubechies::Daubechies, s: u32, u: f64) -> Vec<f64> {
    let n_shift = 1usize << s;
    let two_s1 = (1u64 << (s + 1)) as f64;
    let u = if u >= 1.0 { 0.0 } else { u };
    let z = two_s1 * u;
    let n0 = z.floor();
    let v = d.phi_vector(z - n0);
    let n0 = n0 as isize;
    let amp = ((1u64 << s) as f64).sqrt();
    let supp = d.support() as isize;
    let period = 2 * n_shift as isize;
    let mut out = vec![0.0; n_shift];
    for (t, o) in out.iter_mut().enumerate() {
        // ψ(2^s(u + m) − t) with 2y = n0 + period·m − 2t + frac
        let base = n0 - 2 * t as isize;
        let mut acc = 0.0;
        let m_lo = (-base).div_euclid(period) - 1;
        let m_hi = (2 * supp - base).div_euclid(period) + 1;
        for m in m_lo..=m_hi {
            let n = base + period * m;
            if n >= 0 && n < 2 * supp {
                acc += d.psi_from_vector(&v, n);
            }
        }
        *o = amp * acc;
    }
    out
}

/// Values of element `j` on the grid nodes.
pub fn eval_element(system: &FunctionSystem, j: usize, grid: &Grid) -> Result<Vec<C64>> {
    Ok(system
        .eval_block(j, 1, &grid.nodes)?
        .pop()
        .expect("one element"))
}

/// `⟨f, e_j⟩` by quadrature, conjugating the system element.
pub fn inner_product(f: &[C64], system: &FunctionSystem, j: usize, grid: &Grid) -> Result<C64> {
    if f.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: f.len(),
        });
    }
    let e = eval_element(system, j, grid)?;
    Ok(f
        .iter()
        .zip(&e)
        .zip(&grid.weights)
        .map(|((a, b), w)| a * b.conj() * *w)
        .sum())
}

/// All inner products `⟨f, e_j⟩` for `j = first..first+count`.
pub fn analyze(
    f: &[C64],
    system: &FunctionSystem,
    first: usize,
    count: usize,
    grid: &Grid,
) -> Result<CVec> {
    if f.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: f.len(),
        });
    }
    let block = system.eval_block(first, count, &grid.nodes)?;
    Ok(CVec::from_iterator(
        count,
        block.iter().map(|e| {
            f.iter()
                .zip(e)
                .zip(&grid.weights)
                .map(|((a, b), w)| a * b.conj() * *w)
                .sum::<C64>()
        }),
    ))
}

/// Finite coefficient vector in a system, covering indices `offset..offset+len`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVec {
    pub values: CVec,
    pub system: FunctionSystem,
    pub offset: usize,
}

impl CoeffVec {
    pub fn new(values: CVec, system: FunctionSystem, offset: usize) -> Result<CoeffVec> {
        if offset == 0 {
            return Err(Error::InvalidArgument("offset is 1-based".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(CoeffVec {
            values,
            system,
            offset,
        })
    }

    /// Coefficients for indices `1..=len`.
    pub fn leading(values: CVec, system: FunctionSystem) -> Result<CoeffVec> {
        CoeffVec::new(values, system, 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.norm()
    }
}

/// `Σ β_j e_j` evaluated on the grid.
pub fn synthesize(coeffs: &CoeffVec, grid: &Grid) -> Result<Vec<C64>> {
    let mut out = vec![C64::new(0.0, 0.0); grid.len()];
    if coeffs.is_empty() {
        return Ok(out);
    }
    let block = coeffs
        .system
        .eval_block(coeffs.offset, coeffs.len(), &grid.nodes)?;
    for (c, e) in coeffs.values.iter().zip(&block) {
        if *c == C64::new(0.0, 0.0) {
            continue;
        }
        for (o, v) in out.iter_mut().zip(e) {
            *o += c * v;
        }
    }
    Ok(out)
}
