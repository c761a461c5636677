use super::Interval;

/// Gauss–Legendre nodes and weights on [-1, 1], nodes increasing.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Quadrature rule on an interval: composite Gauss–Legendre over equal panels.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub domain: Interval,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Gauss points per panel.
    pub order: usize,
}

impl Grid {
    /// `panels` equal panels with `order` Gauss points each.
    pub fn composite(domain: Interval, panels: usize, order: usize) -> Grid {
        let (x, w) = gauss_legendre(order);
        let h = domain.length() / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let left = domain.a + h * p as f64;
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(left + 0.5 * h * (xi + 1.0));
                weights.push(0.5 * h * wi);
            }
        }
        Grid {
            domain,
            nodes,
            weights,
            order,
        }
    }

    /// `2^level` panels, so every dyadic breakpoint down to that level is a panel edge.
    pub fn dyadic(domain: Interval, level: u32, order: usize) -> Grid {
        Grid::composite(domain, 1usize << level, order)
    }

    pub fn panels(&self) -> usize {
        self.nodes.len() / self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Quadrature L² norm of grid samples.
    pub fn l2_norm<T: Copy + Into<num_complex::Complex<f64>>>(&self, f: &[T]) -> f64 {
        f.iter()
            .zip(&self.weights)
            .map(|(v, w)| (*v).into().norm_sqr() * w)
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_rule() {
        let (x, w) = gauss_legendre(5);
        let x3 = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
        assert!((x[3] - x3).abs() < 1e-15);
        assert!((w[2] - 128.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1usize, 2, 7, 20, 40] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn weights_sum_to_length() {
        let g = Grid::composite(Interval::new(-1.0, 2.5), 13, 9);
        let s: f64 = g.weights.iter().sum();
        assert!((s - 3.5).abs() < 1e-12);
        assert!(g.nodes.windows(2).all(|p| p[0] < p[1]));
    }
}
