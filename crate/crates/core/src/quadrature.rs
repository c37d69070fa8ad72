//! Gauss–Legendre nodes and a product rule over the unit hemisphere.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Product rule over the hemisphere z ≥ 0: Gauss–Legendre in the polar angle
/// (0 to π/2 from the +z normal) and the periodic trapezoid rule in azimuth.
#[derive(Debug, Clone)]
pub struct HemisphereRule {
    /// (unit direction, weight including sin θ dθ dφ)
    points: Vec<([f64; 3], f64)>,
}

impl HemisphereRule {
    pub fn new(polar_nodes: usize, azimuth_nodes: usize) -> Self {
        assert!(azimuth_nodes > 0);
        let (x, w) = gauss_legendre(polar_nodes);
        let half = PI / 4.0;
        let dphi = 2.0 * PI / azimuth_nodes as f64;
        let mut points = Vec::with_capacity(polar_nodes * azimuth_nodes);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = half * (xi + 1.0);
            let (st, ct) = theta.sin_cos();
            let weight = wi * half * st * dphi;
            for k in 0..azimuth_nodes {
                let (sp, cp) = (dphi * (k as f64 + 0.5)).sin_cos();
                points.push(([st * cp, st * sp, ct], weight));
            }
        }
        HemisphereRule { points }
    }

    /// ∫ f dΩ over the hemisphere.
    pub fn integrate(&self, f: impl Fn([f64; 3]) -> f64) -> f64 {
        self.points.iter().map(|&(d, w)| w * f(d)).sum()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
