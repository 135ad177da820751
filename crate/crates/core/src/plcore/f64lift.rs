use super::PLLift;

/// Floating-point copy of a lift for fast approximate evaluation.
#[derive(Debug, Clone)]
pub struct LiftF64 {
    degree: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl LiftF64 {
    pub fn from_lift(m: &PLLift) -> Self {
        let (xs, ys) = m.vertices().iter().map(|(x, y)| (x.to_f64(), y.to_f64())).unzip();
        LiftF64 { degree: m.degree() as f64, xs, ys }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = x.floor();
        let u = x - k;
        let i = self.xs.partition_point(|&v| v <= u).clamp(1, self.xs.len() - 1);
        let (x0, x1, y0, y1) = (self.xs[i - 1], self.xs[i], self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (u - x0) / (x1 - x0) + k * self.degree
    }

    pub fn eval_mod1(&self, x: f64) -> f64 {
        self.eval(x).rem_euclid(1.0)
    }
}
