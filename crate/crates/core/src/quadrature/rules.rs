//! Interior-node panel rules on `[-1, 1]`.

use crate::scalar::Scalar;

/// Nodes and weights of a panel rule on `[-1, 1]`. No node sits on an endpoint.
#[derive(Clone, Debug)]
pub struct Rule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> Rule<T> {
    /// Integrate `f` over `[a, b]`.
    #[inline]
    pub fn apply<V, F>(&self, a: T, b: T, f: &F) -> V
    where
        V: crate::scalar::QuadValue<T>,
        F: Fn(T) -> V + ?Sized,
    {
        let half = (b - a) * T::half();
        let mid = (a + b) * T::half();
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * *x) * *w;
        }
        acc * half
    }

    fn from_f64(nodes: Vec<f64>, weights: Vec<f64>) -> Self {
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }
}

/// Gauss-Legendre rule with `n` points (Newton iteration on `P_n`).
pub fn gauss_legendre<T: Scalar>(n: usize) -> Rule<T> {
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule::from_f64(nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Open Clenshaw-Curtis rule (Fejer's first rule) on Chebyshev points of the
/// first kind, so that no node lies on the panel ends.
pub fn clenshaw_curtis_open<T: Scalar>(n: usize) -> Rule<T> {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 1..=n {
        let theta = (2 * k - 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
        let mut s = 0.0;
        for j in 1..=n / 2 {
            s += (2.0 * j as f64 * theta).cos() / (4.0 * (j * j) as f64 - 1.0);
        }
        nodes.push(-theta.cos());
        weights.push(2.0 / n as f64 * (1.0 - 2.0 * s));
    }
    Rule::from_f64(nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre::<f64>(16);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..32 {
            let got: f64 = rule.apply(0.0, 1.0, &|x: f64| x.powi(deg));
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((got - exact).abs() < 1e-14, "deg {deg}: {got} vs {exact}");
        }
    }

    #[test]
    fn fejer_rule_is_interpolatory() {
        let rule = clenshaw_curtis_open::<f64>(16);
        for deg in 0..16 {
            let got: f64 = rule.apply(-1.0, 1.0, &|x: f64| x.powi(deg));
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            assert!((got - exact).abs() < 1e-13, "deg {deg}: {got} vs {exact}");
        }
        assert!(rule.nodes.iter().all(|x| x.abs() < 1.0));
    }
}
