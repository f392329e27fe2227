//! Gauss–Hermite and trapezoidal quadrature.

use std::f64::consts::PI;

/// Gauss–Hermite rule for the weight `e^{-x²}` on the real line.
///
/// Nodes come from Newton iteration on the orthonormal Hermite functions
/// (Gaussian carried inside the recurrence), so the rule stays finite for a
/// few hundred nodes.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `w_i·e^{x_i²}`, for integrands that already contain their Gaussian.
    scaled_weights: Vec<f64>,
}

/// Upper bound on the node count; beyond this the outer Hermite functions underflow.
pub const MAX_NODES: usize = 600;

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!((1..=MAX_NODES).contains(&n), "node count {n} outside 1..={MAX_NODES}");
        let nf = n as f64;
        // Positive roots of ψ_n are bracketed by sign changes on a grid finer
        // than the smallest root spacing, then polished by safeguarded Newton.
        let upper = (2.0 * nf + 1.0).sqrt() + 1.0;
        let step = 0.1 * PI / (2.0 * nf + 1.0).sqrt();
        let mut positive = Vec::with_capacity(n / 2);
        let mut scaled_positive = Vec::with_capacity(n / 2);
        let mut lo = if n % 2 == 1 { 0.5 * step } else { 0.0 };
        let mut f_lo = hermite_pair(n, lo).0;
        while positive.len() < n / 2 && lo < upper {
            let hi = lo + step;
            let f_hi = hermite_pair(n, hi).0;
            if f_lo == 0.0 || f_lo.signum() != f_hi.signum() {
                let root = polish(n, lo, hi);
                let deriv = hermite_derivative(n, root);
                positive.push(root);
                scaled_positive.push(2.0 / (deriv * deriv));
            }
            lo = hi;
            f_lo = f_hi;
        }
        assert_eq!(positive.len(), n / 2, "lost Gauss-Hermite roots for n = {n}");
        let mut nodes: Vec<f64> = positive.iter().rev().map(|x| -x).collect();
        let mut scaled: Vec<f64> = scaled_positive.iter().rev().copied().collect();
        if n % 2 == 1 {
            let deriv = hermite_derivative(n, 0.0);
            nodes.push(0.0);
            scaled.push(2.0 / (deriv * deriv));
        }
        nodes.extend(positive.iter().copied());
        scaled.extend(scaled_positive.iter().copied());
        let weights = nodes
            .iter()
            .zip(&scaled)
            .map(|(x, s)| s * (-x * x).exp())
            .collect();
        Self {
            nodes,
            weights,
            scaled_weights: scaled,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scaled_weights(&self) -> &[f64] {
        &self.scaled_weights
    }

    /// `∫ e^{-x²} f(x) dx`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// `∫ g(x) dx` for an integrand `g` that decays like `e^{-x²}` itself.
    pub fn integrate_gaussian<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.scaled_weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// `(ψ_n(x), ψ_{n−1}(x))` from the weighted orthonormal recurrence
/// `ψ_{j+1} = √(2/(j+1)) x ψ_j − √(j/(j+1)) ψ_{j−1}`.
fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = x * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, p2)
}

/// Derivative of the naked polynomial part at a root, in the scaling where
/// the weight is `2/d²`.
fn hermite_derivative(n: usize, x: f64) -> f64 {
    (2.0 * n as f64).sqrt() * hermite_pair(n, x).1
}

fn polish(n: usize, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = hermite_pair(n, lo).0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (f, prev) = hermite_pair(n, x);
        if f == 0.0 {
            return x;
        }
        if f.signum() == f_lo.signum() {
            lo = x;
            f_lo = f;
        } else {
            hi = x;
        }
        // ψ_n' = √(2n) ψ_{n−1} − x ψ_n
        let deriv = (2.0 * n as f64).sqrt() * prev - x * f;
        let newton = x - f / deriv;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            return next;
        }
        x = next;
    }
    x
}

/// Composite trapezoidal rule over `n_intervals` equal steps on `[a, b]`.
pub fn trapezoid<F: FnMut(f64) -> f64>(a: f64, b: f64, n_intervals: usize, mut f: F) -> f64 {
    assert!(n_intervals >= 1);
    let h = (b - a) / n_intervals as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n_intervals {
        sum += f(a + h * i as f64);
    }
    sum * h
}

/// Trapezoidal rule on tabulated, equally spaced samples.
pub fn trapezoid_samples(step: f64, values: &[f64]) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => step * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for n in [1, 2, 5, 20, 64, 88, 200] {
            let gh = GaussHermite::new(n);
            let s: f64 = gh.weights().iter().sum();
            assert!((s - PI.sqrt()).abs() < 1e-13, "n={n}: {s}");
        }
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let gh = GaussHermite::new(11);
        let x = gh.nodes();
        assert!(x.windows(2).all(|w| w[0] < w[1]));
        for i in 0..x.len() {
            assert!((x[i] + x[x.len() - 1 - i]).abs() < 1e-14);
        }
        assert_eq!(x[5], 0.0);
    }

    #[test]
    fn low_order_rules_match_closed_form() {
        let gh = GaussHermite::new(2);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((gh.nodes()[1] - r).abs() < 1e-15);
        assert!((gh.weights()[0] - PI.sqrt() / 2.0).abs() < 1e-15);
        let gh = GaussHermite::new(3);
        assert!((gh.nodes()[2] - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((gh.weights()[1] - 2.0 * PI.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_even_moments() {
        // ∫ x^{2k} e^{-x²} = Γ(k+1/2)
        let gh = GaussHermite::new(20);
        let mut gamma = PI.sqrt();
        for k in 0..20 {
            let got = gh.integrate(|x| x.powi(2 * k as i32));
            assert!(((got - gamma) / gamma).abs() < 1e-12, "k={k}");
            gamma *= k as f64 + 0.5;
        }
    }

    #[test]
    fn scaled_weights_integrate_gaussians() {
        let gh = GaussHermite::new(64);
        let got = gh.integrate_gaussian(|x| (-2.0 * x * x).exp());
        assert!((got - (PI / 2.0).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_on_gaussian() {
        let got = trapezoid(-10.0, 10.0, 400, |x| (-x * x).exp());
        assert!((got - PI.sqrt()).abs() < 1e-14);
        let samples: Vec<f64> = (0..=400).map(|i| (-(-10.0 + 0.05 * i as f64).powi(2)).exp()).collect();
        assert!((trapezoid_samples(0.05, &samples) - PI.sqrt()).abs() < 1e-14);
    }
}
