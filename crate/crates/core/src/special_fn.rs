//! Hermite polynomials, normalized Landau mode functions and Gaussian
//! quadrature rules.
//!
//! Every transverse (x²) integral in the model is an integral of products of
//! Hermite functions against a bounded factor, so the workhorse here is the
//! Gauss–Hermite rule. Rules store both the plain weights `w_i` (for
//! integrands of the form `e^{-x²} f(x)`) and the scaled weights
//! `w_i e^{x_i²}` (for integrands that already carry their Gaussian
//! envelope). The scaled weights are computed directly from the normalized
//! Hermite functions and never underflow.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigenvalues;

/// Largest Gauss–Hermite order accepted by default.
pub const DEFAULT_MAX_ORDER: usize = 512;

/// Hermite polynomial `H_n(x)` (physicists' convention) by the three-term
/// recurrence `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * (k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Hermite functions `φ_0..=φ_n` at `x`,
/// `φ_k(x) = (2^k k! √π)^{-1/2} e^{-x²/2} H_k(x)`.
///
/// Uses the normalized recurrence on the functions themselves, so there is
/// no factorial to overflow.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    out[0] = libm::pow(PI, -0.25) * libm::exp(-0.5 * x * x);
    if n >= 1 {
        out[1] = core::f64::consts::SQRT_2 * x * out[0];
    }
    for k in 1..n {
        let kf = k as f64;
        out[k + 1] =
            libm::sqrt(2.0 / (kf + 1.0)) * x * out[k] - libm::sqrt(kf / (kf + 1.0)) * out[k - 1];
    }
    out
}

/// Single orthonormal Hermite function `φ_n(x)`; zero for `n = -1`.
pub fn hermite_function(n: i32, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    hermite_functions(n as usize, x)[n as usize]
}

/// Derivative `φ_n'(x) = √(n/2) φ_{n-1}(x) - √((n+1)/2) φ_{n+1}(x)`.
pub fn hermite_function_derivative(n: i32, x: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let phis = hermite_functions(n as usize + 1, x);
    let nf = n as f64;
    let lower = if n >= 1 { phis[n as usize - 1] } else { 0.0 };
    libm::sqrt(nf / 2.0) * lower - libm::sqrt((nf + 1.0) / 2.0) * phis[n as usize + 1]
}

/// Landau mode function
/// `I_n(ξ) = (√(eB) / (n! 2^n √π))^{1/2} e^{-ξ²/2} H_n(ξ)`, with `I_{-1} ≡ 0`.
///
/// Equal to `(eB)^{1/4} φ_n(ξ)`, which is how it is evaluated.
pub fn landau_mode(n: i32, xi: f64, eb: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    libm::pow(eb, 0.25) * hermite_function(n, xi)
}

/// Derivative of [`landau_mode`] with respect to `ξ`.
pub fn landau_mode_derivative(n: i32, xi: f64, eb: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    libm::pow(eb, 0.25) * hermite_function_derivative(n, xi)
}

/// A Gauss–Hermite rule for the weight `e^{-x²}` on the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    scaled_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `∫ e^{-x²} f(x) dx ≈ Σ w_i f(x_i)`. May underflow to zero
    /// at the outermost nodes for orders above roughly 300.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `w_i e^{x_i²}`, for `∫ g(x) dx ≈ Σ w̃_i g(x_i)` with `g` carrying its
    /// own Gaussian decay.
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

    /// `∫ g(x) dx` for integrands with their own Gaussian envelope.
    pub fn integrate_scaled<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.scaled_weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// Gauss–Hermite rule of the given order with the default order cap.
pub fn gauss_hermite(order: usize) -> Result<QuadratureRule> {
    gauss_hermite_capped(order, DEFAULT_MAX_ORDER)
}

/// Gauss–Hermite rule via Golub–Welsch (eigenvalues of the Jacobi matrix)
/// followed by Newton polishing of each node on `φ_n`.
pub fn gauss_hermite_capped(order: usize, max_order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > max_order {
        return Err(Error::QuadratureOrder { order, max: max_order });
    }
    let diag = vec![0.0; order];
    let off: Vec<f64> = (1..order).map(|k| libm::sqrt(k as f64 / 2.0)).collect();
    let mut nodes = tridiagonal_eigenvalues(&diag, &off)?;

    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let phis = hermite_functions(order, *x);
            let value = phis[order];
            // φ_n' = -x φ_n + √(2n) φ_{n-1}
            let deriv = -*x * value + libm::sqrt(2.0 * order as f64) * phis[order - 1];
            if deriv == 0.0 {
                break;
            }
            let step = value / deriv;
            *x -= step;
            if libm::fabs(step) <= 4.0 * f64::EPSILON * libm::fabs(*x).max(1.0) {
                break;
            }
        }
    }
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Symmetrize: the exact rule is symmetric about zero.
    let n = order;
    for i in 0..n / 2 {
        let avg = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -avg;
        nodes[n - 1 - i] = avg;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let scaled_weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let phis = hermite_functions(order - 1, x);
            1.0 / phis.iter().map(|p| p * p).sum::<f64>()
        })
        .collect();
    let weights = nodes
        .iter()
        .zip(&scaled_weights)
        .map(|(&x, &w)| w * libm::exp(-x * x))
        .collect();

    Ok(QuadratureRule {
        nodes,
        weights,
        scaled_weights,
    })
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..order {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (order as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let step = p / d;
            x -= step;
            if libm::fabs(step) < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        nodes.push(mid - half * x);
        weights.push(half * 2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
