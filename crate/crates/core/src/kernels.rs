//! Separable cutoff kernels `F^(β)(ξ₂, ξ₃)` and `G^(β)(ξ₁, ξ₄)`, the checks of
//! the kernel hypotheses, the infrared cutoff and the derived constants of the
//! model.
//!
//! Every kernel is a complex amplitude times a product of one-leg profiles:
//! a charged-leg profile `ρⁿ exp(−(p¹² + p³²)/(2w²))`, a neutron profile
//! `exp(−|p|²/(2w²))` and a neutrino profile `|p|^η exp(−|p|²/(2w²))`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fock::ModeGrid;
use crate::free_spinors::Momentum3;
use crate::gamma::GammaAlgebra;
use crate::landau_spinors::ChargedMode;
use crate::linalg::operator_norm4;
use crate::params::Masses;
use crate::special_fn::gauss_legendre;
use crate::{Square, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargedProfile {
    /// Landau damping ratio ρ ∈ (0, 1).
    pub damping: f64,
    pub width: f64,
}

impl ChargedProfile {
    pub fn eval(&self, mode: &ChargedMode) -> f64 {
        let p2 = mode.p1 * mode.p1 + mode.p3 * mode.p3;
        libm::pow(self.damping, mode.n as f64) * libm::exp(-p2 / (2.0 * self.width * self.width))
    }

    /// L² norm over both spins, all Landau levels and the (p¹, p³) plane.
    pub fn norm(&self) -> f64 {
        let rho2 = self.damping * self.damping;
        libm::sqrt(2.0 / (1.0 - rho2) * PI * self.width * self.width)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutronProfile {
    pub width: f64,
}

impl NeutronProfile {
    pub fn eval(&self, p: &Momentum3) -> f64 {
        libm::exp(-p.norm_sqr() / (2.0 * self.width * self.width))
    }

    /// L² norm over ℝ³ and both helicities.
    pub fn norm(&self) -> f64 {
        libm::sqrt(2.0 * libm::pow(PI, 1.5) * libm::pow(self.width, 3.0))
    }
}

/// A neutrino-leg profile with closed-form first and mixed derivatives.
pub trait NeutrinoLeg {
    fn value(&self, p: &Momentum3) -> f64;
    fn gradient(&self, p: &Momentum3) -> [f64; 3];
    /// ∂²/∂p¹∂p².
    fn mixed_12(&self, p: &Momentum3) -> f64;
}

/// `|p|^η exp(−|p|²/(2w²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutrinoProfile {
    pub eta: f64,
    pub width: f64,
}

impl NeutrinoProfile {
    fn radial(&self, r: f64) -> f64 {
        if r == 0.0 {
            return if self.eta == 0.0 { 1.0 } else { 0.0 };
        }
        libm::pow(r, self.eta) * libm::exp(-r * r / (2.0 * self.width * self.width))
    }

    /// `(h'(r), h''(r))` for the radial profile `h`.
    fn radial_derivatives(&self, r: f64) -> (f64, f64) {
        let h = self.radial(r);
        let w2 = self.width * self.width;
        let a = self.eta / r - r / w2;
        let d1 = a * h;
        let d2 = (a * a - self.eta / (r * r) - 1.0 / w2) * h;
        (d1, d2)
    }

    /// L² norm over ℝ³: `(2π w^{3+2η} Γ(3/2 + η))^{1/2}`.
    pub fn norm(&self) -> f64 {
        libm::sqrt(2.0 * PI * libm::pow(self.width, 3.0 + 2.0 * self.eta) * libm::tgamma(1.5 + self.eta))
    }

    /// `∫ h(|p|)²/|p|² d³p = 2π w^{2η+1} Γ(η + 1/2)`, infinite for η ≤ −1/2.
    pub fn inverse_square_integral(&self) -> f64 {
        if self.eta <= -0.5 {
            return f64::INFINITY;
        }
        2.0 * PI * libm::pow(self.width, 2.0 * self.eta + 1.0) * libm::tgamma(self.eta + 0.5)
    }

    /// L² norm of the profile restricted to the ball `|p| ≤ σ`.
    pub fn ball_norm(&self, sigma: f64) -> f64 {
        let (x, w) = gauss_legendre(64, 0.0, sigma);
        let s: f64 = x
            .iter()
            .zip(&w)
            .map(|(&r, &wt)| {
                let h = self.radial(r);
                wt * r * r * h * h
            })
            .sum();
        libm::sqrt(4.0 * PI * s)
    }
}

impl NeutrinoLeg for NeutrinoProfile {
    fn value(&self, p: &Momentum3) -> f64 {
        self.radial(p.norm())
    }

    fn gradient(&self, p: &Momentum3) -> [f64; 3] {
        let r = p.norm();
        let (d1, _) = self.radial_derivatives(r);
        [d1 * p.p1 / r, d1 * p.p2 / r, d1 * p.p3 / r]
    }

    fn mixed_12(&self, p: &Momentum3) -> f64 {
        let r = p.norm();
        let (d1, d2) = self.radial_derivatives(r);
        p.p1 * p.p2 / (r * r) * (d2 - d1 / r)
    }
}

/// One β component: `F = a_F f_c(ξ₂) f_n(ξ₃)`, `G = a_G g_c(ξ₁) g_ν(ξ₄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPair {
    pub f_amp: C64,
    pub f_charged: ChargedProfile,
    pub f_neutron: NeutronProfile,
    pub g_amp: C64,
    pub g_charged: ChargedProfile,
    pub g_neutrino: NeutrinoProfile,
}

impl KernelPair {
    pub fn f(&self, xi2: &ChargedMode, p3: &Momentum3) -> C64 {
        self.f_amp * (self.f_charged.eval(xi2) * self.f_neutron.eval(p3))
    }

    pub fn g(&self, xi1: &ChargedMode, p4: &Momentum3) -> C64 {
        self.g_amp * (self.g_charged.eval(xi1) * self.g_neutrino.value(p4))
    }

    pub fn f_norm(&self) -> f64 {
        self.f_amp.norm() * self.f_charged.norm() * self.f_neutron.norm()
    }

    pub fn g_norm(&self) -> f64 {
        self.g_amp.norm() * self.g_charged.norm() * self.g_neutrino.norm()
    }

    pub fn scaled(&self, lambda: f64) -> KernelPair {
        KernelPair {
            f_amp: self.f_amp * lambda,
            g_amp: self.g_amp * lambda,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub beta: [KernelPair; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leg {
    F,
    G,
}

impl KernelSpec {
    /// The default toy family: unit widths, ρ = 1/2, a complex phase on the
    /// β = 1 amplitudes so that conjugate kernels differ from the originals.
    pub fn toy(eta: f64) -> Self {
        let pair = |phase: f64| KernelPair {
            f_amp: C64::from_polar(1.0, phase),
            f_charged: ChargedProfile {
                damping: 0.5,
                width: 1.0,
            },
            f_neutron: NeutronProfile { width: 1.0 },
            g_amp: C64::from_polar(1.0, -0.5 * phase),
            g_charged: ChargedProfile {
                damping: 0.5,
                width: 1.0,
            },
            g_neutrino: NeutrinoProfile { eta, width: 1.0 },
        };
        KernelSpec {
            beta: [pair(0.3), pair(-0.2)],
        }
    }

    pub fn scaled(&self, lambda: f64) -> KernelSpec {
        KernelSpec {
            beta: [self.beta[0].scaled(lambda), self.beta[1].scaled(lambda)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for pair in &self.beta {
            for c in [&pair.f_charged, &pair.g_charged] {
                if !(c.damping > 0.0 && c.damping < 1.0 && c.width > 0.0) {
                    return Err(Error::Param(alloc::format!("invalid charged profile {c:?}")));
                }
            }
            if !(pair.f_neutron.width > 0.0 && pair.g_neutrino.width > 0.0) {
                return Err(Error::Param("kernel widths must be positive".into()));
            }
            if pair.g_neutrino.eta < 0.0 {
                return Err(Error::Param("neutrino exponent eta must be >= 0".into()));
            }
            if !(pair.f_amp.is_finite() && pair.g_amp.is_finite()) {
                return Err(Error::Param("kernel amplitudes must be finite".into()));
            }
        }
        Ok(())
    }

    /// Continuum norms `(‖F^(β)‖, ‖G^(β)‖)` from the closed forms.
    pub fn continuum_norms(&self) -> KernelNorms {
        KernelNorms {
            f: [self.beta[0].f_norm(), self.beta[1].f_norm()],
            g: [self.beta[0].g_norm(), self.beta[1].g_norm()],
        }
    }

    /// Norms of the kernels restricted to the grid, with the grid weights as
    /// the measure. Charged legs use the particle grid for β = 1 and the
    /// antiparticle grid for β = 2.
    pub fn discrete_norms(&self, grid: &ModeGrid) -> KernelNorms {
        let mut f = [0.0; 2];
        let mut g = [0.0; 2];
        for (b, pair) in self.beta.iter().enumerate() {
            let (hadron, lepton) = if b == 0 {
                (&grid.proton, &grid.electron)
            } else {
                (&grid.antiproton, &grid.positron)
            };
            let fc: f64 = hadron.iter().map(|m| m.weight * pair.f_charged.eval(&m.label).sq()).sum();
            let fnn: f64 = grid.neutron.iter().map(|m| m.weight * pair.f_neutron.eval(&m.label.p).sq()).sum();
            let gc: f64 = lepton.iter().map(|m| m.weight * pair.g_charged.eval(&m.label).sq()).sum();
            let gn: f64 = grid
                .neutrino
                .iter()
                .map(|m| m.weight * pair.g_neutrino.value(&m.label.p).sq())
                .sum();
            f[b] = pair.f_amp.norm() * libm::sqrt(fc * fnn);
            g[b] = pair.g_amp.norm() * libm::sqrt(gc * gn);
        }
        KernelNorms { f, g }
    }

    /// `‖G^(β)(·, ξ₄)‖` over the charged grid at one neutrino momentum.
    pub fn discrete_g_slice(&self, grid: &ModeGrid, beta: usize, p4: &Momentum3) -> f64 {
        let pair = &self.beta[beta];
        let lepton = if beta == 0 { &grid.electron } else { &grid.positron };
        let gc: f64 = lepton.iter().map(|m| m.weight * pair.g_charged.eval(&m.label).sq()).sum();
        pair.g_amp.norm() * libm::sqrt(gc) * pair.g_neutrino.value(p4)
    }

    /// Discrete `K̃(G)`: the largest ratio of the soft-ball norm to σ, with σ
    /// running over the neutrino radii of the grid.
    pub fn discrete_ktilde(&self, grid: &ModeGrid) -> f64 {
        let mut best: f64 = 0.0;
        for (b, pair) in self.beta.iter().enumerate() {
            let lepton = if b == 0 { &grid.electron } else { &grid.positron };
            let gc: f64 = lepton.iter().map(|m| m.weight * pair.g_charged.eval(&m.label).sq()).sum();
            for probe in &grid.neutrino {
                let sigma = probe.label.p.norm();
                let inside: f64 = grid
                    .neutrino
                    .iter()
                    .filter(|m| m.label.p.norm() <= sigma)
                    .map(|m| m.weight * pair.g_neutrino.value(&m.label.p).sq())
                    .sum();
                let n = pair.g_amp.norm() * libm::sqrt(gc * inside);
                best = best.max(n / sigma);
            }
        }
        best
    }

    pub fn eval_kernel(&self, beta: usize, leg: Leg, charged: &ChargedMode, p: &Momentum3) -> C64 {
        match leg {
            Leg::F => self.beta[beta].f(charged, p),
            Leg::G => self.beta[beta].g(charged, p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KernelNorms {
    pub f: [f64; 2],
    pub g: [f64; 2],
}

impl KernelNorms {
    /// `K(F,G) = Σ_β ‖F^(β)‖ ‖G^(β)‖`.
    pub fn k(&self) -> f64 {
        self.f[0] * self.g[0] + self.f[1] * self.g[1]
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Hypothesis51Report {
    pub i_finite: bool,
    /// Closed-form value of `max_β ∫|G|²/|p₄|²`.
    pub i_value: f64,
    /// Numerical cross-check of `i_value`.
    pub i_numeric: f64,
    pub ii_ktilde: f64,
    /// Fitted exponent of the soft-ball norm as σ → 0.
    pub ii_slope: f64,
}

/// Integrability conditions on the continuum kernels: finiteness of the
/// weighted norm and the derivative bound K̃.
pub fn check_hypothesis_51(spec: &KernelSpec) -> Hypothesis51Report {
    let mut i_value: f64 = 0.0;
    let mut i_numeric: f64 = 0.0;
    let mut ktilde: f64 = 0.0;
    let mut slope = f64::NAN;
    for pair in &spec.beta {
        let pref = pair.g_amp.norm() * pair.g_charged.norm();
        let prof = &pair.g_neutrino;
        i_value = i_value.max(pref * pref * prof.inverse_square_integral());
        // radial integral 4π ∫ h(r)² dr on [0, 12w], r = w u² removes the r^{2η} kink
        let upper = libm::sqrt(12.0);
        let (x, w) = gauss_legendre(200, 0.0, upper);
        let s: f64 = x
            .iter()
            .zip(&w)
            .map(|(&u, &wt)| {
                let r = prof.width * u * u;
                let h = prof.radial(r);
                wt * h * h * 2.0 * prof.width * u
            })
            .sum();
        i_numeric = i_numeric.max(pref * pref * 4.0 * PI * s);

        if pref == 0.0 {
            continue;
        }
        let lo = 1e-3 * prof.width;
        let hi = 10.0 * prof.width;
        let steps = 200;
        for k in 0..=steps {
            let sigma = lo * libm::pow(hi / lo, k as f64 / steps as f64);
            ktilde = ktilde.max(pref * prof.ball_norm(sigma) / sigma);
        }
        let s1 = 1e-3 * prof.width;
        let s2 = 1e-2 * prof.width;
        let fit = libm::log(prof.ball_norm(s2) / prof.ball_norm(s1)) / libm::log(s2 / s1);
        slope = if slope.is_nan() { fit } else { slope.min(fit) };
    }
    Hypothesis51Report {
        i_finite: i_value.is_finite(),
        i_value,
        i_numeric,
        ii_ktilde: ktilde,
        ii_slope: if slope.is_nan() { 0.0 } else { slope },
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Hypothesis61Report {
    pub inner_radius: f64,
    pub outer_radius: f64,
    /// L² norms of ∂G/∂p₄¹, ∂G/∂p₄², ∂²G/∂p₄¹∂p₄², maximized over β.
    pub d1_norm: f64,
    pub d2_norm: f64,
    pub d12_norm: f64,
    /// Largest relative mismatch between closed-form and finite-difference
    /// derivatives at the sample points.
    pub fd_max_rel_err: f64,
    pub pass: bool,
}

/// Derivative norms of a neutrino leg over the annulus `r_in ≤ |p| ≤ r_out`,
/// times the charged-leg norm.
pub fn derivative_norms<P: NeutrinoLeg>(leg: &P, charged_norm: f64, r_in: f64, r_out: f64) -> [f64; 3] {
    let (rs, rw) = gauss_legendre(24, r_in, r_out);
    let (ts, tw) = gauss_legendre(24, 0.0, PI);
    let (ps, pw) = gauss_legendre(48, 0.0, 2.0 * PI);
    let mut acc = [0.0; 3];
    for (&r, &wr) in rs.iter().zip(&rw) {
        for (&t, &wt) in ts.iter().zip(&tw) {
            let st = libm::sin(t);
            for (&ph, &wp) in ps.iter().zip(&pw) {
                let p = Momentum3::new(r * st * libm::cos(ph), r * st * libm::sin(ph), r * libm::cos(t));
                let jac = wr * wt * wp * r * r * st;
                let g = leg.gradient(&p);
                acc[0] += jac * g[0] * g[0];
                acc[1] += jac * g[1] * g[1];
                let m = leg.mixed_12(&p);
                acc[2] += jac * m * m;
            }
        }
    }
    [
        charged_norm * libm::sqrt(acc[0]),
        charged_norm * libm::sqrt(acc[1]),
        charged_norm * libm::sqrt(acc[2]),
    ]
}

/// Largest relative error between the closed-form derivatives of `leg` and
/// central finite differences at the given points.
pub fn finite_difference_mismatch<P: NeutrinoLeg>(leg: &P, points: &[Momentum3]) -> f64 {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for p in points {
        let shift = |d1: f64, d2: f64| Momentum3::new(p.p1 + d1, p.p2 + d2, p.p3);
        let fd1 = (leg.value(&shift(h, 0.0)) - leg.value(&shift(-h, 0.0))) / (2.0 * h);
        let fd2 = (leg.value(&shift(0.0, h)) - leg.value(&shift(0.0, -h))) / (2.0 * h);
        let fd12 = (leg.value(&shift(h, h)) - leg.value(&shift(h, -h)) - leg.value(&shift(-h, h))
            + leg.value(&shift(-h, -h)))
            / (4.0 * h * h);
        let g = leg.gradient(p);
        let m = leg.mixed_12(p);
        let scale = (g[0].abs() + g[1].abs() + m.abs()).max(leg.value(p).abs()).max(1e-12);
        for (a, b) in [(fd1, g[0]), (fd2, g[1])] {
            worst = worst.max((a - b).abs() / scale);
        }
        // second differences carry O(ε/h²) rounding
        worst = worst.max((fd12 - m).abs() / scale * 1e-1);
    }
    worst
}

/// Neutrino-momentum derivatives of G on the annulus `[r_in, r_out]`, which stays away from the
/// singular origin; the coordinate planes have measure zero there and the
/// closed-form derivatives are bounded on it.
pub fn check_hypothesis_61(spec: &KernelSpec, r_in: f64, r_out: f64) -> Hypothesis61Report {
    let mut norms = [0.0f64; 3];
    let mut fd: f64 = 0.0;
    let samples = [
        Momentum3::new(1.0, 1.0, 1.0),
        Momentum3::new(0.3, -0.7, 0.2),
        Momentum3::new(-1.1, 0.4, -0.9),
        Momentum3::new(0.05, 0.6, -0.3),
    ];
    for pair in &spec.beta {
        let cn = pair.g_amp.norm() * pair.g_charged.norm();
        let n = derivative_norms(&pair.g_neutrino, cn, r_in, r_out);
        for k in 0..3 {
            norms[k] = norms[k].max(n[k]);
        }
        fd = fd.max(finite_difference_mismatch(&pair.g_neutrino, &samples));
    }
    Hypothesis61Report {
        inner_radius: r_in,
        outer_radius: r_out,
        d1_norm: norms[0],
        d2_norm: norms[1],
        d12_norm: norms[2],
        fd_max_rel_err: fd,
        pass: norms.iter().all(|v| v.is_finite()) && fd < 1e-5,
    }
}

/// Smooth step with `χ₀ = 1` on `(−∞, 1]` and `χ₀ = 0` on `[2, ∞)`.
pub fn chi0(t: f64) -> f64 {
    fn bump(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            libm::exp(-1.0 / u)
        }
    }
    let a = bump(2.0 - t);
    let b = bump(t - 1.0);
    a / (a + b)
}

/// `χ̃^σ(p₄) = 1 − χ₀(|p₄|/σ)`; `None` means no cutoff.
pub fn ir_cutoff_factor(sigma: Option<f64>, p4: &Momentum3) -> f64 {
    match sigma {
        Some(s) if s > 0.0 => 1.0 - chi0(p4.norm() / s),
        _ => 1.0,
    }
}

/// The two supremum norms entering `C₀`: `sup_α ‖γ^α(1 − g_Aγ₅)‖` and
/// `sup_α ‖γ_α(1 − γ₅)‖`.
pub fn vertex_norms(g_a: f64) -> (f64, f64) {
    let g = GammaAlgebra::standard();
    let mut had: f64 = 0.0;
    let mut lep: f64 = 0.0;
    for mu in 0..4 {
        had = had.max(operator_norm4(&g.hadronic(mu, g_a)));
        let lower = g.gamma_lower(mu) * (nalgebra::Matrix4::identity() - g.gamma5);
        lep = lep.max(operator_norm4(&lower));
    }
    (had, lep)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ModelConstants {
    pub c0: f64,
    pub k: f64,
    pub c: f64,
    pub b: f64,
    pub g0: f64,
    pub delta: f64,
    pub gamma: f64,
    pub c_tilde: f64,
    pub b_tilde: f64,
    pub k_tilde_g: f64,
    pub k_tilde_fg: f64,
    /// `D̃(F,G)` with the lightest massive particle read as the electron.
    pub d_tilde: f64,
    /// The same constant with the neutron mass in that slot.
    pub d_tilde_neutron: f64,
    pub g1: f64,
    pub g1_neutron: f64,
    pub g3: f64,
    pub g2: f64,
    pub g2_neutron: f64,
    /// Uniform bound on `‖H₀ φ‖` for ground states, used by the pull-through bound.
    pub m_bound: f64,
    pub sup_hadronic: f64,
    pub sup_leptonic: f64,
    pub m_e: f64,
    pub m_p: f64,
}

/// Safety factor applied to every strict-inequality coupling threshold.
pub const SAFETY: f64 = 0.99;

pub fn derive_constants(
    norms: &KernelNorms,
    k_tilde_g: f64,
    masses: &Masses,
    g_a: f64,
    delta: f64,
) -> Result<ModelConstants> {
    if !(delta > 0.0 && delta < masses.m_e) {
        return Err(Error::Delta { delta, m_e: masses.m_e });
    }
    let (s1, s2) = vertex_norms(g_a);
    let c0 = 0.5 * (1.0 / masses.m_e + 1.0 / masses.m_p) * s1 * s2;
    let k = norms.k();
    let c = 2.0 * c0;
    let b = 2.0 * masses.m_p * c0;
    let g0 = if k > 0.0 { SAFETY / (2.0 * c0 * k) } else { f64::INFINITY };
    let gamma = 1.0 - delta / (2.0 * masses.m_e - delta);
    let denom = 1.0 - g0 * k * c;
    let c_tilde = c / denom;
    let b_tilde = b / (denom * denom);
    let k_tilde_fg = 2.0 * (norms.f[0] + norms.f[1]) * k_tilde_g;
    let d_of = |m: f64| {
        let lead = (4.0 * (2.0 * m + 1.0) * gamma / (2.0 * m - delta)).max(2.0);
        lead * k_tilde_fg * (2.0 * m * c_tilde + b_tilde)
    };
    let d_tilde = d_of(masses.m_e);
    let d_tilde_neutron = d_of(masses.m_n);
    let g1_of = |d: f64| {
        let third = if d > 0.0 { (gamma - gamma * gamma) / (3.0 * d) } else { f64::INFINITY };
        SAFETY * 1.0f64.min(g0).min(third)
    };
    let g1 = g1_of(d_tilde);
    let g1_neutron = g1_of(d_tilde_neutron);
    let g3 = if k > 0.0 { 1.0 / (2.0 * k * (2.0 * c + b)) } else { f64::INFINITY };
    let m_bound = if k > 0.0 { g0 * k * b / denom * (1.0 + 1.0 / denom) } else { 0.0 };
    Ok(ModelConstants {
        c0,
        k,
        c,
        b,
        g0,
        delta,
        gamma,
        c_tilde,
        b_tilde,
        k_tilde_g,
        k_tilde_fg,
        d_tilde,
        d_tilde_neutron,
        g1,
        g1_neutron,
        g3,
        g2: g3.min(g1),
        g2_neutron: g3.min(g1_neutron),
        m_bound,
        sup_hadronic: s1,
        sup_leptonic: s2,
        m_e: masses.m_e,
        m_p: masses.m_p,
    })
}

impl ModelConstants {
    /// `σ₀ = 2m_e + 1`, `σ₁ = m_e − δ/2`, `σ_{n+1} = γσ_n`.
    pub fn sigma(&self, n: usize) -> f64 {
        match n {
            0 => 2.0 * self.m_e + 1.0,
            _ => (self.m_e - self.delta / 2.0) * libm::pow(self.gamma, (n - 1) as f64),
        }
    }

    pub fn sigmas(&self, count: usize) -> Vec<f64> {
        (0..count).map(|n| self.sigma(n)).collect()
    }

    /// `|g| K B / (1 − g₀ K C)`.
    pub fn energy_bound(&self, g: f64) -> f64 {
        g.abs() * self.k * self.b / (1.0 - self.g0 * self.k * self.c)
    }

    /// `(1 − 3 g D̃/γ) σ_n` with the given `D̃`.
    pub fn gap_bound(&self, g: f64, n: usize, d_tilde: f64) -> f64 {
        (1.0 - 3.0 * g.abs() * d_tilde / self.gamma) * self.sigma(n)
    }
}
