//! Bilinear contractions, x²-overlap integrals and the four-mode amplitudes
//! of the interaction.
//!
//! Process numbering follows the operator monomials:
//! 1. `b*_e b*_p b_n b_ν`, kernel `F⁽¹⁾G⁽¹⁾`, phase `e^{+ix²r²}`;
//! 2. `b*_ν b*_n b_p b_e`, conjugate kernels, phase `e^{−ix²r²}`;
//! 3. `b*_ν b*_n b*_p̄ b*_ē`, kernel `F⁽²⁾G⁽²⁾`, phase `e^{−ix²r²}`;
//! 4. `b_ν b_n b_p̄ b_ē`, conjugate kernels, phase `e^{+ix²r²}`,
//!
//! with `r² = p_n² + p_ν²` (second components).

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::fock::{ModeGrid, NeutronLabel};
use crate::free_spinors::{neutrino_spinors, neutron_spinors, Momentum3};
use crate::gamma::{bilinear, GammaAlgebra, METRIC};
use crate::kernels::KernelSpec;
use crate::landau_spinors::{
    spinor_u_coeffs, spinor_w_coeffs, ChargedKind, ChargedMode, ChargedSpecies, LandauSpinor,
};
use crate::params::ModelParams;
use crate::special_fn::{gauss_hermite, QuadratureRule};
use crate::{Spinor4, C64};

/// Default Gauss–Hermite order for the x² integrals.
pub const DEFAULT_QUAD_ORDER: usize = 128;

/// Largest number of entries allowed across the four amplitude tables.
pub const MAX_TABLE_ENTRIES: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    One,
    Two,
    Three,
    Four,
}

pub const PROCESSES: [Process; 4] = [Process::One, Process::Two, Process::Three, Process::Four];

impl Process {
    pub fn number(self) -> usize {
        self as usize + 1
    }

    /// Kernel component β (0-based).
    pub fn beta(self) -> usize {
        match self {
            Process::One | Process::Two => 0,
            _ => 1,
        }
    }

    /// Sign of the exponent in `e^{±ix²r²}`.
    pub fn phase_sign(self) -> f64 {
        match self {
            Process::One | Process::Four => 1.0,
            _ => -1.0,
        }
    }

    fn conjugate_kernel(self) -> bool {
        matches!(self, Process::Two | Process::Four)
    }

    /// Whether the charged spinor sits on the antilinear side of the bilinears.
    fn charged_left(self) -> bool {
        matches!(self, Process::One | Process::Four)
    }

    fn uses_w(self) -> bool {
        matches!(self, Process::Three | Process::Four)
    }
}

/// Precomputed vertex matrices and the x² quadrature.
#[derive(Debug, Clone)]
pub struct VertexContext {
    pub eb: f64,
    pub g_a: f64,
    pub m_n: f64,
    pub electron: ChargedSpecies,
    pub proton: ChargedSpecies,
    pub quad: QuadratureRule,
    /// `γ^α(1 − g_Aγ₅)`.
    pub hadronic: [Matrix4<C64>; 4],
    /// `γ^α(1 − γ₅)`.
    pub leptonic: [Matrix4<C64>; 4],
    /// Signs lowering the leptonic index.
    pub metric: [f64; 4],
}

impl VertexContext {
    pub fn new(params: &ModelParams, quad_order: usize) -> Result<Self> {
        let g = GammaAlgebra::standard();
        Ok(VertexContext {
            eb: params.eb,
            g_a: params.g_a,
            m_n: params.masses.m_n,
            electron: ChargedSpecies::new(ChargedKind::Electron, params.masses.m_e),
            proton: ChargedSpecies::new(ChargedKind::Proton, params.masses.m_p),
            quad: gauss_hermite(quad_order)?,
            hadronic: core::array::from_fn(|mu| g.hadronic(mu, params.g_a)),
            leptonic: core::array::from_fn(|mu| g.leptonic(mu)),
            metric: METRIC,
        })
    }

    /// Replaces the contraction metric. Only meant for convention checks.
    pub fn with_metric(mut self, metric: [f64; 4]) -> Self {
        self.metric = metric;
        self
    }

    /// Charged spinors `(lepton, hadron)` entering `process`: `U` for
    /// processes 1 and 2, the field spinors `W` of the electron and proton
    /// fields for 3 and 4.
    pub fn charged_spinors(&self, process: Process, xi1: &ChargedMode, xi2: &ChargedMode) -> (LandauSpinor, LandauSpinor) {
        if process.uses_w() {
            (
                spinor_w_coeffs(&self.electron, xi1, self.eb),
                spinor_w_coeffs(&self.proton, xi2, self.eb),
            )
        } else {
            (
                spinor_u_coeffs(&self.electron, xi1, self.eb),
                spinor_u_coeffs(&self.proton, xi2, self.eb),
            )
        }
    }
}

/// One bilinear factor: a charged Landau spinor against a neutral plane-wave
/// spinor, with the charged spinor either conjugated (left) or not (right).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearLeg {
    pub charged: LandauSpinor,
    pub neutral: Spinor4,
    pub charged_left: bool,
}

impl BilinearLeg {
    fn values(&self, gammas: &[Matrix4<C64>; 4], x2: f64, eb: f64) -> [C64; 4] {
        let c = self.charged.eval(x2, eb);
        core::array::from_fn(|mu| {
            if self.charged_left {
                bilinear(&c, &gammas[mu], &self.neutral)
            } else {
                bilinear(&self.neutral, &gammas[mu], &c)
            }
        })
    }
}

/// `∫dx² e^{i·sign·x²r²} Σ_α η_αα (hadronic bilinear)_α (leptonic bilinear)_α`
/// with the hadronic vertex on `had` and the leptonic one on `lep`.
pub fn overlap_x2(ctx: &VertexContext, had: &BilinearLeg, lep: &BilinearLeg, r2: f64, sign: f64, quad: &QuadratureRule) -> C64 {
    if had.charged.is_zero() || lep.charged.is_zero() {
        return C64::new(0.0, 0.0);
    }
    let s = libm::sqrt(ctx.eb);
    let mid = 0.5 * (had.charged.center + lep.charged.center);
    let mut acc = C64::new(0.0, 0.0);
    for (&t, &w) in quad.nodes().iter().zip(quad.scaled_weights()) {
        let x = mid + t / s;
        let h = had.values(&ctx.hadronic, x, ctx.eb);
        let l = lep.values(&ctx.leptonic, x, ctx.eb);
        let mut c = C64::new(0.0, 0.0);
        for mu in 0..4 {
            c += h[mu] * l[mu] * ctx.metric[mu];
        }
        acc += C64::from_polar(w, sign * x * r2) * c;
    }
    acc / s
}

/// Full coefficient of the process monomial at one mode tuple, in the
/// continuum normalization (no grid weights). `xi1` is the electron or
/// positron label, `xi2` the proton or antiproton label.
pub fn amplitude(
    ctx: &VertexContext,
    spec: &KernelSpec,
    process: Process,
    xi1: &ChargedMode,
    xi2: &ChargedMode,
    xi3: &NeutronLabel,
    xi4: &Momentum3,
) -> Result<C64> {
    let (lepton, hadron) = ctx.charged_spinors(process, xi1, xi2);
    let (u_n, _) = neutron_spinors(&xi3.p, xi3.lambda, ctx.m_n);
    let (u_nu, _) = neutrino_spinors(xi4)?;
    let left = process.charged_left();
    let had = BilinearLeg {
        charged: hadron,
        neutral: u_n,
        charged_left: left,
    };
    let lep = BilinearLeg {
        charged: lepton,
        neutral: u_nu,
        charged_left: left,
    };
    let r2 = xi3.p.p2 + xi4.p2;
    let integral = overlap_x2(ctx, &had, &lep, r2, process.phase_sign(), &ctx.quad);
    let pair = &spec.beta[process.beta()];
    let mut kernel = pair.f(xi2, &xi3.p) * pair.g(xi1, xi4);
    if process.conjugate_kernel() {
        kernel = kernel.conj();
    }
    Ok(kernel * integral)
}

/// Amplitudes of one process over the grid, indexed `(i1, i2, i3, i4)` in
/// row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTable {
    pub process: Process,
    pub dims: [usize; 4],
    pub values: Vec<C64>,
}

impl AmplitudeTable {
    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize, i4: usize) -> usize {
        ((i1 * self.dims[1] + i2) * self.dims[2] + i3) * self.dims[3] + i4
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize, i3: usize, i4: usize) -> C64 {
        self.values[self.index(i1, i2, i3, i4)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}

fn charged_grids(grid: &ModeGrid, process: Process) -> (&[crate::fock::GridMode<ChargedMode>], &[crate::fock::GridMode<ChargedMode>]) {
    if process.uses_w() {
        (&grid.positron, &grid.antiproton)
    } else {
        (&grid.electron, &grid.proton)
    }
}

/// Tabulates a process over the grid. Same result as calling [`amplitude`]
/// per tuple, with the neutral-leg bilinears shared across tuples.
pub fn amplitude_table(
    ctx: &VertexContext,
    spec: &KernelSpec,
    grid: &ModeGrid,
    process: Process,
    quad: &QuadratureRule,
) -> Result<AmplitudeTable> {
    let (leptons, hadrons) = charged_grids(grid, process);
    let dims = [leptons.len(), hadrons.len(), grid.neutron.len(), grid.neutrino.len()];
    let total = dims.iter().product::<usize>();
    if total > MAX_TABLE_ENTRIES {
        return Err(Error::Param(alloc::format!(
            "amplitude table with {total} entries exceeds {MAX_TABLE_ENTRIES}"
        )));
    }
    let neutrons: Vec<Spinor4> = grid
        .neutron
        .iter()
        .map(|m| neutron_spinors(&m.label.p, m.label.lambda, ctx.m_n).0)
        .collect();
    let neutrinos = grid
        .neutrino
        .iter()
        .map(|m| neutrino_spinors(&m.label.p).map(|s| s.0))
        .collect::<Result<Vec<_>>>()?;
    let left = process.charged_left();
    let sign = process.phase_sign();
    let pair = &spec.beta[process.beta()];
    let s = libm::sqrt(ctx.eb);
    let nq = quad.order();
    let mut values = vec![C64::new(0.0, 0.0); total];
    let mut had = vec![[C64::new(0.0, 0.0); 4]; dims[2] * nq];
    let mut lep = vec![[C64::new(0.0, 0.0); 4]; dims[3] * nq];

    for (i1, m1) in leptons.iter().enumerate() {
        for (i2, m2) in hadrons.iter().enumerate() {
            let (lepton, hadron) = ctx.charged_spinors(process, &m1.label, &m2.label);
            if lepton.is_zero() || hadron.is_zero() {
                continue;
            }
            let mid = 0.5 * (lepton.center + hadron.center);
            for (j, &t) in quad.nodes().iter().enumerate() {
                let x = mid + t / s;
                for (i3, u) in neutrons.iter().enumerate() {
                    let leg = BilinearLeg {
                        charged: hadron,
                        neutral: *u,
                        charged_left: left,
                    };
                    let phase = C64::from_polar(1.0, sign * x * grid.neutron[i3].label.p.p2);
                    let v = leg.values(&ctx.hadronic, x, ctx.eb);
                    had[i3 * nq + j] = v.map(|z| z * phase);
                }
                for (i4, u) in neutrinos.iter().enumerate() {
                    let leg = BilinearLeg {
                        charged: lepton,
                        neutral: *u,
                        charged_left: left,
                    };
                    let phase = C64::from_polar(1.0, sign * x * grid.neutrino[i4].label.p.p2);
                    let v = leg.values(&ctx.leptonic, x, ctx.eb);
                    lep[i4 * nq + j] = v.map(|z| z * phase);
                }
            }
            for i3 in 0..dims[2] {
                let f = pair.f(&m2.label, &grid.neutron[i3].label.p);
                for i4 in 0..dims[3] {
                    let mut acc = C64::new(0.0, 0.0);
                    for (j, &w) in quad.scaled_weights().iter().enumerate() {
                        let h = &had[i3 * nq + j];
                        let l = &lep[i4 * nq + j];
                        let c = h[0] * l[0] * ctx.metric[0]
                            + h[1] * l[1] * ctx.metric[1]
                            + h[2] * l[2] * ctx.metric[2]
                            + h[3] * l[3] * ctx.metric[3];
                        acc += c * w;
                    }
                    let mut kernel = f * pair.g(&m1.label, &grid.neutrino[i4].label.p);
                    if process.conjugate_kernel() {
                        kernel = kernel.conj();
                    }
                    let idx = ((i1 * dims[1] + i2) * dims[2] + i3) * dims[3] + i4;
                    values[idx] = kernel * acc / s;
                }
            }
        }
    }
    Ok(AmplitudeTable { process, dims, values })
}

/// All four tables.
pub fn amplitude_tables(ctx: &VertexContext, spec: &KernelSpec, grid: &ModeGrid) -> Result<[AmplitudeTable; 4]> {
    let t1 = amplitude_table(ctx, spec, grid, Process::One, &ctx.quad)?;
    let t2 = amplitude_table(ctx, spec, grid, Process::Two, &ctx.quad)?;
    let t3 = amplitude_table(ctx, spec, grid, Process::Three, &ctx.quad)?;
    let t4 = amplitude_table(ctx, spec, grid, Process::Four, &ctx.quad)?;
    Ok([t1, t2, t3, t4])
}

/// Largest entrywise change of the tables when the quadrature order is
/// doubled, relative to the largest entry.
pub fn quadrature_convergence(ctx: &VertexContext, spec: &KernelSpec, grid: &ModeGrid) -> Result<f64> {
    let fine = gauss_hermite(2 * ctx.quad.order())?;
    let mut worst: f64 = 0.0;
    for p in PROCESSES {
        let a = amplitude_table(ctx, spec, grid, p, &ctx.quad)?;
        let b = amplitude_table(ctx, spec, grid, p, &fine)?;
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for (x, y) in a.values.iter().zip(&b.values) {
            worst = worst.max((x - y).norm() / scale);
        }
    }
    Ok(worst)
}

/// Largest `|coeff₁ − conj(coeff₂)|` and `|coeff₃ − conj(coeff₄)|` over the
/// tables, relative to the largest entry.
pub fn hermitian_pairing_defect(tables: &[AmplitudeTable; 4]) -> f64 {
    let scale = tables.iter().fold(0.0f64, |m, t| m.max(t.max_abs())).max(f64::MIN_POSITIVE);
    let mut worst: f64 = 0.0;
    for (a, b) in [(&tables[0], &tables[1]), (&tables[2], &tables[3])] {
        for (x, y) in a.values.iter().zip(&b.values) {
            worst = worst.max((x - y.conj()).norm() / scale);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_grid, GridConfig};
    use crate::free_spinors::Helicity;
    use core::f64::consts::PI;

    fn ctx() -> VertexContext {
        VertexContext::new(&ModelParams::toy(), DEFAULT_QUAD_ORDER).unwrap()
    }

    #[test]
    fn gaussian_product_oracle() {
        // electron U₋ and proton U₊ at n = 0 are pure I₀ profiles, so the
        // integrand is a constant times I₀(ξ_a)I₀(ξ_b)e^{ix r}
        let c = ctx();
        let e = spinor_u_coeffs(&c.electron, &ChargedMode::new(-1, 0, 0.4, 0.3), c.eb);
        let p = spinor_u_coeffs(&c.proton, &ChargedMode::new(1, 0, 0.7, -0.2), c.eb);
        let u_n = Spinor4::new(C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.1, 0.0), C64::new(0.0, 0.4));
        let u_nu = Spinor4::new(C64::new(0.5, 0.0), C64::new(0.1, -0.3), C64::new(0.2, 0.2), C64::new(-0.4, 0.1));
        let had = BilinearLeg { charged: p, neutral: u_n, charged_left: true };
        let lep = BilinearLeg { charged: e, neutral: u_nu, charged_left: true };
        let r = 0.8;
        let got = overlap_x2(&c, &had, &lep, r, 1.0, &c.quad);

        let amp = |s: &LandauSpinor| Spinor4::from_fn(|i, _| C64::from(s.coeffs[i][1]));
        let (ha, la) = (amp(&p), amp(&e));
        let mut k = C64::new(0.0, 0.0);
        for mu in 0..4 {
            k += bilinear(&ha, &c.hadronic[mu], &u_n) * bilinear(&la, &c.leptonic[mu], &u_nu) * METRIC[mu];
        }
        let d = p.center - e.center;
        let mid = 0.5 * (p.center + e.center);
        // ∫ I₀(ξ_a) I₀(ξ_b) e^{ixr} dx with I₀ = eB^{1/4} π^{-1/4} e^{-ξ²/2}
        let gauss = libm::exp(-c.eb * d * d / 4.0 - r * r / (4.0 * c.eb));
        let expect = k * C64::from_polar(gauss, mid * r);
        assert!((got - expect).norm() < 1e-12, "{got} vs {expect}");
        let _ = PI;
    }

    #[test]
    fn zero_spinor_gives_zero() {
        let c = ctx();
        let spec = KernelSpec::toy(0.0);
        let n = NeutronLabel { p: Momentum3::new(0.1, 0.2, 0.3), lambda: Helicity::Plus };
        let nu = Momentum3::new(0.3, -0.4, 0.2);
        let ok = ChargedMode::new(1, 1, 0.0, 0.1);
        // electron s = +1, n = 0 has no U spinor
        let a = amplitude(&c, &spec, Process::One, &ChargedMode::new(1, 0, 0.0, 0.0), &ok, &n, &nu).unwrap();
        assert_eq!(a, C64::new(0.0, 0.0));
        // positron label (−1, 0) has no W spinor
        let a = amplitude(&c, &spec, Process::Three, &ChargedMode::new(-1, 0, 0.0, 0.0), &ok, &n, &nu).unwrap();
        assert_eq!(a, C64::new(0.0, 0.0));
    }

    #[test]
    fn table_matches_direct_amplitudes() {
        let c = ctx();
        let spec = KernelSpec::toy(0.0);
        let mut cfg = GridConfig::toy(alloc::vec![0.5, 1.0, 1.5], 2);
        cfg.charged_p1.count = 2;
        cfg.charged_p1.spacing = 0.6;
        let grid = build_grid(&cfg).unwrap();
        for p in PROCESSES {
            let t = amplitude_table(&c, &spec, &grid, p, &c.quad).unwrap();
            let (l, h) = charged_grids(&grid, p);
            for (i1, m1) in l.iter().enumerate() {
                for (i2, m2) in h.iter().enumerate() {
                    for (i3, m3) in grid.neutron.iter().enumerate() {
                        for (i4, m4) in grid.neutrino.iter().enumerate() {
                            let d = amplitude(&c, &spec, p, &m1.label, &m2.label, &m3.label, &m4.label.p).unwrap();
                            assert!((d - t.get(i1, i2, i3, i4)).norm() < 1e-13);
                        }
                    }
                }
            }
        }
    }
}
