//! Eigensolvers and the spectral experiments: ground-state bounds, the
//! infrared-cutoff gap study, the pull-through identity, soft-neutrino
//! scaling and ground-state multiplicity.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fock::{number_operator, FockBasis, Ladder, SectorCaps, Species};
use crate::hamiltonian::{
    apply_h_map, apply_ladder_map, apply_v_map, assemble_h, map_norm, map_sub, to_state_map, Model, DROP_TOL,
};
use crate::kernels::ModelConstants;
use crate::linalg::{dense_hermitian_eigen, tridiagonal_eigen};
use crate::sparse::{dot, norm, LinearOperator, SparseOperator};
use crate::C64;

pub const DENSE_TOL: f64 = 1e-10;
pub const LANCZOS_TOL: f64 = 1e-8;
pub const CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Lanczos,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    pub k: usize,
    pub tol: f64,
    /// Cap on matrix–vector products per eigenpair.
    pub max_iter: usize,
    /// Largest Krylov dimension before a restart.
    pub max_krylov: usize,
    pub seed: u64,
    pub solver: Solver,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            k: 3,
            tol: LANCZOS_TOL,
            max_iter: 20_000,
            max_krylov: 250,
            seed: 0x5eed,
            solver: Solver::Lanczos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Ascending.
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
    /// `‖Hx − θx‖` per pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub solver: Solver,
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Removes the components along `basis` (twice, for stability).
fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
}

fn residual(op: &dyn LinearOperator, x: &[C64], theta: f64) -> f64 {
    let mut y = vec![C64::default(); x.len()];
    op.apply(x, &mut y);
    libm::sqrt(y.iter().zip(x).map(|(a, b)| (a - b * theta).norm_sqr()).sum())
}

struct Run {
    theta: f64,
    x: Vec<C64>,
    steps: usize,
    exhausted: bool,
}

/// One Lanczos run with full reorthogonalization against its own basis and
/// the locked vectors; returns the lowest Ritz pair.
fn lanczos_run(op: &dyn LinearOperator, start: Vec<C64>, locked: &[Vec<C64>], max_krylov: usize, tol: f64) -> Result<Run> {
    let n = op.dim();
    let avail = n - locked.len();
    let mut vs: Vec<Vec<C64>> = vec![start];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![C64::default(); n];
    let mut scale: f64 = 0.0;
    loop {
        let j = vs.len() - 1;
        op.apply(&vs[j], &mut w);
        let a = dot(&vs[j], &w).re;
        for (x, v) in w.iter_mut().zip(&vs[j]) {
            *x -= v * a;
        }
        if j > 0 {
            let b = beta[j - 1];
            for (x, v) in w.iter_mut().zip(&vs[j - 1]) {
                *x -= v * b;
            }
        }
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &vs);
        alpha.push(a);
        let b = norm(&w);
        scale = scale.max(a.abs()).max(b);
        let m = alpha.len();
        let invariant = b <= 1e-13 * scale.max(1.0);
        let exhausted = invariant || m >= avail;
        let must_stop = exhausted || m >= max_krylov;
        if must_stop || m % 8 == 0 {
            let (vals, vecs) = tridiagonal_eigen(&alpha, &beta, true)?;
            let s = &vecs[0..m];
            let est = b * s[m - 1].abs();
            if must_stop || est < 0.1 * tol {
                let mut x = vec![C64::default(); n];
                for (coef, v) in s.iter().zip(&vs) {
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi += vi * *coef;
                    }
                }
                orthogonalize(&mut x, locked);
                let nx = norm(&x);
                x.iter_mut().for_each(|z| *z /= nx);
                return Ok(Run {
                    theta: vals[0],
                    x,
                    steps: m,
                    exhausted,
                });
            }
        }
        beta.push(b);
        w.iter_mut().for_each(|z| *z /= b);
        vs.push(core::mem::replace(&mut w, vec![C64::default(); n]));
    }
}

/// The `k` lowest eigenpairs by Lanczos with locking: each pair is found in
/// the orthogonal complement of those already locked, so repeated
/// eigenvalues appear with their multiplicity.
pub fn lanczos_lowest(op: &dyn LinearOperator, opts: &EigenOptions) -> Result<EigenResult> {
    let n = op.dim();
    let k = opts.k.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<Vec<C64>> = Vec::new();
    let mut values = Vec::new();
    let mut residuals = Vec::new();
    let mut total = 0;
    for _ in 0..k {
        let mut start = random_unit(n, &mut rng);
        orthogonalize(&mut start, &locked);
        let s = norm(&start);
        start.iter_mut().for_each(|z| *z /= s);
        let mut used = 0;
        loop {
            let run = lanczos_run(op, start, &locked, opts.max_krylov, opts.tol)?;
            used += run.steps;
            total += run.steps;
            let r = residual(op, &run.x, run.theta);
            if r <= opts.tol || run.exhausted && r <= 1e3 * opts.tol {
                values.push(run.theta);
                residuals.push(r);
                locked.push(run.x);
                break;
            }
            if used >= opts.max_iter {
                return Err(Error::NoConvergence {
                    residual: r,
                    iterations: total,
                });
            }
            start = run.x;
        }
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(core::cmp::Ordering::Equal));
    Ok(EigenResult {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: order.iter().map(|&i| locked[i].clone()).collect(),
        residuals: order.iter().map(|&i| residuals[i]).collect(),
        iterations: total,
        solver: Solver::Lanczos,
    })
}

/// Full dense diagonalization, truncated to the `k` lowest pairs.
pub fn dense_lowest(h: &SparseOperator, k: usize) -> EigenResult {
    let n = h.dim();
    let (vals, vecs) = dense_hermitian_eigen(h.to_dense());
    let k = k.min(n);
    let vectors: Vec<Vec<C64>> = (0..k).map(|c| vecs.column(c).iter().copied().collect()).collect();
    let residuals = vectors.iter().zip(&vals).map(|(v, &t)| residual(h, v, t)).collect();
    EigenResult {
        values: vals[..k].to_vec(),
        vectors,
        residuals,
        iterations: 0,
        solver: Solver::Dense,
    }
}

/// The `k` lowest eigenpairs of a Hermitian operator.
pub fn ground_state(h: &SparseOperator, opts: &EigenOptions) -> Result<EigenResult> {
    if !h.hermitian {
        return Err(Error::NotHermitian(h.max_hermitian_deviation()));
    }
    match opts.solver {
        Solver::Dense => Ok(dense_lowest(h, opts.k)),
        Solver::Lanczos => lanczos_lowest(h, opts),
    }
}

/// Number of eigenvalues within `tol` of the lowest.
pub fn multiplicity(values: &[f64], tol: f64) -> usize {
    match values.first() {
        Some(&e0) => values.iter().filter(|&&e| e - e0 <= tol).count(),
        None => 0,
    }
}

/// Numerical simplicity: `E₁ − E₀ > max(10·tol, 1e−7)`.
pub fn is_simple(values: &[f64], tol: f64) -> bool {
    values.len() < 2 || values[1] - values[0] > (10.0 * tol).max(CLUSTER_TOL)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EnergyBoundReport {
    pub g: f64,
    pub e0: f64,
    pub bound: f64,
    pub nonpositive: bool,
    pub pass: bool,
}

/// `E₀ ≤ 0` and `|E₀| ≤ |g| K B / (1 − g₀ K C)`.
pub fn energy_bound_check(e0: f64, constants: &ModelConstants, g: f64, tol: f64) -> EnergyBoundReport {
    let bound = constants.energy_bound(g);
    let nonpositive = e0 <= tol;
    EnergyBoundReport {
        g,
        e0,
        bound,
        nonpositive,
        pass: nonpositive && e0.abs() <= bound + tol,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IrGapRow {
    pub n: usize,
    pub sigma: f64,
    pub dim: usize,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    /// `(1 − 3gD̃/γ)σₙ` with the electron reading of `D̃`.
    pub bound: f64,
    /// The same with the neutron reading.
    pub bound_neutron: f64,
    pub multiplicity: usize,
    pub simple: bool,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IrGapReport {
    pub g: f64,
    /// Whether `|g| ≤ g₂`, so that the assertions are gated.
    pub in_regime: bool,
    pub rows: Vec<IrGapRow>,
    /// `Eⁿ` non-increasing in `n`.
    pub monotone: bool,
    pub pass: bool,
}

/// Runs `H_σₙ` for each `n` on the sector spanned by the vacuum and the
/// one-neutrino states, with neutrino modes below `σₙ` removed.
pub fn ir_gap_study(model: &Model, constants: &ModelConstants, g: f64, ns: &[usize], opts: &EigenOptions) -> Result<IrGapReport> {
    let mut rows = Vec::new();
    for &n in ns {
        let sigma = constants.sigma(n);
        model.grid.check_alignment(n, sigma)?;
        let caps = SectorCaps::pauli(&model.grid).with_neutrino_mask(model.grid.neutrino_mask_above(sigma));
        let basis = model.vacuum_and_neutrino_sector(&caps)?;
        let h = assemble_h(model, &basis, g, Some(sigma))?;
        let eig = ground_state(&h, &EigenOptions { k: opts.k.max(3), ..*opts })?;
        let (e0, e1) = (eig.values[0], eig.values.get(1).copied().unwrap_or(f64::INFINITY));
        let gap = e1 - e0;
        let bound = constants.gap_bound(g, n, constants.d_tilde);
        let bound_neutron = constants.gap_bound(g, n, constants.d_tilde_neutron);
        let mult = multiplicity(&eig.values, CLUSTER_TOL);
        let simple = mult == 1 && is_simple(&eig.values, opts.tol);
        rows.push(IrGapRow {
            n,
            sigma,
            dim: basis.len(),
            e0,
            e1,
            gap,
            bound,
            bound_neutron,
            multiplicity: mult,
            simple,
            residual: eig.residuals.iter().fold(0.0, |m: f64, r| m.max(*r)),
            pass: gap >= bound && simple,
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].e0 <= w[0].e0 + 1e-10);
    let in_regime = g.abs() <= constants.g2;
    let pass = !in_regime || rows.iter().all(|r| r.pass);
    Ok(IrGapReport {
        g,
        in_regime,
        rows,
        monotone,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PullThroughRow {
    pub mode: usize,
    pub p_norm: f64,
    pub residual: f64,
    /// `‖b(ξ₄)ψ‖ = ‖b_kψ‖/√w_k`.
    pub b_norm: f64,
    pub bound: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PullThroughReport {
    pub g: f64,
    pub e0: f64,
    pub eigen_residual: f64,
    pub max_residual: f64,
    pub violations: usize,
    pub rows: Vec<PullThroughRow>,
}

/// Both sides of `(H − E₀ + ω(ξ₄)) b(ξ₄)ψ = −g(V⁽¹⁾(ξ₄) + V⁽²⁾(ξ₄))ψ` per
/// neutrino mode, and the bound
/// `‖b(ξ₄)ψ‖ ≤ (|g|C₀/|p₄|)(Σ_β ‖F^(β)‖‖G^(β)(·,ξ₄)‖)(M + m_p)`.
#[allow(clippy::too_many_arguments)]
pub fn pull_through_residual(
    model: &Model,
    basis: &FockBasis,
    h: &SparseOperator,
    g: f64,
    sigma: Option<f64>,
    e0: f64,
    psi: &[C64],
    constants: &ModelConstants,
) -> PullThroughReport {
    let chi = model.cutoff_factors(sigma);
    let state = to_state_map(basis, psi);
    let eigen_residual = residual(h, psi, e0);
    let norms = model.norms();
    let mut rows = Vec::new();
    for (k, mode) in model.grid.neutrino.iter().enumerate() {
        let b_psi = apply_ladder_map(&state, Species::Neutrino, k, Ladder::Annihilate);
        let omega = model.omega(Species::Neutrino, k);
        let lhs = apply_h_map(model, g, &chi, omega - e0, &b_psi);
        let mut rhs = apply_v_map(model, &chi, k, &state);
        rhs.values_mut().for_each(|v| *v *= -g);
        let res = map_norm(&map_sub(&lhs, &rhs));
        let p = mode.label.p.norm();
        let slices: f64 = (0..2)
            .map(|beta| norms.f[beta] * model.spec.discrete_g_slice(&model.grid, beta, &mode.label.p) * chi[k])
            .sum();
        let bound = g.abs() * constants.c0 / p * slices * (constants.m_bound + constants.m_p);
        let b_norm = map_norm(&b_psi) / libm::sqrt(mode.weight);
        rows.push(PullThroughRow {
            mode: k,
            p_norm: p,
            residual: res,
            b_norm,
            bound,
            within_bound: b_norm <= bound * (1.0 + 1e-12) + 1e-15,
        });
    }
    PullThroughReport {
        g,
        e0,
        eigen_residual,
        max_residual: rows.iter().fold(0.0, |m: f64, r| m.max(r.residual)),
        violations: rows.iter().filter(|r| !r.within_bound).count(),
        rows,
    }
}

/// Residual tolerance of the pull-through identity for a given solver
/// tolerance.
pub fn pull_through_tolerance(solver_tol: f64) -> f64 {
    10.0 * (solver_tol + DROP_TOL)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SoftNumberRow {
    pub g: f64,
    /// `⟨ψ, N_ν ψ⟩`.
    pub n_nu: f64,
    /// `Σ_k ‖b_kψ‖²`, the same quantity through the ladder operators.
    pub n_nu_ladder: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SoftNumberReport {
    pub rows: Vec<SoftNumberRow>,
    pub slope: f64,
    /// `max ⟨N_ν⟩/g²`, the estimate of `C(F,G)²`.
    pub c_squared: f64,
    pub pass: bool,
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| libm::log(*x)).collect();
    let ly: Vec<f64> = ys.iter().map(|y| libm::log(*y)).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub const SOFT_SLOPE_MIN: f64 = 1.9;

pub fn soft_number_scaling(
    model: &Model,
    basis: &FockBasis,
    g_list: &[f64],
    sigma: Option<f64>,
    opts: &EigenOptions,
) -> Result<SoftNumberReport> {
    let n_op = number_operator(basis, Species::Neutrino, |_| true);
    let mut rows = Vec::new();
    for &g in g_list {
        let h = assemble_h(model, basis, g, sigma)?;
        let eig = ground_state(&h, &EigenOptions { k: 1, ..*opts })?;
        let psi = &eig.vectors[0];
        let n_nu = dot(psi, &n_op.apply_vec(psi)).re;
        let state = to_state_map(basis, psi);
        let n_nu_ladder: f64 = (0..model.grid.neutrino.len())
            .map(|k| {
                let m = map_norm(&apply_ladder_map(&state, Species::Neutrino, k, Ladder::Annihilate));
                m * m
            })
            .sum();
        rows.push(SoftNumberRow {
            g,
            n_nu,
            n_nu_ladder,
            ratio: if g != 0.0 { n_nu / (g * g) } else { 0.0 },
        });
    }
    let fit: Vec<&SoftNumberRow> = rows.iter().filter(|r| r.g > 0.0 && r.n_nu > 0.0).collect();
    let slope = if fit.len() >= 2 {
        let xs: Vec<f64> = fit.iter().map(|r| r.g).collect();
        let ys: Vec<f64> = fit.iter().map(|r| r.n_nu).collect();
        log_log_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    let c_squared = rows.iter().fold(0.0, |m: f64, r| m.max(r.ratio));
    Ok(SoftNumberReport {
        pass: slope >= SOFT_SLOPE_MIN && c_squared.is_finite(),
        rows,
        slope,
        c_squared,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DegeneracyReport {
    pub values: Vec<f64>,
    pub multiplicity: usize,
}

/// Multiplicity of the lowest eigenvalue from the `k ≥ 3` lowest pairs.
pub fn degeneracy_check(h: &SparseOperator, tol_cluster: f64, opts: &EigenOptions) -> Result<DegeneracyReport> {
    let eig = ground_state(h, &EigenOptions { k: opts.k.max(3), ..*opts })?;
    Ok(DegeneracyReport {
        multiplicity: multiplicity(&eig.values, tol_cluster),
        values: eig.values,
    })
}

/// Smallest `⟨ψ, Hψ⟩ − E₀` over random unit vectors; non-negative when the
/// variational principle holds.
pub fn variational_margin(h: &SparseOperator, e0: f64, trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..trials {
        let v = random_unit(h.dim(), &mut rng);
        let e = dot(&v, &h.apply_vec(&v)).re;
        worst = worst.min(e - e0);
    }
    worst
}

/// Largest violation of midpoint concavity `E(g_{i}) ≥ (E(g_{i−1}) + E(g_{i+1}))/2`
/// on an evenly spaced `g` grid; non-positive when concave.
pub fn concavity_violation(e: &[f64]) -> f64 {
    e.windows(3)
        .map(|w| 0.5 * (w[0] + w[2]) - w[1])
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SparseOperator {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, C64::from(2.0)));
            if i + 1 < n {
                t.push((i, i + 1, C64::new(0.0, -1.0)));
                t.push((i + 1, i, C64::new(0.0, 1.0)));
            }
        }
        SparseOperator::from_triplets(n, t)
    }

    #[test]
    fn lanczos_matches_dense() {
        let h = laplacian(60);
        let opts = EigenOptions { k: 5, tol: 1e-11, ..Default::default() };
        let l = lanczos_lowest(&h, &opts).unwrap();
        let d = dense_lowest(&h, 5);
        for (a, b) in l.values.iter().zip(&d.values) {
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn locking_sees_multiplicity() {
        let h = SparseOperator::diagonal(&[0.0, 1.0, 2.0]);
        let d = h.direct_sum(&h);
        let r = degeneracy_check(&d, CLUSTER_TOL, &EigenOptions::default()).unwrap();
        assert_eq!(r.multiplicity, 2);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [0.1, 0.2, 0.4];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x * x).collect();
        assert!((log_log_slope(&xs, &ys) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn energy_bound_linear_in_g() {
        let norms = crate::kernels::KernelNorms { f: [1.0, 1.0], g: [1.0, 1.0] };
        let m = crate::params::Masses { m_e: 1.0, m_p: 2.0, m_n: 2.2 };
        let c = crate::kernels::derive_constants(&norms, 1.0, &m, 1.27, 0.5).unwrap();
        assert_eq!(c.energy_bound(0.0), 0.0);
        assert!((c.energy_bound(2e-3) - 2.0 * c.energy_bound(1e-3)).abs() < 1e-15);
        assert!(energy_bound_check(0.0, &c, 0.0, 0.0).pass);
    }
}
