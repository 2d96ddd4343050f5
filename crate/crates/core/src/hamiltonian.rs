//! Free and interaction Hamiltonians as sparse matrices on a Fock basis, the
//! action of `H` on states outside a basis, and the relative-bound check.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fock::{
    apply_ladder, apply_word, interaction_words, reachable_closure, FockBasis, FockState, Ladder, ModeGrid, SectorCaps,
    Species, SPECIES,
};
use crate::kernels::{derive_constants, ir_cutoff_factor, KernelNorms, KernelSpec, ModelConstants};
use crate::params::ModelParams;
use crate::sparse::{norm, LinearOperator, SparseOperator};
use crate::vertex::{amplitude_tables, AmplitudeTable, Process, VertexContext, PROCESSES};
use crate::C64;

/// Relative threshold below which discrete coefficients are dropped.
pub const DROP_TOL: f64 = 1e-14;
/// Largest tolerated `|H_ij − conj(H_ji)|`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A discretized model: parameters, grid, kernels and the discrete
/// coefficients `amplitude × √(w₁w₂w₃w₄)` of the four processes.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: ModelParams,
    pub grid: ModeGrid,
    pub spec: KernelSpec,
    pub coeffs: [AmplitudeTable; 4],
    max_coeff: f64,
}

impl Model {
    pub fn new(params: ModelParams, grid: ModeGrid, spec: KernelSpec, quad_order: usize) -> Result<Self> {
        params.validate()?;
        spec.validate()?;
        let ctx = VertexContext::new(&params, quad_order)?;
        Self::with_context(&ctx, params, grid, spec)
    }

    pub fn with_context(ctx: &VertexContext, params: ModelParams, grid: ModeGrid, spec: KernelSpec) -> Result<Self> {
        let mut coeffs = amplitude_tables(ctx, &spec, &grid)?;
        for t in coeffs.iter_mut() {
            let (s1, s2) = match t.process {
                Process::One | Process::Two => (Species::Electron, Species::Proton),
                _ => (Species::Positron, Species::Antiproton),
            };
            let [n1, n2, n3, n4] = t.dims;
            for i1 in 0..n1 {
                for i2 in 0..n2 {
                    for i3 in 0..n3 {
                        for i4 in 0..n4 {
                            let w = grid.weight(s1, i1)
                                * grid.weight(s2, i2)
                                * grid.weight(Species::Neutron, i3)
                                * grid.weight(Species::Neutrino, i4);
                            let idx = t.index(i1, i2, i3, i4);
                            t.values[idx] *= libm::sqrt(w);
                        }
                    }
                }
            }
        }
        let max_coeff = coeffs.iter().fold(0.0f64, |m, t| m.max(t.max_abs()));
        Ok(Model {
            params,
            grid,
            spec,
            coeffs,
            max_coeff,
        })
    }

    pub fn max_coeff(&self) -> f64 {
        self.max_coeff
    }

    pub fn omega(&self, species: Species, idx: usize) -> f64 {
        self.grid.omega(&self.params, species, idx)
    }

    /// Free energy `Σ ω` of the occupied modes.
    pub fn free_energy(&self, state: &FockState) -> f64 {
        let mut e = 0.0;
        for sp in SPECIES {
            let mut w = state.0[sp as usize];
            while w != 0 {
                let i = w.trailing_zeros() as usize;
                e += self.omega(sp, i);
                w &= w - 1;
            }
        }
        e
    }

    /// `χ̃^σ(p₄)` per neutrino mode.
    pub fn cutoff_factors(&self, sigma: Option<f64>) -> Vec<f64> {
        self.grid
            .neutrino
            .iter()
            .map(|m| ir_cutoff_factor(sigma, &m.label.p))
            .collect()
    }

    /// Kernel norms on the grid.
    pub fn norms(&self) -> KernelNorms {
        self.spec.discrete_norms(&self.grid)
    }

    pub fn constants(&self, delta: f64) -> Result<ModelConstants> {
        derive_constants(
            &self.norms(),
            self.spec.discrete_ktilde(&self.grid),
            &self.params.masses,
            self.params.g_a,
            delta,
        )
    }

    /// Sector reachable from the vacuum.
    pub fn vacuum_sector(&self, caps: &SectorCaps) -> Result<FockBasis> {
        reachable_closure(&self.grid, &[FockState::vacuum()], caps, None)
    }

    /// Sector reachable from the vacuum and from every one-neutrino state
    /// admitted by `caps`.
    pub fn vacuum_and_neutrino_sector(&self, caps: &SectorCaps) -> Result<FockBasis> {
        let mut seeds = vec![FockState::vacuum()];
        for i in 0..self.grid.neutrino.len() {
            if caps.allowed[Species::Neutrino as usize] >> i & 1 == 1 {
                seeds.push(FockState::vacuum().with(Species::Neutrino, i));
            }
        }
        reachable_closure(&self.grid, &seeds, caps, None)
    }
}

fn bits(w: u64) -> impl Iterator<Item = usize> {
    let mut w = w;
    core::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let i = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i)
        }
    })
}

fn complement(w: u64, count: usize) -> u64 {
    let full = if count == 64 { u64::MAX } else { (1u64 << count) - 1 };
    !w & full
}

/// Calls `f(target, value)` for every term of `H_I |state⟩` from the selected
/// processes, with `chi` the per-neutrino-mode cutoff factors. Terms whose
/// coefficient is below the drop threshold are skipped.
pub fn for_each_interaction_term<F: FnMut(FockState, C64)>(
    model: &Model,
    chi: &[f64],
    processes: [bool; 4],
    state: &FockState,
    mut f: F,
) {
    let counts = model.grid.counts();
    let drop = DROP_TOL * model.max_coeff;
    let occ = |s: Species| state.0[s as usize];
    let free = |s: Species| complement(state.0[s as usize], counts[s as usize]);
    for p in PROCESSES {
        if !processes[p as usize] {
            continue;
        }
        let (s1, s2) = match p {
            Process::One | Process::Two => (Species::Electron, Species::Proton),
            _ => (Species::Positron, Species::Antiproton),
        };
        // (charged₁, charged₂, neutron, neutrino) masks of modes the word can act on
        let masks = match p {
            Process::One => [free(s1), free(s2), occ(Species::Neutron), occ(Species::Neutrino)],
            Process::Two => [occ(s1), occ(s2), free(Species::Neutron), free(Species::Neutrino)],
            Process::Three => [free(s1), free(s2), free(Species::Neutron), free(Species::Neutrino)],
            Process::Four => [occ(s1), occ(s2), occ(Species::Neutron), occ(Species::Neutrino)],
        };
        let table = &model.coeffs[p as usize];
        for i4 in bits(masks[3]) {
            let cut = chi[i4];
            if cut == 0.0 {
                continue;
            }
            for i1 in bits(masks[0]) {
                for i2 in bits(masks[1]) {
                    for i3 in bits(masks[2]) {
                        let c = table.get(i1, i2, i3, i4);
                        if c.norm() <= drop {
                            continue;
                        }
                        let word = interaction_words(i1, i2, i3, i4)[p as usize];
                        let (next, sign) = apply_word(*state, &word);
                        if sign != 0 {
                            f(next, c * (sign as f64 * cut));
                        }
                    }
                }
            }
        }
    }
}

pub fn assemble_h0(model: &Model, basis: &FockBasis) -> SparseOperator {
    let d: Vec<f64> = basis.states().iter().map(|s| model.free_energy(s)).collect();
    SparseOperator::diagonal(&d)
}

/// Interaction from the selected processes, projected onto the basis.
pub fn assemble_hi_processes(
    model: &Model,
    basis: &FockBasis,
    sigma: Option<f64>,
    processes: [bool; 4],
) -> Result<SparseOperator> {
    let chi = model.cutoff_factors(sigma);
    let mut triplets = Vec::new();
    for (col, state) in basis.states().iter().enumerate() {
        for_each_interaction_term(model, &chi, processes, state, |next, v| {
            if let Some(row) = basis.index_of(&next) {
                triplets.push((row, col, v));
            }
        });
    }
    let mut op = SparseOperator::from_triplets(basis.len(), triplets);
    let full = processes.iter().all(|&b| b) || processes == [true, true, false, false] || processes == [false, false, true, true];
    if full {
        let dev = op.max_hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        op.hermitian = true;
    } else {
        op.hermitian = false;
    }
    Ok(op)
}

/// `H_I` (or `H_{I,σ}` when `sigma` is given), checked for Hermiticity.
pub fn assemble_hi(model: &Model, basis: &FockBasis, sigma: Option<f64>) -> Result<SparseOperator> {
    assemble_hi_processes(model, basis, sigma, [true; 4])
}

/// `H₀ + g H_I`, with the infrared cutoff when `sigma` is given.
pub fn assemble_h(model: &Model, basis: &FockBasis, g: f64, sigma: Option<f64>) -> Result<SparseOperator> {
    let h0 = assemble_h0(model, basis);
    let hi = assemble_hi(model, basis, sigma)?;
    Ok(h0.combine(1.0, &hi, g))
}

/// A vector on arbitrary Fock states.
pub type StateMap = BTreeMap<FockState, C64>;

pub fn to_state_map(basis: &FockBasis, v: &[C64]) -> StateMap {
    basis
        .states()
        .iter()
        .zip(v)
        .filter(|(_, c)| **c != C64::new(0.0, 0.0))
        .map(|(s, c)| (*s, *c))
        .collect()
}

pub fn map_norm(m: &StateMap) -> f64 {
    libm::sqrt(m.values().map(|c| c.norm_sqr()).sum())
}

/// `a − b`.
pub fn map_sub(a: &StateMap, b: &StateMap) -> StateMap {
    let mut out = a.clone();
    for (s, c) in b {
        *out.entry(*s).or_default() -= c;
    }
    out
}

/// Applies one ladder operator.
pub fn apply_ladder_map(m: &StateMap, species: Species, idx: usize, kind: Ladder) -> StateMap {
    let mut out = StateMap::new();
    for (s, c) in m {
        let (next, sign) = apply_ladder(*s, species, idx, kind);
        if sign != 0 {
            *out.entry(next).or_default() += c * sign as f64;
        }
    }
    out
}

/// `(H₀ + g H_{I,σ} + shift)` on the full finite-mode Fock space.
pub fn apply_h_map(model: &Model, g: f64, chi: &[f64], shift: f64, m: &StateMap) -> StateMap {
    let mut out = StateMap::new();
    for (s, c) in m {
        *out.entry(*s).or_default() += c * (model.free_energy(s) + shift);
        if g != 0.0 {
            for_each_interaction_term(model, chi, [true; 4], s, |next, v| {
                *out.entry(next).or_default() += c * v * g;
            });
        }
    }
    out
}

/// `(V⁽¹⁾(ξ₄) + V⁽²⁾(ξ₄)) m`: the terms of `H_I` containing `b*(ξ₄)` with that
/// operator stripped, `V⁽¹⁾ = Σ c₂ b*_n b_p b_e` and `V⁽²⁾ = Σ c₃ b*_n b*_p̄ b*_ē`.
pub fn apply_v_map(model: &Model, chi: &[f64], i4: usize, m: &StateMap) -> StateMap {
    let counts = model.grid.counts();
    let drop = DROP_TOL * model.max_coeff;
    let mut out = StateMap::new();
    let cut = chi[i4];
    if cut == 0.0 {
        return out;
    }
    for (p, s1, s2, k2) in [
        (Process::Two, Species::Electron, Species::Proton, Ladder::Annihilate),
        (Process::Three, Species::Positron, Species::Antiproton, Ladder::Create),
    ] {
        let table = &model.coeffs[p as usize];
        for i1 in 0..counts[s1 as usize] {
            for i2 in 0..counts[s2 as usize] {
                for i3 in 0..counts[Species::Neutron as usize] {
                    let c = table.get(i1, i2, i3, i4);
                    if c.norm() <= drop {
                        continue;
                    }
                    let word = [(Species::Neutron, i3, Ladder::Create), (s2, i2, k2), (s1, i1, k2)];
                    for (s, a) in m {
                        let (next, sign) = apply_word(*s, &word);
                        if sign != 0 {
                            *out.entry(next).or_default() += a * c * (sign as f64 * cut);
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RelativeBoundReport {
    pub samples: usize,
    pub violations: usize,
    /// Largest `‖H_Iψ‖ / (K(C‖H₀ψ‖ + B‖ψ‖))`.
    pub max_ratio: f64,
    /// The same ratio at the vacuum, when it is in the basis.
    pub vacuum_ratio: Option<f64>,
    pub pass: bool,
}

/// Random complex Gaussian unit vectors, followed by the vacuum and the
/// basis vectors of lowest and highest free energy.
pub fn bound_samples(basis: &FockBasis, h0: &SparseOperator, trials: usize, seed: u64) -> Vec<Vec<C64>> {
    let n = basis.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials + 3);
    for _ in 0..trials {
        let mut v: Vec<C64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im)
            })
            .collect();
        let s = norm(&v);
        v.iter_mut().for_each(|x| *x /= s);
        out.push(v);
    }
    let unit = |i: usize| {
        let mut v = vec![C64::default(); n];
        v[i] = C64::from(1.0);
        v
    };
    if let Some(i) = basis.index_of(&FockState::vacuum()) {
        out.push(unit(i));
    }
    let d = h0.diag();
    if n > 0 {
        let (mut lo, mut hi) = (0, 0);
        for (i, &e) in d.iter().enumerate() {
            if e < d[lo] {
                lo = i;
            }
            if e > d[hi] {
                hi = i;
            }
        }
        out.push(unit(lo));
        out.push(unit(hi));
    }
    out
}

/// Checks `‖H_Iψ‖ ≤ K(C‖H₀ψ‖ + B‖ψ‖)` on every sample.
pub fn relative_bound_check(
    basis: &FockBasis,
    h0: &SparseOperator,
    hi: &SparseOperator,
    constants: &ModelConstants,
    samples: &[Vec<C64>],
) -> RelativeBoundReport {
    let vac = basis.index_of(&FockState::vacuum());
    let mut max_ratio: f64 = 0.0;
    let mut violations = 0;
    let mut vacuum_ratio = None;
    for v in samples {
        let lhs = norm(&hi.apply_vec(v));
        let rhs = constants.k * (constants.c * norm(&h0.apply_vec(v)) + constants.b * norm(v));
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if lhs > rhs {
            violations += 1;
        }
        max_ratio = max_ratio.max(ratio);
        if let Some(i) = vac {
            if v[i] == C64::from(1.0) && norm(v) == 1.0 {
                vacuum_ratio = Some(ratio);
            }
        }
    }
    RelativeBoundReport {
        samples: samples.len(),
        violations,
        max_ratio,
        vacuum_ratio,
        pass: violations == 0,
    }
}

/// Reported, not gated: the per-process form
/// `‖H_I^{(j)}ψ‖ ≤ C₀‖F^{(β)}‖‖G^{(β)}‖‖(H₀ + m_p)ψ‖` and the same with
/// `(H₀ + m_p)^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TermBoundReport {
    pub per_term_max_ratio: [f64; 4],
    pub sqrt_form_max_ratio: [f64; 4],
}

pub fn term_bound_ratios(
    model: &Model,
    basis: &FockBasis,
    h0: &SparseOperator,
    constants: &ModelConstants,
    samples: &[Vec<C64>],
) -> Result<TermBoundReport> {
    let norms = model.norms();
    let m_p = model.params.masses.m_p;
    let d = h0.diag();
    let mut per = [0.0f64; 4];
    let mut sq = [0.0f64; 4];
    for p in PROCESSES {
        let mut mask = [false; 4];
        mask[p as usize] = true;
        let term = assemble_hi_processes(model, basis, None, mask)?;
        let beta = p.beta();
        let pref = constants.c0 * norms.f[beta] * norms.g[beta];
        for v in samples {
            let lhs = norm(&term.apply_vec(v));
            let lin: f64 = libm::sqrt(v.iter().zip(&d).map(|(x, e)| x.norm_sqr() * (e + m_p) * (e + m_p)).sum());
            let half: f64 = libm::sqrt(v.iter().zip(&d).map(|(x, e)| x.norm_sqr() * (e + m_p)).sum());
            if pref > 0.0 {
                per[p as usize] = per[p as usize].max(lhs / (pref * lin));
                sq[p as usize] = sq[p as usize].max(lhs / (pref * half));
            }
        }
    }
    Ok(TermBoundReport {
        per_term_max_ratio: per,
        sqrt_form_max_ratio: sq,
    })
}

/// `‖A‖_F` of the difference of two operators on the same basis.
pub fn frobenius_distance(a: &SparseOperator, b: &SparseOperator) -> f64 {
    a.combine(1.0, b, -1.0).frobenius_norm()
}

/// Applies an operator to a dense vector.
pub fn apply(op: &dyn LinearOperator, v: &[C64]) -> Vec<C64> {
    let mut y = vec![C64::default(); op.dim()];
    op.apply(v, &mut y);
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_grid, enumerate_basis, GridConfig};
    use crate::vertex::DEFAULT_QUAD_ORDER;

    fn one_mode_model() -> Model {
        let mut cfg = GridConfig::toy(vec![0.5, 1.5], 1);
        cfg.n_landau = 0;
        cfg.single_helicity = true;
        let grid = build_grid(&cfg).unwrap();
        Model::new(ModelParams::toy(), grid, KernelSpec::toy(0.0), DEFAULT_QUAD_ORDER).unwrap()
    }

    #[test]
    fn free_energies() {
        let m = one_mode_model();
        let vac = FockState::vacuum();
        assert_eq!(m.free_energy(&vac), 0.0);
        let e = vac.with(Species::Electron, 0);
        assert!((m.free_energy(&e) - 1.0).abs() < 1e-15);
        let ep = e.with(Species::Proton, 0);
        assert!((m.free_energy(&ep) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn full_toy_basis_hermitian() {
        let m = one_mode_model();
        let basis = enumerate_basis(&SectorCaps::pauli(&m.grid), |_| true).unwrap();
        assert_eq!(basis.len(), 64);
        let hi = assemble_hi(&m, &basis, None).unwrap();
        assert!(hi.max_hermitian_deviation() <= 1e-12);
        let vac = basis.index_of(&FockState::vacuum()).unwrap();
        let mut e = vec![C64::default(); 64];
        e[vac] = C64::from(1.0);
        let he = hi.apply_vec(&e);
        assert!(he[vac].norm() == 0.0);
        assert!(norm(&he) > 0.0);
    }

    #[test]
    fn huge_cutoff_kills_interaction() {
        let m = one_mode_model();
        let basis = enumerate_basis(&SectorCaps::pauli(&m.grid), |_| true).unwrap();
        let hi = assemble_hi(&m, &basis, Some(10.0)).unwrap();
        assert_eq!(hi.nnz(), 0);
        let h = assemble_hi(&m, &basis, Some(0.0)).unwrap();
        assert_eq!(h, assemble_hi(&m, &basis, None).unwrap());
    }
}
