//! Mode grids, the truncated fermionic Fock basis and ladder operators.
//!
//! A discretized mode `k` stands for a cell of weight `w_k` in the continuous
//! label space. The discrete operator `b_k` is `√w_k b(ξ_k)`, so the discrete
//! anticommutators are exact Kronecker deltas.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::f64::consts::PI;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::free_spinors::{Helicity, Momentum3};
use crate::landau_spinors::{landau_energy, ChargedMode};
use crate::params::ModelParams;
use crate::sparse::SparseOperator;

/// Species slots in the global ordering used for anticommutation signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Species {
    Electron = 0,
    Positron = 1,
    Proton = 2,
    Antiproton = 3,
    Neutron = 4,
    Neutrino = 5,
}

pub const SPECIES: [Species; 6] = [
    Species::Electron,
    Species::Positron,
    Species::Proton,
    Species::Antiproton,
    Species::Neutron,
    Species::Neutrino,
];

impl Species {
    pub fn name(self) -> &'static str {
        match self {
            Species::Electron => "electron",
            Species::Positron => "positron",
            Species::Proton => "proton",
            Species::Antiproton => "antiproton",
            Species::Neutron => "neutron",
            Species::Neutrino => "neutrino",
        }
    }

    /// The `(s, n = 0)` spin label whose spinor vanishes for this species.
    fn forbidden_ground_spin(self) -> Option<i8> {
        match self {
            Species::Electron | Species::Antiproton => Some(1),
            Species::Positron | Species::Proton => Some(-1),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMode<L> {
    pub label: L,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutronLabel {
    pub p: Momentum3,
    pub lambda: Helicity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutrinoLabel {
    pub p: Momentum3,
    pub shell: usize,
}

/// A uniform one-dimensional grid of `count` points with the given spacing,
/// centered on zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub count: usize,
    pub spacing: f64,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        let mid = (self.count as f64 - 1.0) / 2.0;
        (0..self.count).map(|i| (i as f64 - mid) * self.spacing).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub n_landau: u32,
    pub charged_p1: Axis,
    pub charged_p3: Axis,
    /// Per-axis grid of the neutron momentum cube.
    pub neutron: Axis,
    /// Keep only helicity +½ for the neutron.
    pub single_helicity: bool,
    /// Ascending radii bounding the neutrino shells.
    pub neutrino_edges: Vec<f64>,
    pub neutrino_directions: usize,
    pub mode_cap: usize,
}

pub const DEFAULT_MODE_CAP: usize = 64;

impl GridConfig {
    /// One point per continuous axis and a single Landau level.
    pub fn toy(neutrino_edges: Vec<f64>, neutrino_directions: usize) -> Self {
        GridConfig {
            n_landau: 1,
            charged_p1: Axis { count: 1, spacing: 1.0 },
            charged_p3: Axis { count: 1, spacing: 1.0 },
            neutron: Axis { count: 1, spacing: 1.0 },
            single_helicity: false,
            neutrino_edges,
            neutrino_directions,
            mode_cap: DEFAULT_MODE_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    pub electron: Vec<GridMode<ChargedMode>>,
    pub positron: Vec<GridMode<ChargedMode>>,
    pub proton: Vec<GridMode<ChargedMode>>,
    pub antiproton: Vec<GridMode<ChargedMode>>,
    pub neutron: Vec<GridMode<NeutronLabel>>,
    pub neutrino: Vec<GridMode<NeutrinoLabel>>,
    pub neutrino_edges: Vec<f64>,
}

impl ModeGrid {
    pub fn count(&self, species: Species) -> usize {
        match species {
            Species::Electron => self.electron.len(),
            Species::Positron => self.positron.len(),
            Species::Proton => self.proton.len(),
            Species::Antiproton => self.antiproton.len(),
            Species::Neutron => self.neutron.len(),
            Species::Neutrino => self.neutrino.len(),
        }
    }

    pub fn counts(&self) -> [usize; 6] {
        SPECIES.map(|s| self.count(s))
    }

    pub fn charged(&self, species: Species) -> &[GridMode<ChargedMode>] {
        match species {
            Species::Electron => &self.electron,
            Species::Positron => &self.positron,
            Species::Proton => &self.proton,
            Species::Antiproton => &self.antiproton,
            _ => &[],
        }
    }

    pub fn weight(&self, species: Species, idx: usize) -> f64 {
        match species {
            Species::Neutron => self.neutron[idx].weight,
            Species::Neutrino => self.neutrino[idx].weight,
            s => self.charged(s)[idx].weight,
        }
    }

    /// Single-particle energy `ω(ξ)` of a grid mode.
    pub fn omega(&self, params: &ModelParams, species: Species, idx: usize) -> f64 {
        let m = &params.masses;
        match species {
            Species::Electron | Species::Positron => {
                let l = &self.charged(species)[idx].label;
                landau_energy(m.m_e, l.n, l.p3, params.eb)
            }
            Species::Proton | Species::Antiproton => {
                let l = &self.charged(species)[idx].label;
                landau_energy(m.m_p, l.n, l.p3, params.eb)
            }
            Species::Neutron => libm::sqrt(self.neutron[idx].label.p.norm_sqr() + m.m_n * m.m_n),
            Species::Neutrino => self.neutrino[idx].label.p.norm(),
        }
    }

    /// Mask of neutrino modes with `|p| ≥ sigma`.
    pub fn neutrino_mask_above(&self, sigma: f64) -> u64 {
        let mut mask = 0u64;
        for (i, m) in self.neutrino.iter().enumerate() {
            if m.label.p.norm() >= sigma {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// Checks that `sigma` is one of the shell edges, so that no shell
    /// straddles it.
    pub fn check_alignment(&self, n: usize, sigma: f64) -> Result<()> {
        let ok = self
            .neutrino_edges
            .iter()
            .any(|&e| libm::fabs(e - sigma) <= 1e-12 * sigma.max(1.0));
        if ok {
            Ok(())
        } else {
            Err(Error::ShellAlignment { n, sigma })
        }
    }
}

fn charged_grid(cfg: &GridConfig, species: Species) -> Vec<GridMode<ChargedMode>> {
    let weight = cfg.charged_p1.spacing * cfg.charged_p3.spacing;
    let forbidden = species.forbidden_ground_spin();
    let mut out = Vec::new();
    for n in 0..=cfg.n_landau {
        for s in [-1i8, 1] {
            if n == 0 && forbidden == Some(s) {
                continue;
            }
            for &p1 in &cfg.charged_p1.points() {
                for &p3 in &cfg.charged_p3.points() {
                    out.push(GridMode {
                        label: ChargedMode::new(s, n, p1, p3),
                        weight,
                    });
                }
            }
        }
    }
    out
}

/// Fibonacci-sphere directions with an azimuthal offset so that no direction
/// lies on the p¹ = p² = 0 axis.
fn directions(count: usize, offset: f64) -> Vec<[f64; 3]> {
    let golden = PI * (3.0 - libm::sqrt(5.0));
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = libm::sqrt((1.0 - z * z).max(0.0));
            let phi = offset + golden * k as f64;
            [r * libm::cos(phi), r * libm::sin(phi), z]
        })
        .collect()
}

pub fn build_grid(cfg: &GridConfig) -> Result<ModeGrid> {
    if cfg.charged_p1.count == 0 || cfg.charged_p3.count == 0 || cfg.neutron.count == 0 {
        return Err(Error::Param("grid axes need at least one point".into()));
    }
    if cfg.neutrino_directions == 0 || cfg.neutrino_edges.len() < 2 {
        return Err(Error::Param("neutrino grid needs at least one shell and one direction".into()));
    }
    if cfg.neutrino_edges[0] <= 0.0 || cfg.neutrino_edges.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Param("neutrino shell edges must be positive and increasing".into()));
    }
    let cap = cfg.mode_cap.min(64);

    let neutron_weight = libm::pow(cfg.neutron.spacing, 3.0);
    let pts = cfg.neutron.points();
    let mut neutron = Vec::new();
    for &a in &pts {
        for &b in &pts {
            for &c in &pts {
                let helicities: &[Helicity] = if cfg.single_helicity {
                    &[Helicity::Plus]
                } else {
                    &[Helicity::Plus, Helicity::Minus]
                };
                for &lambda in helicities {
                    neutron.push(GridMode {
                        label: NeutronLabel {
                            p: Momentum3::new(a, b, c),
                            lambda,
                        },
                        weight: neutron_weight,
                    });
                }
            }
        }
    }

    let mut neutrino = Vec::new();
    for (shell, w) in cfg.neutrino_edges.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let radius = 0.5 * (a + b);
        let volume = 4.0 * PI / 3.0 * (b * b * b - a * a * a);
        for d in directions(cfg.neutrino_directions, 0.3 + 0.7 * shell as f64) {
            neutrino.push(GridMode {
                label: NeutrinoLabel {
                    p: Momentum3::new(radius * d[0], radius * d[1], radius * d[2]),
                    shell,
                },
                weight: volume / cfg.neutrino_directions as f64,
            });
        }
    }

    let grid = ModeGrid {
        electron: charged_grid(cfg, Species::Electron),
        positron: charged_grid(cfg, Species::Positron),
        proton: charged_grid(cfg, Species::Proton),
        antiproton: charged_grid(cfg, Species::Antiproton),
        neutron,
        neutrino,
        neutrino_edges: cfg.neutrino_edges.clone(),
    };
    for s in SPECIES {
        if grid.count(s) > cap {
            return Err(Error::ModeCap {
                species: s.name(),
                count: grid.count(s),
                cap,
            });
        }
    }
    Ok(grid)
}

/// Occupation bitstrings, one word per species slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FockState(pub [u64; 6]);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
}

impl FockState {
    pub fn vacuum() -> Self {
        FockState([0; 6])
    }

    pub fn is_occupied(&self, species: Species, idx: usize) -> bool {
        self.0[species as usize] >> idx & 1 == 1
    }

    pub fn count(&self, species: Species) -> u32 {
        self.0[species as usize].count_ones()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    pub fn with(mut self, species: Species, idx: usize) -> Self {
        self.0[species as usize] |= 1 << idx;
        self
    }

    /// Number of occupied modes strictly before `(species, idx)` in the
    /// global ordering.
    fn preceding(&self, species: Species, idx: usize) -> u32 {
        let s = species as usize;
        let before: u32 = self.0[..s].iter().map(|w| w.count_ones()).sum();
        let mask = (1u64 << idx) - 1;
        before + (self.0[s] & mask).count_ones()
    }
}

/// Applies `b*` or `b` of mode `idx` of `species`. Returns the new state and
/// the sign, which is 0 when the action vanishes by Pauli exclusion.
pub fn apply_ladder(state: FockState, species: Species, idx: usize, kind: Ladder) -> (FockState, i8) {
    let occupied = state.is_occupied(species, idx);
    let blocked = match kind {
        Ladder::Create => occupied,
        Ladder::Annihilate => !occupied,
    };
    if blocked {
        return (state, 0);
    }
    let sign = if state.preceding(species, idx) % 2 == 0 { 1 } else { -1 };
    let mut out = state;
    out.0[species as usize] ^= 1 << idx;
    (out, sign)
}

/// Applies a product of ladder operators, rightmost first.
pub fn apply_word(state: FockState, word: &[(Species, usize, Ladder)]) -> (FockState, i8) {
    let mut s = state;
    let mut sign = 1i8;
    for &(sp, idx, kind) in word.iter().rev() {
        let (next, sg) = apply_ladder(s, sp, idx, kind);
        if sg == 0 {
            return (state, 0);
        }
        sign *= sg;
        s = next;
    }
    (s, sign)
}

/// Particle-number caps and mode masks defining a truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorCaps {
    pub max_per_species: [u32; 6],
    /// Modes that may be occupied, per species.
    pub allowed: [u64; 6],
    pub max_dim: usize,
}

pub const DEFAULT_MAX_DIM: usize = 200_000;

impl SectorCaps {
    /// Pauli exclusion as the only cap, all modes allowed.
    pub fn pauli(grid: &ModeGrid) -> Self {
        let counts = grid.counts();
        SectorCaps {
            max_per_species: counts.map(|c| c as u32),
            allowed: counts.map(|c| if c == 64 { u64::MAX } else { (1u64 << c) - 1 }),
            max_dim: DEFAULT_MAX_DIM,
        }
    }

    pub fn with_neutrino_mask(mut self, mask: u64) -> Self {
        self.allowed[Species::Neutrino as usize] &= mask;
        self
    }

    fn admits(&self, state: &FockState) -> bool {
        (0..6).all(|s| state.0[s] & !self.allowed[s] == 0 && state.0[s].count_ones() <= self.max_per_species[s])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl FockBasis {
    /// Sorts and deduplicates.
    pub fn from_states(mut states: Vec<FockState>) -> Self {
        states.sort();
        states.dedup();
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        FockBasis { states, index }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> FockState {
        self.states[i]
    }

    pub fn index_of(&self, s: &FockState) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Average occupation of each species over the basis states.
    pub fn occupancy(&self) -> [f64; 6] {
        let mut acc = [0.0; 6];
        for s in &self.states {
            for sp in SPECIES {
                acc[sp as usize] += s.count(sp) as f64;
            }
        }
        let n = self.states.len().max(1) as f64;
        acc.map(|a| a / n)
    }
}

fn subsets(allowed: u64, cap: u32) -> Vec<u64> {
    // enumerate submasks of `allowed` in increasing order
    let mut out = Vec::new();
    let mut sub = 0u64;
    loop {
        if sub.count_ones() <= cap {
            out.push(sub);
        }
        if sub == allowed {
            break;
        }
        sub = (sub.wrapping_sub(allowed)) & allowed;
    }
    out.sort();
    out
}

/// All occupation patterns admitted by `caps` and accepted by `filter`.
pub fn enumerate_basis<F: Fn(&FockState) -> bool>(caps: &SectorCaps, filter: F) -> Result<FockBasis> {
    let per: Vec<Vec<u64>> = (0..6).map(|s| subsets(caps.allowed[s], caps.max_per_species[s])).collect();
    let mut states = Vec::new();
    let mut cursor = [0usize; 6];
    'outer: loop {
        let st = FockState(core::array::from_fn(|s| per[s][cursor[s]]));
        if filter(&st) {
            states.push(st);
            if states.len() > caps.max_dim {
                return Err(Error::BasisCap { cap: caps.max_dim });
            }
        }
        for s in (0..6).rev() {
            cursor[s] += 1;
            if cursor[s] < per[s].len() {
                continue 'outer;
            }
            cursor[s] = 0;
        }
        break;
    }
    Ok(FockBasis::from_states(states))
}

/// The four operator monomials of the interaction as ladder words (leftmost
/// operator first): e⁻ p⁺ ← n ν, its adjoint, the pair creation
/// ν n p⁻ e⁺ ← Ω and its adjoint.
pub fn interaction_words(i1: usize, i2: usize, i3: usize, i4: usize) -> [[(Species, usize, Ladder); 4]; 4] {
    use Ladder::*;
    use Species::*;
    [
        [(Electron, i1, Create), (Proton, i2, Create), (Neutron, i3, Annihilate), (Neutrino, i4, Annihilate)],
        [(Neutrino, i4, Create), (Neutron, i3, Create), (Proton, i2, Annihilate), (Electron, i1, Annihilate)],
        [(Neutrino, i4, Create), (Neutron, i3, Create), (Antiproton, i2, Create), (Positron, i1, Create)],
        [(Neutrino, i4, Annihilate), (Neutron, i3, Annihilate), (Antiproton, i2, Annihilate), (Positron, i1, Annihilate)],
    ]
}

/// States reachable from `state` by one interaction monomial within `caps`.
pub fn neighbours(grid: &ModeGrid, caps: &SectorCaps, state: &FockState, out: &mut Vec<FockState>) {
    let c = grid.counts();
    for process in 0..4 {
        let (s1, s2) = if process < 2 {
            (Species::Electron, Species::Proton)
        } else {
            (Species::Positron, Species::Antiproton)
        };
        for i1 in 0..c[s1 as usize] {
            for i2 in 0..c[s2 as usize] {
                for i3 in 0..c[Species::Neutron as usize] {
                    for i4 in 0..c[Species::Neutrino as usize] {
                        let word = interaction_words(i1, i2, i3, i4)[process];
                        let (next, sign) = apply_word(*state, &word);
                        if sign != 0 && caps.admits(&next) {
                            out.push(next);
                        }
                    }
                }
            }
        }
    }
}

/// Breadth-first closure of `seeds` under the interaction monomials, up to
/// `depth` applications when given.
pub fn reachable_closure(
    grid: &ModeGrid,
    seeds: &[FockState],
    caps: &SectorCaps,
    depth: Option<usize>,
) -> Result<FockBasis> {
    let mut seen: HashMap<FockState, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        if caps.admits(s) && !seen.contains_key(s) {
            seen.insert(*s, 0);
            queue.push_back(*s);
        }
    }
    let mut buf = Vec::new();
    while let Some(s) = queue.pop_front() {
        let d = seen[&s];
        if depth.is_some_and(|max| d >= max) {
            continue;
        }
        buf.clear();
        neighbours(grid, caps, &s, &mut buf);
        for n in buf.drain(..) {
            if !seen.contains_key(&n) {
                seen.insert(n, d + 1);
                if seen.len() > caps.max_dim {
                    return Err(Error::BasisCap { cap: caps.max_dim });
                }
                queue.push_back(n);
            }
        }
    }
    Ok(FockBasis::from_states(seen.into_keys().collect()))
}

/// Diagonal operator counting occupied modes of `species` accepted by
/// `predicate`.
pub fn number_operator<P: Fn(usize) -> bool>(basis: &FockBasis, species: Species, predicate: P) -> SparseOperator {
    let diag: Vec<f64> = basis
        .states()
        .iter()
        .map(|s| {
            let w = s.0[species as usize];
            (0..64).filter(|&i| w >> i & 1 == 1 && predicate(i)).count() as f64
        })
        .collect();
    SparseOperator::diagonal(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn toy_grid() -> ModeGrid {
        build_grid(&GridConfig::toy(vec![0.5, 1.0, 1.5], 1)).unwrap()
    }

    #[test]
    fn zero_mode_bookkeeping() {
        let mut cfg = GridConfig::toy(vec![0.5, 1.0], 1);
        cfg.n_landau = 0;
        let g = build_grid(&cfg).unwrap();
        assert_eq!(g.electron.len(), 1);
        assert_eq!(g.electron[0].label.s, -1);
        assert_eq!(g.proton[0].label.s, 1);
        assert_eq!(g.positron[0].label.s, 1);
        assert_eq!(g.antiproton[0].label.s, -1);
    }

    #[test]
    fn toy_counts() {
        let g = toy_grid();
        assert_eq!(g.counts(), [3, 3, 3, 3, 2, 2]);
        assert!(g.neutrino.iter().all(|m| m.label.p.norm() > 0.0));
    }

    #[test]
    fn product_rule_weights() {
        let mut cfg = GridConfig::toy(vec![0.5, 1.0], 1);
        cfg.charged_p1 = Axis { count: 3, spacing: 0.25 };
        cfg.charged_p3 = Axis { count: 2, spacing: 0.25 };
        let g = build_grid(&cfg).unwrap();
        assert!(g.electron.iter().all(|m| (m.weight - 0.0625).abs() < 1e-15));
    }

    #[test]
    fn mode_cap_enforced() {
        let mut cfg = GridConfig::toy(vec![0.5, 1.0], 1);
        cfg.charged_p1 = Axis { count: 8, spacing: 0.1 };
        cfg.charged_p3 = Axis { count: 8, spacing: 0.1 };
        assert!(matches!(build_grid(&cfg), Err(Error::ModeCap { .. })));
    }

    #[test]
    fn ladder_signs() {
        let vac = FockState::vacuum();
        let (s, sg) = apply_ladder(vac, Species::Proton, 1, Ladder::Create);
        assert_eq!(sg, 1);
        assert_eq!(apply_ladder(s, Species::Proton, 1, Ladder::Create).1, 0);
        assert_eq!(apply_ladder(vac, Species::Neutron, 0, Ladder::Annihilate).1, 0);
        let (s2, _) = apply_ladder(s, Species::Electron, 0, Ladder::Create);
        // electron precedes proton, so creating the electron second passes nothing
        let (_, sg2) = apply_ladder(s2, Species::Neutrino, 0, Ladder::Create);
        assert_eq!(sg2, 1);
        let (_, sg3) = apply_ladder(s, Species::Neutrino, 0, Ladder::Create);
        assert_eq!(sg3, -1);
    }

    #[test]
    fn vacuum_only_basis() {
        let g = toy_grid();
        let mut caps = SectorCaps::pauli(&g);
        caps.max_per_species = [0; 6];
        let b = enumerate_basis(&caps, |_| true).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.state(0), FockState::vacuum());
    }

    #[test]
    fn basis_cap_enforced() {
        let g = toy_grid();
        let mut caps = SectorCaps::pauli(&g);
        caps.max_dim = 100;
        assert!(matches!(enumerate_basis(&caps, |_| true), Err(Error::BasisCap { .. })));
    }
}
