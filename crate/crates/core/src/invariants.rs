//! Structural checks shared by the test suites and the experiment runner:
//! spinor exactness and orthonormality, charge conjugation, and the
//! anticommutation relations of the ladder operators.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fock::{apply_ladder, FockState, Ladder, SPECIES};
use crate::free_spinors::{neutrino_uv, neutron_spinors, Helicity, Momentum3};
use crate::landau_spinors::{
    apply_reduced_dirac, charge_conjugate, landau_energy, spinor_u_coeffs, spinor_v_coeffs, ChargedKind, ChargedMode,
    ChargedSpecies, LandauSpinor,
};
use crate::params::Masses;
use crate::special_fn::gauss_hermite;
use crate::{Spinor4, C64};

pub const CHARGED_KINDS: [ChargedKind; 4] = [
    ChargedKind::Electron,
    ChargedKind::Positron,
    ChargedKind::Proton,
    ChargedKind::Antiproton,
];

pub fn species_of(kind: ChargedKind, masses: &Masses) -> ChargedSpecies {
    let m = match kind {
        ChargedKind::Electron | ChargedKind::Positron => masses.m_e,
        _ => masses.m_p,
    };
    ChargedSpecies::new(kind, m)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SpinorReport {
    pub spinors: usize,
    /// Largest `‖H_D ψ − λψ‖ / ‖λψ‖` in L²(dx²), with `λ = ±E_n(p³)`.
    pub max_eigen_rel_err: f64,
    /// Largest deviation of a Gram matrix from the identity.
    pub max_gram_dev: f64,
}

/// All nonzero `U_s(n)` and `V_s(n)`, `n ≤ n_max`, at one `(p¹, p³)`, with
/// their eigenvalue signs.
fn spinor_family(species: &ChargedSpecies, n_max: u32, p1: f64, p3: f64, eb: f64) -> Vec<(LandauSpinor, f64, u32)> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for s in [-1i8, 1] {
            let mode = ChargedMode::new(s, n, p1, p3);
            let u = spinor_u_coeffs(species, &mode, eb);
            if !u.is_zero() {
                out.push((u, 1.0, n));
            }
            let v = spinor_v_coeffs(species, &mode, eb);
            if !v.is_zero() {
                out.push((v, -1.0, n));
            }
        }
    }
    out
}

/// Reduced Dirac eigen-equation and orthonormality of the Landau spinors for
/// every charged species at `samples` random `(p¹, p³)`.
pub fn spinor_exactness(masses: &Masses, eb: f64, n_max: u32, samples: usize, seed: u64) -> Result<SpinorReport> {
    let quad = gauss_hermite(2 * n_max as usize + 24)?;
    let s = libm::sqrt(eb);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut count = 0;
    let mut eig: f64 = 0.0;
    let mut gram: f64 = 0.0;
    for kind in CHARGED_KINDS {
        let sp = species_of(kind, masses);
        for _ in 0..samples {
            let p1: f64 = rng.gen_range(-2.0..2.0);
            let p3: f64 = rng.gen_range(-2.0..2.0);
            let family = spinor_family(&sp, n_max, p1, p3, eb);
            let center = family[0].0.center;
            let xs: Vec<f64> = quad.nodes().iter().map(|t| center + t / s).collect();
            let values: Vec<Vec<Spinor4>> = family.iter().map(|(f, _, _)| xs.iter().map(|&x| f.eval(x, eb)).collect()).collect();
            for (i, (f, sign, n)) in family.iter().enumerate() {
                let lambda = sign * landau_energy(sp.mass, *n, p3, eb);
                let mut num = 0.0;
                let mut den = 0.0;
                for (j, (&x, &w)) in xs.iter().zip(quad.scaled_weights()).enumerate() {
                    let v = values[i][j];
                    let d = f.derivative(x, eb);
                    let h = apply_reduced_dirac(sp.charge_sign(), sp.mass, p1, p3, eb, x, &v, &d);
                    num += w * (h - v * C64::from(lambda)).norm_squared();
                    den += w * (v * C64::from(lambda)).norm_squared();
                }
                eig = eig.max(libm::sqrt(num / den));
                count += 1;
            }
            for a in 0..family.len() {
                for b in 0..family.len() {
                    let mut acc = C64::new(0.0, 0.0);
                    for (j, &w) in quad.scaled_weights().iter().enumerate() {
                        acc += values[a][j].dotc(&values[b][j]) * w;
                    }
                    acc /= s;
                    let target = if a == b { 1.0 } else { 0.0 };
                    gram = gram.max((acc - target).norm());
                }
            }
        }
    }
    Ok(SpinorReport {
        spinors: count,
        max_eigen_rel_err: eig,
        max_gram_dev: gram,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConjugationReport {
    pub samples: usize,
    /// Landau identities `C V^(e)_± = ∓U^(e⁺)_∓(−p)`, `C V^(p)_± = ∓U^(p⁻)_∓(−p)`.
    pub landau_max_err: f64,
    /// `C V(p, ±½) = −((p¹ ± ip²)/|p¹ + ip²|) U(−p, ±½)` for the neutron.
    pub neutron_max_err: f64,
    /// The same relation for the neutrino.
    pub neutrino_max_err: f64,
}

/// Random momentum with `|p¹ + ip²|` bounded away from zero.
fn off_axis(rng: &mut ChaCha8Rng) -> Momentum3 {
    loop {
        let p = Momentum3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if p.p1 * p.p1 + p.p2 * p.p2 > 1e-2 {
            return p;
        }
    }
}

pub fn charge_conjugation(masses: &Masses, eb: f64, samples: usize, seed: u64) -> Result<ConjugationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = [
        (ChargedKind::Electron, ChargedKind::Positron),
        (ChargedKind::Proton, ChargedKind::Antiproton),
    ];
    let mut landau: f64 = 0.0;
    let mut neutron: f64 = 0.0;
    let mut neutrino: f64 = 0.0;
    for _ in 0..samples {
        let p = off_axis(&mut rng);
        let n: u32 = rng.gen_range(0..6);
        for (particle, anti) in pairs {
            let a = species_of(particle, masses);
            let b = species_of(anti, masses);
            for s in [1i8, -1] {
                let v = spinor_v_coeffs(&a, &ChargedMode::new(s, n, p.p1, p.p3), eb);
                let u = spinor_u_coeffs(&b, &ChargedMode::new(-s, n, -p.p1, -p.p3), eb);
                let sign = -(s as f64);
                for k in -4..=4 {
                    let x = v.center + k as f64 * 0.4 / libm::sqrt(eb);
                    let lhs = charge_conjugate(&v.eval(x, eb));
                    let rhs = u.eval(x, eb) * C64::from(sign);
                    landau = landau.max((lhs - rhs).norm());
                }
            }
        }
        let rho = libm::sqrt(p.p1 * p.p1 + p.p2 * p.p2);
        for lambda in [Helicity::Plus, Helicity::Minus] {
            let phase = -C64::new(p.p1, lambda.sign() * p.p2) / rho;
            let (_, v) = neutron_spinors(&p, lambda, masses.m_n);
            let (u, _) = neutron_spinors(&-p, lambda, masses.m_n);
            neutron = neutron.max((charge_conjugate(&v) - u * phase).norm());
            let (_, v) = neutrino_uv(&p, lambda)?;
            let (u, _) = neutrino_uv(&-p, lambda)?;
            neutrino = neutrino.max((charge_conjugate(&v) - u * phase).norm());
        }
    }
    Ok(ConjugationReport {
        samples,
        landau_max_err: landau,
        neutron_max_err: neutron,
        neutrino_max_err: neutrino,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CarReport {
    pub modes: usize,
    pub states: usize,
    pub relations: usize,
    pub failures: usize,
}

/// Integer-coefficient vector on basis indices.
type IntVec = Vec<(usize, i32)>;

fn add_into(acc: &mut IntVec, idx: usize, c: i32) {
    match acc.iter_mut().find(|(i, _)| *i == idx) {
        Some(e) => e.1 += c,
        None => acc.push((idx, c)),
    }
}

/// Checks `{b_i, b_j} = {b*_i, b*_j} = 0` and `{b_i, b*_j} = δ_ij` exactly on
/// the full occupation basis over `counts` modes per species (at most 12
/// modes in total), across all species pairs.
pub fn car_check(counts: [usize; 6]) -> CarReport {
    let modes: Vec<(usize, usize)> = (0..6).flat_map(|s| (0..counts[s]).map(move |i| (s, i))).collect();
    let total = modes.len();
    assert!(total <= 12, "CAR check is limited to 12 modes");
    let states: Vec<FockState> = (0..1u64 << total)
        .map(|bits| {
            let mut st = FockState::vacuum();
            for (k, &(s, i)) in modes.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    st = st.with(SPECIES[s], i);
                }
            }
            st
        })
        .collect();
    let index = |st: &FockState| -> usize {
        let mut bits = 0usize;
        for (k, &(s, i)) in modes.iter().enumerate() {
            if st.is_occupied(SPECIES[s], i) {
                bits |= 1 << k;
            }
        }
        bits
    };
    let act = |st: FockState, m: usize, kind: Ladder| -> Option<(FockState, i32)> {
        let (s, i) = modes[m];
        let (next, sign) = apply_ladder(st, SPECIES[s], i, kind);
        (sign != 0).then_some((next, sign as i32))
    };
    let mut relations = 0;
    let mut failures = 0;
    let kinds = [
        (Ladder::Annihilate, Ladder::Annihilate),
        (Ladder::Create, Ladder::Create),
        (Ladder::Annihilate, Ladder::Create),
    ];
    for a in 0..total {
        for b in 0..total {
            for &(ka, kb) in &kinds {
                relations += 1;
                let target = if ka != kb && a == b { 1 } else { 0 };
                let mut ok = true;
                for (col, st) in states.iter().enumerate() {
                    let mut acc: IntVec = vec![];
                    for (first, second) in [((b, kb), (a, ka)), ((a, ka), (b, kb))] {
                        if let Some((s1, c1)) = act(*st, first.0, first.1) {
                            if let Some((s2, c2)) = act(s1, second.0, second.1) {
                                add_into(&mut acc, index(&s2), c1 * c2);
                            }
                        }
                    }
                    for (row, c) in acc {
                        let expect = if row == col { target } else { 0 };
                        if c != expect {
                            ok = false;
                        }
                    }
                    if target != 0 && !ok {
                        break;
                    }
                    // the diagonal entry must be present when the target is nonzero
                    if target != 0 {
                        let mut diag = 0;
                        for (first, second) in [((b, kb), (a, ka)), ((a, ka), (b, kb))] {
                            if let Some((s1, c1)) = act(*st, first.0, first.1) {
                                if let Some((s2, c2)) = act(s1, second.0, second.1) {
                                    if index(&s2) == col {
                                        diag += c1 * c2;
                                    }
                                }
                            }
                        }
                        if diag != target {
                            ok = false;
                        }
                    }
                }
                if !ok {
                    failures += 1;
                }
            }
        }
    }
    CarReport {
        modes: total,
        states: states.len(),
        relations,
        failures,
    }
}
