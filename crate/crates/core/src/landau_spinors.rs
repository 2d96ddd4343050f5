//! Eigenspinors of the reduced Dirac operator of a charged particle in a
//! uniform magnetic field, in the gauge where the fiber after Fourier
//! transform in (x¹, x³) is a one-dimensional operator in x².
//!
//! Each spinor component is a real combination of the two Landau mode
//! functions `I_{n-1}` and `I_n`, all centered at the same point, so a spinor
//! is stored as that coefficient table.

use alloc::vec::Vec;

use crate::special_fn::{landau_mode, landau_mode_derivative};
use crate::{Spinor4, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChargedKind {
    Electron,
    Proton,
    Positron,
    Antiproton,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargedSpecies {
    pub kind: ChargedKind,
    pub mass: f64,
}

impl ChargedSpecies {
    pub fn new(kind: ChargedKind, mass: f64) -> Self {
        ChargedSpecies { kind, mass }
    }

    /// Sign of the charge in units of the positive elementary charge.
    pub fn charge_sign(&self) -> i8 {
        match self.kind {
            ChargedKind::Electron | ChargedKind::Antiproton => -1,
            ChargedKind::Proton | ChargedKind::Positron => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ChargedKind::Electron => "electron",
            ChargedKind::Proton => "proton",
            ChargedKind::Positron => "positron",
            ChargedKind::Antiproton => "antiproton",
        }
    }
}

/// Quantum numbers ξ = (s, n, p¹, p³) of a charged particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargedMode {
    pub s: i8,
    pub n: u32,
    pub p1: f64,
    pub p3: f64,
}

impl ChargedMode {
    pub fn new(s: i8, n: u32, p1: f64, p3: f64) -> Self {
        ChargedMode { s, n, p1, p3 }
    }
}

/// `E_n(p³) = √(m² + (p³)² + 2n·eB)`.
pub fn landau_energy(mass: f64, n: u32, p3: f64, eb: f64) -> f64 {
    libm::sqrt(mass * mass + p3 * p3 + 2.0 * n as f64 * eb)
}

/// Landau thresholds `√(m² + 2n·eB)` for `n = 0..=n_max`.
pub fn thresholds(mass: f64, eb: f64, n_max: u32) -> Vec<f64> {
    (0..=n_max).map(|n| landau_energy(mass, n, 0.0, eb)).collect()
}

/// A Landau eigenspinor as coefficients on `(I_{n-1}(ξ), I_n(ξ))` per
/// component, with `ξ = √(eB)(x² − center)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandauSpinor {
    pub n: u32,
    pub center: f64,
    pub coeffs: [[f64; 2]; 4],
}

impl LandauSpinor {
    fn zero(n: u32, center: f64) -> Self {
        LandauSpinor {
            n,
            center,
            coeffs: [[0.0; 2]; 4],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c[0] == 0.0 && c[1] == 0.0)
    }

    pub fn xi(&self, x2: f64, eb: f64) -> f64 {
        libm::sqrt(eb) * (x2 - self.center)
    }

    pub fn eval(&self, x2: f64, eb: f64) -> Spinor4 {
        let xi = self.xi(x2, eb);
        let n = self.n as i32;
        let lo = landau_mode(n - 1, xi, eb);
        let hi = landau_mode(n, xi, eb);
        self.combine(lo, hi)
    }

    /// d/dx² of [`LandauSpinor::eval`].
    pub fn derivative(&self, x2: f64, eb: f64) -> Spinor4 {
        let xi = self.xi(x2, eb);
        let n = self.n as i32;
        let s = libm::sqrt(eb);
        let lo = s * landau_mode_derivative(n - 1, xi, eb);
        let hi = s * landau_mode_derivative(n, xi, eb);
        self.combine(lo, hi)
    }

    fn combine(&self, lo: f64, hi: f64) -> Spinor4 {
        Spinor4::from_fn(|i, _| C64::from(self.coeffs[i][0] * lo + self.coeffs[i][1] * hi))
    }
}

struct Factors {
    norm: f64,
    k: f64,
    q: f64,
}

fn factors(species: &ChargedSpecies, mode: &ChargedMode, eb: f64) -> Factors {
    let e = landau_energy(species.mass, mode.n, mode.p3, eb);
    let em = e + species.mass;
    Factors {
        norm: libm::sqrt(em / (2.0 * e)),
        k: libm::sqrt(2.0 * mode.n as f64 * eb) / em,
        q: mode.p3 / em,
    }
}

fn center(species: &ChargedSpecies, p1: f64, eb: f64) -> f64 {
    -(species.charge_sign() as f64) * p1 / eb
}

/// Positive-energy eigenspinor coefficients.
pub fn spinor_u_coeffs(species: &ChargedSpecies, mode: &ChargedMode, eb: f64) -> LandauSpinor {
    let c = center(species, mode.p1, eb);
    let f = factors(species, mode, eb);
    let (nn, k, q) = (f.norm, f.k, f.q);
    // [I_{n-1}, I_n]
    let coeffs = match (species.charge_sign() < 0, mode.s > 0) {
        (true, true) => {
            if mode.n == 0 {
                return LandauSpinor::zero(0, c);
            }
            [[nn, 0.0], [0.0, 0.0], [nn * q, 0.0], [0.0, -nn * k]]
        }
        (true, false) => [[0.0, 0.0], [0.0, nn], [-nn * k, 0.0], [0.0, -nn * q]],
        (false, true) => [[0.0, nn], [0.0, 0.0], [0.0, nn * q], [nn * k, 0.0]],
        (false, false) => {
            if mode.n == 0 {
                return LandauSpinor::zero(0, c);
            }
            [[0.0, 0.0], [nn, 0.0], [0.0, nn * k], [-nn * q, 0.0]]
        }
    };
    LandauSpinor {
        n: mode.n,
        center: c,
        coeffs,
    }
}

/// Negative-energy eigenspinor coefficients.
pub fn spinor_v_coeffs(species: &ChargedSpecies, mode: &ChargedMode, eb: f64) -> LandauSpinor {
    let c = center(species, mode.p1, eb);
    let f = factors(species, mode, eb);
    let (nn, k, q) = (f.norm, f.k, f.q);
    let coeffs = match (species.charge_sign() < 0, mode.s > 0) {
        (true, true) => {
            if mode.n == 0 {
                return LandauSpinor::zero(0, c);
            }
            [[-nn * q, 0.0], [0.0, nn * k], [nn, 0.0], [0.0, 0.0]]
        }
        (true, false) => [[nn * k, 0.0], [0.0, nn * q], [0.0, 0.0], [0.0, nn]],
        (false, true) => [[0.0, -nn * q], [-nn * k, 0.0], [0.0, nn], [0.0, 0.0]],
        (false, false) => {
            if mode.n == 0 {
                return LandauSpinor::zero(0, c);
            }
            [[0.0, -nn * k], [nn * q, 0.0], [0.0, 0.0], [nn, 0.0]]
        }
    };
    LandauSpinor {
        n: mode.n,
        center: c,
        coeffs,
    }
}

/// Spinor attached to the antiparticle creation operator in the quantized
/// field: `W(s, n, p¹, p³) = V_{-s}(n, −p¹, −p³)`.
pub fn spinor_w_coeffs(species: &ChargedSpecies, mode: &ChargedMode, eb: f64) -> LandauSpinor {
    let flipped = ChargedMode::new(-mode.s, mode.n, -mode.p1, -mode.p3);
    spinor_v_coeffs(species, &flipped, eb)
}

pub fn spinor_u(species: &ChargedSpecies, mode: &ChargedMode, x2: f64, eb: f64) -> Spinor4 {
    spinor_u_coeffs(species, mode, eb).eval(x2, eb)
}

pub fn spinor_v(species: &ChargedSpecies, mode: &ChargedMode, x2: f64, eb: f64) -> Spinor4 {
    spinor_v_coeffs(species, mode, eb).eval(x2, eb)
}

pub fn field_spinor_w(species: &ChargedSpecies, mode: &ChargedMode, x2: f64, eb: f64) -> Spinor4 {
    spinor_w_coeffs(species, mode, eb).eval(x2, eb)
}

/// `C(ψ₁, ψ₂, ψ₃, ψ₄) = (ψ₄*, −ψ₃*, −ψ₂*, ψ₁*)`.
pub fn charge_conjugate(psi: &Spinor4) -> Spinor4 {
    Spinor4::new(psi[3].conj(), -psi[2].conj(), -psi[1].conj(), psi[0].conj())
}

/// Applies the reduced Dirac operator of a particle with the given charge sign
/// to a spinor field, given its value and x²-derivative at one point.
///
/// In block form `[[m, D], [D, −m]]` with
/// `D(a, b) = (t·b − b' + p³·a, t·a + a' − p³·b)` and `t = p¹ + q·eB·x²`.
#[allow(clippy::too_many_arguments)]
pub fn apply_reduced_dirac(
    charge_sign: i8,
    mass: f64,
    p1: f64,
    p3: f64,
    eb: f64,
    x2: f64,
    value: &Spinor4,
    derivative: &Spinor4,
) -> Spinor4 {
    let t = p1 + charge_sign as f64 * eb * x2;
    let d = |a: C64, b: C64, da: C64, db: C64| (b * t - db + a * p3, a * t + da - b * p3);
    let (u1, u2) = d(value[2], value[3], derivative[2], derivative[3]);
    let (l1, l2) = d(value[0], value[1], derivative[0], derivative[1]);
    Spinor4::new(
        value[0] * mass + u1,
        value[1] * mass + u2,
        l1 - value[2] * mass,
        l2 - value[3] * mass,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn electron() -> ChargedSpecies {
        ChargedSpecies::new(ChargedKind::Electron, 1.0)
    }

    #[test]
    fn energies() {
        assert_eq!(landau_energy(1.0, 0, 0.0, 1.0), 1.0);
        assert!((landau_energy(1.0, 1, 0.0, 0.5) - 2f64.sqrt()).abs() < 1e-15);
        assert!((landau_energy(1.0, 3, 2.0, 1.0) - 11f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn threshold_list() {
        assert_eq!(thresholds(1.0, 1.0, 0), [1.0]);
        let t = thresholds(1.0, 1.5, 2);
        assert!((t[1] - 2.0).abs() < 1e-15 && (t[2] - 7f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_modes() {
        let e = electron();
        let p = ChargedSpecies::new(ChargedKind::Proton, 2.0);
        assert!(spinor_u_coeffs(&e, &ChargedMode::new(1, 0, 0.3, -0.2), 1.0).is_zero());
        assert!(spinor_v_coeffs(&e, &ChargedMode::new(1, 0, 0.3, -0.2), 1.0).is_zero());
        assert!(spinor_u_coeffs(&p, &ChargedMode::new(-1, 0, 0.3, -0.2), 1.0).is_zero());
        assert!(spinor_v_coeffs(&p, &ChargedMode::new(-1, 0, 0.3, -0.2), 1.0).is_zero());
        assert!(spinor_w_coeffs(&e, &ChargedMode::new(-1, 0, 0.3, 0.1), 1.0).is_zero());
        assert!(spinor_w_coeffs(&p, &ChargedMode::new(1, 0, 0.3, 0.1), 1.0).is_zero());
        assert!(!spinor_u_coeffs(&e, &ChargedMode::new(-1, 0, 0.3, -0.2), 1.0).is_zero());
        assert!(!spinor_u_coeffs(&p, &ChargedMode::new(1, 0, 0.3, -0.2), 1.0).is_zero());
    }

    #[test]
    fn ground_level_electron_spinor() {
        let u = spinor_u(&electron(), &ChargedMode::new(-1, 0, 0.4, 0.0), 0.9, 1.0);
        let i0 = landau_mode(0, 0.9 - 0.4, 1.0);
        assert_eq!(u[0], C64::from(0.0));
        assert!((u[1].re - i0).abs() < 1e-15);
        assert_eq!(u[2], C64::from(0.0));
        assert_eq!(u[3], C64::from(0.0));
    }

    #[test]
    fn w_is_flipped_v() {
        let e = electron();
        let w = field_spinor_w(&e, &ChargedMode::new(1, 2, 0.3, -0.7), 0.25, 1.3);
        let v = spinor_v(&e, &ChargedMode::new(-1, 2, -0.3, 0.7), 0.25, 1.3);
        assert_eq!(w, v);
    }

    #[test]
    fn conjugation_is_involution() {
        let psi = Spinor4::new(
            C64::new(0.1, 0.2),
            C64::new(-0.3, 0.4),
            C64::new(0.5, -0.6),
            C64::new(0.7, 0.8),
        );
        assert_eq!(charge_conjugate(&charge_conjugate(&psi)), psi);
        let e1 = Spinor4::new(C64::from(1.0), C64::from(0.0), C64::from(0.0), C64::from(0.0));
        let c = charge_conjugate(&e1);
        assert_eq!(c[3], C64::from(1.0));
        assert_eq!(c[0].norm() + c[1].norm() + c[2].norm(), 0.0);
    }
}
