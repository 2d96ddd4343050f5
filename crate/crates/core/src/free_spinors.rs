//! Helicity-basis spinors of the free neutron and the massless neutrino.

use nalgebra::Vector2;

use crate::error::{Error, Result};
use crate::{Spinor4, C64};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Momentum3 {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
}

impl Momentum3 {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Self {
        Momentum3 { p1, p2, p3 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.p1 * self.p1 + self.p2 * self.p2 + self.p3 * self.p3
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }
}

impl core::ops::Neg for Momentum3 {
    type Output = Momentum3;
    fn neg(self) -> Momentum3 {
        Momentum3::new(-self.p1, -self.p2, -self.p3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityPair {
    pub plus: Vector2<C64>,
    pub minus: Vector2<C64>,
}

impl HelicityPair {
    pub fn get(&self, lambda: Helicity) -> Vector2<C64> {
        match lambda {
            Helicity::Plus => self.plus,
            Helicity::Minus => self.minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

/// Eigenvectors `h_±` of σ·p with eigenvalues `±|p|`, in the phase convention
/// `h_+ ∝ (p¹ − ip², |p| − p³)`, `h_- ∝ (p³ − |p|, p¹ + ip²)`, and
/// `h_+ = (1, 0)`, `h_- = (0, 1)` on the ray `|p| = p³`.
pub fn helicity_basis(p: &Momentum3) -> Result<HelicityPair> {
    let abs = p.norm();
    if abs == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    let one = C64::from(1.0);
    let zero = C64::from(0.0);
    let transverse = p.p1 * p.p1 + p.p2 * p.p2;
    if transverse == 0.0 && p.p3 > 0.0 {
        return Ok(HelicityPair {
            plus: Vector2::new(one, zero),
            minus: Vector2::new(zero, one),
        });
    }
    // |p| − p³ without cancellation when p³ > 0
    let gap = if p.p3 > 0.0 { transverse / (abs + p.p3) } else { abs - p.p3 };
    let scale = 1.0 / libm::sqrt(2.0 * abs * gap);
    Ok(HelicityPair {
        plus: Vector2::new(C64::new(p.p1, -p.p2), C64::from(gap)) * C64::from(scale),
        minus: Vector2::new(C64::from(-gap), C64::new(p.p1, p.p2)) * C64::from(scale),
    })
}

pub fn neutron_energy(p: &Momentum3, m_n: f64) -> f64 {
    libm::sqrt(p.norm_sqr() + m_n * m_n)
}

fn helicity_or_rest(p: &Momentum3) -> HelicityPair {
    helicity_basis(p).unwrap_or_else(|_| helicity_basis(&Momentum3::new(0.0, 0.0, 1.0)).unwrap())
}

fn stack(top: Vector2<C64>, bottom: Vector2<C64>) -> Spinor4 {
    Spinor4::new(top[0], top[1], bottom[0], bottom[1])
}

/// `(U^(n)(p, λ), V^(n)(p, λ))`. At `p = 0` the helicity convention of the
/// `|p| = p³` ray is used.
pub fn neutron_spinors(p: &Momentum3, lambda: Helicity, m_n: f64) -> (Spinor4, Spinor4) {
    let e = neutron_energy(p, m_n);
    let a_plus = libm::sqrt(1.0 + m_n / e) / core::f64::consts::SQRT_2;
    let a_minus = libm::sqrt((1.0 - m_n / e).max(0.0)) / core::f64::consts::SQRT_2;
    let h = helicity_or_rest(p).get(lambda);
    let sgn = lambda.sign();
    let u = stack(h * C64::from(a_plus), h * C64::from(sgn * a_minus));
    let v = stack(h * C64::from(-sgn * a_minus), h * C64::from(a_plus));
    (u, v)
}

/// Massless spinors `U^(ν)(p, λ) = (h_λ, ±h_λ)/√2`, `V^(ν)(p, λ) = (∓h_λ, h_λ)/√2`.
pub fn neutrino_uv(p: &Momentum3, lambda: Helicity) -> Result<(Spinor4, Spinor4)> {
    let h = helicity_basis(p)?.get(lambda) * C64::from(core::f64::consts::FRAC_1_SQRT_2);
    let sgn = C64::from(lambda.sign());
    Ok((stack(h, h * sgn), stack(-h * sgn, h)))
}

/// The left-handed neutrino spinor `U^(ν)(p, −½)` and the antineutrino field
/// spinor `W^(ν)(p, +½) = V^(ν)(−p, +½)`.
pub fn neutrino_spinors(p: &Momentum3) -> Result<(Spinor4, Spinor4)> {
    let (u, _) = neutrino_uv(p, Helicity::Minus)?;
    let (_, w) = neutrino_uv(&-*p, Helicity::Plus)?;
    Ok((u, w))
}
