//! Physical parameters and presets.

use crate::error::{Error, Result};
use alloc::format;

/// Particle masses in natural units (ħ = c = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Masses {
    pub m_e: f64,
    pub m_p: f64,
    pub m_n: f64,
}

/// Fermi coupling in GeV⁻².
pub const G_FERMI: f64 = 1.16639e-5;
pub const COS_CABIBBO: f64 = 0.9751;
pub const G_AXIAL: f64 = 1.27;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub masses: Masses,
    /// Field strength times the unit charge.
    pub eb: f64,
    pub g_a: f64,
    /// Stored for reference; the overall scale is absorbed into the coupling g.
    pub g_fermi: f64,
    pub cos_cabibbo: f64,
}

impl ModelParams {
    /// Desk-scale masses with mild ratios.
    pub fn toy() -> Self {
        ModelParams {
            masses: Masses {
                m_e: 1.0,
                m_p: 2.0,
                m_n: 2.2,
            },
            eb: 1.0,
            g_a: G_AXIAL,
            g_fermi: G_FERMI,
            cos_cabibbo: COS_CABIBBO,
        }
    }

    /// Physical masses in GeV with the field at the electron critical value
    /// eB = m_e².
    pub fn physical() -> Self {
        let m_e = 0.510_998_95e-3;
        ModelParams {
            masses: Masses {
                m_e,
                m_p: 0.938_272_088_16,
                m_n: 0.939_565_420_52,
            },
            eb: m_e * m_e,
            g_a: G_AXIAL,
            g_fermi: G_FERMI,
            cos_cabibbo: COS_CABIBBO,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.masses;
        if !(m.m_e > 0.0 && m.m_p > 0.0 && m.m_n > 0.0) {
            return Err(Error::Param(format!("masses must be positive: {m:?}")));
        }
        if m.m_e >= m.m_p {
            return Err(Error::Param(format!("need m_e < m_p, got {} and {}", m.m_e, m.m_p)));
        }
        if !(self.eb > 0.0 && self.eb.is_finite()) {
            return Err(Error::Param(format!("eB must be positive, got {}", self.eb)));
        }
        Ok(())
    }
}
