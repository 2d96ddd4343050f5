use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("quadrature order {order} outside 1..={max}")]
    QuadratureOrder { order: usize, max: usize },
    #[error("tridiagonal eigensolver did not converge")]
    Tridiagonal,
    #[error("helicity is undefined at zero momentum")]
    ZeroMomentum,
    #[error("delta = {delta} must lie in (0, m_e = {m_e})")]
    Delta { delta: f64, m_e: f64 },
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("{species} grid has {count} modes, cap is {cap}")]
    ModeCap { species: &'static str, count: usize, cap: usize },
    #[error("basis dimension exceeds cap {cap}")]
    BasisCap { cap: usize },
    #[error("neutrino shell edges do not align with sigma_{n} = {sigma}")]
    ShellAlignment { n: usize, sigma: f64 },
    #[error("assembled operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("eigensolver did not converge (best residual {residual:e} after {iterations} iterations)")]
    NoConvergence { residual: f64, iterations: usize },
}
