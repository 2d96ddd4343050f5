//! Dirac matrices in the standard representation, metric (+,−,−,−).

use nalgebra::Matrix4;

use crate::{Spinor4, C64};

const O: C64 = C64::new(0.0, 0.0);
const R: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Diagonal of the Minkowski metric.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct GammaAlgebra {
    /// γ^μ with upper index, μ = 0..3.
    pub gamma: [Matrix4<C64>; 4],
    pub gamma5: Matrix4<C64>,
    /// α_i = γ⁰γ^i.
    pub alpha: [Matrix4<C64>; 3],
    pub beta: Matrix4<C64>,
}

impl GammaAlgebra {
    pub fn standard() -> Self {
        #[rustfmt::skip]
        let g0 = Matrix4::new(
            R, O, O, O,
            O, R, O, O,
            O, O, -R, O,
            O, O, O, -R,
        );
        #[rustfmt::skip]
        let g1 = Matrix4::new(
            O, O, O, R,
            O, O, R, O,
            O, -R, O, O,
            -R, O, O, O,
        );
        #[rustfmt::skip]
        let g2 = Matrix4::new(
            O, O, O, -I,
            O, O, I, O,
            O, I, O, O,
            -I, O, O, O,
        );
        #[rustfmt::skip]
        let g3 = Matrix4::new(
            O, O, R, O,
            O, O, O, -R,
            -R, O, O, O,
            O, R, O, O,
        );
        #[rustfmt::skip]
        let g5 = Matrix4::new(
            O, O, R, O,
            O, O, O, R,
            R, O, O, O,
            O, R, O, O,
        );
        let alpha = [g0 * g1, g0 * g2, g0 * g3];
        GammaAlgebra {
            gamma: [g0, g1, g2, g3],
            gamma5: g5,
            alpha,
            beta: g0,
        }
    }

    /// γ_μ = η_μμ γ^μ.
    pub fn gamma_lower(&self, mu: usize) -> Matrix4<C64> {
        self.gamma[mu] * C64::from(METRIC[mu])
    }

    /// γ^α(1 − g_A γ₅), the hadronic vertex.
    pub fn hadronic(&self, mu: usize, g_a: f64) -> Matrix4<C64> {
        self.gamma[mu] * (Matrix4::identity() - self.gamma5 * C64::from(g_a))
    }

    /// γ^α(1 − γ₅), the leptonic vertex with upper index.
    pub fn leptonic(&self, mu: usize) -> Matrix4<C64> {
        self.gamma[mu] * (Matrix4::identity() - self.gamma5)
    }
}

/// ⟨u, γ⁰Γv⟩ = ū Γ v, antilinear in `u`.
pub fn bilinear(u: &Spinor4, gamma: &Matrix4<C64>, v: &Spinor4) -> C64 {
    let w = gamma * v;
    // γ⁰ = diag(1, 1, −1, −1)
    u[0].conj() * w[0] + u[1].conj() * w[1] - u[2].conj() * w[2] - u[3].conj() * w[3]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Matrix4<C64>, b: &Matrix4<C64>) -> bool {
        (a - b).iter().all(|z| z.norm() < 1e-15)
    }

    #[test]
    fn clifford_relations() {
        let g = GammaAlgebra::standard();
        for mu in 0..4 {
            for nu in 0..4 {
                let anti = g.gamma[mu] * g.gamma[nu] + g.gamma[nu] * g.gamma[mu];
                let target = if mu == nu {
                    Matrix4::identity() * C64::from(2.0 * METRIC[mu])
                } else {
                    Matrix4::zeros()
                };
                assert!(close(&anti, &target), "mu={mu} nu={nu}");
            }
            let anti5 = g.gamma[mu] * g.gamma5 + g.gamma5 * g.gamma[mu];
            assert!(close(&anti5, &Matrix4::zeros()));
        }
        assert!(close(&(g.gamma5 * g.gamma5), &Matrix4::identity()));
        assert!(close(&g.gamma[0].adjoint(), &g.gamma[0]));
        for i in 1..4 {
            assert!(close(&g.gamma[i].adjoint(), &(-g.gamma[i])));
        }
    }

    #[test]
    fn gamma5_is_product_form() {
        let g = GammaAlgebra::standard();
        let prod = g.gamma[0] * g.gamma[1] * g.gamma[2] * g.gamma[3] * I;
        assert!(close(&prod, &g.gamma5));
    }

    #[test]
    fn bilinear_unit_vector() {
        let e1 = Spinor4::new(R, O, O, O);
        assert_eq!(bilinear(&e1, &Matrix4::identity(), &e1), R);
    }
}
