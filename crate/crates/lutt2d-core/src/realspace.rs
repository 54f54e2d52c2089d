//! Real-space, imaginary-time form of the induced antinodal potential,
//! `v_eff(τ, x) = −g_eff/(v_F²|τ|³) · f_γ(φ, |x|/(√(1−γ²) v_F|τ|))`,
//! with `(x₊, x₋) = |x|(cos φ, sin φ)`.
//!
//! `f_γ` is a periodic integral over an auxiliary angle `χ`:
//!
//! `f_γ(φ, x) = P ⟨Σ_± (1 ± w)(e_±² − 3x²c²)/(e_±² + x²c²)³⟩_χ`, `c = cos(χ−φ)`,
//!
//! where `e_±² = (1 ± η)/2`, `η = √(1 − A sin²2χ)`,
//! `w = (cos²2χ + γ)/((1+γ)η)`, `A = 1 − γ²/(1+γ)²` and
//! `P = (1+2γ)/(8π(1+γ)(1−γ²))`. `⟨·⟩_χ` is the mean over `[0, 2π)`.
//!
//! The `e₋` branch is singular at `sin 2χ = 0`. Nodes therefore sit at
//! midpoints, mapped through `χ = ψ − sin(4ψ)/4`. The map clusters nodes at
//! the singular points, keeps the integrand periodic, and turns the
//! midpoint rule into a spectrally convergent one.
//!
//! Along the axes `sin 2φ = 0` the integrand is not integrable, and the
//! angular distribution of `v_eff` carries weight concentrated on these
//! lines. [`f_gamma`] rejects them. [`angular_average`] integrates `φ`
//! analytically first and so includes that weight.

use alloc::vec::Vec;

use crate::couplings::Model;
use crate::error::bail;
use crate::{pairwise_sum, pi, Result};

/// Quadrature for the `χ` average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Number of nodes, even and at least 64.
    pub n_nodes: usize,
    /// Cluster nodes at the singular points via `χ = ψ − sin(4ψ)/4`.
    /// Plain midpoints converge only algebraically there.
    pub graded: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { n_nodes: 2048, graded: true }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 64 || !self.n_nodes.is_multiple_of(2) {
            bail!(InvalidParameter, "quadrature needs an even node count >= 64 (got {})", self.n_nodes);
        }
        Ok(())
    }
}

/// Per-node data of the `χ` average that does not depend on `φ` or `x`.
#[derive(Debug, Clone)]
pub struct ChiTable {
    gamma: f64,
    /// `(χ, weight, [e₊², e₋²], [1+w, 1−w])`; weights sum to 1.
    nodes: Vec<(f64, f64, [f64; 2], [f64; 2])>,
}

impl ChiTable {
    pub fn new(gamma: f64, q: QuadratureSpec) -> Result<Self> {
        q.validate()?;
        if !(0.0..1.0).contains(&gamma) {
            bail!(Domain, "f_gamma needs 0 <= gamma < 1 (got {gamma})");
        }
        let n = q.n_nodes;
        let big_a = 1.0 - (gamma / (1.0 + gamma)) * (gamma / (1.0 + gamma));
        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            let psi = (i as f64 + 0.5) * 2.0 * pi() / n as f64;
            let (chi, jac) = if q.graded {
                (psi - libm::sin(4.0 * psi) / 4.0, 1.0 - libm::cos(4.0 * psi))
            } else {
                (psi, 1.0)
            };
            let s2 = {
                let s = libm::sin(2.0 * chi);
                s * s
            };
            let eta = libm::sqrt(1.0 - big_a * s2);
            // cancellation-free forms of 1 − η and 1 − w
            let one_m_eta = big_a * s2 / (1.0 + eta);
            let one_m_w = s2 * (1.0 - (1.0 + gamma) * big_a / (1.0 + eta)) / ((1.0 + gamma) * eta);
            nodes.push((chi, jac / n as f64, [0.5 * (1.0 + eta), 0.5 * one_m_eta], [2.0 - one_m_w, one_m_w]));
        }
        Ok(Self { gamma, nodes })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn prefactor(&self) -> f64 {
        let g = self.gamma;
        (1.0 + 2.0 * g) / (8.0 * pi() * (1.0 + g) * (1.0 - g * g))
    }

    /// `f_γ(φ, x)`.
    pub fn f(&self, phi: f64, x: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            bail!(Domain, "f_gamma needs x > 0 (got {x}); it diverges at the origin");
        }
        if libm::fabs(libm::sin(2.0 * phi)) < 1e-12 {
            bail!(Domain, "f_gamma is singular on the axes sin(2 phi) = 0 (phi = {phi})");
        }
        let x2 = x * x;
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .map(|&(chi, wt, e2, ww)| {
                let c = libm::cos(chi - phi);
                let b = x2 * c * c;
                let mut acc = 0.0;
                for j in 0..2 {
                    let d = e2[j] + b;
                    acc += ww[j] * (e2[j] - 3.0 * b) / (d * d * d);
                }
                wt * acc
            })
            .collect();
        Ok(self.prefactor() * pairwise_sum(&terms))
    }

    /// `Φ(u) = ∫₀^{2π} f_γ(φ, u) dφ` with the `φ` integral done in closed
    /// form, `P π ⟨Σ_± (1±w)(2 − y²)/(e_±⁴(1+y²)^{5/2})⟩_χ`, `y = u/e_±`.
    pub fn angular_average(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u.is_finite()) {
            bail!(Domain, "angular average needs u > 0 (got {u})");
        }
        let u2 = u * u;
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .map(|&(_, wt, e2, ww)| {
                let mut acc = 0.0;
                for j in 0..2 {
                    let y2 = u2 / e2[j];
                    let r = 1.0 + y2;
                    acc += ww[j] * (2.0 - y2) / (e2[j] * e2[j] * r * r * libm::sqrt(r));
                }
                wt * acc
            })
            .collect();
        Ok(self.prefactor() * pi() * pairwise_sum(&terms))
    }
}

/// `f_γ(φ, x)`. Builds a fresh node table; reuse a [`ChiTable`] for sweeps.
pub fn f_gamma(phi: f64, x: f64, gamma: f64, q: QuadratureSpec) -> Result<f64> {
    ChiTable::new(gamma, q)?.f(phi, x)
}

/// `Φ(u) = ∫ f_γ(φ, u) dφ` including the weight on the axes.
pub fn angular_average(u: f64, gamma: f64, q: QuadratureSpec) -> Result<f64> {
    ChiTable::new(gamma, q)?.angular_average(u)
}

/// `v_eff(τ, x)` for diagonal coordinates `x = (x₊, x₋)`.
pub fn veff_xt(tau: f64, x: [f64; 2], m: &Model, table: &ChiTable) -> Result<f64> {
    let cs = &m.couplings;
    if tau == 0.0 || !tau.is_finite() {
        bail!(Domain, "v_eff(tau, x) is singular at tau = 0");
    }
    if libm::fabs(table.gamma - cs.gamma) > 1e-15 * (1.0 + cs.gamma) {
        bail!(InvalidParameter, "quadrature table built for gamma = {}, model has {}", table.gamma, cs.gamma);
    }
    let r = libm::hypot(x[0], x[1]);
    let phi = libm::atan2(x[1], x[0]);
    let at = libm::fabs(tau);
    let xi = r / (libm::sqrt(1.0 - cs.gamma * cs.gamma) * cs.v_f * at);
    Ok(-cs.g_eff / (cs.v_f * cs.v_f * at * at * at) * table.f(phi, xi)?)
}

/// Moments of `Φ` that encode the time sum rule
/// `∫dτ v_eff(τ, x) = −g_eff δ²(x)`.
///
/// Substituting `u = R/(√(1−γ²)v_F|τ|)` gives
/// `∫dτ v_eff = −2(1−γ²) g_eff R⁻² ∫₀^∞ u f_γ(φ, u) du`. As a distribution
/// in the plane this equals `−g_eff δ²(x)` iff `∫₀^∞ uΦ(u)du = 0` (nothing
/// left at `R > 0`) and `−2(1−γ²)∫₀^∞ u ln u Φ(u) du = 1` (unit weight at
/// the origin).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRule {
    /// `∫₀^∞ u Φ(u) du`, should vanish.
    pub zeroth: f64,
    /// `−2(1−γ²) ∫₀^∞ u ln u Φ(u) du`, should equal 1.
    pub weight: f64,
}

/// Evaluates [`SumRule`] by the trapezoid rule in `t = ln u` over
/// `[t_min, t_max]` with `n` intervals. In `t` the integrands decay like
/// `e^{t}` for `t → −∞` and like `t e^{−t}` for `t → +∞`; `[−30, 30]` keeps
/// the truncation below `1e−11`.
pub fn sum_rule(table: &ChiTable, t_min: f64, t_max: f64, n: usize) -> Result<SumRule> {
    if !(t_min < t_max) || n < 16 {
        bail!(InvalidParameter, "sum-rule grid needs t_min < t_max and at least 16 intervals");
    }
    let h = (t_max - t_min) / n as f64;
    let mut z = Vec::with_capacity(n + 1);
    let mut l = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = t_min + h * i as f64;
        let u = libm::exp(t);
        let end = if i == 0 || i == n { 0.5 } else { 1.0 };
        let g = end * u * u * table.angular_average(u)?;
        z.push(g);
        l.push(g * t);
    }
    let g = table.gamma;
    Ok(SumRule { zeroth: h * pairwise_sum(&z), weight: -2.0 * (1.0 - g * g) * h * pairwise_sum(&l) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_axes_and_origin() {
        let t = ChiTable::new(0.3, QuadratureSpec::default()).unwrap();
        assert!(t.f(0.0, 1.0).is_err());
        assert!(t.f(pi() / 2.0, 1.0).is_err());
        assert!(t.f(0.4, 0.0).is_err());
        assert!(t.f(0.4, 1.0).is_ok());
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(ChiTable::new(0.3, QuadratureSpec { n_nodes: 63, graded: true }).is_err());
        assert!(ChiTable::new(1.0, QuadratureSpec::default()).is_err());
    }

    #[test]
    fn graded_nodes_converge_faster() {
        let a = f_gamma(pi() / 8.0, 0.05, 0.5, QuadratureSpec { n_nodes: 2048, graded: true }).unwrap();
        let b = f_gamma(pi() / 8.0, 0.05, 0.5, QuadratureSpec { n_nodes: 4096, graded: true }).unwrap();
        assert!((a - b).abs() <= 1e-10 * b.abs());
    }
}
