//! Interaction between antinodal fermions induced by the nodal bosons.
//!
//! The frequency-dependent potential is
//! `v̂(ω, p) = −(g₄)²/(4πãv_F) Σ_s W_s(p)/(ω² + ω_s(p)²)`.
//! With this prefactor the static limit is `−g_eff` wherever both boson
//! modes couple, which is what integrating out the Gaussian boson field
//! gives.

use crate::couplings::{linearized_dispersion, Model};
use crate::error::bail;
use crate::lattice::{Kind, MomentumIndex};
use crate::nodal::omega_closed;
use crate::partition::{cutoff_chi, in_antinodal_window, in_c, in_c_s, m_s, Flavor, R, S};
use crate::{pi, sq, Result};

fn prefactor(m: &Model) -> f64 {
    let cs = &m.couplings;
    -cs.g4 * cs.g4 / (4.0 * pi() * cs.a_tilde * cs.v_f)
}

/// Spectral weight `W_s(p)` of boson mode `s` in the induced potential.
///
/// Inside `C`, off the axes, the closed form of the coupled pair applies.
/// Where the mode couples alone (axes of `C`, and `C_s \ C` with
/// `χ_s(p) = 1`) the weight is `2v_F²(1−γ)p_s²`. It vanishes elsewhere,
/// including at `p_s = 0`. The soft branch also decouples on the diagonal
/// `|p₊| = |p₋|` inside `C`.
pub fn w(s: S, p: MomentumIndex, m: &Model) -> Result<f64> {
    if p.kind != Kind::Bosonic {
        bail!(Domain, "boson momenta must use the integer (bosonic) grid");
    }
    if !s.is_nodal() {
        bail!(Domain, "boson branch must be + or -");
    }
    let pp = &m.partition;
    let cs = &m.couplings;
    if m_s(p, s) == 0 || !in_c_s(s, p, pp) || !cutoff_chi(s, p, pp) {
        return Ok(0.0);
    }
    let [kp, km] = p.diag(&m.lattice);
    let ps = if s == S::Plus { kp } else { km };
    let g = cs.gamma;
    let v2 = cs.v_f * cs.v_f;
    if !in_c(p, pp) || m_s(p, s.flip()) == 0 {
        return Ok(2.0 * v2 * (1.0 - g) * ps * ps);
    }
    let p2 = kp * kp + km * km;
    let diff = kp * kp - km * km;
    if g == 0.0 {
        let (hi, lo) = ((kp * kp).max(km * km), (kp * kp).min(km * km));
        return Ok(2.0 * v2 * if s == S::Plus { hi } else { lo });
    }
    let big_a = 1.0 - sq(g / (1.0 + g));
    let c = sq(2.0 * kp * km);
    let root = libm::sqrt(p2 * p2 - big_a * c);
    // W_± ∝ X ± Y with X = (1+γ)|p|²√…, Y = (p₊²−p₋²)² + γ|p|⁴; the soft
    // branch uses X − Y = c (p₊²−p₋²)²/(X + Y), which vanishes on the
    // diagonal without cancellation
    let x = (1.0 + g) * p2 * root;
    let y = diff * diff + g * p2 * p2;
    let num = if s == S::Plus { x + y } else { c * diff * diff / (x + y) };
    Ok(v2 * (1.0 - g) * num / ((1.0 + g) * root))
}

/// `v̂_eff(ω, p)` at Matsubara (or real, for plotting) frequency `ω`.
pub fn veff_hat(omega: f64, p: MomentumIndex, m: &Model) -> Result<f64> {
    let mut acc = 0.0;
    for s in S::NODAL {
        let ws = w(s, p, m)?;
        if ws == 0.0 {
            continue;
        }
        let om = omega_closed(s, p, m)?;
        acc += ws / (omega * omega + om * om);
    }
    Ok(prefactor(m) * acc)
}

/// Region of the static potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaticRegion {
    /// Both modes couple: `−g_eff`.
    Coupled,
    /// A single mode couples: `−g_eff(½+γ)/(1+γ)`.
    SingleMode,
    /// No coupling: 0.
    Outside,
}

/// Region classification in integers.
pub fn static_region(p: MomentumIndex, m: &Model) -> StaticRegion {
    let pp = &m.partition;
    let couples = |s| m_s(p, s) != 0 && in_c_s(s, p, pp) && cutoff_chi(s, p, pp);
    let (a, b) = (couples(S::Plus), couples(S::Minus));
    if a && b && in_c(p, pp) {
        StaticRegion::Coupled
    } else if a || b {
        StaticRegion::SingleMode
    } else {
        StaticRegion::Outside
    }
}

/// Piecewise-constant static potential `v̂_eff(0, p)`.
pub fn veff_static(p: MomentumIndex, m: &Model) -> f64 {
    let cs = &m.couplings;
    match static_region(p, m) {
        StaticRegion::Coupled => -cs.g_eff,
        StaticRegion::SingleMode => -cs.g_eff * (0.5 + cs.gamma) / (1.0 + cs.gamma),
        StaticRegion::Outside => 0.0,
    }
}

/// Energy transfer `E_{r,0}(k) − E_{r,0}(k−p)` for a local antinodal `k`.
pub fn energy_transfer(r: R, k: MomentumIndex, p: MomentumIndex, m: &Model) -> f64 {
    let f = Flavor::new(r, S::Zero);
    let kd = k.diag(&m.lattice);
    let pd = p.diag(&m.lattice);
    linearized_dispersion(f, kd, &m.couplings)
        - linearized_dispersion(f, [kd[0] - pd[0], kd[1] - pd[1]], &m.couplings)
}

/// Bardeen–Pines form of the induced potential,
/// `−(g₄)²/(4πãv_F) Σ_s [W_s/(2ω_s)][1/(ω_s − ΔE_r) + 1/(ω_s + ΔE_{r′})]`.
///
/// `k` is a local antinodal fermion momentum; `k` and `k − p` must both lie
/// in the antinodal window.
pub fn bardeen_pines(r: R, r2: R, k: MomentumIndex, p: MomentumIndex, m: &Model) -> Result<f64> {
    if k.kind != Kind::Fermionic || p.kind != Kind::Bosonic {
        bail!(Domain, "k must be a fermionic and p a bosonic momentum index");
    }
    let kp = MomentumIndex::fermionic(k.m_plus - p.m_plus, k.m_minus - p.m_minus);
    let pp = &m.partition;
    if !in_antinodal_window(k, pp) || !in_antinodal_window(kp, pp) {
        bail!(Domain, "k and k-p must both lie in the antinodal window");
    }
    let d1 = energy_transfer(r, k, p, m);
    let d2 = energy_transfer(r2, k, p, m);
    bardeen_pines_with(d1, d2, p, m)
}

/// [`bardeen_pines`] with the two energy transfers given explicitly.
pub fn bardeen_pines_with(de_r: f64, de_r2: f64, p: MomentumIndex, m: &Model) -> Result<f64> {
    let mut acc = 0.0;
    for s in S::NODAL {
        let ws = w(s, p, m)?;
        if ws == 0.0 {
            continue;
        }
        let om = omega_closed(s, p, m)?;
        for (den, de) in [(om - de_r, de_r), (om + de_r2, de_r2)] {
            if libm::fabs(den) < 1e-12 * om {
                return Err(crate::Error::Resonance { omega: om, delta_e: de });
            }
        }
        acc += ws / (2.0 * om) * (1.0 / (om - de_r) + 1.0 / (om + de_r2));
    }
    Ok(prefactor(m) * acc)
}

/// Coupling `g₃ − g_eff` of the effective antinodal Hamiltonian.
pub fn renormalized_coupling(m: &Model) -> f64 {
    m.couplings.g3 - m.couplings.g_eff
}
