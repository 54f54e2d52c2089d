//! Bosonized nodal sector: boson dispersion, a numerical Bogoliubov
//! check of it, the ground-state energy and the regularized free energy.
//!
//! Boson momenta are bosonic [`MomentumIndex`] values. Mode `(s, p)` exists
//! for `p ∈ C_s` with `p_s ≠ 0`; zero modes are rejected.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use nalgebra::Matrix2;

use crate::couplings::Model;
use crate::error::bail;
use crate::lattice::{Kind, MomentumIndex};
use crate::linalg::normal_mode_frequencies;
use crate::partition::{cutoff_chi, in_c, in_c_s, m_s, S};
use crate::{pairwise_sum, sq, Result};

fn check_boson(p: MomentumIndex) -> Result<()> {
    if p.kind != Kind::Bosonic {
        bail!(Domain, "boson momenta must use the integer (bosonic) grid");
    }
    Ok(())
}

fn component(p: [f64; 2], s: S) -> f64 {
    if s == S::Plus {
        p[0]
    } else {
        p[1]
    }
}

/// Closed-form boson dispersion `ω_s(p)`.
///
/// Inside `C` the branch `s = +` is the larger root. On the axes of `C`
/// (`p_{−s} = 0`) the modes decouple and each keeps its own label, so
/// `ω_s = v_F√(1−γ²)|p_s|` there.
pub fn omega_closed(s: S, p: MomentumIndex, m: &Model) -> Result<f64> {
    check_boson(p)?;
    let pp = &m.partition;
    let cs = &m.couplings;
    if pp.b1 != 1.0 || pp.b2 != 1.0 {
        bail!(InvalidParameter, "the closed-form dispersion assumes cutoff widths b1 = b2 = 1");
    }
    if !s.is_nodal() {
        bail!(Domain, "boson branch must be + or -");
    }
    if !in_c_s(s, p, pp) {
        bail!(Domain, "momentum {:?} is outside C_{}", p, if s == S::Plus { "+" } else { "-" });
    }
    let ms = m_s(p, s);
    if ms == 0 {
        bail!(Domain, "zero mode p_s = 0 is excluded");
    }
    let k = p.diag(&m.lattice);
    let ps = component(k, s).abs();
    let g = cs.gamma;
    if ms.abs() > pp.inner_half_width() {
        return Ok(cs.v_f * ps);
    }
    if !in_c(p, pp) || m_s(p, s.flip()) == 0 {
        return Ok(cs.v_f * libm::sqrt(1.0 - g * g) * ps);
    }
    let [kp, km] = k;
    if g == 0.0 {
        // free branches, exactly: s = + carries the larger component
        let (hi, lo) = (kp.abs().max(km.abs()), kp.abs().min(km.abs()));
        return Ok(cs.v_f * if s == S::Plus { hi } else { lo });
    }
    let big_a = 1.0 - sq(g / (1.0 + g));
    let p2 = kp * kp + km * km;
    let cross = sq(2.0 * kp * km);
    let root = libm::sqrt(p2 * p2 - big_a * cross);
    let inner = match s {
        S::Plus => p2 + root,
        // conjugate form avoids cancellation on the soft branch
        _ => big_a * cross / (p2 + root),
    };
    Ok(cs.v_f * libm::sqrt(0.5 * (1.0 - g * g) * inner))
}

/// Normal-mode frequencies of the coupled two-mode form at `p ∈ C₊ ∩ C₋`,
/// descending, from `K = v_F diag(1 − γχ_±)` and
/// `U = v_F [[(1+γχ₊)p₊², γχ₊χ₋p₊p₋], [γχ₊χ₋p₊p₋, (1+γχ₋)p₋²]]`.
///
/// This diagonalizes the form numerically and shares no algebra with
/// [`omega_closed`]. A vanishing component yields a zero frequency.
pub fn bogoliubov_numeric(p: MomentumIndex, m: &Model) -> Result<[f64; 2]> {
    check_boson(p)?;
    let pp = &m.partition;
    if !(in_c_s(S::Plus, p, pp) && in_c_s(S::Minus, p, pp)) {
        bail!(Domain, "momentum {:?} is outside C+ ∩ C-", p);
    }
    let cs = &m.couplings;
    let [kp, km] = p.diag(&m.lattice);
    let chi = |s| if cutoff_chi(s, p, pp) { 1.0_f64 } else { 0.0 };
    let (cp, cm) = (chi(S::Plus), chi(S::Minus));
    let g = cs.gamma;
    if g * cp.max(cm) >= 1.0 {
        return Err(crate::Error::Unstable(g));
    }
    let v = cs.v_f;
    let k = Matrix2::new(v * (1.0 - g * cp), 0.0, 0.0, v * (1.0 - g * cm));
    let off = v * g * cp * cm * kp * km;
    let u = Matrix2::new(v * (1.0 + g * cp) * kp * kp, off, off, v * (1.0 + g * cm) * km * km);
    normal_mode_frequencies(k, u)
}

/// Modes `(s, p)` whose frequency differs from `v_F|p_s|`:
/// `1 ≤ |m_s| ≤ n_κ`, `|m_{−s}| ≤ n_L − n_κ − 1`.
pub fn interacting_modes(m: &Model) -> Vec<(S, MomentumIndex)> {
    let pp = &m.partition;
    let ni = pp.inner_half_width();
    let no = pp.outer_half_width();
    let mut out = Vec::new();
    for s in S::NODAL {
        for a in -ni..=ni {
            if a == 0 {
                continue;
            }
            for b in -no..=no {
                let p = if s == S::Plus { MomentumIndex::bosonic(a, b) } else { MomentumIndex::bosonic(b, a) };
                out.push((s, p));
            }
        }
    }
    out
}

/// `ω_s(p) − v_F|p_s|`, exactly zero outside the interacting window.
pub fn mode_shift(s: S, p: MomentumIndex, m: &Model) -> Result<f64> {
    let w = omega_closed(s, p, m)?;
    let ps = component(p.diag(&m.lattice), s).abs();
    Ok(w - m.couplings.v_f * ps)
}

/// Nodal ground-state energy `E_n = ½ Σ_s Σ_{p∈C_s} [ω_s(p) − v_F|p_s|]`.
/// Only the finitely many interacting modes contribute, so the sum is exact.
pub fn ground_energy(m: &Model) -> Result<f64> {
    Ok(0.5 * sum_by_momentum(interacting_modes(m), |s, p| mode_shift(s, p, m))?)
}

/// Sums `term(s, p)` over the modes, adding the two branches at each `p`
/// first. Inside `C` the branches trade weight, so this grouping makes
/// the `γ = 0` cancellation exact.
fn sum_by_momentum(modes: Vec<(S, MomentumIndex)>, mut term: impl FnMut(S, MomentumIndex) -> Result<f64>) -> Result<f64> {
    let mut by_p: BTreeMap<(i64, i64), f64> = BTreeMap::new();
    for (s, p) in modes {
        *by_p.entry((p.m_plus, p.m_minus)).or_insert(0.0) += term(s, p)?;
    }
    let terms: Vec<f64> = by_p.into_values().collect();
    Ok(pairwise_sum(&terms))
}

/// `ln sinh x` for `x > 0`, accurate for large and small arguments.
pub fn log_sinh(x: f64) -> f64 {
    x + libm::log(-libm::expm1(-2.0 * x)) - core::f64::consts::LN_2
}

/// Mode window for the free energy when `β₀ ≠ β`: modes with
/// `1 ≤ |m_s| ≤ max_m` and `p ∈ C_s` are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeWindow {
    pub max_m: i64,
}

/// `log Z_n` with `Z_n = Π_{s,p} sinh²(β₀v_F|p_s|/2)/sinh²(βω_s(p)/2)`.
///
/// With `β₀ = β` every non-interacting mode contributes a factor 1 and the
/// product is exact. Any other `β₀` needs an explicit window.
pub fn log_partition(beta: f64, beta0: f64, window: Option<ModeWindow>, m: &Model) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite() && beta0 > 0.0 && beta0.is_finite()) {
        bail!(Domain, "inverse temperatures must be positive and finite (beta={beta}, beta0={beta0})");
    }
    let v = m.couplings.v_f;
    let modes = if beta0 == beta {
        interacting_modes(m)
    } else {
        let Some(w) = window else {
            bail!(Domain, "beta0 != beta makes the mode product infinite; supply an explicit mode window");
        };
        let no = m.partition.outer_half_width();
        let mut out = Vec::new();
        for s in S::NODAL {
            for a in -w.max_m..=w.max_m {
                if a == 0 {
                    continue;
                }
                for b in -no..=no {
                    let p = if s == S::Plus { MomentumIndex::bosonic(a, b) } else { MomentumIndex::bosonic(b, a) };
                    out.push((s, p));
                }
            }
        }
        out
    };
    sum_by_momentum(modes, |s, p| {
        let w = omega_closed(s, p, m)?;
        let ps = component(p.diag(&m.lattice), s).abs();
        Ok(2.0 * (log_sinh(0.5 * beta0 * (v * ps)) - log_sinh(0.5 * beta * w)))
    })
}

/// Nodal free energy per area `−log Z_n/(βL²)`.
pub fn free_energy(beta: f64, beta0: f64, window: Option<ModeWindow>, m: &Model) -> Result<f64> {
    let lz = log_partition(beta, beta0, window, m)?;
    Ok(-lz / (beta * sq(m.lattice.l())))
}
