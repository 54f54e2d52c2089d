//! Constants of the 2D Luttinger model derived from the lattice model:
//! Taylor-expanded dispersions, couplings, fillings, flavor chemical
//! potentials, normal-ordering constants, the validity check and the
//! particle-hole map.
//!
//! The symbol written `2Q/π` below is the ratio that makes the total filling
//! equal to `½` at `κ = ½, Q = π/2, ν_a = ½`.

use alloc::vec::Vec;

use crate::error::bail;
use crate::lattice::{dispersion, ModelParams};
use crate::partition::{
    area_fractions, q_index, region_points, Flavor, FlavorMap, PartitionParams, R, S,
};
use crate::vertices::fock_coupling;
use crate::{pairwise_sum, pi, sq, Result, SQRT2};

/// Every derived constant of the Luttinger model.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSet {
    pub kappa: f64,
    pub q: f64,
    /// Nodal Fermi velocity `2√2 sin Q [t + 2t′cos Q] a`.
    pub v_f: f64,
    pub c_f: f64,
    pub c_f_prime: f64,
    /// Effective nodal lattice spacing `√2 a/(1−κ)`.
    pub a_tilde: f64,
    pub gamma: f64,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub g4: f64,
    /// Boson-induced antinodal coupling, closed form in the lattice parameters.
    pub g_eff: f64,
    /// Same quantity as `g4²/[π ã v_F (1+2γ)]`.
    pub g_eff_alt: f64,
    /// Bare μ implied by `μ_{r,±} = 0`.
    pub mu: f64,
    pub mu0: f64,
    pub mu_plus2: f64,
    pub mu_minus2: f64,
    pub mu_rs: FlavorMap<f64>,
    pub nu_rs: FlavorMap<f64>,
    pub nu: f64,
    /// Normal-ordering constant `E₀` (Dirac-sea sum plus `E_int`).
    pub e0: f64,
    pub e_int: f64,
}

/// Lattice parameters, partition and the couplings derived from them,
/// validated together once.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub lattice: ModelParams,
    pub partition: PartitionParams,
    pub couplings: CouplingSet,
}

impl Model {
    pub fn new(lattice: ModelParams, partition: PartitionParams) -> Result<Self> {
        let couplings = derive_couplings(&lattice, &partition)?;
        Ok(Self { lattice, partition, couplings })
    }
}

/// `ε(Q_{r,s})`, from the lattice dispersion.
pub fn eps_q(f: Flavor, p: &ModelParams, pp: &PartitionParams) -> f64 {
    dispersion(q_index(f, pp).cartesian(p), p)
}

/// Taylor-expanded dispersion `E_{r,s}(k)` at a diagonal momentum `(k₊, k₋)`.
pub fn linearized_dispersion(f: Flavor, k: [f64; 2], cs: &CouplingSet) -> f64 {
    let r = f.r.sign() as f64;
    let [kp, km] = k;
    match f.s {
        S::Zero => -r * cs.c_f * kp * km - cs.c_f_prime * (kp * kp + km * km),
        S::Plus => r * cs.v_f * kp,
        S::Minus => r * cs.v_f * km,
        S::Two => (-r * cs.c_f / 2.0 + cs.c_f_prime) * (kp * kp + km * km),
    }
}

/// Flavor fillings `ν_{r,s}` and total `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fillings {
    pub nu_rs: FlavorMap<f64>,
    pub nu: f64,
}

pub fn fillings(pp: &PartitionParams) -> Fillings {
    let k = pp.kappa();
    let q2 = 2.0 * pp.q() / pi();
    let nu_rs = FlavorMap::from_fn(|f| match (f.r, f.s) {
        (_, S::Zero) => 0.5 * pp.nu_a * k * k,
        (_, S::Plus | S::Minus) => 0.25 * (1.0 - k) * (q2 - 1.0 + k),
        (R::Minus, S::Two) => 0.5 * (1.0 - k) * (1.0 - k),
        (R::Plus, S::Two) => 0.0,
    });
    let nu = 0.5 + (1.0 - k) * (q2 - 1.0) + k * k * (pp.nu_a - 0.5);
    Fillings { nu_rs, nu }
}

/// Flavor chemical potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChemicalPotentials {
    /// Bare μ fixed by `μ_{+,+} = 0`.
    pub mu: f64,
    pub mu_rs: FlavorMap<f64>,
    /// Closed forms, for cross-checking `mu_rs`.
    pub mu0_closed: f64,
    pub mu_plus2_closed: f64,
    pub mu_minus2_closed: f64,
}

/// `μ_{r,s} = μ − ε(Q_{r,s}) − 2Vν − Σ v_{r,s,r′,s′}(f_{r′,s′} − 2ν_{r′,s′})` without μ.
fn mu_rs_offset(f: Flavor, p: &ModelParams, pp: &PartitionParams, fill: &Fillings) -> f64 {
    let area = area_fractions(pp);
    let total: f64 = fill.nu_rs.0.iter().sum();
    let mut terms: Vec<f64> = Flavor::ALL
        .iter()
        .map(|&g| fock_coupling(f, g, pp, p) * (area[g] - 2.0 * fill.nu_rs[g]))
        .collect();
    terms.push(2.0 * p.v * total);
    terms.push(eps_q(f, p, pp));
    -pairwise_sum(&terms)
}

pub fn chemical_potentials(p: &ModelParams, pp: &PartitionParams, fill: &Fillings) -> ChemicalPotentials {
    let node = Flavor::new(R::Plus, S::Plus);
    let mu = -mu_rs_offset(node, p, pp, fill);
    let mu_rs = FlavorMap::from_fn(|f| mu + mu_rs_offset(f, p, pp, fill));
    ChemicalPotentials {
        mu,
        mu_rs,
        mu0_closed: mu0_closed(p, pp),
        mu_plus2_closed: mu_pm2_closed(R::Plus, p, pp),
        mu_minus2_closed: mu_pm2_closed(R::Minus, p, pp),
    }
}

/// `μ₀ = −4t′ − [4t + V(1−κ)²] cos Q − [4t′ + 2V(1−κ)(2Q/π − 1)] cos²Q`.
pub fn mu0_closed(p: &ModelParams, pp: &PartitionParams) -> f64 {
    let k = pp.kappa();
    let c = libm::cos(pp.q());
    let q2 = 2.0 * pp.q() / pi();
    -4.0 * p.t_prime - (4.0 * p.t + p.v * sq(1.0 - k)) * c - (4.0 * p.t_prime + 2.0 * p.v * (1.0 - k) * (q2 - 1.0)) * c * c
}

/// `μ_{±,2} = ∓[4t + V(1−κ)(1−κ + 2(2Q/π−1)cos Q)][1 ± cos Q] + 4t′ sin²Q`.
pub fn mu_pm2_closed(r: R, p: &ModelParams, pp: &PartitionParams) -> f64 {
    let k = pp.kappa();
    let c = libm::cos(pp.q());
    let q2 = 2.0 * pp.q() / pi();
    let sgn = r.sign() as f64;
    -sgn * (4.0 * p.t + p.v * (1.0 - k) * (1.0 - k + 2.0 * (q2 - 1.0) * c)) * (1.0 + sgn * c)
        + 4.0 * p.t_prime * sq(libm::sin(pp.q()))
}

/// Derives the full coupling set. Fails when `γ ≥ 1`.
pub fn derive_couplings(p: &ModelParams, pp: &PartitionParams) -> Result<CouplingSet> {
    p.validate()?;
    pp.validate()?;
    pp.check_model(p)?;
    let k = pp.kappa();
    if k >= 1.0 {
        bail!(InvalidParameter, "kappa = 1 leaves no nodal strip (a_tilde diverges)");
    }
    let q = pp.q();
    let (sq_, cq) = (libm::sin(q), libm::cos(q));
    let a = p.a;
    let band = p.t + 2.0 * p.t_prime * cq;
    let v_f = 2.0 * SQRT2 * sq_ * band * a;
    let a_tilde = SQRT2 * a / (1.0 - k);
    let gamma = p.v * (1.0 - k) * sq_ / (2.0 * pi() * band);
    if !(gamma < 1.0) || !(v_f > 0.0) {
        return Err(crate::Error::Unstable(gamma));
    }
    let g1 = 2.0 * p.v * a * a * sq_ * sq_;
    let g2 = g1 / 2.0;
    let g3 = 2.0 * p.v * a * a;
    let g4 = g3;
    let g_eff = p.v * p.v * (1.0 - k) * a * a / (sq_ * pi() * (band + p.v / pi() * (1.0 - k) * sq_));
    let g_eff_alt = g4 * g4 / (pi() * a_tilde * v_f * (1.0 + 2.0 * gamma));

    let fill = fillings(pp);
    let chem = chemical_potentials(p, pp, &fill);
    let mut cs = CouplingSet {
        kappa: k,
        q,
        v_f,
        c_f: 2.0 * p.t * a * a,
        c_f_prime: 2.0 * p.t_prime * a * a,
        a_tilde,
        gamma,
        g1,
        g2,
        g3,
        g4,
        g_eff,
        g_eff_alt,
        mu: chem.mu,
        mu0: chem.mu_rs[Flavor::new(R::Plus, S::Zero)],
        mu_plus2: chem.mu_rs[Flavor::new(R::Plus, S::Two)],
        mu_minus2: chem.mu_rs[Flavor::new(R::Minus, S::Two)],
        mu_rs: chem.mu_rs,
        nu_rs: fill.nu_rs,
        nu: fill.nu,
        e0: 0.0,
        e_int: 0.0,
    };
    cs.e_int = e_int(p, pp, &cs);
    cs.e0 = sea_energy(p, pp, &cs) + cs.e_int;
    Ok(cs)
}

/// `E_int = (L/a)² (Vν² − μν + Σ v_{r,s,r′,s′} ν_{r,s}(f_{r′,s′} − ν_{r′,s′}))`.
pub fn e_int(p: &ModelParams, pp: &PartitionParams, cs: &CouplingSet) -> f64 {
    let area = area_fractions(pp);
    let mut terms = Vec::with_capacity(66);
    terms.push(p.v * cs.nu * cs.nu);
    terms.push(-cs.mu * cs.nu);
    for f in Flavor::ALL {
        for g in Flavor::ALL {
            terms.push(fock_coupling(f, g, pp, p) * cs.nu_rs[f] * (area[g] - cs.nu_rs[g]));
        }
    }
    p.sites() as f64 * pairwise_sum(&terms)
}

/// Occupied local momenta of flavor `f` in the reference state `Ω`.
///
/// Nodal flavors are filled for `r k_s < 0`, the in-band is full and the
/// out-band empty. Each antinodal flavor holds the `round(ν_a (2n_κ+1)²)`
/// lowest-`E_{r,0}` states; the energy sum does not depend on how ties are
/// broken.
pub fn filled_energies(f: Flavor, p: &ModelParams, pp: &PartitionParams, cs: &CouplingSet) -> Vec<f64> {
    let pts = region_points(f, pp);
    let energies = pts.iter().map(|l| linearized_dispersion(f, l.diag(p), cs));
    match f.s {
        S::Two if f.r == R::Minus => energies.collect(),
        S::Two => Vec::new(),
        S::Plus | S::Minus => pts
            .iter()
            .zip(energies)
            .filter(|(l, _)| {
                let ks = if f.s == S::Plus { l.m_plus } else { l.m_minus };
                // sign of k_s = Δ(m + ½)
                f.r.sign() * (2 * ks + 1) < 0
            })
            .map(|(_, e)| e)
            .collect(),
        S::Zero => {
            let mut all: Vec<f64> = energies.collect();
            all.sort_by(f64::total_cmp);
            let n = libm::round(pp.nu_a * all.len() as f64) as usize;
            all.truncate(n);
            all
        }
    }
}

/// `Σ_{r,s} Σ_{k∈S_{r,s}} [ε(Q_{r,s}) + E_{r,s}(k)]`.
pub fn sea_energy(p: &ModelParams, pp: &PartitionParams, cs: &CouplingSet) -> f64 {
    let parts: Vec<f64> = Flavor::ALL
        .iter()
        .map(|&f| {
            let e = filled_energies(f, p, pp, cs);
            e.len() as f64 * eps_q(f, p, pp) + pairwise_sum(&e)
        })
        .collect();
    pairwise_sum(&parts)
}

/// `Σ_{r,s} Σ_{k∈Λ*_{r,s}} [ε(Q_{r,s}) + E_{r,s}(k)]` over every region point.
pub fn full_band_energy(p: &ModelParams, pp: &PartitionParams, cs: &CouplingSet) -> f64 {
    let parts: Vec<f64> = Flavor::ALL
        .iter()
        .map(|&f| {
            let e: Vec<f64> = region_points(f, pp).iter().map(|l| linearized_dispersion(f, l.diag(p), cs)).collect();
            e.len() as f64 * eps_q(f, p, pp) + pairwise_sum(&e)
        })
        .collect();
    pairwise_sum(&parts)
}

/// Outcome of the in/out band check.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    pub pass: bool,
    pub margin: f64,
    /// `μ_{−,2} − sup E_{−,2}`; must be at least the margin.
    pub in_slack: f64,
    /// `inf E_{+,2} − μ_{+,2}`; must be at least the margin.
    pub out_slack: f64,
    /// Set when the computed signs of `μ_{±,2}` are opposite to the
    /// `μ_{−,2} ≪ 0, μ_{+,2} ≫ 0` reading of the assumption.
    pub sign_note: Option<&'static str>,
}

/// Checks that the in-band is filled and the out-band empty with at least
/// `margin` to spare (typically `t/5`). Extremes are taken over the closed
/// square `|k±| ≤ (1−κ)π/(√2a)`.
pub fn validity_check(p: &ModelParams, pp: &PartitionParams, cs: &CouplingSet, margin: f64) -> ValidityReport {
    let half = (1.0 - pp.kappa()) * pi() / (SQRT2 * p.a);
    let corner = 2.0 * half * half;
    let ext = |r: R| {
        let c = linearized_dispersion(Flavor::new(r, S::Two), [1.0, 0.0], cs);
        (c.min(0.0) * corner, c.max(0.0) * corner)
    };
    let (_, sup_in) = ext(R::Minus);
    let (inf_out, _) = ext(R::Plus);
    let in_slack = cs.mu_minus2 - sup_in;
    let out_slack = inf_out - cs.mu_plus2;
    let sign_note = if cs.mu_minus2 > 0.0 || cs.mu_plus2 < 0.0 {
        Some("mu_{-,2} > 0 and/or mu_{+,2} < 0: the filled in-band / empty out-band orientation is used, not the printed mu_{-,2} << 0, mu_{+,2} >> 0")
    } else {
        None
    };
    ValidityReport {
        pass: in_slack >= margin && out_slack >= margin,
        margin,
        in_slack,
        out_slack,
        sign_note,
    }
}

/// Particle-hole transformation `(t′, Q, ν_a, μ) → (−t′, π−Q, 1−ν_a, 2V−μ)`.
pub fn particle_hole_map(p: &ModelParams, pp: &PartitionParams) -> Result<(ModelParams, PartitionParams)> {
    pp.check_model(p)?;
    let nq = 2 * pp.n_l as i64 - pp.n_q as i64;
    if nq < 1 {
        bail!(InvalidParameter, "pi - Q is off the quantization grid");
    }
    let p2 = ModelParams { t_prime: -p.t_prime, mu: 2.0 * p.v - p.mu, ..*p };
    let pp2 = PartitionParams { n_q: nq as u32, nu_a: 1.0 - pp.nu_a, ..*pp };
    p2.validate()?;
    pp2.validate()?;
    Ok((p2, pp2))
}
