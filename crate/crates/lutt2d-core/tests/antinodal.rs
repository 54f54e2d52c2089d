use std::f64::consts::PI;

use lutt2d_core::antinodal::{
    bardeen_pines, bardeen_pines_with, renormalized_coupling, static_region, veff_hat, veff_static, w, StaticRegion,
};
use lutt2d_core::couplings::Model;
use lutt2d_core::nodal::omega_closed;
use lutt2d_core::partition::{cutoff_chi, in_c, in_c_s, m_s};
use lutt2d_core::{Error, ModelParams, MomentumIndex, PartitionParams, R, S};
use nalgebra::{Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(t_prime: f64, v: f64, n_l: u32, nk: u32, nq: u32) -> Model {
    let p = ModelParams::new(1.0, t_prime, v, 0.0, 1.0, n_l).unwrap();
    let pp = PartitionParams::new(&p, nk, nq, 0.5).unwrap();
    Model::new(p, pp).unwrap()
}

/// Configurations on the `n_L = 40` grid with `κ` on both sides of ½.
fn grid_models() -> Vec<Model> {
    vec![
        model(0.0, 2.0, 40, 31, 36),
        model(-0.2, 1.5, 40, 10, 43),
        model(0.1, 3.0, 40, 19, 38),
        model(-0.1, 0.8, 40, 24, 33),
    ]
}

/// `v̂_eff` from the two-mode action: `−g₄²/(2πã) pᵀ D p` on `C` with
/// `D⁻¹ = [[A₊, B], [B, A₋]]`, `−g₄²/(2πã) χ_s p_s²/A_s` on `C_s \ C`.
fn matrix_route(omega: f64, q: MomentumIndex, m: &Model) -> f64 {
    let cs = &m.couplings;
    let pp = &m.partition;
    let [kp, km] = q.diag(&m.lattice);
    let g = cs.gamma;
    let v = cs.v_f;
    let chi = |s| if cutoff_chi(s, q, pp) { 1.0 } else { 0.0 };
    let a = |s, ps: f64| omega * omega / (v * (1.0 - g * chi(s))) + v * (1.0 + g * chi(s)) * ps * ps;
    let pre = -cs.g4 * cs.g4 / (2.0 * PI * cs.a_tilde);
    if in_c(q, pp) && (omega != 0.0 || (kp != 0.0 && km != 0.0)) {
        let d_inv = Matrix2::new(a(S::Plus, kp), v * g * kp * km, v * g * kp * km, a(S::Minus, km));
        let pv = Vector2::new(kp, km);
        let d = d_inv.try_inverse().unwrap();
        return pre * (pv.transpose() * d * pv)[(0, 0)];
    }
    let mut acc = 0.0;
    for (s, ps) in [(S::Plus, kp), (S::Minus, km)] {
        if in_c_s(s, q, pp) && chi(s) == 1.0 && ps != 0.0 {
            acc += ps * ps / a(s, ps);
        }
    }
    pre * acc
}

fn grid(n_l: u32) -> impl Iterator<Item = MomentumIndex> {
    let h = 2 * n_l as i64;
    (-h..=h).flat_map(move |a| (-h..=h).map(move |b| MomentumIndex::bosonic(a, b)))
}

#[test]
fn static_limit_collapses_to_piecewise_constants() {
    for m in grid_models() {
        let mut seen = [0usize; 3];
        for q in grid(40) {
            let dynamic = veff_hat(0.0, q, &m).unwrap();
            let flat = veff_static(q, &m);
            if flat == 0.0 {
                assert_eq!(dynamic, 0.0);
            } else {
                assert!((dynamic - flat).abs() <= 1e-12 * flat.abs(), "{q:?}: {dynamic} vs {flat}");
            }
            seen[static_region(q, &m) as usize] += 1;
        }
        // all three values occur, the single-mode one for κ on either side of ½
        assert!(seen.iter().all(|&n| n > 0), "{seen:?} at kappa = {}", m.couplings.kappa);
    }
}

#[test]
fn matches_the_two_mode_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for m in grid_models() {
        let scale = m.couplings.v_f * m.lattice.delta();
        for q in grid(40).step_by(7) {
            for omega in [0.0, 0.3 * scale, 2.0 * scale, rng.random_range(0.0..20.0) * scale] {
                let a = veff_hat(omega, q, &m).unwrap();
                let b = matrix_route(omega, q, &m);
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{q:?} at {omega}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn single_mode_constant() {
    let m = model(0.0, 2.0, 40, 10, 43);
    let cs = &m.couplings;
    let want = -cs.g_eff * (0.5 + cs.gamma) / (1.0 + cs.gamma);
    // on the p₊ axis inside C only one mode couples
    let q = MomentumIndex::bosonic(3, 0);
    assert_eq!(static_region(q, &m), StaticRegion::SingleMode);
    assert!((veff_hat(0.0, q, &m).unwrap() - want).abs() <= 1e-13 * want.abs());
}

#[test]
fn spectral_weights() {
    let m = model(-0.1, 1.2, 40, 24, 33);
    let pp = &m.partition;
    let v2 = m.couplings.v_f * m.couplings.v_f;
    for q in grid(40) {
        for s in S::NODAL {
            let x = w(s, q, &m).unwrap();
            assert!(x >= 0.0, "{q:?} {s:?} {x:e}");
            let diagonal = in_c(q, pp) && s == S::Minus && q.m_plus.abs() == q.m_minus.abs();
            let support = m_s(q, s) != 0 && in_c_s(s, q, pp) && cutoff_chi(s, q, pp) && !diagonal;
            assert_eq!(x > 0.0, support, "{q:?} {s:?}");
        }
    }
    // quadratic vanishing at small p
    let d = m.lattice.delta();
    let w1 = w(S::Plus, MomentumIndex::bosonic(1, 1), &m).unwrap();
    let w2 = w(S::Plus, MomentumIndex::bosonic(2, 2), &m).unwrap();
    assert!((w2 / w1 - 4.0).abs() < 1e-12);
    assert!(w1 < 4.0 * v2 * d * d);
}

#[test]
fn weights_at_zero_coupling() {
    let mut m = model(0.0, 1.0, 20, 12, 21);
    m.couplings.gamma = 0.0;
    let v2 = m.couplings.v_f * m.couplings.v_f;
    for a in -7i64..=7 {
        for b in -7i64..=7 {
            let q = MomentumIndex::bosonic(a, b);
            if !in_c(q, &m.partition) || a == 0 || b == 0 {
                continue;
            }
            let [kp, km] = q.diag(&m.lattice);
            let (hi, lo) = ((kp * kp).max(km * km), (kp * kp).min(km * km));
            assert!((w(S::Plus, q, &m).unwrap() - 2.0 * v2 * hi).abs() <= 1e-13 * v2 * hi);
            assert!((w(S::Minus, q, &m).unwrap() - 2.0 * v2 * lo).abs() <= 1e-13 * v2 * hi);
        }
    }
}

#[test]
fn attractive_and_decaying() {
    let m = model(0.0, 2.0, 20, 15, 18);
    let cs = &m.couplings;
    let pre = -cs.g4 * cs.g4 / (4.0 * PI * cs.a_tilde * cs.v_f);
    for q in grid(20).step_by(3) {
        let sum_w: f64 = S::NODAL.iter().map(|&s| w(s, q, &m).unwrap()).sum();
        for omega in [0.0, 0.5, 5.0] {
            assert!(veff_hat(omega, q, &m).unwrap() <= 0.0);
        }
        let big = 1e7;
        let tail = veff_hat(big, q, &m).unwrap() * big * big;
        assert!((tail - pre * sum_w).abs() <= 1e-9 * (pre * sum_w).abs().max(1e-300));
    }
}

#[test]
fn bardeen_pines_limits_and_symmetry() {
    let m = model(-0.1, 1.5, 20, 9, 22);
    let pp = &m.partition;
    let nk = pp.n_kappa as i64;
    let mut checked = 0;
    for (a, b) in [(1, 0), (0, 1), (1, 1), (2, -1), (-3, 2)] {
        let q = MomentumIndex::bosonic(a, b);
        let flat = veff_hat(0.0, q, &m).unwrap();
        assert!((bardeen_pines_with(0.0, 0.0, q, &m).unwrap() - flat).abs() <= 1e-13 * flat.abs());
        for kp in -nk - 1..nk {
            for km in -nk - 1..nk {
                let k = MomentumIndex::fermionic(kp, km);
                for (r, r2) in [(R::Plus, R::Plus), (R::Plus, R::Minus), (R::Minus, R::Plus)] {
                    let Ok(x) = bardeen_pines(r, r2, k, q, &m) else { continue };
                    assert!(x.is_finite());
                    let back = MomentumIndex::fermionic(kp - a, km - b);
                    let y = bardeen_pines(r2, r, back, MomentumIndex::bosonic(-a, -b), &m).unwrap();
                    assert!((x - y).abs() <= 1e-12 * x.abs(), "{k:?} {q:?}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
    // exchange structure of the two denominators
    let q = MomentumIndex::bosonic(2, 1);
    let (d1, d2) = (0.13, -0.07);
    let x = bardeen_pines_with(d1, d2, q, &m).unwrap();
    let y = bardeen_pines_with(-d2, -d1, q, &m).unwrap();
    assert!((x - y).abs() <= 1e-14 * x.abs());
}

#[test]
fn bardeen_pines_reports_resonances() {
    let m = model(-0.1, 1.5, 20, 9, 22);
    let q = MomentumIndex::bosonic(2, 1);
    let om = omega_closed(S::Plus, q, &m).unwrap();
    assert!(matches!(bardeen_pines_with(om, 0.0, q, &m), Err(Error::Resonance { .. })));
    // k outside the antinodal window
    let far = MomentumIndex::fermionic(30, 0);
    assert!(bardeen_pines(R::Plus, R::Plus, far, q, &m).is_err());
}

#[test]
fn renormalized_coupling_values() {
    let p = ModelParams::new(1.0, 0.0, 2.0, 0.0, 1.0, 1).unwrap();
    let pp = PartitionParams::new(&p, 0, 1, 0.5).unwrap();
    let m = Model::new(p, pp).unwrap();
    assert!((renormalized_coupling(&m) - (4.0 - 2.0 / (PI + 1.0))).abs() < 1e-13);
    let weak = model(0.0, 1e-9, 10, 6, 9);
    assert!(renormalized_coupling(&weak).abs() < 1e-8);
    for m in grid_models() {
        assert!(renormalized_coupling(&m) < m.couplings.g3);
    }
}
