use std::f64::consts::PI;

use lutt2d_core::couplings::Model;
use lutt2d_core::nodal::{
    bogoliubov_numeric, free_energy, ground_energy, interacting_modes, log_partition, mode_shift, omega_closed,
    ModeWindow,
};
use lutt2d_core::partition::{in_c, m_s};
use lutt2d_core::{ModelParams, MomentumIndex, PartitionParams, S};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Model at the requested `γ` by solving for `V`.
fn model_at(gamma: f64, t_prime: f64, n_l: u32, nk: u32, nq: u32) -> Model {
    let p0 = ModelParams::new(1.0, t_prime, 1.0, 0.0, 1.0, n_l).unwrap();
    let pp = PartitionParams::new(&p0, nk, nq, 0.5).unwrap();
    let band = p0.t + 2.0 * p0.t_prime * pp.q().cos();
    let v = if gamma == 0.0 { 1e-300 } else { gamma * 2.0 * PI * band / ((1.0 - pp.kappa()) * pp.q().sin()) };
    let p = ModelParams { v, ..p0 };
    let mut m = Model::new(p, pp).unwrap();
    if gamma == 0.0 {
        m.couplings.gamma = 0.0;
    }
    assert!((m.couplings.gamma - gamma).abs() < 1e-12);
    m
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn closed_form_matches_numerical_diagonalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gammas = [0.1, 0.5, 0.9];
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let g = gammas[i % 3];
        let n_l = rng.random_range(8..=40u32);
        let nk = rng.random_range(1..n_l - 1);
        let nq = n_l + 1;
        if nq as i64 - n_l as i64 > nk as i64 {
            continue;
        }
        let m = model_at(g, rng.random_range(-0.3..0.3), n_l, nk, nq);
        let pp = &m.partition;
        let w = pp.outer_half_width();
        let (a, b) = loop {
            let a = rng.random_range(-w..=w);
            let b = rng.random_range(-w..=w);
            if a != 0 && b != 0 {
                break (a, b);
            }
        };
        let p = MomentumIndex::bosonic(a, b);
        let mut closed = [omega_closed(S::Plus, p, &m).unwrap(), omega_closed(S::Minus, p, &m).unwrap()];
        closed.sort_by(|x, y| y.total_cmp(x));
        let num = bogoliubov_numeric(p, &m).unwrap();
        for j in 0..2 {
            worst = worst.max(rel(num[j], closed[j]));
        }
        if in_c(p, pp) {
            assert!(omega_closed(S::Plus, p, &m).unwrap() >= omega_closed(S::Minus, p, &m).unwrap());
        }
    }
    assert!(worst <= 1e-10, "max relative deviation {worst:e}");
}

#[test]
fn decoupled_limit_of_the_oracle() {
    let m = model_at(0.5, 0.0, 20, 6, 21);
    let v = m.couplings.v_f;
    let g = m.couplings.gamma;
    // inside the s = + cutoff, outside the s = − one: no cross term
    let p = MomentumIndex::bosonic(3, 10);
    let num = bogoliubov_numeric(p, &m).unwrap();
    let [kp, km] = p.diag(&m.lattice);
    let mut want = [v * (1.0 - g * g).sqrt() * kp.abs(), v * km.abs()];
    want.sort_by(|x, y| y.total_cmp(x));
    assert!(rel(num[0], want[0]) < 1e-12 && rel(num[1], want[1]) < 1e-12);
}

#[test]
fn free_branches_at_zero_coupling() {
    let m = model_at(0.0, 0.1, 16, 7, 15);
    let v = m.couplings.v_f;
    for a in -8i64..=8 {
        for b in -8i64..=8 {
            if a == 0 || b == 0 {
                continue;
            }
            let p = MomentumIndex::bosonic(a, b);
            let [kp, km] = p.diag(&m.lattice);
            let mut got = [omega_closed(S::Plus, p, &m).unwrap(), omega_closed(S::Minus, p, &m).unwrap()];
            let mut want = [v * kp.abs(), v * km.abs()];
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            assert!(rel(got[0], want[0]) < 1e-13 && rel(got[1], want[1]) < 1e-13);
            let num = bogoliubov_numeric(p, &m).unwrap();
            assert!(rel(num[0], want[1]) < 1e-13 && rel(num[1], want[0]) < 1e-13);
        }
    }
}

#[test]
fn diagonal_values() {
    let m = model_at(0.4, -0.2, 20, 12, 19);
    let (v, g) = (m.couplings.v_f, m.couplings.gamma);
    for q in 1..=7 {
        let p = MomentumIndex::bosonic(q, q);
        let k = p.diag(&m.lattice)[0];
        assert!(rel(omega_closed(S::Minus, p, &m).unwrap(), v * k * (1.0 - g).sqrt()) < 1e-13);
        assert!(rel(omega_closed(S::Plus, p, &m).unwrap(), v * k * ((1.0 - g) * (1.0 + 2.0 * g)).sqrt()) < 1e-13);
    }
}

#[test]
fn outer_modes_are_free() {
    let m = model_at(0.6, 0.0, 20, 6, 21);
    let v = m.couplings.v_f;
    let w = m.partition.outer_half_width();
    for a in 7..30i64 {
        for b in -w..=w {
            for s in S::NODAL {
                let p = if s == S::Plus { MomentumIndex::bosonic(a, b) } else { MomentumIndex::bosonic(b, a) };
                let ps = if s == S::Plus { p.diag(&m.lattice)[0] } else { p.diag(&m.lattice)[1] };
                assert_eq!(omega_closed(s, p, &m).unwrap(), v * ps.abs());
                assert_eq!(mode_shift(s, p, &m).unwrap(), 0.0);
            }
        }
    }
}

#[test]
fn continuity_across_the_coupled_region_edge() {
    // κ > ½: C ends at |m_s| = n_L − n_κ − 1, the cutoff at n_κ
    let m = model_at(0.7, 0.1, 20, 14, 21);
    let pp = &m.partition;
    let v = m.couplings.v_f;
    let g = m.couplings.gamma;
    let step = v * m.lattice.delta();
    for s in S::NODAL {
        for b in [0i64, 1, 2] {
            let at = |a: i64| {
                let p = if s == S::Plus { MomentumIndex::bosonic(a, b) } else { MomentumIndex::bosonic(b, a) };
                (omega_closed(s, p, &m).unwrap(), p)
            };
            // labels follow the larger root inside C, so compare the top
            // frequency at each p
            let top = |a: i64| {
                let p = if s == S::Plus { MomentumIndex::bosonic(a, b) } else { MomentumIndex::bosonic(b, a) };
                let other = omega_closed(s.flip(), p, &m).unwrap_or(0.0);
                omega_closed(s, p, &m).unwrap().max(other)
            };
            for a in 1..pp.inner_half_width() {
                let (w0, w1) = (top(a), top(a + 1));
                assert!((w1 - w0).abs() < 2.0 * step, "jump {w0} -> {w1} at m = {a}");
            }
            // the sharp cutoff makes the dispersion jump back to v_F|p_s|
            let (w_in, p_in) = at(pp.inner_half_width());
            let (w_out, p_out) = at(pp.inner_half_width() + 1);
            let comp = |p: MomentumIndex| if s == S::Plus { p.diag(&m.lattice)[0] } else { p.diag(&m.lattice)[1] };
            assert!(rel(w_in, v * (1.0 - g * g).sqrt() * comp(p_in).abs()) < 1e-12);
            assert_eq!(w_out, v * comp(p_out).abs());
        }
    }
}

#[test]
fn diagonal_soft_branch_softens_with_gamma() {
    let p = MomentumIndex::bosonic(2, 2);
    let mut last = f64::INFINITY;
    for g in [0.0, 0.2, 0.4, 0.6, 0.8, 0.95] {
        let m = model_at(g, 0.0, 12, 6, 13);
        let w = omega_closed(S::Minus, p, &m).unwrap() / m.couplings.v_f;
        assert!(w < last);
        last = w;
    }
}

#[test]
fn ground_energy_vanishes_without_coupling() {
    let m = model_at(0.0, 0.1, 20, 9, 22);
    let scale: f64 = interacting_modes(&m)
        .iter()
        .map(|&(s, p)| omega_closed(s, p, &m).unwrap())
        .sum();
    assert!(scale > 1.0);
    assert!(ground_energy(&m).unwrap().abs() <= 1e-12);
}

#[test]
fn ground_energy_is_negative_and_pairwise_lowered() {
    for g in [0.05, 0.3, 0.6, 0.9] {
        for (nk, nq) in [(4, 21), (10, 17), (16, 22)] {
            let m = model_at(g, -0.1, 20, nk, nq);
            assert!(ground_energy(&m).unwrap() < 0.0);
            let w = m.partition.inner_half_width().min(m.partition.outer_half_width());
            let v = m.couplings.v_f;
            for a in -w..=w {
                for b in -w..=w {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    let p = MomentumIndex::bosonic(a, b);
                    let [kp, km] = p.diag(&m.lattice);
                    let sum = omega_closed(S::Plus, p, &m).unwrap() + omega_closed(S::Minus, p, &m).unwrap();
                    assert!(sum <= v * (kp.abs() + km.abs()) * (1.0 + 1e-15));
                }
            }
        }
    }
}

#[test]
fn summand_support_is_exactly_the_inner_strip() {
    let m = model_at(0.5, 0.0, 20, 7, 22);
    let nk = m.partition.inner_half_width();
    let w = m.partition.outer_half_width();
    for s in S::NODAL {
        for a in -40i64..=40 {
            if a == 0 {
                continue;
            }
            for b in -w..=w {
                let p = if s == S::Plus { MomentumIndex::bosonic(a, b) } else { MomentumIndex::bosonic(b, a) };
                let shift = mode_shift(s, p, &m).unwrap();
                if a.abs() > nk {
                    assert_eq!(shift, 0.0);
                }
            }
        }
    }
    let modes = interacting_modes(&m);
    assert!(modes.iter().all(|&(s, p)| m_s(p, s).abs() <= nk));
}

#[test]
fn partition_function_is_one_without_coupling() {
    let m = model_at(0.0, 0.0, 16, 7, 17);
    for beta in [0.1, 1.0, 10.0, 100.0] {
        let lz = log_partition(beta, beta, None, &m).unwrap();
        assert!(lz.abs() <= 1e-12, "beta = {beta}: log Z = {lz:e}");
        assert!(free_energy(beta, beta, None, &m).unwrap().abs() <= 1e-12);
    }
}

#[test]
fn zero_temperature_limit_is_twice_the_ground_energy() {
    let m = model_at(0.5, -0.1, 16, 7, 17);
    let e = ground_energy(&m).unwrap();
    let beta = 1e4;
    let lim = -log_partition(beta, beta, None, &m).unwrap() / beta;
    assert!(rel(lim, 2.0 * e) < 1e-6, "{lim} vs {}", 2.0 * e);
}

#[test]
fn beta0_convention_drops_out_of_differences() {
    let m = model_at(0.5, 0.1, 16, 7, 15);
    let w = Some(ModeWindow { max_m: 12 });
    let diff = |b0: f64| log_partition(2.0, b0, w, &m).unwrap() - log_partition(5.0, b0, w, &m).unwrap();
    let d1 = diff(1.0);
    let d2 = diff(3.0);
    assert!((d1 - d2).abs() <= 1e-12 * d1.abs().max(1.0));
}

#[test]
fn invalid_inputs() {
    let m = model_at(0.5, 0.1, 16, 7, 15);
    assert!(omega_closed(S::Plus, MomentumIndex::fermionic(1, 1), &m).is_err());
    assert!(omega_closed(S::Zero, MomentumIndex::bosonic(1, 1), &m).is_err());
    assert!(omega_closed(S::Plus, MomentumIndex::bosonic(1, 40), &m).is_err());
    assert!(log_partition(-1.0, 1.0, None, &m).is_err());
    assert!(log_partition(f64::INFINITY, 1.0, None, &m).is_err());
}

proptest! {
    #[test]
    fn frequencies_are_even_and_positive(g in 0.0f64..0.97, a in -40i64..40, b in -6i64..6, nk in 1u32..14) {
        let m = model_at(g, 0.05, 20, nk, 20 + 1);
        for s in S::NODAL {
            let p = if s == S::Plus { MomentumIndex::bosonic(a, b) } else { MomentumIndex::bosonic(b, a) };
            prop_assume!(a != 0 && m_s(p, s.flip()).abs() <= m.partition.outer_half_width());
            let w = omega_closed(s, p, &m).unwrap();
            let wm = omega_closed(s, MomentumIndex::bosonic(-p.m_plus, -p.m_minus), &m).unwrap();
            prop_assert!(w > 0.0);
            prop_assert!((w - wm).abs() <= 1e-15 * w);
        }
    }
}
