//! Interaction vertices that survive the restriction
//! `Q₁ − Q₂ + Q₃ − Q₄ ∈ 2πℤ²/a` on the region centres, and their
//! classification into the eleven rows of the vertex table.

use alloc::vec::Vec;

use crate::error::bail;
use crate::lattice::ModelParams;
use crate::partition::{q_units, Flavor, PartitionParams, R, S};
use crate::{pi, Result};

/// Four flavors `(r_j, s_j)` with the umklapp vector `n` of the
/// momentum balance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexTuple {
    pub flavors: [Flavor; 4],
    pub umklapp: [i64; 2],
}

/// Row of the vertex table, or a tuple that only balances at `Q = π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexCategory {
    Row(u8),
    ExtraQHalf,
}

impl VertexCategory {
    pub fn label(self) -> alloc::string::String {
        match self {
            VertexCategory::Row(n) => alloc::format!("{n}"),
            VertexCategory::ExtraQHalf => alloc::string::String::from("extra_Q_half"),
        }
    }
}

/// Number of tuples in each table row, summed over its `r, r′, s, s′`.
pub const ROW_MULTIPLICITY: [usize; 11] = [56, 56, 8, 8, 8, 4, 16, 16, 8, 8, 8];

/// Umklapp vector `n` with `Q₁ − Q₂ + Q₃ − Q₄ = 2πn/a`, if any with `|n_j| ≤ 2`.
pub fn momentum_balance(fl: [Flavor; 4], pp: &PartitionParams) -> Option<[i64; 2]> {
    let q: Vec<[i64; 2]> = fl.iter().map(|&f| q_units(f, pp)).collect();
    let period = 4 * pp.n_l as i64;
    let mut n = [0i64; 2];
    for j in 0..2 {
        let sum = q[0][j] - q[1][j] + q[2][j] - q[3][j];
        if sum.rem_euclid(period) != 0 {
            return None;
        }
        n[j] = sum / period;
        if n[j].abs() > 2 {
            return None;
        }
    }
    Some(n)
}

fn f(r: R, s: S) -> Flavor {
    Flavor::new(r, s)
}

fn swap_pair(s: S, s2: S) -> bool {
    matches!(
        (s, s2),
        (S::Plus, S::Minus) | (S::Minus, S::Plus) | (S::Zero, S::Two) | (S::Two, S::Zero)
    )
}

fn zero_two_pair(s: S, s2: S) -> bool {
    matches!((s, s2), (S::Zero, S::Two) | (S::Two, S::Zero))
}

fn zero_or_two(s: S) -> bool {
    matches!(s, S::Zero | S::Two)
}

/// Table rows whose pattern and restrictions the tuple satisfies.
///
/// Row 9 reads `s, s′ ∈ {0, 2}` with `s ≠ s′`; the `s = s′` cases are
/// already rows 3 and 6.
pub fn matching_rows(t: [Flavor; 4]) -> Vec<u8> {
    let [a, b, c, d] = t;
    let (r, s) = (a.r, a.s);
    let (r2, s2) = (b.r, b.s);
    let mut rows = Vec::new();
    if a == b && c == d && a != c {
        rows.push(1);
    }
    if a == d && b == c && a != b {
        rows.push(2);
    }
    if a == b && b == c && c == d {
        rows.push(3);
    }
    if r2 == r.flip() && swap_pair(s, s2) && c == f(r.flip(), s) && d == f(r, s2) {
        rows.push(4);
    }
    if r2 == r && swap_pair(s, s2) && c == f(r.flip(), s) && d == f(r.flip(), s2) {
        rows.push(5);
    }
    if zero_or_two(s) && b == f(r.flip(), s) && c == a && d == f(r.flip(), s) {
        rows.push(6);
    }
    if zero_or_two(s) && s2.is_nodal() && c == a && d == f(r2.flip(), s2) {
        rows.push(7);
    }
    if s.is_nodal() && zero_or_two(s2) && c == f(r.flip(), s) && d == b {
        rows.push(8);
    }
    if zero_or_two(s) && zero_or_two(s2) && s != s2 && c == a && d == b {
        rows.push(9);
    }
    if zero_two_pair(s, s2) && c == f(r2.flip(), s2) && d == f(r.flip(), s) {
        rows.push(10);
    }
    if b == f(r.flip(), s) && zero_two_pair(s, c.s) && d == f(c.r.flip(), c.s) {
        rows.push(11);
    }
    rows
}

/// Exhaustive scan of all `8⁴` flavor tuples. Every balanced tuple must
/// match exactly one table row, except that at `Q = π/2` unmatched tuples
/// are reported as [`VertexCategory::ExtraQHalf`].
///
/// The classification presumes `Q ≠ π/2`; pass `allow_half_pi` to run
/// it there anyway.
pub fn enumerate_and_classify(
    pp: &PartitionParams,
    allow_half_pi: bool,
) -> Result<Vec<(VertexTuple, VertexCategory)>> {
    if pp.q_is_half_pi() && !allow_half_pi {
        bail!(Domain, "vertex classification presumes Q != pi/2; pass the allow flag to override");
    }
    let mut out = Vec::new();
    for a in Flavor::ALL {
        for b in Flavor::ALL {
            for c in Flavor::ALL {
                for d in Flavor::ALL {
                    let fl = [a, b, c, d];
                    let Some(n) = momentum_balance(fl, pp) else { continue };
                    let rows = matching_rows(fl);
                    let cat = match rows.as_slice() {
                        [row] => VertexCategory::Row(*row),
                        [] if pp.q_is_half_pi() => VertexCategory::ExtraQHalf,
                        [] => bail!(Invariant, "balanced tuple {a}{b}{c}{d} matches no table row"),
                        _ => bail!(Invariant, "tuple {a}{b}{c}{d} matches rows {:?}", rows),
                    };
                    out.push((VertexTuple { flavors: fl, umklapp: n }, cat));
                }
            }
        }
    }
    Ok(out)
}

/// Interaction weight `û(p) = a²V/(8π²)[cos ap₁ + cos ap₂]`.
pub fn u_hat(p: [f64; 2], mp: &ModelParams) -> f64 {
    mp.a * mp.a * mp.v / (8.0 * pi() * pi()) * (libm::cos(mp.a * p[0]) + libm::cos(mp.a * p[1]))
}

/// `v_{r,s,r′,s′} = (2π)² û(Q_{r,s} − Q_{r′,s′})/a²`.
pub fn fock_coupling(f1: Flavor, f2: Flavor, pp: &PartitionParams, mp: &ModelParams) -> f64 {
    let q1 = q_units(f1, pp);
    let q2 = q_units(f2, pp);
    let unit = pi() / (2.0 * pp.n_l as f64);
    let nl = pp.n_l as i64;
    let c = |n: i64| {
        // fold into [0, 2n_L] so v is exactly symmetric and the special
        // angles 0, π/2, π give exact values
        let m = n.rem_euclid(4 * nl);
        let m = m.min(4 * nl - m);
        match m {
            0 => 1.0,
            _ if m == nl => 0.0,
            _ if m == 2 * nl => -1.0,
            _ => libm::cos(unit * m as f64),
        }
    };
    0.5 * mp.v * (c(q1[0] - q2[0]) + c(q1[1] - q2[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n_l: u32, nk: u32, nq: u32) -> (ModelParams, PartitionParams) {
        let p = ModelParams::new(1.0, 0.0, 2.0, 0.0, 1.0, n_l).unwrap();
        let pp = PartitionParams::new(&p, nk, nq, 0.5).unwrap();
        (p, pp)
    }

    #[test]
    fn row_multiplicities_add_to_196() {
        assert_eq!(ROW_MULTIPLICITY.iter().sum::<usize>(), 196);
    }

    #[test]
    fn backscattering_example_is_row_6() {
        let t = [
            Flavor::new(R::Plus, S::Zero),
            Flavor::new(R::Minus, S::Zero),
            Flavor::new(R::Plus, S::Zero),
            Flavor::new(R::Minus, S::Zero),
        ];
        assert_eq!(matching_rows(t), [6]);
    }

    #[test]
    fn counts_at_generic_q() {
        let (_, pp) = setup(20, 15, 18);
        let v = enumerate_and_classify(&pp, false).unwrap();
        assert_eq!(v.len(), 196);
        for (row, &mult) in ROW_MULTIPLICITY.iter().enumerate() {
            let n = v.iter().filter(|(_, c)| *c == VertexCategory::Row(row as u8 + 1)).count();
            assert_eq!(n, mult, "row {}", row + 1);
        }
    }

    #[test]
    fn half_pi_needs_flag() {
        let (_, pp) = setup(20, 15, 20);
        assert!(enumerate_and_classify(&pp, false).is_err());
        let v = enumerate_and_classify(&pp, true).unwrap();
        assert_eq!(v.len(), 512);
        let extra = v.iter().filter(|(_, c)| *c == VertexCategory::ExtraQHalf).count();
        assert_eq!(extra, 512 - 196);
    }

    #[test]
    fn u_hat_values() {
        let (p, _) = setup(4, 2, 4);
        let u0 = u_hat([0.0, 0.0], &p);
        assert!(((2.0 * pi()).powi(2) * u0 - p.a * p.a * p.v).abs() < 1e-14);
        assert!((u_hat([pi(), pi()], &p) + p.v / (4.0 * pi() * pi())).abs() < 1e-15);
        assert!(u_hat([pi(), 0.0], &p).abs() < 1e-15);
    }

    #[test]
    fn coupling_table() {
        let (p, pp) = setup(20, 15, 18);
        let v = p.v;
        let q = pp.q();
        let fl = |r, s| Flavor::new(r, s);
        let c = |a, b| fock_coupling(a, b, &pp, &p);
        assert!((c(fl(R::Plus, S::Zero), fl(R::Minus, S::Zero)) + v).abs() < 1e-14);
        assert!((c(fl(R::Plus, S::Two), fl(R::Minus, S::Two)) + v).abs() < 1e-14);
        assert!((c(fl(R::Plus, S::Plus), fl(R::Minus, S::Plus)) - v * libm::cos(2.0 * q)).abs() < 1e-14);
        assert!(
            (c(fl(R::Plus, S::Plus), fl(R::Minus, S::Minus)) - 0.5 * v * (1.0 + libm::cos(2.0 * q))).abs()
                < 1e-14
        );
        assert!((c(fl(R::Plus, S::Plus), fl(R::Minus, S::Two)) - v * libm::cos(q)).abs() < 1e-14);
        assert!((c(fl(R::Minus, S::Plus), fl(R::Plus, S::Two)) + v * libm::cos(q)).abs() < 1e-14);
        for f1 in Flavor::ALL {
            assert!((c(f1, f1) - v).abs() < 1e-14);
            for f2 in Flavor::ALL {
                assert_eq!(c(f1, f2), c(f2, f1));
                if f1.s == S::Zero && f2.s != S::Zero {
                    assert!(c(f1, f2).abs() < 1e-14);
                }
            }
        }
    }
}
