//! Bare 2D t-t′-V model: exact momentum grids, the tight-binding
//! dispersion and Fermi-contour extraction.
//!
//! Momenta live on the diagonal grid `k± = (k₁ ± k₂)/√2`. A fermionic
//! index `m±` stands for `k± = Δ(m± + ½)` and a bosonic one for `p± = Δ m±`,
//! with `Δ = 2π/L` and `L = 2√2·a·n_L`. In Cartesian coordinates both kinds
//! are integer multiples of `π/(2 n_L a)`, which is how Brillouin-zone
//! membership is decided without floating point.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::bail;
use crate::{pi, Result, SQRT2};

/// Bare lattice parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Nearest-neighbour hopping (> 0).
    pub t: f64,
    /// Next-nearest-neighbour hopping, `|2t′/t| < 1`.
    pub t_prime: f64,
    /// Nearest-neighbour density-density coupling (> 0).
    pub v: f64,
    /// Bare chemical potential. Only the contour extractor reads it; the
    /// Luttinger-model constants fix their own μ.
    pub mu: f64,
    /// Lattice constant (> 0).
    pub a: f64,
    /// System size integer, `L = 2√2·a·n_L`.
    pub n_l: u32,
}

impl ModelParams {
    pub fn new(t: f64, t_prime: f64, v: f64, mu: f64, a: f64, n_l: u32) -> Result<Self> {
        let p = Self { t, t_prime, v, mu, a, n_l };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            bail!(InvalidParameter, "hopping t must be positive and finite (got {})", self.t);
        }
        if !(self.v > 0.0 && self.v.is_finite()) {
            bail!(InvalidParameter, "interaction V must be positive and finite (got {})", self.v);
        }
        if !(libm::fabs(2.0 * self.t_prime / self.t) < 1.0) {
            bail!(InvalidParameter, "|2 t'/t| < 1 is required (got t'={}, t={})", self.t_prime, self.t);
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            bail!(InvalidParameter, "lattice constant a must be positive (got {})", self.a);
        }
        if !self.mu.is_finite() {
            bail!(InvalidParameter, "chemical potential must be finite");
        }
        if self.n_l == 0 {
            bail!(InvalidParameter, "n_L >= 1 is required so that L/(2√2 a) is a positive integer");
        }
        Ok(())
    }

    /// Linear system size `L = 2√2·a·n_L`.
    pub fn l(&self) -> f64 {
        2.0 * SQRT2 * self.a * self.n_l as f64
    }

    /// Grid spacing `Δ = 2π/L` of the diagonal momentum coordinates.
    pub fn delta(&self) -> f64 {
        2.0 * pi() / self.l()
    }

    /// Number of lattice sites `(L/a)² = 8 n_L²`.
    pub fn sites(&self) -> usize {
        8 * (self.n_l as usize) * (self.n_l as usize)
    }
}

/// Fermionic momenta carry the antiperiodic half-integer offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Fermionic,
    Bosonic,
}

/// Exact momentum label on the diagonal grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentumIndex {
    pub m_plus: i64,
    pub m_minus: i64,
    pub kind: Kind,
}

impl MomentumIndex {
    pub const fn fermionic(m_plus: i64, m_minus: i64) -> Self {
        Self { m_plus, m_minus, kind: Kind::Fermionic }
    }

    pub const fn bosonic(m_plus: i64, m_minus: i64) -> Self {
        Self { m_plus, m_minus, kind: Kind::Bosonic }
    }

    fn offset(&self) -> f64 {
        match self.kind {
            Kind::Fermionic => 0.5,
            Kind::Bosonic => 0.0,
        }
    }

    /// Diagonal components `(k₊, k₋)`.
    pub fn diag(&self, p: &ModelParams) -> [f64; 2] {
        let d = p.delta();
        let o = self.offset();
        [d * (self.m_plus as f64 + o), d * (self.m_minus as f64 + o)]
    }

    /// Cartesian components in integer units of `π/(2 n_L a)`.
    pub fn cartesian_units(&self) -> [i64; 2] {
        let shift = match self.kind {
            Kind::Fermionic => 1,
            Kind::Bosonic => 0,
        };
        [self.m_plus + self.m_minus + shift, self.m_plus - self.m_minus]
    }

    /// Cartesian components `(k₁, k₂)`.
    pub fn cartesian(&self, p: &ModelParams) -> [f64; 2] {
        let unit = pi() / (2.0 * p.n_l as f64 * p.a);
        let [n1, n2] = self.cartesian_units();
        [unit * n1 as f64, unit * n2 as f64]
    }

    /// `−π/a ≤ k_j < π/a`, decided in integers.
    pub fn in_bz(&self, n_l: u32) -> bool {
        let h = 2 * n_l as i64;
        self.cartesian_units().iter().all(|&n| -h <= n && n < h)
    }
}

/// Tight-binding dispersion `−2t[cos ak₁ + cos ak₂] − 4t′ cos ak₁ cos ak₂`
/// at a Cartesian momentum.
pub fn dispersion(k: [f64; 2], p: &ModelParams) -> f64 {
    let c1 = libm::cos(p.a * k[0]);
    let c2 = libm::cos(p.a * k[1]);
    -2.0 * p.t * (c1 + c2) - 4.0 * p.t_prime * c1 * c2
}

/// The `(L/a)² = 8 n_L²` fermionic Brillouin-zone momenta, sorted
/// lexicographically in `(m₊, m₋)`.
pub fn bz_grid(p: &ModelParams) -> Vec<MomentumIndex> {
    let h = 2 * p.n_l as i64;
    let mut out = Vec::with_capacity(p.sites());
    for mp in -h - 1..=h {
        for mm in -h - 1..=h {
            let k = MomentumIndex::fermionic(mp, mm);
            if k.in_bz(p.n_l) {
                out.push(k);
            }
        }
    }
    out
}

/// Band edges `(min ε, max ε)`. The dispersion is bilinear in
/// `(cos ak₁, cos ak₂)`, so the extremes sit at the corners of `[−1,1]²`.
pub fn band_range(p: &ModelParams) -> (f64, f64) {
    let corners = [
        -4.0 * p.t - 4.0 * p.t_prime,
        4.0 * p.t - 4.0 * p.t_prime,
        4.0 * p.t_prime,
    ];
    let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// A closed Fermi-contour polyline in Cartesian momenta. The last vertex
/// connects back to the first; coordinates are folded into the BZ, so a
/// contour that winds around the torus closes modulo `2π/a`.
pub type Polyline = Vec<[f64; 2]>;

/// Level set `ε(k) = μ` by marching squares on a periodic
/// `resolution × resolution` sampling of the BZ.
///
/// Saddle cells are resolved with the cell-centre average, which keeps the
/// output invariant under the lattice rotations and parity.
pub fn fermi_contour(mu: f64, p: &ModelParams, resolution: usize) -> Result<Vec<Polyline>> {
    if resolution < 16 {
        bail!(InvalidParameter, "contour resolution must be at least 16 (got {resolution})");
    }
    let (lo, hi) = band_range(p);
    if mu < lo || mu > hi {
        return Ok(Vec::new());
    }
    let n = resolution;
    let h = 2.0 * pi() / (p.a * n as f64);
    let k0 = -pi() / p.a;
    let coord = |i: usize| k0 + h * i as f64;
    let mut f = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            f[i * n + j] = dispersion([coord(i), coord(j)], p) - mu;
        }
    }
    let val = |i: usize, j: usize| f[(i % n) * n + (j % n)];
    let above = |x: f64| x >= 0.0;

    // Edge ids: 2*(i*n+j) is the edge (i,j)-(i+1,j); 2*(i*n+j)+1 is (i,j)-(i,j+1).
    let edge_point = |id: usize| -> [f64; 2] {
        let base = id / 2;
        let (i, j) = (base / n, base % n);
        let (i2, j2) = if id.is_multiple_of(2) { (i + 1, j) } else { (i, j + 1) };
        let (fa, fb) = (val(i, j), val(i2, j2));
        let s = fa / (fa - fb);
        let wrap = |x: f64| {
            let period = 2.0 * pi() / p.a;
            if x >= pi() / p.a { x - period } else { x }
        };
        if id.is_multiple_of(2) {
            [wrap(coord(i) + s * h), coord(j)]
        } else {
            [coord(i), wrap(coord(j) + s * h)]
        }
    };

    let mut segments: Vec<[usize; 2]> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let e = [
                2 * (i * n + j),
                2 * (((i + 1) % n) * n + j) + 1,
                2 * (i * n + (j + 1) % n),
                2 * (i * n + j) + 1,
            ];
            let b: [bool; 4] = [above(c[0]), above(c[1]), above(c[2]), above(c[3])];
            let crossing: Vec<usize> = (0..4).filter(|&q| b[q] != b[(q + 1) % 4]).collect();
            match crossing.len() {
                0 => {}
                2 => segments.push([e[crossing[0]], e[crossing[1]]]),
                4 => {
                    let centre = 0.25 * (c[0] + c[1] + c[2] + c[3]);
                    if above(centre) == b[0] {
                        segments.push([e[0], e[1]]);
                        segments.push([e[2], e[3]]);
                    } else {
                        segments.push([e[3], e[0]]);
                        segments.push([e[1], e[2]]);
                    }
                }
                _ => bail!(Invariant, "odd number of sign changes around a cell"),
            }
        }
    }

    let mut by_edge: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (sid, seg) in segments.iter().enumerate() {
        for &e in seg {
            by_edge.entry(e).or_default().push(sid);
        }
    }
    if by_edge.values().any(|v| v.len() != 2) {
        bail!(Invariant, "contour edge not shared by exactly two segments");
    }

    let mut used = alloc::vec![false; segments.len()];
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let first_edge = segments[start][0];
        let mut line = alloc::vec![edge_point(first_edge)];
        let mut edge = segments[start][1];
        while edge != first_edge {
            line.push(edge_point(edge));
            let next = by_edge[&edge].iter().copied().find(|&s| !used[s]);
            let Some(sid) = next else {
                bail!(Invariant, "open contour encountered");
            };
            used[sid] = true;
            let seg = segments[sid];
            edge = if seg[0] == edge { seg[1] } else { seg[0] };
        }
        out.push(line);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(t_prime: f64, n_l: u32) -> ModelParams {
        ModelParams::new(1.0, t_prime, 2.0, 0.0, 1.0, n_l).unwrap()
    }

    #[test]
    fn dispersion_reference_points() {
        let p = params(-0.2, 4);
        assert!((dispersion([0.0, 0.0], &p) + 3.2).abs() < 1e-15);
        assert!((dispersion([pi(), 0.0], &p) - 4.0 * p.t_prime).abs() < 1e-15);
        let q = 0.45 * pi();
        let want = -4.0 * (p.t * libm::cos(q) + p.t_prime * libm::cos(q) * libm::cos(q));
        assert!((dispersion([q, q], &p) - want).abs() < 1e-14);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(bz_grid(&params(0.0, 1)).len(), 8);
        assert_eq!(bz_grid(&params(0.0, 20)).len(), 3200);
    }

    #[test]
    fn grid_is_sorted_and_inside() {
        let p = params(0.1, 3);
        let g = bz_grid(&p);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        for k in &g {
            let [k1, k2] = k.cartesian(&p);
            assert!(-pi() <= k1 && k1 < pi() && -pi() <= k2 && k2 < pi());
            let [n1, n2] = k.cartesian_units();
            assert_eq!((n1 + n2).rem_euclid(2), 1);
        }
    }

    #[test]
    fn diagonal_and_cartesian_agree() {
        let p = params(0.0, 5);
        for k in bz_grid(&p) {
            let [kp, km] = k.diag(&p);
            let [k1, k2] = k.cartesian(&p);
            assert!(((kp + km) / SQRT2 - k1).abs() < 1e-13);
            assert!(((kp - km) / SQRT2 - k2).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModelParams::new(1.0, 0.5, 1.0, 0.0, 1.0, 2).is_err());
        assert!(ModelParams::new(1.0, 0.0, -1.0, 0.0, 1.0, 2).is_err());
        assert!(ModelParams::new(1.0, 0.0, 1.0, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn contour_empty_outside_band() {
        let p = params(-0.2, 4);
        assert!(fermi_contour(-10.0, &p, 32).unwrap().is_empty());
        assert!(fermi_contour(0.0, &p, 8).is_err());
    }

    #[test]
    fn contour_points_lie_on_level_set() {
        let p = params(-0.2, 4);
        let lines = fermi_contour(-0.672, &p, 128).unwrap();
        assert!(!lines.is_empty());
        for pt in lines.iter().flatten() {
            // linear interpolation error is O(h²)
            assert!((dispersion(*pt, &p) + 0.672).abs() < 2e-3);
        }
    }
}
