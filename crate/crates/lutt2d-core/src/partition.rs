//! Eight-region decomposition of the Brillouin zone, the nodal boson sets
//! `C_s`, `C`, `C_s^⊥` and the cutoff functions `χ_s`.
//!
//! All membership tests are integer comparisons. The region half-widths are
//! half-integer multiples of `Δ` while fermionic momenta sit at half-integer
//! offsets, so in units of `Δ/2` every comparison is between an even and an
//! odd number and can never be an equality.

use core::fmt;
use core::ops::{Index, IndexMut};

use crate::error::bail;
use crate::lattice::{Kind, ModelParams, MomentumIndex};
use crate::{pi, Result};

/// Branch sign `r = ±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum R {
    Plus,
    Minus,
}

impl R {
    pub const ALL: [R; 2] = [R::Plus, R::Minus];

    pub fn sign(self) -> i64 {
        match self {
            R::Plus => 1,
            R::Minus => -1,
        }
    }

    pub fn flip(self) -> R {
        match self {
            R::Plus => R::Minus,
            R::Minus => R::Plus,
        }
    }
}

/// Region type `s ∈ {0, +, −, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum S {
    Zero,
    Plus,
    Minus,
    Two,
}

impl S {
    pub const ALL: [S; 4] = [S::Zero, S::Plus, S::Minus, S::Two];
    pub const NODAL: [S; 2] = [S::Plus, S::Minus];

    pub fn is_nodal(self) -> bool {
        matches!(self, S::Plus | S::Minus)
    }

    /// `±1` for the nodal labels.
    pub fn sign(self) -> i64 {
        match self {
            S::Plus => 1,
            S::Minus => -1,
            _ => panic!("sign() is only defined for nodal s"),
        }
    }

    pub fn flip(self) -> S {
        match self {
            S::Plus => S::Minus,
            S::Minus => S::Plus,
            other => other,
        }
    }
}

/// Fermion flavor `(r, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flavor {
    pub r: R,
    pub s: S,
}

/// Physical class of a flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlavorClass {
    Antinodal,
    Nodal,
    /// `(−,2)`, around the band bottom; filled.
    In,
    /// `(+,2)`, around the band top; empty.
    Out,
}

impl Flavor {
    pub const fn new(r: R, s: S) -> Self {
        Self { r, s }
    }

    pub const ALL: [Flavor; 8] = [
        Flavor::new(R::Plus, S::Zero),
        Flavor::new(R::Minus, S::Zero),
        Flavor::new(R::Plus, S::Plus),
        Flavor::new(R::Minus, S::Plus),
        Flavor::new(R::Plus, S::Minus),
        Flavor::new(R::Minus, S::Minus),
        Flavor::new(R::Plus, S::Two),
        Flavor::new(R::Minus, S::Two),
    ];

    pub fn index(self) -> usize {
        let s = match self.s {
            S::Zero => 0,
            S::Plus => 1,
            S::Minus => 2,
            S::Two => 3,
        };
        2 * s + usize::from(self.r == R::Minus)
    }

    pub fn class(self) -> FlavorClass {
        match (self.r, self.s) {
            (_, S::Zero) => FlavorClass::Antinodal,
            (_, S::Plus | S::Minus) => FlavorClass::Nodal,
            (R::Minus, S::Two) => FlavorClass::In,
            (R::Plus, S::Two) => FlavorClass::Out,
        }
    }

    /// Flavor with the opposite `r`.
    pub fn flip_r(self) -> Flavor {
        Flavor::new(self.r.flip(), self.s)
    }

    pub fn r_label(self) -> &'static str {
        match self.r {
            R::Plus => "+",
            R::Minus => "-",
        }
    }

    pub fn s_label(self) -> &'static str {
        match self.s {
            S::Zero => "0",
            S::Plus => "+",
            S::Minus => "-",
            S::Two => "2",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r_label(), self.s_label())
    }
}

/// Dense map from the eight flavors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlavorMap<T>(pub [T; 8]);

impl<T: Copy> FlavorMap<T> {
    pub fn from_fn(mut f: impl FnMut(Flavor) -> T) -> Self {
        let mut out = [f(Flavor::ALL[0]); 8];
        for fl in Flavor::ALL {
            out[fl.index()] = f(fl);
        }
        FlavorMap(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Flavor, T)> + '_ {
        Flavor::ALL.into_iter().map(move |f| (f, self.0[f.index()]))
    }
}

impl<T> Index<Flavor> for FlavorMap<T> {
    type Output = T;
    fn index(&self, f: Flavor) -> &T {
        &self.0[f.index()]
    }
}

impl<T> IndexMut<Flavor> for FlavorMap<T> {
    fn index_mut(&mut self, f: Flavor) -> &mut T {
        &mut self.0[f.index()]
    }
}

/// Partition parameters, built from integers only:
/// `κ = (n_κ + ½)/n_L` and `Q = π n_Q /(2 n_L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionParams {
    pub n_l: u32,
    pub n_kappa: u32,
    pub n_q: u32,
    /// Antinodal filling `ν_a ∈ [0, 1]`.
    pub nu_a: f64,
    /// Cutoff widths of `χ_s`; `b1 = b2 = 1` is the standard choice.
    pub b1: f64,
    pub b2: f64,
}

impl PartitionParams {
    pub fn new(p: &ModelParams, n_kappa: u32, n_q: u32, nu_a: f64) -> Result<Self> {
        Self::with_cutoffs(p, n_kappa, n_q, nu_a, 1.0, 1.0)
    }

    pub fn with_cutoffs(
        p: &ModelParams,
        n_kappa: u32,
        n_q: u32,
        nu_a: f64,
        b1: f64,
        b2: f64,
    ) -> Result<Self> {
        let pp = Self { n_l: p.n_l, n_kappa, n_q, nu_a, b1, b2 };
        pp.validate()?;
        Ok(pp)
    }

    /// Builds from real `κ`, `Q`; values off the quantization grid are
    /// rejected, never snapped.
    pub fn from_values(p: &ModelParams, kappa: f64, q: f64, nu_a: f64) -> Result<Self> {
        let n_l = p.n_l as f64;
        let nk = kappa * n_l - 0.5;
        let nq = q * 2.0 * n_l / pi();
        let near = |x: f64| libm::fabs(x - libm::round(x)) <= 1e-9 * (1.0 + libm::fabs(x));
        if !near(nk) || nk < -0.5 {
            bail!(
                InvalidParameter,
                "kappa = {kappa} is not of the form (n_kappa + 1/2)/n_L with n_L = {}",
                p.n_l
            );
        }
        if !near(nq) || nq < 0.5 {
            bail!(
                InvalidParameter,
                "Q = {q} is not of the form pi*n_Q/(2 n_L) with n_L = {}",
                p.n_l
            );
        }
        Self::new(p, libm::round(nk) as u32, libm::round(nq) as u32, nu_a)
    }

    pub fn validate(&self) -> Result<()> {
        let (nl, nk, nq) = (self.n_l as i64, self.n_kappa as i64, self.n_q as i64);
        if nk >= nl {
            bail!(InvalidParameter, "kappa = (n_kappa+1/2)/n_L must not exceed 1 (n_kappa={nk}, n_L={nl})");
        }
        if nq < nl - nk || nq > nl + nk {
            bail!(
                InvalidParameter,
                "nodal window pi(1-kappa)/2 < Q < pi(1+kappa)/2 violated: n_Q={nq} not in [{}, {}]",
                nl - nk,
                nl + nk
            );
        }
        if !(0.0..=1.0).contains(&self.nu_a) {
            bail!(InvalidParameter, "antinodal filling nu_a must lie in [0,1] (got {})", self.nu_a);
        }
        if !(self.b1 > 0.0 && self.b2 > 0.0 && self.b1.is_finite() && self.b2.is_finite()) {
            bail!(InvalidParameter, "cutoff widths b1, b2 must be positive");
        }
        Ok(())
    }

    /// Errors unless the lattice and the partition share `n_L`.
    pub fn check_model(&self, p: &ModelParams) -> Result<()> {
        if p.n_l != self.n_l {
            bail!(InvalidParameter, "partition built for n_L={} used with n_L={}", self.n_l, p.n_l);
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        (self.n_kappa as f64 + 0.5) / self.n_l as f64
    }

    pub fn kappa_min(&self) -> f64 {
        let k = self.kappa();
        k.min(1.0 - k)
    }

    pub fn q(&self) -> f64 {
        pi() * self.n_q as f64 / (2.0 * self.n_l as f64)
    }

    /// `Q = π/2`, where the vertex classification degenerates.
    pub fn q_is_half_pi(&self) -> bool {
        self.n_q == self.n_l
    }

    /// Largest `|m|` with `|p| ≤ (1−κ)π/(√2a)` on the bosonic grid.
    pub fn outer_half_width(&self) -> i64 {
        (self.n_l - self.n_kappa) as i64 - 1
    }

    /// Largest `|m|` with `|p| ≤ κπ/(√2a)` on the bosonic grid.
    pub fn inner_half_width(&self) -> i64 {
        self.n_kappa as i64
    }
}

/// Diagonal bosonic index of `Q_{r,s}` (units of `Δ`).
pub fn q_index(f: Flavor, pp: &PartitionParams) -> MomentumIndex {
    let nl = pp.n_l as i64;
    let nq = pp.n_q as i64;
    let r = f.r.sign();
    let (mp, mm) = match f.s {
        S::Zero => match f.r {
            R::Plus => (nl, nl),
            R::Minus => (nl, -nl),
        },
        S::Plus => (r * nq, 0),
        S::Minus => (0, r * nq),
        S::Two => match f.r {
            R::Minus => (0, 0),
            R::Plus => (2 * nl, 0),
        },
    };
    MomentumIndex::bosonic(mp, mm)
}

/// Lattice symmetry acting on momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOp {
    /// `k → (−k₂, k₁)`.
    Rotation,
    /// `k → −k`.
    Parity,
}

/// Image of flavor `f` under a lattice symmetry: the flavor whose
/// `Q_{r,s}` equals the transformed `Q` modulo reciprocal-lattice vectors.
pub fn transform_flavor(f: Flavor, op: PointOp, pp: &PartitionParams) -> Result<Flavor> {
    let [n1, n2] = q_units(f, pp);
    let img = match op {
        PointOp::Rotation => [-n2, n1],
        PointOp::Parity => [-n1, -n2],
    };
    let period = 4 * pp.n_l as i64;
    let same = |a: [i64; 2], b: [i64; 2]| (a[0] - b[0]).rem_euclid(period) == 0 && (a[1] - b[1]).rem_euclid(period) == 0;
    let hits: alloc::vec::Vec<Flavor> = Flavor::ALL.into_iter().filter(|&g| same(q_units(g, pp), img)).collect();
    match hits.as_slice() {
        [g] => Ok(*g),
        _ => bail!(Invariant, "{f} has {} images under {:?}", hits.len(), op),
    }
}

/// Cartesian `Q_{r,s}` in integer units of `π/(2 n_L a)`.
pub fn q_units(f: Flavor, pp: &PartitionParams) -> [i64; 2] {
    q_index(f, pp).cartesian_units()
}

/// The eight vectors `Q_{r,s}` in Cartesian coordinates.
pub fn q_vectors(pp: &PartitionParams, p: &ModelParams) -> FlavorMap<[f64; 2]> {
    FlavorMap::from_fn(|f| q_index(f, pp).cartesian(p))
}

/// The two region inequalities of flavor `f` for the local fermionic
/// index `l`, as `(|lhs|, rhs)` pairs in units of `Δ/2`; membership means
/// `|lhs| < rhs` for both.
pub fn region_inequalities(f: Flavor, l: MomentumIndex, pp: &PartitionParams) -> [(i64, i64); 2] {
    debug_assert_eq!(l.kind, Kind::Fermionic);
    let inner = 2 * pp.n_kappa as i64 + 1;
    let outer = 2 * (pp.n_l - pp.n_kappa) as i64 - 1;
    let d = pp.n_q as i64 - pp.n_l as i64;
    // k + π/L in units of Δ/2 is 2l + 2.
    let lp = 2 * l.m_plus + 2;
    let lm = 2 * l.m_minus + 2;
    match f.s {
        S::Zero => [(lp.abs(), inner), (lm.abs(), inner)],
        S::Two => [(lp.abs(), outer), (lm.abs(), outer)],
        S::Plus => [((lp + 2 * f.r.sign() * d).abs(), inner), (lm.abs(), outer)],
        S::Minus => [((lm + 2 * f.r.sign() * d).abs(), inner), (lp.abs(), outer)],
    }
}

/// Membership of a local fermionic index in `Λ*_{r,s}`.
pub fn in_region(f: Flavor, l: MomentumIndex, pp: &PartitionParams) -> bool {
    region_inequalities(f, l, pp).iter().all(|&(lhs, rhs)| lhs < rhs)
}

/// Local index `k − Q_{r,s} − 2πn/a` for the umklapp vector `n`.
pub fn local_index(k: MomentumIndex, f: Flavor, n: [i64; 2], pp: &PartitionParams) -> MomentumIndex {
    let q = q_index(f, pp);
    let h = 2 * pp.n_l as i64;
    MomentumIndex {
        m_plus: k.m_plus - q.m_plus - h * (n[0] + n[1]),
        m_minus: k.m_minus - q.m_minus - h * (n[0] - n[1]),
        kind: k.kind,
    }
}

/// Region label of a BZ momentum together with its umklapp vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionLabel {
    pub flavor: Flavor,
    pub umklapp: [i64; 2],
    /// Local momentum index inside `Λ*_{r,s}`.
    pub local: MomentumIndex,
}

/// The unique `(r, s, n)` with `k − Q_{r,s} − 2πn/a ∈ Λ*_{r,s}`.
pub fn region_of(k: MomentumIndex, pp: &PartitionParams) -> Result<RegionLabel> {
    if k.kind != Kind::Fermionic {
        bail!(Domain, "region_of expects a fermionic momentum");
    }
    if !k.in_bz(pp.n_l) {
        bail!(Domain, "momentum {:?} outside the Brillouin zone", k);
    }
    let mut found: Option<RegionLabel> = None;
    for f in Flavor::ALL {
        for n1 in -2..=2 {
            for n2 in -2..=2 {
                let l = local_index(k, f, [n1, n2], pp);
                if in_region(f, l, pp) {
                    if found.is_some() {
                        bail!(Invariant, "momentum {:?} lies in two regions", k);
                    }
                    found = Some(RegionLabel { flavor: f, umklapp: [n1, n2], local: l });
                }
            }
        }
    }
    match found {
        Some(lab) => Ok(lab),
        None => bail!(Invariant, "momentum {:?} lies in no region", k),
    }
}

/// All local fermionic indices of `Λ*_{r,s}`, sorted lexicographically.
pub fn region_points(f: Flavor, pp: &PartitionParams) -> alloc::vec::Vec<MomentumIndex> {
    let nk = pp.n_kappa as i64;
    let no = (pp.n_l - pp.n_kappa) as i64;
    let d = pp.n_q as i64 - pp.n_l as i64;
    let inner = (-nk - 1, nk - 1);
    let outer = (-no, no - 2);
    let shifted = (-nk - 1 - f.r.sign() * d, nk - 1 - f.r.sign() * d);
    let (rp, rm) = match f.s {
        S::Zero => (inner, inner),
        S::Two => (outer, outer),
        S::Plus => (shifted, outer),
        S::Minus => (outer, shifted),
    };
    let mut out = alloc::vec::Vec::new();
    for mp in rp.0..=rp.1 {
        for mm in rm.0..=rm.1 {
            out.push(MomentumIndex::fermionic(mp, mm));
        }
    }
    out
}

/// Area fractions `f_{r,s}` of the regions.
pub fn area_fractions(pp: &PartitionParams) -> FlavorMap<f64> {
    let k = pp.kappa();
    FlavorMap::from_fn(|f| match f.s {
        S::Zero => 0.5 * k * k,
        S::Plus | S::Minus => 0.5 * k * (1.0 - k),
        S::Two => 0.5 * (1.0 - k) * (1.0 - k),
    })
}

/// Exact number of grid points in `Λ*_{r,s}`, which equals `f_{r,s}(L/a)²`.
pub fn region_count(f: Flavor, pp: &PartitionParams) -> usize {
    let inner = 2 * pp.n_kappa as usize + 1;
    let outer = 2 * (pp.n_l - pp.n_kappa) as usize - 1;
    match f.s {
        S::Zero => inner * inner,
        S::Plus | S::Minus => inner * outer,
        S::Two => outer * outer,
    }
}

fn component(p: MomentumIndex, s: S) -> i64 {
    match s {
        S::Plus => p.m_plus,
        S::Minus => p.m_minus,
        _ => panic!("component() needs a nodal s"),
    }
}

/// `m_s` of a bosonic index.
pub fn m_s(p: MomentumIndex, s: S) -> i64 {
    component(p, s)
}

/// Cutoff function `χ_s(p)`: `|p_s| ≤ b₁κπ/(√2a)` and `|p_{−s}| ≤ b₂(1−κ)π/(√2a)`.
pub fn cutoff_chi(s: S, p: MomentumIndex, pp: &PartitionParams) -> bool {
    debug_assert_eq!(p.kind, Kind::Bosonic);
    let ms = component(p, s).unsigned_abs() as f64;
    let mo = component(p, s.flip()).unsigned_abs() as f64;
    let inner = 2.0 * pp.n_kappa as f64 + 1.0;
    let outer = 2.0 * (pp.n_l - pp.n_kappa) as f64 - 1.0;
    // Closed inequalities; the relative slack only matters for b_j that put
    // the boundary exactly on a grid point.
    let le = |x: f64, bound: f64| x <= bound * (1.0 + 1e-12);
    le(2.0 * ms, pp.b1 * inner) && le(2.0 * mo, pp.b2 * outer)
}

/// `p ∈ C_s`: `|p_{−s}| ≤ (1−κ)π/(√2a)`, unbounded in the `s` direction.
pub fn in_c_s(s: S, p: MomentumIndex, pp: &PartitionParams) -> bool {
    component(p, s.flip()).abs() <= pp.outer_half_width()
}

/// `p ∈ C = C₊ ∩ C₋ ∩ {|p_±| ≤ π κ_min/(√2a)}`.
pub fn in_c(p: MomentumIndex, pp: &PartitionParams) -> bool {
    let w = pp.inner_half_width().min(pp.outer_half_width());
    p.m_plus.abs() <= w && p.m_minus.abs() <= w
}

/// `p ∈ C_s^⊥ = C_s \ C`.
pub fn in_c_perp(s: S, p: MomentumIndex, pp: &PartitionParams) -> bool {
    in_c_s(s, p, pp) && !in_c(p, pp)
}

/// Antinodal window `Λ*_0` membership of a local fermionic index.
pub fn in_antinodal_window(l: MomentumIndex, pp: &PartitionParams) -> bool {
    in_region(Flavor::new(R::Plus, S::Zero), l, pp)
}
