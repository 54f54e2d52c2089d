//! Finite second-quantization engine and the operator identities it checks.
//!
//! Operators are built symbolically as polynomials in `c_i`, `c†_i`, then
//! turned into sparse matrices on the occupation basis of `M ≤ 14` modes
//! (Jordan–Wigner ordering: `c_i` picks up `(−1)^{n_0+…+n_{i−1}}`). All
//! operators that occur are real in this basis, so matrices are real.
//!
//! Three suites are provided:
//!
//! * [`appendix_a_suite`]: cancellations among the interaction vertices of
//!   the eight-flavor model, with abstract momentum labels and an exact
//!   conservation delta.
//! * [`chiral_1d_suite`]: density commutator anomaly, vacuum annihilation and
//!   the Kronig identity for truncated 1D chiral fermions.
//! * [`pauli_identity_check`]: vanishing of the normal-ordered antinodal
//!   self-interaction.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::bail;
use crate::lattice::ModelParams;
use crate::partition::{Flavor, PartitionParams, R, S};
use crate::vertices::{enumerate_and_classify, fock_coupling, VertexCategory};
use crate::Result;

/// Largest mode count accepted (Fock dimension `2¹⁴`).
pub const MAX_MODES: usize = 14;

/// A mode: flavor tag plus momentum label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel {
    pub flavor: u8,
    pub k: [i64; 2],
}

/// Ordered list of distinct modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeSet {
    labels: Vec<ModeLabel>,
}

impl ModeSet {
    pub fn new(labels: Vec<ModeLabel>) -> Result<Self> {
        if labels.len() > MAX_MODES {
            return Err(crate::Error::TooManyModes(labels.len(), MAX_MODES));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            bail!(InvalidParameter, "mode labels must be unique");
        }
        Ok(Self { labels })
    }

    /// Every flavor in `flavors` paired with every label in `ks`.
    pub fn product(flavors: &[u8], ks: &[[i64; 2]]) -> Result<Self> {
        let mut labels = Vec::with_capacity(flavors.len() * ks.len());
        for &f in flavors {
            for &k in ks {
                labels.push(ModeLabel { flavor: f, k });
            }
        }
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn index_of(&self, l: ModeLabel) -> Option<usize> {
        self.labels.iter().position(|&x| x == l)
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }
}

/// A single `c_i` (`dagger = false`) or `c†_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ladder {
    pub dagger: bool,
    pub mode: u8,
}

/// Real linear combination of products of ladder operators, read left to
/// right as written.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Poly {
    pub terms: Vec<(f64, Vec<Ladder>)>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: f64) -> Self {
        Self { terms: vec![(c, Vec::new())] }
    }

    pub fn c(i: usize) -> Self {
        Self { terms: vec![(1.0, vec![Ladder { dagger: false, mode: i as u8 }])] }
    }

    pub fn cd(i: usize) -> Self {
        Self { terms: vec![(1.0, vec![Ladder { dagger: true, mode: i as u8 }])] }
    }

    /// `c†_a c_b c†_c c_d`.
    pub fn quartic(a: usize, b: usize, c: usize, d: usize) -> Self {
        let l = |dagger, m: usize| Ladder { dagger, mode: m as u8 };
        Self { terms: vec![(1.0, vec![l(true, a), l(false, b), l(true, c), l(false, d)])] }
    }

    pub fn plus(mut self, other: &Poly) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn add_scaled(&mut self, w: f64, other: &Poly) {
        self.terms.extend(other.terms.iter().map(|(c, m)| (w * c, m.clone())));
    }

    pub fn scale(mut self, w: f64) -> Self {
        for t in &mut self.terms {
            t.0 *= w;
        }
        self
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ma) in &self.terms {
            for (b, mb) in &other.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                terms.push((a * b, m));
            }
        }
        Poly { terms }
    }

    pub fn adjoint(&self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| (*c, m.iter().rev().map(|l| Ladder { dagger: !l.dagger, mode: l.mode }).collect()))
            .collect();
        Poly { terms }
    }

    /// Sparse matrix on the Fock space of `n_modes` modes.
    pub fn matrix(&self, n_modes: usize) -> Result<SparseMatrix> {
        if n_modes > MAX_MODES {
            return Err(crate::Error::TooManyModes(n_modes, MAX_MODES));
        }
        let dim = 1usize << n_modes;
        let mut out = SparseMatrix::zeros(dim);
        for (c, m) in &self.terms {
            if *c == 0.0 {
                continue;
            }
            if m.iter().any(|l| l.mode as usize >= n_modes) {
                bail!(InvalidParameter, "operator acts on mode outside the {n_modes}-mode space");
            }
            for state in 0..dim {
                if let Some((to, sign)) = apply_monomial(m, state) {
                    out.add_entry(to, state, sign * c);
                }
            }
        }
        Ok(out)
    }

    /// `⟨Ω, A Ω⟩` for the basis state `Ω` with occupation bits `omega`.
    pub fn expectation(&self, omega: usize) -> f64 {
        let mut acc = 0.0;
        for (c, m) in &self.terms {
            if let Some((to, sign)) = apply_monomial(m, omega) {
                if to == omega {
                    acc += sign * c;
                }
            }
        }
        acc
    }
}

/// Applies a product of ladder operators (rightmost first) to a basis state.
pub fn apply_monomial(m: &[Ladder], state: usize) -> Option<(usize, f64)> {
    let mut s = state;
    let mut sign = 1.0;
    for l in m.iter().rev() {
        let bit = 1usize << l.mode;
        let occupied = s & bit != 0;
        if occupied == l.dagger {
            return None;
        }
        if (s & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        s ^= bit;
    }
    Some((s, sign))
}

/// Fermionic normal ordering relative to the basis state `Ω`: in each
/// product, operators annihilating `Ω` (`c_i` for empty `i`, `c†_i` for
/// filled `i`) are moved to the right with the permutation sign and no
/// contractions.
pub fn wick_order(p: &Poly, omega: usize) -> Poly {
    let kills = |l: &Ladder| {
        let filled = omega & (1usize << l.mode) != 0;
        l.dagger == filled
    };
    let terms = p
        .terms
        .iter()
        .map(|(c, m)| {
            let mut crossings = 0usize;
            let mut seen_killers = 0usize;
            let mut left = Vec::new();
            let mut right = Vec::new();
            for l in m {
                if kills(l) {
                    seen_killers += 1;
                    right.push(*l);
                } else {
                    crossings += seen_killers;
                    left.push(*l);
                }
            }
            left.extend(right);
            let sign = if crossings.is_multiple_of(2) { 1.0 } else { -1.0 };
            (sign * c, left)
        })
        .collect();
    Poly { terms }
}

/// Real sparse square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<BTreeMap<usize, f64>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![BTreeMap::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.add_entry(i, i, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: f64) {
        *self.rows[i].entry(j).or_insert(0.0) += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].get(&j).copied().unwrap_or(0.0)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flat_map(|r| r.values()).fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn scaled_sum(&self, w: f64, other: &SparseMatrix) -> SparseMatrix {
        let mut out = self.clone();
        for (i, r) in other.rows.iter().enumerate() {
            for (&j, &v) in r {
                out.add_entry(i, j, w * v);
            }
        }
        out
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.scaled_sum(-1.0, other)
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, r) in self.rows.iter().enumerate() {
            for (&k, &a) in r {
                for (&j, &b) in &other.rows[k] {
                    out.add_entry(i, j, a * b);
                }
            }
        }
        out
    }

    /// Column `j` as `(row, value)` pairs.
    pub fn column(&self, j: usize) -> Vec<(usize, f64)> {
        self.rows.iter().enumerate().filter_map(|(i, r)| r.get(&j).map(|&v| (i, v))).collect()
    }

    /// `A e_j − λ e_j`, largest absolute component.
    pub fn eigen_residual(&self, j: usize, lambda: f64) -> f64 {
        let mut worst: f64 = 0.0;
        let mut diag = 0.0;
        for (i, v) in self.column(j) {
            if i == j {
                diag = v;
            } else {
                worst = worst.max(v.abs());
            }
        }
        worst.max((diag - lambda).abs())
    }
}

/// `c_i`, `c†_i` as matrices, with the CAR residual.
#[derive(Debug, Clone)]
pub struct CarAlgebra {
    pub c: Vec<SparseMatrix>,
    pub cd: Vec<SparseMatrix>,
}

pub fn build_car_algebra(modes: &ModeSet) -> Result<CarAlgebra> {
    let n = modes.len();
    let mut c = Vec::with_capacity(n);
    let mut cd = Vec::with_capacity(n);
    for i in 0..n {
        c.push(Poly::c(i).matrix(n)?);
        cd.push(Poly::cd(i).matrix(n)?);
    }
    Ok(CarAlgebra { c, cd })
}

impl CarAlgebra {
    /// Largest deviation from `{c_i, c†_j} = δ_ij`, `{c_i, c_j} = 0`.
    pub fn car_residual(&self) -> f64 {
        let n = self.c.len();
        let dim = 1usize << n;
        let id = SparseMatrix::identity(dim);
        let anti = |a: &SparseMatrix, b: &SparseMatrix| a.mul(b).scaled_sum(1.0, &b.mul(a));
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut ac = anti(&self.c[i], &self.cd[j]);
                if i == j {
                    ac = ac.sub(&id);
                }
                worst = worst.max(ac.max_abs());
                worst = worst.max(anti(&self.c[i], &self.c[j]).max_abs());
            }
        }
        worst
    }
}

/// Direction of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    /// `value ≤ bound`.
    AtMost,
    /// `value ≥ bound`; used for negative controls.
    AtLeast,
}

/// One named identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub expect: Expect,
}

impl Check {
    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.to_string(), value, bound, expect: Expect::AtMost }
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.to_string(), value, bound, expect: Expect::AtLeast }
    }

    pub fn pass(&self) -> bool {
        match self.expect {
            Expect::AtMost => self.value <= self.bound,
            Expect::AtLeast => self.value >= self.bound,
        }
    }
}

/// Outcome of a suite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Tolerance of every exact identity.
pub const TOL: f64 = 1e-12;

// ---------------------------------------------------------------- vertices

/// Abstract momentum labels `(j, 0)`, `j = 0..n`.
fn line_labels(n: usize) -> Vec<[i64; 2]> {
    (0..n as i64).map(|j| [j, 0]).collect()
}

/// Mode space for a subset of the eight flavors.
struct FlavorSpace {
    flavors: Vec<Flavor>,
    ks: Vec<[i64; 2]>,
}

impl FlavorSpace {
    fn new(flavors: &[Flavor], n: usize) -> Result<Self> {
        let s = Self { flavors: flavors.to_vec(), ks: line_labels(n) };
        if s.n_modes() > MAX_MODES {
            return Err(crate::Error::TooManyModes(s.n_modes(), MAX_MODES));
        }
        Ok(s)
    }

    fn n_modes(&self) -> usize {
        self.flavors.len() * self.ks.len()
    }

    fn mode(&self, f: Flavor, k: usize) -> Option<usize> {
        self.flavors.iter().position(|&g| g == f).map(|i| i * self.ks.len() + k)
    }

    fn contains(&self, f: Flavor) -> bool {
        self.flavors.contains(&f)
    }

    /// `Σ_{k_j} δ(k₁−k₂+k₃−k₄) c†_{f₁}(k₁) c_{f₂}(k₂) c†_{f₃}(k₃) c_{f₄}(k₄)`.
    fn vertex(&self, fl: [Flavor; 4]) -> Poly {
        let n = self.ks.len();
        let mut out = Poly::zero();
        for k1 in 0..n {
            for k2 in 0..n {
                for k3 in 0..n {
                    for k4 in 0..n {
                        let bal = |j: usize| self.ks[k1][j] - self.ks[k2][j] + self.ks[k3][j] - self.ks[k4][j];
                        if bal(0) != 0 || bal(1) != 0 {
                            continue;
                        }
                        let m = |f, k| self.mode(f, k).expect("flavor in space");
                        out = out.plus(&Poly::quartic(m(fl[0], k1), m(fl[1], k2), m(fl[2], k3), m(fl[3], k4)));
                    }
                }
            }
        }
        out
    }

    fn number(&self, f: Flavor) -> Poly {
        let mut out = Poly::zero();
        for k in 0..self.ks.len() {
            let i = self.mode(f, k).expect("flavor in space");
            out = out.plus(&Poly::cd(i).mul(&Poly::c(i)));
        }
        out
    }
}

/// Interaction operator of one vertex-table row, restricted to tuples whose
/// flavors all lie in `space`. Each tuple carries weight
/// `λ v_{r₁,s₁,r₂,s₂}`, `λ` standing in for `(a/L)²`.
fn category_operator(
    rows: &[u8],
    tuples: &[([Flavor; 4], VertexCategory)],
    space: &FlavorSpace,
    lambda: f64,
    mp: &ModelParams,
    pp: &PartitionParams,
) -> Poly {
    let mut out = Poly::zero();
    for (fl, cat) in tuples {
        let VertexCategory::Row(row) = cat else { continue };
        if !rows.contains(row) || !fl.iter().all(|&f| space.contains(f)) {
            continue;
        }
        let w = lambda * fock_coupling(fl[0], fl[1], pp, mp);
        out.add_scaled(w, &space.vertex(*fl));
    }
    out
}

fn fl(r: R, s: S) -> Flavor {
    Flavor::new(r, s)
}

fn both_r(s: &[S]) -> Vec<Flavor> {
    let mut v = Vec::new();
    for &x in s {
        v.push(fl(R::Plus, x));
        v.push(fl(R::Minus, x));
    }
    v
}

/// Weight `λ` standing in for `(a/L)²`: each flavor's truncated region
/// then has area fraction `f = nλ = 1/8`.
pub fn label_weight(n_labels: usize) -> f64 {
    1.0 / (8.0 * n_labels as f64)
}

/// Operator identities among the interaction vertices, each flavor carrying
/// `n_labels` abstract momenta. Needs `Q ≠ π/2` and `4·n_labels ≤ 12`.
///
/// Checks, all as max-abs matrix norms:
/// `V₃ = Σ V N_{r,s} f`, `V₄ + V₅ = 0` (with `V₄ ≠ 0` as a control),
/// `V₆ = V₇ = V₈ = V₉ = V₁₀ = 0`, and `V₁₁` against its printed normal form
/// `−Vλ Σ_{r,r′} c†_{r,0}c_{−r,0}c†_{r′,2}c_{−r′,2}` as well as against
/// twice that, which is what the anticommutation relations give.
pub fn appendix_a_suite(mp: &ModelParams, pp: &PartitionParams, n_labels: usize) -> Result<Report> {
    if n_labels < 2 || 4 * n_labels > 12 {
        bail!(InvalidParameter, "appendix suite needs 2 <= labels per flavor and 4 flavors x labels <= 12");
    }
    pp.check_model(mp)?;
    let tuples: Vec<([Flavor; 4], VertexCategory)> =
        enumerate_and_classify(pp, false)?.into_iter().map(|(t, c)| (t.flavors, c)).collect();
    let lambda = label_weight(n_labels);
    let mut rep = Report::default();
    let norm = |p: &Poly, sp: &FlavorSpace| p.matrix(sp.n_modes()).map(|m| m.max_abs());

    // diagonal Hartree terms, one flavor at a time
    let mut worst: f64 = 0.0;
    for f in Flavor::ALL {
        let sp = FlavorSpace::new(&[f], n_labels)?;
        let v3 = category_operator(&[3], &tuples, &sp, lambda, mp, pp);
        let f_trunc = n_labels as f64 * lambda;
        let rhs = sp.number(f).scale(mp.v * f_trunc);
        worst = worst.max(norm(&v3.plus(&rhs.scale(-1.0)), &sp)?);
    }
    rep.checks.push(Check::at_most("V3 - sum V N f", worst, TOL));

    let groups45 = [both_r(&[S::Plus, S::Minus]), both_r(&[S::Zero, S::Two])];
    let mut worst45: f64 = 0.0;
    let mut v4_size: f64 = 0.0;
    for g in &groups45 {
        let sp = FlavorSpace::new(g, n_labels)?;
        let v4 = category_operator(&[4], &tuples, &sp, lambda, mp, pp);
        let v45 = category_operator(&[4, 5], &tuples, &sp, lambda, mp, pp);
        worst45 = worst45.max(norm(&v45, &sp)?);
        v4_size = v4_size.max(norm(&v4, &sp)?);
    }
    rep.checks.push(Check::at_most("V4 + V5", worst45, TOL));
    rep.checks.push(Check::at_least("V4 alone (control)", v4_size, 1e-3 * lambda * mp.v));

    let mut zero_check = |name: &str, row: u8, groups: &[Vec<Flavor>]| -> Result<()> {
        let mut worst: f64 = 0.0;
        for g in groups {
            let sp = FlavorSpace::new(g, n_labels)?;
            worst = worst.max(norm(&category_operator(&[row], &tuples, &sp, lambda, mp, pp), &sp)?);
        }
        rep.checks.push(Check::at_most(name, worst, TOL));
        Ok(())
    };
    zero_check("V6", 6, &[both_r(&[S::Zero]), both_r(&[S::Two])])?;
    let mixed: Vec<Vec<Flavor>> = [S::Zero, S::Two]
        .iter()
        .flat_map(|&a| [S::Plus, S::Minus].into_iter().map(move |b| both_r(&[a, b])))
        .collect();
    zero_check("V7", 7, &mixed)?;
    zero_check("V8", 8, &mixed)?;
    zero_check("V9", 9, &[both_r(&[S::Zero, S::Two])])?;
    zero_check("V10", 10, &[both_r(&[S::Zero, S::Two])])?;

    let sp = FlavorSpace::new(&both_r(&[S::Zero, S::Two]), n_labels)?;
    let v11 = category_operator(&[11], &tuples, &sp, lambda, mp, pp);
    let mut printed = Poly::zero();
    for r in R::ALL {
        for r2 in R::ALL {
            printed.add_scaled(
                -mp.v * lambda,
                &sp.vertex([fl(r, S::Zero), fl(r.flip(), S::Zero), fl(r2, S::Two), fl(r2.flip(), S::Two)]),
            );
        }
    }
    let m11 = v11.matrix(sp.n_modes())?;
    let mp11 = printed.matrix(sp.n_modes())?;
    rep.checks.push(Check::at_most("V11 - printed normal form", m11.sub(&mp11).max_abs(), TOL));
    rep.checks
        .push(Check::at_most("V11 - 2 x printed normal form", m11.scaled_sum(-2.0, &mp11).max_abs(), TOL));
    Ok(rep)
}

// ------------------------------------------------------------- 1D chiral

/// Truncated 1D chiral fermions in units `2π/L = 1`, `v_F = 1`.
///
/// Each (branch, copy) gets `n_modes` momenta `k = m + ½`,
/// `m ∈ [−n_modes/2, n_modes/2)`. The vacuum fills `rk < 0`.
#[derive(Debug, Clone)]
pub struct ChiralSpace {
    pub n_modes: usize,
    pub branches: Vec<R>,
    pub copies: usize,
}

impl ChiralSpace {
    pub fn new(n_modes: usize, branches: Vec<R>, copies: usize) -> Result<Self> {
        if n_modes < 4 || !n_modes.is_multiple_of(2) {
            bail!(InvalidParameter, "chiral window needs an even number of modes >= 4");
        }
        if branches.is_empty() || copies == 0 {
            bail!(InvalidParameter, "chiral space needs at least one branch and one copy");
        }
        let s = Self { n_modes, branches, copies };
        if s.total_modes() > MAX_MODES {
            return Err(crate::Error::TooManyModes(s.total_modes(), MAX_MODES));
        }
        Ok(s)
    }

    pub fn total_modes(&self) -> usize {
        self.n_modes * self.branches.len() * self.copies
    }

    fn ms(&self) -> core::ops::Range<i64> {
        let h = (self.n_modes / 2) as i64;
        -h..h
    }

    fn block(&self, b: usize, copy: usize) -> usize {
        (b * self.copies + copy) * self.n_modes
    }

    fn mode(&self, b: usize, copy: usize, m: i64) -> Option<usize> {
        let h = (self.n_modes / 2) as i64;
        (-h..h).contains(&m).then(|| self.block(b, copy) + (m + h) as usize)
    }

    /// Occupation bits of the vacuum.
    pub fn vacuum(&self) -> usize {
        let mut s = 0usize;
        for (b, &r) in self.branches.iter().enumerate() {
            for copy in 0..self.copies {
                for m in self.ms() {
                    // k = m + ½ < 0 for r = +, > 0 for r = −
                    let filled = if r == R::Plus { m < 0 } else { m >= 0 };
                    if filled {
                        s |= 1 << self.mode(b, copy, m).expect("in window");
                    }
                }
            }
        }
        s
    }

    /// `ĵ(p) = Σ_k c†_k c_{k+p}`; at `p = 0` normal ordered.
    pub fn density(&self, b: usize, copy: usize, p: i64) -> Poly {
        let omega = self.vacuum();
        let mut out = Poly::zero();
        for m in self.ms() {
            let (Some(i), Some(j)) = (self.mode(b, copy, m), self.mode(b, copy, m + p)) else { continue };
            out = out.plus(&Poly::cd(i).mul(&Poly::c(j)));
            if p == 0 && omega & (1 << i) != 0 {
                out = out.plus(&Poly::scalar(-1.0));
            }
        }
        out
    }

    /// `r Σ_k k :n_k:` for branch `b`, copy `copy`.
    pub fn kinetic(&self, b: usize, copy: usize) -> Poly {
        let r = self.branches[b].sign() as f64;
        let omega = self.vacuum();
        let mut out = Poly::zero();
        for m in self.ms() {
            let i = self.mode(b, copy, m).expect("in window");
            let k = m as f64 + 0.5;
            out.add_scaled(r * k, &Poly::cd(i).mul(&Poly::c(i)));
            if omega & (1 << i) != 0 {
                out = out.plus(&Poly::scalar(-r * k));
            }
        }
        out
    }

    /// `½ ĵ(0)² + Σ_{rp>0} ĵ(−p) ĵ(p)` over the window.
    pub fn kronig_rhs(&self, b: usize, copy: usize) -> Poly {
        let r = self.branches[b].sign();
        let j0 = self.density(b, copy, 0);
        let mut out = j0.mul(&j0).scale(0.5);
        for q in 1..self.n_modes as i64 {
            let p = r * q;
            out = out.plus(&self.density(b, copy, -p).mul(&self.density(b, copy, p)));
        }
        out
    }

    /// Vacuum plus all states that differ from it only on modes with
    /// `|k| < n_modes/4` in block `(b, copy)`.
    pub fn interior_states(&self, b: usize, copy: usize) -> Vec<usize> {
        let omega = self.vacuum();
        let quarter = self.n_modes as f64 / 4.0;
        let inner: Vec<usize> = self
            .ms()
            .filter(|&m| (m as f64 + 0.5).abs() < quarter)
            .map(|m| self.mode(b, copy, m).expect("in window"))
            .collect();
        (0..1usize << inner.len())
            .map(|mask| {
                let mut s = omega;
                for (bit, &i) in inner.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        s ^= 1 << i;
                    }
                }
                s
            })
            .collect()
    }
}

fn commutator(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    a.mul(b).sub(&b.mul(a))
}

/// Bosonization identities on truncated chiral fermions.
///
/// * anomaly: `[ĵ_r(p), ĵ_r(−p)] Ω = r p Ω` for `1 ≤ |p| ≤ n_modes/4`;
/// * `ĵ_r(p) Ω = 0` whenever `rp ≥ 0`;
/// * Kronig identity `r Σ k :n_k: = ½ĵ(0)² + Σ_{rp>0} ĵ(−p)ĵ(p)` on every
///   state whose excitations lie in the inner half of the window
///   (full columns, not only the interior block);
/// * one particle-hole pair: both sides give `k₁ − k₂` for `r = +`;
/// * densities of different branches or copies commute.
pub fn chiral_1d_suite(space: &ChiralSpace) -> Result<Report> {
    let n = space.total_modes();
    let omega = space.vacuum();
    let pmax = (space.n_modes / 4) as i64;
    let mut rep = Report::default();
    let mut anomaly: f64 = 0.0;
    let mut kill: f64 = 0.0;
    let mut kronig: f64 = 0.0;
    let mut pair: f64 = 0.0;
    let mut cross: f64 = 0.0;
    for (b, &r) in space.branches.iter().enumerate() {
        for copy in 0..space.copies {
            let rs = r.sign();
            for q in 1..=pmax {
                for p in [q, -q] {
                    let a = space.density(b, copy, p).matrix(n)?;
                    let c = space.density(b, copy, -p).matrix(n)?;
                    anomaly = anomaly.max(commutator(&a, &c).eigen_residual(omega, (rs * p) as f64));
                }
            }
            let h = space.n_modes as i64;
            for p in -h..h {
                if rs * p >= 0 {
                    let col = space.density(b, copy, p).matrix(n)?.column(omega);
                    kill = kill.max(col.iter().fold(0.0, |a, (_, v)| a.max(v.abs())));
                }
            }
            let lhs = space.kinetic(b, copy).matrix(n)?;
            let rhs = space.kronig_rhs(b, copy).matrix(n)?;
            let diff = lhs.sub(&rhs);
            for s in space.interior_states(b, copy) {
                let col = diff.column(s);
                kronig = kronig.max(col.iter().fold(0.0, |a, (_, v)| a.max(v.abs())));
            }
            if r == R::Plus {
                // c†(½) c(−½) Ω has energy ½ − (−½) = 1 on both sides
                let (i, j) = (space.mode(b, copy, 0).expect("k=1/2"), space.mode(b, copy, -1).expect("k=-1/2"));
                let s = omega ^ (1 << i) ^ (1 << j);
                pair = pair.max((lhs.get(s, s) - 1.0).abs()).max((rhs.get(s, s) - 1.0).abs());
            }
        }
    }
    let blocks: Vec<(usize, usize)> =
        (0..space.branches.len()).flat_map(|b| (0..space.copies).map(move |c| (b, c))).collect();
    for (x, &(b1, c1)) in blocks.iter().enumerate() {
        for &(b2, c2) in &blocks[x + 1..] {
            for q in 1..=pmax {
                let a = space.density(b1, c1, q).matrix(n)?;
                let c = space.density(b2, c2, -q).matrix(n)?;
                cross = cross.max(commutator(&a, &c).max_abs());
            }
        }
    }
    rep.checks.push(Check::at_most("anomaly [j(p), j(-p)] Omega = r p Omega", anomaly, TOL));
    rep.checks.push(Check::at_most("j(p) Omega = 0 for r p >= 0", kill, TOL));
    rep.checks.push(Check::at_most("Kronig identity on interior states", kronig, TOL));
    if space.branches.contains(&R::Plus) {
        rep.checks.push(Check::at_most("single pair energy", pair, TOL));
    }
    if blocks.len() > 1 {
        rep.checks.push(Check::at_most("distinct densities commute", cross, TOL));
    }
    Ok(rep)
}

// ------------------------------------------------------------------ Pauli

/// `Σ_{k_j} δ(k₁−k₂+k₃−k₄) c†₁c₂c†₃c₄` on one flavor with the given labels.
pub fn self_interaction(ks: &[[i64; 2]]) -> Poly {
    let n = ks.len();
    let mut out = Poly::zero();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if (0..2).all(|j| ks[a][j] - ks[b][j] + ks[c][j] - ks[d][j] == 0) {
                        out = out.plus(&Poly::quartic(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

/// Checks that the normal-ordered antinodal self-interaction vanishes for
/// every filled subset of the given labels (at most 6), plus two controls
/// that must not vanish: the same sum without normal ordering, and with
/// only the vacuum expectation subtracted.
pub fn pauli_identity_check(ks: &[[i64; 2]]) -> Result<Report> {
    let n = ks.len();
    if !(1..=6).contains(&n) {
        bail!(InvalidParameter, "Pauli check takes 1 to 6 momentum labels (got {n})");
    }
    let mut sorted = ks.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        bail!(InvalidParameter, "momentum labels must be unique");
    }
    let v = self_interaction(ks);
    let bare = v.matrix(n)?;
    let mut wick: f64 = 0.0;
    let mut subtracted: f64 = f64::INFINITY;
    for omega in 0..1usize << n {
        wick = wick.max(wick_order(&v, omega).matrix(n)?.max_abs());
        let e = v.expectation(omega);
        subtracted = subtracted.min(bare.scaled_sum(-e, &SparseMatrix::identity(1 << n)).max_abs());
    }
    let mut rep = Report::default();
    rep.checks.push(Check::at_most("normal-ordered self-interaction, every sea", wick, TOL));
    rep.checks.push(Check::at_least("bare self-interaction (control)", bare.max_abs(), 0.5));
    rep.checks.push(Check::at_least("vacuum-subtracted only (control)", subtracted, 0.5));
    Ok(rep)
}
