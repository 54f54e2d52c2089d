//! One function per subcommand. Each returns a [`Output`]; the caller picks
//! the serialization.

use std::f64::consts::PI;

use lutt2d_core::antinodal::{renormalized_coupling, static_region, veff_hat, StaticRegion};
use lutt2d_core::couplings::{validity_check, Model};
use lutt2d_core::fock::{appendix_a_suite, chiral_1d_suite, pauli_identity_check, ChiralSpace, Expect, Report};
use lutt2d_core::lattice::{bz_grid, fermi_contour};
use lutt2d_core::nodal::{free_energy, ground_energy, omega_closed};
use lutt2d_core::partition::{region_of, Flavor, FlavorMap};
use lutt2d_core::realspace::{veff_xt, ChiTable, QuadratureSpec};
use lutt2d_core::vertices::enumerate_and_classify;
use lutt2d_core::{MomentumIndex, R, S};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{ConfigError, RunConfig};
use crate::output::{document, num, Cell, Table};

/// Result of a command.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Table(Table),
    /// JSON document; `verified` is set by verification commands.
    Json { doc: Value, verified: Option<bool> },
}

type CmdResult = Result<Output, ConfigError>;

fn json(doc: Value) -> Output {
    Output::Json { doc, verified: None }
}

fn flavor_map(m: &FlavorMap<f64>) -> Value {
    let obj: Map<String, Value> = Flavor::ALL.iter().map(|&f| (f.to_string(), num(m[f]))).collect();
    Value::Object(obj)
}

pub fn params(c: &RunConfig) -> CmdResult {
    let m = Model::new(c.model, c.partition)?;
    let cs = &m.couplings;
    let (p, pp) = (&c.model, &c.partition);
    let mut input = Map::new();
    for (k, v) in [
        ("t", p.t),
        ("t_prime", p.t_prime),
        ("V", p.v),
        ("a", p.a),
        ("nu_a", pp.nu_a),
        ("b1", pp.b1),
        ("b2", pp.b2),
    ] {
        input.insert(k.into(), num(v));
    }
    for (k, v) in [("n_L", pp.n_l), ("n_kappa", pp.n_kappa), ("n_Q", pp.n_q)] {
        input.insert(k.into(), Value::from(v));
    }
    let val = validity_check(p, pp, cs, c.validity_margin * p.t);
    let mut validity = Map::new();
    validity.insert("pass".into(), Value::from(val.pass));
    validity.insert("margin".into(), num(val.margin));
    validity.insert("in_slack".into(), num(val.in_slack));
    validity.insert("out_slack".into(), num(val.out_slack));
    validity.insert("sign_note".into(), val.sign_note.map_or(Value::Null, Value::from));

    let mut body = Map::new();
    body.insert("input".into(), Value::Object(input));
    for (k, v) in [
        ("kappa", cs.kappa),
        ("Q", cs.q),
        ("v_F", cs.v_f),
        ("c_F", cs.c_f),
        ("c_F_prime", cs.c_f_prime),
        ("a_tilde", cs.a_tilde),
        ("gamma", cs.gamma),
        ("g1", cs.g1),
        ("g2", cs.g2),
        ("g3", cs.g3),
        ("g4", cs.g4),
        ("g_eff", cs.g_eff),
        ("g_eff_alt", cs.g_eff_alt),
        ("g3_renormalized", renormalized_coupling(&m)),
        ("mu", cs.mu),
        ("mu0", cs.mu0),
        ("mu_plus2", cs.mu_plus2),
        ("mu_minus2", cs.mu_minus2),
        ("nu", cs.nu),
        ("E0", cs.e0),
        ("E_int", cs.e_int),
    ] {
        body.insert(k.into(), num(v));
    }
    body.insert("mu_rs".into(), flavor_map(&cs.mu_rs));
    body.insert("nu_rs".into(), flavor_map(&cs.nu_rs));
    body.insert("validity".into(), Value::Object(validity));
    Ok(json(document("params", body)))
}

pub fn fermi_surface(c: &RunConfig) -> CmdResult {
    let lines = fermi_contour(c.model.mu, &c.model, c.resolution)?;
    let mut t = Table::new(vec!["contour", "vertex", "k1 [1/a]", "k2 [1/a]"]);
    for (i, line) in lines.iter().enumerate() {
        for (j, k) in line.iter().enumerate() {
            t.push(vec![Cell::Int(i as i64), Cell::Int(j as i64), k[0].into(), k[1].into()]);
        }
    }
    Ok(Output::Table(t))
}

pub fn partition(c: &RunConfig) -> CmdResult {
    let mut t = Table::new(vec!["m1", "m2", "k1 [1/a]", "k2 [1/a]", "r", "s", "n1", "n2"]);
    for k in bz_grid(&c.model) {
        let lab = region_of(k, &c.partition)?;
        let [m1, m2] = k.cartesian_units();
        let [k1, k2] = k.cartesian(&c.model);
        t.push(vec![
            m1.into(),
            m2.into(),
            k1.into(),
            k2.into(),
            lab.flavor.r_label().into(),
            lab.flavor.s_label().into(),
            lab.umklapp[0].into(),
            lab.umklapp[1].into(),
        ]);
    }
    Ok(Output::Table(t))
}

pub fn vertices(c: &RunConfig, allow_half_pi: bool) -> CmdResult {
    let list = enumerate_and_classify(&c.partition, allow_half_pi)?;
    let mut t = Table::new(vec!["r1", "s1", "r2", "s2", "r3", "s3", "r4", "s4", "n1", "n2", "category"]);
    for (v, cat) in list {
        let mut row: Vec<Cell> = Vec::new();
        for f in v.flavors {
            row.push(f.r_label().into());
            row.push(f.s_label().into());
        }
        row.push(v.umklapp[0].into());
        row.push(v.umklapp[1].into());
        row.push(Cell::Text(cat.label()));
        t.push(row);
    }
    Ok(Output::Table(t))
}

pub fn dispersion(c: &RunConfig, pool: &rayon::ThreadPool) -> CmdResult {
    let m = Model::new(c.model, c.partition)?;
    let w = c.partition.outer_half_width();
    let grid: Vec<MomentumIndex> = (-w..=w)
        .flat_map(|a| (-w..=w).map(move |b| MomentumIndex::bosonic(a, b)))
        .filter(|p| (p.m_plus, p.m_minus) != (0, 0))
        .collect();
    let rows: Vec<Vec<Cell>> = pool.install(|| {
        grid.par_iter()
            .map(|&p| {
                let [kp, km] = p.diag(&m.lattice);
                let om = |s| omega_closed(s, p, &m).ok();
                vec![kp.into(), km.into(), om(S::Plus).into(), om(S::Minus).into()]
            })
            .collect()
    });
    let mut t = Table::new(vec!["p_plus [1/a]", "p_minus [1/a]", "omega_plus [t]", "omega_minus [t]"]);
    t.rows = rows;
    Ok(Output::Table(t))
}

pub fn free_energy_cmd(c: &RunConfig) -> CmdResult {
    let m = Model::new(c.model, c.partition)?;
    let mut body = Map::new();
    body.insert("beta".into(), num(c.beta));
    body.insert("f_n".into(), num(free_energy(c.beta, c.beta, None, &m)?));
    body.insert("E_n".into(), num(ground_energy(&m)?));
    Ok(json(document("free-energy", body)))
}

fn region_label(r: StaticRegion) -> &'static str {
    match r {
        StaticRegion::Coupled => "coupled",
        StaticRegion::SingleMode => "single",
        StaticRegion::Outside => "outside",
    }
}

pub fn veff(c: &RunConfig, pool: &rayon::ThreadPool) -> CmdResult {
    let m = Model::new(c.model, c.partition)?;
    let h = c.p_max;
    let mut pts = Vec::new();
    for &om in &c.omega {
        for a in -h..=h {
            for b in -h..=h {
                pts.push((om, MomentumIndex::bosonic(a, b)));
            }
        }
    }
    let rows: Result<Vec<Vec<Cell>>, lutt2d_core::Error> = pool.install(|| {
        pts.par_iter()
            .map(|&(om, p)| {
                let [kp, km] = p.diag(&m.lattice);
                let v = veff_hat(om, p, &m)?;
                Ok(vec![om.into(), kp.into(), km.into(), region_label(static_region(p, &m)).into(), v.into()])
            })
            .collect()
    });
    let mut t = Table::new(vec!["omega [t]", "p_plus [1/a]", "p_minus [1/a]", "region", "veff [t a^2]"]);
    t.rows = rows?;
    Ok(Output::Table(t))
}

pub fn realspace_f(c: &RunConfig, pool: &rayon::ThreadPool) -> CmdResult {
    let m = Model::new(c.model, c.partition)?;
    let table = ChiTable::new(m.couplings.gamma, QuadratureSpec { n_nodes: c.nodes, graded: true })?;
    let n = c.x_points;
    let xs: Vec<f64> = (0..n).map(|i| c.x_min * (c.x_max / c.x_min).powf(i as f64 / (n - 1) as f64)).collect();
    let pts: Vec<(f64, f64)> = c.phi_over_pi.iter().flat_map(|&ph| xs.iter().map(move |&x| (ph * PI, x))).collect();
    let rows: Result<Vec<Vec<Cell>>, lutt2d_core::Error> = pool.install(|| {
        pts.par_iter().map(|&(phi, x)| Ok(vec![phi.into(), x.into(), table.f(phi, x)?.into()])).collect()
    });
    let mut t = Table::new(vec!["phi [rad]", "x [1]", "f_gamma [1]"]);
    t.rows = rows?;
    Ok(Output::Table(t))
}

pub fn realspace_veff(c: &RunConfig, pool: &rayon::ThreadPool) -> CmdResult {
    let m = Model::new(c.model, c.partition)?;
    let table = ChiTable::new(m.couplings.gamma, QuadratureSpec { n_nodes: c.nodes, graded: true })?;
    let n = c.x_points;
    // cell centres never fall on the singular axes
    let coord = |i: usize| -c.x_extent + (i as f64 + 0.5) * 2.0 * c.x_extent / n as f64;
    let mut pts = Vec::new();
    for &tau in &c.tau {
        for i in 0..n {
            for j in 0..n {
                pts.push((tau, [coord(i), coord(j)]));
            }
        }
    }
    let rows: Result<Vec<Vec<Cell>>, lutt2d_core::Error> = pool.install(|| {
        pts.par_iter()
            .map(|&(tau, x)| Ok(vec![tau.into(), x[0].into(), x[1].into(), veff_xt(tau, x, &m, &table)?.into()]))
            .collect()
    });
    let mut t = Table::new(vec!["tau [1/t]", "x_plus [a]", "x_minus [a]", "veff [t^2]"]);
    t.rows = rows?;
    Ok(Output::Table(t))
}

/// Suites run by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    AppendixA,
    Bosonization,
    Pauli,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::AppendixA => "appendixA",
            Suite::Bosonization => "bosonization",
            Suite::Pauli => "pauli",
        }
    }
}

/// Chiral windows exercised by the bosonization suite.
pub fn chiral_spaces() -> Vec<(String, ChiralSpace)> {
    let mk = |n, b: Vec<R>, copies| ChiralSpace::new(n, b, copies).expect("fixed chiral space is valid");
    vec![
        ("r=+, 8 modes".into(), mk(8, vec![R::Plus], 1)),
        ("r=+, 12 modes".into(), mk(12, vec![R::Plus], 1)),
        ("r=-, 8 modes".into(), mk(8, vec![R::Minus], 1)),
        ("r=+-, 4 modes".into(), mk(4, vec![R::Plus, R::Minus], 1)),
        ("r=+, 2 copies, 6 modes".into(), mk(6, vec![R::Plus], 2)),
    ]
}

/// Label sets of the Pauli check.
pub const PAULI_SETS: [&[[i64; 2]]; 3] = [
    &[[0, 0], [1, 0], [2, 0]],
    &[[0, 0], [1, 1], [2, 0], [1, -1]],
    &[[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [-1, 2]],
];

/// Runs a suite; each check name is prefixed with the case it belongs to.
pub fn run_suite(suite: Suite, c: &RunConfig) -> Result<Report, ConfigError> {
    let mut all = Report::default();
    let mut absorb = |prefix: &str, rep: Report| {
        for mut chk in rep.checks {
            if !prefix.is_empty() {
                chk.name = format!("{prefix}: {}", chk.name);
            }
            all.checks.push(chk);
        }
    };
    match suite {
        Suite::AppendixA => absorb("", appendix_a_suite(&c.model, &c.partition, c.fock_labels)?),
        Suite::Bosonization => {
            for (name, sp) in chiral_spaces() {
                absorb(&name, chiral_1d_suite(&sp)?);
            }
        }
        Suite::Pauli => {
            for ks in PAULI_SETS {
                absorb(&format!("{} labels", ks.len()), pauli_identity_check(ks)?);
            }
        }
    }
    Ok(all)
}

pub fn verify(suite: Suite, c: &RunConfig) -> CmdResult {
    let rep = run_suite(suite, c)?;
    let checks: Vec<Value> = rep
        .checks
        .iter()
        .map(|chk| {
            let mut o = Map::new();
            o.insert("name".into(), Value::from(chk.name.as_str()));
            o.insert("value".into(), num(chk.value));
            o.insert("bound".into(), num(chk.bound));
            let expect = match chk.expect {
                Expect::AtMost => "at_most",
                Expect::AtLeast => "at_least",
            };
            o.insert("expect".into(), Value::from(expect));
            o.insert("pass".into(), Value::from(chk.pass()));
            Value::Object(o)
        })
        .collect();
    let pass = rep.all_pass();
    let mut body = Map::new();
    body.insert("suite".into(), Value::from(suite.name()));
    body.insert("pass".into(), Value::from(pass));
    body.insert("checks".into(), Value::Array(checks));
    Ok(Output::Json { doc: document("verify", body), verified: Some(pass) })
}
