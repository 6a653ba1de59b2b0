use std::path::Path;

use anyhow::Result;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use floerlab::closed_open::{build_closed_open, horizontal_reference};
use floerlab::complex::{ComplexError, FilteredComplex};
use floerlab::index::monotonicity_gap;
use floerlab::lattice::{Anchor, Context, RawClass};
use floerlab::symprod::{
    discriminant_winding_oracle, index_compare, jacobian_deviation, BranchedCoverData, LocalModel, DEFAULT_RADIUS,
    DEFAULT_SAMPLES,
};
use floerlab::Rational;

use crate::config::RunConfig;
use crate::output::read_json;
use crate::pipeline::{build_instances, spectral_rows, Instance};

pub const WINDING_TOL: f64 = 1e-6;
pub const JACOBIAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    pub detail: String,
    /// Offending pairs or items; empty on success.
    pub witnesses: Vec<Vec<String>>,
}

impl Check {
    fn ok(name: &str, checked: usize, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass: true, checked, max_deviation: None, detail: detail.into(), witnesses: vec![] }
    }

    fn fail(name: &str, checked: usize, detail: impl Into<String>, witnesses: Vec<Vec<String>>) -> Self {
        Check { name: name.into(), pass: false, checked, max_deviation: None, detail: detail.into(), witnesses }
    }
}

fn boundary_square(inst: &[Instance]) -> Check {
    let mut checked = 0;
    for i in inst {
        for c in [&i.complexes.pfh, &i.complexes.hf] {
            for g in 0..c.len() {
                let dd = c.boundary(&c.boundary_of(g));
                if let Some(&j) = dd.first() {
                    return Check::fail("boundary_square", checked, format!("eps={}", i.eps), vec![vec![c.label(g), c.label(j)]]);
                }
                checked += 1;
            }
        }
    }
    Check::ok("boundary_square", checked, "d^2 = 0 on every generator")
}

fn cycle_c(inst: &[Instance]) -> Check {
    for i in inst {
        let c = &i.complexes;
        if !c.pfh.is_cycle(&c.cycle.chain) {
            let bad = c.pfh.boundary(&c.cycle.chain);
            return Check::fail("cycle_c", 0, format!("eps={}: d𝔠 != 0", i.eps), vec![bad.iter().map(|&j| c.pfh.label(j)).collect()]);
        }
        if c.pfh.is_boundary(&c.cycle.chain) {
            return Check::fail("cycle_c", 0, format!("eps={}: [𝔠] = 0", i.eps), vec![c.cycle.labels.clone()]);
        }
    }
    Check::ok("cycle_c", inst.len(), "𝔠 is a cycle with nonzero class")
}

fn chain_map(inst: &[Instance]) -> Check {
    let mut checked = 0;
    for i in inst {
        let c = &i.complexes;
        let map = match build_closed_open(&i.model, &i.ham, c, &horizontal_reference(i.model.k)) {
            Ok(m) => m,
            Err(e) => return Check::fail("chain_map", checked, e.to_string(), vec![]),
        };
        if let Err(e) = map.verify_chain_map() {
            return Check::fail("chain_map", checked, e.to_string(), vec![]);
        }
        if map.apply(&c.cycle.chain) != vec![c.unit] {
            return Check::fail("chain_map", checked, format!("eps={}: Φ(𝔠) is not the unit", i.eps), vec![]);
        }
        checked += map.entries.len();
    }
    Check::ok("chain_map", checked, "Φ∂ = ∂Φ and Φ(𝔠) = (y+, A+)")
}

fn filtration(inst: &[Instance], rng: &mut ChaCha8Rng) -> Check {
    let mut checked = 0;
    for i in inst {
        for c in [&i.complexes.pfh, &i.complexes.hf] {
            let levels: Vec<Rational> = (0..50).map(|_| Rational::new(rng.gen_range(-400..=100), rng.gen_range(1..=100))).collect();
            for (level, res) in levels.iter().zip(c.check_sublevels(&levels)) {
                if let Err((a, b)) = res {
                    return Check::fail("filtration", checked, format!("L={level}"), vec![vec![c.label(a), c.label(b)]]);
                }
                checked += 1;
            }
        }
    }
    Check::ok("filtration", checked, "action sublevels are subcomplexes")
}

fn monotonicity(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Check> {
    let model = cfg.model()?;
    let k = model.k;
    let mut random = || {
        let mut raw = RawClass::zero(Context::Hf, Anchor::new("A0"), k);
        for v in [&mut raw.b, &mut raw.phi_b, &mut raw.b_complement, &mut raw.phi_b_complement] {
            v.iter_mut().for_each(|x| *x = rng.gen_range(-5..=5));
        }
        raw.sigma = rng.gen_range(-5..=5);
        raw.reduce()
    };
    for n in 0..1000 {
        let (a, b) = (random()?, random()?);
        let m = monotonicity_gap(&a, &b, &model)?;
        if !m.consistent {
            return Ok(Check::fail(
                "monotonicity",
                n,
                format!("index gap {} vs energy gap {}", m.index_gap, m.energy_gap),
                vec![vec![serde_json::to_string(&a)?, serde_json::to_string(&b)?]],
            ));
        }
    }
    Ok(Check::ok("monotonicity", 1000, format!("index gap = 2(k+1) energy gap, k={k}")))
}

/// Multisets of branch degrees `>= min` with `sum (m - 1) = b`.
fn branch_profiles(b: i64, min: u32) -> Vec<Vec<u32>> {
    if b == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for m in min..=(b as u32 + 1) {
        for mut rest in branch_profiles(b - (m as i64 - 1), m) {
            rest.insert(0, m);
            out.push(rest);
        }
    }
    out
}

pub fn index_comparison() -> Result<Check> {
    let mut checked = 0;
    for d in 1..=4i64 {
        for b in 0..=4i64 {
            for degrees in branch_profiles(b, 2) {
                for double_points in -3..=3 {
                    for c1_u in -3..=3 {
                        for maslov_u in -4..=4 {
                            let data = BranchedCoverData {
                                d,
                                chi_f: d - b,
                                branch_degrees: degrees.clone(),
                                double_points,
                                c1_u,
                                maslov_u,
                            };
                            let c = index_compare(&data)?;
                            if !c.equal {
                                return Ok(Check::fail(
                                    "index_comparison",
                                    checked,
                                    format!("{} != {}", c.lhs, c.rhs),
                                    vec![vec![serde_json::to_string(&data)?]],
                                ));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(Check::ok("index_comparison", checked, "I(u) = ind s_u on the RH-consistent grid"))
}

pub fn winding(samples: usize, radius: f64, rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0f64;
    let mut cases: Vec<(String, LocalModel<f64>)> = (2..=5).map(|m| (format!("branch m={m}"), LocalModel::branch(m))).collect();
    cases.push(("double point +".into(), LocalModel::double_point(true)));
    cases.push(("double point -".into(), LocalModel::double_point(false)));
    for (name, local) in &cases {
        let w = discriminant_winding_oracle(local, samples, radius)?;
        let dev = (w - local.expected_winding() as f64).abs();
        worst = worst.max(dev);
        if dev >= WINDING_TOL {
            let mut c = Check::fail("winding", 0, format!("{name}: winding {w}"), vec![vec![name.clone(), w.to_string()]]);
            c.max_deviation = Some(worst);
            return Ok(c);
        }
    }
    let mut worst_jac = 0f64;
    for _ in 0..100 {
        let d = rng.gen_range(2..=6);
        let z: Vec<Complex64> = (0..d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        worst_jac = worst_jac.max(jacobian_deviation(&z));
    }
    let pass = worst_jac < JACOBIAN_TOL;
    Ok(Check {
        name: "winding".into(),
        pass,
        checked: cases.len() + 100,
        max_deviation: Some(worst.max(worst_jac)),
        detail: format!("winding dev {worst:.1e} (tol {WINDING_TOL:e}), jacobian dev {worst_jac:.1e} (tol {JACOBIAN_TOL:e})"),
        witnesses: vec![],
    })
}

fn spectral_table(cfg: &RunConfig, inst: &[Instance]) -> Result<Check> {
    let rows = spectral_rows(cfg, inst, true)?;
    let bad: Vec<Vec<String>> = rows
        .iter()
        .filter(|(_, r)| !r.holds)
        .map(|(e, r)| vec![e.to_string(), r.basepoint.clone(), r.lhs.to_string(), r.rhs.to_string()])
        .collect();
    Ok(if bad.is_empty() {
        Check::ok("spectral_table", rows.len(), "c_hf <= c_pfh + sum H(x_i) at every basepoint")
    } else {
        Check::fail("spectral_table", rows.len(), format!("{} rows fail", bad.len()), bad)
    })
}

/// Loads a complex document and re-validates it.
pub fn complex_fixture(path: &Path) -> Result<Check> {
    let doc: Value = read_json(path)?;
    let name = "complex_fixture";
    Ok(match FilteredComplex::<Rational>::from_json(&doc) {
        Ok(c) => Check::ok(name, c.len(), format!("{} valid", path.display())),
        Err(ComplexError::BoundarySquare { from, to }) => {
            Check::fail(name, 0, format!("d^2 != 0 in {}", path.display()), vec![vec![from, to]])
        }
        Err(ComplexError::ActionIncreasing { from, to }) => {
            Check::fail(name, 0, format!("action-increasing entry in {}", path.display()), vec![vec![from, to]])
        }
        Err(e) => Check::fail(name, 0, format!("{}: {e}", path.display()), vec![]),
    })
}

pub fn cmd_verify(cfg: &RunConfig, fixture: Option<&Path>) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    if let Some(p) = fixture {
        checks.push(complex_fixture(p)?);
    }
    let inst = build_instances(cfg)?;
    checks.push(boundary_square(&inst));
    checks.push(cycle_c(&inst));
    checks.push(chain_map(&inst));
    checks.push(filtration(&inst, &mut rng));
    checks.push(monotonicity(cfg, &mut rng)?);
    checks.push(index_comparison()?);
    checks.push(winding(DEFAULT_SAMPLES, DEFAULT_RADIUS, &mut rng)?);
    checks.push(spectral_table(cfg, &inst)?);
    Ok(checks)
}
