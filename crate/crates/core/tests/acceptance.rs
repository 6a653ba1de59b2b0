//! Acceptance gate: one line per criterion, nonzero exit on any failure.
//!
//! Time limits and tolerances are fixed below; every exact criterion uses
//! 64-bit rationals.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use floerlab::closed_open::{
    build_closed_open, cobordism_energy_formula, cobordism_energy_lattice, cobordism_identity,
    horizontal_reference, maps_sigma_to_unit, sigma_class, spectral_compare, Basepoint,
};
use floerlab::complex::{shift_reference, spectral_invariant, FilteredComplex, Payload, Window};
use floerlab::geometry::{build_link_model, build_link_model_relaxed, build_morse_hamiltonian, Profile};
use floerlab::index::monotonicity_gap;
use floerlab::lattice::{Anchor, Context, RawClass};
use floerlab::morse::{
    build_hf_complex, build_morse_complexes, is_top, MorseComplexes, MorseOrbitSet,
};
use floerlab::symprod::{
    discriminant_winding_oracle, index_compare, jacobian_deviation, BranchedCoverData, LocalModel,
    DEFAULT_RADIUS, DEFAULT_SAMPLES,
};
use floerlab::{Rational, RationalHamiltonian, RationalModel};

const SEED: u64 = 0x5eed_0001;
const WINDING_TOL: f64 = 1e-6;
const JACOBIAN_TOL: f64 = 1e-9;
const EPSILONS: [(i64, i64); 3] = [(1, 10), (1, 50), (1, 100)];
/// Standard profiles of criteria 2–4, 9 and 10: `(g, k)`.
const PROFILES: [(i64, i64); 6] = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)];

fn secs(s: f64) -> Duration {
    Duration::from_secs_f64(s)
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

struct Built {
    g: i64,
    k: i64,
    model: RationalModel,
    ham: RationalHamiltonian,
    complexes: MorseComplexes<Rational>,
}

fn build(g: i64, k: i64, eps: Rational, window: Window) -> Result<Built, String> {
    let model = build_link_model(g, k).map_err(|e| e.to_string())?;
    let ham = build_morse_hamiltonian(&model, eps, &Profile::Standard).map_err(|e| e.to_string())?;
    let complexes = build_morse_complexes(&model, &ham, window).map_err(|e| e.to_string())?;
    Ok(Built { g, k, model, ham, complexes })
}

fn build_all(eps: Rational, window: Window) -> Result<Vec<Built>, String> {
    PROFILES.iter().map(|&(g, k)| build(g, k, eps, window)).collect()
}

/// HF rank per period is `2^d` for `d = 1..4`, stable between 2 and 3
/// periods.
fn hf_rank_law() -> Result<String, String> {
    let cases: [(i64, i64); 7] = [(0, 1), (0, 2), (0, 3), (1, 2), (0, 4), (1, 3), (2, 2)];
    for (g, k) in cases {
        let model: RationalModel = if k == 1 {
            build_link_model_relaxed(g, k)
        } else {
            build_link_model(g, k)
        }
        .map_err(|e| e.to_string())?;
        let ham = build_morse_hamiltonian(&model, r(1, 10), &Profile::Standard).map_err(|e| e.to_string())?;
        let want = 1usize << model.d;
        for periods in [2, 3] {
            let hf = build_hf_complex(&model, &ham, Window::periods(periods)).map_err(|e| e.to_string())?;
            let h = hf.homology();
            if h.rank_per_period != want || h.rank != want * periods {
                return Err(format!("g={g} k={k} periods={periods}: rank {} want {want}/period", h.rank));
            }
        }
    }
    Ok(format!("{} models, d=1..4, ranks 2^d", cases.len()))
}

fn cycle_nonvanishing(built: &[Built]) -> Result<String, String> {
    for b in built {
        let c = &b.complexes;
        if !c.pfh.is_cycle(&c.cycle.chain) {
            return Err(format!("g={} k={}: d𝔠 != 0", b.g, b.k));
        }
        if c.pfh.is_boundary(&c.cycle.chain) {
            return Err(format!("g={} k={}: [𝔠] = 0", b.g, b.k));
        }
    }
    let sizes: Vec<String> = built.iter().map(|b| b.complexes.pfh.len().to_string()).collect();
    Ok(format!("{} profiles, PFH sizes {}", built.len(), sizes.join("/")))
}

fn closed_open_image(built: &[Built]) -> Result<String, String> {
    let mut entries = 0;
    for b in built {
        let c = &b.complexes;
        let map = build_closed_open(&b.model, &b.ham, c, &horizontal_reference(b.model.k)).map_err(|e| e.to_string())?;
        if map.apply(&c.cycle.chain) != vec![c.unit] {
            return Err(format!("g={} k={}: Φ(𝔠) != (y+, A+)", b.g, b.k));
        }
        if !maps_sigma_to_unit(&map, &sigma_class(c), c.unit) {
            return Err(format!("g={} k={}: Φ_*σ != unit", b.g, b.k));
        }
        for e in &map.entries {
            let w = &e.witness;
            if w.index != 0 || w.energy != r(0, 1) || w.n_y != 0 {
                return Err(format!("g={} k={}: entry {:?} violates I=0, E=0", b.g, b.k, w));
            }
        }
        for (label, ws) in &map.top_survivors {
            if ws.iter().any(|w| w.n_y != 0) {
                return Err(format!("{label}: surviving candidate with n(y) > 0"));
            }
        }
        let plus = c.pfh.index_of(c.alpha_plus, 0).expect("alpha_+ at T^0");
        for &i in &c.cycle.chain {
            if (i == plus) == map.image_of(i).is_empty() {
                return Err(format!("g={} k={}: wrong image of {}", b.g, b.k, c.pfh.label(i)));
            }
        }
        entries += map.entries.len();
    }
    Ok(format!("{} profiles, {entries} derived entries, chain map verified", built.len()))
}

fn spectral_inequality() -> Result<String, String> {
    let mut rows = 0;
    for (p, q) in EPSILONS {
        let eps = r(p, q);
        for b in build_all(eps, Window::periods(1))? {
            let d = b.model.d as i64;
            for x in Basepoint::all(b.model.d) {
                let s = spectral_compare(&b.ham, &b.complexes, &x, &r(0, 1)).map_err(|e| e.to_string())?;
                if !s.holds {
                    return Err(format!("g={} k={} eps={eps} x={}: {} > {}", b.g, b.k, x.label(), s.lhs, s.rhs));
                }
                // trivial references: both sides equal eps d
                let oracle = eps * Rational::from(d);
                if s.lhs != oracle || s.rhs != oracle {
                    return Err(format!("g={} k={} eps={eps} x={}: lhs {} rhs {} want {oracle}", b.g, b.k, x.label(), s.lhs, s.rhs));
                }
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} (model, eps, basepoint) rows, lhs = rhs = eps d"))
}

fn shift_law(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let b = build(0, 2, r(1, 10), Window::periods(2))?;
    let pfh = &b.complexes.pfh;
    let classes = nontrivial_classes(pfh, &b.complexes.cycle.chain);
    let base: Vec<Rational> = classes
        .iter()
        .map(|c| spectral_invariant(pfh, c).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    for _ in 0..100 {
        let e = r(rng.gen_range(-60..=60), rng.gen_range(1..=30));
        let shifted = shift_reference(pfh, &e);
        for (c, v) in classes.iter().zip(&base) {
            let got = spectral_invariant(&shifted, c).map_err(|e| e.to_string())?;
            if got != *v + e {
                return Err(format!("shift {e}: {got} != {v} + {e}"));
            }
        }
    }
    Ok(format!("100 shifts x {} classes", classes.len()))
}

/// `𝔠`, its `T`-translate, and homology representatives away from `𝔠`.
fn nontrivial_classes(c: &FilteredComplex<Rational>, cycle: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = c.homology().representatives.into_iter().take(6).collect();
    out.push(cycle.to_vec());
    out.push(c.translate(cycle, 1));
    out
}

fn monotonicity(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for k in [2i64, 3, 4] {
        let model: RationalModel = build_link_model(0, k).map_err(|e| e.to_string())?;
        let ku = k as usize;
        let random = |rng: &mut ChaCha8Rng| {
            let mut raw = RawClass::zero(Context::Hf, Anchor::new("A0"), ku);
            for v in [&mut raw.b, &mut raw.phi_b, &mut raw.b_complement, &mut raw.phi_b_complement] {
                v.iter_mut().for_each(|x| *x = rng.gen_range(-5..=5));
            }
            raw.sigma = rng.gen_range(-5..=5);
            raw.reduce().expect("HF accepts every coordinate")
        };
        for _ in 0..1000 {
            let (a, b) = (random(rng), random(rng));
            let m = monotonicity_gap(&a, &b, &model).map_err(|e| e.to_string())?;
            if !m.consistent {
                return Err(format!("k={k}: gap {} vs energy {}", m.index_gap, m.energy_gap));
            }
        }
    }
    Ok("3000 random pairs, k=2,3,4".into())
}

/// Multisets of branch degrees `>= 2` with `sum (m - 1) = b`.
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

fn index_comparison(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut checked = 0usize;
    let mut check = |data: BranchedCoverData| -> Result<(), String> {
        let c = index_compare(&data).map_err(|e| e.to_string())?;
        checked += 1;
        if c.equal {
            Ok(())
        } else {
            Err(format!("{data:?}: {} != {}", c.lhs, c.rhs))
        }
    };
    for d in 1..=4i64 {
        for b in 0..=4i64 {
            for branch_degrees in branch_profiles(b, 2) {
                for double_points in -3..=3 {
                    for c1_u in -3..=3 {
                        for maslov_u in -4..=4 {
                            check(BranchedCoverData {
                                d,
                                chi_f: d - b,
                                branch_degrees: branch_degrees.clone(),
                                double_points,
                                c1_u,
                                maslov_u,
                            })?;
                        }
                    }
                }
            }
        }
    }
    for _ in 0..10_000 {
        let d = rng.gen_range(1..=40);
        let branch_degrees: Vec<u32> = (0..rng.gen_range(0..6)).map(|_| rng.gen_range(2..=8)).collect();
        let b: i64 = branch_degrees.iter().map(|&m| m as i64 - 1).sum();
        check(BranchedCoverData {
            d,
            chi_f: d - b,
            branch_degrees,
            double_points: rng.gen_range(-50..=50),
            c1_u: rng.gen_range(-50..=50),
            maslov_u: rng.gen_range(-50..=50),
        })?;
    }
    Ok(format!("{checked} RH-consistent tuples"))
}

fn discriminant_winding(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut worst = 0f64;
    for m in 2..=5u32 {
        let w = discriminant_winding_oracle(&LocalModel::<f64>::branch(m), DEFAULT_SAMPLES, DEFAULT_RADIUS)
            .map_err(|e| e.to_string())?;
        let dev = (w - (m as f64 - 1.0)).abs();
        worst = worst.max(dev);
        if dev >= WINDING_TOL {
            return Err(format!("branch m={m}: winding {w}"));
        }
    }
    for (positive, want) in [(true, 2.0), (false, -2.0)] {
        let w = discriminant_winding_oracle(&LocalModel::<f64>::double_point(positive), DEFAULT_SAMPLES, DEFAULT_RADIUS)
            .map_err(|e| e.to_string())?;
        worst = worst.max((w - want).abs());
        if (w - want).abs() >= WINDING_TOL {
            return Err(format!("double point {positive}: winding {w}"));
        }
    }
    let mut worst_jac = 0f64;
    for _ in 0..100 {
        let d = rng.gen_range(2..=6);
        let z: Vec<Complex<f64>> = (0..d).map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let dev = jacobian_deviation(&z);
        worst_jac = worst_jac.max(dev);
        if !(dev < JACOBIAN_TOL) {
            return Err(format!("jacobian deviation {dev:e} at {z:?}"));
        }
    }
    Ok(format!("max winding dev {worst:.1e} (tol {WINDING_TOL:e}), max jacobian dev {worst_jac:.1e} (tol {JACOBIAN_TOL:e})"))
}

fn cobordism(built: &[Built], rng: &mut ChaCha8Rng) -> Result<String, String> {
    for b in built {
        let pfh = &b.complexes.pfh;
        let id = cobordism_identity(&b.ham, pfh);
        for (&i, img) in &id.matrix {
            if img != &vec![i] {
                return Err(format!("{} not fixed", pfh.label(i)));
            }
        }
        let cyc = &b.complexes.cycle.chain;
        if id.apply(cyc) != *cyc || id.compose(&id).apply(cyc) != *cyc {
            return Err(format!("g={} k={}: composition moves [𝔠]", b.g, b.k));
        }
    }
    let b = &built[0];
    let pfh = &b.complexes.pfh;
    let sets: Vec<(usize, &MorseOrbitSet)> = pfh
        .base_generators()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match &g.payload {
            Payload::OrbitSet(s) => Some((i, s)),
            _ => None,
        })
        .collect();
    let tops: Vec<&(usize, &MorseOrbitSet)> = sets.iter().filter(|(_, s)| is_top(s, &b.ham)).collect();
    for _ in 0..100 {
        let (ti, top) = tops[rng.gen_range(0..tops.len())];
        let (bi, bot) = sets[rng.gen_range(0..sets.len())];
        let m = rng.gen_range(-3..=3);
        let lattice = cobordism_energy_lattice(&b.model, pfh, *ti, bi, m);
        let formula = cobordism_energy_formula(&b.ham, top, bot, m);
        if lattice != formula {
            return Err(format!("energy mismatch {lattice} vs {formula}"));
        }
    }
    Ok(format!("{} profiles fixed, 100 energy triples", built.len()))
}

fn filtration(built: &[Built], rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut complexes = 0;
    for b in built {
        for c in [&b.complexes.pfh, &b.complexes.hf] {
            let levels: Vec<Rational> = (0..50).map(|_| r(rng.gen_range(-400..=100), rng.gen_range(1..=100))).collect();
            for (level, res) in levels.iter().zip(c.check_sublevels(&levels)) {
                if let Err((i, j)) = res {
                    return Err(format!("L={level}: {} -> {}", c.label(i), c.label(j)));
                }
            }
            complexes += 1;
        }
    }
    Ok(format!("{complexes} complexes x 50 levels"))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0;
    let mut report = |id: usize, name: &str, limit: Duration, start: Instant, res: Result<String, String>| {
        let took = start.elapsed();
        let (ok, detail) = match res {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "[{}] {id:>2} {name}: {detail} ({:.3}s, limit {:.0}s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs_f64()
        );
    };

    let t = Instant::now();
    report(1, "HF rank law", secs(5.0), t, hf_rank_law());

    let t = Instant::now();
    let built = build_all(r(1, 10), Window::default());
    let res = built.as_ref().map_err(|e| e.clone()).and_then(|b| cycle_nonvanishing(b));
    report(2, "cycle and non-vanishing", secs(5.0), t, res);
    let built = built.unwrap_or_default();

    let t = Instant::now();
    report(3, "closed-open image", secs(5.0), t, closed_open_image(&built));

    let t = Instant::now();
    report(4, "spectral inequality", secs(5.0), t, spectral_inequality());

    let t = Instant::now();
    report(5, "shift law", secs(1.0), t, shift_law(&mut rng));

    let t = Instant::now();
    report(6, "monotonicity", secs(1.0), t, monotonicity(&mut rng));

    let t = Instant::now();
    report(7, "index comparison", secs(2.0), t, index_comparison(&mut rng));

    let t = Instant::now();
    report(8, "discriminant winding", secs(5.0), t, discriminant_winding(&mut rng));

    let t = Instant::now();
    report(9, "cobordism identity", secs(1.0), t, cobordism(&built, &mut rng));

    let t = Instant::now();
    report(10, "filtration soundness", secs(2.0), t, filtration(&built, &mut rng));

    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
