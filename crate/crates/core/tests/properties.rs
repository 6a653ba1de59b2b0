//! Property tests for the lattice, index and spectral laws.

use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use floerlab::closed_open::Basepoint;
use floerlab::complex::{change_basepoint, shift_reference, spectral_invariant, Window};
use floerlab::geometry::{build_link_model, build_morse_hamiltonian, Profile, SurfaceLinkModel};
use floerlab::index::{ech_index_shift, monotonicity_gap};
use floerlab::lattice::{class_diff, energy, Anchor, ClassDiff, Context, RelClass};
use floerlab::morse::{build_morse_complexes, MorseComplexes};
use floerlab::symprod::{
    discriminant_winding_oracle, index_compare, jacobian_deviation, BranchedCoverData, LocalModel,
};
use floerlab::Rational;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn diff_strategy(k: usize) -> impl Strategy<Value = ClassDiff> {
    let v = move || prop::collection::vec(-5i64..=5, k);
    (v(), v(), v(), v(), -5i64..=5).prop_map(|(c, c_phi, d, d_phi, m)| ClassDiff { c, c_phi, d, d_phi, m })
}

fn k_and_diffs() -> impl Strategy<Value = (usize, ClassDiff, ClassDiff)> {
    (2usize..=5).prop_flat_map(|k| (Just(k), diff_strategy(k), diff_strategy(k)))
}

fn model(k: usize) -> SurfaceLinkModel<Rational> {
    build_link_model(0, k as i64).unwrap()
}

fn base(k: usize) -> RelClass {
    RelClass::base(Context::Hf, Anchor::new("Z"), k)
}

fn complexes() -> &'static MorseComplexes<Rational> {
    static C: OnceLock<MorseComplexes<Rational>> = OnceLock::new();
    C.get_or_init(|| {
        let m = build_link_model::<Rational>(1, 2).unwrap();
        let h = build_morse_hamiltonian(&m, r(1, 50), &Profile::Standard).unwrap();
        build_morse_complexes(&m, &h, Window::periods(3)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn lattice_is_affine((k, d1, d2) in k_and_diffs()) {
        let a = base(k);
        let a1 = a.plus_diff(&d1).unwrap();
        let a12 = a1.plus_diff(&d2).unwrap();
        prop_assert_eq!(class_diff(&a1, &a).unwrap(), d1.reduced());
        prop_assert_eq!(a12, a.plus_diff(&d1.add(&d2)).unwrap());
        prop_assert_eq!(a1.plus_diff(&d1.scale(-1)).unwrap(), a);
    }

    #[test]
    fn reduction_is_idempotent((_k, d, _) in k_and_diffs()) {
        let once = d.reduced();
        prop_assert_eq!(once.reduced(), once.clone());
        prop_assert_eq!(once.energy::<Rational>(), d.energy::<Rational>());
    }

    #[test]
    fn energy_is_a_homomorphism((k, d1, d2) in k_and_diffs()) {
        let m = model(k);
        let a = base(k).plus_diff(&d1).unwrap();
        let b = a.plus_diff(&d2).unwrap();
        prop_assert_eq!(energy(&b, &m) - energy(&a, &m), d2.energy::<Rational>());
        prop_assert_eq!(d1.add(&d2).energy::<Rational>(), d1.energy::<Rational>() + d2.energy::<Rational>());
    }

    #[test]
    fn index_shift_is_additive((k, d1, d2) in k_and_diffs(), i0 in -20i64..20) {
        let step = ech_index_shift(ech_index_shift(i0, &d1, k), &d2, k);
        prop_assert_eq!(step, ech_index_shift(i0, &d1.add(&d2), k));
        prop_assert_eq!(ech_index_shift(i0, &d1, k), ech_index_shift(i0, &d1.reduced(), k));
    }

    #[test]
    fn index_tracks_energy((k, d1, d2) in k_and_diffs()) {
        let m = model(k);
        let a = base(k).plus_diff(&d1).unwrap();
        let b = base(k).plus_diff(&d2).unwrap();
        let gap = monotonicity_gap(&a, &b, &m).unwrap();
        prop_assert!(gap.consistent);
        prop_assert_eq!(Rational::from_integer(gap.index_gap), gap.energy_gap * Rational::from_integer(2 * (k as i64 + 1)));
    }

    #[test]
    fn branched_cover_indices_agree(
        d in 1i64..8,
        degrees in prop::collection::vec(2u32..6, 0..5),
        delta in -4i64..5,
        c1 in -6i64..7,
        maslov in -6i64..7,
    ) {
        let b: i64 = degrees.iter().map(|&m| m as i64 - 1).sum();
        let data = BranchedCoverData { d, chi_f: d - b, branch_degrees: degrees, double_points: delta, c1_u: c1, maslov_u: maslov };
        let cmp = index_compare(&data).unwrap();
        prop_assert!(cmp.equal);
        let bad = BranchedCoverData { chi_f: d - b + 1, ..data };
        prop_assert!(index_compare(&bad).is_err());
    }

    #[test]
    fn spectral_shift_law(p in -400i64..400, q in 1i64..60) {
        let c = complexes();
        let e = r(p, q);
        let before = spectral_invariant(&c.pfh, &c.cycle.chain).unwrap();
        let shifted = shift_reference(&c.pfh, &e);
        prop_assert_eq!(spectral_invariant(&shifted, &c.cycle.chain).unwrap(), before + e);
        prop_assert_eq!(shifted.homology_rank(), c.pfh.homology_rank());
    }

    #[test]
    fn basepoint_change_keeps_ranks_and_actions(bp in 0usize..9) {
        let c = complexes();
        let x = &Basepoint::all(2)[bp];
        let eps = r(1, 50);
        let old = eps;
        let new = x.integral(&eps) * r(1, 2);
        let moved = change_basepoint(&c.hf, &old, &new, &x.label()).unwrap();
        prop_assert_eq!(moved.homology_rank(), c.hf.homology_rank());
        let unit = vec![c.unit];
        prop_assert_eq!(spectral_invariant(&moved, &unit).unwrap(), spectral_invariant(&c.hf, &unit).unwrap());
    }

    #[test]
    fn winding_is_stable_under_refinement(m in 2u32..7, positive in any::<bool>(), log_r in -4i32..-1) {
        let radius = 10f64.powi(log_r);
        for local in [LocalModel::<f64>::branch(m), LocalModel::double_point(positive)] {
            let coarse = discriminant_winding_oracle(&local, 2048, radius).unwrap();
            let fine = discriminant_winding_oracle(&local, 4096, radius).unwrap();
            prop_assert!((coarse - fine).abs() < 1e-8);
            prop_assert!((fine - local.expected_winding() as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn jacobian_matches_vandermonde(z in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..6)) {
        let z: Vec<Complex64> = z.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        prop_assert!(jacobian_deviation(&z) < 1e-9);
    }
}

#[test]
fn spectral_is_t_equivariant() {
    let c = complexes();
    let x = &c.cycle.chain;
    let s0 = spectral_invariant(&c.pfh, x).unwrap();
    let period = c.pfh.period().action;
    let mut checked = 0;
    for t in [-1i64, 1] {
        let y = c.pfh.translate(x, t);
        if y.len() != x.len() {
            continue;
        }
        assert!(c.pfh.is_cycle(&y));
        let st = spectral_invariant(&c.pfh, &y).unwrap();
        assert_eq!(st, s0 - Rational::from_integer(t) * period);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn wider_window_keeps_spectral_value() {
    let m = build_link_model::<Rational>(0, 3).unwrap();
    let h = build_morse_hamiltonian(&m, r(1, 10), &Profile::Standard).unwrap();
    let narrow = build_morse_complexes(&m, &h, Window::periods(2)).unwrap();
    let wide = build_morse_complexes(&m, &h, Window::periods(3)).unwrap();
    assert_eq!(
        spectral_invariant(&narrow.pfh, &narrow.cycle.chain).unwrap(),
        spectral_invariant(&wide.pfh, &wide.cycle.chain).unwrap()
    );
    assert_eq!(
        spectral_invariant(&narrow.hf, &[narrow.unit]).unwrap(),
        spectral_invariant(&wide.hf, &[wide.unit]).unwrap()
    );
}
