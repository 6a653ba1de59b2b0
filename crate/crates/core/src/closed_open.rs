//! The closed–open map from PFH to HF in the Morse model, the HF unit, the
//! class `σ = [𝔠]`, the cobordism identity and the spectral comparison.
//!
//! Targets of the map are derived, not prescribed. For a source `(alpha, Z)`
//! every triple `(y, m, c)` is scored with
//! `I = n(y) + 2m(k+1) + 2c` and `E = H(alpha) - H(y) + m + c/(k+1)`;
//! a triple survives when `I = 0` and `E = 0`, and it is realised by
//! horizontal sections only when `alpha` is the orbit set `gamma_y` through
//! the chord endpoints. Survivors with equal energy give the same target, so
//! each source has at most one.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    chain_add, chain_from_mod2, spectral_invariant, change_basepoint, shift_reference, Chain,
    ComplexError, FilteredComplex, FloerGenerator, Payload,
};
use crate::geometry::{MorseHamiltonian, SurfaceLinkModel};
use crate::index::co_index_energy;
use crate::lattice::{energy, Anchor, Context, RelClass};
use crate::morse::{enumerate_hf_generators, is_top, orbit_set_value, MorseComplexes, MorseOrbitSet, ReebChordTuple};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedOpenError {
    #[error("chain map fails: coefficient of {to} in (Φ∂ + dΦ)({from}) is odd")]
    ChainMap { from: String, to: String },
    #[error("image of {0} lies outside the HF window")]
    OutsideWindow(String),
    #[error("transported capping of {0} has non-integral period")]
    NonIntegralCapping(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// The `(n(y), m, c)` data of a closed–open class with its index and energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoWitness<S> {
    pub chord: String,
    pub n_y: i64,
    pub m: i64,
    pub c: i64,
    pub index: i64,
    pub energy: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoEntry<S> {
    /// Materialised PFH index.
    pub source: usize,
    /// Materialised HF index.
    pub target: usize,
    pub witness: CoWitness<S>,
}

#[derive(Debug, Clone)]
pub struct ClosedOpenMap<S> {
    pub pfh: FilteredComplex<S>,
    pub hf: FilteredComplex<S>,
    /// The reference class `𝒵_0`.
    pub reference: RelClass,
    pub entries: Vec<CoEntry<S>>,
    /// Every `(y, m, c)` triple with `I = 0` and `E = 0` found for the top
    /// generators, realised or not.
    pub top_survivors: BTreeMap<String, Vec<CoWitness<S>>>,
}

/// Range of `m` scanned by the enumeration.
const M_RANGE: i64 = 2;

/// Scores every `(y, m, c)` for a source orbit set and returns the
/// survivors with `I = 0` and `E = 0`.
pub fn enumerate_candidates<S: Scalar>(
    model: &SurfaceLinkModel<S>,
    h: &MorseHamiltonian<S>,
    alpha: &MorseOrbitSet,
    chords: &[ReebChordTuple],
) -> Vec<(ReebChordTuple, CoWitness<S>)> {
    let k1 = model.k as i64 + 1;
    let h_top = orbit_set_value(alpha, h);
    let c_bound = model.d as i64 + 2 * M_RANGE * k1;
    let mut out = Vec::new();
    for y in chords {
        let n_y = y.minus_count() as i64;
        let h_y = y.hamiltonian(h);
        for m in -M_RANGE..=M_RANGE {
            for c in -c_bound..=c_bound {
                let (index, e) = co_index_energy(n_y, m, c, model.k, &h_top, &h_y);
                if index != 0 || e != S::zero() {
                    continue;
                }
                out.push((
                    y.clone(),
                    CoWitness {
                        chord: y.to_string(),
                        n_y,
                        m,
                        c,
                        index,
                        energy: e,
                    },
                ));
            }
        }
    }
    out
}

/// Derives the map and verifies that it is a chain map.
///
/// `reference` is the CO class `𝒵_0`; the target capping `A` of a source
/// `(alpha, Z)` solves `Z # 𝒵_0 # A = 𝒵_hor` with `E(𝒵_hor) = 0`.
pub fn build_closed_open<S: Scalar>(
    model: &SurfaceLinkModel<S>,
    h: &MorseHamiltonian<S>,
    complexes: &MorseComplexes<S>,
    reference: &RelClass,
) -> Result<ClosedOpenMap<S>, ClosedOpenError> {
    let (pfh, hf) = (&complexes.pfh, &complexes.hf);
    let k1 = model.k as i64 + 1;
    let chords = enumerate_hf_generators(model);
    let hf_base: BTreeMap<&ReebChordTuple, usize> = hf
        .base_generators()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match &g.payload {
            Payload::Chord(y) => Some((y, i)),
            _ => None,
        })
        .collect();
    let ref_energy = energy(reference, model);

    let mut base_targets: Vec<Option<(usize, CoWitness<S>)>> = Vec::with_capacity(pfh.base_len());
    let mut top_survivors = BTreeMap::new();
    for g in pfh.base_generators() {
        let Payload::OrbitSet(alpha) = &g.payload else {
            base_targets.push(None);
            continue;
        };
        let survivors = if is_top(alpha, h) {
            let s = enumerate_candidates(model, h, alpha, &chords);
            top_survivors.insert(g.label.clone(), s.iter().map(|(_, w)| w.clone()).collect());
            s
        } else {
            // only gamma_y can carry horizontal sections; score that chord
            match chord_of(alpha, h, model.d) {
                Some(y) => enumerate_candidates(model, h, alpha, &[y]),
                None => Vec::new(),
            }
        };
        let realised: Vec<_> = survivors.into_iter().filter(|(y, _)| &y.orbit_set(h) == alpha).collect();
        // all survivors share E = 0, hence one target
        let pick = realised
            .into_iter()
            .min_by_key(|(_, w)| (w.m.abs(), w.c.abs()))
            .map(|(y, w)| (hf_base[&y], w));
        base_targets.push(pick);
    }

    let mut entries = Vec::new();
    for i in 0..pfh.len() {
        let (b, n) = pfh.split(i);
        let Some((target_base, witness)) = &base_targets[b] else {
            continue;
        };
        // E(A) = -E(Z) - E(𝒵_0), with E(Z) = -n for (alpha, T^n)
        let a_energy = S::from_int(n) - ref_energy.clone();
        let periods = a_energy * S::from_int(k1);
        let t = periods.floor_int();
        if S::from_int(t) != periods {
            return Err(ClosedOpenError::NonIntegralCapping(pfh.label(i)));
        }
        let target = hf
            .index_of(*target_base, t)
            .ok_or_else(|| ClosedOpenError::OutsideWindow(pfh.label(i)))?;
        entries.push(CoEntry {
            source: i,
            target,
            witness: witness.clone(),
        });
    }
    let map = ClosedOpenMap {
        pfh: pfh.clone(),
        hf: hf.clone(),
        reference: reference.clone(),
        entries,
        top_survivors,
    };
    map.verify_chain_map()?;
    Ok(map)
}

/// The chord tuple whose orbit set is `alpha`, if any.
fn chord_of<S: Scalar>(alpha: &MorseOrbitSet, h: &MorseHamiltonian<S>, d: usize) -> Option<ReebChordTuple> {
    let mut signs = vec![None; d];
    for &(p, m) in &alpha.points {
        let pt = h.point(p);
        let circle = pt.on_circle?;
        if m != 1 || signs[circle].is_some() {
            return None;
        }
        signs[circle] = Some(if pt.morse_index == 2 {
            crate::morse::ChordSign::Plus
        } else {
            crate::morse::ChordSign::Minus
        });
    }
    Some(ReebChordTuple {
        signs: signs.into_iter().collect::<Option<Vec<_>>>()?,
    })
}

impl<S: Scalar> ClosedOpenMap<S> {
    pub fn image_of(&self, i: usize) -> Chain {
        self.entries
            .iter()
            .filter(|e| e.source == i)
            .map(|e| e.target)
            .collect()
    }

    pub fn apply(&self, chain: &[usize]) -> Chain {
        let by_source: BTreeMap<usize, usize> = self.entries.iter().map(|e| (e.source, e.target)).collect();
        chain_from_mod2(chain.iter().filter_map(|i| by_source.get(i).copied()).collect())
    }

    /// Checks `Φ∂ + dΦ = 0` generator by generator.
    pub fn verify_chain_map(&self) -> Result<(), ClosedOpenError> {
        let by_source: BTreeMap<usize, usize> = self.entries.iter().map(|e| (e.source, e.target)).collect();
        for i in 0..self.pfh.len() {
            let d_first = self.apply(&self.pfh.boundary_of(i));
            let phi_first = by_source.get(&i).map(|&t| self.hf.boundary_of(t)).unwrap_or_default();
            let sum = chain_add(&d_first, &phi_first);
            if let Some(&t) = sum.first() {
                return Err(ClosedOpenError::ChainMap {
                    from: self.pfh.label(i),
                    to: self.hf.label(t),
                });
            }
        }
        Ok(())
    }
}

/// The trivial CO reference class `𝒵_hor`.
pub fn horizontal_reference(k: usize) -> RelClass {
    RelClass::base(Context::Co, Anchor::new("Z_hor"), k)
}

/// `(y_+, A_e)`: its index in the HF complex and the generator.
pub fn unit_generator<S: Scalar>(complexes: &MorseComplexes<S>) -> (usize, FloerGenerator<S>) {
    (complexes.unit, complexes.hf.generator(complexes.unit))
}

/// `σ = [𝔠 + K∘∂'𝔠]`; the correction is zero since `∂'𝔠 = ∂𝔠 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaClass {
    pub cycle: Chain,
    pub correction: Chain,
}

impl SigmaClass {
    pub fn representative(&self) -> Chain {
        chain_add(&self.cycle, &self.correction)
    }
}

pub fn sigma_class<S: Scalar>(complexes: &MorseComplexes<S>) -> SigmaClass {
    SigmaClass {
        cycle: complexes.cycle.chain.clone(),
        correction: Vec::new(),
    }
}

/// Whether `Φ_*σ` is the unit class.
pub fn maps_sigma_to_unit<S: Scalar>(map: &ClosedOpenMap<S>, sigma: &SigmaClass, unit: usize) -> bool {
    let image = map.apply(&sigma.representative());
    map.hf.is_cycle(&image) && map.hf.homologous(&image, &[unit])
}

/// The cobordism map on the top generators, identity plus a homotopy slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CobordismMap {
    pub matrix: BTreeMap<usize, Chain>,
    /// Images under `K∘∂' + ∂'∘K`; empty in the Morse model.
    pub homotopy: BTreeMap<usize, Chain>,
}

impl CobordismMap {
    pub fn apply(&self, chain: &[usize]) -> Chain {
        let mut out = Vec::new();
        for i in chain {
            if let Some(img) = self.matrix.get(i) {
                out.extend_from_slice(img);
            }
            if let Some(img) = self.homotopy.get(i) {
                out.extend_from_slice(img);
            }
        }
        chain_from_mod2(out)
    }

    pub fn compose(&self, other: &CobordismMap) -> CobordismMap {
        let matrix = other.matrix.iter().map(|(&i, img)| (i, self.apply(img))).collect();
        CobordismMap {
            matrix,
            homotopy: BTreeMap::new(),
        }
    }
}

/// `(alpha_I, Z_I) -> (alpha_I, Z_I)` for every top generator of `complex`.
pub fn cobordism_identity<S: Scalar>(h: &MorseHamiltonian<S>, complex: &FilteredComplex<S>) -> CobordismMap {
    let matrix = (0..complex.len())
        .filter(|&i| matches!(&complex.base_generators()[complex.split(i).0].payload, Payload::OrbitSet(s) if is_top(s, h)))
        .map(|i| (i, vec![i]))
        .collect();
    CobordismMap {
        matrix,
        homotopy: BTreeMap::new(),
    }
}

/// `E(Z) = H(alpha_I) - H(alpha_-) + M` from Morse values.
pub fn cobordism_energy_formula<S: Scalar>(
    h: &MorseHamiltonian<S>,
    alpha_top: &MorseOrbitSet,
    alpha_bot: &MorseOrbitSet,
    m: i64,
) -> S {
    orbit_set_value(alpha_top, h) - orbit_set_value(alpha_bot, h) + S::from_int(m)
}

/// The same energy from generator actions and the lattice: the action
/// difference of the capped generators plus the area of `M [Σ]`.
pub fn cobordism_energy_lattice<S: Scalar>(
    model: &SurfaceLinkModel<S>,
    complex: &FilteredComplex<S>,
    top: usize,
    bot: usize,
    m: i64,
) -> S {
    let class = RelClass::base(Context::Pfh, Anchor::new("M"), model.k).plus_sigma(m);
    complex.action(top) - complex.action(bot) + energy(&class, model)
}

/// Basepoint choice on one circle: the maximum, the minimum, or the point
/// at `f = 3/4` on the descending arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasepointChoice {
    #[serde(rename = "+")]
    Max,
    #[serde(rename = "-")]
    Min,
    #[serde(rename = "m")]
    Mid,
}

impl BasepointChoice {
    pub fn f_value<S: Scalar>(&self) -> S {
        match self {
            BasepointChoice::Max => S::one(),
            BasepointChoice::Min => S::from_ratio(1, 2),
            BasepointChoice::Mid => S::from_ratio(3, 4),
        }
    }

    pub fn symbol(&self) -> char {
        match self {
            BasepointChoice::Max => '+',
            BasepointChoice::Min => '-',
            BasepointChoice::Mid => 'm',
        }
    }

    pub fn parse(c: char) -> Option<Self> {
        match c {
            '+' => Some(BasepointChoice::Max),
            '-' => Some(BasepointChoice::Min),
            'm' => Some(BasepointChoice::Mid),
            _ => None,
        }
    }
}

/// A point `x = (x_1, .., x_d)` with `x_i` on circle `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Basepoint(pub Vec<BasepointChoice>);

impl Basepoint {
    pub fn y_plus(d: usize) -> Self {
        Basepoint(vec![BasepointChoice::Max; d])
    }

    /// All `3^d` basepoints built from the three choices.
    pub fn all(d: usize) -> Vec<Basepoint> {
        let choices = [BasepointChoice::Max, BasepointChoice::Min, BasepointChoice::Mid];
        let mut out = vec![Vec::new()];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|p: Vec<BasepointChoice>| {
                    choices.iter().map(move |&c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(Basepoint).collect()
    }

    pub fn parse(s: &str) -> Option<Self> {
        s.chars().map(BasepointChoice::parse).collect::<Option<Vec<_>>>().map(Basepoint)
    }

    pub fn label(&self) -> String {
        self.0.iter().map(BasepointChoice::symbol).collect()
    }

    /// `sum_i H(x_i)`.
    pub fn integral<S: Scalar>(&self, epsilon: &S) -> S {
        self.0
            .iter()
            .fold(S::zero(), |acc, c| acc + epsilon.clone() * c.f_value::<S>())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralComparison<S> {
    pub basepoint: String,
    pub c_hf: S,
    pub c_pfh: S,
    pub integral: S,
    pub lhs: S,
    pub rhs: S,
    pub holds: bool,
}

/// `c_hf(unit, x) <= c_pfh(σ^x) + sum H(x_i)`.
///
/// The HF complex is re-based at `x` (actions unchanged); the PFH reference
/// for `x` differs from the one for `y_+` by a class of energy
/// `H(y_+) - H(x)`, and `extra_shift` is added on top.
pub fn spectral_compare<S: Scalar>(
    h: &MorseHamiltonian<S>,
    complexes: &MorseComplexes<S>,
    basepoint: &Basepoint,
    extra_shift: &S,
) -> Result<SpectralComparison<S>, ClosedOpenError> {
    let d = basepoint.0.len();
    let h_plus = Basepoint::y_plus(d).integral(&h.epsilon);
    let integral = basepoint.integral(&h.epsilon);
    let hf = change_basepoint(&complexes.hf, &h_plus, &integral, &basepoint.label())?;
    let c_hf = spectral_invariant(&hf, &[complexes.unit])?;
    let pfh = shift_reference(&complexes.pfh, &(h_plus - integral.clone() + extra_shift.clone()));
    let c_pfh = spectral_invariant(&pfh, &complexes.cycle.chain)?;
    let rhs = c_pfh.clone() + integral.clone();
    Ok(SpectralComparison {
        basepoint: basepoint.label(),
        holds: c_hf <= rhs,
        lhs: c_hf.clone(),
        c_hf,
        c_pfh,
        integral,
        rhs,
    })
}
