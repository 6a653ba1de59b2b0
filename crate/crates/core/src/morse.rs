//! Generators and differentials of the PFH and HF complexes of `H = eps f`.
//!
//! For small `eps` the PFH generators of degree `d` are the multisets of `d`
//! constant orbits at critical points of `f`, with every index-one point
//! (a hyperbolic orbit) used at most once. The differential replaces one
//! factor by a target of a Morse flow line, counted mod 2; a replacement
//! that would repeat a hyperbolic orbit contributes nothing.
//!
//! The HF generators are the `2^d` tuples choosing the maximum or the minimum
//! of `f` on every circle. The two gradient arcs of a circle give two strips
//! between its chords, so the HF differential vanishes.
//!
//! Cappings: the PFH generator `(alpha, Z_alpha)` has action
//! `H(alpha) - H(alpha_+)`, which realises the relation between the cappings
//! of maximal orbit sets with differences given by Morse values; the HF
//! generator `(y, A_y)` has action `H(y)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{
    build_complex, Chain, ComplexError, ComplexKind, DiffEntry, FilteredComplex, FloerGenerator,
    Payload, Period, Window,
};
use crate::geometry::{CriticalRole, MorseHamiltonian, SurfaceLinkModel};
use crate::index::{constant_orbit, OrbitData};
use crate::lattice::{Anchor, ClassDiff, Context, RelClass};
use crate::scalar::Scalar;

/// Multiset of critical points, sorted by id, multiplicities positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MorseOrbitSet {
    pub points: Vec<(usize, u32)>,
}

impl MorseOrbitSet {
    pub fn from_counts(counts: &[u32]) -> Self {
        MorseOrbitSet {
            points: counts
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(i, &m)| (i, m))
                .collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.points.iter().map(|&(_, m)| m).sum()
    }

    pub fn multiplicity(&self, id: usize) -> u32 {
        self.points
            .binary_search_by_key(&id, |&(p, _)| p)
            .map(|i| self.points[i].1)
            .unwrap_or(0)
    }

    /// Removes one copy of `from` and adds one copy of `to`.
    pub fn replace(&self, from: usize, to: usize) -> MorseOrbitSet {
        let mut counts: Vec<(usize, u32)> = self.points.clone();
        if let Ok(i) = counts.binary_search_by_key(&from, |&(p, _)| p) {
            counts[i].1 -= 1;
        }
        match counts.binary_search_by_key(&to, |&(p, _)| p) {
            Ok(i) => counts[i].1 += 1,
            Err(i) => counts.insert(i, (to, 1)),
        }
        counts.retain(|&(_, m)| m > 0);
        MorseOrbitSet { points: counts }
    }

    pub fn label<S>(&self, h: &MorseHamiltonian<S>) -> String {
        self.points
            .iter()
            .map(|&(p, m)| match m {
                1 => h.critical_points[p].label.clone(),
                _ => format!("{}^{m}", h.critical_points[p].label),
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChordSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// One chord endpoint per circle: `y_i^+` (maximum) or `y_i^-` (minimum).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReebChordTuple {
    pub signs: Vec<ChordSign>,
}

impl ReebChordTuple {
    pub fn plus(d: usize) -> Self {
        ReebChordTuple {
            signs: vec![ChordSign::Plus; d],
        }
    }

    /// Number of minima used, `n(y)`.
    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == ChordSign::Minus).count()
    }

    pub fn is_plus(&self) -> bool {
        self.minus_count() == 0
    }

    /// Critical point ids of the chord endpoints.
    pub fn points<S: Scalar>(&self, h: &MorseHamiltonian<S>) -> Vec<usize> {
        self.signs
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                ChordSign::Plus => h.circle_max(i).id,
                ChordSign::Minus => h.circle_min(i).id,
            })
            .collect()
    }

    /// `sum_i H(y_i)`.
    pub fn hamiltonian<S: Scalar>(&self, h: &MorseHamiltonian<S>) -> S {
        self.points(h)
            .into_iter()
            .fold(S::zero(), |acc, p| acc + h.point(p).value.clone())
    }

    /// The orbit set of constant orbits through the chord endpoints.
    pub fn orbit_set<S: Scalar>(&self, h: &MorseHamiltonian<S>) -> MorseOrbitSet {
        let mut counts = vec![0u32; h.critical_points.len()];
        for p in self.points(h) {
            counts[p] += 1;
        }
        MorseOrbitSet::from_counts(&counts)
    }
}

impl fmt::Display for ReebChordTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("y[")?;
        for s in &self.signs {
            f.write_str(match s {
                ChordSign::Plus => "+",
                ChordSign::Minus => "-",
            })?;
        }
        f.write_str("]")
    }
}

/// All degree-`d` orbit sets, hyperbolic factors simple; lexicographic in
/// the multiplicity vector read from the first critical point.
pub fn enumerate_pfh_generators<S: Scalar>(
    _model: &SurfaceLinkModel<S>,
    h: &MorseHamiltonian<S>,
    d: usize,
) -> Vec<MorseOrbitSet> {
    fn rec(caps: &[u32], i: usize, left: u32, counts: &mut Vec<u32>, out: &mut Vec<MorseOrbitSet>) {
        if i == caps.len() {
            if left == 0 {
                out.push(MorseOrbitSet::from_counts(counts));
            }
            return;
        }
        for m in (0..=left.min(caps[i])).rev() {
            counts[i] = m;
            rec(caps, i + 1, left - m, counts, out);
        }
        counts[i] = 0;
    }
    let caps: Vec<u32> = h
        .critical_points
        .iter()
        .map(|p| if p.is_saddle() { 1 } else { d as u32 })
        .collect();
    let mut out = Vec::new();
    rec(&caps, 0, d as u32, &mut vec![0; caps.len()], &mut out);
    out
}

/// Whether the orbit set repeats a hyperbolic orbit.
fn repeats_saddle<S>(set: &MorseOrbitSet, h: &MorseHamiltonian<S>) -> bool {
    set.points.iter().any(|&(p, m)| m > 1 && h.critical_points[p].morse_index == 1)
}

/// Differential entries between `generators`, one per flow line mod 2.
pub fn pfh_differential<S: Scalar>(h: &MorseHamiltonian<S>, generators: &[MorseOrbitSet]) -> Vec<DiffEntry> {
    let index: HashMap<&MorseOrbitSet, usize> = generators.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut entries = Vec::new();
    for (i, alpha) in generators.iter().enumerate() {
        for &(p, _) in &alpha.points {
            for q in h.morse_boundary(p) {
                let beta = alpha.replace(p, q);
                if repeats_saddle(&beta, h) {
                    continue;
                }
                if let Some(&j) = index.get(&beta) {
                    entries.push(DiffEntry::new(i, j));
                }
            }
        }
    }
    entries
}

/// `H(alpha) = sum m_i H(p_i)`.
pub fn orbit_set_value<S: Scalar>(set: &MorseOrbitSet, h: &MorseHamiltonian<S>) -> S {
    set.points
        .iter()
        .fold(S::zero(), |acc, &(p, m)| acc + S::from_int(m as i64) * h.point(p).value.clone())
}

/// Orbit data of each factor, for the index formulas.
pub fn orbit_data<S: Scalar>(set: &MorseOrbitSet, h: &MorseHamiltonian<S>) -> Vec<OrbitData<S>> {
    set.points
        .iter()
        .map(|&(p, m)| constant_orbit(h.point(p).morse_index, &h.epsilon, m))
        .collect()
}

/// Orbit sets consisting of circle maxima only, `alpha_I`.
pub fn is_top<S>(set: &MorseOrbitSet, h: &MorseHamiltonian<S>) -> bool {
    set.points.iter().all(|&(p, _)| h.critical_points[p].role == CriticalRole::CircleMax)
}

/// `alpha_+`: every circle maximum once.
pub fn alpha_plus<S: Scalar>(h: &MorseHamiltonian<S>) -> MorseOrbitSet {
    ReebChordTuple::plus(h.circle_count()).orbit_set(h)
}

pub fn build_pfh_complex<S: Scalar>(
    model: &SurfaceLinkModel<S>,
    h: &MorseHamiltonian<S>,
    window: Window,
) -> Result<FilteredComplex<S>, ComplexError> {
    let d = model.d;
    let sets = enumerate_pfh_generators(model, h, d);
    let entries = pfh_differential(h, &sets);
    let top = orbit_set_value(&alpha_plus(h), h);
    let generators = sets
        .into_iter()
        .map(|set| {
            let label = set.label(h);
            FloerGenerator {
                capping: RelClass::base(Context::Pfh, Anchor::new(format!("Z[{label}]")), model.k),
                action: orbit_set_value(&set, h) - top.clone(),
                grade: Some(set.points.iter().map(|&(p, m)| m as i64 * h.point(p).morse_index as i64).sum()),
                label,
                payload: Payload::OrbitSet(set),
            }
        })
        .collect();
    let mut capping = ClassDiff::zero(model.k);
    capping.m = -1;
    let period = Period {
        action: S::one(),
        capping,
        grade: 2 * (model.k as i64 + 1),
    };
    build_complex(ComplexKind::Pfh, generators, entries, period, window)
}

/// All `2^d` chord tuples; `y_+` first.
pub fn enumerate_hf_generators<S: Scalar>(model: &SurfaceLinkModel<S>) -> Vec<ReebChordTuple> {
    let d = model.d;
    (0..1usize << d)
        .map(|mask| ReebChordTuple {
            signs: (0..d)
                .map(|i| if mask >> i & 1 == 1 { ChordSign::Minus } else { ChordSign::Plus })
                .collect(),
        })
        .collect()
}

/// Strips from `y` to the tuple with circle `i` switched to its minimum,
/// one per gradient arc of the circle, mod 2.
pub fn hf_differential<S: Scalar>(
    model: &SurfaceLinkModel<S>,
    h: &MorseHamiltonian<S>,
    chords: &[ReebChordTuple],
) -> Vec<DiffEntry> {
    let index: HashMap<&ReebChordTuple, usize> = chords.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut entries = Vec::new();
    for (i, y) in chords.iter().enumerate() {
        for c in 0..model.d {
            if y.signs[c] != ChordSign::Plus {
                continue;
            }
            let strips = h.flow_count(h.circle_max(c).id, h.circle_min(c).id);
            if strips % 2 == 1 {
                let mut z = y.clone();
                z.signs[c] = ChordSign::Minus;
                entries.push(DiffEntry::new(i, index[&z]));
            }
        }
    }
    entries
}

pub fn build_hf_complex<S: Scalar>(
    model: &SurfaceLinkModel<S>,
    h: &MorseHamiltonian<S>,
    window: Window,
) -> Result<FilteredComplex<S>, ComplexError> {
    let chords = enumerate_hf_generators(model);
    let entries = hf_differential(model, h, &chords);
    let generators = chords
        .into_iter()
        .map(|y| {
            let label = y.to_string();
            FloerGenerator {
                capping: RelClass::base(Context::Hf, Anchor::new(format!("A[{label}]")), model.k),
                action: y.hamiltonian(h),
                grade: Some((model.d - y.minus_count()) as i64),
                label,
                payload: Payload::Chord(y),
            }
        })
        .collect();
    let mut capping = ClassDiff::zero(model.k);
    capping.c[0] = 1;
    let period = Period {
        action: S::from_ratio(1, model.k as i64 + 1),
        capping,
        grade: 2,
    };
    build_complex(ComplexKind::Hf, generators, entries, period, window)
}

/// The chain `𝔠 = sum_I (alpha_I, Z_I)` at `T^0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleC {
    pub chain: Chain,
    pub labels: Vec<String>,
}

/// Builds `𝔠` in `complex` (shifted by `t`) and checks that it is a cycle.
pub fn build_cycle_c<S: Scalar>(
    h: &MorseHamiltonian<S>,
    complex: &FilteredComplex<S>,
    t: i64,
) -> Result<CycleC, ComplexError> {
    let mut chain: Chain = complex
        .base_generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| matches!(&g.payload, Payload::OrbitSet(s) if is_top(s, h)))
        .filter_map(|(b, _)| complex.index_of(b, t))
        .collect();
    chain.sort_unstable();
    if !complex.is_cycle(&chain) {
        return Err(ComplexError::NotACycle);
    }
    let labels = chain.iter().map(|&i| complex.label(i)).collect();
    Ok(CycleC { chain, labels })
}

/// Index of the base generator carrying `payload`.
pub fn find_payload<S: Scalar>(complex: &FilteredComplex<S>, payload: &Payload) -> Option<usize> {
    complex.base_generators().iter().position(|g| &g.payload == payload)
}

/// PFH and HF complexes of one Morse model, with `𝔠` and the unit.
///
/// The HF window is the PFH window scaled by `k + 1`, so that `T^n` on the
/// PFH side has an image `T^(n(k+1))` on the HF side.
#[derive(Debug, Clone)]
pub struct MorseComplexes<S> {
    pub pfh: FilteredComplex<S>,
    pub hf: FilteredComplex<S>,
    pub cycle: CycleC,
    /// Materialised index of `(y_+, A_e)`.
    pub unit: usize,
    /// Base index of `alpha_+` in the PFH complex.
    pub alpha_plus: usize,
}

pub fn build_morse_complexes<S: Scalar>(
    model: &SurfaceLinkModel<S>,
    h: &MorseHamiltonian<S>,
    window: Window,
) -> Result<MorseComplexes<S>, ComplexError> {
    let pfh = build_pfh_complex(model, h, window)?;
    let hf = build_hf_complex(model, h, window.scaled(model.k as i64 + 1))?;
    let cycle = build_cycle_c(h, &pfh, 0.clamp(window.lo, window.hi))?;
    let y_plus = find_payload(&hf, &Payload::Chord(ReebChordTuple::plus(model.d))).expect("y_+ is enumerated");
    let unit = hf.index_of(y_plus, 0.clamp(hf.window().lo, hf.window().hi)).expect("window is nonempty");
    let alpha_plus = find_payload(&pfh, &Payload::OrbitSet(alpha_plus(h))).expect("alpha_+ is enumerated");
    Ok(MorseComplexes {
        pfh,
        hf,
        cycle,
        unit,
        alpha_plus,
    })
}
