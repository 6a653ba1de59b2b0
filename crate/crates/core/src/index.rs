//! Index formulas: Conley–Zehnder indices of orbit iterates, ECH index
//! shifts along the class lattice, Fredholm indices, the closed forms of the
//! Morse model and the index/energy monotonicity relation.
//!
//! Conley–Zehnder convention, in the trivialisation given by the link's
//! non-vanishing vector field: an elliptic orbit of rotation `theta` has
//! `CZ(gamma^p) = 2 floor(p theta) + 1`, a positive hyperbolic orbit has
//! `CZ = 0` and a negative hyperbolic orbit `CZ = p`. Only differences of
//! such quantities enter the formulas below.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::SurfaceLinkModel;
use crate::lattice::{class_diff, energy, ClassDiff, LatticeError, RelClass};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("orbit degree {q} exceeds d={d}")]
    DegreeTooLarge { q: i64, d: i64 },
    #[error("not a constant Morse orbit: {0}")]
    NotMorseOrbit(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Elliptic,
    PositiveHyperbolic,
    NegativeHyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitData<S> {
    pub kind: OrbitKind,
    /// Rotation number in `[0, 1)`; zero for hyperbolic orbits.
    pub rotation: S,
    pub degree: i64,
    pub multiplicity: u32,
}

impl<S: Scalar> OrbitData<S> {
    /// Elliptic orbit with rotation reduced into `[0, 1)`.
    pub fn elliptic(rotation: S, degree: i64, multiplicity: u32) -> Self {
        let floor = S::from_int(rotation.floor_int());
        OrbitData {
            kind: OrbitKind::Elliptic,
            rotation: rotation - floor,
            degree,
            multiplicity,
        }
    }

    pub fn hyperbolic(positive: bool, degree: i64, multiplicity: u32) -> Self {
        OrbitData {
            kind: if positive {
                OrbitKind::PositiveHyperbolic
            } else {
                OrbitKind::NegativeHyperbolic
            },
            rotation: S::zero(),
            degree,
            multiplicity,
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.kind != OrbitKind::Elliptic
    }

    /// Hyperbolic orbits may only appear with multiplicity one in a generator.
    pub fn admissible_in_generator(&self) -> bool {
        !self.is_hyperbolic() || self.multiplicity == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticClass {
    DPositive,
    DNegative,
    Neither,
}

/// `d`-positive iff `theta in (0, q/d)` and `d`-negative iff
/// `theta in (1 - q/d, 1)`, with `theta` taken mod 1.
pub fn classify_elliptic<S: Scalar>(theta: &S, q: i64, d: i64) -> Result<EllipticClass, IndexError> {
    if q > d {
        return Err(IndexError::DegreeTooLarge { q, d });
    }
    let t = theta.clone() - S::from_int(theta.floor_int());
    let bound = S::from_ratio(q, d);
    Ok(if t > S::zero() && t < bound {
        EllipticClass::DPositive
    } else if t > S::one() - bound {
        EllipticClass::DNegative
    } else {
        EllipticClass::Neither
    })
}

/// Conley–Zehnder index of the `p`-th iterate.
pub fn cz_total<S: Scalar>(orbit: &OrbitData<S>, p: i64) -> i64 {
    match orbit.kind {
        OrbitKind::Elliptic => 2 * (S::from_int(p) * orbit.rotation.clone()).floor_int() + 1,
        OrbitKind::PositiveHyperbolic => 0,
        OrbitKind::NegativeHyperbolic => p,
    }
}

/// Sum of `CZ(gamma^p)` for `p = 1..=m`, the contribution of an orbit with
/// multiplicity `m` to the ECH index.
pub fn cz_staircase<S: Scalar>(orbit: &OrbitData<S>) -> i64 {
    (1..=orbit.multiplicity as i64).map(|p| cz_total(orbit, p)).sum()
}

/// `I(A') = I(A) + sum (2c_i + 2c'_i) + 2k sum (d_i + d'_i) + 2m(k+1)`.
pub fn ech_index_shift(i_base: i64, diff: &ClassDiff, k: usize) -> i64 {
    let k = k as i64;
    let disks: i64 = diff.c.iter().chain(&diff.c_phi).sum();
    let comps: i64 = diff.d.iter().chain(&diff.d_phi).sum();
    i_base + 2 * disks + 2 * k * comps + 2 * diff.m * (k + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monotonicity<S> {
    /// `I(A) - I(A')`.
    pub index_gap: i64,
    /// `E(A) - E(A')`.
    pub energy_gap: S,
    pub consistent: bool,
}

/// Compares the index gap with `2(k+1)` times the energy gap.
pub fn monotonicity_gap<S: Scalar>(
    a: &RelClass,
    a_prime: &RelClass,
    model: &SurfaceLinkModel<S>,
) -> Result<Monotonicity<S>, IndexError> {
    let diff = class_diff(a_prime, a)?;
    let index_gap = -ech_index_shift(0, &diff, model.k);
    let energy_gap = energy(a, model) - energy(a_prime, model);
    let consistent = S::from_int(index_gap) == S::from_int(2 * (model.k as i64 + 1)) * energy_gap.clone();
    Ok(Monotonicity {
        index_gap,
        energy_gap,
        consistent,
    })
}

/// Orbit data of a constant orbit at a critical point of `H = eps f`.
///
/// Maxima rotate by `eps` and minima by `1 - eps`; index-one points are
/// positive hyperbolic.
pub fn constant_orbit<S: Scalar>(morse_index: u8, epsilon: &S, multiplicity: u32) -> OrbitData<S> {
    match morse_index {
        2 => OrbitData::elliptic(epsilon.clone(), 1, multiplicity),
        0 => OrbitData::elliptic(S::one() - epsilon.clone(), 1, multiplicity),
        _ => OrbitData::hyperbolic(true, 1, multiplicity),
    }
}

/// `I(alpha_top, alpha_bot, Z) = 2d - h(alpha_bot) - 2 e_+(alpha_bot) + 2M(k+1)`
/// for constant orbits; `alpha_top` must consist of `d`-positive orbits.
pub fn pfh_morse_index<S: Scalar>(
    alpha_top: &[OrbitData<S>],
    alpha_bot: &[OrbitData<S>],
    m: i64,
    k: usize,
    d: usize,
) -> Result<i64, IndexError> {
    let di = d as i64;
    let mut counts = [0i64; 2];
    for (slot, set) in [alpha_top, alpha_bot].into_iter().enumerate() {
        let mut total = 0i64;
        for o in set {
            if o.degree != 1 {
                return Err(IndexError::NotMorseOrbit(format!("degree {}", o.degree)));
            }
            if !o.admissible_in_generator() {
                return Err(IndexError::NotMorseOrbit("repeated hyperbolic orbit".into()));
            }
            total += o.multiplicity as i64;
            match o.kind {
                OrbitKind::Elliptic => match classify_elliptic(&o.rotation, 1, di)? {
                    EllipticClass::DPositive if slot == 1 => counts[0] += o.multiplicity as i64,
                    EllipticClass::DPositive | EllipticClass::DNegative => {}
                    EllipticClass::Neither => {
                        return Err(IndexError::NotMorseOrbit(format!("rotation {}", o.rotation)))
                    }
                },
                OrbitKind::PositiveHyperbolic if slot == 1 => counts[1] += 1,
                OrbitKind::PositiveHyperbolic => {
                    return Err(IndexError::NotMorseOrbit("top set contains a saddle".into()))
                }
                OrbitKind::NegativeHyperbolic => {
                    return Err(IndexError::NotMorseOrbit("negative hyperbolic constant orbit".into()))
                }
            }
            if slot == 0 && classify_elliptic(&o.rotation, 1, di)? != EllipticClass::DPositive {
                return Err(IndexError::NotMorseOrbit("top set must consist of maxima".into()));
            }
        }
        if total != di {
            return Err(IndexError::NotMorseOrbit(format!("total multiplicity {total} != {d}")));
        }
    }
    let (e_plus, h) = (counts[0], counts[1]);
    Ok(2 * di - h - 2 * e_plus + 2 * m * (k as i64 + 1))
}

/// Index and energy of a closed–open class:
/// `I = n_y + 2m(k+1) + 2c`, `E = H_top - H_y + m + c/(k+1)`.
pub fn co_index_energy<S: Scalar>(n_y: i64, m: i64, c: i64, k: usize, h_top: &S, h_y: &S) -> (i64, S) {
    let k1 = k as i64 + 1;
    let i = n_y + 2 * m * k1 + 2 * c;
    let e = h_top.clone() - h_y.clone() + S::from_int(m) + S::from_ratio(c, k1);
    (i, e)
}

/// `ind u = -chi(F) + d + 2 c_1 + mu`.
pub fn hf_fredholm(chi_f: i64, d: i64, c1: i64, maslov: i64) -> i64 {
    -chi_f + d + 2 * c1 + maslov
}

/// `ind u = -chi(C) + 2 c_1 + CZ_+ - CZ_-`.
pub fn pfh_fredholm(chi_c: i64, c1: i64, cz_plus: i64, cz_minus: i64) -> i64 {
    -chi_c + 2 * c1 + cz_plus - cz_minus
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectCheck {
    /// `I == ind + 2 delta`.
    pub identity: bool,
    /// `I == ind mod 2`.
    pub parity: bool,
}

pub fn ech_vs_fredholm_defect(i: i64, ind: i64, delta: i64) -> DefectCheck {
    DefectCheck {
        identity: delta >= 0 && i == ind + 2 * delta,
        parity: (i - ind).rem_euclid(2) == 0,
    }
}
