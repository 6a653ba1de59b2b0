//! Affine lattices of relative homology classes.
//!
//! Three contexts share one representation:
//!
//! * `Hf`: classes in `H_2(M, y_+, y_-)`, spanned over a base class by
//!   `[B_i]`, `[phi(B_i)]` and `[Sigma]`;
//! * `Pfh`: classes in `H_2(Y, alpha, beta)`, affine over `Z[Sigma]`;
//! * `Co`: closed-open classes in `H_2(W, gamma, y)`, spanned by `[B_i]`
//!   and `[Sigma]`.
//!
//! Classes are stored in reduced form: the relation
//! `sum_{i=1}^{k+1} [B_i] = sum_{i=1}^{k+1} [phi(B_i)] = [Sigma]` is used to
//! absorb the `(k+1)`-th disk, and complements are rewritten with
//! `[B_i^c] = [Sigma] - [B_i]`. Only `k` disk coefficients and the `[Sigma]`
//! multiplicity remain, which makes equality structural.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{RegionKind, SurfaceLinkModel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("context mismatch: {0:?} vs {1:?}")]
    ContextMismatch(Context, Context),
    #[error("anchor mismatch: {0} vs {1}")]
    AnchorMismatch(Anchor, Anchor),
    #[error("coefficient length mismatch (k={0} vs k={1})")]
    RankMismatch(usize, usize),
    #[error("{0:?} classes cannot carry {1} coefficients")]
    ForbiddenCoordinate(Context, &'static str),
    #[error("disk index {0} out of range")]
    DiskOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Context {
    Hf,
    Pfh,
    Co,
}

/// Opaque name of the base class of an affine lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Anchor(pub String);

impl Anchor {
    pub fn new(name: impl Into<String>) -> Self {
        Anchor(name.into())
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coefficients {
    /// Multiplicities of `[B_1] .. [B_k]`.
    pub b: Vec<i64>,
    /// Multiplicities of `[phi(B_1)] .. [phi(B_k)]`.
    pub phi_b: Vec<i64>,
    pub sigma: i64,
}

/// A reduced relative homology class: anchor plus integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelClass {
    pub context: Context,
    pub anchor: Anchor,
    pub coefficients: Coefficients,
}

/// Unreduced coordinates, including the `(k+1)`-th disk and the complement
/// classes `[B_i^c]`, `[phi(B_i^c)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawClass {
    pub context: Context,
    pub anchor: Anchor,
    /// Length `k + 1`.
    pub b: Vec<i64>,
    /// Length `k + 1`.
    pub phi_b: Vec<i64>,
    /// Length `k`.
    pub b_complement: Vec<i64>,
    /// Length `k`.
    pub phi_b_complement: Vec<i64>,
    pub sigma: i64,
}

impl RawClass {
    pub fn zero(context: Context, anchor: Anchor, k: usize) -> Self {
        RawClass {
            context,
            anchor,
            b: vec![0; k + 1],
            phi_b: vec![0; k + 1],
            b_complement: vec![0; k],
            phi_b_complement: vec![0; k],
            sigma: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.b_complement.len()
    }

    pub fn reduce(&self) -> Result<RelClass, LatticeError> {
        let k = self.k();
        if self.b.len() != k + 1 || self.phi_b.len() != k + 1 || self.phi_b_complement.len() != k {
            return Err(LatticeError::RankMismatch(k, self.b.len().saturating_sub(1)));
        }
        let mut b: Vec<i64> = self.b[..k].to_vec();
        let mut phi_b: Vec<i64> = self.phi_b[..k].to_vec();
        let mut sigma = self.sigma;
        let (last, phi_last) = (self.b[k], self.phi_b[k]);
        b.iter_mut().for_each(|c| *c -= last);
        phi_b.iter_mut().for_each(|c| *c -= phi_last);
        sigma += last + phi_last;
        for i in 0..k {
            b[i] -= self.b_complement[i];
            phi_b[i] -= self.phi_b_complement[i];
            sigma += self.b_complement[i] + self.phi_b_complement[i];
        }
        let class = RelClass {
            context: self.context,
            anchor: self.anchor.clone(),
            coefficients: Coefficients { b, phi_b, sigma },
        };
        class.check_context()?;
        Ok(class)
    }
}

impl RelClass {
    /// The anchor itself (all coordinates zero).
    pub fn base(context: Context, anchor: Anchor, k: usize) -> Self {
        RelClass {
            context,
            anchor,
            coefficients: Coefficients {
                b: vec![0; k],
                phi_b: vec![0; k],
                sigma: 0,
            },
        }
    }

    pub fn k(&self) -> usize {
        self.coefficients.b.len()
    }

    fn check_context(&self) -> Result<(), LatticeError> {
        let c = &self.coefficients;
        let has_b = c.b.iter().any(|&x| x != 0);
        let has_phi = c.phi_b.iter().any(|&x| x != 0);
        match self.context {
            Context::Hf => Ok(()),
            Context::Pfh if has_b => Err(LatticeError::ForbiddenCoordinate(Context::Pfh, "[B_i]")),
            Context::Pfh | Context::Co if has_phi => {
                Err(LatticeError::ForbiddenCoordinate(self.context, "[phi(B_i)]"))
            }
            _ => Ok(()),
        }
    }

    pub fn to_raw(&self) -> RawClass {
        let k = self.k();
        let mut raw = RawClass::zero(self.context, self.anchor.clone(), k);
        raw.b[..k].copy_from_slice(&self.coefficients.b);
        raw.phi_b[..k].copy_from_slice(&self.coefficients.phi_b);
        raw.sigma = self.coefficients.sigma;
        raw
    }

    /// Adds `n [B_i]`; `i == k` is the outer region `B_{k+1}`.
    pub fn plus_disk(&self, i: usize, n: i64) -> Result<RelClass, LatticeError> {
        let mut raw = self.to_raw();
        *raw.b.get_mut(i).ok_or(LatticeError::DiskOutOfRange(i))? += n;
        raw.reduce()
    }

    pub fn plus_phi_disk(&self, i: usize, n: i64) -> Result<RelClass, LatticeError> {
        let mut raw = self.to_raw();
        *raw.phi_b.get_mut(i).ok_or(LatticeError::DiskOutOfRange(i))? += n;
        raw.reduce()
    }

    pub fn plus_disk_complement(&self, i: usize, n: i64) -> Result<RelClass, LatticeError> {
        let mut raw = self.to_raw();
        *raw.b_complement.get_mut(i).ok_or(LatticeError::DiskOutOfRange(i))? += n;
        raw.reduce()
    }

    pub fn plus_phi_disk_complement(&self, i: usize, n: i64) -> Result<RelClass, LatticeError> {
        let mut raw = self.to_raw();
        *raw.phi_b_complement.get_mut(i).ok_or(LatticeError::DiskOutOfRange(i))? += n;
        raw.reduce()
    }

    pub fn plus_sigma(&self, n: i64) -> RelClass {
        let mut out = self.clone();
        out.coefficients.sigma += n;
        out
    }

    /// Applies a reduced or unreduced difference record.
    pub fn plus_diff(&self, diff: &ClassDiff) -> Result<RelClass, LatticeError> {
        let k = self.k();
        if diff.k() != k {
            return Err(LatticeError::RankMismatch(k, diff.k()));
        }
        let mut raw = self.to_raw();
        for i in 0..k {
            raw.b[i] += diff.c[i];
            raw.phi_b[i] += diff.c_phi[i];
            raw.b_complement[i] += diff.d[i];
            raw.phi_b_complement[i] += diff.d_phi[i];
        }
        raw.sigma += diff.m;
        raw.reduce()
    }

    /// Same class re-expressed over another anchor name.
    pub fn with_anchor(&self, anchor: Anchor) -> RelClass {
        RelClass {
            anchor,
            ..self.clone()
        }
    }
}

/// Coefficient record of `A' - A = m[Sigma] + sum c_i [B_i] + c'_i [phi(B_i)]
/// + d_i [B_i^c] + d'_i [phi(B_i^c)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassDiff {
    pub c: Vec<i64>,
    pub c_phi: Vec<i64>,
    pub d: Vec<i64>,
    pub d_phi: Vec<i64>,
    pub m: i64,
}

impl ClassDiff {
    pub fn zero(k: usize) -> Self {
        ClassDiff {
            c: vec![0; k],
            c_phi: vec![0; k],
            d: vec![0; k],
            d_phi: vec![0; k],
            m: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.c.len()
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0
            && [&self.c, &self.c_phi, &self.d, &self.d_phi]
                .iter()
                .all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn add(&self, other: &ClassDiff) -> ClassDiff {
        let zip = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        ClassDiff {
            c: zip(&self.c, &other.c),
            c_phi: zip(&self.c_phi, &other.c_phi),
            d: zip(&self.d, &other.d),
            d_phi: zip(&self.d_phi, &other.d_phi),
            m: self.m + other.m,
        }
    }

    pub fn scale(&self, n: i64) -> ClassDiff {
        let mul = |v: &[i64]| v.iter().map(|x| x * n).collect();
        ClassDiff {
            c: mul(&self.c),
            c_phi: mul(&self.c_phi),
            d: mul(&self.d),
            d_phi: mul(&self.d_phi),
            m: self.m * n,
        }
    }

    /// Rewrites the complements, leaving `d = d' = 0`.
    pub fn reduced(&self) -> ClassDiff {
        let k = self.k();
        let mut out = ClassDiff::zero(k);
        out.m = self.m;
        for i in 0..k {
            out.c[i] = self.c[i] - self.d[i];
            out.c_phi[i] = self.c_phi[i] - self.d_phi[i];
            out.m += self.d[i] + self.d_phi[i];
        }
        out
    }

    /// `omega`-area of the difference: `1/(k+1)` per disk, `k/(k+1)` per
    /// complement and `1` per `[Sigma]`.
    pub fn energy<S: Scalar>(&self) -> S {
        let k = self.k() as i64;
        let disks: i64 = self.c.iter().chain(&self.c_phi).sum();
        let comps: i64 = self.d.iter().chain(&self.d_phi).sum();
        S::from_ratio(disks + k * comps, k + 1) + S::from_int(self.m)
    }
}

/// Reduced decomposition of `a_prime - a`.
pub fn class_diff(a_prime: &RelClass, a: &RelClass) -> Result<ClassDiff, LatticeError> {
    if a_prime.context != a.context {
        return Err(LatticeError::ContextMismatch(a_prime.context, a.context));
    }
    if a_prime.anchor != a.anchor {
        return Err(LatticeError::AnchorMismatch(a_prime.anchor.clone(), a.anchor.clone()));
    }
    if a_prime.k() != a.k() {
        return Err(LatticeError::RankMismatch(a_prime.k(), a.k()));
    }
    let (p, q) = (&a_prime.coefficients, &a.coefficients);
    let sub = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(u, v)| u - v).collect();
    let k = a.k();
    Ok(ClassDiff {
        c: sub(&p.b, &q.b),
        c_phi: sub(&p.phi_b, &q.phi_b),
        d: vec![0; k],
        d_phi: vec![0; k],
        m: p.sigma - q.sigma,
    })
}

/// Energy of a reduced class relative to its anchor.
pub fn energy<S: Scalar>(a: &RelClass, model: &SurfaceLinkModel<S>) -> S {
    let k1 = (model.k + 1) as i64;
    let c = &a.coefficients;
    let disks: i64 = c.b.iter().chain(&c.phi_b).sum();
    S::from_ratio(disks, k1) + S::from_int(c.sigma)
}

/// A connected component of `Sigma - Lambda - phi(Lambda)` together with the
/// disk regions `B_*` and `phi(B_*)` containing it (indices `0..=k`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FineRegion {
    pub label: String,
    pub in_b: usize,
    pub in_phi_b: usize,
}

/// Components of the complement of the link and its image.
///
/// Each contractible circle `i` contributes the core `D_i` (inside both
/// `B_i` and `phi(B_i)`) and two lunes: `L_i^in` inside `B_i` only and
/// `L_i^out` inside `phi(B_i)` only. Each meridian contributes two lunes in
/// the outer region, and the rest of the outer region is one component.
pub fn fine_regions<S: Scalar>(model: &SurfaceLinkModel<S>) -> Vec<FineRegion> {
    let k = model.k;
    let mut out = Vec::new();
    for r in &model.regions {
        if let RegionKind::Disk { circle } = r.kind {
            let i = circle;
            out.push(FineRegion { label: format!("D{}", i + 1), in_b: i, in_phi_b: i });
            out.push(FineRegion { label: format!("L{}in", i + 1), in_b: i, in_phi_b: k });
            out.push(FineRegion { label: format!("L{}out", i + 1), in_b: k, in_phi_b: i });
        }
    }
    for h in 0..model.genus {
        for side in ["a", "b"] {
            out.push(FineRegion { label: format!("M{}{side}", h + 1), in_b: k, in_phi_b: k });
        }
    }
    out.push(FineRegion { label: "O".into(), in_b: k, in_phi_b: k });
    out
}

/// Intersection numbers `n_j(A)` with the base points `z_j`, one per fine
/// region, normalised to zero on the anchor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionIncidence {
    pub labels: Vec<String>,
    pub n: Vec<i64>,
}

pub fn intersection_numbers<S: Scalar>(
    a: &RelClass,
    model: &SurfaceLinkModel<S>,
) -> Result<RegionIncidence, LatticeError> {
    if a.context != Context::Hf {
        return Err(LatticeError::ContextMismatch(a.context, Context::Hf));
    }
    if a.k() != model.k {
        return Err(LatticeError::RankMismatch(a.k(), model.k));
    }
    let c = &a.coefficients;
    let k = model.k;
    let coeff = |v: &[i64], i: usize| if i < k { v[i] } else { 0 };
    let regions = fine_regions(model);
    Ok(RegionIncidence {
        labels: regions.iter().map(|r| r.label.clone()).collect(),
        n: regions
            .iter()
            .map(|r| coeff(&c.b, r.in_b) + coeff(&c.phi_b, r.in_phi_b) + c.sigma)
            .collect(),
    })
}

pub fn is_positive<S: Scalar>(a: &RelClass, model: &SurfaceLinkModel<S>) -> Result<bool, LatticeError> {
    Ok(intersection_numbers(a, model)?.n.iter().all(|&n| n >= 0))
}
