//! Surface, admissible link and Morse Hamiltonian models.
//!
//! A [`SurfaceLinkModel`] is a closed genus `g` surface carrying `k`
//! contractible circles bounding disjoint disks `B_1..B_k` and one meridian
//! per handle. The complement of the disks is the region `B_{k+1}`; every one
//! of the `k + 1` regions has area `1/(k+1)` so the total area is one.
//!
//! A [`MorseHamiltonian`] is `H = eps * f` for a Morse function `f` whose only
//! maxima are the circle maxima `y_i^+` (with `f = 1`), and which restricts
//! to a perfect Morse function on each link circle. Critical values are
//! stored exactly; flow lines are recorded as integer counts between
//! critical points whose Morse indices differ by one.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("k>1 required (got k={0})")]
    TooFewContractible(i64),
    #[error("genus must be nonnegative (got {0})")]
    NegativeGenus(i64),
    #[error("epsilon must lie in (0, 1), got {0}")]
    EpsilonOutOfRange(String),
    #[error("circle {0} is missing a {1}")]
    CircleMissing(usize, &'static str),
    #[error("circle {0} carries more than one {1}")]
    CircleDuplicate(usize, &'static str),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("Euler characteristic mismatch: #max - #saddle + #min = {found}, expected {expected}")]
    EulerMismatch { found: i64, expected: i64 },
    #[error("Morse differential squares to a nonzero map: {from} -> {to}")]
    MorseBoundarySquare { from: String, to: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    /// Disk bounded by the contractible circle with this id.
    Disk { circle: usize },
    /// Complement of all disks.
    Outer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region<S> {
    pub id: usize,
    pub label: String,
    pub area: S,
    pub kind: RegionKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleKind {
    Contractible,
    Meridian { handle: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkCircle {
    pub id: usize,
    pub kind: CircleKind,
    /// Regions adjacent to the circle.
    pub bounds: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceLinkModel<S> {
    pub genus: usize,
    pub k: usize,
    pub d: usize,
    pub regions: Vec<Region<S>>,
    pub circles: Vec<LinkCircle>,
}

/// Builds the admissible link model for genus `g` with `k` contractible
/// circles. Requires `k >= 2`.
pub fn build_link_model<S: Scalar>(g: i64, k: i64) -> Result<SurfaceLinkModel<S>, GeometryError> {
    if g < 0 {
        return Err(GeometryError::NegativeGenus(g));
    }
    if k < 2 {
        return Err(GeometryError::TooFewContractible(k));
    }
    Ok(assemble_model(g as usize, k as usize))
}

/// Same as [`build_link_model`] but accepts a single contractible circle.
///
/// The closed-open machinery assumes `k > 1`; this variant only exists so the
/// Heegaard Floer side can be evaluated on a one-component link.
pub fn build_link_model_relaxed<S: Scalar>(
    g: i64,
    k: i64,
) -> Result<SurfaceLinkModel<S>, GeometryError> {
    if g < 0 {
        return Err(GeometryError::NegativeGenus(g));
    }
    if k < 1 {
        return Err(GeometryError::TooFewContractible(k));
    }
    Ok(assemble_model(g as usize, k as usize))
}

fn assemble_model<S: Scalar>(genus: usize, k: usize) -> SurfaceLinkModel<S> {
    let area = S::from_ratio(1, (k + 1) as i64);
    let mut regions: Vec<Region<S>> = (0..k)
        .map(|i| Region {
            id: i,
            label: format!("B{}", i + 1),
            area: area.clone(),
            kind: RegionKind::Disk { circle: i },
        })
        .collect();
    regions.push(Region {
        id: k,
        label: format!("B{}", k + 1),
        area,
        kind: RegionKind::Outer,
    });
    let mut circles: Vec<LinkCircle> = (0..k)
        .map(|i| LinkCircle {
            id: i,
            kind: CircleKind::Contractible,
            bounds: vec![i, k],
        })
        .collect();
    circles.extend((0..genus).map(|h| LinkCircle {
        id: k + h,
        kind: CircleKind::Meridian { handle: h },
        bounds: vec![k],
    }));
    SurfaceLinkModel {
        genus,
        k,
        d: k + genus,
        regions,
        circles,
    }
}

impl<S: Scalar> SurfaceLinkModel<S> {
    pub fn total_area(&self) -> S {
        self.regions
            .iter()
            .fold(S::zero(), |acc, r| acc + r.area.clone())
    }

    /// Area of a single region, `1/(k+1)`.
    pub fn unit_area(&self) -> S {
        S::from_ratio(1, (self.k + 1) as i64)
    }

    pub fn outer_region(&self) -> usize {
        self.k
    }

    /// Checks every structural invariant of the model.
    pub fn validate(&self) -> Result<(), GeometryError> {
        let bad = |m: &str| Err(GeometryError::InvalidProfile(m.to_string()));
        if self.d != self.k + self.genus {
            return bad("d != k + g");
        }
        if self.regions.len() != self.k + 1 {
            return bad("region count != k + 1");
        }
        let unit = self.unit_area();
        if self.regions.iter().any(|r| r.area != unit) {
            return bad("regions must have equal area 1/(k+1)");
        }
        if self.total_area() != S::one() {
            return bad("total area must be 1");
        }
        for c in self.circles.iter().take(self.k) {
            let disks = c
                .bounds
                .iter()
                .filter(|&&r| matches!(self.regions[r].kind, RegionKind::Disk { .. }))
                .count();
            if disks != 1 {
                return bad("each contractible circle bounds exactly one disk");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalRole {
    CircleMax,
    CircleMin,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint<S> {
    pub id: usize,
    pub label: String,
    pub morse_index: u8,
    /// Value of the unscaled Morse function `f`.
    pub f_value: S,
    /// Value of `H = eps * f`.
    pub value: S,
    pub on_circle: Option<usize>,
    pub role: CriticalRole,
    /// Region containing an index-0 point.
    pub region: Option<usize>,
}

impl<S> CriticalPoint<S> {
    pub fn is_saddle(&self) -> bool {
        self.morse_index == 1
    }
}

/// A periodic orbit family `gamma_{r0,theta0}` created near a local minimum by
/// the radial modification of the Hamiltonian. Its period exceeds `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargePeriodFamily {
    pub minimum: usize,
    pub region: usize,
    /// Rotation `p/q` in lowest terms.
    pub rotation: (i64, i64),
    pub period: i64,
}

/// Records that the Hamiltonian has been perturbed near its minima. The
/// vector field outside the perturbation neighbourhood is unchanged, so the
/// critical data stays as is and only these families are added.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Modification {
    pub families: Vec<LargePeriodFamily>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorseHamiltonian<S> {
    pub epsilon: S,
    pub critical_points: Vec<CriticalPoint<S>>,
    /// `(source, sink) -> number of gradient lines`, descending.
    pub flow_line_counts: BTreeMap<(usize, usize), u32>,
    pub modified: Option<Modification>,
}

/// One critical point of a profile descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePoint<S> {
    pub label: String,
    pub morse_index: u8,
    pub f_value: S,
    pub on_circle: Option<usize>,
    pub role: CriticalRole,
    pub region: Option<usize>,
}

/// Explicit critical-point graph for a Morse function.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileDescriptor<S> {
    pub points: Vec<ProfilePoint<S>>,
    /// `(source label, sink label, count)`.
    pub flows: Vec<(String, String, u32)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile<S> {
    /// Chain of disks with one saddle between neighbouring maxima; each
    /// handle adds a meridian plus a connecting and a free saddle.
    Standard,
    Custom(ProfileDescriptor<S>),
}

impl<S> fmt::Display for Profile<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Standard => f.write_str("standard"),
            Profile::Custom(_) => f.write_str("custom"),
        }
    }
}

/// Descriptor of the standard profile for `model`.
///
/// Values of `f`: circle maxima 1, circle minima 1/2, off-circle saddles
/// 1/4, minima 0. On the meridians the choice of saddles is a modelling
/// convention; it reproduces the homology of the closed surface.
pub fn standard_profile<S: Scalar>(model: &SurfaceLinkModel<S>) -> ProfileDescriptor<S> {
    let k = model.k;
    let g = model.genus;
    let d = model.d;
    let mut points = Vec::new();
    let mut flows = Vec::new();
    let point = |label: String, idx: u8, f: S, circle, role, region| ProfilePoint {
        label,
        morse_index: idx,
        f_value: f,
        on_circle: circle,
        role,
        region,
    };
    let max = |i: usize| format!("y{}+", i + 1);
    let cmin = |i: usize| format!("y{}-", i + 1);
    for i in 0..d {
        points.push(point(max(i), 2, S::one(), Some(i), CriticalRole::CircleMax, None));
    }
    for i in 0..d {
        points.push(point(
            cmin(i),
            1,
            S::from_ratio(1, 2),
            Some(i),
            CriticalRole::CircleMin,
            None,
        ));
    }
    let quarter = S::from_ratio(1, 4);
    for i in 0..k.saturating_sub(1) {
        points.push(point(
            format!("s{}{}", i + 1, i + 2),
            1,
            quarter.clone(),
            None,
            CriticalRole::Interior,
            None,
        ));
    }
    for h in 0..g {
        points.push(point(format!("c{}", h + 1), 1, quarter.clone(), None, CriticalRole::Interior, None));
        points.push(point(format!("e{}", h + 1), 1, quarter.clone(), None, CriticalRole::Interior, None));
    }
    for i in 0..k {
        points.push(point(format!("b{}", i + 1), 0, S::zero(), None, CriticalRole::Interior, Some(i)));
    }
    points.push(point("b0".to_string(), 0, S::zero(), None, CriticalRole::Interior, Some(k)));

    let mut flow = |a: String, b: String, n: u32| flows.push((a, b, n));
    for i in 0..d {
        // the two arcs of the circle
        flow(max(i), cmin(i), 2);
    }
    for i in 0..k.saturating_sub(1) {
        let s = format!("s{}{}", i + 1, i + 2);
        flow(max(i), s.clone(), 1);
        flow(max(i + 1), s.clone(), 1);
        flow(s, "b0".into(), 2);
    }
    for h in 0..g {
        let m = k + h;
        let c = format!("c{}", h + 1);
        let e = format!("e{}", h + 1);
        flow(max(m), c.clone(), 1);
        flow(max(k - 1), c.clone(), 1);
        flow(max(m), e.clone(), 2);
        flow(c, "b0".into(), 2);
        flow(e, "b0".into(), 2);
        flow(cmin(m), "b0".into(), 2);
    }
    for i in 0..k {
        flow(cmin(i), format!("b{}", i + 1), 1);
        flow(cmin(i), "b0".into(), 1);
    }
    ProfileDescriptor { points, flows }
}

/// Builds `H = eps * f` for the given profile and validates it.
pub fn build_morse_hamiltonian<S: Scalar>(
    model: &SurfaceLinkModel<S>,
    epsilon: S,
    profile: &Profile<S>,
) -> Result<MorseHamiltonian<S>, GeometryError> {
    if !(epsilon > S::zero() && epsilon < S::one()) {
        return Err(GeometryError::EpsilonOutOfRange(epsilon.to_string()));
    }
    let descriptor = match profile {
        Profile::Standard => standard_profile(model),
        Profile::Custom(d) => d.clone(),
    };
    let mut index_of = BTreeMap::new();
    let critical_points: Vec<CriticalPoint<S>> = descriptor
        .points
        .iter()
        .enumerate()
        .map(|(id, p)| {
            index_of.insert(p.label.clone(), id);
            CriticalPoint {
                id,
                label: p.label.clone(),
                morse_index: p.morse_index,
                value: epsilon.clone() * p.f_value.clone(),
                f_value: p.f_value.clone(),
                on_circle: p.on_circle,
                role: p.role,
                region: p.region,
            }
        })
        .collect();
    if index_of.len() != critical_points.len() {
        return Err(GeometryError::InvalidProfile("duplicate critical point label".into()));
    }
    let mut flow_line_counts = BTreeMap::new();
    for (a, b, n) in &descriptor.flows {
        let (Some(&src), Some(&dst)) = (index_of.get(a), index_of.get(b)) else {
            return Err(GeometryError::InvalidProfile(format!("unknown flow endpoint {a} -> {b}")));
        };
        *flow_line_counts.entry((src, dst)).or_insert(0) += *n;
    }
    let ham = MorseHamiltonian {
        epsilon,
        critical_points,
        flow_line_counts,
        modified: None,
    };
    ham.validate(model)?;
    Ok(ham)
}

impl<S: Scalar> MorseHamiltonian<S> {
    pub fn point(&self, id: usize) -> &CriticalPoint<S> {
        &self.critical_points[id]
    }

    pub fn by_label(&self, label: &str) -> Option<&CriticalPoint<S>> {
        self.critical_points.iter().find(|p| p.label == label)
    }

    /// Maximum of circle `i`.
    pub fn circle_max(&self, circle: usize) -> &CriticalPoint<S> {
        self.critical_points
            .iter()
            .find(|p| p.on_circle == Some(circle) && p.role == CriticalRole::CircleMax)
            .expect("validated hamiltonian has a max on every circle")
    }

    /// Minimum of the restriction to circle `i` (a saddle of `f`).
    pub fn circle_min(&self, circle: usize) -> &CriticalPoint<S> {
        self.critical_points
            .iter()
            .find(|p| p.on_circle == Some(circle) && p.role == CriticalRole::CircleMin)
            .expect("validated hamiltonian has a min on every circle")
    }

    pub fn flow_count(&self, from: usize, to: usize) -> u32 {
        self.flow_line_counts.get(&(from, to)).copied().unwrap_or(0)
    }

    /// Targets of the Morse differential of `from`, reduced mod 2.
    pub fn morse_boundary(&self, from: usize) -> Vec<usize> {
        self.flow_line_counts
            .range((from, 0)..(from + 1, 0))
            .filter(|(_, &n)| n % 2 == 1)
            .map(|(&(_, to), _)| to)
            .collect()
    }

    /// Number of link circles.
    pub fn circle_count(&self) -> usize {
        self.critical_points
            .iter()
            .filter(|p| p.role == CriticalRole::CircleMax)
            .count()
    }

    /// Returns a copy carrying the large-period orbit families near every
    /// local minimum. The rotation is `1/(d+1)`, hence period `d+1 > d`.
    pub fn with_second_modification(&self, d: usize) -> Self {
        let q = d as i64 + 1;
        let families = self
            .critical_points
            .iter()
            .filter(|p| p.morse_index == 0)
            .map(|p| LargePeriodFamily {
                minimum: p.id,
                region: p.region.unwrap_or(usize::MAX),
                rotation: (1, q),
                period: q,
            })
            .collect();
        let mut out = self.clone();
        out.modified = Some(Modification { families });
        out
    }

    fn validate(&self, model: &SurfaceLinkModel<S>) -> Result<(), GeometryError> {
        let d = model.d;
        let invalid = |m: String| Err(GeometryError::InvalidProfile(m));
        for c in 0..d {
            for (role, name) in [(CriticalRole::CircleMax, "max"), (CriticalRole::CircleMin, "min")] {
                let n = self
                    .critical_points
                    .iter()
                    .filter(|p| p.on_circle == Some(c) && p.role == role)
                    .count();
                if n == 0 {
                    return Err(GeometryError::CircleMissing(c, name));
                }
                if n > 1 {
                    return Err(GeometryError::CircleDuplicate(c, name));
                }
            }
        }
        for p in &self.critical_points {
            if p.morse_index > 2 {
                return invalid(format!("{}: Morse index {} > 2", p.label, p.morse_index));
            }
            if let Some(c) = p.on_circle {
                if c >= d {
                    return invalid(format!("{}: circle {c} out of range", p.label));
                }
            }
            match p.role {
                CriticalRole::CircleMax => {
                    if p.morse_index != 2 || p.f_value != S::one() {
                        return invalid(format!("{}: circle maxima have index 2 and f = 1", p.label));
                    }
                }
                CriticalRole::CircleMin => {
                    if p.morse_index != 1 {
                        return invalid(format!("{}: circle minima are saddles of f", p.label));
                    }
                }
                CriticalRole::Interior => {
                    if p.morse_index == 2 {
                        return invalid(format!("{}: circle maxima are the only maxima", p.label));
                    }
                }
            }
        }
        for (&(a, b), &n) in &self.flow_line_counts {
            let (pa, pb) = (&self.critical_points[a], &self.critical_points[b]);
            if pa.morse_index != pb.morse_index + 1 {
                return invalid(format!("flow {} -> {} must drop the index by one", pa.label, pb.label));
            }
            if pa.f_value <= pb.f_value {
                return invalid(format!("flow {} -> {} must decrease f", pa.label, pb.label));
            }
            if pa.on_circle.is_some() && pa.on_circle == pb.on_circle && n % 2 != 0 {
                return invalid(format!(
                    "flow {} -> {} along a circle must be even",
                    pa.label, pb.label
                ));
            }
        }
        let count = |i: u8| self.critical_points.iter().filter(|p| p.morse_index == i).count() as i64;
        let found = count(2) - count(1) + count(0);
        let expected = 2 - 2 * model.genus as i64;
        if found != expected {
            return Err(GeometryError::EulerMismatch { found, expected });
        }
        for p in self.critical_points.iter().filter(|p| p.morse_index == 2) {
            let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
            for s in self.morse_boundary(p.id) {
                for m in self.morse_boundary(s) {
                    *acc.entry(m).or_insert(0) += 1;
                }
            }
            if let Some((&m, _)) = acc.iter().find(|(_, &n)| n % 2 == 1) {
                return Err(GeometryError::MorseBoundarySquare {
                    from: p.label.clone(),
                    to: self.critical_points[m].label.clone(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn link_model_examples() {
        let m = build_link_model::<Rational>(0, 2).unwrap();
        assert_eq!(m.d, 2);
        assert_eq!(m.regions.len(), 3);
        assert!(m.regions.iter().all(|x| x.area == r(1, 3)));
        let m = build_link_model::<Rational>(1, 2).unwrap();
        assert_eq!((m.d, m.regions.len()), (3, 3));
        assert_eq!(
            build_link_model::<Rational>(0, 1).unwrap_err(),
            GeometryError::TooFewContractible(1)
        );
        assert_eq!(
            build_link_model::<Rational>(-1, 3).unwrap_err(),
            GeometryError::NegativeGenus(-1)
        );
    }

    #[test]
    fn areas_sum_to_one_and_validate() {
        for g in 0..3 {
            for k in 2..6 {
                let m = build_link_model::<Rational>(g, k).unwrap();
                assert_eq!(m.total_area(), Rational::from_int(1));
                m.validate().unwrap();
                assert_eq!(m, build_link_model::<Rational>(g, k).unwrap());
            }
        }
    }

    #[test]
    fn standard_hamiltonian_g0_k2() {
        let m = build_link_model::<Rational>(0, 2).unwrap();
        let h = build_morse_hamiltonian(&m, r(1, 10), &Profile::Standard).unwrap();
        let maxima: Vec<_> = h
            .critical_points
            .iter()
            .filter(|p| p.role == CriticalRole::CircleMax)
            .collect();
        assert_eq!(maxima.len(), 2);
        assert!(maxima.iter().all(|p| p.value == r(1, 10)));
        for c in 0..2 {
            let (mx, mn) = (h.circle_max(c).id, h.circle_min(c).id);
            assert_eq!(h.flow_count(mx, mn) % 2, 0);
        }
    }

    #[test]
    fn adjacent_maxima_share_a_saddle() {
        let m = build_link_model::<Rational>(0, 3).unwrap();
        let h = build_morse_hamiltonian(&m, r(1, 100), &Profile::Standard).unwrap();
        let s = h.by_label("s12").unwrap().id;
        assert_eq!(h.flow_count(h.circle_max(0).id, s), 1);
        assert_eq!(h.flow_count(h.circle_max(1).id, s), 1);
        let s23 = h.by_label("s23").unwrap().id;
        let middle: Vec<_> = h.morse_boundary(h.circle_max(1).id);
        assert_eq!(middle, vec![s, s23]);
    }

    #[test]
    fn euler_characteristic_holds() {
        for g in 0..3 {
            for k in 2..5 {
                let m = build_link_model::<Rational>(g, k).unwrap();
                let h = build_morse_hamiltonian(&m, r(1, 50), &Profile::Standard).unwrap();
                let c = |i| h.critical_points.iter().filter(|p| p.morse_index == i).count() as i64;
                assert_eq!(c(2) - c(1) + c(0), 2 - 2 * g);
            }
        }
    }

    #[test]
    fn rejects_bad_epsilon_and_missing_min() {
        let m = build_link_model::<Rational>(0, 2).unwrap();
        assert!(matches!(
            build_morse_hamiltonian(&m, r(0, 1), &Profile::Standard),
            Err(GeometryError::EpsilonOutOfRange(_))
        ));
        assert!(build_morse_hamiltonian(&m, r(1, 1), &Profile::Standard).is_err());
        let mut desc = standard_profile(&m);
        desc.points.retain(|p| p.label != "y2-");
        desc.flows.retain(|(a, b, _)| a != "y2-" && b != "y2-");
        assert_eq!(
            build_morse_hamiltonian(&m, r(1, 10), &Profile::Custom(desc)).unwrap_err(),
            GeometryError::CircleMissing(1, "min")
        );
    }

    #[test]
    fn odd_circle_flow_rejected() {
        let m = build_link_model::<Rational>(0, 2).unwrap();
        let mut desc = standard_profile(&m);
        for f in desc.flows.iter_mut() {
            if f.0 == "y1+" && f.1 == "y1-" {
                f.2 = 1;
            }
        }
        assert!(matches!(
            build_morse_hamiltonian(&m, r(1, 10), &Profile::Custom(desc)),
            Err(GeometryError::InvalidProfile(_))
        ));
    }

    #[test]
    fn modification_adds_families_with_large_period() {
        let m = build_link_model::<Rational>(1, 2).unwrap();
        let h = build_morse_hamiltonian(&m, r(1, 10), &Profile::Standard).unwrap();
        let h2 = h.with_second_modification(m.d);
        let fam = &h2.modified.as_ref().unwrap().families;
        assert_eq!(fam.len(), 3);
        assert!(fam.iter().all(|f| f.period > m.d as i64));
        assert_eq!(h2.critical_points, h.critical_points);
        assert_eq!(h2.flow_line_counts, h.flow_line_counts);
    }
}
