//! Filtered chain complexes over `F_2` with a Novikov `Z`-action.
//!
//! A complex is specified by finitely many *base* generators and
//! differential entries `(source, target, t)` meaning that `∂(x T^n)`
//! contains `y T^(n+t)`. The action of `x T^n` is `action(x) - n * period`.
//! A finite window of `T`-powers is materialised; the generators outside the
//! window form a subcomplex (below) and a quotient (above), so the window is
//! a subquotient and `∂² = 0` survives truncation.
//!
//! Spectral invariants are computed from an echelon basis of the boundary
//! space in which every basis vector has a distinct top generator in the
//! filtration order; greedily clearing the top of a cycle against this basis
//! yields the representative of minimal maximal action.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::lattice::{Anchor, ClassDiff, RelClass};
use crate::morse::{MorseOrbitSet, ReebChordTuple};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("differential entry {from} -> {to} does not decrease the action")]
    ActionIncreasing { from: String, to: String },
    #[error("d^2 != 0: coefficient of {to} in d^2({from}) is odd")]
    BoundarySquare { from: String, to: String },
    #[error("differential entry refers to unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("empty window [{0}, {1}]")]
    EmptyWindow(i64, i64),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("class is zero in homology")]
    ZeroClass,
    #[error("operation requires an HF complex")]
    NotHf,
    #[error("malformed complex document: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ComplexKind {
    Pfh,
    Hf,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    OrbitSet(MorseOrbitSet),
    Chord(ReebChordTuple),
    Named(String),
}

/// A generator together with its capping and exact action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloerGenerator<S> {
    pub label: String,
    pub payload: Payload,
    pub capping: RelClass,
    pub action: S,
    /// Homological grading, lowered by one by the differential.
    pub grade: Option<i64>,
}

impl<S: Scalar> FloerGenerator<S> {
    pub fn named(label: impl Into<String>, action: S, capping: RelClass) -> Self {
        let label = label.into();
        FloerGenerator {
            payload: Payload::Named(label.clone()),
            label,
            capping,
            action,
            grade: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiffEntry {
    pub from: usize,
    pub to: usize,
    /// Power of `T` carried by the entry.
    pub t: i64,
}

impl DiffEntry {
    pub fn new(from: usize, to: usize) -> Self {
        DiffEntry { from, to, t: 0 }
    }
}

/// Effect of one power of `T`: the action drops by `action`, the capping
/// changes by `capping` and the grading drops by `grade`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Period<S> {
    pub action: S,
    pub capping: ClassDiff,
    pub grade: i64,
}

/// Inclusive range of materialised `T`-powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    /// `periods` consecutive powers starting at zero.
    pub fn periods(periods: usize) -> Self {
        Window::new(0, periods as i64 - 1)
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, n: i64) -> bool {
        (self.lo..=self.hi).contains(&n)
    }

    pub fn scaled(&self, factor: i64) -> Self {
        Window::new(self.lo * factor, self.hi * factor)
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::periods(3)
    }
}

/// Sorted, duplicate-free list of materialised generator indices.
pub type Chain = Vec<usize>;

/// Symmetric difference of two sorted index lists.
pub fn chain_add(a: &[usize], b: &[usize]) -> Chain {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sorts and cancels repeated indices in pairs.
pub fn chain_from_mod2(mut items: Vec<usize>) -> Chain {
    items.sort_unstable();
    let mut out: Chain = Vec::with_capacity(items.len());
    for x in items {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

#[derive(Debug)]
struct ComplexData<S> {
    kind: ComplexKind,
    base: Vec<FloerGenerator<S>>,
    entries: Vec<DiffEntry>,
    /// Outgoing entries per base generator: `(to, t)`.
    outgoing: Vec<Vec<(usize, i64)>>,
    period: Period<S>,
    window: Window,
    /// Filtration position of every materialised generator.
    position: Vec<u32>,
    /// Inverse of `position`.
    at_position: Vec<u32>,
}

/// Echelon basis of a boundary space, keyed by top filtration position.
#[derive(Debug, Default)]
struct Reduction {
    pivots: HashMap<u32, Vec<u32>>,
}

/// An immutable filtered complex.
///
/// Cloning is cheap; shifted and re-based copies share the generator data
/// and the cached reductions.
#[derive(Clone)]
pub struct FilteredComplex<S> {
    data: Arc<ComplexData<S>>,
    action_offset: S,
    capping_offset: S,
    anchor: Option<Anchor>,
    cache: Arc<Mutex<HashMap<Option<i64>, Arc<Reduction>>>>,
}

impl<S: fmt::Debug> fmt::Debug for FilteredComplex<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FilteredComplex")
            .field("kind", &self.data.kind)
            .field("base", &self.data.base.len())
            .field("entries", &self.data.entries.len())
            .field("window", &self.data.window)
            .field("action_offset", &self.action_offset)
            .finish()
    }
}

/// Homology of the materialised window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub rank: usize,
    pub periods: usize,
    pub rank_per_period: usize,
    /// One cycle per basis element of homology.
    pub representatives: Vec<Chain>,
}

/// Validates the data and materialises the window.
pub fn build_complex<S: Scalar>(
    kind: ComplexKind,
    generators: Vec<FloerGenerator<S>>,
    entries: Vec<DiffEntry>,
    period: Period<S>,
    window: Window,
) -> Result<FilteredComplex<S>, ComplexError> {
    if window.is_empty() {
        return Err(ComplexError::EmptyWindow(window.lo, window.hi));
    }
    let n = generators.len();
    let mut outgoing = vec![Vec::new(); n];
    let mut seen: BTreeMap<DiffEntry, u32> = BTreeMap::new();
    for e in &entries {
        if e.from >= n || e.to >= n {
            return Err(ComplexError::UnknownGenerator(e.from.max(e.to)));
        }
        *seen.entry(*e).or_insert(0) += 1;
    }
    // repeated entries cancel mod 2
    let entries: Vec<DiffEntry> = seen.into_iter().filter(|(_, c)| c % 2 == 1).map(|(e, _)| e).collect();
    for e in &entries {
        let target = generators[e.to].action.clone() - S::from_int(e.t) * period.action.clone();
        if !(target < generators[e.from].action) {
            return Err(ComplexError::ActionIncreasing {
                from: generators[e.from].label.clone(),
                to: generators[e.to].label.clone(),
            });
        }
        outgoing[e.from].push((e.to, e.t));
    }
    check_square(&generators, &outgoing)?;

    let total = n * window.len();
    let mut order: Vec<u32> = (0..total as u32).collect();
    let action_of = |i: u32| {
        let (b, t) = (i as usize % n, window.lo + (i as usize / n) as i64);
        generators[b].action.clone() - S::from_int(t) * period.action.clone()
    };
    let actions: Vec<S> = (0..total as u32).map(action_of).collect();
    order.sort_by(|&a, &b| {
        actions[a as usize]
            .partial_cmp(&actions[b as usize])
            .expect("actions are totally ordered")
            .then(a.cmp(&b))
    });
    let mut position = vec![0u32; total];
    for (pos, &i) in order.iter().enumerate() {
        position[i as usize] = pos as u32;
    }
    let data = ComplexData {
        kind,
        base: generators,
        entries,
        outgoing,
        period,
        window,
        position,
        at_position: order,
    };
    Ok(FilteredComplex {
        data: Arc::new(data),
        action_offset: S::zero(),
        capping_offset: S::zero(),
        anchor: None,
        cache: Arc::new(Mutex::new(HashMap::new())),
    })
}

/// Checks `∂² = 0` on base generators, `T`-equivariantly.
fn check_square<S: Scalar>(
    generators: &[FloerGenerator<S>],
    outgoing: &[Vec<(usize, i64)>],
) -> Result<(), ComplexError> {
    for (b, out) in outgoing.iter().enumerate() {
        let mut acc: BTreeMap<(usize, i64), bool> = BTreeMap::new();
        for &(c, t1) in out {
            for &(e, t2) in &outgoing[c] {
                let slot = acc.entry((e, t1 + t2)).or_insert(false);
                *slot = !*slot;
            }
        }
        if let Some((&(e, _), _)) = acc.iter().find(|(_, &odd)| odd) {
            return Err(ComplexError::BoundarySquare {
                from: generators[b].label.clone(),
                to: generators[e].label.clone(),
            });
        }
    }
    Ok(())
}

fn reduce_columns(columns: impl Iterator<Item = Vec<u32>>) -> Reduction {
    let mut pivots: HashMap<u32, Vec<u32>> = HashMap::new();
    for mut col in columns {
        while let Some(&top) = col.last() {
            match pivots.get(&top) {
                Some(p) => col = sorted_xor(&col, p),
                None => {
                    pivots.insert(top, col);
                    break;
                }
            }
        }
    }
    Reduction { pivots }
}

fn sorted_xor(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl<S: Scalar> FilteredComplex<S> {
    pub fn kind(&self) -> ComplexKind {
        self.data.kind
    }

    pub fn window(&self) -> Window {
        self.data.window
    }

    pub fn period(&self) -> &Period<S> {
        &self.data.period
    }

    pub fn base_generators(&self) -> &[FloerGenerator<S>] {
        &self.data.base
    }

    pub fn entries(&self) -> &[DiffEntry] {
        &self.data.entries
    }

    pub fn base_len(&self) -> usize {
        self.data.base.len()
    }

    /// Number of materialised generators.
    pub fn len(&self) -> usize {
        self.data.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Offset added to every action by [`shift_reference`].
    pub fn action_offset(&self) -> &S {
        &self.action_offset
    }

    /// Energy offset of the cappings after [`change_basepoint`].
    pub fn capping_offset(&self) -> &S {
        &self.capping_offset
    }

    pub fn index_of(&self, base: usize, t: i64) -> Option<usize> {
        let w = self.data.window;
        (base < self.base_len() && w.contains(t)).then(|| (t - w.lo) as usize * self.base_len() + base)
    }

    /// `(base index, T-power)` of a materialised generator.
    pub fn split(&self, i: usize) -> (usize, i64) {
        let n = self.base_len();
        (i % n, self.data.window.lo + (i / n) as i64)
    }

    pub fn find(&self, label: &str, t: i64) -> Option<usize> {
        let b = self.data.base.iter().position(|g| g.label == label)?;
        self.index_of(b, t)
    }

    pub fn action(&self, i: usize) -> S {
        let (b, t) = self.split(i);
        self.data.base[b].action.clone() - S::from_int(t) * self.data.period.action.clone()
            + self.action_offset.clone()
    }

    pub fn grade(&self, i: usize) -> Option<i64> {
        let (b, t) = self.split(i);
        Some(self.data.base[b].grade? - t * self.data.period.grade)
    }

    pub fn label(&self, i: usize) -> String {
        let (b, t) = self.split(i);
        let l = &self.data.base[b].label;
        match t {
            0 => l.clone(),
            _ => format!("{l}·T^{t}"),
        }
    }

    /// The materialised generator, with its capping transported along `T^t`
    /// and re-anchored if the basepoint was changed.
    pub fn generator(&self, i: usize) -> FloerGenerator<S> {
        let (b, t) = self.split(i);
        let base = &self.data.base[b];
        let mut capping = base
            .capping
            .plus_diff(&self.data.period.capping.scale(t))
            .unwrap_or_else(|_| base.capping.clone());
        if let Some(anchor) = &self.anchor {
            capping = capping.with_anchor(Anchor::new(format!("{}@{}", base.capping.anchor, anchor)));
        }
        FloerGenerator {
            label: self.label(i),
            payload: base.payload.clone(),
            capping,
            action: self.action(i),
            grade: self.grade(i),
        }
    }

    /// `∂` of a single materialised generator.
    pub fn boundary_of(&self, i: usize) -> Chain {
        let (b, t) = self.split(i);
        let targets = self.data.outgoing[b]
            .iter()
            .filter_map(|&(to, dt)| self.index_of(to, t + dt))
            .collect();
        chain_from_mod2(targets)
    }

    pub fn boundary(&self, chain: &[usize]) -> Chain {
        chain_from_mod2(chain.iter().flat_map(|&i| self.boundary_of(i)).collect())
    }

    pub fn is_cycle(&self, chain: &[usize]) -> bool {
        self.boundary(chain).is_empty()
    }

    /// Maximal action over the chain; `None` for the zero chain.
    pub fn max_action(&self, chain: &[usize]) -> Option<S> {
        let top = chain.iter().max_by_key(|&&i| self.data.position[i])?;
        Some(self.action(*top))
    }

    /// Applies `T^t`, dropping terms that leave the window.
    pub fn translate(&self, chain: &[usize], t: i64) -> Chain {
        let mut out: Chain = chain
            .iter()
            .filter_map(|&i| {
                let (b, n) = self.split(i);
                self.index_of(b, n + t)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Generators of action at most `level`.
    pub fn sublevel(&self, level: &S) -> Chain {
        (0..self.len()).filter(|&i| self.action(i) <= *level).collect()
    }

    /// Whether the span of generators with action `<= level` is closed
    /// under `∂`; returns the first offending pair otherwise.
    pub fn check_sublevel(&self, level: &S) -> Result<(), (usize, usize)> {
        for i in self.sublevel(level) {
            if let Some(&j) = self.boundary_of(i).iter().find(|&&j| self.action(j) > *level) {
                return Err((i, j));
            }
        }
        Ok(())
    }

    /// [`check_sublevel`](Self::check_sublevel) for many levels, visiting
    /// every materialised differential entry once.
    pub fn check_sublevels(&self, levels: &[S]) -> Vec<Result<(), (usize, usize)>> {
        let mut out = vec![Ok(()); levels.len()];
        for i in 0..self.len() {
            let a = self.action(i);
            for j in self.boundary_of(i) {
                let b = self.action(j);
                for (slot, level) in out.iter_mut().zip(levels) {
                    if slot.is_ok() && a <= *level && b > *level {
                        *slot = Err((i, j));
                    }
                }
            }
        }
        out
    }

    fn reduction(&self, grade: Option<i64>) -> Arc<Reduction> {
        let mut cache = self.cache.lock().expect("reduction cache poisoned");
        if let Some(r) = cache.get(&grade) {
            return r.clone();
        }
        let pos = &self.data.position;
        let mut sources: Vec<u32> = (0..self.len() as u32)
            .filter(|&i| grade.is_none() || self.grade(i as usize) == grade)
            .map(|i| pos[i as usize])
            .collect();
        sources.sort_unstable();
        let at = &self.data.at_position;
        let columns = sources.into_iter().map(|p| {
            let mut col: Vec<u32> = self.boundary_of(at[p as usize] as usize).iter().map(|&j| pos[j]).collect();
            col.sort_unstable();
            col
        });
        let r = Arc::new(reduce_columns(columns));
        cache.insert(grade, r.clone());
        r
    }

    /// Grade whose boundaries can hit `chain`, if the chain is homogeneous.
    fn boundary_grade(&self, chain: &[usize]) -> Option<i64> {
        let g = self.grade(*chain.first()?)?;
        chain.iter().all(|&i| self.grade(i) == Some(g)).then_some(g + 1)
    }

    /// Minimal-top representative of `chain + im ∂`.
    pub fn reduce_chain(&self, chain: &[usize]) -> Chain {
        let red = self.reduction(self.boundary_grade(chain));
        let pos = &self.data.position;
        let mut x: Vec<u32> = chain.iter().map(|&i| pos[i]).collect();
        x.sort_unstable();
        let mut cursor = x.len();
        while cursor > 0 {
            let top = x[cursor - 1];
            match red.pivots.get(&top) {
                Some(p) => {
                    x = sorted_xor(&x, p);
                    cursor = x.partition_point(|&q| q < top);
                }
                None => cursor -= 1,
            }
        }
        let mut out: Chain = x.into_iter().map(|p| self.data.at_position[p as usize] as usize).collect();
        out.sort_unstable();
        out
    }

    pub fn is_boundary(&self, chain: &[usize]) -> bool {
        self.reduce_chain(chain).is_empty()
    }

    /// Whether two cycles are homologous.
    pub fn homologous(&self, a: &[usize], b: &[usize]) -> bool {
        self.is_boundary(&chain_add(a, b))
    }

    /// Rank of `∂` on the window.
    pub fn boundary_rank(&self) -> usize {
        self.reduction(None).pivots.len()
    }

    pub fn homology_rank(&self) -> usize {
        self.len() - 2 * self.boundary_rank()
    }

    /// Ranks and representatives, by column reduction with tracked
    /// coordinates.
    pub fn homology(&self) -> HomologyReport {
        let pos = &self.data.position;
        let at = &self.data.at_position;
        let mut pivots: HashMap<u32, (Vec<u32>, Vec<u32>)> = HashMap::new();
        let mut cycles: Vec<(u32, Vec<u32>)> = Vec::new();
        for p in 0..self.len() as u32 {
            let mut col: Vec<u32> = self.boundary_of(at[p as usize] as usize).iter().map(|&j| pos[j]).collect();
            col.sort_unstable();
            let mut v = vec![p];
            loop {
                let Some(&top) = col.last() else {
                    cycles.push((p, v));
                    break;
                };
                match pivots.get(&top) {
                    Some((r, w)) => {
                        col = sorted_xor(&col, r);
                        v = sorted_xor(&v, w);
                    }
                    None => {
                        pivots.insert(top, (col, v));
                        break;
                    }
                }
            }
        }
        let representatives: Vec<Chain> = cycles
            .into_iter()
            .filter(|(p, _)| !pivots.contains_key(p))
            .map(|(_, v)| {
                let mut c: Chain = v.into_iter().map(|q| at[q as usize] as usize).collect();
                c.sort_unstable();
                c
            })
            .collect();
        let periods = self.data.window.len();
        HomologyReport {
            rank: representatives.len(),
            periods,
            rank_per_period: representatives.len() / periods,
            representatives,
        }
    }

    /// Same data over another window.
    pub fn with_window(&self, window: Window) -> Result<FilteredComplex<S>, ComplexError> {
        let d = &self.data;
        let mut c = build_complex(
            d.kind,
            d.base.clone(),
            d.entries.clone(),
            d.period.clone(),
            window,
        )?;
        c.action_offset = self.action_offset.clone();
        c.capping_offset = self.capping_offset.clone();
        c.anchor = self.anchor.clone();
        Ok(c)
    }

    /// Exports base generators, entries and window as a JSON value with
    /// sorted keys and scalars as strings.
    pub fn to_json(&self) -> Value {
        let d = &self.data;
        let gens: Vec<Value> = d
            .base
            .iter()
            .enumerate()
            .map(|(i, g)| {
                json!({
                    "id": i,
                    "label": g.label,
                    "action": (g.action.clone() + self.action_offset.clone()).to_string(),
                    "grade": g.grade,
                    "capping": serde_json::to_value(&g.capping).expect("classes serialise"),
                    "payload": serde_json::to_value(&g.payload).expect("payloads serialise"),
                })
            })
            .collect();
        let entries: Vec<Value> = d.entries.iter().map(|e| json!([e.from, e.to, e.t])).collect();
        json!({
            "kind": d.kind,
            "period": {
                "action": d.period.action.to_string(),
                "capping": serde_json::to_value(&d.period.capping).expect("diffs serialise"),
                "grade": d.period.grade,
            },
            "window": [d.window.lo, d.window.hi],
            "generators": gens,
            "differential": entries,
            "materialized": self.len(),
        })
    }

    /// Rebuilds (and revalidates) a complex from [`to_json`] output.
    pub fn from_json(v: &Value) -> Result<FilteredComplex<S>, ComplexError> {
        let bad = |m: &str| ComplexError::Malformed(m.to_string());
        let scalar = |v: &Value, what: &str| -> Result<S, ComplexError> {
            v.as_str().and_then(S::parse_scalar).ok_or_else(|| bad(what))
        };
        let kind: ComplexKind = serde_json::from_value(v["kind"].clone()).map_err(|e| bad(&e.to_string()))?;
        let period = Period {
            action: scalar(&v["period"]["action"], "period action")?,
            capping: serde_json::from_value(v["period"]["capping"].clone()).map_err(|e| bad(&e.to_string()))?,
            grade: v["period"]["grade"].as_i64().ok_or_else(|| bad("period grade"))?,
        };
        let w = v["window"].as_array().ok_or_else(|| bad("window"))?;
        let window = match w.as_slice() {
            [lo, hi] => Window::new(lo.as_i64().ok_or_else(|| bad("window"))?, hi.as_i64().ok_or_else(|| bad("window"))?),
            _ => return Err(bad("window")),
        };
        let mut generators = Vec::new();
        for g in v["generators"].as_array().ok_or_else(|| bad("generators"))? {
            generators.push(FloerGenerator {
                label: g["label"].as_str().ok_or_else(|| bad("label"))?.to_string(),
                payload: serde_json::from_value(g["payload"].clone()).map_err(|e| bad(&e.to_string()))?,
                capping: serde_json::from_value(g["capping"].clone()).map_err(|e| bad(&e.to_string()))?,
                action: scalar(&g["action"], "action")?,
                grade: g["grade"].as_i64(),
            });
        }
        let mut entries = Vec::new();
        for e in v["differential"].as_array().ok_or_else(|| bad("differential"))? {
            let t = e.as_array().ok_or_else(|| bad("entry"))?;
            let get = |i: usize| t.get(i).and_then(Value::as_i64).ok_or_else(|| bad("entry"));
            entries.push(DiffEntry {
                from: get(0)? as usize,
                to: get(1)? as usize,
                t: get(2)?,
            });
        }
        build_complex(kind, generators, entries, period, window)
    }
}

/// Homology of `complex` over `window`.
pub fn homology<S: Scalar>(complex: &FilteredComplex<S>, window: Window) -> Result<HomologyReport, ComplexError> {
    if window == complex.window() {
        return Ok(complex.homology());
    }
    Ok(complex.with_window(window)?.homology())
}

/// `min` over representatives of the class of `cycle` of the maximal action.
pub fn spectral_invariant<S: Scalar>(complex: &FilteredComplex<S>, cycle: &[usize]) -> Result<S, ComplexError> {
    if !complex.is_cycle(cycle) {
        return Err(ComplexError::NotACycle);
    }
    let reduced = complex.reduce_chain(cycle);
    complex.max_action(&reduced).ok_or(ComplexError::ZeroClass)
}

/// Shifts every action by the energy of a reference class.
pub fn shift_reference<S: Scalar>(complex: &FilteredComplex<S>, energy: &S) -> FilteredComplex<S> {
    let mut out = complex.clone();
    out.action_offset = out.action_offset.clone() + energy.clone();
    out
}

/// Moves the HF basepoint from `x` to `x'`: cappings are re-anchored and
/// their energy shifts by `H(x') - H(x)`, while actions are unchanged.
pub fn change_basepoint<S: Scalar>(
    complex: &FilteredComplex<S>,
    h_old: &S,
    h_new: &S,
    new_label: &str,
) -> Result<FilteredComplex<S>, ComplexError> {
    if complex.kind() != ComplexKind::Hf {
        return Err(ComplexError::NotHf);
    }
    let mut out = complex.clone();
    out.capping_offset = out.capping_offset.clone() + h_new.clone() - h_old.clone();
    out.anchor = Some(Anchor::new(new_label));
    Ok(out)
}
