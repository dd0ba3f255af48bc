//! Gluing patterns: polygons whose sides carry signed arc labels, glued in
//! pairs to give a closed surface carrying a pair of curves.
//!
//! Arc ids `1..=i` are the α sub-arcs and `i+1..=2i` the β sub-arcs, both in
//! order along their curve. A positive id is an arc read along the boundary
//! in its own direction, a negative id the reverse.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crossing::{self, CrossingSequence};
use crate::filling::{Curve, Direction, FillingPermutation};

/// Largest number of polygon sides accepted by [`search_patterns`].
pub const SEARCH_MAX_SIDES: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("invalid gluing pattern: {0}")]
    Invalid(PatternFailure),
    #[error("search size {sides} exceeds the limit of {max} polygon sides")]
    SearchTooLarge { sides: u32, max: u32 },
    #[error("no gluing pattern of genus {genus} with {i} intersections: need i >= 2g-1")]
    BelowMinimum { genus: u32, i: u32 },
    #[error("genus must be at least 1")]
    InvalidGenus,
    #[error("non-orientable or malformed: Euler characteristic {chi} is odd")]
    NonOrientable { chi: i64 },
}

/// Why a pattern is not a valid minimal-position gluing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PatternFailure {
    NoArcs,
    EmptyPolygon { polygon: usize },
    OddPolygon { polygon: usize, len: usize },
    ArcIdOutOfRange { id: i32 },
    ArcMultiplicity { arc: u32, positive: usize, negative: usize },
    CornerOrbit { size: usize },
    NotTransverse { vertex: usize },
    AlphaNotSingleCurve,
    BetaNotSingleCurve,
    Disconnected { components: usize },
}

impl std::fmt::Display for PatternFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PatternFailure::NoArcs => write!(f, "pattern has no arcs"),
            PatternFailure::EmptyPolygon { polygon } => write!(f, "polygon {polygon} is empty"),
            PatternFailure::OddPolygon { polygon, len } => write!(f, "polygon {polygon} has odd length {len}"),
            PatternFailure::ArcIdOutOfRange { id } => write!(f, "arc id {id} out of range"),
            PatternFailure::ArcMultiplicity { arc, positive, negative } => {
                write!(f, "arc {arc} appears {positive} times positively and {negative} times negatively")
            }
            PatternFailure::CornerOrbit { size } => {
                write!(f, "a vertex has {size} corners instead of 4")
            }
            PatternFailure::NotTransverse { vertex } => {
                write!(f, "vertex {vertex} is not a transverse crossing of α and β")
            }
            PatternFailure::AlphaNotSingleCurve => write!(f, "α arcs do not close up into one curve"),
            PatternFailure::BetaNotSingleCurve => write!(f, "β arcs do not close up into one curve"),
            PatternFailure::Disconnected { components } => {
                write!(f, "glued surface has {components} components")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GluingPattern {
    pub i: u32,
    pub polygons: Vec<Vec<i32>>,
}

/// Flattened slots of a pattern with the corner map `M(e) = inv(succ(e))`.
pub(crate) struct Slots {
    pub labels: Vec<i32>,
    pub polygon_of: Vec<usize>,
    pub succ: Vec<usize>,
    pub partner: Vec<usize>,
}

impl Slots {
    pub fn corner(&self, e: usize) -> usize {
        self.partner[self.succ[e]]
    }

    /// Orbits of the corner map, each listed from its least slot.
    pub fn corner_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.labels.len()];
        let mut out = Vec::new();
        for s in 0..self.labels.len() {
            if seen[s] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut e = s;
            while !seen[e] {
                seen[e] = true;
                orbit.push(e);
                e = self.corner(e);
            }
            out.push(orbit);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Port {
    In,
    Out,
}

impl GluingPattern {
    pub fn new(i: u32, polygons: Vec<Vec<i32>>) -> Self {
        GluingPattern { i, polygons }
    }

    pub fn num_sides(&self) -> usize {
        self.polygons.iter().map(Vec::len).sum()
    }

    pub fn curve_of(&self, id: i32) -> Curve {
        if id.unsigned_abs() <= self.i {
            Curve::Alpha
        } else {
            Curve::Beta
        }
    }

    pub(crate) fn slots(&self) -> Result<Slots, PatternFailure> {
        if self.i == 0 {
            return Err(PatternFailure::NoArcs);
        }
        let arcs = 2 * self.i as usize;
        let mut labels = Vec::new();
        let mut polygon_of = Vec::new();
        let mut succ = Vec::new();
        for (p, poly) in self.polygons.iter().enumerate() {
            if poly.is_empty() {
                return Err(PatternFailure::EmptyPolygon { polygon: p });
            }
            let base = labels.len();
            for (t, &id) in poly.iter().enumerate() {
                if id == 0 || id.unsigned_abs() as usize > arcs {
                    return Err(PatternFailure::ArcIdOutOfRange { id });
                }
                labels.push(id);
                polygon_of.push(p);
                succ.push(base + (t + 1) % poly.len());
            }
        }
        let mut pos = vec![Vec::new(); arcs + 1];
        let mut neg = vec![Vec::new(); arcs + 1];
        for (s, &id) in labels.iter().enumerate() {
            let a = id.unsigned_abs() as usize;
            if id > 0 {
                pos[a].push(s)
            } else {
                neg[a].push(s)
            }
        }
        let mut partner = vec![0; labels.len()];
        for a in 1..=arcs {
            if pos[a].len() != 1 || neg[a].len() != 1 {
                return Err(PatternFailure::ArcMultiplicity {
                    arc: a as u32,
                    positive: pos[a].len(),
                    negative: neg[a].len(),
                });
            }
            partner[pos[a][0]] = neg[a][0];
            partner[neg[a][0]] = pos[a][0];
        }
        Ok(Slots { labels, polygon_of, succ, partner })
    }

    /// Runs every structural check and collects the failures.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let slots = match self.slots() {
            Ok(s) => s,
            Err(f) => {
                return ValidationReport { failures: vec![f] };
            }
        };
        for (polygon, poly) in self.polygons.iter().enumerate() {
            if poly.len() % 2 == 1 {
                failures.push(PatternFailure::OddPolygon { polygon, len: poly.len() });
            }
        }
        let orbits = slots.corner_orbits();
        for o in &orbits {
            if o.len() != 4 {
                failures.push(PatternFailure::CornerOrbit { size: o.len() });
            }
        }
        if !failures.is_empty() {
            failures.dedup();
            return ValidationReport { failures };
        }

        // The end of slot e is the terminal point of its arc when e is positive,
        // the initial point otherwise.
        let port = |e: usize| if slots.labels[e] > 0 { Port::In } else { Port::Out };
        let curve = |e: usize| self.curve_of(slots.labels[e]);
        let arc = |e: usize| slots.labels[e].unsigned_abs() as usize;
        let arcs = 2 * self.i as usize;
        // successor of each arc along its curve, via the vertices
        let mut next_arc = vec![0usize; arcs + 1];
        let mut transverse = true;
        for (v, o) in orbits.iter().enumerate() {
            let ok = curve(o[0]) != curve(o[1])
                && curve(o[0]) == curve(o[2])
                && curve(o[1]) == curve(o[3])
                && port(o[0]) != port(o[2])
                && port(o[1]) != port(o[3]);
            if !ok {
                failures.push(PatternFailure::NotTransverse { vertex: v });
                transverse = false;
                continue;
            }
            for pair in [(o[0], o[2]), (o[1], o[3])] {
                let (inc, out) = if port(pair.0) == Port::In { pair } else { (pair.1, pair.0) };
                next_arc[arc(inc)] = arc(out);
            }
        }
        if transverse {
            let i = self.i as usize;
            let closes = |start: usize| {
                let mut a = start;
                let mut len = 0;
                loop {
                    a = next_arc[a];
                    len += 1;
                    if a == start || len > i {
                        break;
                    }
                }
                len == i
            };
            if !closes(1) {
                failures.push(PatternFailure::AlphaNotSingleCurve);
            }
            if !closes(i + 1) {
                failures.push(PatternFailure::BetaNotSingleCurve);
            }
        }

        let components = count_components(self.polygons.len(), &slots);
        if components != 1 {
            failures.push(PatternFailure::Disconnected { components });
        }
        ValidationReport { failures }
    }

    /// Genus of the glued surface, `(2 - (V - E + F)) / 2`.
    pub fn euler_genus(&self) -> Result<u32, PatternError> {
        self.validate().into_result()?;
        let slots = self.slots().map_err(PatternError::Invalid)?;
        let v = slots.corner_orbits().len() as i64;
        let e = 2 * self.i as i64;
        let f = self.polygons.len() as i64;
        let chi = v - e + f;
        if chi % 2 != 0 || chi > 2 {
            return Err(PatternError::NonOrientable { chi });
        }
        Ok(((2 - chi) / 2) as u32)
    }

    /// Number of arcs whose two sides lie on the same polygon.
    pub fn t1(&self) -> Result<usize, PatternError> {
        self.validate().into_result()?;
        let slots = self.slots().map_err(PatternError::Invalid)?;
        Ok((0..slots.labels.len())
            .filter(|&s| slots.labels[s] > 0 && slots.polygon_of[s] == slots.polygon_of[slots.partner[s]])
            .count())
    }

    /// Polygon pattern of a filling permutation: one polygon read along its
    /// boundary word.
    pub fn from_filling(fp: &FillingPermutation) -> GluingPattern {
        let ctx = fp.ctx();
        let i = ctx.i_min();
        let polygon = fp
            .boundary_word()
            .into_iter()
            .map(|s| {
                let info = ctx.symbol_info(s).unwrap();
                let id = match info.curve {
                    Curve::Alpha => info.arc_index,
                    Curve::Beta => i + info.arc_index,
                } as i32;
                match info.direction {
                    Direction::Forward => id,
                    Direction::Inverse => -id,
                }
            })
            .collect();
        GluingPattern { i, polygons: vec![polygon] }
    }

    /// Least form under rotation of each polygon and reordering of polygons.
    pub fn normalized(&self) -> GluingPattern {
        let mut polygons: Vec<Vec<i32>> = self.polygons.iter().map(|p| min_rotation(p)).collect();
        polygons.sort();
        GluingPattern { i: self.i, polygons }
    }

    /// Least form over relabelings that rotate or reverse either curve or swap
    /// the two curves.
    pub fn canonical_form(&self) -> GluingPattern {
        let i = self.i as i32;
        let mut best: Option<GluingPattern> = None;
        for swap in [false, true] {
            for rev_a in [false, true] {
                for rev_b in [false, true] {
                    for ra in 0..i {
                        for rb in 0..i {
                            let relabel = |id: i32| -> i32 {
                                let sign = id.signum();
                                let a = id.abs();
                                let (is_alpha, k) = if a <= i { (true, a - 1) } else { (false, a - i - 1) };
                                let (rev, r) = if is_alpha { (rev_a, ra) } else { (rev_b, rb) };
                                let (k, sign) = if rev { (i - 1 - k, -sign) } else { (k, sign) };
                                let k = (k + r) % i;
                                let to_alpha = is_alpha != swap;
                                sign * if to_alpha { k + 1 } else { i + k + 1 }
                            };
                            let p = GluingPattern {
                                i: self.i,
                                polygons: self
                                    .polygons
                                    .iter()
                                    .map(|poly| poly.iter().map(|&x| relabel(x)).collect())
                                    .collect(),
                            }
                            .normalized();
                            if best.as_ref().is_none_or(|b| p < *b) {
                                best = Some(p);
                            }
                        }
                    }
                }
            }
        }
        best.expect("at least one relabeling")
    }
}

fn min_rotation(p: &[i32]) -> Vec<i32> {
    (0..p.len()).map(|r| p[r..].iter().chain(&p[..r]).copied().collect::<Vec<_>>()).min().unwrap_or_default()
}

fn count_components(polygons: usize, slots: &Slots) -> usize {
    let mut parent: Vec<usize> = (0..polygons).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for s in 0..slots.labels.len() {
        let a = find(&mut parent, slots.polygon_of[s]);
        let b = find(&mut parent, slots.polygon_of[slots.partner[s]]);
        parent[a.max(b)] = a.min(b);
    }
    (0..polygons).filter(|&p| find(&mut parent, p) == p).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<PatternFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<(), PatternError> {
        match self.failures.into_iter().next() {
            None => Ok(()),
            Some(f) => Err(PatternError::Invalid(f)),
        }
    }
}

/// Up to `limit` gluing patterns of the given genus and intersection number,
/// one per class under curve relabeling, in canonical-form order.
///
/// Every pairing of `i` transverse crossings is generated from its crossing
/// sequence. Patterns containing a bigon are skipped: a bigon means the
/// curves are not in minimal position.
pub fn search_patterns(genus: u32, i: u32, limit: usize) -> Result<Vec<GluingPattern>, PatternError> {
    if genus == 0 {
        return Err(PatternError::InvalidGenus);
    }
    if 4 * i > SEARCH_MAX_SIDES {
        return Err(PatternError::SearchTooLarge { sides: 4 * i, max: SEARCH_MAX_SIDES });
    }
    if i < 2 * genus - 1 {
        return Err(PatternError::BelowMinimum { genus, i });
    }
    let faces_wanted = (i + 2) as i64 - 2 * genus as i64;
    if faces_wanted < 1 {
        return Ok(Vec::new());
    }
    let m = i as usize;
    let found: BTreeSet<GluingPattern> = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut local = BTreeSet::new();
            let mut rest: Vec<usize> = (0..m).filter(|&v| v != first).collect();
            loop {
                let mut order = Vec::with_capacity(m);
                order.push(first);
                order.extend_from_slice(&rest);
                for mask in 0..(1u32 << m) {
                    let cs = CrossingSequence::from_mask(order.clone(), mask);
                    let faces = cs.faces();
                    if faces.len() as i64 != faces_wanted || faces.iter().any(|f| f.len() == 2) {
                        continue;
                    }
                    local.insert(cs.faces_to_pattern(faces).canonical_form());
                }
                if !crossing::next_permutation(&mut rest) {
                    break;
                }
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(found.into_iter().take(limit).collect())
}

/// Distinct corner orbits of a pattern keyed by least slot; exposed for tests
/// and diagrams.
pub fn vertex_count(p: &GluingPattern) -> Result<usize, PatternError> {
    let slots = p.slots().map_err(PatternError::Invalid)?;
    Ok(slots.corner_orbits().len())
}

/// Histogram of polygon sizes.
pub fn polygon_sizes(p: &GluingPattern) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for poly in &p.polygons {
        *h.entry(poly.len()).or_insert(0) += 1;
    }
    h
}
