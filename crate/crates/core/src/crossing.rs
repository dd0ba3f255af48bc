//! Crossing sequences: a pair of simple closed curves meeting transversally
//! at `m` points, recorded by the order in which β visits the points met by α
//! and the sign of each crossing.
//!
//! Vertex `v_k` (0-based) is the start of α arc `k`, which runs to `v_{k+1}`.
//! β arc `j` runs from `beta_order[j]` to `beta_order[j+1]`. At a positive
//! crossing the counter-clockwise rotation is `α out, β out, α in, β in`; at
//! a negative one `α out, β in, α in, β out`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::filling::{FillingError, FillingFailure, FillingPermutation, GenusContext};
use crate::gluing::GluingPattern;
use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossingSequence {
    pub beta_order: Vec<usize>,
    pub signs: Vec<Sign>,
}

impl CrossingSequence {
    pub fn new(beta_order: Vec<usize>, signs: Vec<Sign>) -> Option<Self> {
        let m = signs.len();
        let mut seen = vec![false; m];
        if beta_order.len() != m || m == 0 {
            return None;
        }
        for &v in &beta_order {
            if v >= m || std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        Some(CrossingSequence { beta_order, signs })
    }

    /// Vertex `v` is negative iff bit `v` of `mask` is set.
    pub(crate) fn from_mask(beta_order: Vec<usize>, mask: u32) -> Self {
        let signs =
            (0..beta_order.len()).map(|v| if mask >> v & 1 == 1 { Sign::Negative } else { Sign::Positive }).collect();
        CrossingSequence { beta_order, signs }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Position of each vertex along β.
    pub fn beta_positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        for (j, &v) in self.beta_order.iter().enumerate() {
            pos[v] = j;
        }
        pos
    }

    fn rotation(&self) -> Vec<usize> {
        let m = self.len();
        let he = |curve: usize, arc: usize, end: usize| (curve * m + arc) * 2 + end;
        let posb = self.beta_positions();
        let mut rot = vec![0; 4 * m];
        for (v, &j) in posb.iter().enumerate() {
            let aout = he(0, v, 0);
            let ain = he(0, (v + m - 1) % m, 1);
            let bout = he(1, j, 0);
            let bin = he(1, (j + m - 1) % m, 1);
            let ring = match self.signs[v] {
                Sign::Positive => [aout, bout, ain, bin],
                Sign::Negative => [aout, bin, ain, bout],
            };
            for t in 0..4 {
                rot[ring[t]] = ring[(t + 1) % 4];
            }
        }
        rot
    }

    /// Complementary faces as signed arc words, in the labeling of
    /// [`GluingPattern`].
    pub fn faces(&self) -> Vec<Vec<i32>> {
        let m = self.len();
        let rot = self.rotation();
        let label = |h: usize| -> i32 {
            let id = (h / 2 + 1) as i32;
            if h.is_multiple_of(2) {
                id
            } else {
                -id
            }
        };
        let mut used = vec![false; 4 * m];
        let mut faces = Vec::new();
        for start in 0..4 * m {
            if used[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = start;
            while !used[cur] {
                used[cur] = true;
                face.push(label(cur));
                cur = rot[cur ^ 1];
            }
            faces.push(face);
        }
        faces
    }

    pub fn to_pattern(&self) -> GluingPattern {
        self.faces_to_pattern(self.faces())
    }

    pub(crate) fn faces_to_pattern(&self, faces: Vec<Vec<i32>>) -> GluingPattern {
        GluingPattern::new(self.len() as u32, faces)
    }

    /// The filling permutation of a one-faced configuration.
    pub fn to_filling(&self) -> Result<FillingPermutation, FillingError> {
        let m = self.len() as u32;
        if m.is_multiple_of(2) {
            return Err(FillingError::InvalidGenus(0));
        }
        let ctx = GenusContext::new(m.div_ceil(2))?;
        let faces = self.faces();
        let word: Vec<u32> = faces[0]
            .iter()
            .map(|&id| {
                let a = id.unsigned_abs();
                let base = if a <= m { 2 * a - 1 } else { 2 * (a - m) };
                if id > 0 {
                    base
                } else {
                    base + 2 * m
                }
            })
            .collect();
        let n = ctx.n() as usize;
        if faces.len() != 1 {
            return Err(FillingError::NotFilling(FillingFailure::NotNCycle));
        }
        let mut images = vec![0u32; n];
        for t in 0..n {
            images[(word[t] - 1) as usize] = word[(t + 1) % n] - 1;
        }
        FillingPermutation::new(ctx, Permutation::from_zero_based(images)?)
    }

    /// Recovers the crossing sequence from a pattern whose arcs are numbered in
    /// order along each curve. `None` when the numbering is not consecutive or
    /// the pattern is not a transverse pair.
    pub fn from_pattern(p: &GluingPattern) -> Option<Self> {
        let slots = p.slots().ok()?;
        let m = p.i as usize;
        let orbits = slots.corner_orbits();
        if orbits.iter().any(|o| o.len() != 4) {
            return None;
        }
        let mut orbit_of = vec![0; slots.labels.len()];
        for (k, o) in orbits.iter().enumerate() {
            for &s in o {
                orbit_of[s] = k;
            }
        }
        let slot_of = |id: i32| slots.labels.iter().position(|&x| x == id).unwrap();
        let initial = |id: i32| orbit_of[slot_of(-id)];
        let terminal = |id: i32| orbit_of[slot_of(id)];

        let mut index_of = vec![usize::MAX; orbits.len()];
        for k in 0..m {
            let a = k as i32 + 1;
            let next = (k + 1) % m + 1;
            if terminal(a) != initial(next as i32) {
                return None;
            }
            let o = initial(a);
            if index_of[o] != usize::MAX {
                return None;
            }
            index_of[o] = k;
        }
        let mut beta_order = Vec::with_capacity(m);
        for j in 0..m {
            let b = (m + j + 1) as i32;
            let next = (m + (j + 1) % m + 1) as i32;
            if terminal(b) != initial(next) {
                return None;
            }
            let v = index_of[initial(b)];
            if v == usize::MAX {
                return None;
            }
            beta_order.push(v);
        }
        let mut signs = Vec::with_capacity(m);
        for k in 0..m {
            let s = slot_of(-(k as i32 + 1));
            let next = slots.labels[slots.corner(s)];
            if next.unsigned_abs() as usize <= m {
                return None;
            }
            signs.push(if next < 0 { Sign::Positive } else { Sign::Negative });
        }
        CrossingSequence::new(beta_order, signs)
    }

    pub fn from_filling(fp: &FillingPermutation) -> Self {
        CrossingSequence::from_pattern(&GluingPattern::from_filling(fp))
            .expect("a filling permutation has consecutive curve arcs")
    }

    /// The same configuration with the roles of α and β exchanged. The new α
    /// starts at the start of the old β, and the new β at the old `v_0`.
    pub fn swapped(&self) -> Self {
        let posb = self.beta_positions();
        let mut signs = vec![Sign::Positive; self.len()];
        for v in 0..self.len() {
            signs[posb[v]] = self.signs[v].negate();
        }
        CrossingSequence { beta_order: posb, signs }
    }

    /// Replaces vertex `k` by five vertices arranged along α and β as the
    /// template dictates. When `v_k` is a negative crossing the template is
    /// mirrored along β.
    pub fn splice(&self, k: usize, beta_block: &[usize], block_signs: &[Sign]) -> Self {
        let w = beta_block.len();
        assert_eq!(w, block_signs.len());
        let shift = |v: usize| if v < k { v } else { v + w - 1 };
        let flip = self.signs[k] == Sign::Negative;
        let mut beta_order = Vec::with_capacity(self.len() + w - 1);
        for &v in &self.beta_order {
            if v == k {
                let block = beta_block.iter().map(|&t| k + t);
                if flip {
                    beta_order.extend(block.rev());
                } else {
                    beta_order.extend(block);
                }
            } else {
                beta_order.push(shift(v));
            }
        }
        let mut signs = Vec::with_capacity(self.len() + w - 1);
        signs.extend_from_slice(&self.signs[..k]);
        signs.extend(block_signs.iter().map(|&s| if flip { s.negate() } else { s }));
        signs.extend_from_slice(&self.signs[k + 1..]);
        CrossingSequence { beta_order, signs }
    }
}

/// Advances `v` to the next permutation in lexicographic order; false after
/// the last one.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every crossing sequence on `m` points, in order of β order then sign mask.
pub fn all_configurations(m: usize) -> impl Iterator<Item = CrossingSequence> {
    assert!(m > 0 && m < 32);
    let mut order: Vec<usize> = (0..m).collect();
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = order.clone();
        done = !next_permutation(&mut order);
        Some(current)
    })
    .flat_map(move |o| (0..1u32 << m).map(move |mask| CrossingSequence::from_mask(o.clone(), mask)))
}

/// Filling permutations of every one-faced configuration on `2g-1` points.
pub fn one_faced_fillings(ctx: &GenusContext) -> BTreeSet<Permutation> {
    all_configurations(ctx.i_min() as usize)
        .filter(|cs| cs.faces().len() == 1)
        .map(|cs| cs.to_filling().expect("one-faced configurations are filling").into_perm())
        .collect()
}
