//! Z-pieces: splicing a genus-2 piece carrying five crossings into a filling
//! pair at one crossing, raising the genus by two.
//!
//! A template lists the five crossings of the piece in their order along the
//! a-arc (`1..=5`), the order in which the b-arc meets them, and their signs.
//! Splicing at `v_k` replaces that crossing by the five, inserted in order
//! along α; vertices after `v_k` are renumbered `v_{j+4}`.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::crossing::{next_permutation, CrossingSequence, Sign};
use crate::filling::{FillingError, FillingPermutation};
use crate::perm::Permutation;

/// Number of crossings inside a Z-piece.
pub const PIECE_POINTS: usize = 5;

#[derive(Debug, Error)]
pub enum ZPieceError {
    #[error("vertex {k} out of range 1..={max}")]
    VertexOutOfRange { k: u32, max: u32 },
    #[error("template derivation failed: no candidate passes every check")]
    DerivationFailed,
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("splice produced an invalid filling permutation: {0}")]
    SpliceInvalid(FillingError),
    #[error("template cache: {0}")]
    Cache(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Incidence {
    /// Position along the a-arc, `1..=5`.
    pub along_a: u8,
    /// Position along the b-arc, `1..=5`.
    pub along_b: u8,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TemplateRepr", into = "TemplateRepr")]
pub struct ZTemplate {
    /// a-positions of the crossings in the order met by b, 0-based.
    beta_word: [u8; PIECE_POINTS],
    /// Sign of each crossing indexed by a-position.
    signs: [Sign; PIECE_POINTS],
}

#[derive(Serialize, Deserialize)]
struct TemplateRepr {
    alpha_word: Vec<u8>,
    beta_word: Vec<u8>,
    incidence: Vec<Incidence>,
}

impl From<ZTemplate> for TemplateRepr {
    fn from(t: ZTemplate) -> Self {
        TemplateRepr {
            alpha_word: t.alpha_word().to_vec(),
            beta_word: t.beta_word().to_vec(),
            incidence: t.incidence(),
        }
    }
}

impl TryFrom<TemplateRepr> for ZTemplate {
    type Error = ZPieceError;
    fn try_from(r: TemplateRepr) -> Result<Self, ZPieceError> {
        if r.alpha_word != [1, 2, 3, 4, 5] {
            return Err(ZPieceError::InvalidTemplate("alpha word must be 1..5".into()));
        }
        let bw: Vec<u8> = r.beta_word.iter().map(|&x| x.wrapping_sub(1)).collect();
        let mut signs = [Sign::Positive; PIECE_POINTS];
        if r.incidence.len() != PIECE_POINTS {
            return Err(ZPieceError::InvalidTemplate("incidence must have 5 points".into()));
        }
        for inc in &r.incidence {
            let a = inc.along_a as usize;
            let b = inc.along_b as usize;
            if !(1..=PIECE_POINTS).contains(&a) || !(1..=PIECE_POINTS).contains(&b) || bw[b - 1] as usize != a - 1 {
                return Err(ZPieceError::InvalidTemplate("incidence disagrees with beta word".into()));
            }
            signs[a - 1] = inc.sign;
        }
        ZTemplate::new(bw, signs.to_vec())
    }
}

impl ZTemplate {
    /// `beta_word[r]` is the 0-based a-position of the `r`-th crossing along b.
    pub fn new(beta_word: Vec<u8>, signs: Vec<Sign>) -> Result<Self, ZPieceError> {
        let mut sorted = beta_word.clone();
        sorted.sort();
        if sorted != [0, 1, 2, 3, 4] || signs.len() != PIECE_POINTS {
            return Err(ZPieceError::InvalidTemplate("beta word must be a permutation of five points".into()));
        }
        Ok(ZTemplate { beta_word: beta_word.try_into().unwrap(), signs: signs.try_into().unwrap() })
    }

    /// Crossings along a, 1-based.
    pub fn alpha_word(&self) -> [u8; PIECE_POINTS] {
        [1, 2, 3, 4, 5]
    }

    /// Crossings along b named by their a-position, 1-based.
    pub fn beta_word(&self) -> [u8; PIECE_POINTS] {
        self.beta_word.map(|x| x + 1)
    }

    pub fn signs(&self) -> [Sign; PIECE_POINTS] {
        self.signs
    }

    pub fn incidence(&self) -> Vec<Incidence> {
        let mut out: Vec<Incidence> = self
            .beta_word
            .iter()
            .enumerate()
            .map(|(r, &a)| Incidence { along_a: a + 1, along_b: r as u8 + 1, sign: self.signs[a as usize] })
            .collect();
        out.sort();
        out
    }

    fn block(&self) -> Vec<usize> {
        self.beta_word.iter().map(|&x| x as usize).collect()
    }

    /// The template with the roles of a and b exchanged: crossing `r` along b
    /// becomes crossing `r` along a. Signs flip with the swap.
    pub fn swapped(&self) -> ZTemplate {
        let mut inverse = [0u8; PIECE_POINTS];
        let mut signs = [Sign::Positive; PIECE_POINTS];
        for (r, &a) in self.beta_word.iter().enumerate() {
            inverse[a as usize] = r as u8;
            signs[r] = self.signs[a as usize].negate();
        }
        ZTemplate { beta_word: inverse, signs }
    }

    /// Every candidate in lexicographic order: beta word first, then signs
    /// with `+` before `-` and the first point most significant.
    pub fn candidates() -> Vec<ZTemplate> {
        let mut out = Vec::new();
        let mut word: Vec<u8> = (0..PIECE_POINTS as u8).collect();
        loop {
            for mask in 0..1u32 << PIECE_POINTS {
                let signs: Vec<Sign> = (0..PIECE_POINTS)
                    .map(|t| if mask >> (PIECE_POINTS - 1 - t) & 1 == 1 { Sign::Negative } else { Sign::Positive })
                    .collect();
                out.push(ZTemplate::new(word.clone(), signs).unwrap());
            }
            if !next_permutation(&mut word) {
                break;
            }
        }
        out
    }

    /// Stable content hash of the template's JSON form.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("template serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// Splices the template at vertex `k` (1-based) of a crossing sequence.
pub fn splice_crossing(cs: &CrossingSequence, k: usize, t: &ZTemplate) -> CrossingSequence {
    cs.splice(k - 1, &t.block(), &t.signs)
}

/// Splices the template into a filling permutation at vertex `k`.
pub fn splice(fp: &FillingPermutation, k: u32, t: &ZTemplate) -> Result<FillingPermutation, ZPieceError> {
    let max = fp.ctx().i_min();
    if k == 0 || k > max {
        return Err(ZPieceError::VertexOutOfRange { k, max });
    }
    let cs = CrossingSequence::from_filling(fp);
    splice_crossing(&cs, k as usize, t).to_filling().map_err(ZPieceError::SpliceInvalid)
}

/// An occurrence of a Z-piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ZMatch {
    /// Index of the first α sub-arc inside the piece; the first crossing of the
    /// piece is `v_position`.
    pub position: u32,
    /// Whether the b-arc runs along β (`+`) or against it (`-`).
    pub orientation: Sign,
    /// Found with the roles of a and b exchanged.
    pub swapped: bool,
    /// The four interior α sub-arcs, 1-based.
    pub alpha_arcs: Vec<u32>,
    /// The four interior β sub-arcs, 1-based.
    pub beta_arcs: Vec<u32>,
    /// The crossings of the piece in a-order, 1-based.
    pub vertices: Vec<u32>,
}

impl ZMatch {
    /// True iff the two pieces share no interior arc.
    pub fn is_disjoint(&self, other: &ZMatch) -> bool {
        let shared = |a: &[u32], b: &[u32]| a.iter().any(|x| b.contains(x));
        !shared(&self.alpha_arcs, &other.alpha_arcs) && !shared(&self.beta_arcs, &other.beta_arcs)
    }
}

/// Occurrences with a along α. Crossings are matched by their order along
/// both arcs; signs are not compared.
fn direct_matches(cs: &CrossingSequence, t: &ZTemplate) -> Vec<ZMatch> {
    let m = cs.len();
    if m < PIECE_POINTS {
        return Vec::new();
    }
    let posb = cs.beta_positions();
    let mut out = Vec::new();
    for p in 0..m {
        let u: Vec<usize> = (0..PIECE_POINTS).map(|t| (p + t) % m).collect();
        for orientation in [Sign::Positive, Sign::Negative] {
            let along_b: Vec<usize> = match orientation {
                Sign::Positive => t.beta_word.iter().map(|&a| u[a as usize]).collect(),
                Sign::Negative => t.beta_word.iter().rev().map(|&a| u[a as usize]).collect(),
            };
            let q = posb[along_b[0]];
            let contiguous = along_b.iter().enumerate().all(|(r, &v)| cs.beta_order[(q + r) % m] == v);
            if contiguous {
                out.push(ZMatch {
                    position: p as u32 + 1,
                    orientation,
                    swapped: false,
                    alpha_arcs: (0..4).map(|r| ((p + r) % m) as u32 + 1).collect(),
                    beta_arcs: (0..4).map(|r| ((q + r) % m) as u32 + 1).collect(),
                    vertices: u.iter().map(|&v| v as u32 + 1).collect(),
                });
            }
        }
    }
    out
}

/// Every Z-piece of the crossing sequence, including those found with a and b
/// exchanged, one entry per set of interior arcs.
pub fn detect_in_crossing(cs: &CrossingSequence, t: &ZTemplate) -> Vec<ZMatch> {
    let mut found: Vec<ZMatch> = direct_matches(cs, t);
    let sw = cs.swapped();
    let to_old = sw.beta_positions();
    for mut z in direct_matches(&sw, t) {
        // arcs of the swapped sequence exchange curves; vertices renumber back
        std::mem::swap(&mut z.alpha_arcs, &mut z.beta_arcs);
        z.vertices = z.vertices.iter().map(|&v| to_old[(v - 1) as usize] as u32 + 1).collect();
        z.position = z.alpha_arcs[0];
        z.swapped = true;
        found.push(z);
    }
    let mut seen = BTreeSet::new();
    found.retain(|z| {
        let mut a = z.alpha_arcs.clone();
        let mut b = z.beta_arcs.clone();
        a.sort();
        b.sort();
        seen.insert((a, b))
    });
    found.sort_by_key(|x| (x.position, x.swapped, x.orientation));
    found
}

pub fn detect_zpieces(fp: &FillingPermutation, t: &ZTemplate) -> Vec<ZMatch> {
    detect_in_crossing(&CrossingSequence::from_filling(fp), t)
}

/// The crossings at the far ends of the piece's boundary arcs: the start of
/// `x₁`, the start of `y₁`, the end of `y₆` and the end of `x₆`, 1-based.
pub fn endpoint_vertices(cs: &CrossingSequence, z: &ZMatch) -> [u32; 4] {
    if !z.swapped {
        return endpoints_direct(cs, z);
    }
    let sw = cs.swapped();
    let to_new = cs.beta_positions();
    let to_old = sw.beta_positions();
    let raw = ZMatch {
        position: z.beta_arcs[0],
        orientation: z.orientation,
        swapped: false,
        alpha_arcs: z.beta_arcs.clone(),
        beta_arcs: z.alpha_arcs.clone(),
        vertices: z.vertices.iter().map(|&v| to_new[(v - 1) as usize] as u32 + 1).collect(),
    };
    endpoints_direct(&sw, &raw).map(|v| to_old[(v - 1) as usize] as u32 + 1)
}

fn endpoints_direct(cs: &CrossingSequence, z: &ZMatch) -> [u32; 4] {
    let m = cs.len();
    let posb = cs.beta_positions();
    let first_a = (z.vertices[0] - 1) as usize;
    let last_a = (z.vertices[PIECE_POINTS - 1] - 1) as usize;
    let x1_start = (first_a + m - 1) % m;
    let x6_end = (last_a + 1) % m;
    let q = (z.beta_arcs[0] - 1) as usize;
    let (b_in, b_out) = (cs.beta_order[q], cs.beta_order[(q + 4) % m]);
    let before = |v: usize| cs.beta_order[(posb[v] + m - 1) % m];
    let after = |v: usize| cs.beta_order[(posb[v] + 1) % m];
    let (y1_start, y6_end) = match z.orientation {
        Sign::Positive => (before(b_in), after(b_out)),
        Sign::Negative => (after(b_out), before(b_in)),
    };
    [x1_start, y1_start, y6_end, x6_end].map(|v| v as u32 + 1)
}

/// Result of the template search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateDerivation {
    pub template: ZTemplate,
    /// Every candidate that passed every check, in candidate order.
    pub all_valid: Vec<ZTemplate>,
    /// Candidates whose splices are all valid, before the shape checks.
    pub splice_valid: usize,
    pub candidates_tried: usize,
}

/// True iff every detected piece has four distinct endpoint crossings.
pub fn endpoints_distinct(cs: &CrossingSequence, t: &ZTemplate) -> bool {
    detect_in_crossing(cs, t).iter().all(|z| {
        let mut e = endpoint_vertices(cs, z).to_vec();
        e.sort();
        e.dedup();
        e.len() == 4
    })
}

/// True iff the b-arc meets the a-arc so that `y₂` joins the ends of `x₅`,
/// `y₃` runs from the end of `x₅` to the start of `x₄`, and `y₅` joins the
/// ends of `x₂`.
pub fn has_piece_shape(t: &ZTemplate) -> bool {
    // y_r runs from the (r-1)-th to the r-th crossing along b; x_t from z_{t-1} to z_t
    let b = t.beta_word();
    let y = |r: usize| (b[r - 2], b[r - 1]);
    y(2) == (4, 5) && y(3) == (5, 3) && y(5) == (1, 2)
}

/// Searches the candidates for the least template such that
/// - its splice into the torus solution lies in `genus3`;
/// - its splice into every member of `genus3` at every vertex is a valid
///   genus-5 solution;
/// - in the torus splice exactly one piece is found, also after exchanging
///   the curves, and its four endpoint crossings are distinct;
/// - it has the arc coincidences of [`has_piece_shape`].
pub fn derive_template(genus3: &[FillingPermutation]) -> Result<TemplateDerivation, ZPieceError> {
    let known: BTreeSet<&Permutation> = genus3.iter().map(|f| f.perm()).collect();
    let torus = CrossingSequence::from_filling(&FillingPermutation::torus());
    let seeds: Vec<CrossingSequence> = genus3.iter().map(CrossingSequence::from_filling).collect();
    let candidates = ZTemplate::candidates();
    let splice_valid: Vec<&ZTemplate> = candidates
        .par_iter()
        .filter(|t| {
            match splice_crossing(&torus, 1, t).to_filling() {
                Ok(f) if known.contains(f.perm()) => {}
                _ => return false,
            }
            seeds.iter().all(|cs| (1..=cs.len()).all(|k| splice_crossing(cs, k, t).to_filling().is_ok()))
        })
        .collect();
    let all_valid: Vec<ZTemplate> = splice_valid
        .iter()
        .filter(|t| {
            let first = splice_crossing(&torus, 1, t);
            has_piece_shape(t)
                && detect_in_crossing(&first, t).len() == 1
                && detect_in_crossing(&first.swapped(), t).len() == 1
                && endpoints_distinct(&first, t)
        })
        .map(|t| (*t).clone())
        .collect();
    let template = all_valid.first().cloned().ok_or(ZPieceError::DerivationFailed)?;
    Ok(TemplateDerivation { template, all_valid, splice_valid: splice_valid.len(), candidates_tried: candidates.len() })
}

/// A cache directory holding derivations in files named by their content hash.
pub struct TemplateCache {
    dir: PathBuf,
}

impl TemplateCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TemplateCache { dir: dir.into() }
    }

    fn file_for(&self, hash: &str) -> PathBuf {
        self.dir.join(format!("ztemplate-{hash}.json"))
    }

    pub fn store(&self, d: &TemplateDerivation) -> Result<PathBuf, ZPieceError> {
        fs::create_dir_all(&self.dir).map_err(|e| ZPieceError::Cache(e.to_string()))?;
        let json = serde_json::to_string_pretty(d).map_err(|e| ZPieceError::Cache(e.to_string()))?;
        let path = self.file_for(&hex::encode(Sha256::digest(json.as_bytes())));
        fs::write(&path, json).map_err(|e| ZPieceError::Cache(e.to_string()))?;
        Ok(path)
    }

    /// First cached derivation whose file name matches its content hash.
    pub fn load(&self) -> Option<TemplateDerivation> {
        let mut entries: Vec<PathBuf> = fs::read_dir(&self.dir)
            .ok()?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("ztemplate-")))
            .collect();
        entries.sort();
        entries.into_iter().find_map(|p| read_verified(&p))
    }

    pub fn load_or_derive(
        &self,
        genus3: impl FnOnce() -> Vec<FillingPermutation>,
    ) -> Result<TemplateDerivation, ZPieceError> {
        if let Some(d) = self.load() {
            return Ok(d);
        }
        let d = derive_template(&genus3())?;
        self.store(&d)?;
        Ok(d)
    }
}

fn read_verified(path: &Path) -> Option<TemplateDerivation> {
    let text = fs::read(path).ok()?;
    let name = path.file_stem()?.to_str()?.strip_prefix("ztemplate-")?;
    if hex::encode(Sha256::digest(&text)) != name {
        return None;
    }
    let d: TemplateDerivation = serde_json::from_slice(&text).ok()?;
    // a stale or foreign file must still splice the torus correctly
    splice(&FillingPermutation::torus(), 1, &d.template).ok()?;
    Some(d)
}

/// A strictly increasing sequence `a_1 < … < a_L` with `1 <= a_i <= 4i - 3`,
/// `L = (g-1)/2`, naming where successive pieces are spliced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LSequence {
    g: u32,
    entries: Vec<u32>,
}

impl LSequence {
    pub fn new(g: u32, entries: Vec<u32>) -> Result<Self, ZPieceError> {
        if g < 3 || g.is_multiple_of(2) {
            return Err(ZPieceError::InvalidSequence(format!("genus {g} must be odd and at least 3")));
        }
        let len = ((g - 1) / 2) as usize;
        if entries.len() != len {
            return Err(ZPieceError::InvalidSequence(format!("expected {len} entries, got {}", entries.len())));
        }
        for (i, &a) in entries.iter().enumerate() {
            let cap = 4 * (i as u32 + 1) - 3;
            if a < 1 || a > cap {
                return Err(ZPieceError::InvalidSequence(format!("entry {} = {a} not in 1..={cap}", i + 1)));
            }
            if i > 0 && a <= entries[i - 1] {
                return Err(ZPieceError::InvalidSequence("entries must be strictly increasing".into()));
            }
        }
        Ok(LSequence { g, entries })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Every sequence of genus `g` in lexicographic order.
    pub fn all(g: u32) -> Result<Vec<LSequence>, ZPieceError> {
        LSequence::new(g, (1..=(g - 1) / 2).map(|i| 4 * i - 3).collect::<Vec<_>>())?;
        let len = ((g - 1) / 2) as usize;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(len);
        fn rec(i: usize, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == len {
                out.push(cur.clone());
                return;
            }
            let lo = cur.last().map_or(1, |&a| a + 1);
            for a in lo..=4 * (i as u32 + 1) - 3 {
                cur.push(a);
                rec(i + 1, len, cur, out);
                cur.pop();
            }
        }
        rec(0, len, &mut cur, &mut out);
        Ok(out.into_iter().map(|entries| LSequence { g, entries }).collect())
    }
}

/// Splices the template into the torus at `a_1`, then at `a_2`, and so on.
pub fn build_from_sequence(seq: &LSequence, t: &ZTemplate) -> Result<FillingPermutation, ZPieceError> {
    let mut fp = FillingPermutation::torus();
    for &a in seq.entries() {
        fp = splice(&fp, a, t)?;
    }
    Ok(fp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossing::one_faced_fillings;
    use crate::filling::GenusContext;

    fn genus3() -> Vec<FillingPermutation> {
        let c = GenusContext::new(3).unwrap();
        one_faced_fillings(&c).into_iter().map(|p| FillingPermutation::new(c, p).unwrap()).collect()
    }

    #[test]
    fn candidate_order() {
        let c = ZTemplate::candidates();
        assert_eq!(c.len(), 120 * 32);
        assert_eq!(c[0].beta_word(), [1, 2, 3, 4, 5]);
        assert_eq!(c[1].signs()[4], Sign::Negative);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn template_json_round_trip() {
        let t = ZTemplate::new(vec![0, 2, 1, 4, 3], vec![Sign::Positive; 5]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<ZTemplate>(&json).unwrap(), t);
        assert_eq!(t.incidence().len(), 5);
        assert_eq!(t.swapped().swapped(), t);
    }

    #[test]
    fn derivation_against_one_faced_configurations() {
        let d = derive_template(&genus3()).unwrap();
        assert_eq!(d.template, d.all_valid[0]);
        assert_eq!(d.template.beta_word(), [4, 5, 3, 1, 2]);
        assert_eq!(d.splice_valid, 156);
        assert_eq!(d.all_valid.len(), 4);
        let spliced = splice(&FillingPermutation::torus(), 1, &d.template).unwrap();
        assert_eq!(spliced.ctx().genus(), 3);
    }

    #[test]
    fn splice_range() {
        let t = ZTemplate::new(vec![0, 2, 1, 4, 3], vec![Sign::Positive; 5]).unwrap();
        assert!(matches!(
            splice(&FillingPermutation::torus(), 2, &t),
            Err(ZPieceError::VertexOutOfRange { k: 2, max: 1 })
        ));
    }

    #[test]
    fn sequences() {
        assert_eq!(LSequence::all(3).unwrap().len(), 1);
        assert_eq!(LSequence::all(5).unwrap().len(), 4);
        assert_eq!(LSequence::all(7).unwrap().len(), 22);
        assert!(LSequence::new(5, vec![1, 6]).is_err());
        assert!(LSequence::new(5, vec![2, 2]).is_err());
        assert!(LSequence::new(4, vec![1]).is_err());
    }
}
