//! Filling permutations: the symbol table, the fixed permutations `Q`, `ι`,
//! `τ` and the twisting permutations, validation, surface reconstruction and
//! orbit classification.
//!
//! Symbols `1..=8g-4` name the oriented sub-arcs
//! `α₁, β₁, …, α_{2g-1}, β_{2g-1}, α₁⁻¹, β₁⁻¹, …, α_{2g-1}⁻¹, β_{2g-1}⁻¹`.
//! A filling permutation `σ` is a parity-respecting `(8g-4)`-cycle with
//! `σ ∘ ι ∘ σ = τ`, where `ι = Q^{4g-2}` sends each arc to its inverse and `τ`
//! advances each curve by one sub-arc.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FillingError {
    #[error("genus must be at least 1, got {0}")]
    InvalidGenus(u32),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("symbol {symbol} out of range 1..={n}")]
    SymbolOutOfRange { symbol: u32, n: u32 },
    #[error("not a filling permutation: {0}")]
    NotFilling(FillingFailure),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// First failed condition of the filling test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillingFailure {
    NotNCycle,
    NotParityRespecting,
    EquationFails,
}

impl fmt::Display for FillingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FillingFailure::NotNCycle => "not an n-cycle",
            FillingFailure::NotParityRespecting => "not parity respecting",
            FillingFailure::EquationFails => "sigma*iota*sigma != tau",
        })
    }
}

/// Genus together with the derived sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GenusContext {
    g: u32,
}

impl TryFrom<u32> for GenusContext {
    type Error = FillingError;
    fn try_from(g: u32) -> Result<Self, Self::Error> {
        GenusContext::new(g)
    }
}

impl From<GenusContext> for u32 {
    fn from(ctx: GenusContext) -> u32 {
        ctx.g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curve {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolInfo {
    pub curve: Curve,
    /// 1-based sub-arc index along the curve.
    pub arc_index: u32,
    pub direction: Direction,
}

/// The fixed permutations of degree `8g-4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalPerms {
    pub q: Permutation,
    pub iota: Permutation,
    pub tau: Permutation,
    pub kappa: Permutation,
    pub delta: Permutation,
    pub eta: Permutation,
    pub mu: Permutation,
}

impl GenusContext {
    pub fn new(g: u32) -> Result<Self, FillingError> {
        // n = 8g-4 must fit comfortably in u32 arithmetic.
        if g == 0 || g > (1 << 24) {
            return Err(FillingError::InvalidGenus(g));
        }
        Ok(GenusContext { g })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    /// Number of symbols, `8g-4`.
    pub fn n(&self) -> u32 {
        8 * self.g - 4
    }

    /// Minimal intersection number, `2g-1`; also the number of sub-arcs per curve.
    pub fn i_min(&self) -> u32 {
        2 * self.g - 1
    }

    /// Offset between a symbol and its inverse, `4g-2`.
    pub fn half(&self) -> u32 {
        4 * self.g - 2
    }

    pub fn symbol_info(&self, j: u32) -> Result<SymbolInfo, FillingError> {
        if j == 0 || j > self.n() {
            return Err(FillingError::SymbolOutOfRange { symbol: j, n: self.n() });
        }
        let (base, direction) =
            if j <= self.half() { (j, Direction::Forward) } else { (j - self.half(), Direction::Inverse) };
        let (curve, arc_index) = if base % 2 == 1 { (Curve::Alpha, base.div_ceil(2)) } else { (Curve::Beta, base / 2) };
        Ok(SymbolInfo { curve, arc_index, direction })
    }

    /// Inverse of [`GenusContext::symbol_info`].
    pub fn symbol(&self, info: SymbolInfo) -> u32 {
        debug_assert!(info.arc_index >= 1 && info.arc_index <= self.i_min());
        let base = match info.curve {
            Curve::Alpha => 2 * info.arc_index - 1,
            Curve::Beta => 2 * info.arc_index,
        };
        match info.direction {
            Direction::Forward => base,
            Direction::Inverse => base + self.half(),
        }
    }

    pub fn canonical_perms(&self) -> CanonicalPerms {
        let n = self.n() as usize;
        let g = self.g;
        let step2 = |from: u32, to: u32| -> Vec<u32> {
            if from <= to {
                (from..=to).step_by(2).collect()
            } else {
                (to..=from).rev().step_by(2).collect()
            }
        };
        let cycles = |cs: Vec<Vec<u32>>| Permutation::from_cycles(n, &cs).unwrap();

        let q = cycles(vec![(1..=self.n()).collect()]);
        let iota = q.power(self.half() as i64);
        let tau = cycles(vec![
            step2(1, 4 * g - 3),
            step2(2, 4 * g - 2),
            step2(8 * g - 5, 4 * g - 1),
            step2(8 * g - 4, 4 * g),
        ]);
        let kappa = cycles(vec![step2(1, 4 * g - 3), step2(4 * g - 1, 8 * g - 5)]);
        let delta = cycles(vec![step2(2, 4 * g - 2), step2(4 * g, 8 * g - 4)]);
        let mu = cycles((1..self.n()).step_by(2).map(|a| vec![a, a + 1]).collect());
        CanonicalPerms { q, iota, tau, kappa, delta, eta: self.alpha_reversal(), mu }
    }

    /// Reverses the direction of α: `α_k ↦ α_{2g-k}⁻¹` and `α_k⁻¹ ↦ α_{2g-k}`,
    /// fixing every β symbol. On odd symbols this is `j ↦ n - j`.
    ///
    /// Swapping `α_k` with `α_k⁻¹` without re-indexing does not commute with
    /// `τ` once `g ≥ 2`, so it does not map filling permutations to filling
    /// permutations; the re-indexed reversal does.
    pub fn alpha_reversal(&self) -> Permutation {
        let n = self.n();
        let images: Vec<u32> = (1..=n).map(|j| if j % 2 == 1 { n - j } else { j }).map(|j| j - 1).collect();
        Permutation::from_zero_based_unchecked(images)
    }

    fn check_degree(&self, p: &Permutation) -> Result<(), FillingError> {
        if p.degree() != self.n() as usize {
            return Err(FillingError::DegreeMismatch { expected: self.n() as usize, got: p.degree() });
        }
        Ok(())
    }

    /// Checks the three filling conditions in order and reports the first
    /// failure.
    pub fn check_filling(&self, p: &Permutation) -> Result<(), FillingError> {
        self.check_degree(p)?;
        if !p.is_n_cycle() {
            return Err(FillingError::NotFilling(FillingFailure::NotNCycle));
        }
        if !p.is_parity_respecting()? {
            return Err(FillingError::NotFilling(FillingFailure::NotParityRespecting));
        }
        if !satisfies_equation(self, p.as_zero_based()) {
            return Err(FillingError::NotFilling(FillingFailure::EquationFails));
        }
        Ok(())
    }

    /// Boolean form of [`GenusContext::check_filling`]; degree mismatch is an error.
    pub fn is_filling(&self, p: &Permutation) -> Result<bool, FillingError> {
        match self.check_filling(p) {
            Ok(()) => Ok(true),
            Err(FillingError::NotFilling(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

/// `σ(ι(σ(x))) = τ(x)` for every `x`, evaluated on 0-based images without
/// materialising `ι` or `τ`.
pub(crate) fn satisfies_equation(ctx: &GenusContext, sigma: &[u32]) -> bool {
    let n = ctx.n();
    let half = ctx.half();
    (0..n).all(|x| {
        let y = sigma[x as usize];
        let z = (y + half) % n;
        sigma[z as usize] == tau_zero_based(ctx, x)
    })
}

/// `τ` on 0-based symbols.
#[inline]
pub(crate) fn tau_zero_based(ctx: &GenusContext, x: u32) -> u32 {
    let half = ctx.half();
    let arcs = ctx.i_min();
    if x < half {
        // forward arcs: advance two symbols within the block, wrapping
        let arc = x / 2;
        let next = (arc + 1) % arcs;
        2 * next + x % 2
    } else {
        let y = x - half;
        let arc = y / 2;
        let prev = (arc + arcs - 1) % arcs;
        half + 2 * prev + y % 2
    }
}

/// A validated filling permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FillingPermutation {
    ctx: GenusContext,
    perm: Permutation,
}

impl FillingPermutation {
    pub fn new(ctx: GenusContext, perm: Permutation) -> Result<Self, FillingError> {
        ctx.check_filling(&perm)?;
        Ok(FillingPermutation { ctx, perm })
    }

    pub(crate) fn new_unchecked(ctx: GenusContext, perm: Permutation) -> Self {
        debug_assert!(ctx.check_filling(&perm).is_ok());
        FillingPermutation { ctx, perm }
    }

    /// The standard torus solution `σ = Q = (1,2,3,4)`.
    pub fn torus() -> Self {
        let ctx = GenusContext::new(1).unwrap();
        FillingPermutation::new(ctx, ctx.canonical_perms().q).unwrap()
    }

    pub fn ctx(&self) -> GenusContext {
        self.ctx
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn into_perm(self) -> Permutation {
        self.perm
    }

    /// The clockwise edge labels of the polygon, starting at symbol 1.
    pub fn boundary_word(&self) -> Vec<u32> {
        let n = self.ctx.n() as usize;
        let mut word = Vec::with_capacity(n);
        let mut x = 1;
        for _ in 0..n {
            word.push(x);
            x = self.perm.apply(x);
        }
        word
    }

    /// Glues the polygon and reports the resulting surface.
    pub fn reconstruct(&self) -> SurfaceReport {
        let ctx = self.ctx;
        let word = self.boundary_word();
        let n = word.len();
        // position of each symbol along the boundary
        let mut pos = vec![0usize; n + 1];
        for (t, &s) in word.iter().enumerate() {
            pos[s as usize] = t;
        }
        // Polygon corner t is the start of side t; side t runs from corner t
        // to corner t+1. Side s is glued to side ι(s) with reversed direction.
        let mut uf = UnionFind::new(n);
        let iota = |s: u32| (s - 1 + ctx.half()) % ctx.n() + 1;
        for (t, &s) in word.iter().enumerate() {
            let u = pos[iota(s) as usize];
            uf.union(t, (u + 1) % n);
            uf.union((t + 1) % n, u);
        }
        let mut classes: Vec<Vec<u32>> = {
            let mut by_root: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
            for t in 0..n {
                by_root.entry(uf.find(t)).or_default().push(t as u32 + 1);
            }
            by_root.into_values().collect()
        };
        classes.sort();

        let v = classes.len() as i64;
        let e = (n / 2) as i64;
        let chi = v - e + 1;
        assert!(chi % 2 == 0, "glued polygon has odd Euler characteristic");
        let genus = (2 - chi) / 2;

        let arcs = ctx.i_min();
        let single_curve = |curve: Curve| {
            (1..=arcs).all(|k| {
                let this = ctx.symbol(SymbolInfo { curve, arc_index: k, direction: Direction::Forward });
                let next = ctx.symbol(SymbolInfo { curve, arc_index: k % arcs + 1, direction: Direction::Forward });
                let terminal = (pos[this as usize] + 1) % n;
                let initial = pos[next as usize];
                uf.find_const(terminal) == uf.find_const(initial)
            })
        };
        let alpha_is_single_curve = single_curve(Curve::Alpha);
        let beta_is_single_curve = single_curve(Curve::Beta);

        SurfaceReport {
            genus,
            vertex_classes: classes,
            alpha_is_single_curve,
            beta_is_single_curve,
            boundary_word: word,
        }
    }
}

impl fmt::Display for FillingPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.perm)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub genus: i64,
    /// Corner classes under the gluing; corner `t` (1-based) is the start of
    /// the `t`-th side of the boundary word.
    pub vertex_classes: Vec<Vec<u32>>,
    pub alpha_is_single_curve: bool,
    pub beta_is_single_curve: bool,
    pub boundary_word: Vec<u32>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn find_const(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The products `μ^l κ^k δ^j η^i` with `l, i ∈ {0,1}` and
/// `j, k ∈ {0..2g-2}`, deduplicated, in generation order.
pub fn twisting_group(ctx: &GenusContext) -> Vec<Permutation> {
    let c = ctx.canonical_perms();
    let order = ctx.i_min() as i64;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for l in 0..2 {
        for k in 0..order {
            for j in 0..order {
                for i in 0..2 {
                    let t =
                        c.mu.power(l)
                            .compose(&c.kappa.power(k))
                            .and_then(|x| x.compose(&c.delta.power(j)))
                            .and_then(|x| x.compose(&c.eta.power(i)))
                            .unwrap();
                    if seen.insert(t.clone()) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// The group generated by the twisting permutations.
///
/// Conjugation classes are taken with respect to this group so that the
/// relation is an equivalence. It contains the reversal of β (`μ η μ`),
/// which is not one of the products in [`twisting_group`], and has order
/// `8(2g-1)²` for `g ≥ 2`.
#[derive(Debug, Clone)]
pub struct TwistingClosure {
    ctx: GenusContext,
    elements: Vec<Permutation>,
}

impl TwistingClosure {
    pub fn new(ctx: &GenusContext) -> Self {
        let c = ctx.canonical_perms();
        let generators = [c.mu, c.kappa, c.delta, c.eta];
        let identity = Permutation::identity(ctx.n() as usize);
        let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for gen in &generators {
                let y = gen.compose(&x).unwrap();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        TwistingClosure { ctx: *ctx, elements }
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Lexicographically least conjugate of `p`.
    pub fn orbit_min(&self, p: &Permutation) -> Permutation {
        self.elements.iter().map(|h| p.conjugate(h).unwrap()).min().expect("closure contains the identity")
    }

    /// True iff no conjugate of `sigma` (0-based images) is lexicographically
    /// smaller. Compares conjugate images lazily so most candidates exit after
    /// a few symbols.
    pub fn is_orbit_min(&self, sigma: &[u32]) -> bool {
        let n = sigma.len();
        'next: for h in &self.elements {
            let h = h.as_zero_based();
            // conjugate(y) = h(σ(h⁻¹(y))); walk y in order via x = h⁻¹(y).
            let mut hinv = [0u32; 256];
            let hinv: &mut [u32] = if n <= 256 {
                &mut hinv[..n]
            } else {
                return self.orbit_min_slow(sigma);
            };
            for (x, &y) in h.iter().enumerate() {
                hinv[y as usize] = x as u32;
            }
            for y in 0..n {
                let c = h[sigma[hinv[y] as usize] as usize];
                match c.cmp(&sigma[y]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => continue 'next,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    fn orbit_min_slow(&self, sigma: &[u32]) -> bool {
        let p = Permutation::from_zero_based_unchecked(sigma.to_vec());
        self.orbit_min(&p) == p
    }

    pub fn ctx(&self) -> GenusContext {
        self.ctx
    }
}

/// Canonical representative of a twisting-conjugation class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitClass {
    pub genus: u32,
    pub canonical: Permutation,
}

/// Least conjugate of a filling permutation under the twisting closure. Every
/// conjugate is checked to be a filling permutation.
pub fn canonical_class_rep(
    ctx: &GenusContext,
    closure: &TwistingClosure,
    p: &Permutation,
) -> Result<OrbitClass, FillingError> {
    ctx.check_filling(p)?;
    let mut best: Option<Permutation> = None;
    for h in closure.elements() {
        let c = p.conjugate(h)?;
        ctx.check_filling(&c)?;
        if best.as_ref().is_none_or(|b| c < *b) {
            best = Some(c);
        }
    }
    Ok(OrbitClass { genus: ctx.genus(), canonical: best.expect("closure contains the identity") })
}
