//! Square roots of `ι∘τ` and the enumeration of filling permutations.
//!
//! `ι∘τ` is a product of `4g-2` disjoint transpositions, half on odd symbols
//! and half on even ones. Its square roots whose cycles are all 4-cycles pair
//! every odd transposition `(a,b)` with an even one `(c,d)` and choose one of
//! the two interleavings `(a,c,b,d)` or `(a,d,b,c)`. Every filling
//! permutation is `ι∘C` for such a root `C`.

use std::env;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::crossing::next_permutation;
use crate::filling::{FillingError, FillingPermutation, GenusContext, TwistingClosure};
use crate::perm::Permutation;

/// Default largest genus enumerated without an explicit override.
pub const DEFAULT_MAX_GENUS: u32 = 5;
/// Environment variable overriding [`DEFAULT_MAX_GENUS`].
pub const GUARD_ENV: &str = "FILLPERM_GUARD";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error(
        "genus {genus} is above the enumeration guard ({max}); {roots} square roots would be searched. \
         Raise the guard with {GUARD_ENV} or --force"
    )]
    GuardExceeded { genus: u32, max: u32, roots: BigUint },
    #[error("bound not defined at genus {0}")]
    BoundsUndefined(u32),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Filling(#[from] FillingError),
}

/// The odd and even transpositions of `ι∘τ`, each sorted by least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseInvolution {
    pub odd: Vec<(u32, u32)>,
    pub even: Vec<(u32, u32)>,
}

impl BaseInvolution {
    pub fn to_perm(&self, ctx: &GenusContext) -> Permutation {
        let cycles: Vec<[u32; 2]> = self.odd.iter().chain(&self.even).map(|&(a, b)| [a, b]).collect();
        Permutation::from_cycles(ctx.n() as usize, &cycles).unwrap()
    }
}

/// `ι∘τ` split into its odd and even transpositions.
pub fn base_involution(ctx: &GenusContext) -> BaseInvolution {
    let c = ctx.canonical_perms();
    let it = c.iota.compose(&c.tau).unwrap();
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for cyc in it.cycles() {
        assert_eq!(cyc.len(), 2, "iota*tau is a fixed-point-free involution");
        let t = (cyc[0], cyc[1]);
        if t.0 % 2 == 1 {
            odd.push(t)
        } else {
            even.push(t)
        }
    }
    odd.sort();
    even.sort();
    BaseInvolution { odd, even }
}

/// `2^{2g-1} (2g-1)!`, the number of square roots with only 4-cycles.
pub fn root_count(ctx: &GenusContext) -> BigUint {
    let m = ctx.i_min();
    factorial(m) << m as usize
}

fn factorial(k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, x| acc * x)
}

/// Writes the 4-cycle of odd pair `(a,b)` and even pair `(c,d)` into 0-based
/// root images: bit false gives `(a,c,b,d)`, true gives `(a,d,b,c)`.
fn place(root: &mut [u32], odd: (u32, u32), even: (u32, u32), bit: bool) {
    let (a, b) = odd;
    let (c, d) = if bit { (even.1, even.0) } else { even };
    root[(a - 1) as usize] = c - 1;
    root[(c - 1) as usize] = b - 1;
    root[(b - 1) as usize] = d - 1;
    root[(d - 1) as usize] = a - 1;
}

/// Every square root of `ι∘τ` made of 4-cycles, ordered by matching
/// (lexicographically, odd pair `t` matched to even pair `matching[t]`) and
/// then by interleaving bits read as a binary number with pair 0 most
/// significant.
pub struct SquareRoots {
    base: BaseInvolution,
    matching: Vec<usize>,
    bits: u64,
    done: bool,
}

pub fn square_roots(ctx: &GenusContext) -> SquareRoots {
    let base = base_involution(ctx);
    let m = base.odd.len();
    assert!(m < 64);
    SquareRoots { base, matching: (0..m).collect(), bits: 0, done: false }
}

impl Iterator for SquareRoots {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let m = self.matching.len();
        let mut root = vec![0u32; 4 * m];
        for t in 0..m {
            let bit = self.bits >> (m - 1 - t) & 1 == 1;
            place(&mut root, self.base.odd[t], self.base.even[self.matching[t]], bit);
        }
        self.bits += 1;
        if self.bits == 1 << m {
            self.bits = 0;
            self.done = !next_permutation(&mut self.matching);
        }
        Some(Permutation::from_zero_based_unchecked(root))
    }
}

/// `ι∘C` for a root `C`.
pub fn filling_candidate(ctx: &GenusContext, root: &Permutation) -> Permutation {
    let n = ctx.n();
    let half = ctx.half();
    Permutation::from_zero_based_unchecked(root.as_zero_based().iter().map(|&y| (y + half) % n).collect())
}

/// Largest genus enumerated without `force`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_genus: u32,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { max_genus: DEFAULT_MAX_GENUS }
    }
}

impl Guard {
    /// Reads `FILLPERM_GUARD`, falling back to the default when unset or
    /// unparsable.
    pub fn from_env() -> Self {
        env::var(GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|max_genus| Guard { max_genus })
            .unwrap_or_default()
    }

    pub fn unlimited() -> Self {
        Guard { max_genus: u32::MAX }
    }

    pub fn check(&self, ctx: &GenusContext) -> Result<(), EnumerationError> {
        if ctx.genus() > self.max_genus {
            return Err(EnumerationError::GuardExceeded {
                genus: ctx.genus(),
                max: self.max_genus,
                roots: root_count(ctx),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerationOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub guard: Guard,
}

/// Receives the filling permutations found by one worker.
pub trait FillingSink: Send {
    fn accept(&mut self, sigma: &[u32]);
    fn merge(&mut self, later: Self);
}

#[derive(Debug, Default)]
pub struct CollectSink(pub Vec<Vec<u32>>);

impl FillingSink for CollectSink {
    fn accept(&mut self, sigma: &[u32]) {
        self.0.push(sigma.to_vec());
    }
    fn merge(&mut self, later: Self) {
        self.0.extend(later.0);
    }
}

#[derive(Debug, Default)]
pub struct CountSink(pub u64);

impl FillingSink for CountSink {
    fn accept(&mut self, _sigma: &[u32]) {
        self.0 += 1;
    }
    fn merge(&mut self, later: Self) {
        self.0 += later.0;
    }
}

/// Counts solutions and keeps those that are least in their class.
pub struct ClassSink<'a> {
    closure: &'a TwistingClosure,
    pub solutions: u64,
    pub representatives: Vec<Vec<u32>>,
}

impl<'a> ClassSink<'a> {
    pub fn new(closure: &'a TwistingClosure) -> Self {
        ClassSink { closure, solutions: 0, representatives: Vec::new() }
    }
}

impl FillingSink for ClassSink<'_> {
    fn accept(&mut self, sigma: &[u32]) {
        self.solutions += 1;
        if self.closure.is_orbit_min(sigma) {
            self.representatives.push(sigma.to_vec());
        }
    }
    fn merge(&mut self, later: Self) {
        self.solutions += later.solutions;
        self.representatives.extend(later.representatives);
    }
}

/// Totals of a pruned search. `roots_covered` adds the roots under every
/// pruned branch to the leaves reached and so always equals
/// [`root_count`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    #[serde(serialize_with = "decimal::big")]
    pub roots_covered: BigUint,
    pub leaves: u64,
    pub pruned: Vec<u64>,
}

struct Search<'a> {
    base: &'a BaseInvolution,
    n: u32,
    half: u32,
    m: usize,
    sigma: Vec<u32>,
    // path bookkeeping on σ: for a path start its end, for an end its start,
    // and the length stored at the start
    end_of: Vec<u32>,
    start_of: Vec<u32>,
    len_at: Vec<u32>,
    used_even: Vec<bool>,
    leaves: u64,
    pruned: Vec<u64>,
}

const UNSET: u32 = u32::MAX;

impl<'a> Search<'a> {
    fn new(ctx: &GenusContext, base: &'a BaseInvolution) -> Self {
        let n = ctx.n();
        let m = base.odd.len();
        Search {
            base,
            n,
            half: ctx.half(),
            m,
            sigma: vec![UNSET; n as usize],
            end_of: (0..n).collect(),
            start_of: (0..n).collect(),
            len_at: vec![1; n as usize],
            used_even: vec![false; m],
            leaves: 0,
            pruned: vec![0; m + 1],
        }
    }

    /// Adds `x -> y` to σ. Returns false if this closes a cycle shorter than `n`.
    #[inline]
    fn link(&mut self, x: u32, y: u32, undo: &mut Vec<(u8, u32, u32)>) -> bool {
        let s = self.start_of[x as usize];
        let e = self.end_of[y as usize];
        self.sigma[x as usize] = y;
        undo.push((0, x, UNSET));
        if s == y {
            return self.len_at[s as usize] == self.n;
        }
        let total = self.len_at[s as usize] + self.len_at[y as usize];
        undo.push((1, s, self.end_of[s as usize]));
        self.end_of[s as usize] = e;
        undo.push((2, e, self.start_of[e as usize]));
        self.start_of[e as usize] = s;
        undo.push((3, s, self.len_at[s as usize]));
        self.len_at[s as usize] = total;
        true
    }

    fn rollback(&mut self, undo: &mut Vec<(u8, u32, u32)>, mark: usize) {
        while undo.len() > mark {
            let (kind, i, old) = undo.pop().unwrap();
            let i = i as usize;
            match kind {
                0 => self.sigma[i] = old,
                1 => self.end_of[i] = old,
                2 => self.start_of[i] = old,
                _ => self.len_at[i] = old,
            }
        }
    }

    /// Places odd pair `t` with even pair `j` and interleaving `bit`.
    fn apply(&mut self, t: usize, j: usize, bit: bool, undo: &mut Vec<(u8, u32, u32)>) -> bool {
        let (a, b) = self.base.odd[t];
        let (c, d) = if bit { (self.base.even[j].1, self.base.even[j].0) } else { self.base.even[j] };
        let iota = |x: u32| (x - 1 + self.half) % self.n;
        // σ = ι∘C on 0-based symbols
        let edges = [(a - 1, iota(c)), (c - 1, iota(b)), (b - 1, iota(d)), (d - 1, iota(a))];
        edges.iter().all(|&(x, y)| self.link(x, y, undo))
    }

    fn dfs<S: FillingSink>(&mut self, t: usize, undo: &mut Vec<(u8, u32, u32)>, sink: &mut S) {
        if t == self.m {
            self.leaves += 1;
            sink.accept(&self.sigma);
            return;
        }
        for j in 0..self.m {
            if self.used_even[j] {
                continue;
            }
            self.used_even[j] = true;
            for bit in [false, true] {
                let mark = undo.len();
                if self.apply(t, j, bit, undo) {
                    self.dfs(t + 1, undo, sink);
                } else {
                    self.pruned[t + 1] += 1;
                }
                self.rollback(undo, mark);
            }
            self.used_even[j] = false;
        }
    }
}

/// Runs the pruned search, splitting the tree into independent prefixes.
/// Results are merged in prefix order, so the output does not depend on the
/// number of workers.
pub fn search_filling<S, F>(
    ctx: &GenusContext,
    options: &EnumerationOptions,
    make_sink: F,
) -> Result<(S, SearchStats), EnumerationError>
where
    S: FillingSink,
    F: Fn() -> S + Sync,
{
    options.guard.check(ctx)?;
    let run = || run_search(ctx, &make_sink);
    match options.jobs {
        None => Ok(run()),
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| EnumerationError::ThreadPool(e.to_string()))?;
            Ok(pool.install(run))
        }
    }
}

fn run_search<S, F>(ctx: &GenusContext, make_sink: &F) -> (S, SearchStats)
where
    S: FillingSink,
    F: Fn() -> S + Sync,
{
    let base = base_involution(ctx);
    let m = base.odd.len();
    let depth = m.min(2);
    let mut prefixes: Vec<Vec<(usize, bool)>> = vec![vec![]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &prefixes {
            for j in 0..m {
                if p.iter().any(|&(k, _)| k == j) {
                    continue;
                }
                for bit in [false, true] {
                    let mut q = p.clone();
                    q.push((j, bit));
                    next.push(q);
                }
            }
        }
        prefixes = next;
    }

    let results: Vec<(S, u64, Vec<u64>)> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut search = Search::new(ctx, &base);
            let mut sink = make_sink();
            let mut undo = Vec::with_capacity(8 * m);
            let mut alive = true;
            for (t, &(j, bit)) in prefix.iter().enumerate() {
                search.used_even[j] = true;
                if !search.apply(t, j, bit, &mut undo) {
                    search.pruned[t + 1] += 1;
                    alive = false;
                    break;
                }
            }
            if alive {
                search.dfs(prefix.len(), &mut undo, &mut sink);
            }
            (sink, search.leaves, search.pruned)
        })
        .collect();

    let mut sink = make_sink();
    let mut leaves = 0;
    let mut pruned = vec![0u64; m + 1];
    // a prefix pruned at an inner level is counted once per prefix sharing it
    let mut seen_prefix_prunes = std::collections::HashSet::new();
    for ((s, l, p), prefix) in results.into_iter().zip(&prefixes) {
        sink.merge(s);
        leaves += l;
        for (level, count) in p.into_iter().enumerate() {
            if level >= 1 && level < depth && count > 0 {
                if seen_prefix_prunes.insert(prefix[..level].to_vec()) {
                    pruned[level] += count;
                }
            } else {
                pruned[level] += count;
            }
        }
    }
    let mut covered = BigUint::from(leaves);
    for (level, &count) in pruned.iter().enumerate() {
        if count > 0 {
            let rest = (m - level) as u32;
            covered += BigUint::from(count) * (factorial(rest) << rest as usize);
        }
    }
    (sink, SearchStats { roots_covered: covered, leaves, pruned })
}

/// Every filling permutation of genus `g`, sorted lexicographically.
pub fn enumerate_filling(
    ctx: &GenusContext,
    options: &EnumerationOptions,
) -> Result<Vec<FillingPermutation>, EnumerationError> {
    let (sink, _) = search_filling(ctx, options, CollectSink::default)?;
    let mut out: Vec<FillingPermutation> = sink
        .0
        .into_iter()
        .map(|s| FillingPermutation::new_unchecked(*ctx, Permutation::from_zero_based_unchecked(s)))
        .collect();
    out.sort();
    Ok(out)
}

/// Number of filling permutations of genus `g`.
pub fn count_filling(ctx: &GenusContext, options: &EnumerationOptions) -> Result<u64, EnumerationError> {
    Ok(search_filling(ctx, options, CountSink::default)?.0 .0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub genus: u32,
    pub solutions: u64,
    /// Least member of each class under the twisting closure, sorted.
    pub representatives: Vec<Permutation>,
    pub stats: SearchStats,
}

impl ClassCount {
    pub fn classes(&self) -> usize {
        self.representatives.len()
    }
}

/// Solutions and class representatives in one pass; classes are orbits under
/// [`TwistingClosure`].
pub fn count_classes(ctx: &GenusContext, options: &EnumerationOptions) -> Result<ClassCount, EnumerationError> {
    let closure = TwistingClosure::new(ctx);
    let (sink, stats) = search_filling(ctx, options, || ClassSink::new(&closure))?;
    let mut representatives: Vec<Permutation> =
        sink.representatives.into_iter().map(Permutation::from_zero_based_unchecked).collect();
    representatives.sort();
    Ok(ClassCount { genus: ctx.genus(), solutions: sink.solutions, representatives, stats })
}

/// The lexicographically least filling permutation of genus `g`, if any. It is
/// also the least member of its class.
pub fn canonical_seed(
    ctx: &GenusContext,
    options: &EnumerationOptions,
) -> Result<Option<FillingPermutation>, EnumerationError> {
    let counted = count_classes(ctx, options)?;
    Ok(counted.representatives.into_iter().next().map(|p| FillingPermutation::new_unchecked(*ctx, p)))
}

/// The roots that certainly fail to give an `n`-cycle.
///
/// Pair `(1, 4g+1)` with any even transposition, with either interleaving; let
/// `k` be the image of 1. Then pair `(4g-3, 4g-1)` with the even transposition
/// containing `k' = ι(k)` so that the root sends `k'` to `4g-1`. The resulting
/// `σ = ι∘C` fixes `{1, k'}` as a 2-cycle. The remaining pairs are free.
pub fn excluded_roots(ctx: &GenusContext) -> Result<Vec<Permutation>, EnumerationError> {
    let g = ctx.genus();
    if g < 2 {
        return Ok(Vec::new());
    }
    let base = base_involution(ctx);
    let m = base.odd.len();
    let first = base.odd.iter().position(|&t| t == (1, 4 * g + 1)).unwrap();
    let last = base.odd.iter().position(|&t| t == (4 * g - 3, 4 * g - 1)).unwrap();
    let n = ctx.n();
    let iota = |x: u32| (x - 1 + ctx.half()) % n + 1;
    let even_of = |x: u32| base.even.iter().position(|&(c, d)| c == x || d == x).unwrap();

    let free_odd: Vec<usize> = (0..m).filter(|&t| t != first && t != last).collect();
    let mut out = Vec::new();
    for j1 in 0..m {
        for bit1 in [false, true] {
            let mut root = vec![0u32; n as usize];
            place(&mut root, base.odd[first], base.even[j1], bit1);
            let k = root[0] + 1;
            let kp = iota(k);
            let j2 = even_of(kp);
            debug_assert_ne!(j2, j1);
            // (4g-3, k', 4g-1, other): the root sends k' to 4g-1
            let bit2 = base.even[j2].0 != kp;
            place(&mut root, base.odd[last], base.even[j2], bit2);
            debug_assert_eq!(root[(kp - 1) as usize] + 1, 4 * g - 1);

            let free_even: Vec<usize> = (0..m).filter(|&j| j != j1 && j != j2).collect();
            let mut order: Vec<usize> = (0..free_even.len()).collect();
            loop {
                for bits in 0..1u64 << free_odd.len() {
                    let mut r = root.clone();
                    for (s, &t) in free_odd.iter().enumerate() {
                        let bit = bits >> (free_odd.len() - 1 - s) & 1 == 1;
                        place(&mut r, base.odd[t], base.even[free_even[order[s]]], bit);
                    }
                    out.push(Permutation::from_zero_based_unchecked(r));
                }
                if !next_permutation(&mut order) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// `2^{2g-2} (2g-1) (2g-3)!`, the size of [`excluded_roots`].
pub fn excluded_count(ctx: &GenusContext) -> BigUint {
    let g = ctx.genus();
    if g < 2 {
        return BigUint::zero();
    }
    (BigUint::from(2 * g - 1) * factorial(2 * g - 3)) << (2 * g - 2) as usize
}

/// `2^{2g-2} (4g-5) (2g-3)!`, an upper bound on the number of classes.
pub fn upper_bound(ctx: &GenusContext) -> Result<BigUint, EnumerationError> {
    let g = ctx.genus();
    if g < 2 {
        return Err(EnumerationError::BoundsUndefined(g));
    }
    Ok((BigUint::from(4 * g - 5) * factorial(2 * g - 3)) << (2 * g - 2) as usize)
}

/// Number of strictly increasing sequences `1 <= a_1 < … < a_L` with
/// `a_i <= 4i - 3`, where `L = (g-1)/2`.
pub fn count_lg(g: u32) -> Result<BigUint, EnumerationError> {
    if g < 3 || g.is_multiple_of(2) {
        return Err(EnumerationError::BoundsUndefined(g));
    }
    let len = ((g - 1) / 2) as usize;
    let top = 4 * len - 3;
    // ways[v]: sequences of the current length ending at v
    let mut ways = vec![BigUint::zero(); top + 1];
    ways[1] = BigUint::one();
    for i in 2..=len {
        let cap = 4 * i - 3;
        let mut next = vec![BigUint::zero(); top + 1];
        let mut prefix = BigUint::zero();
        for v in 1..=cap {
            next[v] = prefix.clone();
            prefix += &ways[v];
        }
        ways = next;
    }
    Ok(ways.into_iter().sum())
}

/// `|L_g| / (4 (2g-1)^2)`, a lower bound on the number of classes.
pub fn lower_bound(ctx: &GenusContext) -> Result<BigRational, EnumerationError> {
    let g = ctx.genus();
    let lg = count_lg(g)?;
    let denom = BigUint::from(4u32) * BigUint::from(2 * g - 1).pow(2);
    Ok(BigRational::new(lg.into(), denom.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub genus: u32,
    #[serde(serialize_with = "decimal::big")]
    pub root_count: BigUint,
    #[serde(serialize_with = "decimal::big")]
    pub excluded: BigUint,
    #[serde(serialize_with = "decimal::opt_big")]
    pub lg: Option<BigUint>,
    #[serde(serialize_with = "decimal::opt_ratio")]
    pub lower_bound: Option<BigRational>,
    #[serde(serialize_with = "decimal::big")]
    pub upper_bound: BigUint,
}

impl BoundsReport {
    pub fn new(ctx: &GenusContext) -> Result<Self, EnumerationError> {
        let g = ctx.genus();
        let (lg, lower) =
            if g >= 3 && g % 2 == 1 { (Some(count_lg(g)?), Some(lower_bound(ctx)?)) } else { (None, None) };
        Ok(BoundsReport {
            genus: g,
            root_count: root_count(ctx),
            excluded: excluded_count(ctx),
            lg,
            lower_bound: lower,
            upper_bound: upper_bound(ctx)?,
        })
    }

    pub fn lower_bound_f64(&self) -> Option<f64> {
        self.lower_bound.as_ref().and_then(|r| r.to_f64())
    }
}

/// Big numbers as decimal strings, rationals as `p/q`.
mod decimal {
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use serde::Serializer;

    pub fn big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn opt_big<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn opt_ratio<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: u32) -> GenusContext {
        GenusContext::new(g).unwrap()
    }

    #[test]
    fn base_involution_genus_two() {
        let b = base_involution(&ctx(2));
        assert_eq!(b.odd, vec![(1, 9), (3, 11), (5, 7)]);
        assert_eq!(b.even, vec![(2, 10), (4, 12), (6, 8)]);
        let c = ctx(2).canonical_perms();
        assert_eq!(b.to_perm(&ctx(2)), c.iota.compose(&c.tau).unwrap());
    }

    #[test]
    fn square_roots_genus_one() {
        let roots: Vec<_> = square_roots(&ctx(1)).collect();
        assert_eq!(
            roots,
            vec![
                Permutation::from_cycles(4, &[[1, 2, 3, 4]]).unwrap(),
                Permutation::from_cycles(4, &[[1, 4, 3, 2]]).unwrap()
            ]
        );
    }

    #[test]
    fn square_roots_square_to_base() {
        for g in 1..=3 {
            let c = ctx(g);
            let base = base_involution(&c).to_perm(&c);
            let roots: Vec<_> = square_roots(&c).collect();
            assert_eq!(BigUint::from(roots.len()), root_count(&c));
            for r in &roots {
                assert_eq!(r.compose(r).unwrap(), base);
                assert_eq!(r.cycle_type(), vec![4; 2 * g as usize - 1]);
            }
        }
    }

    #[test]
    fn root_counts() {
        let counts: Vec<u64> = (1..=4).map(|g| root_count(&ctx(g)).try_into().unwrap()).collect();
        assert_eq!(counts, vec![2, 48, 3840, 645120]);
    }

    #[test]
    fn small_genus_enumeration() {
        let opts = EnumerationOptions::default();
        assert_eq!(count_filling(&ctx(1), &opts).unwrap(), 2);
        assert_eq!(count_filling(&ctx(2), &opts).unwrap(), 0);
        assert_eq!(count_filling(&ctx(3), &opts).unwrap(), 600);
    }

    #[test]
    fn pruned_search_covers_every_root() {
        for g in 1..=4 {
            let c = ctx(g);
            let (_, stats) = search_filling(&c, &EnumerationOptions::default(), CountSink::default).unwrap();
            assert_eq!(stats.roots_covered, root_count(&c), "g={g}");
        }
    }

    #[test]
    fn guard_refuses_large_genus() {
        let opts = EnumerationOptions { jobs: None, guard: Guard { max_genus: 2 } };
        let err = count_filling(&ctx(3), &opts).unwrap_err();
        assert!(matches!(err, EnumerationError::GuardExceeded { genus: 3, max: 2, .. }));
        assert!(err.to_string().contains("3840"));
    }

    #[test]
    fn excluded_roots_genus_three() {
        let c = ctx(3);
        let ex = excluded_roots(&c).unwrap();
        assert_eq!(ex.len(), 480);
        assert_eq!(BigUint::from(480u32), excluded_count(&c));
        let mut uniq = ex.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 480);
        for r in &ex {
            let s = filling_candidate(&c, r);
            assert_eq!(s.apply(s.apply(1)), 1);
        }
    }

    #[test]
    fn bounds_values() {
        assert_eq!(upper_bound(&ctx(3)).unwrap(), BigUint::from(672u32));
        assert_eq!(upper_bound(&ctx(4)).unwrap(), BigUint::from(84480u32));
        let lg: Vec<u64> = [3, 5, 7].iter().map(|&g| count_lg(g).unwrap().try_into().unwrap()).collect();
        assert_eq!(lg, vec![1, 4, 22]);
        assert_eq!(lower_bound(&ctx(3)).unwrap(), BigRational::new(1.into(), 100.into()));
        assert!(count_lg(4).is_err());
    }
}
