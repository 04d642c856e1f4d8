//! Exhaustive search for block-transitive 2-(k²,k,λ) designs admitting a
//! given group.
//!
//! A block `B` of such a design has a stabilizer of order `m = |G|/b` with
//! `b = λk(k+1)`, and `B` is a union of orbits of that stabilizer. So every
//! design is reached from some conjugacy class representative `H` of order
//! `m` and some union of `H`-orbits of total size `k`.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::PointSet;
use crate::design::Design;
use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};
use crate::iso::{iso_classes, IsoPartition};
use crate::subgroups::{normalizer, subgroups_of_order_bounded};

/// Abort threshold for orbit-union candidates from one subgroup.
pub const DEFAULT_CANDIDATE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct SearchJob<'g> {
    pub group: &'g GroupTable,
    pub k: usize,
    pub lambda: usize,
}

impl<'g> SearchJob<'g> {
    /// Requires `|points| = k²` and `λ | k`.
    pub fn new(group: &'g GroupTable, k: usize, lambda: usize) -> Result<Self> {
        if k < 2 || group.degree() != k * k {
            return Err(Error::Precondition(format!(
                "group degree {} is not k² for k = {k}",
                group.degree()
            )));
        }
        if lambda == 0 || k % lambda != 0 {
            return Err(Error::Precondition(format!("λ = {lambda} does not divide k = {k}")));
        }
        Ok(Self { group, k, lambda })
    }

    pub fn b(&self) -> usize {
        self.lambda * self.k * (self.k + 1)
    }

    /// `|G|/b`, or `None` when `b` does not divide `|G|`.
    pub fn stabilizer_order(&self) -> Option<usize> {
        let b = self.b();
        (self.group.order() % b == 0).then(|| self.group.order() / b)
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub candidate_limit: usize,
    /// Bound passed to the subgroup enumeration.
    pub subgroup_order_bound: usize,
    /// Partition the found designs into isomorphism classes.
    pub classify: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
            subgroup_order_bound: crate::subgroups::DEFAULT_ORDER_BOUND,
            classify: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FoundDesign {
    pub design: Design,
    /// The least block of the design.
    pub base_block: Vec<usize>,
    /// Index of the subgroup class whose orbits produced it.
    pub subgroup_class: usize,
    pub stabilizer_order: usize,
    pub flag_transitive: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub subgroup_classes: usize,
    pub candidates: usize,
    pub passed_pair_filter: usize,
    pub stabilizer_exact: usize,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub k: usize,
    pub lambda: usize,
    pub b: usize,
    pub stabilizer_order: Option<usize>,
    /// `b ∤ |G|`: no design can exist.
    pub inadmissible_b: bool,
    /// Distinct block sets, sorted by block list.
    pub designs: Vec<FoundDesign>,
    /// Isomorphism classes of `designs` (absent if classification was off).
    pub iso: Option<IsoPartition>,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn design_count(&self) -> usize {
        self.designs.len()
    }

    pub fn iso_class_count(&self) -> Option<usize> {
        self.iso.as_ref().map(IsoPartition::class_count)
    }
}

/// All unions of `H`-orbits with exactly `k` points, each sorted, in the
/// order produced by choosing orbits in [`Subgroup::orbits`] order.
pub fn orbit_union_blocks(h: &Subgroup<'_>, k: usize) -> Vec<Vec<usize>> {
    let orbits = h.orbits();
    let mut out = Vec::new();
    for_each_union(&orbits, k, &mut |chosen| {
        let mut b: Vec<usize> = chosen.iter().flat_map(|&i| orbits[i].iter().copied()).collect();
        b.sort_unstable();
        out.push(b);
    });
    out.sort_unstable();
    out
}

/// Number of subsets of `lengths` summing to `k` (saturating).
pub fn union_count(lengths: &[usize], k: usize) -> u128 {
    let mut ways = vec![0u128; k + 1];
    ways[0] = 1;
    for &l in lengths {
        for s in (l..=k).rev() {
            ways[s] = ways[s].saturating_add(ways[s - l]);
        }
    }
    ways[k]
}

fn for_each_union(orbits: &[Vec<usize>], k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(orbits: &[Vec<usize>], start: usize, left: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if left == 0 {
            f(cur);
            return;
        }
        for i in start..orbits.len() {
            let l = orbits[i].len();
            // orbits are sorted by length
            if l > left {
                break;
            }
            cur.push(i);
            rec(orbits, i + 1, left - l, cur, f);
            cur.pop();
        }
    }
    rec(orbits, 0, k, &mut Vec::new(), f);
}

/// Orbits of the group on unordered pairs of points.
pub struct PairOrbits {
    v: usize,
    id: Vec<u32>,
    sizes: Vec<usize>,
}

impl PairOrbits {
    pub fn new(g: &GroupTable) -> Self {
        let v = g.degree();
        let idx = |x: usize, y: usize| if x < y { x * v + y } else { y * v + x };
        let mut parent: Vec<usize> = (0..v * v).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for gen in g.generators() {
            for x in 0..v {
                for y in x + 1..v {
                    let a = find(&mut parent, idx(x, y));
                    let b = find(&mut parent, idx(gen.image(x), gen.image(y)));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut id = vec![u32::MAX; v * v];
        let mut label: BTreeMap<usize, u32> = BTreeMap::new();
        let mut sizes = Vec::new();
        for x in 0..v {
            for y in x + 1..v {
                let r = find(&mut parent, idx(x, y));
                let next = label.len() as u32;
                let l = *label.entry(r).or_insert(next);
                if l as usize == sizes.len() {
                    sizes.push(0);
                }
                sizes[l as usize] += 1;
                id[x * v + y] = l;
                id[y * v + x] = l;
            }
        }
        Self { v, id, sizes }
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    #[inline]
    pub fn orbit_of(&self, x: usize, y: usize) -> usize {
        self.id[x * self.v + y] as usize
    }

    /// Whether the orbit of `block` of length `b` covers every pair exactly
    /// `λ` times, i.e. `b · c_O = λ |O|` for every pair orbit `O`, where
    /// `c_O` counts the pairs of `block` lying in `O`.
    pub fn balanced(&self, block: &[usize], b: usize, lambda: usize, counts: &mut Vec<usize>) -> bool {
        counts.clear();
        counts.resize(self.sizes.len(), 0);
        for (i, &x) in block.iter().enumerate() {
            for &y in &block[i + 1..] {
                counts[self.orbit_of(x, y)] += 1;
            }
        }
        counts
            .iter()
            .zip(&self.sizes)
            .all(|(&c, &s)| c * b == lambda * s)
    }
}

/// Runs the search for one `(G, k, λ)`.
pub fn run(job: &SearchJob<'_>, opts: &SearchOptions) -> Result<SearchResult> {
    let pairs = PairOrbits::new(job.group);
    run_with_pairs(job, opts, &pairs)
}

fn run_with_pairs(job: &SearchJob<'_>, opts: &SearchOptions, pairs: &PairOrbits) -> Result<SearchResult> {
    let g = job.group;
    let b = job.b();
    let mut result = SearchResult {
        k: job.k,
        lambda: job.lambda,
        b,
        stabilizer_order: job.stabilizer_order(),
        inadmissible_b: false,
        designs: Vec::new(),
        iso: None,
        stats: SearchStats::default(),
    };
    let Some(m) = result.stabilizer_order else {
        result.inadmissible_b = true;
        result.iso = opts.classify.then(|| iso_classes(&[]));
        return Ok(result);
    };
    let classes = subgroups_of_order_bounded(g, m, opts.subgroup_order_bound)?.classes;
    result.stats.subgroup_classes = classes.len();

    let per_class: Vec<ClassOutcome> = classes
        .par_iter()
        .enumerate()
        .map(|(ci, h)| search_class(job, opts, pairs, ci, h, m))
        .collect::<Result<_>>()?;

    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    for out in per_class {
        result.stats.candidates += out.candidates;
        result.stats.passed_pair_filter += out.balanced;
        result.stats.stabilizer_exact += out.exact;
        for (ci, base) in out.bases {
            let design = Design::from_base_block(g, &base)?;
            if !seen.insert(design.blocks().to_vec()) {
                continue;
            }
            verify(job, &design)?;
            let flag_transitive = design.is_flag_transitive(g)?;
            result.designs.push(FoundDesign {
                base_block: design.blocks()[0].clone(),
                design,
                subgroup_class: ci,
                stabilizer_order: m,
                flag_transitive,
            });
        }
    }
    result
        .designs
        .sort_by(|a, b| a.design.blocks().cmp(b.design.blocks()));
    if opts.classify {
        let ds: Vec<Design> = result.designs.iter().map(|f| f.design.clone()).collect();
        result.iso = Some(iso_classes(&ds));
    }
    Ok(result)
}

struct ClassOutcome {
    candidates: usize,
    balanced: usize,
    exact: usize,
    /// `(class index, base block)`, one per orbit of `N_G(H)` on accepted
    /// blocks.
    bases: Vec<(usize, Vec<usize>)>,
}

fn search_class(
    job: &SearchJob<'_>,
    opts: &SearchOptions,
    pairs: &PairOrbits,
    ci: usize,
    h: &Subgroup<'_>,
    m: usize,
) -> Result<ClassOutcome> {
    let g = job.group;
    let orbits = h.orbits();
    let lengths: Vec<usize> = orbits.iter().map(Vec::len).collect();
    let total = union_count(&lengths, job.k);
    if total > opts.candidate_limit as u128 {
        return Err(Error::Unsupported(format!(
            "subgroup class {ci} yields {total} orbit-union candidates, over the limit of {}",
            opts.candidate_limit
        )));
    }
    let norm = normalizer(h);
    let mut out = ClassOutcome {
        candidates: 0,
        balanced: 0,
        exact: 0,
        bases: Vec::new(),
    };
    let mut keys: HashSet<Vec<usize>> = HashSet::new();
    let mut counts = Vec::new();
    let mut block = Vec::with_capacity(job.k);
    for_each_union(&orbits, job.k, &mut |chosen| {
        out.candidates += 1;
        block.clear();
        block.extend(chosen.iter().flat_map(|&i| orbits[i].iter().copied()));
        block.sort_unstable();
        if !pairs.balanced(&block, job.b(), job.lambda, &mut counts) {
            return;
        }
        out.balanced += 1;
        let mask = PointSet::from_points(g.degree(), &block);
        if g.set_stabilizer_order(&block, &mask) != m {
            return;
        }
        out.exact += 1;
        // Here G_B = H, so blocks from this class give the same design iff
        // they differ by an element of N_G(H).
        let key = norm
            .permutations()
            .map(|n| n.apply_set(&block))
            .min()
            .expect("normalizer is nonempty");
        if keys.insert(key) {
            out.bases.push((ci, block.clone()));
        }
    });
    Ok(out)
}

/// Independent re-check of an accepted design.
fn verify(job: &SearchJob<'_>, d: &Design) -> Result<()> {
    let v = job.k * job.k;
    let lambda = d.lambda_of(2)?;
    let gamma = d.lambda_of(1)?;
    let ok = d.b() == job.b()
        && lambda == Some(job.lambda)
        && gamma.is_some_and(|r| r * (job.k - 1) == job.lambda * (v - 1) && d.b() * job.k == v * r);
    if !ok {
        return Err(Error::Inconsistent(format!(
            "accepted block set fails verification: b={}, λ={lambda:?}, γ={gamma:?}",
            d.b()
        )));
    }
    Ok(())
}

/// Divisors `λ ≥ 2` of `k`, the values searched by [`full_sweep`].
pub fn sweep_lambdas(k: usize) -> Vec<usize> {
    (2..=k).filter(|l| k % l == 0).collect()
}

/// Runs [`run`] for every divisor `λ ≥ 2` of `k`.
pub fn full_sweep(group: &GroupTable, k: usize, opts: &SearchOptions) -> Result<BTreeMap<usize, SearchResult>> {
    let pairs = PairOrbits::new(group);
    let mut out = BTreeMap::new();
    for lambda in sweep_lambdas(k) {
        let job = SearchJob::new(group, k, lambda)?;
        out.insert(lambda, run_with_pairs(&job, opts, &pairs)?);
    }
    Ok(out)
}
