//! Design isomorphism: invariants, an individualization–refinement
//! isomorphism test on the point/block incidence graph, and partitioning
//! of design lists into isomorphism classes.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::Design;
use crate::perm::Permutation;

/// Relabeling-invariant summary of a design. Unequal fingerprints prove
/// non-isomorphism; equal ones decide nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub v: usize,
    pub b: usize,
    pub k: usize,
    pub lambda: Option<usize>,
    /// `(intersection size, number of unordered block pairs)`.
    pub intersections: Vec<(usize, u64)>,
    /// Each block's intersection-size histogram, with multiplicity.
    pub block_profiles: Vec<(Vec<u32>, u32)>,
    /// `(co-occurrence count, number of unordered point pairs)`.
    pub pair_spectrum: Vec<(u32, u64)>,
}

pub fn fingerprint(d: &Design) -> Fingerprint {
    let k = d.k();
    let inc = d.incidence();
    let mut profiles: Vec<Vec<u32>> = vec![vec![0; k + 1]; d.b()];
    for i in 0..inc.len() {
        for j in i + 1..inc.len() {
            let s = inc[i].intersection_len(&inc[j]);
            profiles[i][s] += 1;
            profiles[j][s] += 1;
        }
    }
    let mut intersections = vec![0u64; k + 1];
    for p in &profiles {
        for (s, &c) in p.iter().enumerate() {
            intersections[s] += c as u64;
        }
    }
    let intersections = intersections
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(s, c)| (s, c / 2))
        .collect();
    let mut block_profiles: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    for p in profiles {
        *block_profiles.entry(p).or_insert(0) += 1;
    }
    let v = d.v();
    let counts = d.pair_counts();
    let mut spectrum: BTreeMap<u32, u64> = BTreeMap::new();
    for x in 0..v {
        for y in x + 1..v {
            *spectrum.entry(counts[x * v + y]).or_insert(0) += 1;
        }
    }
    let lambda = (spectrum.len() == 1).then(|| *spectrum.keys().next().unwrap() as usize);
    Fingerprint {
        v,
        b: d.b(),
        k,
        lambda: if v < 2 { None } else { lambda },
        intersections,
        block_profiles: block_profiles.into_iter().collect(),
        pair_spectrum: spectrum.into_iter().collect(),
    }
}

/// Outcome of an isomorphism test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoCertificate {
    /// A point bijection mapping the first block set onto the second.
    Isomorphic(Permutation),
    /// Names the invariant that differs, or reports an exhausted search.
    NotIsomorphic(String),
}

impl IsoCertificate {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, Self::Isomorphic(_))
    }

    pub fn bijection(&self) -> Option<&Permutation> {
        match self {
            Self::Isomorphic(p) => Some(p),
            Self::NotIsomorphic(_) => None,
        }
    }
}

/// Bipartite incidence graph: points `0..v`, then blocks.
struct Graph {
    v: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    fn new(d: &Design) -> Self {
        let v = d.v();
        let mut adj = vec![Vec::new(); v + d.b()];
        for (i, b) in d.blocks().iter().enumerate() {
            for &p in b {
                adj[p].push((v + i) as u32);
                adj[v + i].push(p as u32);
            }
        }
        Self { v, adj }
    }

    fn initial(&self) -> Vec<u32> {
        (0..self.adj.len()).map(|x| (x >= self.v) as u32).collect()
    }
}

#[inline]
fn mix(x: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Renumbers colors by rank of `keys`; returns the new color count and a
/// hash of the sorted `(key, multiplicity)` list.
fn rerank(keys: &[(u32, u64)], colors: &mut [u32]) -> (usize, u64) {
    let mut sorted: Vec<(u32, u64)> = keys.to_vec();
    sorted.sort_unstable();
    let mut distinct: Vec<(u32, u64)> = Vec::new();
    let mut trace = 0u64;
    let mut run = 0u64;
    for (i, &key) in sorted.iter().enumerate() {
        run += 1;
        if i + 1 == sorted.len() || sorted[i + 1] != key {
            distinct.push(key);
            trace = mix(trace ^ mix(key.0 as u64) ^ key.1.rotate_left(17) ^ run.rotate_left(41));
            run = 0;
        }
    }
    for (c, key) in colors.iter_mut().zip(keys) {
        *c = distinct.binary_search(key).unwrap() as u32;
    }
    (distinct.len(), trace)
}

/// Color refinement to the coarsest equitable partition finer than
/// `colors`. The returned trace depends only on the isomorphism type of the
/// colored graph.
fn refine(g: &Graph, colors: &mut [u32]) -> u64 {
    let n = colors.len();
    let mut count = {
        let mut c = colors.to_vec();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    let mut trace = count as u64;
    let mut keys = vec![(0u32, 0u64); n];
    loop {
        for x in 0..n {
            let mut h = 0u64;
            for &y in &g.adj[x] {
                h = h.wrapping_add(mix(colors[y as usize] as u64));
            }
            keys[x] = (colors[x], h);
        }
        let (next, t) = rerank(&keys, colors);
        trace = mix(trace ^ t);
        if next == count {
            return trace;
        }
        count = next;
    }
}

fn individualize(colors: &mut [u32], x: usize) {
    let keys: Vec<(u32, u64)> = colors
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, (i == x) as u64))
        .collect();
    rerank(&keys, colors);
}

/// The first smallest non-singleton cell among the points, as a color.
fn target_cell(colors: &[u32], v: usize) -> Option<u32> {
    let mut sizes: HashMap<u32, usize> = HashMap::new();
    for &c in &colors[..v] {
        *sizes.entry(c).or_insert(0) += 1;
    }
    sizes
        .into_iter()
        .filter(|&(_, s)| s > 1)
        .min_by_key(|&(c, s)| (s, c))
        .map(|(c, _)| c)
}

struct Matcher<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    d1: &'a Design,
    d2: &'a Design,
    nodes: u64,
    budget: u64,
}

impl Matcher<'_> {
    fn search(&mut self, c1: &[u32], c2: &[u32]) -> Option<Permutation> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let v = self.g1.v;
        let Some(cell) = target_cell(c1, v) else {
            return self.leaf(c1, c2);
        };
        let x = (0..v).find(|&p| c1[p] == cell).unwrap();
        let mut n1 = c1.to_vec();
        individualize(&mut n1, x);
        let t1 = refine(self.g1, &mut n1);
        for y in (0..v).filter(|&p| c2[p] == cell) {
            let mut n2 = c2.to_vec();
            individualize(&mut n2, y);
            if refine(self.g2, &mut n2) != t1 {
                continue;
            }
            if let Some(p) = self.search(&n1, &n2) {
                return Some(p);
            }
        }
        None
    }

    fn leaf(&self, c1: &[u32], c2: &[u32]) -> Option<Permutation> {
        let v = self.g1.v;
        let mut by_color: HashMap<u32, usize> = HashMap::with_capacity(v);
        for p in 0..v {
            if by_color.insert(c2[p], p).is_some() {
                return None;
            }
        }
        let images: Option<Vec<usize>> = (0..v).map(|p| by_color.get(&c1[p]).copied()).collect();
        let pi = Permutation::from_images(&images?).ok()?;
        (self.d1.relabel(&pi).ok()? == *self.d2).then_some(pi)
    }
}

/// Decides isomorphism of two designs, returning a witness bijection or the
/// reason none exists.
pub fn are_isomorphic(d1: &Design, d2: &Design) -> IsoCertificate {
    are_isomorphic_impl(d1, d2, u64::MAX)
}

fn are_isomorphic_impl(d1: &Design, d2: &Design, budget: u64) -> IsoCertificate {
    if (d1.v(), d1.k(), d1.b()) != (d2.v(), d2.k(), d2.b()) {
        return IsoCertificate::NotIsomorphic("parameters (v, k, b) differ".into());
    }
    if d1 == d2 {
        return IsoCertificate::Isomorphic(Permutation::identity(d1.v()));
    }
    let f1 = fingerprint(d1);
    let f2 = fingerprint(d2);
    if let Some(field) = fingerprint_mismatch(&f1, &f2) {
        return IsoCertificate::NotIsomorphic(format!("fingerprint field `{field}` differs"));
    }
    if triple_profiles(d1) != triple_profiles(d2) {
        return IsoCertificate::NotIsomorphic("triple co-occurrence profiles differ".into());
    }
    isomorphism_search(d1, d2, budget)
}

/// Like [`are_isomorphic`], but gives up (returning `None`) after visiting
/// `budget` search nodes.
pub fn are_isomorphic_within(d1: &Design, d2: &Design, budget: u64) -> Option<IsoCertificate> {
    match are_isomorphic_impl(d1, d2, budget) {
        IsoCertificate::NotIsomorphic(r) if r.starts_with(EXHAUSTED) => None,
        c => Some(c),
    }
}

const EXHAUSTED: &str = "search budget exhausted";

fn isomorphism_search(d1: &Design, d2: &Design, budget: u64) -> IsoCertificate {
    let g1 = Graph::new(d1);
    let g2 = Graph::new(d2);
    let mut c1 = g1.initial();
    let mut c2 = g2.initial();
    if refine(&g1, &mut c1) != refine(&g2, &mut c2) {
        return IsoCertificate::NotIsomorphic("equitable partitions differ".into());
    }
    let mut m = Matcher {
        g1: &g1,
        g2: &g2,
        d1,
        d2,
        nodes: 0,
        budget,
    };
    match m.search(&c1, &c2) {
        Some(p) => IsoCertificate::Isomorphic(p),
        None if m.nodes > budget => IsoCertificate::NotIsomorphic(EXHAUSTED.into()),
        None => IsoCertificate::NotIsomorphic(format!(
            "exhaustive search found no bijection ({} nodes)",
            m.nodes
        )),
    }
}

fn fingerprint_mismatch(a: &Fingerprint, b: &Fingerprint) -> Option<&'static str> {
    if (a.v, a.b, a.k) != (b.v, b.b, b.k) {
        Some("parameters")
    } else if a.lambda != b.lambda {
        Some("lambda")
    } else if a.intersections != b.intersections {
        Some("intersections")
    } else if a.block_profiles != b.block_profiles {
        Some("block_profiles")
    } else if a.pair_spectrum != b.pair_spectrum {
        Some("pair_spectrum")
    } else {
        None
    }
}

/// Largest `v` for which [`triple_profiles`] is computed.
pub const TRIPLE_PROFILE_MAX_V: usize = 256;

/// For every point pair `{x, y}`, the histogram over third points `z` of the
/// number of blocks containing `{x, y, z}`; returned as a multiset of
/// histograms. Empty when `v` exceeds [`TRIPLE_PROFILE_MAX_V`].
pub fn triple_profiles(d: &Design) -> Vec<(Vec<(u32, u32)>, u32)> {
    let v = d.v();
    if v > TRIPLE_PROFILE_MAX_V || d.k() < 3 {
        return Vec::new();
    }
    let mut cube = vec![0u16; v * v * v];
    for b in d.blocks() {
        for (i, &x) in b.iter().enumerate() {
            for (j, &y) in b.iter().enumerate().skip(i + 1) {
                for &z in &b[j + 1..] {
                    cube[(x * v + y) * v + z] += 1;
                }
            }
        }
    }
    let at = |a: usize, b: usize, c: usize| {
        let mut t = [a, b, c];
        t.sort_unstable();
        cube[(t[0] * v + t[1]) * v + t[2]]
    };
    let mut profiles: BTreeMap<Vec<(u32, u32)>, u32> = BTreeMap::new();
    let mut hist: BTreeMap<u32, u32> = BTreeMap::new();
    for x in 0..v {
        for y in x + 1..v {
            hist.clear();
            for z in (0..v).filter(|&z| z != x && z != y) {
                *hist.entry(at(x, y, z) as u32).or_insert(0) += 1;
            }
            *profiles.entry(hist.iter().map(|(&a, &b)| (a, b)).collect()).or_insert(0) += 1;
        }
    }
    profiles.into_iter().collect()
}

/// For each point, the refinement trace after individualizing it; returned
/// as a sorted multiset.
pub fn point_traces(d: &Design) -> Vec<u64> {
    let g = Graph::new(d);
    let mut base = g.initial();
    refine(&g, &mut base);
    let mut traces: Vec<u64> = (0..d.v())
        .map(|p| {
            let mut c = base.clone();
            individualize(&mut c, p);
            refine(&g, &mut c)
        })
        .collect();
    traces.sort_unstable();
    traces
}

/// Invariants beyond the fingerprint, used to bucket designs before any
/// backtracking search.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RefinedInvariant {
    pub triples: Vec<(Vec<(u32, u32)>, u32)>,
    pub point_traces: Vec<u64>,
}

pub fn refined_invariant(d: &Design) -> RefinedInvariant {
    RefinedInvariant {
        triples: triple_profiles(d),
        point_traces: point_traces(d),
    }
}

/// Partition of a design list into isomorphism classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoPartition {
    /// Member indices of each class, ascending; classes ordered by their
    /// representative's block list.
    pub classes: Vec<Vec<usize>>,
    /// Index of the representative of each class: the member with the
    /// lexicographically least block list.
    pub representatives: Vec<usize>,
}

impl IsoPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class index of every input design.
    pub fn class_of(&self) -> Vec<usize> {
        let n = self.classes.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (c, members) in self.classes.iter().enumerate() {
            for &i in members {
                out[i] = c;
            }
        }
        out
    }
}

pub fn iso_classes(designs: &[Design]) -> IsoPartition {
    let keys: Vec<(Fingerprint, RefinedInvariant)> = designs
        .par_iter()
        .map(|d| (fingerprint(d), refined_invariant(d)))
        .collect();
    let mut buckets: BTreeMap<&(Fingerprint, RefinedInvariant), Vec<usize>> = BTreeMap::new();
    for (i, key) in keys.iter().enumerate() {
        buckets.entry(key).or_default().push(i);
    }
    let buckets: Vec<Vec<usize>> = buckets.into_values().collect();
    let mut classes: Vec<Vec<usize>> = buckets
        .par_iter()
        .flat_map_iter(|members| classify_bucket(designs, members))
        .collect();
    for c in &mut classes {
        c.sort_unstable();
    }
    let rep_of = |c: &Vec<usize>| {
        *c.iter()
            .min_by(|&&a, &&b| designs[a].blocks().cmp(designs[b].blocks()).then(a.cmp(&b)))
            .unwrap()
    };
    let mut with_reps: Vec<(usize, Vec<usize>)> = classes.into_iter().map(|c| (rep_of(&c), c)).collect();
    with_reps.sort_by(|a, b| {
        designs[a.0]
            .blocks()
            .cmp(designs[b.0].blocks())
            .then(a.0.cmp(&b.0))
    });
    IsoPartition {
        representatives: with_reps.iter().map(|(r, _)| *r).collect(),
        classes: with_reps.into_iter().map(|(_, c)| c).collect(),
    }
}

/// Union-find over a bucket of designs sharing all invariants.
fn classify_bucket(designs: &[Design], members: &[usize]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..members.len() {
        let hit = roots.iter().copied().find(|&r| {
            are_isomorphic(&designs[members[r]], &designs[members[i]]).is_isomorphic()
        });
        match hit {
            Some(r) => {
                let ri = find(&mut parent, i);
                parent[ri] = find(&mut parent, r);
            }
            None => roots.push(i),
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..members.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(members[i]);
    }
    groups.into_values().collect()
}
