//! Subgroups of a given order, one representative per conjugacy class.
//!
//! The lattice of subgroups whose order divides `m` is built bottom-up from
//! cyclic seeds, adding one element at a time. Only one subgroup per
//! conjugacy class is ever extended: every extension of a conjugate
//! `gHg^-1` is itself conjugate to an extension of `H`, so nothing is lost.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::group::{GroupTable, Subgroup};

/// Largest subgroup order accepted by [`subgroups_of_order`].
pub const DEFAULT_ORDER_BOUND: usize = 256;

/// Result of a subgroup enumeration.
#[derive(Debug, Clone)]
pub struct ClassList<'g> {
    /// One representative per class, sorted by element list.
    pub classes: Vec<Subgroup<'g>>,
    /// Class sizes, parallel to `classes`.
    pub class_sizes: Vec<usize>,
    /// Set when `m` does not divide `|G|`, so the list is empty by Lagrange.
    pub lagrange_excluded: bool,
}

/// Conjugacy class representatives of subgroups of order `m`, with the
/// default bound on `m`.
pub fn subgroups_of_order(g: &GroupTable, m: usize) -> Result<ClassList<'_>> {
    subgroups_of_order_bounded(g, m, DEFAULT_ORDER_BOUND)
}

pub fn subgroups_of_order_bounded(g: &GroupTable, m: usize, bound: usize) -> Result<ClassList<'_>> {
    if m == 0 {
        return Err(Error::Precondition("subgroup order must be positive".into()));
    }
    if m > bound {
        return Err(Error::Unsupported(format!(
            "subgroup order {m} exceeds the bound {bound}"
        )));
    }
    if g.order() % m != 0 {
        return Ok(ClassList {
            classes: Vec::new(),
            class_sizes: Vec::new(),
            lagrange_excluded: true,
        });
    }
    let mut lattice = Lattice::new(g, m);
    lattice.run();
    let mut found: Vec<(Vec<u32>, usize)> = lattice
        .reps
        .into_iter()
        .filter(|r| r.elements.len() == m)
        .map(|r| (r.elements, r.class_size))
        .collect();
    found.sort();
    Ok(ClassList {
        classes: found
            .iter()
            .map(|(e, _)| Subgroup::new_unchecked(g, e.clone()))
            .collect(),
        class_sizes: found.iter().map(|(_, s)| *s).collect(),
        lagrange_excluded: false,
    })
}

struct ClassRep {
    elements: Vec<u32>,
    normalizer: Vec<u32>,
    class_size: usize,
}

struct Lattice<'g> {
    g: &'g GroupTable,
    m: usize,
    /// Elements whose order divides `m`.
    admissible: Vec<bool>,
    /// Every conjugate of every class found so far.
    seen: HashSet<Vec<u32>>,
    reps: Vec<ClassRep>,
    scratch: Vec<u16>,
}

impl<'g> Lattice<'g> {
    fn new(g: &'g GroupTable, m: usize) -> Self {
        let admissible = (0..g.order())
            .map(|i| m % g.element_order(i) as usize == 0)
            .collect();
        Self {
            g,
            m,
            admissible,
            seen: HashSet::new(),
            reps: Vec::new(),
            scratch: Vec::with_capacity(g.degree()),
        }
    }

    fn run(&mut self) {
        let trivial = vec![self.g.identity_index() as u32];
        self.register(trivial);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(r) = queue.pop_front() {
            if self.reps[r].elements.len() == self.m {
                continue;
            }
            let before = self.reps.len();
            self.extend(r);
            queue.extend(before..self.reps.len());
        }
    }

    /// Tries every admissible `y` outside `H`, up to left multiplication by
    /// `H` and conjugation by `N(H)`, both of which preserve the class of
    /// `<H, y>`.
    fn extend(&mut self, r: usize) {
        let g = self.g;
        let h = Subgroup::new_unchecked(g, self.reps[r].elements.clone());
        let h_gens = h.generators();
        let n_sub = Subgroup::new_unchecked(g, self.reps[r].normalizer.clone());
        let n_gens = n_sub.generators();
        let mut covered = vec![false; g.order()];
        for &e in h.element_indices() {
            covered[e as usize] = true;
        }
        for y in 0..g.order() {
            if covered[y] || !self.admissible[y] {
                continue;
            }
            self.mark_orbit(y, &h_gens, &n_gens, &mut covered);
            let mut gens = h_gens.clone();
            gens.push(y);
            let Some(k) = g.closure(&gens, self.m) else {
                continue;
            };
            if self.m % k.len() != 0 || self.seen.contains(&k) {
                continue;
            }
            self.register(k);
        }
    }

    fn mark_orbit(&mut self, y: usize, h_gens: &[usize], n_gens: &[usize], covered: &mut [bool]) {
        covered[y] = true;
        let mut stack = vec![y];
        while let Some(x) = stack.pop() {
            for &a in h_gens {
                let z = self.g.mul(a, x, &mut self.scratch);
                if !covered[z] {
                    covered[z] = true;
                    stack.push(z);
                }
            }
            for &n in n_gens {
                let z = self.g.conj(x, n, &mut self.scratch);
                if !covered[z] {
                    covered[z] = true;
                    stack.push(z);
                }
            }
        }
    }

    /// Records a new class: its normalizer, all conjugates, and the least
    /// conjugate as representative.
    fn register(&mut self, k: Vec<u32>) {
        let g = self.g;
        let sub = Subgroup::new_unchecked(g, k);
        let k_gens = sub.generators();
        let normalizer: Vec<u32> = (0..g.order())
            .filter(|&x| {
                k_gens
                    .iter()
                    .all(|&s| sub.contains_index(g.conj(s, x, &mut self.scratch)))
            })
            .map(|x| x as u32)
            .collect();
        let mut done = vec![false; g.order()];
        let mut best: Option<Vec<u32>> = None;
        let mut class_size = 0;
        for x in 0..g.order() {
            if done[x] {
                continue;
            }
            // x N(K) all give the same conjugate.
            for &n in &normalizer {
                done[g.mul(n as usize, x, &mut self.scratch)] = true;
            }
            let conj = sub.conjugate(x).element_indices().to_vec();
            if best.as_ref().is_none_or(|b| conj < *b) {
                best = Some(conj.clone());
            }
            self.seen.insert(conj);
            class_size += 1;
        }
        let rep = best.expect("at least one conjugate");
        // Normalizer of the representative, not of `k`.
        let rep_sub = Subgroup::new_unchecked(g, rep.clone());
        let rep_gens = rep_sub.generators();
        let normalizer = (0..g.order())
            .filter(|&x| {
                rep_gens
                    .iter()
                    .all(|&s| rep_sub.contains_index(g.conj(s, x, &mut self.scratch)))
            })
            .map(|x| x as u32)
            .collect();
        self.reps.push(ClassRep {
            elements: rep,
            normalizer,
            class_size,
        });
    }
}

/// Normalizer of `h` in its parent group.
pub fn normalizer<'g>(h: &Subgroup<'g>) -> Subgroup<'g> {
    let g = h.parent();
    let gens = h.generators();
    let mut scratch = Vec::new();
    let elements = (0..g.order())
        .filter(|&x| gens.iter().all(|&s| h.contains_index(g.conj(s, x, &mut scratch))))
        .map(|x| x as u32)
        .collect();
    Subgroup::new_unchecked(g, elements)
}

/// An element `x` (by index) with `x H1 x^-1 = H2`, if one exists.
pub fn are_conjugate(h1: &Subgroup<'_>, h2: &Subgroup<'_>) -> Option<usize> {
    let g = h1.parent();
    if !std::ptr::eq(g, h2.parent()) || h1.order() != h2.order() {
        return None;
    }
    let profile = |h: &Subgroup<'_>| {
        let mut o: Vec<u32> = h
            .element_indices()
            .iter()
            .map(|&e| g.element_order(e as usize))
            .collect();
        o.sort_unstable();
        o
    };
    if profile(h1) != profile(h2) || h1.orbit_lengths() != h2.orbit_lengths() {
        return None;
    }
    let gens = h1.generators();
    let mut scratch = Vec::new();
    (0..g.order()).find(|&x| {
        gens.iter()
            .all(|&s| h2.contains_index(g.conj(s, x, &mut scratch)))
    })
}
