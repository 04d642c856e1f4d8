//! Permutation equivalence of transitive groups, and orbits of designs
//! under relabelings that normalize a group.

use std::collections::HashMap;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::perm::Permutation;

const UNSET: u32 = u32::MAX;

/// A relabeling `π` with `π g π⁻¹ ∈ K` for every `g ∈ G`
/// (see [`Permutation::conjugate_by`]), if `G` and `K` are permutation
/// equivalent. Both groups must be transitive of the same degree.
pub fn permutation_equivalence(g: &GroupTable, k: &GroupTable) -> Option<Permutation> {
    if g.degree() != k.degree() || g.order() != k.order() || !g.is_transitive() || !k.is_transitive() {
        return None;
    }
    let gens: Vec<usize> = g
        .generators()
        .iter()
        .map(|p| g.index_of(p.images()).expect("generator in its group"))
        .collect();
    if gens.is_empty() {
        return (g.order() == 1).then(|| Permutation::identity(g.degree()));
    }
    let shapes: Vec<Vec<usize>> = (0..k.order()).map(|x| cycle_shape(k.element(x))).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let shape = cycle_shape(g.element(x));
            let all: Vec<usize> = (0..k.order()).filter(|&y| shapes[y] == shape).collect();
            // Inner automorphisms of K fix the first image up to conjugacy.
            if i == 0 {
                class_representatives(k, &all)
            } else {
                all
            }
        })
        .collect();
    let mut search = Search {
        g,
        k,
        gens: &gens,
        candidates: &candidates,
        images: Vec::with_capacity(gens.len()),
    };
    search.run()
}

struct Search<'a> {
    g: &'a GroupTable,
    k: &'a GroupTable,
    gens: &'a [usize],
    candidates: &'a [Vec<usize>],
    images: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self) -> Option<Permutation> {
        let depth = self.images.len();
        if depth == self.gens.len() {
            let phi = homomorphism(self.g, self.k, self.gens, &self.images)?;
            return relabeling(self.g, self.k, &phi);
        }
        for &y in &self.candidates[depth] {
            self.images.push(y);
            // The restriction to the generators fixed so far must already
            // be a homomorphism.
            let ok = homomorphism(self.g, self.k, &self.gens[..=depth], &self.images).is_some();
            if ok {
                if let Some(pi) = self.run() {
                    return Some(pi);
                }
            }
            self.images.pop();
        }
        None
    }
}

/// Extends `gens[i] ↦ images[i]` to the subgroup they generate, or `None`
/// if that is not a well-defined injective map.
fn homomorphism(g: &GroupTable, k: &GroupTable, gens: &[usize], images: &[usize]) -> Option<Vec<u32>> {
    let mut phi = vec![UNSET; g.order()];
    let mut used = vec![false; k.order()];
    let (gs, ks) = (&mut Vec::new(), &mut Vec::new());
    phi[g.identity_index()] = k.identity_index() as u32;
    used[k.identity_index()] = true;
    let mut queue = vec![g.identity_index()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&a, &b) in gens.iter().zip(images) {
            let y = g.mul(x, a, gs);
            let img = k.mul(phi[x] as usize, b, ks) as u32;
            if phi[y] == UNSET {
                if used[img as usize] {
                    return None;
                }
                used[img as usize] = true;
                phi[y] = img;
                queue.push(y);
            } else if phi[y] != img {
                return None;
            }
        }
    }
    Some(phi)
}

/// Turns an isomorphism `φ: G → K` into a point relabeling, provided `φ`
/// maps the stabilizer of point 0 into a point stabilizer of `K`.
fn relabeling(g: &GroupTable, k: &GroupTable, phi: &[u32]) -> Option<Permutation> {
    let stab = g.point_stabilizer(0);
    let beta = (0..k.degree()).find(|&b| {
        stab.element_indices()
            .iter()
            .all(|&h| k.element(phi[h as usize] as usize).image(b) == b)
    })?;
    let mut images = vec![usize::MAX; g.degree()];
    for x in 0..g.order() {
        let p = g.element(x).image(0);
        if images[p] == usize::MAX {
            images[p] = k.element(phi[x] as usize).image(beta);
        }
    }
    let pi = Permutation::from_images(&images).ok()?;
    g.generators()
        .iter()
        .all(|s| k.contains(&s.conjugate_by(&pi)))
        .then_some(pi)
}

fn cycle_shape(p: &Permutation) -> Vec<usize> {
    let mut lens: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
    lens.sort_unstable();
    lens
}

/// One element per `K`-conjugacy class among `elements`.
fn class_representatives(k: &GroupTable, elements: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; k.order()];
    let mut scratch = Vec::new();
    let mut reps = Vec::new();
    for &x in elements {
        if seen[x] {
            continue;
        }
        reps.push(x);
        for c in 0..k.order() {
            seen[k.conj(x, c, &mut scratch)] = true;
        }
    }
    reps
}

/// Elements of `over`, transported onto the points of `g`, that normalize
/// `g`. Intended for `over ≅ G.2` given in a different labeling: the
/// subgroup of `over` generated by squares must be permutation equivalent
/// to `g`.
pub fn transported_overgroup(g: &GroupTable, over: &GroupTable) -> Result<Vec<Permutation>> {
    let mut scratch = Vec::new();
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![over.identity_index() as u32];
    for x in 0..over.order() {
        let y = over.mul(x, x, &mut scratch);
        if span.binary_search(&(y as u32)).is_err() {
            gens.push(y);
            span = over.closure(&gens, over.order()).expect("bounded by the group");
        }
    }
    if span.len() != g.order() {
        return Err(Error::Precondition(format!(
            "squares generate a subgroup of order {}, not {}",
            span.len(),
            g.order()
        )));
    }
    let perms: Vec<Permutation> = gens.iter().map(|&i| over.element(i).clone()).collect();
    let k = GroupTable::generate(over.degree(), &perms, over.order())?;
    let pi = permutation_equivalence(g, &k)
        .ok_or_else(|| Error::Precondition("the groups are not permutation equivalent".into()))?;
    let back = pi.inverse();
    let out: Vec<Permutation> = over.generators().iter().map(|s| s.conjugate_by(&back)).collect();
    let normalizes = out
        .iter()
        .all(|s| g.generators().iter().all(|x| g.contains(&x.conjugate_by(s))));
    if !normalizes {
        return Err(Error::Inconsistent("transported overgroup does not normalize the group".into()));
    }
    Ok(out)
}

/// Orbits of the group generated by `relabelings` on a list of distinct
/// designs. Each relabeling must map the list onto itself. Orbits hold
/// ascending indices and are ordered by their least member.
pub fn design_orbits(designs: &[Design], relabelings: &[Permutation]) -> Result<Vec<Vec<usize>>> {
    let index: HashMap<&[Vec<usize>], usize> = designs
        .iter()
        .enumerate()
        .map(|(i, d)| (d.blocks(), i))
        .collect();
    if index.len() != designs.len() {
        return Err(Error::Precondition("design list has repeats".into()));
    }
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(relabelings.len());
    for pi in relabelings {
        let row = designs
            .iter()
            .map(|d| {
                let e = d.relabel(pi)?;
                index.get(e.blocks()).copied().ok_or_else(|| {
                    Error::Precondition("relabeling does not preserve the design list".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        images.push(row);
    }
    let mut orbit_of = vec![usize::MAX; designs.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..designs.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let o = orbits.len();
        orbit_of[start] = o;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for row in &images {
                let y = row[x];
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = o;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        orbits.push(members);
    }
    Ok(orbits)
}
