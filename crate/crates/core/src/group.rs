//! Finite permutation groups materialized element by element.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::perm::{compose_into, parse_cycles, print_cycles, Permutation};

/// Default bound on the number of elements `generate` may produce.
pub const DEFAULT_CAP: usize = 10_000_000;

/// A permutation group stored as its full, lexicographically sorted element
/// list. Elements are addressed by their index in that list.
pub struct GroupTable {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    flat: Vec<u16>,
    inverse: Vec<u32>,
    orders: Vec<u32>,
    identity: u32,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl GroupTable {
    /// Breadth-first closure of `generators`. Fails once more than `cap`
    /// elements have been found.
    pub fn generate(degree: usize, generators: &[Permutation], cap: usize) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = vec![id];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head].clone();
            head += 1;
            for g in generators {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    seen.insert(y.clone());
                    queue.push(y);
                }
            }
        }
        drop(seen);
        queue.sort_unstable();
        Ok(Self::from_sorted(degree, generators.to_vec(), queue))
    }

    /// The trivial group on `degree` points.
    pub fn trivial(degree: usize) -> Self {
        Self::from_sorted(degree, Vec::new(), vec![Permutation::identity(degree)])
    }

    fn from_sorted(degree: usize, generators: Vec<Permutation>, elements: Vec<Permutation>) -> Self {
        let mut flat = Vec::with_capacity(elements.len() * degree);
        for e in &elements {
            flat.extend_from_slice(e.images());
        }
        let orders = elements.iter().map(|e| e.order() as u32).collect();
        let mut table = Self {
            degree,
            generators,
            elements,
            flat,
            inverse: Vec::new(),
            orders,
            identity: 0,
        };
        table.identity = table
            .index_of(Permutation::identity(degree).images())
            .expect("identity present") as u32;
        table.inverse = table
            .elements
            .iter()
            .map(|e| table.index_of(e.inverse().images()).expect("closed under inverse") as u32)
            .collect();
        table
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    #[inline]
    pub fn element(&self, idx: usize) -> &Permutation {
        &self.elements[idx]
    }

    #[inline]
    pub(crate) fn images(&self, idx: usize) -> &[u16] {
        &self.flat[idx * self.degree..(idx + 1) * self.degree]
    }

    #[inline]
    pub fn identity_index(&self) -> usize {
        self.identity as usize
    }

    #[inline]
    pub fn inverse_index(&self, idx: usize) -> usize {
        self.inverse[idx] as usize
    }

    /// Order of the element at `idx`.
    #[inline]
    pub fn element_order(&self, idx: usize) -> u32 {
        self.orders[idx]
    }

    /// Index of the element with the given image array, if present.
    pub fn index_of(&self, images: &[u16]) -> Option<usize> {
        if images.len() != self.degree {
            return None;
        }
        let d = self.degree;
        let (mut lo, mut hi) = (0usize, self.elements.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.flat[mid * d..(mid + 1) * d].cmp(images) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index_of(p.images()).is_some()
    }

    /// Index of `a` followed by `b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize, scratch: &mut Vec<u16>) -> usize {
        scratch.resize(self.degree, 0);
        compose_into(self.images(a), self.images(b), scratch);
        self.index_of(scratch).expect("group closed under composition")
    }

    /// Index of `g h g^-1` (relabeling `h` by `g`).
    #[inline]
    pub fn conj(&self, h: usize, g: usize, scratch: &mut Vec<u16>) -> usize {
        scratch.resize(self.degree, 0);
        crate::perm::conjugate_into(self.images(h), self.images(g), scratch);
        self.index_of(scratch).expect("group closed under conjugation")
    }

    /// Closure of the given elements, or `None` once it exceeds `limit`.
    /// Returned indices are sorted.
    pub fn closure(&self, gens: &[usize], limit: usize) -> Option<Vec<u32>> {
        let mut scratch = Vec::with_capacity(self.degree);
        let mut members: Vec<u32> = vec![self.identity];
        let mut in_set = HashSet::with_capacity(limit.min(1 << 16) + 1);
        in_set.insert(self.identity);
        let mut head = 0;
        while head < members.len() {
            let x = members[head] as usize;
            head += 1;
            for &g in gens {
                let y = self.mul(x, g, &mut scratch) as u32;
                if in_set.insert(y) {
                    if members.len() >= limit {
                        return None;
                    }
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        Some(members)
    }

    /// The whole group viewed as a subgroup of itself.
    pub fn as_subgroup(&self) -> Subgroup<'_> {
        Subgroup::new_unchecked(self, (0..self.order() as u32).collect())
    }

    /// Point orbits, sorted by (length, smallest point); each orbit sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let gens: Vec<&[u16]> = self.generators.iter().map(|g| g.images()).collect();
        orbits_of(self.degree, &gens)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// Stabilizer of the point `alpha`.
    pub fn point_stabilizer(&self, alpha: usize) -> Subgroup<'_> {
        assert!(alpha < self.degree, "point {alpha} out of range");
        let elements = (0..self.order())
            .filter(|&i| self.images(i)[alpha] as usize == alpha)
            .map(|i| i as u32)
            .collect();
        Subgroup::new_unchecked(self, elements)
    }

    /// Setwise stabilizer of `set` by exhaustive filtering.
    pub fn set_stabilizer(&self, set: &[usize]) -> Subgroup<'_> {
        let mask = PointSet::from_points(self.degree, set);
        let elements = (0..self.order())
            .filter(|&i| self.stabilizes(i, set, &mask))
            .map(|i| i as u32)
            .collect();
        Subgroup::new_unchecked(self, elements)
    }

    /// Order of the setwise stabilizer, without materializing it.
    pub fn set_stabilizer_order(&self, set: &[usize], mask: &PointSet) -> usize {
        (0..self.order())
            .filter(|&i| self.stabilizes(i, set, mask))
            .count()
    }

    #[inline]
    pub(crate) fn stabilizes(&self, idx: usize, set: &[usize], mask: &PointSet) -> bool {
        let im = self.images(idx);
        set.iter().all(|&p| mask.contains(im[p] as usize))
    }
}

pub(crate) fn orbits_of(degree: usize, gens: &[&[u16]]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in gens {
                let y = g[x] as usize;
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])));
    out
}

/// A subgroup of a [`GroupTable`], stored as sorted element indices.
#[derive(Clone)]
pub struct Subgroup<'g> {
    parent: &'g GroupTable,
    elements: Vec<u32>,
}

impl PartialEq for Subgroup<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.parent, other.parent) && self.elements == other.elements
    }
}

impl Eq for Subgroup<'_> {}

impl fmt::Debug for Subgroup<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("order", &self.order())
            .field("generators", &self.generators().iter().map(|&g| print_cycles(self.parent.element(g))).collect::<Vec<_>>())
            .finish()
    }
}

impl<'g> Subgroup<'g> {
    pub(crate) fn new_unchecked(parent: &'g GroupTable, elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { parent, elements }
    }

    /// Builds a subgroup from element indices, verifying closure.
    pub fn from_elements(parent: &'g GroupTable, mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let sub = Self { parent, elements };
        if !sub.is_closed() {
            return Err(Error::Precondition("element set is not a subgroup".into()));
        }
        Ok(sub)
    }

    /// The subgroup generated by the given permutations, which must lie in
    /// the parent group.
    pub fn generated_by(parent: &'g GroupTable, gens: &[Permutation]) -> Result<Self> {
        let idx = gens
            .iter()
            .map(|g| {
                parent
                    .index_of(g.images())
                    .ok_or_else(|| Error::Precondition(format!("{g} is not in the group")))
            })
            .collect::<Result<Vec<_>>>()?;
        let elements = parent.closure(&idx, parent.order()).expect("bounded by parent");
        Ok(Self::new_unchecked(parent, elements))
    }

    pub fn parent(&self) -> &'g GroupTable {
        self.parent
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_indices(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.elements.binary_search(&(idx as u32)).is_ok()
    }

    pub fn permutations(&self) -> impl Iterator<Item = &'g Permutation> + '_ {
        self.elements.iter().map(|&i| self.parent.element(i as usize))
    }

    fn is_closed(&self) -> bool {
        if !self.contains_index(self.parent.identity_index()) {
            return false;
        }
        let mut scratch = Vec::new();
        self.elements.iter().all(|&a| {
            self.contains_index(self.parent.inverse_index(a as usize))
                && self.elements.iter().all(|&b| {
                    self.contains_index(self.parent.mul(a as usize, b as usize, &mut scratch))
                })
        })
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut span: Vec<u32> = vec![self.parent.identity];
        for &e in &self.elements {
            if span.binary_search(&e).is_err() {
                gens.push(e as usize);
                span = self
                    .parent
                    .closure(&gens, self.order())
                    .expect("inside the subgroup");
                if span.len() == self.order() {
                    break;
                }
            }
        }
        gens
    }

    /// Point orbits, sorted by (length, smallest point).
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let gens: Vec<&[u16]> = gens.iter().map(|&g| self.parent.images(g)).collect();
        orbits_of(self.parent.degree(), &gens)
    }

    /// Orbit lengths in the same order as [`Subgroup::orbits`].
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.orbits().iter().map(Vec::len).collect()
    }

    /// `g H g^-1` for the parent element at index `g`.
    pub fn conjugate(&self, g: usize) -> Subgroup<'g> {
        let mut scratch = Vec::new();
        let mut elements: Vec<u32> = self
            .elements
            .iter()
            .map(|&h| self.parent.conj(h as usize, g, &mut scratch) as u32)
            .collect();
        elements.sort_unstable();
        Self::new_unchecked(self.parent, elements)
    }

    /// Whether every element of `H` fixes `set` setwise.
    pub fn stabilizes_set(&self, set: &[usize]) -> bool {
        let mask = PointSet::from_points(self.parent.degree(), set);
        self.elements
            .iter()
            .all(|&h| self.parent.stabilizes(h as usize, set, &mask))
    }
}

/// Contents of a generator file.
#[derive(Debug, Clone)]
pub struct GeneratorFile {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GeneratorFile {
    /// Format: a `degree: N` line, then one generator per non-empty line in
    /// cycle notation. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut degree = None;
        let mut generators = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match degree {
                None => {
                    let rest = line.strip_prefix("degree:").ok_or_else(|| {
                        Error::Format(format!("line {}: expected `degree: N`", lineno + 1))
                    })?;
                    let n: usize = rest.trim().parse().map_err(|_| {
                        Error::Format(format!("line {}: bad degree {:?}", lineno + 1, rest.trim()))
                    })?;
                    if n == 0 {
                        return Err(Error::Format("degree must be positive".into()));
                    }
                    degree = Some(n);
                }
                Some(n) => generators.push(parse_cycles(line, n).map_err(|e| {
                    Error::Format(format!("line {}: {e}", lineno + 1))
                })?),
            }
        }
        let degree = degree.ok_or_else(|| Error::Format("missing `degree: N` line".into()))?;
        Ok(Self { degree, generators })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("degree: {}\n", self.degree);
        for g in &self.generators {
            out.push_str(&print_cycles(g));
            out.push('\n');
        }
        out
    }

    pub fn generate(&self, cap: usize) -> Result<GroupTable> {
        GroupTable::generate(self.degree, &self.generators, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym3() -> GroupTable {
        let a = parse_cycles("(1,2)", 3).unwrap();
        let b = parse_cycles("(1,2,3)", 3).unwrap();
        GroupTable::generate(3, &[a, b], DEFAULT_CAP).unwrap()
    }

    #[test]
    fn symmetric_group_on_three_points() {
        let g = sym3();
        assert_eq!(g.order(), 6);
        assert!(g.element(g.identity_index()).is_identity());
        assert!(g.elements().windows(2).all(|w| w[0] < w[1]));
        assert!(g.is_transitive());
    }

    #[test]
    fn cap_is_enforced() {
        let a = parse_cycles("(1,2)", 4).unwrap();
        let b = parse_cycles("(1,2,3,4)", 4).unwrap();
        assert_eq!(
            GroupTable::generate(4, &[a.clone(), b.clone()], 10).unwrap_err(),
            Error::CapExceeded { cap: 10 }
        );
        assert_eq!(GroupTable::generate(4, &[a, b], 24).unwrap().order(), 24);
    }

    #[test]
    fn degree_mismatch_rejected() {
        let a = parse_cycles("(1,2)", 3).unwrap();
        assert!(matches!(
            GroupTable::generate(4, &[a], 100),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn trivial_group() {
        let g = GroupTable::trivial(5);
        assert_eq!(g.order(), 1);
        assert_eq!(g.orbits().len(), 5);
        assert_eq!(g.point_stabilizer(2).order(), 1);
    }

    #[test]
    fn stabilizers_in_s3() {
        let g = sym3();
        assert_eq!(g.point_stabilizer(0).order(), 2);
        assert_eq!(g.set_stabilizer(&[0, 1]).order(), 2);
        assert_eq!(g.set_stabilizer(&[0, 1, 2]).order(), 6);
    }

    #[test]
    fn subgroup_closure_check() {
        let g = sym3();
        let t = g.index_of(parse_cycles("(1,2)", 3).unwrap().images()).unwrap() as u32;
        let c = g.index_of(parse_cycles("(1,2,3)", 3).unwrap().images()).unwrap() as u32;
        assert!(Subgroup::from_elements(&g, vec![g.identity_index() as u32, t]).is_ok());
        assert!(Subgroup::from_elements(&g, vec![g.identity_index() as u32, c]).is_err());
    }

    #[test]
    fn generator_file_round_trip() {
        let text = "# test\ndegree: 4\n(1,2)\n\n(1, 2, 3, 4)\n";
        let f = GeneratorFile::parse(text).unwrap();
        assert_eq!(f.degree, 4);
        assert_eq!(f.generators.len(), 2);
        let again = GeneratorFile::parse(&f.to_text()).unwrap();
        assert_eq!(again.generators, f.generators);
        assert!(GeneratorFile::parse("(1,2)\n").is_err());
        assert!(GeneratorFile::parse("degree: 3\n(1,4)\n").is_err());
    }
}
