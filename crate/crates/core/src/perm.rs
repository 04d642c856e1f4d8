//! Permutations on `0..degree` and their cycle notation.
//!
//! Points are 0-based inside the library. Cycle notation is always 1-based,
//! so generator listings can be pasted in unchanged.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest supported degree; images are stored as `u16`.
pub const MAX_DEGREE: usize = u16::MAX as usize;

/// A bijection of `0..degree`.
///
/// Ordering is lexicographic on the image array, which is the canonical
/// element order used by [`crate::group::GroupTable`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u16]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        Self {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        if degree > MAX_DEGREE {
            return Err(Error::Precondition(format!(
                "degree {degree} exceeds {MAX_DEGREE}"
            )));
        }
        let mut seen = vec![false; degree];
        for &x in images {
            if x >= degree {
                return Err(Error::PointOutOfRange { point: x, degree });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::Precondition(format!(
                    "image {x} repeated; not a bijection"
                )));
            }
        }
        Ok(Self {
            images: images.iter().map(|&x| x as u16).collect(),
        })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`: `x -> other(self(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree());
        Self {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u16; self.degree()].into_boxed_slice();
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u16;
        }
        Self { images: inv }
    }

    /// `g * self * g^-1` as a relabeling: the result maps `g(x)` to
    /// `g(self(x))`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        let mut out = vec![0u16; self.degree()].into_boxed_slice();
        conjugate_into(&self.images, &g.images, &mut out);
        Self { images: out }
    }

    /// Cycles of length at least two, each starting at its smallest point,
    /// sorted by smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Order of the permutation (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut ord = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.image(x);
            }
            ord = ord.lcm(&len);
        }
        ord
    }

    /// Applies the permutation to a point set and returns the sorted image.
    pub fn apply_set(&self, points: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = points.iter().map(|&p| self.image(p)).collect();
        out.sort_unstable();
        out
    }
}

#[inline]
pub(crate) fn compose_into(a: &[u16], b: &[u16], out: &mut [u16]) {
    for (o, &x) in out.iter_mut().zip(a) {
        *o = b[x as usize];
    }
}

#[inline]
pub(crate) fn conjugate_into(h: &[u16], g: &[u16], out: &mut [u16]) {
    for (x, &hx) in h.iter().enumerate() {
        out[g[x] as usize] = g[hx as usize];
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", print_cycles(self))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_cycles(self))
    }
}

/// Parses a product of disjoint cycles in 1-based notation, e.g.
/// `"(1,2)(3,5)"`. Whitespace anywhere is ignored; the empty string and `"()"`
/// denote the identity.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    if degree > MAX_DEGREE {
        return Err(Error::Precondition(format!(
            "degree {degree} exceeds {MAX_DEGREE}"
        )));
    }
    let mut images: Vec<u16> = (0..degree as u16).collect();
    let mut used = vec![false; degree];
    let compact: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    while pos < compact.len() {
        if compact[pos] != '(' {
            return Err(Error::Parse(format!(
                "expected '(' at offset {pos}, found {:?}",
                compact[pos]
            )));
        }
        let close = compact[pos..]
            .iter()
            .position(|&c| c == ')')
            .map(|o| pos + o)
            .ok_or_else(|| Error::Parse("unclosed '('".into()))?;
        let body: String = compact[pos + 1..close].iter().collect();
        pos = close + 1;
        if body.is_empty() {
            continue;
        }
        let mut cycle = Vec::new();
        for field in body.split(',') {
            if field.is_empty() {
                return Err(Error::Parse(format!("empty entry in cycle ({body})")));
            }
            let point: usize = field
                .parse()
                .map_err(|_| Error::Parse(format!("bad point {field:?} in cycle ({body})")))?;
            if point == 0 || point > degree {
                return Err(Error::PointOutOfRange { point, degree });
            }
            let p = point - 1;
            if std::mem::replace(&mut used[p], true) {
                return Err(Error::Parse(format!("point {point} repeated")));
            }
            cycle.push(p);
        }
        for (i, &p) in cycle.iter().enumerate() {
            images[p] = cycle[(i + 1) % cycle.len()] as u16;
        }
    }
    Ok(Permutation {
        images: images.into_boxed_slice(),
    })
}

/// Canonical 1-based cycle notation; the identity prints as `"()"`.
pub fn print_cycles(p: &Permutation) -> String {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return "()".to_string();
    }
    let mut out = String::new();
    for c in cycles {
        out.push('(');
        for (i, x) in c.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&(x + 1).to_string());
        }
        out.push(')');
    }
    out
}
