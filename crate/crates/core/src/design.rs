//! Incidence structures and t-design verification.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::perm::Permutation;

/// Points `0..v` and a set of `k`-subsets. Blocks are stored sorted and the
/// block list is sorted, so equal designs compare equal structurally.
#[derive(Clone, Debug)]
pub struct Design {
    v: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
    incidence: Vec<PointSet>,
}

impl PartialEq for Design {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v && self.blocks == other.blocks
    }
}

impl Eq for Design {}

impl Design {
    /// Validates and canonicalizes a block list (0-based points).
    pub fn new(v: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::Precondition("a design needs at least one block".into()));
        };
        let k = first.len();
        let mut canon = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            b.sort_unstable();
            if b.len() != k {
                return Err(Error::Precondition(format!(
                    "block sizes differ: {} and {k}",
                    b.len()
                )));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Precondition("block with a repeated point".into()));
            }
            if let Some(&p) = b.last().filter(|&&p| p >= v) {
                return Err(Error::PointOutOfRange { point: p, degree: v });
            }
            canon.push(b);
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("repeated block".into()));
        }
        Ok(Self::from_canonical(v, k, canon))
    }

    fn from_canonical(v: usize, k: usize, blocks: Vec<Vec<usize>>) -> Self {
        let incidence = blocks.iter().map(|b| PointSet::from_points(v, b)).collect();
        Self {
            v,
            k,
            blocks,
            incidence,
        }
    }

    /// The orbit of `base` under `g`.
    pub fn from_base_block(g: &GroupTable, base: &[usize]) -> Result<Self> {
        let v = g.degree();
        let mut b0 = base.to_vec();
        b0.sort_unstable();
        b0.dedup();
        if b0.is_empty() || b0.len() != base.len() {
            return Err(Error::Precondition("base block must be a nonempty set".into()));
        }
        if let Some(&p) = b0.last().filter(|&&p| p >= v) {
            return Err(Error::PointOutOfRange { point: p, degree: v });
        }
        let k = b0.len();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([b0.clone()]);
        let mut orbit = vec![b0];
        let mut head = 0;
        while head < orbit.len() {
            for gen in g.generators() {
                let img = gen.apply_set(&orbit[head]);
                if seen.insert(img.clone()) {
                    orbit.push(img);
                }
            }
            head += 1;
        }
        orbit.sort_unstable();
        Ok(Self::from_canonical(v, k, orbit))
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn incidence(&self) -> &[PointSet] {
        &self.incidence
    }

    /// Number of blocks through each point.
    pub fn replication(&self) -> Vec<usize> {
        let mut r = vec![0; self.v];
        for b in &self.blocks {
            for &p in b {
                r[p] += 1;
            }
        }
        r
    }

    /// Co-occurrence counts of all point pairs, row-major `v × v`.
    pub fn pair_counts(&self) -> Vec<u32> {
        let v = self.v;
        let mut counts = vec![0u32; v * v];
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    counts[x * v + y] += 1;
                    counts[y * v + x] += 1;
                }
            }
        }
        counts
    }

    /// `Some(λ)` iff every `t`-subset of points lies in exactly `λ` blocks.
    pub fn lambda_of(&self, t: usize) -> Result<Option<usize>> {
        if t > self.k {
            return Err(Error::Precondition(format!("t={t} exceeds k={}", self.k)));
        }
        match t {
            0 => Ok(Some(self.b())),
            1 => Ok(constant(self.replication())),
            2 => {
                let v = self.v;
                let counts = self.pair_counts();
                let off_diagonal = (0..v).flat_map(|x| (x + 1..v).map(move |y| (x, y)));
                Ok(constant(off_diagonal.map(|(x, y)| counts[x * v + y] as usize)))
            }
            _ if self.v <= 40 || t <= 3 => self.lambda_by_subsets(t),
            _ => Err(Error::Unsupported(format!(
                "t={t} on {} points; t-subset enumeration is limited to v <= 40 or t <= 3",
                self.v
            ))),
        }
    }

    fn lambda_by_subsets(&self, t: usize) -> Result<Option<usize>> {
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for b in &self.blocks {
            for_each_subset(b, t, &mut |s| *counts.entry(s.to_vec()).or_insert(0) += 1);
        }
        let total = crate::params::binomial(self.v as u64, t as u64);
        if total != num_bigint::BigUint::from(counts.len()) {
            return Ok(None);
        }
        Ok(constant(counts.into_values()))
    }

    /// Image of the design under a point relabeling.
    pub fn relabel(&self, pi: &Permutation) -> Result<Self> {
        if pi.degree() != self.v {
            return Err(Error::DegreeMismatch {
                expected: self.v,
                found: pi.degree(),
            });
        }
        let mut blocks: Vec<Vec<usize>> = self.blocks.iter().map(|b| pi.apply_set(b)).collect();
        blocks.sort_unstable();
        Ok(Self::from_canonical(self.v, self.k, blocks))
    }

    /// Whether the blocks form a single orbit of `g`.
    pub fn is_block_transitive(&self, g: &GroupTable) -> Result<bool> {
        self.check_degree(g)?;
        let orbit = Self::from_base_block(g, &self.blocks[0])?;
        Ok(orbit.blocks == self.blocks)
    }

    /// Whether the stabilizer of a block is transitive on its points.
    /// Only meaningful once block-transitivity holds.
    pub fn is_flag_transitive(&self, g: &GroupTable) -> Result<bool> {
        self.check_degree(g)?;
        let base = &self.blocks[0];
        let stab = g.set_stabilizer(base);
        let orbits = stab.orbits();
        Ok(orbits.iter().any(|o| o.len() == base.len() && o[0] == base[0]))
    }

    fn check_degree(&self, g: &GroupTable) -> Result<()> {
        if g.degree() != self.v {
            return Err(Error::DegreeMismatch {
                expected: self.v,
                found: g.degree(),
            });
        }
        Ok(())
    }
}

fn constant(values: impl IntoIterator<Item = usize>) -> Option<usize> {
    let mut it = values.into_iter();
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

fn for_each_subset(items: &[usize], t: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(items: &[usize], t: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == t {
            f(cur);
            return;
        }
        for i in start..=items.len() - (t - cur.len()) {
            cur.push(items[i]);
            rec(items, t, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, t, 0, &mut Vec::with_capacity(t), f);
}

/// Optional provenance stored alongside a design on disk.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_file: Option<String>,
    /// 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_block: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_transitive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_transitive: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabilizer_order: Option<usize>,
}

/// On-disk form of a design: 1-based blocks, canonically sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignFile {
    pub v: usize,
    pub k: usize,
    pub blocks: Vec<Vec<usize>>,
    #[serde(default)]
    pub meta: DesignMeta,
}

impl DesignFile {
    pub fn from_design(d: &Design, meta: DesignMeta) -> Self {
        Self {
            v: d.v,
            k: d.k,
            blocks: d
                .blocks
                .iter()
                .map(|b| b.iter().map(|p| p + 1).collect())
                .collect(),
            meta,
        }
    }

    pub fn to_design(&self) -> Result<Design> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&p| {
                        if p == 0 || p > self.v {
                            Err(Error::PointOutOfRange { point: p, degree: self.v })
                        } else {
                            Ok(p - 1)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let d = Design::new(self.v, blocks)?;
        if d.k != self.k {
            return Err(Error::Format(format!("k is {} but blocks have size {}", self.k, d.k)));
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
