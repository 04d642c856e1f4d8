//! Fixed-width point sets backed by `u64` words.

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PointSet {
    words: Vec<u64>,
}

impl PointSet {
    pub fn new(degree: usize) -> Self {
        Self {
            words: vec![0; degree.div_ceil(64)],
        }
    }

    pub fn from_points(degree: usize, points: &[usize]) -> Self {
        let mut s = Self::new(degree);
        for &p in points {
            s.insert(p);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, p: usize) {
        self.words[p >> 6] |= 1 << (p & 63);
    }

    #[inline]
    pub fn contains(&self, p: usize) -> bool {
        self.words[p >> 6] >> (p & 63) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = PointSet::from_points(130, &[0, 63, 64, 129]);
        let b = PointSet::from_points(130, &[63, 129, 5]);
        assert_eq!(a.len(), 4);
        assert!(a.contains(129) && !a.contains(128));
        assert_eq!(a.intersection_len(&b), 2);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert!(PointSet::new(10).is_empty());
    }
}
