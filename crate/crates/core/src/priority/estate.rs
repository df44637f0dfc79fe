//! Stage approximations to the states of a store with respect to `W_e`.

use crate::tree::pairing::unpair;

/// Running intersection counts of one store with every `W_e` and with both
/// halves of every registered split pair.
#[derive(Debug, Clone, Default)]
pub struct StoreStats {
    pub size: usize,
    hits: Vec<usize>,
    both: Vec<usize>,
}

impl StoreStats {
    pub fn new(ne: usize, splits: usize) -> Self {
        StoreStats {
            size: 0,
            hits: vec![0; ne],
            both: vec![0; splits],
        }
    }

    /// `x` with membership bits `mask` joins the store.
    pub fn add(&mut self, mask: u64, splits: &[(usize, usize)]) {
        self.size += 1;
        self.update(0, mask, splits);
    }

    /// A member's bits changed from `old` to `new` (sets only grow).
    pub fn update(&mut self, old: u64, new: u64, splits: &[(usize, usize)]) {
        for (e, h) in self.hits.iter_mut().enumerate() {
            if (new >> e) & 1 == 1 && (old >> e) & 1 == 0 {
                *h += 1;
            }
        }
        let both = |m: u64, a: usize, b: usize| (m >> a) & 1 == 1 && (m >> b) & 1 == 1;
        for (j, &(a, b)) in splits.iter().enumerate() {
            if both(new, a, b) && !both(old, a, b) {
                self.both[j] += 1;
            }
        }
    }

    pub fn hits(&self, e: usize) -> usize {
        self.hits.get(e).copied().unwrap_or(0)
    }

    /// Whether the registered pair `j = (a, b)` splits the store: every
    /// member lies in exactly one of `W_a`, `W_b`, and both halves are hit.
    pub fn split_by(&self, j: usize, (a, b): (usize, usize)) -> bool {
        let (ha, hb) = (self.hits(a), self.hits(b));
        self.size > 0 && ha > 0 && hb > 0 && self.both[j] == 0 && ha + hb == self.size
    }
}

/// State of a store `R` (with its `M`) with respect to `W_e`: 4 when a
/// registered pair containing `e` splits `R`, 3 when it splits `M`, 2 when
/// `|W_e ∩ R|` reaches `threshold`, and 1 otherwise.
pub fn estate_of(
    r: &StoreStats,
    m: &StoreStats,
    e: usize,
    splits: &[(usize, usize)],
    threshold: usize,
) -> u8 {
    let pairs = || {
        splits
            .iter()
            .enumerate()
            .filter(move |(_, &(a, b))| a == e || b == e)
    };
    if pairs().any(|(j, &p)| r.split_by(j, p)) {
        return 4;
    }
    if pairs().any(|(j, &p)| m.split_by(j, p)) {
        return 3;
    }
    if r.hits(e) >= threshold {
        2
    } else {
        1
    }
}

/// `m ↦ (e, k, l)`, inverse of the nested Cantor pairing.
pub fn untriple(m: u64) -> (u64, u64, u64) {
    let (e, rest) = unpair(m);
    let (k, l) = unpair(rest);
    (e, k, l)
}

/// Index of the greatest state string; higher entries are greater, the
/// first position that differs decides, ties go to the least index.
pub fn ekl_argmax(strings: &[Vec<u8>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, s) in strings.iter().enumerate() {
        if best.is_none_or(|b| s > &strings[b]) {
            best = Some(i);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states() {
        let splits = [(0, 1)];
        let mut r = StoreStats::new(2, 1);
        let m = StoreStats::new(2, 1);
        r.add(0b00, &splits);
        assert_eq!(estate_of(&r, &m, 0, &splits, 1), 1);
        r.update(0b00, 0b01, &splits);
        assert_eq!(estate_of(&r, &m, 0, &splits, 1), 2);
        r.add(0b10, &splits);
        assert_eq!(estate_of(&r, &m, 0, &splits, 1), 4);
        assert_eq!(estate_of(&r, &m, 1, &splits, 5), 4);
        r.update(0b10, 0b11, &splits);
        assert_eq!(estate_of(&r, &m, 1, &splits, 5), 1);
    }

    #[test]
    fn m_split_gives_three() {
        let splits = [(0, 1)];
        let mut r = StoreStats::new(2, 1);
        let mut m = StoreStats::new(2, 1);
        for mask in [0b01, 0b10, 0b00] {
            r.add(mask, &splits);
        }
        for mask in [0b01, 0b10] {
            m.add(mask, &splits);
        }
        assert_eq!(estate_of(&r, &m, 1, &splits, 10), 3);
    }

    #[test]
    fn argmax_ties() {
        assert_eq!(ekl_argmax(&[vec![1, 2], vec![1, 2]]), Some(0));
        assert_eq!(ekl_argmax(&[vec![1, 2], vec![2, 0], vec![1, 9]]), Some(1));
        assert_eq!(ekl_argmax(&[]), None);
    }

    #[test]
    fn triples_cover() {
        let mut seen = std::collections::HashSet::new();
        for m in 0..200 {
            assert!(seen.insert(untriple(m)));
        }
        assert_eq!(untriple(0), (0, 0, 0));
    }
}
