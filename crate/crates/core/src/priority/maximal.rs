use std::collections::BTreeSet;

/// Packs the membership bits of `x` in `W_0 … W_{len-1}` into an e-state
/// number; bit 0 is the most significant.
pub fn estate_bits(mask: u64, len: usize) -> u64 {
    (0..len).fold(0, |acc, e| (acc << 1) | ((mask >> e) & 1))
}

pub fn estate_string(mask: u64, len: usize) -> String {
    (0..len)
        .map(|e| if (mask >> e) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Result of one marker pull: `Γ_e` moved to the old `a_j`, and the listed
/// elements were dumped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pull {
    pub e: usize,
    pub j: usize,
    pub dumped: Vec<u64>,
}

/// `M` inside a growing `R`, with markers `Γ_e` on the complement
/// `R − M = {a_0 < a_1 < …}`. Elements of `R` must arrive in increasing order.
#[derive(Debug, Clone, Default)]
pub struct MaximalSet {
    members: BTreeSet<u64>,
    comp: Vec<u64>,
    /// Bumped whenever `Γ_e` is moved to an element it did not choose.
    gens: Vec<u64>,
}

impl MaximalSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_r(&mut self, x: u64) {
        debug_assert!(self.comp.last().is_none_or(|&l| l < x));
        let e = self.comp.len();
        self.comp.push(x);
        match self.gens.get_mut(e) {
            Some(g) => *g += 1,
            None => self.gens.push(0),
        }
    }

    pub fn marker(&self, e: usize) -> Option<u64> {
        self.comp.get(e).copied()
    }

    pub fn markers(&self) -> &[u64] {
        &self.comp
    }

    pub fn generation(&self, e: usize) -> u64 {
        self.gens.get(e).copied().unwrap_or(0)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.contains(&x)
    }

    pub fn members(&self) -> &BTreeSet<u64> {
        &self.members
    }

    fn bump_from(&mut self, e: usize) {
        for g in self.gens.iter_mut().skip(e) {
            *g += 1;
        }
    }

    /// Enumerates the element marked by `Γ_p` into `M`. `None` (and no
    /// change) when `Γ_p` marks nothing.
    pub fn dump_marker(&mut self, p: usize) -> Option<u64> {
        if p >= self.comp.len() {
            return None;
        }
        let x = self.comp.remove(p);
        self.members.insert(x);
        self.bump_from(p);
        Some(x)
    }

    /// Moves an unmarked-by-choice element of the complement into `M`.
    pub fn absorb(&mut self, x: u64) -> bool {
        match self.comp.binary_search(&x) {
            Ok(p) => {
                self.dump_marker(p);
                true
            }
            Err(_) => false,
        }
    }

    /// One step of the maximal set construction: find the least `e` such
    /// that some `a_j`, `j > e`, has a higher e-state than `a_e`, move `Γ_e`
    /// to the best such `a_j` (least `j` on ties) and dump `a_e … a_{j-1}`.
    /// `mask(x)` gives the membership bits of `x` in `W_0 … W_{ne-1}`.
    pub fn soare_pull(&mut self, ne: usize, mask: impl Fn(u64) -> u64) -> Option<Pull> {
        let n = self.comp.len();
        if ne == 0 || n < 2 {
            return None;
        }
        let masks: Vec<u64> = self.comp.iter().map(|&x| mask(x)).collect();
        // best[L-1][j]: greatest state on a_j.. with the least index
        let mut best: Vec<Vec<(u64, usize)>> = Vec::with_capacity(ne);
        for len in 1..=ne {
            let mut col = vec![(0, 0); n];
            let mut cur = (0, n - 1);
            for j in (0..n).rev() {
                let st = estate_bits(masks[j], len);
                if j == n - 1 || st >= cur.0 {
                    cur = (st, j);
                }
                col[j] = cur;
            }
            best.push(col);
        }
        for e in 0..n - 1 {
            let len = e.min(ne - 1) + 1;
            let (st, j) = best[len - 1][e + 1];
            if st > estate_bits(masks[e], len) {
                let dumped: Vec<u64> = self.comp.drain(e..j).collect();
                self.members.extend(dumped.iter().copied());
                self.bump_from(e + 1);
                return Some(Pull { e, j, dumped });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(xs: impl IntoIterator<Item = u64>) -> MaximalSet {
        let mut m = MaximalSet::new();
        for x in xs {
            m.push_r(x);
        }
        m
    }

    #[test]
    fn dump_resettles() {
        let mut m = with([3, 5, 8, 9]);
        assert_eq!(m.dump_marker(0), Some(3));
        assert_eq!(m.marker(0), Some(5));
        assert!(m.contains(3));
        assert_eq!(m.generation(0), 1);
        assert_eq!(m.dump_marker(7), None);
        assert_eq!(m.markers(), &[5, 8, 9]);
    }

    #[test]
    fn pull_prefers_higher_state() {
        // W_0 = evens
        let mut m = with([1, 3, 4, 5, 6]);
        let mask = |x: u64| u64::from(x % 2 == 0);
        let p = m.soare_pull(1, mask).unwrap();
        assert_eq!(p, Pull { e: 0, j: 2, dumped: vec![1, 3] });
        assert_eq!(m.marker(0), Some(4));
        assert_eq!(m.generation(0), 0);
        assert_eq!(m.generation(1), 1);
        // Γ_1 sits on 5 and 6 is better
        let p = m.soare_pull(1, mask).unwrap();
        assert_eq!(p.dumped, vec![5]);
        assert!(m.soare_pull(1, mask).is_none());
    }

    #[test]
    fn bits() {
        assert_eq!(estate_bits(0b01, 2), 0b10);
        assert_eq!(estate_bits(0b10, 2), 0b01);
        assert_eq!(estate_string(0b101, 3), "101");
    }
}
