use std::cmp::Ordering;
use std::fmt;

const WORD: usize = u64::BITS as usize;

/// Dense set of element positions `0..n`.
///
/// Sets compare lexicographically by their membership bitstring read in
/// element order, so position 0 is the most significant character. This is
/// the order in which [`crate::Poset::order_ideals`] emits ideals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ElemSet {
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(n: usize) -> Self {
        Self {
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut set = Self::empty(n);
        for i in 0..n {
            set.insert(i);
        }
        set
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for i in indices {
            set.insert(i);
        }
        set
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / WORD).is_some_and(|w| w & (1u64 << (i % WORD)) != 0)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / WORD] |= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / WORD] &= !(1u64 << (i % WORD));
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn difference_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + bit)
            })
        })
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if a >> bit & 1 == 1 { Ordering::Greater } else { Ordering::Less };
            }
        }
        self.words.len().cmp(&other.words.len())
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_by_bitstring() {
        // "10" > "01": element 0 dominates.
        let a = ElemSet::from_indices(2, [0]);
        let b = ElemSet::from_indices(2, [1]);
        assert!(a > b);
        assert!(ElemSet::empty(2) < b);
        let wide_a = ElemSet::from_indices(130, [3, 129]);
        let wide_b = ElemSet::from_indices(130, [3, 70]);
        assert!(wide_b > wide_a);
    }

    #[test]
    fn iter_roundtrip() {
        let idx = [0, 5, 63, 64, 100];
        let s = ElemSet::from_indices(101, idx);
        assert_eq!(s.iter().collect::<Vec<_>>(), idx);
        assert_eq!(s.len(), 5);
    }
}
