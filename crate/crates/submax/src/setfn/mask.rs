use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

/// A subset of `{0, ..., n-1}` stored as a packed bitmask.
///
/// Masks carry their universe size; combining masks from different universes
/// panics. Unused high bits of the last word are kept zero so that equality,
/// hashing, and ordering can work on the raw words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        SubsetMask { n, words: vec![0; word_count(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut mask = SubsetMask { n, words: vec![!0u64; word_count(n)] };
        mask.trim();
        mask
    }

    pub fn singleton(n: usize, j: usize) -> Self {
        let mut mask = SubsetMask::empty(n);
        mask.insert(j);
        mask
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = SubsetMask::empty(n);
        for j in indices {
            mask.insert(j);
        }
        mask
    }

    /// Builds a mask for a small universe from the low `n` bits of `bits`.
    /// Panics if `n > 64` or if bits at position `n` or above are set.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        assert!(n <= 64, "from_bits supports universes up to 64 elements");
        if n < 64 {
            assert!(bits < (1u64 << n), "bit {} out of range", 63 - bits.leading_zeros());
        }
        SubsetMask { n, words: vec![bits; if n == 0 { 0 } else { 1 }] }
    }

    /// The packed representation for universes of at most 64 elements.
    pub fn bits(&self) -> u64 {
        assert!(self.n <= 64, "bits() supports universes up to 64 elements");
        self.words.first().copied().unwrap_or(0)
    }

    /// Universe size, not cardinality.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, j: usize) -> bool {
        assert!(j < self.n, "element {j} outside universe of size {}", self.n);
        self.words[j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    pub fn insert(&mut self, j: usize) {
        assert!(j < self.n, "element {j} outside universe of size {}", self.n);
        self.words[j / WORD_BITS] |= 1u64 << (j % WORD_BITS);
    }

    pub fn remove(&mut self, j: usize) {
        assert!(j < self.n, "element {j} outside universe of size {}", self.n);
        self.words[j / WORD_BITS] &= !(1u64 << (j % WORD_BITS));
    }

    pub fn with(&self, j: usize) -> Self {
        let mut copy = self.clone();
        copy.insert(j);
        copy
    }

    pub fn without(&self, j: usize) -> Self {
        let mut copy = self.clone();
        copy.remove(j);
        copy
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & b)
    }

    /// Elements of `self` not in `other`.
    pub fn difference(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut mask = SubsetMask {
            n: self.n,
            words: self.words.iter().map(|&w| !w).collect(),
        };
        mask.trim();
        mask
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "universe size mismatch");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "universe size mismatch");
        self.words.iter().zip(&other.words).all(|(&a, &b)| a & b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.n, other.n, "universe size mismatch");
        SubsetMask {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    fn trim(&mut self) {
        let used = self.n % WORD_BITS;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        if self.n == 0 {
            self.words.clear();
        }
    }
}

impl Ord for SubsetMask {
    /// Numeric order of the packed bits (high words first), used for
    /// deterministic tie-breaking. Panics on universe mismatch.
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.n, other.n, "universe size mismatch");
        for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                unequal => return unequal,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{{")?;
        for (k, j) in self.iter().enumerate() {
            if k > 0 {
                write!(out, ", ")?;
            }
            write!(out, "{j}")?;
        }
        write!(out, "}}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, out)
    }
}
